//! Finite-set constraint models compiled to CNF.
//!
//! A model declares a universe of elements, set variables with explicit
//! supports and constraints between them. [`encoder::encode_model`] turns it
//! into a [`CnfFormula`] with one support variable per (set, element) pair.
//! The [`sgp`] module builds Social Golfer instances in several encodings.

pub mod cardinality;
pub mod cnf;
pub mod encoder;
pub mod model;
pub mod parser;
pub mod report;
pub mod sgp;
pub mod simplify;
pub mod solver;

pub use cnf::{
    emit_dimacs, parse_dimacs, stream_dimacs, ClauseCounter, ClauseSink, CnfFormula, EncodingStats,
    Lit, Var, VarMap, VariableOrigin,
};
pub use encoder::{encode_model, EncodeError};
pub use model::{Constraint, ElementId, ModelError, ProblemModel, SetId, Universe};
pub use parser::{format_model, parse_model, ParseError};
pub use simplify::{unit_propagate, Reconstruction, Simplification, SimplifyStatus};
pub use solver::{check_model, solve_internal, Budget, Model, SolveResult, SolveStatus};
