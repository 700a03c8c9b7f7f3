//! Cardinality constraints `|G| = k` and `|G| ≤ k`.
//!
//! The main encoding is a totalizer (a balanced tree whose node outputs hold
//! the unary count of true inputs below it) followed by a comparator fixing
//! the root outputs. A naive subset-enumerating encoding is kept for
//! cross-checking at small sizes.

use thiserror::Error;

use crate::cnf::{ClauseSink, Lit, VariableOrigin};

/// Largest input size accepted by [`naive_cardinality_eq`].
pub const NAIVE_MAX_INPUTS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CardinalityError {
    #[error("naive cardinality encoding limited to {NAIVE_MAX_INPUTS} inputs, got {0}")]
    TooManyInputs(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalizerNode {
    pub id: usize,
    /// Node ids of the two children; `None` for leaves.
    pub children: Option<(usize, usize)>,
    /// Unary count outputs. A leaf's single output is its input literal.
    pub outputs: Vec<Lit>,
}

/// Totalizer tree; nodes are stored in post-order, so the root is last.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Totalizer {
    pub nodes: Vec<TotalizerNode>,
}

impl Totalizer {
    pub fn root(&self) -> Option<&TotalizerNode> {
        self.nodes.last()
    }

    /// Root outputs `s_1..s_n`, sorted true-before-false in any model.
    pub fn outputs(&self) -> &[Lit] {
        self.root().map_or(&[], |r| &r.outputs)
    }
}

/// Builds the totalizer over `inputs`, appending its clauses to `sink`.
///
/// A node over `m` leaves splits them `⌈m/2⌉ / ⌊m/2⌋`, larger half first.
/// `constraint` only tags the variable origins.
pub fn build_totalizer<S: ClauseSink + ?Sized>(
    inputs: &[Lit],
    constraint: usize,
    sink: &mut S,
) -> Totalizer {
    let mut tree = Totalizer::default();
    if !inputs.is_empty() {
        build_node(inputs, constraint, sink, &mut tree);
    }
    tree
}

fn build_node<S: ClauseSink + ?Sized>(
    inputs: &[Lit],
    constraint: usize,
    sink: &mut S,
    tree: &mut Totalizer,
) -> usize {
    if inputs.len() == 1 {
        let id = tree.nodes.len();
        tree.nodes.push(TotalizerNode {
            id,
            children: None,
            outputs: vec![inputs[0]],
        });
        return id;
    }
    let split = inputs.len().div_ceil(2);
    let left = build_node(&inputs[..split], constraint, sink, tree);
    let right = build_node(&inputs[split..], constraint, sink, tree);
    let id = tree.nodes.len();
    let outputs: Vec<Lit> = (1..=inputs.len())
        .map(|position| {
            sink.new_var(VariableOrigin::Totalizer {
                constraint,
                node: id,
                position,
            })
            .pos()
        })
        .collect();
    let c1 = &tree.nodes[left].outputs;
    let c2 = &tree.nodes[right].outputs;
    let (a, b, n) = (c1.len(), c2.len(), outputs.len());
    // C_0 = true and C_{size+1} = false: satisfied clauses are skipped and
    // false literals left out.
    let mut clause = Vec::with_capacity(3);
    for alpha in 0..=a {
        for beta in 0..=b {
            let gamma = alpha + beta;
            if gamma > 0 {
                clause.clear();
                if alpha > 0 {
                    clause.push(!c1[alpha - 1]);
                }
                if beta > 0 {
                    clause.push(!c2[beta - 1]);
                }
                clause.push(outputs[gamma - 1]);
                sink.add_clause(&clause);
            }
            if gamma < n {
                clause.clear();
                if alpha < a {
                    clause.push(c1[alpha]);
                }
                if beta < b {
                    clause.push(c2[beta]);
                }
                clause.push(!outputs[gamma]);
                sink.add_clause(&clause);
            }
        }
    }
    tree.nodes.push(TotalizerNode {
        id,
        children: Some((left, right)),
        outputs,
    });
    id
}

/// Forces exactly `k` of the sorted `outputs` true: `s_1..s_k` positive,
/// `s_{k+1}..s_n` negative, and the empty clause when `k > n`.
pub fn encode_comparator<S: ClauseSink + ?Sized>(outputs: &[Lit], k: usize, sink: &mut S) {
    for (i, s) in outputs.iter().enumerate() {
        if i < k {
            sink.add_clause(&[*s]);
        } else {
            sink.add_clause(&[!*s]);
        }
    }
    if k > outputs.len() {
        sink.add_clause(&[]);
    }
}

/// Forces at most `k` of the sorted `outputs` true.
pub fn encode_comparator_atmost<S: ClauseSink + ?Sized>(outputs: &[Lit], k: usize, sink: &mut S) {
    for s in outputs.iter().skip(k) {
        sink.add_clause(&[!*s]);
    }
}

/// `|inputs| = k` via totalizer and comparator.
pub fn encode_cardinality_eq<S: ClauseSink + ?Sized>(
    inputs: &[Lit],
    k: usize,
    constraint: usize,
    sink: &mut S,
) -> Totalizer {
    let tree = build_totalizer(inputs, constraint, sink);
    encode_comparator(tree.outputs(), k, sink);
    tree
}

/// `|inputs| ≤ k` via totalizer and comparator.
pub fn encode_cardinality_atmost<S: ClauseSink + ?Sized>(
    inputs: &[Lit],
    k: usize,
    constraint: usize,
    sink: &mut S,
) -> Totalizer {
    let tree = build_totalizer(inputs, constraint, sink);
    encode_comparator_atmost(tree.outputs(), k, sink);
    tree
}

/// `|inputs| = k` by enumerating subsets: every `(k+1)`-subset has a false
/// member and every `(n-k+1)`-subset a true one. Emits
/// `C(n, k+1) + C(n, n-k+1)` clauses.
pub fn naive_cardinality_eq<S: ClauseSink + ?Sized>(
    inputs: &[Lit],
    k: usize,
    sink: &mut S,
) -> Result<(), CardinalityError> {
    let n = inputs.len();
    if n > NAIVE_MAX_INPUTS {
        return Err(CardinalityError::TooManyInputs(n));
    }
    for subset in subsets(n, k + 1) {
        let clause: Vec<Lit> = subset.iter().map(|&i| !inputs[i]).collect();
        sink.add_clause(&clause);
    }
    if k > n + 1 {
        sink.add_clause(&[]);
    } else {
        for subset in subsets(n, n + 1 - k) {
            let clause: Vec<Lit> = subset.iter().map(|&i| inputs[i]).collect();
            sink.add_clause(&clause);
        }
    }
    Ok(())
}

/// All `size`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size > n {
        return out;
    }
    let mut current: Vec<usize> = (0..size).collect();
    loop {
        out.push(current.clone());
        let Some(i) = (0..size).rev().find(|&i| current[i] < n - size + i) else {
            return out;
        };
        current[i] += 1;
        for j in i + 1..size {
            current[j] = current[j - 1] + 1;
        }
    }
}
