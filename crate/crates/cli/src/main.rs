//! `setsat`: compile set-constraint models and Social Golfer instances to
//! DIMACS, solve them, and check decoded schedules.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use setsat::report::{reference_configs, size_table, Column, ReportRow, RunReport};
use setsat::sgp::{
    build_direct, decode_schedule, set_model, verify_schedule, Encoding, SgpConfig, SgpVariant,
    Socialization, Symmetry,
};
use setsat::solver::{ExternalSolver, SOLVER_ENV};
use setsat::{
    emit_dimacs, encode_model, format_model, parse_dimacs, parse_model, solve_internal,
    stream_dimacs, unit_propagate, Budget, ClauseSink, CnfFormula, Lit, Model, Reconstruction,
    SimplifyStatus, SolveResult, SolveStatus, Var, VarMap, VariableOrigin,
};

const EXIT_UNSAT: u8 = 20;
const EXIT_USAGE: u8 = 1;
const EXIT_INVALID: u8 = 2;

#[derive(Parser)]
#[command(
    name = "setsat",
    version,
    about = "Finite-set constraints to CNF, with Social Golfer instances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a model file to DIMACS plus a variable map.
    Encode {
        model: PathBuf,
        /// Unit-propagate and emit the residual, with a `.fixed` sidecar.
        #[arg(long)]
        up: bool,
        /// Output base name; defaults to the model path without extension.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a Social Golfer instance and print its report row.
    Sgp {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        up: bool,
        /// Output base name; defaults to `<variant>-<g>-<p>-<w>`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print sizes without writing any file.
        #[arg(long, conflicts_with_all = ["out", "solve"])]
        count_only: bool,
        /// Also solve (`internal` or `cmd:<command>`), decode and verify.
        #[arg(long)]
        solve: Option<String>,
        #[arg(long, default_value_t = 300)]
        timeout: u64,
        /// Print the report row as Markdown.
        #[arg(long)]
        md: bool,
    },
    /// Solve a DIMACS file and write the model.
    Solve {
        cnf: PathBuf,
        /// `internal` or `cmd:<command>`; defaults to $SETSAT_SOLVER, then internal.
        #[arg(long)]
        solver: Option<String>,
        #[arg(long, default_value_t = 300)]
        timeout: u64,
        /// Model file; defaults to the CNF path with a `.model` extension.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Decode a model into a schedule and check it.
    Verify {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        varmap: PathBuf,
        /// Propagation sidecar; required when the model is for a residual.
        #[arg(long)]
        fixed: Option<PathBuf>,
    },
    /// Instance sizes beside the reference counts, with signed deviations.
    Table {
        /// Comma-separated `g-p-w` list; defaults to the fourteen reference instances.
        #[arg(long, value_delimiter = ',')]
        configs: Vec<SgpConfig>,
        #[arg(long, value_delimiter = ',', value_enum)]
        columns: Vec<ColumnArg>,
        #[arg(long)]
        md: bool,
    },
}

#[derive(Args)]
struct InstanceArgs {
    groups: usize,
    group_size: usize,
    weeks: usize,
    #[arg(long, value_enum)]
    encoding: EncodingArg,
    #[arg(long, value_enum, default_value = "none")]
    sb: SymmetryArg,
    #[arg(long, value_enum, default_value = "imp")]
    social: SocialArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodingArg {
    De,
    Tme,
    Sce,
}

#[derive(Clone, Copy, ValueEnum)]
enum SymmetryArg {
    None,
    Tme,
    Constraints,
    Model,
}

#[derive(Clone, Copy, ValueEnum)]
enum SocialArg {
    Imp,
    Card,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColumnArg {
    De,
    Tme,
    TmeSb,
    Sce,
    SceUp,
    Sbm,
    SbmUp,
    Sbc,
    SbcUp,
}

impl From<ColumnArg> for Column {
    fn from(c: ColumnArg) -> Self {
        match c {
            ColumnArg::De => Column::De,
            ColumnArg::Tme => Column::Tme,
            ColumnArg::TmeSb => Column::TmeSb,
            ColumnArg::Sce => Column::Sce,
            ColumnArg::SceUp => Column::SceUp,
            ColumnArg::Sbm => Column::Sbm,
            ColumnArg::SbmUp => Column::SbmUp,
            ColumnArg::Sbc => Column::Sbc,
            ColumnArg::SbcUp => Column::SbcUp,
        }
    }
}

impl InstanceArgs {
    fn config(&self) -> Result<SgpConfig> {
        SgpConfig::new(self.groups, self.group_size, self.weeks).map_err(|e| anyhow!(e.to_string()))
    }

    fn variant(&self) -> Result<SgpVariant> {
        let encoding = match self.encoding {
            EncodingArg::De => Encoding::De,
            EncodingArg::Tme => Encoding::Tme,
            EncodingArg::Sce => Encoding::Sce,
        };
        let symmetry = match self.sb {
            SymmetryArg::None => Symmetry::None,
            SymmetryArg::Tme => Symmetry::TmeSb,
            SymmetryArg::Constraints => Symmetry::Constraints,
            SymmetryArg::Model => Symmetry::Model,
        };
        let social = match self.social {
            SocialArg::Imp => Socialization::Implication,
            SocialArg::Card => Socialization::Cardinality,
        };
        SgpVariant::new(encoding, symmetry, social).map_err(|e| anyhow!(e.to_string()))
    }
}

/// How a command ended, mapped to the exit code.
enum Outcome {
    Done,
    Unsat,
    Invalid,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Unsat) => ExitCode::from(EXIT_UNSAT),
        Ok(Outcome::Invalid) => ExitCode::from(EXIT_INVALID),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Encode { model, up, out } => cmd_encode(&model, up, out),
        Command::Sgp {
            instance,
            up,
            out,
            count_only,
            solve,
            timeout,
            md,
        } => cmd_sgp(
            &instance,
            up,
            out,
            count_only,
            solve.as_deref(),
            timeout,
            md,
        ),
        Command::Solve {
            cnf,
            solver,
            timeout,
            model,
        } => cmd_solve(&cnf, solver.as_deref(), timeout, model),
        Command::Verify {
            instance,
            model,
            varmap,
            fixed,
        } => cmd_verify(&instance, &model, &varmap, fixed.as_deref()),
        Command::Table {
            configs,
            columns,
            md,
        } => cmd_table(configs, columns, md),
    }
}

fn with_ext(base: &Path, ext: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_with(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<()> {
    let mut w = create(path)?;
    f(&mut w).with_context(|| format!("cannot write {}", path.display()))?;
    w.flush()
        .with_context(|| format!("cannot write {}", path.display()))
}

/// Files written for one encoded formula.
struct Emitted {
    formula: CnfFormula,
    reconstruction: Reconstruction,
}

/// Writes `base.cnf`, `base.varmap` and, with `up`, `base.fixed`. Returns the
/// emitted formula and the map back to `formula`.
fn emit(formula: CnfFormula, up: bool, base: &Path) -> Result<Emitted> {
    write_with(&with_ext(base, "varmap"), |w| {
        VarMap::from_formula(&formula, up).write(w)
    })?;
    let (emitted, reconstruction) = if up {
        let s = unit_propagate(&formula);
        write_with(&with_ext(base, "fixed"), |w| s.reconstruction.write(w))?;
        (s.formula, s.reconstruction)
    } else {
        let n = formula.num_vars();
        (formula, Reconstruction::identity(n))
    };
    write_with(&with_ext(base, "cnf"), |w| emit_dimacs(&emitted, w))?;
    Ok(Emitted {
        formula: emitted,
        reconstruction,
    })
}

fn stats_line(formula: &CnfFormula) -> String {
    let s = formula.stats();
    format!(
        "vars={} clauses={} empty={} unit={} binary={} ternary={} longer={}",
        s.variables, s.clauses, s.empty, s.unit, s.binary, s.ternary, s.other
    )
}

fn cmd_encode(path: &Path, up: bool, out: Option<PathBuf>) -> Result<Outcome> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let model = parse_model(&text).with_context(|| path.display().to_string())?;
    let formula = encode_model(&model)?;
    let base = out.unwrap_or_else(|| path.with_extension(""));
    let e = emit(formula, up, &base)?;
    println!("{}", stats_line(&e.formula));
    if e.reconstruction.status() == SimplifyStatus::ProvedUnsat {
        println!("unsat-at-encode");
        return Ok(Outcome::Unsat);
    }
    Ok(Outcome::Done)
}

/// Records variable origins and ignores clauses.
#[derive(Default)]
struct Origins(Vec<VariableOrigin>);

impl ClauseSink for Origins {
    fn new_var(&mut self, origin: VariableOrigin) -> Var {
        self.0.push(origin);
        Var::new(self.0.len() as u32)
    }

    fn add_clause(&mut self, _lits: &[Lit]) {}

    fn num_vars(&self) -> usize {
        self.0.len()
    }
}

fn slug(variant: SgpVariant) -> String {
    let mut s = match variant.encoding {
        Encoding::De => "de",
        Encoding::Tme => "tme",
        Encoding::Sce => "sce",
    }
    .to_string();
    s.push_str(match variant.symmetry {
        Symmetry::None => "",
        Symmetry::TmeSb => "-sb",
        Symmetry::Constraints => "-sbc",
        Symmetry::Model => "-sbm",
    });
    if variant.socialization == Socialization::Cardinality {
        s.push_str("-card");
    }
    s
}

enum SolverChoice {
    Internal,
    External(String),
}

fn solver_choice(arg: Option<&str>) -> Result<SolverChoice> {
    match arg {
        Some("internal") => Ok(SolverChoice::Internal),
        Some(s) => match s.strip_prefix("cmd:") {
            Some(cmd) if !cmd.trim().is_empty() => Ok(SolverChoice::External(cmd.to_string())),
            _ => bail!("solver must be `internal` or `cmd:<command>`, got `{s}`"),
        },
        None => Ok(match std::env::var(SOLVER_ENV) {
            Ok(cmd) if !cmd.trim().is_empty() => SolverChoice::External(cmd),
            _ => SolverChoice::Internal,
        }),
    }
}

fn solve(
    choice: &SolverChoice,
    cnf: &Path,
    formula: &CnfFormula,
    timeout: u64,
) -> Result<SolveResult> {
    match choice {
        SolverChoice::Internal => Ok(solve_internal(formula, Budget::seconds(timeout))),
        SolverChoice::External(cmd) => {
            let solver = ExternalSolver::new(cmd.clone(), Some(Duration::from_secs(timeout)));
            Ok(solver.solve_parsed(cnf, formula)?)
        }
    }
}

fn write_model(path: &Path, r: &SolveResult) -> Result<()> {
    write_with(path, |w| {
        writeln!(
            w,
            "s {}",
            match r.status {
                SolveStatus::Sat => "SATISFIABLE",
                SolveStatus::Unsat => "UNSATISFIABLE",
                SolveStatus::Timeout => "UNKNOWN",
            }
        )?;
        match &r.model {
            Some(m) => m.write(w),
            None => Ok(()),
        }
    })
}

fn cmd_sgp(
    args: &InstanceArgs,
    up: bool,
    out: Option<PathBuf>,
    count_only: bool,
    solve_with: Option<&str>,
    timeout: u64,
    md: bool,
) -> Result<Outcome> {
    let config = args.config()?;
    let variant = args.variant()?;
    let choice = solve_with.map(|s| solver_choice(Some(s))).transpose()?;
    let mut row = ReportRow {
        variant: if up {
            format!("{}_UP", variant.name())
        } else {
            variant.name()
        },
        config,
        vars: 0,
        clauses: 0,
        status: None,
        time: None,
        verdict: None,
    };
    let mut outcome = Outcome::Done;
    let model = set_model(config, variant);
    let base = out.unwrap_or_else(|| {
        PathBuf::from(format!(
            "{}-{}-{}-{}",
            slug(variant),
            config.groups,
            config.group_size,
            config.weeks
        ))
    });

    if count_only {
        let stats = match &model {
            Some(m) if up => unit_propagate(&encode_model(m)?).formula.stats(),
            Some(m) => encode_model(m)?.stats(),
            None if up => {
                let mut f = CnfFormula::new();
                build_direct(config, variant, &mut f);
                unit_propagate(&f).formula.stats()
            }
            None => setsat::sgp::instance_stats(config, variant)?,
        };
        row.vars = stats.variables;
        row.clauses = stats.clauses;
    } else if model.is_none() && !up && choice.is_none() {
        // Direct encodings can be far too large to hold; stream them.
        let mut origins = Origins::default();
        build_direct(config, variant, &mut origins);
        let map = VarMap {
            origins: origins.0,
            simplified: false,
        };
        write_with(&with_ext(&base, "varmap"), |w| map.write(w))?;
        let cnf = with_ext(&base, "cnf");
        let mut w = create(&cnf)?;
        let stats = stream_dimacs(&mut w, |sink| {
            build_direct(config, variant, sink);
        })
        .with_context(|| format!("cannot write {}", cnf.display()))?;
        w.flush()?;
        row.vars = stats.variables;
        row.clauses = stats.clauses;
    } else {
        let formula = match &model {
            Some(m) => {
                write_with(&with_ext(&base, "sets"), |w| {
                    w.write_all(format_model(m).as_bytes())
                })?;
                encode_model(m)?
            }
            None => {
                let mut f = CnfFormula::new();
                build_direct(config, variant, &mut f);
                f
            }
        };
        let origins = formula.origins().to_vec();
        let e = emit(formula, up, &base)?;
        row.vars = e.formula.num_vars();
        row.clauses = e.formula.num_clauses();
        if let Some(choice) = &choice {
            let r = solve(choice, &with_ext(&base, "cnf"), &e.formula, timeout)?;
            write_model(&with_ext(&base, "model"), &r)?;
            row.status = Some(r.status.to_string());
            row.time = Some(r.stats.elapsed);
            match (&r.status, &r.model) {
                (SolveStatus::Sat, Some(m)) => {
                    let full = e.reconstruction.extend_model(m)?;
                    let verdict = match decode_schedule(variant, config, &full, &origins) {
                        Ok(s) => {
                            let v = verify_schedule(config, &s);
                            eprint!("{s}");
                            v.to_string()
                        }
                        Err(err) => format!("INVALID: {err}"),
                    };
                    if !verdict.starts_with("VALID") {
                        outcome = Outcome::Invalid;
                    }
                    row.verdict = Some(verdict);
                }
                (SolveStatus::Unsat, _) => outcome = Outcome::Unsat,
                _ => {}
            }
        } else if e.reconstruction.status() == SimplifyStatus::ProvedUnsat {
            row.status = Some("UNSAT".into());
            outcome = Outcome::Unsat;
        }
    }

    let report = RunReport { rows: vec![row] };
    if md {
        print!("{}", report.to_markdown());
    } else {
        print!("{}", report.to_tsv(false));
    }
    Ok(outcome)
}

fn cmd_solve(
    cnf: &Path,
    solver: Option<&str>,
    timeout: u64,
    model: Option<PathBuf>,
) -> Result<Outcome> {
    let choice = solver_choice(solver)?;
    let file = File::open(cnf).with_context(|| format!("cannot read {}", cnf.display()))?;
    let formula = parse_dimacs(BufReader::new(file)).with_context(|| cnf.display().to_string())?;
    let r = solve(&choice, cnf, &formula, timeout)?;
    let path = model.unwrap_or_else(|| cnf.with_extension("model"));
    write_model(&path, &r)?;
    println!("{}", r.status);
    let s = &r.stats;
    eprintln!(
        "c time={:.3}s decisions={} propagations={} conflicts={} restarts={}",
        s.elapsed.as_secs_f64(),
        s.decisions,
        s.propagations,
        s.conflicts,
        s.restarts
    );
    Ok(match r.status {
        SolveStatus::Unsat => Outcome::Unsat,
        // A timeout is "unknown", exit code 0 as in the DIMACS convention.
        _ => Outcome::Done,
    })
}

fn cmd_verify(
    args: &InstanceArgs,
    model: &Path,
    varmap: &Path,
    fixed: Option<&Path>,
) -> Result<Outcome> {
    let config = args.config()?;
    let variant = args.variant()?;
    let map = VarMap::read(BufReader::new(
        File::open(varmap).with_context(|| format!("cannot read {}", varmap.display()))?,
    ))
    .with_context(|| varmap.display().to_string())?;
    let reconstruction = match fixed {
        Some(p) => Reconstruction::read(BufReader::new(
            File::open(p).with_context(|| format!("cannot read {}", p.display()))?,
        ))
        .with_context(|| p.display().to_string())?,
        None if map.simplified => {
            bail!(
                "{} describes a unit-propagated run; pass its --fixed file",
                varmap.display()
            )
        }
        None => Reconstruction::identity(map.origins.len()),
    };
    if reconstruction.original_vars() != map.origins.len() {
        bail!(
            "variable map has {} variables, fixed file expects {}",
            map.origins.len(),
            reconstruction.original_vars()
        );
    }
    let text =
        fs::read_to_string(model).with_context(|| format!("cannot read {}", model.display()))?;
    if text.lines().any(|l| l.trim() == "s UNSATISFIABLE") {
        bail!("{} holds no model (UNSATISFIABLE)", model.display());
    }
    let residual = Model::read(&text, reconstruction.residual_vars())
        .with_context(|| model.display().to_string())?;
    let full = reconstruction.extend_model(&residual)?;
    let schedule = match decode_schedule(variant, config, &full, &map.origins) {
        Ok(s) => s,
        Err(e) => {
            println!("INVALID: {e}");
            return Ok(Outcome::Invalid);
        }
    };
    let verdict = verify_schedule(config, &schedule);
    println!("{verdict}");
    if !verdict.is_valid() {
        return Ok(Outcome::Invalid);
    }
    print!("{schedule}");
    Ok(Outcome::Done)
}

fn cmd_table(configs: Vec<SgpConfig>, columns: Vec<ColumnArg>, md: bool) -> Result<Outcome> {
    let configs = if configs.is_empty() {
        reference_configs()
    } else {
        configs
    };
    let columns: Vec<Column> = if columns.is_empty() {
        Column::ALL.to_vec()
    } else {
        columns.into_iter().map(Column::from).collect()
    };
    let table = size_table(&configs, &columns)?;
    if md {
        print!("{}", table.to_markdown());
    } else {
        print!("{}", table.to_tsv());
    }
    Ok(Outcome::Done)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_names() {
        assert_eq!(slug(SgpVariant::TME_SB), "tme-sb");
        let card =
            SgpVariant::new(Encoding::Sce, Symmetry::Model, Socialization::Cardinality).unwrap();
        assert_eq!(slug(card), "sce-sbm-card");
        assert_eq!(
            with_ext(Path::new("out/run.v1"), "cnf"),
            PathBuf::from("out/run.v1.cnf")
        );
    }

    #[test]
    fn solver_arguments() {
        assert!(matches!(
            solver_choice(Some("internal")),
            Ok(SolverChoice::Internal)
        ));
        match solver_choice(Some("cmd:kissat -q")) {
            Ok(SolverChoice::External(c)) => assert_eq!(c, "kissat -q"),
            _ => panic!("external expected"),
        }
        assert!(solver_choice(Some("cmd:")).is_err());
        assert!(solver_choice(Some("minisat")).is_err());
    }

    #[test]
    fn origins_sink_numbers_from_one() {
        let mut o = Origins::default();
        assert_eq!(o.new_var(VariableOrigin::Anonymous), Var::new(1));
        assert_eq!(o.new_var(VariableOrigin::Anonymous), Var::new(2));
        assert_eq!(o.num_vars(), 2);
    }
}
