mod input;
mod output;

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lieflow::catalog::{self, all_entries, cross_check_with, get_entry, CrossCheckReport, DEFAULT_SEED};
use lieflow::config::ToleranceConfig;
use lieflow::dersolve::{derivation_space, inner_derivation, leibniz_residual};
use lieflow::flowsim::{
    expm, flow_period_residual, orbit, orbit_period_residual, represent, time_grid, verify_verdict, write_orbit_csv,
    EvidenceOutcome, FlowSample, OrbitKind,
};
use lieflow::liealg::{AlgebraVector, StructureConstants};
use lieflow::matrix::QMatrix;
use lieflow::periodicity::{classify_invariant_flow, classify_linear_flow, Classification, PeriodicityError};
use lieflow::rational::{format_rational, Rational};
use lieflow::spectral::spectrum;
use nalgebra::DMatrix;
use serde_json::{json, Value};

const EXIT_FAIL: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_REFUSED: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "lieflow", version, about = "Periodic orbits of linear and invariant flows on Lie groups")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, env = "LIEFLOW_FORMAT", default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    tol: TolArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct TolArgs {
    /// Accepted error of a rational approximation to a frequency ratio.
    #[arg(long, global = true)]
    tol_ratio: Option<f64>,
    /// Relative threshold for numeric ranks.
    #[arg(long, global = true)]
    tol_rank: Option<f64>,
    /// Largest closure residual accepted at a period.
    #[arg(long, global = true)]
    tol_period: Option<f64>,
    /// Smallest residual counted as evidence of non-closure.
    #[arg(long, global = true)]
    tol_separation: Option<f64>,
    /// Largest denominator for frequency ratios.
    #[arg(long, global = true)]
    max_denominator: Option<u64>,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a linear or invariant flow has periodic orbits.
    Classify {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        field: FieldArgs,
        /// Classify the invariant flow exp(tX) instead of the linear flow of -ad(x).
        #[arg(long, requires = "inner")]
        invariant: bool,
    },
    /// Basis of the derivation algebra.
    Derivations {
        #[command(flatten)]
        algebra: AlgebraArgs,
    },
    /// Built-in algebras and their stated formulas.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Check a period or a verdict numerically.
    Simulate {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        field: FieldArgs,
        /// Candidate period: a number, or a multiple of pi such as `pi/2` or `2pi`.
        #[arg(long)]
        check_period: Option<String>,
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Also follow a group orbit in the matrix representation.
        #[arg(long, value_enum, requires = "inner")]
        orbit: Option<OrbitArg>,
        /// Initial group element, row-major.
        #[arg(long, allow_hyphen_values = true, requires = "orbit")]
        g0: Option<String>,
        /// Write the sampled flow or orbit as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    /// Print an entry in the algebra file format.
    Export {
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        param: Option<String>,
    },
    /// Compare stated brackets, patterns, eigenvalues and propositions with recomputation.
    CrossCheck {
        #[arg(default_value = "all")]
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        param: Option<String>,
    },
    /// Classify sampled derivations of every entry against its periodicity claim.
    VerdictTable,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrbitArg {
    Conjugation,
    Invariant,
}

#[derive(Args)]
struct AlgebraArgs {
    /// Built-in algebra name (see `catalog list`).
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    catalog: Option<String>,
    /// Parameter of a one-parameter family.
    #[arg(long, allow_hyphen_values = true, requires = "catalog")]
    param: Option<String>,
    /// Algebra file in JSON.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct FieldArgs {
    /// Derivation matrix, row-major, entries as p/q.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "inner", required_unless_present = "inner")]
    matrix: Option<String>,
    /// Coordinates of x; the derivation is -ad(x).
    #[arg(long, allow_hyphen_values = true)]
    inner: Option<String>,
}

/// A document to print and the exit status that goes with it.
struct Report {
    doc: Value,
    code: u8,
}

impl Report {
    fn ok(doc: Value) -> Self {
        Self { doc, code: 0 }
    }
}

struct Algebra {
    name: String,
    param: Option<Rational>,
    structure: StructureConstants,
    representation: Option<Vec<QMatrix>>,
}

impl Algebra {
    fn describe(&self) -> Value {
        json!({
            "name": self.name,
            "param": self.param.as_ref().map(output::rational),
            "dim": self.structure.dim(),
            "basis": self.structure.labels(),
        })
    }
}

fn param(text: Option<&str>) -> Result<Option<Rational>> {
    text.map(input::rational).transpose()
}

fn load(args: &AlgebraArgs) -> Result<Algebra> {
    if let Some(name) = &args.catalog {
        let e = get_entry(name, param(args.param.as_deref())?)?;
        return Ok(Algebra {
            name: e.name.to_string(),
            param: e.param,
            structure: e.structure,
            representation: e.representation,
        });
    }
    let path = args.file.as_ref().ok_or_else(|| anyhow!("give --catalog or --file"))?;
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let structure = StructureConstants::from_json(&text).with_context(|| format!("in {}", path.display()))?;
    Ok(Algebra { name: path.display().to_string(), param: None, structure, representation: None })
}

/// Refuses algebras whose bracket violates the Jacobi identity.
fn jacobi_gate(alg: &Algebra) -> Option<Report> {
    let v = alg.structure.validate();
    if v.jacobi_ok {
        return None;
    }
    let labels = alg.structure.labels();
    Some(Report {
        doc: json!({
            "error": "JacobiFailure",
            "algebra": alg.describe(),
            "worst_triple": v.worst_triple.map(|(i, j, k)| [&labels[i], &labels[j], &labels[k]]),
            "residual": output::rational(&v.residual),
        }),
        code: EXIT_INVALID,
    })
}

fn tolerances(t: &TolArgs) -> Result<ToleranceConfig> {
    let mut cfg = ToleranceConfig::default();
    if let Some(v) = t.tol_ratio {
        cfg.ratio_eps = v;
    }
    if let Some(v) = t.tol_rank {
        cfg.rank_tol = v;
    }
    if let Some(v) = t.tol_period {
        cfg.period_tol = v;
    }
    if let Some(v) = t.tol_separation {
        cfg.separation = v;
    }
    if let Some(v) = t.max_denominator {
        cfg.max_denominator = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

enum Field {
    Matrix(QMatrix),
    Inner(AlgebraVector),
}

fn field(args: &FieldArgs, n: usize) -> Result<Field> {
    match (&args.matrix, &args.inner) {
        (Some(m), _) => Ok(Field::Matrix(input::square_matrix(m, n)?)),
        (None, Some(x)) => Ok(Field::Inner(AlgebraVector(input::vector(x, n)?))),
        (None, None) => bail!("give --matrix or --inner"),
    }
}

fn derivation_of(alg: &Algebra, f: &Field) -> Result<QMatrix> {
    Ok(match f {
        Field::Matrix(m) => m.clone(),
        Field::Inner(x) => inner_derivation(&alg.structure, x)?.into_matrix(),
    })
}

/// Maps classifier refusals to their exit codes.
fn refusal(alg: &Algebra, err: PeriodicityError) -> Result<Report> {
    let labels = alg.structure.labels();
    match err {
        PeriodicityError::NotADerivation { residual, pair } => Ok(Report {
            doc: json!({
                "error": "NotADerivation",
                "algebra": alg.describe(),
                "residual": residual,
                "worst_pair": pair.map(|(i, j)| [&labels[i], &labels[j]]),
            }),
            code: EXIT_INVALID,
        }),
        PeriodicityError::IllConditioned { resolution } => Ok(Report {
            doc: json!({"error": "IllConditioned", "algebra": alg.describe(), "resolution": resolution, "message": err.to_string()}),
            code: EXIT_REFUSED,
        }),
        PeriodicityError::PeriodTooLarge { .. } => Ok(Report {
            doc: json!({"error": "PeriodTooLarge", "algebra": alg.describe(), "message": err.to_string()}),
            code: EXIT_REFUSED,
        }),
        other => Err(other.into()),
    }
}

fn classification_doc(c: &Classification) -> Result<Value> {
    Ok(serde_json::to_value(c.to_document())?)
}

fn cmd_classify(alg_args: &AlgebraArgs, field_args: &FieldArgs, invariant: bool, cfg: &ToleranceConfig) -> Result<Report> {
    let alg = load(alg_args)?;
    if let Some(r) = jacobi_gate(&alg) {
        return Ok(r);
    }
    let f = field(field_args, alg.structure.dim())?;
    let d = derivation_of(&alg, &f)?;
    let result = match (&f, invariant) {
        (Field::Inner(x), true) => classify_invariant_flow(&alg.structure, x, cfg),
        _ => classify_linear_flow(&alg.structure, &d, cfg),
    };
    let c = match result {
        Ok(c) => c,
        Err(e) => return refusal(&alg, e),
    };
    let mut doc = json!({
        "algebra": alg.describe(),
        "flow": if invariant { "invariant" } else { "linear" },
        "derivation": output::matrix(&d),
        "spectrum": output::spectrum(&spectrum(&d, cfg.rank_tol)?),
        "verdict": classification_doc(&c)?,
    });
    if let Field::Inner(x) = &f {
        doc["x"] = Value::Array(x.0.iter().map(output::rational).collect());
    }
    Ok(Report::ok(doc))
}

fn cmd_derivations(alg_args: &AlgebraArgs) -> Result<Report> {
    let alg = load(alg_args)?;
    if let Some(r) = jacobi_gate(&alg) {
        return Ok(r);
    }
    let space = derivation_space(&alg.structure);
    Ok(Report::ok(json!({
        "algebra": alg.describe(),
        "dimension": space.dim(),
        "pattern": catalog::general_element(&space).to_string(),
        "basis": space.basis().iter().map(output::matrix).collect::<Vec<_>>(),
    })))
}

fn cross_check_doc(r: &CrossCheckReport) -> Result<Value> {
    Ok(serde_json::to_value(r)?)
}

fn cmd_catalog(action: &CatalogAction, cfg: &ToleranceConfig, seed: u64) -> Result<Report> {
    match action {
        CatalogAction::List => {
            let entries: Vec<Value> = all_entries()
                .iter()
                .map(|e| {
                    json!({
                        "name": e.name,
                        "type": e.algebra_type,
                        "group": e.group,
                        "param": e.param.as_ref().map(output::rational),
                        "dim": e.dim(),
                        "derivation_dim": e.derivation_space().dim(),
                        "representation": e.representation.is_some(),
                    })
                })
                .collect();
            Ok(Report::ok(json!({ "entries": entries })))
        }
        CatalogAction::Export { name, param: p } => {
            let e = get_entry(name, param(p.as_deref())?)?;
            Ok(Report::ok(serde_json::to_value(e.structure.to_file())?))
        }
        CatalogAction::CrossCheck { name, param: p } => {
            let entries = if name == "all" {
                if p.is_some() {
                    bail!("--param needs a single entry name");
                }
                all_entries()
            } else {
                vec![get_entry(name, param(p.as_deref())?)?]
            };
            let reports: Vec<CrossCheckReport> = entries.iter().map(|e| cross_check_with(e, seed, cfg)).collect();
            let flagged: Vec<Value> = reports
                .iter()
                .flat_map(|r| r.locations().into_iter().map(move |l| json!([r.entry, l])))
                .collect();
            Ok(Report::ok(json!({
                "reports": reports.iter().map(cross_check_doc).collect::<Result<Vec<_>>>()?,
                "flagged": flagged,
            })))
        }
        CatalogAction::VerdictTable => {
            let rows = catalog::verdict_table_with(seed, cfg)?;
            let mut mismatches = 0;
            let docs: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let exact_ok = r.verdict.is_periodic() == r.exact_periodic;
                    mismatches += usize::from(!exact_ok);
                    json!({
                        "entry": r.entry,
                        "param": r.param.as_ref().map(output::rational),
                        "derivation": output::matrix(&r.derivation),
                        "verdict": r.verdict.tag(),
                        "period": r.verdict.period().map(|p| p.value),
                        "stated_periodic": r.stated_periodic,
                        "reading_periodic": r.reading_periodic,
                        "exact_periodic": r.exact_periodic,
                        "agrees_with_reading": r.agrees(),
                        "agrees_with_exact": exact_ok,
                    })
                })
                .collect();
            let disagreements = rows.iter().filter(|r| !r.agrees()).count();
            Ok(Report {
                doc: json!({
                    "rows": docs,
                    "row_count": rows.len(),
                    "reading_disagreements": disagreements,
                    "exact_disagreements": mismatches,
                }),
                code: if mismatches == 0 { 0 } else { EXIT_FAIL },
            })
        }
    }
}

fn float_matrix(text: &str, n: usize) -> Result<DMatrix<f64>> {
    Ok(input::square_matrix(text, n)?.to_f64())
}

/// `exp(x̂)` for a fixed generic `x`, so that conjugation orbits are not trivially constant.
fn default_g0(rep: &[DMatrix<f64>]) -> Result<DMatrix<f64>> {
    let x: Vec<f64> = (0..rep.len()).map(|i| 1.0 / (i as f64 + 2.0)).collect();
    Ok(expm(&represent(rep, &x)?, 1.0)?)
}

struct SimulateArgs<'a> {
    check_period: Option<&'a str>,
    horizon: Option<f64>,
    samples: Option<usize>,
    orbit: Option<OrbitArg>,
    g0: Option<&'a str>,
    csv: Option<&'a PathBuf>,
}

fn cmd_simulate(alg_args: &AlgebraArgs, field_args: &FieldArgs, s: SimulateArgs<'_>, cfg: &ToleranceConfig) -> Result<Report> {
    let alg = load(alg_args)?;
    if let Some(r) = jacobi_gate(&alg) {
        return Ok(r);
    }
    let mut cfg = cfg.clone();
    cfg.horizon = s.horizon;
    if let Some(n) = s.samples {
        cfg.samples = n;
    }
    cfg.validate()?;
    let f = field(field_args, alg.structure.dim())?;
    let d = derivation_of(&alg, &f)?;
    let leibniz = leibniz_residual(&alg.structure, &d)?;
    if !leibniz.is_derivation() {
        return refusal(&alg, PeriodicityError::NotADerivation { residual: format_rational(&leibniz.residual), pair: leibniz.worst_pair });
    }
    let df = d.to_f64();
    let mut doc = json!({ "algebra": alg.describe(), "derivation": output::matrix(&d) });
    let mut notes: Vec<String> = Vec::new();

    let (passed, tested_period) = match s.check_period {
        Some(text) => {
            let t = input::period(text)?;
            let horizon = cfg.horizon.unwrap_or(4.0 * t);
            let r = flow_period_residual(&df, t, horizon, cfg.samples)?;
            let pass = r.max_residual <= cfg.period_tol;
            doc["check"] = json!({
                "period": t,
                "period_text": text,
                "residual": output::residual(&r),
                "tolerance": cfg.period_tol,
            });
            (pass, Some(t))
        }
        None => {
            let c = match classify_linear_flow(&alg.structure, &d, &cfg) {
                Ok(c) => c,
                Err(e) => return refusal(&alg, e),
            };
            let ev = verify_verdict(&df, &c.verdict, &cfg)?;
            doc["verdict"] = classification_doc(&c)?;
            doc["evidence"] = output::evidence(&ev);
            if ev.outcome == EvidenceOutcome::Inconclusive {
                notes.push("numerical evidence is inconclusive".into());
            }
            (ev.outcome != EvidenceOutcome::Fail, c.verdict.period().map(|p| p.value))
        }
    };
    let mut passed = passed;

    let horizon = cfg.horizon.unwrap_or_else(|| tested_period.map_or(lieflow::config::DEFAULT_EVIDENCE_HORIZON, |t| 4.0 * t));
    let ts = time_grid(horizon, cfg.samples.max(2));
    let mut samples: Vec<FlowSample> = Vec::new();
    match (s.orbit, &f, &alg.representation) {
        (Some(kind), Field::Inner(x), Some(rep)) => {
            let rep: Vec<DMatrix<f64>> = rep.iter().map(QMatrix::to_f64).collect();
            let k = rep[0].nrows();
            let g0 = match s.g0 {
                Some(text) => float_matrix(text, k)?,
                None => default_g0(&rep)?,
            };
            let kind = match kind {
                OrbitArg::Conjugation => OrbitKind::Conjugation,
                OrbitArg::Invariant => OrbitKind::Invariant,
            };
            let xf: Vec<f64> = x.0.iter().map(lieflow::rational::to_f64).collect();
            let mut orbit_doc = json!({
                "kind": match kind { OrbitKind::Conjugation => "conjugation", OrbitKind::Invariant => "invariant" },
                "g0": g0.row_iter().map(|r| r.iter().copied().collect::<Vec<f64>>()).collect::<Vec<_>>(),
            });
            if let Some(t) = tested_period {
                let r = orbit_period_residual(kind, &rep, &xf, &g0, t, horizon, cfg.samples.max(2))?;
                let closes = r.max_residual <= cfg.period_tol;
                orbit_doc["residual"] = output::residual(&r);
                orbit_doc["closes"] = json!(closes);
                if s.check_period.is_some() {
                    passed &= closes;
                }
            }
            doc["orbit"] = orbit_doc;
            if s.csv.is_some() {
                samples = orbit(kind, &rep, &xf, &g0, &ts)?;
            }
        }
        (Some(_), _, None) => notes.push("no matrix representation for this algebra; simulated on the algebra only".into()),
        _ => {}
    }

    if let Some(path) = s.csv {
        if samples.is_empty() {
            samples = ts.iter().map(|&t| Ok(FlowSample { t, matrix: expm(&df, t)? })).collect::<Result<_>>()?;
        }
        let file = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
        write_orbit_csv(&samples, BufWriter::new(file))?;
        doc["csv"] = json!(path.display().to_string());
    }
    doc["outcome"] = json!(if passed { "pass" } else { "fail" });
    doc["notes"] = json!(notes);
    Ok(Report { doc, code: if passed { 0 } else { EXIT_FAIL } })
}

fn run(cli: &Cli) -> Result<Report> {
    let cfg = tolerances(&cli.tol)?;
    let seed = cli.tol.seed.unwrap_or(DEFAULT_SEED);
    match &cli.command {
        Command::Classify { algebra, field, invariant } => cmd_classify(algebra, field, *invariant, &cfg),
        Command::Derivations { algebra } => cmd_derivations(algebra),
        Command::Catalog { action } => cmd_catalog(action, &cfg, seed),
        Command::Simulate { algebra, field, check_period, horizon, samples, orbit, g0, csv } => cmd_simulate(
            algebra,
            field,
            SimulateArgs {
                check_period: check_period.as_deref(),
                horizon: *horizon,
                samples: *samples,
                orbit: *orbit,
                g0: g0.as_deref(),
                csv: csv.as_ref(),
            },
            &cfg,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.doc).expect("document serializes")),
                Format::Text => print!("{}", output::text(&report.doc)),
            }
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
