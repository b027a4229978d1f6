//! `circle-rep`: batch front-end for classifying representations.
//!
//! Every subcommand reads JSON files and writes one JSON report to stdout or
//! `--out`. Exit status 0 means success, 1 a domain failure (the report then
//! carries a witness), 2 unreadable or malformed input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use circle_rep::classifier::{classify, compare_presentations, layer_normalize, minimal_measure};
use circle_rep::io::{
    parse_presentation, ClassificationDoc, ComparisonDoc, DiagonalizationDoc, IntegralityDoc, MatrixDoc, MeasureDoc,
    OperatorDoc, UnitaryFamilyDoc, ValidationDoc, WeightsDoc,
};
use circle_rep::spectral::{self, check_family, extract_weights, simultaneous_diagonalize};
use circle_rep::{Error, ExactPresentation, HomomorphismMatrix, Rational, Tolerances64, UnitaryFamily64, WeightMultiset};
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "circle-rep", version, about = "Classify representations of circle-valued function groups")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Canonical presentation of a weight multiset.
    Classify(ClassifyArgs),
    /// Turn a list of measures into a layer chain.
    NormalizeChain {
        /// JSON array of measures on one space.
        #[arg(long)]
        measures: PathBuf,
    },
    /// Check the presentation conditions, optionally against a base measure.
    CheckPresentation {
        presentation: PathBuf,
        #[arg(long)]
        base: Option<PathBuf>,
    },
    /// Decide whether two presentations are equivalent.
    Compare { first: PathBuf, second: PathBuf },
    /// Smallest base measure admitted by a presentation.
    MinimalMeasure { presentation: PathBuf },
    /// Collapse an operator and test integrality.
    KwapienCollapse { operator: PathBuf },
    /// Jointly diagonalize a commuting unitary family.
    Diagonalize {
        family: PathBuf,
        #[command(flatten)]
        numeric: NumericArgs,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Weight multiset file.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Homomorphism matrix or integral operator; requires `--nu`.
    #[arg(long, requires = "nu")]
    from_homomorphism: Option<PathBuf>,
    /// Commuting unitary family with its sampling header.
    #[arg(long)]
    from_unitaries: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[command(flatten)]
    source: Source,
    /// Measure on the codomain of the homomorphism.
    #[arg(long)]
    nu: Option<PathBuf>,
    #[command(flatten)]
    numeric: NumericArgs,
}

#[derive(Debug, Args)]
struct NumericArgs {
    /// Seed for the random combination used to split eigenspaces.
    #[arg(long, default_value_t = spectral::DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    unitarity_tol: Option<f64>,
    #[arg(long)]
    commutation_tol: Option<f64>,
    #[arg(long)]
    cluster_tol: Option<f64>,
    #[arg(long)]
    rounding_tol: Option<f64>,
}

impl NumericArgs {
    fn tolerances(&self, dim: usize) -> Tolerances64 {
        let mut cfg = Tolerances64::for_dim(dim);
        cfg.unitarity_tol = self.unitarity_tol.unwrap_or(cfg.unitarity_tol);
        cfg.commutation_tol = self.commutation_tol.unwrap_or(cfg.commutation_tol);
        cfg.cluster_tol = self.cluster_tol.unwrap_or(cfg.cluster_tol);
        cfg.rounding_tol = self.rounding_tol.unwrap_or(cfg.rounding_tol);
        cfg
    }
}

/// Why a command did not produce a success report.
enum Failure {
    /// Mathematical precondition failed; the value is the report to emit.
    Domain(Value),
    /// Unreadable or malformed input.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_domain() {
            Failure::Domain(error_object(&e))
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = Result<Value, Failure>;

fn error_object(e: &Error) -> Value {
    let (kind, witness) = match e {
        Error::SpaceMismatch => ("space_mismatch", Value::Null),
        Error::ArityMismatch { expected, found } => ("arity_mismatch", json!({"expected": expected, "found": found})),
        Error::CoordinateOutOfRange { index, arity } => ("coordinate_out_of_range", json!({"index": index, "arity": arity})),
        Error::LengthMismatch { left, right } => ("length_mismatch", json!({"left": left, "right": right})),
        Error::NonPositiveWeight => ("non_positive_weight", Value::Null),
        Error::MapUndefined(atom) => ("map_undefined", json!({"atom": atom})),
        Error::InvalidSignature(s) => ("invalid_signature", json!({"detail": s})),
        Error::RepeatedPoint { atom } => ("repeated_point", json!({"atom": atom})),
        Error::InvalidPresentation(_) => ("invalid_presentation", Value::Null),
        Error::NonIntegral(w) => ("non_integral", json!({"y": w.y, "x": w.x, "value": w.value})),
        Error::DimensionMismatch(s) => ("dimension_mismatch", json!({"detail": s})),
        Error::FamilyCheck { unitarity, commutation } => {
            ("family_check", json!({"unitarity_residual": unitarity, "commutation_residual": commutation}))
        }
        Error::Diagonalization { worst_residual } => ("diagonalization", json!({"worst_residual": worst_residual})),
        Error::WeightOutOfBound { point, weight, bound } => {
            ("weight_out_of_bound", json!({"point": point, "weight": weight, "bound": bound}))
        }
        Error::RoundingResidual { point, residual, limit } => {
            ("rounding_residual", json!({"point": point, "residual": residual, "limit": limit}))
        }
        Error::InvalidSampling { q, bound } => ("invalid_sampling", json!({"q": q, "B": bound})),
        Error::DepthMismatch { from, to } => ("depth_mismatch", json!({"from": from, "to": to})),
        Error::InvalidTolerance(s) => ("invalid_tolerance", json!({"detail": s})),
        Error::UnknownPoint(_) | Error::DuplicatePoint(_) | Error::Parse(_) => ("parse", Value::Null),
    };
    json!({"error": kind, "message": e.to_string(), "witness": witness})
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_presentation(path: &Path) -> Result<ExactPresentation, Failure> {
    parse_presentation(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(doc: &T) -> Value {
    serde_json::to_value(doc).expect("report documents serialize")
}

/// Invalid presentations are reported with their full violation list.
fn require_valid(p: &ExactPresentation) -> Result<(), Failure> {
    let report = p.validate();
    if report.is_valid() {
        return Ok(());
    }
    let doc = ValidationDoc::from_report(p, &report);
    let first = doc.violations.first().cloned();
    Err(Failure::Domain(json!({
        "error": "invalid_presentation",
        "message": format!("{} violation(s)", doc.violations.len()),
        "witness": first,
        "validation": doc,
    })))
}

fn classify_weights(w: &WeightMultiset) -> Value {
    to_value(&ClassificationDoc::from_result(&classify::<Rational>(w)))
}

fn recover(family: &UnitaryFamily64, numeric: &NumericArgs) -> Result<(DiagonalizationDoc, WeightMultiset), Failure> {
    let cfg = numeric.tolerances(family.dim());
    let checked = check_family(family, &cfg);
    let diag = simultaneous_diagonalize(family, &cfg, numeric.seed)?;
    let weights = extract_weights(&diag.phases, family.space(), family.q(), family.bound(), &cfg)?;
    let doc = DiagonalizationDoc::new(
        family,
        &diag,
        checked.unitarity_residual,
        checked.commutation_residual,
        Some(&weights),
    );
    Ok((doc, weights))
}

/// A matrix file is used as is; an operator file must collapse integrally.
fn load_homomorphism(path: &Path) -> Result<HomomorphismMatrix, Failure> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if value.get("rows").is_some() {
        let doc: MatrixDoc =
            serde_json::from_value(value).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        return Ok(doc.to_matrix()?);
    }
    let doc: OperatorDoc =
        serde_json::from_value(value).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let op = doc.to_operator()?;
    let report = op.integrality_check();
    if !report.is_integral() {
        let doc = IntegralityDoc::from_report(&op, &report);
        return Err(Failure::Domain(json!({
            "error": "non_integral",
            "message": "operator does not collapse to an integer matrix",
            "witness": doc.witness,
            "integrality": doc,
        })));
    }
    Ok(op.to_homomorphism()?)
}

fn run(command: &Command) -> Outcome {
    match command {
        Command::Classify(args) => {
            let src = &args.source;
            if let Some(path) = &src.weights {
                let doc: WeightsDoc = load(path)?;
                let w = doc.to_multiset()?;
                Ok(classify_weights(&w))
            } else if let Some(path) = &src.from_homomorphism {
                let k = load_homomorphism(path)?;
                let nu_path = args.nu.as_ref().expect("clap enforces --nu");
                let nu: MeasureDoc = load(nu_path)?;
                let nu = nu.to_measure_on(k.codomain())?;
                Ok(classify_weights(&k.induced_weights(&nu)?))
            } else {
                let path = src.from_unitaries.as_ref().expect("clap enforces one source");
                let doc: UnitaryFamilyDoc = load(path)?;
                let family = doc.to_family()?;
                let (_, w) = recover(&family, &args.numeric)?;
                Ok(classify_weights(&w))
            }
        }
        Command::NormalizeChain { measures } => {
            let docs: Vec<MeasureDoc> = load(measures)?;
            let Some(first) = docs.first() else {
                return Ok(json!([]));
            };
            let space = first.to_measure()?.space().clone();
            let list = docs.iter().map(|d| d.to_measure_on(&space)).collect::<circle_rep::Result<Vec<_>>>()?;
            let chain = layer_normalize(&list)?;
            Ok(to_value(&chain.iter().map(MeasureDoc::from_measure).collect::<Vec<_>>()))
        }
        Command::CheckPresentation { presentation, base } => {
            let mut p = load_presentation(presentation)?;
            if let Some(path) = base {
                let doc: MeasureDoc = load(path)?;
                let nu = doc.to_measure_on(p.space())?;
                p.set_base(Some(nu))?;
            }
            let report = p.validate();
            let doc = ValidationDoc::from_report(&p, &report);
            if report.is_valid() {
                Ok(to_value(&doc))
            } else {
                let mut value = to_value(&doc);
                value["witness"] = to_value(&doc.violations[0]);
                Err(Failure::Domain(value))
            }
        }
        Command::Compare { first, second } => {
            let p = load_presentation(first)?;
            let q = load_presentation(second)?;
            require_valid(&p)?;
            require_valid(&q)?;
            let c = compare_presentations(&p, &q)?;
            Ok(to_value(&ComparisonDoc::from_comparison(&p, &c)))
        }
        Command::MinimalMeasure { presentation } => {
            let p = load_presentation(presentation)?;
            require_valid(&p)?;
            Ok(to_value(&MeasureDoc::from_measure(&minimal_measure(&p)?)))
        }
        Command::KwapienCollapse { operator } => {
            let doc: OperatorDoc = load(operator)?;
            let op = doc.to_operator()?;
            let report = op.integrality_check();
            let doc = IntegralityDoc::from_report(&op, &report);
            if report.is_integral() {
                Ok(to_value(&doc))
            } else {
                Err(Failure::Domain(to_value(&doc)))
            }
        }
        Command::Diagonalize { family, numeric } => {
            let doc: UnitaryFamilyDoc = load(family)?;
            let family = doc.to_family()?;
            let (doc, _) = recover(&family, numeric)?;
            Ok(to_value(&doc))
        }
    }
}

fn emit(report: &Value, out: Option<&Path>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(report).expect("JSON values serialize") + "\n";
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, status) = match run(&cli.command) {
        Ok(report) => (report, 0),
        Err(Failure::Domain(report)) => (report, 1),
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    match emit(&report, cli.out.as_deref()) {
        Ok(()) => ExitCode::from(status),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
