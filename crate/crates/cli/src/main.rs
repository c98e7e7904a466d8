//! `toricmle`: catalog browsing, MLE, ML degrees and cross-verification.
//!
//! Exit status: 0 on success, 2 for usage or input errors, 3 when a
//! computation fails (a JSON diagnostic goes to stderr).

mod canonical;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use toric_mle::birch::{solve_birch, SolverOptions};
use toric_mle::closedform::{self, audit_paper_displays, solve_closed_form};
use toric_mle::lattice::catalog_json;
use toric_mle::mldegree::ml_degree;
use toric_mle::model::{self, known_names, parametrize, DataVector, ToricModel};
use toric_mle::Error;

#[derive(Parser, Debug)]
#[command(name = "toricmle", version, about = "MLE and ML degrees for toric Del Pezzo models")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, env = "TORICMLE_FORMAT", default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Browse, export and import models.
    Models {
        #[command(subcommand)]
        action: ModelsAction,
    },
    /// Maximum likelihood estimate for one data vector.
    Mle(MleArgs),
    /// Count complex critical points over random data.
    Mldegree {
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare closed forms against Newton on random data.
    Verify {
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum ModelsAction {
    /// The sixteen reflexive polygons.
    List,
    /// Matrix and binomials of a model as JSON.
    Export { name: String },
    /// Validate a model JSON file and echo it in canonical form.
    Import { path: PathBuf },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Birch,
    ClosedForm,
    Both,
}

#[derive(Args, Debug)]
struct MleArgs {
    #[arg(long)]
    model: String,
    /// Comma-separated counts.
    #[arg(long, conflicts_with = "data_file", required_unless_present = "data_file")]
    data: Option<String>,
    /// One count per line, no header.
    #[arg(long)]
    data_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "birch")]
    method: MethodArg,
    /// Moment residual tolerance for Newton.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
}

/// Failure with the exit status it maps to.
struct Failure {
    code: u8,
    body: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let usage = matches!(
            e,
            Error::Malformed(_)
                | Error::Domain(_)
                | Error::LengthMismatch { .. }
                | Error::ZeroCount { .. }
                | Error::UnknownModel(_)
                | Error::Unsupported { .. }
        );
        let mut body = json!({ "error": kind(&e), "message": e.to_string() });
        match &e {
            Error::UnknownModel(_) => body["known_models"] = json!(known_names()),
            Error::NonConvergence { iterations, residual, last_iterate } => {
                body["iterations"] = json!(iterations);
                body["residual"] = json!(residual);
                body["last_iterate"] = json!(last_iterate);
            }
            Error::Inconsistent { candidates, roots, residuals, .. } => {
                body["candidates"] = json!(candidates);
                body["roots"] = json!(roots);
                body["residuals"] = json!(residuals);
            }
            Error::Genericity { discarded } => body["discarded"] = json!(discarded),
            _ => {}
        }
        Failure { code: if usage { 2 } else { 3 }, body }
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::Malformed(_) => "malformed",
        Error::Domain(_) => "domain",
        Error::LengthMismatch { .. } => "length_mismatch",
        Error::ZeroCount { .. } => "zero_count",
        Error::UnknownModel(_) => "unknown_model",
        Error::Unsupported { .. } => "unsupported",
        Error::NonConvergence { .. } => "non_convergence",
        Error::Inconsistent { .. } => "inconsistent",
        Error::Genericity { .. } => "genericity",
        Error::Internal(_) => "internal",
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, body: json!({ "error": "usage", "message": message.into() }) }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(v) => {
            let text = match cli.format {
                Format::Json => canonical::to_string(&v),
                Format::Table => table::render(&v),
            };
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprint!("{}", canonical::to_string(&f.body));
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    match &cli.command {
        Command::Models { action } => models(action),
        Command::Mle(args) => mle(args),
        Command::Mldegree { model, trials, seed } => {
            let m = model::named(model)?;
            let report = ml_degree(&m, *trials, *seed)?;
            Ok(json!({ "command": "mldegree", "report": to_value(&report) }))
        }
        Command::Verify { model, samples, seed } => verify(model, *samples, *seed),
    }
}

fn models(action: &ModelsAction) -> Result<Value, Failure> {
    match action {
        ModelsAction::List => {
            let mut v = catalog_json()?;
            v["command"] = json!("models list");
            Ok(v)
        }
        ModelsAction::Export { name } => {
            let m = model::named(name)?;
            Ok(m.to_json())
        }
        ModelsAction::Import { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            let v: Value = serde_json::from_str(&text)
                .map_err(|e| usage(format!("{} is not JSON: {e}", path.display())))?;
            // echoing the validated model makes export | import a fixed point
            Ok(ToricModel::from_json(&v)?.to_json())
        }
    }
}

fn read_data(args: &MleArgs) -> Result<DataVector, Failure> {
    match (&args.data, &args.data_file) {
        (Some(s), _) => Ok(DataVector::parse(s)?),
        (None, Some(p)) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?;
            Ok(DataVector::parse(&text)?)
        }
        (None, None) => Err(usage("one of --data or --data-file is required")),
    }
}

fn mle(args: &MleArgs) -> Result<Value, Failure> {
    let m = model::named(&args.model)?;
    let u = read_data(args)?;
    if u.len() != m.cols() {
        return Err(Error::LengthMismatch { expected: m.cols(), got: u.len() }.into());
    }
    let mut opts = SolverOptions::default();
    if let Some(t) = args.tol {
        opts.tol = t;
    }
    if let Some(k) = args.max_iter {
        opts.max_iter = k;
    }
    let mut out = json!({
        "command": "mle",
        "model": m.label(),
        "data": u.counts(),
    });
    let birch = match args.method {
        MethodArg::Birch | MethodArg::Both => Some(solve_birch(&m, &u, &opts)?),
        MethodArg::ClosedForm => None,
    };
    let closed = match args.method {
        MethodArg::ClosedForm | MethodArg::Both => Some(solve_closed_form(m.label(), &u)?),
        MethodArg::Birch => None,
    };
    if let Some(b) = &birch {
        out["birch"] = to_value(b);
    }
    if let Some(c) = &closed {
        out["closed_form"] = to_value(c);
    }
    if let (Some(b), Some(c)) = (&birch, &closed) {
        let delta = b
            .p_hat
            .iter()
            .zip(c.result.p_hat.iter())
            .fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()));
        out["agreement"] = json!({ "max_abs_delta_p": delta });
    }
    Ok(out)
}

fn verify(label: &str, samples: usize, seed: u64) -> Result<Value, Failure> {
    let m = model::named(label)?;
    if !closedform::MODELS.contains(&m.label()) {
        return Err(Error::Unsupported {
            model: label.to_string(),
            reason: format!("verify needs a closed-form model: {}", closedform::MODELS.join(", ")),
        }
        .into());
    }
    if samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = SolverOptions::default();
    let mut max_delta = 0.0f64;
    let mut max_round_trip = 0.0f64;
    let mut max_moment = 0.0f64;
    let mut max_variety = 0.0f64;
    let mut disagreements = 0usize;
    // per display: (passes, failures, first report)
    let mut displays: Vec<(String, usize, usize, Option<Value>)> = Vec::new();
    let mut theta_reports: Option<Value> = None;

    for _ in 0..samples {
        let u: Vec<u64> = (0..m.cols()).map(|_| rng.random_range(1..=1000)).collect();
        let u = DataVector::new(u)?;
        let b = solve_birch(&m, &u, &opts)?;
        let c = solve_closed_form(m.label(), &u)?;
        let delta = b
            .p_hat
            .iter()
            .zip(c.result.p_hat.iter())
            .fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()));
        if delta > 1e-8 {
            disagreements += 1;
        }
        max_delta = max_delta.max(delta);
        let back = parametrize(&m, &c.result.theta_hat)?;
        let rt = back
            .iter()
            .zip(c.result.p_hat.iter())
            .fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()));
        max_round_trip = max_round_trip.max(rt);
        max_moment = max_moment.max(b.moment_residual);
        max_variety = max_variety.max(b.variety_residual);
        for d in c.discrepancies.iter().filter(|d| d.coordinate.starts_with("theta")) {
            theta_reports.get_or_insert_with(|| to_value(d));
        }
        for a in audit_paper_displays(m.label(), &u, &b.p_hat)? {
            let slot = match displays.iter().position(|d| d.0 == a.display) {
                Some(i) => i,
                None => {
                    displays.push((a.display.clone(), 0, 0, None));
                    displays.len() - 1
                }
            };
            if a.passes {
                displays[slot].1 += 1;
            } else {
                displays[slot].2 += 1;
                if displays[slot].3.is_none() {
                    displays[slot].3 = a.discrepancy.as_ref().map(to_value);
                }
            }
        }
    }

    let audit: Vec<Value> = displays
        .iter()
        .map(|(name, pass, fail, _)| json!({ "display": name, "passes": pass, "failures": fail }))
        .collect();
    let mut reports: Vec<Value> = displays.into_iter().filter_map(|d| d.3).collect();
    reports.extend(theta_reports);
    Ok(json!({
        "command": "verify",
        "model": m.label(),
        "samples": samples,
        "seed": seed,
        "max_abs_delta_p": max_delta,
        "max_theta_round_trip": max_round_trip,
        "max_birch_moment_residual": max_moment,
        "max_birch_variety_residual": max_variety,
        "disagreements": disagreements,
        "display_audit": audit,
        "discrepancies": reports,
    }))
}
