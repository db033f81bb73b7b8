use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use et14::moments::{compatibility_from_jet, potential_jet};
use et14::sample::{rational_state, trial_rng, uniform_state};
use et14::suites::{verify, SchemeSelection, Suite, SuiteConfig};
use et14::{builtin_material, compute_v, compute_x, PolynomialMaterial, State};

/// Exact 14-moment closure: evaluation, sampling and verification.
#[derive(Parser)]
#[command(name = "et14", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate scalars, potentials, moments and fluxes for one or more states.
    Eval(EvalArgs),
    /// Run the verification suites and print a JSON report.
    Verify(VerifyArgs),
    /// Write seeded random states as a JSON array.
    Sample(SampleArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// JSON file holding a state object or an array of states.
    #[arg(long)]
    state: PathBuf,
    /// Material JSON file, or `builtin:NAME` (e.g. `builtin:quadratic`).
    #[arg(long)]
    material: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Trials per suite; each suite has its own default.
    #[arg(long)]
    trials: Option<usize>,
    /// Override every floating-point tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// paper, ideal-gas, literature or all.
    #[arg(long, default_value = "all")]
    scheme: String,
    /// Comma-separated subset of the suites; all by default.
    #[arg(long, value_delimiter = ',')]
    suites: Vec<String>,
    /// Half-width of the sampling interval.
    #[arg(long, default_value_t = 1.0)]
    magnitude: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Shift one limit coefficient by 1/100 (self-test).
    #[arg(long, hide = true)]
    corrupt_coefficient: Option<String>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 1.0)]
    magnitude: f64,
    /// Snap components to multiples of 1/1000.
    #[arg(long)]
    rational: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Error carrying the process exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn usage(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, error: error.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Sample(a) => cmd_sample(&a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(usage)?;
    serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(usage)
}

/// Replace `-0.0` with `0.0` so output does not depend on the sign of zero.
fn clear_negative_zero(value: &mut Value) {
    match value {
        Value::Number(n) if n.as_f64() == Some(0.0) && n.is_f64() => *value = json!(0.0),
        Value::Array(items) => items.iter_mut().for_each(clear_negative_zero),
        Value::Object(map) => map.values_mut().for_each(clear_negative_zero),
        _ => {}
    }
}

fn write_json(out: Option<&Path>, value: &Value) -> Result<(), Failure> {
    let mut value = value.clone();
    clear_negative_zero(&mut value);
    let mut text = serde_json::to_string_pretty(&value).map_err(usage)?;
    text.push('\n');
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
    .map_err(|e| Failure { code: 1, error: e })
}

fn load_material(source: &str) -> Result<PolynomialMaterial, Failure> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return builtin_material(name).map_err(usage);
    }
    let v = read_json(Path::new(source))?;
    PolynomialMaterial::from_json_value(&v, "material").map_err(usage)
}

fn eval_one(state: &State, mat: &PolynomialMaterial) -> anyhow::Result<Value> {
    let jet = potential_jet(state, mat)?;
    Ok(json!({
        "X": compute_x(state),
        "V": compute_v(state),
        "hprime": jet.potentials.hprime,
        "phiprime": jet.potentials.phiprime,
        "moments": jet.moments(),
        "fluxes": jet.fluxes(),
        "compatibility": compatibility_from_jet(&jet),
    }))
}

fn cmd_eval(a: &EvalArgs) -> Result<ExitCode, Failure> {
    let mat = load_material(&a.material)?;
    let input = read_json(&a.state)?;
    let output = match &input {
        Value::Array(items) => {
            let mut out = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                let s = State::from_json_value(item, &format!("state[{i}]")).map_err(usage)?;
                out.push(eval_one(&s, &mat).map_err(usage)?);
            }
            Value::Array(out)
        }
        other => {
            let s = State::from_json_value(other, "state").map_err(usage)?;
            eval_one(&s, &mat).map_err(usage)?
        }
    };
    write_json(a.out.as_deref(), &output)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: &VerifyArgs) -> Result<ExitCode, Failure> {
    let scheme: SchemeSelection = a.scheme.parse().map_err(usage)?;
    let suites = if a.suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        a.suites.iter().map(|s| s.trim().parse()).collect::<Result<_, _>>().map_err(usage)?
    };
    let cfg = SuiteConfig {
        seed: a.seed,
        trials: a.trials,
        tol: a.tol,
        scheme,
        suites,
        magnitude: a.magnitude,
        corrupt: a.corrupt_coefficient.clone(),
    };
    cfg.validate().map_err(usage)?;
    let report = verify(&cfg).map_err(|e| Failure { code: 1, error: e.into() })?;
    for s in &report.suites {
        let status = if s.pass { "pass" } else { "FAIL" };
        eprintln!("{:<14} {status}  trials={} max_residual={:e}", s.suite, s.trials, s.max_residual);
        for c in s.checks.iter().filter(|c| !c.pass) {
            eprintln!("  failed check {}: {:e}", c.check, c.max_residual);
        }
    }
    let value = serde_json::to_value(&report).map_err(usage)?;
    write_json(a.out.as_deref(), &value)?;
    Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_sample(a: &SampleArgs) -> Result<ExitCode, Failure> {
    if !(a.magnitude > 0.0 && a.magnitude.is_finite()) {
        return Err(usage(anyhow!("magnitude must be positive, got {}", a.magnitude)));
    }
    let states: Vec<State> = (0..a.count)
        .map(|i| {
            let mut rng = trial_rng(a.seed, i as u64);
            if a.rational {
                rational_state(&mut rng, a.magnitude).to_f64()
            } else {
                uniform_state(&mut rng, a.magnitude)
            }
        })
        .collect();
    let value = serde_json::to_value(&states).map_err(usage)?;
    write_json(a.out.as_deref(), &value)?;
    Ok(ExitCode::SUCCESS)
}
