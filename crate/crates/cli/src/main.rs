use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use duality::c01::{canonical_duality_measure, maximizing_set, PwlFunction};
use duality::engine::scenario::{ScenarioFile, SpaceDescriptor};
use duality::engine::{verify_record, CertificateRecord, Verdict};
use duality::l1::{duality_set_classify, l1_norm, FiniteMeasureSpace};
use duality::lp::{duality_map, lp_norm, Exponent, LpVector};
use duality::suite::run_appendix_battery;
use serde_json::json;

#[derive(Parser)]
#[command(name = "duality", version, about = "Duality mappings and coderivative certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceKind {
    Lp,
    L1,
    C01,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the duality mapping at one point and print JSON.
    Eval {
        #[arg(long, value_enum)]
        space: SpaceKind,
        /// Exponent for `lp`.
        #[arg(long)]
        p: Option<f64>,
        /// Comma-separated coordinates for `lp`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        vector: Option<Vec<f64>>,
        /// Comma-separated point weights for `l1` (default: all ones).
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        /// Comma-separated function values for `l1`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Option<Vec<f64>>,
        /// Function for `c01`: `tent:PEAK,HEIGHT`, `const:C`, or a JSON
        /// object with `breakpoints` and `values`.
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
    },
    /// Certify every scenario in a JSON file.
    Run {
        file: PathBuf,
        /// Where to write the certificate records.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the randomized property battery on one space.
    Suite {
        #[arg(long, value_enum)]
        space: SpaceKind,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure of the command itself, as opposed to a scenario that did not
/// certify.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Eval { space, p, vector, weights, values, f } => eval(space, p, vector, weights, values, f),
        Command::Run { file, out } => run(&file, out),
        Command::Suite { space, p, weights, samples, seed, out } => suite(space, p, weights, samples, seed, out),
    };
    match res {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T, Usage> {
    v.ok_or_else(|| Usage(format!("--{flag} is required here")))
}

fn parse_function(spec: &str) -> Result<PwlFunction, Usage> {
    let nums = |s: &str| -> Result<Vec<f64>, Usage> {
        s.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| Usage(format!("bad number {t:?}: {e}"))))
            .collect()
    };
    if let Some(rest) = spec.strip_prefix("tent:") {
        match nums(rest)?[..] {
            [peak, height] => Ok(PwlFunction::tent(peak, height)?),
            _ => Err(Usage("tent takes PEAK,HEIGHT".into())),
        }
    } else if let Some(rest) = spec.strip_prefix("const:") {
        match nums(rest)?[..] {
            [c] => Ok(PwlFunction::constant(c)),
            _ => Err(Usage("const takes one value".into())),
        }
    } else {
        Ok(serde_json::from_str(spec)?)
    }
}

fn eval(
    space: SpaceKind,
    p: Option<f64>,
    vector: Option<Vec<f64>>,
    weights: Option<Vec<f64>>,
    values: Option<Vec<f64>>,
    f: Option<String>,
) -> Result<ExitCode, Usage> {
    let out = match space {
        SpaceKind::Lp => {
            let p = Exponent::new(required(p, "p")?)?;
            let x = LpVector::new(required(vector, "vector")?)?;
            json!({
                "space": { "space": "lp", "p": p.get() },
                "x": x,
                "norm": lp_norm(&x, p),
                "j": duality_map(&x, p),
            })
        }
        SpaceKind::L1 => {
            let values = required(values, "values")?;
            let weights = weights.unwrap_or_else(|| vec![1.0; values.len()]);
            let space = FiniteMeasureSpace::new(weights.clone())?;
            let f = space.function(values)?;
            let class = duality_set_classify(&space, &f)?;
            json!({
                "space": { "space": "l1", "weights": weights },
                "f": f,
                "norm": l1_norm(&space, &f)?,
                "singleton": class.singleton,
                "free_points": class.free_points,
                "canonical": class.canonical,
            })
        }
        SpaceKind::C01 => {
            let f = parse_function(&required(f, "f")?)?;
            let m = if f.is_zero() { None } else { Some(maximizing_set(&f)?) };
            json!({
                "space": { "space": "c01" },
                "f": f,
                "norm": f.sup_norm(),
                "maximizing_set": m,
                "canonical": canonical_duality_measure(&f)?,
            })
        }
    };
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(ExitCode::SUCCESS)
}

fn default_out(file: &Path, named: Option<&str>) -> PathBuf {
    let dir = file.parent().unwrap_or(Path::new("."));
    match named {
        Some(name) => dir.join(name),
        None => {
            let stem = file.file_stem().and_then(|s| s.to_str()).unwrap_or("scenarios");
            dir.join(format!("{stem}.certificates.json"))
        }
    }
}

fn run(file: &Path, out: Option<PathBuf>) -> Result<ExitCode, Usage> {
    let text = fs::read_to_string(file).map_err(|e| Usage(format!("{}: {e}", file.display())))?;
    let scenarios: ScenarioFile = serde_json::from_str(&text).map_err(|e| Usage(format!("{}: {e}", file.display())))?;
    let out = out.unwrap_or_else(|| default_out(file, scenarios.output.as_deref()));

    let mut records: Vec<CertificateRecord> = Vec::new();
    let mut errors = Vec::new();
    println!("{:<4} {:<12} {:>14} {:>14}  verdict", "#", "theorem", "bound", "limit");
    for (i, (s, res)) in scenarios.scenarios.iter().zip(scenarios.run()).enumerate() {
        match res {
            Ok(r) => {
                let mut verdict = format!("{:?}", r.verdict);
                if let Err(issues) = verify_record(&r) {
                    verdict.push_str(&format!(" (record check failed: {})", issues.join("; ")));
                }
                println!("{i:<4} {:<12} {:>14.9} {:>14.9}  {verdict}", r.theorem, r.claimed_bound, r.estimated_limit);
                records.push(r);
            }
            Err(e) => {
                println!("{i:<4} {:<12} {:>14} {:>14}  error", s.theorem.as_str(), "-", "-");
                errors.push(format!("scenario {i} ({}): {e}", s.theorem));
            }
        }
    }
    fs::write(&out, serde_json::to_string_pretty(&records)?).map_err(|e| Usage(format!("{}: {e}", out.display())))?;
    eprintln!("wrote {} record(s) to {}", records.len(), out.display());

    if !errors.is_empty() {
        return Err(Usage(errors.join("\nerror: ")));
    }
    let all_good = records
        .iter()
        .all(|r| r.verdict == Verdict::Certified && verify_record(r).is_ok());
    Ok(if all_good { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn suite(
    space: SpaceKind,
    p: Option<f64>,
    weights: Option<Vec<f64>>,
    samples: usize,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<ExitCode, Usage> {
    let desc = match space {
        SpaceKind::Lp => SpaceDescriptor::Lp { p: required(p, "p")? },
        SpaceKind::L1 => SpaceDescriptor::L1 { weights: required(weights, "weights")? },
        SpaceKind::C01 => SpaceDescriptor::C01,
    };
    let report = run_appendix_battery(&desc, samples, seed)?;
    for r in &report.records {
        let status = match (r.applicable, r.pass) {
            (false, _) => "n/a",
            (true, true) => "pass",
            (true, false) => "FAIL",
        };
        println!("{:<16} {:<5} max violation {:.3e} (tol {:.1e})", r.property, status, r.max_violation, r.tolerance);
    }
    if let Some(out) = out {
        fs::write(&out, serde_json::to_string_pretty(&report)?).map_err(|e| Usage(format!("{}: {e}", out.display())))?;
    }
    Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
