use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use oscomp::comparison::{
    decide_stable_domination, n_comparison, stable_dom_via_states, stably_dominated, state_cone,
    Status,
};
use oscomp::completion::{
    check_cfp, check_cfp_discrete, property_q_check, CfpInstance, Completion, DiscreteCfpInstance,
    QMode,
};
use oscomp::corpus::{
    family_wn, family_womega, random_model, run_report, Check, RandomKind, RandomModelParams,
    ReportBounds, ReportInput,
};
use oscomp::reductions::{omega_oracle, omega_to_cfp_grouping, sdom_common_k, weak_omega_to_cfp};
use oscomp::{Element, Error, SemigroupModel};

#[derive(Parser)]
#[command(
    name = "oscomp",
    version,
    about = "Comparison properties of ordered abelian semigroups"
)]
struct Cli {
    /// Model file (JSON).
    #[arg(long, global = true)]
    model: Option<PathBuf>,
    /// Coordinate-sum bound for scans; defaults to the model's element bound.
    #[arg(long, global = true)]
    bound: Option<u64>,
    /// Largest multiplier or sequence index searched.
    #[arg(long, global = true)]
    kmax: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    #[arg(long, global = true)]
    table: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Membership with a factorization.
    Member {
        #[arg(long)]
        element: String,
    },
    /// `x <= y` with a certificate.
    Order {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Stable domination `x <_s y`: least multiplier and exact decision.
    Sdom {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Stable domination through the normalized state cone of `y`.
    States {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 1000)]
        nmax: u64,
    },
    /// Bounded exhaustive n-comparison.
    Ncomp {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        weak: bool,
    },
    /// CFP on the interval completion (or on the base model with --discrete).
    Cfp {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        strong: bool,
        #[arg(long)]
        discrete: bool,
    },
    /// Property (Q) or (QQ) on the interval completion.
    Qcheck {
        #[arg(long, value_enum, ignore_case = true)]
        mode: QMode,
    },
    #[command(subcommand)]
    Reduce(Reduce),
    #[command(subcommand)]
    Family(Family),
    /// Batch property report.
    Report(ReportArgs),
}

#[derive(Subcommand)]
enum Reduce {
    /// CFP certificate from an ω-comparison answer on grouped blocks.
    OmegaCfp {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        weak: bool,
    },
    /// One multiplier for `x <_s y <_s z`.
    SdomChain {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
    },
}

#[derive(Subcommand)]
enum Family {
    /// `<n+1, n+2>`.
    Wn {
        #[arg(long)]
        n: u64,
    },
    /// `W_1 ⊕ ... ⊕ W_{n_max}`.
    Womega {
        #[arg(long)]
        n_max: u64,
    },
    /// Seeded random model.
    Random {
        #[arg(long, value_enum, default_value = "either")]
        kind: RandomKind,
        #[arg(long, default_value_t = 3)]
        generators: usize,
        #[arg(long, default_value_t = 6)]
        max_entry: u64,
        #[arg(long, default_value_t = 2)]
        dimension: usize,
        #[arg(long, default_value_t = 24)]
        element_bound: u64,
    },
}

#[derive(Args)]
struct ReportArgs {
    /// Model files.
    #[arg(long = "models", num_args = 1..)]
    models: Vec<PathBuf>,
    /// Families: `wn:N`, `wn:A..B`, `womega:N`, `z`, `random:COUNT`.
    #[arg(long = "family", num_args = 1..)]
    families: Vec<String>,
    #[arg(long, value_enum, value_delimiter = ',', num_args = 1..)]
    checks: Vec<Check>,
    #[arg(long, default_value_t = 3)]
    nmax: u64,
    #[arg(long, default_value_t = 6)]
    omega_cap: u64,
    #[arg(long, default_value_t = 6)]
    q_bound: u64,
    #[arg(long, default_value_t = 20)]
    instances: u64,
    /// Include wall-clock time per check (makes output non-deterministic).
    #[arg(long)]
    timings: bool,
}

enum Outcome {
    Ok(Value),
    Violation(Value),
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("OSCOMP_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let cli = Cli::parse();
    let table = cli.table && !cli.json;
    match run(&cli) {
        Ok(Outcome::Ok(v)) => {
            print(&v, table);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Violation(v)) => {
            print(&v, table);
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_model(path: Option<&PathBuf>) -> Result<SemigroupModel, Error> {
    let path = path.ok_or_else(|| Error::Shape("--model FILE is required".into()))?;
    SemigroupModel::from_json_str(&read(path)?)
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse {
        location: path.display().to_string(),
        message: e.to_string(),
    })
}

fn element(model: &SemigroupModel, text: &str) -> Result<Element, Error> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("element {text:?}"),
        message: e.to_string(),
    })?;
    model.parse_element(&v)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("outputs serialize")
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let model = || load_model(cli.model.as_ref());
    let kmax = cli.kmax.unwrap_or(500);
    Ok(match &cli.command {
        Command::Member { element: e } => {
            let m = model()?;
            let e = element(&m, e)?;
            Outcome::Ok(json!({ "element": e, "membership": m.member(&e)? }))
        }
        Command::Order { x, y } => {
            let m = model()?;
            let (x, y) = (element(&m, x)?, element(&m, y)?);
            let cert = m.leq(&x, &y)?;
            Outcome::Ok(json!({ "x": x, "y": y, "leq": cert.is_some(), "certificate": cert }))
        }
        Command::Sdom { x, y } => {
            let m = model()?;
            let (x, y) = (element(&m, x)?, element(&m, y)?);
            let scan = stably_dominated(&m, &x, &y, kmax)?;
            let decision = decide_stable_domination(&m, &x, &y)?;
            Outcome::Ok(json!({
                "x": x, "y": y, "kmax": kmax,
                "least_k": scan.as_ref().map(|c| c.k),
                "certificate": scan,
                "decision": decision,
            }))
        }
        Command::States { x, y, nmax } => {
            let m = model()?;
            let (x, y) = (element(&m, x)?, element(&m, y)?);
            let verdict = stable_dom_via_states(&m, &x, &y, *nmax)?;
            let cone = match state_cone(&m, &y) {
                Ok(c) => json!({
                    "dimension": c.dimension,
                    "empty": c.empty,
                    "ideal_generators": c.ideal_generators,
                    "unique_point": c.unique_point().map(|p| p.iter().map(|r| r.to_string()).collect::<Vec<_>>()),
                }),
                Err(e) => json!({ "error": e.to_string() }),
            };
            Outcome::Ok(json!({ "x": x, "y": y, "verdict": verdict, "cone": cone }))
        }
        Command::Ncomp { n, weak } => {
            let m = model()?;
            let bound = cli.bound.unwrap_or(m.element_bound());
            let v = n_comparison(&m, *n, bound, *weak)?;
            if v.status == Status::FailsWithWitness {
                Outcome::Violation(to_value(&v))
            } else {
                Outcome::Ok(to_value(&v))
            }
        }
        Command::Cfp {
            instance,
            strong,
            discrete,
        } => {
            let m = model()?;
            let text = read(instance)?;
            if *discrete {
                let inst: DiscreteCfpInstance = serde_json::from_str(&text)?;
                Outcome::Ok(to_value(&check_cfp_discrete(&m, &inst, kmax)?))
            } else {
                let inst: CfpInstance = serde_json::from_str(&text)?;
                let c = Completion::new(m);
                Outcome::Ok(to_value(&check_cfp(&c, &inst, kmax, *strong)?))
            }
        }
        Command::Qcheck { mode } => {
            let m = model()?;
            let bound = cli.bound.unwrap_or(6);
            let v = property_q_check(&Completion::new(m), *mode, bound)?;
            if v.status == Status::FailsWithWitness {
                Outcome::Violation(to_value(&v))
            } else {
                Outcome::Ok(to_value(&v))
            }
        }
        Command::Reduce(Reduce::OmegaCfp { instance, weak }) => {
            let c = Completion::new(model()?);
            let inst: CfpInstance = serde_json::from_str(&read(instance)?)?;
            let oracle = omega_oracle(&c, kmax, *weak);
            if *weak {
                let cert = weak_omega_to_cfp(&c, &inst, &oracle, None)?;
                let replays = cert.replay(&c, &inst)?;
                Outcome::Ok(json!({ "certificate": cert, "replays": replays }))
            } else {
                let cert = omega_to_cfp_grouping(&c, &inst, &oracle)?;
                let replays = cert.replay(&c, &inst)?;
                Outcome::Ok(json!({ "certificate": cert, "replays": replays }))
            }
        }
        Command::Reduce(Reduce::SdomChain { x, y, z }) => {
            let m = model()?;
            let (x, y, z) = (element(&m, x)?, element(&m, y)?, element(&m, z)?);
            let ck = sdom_common_k(&m, &x, &y, &z, kmax)?;
            let replays = ck.replay(&m, &x, &y, &z)?;
            Outcome::Ok(json!({ "chain": ck, "replays": replays }))
        }
        Command::Family(f) => Outcome::Ok(
            match f {
                Family::Wn { n } => family_wn(*n)?,
                Family::Womega { n_max } => family_womega(*n_max)?,
                Family::Random {
                    kind,
                    generators,
                    max_entry,
                    dimension,
                    element_bound,
                } => random_model(
                    cli.seed,
                    &RandomModelParams {
                        kind: *kind,
                        generators: *generators,
                        max_entry: *max_entry,
                        dimension: *dimension,
                        element_bound: *element_bound,
                    },
                )?,
            }
            .to_json(),
        ),
        Command::Report(args) => {
            let mut inputs = Vec::new();
            if let Some(p) = &cli.model {
                inputs.push(ReportInput {
                    id: p.display().to_string(),
                    model: load_model(Some(p))?,
                });
            }
            for p in &args.models {
                inputs.push(ReportInput {
                    id: p.display().to_string(),
                    model: load_model(Some(p))?,
                });
            }
            for spec in &args.families {
                inputs.extend(family_inputs(spec, cli.seed)?);
            }
            let checks = if args.checks.is_empty() {
                Check::all()
            } else {
                args.checks.clone()
            };
            let bounds = ReportBounds {
                ncomp_bound: cli.bound,
                n_max: args.nmax,
                omega_n_cap: args.omega_cap,
                q_bound: args.q_bound,
                k_max: kmax,
                cfp_instances: args.instances,
                seed: cli.seed,
                timings: args.timings,
            };
            let out = run_report(&inputs, &checks, &bounds);
            let v = to_value(&out.reports);
            if out.ok {
                Outcome::Ok(v)
            } else {
                Outcome::Violation(v)
            }
        }
    })
}

fn family_inputs(spec: &str, seed: u64) -> Result<Vec<ReportInput>, Error> {
    let bad = || Error::Parse {
        location: format!("--family {spec}"),
        message: "expected wn:N, wn:A..B, womega:N, z or random:COUNT".into(),
    };
    let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    Ok(match name {
        "z" => vec![ReportInput {
            id: "Z+".into(),
            model: SemigroupModel::numerical([1], 60)?,
        }],
        "wn" => {
            let (a, b) = match arg.split_once("..") {
                Some((a, b)) => (num(a)?, num(b)?),
                None => (num(arg)?, num(arg)?),
            };
            (a..=b)
                .map(|n| {
                    Ok(ReportInput {
                        id: format!("W_{n}"),
                        model: family_wn(n)?,
                    })
                })
                .collect::<Result<_, Error>>()?
        }
        "womega" => {
            let n = num(arg)?;
            vec![ReportInput {
                id: format!("W_omega[{n}]"),
                model: family_womega(n)?,
            }]
        }
        "random" => (0..num(arg)?)
            .map(|i| {
                Ok(ReportInput {
                    id: format!("random[{}]", seed + i),
                    model: random_model(
                        seed + i,
                        &RandomModelParams {
                            element_bound: 12,
                            ..Default::default()
                        },
                    )?,
                })
            })
            .collect::<Result<_, Error>>()?,
        _ => return Err(bad()),
    })
}

/// Write errors (a closed pipe, say) are ignored.
fn print(v: &Value, table: bool) {
    let mut out = std::io::stdout().lock();
    if !table {
        let _ = writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(v).expect("valid json")
        );
        return;
    }
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, val) in rows {
        if writeln!(out, "{k:width$}  {val}").is_err() {
            return;
        }
    }
}

/// Scalar leaves and short arrays become rows; deeper structure is walked.
fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                flatten(&join(k), val, rows);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object()) => {
            for (i, val) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), val, rows);
            }
        }
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}
