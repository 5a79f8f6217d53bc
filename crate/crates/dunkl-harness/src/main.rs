//! `dunkl-harmonics`: suite runner and ad-hoc operator CLI.
//!
//! Exit codes: 0 all suites pass, 1 any assertion failure, 2 configuration
//! error.  DUNKL_THREADS caps the worker pool.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use dunkl_harness::{artifact, config, known_suites, run_suite, HarnessError, SuiteConfig};

#[derive(Parser)]
#[command(
    name = "dunkl-harmonics",
    about = "Numerical Dunkl harmonic analysis: verification suites and operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suites named in a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Directory for the JSON reports (overrides the config's output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a single suite with ad-hoc parameters.
    Suite {
        name: String,
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// Comma-separated multiplicities, one per axis.
        #[arg(long, default_value = "1")]
        k: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        xmax: Option<f64>,
        /// Fractional orders for the sweeps, comma-separated.
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        p1: Option<config::Rational>,
        #[arg(long)]
        p2: Option<config::Rational>,
        #[arg(long)]
        seed: Option<u64>,
        /// Skip the refinement pass.
        #[arg(long)]
        no_refine: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// List the available suites.
    ListSuites,
    /// Dunkl transform (or inverse) of a sampled-function JSON artifact.
    Transform {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        inverse: bool,
    },
    /// Fractional Dunkl Laplacian of a sampled-function artifact.
    Fraclap {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        s: f64,
        /// Use the heat-subordination route instead of the spectral multiplier.
        #[arg(long)]
        subordination: bool,
    },
    /// Heat semigroup e^{tΔ_k} applied to a sampled-function artifact.
    Heat {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        t: f64,
    },
    /// Paraproduct of two sampled-function artifacts (windows of the standard
    /// product splitting).
    Paraproduct {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "in2")]
        input2: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Which splitting term: 1, 2 or 3.
        #[arg(long, default_value_t = 2)]
        which: u8,
        #[arg(long, default_value_t = -12)]
        jmin: i32,
        #[arg(long, default_value_t = 12)]
        jmax: i32,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("DUNKL_THREADS") {
        match threads.parse::<usize>() {
            Ok(v) if v > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(v).build_global();
            }
            _ => {
                eprintln!("error: DUNKL_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool, HarnessError> {
    match cli.command {
        Command::ListSuites => {
            for (name, desc) in known_suites() {
                println!("{name:<20} {desc}");
            }
            Ok(true)
        }
        Command::Run { config, out } => {
            let text = std::fs::read_to_string(&config)?;
            let mut cfg: SuiteConfig = serde_json::from_str(&text)
                .map_err(|e| HarnessError::Config(format!("cannot parse {config:?}: {e}")))?;
            if let Some(dir) = out {
                cfg.output = Some(dir);
            }
            cfg.validate()?;
            if cfg.suites.is_empty() {
                return Err(HarnessError::Config("config lists no suites".into()));
            }
            let mut all = true;
            for name in cfg.suites.clone() {
                let report = run_suite(&cfg, &name)?;
                print_summary(&report);
                if let Some(dir) = &cfg.output {
                    report.write_json(&dir.join(format!("{name}.json")))?;
                }
                if let Some(csv) = &cfg.csv {
                    report.write_csv(&csv.with_file_name(format!(
                        "{}-{name}.csv",
                        csv.file_stem().and_then(|s| s.to_str()).unwrap_or("report")
                    )))?;
                }
                all &= report.pass;
            }
            Ok(all)
        }
        Command::Suite {
            name,
            d,
            k,
            n,
            xmax,
            s,
            p1,
            p2,
            seed,
            no_refine,
            out,
            csv,
        } => {
            let multiplicities: Vec<f64> = k
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| HarnessError::Config(format!("bad multiplicity {t:?}")))
                })
                .collect::<Result<_, _>>()?;
            if multiplicities.len() != d {
                return Err(HarnessError::Config(format!(
                    "expected {d} multiplicities, got {}",
                    multiplicities.len()
                )));
            }
            let mut cfg = SuiteConfig::default_for(d, multiplicities);
            if let Some(n) = n {
                cfg.grid.n = n;
            }
            if let Some(x) = xmax {
                cfg.grid.x_max = x;
            }
            if let Some(list) = s {
                cfg.sweep.s = list
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<f64>()
                            .map_err(|_| HarnessError::Config(format!("bad order {t:?}")))
                    })
                    .collect::<Result<_, _>>()?;
            }
            if let (Some(p1), Some(p2)) = (p1, p2) {
                // 1/p = 1/p1 + 1/p2 exactly
                let p = config::Rational::new(
                    p1.num * p2.num,
                    p1.den * p2.num + p2.den * p1.num,
                )?;
                cfg.sweep.exponents = vec![config::ExponentTuple {
                    p,
                    p1,
                    p2,
                    pt1: None,
                    pt2: None,
                    pb1: None,
                    pb2: None,
                }];
            }
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            cfg.refine = !no_refine;
            cfg.validate()?;
            let report = run_suite(&cfg, &name)?;
            print_summary(&report);
            if let Some(path) = out {
                report.write_json(&path)?;
            } else {
                println!("{}", report.to_json()?);
            }
            if let Some(path) = csv {
                report.write_csv(&path)?;
            }
            Ok(report.pass)
        }
        Command::Transform { input, out, inverse } => {
            let f = artifact::read_function(&input)?;
            let plan = artifact::plan_for(&f)?;
            let result = if inverse {
                plan.inverse(&f)?
            } else {
                plan.transform(&f)?
            };
            artifact::write_function(&out, &result)?;
            Ok(true)
        }
        Command::Fraclap {
            input,
            out,
            s,
            subordination,
        } => {
            let f = artifact::read_function(&input)?;
            let plan = artifact::plan_for(&f)?;
            let result = if subordination {
                dunkl_core::fractional_laplacian_subordination(
                    &plan,
                    &f,
                    s,
                    dunkl_core::SubordinationGrid::default(),
                )?
            } else {
                dunkl_core::fractional_laplacian(&plan, &f, s)?
            };
            artifact::write_function(&out, &result)?;
            Ok(true)
        }
        Command::Heat { input, out, t } => {
            let f = artifact::read_function(&input)?;
            let plan = artifact::plan_for(&f)?;
            let result = dunkl_core::heat_apply(&plan, &f, t)?;
            artifact::write_function(&out, &result)?;
            Ok(true)
        }
        Command::Paraproduct {
            input,
            input2,
            out,
            which,
            jmin,
            jmax,
        } => {
            let f = artifact::read_function(&input)?;
            let g = artifact::read_function(&input2)?;
            if !f.grid().same_layout(g.grid()) {
                return Err(HarnessError::Config(
                    "the two inputs live on different grids".into(),
                ));
            }
            let plan = artifact::plan_for(&f)?;
            let g = dunkl_core::SampledFunction::from_values(
                Arc::clone(plan.grid()),
                g.domain(),
                g.values().to_vec(),
            )?;
            let windows = dunkl_core::DecompositionWindows::standard();
            let spec = match which {
                1 => windows.spec1(jmin, jmax)?,
                2 => windows.spec2(jmin, jmax)?,
                3 => windows.spec3(jmin, jmax)?,
                other => {
                    return Err(HarnessError::Config(format!(
                        "paraproduct term must be 1, 2 or 3, got {other}"
                    )))
                }
            };
            let result = dunkl_core::paraproduct(&plan, &spec, &f, &g)?;
            artifact::write_function(&out, &result)?;
            Ok(true)
        }
    }
}

fn print_summary(report: &dunkl_harness::SuiteReport) {
    let status = match report.status {
        dunkl_harness::SuiteStatus::Pass => "pass",
        dunkl_harness::SuiteStatus::Fail => "FAIL",
        dunkl_harness::SuiteStatus::Inconclusive => "INCONCLUSIVE",
        dunkl_harness::SuiteStatus::HypothesisNotMet => "hypothesis-not-met",
    };
    let constants: Vec<String> = report
        .constants
        .iter()
        .map(|(k, v)| format!("{k}={v:.3e}"))
        .collect();
    println!(
        "[{status}] {} ({:.2}s) {}",
        report.suite,
        report.runtime_s,
        constants.join(" ")
    );
}
