use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use prcss_core::bounds::{distance_bound, epsilon0, z_root};
use prcss_core::complex::{graph_cycle_complex, toric_complex};
use prcss_core::css::{code_dimension, css_from_complex, min_distance_or_bound};
use prcss_core::discrepancy::{discrepancy_exact_with, discrepancy_sampled_with, EXACT_THRESHOLD};
use prcss_core::enumerator::macwilliams_transform;
use prcss_core::harness::experiment::{checked_cap, run_experiment, DEFAULT_CAP};
use prcss_core::harness::sweep::{sweep, SweepConfig};
use prcss_core::harness::verify::verify_suite;
use prcss_core::{io, walks, ExperimentConfig, Level, Reference};
use serde_json::json;

#[derive(Parser)]
#[command(name = "prcss", version, about = "CSS codes from 2-complexes: discrepancy, enumerators, walks and distance bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct CapArgs {
    /// Bound on enumerated states or codewords.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Required for caps above 2^20.
    #[arg(long = "i-know-this-is-exponential")]
    exponential: bool,
}

impl CapArgs {
    fn get(self) -> Result<u64> {
        Ok(checked_cap(self.cap, self.exponential)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Writes a complex file.
    Generate {
        #[command(subcommand)]
        family: Family,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Checks the boundary property of a complex file and prints its degrees.
    Validate { complex: PathBuf },
    /// Discrepancy of a hypergraph file.
    Discrepancy {
        hypergraph: PathBuf,
        /// Enumerate every subset (default when n <= 22).
        #[arg(long, conflicts_with = "samples")]
        exact: bool,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Compare against the exact hypergeometric law instead of the binomial form.
        #[arg(long)]
        hypergeometric: bool,
    },
    /// Parameters of a CSS code file.
    Analyze {
        code: PathBuf,
        /// Read a complex file and take its CSS code.
        #[arg(long)]
        complex: bool,
        #[arg(long = "dmin-cap", default_value_t = DEFAULT_CAP)]
        dmin_cap: u64,
        #[arg(long = "i-know-this-is-exponential")]
        exponential: bool,
    },
    /// Dual weight enumerator of a code with the given enumerator and size.
    Macwilliams {
        #[arg(long = "in")]
        input: PathBuf,
        /// Number of codewords.
        #[arg(long)]
        size: num_bigint::BigUint,
    },
    /// Shell chain of the Cayley walk on the span of a generator matrix.
    Walk {
        #[arg(long)]
        generators: PathBuf,
        #[arg(long)]
        emit_chain: bool,
        #[arg(long)]
        emit_enumerator: bool,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Threshold and distance bound for face size `d` and discrepancy `epsilon`.
    Bounds {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        epsilon: f64,
    },
    /// Runs the pipeline on one configuration and prints the JSON report.
    Experiment {
        config: Option<PathBuf>,
        /// `key=value`, applied after the config file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[arg(long = "i-know-this-is-exponential")]
        exponential: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a parameter grid and writes a CSV summary.
    Sweep {
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[arg(long = "i-know-this-is-exponential")]
        exponential: bool,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write every report as JSON lines.
        #[arg(long)]
        reports: Option<PathBuf>,
    },
    /// Runs the verification suite and prints the ledger.
    Verify {
        #[arg(long, conflicts_with = "full")]
        quick: bool,
        #[arg(long)]
        full: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Family {
    Toric {
        #[arg(long = "l", short = 'L')]
        l: usize,
    },
    GraphCycle {
        #[arg(long)]
        nv: usize,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        faces: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("json values serialize"))
}

/// Config text with overrides appended; later keys win.
fn config_text(path: Option<&Path>, set: &[String], exponential: bool) -> Result<String> {
    let mut text = match path {
        Some(p) => io::read_to_string(p)?,
        None => String::new(),
    };
    text.push('\n');
    for kv in set {
        if !kv.contains('=') {
            bail!("--set expects KEY=VALUE, got {kv:?}");
        }
        text.push_str(kv);
        text.push('\n');
    }
    if exponential {
        text.push_str("allow_exponential = true\n");
    }
    Ok(text)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate { family, out } => {
            let complex = match family {
                Family::Toric { l } => toric_complex(l)?,
                Family::GraphCycle { nv, degree, faces, seed } => graph_cycle_complex(nv, degree, faces, seed)?,
            };
            emit(out.as_deref(), &io::write_complex(&complex))?;
        }
        Command::Validate { complex } => {
            let c = io::parse_complex(&io::read_to_string(&complex)?)?;
            let profile = c.validate()?;
            print!("{}", pretty(&json!({ "n": c.n(), "valid": true, "profile": profile })));
        }
        Command::Discrepancy {
            hypergraph,
            exact,
            samples,
            seed,
            hypergeometric,
        } => {
            let h = io::parse_hypergraph(&io::read_to_string(&hypergraph)?)?;
            let reference = if hypergeometric {
                Reference::Hypergeometric
            } else {
                Reference::Binomial
            };
            let report = match samples {
                Some(s) => discrepancy_sampled_with(&h, s, seed, reference)?,
                None if exact => discrepancy_exact_with(&h, h.n(), reference)?,
                None if h.n() <= EXACT_THRESHOLD => discrepancy_exact_with(&h, EXACT_THRESHOLD, reference)?,
                None => bail!("n = {} is above {EXACT_THRESHOLD}; pass --samples N or --exact", h.n()),
            };
            print!("{}", pretty(&serde_json::to_value(&report)?));
        }
        Command::Analyze {
            code,
            complex,
            dmin_cap,
            exponential,
        } => {
            let cap = checked_cap(dmin_cap, exponential)?;
            let text = io::read_to_string(&code)?;
            let code = if complex {
                css_from_complex(&io::parse_complex(&text)?)?
            } else {
                io::parse_css(&text)?
            };
            let k = code_dimension(&code)?;
            let distance = min_distance_or_bound(&code, cap)?;
            let n = code.n();
            print!(
                "{}",
                pretty(&json!({
                    "n": n,
                    "k": k,
                    "m_x": code.m_x(),
                    "m_z": code.m_z(),
                    "distance": distance,
                    "rate": format!("{k}/{n}"),
                    "delta_min": format!("{}/{n}", distance.value()),
                }))
            );
        }
        Command::Macwilliams { input, size } => {
            let b = io::parse_enumerator(&io::read_to_string(&input)?)?;
            print!("{}", io::write_enumerator(&macwilliams_transform(&b, &size)?));
        }
        Command::Walk {
            generators,
            emit_chain,
            emit_enumerator,
            cap,
        } => {
            let m = io::parse_matrix(&io::read_to_string(&generators)?)?;
            let gens = m.to_bitvectors();
            let line = walks::cayley_line_chain(m.cols(), &gens, cap.get()?)?;
            let mut out = json!({
                "n": line.n(),
                "generators": gens.len(),
                "span_dim": line.span_dim(),
                "support": line.support(),
            });
            if emit_chain {
                out["chain"] = line.to_json();
            }
            if emit_enumerator {
                let dim = line.span_dim().expect("Cayley chains record their dimension");
                out["enumerator"] = json!(line.enumerator_from_stationary(dim)?.to_strings());
            }
            print!("{}", pretty(&out));
        }
        Command::Bounds { d, epsilon } => {
            let (eps0, branch) = epsilon0(d)?;
            let (bound, applicable) = distance_bound(d, epsilon)?;
            let out = json!({
                "d": d,
                "epsilon": epsilon,
                "epsilon0": eps0,
                "branch": branch,
                "distance_bound": if bound.is_finite() { json!(bound) } else { json!(null) },
                "applicable": applicable,
                "z_root": z_root(1e-12)?,
            });
            print!("{}", pretty(&out));
        }
        Command::Experiment {
            config,
            set,
            exponential,
            out,
        } => {
            let cfg = ExperimentConfig::parse(&config_text(config.as_deref(), &set, exponential)?)?;
            let report = run_experiment(&cfg);
            emit(out.as_deref(), &format!("{}\n", report.to_json()))?;
            if report.failed() {
                for e in &report.errors {
                    eprintln!("{}: {}", e.stage, e.message);
                }
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Sweep {
            config,
            set,
            exponential,
            workers,
            out,
            reports,
        } => {
            let mut cfg = SweepConfig::parse(&config_text(Some(&config), &set, exponential)?)?;
            if let Some(w) = workers {
                cfg.workers = w;
            }
            let result = sweep(&cfg)?;
            emit(out.as_deref(), &result.csv)?;
            if let Some(p) = reports {
                let lines: String = result
                    .reports
                    .iter()
                    .map(|r| format!("{}\n", serde_json::to_string(r).expect("reports serialize")))
                    .collect();
                fs::write(&p, lines).with_context(|| format!("writing {}", p.display()))?;
            }
            if result.reports.iter().any(|r| r.failed()) {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Verify { quick, full, out } => {
            let level = if full && !quick { Level::Full } else { Level::Quick };
            let ledger = verify_suite(level);
            emit(out.as_deref(), &format!("{}\n", ledger.to_json()))?;
            if ledger.failures() > 0 {
                eprintln!("{} ledger failures", ledger.failures());
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
