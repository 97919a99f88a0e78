mod config;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use catnet::catalysis::{optimal_two_qubit_catalyst, search_catalyst, ConcentrationProblem, SearchConfig};
use catnet::format::{list, num};
use catnet::network::{
    alpha_grid, sweep_fig2, write_sweep_csv, AuxConfig, AuxMode, RateOptions,
};
use catnet::schmidt::conversion_probability;
use catnet::sim::{simulate, validate_waiting_factor};
use catnet::SchmidtVector;

use config::KeyValues;

#[derive(Parser)]
#[command(name = "catnet", version, about = "Catalysis-assisted entanglement distribution rates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the monotones E_1..E_d of a comma-separated spectrum.
    Monotones {
        #[arg(allow_hyphen_values = true)]
        spectrum: SchmidtVector,
    },
    /// Optimal probability of converting one spectrum into another.
    Prob {
        #[arg(long)]
        initial: SchmidtVector,
        #[arg(long = "final")]
        target: SchmidtVector,
        /// Shared catalyst, appended to both sides.
        #[arg(long)]
        catalyst: Option<SchmidtVector>,
    },
    /// Optimal catalyst for concentrating n copies of |alpha> into a Bell pair.
    Catalyst {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Rate-ratio sweep over alpha, written as CSV.
    Sweep {
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = 32)]
        edges: u32,
        #[arg(long, default_value_t = 0.55)]
        alpha_min: f64,
        #[arg(long, default_value_t = 1.0 - 1e-6)]
        alpha_max: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// aux_rich, none or finite; comma-separated for several.
        #[arg(long, value_delimiter = ',', default_value = "aux_rich")]
        mode: Vec<AuxMode>,
        /// Catalyst dimensions, 2 or 4; comma-separated for several.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        dim: Vec<usize>,
        /// Physical layer and auxiliary paths (`L0_km`, `c_f_km_s`, `P0`, `aux.<i>.*`).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Monte Carlo chain simulation driven by a config file; one JSON line.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Compare the waiting factor with a max-of-geometrics simulation.
    ValidateZ {
        #[arg(long)]
        edges: u32,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 100_000)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for numerical failures, 1 for everything else.
fn exit_code(e: &anyhow::Error) -> u8 {
    let numeric = e
        .chain()
        .any(|c| matches!(c.downcast_ref::<catnet::Error>(), Some(catnet::Error::NumericFailure { .. })));
    if numeric {
        2
    } else {
        1
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Monotones { spectrum } => {
            println!("{}", spectrum.monotones());
        }
        Command::Prob {
            initial,
            target,
            catalyst,
        } => {
            let p = match catalyst {
                Some(c) => conversion_probability(&initial.tensor(&c), &target.tensor(&c)),
                None => conversion_probability(&initial, &target),
            };
            println!("{}", num(p));
        }
        Command::Catalyst { n, alpha, dim } => {
            let problem = ConcentrationProblem::new(n, alpha)?;
            let spec = if dim == 2 {
                optimal_two_qubit_catalyst(&problem)?
            } else {
                search_catalyst(&problem, dim, &SearchConfig::default())?
            };
            println!("{}  p={}", list(spec.spectrum.coefficients()), num(spec.success_probability));
        }
        Command::Sweep {
            n,
            edges,
            alpha_min,
            alpha_max,
            steps,
            mode,
            dim,
            config,
            out,
        } => {
            let kv = match config {
                Some(path) => read_config(&path)?,
                None => KeyValues::default(),
            };
            let base = kv.physical(n, alpha_min)?;
            let auxes = mode
                .iter()
                .map(|m| match m {
                    AuxMode::AuxRich => Ok(AuxConfig::aux_rich()),
                    AuxMode::None => Ok(AuxConfig::none()),
                    AuxMode::Finite => {
                        let paths = kv.aux_paths()?;
                        if paths.is_empty() {
                            bail!("finite mode needs auxiliary paths from --config");
                        }
                        Ok(AuxConfig::finite(paths)?)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let alphas = alpha_grid(alpha_min, alpha_max, steps)?;
            let rows = sweep_fig2(&base, edges, &alphas, &auxes, &dim, &RateOptions::default())?;
            write_output(&out, |w| Ok(write_sweep_csv(&rows, w)?))?;
        }
        Command::Simulate {
            config,
            trials,
            seed,
            out,
        } => {
            let mut kv = read_config(&config)?;
            if let Some(t) = trials {
                kv.set("trials", t);
            }
            if let Some(s) = seed {
                kv.set("seed", s);
            }
            let cfg = kv.sim_config()?;
            let result = simulate(&cfg)?;
            write_output(&out, |w| Ok(writeln!(w, "{}", result.to_json_line())?))?;
        }
        Command::ValidateZ {
            edges,
            p,
            trials,
            seed,
            out,
        } => {
            let check = validate_waiting_factor(edges, p, trials, seed)?;
            let line = serde_json::to_string(&check)?;
            write_output(&out, |w| Ok(writeln!(w, "{line}")?))?;
        }
    }
    Ok(())
}

fn read_config(path: &Path) -> Result<KeyValues> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    KeyValues::parse(&text).with_context(|| format!("in {}", path.display()))
}

/// `-` is stdout.
fn write_output(out: &Path, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    if out == Path::new("-") {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        body(&mut lock)?;
        lock.flush()?;
    } else {
        let file = File::create(out).with_context(|| format!("creating {}", out.display()))?;
        let mut w = BufWriter::new(file);
        body(&mut w)?;
        w.flush()?;
    }
    Ok(())
}
