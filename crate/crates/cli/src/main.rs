//! `localchan` command-line runner.
//!
//! Exit codes: 0 on success, 1 on usage or I/O errors, 2 when a proven bound
//! is violated beyond slack (which would mean a bug in the library).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use localchan::bounds::{saturation_first_order, BoundReport, VIOLATION_SLACK};
use localchan::explorer::{
    bell_example, bell_pairs, ghz_decay, saturation_experiment, separable_sweep, summarize, universal_sweep,
    violation_search_in, ChannelSpec, ExperimentConfig, SearchSpace,
};
use localchan::io::state_from_json;
use localchan::linalg::NormOrder;
use localchan::witness::{concurrence, witness_value};

const THREADS_VAR: &str = "LOCALCHAN_THREADS";

#[derive(Parser, Debug)]
#[command(name = "localchan", version, about = "Bounds on products of local quantum channels")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Dimension of the first subsystem.
    #[arg(long, global = true, default_value_t = 2)]
    d1: usize,
    /// Dimension of the second subsystem.
    #[arg(long, global = true, default_value_t = 2)]
    d2: usize,
    /// Schatten norm order: a positive integer or "inf".
    #[arg(long, global = true, default_value = "2")]
    p: NormOrder,
    #[arg(long, global = true, default_value_t = 0.01)]
    epsilon: f64,
    /// Trials for sweeps; restarts for searches (at most 64).
    #[arg(long, global = true, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = ChannelKind::Contraction)]
    channel: ChannelKind,
    /// Environment dimension for random channels.
    #[arg(long, global = true, default_value_t = 2)]
    env_dim: usize,
    /// Write reports here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ChannelKind {
    Contraction,
    Dephasing,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StateSet {
    Separable,
    Any,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Space {
    Entangled,
    Product,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Random states through certified channel pairs, checked against the bounds.
    VerifyBounds {
        #[arg(long, value_enum, default_value_t = StateSet::Separable)]
        states: StateSet,
    },
    /// Qubit contractions with k = √2ε on the singlet.
    BellExample,
    /// Dephasing on every qubit of an n-qubit GHZ state.
    GhzDecay {
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Calibrated contractions on |00⟩⟨00|.
    Saturate,
    /// Witness value and concurrence of a two-qubit state read from a JSON file.
    Witness {
        #[arg(long)]
        input: PathBuf,
    },
    /// Maximize the distance over pure states for the configured channels.
    Search {
        #[arg(long, value_enum, default_value_t = Space::Entangled)]
        space: Space,
    },
    /// Singlet pairs with a contraction on every qubit.
    BellPairs {
        #[arg(long, default_value_t = 2)]
        pairs: usize,
    },
}

enum Rows {
    Reports(Vec<BoundReport>),
    Record(Value),
}

struct Output {
    rows: Rows,
    summary: Option<Value>,
    violation: bool,
}

#[derive(Serialize)]
struct CsvRow {
    trial: usize,
    class: String,
    distance: f64,
    sep_bound: f64,
    ent_bound: f64,
    violates_sep: bool,
    violates_ent: bool,
}

impl GlobalArgs {
    fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            seed: self.seed,
            trials: self.trials,
            d1: self.d1,
            d2: self.d2,
            p: self.p,
            epsilon: self.epsilon,
            channel: match self.channel {
                ChannelKind::Contraction => ChannelSpec::Contraction,
                ChannelKind::Dephasing => ChannelSpec::Dephasing,
                ChannelKind::Random => ChannelSpec::Random { env_dim: self.env_dim },
            },
            ..ExperimentConfig::default()
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data")
}

fn run(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    let cfg = g.config();
    Ok(match &cli.command {
        Command::VerifyBounds { states } => {
            let reports = match states {
                StateSet::Separable => separable_sweep(&cfg)?,
                StateSet::Any => universal_sweep(&cfg)?,
            };
            let s = summarize(&reports);
            let violation = s.separable_violations > 0 || s.entangled_violations > 0;
            let summary = json!({ "config": cfg, "summary": s });
            Output { rows: Rows::Reports(reports), summary: Some(summary), violation }
        }
        Command::BellExample => {
            let b = bell_example(g.epsilon)?;
            Output { violation: b.report.violates_entangled, rows: Rows::Record(to_value(&b)), summary: None }
        }
        Command::GhzDecay { n } => {
            let r = ghz_decay(*n, g.epsilon)?;
            let violation = r.exact > r.multi_channel_bound + VIOLATION_SLACK;
            Output { violation, rows: Rows::Record(to_value(&r)), summary: None }
        }
        Command::Saturate => {
            let report = saturation_experiment(g.d1, g.d2, g.p, g.epsilon)?;
            let predicted = saturation_first_order(g.d1, g.d2, g.p, g.epsilon)?;
            let violation = report.violates_separable;
            Output { violation, rows: Rows::Record(json!({ "report": report, "first_order": predicted })), summary: None }
        }
        Command::Witness { input } => {
            let text = std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
            let (rho, _) = state_from_json(&text).with_context(|| format!("parsing {}", input.display()))?;
            let f = witness_value(&rho)?;
            let record = json!({
                "F": f,
                "concurrence": concurrence(&rho)?,
                "violates_separable_bound": f > VIOLATION_SLACK,
            });
            Output { violation: false, rows: Rows::Record(record), summary: None }
        }
        Command::Search { space } => {
            let space = match space {
                Space::Entangled => SearchSpace::Entangled,
                Space::Product => SearchSpace::Product,
            };
            let r = violation_search_in(&cfg, space)?;
            let violation =
                r.report.violates_entangled || (space == SearchSpace::Product && r.report.violates_separable);
            Output { violation, rows: Rows::Record(to_value(&r)), summary: None }
        }
        Command::BellPairs { pairs } => {
            let r = bell_pairs(*pairs, g.epsilon)?;
            Output { violation: r.violates_multi_channel_bound, rows: Rows::Record(to_value(&r)), summary: None }
        }
    })
}

/// Nested objects become dotted keys; arrays are kept as JSON text.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, inner, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn write_rows<W: Write>(rows: &Rows, format: Format, w: W) -> Result<()> {
    match format {
        Format::Json => {
            let mut w = BufWriter::new(w);
            match rows {
                Rows::Reports(reports) => {
                    for r in reports {
                        serde_json::to_writer(&mut w, r)?;
                        writeln!(w)?;
                    }
                }
                Rows::Record(v) => {
                    serde_json::to_writer(&mut w, v)?;
                    writeln!(w)?;
                }
            }
            w.flush()?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(w);
            match rows {
                Rows::Reports(reports) => {
                    for (trial, r) in reports.iter().enumerate() {
                        w.serialize(CsvRow {
                            trial,
                            class: r.state_class.to_string(),
                            distance: r.measured_distance,
                            sep_bound: r.separable_bound,
                            ent_bound: r.entangled_bound,
                            violates_sep: r.violates_separable,
                            violates_ent: r.violates_entangled,
                        })?;
                    }
                }
                Rows::Record(v) => {
                    let mut cells = Vec::new();
                    flatten("", v, &mut cells);
                    w.write_record(cells.iter().map(|(k, _)| k))?;
                    w.write_record(cells.iter().map(|(_, v)| v))?;
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn emit(cli: &Cli, output: &Output) -> Result<()> {
    let g = &cli.global;
    let summary_line = output.summary.as_ref().map(|s| serde_json::to_string(s).expect("plain data"));
    match &g.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_rows(&output.rows, g.format, file)?;
            if let Some(line) = summary_line {
                println!("{line}");
            }
        }
        None => {
            write_rows(&output.rows, g.format, io::stdout().lock())?;
            if let Some(line) = summary_line {
                match g.format {
                    Format::Json => println!("{line}"),
                    Format::Csv => eprintln!("{line}"),
                }
            }
        }
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    let threads = match std::env::var(THREADS_VAR) {
        Ok(v) => v.trim().parse::<usize>().with_context(|| format!("{THREADS_VAR}={v:?} is not a count"))?,
        Err(std::env::VarError::NotPresent) => 0,
        Err(e) => bail!("{THREADS_VAR}: {e}"),
    };
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = configure_threads().and_then(|()| {
        let output = run(&cli)?;
        emit(&cli, &output)?;
        Ok(output.violation)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("error: a proven bound was violated");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
