//! `hamcycle`: command-line front end for the pipeline, the oracles and the
//! evaluation harness.
//!
//! Exit codes: 0 success, 1 input or other error, 2 budget exhausted,
//! 3 discrepancies found under `sweep --fail-on-discrepancy`.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hamcycle_core::cycles::{
    enumerate_cycles, find_full_cycle_sets, spanning_cycle_set, BoundaryRule, Budget, CxMode,
    CycleSetTrace,
};
use hamcycle_core::graph::{emit_graph6, parse_edge_list, parse_graph6};
use hamcycle_core::harness::{
    cycle_set_consistency, export_dot, minimize_counterexample, sweep, Annotations, SweepSettings,
};
use hamcycle_core::oracle::hamiltonian_backtrack;
use hamcycle_core::reduction::eliminate_unusable_edges;
use hamcycle_core::{decide, Error, Graph, PipelineConfig, Verdict};

#[derive(Parser)]
#[command(name = "hamcycle", version, about = "Cycle-set Hamiltonicity pipeline and oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Graph6,
    EdgeList,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Oracle,
    Procedural,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetChoice {
    /// Every simple cycle.
    All,
    Full,
    Spanning,
}

#[derive(Args)]
struct InputArgs {
    /// Graph file, or `-` for stdin.
    #[arg(long, default_value = "-")]
    input: String,
    /// graph6 takes one graph per line; edge-list holds a single graph.
    #[arg(long, value_enum, default_value = "graph6")]
    format: Format,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long, value_enum, default_value = "oracle")]
    mode: Mode,
    /// Boundary vertices must have degree 2 with both edges at R = 1.
    #[arg(long)]
    strict_boundary: bool,
    #[arg(long, default_value_t = Budget::default().cycles)]
    budget_cycles: usize,
    #[arg(long, default_value_t = Budget::default().sets)]
    budget_sets: usize,
    #[arg(long, default_value_t = Budget::default().search)]
    budget_search: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Which full cycle-set drives the removal stage.
    #[arg(long, default_value_t = 0)]
    set_index: usize,
}

impl PipelineArgs {
    fn config(&self) -> PipelineConfig {
        PipelineConfig {
            mode: match self.mode {
                Mode::Oracle => CxMode::Oracle,
                Mode::Procedural => CxMode::Procedural,
            },
            boundary: if self.strict_boundary {
                BoundaryRule::Strict
            } else {
                BoundaryRule::Relaxed
            },
            budget: Budget {
                cycles: self.budget_cycles,
                sets: self.budget_sets,
                search: self.budget_search,
            },
            seed: self.seed,
            set_index: self.set_index,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the pipeline; prints the JSON-lines trace of each graph.
    Decide {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact Hamiltonicity with a witness cycle.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Degree-forcing edge elimination.
    Reduce {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Enumerate cycles or build cycle-sets.
    Cycles {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long, value_enum, default_value = "all")]
        kind: SetChoice,
    },
    /// Pipeline against the oracle on every connected graph in a range.
    Sweep {
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Discrepancy records, one JSON object per line.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report file; stdout when absent.
        #[arg(long)]
        report: Option<PathBuf>,
        /// graph6 corpus for orders beyond internal enumeration.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        no_minimize: bool,
        /// Also compare verdicts across up to this many full cycle-sets.
        #[arg(long)]
        consistency_sets: Option<usize>,
        #[arg(long)]
        fail_on_discrepancy: bool,
    },
    /// Compare verdicts across up to k full cycle-sets of each graph.
    Consistency {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Shrink a discrepancy to a locally minimal one.
    Minimize {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// DOT rendering, optionally annotated with a cycle-set's labels and roles.
    Dot {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long, value_enum)]
        annotate: Option<SetChoice>,
    },
}

fn read_graphs(args: &InputArgs) -> Result<Vec<Graph>, Error> {
    let mut text = String::new();
    if args.input == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = fs::read_to_string(&args.input)?;
    }
    match args.format {
        Format::EdgeList => Ok(vec![parse_edge_list(&text)?]),
        Format::Graph6 => {
            let graphs: Vec<Graph> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(parse_graph6)
                .collect::<Result<_, _>>()?;
            if graphs.is_empty() {
                return Err(Error::Input {
                    line: None,
                    message: "no graphs in input".into(),
                });
            }
            Ok(graphs)
        }
    }
}

fn g6(g: &Graph) -> Option<String> {
    emit_graph6(g).ok()
}

struct Output {
    sink: Box<dyn Write>,
}

impl Output {
    fn to(path: Option<&PathBuf>) -> Result<Output, Error> {
        Ok(Output {
            sink: match path {
                Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
                None => Box::new(io::stdout().lock()),
            },
        })
    }

    fn line(&mut self, text: &str) -> Result<(), Error> {
        writeln!(self.sink, "{text}")?;
        Ok(())
    }
}

const BUDGET_EXIT: u8 = 2;
const DISCREPANCY_EXIT: u8 = 3;

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Decide { input, pipeline, out } => {
            let cfg = pipeline.config();
            let mut output = Output::to(out.as_ref())?;
            let mut undecided = false;
            for g in read_graphs(&input)? {
                let report = decide(&g, &cfg)?;
                undecided |= report.verdict == Verdict::Undecided;
                write!(output.sink, "{}", report.to_trace_lines())?;
                eprintln!("{} {}", g6(&g).unwrap_or_default(), report.verdict);
            }
            Ok(if undecided { BUDGET_EXIT } else { 0 })
        }
        Command::Oracle { input } => {
            let mut output = Output::to(None)?;
            for g in read_graphs(&input)? {
                let witness = hamiltonian_backtrack(&g);
                output.line(
                    &json!({
                        "graph6": g6(&g),
                        "hamiltonian": witness.is_some(),
                        "cycle": witness.as_ref().map(|c| c.vertices().to_vec()),
                    })
                    .to_string(),
                )?;
            }
            Ok(0)
        }
        Command::Reduce { input } => {
            let mut output = Output::to(None)?;
            for g in read_graphs(&input)? {
                let r = eliminate_unusable_edges(&g)?;
                output.line(
                    &json!({
                        "graph6": g6(&g),
                        "eliminated": r.eliminated,
                        "forced": r.forced,
                        "rejected": r.rejected,
                        "reduced": g6(&r.reduced),
                    })
                    .to_string(),
                )?;
            }
            Ok(0)
        }
        Command::Cycles { input, pipeline, kind } => {
            let cfg = pipeline.config();
            let mut output = Output::to(None)?;
            for g in read_graphs(&input)? {
                match kind {
                    SetChoice::All => {
                        for c in enumerate_cycles(&g, cfg.budget.cycles)? {
                            output.line(&serde_json::to_string(c.vertices())?)?;
                        }
                    }
                    SetChoice::Full => {
                        for set in find_full_cycle_sets(&g, &cfg.budget, cfg.seed)? {
                            output.line(&serde_json::to_string(&CycleSetTrace::from(&set))?)?;
                        }
                    }
                    SetChoice::Spanning => {
                        let set = spanning_cycle_set(&g, &cfg.budget)?;
                        output.line(&serde_json::to_string(&CycleSetTrace::from(&set))?)?;
                    }
                }
            }
            Ok(0)
        }
        Command::Sweep {
            n_min,
            n_max,
            pipeline,
            out,
            report,
            corpus,
            jobs,
            no_minimize,
            consistency_sets,
            fail_on_discrepancy,
        } => {
            let settings = SweepSettings {
                n_min,
                n_max,
                pipeline: pipeline.config(),
                minimize: !no_minimize,
                consistency_sets,
            };
            // Open the report file before the sweep so a bad path fails fast.
            let mut report_out = Output::to(report.as_ref())?;
            let corpus = corpus.map(fs::read_to_string).transpose()?;
            let outcome = sweep(&settings, jobs, corpus.as_deref(), out.as_deref())?;
            report_out.line(&outcome.report.to_json())?;
            let r = &outcome.report;
            eprintln!(
                "processed {} graphs in {:.1}s: {} agree, {} disagree, {} undecided",
                r.processed(),
                outcome.elapsed.as_secs_f64(),
                r.matrix.agreements(),
                r.matrix.disagreements(),
                r.matrix.undecided()
            );
            let found = r.records.discrepancies + r.records.inconsistencies;
            Ok(if fail_on_discrepancy && found > 0 {
                DISCREPANCY_EXIT
            } else if r.matrix.undecided() > 0 {
                BUDGET_EXIT
            } else {
                0
            })
        }
        Command::Consistency { input, pipeline, k } => {
            let cfg = pipeline.config();
            let mut output = Output::to(None)?;
            for g in read_graphs(&input)? {
                let result = cycle_set_consistency(&g, k, &cfg)?;
                let mut value = serde_json::to_value(&result)?;
                value["graph6"] = json!(g6(&g));
                output.line(&value.to_string())?;
            }
            Ok(0)
        }
        Command::Minimize { input, pipeline } => {
            let cfg = pipeline.config();
            let mut output = Output::to(None)?;
            for g in read_graphs(&input)? {
                let small = minimize_counterexample(&g, &cfg)?;
                output.line(&emit_graph6(&small)?)?;
            }
            Ok(0)
        }
        Command::Dot {
            input,
            pipeline,
            annotate,
        } => {
            let cfg = pipeline.config();
            let mut output = Output::to(None)?;
            for g in read_graphs(&input)? {
                let ann = match annotate {
                    None => None,
                    Some(SetChoice::Spanning) => {
                        let set = spanning_cycle_set(&g, &cfg.budget)?.with_boundary_rule(cfg.boundary);
                        Some(Annotations::from_cycle_set(&set))
                    }
                    Some(_) => {
                        let sets = find_full_cycle_sets(&g, &cfg.budget, cfg.seed)?;
                        let set = sets.into_iter().nth(cfg.set_index).ok_or_else(|| Error::Input {
                            line: None,
                            message: format!("full cycle-set {} not found", cfg.set_index),
                        })?;
                        Some(Annotations::from_cycle_set(&set.with_boundary_rule(cfg.boundary)))
                    }
                };
                write!(output.sink, "{}", export_dot(&g, ann.as_ref()))?;
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_budget() { BUDGET_EXIT } else { 1 })
        }
    }
}
