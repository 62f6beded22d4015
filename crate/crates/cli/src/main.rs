use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use karel_core::delta::{delta_from_text, to_text};
use karel_core::gen::generate_dataset;
use karel_core::harness::{
    dataset_stats, identity_predictions, oracle_predictions, parse_predictions, parse_scores, plan_subsets,
    score_dataset, select_portfolio_model, write_predictions, EvalError,
};
use karel_core::io::{encode_world, read_dataset, read_world, write_world};
use karel_core::{
    apply, diff, execute, parse, tokenize, trace, ExecutionOutcome, GenConfig, Split, SplitPlan, TaskRecord, World,
    DEFAULT_STEP_LIMIT,
};
use log::info;

#[derive(Parser)]
#[command(name = "karel", version, about = "Karel program-induction benchmark toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate train/validation/test datasets.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        train: usize,
        #[arg(long, default_value_t = 0)]
        valid: usize,
        #[arg(long, default_value_t = 0)]
        test: usize,
        /// I/O examples per task (k demonstrations + 1 held out).
        #[arg(long, default_value_t = 6)]
        examples_per_task: usize,
        /// Override the example count for test tasks only.
        #[arg(long)]
        test_examples_per_task: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; the output does not depend on this.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run a program on a world.
    Run {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        world: PathBuf,
        /// Print the world after every action.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = DEFAULT_STEP_LIMIT)]
        step_limit: usize,
    },
    /// Print the delta tokens turning one world into another.
    Diff {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Apply a delta token line to a world.
    Apply {
        #[arg(long)]
        input: PathBuf,
        /// File holding the token line.
        #[arg(long, conflicts_with = "tokens", required_unless_present = "tokens")]
        delta: Option<PathBuf>,
        /// The token line itself.
        #[arg(long)]
        tokens: Option<String>,
    },
    /// Dump the 16-channel feature grid of a world.
    Encode {
        #[arg(long)]
        world: PathBuf,
        /// Zero-pad to a square grid of this size.
        #[arg(long)]
        pad: Option<usize>,
    },
    /// Score prediction files against a dataset.
    Eval {
        /// Prediction file; repeat to compare several runs.
        #[arg(long, required = true)]
        pred: Vec<PathBuf>,
        #[arg(long)]
        data: PathBuf,
        /// Per-task CSV instead of a table.
        #[arg(long)]
        csv: bool,
        /// One CSV row of accuracy and loss per prediction file.
        #[arg(long)]
        curves: bool,
    },
    /// Histograms, densities and uniqueness checks for datasets.
    Stats {
        #[arg(long, required = true)]
        data: Vec<PathBuf>,
        #[arg(long)]
        csv: bool,
        #[arg(long, default_value_t = DEFAULT_STEP_LIMIT)]
        step_limit: usize,
    },
    /// Plan the k-subsets of n demonstrations used for ensembling.
    PlanSubsets {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write baseline predictions for a dataset.
    Predict {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum)]
        kind: Baseline,
    },
    /// Pick the portfolio model with the highest log-likelihood.
    SelectModel {
        /// Lines of `<model_id> <score>`.
        #[arg(long)]
        scores: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Baseline {
    /// The reference delta for every example.
    Oracle,
    /// The empty delta for every example.
    Identity,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_world(path: &Path) -> Result<World> {
    read_world(&read(path)?).with_context(|| format!("parsing world {}", path.display()))
}

fn load_dataset(path: &Path) -> Result<Vec<TaskRecord>> {
    read_dataset(&read(path)?).with_context(|| format!("parsing dataset {}", path.display()))
}

fn gen(
    seed: u64,
    counts: [usize; 3],
    examples_per_task: usize,
    test_examples_per_task: Option<usize>,
    out: &Path,
    jobs: Option<usize>,
) -> Result<()> {
    let plan: Vec<SplitPlan> = Split::ALL
        .into_iter()
        .zip(counts)
        .map(|(split, tasks)| SplitPlan {
            split,
            tasks,
            examples_per_task: match split {
                Split::Test => test_examples_per_task.unwrap_or(examples_per_task),
                _ => examples_per_task,
            },
        })
        .collect();
    let config = GenConfig::with_seed(seed);
    for path in generate_dataset(&config, &plan, out, jobs)? {
        info!("wrote {}", path.display());
        println!("{}", path.display());
    }
    Ok(())
}

fn outcome_line(outcome: &ExecutionOutcome) -> String {
    match outcome {
        ExecutionOutcome::Success { steps, .. } => format!("success steps={steps}"),
        ExecutionOutcome::Crash { step, cause } => format!("crash step={step} cause={cause}"),
        ExecutionOutcome::Timeout { step_limit } => format!("timeout step_limit={step_limit}"),
    }
}

fn run(program: &Path, world: &Path, show_trace: bool, step_limit: usize) -> Result<ExitCode> {
    let src = read(program)?;
    let program = parse(&src).with_context(|| format!("parsing program {}", program.display()))?;
    let world = load_world(world)?;
    let outcome = if show_trace {
        let t = trace(&program, &world, step_limit);
        for (i, (action, after)) in t.steps.iter().enumerate() {
            print!("# step {} {action}\n{}", i + 1, write_world(after));
        }
        t.outcome
    } else {
        execute(&program, &world, step_limit)
    };
    eprintln!("{}", outcome_line(&outcome));
    match outcome {
        ExecutionOutcome::Success { world, .. } => {
            print!("{}", write_world(&world));
            Ok(ExitCode::SUCCESS)
        }
        _ => Ok(ExitCode::from(2)),
    }
}

fn eval(preds: &[PathBuf], data: &Path, csv: bool, curves: bool) -> Result<()> {
    let tasks = load_dataset(data)?;
    let mut rows = String::from("predictions,examples,correct,accuracy_percent,mean_neg_logprob\n");
    for path in preds {
        let file = parse_predictions(&read(path)?);
        let report = match score_dataset(&file, &tasks) {
            Ok(r) => r,
            Err(EvalError::MissingPrediction(keys)) => {
                let shown: Vec<String> = keys.iter().take(5).map(|(t, i)| format!("{t}#{i}")).collect();
                bail!(
                    "{}: {} examples have no prediction (first: {})",
                    path.display(),
                    keys.len(),
                    shown.join(", ")
                );
            }
        };
        if curves {
            let nll = report.mean_neg_logprob.map_or(String::new(), |v| format!("{v:.6}"));
            let _ = writeln!(
                rows,
                "{},{},{},{:.4},{nll}",
                path.display(),
                report.examples,
                report.correct,
                report.accuracy_percent()
            );
        } else if csv {
            print!("{}", report.to_csv());
        } else {
            if preds.len() > 1 {
                println!("== {}", path.display());
            }
            print!("{}", report.to_table());
        }
    }
    if curves {
        print!("{rows}");
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Gen {
            seed,
            train,
            valid,
            test,
            examples_per_task,
            test_examples_per_task,
            out,
            jobs,
        } => gen(seed, [train, valid, test], examples_per_task, test_examples_per_task, &out, jobs)?,
        Command::Run {
            program,
            world,
            trace,
            step_limit,
        } => return run(&program, &world, trace, step_limit),
        Command::Diff { input, output } => {
            let d = diff(&load_world(&input)?, &load_world(&output)?)?;
            println!("{}", to_text(&tokenize(&d)));
        }
        Command::Apply { input, delta, tokens } => {
            let text = match (delta, tokens) {
                (Some(path), _) => read(&path)?,
                (None, Some(t)) => t,
                (None, None) => unreachable!("clap requires one of --delta/--tokens"),
            };
            let d = delta_from_text(text.trim_end_matches(['\n', '\r']))?;
            print!("{}", write_world(&apply(&load_world(&input)?, &d)?));
        }
        Command::Encode { world, pad } => {
            let mut grid = encode_world(&load_world(&world)?);
            if let Some(size) = pad {
                grid = grid.pad_to(size, size)?;
            }
            print!("{}", grid.to_text());
        }
        Command::Eval {
            pred,
            data,
            csv,
            curves,
        } => eval(&pred, &data, csv, curves)?,
        Command::Stats { data, csv, step_limit } => {
            let mut tasks = Vec::new();
            for path in &data {
                tasks.extend(load_dataset(path)?);
            }
            let st = dataset_stats(&tasks, step_limit);
            print!("{}", if csv { st.to_csv() } else { st.to_table() });
        }
        Command::PlanSubsets { n, k, seed } => print!("{}", plan_subsets(n, k, seed)?.to_text()),
        Command::Predict { data, kind } => {
            let tasks = load_dataset(&data)?;
            let recs = match kind {
                Baseline::Oracle => oracle_predictions(&tasks),
                Baseline::Identity => identity_predictions(&tasks),
            };
            print!("{}", write_predictions(&recs));
        }
        Command::SelectModel { scores } => {
            let scores = parse_scores(&read(&scores)?)?;
            println!("{}", select_portfolio_model(&scores)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}
