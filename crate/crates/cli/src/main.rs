mod commands;
mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Mine implicit discourse relation pairs from dialogue and train a
/// dialogue-feature relation classifier.
#[derive(Parser, Debug)]
#[command(name = "discomine", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract argument pairs from a conversation corpus.
    Mine(MineArgs),
    /// Split mined pairs into train and test files.
    Split(SplitArgs),
    /// Draw a random sample of pairs as a CSV for human annotation.
    AnnotateSample(AnnotateArgs),
    /// Summarize a filled-in annotation CSV.
    Agreement(AgreementArgs),
    /// Train a classifier on mined pairs.
    Train(TrainArgs),
    /// Evaluate a trained classifier on held-out pairs.
    Eval(EvalArgs),
    /// Run the feature-family ablation experiment.
    Ablate(AblateArgs),
    /// Print dataset statistics for a pairs file.
    Stats(StatsArgs),
}

#[derive(Args, Debug)]
pub struct MineArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// `jsonl` (one conversation object per line) or `csv` (one turn per column)
    #[arg(long)]
    format: Option<String>,
    /// Connective lexicon TSV; the built-in lexicon when omitted
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    min_arg_tokens: Option<usize>,
    #[arg(long)]
    window: Option<usize>,
    /// Comma-separated gates to enable, or `none`
    #[arg(long)]
    pos_gates: Option<String>,
    /// Comma-separated patterns to enable (P1, P2)
    #[arg(long)]
    patterns: Option<String>,
    /// Accept arguments without a verb
    #[arg(long)]
    no_require_verb: bool,
    #[arg(long)]
    no_within_turn: bool,
    #[arg(long)]
    no_cross_turn: bool,
}

#[derive(Args, Debug)]
pub struct SplitArgs {
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    test_size: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Keep relation proportions in the test split
    #[arg(long)]
    stratify: bool,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnnotateArgs {
    #[arg(long)]
    pairs: PathBuf,
    #[arg(short = 'n', long = "n")]
    n: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AgreementArgs {
    #[arg(long)]
    annotations: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct TrainOpts {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    l2_penalty: Option<f64>,
    #[arg(long)]
    max_epochs: Option<usize>,
    #[arg(long)]
    convergence_tol: Option<f64>,
    /// Bootstrap-resample the training set in every repeated run
    #[arg(long)]
    resample: bool,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[arg(long)]
    train: PathBuf,
    /// Comma-separated feature families, or `all`
    #[arg(long)]
    families: Option<String>,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    opts: TrainOpts,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    /// Feature space JSON; `space.json` next to the model when omitted
    #[arg(long)]
    space: Option<PathBuf>,
    #[arg(long)]
    test: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
pub struct AblateArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    /// Restrict the plan to rows built from these families
    #[arg(long)]
    families: Option<String>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    opts: TrainOpts,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Mine(a) => commands::mine(a),
        Command::Split(a) => commands::split(a),
        Command::AnnotateSample(a) => commands::annotate_sample(a),
        Command::Agreement(a) => commands::agreement(a),
        Command::Train(a) => commands::train(a),
        Command::Eval(a) => commands::eval(a),
        Command::Ablate(a) => commands::ablate(a),
        Command::Stats(a) => commands::stats(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
