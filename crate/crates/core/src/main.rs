use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cgrdst::cgr::{cgr_trajectory, historyless_points, CENTER};
use cgrdst::config::{build_model, parse_floats, read_model_config};
use cgrdst::experiments::{run_histogram, run_trace, worked_example_regression, ExperimentConfig};
use cgrdst::genfun::{bound_grid, gamma_bound_check, BoundReport, GenFunEval, WordAnalysis};
use cgrdst::output::{fmt_f64, open_output};
use cgrdst::sequence::{generate, read_fasta, write_fasta, Origin, Sequence};
use cgrdst::tree::{CgrTree, Snapshot};
use cgrdst::{rate_constants, Error, Result, SequenceModel, Word};

#[derive(Parser)]
#[command(name = "cgrdst", version, about = "Chaos Game Representation trees of DNA sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Model file with `kind`, `p`, `Q` and `seed` keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// iid or markov.
    #[arg(long)]
    model: Option<String>,
    /// Letter probabilities a,c,g,t.
    #[arg(long, allow_hyphen_values = true)]
    probs: Option<String>,
    /// Transition matrix, 16 values row-major.
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Clone)]
struct SourceArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Read the first record of a FASTA file instead of generating.
    #[arg(long)]
    fasta: Option<PathBuf>,
    /// Letters to generate.
    #[arg(long, default_value_t = 1000)]
    n: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a sequence and write it as FASTA.
    Generate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print h+, h, h- and the optimal cycles.
    Constants {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the CGR-tree and dump its nodes.
    Build {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shortest, longest and last insertion depth, every `stride` letters.
    Stats {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        stride: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CGR points of the sequence.
    CgrPoints {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Subsquare centers of every tree node.
    Historyless {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the waiting-time generating functions of a word.
    Genfun {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        t: f64,
        /// Also check |gamma_r(t) - 1| against its bound on a 101-point grid.
        #[arg(long)]
        bound_check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Normalized l_n, L_n and D_n along one growing tree.
    Trace {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        stride: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Terminal statistics of independent replicate trees.
    Histogram {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        replicates: usize,
        /// Run replicates one after another.
        #[arg(long)]
        serial: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the 16-letter worked example.
    Regress,
}

const DEFAULT_SEED: u64 = 20_100_704;

/// Model and seed from the config file, overridden by flags.
fn resolve_model(args: &ModelArgs) -> Result<(SequenceModel, u64)> {
    let file = args.config.as_ref().map(read_model_config).transpose()?;
    let seed = args.seed.or(file.as_ref().and_then(|f| f.seed)).unwrap_or(DEFAULT_SEED);
    if args.model.is_none() && args.probs.is_none() && args.q.is_none() {
        if let Some(f) = file {
            return Ok((f.model, seed));
        }
    }
    let p = args.probs.as_deref().map(parse_floats).transpose()?;
    let q = args.q.as_deref().map(parse_floats).transpose()?;
    let kind = args.model.clone().unwrap_or_else(|| if q.is_some() { "markov".into() } else { "iid".into() });
    let model = if kind == "iid" && p.is_none() {
        SequenceModel::uniform()
    } else {
        build_model(&kind, p.as_deref(), q.as_deref())?
    };
    Ok((model, seed))
}

fn load_source(source: &SourceArgs) -> Result<Sequence> {
    match &source.fasta {
        Some(path) => {
            let mut records = read_fasta(path)?;
            if records.is_empty() {
                return Err(Error::EmptyFile(path.clone()));
            }
            let seq = records.swap_remove(0);
            if let Origin::File { skipped, record_id, .. } = seq.origin() {
                if *skipped > 0 {
                    eprintln!("{record_id}: skipped {skipped} non-ACGT symbols");
                }
            }
            Ok(seq)
        }
        None => {
            let (model, seed) = resolve_model(&source.model)?;
            Ok(generate(&model, source.n, seed))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate { model, n, out } => {
            let (model, seed) = resolve_model(&model)?;
            let seq = generate(&model, n, seed);
            let mut w = open_output(out.as_deref(), "sequence.fa")?;
            write_fasta(&mut w, &format!("{} n={n} seed={seed}", model.kind().as_str()), &seq)?;
            w.flush()?;
        }
        Command::Constants { model, out } => {
            let (model, _) = resolve_model(&model)?;
            let c = rate_constants(&model)?;
            let mut w = open_output(out.as_deref(), "constants.csv")?;
            writeln!(w, "{}", cgrdst::RateConstants::CSV_HEADER)?;
            writeln!(w, "{}", c.csv_row())?;
            w.flush()?;
        }
        Command::Build { source, out } => {
            let seq = load_source(&source)?;
            let tree = CgrTree::from_letters(seq.letters());
            let mut w = open_output(out.as_deref(), "tree.csv")?;
            tree.write_dump(&mut w)?;
            w.flush()?;
        }
        Command::Stats { source, stride, out } => {
            let seq = load_source(&source)?;
            let mut w = open_output(out.as_deref(), "stats.csv")?;
            writeln!(w, "{}", Snapshot::CSV_HEADER)?;
            let mut tree = CgrTree::with_capacity(seq.len());
            let n = seq.len();
            for &u in seq.letters() {
                let rec = tree.insert_letter(u);
                let emit = rec.n == n || stride.is_some_and(|s| s > 0 && rec.n.is_multiple_of(s));
                if emit {
                    if let Some(snap) = Snapshot::of(&tree) {
                        writeln!(w, "{}", snap.csv_row())?;
                    }
                }
            }
            w.flush()?;
        }
        Command::CgrPoints { source, out } => {
            let seq = load_source(&source)?;
            let mut w = open_output(out.as_deref(), "cgr_points.csv")?;
            writeln!(w, "index,x,y")?;
            for p in cgr_trajectory(seq.letters(), CENTER) {
                writeln!(w, "{},{},{}", p.index, fmt_f64(p.x), fmt_f64(p.y))?;
            }
            w.flush()?;
        }
        Command::Historyless { source, out } => {
            let seq = load_source(&source)?;
            let tree = CgrTree::from_letters(seq.letters());
            let mut w = open_output(out.as_deref(), "historyless.csv")?;
            writeln!(w, "word,x,y")?;
            for (word, (x, y)) in historyless_points(&tree) {
                writeln!(w, "{word},{},{}", fmt_f64(x), fmt_f64(y))?;
            }
            w.flush()?;
        }
        Command::Genfun { model, word, t, bound_check, out } => {
            let (model, _) = resolve_model(&model)?;
            let word: Word = word.parse()?;
            let analysis = WordAnalysis::new(&model, word.clone())?;
            let eval = analysis.evaluate(t)?;
            let mut w = open_output(out.as_deref(), "genfun.csv")?;
            writeln!(w, "{}", GenFunEval::CSV_HEADER)?;
            writeln!(w, "{}", eval.csv_row(&word))?;
            w.flush()?;
            if bound_check {
                let report = gamma_bound_check(&analysis, &bound_grid(&model, 101))?;
                let mut w = open_output(out.as_deref(), "bound_check.csv")?;
                writeln!(w, "{}", BoundReport::CSV_HEADER)?;
                writeln!(w, "{}", report.csv_row())?;
                w.flush()?;
                if !report.ok {
                    return Ok(ExitCode::FAILURE);
                }
            }
        }
        Command::Trace { model, n, stride, out } => {
            let (model, seed) = resolve_model(&model)?;
            let config = ExperimentConfig { model, n, replicates: 1, seed, trace_stride: stride, out: out.clone(), parallel: false };
            let report = run_trace(&config)?;
            if out.is_none() {
                let mut w = open_output(None, "")?;
                report.write_csv(&mut w)?;
                w.flush()?;
            }
        }
        Command::Histogram { model, n, replicates, serial, out } => {
            let (model, seed) = resolve_model(&model)?;
            let config =
                ExperimentConfig { model, n, replicates, seed, trace_stride: 1, out: out.clone(), parallel: !serial };
            let report = run_histogram(&config)?;
            if out.is_none() {
                let mut w = open_output(None, "")?;
                report.write_csv(&mut w)?;
                w.flush()?;
            }
        }
        Command::Regress => {
            let report = worked_example_regression();
            print!("{report}");
            if !report.passed() {
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
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
