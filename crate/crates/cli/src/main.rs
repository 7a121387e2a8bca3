//! Command-line front end for the corpus analysis pipeline.

mod commands;
mod pool;
mod svg;
mod synthspec;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "trackline",
    version,
    about = "Audio corpus analysis: feature trails, chords and keys, similarity, trends, classifiers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
pub enum Level {
    Song,
    Album,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
pub enum Task {
    Album,
    Year,
    Era,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
pub enum Model {
    Mlp,
    Nb,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
pub enum Subset {
    All,
    Rhythm,
    Spectral,
    Mfcc,
    P90,
    Harmonicity,
}

impl Subset {
    fn to_core(self) -> trackline_core::corpus::FeatureSubset {
        use trackline_core::corpus::FeatureSubset as F;
        match self {
            Subset::All => F::All,
            Subset::Rhythm => F::Rhythm,
            Subset::Spectral => F::Spectral,
            Subset::Mfcc => F::Mfcc,
            Subset::P90 => F::P90,
            Subset::Harmonicity => F::Harmonicity,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic test corpus (WAVs + manifest) from a spec file
    Synth {
        /// Corpus spec: CSV with song_id,kind,params,album,year[,title]
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, env = "TRACKLINE_OUT")]
        out: PathBuf,
        /// Base seed for songs that do not pin their own
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Extract 41-feature trails and song summaries for every manifest track
    Extract {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, env = "TRACKLINE_OUT")]
        out: PathBuf,
        /// Worker threads (default: available parallelism)
        #[arg(long)]
        workers: Option<usize>,
        /// Suppress per-song progress on stderr
        #[arg(long)]
        quiet: bool,
    },
    /// Chord events, local keys, transition statistics, and harmonic rhythm
    Chords {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, env = "TRACKLINE_OUT")]
        out: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        quiet: bool,
    },
    /// Pairwise similarity matrix (CSV + shaded SVG) over songs or albums
    Similarity {
        #[arg(long)]
        manifest: PathBuf,
        /// Summaries CSV from `extract` (defaults to <out>/summaries.csv)
        #[arg(long)]
        summaries: Option<PathBuf>,
        #[arg(long, env = "TRACKLINE_OUT")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Subset::All)]
        subset: Subset,
        #[arg(long, value_enum, default_value_t = Level::Song)]
        level: Level,
    },
    /// Per-feature chronological trend fits, scatter plots, stacked trails
    Trend {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        summaries: Option<PathBuf>,
        #[arg(long, env = "TRACKLINE_OUT")]
        out: PathBuf,
        /// Feature indices to plot, comma separated (default: 4 lowest-p)
        #[arg(long, value_delimiter = ',')]
        features: Vec<usize>,
        /// Also emit a stacked-trail plot of the plotted features
        #[arg(long)]
        stacked: bool,
        /// Vertical offset between stacked trails
        #[arg(long, default_value_t = 0.5)]
        offset: f64,
    },
    /// Album/year/era classification with a song-preserving 50/50 split
    Classify {
        #[arg(long)]
        manifest: PathBuf,
        /// Directory holding per-song trail CSVs (defaults to <out>/trails)
        #[arg(long)]
        features_dir: Option<PathBuf>,
        #[arg(long, env = "TRACKLINE_OUT")]
        out: PathBuf,
        #[arg(long, value_enum)]
        task: Task,
        #[arg(long, value_enum, default_value_t = Model::Nb)]
        model: Model,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Representativeness ranking from a similarity matrix CSV
    Rank {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, env = "TRACKLINE_OUT")]
        out: PathBuf,
    },
    /// Per-feature Spearman correlation between two summary sets
    Compare {
        #[arg(long)]
        summaries_a: PathBuf,
        #[arg(long)]
        summaries_b: PathBuf,
        #[arg(long, env = "TRACKLINE_OUT")]
        out: PathBuf,
    },
    /// Full pipeline: extract, chords, similarity, trends, and ranking
    Report {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, env = "TRACKLINE_OUT")]
        out: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        quiet: bool,
    },
}

/// Exit codes: 0 success, 1 data/partial failure, 2 usage error (from clap).
fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth { spec, out, seed } => commands::synth::run(&spec, &out, seed),
        Command::Extract {
            manifest,
            out,
            workers,
            quiet,
        } => commands::extract::run(&manifest, &out, workers, quiet),
        Command::Chords {
            manifest,
            out,
            workers,
            quiet,
        } => commands::chords::run(&manifest, &out, workers, quiet),
        Command::Similarity {
            manifest,
            summaries,
            out,
            subset,
            level,
        } => commands::similarity::run(&manifest, summaries.as_deref(), &out, subset, level),
        Command::Trend {
            manifest,
            summaries,
            out,
            features,
            stacked,
            offset,
        } => commands::trend::run(&manifest, summaries.as_deref(), &out, &features, stacked, offset),
        Command::Classify {
            manifest,
            features_dir,
            out,
            task,
            model,
            seed,
        } => commands::classify::run(&manifest, features_dir.as_deref(), &out, task, model, seed),
        Command::Rank { matrix, out } => commands::rank::run(&matrix, &out),
        Command::Compare {
            summaries_a,
            summaries_b,
            out,
        } => commands::compare::run(&summaries_a, &summaries_b, &out),
        Command::Report {
            manifest,
            out,
            workers,
            quiet,
        } => commands::report::run(&manifest, &out, workers, quiet),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
