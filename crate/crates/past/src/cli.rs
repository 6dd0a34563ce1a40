//! Command-line surface: thin adapters from flags to the library
//! operations, with deterministic output bytes.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::baseline::build_ukkonen;
use crate::bench::{self, run_suite, SuiteConfig};
use crate::builder::{build_past, BuildConfig, ScanMode};
use crate::error::{Error, Result};
use crate::ingest::{self, read_fasta, read_text, RecordMeta};
use crate::query::{enumerate_repeats, occurrences};
use crate::sequence::Sequence;
use crate::tree::render_symbols;

#[derive(Debug, Parser)]
#[command(
    name = "past",
    version,
    about = "Alphabet-partitioned parallel k-mer suffix tree indexing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an index and emit it as canonical text or DOT.
    Build(BuildArgs),
    /// Build an index and report the occurrences of a pattern.
    Search(SearchArgs),
    /// Build an index and enumerate repeated windows.
    Repeats(RepeatsArgs),
    /// Run timed construction sweeps and emit CSV or a table.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Fasta,
    Text,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmitFormat {
    Canonical,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchEmit {
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanModeArg {
    SingleScan,
    PerSymbolScan,
}

impl From<ScanModeArg> for ScanMode {
    fn from(arg: ScanModeArg) -> ScanMode {
        match arg {
            ScanModeArg::SingleScan => ScanMode::SingleScan,
            ScanModeArg::PerSymbolScan => ScanMode::PerSymbolScan,
        }
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input file.
    #[arg(long)]
    pub input: PathBuf,

    /// Input format; auto sniffs FASTA by a leading '>'.
    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    pub format: InputFormat,

    /// Uppercase ASCII symbols before indexing.
    #[arg(long)]
    pub normalize_case: bool,

    /// Keep line breaks in plain-text inputs.
    #[arg(long)]
    pub keep_newlines: bool,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Window size; required unless --baseline is given.
    #[arg(long)]
    pub k: Option<usize>,

    /// Worker threads for branch construction.
    #[arg(long, env = "PAST_WORKERS")]
    pub workers: Option<usize>,

    /// Build the sequential full-tree baseline instead.
    #[arg(long)]
    pub baseline: bool,

    #[arg(long, value_enum, default_value_t = ScanModeArg::SingleScan)]
    pub scan_mode: ScanModeArg,

    #[arg(long, value_enum, default_value_t = EmitFormat::Canonical)]
    pub emit: EmitFormat,

    /// Write output here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Window size of the index.
    #[arg(long)]
    pub k: usize,

    /// Pattern to look up (at most k symbols).
    #[arg(long)]
    pub pattern: String,

    #[arg(long, env = "PAST_WORKERS")]
    pub workers: Option<usize>,

    /// Report positions as record:offset instead of global coordinates.
    #[arg(long)]
    pub record_coords: bool,

    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RepeatsArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Repeat size (the window size of the index).
    #[arg(long)]
    pub k: usize,

    /// Report windows occurring at least this many times.
    #[arg(long, default_value_t = 2)]
    pub min_count: usize,

    /// Constrain k to the microsatellite unit range 2..=6.
    #[arg(long)]
    pub microsatellite: bool,

    #[arg(long, env = "PAST_WORKERS")]
    pub workers: Option<usize>,

    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Synthetic input sizes in MB (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,

    /// Benchmark a file instead of synthetic inputs.
    #[arg(long)]
    pub input: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    pub format: InputFormat,

    #[arg(long)]
    pub normalize_case: bool,

    /// Window sizes to sweep (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "5")]
    pub ks: Vec<usize>,

    /// Worker counts to sweep (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub workers: Vec<usize>,

    /// Also time the sequential baseline per input.
    #[arg(long)]
    pub baseline: bool,

    /// Per-run timeout in seconds; exceeding it marks the row n/a.
    #[arg(long, default_value_t = 600.0)]
    pub timeout: f64,

    /// Repetitions per measurement; the minimum is reported.
    #[arg(long, default_value_t = 1)]
    pub reps: usize,

    /// Alphabet size for synthetic inputs (4 = DNA, 20 = protein).
    #[arg(long, default_value_t = 4)]
    pub sigma: usize,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t = BenchEmit::Table)]
    pub emit: BenchEmit,

    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Rendered output of one command: the primary document plus side notes
/// that go to stderr.
#[derive(Debug, Default)]
pub struct CmdOutput {
    pub primary: String,
    pub notes: Vec<String>,
}

/// Parses arguments, runs the command, and reports: 0 on success, 1 with
/// the error name on a module error, 2 on usage errors.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.exit_code() == 0 { 0 } else { 2 };
            let _ = err.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(out) => {
            for note in &out.notes {
                eprintln!("{note}");
            }
            print!("{}", out.primary);
            0
        }
        Err(Error::InvalidArgs(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(err) => {
            eprintln!("error: {}: {err}", err.name());
            1
        }
    }
}

/// Runs one command and renders its output. Every path is a thin adapter
/// over the library operations; results are identical to calling them
/// directly with the same parameters.
pub fn execute(command: &Command) -> Result<CmdOutput> {
    match command {
        Command::Build(args) => run_build(args),
        Command::Search(args) => run_search(args),
        Command::Repeats(args) => run_repeats(args),
        Command::Bench(args) => run_bench(args),
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn load_input(args: &InputArgs) -> Result<(Sequence, Vec<RecordMeta>)> {
    let format = match args.format {
        InputFormat::Auto => {
            let mut first = [0u8; 1];
            let sniffed = fs::File::open(&args.input)
                .and_then(|mut f| {
                    use std::io::Read;
                    f.read(&mut first)
                })
                .map_err(|source| Error::Io { path: args.input.clone(), source })?;
            if sniffed == 1 && first[0] == b'>' {
                InputFormat::Fasta
            } else {
                InputFormat::Text
            }
        }
        other => other,
    };
    match format {
        InputFormat::Fasta => read_fasta(&args.input, args.normalize_case),
        InputFormat::Text | InputFormat::Auto => {
            let seq = read_text(&args.input, !args.keep_newlines, args.normalize_case)?;
            let metas = vec![RecordMeta { id: String::new(), global_start: 0, length: seq.len() }];
            Ok((seq, metas))
        }
    }
}

fn write_or_return(output: &Option<PathBuf>, primary: String, notes: Vec<String>) -> Result<CmdOutput> {
    match output {
        Some(path) => {
            fs::write(path, &primary)
                .map_err(|source| Error::Io { path: path.clone(), source })?;
            Ok(CmdOutput { primary: String::new(), notes })
        }
        None => Ok(CmdOutput { primary, notes }),
    }
}

fn run_build(args: &BuildArgs) -> Result<CmdOutput> {
    let (seq, _) = load_input(&args.input)?;
    let tree = if args.baseline {
        build_ukkonen(&seq)?
    } else {
        let k = args
            .k
            .ok_or_else(|| Error::InvalidArgs("--k is required unless --baseline is given".into()))?;
        let cfg = BuildConfig::new(k)
            .workers(args.workers.unwrap_or_else(default_workers))
            .scan_mode(args.scan_mode.into());
        build_past(&seq, &cfg)?
    };
    let rendered = match args.emit {
        EmitFormat::Canonical => ingest::to_canonical(&tree, &seq),
        EmitFormat::Dot => ingest::to_dot(&tree, &seq),
    };
    write_or_return(&args.output, rendered, Vec::new())
}

fn format_position(pos: usize, metas: &[RecordMeta], record_coords: bool) -> String {
    if !record_coords {
        return pos.to_string();
    }
    for (idx, meta) in metas.iter().enumerate() {
        if pos >= meta.global_start && pos < meta.global_start + meta.length {
            let id = if meta.id.is_empty() { idx.to_string() } else { meta.id.clone() };
            return format!("{id}:{}", pos - meta.global_start);
        }
    }
    pos.to_string()
}

fn run_search(args: &SearchArgs) -> Result<CmdOutput> {
    let (seq, metas) = load_input(&args.input)?;
    let cfg = BuildConfig::new(args.k).workers(args.workers.unwrap_or_else(default_workers));
    let tree = build_past(&seq, &cfg)?;
    let positions = occurrences(&tree, &seq, args.pattern.as_bytes())?;
    let line = if positions.is_empty() {
        format!("{}: 0 occurrences\n", args.pattern)
    } else {
        let rendered: Vec<String> = positions
            .iter()
            .map(|&p| format_position(p, &metas, args.record_coords))
            .collect();
        format!("{}: {} occurrences at {}\n", args.pattern, positions.len(), rendered.join(", "))
    };
    write_or_return(&args.output, line, Vec::new())
}

fn run_repeats(args: &RepeatsArgs) -> Result<CmdOutput> {
    if args.microsatellite && !(2..=6).contains(&args.k) {
        return Err(Error::InvalidArgs(format!(
            "--microsatellite constrains --k to 2..=6, got {}",
            args.k
        )));
    }
    let (seq, _) = load_input(&args.input)?;
    let cfg = BuildConfig::new(args.k).workers(args.workers.unwrap_or_else(default_workers));
    let tree = build_past(&seq, &cfg)?;
    let hits = enumerate_repeats(&tree, &seq, args.min_count)?;
    let mut rendered = String::new();
    for hit in &hits {
        let positions: Vec<String> = hit.positions.iter().map(usize::to_string).collect();
        rendered.push_str(&format!(
            "{}\t{}\t{}\n",
            render_symbols(&hit.kmer),
            hit.count,
            positions.join(",")
        ));
    }
    write_or_return(&args.output, rendered, Vec::new())
}

fn synthetic_alphabet(sigma: usize) -> Result<Vec<u8>> {
    match sigma {
        4 => Ok(bench::DNA.to_vec()),
        20 => Ok(bench::PROTEIN20.to_vec()),
        1..=26 => Ok((b'a'..=b'z').take(sigma).collect()),
        _ => Err(Error::InvalidArgs(format!("--sigma must be in 1..=26, got {sigma}"))),
    }
}

fn run_bench(args: &BenchArgs) -> Result<CmdOutput> {
    let inputs: Vec<(Sequence, usize)> = if let Some(path) = &args.input {
        let input_args = InputArgs {
            input: path.clone(),
            format: args.format,
            normalize_case: args.normalize_case,
            keep_newlines: false,
        };
        let (seq, _) = load_input(&input_args)?;
        let size = seq.len();
        vec![(seq, size)]
    } else {
        if args.sizes.is_empty() {
            return Err(Error::InvalidArgs("bench needs --sizes or --input".into()));
        }
        let alphabet = synthetic_alphabet(args.sigma)?;
        args.sizes
            .iter()
            .enumerate()
            .map(|(i, &mb)| {
                let bytes = mb * 1024 * 1024;
                (bench::random_text(bytes, &alphabet, args.seed.wrapping_add(i as u64)), bytes)
            })
            .collect()
    };

    let cfg = SuiteConfig {
        ks: args.ks.clone(),
        workers: args.workers.clone(),
        baseline: args.baseline,
        repetitions: args.reps,
        timeout: Duration::from_secs_f64(args.timeout),
    };
    let result = run_suite(&inputs, &cfg)?;

    let primary = match args.emit {
        BenchEmit::Csv => ingest::bench_csv(&result.rows),
        BenchEmit::Table => ingest::render_table(&result.rows),
    };
    let notes = result
        .speedups
        .iter()
        .map(|p| {
            format!(
                "speedup {} text_size_mb={} k={} workers={}: {:.3}",
                p.kind.label(),
                p.text_size / (1024 * 1024),
                p.k,
                p.workers,
                p.ratio
            )
        })
        .collect();
    write_or_return(&args.output, primary, notes)
}
