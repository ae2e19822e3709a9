//! Command-line front end: run joins, convert stream formats, generate
//! synthetic streams, and sweep parameter grids.
//!
//! Exit codes: 0 on success, 2 for invalid flags (including out-of-range
//! parameters), 1 for runtime errors, reported by name on standard error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use simjoin::io::{
    generate_stream, read_stream, write_stream, DimDistribution, GeneratorConfig,
    StreamFormat, TimestampModel,
};
use simjoin::{
    run, sort_pairs, Algorithm, Error, IndexKind, Metrics, Params64, SimilarPair64,
    StreamItem64,
};

#[derive(Parser)]
#[command(
    name = "simjoin",
    version,
    about = "Streaming similarity self-join over sparse vector streams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a join over a stream file and emit pairs plus metrics.
    Run(RunArgs),
    /// Convert between the text and binary stream formats.
    Convert(ConvertArgs),
    /// Generate a synthetic stream file.
    Generate(GenerateArgs),
    /// Run a theta x lambda grid and emit one metrics row per cell.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Bin,
}

impl FormatArg {
    fn to_format(self) -> StreamFormat {
        match self {
            FormatArg::Text => StreamFormat::Text,
            FormatArg::Bin => StreamFormat::Binary,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Str,
    Mb,
}

impl AlgorithmArg {
    fn to_algorithm(self) -> Algorithm {
        match self {
            AlgorithmArg::Str => Algorithm::Str,
            AlgorithmArg::Mb => Algorithm::Mb,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum IndexArg {
    Inv,
    L2,
    L2ap,
}

impl IndexArg {
    fn to_kind(self) -> IndexKind {
        match self {
            IndexArg::Inv => IndexKind::Inv,
            IndexArg::L2 => IndexKind::L2,
            IndexArg::L2ap => IndexKind::L2ap,
        }
    }
}

fn parse_theta(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("InvalidThreshold: not a number: {s}"))?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(format!("InvalidThreshold: theta must lie in (0, 1], got {v}"))
    }
}

fn parse_lambda(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("InvalidDecay: not a number: {s}"))?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("InvalidDecay: lambda must be strictly positive, got {v}"))
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    input: PathBuf,
    /// Stream format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, value_parser = parse_theta)]
    theta: f64,
    #[arg(long, value_parser = parse_lambda)]
    lambda: f64,
    #[arg(long, value_enum)]
    algorithm: AlgorithmArg,
    #[arg(long, value_enum)]
    index: IndexArg,
    /// Write pairs here instead of standard output.
    #[arg(long)]
    pairs_out: Option<PathBuf>,
    /// Write the metrics CSV here instead of standard error.
    #[arg(long)]
    metrics_out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    in_format: Option<FormatArg>,
    /// Output format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    out_format: Option<FormatArg>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    count: usize,
    #[arg(long)]
    dims: u32,
    #[arg(long)]
    avg_nnz: usize,
    /// Timestamp model.
    #[arg(long, value_enum, default_value = "sequential")]
    timestamps: TimestampArg,
    /// Poisson arrival rate (with --timestamps poisson).
    #[arg(long, default_value_t = 1.0)]
    rate: f64,
    /// Fixed step (with --timestamps sequential).
    #[arg(long, default_value_t = 1.0)]
    step: f64,
    #[arg(long, value_enum, default_value = "uniform")]
    dim_dist: DimDistArg,
    #[arg(long, default_value_t = 1.1)]
    zipf_exponent: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Output format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TimestampArg {
    Poisson,
    Sequential,
}

#[derive(Clone, Copy, ValueEnum)]
enum DimDistArg {
    Uniform,
    Zipf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, value_enum)]
    algorithm: AlgorithmArg,
    #[arg(long, value_enum)]
    index: IndexArg,
    /// Comma-separated thresholds.
    #[arg(long, value_delimiter = ',', value_parser = parse_theta, required = true)]
    thetas: Vec<f64>,
    /// Comma-separated decay rates.
    #[arg(long, value_delimiter = ',', value_parser = parse_lambda, required = true)]
    lambdas: Vec<f64>,
    #[arg(long)]
    metrics_out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Convert(args) => cmd_convert(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}

fn format_of(path: &Path, explicit: Option<FormatArg>) -> StreamFormat {
    explicit.map_or_else(|| StreamFormat::infer(path), FormatArg::to_format)
}

fn write_pairs<W: Write>(writer: &mut W, pairs: &mut [SimilarPair64]) -> Result<(), Error> {
    sort_pairs(pairs);
    for p in pairs.iter() {
        writeln!(writer, "{} {} {:.6}", p.older, p.newer, p.score)?;
    }
    Ok(())
}

fn emit_metrics(
    dest: &Option<PathBuf>,
    rows: &[String],
) -> Result<(), Error> {
    match dest {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            writeln!(f, "{}", Metrics::CSV_HEADER)?;
            for row in rows {
                writeln!(f, "{row}")?;
            }
        }
        None => {
            eprintln!("{}", Metrics::CSV_HEADER);
            for row in rows {
                eprintln!("{row}");
            }
        }
    }
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<(), Error> {
    let format = format_of(&args.input, args.format);
    let items: Vec<StreamItem64> = read_stream(&args.input, format)?;
    let params = Params64::new(args.theta, args.lambda)?;
    let algorithm = args.algorithm.to_algorithm();
    let kind = args.index.to_kind();
    let mut out = run(items, &params, algorithm, kind)?;

    match &args.pairs_out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            write_pairs(&mut f, &mut out.pairs)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_pairs(&mut lock, &mut out.pairs)?;
        }
    }
    let row = out.metrics.csv_row(
        algorithm.as_str(),
        kind.as_str(),
        args.theta,
        args.lambda,
        params.tau,
    );
    emit_metrics(&args.metrics_out, &[row])
}

fn cmd_convert(args: ConvertArgs) -> Result<(), Error> {
    let in_format = format_of(&args.input, args.in_format);
    let out_format = format_of(&args.output, args.out_format);
    let items: Vec<StreamItem64> = read_stream(&args.input, in_format)?;
    write_stream(&args.output, out_format, &items)
}

fn cmd_generate(args: GenerateArgs) -> Result<(), Error> {
    let timestamps = match args.timestamps {
        TimestampArg::Poisson => TimestampModel::Poisson { rate: args.rate },
        TimestampArg::Sequential => TimestampModel::Sequential { step: args.step },
    };
    let dim_distribution = match args.dim_dist {
        DimDistArg::Uniform => DimDistribution::Uniform,
        DimDistArg::Zipf => DimDistribution::Zipf { exponent: args.zipf_exponent },
    };
    let cfg = GeneratorConfig {
        count: args.count,
        dims: args.dims,
        avg_nnz: args.avg_nnz,
        timestamps,
        dim_distribution,
        seed: args.seed,
    };
    let items: Vec<StreamItem64> = generate_stream(&cfg);
    let format = format_of(&args.out, args.format);
    write_stream(&args.out, format, &items)
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Error> {
    let format = format_of(&args.input, args.format);
    let items: Vec<StreamItem64> = read_stream(&args.input, format)?;
    let algorithm = args.algorithm.to_algorithm();
    let kind = args.index.to_kind();
    let mut rows = Vec::new();
    for &theta in &args.thetas {
        for &lambda in &args.lambdas {
            let params = Params64::new(theta, lambda)?;
            let out = run(items.clone(), &params, algorithm, kind)?;
            rows.push(out.metrics.csv_row(
                algorithm.as_str(),
                kind.as_str(),
                theta,
                lambda,
                params.tau,
            ));
        }
    }
    emit_metrics(&args.metrics_out, &rows)
}
