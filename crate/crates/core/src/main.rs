use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gdfv::bench::{self, BenchConfig, Engine, Mode, Width};
use gdfv::hmm::{self, io, GdfvTableDecoder, GdfvTreeDecoder};
use gdfv::maxplus::DEFAULT_MEMORY_BUDGET;
use gdfv::Error;

#[derive(Parser)]
#[command(name = "gdfv", version, about = "HMM decoding by online (max,+) multiplication")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode an observation file with a model file.
    Decode(DecodeArgs),
    /// Benchmark online matrix-vector multiplication against the trivial product.
    BenchMul(BenchArgs),
    /// Benchmark GDFV decoding against Viterbi.
    BenchDecode(BenchArgs),
    /// Write a random model (and optionally observations).
    GenModel(GenArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Viterbi,
    Gdfv,
    GdfvTable,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ops,
    Wall,
}

#[derive(Args)]
struct DecodeArgs {
    model: PathBuf,
    observations: PathBuf,
    #[arg(long, value_enum, default_value = "gdfv")]
    algorithm: Algorithm,
    #[arg(long, default_value_t = hmm::DEFAULT_ALPHA)]
    alpha: f64,
    /// Block width; overrides --alpha.
    #[arg(long)]
    t: Option<usize>,
    /// Rescale model rows that do not sum to 1.
    #[arg(long)]
    normalize: bool,
    #[arg(long, default_value_t = DEFAULT_MEMORY_BUDGET)]
    mem_budget: u64,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 1024)]
    n: usize,
    /// Block width; overrides --alpha.
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, default_value_t = hmm::DEFAULT_ALPHA)]
    alpha: f64,
    /// Observation length (bench-decode).
    #[arg(long, default_value_t = 1000)]
    m: usize,
    #[arg(long, default_value_t = 4)]
    alphabet: usize,
    #[arg(long, default_value_t = 25)]
    trials: usize,
    /// Vectors per trial (bench-mul).
    #[arg(long, default_value_t = 10_000)]
    vectors: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "ops")]
    mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_MEMORY_BUDGET)]
    mem_budget: u64,
    #[arg(long, value_enum, default_value = "gdfv")]
    algorithm: Algorithm,
    /// CSV destination; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    alphabet: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Model destination; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also draw this many observations uniformly.
    #[arg(long, requires = "obs_out")]
    m: Option<usize>,
    #[arg(long)]
    obs_out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decode(a) => decode(&a),
        Command::BenchMul(a) => bench_cmd(&a, true),
        Command::BenchDecode(a) => bench_cmd(&a, false),
        Command::GenModel(a) => gen_model(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gdfv: {e}");
            match e {
                Error::Mismatch(_) => ExitCode::from(3),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn decode(a: &DecodeArgs) -> gdfv::Result<()> {
    let model = io::load_model(&a.model, a.normalize)?;
    let obs = io::load_observations(&model, &a.observations)?;
    let width = match a.t {
        Some(t) => Width::Fixed(t),
        None => Width::Alpha(a.alpha),
    };
    let result = match a.algorithm {
        Algorithm::Viterbi => hmm::viterbi_baseline(&model, &obs)?.0,
        Algorithm::Gdfv => {
            let t = width.resolve(model.states())?;
            GdfvTreeDecoder::with_width(&model, t, a.mem_budget)?.decode(&obs)?.0
        }
        Algorithm::GdfvTable => {
            let t = width.resolve(model.states())?;
            GdfvTableDecoder::with_width(&model, t, a.mem_budget)?.decode(&obs)?.0
        }
        Algorithm::Brute => hmm::brute_force_decode(&model, &obs)?,
    };
    print!("{}", io::format_decode(&result));
    Ok(())
}

fn bench_cmd(a: &BenchArgs, mul: bool) -> gdfv::Result<()> {
    let engine = match a.algorithm {
        Algorithm::Gdfv => Engine::Tree,
        Algorithm::GdfvTable => Engine::Table,
        _ => {
            return Err(Error::InvalidArgument(
                "benchmarks compare against the baseline; choose --algorithm gdfv or gdfv-table".into(),
            ))
        }
    };
    let config = BenchConfig {
        seed: a.seed,
        trials: a.trials,
        vectors: a.vectors,
        n: a.n,
        width: a.t.map_or(Width::Alpha(a.alpha), Width::Fixed),
        m: a.m,
        alphabet: a.alphabet,
        mode: match a.mode {
            ModeArg::Ops => Mode::Ops,
            ModeArg::Wall => Mode::Wall,
        },
        engine,
        mem_budget: a.mem_budget,
    };
    let report = if mul {
        bench::bench_mul(&config)?
    } else {
        bench::bench_decode(&config)?
    };
    emit(a.out.as_deref(), &report.to_csv())
}

fn gen_model(a: &GenArgs) -> gdfv::Result<()> {
    let mut rng = bench::trial_rng(a.seed, 0);
    let model = bench::random_model(&mut rng, a.n, a.alphabet)?;
    emit(a.out.as_deref(), &io::format_model(&model))?;
    if let (Some(m), Some(path)) = (a.m, a.obs_out.as_deref()) {
        let obs = bench::random_observations(&mut rng, &model, m);
        emit(Some(path), &io::format_observations(&model, &obs))?;
    }
    Ok(())
}

fn emit(path: Option<&Path>, text: &str) -> gdfv::Result<()> {
    let io_err = |p: &Path| {
        let p = p.to_path_buf();
        move |source| Error::Io { path: p, source }
    };
    match path {
        Some(p) => fs::write(p, text).map_err(io_err(p)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(io_err(Path::new("<stdout>"))),
    }
}
