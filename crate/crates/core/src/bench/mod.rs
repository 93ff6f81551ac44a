//! Seeded instance generators and the benchmark harness.
//!
//! Every random draw comes from ChaCha8 seeded with the configured 64-bit
//! seed; trial `k` uses stream `k` of that seed, so trials are independent
//! of each other and of the trial count. Probabilities and matrix entries are
//! uniform on `(0, 1]`.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dominance::{DominanceTable, DominanceTree};
use crate::error::{Error, Result};
use crate::extended::{ExtendedValue, Triple};
use crate::hmm::{block_width, viterbi_baseline, DecodeResult, GdfvDecoder, HiddenMarkovModel};
use crate::maxplus::{
    format_matrix, format_vector, multiply_trivial, BlockIndex, MaxPlusMatrix, MulResult, SplicedMultiplier,
    DEFAULT_MEMORY_BUDGET,
};

pub const CSV_HEADER: &str = "trial,algorithm,elapsed_ns,comparisons,tree_visits,checksum";

/// Relative tolerance of the correctness gate.
pub const TOLERANCE: f64 = 1e-9;

/// Uniform on `(0, 1]`.
pub fn unit_open_closed(rng: &mut impl Rng) -> f64 {
    1.0 - rng.random::<f64>()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Result<MaxPlusMatrix> {
    let entries: Vec<f64> = (0..rows * cols).map(|_| unit_open_closed(rng)).collect();
    MaxPlusMatrix::from_f64(rows, cols, &entries)
}

pub fn random_vector(rng: &mut impl Rng, len: usize) -> Vec<ExtendedValue> {
    (0..len)
        .map(|_| ExtendedValue::finite(unit_open_closed(rng)).expect("finite"))
        .collect()
}

/// Symbol names `a`, `b`, ... for up to 26 symbols, `y1`, `y2`, ... beyond.
pub fn default_symbols(k: usize) -> Vec<String> {
    if k <= 26 {
        (b'a'..).take(k).map(|c| (c as char).to_string()).collect()
    } else {
        (1..=k).map(|i| format!("y{i}")).collect()
    }
}

pub fn random_model(rng: &mut impl Rng, states: usize, symbols: usize) -> Result<HiddenMarkovModel> {
    if states == 0 || symbols == 0 {
        return Err(Error::InvalidArgument("states and alphabet size must be positive".into()));
    }
    let mut row = |len: usize| -> Vec<f64> { (0..len).map(|_| unit_open_closed(rng)).collect() };
    let initial = row(states);
    let transition: Vec<f64> = (0..states).flat_map(|_| row(states)).collect();
    let emission: Vec<f64> = (0..states).flat_map(|_| row(symbols)).collect();
    HiddenMarkovModel::new_normalized(default_symbols(symbols), initial, transition, emission)
}

pub fn random_observations(rng: &mut impl Rng, model: &HiddenMarkovModel, len: usize) -> Vec<usize> {
    (0..len).map(|_| rng.random_range(0..model.alphabet_size())).collect()
}

pub fn gen_random_model(states: usize, symbols: usize, seed: u64) -> Result<HiddenMarkovModel> {
    random_model(&mut ChaCha8Rng::seed_from_u64(seed), states, symbols)
}

pub fn gen_random_matrix(rows: usize, cols: usize, seed: u64) -> Result<MaxPlusMatrix> {
    random_matrix(&mut ChaCha8Rng::seed_from_u64(seed), rows, cols)
}

pub fn gen_random_vector(len: usize, seed: u64) -> Vec<ExtendedValue> {
    random_vector(&mut ChaCha8Rng::seed_from_u64(seed), len)
}

/// The generator for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Operation counts only; `elapsed_ns` is written as 0.
    Ops,
    Wall,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Tree,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgorithmTag {
    Trivial,
    GdfvTree,
    GdfvTable,
}

impl AlgorithmTag {
    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmTag::Trivial => "trivial",
            AlgorithmTag::GdfvTree => "gdfv-tree",
            AlgorithmTag::GdfvTable => "gdfv-table",
        }
    }
}

impl From<Engine> for AlgorithmTag {
    fn from(e: Engine) -> Self {
        match e {
            Engine::Tree => AlgorithmTag::GdfvTree,
            Engine::Table => AlgorithmTag::GdfvTable,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Width {
    Fixed(usize),
    Alpha(f64),
}

impl Width {
    pub fn resolve(self, n: usize) -> Result<usize> {
        match self {
            Width::Fixed(0) => Err(Error::InvalidArgument("block width must be at least 1".into())),
            Width::Fixed(t) => Ok(t),
            Width::Alpha(a) if a > 0.0 && a < 0.5 => Ok(block_width(n, a)),
            Width::Alpha(a) => Err(Error::InvalidArgument(format!("alpha must lie in (0, 0.5), got {a}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub seed: u64,
    pub trials: usize,
    /// Vectors per trial (`bench_mul` only).
    pub vectors: usize,
    /// Matrix rows, or model states.
    pub n: usize,
    pub width: Width,
    /// Observation length (`bench_decode` only).
    pub m: usize,
    /// Alphabet size (`bench_decode` only).
    pub alphabet: usize,
    pub mode: Mode,
    pub engine: Engine,
    pub mem_budget: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            seed: 0,
            trials: 25,
            vectors: 10_000,
            n: 1024,
            width: Width::Alpha(0.25),
            m: 1000,
            alphabet: 4,
            mode: Mode::Ops,
            engine: Engine::Tree,
            mem_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

impl BenchConfig {
    fn validate(&self) -> Result<usize> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        self.width.resolve(self.n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRecord {
    pub trial: usize,
    pub algorithm: AlgorithmTag,
    pub elapsed_ns: u64,
    pub comparisons: u64,
    pub tree_visits: u64,
    pub checksum: u64,
}

impl BenchRecord {
    pub fn work_units(&self) -> u64 {
        self.comparisons + self.tree_visits
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub min: f64,
    pub median: f64,
    pub mean: f64,
    pub max: f64,
    pub stddev: f64,
}

impl Summary {
    pub fn of(samples: &[f64]) -> Option<Summary> {
        if samples.is_empty() {
            return None;
        }
        let mut s = samples.to_vec();
        s.sort_by(f64::total_cmp);
        let k = s.len();
        let median = if k % 2 == 1 { s[k / 2] } else { (s[k / 2 - 1] + s[k / 2]) / 2.0 };
        let mean = s.iter().sum::<f64>() / k as f64;
        let var = s.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / k as f64;
        Some(Summary {
            min: s[0],
            median,
            mean,
            max: s[k - 1],
            stddev: var.sqrt(),
        })
    }
}

/// Records in trial order plus per-trial throughput ratios of the baseline
/// over the GDFV engine.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub block_width: usize,
    pub records: Vec<BenchRecord>,
    pub ops_ratios: Vec<f64>,
    /// Empty in [`Mode::Ops`].
    pub time_ratios: Vec<f64>,
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut s = format!("{CSV_HEADER}\n");
        for r in &self.records {
            writeln!(
                s,
                "{},{},{},{},{},{:016x}",
                r.trial,
                r.algorithm.as_str(),
                r.elapsed_ns,
                r.comparisons,
                r.tree_visits,
                r.checksum
            )
            .unwrap();
        }
        s.push_str("#summary,metric,min,median,mean,max,stddev\n");
        for (name, ratios) in [("ops_ratio", &self.ops_ratios), ("time_ratio", &self.time_ratios)] {
            if let Some(x) = Summary::of(ratios) {
                writeln!(
                    s,
                    "#summary,{name},{},{},{},{},{}",
                    x.min, x.median, x.mean, x.max, x.stddev
                )
                .unwrap();
            }
        }
        s
    }
}

/// FNV-1a over values rounded to 1e-9 and (optionally) indices.
#[derive(Clone, Copy, Debug)]
pub struct Checksum(u64);

impl Default for Checksum {
    fn default() -> Self {
        Checksum(0xcbf2_9ce4_8422_2325)
    }
}

impl Checksum {
    fn bytes(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    pub fn value(&mut self, v: ExtendedValue) {
        match v.value() {
            Some(x) => self.bytes(&((x * 1e9).round() as i64).to_le_bytes()),
            None => self.bytes(b"-inf"),
        }
    }

    pub fn index(&mut self, i: usize) {
        self.bytes(&(i as u64).to_le_bytes());
    }

    pub fn finish(self) -> u64 {
        self.0
    }
}

pub fn values_agree(a: ExtendedValue, b: ExtendedValue) -> bool {
    match (a.value(), b.value()) {
        (Some(x), Some(y)) => (x - y).abs() <= TOLERANCE * x.abs().max(y.abs()).max(1.0),
        (None, None) => true,
        _ => false,
    }
}

fn elapsed<T>(mode: Mode, f: impl FnOnce() -> T) -> (T, u64) {
    match mode {
        Mode::Ops => (f(), 0),
        Mode::Wall => {
            let start = Instant::now();
            let out = f();
            (out, start.elapsed().as_nanos() as u64)
        }
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    num as f64 / den.max(1) as f64
}

/// Online multiplication of an `n × t` matrix with `vectors` random vectors
/// per trial, against the trivial product.
pub fn bench_mul(config: &BenchConfig) -> Result<BenchReport> {
    match config.engine {
        Engine::Tree => bench_mul_with::<DominanceTree<Triple>>(config),
        Engine::Table => bench_mul_with::<DominanceTable<Triple>>(config),
    }
}

fn bench_mul_with<I: BlockIndex>(config: &BenchConfig) -> Result<BenchReport> {
    let t = config.validate()?;
    if config.vectors == 0 {
        return Err(Error::InvalidArgument("vectors must be at least 1".into()));
    }
    let n = config.n;
    let mut report = BenchReport {
        block_width: t,
        records: Vec::new(),
        ops_ratios: Vec::new(),
        time_ratios: Vec::new(),
    };
    for trial in 0..config.trials {
        let mut rng = trial_rng(config.seed, trial);
        let a = random_matrix(&mut rng, n, t)?;
        let mul = SplicedMultiplier::<I>::with_budget(&a, t, config.mem_budget)?;
        let mut out = MulResult {
            values: Vec::new(),
            argmax: Vec::new(),
        };
        let (mut base_ns, mut fast_ns) = (0u64, 0u64);
        let (mut base_sum, mut fast_sum) = (Checksum::default(), Checksum::default());
        let mut stats = crate::maxplus::MulStats::default();
        for _ in 0..config.vectors {
            let b = random_vector(&mut rng, t);
            let (expected, ns) = elapsed(config.mode, || multiply_trivial(&a, &b));
            let expected = expected?;
            base_ns += ns;
            let (s, ns) = elapsed(config.mode, || mul.multiply_into(&b, &mut out));
            stats += s?;
            fast_ns += ns;
            if let Some(i) = (0..n).find(|&i| !values_agree(expected.values[i], out.values[i])) {
                return Err(Error::Mismatch(format!(
                    "trial {trial}, row {}: trivial {} vs {} {}\nmatrix:\n{}vector:\n{}",
                    i + 1,
                    expected.values[i],
                    AlgorithmTag::from(config.engine).as_str(),
                    out.values[i],
                    format_matrix(&a),
                    format_vector(&b)
                )));
            }
            expected.values.iter().for_each(|&v| base_sum.value(v));
            out.values.iter().for_each(|&v| fast_sum.value(v));
        }
        let comparisons = (n * t * config.vectors) as u64;
        report.records.push(BenchRecord {
            trial,
            algorithm: AlgorithmTag::Trivial,
            elapsed_ns: base_ns,
            comparisons,
            tree_visits: 0,
            checksum: base_sum.finish(),
        });
        report.records.push(BenchRecord {
            trial,
            algorithm: config.engine.into(),
            elapsed_ns: fast_ns,
            comparisons: stats.merge_ops,
            tree_visits: stats.tree_visits,
            checksum: fast_sum.finish(),
        });
        report.ops_ratios.push(ratio(comparisons, stats.work_units()));
        if config.mode == Mode::Wall {
            report.time_ratios.push(ratio(base_ns, fast_ns));
        }
    }
    Ok(report)
}

fn decode_checksum(r: &DecodeResult) -> u64 {
    let mut c = Checksum::default();
    c.value(r.log_joint_prob);
    r.path.iter().for_each(|&s| c.index(s));
    c.finish()
}

/// Viterbi against GDFV on a random model and observation sequence per
/// trial. Baseline comparisons count `n²` per trellis step.
pub fn bench_decode(config: &BenchConfig) -> Result<BenchReport> {
    let t = config.validate()?;
    if config.m == 0 {
        return Err(Error::InvalidArgument("observation length must be at least 1".into()));
    }
    let n = config.n;
    let mut report = BenchReport {
        block_width: t,
        records: Vec::new(),
        ops_ratios: Vec::new(),
        time_ratios: Vec::new(),
    };
    for trial in 0..config.trials {
        let mut rng = trial_rng(config.seed, trial);
        let model = random_model(&mut rng, n, config.alphabet)?;
        let obs = random_observations(&mut rng, &model, config.m);

        let (base, base_ns) = elapsed(config.mode, || viterbi_baseline(&model, &obs));
        let base = base?.0;
        let (fast, fast_ns) = match config.engine {
            Engine::Tree => {
                let dec = GdfvDecoder::<DominanceTree<Triple>>::with_width(&model, t, config.mem_budget)?;
                elapsed(config.mode, || dec.decode_counted(&obs))
            }
            Engine::Table => {
                let dec = GdfvDecoder::<DominanceTable<Triple>>::with_width(&model, t, config.mem_budget)?;
                elapsed(config.mode, || dec.decode_counted(&obs))
            }
        };
        let (fast, _, stats) = fast?;
        if !values_agree(base.log_joint_prob, fast.log_joint_prob) {
            return Err(Error::Mismatch(format!(
                "trial {trial}: viterbi log-probability {} vs {} {}\nmodel:\n{}observations:\n{}",
                base.log_joint_prob,
                AlgorithmTag::from(config.engine).as_str(),
                fast.log_joint_prob,
                crate::hmm::io::format_model(&model),
                crate::hmm::io::format_observations(&model, &obs)
            )));
        }
        let comparisons = ((config.m - 1) * n * n) as u64;
        report.records.push(BenchRecord {
            trial,
            algorithm: AlgorithmTag::Trivial,
            elapsed_ns: base_ns,
            comparisons,
            tree_visits: 0,
            checksum: decode_checksum(&base),
        });
        report.records.push(BenchRecord {
            trial,
            algorithm: config.engine.into(),
            elapsed_ns: fast_ns,
            comparisons: stats.merge_ops,
            tree_visits: stats.tree_visits,
            checksum: decode_checksum(&fast),
        });
        if config.m > 1 {
            report.ops_ratios.push(ratio(comparisons, stats.work_units()));
        }
        if config.mode == Mode::Wall {
            report.time_ratios.push(ratio(base_ns, fast_ns));
        }
    }
    Ok(report)
}
