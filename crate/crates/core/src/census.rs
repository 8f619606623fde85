//! Exhaustive census of exceptional digit sets.
//!
//! For each `n`-subset `{a1 < ... < an}` of `{1, ..., N}` we decide whether
//! two orderings that are not reverses of each other share a characteristic
//! number. `f(N, n)` counts the subsets where this happens.
//!
//! The scan is partitioned by the smallest element of the subset. Each
//! partition returns a histogram of exceptional subsets keyed by their largest
//! element, so a single pass up to `N_max` yields `f(N, n)` for every
//! `N <= N_max` by prefix sums. Partitions are merged in order, which makes the
//! result independent of the worker count.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cf::DigitString;
use crate::error::{Error, Result};
use crate::fast::SmallMatrix;
use crate::symmetry;

/// Default ceiling on `binomial(N_max, n) * n!/2` characteristic-number
/// evaluations before a run must be forced.
pub const DEFAULT_BUDGET: u128 = 5_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    pub n: usize,
    pub big_n: u64,
    pub total: u128,
    pub f: u64,
    pub delta: BigRational,
    pub elapsed: Duration,
}

impl CensusRow {
    pub fn delta_f64(&self) -> f64 {
        self.f as f64 / self.total as f64
    }
}

pub type Progress<'a> = &'a (dyn Fn(u64, u64) + Sync);

#[derive(Debug, Clone)]
pub struct CensusConfig {
    pub n: usize,
    pub n_max: u64,
    pub report_points: Vec<u64>,
    pub workers: usize,
    pub budget: u128,
    pub force: bool,
    pub checkpoint: Option<PathBuf>,
}

impl CensusConfig {
    pub fn new(n: usize, n_max: u64) -> Self {
        CensusConfig {
            n,
            n_max,
            report_points: default_report_points(n, n_max),
            workers: default_workers(),
            budget: DEFAULT_BUDGET,
            force: false,
            checkpoint: None,
        }
    }
}

pub fn default_workers() -> usize {
    std::env::var("CFSYM_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1))
}

/// Multiples of 10 for `n <= 5`, of 5 for larger `n`, up to `n_max`.
pub fn default_report_points(n: usize, n_max: u64) -> Vec<u64> {
    let step = if n >= 6 { 5 } else { 10 };
    let mut pts: Vec<u64> = (1..).map(|k| k * step).take_while(|&x| x <= n_max).filter(|&x| x >= n as u64).collect();
    if pts.last() != Some(&n_max) {
        pts.push(n_max);
    }
    pts
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn half_factorial(n: usize) -> u128 {
    (3..=n as u128).product::<u128>().max(1)
}

/// Whether some two non-reverse orderings of the distinct digits `set`
/// share a characteristic number. Stops at the first collision.
pub fn is_exceptional(set: &[u64]) -> bool {
    let mut buf = Vec::with_capacity(half_factorial(set.len()) as usize);
    match exceptional_fast(set, &mut buf) {
        Some(hit) => hit,
        None => {
            let ds = DigitString::from_u64s(set).expect("positive digits");
            symmetry::is_exceptional_set(&ds, usize::MAX).expect("distinct digits")
        }
    }
}

/// `None` on `u128` overflow.
fn exceptional_fast(set: &[u64], buf: &mut Vec<u128>) -> Option<bool> {
    buf.clear();
    let n = set.len();
    let mut found = false;
    let mut overflow = false;
    let mut stack = Vec::with_capacity(n);
    search(set, 0, SmallMatrix::IDENTITY, &mut stack, buf, &mut found, &mut overflow);
    if overflow {
        None
    } else {
        Some(found)
    }
}

// Depth-first over orderings, sharing prefix products. Leaves with first
// digit below the last are the reversal-class representatives.
fn search(
    set: &[u64],
    used: u32,
    m: SmallMatrix,
    stack: &mut Vec<u64>,
    buf: &mut Vec<u128>,
    found: &mut bool,
    overflow: &mut bool,
) {
    let n = set.len();
    if stack.len() == n {
        if stack[0] < stack[n - 1] {
            match m.chi() {
                Some(c) => match buf.binary_search(&c) {
                    Ok(_) => *found = true,
                    Err(pos) => buf.insert(pos, c),
                },
                None => *overflow = true,
            }
        }
        return;
    }
    for (i, &d) in set.iter().enumerate() {
        if *found || *overflow {
            return;
        }
        if used & (1 << i) != 0 {
            continue;
        }
        // the last digit must exceed the first; skip when none can
        if stack.len() == n - 1 && d < stack[0] {
            continue;
        }
        match m.append(d) {
            Some(next) => {
                stack.push(d);
                search(set, used | (1 << i), next, stack, buf, found, overflow);
                stack.pop();
            }
            None => *overflow = true,
        }
    }
}

/// Calls `f` on each `k`-subset of `lo..=hi` in lexicographic order.
fn for_each_subset(lo: u64, hi: u64, k: usize, prefix: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if k == 0 {
        f(prefix);
        return;
    }
    if hi < lo || hi - lo + 1 < k as u64 {
        return;
    }
    for x in lo..=hi - (k as u64 - 1) {
        prefix.push(x);
        for_each_subset(x + 1, hi, k - 1, prefix, f);
        prefix.pop();
    }
}

/// Histogram of exceptional subsets with smallest element `first`, keyed by
/// largest element.
fn scan_partition(n: usize, n_max: u64, first: u64) -> BTreeMap<u64, u64> {
    let mut hist = BTreeMap::new();
    let mut buf = Vec::with_capacity(half_factorial(n) as usize);
    let mut prefix = vec![first];
    for_each_subset(first + 1, n_max, n - 1, &mut prefix, &mut |set| {
        let hit = match exceptional_fast(set, &mut buf) {
            Some(h) => h,
            None => is_exceptional(set),
        };
        if hit {
            *hist.entry(set[n - 1]).or_insert(0) += 1;
        }
    });
    hist
}

/// Resumable record of finished partitions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusCheckpoint {
    pub format: String,
    pub version: u32,
    pub n: usize,
    pub n_max: u64,
    /// Finished partitions keyed by smallest element, each with its histogram
    /// of exceptional subsets keyed by largest element.
    pub completed: BTreeMap<u64, BTreeMap<u64, u64>>,
}

const CHECKPOINT_FORMAT: &str = "cfsym-census-checkpoint";
const CHECKPOINT_VERSION: u32 = 1;

impl CensusCheckpoint {
    pub fn empty(n: usize, n_max: u64) -> Self {
        CensusCheckpoint {
            format: CHECKPOINT_FORMAT.into(),
            version: CHECKPOINT_VERSION,
            n,
            n_max,
            completed: BTreeMap::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let cp: CensusCheckpoint =
            serde_json::from_str(&text).map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?;
        if cp.format != CHECKPOINT_FORMAT || cp.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "unsupported checkpoint {} v{} (expected {CHECKPOINT_FORMAT} v{CHECKPOINT_VERSION})",
                cp.format, cp.version
            )));
        }
        Ok(cp)
    }

    /// Writes via a sibling temporary file and rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        let text = serde_json::to_string_pretty(self).expect("checkpoint serializes");
        fs::write(&tmp, text)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

fn check_config(n: usize, n_max: u64, budget: u128, force: bool) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("census length n must be at least 3, got {n}")));
    }
    if n > 31 {
        return Err(Error::SizeLimit { what: "census length n", got: n.to_string(), limit: "31".into() });
    }
    if n_max < n as u64 {
        return Err(Error::InvalidArgument(format!("N_max = {n_max} is smaller than n = {n}")));
    }
    let work = binomial(n_max, n as u64).saturating_mul(half_factorial(n));
    if work > budget && !force {
        return Err(Error::SizeLimit {
            what: "characteristic-number evaluations",
            got: work.to_string(),
            limit: format!("{budget} (pass --force to run anyway)"),
        });
    }
    Ok(())
}

pub(crate) fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))
}

/// Histogram over the whole range, honouring and updating the checkpoint.
fn histogram(cfg: &CensusConfig, progress: Option<Progress<'_>>) -> Result<BTreeMap<u64, u64>> {
    let (n, n_max) = (cfg.n, cfg.n_max);
    let mut cp = match &cfg.checkpoint {
        Some(path) if path.exists() => {
            let cp = CensusCheckpoint::load(path)?;
            if cp.n != n || cp.n_max != n_max {
                return Err(Error::Checkpoint(format!(
                    "checkpoint is for n={}, N_max={}, not n={n}, N_max={n_max}",
                    cp.n, cp.n_max
                )));
            }
            cp
        }
        _ => CensusCheckpoint::empty(n, n_max),
    };
    let last_first = n_max - (n as u64 - 1);
    let pending: Vec<u64> = (1..=last_first).filter(|f| !cp.completed.contains_key(f)).collect();
    let total = last_first;
    let shared = Mutex::new((&mut cp, 0u64, None::<Error>));
    let done_before = total - pending.len() as u64;

    pool(cfg.workers)?.install(|| {
        pending.par_iter().for_each(|&first| {
            let hist = scan_partition(n, n_max, first);
            let mut guard = shared.lock().expect("checkpoint lock");
            let (cp, done, err) = &mut *guard;
            cp.completed.insert(first, hist);
            *done += 1;
            if let Some(path) = &cfg.checkpoint {
                if let Err(e) = cp.save(path) {
                    err.get_or_insert(e);
                }
            }
            if let Some(p) = progress {
                p(done_before + *done, total);
            }
        })
    });
    let (_, _, err) = shared.into_inner().expect("checkpoint lock");
    if let Some(e) = err {
        return Err(e);
    }
    let mut merged = BTreeMap::new();
    for hist in cp.completed.values() {
        for (&max, &count) in hist {
            *merged.entry(max).or_insert(0) += count;
        }
    }
    Ok(merged)
}

/// `f(N, n)` and `delta(N, n)` at each report point.
pub fn census(cfg: &CensusConfig) -> Result<Vec<CensusRow>> {
    census_with_progress(cfg, None)
}

pub fn census_with_progress(cfg: &CensusConfig, progress: Option<Progress<'_>>) -> Result<Vec<CensusRow>> {
    check_config(cfg.n, cfg.n_max, cfg.budget, cfg.force)?;
    if cfg.report_points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("report points must be strictly ascending".into()));
    }
    if let Some(&p) = cfg.report_points.iter().find(|&&p| p < cfg.n as u64 || p > cfg.n_max) {
        return Err(Error::InvalidArgument(format!(
            "report point {p} is outside [{}, {}]",
            cfg.n, cfg.n_max
        )));
    }
    let start = Instant::now();
    let hist = histogram(cfg, progress)?;
    let elapsed = start.elapsed();
    Ok(cfg
        .report_points
        .iter()
        .map(|&big_n| {
            let f: u64 = hist.range(..=big_n).map(|(_, c)| c).sum();
            let total = binomial(big_n, cfg.n as u64);
            CensusRow {
                n: cfg.n,
                big_n,
                total,
                f,
                delta: BigRational::new(BigInt::from(f), BigInt::from(total)),
                elapsed,
            }
        })
        .collect())
}

/// `f(N, 4)/N` for every `N` in `4..=n_max`, exact and rounded.
pub fn ratio_series(n_max: u64, workers: usize) -> Result<Vec<(u64, BigRational, f64)>> {
    let mut cfg = CensusConfig::new(4, n_max);
    cfg.workers = workers;
    cfg.report_points = (4..=n_max).collect();
    Ok(census(&cfg)?
        .into_iter()
        .map(|row| {
            let r = BigRational::new(BigInt::from(row.f), BigInt::from(row.big_n));
            (row.big_n, r, row.f as f64 / row.big_n as f64)
        })
        .collect())
}

/// One exceptional set with its evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct ExceptionalSet {
    pub digits: Vec<u64>,
    pub nu: u64,
    /// Representatives (first digit below last) sharing a characteristic number.
    pub witnesses: Vec<(DigitString, DigitString)>,
}

/// Every exceptional `n`-subset of `{1..N}` in lexicographic order.
pub fn list_exceptional(n: usize, big_n: u64, workers: usize, force: bool) -> Result<Vec<ExceptionalSet>> {
    check_config(n, big_n, DEFAULT_BUDGET, force)?;
    let last_first = big_n - (n as u64 - 1);
    let parts: Vec<Vec<ExceptionalSet>> = pool(workers)?.install(|| {
        (1..=last_first)
            .into_par_iter()
            .map(|first| {
                let mut out = Vec::new();
                let mut buf = Vec::new();
                let mut prefix = vec![first];
                for_each_subset(first + 1, big_n, n - 1, &mut prefix, &mut |set| {
                    let hit = exceptional_fast(set, &mut buf).unwrap_or_else(|| is_exceptional(set));
                    if hit {
                        let ds = DigitString::from_u64s(set).expect("positive");
                        out.push(ExceptionalSet {
                            digits: set.to_vec(),
                            nu: symmetry::nu(&ds, usize::MAX).expect("distinct"),
                            witnesses: symmetry::colliding_pairs(&ds, usize::MAX).expect("distinct"),
                        });
                    }
                });
                out
            })
            .collect()
    });
    Ok(parts.into_iter().flatten().collect())
}
