//! Timed construction runs, speedup ratios, and the sweep harness that
//! produces CSV/table-shaped results.
//!
//! Timing covers construction only: sequences are loaded before the
//! clock starts and serialization happens after it stops. The reported
//! time is the minimum over repetitions. The timeout knob marks a row
//! `n/a` once a run exceeds it and skips remaining repetitions; it does
//! not preempt a run already in progress.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::baseline::build_ukkonen;
use crate::builder::{build_past, BuildConfig};
use crate::error::{Error, Result};
use crate::sequence::Sequence;

/// Which construction is being timed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BuilderKind {
    /// Partitioned parallel construction over fixed windows.
    Past,
    /// Sequential full suffix tree (Ukkonen).
    StBased,
}

impl BuilderKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BuilderKind::Past => "past",
            BuilderKind::StBased => "st_based",
        }
    }

    pub fn parse(s: &str) -> Option<BuilderKind> {
        match s {
            "past" => Some(BuilderKind::Past),
            "st_based" => Some(BuilderKind::StBased),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    Timeout,
}

/// One timing measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    /// Input size in bytes.
    pub text_size: usize,
    pub builder: BuilderKind,
    /// Window size; absent for the full-tree baseline.
    pub k: Option<usize>,
    pub workers: usize,
    /// Minimum wall-clock seconds over the completed repetitions.
    pub seconds: f64,
    pub status: RunStatus,
}

/// How a speedup ratio was formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeedupKind {
    /// Sequential baseline over the parallel builder (cross-algorithm).
    CrossAlgorithm,
    /// One-worker run over a multi-worker run of the same builder.
    WorkerScaling,
}

impl SpeedupKind {
    pub fn label(self) -> &'static str {
        match self {
            SpeedupKind::CrossAlgorithm => "st_based/past",
            SpeedupKind::WorkerScaling => "past_w1/past_wN",
        }
    }
}

/// One speedup ratio, labeled with how it was formed so the two senses
/// are never conflated.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedupPoint {
    pub text_size: usize,
    pub ratio: f64,
    pub kind: SpeedupKind,
    pub k: usize,
    pub workers: usize,
}

/// Times construction of `seq`, running it `repetitions` times and
/// reporting the minimum. The builder/k pairing is validated: the
/// baseline takes no window size, the partitioned builder requires one.
pub fn time_build(
    builder: BuilderKind,
    seq: &Sequence,
    k: Option<usize>,
    workers: usize,
    repetitions: usize,
    timeout: Duration,
) -> Result<BenchRow> {
    if repetitions == 0 {
        return Err(Error::ConfigError("repetitions must be at least 1".to_string()));
    }
    match (builder, k) {
        (BuilderKind::Past, None) => {
            return Err(Error::ConfigError("the partitioned builder requires k".to_string()));
        }
        (BuilderKind::StBased, Some(_)) => {
            return Err(Error::ConfigError("the baseline takes no window size".to_string()));
        }
        _ => {}
    }
    let workers = if builder == BuilderKind::StBased { 1 } else { workers.max(1) };

    let mut best: Option<Duration> = None;
    let mut status = RunStatus::Ok;
    for _ in 0..repetitions {
        let started = Instant::now();
        match builder {
            BuilderKind::Past => {
                let cfg = BuildConfig::new(k.unwrap()).workers(workers);
                build_past(seq, &cfg)?;
            }
            BuilderKind::StBased => {
                build_ukkonen(seq)?;
            }
        }
        let elapsed = started.elapsed();
        best = Some(best.map_or(elapsed, |b| b.min(elapsed)));
        if elapsed > timeout {
            status = RunStatus::Timeout;
            break;
        }
    }
    Ok(BenchRow {
        text_size: seq.len(),
        builder,
        k,
        workers,
        seconds: best.unwrap().as_secs_f64().max(1e-9),
        status,
    })
}

/// T_sequential / T_parallel.
pub fn speedup(sequential: f64, parallel: f64) -> Result<f64> {
    if !(sequential > 0.0 && parallel > 0.0 && sequential.is_finite() && parallel.is_finite()) {
        return Err(Error::InvalidDuration);
    }
    Ok(sequential / parallel)
}

/// Sweep parameters for [`run_suite`].
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub ks: Vec<usize>,
    pub workers: Vec<usize>,
    pub baseline: bool,
    pub repetitions: usize,
    pub timeout: Duration,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig {
            ks: vec![5],
            workers: vec![1],
            baseline: false,
            repetitions: 1,
            timeout: Duration::from_secs(600),
        }
    }
}

/// Rows plus labeled speedup points from one sweep.
#[derive(Debug, Clone, Default)]
pub struct SuiteResult {
    pub rows: Vec<BenchRow>,
    pub speedups: Vec<SpeedupPoint>,
}

/// Cartesian sweep over inputs, window sizes, and worker counts. Each
/// input is `(sequence, reported size in bytes)`. Speedups are computed
/// in both senses: baseline over the parallel builder at the largest
/// worker count, and one-worker over each multi-worker run.
pub fn run_suite(inputs: &[(Sequence, usize)], cfg: &SuiteConfig) -> Result<SuiteResult> {
    if inputs.is_empty() || cfg.ks.is_empty() {
        return Err(Error::ConfigError("bench needs at least one input and one k".to_string()));
    }
    let workers = if cfg.workers.is_empty() { vec![1] } else { cfg.workers.clone() };
    let max_workers = *workers.iter().max().unwrap();

    let mut result = SuiteResult::default();
    for (seq, size) in inputs {
        let baseline_row = if cfg.baseline {
            let mut row =
                time_build(BuilderKind::StBased, seq, None, 1, cfg.repetitions, cfg.timeout)?;
            row.text_size = *size;
            result.rows.push(row.clone());
            Some(row)
        } else {
            None
        };
        for &k in &cfg.ks {
            let mut by_workers = Vec::new();
            for &w in &workers {
                let mut row =
                    time_build(BuilderKind::Past, seq, Some(k), w, cfg.repetitions, cfg.timeout)?;
                row.text_size = *size;
                result.rows.push(row.clone());
                by_workers.push((w, row));
            }
            let ok = |row: &BenchRow| row.status == RunStatus::Ok;
            if let Some(st) = &baseline_row {
                let parallel = by_workers.iter().find(|(w, _)| *w == max_workers);
                if let Some((_, past)) = parallel {
                    if ok(st) && ok(past) {
                        result.speedups.push(SpeedupPoint {
                            text_size: *size,
                            ratio: speedup(st.seconds, past.seconds)?,
                            kind: SpeedupKind::CrossAlgorithm,
                            k,
                            workers: max_workers,
                        });
                    }
                }
            }
            if let Some((_, single)) = by_workers.iter().find(|(w, _)| *w == 1) {
                for (w, row) in &by_workers {
                    if *w > 1 && ok(single) && ok(row) {
                        result.speedups.push(SpeedupPoint {
                            text_size: *size,
                            ratio: speedup(single.seconds, row.seconds)?,
                            kind: SpeedupKind::WorkerScaling,
                            k,
                            workers: *w,
                        });
                    }
                }
            }
        }
    }
    Ok(result)
}

/// Uniform random sequence over the given alphabet, reproducible by seed.
pub fn random_text(n: usize, alphabet: &[u8], seed: u64) -> Sequence {
    assert!(!alphabet.is_empty(), "alphabet must be non-empty");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<u8> = (0..n).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect();
    Sequence::from_bytes(data)
}

pub const DNA: &[u8] = b"acgt";
pub const PROTEIN20: &[u8] = b"ACDEFGHIKLMNPQRSTVWY";

pub fn random_dna(n: usize, seed: u64) -> Sequence {
    random_text(n, DNA, seed)
}

pub fn random_protein(n: usize, seed: u64) -> Sequence {
    random_text(n, PROTEIN20, seed)
}

/// A tandem repeat written into a background sequence: `copies` adjacent
/// copies of `unit` starting at `position`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedRepeat {
    pub unit: Vec<u8>,
    pub copies: usize,
    pub position: usize,
}

impl PlantedRepeat {
    /// Window starts at which the unit occurs by construction.
    pub fn window_starts(&self) -> Vec<usize> {
        (0..self.copies).map(|c| self.position + c * self.unit.len()).collect()
    }
}

/// Writes tandem repeats into `data` at random non-overlapping positions.
/// Each plan entry is `(unit length, copies)`; units are drawn from
/// `alphabet`. Returns the planting log.
pub fn plant_repeats(
    data: &mut [u8],
    alphabet: &[u8],
    plan: &[(usize, usize)],
    seed: u64,
) -> Vec<PlantedRepeat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut taken: Vec<(usize, usize)> = Vec::new();
    let mut log = Vec::new();
    for &(unit_len, copies) in plan {
        let span = unit_len * copies;
        assert!(span <= data.len(), "repeat does not fit in the background");
        let position = loop {
            let candidate = rng.gen_range(0..=data.len() - span);
            let overlaps =
                taken.iter().any(|&(s, e)| candidate < e && candidate + span > s);
            if !overlaps {
                break candidate;
            }
        };
        taken.push((position, position + span));
        let unit: Vec<u8> =
            (0..unit_len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect();
        for c in 0..copies {
            let at = position + c * unit_len;
            data[at..at + unit_len].copy_from_slice(&unit);
        }
        log.push(PlantedRepeat { unit, copies, position });
    }
    log
}
