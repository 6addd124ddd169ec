//! Desk-scale replication of the accuracy and timing studies.
//!
//! Knot sequences are randomized the way the original experiments describe:
//! the first knot uniform in `[-10, 10]`, then runs of repeated values with
//! multiplicities uniform in `1..=m` separated by gaps uniform in
//! `(0, 0.5)`, with the right boundary clamped for the accuracy study and
//! left unclamped for the timing study.
//!
//! Accuracy is reported as the mean number of correct decimal digits,
//! `-log10` of the relative error capped at [`DEFAULT_DIGIT_CAP`]. The
//! reference is the `O(m³)` method run in exact rational arithmetic on the
//! same knots (dyadically rounded first, so the rationals stay small); a
//! float-vs-float comparison would report agreement, not error.
//!
//! The RNG is SplitMix64, a seeded 64-bit counter-based generator: fixed
//! seeds reproduce knot sequences and accuracy statistics bit-for-bit on
//! any platform. Timing sweeps are strictly single-threaded and use a
//! monotonic clock, median of 5 repetitions after a warm-up pass; accuracy
//! trials are pure and run in parallel when the `parallel` feature is on,
//! reduced in a fixed order so parallelism never changes the result.

use crate::conversion::{convert_span_deboor, convert_span_new};
use crate::knots::{KnotError, KnotVector};
use crate::scalar::Scalar;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;
use std::hint::black_box;
use std::time::Instant;
use thiserror::Error;

/// Digit cap: exact agreement counts as 18 correct digits.
pub const DEFAULT_DIGIT_CAP: f64 = 18.0;

/// Accuracy-study knots are rounded to multiples of 2^-24 before use, which
/// keeps the exact-rational reference fast without leaving the f64 grid.
pub const DYADIC_BITS: u32 = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExperimentError {
    #[error("experiment requires at least one trial")]
    ZeroTrials,

    #[error("degree and span grids must be non-empty")]
    EmptyGrid,

    #[error("experiment grid requires degree >= 1, got m = 0")]
    DegreeZero,
}

/// Parameters of the knot-sequence generator.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub degree: usize,
    pub spans: usize,
    pub seed: u64,
    /// Range of the first knot, inclusive.
    pub first_knot_range: (f64, f64),
    /// Open interval the gaps between distinct knot values are drawn from.
    pub gap_range: (f64, f64),
    /// Multiplicities are uniform in `1..=max_multiplicity`.
    pub max_multiplicity: usize,
    /// Overwrite the last `m + 1` knots with one fresh value, clamping the
    /// right boundary.
    pub clamp_right: bool,
}

impl GeneratorConfig {
    /// The published experiment settings for one `(m, n)` cell.
    pub fn new(degree: usize, spans: usize, seed: u64, clamp_right: bool) -> Self {
        GeneratorConfig {
            degree,
            spans,
            seed,
            first_knot_range: (-10.0, 10.0),
            gap_range: (0.0, 0.5),
            max_multiplicity: degree.max(1),
            clamp_right,
        }
    }
}

/// Folds context words into a base seed with the SplitMix64 finalizer, so
/// each `(m, n, trial)` cell gets an independent, reproducible stream.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut z = base;
    for &p in parts {
        z = z.wrapping_add(p).wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

fn draw_gap(rng: &mut SplitMix64, range: (f64, f64)) -> f64 {
    loop {
        let g = rng.gen_range(range.0..range.1);
        if g > range.0 {
            return g;
        }
    }
}

/// Generates a valid random knot vector. Deterministic for a fixed config;
/// the rare draw that violates `t_0 < t_n` (a single long run swallowing
/// the whole unclamped domain) is redrawn from the same stream.
pub fn generate_knots(cfg: &GeneratorConfig) -> KnotVector {
    assert!(cfg.spans >= 1, "generator needs at least one span");
    assert!(cfg.max_multiplicity >= 1);
    let total = cfg.spans + 2 * cfg.degree + 1;
    let fill_target = if cfg.clamp_right {
        total - (cfg.degree + 1)
    } else {
        total
    };
    let mut rng = SplitMix64::seed_from_u64(cfg.seed);
    loop {
        let mut values = Vec::with_capacity(total);
        let mut value = rng.gen_range(cfg.first_knot_range.0..=cfg.first_knot_range.1);
        while values.len() < fill_target {
            let mult = rng
                .gen_range(1..=cfg.max_multiplicity)
                .min(fill_target - values.len());
            values.extend(std::iter::repeat(value).take(mult));
            value += draw_gap(&mut rng, cfg.gap_range);
        }
        if cfg.clamp_right {
            // `value` already sits one gap above the last emitted knot.
            values.extend(std::iter::repeat(value).take(cfg.degree + 1));
        }
        if let Ok(kv) = KnotVector::new(cfg.degree, cfg.spans, values) {
            return kv;
        }
    }
}

/// Rounds every knot to the 2^-bits grid. The map is monotone, so ordering
/// survives, but near-coincident knots can merge; the result is re-validated
/// and an over-multiplicity merge surfaces as an error.
pub fn round_knots_dyadic(kv: &KnotVector, bits: u32) -> Result<KnotVector, KnotError> {
    let scale = f64::exp2(bits as f64);
    let values = kv
        .values()
        .iter()
        .map(|&x| (x * scale).round() / scale)
        .collect();
    KnotVector::new(kv.degree(), kv.spans(), values)
}

/// Generates dyadically-rounded knots, redrawing on the rare merge that
/// invalidates the vector.
pub fn generate_knots_dyadic(cfg: &GeneratorConfig, bits: u32) -> KnotVector {
    let mut attempt = cfg.clone();
    for round in 0.. {
        attempt.seed = derive_seed(cfg.seed, &[round]);
        if let Ok(kv) = round_knots_dyadic(&generate_knots(&attempt), bits) {
            return kv;
        }
    }
    unreachable!()
}

/// Correct decimal digits of `computed` against `reference`:
/// `min(cap, max(0, -log10(|computed - reference| / |reference|)))`, with a
/// zero reference scored as `cap` on exact agreement and
/// `-log10(|computed|)` (clipped) otherwise.
pub fn correct_digits(computed: f64, reference: f64, cap: f64) -> f64 {
    if reference == 0.0 {
        if computed == 0.0 {
            cap
        } else {
            (-computed.abs().log10()).clamp(0.0, cap)
        }
    } else {
        let rel = ((computed - reference) / reference).abs();
        (-rel.log10()).clamp(0.0, cap)
    }
}

/// [`correct_digits`] with the relative error formed in exact rational
/// arithmetic, so agreement beyond 16 digits is still resolved.
pub fn correct_digits_exact(computed: f64, reference: &BigRational, cap: f64) -> f64 {
    if reference.is_zero() {
        return correct_digits(computed, 0.0, cap);
    }
    let diff = BigRational::from_knot(computed) - reference.clone();
    if diff.is_zero() {
        return cap;
    }
    let rel = (diff / reference.clone()).to_f64().abs();
    (-rel.log10()).clamp(0.0, cap)
}

/// One `(m, n)` cell of a report. Accuracy runs fill the digit means,
/// timing runs fill the second totals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellRecord {
    pub degree: usize,
    pub spans: usize,
    pub trials: usize,
    pub mean_correct_digits_new: Option<f64>,
    pub mean_correct_digits_deboor: Option<f64>,
    pub time_new_seconds: Option<f64>,
    pub time_deboor_seconds: Option<f64>,
}

impl CellRecord {
    /// `time(deboor) / time(new)`, when both were measured.
    pub fn time_ratio(&self) -> Option<f64> {
        match (self.time_deboor_seconds, self.time_new_seconds) {
            (Some(d), Some(n)) if n > 0.0 => Some(d / n),
            _ => None,
        }
    }
}

/// Per-cell statistics for a grid of `(m, n)` settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub cells: Vec<CellRecord>,
}

impl ExperimentReport {
    pub fn cell(&self, degree: usize, spans: usize) -> Option<&CellRecord> {
        self.cells
            .iter()
            .find(|c| c.degree == degree && c.spans == spans)
    }

    /// Long-format CSV: `m,n,metric,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,metric,value\n");
        for c in &self.cells {
            let mut push = |metric: &str, value: f64| {
                out.push_str(&format!("{},{},{metric},{value}\n", c.degree, c.spans));
            };
            if let Some(v) = c.mean_correct_digits_new {
                push("mean_correct_digits_new", v);
            }
            if let Some(v) = c.mean_correct_digits_deboor {
                push("mean_correct_digits_deboor", v);
            }
            if let Some(v) = c.time_new_seconds {
                push("time_new_seconds", v);
            }
            if let Some(v) = c.time_deboor_seconds {
                push("time_deboor_seconds", v);
            }
        }
        out
    }

    /// Fixed-width table in the layout of the published ones.
    pub fn to_text_table(&self) -> String {
        let has_digits = self.cells.iter().any(|c| c.mean_correct_digits_new.is_some());
        let has_times = self.cells.iter().any(|c| c.time_new_seconds.is_some());
        let mut out = String::new();
        out.push_str(&format!("{:>4} {:>5}", "m", "n"));
        if has_digits {
            out.push_str(&format!(" {:>12} {:>14}", "digits new", "digits deBoor"));
        }
        if has_times {
            out.push_str(&format!(
                " {:>12} {:>14} {:>8}",
                "new [s]", "deBoor [s]", "ratio"
            ));
        }
        out.push('\n');
        for c in &self.cells {
            out.push_str(&format!("{:>4} {:>5}", c.degree, c.spans));
            if has_digits {
                let fmt = |v: Option<f64>| match v {
                    Some(v) => format!("{v:.3}"),
                    None => "-".into(),
                };
                out.push_str(&format!(
                    " {:>12} {:>14}",
                    fmt(c.mean_correct_digits_new),
                    fmt(c.mean_correct_digits_deboor)
                ));
            }
            if has_times {
                let fmt = |v: Option<f64>| match v {
                    Some(v) => format!("{v:.6}"),
                    None => "-".into(),
                };
                let ratio = match c.time_ratio() {
                    Some(r) => format!("{r:.2}"),
                    None => "-".into(),
                };
                out.push_str(&format!(
                    " {:>12} {:>14} {:>8}",
                    fmt(c.time_new_seconds),
                    fmt(c.time_deboor_seconds),
                    ratio
                ));
            }
            out.push('\n');
        }
        out
    }
}

fn check_grid(ms: &[usize], ns: &[usize], trials: usize) -> Result<(), ExperimentError> {
    if trials == 0 {
        return Err(ExperimentError::ZeroTrials);
    }
    if ms.is_empty() || ns.is_empty() {
        return Err(ExperimentError::EmptyGrid);
    }
    if ms.contains(&0) {
        return Err(ExperimentError::DegreeZero);
    }
    Ok(())
}

/// Digit sums of one accuracy trial: both float methods scored against the
/// exact rational reference, over every entry of every non-empty span.
fn accuracy_trial(m: usize, n: usize, seed: u64) -> (f64, f64, u64) {
    let cfg = GeneratorConfig::new(m, n, seed, true);
    let kv = generate_knots_dyadic(&cfg, DYADIC_BITS);
    let mut sum_new = 0.0;
    let mut sum_deboor = 0.0;
    let mut entries = 0u64;
    for j in kv.nonempty_spans() {
        let table_new = convert_span_new::<f64>(&kv, j, m).expect("generated span is valid");
        let table_deboor = convert_span_deboor::<f64>(&kv, j, m).expect("generated span is valid");
        let reference =
            convert_span_deboor::<BigRational>(&kv, j, m).expect("generated span is valid");
        let jj = j.index() as isize;
        for k in 0..=m {
            for i in jj - m as isize..=jj {
                let r = reference.coefficient(k, i);
                sum_new += correct_digits_exact(table_new.coefficient(k, i), &r, DEFAULT_DIGIT_CAP);
                sum_deboor +=
                    correct_digits_exact(table_deboor.coefficient(k, i), &r, DEFAULT_DIGIT_CAP);
                entries += 1;
            }
        }
    }
    (sum_new, sum_deboor, entries)
}

fn accuracy_trials_seq(m: usize, n: usize, trials: usize, seed: u64) -> Vec<(f64, f64, u64)> {
    (0..trials)
        .map(|t| accuracy_trial(m, n, derive_seed(seed, &[m as u64, n as u64, t as u64])))
        .collect()
}

#[cfg(feature = "parallel")]
fn accuracy_trials(m: usize, n: usize, trials: usize, seed: u64) -> Vec<(f64, f64, u64)> {
    use rayon::prelude::*;
    (0..trials)
        .into_par_iter()
        .map(|t| accuracy_trial(m, n, derive_seed(seed, &[m as u64, n as u64, t as u64])))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn accuracy_trials(m: usize, n: usize, trials: usize, seed: u64) -> Vec<(f64, f64, u64)> {
    accuracy_trials_seq(m, n, trials, seed)
}

fn accuracy_cell(m: usize, n: usize, per_trial: Vec<(f64, f64, u64)>, trials: usize) -> CellRecord {
    let (mut sum_new, mut sum_deboor, mut entries) = (0.0, 0.0, 0u64);
    for (a, b, c) in per_trial {
        sum_new += a;
        sum_deboor += b;
        entries += c;
    }
    CellRecord {
        degree: m,
        spans: n,
        trials,
        mean_correct_digits_new: Some(sum_new / entries as f64),
        mean_correct_digits_deboor: Some(sum_deboor / entries as f64),
        time_new_seconds: None,
        time_deboor_seconds: None,
    }
}

/// Accuracy study over the `(ms × ns)` grid. Trials run in parallel when
/// the `parallel` feature is enabled; results are identical either way.
pub fn run_accuracy_experiment(
    ms: &[usize],
    ns: &[usize],
    trials: usize,
    seed: u64,
) -> Result<ExperimentReport, ExperimentError> {
    check_grid(ms, ns, trials)?;
    let mut cells = Vec::new();
    for &m in ms {
        for &n in ns {
            cells.push(accuracy_cell(m, n, accuracy_trials(m, n, trials, seed), trials));
        }
    }
    Ok(ExperimentReport { cells })
}

/// [`run_accuracy_experiment`] pinned to a single thread.
pub fn run_accuracy_experiment_seq(
    ms: &[usize],
    ns: &[usize],
    trials: usize,
    seed: u64,
) -> Result<ExperimentReport, ExperimentError> {
    check_grid(ms, ns, trials)?;
    let mut cells = Vec::new();
    for &m in ms {
        for &n in ns {
            cells.push(accuracy_cell(
                m,
                n,
                accuracy_trials_seq(m, n, trials, seed),
                trials,
            ));
        }
    }
    Ok(ExperimentReport { cells })
}

/// One full sweep of a timing cell: converts every non-empty span of every
/// trial vector with the given method.
fn timing_sweep(kvs: &[KnotVector], m: usize, new_method: bool) {
    for kv in kvs {
        for j in kv.nonempty_spans() {
            if new_method {
                black_box(convert_span_new::<f64>(kv, j, m).expect("valid span"));
            } else {
                black_box(convert_span_deboor::<f64>(kv, j, m).expect("valid span"));
            }
        }
    }
}

fn median_seconds(mut samples: Vec<f64>) -> f64 {
    samples.sort_by(f64::total_cmp);
    samples[samples.len() / 2]
}

/// Timing study: wall-clock totals (median of 5 repetitions, after one
/// warm-up sweep) for converting all non-empty spans of `trials` unclamped
/// random vectors per cell. Both methods see identical knots. Always
/// single-threaded.
pub fn run_timing_experiment(
    ms: &[usize],
    ns: &[usize],
    trials: usize,
    seed: u64,
) -> Result<ExperimentReport, ExperimentError> {
    const REPETITIONS: usize = 5;
    check_grid(ms, ns, trials)?;
    let mut cells = Vec::new();
    for &m in ms {
        for &n in ns {
            let kvs: Vec<KnotVector> = (0..trials)
                .map(|t| {
                    let s = derive_seed(seed, &[m as u64, n as u64, t as u64]);
                    generate_knots(&GeneratorConfig::new(m, n, s, false))
                })
                .collect();
            timing_sweep(&kvs, m, true);
            timing_sweep(&kvs, m, false);
            let time_of = |new_method: bool| {
                let samples = (0..REPETITIONS)
                    .map(|_| {
                        let start = Instant::now();
                        timing_sweep(&kvs, m, new_method);
                        start.elapsed().as_secs_f64()
                    })
                    .collect();
                median_seconds(samples)
            };
            cells.push(CellRecord {
                degree: m,
                spans: n,
                trials,
                mean_correct_digits_new: None,
                mean_correct_digits_deboor: None,
                time_new_seconds: Some(time_of(true)),
                time_deboor_seconds: Some(time_of(false)),
            });
        }
    }
    Ok(ExperimentReport { cells })
}
