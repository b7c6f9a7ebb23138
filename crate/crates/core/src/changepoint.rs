//! Structural-break detection over univariate series.
//!
//! Two detectors share one penalized least-squares objective
//! `sum of segment L2 costs + penalty * number_of_breakpoints`:
//!
//! - [`pelt`] solves it exactly by dynamic programming with pruning;
//! - [`binseg`] approximates it by greedy recursive splitting.
//!
//! [`brute_force_segmentation`] enumerates every admissible segmentation of
//! short series and is the test oracle for [`pelt`]. All three evaluate the
//! same cost arithmetic, so optima are comparable exactly.
//!
//! Segments are at least [`MIN_SEGMENT_LEN`] samples long so segment
//! variance stays defined.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Shortest admissible segment.
pub const MIN_SEGMENT_LEN: usize = 2;

/// Hard cap for the exhaustive oracle.
pub const BRUTE_FORCE_MAX_LEN: usize = 16;

#[derive(Debug, Error)]
pub enum ChangepointError {
    #[error("series too short: need at least {need} samples, got {got}")]
    TooShort { need: usize, got: usize },
    #[error("empty or inverted segment [{i}, {j})")]
    EmptySegment { i: usize, j: usize },
    #[error("segment [{i}, {j}) out of range for series of length {n}")]
    OutOfRange { i: usize, j: usize, n: usize },
    #[error("penalty must be nonnegative, got {0}")]
    NegativePenalty(f64),
    #[error("brute-force oracle capped at n = {max}, got {got}")]
    OracleTooLong { max: usize, got: usize },
    #[error("series contains non-finite values")]
    NonFinite,
}

/// Breakpoints (strictly increasing, excluding 0 and n) and the value of
/// the penalized objective they achieve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segmentation {
    pub breakpoints: Vec<usize>,
    pub total_cost: f64,
}

/// Precomputed prefix sums for O(1) segment costs.
///
/// The series is centred at its global mean first, which keeps the
/// `sum(x^2) - sum(x)^2/len` form well conditioned for series with large
/// offsets (well rates sit in the thousands).
struct L2Segments {
    prefix: Vec<f64>,
    prefix_sq: Vec<f64>,
}

impl L2Segments {
    fn new(series: &[f64]) -> Self {
        let mean = series.iter().sum::<f64>() / series.len() as f64;
        let mut prefix = Vec::with_capacity(series.len() + 1);
        let mut prefix_sq = Vec::with_capacity(series.len() + 1);
        prefix.push(0.0);
        prefix_sq.push(0.0);
        let (mut s, mut s2) = (0.0, 0.0);
        for &x in series {
            let c = x - mean;
            s += c;
            s2 += c * c;
            prefix.push(s);
            prefix_sq.push(s2);
        }
        Self { prefix, prefix_sq }
    }

    /// L2 cost of segment `[i, j)`: squared deviations from the segment mean.
    fn cost(&self, i: usize, j: usize) -> f64 {
        let len = (j - i) as f64;
        let s = self.prefix[j] - self.prefix[i];
        let s2 = self.prefix_sq[j] - self.prefix_sq[i];
        (s2 - s * s / len).max(0.0)
    }
}

fn validate_series(series: &[f64]) -> Result<(), ChangepointError> {
    if series.iter().any(|x| !x.is_finite()) {
        return Err(ChangepointError::NonFinite);
    }
    Ok(())
}

/// Sum of squared deviations from the mean over `series[i..j]`.
pub fn l2_cost(series: &[f64], i: usize, j: usize) -> Result<f64, ChangepointError> {
    if i >= j {
        return Err(ChangepointError::EmptySegment { i, j });
    }
    if j > series.len() {
        return Err(ChangepointError::OutOfRange { i, j, n: series.len() });
    }
    validate_series(series)?;
    Ok(L2Segments::new(series).cost(i, j))
}

fn check_detect_inputs(series: &[f64], penalty: f64) -> Result<(), ChangepointError> {
    if series.len() < MIN_SEGMENT_LEN {
        return Err(ChangepointError::TooShort {
            need: MIN_SEGMENT_LEN,
            got: series.len(),
        });
    }
    if penalty < 0.0 || penalty.is_nan() {
        return Err(ChangepointError::NegativePenalty(penalty));
    }
    validate_series(series)
}

/// Exact penalized segmentation via PELT.
///
/// Identical optimum to exhaustive search; candidate breakpoints are pruned
/// with the L2 pruning constant K = 0.
pub fn pelt(series: &[f64], penalty: f64) -> Result<Segmentation, ChangepointError> {
    check_detect_inputs(series, penalty)?;
    let n = series.len();
    let costs = L2Segments::new(series);

    let mut objective = vec![f64::INFINITY; n + 1];
    objective[0] = -penalty;
    let mut prev = vec![0usize; n + 1];
    let mut candidates: Vec<usize> = vec![0];

    for t in MIN_SEGMENT_LEN..=n {
        let mut best = f64::INFINITY;
        let mut argmin = 0usize;
        for &tau in &candidates {
            if t - tau < MIN_SEGMENT_LEN {
                continue;
            }
            let value = objective[tau] + costs.cost(tau, t) + penalty;
            if value < best {
                best = value;
                argmin = tau;
            }
        }
        debug_assert!(best.is_finite(), "no admissible candidate at t = {t}");
        objective[t] = best;
        prev[t] = argmin;

        candidates.retain(|&tau| {
            t - tau < MIN_SEGMENT_LEN || objective[tau] + costs.cost(tau, t) <= objective[t]
        });
        if t + MIN_SEGMENT_LEN <= n {
            candidates.push(t);
        }
    }

    let mut breakpoints = Vec::new();
    let mut cursor = n;
    while cursor > 0 {
        let tau = prev[cursor];
        if tau > 0 {
            breakpoints.push(tau);
        }
        cursor = tau;
    }
    breakpoints.reverse();

    Ok(Segmentation {
        breakpoints,
        total_cost: objective[n],
    })
}

/// Greedy binary segmentation.
///
/// Repeatedly applies the single split with the largest cost reduction;
/// stops when the best reduction falls below `penalty` or when `max_bkps`
/// is reached. May be suboptimal relative to [`pelt`].
pub fn binseg(
    series: &[f64],
    penalty: f64,
    max_bkps: Option<usize>,
) -> Result<Segmentation, ChangepointError> {
    check_detect_inputs(series, penalty)?;
    let n = series.len();
    let costs = L2Segments::new(series);

    let mut boundaries = vec![0usize, n];
    let mut n_bkps = 0usize;

    loop {
        if let Some(cap) = max_bkps {
            if n_bkps >= cap {
                break;
            }
        }
        // best split over all current segments, ties to the earliest
        let mut best: Option<(f64, usize)> = None;
        for w in boundaries.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b - a < 2 * MIN_SEGMENT_LEN {
                continue;
            }
            let parent = costs.cost(a, b);
            for s in (a + MIN_SEGMENT_LEN)..=(b - MIN_SEGMENT_LEN) {
                let gain = parent - costs.cost(a, s) - costs.cost(s, b);
                if best.map_or(true, |(g, _)| gain > g) {
                    best = Some((gain, s));
                }
            }
        }
        match best {
            Some((gain, split)) if gain >= penalty => {
                let pos = boundaries.partition_point(|&b| b < split);
                boundaries.insert(pos, split);
                n_bkps += 1;
            }
            _ => break,
        }
    }

    let total_cost = boundaries
        .windows(2)
        .map(|w| costs.cost(w[0], w[1]))
        .sum::<f64>()
        + penalty * n_bkps as f64;

    Ok(Segmentation {
        breakpoints: boundaries[1..boundaries.len() - 1].to_vec(),
        total_cost,
    })
}

/// Exhaustive minimum of the penalized objective, for short series only.
pub fn brute_force_segmentation(
    series: &[f64],
    penalty: f64,
) -> Result<Segmentation, ChangepointError> {
    let n = series.len();
    if n > BRUTE_FORCE_MAX_LEN {
        return Err(ChangepointError::OracleTooLong {
            max: BRUTE_FORCE_MAX_LEN,
            got: n,
        });
    }
    check_detect_inputs(series, penalty)?;
    let costs = L2Segments::new(series);

    let interior = n - 1; // candidate breakpoints 1..n-1
    let mut best_cost = f64::INFINITY;
    let mut best_bkps: Vec<usize> = Vec::new();

    'mask: for mask in 0u32..(1u32 << interior) {
        let mut bkps = Vec::new();
        for b in 1..n {
            if mask & (1 << (b - 1)) != 0 {
                bkps.push(b);
            }
        }
        let mut start = 0usize;
        let mut cost = 0.0;
        for &b in &bkps {
            if b - start < MIN_SEGMENT_LEN {
                continue 'mask;
            }
            cost += costs.cost(start, b);
            start = b;
        }
        if n - start < MIN_SEGMENT_LEN {
            continue 'mask;
        }
        cost += costs.cost(start, n);
        cost += penalty * bkps.len() as f64;
        if cost < best_cost {
            best_cost = cost;
            best_bkps = bkps;
        }
    }

    Ok(Segmentation {
        breakpoints: best_bkps,
        total_cost: best_cost,
    })
}

/// BIC-like default penalty `2 * sigma^2 * ln(n)` with the noise variance
/// estimated from first differences.
pub fn default_penalty(series: &[f64]) -> f64 {
    let n = series.len();
    if n < 2 {
        return 0.0;
    }
    let sum_sq_diff: f64 = series.windows(2).map(|w| (w[1] - w[0]) * (w[1] - w[0])).sum();
    let sigma_sq = sum_sq_diff / (2.0 * (n - 1) as f64);
    2.0 * sigma_sq * (n as f64).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::prelude::*;

    #[test]
    fn l2_cost_hand_values() {
        assert_eq!(l2_cost(&[5.0, 5.0, 5.0], 0, 3).unwrap(), 0.0);
        assert_eq!(l2_cost(&[0.0, 10.0], 0, 2).unwrap(), 50.0);
        assert!(matches!(
            l2_cost(&[1.0, 2.0], 1, 1),
            Err(ChangepointError::EmptySegment { .. })
        ));
    }

    #[test]
    fn pelt_constant_series_has_no_breaks() {
        let seg = pelt(&[5.0, 5.0, 5.0, 5.0], 1.0).unwrap();
        assert!(seg.breakpoints.is_empty());
        assert_eq!(seg.total_cost, 0.0);
    }

    #[test]
    fn pelt_step_series_splits_once() {
        // brute force over all segmentations of this series agrees: the
        // split at 3 costs 0 + 0 + one penalty, the unsplit cost is 150
        let series = [0.0, 0.0, 0.0, 10.0, 10.0, 10.0];
        let seg = pelt(&series, 1.0).unwrap();
        assert_eq!(seg.breakpoints, vec![3]);
        assert_eq!(seg.total_cost, 1.0);
        let oracle = brute_force_segmentation(&series, 1.0).unwrap();
        assert_eq!(oracle.total_cost, seg.total_cost);
        assert_eq!(oracle.breakpoints, vec![3]);
        assert_eq!(l2_cost(&series, 0, 6).unwrap(), 150.0);
    }

    #[test]
    fn pelt_large_penalty_suppresses_breaks() {
        let seg = pelt(&[0.0, 10.0, 0.0, 10.0], 1000.0).unwrap();
        assert!(seg.breakpoints.is_empty());
    }

    #[test]
    fn binseg_matches_trivial_cases() {
        assert!(binseg(&[5.0, 5.0, 5.0, 5.0], 1.0, None).unwrap().breakpoints.is_empty());

        let seg = binseg(&[0.0, 0.0, 0.0, 10.0, 10.0, 10.0], 1.0, None).unwrap();
        assert_eq!(seg.breakpoints, vec![3]);

        let capped = binseg(&[0.0, 0.0, 0.0, 10.0, 10.0, 10.0], 1.0, Some(0)).unwrap();
        assert!(capped.breakpoints.is_empty());
    }

    #[test]
    fn brute_force_cap_enforced() {
        let long = vec![1.0; 17];
        assert!(matches!(
            brute_force_segmentation(&long, 1.0),
            Err(ChangepointError::OracleTooLong { max: 16, got: 17 })
        ));
        let seg = brute_force_segmentation(&[5.0, 5.0], 3.0).unwrap();
        assert!(seg.breakpoints.is_empty());
    }

    #[test]
    fn pelt_matches_brute_force_on_random_series() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for case in 0..200 {
            let n = rng.random_range(2..=12);
            let series: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
            let penalty = *[0.0, 0.5, 2.0, 10.0].choose(&mut rng).unwrap();
            let fast = pelt(&series, penalty).unwrap();
            let slow = brute_force_segmentation(&series, penalty).unwrap();
            assert_eq!(
                fast.total_cost, slow.total_cost,
                "case {case}: pelt {:?} vs brute {:?} on {series:?} penalty {penalty}",
                fast, slow
            );
        }
    }

    #[test]
    fn detectors_reject_bad_inputs() {
        assert!(matches!(pelt(&[1.0], 1.0), Err(ChangepointError::TooShort { .. })));
        assert!(matches!(
            pelt(&[1.0, 2.0], -1.0),
            Err(ChangepointError::NegativePenalty(_))
        ));
        assert!(matches!(
            pelt(&[1.0, f64::NAN], 1.0),
            Err(ChangepointError::NonFinite)
        ));
    }

    #[test]
    fn default_penalty_is_zero_for_constant_series() {
        assert_eq!(default_penalty(&[3.0, 3.0, 3.0]), 0.0);
        assert!(default_penalty(&[0.0, 1.0, 0.0, 1.0]) > 0.0);
    }

    fn step_signal(levels: &[f64], seg_len: usize) -> Vec<f64> {
        levels
            .iter()
            .flat_map(|&l| std::iter::repeat(l).take(seg_len))
            .collect()
    }

    proptest! {
        #[test]
        fn penalty_monotonicity(
            series in proptest::collection::vec(-100.0f64..100.0, 4..40),
            p1 in 0.0f64..50.0,
            bump in 0.1f64..100.0,
        ) {
            let lo = pelt(&series, p1).unwrap();
            let hi = pelt(&series, p1 + bump).unwrap();
            prop_assert!(hi.breakpoints.len() <= lo.breakpoints.len());
        }

        #[test]
        fn binseg_never_beats_pelt(
            series in proptest::collection::vec(-100.0f64..100.0, 4..40),
            penalty in 0.0f64..50.0,
        ) {
            let exact = pelt(&series, penalty).unwrap();
            let greedy = binseg(&series, penalty, None).unwrap();
            // greedy is suboptimal or equal, up to accumulated rounding
            prop_assert!(greedy.total_cost >= exact.total_cost - 1e-9 * exact.total_cost.abs().max(1.0));
        }

        #[test]
        fn breakpoints_invariant_under_constant_shift(
            l1 in -50i32..50, l2 in -50i32..50, l3 in -50i32..50,
            seg_len in 2usize..6,
            shift in -1000i32..1000,
        ) {
            // well-separated integer levels: optima have wide margins, so
            // the shift cannot move the detected breakpoints
            let levels = [f64::from(l1), f64::from(l1 + 60 + l2.abs()), f64::from(l3 - 60 - l2.abs())];
            let series = step_signal(&levels, seg_len);
            let shifted: Vec<f64> = series.iter().map(|x| x + f64::from(shift)).collect();
            let penalty = 10.0;
            prop_assert_eq!(
                pelt(&series, penalty).unwrap().breakpoints,
                pelt(&shifted, penalty).unwrap().breakpoints
            );
        }
    }
}
