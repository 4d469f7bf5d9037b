//! Finite-order gap statistics: empirical box measures, 2-d histograms of
//! gap pairs, and convergence tables against the limiting measure.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::fraction::delta;
use crate::measure::measure_box;
use crate::phi::BoxSpec;
use crate::sequence::{count, farey_sequence, gap_tuples, SequenceParams};

#[derive(Clone, Debug)]
pub struct EmpiricalResult {
    pub q_order: u64,
    pub interval: (Rational, Rational),
    pub h: usize,
    pub box_spec: BoxSpec,
    pub hits: u64,
    pub windows: u64,
    pub value: f64,
}

/// Fraction of gap windows falling strictly inside the box. Windows are
/// weighted uniformly; there are N - h - 1 of them for N fractions in
/// range.
pub fn empirical_measure(
    params: SequenceParams,
    h: usize,
    box_spec: &BoxSpec,
) -> Result<EmpiricalResult> {
    if box_spec.h() != h {
        return Err(Error::InvalidArgument(format!(
            "box has {} axes but h = {h}",
            box_spec.h()
        )));
    }
    let mut hits = 0u64;
    let mut windows = 0u64;
    for tuple in gap_tuples(params, h)? {
        windows += 1;
        if box_spec.contains(&tuple.values) {
            hits += 1;
        }
    }
    Ok(EmpiricalResult {
        q_order: params.order,
        interval: (params.lo, params.hi),
        h,
        box_spec: box_spec.clone(),
        hits,
        windows,
        value: hits as f64 / windows as f64,
    })
}

/// Counts of consecutive gap pairs on a regular grid. `total` counts every
/// window seen; pairs outside the range are dropped from the bins, so the
/// bin sum equals `total` exactly when the range captures everything.
#[derive(Clone, Debug)]
pub struct HistogramGrid {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub bins: (usize, usize),
    counts: Vec<u64>,
    pub total: u64,
}

impl HistogramGrid {
    pub fn count(&self, ix: usize, iy: usize) -> u64 {
        self.counts[iy * self.bins.0 + ix]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn in_range(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Bins all h = 2 gap windows of the sequence. The range box must be
/// bounded on both axes; binning is strictly-inside like the measures, so
/// a pair on the range edge is dropped.
pub fn histogram2d(
    params: SequenceParams,
    bins: (usize, usize),
    range: &BoxSpec,
) -> Result<HistogramGrid> {
    if bins.0 == 0 || bins.1 == 0 {
        return Err(Error::InvalidArgument("histogram needs at least one bin per axis".into()));
    }
    if range.h() != 2 {
        return Err(Error::InvalidArgument("histogram range must have two axes".into()));
    }
    if !range.is_bounded() {
        return Err(Error::InvalidArgument("histogram range must be bounded".into()));
    }
    let (x_lo, x_hi) = {
        let a = range.axes()[0];
        (a.0, a.1.unwrap())
    };
    let (y_lo, y_hi) = {
        let a = range.axes()[1];
        (a.0, a.1.unwrap())
    };
    let mut counts = vec![0u64; bins.0 * bins.1];
    let mut total = 0u64;
    for tuple in gap_tuples(params, 2)? {
        total += 1;
        let (u, v) = (tuple.values[0], tuple.values[1]);
        if u <= x_lo || u >= x_hi || v <= y_lo || v >= y_hi {
            continue;
        }
        let ix = (((u - x_lo) / (x_hi - x_lo) * bins.0 as f64) as usize).min(bins.0 - 1);
        let iy = (((v - y_lo) / (y_hi - y_lo) * bins.1 as f64) as usize).min(bins.1 - 1);
        counts[iy * bins.0 + ix] += 1;
    }
    Ok(HistogramGrid { x_range: (x_lo, x_hi), y_range: (y_lo, y_hi), bins, counts, total })
}

#[derive(Clone, Copy, Debug)]
pub struct ConvergenceRow {
    pub q_order: u64,
    pub empirical: f64,
    pub limit: f64,
    pub diff: f64,
    /// |empirical - limit| * Q / log Q, the quantity the error estimate
    /// says stays bounded
    pub scaled: f64,
}

/// Empirical measures along an increasing list of orders, against the
/// limiting value of the same box. Orders run in parallel; rows come back
/// in input order.
pub fn convergence_series(
    q_list: &[u64],
    box_spec: &BoxSpec,
    h: usize,
    interval: (Rational, Rational),
) -> Result<Vec<ConvergenceRow>> {
    if q_list.is_empty() {
        return Err(Error::InvalidArgument("need at least one order".into()));
    }
    if q_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("orders must be strictly increasing".into()));
    }
    let limit = measure_box(box_spec, crate::measure::DEFAULT_TOL)?.value;
    q_list
        .par_iter()
        .map(|&q| {
            let params = SequenceParams::new(q, interval.0, interval.1)?;
            let emp = empirical_measure(params, h, box_spec)?;
            let diff = (emp.value - limit).abs();
            Ok(ConvergenceRow {
                q_order: q,
                empirical: emp.value,
                limit,
                diff,
                scaled: diff * q as f64 / (q as f64).ln(),
            })
        })
        .collect()
}

/// The h = 2 gap pairs of the full sequence in exact arithmetic, for
/// multiset identities that float rounding would blur. Fits i64 for
/// orders up to a few thousand.
pub fn exact_gap_pairs(order: u64) -> Result<Vec<(Rational, Rational)>> {
    let params = SequenceParams::unit(order)?;
    let n = count(params);
    if n < 4 {
        return Err(Error::InvalidArgument(format!("{n} fractions make no gap pairs")));
    }
    let fractions: Vec<_> = farey_sequence(params)?.collect();
    let gap = |j: usize| -> Rational {
        let (lo, hi) = (fractions[j], fractions[j + 2]);
        let k = delta(lo, hi);
        Rational::new(n as i64 * k, lo.denom() as i64 * hi.denom() as i64)
    };
    Ok((0..fractions.len() - 3).map(|j| (gap(j), gap(j + 1))).collect())
}
