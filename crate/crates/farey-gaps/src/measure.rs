//! The limiting gap measure of a box: twice the area of its preimage
//! under the gap map.
//!
//! The adaptive engine works cell by cell. Within one cell the two image
//! components are smooth: component 1 lies in (lo, hi) iff u = x(ky - x)
//! lies in ((3/pi^2) k/hi, (3/pi^2) k/lo), and likewise component 2 with
//! v = y(l(ky - x) - y). A quadtree on the cell's bounding box classifies
//! dyadic rectangles with exact integer corner arithmetic; rectangles the
//! interval tests cannot decide are subdivided until their total area
//! drops under the budget, and what remains becomes the error bound. Boxes
//! with an unbounded side are reduced to bounded terms by complementation
//! (the indicator of (alpha, inf) is 1 minus that of (0, alpha]), which
//! keeps the cell enumeration finite: a bound on either component bounds
//! both quotients, since component i >= (3/pi^2) max(k_i, k_1 k_2 / 2).

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::cells::{box_cell_area, cell_constraints, cell_polygon, nonempty_cells};
use crate::error::{Error, Result};
use crate::phi::{BoxSpec, PHI_SCALE};
use crate::triangle::quotient_step;

pub const DEFAULT_TOL: f64 = 1e-4;
pub const DEFAULT_MC_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_MC_SEED: u64 = 1;

/// Subdivision stops here even if the budget is not met; the remaining
/// frontier is reported as error bound.
pub const MAX_DEPTH: usize = 24;

/// Largest cell index the engine will enumerate up to; boxes demanding
/// more must be truncated by the caller.
const MAX_CELL_INDEX: u64 = 20_000;

/// Box corners are snapped to this grid, and subdivision by MAX_DEPTH
/// halvings keeps every coordinate an exact multiple of 2^-44.
const GRID_BITS: u32 = 20;
const SCALE_BITS: u32 = GRID_BITS + MAX_DEPTH as u32;
const SCALE: f64 = (1u64 << SCALE_BITS) as f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureMethod {
    AdaptiveSubdivision,
    MonteCarlo,
}

impl MeasureMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            MeasureMethod::AdaptiveSubdivision => "adaptive-subdivision",
            MeasureMethod::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MeasureResult {
    pub value: f64,
    pub error_bound: f64,
    pub method: MeasureMethod,
    pub cells_visited: u64,
}

#[derive(Clone, Copy, Debug)]
enum AxisCon {
    Free,
    /// component within (lo, hi), hi finite
    Within(f64, f64),
}

/// Inclusion-exclusion terms covering the box: each unbounded axis
/// (alpha, inf) contributes `Free` minus `(0, alpha)`; bounded axes pass
/// through. Endpoint sets are null, so open versus closed does not matter.
fn complementation_terms(axes: &[(f64, Option<f64>)]) -> Vec<(f64, [AxisCon; 2])> {
    let options = |&(lo, hi): &(f64, Option<f64>)| -> Vec<(f64, AxisCon)> {
        match hi {
            Some(hi) => vec![(1.0, AxisCon::Within(lo, hi))],
            None if lo <= 0.0 => vec![(1.0, AxisCon::Free)],
            None => vec![(1.0, AxisCon::Free), (-1.0, AxisCon::Within(0.0, lo))],
        }
    };
    let mut terms = Vec::new();
    for &(s0, a0) in &options(&axes[0]) {
        for &(s1, a1) in &options(&axes[1]) {
            terms.push((s0 * s1, [a0, a1]));
        }
    }
    terms
}

fn floor_snapped_u64(v: f64) -> u64 {
    let f = v.floor();
    if v - f > 1.0 - 1e-12 {
        f as u64 + 1
    } else {
        f as u64
    }
}

/// Quotient bounds for one term: a bounded component caps its own index at
/// (pi^2/3) hi and the other at twice that (component i >= scale * k l / 2).
fn term_cell_bounds(cons: &[AxisCon; 2]) -> Result<(u32, u32)> {
    let mut k_bounds = Vec::new();
    let mut l_bounds = Vec::new();
    if let AxisCon::Within(_, hi) = cons[0] {
        k_bounds.push(floor_snapped_u64(hi / PHI_SCALE));
        l_bounds.push(floor_snapped_u64(2.0 * hi / PHI_SCALE));
    }
    if let AxisCon::Within(_, hi) = cons[1] {
        l_bounds.push(floor_snapped_u64(hi / PHI_SCALE));
        k_bounds.push(floor_snapped_u64(2.0 * hi / PHI_SCALE));
    }
    let k_max = *k_bounds.iter().min().expect("term has a bounded axis");
    let l_max = *l_bounds.iter().min().expect("term has a bounded axis");
    if k_max > MAX_CELL_INDEX || l_max > MAX_CELL_INDEX {
        return Err(Error::InvalidArgument(format!(
            "box endpoints require enumerating {k_max} x {l_max} cells; truncate the box"
        )));
    }
    Ok((k_max as u32, l_max as u32))
}

/// u-interval (or v-interval) of component targets on one cell: component
/// in (lo, hi) iff the smooth coordinate is in (scale*q/hi, scale*q/lo).
fn smooth_target(con: AxisCon, quotient: u32) -> Option<(f64, f64)> {
    match con {
        AxisCon::Free => None,
        AxisCon::Within(lo, hi) => {
            let upper = if lo <= 0.0 { f64::INFINITY } else { PHI_SCALE * quotient as f64 / lo };
            Some((PHI_SCALE * quotient as f64 / hi, upper))
        }
    }
}

#[derive(Clone, Copy)]
struct DyadicBox {
    x0: i128,
    x1: i128,
    y0: i128,
    y1: i128,
}

impl DyadicBox {
    fn area(&self) -> f64 {
        ((self.x1 - self.x0) as f64 / SCALE) * ((self.y1 - self.y0) as f64 / SCALE)
    }

    fn corners_f64(&self) -> (f64, f64, f64, f64) {
        (
            self.x0 as f64 / SCALE,
            self.x1 as f64 / SCALE,
            self.y0 as f64 / SCALE,
            self.y1 as f64 / SCALE,
        )
    }

    fn children(&self) -> [DyadicBox; 4] {
        let xm = (self.x0 + self.x1) / 2;
        let ym = (self.y0 + self.y1) / 2;
        [
            DyadicBox { x0: self.x0, x1: xm, y0: self.y0, y1: ym },
            DyadicBox { x0: xm, x1: self.x1, y0: self.y0, y1: ym },
            DyadicBox { x0: self.x0, x1: xm, y0: ym, y1: self.y1 },
            DyadicBox { x0: xm, x1: self.x1, y0: ym, y1: self.y1 },
        ]
    }
}

enum CellOverlap {
    Disjoint,
    Inside,
    Partial,
}

/// Position of a dyadic box relative to a cell closure, by exact sign
/// evaluation of the defining half-planes at the four corners (each
/// constraint is linear, so corner extrema are box extrema).
fn classify_against_cell(cons: &[(i128, i128, i128)], b: &DyadicBox) -> CellOverlap {
    let mut inside_all = true;
    for &(a, bb, c) in cons {
        let evals = [
            a * b.x0 + bb * b.y0 + c,
            a * b.x1 + bb * b.y0 + c,
            a * b.x0 + bb * b.y1 + c,
            a * b.x1 + bb * b.y1 + c,
        ];
        if evals.iter().all(|&v| v < 0) {
            return CellOverlap::Disjoint;
        }
        if evals.iter().any(|&v| v < 0) {
            inside_all = false;
        }
    }
    if inside_all {
        CellOverlap::Inside
    } else {
        CellOverlap::Partial
    }
}

enum Decision {
    In,
    Out,
    Maybe,
}

/// Conservative enclosures of u = x(ky - x) and v = y(l(ky - x) - y) over
/// the box, from exact integer products widened for the final conversion
/// to double.
fn uv_enclosures(k: u32, l: u32, b: &DyadicBox) -> ((f64, f64), (f64, f64)) {
    let (k, l) = (k as i128, l as i128);
    let z_lo = k * b.y0 - b.x1;
    let z_hi = k * b.y1 - b.x0;
    let range = |p_lo: i128, p_hi: i128, q_lo: i128, q_hi: i128| {
        let products =
            [p_lo * q_lo, p_lo * q_hi, p_hi * q_lo, p_hi * q_hi].map(|v| v as f64 / (SCALE * SCALE));
        let lo = products.iter().cloned().fold(f64::MAX, f64::min);
        let hi = products.iter().cloned().fold(f64::MIN, f64::max);
        let margin = 1e-13 * (lo.abs().max(hi.abs()) + 1.0);
        (lo - margin, hi + margin)
    };
    let u = range(b.x0, b.x1, z_lo, z_hi);
    let w_lo = l * z_lo - b.y1;
    let w_hi = l * z_hi - b.y0;
    let v = range(b.y0, b.y1, w_lo, w_hi);
    (u, v)
}

fn decide_axis(enclosure: (f64, f64), target: Option<(f64, f64)>) -> Decision {
    match target {
        None => Decision::In,
        Some((t_lo, t_hi)) => {
            let (lo, hi) = enclosure;
            if lo > t_lo && hi < t_hi {
                Decision::In
            } else if hi <= t_lo || lo >= t_hi {
                Decision::Out
            } else {
                Decision::Maybe
            }
        }
    }
}

fn decide_box(k: u32, l: u32, b: &DyadicBox, targets: &(Option<(f64, f64)>, Option<(f64, f64)>)) -> Decision {
    let (u, v) = uv_enclosures(k, l, b);
    match (decide_axis(u, targets.0), decide_axis(v, targets.1)) {
        (Decision::Out, _) | (_, Decision::Out) => Decision::Out,
        (Decision::In, Decision::In) => Decision::In,
        _ => Decision::Maybe,
    }
}

fn snap_down(v: &crate::exact::Exact, bits: u32) -> i128 {
    use crate::exact::exact_int;
    (v * exact_int(1i128 << bits)).floor().to_integer().to_i128().expect("coordinate in unit range")
}

fn snap_up(v: &crate::exact::Exact, bits: u32) -> i128 {
    -snap_down(&-v, bits)
}

/// Decided-in area and undecided area (both in plain area units) of the
/// target region within one cell, to the given area budget.
fn cell_measure(
    k: u32,
    l: u32,
    cons_term: &[AxisCon; 2],
    budget_per_area: f64,
) -> Result<(f64, f64)> {
    let poly = cell_polygon(k, l)?;
    let cell_area = poly.area().to_f64().unwrap();
    let budget = budget_per_area * cell_area;
    let (bx0, bx1, by0, by1) = poly.bounding_box().expect("nonempty cell");
    let targets = (smooth_target(cons_term[0], k), smooth_target(cons_term[1], l));

    let shift = (SCALE_BITS - GRID_BITS) as i128;
    let root = DyadicBox {
        x0: snap_down(&bx0, GRID_BITS) << shift,
        x1: snap_up(&bx1, GRID_BITS) << shift,
        y0: snap_down(&by0, GRID_BITS) << shift,
        y1: snap_up(&by1, GRID_BITS) << shift,
    };
    match decide_box(k, l, &root, &targets) {
        Decision::In => return Ok((cell_area, 0.0)),
        Decision::Out => return Ok((0.0, 0.0)),
        Decision::Maybe => {}
    }

    let cons: Vec<(i128, i128, i128)> = cell_constraints(k, l)
        .iter()
        .map(|c| (c.a, c.b, c.c << SCALE_BITS))
        .collect();
    let exact_area = |b: &DyadicBox, overlap: &CellOverlap| -> f64 {
        match overlap {
            CellOverlap::Inside => b.area(),
            _ => {
                let (x0, x1, y0, y1) = b.corners_f64();
                box_cell_area(k, l, x0, x1, y0, y1).to_f64().unwrap()
            }
        }
    };

    let mut area_in = 0.0f64;
    // frontier entries carry their cell-overlap class so the final pass
    // knows which ones need an exact clip
    let mut frontier = vec![(root, CellOverlap::Partial)];
    for level in 0..=MAX_DEPTH {
        let bound: f64 = frontier.iter().map(|(b, _)| b.area()).sum();
        if bound <= budget || level == MAX_DEPTH || frontier.is_empty() || frontier.len() > 1 << 22
        {
            let undecided = frontier.iter().map(|(b, o)| exact_area(b, o)).sum();
            return Ok((area_in, undecided));
        }
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for (parent, _) in frontier {
            for child in parent.children() {
                let overlap = classify_against_cell(&cons, &child);
                if matches!(overlap, CellOverlap::Disjoint) {
                    continue;
                }
                match decide_box(k, l, &child, &targets) {
                    Decision::Out => {}
                    Decision::In => area_in += exact_area(&child, &overlap),
                    Decision::Maybe => next.push((child, overlap)),
                }
            }
        }
        frontier = next;
    }
    unreachable!("loop returns at MAX_DEPTH");
}

/// Measure of the box by adaptive subdivision: exact cell geometry plus
/// interval tests, with the reported error bound covering everything left
/// undecided. Boxes are 1- or 2-axis; a 1-axis box constrains the first
/// component only.
pub fn measure_box(spec: &BoxSpec, tol: f64) -> Result<MeasureResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let axes: Vec<(f64, Option<f64>)> = match spec.h() {
        1 => vec![spec.axes()[0], (0.0, None)],
        2 => spec.axes().to_vec(),
        h => {
            return Err(Error::InvalidArgument(format!(
                "adaptive subdivision handles 1 or 2 axes, got {h}"
            )))
        }
    };
    let terms = complementation_terms(&axes);
    let enumerating = terms
        .iter()
        .filter(|(_, cons)| !matches!(cons, [AxisCon::Free, AxisCon::Free]))
        .count()
        .max(1);
    let tol_term = tol / enumerating as f64;

    let mut value = 0.0f64;
    let mut error = 0.0f64;
    let mut cells_visited = 0u64;
    for (sign, cons) in terms {
        if let [AxisCon::Free, AxisCon::Free] = cons {
            value += sign;
            continue;
        }
        let (k_max, l_max) = term_cell_bounds(&cons)?;
        let cells = nonempty_cells(k_max, l_max);
        cells_visited += cells.len() as u64;
        // budget_per_area * total cell area <= 2 * tol_term * (1/2)
        let budget_per_area = 2.0 * tol_term;
        let parts: Result<Vec<(f64, f64)>> = cells
            .par_iter()
            .map(|&(k, l)| cell_measure(k, l, &cons, budget_per_area))
            .collect();
        for (area_in, undecided) in parts? {
            value += sign * (2.0 * area_in + undecided);
            error += undecided;
        }
    }
    // clamping only pulls the midpoint toward the true value (which lies
    // in [0, 1]), so the accumulated bound still covers it
    Ok(MeasureResult {
        value: value.clamp(0.0, 1.0),
        error_bound: error,
        method: MeasureMethod::AdaptiveSubdivision,
        cells_visited,
    })
}

const MC_CHUNK: u64 = 1 << 16;

/// Monte Carlo estimate: uniform points on the triangle by rejection from
/// the unit square, hit fraction against the box. The conditional hit
/// probability equals the measure because the triangle has area 1/2 and
/// the measure doubles areas. Deterministic for a fixed seed (chunks use
/// per-index substreams, so thread count does not matter).
pub fn measure_box_mc(spec: &BoxSpec, samples: u64, seed: u64) -> Result<MeasureResult> {
    use rand::{Rng, SeedableRng};
    if samples < 1 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let h = spec.h();
    let n_chunks = samples.div_ceil(MC_CHUNK);
    let counts: Result<Vec<(u64, u64)>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let todo = MC_CHUNK.min(samples - chunk * MC_CHUNK);
            let mut buf = Vec::with_capacity(h);
            let mut kept = 0u64;
            let mut hits = 0u64;
            for _ in 0..todo {
                let x: f64 = rng.random();
                let y: f64 = rng.random();
                if x <= 0.0 || y <= 0.0 || x + y <= 1.0 {
                    continue;
                }
                kept += 1;
                phi_into(x, y, h, &mut buf)?;
                if spec.contains(&buf) {
                    hits += 1;
                }
            }
            Ok((kept, hits))
        })
        .collect();
    let (kept, hits) = counts?.iter().fold((0u64, 0u64), |acc, c| (acc.0 + c.0, acc.1 + c.1));
    if kept == 0 {
        return Err(Error::Internal("no sample survived rejection".into()));
    }
    let p = hits as f64 / kept as f64;
    let std_err = (p * (1.0 - p) / kept as f64).sqrt();
    Ok(MeasureResult {
        value: p,
        error_bound: std_err,
        method: MeasureMethod::MonteCarlo,
        cells_visited: 0,
    })
}

fn phi_into(x: f64, y: f64, h: usize, out: &mut Vec<f64>) -> Result<()> {
    out.clear();
    let (mut prev, mut curr) = (x, y);
    for _ in 0..h {
        let (k, next) = quotient_step(prev, curr)?;
        out.push(PHI_SCALE * k as f64 / (prev * next));
        prev = curr;
        curr = next;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(lo: f64, hi: f64) -> BoxSpec {
        BoxSpec::new(vec![(lo, Some(hi)), (lo, Some(hi))]).unwrap()
    }

    #[test]
    fn below_the_support_is_empty() {
        let r = measure_box(&square(0.0, 0.55), 1e-6).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.error_bound < 1e-9);
        assert_eq!(r.method, MeasureMethod::AdaptiveSubdivision);
        // a box reaching past the support minimum visits real cells
        let r = measure_box(&square(0.0, 0.65), 1e-6).unwrap();
        assert!(r.cells_visited > 0);
        assert!(r.value > 0.0);
    }

    #[test]
    fn full_space_is_one_by_complementation() {
        let b = BoxSpec::new(vec![(0.0, None), (0.0, None)]).unwrap();
        let r = measure_box(&b, 1e-6).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.error_bound, 0.0);
        let above = BoxSpec::new(vec![(0.5, None), (0.5, None)]).unwrap();
        let r = measure_box(&above, 1e-6).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn agrees_with_monte_carlo_on_a_central_box() {
        let b = square(0.7, 1.2);
        let a = measure_box(&b, 1e-5).unwrap();
        let mc = measure_box_mc(&b, 300_000, 17).unwrap();
        assert!(a.error_bound <= 1e-5);
        assert!(
            (a.value - mc.value).abs() <= 3.0 * mc.error_bound + a.error_bound,
            "adaptive {} vs mc {} +- {}",
            a.value,
            mc.value,
            mc.error_bound
        );
        assert!(a.value > 0.05 && a.value < 0.9);
    }

    #[test]
    fn swapping_axes_preserves_the_measure() {
        let b1 = BoxSpec::new(vec![(0.65, Some(0.9)), (1.0, Some(1.6))]).unwrap();
        let b2 = BoxSpec::new(vec![(1.0, Some(1.6)), (0.65, Some(0.9))]).unwrap();
        let r1 = measure_box(&b1, 1e-5).unwrap();
        let r2 = measure_box(&b2, 1e-5).unwrap();
        assert!(
            (r1.value - r2.value).abs() <= r1.error_bound + r2.error_bound + 1e-12,
            "{} vs {}",
            r1.value,
            r2.value
        );
    }

    #[test]
    fn additive_over_a_split() {
        let whole = square(0.7, 1.2);
        let left = BoxSpec::new(vec![(0.7, Some(0.9)), (0.7, Some(1.2))]).unwrap();
        let right = BoxSpec::new(vec![(0.9, Some(1.2)), (0.7, Some(1.2))]).unwrap();
        let w = measure_box(&whole, 1e-5).unwrap();
        let a = measure_box(&left, 1e-5).unwrap();
        let b = measure_box(&right, 1e-5).unwrap();
        assert!(
            (a.value + b.value - w.value).abs()
                <= a.error_bound + b.error_bound + w.error_bound + 1e-12
        );
    }

    #[test]
    fn monotone_in_the_box() {
        let small = measure_box(&square(0.7, 1.2), 1e-5).unwrap();
        let large = measure_box(&square(0.65, 1.3), 1e-5).unwrap();
        assert!(small.value <= large.value + small.error_bound + large.error_bound);
        assert!(large.value <= 1.0);
    }

    #[test]
    fn wide_box_close_to_full_mass() {
        let b = square(0.0, 30.0);
        let a = measure_box(&b, 1e-3).unwrap();
        let mc = measure_box_mc(&b, 200_000, 5).unwrap();
        assert!(a.value > 0.9 && a.value <= 1.0);
        assert!(a.error_bound <= 1.1e-3);
        assert!((a.value - mc.value).abs() <= 3.0 * mc.error_bound + a.error_bound);
    }

    #[test]
    fn one_axis_boxes_reduce_to_the_first_component() {
        let b1 = BoxSpec::new(vec![(0.8, Some(1.5))]).unwrap();
        let a = measure_box(&b1, 1e-4).unwrap();
        let mc = measure_box_mc(&b1, 300_000, 11).unwrap();
        assert!((a.value - mc.value).abs() <= 3.0 * mc.error_bound + a.error_bound);
        assert!(a.value > 0.1);
    }

    #[test]
    fn mixed_unbounded_box() {
        let b = BoxSpec::new(vec![(1.0, None), (0.8, Some(1.3))]).unwrap();
        let a = measure_box(&b, 1e-4).unwrap();
        let mc = measure_box_mc(&b, 300_000, 13).unwrap();
        assert!((a.value - mc.value).abs() <= 3.0 * mc.error_bound + a.error_bound);
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let b = square(0.7, 1.2);
        let r1 = measure_box_mc(&b, 100_000, 42).unwrap();
        let r2 = measure_box_mc(&b, 100_000, 42).unwrap();
        assert_eq!(r1.value, r2.value);
        assert_eq!(r1.error_bound, r2.error_bound);
        let r3 = measure_box_mc(&b, 100_000, 43).unwrap();
        assert!(r1.value != r3.value || r1.error_bound != r3.error_bound);
    }

    #[test]
    fn monte_carlo_handles_higher_dimensions() {
        let b = BoxSpec::new(vec![(0.5, None), (0.5, None), (0.5, None)]).unwrap();
        let r = measure_box_mc(&b, 50_000, 1).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6, "{}", r.value);
        let tight = BoxSpec::new(vec![(0.7, Some(1.2)); 3]).unwrap();
        let r = measure_box_mc(&tight, 50_000, 1).unwrap();
        assert!(r.value > 0.0 && r.value < 1.0);
    }

    #[test]
    fn rejects_bad_requests() {
        let b = square(0.7, 1.2);
        assert!(measure_box(&b, 0.0).is_err());
        assert!(measure_box(&b, -1.0).is_err());
        let three = BoxSpec::new(vec![(0.7, Some(1.2)); 3]).unwrap();
        assert!(measure_box(&three, 1e-4).is_err());
        let huge = square(0.0, 1e7);
        assert!(measure_box(&huge, 1e-3).is_err());
        assert!(measure_box_mc(&b, 0, 1).is_err());
    }
}
