//! Catalog of the boundary curves of the two-gap support region.
//!
//! The image of each cell edge under the gap map is an algebraic curve
//! Y(t) = (3/pi^2) e t^p / (D_1(t) D_2(t)) with D_i = a_i + b_i t + c_i
//! sqrt(r_2 t^2 + r_1 t), parametrized by t = (pi^2/3) X. The catalog
//! stores all rows: eleven concrete cells plus the two one-parameter
//! families, the column cells (1, l >= 5) and the row cells (k >= 5, 1).
//! Nothing here is derived at runtime; the coefficients are data, and the
//! test suite checks every row against images of exact edge samples.

use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::cells::cell_polygon;
use crate::error::{Error, Result};
use crate::exact::{rational_to_f64, Rational};
use crate::phi::{phi22_in_cell, PHI_SCALE};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveForm {
    /// e t^2 / ((a_1 + b_1 t)(a_2 + b_2 t))
    RationalQuadratic,
    /// e t / (a + b t + c sqrt(R(t)))
    RationalSqrt,
    /// square roots in both denominator factors
    ProductForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveFamily {
    /// cells (1, l) for l >= 5
    FirstColumn,
    /// cells (k, 1) for k >= 5
    FirstRow,
}

/// One catalog row: the image of the edge from `edge.0` to `edge.1` of
/// cell `cell`, as an explicit curve over `t_domain` (upper endpoint None
/// means unbounded).
#[derive(Clone, Debug)]
pub struct CurveSpec {
    pub cell: (u32, u32),
    /// tag and parameter value for rows produced from a family template
    pub family: Option<(CurveFamily, u32)>,
    pub edge: ((Rational, Rational), (Rational, Rational)),
    pub e: i64,
    pub t_power: u32,
    pub d1: (i64, i64, i64),
    pub d2: (i64, i64, i64),
    /// R(t) = radicand.0 * t^2 + radicand.1 * t
    pub radicand: (i64, i64),
    pub t_domain: (f64, Option<f64>),
    pub form: CurveForm,
}

impl CurveSpec {
    /// Sign of the square-root term (of the first factor carrying one).
    pub fn branch(&self) -> i8 {
        let c = if self.d1.2 != 0 { self.d1.2 } else { self.d2.2 };
        c.signum() as i8
    }
}

type Pt = (i64, i64, i64, i64);

#[allow(clippy::too_many_arguments)]
fn row(
    cell: (u32, u32),
    family: Option<(CurveFamily, u32)>,
    m: Pt,
    n: Pt,
    e: i64,
    t_power: u32,
    d1: (i64, i64, i64),
    d2: (i64, i64, i64),
    radicand: (i64, i64),
    t_domain: (f64, Option<f64>),
) -> CurveSpec {
    let form = match (d1.2 != 0, d2.2 != 0) {
        (false, false) => CurveForm::RationalQuadratic,
        (true, true) => CurveForm::ProductForm,
        _ => CurveForm::RationalSqrt,
    };
    let point = |p: Pt| (Ratio::new(p.0, p.1), Ratio::new(p.2, p.3));
    CurveSpec { cell, family, edge: (point(m), point(n)), e, t_power, d1, d2, radicand, t_domain, form }
}

const ONE: (i64, i64, i64) = (1, 0, 0);

/// Every row of the catalog: the 41 fully numeric rows and the family
/// templates instantiated at their smallest parameter (l = 5, 6 and 7 for
/// the column family's branch split, k = 5 for the row family), marked via
/// `family`. Use `family_curves` for other parameter values.
pub fn curve_catalog() -> Vec<CurveSpec> {
    let mut rows = vec![
        // cell (1, 2)
        row((1, 2), None, (1, 3, 1, 1), (0, 1, 1, 1), 2, 1, (0, 0, 1), ONE, (1, -4), (4.5, None)),
        row((1, 2), None, (0, 1, 1, 1), (1, 5, 4, 5), 16, 1, (-12, 3, 5), ONE, (1, -8), (25.0 / 3.0, None)),
        row((1, 2), None, (1, 5, 4, 5), (1, 3, 1, 1), 16, 1, (-12, -3, 5), ONE, (1, 8), (4.5, Some(25.0 / 3.0))),
        // cell (1, 3)
        row((1, 3), None, (1, 2, 1, 1), (1, 3, 1, 1), 6, 1, (0, 1, 3), ONE, (1, -4), (4.0, Some(4.5))),
        row((1, 3), None, (1, 3, 1, 1), (1, 5, 4, 5), 12, 1, (0, -1, 3), ONE, (1, 8), (4.5, Some(25.0 / 3.0))),
        row((1, 3), None, (1, 5, 4, 5), (1, 4, 3, 4), 24, 1, (-20, 7, 9), ONE, (1, -8), (8.0, Some(25.0 / 3.0))),
        row((1, 3), None, (1, 4, 3, 4), (2, 7, 5, 7), 24, 1, (-20, 7, -9), ONE, (1, -8), (8.0, Some(49.0 / 6.0))),
        row((1, 3), None, (2, 7, 5, 7), (1, 2, 1, 1), 54, 1, (-24, -7, 11), ONE, (1, 12), (4.0, Some(49.0 / 6.0))),
        // cell (1, 4)
        row((1, 4), None, (3, 5, 1, 1), (1, 2, 1, 1), 4, 1, (0, 1, -2), ONE, (1, -4), (4.0, Some(25.0 / 6.0))),
        row((1, 4), None, (1, 2, 1, 1), (2, 7, 5, 7), 12, 1, (0, -1, 2), ONE, (1, 12), (4.0, Some(49.0 / 6.0))),
        row((1, 4), None, (2, 7, 5, 7), (1, 3, 2, 3), 32, 1, (-28, 11, -13), ONE, (1, -8), (49.0 / 6.0, Some(9.0))),
        row((1, 4), None, (1, 3, 2, 3), (3, 5, 1, 1), 128, 1, (-40, -13, 19), ONE, (1, 16), (25.0 / 6.0, Some(9.0))),
        // cell (2, 1)
        row((2, 1), None, (1, 1, 1, 1), (1, 3, 2, 3), 4, 2, (2, 1, 0), (-2, 1, 0), (0, 0), (2.0, Some(6.0))),
        row((2, 1), None, (1, 3, 2, 3), (2, 5, 3, 5), 9, 1, (-12, 4, -5), ONE, (1, -6), (6.0, Some(25.0 / 4.0))),
        row((2, 1), None, (2, 5, 3, 5), (1, 1, 1, 1), 9, 1, (-12, -4, 5), ONE, (1, 6), (2.0, Some(25.0 / 4.0))),
        // cell (2, 2)
        row((2, 2), None, (1, 1, 4, 5), (1, 1, 1, 1), -8, 2, (2, 1, 0), (-6, 1, 0), (0, 0), (2.0, Some(10.0 / 3.0))),
        row((2, 2), None, (1, 1, 1, 1), (2, 5, 3, 5), 6, 1, (0, -1, 2), ONE, (1, 6), (2.0, Some(25.0 / 4.0))),
        row((2, 2), None, (2, 5, 3, 5), (1, 2, 1, 2), 18, 1, (-30, 13, -14), ONE, (1, -6), (25.0 / 4.0, Some(8.0))),
        row((2, 2), None, (1, 2, 1, 2), (1, 1, 4, 5), 50, 1, (-30, -11, 14), ONE, (1, 10), (10.0 / 3.0, Some(8.0))),
        // cell (2, 3)
        row((2, 3), None, (1, 1, 5, 7), (1, 1, 4, 5), -12, 2, (2, 1, 0), (-10, 1, 0), (0, 0), (10.0 / 3.0, Some(14.0 / 3.0))),
        row((2, 3), None, (1, 1, 4, 5), (1, 2, 1, 2), 30, 1, (0, -4, 6), ONE, (1, 10), (10.0 / 3.0, Some(8.0))),
        row((2, 3), None, (1, 2, 1, 2), (4, 5, 3, 5), 27, 1, (24, -2, 7), ONE, (1, -6), (25.0 / 4.0, Some(8.0))),
        row((2, 3), None, (4, 5, 3, 5), (1, 1, 5, 7), 147, 1, (-56, -22, 27), ONE, (1, 14), (14.0 / 3.0, Some(25.0 / 4.0))),
        // cell (2, 4)
        row((2, 4), None, (1, 1, 2, 3), (1, 1, 5, 7), -16, 2, (2, 1, 0), (-14, 1, 0), (0, 0), (14.0 / 3.0, Some(6.0))),
        row((2, 4), None, (1, 1, 5, 7), (4, 5, 3, 5), 28, 1, (0, -3, 4), ONE, (1, 14), (14.0 / 3.0, Some(25.0 / 4.0))),
        row((2, 4), None, (4, 5, 3, 5), (1, 1, 2, 3), 36, 1, (30, -1, 8), ONE, (1, -6), (6.0, Some(25.0 / 4.0))),
        // cell (3, 1)
        row((3, 1), None, (1, 1, 3, 5), (1, 1, 2, 3), -9, 2, (3, 1, 0), (-6, 1, 0), (0, 0), (3.0, Some(15.0 / 4.0))),
        row((3, 1), None, (1, 1, 2, 3), (1, 2, 1, 2), 9, 2, (3, 1, 0), (-3, 2, 0), (0, 0), (3.0, Some(6.0))),
        row((3, 1), None, (1, 2, 1, 2), (4, 7, 3, 7), 32, 1, (-72, 31, -11), ONE, (9, -48), (6.0, Some(147.0 / 20.0))),
        row((3, 1), None, (4, 7, 3, 7), (1, 1, 3, 5), 50, 1, (-60, -23, 9), ONE, (9, 60), (15.0 / 4.0, Some(147.0 / 20.0))),
        // cell (3, 2)
        row((3, 2), None, (1, 1, 1, 2), (1, 1, 3, 5), -18, 2, (3, 1, 0), (-15, 1, 0), (0, 0), (15.0 / 4.0, Some(6.0))),
        row((3, 2), None, (1, 1, 3, 5), (4, 7, 3, 7), 10, 1, (0, -2, 1), ONE, (9, 60), (15.0 / 4.0, Some(147.0 / 20.0))),
        row((3, 2), None, (4, 7, 3, 7), (3, 5, 2, 5), 64, 1, (-168, 79, -27), ONE, (9, -48), (147.0 / 20.0, Some(25.0 / 3.0))),
        row((3, 2), None, (3, 5, 2, 5), (1, 1, 1, 2), 64, 1, (72, -11, 7), ONE, (9, -48), (6.0, Some(25.0 / 3.0))),
        // cell (4, 1)
        row((4, 1), None, (1, 1, 3, 7), (1, 1, 1, 2), -16, 2, (4, 1, 0), (-12, 1, 0), (0, 0), (4.0, Some(28.0 / 5.0))),
        row((4, 1), None, (1, 1, 1, 2), (3, 5, 2, 5), 16, 2, (4, 1, 0), (-4, 3, 0), (0, 0), (4.0, Some(20.0 / 3.0))),
        row((4, 1), None, (3, 5, 2, 5), (2, 3, 1, 3), 25, 1, (-80, 37, -38), ONE, (1, -5), (20.0 / 3.0, Some(9.0))),
        row((4, 1), None, (2, 3, 1, 3), (1, 1, 3, 7), 49, 1, (-56, -23, 26), ONE, (1, 7), (28.0 / 5.0, Some(9.0))),
        // cell (4, 2)
        row((4, 2), None, (1, 1, 2, 5), (1, 1, 3, 7), -32, 2, (4, 1, 0), (-28, 1, 0), (0, 0), (28.0 / 5.0, Some(20.0 / 3.0))),
        row((4, 2), None, (1, 1, 3, 7), (2, 3, 1, 3), 14, 1, (0, -3, 4), ONE, (1, 7), (28.0 / 5.0, Some(9.0))),
        row((4, 2), None, (2, 3, 1, 3), (1, 1, 2, 5), 50, 1, (60, -9, 16), ONE, (1, -5), (20.0 / 3.0, Some(9.0))),
    ];
    // family templates, each listed once at its smallest parameter: the
    // third column row splits into an l = 5, 6 branch and an l >= 7 branch
    rows.extend(family_curves(CurveFamily::FirstColumn, 5).unwrap());
    rows.push(family_curves(CurveFamily::FirstColumn, 7).unwrap().swap_remove(2));
    rows.extend(family_curves(CurveFamily::FirstRow, 5).unwrap());
    rows
}

/// The boundary-curve rows of a family cell, instantiated at `param`
/// (l for the first-column family, k for the first-row family; both
/// start at 5).
pub fn family_curves(family: CurveFamily, param: u32) -> Result<Vec<CurveSpec>> {
    if param < 5 {
        return Err(Error::InvalidArgument(format!(
            "family cells start at parameter 5, got {param}"
        )));
    }
    let m = param as i64;
    let fam = Some((family, param));
    let sorted = |a: f64, b: f64| (a.min(b), Some(a.max(b)));
    match family {
        CurveFamily::FirstColumn => {
            let l = m;
            let d_first = sorted(
                (l * l) as f64 / (2 * (l - 2)) as f64,
                ((l + 1) * (l + 1)) as f64 / (2 * (l - 1)) as f64,
            );
            let d_second = sorted(
                (l * l) as f64 / (2 * (l - 2)) as f64,
                ((l + 1) * (l + 1)) as f64 / (2 * (l - 3)) as f64,
            );
            let d_third = sorted(
                ((l + 1) * (l + 1)) as f64 / (2 * (l - 3)) as f64,
                ((l + 2) * (l + 2)) as f64 / (2 * (l - 2)) as f64,
            );
            let d_fourth = sorted(
                ((l + 1) * (l + 1)) as f64 / (2 * (l - 1)) as f64,
                ((l + 2) * (l + 2)) as f64 / (2 * (l - 2)) as f64,
            );
            // the middle edge's branch sign flips between l = 5, 6 and l >= 7
            let third_sign = if l <= 6 { 1 } else { -1 };
            Ok(vec![
                row((1, param), fam, (l - 1, l + 1, 1, 1), (l - 2, l, 1, 1), 2 * l, 1,
                    (0, l - 2, -l), ONE, (1, -4), d_first),
                row((1, param), fam, (l - 2, l, 1, 1), (l - 3, l + 1, l - 1, l + 1), 2 * l * (l - 1), 1,
                    (0, 2 - l, l), ONE, (1, 4 * l - 4), d_second),
                row((1, param), fam, (l - 3, l + 1, l - 1, l + 1), (l - 2, l + 2, l, l + 2), 8 * l, 1,
                    (4 + 4 * l, l - 5, third_sign * (l + 3)), ONE, (1, -8), d_third),
                row((1, param), fam, (l - 2, l + 2, l, l + 2), (l - 1, l + 1, 1, 1), 4 * l * l * l, 2,
                    (0, 1 - 2 * l, 1), (0, l - 1, -(l + 1)), (1, 4 * l), d_fourth),
            ])
        }
        CurveFamily::FirstRow => {
            let k = m;
            let d_inner = sorted(k as f64, (k * (k + 1)) as f64 / (k - 1) as f64);
            let d_outer = sorted(
                (k * (k + 1)) as f64 / (k - 1) as f64,
                ((k + 2) * (k + 2)) as f64 / k as f64,
            );
            Ok(vec![
                row((param, 1), fam, (1, 1, 2, k + 1), (1, 1, 2, k), -k * k, 2,
                    (k - k * k, 1, 0), (k, 1, 0), (0, 0), d_inner),
                row((param, 1), fam, (1, 1, 2, k), (k - 1, k + 1, 2, k + 1), k * k, 2,
                    (k, 1, 0), (-k, k - 1, 0), (0, 0), d_inner),
                row((param, 1), fam, (k - 1, k + 1, 2, k + 1), (k, k + 2, 2, k + 2), 4 * (k + 1) * (k + 1), 2,
                    (0, k + 2, -1), (0, k * k - 2, -k), (k * k, -4 * k * (k + 1)), d_outer),
                row((param, 1), fam, (k, k + 2, 2, k + 2), (1, 1, 2, k + 1), 2 * (k + 1) * (k + 1), 2,
                    (0, 1, -1), (0, -(k + 2), 1), (k * k, -4 * k * (k + 1)), d_outer),
            ])
        }
    }
}

/// The complete row list for one nonempty cell, in catalog order.
pub fn curves_for_cell(k: u32, l: u32) -> Result<Vec<CurveSpec>> {
    if crate::cells::is_empty(k, l)? {
        return Err(Error::EmptyCell(k, l));
    }
    if k == 1 && l >= 5 {
        return family_curves(CurveFamily::FirstColumn, l);
    }
    if l == 1 && k >= 5 {
        return family_curves(CurveFamily::FirstRow, k);
    }
    Ok(curve_catalog().into_iter().filter(|s| s.family.is_none() && s.cell == (k, l)).collect())
}

/// Evaluate a catalog row at parameter t, returning the support point
/// (X, Y) = ((3/pi^2) t, g(t)).
pub fn curve_eval(spec: &CurveSpec, t: f64) -> Result<(f64, f64)> {
    let slack = 1e-9 * t.abs().max(1.0);
    let (lo, hi) = spec.t_domain;
    if !t.is_finite() || t < lo - slack || hi.is_some_and(|hi| t > hi + slack) {
        return Err(Error::OutOfDomain(format!("t = {t} outside the curve domain")));
    }
    let (r2, r1) = (spec.radicand.0 as f64, spec.radicand.1 as f64);
    let mut radicand = r2 * t * t + r1 * t;
    if radicand < 0.0 {
        // endpoint roundoff only; anything larger is a genuine violation
        if radicand >= -1e-9 * (r2.abs() * t * t + r1.abs() * t).max(1.0) {
            radicand = 0.0;
        } else {
            return Err(Error::OutOfDomain(format!("negative radicand at t = {t}")));
        }
    }
    let sq = radicand.sqrt();
    let factor = |(a, b, c): (i64, i64, i64)| a as f64 + b as f64 * t + c as f64 * sq;
    let y = PHI_SCALE * spec.e as f64 * t.powi(spec.t_power as i32) / (factor(spec.d1) * factor(spec.d2));
    if !y.is_finite() {
        return Err(Error::OutOfDomain(format!("curve value diverges at t = {t}")));
    }
    Ok((PHI_SCALE * t, y))
}

/// Images of n interior samples of the row's own edge segment, nudged off
/// the boundary toward the cell centroid. These are the oracle points the
/// curve must reproduce.
pub fn row_image_sample(spec: &CurveSpec, n: usize) -> Result<Vec<(f64, f64)>> {
    if n < 1 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let (k, l) = spec.cell;
    let poly = cell_polygon(k, l)?;
    if poly.is_empty() {
        return Err(Error::EmptyCell(k, l));
    }
    let verts: Vec<(f64, f64)> = poly
        .vertices
        .iter()
        .map(|(x, y)| (x.to_f64().unwrap(), y.to_f64().unwrap()))
        .collect();
    let cx = verts.iter().map(|v| v.0).sum::<f64>() / verts.len() as f64;
    let cy = verts.iter().map(|v| v.1).sum::<f64>() / verts.len() as f64;
    let (mx, my) = (rational_to_f64(&spec.edge.0 .0), rational_to_f64(&spec.edge.0 .1));
    let (nx, ny) = (rational_to_f64(&spec.edge.1 .0), rational_to_f64(&spec.edge.1 .1));
    const INSET: f64 = 1e-12;
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let s = (j as f64 + 0.5) / n as f64;
        let x = mx + s * (nx - mx);
        let y = my + s * (ny - my);
        out.push(phi22_in_cell(x + INSET * (cx - x), y + INSET * (cy - y), k, l)?);
    }
    Ok(out)
}

/// Largest relative deviation between the row's closed form and the image
/// of its cell edge, over the given number of interior sample points.
///
/// Samples sit exactly on the edge segment: the gap formula is valid
/// there, and the tiny inward offset `row_image_sample` applies would get
/// amplified past 1e-9 by the steep ends of divergent rows.
pub fn row_deviation(spec: &CurveSpec, samples: usize) -> Result<f64> {
    let ((m0, m1), (n0, n1)) = spec.edge;
    let (mx, my) = (rational_to_f64(&m0), rational_to_f64(&m1));
    let (nx, ny) = (rational_to_f64(&n0), rational_to_f64(&n1));
    let (k, l) = spec.cell;
    let mut worst = 0.0f64;
    for j in 0..samples {
        let s = (j as f64 + 0.5) / samples as f64;
        let (gx, gy) = phi22_in_cell(mx + s * (nx - mx), my + s * (ny - my), k, l)?;
        let (cx, cy) = curve_eval(spec, gx / PHI_SCALE)?;
        let dx = (cx - gx).abs() / gx.abs().max(1.0);
        let dy = (cy - gy).abs() / gy.abs().max(1.0);
        worst = worst.max(dx).max(dy);
    }
    Ok(worst)
}
