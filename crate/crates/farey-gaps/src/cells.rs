//! Exact geometry of the cells T_{k,l}: the convex polygons on which the
//! first two chain quotients are constant.
//!
//! A cell is the intersection of seven half-planes: the triangle's own
//! x <= 1, y <= 1, x + y > 1 and the four quotient constraints
//!
//!   k y <= 1 + x < (k+1) y   and   l(ky - x) <= 1 + y < (l+1)(ky - x).
//!
//! Closed constraints own their boundary (the floor lands on the smaller
//! quotient there), open ones do not. Everything here is exact: polygons
//! are produced by clipping the unit square with rational arithmetic, so
//! emptiness, areas and containment are decidable statements, not
//! approximations.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{exact_int, Exact};

pub type ExactPoint = (Exact, Exact);

/// a*x + b*y + c >= 0, or > 0 when strict.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Constraint {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub strict: bool,
}

impl Constraint {
    pub(crate) fn eval(&self, x: &Exact, y: &Exact) -> Exact {
        x * exact_int(self.a) + y * exact_int(self.b) + exact_int(self.c)
    }

    pub(crate) fn holds(&self, x: &Exact, y: &Exact) -> bool {
        let v = self.eval(x, y);
        if self.strict {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    }
}

/// The defining half-planes of T_{k,l}. The l-constraint pair degenerates
/// for k = l = 1 (kl - 1 = 0 makes the closed side vacuous).
pub(crate) fn cell_constraints(k: u32, l: u32) -> Vec<Constraint> {
    let k = k as i128;
    let l = l as i128;
    let mut cs = vec![
        Constraint { a: -1, b: 0, c: 1, strict: false },      // x <= 1
        Constraint { a: 0, b: -1, c: 1, strict: false },      // y <= 1
        Constraint { a: 1, b: 1, c: -1, strict: true },       // x + y > 1
        Constraint { a: 1, b: -k, c: 1, strict: false },      // k y <= 1 + x
        Constraint { a: -1, b: k + 1, c: -1, strict: true },  // 1 + x < (k+1) y
    ];
    if k * l > 1 {
        // l (ky - x) <= 1 + y
        cs.push(Constraint { a: l, b: -(k * l - 1), c: 1, strict: false });
    }
    // 1 + y < (l+1)(ky - x)
    cs.push(Constraint { a: -(l + 1), b: k * (l + 1) - 1, c: -1, strict: true });
    cs
}

/// One polygon edge, counterclockwise; `owned` tells whether the edge's
/// points have quotient vector (k, l) themselves (closed constraint) or
/// belong to a neighbor (open constraint).
#[derive(Clone, Debug, PartialEq)]
pub struct CellEdge {
    pub from: ExactPoint,
    pub to: ExactPoint,
    pub owned: bool,
}

/// Exact convex polygon of a cell. Empty cells have no vertices.
#[derive(Clone, Debug)]
pub struct CellPolygon {
    pub index: (u32, u32),
    /// Counterclockwise, starting from the lexicographically smallest.
    pub vertices: Vec<ExactPoint>,
    pub edges: Vec<CellEdge>,
}

impl CellPolygon {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> Exact {
        shoelace_doubled(&self.vertices) / exact_int(2)
    }

    /// Floor-semantics membership: the point's first two quotients are
    /// exactly (k, l). Evaluates the defining constraints, so boundary
    /// ownership is decided correctly.
    pub fn contains(&self, x: &Exact, y: &Exact) -> bool {
        cell_constraints(self.index.0, self.index.1)
            .iter()
            .all(|c| c.holds(x, y))
    }

    /// (x_min, x_max, y_min, y_max); None for empty cells.
    pub fn bounding_box(&self) -> Option<(Exact, Exact, Exact, Exact)> {
        let (first, rest) = self.vertices.split_first()?;
        let mut bb = (first.0.clone(), first.0.clone(), first.1.clone(), first.1.clone());
        for (x, y) in rest {
            if *x < bb.0 {
                bb.0 = x.clone();
            }
            if *x > bb.1 {
                bb.1 = x.clone();
            }
            if *y < bb.2 {
                bb.2 = y.clone();
            }
            if *y > bb.3 {
                bb.3 = y.clone();
            }
        }
        Some(bb)
    }
}

fn shoelace_doubled(vertices: &[ExactPoint]) -> Exact {
    let n = vertices.len();
    let mut acc = exact_int(0);
    for i in 0..n {
        let (xi, yi) = &vertices[i];
        let (xj, yj) = &vertices[(i + 1) % n];
        acc += xi * yj - xj * yi;
    }
    acc
}

fn push_dedup(out: &mut Vec<ExactPoint>, p: ExactPoint) {
    if out.last() != Some(&p) {
        out.push(p);
    }
}

fn intersect(p: &ExactPoint, q: &ExactPoint, vp: &Exact, vq: &Exact) -> ExactPoint {
    let t = vp / (vp - vq);
    (&p.0 + &t * (&q.0 - &p.0), &p.1 + &t * (&q.1 - &p.1))
}

/// Sutherland-Hodgman against the closure of one half-plane.
fn clip(poly: &[ExactPoint], c: &Constraint) -> Vec<ExactPoint> {
    if poly.is_empty() {
        return Vec::new();
    }
    let vals: Vec<Exact> = poly.iter().map(|(x, y)| c.eval(x, y)).collect();
    let mut out: Vec<ExactPoint> = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let j = (i + 1) % poly.len();
        let inside_i = !vals[i].is_negative();
        let inside_j = !vals[j].is_negative();
        if inside_i {
            push_dedup(&mut out, poly[i].clone());
            if !inside_j {
                push_dedup(&mut out, intersect(&poly[i], &poly[j], &vals[i], &vals[j]));
            }
        } else if inside_j {
            push_dedup(&mut out, intersect(&poly[i], &poly[j], &vals[i], &vals[j]));
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// The exact polygon of T_{k,l}, empty when the cell is.
pub fn cell_polygon(k: u32, l: u32) -> Result<CellPolygon> {
    if k == 0 || l == 0 {
        return Err(Error::InvalidArgument("cell indices start at 1".into()));
    }
    let cs = cell_constraints(k, l);
    let mut poly: Vec<ExactPoint> = [(0, 0), (1, 0), (1, 1), (0, 1)]
        .iter()
        .map(|&(x, y)| (exact_int(x), exact_int(y)))
        .collect();
    for c in &cs {
        poly = clip(&poly, c);
        if poly.is_empty() {
            break;
        }
    }
    if poly.len() < 3 || !shoelace_doubled(&poly).is_positive() {
        // closure degenerated to a segment or point; the open constraints
        // always cut such remnants away (checked here rather than assumed)
        if degenerate_closure_has_points(&poly, &cs) {
            return Err(Error::Internal(format!(
                "cell ({k}, {l}) is a nonempty set of zero area"
            )));
        }
        return Ok(CellPolygon { index: (k, l), vertices: Vec::new(), edges: Vec::new() });
    }
    let start = poly
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.partial_cmp(b).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    poly.rotate_left(start);
    let edges = label_edges(&poly, &cs, k, l)?;
    Ok(CellPolygon { index: (k, l), vertices: poly, edges })
}

// For a zero-area closure: a point survives iff the strict constraints
// hold strictly; a segment survives iff no strict constraint vanishes on
// the whole of it.
fn degenerate_closure_has_points(poly: &[ExactPoint], cs: &[Constraint]) -> bool {
    let mut pts = poly.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    match pts.len() {
        0 => false,
        1 => cs
            .iter()
            .filter(|c| c.strict)
            .all(|c| c.eval(&pts[0].0, &pts[0].1).is_positive()),
        _ => {
            let p = pts.first().unwrap();
            let q = pts.last().unwrap();
            cs.iter().filter(|c| c.strict).all(|c| {
                !(c.eval(&p.0, &p.1).is_zero() && c.eval(&q.0, &q.1).is_zero())
            })
        }
    }
}

fn label_edges(poly: &[ExactPoint], cs: &[Constraint], k: u32, l: u32) -> Result<Vec<CellEdge>> {
    let n = poly.len();
    let mut edges = Vec::with_capacity(n);
    for i in 0..n {
        let from = &poly[i];
        let to = &poly[(i + 1) % n];
        let mut lines = cs.iter().filter(|c| {
            c.eval(&from.0, &from.1).is_zero() && c.eval(&to.0, &to.1).is_zero()
        });
        let line = lines.next().ok_or_else(|| {
            Error::Internal(format!("edge of cell ({k}, {l}) lies on no defining line"))
        })?;
        if lines.next().is_some() {
            return Err(Error::Internal(format!(
                "edge of cell ({k}, {l}) lies on two defining lines"
            )));
        }
        edges.push(CellEdge { from: from.clone(), to: to.clone(), owned: !line.strict });
    }
    Ok(edges)
}

/// Exact emptiness of T_{k,l}.
pub fn is_empty(k: u32, l: u32) -> Result<bool> {
    Ok(cell_polygon(k, l)?.is_empty())
}

/// Exact area of the intersection of an axis-aligned rectangle with the
/// closure of T_{k,l}. The corners must be exactly representable doubles
/// (the measure engine passes dyadic rationals).
pub(crate) fn box_cell_area(k: u32, l: u32, x0: f64, x1: f64, y0: f64, y1: f64) -> Exact {
    use crate::exact::exact_from_f64;
    let mut poly: Vec<ExactPoint> = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
        .iter()
        .map(|&(x, y)| (exact_from_f64(x), exact_from_f64(y)))
        .collect();
    for c in cell_constraints(k, l) {
        poly = clip(&poly, &c);
        if poly.is_empty() {
            break;
        }
    }
    if poly.len() < 3 {
        return exact_int(0);
    }
    shoelace_doubled(&poly) / exact_int(2)
}

/// All nonempty cells with k <= k_max and l <= l_max, lexicographic.
///
/// The classification is closed form: column (1, l >= 2), row (k >= 2, 1),
/// and the five exceptional cells (2,2), (2,3), (2,4), (3,2), (4,2). For
/// both indices >= 2 the constraints force k(l - 1) <= l + 3; the strict
/// cases are the five above and the equality cases (2,5), (3,3), (5,2)
/// collapse to single points that an open constraint excludes. The test
/// suite cross-checks the list against `is_empty`.
pub fn nonempty_cells(k_max: u32, l_max: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for k in 1..=k_max {
        match k {
            1 => out.extend((2..=l_max).map(|l| (1, l))),
            2 => out.extend([1, 2, 3, 4].iter().filter(|&&l| l <= l_max).map(|&l| (2, l))),
            3 | 4 => out.extend([1, 2].iter().filter(|&&l| l <= l_max).map(|&l| (k, l))),
            _ => {
                if l_max >= 1 {
                    out.push((k, 1));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact;
    use crate::triangle::k_vector_exact;

    fn pts(coords: &[(i128, i128, i128, i128)]) -> Vec<ExactPoint> {
        coords.iter().map(|&(xn, xd, yn, yd)| (exact(xn, xd), exact(yn, yd))).collect()
    }

    #[test]
    fn cell_2_2_is_the_central_quadrilateral() {
        let poly = cell_polygon(2, 2).unwrap();
        let want = pts(&[(2, 5, 3, 5), (1, 2, 1, 2), (1, 1, 4, 5), (1, 1, 1, 1)]);
        assert_eq!(poly.vertices, want);
        assert_eq!(poly.area(), exact(1, 10));
    }

    #[test]
    fn cell_2_2_edge_ownership() {
        let poly = cell_polygon(2, 2).unwrap();
        // hypotenuse (2/5,3/5)->(1/2,1/2) open; lower quotient edge
        // (1/2,1/2)->(1,4/5) open; x = 1 closed; 3y = 2x+1 closed
        let owned: Vec<bool> = poly.edges.iter().map(|e| e.owned).collect();
        assert_eq!(owned, vec![false, false, true, true]);
    }

    #[test]
    fn cell_1_2_is_a_triangle() {
        let poly = cell_polygon(1, 2).unwrap();
        let want = pts(&[(0, 1, 1, 1), (1, 5, 4, 5), (1, 3, 1, 1)]);
        assert_eq!(poly.vertices, want);
        assert_eq!(poly.area(), exact(1, 30));
    }

    #[test]
    fn cell_3_2_matches_its_edge_endpoints() {
        let poly = cell_polygon(3, 2).unwrap();
        let mut got = poly.vertices.clone();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut want = pts(&[(1, 1, 1, 2), (1, 1, 3, 5), (4, 7, 3, 7), (3, 5, 2, 5)]);
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got, want);
        assert_eq!(poly.area(), exact(1, 35));
    }

    #[test]
    fn empty_cells() {
        for (k, l) in [(1, 1), (3, 3), (2, 5), (5, 2), (4, 3), (9, 9), (2, 6)] {
            assert!(is_empty(k, l).unwrap(), "({k}, {l}) should be empty");
            assert!(cell_polygon(k, l).unwrap().is_empty());
        }
        for (k, l) in [(2, 4), (7, 1), (1, 7), (4, 2), (2, 2)] {
            assert!(!is_empty(k, l).unwrap(), "({k}, {l}) should be nonempty");
        }
    }

    #[test]
    fn classification_matches_exact_scan() {
        let mut scanned = Vec::new();
        for k in 1..=12 {
            for l in 1..=12 {
                if !is_empty(k, l).unwrap() {
                    scanned.push((k, l));
                }
            }
        }
        assert_eq!(scanned, nonempty_cells(12, 12));
    }

    #[test]
    fn asymmetric_bounds() {
        let cells = nonempty_cells(3, 40);
        assert!(cells.contains(&(1, 40)));
        assert!(cells.contains(&(2, 4)));
        assert!(cells.contains(&(3, 1)));
        assert!(!cells.iter().any(|&(k, _)| k > 3));
    }

    #[test]
    fn containment_follows_the_floors() {
        let poly = cell_polygon(2, 2).unwrap();
        assert!(poly.contains(&exact(7, 10), &exact(4, 5))); // on the owned edge
        assert!(poly.contains(&exact(1, 1), &exact(1, 1))); // owned corner
        assert!(poly.contains(&exact(4, 5), &exact(4, 5)));
        assert!(!poly.contains(&exact(1, 2), &exact(1, 2))); // hypotenuse, not in T
        assert!(!poly.contains(&exact(2, 5), &exact(3, 5))); // open corner
        assert!(!poly.contains(&exact(1, 2), &exact(3, 4))); // quotients (2, 1)
        assert!(cell_polygon(2, 1).unwrap().contains(&exact(1, 2), &exact(3, 4)));
        assert!(cell_polygon(1, 2).unwrap().contains(&exact(8, 45), &exact(14, 15)));
    }

    #[test]
    fn containment_agrees_with_k_vector() {
        // a small deterministic point sweep
        for i in 1..=20i128 {
            for j in 1..=20i128 {
                let x = exact(i, 21);
                let y = exact(j, 21);
                if !crate::triangle::in_triangle_exact(&x, &y) {
                    continue;
                }
                let ks = k_vector_exact(&x, &y, 2).unwrap();
                let poly = cell_polygon(ks[0], ks[1]).unwrap();
                assert!(
                    poly.contains(&x, &y),
                    "({x}, {y}) has quotients {ks:?} but misses that polygon"
                );
            }
        }
    }

    #[test]
    fn strip_areas_accumulate_toward_a_half() {
        let mut acc = exact_int(0);
        for (k, l) in nonempty_cells(40, 40) {
            acc += cell_polygon(k, l).unwrap().area();
        }
        let err = (exact(1, 2) - acc).abs();
        assert!(err < exact(1, 400), "remaining tail {err}");
    }

    #[test]
    fn rejects_zero_indices() {
        assert!(cell_polygon(0, 2).is_err());
        assert!(cell_polygon(2, 0).is_err());
    }
}
