//! The map Phi taking a triangle point to its vector of normalized gaps:
//! component i is (3/pi^2) * k_i / (L_{i-1} L_{i+1}). The limiting gap
//! measure is twice the area of a preimage under this map, so everything
//! downstream (measures, support cloud, boundary curves) is built on it.

use num_traits::ToPrimitive;

use crate::cells::{cell_constraints, cell_polygon, nonempty_cells};
use crate::error::{Error, Result};
use crate::triangle::{chain_with_ks, quotient_step, TrianglePoint};

/// 3/pi^2, the normalization constant in front of every component.
pub const PHI_SCALE: f64 = 3.0 / (std::f64::consts::PI * std::f64::consts::PI);

/// Phi_{2,h}(p): h components, each at least 6/pi^2.
pub fn phi(p: TrianglePoint, h: usize) -> Result<Vec<f64>> {
    if h < 1 {
        return Err(Error::InvalidArgument("h must be at least 1".into()));
    }
    let (ls, ks) = chain_with_ks(p.x(), p.y(), h)?;
    Ok((0..h).map(|i| PHI_SCALE * ks[i] as f64 / (ls[i] * ls[i + 2])).collect())
}

/// Phi_{2,2} written out: (3/pi^2) (k/(x z), l/(y w)) with z = k y - x and
/// w = l z - y. Shares the floor convention with the chain, so it agrees
/// with `phi(p, 2)` bit for bit.
pub fn phi22_closed_form(p: TrianglePoint) -> Result<(f64, f64)> {
    let (x, y) = (p.x(), p.y());
    let (k, z) = quotient_step(x, y)?;
    let (l, w) = quotient_step(y, z)?;
    Ok((PHI_SCALE * k as f64 / (x * z), PHI_SCALE * l as f64 / (y * w)))
}

/// Phi_{2,2} with the quotients prescribed instead of recomputed. Exact
/// cell geometry hands out points whose cell is already known; evaluating
/// with the given (k, l) sidesteps floor roundoff entirely.
pub fn phi22_in_cell(x: f64, y: f64, k: u32, l: u32) -> Result<(f64, f64)> {
    let z = k as f64 * y - x;
    if z <= 0.0 {
        return Err(Error::OutOfDomain(format!("({x}, {y}) has no quotient {k}: z = {z}")));
    }
    let w = l as f64 * z - y;
    if w <= 0.0 {
        return Err(Error::OutOfDomain(format!("({x}, {y}) has no quotients ({k}, {l}): w = {w}")));
    }
    Ok((PHI_SCALE * k as f64 / (x * z), PHI_SCALE * l as f64 / (y * w)))
}

/// Open box (alpha_i, beta_i) per axis, in normalized gap units. An absent
/// upper endpoint means the axis is unbounded.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxSpec {
    axes: Vec<(f64, Option<f64>)>,
}

impl BoxSpec {
    pub fn new(axes: Vec<(f64, Option<f64>)>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidArgument("box needs at least one axis".into()));
        }
        for &(lo, hi) in &axes {
            if !lo.is_finite() || lo < 0.0 {
                return Err(Error::InvalidArgument(format!("box lower endpoint {lo} invalid")));
            }
            match hi {
                Some(hi) if !hi.is_finite() || hi <= lo => {
                    return Err(Error::InvalidArgument(format!(
                        "box interval ({lo}, {hi}) is empty"
                    )))
                }
                _ => {}
            }
        }
        Ok(Self { axes })
    }

    pub fn h(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[(f64, Option<f64>)] {
        &self.axes
    }

    pub fn is_bounded(&self) -> bool {
        self.axes.iter().all(|&(_, hi)| hi.is_some())
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        debug_assert_eq!(point.len(), self.axes.len());
        self.axes.iter().zip(point).all(|(&(lo, hi), &v)| lo < v && hi.is_none_or(|hi| v < hi))
    }
}

/// Floor that tolerates values a hair under an integer, so bounds like
/// (pi^2/3) * (6/pi^2) = 2 come out exact despite roundoff.
fn floor_snapped(v: f64) -> u64 {
    let f = v.floor();
    if v - f > 1.0 - 1e-12 {
        f as u64 + 1
    } else {
        f as u64
    }
}

/// Indices past which cells cannot meet the preimage of a bounded 2-axis
/// box: component i is at least (3/pi^2) k_i because L <= 1, so
/// K_max = floor(pi^2 beta_1 / 3) and likewise L_max.
pub fn cell_bound_for_box(spec: &BoxSpec) -> Result<(u32, u32)> {
    if spec.h() != 2 {
        return Err(Error::InvalidArgument("cell bounds are defined for 2-axis boxes".into()));
    }
    let mut out = [0u32; 2];
    for (i, &(_, hi)) in spec.axes().iter().enumerate() {
        let beta = hi.ok_or_else(|| {
            Error::Unbounded(format!("axis {i} has no upper endpoint; truncate it first"))
        })?;
        out[i] = u32::try_from(floor_snapped(beta / PHI_SCALE))
            .map_err(|_| Error::InvalidArgument(format!("box endpoint {beta} too large")))?;
    }
    Ok((out[0], out[1]))
}

/// Flat point store: point i is coords[i*h .. (i+1)*h].
#[derive(Clone, Debug)]
pub struct PointCloud {
    h: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn h(&self) -> usize {
        self.h
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.h
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.h..(i + 1) * self.h]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.h)
    }
}

/// Phi-images of grid samples of every nonempty cell with indices at most
/// kmax; their union fills out the support of the gap measure. Roughly
/// n_per_cell points are emitted per cell, row-major over each cell's
/// bounding box, so the output is deterministic.
pub fn support_points(h: usize, kmax: u32, n_per_cell: usize) -> Result<PointCloud> {
    if !(1..=2).contains(&h) {
        return Err(Error::InvalidArgument("support sampling handles h = 1 or 2".into()));
    }
    if kmax < 2 {
        return Err(Error::InvalidArgument("kmax must be at least 2".into()));
    }
    if n_per_cell < 1 {
        return Err(Error::InvalidArgument("need at least one sample per cell".into()));
    }
    let mut coords = Vec::new();
    for (k, l) in nonempty_cells(kmax, kmax) {
        sample_cell_images(k, l, h, n_per_cell, &mut coords)?;
    }
    Ok(PointCloud { h, coords })
}

fn sample_cell_images(
    k: u32,
    l: u32,
    h: usize,
    n_per_cell: usize,
    coords: &mut Vec<f64>,
) -> Result<()> {
    let poly = cell_polygon(k, l)?;
    let (x0, x1, y0, y1) = match poly.bounding_box() {
        Some(bb) => (
            bb.0.to_f64().unwrap(),
            bb.1.to_f64().unwrap(),
            bb.2.to_f64().unwrap(),
            bb.3.to_f64().unwrap(),
        ),
        None => return Ok(()),
    };
    let bbox_area = (x1 - x0) * (y1 - y0);
    let cell_area = poly.area().to_f64().unwrap();
    // grid sized so about n_per_cell of the bbox samples land in the cell
    let m = ((n_per_cell as f64 * bbox_area / cell_area).sqrt().ceil() as usize).max(1);
    let cons: Vec<(f64, f64, f64, f64)> = cell_constraints(k, l)
        .iter()
        .map(|c| {
            let scale = 1e-9 * (c.a.abs() + c.b.abs() + c.c.abs()) as f64;
            (c.a as f64, c.b as f64, c.c as f64, scale)
        })
        .collect();
    for iy in 0..m {
        let y = y0 + (y1 - y0) * (iy as f64 + 0.5) / m as f64;
        for ix in 0..m {
            let x = x0 + (x1 - x0) * (ix as f64 + 0.5) / m as f64;
            // strict interior only: boundary-hugging samples would make the
            // prescribed quotients unreliable
            if !cons.iter().all(|&(a, b, c, margin)| a * x + b * y + c > margin) {
                continue;
            }
            let (gx, gy) = phi22_in_cell(x, y, k, l)?;
            coords.push(gx);
            if h == 2 {
                coords.push(gy);
            }
        }
    }
    Ok(())
}

/// Phi-images of n points along one edge of a cell polygon, nudged to the
/// cell's interior side. The images trace the boundary curve of the cell's
/// piece of the support.
pub fn edge_image_sample(k: u32, l: u32, edge_index: usize, n: usize) -> Result<Vec<(f64, f64)>> {
    if n < 1 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let poly = cell_polygon(k, l)?;
    if poly.is_empty() {
        return Err(Error::EmptyCell(k, l));
    }
    let edge = poly.edges.get(edge_index).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "cell ({k}, {l}) has {} edges, no index {edge_index}",
            poly.edges.len()
        ))
    })?;
    let (fx, fy) = (edge.from.0.to_f64().unwrap(), edge.from.1.to_f64().unwrap());
    let (tx, ty) = (edge.to.0.to_f64().unwrap(), edge.to.1.to_f64().unwrap());
    let (dx, dy) = (tx - fx, ty - fy);
    let len = dx.hypot(dy);
    // counterclockwise polygon: the inward normal is the left normal
    let (nx, ny) = (-dy / len, dx / len);
    const INSET: f64 = 1e-12;
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let t = (j as f64 + 1.0) / (n as f64 + 1.0);
        let x = fx + t * dx + INSET * nx;
        let y = fy + t * dy + INSET * ny;
        out.push(phi22_in_cell(x, y, k, l)?);
    }
    Ok(out)
}
