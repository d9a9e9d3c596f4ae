//! Dirichlet energies of harmonic extensions, computed by minimizing the
//! discrete energy on a square grid, plus the Poisson and analytic oracles
//! used to check them.

use crate::curve::{segment_distance, ComplexPoint, CurveFunction, JordanCurve};
use crate::error::{Error, Result};
use crate::mobius::map_curve_with;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};
use std::io::Write;

pub const DEFAULT_TOL: f64 = 1e-8;
/// Grid spacing may not exceed this fraction of the diameter.
pub const MIN_CELLS_PER_DIAMETER: f64 = 64.0;
pub const REFLECTION_REFINE: usize = 8;
pub const POISSON_EDGE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Exterior,
    Boundary,
    Interior,
}

impl CellKind {
    fn code(self) -> &'static str {
        match self {
            CellKind::Exterior => "exterior",
            CellKind::Boundary => "boundary",
            CellKind::Interior => "interior",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyResult {
    pub energy: f64,
    pub h: f64,
    pub iterations: usize,
    pub residual: f64,
}

/// Cell `(i, j)` has center `origin + h·(i + ½, j + ½)`; storage is row-major
/// in `j`.
#[derive(Debug, Clone)]
pub struct HarmonicGridField {
    pub origin: ComplexPoint,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub mask: Vec<CellKind>,
    pub values: Vec<ComplexPoint>,
}

impl HarmonicGridField {
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn center(&self, cell: usize) -> ComplexPoint {
        let (i, j) = (cell % self.nx, cell / self.nx);
        self.origin + ComplexPoint::new((i as f64 + 0.5) * self.h, (j as f64 + 0.5) * self.h)
    }

    fn neighbours(&self, cell: usize) -> impl Iterator<Item = usize> + '_ {
        let (i, j) = (cell % self.nx, cell / self.nx);
        let (nx, ny) = (self.nx, self.ny);
        [
            (i > 0).then(|| cell - 1),
            (i + 1 < nx).then(|| cell + 1),
            (j > 0).then(|| cell - nx),
            (j + 1 < ny).then(|| cell + nx),
        ]
        .into_iter()
        .flatten()
    }

    /// `(1/2π) Σ |V_a − V_b|²` over 4-neighbour pairs of non-exterior cells.
    pub fn energy(&self) -> f64 {
        let mut sum = 0.0;
        for j in 0..self.ny {
            for i in 0..self.nx {
                let a = self.index(i, j);
                if self.mask[a] == CellKind::Exterior {
                    continue;
                }
                if i + 1 < self.nx && self.mask[a + 1] != CellKind::Exterior {
                    sum += (self.values[a] - self.values[a + 1]).norm_sqr();
                }
                if j + 1 < self.ny && self.mask[a + self.nx] != CellKind::Exterior {
                    sum += (self.values[a] - self.values[a + self.nx]).norm_sqr();
                }
            }
        }
        sum / TAU
    }

    /// Energy change from adding `delta` to the value of one cell.
    pub fn local_energy_change(&self, cell: usize, delta: ComplexPoint) -> f64 {
        let v = self.values[cell];
        let change: f64 = self
            .neighbours(cell)
            .filter(|&b| self.mask[b] != CellKind::Exterior)
            .map(|b| (v + delta - self.values[b]).norm_sqr() - (v - self.values[b]).norm_sqr())
            .sum();
        change / TAU
    }

    pub fn interior_cells(&self) -> Vec<usize> {
        (0..self.mask.len()).filter(|&c| self.mask[c] == CellKind::Interior).collect()
    }

    /// Largest `|4V_a − Σ V_b|` over interior cells.
    pub fn max_laplacian(&self) -> f64 {
        self.interior_cells()
            .into_iter()
            .map(|a| {
                let s: ComplexPoint = self.neighbours(a).map(|b| self.values[b]).sum();
                (self.values[a] * 4.0 - s).norm()
            })
            .fold(0.0, f64::max)
    }

    /// True when no interior cell touches an exterior cell.
    pub fn boundary_layer_closed(&self) -> bool {
        self.interior_cells().into_iter().all(|a| {
            self.neighbours(a).count() == 4 && self.neighbours(a).all(|b| self.mask[b] != CellKind::Exterior)
        })
    }

    /// CSV dump: `x,y,mask,re,im` per cell.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,y,mask,re,im")?;
        for cell in 0..self.mask.len() {
            let c = self.center(cell);
            let v = self.values[cell];
            writeln!(out, "{},{},{},{},{}", c.re, c.im, self.mask[cell].code(), v.re, v.im)?;
        }
        Ok(())
    }
}

/// Inside cells by crossing parity along each row of cell centers.
fn scanline_inside(curve: &JordanCurve, origin: ComplexPoint, h: f64, nx: usize, ny: usize) -> Vec<bool> {
    let mut inside = vec![false; nx * ny];
    let mut xs = Vec::new();
    for j in 0..ny {
        let y = origin.im + (j as f64 + 0.5) * h;
        xs.clear();
        for (a, b) in curve.segments() {
            if (a.im <= y) != (b.im <= y) {
                xs.push(a.re + (y - a.im) * (b.re - a.re) / (b.im - a.im));
            }
        }
        xs.sort_by(f64::total_cmp);
        for pair in xs.chunks_exact(2) {
            let lo = ((pair[0] - origin.re) / h - 0.5).ceil().max(0.0) as usize;
            let hi = ((pair[1] - origin.re) / h - 0.5).floor();
            if hi < 0.0 {
                continue;
            }
            let hi = (hi as usize).min(nx - 1);
            for i in lo..=hi {
                inside[j * nx + i] = true;
            }
        }
    }
    inside
}

/// Distance from every cell center within `reach` of the curve to its
/// nearest curve point, with the segment and parameter of that point.
fn near_cells(
    curve: &JordanCurve,
    origin: ComplexPoint,
    h: f64,
    nx: usize,
    ny: usize,
    reach: f64,
) -> (Vec<f64>, Vec<(u32, f64)>) {
    let mut dist = vec![f64::INFINITY; nx * ny];
    let mut nearest = vec![(0u32, 0.0); nx * ny];
    let to_index = |v: f64, n: usize| ((v / h - 0.5).max(0.0) as usize).min(n - 1);
    for (s, (a, b)) in curve.segments().enumerate() {
        let i0 = to_index(a.re.min(b.re) - reach - origin.re, nx);
        let i1 = to_index(a.re.max(b.re) + reach - origin.re + h, nx);
        let j0 = to_index(a.im.min(b.im) - reach - origin.im, ny);
        let j1 = to_index(a.im.max(b.im) + reach - origin.im + h, ny);
        for j in j0..=j1 {
            for i in i0..=i1 {
                let c = origin + ComplexPoint::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
                let (d, t) = segment_distance(a, b, c);
                let cell = j * nx + i;
                if d < dist[cell] {
                    dist[cell] = d;
                    nearest[cell] = (s as u32, t);
                }
            }
        }
    }
    (dist, nearest)
}

fn count_components(mask: &[CellKind], nx: usize, ny: usize) -> usize {
    let mut seen = vec![false; mask.len()];
    let mut components = 0;
    let mut queue = VecDeque::new();
    for start in 0..mask.len() {
        if seen[start] || mask[start] == CellKind::Exterior {
            continue;
        }
        components += 1;
        seen[start] = true;
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            let (i, j) = (c % nx, c / nx);
            let nbs = [
                (i > 0).then(|| c - 1),
                (i + 1 < nx).then(|| c + 1),
                (j > 0).then(|| c - nx),
                (j + 1 < ny).then(|| c + nx),
            ];
            for b in nbs.into_iter().flatten() {
                if !seen[b] && mask[b] != CellKind::Exterior {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
    }
    components
}

/// Builds the cell mask and fixes boundary values from the nearest curve
/// point.
fn build_grid(curve: &JordanCurve, f: &CurveFunction, h: f64) -> Result<HarmonicGridField> {
    f.check_matches(curve)?;
    let diam = curve.diameter();
    if !(h > 0.0) || h > diam / MIN_CELLS_PER_DIAMETER {
        return Err(Error::InvalidParameter(format!(
            "grid spacing {h} must be positive and at most diam/{MIN_CELLS_PER_DIAMETER} = {}",
            diam / MIN_CELLS_PER_DIAMETER
        )));
    }
    let (mut lo, mut hi) = (curve.node(0), curve.node(0));
    for z in curve.nodes() {
        lo = ComplexPoint::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = ComplexPoint::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    let origin = lo - ComplexPoint::new(2.0 * h, 2.0 * h);
    let nx = ((hi.re - origin.re) / h).ceil() as usize + 2;
    let ny = ((hi.im - origin.im) / h).ceil() as usize + 2;

    let inside = scanline_inside(curve, origin, h, nx, ny);
    let (dist, nearest) = near_cells(curve, origin, h, nx, ny, 1.5 * h);
    let mut mask = vec![CellKind::Exterior; nx * ny];
    let mut values = vec![ComplexPoint::new(0.0, 0.0); nx * ny];
    for cell in 0..nx * ny {
        if !inside[cell] {
            continue;
        }
        if dist[cell] <= h {
            mask[cell] = CellKind::Boundary;
            let (s, t) = nearest[cell];
            values[cell] = JordanCurve::interpolate(&f.values, s as usize, t);
        } else {
            mask[cell] = CellKind::Interior;
        }
    }
    let components = count_components(&mask, nx, ny);
    if components != 1 {
        return Err(Error::MaskDisconnected { components, h });
    }
    Ok(HarmonicGridField {
        origin,
        h,
        nx,
        ny,
        mask,
        values,
    })
}

/// Jacobi-preconditioned conjugate gradient for the 5-point Laplacian on the
/// interior cells of `field`, one real component at a time.
fn solve_component(
    nb: &[[u32; 4]],
    rhs: &[f64],
    x: &mut [f64],
    tol: f64,
    max_iter: usize,
) -> std::result::Result<(usize, f64), (usize, f64)> {
    const FIXED: u32 = u32::MAX;
    let n = rhs.len();
    let apply = |p: &[f64], out: &mut [f64]| {
        for (a, nbs) in nb.iter().enumerate() {
            let mut s = 4.0 * p[a];
            for &b in nbs {
                if b != FIXED {
                    s -= p[b as usize];
                }
            }
            out[a] = s;
        }
    };
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let b_norm = dot(rhs, rhs).sqrt();
    let reference = if b_norm > 0.0 { b_norm } else { 1.0 };

    let mut ap = vec![0.0; n];
    apply(x, &mut ap);
    let mut r: Vec<f64> = rhs.iter().zip(&ap).map(|(b, a)| b - a).collect();
    let mut z: Vec<f64> = r.iter().map(|v| 0.25 * v).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut residual = dot(&r, &r).sqrt() / reference;
    let mut iterations = 0;
    while residual > tol {
        if iterations >= max_iter {
            return Err((iterations, residual));
        }
        apply(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        for a in 0..n {
            x[a] += alpha * p[a];
            r[a] -= alpha * ap[a];
            z[a] = 0.25 * r[a];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for a in 0..n {
            p[a] = z[a] + beta * p[a];
        }
        iterations += 1;
        residual = dot(&r, &r).sqrt() / reference;
    }
    Ok((iterations, residual))
}

fn solve_field(field: &mut HarmonicGridField, tol: f64) -> Result<(usize, f64)> {
    const FIXED: u32 = u32::MAX;
    let unknowns = field.interior_cells();
    let mut index = vec![FIXED; field.mask.len()];
    for (k, &c) in unknowns.iter().enumerate() {
        index[c] = k as u32;
    }
    let nx = field.nx;
    let mut nb = Vec::with_capacity(unknowns.len());
    let mut rhs = vec![ComplexPoint::new(0.0, 0.0); unknowns.len()];
    for (k, &c) in unknowns.iter().enumerate() {
        // Interior cells are never on the grid edge and have no exterior
        // neighbour, so all four neighbours exist and are in the domain.
        let cells = [c - 1, c + 1, c - nx, c + nx];
        let mut row = [FIXED; 4];
        for (slot, &b) in cells.iter().enumerate() {
            if index[b] == FIXED {
                rhs[k] += field.values[b];
            } else {
                row[slot] = index[b];
            }
        }
        nb.push(row);
    }
    let boundary: Vec<ComplexPoint> = (0..field.mask.len())
        .filter(|&c| field.mask[c] == CellKind::Boundary)
        .map(|c| field.values[c])
        .collect();
    let mean = boundary.iter().sum::<ComplexPoint>() / boundary.len().max(1) as f64;
    let max_iter = (200.0 * (unknowns.len() as f64).sqrt()).ceil() as usize;

    let mut total_iterations = 0;
    let mut worst = 0.0f64;
    let mut solution = vec![ComplexPoint::new(0.0, 0.0); unknowns.len()];
    for part in 0..2 {
        let pick = |v: &ComplexPoint| if part == 0 { v.re } else { v.im };
        let b: Vec<f64> = rhs.iter().map(pick).collect();
        let mut x = vec![pick(&mean); unknowns.len()];
        let (iterations, residual) = solve_component(&nb, &b, &mut x, tol, max_iter)
            .map_err(|(iterations, residual)| Error::NoConvergence { iterations, residual })?;
        total_iterations += iterations;
        worst = worst.max(residual);
        for (s, v) in solution.iter_mut().zip(x) {
            if part == 0 {
                s.re = v;
            } else {
                s.im = v;
            }
        }
    }
    for (&c, v) in unknowns.iter().zip(solution) {
        field.values[c] = v;
    }
    Ok((total_iterations, worst))
}

/// Minimizes the discrete Dirichlet energy with boundary data `f` and
/// returns the solved field alongside the energy.
pub fn interior_energy_field(
    curve: &JordanCurve,
    f: &CurveFunction,
    h: f64,
    tol: f64,
) -> Result<(EnergyResult, HarmonicGridField)> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let mut field = build_grid(curve, f, h)?;
    let (iterations, residual) = solve_field(&mut field, tol)?;
    let result = EnergyResult {
        energy: field.energy(),
        h,
        iterations,
        residual,
    };
    Ok((result, field))
}

pub fn interior_energy_grid(curve: &JordanCurve, f: &CurveFunction, h: f64, tol: f64) -> Result<EnergyResult> {
    interior_energy_field(curve, f, h, tol).map(|(r, _)| r)
}

/// An interior point to reflect about: the area centroid, else the vertex
/// mean, else the deepest center of a coarse grid.
pub fn interior_basepoint(curve: &JordanCurve) -> Result<ComplexPoint> {
    let nodes = curve.nodes();
    let mean = nodes.iter().sum::<ComplexPoint>() / nodes.len() as f64;
    for p in [curve.centroid(), mean] {
        if let Ok(true) = curve.point_in_interior(p) {
            return Ok(p);
        }
    }
    const COARSE: usize = 64;
    let (mut lo, mut hi) = (nodes[0], nodes[0]);
    for z in nodes {
        lo = ComplexPoint::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = ComplexPoint::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    let mut best: Option<(f64, ComplexPoint)> = None;
    for j in 0..COARSE {
        for i in 0..COARSE {
            let p = lo
                + ComplexPoint::new(
                    (hi.re - lo.re) * (i as f64 + 0.5) / COARSE as f64,
                    (hi.im - lo.im) * (j as f64 + 0.5) / COARSE as f64,
                );
            if let Ok(true) = curve.point_in_interior(p) {
                let d = curve.distance_to_curve(p);
                if best.map_or(true, |(bd, _)| d > bd) {
                    best = Some((d, p));
                }
            }
        }
    }
    best.map(|(_, p)| p).ok_or(Error::NoInteriorBasepoint)
}

/// Reflects curve and samples through `z ↦ 1/z̄` about an interior
/// basepoint, re-equispaced at `N·refine` nodes.
pub fn reflect_problem(curve: &JordanCurve, f: &CurveFunction) -> Result<(JordanCurve, CurveFunction)> {
    f.check_matches(curve)?;
    let base = interior_basepoint(curve)?;
    let centered = curve.translate_and_scale(-base, 1.0)?;
    let (image, values) = map_curve_with(&centered, REFLECTION_REFINE, Some(&f.values), |z| z.inv().conj())?;
    let values = values.expect("values carried");
    let (image, values) = image.resample_with_values(curve.len() * REFLECTION_REFINE, Some(&values))?;
    let values = CurveFunction::new(values.expect("values carried"), f.label.clone())?;
    Ok((image, values))
}

/// Exterior energy through the reflected interior problem. The grid spacing
/// is scaled by the ratio of image to original diameter.
pub fn exterior_energy_grid(curve: &JordanCurve, f: &CurveFunction, h: f64, tol: f64) -> Result<EnergyResult> {
    exterior_energy_field(curve, f, h, tol).map(|(r, _)| r)
}

pub fn exterior_energy_field(
    curve: &JordanCurve,
    f: &CurveFunction,
    h: f64,
    tol: f64,
) -> Result<(EnergyResult, HarmonicGridField)> {
    let (image, g) = reflect_problem(curve, f)?;
    let h_image = h * image.diameter() / curve.diameter();
    interior_energy_field(&image, &g, h_image, tol)
}

/// Trapezoid-rule Poisson integral of equispaced circle samples at `z`.
pub fn poisson_extend_disk(samples: &CurveFunction, z: ComplexPoint) -> Result<ComplexPoint> {
    let r = z.norm();
    if r > 1.0 - POISSON_EDGE {
        return Err(Error::NearBoundary(r));
    }
    let n = samples.len();
    if n == 0 {
        return Err(Error::InvalidParameter("no samples".into()));
    }
    let numerator = 1.0 - r * r;
    let total: ComplexPoint = samples
        .values
        .iter()
        .enumerate()
        .map(|(j, &u)| {
            let e = ComplexPoint::from_polar(1.0, TAU * j as f64 / n as f64);
            u * (numerator / (e - z).norm_sqr())
        })
        .sum();
    Ok(total / n as f64)
}

/// Midpoint rule for `(1/π) ∬_Ω |z − w|⁻⁴` over the inside cells of the
/// grid with spacing `h`.
pub fn analytic_energy_oracle(curve: &JordanCurve, w: ComplexPoint, h: f64) -> Result<f64> {
    if curve.point_in_interior(w)? {
        return Err(Error::InteriorPole);
    }
    let distance = curve.distance_to_curve(w);
    if distance < 4.0 * h {
        return Err(Error::InvalidParameter(format!(
            "pole at distance {distance} is closer than 4h = {}",
            4.0 * h
        )));
    }
    if !(h > 0.0) || h > curve.diameter() / MIN_CELLS_PER_DIAMETER {
        return Err(Error::InvalidParameter(format!("grid spacing {h} too coarse")));
    }
    let origin = curve.nodes()[0] - ComplexPoint::new(curve.diameter() + 2.0 * h, curve.diameter() + 2.0 * h);
    let cells = ((2.0 * curve.diameter() + 4.0 * h) / h).ceil() as usize + 1;
    let inside = scanline_inside(curve, origin, h, cells, cells);
    let mut sum = 0.0;
    for (cell, _) in inside.iter().enumerate().filter(|(_, &b)| b) {
        let (i, j) = (cell % cells, cell / cells);
        let c = origin + ComplexPoint::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
        sum += (c - w).norm_sqr().powi(-2);
    }
    Ok(sum * h * h / PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{make_curve, make_function, CurveSpec, FunctionSpec};

    fn cx(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    #[test]
    fn poisson_oracles() {
        let n = 4096;
        let samples = |f: &dyn Fn(f64) -> ComplexPoint| {
            CurveFunction::new((0..n).map(|j| f(TAU * j as f64 / n as f64)).collect(), "u").unwrap()
        };
        let c = samples(&|_| cx(2.0, -1.0));
        assert!((poisson_extend_disk(&c, cx(0.3, 0.4)).unwrap() - cx(2.0, -1.0)).norm() < 1e-12);
        let e = samples(&|t| ComplexPoint::from_polar(1.0, t));
        assert!((poisson_extend_disk(&e, cx(0.5, 0.0)).unwrap() - cx(0.5, 0.0)).norm() < 1e-8);
        let cos2 = samples(&|t| cx(2.0 * t.cos(), 0.0));
        assert!(poisson_extend_disk(&cos2, cx(0.0, 0.3)).unwrap().norm() < 1e-8);
        assert!(matches!(
            poisson_extend_disk(&c, cx(1.0 - 1e-7, 0.0)),
            Err(Error::NearBoundary(_))
        ));
    }

    #[test]
    fn analytic_oracle_on_unit_circle() {
        let circle = make_curve(&CurveSpec::circle(1.0, 1024)).unwrap();
        let v = analytic_energy_oracle(&circle, cx(2.0, 0.0), 1.0 / 512.0).unwrap();
        assert!((v - 1.0 / 9.0).abs() < 2e-2 / 9.0, "{v}");
        let v = analytic_energy_oracle(&circle, cx(3.0, 0.0), 1.0 / 512.0).unwrap();
        assert!((v - 1.0 / 64.0).abs() < 2e-2 / 64.0, "{v}");
        assert!(matches!(
            analytic_energy_oracle(&circle, cx(0.2, 0.0), 1.0 / 512.0),
            Err(Error::InteriorPole)
        ));
        assert!(analytic_energy_oracle(&circle, cx(1.01, 0.0), 1.0 / 64.0).is_err());
    }

    #[test]
    fn constant_data_has_zero_energy() {
        let circle = make_curve(&CurveSpec::circle(1.0, 512)).unwrap();
        let f = CurveFunction::new(vec![cx(1.5, -2.0); 512], "c").unwrap();
        let r = interior_energy_grid(&circle, &f, 1.0 / 64.0, DEFAULT_TOL).unwrap();
        assert!(r.energy.abs() < 1e-10);
        let r = exterior_energy_grid(&circle, &f, 1.0 / 64.0, DEFAULT_TOL).unwrap();
        assert!(r.energy.abs() < 1e-10);
    }

    #[test]
    fn first_mode_on_coarse_grid() {
        let circle = make_curve(&CurveSpec::circle(1.0, 1024)).unwrap();
        let f = make_function(&FunctionSpec::FourierMode { k: 1 }, &circle).unwrap();
        let (r, field) = interior_energy_field(&circle, &f, 1.0 / 64.0, DEFAULT_TOL).unwrap();
        assert!((r.energy - 1.0).abs() < 0.1, "{r:?}");
        assert!(field.boundary_layer_closed());
        assert!(r.residual <= DEFAULT_TOL);
        let r = exterior_energy_grid(&circle, &f, 1.0 / 64.0, DEFAULT_TOL).unwrap();
        assert!((r.energy - 1.0).abs() < 0.1, "{r:?}");
    }

    #[test]
    fn solved_field_is_a_local_minimum() {
        let star = make_curve(&CurveSpec::star(0.2, 3, 512)).unwrap();
        let f = make_function(&FunctionSpec::FourierMode { k: 2 }, &star).unwrap();
        let (_, field) = interior_energy_field(&star, &f, star.diameter() / 96.0, 1e-10).unwrap();
        let h = field.h;
        for &c in field.interior_cells().iter().step_by(37).take(100) {
            for delta in [cx(h * h, 0.0), cx(-h * h, 0.0), cx(0.0, h * h)] {
                assert!(field.local_energy_change(c, delta) > 0.0);
            }
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        let circle = make_curve(&CurveSpec::circle(1.0, 256)).unwrap();
        let f = make_function(&FunctionSpec::Coordinate, &circle).unwrap();
        assert!(matches!(
            interior_energy_grid(&circle, &f, 0.1, DEFAULT_TOL),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn pinched_mask_is_reported() {
        let barbell = make_curve(&CurveSpec::barbell(0.01, 2048)).unwrap();
        let f = make_function(&FunctionSpec::Coordinate, &barbell).unwrap();
        let h = barbell.diameter() / 64.0;
        assert!(matches!(
            interior_energy_grid(&barbell, &f, h, DEFAULT_TOL),
            Err(Error::MaskDisconnected { .. })
        ));
    }

    #[test]
    fn basepoint_for_nonconvex_curve() {
        let c = JordanCurve::new(vec![
            cx(0.0, 0.0),
            cx(4.0, 0.0),
            cx(4.0, 4.0),
            cx(3.0, 4.0),
            cx(3.0, 1.0),
            cx(1.0, 1.0),
            cx(1.0, 4.0),
            cx(0.0, 4.0),
        ])
        .unwrap();
        let p = interior_basepoint(&c).unwrap();
        assert!(c.point_in_interior(p).unwrap());
    }

    #[test]
    fn field_dump_has_one_row_per_cell() {
        let circle = make_curve(&CurveSpec::circle(1.0, 256)).unwrap();
        let f = make_function(&FunctionSpec::Coordinate, &circle).unwrap();
        let (_, field) = interior_energy_field(&circle, &f, 1.0 / 40.0, DEFAULT_TOL).unwrap();
        let mut buf = Vec::new();
        field.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), field.nx * field.ny + 1);
    }
}
