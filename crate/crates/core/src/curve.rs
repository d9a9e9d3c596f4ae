//! Closed polylines standing in for rectifiable Jordan curves, and the
//! sampled boundary functions that live on them.
//!
//! A [`JordanCurve`] stores its nodes together with an arc-length table.
//! For curves built directly from a node list the table holds polyline
//! lengths. Curves produced by [`JordanCurve::resample_arclength`] (and the
//! zoo generators) inherit the arc-length parameter of the curve they were
//! sampled from, so `cumlen` is the position of each node along the source.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub type ComplexPoint = Complex64;

/// Smallest node count accepted for raw polygon input.
pub const MIN_INPUT_NODES: usize = 3;
/// Smallest node count produced by resampling.
pub const MIN_RESAMPLE_NODES: usize = 8;
/// Queries closer than this to the polyline are rejected as on-curve.
pub const ON_CURVE_TOL: f64 = 1e-12;
/// Relative tolerance on node spacing for a curve to count as equispaced.
pub const EQUISPACED_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Positive,
    Negative,
}

#[derive(Debug, Clone)]
pub struct JordanCurve {
    nodes: Vec<ComplexPoint>,
    cumlen: Vec<f64>,
    input_orientation: Orientation,
    diameter: f64,
}

/// Distance from `w` to the segment `[a, b]` and the parameter of the
/// closest point.
pub fn segment_distance(a: ComplexPoint, b: ComplexPoint, w: ComplexPoint) -> (f64, f64) {
    let d = b - a;
    let len_sq = d.norm_sqr();
    let t = if len_sq > 0.0 {
        (((w - a) * d.conj()).re / len_sq).clamp(0.0, 1.0)
    } else {
        0.0
    };
    ((a + d * t - w).norm(), t)
}

fn cross(a: ComplexPoint, b: ComplexPoint) -> f64 {
    a.re * b.im - a.im * b.re
}

pub(crate) fn signed_area(nodes: &[ComplexPoint]) -> f64 {
    let n = nodes.len();
    let mut acc = 0.0;
    for i in 0..n {
        acc += cross(nodes[i], nodes[(i + 1) % n]);
    }
    0.5 * acc
}

/// Reorders a closed node cycle to the opposite orientation while keeping
/// node 0 in place: `[0, n-1, n-2, ..., 1]`.
pub(crate) fn reversed_cycle<T: Copy>(items: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(items.len());
    if let Some(&first) = items.first() {
        out.push(first);
        out.extend(items[1..].iter().rev().copied());
    }
    out
}

pub(crate) fn polyline_cumlen(nodes: &[ComplexPoint]) -> Vec<f64> {
    let n = nodes.len();
    let mut cumlen = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    cumlen.push(0.0);
    for i in 0..n {
        acc += (nodes[(i + 1) % n] - nodes[i]).norm();
        cumlen.push(acc);
    }
    cumlen
}

/// Strict crossing test between two segments. Touching and collinear
/// contact within `tol` does not count.
fn segments_cross(a: ComplexPoint, b: ComplexPoint, c: ComplexPoint, d: ComplexPoint, tol: f64) -> bool {
    let o1 = cross(b - a, c - a);
    let o2 = cross(b - a, d - a);
    let o3 = cross(d - c, a - c);
    let o4 = cross(d - c, b - c);
    let strictly = |x: f64, y: f64| (x > tol && y < -tol) || (x < -tol && y > tol);
    strictly(o1, o2) && strictly(o3, o4)
}

/// Sweep over segments sorted by their left x-extent, testing every pair
/// of non-adjacent segments whose x-ranges overlap.
fn first_self_intersection(nodes: &[ComplexPoint]) -> Option<(usize, usize)> {
    let n = nodes.len();
    let scale = nodes.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let tol = 1e-12 * scale * scale;
    let mut order: Vec<usize> = (0..n).collect();
    let xmin = |i: usize| nodes[i].re.min(nodes[(i + 1) % n].re);
    let xmax = |i: usize| nodes[i].re.max(nodes[(i + 1) % n].re);
    order.sort_by(|&i, &j| xmin(i).total_cmp(&xmin(j)).then(i.cmp(&j)));
    for (pos, &i) in order.iter().enumerate() {
        let (a, b) = (nodes[i], nodes[(i + 1) % n]);
        let (ylo, yhi) = (a.im.min(b.im), a.im.max(b.im));
        let right = xmax(i);
        for &j in &order[pos + 1..] {
            if xmin(j) > right {
                break;
            }
            let adjacent = j == (i + 1) % n || i == (j + 1) % n;
            if adjacent {
                continue;
            }
            let (c, d) = (nodes[j], nodes[(j + 1) % n]);
            if c.im.max(d.im) < ylo || c.im.min(d.im) > yhi {
                continue;
            }
            if segments_cross(a, b, c, d, tol) {
                return Some((i.min(j), i.max(j)));
            }
        }
    }
    None
}

/// Diameter of a point set through its convex hull.
pub(crate) fn point_set_diameter(points: &[ComplexPoint]) -> f64 {
    let mut pts: Vec<ComplexPoint> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return if pts.len() == 2 { (pts[1] - pts[0]).norm() } else { 0.0 };
    }
    // Monotone chain.
    let mut hull: Vec<ComplexPoint> = Vec::with_capacity(2 * pts.len());
    for &p in pts.iter().chain(pts.iter().rev().skip(1)) {
        while hull.len() >= 2 {
            let k = hull.len();
            if cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.pop();
    let h = hull.len();
    if h < 3 {
        // Collinear input: the extremes of the sorted order are the ends.
        return (pts[pts.len() - 1] - pts[0]).norm();
    }
    // Rotating calipers over antipodal pairs.
    let mut best = 0.0f64;
    let mut j = 1;
    for i in 0..h {
        let ni = (i + 1) % h;
        let edge = hull[ni] - hull[i];
        while cross(edge, hull[(j + 1) % h] - hull[i]).abs() > cross(edge, hull[j] - hull[i]).abs() {
            j = (j + 1) % h;
        }
        best = best.max((hull[i] - hull[j]).norm()).max((hull[ni] - hull[j]).norm());
    }
    best
}

impl JordanCurve {
    /// Builds a curve from raw polygon vertices: validates them, checks
    /// simplicity and normalizes to counterclockwise orientation.
    ///
    /// A trailing node equal to the first one is treated as an explicit
    /// closing vertex and dropped.
    pub fn new(mut nodes: Vec<ComplexPoint>) -> Result<Self> {
        if nodes.len() > 1 && nodes.first() == nodes.last() {
            nodes.pop();
        }
        if nodes.len() < MIN_INPUT_NODES {
            return Err(Error::InvalidCurve(format!(
                "need at least {MIN_INPUT_NODES} nodes, got {}",
                nodes.len()
            )));
        }
        if let Some(i) = nodes.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidCurve(format!("node {i} is not finite")));
        }
        let n = nodes.len();
        if let Some(i) = (0..n).find(|&i| nodes[i] == nodes[(i + 1) % n]) {
            return Err(Error::InvalidCurve(format!("nodes {i} and {} coincide", (i + 1) % n)));
        }
        if let Some((i, j)) = first_self_intersection(&nodes) {
            return Err(Error::InvalidCurve(format!("segments {i} and {j} cross")));
        }
        let cumlen = polyline_cumlen(&nodes);
        Self::from_parts(nodes, cumlen)
    }

    /// Assembles a curve from nodes and an arc-length table without the
    /// simplicity sweep. Used for images of already validated curves.
    /// Orientation is normalized; the table is reversed alongside.
    pub(crate) fn from_parts(nodes: Vec<ComplexPoint>, cumlen: Vec<f64>) -> Result<Self> {
        Self::from_parts_with(nodes, cumlen, None).map(|(c, _)| c)
    }

    /// Like [`from_parts`](Self::from_parts) but carries per-node values
    /// through the orientation normalization.
    pub(crate) fn from_parts_with(
        nodes: Vec<ComplexPoint>,
        cumlen: Vec<f64>,
        values: Option<Vec<ComplexPoint>>,
    ) -> Result<(Self, Option<Vec<ComplexPoint>>)> {
        let n = nodes.len();
        debug_assert_eq!(cumlen.len(), n + 1);
        let total = cumlen[n];
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::Degenerate(format!("total length {total}")));
        }
        if cumlen.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Degenerate("arc-length table not strictly increasing".into()));
        }
        let area = signed_area(&nodes);
        let (nodes, cumlen, values, input_orientation) = if area < 0.0 {
            let rev_nodes = reversed_cycle(&nodes);
            let mut rev_cum = Vec::with_capacity(n + 1);
            rev_cum.push(0.0);
            for i in 1..n {
                rev_cum.push(total - cumlen[n - i]);
            }
            rev_cum.push(total);
            let rev_values = values.map(|v| reversed_cycle(&v));
            (rev_nodes, rev_cum, rev_values, Orientation::Negative)
        } else {
            (nodes, cumlen, values, Orientation::Positive)
        };
        let diameter = point_set_diameter(&nodes);
        Ok((
            Self {
                nodes,
                cumlen,
                input_orientation,
                diameter,
            },
            values,
        ))
    }

    /// Runs the segment-pair sweep on this curve's polyline.
    pub fn check_simple(&self) -> Result<()> {
        match first_self_intersection(&self.nodes) {
            Some((i, j)) => Err(Error::InvalidCurve(format!("segments {i} and {j} cross"))),
            None => Ok(()),
        }
    }

    pub fn nodes(&self) -> &[ComplexPoint] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> ComplexPoint {
        self.nodes[i % self.nodes.len()]
    }

    /// `cumlen[i]` is the arc length from node 0 to node i; the final entry
    /// is the total length.
    pub fn cumlen(&self) -> &[f64] {
        &self.cumlen
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.cumlen[self.nodes.len()]
    }

    /// Orientation after normalization; always positive.
    pub fn orientation(&self) -> Orientation {
        Orientation::Positive
    }

    /// Orientation of the node list this curve was built from.
    pub fn input_orientation(&self) -> Orientation {
        self.input_orientation
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.nodes)
    }

    /// Segment `i` runs from node `i` to node `i + 1` (cyclically).
    pub fn segment(&self, i: usize) -> (ComplexPoint, ComplexPoint) {
        let n = self.nodes.len();
        (self.nodes[i % n], self.nodes[(i + 1) % n])
    }

    pub fn segments(&self) -> impl Iterator<Item = (ComplexPoint, ComplexPoint)> + '_ {
        (0..self.nodes.len()).map(move |i| self.segment(i))
    }

    /// Nominal spacing `L / N`.
    pub fn spacing(&self) -> f64 {
        self.length() / self.nodes.len() as f64
    }

    pub fn is_equispaced(&self) -> bool {
        let ds = self.spacing();
        self.cumlen
            .windows(2)
            .all(|w| ((w[1] - w[0]) - ds).abs() <= EQUISPACED_TOL * ds)
    }

    pub(crate) fn require_equispaced(&self) -> Result<()> {
        if self.is_equispaced() {
            Ok(())
        } else {
            Err(Error::ResampleRequired(format!(
                "curve with {} nodes is not equispaced in arc length",
                self.len()
            )))
        }
    }

    /// Area centroid of the enclosed polygon.
    pub fn centroid(&self) -> ComplexPoint {
        let n = self.nodes.len();
        let mut acc = ComplexPoint::new(0.0, 0.0);
        let mut area2 = 0.0;
        for i in 0..n {
            let (a, b) = (self.nodes[i], self.nodes[(i + 1) % n]);
            let c = cross(a, b);
            area2 += c;
            acc += (a + b) * c;
        }
        if area2.abs() > 0.0 {
            acc / (3.0 * area2)
        } else {
            self.nodes.iter().sum::<ComplexPoint>() / n as f64
        }
    }

    /// Outward unit normal at node `i`, from the central difference of its
    /// neighbours.
    pub fn outward_normal(&self, i: usize) -> ComplexPoint {
        let n = self.nodes.len();
        let t = self.nodes[(i + 1) % n] - self.nodes[(i + n - 1) % n];
        let out = ComplexPoint::new(t.im, -t.re);
        out / out.norm()
    }

    /// Resamples at `n` nodes equally spaced in arc length, node 0 kept.
    /// The result's `cumlen` is the arc-length parameter of the source, so
    /// the length is preserved exactly.
    pub fn resample_arclength(&self, n: usize) -> Result<JordanCurve> {
        self.resample_with_values(n, None).map(|(c, _)| c)
    }

    /// Resamples the curve and linearly interpolates per-node values along
    /// with it.
    pub fn resample_with_values(
        &self,
        n: usize,
        values: Option<&[ComplexPoint]>,
    ) -> Result<(JordanCurve, Option<Vec<ComplexPoint>>)> {
        if n < MIN_RESAMPLE_NODES {
            return Err(Error::InvalidParameter(format!(
                "resample needs N >= {MIN_RESAMPLE_NODES}, got {n}"
            )));
        }
        let total = self.length();
        if !(total > 0.0) {
            return Err(Error::Degenerate("zero-length curve".into()));
        }
        let m = self.nodes.len();
        let step = total / n as f64;
        let mut nodes = Vec::with_capacity(n);
        let mut out_values = values.map(|_| Vec::with_capacity(n));
        let mut seg = 0;
        for k in 0..n {
            let s = k as f64 * step;
            while seg + 1 < m && self.cumlen[seg + 1] <= s {
                seg += 1;
            }
            let len = self.cumlen[seg + 1] - self.cumlen[seg];
            let t = ((s - self.cumlen[seg]) / len).clamp(0.0, 1.0);
            let (a, b) = self.segment(seg);
            nodes.push(if t == 0.0 { a } else { a + (b - a) * t });
            if let (Some(out), Some(v)) = (out_values.as_mut(), values) {
                out.push(Self::interpolate(v, seg, t));
            }
        }
        let cumlen: Vec<f64> = (0..=n).map(|k| if k == n { total } else { k as f64 * step }).collect();
        if nodes.iter().zip(nodes.iter().cycle().skip(1)).any(|(a, b)| a == b) {
            return Err(Error::Degenerate("resampled nodes coincide".into()));
        }
        let diameter = point_set_diameter(&nodes);
        Ok((
            JordanCurve {
                nodes,
                cumlen,
                input_orientation: self.input_orientation,
                diameter,
            },
            out_values,
        ))
    }

    /// Signed winding number of the curve about `w` (nonzero rule, signed
    /// crossings of the rightward ray).
    pub fn winding_number(&self, w: ComplexPoint) -> i32 {
        let mut winding = 0;
        for (a, b) in self.segments() {
            if a.im <= w.im {
                if b.im > w.im && cross(b - a, w - a) > 0.0 {
                    winding += 1;
                }
            } else if b.im <= w.im && cross(b - a, w - a) < 0.0 {
                winding -= 1;
            }
        }
        winding
    }

    pub fn point_in_interior(&self, w: ComplexPoint) -> Result<bool> {
        let distance = self.distance_to_curve(w);
        if distance <= ON_CURVE_TOL {
            return Err(Error::OnCurve {
                re: w.re,
                im: w.im,
                distance,
            });
        }
        Ok(self.winding_number(w).abs() == 1)
    }

    pub fn distance_to_curve(&self, w: ComplexPoint) -> f64 {
        self.nearest_point(w).distance
    }

    pub fn nearest_point(&self, w: ComplexPoint) -> NearestPoint {
        let mut best = NearestPoint {
            segment: 0,
            t: 0.0,
            point: self.nodes[0],
            distance: f64::INFINITY,
        };
        for (i, (a, b)) in self.segments().enumerate() {
            let (d, t) = segment_distance(a, b, w);
            if d < best.distance {
                best = NearestPoint {
                    segment: i,
                    t,
                    point: a + (b - a) * t,
                    distance: d,
                };
            }
        }
        best
    }

    /// Length of the shorter of the two arcs between nodes `i` and `j`.
    pub fn shorter_arc_length(&self, i: usize, j: usize) -> f64 {
        let direct = (self.cumlen[j] - self.cumlen[i]).abs();
        direct.min(self.length() - direct)
    }

    /// Symmetric Hausdorff distance between the node sets of each curve and
    /// the polyline of the other.
    pub fn hausdorff_distance(&self, other: &JordanCurve) -> f64 {
        let forward = SegmentGrid::new(other).max_distance(&self.nodes);
        let backward = SegmentGrid::new(self).max_distance(&other.nodes);
        forward.max(backward)
    }

    /// Midpoint-rule spherical length, `∫ |dz| / (1 + |z|²)`.
    pub fn spherical_length(&self) -> f64 {
        self.segments()
            .map(|(a, b)| {
                let mid = (a + b) * 0.5;
                (b - a).norm() / (1.0 + mid.norm_sqr())
            })
            .sum()
    }

    /// Affine image `z ↦ factor·z + shift`.
    pub fn translate_and_scale(&self, shift: ComplexPoint, factor: f64) -> Result<JordanCurve> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::InvalidParameter(format!("scale factor {factor} must be positive")));
        }
        self.similarity_image(ComplexPoint::new(factor, 0.0), shift)
    }

    /// Image under `z ↦ scale·z + shift`. The arc-length table is scaled by
    /// `|scale|` rather than recomputed, so it stays exact.
    pub fn similarity_image(&self, scale: ComplexPoint, shift: ComplexPoint) -> Result<JordanCurve> {
        let factor = scale.norm();
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::InvalidParameter(format!("similarity scale {scale} must be nonzero")));
        }
        Ok(JordanCurve {
            nodes: self.nodes.iter().map(|&z| z * scale + shift).collect(),
            cumlen: self.cumlen.iter().map(|&s| s * factor).collect(),
            input_orientation: self.input_orientation,
            diameter: self.diameter * factor,
        })
    }

    /// Scales about the origin so the total length equals `target`.
    pub fn rescaled_to_length(&self, target: f64) -> Result<JordanCurve> {
        let mut out = self.translate_and_scale(ComplexPoint::new(0.0, 0.0), target / self.length())?;
        let n = out.nodes.len();
        out.cumlen[n] = target;
        Ok(out)
    }

    /// Evaluates per-node values linearly at a point of segment `seg`.
    pub(crate) fn interpolate(values: &[ComplexPoint], seg: usize, t: f64) -> ComplexPoint {
        let n = values.len();
        let (a, b) = (values[seg % n], values[(seg + 1) % n]);
        a + (b - a) * t
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NearestPoint {
    pub segment: usize,
    pub t: f64,
    pub point: ComplexPoint,
    pub distance: f64,
}

/// Uniform bucket grid over the segments of a curve for nearest-segment
/// queries.
struct SegmentGrid<'a> {
    curve: &'a JordanCurve,
    origin: ComplexPoint,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
}

impl<'a> SegmentGrid<'a> {
    fn new(curve: &'a JordanCurve) -> Self {
        let nodes = curve.nodes();
        let (mut lo, mut hi) = (nodes[0], nodes[0]);
        for z in nodes {
            lo = ComplexPoint::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = ComplexPoint::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        let extent = (hi.re - lo.re).max(hi.im - lo.im).max(f64::MIN_POSITIVE);
        let side = (nodes.len() as f64).sqrt().ceil().max(1.0);
        let cell = (extent / side).max(curve.length() / nodes.len() as f64);
        let nx = ((hi.re - lo.re) / cell) as usize + 1;
        let ny = ((hi.im - lo.im) / cell) as usize + 1;
        let mut buckets = vec![Vec::new(); nx * ny];
        for (k, (a, b)) in curve.segments().enumerate() {
            let (i0, j0) = Self::coords(lo, cell, nx, ny, ComplexPoint::new(a.re.min(b.re), a.im.min(b.im)));
            let (i1, j1) = Self::coords(lo, cell, nx, ny, ComplexPoint::new(a.re.max(b.re), a.im.max(b.im)));
            for j in j0..=j1 {
                for i in i0..=i1 {
                    buckets[j * nx + i].push(k as u32);
                }
            }
        }
        Self { curve, origin: lo, cell, nx, ny, buckets }
    }

    fn coords(origin: ComplexPoint, cell: f64, nx: usize, ny: usize, p: ComplexPoint) -> (usize, usize) {
        let i = ((p.re - origin.re) / cell).floor().clamp(0.0, (nx - 1) as f64) as usize;
        let j = ((p.im - origin.im) / cell).floor().clamp(0.0, (ny - 1) as f64) as usize;
        (i, j)
    }

    fn distance(&self, p: ComplexPoint) -> f64 {
        let (ci, cj) = Self::coords(self.origin, self.cell, self.nx, self.ny, p);
        let mut best = f64::INFINITY;
        let reach = self.nx.max(self.ny);
        for r in 0..=reach {
            let (ri, rj) = (r as isize, r as isize);
            for dj in -rj..=rj {
                for di in -ri..=ri {
                    if di.abs() != ri && dj.abs() != rj {
                        continue;
                    }
                    let (i, j) = (ci as isize + di, cj as isize + dj);
                    if i < 0 || j < 0 || i >= self.nx as isize || j >= self.ny as isize {
                        continue;
                    }
                    for &k in &self.buckets[j as usize * self.nx + i as usize] {
                        let (a, b) = self.curve.segment(k as usize);
                        best = best.min(segment_distance(a, b, p).0);
                    }
                }
            }
            if best <= r as f64 * self.cell {
                break;
            }
        }
        best
    }

    fn max_distance(&self, points: &[ComplexPoint]) -> f64 {
        points.iter().map(|&p| self.distance(p)).fold(0.0, f64::max)
    }
}

/// Samples of a boundary function, one per curve node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFunction {
    pub values: Vec<ComplexPoint>,
    pub label: String,
}

impl CurveFunction {
    pub fn new(values: Vec<ComplexPoint>, label: impl Into<String>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidParameter(format!("function value {i} is not finite")));
        }
        Ok(Self {
            values,
            label: label.into(),
        })
    }

    pub fn for_curve(curve: &JordanCurve, values: Vec<ComplexPoint>, label: impl Into<String>) -> Result<Self> {
        let f = Self::new(values, label)?;
        f.check_matches(curve)?;
        Ok(f)
    }

    pub fn from_fn(curve: &JordanCurve, label: impl Into<String>, f: impl Fn(ComplexPoint) -> ComplexPoint) -> Result<Self> {
        Self::new(curve.nodes().iter().map(|&z| f(z)).collect(), label)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check_matches(&self, curve: &JordanCurve) -> Result<()> {
        if self.values.len() != curve.len() {
            return Err(Error::Mismatch(format!(
                "{} values for a curve with {} nodes",
                self.values.len(),
                curve.len()
            )));
        }
        Ok(())
    }

    pub fn scaled(&self, lambda: ComplexPoint) -> CurveFunction {
        CurveFunction {
            values: self.values.iter().map(|v| v * lambda).collect(),
            label: self.label.clone(),
        }
    }

    pub fn shifted(&self, c: ComplexPoint) -> CurveFunction {
        CurveFunction {
            values: self.values.iter().map(|v| v + c).collect(),
            label: self.label.clone(),
        }
    }
}

/// Regular `n`-gon inscribed in the circle `|z - center| = radius`, node 0
/// at angle 0.
pub fn regular_polygon(center: ComplexPoint, radius: f64, n: usize) -> Result<JordanCurve> {
    let nodes = (0..n)
        .map(|k| center + ComplexPoint::from_polar(radius, 2.0 * PI * k as f64 / n as f64))
        .collect();
    JordanCurve::new(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    fn unit_square() -> JordanCurve {
        JordanCurve::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn square_resamples_to_corners_and_midpoints() {
        let sq = unit_square().resample_arclength(8).unwrap();
        let expected = [
            c(0.0, 0.0),
            c(0.5, 0.0),
            c(1.0, 0.0),
            c(1.0, 0.5),
            c(1.0, 1.0),
            c(0.5, 1.0),
            c(0.0, 1.0),
            c(0.0, 0.5),
        ];
        for (z, e) in sq.nodes().iter().zip(expected) {
            assert!((z - e).norm() < 1e-15, "{z} vs {e}");
        }
        assert_relative_eq!(sq.spacing(), 0.5);
        assert!(sq.is_equispaced());
    }

    #[test]
    fn resampling_equispaced_curve_is_identity() {
        let sq = unit_square().resample_arclength(16).unwrap();
        let again = sq.resample_arclength(16).unwrap();
        assert_eq!(sq.nodes(), again.nodes());
    }

    #[test]
    fn regular_64gon_resample_keeps_length() {
        let poly = regular_polygon(c(0.0, 0.0), 1.0, 64).unwrap();
        let exact = 128.0 * (PI / 64.0).sin();
        let re = poly.resample_arclength(128).unwrap();
        assert!((re.length() - exact).abs() <= 1e-12 * exact);
        let chord_sum: f64 = re.segments().map(|(a, b)| (b - a).norm()).sum();
        assert!((chord_sum - exact).abs() <= 1e-12 * exact);
    }

    #[test]
    fn resample_rejects_small_n() {
        assert!(unit_square().resample_arclength(4).is_err());
    }

    #[test]
    fn clockwise_input_is_normalized() {
        let cw = JordanCurve::new(vec![c(0.0, 0.0), c(0.0, 1.0), c(1.0, 1.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(cw.input_orientation(), Orientation::Negative);
        assert!(cw.signed_area() > 0.0);
        assert_eq!(cw.node(0), c(0.0, 0.0));
        assert_eq!(cw.node(1), c(1.0, 0.0));
        assert_relative_eq!(cw.length(), 4.0);
    }

    #[test]
    fn rejects_self_intersection_and_duplicates() {
        let bowtie = vec![c(0.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)];
        assert!(matches!(JordanCurve::new(bowtie), Err(Error::InvalidCurve(_))));
        let dup = vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)];
        assert!(JordanCurve::new(dup).is_err());
        assert!(JordanCurve::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(JordanCurve::new(vec![c(0.0, 0.0), c(f64::NAN, 0.0), c(0.0, 1.0)]).is_err());
    }

    #[test]
    fn explicit_closing_node_is_dropped() {
        let closed = JordanCurve::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(closed.len(), 4);
    }

    #[test]
    fn interior_queries_on_circle() {
        let circle = regular_polygon(c(0.0, 0.0), 1.0, 256).unwrap();
        assert!(circle.point_in_interior(c(0.0, 0.0)).unwrap());
        assert!(!circle.point_in_interior(c(2.0, 0.0)).unwrap());
        assert!(matches!(circle.point_in_interior(circle.node(3)), Err(Error::OnCurve { .. })));
    }

    #[test]
    fn distances_on_fine_circle() {
        let circle = regular_polygon(c(0.0, 0.0), 1.0, 4096).unwrap();
        // Apothem defect of the inscribed 4096-gon is 1 - cos(π/4096) ≈ 2.9e-7.
        assert!((circle.distance_to_curve(c(0.0, 0.0)) - 1.0).abs() < 1e-5);
        assert!((circle.distance_to_curve(c(3.0, 0.0)) - 2.0).abs() < 1e-5);
        assert_eq!(circle.distance_to_curve(circle.node(17)), 0.0);
    }

    #[test]
    fn shorter_arcs_on_equispaced_octagon() {
        let oct = regular_polygon(c(0.0, 0.0), 1.0, 8).unwrap();
        let l = oct.length();
        assert_relative_eq!(oct.shorter_arc_length(0, 4), l / 2.0, max_relative = 1e-14);
        assert_relative_eq!(oct.shorter_arc_length(0, 1), l / 8.0, max_relative = 1e-14);
        assert_relative_eq!(oct.shorter_arc_length(1, 6), 3.0 * l / 8.0, max_relative = 1e-14);
    }

    #[test]
    fn spherical_length_of_circles() {
        let unit = regular_polygon(c(0.0, 0.0), 1.0, 4096).unwrap();
        assert!((unit.spherical_length() - PI).abs() < 1e-3 * PI);
        let big = regular_polygon(c(0.0, 0.0), 1000.0, 8192).unwrap();
        let exact = 2.0 * PI * 1000.0 / (1.0 + 1e6);
        assert!((big.spherical_length() - exact).abs() < 1e-2 * exact);
    }

    #[test]
    fn scaling_is_exact_on_cumlen() {
        let sq = unit_square();
        let same = sq.translate_and_scale(c(0.0, 0.0), 1.0).unwrap();
        assert_eq!(same.nodes(), sq.nodes());
        let scaled = sq.translate_and_scale(c(1.0, -2.0), 2.5).unwrap();
        for (a, b) in scaled.cumlen().iter().zip(sq.cumlen()) {
            assert_eq!(*a, b * 2.5);
        }
        assert!(sq.translate_and_scale(c(0.0, 0.0), 0.0).is_err());
        assert!(sq.translate_and_scale(c(0.0, 0.0), -1.0).is_err());
    }

    #[test]
    fn diameter_matches_brute_force() {
        let poly = regular_polygon(c(0.3, -0.1), 2.0, 37).unwrap();
        let brute = poly
            .nodes()
            .iter()
            .flat_map(|a| poly.nodes().iter().map(move |b| (a - b).norm()))
            .fold(0.0, f64::max);
        assert_relative_eq!(poly.diameter(), brute, max_relative = 1e-14);
        assert_relative_eq!(unit_square().diameter(), 2f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn centroid_of_square() {
        let z = unit_square().centroid();
        assert!((z - c(0.5, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn hausdorff_between_concentric_polygons() {
        let inner = regular_polygon(c(0.0, 0.0), 1.0, 512).unwrap();
        let outer = regular_polygon(c(0.0, 0.0), 1.25, 512).unwrap();
        let d = inner.hausdorff_distance(&outer);
        let apothem = 1.25 * (PI / 512.0).cos();
        assert!(d >= apothem - 1.0 - 1e-12 && d <= 0.25 + 1e-12);
        assert_eq!(inner.hausdorff_distance(&inner), 0.0);
        let shifted = inner.translate_and_scale(c(0.1, 0.0), 1.0).unwrap();
        let brute = shifted.nodes().iter().map(|&z| inner.distance_to_curve(z)).fold(0.0, f64::max);
        let back = inner.nodes().iter().map(|&z| shifted.distance_to_curve(z)).fold(0.0, f64::max);
        assert!((shifted.hausdorff_distance(&inner) - brute.max(back)).abs() < 1e-15);
    }

    #[test]
    fn function_length_mismatch() {
        let sq = unit_square();
        assert!(CurveFunction::for_curve(&sq, vec![c(0.0, 0.0); 3], "f").is_err());
        assert!(CurveFunction::new(vec![c(f64::INFINITY, 0.0)], "f").is_err());
    }
}
