//! Deterministic test curves and boundary functions.
//!
//! Every family is placed at exactly `N` nodes equally spaced in arc
//! length, starting from a fixed point, with positive orientation. Arcs and
//! straight pieces are placed exactly; the ellipse and the star curve use a
//! Gauss–Legendre arc-length table refined by Newton steps.

use crate::curve::{ComplexPoint, CurveFunction, JordanCurve};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

pub const MAX_KOCH_LEVEL: u32 = 5;

fn cx(re: f64, im: f64) -> ComplexPoint {
    ComplexPoint::new(re, im)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    /// Vertex list for the `polygon` family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[f64; 2]>>,
}

impl CurveSpec {
    pub fn new(name: &str, params: &[(&str, f64)], n: usize) -> Self {
        Self {
            name: name.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            n,
            seed: 0,
            vertices: None,
        }
    }

    pub fn circle(radius: f64, n: usize) -> Self {
        Self::new("circle", &[("R", radius)], n)
    }

    pub fn ellipse(a: f64, b: f64, n: usize) -> Self {
        Self::new("ellipse", &[("a", a), ("b", b)], n)
    }

    pub fn star(eps: f64, k: u32, n: usize) -> Self {
        Self::new("star", &[("eps", eps), ("k", k as f64)], n)
    }

    pub fn koch(level: u32, n: usize) -> Self {
        Self::new("koch", &[("level", level as f64)], n)
    }

    pub fn barbell(neck: f64, n: usize) -> Self {
        Self::new("barbell", &[("neck", neck)], n)
    }

    pub fn polygon(vertices: &[[f64; 2]], n: usize) -> Self {
        Self {
            vertices: Some(vertices.to_vec()),
            ..Self::new("polygon", &[], n)
        }
    }

    /// Axis-aligned square of side 1.
    pub fn square(n: usize) -> Self {
        Self::polygon(&[[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]], n)
    }

    pub fn label(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}({})", self.name, params.join(","))
    }

    fn param(&self, key: &str, default: f64) -> f64 {
        self.params.get(key).copied().unwrap_or(default)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", content = "params", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// `e^{ik·2πs/L}` in the arc-length angle.
    FourierMode { k: i64 },
    /// `1 / (z − w)`.
    InversePole { w: [f64; 2] },
    /// `z` itself.
    Coordinate,
    /// `exp(−|z − center|² / width²)`.
    Bump { center: [f64; 2], width: f64 },
}

impl FunctionSpec {
    pub fn label(&self) -> String {
        match self {
            FunctionSpec::FourierMode { k } => format!("fourier_mode(k={k})"),
            FunctionSpec::InversePole { w } => format!("inverse_pole(w={}{:+}i)", w[0], w[1]),
            FunctionSpec::Coordinate => "coordinate".to_string(),
            FunctionSpec::Bump { center, width } => {
                format!("bump(center={}{:+}i,width={width})", center[0], center[1])
            }
        }
    }
}

/// Piece of a closed curve with exact arc length.
#[derive(Debug, Clone, Copy)]
enum Piece {
    Segment { a: ComplexPoint, b: ComplexPoint },
    Arc { center: ComplexPoint, radius: f64, start: f64, sweep: f64 },
}

impl Piece {
    fn length(&self) -> f64 {
        match *self {
            Piece::Segment { a, b } => (b - a).norm(),
            Piece::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    fn point_at(&self, s: f64) -> ComplexPoint {
        match *self {
            Piece::Segment { a, b } => {
                let len = (b - a).norm();
                a + (b - a) * (s / len)
            }
            Piece::Arc { center, radius, start, sweep } => {
                center + ComplexPoint::from_polar(radius, start + sweep.signum() * s / radius)
            }
        }
    }
}

fn place_on_pieces(pieces: &[Piece], n: usize) -> (Vec<ComplexPoint>, f64) {
    let lengths: Vec<f64> = pieces.iter().map(Piece::length).collect();
    let total: f64 = lengths.iter().sum();
    let mut nodes = Vec::with_capacity(n);
    let mut piece = 0;
    let mut start = 0.0;
    for k in 0..n {
        let s = k as f64 * total / n as f64;
        while piece + 1 < pieces.len() && s >= start + lengths[piece] {
            start += lengths[piece];
            piece += 1;
        }
        nodes.push(pieces[piece].point_at((s - start).min(lengths[piece])));
    }
    (nodes, total)
}

// 5-point Gauss–Legendre on [-1, 1].
const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

fn gauss_legendre(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    half * GL_NODES.iter().zip(GL_WEIGHTS).map(|(x, w)| w * f(mid + half * x)).sum::<f64>()
}

/// Places `n` equal-arc-length nodes on a smooth closed curve `γ(t)`,
/// `t ∈ [0, 2π)`, given its speed `|γ'(t)|`.
fn place_on_parametric(
    gamma: impl Fn(f64) -> ComplexPoint,
    speed: impl Fn(f64) -> f64,
    n: usize,
) -> (Vec<ComplexPoint>, f64) {
    let panels = (16 * n).max(4096);
    let dt = TAU / panels as f64;
    let mut table = Vec::with_capacity(panels + 1);
    table.push(0.0);
    for j in 0..panels {
        let acc = table[j] + gauss_legendre(&speed, j as f64 * dt, (j + 1) as f64 * dt);
        table.push(acc);
    }
    let total = table[panels];
    let mut nodes = Vec::with_capacity(n);
    let mut j = 0;
    for k in 0..n {
        let s = k as f64 * total / n as f64;
        while j + 1 < panels && table[j + 1] <= s {
            j += 1;
        }
        let t0 = j as f64 * dt;
        let mut t = t0 + dt * (s - table[j]) / (table[j + 1] - table[j]);
        for _ in 0..6 {
            let g = table[j] + gauss_legendre(&speed, t0, t) - s;
            let step = g / speed(t);
            t -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        nodes.push(gamma(t));
    }
    (nodes, total)
}

fn koch_vertices(level: u32) -> Vec<ComplexPoint> {
    let h = 3f64.sqrt();
    let mut verts = vec![cx(-0.5, -h / 6.0), cx(0.5, -h / 6.0), cx(0.0, h / 3.0)];
    let outward = ComplexPoint::from_polar(1.0, -PI / 3.0);
    for _ in 0..level {
        let m = verts.len();
        let mut next = Vec::with_capacity(4 * m);
        for i in 0..m {
            let (a, b) = (verts[i], verts[(i + 1) % m]);
            let third = (b - a) / 3.0;
            let p1 = a + third;
            next.push(a);
            next.push(p1);
            next.push(p1 + third * outward);
            next.push(a + third * 2.0);
        }
        verts = next;
    }
    verts
}

fn barbell_pieces(neck: f64) -> Vec<Piece> {
    let half = 0.5 * neck;
    let s = (1.0 - half * half).sqrt();
    let alpha = half.asin();
    let right = cx(0.5 + s, 0.0);
    let left = cx(-0.5 - s, 0.0);
    vec![
        Piece::Segment { a: cx(-0.5, -half), b: cx(0.5, -half) },
        Piece::Arc { center: right, radius: 1.0, start: -PI + alpha, sweep: TAU - 2.0 * alpha },
        Piece::Segment { a: cx(0.5, half), b: cx(-0.5, half) },
        Piece::Arc { center: left, radius: 1.0, start: alpha, sweep: TAU - 2.0 * alpha },
    ]
}

fn out_of_range(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// Builds the named curve at `spec.n` equispaced nodes.
pub fn make_curve(spec: &CurveSpec) -> Result<JordanCurve> {
    let n = spec.n;
    if n < crate::curve::MIN_RESAMPLE_NODES {
        return Err(out_of_range(format!("N = {n} is below the minimum of 8")));
    }
    let (nodes, total) = match spec.name.as_str() {
        "circle" => {
            let r = spec.param("R", 1.0);
            if !(r > 0.0 && r.is_finite()) {
                return Err(out_of_range(format!("circle radius {r} must be positive")));
            }
            place_on_pieces(&[Piece::Arc { center: cx(0.0, 0.0), radius: r, start: 0.0, sweep: TAU }], n)
        }
        "ellipse" => {
            let (a, b) = (spec.param("a", 2.0), spec.param("b", 1.0));
            if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
                return Err(out_of_range(format!("ellipse axes ({a}, {b}) must be positive")));
            }
            place_on_parametric(
                |t| cx(a * t.cos(), b * t.sin()),
                |t| (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt(),
                n,
            )
        }
        "star" => {
            let eps = spec.param("eps", 0.2);
            let k = spec.param("k", 3.0);
            if k.fract() != 0.0 || k < 1.0 {
                return Err(out_of_range(format!("star lobe count {k} must be a positive integer")));
            }
            if !(eps >= 0.0 && eps * k < 1.0) {
                return Err(out_of_range(format!("star needs 0 <= eps and eps·k < 1, got eps={eps}, k={k}")));
            }
            place_on_parametric(
                |t| ComplexPoint::from_polar(1.0 + eps * (k * t).cos(), t),
                |t| {
                    let r = 1.0 + eps * (k * t).cos();
                    let dr = -eps * k * (k * t).sin();
                    (r * r + dr * dr).sqrt()
                },
                n,
            )
        }
        "polygon" => {
            let verts = spec
                .vertices
                .as_ref()
                .ok_or_else(|| out_of_range("polygon needs a vertex list"))?;
            let poly = JordanCurve::new(verts.iter().map(|v| cx(v[0], v[1])).collect())?;
            return poly.resample_arclength(n);
        }
        "koch" => {
            let level = spec.param("level", 3.0);
            if level.fract() != 0.0 || !(0.0..=MAX_KOCH_LEVEL as f64).contains(&level) {
                return Err(out_of_range(format!("koch level {level} must be an integer in 0..=5")));
            }
            let poly = JordanCurve::new(koch_vertices(level as u32))?;
            return poly.resample_arclength(n);
        }
        "barbell" => {
            let neck = spec.param("neck", 0.05);
            if !(neck > 0.0 && neck < 0.5) {
                return Err(out_of_range(format!("barbell neck {neck} must lie in (0, 0.5)")));
            }
            place_on_pieces(&barbell_pieces(neck), n)
        }
        other => return Err(out_of_range(format!("unknown curve family '{other}'"))),
    };
    let cumlen = (0..=n).map(|k| if k == n { total } else { k as f64 * total / n as f64 }).collect();
    let curve = JordanCurve::from_parts(nodes, cumlen)?;
    curve.check_simple()?;
    Ok(curve)
}

pub fn make_function(spec: &FunctionSpec, curve: &JordanCurve) -> Result<CurveFunction> {
    let label = spec.label();
    match *spec {
        FunctionSpec::FourierMode { k } => {
            let scale = TAU / curve.length();
            let values = curve.cumlen()[..curve.len()]
                .iter()
                .map(|&s| ComplexPoint::from_polar(1.0, k as f64 * s * scale))
                .collect();
            CurveFunction::new(values, label)
        }
        FunctionSpec::InversePole { w } => {
            let w = cx(w[0], w[1]);
            let d = curve.distance_to_curve(w);
            let margin = 1e-3 * curve.diameter();
            if d < margin {
                return Err(Error::PoleNearCurve { distance: d, margin });
            }
            CurveFunction::from_fn(curve, label, |z| (z - w).inv())
        }
        FunctionSpec::Coordinate => CurveFunction::from_fn(curve, label, |z| z),
        FunctionSpec::Bump { center, width } => {
            if !(width > 0.0) {
                return Err(out_of_range(format!("bump width {width} must be positive")));
            }
            let c = cx(center[0], center[1]);
            CurveFunction::from_fn(curve, label, |z| cx((-(z - c).norm_sqr() / (width * width)).exp(), 0.0))
        }
    }
}

/// The curve set the property and acceptance suites sweep over.
pub fn standard_curves(n: usize) -> Vec<CurveSpec> {
    vec![
        CurveSpec::circle(1.0, n),
        CurveSpec::ellipse(2.0, 1.0, n),
        CurveSpec::star(0.2, 3, n),
        CurveSpec::square(n),
        CurveSpec::koch(3, n),
        CurveSpec::barbell(0.05, n),
    ]
}

/// Smooth test functions adapted to `curve`: three Fourier modes, the
/// coordinate, a bump, and two exterior poles (a far one and one at a
/// quarter diameter off the curve when that point is exterior).
pub fn standard_functions(curve: &JordanCurve) -> Vec<FunctionSpec> {
    let diam = curve.diameter();
    let centroid = curve.centroid();
    let mut specs = vec![
        FunctionSpec::FourierMode { k: 1 },
        FunctionSpec::FourierMode { k: 2 },
        FunctionSpec::FourierMode { k: 3 },
        FunctionSpec::Coordinate,
        FunctionSpec::Bump {
            center: [curve.node(0).re, curve.node(0).im],
            width: 0.25 * diam,
        },
    ];
    let far = centroid + cx(1.5 * diam, 0.5 * diam);
    specs.push(FunctionSpec::InversePole { w: [far.re, far.im] });
    let i = curve.len() / 8;
    let near = curve.node(i) + curve.outward_normal(i) * (0.25 * diam);
    if matches!(curve.point_in_interior(near), Ok(false)) && curve.distance_to_curve(near) > 0.1 * diam {
        specs.push(FunctionSpec::InversePole { w: [near.re, near.im] });
    }
    specs
}

/// JSON description of every family and its parameter ranges.
pub fn zoo_listing() -> serde_json::Value {
    json!({
        "curves": [
            {"name": "circle", "params": {"R": {"default": 1.0, "range": "(0, inf)"}}},
            {"name": "ellipse", "params": {"a": {"default": 2.0, "range": "(0, inf)"}, "b": {"default": 1.0, "range": "(0, inf)"}}},
            {"name": "star", "params": {"eps": {"default": 0.2, "range": "[0, 1/k)"}, "k": {"default": 3, "range": "positive integer"}}},
            {"name": "polygon", "params": {}, "vertices": "list of [re, im], simple polygon"},
            {"name": "koch", "params": {"level": {"default": 3, "range": "integer 0..=5"}}},
            {"name": "barbell", "params": {"neck": {"default": 0.05, "range": "(0, 0.5)"}}}
        ],
        "curve_spec_fields": {"name": "string", "params": "map name -> real", "N": "integer >= 8", "seed": "integer", "vertices": "polygon only"},
        "functions": [
            {"name": "fourier_mode", "params": {"k": "integer"}},
            {"name": "inverse_pole", "params": {"w": "[re, im], at least 1e-3·diam off the curve"}},
            {"name": "coordinate", "params": {}},
            {"name": "bump", "params": {"center": "[re, im]", "width": "positive real"}}
        ]
    })
}
