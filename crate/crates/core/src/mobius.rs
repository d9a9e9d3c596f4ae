//! Möbius transformations of the Riemann sphere and their action on
//! polylines.

use crate::curve::{ComplexPoint, JordanCurve};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default pole margin as a fraction of the curve diameter.
pub const DEFAULT_POLE_MARGIN: f64 = 1e-6;

/// `z ↦ (az + b) / (cz + d)` with `ad − bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusTransform {
    pub a: ComplexPoint,
    pub b: ComplexPoint,
    pub c: ComplexPoint,
    pub d: ComplexPoint,
}

fn cx(re: f64, im: f64) -> ComplexPoint {
    ComplexPoint::new(re, im)
}

impl MobiusTransform {
    /// Builds the transform and rescales the coefficients to unit
    /// determinant.
    pub fn new(a: ComplexPoint, b: ComplexPoint, c: ComplexPoint, d: ComplexPoint) -> Result<Self> {
        let det = a * d - b * c;
        let finite = [a, b, c, d].iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite || det.norm() < 1e-300 {
            return Err(Error::InvalidParameter(format!("singular Möbius coefficients (det = {det})")));
        }
        let k = det.sqrt().inv();
        Ok(Self {
            a: a * k,
            b: b * k,
            c: c * k,
            d: d * k,
        })
    }

    pub fn identity() -> Self {
        Self {
            a: cx(1.0, 0.0),
            b: cx(0.0, 0.0),
            c: cx(0.0, 0.0),
            d: cx(1.0, 0.0),
        }
    }

    /// `z ↦ scale·z + shift`, `scale` a nonzero complex number.
    pub fn similarity(scale: ComplexPoint, shift: ComplexPoint) -> Result<Self> {
        Self::new(scale, shift, cx(0.0, 0.0), cx(1.0, 0.0))
    }

    /// `M_w(z) = 1 / (z − w)`.
    pub fn inversion(w: ComplexPoint) -> Self {
        // (i) / (i z − i w) has determinant 0·(−iw) − i·i = 1.
        Self {
            a: cx(0.0, 0.0),
            b: cx(0.0, 1.0),
            c: cx(0.0, 1.0),
            d: cx(0.0, -1.0) * w,
        }
    }

    pub fn determinant(&self) -> ComplexPoint {
        self.a * self.d - self.b * self.c
    }

    pub fn is_affine(&self) -> bool {
        self.c.norm() == 0.0
    }

    /// The point sent to infinity, if finite.
    pub fn pole(&self) -> Option<ComplexPoint> {
        if self.is_affine() {
            None
        } else {
            Some(-self.d / self.c)
        }
    }

    pub fn apply(&self, z: ComplexPoint) -> ComplexPoint {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn max_coefficient_modulus(&self) -> f64 {
        [self.a, self.b, self.c, self.d].iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub(crate) fn check_pole(curve: &JordanCurve, pole: Option<ComplexPoint>, margin: f64) -> Result<()> {
    if let Some(p) = pole {
        let distance = curve.distance_to_curve(p);
        if !(distance > margin) {
            return Err(Error::PoleNearCurve { distance, margin });
        }
    }
    Ok(())
}

/// Subdivides every segment into `refine` pieces, maps the resulting nodes
/// through `map` and rebuilds a positively oriented polyline. Per-node
/// values, when given, are interpolated linearly on the subdivision and
/// carried along.
pub(crate) fn map_curve_with(
    curve: &JordanCurve,
    refine: usize,
    values: Option<&[ComplexPoint]>,
    map: impl Fn(ComplexPoint) -> ComplexPoint,
) -> Result<(JordanCurve, Option<Vec<ComplexPoint>>)> {
    if refine == 0 {
        return Err(Error::InvalidParameter("refine must be positive".into()));
    }
    let n = curve.len();
    let mut nodes = Vec::with_capacity(n * refine);
    let mut mapped_values = values.map(|_| Vec::with_capacity(n * refine));
    for i in 0..n {
        let (a, b) = curve.segment(i);
        for m in 0..refine {
            let t = m as f64 / refine as f64;
            let z = if m == 0 { a } else { a + (b - a) * t };
            nodes.push(map(z));
            if let (Some(v), Some(out)) = (values, mapped_values.as_mut()) {
                out.push(JordanCurve::interpolate(v, i, t));
            }
        }
    }
    if let Some(i) = nodes.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Degenerate(format!("mapped node {i} is not finite")));
    }
    let total_nodes = nodes.len();
    let mut cumlen = Vec::with_capacity(total_nodes + 1);
    let mut acc = 0.0;
    cumlen.push(0.0);
    for i in 0..total_nodes {
        acc += (nodes[(i + 1) % total_nodes] - nodes[i]).norm();
        cumlen.push(acc);
    }
    JordanCurve::from_parts_with(nodes, cumlen, mapped_values)
}

/// Image of `curve` under `t`, with the default pole margin.
pub fn apply_mobius(t: &MobiusTransform, curve: &JordanCurve, refine: usize) -> Result<JordanCurve> {
    apply_mobius_with_margin(t, curve, refine, DEFAULT_POLE_MARGIN * curve.diameter())
}

pub fn apply_mobius_with_margin(
    t: &MobiusTransform,
    curve: &JordanCurve,
    refine: usize,
    pole_margin: f64,
) -> Result<JordanCurve> {
    check_pole(curve, t.pole(), pole_margin)?;
    map_curve_with(curve, refine, None, |z| t.apply(z)).map(|(c, _)| c)
}

/// Image of `curve` under `M_w(z) = 1/(z − w)`.
pub fn invert_about(w: ComplexPoint, curve: &JordanCurve, refine: usize) -> Result<JordanCurve> {
    apply_mobius(&MobiusTransform::inversion(w), curve, refine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::regular_polygon;
    use std::f64::consts::PI;

    #[test]
    fn normalization_gives_unit_determinant() {
        let t = MobiusTransform::new(cx(2.0, 1.0), cx(-3.0, 0.5), cx(0.7, -1.1), cx(4.0, 2.0)).unwrap();
        assert!((t.determinant() - cx(1.0, 0.0)).norm() < 1e-12);
        assert!((MobiusTransform::inversion(cx(0.3, 0.2)).determinant() - cx(1.0, 0.0)).norm() < 1e-15);
        assert!(MobiusTransform::new(cx(1.0, 0.0), cx(2.0, 0.0), cx(1.0, 0.0), cx(2.0, 0.0)).is_err());
    }

    #[test]
    fn inversion_maps_like_reciprocal() {
        let w = cx(0.5, -0.25);
        let z = cx(2.0, 1.0);
        let t = MobiusTransform::inversion(w);
        assert!((t.apply(z) - (z - w).inv()).norm() < 1e-15);
        assert_eq!(t.pole(), Some(w));
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let t = MobiusTransform::new(cx(1.0, 2.0), cx(0.0, 1.0), cx(0.5, 0.0), cx(3.0, -1.0)).unwrap();
        let z = cx(0.3, 0.9);
        assert!((t.inverse().compose(&t).apply(z) - z).norm() < 1e-13);
    }

    #[test]
    fn identity_image_is_node_identical() {
        let circle = regular_polygon(cx(0.0, 0.0), 1.0, 64).unwrap();
        let image = apply_mobius(&MobiusTransform::identity(), &circle, 1).unwrap();
        assert_eq!(image.nodes(), circle.nodes());
    }

    #[test]
    fn dilation_doubles_length() {
        let circle = regular_polygon(cx(0.0, 0.0), 1.0, 512).unwrap();
        let t = MobiusTransform::similarity(cx(2.0, 0.0), cx(0.0, 0.0)).unwrap();
        let image = apply_mobius(&t, &circle, 1).unwrap();
        assert!((image.length() - 2.0 * circle.length()).abs() < 1e-10 * circle.length());
    }

    #[test]
    fn reciprocal_of_shifted_circle() {
        // 1/z maps |z − 3| = 1 onto the circle centred 3/8 of radius 1/8.
        let circle = regular_polygon(cx(3.0, 0.0), 1.0, 1024).unwrap();
        let t = MobiusTransform::new(cx(0.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0)).unwrap();
        let image = apply_mobius(&t, &circle, 8).unwrap();
        assert!((image.length() - PI / 4.0).abs() < 1e-3 * PI / 4.0);
        for z in image.nodes() {
            // Chord sag 1 − cos(π/1024) ≈ 4.7e-6, shrunk by |z|⁻² ≤ 1/4.
            assert!(((z - cx(0.375, 0.0)).norm() - 0.125).abs() < 1.5e-6);
        }
    }

    #[test]
    fn inversions_of_unit_circle() {
        let circle = regular_polygon(cx(0.0, 0.0), 1.0, 2048).unwrap();
        let at_center = invert_about(cx(0.0, 0.0), &circle, 8).unwrap();
        assert!((at_center.length() - 2.0 * PI).abs() < 1e-3 * 2.0 * PI);
        let outside = invert_about(cx(2.0, 0.0), &circle, 8).unwrap();
        assert!((outside.length() - 2.0 * PI / 3.0).abs() < 1e-3 * 2.0 * PI / 3.0);
        assert!(matches!(
            invert_about(circle.node(5), &circle, 8),
            Err(Error::PoleNearCurve { .. })
        ));
    }
}
