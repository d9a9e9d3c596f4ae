//! The Douglas `H^{1/2}` seminorm: the singular double integral on a curve,
//! the spectral form on the circle, and the arc-length pullback that links
//! them.

use crate::curve::{ComplexPoint, CurveFunction, JordanCurve};
use crate::error::{Error, Result};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Relative tolerance for "the curve has length 2π".
pub const NORMALIZED_LENGTH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    DoubleIntegral,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeminormResult {
    pub value_sq: f64,
    pub scheme: Scheme,
    #[serde(rename = "N")]
    pub n: usize,
    pub diagonal_term: f64,
}

/// Discrete Fourier coefficients `c_n`, `n = −N/2 .. N/2 − 1`, of equispaced
/// samples on the circle.
#[derive(Debug, Clone)]
pub struct FourierSpectrum {
    coefficients: Vec<ComplexPoint>,
}

impl FourierSpectrum {
    pub fn from_samples(samples: &[ComplexPoint]) -> Result<Self> {
        let n = samples.len();
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "spectral seminorm needs a power-of-two sample count, got {n}"
            )));
        }
        let mut buffer = samples.to_vec();
        FftPlanner::new().plan_fft_forward(n).process(&mut buffer);
        let scale = 1.0 / n as f64;
        let half = n / 2;
        // Reorder from FFT layout [0..N/2, −N/2..−1] to ascending modes.
        let coefficients = buffer[half..]
            .iter()
            .chain(&buffer[..half])
            .map(|c| c * scale)
            .collect();
        Ok(Self { coefficients })
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn lowest_mode(&self) -> i64 {
        -(self.coefficients.len() as i64 / 2)
    }

    pub fn coefficient(&self, mode: i64) -> ComplexPoint {
        self.coefficients[(mode - self.lowest_mode()) as usize]
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, ComplexPoint)> + '_ {
        let lo = self.lowest_mode();
        self.coefficients.iter().enumerate().map(move |(i, &c)| (lo + i as i64, c))
    }

    pub fn energy(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ |n| |c_n|²`.
    pub fn half_derivative_energy(&self) -> f64 {
        self.modes().map(|(n, c)| n.unsigned_abs() as f64 * c.norm_sqr()).sum()
    }
}

/// Double-integral quadrature of
/// `(1/4π²) ∬ |(u(z₁) − u(z₂)) / (z₁ − z₂)|² |dz₁||dz₂|` at the nodes of an
/// equispaced curve.
///
/// Off-diagonal cells use node values; each diagonal cell uses the forward
/// difference quotient to the next node.
pub fn douglas_seminorm(curve: &JordanCurve, f: &CurveFunction) -> Result<SeminormResult> {
    curve.require_equispaced()?;
    f.check_matches(curve)?;
    let n = curve.len();
    let ds = curve.spacing();
    let weight = ds * ds / (4.0 * PI * PI);
    let (zx, zy): (Vec<f64>, Vec<f64>) = curve.nodes().iter().map(|z| (z.re, z.im)).unzip();
    let (fx, fy): (Vec<f64>, Vec<f64>) = f.values.iter().map(|v| (v.re, v.im)).unzip();

    let mut off_diagonal = 0.0;
    for i in 0..n {
        let (xi, yi, ui, vi) = (zx[i], zy[i], fx[i], fy[i]);
        let mut row = 0.0;
        let mut min_den = f64::INFINITY;
        for j in (i + 1)..n {
            let (dx, dy) = (xi - zx[j], yi - zy[j]);
            let (du, dv) = (ui - fx[j], vi - fy[j]);
            let den = dx * dx + dy * dy;
            min_den = min_den.min(den);
            row += (du * du + dv * dv) / den;
        }
        if min_den == 0.0 {
            return Err(Error::Degenerate(format!("node {i} coincides with a later node")));
        }
        off_diagonal += row;
    }
    let off_diagonal = 2.0 * off_diagonal * weight;

    let mut diagonal = 0.0;
    for i in 0..n {
        let k = (i + 1) % n;
        let dz = curve.node(k) - curve.node(i);
        let df = f.values[k] - f.values[i];
        diagonal += df.norm_sqr() / dz.norm_sqr();
    }
    let diagonal_term = diagonal * weight;

    Ok(SeminormResult {
        value_sq: off_diagonal + diagonal_term,
        scheme: Scheme::DoubleIntegral,
        n,
        diagonal_term,
    })
}

/// `Σ |n| |c_n|²` over the discrete spectrum of `N` equispaced circle
/// samples.
pub fn circle_seminorm_spectral(samples: &CurveFunction) -> Result<SeminormResult> {
    let spectrum = FourierSpectrum::from_samples(&samples.values)?;
    Ok(SeminormResult {
        value_sq: spectrum.half_derivative_energy(),
        scheme: Scheme::Spectral,
        n: samples.len(),
        diagonal_term: 0.0,
    })
}

pub(crate) fn require_normalized_length(curve: &JordanCurve) -> Result<()> {
    if (curve.length() - TAU).abs() > NORMALIZED_LENGTH_TOL * TAU {
        return Err(Error::NotNormalized(curve.length()));
    }
    Ok(())
}

/// Reads `f` as a function of `e^{is}`, `s = 2πi/N`, through the arc-length
/// parametrization of a length-2π equispaced curve.
pub fn pullback_arclength(curve: &JordanCurve, f: &CurveFunction) -> Result<CurveFunction> {
    require_normalized_length(curve)?;
    curve.require_equispaced()?;
    f.check_matches(curve)?;
    CurveFunction::new(f.values.clone(), format!("{}∘z", f.label))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivalenceRow {
    pub function: String,
    pub douglas: f64,
    pub pullback_spectral: f64,
    /// `None` for (numerically) constant functions.
    pub ratio: Option<f64>,
    pub within_bracket: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub chord_arc_k: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub slack: f64,
    pub rows: Vec<EquivalenceRow>,
}

impl EquivalenceReport {
    pub fn all_within(&self) -> bool {
        self.rows.iter().all(|r| r.within_bracket)
    }

    pub fn lower_bound_holds(&self) -> bool {
        self.rows.iter().all(|r| r.ratio.map_or(true, |q| q >= self.lower_bound))
    }
}

/// Ratio of the curve seminorm to the circle seminorm of the arc-length
/// pullback, bracketed by `[4/π²·(1 − slack), K²·(1 + slack)]`.
pub fn equivalence_report(
    curve: &JordanCurve,
    functions: &[CurveFunction],
    chord_arc_k: f64,
    slack: f64,
) -> Result<EquivalenceReport> {
    require_normalized_length(curve)?;
    let lower_bound = 4.0 / (PI * PI) * (1.0 - slack);
    let upper_bound = chord_arc_k * chord_arc_k * (1.0 + slack);
    let mut rows = Vec::with_capacity(functions.len());
    for f in functions {
        let douglas = douglas_seminorm(curve, f)?.value_sq;
        let pullback = circle_seminorm_spectral(&pullback_arclength(curve, f)?)?.value_sq;
        let scale = f.values.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max).max(1.0);
        let negligible = 1e-24 * scale;
        let ratio = if pullback <= negligible {
            if douglas > 1e-12 * scale {
                return Err(Error::Inconsistent(format!(
                    "{}: pullback seminorm vanishes but the curve seminorm is {douglas:e}",
                    f.label
                )));
            }
            None
        } else {
            Some(douglas / pullback)
        };
        let within_bracket = ratio.map_or(true, |q| q >= lower_bound && q <= upper_bound);
        rows.push(EquivalenceRow {
            function: f.label.clone(),
            douglas,
            pullback_spectral: pullback,
            ratio,
            within_bracket,
        });
    }
    Ok(EquivalenceReport {
        chord_arc_k,
        lower_bound,
        upper_bound,
        slack,
        rows,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SineBoundReport {
    pub pairs: usize,
    pub chord_arc_k: f64,
    pub upper_violations: usize,
    pub lower_violations: usize,
    /// Smallest `π|sin((t−s)/2)| / |z(t) − z(s)|` seen.
    pub min_upper_ratio: f64,
    /// Smallest `|z(t) − z(s)| / ((2/K)|sin((t−s)/2)|)` seen.
    pub min_lower_ratio: f64,
    pub witness_upper: (usize, usize),
    pub witness_lower: (usize, usize),
}

impl SineBoundReport {
    pub fn holds(&self) -> bool {
        self.upper_violations == 0 && self.lower_violations == 0
    }
}

/// Checks `(2/K)|sin((t−s)/2)| ≤ |z(t) − z(s)| ≤ π|sin((t−s)/2)|` on every
/// node pair of a length-2π equispaced curve.
pub fn sine_bounds(curve: &JordanCurve, chord_arc_k: f64) -> Result<SineBoundReport> {
    require_normalized_length(curve)?;
    curve.require_equispaced()?;
    const ROUNDING: f64 = 1e-12;
    let n = curve.len();
    let cum = curve.cumlen();
    let mut report = SineBoundReport {
        pairs: 0,
        chord_arc_k,
        upper_violations: 0,
        lower_violations: 0,
        min_upper_ratio: f64::INFINITY,
        min_lower_ratio: f64::INFINITY,
        witness_upper: (0, 0),
        witness_lower: (0, 0),
    };
    for i in 0..n {
        for j in (i + 1)..n {
            let half_sine = (0.5 * (cum[j] - cum[i])).sin().abs();
            let chord = (curve.node(i) - curve.node(j)).norm();
            let upper = PI * half_sine;
            let lower = 2.0 / chord_arc_k * half_sine;
            report.pairs += 1;
            if chord > upper * (1.0 + ROUNDING) {
                report.upper_violations += 1;
            }
            if lower > chord * (1.0 + ROUNDING) {
                report.lower_violations += 1;
            }
            let up_ratio = upper / chord;
            if up_ratio < report.min_upper_ratio {
                report.min_upper_ratio = up_ratio;
                report.witness_upper = (i, j);
            }
            let low_ratio = chord / lower;
            if low_ratio < report.min_lower_ratio {
                report.min_lower_ratio = low_ratio;
                report.witness_lower = (i, j);
            }
        }
    }
    Ok(report)
}
