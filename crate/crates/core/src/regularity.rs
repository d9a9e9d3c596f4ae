//! Sampled regularity constants of a polygonal Jordan curve: chord-arc,
//! Ahlfors, spherical supremum over Möbius images, and the inversion bound.
//!
//! Every constant is a maximum over a finite, recorded sample and is
//! therefore a lower bound for the corresponding supremum.

use crate::curve::{segment_distance, ComplexPoint, JordanCurve};
use crate::error::{Error, Result};
use crate::mobius::{apply_mobius_with_margin, MobiusTransform, DEFAULT_POLE_MARGIN};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::Write;

pub const DEFAULT_RADII_PER_DECADE: usize = 8;
pub const DEFAULT_REFINE: usize = 8;
pub const DEFAULT_SLACK: f64 = 0.05;
pub const WITNESS_ANCHORS: usize = 64;
pub const WITNESS_LEVELS: i32 = 8;
pub const RANDOM_TRANSFORMS: usize = 32;
pub const MAX_RANDOM_COEFFICIENT: f64 = 10.0;
/// Pole margin, as a fraction of the diameter, for randomly drawn transforms.
pub const RANDOM_POLE_MARGIN: f64 = 0.05;
pub const INVARIANCE_TRANSFORMS: usize = 20;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Maximum of `shorter_arc(i, j) / |z_i − z_j|` over node pairs, with the
/// maximizing pair.
pub fn chord_arc_constant(curve: &JordanCurve) -> Result<(f64, (usize, usize))> {
    curve.require_equispaced()?;
    let n = curve.len();
    let cum = curve.cumlen();
    let total = curve.length();
    let mut best = (1.0, (0, 0));
    for i in 0..n {
        let zi = curve.node(i);
        for j in (i + 1)..n {
            let chord = (zi - curve.node(j)).norm();
            if chord == 0.0 {
                return Err(Error::Degenerate(format!("nodes {i} and {j} coincide")));
            }
            let direct = cum[j] - cum[i];
            let arc = direct.min(total - direct);
            let ratio = arc / chord;
            if ratio > best.0 {
                best = (ratio, (i, j));
            }
        }
    }
    Ok(best)
}

/// Length of the part of segment `[a, b]` inside the disk `|z − center| < r`.
pub fn length_in_disk(a: ComplexPoint, b: ComplexPoint, center: ComplexPoint, r: f64) -> f64 {
    let d = b - a;
    let p = a - center;
    let qa = d.norm_sqr();
    if qa == 0.0 {
        return 0.0;
    }
    let qb = 2.0 * (p.re * d.re + p.im * d.im);
    let qc = p.norm_sqr() - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc <= 0.0 {
        return 0.0;
    }
    let root = disc.sqrt();
    let lo = ((-qb - root) / (2.0 * qa)).max(0.0);
    let hi = ((-qb + root) / (2.0 * qa)).min(1.0);
    (hi - lo).max(0.0) * qa.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskWitness {
    pub center: ComplexPoint,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AhlforsEstimate {
    #[serde(rename = "M")]
    pub m: f64,
    pub witness: DiskWitness,
    pub centers: usize,
    pub evaluations: usize,
}

fn radius_ladder(r_min: f64, r_max: f64, radii_per_decade: usize) -> Vec<f64> {
    let step = 10f64.powf(1.0 / radii_per_decade.max(1) as f64);
    let mut radii = Vec::new();
    let mut r = r_min;
    while r < r_max {
        radii.push(r);
        r *= step;
    }
    radii.push(r_max);
    radii
}

/// `max length(Γ ∩ D(z, r)) / r` over the given centers and radii in
/// `[r_min, r_max]`: a geometric ladder plus every endpoint distance in
/// range, where the ratio has its kinks.
fn ahlfors_sweep(
    segments: &[(ComplexPoint, ComplexPoint)],
    centers: &[ComplexPoint],
    r_min: f64,
    r_max: f64,
    radii_per_decade: usize,
) -> AhlforsEstimate {
    let ladder = radius_ladder(r_min, r_max, radii_per_decade);
    let lengths: Vec<f64> = segments.iter().map(|(a, b)| (b - a).norm()).collect();
    let ns = segments.len();
    let mut best = AhlforsEstimate {
        m: 0.0,
        witness: DiskWitness {
            center: centers.first().copied().unwrap_or_default(),
            radius: r_min,
        },
        centers: centers.len(),
        evaluations: 0,
    };
    let mut dmin = vec![0.0; ns];
    let mut dmax = vec![0.0; ns];
    let mut by_dmin: Vec<usize> = (0..ns).collect();
    let mut by_dmax: Vec<usize> = (0..ns).collect();
    let mut state = vec![0u8; ns];
    let mut active: Vec<usize> = Vec::new();
    let mut radii: Vec<f64> = Vec::new();

    for &z in centers {
        radii.clear();
        radii.extend_from_slice(&ladder);
        for (s, &(a, b)) in segments.iter().enumerate() {
            let (da, db) = ((a - z).norm(), (b - z).norm());
            dmin[s] = segment_distance(a, b, z).0;
            dmax[s] = da.max(db);
            for d in [da, db] {
                if d > r_min && d < r_max {
                    radii.push(d);
                }
            }
        }
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        by_dmin.sort_by(|&p, &q| dmin[p].total_cmp(&dmin[q]));
        by_dmax.sort_by(|&p, &q| dmax[p].total_cmp(&dmax[q]));
        state.iter_mut().for_each(|s| *s = 0);
        active.clear();

        let (mut pa, mut pb) = (0, 0);
        let mut inside = 0.0;
        for &r in &radii {
            while pb < ns && dmax[by_dmax[pb]] <= r {
                let s = by_dmax[pb];
                state[s] = 2;
                inside += lengths[s];
                pb += 1;
            }
            while pa < ns && dmin[by_dmin[pa]] < r {
                let s = by_dmin[pa];
                if state[s] == 0 {
                    state[s] = 1;
                    active.push(s);
                }
                pa += 1;
            }
            active.retain(|&s| state[s] == 1);
            let partial: f64 = active
                .iter()
                .map(|&s| length_in_disk(segments[s].0, segments[s].1, z, r))
                .sum();
            let ratio = (inside + partial) / r;
            best.evaluations += 1;
            if ratio > best.m {
                best.m = ratio;
                best.witness = DiskWitness { center: z, radius: r };
            }
        }
    }
    best
}

/// Ahlfors-regularity constant of a closed curve, sampled at every node,
/// the centroid and `extra_centers`, over radii from twice the node spacing
/// to 1.5 diameters.
pub fn ahlfors_constant(
    curve: &JordanCurve,
    radii_per_decade: usize,
    extra_centers: &[ComplexPoint],
) -> Result<AhlforsEstimate> {
    curve.require_equispaced()?;
    if radii_per_decade == 0 {
        return Err(Error::InvalidParameter("radii_per_decade must be positive".into()));
    }
    let segments: Vec<_> = curve.segments().collect();
    let mut centers = curve.nodes().to_vec();
    centers.push(curve.centroid());
    centers.extend_from_slice(extra_centers);
    Ok(ahlfors_sweep(
        &segments,
        &centers,
        2.0 * curve.spacing(),
        1.5 * curve.diameter(),
        radii_per_decade,
    ))
}

/// Ahlfors constant of an open polyline through `points`, centered at its
/// vertices.
pub fn ahlfors_of_polyline(points: &[ComplexPoint], radii_per_decade: usize) -> Result<AhlforsEstimate> {
    if points.len() < 2 || radii_per_decade == 0 {
        return Err(Error::InvalidParameter("need two points and a positive ladder density".into()));
    }
    let segments: Vec<_> = points.windows(2).map(|w| (w[0], w[1])).collect();
    let total: f64 = segments.iter().map(|(a, b)| (b - a).norm()).sum();
    let spacing = total / segments.len() as f64;
    let diameter = crate::curve::point_set_diameter(points);
    Ok(ahlfors_sweep(&segments, points, 2.0 * spacing, 1.5 * diameter, radii_per_decade))
}

/// Offset points `z_k ± 2^{-j}·diam·n_k` (`j = 1..8`) along the outward
/// normal at 64 equispaced nodes, plus the centroid. An offset point is kept
/// only if its distance to the curve is at least half the offset, which
/// drops inward offsets that cross the curve again.
pub fn default_witness_cloud(curve: &JordanCurve) -> Vec<ComplexPoint> {
    let n = curve.len();
    let diam = curve.diameter();
    let margin = DEFAULT_POLE_MARGIN * diam;
    let anchors = WITNESS_ANCHORS.min(n);
    let mut cloud = Vec::with_capacity(2 * anchors * WITNESS_LEVELS as usize + 1);
    for k in 0..anchors {
        let i = k * n / anchors;
        let z = curve.node(i);
        let normal = curve.outward_normal(i);
        for j in 1..=WITNESS_LEVELS {
            let nominal = diam * 2f64.powi(-j);
            let offset = normal * nominal;
            for w in [z + offset, z - offset] {
                let d = curve.distance_to_curve(w);
                if d >= 0.5 * nominal && d > margin {
                    cloud.push(w);
                }
            }
        }
    }
    let c = curve.centroid();
    if curve.distance_to_curve(c) > margin {
        cloud.push(c);
    }
    cloud
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionEstimate {
    #[serde(rename = "C")]
    pub c: f64,
    pub witness: ComplexPoint,
    pub witness_distance: f64,
    pub witnesses: usize,
}

/// `length(M_w(Γ)) · d(w, Γ)` at a single point.
pub fn inversion_product(curve: &JordanCurve, w: ComplexPoint, refine: usize) -> Result<f64> {
    let distance = curve.distance_to_curve(w);
    let margin = DEFAULT_POLE_MARGIN * curve.diameter();
    if distance <= crate::curve::ON_CURVE_TOL {
        return Err(Error::OnCurve { re: w.re, im: w.im, distance });
    }
    let image = apply_mobius_with_margin(&MobiusTransform::inversion(w), curve, refine, margin)?;
    Ok(image.length() * distance)
}

/// Maximum of [`inversion_product`] over `witnesses`.
pub fn inversion_bound_constant(
    curve: &JordanCurve,
    witnesses: &[ComplexPoint],
    refine: usize,
) -> Result<InversionEstimate> {
    if witnesses.is_empty() {
        return Err(Error::InvalidParameter("empty witness set".into()));
    }
    let mut best = InversionEstimate {
        c: f64::NEG_INFINITY,
        witness: witnesses[0],
        witness_distance: 0.0,
        witnesses: witnesses.len(),
    };
    for &w in witnesses {
        let product = inversion_product(curve, w, refine)?;
        if product > best.c {
            best.c = product;
            best.witness = w;
            best.witness_distance = curve.distance_to_curve(w);
        }
    }
    Ok(best)
}

/// Draws transforms with unit determinant, every coefficient of modulus at
/// most 10 and pole farther than `pole_margin` from the curve.
pub fn random_transforms(curve: &JordanCurve, count: usize, seed: u64, pole_margin: f64) -> Vec<MobiusTransform> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let draw = |rng: &mut ChaCha8Rng| {
        let r = rng.gen_range(0.0..MAX_RANDOM_COEFFICIENT);
        ComplexPoint::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
    };
    while out.len() < count {
        let (a, b, c, d) = (draw(&mut rng), draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let Ok(t) = MobiusTransform::new(a, b, c, d) else {
            continue;
        };
        if t.max_coefficient_modulus() > MAX_RANDOM_COEFFICIENT {
            continue;
        }
        if let Some(p) = t.pole() {
            if curve.distance_to_curve(p) <= pole_margin {
                continue;
            }
        }
        out.push(t);
    }
    out
}

/// Identity, `M_w` and the rescaled inversion `d(w)/(z − w)` for every `w`
/// in `witnesses`, then 32 seeded random transforms.
///
/// The rescaled inversion maps Γ into the closed unit disk, where the
/// spherical density is at least half the Euclidean one, so
/// `length(M_w(Γ))·d(w) ≤ 2·s-length` holds segment by segment.
pub fn default_transform_sample(curve: &JordanCurve, witnesses: &[ComplexPoint], seed: u64) -> Vec<MobiusTransform> {
    let mut sample = vec![MobiusTransform::identity()];
    for &w in witnesses {
        let d = curve.distance_to_curve(w);
        sample.push(MobiusTransform::inversion(w));
        let zero = ComplexPoint::new(0.0, 0.0);
        if let Ok(t) = MobiusTransform::new(zero, ComplexPoint::new(d, 0.0), ComplexPoint::new(1.0, 0.0), -w) {
            sample.push(t);
        }
    }
    sample.extend(random_transforms(
        curve,
        RANDOM_TRANSFORMS,
        seed,
        RANDOM_POLE_MARGIN * curve.diameter(),
    ));
    sample
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalEstimate {
    pub slength_sup: f64,
    pub witness: MobiusTransform,
    pub witness_index: usize,
    pub transforms: usize,
}

/// Maximum spherical length of `T(Γ)` over the sampled transforms.
pub fn spherical_supremum(
    curve: &JordanCurve,
    transforms: &[MobiusTransform],
    refine: usize,
) -> Result<SphericalEstimate> {
    if transforms.is_empty() {
        return Err(Error::InvalidParameter("empty transform sample".into()));
    }
    let margin = DEFAULT_POLE_MARGIN * curve.diameter();
    let mut best = SphericalEstimate {
        slength_sup: f64::NEG_INFINITY,
        witness: transforms[0],
        witness_index: 0,
        transforms: transforms.len(),
    };
    for (k, t) in transforms.iter().enumerate() {
        let s = apply_mobius_with_margin(t, curve, refine, margin)?.spherical_length();
        if s > best.slength_sup {
            best.slength_sup = s;
            best.witness = *t;
            best.witness_index = k;
        }
    }
    Ok(best)
}

/// Identity, the similarity `z ↦ 2z + i`, and seeded random transforms with
/// poles at least `0.05·diam` from the curve.
pub fn invariance_transform_sample(curve: &JordanCurve, count: usize, seed: u64) -> Vec<MobiusTransform> {
    let mut sample = vec![MobiusTransform::identity()];
    if let Ok(t) = MobiusTransform::similarity(ComplexPoint::new(2.0, 0.0), ComplexPoint::new(0.0, 1.0)) {
        sample.push(t);
    }
    let remaining = count.saturating_sub(sample.len());
    sample.extend(random_transforms(curve, remaining, seed, RANDOM_POLE_MARGIN * curve.diameter()));
    sample.truncate(count.max(1));
    sample
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvarianceRow {
    pub transform: MobiusTransform,
    pub image_m: f64,
    pub ratio: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvarianceReport {
    #[serde(rename = "M")]
    pub m: f64,
    pub bound: f64,
    pub rows: Vec<InvarianceRow>,
}

impl InvarianceReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| !r.flagged)
    }

    pub fn max_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
    }
}

/// Ahlfors constants of Möbius images, resampled to the node count of
/// `curve`, relative to `m`. Ratios above `12·(1 + slack)` are flagged.
pub fn mobius_invariance_report(
    curve: &JordanCurve,
    m: f64,
    transforms: &[MobiusTransform],
    slack: f64,
) -> Result<InvarianceReport> {
    if !(m > 0.0) {
        return Err(Error::InvalidParameter(format!("reference constant must be positive, got {m}")));
    }
    let margin = DEFAULT_POLE_MARGIN * curve.diameter();
    let bound = 12.0 * (1.0 + slack);
    let mut rows = Vec::with_capacity(transforms.len());
    for t in transforms {
        let image = apply_mobius_with_margin(t, curve, DEFAULT_REFINE, margin)?.resample_arclength(curve.len())?;
        let image_m = ahlfors_constant(&image, DEFAULT_RADII_PER_DECADE, &[])?.m;
        let ratio = image_m / m;
        rows.push(InvarianceRow {
            transform: *t,
            image_m,
            ratio,
            flagged: ratio > bound,
        });
    }
    Ok(InvarianceReport { m, bound, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityOptions {
    pub radii_per_decade: usize,
    pub refine: usize,
    pub seed: u64,
}

impl Default for RegularityOptions {
    fn default() -> Self {
        Self {
            radii_per_decade: DEFAULT_RADII_PER_DECADE,
            refine: DEFAULT_REFINE,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityWitnesses {
    pub chord_arc_pair: (usize, usize),
    pub ahlfors_disk: DiskWitness,
    pub slength_transform: MobiusTransform,
    pub inversion_point: ComplexPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleCounts {
    pub node_pairs: usize,
    pub ahlfors_centers: usize,
    pub ahlfors_evaluations: usize,
    pub inversion_witnesses: usize,
    pub transforms: usize,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub chord_arc_K: f64,
    pub ahlfors_M: f64,
    pub slength_sup: f64,
    pub inversion_C: f64,
    pub witnesses: RegularityWitnesses,
    pub samples: SampleCounts,
}

impl RegularityReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub const CSV_HEADER: &'static str = "label,N,chord_arc_K,ahlfors_M,slength_sup,inversion_C,\
chord_i,chord_j,ahlfors_center_re,ahlfors_center_im,ahlfors_radius,inversion_re,inversion_im,\
node_pairs,ahlfors_centers,ahlfors_evaluations,inversion_witnesses,transforms";

    pub fn csv_row(&self, label: &str, n: usize) -> String {
        let w = &self.witnesses;
        let s = &self.samples;
        format!(
            "{label},{n},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.chord_arc_K,
            self.ahlfors_M,
            self.slength_sup,
            self.inversion_C,
            w.chord_arc_pair.0,
            w.chord_arc_pair.1,
            w.ahlfors_disk.center.re,
            w.ahlfors_disk.center.im,
            w.ahlfors_disk.radius,
            w.inversion_point.re,
            w.inversion_point.im,
            s.node_pairs,
            s.ahlfors_centers,
            s.ahlfors_evaluations,
            s.inversion_witnesses,
            s.transforms
        )
    }

    pub fn write_csv<W: Write>(rows: &[(String, usize, RegularityReport)], mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for (label, n, report) in rows {
            writeln!(out, "{}", report.csv_row(label, *n))?;
        }
        Ok(())
    }
}

/// All four constants with the default samples.
pub fn estimate_regularity(curve: &JordanCurve, options: &RegularityOptions) -> Result<RegularityReport> {
    let n = curve.len();
    let (k, pair) = chord_arc_constant(curve)?;
    let ahlfors = ahlfors_constant(curve, options.radii_per_decade, &[])?;
    let cloud = default_witness_cloud(curve);
    let inversion = inversion_bound_constant(curve, &cloud, options.refine)?;
    let transforms = default_transform_sample(curve, &cloud, options.seed);
    let spherical = spherical_supremum(curve, &transforms, options.refine)?;
    Ok(RegularityReport {
        chord_arc_K: k,
        ahlfors_M: ahlfors.m,
        slength_sup: spherical.slength_sup,
        inversion_C: inversion.c,
        witnesses: RegularityWitnesses {
            chord_arc_pair: pair,
            ahlfors_disk: ahlfors.witness,
            slength_transform: spherical.witness,
            inversion_point: inversion.witness,
        },
        samples: SampleCounts {
            node_pairs: n * (n - 1) / 2,
            ahlfors_centers: ahlfors.centers,
            ahlfors_evaluations: ahlfors.evaluations,
            inversion_witnesses: inversion.witnesses,
            transforms: spherical.transforms,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{make_curve, CurveSpec};
    use std::f64::consts::{PI, SQRT_2, TAU};

    fn cx(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    #[test]
    fn disk_clip() {
        let o = cx(0.0, 0.0);
        assert!((length_in_disk(cx(-2.0, 0.0), cx(2.0, 0.0), o, 1.0) - 2.0).abs() < 1e-15);
        assert!((length_in_disk(cx(0.0, 0.0), cx(2.0, 0.0), o, 1.0) - 1.0).abs() < 1e-15);
        assert_eq!(length_in_disk(cx(-2.0, 1.5), cx(2.0, 1.5), o, 1.0), 0.0);
        assert!((length_in_disk(cx(0.1, 0.1), cx(0.2, 0.3), o, 1.0) - (cx(0.1, 0.2)).norm()).abs() < 1e-15);
    }

    #[test]
    fn chord_arc_of_circle_and_square() {
        let circle = make_curve(&CurveSpec::circle(1.0, 1024)).unwrap();
        let (k, (i, j)) = chord_arc_constant(&circle).unwrap();
        assert!((k - PI / 2.0).abs() < 5e-3 * PI / 2.0);
        assert_eq!(j - i, 512);
        // Midpoints of opposite sides: arc 2 over chord 1.
        let square = make_curve(&CurveSpec::square(1024)).unwrap();
        let (k, (i, j)) = chord_arc_constant(&square).unwrap();
        assert!((k - 2.0).abs() < 1e-2 * 2.0);
        assert_eq!(j - i, 512);
        let corner_ratio = square.shorter_arc_length(0, 512) / (square.node(0) - square.node(512)).norm();
        assert!(corner_ratio >= SQRT_2 - 1e-9);
    }

    #[test]
    fn chord_arc_similarity_invariant() {
        let star = make_curve(&CurveSpec::star(0.2, 3, 256)).unwrap();
        let moved = star.translate_and_scale(cx(3.0, -1.0), 7.5).unwrap();
        let (k1, _) = chord_arc_constant(&star).unwrap();
        let (k2, _) = chord_arc_constant(&moved).unwrap();
        assert!((k1 - k2).abs() < 1e-10 * k1);
    }

    #[test]
    fn barbell_is_far_from_chord_arc() {
        let barbell = make_curve(&CurveSpec::barbell(0.05, 1024)).unwrap();
        assert!(chord_arc_constant(&barbell).unwrap().0 > 10.0);
    }

    #[test]
    fn ahlfors_of_circle_and_segment() {
        let circle = make_curve(&CurveSpec::circle(1.0, 1024)).unwrap();
        let est = ahlfors_constant(&circle, 8, &[]).unwrap();
        assert!((est.m - TAU).abs() < 2e-2 * TAU, "{est:?}");
        assert!(est.witness.center.norm() < 1e-9);
        let line: Vec<_> = (0..=200).map(|k| cx(k as f64 / 200.0, 0.0)).collect();
        let est = ahlfors_of_polyline(&line, 8).unwrap();
        assert!((est.m - 2.0).abs() < 2e-2 * 2.0);
    }

    #[test]
    fn ahlfors_more_centers_never_decreases() {
        let star = make_curve(&CurveSpec::star(0.2, 3, 256)).unwrap();
        let base = ahlfors_constant(&star, 8, &[]).unwrap().m;
        let more = ahlfors_constant(&star, 8, &[cx(0.3, 0.1), cx(-0.2, 0.5)]).unwrap().m;
        assert!(more >= base);
    }

    #[test]
    fn inversion_products_on_unit_circle() {
        let circle = make_curve(&CurveSpec::circle(1.0, 1024)).unwrap();
        let at_zero = inversion_product(&circle, cx(0.0, 0.0), 8).unwrap();
        assert!((at_zero - TAU).abs() < 5e-3 * TAU);
        let at_two = inversion_product(&circle, cx(2.0, 0.0), 8).unwrap();
        assert!((at_two - TAU / 3.0).abs() < 5e-3 * TAU / 3.0);
        let far = inversion_product(&circle, cx(2000.0, 0.0), 8).unwrap();
        let farther = inversion_product(&circle, cx(20000.0, 0.0), 8).unwrap();
        assert!(far < 1e-2 && farther < far);
        assert!(inversion_product(&circle, circle.node(3), 8).is_err());
    }

    #[test]
    fn witness_cloud_avoids_curve() {
        let koch = make_curve(&CurveSpec::koch(3, 1024)).unwrap();
        let cloud = default_witness_cloud(&koch);
        // Inward offsets past the opposite side are dropped; most survive.
        assert!(cloud.len() > 512 && cloud.len() <= 2 * 64 * 8 + 1);
        let margin = DEFAULT_POLE_MARGIN * koch.diameter();
        assert!(cloud.iter().all(|&w| koch.distance_to_curve(w) > margin));
    }

    #[test]
    fn random_transforms_are_bounded_and_reproducible() {
        let circle = make_curve(&CurveSpec::circle(1.0, 256)).unwrap();
        let a = random_transforms(&circle, 16, 7, 0.1);
        let b = random_transforms(&circle, 16, 7, 0.1);
        assert_eq!(a, b);
        for t in &a {
            assert!(t.max_coefficient_modulus() <= MAX_RANDOM_COEFFICIENT);
            assert!((t.determinant() - cx(1.0, 0.0)).norm() < 1e-10);
            if let Some(p) = t.pole() {
                assert!(circle.distance_to_curve(p) > 0.1);
            }
        }
    }

    #[test]
    fn spherical_length_of_unit_circle() {
        let circle = make_curve(&CurveSpec::circle(1.0, 1024)).unwrap();
        let est = spherical_supremum(&circle, &[MobiusTransform::identity()], 1).unwrap();
        assert!((est.slength_sup - PI).abs() < 1e-4);
    }

    #[test]
    fn spherical_length_rotation_invariant() {
        let star = make_curve(&CurveSpec::star(0.2, 3, 512)).unwrap();
        let t = MobiusTransform::new(cx(1.0, 0.5), cx(0.2, 0.0), cx(0.3, -0.1), cx(1.0, 0.0)).unwrap();
        // Rotation of the sphere: z ↦ (z − a)/(1 + ā z).
        let a = cx(0.4, -0.3);
        let rot = MobiusTransform::new(cx(1.0, 0.0), -a, a.conj(), cx(1.0, 0.0)).unwrap();
        let s1 = spherical_supremum(&star, &[t], 8).unwrap().slength_sup;
        let s2 = spherical_supremum(&star, &[rot.compose(&t)], 8).unwrap().slength_sup;
        assert!((s1 - s2).abs() < 1e-3 * s1);
    }

    #[test]
    fn similarity_keeps_ahlfors_constant() {
        let circle = make_curve(&CurveSpec::circle(1.0, 512)).unwrap();
        let m = ahlfors_constant(&circle, 8, &[]).unwrap().m;
        let sim = MobiusTransform::similarity(cx(2.0, 0.0), cx(0.0, 1.0)).unwrap();
        let report = mobius_invariance_report(&circle, m, &[MobiusTransform::identity(), sim], 0.05).unwrap();
        assert!((report.rows[0].ratio - 1.0).abs() < 1e-12);
        assert!((report.rows[1].ratio - 1.0).abs() < 2e-2);
    }

    #[test]
    fn reciprocal_of_shifted_circle_stays_regular() {
        let circle = make_curve(&CurveSpec::circle(1.0, 512)).unwrap();
        let shifted = circle.translate_and_scale(cx(3.0, 0.0), 1.0).unwrap();
        let m = ahlfors_constant(&shifted, 8, &[]).unwrap().m;
        let recip = MobiusTransform::new(cx(0.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0)).unwrap();
        let report = mobius_invariance_report(&shifted, m, &[recip], 0.05).unwrap();
        assert!(report.holds() && report.max_ratio() <= 12.0);
    }

    #[test]
    fn regularity_report_chain_on_circle() {
        let circle = make_curve(&CurveSpec::circle(1.0, 256)).unwrap();
        let report = estimate_regularity(&circle, &RegularityOptions::default()).unwrap();
        assert!(report.chord_arc_K >= 1.0);
        assert!(report.slength_sup <= 60.0 * report.ahlfors_M * 1.05);
        assert!(report.inversion_C <= 2.0 * report.slength_sup * 1.05);
        let json = report.to_json();
        for key in ["chord_arc_K", "ahlfors_M", "slength_sup", "inversion_C", "witnesses", "samples"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        let mut buf = Vec::new();
        RegularityReport::write_csv(&[("circle".into(), 256, report)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(
            text.lines().next().unwrap().split(',').count(),
            text.lines().nth(1).unwrap().split(',').count()
        );
    }
}
