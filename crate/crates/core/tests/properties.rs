use curvenorm::cli::minimality_violations;
use curvenorm::harmonic::{exterior_energy_grid, interior_energy_field, interior_energy_grid};
use curvenorm::mobius::{apply_mobius, MobiusTransform};
use curvenorm::regularity::{
    ahlfors_constant, chord_arc_constant, default_witness_cloud, inversion_bound_constant, random_transforms,
    RANDOM_POLE_MARGIN,
};
use curvenorm::seminorm::{circle_seminorm_spectral, douglas_seminorm, equivalence_report, pullback_arclength};
use curvenorm::zoo::{make_curve, make_function, standard_curves, standard_functions, CurveSpec, FunctionSpec};
use curvenorm::{ComplexPoint, CurveFunction, JordanCurve};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::sync::OnceLock;

fn cx(re: f64, im: f64) -> ComplexPoint {
    ComplexPoint::new(re, im)
}

fn zoo(n: usize) -> Vec<JordanCurve> {
    standard_curves(n).iter().map(|s| make_curve(s).unwrap()).collect()
}

fn zoo_512() -> &'static [JordanCurve] {
    static CURVES: OnceLock<Vec<JordanCurve>> = OnceLock::new();
    CURVES.get_or_init(|| zoo(512))
}

fn crossing_oracle(nodes: &[ComplexPoint], p: ComplexPoint) -> bool {
    // Counts crossings of the downward vertical ray, unlike the library's
    // rightward winding count.
    let n = nodes.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (nodes[i], nodes[(i + 1) % n]);
        if (a.re > p.re) != (b.re > p.re) {
            let y = a.im + (p.re - a.re) * (b.im - a.im) / (b.re - a.re);
            if y < p.im {
                inside = !inside;
            }
        }
    }
    inside
}

#[test]
fn mobius_round_trip_is_tight() {
    for curve in zoo(4096) {
        let diam = curve.diameter();
        let mut transforms = random_transforms(&curve, 4, 11, RANDOM_POLE_MARGIN * diam);
        transforms.push(MobiusTransform::similarity(cx(0.0, 2.0), cx(1.0, 1.0)).unwrap());
        for t in transforms {
            let image = apply_mobius(&t, &curve, 8).unwrap();
            let back = apply_mobius(&t.inverse(), &image, 8).unwrap();
            let d = back.hausdorff_distance(&curve);
            assert!(d < 1e-6 * diam, "round trip {d:e} for {t:?}");
        }
    }
}

#[test]
fn spherical_length_is_a_spherical_isometry_invariant() {
    let reciprocal = MobiusTransform::new(cx(0.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0)).unwrap();
    for curve in zoo(4096) {
        let base = curve.spherical_length();
        let rotated = apply_mobius(&MobiusTransform::similarity(cx(0.6, 0.8), cx(0.0, 0.0)).unwrap(), &curve, 1)
            .unwrap()
            .spherical_length();
        assert!((rotated - base).abs() < 1e-3 * base);
        let refined = apply_mobius(&MobiusTransform::identity(), &curve, 8).unwrap().spherical_length();
        let inverted = apply_mobius(&reciprocal, &curve, 8).unwrap().spherical_length();
        assert!((inverted - refined).abs() < 1e-3 * refined);
    }
}

#[test]
fn interior_test_matches_vertical_ray_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for curve in zoo(1024) {
        let diam = curve.diameter();
        let c = curve.centroid();
        let mut checked = 0;
        while checked < 1000 {
            let p = c + cx(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8)) * diam;
            if curve.distance_to_curve(p) < 1e-9 * diam {
                continue;
            }
            assert_eq!(curve.point_in_interior(p).unwrap(), crossing_oracle(curve.nodes(), p), "at {p}");
            checked += 1;
        }
    }
}

#[test]
fn sampled_constants_grow_with_budget() {
    for curve in zoo(512) {
        let (k, _) = chord_arc_constant(&curve).unwrap();
        let n = curve.len();
        let mut k_half: f64 = 1.0;
        for i in (0..n).step_by(2) {
            for j in (i + 2..n).step_by(2) {
                k_half = k_half.max(curve.shorter_arc_length(i, j) / (curve.node(j) - curve.node(i)).norm());
            }
        }
        assert!(k_half <= k);
        let coarse = ahlfors_constant(&curve, 4, &[]).unwrap().m;
        let fine = ahlfors_constant(&curve, 8, &[]).unwrap().m;
        assert!(coarse <= fine);
        let cloud = default_witness_cloud(&curve);
        let some: Vec<ComplexPoint> = cloud.iter().copied().step_by(3).collect();
        let c_some = inversion_bound_constant(&curve, &some, 8).unwrap().c;
        let c_all = inversion_bound_constant(&curve, &cloud, 8).unwrap().c;
        assert!(c_some <= c_all);
    }
}

#[test]
fn barbell_chord_arc_detects_the_neck() {
    let mut previous = f64::INFINITY;
    for neck in [0.05, 0.1, 0.2, 0.4] {
        let curve = make_curve(&CurveSpec::barbell(neck, 2048)).unwrap();
        let (k, _) = chord_arc_constant(&curve).unwrap();
        assert!(k <= previous, "K({neck}) = {k} after {previous}");
        assert!(curve.length() < 15.0);
        previous = k;
    }
    let thin = chord_arc_constant(&make_curve(&CurveSpec::barbell(0.05, 2048)).unwrap()).unwrap().0;
    assert!(thin > 50.0);
}

#[test]
fn douglas_agrees_with_spectral_on_the_circle() {
    let circle = make_curve(&CurveSpec::circle(1.0, 4096)).unwrap();
    for spec in standard_functions(&circle) {
        let f = make_function(&spec, &circle).unwrap();
        let d = douglas_seminorm(&circle, &f).unwrap().value_sq;
        let s = circle_seminorm_spectral(&pullback_arclength(&circle, &f).unwrap()).unwrap().value_sq;
        assert!((d - s).abs() <= 0.01 * s, "{}: {d} vs {s}", spec.label());
    }
}

#[test]
fn lower_ratio_bound_on_every_zoo_curve() {
    for curve in zoo(1024) {
        let curve = curve.rescaled_to_length(TAU).unwrap();
        let functions: Vec<CurveFunction> = standard_functions(&curve)
            .iter()
            .map(|s| make_function(s, &curve).unwrap())
            .collect();
        let (k, _) = chord_arc_constant(&curve).unwrap();
        assert!(equivalence_report(&curve, &functions, k, 0.05).unwrap().lower_bound_holds());
    }
}

#[test]
fn energy_triangle_on_the_circle() {
    let circle = make_curve(&CurveSpec::circle(1.0, 2048)).unwrap();
    let h = 1.0 / 128.0;
    for spec in standard_functions(&circle) {
        let f = make_function(&spec, &circle).unwrap();
        let s = circle_seminorm_spectral(&pullback_arclength(&circle, &f).unwrap()).unwrap().value_sq;
        let inner = interior_energy_grid(&circle, &f, h, 1e-8).unwrap().energy;
        let outer = exterior_energy_grid(&circle, &f, h, 1e-8).unwrap().energy;
        assert!((inner - s).abs() <= 0.05 * s, "{}: interior {inner} vs {s}", spec.label());
        assert!((outer - s).abs() <= 0.05 * s, "{}: exterior {outer} vs {s}", spec.label());
    }
}

#[test]
fn interior_energy_is_conformally_invariant_under_scaling() {
    let unit = make_curve(&CurveSpec::circle(1.0, 2048)).unwrap();
    let big = make_curve(&CurveSpec::circle(2.0, 2048)).unwrap();
    let f_unit = CurveFunction::from_fn(&unit, "e^{iθ}", |z| z).unwrap();
    let f_big = CurveFunction::from_fn(&big, "e^{iθ}", |z| z / 2.0).unwrap();
    let a = interior_energy_grid(&unit, &f_unit, 1.0 / 128.0, 1e-8).unwrap().energy;
    let b = interior_energy_grid(&big, &f_big, 1.0 / 64.0, 1e-8).unwrap().energy;
    assert!((a - b).abs() <= 0.05 * a);
}

#[test]
fn solved_fields_are_minimal_on_zoo_curves() {
    for curve in zoo(1024) {
        let f = make_function(&FunctionSpec::Coordinate, &curve).unwrap();
        let h = curve.diameter() / 128.0;
        let (_, field) = interior_energy_field(&curve, &f, h, 1e-8).unwrap();
        assert_eq!(minimality_violations(&field, 5).0, 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn arc_dominates_chord(curve_index in 0usize..6, i in 0usize..512, j in 0usize..512) {
        prop_assume!(i != j);
        let curve = &zoo_512()[curve_index];
        let chord = (curve.node(i) - curve.node(j)).norm();
        prop_assert!(curve.shorter_arc_length(i, j) >= chord * (1.0 - 1e-12));
    }

    #[test]
    fn seminorms_ignore_constants_and_scale_quadratically(
        curve_index in 0usize..6,
        c_re in -5.0f64..5.0, c_im in -5.0f64..5.0,
        l_re in -3.0f64..3.0, l_im in -3.0f64..3.0,
    ) {
        let lambda = cx(l_re, l_im);
        prop_assume!(lambda.norm() > 1e-3);
        let curve = &zoo_512()[curve_index];
        let f = make_function(&FunctionSpec::Bump { center: [curve.node(0).re, curve.node(0).im], width: 0.5 }, curve).unwrap();
        let base = douglas_seminorm(curve, &f).unwrap().value_sq;
        let shifted = douglas_seminorm(curve, &f.shifted(cx(c_re, c_im))).unwrap().value_sq;
        let scaled = douglas_seminorm(curve, &f.scaled(lambda)).unwrap().value_sq;
        prop_assert!((shifted - base).abs() <= 1e-10 * base);
        prop_assert!((scaled - lambda.norm_sqr() * base).abs() <= 1e-12 * lambda.norm_sqr() * base);
        let s = circle_seminorm_spectral(&f).unwrap().value_sq;
        let s_shifted = circle_seminorm_spectral(&f.shifted(cx(c_re, c_im))).unwrap().value_sq;
        prop_assert!((s_shifted - s).abs() <= 1e-10 * s);
    }

    #[test]
    fn chord_arc_is_similarity_invariant(
        curve_index in 0usize..6,
        r in 0.1f64..10.0, angle in 0.0f64..TAU,
        s_re in -10.0f64..10.0, s_im in -10.0f64..10.0,
    ) {
        let curve = &zoo_512()[curve_index];
        let moved = curve.similarity_image(ComplexPoint::from_polar(r, angle), cx(s_re, s_im)).unwrap();
        let (k, _) = chord_arc_constant(curve).unwrap();
        let (k_moved, _) = chord_arc_constant(&moved).unwrap();
        prop_assert!((k - k_moved).abs() <= 1e-10 * k);
    }

    #[test]
    fn spherical_length_is_rotation_invariant(curve_index in 0usize..6, angle in 0.0f64..TAU) {
        let curve = &zoo_512()[curve_index];
        let rotation = MobiusTransform::similarity(ComplexPoint::from_polar(1.0, angle), cx(0.0, 0.0)).unwrap();
        let a = curve.spherical_length();
        let b = apply_mobius(&rotation, curve, 1).unwrap().spherical_length();
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }
}
