use gaborlab::tf::dnorm::DNormParams;
use gaborlab::*;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn atom() -> impl Strategy<Value = GaussianAtom> {
    (0.05f64..2.0, 0.0..2.0 * PI, -3.0f64..3.0, -3.0f64..3.0)
        .prop_map(|(r, t, u, b)| GaussianAtom::new(Complex64::from_polar(r, t), u, b))
}

fn signal() -> impl Strategy<Value = GaussianSum> {
    prop::collection::vec(atom(), 1..=5).prop_map(|a| GaussianSum::new(a).unwrap())
}

fn point() -> impl Strategy<Value = (f64, f64)> {
    (-4.0f64..4.0, -4.0f64..4.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn closed_form_matches_quadrature(f in signal(), pts in prop::collection::vec(point(), 20)) {
        for (x, w) in pts {
            let c = gabor_eval(&f, x, w);
            let q = gabor_quadrature_oracle(&f, x, w, 1e-3, 8.0).unwrap();
            prop_assert!((c - q).norm() <= 1e-8 * c.norm().max(1.0), "{c} vs {q} at ({x}, {w})");
        }
    }

    #[test]
    fn transform_is_linear(f in signal(), g in signal(), (x, w) in point(), ar in -2.0f64..2.0, ai in -2.0f64..2.0, br in -2.0f64..2.0, bi in -2.0f64..2.0) {
        let (a, b) = (Complex64::new(ar, ai), Complex64::new(br, bi));
        let lhs = gabor_eval(&f.scale(a).add(&g.scale(b)), x, w);
        let rhs = a * gabor_eval(&f, x, w) + b * gabor_eval(&g, x, w);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn translation_covariance(f in signal(), (x, w) in point(), u in -3.0f64..3.0) {
        let lhs = gabor_eval(&f.translate(u), x, w).norm();
        let rhs = gabor_eval(&f, x - u, w).norm();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn global_phase_is_invisible(f in signal(), beta in 0.0..2.0 * PI) {
        let g = f.scale(Complex64::from_polar(1.0, beta));
        let grid = TfGrid::square(6.0, 31).unwrap();
        let d = global_phase_distance(&f, &g, &grid, 2.0).unwrap();
        prop_assert!(d.distance <= 1e-10 * f.norm().max(1.0));
    }
}

#[test]
fn gaussian_spectrogram_norm_converges() {
    let f = GaussianSum::new([
        GaussianAtom::new(Complex64::new(1.0, 0.0), -0.5, 0.3),
        GaussianAtom::new(Complex64::new(0.2, -0.7), 1.0, -1.0),
    ])
    .unwrap();
    let exact = f.norm();
    let mut prev = f64::INFINITY;
    for half in [3.0, 4.5, 6.0] {
        let n = (80.0 * half) as usize + 1;
        let grid = TfGrid::square(half, n).unwrap();
        let g = gabor_field(&f, &grid, TransformMode::Closed).unwrap();
        let err = (lp_field_norm(&g, 2.0, None, None).unwrap() - exact).abs();
        assert!(err <= prev + 1e-12);
        prev = err;
    }
    assert!(prev <= 1e-3 * exact, "{prev}");
}

#[test]
fn phase_alignment_at_p_one_matches_sweep() {
    let f = GaussianSum::gaussian();
    let g = f.scale(Complex64::from_polar(1.0, 2.0)).add(&GaussianSum::single(Complex64::new(0.1, 0.0), 1.0, 0.0));
    let grid = TfGrid::square(4.0, 81).unwrap();
    let gf = gabor_field(&f, &grid, TransformMode::Closed).unwrap();
    let gg = gabor_field(&g, &grid, TransformMode::Closed).unwrap();
    let best = gaborlab::tf::phase::align_fields(&gf, &gg, 1.0, None).unwrap();
    for k in 0..720 {
        let alpha = k as f64 * PI / 360.0;
        let rot = Complex64::from_polar(1.0, alpha);
        let shifted = ComplexField::from_values(grid, gf.values().iter().map(|v| v * rot).collect()).unwrap();
        let diff = ComplexField::from_values(grid, shifted.values().iter().zip(gg.values()).map(|(a, b)| a - b).collect()).unwrap();
        assert!(lp_field_norm(&diff, 1.0, None, None).unwrap() >= best.distance - 1e-9);
    }
}

#[test]
fn probe_ratio_grows_as_the_denominator_domain_shrinks() {
    let pair = gaborlab::counterexamples::make_fpm(0.5, 0.2).unwrap();
    let grid = TfGrid::square(4.0, 81).unwrap();
    let num = Mask::disc(grid, 0.0, 0.0, 3.5);
    let mut last = 0.0;
    for r in [3.5, 2.5, 1.5] {
        let den = Mask::disc(grid, 0.0, 0.0, r);
        let rep = stability_probe_split(&pair.plus, &pair.minus, &num, &den, &grid, DNormParams::new(1.5, 1.0, 1)).unwrap();
        assert!(rep.ratio >= last, "r={r}: {} < {last}", rep.ratio);
        last = rep.ratio;
    }
}

#[test]
fn probe_separates_hpm_from_fpm() {
    let a = 1.0 / 6.0;
    let grid = TfGrid::new(-5.0, 11.0, -5.0, 5.0, 161, 101).unwrap();
    let omega = Mask::disc(grid, 0.0, 0.0, 4.0);
    let h = gaborlab::counterexamples::make_hpm(a).unwrap();
    let gamma = gaborlab::counterexamples::gamma_threshold(a, 4.0, 0.5).unwrap();
    let f = gaborlab::counterexamples::make_fpm(a, gamma).unwrap();
    // the probe is not scale invariant, so compare unit-norm representatives
    let c = Complex64::new(1.0 / h.plus.norm(), 0.0);
    let rh = stability_probe(&h.plus.scale(c), &h.minus.scale(c), &omega, &grid, 1.5, 1.0).unwrap();
    let rf = stability_probe(&f.plus, &f.minus, &omega, &grid, 1.5, 1.0).unwrap();
    assert!(rh.ratio > rf.ratio, "{rh:?} vs {rf:?}");
}

#[test]
fn probe_numerator_obeys_triangle_bound() {
    let (a, gamma) = (0.5, (-5.0 * PI).exp());
    let pair = gaborlab::counterexamples::make_fpm(a, gamma).unwrap();
    let grid = TfGrid::square(3.0, 121).unwrap();
    let ball = Mask::disc(grid, 0.0, 0.0, 3.0);
    let rep = stability_probe(&pair.plus, &pair.minus, &ball, &grid, 1.5, 1.0).unwrap();
    let bump = gabor_field(&GaussianSum::gaussian().translate(1.0 / a), &grid, TransformMode::Closed).unwrap();
    let bound = 2.0 * gamma * lp_field_norm(&bump, 1.5, None, Some(&ball)).unwrap();
    assert!(rep.numerator <= bound * (1.0 + 1e-6), "{} > {bound}", rep.numerator);
}
