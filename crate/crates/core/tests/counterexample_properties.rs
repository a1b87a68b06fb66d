use gaborlab::counterexamples::*;
use gaborlab::*;
use proptest::prelude::*;

const AS: [f64; 3] = [1.0 / 6.0, 0.5, 1.0];
const GAMMAS: [f64; 3] = [1e-3, 0.1, 1.0];

#[test]
fn every_family_agrees_on_its_lattice() {
    for kind in [PairKind::Hpm, PairKind::Fpm, PairKind::Gpm] {
        for a in AS {
            for gamma in GAMMAS {
                let pair = make_pair(kind, a, gamma).unwrap();
                let r = verify_pair(&pair, &Lattice::for_pair(&pair), 1e-9, 1e-6).unwrap();
                assert!(r.pass, "{kind} a={a} gamma={gamma}: {r:?}");
                assert!(r.lines >= 25 && r.samples >= 25 * 401);
            }
        }
    }
}

#[test]
fn root_sets_are_disjoint() {
    for a in AS {
        for gamma in GAMMAS {
            for kind in [PairKind::Fpm, PairKind::Gpm] {
                let pair = make_pair(kind, a, gamma).unwrap();
                let plus = gaborlab::counterexamples::roots::pair_roots(&pair, Sign::Plus, -6, 6).unwrap();
                let minus = gaborlab::counterexamples::roots::pair_roots(&pair, Sign::Minus, -6, 6).unwrap();
                if plus.is_empty() || minus.is_empty() {
                    continue;
                }
                let d = gaborlab::counterexamples::roots::min_cross_distance(&plus, &minus);
                assert!(d >= a - 1e-12, "{kind} a={a} gamma={gamma}: {d}");
            }
        }
    }
}

#[test]
fn threshold_keeps_the_strip_zero_free() {
    for (a, r) in [(0.5, 3.0), (1.0, 2.0), (1.0 / 3.0, 2.5)] {
        let g0 = gamma_threshold(a, r, 1.0).unwrap();
        let below = strip_scan(a, 0.99 * g0, Sign::Plus, r, 401).unwrap();
        assert!(below.grid_min > 0.0 && below.refined_min > 0.0, "a={a}: {below:?}");
        let above = strip_scan(a, 1.01 * g0, Sign::Plus, r, 401).unwrap();
        assert!(above.refined_min <= 1e-10 * above.peak, "a={a}: {above:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn magnitude_sandwich(a in 0.3f64..1.0, r in 1.5f64..3.0, delta in 0.1f64..0.9, frac in 0.05f64..0.99, x in -1.0f64..1.0, w in -5.0f64..5.0) {
        let gamma = frac * gamma_threshold(a, r, delta).unwrap();
        let x = x * r * 0.999;
        let w = w * r;
        let phi = gabor_eval(&GaussianSum::gaussian(), x, w).norm();
        for sign in [Sign::Plus, Sign::Minus] {
            let m = fpm_magnitude_closed(a, gamma, sign, x, w).unwrap();
            prop_assert!(m >= (1.0 - delta) * phi * (1.0 - 1e-12));
            prop_assert!(m <= (1.0 + delta) * phi * (1.0 + 1e-12));
        }
    }

    #[test]
    fn close_to_the_gaussian(a in 0.1f64..2.0, gamma in 1e-4f64..1.0) {
        let pair = make_fpm(a, gamma).unwrap();
        let phi = GaussianSum::gaussian();
        for f in [&pair.plus, &pair.minus] {
            let d = gaborlab::tf::phase::phase_distance_closed(f, &phi).distance;
            prop_assert!(d <= 2.0 * gamma * (1.0 + 1e-12));
        }
    }

    #[test]
    fn closed_magnitude_matches_transform(a in 0.2f64..1.5, gamma in 1e-3f64..1.5, x in -3.0f64..3.0, w in -3.0f64..3.0) {
        let pair = make_fpm(a, gamma).unwrap();
        for (sign, f) in [(Sign::Plus, &pair.plus), (Sign::Minus, &pair.minus)] {
            let direct = gabor_eval(f, x, w).norm();
            let closed = fpm_magnitude_closed(a, gamma, sign, x, w).unwrap();
            prop_assert!((direct - closed).abs() <= 1e-12 * direct.max(1e-300).max(closed));
        }
    }
}

#[test]
fn figure_two_root_geometry() {
    let (a, gamma) = (0.5, (-5.0 * std::f64::consts::PI).exp());
    let plus = root_set_fpm(a, gamma, Sign::Plus, -3, 3, 0.0).unwrap();
    let minus = root_set_fpm(a, gamma, Sign::Minus, -3, 3, 0.0).unwrap();
    for (x, w) in plus.iter().chain(&minus) {
        assert!((x - 3.5).abs() < 1e-12);
        let off = (w - w.round()).abs();
        assert!((off - 0.25).abs() < 1e-12);
    }
    for pts in [&plus, &minus] {
        for pair in pts.windows(2) {
            assert!(((pair[1].1 - pair[0].1).abs() - 1.0).abs() < 1e-12);
        }
    }
    for &(x, w) in &plus {
        assert!(fpm_magnitude_closed(a, gamma, Sign::Plus, x, w).unwrap() <= 1e-13);
    }
    for &(x, w) in &minus {
        assert!(fpm_magnitude_closed(a, gamma, Sign::Minus, x, w).unwrap() <= 1e-13);
    }
}
