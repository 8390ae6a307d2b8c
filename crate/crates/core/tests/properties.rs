//! Randomized property checks for the structural invariants: quadrature
//! linearity, Bell homogeneity, Nagy bounds, affine invariance of the
//! isoperimetric product, and finite-difference weight exactness.

use proptest::prelude::*;
use renyi_fisher::density::Density;
use renyi_fisher::functionals as fx;
use renyi_fisher::heatflow::fd_weights;
use renyi_fisher::quadrature::{integrate_interval, Envelope};
use renyi_fisher::special::nagy_w;
use renyi_fisher::verify::bell_polynomials;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quadrature_linearity(a in 0.2f64..3.0, b in -2.0f64..2.0, c in -1.0f64..1.0) {
        // int (f + g) = int f + int g on smooth pairs
        let f = move |x: f64| (a * x).sin() + b * x * x;
        let g = move |x: f64| (c * x).cos();
        let tol = 1e-10;
        let lo = -1.3;
        let hi = 2.1;
        let fi = integrate_interval(f, lo, hi, tol).unwrap().value;
        let gi = integrate_interval(g, lo, hi, tol).unwrap().value;
        let both = integrate_interval(|x| f(x) + g(x), lo, hi, tol).unwrap().value;
        prop_assert!((both - (fi + gi)).abs() <= 2.0 * tol + 1e-12 * both.abs());
    }

    #[test]
    fn bell_homogeneity(x1 in -2.0f64..2.0, x2 in -2.0f64..2.0, x3 in -2.0f64..2.0,
                        gamma in -2.0f64..2.0) {
        // B_m(g x1, g^2 x2, g^3 x3) = g^m B_m(x1, x2, x3)
        let xs = [x1, x2, x3];
        let scaled: Vec<f64> =
            xs.iter().enumerate().map(|(i, x)| gamma.powi(i as i32 + 1) * x).collect();
        let base = bell_polynomials(&xs);
        let got = bell_polynomials(&scaled);
        for m in 0..3 {
            let expect = gamma.powi(m as i32 + 1) * base.values[m];
            prop_assert!((got.values[m] - expect).abs() <= 1e-9 * expect.abs().max(1.0));
        }
    }

    #[test]
    fn nagy_two_sided_bound(u in 0.01f64..30.0, v in 0.001f64..0.999) {
        let w = nagy_w(u, v).unwrap();
        let lower = (1.0 + 1.0 / u).powf(-u);
        prop_assert!(w < 1.0);
        prop_assert!(w > lower);
        prop_assert!(lower > 1.0 / std::f64::consts::E);
    }

    #[test]
    fn isoperimetric_product_affine_invariant(b in 0.3f64..3.0, c in -2.0f64..2.0) {
        // N_a I_a is invariant under x -> bx + c
        let base = Density::cos_power(2.0, 1.0, 0.0).unwrap();
        let moved = Density::cos_power(2.0, b, c).unwrap();
        let p0 = fx::renyi_entropy_power(&base, 2.0).unwrap()
            * fx::renyi_fisher(&base, 2.0).unwrap();
        let p1 = fx::renyi_entropy_power(&moved, 2.0).unwrap()
            * fx::renyi_fisher(&moved, 2.0).unwrap();
        prop_assert!(renyi_fisher::rel_gap(p0, p1) <= 1e-8);
    }

    #[test]
    fn fd_weights_exact_on_cubics(c0 in -2.0f64..2.0, c1 in -2.0f64..2.0,
                                  c2 in -2.0f64..2.0, c3 in -2.0f64..2.0,
                                  z in -0.5f64..0.5) {
        // five nonuniform points reproduce derivatives of cubics exactly
        let xs = [-1.0, -0.45, 0.1, 0.62, 1.3];
        let p = |x: f64| c0 + c1 * x + c2 * x * x + c3 * x * x * x;
        let dp = |x: f64| c1 + 2.0 * c2 * x + 3.0 * c3 * x * x;
        let d2p = |x: f64| 2.0 * c2 + 6.0 * c3 * x;
        let w1 = fd_weights(&xs, z, 1);
        let got1: f64 = xs.iter().zip(&w1).map(|(x, w)| w * p(*x)).sum();
        prop_assert!((got1 - dp(z)).abs() <= 1e-9);
        let w2 = fd_weights(&xs, z, 2);
        let got2: f64 = xs.iter().zip(&w2).map(|(x, w)| w * p(*x)).sum();
        prop_assert!((got2 - d2p(z)).abs() <= 1e-9);
    }

    #[test]
    fn gaussian_fisher_invariant_under_scaling(var in 0.3f64..4.0, alpha in 0.4f64..4.0) {
        let d = Density::gaussian_1d(var).unwrap();
        let i = fx::renyi_fisher(&d, alpha).unwrap();
        prop_assert!((i * var - 1.0).abs() <= 1e-7);
    }

    #[test]
    fn line_envelope_truncation_sound(rate in 0.2f64..3.0) {
        // exponential envelopes keep the stated budget
        let f = move |x: f64| 0.5 * rate * (-rate * x.abs()).exp();
        let env = Envelope::exp(rate, rate, 0, 0.0);
        let r = renyi_fisher::quadrature::integrate_line(f, &env, 1e-10).unwrap();
        prop_assert!((r.value - 1.0).abs() <= 1e-9);
        prop_assert!(r.abs_error + r.truncation_bound <= 1e-9);
    }
}

#[test]
fn verdict_meta_invariants() {
    // pass <=> margin >= -tolerance, and equality cases sit within 10x
    let suites: Vec<(Density, f64)> = vec![
        (Density::cosh_power(0.75, 1.0, 0.0).unwrap(), 0.75),
        (Density::two_sided_exp(1.0, 0.0).unwrap(), 2.0),
        (Density::barenblatt(1, 1.5).unwrap(), 1.5),
        (Density::g_lambda(1, 1.5, renyi_fisher::linalg::SymMat::scalar(2.0)).unwrap(), 2.0),
    ];
    for (d, alpha) in suites {
        for v in renyi_fisher::verify::run_suite(&d, alpha).unwrap() {
            assert_eq!(v.pass, v.margin >= -v.tolerance, "{}", v.label);
            if v.equality_expected {
                assert!(v.margin.abs() <= 10.0 * v.tolerance, "{}: margin {}", v.label, v.margin);
            }
        }
    }
}
