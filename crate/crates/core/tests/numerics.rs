use acoustic_bh::numerics::*;
use acoustic_bh::scalar::{cx, Cx};
use proptest::prelude::*;
use std::f64::consts::PI;

fn rel(a: Cx<f64>, b: Cx<f64>) -> f64 {
    (a - b).norm() / b.norm()
}

// Reference values computed with mpmath at 30 digits.
const GAMMA_TABLE: [((f64, f64), (f64, f64)); 6] = [
    ((0.5, 2.0), (0.089855176706431635814, -0.06049376029288756848)),
    ((0.1, 5.0), (-0.00038086069138120567861, 0.00034111701244926531554)),
    ((-1.5, 0.3), (1.5979272780754662568, 0.34393463811128200121)),
    ((3.7, 0.0), (4.1706517837966040301, 0.0)),
    ((0.25, -7.5), (6.8593670473930208922e-6, -9.3385955446354091376e-6)),
    ((1e-3, 1.0), (-0.15393000423381143437, -0.49838334929443964274)),
];

#[test]
fn gamma_matches_reference_table() {
    for ((x, y), (re, im)) in GAMMA_TABLE {
        let g = complex_gamma(cx(x, y)).unwrap();
        assert!(rel(g, cx(re, im)) < 1e-12, "Γ({x}+{y}i) = {g}");
    }
    let lg = ln_gamma(cx(10.0_f64, 30.0)).unwrap();
    assert!((lg.re + 13.73976365799715949).abs() < 1e-11);
    assert!((lg.im - 85.47976397251643709).abs() < 1e-11);
}

#[test]
fn gamma_modulus_identity() {
    for x in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let g = complex_gamma(cx(1.0, x)).unwrap();
        let v = g.norm_sqr() * (PI * x).sinh() / (PI * x);
        assert!((v - 1.0).abs() < 1e-10, "x={x}: {v}");
    }
    let g = complex_gamma(cx(1.0_f64, 1.0)).unwrap();
    assert!((g.norm() - 0.521564).abs() < 1e-6);
}

#[test]
fn gamma_in_single_precision() {
    let g = complex_gamma(cx(0.5_f32, 2.0)).unwrap();
    let want = cx(0.089855176706431635814_f32, -0.06049376029288756848);
    assert!((g - want).norm() / want.norm() < 1e-4);
}

proptest! {
    #[test]
    fn gamma_recurrence(x in 0.1f64..5.0, y in -20.0f64..20.0) {
        let z = cx(x, y);
        let lhs = complex_gamma(z + cx(1.0, 0.0)).unwrap();
        let rhs = z * complex_gamma(z).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-12);
    }

    #[test]
    fn principal_power_branch_consistency(eta in -20.0f64..20.0, a in 0.01f64..10.0,
        w1r in -3.0f64..3.0, w1i in -3.0f64..3.0, w2r in -3.0f64..3.0, w2i in -3.0f64..3.0) {
        let (w1, w2) = (cx(w1r, w1i), cx(w2r, w2i));
        let lhs = principal_power(eta, a, w1 + w2).unwrap();
        let rhs = principal_power(eta, a, w1).unwrap() * principal_power(eta, a, w2).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-12);
    }
}

#[test]
fn gamma1_definition() {
    let g = gamma1(1.0, 0.1).unwrap();
    let want = complex_gamma(cx(1.1, 1.0)).unwrap() * (PI / 2.0).exp() / cx(0.1, 1.0);
    assert!(rel(g, want) < 1e-13);
    let g0 = gamma1(0.0, 0.4).unwrap();
    assert!(rel(g0, complex_gamma(cx(0.4, 0.0)).unwrap()) < 1e-13);
    assert!(gamma1(0.0, 0.0).is_err());
}

#[test]
fn gamma1_bounded() {
    for eps in [0.1, 0.5] {
        for j in 0..=200 {
            let xi = 0.1 * j as f64;
            assert!(gamma1(xi, eps).unwrap().norm() < 10.0, "ξ={xi}, ε={eps}");
        }
    }
}

#[test]
fn gamma1_integral_representation() {
    let spec = QuadratureSpec::oscillatory();
    for eps in [0.1, 0.5] {
        for xi in [0.0, 0.5, 1.0, 2.5, 5.0] {
            let direct: Cx<f64> = gamma1(xi, eps).unwrap();
            let integral = gamma1_integral(xi, eps, &spec).unwrap();
            assert!((direct - integral).norm() < 1e-6 * direct.norm().max(1.0), "ξ={xi} ε={eps}: {direct} vs {integral}");
        }
    }
}

#[test]
fn principal_power_examples() {
    let v = principal_power(0.0, 1.0, cx(0.0, 1.0)).unwrap();
    assert!((v - cx((-PI / 2.0).exp(), 0.0)).norm() < 1e-15);
    let v = principal_power(-1.0, 1.0, cx(0.0, 1.0)).unwrap();
    let h = 0.5 * 2f64.ln();
    let want = cx(h.cos(), h.sin()) * (-3.0 * PI / 4.0).exp();
    assert!(rel(v, want) < 1e-14);
    assert!(principal_power(1.0, 0.0, cx(1.0, 0.0)).is_err());
}

#[test]
fn laplace_closed_vs_oracle_grid() {
    let spec = QuadratureSpec::oscillatory();
    for lam in [cx(0.5, 0.0), cx(0.25, 2.0), cx(-0.5, 0.5)] {
        for a in [0.5, 1.0, 3.0] {
            for eta in [-4.0, 0.0, 5.0] {
                let closed = laplace_power_integral(lam, a, eta).unwrap();
                let quad = laplace_oracle(lam, a, eta, &spec).unwrap().value;
                assert!(rel(quad, closed) < 1e-8, "λ={lam} a={a} η={eta}: {quad} vs {closed}");
            }
        }
    }
}

#[test]
fn oscillatory_log_examples() {
    let spec = QuadratureSpec::oscillatory();
    let (eps, xi, a, eta) = (0.5, 1.0, 2.0, 3.0);
    let q = oscillatory_log_integral(eps, xi, a, eta, 0, &spec).unwrap().value;
    let closed = laplace_power_integral(cx(eps, xi), a, eta).unwrap();
    assert!(rel(q, closed) < 1e-8);
    let q1 = oscillatory_log_integral(eps, xi, a, eta, 1, &spec).unwrap().value;
    let closed1 = laplace_power_integral(cx(eps - 1.0, xi), a, eta).unwrap();
    assert!(rel(q1, closed1) < 1e-8);
    let q0 = oscillatory_log_integral(0.3, 0.0, 1.5, -2.0, 0, &spec).unwrap().value;
    assert!(rel(q0, laplace_power_integral(cx(0.3, 0.0), 1.5, -2.0).unwrap()) < 1e-8);
}

#[test]
fn tanh_sinh_level_errors_shrink_geometrically() {
    let (eps, xi, a, eta) = (0.5, 1.0, 2.0, 3.0);
    let lam = cx(eps, xi);
    let closed = laplace_power_integral(lam, a, eta).unwrap();
    // the whole range up to a negligible tail, in a single tanh-sinh panel
    let upper = 20.0;
    let k = cx(-a, eta);
    let levels = tanh_sinh_levels(|t: f64| (lam * t.ln() + k * t).exp(), 0.0, upper, 7);
    let errs: Vec<f64> = levels.iter().map(|v| (v - closed).norm()).collect();
    for w in errs.windows(2) {
        if w[0] > 1e-13 {
            assert!(w[1] <= 0.5 * w[0], "{errs:?}");
        }
    }
    assert!(*errs.last().unwrap() < 1e-12, "{errs:?}");
}

#[test]
fn adaptive_examples() {
    let spec = QuadratureSpec::smooth();
    let v = adaptive_integrate(|x: f64| x * x, Interval::Finite(0.0, 1.0), &spec).unwrap();
    assert!((v.value - 1.0 / 3.0).abs() < 1e-14);
    let v = adaptive_integrate(|x: f64| (-x).exp(), Interval::UpperInfinite(0.0), &spec).unwrap();
    assert!((v.value - 1.0).abs() < 1e-10);
    let v = adaptive_integrate(|x: f64| (x * x + 1.0).powf(-1.5), Interval::Whole, &spec).unwrap();
    assert!((v.value - 2.0).abs() < 1e-10);
    let ts = QuadratureSpec { scheme: Scheme::TanhSinh, ..spec };
    let v = adaptive_integrate(|x: f64| (x * x + 1.0).powf(-1.5), Interval::Whole, &ts).unwrap();
    assert!((v.value - 2.0).abs() < 1e-10);
}

#[test]
fn subdivision_limit_reports_error() {
    let spec = QuadratureSpec { max_subdivisions: 2, ..QuadratureSpec::smooth() };
    let r = adaptive_integrate(|x: f64| (1.0 / x).sin(), Interval::Finite(1e-6, 1.0), &spec);
    assert!(r.is_err());
}

#[test]
fn fourier_bump_decay_and_parseval() {
    let n = 512;
    let grid = uniform_grid::<f64>(n);
    let bump = |p: f64| {
        let x = (p - PI) / 3.0;
        if x.abs() < 1.0 { (-1.0 / (1.0 - x * x)).exp() } else { 0.0 }
    };
    let s: Vec<Cx<f64>> = grid.iter().map(|&p| cx(bump(p), 0.0)).collect();
    let f = fourier_coefficients(&s, 100).unwrap();
    let weighted = |m: i64| f.get(m).norm() * (m as f64).powi(4);
    let reference = (10..=20).map(weighted).fold(0.0, f64::max);
    for m in 21..=100 {
        assert!(weighted(m) < reference, "m={m}");
    }
    assert!((f.parseval_sum() - mean_square(&s)).abs() < 1e-10 * mean_square(&s));
}
