use std::f64::consts::PI;
use std::sync::Arc;

use acoustic_bh::flowfield::{TrigPoly, VelocityField};
use acoustic_bh::geometry::{build_corner_horizon, corner_base_curve, BaseCurve, Circle};
use acoustic_bh::modes::*;
use acoustic_bh::scalar::{cx, Cx};
use proptest::prelude::*;

fn constant() -> VelocityField<f64> {
    VelocityField::<f64>::constant(-1.0, 0.5).unwrap()
}

fn rel(a: Cx<f64>, b: Cx<f64>) -> f64 {
    (a - b).norm() / b.norm()
}

fn jets_close(a: &Jet<f64>, b: &Jet<f64>, tol: f64) -> bool {
    let scale = a.value.norm() + a.dt.norm() + a.dr.norm() + a.dphi.norm() + 1e-300;
    let d = (a.value - b.value).norm() + (a.dt - b.dt).norm() + (a.dr - b.dr).norm() + (a.dphi - b.dphi).norm();
    d <= tol * scale
}

fn simple(m: i64, eta0: f64, eps: f64, a: f64) -> SimplePacket<f64> {
    SimplePacket { m, eta0, eps, a }
}

fn simple_data(p: SimplePacket<f64>, field: &VelocityField<f64>) -> PacketData<f64> {
    packet_initial_data(&PacketSpec::Simple(p), field, None).unwrap()
}

#[test]
fn lambda_examples() {
    let free = VelocityField::<f64>::corner_unchecked(0.0, 0.0);
    for (eta, a) in [(3.0, 4.0), (-1.5, 0.25), (0.0, 2.0)] {
        let k = ModeIndex::new(eta, 3, a).unwrap();
        let l = lambda0_minus(&k, &free, &Chart::Polar, 1.7, 0.4).unwrap();
        assert!((l + f64::hypot(eta, a)).abs() < 1e-15);
    }
    let k = ModeIndex::new(3.0, 2, 4.0).unwrap();
    let field = VelocityField::<f64>::constant(-1.0, 0.5).unwrap();
    let l = lambda0_minus(&k, &field, &Chart::Polar, 1.0, 0.0).unwrap();
    assert!((l + 3.0).abs() < 1e-14, "{l}");
    assert!(ModeIndex::new(1.0, 0, 0.0).is_err());
}

#[test]
fn mode_jet_matches_definition() {
    let field = constant();
    let k = ModeIndex::new(2.0, -3, 1.5).unwrap();
    let f = mode_initial_data(k, &field, &Chart::Polar);
    let (rho, phi) = (1.3, 0.7);
    let j = f.jet(rho, phi);
    let s = f64::hypot(2.0, 1.5);
    let gamma = 1.0 / (2.0 * PI * 2f64.sqrt() * rho.sqrt() * s.sqrt());
    let want = cx(0.0, 2.0 * rho - 3.0 * phi).exp() * gamma;
    assert!(rel(j.value, want) < 1e-14);
    let lam = lambda0_minus(&k, &field, &Chart::Polar, rho, phi).unwrap();
    assert!(rel(j.dt, want * cx(0.0, lam)) < 1e-14);
    // Df = (−is − A/(2ρ²)) f
    let (gr, gphi) = (-1.0 / rho, 0.5 / (rho * rho));
    let d = j.dt + j.dr * gr + j.dphi * gphi;
    assert!(rel(d, want * cx(1.0 / (2.0 * rho * rho), -s)) < 1e-13);
}

#[test]
fn tilde_chart_with_flat_base_is_shifted_polar() {
    let field = constant();
    let base = 2.0;
    let tilde = Chart::tilde(Circle { radius: base });
    for (eta, m) in [(1.5, 2), (-0.5, -1)] {
        let k = ModeIndex::new(eta, m, 0.8).unwrap();
        let ft = mode_initial_data(k, &field, &tilde);
        let fp = mode_initial_data(k, &field, &Chart::Polar);
        for (r, phi) in [(0.3, 0.2), (1.7, 4.0), (-0.5, 2.5)] {
            let shift = cx(0.0, -eta * base).exp();
            let (jt, jp) = (ft.jet(r, phi), fp.jet(r + base, phi) * shift);
            assert!(jets_close(&jt, &jp, 1e-13));
            let lt = lambda0_minus(&k, &field, &tilde, r, phi).unwrap();
            let lp = lambda0_minus(&k, &field, &Chart::Polar, r + base, phi).unwrap();
            assert!((lt - lp).abs() < 1e-13);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minus_mode_is_conjugate_of_plus(eta in -10.0f64..10.0, m in -6i64..6, a in 0.1f64..20.0,
        r in 0.05f64..8.0, phi in -7.0f64..7.0, tilde in any::<bool>()) {
        let field = VelocityField::<f64>::tangent(-1.2, TrigPoly::new(0.6, vec![0.2], vec![0.1])).unwrap();
        let chart = if tilde { Chart::tilde(Circle { radius: 1.2 }) } else { Chart::Polar };
        let k = ModeIndex::new(eta, m, a).unwrap();
        let minus = minus_mode_initial_data(k, &field, &chart);
        let plus = Conjugate(mode_initial_data(k.negated(), &field, &chart));
        prop_assert!(jets_close(&minus.jet(r, phi), &plus.jet(r, phi), 1e-14));
    }
}

#[test]
fn printed_simple_norm_examples() {
    // |A| = 1, B = 0, so ξ₀|A| = η₀
    let field = VelocityField::<f64>::constant(-1.0, 0.0).unwrap();
    let n = kg_norm_simple(&simple(0, 1.0, 0.5, 2.0), &field).unwrap();
    assert!((n - 2.0 * PI).abs() < 1e-12, "{n}");
    let n2 = kg_norm_simple(&simple(0, 2.0, 0.5, 2.0), &field).unwrap();
    assert!((n2 - 2.0 * n).abs() < 1e-12);
    let n3 = kg_norm_simple(&simple(0, 2.0, 0.25, 1.0), &field).unwrap();
    assert!((n3 - 37.46).abs() < 5e-3, "{n3}");
    assert!((n3 - 8.0 * PI * PI.sqrt() / 2f64.powf(0.25)).abs() < 1e-11);
}

#[test]
fn simple_norm_quadrature_matches_exact_form() {
    let field = constant();
    for a in [1.0, 10.0, 100.0] {
        for (m, eta0, eps) in [(1, 2.0, 0.5), (0, 1.0, 0.25), (-2, 0.5, 0.8)] {
            let p = simple(m, eta0, eps, a);
            let c = simple_data(p, &field);
            let q = kg_inner_product(&c, &c, &field).unwrap();
            let exact = kg_norm_simple_exact(&p, &field).unwrap();
            assert!(q.im.abs() < 1e-9 * exact, "{q}");
            assert!((q.re - exact).abs() < 1e-6 * exact, "a={a} m={m}: {} vs {exact}", q.re);
        }
    }
}

#[test]
fn simple_packet_vanishes_inside_horizon() {
    let field = constant();
    let c = simple_data(simple(1, 2.0, 0.5, 3.0), &field);
    for rho in [0.1, 0.5, 0.999999, 1.0] {
        for phi in [0.0, 1.0, 4.0] {
            assert!(c.jet(rho, phi).is_zero());
        }
    }
    assert!(c.value(1.0 + 1e-9, 0.3).norm() > 0.0);
}

#[test]
fn simple_beta_near_horizon() {
    let field = VelocityField::<f64>::constant(-1.5, 0.7).unwrap();
    let eta0 = 1.3;
    let c = simple_data(simple(0, eta0, 0.5, 2.0), &field);
    for t in [1e-6, 1e-4] {
        let j = c.jet(1.5 + t, 0.4);
        let beta = (j.dt / j.value).im;
        assert!((j.dt / j.value).re.abs() < 1e-12);
        assert!((beta + eta0).abs() < 2.0 * t, "t={t}: {beta}");
    }
}

#[test]
fn simple_packet_couples_only_to_its_angular_mode() {
    let field = constant();
    let c = simple_data(simple(2, 2.0, 0.5, 5.0), &field);
    let other = simple_data(simple(1, 2.0, 0.5, 5.0), &field);
    assert_eq!(kg_inner_product(&c, &other, &field).unwrap(), cx(0.0, 0.0));
}

fn tangent_field() -> VelocityField<f64> {
    VelocityField::<f64>::tangent(-1.0, TrigPoly::new(0.5, vec![0.0], vec![0.3])).unwrap()
}

fn tangent_packet(a: f64, amp: f64) -> TangentPacket<f64> {
    TangentPacket {
        eta0: 0.7,
        eps: 0.5,
        a,
        windows: vec![
            TangentWindow {
                lo: 0.3,
                hi: 2.2,
                profile: AngularProfile::bump(0.5, 2.0, amp).unwrap(),
                alpha: 1.1,
                d: 0.2,
                anchor: None,
            },
            TangentWindow {
                lo: 3.0,
                hi: 5.0,
                profile: AngularProfile::bump(3.2, 4.6, 0.8 * amp).unwrap(),
                alpha: 0.4,
                d: 0.0,
                anchor: Some(3.5),
            },
        ],
    }
}

#[test]
fn tangent_norm_quadrature_matches_exact_form() {
    let field = tangent_field();
    for a in [1.0, 10.0, 100.0] {
        let p = tangent_packet(a, 1.0);
        let c = packet_initial_data(&PacketSpec::Tangent(p.clone()), &field, None).unwrap();
        let q = kg_inner_product(&c, &c, &field).unwrap();
        let exact = kg_norm_tangent_exact(&p, &field).unwrap();
        assert!((q.re - exact).abs() < 1e-6 * exact, "a={a}: {} vs {exact}", q.re);
        assert!(q.im.abs() < 1e-9 * exact);
        assert!((kg_norm_exact(&c).unwrap() - exact).abs() < 1e-10 * exact);
    }
}

#[test]
fn tangent_norm_scaling_and_additivity() {
    let field = tangent_field();
    let p = tangent_packet(4.0, 1.0);
    let n1 = kg_norm_tangent(&p, &field).unwrap();
    let n2 = kg_norm_tangent(&tangent_packet(4.0, 2.0), &field).unwrap();
    assert!((n2 - 4.0 * n1).abs() < 1e-10 * n2);
    let split: f64 = p
        .windows
        .iter()
        .map(|w| kg_norm_tangent(&TangentPacket { windows: vec![*w], ..p.clone() }, &field).unwrap())
        .sum();
    assert!((split - n1).abs() < 1e-12 * n1);
    let exact1 = kg_norm_tangent_exact(&p, &field).unwrap();
    let exact2 = kg_norm_tangent_exact(&tangent_packet(4.0, 2.0), &field).unwrap();
    assert!((exact2 - 4.0 * exact1).abs() < 1e-10 * exact2);
}

#[test]
fn tangent_window_over_zero_of_b_is_rejected() {
    let field = VelocityField::<f64>::tangent(-1.0, TrigPoly::new(0.0, vec![], vec![1.0])).unwrap();
    let p = TangentPacket {
        eta0: 0.5,
        eps: 0.5,
        a: 2.0,
        windows: vec![TangentWindow {
            lo: 2.5,
            hi: 3.5,
            profile: AngularProfile::bump(2.6, 3.4, 1.0).unwrap(),
            alpha: 1.0,
            d: 0.0,
            anchor: None,
        }],
    };
    assert!(packet_initial_data(&PacketSpec::Tangent(p.clone()), &field, None).is_err());
    let ok = TangentPacket {
        windows: vec![TangentWindow { lo: 0.5, hi: 2.5, profile: AngularProfile::bump(0.6, 2.4, 1.0).unwrap(), ..p.windows[0] }],
        ..p
    };
    assert!(packet_initial_data(&PacketSpec::Tangent(ok), &field, None).is_ok());
}

#[test]
fn overlapping_windows_are_rejected() {
    let field = tangent_field();
    let mut p = tangent_packet(2.0, 1.0);
    p.windows[1].lo = 1.5;
    p.windows[1].profile = AngularProfile::bump(1.8, 3.0, 1.0).unwrap();
    assert!(packet_initial_data(&PacketSpec::Tangent(p), &field, None).is_err());
}

#[test]
fn full_circle_tangent_packet_reproduces_simple_packet() {
    let (abs_a, b, m, eta0) = (1.5, -0.6, 2, 0.9);
    let field_t = VelocityField::<f64>::tangent(-abs_a, TrigPoly::constant(b)).unwrap();
    let field_c = VelocityField::<f64>::constant(-abs_a, b).unwrap();
    // Θ′ = −α|A|/B = m
    let alpha = -(m as f64) * b / abs_a;
    let tangent = TangentPacket {
        eta0,
        eps: 0.4,
        a: 3.0,
        windows: vec![TangentWindow {
            lo: 0.0,
            hi: 2.0 * PI,
            profile: AngularProfile::Constant { amp: 1.0 },
            alpha,
            d: 0.0,
            anchor: Some(0.0),
        }],
    };
    let s = simple(m, eta0, 0.4, 3.0);
    let ct = packet_initial_data(&PacketSpec::Tangent(tangent.clone()), &field_t, None).unwrap();
    let cs = simple_data(s, &field_c);
    // α ↔ ξ₀|A| − η₀|A|
    let xi0 = simple_xi0(&s, &field_c).unwrap();
    assert!((alpha - (xi0 * abs_a - eta0 * abs_a)).abs() < 1e-14);
    for rho in [1.5 + 1e-5, 1.6, 2.3, 4.0] {
        for phi in [0.1, 1.0, 3.3, 6.0] {
            assert!(jets_close(&ct.jet(rho, phi), &cs.jet(rho, phi), 1e-10), "ρ={rho} φ={phi}");
        }
    }
    let nt = kg_norm_tangent_exact(&tangent, &field_t).unwrap();
    let ns = kg_norm_simple_exact(&s, &field_c).unwrap();
    assert!((nt - ns).abs() < 1e-12 * ns);
}

#[test]
fn tangent_eikonal_residual_vanishes() {
    let field = tangent_field();
    for rho in [1.0001, 1.1, 2.0] {
        for phi in [0.3, 1.7, 4.5] {
            let r = tangent_eikonal_residual(&field, 0.7, 1.1, rho, phi);
            assert!(r.abs() < 1e-10, "{r}");
        }
    }
}

#[test]
fn tangent_beta_matches_closed_expansion() {
    // β_r = −(η₀|A| + α)/ρ + α|A|/ρ²
    let field = tangent_field();
    let p = tangent_packet(2.0, 1.0);
    let c = packet_initial_data(&PacketSpec::Tangent(p.clone()), &field, None).unwrap();
    let w = p.windows[0];
    for rho in [1.001, 1.3, 2.5] {
        let j = c.jet(rho, 1.2);
        let beta = (j.dt / j.value).im;
        let want = -(p.eta0 + w.alpha) / rho + w.alpha / (rho * rho);
        assert!((beta - want).abs() < 1e-10, "{beta} vs {want}");
    }
}

#[test]
fn eikonal_coefficients_on_a_circle() {
    let (abs_a, b) = (1.7, 0.6);
    let field = VelocityField::<f64>::constant(-abs_a, b).unwrap();
    let base = Circle { radius: abs_a };
    for phi in [0.0, 2.0] {
        let (b1, b2) = eikonal_coefficients(&field, &base, phi);
        assert!((b1 + abs_a).abs() < 1e-13 && (b2 - b / abs_a).abs() < 1e-13);
    }
    let radial = VelocityField::<f64>::corner_unchecked(-2.0, 0.0);
    let (b1, b2) = eikonal_coefficients(&radial, &Circle { radius: 2.0 }, 1.0);
    assert!((b1 + 2.0).abs() < 1e-13 && b2.abs() < 1e-15);
}

fn corner_setup() -> (VelocityField<f64>, Arc<acoustic_bh::geometry::SmoothBaseCurve<f64>>) {
    let field = VelocityField::<f64>::corner(-2.0, 0.5).unwrap();
    let h = build_corner_horizon(&field).unwrap();
    let base = corner_base_curve(&field, &h, 0.3, 0.05).unwrap();
    (field, Arc::new(base))
}

fn corner_packet(a: f64) -> CornerPacket<f64> {
    CornerPacket {
        eta0: 0.4,
        eps: 0.5,
        a,
        segments: vec![
            CornerSegment {
                lo: 3.5,
                hi: 4.6,
                profile: AngularProfile::bump(3.6, 4.5, 1.0).unwrap(),
                alpha: 1.2,
                d: 0.0,
                anchor: None,
            },
            CornerSegment {
                lo: 4.9,
                hi: 5.9,
                profile: AngularProfile::bump(5.0, 5.8, 0.7).unwrap(),
                alpha: 0.8,
                d: 0.3,
                anchor: None,
            },
        ],
    }
}

#[test]
fn corner_phase_solves_linearized_eikonal() {
    let (field, base) = corner_setup();
    let p = corner_packet(10.0);
    let c = packet_initial_data(&PacketSpec::Corner(p.clone()), &field, Some(base.clone())).unwrap();
    for (comp, seg) in c.components.iter().zip(&p.segments) {
        let mut worst: f64 = 0.0;
        for j in 0..=40 {
            let phi = seg.lo + (seg.hi - seg.lo) * j as f64 / 40.0;
            let (_, dth) = comp.phase(phi).unwrap();
            let (b1, b2) = eikonal_coefficients(&field, base.as_ref(), phi);
            worst = worst.max((seg.alpha + b1 * p.eta0 + b2 * dth).abs());
        }
        assert!(worst < 1e-8, "{worst}");
        // the tilde eikonal residual vanishes linearly in ρ̃
        let phi = 0.5 * (seg.lo + seg.hi);
        let (_, dth) = comp.phase(phi).unwrap();
        let r1 = tilde_eikonal_residual(&field, base.as_ref(), p.eta0, seg.alpha, dth, 1e-2, phi);
        let r2 = tilde_eikonal_residual(&field, base.as_ref(), p.eta0, seg.alpha, dth, 1e-3, phi);
        assert!(r2.abs() < 0.2 * r1.abs() + 1e-6, "{r1} {r2}");
        assert!(r2.abs() < 1e-2);
    }
}

#[test]
fn corner_packet_lives_on_the_base_curve() {
    let (field, base) = corner_setup();
    let c = packet_initial_data(&PacketSpec::Corner(corner_packet(10.0)), &field, Some(base.clone())).unwrap();
    let phi = 4.0;
    assert!(c.jet(0.0, phi).is_zero() && c.jet(-0.1, phi).is_zero());
    assert!(c.jet(1e-3, phi).value.norm() > 0.0);
    // segment straddling the corner is rejected
    let mut bad = corner_packet(10.0);
    bad.segments[0].hi = 4.75;
    assert!(packet_initial_data(&PacketSpec::Corner(bad), &field, Some(base.clone())).is_err());
    assert!(packet_initial_data(&PacketSpec::Corner(corner_packet(1.0)), &field, None).is_err());
    assert!(base.rho0(phi) > 1.0);
}

#[test]
fn corner_norm_quadrature_matches_exact_form() {
    let (field, base) = corner_setup();
    for a in [10.0, 100.0] {
        let c = packet_initial_data(&PacketSpec::Corner(corner_packet(a)), &field, Some(base.clone())).unwrap();
        let q = kg_inner_product(&c, &c, &field).unwrap();
        let exact = kg_norm_exact(&c).unwrap();
        assert!((q.re - exact).abs() < 1e-6 * exact, "a={a}: {} vs {exact}", q.re);
    }
}

#[test]
fn hermitian_symmetry_examples() {
    let field = tangent_field();
    let p = packet_initial_data(&PacketSpec::Tangent(tangent_packet(3.0, 1.0)), &field, None).unwrap();
    let f = mode_initial_data(ModeIndex::new(2.0, 1, 3.0).unwrap(), &field, &Chart::Polar);
    let uv = kg_inner_product(&p, &f, &field).unwrap();
    let vu = kg_inner_product(&f, &p, &field).unwrap();
    assert!((uv - vu.conj()).norm() < 1e-10 * uv.norm().max(1e-300), "{uv} {vu}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn hermitian_symmetry(eta in -6.0f64..6.0, m in -4i64..4, a in 0.5f64..10.0, eps in 0.2f64..0.9,
        alpha in 0.2f64..2.0, amp in 0.2f64..2.0, d in -3.0f64..3.0) {
        let field = tangent_field();
        let mut t = tangent_packet(a, amp);
        t.eps = eps;
        t.windows[0].alpha = alpha;
        t.windows[1].d = d;
        let u = packet_initial_data(&PacketSpec::Tangent(t), &field, None).unwrap();
        let v = minus_mode_initial_data(ModeIndex::new(eta, m, a).unwrap(), &field, &Chart::Polar);
        let uv = kg_inner_product(&u, &v, &field).unwrap();
        let vu = kg_inner_product(&v, &u, &field).unwrap();
        prop_assert!((uv - vu.conj()).norm() <= 1e-10 * uv.norm().max(1e-12));
    }
}

fn gaussian(center: f64, sigma: f64) -> impl Fn(f64) -> Cx<f64> {
    move |eta: f64| cx((-(eta - center).powi(2) / (2.0 * sigma * sigma)).exp(), 0.0)
}

fn smeared(branch: Branch, m: i64) -> SmearedModes<f64> {
    let field = constant();
    // Δη = 0.05 keeps the alias period 2π/Δη far beyond the cutoff
    SmearedModes::new(gaussian(3.0, 0.5), 0.0, 0.05, 121, m, 1.0, branch, &field, &Chart::Polar, 14.0).unwrap()
}

#[test]
fn smeared_modes_normalization() {
    let field = constant();
    let u = smeared(Branch::Plus, 1);
    let uu = kg_inner_product(&u, &u, &field).unwrap();
    // discrete double sum with the closed-form truncated overlaps
    let mut oracle = cx(0.0, 0.0);
    for (w, f) in u.terms() {
        for (w2, f2) in u.terms() {
            oracle += w.conj() * *w2 * truncated_mode_overlap(&f.k, &f2.k, u.cutoff);
        }
    }
    assert!(rel(uu, oracle) < 1e-8, "{uu} vs {oracle}");
    // on the half-line ρ > 0 the continuum value is ½∫|w|² dη
    let half_l2 = 0.5 * 0.5 * PI.sqrt();
    assert!((uu.re - half_l2).abs() < 1e-4 * half_l2, "{uu}");
    assert!(uu.im.abs() < 1e-10);
    let v = smeared(Branch::Minus, 1);
    let vv = kg_inner_product(&v, &v, &field).unwrap();
    assert!((vv.re + half_l2).abs() < 1e-4 * half_l2, "{vv}");
}

#[test]
fn plus_minus_modes_decouple_across_angular_modes() {
    let field = constant();
    let u = smeared(Branch::Plus, 2);
    for mp in [-3, -2, 0, 1, 3] {
        let v = smeared(Branch::Minus, mp);
        assert_eq!(kg_inner_product(&u, &v, &field).unwrap(), cx(0.0, 0.0), "m′={mp}");
    }
}
