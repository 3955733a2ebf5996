use acoustic_bh::flowfield::{TrigPoly, VelocityField};
use acoustic_bh::geometry::*;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

fn corner() -> VelocityField<f64> {
    VelocityField::<f64>::corner(-2.0, 0.5).unwrap()
}

#[test]
fn ergosphere_examples() {
    let f = corner();
    assert!((ergosphere_radius(&f, 0.0) - 2.309401076758503).abs() < 1e-12);
    let radial = VelocityField::<f64>::corner_unchecked(-2.0, 0.0);
    for j in 0..16 {
        assert!((ergosphere_radius(&radial, j as f64 * 0.4) - 2.0).abs() < 1e-14);
    }
    let t = VelocityField::<f64>::tangent(-1.0, TrigPoly::new(0.0, vec![], vec![1.0])).unwrap();
    assert!((ergosphere_radius(&t, FRAC_PI_2) - 2f64.sqrt()).abs() < 1e-14);
    let c = VelocityField::<f64>::constant(-1.0, 0.5).unwrap();
    assert!((ergosphere_radius(&c, 1.0) - 1.25f64.sqrt()).abs() < 1e-14);
}

#[test]
fn ergosphere_closed_form_matches_root_solve() {
    let fields = [
        corner(),
        VelocityField::<f64>::corner(-3.0, 0.8).unwrap(),
        VelocityField::<f64>::tangent(-1.0, TrigPoly::new(0.2, vec![0.3], vec![1.0])).unwrap(),
        VelocityField::<f64>::constant(-1.5, -0.7).unwrap(),
    ];
    for f in &fields {
        for j in 0..64 {
            let p = j as f64 * PI / 32.0;
            let a = ergosphere_radius(f, p);
            let b = ergosphere_radius_root(f, p).unwrap();
            assert!((a - b).abs() < 1e-12 * a, "{a} vs {b}");
        }
    }
}

#[test]
fn ergosphere_samples_have_unit_speed() {
    let f = corner();
    let curve = ErgosphereCurve::sample(&f, 1440);
    assert!(curve.max_speed_defect(&f) < 1e-10);
    // the closed-form slope matches a difference quotient of the radius
    for j in 0..32 {
        let p = j as f64 * 0.2;
        let h = 1e-6;
        let fd = (ergosphere_radius(&f, p + h) - ergosphere_radius(&f, p - h)) / (2.0 * h);
        assert!((fd - ergosphere_slope(&f, p)).abs() < 1e-8);
    }
}

#[test]
fn characteristic_point_examples() {
    let c = VelocityField::<f64>::constant(-1.0, 0.5).unwrap();
    assert!(characteristic_points(&c).unwrap().is_empty());
    let t = VelocityField::<f64>::tangent(-1.0, TrigPoly::new(0.0, vec![], vec![1.0])).unwrap();
    let pts = characteristic_points(&t).unwrap();
    assert_eq!(pts.len(), 2);
    assert!((pts[0].0.abs() - PI).abs() < 1e-12 && pts[1].0.abs() < 1e-12, "{pts:?}");
    let pts = characteristic_points(&corner()).unwrap();
    assert_eq!(pts.len(), 2);
    assert!((pts[0].0 + FRAC_PI_2).abs() < 1e-8 && (pts[1].0 - FRAC_PI_2).abs() < 1e-8, "{pts:?}");
}

#[test]
fn families_tangent_at_characteristic_points() {
    let f = corner();
    for (p, r) in characteristic_points(&f).unwrap() {
        let roots = geodesic_slope_roots(&f, r, p).unwrap();
        let (s1, s2) = (roots.family(Family::One).unwrap(), roots.family(Family::Two).unwrap());
        let e = ergosphere_slope(&f, p);
        assert!((s1 - s2).abs() < 1e-6 && (s1 - e).abs() < 1e-6 && (s2 - e).abs() < 1e-6);
    }
}

#[test]
fn slope_root_examples() {
    let radial = VelocityField::<f64>::constant(-1.0, 0.0).unwrap();
    let r = geodesic_slope_roots(&radial, 1.0, 0.3).unwrap();
    assert_eq!(r.family(Family::One), Some(0.0));
    let c = VelocityField::<f64>::constant(-1.0, 1.0).unwrap();
    let r = geodesic_slope_roots(&c, 1.2, 0.0).unwrap();
    let (s1, s2) = (r.family(Family::One).unwrap(), r.family(Family::Two).unwrap());
    assert!((s1 - s2).abs() > 1e-3);
    assert!(slope_residual(&c, 1.2, 0.0, s1) < 1e-10 && slope_residual(&c, 1.2, 0.0, s2) < 1e-10);
    assert!(geodesic_slope_roots(&c, 1.5, 0.0).is_err());
    // ρ = |B| makes the leading coefficient vanish
    let c = VelocityField::<f64>::constant(-1.0, 2.0).unwrap();
    let r = geodesic_slope_roots(&c, 2.0, 0.0).unwrap();
    assert!(matches!(r.roots, Roots::Linear { .. }));
}

proptest! {
    #[test]
    fn discriminant_identity(rho in 0.05f64..6.0, phi in -7.0f64..7.0, which in 0usize..3) {
        let f = match which {
            0 => corner(),
            1 => VelocityField::<f64>::constant(-1.3, 0.8).unwrap(),
            _ => VelocityField::<f64>::tangent(-1.0, TrigPoly::new(0.1, vec![0.4], vec![0.9])).unwrap(),
        };
        let (a2, a1, a0) = quadratic_coefficients(&f, rho, phi);
        let generic = a1 * a1 - 4.0 * a2 * a0;
        let scale = a1 * a1 + (4.0 * a2 * a0).abs();
        prop_assert!((generic - discriminant(&f, rho, phi)).abs() <= 1e-12 * scale);
    }

    #[test]
    fn real_roots_inside_ergosphere(phi in -7.0f64..7.0, frac in 0.05f64..0.999) {
        let f = corner();
        let r0 = ergosphere_radius(&f, phi);
        let rho = (r0 * frac).min(r0 - 1e-8);
        let roots = geodesic_slope_roots(&f, rho, phi).unwrap();
        for fam in [Family::One, Family::Two] {
            if let Some(s) = roots.family(fam) {
                prop_assert!(s.is_finite());
                prop_assert!(slope_residual(&f, rho, phi, s) < 1e-10);
            }
        }
    }

    #[test]
    fn hamiltonian_factorisation(rho in 0.05f64..6.0, phi in -7.0f64..7.0,
        e0 in -5.0f64..5.0, er in -5.0f64..5.0, ep in -5.0f64..5.0) {
        use acoustic_bh::flowfield::CotangentPoint;
        for f in [corner(), VelocityField::<f64>::constant(-1.0, 1.0).unwrap()] {
            let p = CotangentPoint::<f64>::new(rho, phi, e0, er, ep).unwrap();
            let h = f.hamiltonian_symbol(&p).unwrap();
            let (hp, hm) = f.hamiltonian_factors(&p).unwrap();
            let lin = hp.abs().max(hm.abs());
            prop_assert!((hp * hm - h).abs() <= 1e-12 * lin * lin);
        }
    }

    #[test]
    fn field_is_periodic(rho in 0.05f64..6.0, phi in -7.0f64..7.0) {
        let f = corner();
        let (a, b) = f.eval(rho, phi).unwrap();
        let (a2, b2) = f.eval(rho, phi + 2.0 * PI).unwrap();
        prop_assert!((a - a2).abs() < 1e-14 && (b - b2).abs() < 1e-14);
    }
}

#[test]
fn hamiltonian_examples() {
    use acoustic_bh::flowfield::CotangentPoint;
    let c = VelocityField::<f64>::constant(-1.0, 1.0).unwrap();
    let p = CotangentPoint::<f64>::new(2.0, 0.0, 1.0, 1.0, 0.0).unwrap();
    assert!((c.hamiltonian_symbol(&p).unwrap() + 0.75).abs() < 1e-15);
    let (hp, hm) = c.hamiltonian_factors(&p).unwrap();
    assert!((hp - 1.5).abs() < 1e-15 && (hm + 0.5).abs() < 1e-15);
    let (a, b) = corner().eval(2.3094, 0.0).unwrap();
    assert!((a + 2.0).abs() < 1e-15 && (b - 1.1547).abs() < 1e-12);
    let t = VelocityField::<f64>::tangent(-1.0, TrigPoly::new(0.0, vec![], vec![1.0])).unwrap();
    assert_eq!(t.eval(0.7, 0.0).unwrap(), (-1.0, 0.0));
}

#[test]
fn circle_is_a_fixed_point() {
    let radial = VelocityField::<f64>::constant(-1.5, 0.0).unwrap();
    let g = trace_zero_energy_geodesic(&radial, Family::One, (0.0, 1.5), 1, &StopRule::to_angle(2.0 * PI)).unwrap();
    assert_eq!(g.stop, StopReason::ReachedTarget);
    assert!(g.points.iter().all(|p| (p.1 - 1.5).abs() < 1e-12));
    // constant B leaves ρ = |A| a geodesic too
    let swirl = VelocityField::<f64>::constant(-1.5, 0.7).unwrap();
    let h = horizon(&swirl).unwrap();
    assert!(h.segments[0].points.iter().all(|p| p.1 == 1.5));
    let r = geodesic_slope_roots(&swirl, 1.5, 0.0).unwrap();
    assert!(r.family(Family::One).unwrap().abs() < 1e-15 || r.family(Family::Two).unwrap().abs() < 1e-15);
}

#[test]
fn tracer_crosses_vertical_tangent() {
    // ρ = |B| = 2 lies inside the ergosphere √5, where dρ/dφ is infinite
    let f = VelocityField::<f64>::constant(-1.0, 2.0).unwrap();
    for fam in [Family::One, Family::Two] {
        let g = trace_zero_energy_geodesic(&f, fam, (0.0, 1.9), 1, &StopRule::to_angle(1.0)).unwrap();
        for &(p, r) in &g.points {
            if let Ok(roots) = geodesic_slope_roots(&f, r, p) {
                assert!(roots.discriminant >= 0.0);
            }
        }
    }
}

#[test]
fn corner_horizon_topology() {
    let f = corner();
    let h = build_corner_horizon(&f).unwrap();
    assert_eq!(h.corners.len(), 1);
    assert!(h.closure_gap() < 1e-8);
    let c = h.corners[0];
    assert!(c.angle > 0.0 && c.angle < PI);
    // corner on the far side of the characteristic point at +π/2
    assert!((c.phi - 1.5 * PI).abs() < 0.5, "{c:?}");
    assert!((h.start.0 - FRAC_PI_2).abs() < 1e-8);
    for seg in &h.segments {
        if let SegmentKind::Geodesic(fam) = seg.kind {
            for &(p, r) in &seg.points {
                let roots = geodesic_slope_roots(&f, r, p).unwrap();
                assert!(roots.family(fam).is_some());
            }
        }
    }
    println!("corner {:?}", c);
}

#[test]
fn traces_tangent_to_ergosphere_at_start() {
    let f = corner();
    let h = build_corner_horizon(&f).unwrap();
    let (g1, g2) = h.geodesics().unwrap();
    let p0 = h.start.0;
    let e = ergosphere_slope(&f, p0);
    for g in [g1, g2] {
        let s = g.slope_at(&f, p0).unwrap();
        assert!((s - e).abs() < 1e-6);
    }
}

#[test]
fn small_flow_corner_angle_tends_to_pi() {
    let f = VelocityField::<f64>::corner(-2.0, 1e-3).unwrap();
    let h = build_corner_horizon(&f).unwrap();
    assert_eq!(h.corners.len(), 1);
    println!("small-eps corner {:?}", h.corners[0]);
    assert!(h.corners[0].angle > PI - 0.01);
    for seg in &h.segments {
        for &(_, r) in &seg.points {
            assert!((r - 2.0).abs() < 0.01);
        }
    }
}

#[test]
fn hermite_connector_conditions() {
    let q = QuinticHermite::<f64>::new(0.5, 1.7, (1.0, -0.3, 0.8), (2.0, 0.4, -1.1));
    let (v0, d0, s0) = q.eval(0.5);
    let (v1, d1, s1) = q.eval(1.7);
    assert!((v0 - 1.0).abs() < 1e-14 && (d0 + 0.3).abs() < 1e-13 && (s0 - 0.8).abs() < 1e-12);
    assert!((v1 - 2.0).abs() < 1e-13 && (d1 - 0.4).abs() < 1e-12 && (s1 + 1.1).abs() < 1e-11);
    let flat = QuinticHermite::<f64>::new(0.0, 2.0, (1.5, 0.0, 0.0), (1.5, 0.0, 0.0));
    for j in 0..=20 {
        assert!((flat.eval(0.1 * j as f64).0 - 1.5).abs() < 1e-8);
    }
}

// Frozen from an independent scipy DOP853 run (rtol 1e-13) of the family-one
// slope ODE from α₁ to φ = 3π/2, where the mirror symmetry φ ↦ π − φ puts α₃.
const ALPHA3_RHO: f64 = 3.2662587440059467;
const ALPHA3_ANGLE: f64 = 2.235056356096125;

#[test]
fn corner_position_regression() {
    let h = build_corner_horizon(&corner()).unwrap();
    let c = h.corners[0];
    assert!((c.phi - 1.5 * PI).abs() < 1e-8, "{c:?}");
    assert!((c.rho - ALPHA3_RHO).abs() < 1e-8, "{c:?}");
    assert!((c.angle - ALPHA3_ANGLE).abs() < 1e-7, "{c:?}");
}

#[test]
fn corner_angle_increases_toward_pi() {
    let mut last = 0.0;
    for eps in [0.5, 0.2, 0.05] {
        let h = build_corner_horizon(&VelocityField::<f64>::corner(-2.0, eps).unwrap()).unwrap();
        let a = h.corners[0].angle;
        assert!(a >= last - 1e-12, "ε={eps}: {a} < {last}");
        last = a;
    }
}

#[test]
fn closure_of_same_circle_arcs_is_the_circle() {
    let radial = VelocityField::<f64>::constant(-1.5, 0.0).unwrap();
    let g = trace_zero_energy_geodesic(&radial, Family::One, (0.0, 1.5), 1, &StopRule::to_angle(2.0 * PI)).unwrap();
    let windows = vec![
        GeodesicWindow { lo: 0.5, hi: 1.5, trace: g.clone(), shift: 0.0 },
        GeodesicWindow { lo: 3.0, hi: 4.5, trace: g, shift: 0.0 },
    ];
    let curve = smooth_closure(&radial, windows).unwrap();
    for j in 0..200 {
        let p = j as f64 * 0.0314159 * 2.0;
        assert!((curve.rho0(p) - 1.5).abs() < 1e-8);
        assert!(curve.drho0(p).abs() < 1e-8);
    }
}

#[test]
fn closure_matches_windows_and_junctions() {
    let f = corner();
    let h = build_corner_horizon(&f).unwrap();
    let (g1, g2) = h.geodesics().unwrap();
    let tau = 2.0 * PI;
    let windows = vec![
        GeodesicWindow { lo: 2.0, hi: 3.5, trace: g1.clone(), shift: 0.0 },
        // γ₂ runs clockwise from α₁; evaluate it at φ − 2π
        GeodesicWindow { lo: 5.5, hi: 7.0, trace: g2.clone(), shift: -tau },
    ];
    let curve = smooth_closure(&f, windows).unwrap();
    assert!(curve.junction_mismatch() < 1e-9);
    for j in 0..=20 {
        let p = 2.0 + 0.075 * j as f64;
        assert_eq!(curve.window_of(p), Some(0));
        assert!((curve.rho0(p) - g1.rho_at(&f, p).unwrap()).abs() < 1e-14);
        let q = 5.5 + 0.075 * j as f64;
        assert!((curve.rho0(q) - g2.rho_at(&f, q - tau).unwrap()).abs() < 1e-14);
    }
    // periodic
    assert!((curve.rho0(0.3) - curve.rho0(0.3 + tau)).abs() < 1e-14);
}

#[test]
fn overlapping_windows_are_rejected() {
    let radial = VelocityField::<f64>::constant(-1.5, 0.0).unwrap();
    let g = trace_zero_energy_geodesic(&radial, Family::One, (0.0, 1.5), 1, &StopRule::to_angle(2.0 * PI)).unwrap();
    let windows = vec![
        GeodesicWindow { lo: 0.5, hi: 2.0, trace: g.clone(), shift: 0.0 },
        GeodesicWindow { lo: 1.5, hi: 4.5, trace: g, shift: 0.0 },
    ];
    assert!(smooth_closure(&radial, windows).is_err());
}
