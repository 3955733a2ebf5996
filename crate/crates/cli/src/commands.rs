//! The geometry, spectrum and limit subcommands.

use std::path::Path;

use acoustic_bh::flowfield::FieldKind;
use acoustic_bh::geometry::{characteristic_points, horizon, ErgosphereCurve, SegmentKind};
use acoustic_bh::modes::packet_initial_data;
use acoustic_bh::spectrum::{
    decay_analysis, particle_number, particle_number_limit, DecayAnalysis, LimitResult, SpectralResult, SpectrumOptions,
};
use anyhow::Result;
use serde_json::{json, Value};

use crate::config::{build_packet, Format, LoadedConfig};
use crate::output::{write_json, write_table, Cell, Meta, Table};

/// Sampling density of the emitted ergosphere.
const ERGOSPHERE_SAMPLES: usize = 1440;
const DEFAULT_SWEEP: [f64; 3] = [1e2, 1e3, 1e4];
const DECAY_DELTA: f64 = 0.5;

/// Outcome of a command: files written and per-item failures.
#[derive(Debug, Default)]
pub struct Report {
    pub files: Vec<String>,
    pub errors: Vec<String>,
}

impl Report {
    pub fn partial(&self) -> bool {
        !self.errors.is_empty()
    }
}

fn tolerances(opts: &SpectrumOptions<f64>) -> Value {
    json!({
        "kg_radial_rel": opts.kg.radial.rel_tol,
        "kg_radial_abs": opts.kg.radial.abs_tol,
        "kg_angular_rel": opts.kg.angular_rel_tol,
        "batch_radial_rel": opts.batch.radial.rel_tol,
        "u_max": opts.u_max,
        "eta_panels": opts.eta_panels,
        "m_max": opts.batch.m_max,
        "n_phi": opts.batch.n_phi,
        "parseval_tail": opts.parseval_tail,
    })
}

fn push(report: &mut Report, path: std::path::PathBuf) {
    report.files.push(path.display().to_string());
}

fn family_name(kind: SegmentKind) -> String {
    match kind {
        SegmentKind::Geodesic(f) => format!("geodesic-{f:?}").to_lowercase(),
        SegmentKind::SmoothConnector => "connector".into(),
        SegmentKind::Circle => "circle".into(),
    }
}

pub fn cmd_geometry(cfg: &LoadedConfig, out: &Path, format: Format) -> Result<Report> {
    let c = &cfg.config;
    let field = c.build_field()?;
    let meta = Meta::new(&cfg.sha256, tolerances(&c.spectrum_options()));
    let mut report = Report::default();

    let mut ergo = Table::new("ergosphere", vec![("phi", "polar angle"), ("rho", "radius where |v| = 1")]);
    for (phi, rho) in ErgosphereCurve::sample(&field, ERGOSPHERE_SAMPLES).samples {
        ergo.push(vec![Cell::Num(phi), Cell::Num(rho)]);
    }
    push(&mut report, write_table(out, &ergo, format, &meta)?);

    let h = horizon(&field)?;
    let mut hor = Table::new(
        "horizon",
        vec![("segment_id", "segment index"), ("kind", "segment type"), ("phi", "polar angle"), ("rho", "radius")],
    );
    for (j, seg) in h.segments.iter().enumerate() {
        for &(phi, rho) in &seg.points {
            hor.push(vec![Cell::Int(j as i64), Cell::Text(family_name(seg.kind)), Cell::Num(phi), Cell::Num(rho)]);
        }
    }
    push(&mut report, write_table(out, &hor, format, &meta)?);

    let mut geo = Table::new(
        "geodesics",
        vec![
            ("trace_id", "trace index"),
            ("family", "slope family"),
            ("direction", "+1 counterclockwise, -1 clockwise"),
            ("phi", "polar angle"),
            ("rho", "radius"),
        ],
    );
    for (j, g) in h.traces.iter().enumerate() {
        for &(phi, rho) in &g.points {
            geo.push(vec![
                Cell::Int(j as i64),
                Cell::Text(format!("{:?}", g.family).to_lowercase()),
                Cell::Int(g.direction as i64),
                Cell::Num(phi),
                Cell::Num(rho),
            ]);
        }
    }
    push(&mut report, write_table(out, &geo, format, &meta)?);

    let chars: Vec<Value> = characteristic_points(&field)?.iter().map(|(p, r)| json!({"phi": p, "rho": r})).collect();
    let corners: Vec<Value> = h.corners.iter().map(|c| json!({"phi": c.phi, "rho": c.rho, "angle": c.angle})).collect();
    let doc = json!({
        "corners": corners,
        "characteristic_points": chars,
        "closure_gap": h.closure_gap(),
    });
    push(&mut report, write_json(out, "corners.json", &doc, &meta)?);

    if let FieldKind::Tangent { a, .. } = field.kind() {
        let mut t = Table::new("tangency_points", vec![("phi", "zero of B"), ("rho", "horizon radius |A|")]);
        for &z in field.b_zeros() {
            t.push(vec![Cell::Num(z), Cell::Num(a.abs())]);
        }
        push(&mut report, write_table(out, &t, format, &meta)?);
    }
    Ok(report)
}

pub fn spectral_json(r: &SpectralResult<f64>) -> Value {
    let segments: Vec<Value> = r
        .segments
        .iter()
        .map(|s| {
            json!({
                "segment": s.segment,
                "mu": s.mu,
                "weight": s.weight,
                "positive_integral": s.positive,
                "negative_integral": s.negative,
                "positive_integral_unweighted": s.positive_unweighted,
                "negative_integral_unweighted": s.negative_unweighted,
            })
        })
        .collect();
    let oracle = r.oracle.map(|o| {
        json!({
            "n_total": o.n_total,
            "hawking_part": o.hawking_part,
            "non_hawking_part": o.non_hawking_part,
            "tail": o.tail,
            "all_modes_total": o.all_modes_total,
            "m_max": o.m_max,
            "error": o.error,
            "rel_gap": (o.n_total - r.n_total) / r.n_total,
        })
    });
    json!({
        "a": r.a,
        "epsilon": r.eps,
        "n_total": r.n_total,
        "hawking_part": r.hawking_part,
        "non_hawking_part": r.non_hawking_part,
        "n_unweighted": r.n_unweighted,
        "norm": r.norm,
        "norm_printed": r.norm_printed,
        "n_normalized": r.n_normalized,
        "segments": segments,
        "oracle": oracle,
    })
}

pub fn limit_json(l: &LimitResult<f64>) -> Value {
    let sweep: Vec<Value> =
        l.sweep.iter().map(|p| json!({"a": p.a, "n_normalized": p.n_normalized, "rel_gap": p.rel_gap})).collect();
    json!({"limit": l.limit, "limit_printed": l.limit_printed, "sweep": sweep, "monotone": l.monotone})
}

pub fn decay_json(d: &DecayAnalysis<f64>) -> Value {
    let fit = |f: &acoustic_bh::spectrum::LinearFit<f64>| {
        json!({"slope": f.slope, "intercept": f.intercept, "slope_ci95": [f.slope_ci.0, f.slope_ci.1], "points": f.points})
    };
    json!({
        "epsilon": d.eps,
        "delta": d.delta,
        "xi": d.xi,
        "hawking": d.hawking,
        "non_hawking": d.non_hawking,
        "hawking_log_slope": fit(&d.hawking_fit),
        "non_hawking_loglog_slope": fit(&d.non_hawking_fit),
        "asymptotic_slope": d.asymptotic_slope,
        "reference_xi": d.reference_xi,
        "slope_mismatch": d.slope_mismatch(),
        "bound_exponent": d.bound_exponent,
        "polynomial_bound_holds": d.polynomial_bound_holds(),
        "exponential_bound_constant": d.exponential_bound_constant,
        "polynomial_bound_constant": d.polynomial_bound_constant,
        "separation": d.separation,
    })
}

pub fn cmd_spectrum(cfg: &LoadedConfig, out: &Path, format: Format) -> Result<Report> {
    let c = &cfg.config;
    let field = c.build_field()?;
    let opts = c.spectrum_options();
    let meta = Meta::new(&cfg.sha256, tolerances(&opts));
    let built = build_packet(c, &field)?;
    let packet = packet_initial_data(&built.spec, &field, built.base.clone())?;
    let r = particle_number(&packet, &opts)?;
    let mut report = Report::default();

    let mut dens = Table::new(
        "c3_density",
        vec![("eta_rho", "scaled radial frequency"), ("C3", "scaled spectral density"), ("segment_id", "packet component")],
    );
    for p in &r.density {
        dens.push(vec![Cell::Num(p.eta), Cell::Num(p.c3), Cell::Int(p.segment as i64)]);
    }
    push(&mut report, write_table(out, &dens, format, &meta)?);

    let mut doc = spectral_json(&r);
    let limit = particle_number_limit(&built.spec, &field, built.base.clone(), &c.sweeps.a, &opts);
    doc["limit"] = match limit {
        Ok(l) => limit_json(&l),
        Err(e) => {
            report.errors.push(format!("limit: {e}"));
            Value::Null
        }
    };
    doc["decay"] = if c.sweeps.xi.is_empty() {
        Value::Null
    } else {
        match decay_analysis(r.eps, &c.sweeps.xi, DECAY_DELTA) {
            Ok(d) => decay_json(&d),
            Err(e) => {
                report.errors.push(format!("decay: {e}"));
                Value::Null
            }
        }
    };
    doc["errors"] = json!(report.errors);
    doc["partial"] = json!(report.partial());
    push(&mut report, write_json(out, "nparticles.json", &doc, &meta)?);
    Ok(report)
}

pub fn cmd_limit(cfg: &LoadedConfig, out: &Path, format: Format) -> Result<Report> {
    let field = cfg.config.build_field()?;
    let opts = cfg.config.spectrum_options();
    let meta = Meta::new(&cfg.sha256, tolerances(&opts));
    let built = build_packet(&cfg.config, &field)?;
    let sweep = if cfg.config.sweeps.a.is_empty() { DEFAULT_SWEEP.to_vec() } else { cfg.config.sweeps.a.clone() };
    let l = particle_number_limit(&built.spec, &field, built.base, &sweep, &opts)?;
    let mut report = Report::default();
    let mut t = Table::new(
        "limit_sweep",
        vec![
            ("a", "regularization"),
            ("n_normalized", "quadrature-route N(C)/<C,C>"),
            ("limit", "a -> infinity limit from the exact norm"),
            ("rel_gap", "(n_normalized - limit)/limit"),
        ],
    );
    for p in &l.sweep {
        t.push(vec![Cell::Num(p.a), Cell::Num(p.n_normalized), Cell::Num(l.limit), Cell::Num(p.rel_gap)]);
    }
    push(&mut report, write_table(out, &t, format, &meta)?);
    push(&mut report, write_json(out, "limit.json", &limit_json(&l), &meta)?);
    Ok(report)
}
