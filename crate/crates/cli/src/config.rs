//! Versioned JSON run configuration.

use std::path::Path;
use std::sync::Arc;

use acoustic_bh::flowfield::{FieldKind, TrigPoly, VelocityField};
use acoustic_bh::geometry::{corner_base_curve, horizon, SmoothBaseCurve};
use acoustic_bh::modes::{AngularProfile, CornerPacket, CornerSegment, PacketSpec, SimplePacket, TangentPacket, TangentWindow};
use acoustic_bh::spectrum::SpectrumOptions;
use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    pub field: FieldConfig,
    #[serde(default)]
    pub packet: Option<PacketConfig>,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub sweeps: Sweeps,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldConfig {
    Constant {
        #[serde(rename = "A")]
        a: f64,
        #[serde(rename = "B")]
        b: f64,
    },
    Tangent {
        #[serde(rename = "A")]
        a: f64,
        #[serde(rename = "B")]
        b: TrigPolyConfig,
    },
    Corner {
        #[serde(rename = "A0")]
        a0: f64,
        eps: f64,
    },
}

/// B(φ) = c0 + Σ cos[k−1]·cos kφ + sin[k−1]·sin kφ.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigPolyConfig {
    pub c0: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

/// Bump of peak `amp` on [lo, hi]; defaults to the enclosing window.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BumpConfig {
    #[serde(default)]
    pub lo: Option<f64>,
    #[serde(default)]
    pub hi: Option<f64>,
    #[serde(default = "one")]
    pub amp: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub lo: f64,
    pub hi: f64,
    #[serde(default)]
    pub profile: Option<BumpConfig>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub d: f64,
    #[serde(default)]
    pub anchor: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PacketConfig {
    Simple {
        #[serde(default)]
        m: i64,
        eta0: f64,
        epsilon: f64,
        a: f64,
    },
    Tangent {
        #[serde(default)]
        eta0: f64,
        epsilon: f64,
        a: f64,
        windows: Vec<WindowConfig>,
    },
    Corner {
        #[serde(default)]
        eta0: f64,
        epsilon: f64,
        a: f64,
        /// α̃_j per segment, overriding the segments' own values.
        #[serde(default)]
        alpha: Option<Vec<f64>>,
        /// Defaults to one unit arc per geodesic window, 0.1 rad from the corner.
        #[serde(default)]
        segments: Option<Vec<WindowConfig>>,
        #[serde(default = "default_start_margin")]
        start_margin: f64,
        #[serde(default = "default_corner_margin")]
        corner_margin: f64,
    },
}

fn default_start_margin() -> f64 {
    0.3
}

fn default_corner_margin() -> f64 {
    0.05
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub oracle: Option<bool>,
    pub u_max: Option<f64>,
    pub eta_panels: Option<usize>,
    pub m_max: Option<usize>,
    pub n_phi: Option<usize>,
    /// Relative Parseval tail for the adaptive m-grid; a negative value fixes the grid.
    pub parseval_tail: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweeps {
    #[serde(default)]
    pub a: Vec<f64>,
    #[serde(default)]
    pub xi: Vec<f64>,
    /// Scaled frequencies η_ρ of the density table.
    #[serde(default)]
    pub eta: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<String>,
    pub format: Option<Format>,
}

/// A parsed config together with the SHA-256 of its bytes.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub sha256: String,
}

impl LoadedConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_bytes(&bytes)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let config: RunConfig = serde_json::from_slice(bytes).context("parsing config")?;
        config.validate()?;
        Ok(Self { config, sha256: hex(&Sha256::digest(bytes)) })
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn sorted_nonempty(name: &str, v: &[f64]) -> Result<()> {
    ensure!(v.iter().all(|x| x.is_finite()), "sweep {name} has non-finite entries");
    ensure!(v.windows(2).all(|w| w[1] > w[0]), "sweep {name} must be strictly increasing");
    Ok(())
}

fn in_circle(name: &str, lo: f64, hi: f64) -> Result<()> {
    let tau = std::f64::consts::TAU;
    ensure!((0.0..tau).contains(&lo) && lo < hi && hi <= lo + tau, "{name} window [{lo}, {hi}] must start in [0, 2pi)");
    Ok(())
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        ensure!(self.schema == SCHEMA, "unsupported config schema {} (expected {SCHEMA})", self.schema);
        sorted_nonempty("a", &self.sweeps.a)?;
        sorted_nonempty("xi", &self.sweeps.xi)?;
        sorted_nonempty("eta", &self.sweeps.eta)?;
        match &self.packet {
            Some(PacketConfig::Tangent { windows, .. }) => {
                ensure!(!windows.is_empty(), "tangent packet needs at least one window");
                for w in windows {
                    in_circle("tangent", w.lo, w.hi)?;
                }
            }
            Some(PacketConfig::Corner { segments: Some(s), .. }) => {
                for w in s {
                    in_circle("corner", w.lo, w.hi)?;
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn build_field(&self) -> Result<VelocityField<f64>> {
        Ok(match &self.field {
            FieldConfig::Constant { a, b } => VelocityField::constant(*a, *b)?,
            FieldConfig::Tangent { a, b } => VelocityField::tangent(*a, TrigPoly::new(b.c0, b.cos.clone(), b.sin.clone()))?,
            FieldConfig::Corner { a0, eps } => VelocityField::corner(*a0, *eps)?,
        })
    }

    pub fn spectrum_options(&self) -> SpectrumOptions<f64> {
        let q = &self.quadrature;
        let mut o = SpectrumOptions::<f64>::default();
        if let Some(v) = q.oracle {
            o.oracle = v;
        }
        if let Some(v) = q.u_max {
            o.u_max = v;
        }
        if let Some(v) = q.eta_panels {
            o.eta_panels = v;
        }
        if let Some(v) = q.m_max {
            o.batch.m_max = v;
        }
        if let Some(v) = q.n_phi {
            o.batch.n_phi = v;
        }
        if let Some(v) = q.parseval_tail {
            o.parseval_tail = (v >= 0.0).then_some(v);
        }
        if let Some(v) = q.rel_tol {
            o.kg.radial = o.kg.radial.with_rel_tol(v);
            o.batch.radial = o.batch.radial.with_rel_tol(v);
        }
        if let Some(v) = q.abs_tol {
            o.kg.radial = o.kg.radial.with_abs_tol(v);
            o.batch.radial = o.batch.radial.with_abs_tol(v);
        }
        if !self.sweeps.eta.is_empty() {
            o.density_grid = self.sweeps.eta.clone();
        }
        o
    }
}

/// The packet of a config, with the smoothed base curve for corner packets.
pub struct BuiltPacket {
    pub spec: PacketSpec<f64>,
    pub base: Option<Arc<SmoothBaseCurve<f64>>>,
}

fn profile(w: &WindowConfig) -> Result<AngularProfile<f64>> {
    let p = w.profile.clone().unwrap_or(BumpConfig { lo: None, hi: None, amp: 1.0 });
    Ok(AngularProfile::bump(p.lo.unwrap_or(w.lo), p.hi.unwrap_or(w.hi), p.amp)?)
}

pub fn build_packet(config: &RunConfig, field: &VelocityField<f64>) -> Result<BuiltPacket> {
    let Some(packet) = &config.packet else {
        bail!("config has no packet");
    };
    Ok(match packet {
        PacketConfig::Simple { m, eta0, epsilon, a } => {
            BuiltPacket { spec: PacketSpec::Simple(SimplePacket { m: *m, eta0: *eta0, eps: *epsilon, a: *a }), base: None }
        }
        PacketConfig::Tangent { eta0, epsilon, a, windows } => {
            let windows = windows
                .iter()
                .map(|w| {
                    Ok(TangentWindow {
                        lo: w.lo,
                        hi: w.hi,
                        profile: profile(w)?,
                        alpha: w.alpha.context("tangent window needs alpha")?,
                        d: w.d,
                        anchor: w.anchor,
                    })
                })
                .collect::<Result<_>>()?;
            BuiltPacket { spec: PacketSpec::Tangent(TangentPacket { eta0: *eta0, eps: *epsilon, a: *a, windows }), base: None }
        }
        PacketConfig::Corner { eta0, epsilon, a, alpha, segments, start_margin, corner_margin } => {
            ensure!(matches!(field.kind(), FieldKind::Corner { .. }), "corner packet needs a corner field");
            let h = horizon(field)?;
            let base = corner_base_curve(field, &h, *start_margin, *corner_margin)?;
            let windows = match segments {
                Some(s) => s.clone(),
                None => {
                    let (w1, w2) = (&base.windows[0], &base.windows[1]);
                    vec![
                        WindowConfig { lo: w1.hi - 1.1, hi: w1.hi - 0.1, profile: None, alpha: None, d: 0.0, anchor: None },
                        WindowConfig { lo: w2.lo + 0.1, hi: w2.lo + 1.1, profile: None, alpha: None, d: 0.0, anchor: None },
                    ]
                }
            };
            if let Some(al) = alpha {
                ensure!(al.len() == windows.len(), "corner alpha has {} entries for {} segments", al.len(), windows.len());
            }
            let segments = windows
                .iter()
                .enumerate()
                .map(|(j, w)| {
                    let alpha = alpha.as_ref().map(|v| v[j]).or(w.alpha).context("corner segment needs alpha")?;
                    Ok(CornerSegment { lo: w.lo, hi: w.hi, profile: profile(w)?, alpha, d: w.d, anchor: w.anchor })
                })
                .collect::<Result<_>>()?;
            BuiltPacket {
                spec: PacketSpec::Corner(CornerPacket { eta0: *eta0, eps: *epsilon, a: *a, segments }),
                base: Some(Arc::new(base)),
            }
        }
    })
}
