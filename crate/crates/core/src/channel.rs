//! Line-of-sight channel matrix and receiver noise.
//!
//! Channel entries are electrical gains per unit transmit signal with the
//! receiver responsivity folded in, so the SINR expressions in [`crate::rsma`]
//! apply directly in the electrical domain.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Point3};

use crate::error::{invalid, Error, Result};
use crate::optics::{propagate, received_power_offaxis, VcselParams};
use crate::scene::{fov_accept, photodiode_normals, ray_geometry, AdrConfig, Scene};

pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    h: DMatrix<f64>,
    sigma2: f64,
    scale: f64,
}

impl ChannelMatrix {
    /// `h` is K×L (row k is user k's channel vector).
    pub fn new(h: DMatrix<f64>, sigma2: f64) -> Result<Self> {
        if h.nrows() == 0 || h.ncols() == 0 {
            return Err(Error::Dimension(format!(
                "empty {}x{} channel",
                h.nrows(),
                h.ncols()
            )));
        }
        if let Some(bad) = h.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(invalid(
                "h",
                format!("entries must be finite and >= 0, found {bad}"),
            ));
        }
        if !(sigma2.is_finite() && sigma2 > 0.0) {
            return Err(invalid(
                "sigma2",
                format!("noise variance must be > 0, got {sigma2}"),
            ));
        }
        Ok(Self {
            h,
            sigma2,
            scale: 1.0,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>], sigma2: f64) -> Result<Self> {
        let k = rows.len();
        let l = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != l) {
            return Err(Error::Dimension("ragged channel rows".into()));
        }
        Self::new(DMatrix::from_fn(k, l, |i, j| rows[i][j]), sigma2)
    }

    pub fn h(&self) -> &DMatrix<f64> {
        &self.h
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// Normalization factor applied by [`normalize_channel`], 1 otherwise.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn users(&self) -> usize {
        self.h.nrows()
    }

    pub fn aps(&self) -> usize {
        self.h.ncols()
    }

    pub fn row_norm(&self, k: usize) -> f64 {
        stable_norm(self.h.row(k).iter().copied())
    }

    pub fn max_row_norm(&self) -> f64 {
        (0..self.users())
            .map(|k| self.row_norm(k))
            .fold(0.0, f64::max)
    }

    /// `h → c·h`, `σ² → c²·σ²`; leaves every SINR unchanged.
    pub fn rescaled(&self, c: f64) -> Result<Self> {
        Self::new(&self.h * c, self.sigma2 * c * c)
    }
}

/// Euclidean norm that survives entries near the underflow threshold.
pub(crate) fn stable_norm(values: impl IntoIterator<Item = f64>) -> f64 {
    let values: Vec<f64> = values.into_iter().collect();
    let big = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if big == 0.0 || !big.is_finite() {
        return big;
    }
    big * values.iter().map(|v| (v / big).powi(2)).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    /// Noise current spectral density, A/√Hz.
    pub nsd: f64,
    pub bandwidth_hz: f64,
    pub include_shot: bool,
    pub charge: f64,
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self {
            nsd: 4.47e-12,
            bandwidth_hz: 5e9,
            include_shot: true,
            charge: ELEMENTARY_CHARGE,
        }
    }
}

impl NoiseParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.nsd.is_finite() && self.nsd > 0.0) {
            return Err(invalid(
                "noise.nsd",
                format!("must be > 0, got {}", self.nsd),
            ));
        }
        if !(self.bandwidth_hz.is_finite() && self.bandwidth_hz > 0.0) {
            return Err(invalid(
                "bandwidth_hz",
                format!("must be > 0, got {}", self.bandwidth_hz),
            ));
        }
        Ok(())
    }
}

/// Thermal plus (optionally) shot noise variance, A².
pub fn noise_variance(noise: &NoiseParams, received_power_total: f64, responsivity: f64) -> f64 {
    let thermal = noise.nsd * noise.nsd * noise.bandwidth_hz;
    if noise.include_shot {
        thermal + 2.0 * noise.charge * responsivity * received_power_total * noise.bandwidth_hz
    } else {
        thermal
    }
}

/// Radius of one circular photodiode of area `A_rec / M`.
pub fn photodiode_radius(adr: &AdrConfig) -> f64 {
    (adr.photodiode_area() / PI).sqrt()
}

/// Best-photodiode link between one user and one AP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    /// Electrical gain per unit transmit signal.
    pub gain: f64,
    /// DC optical power reaching the selected photodiode, W.
    pub optical_power_w: f64,
    /// Index of the selected photodiode, `None` when every one rejects the ray.
    pub photodiode: Option<usize>,
}

pub fn link(
    user: &Point3<f64>,
    ap: &Point3<f64>,
    adr: &AdrConfig,
    vcsel: &VcselParams,
) -> Result<Link> {
    adr.validate()?;
    let geom = ray_geometry(user, ap)?;
    let beam = propagate(vcsel, geom.d_vertical)?;
    let r_m = photodiode_radius(adr);
    let mut best = Link {
        gain: 0.0,
        optical_power_w: 0.0,
        photodiode: None,
    };
    for (m, normal) in photodiode_normals(adr).iter().enumerate() {
        let inc = fov_accept(normal, &geom.incoming_dir, adr.fov_deg)?;
        if !inc.accepted {
            continue;
        }
        let cos = inc.cos_incidence.clamp(0.0, 1.0);
        let captured = received_power_offaxis(vcsel, geom.r_offset, r_m, beam.radius_m, cos)?;
        let fraction = (captured / vcsel.power_w).min(1.0);
        let gain = adr.effective_responsivity() * fraction;
        if best.photodiode.is_none() || gain > best.gain {
            best = Link {
                gain,
                optical_power_w: fraction * vcsel.power_w,
                photodiode: Some(m),
            };
        }
    }
    Ok(best)
}

pub fn channel_gain(
    user: &Point3<f64>,
    ap: &Point3<f64>,
    adr: &AdrConfig,
    vcsel: &VcselParams,
) -> Result<f64> {
    Ok(link(user, ap, adr, vcsel)?.gain)
}

/// Builds `h[k][l] = channel_gain(user k, AP l)`. The shot-noise term uses
/// the per-user aggregate received optical power averaged over users.
pub fn build_channel_matrix(
    scene: &Scene,
    adr: &AdrConfig,
    vcsel: &VcselParams,
    noise: &NoiseParams,
) -> Result<ChannelMatrix> {
    noise.validate()?;
    vcsel.validate()?;
    let users = scene.users.positions();
    let aps = scene.aps.positions();
    if users.is_empty() || aps.is_empty() {
        return Err(Error::Dimension(format!(
            "{} users x {} access points",
            users.len(),
            aps.len()
        )));
    }
    let mut h = DMatrix::zeros(users.len(), aps.len());
    let mut optical_total = 0.0;
    for (k, user) in users.iter().enumerate() {
        for (l, ap) in aps.iter().enumerate() {
            let lk = link(user, ap, adr, vcsel)?;
            h[(k, l)] = lk.gain;
            optical_total += lk.optical_power_w;
        }
    }
    let mean_optical = optical_total / users.len() as f64;
    let sigma2 = noise_variance(noise, mean_optical, adr.effective_responsivity());
    ChannelMatrix::new(h, sigma2)
}

/// Divides `h` by its largest row norm and sets `σ² = 1`, so that the
/// transmit SNR `P_T/σ²` equals `P_T` and the strongest user sees unit gain.
pub fn normalize_channel(cm: &ChannelMatrix) -> Result<ChannelMatrix> {
    let g_max = cm.max_row_norm();
    if g_max == 0.0 {
        return Err(Error::ZeroChannel);
    }
    let mut out = ChannelMatrix::new(cm.h.map(|v| v / g_max), 1.0)?;
    out.scale = g_max;
    Ok(out)
}
