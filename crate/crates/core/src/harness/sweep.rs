//! Seeded Monte-Carlo sweeps.
//!
//! Every drop is an independent work unit seeded by `(master seed, drop
//! index)`. Drops may run on any number of threads; results are collected in
//! drop order and aggregated sequentially, so the output does not depend on
//! the degree of parallelism.

use nalgebra::Point3;
use rayon::prelude::*;

use crate::channel::{build_channel_matrix, normalize_channel, ChannelMatrix};
use crate::optics::VcselParams;
use crate::rsma::Scheme;
use crate::scene::{default_ap_positions, sample_user_positions, ApLayout, Scene, UserDrop};

use super::config::{ChannelMode, ExperimentConfig, SweepKind};
use super::HarnessError;

/// Seed of drop `index` under `master`.
pub fn drop_seed(master: u64, index: usize) -> u64 {
    master.wrapping_add(index as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scheme: Scheme,
    pub value: f64,
    /// bits/s/Hz
    pub mean: f64,
    pub stderr: f64,
    pub drops: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub kind: SweepKind,
    /// Ordered by scheme (config order), then by sweep value.
    pub rows: Vec<SweepRow>,
    pub provenance: Provenance,
}

impl SweepResult {
    pub fn row(&self, scheme: Scheme, value: f64) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.scheme == scheme && r.value == value)
    }

    pub fn series(&self, scheme: Scheme) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| r.scheme == scheme).collect()
    }
}

/// Per-drop sum rates, indexed `[drop][scheme][grid point]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DropTable {
    pub kind: SweepKind,
    pub schemes: Vec<Scheme>,
    pub grid: Vec<f64>,
    pub rates: Vec<Vec<Vec<f64>>>,
}

impl DropTable {
    pub fn rate(&self, drop: usize, scheme: Scheme, point: usize) -> Option<f64> {
        let s = self.schemes.iter().position(|&x| x == scheme)?;
        self.rates.get(drop)?.get(s)?.get(point).copied()
    }
}

/// Total transmit power that gives a user directly below the first access
/// point, at the reference beam waist, a transmit SNR of `snr_db`.
pub fn reference_power(cfg: &ExperimentConfig, snr_db: f64) -> Result<f64, HarnessError> {
    let aps = default_ap_positions(&cfg.room, cfg.ap_count)?;
    let anchor = aps.positions()[0];
    let user = UserDrop::from_positions(
        &cfg.room,
        vec![Point3::new(anchor.x, anchor.y, cfg.room.floor_height_m)],
        0,
    )?;
    let vcsel = cfg.vcsel.with_waist(cfg.reference_waist_um * 1e-6);
    let cm = build_channel_matrix(
        &Scene::new(cfg.room, aps, user),
        &cfg.adr,
        &vcsel,
        &cfg.noise,
    )?;
    let g = cm.row_norm(0);
    Ok(db_to_linear(snr_db) * cm.sigma2() / (g * g))
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

struct DropContext<'a> {
    cfg: &'a ExperimentConfig,
    aps: ApLayout,
    /// Physical-mode power for one unit of transmit SNR.
    unit_power: f64,
}

impl DropContext<'_> {
    fn scene(&self, index: usize) -> Result<Scene, HarnessError> {
        let users = sample_user_positions(
            drop_seed(self.cfg.seed, index),
            self.cfg.users,
            &self.cfg.room,
        )?;
        Ok(Scene::new(self.cfg.room, self.aps.clone(), users))
    }

    /// `None` when no user receives any signal.
    fn channel(
        &self,
        scene: &Scene,
        vcsel: &VcselParams,
    ) -> Result<Option<ChannelMatrix>, HarnessError> {
        let cm = build_channel_matrix(scene, &self.cfg.adr, vcsel, &self.cfg.noise)?;
        if cm.max_row_norm() == 0.0 {
            return Ok(None);
        }
        Ok(Some(match self.cfg.channel_mode {
            ChannelMode::Normalized => normalize_channel(&cm)?,
            ChannelMode::Physical => cm,
        }))
    }

    fn rates(&self, cm: Option<&ChannelMatrix>, p_total: f64) -> Result<Vec<f64>, HarnessError> {
        let Some(cm) = cm else {
            return Ok(vec![0.0; self.cfg.schemes.len()]);
        };
        self.cfg
            .schemes
            .iter()
            .map(|s| s.sum_rate(cm, p_total).map_err(HarnessError::from))
            .collect()
    }

    /// `[scheme][grid point]` rates for one drop.
    fn run(&self, index: usize) -> Result<Vec<Vec<f64>>, HarnessError> {
        let scene = self.scene(index)?;
        let mut by_point = Vec::with_capacity(self.cfg.grid.len());
        match self.cfg.sweep {
            SweepKind::Snr => {
                let cm = self.channel(&scene, &self.cfg.vcsel)?;
                for &snr in &self.cfg.grid {
                    let p_total = match self.cfg.channel_mode {
                        ChannelMode::Normalized => db_to_linear(snr),
                        ChannelMode::Physical => db_to_linear(snr) * self.unit_power,
                    };
                    by_point.push(self.rates(cm.as_ref(), p_total)?);
                }
            }
            SweepKind::Waist => {
                let p_total = db_to_linear(self.cfg.reference_snr_db) * self.unit_power;
                for &waist_um in &self.cfg.grid {
                    let cm = self.channel(&scene, &self.cfg.vcsel.with_waist(waist_um * 1e-6))?;
                    by_point.push(self.rates(cm.as_ref(), p_total)?);
                }
            }
        }
        // Transpose to [scheme][point].
        Ok((0..self.cfg.schemes.len())
            .map(|s| by_point.iter().map(|r| r[s]).collect())
            .collect())
    }
}

/// Evaluates every drop and returns the raw per-drop rates.
pub fn run_drops(cfg: &ExperimentConfig) -> Result<DropTable, HarnessError> {
    cfg.validate()?;
    let ctx = DropContext {
        cfg,
        aps: default_ap_positions(&cfg.room, cfg.ap_count)?,
        unit_power: match cfg.channel_mode {
            ChannelMode::Physical => reference_power(cfg, 0.0)?,
            ChannelMode::Normalized => 1.0,
        },
    };
    let work = || {
        (0..cfg.drops)
            .into_par_iter()
            .map(|i| ctx.run(i))
            .collect::<Result<Vec<_>, _>>()
    };
    let rates = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| HarnessError::ThreadPool(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    Ok(DropTable {
        kind: cfg.sweep,
        schemes: cfg.schemes.clone(),
        grid: cfg.grid.clone(),
        rates,
    })
}

/// Mean and standard error of the mean, summed in the given order.
fn mean_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn aggregate(cfg: &ExperimentConfig, table: &DropTable) -> SweepResult {
    let mut rows = Vec::with_capacity(table.schemes.len() * table.grid.len());
    for (s, &scheme) in table.schemes.iter().enumerate() {
        for (p, &value) in table.grid.iter().enumerate() {
            let samples: Vec<f64> = table.rates.iter().map(|d| d[s][p]).collect();
            let (mean, stderr) = mean_stderr(&samples);
            rows.push(SweepRow {
                scheme,
                value,
                mean,
                stderr,
                drops: samples.len(),
            });
        }
    }
    SweepResult {
        kind: table.kind,
        rows,
        provenance: Provenance {
            config_hash: cfg.hash(),
            seed: cfg.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
    }
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepResult, HarnessError> {
    let table = run_drops(cfg)?;
    Ok(aggregate(cfg, &table))
}

pub fn run_snr_sweep(cfg: &ExperimentConfig) -> Result<SweepResult, HarnessError> {
    expect_kind(cfg, SweepKind::Snr)?;
    run_sweep(cfg)
}

pub fn run_waist_sweep(cfg: &ExperimentConfig) -> Result<SweepResult, HarnessError> {
    expect_kind(cfg, SweepKind::Waist)?;
    run_sweep(cfg)
}

fn expect_kind(cfg: &ExperimentConfig, kind: SweepKind) -> Result<(), HarnessError> {
    if cfg.sweep != kind {
        return Err(super::ConfigError::new(
            "sweep",
            format!("expected a `{kind}` sweep, got `{}`", cfg.sweep),
        )
        .into());
    }
    Ok(())
}

/// Relative gains between schemes at one sweep point, in percent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainReport {
    pub value: f64,
    pub opt_over_conv_pct: Option<f64>,
    pub conv_over_oma_pct: Option<f64>,
    pub opt_over_oma_pct: Option<f64>,
}

pub fn relative_gains(result: &SweepResult) -> Vec<GainReport> {
    let mut values: Vec<f64> = result.rows.iter().map(|r| r.value).collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let gain = |a: Scheme, b: Scheme, v: f64| {
        let (x, y) = (result.row(a, v)?, result.row(b, v)?);
        Some(100.0 * (x.mean - y.mean) / y.mean)
    };
    values
        .into_iter()
        .map(|v| GainReport {
            value: v,
            opt_over_conv_pct: gain(Scheme::OptRs, Scheme::ConvRs, v),
            conv_over_oma_pct: gain(Scheme::ConvRs, Scheme::Oma, v),
            opt_over_oma_pct: gain(Scheme::OptRs, Scheme::Oma, v),
        })
        .collect()
}
