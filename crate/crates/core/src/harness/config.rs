//! Experiment configuration and its flat `key = value` file format.
//!
//! Blank lines and lines starting with `#` are ignored. Unknown keys are
//! errors. Keys not present keep the defaults of the selected sweep kind.

use std::fmt;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::channel::NoiseParams;
use crate::optics::VcselParams;
use crate::rsma::Scheme;
use crate::scene::{default_ap_positions, AdrConfig, RoomConfig};

use super::HarnessError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("config `{key}`: {message}")]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            message: message.into(),
        }
    }
}

impl From<crate::Error> for ConfigError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::InvalidParameter { field, reason } => ConfigError::new(field, reason),
            other => ConfigError::new("scene", other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// Transmit SNR in dB.
    Snr,
    /// VCSEL beam waist in μm.
    Waist,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::Snr => "snr",
            SweepKind::Waist => "waist",
        }
    }

    /// Value written to the `sweep_param` CSV column.
    pub fn param(self) -> &'static str {
        match self {
            SweepKind::Snr => "snr_db",
            SweepKind::Waist => "waist_um",
        }
    }

    pub fn axis_label(self) -> &'static str {
        match self {
            SweepKind::Snr => "SNR (dB)",
            SweepKind::Waist => "Beam waist W0 (um)",
        }
    }

    /// File stem used for outputs, e.g. `snr_sweep`.
    pub fn stem(self) -> &'static str {
        match self {
            SweepKind::Snr => "snr_sweep",
            SweepKind::Waist => "waist_sweep",
        }
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelMode {
    /// Strongest user has unit channel norm and σ² = 1, so SNR = P_T.
    Normalized,
    /// Physical gains and noise; SNR is referenced to a user directly below
    /// an access point at the reference waist.
    Physical,
}

impl ChannelMode {
    pub fn name(self) -> &'static str {
        match self {
            ChannelMode::Normalized => "normalized",
            ChannelMode::Physical => "physical",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub room: RoomConfig,
    pub ap_count: usize,
    pub users: usize,
    pub adr: AdrConfig,
    pub vcsel: VcselParams,
    pub noise: NoiseParams,
    pub sweep: SweepKind,
    /// SNR values (dB) or beam waists (μm), strictly ascending.
    pub grid: Vec<f64>,
    pub drops: usize,
    pub seed: u64,
    pub schemes: Vec<Scheme>,
    pub channel_mode: ChannelMode,
    /// Transmit SNR of the reference user in physical mode, dB.
    pub reference_snr_db: f64,
    /// Beam waist at which the physical-mode reference power is fixed, μm.
    pub reference_waist_um: f64,
    /// Worker threads; `None` uses every available core.
    pub threads: Option<usize>,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::for_sweep(SweepKind::Snr)
    }
}

impl ExperimentConfig {
    pub fn for_sweep(sweep: SweepKind) -> Self {
        let (grid, channel_mode) = match sweep {
            SweepKind::Snr => (vec![5.0, 10.0, 15.0, 20.0, 25.0], ChannelMode::Normalized),
            SweepKind::Waist => (
                vec![5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
                ChannelMode::Physical,
            ),
        };
        Self {
            room: RoomConfig::default(),
            ap_count: 4,
            users: 10,
            adr: AdrConfig::default(),
            vcsel: VcselParams::default(),
            noise: NoiseParams::default(),
            sweep,
            grid,
            drops: 200,
            seed: 42,
            schemes: Scheme::ALL.to_vec(),
            channel_mode,
            reference_snr_db: 20.0,
            reference_waist_um: 5.0,
            threads: None,
            out_dir: PathBuf::from("results"),
        }
    }

    /// Parses a config file body. The `sweep` key, when present, selects the
    /// defaults the remaining keys override.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let sweep = match parse_pairs(text)?.iter().find(|(k, _)| k == "sweep") {
            Some((_, v)) => parse_sweep(v)?,
            None => SweepKind::Snr,
        };
        Self::parse_as(text, sweep)
    }

    /// Parses a config file for a known sweep kind; a `sweep` key naming a
    /// different kind is an error.
    pub fn parse_as(text: &str, sweep: SweepKind) -> Result<Self, ConfigError> {
        let pairs = parse_pairs(text)?;
        if let Some((_, v)) = pairs.iter().find(|(k, _)| k == "sweep") {
            let named = parse_sweep(v)?;
            if named != sweep {
                return Err(ConfigError::new(
                    "sweep",
                    format!(
                        "file configures a `{named}` sweep but a `{sweep}` sweep was requested"
                    ),
                ));
            }
        }
        let mut cfg = Self::for_sweep(sweep);
        for (k, v) in &pairs {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path, sweep: SweepKind) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Ok(Self::parse_as(&text, sweep)?)
    }

    /// Sets one key. Physical quantities use the units in the key name.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let num = |v: &str| -> Result<f64, ConfigError> {
            v.trim()
                .parse::<f64>()
                .map_err(|_| ConfigError::new(key, format!("expected a number, got `{v}`")))
        };
        let count = |v: &str| -> Result<usize, ConfigError> {
            v.trim().parse::<usize>().map_err(|_| {
                ConfigError::new(key, format!("expected a nonnegative integer, got `{v}`"))
            })
        };
        match key {
            "sweep" => {
                let kind = parse_sweep(value)?;
                if kind != self.sweep {
                    let keep = self.clone();
                    *self = Self {
                        room: keep.room,
                        ap_count: keep.ap_count,
                        users: keep.users,
                        adr: keep.adr,
                        vcsel: keep.vcsel,
                        noise: keep.noise,
                        drops: keep.drops,
                        seed: keep.seed,
                        schemes: keep.schemes,
                        threads: keep.threads,
                        out_dir: keep.out_dir,
                        ..Self::for_sweep(kind)
                    };
                }
            }
            "grid" => {
                self.grid = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(num)
                    .collect::<Result<_, _>>()?
            }
            "drops" => self.drops = count(value)?,
            "seed" => {
                self.seed = value.trim().parse().map_err(|_| {
                    ConfigError::new(key, format!("expected an unsigned integer, got `{value}`"))
                })?
            }
            "schemes" => {
                self.schemes = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.parse::<Scheme>().map_err(ConfigError::from))
                    .collect::<Result<_, _>>()?
            }
            "channel_mode" => {
                self.channel_mode = match value.trim() {
                    "normalized" => ChannelMode::Normalized,
                    "physical" => ChannelMode::Physical,
                    other => {
                        return Err(ConfigError::new(
                            key,
                            format!("expected `normalized` or `physical`, got `{other}`"),
                        ))
                    }
                }
            }
            "threads" => {
                self.threads = match value.trim() {
                    "" | "auto" => None,
                    v => Some(count(v)?),
                }
            }
            "out" => self.out_dir = PathBuf::from(value.trim()),
            "aps" => self.ap_count = count(value)?,
            "users" => self.users = count(value)?,
            "room.width_m" => self.room.width_m = num(value)?,
            "room.length_m" => self.room.length_m = num(value)?,
            "room.height_m" => self.room.height_m = num(value)?,
            "room.floor_height_m" => self.room.floor_height_m = num(value)?,
            "adr.photodiodes" => self.adr.photodiodes = count(value)?,
            "adr.area_mm2" => self.adr.area_m2 = num(value)? * 1e-6,
            "adr.fov_deg" => self.adr.fov_deg = num(value)?,
            "adr.tilt_deg" => self.adr.tilt_deg = num(value)?,
            "adr.responsivity" => self.adr.responsivity = num(value)?,
            "adr.filter_gain" => self.adr.filter_gain = num(value)?,
            "vcsel.waist_um" => self.vcsel.waist_m = num(value)? * 1e-6,
            "vcsel.wavelength_nm" => self.vcsel.wavelength_m = num(value)? * 1e-9,
            "vcsel.refractive_index" => self.vcsel.refractive_index = num(value)?,
            "vcsel.power_w" => self.vcsel.power_w = num(value)?,
            "bandwidth_hz" => {
                let b = num(value)?;
                self.vcsel.bandwidth_hz = b;
                self.noise.bandwidth_hz = b;
            }
            "noise.nsd_pa" => self.noise.nsd = num(value)? * 1e-12,
            "noise.shot" => {
                self.noise.include_shot = match value.trim() {
                    "true" | "on" | "yes" => true,
                    "false" | "off" | "no" => false,
                    other => {
                        return Err(ConfigError::new(
                            key,
                            format!("expected true or false, got `{other}`"),
                        ))
                    }
                }
            }
            "reference.snr_db" => self.reference_snr_db = num(value)?,
            "reference.waist_um" => self.reference_waist_um = num(value)?,
            _ => return Err(ConfigError::new(key, "unknown key")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.room.validate()?;
        self.adr.validate()?;
        self.vcsel.validate()?;
        self.noise.validate()?;
        default_ap_positions(&self.room, self.ap_count)
            .map_err(|e| ConfigError::new("aps", e.to_string()))?;
        if self.users == 0 {
            return Err(ConfigError::new("users", "must be >= 1"));
        }
        if self.drops == 0 {
            return Err(ConfigError::new("drops", "must be >= 1"));
        }
        if self.grid.is_empty() {
            return Err(ConfigError::new("grid", "must not be empty"));
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            return Err(ConfigError::new("grid", "values must be finite"));
        }
        if !self.grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(ConfigError::new(
                "grid",
                "values must be strictly ascending",
            ));
        }
        if self.sweep == SweepKind::Waist {
            if self.grid[0] <= 0.0 {
                return Err(ConfigError::new("grid", "beam waists must be > 0"));
            }
            if self.channel_mode != ChannelMode::Physical {
                return Err(ConfigError::new(
                    "channel_mode",
                    "a waist sweep needs physical channels",
                ));
            }
        }
        if self.schemes.is_empty() {
            return Err(ConfigError::new("schemes", "must name at least one scheme"));
        }
        for (i, s) in self.schemes.iter().enumerate() {
            if self.schemes[..i].contains(s) {
                return Err(ConfigError::new("schemes", format!("`{s}` listed twice")));
            }
        }
        if !self.reference_snr_db.is_finite() {
            return Err(ConfigError::new("reference.snr_db", "must be finite"));
        }
        if !(self.reference_waist_um.is_finite() && self.reference_waist_um > 0.0) {
            return Err(ConfigError::new("reference.waist_um", "must be > 0"));
        }
        if self.threads == Some(0) {
            return Err(ConfigError::new("threads", "must be >= 1"));
        }
        Ok(())
    }

    /// Every result-affecting setting as `key = value` lines in a fixed
    /// order. Thread count and output directory are excluded.
    pub fn canonical(&self) -> String {
        let schemes: Vec<_> = self.schemes.iter().map(|s| s.name()).collect();
        let grid: Vec<_> = self.grid.iter().map(|v| format!("{v:?}")).collect();
        let lines = [
            ("sweep", self.sweep.name().to_string()),
            ("grid", grid.join(",")),
            ("drops", self.drops.to_string()),
            ("seed", self.seed.to_string()),
            ("schemes", schemes.join(",")),
            ("channel_mode", self.channel_mode.name().to_string()),
            ("aps", self.ap_count.to_string()),
            ("users", self.users.to_string()),
            ("room.width_m", format!("{:?}", self.room.width_m)),
            ("room.length_m", format!("{:?}", self.room.length_m)),
            ("room.height_m", format!("{:?}", self.room.height_m)),
            (
                "room.floor_height_m",
                format!("{:?}", self.room.floor_height_m),
            ),
            ("adr.photodiodes", self.adr.photodiodes.to_string()),
            ("adr.area_m2", format!("{:?}", self.adr.area_m2)),
            ("adr.fov_deg", format!("{:?}", self.adr.fov_deg)),
            ("adr.tilt_deg", format!("{:?}", self.adr.tilt_deg)),
            ("adr.responsivity", format!("{:?}", self.adr.responsivity)),
            ("adr.filter_gain", format!("{:?}", self.adr.filter_gain)),
            ("vcsel.waist_m", format!("{:?}", self.vcsel.waist_m)),
            (
                "vcsel.wavelength_m",
                format!("{:?}", self.vcsel.wavelength_m),
            ),
            (
                "vcsel.refractive_index",
                format!("{:?}", self.vcsel.refractive_index),
            ),
            ("vcsel.power_w", format!("{:?}", self.vcsel.power_w)),
            (
                "vcsel.bandwidth_hz",
                format!("{:?}", self.vcsel.bandwidth_hz),
            ),
            ("noise.nsd", format!("{:?}", self.noise.nsd)),
            (
                "noise.bandwidth_hz",
                format!("{:?}", self.noise.bandwidth_hz),
            ),
            ("noise.shot", self.noise.include_shot.to_string()),
            ("noise.charge", format!("{:?}", self.noise.charge)),
            ("reference.snr_db", format!("{:?}", self.reference_snr_db)),
            (
                "reference.waist_um",
                format!("{:?}", self.reference_waist_um),
            ),
        ];
        lines.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    /// First 16 hex digits of the SHA-256 of [`Self::canonical`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

fn parse_sweep(v: &str) -> Result<SweepKind, ConfigError> {
    match v.trim() {
        "snr" => Ok(SweepKind::Snr),
        "waist" => Ok(SweepKind::Waist),
        other => Err(ConfigError::new(
            "sweep",
            format!("expected `snr` or `waist`, got `{other}`"),
        )),
    }
}

fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            ConfigError::new(
                format!("line {}", n + 1),
                format!("expected `key = value`, got `{line}`"),
            )
        })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}
