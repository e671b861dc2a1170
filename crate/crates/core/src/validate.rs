//! Self-checks of the closed-form models against independent numerical
//! oracles. Backs the `validate` CLI subcommand.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::ChannelMatrix;
use crate::optics::{
    beam_radius, rayleigh_distance, received_power_centered, received_power_offaxis, VcselParams,
};
use crate::quadrature::{integrate_2d, Tolerance};
use crate::rsma::{identity_fixture, private_precoders, rs_sum_rate};

/// Distance from the VCSELs down to the communication floor in the default
/// room, m.
pub const FLOOR_DISTANCE_M: f64 = 2.15;
/// Radius of one 5 mm² photodiode, m.
pub const PHOTODIODE_RADIUS_M: f64 = 1.2616e-3;

/// Numerically integrates the Gaussian irradiance over a disc of radius
/// `r_m` whose center is `r_offset` from the beam axis, in polar coordinates
/// about the disc center.
pub fn disc_power_quadrature(
    p: &VcselParams,
    r_offset: f64,
    r_m: f64,
    w_d: f64,
    rel_tol: f64,
) -> f64 {
    let peak = 2.0 * p.power_w / (PI * w_d * w_d);
    integrate_2d(
        |theta, rho| {
            let (s, c) = theta.sin_cos();
            let (x, y) = (r_offset + rho * c, rho * s);
            peak * (-2.0 * (x * x + y * y) / (w_d * w_d)).exp() * rho
        },
        0.0,
        2.0 * PI,
        |_| 0.0,
        |_| r_m,
        Tolerance {
            rel: rel_tol,
            abs: 0.0,
        },
    )
    .value
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }
}

fn relative(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub fn centered_capture_checks() -> Vec<Check> {
    [5.0, 10.0, 20.0, 30.0]
        .into_iter()
        .map(|waist_um| {
            let p = VcselParams::default().with_waist(waist_um * 1e-6);
            let w_d = beam_radius(&p, FLOOR_DISTANCE_M).expect("valid beam");
            let closed = received_power_centered(&p, PHOTODIODE_RADIUS_M, w_d).expect("valid capture");
            let numeric = disc_power_quadrature(&p, 0.0, PHOTODIODE_RADIUS_M, w_d, 1e-12);
            let err = relative(closed, numeric);
            Check::new(
                format!("centered capture closed form vs quadrature, W0 = {waist_um} um"),
                err <= 1e-9,
                format!("closed {closed:.12e} W, quadrature {numeric:.12e} W, rel err {err:.2e} (tol 1e-9)"),
            )
        })
        .collect()
}

pub fn offaxis_capture_check() -> Check {
    let p = VcselParams {
        power_w: 1.0,
        ..VcselParams::default()
    };
    let w_d = beam_radius(&p, FLOOR_DISTANCE_M).expect("valid beam");
    let sampled =
        received_power_offaxis(&p, w_d, PHOTODIODE_RADIUS_M, w_d, 1.0).expect("valid capture");
    let numeric = disc_power_quadrature(&p, w_d, PHOTODIODE_RADIUS_M, w_d, 1e-12);
    let err = relative(sampled, numeric);
    Check::new(
        "off-axis center sampling vs quadrature at one spot radius",
        err <= 1e-2,
        format!(
            "sampled {sampled:.6e} W, quadrature {numeric:.6e} W, rel err {err:.2e} (tol 1e-2)"
        ),
    )
}

pub fn rayleigh_check() -> Check {
    let got = rayleigh_distance(&VcselParams::default()).expect("valid params");
    // π·(5 μm)²/850 nm evaluated to 30 digits.
    let reference = 9.239_978_392_911_157e-5;
    let err = relative(got, reference);
    let rounded = format!("{got:.3e}");
    Check::new(
        "Rayleigh distance, W0 = 5 um, 850 nm",
        err <= 1e-6 && rounded == "9.240e-5",
        format!("{got:.10e} m (rounds to {rounded}), rel err {err:.2e} (tol 1e-6)"),
    )
}

pub fn zero_forcing_check(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = DMatrix::from_fn(4, 4, |_, _| rng.random_range(0.05..1.0));
    let cm = ChannelMatrix::new(h, 1.0).expect("valid channel");
    let outcome = private_precoders(&cm, 0.0).map(|w| {
        let g = cm.h() * w;
        let mut worst: f64 = 0.0;
        for k in 0..4 {
            for j in 0..4 {
                if j != k {
                    worst = worst.max(g[(k, j)].abs() / g[(k, k)].abs());
                }
            }
        }
        worst
    });
    match outcome {
        Ok(worst) => Check::new(
            "zero-forcing cross-term suppression, random 4x4",
            worst <= 1e-9,
            format!("max |off-diagonal|/|diagonal| = {worst:.2e} (tol 1e-9)"),
        ),
        Err(e) => Check::new(
            "zero-forcing cross-term suppression, random 4x4",
            false,
            e.to_string(),
        ),
    }
}

pub fn identity_fixture_check() -> Check {
    match rs_sum_rate(&identity_fixture(), 0.5, 10.0) {
        Ok(ev) => Check::new(
            "identity-channel fixture, P_T = 10, alpha = 0.5",
            (ev.sum_rate - 4.3923).abs() <= 1e-4,
            format!(
                "R_c = {:.4}, R_p = {:.4}, R_RS = {:.4} bits/s/Hz (expected 4.3923)",
                ev.rate_common, ev.rate_private, ev.sum_rate
            ),
        ),
        Err(e) => Check::new(
            "identity-channel fixture, P_T = 10, alpha = 0.5",
            false,
            e.to_string(),
        ),
    }
}

pub fn run_checks() -> Vec<Check> {
    let mut checks = centered_capture_checks();
    checks.push(offaxis_capture_check());
    checks.push(rayleigh_check());
    checks.push(zero_forcing_check(2024));
    checks.push(identity_fixture_check());
    checks
}
