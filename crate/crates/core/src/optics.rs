//! Gaussian-beam propagation of a VCSEL and the optical power a circular
//! photodiode collects from it.

use std::f64::consts::PI;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VcselParams {
    /// Beam waist `W_0`, m.
    pub waist_m: f64,
    pub wavelength_m: f64,
    pub refractive_index: f64,
    /// Optical transmit power per access point, W.
    pub power_w: f64,
    pub bandwidth_hz: f64,
}

impl Default for VcselParams {
    fn default() -> Self {
        Self {
            waist_m: 5e-6,
            wavelength_m: 850e-9,
            refractive_index: 1.0,
            power_w: 10e-3,
            bandwidth_hz: 5e9,
        }
    }
}

impl VcselParams {
    pub fn with_waist(self, waist_m: f64) -> Self {
        Self { waist_m, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.waist_m.is_finite() && self.waist_m > 0.0) {
            return Err(invalid(
                "vcsel.waist",
                format!("must be > 0, got {}", self.waist_m),
            ));
        }
        if !(self.wavelength_m.is_finite() && self.wavelength_m > 0.0) {
            return Err(invalid(
                "vcsel.wavelength",
                format!("must be > 0, got {}", self.wavelength_m),
            ));
        }
        if !(self.refractive_index.is_finite() && self.refractive_index >= 1.0) {
            return Err(invalid(
                "vcsel.refractive_index",
                format!("must be >= 1, got {}", self.refractive_index),
            ));
        }
        if !(self.power_w.is_finite() && self.power_w > 0.0) {
            return Err(invalid(
                "vcsel.power_w",
                format!("must be > 0, got {}", self.power_w),
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

/// Beam state on a transverse plane at distance `distance_m` from the waist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamAtPlane {
    pub radius_m: f64,
    pub distance_m: f64,
    pub rayleigh_m: f64,
}

/// Rayleigh distance `π·W_0²·n / λ`.
pub fn rayleigh_distance(p: &VcselParams) -> Result<f64> {
    p.validate()?;
    Ok(PI * p.waist_m * p.waist_m * p.refractive_index / p.wavelength_m)
}

/// Beam radius `W_0·sqrt(1 + (d/d_Ra)²)` at distance `d` from the waist.
pub fn beam_radius(p: &VcselParams, d: f64) -> Result<f64> {
    Ok(propagate(p, d)?.radius_m)
}

pub fn propagate(p: &VcselParams, d: f64) -> Result<BeamAtPlane> {
    if !(d.is_finite() && d >= 0.0) {
        return Err(invalid("distance", format!("must be >= 0, got {d}")));
    }
    let rayleigh_m = rayleigh_distance(p)?;
    let radius_m = p.waist_m * (d / rayleigh_m).hypot(1.0);
    Ok(BeamAtPlane {
        radius_m,
        distance_m: d,
        rayleigh_m,
    })
}

/// Irradiance (W/m²) at radial distance `r` from the beam axis on a plane
/// where the beam radius is `w_d`.
pub fn intensity(p: &VcselParams, r: f64, w_d: f64) -> Result<f64> {
    check_spot(w_d)?;
    check_nonneg("r", r)?;
    Ok(peak_intensity(p.power_w, w_d) * (-2.0 * r * r / (w_d * w_d)).exp())
}

/// Power through a disc of radius `r_m` centered on the beam axis:
/// `P_t·(1 − exp(−2·r_m²/W_d²))`.
pub fn received_power_centered(p: &VcselParams, r_m: f64, w_d: f64) -> Result<f64> {
    check_spot(w_d)?;
    check_nonneg("r_m", r_m)?;
    Ok(p.power_w * -(-2.0 * r_m * r_m / (w_d * w_d)).exp_m1())
}

/// Power collected by a disc of radius `r_m` whose center sits `r_offset`
/// off the beam axis, tilted so its projected area is scaled by
/// `cos_incidence`. The irradiance is sampled at the aperture center, which
/// is accurate while `r_m ≪ w_d`.
pub fn received_power_offaxis(
    p: &VcselParams,
    r_offset: f64,
    r_m: f64,
    w_d: f64,
    cos_incidence: f64,
) -> Result<f64> {
    check_nonneg("r_m", r_m)?;
    if !(0.0..=1.0).contains(&cos_incidence) {
        return Err(invalid(
            "cos_incidence",
            format!("must lie in [0, 1], got {cos_incidence}"),
        ));
    }
    Ok(intensity(p, r_offset, w_d)? * PI * r_m * r_m * cos_incidence)
}

fn peak_intensity(power_w: f64, w_d: f64) -> f64 {
    2.0 * power_w / (PI * w_d * w_d)
}

fn check_spot(w_d: f64) -> Result<()> {
    if !(w_d.is_finite() && w_d > 0.0) {
        return Err(invalid(
            "w_d",
            format!("beam radius must be > 0, got {w_d}"),
        ));
    }
    Ok(())
}

fn check_nonneg(field: &'static str, v: f64) -> Result<()> {
    if !(v.is_finite() && v >= 0.0) {
        return Err(invalid(field, format!("must be >= 0, got {v}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vcsel(waist_um: f64) -> VcselParams {
        VcselParams::default().with_waist(waist_um * 1e-6)
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn rayleigh_distance_examples() {
        // Hand values carry 4 significant figures.
        assert!(rel(rayleigh_distance(&vcsel(5.0)).unwrap(), 9.240e-5) < 5e-4);
        assert!(rel(rayleigh_distance(&vcsel(30.0)).unwrap(), 3.326e-3) < 5e-4);
        let r1 = rayleigh_distance(&vcsel(7.0)).unwrap();
        let r2 = rayleigh_distance(&vcsel(14.0)).unwrap();
        assert!(rel(r2, 4.0 * r1) < 1e-14);
    }

    #[test]
    fn beam_radius_examples() {
        let p = vcsel(5.0);
        assert_eq!(beam_radius(&p, 0.0).unwrap(), p.waist_m);
        assert!(rel(beam_radius(&vcsel(5.0), 2.15).unwrap(), 0.1163) < 1e-3);
        assert!(rel(beam_radius(&vcsel(30.0), 2.15).unwrap(), 0.01939) < 1e-3);
    }

    #[test]
    fn negative_distance_is_rejected() {
        assert!(beam_radius(&vcsel(5.0), -1.0).is_err());
    }

    #[test]
    fn invalid_params_are_rejected() {
        let p = VcselParams {
            refractive_index: 0.5,
            ..VcselParams::default()
        };
        assert!(rayleigh_distance(&p).is_err());
        assert!(rayleigh_distance(&vcsel(0.0)).is_err());
    }

    #[test]
    fn intensity_examples() {
        let p = VcselParams {
            power_w: 1.0,
            ..VcselParams::default()
        };
        let w = 0.1;
        let peak = intensity(&p, 0.0, w).unwrap();
        assert!(rel(peak, 2.0 / (PI * w * w)) < 1e-15);
        let at_w = intensity(&p, w, w).unwrap();
        assert!(rel(at_w / peak, 0.13534) < 1e-4);
        assert!(intensity(&p, 0.0, 0.0).is_err());
    }

    #[test]
    fn centered_capture_limits() {
        let p = VcselParams {
            power_w: 1.0,
            ..VcselParams::default()
        };
        assert_eq!(received_power_centered(&p, 0.0, 0.1).unwrap(), 0.0);
        assert_eq!(received_power_centered(&p, 10.0, 0.1).unwrap(), 1.0);
    }

    #[test]
    fn centered_capture_on_5mm2_disc() {
        let p = VcselParams {
            power_w: 1.0,
            ..VcselParams::default()
        };
        let got = received_power_centered(&p, 1.2616e-3, 0.1163).unwrap();
        // The hand value 2.355e-4 is rounded; a 30-digit evaluation gives
        // 2.35322158e-4.
        assert!(rel(got, 2.355e-4) < 1e-3, "{got}");
        assert!(rel(got, 2.353_221_58e-4) < 1e-8, "{got}");
    }

    #[test]
    fn offaxis_reduces_to_centered_for_small_aperture() {
        let p = VcselParams {
            power_w: 1.0,
            ..VcselParams::default()
        };
        let w = 0.1163;
        let r_m = w / 100.0;
        let sampled = received_power_offaxis(&p, 0.0, r_m, w, 1.0).unwrap();
        let exact = received_power_centered(&p, r_m, w).unwrap();
        assert!(rel(sampled, exact) < 1e-3);
    }

    #[test]
    fn offaxis_one_spot_radius_out() {
        let p = VcselParams {
            power_w: 1.0,
            ..VcselParams::default()
        };
        let got = received_power_offaxis(&p, 0.1163, 1.2616e-3, 0.1163, 1.0).unwrap();
        assert!(rel(got, 3.187e-5) < 1e-2, "{got}");
        let far = received_power_offaxis(&p, 100.0, 1.2616e-3, 0.1163, 1.0).unwrap();
        assert_eq!(far, 0.0);
    }

    #[test]
    fn offaxis_rejects_bad_cosine() {
        let p = VcselParams::default();
        assert!(received_power_offaxis(&p, 0.0, 1e-3, 0.1, 1.5).is_err());
        assert!(received_power_offaxis(&p, 0.0, 1e-3, 0.1, -0.1).is_err());
    }
}
