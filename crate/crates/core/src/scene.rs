//! Room, access-point layout, user drops and angle-diversity receiver (ADR)
//! geometry.
//!
//! Coordinates are meters with the room corner at the origin, `x` along the
//! width, `y` along the length and `z` up.

use std::f64::consts::PI;

use nalgebra::{Point3, Vector3};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};

const UNIT_TOL: f64 = 1e-9;
const CEILING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoomConfig {
    pub width_m: f64,
    pub length_m: f64,
    pub height_m: f64,
    /// Height of the communication floor (receiver plane) above ground.
    pub floor_height_m: f64,
}

impl Default for RoomConfig {
    fn default() -> Self {
        Self {
            width_m: 5.0,
            length_m: 5.0,
            height_m: 3.0,
            floor_height_m: 0.85,
        }
    }
}

impl RoomConfig {
    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("room.width", self.width_m),
            ("room.length", self.length_m),
            ("room.height", self.height_m),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(field, format!("must be > 0, got {v}")));
            }
        }
        if !(self.floor_height_m.is_finite()
            && self.floor_height_m >= 0.0
            && self.floor_height_m < self.height_m)
        {
            return Err(invalid(
                "room.floor_height",
                format!(
                    "must lie in [0, height), got {} with height {}",
                    self.floor_height_m, self.height_m
                ),
            ));
        }
        Ok(())
    }

    pub fn center_ceiling(&self) -> Point3<f64> {
        Point3::new(self.width_m / 2.0, self.length_m / 2.0, self.height_m)
    }

    fn contains_footprint(&self, x: f64, y: f64) -> bool {
        x > 0.0 && x < self.width_m && y > 0.0 && y < self.length_m
    }
}

/// Ceiling-mounted access points. Every AP emits along its boresight,
/// straight down by default.
#[derive(Debug, Clone, PartialEq)]
pub struct ApLayout {
    positions: Vec<Point3<f64>>,
    boresight: Vec<Vector3<f64>>,
}

impl ApLayout {
    /// Builds a layout from explicit coordinates, all of which must sit on
    /// the ceiling plane and be pairwise distinct.
    pub fn from_positions(room: &RoomConfig, positions: Vec<Point3<f64>>) -> Result<Self> {
        room.validate()?;
        if positions.is_empty() {
            return Err(invalid("aps", "at least one access point is required"));
        }
        for p in &positions {
            if (p.z - room.height_m).abs() > CEILING_TOL {
                return Err(Error::Geometry(format!(
                    "access point {p} is not on the ceiling plane z = {}",
                    room.height_m
                )));
            }
            if !room.contains_footprint(p.x, p.y) {
                return Err(Error::Geometry(format!(
                    "access point {p} lies outside the room footprint"
                )));
            }
        }
        for (i, a) in positions.iter().enumerate() {
            if positions[i + 1..].iter().any(|b| a == b) {
                return Err(Error::Geometry(format!("duplicate access point at {a}")));
            }
        }
        let boresight = vec![-Vector3::z(); positions.len()];
        Ok(Self {
            positions,
            boresight,
        })
    }

    pub fn positions(&self) -> &[Point3<f64>] {
        &self.positions
    }

    pub fn boresight(&self) -> &[Vector3<f64>] {
        &self.boresight
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Standard layouts: one AP at the ceiling center, or four APs on the
/// symmetric 2×2 quarter-point grid.
pub fn default_ap_positions(room: &RoomConfig, count: usize) -> Result<ApLayout> {
    room.validate()?;
    let (w, l, h) = (room.width_m, room.length_m, room.height_m);
    let positions = match count {
        1 => vec![room.center_ceiling()],
        4 => {
            let mut v = Vec::with_capacity(4);
            for x in [w / 4.0, 3.0 * w / 4.0] {
                for y in [l / 4.0, 3.0 * l / 4.0] {
                    v.push(Point3::new(x, y, h));
                }
            }
            v
        }
        other => return Err(Error::UnsupportedLayout(other)),
    };
    ApLayout::from_positions(room, positions)
}

/// One random placement of users on the communication floor.
#[derive(Debug, Clone, PartialEq)]
pub struct UserDrop {
    positions: Vec<Point3<f64>>,
    seed: u64,
}

impl UserDrop {
    /// Explicit user placement; `seed` is recorded but unused.
    pub fn from_positions(
        room: &RoomConfig,
        positions: Vec<Point3<f64>>,
        seed: u64,
    ) -> Result<Self> {
        room.validate()?;
        if positions.is_empty() {
            return Err(invalid("users", "at least one user is required"));
        }
        for p in &positions {
            if !room.contains_footprint(p.x, p.y) {
                return Err(Error::Geometry(format!(
                    "user {p} lies outside the room footprint"
                )));
            }
            if (p.z - room.floor_height_m).abs() > CEILING_TOL {
                return Err(Error::Geometry(format!(
                    "user {p} is not on the communication floor z = {}",
                    room.floor_height_m
                )));
            }
        }
        Ok(Self { positions, seed })
    }

    pub fn positions(&self) -> &[Point3<f64>] {
        &self.positions
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Draws `count` users i.i.d. uniform over the open floor rectangle.
pub fn sample_user_positions(seed: u64, count: usize, room: &RoomConfig) -> Result<UserDrop> {
    room.validate()?;
    if count == 0 {
        return Err(invalid("users", "at least one user is required"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coord = |extent: f64| loop {
        let v: f64 = rng.random_range(0.0..extent);
        if v > 0.0 {
            break v;
        }
    };
    let positions = (0..count)
        .map(|_| {
            let x = coord(room.width_m);
            let y = coord(room.length_m);
            Point3::new(x, y, room.floor_height_m)
        })
        .collect();
    Ok(UserDrop { positions, seed })
}

/// A complete network drop.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub room: RoomConfig,
    pub aps: ApLayout,
    pub users: UserDrop,
}

impl Scene {
    pub fn new(room: RoomConfig, aps: ApLayout, users: UserDrop) -> Self {
        Self { room, aps, users }
    }
}

/// Angle-diversity receiver: one zenith photodiode plus `photodiodes − 1`
/// tilted ones sharing the total detection area equally.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdrConfig {
    pub photodiodes: usize,
    /// Total detection area of the receiver, m².
    pub area_m2: f64,
    /// Field-of-view half angle, degrees.
    pub fov_deg: f64,
    /// Photodiode responsivity, A/W.
    pub responsivity: f64,
    /// Elevation tilt of the off-axis photodiodes from zenith, degrees.
    pub tilt_deg: f64,
    /// Receiver filter gain, applied as a multiplier on responsivity.
    pub filter_gain: f64,
}

impl Default for AdrConfig {
    fn default() -> Self {
        Self {
            photodiodes: 4,
            area_m2: 20e-6,
            fov_deg: 45.0,
            responsivity: 0.4,
            tilt_deg: 45.0,
            filter_gain: 1.0,
        }
    }
}

impl AdrConfig {
    pub fn validate(&self) -> Result<()> {
        if self.photodiodes == 0 {
            return Err(invalid("adr.photodiodes", "must be >= 1"));
        }
        if !(self.area_m2.is_finite() && self.area_m2 > 0.0) {
            return Err(invalid(
                "adr.area",
                format!("must be > 0, got {}", self.area_m2),
            ));
        }
        if !(self.fov_deg > 0.0 && self.fov_deg <= 90.0) {
            return Err(invalid(
                "adr.fov_deg",
                format!("must lie in (0, 90], got {}", self.fov_deg),
            ));
        }
        if !(self.responsivity.is_finite() && self.responsivity > 0.0) {
            return Err(invalid(
                "adr.responsivity",
                format!("must be > 0, got {}", self.responsivity),
            ));
        }
        if !(self.tilt_deg.is_finite() && (0.0..=90.0).contains(&self.tilt_deg)) {
            return Err(invalid(
                "adr.tilt_deg",
                format!("must lie in [0, 90], got {}", self.tilt_deg),
            ));
        }
        if !(self.filter_gain.is_finite() && self.filter_gain > 0.0) {
            return Err(invalid(
                "adr.filter_gain",
                format!("must be > 0, got {}", self.filter_gain),
            ));
        }
        Ok(())
    }

    /// Detection area of a single photodiode, `A_rec / M`.
    pub fn photodiode_area(&self) -> f64 {
        self.area_m2 / self.photodiodes as f64
    }

    /// Responsivity including the filter gain.
    pub fn effective_responsivity(&self) -> f64 {
        self.responsivity * self.filter_gain
    }
}

/// Photodiode normals: zenith first, then the tilted ones at azimuths
/// `2π·j/(M−1)`, `j = 0..M−1`.
pub fn photodiode_normals(adr: &AdrConfig) -> Vec<Vector3<f64>> {
    let m = adr.photodiodes.max(1);
    let mut normals = Vec::with_capacity(m);
    normals.push(Vector3::z());
    let tilt = adr.tilt_deg.to_radians();
    let (sin_t, cos_t) = tilt.sin_cos();
    for j in 0..m - 1 {
        let az = 2.0 * PI * j as f64 / (m - 1) as f64;
        let (sin_a, cos_a) = az.sin_cos();
        normals.push(Vector3::new(sin_t * cos_a, sin_t * sin_a, cos_t).normalize());
    }
    normals
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayGeometry {
    /// Vertical propagation distance from the AP down to the receiver plane.
    pub d_vertical: f64,
    /// Horizontal distance between the user and the beam axis.
    pub r_offset: f64,
    /// Unit vector from the AP towards the user.
    pub incoming_dir: Vector3<f64>,
}

pub fn ray_geometry(user: &Point3<f64>, ap: &Point3<f64>) -> Result<RayGeometry> {
    let d_vertical = ap.z - user.z;
    if d_vertical.is_nan() || d_vertical <= 0.0 {
        return Err(Error::Geometry(format!(
            "user at z = {} is not below the access point at z = {}",
            user.z, ap.z
        )));
    }
    let r_offset = (user.x - ap.x).hypot(user.y - ap.y);
    let incoming_dir = (user - ap).normalize();
    Ok(RayGeometry {
        d_vertical,
        r_offset,
        incoming_dir,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Incidence {
    pub accepted: bool,
    pub cos_incidence: f64,
}

/// Field-of-view test; the boundary angle is accepted.
pub fn fov_accept(
    pd_normal: &Vector3<f64>,
    incoming_dir: &Vector3<f64>,
    fov_deg: f64,
) -> Result<Incidence> {
    for (name, v) in [("pd_normal", pd_normal), ("incoming_dir", incoming_dir)] {
        let norm = v.norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnitVector { name, norm });
        }
    }
    let cos_incidence = pd_normal.dot(&(-incoming_dir));
    // 1e-12 slack keeps a ray at exactly the FOV edge inside despite rounding.
    let accepted = cos_incidence >= fov_deg.to_radians().cos() - 1e-12;
    Ok(Incidence {
        accepted,
        cos_incidence,
    })
}
