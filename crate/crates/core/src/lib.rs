//! Rate-splitting multiple access (RSMA) over laser-based optical wireless
//! downlinks.
//!
//! The crate is layered bottom-up:
//!
//! - [`scene`]: room, ceiling access points, user drops and angle-diversity
//!   receiver geometry.
//! - [`optics`]: Gaussian-beam propagation and photodiode power capture.
//! - [`channel`]: the K×L electrical channel matrix and receiver noise.
//! - [`rsma`]: power splitting, precoders, SINRs, achievable rates, the
//!   power-split search and the conventional-RS / OMA baselines.
//! - [`harness`]: seeded Monte-Carlo sweeps, CSV tables and SVG charts.
//! - [`validate`]: self-checks against independent numerical oracles.

pub mod channel;
pub mod error;
pub mod harness;
pub mod optics;
pub mod quadrature;
pub mod rsma;
pub mod scene;
pub mod validate;

pub use error::{Error, Result};
