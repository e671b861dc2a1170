//! Rate-splitting transmission: power split between one common stream and K
//! private streams, precoders, SINRs, achievable rates, the power-split
//! search, and the conventional-RS and OMA baselines.
//!
//! Each user first decodes the common stream treating every private stream
//! as noise, removes it by SIC, then decodes its own private stream with the
//! other private streams as interference.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::channel::{stable_norm, ChannelMatrix};
use crate::error::{invalid, Error, Result};

const UNIT_TOL: f64 = 1e-9;
// Cholesky pivots below this fraction of the largest are treated as rank loss
// when no regularization is applied.
const PIVOT_FLOOR: f64 = 1e-7;

/// `log₂(1 + γ)`.
pub fn rate(sinr: f64) -> f64 {
    sinr.ln_1p() / LN_2
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    pub total: f64,
    /// Fraction of the total power given to the private streams.
    pub alpha: f64,
    pub common: f64,
    /// Power of each single private stream.
    pub private: f64,
    pub users: usize,
}

pub fn power_split(total: f64, alpha: f64, users: usize) -> Result<PowerSplit> {
    if !(total.is_finite() && total > 0.0) {
        return Err(invalid("p_total", format!("must be > 0, got {total}")));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(invalid("alpha", format!("must lie in [0, 1], got {alpha}")));
    }
    if users == 0 {
        return Err(invalid("users", "must be >= 1"));
    }
    Ok(PowerSplit {
        total,
        alpha,
        common: total * (1.0 - alpha),
        private: total * alpha / users as f64,
        users,
    })
}

/// Private-stream fraction that gives the common stream and every private
/// stream the same power `P_T/(K+1)`.
pub fn conventional_alpha(users: usize) -> f64 {
    let k = users as f64;
    k / (k + 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Precoders {
    common: DVector<f64>,
    private: DMatrix<f64>,
}

impl Precoders {
    /// `common` has length L; `private` is L×K with unit-norm columns.
    pub fn new(common: DVector<f64>, private: DMatrix<f64>) -> Result<Self> {
        if common.len() != private.nrows() {
            return Err(Error::Dimension(format!(
                "common precoder has {} entries, private precoders have {} rows",
                common.len(),
                private.nrows()
            )));
        }
        let norm = common.norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnitVector { name: "w_c", norm });
        }
        for col in private.column_iter() {
            let norm = col.norm();
            if (norm - 1.0).abs() > UNIT_TOL {
                return Err(Error::NonUnitVector { name: "w_p", norm });
            }
        }
        Ok(Self { common, private })
    }

    pub fn common(&self) -> &DVector<f64> {
        &self.common
    }

    pub fn private(&self) -> &DMatrix<f64> {
        &self.private
    }
}

/// `K·σ²/P_T`, the MMSE-style loading used unless told otherwise.
pub fn default_regularization(cm: &ChannelMatrix, p_total: f64) -> f64 {
    cm.users() as f64 * cm.sigma2() / p_total
}

/// Regularized zero-forcing: columns of `Hᵀ(HHᵀ + reg·I)⁻¹`, each scaled to
/// unit norm. `reg = 0` is plain zero-forcing.
pub fn private_precoders(cm: &ChannelMatrix, reg: f64) -> Result<DMatrix<f64>> {
    if !(reg.is_finite() && reg >= 0.0) {
        return Err(invalid("reg", format!("must be >= 0, got {reg}")));
    }
    let h = cm.h();
    let (k, l) = (cm.users(), cm.aps());
    if reg == 0.0 && k > l {
        return Err(Error::SingularSystem);
    }
    let mut w = if reg == 0.0 {
        // Hᵀ = QR gives Hᵀ(HHᵀ)⁻¹ = QR⁻ᵀ without squaring the conditioning
        // of H.
        let qr = h.transpose().qr();
        let r = qr.r();
        let diag = r.diagonal().abs();
        if diag.min() <= PIVOT_FLOOR * diag.max() {
            return Err(Error::SingularSystem);
        }
        r.solve_upper_triangular(&qr.q().transpose())
            .ok_or(Error::SingularSystem)?
            .transpose()
    } else {
        // The loading bounds the conditioning, and Cholesky keeps each row's
        // solution accurate relative to that row's own scale, which matters
        // for users with vanishingly small channels.
        let gram = h * h.transpose() + DMatrix::identity(k, k) * reg;
        // (HHᵀ + reg·I) is symmetric, so Hᵀ(HHᵀ + reg·I)⁻¹ = ((HHᵀ + reg·I)⁻¹H)ᵀ.
        gram.cholesky()
            .ok_or(Error::SingularSystem)?
            .solve(h)
            .transpose()
    };
    for (j, mut col) in w.column_iter_mut().enumerate() {
        let own = cm.row_norm(j);
        let norm = stable_norm(col.iter().copied());
        if own > 0.0 && norm > 0.0 && norm.is_finite() {
            col /= norm;
        } else if own > 0.0 {
            col.copy_from(&(h.row(j).transpose() / own));
        } else {
            // The user has no channel (the solve leaves only roundoff here);
            // any unit direction serves.
            col.fill(0.0);
            col[0] = 1.0;
        }
    }
    Ok(w)
}

/// Normalized equal-weight sum of the users' channel directions; all-zero
/// rows are skipped.
pub fn common_precoder(cm: &ChannelMatrix) -> Result<DVector<f64>> {
    let mut sum = DVector::zeros(cm.aps());
    for k in 0..cm.users() {
        let norm = cm.row_norm(k);
        if norm > 0.0 {
            sum += cm.h().row(k).transpose() / norm;
        }
    }
    let norm = stable_norm(sum.iter().copied());
    if norm == 0.0 {
        return Err(Error::ZeroChannel);
    }
    Ok(sum / norm)
}

/// Common and private precoders; `reg = None` selects
/// [`default_regularization`].
pub fn build_precoders(cm: &ChannelMatrix, p_total: f64, reg: Option<f64>) -> Result<Precoders> {
    let reg = reg.unwrap_or_else(|| default_regularization(cm, p_total));
    Precoders::new(common_precoder(cm)?, private_precoders(cm, reg)?)
}

fn check_dims(cm: &ChannelMatrix, pre: &Precoders, ps: &PowerSplit) -> Result<()> {
    let (k, l) = (cm.users(), cm.aps());
    if pre.private.shape() != (l, k) || pre.common.len() != l || ps.users != k {
        return Err(Error::Dimension(format!(
            "channel {k}x{l}, private precoders {:?}, common precoder {}, split for {} users",
            pre.private.shape(),
            pre.common.len(),
            ps.users
        )));
    }
    Ok(())
}

/// Common-stream SINR of every user; the interference term holds all K
/// private streams.
pub fn sinr_common(cm: &ChannelMatrix, pre: &Precoders, ps: &PowerSplit) -> Result<Vec<f64>> {
    check_dims(cm, pre, ps)?;
    let h = cm.h();
    let direct = h * &pre.common;
    let cross = h * &pre.private;
    Ok((0..cm.users())
        .map(|k| {
            let interference: f64 = cross.row(k).iter().map(|g| ps.private * g * g).sum();
            ps.common * direct[k] * direct[k] / (interference + cm.sigma2())
        })
        .collect())
}

/// Private-stream SINR of every user after the common stream is removed.
pub fn sinr_private(cm: &ChannelMatrix, pre: &Precoders, ps: &PowerSplit) -> Result<Vec<f64>> {
    check_dims(cm, pre, ps)?;
    let cross = cm.h() * &pre.private;
    Ok((0..cm.users())
        .map(|k| {
            let interference: f64 = cross
                .row(k)
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, g)| ps.private * g * g)
                .sum();
            let own = cross[(k, k)];
            ps.private * own * own / (interference + cm.sigma2())
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RsEvaluation {
    pub split: PowerSplit,
    pub gamma_c: Vec<f64>,
    pub gamma_p: Vec<f64>,
    /// bits/s/Hz
    pub rate_common: f64,
    /// bits/s/Hz
    pub rate_private: f64,
    /// bits/s/Hz
    pub sum_rate: f64,
}

impl RsEvaluation {
    pub fn alpha(&self) -> f64 {
        self.split.alpha
    }

    pub fn sum_rate_bps(&self, bandwidth_hz: f64) -> f64 {
        self.sum_rate * bandwidth_hz
    }
}

/// Rates for fixed precoders and power split. The common rate is limited by
/// the weakest user's common SINR.
pub fn evaluate(cm: &ChannelMatrix, pre: &Precoders, ps: &PowerSplit) -> Result<RsEvaluation> {
    let gamma_c = sinr_common(cm, pre, ps)?;
    let gamma_p = sinr_private(cm, pre, ps)?;
    let weakest = gamma_c.iter().copied().fold(f64::INFINITY, f64::min);
    let rate_common = rate(weakest);
    let rate_private = gamma_p.iter().map(|&g| rate(g)).sum::<f64>();
    Ok(RsEvaluation {
        split: *ps,
        gamma_c,
        gamma_p,
        rate_common,
        rate_private,
        sum_rate: rate_common + rate_private,
    })
}

pub fn rs_sum_rate(cm: &ChannelMatrix, alpha: f64, p_total: f64) -> Result<RsEvaluation> {
    let ps = power_split(p_total, alpha, cm.users())?;
    let pre = build_precoders(cm, p_total, None)?;
    evaluate(cm, &pre, &ps)
}

/// `{0, 0.01, …, 1}` plus the conventional-RS fraction, ascending.
pub fn default_alpha_grid(users: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let conv = conventional_alpha(users);
    if !grid.contains(&conv) {
        grid.push(conv);
        grid.sort_by(f64::total_cmp);
    }
    grid
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSearch {
    pub alpha: f64,
    pub evaluation: RsEvaluation,
}

/// Exhaustive search for the sum-rate maximizing private-power fraction.
/// Equal rates resolve to the smaller fraction.
pub fn optimize_alpha(cm: &ChannelMatrix, p_total: f64, grid: &[f64]) -> Result<AlphaSearch> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if let Some(bad) = grid.iter().find(|a| !(0.0..=1.0).contains(*a)) {
        return Err(invalid("alpha", format!("grid value {bad} outside [0, 1]")));
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pre = build_precoders(cm, p_total, None)?;
    let mut best: Option<AlphaSearch> = None;
    for alpha in sorted {
        let ev = evaluate(cm, &pre, &power_split(p_total, alpha, cm.users())?)?;
        if best
            .as_ref()
            .is_none_or(|b| ev.sum_rate > b.evaluation.sum_rate)
        {
            best = Some(AlphaSearch {
                alpha,
                evaluation: ev,
            });
        }
    }
    Ok(best.expect("grid is nonempty"))
}

/// RS with the common stream and each private stream at equal power.
pub fn conventional_rs_rate(cm: &ChannelMatrix, p_total: f64) -> Result<RsEvaluation> {
    rs_sum_rate(cm, conventional_alpha(cm.users()), p_total)
}

/// TDMA: each user gets an equal time slot with full power and a matched
/// beamformer.
pub fn oma_sum_rate(cm: &ChannelMatrix, p_total: f64) -> f64 {
    let k = cm.users();
    (0..k)
        .map(|u| {
            let g = cm.row_norm(u);
            rate(p_total * g * g / cm.sigma2())
        })
        .sum::<f64>()
        / k as f64
}

/// Multiple-access schemes compared by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// RS with the power split chosen by [`optimize_alpha`].
    OptRs,
    /// RS with [`conventional_alpha`].
    ConvRs,
    Oma,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::OptRs, Scheme::ConvRs, Scheme::Oma];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::OptRs => "opt_rs",
            Scheme::ConvRs => "conv_rs",
            Scheme::Oma => "oma",
        }
    }

    pub fn sum_rate(self, cm: &ChannelMatrix, p_total: f64) -> Result<f64> {
        Ok(match self {
            Scheme::OptRs => {
                optimize_alpha(cm, p_total, &default_alpha_grid(cm.users()))?
                    .evaluation
                    .sum_rate
            }
            Scheme::ConvRs => conventional_rs_rate(cm, p_total)?.sum_rate,
            Scheme::Oma => {
                if !(p_total.is_finite() && p_total > 0.0) {
                    return Err(invalid("p_total", format!("must be > 0, got {p_total}")));
                }
                oma_sum_rate(cm, p_total)
            }
        })
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.name() == s.trim())
            .ok_or_else(|| {
                invalid(
                    "schemes",
                    format!("unknown scheme `{s}` (expected opt_rs, conv_rs or oma)"),
                )
            })
    }
}

/// The 2-user identity channel with unit noise used as a hand-checkable
/// fixture.
pub fn identity_fixture() -> ChannelMatrix {
    ChannelMatrix::new(DMatrix::identity(2, 2), 1.0).expect("identity channel is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn power_split_examples() {
        let all_private = power_split(10.0, 1.0, 10).unwrap();
        assert_eq!((all_private.common, all_private.private), (0.0, 1.0));
        let all_common = power_split(10.0, 0.0, 10).unwrap();
        assert_eq!((all_common.common, all_common.private), (10.0, 0.0));
        let half = power_split(10.0, 0.5, 2).unwrap();
        assert_eq!((half.common, half.private), (5.0, 2.5));
        assert!(power_split(10.0, 1.5, 2).is_err());
        assert!(power_split(10.0, -0.1, 2).is_err());
    }

    #[test]
    fn conventional_alpha_examples() {
        let one = power_split(4.0, conventional_alpha(1), 1).unwrap();
        assert_eq!((one.alpha, one.common, one.private), (0.5, 2.0, 2.0));
        let ten = power_split(11.0, conventional_alpha(10), 10).unwrap();
        assert!(close(ten.alpha, 10.0 / 11.0, 1e-15));
        assert!(close(ten.common, 1.0, 1e-14));
        assert!(close(ten.private, 1.0, 1e-14));
    }

    #[test]
    fn rzf_direction_of_a_nearly_dark_user() {
        // H = D·U with unit rows U gives columns ∝ Uᵀ(UUᵀ + reg·D⁻²)⁻¹, a form
        // that never mixes the tiny row with the others' magnitudes.
        let d = [1.0, 0.7, 1e-100];
        let u = DMatrix::from_row_slice(
            3,
            4,
            &[
                0.5, 0.5, 0.5, 0.5, //
                0.8, 0.6, 0.0, 0.0, //
                0.0, 0.6, 0.0, 0.8, //
            ],
        );
        let h = DMatrix::from_fn(3, 4, |i, j| d[i] * u[(i, j)]);
        let cm = ChannelMatrix::new(h, 1.0).unwrap();
        let reg = 0.3;
        let w = private_precoders(&cm, reg).unwrap();

        let mut inner = &u * u.transpose();
        for i in 0..3 {
            inner[(i, i)] += reg / (d[i] * d[i]);
        }
        let reference = u.transpose() * inner.try_inverse().unwrap();
        for j in 0..3 {
            let col = reference.column(j) / reference.column(j).amax();
            let col = &col / col.norm();
            assert!(
                (w.column(j) - &col).amax() < 1e-12,
                "user {j}: {} vs {}",
                w.column(j),
                col
            );
        }
    }

    #[test]
    fn zf_on_identity_is_identity() {
        let w = private_precoders(&identity_fixture(), 0.0).unwrap();
        assert_eq!(w, DMatrix::identity(2, 2));
    }

    #[test]
    fn zf_needs_regularization_when_overloaded() {
        let cm = ChannelMatrix::new(
            DMatrix::from_fn(10, 4, |i, j| ((i * 7 + j * 3) % 5) as f64 + 0.1),
            1.0,
        )
        .unwrap();
        assert_eq!(private_precoders(&cm, 0.0), Err(Error::SingularSystem));
        let w = private_precoders(&cm, 0.1).unwrap();
        assert_eq!(w.shape(), (4, 10));
        for col in w.column_iter() {
            assert!(close(col.norm(), 1.0, 1e-12));
        }
    }

    #[test]
    fn rank_deficient_square_channel_is_singular() {
        let cm = ChannelMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]], 1.0).unwrap();
        assert_eq!(private_precoders(&cm, 0.0), Err(Error::SingularSystem));
    }

    #[test]
    fn zero_row_gets_a_unit_fallback_column() {
        let cm = ChannelMatrix::from_rows(&[vec![1.0, 0.5], vec![0.0, 0.0]], 1.0).unwrap();
        let w = private_precoders(&cm, 0.5).unwrap();
        for col in w.column_iter() {
            assert!(close(col.norm(), 1.0, 1e-12));
        }
    }

    #[test]
    fn common_precoder_examples() {
        let single = ChannelMatrix::from_rows(&[vec![3.0, 4.0]], 1.0).unwrap();
        let w = common_precoder(&single).unwrap();
        assert!(close(w[0], 0.6, 1e-15) && close(w[1], 0.8, 1e-15));
        let w = common_precoder(&identity_fixture()).unwrap();
        let s = 0.5_f64.sqrt();
        assert!(close(w[0], s, 1e-15) && close(w[1], s, 1e-15));
        let zero = ChannelMatrix::from_rows(&[vec![0.0, 0.0]], 1.0).unwrap();
        assert_eq!(common_precoder(&zero), Err(Error::ZeroChannel));
    }

    fn fixture_precoders() -> Precoders {
        let cm = identity_fixture();
        Precoders::new(
            common_precoder(&cm).unwrap(),
            private_precoders(&cm, 0.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn identity_fixture_sinrs() {
        let cm = identity_fixture();
        let pre = fixture_precoders();
        let ps = power_split(10.0, 0.5, 2).unwrap();
        for g in sinr_common(&cm, &pre, &ps).unwrap() {
            assert!(close(g, 2.5 / 3.5, 1e-12));
            assert!(close(g, 0.7143, 1e-4));
        }
        for g in sinr_private(&cm, &pre, &ps).unwrap() {
            assert!(close(g, 2.5, 1e-12));
        }
        let no_common = power_split(10.0, 1.0, 2).unwrap();
        assert_eq!(sinr_common(&cm, &pre, &no_common).unwrap(), vec![0.0, 0.0]);
        let no_private = power_split(10.0, 0.0, 2).unwrap();
        assert_eq!(
            sinr_private(&cm, &pre, &no_private).unwrap(),
            vec![0.0, 0.0]
        );
    }

    #[test]
    fn identity_fixture_rates() {
        let ev = rs_sum_rate(&identity_fixture(), 0.5, 10.0).unwrap();
        assert!(close(ev.rate_common, 0.7776, 1e-4));
        assert!(close(ev.rate_private, 3.6147, 1e-4));
        assert!(close(ev.sum_rate, 4.3923, 1e-4));
        assert_eq!(ev.sum_rate, ev.rate_common + ev.rate_private);
        assert!(close(ev.sum_rate_bps(5e9), 4.3923 * 5e9, 1e6));
    }

    #[test]
    fn single_user_private_sinr_has_no_interference() {
        let cm = ChannelMatrix::from_rows(&[vec![0.3, 0.4]], 0.5).unwrap();
        let pre = build_precoders(&cm, 2.0, None).unwrap();
        let ps = power_split(2.0, 0.7, 1).unwrap();
        let g = sinr_private(&cm, &pre, &ps).unwrap()[0];
        let gain = (cm.h() * pre.private()).sum();
        assert!(close(g, ps.private * gain * gain / 0.5, 1e-14));
    }

    #[test]
    fn endpoint_identities() {
        let cm = identity_fixture();
        let common_only = rs_sum_rate(&cm, 0.0, 10.0).unwrap();
        assert_eq!(common_only.rate_private, 0.0);
        assert_eq!(common_only.sum_rate, common_only.rate_common);
        let private_only = rs_sum_rate(&cm, 1.0, 10.0).unwrap();
        assert_eq!(private_only.rate_common, 0.0);
        assert_eq!(private_only.sum_rate, private_only.rate_private);
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let cm = identity_fixture();
        let pre = fixture_precoders();
        let ps = power_split(10.0, 0.5, 3).unwrap();
        assert!(matches!(
            sinr_common(&cm, &pre, &ps),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn singleton_grid_returns_its_point() {
        let found = optimize_alpha(&identity_fixture(), 10.0, &[0.37]).unwrap();
        assert_eq!(found.alpha, 0.37);
        assert_eq!(
            optimize_alpha(&identity_fixture(), 10.0, &[]),
            Err(Error::EmptyGrid)
        );
        assert!(optimize_alpha(&identity_fixture(), 10.0, &[1.2]).is_err());
    }

    #[test]
    fn single_user_rate_is_flat_in_alpha() {
        // With one user the common and private streams share a beam, and the
        // chain rule makes R_c + R_p = log2(1 + P_T·|h|²/σ²) for every split.
        let cm = ChannelMatrix::from_rows(&[vec![0.2, 0.9, 0.4]], 0.3).unwrap();
        let p_total = 5.0;
        let g2 = cm.row_norm(0).powi(2);
        let expected = (1.0 + p_total * g2 / 0.3).log2();
        let grid = default_alpha_grid(1);
        for &a in &grid {
            let ev = rs_sum_rate(&cm, a, p_total).unwrap();
            assert!(
                close(ev.sum_rate, expected, 1e-12),
                "alpha {a}: {}",
                ev.sum_rate
            );
        }
        let found = optimize_alpha(&cm, p_total, &grid).unwrap();
        let brute = grid
            .iter()
            .map(|&a| rs_sum_rate(&cm, a, p_total).unwrap().sum_rate)
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(found.evaluation.sum_rate, brute);
    }

    #[test]
    fn ties_resolve_to_smaller_alpha() {
        let cm = identity_fixture();
        let found = optimize_alpha(&cm, 10.0, &[0.5, 0.5]).unwrap();
        assert_eq!(found.alpha, 0.5);
        let grid = [0.9, 0.2, 0.6];
        let found = optimize_alpha(&cm, 10.0, &grid).unwrap();
        let brute = grid
            .iter()
            .map(|&a| (a, rs_sum_rate(&cm, a, 10.0).unwrap().sum_rate))
            .fold((f64::NAN, f64::NEG_INFINITY), |best, (a, r)| {
                if r > best.1 || (r == best.1 && a < best.0) {
                    (a, r)
                } else {
                    best
                }
            });
        assert_eq!((found.alpha, found.evaluation.sum_rate), brute);
    }

    #[test]
    fn default_grid_contains_conventional_alpha() {
        for k in 1..=12 {
            let grid = default_alpha_grid(k);
            assert!(grid.contains(&conventional_alpha(k)));
            assert!(grid.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(grid[0], 0.0);
            assert_eq!(*grid.last().unwrap(), 1.0);
        }
        assert_eq!(default_alpha_grid(1).len(), 101);
        assert_eq!(default_alpha_grid(10).len(), 102);
    }

    #[test]
    fn optimum_dominates_conventional() {
        let cm = ChannelMatrix::from_rows(&[vec![0.9, 0.1], vec![0.3, 0.8], vec![0.5, 0.5]], 1.0)
            .unwrap();
        for p in [0.5, 3.0, 30.0, 300.0] {
            let opt = optimize_alpha(&cm, p, &default_alpha_grid(3)).unwrap();
            let conv = conventional_rs_rate(&cm, p).unwrap();
            assert!(opt.evaluation.sum_rate >= conv.sum_rate);
        }
    }

    #[test]
    fn oma_examples() {
        assert!(close(oma_sum_rate(&identity_fixture(), 10.0), 3.4594, 1e-4));
        let single = ChannelMatrix::from_rows(&[vec![0.3, 0.4]], 0.5).unwrap();
        assert!(close(
            oma_sum_rate(&single, 2.0),
            (1.0 + 2.0 * 0.25 / 0.5f64).log2(),
            1e-15
        ));
        let twice = ChannelMatrix::from_rows(&[vec![0.3, 0.4], vec![0.3, 0.4]], 0.5).unwrap();
        assert!(close(
            oma_sum_rate(&twice, 2.0),
            oma_sum_rate(&single, 2.0),
            1e-15
        ));
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.name().parse::<Scheme>().unwrap(), s);
        }
        assert!("noma".parse::<Scheme>().is_err());
    }
}
