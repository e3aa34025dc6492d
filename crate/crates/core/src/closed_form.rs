//! Closed-form SNR expressions for every detection layout, used both as the
//! fast analytic path for sweeps and as the comparison oracle for the Fock
//! scenarios.
//!
//! Conventions shared by all forms:
//! - `n_t`, `n_lo` are mean photon numbers of the target-return and
//!   local-oscillator modes; `r` is the squeeze magnitude.
//! - `phase` is the combined detection phase (target phase minus LO phase
//!   plus reference phase, plus any beamsplitter phase), pre-combined by the
//!   caller since no form depends on the individual angles.
//! - the squeeze phase is implicitly at its per-layout optimum; a raw-phase
//!   variant exists only for direct detection via [`snr_direct_general`].
//! - physical units appear only in [`snr_heterodyne_conventional`]; all
//!   other forms are in shot-noise-normalized units.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::gaussian::{mean_photon, number_variance, CoherentParams, SqueezeParams};

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Error)]
pub enum ClosedFormError {
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{name} must be nonnegative, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("squeezed occupancy sinh^2(r) = {occupancy} exceeds mean photon number {n_bar}")]
    OverSqueezed { occupancy: f64, n_bar: f64 },
    #[error("quantum efficiency must lie in [0, 1], got {0}")]
    EtaOutOfRange(f64),
    #[error("loss bound diverges at eta = 1")]
    LossBoundAtUnity,
    #[error("displacement {delta} outside [0, W/2] for width {width}")]
    DisplacementOutOfRange { delta: f64, width: f64 },
}

fn require_nonneg(name: &'static str, value: f64) -> Result<f64, ClosedFormError> {
    if value < 0.0 {
        return Err(ClosedFormError::Negative { name, value });
    }
    Ok(value)
}

fn require_positive(name: &'static str, value: f64) -> Result<f64, ClosedFormError> {
    if value <= 0.0 {
        return Err(ClosedFormError::NonPositive { name, value });
    }
    Ok(value)
}

/// Reject squeeze levels no physical state can reach: sinh²r ≤ n̄.
fn check_occupancy(r: f64, n_bar: f64) -> Result<f64, ClosedFormError> {
    require_nonneg("r", r)?;
    let occ = r.sinh().powi(2);
    if occ > n_bar * (1.0 + 1e-12) + 1e-12 {
        return Err(ClosedFormError::OverSqueezed {
            occupancy: occ,
            n_bar,
        });
    }
    Ok(occ)
}

/// Noise-reduction factor a squeeze magnitude buys along its quiet
/// quadrature: e^{−2r}, always in (0, 1].
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SqueezeNoiseTerm {
    pub r: f64,
    pub reduction: f64,
}

impl SqueezeNoiseTerm {
    pub fn new(r: f64) -> Result<Self, ClosedFormError> {
        require_nonneg("r", r)?;
        Ok(Self {
            r,
            reduction: (-2.0 * r).exp(),
        })
    }
}

/// Heterodyne target detection with a (possibly squeezed) local oscillator:
/// `2 (1 − sinh²r / n̄_LO) n̄_T cos²(phase)`.
pub fn snr_heterodyne(n_t: f64, n_lo: f64, r: f64, phase: f64) -> Result<f64, ClosedFormError> {
    require_nonneg("n_t", n_t)?;
    require_positive("n_lo", n_lo)?;
    let occ = check_occupancy(r, n_lo)?;
    Ok(2.0 * (1.0 - occ / n_lo) * n_t * phase.cos().powi(2))
}

/// Conventional radar-link parameters for the physical-unit SNR form.
///
/// The quantization length fixes the quantization time `T = L/c` and the
/// effective bandwidth `B = 1/(2T)`.
#[derive(Copy, Clone, Debug)]
pub struct RadarLinkParams {
    /// Target-return power at the detector (W).
    pub p_t: f64,
    /// Local-oscillator power at the detector (W).
    pub p_lo: f64,
    /// Optical angular frequency (rad/s).
    pub omega: f64,
    /// Effective bandwidth B = 1/(2T) (Hz).
    pub b: f64,
    /// Detector area A (m²).
    pub area: f64,
    /// Quantization length L (m).
    pub quantization_length: f64,
    /// Quantization time T = L/c (s).
    pub quantization_time: f64,
}

impl RadarLinkParams {
    pub fn new(
        p_t: f64,
        p_lo: f64,
        omega: f64,
        quantization_length: f64,
        area: f64,
    ) -> Result<Self, ClosedFormError> {
        require_positive("p_t", p_t)?;
        require_positive("p_lo", p_lo)?;
        require_positive("omega", omega)?;
        require_positive("quantization_length", quantization_length)?;
        require_positive("area", area)?;
        let quantization_time = quantization_length / SPEED_OF_LIGHT;
        let b = 1.0 / (2.0 * quantization_time);
        Ok(Self {
            p_t,
            p_lo,
            omega,
            b,
            area,
            quantization_length,
            quantization_time,
        })
    }

    /// Mean photon number of a mode carrying power `p` in this link, using
    /// the quantization-volume power relation P = ħω n̄ c A / V.
    pub fn photon_number(&self, p: f64) -> f64 {
        let volume = self.area * self.quantization_length;
        p * volume / (HBAR * self.omega * SPEED_OF_LIGHT * self.area)
    }
}

/// Heterodyne SNR in conventional units:
/// `(P_T / ħωB) cos²(phase) (1 − sinh²r / n̄_LO)`.
pub fn snr_heterodyne_conventional(
    link: &RadarLinkParams,
    r: f64,
    n_lo: f64,
    phase: f64,
) -> Result<f64, ClosedFormError> {
    require_positive("n_lo", n_lo)?;
    let occ = check_occupancy(r, n_lo)?;
    Ok(link.p_t / (HBAR * link.omega * link.b) * phase.cos().powi(2) * (1.0 - occ / n_lo))
}

/// Heterodyne SNR through a detection efficiency η; the total phase includes
/// any beamsplitter phase.
pub fn snr_heterodyne_lossy(
    n_t: f64,
    n_lo: f64,
    r: f64,
    phase_total: f64,
    eta: f64,
) -> Result<f64, ClosedFormError> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(ClosedFormError::EtaOutOfRange(eta));
    }
    Ok(eta * snr_heterodyne(n_t, n_lo, r, phase_total)?)
}

/// Number of transverse modes the detector's field of view admits:
/// `max(⌊(L_tr/λ)² Ω⌋, 1)`.
pub fn mode_count(lambda: f64, l_tr: f64, omega_fov: f64) -> Result<u64, ClosedFormError> {
    require_positive("lambda", lambda)?;
    require_positive("l_tr", l_tr)?;
    require_nonneg("omega_fov", omega_fov)?;
    let v = (l_tr / lambda).powi(2) * omega_fov;
    // snap to the nearest integer before truncating so that an exact count
    // computed through floating point does not round down spuriously
    let nearest = v.round();
    let integral = if (v - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        v.floor()
    };
    Ok((integral as u64).max(1))
}

fn check_split_geometry(delta: f64, width: f64) -> Result<(), ClosedFormError> {
    require_positive("width", width)?;
    if !(0.0..=width / 2.0).contains(&delta) {
        return Err(ClosedFormError::DisplacementOutOfRange { delta, width });
    }
    Ok(())
}

/// Split-detector direct direction finding: `(2δ/W)² n̄_T` — independent of
/// squeezing.
pub fn snr_split_direct(delta: f64, width: f64, n_t: f64) -> Result<f64, ClosedFormError> {
    check_split_geometry(delta, width)?;
    require_nonneg("n_t", n_t)?;
    Ok((2.0 * delta / width).powi(2) * n_t)
}

/// Angular form of [`snr_split_direct`] with δ = f·Δθ and W = f·λ/d:
/// `(2 d Δθ / λ)² n̄_T`.
pub fn snr_split_direct_angular(
    delta_theta: f64,
    d_aperture: f64,
    lambda: f64,
    n_t: f64,
) -> Result<f64, ClosedFormError> {
    require_nonneg("delta_theta", delta_theta)?;
    require_positive("d_aperture", d_aperture)?;
    require_positive("lambda", lambda)?;
    require_nonneg("n_t", n_t)?;
    Ok((2.0 * d_aperture * delta_theta / lambda).powi(2) * n_t)
}

/// Split-detector homodyne direction finding with two occupied transverse
/// modes (squeezed even LO, flipped coherent target), squeeze phase at its
/// optimum:
///
/// `(2δ/W)² (n̄_T − 3 √(n̄_LO − sinh²r) √n̄_T cos(phase))² / (n̄_LO + n̄_T e^{−2r})`.
pub fn snr_split_homodyne_two_mode(
    delta: f64,
    width: f64,
    n_t: f64,
    n_lo: f64,
    r: f64,
    phase: f64,
) -> Result<f64, ClosedFormError> {
    check_split_geometry(delta, width)?;
    require_nonneg("n_t", n_t)?;
    require_positive("n_lo", n_lo)?;
    let occ = check_occupancy(r, n_lo)?;
    let noise = SqueezeNoiseTerm::new(r)?;
    // clamp against rounding when the LO is exactly a squeezed vacuum
    let alpha_mag = (n_lo - occ).max(0.0).sqrt();
    let numerator = (n_t - 3.0 * alpha_mag * n_t.sqrt() * phase.cos()).powi(2);
    Ok((2.0 * delta / width).powi(2) * numerator / (n_lo + n_t * noise.reduction))
}

/// Squeezed-vacuum-LO limit of [`snr_split_homodyne_two_mode`] for large
/// occupancy: `(2δ/W)² n̄_T (n̄_T / n̄_LO)`.
pub fn snr_split_homodyne_squeezed_vacuum_limit(
    delta: f64,
    width: f64,
    n_t: f64,
    n_lo: f64,
) -> Result<f64, ClosedFormError> {
    check_split_geometry(delta, width)?;
    require_nonneg("n_t", n_t)?;
    require_positive("n_lo", n_lo)?;
    Ok((2.0 * delta / width).powi(2) * n_t * (n_t / n_lo))
}

fn split_heterodyne_bracket(
    n_t: f64,
    n_lo: f64,
    r: f64,
    t_weight: f64,
) -> Result<f64, ClosedFormError> {
    let occ = check_occupancy(r, n_lo)?;
    let noise = SqueezeNoiseTerm::new(r)?;
    Ok((1.0 - occ / n_lo) / (1.0 + t_weight * (n_t / n_lo) * (1.0 + noise.reduction)))
}

/// Split-detector heterodyne direction finding (flipped squeezed LO, even
/// displaced coherent target), squeeze phase at its optimum:
///
/// `2 (d Δθ / λ)² · (1 − sinh²r/n̄_LO) / (1 + (n̄_T/2n̄_LO)(1 + e^{−2r})) · n̄_T cos²(phase)`.
pub fn snr_split_heterodyne(
    delta_theta: f64,
    d_aperture: f64,
    lambda: f64,
    n_t: f64,
    n_lo: f64,
    r: f64,
    phase: f64,
) -> Result<f64, ClosedFormError> {
    require_nonneg("delta_theta", delta_theta)?;
    require_positive("d_aperture", d_aperture)?;
    require_positive("lambda", lambda)?;
    require_nonneg("n_t", n_t)?;
    require_positive("n_lo", n_lo)?;
    let bracket = split_heterodyne_bracket(n_t, n_lo, r, 0.5)?;
    Ok(2.0 * (d_aperture * delta_theta / lambda).powi(2) * bracket * n_t * phase.cos().powi(2))
}

/// Variant of [`snr_split_heterodyne`] with both LO and target in even
/// transverse modes; only the target weight in the denominator changes:
/// `1 + (n̄_T/n̄_LO)(1 + e^{−2r})`.
pub fn snr_split_heterodyne_both_even(
    delta_theta: f64,
    d_aperture: f64,
    lambda: f64,
    n_t: f64,
    n_lo: f64,
    r: f64,
    phase: f64,
) -> Result<f64, ClosedFormError> {
    require_nonneg("delta_theta", delta_theta)?;
    require_positive("d_aperture", d_aperture)?;
    require_positive("lambda", lambda)?;
    require_nonneg("n_t", n_t)?;
    require_positive("n_lo", n_lo)?;
    let bracket = split_heterodyne_bracket(n_t, n_lo, r, 1.0)?;
    Ok(2.0 * (d_aperture * delta_theta / lambda).powi(2) * bracket * n_t * phase.cos().powi(2))
}

/// Heterodyne estimation of a small target-phase change δθ_T, squeeze phase
/// at its optimum:
///
/// `2 (δθ_T)² · (1 − sinh²r/n̄_LO)/(1 + (n̄_T/2n̄_LO)(1 + e^{−2r})) · n̄_T sin²(phase)`.
pub fn snr_phase_change(
    delta_theta_t: f64,
    n_t: f64,
    n_lo: f64,
    r: f64,
    phase: f64,
) -> Result<f64, ClosedFormError> {
    require_nonneg("n_t", n_t)?;
    require_positive("n_lo", n_lo)?;
    let bracket = split_heterodyne_bracket(n_t, n_lo, r, 0.5)?;
    Ok(2.0 * delta_theta_t.powi(2) * bracket * n_t * phase.sin().powi(2))
}

/// Which balanced-detection statistic is formed.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BalancedKind {
    Heterodyne,
    Homodyne,
}

/// Balanced detection on a 50/50 splitter:
/// heterodyne `2 (1 − sinh²r/n̄_LO) n̄_T sin²(phase)`,
/// homodyne `4 (1 − sinh²r/n̄_LO) n̄_T sin²(phase)`.
pub fn snr_balanced(
    kind: BalancedKind,
    n_t: f64,
    n_lo: f64,
    r: f64,
    phase: f64,
) -> Result<f64, ClosedFormError> {
    require_nonneg("n_t", n_t)?;
    require_positive("n_lo", n_lo)?;
    let occ = check_occupancy(r, n_lo)?;
    let prefactor = match kind {
        BalancedKind::Heterodyne => 2.0,
        BalancedKind::Homodyne => 4.0,
    };
    Ok(prefactor * (1.0 - occ / n_lo) * n_t * phase.sin().powi(2))
}

/// Direct detection of a squeezed target return at the optimal squeeze
/// phase: `n̄_T² / ((n̄_T − sinh²r) e^{−2r} + 2 cosh²r sinh²r)`.
pub fn snr_direct(n_t: f64, r: f64) -> Result<f64, ClosedFormError> {
    require_nonneg("n_t", n_t)?;
    let occ = check_occupancy(r, n_t)?;
    let noise = SqueezeNoiseTerm::new(r)?;
    let var = (n_t - occ) * noise.reduction + 2.0 * r.cosh().powi(2) * occ;
    if var == 0.0 {
        return Ok(0.0);
    }
    Ok(n_t * n_t / var)
}

/// Direct-detection SNR at an arbitrary squeeze phase, through the full
/// photon-number variance.
pub fn snr_direct_general(alpha: C64, sq: SqueezeParams) -> Result<f64, ClosedFormError> {
    let coh = CoherentParams::new(alpha);
    let n_bar = mean_photon(coh, sq);
    let var = number_variance(coh, sq);
    if var == 0.0 {
        return Ok(0.0);
    }
    Ok(n_bar * n_bar / var)
}

/// Strict upper envelope of the direct-detection SNR over all admissible
/// squeezing: `4 n̄_T²`.
pub fn snr_direct_bound(n_t: f64) -> Result<f64, ClosedFormError> {
    require_nonneg("n_t", n_t)?;
    Ok(4.0 * n_t * n_t)
}

/// Direct detection through efficiency η; loss mixes shot noise back in:
/// `η n̄² / (η var_sq + (1 − η) n̄)` with the squeeze phase optimal.
pub fn snr_direct_lossy(n_in: f64, r: f64, eta: f64) -> Result<f64, ClosedFormError> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(ClosedFormError::EtaOutOfRange(eta));
    }
    require_nonneg("n_in", n_in)?;
    let occ = check_occupancy(r, n_in)?;
    let noise = SqueezeNoiseTerm::new(r)?;
    let var = (n_in - occ) * noise.reduction + 2.0 * r.cosh().powi(2) * occ;
    let denom = eta * var + (1.0 - eta) * n_in;
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(eta * n_in * n_in / denom)
}

/// Upper bound on the direct-detection SNR improvement squeezing can buy at
/// loss L = 1 − η: `1 / (1 − η)`.
pub fn squeezing_improvement_bound(eta: f64) -> Result<f64, ClosedFormError> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(ClosedFormError::EtaOutOfRange(eta));
    }
    if eta == 1.0 {
        return Err(ClosedFormError::LossBoundAtUnity);
    }
    Ok(1.0 / (1.0 - eta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn squeeze_noise_term_stays_in_unit_interval() {
        for r in [0.0, 0.3, 1.5, 6.0] {
            let term = SqueezeNoiseTerm::new(r).unwrap();
            assert!(term.reduction > 0.0 && term.reduction <= 1.0);
        }
        assert_eq!(SqueezeNoiseTerm::new(0.0).unwrap().reduction, 1.0);
        assert!(SqueezeNoiseTerm::new(-0.1).is_err());
    }

    #[test]
    fn heterodyne_examples() {
        assert_abs_diff_eq!(
            snr_heterodyne(4.0, 100.0, 0.0, 0.0).unwrap(),
            8.0,
            epsilon = 1e-14
        );
        // squeezed-vacuum LO kills the SNR
        let occ = 1.0f64.sinh().powi(2);
        assert_abs_diff_eq!(
            snr_heterodyne(4.0, occ, 1.0, 0.0).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        let want = 2.0 * (1.0 - 1.0f64.sinh().powi(2) / 100.0) * 4.0;
        assert_abs_diff_eq!(
            snr_heterodyne(4.0, 100.0, 1.0, 0.0).unwrap(),
            want,
            epsilon = 1e-12
        );
    }

    #[test]
    fn heterodyne_strictly_decreasing_in_r() {
        let mut last = f64::INFINITY;
        for k in 0..30 {
            let r = 0.05 * k as f64;
            let v = snr_heterodyne(2.0, 50.0, r, 0.3).unwrap();
            assert!(v < last);
            last = v;
        }
    }

    #[test]
    fn heterodyne_rejects_oversqueezed_lo() {
        assert!(matches!(
            snr_heterodyne(1.0, 0.5, 2.0, 0.0),
            Err(ClosedFormError::OverSqueezed { .. })
        ));
    }

    #[test]
    fn conventional_form_basics() {
        let omega = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / 1.55e-6;
        let link = RadarLinkParams::new(1e-12, 1e-3, omega, 30.0, 1e-4).unwrap();
        assert_abs_diff_eq!(link.b, 1.0 / (2.0 * link.quantization_time), epsilon = 1e-6);
        let base = snr_heterodyne_conventional(&link, 0.0, 1e6, 0.0).unwrap();
        assert_abs_diff_eq!(
            base,
            link.p_t / (HBAR * omega * link.b),
            epsilon = 1e-9 * base
        );

        // doubling the bandwidth (halving L) halves the SNR
        let link2 = RadarLinkParams::new(1e-12, 1e-3, omega, 15.0, 1e-4).unwrap();
        let half = snr_heterodyne_conventional(&link2, 0.0, 1e6, 0.0).unwrap();
        assert_abs_diff_eq!(half, base / 2.0, epsilon = 1e-9 * base);
    }

    #[test]
    fn conventional_form_consistent_with_photon_number_form() {
        let omega = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / 1.0e-6;
        let link = RadarLinkParams::new(2e-13, 5e-4, omega, 120.0, 2.5e-5).unwrap();
        let n_t = link.photon_number(link.p_t);
        let n_lo = link.photon_number(link.p_lo);
        let r = 0.4;
        let phase = 0.2;
        let a = snr_heterodyne_conventional(&link, r, n_lo, phase).unwrap();
        let b = snr_heterodyne(n_t, n_lo, r, phase).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-9 * a.abs().max(1e-30));
    }

    #[test]
    fn lossy_heterodyne_examples() {
        let base = snr_heterodyne(3.0, 80.0, 0.5, 0.1).unwrap();
        assert_abs_diff_eq!(
            snr_heterodyne_lossy(3.0, 80.0, 0.5, 0.1, 1.0).unwrap(),
            base,
            epsilon = 1e-14
        );
        assert_eq!(snr_heterodyne_lossy(3.0, 80.0, 0.5, 0.1, 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            snr_heterodyne_lossy(3.0, 80.0, 0.5, 0.1, 0.37).unwrap(),
            0.37 * base,
            epsilon = 1e-14
        );
    }

    #[test]
    fn mode_count_worked_values() {
        assert_eq!(mode_count(1e-6, 1e-5, 1e-6).unwrap(), 1);
        assert_eq!(mode_count(1e-6, 1e-3, 1e-4).unwrap(), 100);
        assert_eq!(mode_count(1e-6, 1e-3, 0.0).unwrap(), 1);
    }

    #[test]
    fn split_direct_examples() {
        assert_eq!(snr_split_direct(0.0, 1.0, 5.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            snr_split_direct(0.1, 1.0, 100.0).unwrap(),
            4.0,
            epsilon = 1e-12
        );
        // angular form equals spatial form under δ = fΔθ, W = fλ/d
        let (f, lambda, d, dtheta) = (0.7, 1.2e-6, 0.05, 3.0e-6);
        let delta = f * dtheta;
        let w = f * lambda / d;
        let spatial = snr_split_direct(delta, w, 7.0).unwrap();
        let angular = snr_split_direct_angular(dtheta, d, lambda, 7.0).unwrap();
        assert_abs_diff_eq!(spatial, angular, epsilon = 1e-12 * spatial);
    }

    #[test]
    fn split_homodyne_examples() {
        // squeezed-vacuum LO at high occupancy approaches the limit form
        let n_lo = 1.0e3;
        let r = crate::gaussian::squeezed_vacuum_r(n_lo).unwrap();
        let (delta, w, n_t) = (0.05, 1.0, 2.0);
        let full = snr_split_homodyne_two_mode(delta, w, n_t, n_lo, r, 0.0).unwrap();
        let limit = snr_split_homodyne_squeezed_vacuum_limit(delta, w, n_t, n_lo).unwrap();
        assert!(
            (full / limit - 1.0).abs() < 10.0 / n_lo,
            "ratio {}",
            full / limit
        );

        // coherent LO at large occupancy: leading term (2δ/W)² n̄_T²/n̄_LO
        let v = snr_split_homodyne_two_mode(delta, w, n_t, 1e9, 0.0, std::f64::consts::FRAC_PI_2)
            .unwrap();
        assert!(v < 1e-8);

        // phase π/2 kills the cross term
        let v = snr_split_homodyne_two_mode(0.1, 1.0, 4.0, 50.0, 0.3, std::f64::consts::FRAC_PI_2)
            .unwrap();
        let want = (2.0f64 * 0.1 / 1.0).powi(2) * 16.0 / (50.0 + 4.0 * (-0.6f64).exp());
        assert_abs_diff_eq!(v, want, epsilon = 1e-12);
    }

    #[test]
    fn split_heterodyne_examples() {
        // large coherent LO: both bracket factors approach 1
        let v = snr_split_heterodyne(1e-3, 0.1, 1e-6, 2.0, 1e9, 0.0, 0.0).unwrap();
        let want = 2.0 * (0.1f64 * 1e-3 / 1e-6).powi(2) * 2.0;
        assert_abs_diff_eq!(v / want, 1.0, epsilon = 1e-6);

        // squeezed-vacuum LO: numerator factor vanishes
        let n_lo = 25.0;
        let r = crate::gaussian::squeezed_vacuum_r(n_lo).unwrap();
        let v = snr_split_heterodyne(1e-3, 0.1, 1e-6, 2.0, n_lo, r, 0.0).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-10);

        // the two variants agree as n̄_T → 0
        let a = snr_split_heterodyne(1e-3, 0.1, 1e-6, 1e-9, 50.0, 0.4, 0.2).unwrap();
        let b = snr_split_heterodyne_both_even(1e-3, 0.1, 1e-6, 1e-9, 50.0, 0.4, 0.2).unwrap();
        assert_abs_diff_eq!(a / b, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn phase_change_examples() {
        assert_eq!(snr_phase_change(0.0, 2.0, 100.0, 0.3, 1.0).unwrap(), 0.0);
        let dtheta = 1e-3;
        let v = snr_phase_change(dtheta, 2.0, 1e9, 0.0, std::f64::consts::FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(v / (2.0 * dtheta * dtheta * 2.0), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn balanced_examples() {
        let hom = snr_balanced(
            BalancedKind::Homodyne,
            3.0,
            100.0,
            0.0,
            std::f64::consts::FRAC_PI_2,
        )
        .unwrap();
        assert_abs_diff_eq!(hom, 12.0, epsilon = 1e-12);
        let het = snr_balanced(BalancedKind::Heterodyne, 3.0, 100.0, 0.4, 0.7).unwrap();
        let hom2 = snr_balanced(BalancedKind::Homodyne, 3.0, 100.0, 0.4, 0.7).unwrap();
        assert_abs_diff_eq!(hom2 / het, 2.0, epsilon = 1e-12);
        let occ = 0.9f64.sinh().powi(2);
        assert_abs_diff_eq!(
            snr_balanced(BalancedKind::Homodyne, 3.0, occ, 0.9, 1.0).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn direct_examples() {
        assert_abs_diff_eq!(snr_direct(7.0, 0.0).unwrap(), 7.0, epsilon = 1e-12);
        // moderate squeezing on a bright return approaches n̄_T e^{2r}
        let v = snr_direct(1.0e4, 1.0).unwrap();
        let approx_form = 1.0e4 * 2.0f64.exp();
        assert!((v / approx_form - 1.0).abs() < 0.01);
        // squeezed vacuum: n̄ = sinh²r reduces to tanh²r / 2
        let r = 0.9f64;
        let v = snr_direct(r.sinh().powi(2), r).unwrap();
        assert_abs_diff_eq!(v, r.tanh().powi(2) / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn direct_increasing_while_weakly_squeezed() {
        let n_t = 100.0;
        let mut last = 0.0;
        let mut r = 0.0f64;
        while n_t / 100.0 > r.sinh().powi(2) {
            let v = snr_direct(n_t, r).unwrap();
            assert!(v > last);
            last = v;
            r += 0.05;
        }
    }

    #[test]
    fn direct_bound_examples() {
        assert_eq!(snr_direct_bound(10.0).unwrap(), 400.0);
        let n_t = 50.0;
        let bound = snr_direct_bound(n_t).unwrap();
        let mut sup: f64 = 0.0;
        let r_max = crate::gaussian::squeezed_vacuum_r(n_t).unwrap();
        for k in 0..=2000 {
            let r = r_max * k as f64 / 2000.0;
            let v = snr_direct(n_t, r).unwrap();
            assert!(v < bound);
            sup = sup.max(v / bound);
        }
        assert!(sup < 1.0);
    }

    #[test]
    fn direct_lossy_examples() {
        let n = 9.0;
        let r = 0.8;
        assert_abs_diff_eq!(
            snr_direct_lossy(n, r, 1.0).unwrap(),
            snr_direct(n, r).unwrap(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            snr_direct_lossy(n, 0.0, 0.4).unwrap(),
            0.4 * n,
            epsilon = 1e-12
        );
    }

    #[test]
    fn general_direct_form_matches_optimal_at_optimal_phase() {
        let alpha = C64::from_polar(2.0, 0.6);
        let sq = SqueezeParams::new(0.5, 1.2).unwrap(); // θ_sq = 2θ
        let n_bar = mean_photon(CoherentParams::new(alpha), sq);
        let a = snr_direct_general(alpha, sq).unwrap();
        let b = snr_direct(n_bar, 0.5).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-10 * a);
    }

    #[test]
    fn improvement_bound_examples() {
        assert_abs_diff_eq!(
            squeezing_improvement_bound(0.9).unwrap(),
            10.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            squeezing_improvement_bound(0.0).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert!(squeezing_improvement_bound(1.0).is_err());

        for eta in [0.1, 0.5, 0.9] {
            let bound = squeezing_improvement_bound(eta).unwrap();
            for n in [4.0, 16.0] {
                let r_max = crate::gaussian::squeezed_vacuum_r(n).unwrap().min(1.5) * 0.999;
                for k in 0..=15 {
                    let r = r_max * k as f64 / 15.0;
                    let ratio = snr_direct_lossy(n, r, eta).unwrap()
                        / snr_direct_lossy(n, 0.0, eta).unwrap();
                    assert!(ratio <= bound * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn bracket_bounded_by_unity() {
        for n_t in [0.5, 2.0, 10.0] {
            for n_lo in [5.0, 50.0, 5e3] {
                for r in [0.0f64, 0.4, 1.2] {
                    if r.sinh().powi(2) > n_lo {
                        continue;
                    }
                    let b = split_heterodyne_bracket(n_t, n_lo, r, 0.5).unwrap();
                    assert!(b <= 1.0);
                }
            }
        }
        // equality only in the double limit n̄_T/n̄_LO → 0, sinh²r/n̄_LO → 0
        let near = split_heterodyne_bracket(1e-9, 1e12, 1e-9, 0.5).unwrap();
        assert!((near - 1.0).abs() < 1e-9);
    }
}
