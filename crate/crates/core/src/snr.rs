//! Detection-theory layer: equivalent SNR of a hypothesis pair, Gaussian
//! threshold-test operating points, minimum discernible angle.
//!
//! ## Tail-probability convention
//!
//! The false-alarm and detection probabilities use the Gaussian upper-tail
//! function Φ̄(x) = ∫ₓ^∞ (2π)^(−1/2) e^(−t²/2) dt. Detection-theory texts
//! often write this as "erfc"; it relates to the mathematical complementary
//! error function by Φ̄(x) = erfc(x/√2)/2. The upper-tail reading is the one
//! under which the false-alarm probability at moderate thresholds lands in
//! [0, 1] as the operating-point formulas require.

use thiserror::Error;

use crate::fock::{expectation, variance, FockError};
use crate::scenario::{Hypothesis, HypothesisPair};

#[derive(Debug, Error)]
pub enum SnrError {
    #[error(
        "state leakage {value:.3e} under {hypothesis:?} exceeds the 1e-6 gate; raise the cutoff"
    )]
    LeakageTooHigh { hypothesis: Hypothesis, value: f64 },
    #[error("d_squared must be nonnegative, got {0}")]
    NegativeSnr(f64),
    #[error("observation count m must be at least 1")]
    ZeroIntervals,
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error(transparent)]
    Fock(#[from] FockError),
}

/// Equivalent SNR of a hypothesis pair plus the diagnostics that qualify it.
#[derive(Clone, Debug)]
pub struct SnrReport {
    /// D² from the Fock computation (∞ sentinel on zero variance).
    pub snr_numeric: f64,
    pub mean_h0: f64,
    pub mean_h1: f64,
    pub variance_used: f64,
    pub variance_hypothesis: Hypothesis,
    pub leakage_h0: f64,
    pub leakage_h1: f64,
    /// Closed-form value, when a comparison was requested.
    pub snr_analytic: Option<f64>,
    /// |numeric − analytic| / max(|analytic|, 1e-30).
    pub rel_error: Option<f64>,
    /// Human-readable warnings (leakage above the soft gate, zero variance).
    pub diagnostics: Vec<String>,
}

impl SnrReport {
    /// Attach an analytic reference value and compute the relative error.
    pub fn with_analytic(mut self, analytic: f64) -> Self {
        self.rel_error = Some((self.snr_numeric - analytic).abs() / analytic.abs().max(1e-30));
        self.snr_analytic = Some(analytic);
        self
    }
}

/// One operating point of the Gaussian threshold test.
#[derive(Copy, Clone, Debug)]
pub struct RocPoint {
    /// Decision threshold in standardized units.
    pub threshold_x: f64,
    /// Number of independent observation intervals M.
    pub m_intervals: u64,
    /// False-alarm probability.
    pub q0: f64,
    /// Detection probability.
    pub qd: f64,
}

/// Gaussian upper-tail probability Φ̄(x); see the module docs for the
/// relation to the textbook "erfc".
pub fn gaussian_upper_tail(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// D² = (⟨Ŝ⟩₁ − ⟨Ŝ⟩₀)² / Var from a hypothesis pair.
///
/// The variance is evaluated under the pair's declared hypothesis; the
/// engine never switches hypotheses on its own. Leakage above 1e-8 is
/// reported as a diagnostic, above 1e-6 it is an error. A zero variance
/// with a nonzero mean difference yields an infinity sentinel plus a
/// diagnostic rather than a silent division.
pub fn equivalent_snr(pair: &HypothesisPair) -> Result<SnrReport, SnrError> {
    let leakage_h0 = pair.psi0.leakage();
    let leakage_h1 = pair.psi1.leakage();
    let mut diagnostics = Vec::new();
    for (value, hypothesis) in [(leakage_h0, Hypothesis::H0), (leakage_h1, Hypothesis::H1)] {
        if value > 1e-6 {
            return Err(SnrError::LeakageTooHigh { hypothesis, value });
        }
        if value > 1e-8 {
            diagnostics.push(format!(
                "leakage {value:.3e} under {hypothesis:?} exceeds 1e-8; cutoff may be marginal"
            ));
        }
    }

    let mean_h0 = real_mean(pair, Hypothesis::H0)?;
    let mean_h1 = real_mean(pair, Hypothesis::H1)?;
    let variance_used = variance(
        pair.state_for(pair.variance_hypothesis),
        pair.op_for(pair.variance_hypothesis),
    )?;

    let diff = mean_h1 - mean_h0;
    let snr_numeric = if diff == 0.0 {
        0.0
    } else if variance_used == 0.0 {
        diagnostics.push(format!(
            "variance is zero with mean difference {diff:.3e}; reporting infinity"
        ));
        f64::INFINITY
    } else {
        diff * diff / variance_used
    };

    Ok(SnrReport {
        snr_numeric,
        mean_h0,
        mean_h1,
        variance_used,
        variance_hypothesis: pair.variance_hypothesis,
        leakage_h0,
        leakage_h1,
        snr_analytic: None,
        rel_error: None,
        diagnostics,
    })
}

fn real_mean(pair: &HypothesisPair, h: Hypothesis) -> Result<f64, SnrError> {
    Ok(expectation(pair.state_for(h), pair.op_for(h))?.re)
}

/// Operating point of the threshold test at standardized threshold `x` with
/// `m` independent intervals: Q₀ = Φ̄(x), Q_d = Φ̄(x − √(D²·m)).
pub fn roc_point(d_squared: f64, m: u64, threshold_x: f64) -> Result<RocPoint, SnrError> {
    if d_squared < 0.0 {
        return Err(SnrError::NegativeSnr(d_squared));
    }
    if m == 0 {
        return Err(SnrError::ZeroIntervals);
    }
    let shift = (d_squared * m as f64).sqrt();
    Ok(RocPoint {
        threshold_x,
        m_intervals: m,
        q0: gaussian_upper_tail(threshold_x),
        qd: gaussian_upper_tail(threshold_x - shift),
    })
}

/// Minimum discernible angular beam displacement of the split detector:
/// the angle at which the direction-finding SNR reaches one,
/// `(1 / 2√n̄_T) (λ/d)`.
pub fn min_detectable_angle(n_bar_t: f64, lambda: f64, d_aperture: f64) -> Result<f64, SnrError> {
    for (name, value) in [
        ("n_bar_t", n_bar_t),
        ("lambda", lambda),
        ("d_aperture", d_aperture),
    ] {
        if value <= 0.0 {
            return Err(SnrError::NonPositive { name, value });
        }
    }
    Ok(lambda / d_aperture / (2.0 * n_bar_t.sqrt()))
}
