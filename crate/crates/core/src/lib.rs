//! Quantum detection theory for squeezed-light laser radar.
//!
//! The crate answers one question in two independent ways: what is the
//! equivalent signal-to-noise ratio of a photocurrent statistic that decides
//! between two hypotheses about the optical field? A truncated Fock-space
//! engine builds the hypothesis states and signal operator for each
//! detection layout and evaluates moments numerically; a library of
//! closed-form SNR expressions covers the same layouts analytically. The
//! validation layer cross-checks one against the other.
//!
//! Modules:
//! - [`fock`]: registers, states, sparse operators, truncation diagnostics
//! - [`gaussian`]: coherent and displaced-squeezed states and their moments
//! - [`geometry`]: transverse overlaps, beamsplitters, purified loss
//! - [`scenario`]: hypothesis-pair construction per detection layout
//! - [`snr`]: equivalent SNR, ROC points, minimum discernible angle
//! - [`closed_form`]: analytic SNR expressions and the radar-link form
//! - [`validate`]: scenario-versus-closed-form cross-check suite
//!
//! # Example
//!
//! Heterodyne detection of a weak coherent return against a squeezed local
//! oscillator, both ways:
//!
//! ```
//! use num_complex::Complex64 as C64;
//! use sqradar::closed_form::snr_heterodyne;
//! use sqradar::scenario::{build, DetectionScenario, ScenarioKind, ScenarioParams};
//! use sqradar::snr::equivalent_snr;
//!
//! let params = ScenarioParams {
//!     alpha_lo: C64::from(2.0), // local oscillator
//!     beta_t: C64::from(1.0),   // target return
//!     r: 0.5,                   // LO squeeze magnitude
//!     ..Default::default()
//! };
//! let pair = build(&DetectionScenario::new(ScenarioKind::HeterodyneTarget, params)).unwrap();
//! let report = equivalent_snr(&pair).unwrap();
//!
//! let n_lo = 4.0 + 0.5f64.sinh().powi(2);
//! let analytic = snr_heterodyne(1.0, n_lo, 0.5, 0.0).unwrap();
//! assert!((report.snr_numeric - analytic).abs() < 1e-9 * analytic);
//! // squeezing the LO only ever costs SNR here
//! assert!(analytic < snr_heterodyne(1.0, 4.0, 0.0, 0.0).unwrap());
//! ```

pub mod closed_form;
pub mod fock;
pub mod gaussian;
pub mod geometry;
mod linalg;
pub mod scenario;
pub mod snr;
pub mod validate;

pub use closed_form::{ClosedFormError, RadarLinkParams, SqueezeNoiseTerm};
pub use fock::{
    expectation, ladder_lower, ladder_raise, leakage, number_operator, variance, FockError,
    FrequencyTag, LinearOperator, ModeLabel, ModeRegister, PortTag, StateVector,
};
pub use gaussian::{
    displaced_squeezed_state, mean_photon, number_variance, squeezed_vacuum_r, CoherentParams,
    GaussianError, SqueezeParams,
};
pub use geometry::{
    loss_channel, plain_overlap, quadrature_overlap, signed_overlap, two_mode_bs_unitary,
    BeamSplitterSpec, GeometryError, TransverseMode, TransverseShape,
};
pub use scenario::{
    build, signal_mean, DetectionScenario, Hypothesis, HypothesisPair, ScenarioError, ScenarioKind,
    ScenarioParams,
};
pub use snr::{equivalent_snr, min_detectable_angle, roc_point, RocPoint, SnrError, SnrReport};
