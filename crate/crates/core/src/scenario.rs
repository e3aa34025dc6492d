//! Construction of hypothesis pairs: for each detection layout, the reduced
//! mode register, the two hypothesis states, and the photocurrent signal
//! operator.
//!
//! Operator coefficients are in scaled detector units: the common physical
//! prefactor multiplying every photocurrent term cancels in the SNR and is
//! set to one. Under that convention each heterodyne beat term carries
//! coefficient 1 (times a transverse overlap factor for split detectors)
//! and each equal-frequency (direct/homodyne) term carries coefficient 2.
//!
//! Heterodyne frequency matching is symbolic: a pair of modes couples
//! exactly when their [`FrequencyTag::harmonic`] numbers differ by one.
//! Loss ancillas have no harmonic number and therefore never couple.
//!
//! Split-detector layouts compare a displaced beam against a centered one.
//! The two hypotheses use the same amplitudes but different operator matrix
//! elements (the overlap integrals are evaluated in each hypothesis' own
//! beam geometry), so a pair carries a second operator for the null
//! hypothesis whenever the geometry moves.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::closed_form::{self, BalancedKind, ClosedFormError};
use crate::fock::{
    expectation, FockError, FrequencyTag, LinearOperator, ModeLabel, ModeRegister, PortTag,
    StateVector,
};
use crate::gaussian::{displaced_squeezed_amplitudes, GaussianError, SqueezeParams};
use crate::geometry::{loss_channel, signed_overlap, GeometryError, TransverseMode};

/// Fock cutoff used for vacuum bystander modes; they hold at most one
/// quantum under a single operator application.
const VACUUM_CUTOFF: usize = 3;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unknown scenario kind `{0}`")]
    UnknownKind(String),
    #[error("scenario requires parameter `{0}`")]
    MissingParam(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Gaussian(#[from] GaussianError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
}

/// The detection layouts the builder knows how to assemble.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    HeterodyneTarget,
    HeterodyneTargetLossy,
    DirectTarget,
    DirectTargetLossy,
    SplitDirectSingle,
    SplitHomodyneTwoMode,
    SplitHeterodyne,
    SplitHeterodyneBothEven,
    PhaseChange,
    BalancedHeterodyne,
    BalancedHomodyne,
}

impl ScenarioKind {
    pub fn all() -> &'static [ScenarioKind] {
        use ScenarioKind::*;
        &[
            HeterodyneTarget,
            HeterodyneTargetLossy,
            DirectTarget,
            DirectTargetLossy,
            SplitDirectSingle,
            SplitHomodyneTwoMode,
            SplitHeterodyne,
            SplitHeterodyneBothEven,
            PhaseChange,
            BalancedHeterodyne,
            BalancedHomodyne,
        ]
    }

    pub fn name(&self) -> &'static str {
        use ScenarioKind::*;
        match self {
            HeterodyneTarget => "HeterodyneTarget",
            HeterodyneTargetLossy => "HeterodyneTargetLossy",
            DirectTarget => "DirectTarget",
            DirectTargetLossy => "DirectTargetLossy",
            SplitDirectSingle => "SplitDirectSingle",
            SplitHomodyneTwoMode => "SplitHomodyneTwoMode",
            SplitHeterodyne => "SplitHeterodyne",
            SplitHeterodyneBothEven => "SplitHeterodyneBothEven",
            PhaseChange => "PhaseChange",
            BalancedHeterodyne => "BalancedHeterodyne",
            BalancedHomodyne => "BalancedHomodyne",
        }
    }

    pub fn required_params(&self) -> &'static [&'static str] {
        use ScenarioKind::*;
        match self {
            HeterodyneTarget => &["alpha_lo", "beta_t"],
            HeterodyneTargetLossy => &["alpha_lo", "beta_t", "eta"],
            DirectTarget => &["alpha_lo"],
            DirectTargetLossy => &["alpha_lo", "eta"],
            SplitDirectSingle => &["alpha_lo", "delta", "width"],
            SplitHomodyneTwoMode => &["alpha_lo", "beta_t", "delta", "width"],
            SplitHeterodyne | SplitHeterodyneBothEven => &["alpha_lo", "beta_t", "delta", "width"],
            PhaseChange => &["alpha_lo", "beta_t", "delta_theta_t"],
            BalancedHeterodyne | BalancedHomodyne => &["alpha_lo", "beta_t"],
        }
    }

    pub fn optional_params(&self) -> &'static [&'static str] {
        use ScenarioKind::*;
        match self {
            HeterodyneTarget
            | HeterodyneTargetLossy
            | SplitHeterodyne
            | SplitHeterodyneBothEven
            | PhaseChange
            | BalancedHeterodyne => &["r", "theta_sq", "theta_h", "cutoff"],
            DirectTarget | DirectTargetLossy | SplitDirectSingle | SplitHomodyneTwoMode
            | BalancedHomodyne => &["r", "theta_sq", "cutoff"],
        }
    }
}

impl std::fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ScenarioKind {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScenarioKind::all()
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| ScenarioError::UnknownKind(s.to_owned()))
    }
}

/// Physical parameters of a scenario. Fields not used by a kind are ignored.
///
/// `theta_sq = None` selects the squeeze phase that minimizes the decision
/// variance for that layout (the convention the closed forms assume). For
/// direct-detection kinds the occupied mode's amplitude is `alpha_lo`; there
/// is no local oscillator.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ScenarioParams {
    /// Local-oscillator amplitude α (occupied-mode amplitude for direct kinds).
    pub alpha_lo: C64,
    /// Target-return amplitude β.
    pub beta_t: C64,
    /// Squeeze magnitude r ≥ 0.
    pub r: f64,
    /// Squeeze phase; `None` means the per-layout optimum.
    pub theta_sq: Option<f64>,
    /// Heterodyne reference phase θ_H.
    pub theta_h: f64,
    /// Beam displacement δ (split kinds).
    pub delta: f64,
    /// Beam width W at the detector (split kinds).
    pub width: f64,
    /// Quantum efficiency η (lossy kinds).
    pub eta: f64,
    /// Target phase increment δθ_T (phase-change kind).
    pub delta_theta_t: f64,
    /// Uniform Fock cutoff; `None` sizes each mode automatically.
    pub cutoff: Option<usize>,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            alpha_lo: C64::ZERO,
            beta_t: C64::ZERO,
            r: 0.0,
            theta_sq: None,
            theta_h: 0.0,
            delta: 0.0,
            width: 1.0,
            eta: 1.0,
            delta_theta_t: 0.0,
            cutoff: None,
        }
    }
}

/// A detection layout plus its parameters.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct DetectionScenario {
    pub kind: ScenarioKind,
    pub params: ScenarioParams,
}

impl DetectionScenario {
    pub fn new(kind: ScenarioKind, params: ScenarioParams) -> Self {
        Self { kind, params }
    }
}

/// Which hypothesis a quantity refers to.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    H0,
    H1,
}

/// The assembled pair of hypothesis states and the signal operator.
///
/// `signal_op` carries the alternative-hypothesis beam geometry. For split
/// detectors, where the null hypothesis is the same beam centered, the
/// operator's overlap coefficients change with the geometry and
/// `signal_op_h0` holds the centered-geometry matrix; for every other kind
/// it is `None` and both hypotheses share `signal_op`.
#[derive(Clone, Debug)]
pub struct HypothesisPair {
    pub psi0: StateVector,
    pub psi1: StateVector,
    pub signal_op: LinearOperator,
    pub signal_op_h0: Option<LinearOperator>,
    pub variance_hypothesis: Hypothesis,
}

impl HypothesisPair {
    /// Operator whose matrix elements apply under the given hypothesis.
    pub fn op_for(&self, h: Hypothesis) -> &LinearOperator {
        match h {
            Hypothesis::H0 => self.signal_op_h0.as_ref().unwrap_or(&self.signal_op),
            Hypothesis::H1 => &self.signal_op,
        }
    }

    pub fn state_for(&self, h: Hypothesis) -> &StateVector {
        match h {
            Hypothesis::H0 => &self.psi0,
            Hypothesis::H1 => &self.psi1,
        }
    }
}

/// ⟨ψ_h|Ŝ|ψ_h⟩ for the requested hypothesis.
pub fn signal_mean(pair: &HypothesisPair, h: Hypothesis) -> Result<f64, ScenarioError> {
    let val = expectation(pair.state_for(h), pair.op_for(h))?;
    if val.im.abs() > 1e-9 * (1.0 + val.re.abs()) {
        return Err(ScenarioError::InvalidParam(format!(
            "signal mean has residual imaginary part {:.3e}",
            val.im
        )));
    }
    Ok(val.re)
}

/// Squeeze phase minimizing the decision variance for the given layout.
pub fn optimal_theta_sq(kind: ScenarioKind, params: &ScenarioParams) -> f64 {
    use ScenarioKind::*;
    match kind {
        // variance is squeeze-phase independent for these layouts
        HeterodyneTarget | HeterodyneTargetLossy | BalancedHeterodyne | BalancedHomodyne => 0.0,
        DirectTarget | DirectTargetLossy | SplitDirectSingle => 2.0 * params.alpha_lo.arg(),
        SplitHomodyneTwoMode => 2.0 * params.beta_t.arg(),
        SplitHeterodyne | SplitHeterodyneBothEven | PhaseChange => {
            2.0 * params.beta_t.arg() + 2.0 * params.theta_h
        }
    }
}

// ---------------------------------------------------------------------------
// internal build plan
// ---------------------------------------------------------------------------

#[derive(Copy, Clone)]
enum Occupation {
    Vacuum,
    Field { alpha: C64, sq: SqueezeParams },
}

struct ModePlan {
    label: ModeLabel,
    cutoff: usize,
    occ0: Occupation,
    occ1: Occupation,
    /// (alternative-hypothesis geometry, null-hypothesis geometry)
    profiles: Option<(TransverseMode, TransverseMode)>,
}

#[derive(Copy, Clone)]
enum CouplingRule {
    /// Beat terms between modes one harmonic apart, phase e^{∓iθ_H}.
    Heterodyne { theta_h: f64 },
    /// Equal-frequency terms, coefficient 2.
    Homodyne,
    /// Cross-port beat terms of the balanced difference current.
    BalancedHeterodyne { theta_h: f64 },
    /// Cross-port equal-frequency terms of the balanced difference current.
    BalancedHomodyne,
}

#[derive(Copy, Clone, PartialEq, Eq)]
enum Geometry {
    H0,
    H1,
}

/// Per-mode amplitude tail that automatic sizing drives the top two Fock
/// levels below; keeps multi-mode leakage near 1e-11.
const TAIL_TARGET: f64 = 2.5e-12;

fn auto_cutoff(amp_mag: f64, r: f64) -> usize {
    let s2 = r.sinh().powi(2);
    let n_bar = amp_mag * amp_mag + s2;
    if n_bar == 0.0 {
        return 4;
    }
    // Poissonian bulk margin plus the squeezed tail, which decays only like
    // tanh(r)^n per level and dominates the cutoff at strong squeezing.
    let bulk = 7.0 * (n_bar + 1.0).sqrt() + 12.0;
    let t = r.tanh();
    let squeezed_tail = if t > 0.02 {
        (1.0 / TAIL_TARGET).ln() / -t.ln()
    } else {
        0.0
    };
    (n_bar + bulk + squeezed_tail).ceil() as usize
}

fn occupied(alpha: C64, sq: SqueezeParams) -> Occupation {
    Occupation::Field { alpha, sq }
}

impl ModePlan {
    fn new(label: ModeLabel, cutoff: usize, occ: Occupation) -> Self {
        Self {
            label,
            cutoff,
            occ0: occ,
            occ1: occ,
            profiles: None,
        }
    }

    fn with_hypotheses(
        label: ModeLabel,
        cutoff: usize,
        occ0: Occupation,
        occ1: Occupation,
    ) -> Self {
        Self {
            label,
            cutoff,
            occ0,
            occ1,
            profiles: None,
        }
    }

    fn with_profiles(mut self, h1: TransverseMode, h0: TransverseMode) -> Self {
        self.profiles = Some((h1, h0));
        self
    }
}

fn transverse_factor(
    a: &ModePlan,
    b: &ModePlan,
    geometry: Geometry,
    width: f64,
) -> Result<f64, ScenarioError> {
    match (&a.profiles, &b.profiles) {
        (Some((a1, a0)), Some((b1, b0))) => {
            let (pa, pb) = match geometry {
                Geometry::H1 => (a1, b1),
                Geometry::H0 => (a0, b0),
            };
            Ok(signed_overlap(pa, pb)? / width)
        }
        (None, None) => Ok(1.0),
        _ => Err(ScenarioError::InvalidParam(
            "register mixes profiled and unprofiled modes".into(),
        )),
    }
}

fn coupling_terms(
    plans: &[ModePlan],
    rule: CouplingRule,
    geometry: Geometry,
    width: f64,
) -> Result<Vec<(usize, usize, C64)>, ScenarioError> {
    let mut terms = Vec::new();
    for i in 0..plans.len() {
        let hi = match plans[i].label.frequency.harmonic() {
            Some(h) => h,
            None => continue,
        };
        // diagonal terms (equal-frequency rules only)
        if matches!(rule, CouplingRule::Homodyne) {
            let base = transverse_factor(&plans[i], &plans[i], geometry, width)?;
            if base != 0.0 {
                terms.push((i, i, C64::from(2.0 * base)));
            }
        }
        for j in (i + 1)..plans.len() {
            let hj = match plans[j].label.frequency.harmonic() {
                Some(h) => h,
                None => continue,
            };
            let coeff = match rule {
                CouplingRule::Heterodyne { theta_h } => {
                    if (hi - hj).abs() != 1 {
                        continue;
                    }
                    let base = transverse_factor(&plans[i], &plans[j], geometry, width)?;
                    C64::from_polar(base, -(hi - hj) as f64 * theta_h)
                }
                CouplingRule::Homodyne => {
                    if hi != hj {
                        continue;
                    }
                    let base = transverse_factor(&plans[i], &plans[j], geometry, width)?;
                    C64::from(2.0 * base)
                }
                CouplingRule::BalancedHeterodyne { theta_h } => {
                    if (hi - hj).abs() != 1 {
                        continue;
                    }
                    let sign = match (plans[i].label.port, plans[j].label.port) {
                        (PortTag::LoPort, PortTag::TPort) => -C64::i(),
                        (PortTag::TPort, PortTag::LoPort) => C64::i(),
                        _ => continue,
                    };
                    sign * C64::from_polar(1.0, -(hi - hj) as f64 * theta_h)
                }
                CouplingRule::BalancedHomodyne => {
                    if hi != hj {
                        continue;
                    }
                    let sign = match (plans[i].label.port, plans[j].label.port) {
                        (PortTag::LoPort, PortTag::TPort) => -C64::i(),
                        (PortTag::TPort, PortTag::LoPort) => C64::i(),
                        _ => continue,
                    };
                    sign * 2.0
                }
            };
            if coeff != C64::ZERO {
                terms.push((i, j, coeff));
                terms.push((j, i, coeff.conj()));
            }
        }
    }
    Ok(terms)
}

fn state_column(occ: Occupation, cutoff: usize) -> Vec<C64> {
    match occ {
        Occupation::Vacuum => {
            let mut col = vec![C64::ZERO; cutoff];
            col[0] = C64::ONE;
            col
        }
        Occupation::Field { alpha, sq } => displaced_squeezed_amplitudes(cutoff, alpha, sq),
    }
}

fn column_tail(col: &[C64]) -> f64 {
    col[col.len().saturating_sub(2)..]
        .iter()
        .map(|a| a.norm_sqr())
        .sum()
}

/// Hard ceiling on automatically grown cutoffs. Squeezed tails decay like
/// tanh(r)^n per level, so very deep squeezing would otherwise demand
/// thousands of levels; past this point the leakage gate reports the
/// shortfall instead.
const GROWTH_CEILING: usize = 1024;

/// Build a mode column, raising the cutoff until the measured top-two-level
/// mass drops below [`TAIL_TARGET`] (unless the caller pinned the cutoff).
fn sized_column(occ: Occupation, start: usize, pinned: bool) -> (Vec<C64>, usize) {
    let mut n = start
        .max(2)
        .min(if pinned { usize::MAX } else { GROWTH_CEILING });
    loop {
        let col = state_column(occ, n);
        if pinned || column_tail(&col) < TAIL_TARGET || n >= GROWTH_CEILING {
            return (col, n);
        }
        n = (n * 4 / 3 + 8).min(GROWTH_CEILING);
    }
}

struct BuildSpec {
    plans: Vec<ModePlan>,
    rule: CouplingRule,
    variance_hypothesis: Hypothesis,
    /// operator coefficients differ between hypotheses (moving geometry)
    split_geometry: bool,
    /// apply a loss channel with this efficiency to the labeled mode
    loss: Option<(ModeLabel, f64)>,
    width: f64,
    /// cutoffs were fixed by the caller; skip automatic growth
    pinned: bool,
}

fn assemble(spec: BuildSpec) -> Result<HypothesisPair, ScenarioError> {
    let labels: Vec<ModeLabel> = spec.plans.iter().map(|p| p.label).collect();

    // the initial cutoffs already lower-bound the register dimension; bail
    // before paying for any large matrix exponentials
    let mut dim_floor: usize = 1;
    for p in &spec.plans {
        let start = if spec.pinned {
            p.cutoff.max(2)
        } else {
            p.cutoff.clamp(2, GROWTH_CEILING)
        };
        dim_floor = dim_floor.saturating_mul(start);
    }
    if dim_floor > crate::fock::DEFAULT_DIM_CAP {
        return Err(ScenarioError::Fock(FockError::DimensionCap {
            dim: dim_floor,
            cap: crate::fock::DEFAULT_DIM_CAP,
        }));
    }

    let mut cutoffs = Vec::with_capacity(spec.plans.len());
    let mut cols0 = Vec::with_capacity(spec.plans.len());
    let mut cols1 = Vec::with_capacity(spec.plans.len());
    for p in &spec.plans {
        let (c0, n0) = sized_column(p.occ0, p.cutoff, spec.pinned);
        let (c1, n1) = sized_column(p.occ1, p.cutoff, spec.pinned);
        let n = n0.max(n1);
        cols0.push(if n0 < n { state_column(p.occ0, n) } else { c0 });
        cols1.push(if n1 < n { state_column(p.occ1, n) } else { c1 });
        cutoffs.push(n);
    }
    let register = ModeRegister::with_cutoffs(labels, cutoffs)?;

    let mut psi0 = StateVector::product(register.clone(), &cols0)?;
    let mut psi1 = StateVector::product(register.clone(), &cols1)?;

    if let Some((mode, eta)) = spec.loss {
        psi0 = loss_channel(&psi0, mode, eta)?;
        psi1 = loss_channel(&psi1, mode, eta)?;
    }
    let final_register = psi0.register().clone();

    let terms_h1 = coupling_terms(&spec.plans, spec.rule, Geometry::H1, spec.width)?;
    let signal_op = LinearOperator::from_quadratic_terms(final_register.clone(), &terms_h1);
    let signal_op_h0 = if spec.split_geometry {
        let terms_h0 = coupling_terms(&spec.plans, spec.rule, Geometry::H0, spec.width)?;
        Some(LinearOperator::from_quadratic_terms(
            final_register,
            &terms_h0,
        ))
    } else {
        None
    };

    Ok(HypothesisPair {
        psi0,
        psi1,
        signal_op,
        signal_op_h0,
        variance_hypothesis: spec.variance_hypothesis,
    })
}

// ---------------------------------------------------------------------------
// per-kind plans
// ---------------------------------------------------------------------------

fn squeeze_of(params: &ScenarioParams, kind: ScenarioKind) -> Result<SqueezeParams, ScenarioError> {
    let theta = params
        .theta_sq
        .unwrap_or_else(|| optimal_theta_sq(kind, params));
    Ok(SqueezeParams::new(params.r, theta)?)
}

fn cutoff_for(params: &ScenarioParams, amp: f64, r: f64) -> usize {
    params.cutoff.unwrap_or_else(|| auto_cutoff(amp, r))
}

fn vac_cutoff(params: &ScenarioParams) -> usize {
    params.cutoff.unwrap_or(VACUUM_CUTOFF)
}

fn check_eta(params: &ScenarioParams) -> Result<f64, ScenarioError> {
    if !(0.0..=1.0).contains(&params.eta) {
        return Err(ScenarioError::InvalidParam(format!(
            "eta must lie in [0, 1], got {}",
            params.eta
        )));
    }
    Ok(params.eta)
}

fn heterodyne_plans(
    params: &ScenarioParams,
    kind: ScenarioKind,
    include_image: bool,
) -> Result<Vec<ModePlan>, ScenarioError> {
    let sq = squeeze_of(params, kind)?;
    let mut plans = vec![
        ModePlan::with_hypotheses(
            ModeLabel::direct(FrequencyTag::Target),
            cutoff_for(params, params.beta_t.norm(), 0.0),
            Occupation::Vacuum,
            occupied(params.beta_t, SqueezeParams::none()),
        ),
        ModePlan::new(
            ModeLabel::direct(FrequencyTag::Lo),
            cutoff_for(params, params.alpha_lo.norm(), params.r),
            occupied(params.alpha_lo, sq),
        ),
    ];
    if include_image {
        plans.push(ModePlan::new(
            ModeLabel::direct(FrequencyTag::Image),
            vac_cutoff(params),
            Occupation::Vacuum,
        ));
    }
    Ok(plans)
}

/// Build the hypothesis pair for a detection scenario.
pub fn build(scenario: &DetectionScenario) -> Result<HypothesisPair, ScenarioError> {
    use ScenarioKind::*;
    let params = &scenario.params;
    if let Some(n) = params.cutoff {
        if n < 2 {
            return Err(ScenarioError::InvalidParam(format!(
                "cutoff {n} is below 2"
            )));
        }
    }
    match scenario.kind {
        HeterodyneTarget => assemble(BuildSpec {
            plans: heterodyne_plans(params, HeterodyneTarget, true)?,
            rule: CouplingRule::Heterodyne {
                theta_h: params.theta_h,
            },
            variance_hypothesis: Hypothesis::H0,
            split_geometry: false,
            loss: None,
            width: 1.0,
            pinned: params.cutoff.is_some(),
        }),
        HeterodyneTargetLossy => {
            let eta = check_eta(params)?;
            assemble(BuildSpec {
                plans: heterodyne_plans(params, HeterodyneTargetLossy, true)?,
                rule: CouplingRule::Heterodyne {
                    theta_h: params.theta_h,
                },
                variance_hypothesis: Hypothesis::H0,
                split_geometry: false,
                loss: Some((ModeLabel::direct(FrequencyTag::Target), eta)),
                width: 1.0,
                pinned: params.cutoff.is_some(),
            })
        }
        DirectTarget | DirectTargetLossy => {
            let sq = squeeze_of(params, scenario.kind)?;
            let plans = vec![ModePlan::with_hypotheses(
                ModeLabel::direct(FrequencyTag::Target),
                cutoff_for(params, params.alpha_lo.norm(), params.r),
                Occupation::Vacuum,
                occupied(params.alpha_lo, sq),
            )];
            let loss = if scenario.kind == DirectTargetLossy {
                Some((ModeLabel::direct(FrequencyTag::Target), check_eta(params)?))
            } else {
                None
            };
            assemble(BuildSpec {
                plans,
                rule: CouplingRule::Homodyne,
                variance_hypothesis: Hypothesis::H1,
                split_geometry: false,
                loss,
                width: 1.0,
                pinned: params.cutoff.is_some(),
            })
        }
        SplitDirectSingle => {
            let sq = squeeze_of(params, SplitDirectSingle)?;
            let (d, w) = (params.delta, params.width);
            let beam = occupied(params.alpha_lo, sq);
            let plans = vec![
                ModePlan::new(
                    ModeLabel::new(FrequencyTag::Target, 0, PortTag::Direct),
                    cutoff_for(params, params.alpha_lo.norm(), params.r),
                    beam,
                )
                .with_profiles(TransverseMode::even(d, w)?, TransverseMode::even(0.0, w)?),
                ModePlan::new(
                    ModeLabel::new(FrequencyTag::Target, 1, PortTag::Direct),
                    vac_cutoff(params),
                    Occupation::Vacuum,
                )
                .with_profiles(
                    TransverseMode::flipped(d, w)?,
                    TransverseMode::flipped(0.0, w)?,
                ),
            ];
            assemble(BuildSpec {
                plans,
                rule: CouplingRule::Homodyne,
                variance_hypothesis: Hypothesis::H0,
                split_geometry: true,
                loss: None,
                width: w,
                pinned: params.cutoff.is_some(),
            })
        }
        SplitHomodyneTwoMode => {
            let sq = squeeze_of(params, SplitHomodyneTwoMode)?;
            let (d, w) = (params.delta, params.width);
            let plans = vec![
                ModePlan::new(
                    ModeLabel::new(FrequencyTag::Lo, 0, PortTag::Direct),
                    cutoff_for(params, params.alpha_lo.norm(), params.r),
                    occupied(params.alpha_lo, sq),
                )
                .with_profiles(TransverseMode::even(0.0, w)?, TransverseMode::even(0.0, w)?),
                ModePlan::new(
                    ModeLabel::new(FrequencyTag::Lo, 1, PortTag::Direct),
                    cutoff_for(params, params.beta_t.norm(), 0.0),
                    occupied(params.beta_t, SqueezeParams::none()),
                )
                .with_profiles(
                    TransverseMode::flipped(d, w)?,
                    TransverseMode::flipped(0.0, w)?,
                ),
            ];
            assemble(BuildSpec {
                plans,
                rule: CouplingRule::Homodyne,
                variance_hypothesis: Hypothesis::H0,
                split_geometry: true,
                loss: None,
                width: w,
                pinned: params.cutoff.is_some(),
            })
        }
        SplitHeterodyne | SplitHeterodyneBothEven => split_heterodyne_pair(params, scenario.kind),
        PhaseChange => {
            let sq = squeeze_of(params, PhaseChange)?;
            let beta1 = params.beta_t * C64::from_polar(1.0, params.delta_theta_t);
            let plans = vec![
                ModePlan::with_hypotheses(
                    ModeLabel::direct(FrequencyTag::Target),
                    cutoff_for(params, params.beta_t.norm(), 0.0),
                    occupied(params.beta_t, SqueezeParams::none()),
                    occupied(beta1, SqueezeParams::none()),
                ),
                ModePlan::new(
                    ModeLabel::direct(FrequencyTag::Lo),
                    cutoff_for(params, params.alpha_lo.norm(), params.r),
                    occupied(params.alpha_lo, sq),
                ),
                ModePlan::new(
                    ModeLabel::direct(FrequencyTag::Image),
                    vac_cutoff(params),
                    Occupation::Vacuum,
                ),
                // the occupied target mode beats against a vacuum partner one
                // step above it, which contributes to the decision variance
                ModePlan::new(
                    ModeLabel::direct(FrequencyTag::ImageUpper),
                    vac_cutoff(params),
                    Occupation::Vacuum,
                ),
            ];
            assemble(BuildSpec {
                plans,
                rule: CouplingRule::Heterodyne {
                    theta_h: params.theta_h,
                },
                variance_hypothesis: Hypothesis::H1,
                split_geometry: false,
                loss: None,
                width: 1.0,
                pinned: params.cutoff.is_some(),
            })
        }
        BalancedHeterodyne => {
            let sq = squeeze_of(params, BalancedHeterodyne)?;
            let plans = vec![
                ModePlan::with_hypotheses(
                    ModeLabel::new(FrequencyTag::Target, 0, PortTag::TPort),
                    cutoff_for(params, params.beta_t.norm(), 0.0),
                    Occupation::Vacuum,
                    occupied(params.beta_t, SqueezeParams::none()),
                ),
                ModePlan::new(
                    ModeLabel::new(FrequencyTag::Lo, 0, PortTag::LoPort),
                    cutoff_for(params, params.alpha_lo.norm(), params.r),
                    occupied(params.alpha_lo, sq),
                ),
                ModePlan::new(
                    ModeLabel::new(FrequencyTag::Image, 0, PortTag::TPort),
                    vac_cutoff(params),
                    Occupation::Vacuum,
                ),
            ];
            assemble(BuildSpec {
                plans,
                rule: CouplingRule::BalancedHeterodyne {
                    theta_h: params.theta_h,
                },
                variance_hypothesis: Hypothesis::H0,
                split_geometry: false,
                loss: None,
                width: 1.0,
                pinned: params.cutoff.is_some(),
            })
        }
        BalancedHomodyne => {
            let sq = squeeze_of(params, BalancedHomodyne)?;
            let plans = vec![
                ModePlan::with_hypotheses(
                    ModeLabel::new(FrequencyTag::Lo, 0, PortTag::TPort),
                    cutoff_for(params, params.beta_t.norm(), 0.0),
                    Occupation::Vacuum,
                    occupied(params.beta_t, SqueezeParams::none()),
                ),
                ModePlan::new(
                    ModeLabel::new(FrequencyTag::Lo, 0, PortTag::LoPort),
                    cutoff_for(params, params.alpha_lo.norm(), params.r),
                    occupied(params.alpha_lo, sq),
                ),
            ];
            assemble(BuildSpec {
                plans,
                rule: CouplingRule::BalancedHomodyne,
                variance_hypothesis: Hypothesis::H0,
                split_geometry: false,
                loss: None,
                width: 1.0,
                pinned: params.cutoff.is_some(),
            })
        }
    }
}

fn split_heterodyne_pair(
    params: &ScenarioParams,
    kind: ScenarioKind,
) -> Result<HypothesisPair, ScenarioError> {
    let sq = squeeze_of(params, kind)?;
    let (d, w) = (params.delta, params.width);
    let lo_even = kind == ScenarioKind::SplitHeterodyneBothEven;

    // LO profile is fixed (centered); the target beam moves with δ.
    let lo_profile = if lo_even {
        TransverseMode::even(0.0, w)?
    } else {
        TransverseMode::flipped(0.0, w)?
    };
    let lo_transverse = if lo_even { 0 } else { 1 };

    let mut plans = vec![
        ModePlan::new(
            ModeLabel::new(FrequencyTag::Lo, lo_transverse, PortTag::Direct),
            cutoff_for(params, params.alpha_lo.norm(), params.r),
            occupied(params.alpha_lo, sq),
        )
        .with_profiles(lo_profile, lo_profile),
        ModePlan::new(
            ModeLabel::new(FrequencyTag::Target, 0, PortTag::Direct),
            cutoff_for(params, params.beta_t.norm(), 0.0),
            occupied(params.beta_t, SqueezeParams::none()),
        )
        .with_profiles(TransverseMode::even(d, w)?, TransverseMode::even(0.0, w)?),
    ];

    // Vacuum partners with a nonzero signed overlap against an occupied mode:
    // the flipped mode riding along with the target beam, both image-band
    // profiles at the LO frequency step below, a flipped partner at the LO
    // frequency (couples to the target), and the flipped partner one step
    // above the target, whose beat doubles the target shot noise.
    plans.push(
        ModePlan::new(
            ModeLabel::new(FrequencyTag::Target, 1, PortTag::Direct),
            vac_cutoff(params),
            Occupation::Vacuum,
        )
        .with_profiles(
            TransverseMode::flipped(d, w)?,
            TransverseMode::flipped(0.0, w)?,
        ),
    );
    if lo_even {
        plans.push(
            ModePlan::new(
                ModeLabel::new(FrequencyTag::Lo, 1, PortTag::Direct),
                vac_cutoff(params),
                Occupation::Vacuum,
            )
            .with_profiles(
                TransverseMode::flipped(0.0, w)?,
                TransverseMode::flipped(0.0, w)?,
            ),
        );
    }
    plans.push(
        ModePlan::new(
            ModeLabel::new(FrequencyTag::Image, 0, PortTag::Direct),
            vac_cutoff(params),
            Occupation::Vacuum,
        )
        .with_profiles(TransverseMode::even(0.0, w)?, TransverseMode::even(0.0, w)?),
    );
    plans.push(
        ModePlan::new(
            ModeLabel::new(FrequencyTag::Image, 1, PortTag::Direct),
            vac_cutoff(params),
            Occupation::Vacuum,
        )
        .with_profiles(
            TransverseMode::flipped(0.0, w)?,
            TransverseMode::flipped(0.0, w)?,
        ),
    );
    plans.push(
        ModePlan::new(
            ModeLabel::new(FrequencyTag::ImageUpper, 1, PortTag::Direct),
            vac_cutoff(params),
            Occupation::Vacuum,
        )
        .with_profiles(
            TransverseMode::flipped(d, w)?,
            TransverseMode::flipped(0.0, w)?,
        ),
    );

    assemble(BuildSpec {
        plans,
        rule: CouplingRule::Heterodyne {
            theta_h: params.theta_h,
        },
        variance_hypothesis: Hypothesis::H0,
        split_geometry: true,
        loss: None,
        width: w,
        pinned: params.cutoff.is_some(),
    })
}

/// Heterodyne pair with the image-band mode deleted from the register;
/// diagnostic variant used to exhibit the image band's share of the noise.
pub fn build_heterodyne_without_image(
    params: &ScenarioParams,
) -> Result<HypothesisPair, ScenarioError> {
    assemble(BuildSpec {
        plans: heterodyne_plans(params, ScenarioKind::HeterodyneTarget, false)?,
        rule: CouplingRule::Heterodyne {
            theta_h: params.theta_h,
        },
        variance_hypothesis: Hypothesis::H0,
        split_geometry: false,
        loss: None,
        width: 1.0,
        pinned: params.cutoff.is_some(),
    })
}

/// Closed-form SNR for a scenario, mapped onto the analytic expressions with
/// the same parameter conventions as [`build`].
pub fn analytic_snr(scenario: &DetectionScenario) -> Result<f64, ScenarioError> {
    use ScenarioKind::*;
    let p = &scenario.params;
    let n_lo = p.alpha_lo.norm_sqr() + p.r.sinh().powi(2);
    let n_t = p.beta_t.norm_sqr();
    let phase = p.beta_t.arg() - p.alpha_lo.arg() + p.theta_h;
    let value = match scenario.kind {
        HeterodyneTarget => closed_form::snr_heterodyne(n_t, n_lo, p.r, phase)?,
        HeterodyneTargetLossy => closed_form::snr_heterodyne_lossy(n_t, n_lo, p.r, phase, p.eta)?,
        DirectTarget => {
            let n_in = p.alpha_lo.norm_sqr() + p.r.sinh().powi(2);
            match p.theta_sq {
                None => closed_form::snr_direct(n_in, p.r)?,
                Some(theta) => {
                    closed_form::snr_direct_general(p.alpha_lo, SqueezeParams::new(p.r, theta)?)?
                }
            }
        }
        DirectTargetLossy => {
            let n_in = p.alpha_lo.norm_sqr() + p.r.sinh().powi(2);
            closed_form::snr_direct_lossy(n_in, p.r, p.eta)?
        }
        SplitDirectSingle => {
            let n_beam = p.alpha_lo.norm_sqr() + p.r.sinh().powi(2);
            closed_form::snr_split_direct(p.delta, p.width, n_beam)?
        }
        SplitHomodyneTwoMode => closed_form::snr_split_homodyne_two_mode(
            p.delta,
            p.width,
            n_t,
            n_lo,
            p.r,
            p.beta_t.arg() - p.alpha_lo.arg(),
        )?,
        SplitHeterodyne => {
            closed_form::snr_split_heterodyne(p.delta / p.width, 1.0, 1.0, n_t, n_lo, p.r, phase)?
        }
        SplitHeterodyneBothEven => closed_form::snr_split_heterodyne_both_even(
            p.delta / p.width,
            1.0,
            1.0,
            n_t,
            n_lo,
            p.r,
            phase,
        )?,
        PhaseChange => closed_form::snr_phase_change(p.delta_theta_t, n_t, n_lo, p.r, phase)?,
        BalancedHeterodyne => {
            closed_form::snr_balanced(BalancedKind::Heterodyne, n_t, n_lo, p.r, phase)?
        }
        BalancedHomodyne => closed_form::snr_balanced(
            BalancedKind::Homodyne,
            n_t,
            n_lo,
            p.r,
            p.beta_t.arg() - p.alpha_lo.arg(),
        )?,
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::variance;
    use approx::assert_abs_diff_eq;

    fn het_params(alpha: f64, beta: f64, r: f64) -> ScenarioParams {
        ScenarioParams {
            alpha_lo: C64::from(alpha),
            beta_t: C64::from(beta),
            r,
            ..Default::default()
        }
    }

    #[test]
    fn heterodyne_basic_snr_is_twice_target_occupancy() {
        let sc = DetectionScenario::new(ScenarioKind::HeterodyneTarget, het_params(2.0, 1.0, 0.0));
        let pair = build(&sc).unwrap();
        let mean0 = signal_mean(&pair, Hypothesis::H0).unwrap();
        let mean1 = signal_mean(&pair, Hypothesis::H1).unwrap();
        assert_eq!(mean0, 0.0);
        assert_abs_diff_eq!(mean1, 4.0, epsilon = 1e-9);
        let var0 = variance(&pair.psi0, &pair.signal_op).unwrap();
        let d2 = (mean1 - mean0).powi(2) / var0;
        assert_abs_diff_eq!(d2, 2.0, epsilon = 1e-8);
    }

    #[test]
    fn heterodyne_without_target_gives_zero() {
        let sc = DetectionScenario::new(ScenarioKind::HeterodyneTarget, het_params(2.0, 0.0, 0.0));
        let pair = build(&sc).unwrap();
        let mean1 = signal_mean(&pair, Hypothesis::H1).unwrap();
        assert_abs_diff_eq!(mean1, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn removing_image_mode_halves_null_variance() {
        let params = het_params(2.0, 1.0, 0.4);
        let with = build(&DetectionScenario::new(
            ScenarioKind::HeterodyneTarget,
            params,
        ))
        .unwrap();
        let without = build_heterodyne_without_image(&params).unwrap();
        let v_with = variance(&with.psi0, &with.signal_op).unwrap();
        let v_without = variance(&without.psi0, &without.signal_op).unwrap();
        assert_abs_diff_eq!(v_with / v_without, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn split_direct_mean_carries_overlap_fraction() {
        let mut params = het_params(1.5, 0.0, 0.3);
        params.delta = 0.07;
        params.width = 1.0;
        let sc = DetectionScenario::new(ScenarioKind::SplitDirectSingle, params);
        let pair = build(&sc).unwrap();
        let n_beam = crate::gaussian::mean_photon(
            crate::gaussian::CoherentParams::new(params.alpha_lo),
            SqueezeParams::new(
                params.r,
                optimal_theta_sq(ScenarioKind::SplitDirectSingle, &params),
            )
            .unwrap(),
        );
        let mean1 = signal_mean(&pair, Hypothesis::H1).unwrap();
        assert_abs_diff_eq!(mean1, (2.0 * 0.07 / 1.0) * 2.0 * n_beam, epsilon = 1e-7);
        let mean0 = signal_mean(&pair, Hypothesis::H0).unwrap();
        assert_abs_diff_eq!(mean0, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn signal_operators_are_hermitian() {
        let mut params = het_params(1.2, 0.8, 0.5);
        params.delta = 0.05;
        params.width = 1.0;
        params.eta = 0.7;
        params.delta_theta_t = 1e-3;
        params.theta_h = 0.4;
        for kind in ScenarioKind::all() {
            let pair = build(&DetectionScenario::new(*kind, params)).unwrap();
            assert!(
                pair.signal_op.is_hermitian(1e-12),
                "operator for {kind} is not Hermitian"
            );
            if let Some(op0) = &pair.signal_op_h0 {
                assert!(op0.is_hermitian(1e-12));
            }
        }
    }

    #[test]
    fn unknown_kind_parses_to_error() {
        assert!("Heterodyne".parse::<ScenarioKind>().is_err());
        assert_eq!(
            "HeterodyneTarget".parse::<ScenarioKind>().unwrap(),
            ScenarioKind::HeterodyneTarget
        );
    }

    #[test]
    fn eta_out_of_range_rejected() {
        let mut params = het_params(1.0, 0.5, 0.0);
        params.eta = 1.2;
        assert!(build(&DetectionScenario::new(
            ScenarioKind::HeterodyneTargetLossy,
            params
        ))
        .is_err());
    }

    #[test]
    fn displacement_out_of_range_rejected() {
        let mut params = het_params(1.0, 0.5, 0.0);
        params.delta = 0.8;
        params.width = 1.0;
        assert!(build(&DetectionScenario::new(
            ScenarioKind::SplitDirectSingle,
            params
        ))
        .is_err());
    }
}
