//! Transverse detector-plane geometry and passive linear optics.
//!
//! Split-detector scenarios never put transverse structure into the Fock
//! space itself; the mode profiles only produce scalar overlap integrals
//! that become operator coefficients. The profiles are piecewise constant
//! (top-hat and its sign-flipped partner), so every overlap is evaluated
//! exactly by segment enumeration, with a midpoint-rule quadrature kept
//! around as an independent oracle.
//!
//! Loss is purified: a beamsplitter routes the lost fraction into a fresh
//! vacuum ancilla which detection operators simply never touch.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::fock::{
    FockError, FrequencyTag, LinearOperator, ModeLabel, ModeRegister, PortTag, StateVector,
};
use crate::linalg::{log_unitary_2x2, sector_span, TwoModeUnitary};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("transverse modes have different widths: {0} vs {1}")]
    MismatchedWidths(f64, f64),
    #[error("displacement {0} outside the validity range [0, W/2] for width {1}")]
    DisplacementOutOfRange(f64, f64),
    #[error("width must be positive, got {0}")]
    NonPositiveWidth(f64),
    #[error("quadrature needs at least 10 points, got {0}")]
    TooFewPoints(usize),
    #[error("beamsplitter coefficients are not unitary: |t|^2 + |r|^2 = {0}")]
    NonUnitary(f64),
    #[error("beamsplitter modes must be distinct")]
    SameMode,
    #[error("quantum efficiency must lie in [0, 1], got {0}")]
    EtaOutOfRange(f64),
    #[error(transparent)]
    Fock(#[from] FockError),
}

/// Detector-plane profile shape.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TransverseShape {
    /// Unit-height top-hat over one beam width.
    TopHatEven,
    /// Sign-flipped top-hat: −1 on the left half of its support, +1 on the
    /// right.
    Flipped,
}

/// A transverse mode profile: shape, displacement of its center, beam width.
///
/// Displacements are restricted to [0, W/2]; beyond that the piecewise
/// overlap results used by the detection scenarios stop being valid.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TransverseMode {
    pub shape: TransverseShape,
    pub displacement: f64,
    pub width: f64,
}

impl TransverseMode {
    pub fn new(
        shape: TransverseShape,
        displacement: f64,
        width: f64,
    ) -> Result<Self, GeometryError> {
        if width <= 0.0 {
            return Err(GeometryError::NonPositiveWidth(width));
        }
        if !(0.0..=width / 2.0).contains(&displacement) {
            return Err(GeometryError::DisplacementOutOfRange(displacement, width));
        }
        Ok(Self {
            shape,
            displacement,
            width,
        })
    }

    pub fn even(displacement: f64, width: f64) -> Result<Self, GeometryError> {
        Self::new(TransverseShape::TopHatEven, displacement, width)
    }

    pub fn flipped(displacement: f64, width: f64) -> Result<Self, GeometryError> {
        Self::new(TransverseShape::Flipped, displacement, width)
    }

    fn support(&self) -> (f64, f64) {
        (
            self.displacement - self.width / 2.0,
            self.displacement + self.width / 2.0,
        )
    }

    /// Profile value at `x` (supports are half-open on the left edge only in
    /// a measure-zero sense; segment midpoints never hit breakpoints).
    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return 0.0;
        }
        match self.shape {
            TransverseShape::TopHatEven => 1.0,
            TransverseShape::Flipped => {
                if x <= self.displacement {
                    -1.0
                } else {
                    1.0
                }
            }
        }
    }

    fn internal_breakpoint(&self) -> Option<f64> {
        match self.shape {
            TransverseShape::TopHatEven => None,
            TransverseShape::Flipped => Some(self.displacement),
        }
    }
}

fn check_pair(a: &TransverseMode, b: &TransverseMode) -> Result<(), GeometryError> {
    if a.width != b.width {
        return Err(GeometryError::MismatchedWidths(a.width, b.width));
    }
    Ok(())
}

fn overlap_exact(a: &TransverseMode, b: &TransverseMode, signed: bool) -> f64 {
    let (alo, ahi) = a.support();
    let (blo, bhi) = b.support();
    let lo = alo.max(blo);
    let hi = ahi.min(bhi);
    if hi <= lo {
        return 0.0;
    }
    let mut cuts = vec![lo, hi];
    for p in [
        a.internal_breakpoint(),
        b.internal_breakpoint(),
        if signed { Some(0.0) } else { None },
    ]
    .into_iter()
    .flatten()
    {
        if p > lo && p < hi {
            cuts.push(p);
        }
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        if x1 <= x0 {
            continue;
        }
        let mid = 0.5 * (x0 + x1);
        let mut v = a.eval(mid) * b.eval(mid);
        if signed {
            v *= if mid < 0.0 { -1.0 } else { 1.0 };
        }
        total += v * (x1 - x0);
    }
    total
}

/// ∫ dx ε(x) u_a*(x) u_b(x) with ε the sign function, evaluated exactly.
pub fn signed_overlap(a: &TransverseMode, b: &TransverseMode) -> Result<f64, GeometryError> {
    check_pair(a, b)?;
    Ok(overlap_exact(a, b, true))
}

/// ∫ dx u_a*(x) u_b(x), evaluated exactly.
pub fn plain_overlap(a: &TransverseMode, b: &TransverseMode) -> Result<f64, GeometryError> {
    check_pair(a, b)?;
    Ok(overlap_exact(a, b, false))
}

/// Midpoint-rule overlap over [−W, W]; the independent numerical oracle for
/// [`signed_overlap`] and [`plain_overlap`].
pub fn quadrature_overlap(
    a: &TransverseMode,
    b: &TransverseMode,
    signed: bool,
    points: usize,
) -> Result<f64, GeometryError> {
    check_pair(a, b)?;
    if points < 10 {
        return Err(GeometryError::TooFewPoints(points));
    }
    let w = a.width;
    let h = 2.0 * w / points as f64;
    let mut total = 0.0;
    for i in 0..points {
        let x = -w + (i as f64 + 0.5) * h;
        let mut v = a.eval(x) * b.eval(x);
        if signed {
            v *= if x < 0.0 { -1.0 } else { 1.0 };
        }
        total += v;
    }
    Ok(total * h)
}

/// Complex transmission/reflection pair of a two-port beamsplitter.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct BeamSplitterSpec {
    pub t: C64,
    pub r: C64,
}

impl BeamSplitterSpec {
    pub fn new(t: C64, r: C64) -> Result<Self, GeometryError> {
        let s = t.norm_sqr() + r.norm_sqr();
        if (s - 1.0).abs() > 1e-12 {
            return Err(GeometryError::NonUnitary(s));
        }
        Ok(Self { t, r })
    }

    /// Real-coefficient splitter with transmitted intensity `eta`.
    pub fn lossy(eta: f64) -> Result<Self, GeometryError> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(GeometryError::EtaOutOfRange(eta));
        }
        Self::new(C64::from(eta.sqrt()), C64::from((1.0 - eta).sqrt()))
    }

    /// 50/50 splitter of the balanced-detection convention:
    /// t = 1/√2, r = i/√2.
    pub fn balanced() -> Self {
        let s = 1.0 / 2.0f64.sqrt();
        Self {
            t: C64::from(s),
            r: C64::new(0.0, s),
        }
    }

    /// Symmetric completion to a full 2×2 unitary with the given first row.
    ///
    /// Both off-diagonal entries equal `r`, which makes the conjugate spec
    /// produce the inverse unitary and reproduces the usual balanced-detector
    /// matrix at t = 1/√2, r = i/√2. For r = 0 the completion is diag(t, t*).
    pub fn completion(&self) -> [[C64; 2]; 2] {
        if self.r == C64::ZERO {
            return [[self.t, C64::ZERO], [C64::ZERO, self.t.conj()]];
        }
        let phase = self.r / self.r.conj();
        [[self.t, self.r], [self.r, -self.t.conj() * phase]]
    }
}

/// Unitary on two register modes realizing `a_out = t a + r b` in the
/// Heisenberg sense, embedded in the full tensor basis.
///
/// The generator conserves total photon number, so the operator is block
/// dense over photon-number sectors; intended for modest registers.
pub fn two_mode_bs_unitary(
    register: &ModeRegister,
    mode_a: ModeLabel,
    mode_b: ModeLabel,
    spec: &BeamSplitterSpec,
) -> Result<LinearOperator, GeometryError> {
    if mode_a == mode_b {
        return Err(GeometryError::SameMode);
    }
    let ka = register.index_of(mode_a)?;
    let kb = register.index_of(mode_b)?;
    let (na, nb) = (register.cutoff(ka), register.cutoff(kb));
    let h = log_unitary_2x2(spec.completion());
    let blocks = TwoModeUnitary::from_hermitian(h, na, nb);
    let (sa, sb) = (register.stride(ka), register.stride(kb));

    let mut triplets = Vec::new();
    for base in 0..register.dim() {
        if register.occupation(base, ka) != 0 || register.occupation(base, kb) != 0 {
            continue;
        }
        for (s, block) in blocks.blocks.iter().enumerate() {
            let (k_min, _) = sector_span(s, na, nb);
            for row in 0..block.n {
                let kr = k_min + row;
                let ridx = base + kr * sa + (s - kr) * sb;
                for col in 0..block.n {
                    let v = block.get(row, col);
                    if v == C64::ZERO {
                        continue;
                    }
                    let kc = k_min + col;
                    let cidx = base + kc * sa + (s - kc) * sb;
                    triplets.push((ridx, cidx, v));
                }
            }
        }
    }
    Ok(LinearOperator::from_triplets(register.clone(), triplets))
}

fn fresh_aux_label(register: &ModeRegister) -> ModeLabel {
    let next = register
        .modes()
        .iter()
        .filter_map(|m| match m.frequency {
            FrequencyTag::Aux(k) => Some(k + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    ModeLabel::new(FrequencyTag::Aux(next), 0, PortTag::Vac)
}

/// Send one mode through a beamsplitter of transmitted intensity `eta`,
/// purifying the loss into an appended vacuum ancilla.
///
/// The ancilla keeps the full cutoff of the source mode, so the binomial
/// redistribution of quanta is exact and the output stays pure and unit
/// norm. Detection operators never address the ancilla.
pub fn loss_channel(
    state: &StateVector,
    mode: ModeLabel,
    eta: f64,
) -> Result<StateVector, GeometryError> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(GeometryError::EtaOutOfRange(eta));
    }
    let reg = state.register();
    let k = reg.index_of(mode)?;
    let n_mode = reg.cutoff(k);
    let stride_k = reg.stride(k);

    let mut modes = reg.modes().to_vec();
    modes.push(fresh_aux_label(reg));
    let mut cutoffs = reg.cutoffs().to_vec();
    cutoffs.push(n_mode);
    let enlarged = ModeRegister::with_cutoffs(modes, cutoffs)?;

    let t = eta.sqrt();
    let r = (1.0 - eta).sqrt();
    // √(C(n,j)) t^(n−j) r^j for j = 0..=n; log-space for robustness
    let spread = |n: usize| -> Vec<f64> {
        (0..=n)
            .map(|j| {
                if t == 0.0 {
                    return if j == n { 1.0 } else { 0.0 };
                }
                if r == 0.0 {
                    return if j == 0 { 1.0 } else { 0.0 };
                }
                let ln_binom = libm::lgamma(n as f64 + 1.0)
                    - libm::lgamma(j as f64 + 1.0)
                    - libm::lgamma((n - j) as f64 + 1.0);
                (0.5 * ln_binom + (n - j) as f64 * t.ln() + j as f64 * r.ln()).exp()
            })
            .collect()
    };
    let tables: Vec<Vec<f64>> = (0..n_mode).map(spread).collect();

    let mut out = vec![C64::ZERO; enlarged.dim()];
    for (idx, amp) in state.amplitudes().iter().enumerate() {
        if *amp == C64::ZERO {
            continue;
        }
        let n = reg.occupation(idx, k);
        for (j, w) in tables[n].iter().enumerate() {
            if *w == 0.0 {
                continue;
            }
            let new_idx = (idx - j * stride_k) * n_mode + j;
            out[new_idx] += amp * *w;
        }
    }
    Ok(StateVector::from_amplitudes(enlarged, out)?)
}
