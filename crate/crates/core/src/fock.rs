//! Truncated Fock-space numerics: mode registers, states, sparse operators,
//! ladder operators, expectation values and truncation diagnostics.
//!
//! Every mode in a [`ModeRegister`] keeps Fock levels `0..N-1` with a hard
//! cutoff: the raising operator annihilates the top level. A state is a dense
//! complex vector over the tensor basis; operators are sparse (photocurrent
//! operators are quadratic in ladder operators, so almost all entries vanish).
//! Truncation error is made observable through [`leakage`], the probability
//! held in the top two levels of any mode.

use num_complex::Complex64 as C64;
use thiserror::Error;

/// Default cap on the total amplitude count of a register.
pub const DEFAULT_DIM_CAP: usize = 1_000_000;

/// Tolerance used when checking Hermiticity of operators.
pub const HERMITICITY_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum FockError {
    #[error("mode {0:?} is not part of the register")]
    UnknownMode(ModeLabel),
    #[error("duplicate mode label {0:?} in register")]
    DuplicateLabel(ModeLabel),
    #[error("cutoff must be at least 2, got {0}")]
    CutoffTooSmall(usize),
    #[error("{count} cutoffs supplied for {modes} modes")]
    CutoffCountMismatch { count: usize, modes: usize },
    #[error("register dimension {dim} exceeds the cap of {cap} amplitudes")]
    DimensionCap { dim: usize, cap: usize },
    #[error("registers do not match")]
    RegisterMismatch,
    #[error("state norm {0} is too far from unity")]
    NotNormalized(f64),
    #[error("operator is not Hermitian: max entry deviation {0:.3e}")]
    NotHermitian(f64),
    #[error("variance {0:.3e} is negative beyond tolerance")]
    NegativeVariance(f64),
    #[error("amplitude vector of length {got} does not match mode cutoff {expected}")]
    AmplitudeLength { got: usize, expected: usize },
    #[error("occupation {occupation} does not fit below the cutoff {cutoff}")]
    OccupationOutOfRange { occupation: usize, cutoff: usize },
}

/// Symbolic carrier frequency of a mode.
///
/// Heterodyne frequency matching is done on these tags, never on floating
/// point frequencies: a pair of modes beats at the reference frequency
/// exactly when their [`harmonic`](FrequencyTag::harmonic) numbers differ by
/// one. `Target` sits one step above `Lo`, `Image` one step below, and
/// `ImageUpper` one step above `Target`. `Aux` modes never beat with
/// anything (loss ancillas).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrequencyTag {
    /// Target-return carrier, one heterodyne step above the local oscillator.
    Target,
    /// Local-oscillator carrier.
    Lo,
    /// Image band one heterodyne step below the local oscillator.
    Image,
    /// Image band one heterodyne step above the target carrier.
    ImageUpper,
    /// Detuned ancilla; participates in no beat note.
    Aux(u8),
}

impl FrequencyTag {
    /// Offset from the local-oscillator carrier in units of the heterodyne
    /// frequency, or `None` for ancillas.
    pub fn harmonic(self) -> Option<i32> {
        match self {
            FrequencyTag::Target => Some(1),
            FrequencyTag::Lo => Some(0),
            FrequencyTag::Image => Some(-1),
            FrequencyTag::ImageUpper => Some(2),
            FrequencyTag::Aux(_) => None,
        }
    }
}

/// Which physical port of the detection layout a mode belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PortTag {
    /// Single-detector layouts.
    Direct,
    /// Input port of a loss beamsplitter.
    In,
    /// Vacuum port of a loss beamsplitter.
    Vac,
    /// Target-side input port of a balanced beamsplitter.
    TPort,
    /// Local-oscillator-side input port of a balanced beamsplitter.
    LoPort,
}

/// Label of a single field mode: carrier tag, transverse index, port.
///
/// The transverse index selects the detector-plane profile (0 = even
/// top-hat, 1 = flipped); it only matters for split-detector scenarios.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeLabel {
    pub frequency: FrequencyTag,
    pub transverse: u8,
    pub port: PortTag,
}

impl ModeLabel {
    pub fn new(frequency: FrequencyTag, transverse: u8, port: PortTag) -> Self {
        Self {
            frequency,
            transverse,
            port,
        }
    }

    /// Shorthand for a direct-port mode with even transverse profile.
    pub fn direct(frequency: FrequencyTag) -> Self {
        Self::new(frequency, 0, PortTag::Direct)
    }
}

/// Ordered set of labeled modes with per-mode Fock cutoffs.
///
/// The tensor basis is row-major in the mode order: the last mode varies
/// fastest. Total dimension is the product of the cutoffs and is bounded by
/// a cap so an oversized scenario fails loudly instead of thrashing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeRegister {
    modes: Vec<ModeLabel>,
    cutoffs: Vec<usize>,
    strides: Vec<usize>,
    dim: usize,
}

impl ModeRegister {
    /// Register with the same cutoff for every mode.
    pub fn uniform(modes: Vec<ModeLabel>, cutoff: usize) -> Result<Self, FockError> {
        let n = modes.len();
        Self::with_cutoffs(modes, vec![cutoff; n])
    }

    /// Register with per-mode cutoffs, checked against [`DEFAULT_DIM_CAP`].
    pub fn with_cutoffs(modes: Vec<ModeLabel>, cutoffs: Vec<usize>) -> Result<Self, FockError> {
        Self::with_cutoffs_capped(modes, cutoffs, DEFAULT_DIM_CAP)
    }

    /// Register with per-mode cutoffs and an explicit dimension cap.
    pub fn with_cutoffs_capped(
        modes: Vec<ModeLabel>,
        cutoffs: Vec<usize>,
        cap: usize,
    ) -> Result<Self, FockError> {
        if cutoffs.len() != modes.len() {
            return Err(FockError::CutoffCountMismatch {
                count: cutoffs.len(),
                modes: modes.len(),
            });
        }
        for (i, m) in modes.iter().enumerate() {
            if modes[..i].contains(m) {
                return Err(FockError::DuplicateLabel(*m));
            }
        }
        let mut dim: usize = 1;
        for &n in &cutoffs {
            if n < 2 {
                return Err(FockError::CutoffTooSmall(n));
            }
            dim = dim.checked_mul(n).ok_or(FockError::DimensionCap {
                dim: usize::MAX,
                cap,
            })?;
            if dim > cap {
                return Err(FockError::DimensionCap { dim, cap });
            }
        }
        let mut strides = vec![1usize; modes.len()];
        for k in (0..modes.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * cutoffs[k + 1];
        }
        Ok(Self {
            modes,
            cutoffs,
            strides,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn cutoff(&self, k: usize) -> usize {
        self.cutoffs[k]
    }

    pub fn stride(&self, k: usize) -> usize {
        self.strides[k]
    }

    pub fn index_of(&self, mode: ModeLabel) -> Result<usize, FockError> {
        self.modes
            .iter()
            .position(|m| *m == mode)
            .ok_or(FockError::UnknownMode(mode))
    }

    /// Occupation of mode `k` in the basis state with flat index `idx`.
    pub fn occupation(&self, idx: usize, k: usize) -> usize {
        (idx / self.strides[k]) % self.cutoffs[k]
    }
}

/// Dense state vector over a register's tensor basis.
#[derive(Clone, Debug)]
pub struct StateVector {
    register: ModeRegister,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// All modes in their ground state.
    pub fn vacuum(register: ModeRegister) -> Self {
        let mut amplitudes = vec![C64::ZERO; register.dim()];
        amplitudes[0] = C64::ONE;
        Self {
            register,
            amplitudes,
        }
    }

    /// Product state from one amplitude column per mode.
    pub fn product(register: ModeRegister, columns: &[Vec<C64>]) -> Result<Self, FockError> {
        if columns.len() != register.len() {
            return Err(FockError::CutoffCountMismatch {
                count: columns.len(),
                modes: register.len(),
            });
        }
        for (k, col) in columns.iter().enumerate() {
            if col.len() != register.cutoff(k) {
                return Err(FockError::AmplitudeLength {
                    got: col.len(),
                    expected: register.cutoff(k),
                });
            }
        }
        let mut amplitudes = vec![C64::ONE];
        for col in columns {
            let mut next = Vec::with_capacity(amplitudes.len() * col.len());
            for a in &amplitudes {
                for c in col {
                    next.push(a * c);
                }
            }
            amplitudes = next;
        }
        Ok(Self {
            register,
            amplitudes,
        })
    }

    /// Basis state with the given occupation numbers.
    pub fn basis_state(register: ModeRegister, occupations: &[usize]) -> Result<Self, FockError> {
        if occupations.len() != register.len() {
            return Err(FockError::CutoffCountMismatch {
                count: occupations.len(),
                modes: register.len(),
            });
        }
        let mut idx = 0usize;
        for (k, &n) in occupations.iter().enumerate() {
            if n >= register.cutoff(k) {
                return Err(FockError::OccupationOutOfRange {
                    occupation: n,
                    cutoff: register.cutoff(k),
                });
            }
            idx += n * register.stride(k);
        }
        let mut amplitudes = vec![C64::ZERO; register.dim()];
        amplitudes[idx] = C64::ONE;
        Ok(Self {
            register,
            amplitudes,
        })
    }

    pub fn from_amplitudes(
        register: ModeRegister,
        amplitudes: Vec<C64>,
    ) -> Result<Self, FockError> {
        if amplitudes.len() != register.dim() {
            return Err(FockError::AmplitudeLength {
                got: amplitudes.len(),
                expected: register.dim(),
            });
        }
        Ok(Self {
            register,
            amplitudes,
        })
    }

    pub fn register(&self) -> &ModeRegister {
        &self.register
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64, FockError> {
        if self.register != other.register {
            return Err(FockError::RegisterMismatch);
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Probability that any mode sits in its top two Fock levels.
    ///
    /// This is the cutoff-adequacy diagnostic: a state prepared well below
    /// the cutoffs leaks nothing, while a state pressed against a cutoff
    /// shows up here long before expectation values silently degrade.
    pub fn leakage(&self) -> f64 {
        let reg = &self.register;
        let mut total = 0.0;
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            for k in 0..reg.len() {
                if reg.occupation(idx, k) + 2 >= reg.cutoff(k) {
                    total += p;
                    break;
                }
            }
        }
        total
    }
}

/// Sparse complex operator on a register's tensor basis (CSR storage).
#[derive(Clone, Debug)]
pub struct LinearOperator {
    register: ModeRegister,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl LinearOperator {
    /// Build from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(register: ModeRegister, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        let dim = register.dim();
        triplets.sort_unstable_by_key(|t| (t.0, t.1));
        let mut row_counts = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if v == C64::ZERO {
                continue;
            }
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_counts[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..dim {
            row_counts[r + 1] += row_counts[r];
        }
        Self {
            register,
            row_ptr: row_counts,
            cols,
            vals,
        }
    }

    pub fn identity(register: ModeRegister) -> Self {
        let dim = register.dim();
        let triplets = (0..dim).map(|i| (i, i, C64::ONE)).collect();
        Self::from_triplets(register, triplets)
    }

    /// Σ coeff · a_i† a_j over the given quadratic terms.
    ///
    /// Matrix elements follow the hard-cutoff convention: a term trying to
    /// raise a mode past its top level contributes nothing, exactly as the
    /// product of the truncated ladder matrices would.
    pub fn from_quadratic_terms(register: ModeRegister, terms: &[(usize, usize, C64)]) -> Self {
        let dim = register.dim();
        let mut triplets = Vec::new();
        for &(i, j, coeff) in terms {
            if coeff == C64::ZERO {
                continue;
            }
            let (si, sj) = (register.stride(i), register.stride(j));
            let ni_max = register.cutoff(i);
            for idx in 0..dim {
                let nj = register.occupation(idx, j);
                if i == j {
                    if nj > 0 {
                        triplets.push((idx, idx, coeff * nj as f64));
                    }
                } else {
                    let ni = register.occupation(idx, i);
                    if nj >= 1 && ni + 1 < ni_max {
                        let row = idx - sj + si;
                        // two separate square roots, matching the product of
                        // the truncated ladder matrices bit for bit
                        let val = coeff * (nj as f64).sqrt() * (ni as f64 + 1.0).sqrt();
                        triplets.push((row, idx, val));
                    }
                }
            }
        }
        Self::from_triplets(register, triplets)
    }

    pub fn register(&self) -> &ModeRegister {
        &self.register
    }

    pub fn dim(&self) -> usize {
        self.register.dim()
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Iterate stored entries as (row, col, value).
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim()).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |p| (r, self.cols[p], self.vals[p]))
        })
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector, FockError> {
        if self.register != state.register {
            return Err(FockError::RegisterMismatch);
        }
        let x = &state.amplitudes;
        let mut y = vec![C64::ZERO; x.len()];
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = C64::ZERO;
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[p] * x[self.cols[p]];
            }
            *out = acc;
        }
        Ok(StateVector {
            register: self.register.clone(),
            amplitudes: y,
        })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let triplets = self.entries().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::from_triplets(self.register.clone(), triplets)
    }

    /// self · other.
    pub fn matmul(&self, other: &Self) -> Result<Self, FockError> {
        if self.register != other.register {
            return Err(FockError::RegisterMismatch);
        }
        let dim = self.dim();
        let mut triplets = Vec::new();
        let mut acc: Vec<C64> = vec![C64::ZERO; dim];
        let mut touched: Vec<usize> = Vec::new();
        for r in 0..dim {
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                let k = self.cols[p];
                let v = self.vals[p];
                for q in other.row_ptr[k]..other.row_ptr[k + 1] {
                    let c = other.cols[q];
                    if acc[c] == C64::ZERO {
                        touched.push(c);
                    }
                    acc[c] += v * other.vals[q];
                }
            }
            for &c in &touched {
                triplets.push((r, c, acc[c]));
                acc[c] = C64::ZERO;
            }
            touched.clear();
        }
        Ok(Self::from_triplets(self.register.clone(), triplets))
    }

    pub fn add(&self, other: &Self) -> Result<Self, FockError> {
        if self.register != other.register {
            return Err(FockError::RegisterMismatch);
        }
        let mut triplets: Vec<_> = self.entries().collect();
        triplets.extend(other.entries());
        Ok(Self::from_triplets(self.register.clone(), triplets))
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut out = self.clone();
        for v in &mut out.vals {
            *v *= factor;
        }
        out
    }

    /// Largest entrywise deviation from the conjugate transpose.
    pub fn hermiticity_deviation(&self) -> f64 {
        let adj = self.adjoint();
        let mut dev: f64 = 0.0;
        // both CSR structures are sorted, walk rows in lockstep
        for r in 0..self.dim() {
            let (mut p, mut q) = (self.row_ptr[r], adj.row_ptr[r]);
            let (pe, qe) = (self.row_ptr[r + 1], adj.row_ptr[r + 1]);
            while p < pe || q < qe {
                let pc = if p < pe { self.cols[p] } else { usize::MAX };
                let qc = if q < qe { adj.cols[q] } else { usize::MAX };
                if pc == qc {
                    dev = dev.max((self.vals[p] - adj.vals[q]).norm());
                    p += 1;
                    q += 1;
                } else if pc < qc {
                    dev = dev.max(self.vals[p].norm());
                    p += 1;
                } else {
                    dev = dev.max(adj.vals[q].norm());
                    q += 1;
                }
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let scale = self.vals.iter().map(|v| v.norm()).fold(1.0f64, f64::max);
        self.hermiticity_deviation() <= tol * scale
    }

    /// Dense copy; intended for small registers in tests and diagnostics.
    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        let dim = self.dim();
        let mut m = vec![vec![C64::ZERO; dim]; dim];
        for (r, c, v) in self.entries() {
            m[r][c] += v;
        }
        m
    }
}

/// Lowering operator for one mode, embedded in the register's tensor basis:
/// `a|n⟩ = √n |n−1⟩` on the target mode, identity on all others.
pub fn ladder_lower(register: &ModeRegister, mode: ModeLabel) -> Result<LinearOperator, FockError> {
    let k = register.index_of(mode)?;
    let s = register.stride(k);
    let mut triplets = Vec::new();
    for idx in 0..register.dim() {
        let n = register.occupation(idx, k);
        if n >= 1 {
            triplets.push((idx - s, idx, C64::from((n as f64).sqrt())));
        }
    }
    Ok(LinearOperator::from_triplets(register.clone(), triplets))
}

/// Raising operator for one mode: adjoint of [`ladder_lower`].
///
/// Under the hard cutoff the top level is annihilated: `a†|N−1⟩ = 0`.
pub fn ladder_raise(register: &ModeRegister, mode: ModeLabel) -> Result<LinearOperator, FockError> {
    Ok(ladder_lower(register, mode)?.adjoint())
}

/// Number operator `a†a` for one mode.
pub fn number_operator(
    register: &ModeRegister,
    mode: ModeLabel,
) -> Result<LinearOperator, FockError> {
    let k = register.index_of(mode)?;
    Ok(LinearOperator::from_quadratic_terms(
        register.clone(),
        &[(k, k, C64::ONE)],
    ))
}

/// ⟨ψ|Ô|ψ⟩.
pub fn expectation(state: &StateVector, op: &LinearOperator) -> Result<C64, FockError> {
    if state.register() != op.register() {
        return Err(FockError::RegisterMismatch);
    }
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(FockError::NotNormalized(norm));
    }
    let applied = op.apply(state)?;
    state.inner(&applied)
}

/// ⟨Ô²⟩ − ⟨Ô⟩² for a Hermitian operator.
///
/// Hermiticity is verified (tolerance [`HERMITICITY_TOL`] relative to the
/// largest entry), not assumed. Values within −1e-12 of zero clamp to zero.
pub fn variance(state: &StateVector, op: &LinearOperator) -> Result<f64, FockError> {
    if !op.is_hermitian(HERMITICITY_TOL) {
        return Err(FockError::NotHermitian(op.hermiticity_deviation()));
    }
    if state.register() != op.register() {
        return Err(FockError::RegisterMismatch);
    }
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(FockError::NotNormalized(norm));
    }
    let applied = op.apply(state)?;
    let second: f64 = applied.amplitudes.iter().map(|a| a.norm_sqr()).sum();
    let mean = state.inner(&applied)?.re;
    let var = second - mean * mean;
    if var < -1e-12 {
        return Err(FockError::NegativeVariance(var));
    }
    Ok(var.max(0.0))
}

/// Probability in the top two Fock levels of any mode; see
/// [`StateVector::leakage`].
pub fn leakage(state: &StateVector) -> f64 {
    state.leakage()
}
