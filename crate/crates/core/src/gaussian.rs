//! Coherent and displaced-squeezed states, plus their analytic photon-number
//! moments.
//!
//! States are built numerically by exponentiating the truncated generators of
//! the squeeze and displacement operators and applying them to vacuum, in
//! that order: |α,ξ⟩ = D(α) Q(ξ) |0⟩. Both generators are anti-Hermitian, so
//! the construction is exactly unitary at any cutoff and truncation error
//! shows up as leakage rather than as a silent norm defect.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::fock::{FockError, ModeLabel, ModeRegister, StateVector};
use crate::linalg::{dense_lower, expm, DMat};

#[derive(Debug, Error)]
pub enum GaussianError {
    #[error("squeeze magnitude must be nonnegative, got {0}")]
    NegativeSqueeze(f64),
    #[error("mean photon number must be nonnegative, got {0}")]
    NegativeMeanPhoton(f64),
    #[error(transparent)]
    Fock(#[from] FockError),
}

/// Squeeze parameter ξ = r·e^{iθ_sq} with r ≥ 0.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SqueezeParams {
    pub r: f64,
    pub theta_sq: f64,
}

impl SqueezeParams {
    pub fn new(r: f64, theta_sq: f64) -> Result<Self, GaussianError> {
        if r < 0.0 {
            return Err(GaussianError::NegativeSqueeze(r));
        }
        Ok(Self { r, theta_sq })
    }

    pub fn none() -> Self {
        Self {
            r: 0.0,
            theta_sq: 0.0,
        }
    }

    pub fn xi(&self) -> C64 {
        C64::from_polar(self.r, self.theta_sq)
    }
}

/// Coherent amplitude α; magnitude |α| and phase θ = arg α.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CoherentParams {
    pub alpha: C64,
}

impl CoherentParams {
    pub fn new(alpha: C64) -> Self {
        Self { alpha }
    }

    pub fn magnitude(&self) -> f64 {
        self.alpha.norm()
    }

    pub fn phase(&self) -> f64 {
        self.alpha.arg()
    }
}

/// Single-mode amplitudes of D(α) Q(ξ) |0⟩ at the given cutoff.
pub fn displaced_squeezed_amplitudes(cutoff: usize, alpha: C64, sq: SqueezeParams) -> Vec<C64> {
    let a = dense_lower(cutoff);
    let n = cutoff;
    let xi = sq.xi();

    // squeeze generator (ξ* a² − ξ a†²) / 2
    let mut gen_q = DMat::zeros(n);
    // a² couples |k⟩ -> |k−2⟩ with √(k(k−1))
    for k in 2..n {
        let amp = ((k * (k - 1)) as f64).sqrt();
        let half = C64::from(0.5);
        let cur = gen_q.get(k - 2, k);
        gen_q.set(k - 2, k, cur + half * xi.conj() * amp);
        let cur = gen_q.get(k, k - 2);
        gen_q.set(k, k - 2, cur - half * xi * amp);
    }
    let u_q = expm(&gen_q);

    // displacement generator α a† − α* a
    let mut gen_d = DMat::zeros(n);
    for r in 0..n {
        for c in 0..n {
            let v = alpha * a.get(c, r).conj() - alpha.conj() * a.get(r, c);
            if v != C64::ZERO {
                gen_d.set(r, c, v);
            }
        }
    }
    let u_d = expm(&gen_d);

    let sq_col = u_q.column(0);
    let mut out = vec![C64::ZERO; n];
    u_d.matvec(&sq_col, &mut out);
    out
}

/// Displaced-squeezed state in one mode of a register, vacuum elsewhere.
///
/// Leakage is reported through the state diagnostic rather than raised here;
/// callers certify the cutoff afterwards.
pub fn displaced_squeezed_state(
    register: &ModeRegister,
    mode: ModeLabel,
    alpha: CoherentParams,
    sq: SqueezeParams,
) -> Result<StateVector, GaussianError> {
    let target = register.index_of(mode)?;
    let mut columns = Vec::with_capacity(register.len());
    for k in 0..register.len() {
        if k == target {
            columns.push(displaced_squeezed_amplitudes(
                register.cutoff(k),
                alpha.alpha,
                sq,
            ));
        } else {
            let mut vac = vec![C64::ZERO; register.cutoff(k)];
            vac[0] = C64::ONE;
            columns.push(vac);
        }
    }
    Ok(StateVector::product(register.clone(), &columns)?)
}

/// Mean photon number of |α,ξ⟩: |α|² + sinh²r.
pub fn mean_photon(alpha: CoherentParams, sq: SqueezeParams) -> f64 {
    alpha.alpha.norm_sqr() + sq.r.sinh().powi(2)
}

/// Photon-number variance of |α,ξ⟩:
///
/// (n̄ − sinh²r)·|cosh r − e^{i(θ_sq−2θ)} sinh r|² + 2 cosh²r sinh²r,
///
/// with θ = arg α and n̄ the mean photon number.
pub fn number_variance(alpha: CoherentParams, sq: SqueezeParams) -> f64 {
    let (s, c) = (sq.r.sinh(), sq.r.cosh());
    let theta = alpha.phase();
    let phi = sq.theta_sq - 2.0 * theta;
    let coherent_part = alpha.alpha.norm_sqr();
    // |c − e^{iφ} s|² = c² + s² − 2 c s cos φ
    let quad = c * c + s * s - 2.0 * c * s * phi.cos();
    coherent_part * quad + 2.0 * c * c * s * s
}

/// Inverse of the squeezed-vacuum occupancy: r with sinh²r = n̄.
pub fn squeezed_vacuum_r(n_bar: f64) -> Result<f64, GaussianError> {
    if n_bar < 0.0 {
        return Err(GaussianError::NegativeMeanPhoton(n_bar));
    }
    Ok(n_bar.sqrt().asinh())
}
