//! Small dense complex linear algebra used internally: matrix exponentials
//! for state construction and number-conserving two-mode unitaries.
//!
//! Everything here operates on matrices of at most a few hundred rows, so a
//! plain row-major `Vec<C64>` representation with a blocked triple loop is
//! fast enough and keeps the dependency surface minimal.

use num_complex::Complex64 as C64;

/// Row-major dense complex matrix.
#[derive(Clone, Debug)]
pub(crate) struct DMat {
    pub n: usize,
    pub data: Vec<C64>,
}

impl DMat {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![C64::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = C64::ONE;
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.n + c] = v;
    }

    pub fn scale(&mut self, s: C64) {
        for v in &mut self.data {
            *v *= s;
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == C64::ZERO {
                    continue;
                }
                let row_b = &other.data[k * n..(k + 1) * n];
                let row_o = &mut out.data[i * n..(i + 1) * n];
                for (o, b) in row_o.iter_mut().zip(row_b) {
                    *o += aik * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[C64], y: &mut [C64]) {
        let n = self.n;
        for (i, out) in y.iter_mut().enumerate().take(n) {
            let mut acc = C64::ZERO;
            let row = &self.data[i * n..(i + 1) * n];
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            *out = acc;
        }
    }

    pub fn one_norm(&self) -> f64 {
        let n = self.n;
        (0..n)
            .map(|c| (0..n).map(|r| self.data[r * n + c].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += *b;
        }
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.n).map(|r| self.get(r, c)).collect()
    }
}

/// Matrix exponential by scaling and squaring with a Taylor core.
///
/// The argument is scaled until its 1-norm is at most 1/2, a 24-term Taylor
/// series is summed (truncation far below machine precision at that norm),
/// and the result is squared back up.
pub(crate) fn expm(a: &DMat) -> DMat {
    let norm = a.one_norm();
    let s = if norm <= 0.5 {
        0
    } else {
        (norm / 0.5).log2().ceil() as u32
    };
    let mut scaled = a.clone();
    scaled.scale(C64::from(0.5f64.powi(s as i32)));

    let mut term = DMat::identity(a.n);
    let mut sum = DMat::identity(a.n);
    for k in 1..=24 {
        term = term.matmul(&scaled);
        term.scale(C64::from(1.0 / k as f64));
        sum.add_assign(&term);
    }
    for _ in 0..s {
        sum = sum.matmul(&sum);
    }
    sum
}

/// Truncated single-mode lowering operator as a dense matrix.
pub(crate) fn dense_lower(n: usize) -> DMat {
    let mut a = DMat::zeros(n);
    for k in 1..n {
        a.set(k - 1, k, C64::from((k as f64).sqrt()));
    }
    a
}

/// Hermitian `h` with `exp(i h) = b` for a 2×2 unitary `b` (principal log).
pub(crate) fn log_unitary_2x2(b: [[C64; 2]; 2]) -> [[C64; 2]; 2] {
    let tr = b[0][0] + b[1][1];
    let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
    let disc = (tr * tr - 4.0 * det).sqrt();
    let l1 = (tr + disc) / 2.0;
    let l2 = (tr - disc) / 2.0;
    if (l1 - l2).norm() < 1e-14 {
        // scalar matrix: b = l1 * I
        let th = l1.arg();
        return [[C64::from(th), C64::ZERO], [C64::ZERO, C64::from(th)]];
    }
    // eigenvector for l1: a nonzero column of (b - l2 I)
    let m = [[b[0][0] - l2, b[0][1]], [b[1][0], b[1][1] - l2]];
    let col0_norm = m[0][0].norm_sqr() + m[1][0].norm_sqr();
    let col1_norm = m[0][1].norm_sqr() + m[1][1].norm_sqr();
    let (mut v0, mut v1) = if col0_norm >= col1_norm {
        (m[0][0], m[1][0])
    } else {
        (m[0][1], m[1][1])
    };
    let nv = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
    v0 /= nv;
    v1 /= nv;
    // orthogonal complement spans the l2 eigenspace (b is normal)
    let (w0, w1) = (-v1.conj(), v0.conj());
    let (t1, t2) = (l1.arg(), l2.arg());
    let mut h = [[C64::ZERO; 2]; 2];
    let vs = [v0, v1];
    let ws = [w0, w1];
    for r in 0..2 {
        for c in 0..2 {
            h[r][c] = t1 * vs[r] * vs[c].conj() + t2 * ws[r] * ws[c].conj();
        }
    }
    h
}

/// Number-conserving two-mode unitary `exp(i Σ h_jk a_j† a_k)` stored as one
/// dense block per total-photon sector.
///
/// The generator never mixes sectors, so each sector of the (na × nb)
/// truncated product space is exponentiated independently; the result is
/// exactly unitary whatever the cutoffs.
pub(crate) struct TwoModeUnitary {
    /// blocks[s] covers basis states (k, s−k) with k in sector_span(s)
    pub blocks: Vec<DMat>,
}

/// Range of `n_a` within total-photon sector `s`: `k_min..=k_max`.
pub(crate) fn sector_span(s: usize, na: usize, nb: usize) -> (usize, usize) {
    let k_min = s.saturating_sub(nb - 1);
    let k_max = s.min(na - 1);
    (k_min, k_max)
}

impl TwoModeUnitary {
    pub fn from_hermitian(h: [[C64; 2]; 2], na: usize, nb: usize) -> Self {
        let mut blocks = Vec::new();
        for s in 0..=(na - 1 + nb - 1) {
            let (k_min, k_max) = sector_span(s, na, nb);
            let d = k_max - k_min + 1;
            let mut gen = DMat::zeros(d);
            for (row, k) in (k_min..=k_max).enumerate() {
                let nb_occ = (s - k) as f64;
                gen.set(row, row, C64::i() * (h[0][0] * k as f64 + h[1][1] * nb_occ));
                if k < k_max {
                    // a†b: (k, s−k) -> (k+1, s−k−1)
                    let amp = ((k as f64 + 1.0) * nb_occ).sqrt();
                    gen.set(row + 1, row, C64::i() * h[0][1] * amp);
                    gen.set(row, row + 1, C64::i() * h[1][0] * amp);
                }
            }
            blocks.push(expm(&gen));
        }
        Self { blocks }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn expm_of_zero_is_identity() {
        let e = expm(&DMat::zeros(3));
        for r in 0..3 {
            for c in 0..3 {
                let want = if r == c { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(e.get(r, c).re, want, epsilon = 1e-15);
                assert_abs_diff_eq!(e.get(r, c).im, 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn expm_matches_scalar_exponential_on_diagonal() {
        let mut a = DMat::zeros(2);
        a.set(0, 0, C64::new(0.3, -1.2));
        a.set(1, 1, C64::new(-2.0, 0.7));
        let e = expm(&a);
        assert_abs_diff_eq!(
            e.get(0, 0).re,
            C64::new(0.3, -1.2).exp().re,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            e.get(1, 1).im,
            C64::new(-2.0, 0.7).exp().im,
            epsilon = 1e-14
        );
    }

    #[test]
    fn expm_of_antihermitian_is_unitary() {
        // generator of a displacement with a large norm to exercise squaring
        let n = 24;
        let a = dense_lower(n);
        let alpha = C64::new(1.7, 0.9);
        let mut gen = DMat::zeros(n);
        for r in 0..n {
            for c in 0..n {
                gen.set(
                    r,
                    c,
                    alpha * a.get(c, r).conj() - alpha.conj() * a.get(r, c),
                );
            }
        }
        let u = expm(&gen);
        // U† U = I
        for r in 0..n {
            for c in 0..n {
                let mut acc = C64::ZERO;
                for k in 0..n {
                    acc += u.get(k, r).conj() * u.get(k, c);
                }
                let want = if r == c { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(acc.re, want, epsilon = 1e-12);
                assert_abs_diff_eq!(acc.im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn log_unitary_roundtrips() {
        let cases = [
            [[C64::ONE, C64::ZERO], [C64::ZERO, C64::ONE]],
            [
                [C64::from(1.0 / 2.0f64.sqrt()), C64::i() / 2.0f64.sqrt()],
                [C64::i() / 2.0f64.sqrt(), C64::from(1.0 / 2.0f64.sqrt())],
            ],
            [
                [C64::from(0.6), C64::from(0.8)],
                [C64::from(0.8), C64::from(-0.6)],
            ],
        ];
        for b in cases {
            let h = log_unitary_2x2(b);
            // exp(i h) via the 2x2 dense path
            let mut m = DMat::zeros(2);
            for r in 0..2 {
                for c in 0..2 {
                    m.set(r, c, C64::i() * h[r][c]);
                    // h must be Hermitian
                    assert_abs_diff_eq!((h[r][c] - h[c][r].conj()).norm(), 0.0, epsilon = 1e-12);
                }
            }
            let e = expm(&m);
            for r in 0..2 {
                for c in 0..2 {
                    assert_abs_diff_eq!((e.get(r, c) - b[r][c]).norm(), 0.0, epsilon = 1e-12);
                }
            }
        }
    }
}
