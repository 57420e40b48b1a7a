//! The three operator families of the search loop — Walsh-Hadamard `W`,
//! selective phase rotation (including the reflection `R`), and the
//! diffusion transform `D` — each in independently verifiable forms.
//!
//! `D` is implemented three ways: the O(N) closed form (inversion about the
//! average), the `W·R·W` factorization built from the butterfly transform,
//! and dense matrix construction at small `n`. The closed form is the
//! production path; the other two exist to disagree loudly when one of them
//! is wrong.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::oracle::OracleSpec;
use crate::statevec::StateVector;
use crate::sum;

/// Dense `N×N` construction is limited to 8 qubits (a 256×256 matrix).
pub const DENSE_CAP_QUBITS: usize = 8;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

// ---------------------------------------------------------------------------
// Walsh-Hadamard
// ---------------------------------------------------------------------------

/// In-place Walsh-Hadamard transform, unitary convention: entry `(x, y)` of
/// the full matrix is `2^{-n/2}·(−1)^{x·y}` with `x·y` the parity of the
/// bitwise AND. Runs as per-bit butterflies from bit 0 upward, two bits at a
/// time; O(N log N) time, O(1) extra space.
pub fn walsh_hadamard(state: &mut StateVector) {
    fwht(state.amplitudes_mut());
}

fn fwht(amps: &mut [Complex64]) {
    let n = amps.len();
    let mut step = 1usize;
    // Radix-4 passes fuse two adjacent bits to halve memory traffic.
    while 4 * step <= n {
        let block = 4 * step;
        if n / block >= 2 {
            amps.par_chunks_mut(block)
                .for_each(|chunk| radix4_block(chunk, step));
        } else {
            radix4_block(amps, step);
        }
        step *= 4;
    }
    if 2 * step <= n {
        // Odd qubit count: one radix-2 pass on the top bit (a single block).
        let (lo, hi) = amps.split_at_mut(step);
        lo.par_iter_mut().zip(hi.par_iter_mut()).for_each(|(a, b)| {
            let x = *a;
            let y = *b;
            *a = (x + y) * FRAC_1_SQRT_2;
            *b = (x - y) * FRAC_1_SQRT_2;
        });
    }
}

#[inline]
fn radix4_block(chunk: &mut [Complex64], step: usize) {
    for offset in 0..step {
        let a = chunk[offset];
        let b = chunk[offset + step];
        let c = chunk[offset + 2 * step];
        let d = chunk[offset + 3 * step];
        let apb = a + b;
        let amb = a - b;
        let cpd = c + d;
        let cmd = c - d;
        chunk[offset] = (apb + cpd) * 0.5;
        chunk[offset + step] = (amb + cmd) * 0.5;
        chunk[offset + 2 * step] = (apb - cpd) * 0.5;
        chunk[offset + 3 * step] = (amb - cmd) * 0.5;
    }
}

// ---------------------------------------------------------------------------
// Selective phase rotation
// ---------------------------------------------------------------------------

/// Phase angles per basis index; an absent index means zero phase. Applying
/// a `PhaseSpec` never changes any amplitude magnitude.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PhaseSpec {
    angles: BTreeMap<usize, f64>,
}

impl PhaseSpec {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        let mut spec = Self::default();
        for (index, radians) in pairs {
            spec.set(index, radians)?;
        }
        Ok(spec)
    }

    pub fn set(&mut self, index: usize, radians: f64) -> Result<()> {
        if !radians.is_finite() {
            return Err(Error::NonFinite {
                context: format!("phase angle for index {index}"),
            });
        }
        self.angles.insert(index, radians);
        Ok(())
    }

    pub fn angle(&self, index: usize) -> f64 {
        self.angles.get(&index).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.angles.iter().map(|(&i, &r)| (i, r))
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

/// Multiplies each listed amplitude by `e^{jφ}`. Probabilities are untouched
/// since `|e^{jφ}| = 1`.
pub fn selective_phase(state: &mut StateVector, spec: &PhaseSpec) -> Result<()> {
    let len = state.len();
    let qubits = state.qubit_count();
    for (index, radians) in spec.iter() {
        if index >= len {
            return Err(Error::IndexOutOfRange {
                index,
                qubits,
                states: len,
            });
        }
        let rotation = Complex64::from_polar(1.0, radians);
        let amps = state.amplitudes_mut();
        amps[index] *= rotation;
    }
    Ok(())
}

/// Conditional phase flip: negates the amplitude of every marked state and
/// leaves the rest untouched. This is the π-radian case of the selective
/// rotation, applied exactly (no `exp` rounding).
pub fn oracle_flip(state: &mut StateVector, oracle: &OracleSpec) -> Result<()> {
    let len = state.len();
    let qubits = state.qubit_count();
    if let Some(&max) = oracle.targets().iter().next_back() {
        if max >= len {
            return Err(Error::IndexOutOfRange {
                index: max,
                qubits,
                states: len,
            });
        }
    }
    let amps = state.amplitudes_mut();
    for &t in oracle.targets() {
        amps[t] = -amps[t];
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Diffusion
// ---------------------------------------------------------------------------

/// The diffusion transform in closed form: every component moves to
/// `2A − v_i` where `A` is the mean amplitude. O(N): one pairwise-summed
/// pass for the mean, one update pass.
pub fn diffusion(state: &mut StateVector) {
    let n = state.len() as f64;
    let mean = sum::pairwise_sum_complex(state.amplitudes()) / n;
    let two_a = mean * 2.0;
    state
        .amplitudes_mut()
        .par_iter_mut()
        .for_each(|v| *v = two_a - *v);
}

/// The reflection `R`: identity on basis index 0, negation everywhere else.
pub fn reflect_about_zero(state: &mut StateVector) {
    let amps = state.amplitudes_mut();
    amps[1..].par_iter_mut().for_each(|v| *v = -*v);
}

/// Diffusion by the `W·R·W` factorization. Independently coded from
/// [`diffusion`]; the two must agree to 1e-12 componentwise, and
/// disagreement is the strongest available bug detector.
pub fn diffusion_via_wrw(state: &mut StateVector) {
    walsh_hadamard(state);
    reflect_about_zero(state);
    walsh_hadamard(state);
}

// ---------------------------------------------------------------------------
// Dense small-N construction
// ---------------------------------------------------------------------------

/// Which operator to build as a dense matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    /// `W`: entries `2^{-n/2}·(−1)^{x·y}`.
    WalshHadamard,
    /// `R`: diag(1, −1, −1, …).
    ReflectZero,
    /// `D`: `2/N` off-diagonal, `−1 + 2/N` on the diagonal.
    Diffusion,
    /// `P`: every entry `1/N`; projects onto the uniform vector.
    MeanProjection,
    Identity,
}

/// Dense `N×N` complex matrix for small-`n` cross-validation.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitMatrix {
    dim: usize,
    entries: Vec<Complex64>, // row-major
}

impl ExplicitMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    fn zeros(dim: usize) -> Self {
        ExplicitMatrix {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn from_fn<F>(dim: usize, f: F) -> Self
    where
        F: Fn(usize, usize) -> Complex64,
    {
        let mut m = Self::zeros(dim);
        for row in 0..dim {
            for col in 0..dim {
                m.entries[row * dim + col] = f(row, col);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        assert!(row < self.dim && col < self.dim, "entry index out of range");
        self.entries[row * self.dim + col]
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length must match matrix dim");
        self.entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(m, x)| m * x).sum())
            .collect()
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix dims must match");
        let dim = self.dim;
        let mut out = Self::zeros(dim);
        for row in 0..dim {
            for k in 0..dim {
                let a = self.entries[row * dim + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for col in 0..dim {
                    out.entries[row * dim + col] += a * rhs.entries[k * dim + col];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.entry(c, r).conj())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "matrix dims must match");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `M·M† − I`.
    pub fn unitarity_residual(&self) -> f64 {
        self.matmul(&self.dagger())
            .max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }
}

/// Builds the requested operator as a dense matrix; capped at
/// [`DENSE_CAP_QUBITS`] because the construction is O(N²).
pub fn explicit_operator(kind: OperatorKind, qubits: usize) -> Result<ExplicitMatrix> {
    if qubits == 0 || qubits > DENSE_CAP_QUBITS {
        return Err(Error::DenseCap {
            requested: qubits,
            cap: DENSE_CAP_QUBITS,
        });
    }
    let dim = 1usize << qubits;
    let n = dim as f64;
    let m = match kind {
        OperatorKind::WalshHadamard => {
            let scale = (-(qubits as f64) / 2.0).exp2();
            ExplicitMatrix::from_fn(dim, |row, col| {
                let sign = if (row & col).count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                Complex64::new(scale * sign, 0.0)
            })
        }
        OperatorKind::ReflectZero => ExplicitMatrix::from_fn(dim, |row, col| {
            if row != col {
                Complex64::new(0.0, 0.0)
            } else if row == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(-1.0, 0.0)
            }
        }),
        OperatorKind::Diffusion => ExplicitMatrix::from_fn(dim, |row, col| {
            if row == col {
                Complex64::new(-1.0 + 2.0 / n, 0.0)
            } else {
                Complex64::new(2.0 / n, 0.0)
            }
        }),
        OperatorKind::MeanProjection => {
            ExplicitMatrix::from_fn(dim, |_, _| Complex64::new(1.0 / n, 0.0))
        }
        OperatorKind::Identity => ExplicitMatrix::identity(dim),
    };
    Ok(m)
}

/// Dense diagonal ±1 matrix of the conditional phase flip for `oracle`.
pub fn explicit_oracle_flip(oracle: &OracleSpec) -> Result<ExplicitMatrix> {
    let qubits = oracle.qubit_count();
    if qubits > DENSE_CAP_QUBITS {
        return Err(Error::DenseCap {
            requested: qubits,
            cap: DENSE_CAP_QUBITS,
        });
    }
    let dim = 1usize << qubits;
    Ok(ExplicitMatrix::from_fn(dim, |row, col| {
        if row != col {
            Complex64::new(0.0, 0.0)
        } else if oracle.is_target(row) {
            Complex64::new(-1.0, 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        }
    }))
}
