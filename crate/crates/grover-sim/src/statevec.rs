//! The quantum register: a complex amplitude vector over `N = 2^n` basis
//! states, with normalization bookkeeping and Born-rule sampling.
//!
//! Normalization is monitored, never silently repaired: a transform bug that
//! leaks probability mass surfaces as [`Error::NormDrift`] instead of being
//! papered over by renormalization.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::sum;

/// Default cap on the register size: `2^26` amplitudes is 1 GiB.
pub const DEFAULT_MAX_QUBITS: usize = 26;

/// Hard cap regardless of configuration; `2^30` complex doubles is 16 GiB.
pub const ABSOLUTE_MAX_QUBITS: usize = 30;

/// Largest tolerated `|Σ|a_i|² − 1|` after any public operation.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Norm deviation beyond which sampling refuses to run.
pub const SAMPLE_NORM_TOLERANCE: f64 = 1e-6;

/// Complex amplitude vector over the `2^n` basis states of an `n`-qubit
/// register. Squared magnitudes are measurement probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

fn check_qubit_count(qubits: usize, cap: usize) -> Result<()> {
    let cap = cap.min(ABSOLUTE_MAX_QUBITS);
    if qubits == 0 || qubits > cap {
        return Err(Error::QubitCount {
            requested: qubits,
            cap,
        });
    }
    Ok(())
}

impl StateVector {
    /// The uniform superposition: every amplitude exactly `1/√N` (real).
    pub fn uniform(qubits: usize) -> Result<Self> {
        Self::uniform_with_cap(qubits, DEFAULT_MAX_QUBITS)
    }

    /// As [`StateVector::uniform`] with a caller-chosen size cap.
    pub fn uniform_with_cap(qubits: usize, cap: usize) -> Result<Self> {
        check_qubit_count(qubits, cap)?;
        let n = 1usize << qubits;
        let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        Ok(StateVector {
            qubits,
            amps: vec![amp; n],
        })
    }

    /// The computational basis state `e_index`.
    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(qubits, DEFAULT_MAX_QUBITS)?;
        let n = 1usize << qubits;
        if index >= n {
            return Err(Error::IndexOutOfRange {
                index,
                qubits,
                states: n,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { qubits, amps })
    }

    /// Builds a register from raw amplitudes. The length must be a power of
    /// two and every component finite; the norm is the caller's business.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = amps.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "amplitude vector length {n} is not a power of two >= 2"
            )));
        }
        if let Some(i) = amps
            .iter()
            .position(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::NonFinite {
                context: format!("amplitude at index {i}"),
            });
        }
        Ok(StateVector {
            qubits: n.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    /// Number of basis states, `N = 2^n`.
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length is always ≥ 2
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn amplitude(&self, index: usize) -> Result<Complex64> {
        self.check_index(index)?;
        Ok(self.amps[index])
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.amps.len() {
            return Err(Error::IndexOutOfRange {
                index,
                qubits: self.qubits,
                states: self.amps.len(),
            });
        }
        Ok(())
    }

    /// Born-rule probability of measuring `index`: `|amps[index]|²`.
    pub fn probability_of(&self, index: usize) -> Result<f64> {
        self.check_index(index)?;
        Ok(self.amps[index].norm_sqr())
    }

    /// `Σ_i |amps[i]|²`, pairwise-accumulated.
    pub fn norm_sqr(&self) -> f64 {
        sum::pairwise_norm_sqr(&self.amps)
    }

    /// `|Σ|a_i|² − 1|`.
    pub fn norm_deviation(&self) -> f64 {
        (self.norm_sqr() - 1.0).abs()
    }

    /// Fails with [`Error::NormDrift`] when the deviation exceeds `limit`.
    pub fn check_norm(&self, limit: f64) -> Result<()> {
        let deviation = self.norm_deviation();
        if deviation > limit {
            return Err(Error::NormDrift { deviation, limit });
        }
        Ok(())
    }

    /// Samples a basis index with probability `|amps[i]|²` by inverse-CDF
    /// walk over the cumulative probabilities. Deterministic for a given RNG
    /// state; refuses registers whose norm has drifted beyond
    /// [`SAMPLE_NORM_TOLERANCE`].
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Result<usize> {
        self.check_norm(SAMPLE_NORM_TOLERANCE)?;
        let u: f64 = rng.gen();
        Ok(sample_by_inverse_cdf(
            self.amps.iter().map(Complex64::norm_sqr),
            u,
        ))
    }
}

/// Walks the running cumulative sum of `probs` until it exceeds `u`.
/// Falls back to the final index if rounding leaves `u` past the total.
pub(crate) fn sample_by_inverse_cdf<I>(probs: I, u: f64) -> usize
where
    I: IntoIterator<Item = f64>,
{
    let mut cumulative = 0.0;
    let mut last = 0;
    for (i, p) in probs.into_iter().enumerate() {
        cumulative += p;
        last = i;
        if u < cumulative {
            return i;
        }
    }
    last
}
