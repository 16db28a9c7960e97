//! Normalized state vectors in a finite Hilbert space.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{vec_inner, vec_norm, ComplexMatrix};

/// Norm tolerance for accepting a vector as a state.
pub const NORM_TOL: f64 = 1e-10;

/// Modulus floor used by the global-phase convention.
const PHASE_FLOOR: f64 = 1e-10;

/// Unit vector |ψ> of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Accept amplitudes whose Euclidean norm is 1 within [`NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm,
                tol: NORM_TOL,
            });
        }
        if amplitudes.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        Ok(Self { amplitudes })
    }

    /// Rescale arbitrary amplitudes to a unit vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if norm <= 1e-12 {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|c| c / norm).collect(),
        })
    }

    /// Computational basis state |index> in `dim` dimensions.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Inner product <self|other>.
    pub fn inner(&self, other: &Self) -> Complex64 {
        vec_inner(&self.amplitudes, &other.amplitudes)
    }

    /// |<self|other>|, the overlap modulus.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm()
    }

    /// Density matrix |ψ><ψ|.
    pub fn density(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    /// Global phase convention: rotate so the first amplitude with modulus
    /// above the floor is real positive. Physically irrelevant; makes equality
    /// testing deterministic.
    pub fn canonicalized(&self) -> Self {
        for c in &self.amplitudes {
            if c.norm() > PHASE_FLOOR {
                let phase = c / c.norm();
                let inv = phase.conj();
                return Self {
                    amplitudes: self.amplitudes.iter().map(|a| a * inv).collect(),
                };
            }
        }
        self.clone()
    }

    /// Max amplitude difference after canonicalizing both sides.
    pub fn distance_up_to_phase(&self, other: &Self) -> f64 {
        let a = self.canonicalized();
        let b = other.canonicalized();
        a.amplitudes
            .iter()
            .zip(b.amplitudes.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Kronecker product |self> ⊗ |other>.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            amplitudes: crate::matrix::tensor_product_vec(&self.amplitudes, &other.amplitudes),
        }
    }

}
