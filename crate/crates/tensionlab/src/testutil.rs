//! Shared generators for the unit tests.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::Rng;

use crate::matrix::ComplexMatrix;
use crate::state::StateVector;

pub(crate) fn random_hermitian(rng: &mut StdRng, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m.set(i, i, Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
        for j in i + 1..dim {
            let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m.set(i, j, v);
            m.set(j, i, v.conj());
        }
    }
    m
}

pub(crate) fn random_state(rng: &mut StdRng, dim: usize) -> StateVector {
    loop {
        let amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if let Ok(s) = StateVector::normalized(amps) {
            return s;
        }
    }
}

