#![allow(dead_code)]

use entangle_teleport::linalg::{kron, paulis, ComplexMatrix, C64};
use entangle_teleport::DensityMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `exp(-i θ/2 n·σ)` for a unit axis `n`.
pub fn pauli_rotation(theta: f64, axis: [f64; 3]) -> ComplexMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    let mut gen = ComplexMatrix::zeros(2, 2);
    for (sig, n) in paulis().iter().zip(axis) {
        gen = &gen + &sig.scale_real(n);
    }
    &ComplexMatrix::identity(2).scale_real(c) + &gen.scale(C64::new(0.0, -s))
}

/// `Rz(a) Ry(b) Rz(c)`, a general SU(2) element.
pub fn euler_unitary(a: f64, b: f64, c: f64) -> ComplexMatrix {
    let z = [0.0, 0.0, 1.0];
    let y = [0.0, 1.0, 0.0];
    &(&pauli_rotation(a, z) * &pauli_rotation(b, y)) * &pauli_rotation(c, z)
}

pub fn random_unitary(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let tau = std::f64::consts::TAU;
    euler_unitary(rng.random::<f64>() * tau, rng.random::<f64>() * tau, rng.random::<f64>() * tau)
}

pub fn local_conjugate(rho: &DensityMatrix, ua: &ComplexMatrix, ub: &ComplexMatrix) -> DensityMatrix {
    DensityMatrix::new(rho.matrix().conjugate_by(&kron(ua, ub)).unwrap()).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
