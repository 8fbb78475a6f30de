//! State constructors and the Bloch / correlation-tensor representation of
//! two-qubit states.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_domain, Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, kron, partial_trace, paulis, ComplexMatrix, QubitIndexMap, C64, HERMITICITY_TOL, PSD_TOL,
    TRACE_TOL, ZERO,
};

/// Imaginary residue allowed (and discarded) when reading real Pauli
/// expectation values off a Hermitian matrix.
pub const BLOCH_IMAG_TOL: f64 = 1e-10;

/// A validated mixed state on 2^n qubits: Hermitian, unit trace, PSD.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.qubit_count().is_none() {
            return Err(Error::InvalidState(format!("{}x{} is not a qubit-register operator", mat.rows(), mat.cols())));
        }
        let herr = mat.hermiticity_error();
        if herr > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herr:e})")));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = hermitian_eigenvalues(&mat)?[0];
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { mat })
    }

    pub fn maximally_mixed(qubits: usize) -> Self {
        let d = 1 << qubits;
        Self { mat: ComplexMatrix::identity(d).scale_real(1.0 / d as f64) }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn qubits(&self) -> usize {
        self.mat.qubit_count().expect("validated on construction")
    }

    /// Convex combination `p * self + (1 - p) * other`.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        check_domain(p, 0.0, 1.0, "[0, 1]")?;
        Self::new(self.mat.scale_real(p).try_add(&other.mat.scale_real(1.0 - p))?)
    }

    /// Marginal on qubit 1 (`Side::A`) or qubit 2 (`Side::B`) of a two-qubit state.
    pub fn marginal(&self, side: Side) -> Result<ComplexMatrix> {
        expect_two_qubit(self)?;
        let map = QubitIndexMap::new(vec![1, 2])?;
        partial_trace(&self.mat, &[side.label()], &map)
    }
}

/// One of the two particles of a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub(crate) fn label(self) -> u32 {
        match self {
            Side::A => 1,
            Side::B => 2,
        }
    }
}

pub(crate) fn expect_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch(format!("expected a two-qubit state, got dimension {}", rho.dim())));
    }
    Ok(())
}

/// Normalized two-qubit pure state, amplitudes in the order |00>, |01>, |10>, |11>.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: [C64; 4],
}

impl PureState {
    /// Normalizes `amplitudes`; fails on a (numerically) zero vector.
    pub fn new(amplitudes: [C64; 4]) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(Error::InvalidState("zero or non-finite amplitude vector".into()));
        }
        Ok(Self { amplitudes: amplitudes.map(|z| z / norm) })
    }

    pub fn amplitudes(&self) -> &[C64; 4] {
        &self.amplitudes
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix { mat: ComplexMatrix::projector(&self.amplitudes) }
    }
}

/// The singlet (|01> - |10>)/sqrt(2).
pub fn singlet_state() -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    PureState { amplitudes: [ZERO, C64::new(h, 0.0), C64::new(-h, 0.0), ZERO] }
}

pub fn singlet() -> DensityMatrix {
    singlet_state().projector()
}

/// Werner-state channel, parametrized by its singlet weight `phi` in [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerChannel {
    phi: f64,
}

impl WernerChannel {
    pub fn new(phi: f64) -> Result<Self> {
        check_domain(phi, -1.0, 1.0, "[-1, 1]")?;
        Ok(Self { phi })
    }

    /// Channel whose state has entanglement `ew` (then `phi = ew`).
    pub fn from_entanglement(ew: f64) -> Result<Self> {
        check_domain(ew, 0.0, 1.0, "[0, 1]")?;
        Ok(Self { phi: ew })
    }

    pub fn perfect() -> Self {
        Self { phi: 1.0 }
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Contraction factor `(2 phi + 1) / 3` applied to Bloch data.
    pub fn kappa(&self) -> f64 {
        (2.0 * self.phi + 1.0) / 3.0
    }

    pub fn density(&self) -> DensityMatrix {
        werner_unchecked(self.phi)
    }
}

/// `(1/4)(I⊗I - p Σ σn⊗σn)` with `p = (2 phi + 1)/3`.
pub fn werner(phi: f64) -> Result<DensityMatrix> {
    Ok(WernerChannel::new(phi)?.density())
}

fn werner_unchecked(phi: f64) -> DensityMatrix {
    let p = (2.0 * phi + 1.0) / 3.0;
    let mut sum = ComplexMatrix::zeros(4, 4);
    for s in paulis() {
        sum = &sum + &kron(&s, &s);
    }
    let mat = (&ComplexMatrix::identity(4) - &sum.scale_real(p)).scale_real(0.25);
    DensityMatrix { mat }
}

/// `cos θ |00> + sin θ |11>`; entanglement `sin 2θ` for θ in [0, π/4].
pub fn schmidt_pure(theta: f64) -> PureState {
    let (s, c) = theta.sin_cos();
    PureState { amplitudes: [C64::new(c, 0.0), ZERO, ZERO, C64::new(s, 0.0)] }
}

/// Schmidt angle whose pure state has entanglement `e12`.
pub fn schmidt_angle(e12: f64) -> Result<f64> {
    check_domain(e12, 0.0, 1.0, "[0, 1]")?;
    Ok(0.5 * e12.asin())
}

/// Haar-random two-qubit pure state, deterministic in `seed`.
pub fn random_pure(seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: [C64; 4] = std::array::from_fn(|_| gaussian_complex(&mut rng));
    PureState::new(amps).expect("gaussian vector is non-zero with probability one")
}

/// Random mixed two-qubit state: the two-qubit marginal of a Haar-random
/// three-qubit pure state.
pub fn random_mixed(seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut amps: Vec<C64> = (0..8).map(|_| gaussian_complex(&mut rng)).collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|z| *z /= norm);
    let map = QubitIndexMap::new(vec![1, 2, 3]).expect("static labels");
    let reduced = partial_trace(&ComplexMatrix::projector(&amps), &[1, 2], &map).expect("static shape");
    DensityMatrix { mat: reduced }
}

fn gaussian_complex(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Local Bloch vectors `a`, `b` and correlation matrix `c` of a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochRep {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub c: [[f64; 3]; 3],
}

impl BlochRep {
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let vec = self.a.iter().zip(&other.a).chain(self.b.iter().zip(&other.b));
        let mat = self.c.iter().flatten().zip(other.c.iter().flatten());
        vec.chain(mat).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    pub fn a_norm_sqr(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum()
    }

    pub fn b_norm_sqr(&self) -> f64 {
        self.b.iter().map(|x| x * x).sum()
    }

    pub fn c_norm_sqr(&self) -> f64 {
        self.c.iter().flatten().map(|x| x * x).sum()
    }
}

pub fn bloch_decompose(rho: &DensityMatrix) -> Result<BlochRep> {
    expect_two_qubit(rho)?;
    let id = ComplexMatrix::identity(2);
    let sig = paulis();
    let m = rho.matrix();
    let real = |op: &ComplexMatrix| -> Result<f64> {
        let z = m.trace_product(op)?;
        if z.im.abs() > BLOCH_IMAG_TOL {
            return Err(Error::ContractViolation(format!("imaginary Pauli expectation {:e}", z.im)));
        }
        Ok(z.re)
    };
    let mut rep = BlochRep::default();
    for n in 0..3 {
        rep.a[n] = real(&kron(&sig[n], &id))?;
        rep.b[n] = real(&kron(&id, &sig[n]))?;
        for k in 0..3 {
            rep.c[n][k] = real(&kron(&sig[n], &sig[k]))?;
        }
    }
    Ok(rep)
}

/// Inverse of [`bloch_decompose`]; rejects reps that do not describe a PSD matrix.
pub fn bloch_compose(rep: &BlochRep) -> Result<DensityMatrix> {
    DensityMatrix::new(bloch_matrix(rep))
}

pub(crate) fn bloch_matrix(rep: &BlochRep) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let sig = paulis();
    let mut m = ComplexMatrix::identity(4);
    for n in 0..3 {
        m = &m + &kron(&sig[n], &id).scale_real(rep.a[n]);
        m = &m + &kron(&id, &sig[n]).scale_real(rep.b[n]);
        for k in 0..3 {
            m = &m + &kron(&sig[n], &sig[k]).scale_real(rep.c[n][k]);
        }
    }
    m.scale_real(0.25)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    #[test]
    fn werner_endpoints() {
        assert!(werner(1.0).unwrap().matrix().max_abs_diff(singlet().matrix()) < 1e-15);
        assert!(werner(-0.5).unwrap().matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
    }

    #[test]
    fn werner_domain() {
        assert!(matches!(werner(1.01), Err(Error::Domain { .. })));
        assert!(matches!(werner(-1.5), Err(Error::Domain { .. })));
        assert!(werner(f64::NAN).is_err());
        assert!(werner(-1.0).is_ok());
        // just outside the range the state is no longer PSD
        assert!(DensityMatrix::new(werner_unchecked(1.05).into_matrix()).is_err());
        assert!(DensityMatrix::new(werner_unchecked(-1.2).into_matrix()).is_err());
    }

    #[test]
    fn werner_grid_is_valid_with_mixed_marginals() {
        for i in 0..=40 {
            let phi = -1.0 + 0.05 * i as f64;
            let w = werner(phi).unwrap();
            DensityMatrix::new(w.matrix().clone()).unwrap();
            let half = ComplexMatrix::identity(2).scale_real(0.5);
            assert!(w.marginal(Side::A).unwrap().max_abs_diff(&half) < 1e-12);
            assert!(w.marginal(Side::B).unwrap().max_abs_diff(&half) < 1e-12);
        }
    }

    #[test]
    fn random_pure_is_deterministic_and_normalized() {
        assert_eq!(random_pure(7), random_pure(7));
        assert_ne!(random_pure(7), random_pure(8));
        for seed in 0..50 {
            let n: f64 = random_pure(seed).amplitudes().iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bloch_of_maximally_mixed_is_zero() {
        let rep = bloch_decompose(&DensityMatrix::maximally_mixed(2)).unwrap();
        assert_eq!(rep.max_abs_diff(&BlochRep::default()), 0.0);
    }

    #[test]
    fn bloch_of_singlet() {
        let rep = bloch_decompose(&singlet()).unwrap();
        let expected = BlochRep { c: [[-1., 0., 0.], [0., -1., 0.], [0., 0., -1.]], ..Default::default() };
        assert!(rep.max_abs_diff(&expected) < 1e-15);
        assert!(bloch_compose(&expected).unwrap().matrix().max_abs_diff(singlet().matrix()) < 1e-15);
    }

    #[test]
    fn bloch_of_schmidt_states() {
        for theta in [0.0, FRAC_PI_8, 0.3, FRAC_PI_4] {
            let rep = bloch_decompose(&schmidt_pure(theta).projector()).unwrap();
            let (s, c) = (2.0 * theta).sin_cos();
            let expected = BlochRep { a: [0., 0., c], b: [0., 0., c], c: [[s, 0., 0.], [0., -s, 0.], [0., 0., 1.]] };
            assert!(rep.max_abs_diff(&expected) < 1e-15, "theta={theta}");
        }
    }

    #[test]
    fn compose_zero_rep_and_product_up() {
        assert!(
            bloch_compose(&BlochRep::default())
                .unwrap()
                .matrix()
                .max_abs_diff(DensityMatrix::maximally_mixed(2).matrix())
                < 1e-15
        );
        let rep = BlochRep { a: [0., 0., 1.], b: [0., 0., 1.], c: [[0.; 3], [0.; 3], [0., 0., 1.]] };
        let up = ComplexMatrix::diag(&[1., 0., 0., 0.]);
        assert!(bloch_compose(&rep).unwrap().matrix().max_abs_diff(&up) < 1e-15);
    }

    #[test]
    fn compose_rejects_non_psd_rep() {
        let rep = BlochRep { a: [0., 0., 1.5], ..Default::default() };
        assert!(matches!(bloch_compose(&rep), Err(Error::InvalidState(_))));
    }

    #[test]
    fn decompose_rejects_three_qubits() {
        assert!(matches!(bloch_decompose(&DensityMatrix::maximally_mixed(3)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(3).scale_real(1.0 / 3.0)).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::identity(4)).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diag(&[1.5, -0.5])).is_err());
        let nonherm = ComplexMatrix::from_real(2, 2, &[0.5, 0.1, 0.0, 0.5]).unwrap();
        assert!(DensityMatrix::new(nonherm).is_err());
    }

    #[test]
    fn pure_state_rejects_zero() {
        assert!(PureState::new([ZERO; 4]).is_err());
    }

    #[test]
    fn schmidt_angle_inverts_entanglement() {
        assert!((schmidt_angle(1.0).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(schmidt_angle(0.0).unwrap(), 0.0);
        assert!(schmidt_angle(1.2).is_err());
    }
}
