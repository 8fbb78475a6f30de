//! Scalar functionals of two-qubit states.
//!
//! Information quantities are in the purity-based normalization where a
//! pure two-qubit state carries 2 bits and a pure qubit 1 bit.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, kron, partial_transpose, QubitIndexMap};
use crate::states::{bloch_decompose, expect_two_qubit, singlet, BlochRep, DensityMatrix, PureState, Side};

/// Partial-transpose eigenvalues in `(-NEGATIVITY_CLAMP, 0)` count as zero.
pub const NEGATIVITY_CLAMP: f64 = 1e-12;

/// Information content split into local and shared parts, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InformationBreakdown {
    pub total: f64,
    pub individual_a: f64,
    pub individual_b: f64,
    pub correlation: f64,
}

/// `-2 Σ λ⁻` over the negative eigenvalues of the partial transpose on
/// qubit 2, clamped to [0, 1].
pub fn entanglement(rho: &DensityMatrix) -> Result<f64> {
    entanglement_on(rho, Side::B)
}

/// Same measure with the transpose taken on the chosen side.
pub fn entanglement_on(rho: &DensityMatrix, side: Side) -> Result<f64> {
    expect_two_qubit(rho)?;
    let map = QubitIndexMap::new(vec![1, 2])?;
    let pt = partial_transpose(rho.matrix(), side.label(), &map)?;
    let neg: f64 = hermitian_eigenvalues(&pt)?.into_iter().filter(|&l| l <= -NEGATIVITY_CLAMP).sum();
    Ok((-2.0 * neg).clamp(0.0, 1.0))
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    m.trace_product(m).expect("density matrices are square").re
}

/// Overlap with the singlet projector.
pub fn singlet_fraction(rho: &DensityMatrix) -> Result<f64> {
    expect_two_qubit(rho)?;
    Ok(rho.matrix().trace_product(singlet().matrix())?.re)
}

/// `<ψ| ρ |ψ>`.
pub fn fidelity(pure: &PureState, rho: &DensityMatrix) -> Result<f64> {
    expect_two_qubit(rho)?;
    let z = pure.projector().matrix().trace_product(rho.matrix())?;
    if z.im.abs() > 1e-10 {
        return Err(Error::ContractViolation(format!("complex fidelity residue {:e}", z.im)));
    }
    Ok(z.re)
}

/// `(2/3)(4 Tr ρ² - 1)`.
pub fn total_information(rho: &DensityMatrix) -> Result<f64> {
    expect_two_qubit(rho)?;
    Ok(2.0 / 3.0 * (4.0 * purity(rho) - 1.0))
}

/// `2 Tr ρ_side² - 1` for the marginal on `side`.
pub fn individual_information(rho: &DensityMatrix, side: Side) -> Result<f64> {
    let m = rho.marginal(side)?;
    Ok(2.0 * m.trace_product(&m)?.re - 1.0)
}

/// Total information minus that of the product of the marginals.
pub fn correlation_information(rho: &DensityMatrix) -> Result<f64> {
    let product = DensityMatrix::new(kron(&rho.marginal(Side::A)?, &rho.marginal(Side::B)?))?;
    Ok(total_information(rho)? - total_information(&product)?)
}

/// `(2/3)(Σ c_nm² - |a|²|b|²)`: correlation information read off the Bloch
/// representation.
pub fn correlation_information_bloch(rep: &BlochRep) -> f64 {
    2.0 / 3.0 * (rep.c_norm_sqr() - rep.a_norm_sqr() * rep.b_norm_sqr())
}

pub fn information_breakdown(rho: &DensityMatrix) -> Result<InformationBreakdown> {
    Ok(InformationBreakdown {
        total: total_information(rho)?,
        individual_a: individual_information(rho, Side::A)?,
        individual_b: individual_information(rho, Side::B)?,
        correlation: correlation_information(rho)?,
    })
}

/// Both routes to the correlation information; errors if they disagree by
/// more than `tol`.
pub fn correlation_information_checked(rho: &DensityMatrix, tol: f64) -> Result<f64> {
    let direct = correlation_information(rho)?;
    let bloch = correlation_information_bloch(&bloch_decompose(rho)?);
    if (direct - bloch).abs() > tol {
        return Err(Error::ContractViolation(format!("correlation information routes disagree: {direct} vs {bloch}")));
    }
    Ok(direct)
}
