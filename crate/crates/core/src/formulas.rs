//! Closed-form predictions for teleportation through Werner channels.
//!
//! `e12` is the entanglement of the pure input, `ew` that of each channel.
//! Nothing here runs the density-matrix simulation.

use crate::error::{check_domain, Error, Result};

/// Contraction factor `(2 ew + 1)/3` of a Werner channel.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ChannelKappa(f64);

impl ChannelKappa {
    pub fn from_entanglement(ew: f64) -> Result<Self> {
        kappa(ew).map(Self)
    }

    /// Any Werner parameter in [-1, 1]; gives κ in [-1/3, 1].
    pub fn from_phi(phi: f64) -> Result<Self> {
        check_domain(phi, -1.0, 1.0, "[-1, 1]")?;
        Ok(Self((2.0 * phi + 1.0) / 3.0))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

pub fn kappa(ew: f64) -> Result<f64> {
    check_domain(ew, 0.0, 1.0, "[0, 1]")?;
    Ok((2.0 * ew + 1.0) / 3.0)
}

fn unit(x: f64) -> Result<()> {
    check_domain(x, 0.0, 1.0, "[0, 1]")
}

/// Classical part `(ew + 2)²/9` of the fidelity.
pub fn fidelity_classical(ew: f64) -> Result<f64> {
    unit(ew)?;
    Ok((ew + 2.0).powi(2) / 9.0)
}

/// Coefficient `(2 ew + 1)(ew - 1)/9 ≤ 0` of `e12²` in the fidelity.
pub fn fidelity_quantum(ew: f64) -> Result<f64> {
    unit(ew)?;
    Ok((2.0 * ew + 1.0) * (ew - 1.0) / 9.0)
}

/// Fidelity of the double-teleported replica with the pure input.
pub fn fidelity_formula(e12: f64, ew: f64) -> Result<f64> {
    unit(e12)?;
    Ok(fidelity_classical(ew)? + fidelity_quantum(ew)? * e12 * e12)
}

/// Unclamped bracket `[(2ew² + 2ew - 4) + (1 + 2ew)² e12]/9`; its sign
/// decides whether any entanglement survives.
pub fn replica_entanglement_bracket(e12: f64, ew: f64) -> Result<f64> {
    unit(e12)?;
    unit(ew)?;
    Ok(((2.0 * ew * ew + 2.0 * ew - 4.0) + (1.0 + 2.0 * ew).powi(2) * e12) / 9.0)
}

pub fn replica_entanglement_formula(e12: f64, ew: f64) -> Result<f64> {
    Ok(replica_entanglement_bracket(e12, ew)?.max(0.0))
}

/// Channel entanglement below which the replica is separable:
/// `(3 - √(2 e12 + 1)) / (2 √(2 e12 + 1))`. At `e12 = 0` the value is 1 and
/// no channel transfers entanglement.
pub fn critical_channel_entanglement(e12: f64) -> Result<f64> {
    unit(e12)?;
    let r = (2.0 * e12 + 1.0).sqrt();
    Ok((3.0 - r) / (2.0 * r))
}

/// `κ⁴ ic12`: correlation information left after teleporting both particles.
pub fn correlation_transfer(ic12: f64, ew: f64) -> Result<f64> {
    check_domain(ic12, 0.0, 2.0, "[0, 2]")?;
    Ok(kappa(ew)?.powi(4) * ic12)
}

/// `κ² ic`: one partial teleportation step.
pub fn correlation_transfer_step(ic: f64, ew: f64) -> Result<f64> {
    check_domain(ic, 0.0, 2.0, "[0, 2]")?;
    Ok(kappa(ew)?.powi(2) * ic)
}

fn check_entangled_channel(ew: f64) -> Result<()> {
    if ew == 0.0 {
        return Err(Error::Domain { value: ew, domain: "(0, 1] (channel must be entangled)" });
    }
    check_domain(ew, 0.0, 1.0, "(0, 1]")
}

fn correlation_from_ratio(y: f64, ew: f64) -> Result<f64> {
    Ok(2.0 * kappa(ew)?.powi(2) * (4.0 - 3.0 * y) * y)
}

/// Correlation information of the intermediate state (particle 1 teleported
/// once) in terms of its entanglement `e72`, as published:
/// `2κ²(4 - 3Y)Y` with `Y = e72 (e72 + (1 - ew)) / (ew (2 + ew))`.
///
/// The brute-force simulation does not satisfy this relation for `ew < 1`;
/// see [`intermediate_correlation_exact`].
pub fn intermediate_correlation(e72: f64, ew: f64) -> Result<f64> {
    check_entangled_channel(ew)?;
    check_domain(e72, 0.0, 1.0, "[0, 1]")?;
    let y = e72 * (e72 + (1.0 - ew)) / (ew * (2.0 + ew));
    correlation_from_ratio(y, ew)
}

/// Same relation with the linear coefficient that the contraction map
/// actually produces: `Y = e72 (e72 + 2(1 - ew)/3) / (ew (2 + ew))`, which
/// equals `e12²/3` for a pure input of entanglement `e12`.
pub fn intermediate_correlation_exact(e72: f64, ew: f64) -> Result<f64> {
    check_entangled_channel(ew)?;
    check_domain(e72, 0.0, 1.0, "[0, 1]")?;
    let y = e72 * (e72 + 2.0 * (1.0 - ew) / 3.0) / (ew * (2.0 + ew));
    correlation_from_ratio(y, ew)
}

/// Entanglement of the intermediate state for a pure input: the positive
/// root of `e72² + (2/3)(1 - ew) e72 - ew (2 + ew) e12²/3 = 0`.
pub fn intermediate_entanglement(e12: f64, ew: f64) -> Result<f64> {
    unit(e12)?;
    unit(ew)?;
    let lin = 2.0 * (1.0 - ew) / 3.0;
    let c = ew * (2.0 + ew) * e12 * e12 / 3.0;
    // positive root, written to avoid cancellation
    let disc = (lin * lin + 4.0 * c).sqrt();
    if c == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * c / (lin + disc))
}

/// Residual of the published quadratic `e72² + (1 - ew) e72 - ew(2 + ew) e12²/3`.
pub fn intermediate_quadratic_residual(e72: f64, e12: f64, ew: f64) -> f64 {
    e72 * e72 + (1.0 - ew) * e72 - ew * (2.0 + ew) * e12 * e12 / 3.0
}

/// Residual of the corrected quadratic (linear coefficient `2(1 - ew)/3`).
pub fn intermediate_quadratic_residual_exact(e72: f64, e12: f64, ew: f64) -> f64 {
    e72 * e72 + 2.0 * (1.0 - ew) / 3.0 * e72 - ew * (2.0 + ew) * e12 * e12 / 3.0
}

/// Correlation information of a pure two-qubit state of entanglement `e`:
/// `(2/3) e² (4 - e²)`.
pub fn pure_state_correlation(e: f64) -> Result<f64> {
    unit(e)?;
    Ok(2.0 / 3.0 * e * e * (4.0 - e * e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(1.0).unwrap(), 1.0);
        assert!(close(kappa(0.0).unwrap(), 1.0 / 3.0, 1e-16));
        assert!(close(kappa(0.5).unwrap(), 2.0 / 3.0, 1e-16));
        assert!(kappa(-0.1).is_err());
        assert!(kappa(1.1).is_err());
        assert!(close(ChannelKappa::from_phi(-1.0).unwrap().get(), -1.0 / 3.0, 1e-16));
        assert!(ChannelKappa::from_entanglement(2.0).is_err());
    }

    #[test]
    fn fidelity_values() {
        assert!(close(fidelity_formula(0.0, 0.0).unwrap(), 4.0 / 9.0, 1e-15));
        assert!(close(fidelity_formula(1.0, 0.0).unwrap(), 1.0 / 3.0, 1e-15));
        for e12 in [0.0, 0.3, 0.7, 1.0] {
            assert!(close(fidelity_formula(e12, 1.0).unwrap(), 1.0, 1e-15));
        }
        assert!(fidelity_formula(1.5, 0.2).is_err());
    }

    #[test]
    fn fidelity_decreases_in_e12() {
        for ew in [0.0, 0.2, 0.5, 0.9, 0.99] {
            let vals: Vec<f64> = (0..100).map(|i| fidelity_formula(i as f64 / 99.0, ew).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[1] < w[0]), "ew={ew}");
        }
        let flat: Vec<f64> = (0..100).map(|i| fidelity_formula(i as f64 / 99.0, 1.0).unwrap()).collect();
        assert!(flat.iter().all(|&f| f == 1.0));
    }

    #[test]
    fn replica_entanglement_values() {
        assert!(close(replica_entanglement_formula(1.0, 1.0).unwrap(), 1.0, 1e-15));
        let crit = (3f64.sqrt() - 1.0) / 2.0;
        assert!(replica_entanglement_bracket(1.0, crit).unwrap().abs() < 1e-15);
        for i in 0..=20 {
            assert_eq!(replica_entanglement_formula(0.0, i as f64 / 20.0).unwrap(), 0.0);
        }
        assert!(close(replica_entanglement_formula(1.0, 0.5).unwrap(), 1.5 / 9.0, 1e-15));
    }

    #[test]
    fn critical_values() {
        assert!(close(critical_channel_entanglement(1.0).unwrap(), 0.36602540378443865, 1e-15));
        assert_eq!(critical_channel_entanglement(0.0).unwrap(), 1.0);
        let expected = (3.0 - 2f64.sqrt()) / (2.0 * 2f64.sqrt());
        assert!(close(critical_channel_entanglement(0.5).unwrap(), expected, 1e-15));
        assert!(close(expected, 0.56066, 1e-5));
    }

    #[test]
    fn critical_value_matches_bisection() {
        // independent root of the bracket in ew by bisection
        for i in 1..=20 {
            let e12 = i as f64 / 20.0;
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if replica_entanglement_bracket(e12, mid).unwrap() > 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let ec = critical_channel_entanglement(e12).unwrap();
            assert!(close(ec, 0.5 * (lo + hi), 1e-12), "e12={e12}");
            assert!(replica_entanglement_bracket(e12, ec).unwrap().abs() < 1e-12);
            if ec + 1e-6 <= 1.0 {
                assert!(replica_entanglement_formula(e12, ec + 1e-6).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn correlation_transfer_values() {
        assert_eq!(correlation_transfer(1.3, 1.0).unwrap(), 1.3);
        assert!(close(correlation_transfer(2.0, 0.0).unwrap(), 2.0 / 81.0, 1e-16));
        for ew in [0.0, 0.3, 0.8] {
            let two = correlation_transfer_step(correlation_transfer_step(1.7, ew).unwrap(), ew).unwrap();
            assert!(close(two, correlation_transfer(1.7, ew).unwrap(), 1e-15));
        }
        assert!(correlation_transfer(2.5, 0.5).is_err());
    }

    #[test]
    fn intermediate_correlation_perfect_channel() {
        assert!(close(intermediate_correlation(1.0, 1.0).unwrap(), 2.0, 1e-15));
        for e in [0.1, 0.4, 0.9] {
            let expected = 2.0 / 3.0 * e * e * (4.0 - e * e);
            assert!(close(intermediate_correlation(e, 1.0).unwrap(), expected, 1e-14));
            assert!(close(intermediate_correlation_exact(e, 1.0).unwrap(), expected, 1e-14));
            assert!(close(pure_state_correlation(e).unwrap(), expected, 1e-15));
        }
        assert!(intermediate_correlation(0.5, 0.0).is_err());
        assert!(intermediate_correlation_exact(0.5, 0.0).is_err());
    }

    #[test]
    fn intermediate_entanglement_is_root() {
        for e12 in [0.0, 0.2, 0.7, 1.0] {
            for ew in [0.0, 0.1, 0.6, 1.0] {
                let e72 = intermediate_entanglement(e12, ew).unwrap();
                assert!(intermediate_quadratic_residual_exact(e72, e12, ew).abs() < 1e-15);
                assert!(e72 >= 0.0);
            }
        }
        // singlet through a Werner channel leaves a Werner state of entanglement ew
        assert!(close(intermediate_entanglement(1.0, 0.6).unwrap(), 0.6, 1e-15));
        assert!(close(intermediate_entanglement(0.8, 1.0).unwrap(), 0.8, 1e-15));
    }
}
