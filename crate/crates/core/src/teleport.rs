//! Teleportation of one or both particles of a two-qubit state through
//! Werner channels.
//!
//! The brute-force route builds the joint register, projects onto each Bell
//! outcome, applies the Pauli correction on the receiving qubit and traces
//! down to the logical pair. Particle labels follow the usual layout: the
//! input pair is (1, 2), channel Q1 is (3, 5), channel Q2 is (4, 6); Bell
//! measurements act on (1, 3) and (2, 4), corrections on 5 and 6.
//!
//! [`teleport_closed_form`] is the equivalent contraction of the Bloch
//! representation and never touches the joint register.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{
    embed_local, kron, kron_all, partial_trace, pauli_x, pauli_y, pauli_z, project_onto, ComplexMatrix, QubitIndexMap,
    C64, ZERO,
};
use crate::states::{expect_two_qubit, BlochRep, DensityMatrix, Side, WernerChannel};

/// Outcome label, 1..=4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BellIndex(u8);

impl BellIndex {
    pub const ALL: [BellIndex; 4] = [BellIndex(1), BellIndex(2), BellIndex(3), BellIndex(4)];

    pub fn new(alpha: u8) -> Result<Self> {
        if (1..=4).contains(&alpha) {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidSubsystem(format!("Bell index {alpha} not in 1..=4")))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    fn slot(self) -> usize {
        usize::from(self.0 - 1)
    }
}

impl fmt::Display for BellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Bell states indexed 1 ↦ Ψ⁻, 2 ↦ Ψ⁺, 3 ↦ Φ⁻, 4 ↦ Φ⁺.
#[derive(Debug, Clone, PartialEq)]
pub struct BellBasis {
    states: [[C64; 4]; 4],
}

impl Default for BellBasis {
    fn default() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            states: [
                [ZERO, h, -h, ZERO], // Ψ⁻
                [ZERO, h, h, ZERO],  // Ψ⁺
                [h, ZERO, ZERO, -h], // Φ⁻
                [h, ZERO, ZERO, h],  // Φ⁺
            ],
        }
    }
}

impl BellBasis {
    pub fn state(&self, alpha: BellIndex) -> &[C64; 4] {
        &self.states[alpha.slot()]
    }

    pub fn projector(&self, alpha: BellIndex) -> ComplexMatrix {
        ComplexMatrix::projector(self.state(alpha))
    }
}

/// Pauli correction applied on the receiving qubit for each outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionTable {
    unitaries: [ComplexMatrix; 4],
}

impl Default for CorrectionTable {
    /// Ψ⁻ ↦ 1, Ψ⁺ ↦ σz, Φ⁻ ↦ σx, Φ⁺ ↦ σy: the corrections that undo the
    /// Bell outcome for a singlet channel.
    fn default() -> Self {
        Self { unitaries: [ComplexMatrix::identity(2), pauli_z(), pauli_x(), pauli_y()] }
    }
}

impl CorrectionTable {
    pub fn unitary(&self, alpha: BellIndex) -> &ComplexMatrix {
        &self.unitaries[alpha.slot()]
    }
}

/// One Bell-measurement branch.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportOutcome {
    pub alpha: BellIndex,
    /// Outcome at the second station; `None` for single teleportation.
    pub beta: Option<BellIndex>,
    pub probability: f64,
    /// Corrected post-measurement state of the logical pair.
    pub conditional_state: DensityMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportResult {
    /// Probability-weighted average over outcomes, ordered (left, right).
    pub state: DensityMatrix,
    /// Outcomes in ascending (alpha, beta) order.
    pub outcomes: Vec<TeleportOutcome>,
}

impl TeleportResult {
    pub fn probability_sum(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }
}

struct Protocol {
    basis: BellBasis,
    corrections: CorrectionTable,
}

impl Protocol {
    fn new() -> Self {
        Self { basis: BellBasis::default(), corrections: CorrectionTable::default() }
    }

    /// Project `(sender, near)` onto Bell state `alpha` and apply the
    /// correction on `far`; returns the unnormalized remainder.
    fn branch(
        &self,
        joint: &ComplexMatrix,
        map: &QubitIndexMap,
        (sender, near): (u32, u32),
        far: u32,
        alpha: BellIndex,
    ) -> Result<(ComplexMatrix, QubitIndexMap)> {
        let (rest, rest_map) = project_onto(joint, &[sender, near], self.basis.state(alpha), map)?;
        let u = embed_local(self.corrections.unitary(alpha), far, &rest_map)?;
        Ok((rest.conjugate_by(&u)?, rest_map))
    }
}

fn normalize(unnormalized: &ComplexMatrix) -> Result<(f64, DensityMatrix)> {
    let p = unnormalized.trace().re;
    if p.is_nan() || p <= 0.0 {
        return Err(Error::ContractViolation(format!("Bell outcome with probability {p}")));
    }
    Ok((p, DensityMatrix::new(unnormalized.scale_real(1.0 / p))?))
}

fn weighted_average(outcomes: &[TeleportOutcome]) -> Result<DensityMatrix> {
    let mut acc = ComplexMatrix::zeros(4, 4);
    for o in outcomes {
        acc = &acc + &o.conditional_state.matrix().scale_real(o.probability);
    }
    DensityMatrix::new(acc)
}

/// Teleport one particle of `rho_in` through `channel`. The returned state
/// keeps the input's (left, right) ordering, with the teleported particle
/// replaced by the channel's receiving qubit.
pub fn teleport_one(rho_in: &DensityMatrix, particle: Side, channel: WernerChannel) -> Result<TeleportResult> {
    expect_two_qubit(rho_in)?;
    let (labels, measured, far, keep) = match particle {
        Side::A => ([1, 2, 3, 5], (1, 3), 5, [5, 2]),
        Side::B => ([1, 2, 4, 6], (2, 4), 6, [1, 6]),
    };
    let map = QubitIndexMap::new(labels)?;
    let joint = kron(rho_in.matrix(), channel.density().matrix());
    let protocol = Protocol::new();

    let outcomes = BellIndex::ALL
        .iter()
        .map(|&alpha| {
            let (rest, rest_map) = protocol.branch(&joint, &map, measured, far, alpha)?;
            let (probability, conditional_state) = normalize(&partial_trace(&rest, &keep, &rest_map)?)?;
            Ok(TeleportOutcome { alpha, beta: None, probability, conditional_state })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(TeleportResult { state: weighted_average(&outcomes)?, outcomes })
}

/// Teleport both particles: particle 1 through `ch1`, particle 2 through `ch2`.
pub fn teleport_two(rho12: &DensityMatrix, ch1: WernerChannel, ch2: WernerChannel) -> Result<TeleportResult> {
    expect_two_qubit(rho12)?;
    let map = QubitIndexMap::new([1, 2, 3, 5, 4, 6])?;
    let joint = kron_all([rho12.matrix(), ch1.density().matrix(), ch2.density().matrix()]).expect("three factors");
    let protocol = Protocol::new();

    let mut outcomes = Vec::with_capacity(16);
    for alpha in BellIndex::ALL {
        let (after_first, map_first) = protocol.branch(&joint, &map, (1, 3), 5, alpha)?;
        for beta in BellIndex::ALL {
            let (rest, rest_map) = protocol.branch(&after_first, &map_first, (2, 4), 6, beta)?;
            let (probability, conditional_state) = normalize(&partial_trace(&rest, &[5, 6], &rest_map)?)?;
            outcomes.push(TeleportOutcome { alpha, beta: Some(beta), probability, conditional_state });
        }
    }

    Ok(TeleportResult { state: weighted_average(&outcomes)?, outcomes })
}

/// Bloch contraction: `a -> κ1 a`, `b -> κ2 b`, `c -> κ1 κ2 c`.
/// With `kappa2 = 1` this is single teleportation of particle 1.
pub fn teleport_closed_form(rep: &BlochRep, kappa1: f64, kappa2: f64) -> BlochRep {
    BlochRep {
        a: rep.a.map(|x| kappa1 * x),
        b: rep.b.map(|x| kappa2 * x),
        c: rep.c.map(|row| row.map(|x| kappa1 * kappa2 * x)),
    }
}
