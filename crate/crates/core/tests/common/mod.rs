#![allow(dead_code)]

use phin_core::{
    apply_mode, inner_product, level_basis, mobius_apply, FockVector, PartitionState, Scalar,
    StructureConstants, Word,
};

/// `⟨Ω| w |Ω⟩` by letting the word act on the vacuum letter by letter,
/// rightmost first. Shares nothing with the normal-ordering engine.
pub fn vev_by_action(w: &Word, c: &StructureConstants) -> Scalar {
    let mut v = FockVector::vacuum();
    for &m in w.modes().iter().rev() {
        v = apply_mode(m, &v, c);
        if v.is_zero() {
            return Scalar::zero();
        }
    }
    v.coefficient(&PartitionState::vacuum())
}

fn l(k: i64, v: &FockVector, degree: u32) -> FockVector {
    mobius_apply(k, v, degree).expect("k in {-1, 0, 1}")
}

/// `⟨φ, ([L₁, L₋₁] - 2L₀) ψ⟩ = 0` for all basis states of every level up to
/// `max_level`: the commutation relation on the Hilbert space, where null
/// vectors are zero. Returns the first failing pair.
pub fn sl2_commutator_violation(
    degree: u32,
    max_level: u32,
) -> Option<(PartitionState, PartitionState)> {
    let c = StructureConstants::new(degree);
    for level in 0..=max_level {
        let basis = level_basis(level);
        let defect: Vec<FockVector> = basis
            .iter()
            .map(|s| {
                let psi = FockVector::basis(s.clone());
                let up_down = l(1, &l(-1, &psi, degree), degree);
                let down_up = l(-1, &l(1, &psi, degree), degree);
                up_down
                    .sub(&down_up)
                    .sub(&l(0, &psi, degree).scale(&Scalar::from(2)))
            })
            .collect();
        for phi in &basis {
            let phi_v = FockVector::basis(phi.clone());
            for (psi, d) in basis.iter().zip(&defect) {
                if !inner_product(&phi_v, d, &c).is_zero() {
                    return Some((phi.clone(), psi.clone()));
                }
            }
        }
    }
    None
}

/// `⟨φ, L₋₁ ψ⟩ = ⟨L₁ φ, ψ⟩` for `ψ` at level `N` and `φ` at level `N + 1`,
/// `N + 1 ≤ max_level`.
pub fn sl2_adjointness_violation(
    degree: u32,
    max_level: u32,
) -> Option<(PartitionState, PartitionState)> {
    let c = StructureConstants::new(degree);
    for level in 0..max_level {
        let lower = level_basis(level);
        let upper = level_basis(level + 1);
        for phi in &upper {
            let phi_v = FockVector::basis(phi.clone());
            let lowered = l(1, &phi_v, degree);
            for psi in &lower {
                let psi_v = FockVector::basis(psi.clone());
                let raised = l(-1, &psi_v, degree);
                if inner_product(&phi_v, &raised, &c) != inner_product(&lowered, &psi_v, &c) {
                    return Some((phi.clone(), psi.clone()));
                }
            }
        }
    }
    None
}

pub fn state(parts: &[u32]) -> PartitionState {
    PartitionState::new(parts.to_vec()).expect("positive parts")
}
