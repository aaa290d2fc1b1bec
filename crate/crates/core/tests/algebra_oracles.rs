mod common;

use common::{state, vev_by_action};
use phin_core::kernels::mode_commutator_via_kernel;
use phin_core::{
    gram_matrix, inner_product, level_basis, normal_order, structure_pi, vacuum_expectation,
    FockVector, Scalar, StructureConstants, Word,
};
use proptest::prelude::*;

/// Every word over the given letters with length up to `max_len`.
fn words(letters: &[i64], max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &m in letters {
                let mut v: Vec<i64> = w.clone();
                v.push(m);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(Word::new));
        frontier = next;
    }
    out
}

#[test]
fn vacuum_expectation_matches_fock_action() {
    let letters: Vec<i64> = (-4..=4).filter(|&m| m != 0).collect();
    for n in 0..=2 {
        let c = StructureConstants::new(n);
        // Only grade-zero words can have a nonzero expectation; length ≤ 6.
        for w in words(&letters, 4).iter().filter(|w| w.grade() == 0) {
            assert_eq!(
                vacuum_expectation(w, &c),
                vev_by_action(w, &c),
                "n = {n}, {w}"
            );
        }
    }
}

#[test]
fn six_letter_words_match_fock_action() {
    let letters = [-3i64, -2, -1, 1, 2, 3];
    let c = StructureConstants::new(1);
    for w in words(&letters, 6)
        .iter()
        .filter(|w| w.len() == 6 && w.grade() == 0)
    {
        assert_eq!(vacuum_expectation(w, &c), vev_by_action(w, &c), "{w}");
    }
}

#[test]
fn gram_routes_agree() {
    for n in 0..=3 {
        let c = StructureConstants::new(n);
        for level in 0..=7 {
            let gram = gram_matrix(&c, level);
            for (a, i) in gram.basis.iter().enumerate() {
                for (b, j) in gram.basis.iter().enumerate() {
                    let via_action = inner_product(
                        &FockVector::basis(i.clone()),
                        &FockVector::basis(j.clone()),
                        &c,
                    );
                    assert_eq!(gram.entries.get(a, b), &via_action, "n = {n}: ⟨{i}, {j}⟩");
                }
            }
        }
    }
    assert!(level_basis(3).contains(&state(&[2, 1])));
}

#[test]
fn kernel_residue_reproduces_structure_constants() {
    for n in 0..=4u32 {
        for m in -10..=10i64 {
            for mp in -10..=10i64 {
                let expected = if m + mp == 0 {
                    structure_pi(n, m)
                } else {
                    Scalar::zero()
                };
                assert_eq!(
                    mode_commutator_via_kernel(n, m, mp),
                    expected,
                    "n = {n}, ({m}, {mp})"
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_order_preserves_expectation(
        n in 0u32..=3,
        modes in prop::collection::vec(prop_oneof![-5i64..=-1, 1i64..=5], 0..=6),
    ) {
        let c = StructureConstants::new(n);
        let w = Word::new(modes);
        let ordered = normal_order(&w, &c);
        // The scalar part of the normal form is the vacuum expectation.
        let expected = if w.grade() == 0 { ordered.scalar().clone() } else { Scalar::zero() };
        prop_assert_eq!(vev_by_action(&w, &c), expected);
    }

    #[test]
    fn structure_pi_is_odd(n in 0u32..=6, m in -40i64..=40) {
        prop_assert_eq!(structure_pi(n, -m), -structure_pi(n, m));
        if m.unsigned_abs() <= u64::from(n) {
            prop_assert!(structure_pi(n, m).is_zero());
        }
    }
}
