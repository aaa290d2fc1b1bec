//! Laurent differential operators `Σ c_{a,b} ζ^a ∂^b` and the residue
//! pairing that turns commutator kernels into mode brackets.
//!
//! Operators are kept with every power of `ζ` to the left of every `∂`;
//! composition reorders with `∂ ζ^a = ζ^a ∂ + a ζ^{a-1}`, which is valid for
//! every integer `a`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::scalar::Scalar;

/// `x (x-1) ⋯ (x-k+1)`.
pub fn falling_factorial(x: i64, k: u32) -> Scalar {
    (0..i64::from(k)).map(|j| Scalar::from(x - j)).product()
}

fn binomial(n: u32, k: u32) -> Scalar {
    let mut acc = BigInt::from(1);
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    Scalar::from(acc)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentDiffOp {
    /// `(ζ exponent, ∂ order) → coefficient`, no zero coefficients.
    terms: BTreeMap<(i64, u32), Scalar>,
}

impl LaurentDiffOp {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::monomial(Scalar::one(), 0, 0)
    }

    pub fn monomial(c: Scalar, zeta_power: i64, d_order: u32) -> Self {
        let mut op = Self::zero();
        op.add_term(zeta_power, d_order, &c);
        op
    }

    /// Multiplication by `ζ^a`.
    pub fn zeta(a: i64) -> Self {
        Self::monomial(Scalar::one(), a, 0)
    }

    /// `∂^b`.
    pub fn d(b: u32) -> Self {
        Self::monomial(Scalar::one(), 0, b)
    }

    pub fn terms(&self) -> &BTreeMap<(i64, u32), Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, a: i64, b: u32, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((a, b)).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from(-1)))
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            out.add_term(a, b, &(c * k));
        }
        out
    }

    /// Normal form of `self ∘ other`.
    ///
    /// `∂^b ζ^c = Σ_j C(b, j) (c)_j ζ^{c-j} ∂^{b-j}` with `(c)_j` the falling
    /// factorial.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c1) in &self.terms {
            for (&(c, d), c2) in &other.terms {
                let base = c1 * c2;
                for j in 0..=b {
                    let coeff = binomial(b, j) * falling_factorial(c, j);
                    if coeff.is_zero() {
                        continue;
                    }
                    out.add_term(a + c - i64::from(j), b - j + d, &(&base * &coeff));
                }
            }
        }
        out
    }

    /// Left-to-right composition of a chain of operators.
    pub fn chain<'a>(ops: impl IntoIterator<Item = &'a LaurentDiffOp>) -> Self {
        ops.into_iter()
            .fold(Self::identity(), |acc, op| acc.compose(op))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(), |acc, _| acc.compose(self))
    }

    /// Action on the monomial `ζ^p`, as a Laurent polynomial `exponent → coefficient`.
    pub fn apply_monomial(&self, p: i64) -> BTreeMap<i64, Scalar> {
        let mut out: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (&(a, b), c) in &self.terms {
            let k = falling_factorial(p, b);
            if k.is_zero() {
                continue;
            }
            let e = a + p - i64::from(b);
            let slot = out.entry(e).or_insert_with(Scalar::zero);
            *slot += &(c * &k);
            if slot.is_zero() {
                out.remove(&e);
            }
        }
        out
    }
}

impl fmt::Display for LaurentDiffOp {
    /// `c * z^a * D^b` terms joined by ` + `, `a` descending then `b`
    /// descending; the zero operator prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut keys: Vec<&(i64, u32)> = self.terms.keys().collect();
        keys.sort_by(|x, y| y.cmp(x));
        let parts: Vec<String> = keys
            .into_iter()
            .map(|k| format!("{} * z^{} * D^{}", self.terms[k], k.0, k.1))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for LaurentDiffOp {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Outcome of the inductive kernel identity at one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelCheck {
    pub degree: u32,
    /// `ζ^{-2n} ∂ ζ² ∂ ζ^{2n} ∂^{2n-1} ζ^{-2} = ∂^{2n+1}`.
    pub identity_holds: bool,
    pub identity_normal_form: LaurentDiffOp,
    /// `ζ^{-2(n+1)} ∂ ζ² ∂ ζ^{2(n+1)} ∂^{2n+1} ζ^{-2} = ∂^{2n+3}`.
    pub step_holds: bool,
    pub step_normal_form: LaurentDiffOp,
    /// The intermediate form `ζ^{-2} ∂^{2n+1} (ζ²∂² - 2(2n+1) ζ²∂ζ^{-1} + (2n+1)(2n))`
    /// of the induction step also reduces to `∂^{2n+3}`.
    pub intermediate_holds: bool,
}

impl KernelCheck {
    pub fn holds(&self) -> bool {
        self.identity_holds && self.step_holds && self.intermediate_holds
    }
}

/// `ζ^{-2n} ∂ ζ² ∂ ζ^{2n} ∂^{2n-1} ζ^{-2}`; requires `n ≥ 1`.
pub fn kernel_identity_lhs(n: u32) -> LaurentDiffOp {
    assert!(n >= 1, "kernel identity needs n ≥ 1");
    let two_n = 2 * i64::from(n);
    LaurentDiffOp::chain(&[
        LaurentDiffOp::zeta(-two_n),
        LaurentDiffOp::d(1),
        LaurentDiffOp::zeta(2),
        LaurentDiffOp::d(1),
        LaurentDiffOp::zeta(two_n),
        LaurentDiffOp::d(2 * n - 1),
        LaurentDiffOp::zeta(-2),
    ])
}

fn induction_intermediate(n: u32) -> LaurentDiffOp {
    let k = 2 * i64::from(n) + 1;
    let bracket = LaurentDiffOp::monomial(Scalar::one(), 2, 2)
        .sub(&LaurentDiffOp::chain(&[
            LaurentDiffOp::monomial(Scalar::from(2 * k), 2, 1),
            LaurentDiffOp::zeta(-1),
        ]))
        .add(&LaurentDiffOp::monomial(Scalar::from(k * (k - 1)), 0, 0));
    LaurentDiffOp::chain(&[
        LaurentDiffOp::zeta(-2),
        LaurentDiffOp::d(2 * n + 1),
        bracket,
    ])
}

/// Checks the base identity and the induction step at degree `n ≥ 1`.
pub fn kernel_identity_check(n: u32) -> KernelCheck {
    let identity = kernel_identity_lhs(n);
    let step = kernel_identity_lhs(n + 1);
    let target = LaurentDiffOp::d(2 * n + 1);
    let step_target = LaurentDiffOp::d(2 * n + 3);
    let intermediate = induction_intermediate(n);
    KernelCheck {
        degree: n,
        identity_holds: identity == target,
        step_holds: step == step_target,
        intermediate_holds: intermediate == step_target,
        identity_normal_form: identity,
        step_normal_form: step,
    }
}

/// `ζ^{-2(n+1)} (ζ² ∂)^{2n+1} ζ^{-2n}`, the conjugated kernel expanded in
/// one piece.
pub fn conjugated_kernel(n: u32) -> LaurentDiffOp {
    let n = i64::from(n);
    let step = LaurentDiffOp::monomial(Scalar::one(), 2, 1);
    LaurentDiffOp::chain(&[
        LaurentDiffOp::zeta(-2 * (n + 1)),
        step.pow((2 * n + 1) as u32),
        LaurentDiffOp::zeta(-2 * n),
    ])
}

/// Residue of `z^q ∂_z^{order} z^p`: the falling factorial `(p)_{order}`
/// when `p + q - order = -1`, else zero.
pub fn residue_pairing(p: i64, q: i64, order: u32) -> Scalar {
    if p + q - i64::from(order) != -1 {
        return Scalar::zero();
    }
    falling_factorial(p, order)
}

/// `[a_m, a_m']` recomputed as `∮ g ∂^{2n+1} f` with `f = z^{n+m}`,
/// `g = z^{n+m'}`.
pub fn mode_commutator_via_kernel(n: u32, m: i64, m_prime: i64) -> Scalar {
    let n = i64::from(n);
    residue_pairing(n + m, n + m_prime, (2 * n + 1) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::structure_pi;
    use proptest::prelude::*;

    #[test]
    fn compose_examples() {
        let d = LaurentDiffOp::d(1);
        let z = LaurentDiffOp::zeta(1);
        let expected = LaurentDiffOp::monomial(Scalar::one(), 1, 1).add(&LaurentDiffOp::identity());
        assert_eq!(d.compose(&z), expected);
        assert_eq!(
            LaurentDiffOp::zeta(-1).compose(&z),
            LaurentDiffOp::identity()
        );
        let expected = LaurentDiffOp::monomial(Scalar::one(), 2, 1).add(&LaurentDiffOp::monomial(
            Scalar::from(2),
            1,
            0,
        ));
        assert_eq!(d.compose(&LaurentDiffOp::zeta(2)), expected);
    }

    #[test]
    fn canonical_commutation() {
        let d = LaurentDiffOp::d(1);
        let z = LaurentDiffOp::zeta(1);
        assert_eq!(d.compose(&z).sub(&z.compose(&d)), LaurentDiffOp::identity());
    }

    #[test]
    fn display_order() {
        let op = LaurentDiffOp::d(1).compose(&LaurentDiffOp::zeta(2));
        assert_eq!(op.to_string(), "1 * z^2 * D^1 + 2 * z^1 * D^0");
    }

    #[test]
    fn degree_one_identity_and_step() {
        let check = kernel_identity_check(1);
        assert!(check.identity_holds, "{}", check.identity_normal_form);
        assert!(check.step_holds);
        assert_eq!(check.step_normal_form, LaurentDiffOp::d(5));
        assert!(check.intermediate_holds);
    }

    #[test]
    fn monomial_action_matches_normal_form() {
        let lhs = kernel_identity_lhs(1);
        let rhs = LaurentDiffOp::d(3);
        for p in -3..=5 {
            assert_eq!(lhs.apply_monomial(p), rhs.apply_monomial(p), "p = {p}");
        }
    }

    /// Evaluates the unexpanded chain on `ζ^p` one factor at a time.
    fn chain_on_monomial(factors: &[LaurentDiffOp], p: i64) -> BTreeMap<i64, Scalar> {
        let mut poly: BTreeMap<i64, Scalar> = BTreeMap::from([(p, Scalar::one())]);
        for op in factors.iter().rev() {
            let mut next: BTreeMap<i64, Scalar> = BTreeMap::new();
            for (&e, c) in &poly {
                for (e2, c2) in op.apply_monomial(e) {
                    let slot = next.entry(e2).or_insert_with(Scalar::zero);
                    *slot += &(c * &c2);
                }
            }
            next.retain(|_, c| !c.is_zero());
            poly = next;
        }
        poly
    }

    #[test]
    fn factorwise_evaluation_oracle() {
        for n in 1..=3u32 {
            let two_n = 2 * i64::from(n);
            let factors = [
                LaurentDiffOp::zeta(-two_n),
                LaurentDiffOp::d(1),
                LaurentDiffOp::zeta(2),
                LaurentDiffOp::d(1),
                LaurentDiffOp::zeta(two_n),
                LaurentDiffOp::d(2 * n - 1),
                LaurentDiffOp::zeta(-2),
            ];
            let target = LaurentDiffOp::d(2 * n + 1);
            for p in -6..=8 {
                assert_eq!(chain_on_monomial(&factors, p), target.apply_monomial(p));
            }
        }
    }

    #[test]
    fn conjugated_kernel_is_odd_derivative() {
        for n in 0..=6 {
            assert_eq!(conjugated_kernel(n), LaurentDiffOp::d(2 * n + 1), "n = {n}");
        }
    }

    #[test]
    fn identities_hold_through_degree_ten() {
        for n in 1..=10 {
            assert!(kernel_identity_check(n).holds(), "n = {n}");
        }
    }

    #[test]
    fn residue_examples() {
        assert_eq!(residue_pairing(3, -1, 3), Scalar::from(6));
        assert_eq!(residue_pairing(3, 0, 3), Scalar::zero());
        assert_eq!(residue_pairing(0, -1, 0), Scalar::one());
    }

    #[test]
    fn mode_commutator_examples() {
        assert_eq!(mode_commutator_via_kernel(1, 2, -2), Scalar::from(6));
        assert_eq!(mode_commutator_via_kernel(1, 2, -3), Scalar::zero());
        assert_eq!(mode_commutator_via_kernel(2, 3, -3), Scalar::from(120));
    }

    #[test]
    fn kernel_agrees_with_structure_polynomial() {
        for n in 0..=4u32 {
            for m in -10..=10 {
                for mp in -10..=10 {
                    let expected = if m + mp == 0 {
                        structure_pi(n, m)
                    } else {
                        Scalar::zero()
                    };
                    assert_eq!(mode_commutator_via_kernel(n, m, mp), expected);
                }
            }
        }
    }

    fn small_op() -> impl Strategy<Value = LaurentDiffOp> {
        prop::collection::vec((-3i64..=3, 0u32..=3, -4i64..=4), 0..7).prop_map(|ts| {
            ts.into_iter()
                .fold(LaurentDiffOp::zero(), |acc, (a, b, c)| {
                    acc.add(&LaurentDiffOp::monomial(Scalar::from(c), a, b))
                })
        })
    }

    proptest! {
        #[test]
        fn composition_is_associative(a in small_op(), b in small_op(), c in small_op()) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        }

        #[test]
        fn composition_is_bilinear(a in small_op(), b in small_op(), c in small_op(), k in -5i64..5) {
            let k = Scalar::from(k);
            prop_assert_eq!(a.add(&b.scale(&k)).compose(&c), a.compose(&c).add(&b.compose(&c).scale(&k)));
        }

        #[test]
        fn composition_matches_action(a in small_op(), b in small_op(), p in -5i64..6) {
            let composed = a.compose(&b).apply_monomial(p);
            let mut sequential: BTreeMap<i64, Scalar> = BTreeMap::new();
            for (e, c) in b.apply_monomial(p) {
                for (e2, c2) in a.apply_monomial(e) {
                    let slot = sequential.entry(e2).or_insert_with(Scalar::zero);
                    *slot += &(&c * &c2);
                }
            }
            sequential.retain(|_, c| !c.is_zero());
            prop_assert_eq!(composed, sequential);
        }
    }
}
