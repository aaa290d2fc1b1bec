//! Mode algebra of the degree-`n` derivative current.
//!
//! Generators `a_m` (`m ∈ ℤ`) obey
//!
//! ```text
//! [a_m, a_m'] = δ_{m,-m'} Π(m) · 1,     Π(m) = ∏_{k=0}^{2n} (m - n + k),
//! ```
//!
//! and `a_0` is central, acting as `q · 1`. Elements are kept in normal
//! order: creators (negative indices) to the left, annihilators (positive
//! indices) to the right, each block ascending, and no `a_0` letters. A
//! normal-ordered word is therefore just a sorted list of nonzero indices.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `Π(m) = ∏_{k=0}^{2n} (m - n + k)`.
///
/// Odd in `m`, and zero exactly when `|m| ≤ n`.
pub fn structure_pi(n: u32, m: i64) -> Scalar {
    let n = i64::from(n);
    (0..=2 * n).map(|k| Scalar::from(m - n + k)).product()
}

/// `Π′(m) = Π(m) / m`, defined for `m ≠ 0`. Even in `m` and never negative.
pub fn structure_pi_prime(n: u32, m: i64) -> Result<Scalar> {
    if m == 0 {
        return Err(Error::ZeroModePrime);
    }
    Ok(structure_pi(n, m) / Scalar::from(m))
}

/// Parameters of one model: derivative degree `n` (field weight `n + 1`)
/// and the value `q` of the central zeroth mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureConstants {
    degree: u32,
    q: Scalar,
}

impl StructureConstants {
    /// Vacuum representation with `q = 0`.
    pub fn new(degree: u32) -> Self {
        Self {
            degree,
            q: Scalar::zero(),
        }
    }

    pub fn with_q(degree: u32, q: Scalar) -> Self {
        Self { degree, q }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Scaling dimension `n + 1`.
    pub fn weight(&self) -> u32 {
        self.degree + 1
    }

    pub fn q(&self) -> &Scalar {
        &self.q
    }

    pub fn pi(&self, m: i64) -> Scalar {
        structure_pi(self.degree, m)
    }

    /// `[a_m, a_m']` as a scalar.
    pub fn bracket(&self, m: i64, m_prime: i64) -> Scalar {
        if m + m_prime == 0 {
            self.pi(m)
        } else {
            Scalar::zero()
        }
    }
}

/// An ordered product `a_{m1} a_{m2} ⋯ a_{mk}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<i64>);

impl Word {
    pub fn new(modes: impl Into<Vec<i64>>) -> Self {
        Word(modes.into())
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn modes(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// L₀ grade of the product: `-Σ mᵢ`.
    pub fn grade(&self) -> i64 {
        -self.0.iter().sum::<i64>()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut modes = self.0.clone();
        modes.extend_from_slice(&other.0);
        Word(modes)
    }

    /// Normal order: ascending, without zero modes.
    pub fn is_normal(&self) -> bool {
        self.0.iter().all(|&m| m != 0) && self.0.windows(2).all(|w| w[0] <= w[1])
    }
}

impl From<&[i64]> for Word {
    fn from(modes: &[i64]) -> Self {
        Word(modes.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(|m| format!("a[{m}]")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A finite linear combination of normal-ordered words plus a central
/// scalar part.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraElement {
    terms: BTreeMap<Word, Scalar>,
    scalar: Scalar,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_scalar(c: Scalar) -> Self {
        Self {
            terms: BTreeMap::new(),
            scalar: c,
        }
    }

    /// The single generator `a_m`, with `a_0` already replaced by `q`.
    pub fn mode(m: i64, c: &StructureConstants) -> Self {
        normal_order(&Word::new(vec![m]), c)
    }

    pub fn scalar(&self) -> &Scalar {
        &self.scalar
    }

    /// Non-scalar terms, keyed by normal-ordered word.
    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() && self.terms.is_empty()
    }

    pub fn is_scalar(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        let mut acc = Accumulator::default();
        for (w, c) in self.iter_all() {
            acc.add(w, &(c * k));
        }
        acc.finish()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut acc = Accumulator::default();
        for (w, c) in self.iter_all().chain(other.iter_all()) {
            acc.add(w, c);
        }
        acc.finish()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from(-1)))
    }

    /// The product `self · other`, normal ordered.
    pub fn mul(&self, other: &Self, c: &StructureConstants) -> Self {
        let mut result = Accumulator::default();
        for (w_right, c_right) in other.iter_all() {
            let mut partial = Accumulator::default();
            for (w, coef) in self.iter_all() {
                partial.add(w, &(coef * c_right));
            }
            for &m in w_right.modes() {
                partial = partial.times_mode(m, c);
            }
            for (w, coef) in partial.entries {
                result.add(&w, &coef);
            }
        }
        result.finish()
    }

    fn iter_all(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        static EMPTY: Word = Word(Vec::new());
        let scalar = (!self.scalar.is_zero()).then_some((&EMPTY, &self.scalar));
        scalar.into_iter().chain(self.terms.iter())
    }
}

impl fmt::Display for AlgebraElement {
    /// `coeff * a[m1] a[m2] ... + coeff * 1`; the scalar term comes last.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("{c} * {w}"))
            .collect();
        if !self.scalar.is_zero() || parts.is_empty() {
            parts.push(format!("{} * 1", self.scalar));
        }
        f.write_str(&parts.join(" + "))
    }
}

/// Map from normal-ordered word to coefficient; the empty word holds the
/// scalar part until [`Accumulator::finish`].
#[derive(Default)]
struct Accumulator {
    entries: BTreeMap<Word, Scalar>,
}

impl Accumulator {
    fn add(&mut self, w: &Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.entries.entry(w.clone()).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.entries.remove(w);
        }
    }

    /// Right-multiplies every term by `a_m` and restores normal order.
    fn times_mode(self, m: i64, c: &StructureConstants) -> Accumulator {
        let mut out = Accumulator::default();
        if m == 0 {
            for (w, coef) in self.entries {
                out.add(&w, &(coef * c.q()));
            }
            return out;
        }
        let contraction = if m < 0 { c.pi(-m) } else { Scalar::zero() };
        for (w, coef) in self.entries {
            if m < 0 && !contraction.is_zero() {
                // a_m moves left through the annihilators; each copy of
                // a_{-m} it passes leaves Π(-m) behind.
                let copies = w.0.iter().filter(|&&p| p == -m).count();
                if copies > 0 {
                    let mut shorter = w.0.clone();
                    let pos = shorter.iter().position(|&p| p == -m).unwrap();
                    shorter.remove(pos);
                    out.add(
                        &Word(shorter),
                        &(&coef * &contraction * Scalar::from(copies)),
                    );
                }
            }
            let mut longer = w.0;
            let pos = longer.partition_point(|&p| p <= m);
            longer.insert(pos, m);
            out.add(&Word(longer), &coef);
        }
        out
    }

    fn finish(mut self) -> AlgebraElement {
        let scalar = self.entries.remove(&Word::empty()).unwrap_or_default();
        AlgebraElement {
            terms: self.entries,
            scalar,
        }
    }
}

/// Rewrites the product `w` into normal order under the mode relations.
pub fn normal_order(w: &Word, c: &StructureConstants) -> AlgebraElement {
    let mut acc = Accumulator::default();
    acc.add(&Word::empty(), &Scalar::one());
    for &m in w.modes() {
        acc = acc.times_mode(m, c);
    }
    acc.finish()
}

/// `⟨Ω| w |Ω⟩`: the scalar part of the normal-ordered word.
pub fn vacuum_expectation(w: &Word, c: &StructureConstants) -> Scalar {
    if w.grade() != 0 {
        return Scalar::zero();
    }
    normal_order(w, c).scalar
}

/// `xy - yx`, normal ordered.
pub fn commutator(
    x: &AlgebraElement,
    y: &AlgebraElement,
    c: &StructureConstants,
) -> AlgebraElement {
    x.mul(y, c).sub(&y.mul(x, c))
}
