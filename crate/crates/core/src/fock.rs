//! Level-graded Fock space of the derivative current.
//!
//! A basis state `a_{-m1} ⋯ a_{-mk} Ω` is labelled by the partition
//! `m1 ≥ … ≥ mk ≥ 1` of its L₀ level. Creation modes with `1 ≤ m ≤ n` are
//! kept as formal symbols; their null character shows up in the Gram form,
//! never by deleting states.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{structure_pi, vacuum_expectation, StructureConstants, Word};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::scalar::Scalar;

/// Partition labelling `a_{-m1} ⋯ a_{-mk} Ω`, parts stored descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PartitionState(Vec<u32>);

impl PartitionState {
    pub fn vacuum() -> Self {
        PartitionState(Vec::new())
    }

    /// Parts in any order; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Parse("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(PartitionState(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn level(&self) -> u64 {
        self.0.iter().map(|&p| u64::from(p)).sum()
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiplicity(&self, part: u32) -> usize {
        self.0.iter().filter(|&&p| p == part).count()
    }

    /// Smallest part, if any. States whose smallest part is `≤ n` are null.
    pub fn min_part(&self) -> Option<u32> {
        self.0.last().copied()
    }

    fn with_part(&self, part: u32) -> Self {
        let mut parts = self.0.clone();
        let pos = parts.partition_point(|&p| p >= part);
        parts.insert(pos, part);
        PartitionState(parts)
    }

    fn without_part(&self, part: u32) -> Self {
        let mut parts = self.0.clone();
        if let Some(pos) = parts.iter().position(|&p| p == part) {
            parts.remove(pos);
        }
        PartitionState(parts)
    }

    /// The creation word `a_{-m1} ⋯ a_{-mk}`.
    pub fn creation_word(&self) -> Word {
        Word::new(self.0.iter().map(|&p| -i64::from(p)).collect::<Vec<_>>())
    }

    /// The adjoint of the creation word, `a_{mk} ⋯ a_{m1}`.
    pub fn annihilation_word(&self) -> Word {
        Word::new(
            self.0
                .iter()
                .rev()
                .map(|&p| i64::from(p))
                .collect::<Vec<_>>(),
        )
    }
}

impl Ord for PartitionState {
    /// Level first, then reverse lexicographic within a level, so `{2}`
    /// precedes `{1,1}`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.level()
            .cmp(&other.level())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for PartitionState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PartitionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("Ω");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl std::str::FromStr for PartitionState {
    type Err = Error;

    /// Parses `{3,2,2}`, `3,2,2`, `{}` or `Ω`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "Ω" || t == "vac" {
            return Ok(Self::vacuum());
        }
        let inner = t.trim_start_matches('{').trim_end_matches('}').trim();
        if inner.is_empty() {
            return Ok(Self::vacuum());
        }
        let parts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad partition {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

impl Serialize for PartitionState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PartitionState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Finite linear combination of partition states.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FockVector {
    terms: BTreeMap<PartitionState, Scalar>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::basis(PartitionState::vacuum())
    }

    pub fn basis(state: PartitionState) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(state, Scalar::one());
        Self { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (PartitionState, Scalar)>) -> Self {
        let mut v = Self::zero();
        for (s, c) in terms {
            v.add_term(s, &c);
        }
        v
    }

    pub fn terms(&self) -> &BTreeMap<PartitionState, Scalar> {
        &self.terms
    }

    pub fn coefficient(&self, state: &PartitionState) -> Scalar {
        self.terms.get(state).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common level of all terms, or `None` for mixed or zero vectors.
    pub fn homogeneous_level(&self) -> Option<u64> {
        let mut levels = self.terms.keys().map(PartitionState::level);
        let first = levels.next()?;
        levels.all(|l| l == first).then_some(first)
    }

    pub fn max_level(&self) -> Option<u64> {
        self.terms.keys().map(PartitionState::level).max()
    }

    pub fn add_term(&mut self, state: PartitionState, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(state.clone()).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&state);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from(-1)))
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(s, c)| (s.clone(), c * k)).collect(),
        }
    }

    /// Applies `L₀`: each term scaled by its level.
    pub fn grade(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(s, c)| (s.clone(), c * Scalar::from(s.level() as usize))),
        )
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| format!("{c} * {s}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// All partitions of `level`, reverse lexicographic: `[{2}, {1,1}]` for 2.
pub fn level_basis(level: u32) -> Vec<PartitionState> {
    fn extend(rest: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<PartitionState>) {
        if rest == 0 {
            out.push(PartitionState(prefix.clone()));
            return;
        }
        for part in (1..=rest.min(max_part)).rev() {
            prefix.push(part);
            extend(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(level, level, &mut Vec::new(), &mut out);
    out
}

/// `a_m v`, evaluated by commuting `a_m` through the creators.
pub fn apply_mode(m: i64, v: &FockVector, c: &StructureConstants) -> FockVector {
    match m.cmp(&0) {
        Ordering::Equal => v.scale(c.q()),
        Ordering::Less => {
            let part = u32::try_from(-m).expect("mode index out of range");
            FockVector::from_terms(v.terms.iter().map(|(s, k)| (s.with_part(part), k.clone())))
        }
        Ordering::Greater => {
            let Ok(part) = u32::try_from(m) else {
                return FockVector::zero();
            };
            let pi = structure_pi(c.degree(), m);
            if pi.is_zero() {
                return FockVector::zero();
            }
            FockVector::from_terms(v.terms.iter().filter_map(|(s, k)| {
                let copies = s.multiplicity(part);
                (copies > 0).then(|| (s.without_part(part), k * &pi * Scalar::from(copies)))
            }))
        }
    }
}

/// Exact Gram matrix of one level in the [`level_basis`] order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramMatrix {
    pub degree: u32,
    pub level: u32,
    pub q: Scalar,
    pub basis: Vec<PartitionState>,
    pub entries: RatMatrix,
}

impl GramMatrix {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.entries.rank()
    }
}

/// Vacuum expectation of `(creation word of i)† · (creation word of j)`.
pub fn gram_entry(i: &PartitionState, j: &PartitionState, c: &StructureConstants) -> Scalar {
    let w = i.annihilation_word().concat(&j.creation_word());
    vacuum_expectation(&w, c)
}

/// Gram matrix at `level`, each entry through [`vacuum_expectation`].
pub fn gram_matrix(c: &StructureConstants, level: u32) -> GramMatrix {
    let basis = level_basis(level);
    let d = basis.len();
    let upper: Vec<((usize, usize), Scalar)> = (0..d)
        .flat_map(|i| (i..d).map(move |j| (i, j)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(i, j)| ((i, j), gram_entry(&basis[i], &basis[j], c)))
        .collect();
    let mut entries = RatMatrix::zeros(d, d);
    for ((i, j), v) in upper {
        entries.set(j, i, v.clone());
        entries.set(i, j, v);
    }
    GramMatrix {
        degree: c.degree(),
        level,
        q: c.q().clone(),
        basis,
        entries,
    }
}

/// `⟨u, v⟩`: apply the adjoint word of each basis state of `u` to `v` and
/// read off the vacuum coefficient. Levels never mix.
pub fn inner_product(u: &FockVector, v: &FockVector, c: &StructureConstants) -> Scalar {
    let mut total = Scalar::zero();
    for (s, cu) in u.terms() {
        let same_level = FockVector::from_terms(
            v.terms()
                .iter()
                .filter(|(t, _)| t.level() == s.level())
                .map(|(t, k)| (t.clone(), k.clone())),
        );
        if same_level.is_zero() {
            continue;
        }
        let mut w = same_level;
        for &part in s.parts() {
            w = apply_mode(i64::from(part), &w, c);
            if w.is_zero() {
                break;
            }
        }
        total += &(cu * w.coefficient(&PartitionState::vacuum()));
    }
    total
}

pub fn norm_squared(v: &FockVector, c: &StructureConstants) -> Scalar {
    inner_product(v, v, c)
}

/// Rank and kernel of the level-`N` Gram form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NullReport {
    pub degree: u32,
    pub level: u32,
    pub dimension: usize,
    pub rank: usize,
    pub basis: Vec<PartitionState>,
    pub null_basis: Vec<FockVector>,
}

pub fn null_report(c: &StructureConstants, level: u32) -> NullReport {
    let gram = gram_matrix(c, level);
    let rank = gram.entries.rank();
    let null_basis = gram
        .entries
        .nullspace()
        .into_iter()
        .map(|v| FockVector::from_terms(gram.basis.iter().cloned().zip(v)))
        .collect();
    NullReport {
        degree: c.degree(),
        level,
        dimension: gram.basis.len(),
        rank,
        basis: gram.basis,
        null_basis,
    }
}

/// Number of independent states at `level` modulo null vectors.
pub fn effective_multiplicity(c: &StructureConstants, level: u32) -> usize {
    gram_matrix(c, level).entries.rank()
}

/// Global conformal generator `L_k`, `k ∈ {-1, 0, 1}`, on Fock vectors.
///
/// Defined by `L_k Ω = 0` and `[L_k, a_m] = (k n - m) a_{m+k}` (weight
/// `n + 1`). A creator `a_{-1}` lowered by `L_1` becomes `a_0`; Möbius
/// invariance of the vacuum forces `⟨Ω, a_0 Ω⟩ = 0`, so those terms drop.
/// For `n ≥ 1` this makes the sl(2) relations hold modulo null vectors on
/// states containing a part `1`, and exactly on all other states.
pub fn mobius_apply(k: i64, v: &FockVector, degree: u32) -> Result<FockVector> {
    if !(-1..=1).contains(&k) {
        return Err(Error::InvalidMobiusIndex(k));
    }
    if k == 0 {
        return Ok(v.grade());
    }
    let n = i64::from(degree);
    let mut out = FockVector::zero();
    for (s, coef) in v.terms() {
        let mut seen = None;
        for &part in s.parts() {
            if seen == Some(part) {
                continue;
            }
            seen = Some(part);
            let m = i64::from(part);
            let factor = (k * n + m) * s.multiplicity(part) as i64;
            let new_part = m - k;
            if factor == 0 || new_part == 0 {
                continue;
            }
            let target = s.without_part(part).with_part(new_part as u32);
            out.add_term(target, &(coef * Scalar::from(factor)));
        }
    }
    Ok(out)
}
