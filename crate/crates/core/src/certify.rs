//! Exact certificates that a degree-`n` model carries no stress-energy
//! tensor, and an independent replay that checks them.
//!
//! A stress-energy tensor would supply modes `L_m` with
//! `[L_m, L_m'] = (m - m') L_{m+m'} + (c/12) m(m² - 1) δ_{m+m',0}` and
//! `L_{-2} Ω` in the level-2 subspace. Two obstructions are certified:
//!
//! * the level-2 Gram form vanishes, so `c/2 = ‖L_{-2} Ω‖² = 0` and with
//!   `c ≥ 0` the tensor is zero;
//! * level 2 has a single effective ray `a_{-2} Ω`, forcing `L = γ⁻¹ a` as
//!   fields, and then `[L_2, L_{-2}]` on `a_{-2} Ω` misses `4 L_0 + c/2` by
//!   a constant independent of `γ`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{vacuum_expectation, StructureConstants, Word};
use crate::fock::{
    apply_mode, effective_multiplicity, gram_matrix, inner_product, level_basis, mobius_apply,
    FockVector, PartitionState,
};
use crate::kernels::residue_pairing;
use crate::linalg::RatMatrix;
use crate::scalar::Scalar;

/// Verbatim form of the normalisation forced on the unique candidate.
pub const GAMMA_RELATION: &str = "c|γ|² = 12";

/// Coefficient of `c` in the central term of `[L_m, L_{-m}]`, from the
/// residue of `z^{1-m} ∂³ z^{m+1}` divided by 12.
pub fn virasoro_central_term(m: i64) -> Scalar {
    residue_pairing(m + 1, 1 - m, 3) * Scalar::ratio(1, 12)
}

/// `[L_m, L_m'] = l_coefficient · L_{l_index} + central_coefficient · c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VirasoroConstraint {
    pub m: i64,
    pub m_prime: i64,
    pub l_index: i64,
    pub l_coefficient: Scalar,
    pub central_coefficient: Scalar,
}

impl VirasoroConstraint {
    pub fn new(m: i64, m_prime: i64) -> Self {
        let central = residue_pairing(m + 1, m_prime + 1, 3) * Scalar::ratio(1, 12);
        Self {
            m,
            m_prime,
            l_index: m + m_prime,
            l_coefficient: Scalar::from(m - m_prime),
            central_coefficient: central,
        }
    }
}

/// Polynomial in `x = γ⁻²` with exact coefficients, lowest degree first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaPoly {
    pub coefficients: Vec<Scalar>,
}

impl GammaPoly {
    pub fn new(coefficients: Vec<Scalar>) -> Self {
        let mut p = Self { coefficients };
        p.trim();
        p
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    /// `k · γ⁻²`.
    pub fn linear(k: Scalar) -> Self {
        Self::new(vec![Scalar::zero(), k])
    }

    fn trim(&mut self) {
        while self.coefficients.last().is_some_and(Scalar::is_zero) {
            self.coefficients.pop();
        }
    }

    pub fn coefficient(&self, power: usize) -> Scalar {
        self.coefficients
            .get(power)
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coefficients.len() <= 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coefficients.len().max(other.coefficients.len());
        Self::new(
            (0..len)
                .map(|i| self.coefficient(i) + other.coefficient(i))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from(-1)))
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        Self::new(self.coefficients.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coefficients
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for GammaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}·γ⁻²"),
                _ => format!("{c}·γ^-{}", 2 * i),
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InferenceKind {
    /// Recomputed exactly by the replay.
    Computed,
    /// Operator-theoretic input taken as given.
    Axiom,
    SideCondition,
    Conclusion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InferenceNode {
    pub id: String,
    pub kind: InferenceKind,
    pub statement: String,
    pub depends_on: Vec<String>,
}

fn node(
    id: &str,
    kind: InferenceKind,
    statement: impl Into<String>,
    deps: &[&str],
) -> InferenceNode {
    InferenceNode {
        id: id.into(),
        kind,
        statement: statement.into(),
        depends_on: deps.iter().map(|d| d.to_string()).collect(),
    }
}

/// One `(m, -m)` constraint tested on one witness state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub constraint: VirasoroConstraint,
    pub witness: FockVector,
    pub witness_level: u64,
    pub witness_norm: Scalar,
    /// `⟨ψ| (m - m') L_0 + central · c |ψ⟩`.
    pub required: GammaPoly,
    /// `γ⁻² ⟨ψ| [a_m, a_m'] |ψ⟩`.
    pub actual: GammaPoly,
    /// `required - actual`; nonzero constant means no γ satisfies both.
    pub mismatch: GammaPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant")]
#[allow(clippy::large_enum_variant)]
pub enum Evidence {
    NullLevelTwo {
        gram_rank: usize,
        /// `‖L_{-2} Ω‖²` for any candidate in the level-2 space.
        candidate_norm: Scalar,
        central_charge: Scalar,
    },
    UniqueCandidateContradiction {
        relation: String,
        witness: FockVector,
        witness_norm: Scalar,
        /// `⟨Ω| [a_2, a_{-2}] |Ω⟩`.
        vacuum_bracket: Scalar,
        /// `c` as a polynomial in `γ⁻²`.
        central_charge: GammaPoly,
        constraint: VirasoroConstraint,
        l0_eigenvalue: Scalar,
        required: GammaPoly,
        actual: GammaPoly,
        mismatch: Scalar,
        sweep: Vec<ConstraintCheck>,
    },
    NoObstruction {
        effective_dimension: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    NullLevelTwo,
    UniqueCandidateContradiction,
    NoObstruction,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub degree: u32,
    /// Number of level-2 partition states.
    pub level_two_dimension: usize,
    pub effective_dimension: usize,
    pub level_two_basis: Vec<PartitionState>,
    pub level_two_gram: RatMatrix,
    pub evidence: Evidence,
    pub inferences: Vec<InferenceNode>,
}

impl Certificate {
    pub fn variant(&self) -> Variant {
        match self.evidence {
            Evidence::NullLevelTwo { .. } => Variant::NullLevelTwo,
            Evidence::UniqueCandidateContradiction { .. } => Variant::UniqueCandidateContradiction,
            Evidence::NoObstruction { .. } => Variant::NoObstruction,
        }
    }

    /// True when the certificate excludes a stress-energy tensor.
    pub fn is_obstruction(&self) -> bool {
        self.variant() != Variant::NoObstruction
    }
}

/// Which extra `(m, -m)` constraints to test in the contradiction branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sweep {
    pub max_mode: i64,
    pub max_level: u32,
}

/// `⟨ψ|·|ψ⟩` of `X` given as a sum of words, expanded over the basis
/// states of `ψ` into vacuum expectations.
fn expectation(words: &[(Scalar, Word)], psi: &FockVector, c: &StructureConstants) -> Scalar {
    let mut total = Scalar::zero();
    for (s, cs) in psi.terms() {
        for (t, ct) in psi.terms() {
            for (k, w) in words {
                let full = s.annihilation_word().concat(w).concat(&t.creation_word());
                total += &(cs * ct * k * vacuum_expectation(&full, c));
            }
        }
    }
    total
}

/// Tests `[L_m, L_{-m}] = 2m L_0 + central · c` on a homogeneous witness
/// under `L = γ⁻¹ a` and `c = central_per_x · γ⁻²`. `None` if the witness
/// mixes levels or is zero.
pub fn evaluate_constraint(
    c: &StructureConstants,
    m: i64,
    witness: &FockVector,
    central_per_x: &Scalar,
) -> Option<ConstraintCheck> {
    let level = witness.homogeneous_level()?;
    let constraint = VirasoroConstraint::new(m, -m);
    let norm = expectation(&[(Scalar::one(), Word::empty())], witness, c);
    let l0 = &constraint.l_coefficient * Scalar::from(level as i64) * &norm;
    let central = &constraint.central_coefficient * central_per_x * &norm;
    let required = GammaPoly::new(vec![l0, central]);
    let up = apply_mode(-m, witness, c);
    let down = apply_mode(m, witness, c);
    let bracket = inner_product(&up, &up, c) - inner_product(&down, &down, c);
    let actual = GammaPoly::linear(bracket);
    let mismatch = required.sub(&actual);
    Some(ConstraintCheck {
        constraint,
        witness: witness.clone(),
        witness_level: level,
        witness_norm: norm,
        required,
        actual,
        mismatch,
    })
}

fn inference_chain(variant: Variant) -> Vec<InferenceNode> {
    use InferenceKind::*;
    match variant {
        Variant::NullLevelTwo => vec![
            node("gram", Computed, "level-2 Gram matrix is zero", &[]),
            node(
                "norm",
                Computed,
                "every level-2 vector, in particular L₋₂Ω, has norm 0",
                &["gram"],
            ),
            node("central", Computed, "c/2 = ‖L₋₂Ω‖² = 0", &["norm"]),
            node(
                "positivity",
                SideCondition,
                "c ≥ 0, and Θ = 0 if and only if c = 0",
                &[],
            ),
            node(
                "conclusion",
                Conclusion,
                "Θ = 0: no stress-energy tensor",
                &["central", "positivity"],
            ),
        ],
        Variant::UniqueCandidateContradiction => vec![
            node(
                "rank",
                Computed,
                "level-2 Gram form has rank 1, spanned by a₋₂Ω",
                &[],
            ),
            node(
                "candidate",
                Computed,
                "a₋₂Ω = γ L₋₂Ω for some γ ≠ 0",
                &["rank"],
            ),
            node(
                "normalisation",
                Computed,
                format!("⟨Ω|[L₂,L₋₂]|Ω⟩ = c/2 gives {GAMMA_RELATION}"),
                &["candidate"],
            ),
            node(
                "two_point",
                Computed,
                "C = ‖(a₋₂ - γL₋₂)Ω‖² = 0",
                &["candidate", "normalisation"],
            ),
            node(
                "reeh_schlieder",
                Axiom,
                "a vanishing two-point constant forces the field a - γΘ to vanish",
                &["two_point"],
            ),
            node(
                "constraint",
                Computed,
                "⟨ψ|[L₂,L₋₂]|ψ⟩ ≠ ⟨ψ|4L₀ + c/2|ψ⟩ for ψ = a₋₂Ω and every γ",
                &["reeh_schlieder", "normalisation"],
            ),
            node(
                "conclusion",
                Conclusion,
                "γ⁻¹a is not a stress-energy tensor, and no other candidate exists",
                &["constraint"],
            ),
        ],
        Variant::NoObstruction => vec![node(
            "rank",
            Computed,
            "level-2 Gram form has rank ≥ 2: no obstruction found at level 2",
            &[],
        )],
    }
}

/// Builds the certificate for degree `n` (with `a_0 = 0`).
pub fn certify(n: u32) -> Certificate {
    certify_with_sweep(n, None)
}

pub fn certify_with_sweep(n: u32, sweep: Option<Sweep>) -> Certificate {
    let c = StructureConstants::new(n);
    let gram = gram_matrix(&c, 2);
    let d2 = effective_multiplicity(&c, 2);
    let evidence = match d2 {
        0 => Evidence::NullLevelTwo {
            gram_rank: 0,
            candidate_norm: Scalar::zero(),
            central_charge: Scalar::zero(),
        },
        1 => contradiction(&c, sweep),
        _ => Evidence::NoObstruction {
            effective_dimension: d2,
        },
    };
    let mut cert = Certificate {
        degree: n,
        level_two_dimension: gram.dimension(),
        effective_dimension: d2,
        level_two_basis: gram.basis,
        level_two_gram: gram.entries,
        evidence,
        inferences: Vec::new(),
    };
    cert.inferences = inference_chain(cert.variant());
    cert
}

fn contradiction(c: &StructureConstants, sweep: Option<Sweep>) -> Evidence {
    let witness = FockVector::basis(PartitionState::new(vec![2]).expect("valid partition"));
    let norm = inner_product(&witness, &witness, c);
    let vacuum_bracket = vacuum_expectation(&Word::new(vec![2, -2]), c)
        - vacuum_expectation(&Word::new(vec![-2, 2]), c);
    let constraint = VirasoroConstraint::new(2, -2);
    // γ⁻² ⟨Ω|[a_2, a_{-2}]|Ω⟩ = central_coefficient · c
    let central_per_x = &vacuum_bracket / &constraint.central_coefficient;
    let central_charge = GammaPoly::linear(central_per_x.clone());

    let l0_psi = mobius_apply(0, &witness, c.degree()).expect("L_0 is defined");
    let l0_eigenvalue = inner_product(&witness, &l0_psi, c) / &norm;
    let check = evaluate_constraint(c, 2, &witness, &central_per_x).expect("homogeneous witness");
    let mismatch = check.mismatch.coefficient(0);

    let sweep = sweep
        .map(|s| sweep_checks(c, s, &central_per_x))
        .unwrap_or_default();

    Evidence::UniqueCandidateContradiction {
        relation: GAMMA_RELATION.to_string(),
        witness,
        witness_norm: norm,
        vacuum_bracket,
        central_charge,
        constraint,
        l0_eigenvalue,
        required: check.required,
        actual: check.actual,
        mismatch,
        sweep,
    }
}

fn sweep_checks(
    c: &StructureConstants,
    sweep: Sweep,
    central_per_x: &Scalar,
) -> Vec<ConstraintCheck> {
    let mut out = Vec::new();
    for level in 1..=sweep.max_level {
        for state in level_basis(level) {
            let v = FockVector::basis(state);
            if inner_product(&v, &v, c).is_zero() {
                continue;
            }
            for m in 2..=sweep.max_mode {
                out.extend(evaluate_constraint(c, m, &v, central_per_x));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("field {field}: recorded {recorded}, recomputed {recomputed}")]
    Mismatch {
        field: String,
        recorded: String,
        recomputed: String,
    },
    #[error("field {field}: {reason}")]
    Invalid { field: String, reason: String },
}

fn expect_eq<T: PartialEq + fmt::Debug>(
    field: &str,
    recorded: &T,
    recomputed: &T,
) -> Result<(), VerifyError> {
    if recorded == recomputed {
        Ok(())
    } else {
        Err(VerifyError::Mismatch {
            field: field.to_string(),
            recorded: format!("{recorded:?}"),
            recomputed: format!("{recomputed:?}"),
        })
    }
}

fn invalid(field: &str, reason: impl Into<String>) -> VerifyError {
    VerifyError::Invalid {
        field: field.to_string(),
        reason: reason.into(),
    }
}

/// Replays a certificate from primitive algebra calls.
///
/// The Gram matrix is rebuilt entry by entry through normal ordering, its
/// rank by fraction-free elimination, norms through vacuum expectations and
/// the central coefficient through the residue pairing. Every recorded field
/// must agree exactly.
pub fn verify_certificate(cert: &Certificate) -> Result<(), VerifyError> {
    let n = cert.degree;
    let c = StructureConstants::new(n);

    let basis = level_basis(2);
    expect_eq("level_two_basis", &cert.level_two_basis, &basis)?;
    expect_eq(
        "level_two_dimension",
        &cert.level_two_dimension,
        &basis.len(),
    )?;
    let gram = RatMatrix::from_fn(basis.len(), basis.len(), |i, j| {
        vacuum_expectation(
            &basis[i]
                .annihilation_word()
                .concat(&basis[j].creation_word()),
            &c,
        )
    });
    expect_eq("level_two_gram", &cert.level_two_gram, &gram)?;
    let rank = gram.rank();
    expect_eq("effective_dimension", &cert.effective_dimension, &rank)?;

    let expected_variant = match rank {
        0 => Variant::NullLevelTwo,
        1 => Variant::UniqueCandidateContradiction,
        _ => Variant::NoObstruction,
    };
    expect_eq("evidence.variant", &cert.variant(), &expected_variant)?;
    expect_eq(
        "inferences",
        &cert.inferences,
        &inference_chain(expected_variant),
    )?;

    match &cert.evidence {
        Evidence::NullLevelTwo {
            gram_rank,
            candidate_norm,
            central_charge,
        } => {
            expect_eq("evidence.gram_rank", gram_rank, &rank)?;
            if !gram.is_zero() {
                return Err(invalid("level_two_gram", "not the zero matrix"));
            }
            // Any candidate is a combination of basis states; its norm is a
            // quadratic form in the zero Gram matrix.
            expect_eq("evidence.candidate_norm", candidate_norm, &Scalar::zero())?;
            let c_value = candidate_norm * Scalar::from(2);
            expect_eq("evidence.central_charge", central_charge, &c_value)?;
        }
        Evidence::UniqueCandidateContradiction {
            relation,
            witness,
            witness_norm,
            vacuum_bracket,
            central_charge,
            constraint,
            l0_eigenvalue,
            required,
            actual,
            mismatch,
            sweep,
        } => {
            expect_eq("evidence.relation", &relation.as_str(), &GAMMA_RELATION)?;
            let state = PartitionState::new(vec![2]).expect("valid partition");
            expect_eq(
                "evidence.witness",
                witness,
                &FockVector::basis(state.clone()),
            )?;
            let norm = vacuum_expectation(
                &state.annihilation_word().concat(&state.creation_word()),
                &c,
            );
            expect_eq("evidence.witness_norm", witness_norm, &norm)?;
            let bracket = c.bracket(2, -2);
            expect_eq("evidence.vacuum_bracket", vacuum_bracket, &bracket)?;
            let expected_constraint = VirasoroConstraint {
                m: 2,
                m_prime: -2,
                l_index: 0,
                l_coefficient: Scalar::from(4),
                central_coefficient: virasoro_central_term(2),
            };
            expect_eq("evidence.constraint", constraint, &expected_constraint)?;
            let per_x = &bracket / &expected_constraint.central_coefficient;
            expect_eq(
                "evidence.central_charge",
                central_charge,
                &GammaPoly::linear(per_x.clone()),
            )?;
            // c γ² must be the constant named in the relation.
            if central_charge.coefficient(1) != Scalar::from(12)
                || central_charge.coefficient(0) != Scalar::zero()
            {
                return Err(invalid(
                    "evidence.central_charge",
                    format!("{central_charge} is not 12·γ⁻²"),
                ));
            }
            let level = Scalar::from(state.level() as i64);
            expect_eq("evidence.l0_eigenvalue", l0_eigenvalue, &level)?;
            let expected_required = GammaPoly::new(vec![
                Scalar::from(4) * &level * &norm,
                &expected_constraint.central_coefficient * &per_x * &norm,
            ]);
            expect_eq("evidence.required", required, &expected_required)?;
            // Centrality of [a_2, a_{-2}] gives Π(2)‖ψ‖².
            let expected_actual = GammaPoly::linear(&bracket * &norm);
            expect_eq("evidence.actual", actual, &expected_actual)?;
            let gap = expected_required.sub(&expected_actual);
            if !gap.is_constant() {
                return Err(invalid(
                    "evidence.mismatch",
                    format!("gap {gap} depends on γ"),
                ));
            }
            expect_eq("evidence.mismatch", mismatch, &gap.coefficient(0))?;
            if mismatch.is_zero() {
                return Err(invalid(
                    "evidence.mismatch",
                    "zero gap is not a contradiction",
                ));
            }
            for (i, check) in sweep.iter().enumerate() {
                verify_sweep_entry(&c, check, &per_x).map_err(|e| match e {
                    VerifyError::Mismatch {
                        field,
                        recorded,
                        recomputed,
                    } => VerifyError::Mismatch {
                        field: format!("evidence.sweep[{i}].{field}"),
                        recorded,
                        recomputed,
                    },
                    VerifyError::Invalid { field, reason } => VerifyError::Invalid {
                        field: format!("evidence.sweep[{i}].{field}"),
                        reason,
                    },
                })?;
            }
        }
        Evidence::NoObstruction {
            effective_dimension,
        } => {
            expect_eq("evidence.effective_dimension", effective_dimension, &rank)?;
        }
    }
    Ok(())
}

fn verify_sweep_entry(
    c: &StructureConstants,
    check: &ConstraintCheck,
    per_x: &Scalar,
) -> Result<(), VerifyError> {
    let m = check.constraint.m;
    expect_eq(
        "constraint",
        &check.constraint,
        &VirasoroConstraint::new(m, -m),
    )?;
    let psi = &check.witness;
    let Some(level) = psi.homogeneous_level() else {
        return Err(invalid("witness", "not a nonzero state of a single level"));
    };
    expect_eq("witness_level", &check.witness_level, &level)?;
    let norm = expectation(&[(Scalar::one(), Word::empty())], psi, c);
    expect_eq("witness_norm", &check.witness_norm, &norm)?;
    let level = Scalar::from(level as i64);
    let required = GammaPoly::new(vec![
        Scalar::from(2 * m) * &level * &norm,
        virasoro_central_term(m) * per_x * &norm,
    ]);
    expect_eq("required", &check.required, &required)?;
    // The bracket word itself, normal ordered inside each expectation.
    let bracket = expectation(
        &[
            (Scalar::one(), Word::new(vec![m, -m])),
            (Scalar::from(-1), Word::new(vec![-m, m])),
        ],
        psi,
        c,
    );
    let actual = GammaPoly::linear(bracket);
    expect_eq("actual", &check.actual, &actual)?;
    expect_eq("mismatch", &check.mismatch, &required.sub(&actual))
}

/// `verify_certificate` as a yes/no answer.
pub fn certificate_is_valid(cert: &Certificate) -> bool {
    verify_certificate(cert).is_ok()
}
