//! Energy bounds for single modes and smeared fields.
//!
//! The mode bounds maximize `‖a_{±m} ψ‖²` over unit vectors of a fixed
//! level, where the norm is the exact Gram form and null directions are
//! quotiented out. Matrices are assembled and reduced exactly
//! (`G = L D Lᵀ`, `X = L⁻¹ M L⁻ᵀ`); floats enter only at the final
//! symmetric eigenvalue step.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{structure_pi, structure_pi_prime, StructureConstants};
use crate::error::{Error, Result};
use crate::fock::{apply_mode, gram_matrix, inner_product, level_basis, FockVector};
use crate::linalg::RatMatrix;
use crate::scalar::Scalar;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Annihilator,
    Creator,
    Smeared,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub degree: u32,
    /// Mode index `m ≥ 1` for the single-mode checks.
    pub mode: Option<i64>,
    /// State level (single-mode checks) or highest level of `Ψ` (smeared).
    pub level: u32,
    /// Dimension of the level modulo null vectors.
    pub effective_dimension: usize,
    /// Largest ratio `‖a ψ‖² / ‖ψ‖²`, or the smeared left-hand side `‖Φ(f)Ψ‖`.
    pub observed: f64,
    /// Exact analytic bound for the single-mode checks.
    pub bound: Option<Scalar>,
    /// Right-hand side as used in the comparison.
    pub bound_value: f64,
    /// Smallest generalized eigenvalue seen, as a positivity probe.
    pub min_eigenvalue: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    /// Creator checks: `‖a_{-m}e‖² = ‖a_m e‖² + Π(m)‖e‖²` on every basis state.
    pub ladder_identity: Option<bool>,
    pub note: Option<String>,
}

struct Spectrum {
    effective_dimension: usize,
    max: f64,
    min: f64,
}

/// Extreme generalized eigenvalues of `(⟨A e_i, A e_j⟩, ⟨e_i, e_j⟩)` over
/// the Gram range of `level`, where `A = a_mode`.
fn mode_spectrum(c: &StructureConstants, mode: i64, level: u32) -> Spectrum {
    let gram = gram_matrix(c, level);
    let support = gram.entries.rank_profile().pivot_cols;
    if support.is_empty() {
        return Spectrum {
            effective_dimension: 0,
            max: 0.0,
            min: 0.0,
        };
    }
    let images: Vec<FockVector> = support
        .iter()
        .map(|&i| apply_mode(mode, &FockVector::basis(gram.basis[i].clone()), c))
        .collect();
    let r = support.len();
    let m = RatMatrix::from_fn(r, r, |i, j| inner_product(&images[i], &images[j], c));
    let g = gram.entries.principal(&support);
    let (l, d) = g
        .ldl()
        .expect("Gram form restricted to its rank support is positive definite");
    let y = l.forward_substitute(&m);
    let x = l.forward_substitute(&y.transpose());

    let scale: Vec<f64> = d.iter().map(|v| v.to_f64().sqrt()).collect();
    let reduced = DMatrix::from_fn(r, r, |i, j| x.get(i, j).to_f64() / (scale[i] * scale[j]));
    // X is exactly symmetric; symmetrize away float asymmetry from the scaling.
    let reduced = (&reduced + reduced.transpose()) * 0.5;
    let eig = reduced.symmetric_eigenvalues();
    Spectrum {
        effective_dimension: r,
        max: eig.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        min: eig.iter().copied().fold(f64::INFINITY, f64::min),
    }
}

fn check_mode(mode: i64) -> Result<()> {
    if mode < 1 {
        return Err(Error::ModeTooSmall(mode));
    }
    Ok(())
}

fn passes(observed: f64, bound: f64, tolerance: f64) -> bool {
    observed <= bound * (1.0 + tolerance)
}

/// `max ‖a_m ψ‖² ≤ N Π′(m)` over unit level-`N` states.
pub fn annihilator_bound_check(
    c: &StructureConstants,
    mode: i64,
    level: u32,
    tolerance: f64,
) -> Result<BoundReport> {
    check_mode(mode)?;
    let spectrum = mode_spectrum(c, mode, level);
    let bound = Scalar::from(level) * structure_pi_prime(c.degree(), mode)?;
    let bound_value = bound.to_f64();
    Ok(BoundReport {
        kind: BoundKind::Annihilator,
        degree: c.degree(),
        mode: Some(mode),
        level,
        effective_dimension: spectrum.effective_dimension,
        observed: spectrum.max,
        bound: Some(bound),
        bound_value,
        min_eigenvalue: Some(spectrum.min),
        tolerance,
        pass: passes(spectrum.max, bound_value, tolerance),
        ladder_identity: None,
        note: (spectrum.effective_dimension == 0).then(|| "empty effective space".to_string()),
    })
}

/// Exact check of `‖a_{-m}e‖² - ‖a_m e‖² = Π(m)‖e‖²` on every basis state
/// of `level`.
pub fn ladder_identity_holds(c: &StructureConstants, mode: i64, level: u32) -> bool {
    let pi = structure_pi(c.degree(), mode);
    level_basis(level).into_iter().all(|s| {
        let e = FockVector::basis(s);
        let up = apply_mode(-mode, &e, c);
        let down = apply_mode(mode, &e, c);
        inner_product(&up, &up, c) - inner_product(&down, &down, c)
            == &pi * inner_product(&e, &e, c)
    })
}

/// `max ‖a_{-m} ψ‖² ≤ (N + m) Π′(m)` over unit level-`N` states, together
/// with the exact ladder identity.
pub fn creator_bound_check(
    c: &StructureConstants,
    mode: i64,
    level: u32,
    tolerance: f64,
) -> Result<BoundReport> {
    check_mode(mode)?;
    let spectrum = mode_spectrum(c, -mode, level);
    let bound = Scalar::from(i64::from(level) + mode) * structure_pi_prime(c.degree(), mode)?;
    let bound_value = bound.to_f64();
    let ladder = ladder_identity_holds(c, mode, level);
    Ok(BoundReport {
        kind: BoundKind::Creator,
        degree: c.degree(),
        mode: Some(mode),
        level,
        effective_dimension: spectrum.effective_dimension,
        observed: spectrum.max,
        bound: Some(bound),
        bound_value,
        min_eigenvalue: Some(spectrum.min),
        tolerance,
        pass: ladder && passes(spectrum.max, bound_value, tolerance),
        ladder_identity: Some(ladder),
        note: (spectrum.effective_dimension == 0).then(|| "empty effective space".to_string()),
    })
}

/// Fourier coefficients `f_m` of a test function on the circle.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SmearedFunction {
    coefficients: BTreeMap<i64, Complex64>,
    real: bool,
}

impl SmearedFunction {
    pub fn new(coefficients: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let coefficients = coefficients
            .into_iter()
            .filter(|(_, f)| f.norm() != 0.0)
            .collect();
        Self {
            coefficients,
            real: false,
        }
    }

    /// Real test function: `f_0` is made real and `f_{-m} = conj(f_m)`.
    pub fn real(zero_mode: f64, positive: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let mut coefficients = BTreeMap::new();
        if zero_mode != 0.0 {
            coefficients.insert(0, Complex64::new(zero_mode, 0.0));
        }
        for (m, f) in positive {
            assert!(m > 0, "positive-mode coefficients expected");
            if f.norm() != 0.0 {
                coefficients.insert(m, f);
                coefficients.insert(-m, f.conj());
            }
        }
        Self {
            coefficients,
            real: true,
        }
    }

    pub fn coefficients(&self) -> &BTreeMap<i64, Complex64> {
        &self.coefficients
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn satisfies_reality(&self) -> bool {
        self.coefficients.iter().all(|(&m, f)| {
            let partner = self.coefficients.get(&-m).copied().unwrap_or_default();
            (partner - f.conj()).norm() <= 1e-15 * f.norm().max(1.0)
        })
    }
}

/// Linear energy bound
/// `‖Φ(f)Ψ‖ ≤ ‖(L₀+1)Ψ‖ Σ_m |f_m| (|m| + Π′(m) + |q| + 1)`, `Π′(0) := 0`.
///
/// `max_level` is the truncation of the Fock space; a creator that would
/// leave it is an error rather than a silent cut.
pub fn smeared_bound_check(
    c: &StructureConstants,
    f: &SmearedFunction,
    psi: &FockVector,
    max_level: u32,
    tolerance: f64,
) -> Result<BoundReport> {
    let top = psi.max_level().unwrap_or(0);
    let mut images = Vec::with_capacity(f.coefficients.len());
    for (&m, &fm) in &f.coefficients {
        let reached = if m < 0 { top + m.unsigned_abs() } else { top };
        if reached > u64::from(max_level) {
            return Err(Error::TruncationOverflow {
                mode: m,
                level: reached,
                max_level,
            });
        }
        images.push((fm, apply_mode(m, psi, c)));
    }

    let mut lhs_sq = 0.0;
    for (fi, ui) in &images {
        for (fj, uj) in &images {
            let h = inner_product(ui, uj, c).to_f64();
            lhs_sq += (fi.conj() * fj).re * h;
        }
    }
    let lhs = lhs_sq.max(0.0).sqrt();

    let shifted = psi.grade().add(psi);
    let energy_norm = inner_product(&shifted, &shifted, c).to_f64().sqrt();
    let q_abs = c.q().abs().to_f64();
    let weight: f64 = f
        .coefficients
        .iter()
        .map(|(&m, fm)| {
            let pi_prime = if m == 0 {
                0.0
            } else {
                structure_pi_prime(c.degree(), m)
                    .map(|s| s.to_f64())
                    .unwrap_or(0.0)
            };
            fm.norm() * (m.unsigned_abs() as f64 + pi_prime + q_abs + 1.0)
        })
        .sum();
    let rhs = energy_norm * weight;

    Ok(BoundReport {
        kind: BoundKind::Smeared,
        degree: c.degree(),
        mode: None,
        level: u32::try_from(top).unwrap_or(u32::MAX),
        effective_dimension: 0,
        observed: lhs,
        bound: None,
        bound_value: rhs,
        min_eigenvalue: None,
        tolerance,
        pass: passes(lhs, rhs, tolerance),
        ladder_identity: None,
        note: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::PartitionState;

    fn c(n: u32) -> StructureConstants {
        StructureConstants::new(n)
    }

    #[test]
    fn annihilator_examples() {
        let r = annihilator_bound_check(&c(1), 2, 2, DEFAULT_TOLERANCE).unwrap();
        assert!((r.observed - 6.0).abs() < 1e-12);
        assert_eq!(r.bound, Some(Scalar::from(6)));
        assert!(r.pass);

        let r = annihilator_bound_check(&c(1), 1, 5, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(r.observed, 0.0);
        assert_eq!(r.bound, Some(Scalar::zero()));
        assert!(r.pass);

        let r = annihilator_bound_check(&c(1), 7, 3, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(r.observed, 0.0);
        assert!(r.pass);

        assert_eq!(
            annihilator_bound_check(&c(1), 0, 3, 1e-9),
            Err(Error::ModeTooSmall(0))
        );
    }

    #[test]
    fn empty_effective_space_passes_trivially() {
        let r = annihilator_bound_check(&c(2), 2, 1, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(r.effective_dimension, 0);
        assert!(r.pass);
        assert_eq!(r.note.as_deref(), Some("empty effective space"));
    }

    #[test]
    fn creator_examples() {
        let r = creator_bound_check(&c(1), 2, 0, DEFAULT_TOLERANCE).unwrap();
        assert!((r.observed - 6.0).abs() < 1e-12);
        assert_eq!(r.bound, Some(Scalar::from(6)));
        assert!(r.pass && r.ladder_identity == Some(true));

        let r = creator_bound_check(&c(1), 2, 2, DEFAULT_TOLERANCE).unwrap();
        assert!(r.observed <= 12.0 * (1.0 + 1e-9));
        // ψ = a_-2 Ω: ‖a_-2 ψ‖² = 2·36, ‖ψ‖² = 6
        assert!((r.observed - 12.0).abs() < 1e-9);
        assert!(r.pass);

        let r = creator_bound_check(&c(2), 2, 0, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(r.observed, 0.0);
        assert_eq!(r.bound, Some(Scalar::zero()));
        assert!(r.pass);
    }

    #[test]
    fn smeared_single_mode_example() {
        let cc = c(1);
        let f2 = Complex64::new(0.3, -0.4);
        let f = SmearedFunction::new([(2, f2)]);
        let psi = FockVector::basis(PartitionState::new(vec![2]).unwrap());
        let r = smeared_bound_check(&cc, &f, &psi, 8, DEFAULT_TOLERANCE).unwrap();
        // Unnormalized Ψ = a_-2 Ω (norm √6): both sides carry one factor √6.
        let s6 = 6f64.sqrt();
        assert!((r.observed / s6 - s6 * f2.norm()).abs() < 1e-12);
        assert!((r.bound_value / s6 - 18.0 * f2.norm()).abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn smeared_trivial_examples() {
        let cc = c(1);
        let psi = FockVector::basis(PartitionState::new(vec![3, 2]).unwrap());
        let r = smeared_bound_check(&cc, &SmearedFunction::default(), &psi, 8, 1e-9).unwrap();
        assert_eq!((r.observed, r.bound_value), (0.0, 0.0));
        assert!(r.pass);

        let f = SmearedFunction::real(2.5, []);
        let r = smeared_bound_check(&cc, &f, &psi, 8, 1e-9).unwrap();
        assert_eq!(r.observed, 0.0);
        assert!(r.bound_value > 0.0 && r.pass);
    }

    #[test]
    fn truncation_overflow_is_an_error() {
        let psi = FockVector::basis(PartitionState::new(vec![4, 3]).unwrap());
        let f = SmearedFunction::real(0.0, [(2, Complex64::new(1.0, 0.0))]);
        let err = smeared_bound_check(&c(1), &f, &psi, 8, 1e-9).unwrap_err();
        assert_eq!(
            err,
            Error::TruncationOverflow {
                mode: -2,
                level: 9,
                max_level: 8
            }
        );
    }

    #[test]
    fn real_functions_satisfy_reality() {
        let f = SmearedFunction::real(
            1.0,
            [
                (1, Complex64::new(0.5, 2.0)),
                (3, Complex64::new(-1.0, 0.0)),
            ],
        );
        assert!(f.is_real() && f.satisfies_reality());
        assert_eq!(f.coefficients()[&-1], Complex64::new(0.5, -2.0));
        assert!(!SmearedFunction::new([(1, Complex64::new(1.0, 0.0))]).satisfies_reality());
    }
}
