//! Exact computer algebra for the conformally covariant derivatives of the
//! chiral U(1) current.
//!
//! The crate builds the mode algebra of the degree-`n` derivative field,
//! its level-graded Fock space with exact Gram forms, a Laurent
//! differential-operator calculus for the commutator kernels, numerical
//! energy-bound and character checks, and a certifier that decides whether
//! the model can carry a stress-energy tensor.

pub mod algebra;
pub mod bounds;
pub mod certify;
pub mod characters;
pub mod error;
pub mod fock;
pub mod hp;
pub mod kernels;
pub mod linalg;
pub mod scalar;

pub use algebra::{
    commutator, normal_order, structure_pi, structure_pi_prime, vacuum_expectation, AlgebraElement,
    StructureConstants, Word,
};
pub use bounds::{
    annihilator_bound_check, creator_bound_check, smeared_bound_check, BoundKind, BoundReport,
    SmearedFunction,
};
pub use certify::{
    certify, verify_certificate, virasoro_central_term, Certificate, Evidence, GammaPoly,
    VerifyError, VirasoroConstraint,
};
pub use characters::{
    eta, log_partition_function, modular_check, nuclearity_probe, partition_series,
    reduced_character, BetaGrid, CharacterSeries, EtaValue, NuclearityReport,
};
pub use error::{Error, Result};
pub use fock::{
    apply_mode, effective_multiplicity, gram_matrix, inner_product, level_basis, mobius_apply,
    null_report, FockVector, GramMatrix, NullReport, PartitionState,
};
pub use kernels::{kernel_identity_check, residue_pairing, KernelCheck, LaurentDiffOp};
pub use linalg::RatMatrix;
pub use scalar::Scalar;

/// Version string embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
