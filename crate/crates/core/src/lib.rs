//! Finite-horizon analysis of weight functions, weight matrices and the
//! growth conditions relating them.
//!
//! Every check runs on an explicit [`GridSpec`] and returns a three-valued
//! [`Verdict`]. Nothing here proves an asymptotic statement; a verdict only
//! reports what the samples up to the horizon support.

pub mod conditions;
pub mod conjugate;
pub mod counterexample;
pub mod error;
pub mod grid;
pub mod growth;
pub mod lpspace;
pub mod quad;
pub mod relations;
pub mod verdict;
pub mod weight;

pub use conditions::{check_condition, check_implication_chain, classify, ClassReport, ConditionId, ConsistencyReport};
pub use conjugate::{
    associated_weight_matrix, double_conjugate, largest_convex_minorant, least_concave_majorant, omega_iota,
    young_conjugate, ConjugateProfile, GapReport,
};
pub use counterexample::{
    certify_all, construct, nonconvexity_certificate, nonequivalence, slow_variation_certificate, verify_profile,
    AdmissibleDelta, CertifyConfig, CertifyReport, CounterexampleProfile,
};
pub use error::{Error, Result};
pub use grid::{GridSpec, Spacing, WindowSups};
pub use growth::{growth_index, kappa, kappa_equivalence_check, slowly_varying_check, IndexEstimate, Kappa};
pub use lpspace::{
    inclusion_experiment, nontriviality_witness, staircase_witness, theta_function, theta_membership,
    translation_bound_check, weighted_norm, Exponent, NormResult, SampledFunction,
};
pub use relations::{
    bridge_check, compare, matrix_condition, matrix_relation, truncated_matrix_relation, LadderReport, MatrixCondition,
    MatrixKind, MatrixRelation, Relation, RelationVerdict, TruncatedRelation, WeightMatrix,
};
pub use verdict::{constants, Constants, Status, Verdict};
pub use weight::{
    associated_weight_function, evaluate, normalize, phi, Family, Flags, Profile, Repr, Sampled, WeightFunction,
    WeightSequence, WeightSpec,
};
