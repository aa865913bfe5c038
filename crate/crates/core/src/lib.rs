//! One-dimensional wave scattering on piecewise-constant potentials with
//! local-symmetry analysis.
//!
//! The engine solves `A'' + (energy - V(x)) A = 0` in units where `2m/hbar^2 = 1`,
//! computes the nonlocal invariants `Q`, `Q~` on locally symmetric domains, maps
//! fields between symmetry-related domains, rebuilds transfer matrices from the
//! invariants and evaluates the decomposition sum rule used to classify perfect
//! transmission resonances.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*F64` and `*F32`
//! aliases below name the concrete instantiations.

pub mod error;
pub mod invariants;
pub mod io;
pub mod potential;
pub mod scalar;
pub mod solver;
pub mod sumrule;
pub mod tminv;

pub use error::{Error, Result};
pub use invariants::{
    compute_invariants, domain_magnitude_constraint, map_derivative, map_field, map_magnitude,
    map_phase, pointwise_q, InvariantSet,
};
pub use potential::{
    check_symmetry, detect_symmetric_domains, enumerate_cls_decompositions, Decomposition,
    Decompositions, Domain, LocalSymmetry, Parity, PotentialSpec, Segment, SymmetryKind,
    SymmetryTransform,
};
pub use scalar::{wrap_full_turn, wrap_half_turn, Cx, Real};
pub use solver::{
    amplitudes_from_tm, bloch_analysis, monodromy, ode_oracle, segment_tm, solve_scattering,
    total_tm, BlochAnalysis, FieldSolution, Incidence, Propagator, TransferMatrix,
};
pub use sumrule::{
    boundary_l, classify_ptr, closed_form_l, compute_l, compute_vm, l_magnitude_squared,
    ptr_scan, refine_maximum, sum_rule_at, PtrClass, PtrClassification, PtrRecord,
    SumRuleResult,
};
pub use tminv::{
    global_invariants, tm_from_invariants, unit_tm_via_invariants, z_phase_check,
    GlobalInvariants,
};

pub type PotentialSpecF64 = PotentialSpec<f64>;
pub type DomainF64 = Domain<f64>;
pub type SymmetryTransformF64 = SymmetryTransform<f64>;
pub type DecompositionF64 = Decomposition<f64>;
pub type FieldSolutionF64 = FieldSolution<f64>;
pub type TransferMatrixF64 = TransferMatrix<f64>;
pub type InvariantSetF64 = InvariantSet<f64>;
pub type SumRuleResultF64 = SumRuleResult<f64>;
pub type PtrRecordF64 = PtrRecord<f64>;

pub type PotentialSpecF32 = PotentialSpec<f32>;
pub type DomainF32 = Domain<f32>;
pub type SymmetryTransformF32 = SymmetryTransform<f32>;
pub type DecompositionF32 = Decomposition<f32>;
pub type FieldSolutionF32 = FieldSolution<f32>;
pub type TransferMatrixF32 = TransferMatrix<f32>;
pub type InvariantSetF32 = InvariantSet<f32>;
pub type SumRuleResultF32 = SumRuleResult<f32>;
pub type PtrRecordF32 = PtrRecord<f32>;
