//! Two-term complexes of Γ-lattices: hypercohomology, the two long exact
//! sequences, restriction kernels and finite dual models.

pub mod cochain;
pub mod dual;
pub mod lattice;

pub use cochain::{check_sequence, CochainComplex, SequenceNode, SequenceReport};
pub use dual::{dual_model_cohomology, order_comparison, stabilization_audit, DualCohomology, DualModel, OrderComparison, StabilizationAudit};
pub use lattice::{hypercohomology, ker1_locus, les_check, HyperModel, LatticeComplex, LesKind, ModularComplex, MAX_HYPER_DEGREE};
