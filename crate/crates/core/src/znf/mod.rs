//! Exact integer linear algebra and finitely generated abelian groups.

pub mod group;
pub mod hom;
pub mod int;
pub mod lattice;
pub mod matrix;
pub mod morphism;
pub mod snf;

pub use group::{cokernel_group, describe_invariants, AbGroup};
pub use hom::{dual_group, hom_group, DualGroup, HomGroup, QZ};
pub use int::Int;
pub use lattice::{integer_kernel, kernel_lattice, solve_in_span, Lattice};
pub use matrix::IntMatrix;
pub use morphism::{exactness_defect, is_exact_at, morphism_kernel_image, KernelImage, Morphism};
pub use snf::{smith_normal_form, smith_normal_form_with, Snf, SnfStrategy};
