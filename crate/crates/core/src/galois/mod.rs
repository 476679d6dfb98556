//! Finite groups, Γ-sets of places and Γ-modules.

pub mod group;
pub mod gset;
pub mod module;
pub mod places;

pub use group::{FiniteGroup, Subgroup};
pub use gset::GammaSet;
pub use module::{augmentation_kernel, induced_module, norm_and_augmentation_ideal, GammaModule, InducedModule, ModuleMap, NormData};
pub use places::{
    check_place_conditions, double_augmentation_kernel, restrict_to_decomposition, sum_zero_module, ArithmeticFlags,
    ConditionReport, DecompositionData, DoubleAugmentation, LevelLabel, PlaceSystem,
};
