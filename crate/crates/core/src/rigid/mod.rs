//! Levels, Ψ, transitions and the Ȳ-side constructions of the rigid theory.

pub mod level;
pub mod psi;
pub mod transition;

pub use level::{Level, LevelMap, PlaceSpec, Tower, TowerSpec};
pub use psi::{psi_compatible, psi_map, EquivariantHoms, PsiMap, PsiReport};
pub use transition::{
    companion_transition, level_sequence, level_transition, localization_square_commutes, localize_level, CompanionTransition,
    LevelSequence,
};
pub mod ybar;

pub use ybar::{
    component_group, shriek_between, shriek_localization_square, shriek_map, shriek_section_audit, sigma_exactness,
    tower_stabilization, ybar_group, ComponentGroup, IsogenyPair, SigmaReport, Stabilization, YbarCertificate, YbarGroup,
};
