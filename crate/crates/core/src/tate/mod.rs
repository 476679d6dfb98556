//! Tate cohomology of finite groups in degrees −1 through 3.

pub mod cech;
pub mod cochains;
pub mod cohomology;
pub mod maps;

pub use cech::CechDictionary;
pub use cochains::{Coefficients, Cochains};
pub use cohomology::{tate_cohomology, CohomClass, TateGroup};
pub use maps::{
    connecting_map, inflation, long_exact_sequence_check, map_on_cohomology, restriction, shapiro_decompose,
    tate_cohomology_full, CohomMap, ExactnessNode, ShapiroIso, ShortExact,
};
