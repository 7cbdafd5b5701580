//! Presymplectic and log-canonical Poisson structures, the submersions onto
//! their leaf spaces, and the reduced maps they induce.

mod invariance;
mod reduction;
mod structures;

pub use invariance::{
    casimirs_vanish, check_isotropy, check_poisson_map, check_presymplectic_invariance, find_invariant_poisson,
    poisson_bracket, upper_vector, CheckReport, PoissonSearch,
};
pub use reduction::{
    build_flag, chained_reduction, check_subfoliation, derive_reduced_map, exponent_rows, rewrite_in_fiber_coordinates,
    Flag, ReducedSystem, ReducedSystemRepr, SubmersionRepr,
};
pub use structures::{casimir_submersion, null_submersion, PoissonStructure, PresymplecticForm, Submersion, SubmersionKind};
