pub mod complex;
pub mod exact;
pub mod matrix;
pub mod presentation;
pub mod snf;
pub mod sparse;

pub use complex::{homology, iso_check, AbGroup, CochainComplex, GradedAbGroup};
pub use exact::{is_exact, kernel_basis, same_span, solve, ExactnessCertificate, GroupHom, Presented, Solver};
pub use matrix::IntMatrix;
pub use presentation::{
    check_pointwise_ses, induced_and_connecting, induced_map, induced_maps, ChainMap, HomologyPresentation,
    LesTerm, LongExactSequence,
};
pub use snf::{smith_normal_form, SmithForm};
