//! Contractions of labeled point sets and the closed-form bounds that
//! decide when a uniform contraction cannot shrink the intrinsic volumes
//! of an intersection of congruent balls.

mod bounds;
mod predicates;
mod sampling;
mod witness;

pub use bounds::{
    bound_chain, classify_instance, equivalent_radius_mu, jung_radius, kappa_ratio_check, modified_sausage_bound,
    naive_outer_radius, refined_outer_radius, sausage_volume_lower_bound, threshold_n, BoundCase, BoundReport,
    KappaRatio, Threshold, ThresholdMode, SAUSAGE_MIN_DIM,
};
pub use predicates::{is_contraction, is_uniform_contraction, ContractionInstance};
pub use sampling::{sample_clustered, sample_separated};
pub use witness::{circumcenter_reach, jung_witness, members_within, WitnessReport};
