//! The exhibit environments and a seeded random-instance generator.

mod paraglider;
mod random;
mod st_petersburg;
mod tmaze;

pub use paraglider::build_paraglider;
pub use random::{random_instance, random_simplex, InstanceSpec, POSITIVITY_FLOOR};
pub use st_petersburg::{build_st_petersburg, st_petersburg_pre_tail_value, MAX_ST_PETERSBURG_TERMS};
pub use tmaze::{build_tmaze, TMaze, TMazeVariant};
