pub mod cohomology;
pub mod echelon;
pub mod error;
pub mod exterior;
pub mod liealg;
pub mod linalg;
pub mod scalar;
pub mod acs;
pub mod frames;
pub mod invariant;
pub mod ranklab;
pub mod cli;
