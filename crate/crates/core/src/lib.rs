pub mod lattice;
pub mod fan;
pub mod support;
pub mod cohomology;
pub mod chow;
pub mod sections;
