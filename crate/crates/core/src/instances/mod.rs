//! Worked examples, seeded generators and the text format.

pub mod fixtures;
pub mod format;
pub mod random;
