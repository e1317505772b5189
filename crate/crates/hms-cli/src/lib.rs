//! Document schemas shared between the `hms` binary and its tests.

pub mod doc;
