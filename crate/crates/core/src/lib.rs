//! Toolkit for auditing gender bias in Turkish/English machine translation:
//! probe corpora, translation backends, gender-signal detection, statistics
//! and report rendering.

pub mod analysis;
pub mod corpus;
pub mod detect;
pub mod exec;
pub mod probegen;
pub mod report;
pub mod sample;
pub mod stats;
pub mod translate;
pub mod util;
