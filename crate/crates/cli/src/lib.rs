//! File formats, instance generators and the complexity harness behind the
//! `atsp` binary.

pub mod bench;
pub mod compare;
pub mod generate;
pub mod input;
pub mod metrics;
pub mod svg;
