//! Soundness analyses for reset workflow nets.
//!
//! The crate is organised bottom-up: [`net`] defines reset Petri nets and
//! their firing semantics, [`closed`] the antichain and ideal
//! representations of upward- and downward-closed marking sets, [`cover`]
//! backward coverability and the Karp-Miller tree, [`reach`] exact
//! reachability for plain Petri nets with mixed constraint targets,
//! [`structure`] redundancy and the reset-free skeleton, and [`soundness`]
//! the soundness properties themselves, ending in the five-property
//! pipeline. [`minsky`] hosts the counter-machine reduction used to
//! generate hard instances, plus the builtin example nets.

pub mod budget;
pub mod closed;
pub mod cover;
pub mod diophantine;
pub mod io;
pub mod minsky;
pub mod net;
pub mod reach;
pub mod soundness;
pub mod structure;
