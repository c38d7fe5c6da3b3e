//! Words equipped with two non-crossing matchings and the machinery built on
//! top of them: wave words, an inductive grammar, automata with hierarchical
//! states on both matchings, determinization over wave words, decision
//! procedures, bounded-width tree decompositions, and the encoding of
//! accepting runs into triple intersections of Dyck-like languages.
//!
//! The crate is `no_std` (it only needs `alloc`); all IO, file formats and the
//! command-line front end live in the companion `wavelang` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod automaton;
pub mod decide;
pub mod determinize;
pub mod grammar;
pub mod kind;
pub mod lil;
pub mod matching;
pub mod treedec;
pub mod typed;
pub mod wave;
pub mod word;

pub use automaton::{Automaton2NW, Run};
pub use determinize::DetAutomaton;
pub use grammar::{Derivation, Enumerator};
pub use kind::{Kind, Status};
pub use matching::{Matching, MatchingError, MatchingId};
pub use treedec::TreeDecomposition;
pub use typed::TypedLetter;
pub use wave::{Arch, Wave, WaveCertificate};
pub use word::NestedWord2;
