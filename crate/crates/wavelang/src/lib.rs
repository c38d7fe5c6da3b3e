//! IO companion to `wavewords-core`: text formats for 2-nested words and
//! automata, DOT and JSON emitters, and the fixture generators used by the
//! command-line tool and the test suites.

pub mod dot;
pub mod fixtures;
pub mod format;
pub mod jsonout;

pub use format::{
    emit_automaton, emit_paired, emit_word, parse_automaton, parse_paired, parse_word,
    ParseError,
};
