//! The nine ways a position can combine call/return/internal status across
//! the two matchings. The same type keys the nine transition families of an
//! automaton.

use core::fmt;

pub use crate::matching::Status;

/// Combined status of a position: `upper` w.r.t. M1, `lower` w.r.t. M2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Kind {
    pub upper: Status,
    pub lower: Status,
}

impl Kind {
    pub const fn new(upper: Status, lower: Status) -> Self {
        Kind { upper, lower }
    }

    pub const CC: Kind = Kind::new(Status::Call, Status::Call);
    pub const CR: Kind = Kind::new(Status::Call, Status::Return);
    pub const RC: Kind = Kind::new(Status::Return, Status::Call);
    pub const RR: Kind = Kind::new(Status::Return, Status::Return);
    pub const CI: Kind = Kind::new(Status::Call, Status::Internal);
    pub const IC: Kind = Kind::new(Status::Internal, Status::Call);
    pub const RI: Kind = Kind::new(Status::Return, Status::Internal);
    pub const IR: Kind = Kind::new(Status::Internal, Status::Return);
    pub const II: Kind = Kind::new(Status::Internal, Status::Internal);

    pub const ALL: [Kind; 9] = [
        Kind::CC,
        Kind::CR,
        Kind::RC,
        Kind::RR,
        Kind::CI,
        Kind::IC,
        Kind::RI,
        Kind::IR,
        Kind::II,
    ];

    /// Number of hierarchical states a transition of this kind receives
    /// (one per return status).
    pub fn in_arity(&self) -> usize {
        (self.upper == Status::Return) as usize + (self.lower == Status::Return) as usize
    }

    /// Number of hierarchical states a transition of this kind emits
    /// (one per call status).
    pub fn out_arity(&self) -> usize {
        (self.upper == Status::Call) as usize + (self.lower == Status::Call) as usize
    }

    /// Short code used by the text format: `cc`, `cr`, ..., `ii`.
    pub fn code(&self) -> &'static str {
        match (self.upper, self.lower) {
            (Status::Call, Status::Call) => "cc",
            (Status::Call, Status::Return) => "cr",
            (Status::Return, Status::Call) => "rc",
            (Status::Return, Status::Return) => "rr",
            (Status::Call, Status::Internal) => "ci",
            (Status::Internal, Status::Call) => "ic",
            (Status::Return, Status::Internal) => "ri",
            (Status::Internal, Status::Return) => "ir",
            (Status::Internal, Status::Internal) => "ii",
        }
    }

    pub fn from_code(code: &str) -> Option<Kind> {
        Kind::ALL.iter().copied().find(|k| k.code() == code)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}
