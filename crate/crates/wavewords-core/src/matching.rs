//! Non-crossing matching relations over word positions.
//!
//! Positions are 1-indexed; 0 is reserved as a sentinel by the surface
//! functions in [`crate::word`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

/// Selects one of the two matchings of a 2-nested word. `M1` is drawn above
/// the word, `M2` below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatchingId {
    M1,
    M2,
}

impl fmt::Display for MatchingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingId::M1 => write!(f, "m1"),
            MatchingId::M2 => write!(f, "m2"),
        }
    }
}

/// Role of a position with respect to one matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Call,
    Return,
    Internal,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Call => write!(f, "c"),
            Status::Return => write!(f, "r"),
            Status::Internal => write!(f, "int"),
        }
    }
}

/// A non-crossing partial pairing of the positions `1..=len`.
///
/// Stores the sorted pair list plus both direction maps so that call/return
/// lookups are cheap.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    len: usize,
    pairs: Vec<(usize, usize)>,
    ret_of: BTreeMap<usize, usize>,
    call_of: BTreeMap<usize, usize>,
}

/// Why a pair set is not a matching. Each variant names the violated
/// condition together with the offending pair(s).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingError {
    OutOfRange { pair: (usize, usize), len: usize },
    NotOrdered { pair: (usize, usize) },
    Reused { position: usize, pairs: ((usize, usize), (usize, usize)) },
    Crossing { pairs: ((usize, usize), (usize, usize)) },
}

impl fmt::Display for MatchingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingError::OutOfRange { pair, len } => {
                write!(f, "pair ({},{}) out of range 1..={}", pair.0, pair.1, len)
            }
            MatchingError::NotOrdered { pair } => {
                write!(f, "pair ({},{}) is not increasing", pair.0, pair.1)
            }
            MatchingError::Reused { position, pairs } => write!(
                f,
                "position {} used by both ({},{}) and ({},{})",
                position, pairs.0 .0, pairs.0 .1, pairs.1 .0, pairs.1 .1
            ),
            MatchingError::Crossing { pairs } => write!(
                f,
                "pairs ({},{}) and ({},{}) cross",
                pairs.0 .0, pairs.0 .1, pairs.1 .0, pairs.1 .1
            ),
        }
    }
}

impl Matching {
    /// Validates the three matching conditions (increasing pairs, injectivity,
    /// non-crossing) and builds the matching.
    pub fn new(
        len: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, MatchingError> {
        let mut sorted: Vec<(usize, usize)> = pairs.into_iter().collect();
        sorted.sort_unstable();
        sorted.dedup();
        let mut owner: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for &(i, j) in &sorted {
            if i == 0 || j == 0 || i > len || j > len {
                return Err(MatchingError::OutOfRange { pair: (i, j), len });
            }
            if i >= j {
                return Err(MatchingError::NotOrdered { pair: (i, j) });
            }
            for p in [i, j] {
                if let Some(&other) = owner.get(&p) {
                    return Err(MatchingError::Reused { position: p, pairs: (other, (i, j)) });
                }
            }
            owner.insert(i, (i, j));
            owner.insert(j, (i, j));
        }
        for (a, &(i, j)) in sorted.iter().enumerate() {
            for &(k, l) in &sorted[a + 1..] {
                if k >= j {
                    break;
                }
                // here i < k < j; non-crossing demands l < j
                if l > j {
                    return Err(MatchingError::Crossing { pairs: ((i, j), (k, l)) });
                }
            }
        }
        let ret_of = sorted.iter().copied().collect();
        let call_of = sorted.iter().map(|&(i, j)| (j, i)).collect();
        Ok(Matching { len, pairs: sorted, ret_of, call_of })
    }

    /// The empty matching of a given length.
    pub fn empty(len: usize) -> Self {
        Matching { len, pairs: Vec::new(), ret_of: BTreeMap::new(), call_of: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Arches sorted by call position.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn status(&self, i: usize) -> Status {
        if self.ret_of.contains_key(&i) {
            Status::Call
        } else if self.call_of.contains_key(&i) {
            Status::Return
        } else {
            Status::Internal
        }
    }

    /// `M(i)`: the return matched to call `i`.
    pub fn ret_of(&self, i: usize) -> Option<usize> {
        self.ret_of.get(&i).copied()
    }

    /// `M⁻¹(j)`: the call matched to return `j`.
    pub fn call_of(&self, j: usize) -> Option<usize> {
        self.call_of.get(&j).copied()
    }

    /// True when no arch leaves the set: calls in `set` return in `set` and
    /// returns in `set` were called in `set`.
    pub fn pending_free(&self, set: &BTreeSet<usize>) -> bool {
        set.iter().all(|&i| match self.status(i) {
            Status::Call => set.contains(&self.ret_of[&i]),
            Status::Return => set.contains(&self.call_of[&i]),
            Status::Internal => true,
        })
    }

    /// Restriction to a position set, renumbered to `1..=set.len()` in order.
    /// Fails with the pending arch if some arch has exactly one endpoint in
    /// the set.
    pub fn restrict(&self, set: &BTreeSet<usize>) -> Result<Matching, (usize, usize)> {
        let index: BTreeMap<usize, usize> =
            set.iter().enumerate().map(|(k, &p)| (p, k + 1)).collect();
        let mut pairs = Vec::new();
        for &(i, j) in &self.pairs {
            match (index.get(&i), index.get(&j)) {
                (Some(&a), Some(&b)) => pairs.push((a, b)),
                (None, None) => {}
                _ => return Err((i, j)),
            }
        }
        Ok(Matching::new(set.len(), pairs).expect("restriction of a matching is a matching"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn fig2_left_nesting_is_valid() {
        let m = Matching::new(7, vec![(1, 3), (4, 7), (5, 6)]).unwrap();
        assert_eq!(m.status(1), Status::Call);
        assert_eq!(m.status(2), Status::Internal);
        assert_eq!(m.ret_of(4), Some(7));
        assert_eq!(m.call_of(6), Some(5));
    }

    #[test]
    fn empty_matching_of_length_zero() {
        assert!(Matching::new(0, vec![]).is_ok());
    }

    #[test]
    fn minimal_crossing_is_reported() {
        let err = Matching::new(5, vec![(1, 4), (2, 5)]).unwrap_err();
        assert_eq!(err, MatchingError::Crossing { pairs: ((1, 4), (2, 5)) });
    }

    #[test]
    fn reuse_and_range_errors() {
        assert!(matches!(
            Matching::new(4, vec![(1, 2), (2, 3)]).unwrap_err(),
            MatchingError::Reused { position: 2, .. }
        ));
        assert!(matches!(
            Matching::new(3, vec![(1, 4)]).unwrap_err(),
            MatchingError::OutOfRange { .. }
        ));
        assert!(matches!(
            Matching::new(3, vec![(3, 2)]).unwrap_err(),
            MatchingError::NotOrdered { .. }
        ));
    }

    #[test]
    fn restriction_shifts_positions() {
        let m = Matching::new(8, vec![(2, 3), (6, 7)]).unwrap();
        let set: BTreeSet<usize> = (2..=7).collect();
        let r = m.restrict(&set).unwrap();
        assert_eq!(r.pairs(), &[(1, 2), (5, 6)]);
        let m = Matching::new(8, vec![(1, 4)]).unwrap();
        assert_eq!(m.restrict(&set), Err((1, 4)));
    }
}
