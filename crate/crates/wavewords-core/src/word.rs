//! 2-nested words: a letter sequence plus two matchings of the same length.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::kind::{Kind, Status};
use crate::matching::{Matching, MatchingId};

/// A word over some alphabet together with two matchings of its positions.
/// Immutable after construction; positions are 1-indexed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NestedWord2 {
    letters: Vec<String>,
    m1: Matching,
    m2: Matching,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordError {
    LengthMismatch { letters: usize, m1: usize, m2: usize },
    OutOfRange { position: usize, len: usize },
    /// The requested position set has a pending arch.
    NotWpa { matching: MatchingId, pair: (usize, usize) },
}

impl fmt::Display for WordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordError::LengthMismatch { letters, m1, m2 } => write!(
                f,
                "matching lengths ({}, {}) do not fit a {}-letter word",
                m1, m2, letters
            ),
            WordError::OutOfRange { position, len } => {
                write!(f, "position {} out of range 1..={}", position, len)
            }
            WordError::NotWpa { matching, pair } => {
                write!(f, "{} arch ({},{}) is pending", matching, pair.0, pair.1)
            }
        }
    }
}

impl NestedWord2 {
    pub fn new(
        letters: Vec<String>,
        m1: Matching,
        m2: Matching,
    ) -> Result<Self, WordError> {
        if m1.len() != letters.len() || m2.len() != letters.len() {
            return Err(WordError::LengthMismatch {
                letters: letters.len(),
                m1: m1.len(),
                m2: m2.len(),
            });
        }
        Ok(NestedWord2 { letters, m1, m2 })
    }

    /// Convenience constructor from single-character letters and pair lists;
    /// panics on invalid input, so only suitable for fixtures and tests.
    pub fn from_parts(word: &str, m1: &[(usize, usize)], m2: &[(usize, usize)]) -> Self {
        let letters: Vec<String> = word.chars().map(|c| c.to_string()).collect();
        let n = letters.len();
        NestedWord2::new(
            letters,
            Matching::new(n, m1.iter().copied()).expect("valid m1"),
            Matching::new(n, m2.iter().copied()).expect("valid m2"),
        )
        .expect("consistent lengths")
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    /// Letter at 1-indexed position `i`.
    pub fn letter(&self, i: usize) -> &str {
        &self.letters[i - 1]
    }

    pub fn matching(&self, id: MatchingId) -> &Matching {
        match id {
            MatchingId::M1 => &self.m1,
            MatchingId::M2 => &self.m2,
        }
    }

    pub fn m1(&self) -> &Matching {
        &self.m1
    }

    pub fn m2(&self) -> &Matching {
        &self.m2
    }

    /// Combined call/return/internal status of position `i`.
    pub fn kind_at(&self, i: usize) -> Result<Kind, WordError> {
        if i == 0 || i > self.len() {
            return Err(WordError::OutOfRange { position: i, len: self.len() });
        }
        Ok(Kind::new(self.m1.status(i), self.m2.status(i)))
    }

    /// True when no arch of either matching leaves `set`. Works for arbitrary
    /// position subsets, not just intervals.
    pub fn is_wpa(&self, set: &BTreeSet<usize>) -> bool {
        self.m1.pending_free(set) && self.m2.pending_free(set)
    }

    pub fn is_wpa_interval(&self, lo: usize, hi: usize) -> bool {
        self.is_wpa(&(lo..=hi).collect())
    }

    /// Restriction to a without-pending-arch position set, with letters kept
    /// in order and matchings shifted to `1..=set.len()`.
    pub fn restrict(&self, set: &BTreeSet<usize>) -> Result<NestedWord2, WordError> {
        if let Some(&p) = set.iter().find(|&&p| p == 0 || p > self.len()) {
            return Err(WordError::OutOfRange { position: p, len: self.len() });
        }
        let m1 = self
            .m1
            .restrict(set)
            .map_err(|pair| WordError::NotWpa { matching: MatchingId::M1, pair })?;
        let m2 = self
            .m2
            .restrict(set)
            .map_err(|pair| WordError::NotWpa { matching: MatchingId::M2, pair })?;
        let letters = set.iter().map(|&p| self.letters[p - 1].clone()).collect();
        NestedWord2::new(letters, m1, m2)
    }

    pub fn restrict_interval(&self, lo: usize, hi: usize) -> Result<NestedWord2, WordError> {
        self.restrict(&(lo..=hi).collect())
    }

    /// The surface function `s_M`: the call position of the arch of the
    /// selected matching covering `k`, or 0 when `k` lies on no arch.
    ///
    /// Satisfies `s(0) = 0`, `s(k) = s(k-1)` on internals, `s(k) = k` on
    /// calls and `s(k) = s(i-1)` on the return of `(i, k)`.
    pub fn surface(&self, which: MatchingId, k: usize) -> usize {
        debug_assert!(k <= self.len());
        let m = self.matching(which);
        let mut s = 0;
        let mut stack: Vec<usize> = vec![];
        for i in 1..=k {
            match m.status(i) {
                Status::Internal => {}
                Status::Call => {
                    stack.push(s);
                    s = i;
                }
                Status::Return => {
                    s = stack.pop().expect("return follows its call");
                }
            }
        }
        s
    }

    /// The surface call-call function `s^c_c`: the call-call position of the
    /// wave whose M1 arch covers `k`, or 0. Only meaningful on wave words;
    /// errs when the covering arch belongs to no wave.
    pub fn surface_cc(&self, k: usize) -> Result<usize, WordError> {
        let i = self.surface(MatchingId::M1, k);
        if i == 0 {
            return Ok(0);
        }
        match self.kind_at(i)? {
            Kind::CC => Ok(i),
            Kind::CR => {
                // second top arch: hop back over the bottom and first top arch
                let i2 = self.m2.call_of(i).ok_or(WordError::NotWpa {
                    matching: MatchingId::M2,
                    pair: (i, i),
                })?;
                let i1 = self.m1.call_of(i2).ok_or(WordError::NotWpa {
                    matching: MatchingId::M1,
                    pair: (i2, i2),
                })?;
                Ok(i1)
            }
            _ => Err(WordError::NotWpa { matching: MatchingId::M1, pair: (i, i) }),
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Right-hand 2-nested word of the figure with three words: a wave word.
    pub fn fig2_right() -> NestedWord2 {
        NestedWord2::from_parts("abacbab", &[(1, 3), (4, 7)], &[(1, 7), (3, 4)])
    }

    /// Middle 2-nested word of the same figure: not a wave word.
    pub fn fig2_middle() -> NestedWord2 {
        NestedWord2::from_parts("abacbab", &[(1, 3), (4, 7), (5, 6)], &[(2, 7), (3, 4)])
    }

    /// The run example word: a²b²c²d² with nested top and bottom matchings.
    pub fn omega2() -> NestedWord2 {
        NestedWord2::from_parts(
            "aabbccdd",
            &[(1, 4), (2, 3), (5, 8), (6, 7)],
            &[(1, 8), (2, 7), (3, 6), (4, 5)],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn kinds_on_fig2_right() {
        let w = fig2_right();
        assert_eq!(w.kind_at(1).unwrap(), Kind::CC);
        assert_eq!(w.kind_at(2).unwrap(), Kind::II);
        assert_eq!(w.kind_at(3).unwrap(), Kind::RC);
        assert_eq!(w.kind_at(4).unwrap(), Kind::CR);
        assert_eq!(w.kind_at(7).unwrap(), Kind::RR);
        assert!(w.kind_at(0).is_err());
        assert!(w.kind_at(8).is_err());
    }

    #[test]
    fn kinds_on_empty_matchings() {
        let w = NestedWord2::from_parts("xyz", &[], &[]);
        for i in 1..=3 {
            assert_eq!(w.kind_at(i).unwrap(), Kind::II);
        }
    }

    #[test]
    fn wpa_checks() {
        let w = fig2_right();
        assert!(w.is_wpa_interval(1, 7));
        // arch (1,7) of m2 pends out of the prefix
        assert!(!w.is_wpa(&[1, 2, 3].into_iter().collect()));
        let o = omega2();
        // the four positions of the outer wave form a wpa set
        assert!(o.is_wpa(&[1, 4, 5, 8].into_iter().collect()));
        assert!(o.is_wpa(&[2, 3, 6, 7].into_iter().collect()));
        assert!(!o.is_wpa(&(2..=7).collect()));
    }

    #[test]
    fn restrict_identity_and_empty() {
        let w = fig2_right();
        assert_eq!(w.restrict_interval(1, 7).unwrap(), w);
        let e = w.restrict(&BTreeSet::new()).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn restrict_rejects_pending() {
        let o = omega2();
        let err = o.restrict_interval(2, 7).unwrap_err();
        assert_eq!(err, WordError::NotWpa { matching: MatchingId::M1, pair: (1, 4) });
    }

    #[test]
    fn restrict_inner_wave() {
        // dropping the outer wave of omega2 keeps the inner one, shifted
        let o = omega2();
        let r = o.restrict(&[2, 3, 6, 7].into_iter().collect()).unwrap();
        assert_eq!(r.letters().join(""), "abcd");
        assert_eq!(r.m1().pairs(), &[(1, 2), (3, 4)]);
        assert_eq!(r.m2().pairs(), &[(1, 4), (2, 3)]);
    }

    #[test]
    fn surface_recurrences_on_omega2() {
        let o = omega2();
        assert_eq!(o.surface(MatchingId::M1, 0), 0);
        assert_eq!(o.surface(MatchingId::M1, 2), 2); // a call is its own surface
        assert_eq!(o.surface(MatchingId::M1, 3), 1); // return of (2,3) uncovers (1,4)
        assert_eq!(o.surface(MatchingId::M1, 4), 0); // return of (1,4)
        assert_eq!(o.surface(MatchingId::M2, 7), 1);
        assert_eq!(o.surface(MatchingId::M2, 8), 0);
    }

    #[test]
    fn surface_cc_on_omega2() {
        let o = omega2();
        assert_eq!(o.surface_cc(0).unwrap(), 0);
        assert_eq!(o.surface_cc(1).unwrap(), 1); // call-call is its own surface
        // position 6 is the call-return of the inner wave (2,3,6,7)
        assert_eq!(o.surface_cc(6).unwrap(), 2);
        // position 5 is the call-return of the outer wave (1,4,5,8)
        assert_eq!(o.surface_cc(5).unwrap(), 1);
    }
}
