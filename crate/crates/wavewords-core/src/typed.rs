//! The visibly typed view of a wave word: the alphabet duplicated into five
//! copies, with both matchings recoverable from the types by stack pairing.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::kind::Kind;
use crate::matching::{Matching, MatchingId};
use crate::word::NestedWord2;

/// The five position kinds that can occur in a wave word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WaveKind {
    CC,
    RC,
    CR,
    RR,
    Internal,
}

impl WaveKind {
    pub fn from_kind(kind: Kind) -> Option<WaveKind> {
        match kind {
            Kind::CC => Some(WaveKind::CC),
            Kind::RC => Some(WaveKind::RC),
            Kind::CR => Some(WaveKind::CR),
            Kind::RR => Some(WaveKind::RR),
            Kind::II => Some(WaveKind::Internal),
            _ => None,
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            WaveKind::CC => Kind::CC,
            WaveKind::RC => Kind::RC,
            WaveKind::CR => Kind::CR,
            WaveKind::RR => Kind::RR,
            WaveKind::Internal => Kind::II,
        }
    }
}

/// A letter of the five-copy alphabet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypedLetter {
    pub base: String,
    pub kind: WaveKind,
}

impl fmt::Display for TypedLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.kind.kind();
        write!(f, "{}^{}_{}", self.base, k.upper, k.lower)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypedError {
    /// A position combines a matched and an internal status, so it has no
    /// letter in the five-copy alphabet.
    MixedKind { position: usize, kind: Kind },
    /// Stack pairing of the annotations failed for one matching.
    UnbalancedTyping { matching: MatchingId, position: usize },
}

impl fmt::Display for TypedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypedError::MixedKind { position, kind } => {
                write!(f, "position {} has kind {} outside the five copies", position, kind)
            }
            TypedError::UnbalancedTyping { matching, position } => {
                write!(f, "unbalanced {} annotation at position {}", matching, position)
            }
        }
    }
}

impl NestedWord2 {
    /// The typed projection of the word; defined exactly when every position
    /// kind is one of the five copies, which holds on every wave word.
    pub fn to_typed(&self) -> Result<Vec<TypedLetter>, TypedError> {
        (1..=self.len())
            .map(|i| {
                let kind = self.kind_at(i).expect("position in range");
                let kind = WaveKind::from_kind(kind)
                    .ok_or(TypedError::MixedKind { position: i, kind })?;
                Ok(TypedLetter { base: self.letter(i).into(), kind })
            })
            .collect()
    }
}

/// Rebuilds the 2-nested word from its typed view by pairing calls and
/// returns of each matching with a stack.
pub fn from_typed(letters: &[TypedLetter]) -> Result<NestedWord2, TypedError> {
    let n = letters.len();
    let mut pairs = [Vec::new(), Vec::new()];
    let mut stacks: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (idx, tl) in letters.iter().enumerate() {
        let i = idx + 1;
        let kind = tl.kind.kind();
        for (slot, matching, status) in [
            (0, MatchingId::M1, kind.upper),
            (1, MatchingId::M2, kind.lower),
        ] {
            match status {
                crate::kind::Status::Call => stacks[slot].push(i),
                crate::kind::Status::Return => {
                    let call = stacks[slot]
                        .pop()
                        .ok_or(TypedError::UnbalancedTyping { matching, position: i })?;
                    pairs[slot].push((call, i));
                }
                crate::kind::Status::Internal => {}
            }
        }
    }
    for (slot, matching) in [(0, MatchingId::M1), (1, MatchingId::M2)] {
        if let Some(&call) = stacks[slot].last() {
            return Err(TypedError::UnbalancedTyping { matching, position: call });
        }
    }
    let [p1, p2] = pairs;
    let m1 = Matching::new(n, p1).expect("stack pairing is non-crossing");
    let m2 = Matching::new(n, p2).expect("stack pairing is non-crossing");
    let word = letters.iter().map(|tl| tl.base.clone()).collect();
    Ok(NestedWord2::new(word, m1, m2).expect("lengths agree"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::fixtures::*;
    use alloc::string::ToString;

    #[test]
    fn fig2_right_types() {
        let w = fig2_right();
        let typed = w.to_typed().unwrap();
        let rendered: Vec<String> = typed.iter().map(|t| t.to_string()).collect();
        assert_eq!(
            rendered,
            ["a^c_c", "b^int_int", "a^r_c", "c^c_r", "b^int_int", "a^int_int", "b^r_r"]
        );
    }

    #[test]
    fn empty_word_types_to_empty() {
        let w = NestedWord2::from_parts("", &[], &[]);
        assert!(w.to_typed().unwrap().is_empty());
    }

    #[test]
    fn round_trip_on_omega2() {
        let w = omega2();
        assert_eq!(from_typed(&w.to_typed().unwrap()).unwrap(), w);
    }

    #[test]
    fn mixed_kind_is_rejected() {
        // position 1 is call-internal
        let w = NestedWord2::from_parts("ab", &[(1, 2)], &[]);
        assert!(matches!(
            w.to_typed().unwrap_err(),
            TypedError::MixedKind { position: 1, .. }
        ));
    }

    #[test]
    fn unbalanced_typing_is_rejected() {
        let letters = [
            TypedLetter { base: "a".into(), kind: WaveKind::RR },
        ];
        assert!(matches!(
            from_typed(&letters).unwrap_err(),
            TypedError::UnbalancedTyping { matching: MatchingId::M1, position: 1 }
        ));
    }
}
