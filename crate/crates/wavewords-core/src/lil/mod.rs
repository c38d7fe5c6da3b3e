//! The bridge to linear indexed languages: paired alphabets, Dyck words, the
//! index morphism `g`, the letter projection `f`, and the encoding of
//! accepting runs of nice automata into the triple intersection of a regular
//! language, the Dyck words and the `g`-preimage of the Dyck words.

mod codec;

pub use codec::{decode, encode, project_words, DEFAULT_PROJECT_BOUND};

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::matching::Matching;

/// A symbol of the working alphabet: an indexed hierarchical symbol `(p, i)`,
/// a linear state, or a plain letter. States and letters form the auxiliary
/// part that the index morphism erases.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LilSym {
    /// `(p, i)` with `i` in `{1, 2}`.
    Idx(String, u8),
    State(String),
    Letter(String),
}

/// A letter or its barred copy.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LilLetter {
    pub sym: LilSym,
    pub bar: bool,
}

impl LilLetter {
    pub fn plain(sym: LilSym) -> Self {
        LilLetter { sym, bar: false }
    }

    pub fn barred(sym: LilSym) -> Self {
        LilLetter { sym, bar: true }
    }

    /// The involution swapping a letter with its barred copy.
    pub fn bar(&self) -> Self {
        LilLetter { sym: self.sym.clone(), bar: !self.bar }
    }
}

impl fmt::Display for LilLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bar {
            write!(f, "~")?;
        }
        match &self.sym {
            LilSym::Idx(p, i) => write!(f, "{}.{}", p, i),
            LilSym::State(q) => write!(f, "{}", q),
            LilSym::Letter(a) => write!(f, "{}", a),
        }
    }
}

/// Mirror image: reverse the word and bar every letter.
pub fn bar_word(u: &[LilLetter]) -> Vec<LilLetter> {
    u.iter().rev().map(|l| l.bar()).collect()
}

/// Stack check for Dyck membership over the paired alphabet.
pub fn is_dyck(u: &[LilLetter]) -> bool {
    dyck_matching(u).is_some()
}

/// The matching induced by a Dyck word, pairing each opening letter with the
/// closing occurrence of its barred copy.
pub fn dyck_matching(u: &[LilLetter]) -> Option<Matching> {
    let mut stack: Vec<(usize, &LilLetter)> = Vec::new();
    let mut pairs = Vec::new();
    for (idx, l) in u.iter().enumerate() {
        if l.bar {
            let (open, top) = stack.pop()?;
            if top.sym != l.sym {
                return None;
            }
            pairs.push((open, idx + 1));
        } else {
            stack.push((idx + 1, l));
        }
    }
    if !stack.is_empty() {
        return None;
    }
    Some(Matching::new(u.len(), pairs).expect("stack pairing is non-crossing"))
}

/// The index morphism: rotates the four copies of each indexed symbol and
/// erases the auxiliary letters.
pub fn apply_g(u: &[LilLetter]) -> Vec<LilLetter> {
    u.iter()
        .filter_map(|l| match (&l.sym, l.bar) {
            (LilSym::Idx(p, 1), false) => Some(LilLetter::plain(LilSym::Idx(p.clone(), 1))),
            (LilSym::Idx(p, 2), false) => Some(LilLetter::barred(LilSym::Idx(p.clone(), 1))),
            (LilSym::Idx(p, 1), true) => Some(LilLetter::barred(LilSym::Idx(p.clone(), 2))),
            (LilSym::Idx(p, 2), true) => Some(LilLetter::plain(LilSym::Idx(p.clone(), 2))),
            (LilSym::Idx(..), _) => unreachable!("indices are 1 or 2"),
            (LilSym::State(_), _) | (LilSym::Letter(_), _) => None,
        })
        .collect()
}

/// The letter projection: keeps exactly the plain alphabet letters.
pub fn apply_f(u: &[LilLetter]) -> Vec<String> {
    u.iter()
        .filter_map(|l| match (&l.sym, l.bar) {
            (LilSym::Letter(a), false) => Some(a.clone()),
            _ => None,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LilError {
    NotNice,
    NotAccepting,
    /// The word does not parse as an initial state, transition blocks and a
    /// barred final state.
    NotInR { position: usize },
    NotDyck,
    NotGDyck,
}

impl fmt::Display for LilError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LilError::NotNice => write!(f, "automaton is not nice"),
            LilError::NotAccepting => write!(f, "run is not an accepting run"),
            LilError::NotInR { position } => {
                write!(f, "word leaves the transition language at letter {}", position)
            }
            LilError::NotDyck => write!(f, "word is not a Dyck word"),
            LilError::NotGDyck => write!(f, "index projection is not a Dyck word"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn idx(p: &str, i: u8) -> LilLetter {
        LilLetter::plain(LilSym::Idx(p.into(), i))
    }

    #[test]
    fn empty_word_is_dyck() {
        assert!(is_dyck(&[]));
    }

    #[test]
    fn nesting_versus_crossing() {
        let a = idx("a", 1);
        let b = idx("b", 1);
        assert!(is_dyck(&[a.clone(), b.clone(), b.bar(), a.bar()]));
        assert!(!is_dyck(&[a.clone(), b.clone(), a.bar(), b.bar()]));
        assert!(!is_dyck(&[a.clone()]));
        assert!(!is_dyck(&[a.bar()]));
    }

    #[test]
    fn induced_matching() {
        let a = idx("a", 1);
        let b = idx("b", 2);
        let m = dyck_matching(&[a.clone(), b.clone(), b.bar(), a.bar()]).unwrap();
        assert_eq!(m.pairs(), &[(1, 4), (2, 3)]);
    }

    #[test]
    fn g_rotates_the_wave_pattern() {
        let u = vec![idx("a", 1), idx("a", 2), idx("a", 2).bar(), idx("a", 1).bar()];
        let g = apply_g(&u);
        assert_eq!(
            g,
            vec![idx("a", 1), idx("a", 1).bar(), idx("a", 2), idx("a", 2).bar()]
        );
        assert!(is_dyck(&g));
    }

    #[test]
    fn g_erases_auxiliary_letters() {
        let b = LilLetter::plain(LilSym::State("q".into()));
        assert!(apply_g(&[b.clone(), b.bar()]).is_empty());
    }

    #[test]
    fn f_keeps_plain_letters() {
        let u = vec![
            LilLetter::barred(LilSym::State("q".into())),
            LilLetter::plain(LilSym::Letter("x".into())),
            LilLetter::barred(LilSym::Letter("x".into())),
            LilLetter::plain(LilSym::State("r".into())),
        ];
        assert_eq!(apply_f(&u), vec!["x".to_owned()]);
    }

    #[test]
    fn bar_word_reverses_and_flips() {
        let u = vec![idx("a", 1), idx("b", 2)];
        let v = bar_word(&u);
        assert_eq!(v, vec![idx("b", 2).bar(), idx("a", 1).bar()]);
    }

    /// Quadratic checker following the inductive definition, used as an
    /// independent oracle for the stack-based one.
    pub(crate) fn is_dyck_recursive(u: &[LilLetter]) -> bool {
        if u.is_empty() {
            return true;
        }
        if u[0].bar {
            return false;
        }
        // find the closing occurrence at depth zero
        let mut depth = 0usize;
        for i in 1..u.len() {
            if u[i].bar {
                if depth == 0 {
                    return u[i].sym == u[0].sym
                        && is_dyck_recursive(&u[1..i])
                        && is_dyck_recursive(&u[i + 1..]);
                }
                depth -= 1;
            } else {
                depth += 1;
            }
        }
        false
    }

    #[test]
    fn stack_checker_agrees_with_recursive_definition() {
        // all words of length up to 6 over two paired symbols
        let symbols = [idx("a", 1), idx("a", 1).bar(), idx("b", 2), idx("b", 2).bar()];
        let mut words: Vec<Vec<LilLetter>> = vec![vec![]];
        for _ in 0..6 {
            let mut next = Vec::new();
            for w in &words {
                for s in &symbols {
                    let mut w = w.clone();
                    w.push(s.clone());
                    next.push(w);
                }
            }
            for w in &next {
                assert_eq!(is_dyck(w), is_dyck_recursive(w));
            }
            words = next;
        }
    }
}
