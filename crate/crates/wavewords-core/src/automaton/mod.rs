//! Automata over 2-nested words: linear states along the word, hierarchical
//! states labelling the arches of both matchings, and nine transition
//! families indexed by position kind.

mod oracle;
mod transform;

pub use oracle::Run;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::kind::Kind;

pub type StateId = usize;
pub type HierId = usize;
pub type LetterId = usize;

/// One transition. `hin`/`hout` follow the run-relation order: the M1
/// component comes before the M2 component whenever both are present, and
/// received states precede the letter while emitted states follow it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub src: StateId,
    pub hin: Vec<HierId>,
    pub letter: LetterId,
    pub hout: Vec<HierId>,
    pub dst: StateId,
}

/// A transition referred to by names, used for construction and parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedTransition {
    pub kind: Kind,
    pub src: String,
    pub hin: Vec<String>,
    pub letter: String,
    pub hout: Vec<String>,
    pub dst: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    DuplicateName { name: String },
    UndeclaredState { name: String },
    UndeclaredHier { name: String },
    UndeclaredLetter { name: String },
    BadArity { kind: Kind, hin: usize, hout: usize },
}

impl fmt::Display for AutomatonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutomatonError::DuplicateName { name } => write!(f, "duplicate name {:?}", name),
            AutomatonError::UndeclaredState { name } => write!(f, "undeclared state {:?}", name),
            AutomatonError::UndeclaredHier { name } => {
                write!(f, "undeclared hierarchical state {:?}", name)
            }
            AutomatonError::UndeclaredLetter { name } => write!(f, "undeclared letter {:?}", name),
            AutomatonError::BadArity { kind, hin, hout } => write!(
                f,
                "kind {} expects {} received and {} emitted hierarchical states, got {}/{}",
                kind,
                kind.in_arity(),
                kind.out_arity(),
                hin,
                hout
            ),
        }
    }
}

/// A 2-nested word automaton. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton2NW {
    states: Vec<String>,
    hier: Vec<String>,
    alphabet: Vec<String>,
    initial: BTreeSet<StateId>,
    finals: BTreeSet<StateId>,
    delta: BTreeMap<Kind, BTreeSet<Transition>>,
}

fn index_names(names: &[String]) -> Result<BTreeMap<&str, usize>, AutomatonError> {
    let mut map = BTreeMap::new();
    for (i, n) in names.iter().enumerate() {
        if map.insert(n.as_str(), i).is_some() {
            return Err(AutomatonError::DuplicateName { name: n.clone() });
        }
    }
    Ok(map)
}

impl Automaton2NW {
    pub fn new(
        states: Vec<String>,
        initial: Vec<String>,
        finals: Vec<String>,
        hier: Vec<String>,
        alphabet: Vec<String>,
        transitions: Vec<NamedTransition>,
    ) -> Result<Self, AutomatonError> {
        let state_ix = index_names(&states)?;
        let hier_ix = index_names(&hier)?;
        let letter_ix = index_names(&alphabet)?;
        let state_id = |name: &str| {
            state_ix
                .get(name)
                .copied()
                .ok_or(AutomatonError::UndeclaredState { name: name.into() })
        };
        let hier_id = |name: &str| {
            hier_ix
                .get(name)
                .copied()
                .ok_or(AutomatonError::UndeclaredHier { name: name.into() })
        };
        let mut delta: BTreeMap<Kind, BTreeSet<Transition>> =
            Kind::ALL.iter().map(|&k| (k, BTreeSet::new())).collect();
        for t in &transitions {
            if t.hin.len() != t.kind.in_arity() || t.hout.len() != t.kind.out_arity() {
                return Err(AutomatonError::BadArity {
                    kind: t.kind,
                    hin: t.hin.len(),
                    hout: t.hout.len(),
                });
            }
            let letter = letter_ix
                .get(t.letter.as_str())
                .copied()
                .ok_or(AutomatonError::UndeclaredLetter { name: t.letter.clone() })?;
            let tr = Transition {
                src: state_id(&t.src)?,
                hin: t.hin.iter().map(|h| hier_id(h)).collect::<Result<_, _>>()?,
                letter,
                hout: t.hout.iter().map(|h| hier_id(h)).collect::<Result<_, _>>()?,
                dst: state_id(&t.dst)?,
            };
            delta.get_mut(&t.kind).expect("all kinds present").insert(tr);
        }
        let initial = initial
            .iter()
            .map(|n| state_id(n))
            .collect::<Result<BTreeSet<_>, _>>()?;
        let finals = finals
            .iter()
            .map(|n| state_id(n))
            .collect::<Result<BTreeSet<_>, _>>()?;
        Ok(Automaton2NW { states, hier, alphabet, initial, finals, delta })
    }

    /// Id-based constructor for the closure constructions; callers guarantee
    /// that ids are in range and arities match.
    pub(crate) fn from_raw(
        states: Vec<String>,
        hier: Vec<String>,
        alphabet: Vec<String>,
        initial: BTreeSet<StateId>,
        finals: BTreeSet<StateId>,
        delta: BTreeMap<Kind, BTreeSet<Transition>>,
    ) -> Self {
        let mut full = delta;
        for k in Kind::ALL {
            full.entry(k).or_default();
        }
        debug_assert!(full.iter().all(|(k, ts)| ts
            .iter()
            .all(|t| t.hin.len() == k.in_arity() && t.hout.len() == k.out_arity())));
        Automaton2NW { states, hier, alphabet, initial, finals, delta: full }
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn hier(&self) -> &[String] {
        &self.hier
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn initial(&self) -> &BTreeSet<StateId> {
        &self.initial
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn family(&self, kind: Kind) -> &BTreeSet<Transition> {
        &self.delta[&kind]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (Kind, &Transition)> {
        self.delta.iter().flat_map(|(&k, ts)| ts.iter().map(move |t| (k, t)))
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn letter_id(&self, name: &str) -> Option<LetterId> {
        self.alphabet.iter().position(|s| s == name)
    }

    pub fn hier_id(&self, name: &str) -> Option<HierId> {
        self.hier.iter().position(|s| s == name)
    }

    /// Whether every transition family induces a partial function
    /// `(source, received hier states, letter) -> (emitted, target)` and the
    /// initial set is a singleton.
    pub fn is_deterministic(&self) -> bool {
        if self.initial.len() != 1 {
            return false;
        }
        for ts in self.delta.values() {
            let mut seen = BTreeSet::new();
            for t in ts {
                if !seen.insert((t.src, t.hin.clone(), t.letter)) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether the hierarchical states are the linear states and every
    /// emitted hierarchical state equals the transition target.
    pub fn is_post_form(&self) -> bool {
        let state_names: BTreeSet<&str> = self.states.iter().map(|s| s.as_str()).collect();
        let hier_names: BTreeSet<&str> = self.hier.iter().map(|s| s.as_str()).collect();
        if state_names != hier_names {
            return false;
        }
        self.transitions().all(|(_, t)| {
            t.hout.iter().all(|&h| self.hier[h] == self.states[t.dst])
        })
    }

    /// Whether every transition touching both matchings carries a single
    /// repeated hierarchical state.
    pub fn is_nice(&self) -> bool {
        [Kind::CC, Kind::RC, Kind::CR, Kind::RR].iter().all(|&k| {
            self.family(k).iter().all(|t| {
                let mut all = t.hin.iter().chain(t.hout.iter());
                match all.next() {
                    None => true,
                    Some(first) => all.all(|h| h == first),
                }
            })
        })
    }

    /// Map from hier id to the state id carrying the same name; only
    /// meaningful in post form.
    pub(crate) fn hier_to_state(&self) -> Vec<StateId> {
        self.hier
            .iter()
            .map(|h| self.state_id(h).expect("post form: hier names are state names"))
            .collect()
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn named(kind: Kind, src: &str, hin: &[&str], letter: &str, hout: &[&str], dst: &str) -> NamedTransition {
        NamedTransition {
            kind,
            src: src.into(),
            hin: hin.iter().map(|s| s.to_string()).collect(),
            letter: letter.into(),
            hout: hout.iter().map(|s| s.to_string()).collect(),
            dst: dst.into(),
        }
    }

    /// The running example: a deterministic post-form automaton whose word
    /// projection over wave words is { aⁿbⁿcⁿdⁿ | n ≥ 1 }.
    pub fn a_ex() -> Automaton2NW {
        let q = |s: &str| s.to_string();
        let mut transitions = vec![named(Kind::CC, "qa", &[], "a", &["qa", "qa"], "qa")];
        for x in ["qa", "qb"] {
            transitions.push(named(Kind::RC, x, &["qa"], "b", &["qb"], "qb"));
        }
        for x in ["qb", "qc"] {
            transitions.push(named(Kind::CR, x, &["qb"], "c", &["qc"], "qc"));
        }
        for x in ["qc", "qd"] {
            transitions.push(named(Kind::RR, x, &["qc", "qa"], "d", &[], "qd"));
        }
        Automaton2NW::new(
            vec![q("qa"), q("qb"), q("qc"), q("qd")],
            vec![q("qa")],
            vec![q("qd")],
            vec![q("qa"), q("qb"), q("qc"), q("qd")],
            vec![q("a"), q("b"), q("c"), q("d")],
            transitions,
        )
        .unwrap()
    }

    /// The wave word aⁿbⁿcⁿdⁿ with both matchings fully nested.
    pub fn omega_n(n: usize) -> crate::word::NestedWord2 {
        let mut letters = String::new();
        for ch in ["a", "b", "c", "d"] {
            for _ in 0..n {
                letters.push_str(ch);
            }
        }
        let mut m1 = vec![];
        let mut m2 = vec![];
        for i in 1..=n {
            m1.push((i, 2 * n + 1 - i));
            m1.push((2 * n + i, 4 * n + 1 - i));
        }
        for i in 1..=2 * n {
            m2.push((i, 4 * n + 1 - i));
        }
        crate::word::NestedWord2::from_parts(&letters, &m1, &m2)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn a_ex_shape() {
        let a = a_ex();
        assert!(a.is_deterministic());
        assert!(a.is_post_form());
        assert!(!a.is_nice()); // rc pops qa but pushes qb
        assert_eq!(a.family(Kind::RR).len(), 2);
        assert_eq!(a.family(Kind::II).len(), 0);
    }

    #[test]
    fn arity_and_declarations_are_checked() {
        let bad = Automaton2NW::new(
            alloc::vec!["q".into()],
            alloc::vec!["q".into()],
            alloc::vec![],
            alloc::vec!["p".into()],
            alloc::vec!["a".into()],
            alloc::vec![NamedTransition {
                kind: Kind::CC,
                src: "q".into(),
                hin: alloc::vec![],
                letter: "a".into(),
                hout: alloc::vec!["p".into()],
                dst: "q".into(),
            }],
        );
        assert!(matches!(bad.unwrap_err(), AutomatonError::BadArity { .. }));
    }
}
