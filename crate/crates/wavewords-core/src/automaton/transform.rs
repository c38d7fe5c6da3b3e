//! Normal forms and closure constructions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::kind::{Kind, Status};

use super::{Automaton2NW, HierId, StateId, Transition};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismError {
    /// A letter of the domain alphabet has no image.
    MissingImage { letter: String },
}

impl fmt::Display for MorphismError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismError::MissingImage { letter } => {
                write!(f, "letter {:?} has no image", letter)
            }
        }
    }
}

/// Tag recording which hierarchical states a position emitted: nothing, one
/// state, or the M1 state followed by the M2 state.
type Tag = Vec<HierId>;

fn tag_name(aut: &Automaton2NW, q: StateId, tag: &Tag) -> String {
    let mut name = aut.states()[q].clone();
    for &h in tag {
        name.push('|');
        name.push_str(&aut.hier()[h]);
    }
    name
}

impl Automaton2NW {
    /// Weakly-hierarchical post form: the hierarchical states become the
    /// linear states, and the state reached at a call also labels the arches
    /// opened there. States of the result are the original states tagged
    /// with the at-most-two hierarchical states they emitted. Returns a copy
    /// unchanged when the automaton is already in post form.
    pub fn to_post_form(&self) -> Automaton2NW {
        if self.is_post_form() {
            return self.clone();
        }
        let mut tags: Vec<Tag> = Vec::new();
        tags.push(Vec::new());
        for p in 0..self.hier().len() {
            tags.push(alloc::vec![p]);
        }
        for p1 in 0..self.hier().len() {
            for p2 in 0..self.hier().len() {
                tags.push(alloc::vec![p1, p2]);
            }
        }
        let mut states = Vec::new();
        let mut id_of: BTreeMap<(StateId, Tag), StateId> = BTreeMap::new();
        for q in 0..self.states().len() {
            for t in &tags {
                id_of.insert((q, t.clone()), states.len());
                states.push(tag_name(self, q, t));
            }
        }
        let initial: BTreeSet<StateId> =
            self.initial().iter().map(|&q| id_of[&(q, Vec::new())]).collect();
        let finals: BTreeSet<StateId> = self
            .finals()
            .iter()
            .flat_map(|&q| tags.iter().map(move |t| (q, t.clone())))
            .map(|key| id_of[&key])
            .collect();

        // candidate labels of an arch whose original label is p: the tagged
        // states whose emitted M1 (resp. M2) component is p
        let m1_pop = |p: HierId| -> Vec<StateId> {
            let mut out = Vec::new();
            for q in 0..self.states().len() {
                out.push(id_of[&(q, alloc::vec![p])]);
                for p2 in 0..self.hier().len() {
                    out.push(id_of[&(q, alloc::vec![p, p2])]);
                }
            }
            out
        };
        let m2_pop = |p: HierId| -> Vec<StateId> {
            let mut out = Vec::new();
            for q in 0..self.states().len() {
                out.push(id_of[&(q, alloc::vec![p])]);
                for p1 in 0..self.hier().len() {
                    out.push(id_of[&(q, alloc::vec![p1, p])]);
                }
            }
            out
        };

        let mut delta: BTreeMap<Kind, BTreeSet<Transition>> = BTreeMap::new();
        for (kind, t) in self.transitions() {
            let mut out_tag = Vec::new();
            if kind.upper == Status::Call {
                out_tag.push(t.hout[0]);
            }
            if kind.lower == Status::Call {
                out_tag.push(t.hout[out_tag.len()]);
            }
            let target = id_of[&(t.dst, out_tag)];
            let m1_ins: Vec<Option<Vec<StateId>>> = if kind.upper == Status::Return {
                alloc::vec![Some(m1_pop(t.hin[0]))]
            } else {
                alloc::vec![None]
            };
            let m2_ins: Vec<Option<Vec<StateId>>> = if kind.lower == Status::Return {
                let idx = (kind.upper == Status::Return) as usize;
                alloc::vec![Some(m2_pop(t.hin[idx]))]
            } else {
                alloc::vec![None]
            };
            let hout = alloc::vec![target; kind.out_arity()];
            for tag in &tags {
                let src = id_of[&(t.src, tag.clone())];
                for m1 in &m1_ins {
                    for m2 in &m2_ins {
                        let firsts: &[StateId] = match m1 {
                            Some(v) => v,
                            None => &[0][..0],
                        };
                        let seconds: &[StateId] = match m2 {
                            Some(v) => v,
                            None => &[0][..0],
                        };
                        let combos: Vec<Vec<StateId>> = match (m1.is_some(), m2.is_some()) {
                            (false, false) => alloc::vec![Vec::new()],
                            (true, false) => firsts.iter().map(|&a| alloc::vec![a]).collect(),
                            (false, true) => seconds.iter().map(|&b| alloc::vec![b]).collect(),
                            (true, true) => firsts
                                .iter()
                                .flat_map(|&a| seconds.iter().map(move |&b| alloc::vec![a, b]))
                                .collect(),
                        };
                        for hin in combos {
                            delta.entry(kind).or_default().insert(Transition {
                                src,
                                hin,
                                letter: t.letter,
                                hout: hout.clone(),
                                dst: target,
                            });
                        }
                    }
                }
            }
        }
        Automaton2NW::from_raw(
            states.clone(),
            states,
            self.alphabet().to_vec(),
            initial,
            finals,
            delta,
        )
    }

    /// Nice form: every transition on both matchings carries one repeated
    /// hierarchical state, a quadruple guessing all four labels around the
    /// 2-wave it takes part in. Only the language of wave words is preserved;
    /// the four mixed-kind families are dropped since no wave word uses them.
    pub fn to_nice(&self) -> Automaton2NW {
        let p_count = self.hier().len();
        let mut hier = Vec::new();
        let mut quad_id: BTreeMap<[HierId; 4], HierId> = BTreeMap::new();
        let mut quads = Vec::new();
        for p1 in 0..p_count {
            for p2 in 0..p_count {
                for p3 in 0..p_count {
                    for p4 in 0..p_count {
                        let quad = [p1, p2, p3, p4];
                        quad_id.insert(quad, hier.len());
                        hier.push(format!(
                            "({},{},{},{})",
                            self.hier()[p1],
                            self.hier()[p2],
                            self.hier()[p3],
                            self.hier()[p4]
                        ));
                        quads.push(quad);
                    }
                }
            }
        }
        let mut delta: BTreeMap<Kind, BTreeSet<Transition>> = BTreeMap::new();
        delta.insert(Kind::II, self.family(Kind::II).clone());
        let mut add = |kind: Kind, src: StateId, hin_n: usize, letter, hout_n: usize, dst, v: HierId| {
            delta.entry(kind).or_default().insert(Transition {
                src,
                hin: alloc::vec![v; hin_n],
                letter,
                hout: alloc::vec![v; hout_n],
                dst,
            });
        };
        for t in self.family(Kind::CC) {
            let (p1, p4) = (t.hout[0], t.hout[1]);
            for p2 in 0..p_count {
                for p3 in 0..p_count {
                    let v = quad_id[&[p1, p2, p3, p4]];
                    add(Kind::CC, t.src, 0, t.letter, 2, t.dst, v);
                }
            }
        }
        for t in self.family(Kind::RC) {
            let (p1, p2) = (t.hin[0], t.hout[0]);
            for p3 in 0..p_count {
                for p4 in 0..p_count {
                    let v = quad_id[&[p1, p2, p3, p4]];
                    add(Kind::RC, t.src, 1, t.letter, 1, t.dst, v);
                }
            }
        }
        for t in self.family(Kind::CR) {
            let (p2, p3) = (t.hin[0], t.hout[0]);
            for p1 in 0..p_count {
                for p4 in 0..p_count {
                    let v = quad_id[&[p1, p2, p3, p4]];
                    add(Kind::CR, t.src, 1, t.letter, 1, t.dst, v);
                }
            }
        }
        for t in self.family(Kind::RR) {
            let (p3, p4) = (t.hin[0], t.hin[1]);
            for p1 in 0..p_count {
                for p2 in 0..p_count {
                    let v = quad_id[&[p1, p2, p3, p4]];
                    add(Kind::RR, t.src, 2, t.letter, 0, t.dst, v);
                }
            }
        }
        Automaton2NW::from_raw(
            self.states().to_vec(),
            hier,
            self.alphabet().to_vec(),
            self.initial().clone(),
            self.finals().clone(),
            delta,
        )
    }

    /// Synchronous product: accepts the intersection of the two languages.
    /// States and hierarchical states are paired componentwise.
    pub fn product(&self, other: &Automaton2NW) -> Automaton2NW {
        let pair_name = |a: &str, b: &str| format!("({},{})", a, b);
        let states: Vec<String> = self
            .states()
            .iter()
            .flat_map(|a| other.states().iter().map(move |b| pair_name(a, b)))
            .collect();
        let sid = |qa: StateId, qb: StateId| qa * other.states().len() + qb;
        let hier: Vec<String> = self
            .hier()
            .iter()
            .flat_map(|a| other.hier().iter().map(move |b| pair_name(a, b)))
            .collect();
        let hid = |pa: HierId, pb: HierId| pa * other.hier().len() + pb;
        let mut alphabet = self.alphabet().to_vec();
        for l in other.alphabet() {
            if !alphabet.contains(l) {
                alphabet.push(l.clone());
            }
        }
        let letter_ix: BTreeMap<&str, usize> =
            alphabet.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let mut delta: BTreeMap<Kind, BTreeSet<Transition>> = BTreeMap::new();
        for kind in Kind::ALL {
            for ta in self.family(kind) {
                for tb in other.family(kind) {
                    if self.alphabet()[ta.letter] != other.alphabet()[tb.letter] {
                        continue;
                    }
                    delta.entry(kind).or_default().insert(Transition {
                        src: sid(ta.src, tb.src),
                        hin: ta
                            .hin
                            .iter()
                            .zip(&tb.hin)
                            .map(|(&a, &b)| hid(a, b))
                            .collect(),
                        letter: letter_ix[self.alphabet()[ta.letter].as_str()],
                        hout: ta
                            .hout
                            .iter()
                            .zip(&tb.hout)
                            .map(|(&a, &b)| hid(a, b))
                            .collect(),
                        dst: sid(ta.dst, tb.dst),
                    });
                }
            }
        }
        let cross = |xs: &BTreeSet<StateId>, ys: &BTreeSet<StateId>| -> BTreeSet<StateId> {
            xs.iter().flat_map(|&a| ys.iter().map(move |&b| sid(a, b))).collect()
        };
        Automaton2NW::from_raw(
            states,
            hier,
            alphabet,
            cross(self.initial(), other.initial()),
            cross(self.finals(), other.finals()),
            delta,
        )
    }

    /// Disjoint sum: accepts the union of the two languages.
    pub fn sum(&self, other: &Automaton2NW) -> Automaton2NW {
        let tag = |names: &[String], t: &str| -> Vec<String> {
            names.iter().map(|n| format!("{}@{}", n, t)).collect()
        };
        let mut states = tag(self.states(), "1");
        states.extend(tag(other.states(), "2"));
        let mut hier = tag(self.hier(), "1");
        hier.extend(tag(other.hier(), "2"));
        let mut alphabet = self.alphabet().to_vec();
        for l in other.alphabet() {
            if !alphabet.contains(l) {
                alphabet.push(l.clone());
            }
        }
        let letter_ix: BTreeMap<&str, usize> =
            alphabet.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let qoff = self.states().len();
        let hoff = self.hier().len();
        let mut delta: BTreeMap<Kind, BTreeSet<Transition>> = BTreeMap::new();
        for kind in Kind::ALL {
            for t in self.family(kind) {
                let mut t = t.clone();
                t.letter = letter_ix[self.alphabet()[t.letter].as_str()];
                delta.entry(kind).or_default().insert(t);
            }
            for t in other.family(kind) {
                delta.entry(kind).or_default().insert(Transition {
                    src: t.src + qoff,
                    hin: t.hin.iter().map(|&h| h + hoff).collect(),
                    letter: letter_ix[other.alphabet()[t.letter].as_str()],
                    hout: t.hout.iter().map(|&h| h + hoff).collect(),
                    dst: t.dst + qoff,
                });
            }
        }
        let initial = self
            .initial()
            .iter()
            .copied()
            .chain(other.initial().iter().map(|&q| q + qoff))
            .collect();
        let finals = self
            .finals()
            .iter()
            .copied()
            .chain(other.finals().iter().map(|&q| q + qoff))
            .collect();
        Automaton2NW::from_raw(states, hier, alphabet, initial, finals, delta)
    }

    /// Direct image under a non-erasing alphabetic morphism: every letter is
    /// replaced by its image.
    pub fn morphism_image(
        &self,
        h: &BTreeMap<String, String>,
    ) -> Result<Automaton2NW, MorphismError> {
        let mut alphabet: Vec<String> = Vec::new();
        let mut image_id = Vec::new();
        for l in self.alphabet() {
            let img = h
                .get(l)
                .ok_or_else(|| MorphismError::MissingImage { letter: l.clone() })?;
            if !alphabet.contains(img) {
                alphabet.push(img.clone());
            }
            image_id.push(alphabet.iter().position(|x| x == img).unwrap());
        }
        let mut delta: BTreeMap<Kind, BTreeSet<Transition>> = BTreeMap::new();
        for (kind, t) in self.transitions() {
            let mut t = t.clone();
            t.letter = image_id[t.letter];
            delta.entry(kind).or_default().insert(t);
        }
        Ok(Automaton2NW::from_raw(
            self.states().to_vec(),
            self.hier().to_vec(),
            alphabet,
            self.initial().clone(),
            self.finals().clone(),
            delta,
        ))
    }

    /// Reciprocal image: the new alphabet is the domain of `h` and every
    /// transition on `h(b)` is duplicated for `b`.
    pub fn morphism_preimage(&self, h: &BTreeMap<String, String>) -> Automaton2NW {
        let alphabet: Vec<String> = h.keys().cloned().collect();
        let mut delta: BTreeMap<Kind, BTreeSet<Transition>> = BTreeMap::new();
        for (b_id, b) in alphabet.iter().enumerate() {
            let img = &h[b];
            if let Some(a_id) = self.letter_id(img) {
                for kind in Kind::ALL {
                    for t in self.family(kind) {
                        if t.letter == a_id {
                            let mut t = t.clone();
                            t.letter = b_id;
                            delta.entry(kind).or_default().insert(t);
                        }
                    }
                }
            }
        }
        Automaton2NW::from_raw(
            self.states().to_vec(),
            self.hier().to_vec(),
            alphabet,
            self.initial().clone(),
            self.finals().clone(),
            delta,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::automaton::NamedTransition;
    use crate::word::fixtures::omega2;
    use crate::word::NestedWord2;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn post_form_is_idempotent_on_a_ex() {
        let a = a_ex();
        let p = a.to_post_form();
        assert_eq!(a, p);
    }

    #[test]
    fn post_form_of_a_plain_internal_automaton() {
        let a = Automaton2NW::new(
            vec!["s".into(), "t".into()],
            vec!["s".into()],
            vec!["t".into()],
            vec!["p".into()],
            vec!["a".into()],
            vec![NamedTransition {
                kind: Kind::II,
                src: "s".into(),
                hin: vec![],
                letter: "a".into(),
                hout: vec![],
                dst: "t".into(),
            }],
        )
        .unwrap();
        assert!(!a.is_post_form());
        let p = a.to_post_form();
        assert!(p.is_post_form());
        let w = NestedWord2::from_parts("a", &[], &[]);
        assert!(a.accepts_bruteforce(&w).unwrap().is_some());
        assert!(p.accepts_bruteforce(&w).unwrap().is_some());
        let ww = NestedWord2::from_parts("aa", &[], &[]);
        assert!(p.accepts_bruteforce(&ww).unwrap().is_none());
    }

    #[test]
    fn nice_form_keeps_omega2() {
        let a = a_ex();
        let nice = a.to_nice();
        assert!(nice.is_nice());
        assert!(nice.accepts_bruteforce(&omega2()).unwrap().is_some());
        let bad = NestedWord2::from_parts("abcc", &[(1, 2), (3, 4)], &[(2, 3), (1, 4)]);
        assert!(nice.accepts_bruteforce(&bad).unwrap().is_none());
    }

    #[test]
    fn product_and_sum_on_a_witness() {
        let a = a_ex();
        let prod = a.product(&a);
        assert!(prod.accepts_bruteforce(&omega2()).unwrap().is_some());
        let empty = Automaton2NW::new(
            vec!["z".to_string()],
            vec!["z".to_string()],
            vec![],
            vec!["z".to_string()],
            vec!["a".to_string()],
            vec![],
        )
        .unwrap();
        let sum = a.sum(&empty);
        assert!(sum.accepts_bruteforce(&omega2()).unwrap().is_some());
    }

    #[test]
    fn morphisms_relabel_letters() {
        let a = a_ex();
        let h: BTreeMap<String, String> =
            ["a", "b", "c", "d"].iter().map(|l| (l.to_string(), "x".to_string())).collect();
        let img = a.morphism_image(&h).unwrap();
        let w = NestedWord2::from_parts(
            "xxxxxxxx",
            &[(1, 4), (2, 3), (5, 8), (6, 7)],
            &[(1, 8), (2, 7), (3, 6), (4, 5)],
        );
        assert!(img.accepts_bruteforce(&w).unwrap().is_some());
        let identity: BTreeMap<String, String> =
            ["a", "b", "c", "d"].iter().map(|l| (l.to_string(), l.to_string())).collect();
        let pre = a.morphism_preimage(&identity);
        assert!(pre.accepts_bruteforce(&omega2()).unwrap().is_some());
    }
}
