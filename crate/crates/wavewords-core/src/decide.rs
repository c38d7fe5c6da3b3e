//! Decision procedures: emptiness by saturation of state pairs and state
//! quadruples along the grammar rules, and universality, inclusion and
//! equivalence through complementation of the determinized automaton.
//!
//! The saturation is written once, over a small machine interface, and
//! instantiated with post-form automata, determinized automata, and products
//! of the two. A pair `(q, q')` enters `W` exactly when some wave word runs
//! from `q` to `q'`; a quadruple enters `H` exactly when some matched pair of
//! factors does. Each entry remembers the rule that first produced it, so a
//! witness wave word can be rebuilt.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::automaton::{Automaton2NW, LetterId, StateId};
use crate::determinize::{self, DetAutomaton, DetError, DetStateId};
use crate::kind::Kind;
use crate::typed::{from_typed, TypedLetter, WaveKind};
use crate::word::NestedWord2;

/// Step functions a machine must provide to take part in the saturation.
/// The context arguments carry the (state before, letter, state after)
/// triple of the earlier boundary steps of the same wave, which is enough
/// for both post-form automata (the popped label is the state after the
/// call) and determinized automata (the popped payload is the state before
/// the call plus the letter).
pub trait SatMachine {
    type Q: Ord + Clone;

    fn states(&self) -> Vec<Self::Q>;
    fn letters(&self) -> Vec<String>;
    fn initials(&self) -> Vec<Self::Q>;
    fn is_final(&self, q: &Self::Q) -> bool;

    fn int_steps(&self, q: &Self::Q, a: &str) -> Vec<Self::Q>;
    fn cc_steps(&self, q: &Self::Q, a: &str) -> Vec<Self::Q>;
    fn rc_steps(&self, q: &Self::Q, cc: Ctx<'_, Self::Q>, a: &str) -> Vec<Self::Q>;
    fn cr_steps(
        &self,
        q: &Self::Q,
        cc: Ctx<'_, Self::Q>,
        rc: Ctx<'_, Self::Q>,
        a: &str,
    ) -> Vec<Self::Q>;
    fn rr_steps(
        &self,
        q: &Self::Q,
        cc: Ctx<'_, Self::Q>,
        rc: Ctx<'_, Self::Q>,
        cr: Ctx<'_, Self::Q>,
        a: &str,
    ) -> Vec<Self::Q>;
}

/// A boundary step: state before, letter, state after.
pub type Ctx<'a, Q> = (&'a Q, &'a str, &'a Q);

/// Saturation tables over explicit state pairs and quadruples, as used for a
/// single post-form automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturationTables {
    pub w: BTreeSet<(StateId, StateId)>,
    pub h: BTreeSet<(StateId, StateId, StateId, StateId)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecideError {
    Determinization(DetError),
}

impl fmt::Display for DecideError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecideError::Determinization(e) => write!(f, "determinization failed: {}", e),
        }
    }
}

impl From<DetError> for DecideError {
    fn from(e: DetError) -> Self {
        DecideError::Determinization(e)
    }
}

// ---------------------------------------------------------------------------
// saturation engine

type WKey<Q> = (Q, Q);
type HKey<Q> = (Q, Q, Q, Q);

#[derive(Debug, Clone)]
enum WProv<Q> {
    Eps,
    Int { letter: usize },
    Concat { left: WKey<Q>, right: WKey<Q> },
    Wrap { pair: HKey<Q>, inner: WKey<Q> },
}

#[derive(Debug, Clone)]
enum HProv<Q> {
    Eps,
    Concat { first: HKey<Q>, second: HKey<Q> },
    LeftPre { word: WKey<Q>, pair: HKey<Q> },
    LeftPost { pair: HKey<Q>, word: WKey<Q> },
    RightPre { word: WKey<Q>, pair: HKey<Q> },
    RightPost { pair: HKey<Q>, word: WKey<Q> },
    Wave { inner: HKey<Q>, letters: [usize; 4] },
}

enum Item<Q> {
    W(WKey<Q>),
    H(HKey<Q>),
}

struct Engine<'m, M: SatMachine> {
    machine: &'m M,
    letters: Vec<String>,
    states: Vec<M::Q>,
    /// call-call steps indexed by target state
    cc_by_target: BTreeMap<M::Q, Vec<(M::Q, usize)>>,
    w: BTreeMap<WKey<M::Q>, WProv<M::Q>>,
    h: BTreeMap<HKey<M::Q>, HProv<M::Q>>,
    w_by_left: BTreeMap<M::Q, BTreeSet<M::Q>>,
    w_by_right: BTreeMap<M::Q, BTreeSet<M::Q>>,
    h_by_left_start: BTreeMap<M::Q, BTreeSet<HKey<M::Q>>>,
    h_by_left_end: BTreeMap<M::Q, BTreeSet<HKey<M::Q>>>,
    h_by_right_start: BTreeMap<M::Q, BTreeSet<HKey<M::Q>>>,
    h_by_right_end: BTreeMap<M::Q, BTreeSet<HKey<M::Q>>>,
    h_by_middle: BTreeMap<(M::Q, M::Q), BTreeSet<HKey<M::Q>>>,
    h_by_ends_key: BTreeMap<(M::Q, M::Q), BTreeSet<HKey<M::Q>>>,
    h_by_starts_key: BTreeMap<(M::Q, M::Q), BTreeSet<HKey<M::Q>>>,
    queue: VecDeque<Item<M::Q>>,
    /// set when an initial-to-final pair lands in `w`
    hit: Option<WKey<M::Q>>,
    stop_on_hit: bool,
}

impl<'m, M: SatMachine> Engine<'m, M> {
    fn new(machine: &'m M, stop_on_hit: bool) -> Self {
        let letters = machine.letters();
        let states = machine.states();
        let mut cc_by_target: BTreeMap<M::Q, Vec<(M::Q, usize)>> = BTreeMap::new();
        for q in &states {
            for (ai, a) in letters.iter().enumerate() {
                for t in machine.cc_steps(q, a) {
                    cc_by_target.entry(t).or_default().push((q.clone(), ai));
                }
            }
        }
        Engine {
            machine,
            letters,
            states,
            cc_by_target,
            w: BTreeMap::new(),
            h: BTreeMap::new(),
            w_by_left: BTreeMap::new(),
            w_by_right: BTreeMap::new(),
            h_by_left_start: BTreeMap::new(),
            h_by_left_end: BTreeMap::new(),
            h_by_right_start: BTreeMap::new(),
            h_by_right_end: BTreeMap::new(),
            h_by_middle: BTreeMap::new(),
            h_by_ends_key: BTreeMap::new(),
            h_by_starts_key: BTreeMap::new(),
            queue: VecDeque::new(),
            hit: None,
            stop_on_hit,
        }
    }

    fn add_w(&mut self, key: WKey<M::Q>, prov: WProv<M::Q>) {
        if self.w.contains_key(&key) {
            return;
        }
        self.w.insert(key.clone(), prov);
        self.w_by_left.entry(key.0.clone()).or_default().insert(key.1.clone());
        self.w_by_right.entry(key.1.clone()).or_default().insert(key.0.clone());
        self.queue.push_back(Item::W(key));
    }

    fn add_h(&mut self, key: HKey<M::Q>, prov: HProv<M::Q>) {
        if self.h.contains_key(&key) {
            return;
        }
        self.h.insert(key.clone(), prov);
        let (a, b, c, d) = key.clone();
        self.h_by_left_start.entry(a.clone()).or_default().insert(key.clone());
        self.h_by_left_end.entry(b.clone()).or_default().insert(key.clone());
        self.h_by_right_start.entry(c.clone()).or_default().insert(key.clone());
        self.h_by_right_end.entry(d.clone()).or_default().insert(key.clone());
        self.h_by_middle.entry((b.clone(), c.clone())).or_default().insert(key.clone());
        self.h_by_ends_key.entry((b, d)).or_default().insert(key.clone());
        self.h_by_starts_key.entry((a, c)).or_default().insert(key.clone());
        self.queue.push_back(Item::H(key));
    }

    fn seed(&mut self) {
        let states = self.states.clone();
        for q in &states {
            self.add_w((q.clone(), q.clone()), WProv::Eps);
        }
        for q in &states {
            for s in &states {
                self.add_h(
                    (q.clone(), q.clone(), s.clone(), s.clone()),
                    HProv::Eps,
                );
            }
        }
        for q in &states {
            for (ai, a) in self.letters.clone().iter().enumerate() {
                for t in self.machine.int_steps(q, a) {
                    self.add_w((q.clone(), t), WProv::Int { letter: ai });
                }
            }
        }
    }

    fn run(&mut self) {
        self.seed();
        while let Some(item) = self.queue.pop_front() {
            if self.stop_on_hit && self.hit.is_some() {
                break;
            }
            match item {
                Item::W(key) => self.process_w(key),
                Item::H(key) => self.process_h(key),
            }
        }
        if self.hit.is_none() {
            self.hit = self.find_hit();
        }
    }

    fn find_hit(&self) -> Option<WKey<M::Q>> {
        for q0 in self.machine.initials() {
            if let Some(rights) = self.w_by_left.get(&q0) {
                for qf in rights {
                    if self.machine.is_final(qf) {
                        return Some((q0, qf.clone()));
                    }
                }
            }
        }
        None
    }

    fn note_hit(&mut self, key: &WKey<M::Q>) {
        if self.hit.is_none()
            && self.machine.initials().contains(&key.0)
            && self.machine.is_final(&key.1)
        {
            self.hit = Some(key.clone());
        }
    }

    fn process_w(&mut self, key: WKey<M::Q>) {
        self.note_hit(&key);
        let (q, m) = key.clone();
        // transitivity, on either side
        for r in self.w_by_left.get(&m).cloned().unwrap_or_default() {
            self.add_w(
                (q.clone(), r.clone()),
                WProv::Concat { left: key.clone(), right: (m.clone(), r) },
            );
        }
        for p in self.w_by_right.get(&q).cloned().unwrap_or_default() {
            self.add_w(
                (p.clone(), m.clone()),
                WProv::Concat { left: (p, q.clone()), right: key.clone() },
            );
        }
        // wrapping: this pair is the inner word of some matched pair
        for hk in self.h_by_middle.get(&(q.clone(), m.clone())).cloned().unwrap_or_default()
        {
            self.add_w(
                (hk.0.clone(), hk.3.clone()),
                WProv::Wrap { pair: hk, inner: key.clone() },
            );
        }
        // single-sided extensions of matched pairs
        for hk in self.h_by_left_start.get(&m).cloned().unwrap_or_default() {
            let new = (q.clone(), hk.1.clone(), hk.2.clone(), hk.3.clone());
            self.add_h(new, HProv::LeftPre { word: key.clone(), pair: hk });
        }
        for hk in self.h_by_left_end.get(&q).cloned().unwrap_or_default() {
            let new = (hk.0.clone(), m.clone(), hk.2.clone(), hk.3.clone());
            self.add_h(new, HProv::LeftPost { pair: hk, word: key.clone() });
        }
        for hk in self.h_by_right_start.get(&m).cloned().unwrap_or_default() {
            let new = (hk.0.clone(), hk.1.clone(), q.clone(), hk.3.clone());
            self.add_h(new, HProv::RightPre { word: key.clone(), pair: hk });
        }
        for hk in self.h_by_right_end.get(&q).cloned().unwrap_or_default() {
            let new = (hk.0.clone(), hk.1.clone(), hk.2.clone(), m.clone());
            self.add_h(new, HProv::RightPost { pair: hk, word: key.clone() });
        }
    }

    fn process_h(&mut self, key: HKey<M::Q>) {
        let (q, q1, s, s1) = key.clone();
        // wrapping with the already-known inner words
        if self.w.contains_key(&(q1.clone(), s.clone())) {
            self.add_w(
                (q.clone(), s1.clone()),
                WProv::Wrap { pair: key.clone(), inner: (q1.clone(), s.clone()) },
            );
        }
        // pair concatenation: this pair as the first component ...
        for other in self
            .h_by_starts_key
            .get(&(q1.clone(), s.clone()))
            .cloned()
            .unwrap_or_default()
        {
            // other = (q1, q2, s0, s') with right word ending where ours starts
            let new = (q.clone(), other.1.clone(), other.2.clone(), s1.clone());
            self.add_h(new, HProv::Concat { first: key.clone(), second: other });
        }
        // ... and as the second component
        for other in self
            .h_by_ends_key
            .get(&(q.clone(), s1.clone()))
            .cloned()
            .unwrap_or_default()
        {
            let new = (other.0.clone(), q1.clone(), s.clone(), other.3.clone());
            self.add_h(new, HProv::Concat { first: other, second: key.clone() });
        }
        // single-sided word extensions
        for x in self.w_by_right.get(&q).cloned().unwrap_or_default() {
            let new = (x.clone(), q1.clone(), s.clone(), s1.clone());
            self.add_h(new, HProv::LeftPre { word: (x, q.clone()), pair: key.clone() });
        }
        for x in self.w_by_left.get(&q1).cloned().unwrap_or_default() {
            let new = (q.clone(), x.clone(), s.clone(), s1.clone());
            self.add_h(new, HProv::LeftPost { pair: key.clone(), word: (q1.clone(), x) });
        }
        for x in self.w_by_right.get(&s).cloned().unwrap_or_default() {
            let new = (q.clone(), q1.clone(), x.clone(), s1.clone());
            self.add_h(new, HProv::RightPre { word: (x, s.clone()), pair: key.clone() });
        }
        for x in self.w_by_left.get(&s1).cloned().unwrap_or_default() {
            let new = (q.clone(), q1.clone(), s.clone(), x.clone());
            self.add_h(new, HProv::RightPost { pair: key.clone(), word: (s1.clone(), x) });
        }
        // wave closure: wrap this pair with four boundary transitions
        let letters = self.letters.clone();
        let mut found: Vec<(HKey<M::Q>, [usize; 4])> = Vec::new();
        if let Some(ccs) = self.cc_by_target.get(&q).cloned() {
            for (q0, ai) in ccs {
                let cc = (&q0, letters[ai].as_str(), &q);
                for (bi, b) in letters.iter().enumerate() {
                    for q3 in self.machine.rc_steps(&q1, cc, b) {
                        let rc = (&q1, b.as_str(), &q3);
                        for r0 in &self.states {
                            for (ci, c) in letters.iter().enumerate() {
                                for r1 in self.machine.cr_steps(r0, cc, rc, c) {
                                    if r1 != s {
                                        continue;
                                    }
                                    let cr = (r0, c.as_str(), &r1);
                                    for (di, d) in letters.iter().enumerate() {
                                        for r3 in
                                            self.machine.rr_steps(&s1, cc, rc, cr, d)
                                        {
                                            found.push((
                                                (
                                                    q0.clone(),
                                                    q3.clone(),
                                                    r0.clone(),
                                                    r3,
                                                ),
                                                [ai, bi, ci, di],
                                            ));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for (new, ls) in found {
            self.add_h(new, HProv::Wave { inner: key.clone(), letters: ls });
        }
    }

    fn typed(&self, letter: usize, kind: WaveKind) -> TypedLetter {
        TypedLetter { base: self.letters[letter].clone(), kind }
    }

    fn build_w(&self, key: &WKey<M::Q>) -> Vec<TypedLetter> {
        match &self.w[key] {
            WProv::Eps => Vec::new(),
            WProv::Int { letter } => alloc::vec![self.typed(*letter, WaveKind::Internal)],
            WProv::Concat { left, right } => {
                let mut out = self.build_w(left);
                out.extend(self.build_w(right));
                out
            }
            WProv::Wrap { pair, inner } => {
                let (x, y) = self.build_h(pair);
                let mut out = x;
                out.extend(self.build_w(inner));
                out.extend(y);
                out
            }
        }
    }

    fn build_h(&self, key: &HKey<M::Q>) -> (Vec<TypedLetter>, Vec<TypedLetter>) {
        match &self.h[key] {
            HProv::Eps => (Vec::new(), Vec::new()),
            HProv::Concat { first, second } => {
                let (x1, y1) = self.build_h(first);
                let (x2, y2) = self.build_h(second);
                let mut left = x1;
                left.extend(x2);
                let mut right = y2;
                right.extend(y1);
                (left, right)
            }
            HProv::LeftPre { word, pair } => {
                let (x, y) = self.build_h(pair);
                let mut left = self.build_w(word);
                left.extend(x);
                (left, y)
            }
            HProv::LeftPost { pair, word } => {
                let (mut x, y) = self.build_h(pair);
                x.extend(self.build_w(word));
                (x, y)
            }
            HProv::RightPre { word, pair } => {
                let (x, y) = self.build_h(pair);
                let mut right = self.build_w(word);
                right.extend(y);
                (x, right)
            }
            HProv::RightPost { pair, word } => {
                let (x, mut y) = self.build_h(pair);
                y.extend(self.build_w(word));
                (x, y)
            }
            HProv::Wave { inner, letters } => {
                let (x, y) = self.build_h(inner);
                let mut left = alloc::vec![self.typed(letters[0], WaveKind::CC)];
                left.extend(x);
                left.push(self.typed(letters[1], WaveKind::RC));
                let mut right = alloc::vec![self.typed(letters[2], WaveKind::CR)];
                right.extend(y);
                right.push(self.typed(letters[3], WaveKind::RR));
                (left, right)
            }
        }
    }

    fn witness(&self) -> Option<NestedWord2> {
        let key = self.hit.as_ref()?;
        let typed = self.build_w(key);
        Some(from_typed(&typed).expect("saturation builds well-typed words"))
    }
}

/// Runs the saturation and returns a witness wave word accepted by the
/// machine, or `None` when its wave-word language is empty.
fn saturate<M: SatMachine>(machine: &M, stop_on_hit: bool) -> Option<NestedWord2> {
    let mut engine = Engine::new(machine, stop_on_hit);
    engine.run();
    engine.witness()
}

// ---------------------------------------------------------------------------
// machines

/// A post-form automaton as a saturation machine.
pub struct PostMachine<'a> {
    aut: &'a Automaton2NW,
    letter_ids: BTreeMap<String, LetterId>,
    int: BTreeMap<(StateId, LetterId), Vec<StateId>>,
    cc: BTreeMap<(StateId, LetterId), Vec<StateId>>,
    rc: BTreeMap<(StateId, StateId, LetterId), Vec<StateId>>,
    cr: BTreeMap<(StateId, StateId, LetterId), Vec<StateId>>,
    rr: BTreeMap<(StateId, StateId, StateId, LetterId), Vec<StateId>>,
}

impl<'a> PostMachine<'a> {
    /// The automaton must already be in post form.
    pub fn new(aut: &'a Automaton2NW) -> Self {
        assert!(aut.is_post_form(), "saturation needs a post-form automaton");
        let h2s = aut.hier_to_state();
        let mut m = PostMachine {
            aut,
            letter_ids: aut
                .alphabet()
                .iter()
                .enumerate()
                .map(|(i, l)| (l.clone(), i))
                .collect(),
            int: BTreeMap::new(),
            cc: BTreeMap::new(),
            rc: BTreeMap::new(),
            cr: BTreeMap::new(),
            rr: BTreeMap::new(),
        };
        for t in aut.family(Kind::II) {
            m.int.entry((t.src, t.letter)).or_default().push(t.dst);
        }
        for t in aut.family(Kind::CC) {
            m.cc.entry((t.src, t.letter)).or_default().push(t.dst);
        }
        for t in aut.family(Kind::RC) {
            m.rc.entry((t.src, h2s[t.hin[0]], t.letter)).or_default().push(t.dst);
        }
        for t in aut.family(Kind::CR) {
            m.cr.entry((t.src, h2s[t.hin[0]], t.letter)).or_default().push(t.dst);
        }
        for t in aut.family(Kind::RR) {
            m.rr.entry((t.src, h2s[t.hin[0]], h2s[t.hin[1]], t.letter))
                .or_default()
                .push(t.dst);
        }
        m
    }

    fn lid(&self, a: &str) -> Option<LetterId> {
        self.letter_ids.get(a).copied()
    }
}

impl<'a> SatMachine for PostMachine<'a> {
    type Q = StateId;

    fn states(&self) -> Vec<StateId> {
        (0..self.aut.states().len()).collect()
    }

    fn letters(&self) -> Vec<String> {
        self.aut.alphabet().to_vec()
    }

    fn initials(&self) -> Vec<StateId> {
        self.aut.initial().iter().copied().collect()
    }

    fn is_final(&self, q: &StateId) -> bool {
        self.aut.finals().contains(q)
    }

    fn int_steps(&self, q: &StateId, a: &str) -> Vec<StateId> {
        self.lid(a)
            .and_then(|a| self.int.get(&(*q, a)).cloned())
            .unwrap_or_default()
    }

    fn cc_steps(&self, q: &StateId, a: &str) -> Vec<StateId> {
        self.lid(a)
            .and_then(|a| self.cc.get(&(*q, a)).cloned())
            .unwrap_or_default()
    }

    fn rc_steps(&self, q: &StateId, cc: Ctx<'_, StateId>, a: &str) -> Vec<StateId> {
        // the popped label is the state reached after the call-call
        self.lid(a)
            .and_then(|a| self.rc.get(&(*q, *cc.2, a)).cloned())
            .unwrap_or_default()
    }

    fn cr_steps(
        &self,
        q: &StateId,
        _cc: Ctx<'_, StateId>,
        rc: Ctx<'_, StateId>,
        a: &str,
    ) -> Vec<StateId> {
        self.lid(a)
            .and_then(|a| self.cr.get(&(*q, *rc.2, a)).cloned())
            .unwrap_or_default()
    }

    fn rr_steps(
        &self,
        q: &StateId,
        cc: Ctx<'_, StateId>,
        _rc: Ctx<'_, StateId>,
        cr: Ctx<'_, StateId>,
        a: &str,
    ) -> Vec<StateId> {
        self.lid(a)
            .and_then(|a| self.rr.get(&(*q, *cr.2, *cc.2, a)).cloned())
            .unwrap_or_default()
    }
}

/// A determinized automaton as a saturation machine; steps have at most one
/// successor and payloads are rebuilt from the context triples.
pub struct DetMachine<'a> {
    det: &'a DetAutomaton,
}

impl<'a> DetMachine<'a> {
    pub fn new(det: &'a DetAutomaton) -> Self {
        DetMachine { det }
    }

    fn lid(&self, a: &str) -> Option<LetterId> {
        self.det.letter_id(a)
    }
}

impl<'a> SatMachine for DetMachine<'a> {
    type Q = DetStateId;

    fn states(&self) -> Vec<DetStateId> {
        (0..self.det.state_count()).collect()
    }

    fn letters(&self) -> Vec<String> {
        self.det.alphabet().to_vec()
    }

    fn initials(&self) -> Vec<DetStateId> {
        alloc::vec![self.det.initial()]
    }

    fn is_final(&self, q: &DetStateId) -> bool {
        self.det.is_final(*q)
    }

    fn int_steps(&self, q: &DetStateId, a: &str) -> Vec<DetStateId> {
        self.lid(a)
            .and_then(|a| self.det.step_int(*q, a))
            .into_iter()
            .collect()
    }

    fn cc_steps(&self, q: &DetStateId, a: &str) -> Vec<DetStateId> {
        self.lid(a)
            .and_then(|a| self.det.step_cc(*q, a))
            .into_iter()
            .collect()
    }

    fn rc_steps(&self, q: &DetStateId, cc: Ctx<'_, DetStateId>, a: &str) -> Vec<DetStateId> {
        let step = || {
            let a1 = self.lid(cc.1)?;
            let a = self.lid(a)?;
            self.det.step_rc(*q, (*cc.0, a1), a)
        };
        step().into_iter().collect()
    }

    fn cr_steps(
        &self,
        q: &DetStateId,
        cc: Ctx<'_, DetStateId>,
        rc: Ctx<'_, DetStateId>,
        a: &str,
    ) -> Vec<DetStateId> {
        let step = || {
            let a1 = self.lid(cc.1)?;
            let a2 = self.lid(rc.1)?;
            let a = self.lid(a)?;
            self.det.step_cr(*q, (*cc.0, a1, *rc.0, a2), a)
        };
        step().into_iter().collect()
    }

    fn rr_steps(
        &self,
        q: &DetStateId,
        cc: Ctx<'_, DetStateId>,
        rc: Ctx<'_, DetStateId>,
        cr: Ctx<'_, DetStateId>,
        a: &str,
    ) -> Vec<DetStateId> {
        let step = || {
            let a1 = self.lid(cc.1)?;
            let a2 = self.lid(rc.1)?;
            let a3 = self.lid(cr.1)?;
            let a = self.lid(a)?;
            self.det
                .step_rr(*q, (*rc.0, a2, *cr.0, a3), (*cc.0, a1), a)
        };
        step().into_iter().collect()
    }
}

/// Product of two machines: runs both in lockstep, accepting intersections.
pub struct ProductMachine<'x, X: SatMachine, Y: SatMachine> {
    x: &'x X,
    y: &'x Y,
}

impl<'x, X: SatMachine, Y: SatMachine> ProductMachine<'x, X, Y> {
    pub fn new(x: &'x X, y: &'x Y) -> Self {
        ProductMachine { x, y }
    }
}

macro_rules! product_pairs {
    ($xs:expr, $ys:expr) => {{
        let ys = $ys;
        $xs.into_iter()
            .flat_map(move |a| ys.clone().into_iter().map(move |b| (a.clone(), b)))
            .collect()
    }};
}

impl<'x, X: SatMachine, Y: SatMachine> SatMachine for ProductMachine<'x, X, Y> {
    type Q = (X::Q, Y::Q);

    fn states(&self) -> Vec<Self::Q> {
        product_pairs!(self.x.states(), self.y.states())
    }

    fn letters(&self) -> Vec<String> {
        let mut out = self.x.letters();
        for l in self.y.letters() {
            if !out.contains(&l) {
                out.push(l);
            }
        }
        out
    }

    fn initials(&self) -> Vec<Self::Q> {
        product_pairs!(self.x.initials(), self.y.initials())
    }

    fn is_final(&self, q: &Self::Q) -> bool {
        self.x.is_final(&q.0) && self.y.is_final(&q.1)
    }

    fn int_steps(&self, q: &Self::Q, a: &str) -> Vec<Self::Q> {
        product_pairs!(self.x.int_steps(&q.0, a), self.y.int_steps(&q.1, a))
    }

    fn cc_steps(&self, q: &Self::Q, a: &str) -> Vec<Self::Q> {
        product_pairs!(self.x.cc_steps(&q.0, a), self.y.cc_steps(&q.1, a))
    }

    fn rc_steps(&self, q: &Self::Q, cc: Ctx<'_, Self::Q>, a: &str) -> Vec<Self::Q> {
        product_pairs!(
            self.x.rc_steps(&q.0, (&cc.0 .0, cc.1, &cc.2 .0), a),
            self.y.rc_steps(&q.1, (&cc.0 .1, cc.1, &cc.2 .1), a)
        )
    }

    fn cr_steps(
        &self,
        q: &Self::Q,
        cc: Ctx<'_, Self::Q>,
        rc: Ctx<'_, Self::Q>,
        a: &str,
    ) -> Vec<Self::Q> {
        product_pairs!(
            self.x
                .cr_steps(&q.0, (&cc.0 .0, cc.1, &cc.2 .0), (&rc.0 .0, rc.1, &rc.2 .0), a),
            self.y
                .cr_steps(&q.1, (&cc.0 .1, cc.1, &cc.2 .1), (&rc.0 .1, rc.1, &rc.2 .1), a)
        )
    }

    fn rr_steps(
        &self,
        q: &Self::Q,
        cc: Ctx<'_, Self::Q>,
        rc: Ctx<'_, Self::Q>,
        cr: Ctx<'_, Self::Q>,
        a: &str,
    ) -> Vec<Self::Q> {
        product_pairs!(
            self.x.rr_steps(
                &q.0,
                (&cc.0 .0, cc.1, &cc.2 .0),
                (&rc.0 .0, rc.1, &rc.2 .0),
                (&cr.0 .0, cr.1, &cr.2 .0),
                a
            ),
            self.y.rr_steps(
                &q.1,
                (&cc.0 .1, cc.1, &cc.2 .1),
                (&rc.0 .1, rc.1, &rc.2 .1),
                (&cr.0 .1, cr.1, &cr.2 .1),
                a
            )
        )
    }
}

// ---------------------------------------------------------------------------
// public decision procedures

/// Full saturation tables of a post-form automaton, for inspection and
/// cross-checking.
pub fn saturate_post(aut: &Automaton2NW) -> SaturationTables {
    let machine = PostMachine::new(aut);
    let mut engine = Engine::new(&machine, false);
    engine.run();
    SaturationTables {
        w: engine.w.keys().cloned().collect(),
        h: engine.h.keys().cloned().collect(),
    }
}

/// Is the wave-word language empty? Returns a witness when it is not.
pub fn emptiness(aut: &Automaton2NW) -> Option<NestedWord2> {
    let post = aut.to_post_form();
    let machine = PostMachine::new(&post);
    saturate(&machine, true)
}

/// Does the automaton accept every wave word over its alphabet? Returns a
/// counterexample when it does not.
pub fn universality(aut: &Automaton2NW) -> Result<Option<NestedWord2>, DecideError> {
    let det = determinize::determinize(aut)?;
    let comp = det.complement();
    let machine = DetMachine::new(&comp);
    Ok(saturate(&machine, true))
}

/// Wave-word language inclusion; returns a word accepted by `a` but not `b`.
pub fn inclusion(a: &Automaton2NW, b: &Automaton2NW) -> Result<Option<NestedWord2>, DecideError> {
    let post = a.to_post_form();
    let det = determinize::determinize_with(
        b,
        post.alphabet(),
        determinize::DEFAULT_STATE_BUDGET,
    )?;
    let comp = det.complement();
    let left = PostMachine::new(&post);
    let right = DetMachine::new(&comp);
    let machine = ProductMachine::new(&left, &right);
    Ok(saturate(&machine, true))
}

/// Inclusion of the language of a determinized automaton in that of `b`.
pub fn inclusion_det(
    d: &DetAutomaton,
    b: &Automaton2NW,
) -> Result<Option<NestedWord2>, DecideError> {
    let det_b =
        determinize::determinize_with(b, d.alphabet(), determinize::DEFAULT_STATE_BUDGET)?;
    let comp = det_b.complement();
    let left = DetMachine::new(d);
    let right = DetMachine::new(&comp);
    let machine = ProductMachine::new(&left, &right);
    Ok(saturate(&machine, true))
}

/// Wave-word language equivalence; returns a separating word if any.
pub fn equivalence(
    a: &Automaton2NW,
    b: &Automaton2NW,
) -> Result<Option<NestedWord2>, DecideError> {
    if let Some(w) = inclusion(a, b)? {
        return Ok(Some(w));
    }
    inclusion(b, a)
}

/// Inclusion of the language of `a` in that of a determinized automaton
/// whose alphabet covers `a`'s.
pub fn inclusion_in_det(
    a: &Automaton2NW,
    d: &DetAutomaton,
) -> Result<Option<NestedWord2>, DecideError> {
    let post = a.to_post_form();
    let comp = d.complement();
    let left = PostMachine::new(&post);
    let right = DetMachine::new(&comp);
    let machine = ProductMachine::new(&left, &right);
    Ok(saturate(&machine, true))
}

/// Equivalence of an automaton with a determinized automaton over the same
/// alphabet.
pub fn equivalence_det(
    a: &Automaton2NW,
    d: &DetAutomaton,
) -> Result<Option<NestedWord2>, DecideError> {
    if let Some(w) = inclusion_in_det(a, d)? {
        return Ok(Some(w));
    }
    inclusion_det(d, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::fixtures::a_ex;
    use crate::automaton::NamedTransition;
    use alloc::string::ToString;
    use alloc::vec::Vec;

    #[test]
    fn a_ex_is_nonempty_with_the_minimal_wave_witness() {
        let w = emptiness(&a_ex()).expect("nonempty");
        assert_eq!(w.letters().join(""), "abcd");
        assert_eq!(w.m1().pairs(), &[(1, 2), (3, 4)]);
        assert_eq!(w.m2().pairs(), &[(1, 4), (2, 3)]);
        assert!(a_ex().accepts_bruteforce(&w).unwrap().is_some());
    }

    #[test]
    fn no_final_states_means_empty() {
        let mut a = a_ex();
        // rebuild without final states
        let b = Automaton2NW::new(
            a.states().to_vec(),
            alloc::vec!["qa".into()],
            alloc::vec![],
            a.hier().to_vec(),
            a.alphabet().to_vec(),
            alloc::vec![],
        )
        .unwrap();
        a = b;
        assert!(emptiness(&a).is_none());
    }

    #[test]
    fn saturation_w_reflects_runs() {
        let a = a_ex();
        let tables = saturate_post(&a);
        let qa = a.state_id("qa").unwrap();
        let qd = a.state_id("qd").unwrap();
        assert!(tables.w.contains(&(qa, qd)));
        // qb never reaches qa over a wave word
        let qb = a.state_id("qb").unwrap();
        assert!(!tables.w.contains(&(qb, qa)));
    }

    #[test]
    fn universality_of_a_total_automaton() {
        let q = "q".to_string();
        let mut ts = Vec::new();
        for l in ["a", "b"] {
            for (kind, hin, hout) in [
                (Kind::II, 0, 0),
                (Kind::CC, 0, 2),
                (Kind::RC, 1, 1),
                (Kind::CR, 1, 1),
                (Kind::RR, 2, 0),
            ] {
                ts.push(NamedTransition {
                    kind,
                    src: q.clone(),
                    hin: alloc::vec![q.clone(); hin],
                    letter: l.into(),
                    hout: alloc::vec![q.clone(); hout],
                    dst: q.clone(),
                });
            }
        }
        let total = Automaton2NW::new(
            alloc::vec![q.clone()],
            alloc::vec![q.clone()],
            alloc::vec![q.clone()],
            alloc::vec![q.clone()],
            alloc::vec!["a".into(), "b".into()],
            ts,
        )
        .unwrap();
        assert!(universality(&total).unwrap().is_none());
        // a_ex misses plenty of wave words
        let cex = universality(&a_ex()).unwrap().expect("not universal");
        assert!(cex.is_wave_word());
        assert!(a_ex().accepts_bruteforce(&cex).unwrap().is_none());
    }

    #[test]
    fn inclusion_in_a_sum_holds() {
        let a = a_ex();
        let sum = a.sum(&a);
        assert!(inclusion(&a, &sum).unwrap().is_none());
        assert!(inclusion(&sum, &a).unwrap().is_none());
    }

    #[test]
    fn equivalence_with_own_determinization() {
        let a = a_ex();
        let d = determinize::determinize(&a).unwrap();
        assert!(equivalence_det(&a, &d).unwrap().is_none());
    }
}
