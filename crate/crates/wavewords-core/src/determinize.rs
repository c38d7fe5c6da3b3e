//! Determinization of a post-form automaton over wave words.
//!
//! States of the deterministic automaton are sets of triples (upper
//! reference, lower reference, current state). The upper reference is a
//! single state while reading the surface of a first top arch and a state
//! triple while reading the surface of a second top arch; the lower
//! reference records the state labelling the innermost open support or
//! bottom arch. Hierarchical states are the pushing state paired with the
//! read letter (for the arches opened at call-calls) or two such pairs (for
//! the arches opened at return-call and call-return positions).
//!
//! The construction is lazy: states, call payloads and transition entries
//! are only materialized for combinations reachable along wave words, which
//! keeps the table sizes proportional to what deterministic runs can query.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::automaton::{Automaton2NW, LetterId, StateId};
use crate::kind::Kind;
use crate::word::NestedWord2;

/// Upper reference: the state after the call of the covering first top arch,
/// or the three states after the wave boundary positions crossed so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RefUpper {
    One(StateId),
    Three(StateId, StateId, StateId),
}

impl RefUpper {
    /// Sequence prefix order used when reconciling the two top arches.
    pub fn prefix_of(&self, other: &RefUpper) -> bool {
        match (self, other) {
            (RefUpper::One(a), RefUpper::One(b)) => a == b,
            (RefUpper::One(a), RefUpper::Three(x, _, _)) => a == x,
            (RefUpper::Three(..), RefUpper::One(_)) => false,
            (RefUpper::Three(a, b, c), RefUpper::Three(x, y, z)) => (a, b, c) == (x, y, z),
        }
    }

    pub fn is_long(&self) -> bool {
        matches!(self, RefUpper::Three(..))
    }
}

/// One tracked possibility: upper reference, lower reference, current state.
pub type Triple = (RefUpper, StateId, StateId);

/// A deterministic state: a canonical sorted set of triples sharing the
/// upper-reference length.
pub type TripleSet = Vec<Triple>;

pub type DetStateId = usize;
pub type PayloadId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DetError {
    StateBudgetExceeded { budget: usize },
    NotWaveWord,
    UnknownLetter { letter: String },
}

impl fmt::Display for DetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DetError::StateBudgetExceeded { budget } => {
                write!(f, "deterministic state budget {} exceeded", budget)
            }
            DetError::NotWaveWord => write!(f, "input is not a 2-wave word"),
            DetError::UnknownLetter { letter } => write!(f, "unknown letter {:?}", letter),
        }
    }
}

/// Default cap on the number of deterministic states.
pub const DEFAULT_STATE_BUDGET: usize = 1_000_000;

/// Post-form transition lookup tables of the source automaton.
struct PostView {
    int: BTreeMap<(StateId, LetterId), Vec<StateId>>,
    cc: BTreeMap<(StateId, LetterId), Vec<StateId>>,
    rc: BTreeMap<(StateId, StateId, LetterId), Vec<StateId>>,
    cr: BTreeMap<(StateId, StateId, LetterId), Vec<StateId>>,
    rr: BTreeMap<(StateId, StateId, StateId, LetterId), Vec<StateId>>,
}

impl PostView {
    fn new(aut: &Automaton2NW) -> Self {
        assert!(aut.is_post_form(), "determinization needs a post-form source");
        let h2s = aut.hier_to_state();
        let mut view = PostView {
            int: BTreeMap::new(),
            cc: BTreeMap::new(),
            rc: BTreeMap::new(),
            cr: BTreeMap::new(),
            rr: BTreeMap::new(),
        };
        for t in aut.family(Kind::II) {
            view.int.entry((t.src, t.letter)).or_default().push(t.dst);
        }
        for t in aut.family(Kind::CC) {
            view.cc.entry((t.src, t.letter)).or_default().push(t.dst);
        }
        for t in aut.family(Kind::RC) {
            view.rc.entry((t.src, h2s[t.hin[0]], t.letter)).or_default().push(t.dst);
        }
        for t in aut.family(Kind::CR) {
            view.cr.entry((t.src, h2s[t.hin[0]], t.letter)).or_default().push(t.dst);
        }
        for t in aut.family(Kind::RR) {
            view.rr
                .entry((t.src, h2s[t.hin[0]], h2s[t.hin[1]], t.letter))
                .or_default()
                .push(t.dst);
        }
        view
    }
}

/// The determinized automaton, immutable once built.
#[derive(Debug, Clone)]
pub struct DetAutomaton {
    source_states: Vec<String>,
    source_finals: BTreeSet<StateId>,
    alphabet: Vec<String>,
    states: Vec<TripleSet>,
    initial: DetStateId,
    finals: BTreeSet<DetStateId>,
    /// payloads pushed at call-call positions: (state before, letter)
    pay1: Vec<(DetStateId, LetterId)>,
    pay1_ids: BTreeMap<(DetStateId, LetterId), PayloadId>,
    /// payloads pushed at return-call and call-return positions: two
    /// (state before, letter) pairs
    pay2: Vec<(DetStateId, LetterId, DetStateId, LetterId)>,
    pay2_ids: BTreeMap<(DetStateId, LetterId, DetStateId, LetterId), PayloadId>,
    int_map: BTreeMap<(DetStateId, LetterId), DetStateId>,
    cc_map: BTreeMap<(DetStateId, LetterId), DetStateId>,
    rc_map: BTreeMap<(DetStateId, PayloadId, LetterId), DetStateId>,
    cr_map: BTreeMap<(DetStateId, PayloadId, LetterId), DetStateId>,
    rr_map: BTreeMap<(DetStateId, PayloadId, PayloadId, LetterId), DetStateId>,
}

struct Builder {
    view: PostView,
    finals: BTreeSet<StateId>,
    letters: usize,
    budget: usize,
    state_ids: BTreeMap<TripleSet, DetStateId>,
    out: DetAutomaton,
    /// without-pending-arch reachability: (s, t) present when some balanced
    /// factor leads from s to t
    w: BTreeSet<(DetStateId, DetStateId)>,
    w_by_left: BTreeMap<DetStateId, BTreeSet<DetStateId>>,
    w_by_right: BTreeMap<DetStateId, BTreeSet<DetStateId>>,
    /// matched-pair reachability: (l0, l1, r0, r1) present when some pair of
    /// matched factors runs l0 -> l1 on the left and r0 -> r1 on the right
    h: BTreeSet<Quad>,
    h_by_left_start: BTreeMap<DetStateId, BTreeSet<Quad>>,
    h_by_left_end: BTreeMap<DetStateId, BTreeSet<Quad>>,
    h_by_right_start: BTreeMap<DetStateId, BTreeSet<Quad>>,
    h_by_right_end: BTreeMap<DetStateId, BTreeSet<Quad>>,
    h_by_middle: BTreeMap<(DetStateId, DetStateId), BTreeSet<Quad>>,
    h_by_starts: BTreeMap<(DetStateId, DetStateId), BTreeSet<Quad>>,
    h_by_ends: BTreeMap<(DetStateId, DetStateId), BTreeSet<Quad>>,
    /// call payloads indexed by their call-step successor
    cc_by_succ: BTreeMap<DetStateId, BTreeSet<PayloadId>>,
    /// wave-closure instances that have performed their return-call step and
    /// wait to be combined with every candidate call-return source state
    partials: Vec<Partial>,
    partials_done: BTreeSet<Partial>,
    /// number of states already combined with every partial
    states_joined: usize,
    agenda: VecDeque<Event>,
}

/// A wave closure in progress: the inner pair, the call payload, the letter
/// of the return-call step and the pair payload it pushed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Partial {
    quad: Quad,
    p: PayloadId,
    h: PayloadId,
}

type Quad = (DetStateId, DetStateId, DetStateId, DetStateId);

#[derive(Debug, Clone, Copy)]
enum Event {
    State(DetStateId),
    W(DetStateId, DetStateId),
    H(Quad),
    CcPay(DetStateId, PayloadId),
}

impl Builder {
    fn intern_state(&mut self, mut triples: TripleSet) -> Result<DetStateId, DetError> {
        triples.sort_unstable();
        triples.dedup();
        debug_assert!(
            triples.iter().all(|t| t.0.is_long()) || triples.iter().all(|t| !t.0.is_long()),
            "triple sets never mix upper-reference lengths"
        );
        if let Some(&id) = self.state_ids.get(&triples) {
            return Ok(id);
        }
        if self.out.states.len() >= self.budget {
            return Err(DetError::StateBudgetExceeded { budget: self.budget });
        }
        let id = self.out.states.len();
        if triples.iter().any(|&(_, _, q)| self.finals.contains(&q)) {
            self.out.finals.insert(id);
        }
        self.state_ids.insert(triples.clone(), id);
        self.out.states.push(triples);
        self.agenda.push_back(Event::State(id));
        Ok(id)
    }

    fn intern_pay1(&mut self, s: DetStateId, a: LetterId) -> PayloadId {
        if let Some(&id) = self.out.pay1_ids.get(&(s, a)) {
            return id;
        }
        let id = self.out.pay1.len();
        self.out.pay1_ids.insert((s, a), id);
        self.out.pay1.push((s, a));
        id
    }

    fn intern_pay2(
        &mut self,
        s: DetStateId,
        a: LetterId,
        t: DetStateId,
        b: LetterId,
    ) -> PayloadId {
        if let Some(&id) = self.out.pay2_ids.get(&(s, a, t, b)) {
            return id;
        }
        let id = self.out.pay2.len();
        self.out.pay2_ids.insert((s, a, t, b), id);
        self.out.pay2.push((s, a, t, b));
        id
    }

    fn add_w(&mut self, s: DetStateId, t: DetStateId) {
        if self.w.insert((s, t)) {
            self.w_by_left.entry(s).or_default().insert(t);
            self.w_by_right.entry(t).or_default().insert(s);
            self.agenda.push_back(Event::W(s, t));
        }
    }

    fn add_h(&mut self, quad: Quad) {
        if self.h.insert(quad) {
            let (l0, l1, r0, r1) = quad;
            self.h_by_left_start.entry(l0).or_default().insert(quad);
            self.h_by_left_end.entry(l1).or_default().insert(quad);
            self.h_by_right_start.entry(r0).or_default().insert(quad);
            self.h_by_right_end.entry(r1).or_default().insert(quad);
            self.h_by_middle.entry((l1, r0)).or_default().insert(quad);
            self.h_by_starts.entry((l0, r0)).or_default().insert(quad);
            self.h_by_ends.entry((l1, r1)).or_default().insert(quad);
            self.agenda.push_back(Event::H(quad));
        }
    }

    fn delta_int(&self, s: DetStateId, a: LetterId) -> TripleSet {
        let mut out = Vec::new();
        for &(up, low, q) in &self.out.states[s] {
            if let Some(dsts) = self.view.int.get(&(q, a)) {
                for &q2 in dsts {
                    out.push((up, low, q2));
                }
            }
        }
        out
    }

    fn delta_cc(&self, s: DetStateId, a: LetterId) -> TripleSet {
        let mut out = Vec::new();
        for &(_, _, q1) in &self.out.states[s] {
            if let Some(dsts) = self.view.cc.get(&(q1, a)) {
                for &q1p in dsts {
                    out.push((RefUpper::One(q1p), q1p, q1p));
                }
            }
        }
        out
    }

    /// Return-call successor set: pops the payload of the matching call-call
    /// step and reconciles against it.
    fn delta_rc(&self, s2: DetStateId, p: PayloadId, a2: LetterId) -> TripleSet {
        let (s1, a1) = self.out.pay1[p];
        let mut out = Vec::new();
        for &(r1, _r0, q1) in &self.out.states[s1] {
            let Some(q1ps) = self.view.cc.get(&(q1, a1)) else { continue };
            for &q1p in q1ps {
                for &(up2, _r2, q2) in &self.out.states[s2] {
                    if up2 != RefUpper::One(q1p) {
                        continue;
                    }
                    let Some(q2ps) = self.view.rc.get(&(q2, q1p, a2)) else { continue };
                    for &q2p in q2ps {
                        out.push((r1, q2p, q2p));
                    }
                }
            }
        }
        out
    }

    /// Call-return successor set: replays the call-call and return-call
    /// bindings recorded in the popped pair payload.
    fn delta_cr(&self, s3: DetStateId, h: PayloadId, a3: LetterId) -> TripleSet {
        let (s1, a1, s2, a2) = self.out.pay2[h];
        let mut out = Vec::new();
        for &(r1, _r0, q1) in &self.out.states[s1] {
            let Some(q1ps) = self.view.cc.get(&(q1, a1)) else { continue };
            for &q1p in q1ps {
                for &(up2, r2, q2) in &self.out.states[s2] {
                    if up2 != RefUpper::One(q1p) {
                        continue;
                    }
                    let Some(q2ps) = self.view.rc.get(&(q2, q1p, a2)) else { continue };
                    for &q2p in q2ps {
                        for &(r3, low3, q3) in &self.out.states[s3] {
                            if low3 != q2p || !r1.prefix_of(&r3) {
                                continue;
                            }
                            let Some(q3ps) = self.view.cr.get(&(q3, q2p, a3)) else {
                                continue;
                            };
                            for &q3p in q3ps {
                                out.push((RefUpper::Three(q1p, q2p, q3p), r2, q3p));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn delta_rr(
        &self,
        s4: DetStateId,
        hcr: PayloadId,
        p: PayloadId,
        a4: LetterId,
    ) -> TripleSet {
        // the call-return payload carries (s2, a2, s3, a3); the call-call
        // payload carries (s1, a1)
        let (s2, a2, s3, a3) = self.out.pay2[hcr];
        let (s1, a1) = self.out.pay1[p];
        let mut out = Vec::new();
        for &(r1, r0, q1) in &self.out.states[s1] {
            let Some(q1ps) = self.view.cc.get(&(q1, a1)) else { continue };
            for &q1p in q1ps {
                for &(up2, _r2, q2) in &self.out.states[s2] {
                    if up2 != RefUpper::One(q1p) {
                        continue;
                    }
                    let Some(q2ps) = self.view.rc.get(&(q2, q1p, a2)) else { continue };
                    for &q2p in q2ps {
                        for &(r3, low3, q3) in &self.out.states[s3] {
                            if low3 != q2p || !r1.prefix_of(&r3) {
                                continue;
                            }
                            let Some(q3ps) = self.view.cr.get(&(q3, q2p, a3)) else {
                                continue;
                            };
                            for &q3p in q3ps {
                                let want = RefUpper::Three(q1p, q2p, q3p);
                                for &(up4, low4, q4) in &self.out.states[s4] {
                                    if up4 != want || low4 != q1p {
                                        continue;
                                    }
                                    let Some(q4ps) =
                                        self.view.rr.get(&(q4, q3p, q1p, a4))
                                    else {
                                        continue;
                                    };
                                    for &q4p in q4ps {
                                        out.push((r3, r0, q4p));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn run_to_fixpoint(&mut self) -> Result<(), DetError> {
        loop {
            while let Some(event) = self.agenda.pop_front() {
                match event {
                    Event::State(s) => {
                        self.add_w(s, s);
                        for t in 0..self.out.states.len() {
                            self.add_h((s, s, t, t));
                            self.add_h((t, t, s, s));
                        }
                        // internal and call steps are total per state
                        for a in 0..self.letters {
                            let n = self.intern_state(self.delta_int(s, a))?;
                            self.out.int_map.insert((s, a), n);
                            let n = self.intern_state(self.delta_cc(s, a))?;
                            self.out.cc_map.insert((s, a), n);
                            let p = self.intern_pay1(s, a);
                            if self.cc_by_succ.entry(n).or_default().insert(p) {
                                self.agenda.push_back(Event::CcPay(n, p));
                            }
                        }
                    }
                    Event::W(s, t) => {
                        for a in 0..self.letters {
                            if let Some(&n) = self.out.int_map.get(&(t, a)) {
                                self.add_w(s, n);
                            }
                        }
                        for u in self.w_by_left.get(&t).cloned().unwrap_or_default() {
                            self.add_w(s, u);
                        }
                        for r in self.w_by_right.get(&s).cloned().unwrap_or_default() {
                            self.add_w(r, t);
                        }
                        // wrapping: this pair is the middle of a matched pair
                        for quad in
                            self.h_by_middle.get(&(s, t)).cloned().unwrap_or_default()
                        {
                            self.add_w(quad.0, quad.3);
                        }
                        // factor extensions of matched pairs
                        for quad in
                            self.h_by_left_start.get(&t).cloned().unwrap_or_default()
                        {
                            self.add_h((s, quad.1, quad.2, quad.3));
                        }
                        for quad in
                            self.h_by_left_end.get(&s).cloned().unwrap_or_default()
                        {
                            self.add_h((quad.0, t, quad.2, quad.3));
                        }
                        for quad in
                            self.h_by_right_start.get(&t).cloned().unwrap_or_default()
                        {
                            self.add_h((quad.0, quad.1, s, quad.3));
                        }
                        for quad in
                            self.h_by_right_end.get(&s).cloned().unwrap_or_default()
                        {
                            self.add_h((quad.0, quad.1, quad.2, t));
                        }
                    }
                    Event::H(quad) => {
                        let (l0, l1, r0, r1) = quad;
                        if self.w.contains(&(l1, r0)) {
                            self.add_w(l0, r1);
                        }
                        // pair concatenation in both roles
                        for other in
                            self.h_by_starts.get(&(l1, r0)).cloned().unwrap_or_default()
                        {
                            self.add_h((l0, other.1, other.2, r1));
                        }
                        for other in
                            self.h_by_ends.get(&(l0, r1)).cloned().unwrap_or_default()
                        {
                            self.add_h((other.0, l1, r0, other.3));
                        }
                        // factor extensions
                        for x in self.w_by_right.get(&l0).cloned().unwrap_or_default() {
                            self.add_h((x, l1, r0, r1));
                        }
                        for x in self.w_by_left.get(&l1).cloned().unwrap_or_default() {
                            self.add_h((l0, x, r0, r1));
                        }
                        for x in self.w_by_right.get(&r0).cloned().unwrap_or_default() {
                            self.add_h((l0, l1, x, r1));
                        }
                        for x in self.w_by_left.get(&r1).cloned().unwrap_or_default() {
                            self.add_h((l0, l1, r0, x));
                        }
                        // wave closure: this pair is the inner factor pair
                        for p in self.cc_by_succ.get(&l0).cloned().unwrap_or_default() {
                            self.launch(quad, p)?;
                        }
                    }
                    Event::CcPay(succ, p) => {
                        for quad in
                            self.h_by_left_start.get(&succ).cloned().unwrap_or_default()
                        {
                            self.launch(quad, p)?;
                        }
                    }
                }
            }
            // combine every wave-closure instance with every known state as
            // the source of the call-return step
            let joined = self.states_joined;
            let total = self.out.states.len();
            if joined == total && self.agenda.is_empty() {
                break;
            }
            for pi in 0..self.partials.len() {
                let partial = self.partials[pi];
                for t in joined..total {
                    self.combine(partial, t)?;
                }
            }
            self.states_joined = total;
        }
        Ok(())
    }

    /// Performs the return-call step of a wave closure over the inner pair
    /// `quad`, whose left factor starts at the successor of call payload `p`.
    fn launch(&mut self, quad: Quad, p: PayloadId) -> Result<(), DetError> {
        let (_, l1, _, _) = quad;
        let (s1, a1) = self.out.pay1[p];
        for b in 0..self.letters {
            if !self.out.rc_map.contains_key(&(l1, p, b)) {
                let n = self.intern_state(self.delta_rc(l1, p, b))?;
                self.out.rc_map.insert((l1, p, b), n);
            }
            let h = self.intern_pay2(s1, a1, l1, b);
            let partial = Partial { quad, p, h };
            if self.partials_done.insert(partial) {
                self.partials.push(partial);
                for t in 0..self.states_joined {
                    self.combine(partial, t)?;
                }
            }
        }
        Ok(())
    }

    /// Tries the call-return step of a wave closure from state `t`; when it
    /// rejoins the inner pair's right factor, performs the return-return
    /// step and emits the completed outer pair.
    fn combine(&mut self, partial: Partial, t: DetStateId) -> Result<(), DetError> {
        let Partial { quad, p, h } = partial;
        let (_, l1, r0, r1) = quad;
        let b = self.out.pay2[h].3;
        for c in 0..self.letters {
            let succ3 = match self.out.cr_map.get(&(t, h, c)) {
                Some(&n) => n,
                None => {
                    let n = self.intern_state(self.delta_cr(t, h, c))?;
                    self.out.cr_map.insert((t, h, c), n);
                    n
                }
            };
            if succ3 != r0 {
                continue;
            }
            let hp = self.intern_pay2(l1, b, t, c);
            for d in 0..self.letters {
                let succ4 = match self.out.rr_map.get(&(r1, hp, p, d)) {
                    Some(&n) => n,
                    None => {
                        let n = self.intern_state(self.delta_rr(r1, hp, p, d))?;
                        self.out.rr_map.insert((r1, hp, p, d), n);
                        n
                    }
                };
                let before = self.out.pay1[p].0;
                let left_end = self.out.rc_map[&(l1, p, b)];
                self.add_h((before, left_end, t, succ4));
            }
        }
        Ok(())
    }
}

/// Builds the deterministic automaton, extending the alphabet with
/// `extra_letters` (useful before complementing against a larger alphabet).
pub fn determinize_with(
    aut: &Automaton2NW,
    extra_letters: &[String],
    budget: usize,
) -> Result<DetAutomaton, DetError> {
    let post = aut.to_post_form();
    let mut alphabet = post.alphabet().to_vec();
    for l in extra_letters {
        if !alphabet.contains(l) {
            alphabet.push(l.clone());
        }
    }
    let view = PostView::new(&post);
    let letters = alphabet.len();
    let mut b = Builder {
        view,
        finals: post.finals().clone(),
        letters,
        budget,
        state_ids: BTreeMap::new(),
        out: DetAutomaton {
            source_states: post.states().to_vec(),
            source_finals: post.finals().clone(),
            alphabet,
            states: Vec::new(),
            initial: 0,
            finals: BTreeSet::new(),
            pay1: Vec::new(),
            pay1_ids: BTreeMap::new(),
            pay2: Vec::new(),
            pay2_ids: BTreeMap::new(),
            int_map: BTreeMap::new(),
            cc_map: BTreeMap::new(),
            rc_map: BTreeMap::new(),
            cr_map: BTreeMap::new(),
            rr_map: BTreeMap::new(),
        },
        w: BTreeSet::new(),
        w_by_left: BTreeMap::new(),
        w_by_right: BTreeMap::new(),
        h: BTreeSet::new(),
        h_by_left_start: BTreeMap::new(),
        h_by_left_end: BTreeMap::new(),
        h_by_right_start: BTreeMap::new(),
        h_by_right_end: BTreeMap::new(),
        h_by_middle: BTreeMap::new(),
        h_by_starts: BTreeMap::new(),
        h_by_ends: BTreeMap::new(),
        cc_by_succ: BTreeMap::new(),
        partials: Vec::new(),
        partials_done: BTreeSet::new(),
        states_joined: 0,
        agenda: VecDeque::new(),
    };
    let init: TripleSet =
        post.initial().iter().map(|&q| (RefUpper::One(q), q, q)).collect();
    b.out.initial = b.intern_state(init)?;
    b.run_to_fixpoint()?;
    Ok(b.out)
}

/// Determinizes with the default state budget.
pub fn determinize(aut: &Automaton2NW) -> Result<DetAutomaton, DetError> {
    determinize_with(aut, &[], DEFAULT_STATE_BUDGET)
}

/// Trace of the unique deterministic run; entry `i` is the state after `i`
/// positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetRun {
    pub trace: Vec<DetStateId>,
    pub accepted: bool,
}

impl DetAutomaton {
    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn initial(&self) -> DetStateId {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<DetStateId> {
        &self.finals
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn triples(&self, s: DetStateId) -> &[Triple] {
        &self.states[s]
    }

    pub fn source_states(&self) -> &[String] {
        &self.source_states
    }

    pub fn letter_id(&self, name: &str) -> Option<LetterId> {
        self.alphabet.iter().position(|x| x == name)
    }

    pub(crate) fn step_int(&self, s: DetStateId, a: LetterId) -> Option<DetStateId> {
        self.int_map.get(&(s, a)).copied()
    }

    pub(crate) fn step_cc(&self, s: DetStateId, a: LetterId) -> Option<DetStateId> {
        self.cc_map.get(&(s, a)).copied()
    }

    pub(crate) fn step_rc(
        &self,
        s: DetStateId,
        p: (DetStateId, LetterId),
        a: LetterId,
    ) -> Option<DetStateId> {
        let p = *self.pay1_ids.get(&p)?;
        self.rc_map.get(&(s, p, a)).copied()
    }

    pub(crate) fn step_cr(
        &self,
        s: DetStateId,
        h: (DetStateId, LetterId, DetStateId, LetterId),
        a: LetterId,
    ) -> Option<DetStateId> {
        let h = *self.pay2_ids.get(&h)?;
        self.cr_map.get(&(s, h, a)).copied()
    }

    pub(crate) fn step_rr(
        &self,
        s: DetStateId,
        h: (DetStateId, LetterId, DetStateId, LetterId),
        p: (DetStateId, LetterId),
        a: LetterId,
    ) -> Option<DetStateId> {
        let h = *self.pay2_ids.get(&h)?;
        let p = *self.pay1_ids.get(&p)?;
        self.rr_map.get(&(s, h, p, a)).copied()
    }


    /// Sizes of the interned tables, in declaration order.
    pub fn table_sizes(&self) -> (usize, usize, usize, usize, usize, usize, usize, usize) {
        (
            self.states.len(),
            self.pay1.len(),
            self.pay2.len(),
            self.int_map.len(),
            self.cc_map.len(),
            self.rc_map.len(),
            self.cr_map.len(),
            self.rr_map.len(),
        )
    }
    pub fn is_final(&self, s: DetStateId) -> bool {
        self.finals.contains(&s)
    }

    /// The unique run over a wave word, exposing the full state trace.
    pub fn run(&self, word: &NestedWord2) -> Result<DetRun, DetError> {
        if !word.is_wave_word() {
            return Err(DetError::NotWaveWord);
        }
        let letters: Vec<LetterId> = word
            .letters()
            .iter()
            .map(|l| {
                self.letter_id(l).ok_or(DetError::UnknownLetter { letter: l.clone() })
            })
            .collect::<Result<_, _>>()?;
        let mut trace = Vec::with_capacity(word.len() + 1);
        trace.push(self.initial);
        let mut h1: BTreeMap<usize, PayloadId> = BTreeMap::new();
        let mut h2: BTreeMap<usize, PayloadId> = BTreeMap::new();
        let mut cur = self.initial;
        let missing = "wave-reachable transition materialized during construction";
        for i in 1..=word.len() {
            let a = letters[i - 1];
            let kind = word.kind_at(i).expect("in range");
            cur = match kind {
                Kind::II => *self.int_map.get(&(cur, a)).expect(missing),
                Kind::CC => {
                    let p = self.pay1_ids[&(cur, a)];
                    h1.insert(i, p);
                    h2.insert(i, p);
                    *self.cc_map.get(&(cur, a)).expect(missing)
                }
                Kind::RC => {
                    let call = word.m1().call_of(i).expect("return has a call");
                    let p = h1[&call];
                    let next = *self.rc_map.get(&(cur, p, a)).expect(missing);
                    let (s1, a1) = self.pay1[p];
                    h2.insert(i, self.pay2_ids[&(s1, a1, cur, a)]);
                    next
                }
                Kind::CR => {
                    let call = word.m2().call_of(i).expect("return has a call");
                    let h = h2[&call];
                    let next = *self.cr_map.get(&(cur, h, a)).expect(missing);
                    let (_, _, s2, a2) = self.pay2[h];
                    h1.insert(i, self.pay2_ids[&(s2, a2, cur, a)]);
                    next
                }
                Kind::RR => {
                    let c1 = word.m1().call_of(i).expect("return has a call");
                    let c2 = word.m2().call_of(i).expect("return has a call");
                    *self.rr_map.get(&(cur, h1[&c1], h2[&c2], a)).expect(missing)
                }
                _ => return Err(DetError::NotWaveWord),
            };
            trace.push(cur);
        }
        Ok(DetRun { trace, accepted: self.finals.contains(&cur) })
    }

    pub fn accepts(&self, word: &NestedWord2) -> Result<bool, DetError> {
        Ok(self.run(word)?.accepted)
    }

    /// Complement over wave words: same transitions, flipped final states.
    pub fn complement(&self) -> DetAutomaton {
        let mut out = self.clone();
        out.finals = (0..self.states.len()).filter(|s| !self.finals.contains(s)).collect();
        out
    }

    /// Structural invariants of the construction: uniform upper-reference
    /// length within each state and final states exactly those meeting a
    /// source final state.
    pub fn check_invariants(&self) -> bool {
        let uniform = self
            .states
            .iter()
            .all(|s| s.iter().all(|t| t.0.is_long()) || s.iter().all(|t| !t.0.is_long()));
        let finals_ok = (0..self.states.len()).all(|s| {
            self.finals.contains(&s)
                == self.states[s].iter().any(|&(_, _, q)| self.source_finals.contains(&q))
        });
        uniform && finals_ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::fixtures::{a_ex, omega_n};
    use crate::word::fixtures::omega2;
    use crate::word::NestedWord2;

    #[test]
    fn determinized_a_ex_accepts_the_family() {
        let d = determinize(&a_ex()).unwrap();
        assert!(d.check_invariants());
        for n in 1..=4 {
            assert!(d.accepts(&omega_n(n)).unwrap(), "n = {}", n);
        }
        assert!(!d.accepts(&NestedWord2::from_parts("", &[], &[])).unwrap());
    }

    #[test]
    fn trace_ends_in_a_final_state_containing_qd() {
        let a = a_ex();
        let d = determinize(&a).unwrap();
        let run = d.run(&omega2()).unwrap();
        assert!(run.accepted);
        assert_eq!(run.trace.len(), 9);
        let qd = a.state_id("qd").unwrap();
        assert!(d.triples(run.trace[8]).iter().any(|&(_, _, q)| q == qd));
    }

    #[test]
    fn wrong_letter_is_rejected() {
        let d = determinize(&a_ex()).unwrap();
        let bad = NestedWord2::from_parts(
            "aabbcccd",
            &[(1, 4), (2, 3), (5, 8), (6, 7)],
            &[(1, 8), (2, 7), (3, 6), (4, 5)],
        );
        assert!(!d.accepts(&bad).unwrap());
    }

    #[test]
    fn non_wave_input_is_out_of_domain() {
        let d = determinize(&a_ex()).unwrap();
        let w = NestedWord2::from_parts("ab", &[(1, 2)], &[]);
        assert_eq!(d.run(&w).unwrap_err(), DetError::NotWaveWord);
    }

    #[test]
    fn trivial_automaton_accepts_exactly_the_empty_word() {
        let a = Automaton2NW::new(
            alloc::vec!["q".into()],
            alloc::vec!["q".into()],
            alloc::vec!["q".into()],
            alloc::vec!["q".into()],
            alloc::vec!["a".into()],
            alloc::vec![],
        )
        .unwrap();
        let d = determinize(&a).unwrap();
        assert!(d.accepts(&NestedWord2::from_parts("", &[], &[])).unwrap());
        assert!(!d.accepts(&NestedWord2::from_parts("a", &[], &[])).unwrap());
        let wave = NestedWord2::from_parts("aaaa", &[(1, 2), (3, 4)], &[(2, 3), (1, 4)]);
        assert!(!d.accepts(&wave).unwrap());
    }

    #[test]
    fn complement_flips_acceptance() {
        let d = determinize(&a_ex()).unwrap();
        let c = d.complement();
        assert!(!c.accepts(&omega2()).unwrap());
        let internal = NestedWord2::from_parts("abcd", &[], &[]);
        assert!(!d.accepts(&internal).unwrap());
        assert!(c.accepts(&internal).unwrap());
    }
}
