//! Encoding accepting runs of nice automata as words of the triple
//! intersection, decoding them back, and the word projection of a wave-word
//! language.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::automaton::{Automaton2NW, Run, StateId};
use crate::decide::{Ctx, PostMachine, SatMachine};
use crate::grammar::BoundExceeded;
use crate::kind::Kind;
use crate::matching::Matching;
use crate::word::NestedWord2;

use super::{apply_g, is_dyck, LilError, LilLetter, LilSym};

/// Encodes an accepting run of a nice automaton over a wave word as
/// `ℓ₀ · blocks · bar(ℓₙ)`, one block per position: the barred previous
/// state, the letter and its bar, the indexed hierarchical symbol of the
/// position kind, and the next state.
pub fn encode(
    aut: &Automaton2NW,
    word: &NestedWord2,
    run: &Run,
) -> Result<Vec<LilLetter>, LilError> {
    if !aut.is_nice() {
        return Err(LilError::NotNice);
    }
    if run.linear.len() != word.len() + 1
        || !aut.initial().contains(&run.linear[0])
        || !aut.finals().contains(run.linear.last().unwrap())
        || !aut.check_run(word, run)
    {
        return Err(LilError::NotAccepting);
    }
    let state = |q: StateId| aut.states()[q].clone();
    let hier = |h: usize| aut.hier()[h].clone();
    let mut out = Vec::new();
    out.push(LilLetter::plain(LilSym::State(state(run.linear[0]))));
    for i in 1..=word.len() {
        out.push(LilLetter::barred(LilSym::State(state(run.linear[i - 1]))));
        let a = String::from(word.letter(i));
        out.push(LilLetter::plain(LilSym::Letter(a.clone())));
        out.push(LilLetter::barred(LilSym::Letter(a)));
        let kind = word.kind_at(i).expect("in range");
        let tag = match kind {
            Kind::II => None,
            Kind::CC => Some(LilLetter::plain(LilSym::Idx(hier(run.h1[&i]), 1))),
            Kind::RC => Some(LilLetter::plain(LilSym::Idx(hier(run.h2[&i]), 2))),
            Kind::CR => Some(LilLetter::barred(LilSym::Idx(hier(run.h1[&i]), 2))),
            Kind::RR => {
                let call = word.m1().call_of(i).expect("return has a call");
                Some(LilLetter::barred(LilSym::Idx(hier(run.h1[&call]), 1)))
            }
            _ => return Err(LilError::NotAccepting),
        };
        out.extend(tag);
        out.push(LilLetter::plain(LilSym::State(state(run.linear[i]))));
    }
    out.push(LilLetter::barred(LilSym::State(state(
        *run.linear.last().unwrap(),
    ))));
    Ok(out)
}

/// One parsed transition block.
struct Block {
    letter: String,
    kind: Kind,
    hier: Option<usize>,
    next: StateId,
}

/// Decodes a word of `R ∩ D ∩ g⁻¹(D)` into a wave word and an accepting run
/// of the nice automaton on it. Inverse of [`encode`] on its image.
pub fn decode(aut: &Automaton2NW, w: &[LilLetter]) -> Result<(NestedWord2, Run), LilError> {
    if !aut.is_nice() {
        return Err(LilError::NotNice);
    }
    let fail = |position: usize| LilError::NotInR { position };

    // parse the regular shape: q0, transition blocks, barred final state
    let q0 = match w.first() {
        Some(LilLetter { sym: LilSym::State(q), bar: false }) => {
            aut.state_id(q).ok_or(fail(0))?
        }
        _ => return Err(fail(0)),
    };
    if !aut.initial().contains(&q0) {
        return Err(fail(0));
    }
    let mut blocks: Vec<Block> = Vec::new();
    let mut cur = q0;
    let mut i = 1usize;
    while i + 1 < w.len() {
        match &w[i] {
            LilLetter { sym: LilSym::State(q), bar: true }
                if aut.state_id(q) == Some(cur) => {}
            _ => return Err(fail(i)),
        }
        let letter = match w.get(i + 1) {
            Some(LilLetter { sym: LilSym::Letter(a), bar: false }) => a.clone(),
            _ => return Err(fail(i + 1)),
        };
        match w.get(i + 2) {
            Some(LilLetter { sym: LilSym::Letter(a), bar: true }) if *a == letter => {}
            _ => return Err(fail(i + 2)),
        }
        let (kind, hier, next_at) = match w.get(i + 3) {
            Some(LilLetter { sym: LilSym::State(_), bar: false }) => (Kind::II, None, i + 3),
            Some(LilLetter { sym: LilSym::Idx(p, ix), bar }) => {
                let kind = match (ix, bar) {
                    (1, false) => Kind::CC,
                    (2, false) => Kind::RC,
                    (2, true) => Kind::CR,
                    (1, true) => Kind::RR,
                    _ => return Err(fail(i + 3)),
                };
                let h = aut.hier_id(p).ok_or(fail(i + 3))?;
                (kind, Some(h), i + 4)
            }
            _ => return Err(fail(i + 3)),
        };
        let next = match w.get(next_at) {
            Some(LilLetter { sym: LilSym::State(q), bar: false }) => {
                aut.state_id(q).ok_or(fail(next_at))?
            }
            _ => return Err(fail(next_at)),
        };
        // the block must name an actual transition
        let letter_id = aut.letter_id(&letter).ok_or(fail(i + 1))?;
        let arity = |n: usize| alloc::vec![hier.expect("non-internal has a symbol"); n];
        let (hin, hout) = match kind {
            Kind::II => (Vec::new(), Vec::new()),
            Kind::CC => (Vec::new(), arity(2)),
            Kind::RC | Kind::CR => (arity(1), arity(1)),
            Kind::RR => (arity(2), Vec::new()),
            _ => unreachable!(),
        };
        let t = crate::automaton::Transition {
            src: cur,
            hin,
            letter: letter_id,
            hout,
            dst: next,
        };
        if !aut.family(kind).contains(&t) {
            return Err(fail(i));
        }
        blocks.push(Block { letter, kind, hier, next });
        cur = next;
        i = next_at + 1;
    }
    match w.get(i) {
        Some(LilLetter { sym: LilSym::State(q), bar: true })
            if i + 1 == w.len()
                && aut.state_id(q) == Some(cur)
                && aut.finals().contains(&cur) => {}
        _ => return Err(fail(i)),
    }

    if !is_dyck(w) {
        return Err(LilError::NotDyck);
    }
    if !is_dyck(&apply_g(w)) {
        return Err(LilError::NotGDyck);
    }

    // rebuild the matchings from the two index projections
    let n = blocks.len();
    let mut m1_stack: Vec<usize> = Vec::new();
    let mut m2_stack: Vec<usize> = Vec::new();
    let mut m1_pairs = Vec::new();
    let mut m2_pairs = Vec::new();
    for (idx, b) in blocks.iter().enumerate() {
        let pos = idx + 1;
        match b.kind {
            Kind::II => {}
            Kind::CC => {
                m1_stack.push(pos);
                m2_stack.push(pos);
            }
            Kind::RC => {
                let call = m1_stack.pop().expect("checked by the Dyck conditions");
                m1_pairs.push((call, pos));
                m2_stack.push(pos);
            }
            Kind::CR => {
                let call = m2_stack.pop().expect("checked by the Dyck conditions");
                m2_pairs.push((call, pos));
                m1_stack.push(pos);
            }
            Kind::RR => {
                let c1 = m1_stack.pop().expect("checked by the Dyck conditions");
                let c2 = m2_stack.pop().expect("checked by the Dyck conditions");
                m1_pairs.push((c1, pos));
                m2_pairs.push((c2, pos));
            }
            _ => unreachable!(),
        }
    }
    debug_assert!(m1_stack.is_empty() && m2_stack.is_empty());
    let m1 = Matching::new(n, m1_pairs).expect("stack pairing is non-crossing");
    let m2 = Matching::new(n, m2_pairs).expect("stack pairing is non-crossing");
    let letters = blocks.iter().map(|b| b.letter.clone()).collect();
    let word = NestedWord2::new(letters, m1, m2).expect("lengths agree");

    let mut linear = alloc::vec![q0];
    let mut h1 = BTreeMap::new();
    let mut h2 = BTreeMap::new();
    for (idx, b) in blocks.iter().enumerate() {
        let pos = idx + 1;
        linear.push(b.next);
        match b.kind {
            Kind::CC => {
                h1.insert(pos, b.hier.unwrap());
                h2.insert(pos, b.hier.unwrap());
            }
            Kind::RC => {
                h2.insert(pos, b.hier.unwrap());
            }
            Kind::CR => {
                h1.insert(pos, b.hier.unwrap());
            }
            _ => {}
        }
    }
    let run = Run { linear, h1, h2 };
    debug_assert!(word.is_wave_word());
    debug_assert!(aut.check_run(&word, &run));
    Ok((word, run))
}

/// Default length bound of the word projection.
pub const DEFAULT_PROJECT_BOUND: usize = 16;

/// All letter projections of accepted wave words up to `maxlen`, computed by
/// saturating word sets along the grammar rules.
pub fn project_words(
    aut: &Automaton2NW,
    maxlen: usize,
    bound: usize,
) -> Result<BTreeSet<Vec<String>>, BoundExceeded> {
    if maxlen > bound {
        return Err(BoundExceeded { requested: maxlen, bound });
    }
    let post = aut.to_post_form();
    let machine = PostMachine::new(&post);
    let letters = machine.letters();
    let states = machine.states();

    type Words = BTreeSet<Vec<usize>>;
    type PairWords = BTreeSet<(Vec<usize>, Vec<usize>)>;
    let mut w: BTreeMap<(StateId, StateId), Words> = BTreeMap::new();
    let mut h: BTreeMap<(StateId, StateId, StateId, StateId), PairWords> = BTreeMap::new();
    for &q in &states {
        w.entry((q, q)).or_default().insert(Vec::new());
        for &s in &states {
            h.entry((q, q, s, s)).or_default().insert((Vec::new(), Vec::new()));
        }
    }
    for &q in &states {
        for (ai, a) in letters.iter().enumerate() {
            for t in machine.int_steps(&q, a) {
                w.entry((q, t)).or_default().insert(alloc::vec![ai]);
            }
        }
    }
    // precomputed boundary steps
    let mut cc_steps: Vec<(StateId, usize, StateId)> = Vec::new();
    for &q in &states {
        for (ai, a) in letters.iter().enumerate() {
            for t in machine.cc_steps(&q, a) {
                cc_steps.push((q, ai, t));
            }
        }
    }

    loop {
        let mut changed = false;
        let mut add_w = Vec::new();
        let mut add_h = Vec::new();
        // concatenation of words
        for ((q, m), us) in &w {
            for ((m2, r), vs) in &w {
                if m != m2 {
                    continue;
                }
                for u in us {
                    for v in vs {
                        if u.len() + v.len() <= maxlen {
                            let mut uv = u.clone();
                            uv.extend(v);
                            add_w.push(((*q, *r), uv));
                        }
                    }
                }
            }
        }
        // wrapping
        for ((q, q1, q2, q3), pairs) in &h {
            if let Some(inners) = w.get(&(*q1, *q2)) {
                for (x, y) in pairs {
                    for inner in inners {
                        if x.len() + inner.len() + y.len() <= maxlen {
                            let mut u = x.clone();
                            u.extend(inner);
                            u.extend(y);
                            add_w.push(((*q, *q3), u));
                        }
                    }
                }
            }
        }
        // pair concatenation
        for ((q, q1, s1, s2), ps1) in &h {
            for ((r1, r2, s0, s1b), ps2) in &h {
                if q1 != r1 || s1 != s1b {
                    continue;
                }
                for (x1, y1) in ps1 {
                    for (x2, y2) in ps2 {
                        let total = x1.len() + x2.len() + y1.len() + y2.len();
                        if total <= maxlen {
                            let mut x = x1.clone();
                            x.extend(x2);
                            let mut y = y2.clone();
                            y.extend(y1);
                            add_h.push(((*q, *r2, *s0, *s2), (x, y)));
                        }
                    }
                }
            }
        }
        // word extensions on the four sides
        for ((q, q1, s, s1), pairs) in &h {
            for (key, words) in &w {
                for (x, y) in pairs {
                    for u in words {
                        if x.len() + y.len() + u.len() > maxlen {
                            continue;
                        }
                        if key.1 == *q {
                            let mut nx = u.clone();
                            nx.extend(x);
                            add_h.push(((key.0, *q1, *s, *s1), (nx, y.clone())));
                        }
                        if key.0 == *q1 {
                            let mut nx = x.clone();
                            nx.extend(u);
                            add_h.push(((*q, key.1, *s, *s1), (nx, y.clone())));
                        }
                        if key.1 == *s {
                            let mut ny = u.clone();
                            ny.extend(y);
                            add_h.push(((*q, *q1, key.0, *s1), (x.clone(), ny)));
                        }
                        if key.0 == *s1 {
                            let mut ny = y.clone();
                            ny.extend(u);
                            add_h.push(((*q, *q1, *s, key.1), (x.clone(), ny)));
                        }
                    }
                }
            }
        }
        // wave closure
        for ((q1, q2, r1, r2), pairs) in &h {
            for &(q0, ai, q1b) in &cc_steps {
                if q1b != *q1 {
                    continue;
                }
                let cc: Ctx<'_, StateId> = (&q0, letters[ai].as_str(), q1);
                for (bi, b) in letters.iter().enumerate() {
                    for q3 in machine.rc_steps(q2, cc, b) {
                        let rc: Ctx<'_, StateId> = (q2, b.as_str(), &q3);
                        for r0 in &states {
                            for (ci, c) in letters.iter().enumerate() {
                                for r1b in machine.cr_steps(r0, cc, rc, c) {
                                    if r1b != *r1 {
                                        continue;
                                    }
                                    let cr: Ctx<'_, StateId> = (r0, c.as_str(), &r1b);
                                    for (di, d) in letters.iter().enumerate() {
                                        for r3 in machine.rr_steps(r2, cc, rc, cr, d) {
                                            for (x, y) in pairs {
                                                if x.len() + y.len() + 4 > maxlen {
                                                    continue;
                                                }
                                                let mut nx = alloc::vec![ai];
                                                nx.extend(x);
                                                nx.push(bi);
                                                let mut ny = alloc::vec![ci];
                                                ny.extend(y);
                                                ny.push(di);
                                                add_h.push((
                                                    (q0, q3, *r0, r3),
                                                    (nx, ny),
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
        }
        for (key, word) in add_w {
            changed |= w.entry(key).or_default().insert(word);
        }
        for (key, pair) in add_h {
            changed |= h.entry(key).or_default().insert(pair);
        }
        if !changed {
            break;
        }
    }

    let mut out = BTreeSet::new();
    for &q0 in post.initial() {
        for &qf in post.finals() {
            if let Some(words) = w.get(&(q0, qf)) {
                for word in words {
                    out.insert(word.iter().map(|&i| letters[i].clone()).collect());
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::fixtures::{a_ex, omega_n};
    use crate::lil::{apply_f, bar_word};

    fn nice_run(word: &NestedWord2) -> (Automaton2NW, Run) {
        let nice = a_ex().to_nice();
        let run = nice
            .find_runs(word, 1)
            .unwrap()
            .into_iter()
            .next()
            .expect("accepting run");
        (nice, run)
    }

    #[test]
    fn encode_passes_the_three_memberships() {
        let word = omega_n(1);
        let (nice, run) = nice_run(&word);
        let w = encode(&nice, &word, &run).unwrap();
        assert_eq!(w.len(), 22); // four five-letter blocks plus the boundary states
        assert!(is_dyck(&w));
        assert!(is_dyck(&apply_g(&w)));
        assert_eq!(apply_f(&w), ["a", "b", "c", "d"]);
    }

    #[test]
    fn decode_inverts_encode() {
        for word in [omega_n(1), omega_n(2)] {
            let (nice, run) = nice_run(&word);
            let w = encode(&nice, &word, &run).unwrap();
            let (back, back_run) = decode(&nice, &w).unwrap();
            assert_eq!(back, word);
            assert_eq!(back_run, run);
            assert_eq!(encode(&nice, &back, &back_run).unwrap(), w);
        }
    }

    #[test]
    fn decode_of_a_bare_state_pair_is_the_empty_word() {
        let nice = Automaton2NW::new(
            alloc::vec!["q0".into()],
            alloc::vec!["q0".into()],
            alloc::vec!["q0".into()],
            alloc::vec![],
            alloc::vec![],
            alloc::vec![],
        )
        .unwrap();
        let w = alloc::vec![
            LilLetter::plain(LilSym::State("q0".into())),
            LilLetter::barred(LilSym::State("q0".into())),
        ];
        let (word, run) = decode(&nice, &w).unwrap();
        assert!(word.is_empty());
        assert_eq!(run.linear.len(), 1);
        assert_eq!(encode(&nice, &word, &run).unwrap(), w);
    }

    #[test]
    fn flipping_an_index_breaks_the_g_projection() {
        let word = omega_n(1);
        let (nice, run) = nice_run(&word);
        let mut w = encode(&nice, &word, &run).unwrap();
        let at = w
            .iter()
            .position(|l| matches!(l.sym, LilSym::Idx(_, 1)) && !l.bar)
            .unwrap();
        if let LilSym::Idx(p, _) = &w[at].sym {
            w[at] = LilLetter::plain(LilSym::Idx(p.clone(), 2));
        }
        // the flip breaks the transition language and both Dyck conditions
        // at once; the block check sees it first
        assert!(decode(&nice, &w).is_err());
    }

    #[test]
    fn non_nice_automata_are_rejected() {
        let word = omega_n(1);
        let run = a_ex().find_runs(&word, 1).unwrap().pop().unwrap();
        assert_eq!(encode(&a_ex(), &word, &run), Err(LilError::NotNice));
    }

    #[test]
    fn mirrored_words_are_not_in_r() {
        let word = omega_n(1);
        let (nice, run) = nice_run(&word);
        let w = encode(&nice, &word, &run).unwrap();
        assert!(matches!(decode(&nice, &bar_word(&w)), Err(LilError::NotInR { .. })));
    }

    #[test]
    fn projection_of_a_ex_at_small_bounds() {
        let words = project_words(&a_ex(), 8, DEFAULT_PROJECT_BOUND).unwrap();
        let expect: BTreeSet<Vec<String>> = [
            alloc::vec!["a", "b", "c", "d"],
            alloc::vec!["a", "a", "b", "b", "c", "c", "d", "d"],
        ]
        .into_iter()
        .map(|w| w.into_iter().map(String::from).collect())
        .collect();
        assert_eq!(words, expect);
        assert!(project_words(&a_ex(), 3, DEFAULT_PROJECT_BOUND).unwrap().is_empty());
        assert!(project_words(&a_ex(), 17, 16).is_err());
    }
}
