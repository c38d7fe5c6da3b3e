//! Ground-truth acceptance by backtracking over positions. Exponential and
//! bounded; every other acceptance path in the crate is checked against it.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::grammar::BoundExceeded;
use crate::kind::{Kind, Status};
use crate::word::NestedWord2;

use super::{Automaton2NW, HierId, LetterId, StateId, Transition};

/// Default length bound of the brute-force oracle.
pub const DEFAULT_ORACLE_BOUND: usize = 14;

/// A run: the linear states `0..=n` plus hierarchical labels on the calls of
/// each matching, keyed by call position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Run {
    pub linear: Vec<StateId>,
    pub h1: BTreeMap<usize, HierId>,
    pub h2: BTreeMap<usize, HierId>,
}

struct PositionInfo {
    kind: Kind,
    letter: LetterId,
    /// call position of the closing M1 arch, when this is an M1 return
    m1_call: usize,
    m2_call: usize,
}

struct Search<'a> {
    #[allow(dead_code)]
    aut: &'a Automaton2NW,
    info: Vec<PositionInfo>,
    /// per kind: (src, received hier states, letter) -> [(emitted, dst)]
    index: BTreeMap<Kind, BTreeMap<(StateId, Vec<HierId>, LetterId), Vec<(Vec<HierId>, StateId)>>>,
}

impl<'a> Search<'a> {
    fn new(aut: &'a Automaton2NW, word: &NestedWord2) -> Option<Self> {
        let mut info = Vec::with_capacity(word.len());
        for i in 1..=word.len() {
            let letter = aut.letter_id(word.letter(i))?;
            let kind = word.kind_at(i).expect("in range");
            info.push(PositionInfo {
                kind,
                letter,
                m1_call: word.m1().call_of(i).unwrap_or(0),
                m2_call: word.m2().call_of(i).unwrap_or(0),
            });
        }
        let mut index: BTreeMap<_, BTreeMap<_, Vec<_>>> = BTreeMap::new();
        for (kind, t) in aut.transitions() {
            index
                .entry(kind)
                .or_default()
                .entry((t.src, t.hin.clone(), t.letter))
                .or_default()
                .push((t.hout.clone(), t.dst));
        }
        Some(Search { aut, info, index })
    }

    fn received(&self, i: usize, h1: &[Option<HierId>], h2: &[Option<HierId>]) -> Vec<HierId> {
        let info = &self.info[i - 1];
        let mut hin = Vec::new();
        if info.kind.upper == Status::Return {
            hin.push(h1[info.m1_call].expect("call assigned before return"));
        }
        if info.kind.lower == Status::Return {
            hin.push(h2[info.m2_call].expect("call assigned before return"));
        }
        hin
    }

    fn dfs(
        &self,
        i: usize,
        state: StateId,
        linear: &mut Vec<StateId>,
        h1: &mut Vec<Option<HierId>>,
        h2: &mut Vec<Option<HierId>>,
        sink: &mut dyn FnMut(&[StateId], &[Option<HierId>], &[Option<HierId>]) -> bool,
    ) -> bool {
        if i > self.info.len() {
            return sink(linear, h1, h2);
        }
        let info = &self.info[i - 1];
        let hin = self.received(i, h1, h2);
        let Some(family) = self.index.get(&info.kind) else { return true };
        let Some(cands) = family.get(&(state, hin, info.letter)) else { return true };
        for (hout, dst) in cands {
            let mut slot = 0;
            if info.kind.upper == Status::Call {
                h1[i] = Some(hout[slot]);
                slot += 1;
            }
            if info.kind.lower == Status::Call {
                h2[i] = Some(hout[slot]);
            }
            linear.push(*dst);
            let keep_going = self.dfs(i + 1, *dst, linear, h1, h2, sink);
            linear.pop();
            h1[i] = None;
            h2[i] = None;
            if !keep_going {
                return false;
            }
        }
        true
    }

    fn run_from(&self, start: StateId, sink: &mut dyn FnMut(&[StateId], &[Option<HierId>], &[Option<HierId>]) -> bool) {
        let n = self.info.len();
        let mut linear = vec![start];
        let mut h1 = vec![None; n + 1];
        let mut h2 = vec![None; n + 1];
        self.dfs(1, start, &mut linear, &mut h1, &mut h2, sink);
    }
}

fn collect_run(linear: &[StateId], h1: &[Option<HierId>], h2: &[Option<HierId>]) -> Run {
    let pick = |hs: &[Option<HierId>]| {
        hs.iter()
            .enumerate()
            .filter_map(|(i, h)| h.map(|h| (i, h)))
            .collect::<BTreeMap<_, _>>()
    };
    Run { linear: linear.to_vec(), h1: pick(h1), h2: pick(h2) }
}

impl Automaton2NW {
    /// Up to `limit` accepting runs on `word`, found by backtracking.
    /// `bound` caps the word length.
    pub fn find_runs_bounded(
        &self,
        word: &NestedWord2,
        limit: usize,
        bound: usize,
    ) -> Result<Vec<Run>, BoundExceeded> {
        if word.len() > bound {
            return Err(BoundExceeded { requested: word.len(), bound });
        }
        let Some(search) = Search::new(self, word) else { return Ok(Vec::new()) };
        let mut runs = Vec::new();
        for &q0 in &self.initial {
            if runs.len() >= limit {
                break;
            }
            search.run_from(q0, &mut |linear, h1, h2| {
                if self.finals.contains(linear.last().unwrap()) {
                    runs.push(collect_run(linear, h1, h2));
                }
                runs.len() < limit
            });
        }
        Ok(runs)
    }

    pub fn find_runs(&self, word: &NestedWord2, limit: usize) -> Result<Vec<Run>, BoundExceeded> {
        self.find_runs_bounded(word, limit, DEFAULT_ORACLE_BOUND)
    }

    /// Brute-force acceptance: the first accepting run if any.
    pub fn accepts_bruteforce(&self, word: &NestedWord2) -> Result<Option<Run>, BoundExceeded> {
        Ok(self.find_runs(word, 1)?.into_iter().next())
    }

    pub fn accepts_bruteforce_bounded(
        &self,
        word: &NestedWord2,
        bound: usize,
    ) -> Result<Option<Run>, BoundExceeded> {
        Ok(self.find_runs_bounded(word, 1, bound)?.into_iter().next())
    }

    /// All pairs `(q, q')` such that some run on `word` starts in `q` and
    /// ends in `q'`, regardless of initial and final sets.
    pub fn endpoints(
        &self,
        word: &NestedWord2,
        bound: usize,
    ) -> Result<BTreeSet<(StateId, StateId)>, BoundExceeded> {
        if word.len() > bound {
            return Err(BoundExceeded { requested: word.len(), bound });
        }
        let Some(search) = Search::new(self, word) else { return Ok(BTreeSet::new()) };
        let mut out = BTreeSet::new();
        for q in 0..self.states.len() {
            search.run_from(q, &mut |linear, _, _| {
                out.insert((q, *linear.last().unwrap()));
                true
            });
        }
        Ok(out)
    }

    /// Checks the run relation at every position plus the length constraints;
    /// does not require the run to be accepting.
    pub fn check_run(&self, word: &NestedWord2, run: &Run) -> bool {
        let n = word.len();
        if run.linear.len() != n + 1 {
            return false;
        }
        for i in 1..=n {
            let Some(letter) = self.letter_id(word.letter(i)) else { return false };
            let kind = word.kind_at(i).expect("in range");
            let mut hin = Vec::new();
            if kind.upper == Status::Return {
                match word.m1().call_of(i).and_then(|c| run.h1.get(&c)) {
                    Some(&h) => hin.push(h),
                    None => return false,
                }
            }
            if kind.lower == Status::Return {
                match word.m2().call_of(i).and_then(|c| run.h2.get(&c)) {
                    Some(&h) => hin.push(h),
                    None => return false,
                }
            }
            let mut hout = Vec::new();
            if kind.upper == Status::Call {
                match run.h1.get(&i) {
                    Some(&h) => hout.push(h),
                    None => return false,
                }
            }
            if kind.lower == Status::Call {
                match run.h2.get(&i) {
                    Some(&h) => hout.push(h),
                    None => return false,
                }
            }
            let t = Transition {
                src: run.linear[i - 1],
                hin,
                letter,
                hout,
                dst: run.linear[i],
            };
            if !self.family(kind).contains(&t) {
                return false;
            }
        }
        true
    }

    /// In post form a run is determined by its linear states: rebuild the
    /// hierarchical labels from them, provided the result is a run.
    pub fn run_from_linear(&self, word: &NestedWord2, linear: &[StateId]) -> Option<Run> {
        let to_hier = self.hier_to_state();
        let hier_of_state =
            |q: StateId| to_hier.iter().position(|&s| s == q).expect("post form");
        let mut h1 = BTreeMap::new();
        let mut h2 = BTreeMap::new();
        for i in 1..=word.len() {
            if word.m1().status(i) == Status::Call {
                h1.insert(i, hier_of_state(linear[i]));
            }
            if word.m2().status(i) == Status::Call {
                h2.insert(i, hier_of_state(linear[i]));
            }
        }
        let run = Run { linear: linear.to_vec(), h1, h2 };
        self.check_run(word, &run).then_some(run)
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::word::fixtures::omega2;
    use crate::word::NestedWord2;

    #[test]
    fn a_ex_accepts_omega2_with_the_drawn_run() {
        let a = a_ex();
        let runs = a.find_runs(&omega2(), 4).unwrap();
        assert_eq!(runs.len(), 1, "deterministic automaton has a unique run");
        let run = &runs[0];
        let names: Vec<&str> =
            run.linear.iter().map(|&q| a.states()[q].as_str()).collect();
        assert_eq!(names, ["qa", "qa", "qa", "qb", "qb", "qc", "qc", "qd", "qd"]);
        let h1: Vec<(usize, &str)> =
            run.h1.iter().map(|(&i, &h)| (i, a.hier()[h].as_str())).collect();
        assert_eq!(h1, [(1, "qa"), (2, "qa"), (5, "qc"), (6, "qc")]);
        let h2: Vec<(usize, &str)> =
            run.h2.iter().map(|(&i, &h)| (i, a.hier()[h].as_str())).collect();
        assert_eq!(h2, [(1, "qa"), (2, "qa"), (3, "qb"), (4, "qb")]);
        assert!(a.check_run(&omega2(), run));
    }

    #[test]
    fn a_ex_accepts_the_whole_family() {
        let a = a_ex();
        for n in 1..=3 {
            let w = omega_n(n);
            assert!(w.is_wave_word());
            assert!(a.accepts_bruteforce(&w).unwrap().is_some(), "n = {}", n);
        }
    }

    #[test]
    fn a_ex_rejects_empty_word_and_wrong_letters(){
        let a = a_ex();
        let empty = NestedWord2::from_parts("", &[], &[]);
        assert!(a.accepts_bruteforce(&empty).unwrap().is_none());
        // same shape as the n=1 wave but the last letter is wrong
        let bad = NestedWord2::from_parts("abcc", &[(1, 2), (3, 4)], &[(2, 3), (1, 4)]);
        assert!(a.accepts_bruteforce(&bad).unwrap().is_none());
        // letters outside the alphabet reject rather than error
        let alien = NestedWord2::from_parts("xycd", &[(1, 2), (3, 4)], &[(2, 3), (1, 4)]);
        assert!(a.accepts_bruteforce(&alien).unwrap().is_none());
    }

    #[test]
    fn length_bound_is_enforced() {
        let a = a_ex();
        let w = omega_n(4); // 16 letters
        assert!(a.accepts_bruteforce(&w).is_err());
        assert!(a.accepts_bruteforce_bounded(&w, 16).unwrap().is_some());
    }

    #[test]
    fn post_form_runs_reconstruct_from_linear_states() {
        let a = a_ex();
        let run = a.accepts_bruteforce(&omega2()).unwrap().unwrap();
        let rebuilt = a.run_from_linear(&omega2(), &run.linear).unwrap();
        assert_eq!(rebuilt, run);
    }

    #[test]
    fn endpoints_on_omega2() {
        let a = a_ex();
        let ends = a.endpoints(&omega2(), 14).unwrap();
        let qa = a.state_id("qa").unwrap();
        let qd = a.state_id("qd").unwrap();
        assert!(ends.contains(&(qa, qd)));
        assert_eq!(ends.len(), 1);
    }
}
