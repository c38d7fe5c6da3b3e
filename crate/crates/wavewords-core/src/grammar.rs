//! The two-nonterminal grammar of wave words: `W` produces words, `H`
//! produces pairs of matched words. [`derive`] builds a derivation for a
//! 2-nested word exactly when it is a wave word; [`Enumerator`] is the
//! brute-force generator shared by the test oracles of every module.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::kind::Kind;
use crate::matching::Matching;
use crate::typed::WaveKind;
use crate::wave::Arch;
use crate::word::NestedWord2;

/// A possibly empty 1-indexed interval; empty intervals keep an anchor so
/// that spans still partition their parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Self {
        Interval { lo, hi }
    }

    /// Empty interval anchored just before `at`.
    pub fn empty_at(at: usize) -> Self {
        Interval { lo: at, hi: at.wrapping_sub(1) }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.hi - self.lo + 1
        }
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "[]")
        } else {
            write!(f, "[{},{}]", self.lo, self.hi)
        }
    }
}

/// Span of a derivation node: an interval for `W`, an interval pair for `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Span {
    Interval(Interval),
    Pair(Interval, Interval),
}

/// Grammar rule applied at a derivation node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    WEps,
    WInt,
    WConcat,
    WWrap,
    HEps,
    HConcat,
    HNest,
    HWave,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::WEps => "W-eps",
            Rule::WInt => "W-int",
            Rule::WConcat => "W-concat",
            Rule::WWrap => "W-wrap",
            Rule::HEps => "H-eps",
            Rule::HConcat => "H-concat",
            Rule::HNest => "H-nest",
            Rule::HWave => "H-wave",
        }
    }
}

/// A derivation tree over the word/pair grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub span: Span,
    pub children: Vec<Derivation>,
}

impl Derivation {
    fn leaf(rule: Rule, span: Span) -> Self {
        Derivation { rule, span, children: Vec::new() }
    }

    /// Leaf letters in span order: each position with the typed-alphabet kind
    /// the derivation assigns to it.
    pub fn leaves(&self) -> Vec<(usize, WaveKind)> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out.sort_unstable();
        out
    }

    fn collect_leaves(&self, out: &mut Vec<(usize, WaveKind)>) {
        match self.rule {
            Rule::WInt => {
                if let Span::Interval(iv) = self.span {
                    out.push((iv.lo, WaveKind::Internal));
                }
            }
            Rule::HWave => {
                if let Span::Pair(l, r) = self.span {
                    out.push((l.lo, WaveKind::CC));
                    out.push((l.hi, WaveKind::RC));
                    out.push((r.lo, WaveKind::CR));
                    out.push((r.hi, WaveKind::RR));
                }
            }
            _ => {}
        }
        for c in &self.children {
            c.collect_leaves(out);
        }
    }

    /// All `H-wave` boundary quadruples in the tree.
    pub fn wave_boundaries(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        self.visit(&mut |d| {
            if d.rule == Rule::HWave {
                if let Span::Pair(l, r) = d.span {
                    out.push((l.lo, l.hi, r.lo, r.hi));
                }
            }
        });
        out
    }

    pub fn visit(&self, f: &mut impl FnMut(&Derivation)) {
        f(self);
        for c in &self.children {
            c.visit(f);
        }
    }
}

/// Rejection witness: the arches that belong to no 2-wave.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reject {
    pub uncovered: Vec<Arch>,
}

/// Builds the derivation of a 2-nested word from `W`, or rejects it with the
/// arches outside every 2-wave. Deterministic: concatenations split off the
/// leftmost maximal proper prefix without pending arches, and waves are
/// peeled at the leftmost boundary.
pub fn derive(word: &NestedWord2) -> Result<Derivation, Reject> {
    let full = Interval::new(1, word.len());
    match derive_w(word, full) {
        Some(d) => Ok(d),
        None => {
            let uncovered = match word.wave_certificate() {
                crate::wave::WaveCertificate::NotWave { uncovered } => uncovered,
                crate::wave::WaveCertificate::Wave { .. } => {
                    unreachable!("structural decomposition failed on a wave word")
                }
            };
            Err(Reject { uncovered })
        }
    }
}

/// Positions `p` in `[lo, hi]` such that `[lo, p]` has no pending arch.
fn wpa_prefix_ends(word: &NestedWord2, lo: usize, hi: usize) -> Vec<usize> {
    let mut ends = Vec::new();
    let mut open = [0usize; 2];
    for i in lo..=hi {
        for (slot, m) in [(0, word.m1()), (1, word.m2())] {
            match m.status(i) {
                crate::kind::Status::Internal => {}
                crate::kind::Status::Call => {
                    if m.ret_of(i).unwrap() > hi {
                        return ends; // never closes inside: no later prefix is wpa
                    }
                    open[slot] += 1;
                }
                crate::kind::Status::Return => {
                    if m.call_of(i).unwrap() < lo {
                        return ends;
                    }
                    open[slot] -= 1;
                }
            }
        }
        if open == [0, 0] {
            ends.push(i);
        }
    }
    ends
}

fn derive_w(word: &NestedWord2, iv: Interval) -> Option<Derivation> {
    if iv.is_empty() {
        return Some(Derivation::leaf(Rule::WEps, Span::Interval(iv)));
    }
    if iv.len() == 1 {
        if word.kind_at(iv.lo).ok()? != Kind::II {
            return None;
        }
        return Some(Derivation::leaf(Rule::WInt, Span::Interval(iv)));
    }
    let ends = wpa_prefix_ends(word, iv.lo, iv.hi);
    // the whole interval must itself be wpa
    if ends.last() != Some(&iv.hi) {
        return None;
    }
    if let Some(&p) = ends.iter().rev().find(|&&p| p < iv.hi) {
        let left = derive_w(word, Interval::new(iv.lo, p))?;
        let right = derive_w(word, Interval::new(p + 1, iv.hi))?;
        return Some(Derivation {
            rule: Rule::WConcat,
            span: Span::Interval(iv),
            children: vec![left, right],
        });
    }
    // atomic: the interval is a wave wrap x w y
    if word.kind_at(iv.lo).ok()? != Kind::CC {
        return None;
    }
    let j = word.m2().ret_of(iv.lo)?;
    if j != iv.hi {
        return None;
    }
    let k = word.m1().ret_of(iv.lo)?;
    let l = word.m1().call_of(iv.hi)?;
    if word.m2().ret_of(k) != Some(l) || !(iv.lo < k && k < l && l < iv.hi) {
        return None;
    }
    let pair = derive_h(word, Interval::new(iv.lo, k), Interval::new(l, iv.hi))?;
    let inner = derive_w(word, Interval::new(k + 1, l - 1))?;
    Some(Derivation {
        rule: Rule::WWrap,
        span: Span::Interval(iv),
        children: vec![pair, inner],
    })
}

fn h_node(rule: Rule, left: Interval, right: Interval, children: Vec<Derivation>) -> Derivation {
    Derivation { rule, span: Span::Pair(left, right), children }
}

fn derive_h(word: &NestedWord2, left: Interval, right: Interval) -> Option<Derivation> {
    if left.is_empty() && right.is_empty() {
        return Some(h_node(Rule::HEps, left, right, Vec::new()));
    }
    if left.is_empty() || right.is_empty() {
        // (w1 x w'1, w2 y w'2) with the pair and all but one piece empty
        let (w1, w2p) = if right.is_empty() {
            (left, Interval::empty_at(right.lo))
        } else {
            (Interval::empty_at(left.lo), right)
        };
        let hchild = h_node(
            Rule::HEps,
            Interval::empty_at(w1.hi.wrapping_add(1)),
            Interval::empty_at(w2p.lo),
            Vec::new(),
        );
        let children = vec![
            derive_w(word, w1)?,
            hchild,
            derive_w(word, Interval::empty_at(w1.hi.wrapping_add(1)))?,
            derive_w(word, Interval::empty_at(w2p.lo))?,
            derive_w(word, w2p)?,
        ];
        return Some(h_node(Rule::HNest, left, right, children));
    }
    let i = left.lo;
    match word.kind_at(i).ok()? {
        Kind::II => {
            let one = derive_h(word, Interval::new(i, i), Interval::empty_at(right.hi + 1))?;
            let rest = derive_h(word, Interval::new(i + 1, left.hi), right)?;
            Some(h_node(Rule::HConcat, left, right, vec![one, rest]))
        }
        Kind::CC => {
            let j = word.m2().ret_of(i)?;
            if j <= left.hi {
                // the support arch closes within the left interval
                let one =
                    derive_h(word, Interval::new(i, j), Interval::empty_at(right.hi + 1))?;
                let rest = derive_h(word, Interval::new(j + 1, left.hi), right)?;
                Some(h_node(Rule::HConcat, left, right, vec![one, rest]))
            } else if j >= right.lo && j <= right.hi {
                if j < right.hi {
                    // split the right interval after the wave closes
                    let first =
                        derive_h(word, Interval::empty_at(i), Interval::new(j + 1, right.hi))?;
                    let second = derive_h(word, left, Interval::new(right.lo, j))?;
                    Some(h_node(Rule::HConcat, left, right, vec![first, second]))
                } else {
                    let k = word.m1().ret_of(i)?;
                    let l = word.m1().call_of(j)?;
                    if word.m2().ret_of(k) != Some(l) {
                        return None;
                    }
                    if !(i < k && k <= left.hi && right.lo <= l && l < j) {
                        return None;
                    }
                    if k == left.hi && l == right.lo {
                        let inner = derive_h(
                            word,
                            Interval::new(i + 1, k - 1),
                            Interval::new(l + 1, j - 1),
                        )?;
                        Some(h_node(Rule::HWave, left, right, vec![inner]))
                    } else {
                        let first = derive_h(
                            word,
                            Interval::new(i, k),
                            Interval::new(l, right.hi),
                        )?;
                        let second = derive_h(
                            word,
                            Interval::new(k + 1, left.hi),
                            Interval::new(right.lo, l.wrapping_sub(1)),
                        )?;
                        Some(h_node(Rule::HConcat, left, right, vec![first, second]))
                    }
                }
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Bound violation raised by the exhaustive generators and the brute-force
/// acceptance oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundExceeded {
    pub requested: usize,
    pub bound: usize,
}

impl fmt::Display for BoundExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "requested size {} exceeds the configured bound {}", self.requested, self.bound)
    }
}

/// Memoizing generator of all non-crossing matchings and all 2-wave
/// structures of a given length. One instance is meant to be shared by every
/// enumeration-based check.
pub struct Enumerator {
    bound: usize,
    matchings: BTreeMap<usize, Vec<Matching>>,
    structures: BTreeMap<usize, Vec<(Matching, Matching)>>,
}

impl Default for Enumerator {
    fn default() -> Self {
        Enumerator::new()
    }
}

impl Enumerator {
    pub fn new() -> Self {
        Enumerator::with_bound(12)
    }

    pub fn with_bound(bound: usize) -> Self {
        Enumerator { bound, matchings: BTreeMap::new(), structures: BTreeMap::new() }
    }

    /// All non-crossing partial matchings of length `n`.
    pub fn matchings(&mut self, n: usize) -> Result<&[Matching], BoundExceeded> {
        if n > self.bound {
            return Err(BoundExceeded { requested: n, bound: self.bound });
        }
        if !self.matchings.contains_key(&n) {
            let mut memo = BTreeMap::new();
            let pair_sets = gen_pairs(1, n, &mut memo);
            let ms = pair_sets
                .iter()
                .map(|ps| Matching::new(n, ps.iter().copied()).expect("generated non-crossing"))
                .collect();
            self.matchings.insert(n, ms);
        }
        Ok(&self.matchings[&n])
    }

    /// Exactly the pairs `(M1, M2)` of length `n` in which every arch lies on
    /// a 2-wave, by brute force over matching pairs.
    pub fn wave_structures(
        &mut self,
        n: usize,
    ) -> Result<&[(Matching, Matching)], BoundExceeded> {
        if n > self.bound {
            return Err(BoundExceeded { requested: n, bound: self.bound });
        }
        if !self.structures.contains_key(&n) {
            let all = self.matchings(n)?.to_vec();
            let mut out = Vec::new();
            for m1 in &all {
                for m2 in &all {
                    if is_wave_structure(m1, m2) {
                        out.push((m1.clone(), m2.clone()));
                    }
                }
            }
            self.structures.insert(n, out);
        }
        Ok(&self.structures[&n])
    }
}

/// Whether every arch of the pair belongs to a 2-wave.
pub fn is_wave_structure(m1: &Matching, m2: &Matching) -> bool {
    let mut covered: BTreeSet<(bool, usize)> = BTreeSet::new();
    for &(i1, i2) in m1.pairs() {
        let Some(i3) = m2.ret_of(i2) else { continue };
        let Some(i4) = m1.ret_of(i3) else { continue };
        if m2.ret_of(i1) == Some(i4) && i2 < i3 {
            covered.insert((true, i1));
            covered.insert((true, i3));
            covered.insert((false, i2));
            covered.insert((false, i1));
        }
    }
    m1.pairs().iter().all(|&(i, _)| covered.contains(&(true, i)))
        && m2.pairs().iter().all(|&(i, _)| covered.contains(&(false, i)))
}

fn gen_pairs(
    lo: usize,
    hi: usize,
    memo: &mut BTreeMap<(usize, usize), Vec<Vec<(usize, usize)>>>,
) -> Vec<Vec<(usize, usize)>> {
    if lo > hi {
        return vec![Vec::new()];
    }
    if let Some(hit) = memo.get(&(lo, hi)) {
        return hit.clone();
    }
    let mut out = gen_pairs(lo + 1, hi, memo);
    for j in lo + 1..=hi {
        let inners = gen_pairs(lo + 1, j - 1, memo);
        let outers = gen_pairs(j + 1, hi, memo);
        for inner in &inners {
            for outer in &outers {
                let mut ps = Vec::with_capacity(inner.len() + outer.len() + 1);
                ps.push((lo, j));
                ps.extend_from_slice(inner);
                ps.extend_from_slice(outer);
                out.push(ps);
            }
        }
    }
    memo.insert((lo, hi), out.clone());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::fixtures::*;
    use alloc::string::ToString;

    #[test]
    fn empty_word_derives_by_w_eps() {
        let w = NestedWord2::from_parts("", &[], &[]);
        let d = derive(&w).unwrap();
        assert_eq!(d.rule, Rule::WEps);
    }

    #[test]
    fn fig2_right_has_one_wave_node() {
        let d = derive(&fig2_right()).unwrap();
        assert_eq!(d.wave_boundaries(), vec![(1, 3, 4, 7)]);
    }

    #[test]
    fn fig2_middle_is_rejected() {
        let r = derive(&fig2_middle()).unwrap_err();
        assert!(!r.uncovered.is_empty());
    }

    #[test]
    fn leaves_flatten_back_to_the_typed_word() {
        for w in [fig2_right(), omega2()] {
            let d = derive(&w).unwrap();
            let typed = w.to_typed().unwrap();
            let leaves = d.leaves();
            assert_eq!(leaves.len(), w.len());
            for (pos, kind) in leaves {
                assert_eq!(typed[pos - 1].kind, kind, "position {}", pos);
            }
        }
    }

    #[test]
    fn motzkin_counts() {
        let mut e = Enumerator::new();
        let counts: Vec<usize> = (0..=8).map(|n| e.matchings(n).unwrap().len()).collect();
        assert_eq!(counts, [1, 1, 2, 4, 9, 21, 51, 127, 323]);
        assert!(e.matchings(13).is_err());
    }

    #[test]
    fn wave_structures_small() {
        let mut e = Enumerator::new();
        assert_eq!(e.wave_structures(0).unwrap().len(), 1);
        assert_eq!(e.wave_structures(3).unwrap().len(), 1);
        let s4 = e.wave_structures(4).unwrap();
        assert_eq!(s4.len(), 2);
        let nontrivial = s4.iter().find(|(m1, _)| !m1.is_empty()).unwrap();
        assert_eq!(nontrivial.0.pairs(), &[(1, 2), (3, 4)]);
        assert_eq!(nontrivial.1.pairs(), &[(1, 4), (2, 3)]);
    }

    #[test]
    fn derive_agrees_with_the_wave_check_up_to_length_6() {
        let mut e = Enumerator::new();
        for n in 0..=6 {
            let all = e.matchings(n).unwrap().to_vec();
            for m1 in &all {
                for m2 in &all {
                    let letters = vec!["a".to_string(); n];
                    let w = NestedWord2::new(letters, m1.clone(), m2.clone()).unwrap();
                    assert_eq!(
                        derive(&w).is_ok(),
                        w.is_wave_word(),
                        "disagreement on m1={:?} m2={:?}",
                        m1.pairs(),
                        m2.pairs()
                    );
                }
            }
        }
    }

    #[test]
    fn h_spans_partition_and_are_wpa() {
        let d = derive(&omega2()).unwrap();
        let w = omega2();
        d.visit(&mut |node| {
            if let Span::Pair(l, r) = node.span {
                let set: alloc::collections::BTreeSet<usize> =
                    l.positions().chain(r.positions()).collect();
                assert!(w.is_wpa(&set), "pair {:?} not wpa", node.span);
            }
        });
    }
}
