//! Tree decompositions of wave-word graphs. The graph of a 2-nested word has
//! the positions as vertices and the linear successor pairs plus all arches
//! of both matchings as edges; the constructive decomposition follows the
//! grammar derivation and stays within width 11.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::grammar::{self, Derivation, Interval, Rule, Span};
use crate::word::NestedWord2;

/// Bags of positions connected by tree edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<BTreeSet<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreedecError {
    NotWaveWord(grammar::Reject),
    /// Internal sentinel: the construction produced a bag beyond width 11.
    WidthExceeded { width: usize },
}

impl fmt::Display for TreedecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreedecError::NotWaveWord(_) => write!(f, "input is not a 2-wave word"),
            TreedecError::WidthExceeded { width } => {
                write!(f, "construction exceeded width 11 (got {})", width)
            }
        }
    }
}

/// First violated tree-decomposition condition, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotATree,
    VertexUncovered { vertex: usize },
    EdgeUncovered { edge: (usize, usize) },
    OccurrencesDisconnected { vertex: usize },
    WidthExceeded { width: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotATree => write!(f, "bag graph is not a tree"),
            Violation::VertexUncovered { vertex } => {
                write!(f, "position {} is in no bag", vertex)
            }
            Violation::EdgeUncovered { edge } => {
                write!(f, "edge ({},{}) is inside no bag", edge.0, edge.1)
            }
            Violation::OccurrencesDisconnected { vertex } => {
                write!(f, "bags containing {} are disconnected", vertex)
            }
            Violation::WidthExceeded { width } => write!(f, "width {} exceeds 11", width),
        }
    }
}

/// Checks the tree shape, vertex and edge coverage, occurrence connectivity
/// and the width bound; reports the first failure.
pub fn validate(word: &NestedWord2, td: &TreeDecomposition) -> Result<(), Violation> {
    let n = word.len();
    let bags = td.bags.len();
    // tree: connected and acyclic (allow the empty decomposition only for
    // the empty word)
    if bags == 0 {
        if n > 0 {
            return Err(Violation::VertexUncovered { vertex: 1 });
        }
        return Ok(());
    }
    if td.edges.len() + 1 != bags {
        return Err(Violation::NotATree);
    }
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in &td.edges {
        if a >= bags || b >= bags {
            return Err(Violation::NotATree);
        }
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut seen = alloc::vec![false; bags];
    let mut stack = alloc::vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in adj.get(&v).into_iter().flatten() {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Violation::NotATree);
    }
    // every vertex in some bag
    for v in 1..=n {
        if !td.bags.iter().any(|b| b.contains(&v)) {
            return Err(Violation::VertexUncovered { vertex: v });
        }
    }
    // every graph edge inside some bag
    let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
    edges.extend(word.m1().pairs().iter().copied());
    edges.extend(word.m2().pairs().iter().copied());
    for e in edges {
        if !td.bags.iter().any(|b| b.contains(&e.0) && b.contains(&e.1)) {
            return Err(Violation::EdgeUncovered { edge: e });
        }
    }
    // occurrence connectivity per vertex
    for v in 1..=n {
        let holders: BTreeSet<usize> = (0..bags).filter(|&i| td.bags[i].contains(&v)).collect();
        let start = *holders.iter().next().unwrap();
        let mut seen: BTreeSet<usize> = [start].into_iter().collect();
        let mut stack = alloc::vec![start];
        while let Some(x) = stack.pop() {
            for &y in adj.get(&x).into_iter().flatten() {
                if holders.contains(&y) && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        if seen.len() != holders.len() {
            return Err(Violation::OccurrencesDisconnected { vertex: v });
        }
    }
    let width = td.width();
    if width > 11 {
        return Err(Violation::WidthExceeded { width });
    }
    Ok(())
}

struct Builder {
    bags: Vec<BTreeSet<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn bag(&mut self, contents: BTreeSet<usize>) -> usize {
        self.bags.push(contents);
        self.bags.len() - 1
    }

    fn link(&mut self, a: usize, b: usize) {
        self.edges.push((a, b));
    }

    fn bounds(iv: Interval) -> BTreeSet<usize> {
        if iv.is_empty() {
            BTreeSet::new()
        } else {
            [iv.lo, iv.hi].into_iter().collect()
        }
    }

    fn span_bounds(span: &Span) -> BTreeSet<usize> {
        match span {
            Span::Interval(iv) => Self::bounds(*iv),
            Span::Pair(l, r) => {
                let mut b = Self::bounds(*l);
                b.extend(Self::bounds(*r));
                b
            }
        }
    }

    /// Builds the subtree for a derivation node and returns its root bag,
    /// which contains exactly the bounds of the node's span.
    fn build(&mut self, d: &Derivation) -> usize {
        let root_contents = Self::span_bounds(&d.span);
        match d.rule {
            Rule::WEps | Rule::WInt | Rule::HEps => self.bag(root_contents),
            Rule::WConcat | Rule::WWrap | Rule::HConcat | Rule::HNest => {
                let root = self.bag(root_contents.clone());
                let mut glue = root_contents;
                for c in &d.children {
                    glue.extend(Self::span_bounds(&c.span));
                }
                let glue = self.bag(glue);
                self.link(root, glue);
                for c in &d.children {
                    let child = self.build(c);
                    self.link(glue, child);
                }
                root
            }
            Rule::HWave => {
                let root = self.bag(root_contents.clone());
                let inner = &d.children[0];
                let mut glue = root_contents;
                glue.extend(Self::span_bounds(&inner.span));
                let glue = self.bag(glue);
                self.link(root, glue);
                let child = self.build(inner);
                self.link(glue, child);
                root
            }
        }
    }
}

/// Constructive tree decomposition of a wave word, following its grammar
/// derivation; always validated before returning.
pub fn decompose(word: &NestedWord2) -> Result<TreeDecomposition, TreedecError> {
    let derivation = grammar::derive(word).map_err(TreedecError::NotWaveWord)?;
    let mut b = Builder { bags: Vec::new(), edges: Vec::new() };
    b.build(&derivation);
    let td = TreeDecomposition { bags: b.bags, edges: b.edges };
    match validate(word, &td) {
        Ok(()) => Ok(td),
        Err(Violation::WidthExceeded { width }) => Err(TreedecError::WidthExceeded { width }),
        Err(v) => unreachable!("construction violated a decomposition axiom: {}", v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::fixtures::*;

    #[test]
    fn fig2_right_decomposes() {
        let w = fig2_right();
        let td = decompose(&w).unwrap();
        assert!(validate(&w, &td).is_ok());
        assert!(td.width() <= 11);
    }

    #[test]
    fn all_internal_word_has_width_at_most_three() {
        let w = NestedWord2::from_parts("abcde", &[], &[]);
        let td = decompose(&w).unwrap();
        assert!(validate(&w, &td).is_ok());
        // concatenation glue bags hold two bounds per side
        assert!(td.width() <= 3, "width {}", td.width());
    }

    #[test]
    fn omega2_decomposes_within_bound() {
        let w = omega2();
        let td = decompose(&w).unwrap();
        assert!(validate(&w, &td).is_ok());
        assert!(td.bags.len() <= 8 * w.len().max(1));
    }

    #[test]
    fn single_giant_bag_fails_width() {
        let letters: alloc::string::String = core::iter::repeat('a').take(13).collect();
        let w = NestedWord2::from_parts(&letters, &[], &[]);
        let td = TreeDecomposition {
            bags: alloc::vec![(1..=13).collect()],
            edges: alloc::vec![],
        };
        assert_eq!(validate(&w, &td), Err(Violation::WidthExceeded { width: 12 }));
    }

    #[test]
    fn missing_edge_bag_is_reported() {
        let w = NestedWord2::from_parts("ab", &[], &[]);
        let td = TreeDecomposition {
            bags: alloc::vec![[1].into_iter().collect(), [2].into_iter().collect()],
            edges: alloc::vec![(0, 1)],
        };
        assert_eq!(validate(&w, &td), Err(Violation::EdgeUncovered { edge: (1, 2) }));
    }

    #[test]
    fn non_wave_words_are_rejected() {
        assert!(matches!(
            decompose(&fig2_middle()),
            Err(TreedecError::NotWaveWord(_))
        ));
    }
}
