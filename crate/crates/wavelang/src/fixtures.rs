//! Shipping fixtures: the running example automaton, the figure words, the
//! aⁿbⁿcⁿdⁿ wave family, and the cyclic-shift corpus.

use std::fmt;

use wavewords_core::automaton::NamedTransition;
use wavewords_core::{Automaton2NW, Kind, Matching, NestedWord2};

fn named(
    kind: Kind,
    src: &str,
    hin: &[&str],
    letter: &str,
    hout: &[&str],
    dst: &str,
) -> NamedTransition {
    NamedTransition {
        kind,
        src: src.into(),
        hin: hin.iter().map(|s| s.to_string()).collect(),
        letter: letter.into(),
        hout: hout.iter().map(|s| s.to_string()).collect(),
        dst: dst.into(),
    }
}

/// The running example automaton: deterministic, in post form, accepting the
/// fully nested wave words over a, b, c, d whose projection is
/// { aⁿbⁿcⁿdⁿ | n ≥ 1 }.
pub fn a_ex() -> Automaton2NW {
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
    let names = |list: &[&str]| list.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    Automaton2NW::new(
        names(&["qa", "qb", "qc", "qd"]),
        names(&["qa"]),
        names(&["qd"]),
        names(&["qa", "qb", "qc", "qd"]),
        names(&["a", "b", "c", "d"]),
        transitions,
    )
    .expect("fixture is well formed")
}

fn word(letters: &str, m1: &[(usize, usize)], m2: &[(usize, usize)]) -> NestedWord2 {
    let letters: Vec<String> = letters.chars().map(|c| c.to_string()).collect();
    let n = letters.len();
    NestedWord2::new(
        letters,
        Matching::new(n, m1.iter().copied()).expect("fixture matching"),
        Matching::new(n, m2.iter().copied()).expect("fixture matching"),
    )
    .expect("fixture word")
}

/// The middle 2-nested word of the three-word figure: not a wave word.
pub fn fig2_middle() -> NestedWord2 {
    word("abacbab", &[(1, 3), (4, 7), (5, 6)], &[(2, 7), (3, 4)])
}

/// The right 2-nested word of the same figure: a wave word with one wave.
pub fn fig2_right() -> NestedWord2 {
    word("abacbab", &[(1, 3), (4, 7)], &[(1, 7), (3, 4)])
}

/// The wave word aⁿbⁿcⁿdⁿ with both matchings fully nested; `omega_n(2)` is
/// the word of the drawn example run.
pub fn omega_n(n: usize) -> NestedWord2 {
    let mut letters = String::new();
    for ch in ["a", "b", "c", "d"] {
        letters.push_str(&ch.repeat(n));
    }
    let mut m1 = Vec::new();
    let mut m2 = Vec::new();
    for i in 1..=n {
        m1.push((i, 2 * n + 1 - i));
        m1.push((2 * n + i, 4 * n + 1 - i));
    }
    for i in 1..=2 * n {
        m2.push((i, 4 * n + 1 - i));
    }
    word(&letters, &m1, &m2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixtureError {
    BadArity { m: usize, k: usize, letters: usize },
}

impl fmt::Display for FixtureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureError::BadArity { m, k, letters } => write!(
                f,
                "cyclic family needs m >= 2, k >= 2 and exactly 2m letters, got m={}, k={}, {} letters",
                m, k, letters
            ),
        }
    }
}

impl std::error::Error for FixtureError {}

/// The cyclic-shift family: `#u1#u2#...#uk#` where each block has 2m letters
/// and every block is the right rotation of its predecessor. The first
/// matching nests each block onto itself, the second nests the second half
/// of each block onto the first half of the next and adds the outer arches
/// tying the first block to the last. For k = 2 the result is a 2-wave word;
/// for larger k the cycles grow longer and leave the 2-wave class.
pub fn gen_cyclic(m: usize, k: usize, letters: &[String]) -> Result<NestedWord2, FixtureError> {
    if m < 2 || k < 2 || letters.len() != 2 * m {
        return Err(FixtureError::BadArity { m, k, letters: letters.len() });
    }
    let block = 2 * m;
    let stride = block + 1;
    let total = k * stride + 1;
    let mut text: Vec<String> = vec!["#".to_string()];
    let mut current: Vec<String> = letters.to_vec();
    for _ in 0..k {
        text.extend(current.iter().cloned());
        text.push("#".to_string());
        current.rotate_right(1);
    }
    debug_assert_eq!(text.len(), total);
    let start = |b: usize| b * stride + 2; // first letter of block b
    let mut m1 = Vec::new();
    for b in 0..k {
        for j in 1..=m {
            m1.push((start(b) + j - 1, start(b) + block - j));
        }
    }
    let mut m2 = Vec::new();
    for b in 0..k - 1 {
        for j in 1..=m {
            m2.push((start(b) + m + j - 1, start(b + 1) + m - j));
        }
    }
    for i in 2..=m + 1 {
        m2.push((i, total + 1 - i));
    }
    let m1 = Matching::new(total, m1).expect("per-block nesting is non-crossing");
    let m2 = Matching::new(total, m2).expect("cross-block nesting is non-crossing");
    Ok(NestedWord2::new(text, m1, m2).expect("lengths agree"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_ex_accepts_the_run_example() {
        let a = a_ex();
        assert!(a.is_deterministic());
        assert!(a.is_post_form());
        assert!(a.accepts_bruteforce(&omega_n(2)).unwrap().is_some());
    }

    #[test]
    fn figure_words_classify_as_stated() {
        assert!(!fig2_middle().is_wave_word());
        assert!(fig2_right().is_wave_word());
    }

    #[test]
    fn cyclic_k2_is_a_wave_word() {
        for m in 2..=5 {
            let letters: Vec<String> = (1..=2 * m).map(|i| format!("a{}", i)).collect();
            let w = gen_cyclic(m, 2, &letters).unwrap();
            assert_eq!(w.len(), 2 * (2 * m + 1) + 1);
            assert!(w.is_wave_word(), "m = {}", m);
        }
    }

    #[test]
    fn cyclic_k4_matches_the_drawn_arches() {
        let letters: Vec<String> = (1..=4).map(|i| format!("a{}", i)).collect();
        let w = gen_cyclic(2, 4, &letters).unwrap();
        assert_eq!(w.len(), 21);
        assert_eq!(
            w.letters().join(" "),
            "# a1 a2 a3 a4 # a4 a1 a2 a3 # a3 a4 a1 a2 # a2 a3 a4 a1 #"
        );
        assert_eq!(
            w.m1().pairs(),
            &[(2, 5), (3, 4), (7, 10), (8, 9), (12, 15), (13, 14), (17, 20), (18, 19)]
        );
        assert_eq!(
            w.m2().pairs(),
            &[(2, 20), (3, 19), (4, 8), (5, 7), (9, 13), (10, 12), (14, 18), (15, 17)]
        );
        // the blocks chain into one long alternating cycle, so no 2-waves
        assert!(!w.is_wave_word());
    }

    #[test]
    fn cyclic_arity_is_checked() {
        let letters: Vec<String> = (1..=3).map(|i| format!("a{}", i)).collect();
        assert!(gen_cyclic(2, 2, &letters).is_err());
    }
}
