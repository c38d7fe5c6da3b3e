//! Line-oriented text formats.
//!
//! 2-nested words (`.2nw`):
//! ```text
//! # comment
//! word a b a c b a b
//! m1 (1,3) (4,7)
//! m2 (1,7) (3,4)
//! ```
//! A bare `word`, `m1` or `m2` denotes the empty word or matching.
//!
//! Automata (`.2nwa`): the five header lines `alphabet`, `states`, `hier`,
//! `initial`, `final`, then one transition per line:
//! `<kind> <src> <received...> <letter> <emitted...> <dst>` with kind one of
//! `cc cr rc rr ci ic ri ir ii`; received count is the number of `r` in the
//! kind, emitted count the number of `c`, and the first matching's component
//! comes before the second's.

use std::collections::BTreeSet;
use std::fmt;

use wavewords_core::automaton::NamedTransition;
use wavewords_core::lil::{LilLetter, LilSym};
use wavewords_core::{Automaton2NW, Kind, Matching, NestedWord2};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, column, message: message.into() })
}

/// Content lines with comments stripped: (line number, tokens with columns).
fn tokenize(text: &str) -> Vec<(usize, Vec<(usize, &str)>)> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(cut) => &raw[..cut],
            None => raw,
        };
        let mut tokens = Vec::new();
        let mut offset = 0;
        for piece in line.split_whitespace() {
            let col = line[offset..].find(piece).unwrap() + offset;
            offset = col + piece.len();
            tokens.push((col + 1, piece));
        }
        if !tokens.is_empty() {
            out.push((idx + 1, tokens));
        }
    }
    out
}

fn parse_pairs(
    line: usize,
    tokens: &[(usize, &str)],
) -> Result<Vec<(usize, usize)>, ParseError> {
    let mut pairs = Vec::new();
    for &(col, tok) in tokens {
        let inner = tok
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or(ParseError {
                line,
                column: col,
                message: format!("expected a pair like (1,3), got {:?}", tok),
            })?;
        let (a, b) = inner.split_once(',').ok_or(ParseError {
            line,
            column: col,
            message: format!("expected a pair like (1,3), got {:?}", tok),
        })?;
        let parse = |s: &str| -> Result<usize, ParseError> {
            s.trim().parse().map_err(|_| ParseError {
                line,
                column: col,
                message: format!("bad position {:?}", s),
            })
        };
        pairs.push((parse(a)?, parse(b)?));
    }
    Ok(pairs)
}

/// Parses the 2-nested word format.
pub fn parse_word(text: &str) -> Result<NestedWord2, ParseError> {
    let lines = tokenize(text);
    if lines.len() != 3 {
        return err(
            lines.first().map_or(1, |l| l.0),
            1,
            format!("expected the three lines word/m1/m2, got {}", lines.len()),
        );
    }
    let expect = |i: usize, keyword: &str| -> Result<(usize, Vec<(usize, &str)>), ParseError> {
        let (line, tokens) = &lines[i];
        if tokens[0].1 != keyword {
            return err(*line, tokens[0].0, format!("expected {:?}", keyword));
        }
        Ok((*line, tokens[1..].to_vec()))
    };
    let (_, letters) = expect(0, "word")?;
    let letters: Vec<String> = letters.iter().map(|&(_, t)| t.to_string()).collect();
    let n = letters.len();
    let (l1, p1) = expect(1, "m1")?;
    let (l2, p2) = expect(2, "m2")?;
    let m1 = Matching::new(n, parse_pairs(l1, &p1)?)
        .map_err(|e| ParseError { line: l1, column: 1, message: e.to_string() })?;
    let m2 = Matching::new(n, parse_pairs(l2, &p2)?)
        .map_err(|e| ParseError { line: l2, column: 1, message: e.to_string() })?;
    NestedWord2::new(letters, m1, m2)
        .map_err(|e| ParseError { line: 1, column: 1, message: e.to_string() })
}

/// Emits the 2-nested word format.
pub fn emit_word(word: &NestedWord2) -> String {
    let mut out = String::from("word");
    for l in word.letters() {
        out.push(' ');
        out.push_str(l);
    }
    out.push('\n');
    for (name, m) in [("m1", word.m1()), ("m2", word.m2())] {
        out.push_str(name);
        for &(i, j) in m.pairs() {
            out.push_str(&format!(" ({},{})", i, j));
        }
        out.push('\n');
    }
    out
}

/// Parses the automaton format.
pub fn parse_automaton(text: &str) -> Result<Automaton2NW, ParseError> {
    let mut alphabet: Option<Vec<String>> = None;
    let mut states: Option<Vec<String>> = None;
    let mut hier: Option<Vec<String>> = None;
    let mut initial: Option<Vec<String>> = None;
    let mut finals: Option<Vec<String>> = None;
    let mut transitions: Vec<NamedTransition> = Vec::new();
    for (line, tokens) in tokenize(text) {
        let (col0, head) = tokens[0];
        let rest: Vec<String> = tokens[1..].iter().map(|&(_, t)| t.to_string()).collect();
        let set = |slot: &mut Option<Vec<String>>, what: &str| -> Result<(), ParseError> {
            if slot.is_some() {
                return err(line, col0, format!("duplicate {:?} line", what));
            }
            *slot = Some(rest.clone());
            Ok(())
        };
        match head {
            "alphabet" => set(&mut alphabet, "alphabet")?,
            "states" => set(&mut states, "states")?,
            "hier" => set(&mut hier, "hier")?,
            "initial" => set(&mut initial, "initial")?,
            "final" => set(&mut finals, "final")?,
            code => {
                let kind = Kind::from_code(code).ok_or(ParseError {
                    line,
                    column: col0,
                    message: format!("unknown keyword or transition kind {:?}", code),
                })?;
                let (hin_n, hout_n) = (kind.in_arity(), kind.out_arity());
                let want = 1 + hin_n + 1 + hout_n + 1;
                if rest.len() != want {
                    return err(
                        line,
                        col0,
                        format!(
                            "{} transition takes {} fields (src, {} received, letter, {} emitted, dst), got {}",
                            code, want, hin_n, hout_n, rest.len()
                        ),
                    );
                }
                transitions.push(NamedTransition {
                    kind,
                    src: rest[0].clone(),
                    hin: rest[1..1 + hin_n].to_vec(),
                    letter: rest[1 + hin_n].clone(),
                    hout: rest[2 + hin_n..2 + hin_n + hout_n].to_vec(),
                    dst: rest[want - 1].clone(),
                });
            }
        }
    }
    let need = |slot: Option<Vec<String>>, what: &str| {
        slot.ok_or(ParseError {
            line: 1,
            column: 1,
            message: format!("missing {:?} line", what),
        })
    };
    Automaton2NW::new(
        need(states, "states")?,
        need(initial, "initial")?,
        need(finals, "final")?,
        need(hier, "hier")?,
        need(alphabet, "alphabet")?,
        transitions,
    )
    .map_err(|e| ParseError { line: 1, column: 1, message: e.to_string() })
}

/// Emits the automaton format in a canonical header order.
pub fn emit_automaton(aut: &Automaton2NW) -> String {
    let join = |names: &[String]| names.join(" ");
    let pick = |ids: &BTreeSet<usize>| {
        ids.iter().map(|&q| aut.states()[q].clone()).collect::<Vec<_>>().join(" ")
    };
    let mut out = String::new();
    out.push_str(&format!("alphabet {}\n", join(aut.alphabet())));
    out.push_str(&format!("states {}\n", join(aut.states())));
    out.push_str(&format!("hier {}\n", join(aut.hier())));
    out.push_str(&format!("initial {}\n", pick(aut.initial())));
    out.push_str(&format!("final {}\n", pick(aut.finals())));
    for (kind, t) in aut.transitions() {
        out.push_str(kind.code());
        out.push(' ');
        out.push_str(&aut.states()[t.src]);
        for &h in &t.hin {
            out.push(' ');
            out.push_str(&aut.hier()[h]);
        }
        out.push(' ');
        out.push_str(&aut.alphabet()[t.letter]);
        for &h in &t.hout {
            out.push(' ');
            out.push_str(&aut.hier()[h]);
        }
        out.push(' ');
        out.push_str(&aut.states()[t.dst]);
        out.push('\n');
    }
    out
}

/// Parses a whitespace-separated paired word against an automaton's name
/// tables: `~` is the bar prefix, `p.1` and `p.2` are indexed hierarchical
/// symbols, and remaining tokens are states or alphabet letters.
pub fn parse_paired(text: &str, aut: &Automaton2NW) -> Result<Vec<LilLetter>, ParseError> {
    let mut out = Vec::new();
    for (line, tokens) in tokenize(text) {
        for (col, tok) in tokens {
            let (bar, body) = match tok.strip_prefix('~') {
                Some(rest) => (true, rest),
                None => (false, tok),
            };
            let sym = if let Some(p) = body.strip_suffix(".1") {
                if aut.hier_id(p).is_none() {
                    return err(line, col, format!("unknown hierarchical state {:?}", p));
                }
                LilSym::Idx(p.to_string(), 1)
            } else if let Some(p) = body.strip_suffix(".2") {
                if aut.hier_id(p).is_none() {
                    return err(line, col, format!("unknown hierarchical state {:?}", p));
                }
                LilSym::Idx(p.to_string(), 2)
            } else {
                let is_state = aut.state_id(body).is_some();
                let is_letter = aut.letter_id(body).is_some();
                match (is_state, is_letter) {
                    (true, false) => LilSym::State(body.to_string()),
                    (false, true) => LilSym::Letter(body.to_string()),
                    (true, true) => {
                        return err(
                            line,
                            col,
                            format!("token {:?} is both a state and a letter", body),
                        )
                    }
                    (false, false) => {
                        return err(line, col, format!("unknown token {:?}", body))
                    }
                }
            };
            out.push(LilLetter { sym, bar });
        }
    }
    Ok(out)
}

/// Emits a paired word as whitespace-separated tokens.
pub fn emit_paired(word: &[LilLetter]) -> String {
    word.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn word_round_trip() {
        let w = fixtures::fig2_right();
        let text = emit_word(&w);
        assert_eq!(parse_word(&text).unwrap(), w);
    }

    #[test]
    fn empty_word_round_trip() {
        let text = "word\nm1\nm2\n";
        let w = parse_word(text).unwrap();
        assert!(w.is_empty());
        assert_eq!(emit_word(&w), text);
    }

    #[test]
    fn comments_and_errors() {
        let text = "# a wave word\nword a a # letters\nm1 (1,2)\nm2\n";
        assert!(parse_word(text).is_ok());
        let bad = "word a a\nm1 (1\nm2\n";
        let e = parse_word(bad).unwrap_err();
        assert_eq!((e.line, e.column), (2, 4));
        let crossing = "word a a a a\nm1 (1,3) (2,4)\nm2\n";
        let e = parse_word(crossing).unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn automaton_round_trip() {
        let a = fixtures::a_ex();
        let text = emit_automaton(&a);
        assert_eq!(parse_automaton(&text).unwrap(), a);
    }

    #[test]
    fn transition_arity_is_checked_at_parse_time() {
        let text = "alphabet a\nstates q\nhier q\ninitial q\nfinal q\ncc q a q q\n";
        let e = parse_automaton(text).unwrap_err();
        assert_eq!(e.line, 6);
    }
}
