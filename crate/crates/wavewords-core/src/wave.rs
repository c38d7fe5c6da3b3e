//! 2-waves and the wave-word check.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::matching::MatchingId;
use crate::word::NestedWord2;

/// Four positions `i1 < i2 < i3 < i4` carrying the two top arches
/// `M1(i1,i2)`, `M1(i3,i4)`, the bottom arch `M2(i2,i3)` and the support
/// arch `M2(i1,i4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Wave {
    pub i1: usize,
    pub i2: usize,
    pub i3: usize,
    pub i4: usize,
}

impl Wave {
    /// The four arches of this wave.
    pub fn arches(&self) -> [Arch; 4] {
        [
            Arch { matching: MatchingId::M1, call: self.i1, ret: self.i2 },
            Arch { matching: MatchingId::M1, call: self.i3, ret: self.i4 },
            Arch { matching: MatchingId::M2, call: self.i2, ret: self.i3 },
            Arch { matching: MatchingId::M2, call: self.i1, ret: self.i4 },
        ]
    }
}

impl fmt::Display for Wave {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.i1, self.i2, self.i3, self.i4)
    }
}

/// One arch of one matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arch {
    pub matching: MatchingId,
    pub call: usize,
    pub ret: usize,
}

impl fmt::Display for Arch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.matching, self.call, self.ret)
    }
}

/// Outcome of the wave-word check: either every arch is mapped to a covering
/// wave, or the arches belonging to no wave are listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WaveCertificate {
    Wave { cover: BTreeMap<Arch, Wave> },
    NotWave { uncovered: Vec<Arch> },
}

impl WaveCertificate {
    pub fn is_wave(&self) -> bool {
        matches!(self, WaveCertificate::Wave { .. })
    }
}

impl NestedWord2 {
    /// All 2-waves of the word, found by closing the cycle from each M1 arch
    /// through the two direction maps.
    pub fn waves(&self) -> Vec<Wave> {
        let mut out = Vec::new();
        for &(i1, i2) in self.m1().pairs() {
            let Some(i3) = self.m2().ret_of(i2) else { continue };
            let Some(i4) = self.m1().ret_of(i3) else { continue };
            if self.m2().ret_of(i1) == Some(i4) && i2 < i3 {
                out.push(Wave { i1, i2, i3, i4 });
            }
        }
        out
    }

    /// Checks that every arch of either matching belongs to some 2-wave and
    /// produces the covering map, or the offending arches.
    pub fn wave_certificate(&self) -> WaveCertificate {
        let mut cover: BTreeMap<Arch, Wave> = BTreeMap::new();
        for wave in self.waves() {
            for arch in wave.arches() {
                cover.entry(arch).or_insert(wave);
            }
        }
        let mut uncovered = Vec::new();
        for (id, m) in [(MatchingId::M1, self.m1()), (MatchingId::M2, self.m2())] {
            for &(call, ret) in m.pairs() {
                let arch = Arch { matching: id, call, ret };
                if !cover.contains_key(&arch) {
                    uncovered.push(arch);
                }
            }
        }
        if uncovered.is_empty() {
            WaveCertificate::Wave { cover }
        } else {
            WaveCertificate::NotWave { uncovered }
        }
    }

    pub fn is_wave_word(&self) -> bool {
        self.wave_certificate().is_wave()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::fixtures::*;
    use alloc::collections::BTreeSet;

    /// Quadruple-scan oracle for the wave search.
    pub(crate) fn waves_by_scan(w: &NestedWord2) -> BTreeSet<Wave> {
        let n = w.len();
        let mut out = BTreeSet::new();
        for i1 in 1..=n {
            for i2 in i1 + 1..=n {
                for i3 in i2 + 1..=n {
                    for i4 in i3 + 1..=n {
                        if w.m1().ret_of(i1) == Some(i2)
                            && w.m1().ret_of(i3) == Some(i4)
                            && w.m2().ret_of(i2) == Some(i3)
                            && w.m2().ret_of(i1) == Some(i4)
                        {
                            out.insert(Wave { i1, i2, i3, i4 });
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn omega2_has_the_two_nested_waves() {
        let o = omega2();
        let found: BTreeSet<Wave> = o.waves().into_iter().collect();
        assert_eq!(found, waves_by_scan(&o));
        assert_eq!(
            found.into_iter().collect::<Vec<_>>(),
            [Wave { i1: 1, i2: 4, i3: 5, i4: 8 }, Wave { i1: 2, i2: 3, i3: 6, i4: 7 }]
        );
    }

    #[test]
    fn empty_matchings_give_no_waves() {
        let w = NestedWord2::from_parts("abc", &[], &[]);
        assert!(w.waves().is_empty());
        assert!(w.is_wave_word());
    }

    #[test]
    fn four_wave_contains_no_two_wave() {
        // the 4-wave on 8 positions: one long alternating cycle
        let w = NestedWord2::from_parts(
            "aaaaaaaa",
            &[(1, 2), (3, 4), (5, 6), (7, 8)],
            &[(2, 3), (4, 5), (6, 7), (1, 8)],
        );
        assert!(w.waves().is_empty());
        assert_eq!(waves_by_scan(&w).len(), 0);
        assert!(!w.is_wave_word());
    }

    #[test]
    fn fig2_classification() {
        assert!(fig2_right().is_wave_word());
        let cert = fig2_middle().wave_certificate();
        match cert {
            WaveCertificate::NotWave { uncovered } => {
                assert!(uncovered
                    .contains(&Arch { matching: MatchingId::M1, call: 5, ret: 6 }));
            }
            WaveCertificate::Wave { .. } => panic!("middle word is not a wave word"),
        }
    }

    #[test]
    fn combination_of_waves_is_covered() {
        // 12-position combination: three interleaved waves
        let w = NestedWord2::from_parts(
            "aaaaaaaaaaaa",
            &[(1, 8), (2, 7), (3, 4), (5, 6), (9, 12), (10, 11)],
            &[(1, 12), (2, 11), (3, 6), (4, 5), (7, 10), (8, 9)],
        );
        let cert = w.wave_certificate();
        assert!(cert.is_wave());
        if let WaveCertificate::Wave { cover } = cert {
            assert_eq!(cover.len(), 12);
        }
    }
}
