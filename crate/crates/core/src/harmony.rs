//! `(t,s)` systems, their Major/Minor triads and the Tonnetz neighbour rule.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zmod::{gcd, reduce, PitchClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quality {
    #[serde(rename = "M")]
    Major,
    #[serde(rename = "m")]
    Minor,
}

impl Quality {
    pub fn flipped(self) -> Self {
        match self {
            Quality::Major => Quality::Minor,
            Quality::Minor => Quality::Major,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Quality::Major => "M",
            Quality::Minor => "m",
        }
    }
}

impl FromStr for Quality {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "M" | "major" | "Major" => Ok(Quality::Major),
            "m" | "minor" | "Minor" => Ok(Quality::Minor),
            other => Err(format!("unknown chord quality {other:?} (expected M or m)")),
        }
    }
}

/// One tuning universe: `n` pitch classes, Major interval `t`, Minor interval
/// `s` and generator `q = t + s (mod n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HarmonicSystem {
    n: u32,
    t: u32,
    s: u32,
    q: u32,
}

impl HarmonicSystem {
    pub fn new(n: u32, t: u32, s: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::ModulusTooSmall { n, min: 2 });
        }
        for (name, value) in [("t", t), ("s", s)] {
            if value == 0 || value >= n {
                return Err(Error::IntervalOutOfRange {
                    name,
                    value,
                    max: n - 1,
                });
            }
        }
        Ok(Self {
            n,
            t,
            s,
            q: (t + s) % n,
        })
    }

    /// Every `(t,s)` with `1 ≤ t, s ≤ n−1`, ordered by `t` then `s`.
    pub fn all(n: u32) -> Vec<HarmonicSystem> {
        (1..n)
            .flat_map(|t| (1..n).map(move |s| (t, s)))
            .map(|(t, s)| HarmonicSystem::new(n, t, s).expect("in range"))
            .collect()
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn t(self) -> u32 {
        self.t
    }

    pub fn s(self) -> u32 {
        self.s
    }

    pub fn q(self) -> u32 {
        self.q
    }

    pub fn pair(self) -> (u32, u32) {
        (self.t, self.s)
    }

    /// The same system with the two intervals exchanged. Its Levi graph is
    /// this one's with the two sides swapped.
    pub fn swapped(self) -> Self {
        Self {
            n: self.n,
            t: self.s,
            s: self.t,
            q: self.q,
        }
    }

    /// `gcd(q, n) > 1`; `q = 0` counts as degenerate.
    pub fn is_degenerate(self) -> bool {
        gcd(self.q.into(), self.n.into()) != 1
    }

    pub fn triple(self, quality: Quality, root: u32) -> [u32; 3] {
        let r = root % self.n;
        let middle = match quality {
            Quality::Major => self.t,
            Quality::Minor => self.s,
        };
        [r, (r + middle) % self.n, (r + self.q) % self.n]
    }

    pub fn chord(self, quality: Quality, root: u32) -> Chord {
        let root = root % self.n;
        Chord {
            quality,
            root,
            n: self.n,
            triple: self.triple(quality, root),
        }
    }

    /// Roots of the three neighbours of `(quality, root)` in P, L, R order.
    /// Major `r` → Minor `r, r+t, r−s`; Minor `r` → Major `r, r−t, r+s`.
    pub fn neighbor_roots(self, quality: Quality, root: u32) -> [u32; 3] {
        let (r, t, s) = (i64::from(root), i64::from(self.t), i64::from(self.s));
        let [p, l, rel] = match quality {
            Quality::Major => [r, r + t, r - s],
            Quality::Minor => [r, r - t, r + s],
        };
        [reduce(p, self.n), reduce(l, self.n), reduce(rel, self.n)]
    }

    pub fn neighbors(self, chord: &Chord) -> Result<[Chord; 3]> {
        if !self.contains(chord) {
            return Err(Error::ChordSystemMismatch {
                chord: chord.to_string(),
                system: self.to_string(),
            });
        }
        let other = chord.quality.flipped();
        Ok(self
            .neighbor_roots(chord.quality, chord.root)
            .map(|r| self.chord(other, r)))
    }

    pub fn contains(self, chord: &Chord) -> bool {
        chord.n == self.n
            && chord.root < self.n
            && chord.triple == self.triple(chord.quality, chord.root)
    }

    /// `(from, to)` adjacent in the Tonnetz (opposite qualities, neighbour rule).
    pub fn adjacent(self, from: (Quality, u32), to: (Quality, u32)) -> bool {
        from.0 != to.0 && self.neighbor_roots(from.0, from.1).contains(&to.1)
    }

    /// Major chords rooted `0..n` followed by Minor chords rooted `0..n`.
    pub fn all_chords(self) -> Vec<Chord> {
        [Quality::Major, Quality::Minor]
            .into_iter()
            .flat_map(|q| (0..self.n).map(move |r| self.chord(q, r)))
            .collect()
    }
}

impl fmt::Display for HarmonicSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}) in Z_{}", self.t, self.s, self.n)
    }
}

impl Serialize for HarmonicSystem {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("HarmonicSystem", 4)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("s", &self.s)?;
        st.serialize_field("q", &self.q)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for HarmonicSystem {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: u32,
            t: u32,
            s: u32,
            q: Option<u32>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let sys = HarmonicSystem::new(raw.n, raw.t, raw.s).map_err(serde::de::Error::custom)?;
        if raw.q.is_some_and(|q| q != sys.q) {
            return Err(serde::de::Error::custom(format!(
                "q must equal t + s mod n = {}",
                sys.q
            )));
        }
        Ok(sys)
    }
}

/// An ordered pitch-class triple `(root, quality tone, generator tone)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chord {
    pub quality: Quality,
    pub root: u32,
    n: u32,
    triple: [u32; 3],
}

impl Chord {
    pub fn triple(&self) -> [u32; 3] {
        self.triple
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    pub fn root_class(&self) -> PitchClass {
        PitchClass::new(self.root, self.n).expect("root reduced")
    }

    /// Unordered view; collapses repeated tones.
    pub fn pitch_set(&self) -> PitchSet {
        PitchSet::from_tones(self.triple)
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.triple;
        write!(f, "{}{} = ({a}, {b}, {c})", self.quality.symbol(), self.root)
    }
}

/// Sorted, de-duplicated set of at most three pitch classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PitchSet {
    tones: [u32; 3],
    len: u8,
}

impl PitchSet {
    pub fn from_tones(mut tones: [u32; 3]) -> Self {
        tones.sort_unstable();
        let mut out = [u32::MAX; 3];
        let mut len = 0;
        for t in tones {
            if len == 0 || out[len - 1] != t {
                out[len] = t;
                len += 1;
            }
        }
        Self {
            tones: out,
            len: len as u8,
        }
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.tones[..usize::from(self.len)]
    }

    pub fn len(&self) -> usize {
        usize::from(self.len)
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn intersection_len(&self, other: &PitchSet) -> usize {
        self.as_slice()
            .iter()
            .filter(|t| other.as_slice().contains(t))
            .count()
    }

    pub fn map(&self, f: impl Fn(u32) -> u32) -> PitchSet {
        let mut tones = [0; 3];
        for (i, slot) in tones.iter_mut().enumerate() {
            *slot = f(self.tones[i.min(self.len() - 1)]);
        }
        PitchSet::from_tones(tones)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Quality::{Major, Minor};
    use std::collections::BTreeSet;

    fn sys(n: u32, t: u32, s: u32) -> HarmonicSystem {
        HarmonicSystem::new(n, t, s).unwrap()
    }

    #[test]
    fn make_system_computes_generator() {
        assert_eq!(sys(12, 4, 3).q(), 7);
        assert_eq!(sys(10, 6, 5).q(), 1);
        assert_eq!(sys(12, 9, 8).q(), 5);
        assert_eq!(sys(12, 6, 6).q(), 0);
    }

    #[test]
    fn make_system_rejects_out_of_range() {
        assert!(matches!(HarmonicSystem::new(12, 0, 3), Err(Error::IntervalOutOfRange { name: "t", .. })));
        assert!(matches!(HarmonicSystem::new(12, 4, 12), Err(Error::IntervalOutOfRange { name: "s", .. })));
        assert!(matches!(HarmonicSystem::new(1, 0, 0), Err(Error::ModulusTooSmall { .. })));
    }

    #[test]
    fn degeneracy() {
        assert!(!sys(12, 4, 3).is_degenerate());
        assert!(sys(12, 3, 3).is_degenerate());
        assert!(!sys(10, 6, 5).is_degenerate());
        assert!(sys(12, 6, 6).is_degenerate());
    }

    #[test]
    fn chord_triples() {
        assert_eq!(sys(12, 9, 4).chord(Major, 0).triple(), [0, 9, 1]);
        assert_eq!(sys(12, 4, 3).chord(Minor, 0).triple(), [0, 3, 7]);
        assert_eq!(sys(10, 2, 5).chord(Minor, 0).triple(), [0, 5, 7]);
    }

    #[test]
    fn neighbour_examples() {
        let roots = |s: HarmonicSystem, q, r| {
            s.neighbors(&s.chord(q, r))
                .unwrap()
                .map(|c| (c.quality, c.root))
        };
        assert_eq!(roots(sys(12, 4, 3), Major, 0), [(Minor, 0), (Minor, 4), (Minor, 9)]);
        assert_eq!(roots(sys(12, 9, 4), Major, 0), [(Minor, 0), (Minor, 9), (Minor, 8)]);
        assert_eq!(roots(sys(10, 6, 5), Minor, 0), [(Major, 0), (Major, 4), (Major, 5)]);
    }

    #[test]
    fn neighbours_reject_foreign_chord() {
        let foreign = sys(12, 9, 4).chord(Major, 0);
        assert!(matches!(
            sys(12, 4, 3).neighbors(&foreign),
            Err(Error::ChordSystemMismatch { .. })
        ));
    }

    #[test]
    fn all_chords_counts_and_order() {
        let chords = sys(12, 4, 3).all_chords();
        assert_eq!(chords.len(), 24);
        assert_eq!((chords[0].quality, chords[0].root), (Major, 0));
        assert_eq!((chords[12].quality, chords[12].root), (Minor, 0));
        assert_eq!(sys(10, 6, 5).all_chords().len(), 20);
        assert_eq!(sys(2, 1, 1).all_chords().len(), 4);
    }

    #[test]
    fn reciprocity_and_shared_tones() {
        for n in 2..=12 {
            for s in HarmonicSystem::all(n) {
                for r in 0..n {
                    for (slot, j) in s.neighbor_roots(Major, r).into_iter().enumerate() {
                        assert!(s.neighbor_roots(Minor, j).contains(&r), "{s} M{r} slot {slot}");
                    }
                    for j in s.neighbor_roots(Minor, r) {
                        assert!(s.neighbor_roots(Major, j).contains(&r));
                    }
                }
                let majors: BTreeSet<_> = (0..n).map(|r| s.chord(Major, r).pitch_set()).collect();
                let minors: BTreeSet<_> = (0..n).map(|r| s.chord(Minor, r).pitch_set()).collect();
                let distinct = s.all_chords().iter().all(|c| c.pitch_set().len() == 3)
                    && majors.is_disjoint(&minors);
                if s.is_degenerate() || !distinct {
                    continue;
                }
                for r in 0..n {
                    let m = s.chord(Major, r).pitch_set();
                    for j in s.neighbor_roots(Major, r) {
                        assert_eq!(m.intersection_len(&s.chord(Minor, j).pitch_set()), 2, "{s} M{r} m{j}");
                    }
                }
            }
        }
    }

    #[test]
    fn inversion_identities() {
        let (s98, s43, s83, s94) = (sys(12, 9, 8), sys(12, 4, 3), sys(12, 8, 3), sys(12, 9, 4));
        for k in 0..12 {
            for q in [Major, Minor] {
                assert_eq!(s98.chord(q, k).pitch_set(), s43.chord(q, (k + 5) % 12).pitch_set());
                assert_eq!(s83.chord(q, k).pitch_set(), s94.chord(q, (k + 11) % 12).pitch_set());
            }
        }
    }

    #[test]
    fn pitch_set_collapses_repeats() {
        let c = sys(12, 6, 6).chord(Major, 1);
        assert_eq!(c.triple(), [1, 7, 1]);
        assert_eq!(c.pitch_set().as_slice(), &[1, 7]);
    }

    #[test]
    fn system_json_round_trip() {
        let s = sys(12, 9, 4);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"n":12,"t":9,"s":4,"q":1}"#);
        assert_eq!(serde_json::from_str::<HarmonicSystem>(r#"{"n":12,"t":9,"s":4}"#).unwrap(), s);
        assert!(serde_json::from_str::<HarmonicSystem>(r#"{"n":12,"t":9,"s":4,"q":2}"#).is_err());
    }
}
