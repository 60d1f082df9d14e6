//! The published structural claims as runnable checks.
//!
//! Each check recomputes its claim from scratch and reports what it saw.
//! A failing check is reported, never hidden: two of the claims do not hold
//! as literally stated, and their companion checks show what does hold.

use serde::Serialize;

use crate::harmony::{HarmonicSystem, PitchSet, Quality};
use crate::isoclass::{
    classify_orbits, equivalences_coincide, note_induced_isos, reversing_witnesses, Domain, Mode,
    DECAPHONIC_QUARTET, TWELVE_TET_QUARTET,
};
use crate::levigraph::Orientation;
use crate::pathkit::{miniature, transport_path};
use crate::zmod::CrtBasis;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub claim: &'static str,
    pub passed: bool,
    /// Informational checks whose failure is expected or convention-dependent.
    pub soft: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(id: &'static str, claim: &'static str, passed: bool, detail: String) -> Self {
        Self {
            id,
            claim,
            passed,
            soft: false,
            detail,
        }
    }

    fn soft(mut self) -> Self {
        self.soft = true;
        self
    }
}

fn sys(n: u32, (t, s): (u32, u32)) -> HarmonicSystem {
    HarmonicSystem::new(n, t, s).expect("fixed system is valid")
}

fn pairs(list: &[(u32, u32)]) -> String {
    let items: Vec<String> = list.iter().map(|(t, s)| format!("({t},{s})")).collect();
    items.join(" ")
}

pub fn crt_anchors() -> CheckResult {
    let mut seen = Vec::new();
    let mut ok = true;
    for (n, factors, tones, canon) in [(12, [3, 4], [4, 9], (9, 4)), (10, [2, 5], [5, 6], (6, 5))] {
        let basis = CrtBasis::decompose(n, &factors).expect("coprime factors");
        let system = basis.canonical_system().expect("two factors");
        ok &= basis.basis_tones() == tones && system.pair() == canon;
        seen.push(format!("n={n}: tones {:?}, canonical {:?}", basis.basis_tones(), system.pair()));
    }
    CheckResult::new(
        "crt-anchors",
        "primitive tones (4,9) give (9,4) in 12-TET; (5,6) give (6,5) in 10-TET",
        ok,
        seen.join("; "),
    )
}

pub fn twelve_tet_witnesses() -> CheckResult {
    let wanted = [
        ((4, 3), (8, 3), 5, 0, Orientation::Preserving),
        ((4, 3), (9, 4), 5, 1, Orientation::Preserving),
        ((4, 3), (9, 8), 11, 0, Orientation::Reversing),
        ((8, 3), (9, 8), 7, 0, Orientation::Reversing),
    ];
    let mut missing = Vec::new();
    for (src, dst, a, b, o) in wanted {
        let ws = note_induced_isos(sys(12, src), sys(12, dst)).expect("same modulus");
        if !ws
            .iter()
            .any(|w| w.map.multiplier() == a && w.map.offset() == b && w.orientation == o)
        {
            missing.push(format!("{src:?}->{dst:?} {a}x+{b} {o}"));
        }
    }
    CheckResult::new(
        "12tet-witnesses",
        "5x, 5x+1, 11x and 7x connect the 12-TET quartet with the stated orientations",
        missing.is_empty(),
        if missing.is_empty() {
            "all four witnesses found".into()
        } else {
            format!("missing: {}", missing.join(", "))
        },
    )
}

pub fn decaphonic_multipliers() -> CheckResult {
    let src = sys(10, (6, 5));
    let mut bad = Vec::new();
    for (a, dst) in [1, 3, 7, 9].into_iter().zip(DECAPHONIC_QUARTET) {
        let ws = note_induced_isos(src, sys(10, dst)).expect("same modulus");
        let hit = ws.iter().find(|w| w.map.multiplier() == a && w.map.offset() == 0);
        if hit.map(|w| w.orientation) != Some(Orientation::Preserving) {
            bad.push(format!("{a}x to {dst:?}: {:?}", hit.map(|w| w.orientation)));
        }
    }
    CheckResult::new(
        "10tet-multipliers",
        "x, 3x, 7x, 9x carry (6,5) to (6,5), (8,5), (2,5), (4,5) preserving orientation",
        bad.is_empty(),
        if bad.is_empty() {
            "all four preserving".into()
        } else {
            bad.join(", ")
        },
    )
}

pub fn decaphonic_no_reversing() -> CheckResult {
    let found = reversing_witnesses(10, &DECAPHONIC_QUARTET).expect("valid quartet");
    let detail = match found.first() {
        None => "no reversing witness".into(),
        Some(w) => format!(
            "{} reversing witnesses, first: {}x+{} {:?}->{:?}",
            found.len(),
            w.map.multiplier(),
            w.map.offset(),
            w.source.pair(),
            w.target.pair()
        ),
    };
    CheckResult::new(
        "10tet-no-reversing",
        "no note-induced isomorphism within the 10-TET quartet reverses orientation",
        found.is_empty(),
        detail,
    )
}

/// `x ↦ −x` sends every Major triad of a system to a Minor triad of the same
/// system, so reversing self-witnesses exist for every `t ≠ s`.
pub fn negation_reverses() -> CheckResult {
    let mut bad = Vec::new();
    for (n, quartet) in [(12, TWELVE_TET_QUARTET), (10, DECAPHONIC_QUARTET)] {
        for pair in quartet {
            let s = sys(n, pair);
            let ok = note_induced_isos(s, s)
                .expect("same modulus")
                .iter()
                .any(|w| w.map.multiplier() == n - 1 && w.map.offset() == 0 && w.orientation == Orientation::Reversing);
            if !ok {
                bad.push(format!("n={n} {pair:?}"));
            }
        }
    }
    CheckResult::new(
        "negation-reverses",
        "f(x) = -x is an orientation-reversing self-isomorphism of every quartet member",
        bad.is_empty(),
        if bad.is_empty() {
            "holds for all eight systems".into()
        } else {
            bad.join(", ")
        },
    )
}

fn orbit_check(n: u32, mode: Mode, quartet: [(u32, u32); 4], relabel: bool) -> (bool, String) {
    let partition = classify_orbits(n, mode, Domain::NonDegenerate);
    let orbit = partition.orbit_containing(quartet[0].0, quartet[0].1).unwrap_or(&[]).to_vec();
    let mut expected: Vec<(u32, u32)> = quartet.to_vec();
    if relabel {
        expected.extend(quartet.iter().map(|&(t, s)| (s, t)));
    }
    expected.sort_unstable();
    expected.dedup();
    (orbit == expected, format!("n={n} {mode:?}: {}", pairs(&orbit)))
}

pub fn orbit_quartets() -> CheckResult {
    let runs = [
        orbit_check(12, Mode::Abstract, TWELVE_TET_QUARTET, false),
        orbit_check(10, Mode::Abstract, DECAPHONIC_QUARTET, false),
        orbit_check(10, Mode::NoteInduced, DECAPHONIC_QUARTET, false),
    ];
    CheckResult::new(
        "orbit-quartets",
        "the non-degenerate orbit of (4,3) is exactly the 12-TET quartet, of (6,5) the 10-TET quartet",
        runs.iter().all(|r| r.0),
        runs.iter().map(|r| r.1.as_str()).collect::<Vec<_>>().join("; "),
    )
}

pub fn orbit_quartets_relabelled() -> CheckResult {
    let runs = [
        orbit_check(12, Mode::Abstract, TWELVE_TET_QUARTET, true),
        orbit_check(12, Mode::NoteInduced, TWELVE_TET_QUARTET, true),
        orbit_check(10, Mode::Abstract, DECAPHONIC_QUARTET, true),
        orbit_check(10, Mode::NoteInduced, DECAPHONIC_QUARTET, true),
    ];
    CheckResult::new(
        "orbit-quartets-relabelled",
        "the same orbits are exactly the quartets together with their (s,t) relabellings",
        runs.iter().all(|r| r.0),
        runs.iter().map(|r| r.1.as_str()).collect::<Vec<_>>().join("; "),
    )
}

pub fn equivalences(n: u32) -> CheckResult {
    let report = equivalences_coincide(n);
    CheckResult::new(
        if n == 12 { "equivalence-12" } else { "equivalence-10" },
        "abstract and note-induced isomorphism classes coincide over all (t,s)",
        report.coincide,
        format!(
            "n={n}: {} orbits, {} differing",
            report.orbit_count,
            report.abstract_only.len() + report.note_induced_only.len()
        ),
    )
}

pub fn inversion_identities() -> CheckResult {
    let set = |pair, q, k: i64| {
        let s = sys(12, pair);
        PitchSet::from_tones(s.triple(q, k.rem_euclid(12) as u32))
    };
    let ok = (0..12).all(|k| {
        set((9, 8), Quality::Major, k) == set((4, 3), Quality::Major, k + 5)
            && set((8, 3), Quality::Minor, k) == set((9, 4), Quality::Minor, k - 1)
    });
    CheckResult::new(
        "inversion-identities",
        "M(9,8)_k = M(4,3)_{k+5} and m(8,3)_k = m(9,4)_{k-1} as pitch sets",
        ok,
        "checked k = 0..11".into(),
    )
}

pub fn miniature_transports() -> CheckResult {
    let path = miniature();
    let mut notes = vec![format!(
        "(6,5): {:?}, closed: {}",
        path.validate().ok(),
        path.is_closed()
    )];
    let mut ok = path.validate().is_ok_and(|c| c.is_valid()) && path.is_closed();
    for (a, dst) in [(3, (8, 5)), (7, (2, 5)), (9, (4, 5))] {
        let dst = sys(10, dst);
        let w = note_induced_isos(path.system, dst)
            .expect("same modulus")
            .into_iter()
            .find(|w| w.map.multiplier() == a && w.map.offset() == 0);
        let valid = w
            .and_then(|w| transport_path(&w, &path, dst).ok())
            .is_some_and(|p| p.validate().is_ok_and(|c| c.is_valid()) && p.is_closed());
        ok &= valid;
        notes.push(format!("{a}x -> {:?}: {valid}", dst.pair()));
    }
    CheckResult::new(
        "miniature",
        "the 10-TET miniature is a closed walk on (6,5) and its transports are valid",
        ok,
        notes.join("; "),
    )
}

pub fn twelve_tet_census() -> CheckResult {
    let p = classify_orbits(12, Mode::Abstract, Domain::All);
    CheckResult::new(
        "census-12",
        "the 121 systems of 12-TET fall into eight Levi graph classes",
        p.len() == 8,
        format!("{} classes under labelled (t,s) with t = s and q = 0 included", p.len()),
    )
    .soft()
}

/// Every check, in a fixed order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        crt_anchors(),
        twelve_tet_witnesses(),
        decaphonic_multipliers(),
        decaphonic_no_reversing(),
        negation_reverses(),
        orbit_quartets(),
        orbit_quartets_relabelled(),
        equivalences(12),
        equivalences(10),
        inversion_identities(),
        miniature_transports(),
        twelve_tet_census(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_ids() {
        let ids: Vec<_> = run_all().into_iter().map(|c| c.id).collect();
        let mut unique = ids.clone();
        unique.sort_unstable();
        unique.dedup();
        assert_eq!(unique.len(), ids.len());
    }
}
