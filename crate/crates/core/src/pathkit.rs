//! Chord progressions as walks on a system's Tonnetz.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmony::{HarmonicSystem, Quality};
use crate::isoclass::IsoWitness;
use crate::levigraph::EdgeColor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Step {
    pub quality: Quality,
    pub root: u32,
}

impl Step {
    pub const fn new(quality: Quality, root: u32) -> Self {
        Self { quality, root }
    }

    pub const fn major(root: u32) -> Self {
        Self::new(Quality::Major, root)
    }

    pub const fn minor(root: u32) -> Self {
        Self::new(Quality::Minor, root)
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.quality.symbol(), self.root)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionPath {
    pub system: HarmonicSystem,
    pub steps: Vec<Step>,
}

impl ProgressionPath {
    pub fn new(system: HarmonicSystem, steps: Vec<Step>) -> Self {
        Self { system, steps }
    }

    pub fn validate(&self) -> Result<PathCheck> {
        validate_path(self.system, &self.steps)
    }

    pub fn transitions(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }

    pub fn is_closed(&self) -> bool {
        self.steps.len() > 1 && self.steps.first() == self.steps.last()
    }

    /// Colours of the edges walked, one per transition. Where parallel edges
    /// join the same pair, the first in P, L, R order is reported.
    pub fn colors(&self) -> Vec<Option<EdgeColor>> {
        self.steps
            .windows(2)
            .map(|w| transition_color(self.system, w[0], w[1]))
            .collect()
    }

    /// Distinct colours walked.
    pub fn color_coverage(&self) -> BTreeSet<EdgeColor> {
        self.colors().into_iter().flatten().collect()
    }
}

impl fmt::Display for ProgressionPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.steps.iter().map(Step::to_string).collect();
        write!(f, "{}: {}", self.system, names.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PathCheck {
    Valid,
    /// Transition `index → index + 1` is not a Tonnetz edge.
    BrokenAt { index: usize },
}

impl PathCheck {
    pub fn is_valid(self) -> bool {
        self == PathCheck::Valid
    }
}

pub fn validate_path(system: HarmonicSystem, steps: &[Step]) -> Result<PathCheck> {
    if steps.is_empty() {
        return Err(Error::EmptyPath);
    }
    if let Some(bad) = steps.iter().find(|s| s.root >= system.n()) {
        return Err(Error::ResidueOutOfRange {
            value: bad.root,
            n: system.n(),
        });
    }
    Ok(steps
        .windows(2)
        .position(|w| !system.adjacent((w[0].quality, w[0].root), (w[1].quality, w[1].root)))
        .map_or(PathCheck::Valid, |index| PathCheck::BrokenAt { index }))
}

fn transition_color(system: HarmonicSystem, from: Step, to: Step) -> Option<EdgeColor> {
    let (major, minor) = match (from.quality, to.quality) {
        (Quality::Major, Quality::Minor) => (from.root, to.root),
        (Quality::Minor, Quality::Major) => (to.root, from.root),
        _ => return None,
    };
    let roots = system.neighbor_roots(Quality::Major, major);
    EdgeColor::ALL
        .into_iter()
        .zip(roots)
        .find(|&(_, r)| r == minor)
        .map(|(c, _)| c)
}

/// Carry a path through a witness: each step's quality follows the
/// orientation and its root follows the witness's root map.
pub fn transport_path(w: &IsoWitness, path: &ProgressionPath, dst: HarmonicSystem) -> Result<ProgressionPath> {
    if w.source != path.system || w.target != dst {
        return Err(Error::WitnessMismatch {
            witness_src: w.source.to_string(),
            witness_dst: w.target.to_string(),
            src: path.system.to_string(),
            dst: dst.to_string(),
        });
    }
    let steps = path
        .steps
        .iter()
        .map(|s| {
            let (quality, root) = w.image(s.quality, s.root);
            Step { quality, root }
        })
        .collect();
    Ok(ProgressionPath { system: dst, steps })
}

/// The closed 16-transition progression on `(6,5)` in ℤ₁₀.
pub fn miniature() -> ProgressionPath {
    use Quality::{Major as M, Minor as m};
    const WALK: [(Quality, u32); 17] = [
        (M, 0),
        (m, 0),
        (M, 4),
        (m, 9),
        (M, 9),
        (m, 5),
        (M, 0),
        (m, 6),
        (M, 1),
        (m, 7),
        (M, 2),
        (m, 2),
        (M, 6),
        (m, 1),
        (M, 5),
        (m, 0),
        (M, 0),
    ];
    ProgressionPath {
        system: HarmonicSystem::new(10, 6, 5).expect("valid system"),
        steps: WALK.iter().map(|&(q, r)| Step::new(q, r)).collect(),
    }
}

/// A seeded random walk of `len` steps: uniform start chord, then a uniform
/// choice among the three neighbour slots at each step.
pub fn random_path(system: HarmonicSystem, len: usize, seed: u64) -> ProgressionPath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut steps = Vec::with_capacity(len);
    if len > 0 {
        let quality = if rng.gen_bool(0.5) { Quality::Major } else { Quality::Minor };
        steps.push(Step::new(quality, rng.gen_range(0..system.n())));
    }
    while steps.len() < len {
        let cur = *steps.last().expect("non-empty");
        let roots = system.neighbor_roots(cur.quality, cur.root);
        let root = *roots.choose(&mut rng).expect("three neighbours");
        steps.push(Step::new(cur.quality.flipped(), root));
    }
    ProgressionPath { system, steps }
}
