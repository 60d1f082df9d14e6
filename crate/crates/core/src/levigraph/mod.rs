//! Structured Levi graphs: Major chords are points, Minor chords are lines,
//! and each point is joined to the three lines given by the neighbour rule.
//!
//! Vertices are indexed `0..n` for Major roots and `n..2n` for Minor roots.
//! Edges follow the transformation rule, so the graph is a 3-regular bipartite
//! multigraph for every `(t,s)`; repeated neighbour roots become parallel
//! edges. The pitch-set intersection rule is checked separately by
//! [`StructuredLeviGraph::verify_intersection_rule`].

mod canon;
mod export;
mod iso;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::harmony::{HarmonicSystem, PitchSet, Quality};

pub use canon::canonical_certificate;
pub use export::{GraphJson, to_dot, to_json};
pub use iso::{abstract_iso, AbstractIsoWitness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub quality: Quality,
    pub root: u32,
}

impl Vertex {
    pub fn major(root: u32) -> Self {
        Self {
            quality: Quality::Major,
            root,
        }
    }

    pub fn minor(root: u32) -> Self {
        Self {
            quality: Quality::Minor,
            root,
        }
    }

    pub fn index(self, n: u32) -> usize {
        match self.quality {
            Quality::Major => self.root as usize,
            Quality::Minor => (n + self.root) as usize,
        }
    }

    pub fn from_index(index: usize, n: u32) -> Self {
        let i = index as u32;
        if i < n {
            Self::major(i)
        } else {
            Self::minor(i - n)
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.quality.symbol(), self.root)
    }
}

/// Voice-leading slot of an edge, named from the Major endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeColor {
    /// Parallel: same root.
    P,
    /// Leading-tone: Minor root `r + t`.
    L,
    /// Relative: Minor root `r − s`.
    R,
}

impl EdgeColor {
    pub const ALL: [EdgeColor; 3] = [EdgeColor::P, EdgeColor::L, EdgeColor::R];

    pub fn dot_color(self) -> &'static str {
        match self {
            EdgeColor::P => "red",
            EdgeColor::L => "blue",
            EdgeColor::R => "gold",
        }
    }
}

/// Which bipartite side a graph isomorphism sends the points to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Points to points (Major to Major).
    Preserving,
    /// Points to lines (Major to Minor).
    Reversing,
}

impl Orientation {
    pub fn then(self, next: Orientation) -> Orientation {
        if self == next {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        }
    }

    pub fn apply(self, quality: Quality) -> Quality {
        match self {
            Orientation::Preserving => quality,
            Orientation::Reversing => quality.flipped(),
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Preserving => "preserving",
            Orientation::Reversing => "reversing",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    /// Root of the Major endpoint.
    pub point: u32,
    /// Root of the Minor endpoint.
    pub line: u32,
    pub color: EdgeColor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredLeviGraph {
    system: HarmonicSystem,
    edges: Vec<Edge>,
    mu: Vec<[u32; 3]>,
}

impl StructuredLeviGraph {
    pub fn build(system: HarmonicSystem) -> Self {
        let n = system.n();
        let edges = (0..n)
            .flat_map(|r| {
                let roots = system.neighbor_roots(Quality::Major, r);
                EdgeColor::ALL
                    .into_iter()
                    .zip(roots)
                    .map(move |(color, line)| Edge { point: r, line, color })
            })
            .collect();
        let mu = (0..2 * n as usize)
            .map(|i| {
                let v = Vertex::from_index(i, n);
                system.triple(v.quality, v.root)
            })
            .collect();
        Self { system, edges, mu }
    }

    pub fn system(&self) -> HarmonicSystem {
        self.system
    }

    pub fn n(&self) -> u32 {
        self.system.n()
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n() as usize
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertex_count()).map(|i| Vertex::from_index(i, self.n()))
    }

    /// Edges in build order: points ascending, then P, L, R.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// The decoration μ as an ordered triple.
    pub fn mu(&self, v: Vertex) -> [u32; 3] {
        self.mu[v.index(self.n())]
    }

    pub fn pitch_set(&self, v: Vertex) -> PitchSet {
        PitchSet::from_tones(self.mu(v))
    }

    /// Symmetric `V×V` edge-multiplicity matrix, row-major.
    pub fn multiplicity_matrix(&self) -> Vec<u8> {
        let v = self.vertex_count();
        let n = self.n() as usize;
        let mut m = vec![0u8; v * v];
        for e in &self.edges {
            let (p, l) = (e.point as usize, n + e.line as usize);
            m[p * v + l] += 1;
            m[l * v + p] += 1;
        }
        m
    }

    pub fn degree(&self, v: Vertex) -> usize {
        let m = self.multiplicity_matrix();
        let size = self.vertex_count();
        let i = v.index(self.n());
        m[i * size..(i + 1) * size].iter().map(|&x| usize::from(x)).sum()
    }

    /// Every edge joins a point to a line and every vertex has degree 3.
    pub fn is_cubic_bipartite(&self) -> bool {
        let n = self.n();
        let size = self.vertex_count();
        let m = self.multiplicity_matrix();
        let same_side_edge = (0..size).any(|i| {
            (0..size).any(|j| m[i * size + j] > 0 && (i < n as usize) == (j < n as usize))
        });
        let degrees_ok = (0..size)
            .all(|i| m[i * size..(i + 1) * size].iter().map(|&x| u32::from(x)).sum::<u32>() == 3);
        !same_side_edge && degrees_ok && self.edges.len() == 3 * n as usize
    }

    /// Check that the transformation-rule edges coincide with the pairs whose
    /// pitch sets share exactly two tones, and that μ is injective onto
    /// 3-element sets.
    pub fn verify_intersection_rule(&self) -> IntersectionReport {
        let n = self.n();
        let mut report = IntersectionReport::default();

        let mut by_set: BTreeMap<PitchSet, Vec<Vertex>> = BTreeMap::new();
        for v in self.vertices() {
            let set = self.pitch_set(v);
            if set.len() != 3 {
                report.short_sets.push(v);
            }
            by_set.entry(set).or_default().push(v);
        }
        for group in by_set.values() {
            for (i, &a) in group.iter().enumerate() {
                for &b in &group[i + 1..] {
                    report.mu_collisions.push((a, b));
                }
            }
        }

        let mut counts: BTreeMap<(u32, u32), usize> = BTreeMap::new();
        for e in &self.edges {
            *counts.entry((e.point, e.line)).or_default() += 1;
        }
        report.parallel = counts
            .iter()
            .filter(|(_, &c)| c > 1)
            .map(|(&k, _)| k)
            .collect();
        let rule_pairs: BTreeSet<(u32, u32)> = counts.keys().copied().collect();

        let mut sharing = BTreeSet::new();
        for p in 0..n {
            let ps = self.pitch_set(Vertex::major(p));
            for l in 0..n {
                if ps.intersection_len(&self.pitch_set(Vertex::minor(l))) == 2 {
                    sharing.insert((p, l));
                }
            }
        }
        report.missing = rule_pairs.difference(&sharing).copied().collect();
        report.unexpected = sharing.difference(&rule_pairs).copied().collect();
        report
    }
}

/// Diagnostics from [`StructuredLeviGraph::verify_intersection_rule`].
/// Edge pairs are `(major root, minor root)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IntersectionReport {
    /// Vertices sharing the same pitch set.
    pub mu_collisions: Vec<(Vertex, Vertex)>,
    /// Vertices whose triple has a repeated tone.
    pub short_sets: Vec<Vertex>,
    /// Neighbour-rule edges whose endpoints do not share exactly two tones.
    pub missing: Vec<(u32, u32)>,
    /// Pairs sharing exactly two tones that the neighbour rule does not join.
    pub unexpected: Vec<(u32, u32)>,
    /// Pairs joined more than once by the neighbour rule.
    pub parallel: Vec<(u32, u32)>,
}

impl IntersectionReport {
    pub fn holds(&self) -> bool {
        self.mu_collisions.is_empty()
            && self.short_sets.is_empty()
            && self.missing.is_empty()
            && self.unexpected.is_empty()
            && self.parallel.is_empty()
    }
}

/// Adjacency matrix helpers shared by the isomorphism search and the
/// canonical labelling.
pub(crate) fn distance_matrix(mult: &[u8], size: usize) -> Vec<u8> {
    let mut dist = vec![u8::MAX; size * size];
    let mut queue = std::collections::VecDeque::new();
    for src in 0..size {
        dist[src * size + src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[src * size + u];
            for w in 0..size {
                if mult[u * size + w] > 0 && dist[src * size + w] == u8::MAX {
                    dist[src * size + w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    dist
}
