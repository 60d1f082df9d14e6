//! Backtracking search for a bipartite isomorphism between two Levi graphs.

use serde::Serialize;

use super::{distance_matrix, Orientation, StructuredLeviGraph, Vertex};

/// A vertex bijection between two Levi graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbstractIsoWitness {
    pub orientation: Orientation,
    /// `mapping[i]` is the image of the source vertex with index `i`.
    pub mapping: Vec<Vertex>,
}

impl AbstractIsoWitness {
    pub fn image(&self, v: Vertex, n: u32) -> Vertex {
        self.mapping[v.index(n)]
    }

    pub fn inverse(&self, n: u32) -> AbstractIsoWitness {
        let mut mapping = vec![Vertex::major(0); self.mapping.len()];
        for (i, w) in self.mapping.iter().enumerate() {
            mapping[w.index(n)] = Vertex::from_index(i, n);
        }
        AbstractIsoWitness {
            orientation: self.orientation,
            mapping,
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &AbstractIsoWitness, n: u32) -> AbstractIsoWitness {
        AbstractIsoWitness {
            orientation: self.orientation.then(next.orientation),
            mapping: self.mapping.iter().map(|&w| next.image(w, n)).collect(),
        }
    }

    /// Whether this bijection carries `src` onto `dst` edge-for-edge.
    pub fn is_valid(&self, src: &StructuredLeviGraph, dst: &StructuredLeviGraph) -> bool {
        let n = src.n();
        if dst.n() != n || self.mapping.len() != src.vertex_count() {
            return false;
        }
        let size = src.vertex_count();
        let mut seen = vec![false; size];
        for (i, w) in self.mapping.iter().enumerate() {
            let j = w.index(n);
            if seen[j] || self.orientation.apply(Vertex::from_index(i, n).quality) != w.quality {
                return false;
            }
            seen[j] = true;
        }
        let (a, b) = (src.multiplicity_matrix(), dst.multiplicity_matrix());
        (0..size).all(|i| {
            (0..size).all(|j| {
                a[i * size + j] == b[self.mapping[i].index(n) * size + self.mapping[j].index(n)]
            })
        })
    }
}

struct SearchGraph {
    size: usize,
    mult: Vec<u8>,
    dist: Vec<u8>,
    /// Per-vertex invariant, without the side bit.
    profile: Vec<Vec<u32>>,
}

impl SearchGraph {
    fn new(g: &StructuredLeviGraph) -> Self {
        let size = g.vertex_count();
        let mult = g.multiplicity_matrix();
        let dist = distance_matrix(&mult, size);
        let profile = (0..size)
            .map(|v| {
                // distance histogram, then sorted edge multiplicities
                let mut hist = vec![0u32; size + 1];
                for w in 0..size {
                    let d = dist[v * size + w];
                    hist[if d == u8::MAX { size } else { usize::from(d) }] += 1;
                }
                let mut mults: Vec<u32> = (0..size)
                    .map(|w| u32::from(mult[v * size + w]))
                    .filter(|&m| m > 0)
                    .collect();
                mults.sort_unstable();
                hist.push(u32::MAX);
                hist.extend(mults);
                hist
            })
            .collect();
        Self {
            size,
            mult,
            dist,
            profile,
        }
    }
}

/// Find the lexicographically first bipartite isomorphism `g1 → g2`, trying
/// orientation-preserving bijections before orientation-reversing ones.
pub fn abstract_iso(g1: &StructuredLeviGraph, g2: &StructuredLeviGraph) -> Option<AbstractIsoWitness> {
    if g1.n() != g2.n() {
        return None;
    }
    let n = g1.n() as usize;
    let (a, b) = (SearchGraph::new(g1), SearchGraph::new(g2));
    [Orientation::Preserving, Orientation::Reversing]
        .into_iter()
        .find_map(|orientation| {
            let side = |v: usize, flip: bool| (v < n) != flip;
            let key_a: Vec<_> = (0..a.size).map(|v| (side(v, false), &a.profile[v])).collect();
            let flip = orientation == Orientation::Reversing;
            let key_b: Vec<_> = (0..b.size).map(|w| (side(w, flip), &b.profile[w])).collect();

            let (mut sa, mut sb) = (key_a.clone(), key_b.clone());
            sa.sort();
            sb.sort();
            if sa != sb {
                return None;
            }

            let mut phi = vec![usize::MAX; a.size];
            let mut used = vec![false; b.size];
            extend(&a, &b, &key_a, &key_b, 0, &mut phi, &mut used).then(|| AbstractIsoWitness {
                orientation,
                mapping: phi.iter().map(|&w| Vertex::from_index(w, g1.n())).collect(),
            })
        })
}

fn extend(
    a: &SearchGraph,
    b: &SearchGraph,
    key_a: &[(bool, &Vec<u32>)],
    key_b: &[(bool, &Vec<u32>)],
    v: usize,
    phi: &mut [usize],
    used: &mut [bool],
) -> bool {
    if v == a.size {
        return true;
    }
    for w in 0..b.size {
        if used[w] || key_a[v] != key_b[w] {
            continue;
        }
        let consistent = (0..v).all(|u| {
            let pu = phi[u];
            a.mult[u * a.size + v] == b.mult[pu * b.size + w]
                && a.dist[u * a.size + v] == b.dist[pu * b.size + w]
        });
        if !consistent {
            continue;
        }
        phi[v] = w;
        used[w] = true;
        if extend(a, b, key_a, key_b, v + 1, phi, used) {
            return true;
        }
        used[w] = false;
    }
    phi[v] = usize::MAX;
    false
}
