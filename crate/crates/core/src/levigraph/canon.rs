//! Canonical certificates by individualisation and equitable refinement.
//!
//! Two Levi graphs get equal certificates exactly when a bipartite
//! isomorphism (either orientation) exists between them. Components are
//! labelled separately and sorted; the whole graph is labelled once with
//! points as the first side and once with lines as the first side, and the
//! smaller encoding wins.

use super::StructuredLeviGraph;

/// Canonical byte encoding of the graph up to bipartite isomorphism.
pub fn canonical_certificate(g: &StructuredLeviGraph) -> Vec<u8> {
    let size = g.vertex_count();
    let n = g.n() as usize;
    let mult = g.multiplicity_matrix();
    let comps = components(&mult, size);

    let encode = |flip: bool| {
        let mut certs: Vec<Vec<u8>> = comps
            .iter()
            .map(|comp| {
                let sides: Vec<u8> = comp.iter().map(|&v| u8::from((v >= n) != flip)).collect();
                let sub: Vec<u8> = comp
                    .iter()
                    .flat_map(|&u| comp.iter().map(move |&w| (u, w)))
                    .map(|(u, w)| mult[u * size + w])
                    .collect();
                Labeller::new(comp.len(), sub, sides).run()
            })
            .collect();
        certs.sort();
        let mut out = Vec::new();
        out.extend_from_slice(&(size as u32).to_be_bytes());
        out.extend_from_slice(&(certs.len() as u32).to_be_bytes());
        for c in certs {
            out.extend_from_slice(&(c.len() as u32).to_be_bytes());
            out.extend(c);
        }
        out
    };
    encode(false).min(encode(true))
}

fn components(mult: &[u8], size: usize) -> Vec<Vec<usize>> {
    let mut comp_of = vec![usize::MAX; size];
    let mut comps = Vec::new();
    for start in 0..size {
        if comp_of[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![start];
        comp_of[start] = id;
        let mut i = 0;
        while i < members.len() {
            let u = members[i];
            for w in 0..size {
                if mult[u * size + w] > 0 && comp_of[w] == usize::MAX {
                    comp_of[w] = id;
                    members.push(w);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        comps.push(members);
    }
    comps
}

type Partition = Vec<Vec<usize>>;

struct Labeller {
    size: usize,
    mult: Vec<u8>,
    sides: Vec<u8>,
    best: Option<(Vec<u8>, Vec<usize>)>,
    /// Automorphisms found when two leaves encode identically.
    automorphisms: Vec<Vec<usize>>,
}

impl Labeller {
    fn new(size: usize, mult: Vec<u8>, sides: Vec<u8>) -> Self {
        Self {
            size,
            mult,
            sides,
            best: None,
            automorphisms: Vec::new(),
        }
    }

    fn run(mut self) -> Vec<u8> {
        let mut start: Partition = [0u8, 1]
            .iter()
            .map(|&s| (0..self.size).filter(|&v| self.sides[v] == s).collect::<Vec<_>>())
            .filter(|cell| !cell.is_empty())
            .collect();
        // Cells are ordered by side, so a single-sided component (one vertex)
        // still encodes its side through the leaf bytes.
        self.refine(&mut start);
        self.search(start, &mut Vec::new());
        self.best.expect("at least one leaf").0
    }

    fn refine(&self, cells: &mut Partition) {
        loop {
            let mut changed = false;
            let mut si = 0;
            while si < cells.len() {
                let splitter = cells[si].clone();
                let mut ci = 0;
                while ci < cells.len() {
                    if cells[ci].len() > 1 {
                        let mut keyed: Vec<(u32, usize)> = cells[ci]
                            .iter()
                            .map(|&v| {
                                let k = splitter
                                    .iter()
                                    .map(|&w| u32::from(self.mult[v * self.size + w]))
                                    .sum();
                                (k, v)
                            })
                            .collect();
                        keyed.sort_unstable();
                        if keyed.first().map(|x| x.0) != keyed.last().map(|x| x.0) {
                            let mut parts: Vec<Vec<usize>> = Vec::new();
                            let mut last = None;
                            for (k, v) in keyed {
                                if last != Some(k) {
                                    parts.push(Vec::new());
                                    last = Some(k);
                                }
                                parts.last_mut().unwrap().push(v);
                            }
                            let added = parts.len() - 1;
                            cells.splice(ci..=ci, parts);
                            ci += added;
                            changed = true;
                        }
                    }
                    ci += 1;
                }
                si += 1;
            }
            if !changed {
                break;
            }
        }
    }

    fn leaf_bytes(&self, order: &[usize]) -> Vec<u8> {
        let mut out = Vec::with_capacity(order.len() * (order.len() + 1) / 2 + order.len());
        out.extend(order.iter().map(|&v| self.sides[v]));
        for (i, &u) in order.iter().enumerate() {
            for &w in &order[i + 1..] {
                out.push(self.mult[u * self.size + w]);
            }
        }
        out
    }

    fn search(&mut self, cells: Partition, prefix: &mut Vec<usize>) {
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i);

        let Some(ti) = target else {
            let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
            let bytes = self.leaf_bytes(&order);
            match &self.best {
                None => self.best = Some((bytes, order)),
                Some((best, best_order)) => {
                    if bytes < *best {
                        self.best = Some((bytes, order));
                    } else if bytes == *best {
                        let mut gamma = vec![0; self.size];
                        for (&v, &w) in order.iter().zip(best_order) {
                            gamma[v] = w;
                        }
                        self.automorphisms.push(gamma);
                    }
                }
            }
            return;
        };

        let mut candidates = cells[ti].clone();
        candidates.sort_unstable();
        let mut explored: Vec<usize> = Vec::new();
        for v in candidates {
            if explored.iter().any(|&u| self.same_orbit(u, v, prefix)) {
                continue;
            }
            let mut next = cells.clone();
            let rest: Vec<usize> = next[ti].iter().copied().filter(|&w| w != v).collect();
            next.splice(ti..=ti, [vec![v], rest]);
            self.refine(&mut next);
            prefix.push(v);
            self.search(next, prefix);
            prefix.pop();
            explored.push(v);
        }
    }

    /// Orbit test under the known automorphisms that fix `prefix` pointwise.
    fn same_orbit(&self, u: usize, v: usize, prefix: &[usize]) -> bool {
        let gens: Vec<&Vec<usize>> = self
            .automorphisms
            .iter()
            .filter(|g| prefix.iter().all(|&p| g[p] == p))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.size];
        let mut stack = vec![u];
        seen[u] = true;
        while let Some(x) = stack.pop() {
            if x == v {
                return true;
            }
            for g in &gens {
                let y = g[x];
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    }
}
