//! Canonical labelling of small digraphs by individualisation–refinement.
//!
//! Cells are refined to an equitable partition (counting out- and
//! in-neighbours per cell), the first smallest non-singleton cell is split
//! by individualising each of its vertices in turn, and the leaf whose
//! relabelled adjacency matrix is lexicographically least wins. Known and
//! discovered automorphisms prune children lying in one orbit.

use std::fmt;

use crate::closure::Digraph;
use crate::error::{Error, Result};
use crate::group::{CyclicGroup, GroupSubset};

pub const CANON_LIMIT: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    n: usize,
    rows: Vec<u64>,
}

impl CanonicalForm {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.n)?;
        for r in &self.rows {
            write!(f, "{r:x}.")?;
        }
        Ok(())
    }
}

struct Graph {
    n: usize,
    out: Vec<u64>,
    inc: Vec<u64>,
}

impl Graph {
    fn from_digraph(g: &Digraph) -> Self {
        let n = g.vertex_count();
        let mut out = vec![0u64; n];
        let mut inc = vec![0u64; n];
        for (u, v) in g.arcs() {
            out[u] |= 1 << v;
            inc[v] |= 1 << u;
        }
        Self { n, out, inc }
    }

    fn certificate(&self, order: &[usize]) -> Vec<u64> {
        let mut pos = vec![0usize; self.n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        order
            .iter()
            .map(|&u| {
                let mut row = 0u64;
                let mut bits = self.out[u];
                while bits != 0 {
                    let v = bits.trailing_zeros() as usize;
                    row |= 1 << pos[v];
                    bits &= bits - 1;
                }
                row
            })
            .collect()
    }
}

/// Ordered partition: `cells[i]` is a bitmask; order is label-invariant.
type Partition = Vec<u64>;

fn refine(g: &Graph, mut cells: Partition) -> Partition {
    loop {
        let mut next: Partition = Vec::with_capacity(cells.len());
        for &cell in &cells {
            if cell.count_ones() == 1 {
                next.push(cell);
                continue;
            }
            let mut sigs: Vec<(Vec<u32>, usize)> = Vec::new();
            let mut bits = cell;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let sig: Vec<u32> = cells
                    .iter()
                    .flat_map(|&c| [(g.out[v] & c).count_ones(), (g.inc[v] & c).count_ones()])
                    .collect();
                sigs.push((sig, v));
            }
            sigs.sort();
            let mut i = 0;
            while i < sigs.len() {
                let mut mask = 0u64;
                let mut j = i;
                while j < sigs.len() && sigs[j].0 == sigs[i].0 {
                    mask |= 1 << sigs[j].1;
                    j += 1;
                }
                next.push(mask);
                i = j;
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn individualize(cells: &Partition, idx: usize, v: usize) -> Partition {
    let mut out = Vec::with_capacity(cells.len() + 1);
    out.extend_from_slice(&cells[..idx]);
    out.push(1 << v);
    out.push(cells[idx] & !(1 << v));
    out.extend_from_slice(&cells[idx + 1..]);
    out
}

fn target_cell(cells: &Partition) -> Option<usize> {
    cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.count_ones() > 1)
        .min_by_key(|(i, c)| (c.count_ones(), *i))
        .map(|(i, _)| i)
}

struct Leaf {
    cert: Vec<u64>,
    order: Vec<usize>,
    path: Vec<usize>,
}

struct Search<'a> {
    g: &'a Graph,
    generators: Vec<Vec<usize>>,
    first: Option<Leaf>,
    best: Option<Leaf>,
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl Search<'_> {
    fn orbit_roots(&self, fixed: &[usize]) -> Vec<usize> {
        let n = self.g.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for gen in &self.generators {
            if fixed.iter().all(|&v| gen[v] == v) {
                for v in 0..n {
                    let (a, b) = (find(&mut parent, v), find(&mut parent, gen[v]));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        (0..n).map(|v| find(&mut parent, v)).collect()
    }

    /// Records a leaf. When it matches an earlier leaf the map between them
    /// is an automorphism fixing their common prefix, so the whole subtree
    /// below that prefix is an image of one already seen: returns the depth
    /// to jump back to.
    fn leaf(&mut self, cells: &Partition, path: &[usize]) -> Option<usize> {
        let order: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let cert = self.g.certificate(&order);
        for earlier in [&self.first, &self.best].into_iter().flatten() {
            if earlier.cert == cert {
                let mut perm = vec![0; self.g.n];
                for i in 0..self.g.n {
                    perm[earlier.order[i]] = order[i];
                }
                let depth = common_prefix(&earlier.path, path);
                if perm.iter().enumerate().any(|(i, &p)| i != p) && !self.generators.contains(&perm) {
                    self.generators.push(perm);
                }
                return Some(depth);
            }
        }
        let leaf = Leaf {
            cert,
            order,
            path: path.to_vec(),
        };
        if self.first.is_none() {
            self.first = Some(Leaf {
                cert: leaf.cert.clone(),
                order: leaf.order.clone(),
                path: leaf.path.clone(),
            });
        }
        if self.best.as_ref().is_none_or(|b| leaf.cert < b.cert) {
            self.best = Some(leaf);
        }
        None
    }

    fn descend(&mut self, cells: Partition, path: &mut Vec<usize>) -> Option<usize> {
        let cells = refine(self.g, cells);
        let Some(idx) = target_cell(&cells) else {
            return self.leaf(&cells, path);
        };
        let mut explored: Vec<usize> = Vec::new();
        let mut bits = cells[idx];
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if !explored.is_empty() {
                let roots = self.orbit_roots(path);
                if explored.iter().any(|&w| roots[w] == roots[v]) {
                    continue;
                }
            }
            explored.push(v);
            path.push(v);
            let jump = self.descend(individualize(&cells, idx, v), path);
            path.pop();
            if let Some(d) = jump {
                if d < path.len() {
                    return jump;
                }
            }
        }
        None
    }
}

/// Canonical form of an arbitrary digraph, optionally seeded with known
/// automorphisms (as image vectors).
pub fn canonical_form_graph(g: &Digraph, known: Vec<Vec<usize>>) -> Result<CanonicalForm> {
    let n = g.vertex_count();
    if n > CANON_LIMIT {
        return Err(Error::SizeGuard {
            what: "vertex count",
            size: n,
            limit: CANON_LIMIT,
        });
    }
    let graph = Graph::from_digraph(g);
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut search = Search {
        g: &graph,
        generators: known,
        first: None,
        best: None,
    };
    search.descend(vec![all], &mut Vec::new());
    let rows = search.best.expect("at least one leaf").cert;
    Ok(CanonicalForm { n, rows })
}

/// Translation and the multipliers fixing `S`, as vertex permutations.
pub fn circulant_automorphisms(s: &GroupSubset) -> Vec<Vec<usize>> {
    let n = s.order();
    let mut gens = vec![(0..n).map(|x| (x + 1) % n).collect::<Vec<_>>()];
    if let Ok(g) = CyclicGroup::new(n) {
        for u in g.units() {
            if u != 1 && s.scale(u) == *s {
                gens.push((0..n).map(|x| x * u % n).collect());
            }
        }
    }
    gens
}

pub fn canonical_form(n: usize, s: &GroupSubset) -> Result<CanonicalForm> {
    if s.order() != n {
        return Err(Error::OrderMismatch {
            left: n,
            right: s.order(),
        });
    }
    if n > CANON_LIMIT {
        return Err(Error::SizeGuard {
            what: "group order",
            size: n,
            limit: CANON_LIMIT,
        });
    }
    let g = Digraph::cayley(s)?;
    canonical_form_graph(&g, circulant_automorphisms(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> GroupSubset {
        GroupSubset::new(n, xs.iter().copied()).unwrap()
    }

    fn form(n: usize, xs: &[usize]) -> CanonicalForm {
        canonical_form(n, &set(n, xs)).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(form(5, &[1, 4]), form(5, &[2, 3]));
        assert_eq!(form(10, &[1, 9]), form(10, &[3, 7]));
        assert_ne!(form(4, &[1, 2, 3]), form(4, &[1, 3]));
    }

    #[test]
    fn relabelled_graph_has_same_form() {
        let s = set(12, &[1, 4, 5, 6, 7, 8, 11]);
        let g = Digraph::cayley(&s).unwrap();
        let perm = [5, 3, 11, 0, 7, 1, 9, 2, 10, 4, 8, 6];
        let h = Digraph::new(12, g.arcs().map(|(u, v)| (perm[u], perm[v]))).unwrap();
        assert_eq!(
            canonical_form_graph(&g, vec![]).unwrap(),
            canonical_form_graph(&h, vec![]).unwrap()
        );
        assert_eq!(canonical_form_graph(&g, vec![]).unwrap(), form(12, s.members()));
    }

    #[test]
    fn non_multiplier_isomorphism_is_found() {
        // Isomorphic circulants on Z_16 that no multiplier relates.
        let s1 = set(16, &[1, 2, 7, 9, 14, 15]);
        let s2 = set(16, &[1, 6, 7, 9, 10, 15]);
        assert!(CyclicGroup::new(16).unwrap().units().into_iter().all(|u| s1.scale(u) != s2));
        assert_eq!(form(16, s1.members()), form(16, s2.members()));
    }

    #[test]
    fn symmetric_graphs_are_fast() {
        for (n, s) in [(40usize, (1..40).collect::<Vec<_>>()), (40, vec![]), (40, (1..40).filter(|x| x % 2 == 1).collect())] {
            let f = form(n, &s);
            assert_eq!(f.vertex_count(), n);
        }
    }

    #[test]
    fn guard() {
        assert!(canonical_form(41, &GroupSubset::empty(41)).is_err());
    }
}
