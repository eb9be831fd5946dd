//! Coherent closures by two-dimensional Weisfeiler-Leman refinement.
//!
//! Pair colours are refined with exact sorted multisets of colour pairs; ids
//! are handed out by first occurrence in row-major order, so the output colour
//! matrix is a pure function of the input matrix.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::group::GroupSubset;
use crate::par::{self, Exec};

/// A loopless digraph on vertices `0..v`, stored as a dense adjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    adj: Vec<bool>,
}

impl Digraph {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(n: usize, arcs: I) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("digraph needs at least one vertex".into()));
        }
        let mut adj = vec![false; n * n];
        for (u, v) in arcs {
            if u >= n || v >= n {
                return Err(Error::Precondition(format!(
                    "arc ({u},{v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::Precondition(format!("loop at vertex {u}")));
            }
            adj[u * n + v] = true;
        }
        Ok(Self { n, adj })
    }

    /// Reads a dense 0/1 matrix; the diagonal must be zero.
    pub fn from_matrix(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut arcs = Vec::new();
        for (u, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Precondition("adjacency matrix is not square".into()));
            }
            for (v, &x) in row.iter().enumerate() {
                match x {
                    0 => {}
                    1 => arcs.push((u, v)),
                    _ => {
                        return Err(Error::Precondition(format!(
                            "matrix entry {x} is not 0/1"
                        )))
                    }
                }
            }
        }
        Self::new(n, arcs)
    }

    /// `Cay(Z_n, S)`: arcs `(g, g + s)`.
    pub fn cayley(s: &GroupSubset) -> Result<Self> {
        if s.contains(0) {
            return Err(Error::Precondition(
                "connection set must not contain the identity".into(),
            ));
        }
        let n = s.order();
        let mut adj = vec![false; n * n];
        for g in 0..n {
            for &x in s.members() {
                adj[g * n + (g + x) % n] = true;
            }
        }
        Ok(Self { n, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| (0..self.n).all(|v| self.has_arc(u, v) == self.has_arc(v, u)))
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n * n).filter(|&i| self.adj[i]).map(move |i| (i / n, i % n))
    }

    pub fn out_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.has_arc(u, v))
    }

    pub fn to_matrix_string(&self) -> String {
        let mut out = String::with_capacity(self.n * (2 * self.n + 1));
        for u in 0..self.n {
            for v in 0..self.n {
                if v > 0 {
                    out.push(' ');
                }
                out.push(if self.has_arc(u, v) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

/// A partition of `V × V` satisfying the coherent-configuration axioms,
/// encoded as a colour matrix with ids `0..rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherentConfiguration {
    n: usize,
    color: Vec<u32>,
    rank: usize,
    diagonal_colors: Vec<u32>,
}

impl CoherentConfiguration {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn color(&self, u: usize, v: usize) -> u32 {
        self.color[u * self.n + v]
    }

    pub fn colors(&self) -> &[u32] {
        &self.color
    }

    pub fn row(&self, u: usize) -> &[u32] {
        &self.color[u * self.n..(u + 1) * self.n]
    }

    pub fn diagonal_colors(&self) -> &[u32] {
        &self.diagonal_colors
    }

    /// True when the diagonal is a single class.
    pub fn is_scheme(&self) -> bool {
        self.diagonal_colors.len() == 1
    }

    /// Vertex sets of the diagonal classes, in colour order.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        self.diagonal_colors
            .iter()
            .map(|&c| (0..self.n).filter(|&u| self.color(u, u) == c).collect())
            .collect()
    }

    /// `|αr|` for every colour `r`.
    pub fn row_valencies(&self, alpha: usize) -> Vec<usize> {
        let mut val = vec![0; self.rank];
        for &c in self.row(alpha) {
            val[c as usize] += 1;
        }
        val
    }

    /// `true` when every class of `coarser` is a union of classes of `self`.
    pub fn refines(&self, coarser: &CoherentConfiguration) -> bool {
        if self.n != coarser.n {
            return false;
        }
        let mut image = vec![u32::MAX; self.rank];
        self.color.iter().zip(&coarser.color).all(|(&fine, &coarse)| {
            let slot = &mut image[fine as usize];
            if *slot == u32::MAX {
                *slot = coarse;
            }
            *slot == coarse
        })
    }

    /// Builds a configuration from an arbitrary colour matrix, renumbering
    /// colours by first occurrence. The axioms are not checked.
    pub fn from_color_matrix(n: usize, colors: &[u32]) -> Result<Self> {
        if colors.len() != n * n || n == 0 {
            return Err(Error::Precondition(format!(
                "colour matrix must have {n}×{n} entries"
            )));
        }
        let (color, rank) = renumber(colors);
        Ok(Self::assemble(n, color, rank))
    }

    fn assemble(n: usize, color: Vec<u32>, rank: usize) -> Self {
        let mut diagonal_colors: Vec<u32> = (0..n).map(|u| color[u * n + u]).collect();
        diagonal_colors.sort_unstable();
        diagonal_colors.dedup();
        Self {
            n,
            color,
            rank,
            diagonal_colors,
        }
    }

    /// Whitespace separated colour grid, one row per line.
    pub fn to_grid_string(&self) -> String {
        let mut out = String::new();
        for u in 0..self.n {
            for (v, c) in self.row(u).iter().enumerate() {
                if v > 0 {
                    out.push(' ');
                }
                write!(out, "{c}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Checks all three axioms exhaustively.
    pub fn verify_axioms(&self) -> Result<()> {
        let n = self.n;
        let r = self.rank;
        let mut seen = vec![false; r];
        for &c in &self.color {
            seen[c as usize] = true;
        }
        if let Some(c) = seen.iter().position(|&s| !s) {
            return Err(Error::Inconsistent(format!("colour {c} is unused")));
        }

        let mut on_diagonal = vec![false; r];
        for &c in &self.diagonal_colors {
            on_diagonal[c as usize] = true;
        }
        for u in 0..n {
            for v in 0..n {
                if u != v && on_diagonal[self.color(u, v) as usize] {
                    return Err(Error::Inconsistent(format!(
                        "diagonal colour {} also on pair ({u},{v})",
                        self.color(u, v)
                    )));
                }
            }
        }

        let transpose = self.transpose_map()?;
        let mut hit = vec![false; r];
        for &t in &transpose {
            hit[t as usize] = true;
        }
        if hit.iter().any(|&h| !h) {
            return Err(Error::Inconsistent("transpose map is not a bijection".into()));
        }

        let mut reference: Vec<Option<(usize, usize, Vec<u64>)>> = vec![None; r];
        for u in 0..n {
            for v in 0..n {
                let t = self.color(u, v) as usize;
                let profile = self.path_profile(u, v);
                match &reference[t] {
                    None => reference[t] = Some((u, v, profile)),
                    Some((a, b, rep)) => {
                        if *rep != profile {
                            return Err(Error::Inconsistent(format!(
                                "intersection numbers differ on class {t} between ({a},{b}) and ({u},{v})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The colour `r*` of the transpose of each class `r`.
    pub fn transpose_map(&self) -> Result<Vec<u32>> {
        let mut map = vec![u32::MAX; self.rank];
        for u in 0..self.n {
            for v in 0..self.n {
                let c = self.color(u, v) as usize;
                let t = self.color(v, u);
                if map[c] == u32::MAX {
                    map[c] = t;
                } else if map[c] != t {
                    return Err(Error::Inconsistent(format!(
                        "transpose of class {c} is not a class (pair ({v},{u}))"
                    )));
                }
            }
        }
        Ok(map)
    }

    /// Sorted codes `r·rank + s` over `γ` with `(α,γ) ∈ r`, `(γ,β) ∈ s`.
    fn path_profile(&self, alpha: usize, beta: usize) -> Vec<u64> {
        let rank = self.rank as u64;
        let mut profile: Vec<u64> = (0..self.n)
            .map(|w| self.color(alpha, w) as u64 * rank + self.color(w, beta) as u64)
            .collect();
        profile.sort_unstable();
        profile
    }

    fn path_counts(&self, alpha: usize, beta: usize) -> HashMap<(u32, u32), u32> {
        let mut counts = HashMap::new();
        for w in 0..self.n {
            *counts
                .entry((self.color(alpha, w), self.color(w, beta)))
                .or_insert(0) += 1;
        }
        counts
    }

    /// The first two pairs of class `t` in row-major order.
    fn class_representatives(&self) -> Vec<(Option<(usize, usize)>, Option<(usize, usize)>)> {
        let mut reps = vec![(None, None); self.rank];
        for u in 0..self.n {
            for v in 0..self.n {
                let slot = &mut reps[self.color(u, v) as usize];
                if slot.0.is_none() {
                    slot.0 = Some((u, v));
                } else if slot.1.is_none() {
                    slot.1 = Some((u, v));
                }
            }
        }
        reps
    }
}

/// Renumbers colours by first occurrence; returns the new matrix and rank.
fn renumber(colors: &[u32]) -> (Vec<u32>, usize) {
    let mut ids: HashMap<u32, u32> = HashMap::new();
    let out = colors
        .iter()
        .map(|c| {
            let next = ids.len() as u32;
            *ids.entry(*c).or_insert(next)
        })
        .collect();
    (out, ids.len())
}

/// Rows refined per block; bounds signature memory to `BLOCK · n²` words.
const BLOCK_ROWS: usize = 32;

/// Runs 2-WL refinement to the stable colouring starting from `initial`.
pub fn refine(n: usize, initial: &[u32], exec: Exec) -> CoherentConfiguration {
    let (mut color, mut rank) = renumber(initial);
    loop {
        let mut ids: HashMap<Vec<u64>, u32> = HashMap::new();
        let mut next = vec![0u32; n * n];
        let r = rank as u64;
        for start in (0..n).step_by(BLOCK_ROWS) {
            let end = (start + BLOCK_ROWS).min(n);
            let rows = par::map_range(exec, end - start, |i| {
                let u = start + i;
                (0..n)
                    .map(|v| {
                        let mut sig = Vec::with_capacity(n + 1);
                        sig.push(color[u * n + v] as u64);
                        let tail = sig.len();
                        sig.extend(
                            (0..n).map(|w| color[u * n + w] as u64 * r + color[w * n + v] as u64),
                        );
                        sig[tail..].sort_unstable();
                        sig
                    })
                    .collect::<Vec<_>>()
            });
            for (i, row) in rows.into_iter().enumerate() {
                let u = start + i;
                for (v, sig) in row.into_iter().enumerate() {
                    let fresh = ids.len() as u32;
                    next[u * n + v] = *ids.entry(sig).or_insert(fresh);
                }
            }
        }
        let new_rank = ids.len();
        color = next;
        if new_rank == rank {
            break;
        }
        rank = new_rank;
    }
    CoherentConfiguration::assemble(n, color, rank)
}

/// The WL-closure of a digraph.
pub fn wl_closure(g: &Digraph) -> CoherentConfiguration {
    wl_closure_with(g, Exec::Sequential)
}

pub fn wl_closure_with(g: &Digraph, exec: Exec) -> CoherentConfiguration {
    let n = g.n;
    let initial: Vec<u32> = (0..n * n)
        .map(|i| {
            let (u, v) = (i / n, i % n);
            if u == v {
                0
            } else {
                1 + g.has_arc(u, v) as u32 + 2 * g.has_arc(v, u) as u32
            }
        })
        .collect();
    refine(n, &initial, exec)
}

/// `rk_WL(Γ)`.
pub fn wl_rank(g: &Digraph) -> usize {
    wl_closure(g).rank()
}

/// `c[r][s][t]`, flattened.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionTensor {
    rank: usize,
    c: Vec<u32>,
}

impl IntersectionTensor {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, r: usize, s: usize, t: usize) -> u32 {
        self.c[(r * self.rank + s) * self.rank + t]
    }
}

/// Intersection numbers read off one representative per class and
/// cross-checked on a second representative when the class has one.
pub fn intersection_numbers(x: &CoherentConfiguration) -> Result<IntersectionTensor> {
    let rank = x.rank;
    let mut c = vec![0u32; rank * rank * rank];
    for (t, (first, second)) in x.class_representatives().into_iter().enumerate() {
        let (a, b) = first.expect("every colour is used");
        let counts = x.path_counts(a, b);
        if let Some((a2, b2)) = second {
            let other = x.path_counts(a2, b2);
            if other != counts {
                let (r, s) = counts
                    .iter()
                    .find(|(k, v)| other.get(k) != Some(v))
                    .map(|(k, _)| *k)
                    .or_else(|| other.keys().find(|k| !counts.contains_key(k)).copied())
                    .unwrap_or((0, 0));
                return Err(Error::Inconsistent(format!(
                    "c[{r}][{s}][{t}] differs between pairs ({a},{b}) and ({a2},{b2})"
                )));
            }
        }
        for ((r, s), k) in counts {
            c[(r as usize * rank + s as usize) * rank + t] = k;
        }
    }
    Ok(IntersectionTensor { rank, c })
}

/// The `α`-extension: the coarsest coherent refinement of `x` in which
/// `(α, α)` is a class of its own.
pub fn one_point_extension(x: &CoherentConfiguration, alpha: usize) -> Result<CoherentConfiguration> {
    if alpha >= x.n {
        return Err(Error::Precondition(format!(
            "point {alpha} out of range for {} points",
            x.n
        )));
    }
    let mut initial = x.color.clone();
    initial[alpha * x.n + alpha] = x.rank as u32;
    Ok(refine(x.n, &initial, Exec::Sequential))
}

/// Some point sees every basis relation at most once.
pub fn is_partly_regular(x: &CoherentConfiguration) -> bool {
    (0..x.n).any(|alpha| x.row_valencies(alpha).iter().all(|&k| k <= 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Digraph {
        Digraph::new(n, (0..n).flat_map(|i| [(i, (i + 1) % n), ((i + 1) % n, i)])).unwrap()
    }

    fn complete(n: usize) -> Digraph {
        Digraph::new(n, (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))))
            .unwrap()
    }

    fn circulant(n: usize, s: &[usize]) -> Digraph {
        Digraph::cayley(&GroupSubset::new(n, s.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(wl_closure(&complete(4)).rank(), 2);
        assert_eq!(wl_closure(&cycle(7)).rank(), 4);
        assert_eq!(wl_closure(&circulant(13, &[1, 3, 4, 9, 10, 12])).rank(), 3);
    }

    #[test]
    fn closures_satisfy_axioms() {
        for g in [complete(4), cycle(7), circulant(12, &[1, 4, 6, 8, 11]), circulant(8, &[1, 2, 6, 7])] {
            let x = wl_closure(&g);
            x.verify_axioms().unwrap();
            assert!(x.is_scheme());
        }
        let path = Digraph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let x = wl_closure(&path);
        x.verify_axioms().unwrap();
        assert!(!x.is_scheme());
    }

    #[test]
    fn arc_set_is_union_of_classes() {
        let g = circulant(10, &[1, 4, 5, 6, 9]);
        let x = wl_closure(&g);
        let mut arc_color = vec![None; x.rank()];
        for u in 0..10 {
            for v in 0..10 {
                let c = x.color(u, v) as usize;
                match arc_color[c] {
                    None => arc_color[c] = Some(g.has_arc(u, v)),
                    Some(b) => assert_eq!(b, g.has_arc(u, v)),
                }
            }
        }
    }

    #[test]
    fn intersection_number_examples() {
        let x = wl_closure(&complete(6));
        let c = intersection_numbers(&x).unwrap();
        let diag = x.color(0, 0) as usize;
        let off = x.color(0, 1) as usize;
        assert_eq!(c.get(off, off, diag), 5);

        // pentagon: an edge followed by an edge reaches a distance-2 pair once
        let x = wl_closure(&cycle(5));
        let c = intersection_numbers(&x).unwrap();
        let edge = x.color(0, 1) as usize;
        let far = x.color(0, 2) as usize;
        assert_eq!(c.get(edge, edge, far), 1);

        let x = wl_closure(&circulant(13, &[1, 3, 4, 9, 10, 12]));
        let c = intersection_numbers(&x).unwrap();
        let edge = x.color(0, 1) as usize;
        assert_eq!(c.get(edge, edge, edge), 2);
    }

    #[test]
    fn intersection_numbers_reject_non_coherent_partition() {
        // path 0-1-2 with only diagonal/off-diagonal distinguished by adjacency
        let colors = [0, 1, 2, 1, 0, 1, 2, 1, 0];
        let bogus = CoherentConfiguration::from_color_matrix(3, &colors).unwrap();
        let err = intersection_numbers(&bogus).unwrap_err();
        assert!(matches!(err, Error::Inconsistent(_)), "{err}");
        assert!(bogus.verify_axioms().is_err());
    }

    #[test]
    fn one_point_extension_examples() {
        let x = one_point_extension(&wl_closure(&complete(3)), 1).unwrap();
        assert_eq!(x.rank(), 5);

        let x = one_point_extension(&wl_closure(&cycle(5)), 0).unwrap();
        let mut fibers = x.fibers();
        fibers.sort();
        assert_eq!(fibers, vec![vec![0], vec![1, 4], vec![2, 3]]);
        assert!(is_partly_regular(&x));

        let base = wl_closure(&cycle(9));
        let once = one_point_extension(&base, 4).unwrap();
        let twice = one_point_extension(&once, 4).unwrap();
        assert_eq!(once, twice);
        assert!(once.refines(&base));
        assert!(once.rank() >= base.rank());
        assert!(one_point_extension(&base, 9).is_err());
    }

    #[test]
    fn partly_regular_examples() {
        let discrete = CoherentConfiguration::from_color_matrix(3, &[0, 1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        assert!(is_partly_regular(&discrete));
        assert!(!is_partly_regular(&wl_closure(&complete(4))));
        let cubes = circulant(13, &[1, 5, 8, 12]);
        let ext = one_point_extension(&wl_closure(&cubes), 0).unwrap();
        assert!(is_partly_regular(&ext));
    }

    #[test]
    fn grid_export() {
        let x = wl_closure(&complete(3));
        assert_eq!(x.to_grid_string(), "0 1 1\n1 0 1\n1 1 0\n");
        let g = Digraph::from_matrix(&[vec![0, 1], vec![0, 0]]).unwrap();
        assert_eq!(g.to_matrix_string(), "0 1\n0 0\n");
        assert!(!g.is_symmetric());
        assert!(Digraph::from_matrix(&[vec![1]]).is_err());
    }

    #[test]
    fn parallel_rounds_match_sequential() {
        let g = circulant(40, &[1, 3, 7, 33, 37, 39]);
        assert_eq!(wl_closure_with(&g, Exec::Sequential), wl_closure_with(&g, Exec::Parallel));
    }
}
