//! Schur rings over `Z_n`.
//!
//! A ring is kept as its partition into basic sets, ordered by
//! `(size, smallest element)`, so the identity class `{0}` always comes first.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::closure::CoherentConfiguration;
use crate::cyclotomy::is_prime;
use crate::error::{Error, Result};
use crate::group::{divisors, indicator, ring_multiply, CyclicGroup, GroupSubset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchurRing {
    n: usize,
    basic_sets: Vec<GroupSubset>,
    class_of: Vec<usize>,
}

impl SchurRing {
    /// Validates the three S-ring axioms for the given partition.
    pub fn from_partition(n: usize, sets: Vec<GroupSubset>) -> Result<Self> {
        let ring = Self::assemble(n, sets)?;
        if ring.basic_sets[0].members() != [0] {
            return Err(Error::Inconsistent("{0} is not a basic set".into()));
        }
        for x in &ring.basic_sets {
            let neg = x.negate();
            if ring.basic_sets[ring.class_of[neg.members()[0]]] != neg {
                return Err(Error::Inconsistent(format!(
                    "-X is not a basic set for X = {x}"
                )));
            }
        }
        ring.check_closed()?;
        Ok(ring)
    }

    fn assemble(n: usize, mut sets: Vec<GroupSubset>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("group order must be positive".into()));
        }
        let mut class_of = vec![usize::MAX; n];
        sets.retain(|s| !s.is_empty());
        sets.sort_by_key(|s| (s.len(), s.min()));
        for (i, s) in sets.iter().enumerate() {
            if s.order() != n {
                return Err(Error::OrderMismatch {
                    left: n,
                    right: s.order(),
                });
            }
            for &x in s.members() {
                if class_of[x] != usize::MAX {
                    return Err(Error::Inconsistent(format!(
                        "basic sets overlap at {x}"
                    )));
                }
                class_of[x] = i;
            }
        }
        if let Some(x) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::Inconsistent(format!("{x} is not covered")));
        }
        Ok(Self {
            n,
            basic_sets: sets,
            class_of,
        })
    }

    /// Builds the ring from a class id per residue.
    fn from_classes(n: usize, classes: &[usize]) -> Self {
        let count = classes.iter().max().map_or(0, |m| m + 1);
        let mut members = vec![Vec::new(); count];
        for (g, &c) in classes.iter().enumerate() {
            members[c].push(g);
        }
        let sets = members
            .into_iter()
            .map(|m| GroupSubset::from_sorted_unchecked(n, m))
            .collect();
        Self::assemble(n, sets).expect("classes form a partition")
    }

    /// `T_G`: the rank-2 ring.
    pub fn trivial(n: usize) -> Self {
        let sets = vec![
            GroupSubset::from_sorted_unchecked(n, vec![0]),
            GroupSubset::from_fn(n, |x| x != 0),
        ];
        Self::assemble(n, sets).expect("partition")
    }

    /// `ZG`: every element is a basic set.
    pub fn group_ring(n: usize) -> Self {
        Self::from_classes(n, &(0..n).collect::<Vec<_>>())
    }

    /// `cyc(K, Z_n)` for the multiplier group generated by `generators`.
    pub fn cyclotomic(n: usize, generators: &[usize]) -> Result<Self> {
        let k = multiplier_closure(n, generators)?;
        Ok(Self::from_classes(n, &orbit_classes(n, &k)))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.basic_sets.len()
    }

    pub fn basic_sets(&self) -> &[GroupSubset] {
        &self.basic_sets
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    /// `X̲ ∈ A`, i.e. `X` is a union of basic sets.
    pub fn is_a_set(&self, x: &GroupSubset) -> bool {
        x.order() == self.n
            && x.members().iter().all(|&g| {
                self.basic_sets[self.class_of[g]]
                    .members()
                    .iter()
                    .all(|&h| x.contains(h))
            })
    }

    fn check_closed(&self) -> Result<()> {
        let ind: Vec<_> = self.basic_sets.iter().map(indicator).collect();
        for (i, a) in ind.iter().enumerate() {
            for b in &ind[i..] {
                let prod = ring_multiply(a, b)?;
                for z in &self.basic_sets {
                    let first = prod.coeff(z.members()[0]);
                    if z.members().iter().any(|&g| prod.coeff(g) != first) {
                        return Err(Error::Inconsistent(format!(
                            "product of basic sets is not constant on {z}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Index of the basic set `X⁻¹ = -X`.
    pub fn inverse_index(&self, i: usize) -> usize {
        let x = self.basic_sets[i].members()[0];
        self.class_of[(self.n - x) % self.n]
    }

    /// Structure constants by direct convolution of basic-set indicators.
    pub fn structure_constants(&self) -> Result<StructureConstants> {
        let r = self.rank();
        let ind: Vec<_> = self.basic_sets.iter().map(indicator).collect();
        let mut c = vec![0u32; r * r * r];
        for x in 0..r {
            for y in 0..r {
                let prod = ring_multiply(&ind[x], &ind[y])?;
                for (z, set) in self.basic_sets.iter().enumerate() {
                    let v = prod.coeff(set.members()[0]);
                    if set.members().iter().any(|&g| prod.coeff(g) != v) {
                        return Err(Error::Inconsistent(format!(
                            "product of basic sets {x},{y} is not constant on {set}"
                        )));
                    }
                    c[(x * r + y) * r + z] = u32::try_from(v).map_err(|_| Error::Overflow)?;
                }
            }
        }
        Ok(StructureConstants {
            rank: r,
            sizes: self.basic_sets.iter().map(|s| s.len()).collect(),
            inverse: (0..r).map(|i| self.inverse_index(i)).collect(),
            c,
        })
    }

    /// All subgroups that are unions of basic sets, by increasing order.
    pub fn a_subgroups(&self) -> Vec<GroupSubset> {
        let g = CyclicGroup::new(self.n).expect("positive order");
        divisors(self.n)
            .into_iter()
            .map(|d| g.subgroup(d).expect("divisor"))
            .filter(|h| self.is_a_set(h))
            .collect()
    }

    /// `rad(X)` for an A-set `X`.
    pub fn radical(&self, x: &GroupSubset) -> Result<GroupSubset> {
        if !self.is_a_set(x) {
            return Err(Error::Precondition(format!("{x} is not an A-set")));
        }
        Ok(x.stabilizer())
    }

    /// `rad(A)`: the radical of the basic set containing the generator 1.
    pub fn ring_radical(&self) -> GroupSubset {
        if self.n == 1 {
            return GroupSubset::full(1);
        }
        self.basic_sets[self.class_of[1]].stabilizer()
    }

    pub fn is_primitive(&self) -> bool {
        self.a_subgroups().len() <= 2
    }

    /// The multipliers fixing every basic set, when their orbits are exactly
    /// the basic sets.
    pub fn recognize_cyclotomic(&self) -> Option<Vec<usize>> {
        let units = CyclicGroup::new(self.n).ok()?.units();
        let k: Vec<usize> = units
            .into_iter()
            .filter(|&u| self.basic_sets.iter().all(|x| x.scale(u) == *x))
            .collect();
        let classes = orbit_classes(self.n, &k);
        let orbits = Self::from_classes(self.n, &classes);
        (orbits.basic_sets == self.basic_sets).then_some(k)
    }

    /// `A_H` for an A-subgroup `H` of order `h`, as a ring over `Z_h`.
    pub fn restrict(&self, h: usize) -> Result<SchurRing> {
        let sub = CyclicGroup::new(self.n)?.subgroup(h)?;
        if !self.is_a_set(&sub) {
            return Err(Error::Precondition(format!(
                "subgroup of order {h} is not an A-subgroup"
            )));
        }
        let step = self.n / h;
        let sets = self
            .basic_sets
            .iter()
            .filter(|x| x.is_subset_of(&sub))
            .map(|x| GroupSubset::new(h, x.members().iter().map(|&g| g / step)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_partition(h, sets)
    }

    /// `A_{G/L}` for an A-subgroup `L` of order `l`, as a ring over `Z_{n/l}`.
    pub fn quotient(&self, l: usize) -> Result<SchurRing> {
        let sub = CyclicGroup::new(self.n)?.subgroup(l)?;
        if !self.is_a_set(&sub) {
            return Err(Error::Precondition(format!(
                "subgroup of order {l} is not an A-subgroup"
            )));
        }
        let m = self.n / l;
        let mut images: Vec<GroupSubset> = Vec::new();
        for x in &self.basic_sets {
            let img = GroupSubset::new(m, x.members().iter().map(|&g| g % m))?;
            if !images.contains(&img) {
                images.push(img);
            }
        }
        Self::from_partition(m, images)
    }

    /// Coprime pairs `(|H|, |V|)`, `|H| < |V|`, with `A = A_H ⊗ A_V` nontrivially.
    pub fn tensor_splittings(&self) -> Vec<(usize, usize)> {
        let subs = self.a_subgroups();
        let mut out = Vec::new();
        for h in &subs {
            let a = h.len();
            let b = self.n / a;
            if a == 1 || b == 1 || a >= b || a.gcd(&b) != 1 {
                continue;
            }
            if !subs.iter().any(|v| v.len() == b) {
                continue;
            }
            if self.is_tensor_product(a, b) {
                out.push((a, b));
            }
        }
        out
    }

    fn is_tensor_product(&self, a: usize, b: usize) -> bool {
        let g = CyclicGroup::new(self.n).expect("order");
        let (h, v) = (g.subgroup(a).unwrap(), g.subgroup(b).unwrap());
        let inside = |s: &GroupSubset| -> Vec<&GroupSubset> {
            self.basic_sets.iter().filter(|x| x.is_subset_of(s)).collect()
        };
        let (xh, xv) = (inside(&h), inside(&v));
        if xh.len() * xv.len() != self.rank() {
            return false;
        }
        let mut sums = Vec::with_capacity(self.rank());
        for x1 in &xh {
            for x2 in &xv {
                let sum = GroupSubset::new(
                    self.n,
                    x1.members()
                        .iter()
                        .flat_map(|&p| x2.members().iter().map(move |&q| (p + q) % self.n)),
                )
                .expect("in range");
                if sum.len() != x1.len() * x2.len() {
                    return false;
                }
                sums.push(sum);
            }
        }
        sums.sort_by_key(|s| (s.len(), s.min()));
        sums == self.basic_sets
    }

    /// Pairs `(|L|, |U|)` of A-subgroups `{0} < L ≤ U < G` with `L ≤ rad(X)`
    /// for every basic set `X` outside `U`.
    pub fn generalized_wreath_sections(&self) -> Vec<(usize, usize)> {
        let subs = self.a_subgroups();
        let mut out = Vec::new();
        for l in &subs {
            if l.len() == 1 || l.len() == self.n {
                continue;
            }
            for u in &subs {
                if u.len() == self.n || u.len() % l.len() != 0 {
                    continue;
                }
                let ok = self
                    .basic_sets
                    .iter()
                    .filter(|x| !x.is_subset_of(u))
                    .all(|x| l.is_subset_of(&x.stabilizer()));
                if ok {
                    out.push((l.len(), u.len()));
                }
            }
        }
        out
    }

    /// The Cayley scheme `X(A)`: pair `(u, v)` coloured by the basic set of `v - u`.
    pub fn cayley_scheme(&self) -> CoherentConfiguration {
        let n = self.n;
        let colors: Vec<u32> = (0..n * n)
            .map(|i| self.class_of[(i % n + n - i / n) % n] as u32)
            .collect();
        CoherentConfiguration::from_color_matrix(n, &colors).expect("square matrix")
    }

    /// One line per basic set, residues comma separated.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for x in &self.basic_sets {
            let line: Vec<String> = x.members().iter().map(|g| g.to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Inverse of [`SchurRing::to_text`]; the axioms are re-validated.
    pub fn from_text(n: usize, text: &str) -> Result<Self> {
        let sets = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| GroupSubset::new(n, crate::group::parse_residue_list(l)?))
            .collect::<Result<Vec<_>>>()?;
        Self::from_partition(n, sets)
    }
}

impl fmt::Display for SchurRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `c[X][Y][Z] = c^Z_{XY}` in basic-set index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    rank: usize,
    sizes: Vec<usize>,
    inverse: Vec<usize>,
    c: Vec<u32>,
}

impl StructureConstants {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> u32 {
        self.c[(x * self.rank + y) * self.rank + z]
    }

    /// `|Z| c^{Z⁻}_{XY} = |X| c^{X⁻}_{YZ} = |Y| c^{Y⁻}_{ZX}` for all triples.
    pub fn check_triple_identity(&self) -> Result<()> {
        let r = self.rank;
        for x in 0..r {
            for y in 0..r {
                for z in 0..r {
                    let a = self.sizes[z] as u64 * self.get(x, y, self.inverse[z]) as u64;
                    let b = self.sizes[x] as u64 * self.get(y, z, self.inverse[x]) as u64;
                    let c = self.sizes[y] as u64 * self.get(z, x, self.inverse[y]) as u64;
                    if a != b || b != c {
                        return Err(Error::Inconsistent(format!(
                            "triple identity fails at ({x},{y},{z}): {a}, {b}, {c}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Compares against the intersection numbers of the Cayley scheme,
    /// with basic set `X` matched to the colour of `(0, x)`.
    pub fn check_against_closure(
        &self,
        ring: &SchurRing,
        closure: &CoherentConfiguration,
        tensor: &crate::closure::IntersectionTensor,
    ) -> Result<()> {
        let colour: Vec<usize> = ring
            .basic_sets()
            .iter()
            .map(|x| closure.color(0, x.members()[0]) as usize)
            .collect();
        for x in 0..self.rank {
            for y in 0..self.rank {
                for z in 0..self.rank {
                    let direct = self.get(x, y, z);
                    let via = tensor.get(colour[x], colour[y], colour[z]);
                    if direct != via {
                        return Err(Error::Inconsistent(format!(
                            "c^{z}_{{{x}{y}}} = {direct} but the closure gives {via}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The S-ring of the WL-closure of a Cayley digraph: colour classes of row 0.
pub fn sring_from_closure(x: &CoherentConfiguration) -> Result<SchurRing> {
    let n = x.vertex_count();
    let mut ids: HashMap<u32, usize> = HashMap::new();
    let classes: Vec<usize> = x
        .row(0)
        .iter()
        .map(|c| {
            let next = ids.len();
            *ids.entry(*c).or_insert(next)
        })
        .collect();
    let ring = SchurRing::from_classes(n, &classes);
    let ring = SchurRing::from_partition(n, ring.basic_sets)?;
    if ring.rank() != x.rank() {
        return Err(Error::Inconsistent(format!(
            "row 0 has {} classes but the configuration has rank {}; not a Cayley scheme",
            ring.rank(),
            x.rank()
        )));
    }
    Ok(ring)
}

/// `(U̲ - L̲)² = (|U| - 2|L|)·(U∖L)̲ + (|U| - |L|)·L̲` for every pair of
/// subgroups `L ≤ U` of `Z_n`.
pub fn check_subgroup_chain_identity(n: usize) -> Result<usize> {
    let g = CyclicGroup::new(n)?;
    let subs: Vec<GroupSubset> = divisors(n).into_iter().map(|d| g.subgroup(d)).collect::<Result<_>>()?;
    let mut checked = 0;
    for l in &subs {
        for u in subs.iter().filter(|u| l.is_subset_of(u)) {
            let diff = indicator(u).checked_sub(&indicator(l))?;
            let lhs = ring_multiply(&diff, &diff)?;
            let (ul, ll) = (u.len() as i64, l.len() as i64);
            let rhs = indicator(&u.difference(l)?)
                .checked_scale(ul - 2 * ll)?
                .checked_add(&indicator(l).checked_scale(ul - ll)?)?;
            if lhs != rhs {
                return Err(Error::Inconsistent(format!(
                    "subgroup square identity fails for |L|={}, |U|={} in Z_{n}",
                    l.len(),
                    u.len()
                )));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// The smallest S-ring over `Z_n` in which `seed` is an A-set, by
/// Schur–Wielandt refinement in the group ring.
pub fn schur_wielandt_closure(n: usize, seed: &GroupSubset) -> Result<SchurRing> {
    if seed.order() != n {
        return Err(Error::OrderMismatch {
            left: n,
            right: seed.order(),
        });
    }
    if seed.contains(0) {
        return Err(Error::Precondition("seed must not contain 0".into()));
    }
    let mut classes: Vec<usize> = (0..n)
        .map(|g| match (g, seed.contains(g)) {
            (0, _) => 0,
            (_, true) => 1,
            _ => 2,
        })
        .collect();
    classes = renumber_classes(&classes);
    let mut count = classes.iter().max().map_or(0, |m| m + 1);
    loop {
        let ring = SchurRing::from_classes(n, &classes);
        let ind: Vec<_> = ring.basic_sets.iter().map(indicator).collect();
        let mut keys: Vec<Vec<i64>> = (0..n)
            .map(|g| vec![classes[g] as i64, classes[(n - g) % n] as i64])
            .collect();
        for i in 0..ind.len() {
            for j in i..ind.len() {
                let prod = ring_multiply(&ind[i], &ind[j])?;
                for (g, key) in keys.iter_mut().enumerate() {
                    key.push(prod.coeff(g));
                }
            }
        }
        let mut ids: HashMap<Vec<i64>, usize> = HashMap::new();
        let next: Vec<usize> = keys
            .into_iter()
            .map(|k| {
                let fresh = ids.len();
                *ids.entry(k).or_insert(fresh)
            })
            .collect();
        classes = next;
        if ids.len() == count {
            break;
        }
        count = ids.len();
    }
    let ring = SchurRing::from_classes(n, &classes);
    debug_assert!(SchurRing::from_partition(n, ring.basic_sets.clone()).is_ok());
    Ok(ring)
}

fn renumber_classes(classes: &[usize]) -> Vec<usize> {
    let mut ids: HashMap<usize, usize> = HashMap::new();
    classes
        .iter()
        .map(|c| {
            let next = ids.len();
            *ids.entry(*c).or_insert(next)
        })
        .collect()
}

/// The multiplier group generated by `generators` (all must be units).
fn multiplier_closure(n: usize, generators: &[usize]) -> Result<Vec<usize>> {
    let mut k = vec![1 % n];
    for &u in generators {
        if u.gcd(&n) != 1 {
            return Err(Error::Precondition(format!("{u} is not a unit mod {n}")));
        }
    }
    let mut i = 0;
    while i < k.len() {
        for &u in generators {
            let p = (k[i] * u) % n;
            if !k.contains(&p) {
                k.push(p);
            }
        }
        i += 1;
    }
    k.sort_unstable();
    Ok(k)
}

fn orbit_classes(n: usize, k: &[usize]) -> Vec<usize> {
    let mut classes = vec![usize::MAX; n];
    let mut next = 0;
    for g in 0..n {
        if classes[g] != usize::MAX {
            continue;
        }
        for &u in k {
            classes[(g * u) % n] = next;
        }
        classes[g] = next;
        next += 1;
    }
    classes
}

/// Nonzero squares mod a prime `p`, as a sorted residue list.
fn squares_mod(p: usize) -> Vec<usize> {
    let mut sq: Vec<usize> = (1..p).map(|x| x * x % p).collect();
    sq.sort_unstable();
    sq.dedup();
    sq
}

/// True when `residues` (nonzero, mod prime `p`) is the set of squares or of non-squares.
fn is_square_coset(p: usize, residues: &[usize]) -> bool {
    if p < 3 || residues.len() != (p - 1) / 2 {
        return false;
    }
    let sq = squares_mod(p);
    let mut r = residues.to_vec();
    r.sort_unstable();
    r.dedup();
    if r.len() != residues.len() {
        return false;
    }
    let in_sq = r.iter().filter(|x| sq.binary_search(x).is_ok()).count();
    in_sq == r.len() || in_sq == 0 && !r.contains(&0)
}

/// The shapes of a rank-4 S-ring over a cyclic group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "case")]
pub enum Rank4Form {
    /// `T_L ⊗ T_U` with `|L| < |U|` coprime.
    TensorTT { l: usize, u: usize },
    /// `(T_L ≀ T_{U/L}) ≀ T_{G/U}`.
    DoubleWreath { l: usize, u: usize },
    /// `cyc((p-1)/2, L) ≀ T_{G/L}` with `|L| = p` prime.
    CycWreathBottom { p: usize },
    /// `T_L ≀ cyc((p-1)/2, G/L)` with `|G/L| = p` prime.
    WreathCycTop { l: usize, p: usize },
    /// `cyc((p-1)/3, Z_p)`.
    PrimeCubicCyclotomic { p: usize, multiplier_order: usize },
    /// `Z[C_4]`.
    Z4Full,
}

impl Rank4Form {
    pub fn case_number(&self) -> u8 {
        match self {
            Rank4Form::TensorTT { .. } => 1,
            Rank4Form::DoubleWreath { .. } => 2,
            Rank4Form::CycWreathBottom { .. } => 3,
            Rank4Form::WreathCycTop { .. } => 4,
            Rank4Form::PrimeCubicCyclotomic { .. } => 5,
            Rank4Form::Z4Full => 6,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Rank4Form::TensorTT { .. } => "TensorTT",
            Rank4Form::DoubleWreath { .. } => "DoubleWreath",
            Rank4Form::CycWreathBottom { .. } => "CycWreathBottom",
            Rank4Form::WreathCycTop { .. } => "WreathCycTop",
            Rank4Form::PrimeCubicCyclotomic { .. } => "PrimeCubicCyclotomic",
            Rank4Form::Z4Full => "Z4Full",
        }
    }

    /// Rebuilds the basic-set partition of `Z_n` from the witnesses.
    pub fn basic_sets(&self, n: usize) -> Result<Vec<GroupSubset>> {
        let g = CyclicGroup::new(n)?;
        let zero = GroupSubset::from_sorted_unchecked(n, vec![0]);
        let sets = match *self {
            Rank4Form::TensorTT { l, u } => {
                let (lh, uh) = (g.subgroup(l)?, g.subgroup(u)?);
                let l_sharp = lh.difference(&zero)?;
                let u_sharp = uh.difference(&zero)?;
                let rest = lh.union(&uh)?.complement();
                vec![zero, l_sharp, u_sharp, rest]
            }
            Rank4Form::DoubleWreath { l, u } => {
                let (lh, uh) = (g.subgroup(l)?, g.subgroup(u)?);
                vec![
                    lh.difference(&zero)?,
                    uh.difference(&lh)?,
                    uh.complement(),
                    zero,
                ]
            }
            Rank4Form::CycWreathBottom { p } => {
                let lh = g.subgroup(p)?;
                let step = n / p;
                let sq = squares_mod(p);
                let x1 = GroupSubset::new(n, sq.iter().map(|&j| j * step))?;
                let x2 = lh.difference(&x1)?.difference(&zero)?;
                vec![zero, x1, x2, lh.complement()]
            }
            Rank4Form::WreathCycTop { l, p } => {
                if l * p != n {
                    return Err(Error::Precondition(format!("{l}·{p} ≠ {n}")));
                }
                let lh = g.subgroup(l)?;
                let sq = squares_mod(p);
                let x1 = GroupSubset::from_fn(n, |x| sq.binary_search(&(x % p)).is_ok());
                let x2 = lh.union(&x1)?.complement();
                vec![zero.clone(), lh.difference(&zero)?, x1, x2]
            }
            Rank4Form::PrimeCubicCyclotomic { p, .. } => {
                if p != n {
                    return Err(Error::Precondition(format!("{p} ≠ {n}")));
                }
                let root = crate::cyclotomy::primitive_root(p)
                    .ok_or_else(|| Error::Precondition(format!("{p} is not prime")))?;
                SchurRing::cyclotomic(n, &[mod_pow(root, 3, p)])?.basic_sets
            }
            Rank4Form::Z4Full => SchurRing::group_ring(n).basic_sets,
        };
        Ok(SchurRing::assemble(n, sets)?.basic_sets)
    }
}

impl fmt::Display for Rank4Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Rank4Form::TensorTT { l, u } => write!(f, "TensorTT(|L|={l},|U|={u})"),
            Rank4Form::DoubleWreath { l, u } => write!(f, "DoubleWreath(|L|={l},|U|={u})"),
            Rank4Form::CycWreathBottom { p } => write!(f, "CycWreathBottom(p={p})"),
            Rank4Form::WreathCycTop { l, p } => write!(f, "WreathCycTop(|L|={l},p={p})"),
            Rank4Form::PrimeCubicCyclotomic { p, multiplier_order } => {
                write!(f, "PrimeCubicCyclotomic(p={p},|K|={multiplier_order})")
            }
            Rank4Form::Z4Full => write!(f, "Z4Full"),
        }
    }
}

/// The shapes of a rank-3 S-ring over a cyclic group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "case")]
pub enum Rank3Form {
    WreathTT { l: usize },
    PaleyCyclotomic { p: usize },
}

impl Rank3Form {
    pub fn basic_sets(&self, n: usize) -> Result<Vec<GroupSubset>> {
        let zero = GroupSubset::from_sorted_unchecked(n, vec![0]);
        let sets = match *self {
            Rank3Form::WreathTT { l } => {
                let lh = CyclicGroup::new(n)?.subgroup(l)?;
                vec![zero.clone(), lh.difference(&zero)?, lh.complement()]
            }
            Rank3Form::PaleyCyclotomic { p } => {
                if p != n {
                    return Err(Error::Precondition(format!("{p} ≠ {n}")));
                }
                let x1 = GroupSubset::new(n, squares_mod(p))?;
                let x2 = x1.union(&zero)?.complement();
                vec![zero, x1, x2]
            }
        };
        Ok(SchurRing::assemble(n, sets)?.basic_sets)
    }
}

impl fmt::Display for Rank3Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Rank3Form::WreathTT { l } => write!(f, "WreathTT(|L|={l})"),
            Rank3Form::PaleyCyclotomic { p } => write!(f, "PaleyCyclotomic(p={p})"),
        }
    }
}

pub(crate) fn mod_pow(base: usize, exp: usize, m: usize) -> usize {
    let mut result = 1 % m;
    let mut b = base % m;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    result
}

/// Every rank-4 shape the ring matches, in case order 6, 1, 2, 3, 4, 5.
pub fn rank4_matches(a: &SchurRing) -> Vec<Rank4Form> {
    let mut out = Vec::new();
    if a.rank() != 4 {
        return out;
    }
    let n = a.n;
    let sets = &a.basic_sets[1..];
    let with_zero = |x: &GroupSubset| {
        let mut m = x.members().to_vec();
        m.insert(0, 0);
        GroupSubset::from_sorted_unchecked(n, m)
    };

    // (6)
    if n == 4 {
        out.push(Rank4Form::Z4Full);
    }

    // (1)
    let subgroup_sets: Vec<(usize, usize)> = sets
        .iter()
        .enumerate()
        .filter(|(_, x)| with_zero(x).is_subgroup())
        .map(|(i, x)| (i, x.len() + 1))
        .collect();
    for (ia, &(_, a_ord)) in subgroup_sets.iter().enumerate() {
        for &(_, b_ord) in &subgroup_sets[ia + 1..] {
            let (l, u) = (a_ord.min(b_ord), a_ord.max(b_ord));
            if l > 1 && l * u == n && l.gcd(&u) == 1 {
                out.push(Rank4Form::TensorTT { l, u });
            }
        }
    }

    // (2)
    for &(i, l) in &subgroup_sets {
        if l == 1 || l == n {
            continue;
        }
        let lh = with_zero(&sets[i]);
        for (j, y) in sets.iter().enumerate() {
            if j == i {
                continue;
            }
            let uh = lh.union(y).expect("same order");
            if uh.is_subgroup() && uh.len() < n {
                out.push(Rank4Form::DoubleWreath { l, u: uh.len() });
            }
        }
    }

    // (3)
    for (i, z) in sets.iter().enumerate() {
        let lh = z.complement();
        let p = lh.len();
        if !lh.is_subgroup() || p == n || p < 3 || !is_prime(p) {
            continue;
        }
        let others: Vec<&GroupSubset> = sets
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, x)| x)
            .collect();
        let step = n / p;
        if others.iter().all(|x| {
            x.is_subset_of(&lh)
                && is_square_coset(p, &x.members().iter().map(|&g| g / step).collect::<Vec<_>>())
        }) {
            out.push(Rank4Form::CycWreathBottom { p });
        }
    }

    // (4)
    for &(i, l) in &subgroup_sets {
        if l == 1 || l == n || !is_prime(n / l) || n / l < 3 {
            continue;
        }
        let p = n / l;
        let lh = with_zero(&sets[i]);
        let others: Vec<&GroupSubset> = sets
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, x)| x)
            .collect();
        let ok = others.iter().all(|x| {
            lh.is_subset_of(&x.stabilizer()) && {
                let mut residues: Vec<usize> = x.members().iter().map(|&g| g % p).collect();
                residues.sort_unstable();
                residues.dedup();
                is_square_coset(p, &residues)
            }
        });
        if ok {
            out.push(Rank4Form::WreathCycTop { l, p });
        }
    }

    // (5)
    if is_prime(n) && n % 3 == 1 {
        if let Some(k) = a.recognize_cyclotomic() {
            if k.len() == (n - 1) / 3 {
                out.push(Rank4Form::PrimeCubicCyclotomic {
                    p: n,
                    multiplier_order: k.len(),
                });
            }
        }
    }
    out
}

/// Matches a rank-4 ring against the six shapes, cheapest tests first.
pub fn classify_rank4(a: &SchurRing) -> Result<Rank4Form> {
    if a.rank() != 4 {
        return Err(Error::Precondition(format!("rank is {}, not 4", a.rank())));
    }
    rank4_matches(a).into_iter().next().ok_or_else(|| {
        Error::Classification(format!(
            "rank-4 S-ring over Z_{} matches no known shape:\n{}",
            a.n,
            a.to_text()
        ))
    })
}

pub fn rank3_matches(a: &SchurRing) -> Vec<Rank3Form> {
    let mut out = Vec::new();
    if a.rank() != 3 {
        return out;
    }
    let n = a.n;
    for x in &a.basic_sets[1..] {
        let l = x.len() + 1;
        if l < n {
            let mut m = x.members().to_vec();
            m.insert(0, 0);
            if GroupSubset::from_sorted_unchecked(n, m).is_subgroup() {
                out.push(Rank3Form::WreathTT { l });
            }
        }
    }
    if n >= 3 && is_prime(n) {
        let x = &a.basic_sets[1];
        if is_square_coset(n, x.members()) {
            out.push(Rank3Form::PaleyCyclotomic { p: n });
        }
    }
    out
}

pub fn classify_rank3(a: &SchurRing) -> Result<Rank3Form> {
    if a.rank() != 3 {
        return Err(Error::Precondition(format!("rank is {}, not 3", a.rank())));
    }
    rank3_matches(a).into_iter().next().ok_or_else(|| {
        Error::Classification(format!(
            "rank-3 S-ring over Z_{} matches no known shape:\n{}",
            a.n,
            a.to_text()
        ))
    })
}
