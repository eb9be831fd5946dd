//! Cyclic groups `Z_n`, their subsets, and the integer group ring `Z[Z_n]`.
//!
//! Elements are written additively as residues `0..n`; the identity is `0`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

/// The cyclic group of order `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CyclicGroup {
    order: usize,
}

impl CyclicGroup {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::Precondition("group order must be positive".into()));
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The unique subgroup of order `d`; `d` must divide `n`.
    pub fn subgroup(&self, d: usize) -> Result<GroupSubset> {
        if d == 0 || !self.order.is_multiple_of(d) {
            return Err(Error::Precondition(format!(
                "{d} does not divide {}",
                self.order
            )));
        }
        let step = self.order / d;
        Ok(GroupSubset {
            order: self.order,
            members: (0..d).map(|i| i * step).collect(),
        })
    }

    /// Residues coprime to `n`, i.e. the multipliers acting as automorphisms.
    pub fn units(&self) -> Vec<usize> {
        if self.order == 1 {
            return vec![0];
        }
        (1..self.order).filter(|u| u.gcd(&self.order) == 1).collect()
    }
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// All subgroups of `Z_n`, one per divisor, ordered by increasing order.
pub fn subgroup_lattice(g: &CyclicGroup) -> Vec<GroupSubset> {
    divisors(g.order)
        .into_iter()
        .map(|d| g.subgroup(d).expect("divisor"))
        .collect()
}

/// A subset of `Z_n` stored as a strictly increasing residue sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSubset {
    order: usize,
    members: Vec<usize>,
}

impl GroupSubset {
    /// Builds a subset from arbitrary residues, sorting and dropping duplicates.
    pub fn new<I: IntoIterator<Item = usize>>(order: usize, members: I) -> Result<Self> {
        if order == 0 {
            return Err(Error::Precondition("group order must be positive".into()));
        }
        let mut members: Vec<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&x| x >= order) {
            return Err(Error::InvalidSubset(format!(
                "residue {bad} out of range for Z_{order}"
            )));
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { order, members })
    }

    /// Builds a subset from a sequence that must already be strictly increasing.
    pub fn from_sorted(order: usize, members: Vec<usize>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Precondition("group order must be positive".into()));
        }
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSubset(
                "members must be strictly increasing".into(),
            ));
        }
        if members.last().is_some_and(|&x| x >= order) {
            return Err(Error::InvalidSubset(format!(
                "residue {} out of range for Z_{order}",
                members.last().unwrap()
            )));
        }
        Ok(Self { order, members })
    }

    pub(crate) fn from_sorted_unchecked(order: usize, members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.last().is_none_or(|&x| x < order));
        Self { order, members }
    }

    /// Builds a subset from a membership predicate.
    pub fn from_fn(order: usize, mut keep: impl FnMut(usize) -> bool) -> Self {
        Self {
            order,
            members: (0..order).filter(|&x| keep(x)).collect(),
        }
    }

    pub fn empty(order: usize) -> Self {
        Self {
            order,
            members: Vec::new(),
        }
    }

    pub fn full(order: usize) -> Self {
        Self {
            order,
            members: (0..order).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn min(&self) -> Option<usize> {
        self.members.first().copied()
    }

    /// Dense membership flags.
    pub fn flags(&self) -> Vec<bool> {
        let mut flags = vec![false; self.order];
        for &x in &self.members {
            flags[x] = true;
        }
        flags
    }

    /// `-X`.
    pub fn negate(&self) -> Self {
        self.map_residues(|x| (self.order - x) % self.order)
    }

    /// `uX` for a multiplier `u` (any integer residue; not required to be a unit).
    pub fn scale(&self, u: usize) -> Self {
        self.map_residues(|x| (x * u) % self.order)
    }

    /// `X + g`.
    pub fn translate(&self, g: usize) -> Self {
        self.map_residues(|x| (x + g) % self.order)
    }

    fn map_residues(&self, f: impl Fn(usize) -> usize) -> Self {
        let mut members: Vec<usize> = self.members.iter().map(|&x| f(x)).collect();
        members.sort_unstable();
        members.dedup();
        Self {
            order: self.order,
            members,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.members
            .iter()
            .all(|&x| self.contains((self.order - x) % self.order))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        members.sort_unstable();
        members.dedup();
        Ok(Self {
            order: self.order,
            members,
        })
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            order: self.order,
            members: self
                .members
                .iter()
                .copied()
                .filter(|&x| other.contains(x))
                .collect(),
        })
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            order: self.order,
            members: self
                .members
                .iter()
                .copied()
                .filter(|&x| !other.contains(x))
                .collect(),
        })
    }

    /// `Z_n \ X`.
    pub fn complement(&self) -> Self {
        let flags = self.flags();
        Self::from_fn(self.order, |x| !flags[x])
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.order == other.order && self.members.iter().all(|&x| other.contains(x))
    }

    pub fn is_subgroup(&self) -> bool {
        let d = self.len();
        d > 0 && self.order.is_multiple_of(d) && {
            let step = self.order / d;
            self.members.iter().enumerate().all(|(i, &x)| x == i * step)
        }
    }

    /// The stabiliser `{g : g + X = X}`, which is always a subgroup.
    pub fn stabilizer(&self) -> Self {
        let flags = self.flags();
        let n = self.order;
        // The stabiliser of a nonempty set is contained in X - x0, so only
        // differences need to be checked.
        let candidates: Vec<usize> = match self.members.first() {
            None => (0..n).collect(),
            Some(&x0) => self.members.iter().map(|&x| (x + n - x0) % n).collect(),
        };
        let mut members: Vec<usize> = candidates
            .into_iter()
            .filter(|&g| self.members.iter().all(|&x| flags[(x + g) % n]))
            .collect();
        members.sort_unstable();
        Self { order: n, members }
    }

    /// The subgroup generated by the members.
    pub fn generated_subgroup(&self) -> Self {
        let g = self
            .members
            .iter()
            .fold(self.order, |acc, &x| acc.gcd(&x));
        let step = if g == 0 { self.order } else { g };
        Self {
            order: self.order,
            members: (0..self.order).step_by(step).collect(),
        }
    }

    pub fn indicator(&self) -> GroupRingElement {
        indicator(self)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }
}

impl fmt::Display for GroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.order)?;
        for (i, x) in self.members.iter().enumerate() {
            if i == 0 {
                write!(f, " {x}")?;
            } else {
                write!(f, ",{x}")?;
            }
        }
        Ok(())
    }
}

/// Parses the literal `"n: s1,s2,...,sk"` with strictly increasing residues.
/// The empty set is written `"n:"`.
impl FromStr for GroupSubset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("missing ':' in {s:?}")))?;
        let order: usize = head
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad group order {head:?}")))?;
        let members = parse_residue_list(tail)?;
        Self::from_sorted(order, members)
    }
}

/// Parses a comma separated residue list; blank input yields the empty list.
pub fn parse_residue_list(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad residue {tok:?}")))
        })
        .collect()
}

/// An element of the integer group ring: coefficient `coeffs[g]` on residue `g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    order: usize,
    coeffs: Vec<i64>,
}

impl GroupRingElement {
    pub fn new(order: usize, coeffs: Vec<i64>) -> Result<Self> {
        if order == 0 || coeffs.len() != order {
            return Err(Error::Precondition(format!(
                "expected {order} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Self { order, coeffs })
    }

    pub fn zero(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![0; order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut e = Self::zero(order);
        e.coeffs[0] = 1;
        e
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> i64 {
        self.coeffs[g]
    }

    pub fn coeff_sum(&self) -> Result<i64> {
        self.coeffs
            .iter()
            .try_fold(0i64, |acc, &c| acc.checked_add(c))
            .ok_or(Error::Overflow)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, i64::checked_add)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, i64::checked_sub)
    }

    pub fn checked_scale(&self, k: i64) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| c.checked_mul(k).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(Self {
            order: self.order,
            coeffs,
        })
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        ring_multiply(self, other)
    }

    fn zip_with(&self, other: &Self, f: fn(i64, i64) -> Option<i64>) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| f(a, b).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(Self {
            order: self.order,
            coeffs,
        })
    }
}

/// `X̲ = Σ_{x ∈ X} x`.
pub fn indicator(s: &GroupSubset) -> GroupRingElement {
    let mut coeffs = vec![0; s.order];
    for &x in &s.members {
        coeffs[x] = 1;
    }
    GroupRingElement {
        order: s.order,
        coeffs,
    }
}

/// Group ring product: the cyclic convolution of coefficient vectors.
pub fn ring_multiply(x: &GroupRingElement, y: &GroupRingElement) -> Result<GroupRingElement> {
    if x.order != y.order {
        return Err(Error::OrderMismatch {
            left: x.order,
            right: y.order,
        });
    }
    let n = x.order;
    let support: Vec<(usize, i64)> = y
        .coeffs
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, c)| c != 0)
        .collect();
    let mut out = vec![0i64; n];
    for (u, &a) in x.coeffs.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for &(v, b) in &support {
            let z = if u + v >= n { u + v - n } else { u + v };
            let term = a.checked_mul(b).ok_or(Error::Overflow)?;
            out[z] = out[z].checked_add(term).ok_or(Error::Overflow)?;
        }
    }
    Ok(GroupRingElement {
        order: n,
        coeffs: out,
    })
}

/// Maps residue pairs `(x mod d1, y mod d2)` to residues mod `n = d1·d2`.
pub fn crt_embed(
    n: usize,
    d1: usize,
    d2: usize,
    residue_pairs: &[(usize, usize)],
) -> Result<GroupSubset> {
    check_crt(n, d1, d2)?;
    let lift = crt_lifter(d1, d2);
    let mut members = Vec::with_capacity(residue_pairs.len());
    for &(x, y) in residue_pairs {
        if x >= d1 || y >= d2 {
            return Err(Error::InvalidSubset(format!(
                "pair ({x},{y}) out of range for ({d1},{d2})"
            )));
        }
        members.push(lift(x, y));
    }
    GroupSubset::new(n, members)
}

/// Inverse of [`crt_embed`]: the residue pairs of each member, in member order.
pub fn crt_project(s: &GroupSubset, d1: usize, d2: usize) -> Result<Vec<(usize, usize)>> {
    check_crt(s.order, d1, d2)?;
    Ok(s.members.iter().map(|&g| (g % d1, g % d2)).collect())
}

fn check_crt(n: usize, d1: usize, d2: usize) -> Result<()> {
    if d1 == 0 || d2 == 0 || d1 * d2 != n || d1.gcd(&d2) != 1 {
        return Err(Error::NotCoprime { n, d1, d2 });
    }
    Ok(())
}

/// Returns `(x, y) ↦ g` with `g ≡ x mod d1`, `g ≡ y mod d2`, for coprime `d1, d2`.
pub(crate) fn crt_lifter(d1: usize, d2: usize) -> impl Fn(usize, usize) -> usize {
    let n = d1 * d2;
    // e1 ≡ 1 mod d1, ≡ 0 mod d2; e2 the other way round.
    let e1 = (0..n).step_by(d2).find(|&g| g % d1 == 1 % d1).unwrap_or(0);
    let e2 = (0..n).step_by(d1).find(|&g| g % d2 == 1 % d2).unwrap_or(0);
    move |x, y| (x * e1 + y * e2) % n
}
