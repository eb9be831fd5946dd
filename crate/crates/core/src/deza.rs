//! Deza / strongly regular / divisible design tests for circulant graphs.
//!
//! Everything is read off `S̲²`: for `g ≠ 0` its coefficient is the number of
//! common neighbours of `0` and `g`, and by translation invariance of every
//! pair at difference `g`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{indicator, ring_multiply, GroupSubset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DezaParams {
    pub n: usize,
    pub k: usize,
    pub b: u64,
    pub a: u64,
}

impl fmt::Display for DezaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.n, self.k, self.b, self.a)
    }
}

/// `(n, k, within, between, classes, class_size)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DdgParams {
    pub n: usize,
    pub k: usize,
    pub within: u64,
    pub between: u64,
    pub classes: usize,
    pub class_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DezaReport {
    pub n: usize,
    pub k: usize,
    #[serde(rename = "deza")]
    pub is_deza: bool,
    #[serde(rename = "srg")]
    pub is_srg: bool,
    #[serde(rename = "strict")]
    pub is_strictly_deza: bool,
    #[serde(rename = "ddg")]
    pub is_ddg: bool,
    pub b: Option<u64>,
    pub a: Option<u64>,
    #[serde(skip)]
    pub spectrum: BTreeMap<u64, GroupSubset>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ddg_params: Option<DdgParams>,
    #[serde(skip)]
    pub diameter: Diameter,
}

impl DezaReport {
    pub fn params(&self) -> Option<DezaParams> {
        Some(DezaParams {
            n: self.n,
            k: self.k,
            b: self.b?,
            a: self.a?,
        })
    }

    /// The level set with coefficient `b` (empty in the one-value case).
    pub fn level_b(&self) -> Option<&GroupSubset> {
        if self.spectrum.len() == 2 {
            self.spectrum.values().next_back()
        } else {
            None
        }
    }

    pub fn level_a(&self) -> Option<&GroupSubset> {
        if self.spectrum.len() <= 2 {
            self.spectrum.values().next()
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Diameter {
    Finite(u32),
    #[default]
    Infinite,
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => f.write_str("inf"),
        }
    }
}

fn check_connection_set(n: usize, s: &GroupSubset) -> Result<()> {
    if s.order() != n {
        return Err(Error::OrderMismatch {
            left: n,
            right: s.order(),
        });
    }
    if s.contains(0) {
        return Err(Error::Precondition("connection set contains 0".into()));
    }
    if !s.is_symmetric() {
        return Err(Error::Precondition(format!("{s} is not inverse-closed")));
    }
    Ok(())
}

/// Eccentricity of vertex 0 in `Cay(Z_n, S)`.
pub fn diameter(n: usize, s: &GroupSubset) -> Diameter {
    let mut dist = vec![u32::MAX; n];
    dist[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    let mut far = 0;
    while let Some(u) = queue.pop_front() {
        for &x in s.members() {
            let v = (u + x) % n;
            if dist[v] == u32::MAX {
                dist[v] = dist[u] + 1;
                far = far.max(dist[v]);
                queue.push_back(v);
            }
        }
    }
    if dist.contains(&u32::MAX) {
        Diameter::Infinite
    } else {
        Diameter::Finite(far)
    }
}

pub fn deza_report(n: usize, s: &GroupSubset) -> Result<DezaReport> {
    check_connection_set(n, s)?;
    let k = s.len();
    let sq = ring_multiply(&indicator(s), &indicator(s))?;
    debug_assert_eq!(sq.coeff(0), k as i64);

    let mut levels: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for g in 1..n {
        levels.entry(sq.coeff(g) as u64).or_default().push(g);
    }
    let spectrum: BTreeMap<u64, GroupSubset> = levels
        .into_iter()
        .map(|(c, members)| (c, GroupSubset::from_sorted_unchecked(n, members)))
        .collect();

    let is_deza = spectrum.len() <= 2;
    let (b, a) = match spectrum.len() {
        0 => (Some(0), Some(0)),
        1 => {
            let v = *spectrum.keys().next().unwrap();
            (Some(v), Some(v))
        }
        2 => {
            let mut it = spectrum.keys();
            let a = *it.next().unwrap();
            (Some(*it.next().unwrap()), Some(a))
        }
        _ => (None, None),
    };
    let is_srg = match spectrum.len() {
        0 | 1 => true,
        2 => spectrum.values().any(|level| level == s),
        _ => false,
    };
    let diam = diameter(n, s);
    let is_strictly_deza = is_deza && !is_srg && diam == Diameter::Finite(2);

    let mut ddg_params = None;
    if spectrum.len() == 2 {
        let values: Vec<(&u64, &GroupSubset)> = spectrum.iter().collect();
        for (i, (&within, level)) in values.iter().enumerate() {
            let mut h = level.members().to_vec();
            h.insert(0, 0);
            let h = GroupSubset::from_sorted_unchecked(n, h);
            if h.is_subgroup() {
                ddg_params = Some(DdgParams {
                    n,
                    k,
                    within,
                    between: *values[1 - i].0,
                    classes: n / h.len(),
                    class_size: h.len(),
                });
            }
        }
    }

    Ok(DezaReport {
        n,
        k,
        is_deza,
        is_srg,
        is_strictly_deza,
        is_ddg: ddg_params.is_some(),
        b,
        a,
        spectrum,
        ddg_params,
        diameter: diam,
    })
}

/// Common-neighbour counts of every pair, by adjacency scan; used to confirm
/// the subgroup criterion for divisible designs.
pub fn ddg_by_counting(n: usize, s: &GroupSubset, class_size: usize) -> Option<(u64, u64)> {
    let classes = n / class_size;
    let common = |u: usize, v: usize| {
        (0..n)
            .filter(|&w| s.contains((w + n - u) % n) && s.contains((w + n - v) % n))
            .count() as u64
    };
    let (mut within, mut between) = (None, None);
    for u in 0..n {
        for v in u + 1..n {
            let slot = if u % classes == v % classes {
                &mut within
            } else {
                &mut between
            };
            let c = common(u, v);
            match slot {
                None => *slot = Some(c),
                Some(x) if *x != c => return None,
                _ => {}
            }
        }
    }
    Some((within.unwrap_or(0), between.unwrap_or(0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> GroupSubset {
        GroupSubset::new(n, xs.iter().copied()).unwrap()
    }

    #[test]
    fn sporadic_eight() {
        let r = deza_report(8, &set(8, &[1, 2, 6, 7])).unwrap();
        assert_eq!(r.params().unwrap().to_string(), "(8,4,2,1)");
        assert!(r.is_strictly_deza);
        assert!(!r.is_ddg);
    }

    #[test]
    fn paley_five_lex_k2() {
        let r = deza_report(10, &set(10, &[1, 4, 5, 6, 9])).unwrap();
        assert_eq!(r.params().unwrap().to_string(), "(10,5,4,2)");
        assert!(r.is_strictly_deza);
        assert!(r.is_ddg);
        let d = r.ddg_params.unwrap();
        assert_eq!((d.classes, d.class_size), (5, 2));
        assert_eq!(ddg_by_counting(10, &set(10, &[1, 4, 5, 6, 9]), 2), Some((d.within, d.between)));
    }

    #[test]
    fn pentagon_is_srg() {
        let r = deza_report(5, &set(5, &[1, 4])).unwrap();
        assert!(r.is_deza && r.is_srg && !r.is_strictly_deza);
        assert_eq!((r.b, r.a), (Some(1), Some(0)));
    }

    #[test]
    fn degenerate_cases() {
        let empty = deza_report(6, &GroupSubset::empty(6)).unwrap();
        assert!(empty.is_deza && empty.is_srg && !empty.is_strictly_deza);
        let full = deza_report(6, &set(6, &[1, 2, 3, 4, 5])).unwrap();
        assert_eq!((full.b, full.a), (Some(4), Some(4)));
        assert!(!full.is_ddg);
        assert!(deza_report(6, &set(6, &[1])).is_err());
        assert!(deza_report(6, &set(6, &[0, 1, 5])).is_err());
    }

    #[test]
    fn diameters() {
        assert_eq!(diameter(6, &set(6, &[1, 2, 3, 4, 5])), Diameter::Finite(1));
        assert_eq!(diameter(7, &set(7, &[1, 6])), Diameter::Finite(3));
        assert_eq!(diameter(10, &set(10, &[2, 8])), Diameter::Infinite);
    }

    #[test]
    fn counting_identity() {
        let s = set(12, &[1, 4, 5, 6, 7, 8, 11]);
        let r = deza_report(12, &s).unwrap();
        let total: u64 = r.spectrum.iter().map(|(c, l)| c * l.len() as u64).sum();
        assert_eq!(total, (r.k * r.k - r.k) as u64);
        assert_eq!(r.params().unwrap().to_string(), "(12,7,4,3)");
    }

    #[test]
    fn json_key_order() {
        let r = deza_report(5, &set(5, &[1, 4])).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"n":5,"k":2,"deza":true,"srg":true,"strict":false,"ddg":false,"b":1,"a":0}"#
        );
    }
}
