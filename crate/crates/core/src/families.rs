//! Connection sets for the known circulant Deza families and the product
//! operations they are built from. Everything lives in a single `Z_n`; products
//! of coprime orders go through the CRT.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cyclotomy::{is_prime, perfect_sqrt};
use crate::error::{Error, Result};
use crate::group::{crt_embed, GroupSubset};
use crate::sring::mod_pow;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FamilyLabel {
    G1,
    G2,
    G3,
    G4,
    G5,
    G6,
    G7,
    G8,
    F1,
    F2,
    SP8,
    SP9,
}

impl FamilyLabel {
    pub const ALL: [FamilyLabel; 12] = [
        FamilyLabel::G1,
        FamilyLabel::G2,
        FamilyLabel::G3,
        FamilyLabel::G4,
        FamilyLabel::G5,
        FamilyLabel::G6,
        FamilyLabel::G7,
        FamilyLabel::G8,
        FamilyLabel::F1,
        FamilyLabel::F2,
        FamilyLabel::SP8,
        FamilyLabel::SP9,
    ];

    /// The eight rank-4 families.
    pub const RANK4: [FamilyLabel; 8] = [
        FamilyLabel::G1,
        FamilyLabel::G2,
        FamilyLabel::G3,
        FamilyLabel::G4,
        FamilyLabel::G5,
        FamilyLabel::G6,
        FamilyLabel::G7,
        FamilyLabel::G8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyLabel::G1 => "g1",
            FamilyLabel::G2 => "g2",
            FamilyLabel::G3 => "g3",
            FamilyLabel::G4 => "g4",
            FamilyLabel::G5 => "g5",
            FamilyLabel::G6 => "g6",
            FamilyLabel::G7 => "g7",
            FamilyLabel::G8 => "g8",
            FamilyLabel::F1 => "f1",
            FamilyLabel::F2 => "f2",
            FamilyLabel::SP8 => "sp8",
            FamilyLabel::SP9 => "sp9",
        }
    }
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyLabel::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown family label {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilySpec {
    G1 { m: usize },
    G2 { m: usize },
    G3 { m: usize },
    G4 { l: usize, m: usize },
    G5 { l: usize, m: usize },
    G6 { p: usize },
    G7 { p: usize },
    G8 { p: usize },
    F1 { p: usize, q: usize },
    F2 { k: usize },
    SP8,
    SP9,
}

impl FamilySpec {
    pub fn label(&self) -> FamilyLabel {
        match self {
            FamilySpec::G1 { .. } => FamilyLabel::G1,
            FamilySpec::G2 { .. } => FamilyLabel::G2,
            FamilySpec::G3 { .. } => FamilyLabel::G3,
            FamilySpec::G4 { .. } => FamilyLabel::G4,
            FamilySpec::G5 { .. } => FamilyLabel::G5,
            FamilySpec::G6 { .. } => FamilyLabel::G6,
            FamilySpec::G7 { .. } => FamilyLabel::G7,
            FamilySpec::G8 { .. } => FamilyLabel::G8,
            FamilySpec::F1 { .. } => FamilyLabel::F1,
            FamilySpec::F2 { .. } => FamilyLabel::F2,
            FamilySpec::SP8 => FamilyLabel::SP8,
            FamilySpec::SP9 => FamilyLabel::SP9,
        }
    }

    pub fn order(&self) -> usize {
        match *self {
            FamilySpec::G1 { m } => 4 * m,
            FamilySpec::G2 { m } => 2 * m,
            FamilySpec::G3 { m } => 5 * m,
            FamilySpec::G4 { l, m } | FamilySpec::G5 { l, m } => 2 * l * m,
            FamilySpec::G6 { p } => 2 * p,
            FamilySpec::G7 { p } | FamilySpec::G8 { p } => p,
            FamilySpec::F1 { p, q } => p * q,
            FamilySpec::F2 { k } => 4 * k,
            FamilySpec::SP8 => 8,
            FamilySpec::SP9 => 9,
        }
    }

    /// The WL-rank claimed for the family.
    pub fn expected_rank(&self) -> usize {
        match self.label() {
            FamilyLabel::F1 | FamilyLabel::SP8 | FamilyLabel::SP9 => 5,
            FamilyLabel::F2 => 6,
            _ => 4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::InvalidFamily(format!("{self}: {what}")));
        match *self {
            FamilySpec::G1 { m } | FamilySpec::G2 { m } => {
                if m <= 1 || m % 2 == 0 {
                    return bad("m must be odd and > 1".into());
                }
            }
            FamilySpec::G3 { m } => {
                if m <= 1 {
                    return bad("m must be > 1".into());
                }
            }
            FamilySpec::G4 { l, m } | FamilySpec::G5 { l, m } => {
                if l <= 1 || m <= 1 {
                    return bad("l and m must both be > 1".into());
                }
            }
            FamilySpec::G6 { p } => {
                if !is_prime(p) || p % 4 != 1 {
                    return bad("p must be a prime ≡ 1 mod 4".into());
                }
            }
            FamilySpec::G7 { p } => {
                if !is_prime(p) || p < 3 || perfect_sqrt((p - 3) as u64).is_none() {
                    return bad("p must be a prime of the form t²+3".into());
                }
            }
            FamilySpec::G8 { p } => {
                if !is_prime(p) || p < 12 || perfect_sqrt((p - 12) as u64).is_none() {
                    return bad("p must be a prime of the form t²+12".into());
                }
            }
            FamilySpec::F1 { p, q } => {
                if !is_prime(p) || !is_prime(q) || q != p + 4 || p % 4 != 3 {
                    return bad("p, q must be primes ≡ 3 mod 4 with q − p = 4".into());
                }
            }
            FamilySpec::F2 { k } => {
                if k < 3 || k % 2 == 0 {
                    return bad("k must be odd and ≥ 3".into());
                }
            }
            FamilySpec::SP8 | FamilySpec::SP9 => {}
        }
        Ok(())
    }

    /// Builds from a label and whichever of `m, l, p, q, k` it needs.
    pub fn from_parts(
        label: FamilyLabel,
        m: Option<usize>,
        l: Option<usize>,
        p: Option<usize>,
        q: Option<usize>,
        k: Option<usize>,
    ) -> Result<Self> {
        let need = |v: Option<usize>, name: &str| {
            v.ok_or_else(|| Error::InvalidFamily(format!("{label} needs --{name}")))
        };
        let spec = match label {
            FamilyLabel::G1 => FamilySpec::G1 { m: need(m, "m")? },
            FamilyLabel::G2 => FamilySpec::G2 { m: need(m, "m")? },
            FamilyLabel::G3 => FamilySpec::G3 { m: need(m, "m")? },
            FamilyLabel::G4 => FamilySpec::G4 {
                l: need(l, "l")?,
                m: need(m, "m")?,
            },
            FamilyLabel::G5 => FamilySpec::G5 {
                l: need(l, "l")?,
                m: need(m, "m")?,
            },
            FamilyLabel::G6 => FamilySpec::G6 { p: need(p, "p")? },
            FamilyLabel::G7 => FamilySpec::G7 { p: need(p, "p")? },
            FamilyLabel::G8 => FamilySpec::G8 { p: need(p, "p")? },
            FamilyLabel::F1 => FamilySpec::F1 {
                p: need(p, "p")?,
                q: need(q, "q")?,
            },
            FamilyLabel::F2 => FamilySpec::F2 { k: need(k, "k")? },
            FamilyLabel::SP8 => FamilySpec::SP8,
            FamilyLabel::SP9 => FamilySpec::SP9,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())?;
        match *self {
            FamilySpec::G1 { m } | FamilySpec::G2 { m } | FamilySpec::G3 { m } => {
                write!(f, "(m={m})")
            }
            FamilySpec::G4 { l, m } | FamilySpec::G5 { l, m } => write!(f, "(l={l},m={m})"),
            FamilySpec::G6 { p } | FamilySpec::G7 { p } | FamilySpec::G8 { p } => {
                write!(f, "(p={p})")
            }
            FamilySpec::F1 { p, q } => write!(f, "(p={p},q={q})"),
            FamilySpec::F2 { k } => write!(f, "(k={k})"),
            FamilySpec::SP8 | FamilySpec::SP9 => Ok(()),
        }
    }
}

fn complete(n: usize) -> GroupSubset {
    GroupSubset::from_fn(n, |x| x != 0)
}

fn pairs(a: &GroupSubset, b: &GroupSubset) -> Vec<(usize, usize)> {
    a.members()
        .iter()
        .flat_map(|&x| b.members().iter().map(move |&y| (x, y)))
        .collect()
}

/// `Cay(Z_{n1}, S1) × Cay(Z_{n2}, S2)` (adjacent in both coordinates).
pub fn tensor_connection(
    n1: usize,
    s1: &GroupSubset,
    n2: usize,
    s2: &GroupSubset,
) -> Result<(usize, GroupSubset)> {
    let n = n1 * n2;
    Ok((n, crt_embed(n, n1, n2, &pairs(s1, s2))?))
}

/// Cartesian product: adjacent in one coordinate, equal in the other.
pub fn cartesian_connection(
    n1: usize,
    s1: &GroupSubset,
    n2: usize,
    s2: &GroupSubset,
) -> Result<(usize, GroupSubset)> {
    let n = n1 * n2;
    let mut pts: Vec<(usize, usize)> = s1.members().iter().map(|&x| (x, 0)).collect();
    pts.extend(s2.members().iter().map(|&y| (0, y)));
    Ok((n, crt_embed(n, n1, n2, &pts)?))
}

/// `Cay(Z_{n_outer}, T)[Cay(Z_{n_inner}, S)]` with the inner copy sitting on
/// the subgroup of order `n_inner` (the multiples of `n_outer`).
pub fn lex_connection(
    n_outer: usize,
    t_outer: &GroupSubset,
    n_inner: usize,
    s_inner: &GroupSubset,
) -> Result<(usize, GroupSubset)> {
    if t_outer.order() != n_outer || s_inner.order() != n_inner {
        return Err(Error::OrderMismatch {
            left: n_outer * n_inner,
            right: t_outer.order() * s_inner.order(),
        });
    }
    let n = n_outer * n_inner;
    let lifted = (0..n).filter(|g| t_outer.contains(g % n_outer));
    let inner = s_inner.members().iter().map(|&s| s * n_outer);
    Ok((n, GroupSubset::new(n, lifted.chain(inner))?))
}

pub fn complement_connection(n: usize, s: &GroupSubset) -> Result<GroupSubset> {
    if s.contains(0) {
        return Err(Error::Precondition("connection set contains 0".into()));
    }
    if s.order() != n {
        return Err(Error::OrderMismatch {
            left: n,
            right: s.order(),
        });
    }
    Ok(GroupSubset::from_fn(n, |x| x != 0 && !s.contains(x)))
}

/// Nonzero squares mod `p`.
fn residues(p: usize) -> GroupSubset {
    GroupSubset::new(p, (1..p).map(|x| x * x % p)).expect("in range")
}

/// Nonzero cubes mod `p`: the index-3 class containing 1.
pub fn cubic_residues(p: usize) -> Result<GroupSubset> {
    if !is_prime(p) || p % 3 != 1 {
        return Err(Error::Precondition(format!("{p} is not a prime ≡ 1 mod 3")));
    }
    GroupSubset::new(p, (1..p).map(|x| mod_pow(x, 3, p)))
}

fn legendre(x: usize, p: usize) -> i32 {
    match x % p {
        0 => 0,
        r if mod_pow(r, (p - 1) / 2, p) == 1 => 1,
        _ => -1,
    }
}

pub fn family_graph(spec: &FamilySpec) -> Result<(usize, GroupSubset)> {
    spec.validate()?;
    let n = spec.order();
    let out = match *spec {
        FamilySpec::G1 { m } => cartesian_connection(4, &complete(4), m, &complete(m))?,
        FamilySpec::G2 { m } => {
            let (n, s) = cartesian_connection(2, &complete(2), m, &complete(m))?;
            (n, complement_connection(n, &s)?)
        }
        FamilySpec::G3 { m } => {
            lex_connection(m, &GroupSubset::empty(m), 5, &GroupSubset::new(5, [1, 4])?)?
        }
        FamilySpec::G4 { l, m } => {
            let kmm = GroupSubset::from_fn(2 * m, |x| x % 2 == 1);
            lex_connection(l, &GroupSubset::empty(l), 2 * m, &kmm)?
        }
        FamilySpec::G5 { l, m } => {
            lex_connection(l, &complete(l), 2 * m, &GroupSubset::new(2 * m, [m])?)?
        }
        FamilySpec::G6 { p } => lex_connection(p, &residues(p), 2, &GroupSubset::new(2, [1])?)?,
        FamilySpec::G7 { p } => (p, cubic_residues(p)?),
        FamilySpec::G8 { p } => (p, complement_connection(p, &cubic_residues(p)?)?),
        FamilySpec::F1 { p, q } => {
            let s = GroupSubset::from_fn(n, |g| {
                (g % p == 0 && g != 0) || legendre(g % p, p) * legendre(g % q, q) == -1
            });
            (n, s)
        }
        FamilySpec::F2 { k } => {
            let s = GroupSubset::from_fn(n, |g| {
                g == n / 2 || (g != 0 && g % 4 == 0) || (g % 2 == 1 && g % k != 0)
            });
            (n, s)
        }
        FamilySpec::SP8 => (8, GroupSubset::new(8, [1, 2, 6, 7])?),
        FamilySpec::SP9 => (9, GroupSubset::new(9, [1, 2, 7, 8])?),
    };
    debug_assert_eq!(out.0, n);
    Ok(out)
}

/// Admissible parameter choices of a family in increasing order of `n`.
pub fn instances(label: FamilyLabel, max_n: usize) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    let mut push = |spec: FamilySpec| {
        if spec.validate().is_ok() && spec.order() <= max_n {
            out.push(spec);
        }
    };
    match label {
        FamilyLabel::G1 => (3..=max_n / 4).for_each(|m| push(FamilySpec::G1 { m })),
        FamilyLabel::G2 => (3..=max_n / 2).for_each(|m| push(FamilySpec::G2 { m })),
        FamilyLabel::G3 => (2..=max_n / 5).for_each(|m| push(FamilySpec::G3 { m })),
        FamilyLabel::G4 | FamilyLabel::G5 => {
            for l in 2..=max_n / 4 {
                for m in 2..=max_n / 4 {
                    push(if label == FamilyLabel::G4 {
                        FamilySpec::G4 { l, m }
                    } else {
                        FamilySpec::G5 { l, m }
                    });
                }
            }
        }
        FamilyLabel::G6 => (5..=max_n / 2).for_each(|p| push(FamilySpec::G6 { p })),
        FamilyLabel::G7 => (7..=max_n).for_each(|p| push(FamilySpec::G7 { p })),
        FamilyLabel::G8 => (13..=max_n).for_each(|p| push(FamilySpec::G8 { p })),
        FamilyLabel::F1 => (3..=max_n).for_each(|p| push(FamilySpec::F1 { p, q: p + 4 })),
        FamilyLabel::F2 => (3..=max_n / 4).for_each(|k| push(FamilySpec::F2 { k })),
        FamilyLabel::SP8 => push(FamilySpec::SP8),
        FamilyLabel::SP9 => push(FamilySpec::SP9),
    }
    out.sort_by_key(|s| (s.order(), *s));
    out
}

/// The `count` smallest admissible instances of a family.
pub fn smallest_instances(label: FamilyLabel, count: usize) -> Vec<FamilySpec> {
    let mut bound = 16;
    loop {
        let found = instances(label, bound);
        if found.len() >= count || bound > 1 << 16 {
            return found.into_iter().take(count).collect();
        }
        bound *= 2;
    }
}

pub fn family_instances_of_order(n: usize, labels: &[FamilyLabel]) -> Vec<FamilySpec> {
    labels
        .iter()
        .flat_map(|&l| instances(l, n))
        .filter(|s| s.order() == n)
        .collect()
}

/// Closed-form `(n, k, b, a)` of a family as printed in its table row; `None`
/// where the values are not given in closed form. The order of `b` and `a`
/// is exactly as printed, which does not always put the larger value first.
pub fn table_params(spec: &FamilySpec) -> Option<(usize, usize, i64, i64)> {
    let n = spec.order();
    let i = |v: usize| v as i64;
    Some(match *spec {
        FamilySpec::G1 { m } => (n, m + 2, i(m) - 2, 2),
        FamilySpec::G2 { m } => (n, m - 1, i(m) - 2, 0),
        FamilySpec::G3 { .. } => (n, 2, 1, 0),
        FamilySpec::G4 { m, .. } => (n, m, i(m), 0),
        FamilySpec::G5 { l, m } => (n, 2 * l * m - 2 * m + 1, i(2 * l * m - 2 * m), i(2 * l * m) - i(4 * m) + 2),
        FamilySpec::G6 { p } => (n, p, i(p) - 1, i((p - 1) / 2)),
        FamilySpec::G7 { .. } | FamilySpec::G8 { .. } => return None,
        FamilySpec::F1 { p, q } => (n, (p * q + 3) / 2, i((p * q + 7) / 4), i((p * q).div_ceil(4))),
        FamilySpec::F2 { k } => (n, 3 * k - 2, 3 * (i(k) - 2), 2 * (i(k) - 1)),
        FamilySpec::SP8 => (8, 4, 2, 1),
        FamilySpec::SP9 => (9, 4, 2, 1),
    })
}

/// Table expectations for the strictly-Deza and divisible-design columns.
pub fn table_flags(label: FamilyLabel) -> (bool, bool) {
    match label {
        FamilyLabel::G1 => (true, true),
        FamilyLabel::G2 => (false, true),
        FamilyLabel::G3 => (false, false),
        FamilyLabel::G4 => (false, true),
        FamilyLabel::G5 => (true, true),
        FamilyLabel::G6 => (true, true),
        FamilyLabel::G7 | FamilyLabel::G8 => (true, false),
        FamilyLabel::F1 => (true, false),
        FamilyLabel::F2 => (true, true),
        FamilyLabel::SP8 | FamilyLabel::SP9 => (true, false),
    }
}

/// Table expectation for the WL-dimension column as `(lower, upper)`.
pub fn table_dimension(label: FamilyLabel) -> (u8, u8) {
    match label {
        FamilyLabel::G6 | FamilyLabel::G7 | FamilyLabel::G8 | FamilyLabel::F1 => (2, 3),
        _ => (2, 2),
    }
}

/// Whether the family's S-ring is asserted to be normal cyclotomic with
/// trivial radical (used only as a flagged hint by the dimension rules).
pub fn asserted_normal_cyclotomic(label: FamilyLabel) -> bool {
    matches!(
        label,
        FamilyLabel::F1 | FamilyLabel::SP8 | FamilyLabel::SP9 | FamilyLabel::G7 | FamilyLabel::G8
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deza::deza_report;

    fn set(n: usize, xs: &[usize]) -> GroupSubset {
        GroupSubset::new(n, xs.iter().copied()).unwrap()
    }

    fn params(spec: FamilySpec) -> String {
        let (n, s) = family_graph(&spec).unwrap();
        deza_report(n, &s).unwrap().params().unwrap().to_string()
    }

    #[test]
    fn tensor_examples() {
        let (n, s) = tensor_connection(2, &set(2, &[1]), 3, &set(3, &[1, 2])).unwrap();
        assert_eq!((n, s.members()), (6, &[1, 5][..]));
        let (_, s) = tensor_connection(4, &complete(4), 3, &complete(3)).unwrap();
        assert_eq!(s.len(), 6);
        let (_, e) = tensor_connection(4, &complete(4), 3, &GroupSubset::empty(3)).unwrap();
        assert!(e.is_empty());
        assert!(tensor_connection(4, &complete(4), 6, &complete(6)).is_err());
    }

    #[test]
    fn lex_examples() {
        let (n, s) = lex_connection(5, &set(5, &[1, 4]), 2, &set(2, &[1])).unwrap();
        assert_eq!((n, s.members()), (10, &[1, 4, 5, 6, 9][..]));
        let (_, s) = lex_connection(3, &GroupSubset::empty(3), 5, &set(5, &[1, 4])).unwrap();
        assert_eq!(s.members(), &[3, 12]);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement_connection(4, &GroupSubset::empty(4)).unwrap().members(), &[1, 2, 3]);
        let cubes = cubic_residues(13).unwrap();
        assert_eq!(cubes.members(), &[1, 5, 8, 12]);
        let non = complement_connection(13, &cubes).unwrap();
        assert_eq!(non.len(), 8);
        assert_eq!(complement_connection(13, &non).unwrap(), cubes);
    }

    #[test]
    fn family_parameters() {
        assert_eq!(params(FamilySpec::G1 { m: 3 }), "(12,5,2,1)");
        assert_eq!(params(FamilySpec::G4 { l: 2, m: 2 }), "(8,2,2,0)");
        assert_eq!(family_graph(&FamilySpec::G4 { l: 2, m: 2 }).unwrap().1.members(), &[2, 6]);
        assert_eq!(params(FamilySpec::G6 { p: 5 }), "(10,5,4,2)");
        assert_eq!(params(FamilySpec::G7 { p: 19 }), "(19,6,2,1)");
        assert_eq!(params(FamilySpec::G8 { p: 13 }), "(13,8,5,4)");
        assert_eq!(params(FamilySpec::F2 { k: 3 }), "(12,7,4,3)");
        assert_eq!(params(FamilySpec::F1 { p: 3, q: 7 }), "(21,12,7,6)");
        assert_eq!(params(FamilySpec::SP9), "(9,4,2,1)");
    }

    #[test]
    fn validation() {
        assert!(FamilySpec::G1 { m: 4 }.validate().is_err());
        assert!(FamilySpec::G7 { p: 13 }.validate().is_err());
        assert!(FamilySpec::G8 { p: 13 }.validate().is_ok());
        assert!(FamilySpec::F1 { p: 7, q: 11 }.validate().is_ok());
        assert!(FamilySpec::F1 { p: 5, q: 9 }.validate().is_err());
        let err = family_graph(&FamilySpec::G6 { p: 7 }).unwrap_err();
        assert!(err.to_string().contains("≡ 1 mod 4"));
    }

    #[test]
    fn smallest_three() {
        let got: Vec<String> = FamilyLabel::RANK4
            .iter()
            .flat_map(|&l| smallest_instances(l, 3))
            .map(|s| s.to_string())
            .collect();
        assert_eq!(
            got,
            [
                "g1(m=3)", "g1(m=5)", "g1(m=7)", "g2(m=3)", "g2(m=5)", "g2(m=7)", "g3(m=2)",
                "g3(m=3)", "g3(m=4)", "g4(l=2,m=2)", "g4(l=2,m=3)", "g4(l=3,m=2)",
                "g5(l=2,m=2)", "g5(l=2,m=3)", "g5(l=3,m=2)", "g6(p=5)", "g6(p=13)",
                "g6(p=17)", "g7(p=7)", "g7(p=19)", "g7(p=67)", "g8(p=13)", "g8(p=37)",
                "g8(p=61)"
            ]
        );
        assert_eq!(
            smallest_instances(FamilyLabel::F1, 3),
            vec![
                FamilySpec::F1 { p: 3, q: 7 },
                FamilySpec::F1 { p: 7, q: 11 },
                FamilySpec::F1 { p: 19, q: 23 }
            ]
        );
    }

    #[test]
    fn outputs_are_symmetric() {
        for label in FamilyLabel::ALL {
            for spec in smallest_instances(label, 3) {
                let (n, s) = family_graph(&spec).unwrap();
                assert!(s.is_symmetric() && !s.contains(0), "{spec}");
                assert_eq!(n, spec.order());
            }
        }
    }

    #[test]
    fn labels_parse() {
        assert_eq!("G7".parse::<FamilyLabel>().unwrap(), FamilyLabel::G7);
        assert_eq!("sp8".parse::<FamilyLabel>().unwrap(), FamilyLabel::SP8);
        assert!("g9".parse::<FamilyLabel>().is_err());
        assert_eq!(
            FamilySpec::from_parts(FamilyLabel::G4, Some(3), Some(2), None, None, None).unwrap(),
            FamilySpec::G4 { l: 2, m: 3 }
        );
    }
}
