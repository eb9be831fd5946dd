//! Regenerates the family parameter tables and lists disagreements with the
//! printed values. Disagreements are report content, not errors.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;

use crate::aut::{aut_order_bruteforce, expected_aut_order_family, BRUTEFORCE_LIMIT};
use crate::closure::{wl_closure, Digraph};
use crate::cyclotomy::{cyclotomic_constants_bruteforce, primitive_root};
use crate::deza::{deza_report, DezaParams};
use crate::dimension::dimension_bounds_with_family;
use crate::error::{Error, Result};
use crate::families::{
    family_graph, smallest_instances, table_dimension, table_flags, table_params, FamilyLabel,
    FamilySpec,
};
use crate::par::{map_slice, Exec};
use crate::sring::{schur_wielandt_closure, sring_from_closure};

/// Above this order the closure is taken from the Schur–Wielandt S-ring
/// instead of vertex-level refinement.
pub const DIRECT_CLOSURE_LIMIT: usize = 100;

#[derive(Clone, Debug)]
pub struct TableRow {
    pub spec: FamilySpec,
    pub params: Option<DezaParams>,
    pub strict: bool,
    pub ddg: bool,
    pub rank: usize,
    pub aut: BigUint,
    pub aut_bruteforce: Option<BigUint>,
    pub dim: String,
    pub mismatches: Vec<String>,
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        let params = self.params.map_or("not Deza".to_string(), |p| p.to_string());
        write!(
            f,
            "{}: {params}, SDG={}, DDG={}, rank={}, |Aut|={}",
            self.spec,
            yn(self.strict),
            yn(self.ddg),
            self.rank,
            self.aut
        )?;
        if let Some(b) = &self.aut_bruteforce {
            write!(f, " (counted {b})")?;
        }
        write!(f, ", dim={}", self.dim)?;
        for m in &self.mismatches {
            write!(f, "\n    mismatch: {m}")?;
        }
        Ok(())
    }
}

/// `(n, k, b, a)` for the cube-class families from the cyclotomic constants:
/// the coefficient of `S̲²` on the class `X_k` is `Σ_{i,j} c^k_{ij}` over the
/// classes making up `S`.
pub fn cubic_family_params(spec: &FamilySpec) -> Result<DezaParams> {
    let (p, parts): (usize, &[usize]) = match *spec {
        FamilySpec::G7 { p } => (p, &[1]),
        FamilySpec::G8 { p } => (p, &[2, 3]),
        _ => return Err(Error::Precondition(format!("{spec} is not a cube-class family"))),
    };
    let l = primitive_root(p).ok_or_else(|| Error::Precondition(format!("{p} is not prime")))?;
    let c = cyclotomic_constants_bruteforce(p, 3, l)?;
    let values: BTreeSet<u64> = (1..=3)
        .map(|k| parts.iter().flat_map(|&i| parts.iter().map(move |&j| (i, j))).map(|(i, j)| c.get(i, j, k)).sum())
        .collect();
    if values.len() > 2 {
        return Err(Error::Inconsistent(format!("{spec}: three coefficient values {values:?}")));
    }
    Ok(DezaParams {
        n: p,
        k: parts.len() * (p - 1) / 3,
        b: *values.last().expect("nonempty"),
        a: *values.first().expect("nonempty"),
    })
}

pub fn table_row(spec: &FamilySpec) -> Result<TableRow> {
    let (n, s) = family_graph(spec)?;
    let report = deza_report(n, &s)?;
    let (closure, ring) = if n <= DIRECT_CLOSURE_LIMIT {
        let x = wl_closure(&Digraph::cayley(&s)?);
        let ring = sring_from_closure(&x)?;
        (x, ring)
    } else {
        let ring = schur_wielandt_closure(n, &s)?;
        (ring.cayley_scheme(), ring)
    };
    let dim = dimension_bounds_with_family(&closure, &ring, &report, Some(spec.label()))?;
    let aut = expected_aut_order_family(spec)?;
    let aut_bruteforce = if n <= BRUTEFORCE_LIMIT {
        Some(aut_order_bruteforce(&Digraph::cayley(&s)?)?)
    } else {
        None
    };

    let mut mismatches = Vec::new();
    let params = report.params();
    let expected = match table_params(spec) {
        Some((tn, tk, tb, ta)) => Some((tn, tk, BTreeSet::from([tb, ta]), format!("({tn},{tk},{tb},{ta})"))),
        None if matches!(spec, FamilySpec::G7 { .. } | FamilySpec::G8 { .. }) => {
            let p = cubic_family_params(spec)?;
            Some((p.n, p.k, BTreeSet::from([p.b as i64, p.a as i64]), p.to_string()))
        }
        None => None,
    };
    match (expected, params) {
        (Some((tn, tk, tba, text)), Some(p)) => {
            if (tn, tk, tba) != (p.n, p.k, BTreeSet::from([p.b as i64, p.a as i64])) {
                mismatches.push(format!("parameters {p}, expected {text}"));
            }
        }
        (Some((_, _, _, text)), None) => mismatches.push(format!("not a Deza graph, expected {text}")),
        (None, _) => {}
    }
    let (sdg, ddg) = table_flags(spec.label());
    if sdg != report.is_strictly_deza {
        mismatches.push(format!(
            "strictly Deza is {}, expected {sdg} (diameter {})",
            report.is_strictly_deza, report.diameter
        ));
    }
    if ddg != report.is_ddg {
        mismatches.push(format!("divisible design is {}, expected {ddg}", report.is_ddg));
    }
    if ring.rank() != spec.expected_rank() {
        mismatches.push(format!("WL-rank {}, expected {}", ring.rank(), spec.expected_rank()));
    }
    let (lo, hi) = table_dimension(spec.label());
    if (dim.lower, dim.upper) != (lo, Some(hi)) {
        mismatches.push(format!("dimension {}, expected [{lo},{hi}]", dim.interval()));
    }
    if let Some(b) = &aut_bruteforce {
        if *b != aut {
            mismatches.push(format!("automorphism count {b}, formula {aut}"));
        }
    }
    Ok(TableRow {
        spec: *spec,
        params,
        strict: report.is_strictly_deza,
        ddg: report.is_ddg,
        rank: ring.rank(),
        aut,
        aut_bruteforce,
        dim: dim.interval(),
        mismatches,
    })
}

/// The three smallest instances of every family (one for the sporadic
/// graphs), in label order.
pub fn table_specs() -> Vec<FamilySpec> {
    FamilyLabel::ALL
        .iter()
        .flat_map(|&l| smallest_instances(l, 3))
        .collect()
}

pub fn regenerate_tables(exec: Exec) -> Result<Vec<TableRow>> {
    map_slice(exec, &table_specs(), table_row).into_iter().collect()
}

pub fn render_tables(rows: &[TableRow]) -> String {
    let mut out = String::new();
    let mut label = None;
    for row in rows {
        if label != Some(row.spec.label()) {
            label = Some(row.spec.label());
            out.push_str(&format!("# {}\n", row.spec.label()));
        }
        out.push_str(&format!("{row}\n"));
    }
    let bad = rows.iter().filter(|r| !r.mismatches.is_empty()).count();
    out.push_str(&format!("{} rows, {bad} with mismatches\n", rows.len()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_from_the_examples() {
        let r = table_row(&FamilySpec::G5 { l: 2, m: 2 }).unwrap();
        assert_eq!(r.params.unwrap().to_string(), "(8,5,4,2)");
        assert!(r.strict && r.ddg);
        assert_eq!(r.dim, "{2}");
        assert_eq!(r.aut_bruteforce.as_ref(), Some(&r.aut));

        let r = table_row(&FamilySpec::G8 { p: 13 }).unwrap();
        assert_eq!(r.params.unwrap().to_string(), "(13,8,5,4)");
        assert!(r.strict && !r.ddg);
        assert_eq!(r.dim, "{2,3}");
        assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);

        let r = table_row(&FamilySpec::F1 { p: 3, q: 7 }).unwrap();
        assert_eq!(r.params.unwrap().to_string(), "(21,12,7,6)");
        assert!(!r.ddg);
        assert_eq!(r.dim, "{2,3}");
    }

    #[test]
    fn cubic_params_agree_with_the_group_ring() {
        for p in [7, 13, 19, 31, 37, 43] {
            for spec in [FamilySpec::G7 { p }, FamilySpec::G8 { p }] {
                if spec.validate().is_err() {
                    continue;
                }
                let (n, s) = family_graph(&spec).unwrap();
                assert_eq!(deza_report(n, &s).unwrap().params(), Some(cubic_family_params(&spec).unwrap()), "{spec}");
            }
        }
    }
}
