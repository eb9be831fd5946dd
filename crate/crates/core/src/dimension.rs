//! Rule-based WL-dimension bounds.
//!
//! Every bound comes with the premises that justified it; [`DimBounds::replay`]
//! re-checks them against the inputs. Nothing beyond the rules is guessed: if
//! no rule certifies an upper bound it is reported as unknown.

use std::fmt;

use serde::Serialize;

use crate::closure::CoherentConfiguration;
use crate::deza::DezaReport;
use crate::error::{Error, Result};
use crate::families::FamilyLabel;
use crate::sring::{classify_rank4, Rank4Form, SchurRing};

/// Rings over groups of at most this order are all separable.
pub const SEPARABLE_ORDER: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    RegularNotSrg,
    StronglyRegular,
    SeparableBase,
    SeparableComposition,
    NormalCyclotomic,
    PaleyLex,
    NoUpperRule,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::RegularNotSrg => "regular-non-srg",
            Rule::StronglyRegular => "strongly-regular",
            Rule::SeparableBase => "separable-base",
            Rule::SeparableComposition => "separable-composition",
            Rule::NormalCyclotomic => "normal-cyclotomic",
            Rule::PaleyLex => "paley-lex",
            Rule::NoUpperRule => "no-upper-rule",
        }
    }
}

/// A structural fact about the S-ring (or a section of it) that a rule used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "fact")]
pub enum Premise {
    StronglyRegular { srg: bool },
    SmallOrder { n: usize },
    Trivial { n: usize },
    Discrete { n: usize },
    /// `A = A_H ⊗ A_V`, with certificates for both factors.
    Tensor {
        h: usize,
        v: usize,
        left: Box<Premise>,
        right: Box<Premise>,
    },
    /// `A = A_L ≀ A_{G/L}`, with certificates for both factors.
    Wreath {
        l: usize,
        bottom: Box<Premise>,
        top: Box<Premise>,
    },
    Shape { form: Rank4Form },
    /// Cyclotomic with trivial radical; normality from prime order or, when
    /// `family` is set, asserted for that family rather than checked.
    CyclotomicTrivialRadical {
        n: usize,
        multiplier_order: usize,
        prime_order: bool,
        family: Option<FamilyLabel>,
    },
    None,
}

impl fmt::Display for Premise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Premise::StronglyRegular { srg } => {
                write!(f, "{}", if *srg { "strongly regular" } else { "regular, not strongly regular" })
            }
            Premise::SmallOrder { n } => write!(f, "order {n} ≤ {SEPARABLE_ORDER}"),
            Premise::Trivial { n } => write!(f, "rank 2 over Z_{n}"),
            Premise::Discrete { n } => write!(f, "group ring of Z_{n}"),
            Premise::Tensor { h, v, left, right } => {
                write!(f, "tensor over |H|={h}, |V|={v} [{left}; {right}]")
            }
            Premise::Wreath { l, bottom, top } => write!(f, "wreath over |L|={l} [{bottom}; {top}]"),
            Premise::Shape { form } => write!(f, "rank-4 shape {form}"),
            Premise::CyclotomicTrivialRadical {
                n,
                multiplier_order,
                prime_order,
                family,
            } => {
                write!(f, "cyclotomic over Z_{n} with |K|={multiplier_order}, trivial radical")?;
                if *prime_order {
                    write!(f, ", prime order")
                } else if let Some(label) = family {
                    write!(f, ", normality asserted for family {label} (assumed, not verified)")
                } else {
                    Ok(())
                }
            }
            Premise::None => f.write_str("no rule applies"),
        }
    }
}

impl Premise {
    /// Re-checks the fact against a ring (and the report for the regularity facts).
    pub fn holds(&self, ring: &SchurRing, report: &DezaReport) -> bool {
        let n = ring.order();
        match self {
            Premise::StronglyRegular { srg } => report.is_srg == *srg,
            Premise::SmallOrder { n: m } => *m == n && n <= SEPARABLE_ORDER,
            Premise::Trivial { n: m } => *m == n && ring.rank() <= 2,
            Premise::Discrete { n: m } => *m == n && ring.rank() == n,
            Premise::Tensor { h, v, left, right } => {
                ring.tensor_splittings().contains(&(*h, *v))
                    && ring.restrict(*h).is_ok_and(|a| left.holds(&a, report))
                    && ring.restrict(*v).is_ok_and(|a| right.holds(&a, report))
            }
            Premise::Wreath { l, bottom, top } => {
                ring.generalized_wreath_sections().contains(&(*l, *l))
                    && ring.restrict(*l).is_ok_and(|a| bottom.holds(&a, report))
                    && ring.quotient(*l).is_ok_and(|a| top.holds(&a, report))
            }
            Premise::Shape { form } => classify_rank4(ring).is_ok_and(|f| f == *form),
            Premise::CyclotomicTrivialRadical {
                n: m,
                multiplier_order,
                prime_order,
                family,
            } => {
                *m == n
                    && ring.ring_radical().len() == 1
                    && ring
                        .recognize_cyclotomic()
                        .is_some_and(|k| k.len() == *multiplier_order)
                    && (if *prime_order {
                        crate::cyclotomy::is_prime(n)
                    } else {
                        family.is_some_and(crate::families::asserted_normal_cyclotomic)
                    })
            }
            Premise::None => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub rule: Rule,
    pub premise: Premise,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule.name(), self.premise)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimBounds {
    pub lower: u8,
    pub upper: Option<u8>,
    pub trace: Vec<TraceEntry>,
}

impl DimBounds {
    pub fn render_trace(&self) -> String {
        self.trace.iter().map(|t| format!("{t}\n")).collect()
    }

    /// `{2}`, `{2,3}`, `[1,unknown]`, …
    pub fn interval(&self) -> String {
        match self.upper {
            Some(u) if u == self.lower => format!("{{{u}}}"),
            Some(u) => {
                let vals: Vec<String> = (self.lower..=u).map(|v| v.to_string()).collect();
                format!("{{{}}}", vals.join(","))
            }
            None => format!("[{},unknown]", self.lower),
        }
    }

    pub fn replay(&self, ring: &SchurRing, report: &DezaReport) -> Result<()> {
        for entry in &self.trace {
            if !entry.premise.holds(ring, report) {
                return Err(Error::Inconsistent(format!("premise no longer holds: {entry}")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for DimBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.interval())
    }
}

/// Certificate that every algebraic isomorphism of the ring is induced,
/// from the small-order base and tensor / wreath decompositions.
pub fn separability_certificate(ring: &SchurRing) -> Option<Premise> {
    let n = ring.order();
    if ring.rank() <= 2 {
        return Some(Premise::Trivial { n });
    }
    if ring.rank() == n {
        return Some(Premise::Discrete { n });
    }
    if n <= SEPARABLE_ORDER {
        return Some(Premise::SmallOrder { n });
    }
    for (h, v) in ring.tensor_splittings() {
        let left = ring.restrict(h).ok().and_then(|a| separability_certificate(&a));
        let right = ring.restrict(v).ok().and_then(|a| separability_certificate(&a));
        if let (Some(left), Some(right)) = (left, right) {
            return Some(Premise::Tensor {
                h,
                v,
                left: Box::new(left),
                right: Box::new(right),
            });
        }
    }
    for (l, u) in ring.generalized_wreath_sections() {
        if l != u {
            continue;
        }
        let bottom = ring.restrict(l).ok().and_then(|a| separability_certificate(&a));
        let top = ring.quotient(l).ok().and_then(|a| separability_certificate(&a));
        if let (Some(bottom), Some(top)) = (bottom, top) {
            return Some(Premise::Wreath {
                l,
                bottom: Box::new(bottom),
                top: Box::new(top),
            });
        }
    }
    None
}

pub fn dimension_bounds(
    closure: &CoherentConfiguration,
    ring: &SchurRing,
    report: &DezaReport,
) -> Result<DimBounds> {
    dimension_bounds_with_family(closure, ring, report, None)
}

/// As [`dimension_bounds`], additionally accepting the family the graph is
/// known to belong to; the family only feeds the flagged normality rule.
pub fn dimension_bounds_with_family(
    closure: &CoherentConfiguration,
    ring: &SchurRing,
    report: &DezaReport,
    family: Option<FamilyLabel>,
) -> Result<DimBounds> {
    let n = ring.order();
    if closure.vertex_count() != n || report.n != n {
        return Err(Error::Precondition(format!(
            "inputs disagree on the order: closure {}, ring {n}, report {}",
            closure.vertex_count(),
            report.n
        )));
    }
    if closure.rank() != ring.rank() {
        return Err(Error::Precondition(format!(
            "closure rank {} differs from S-ring rank {}",
            closure.rank(),
            ring.rank()
        )));
    }

    let mut trace = Vec::new();
    let lower = if report.is_srg {
        trace.push(TraceEntry {
            rule: Rule::StronglyRegular,
            premise: Premise::StronglyRegular { srg: true },
        });
        1
    } else {
        trace.push(TraceEntry {
            rule: Rule::RegularNotSrg,
            premise: Premise::StronglyRegular { srg: false },
        });
        2
    };

    let upper = upper_bound(ring, family, &mut trace);
    Ok(DimBounds {
        lower,
        upper,
        trace,
    })
}

fn upper_bound(ring: &SchurRing, family: Option<FamilyLabel>, trace: &mut Vec<TraceEntry>) -> Option<u8> {
    let n = ring.order();
    if ring.rank() == 4 {
        if let Ok(form) = classify_rank4(ring) {
            match form {
                Rank4Form::WreathCycTop { l: 2, .. } => {
                    trace.push(TraceEntry {
                        rule: Rule::PaleyLex,
                        premise: Premise::Shape { form },
                    });
                    return Some(3);
                }
                Rank4Form::PrimeCubicCyclotomic { multiplier_order, .. } => {
                    trace.push(TraceEntry {
                        rule: Rule::NormalCyclotomic,
                        premise: Premise::Shape { form },
                    });
                    trace.push(TraceEntry {
                        rule: Rule::NormalCyclotomic,
                        premise: Premise::CyclotomicTrivialRadical {
                            n,
                            multiplier_order,
                            prime_order: true,
                            family: None,
                        },
                    });
                    return Some(3);
                }
                _ => {}
            }
        }
    }

    if let Some(cert) = separability_certificate(ring) {
        let rule = match cert {
            Premise::Tensor { .. } | Premise::Wreath { .. } => Rule::SeparableComposition,
            _ => Rule::SeparableBase,
        };
        trace.push(TraceEntry { rule, premise: cert });
        return Some(2);
    }

    if ring.ring_radical().len() == 1 {
        if let Some(k) = ring.recognize_cyclotomic() {
            let prime_order = crate::cyclotomy::is_prime(n);
            let family = family.filter(|&l| crate::families::asserted_normal_cyclotomic(l));
            if prime_order || family.is_some() {
                trace.push(TraceEntry {
                    rule: Rule::NormalCyclotomic,
                    premise: Premise::CyclotomicTrivialRadical {
                        n,
                        multiplier_order: k.len(),
                        prime_order,
                        family: if prime_order { None } else { family },
                    },
                });
                return Some(3);
            }
        }
    }

    trace.push(TraceEntry {
        rule: Rule::NoUpperRule,
        premise: Premise::None,
    });
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::{wl_closure, Digraph};
    use crate::deza::deza_report;
    use crate::families::{family_graph, FamilySpec};
    use crate::sring::sring_from_closure;

    fn bounds(spec: FamilySpec) -> DimBounds {
        let (n, s) = family_graph(&spec).unwrap();
        let x = wl_closure(&Digraph::cayley(&s).unwrap());
        let ring = sring_from_closure(&x).unwrap();
        let report = deza_report(n, &s).unwrap();
        let b = dimension_bounds_with_family(&x, &ring, &report, Some(spec.label())).unwrap();
        b.replay(&ring, &report).unwrap();
        b
    }

    #[test]
    fn family_examples() {
        assert_eq!(bounds(FamilySpec::G1 { m: 3 }).interval(), "{2}");
        assert_eq!(bounds(FamilySpec::G6 { p: 5 }).interval(), "{2,3}");
        assert_eq!(bounds(FamilySpec::F2 { k: 3 }).interval(), "{2}");
        let sp8 = bounds(FamilySpec::SP8);
        assert_eq!(sp8.interval(), "{2}");
        assert_eq!(sp8.trace[1].rule, Rule::SeparableBase);
        assert_eq!(bounds(FamilySpec::G8 { p: 13 }).interval(), "{2,3}");
        assert_eq!(bounds(FamilySpec::F2 { k: 5 }).interval(), "{2}");
        let f1 = bounds(FamilySpec::F1 { p: 3, q: 7 });
        assert_eq!(f1.interval(), "{2,3}");
        assert!(f1.render_trace().contains("assumed, not verified"));
    }

    #[test]
    fn srg_gets_lower_one() {
        let s = crate::group::GroupSubset::new(13, [1, 3, 4, 9, 10, 12]).unwrap();
        let x = wl_closure(&Digraph::cayley(&s).unwrap());
        let ring = sring_from_closure(&x).unwrap();
        let b = dimension_bounds(&x, &ring, &deza_report(13, &s).unwrap()).unwrap();
        assert_eq!(b.lower, 1);
        assert_eq!(b.render_trace().lines().next().unwrap(), "strongly-regular: strongly regular");
    }

    #[test]
    fn mismatched_inputs() {
        let s = crate::group::GroupSubset::new(5, [1, 4]).unwrap();
        let x = wl_closure(&Digraph::cayley(&s).unwrap());
        let ring = sring_from_closure(&x).unwrap();
        let other = deza_report(6, &crate::group::GroupSubset::new(6, [1, 5]).unwrap()).unwrap();
        assert!(dimension_bounds(&x, &ring, &other).is_err());
    }
}
