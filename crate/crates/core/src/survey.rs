//! Exhaustive survey of symmetric circulants with a Deza prefilter.
//!
//! Connection sets are unions of the pair classes `{i, -i}`, enumerated by
//! class bitmask. Each order is processed as: popcount Deza prefilter over
//! all masks (parallel) → multiplier-canonical representatives → canonical
//! form dedupe (keeps the first class member in enumeration order) → full
//! analysis of each class (parallel). Output order never depends on the
//! scheduling.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::canon::{canonical_form, CanonicalForm, CANON_LIMIT};
use crate::closure::{intersection_numbers, wl_closure, CoherentConfiguration, Digraph};
use crate::deza::{deza_report, DezaReport};
use crate::dimension::{dimension_bounds_with_family, DimBounds};
use crate::error::{Error, Result};
use crate::families::{family_graph, family_instances_of_order, FamilyLabel, FamilySpec};
use crate::group::{CyclicGroup, GroupSubset};
use crate::par::{map_range, map_slice, Exec};
use crate::sring::{
    check_subgroup_chain_identity, rank3_matches, rank4_matches, sring_from_closure, Rank3Form,
    Rank4Form, SchurRing,
};

/// Largest order surveyed without `force`.
pub const SURVEY_LIMIT: usize = CANON_LIMIT;
/// Connection sets are held as `u64` bitmasks.
pub const HARD_LIMIT: usize = 64;

fn pair_classes(n: usize) -> Vec<u64> {
    (1..=n / 2)
        .map(|i| (1u64 << i) | (1u64 << (n - i)))
        .collect()
}

fn mask_to_bits(classes: &[u64], mask: u64) -> u64 {
    let mut bits = 0;
    let mut m = mask;
    while m != 0 {
        bits |= classes[m.trailing_zeros() as usize];
        m &= m - 1;
    }
    bits
}

fn bits_to_subset(n: usize, bits: u64) -> GroupSubset {
    GroupSubset::from_fn(n, |x| bits >> x & 1 == 1)
}

/// `S + g` as a bitmask.
fn rotate(bits: u64, g: usize, n: usize) -> u64 {
    if g == 0 {
        return bits;
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    ((bits << g) | (bits >> (n - g))) & full
}

/// `|S ∩ (S+g)|` takes at most two values on `g ≠ 0`. Symmetric `S` only, so
/// `g ≤ n/2` suffices.
pub fn is_deza_bits(n: usize, bits: u64) -> bool {
    let (mut first, mut second) = (None, None);
    for g in 1..=n / 2 {
        let c = (bits & rotate(bits, g, n)).count_ones();
        match (first, second) {
            (None, _) => first = Some(c),
            (Some(a), _) if a == c => {}
            (_, None) => second = Some(c),
            (_, Some(b)) if b == c => {}
            _ => return false,
        }
    }
    true
}

/// Lexicographically least of `uS` over the units `u`.
pub fn is_multiplier_canonical(s: &GroupSubset, units: &[usize]) -> bool {
    units.iter().all(|&u| s.scale(u).members() >= s.members())
}

fn check_order(n: usize, force: bool) -> Result<()> {
    if n < 2 {
        return Err(Error::Precondition(format!("order {n} is below 2")));
    }
    if n > HARD_LIMIT {
        return Err(Error::SizeGuard {
            what: "survey order",
            size: n,
            limit: HARD_LIMIT,
        });
    }
    if n > SURVEY_LIMIT && !force {
        return Err(Error::SizeGuard {
            what: "survey order (pass force to override)",
            size: n,
            limit: SURVEY_LIMIT,
        });
    }
    Ok(())
}

/// Every inverse-closed `S ⊆ Z_n∖{0}`, in pair-class bitmask order;
/// with `reduce`, only the multiplier-canonical representatives.
pub fn enumerate_symmetric_sets(n: usize, reduce: bool) -> Result<Vec<GroupSubset>> {
    check_order(n, true)?;
    let classes = pair_classes(n);
    if classes.len() > 24 {
        return Err(Error::SizeGuard {
            what: "pair classes for a materialised enumeration",
            size: classes.len(),
            limit: 24,
        });
    }
    let units = CyclicGroup::new(n)?.units();
    Ok((0..1u64 << classes.len())
        .map(|mask| bits_to_subset(n, mask_to_bits(&classes, mask)))
        .filter(|s| !reduce || is_multiplier_canonical(s, &units))
        .collect())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Filters {
    pub strict: bool,
    pub rank: Option<usize>,
}

impl Filters {
    pub fn is_empty(&self) -> bool {
        !self.strict && self.rank.is_none()
    }

    fn keep(&self, a: &Analysis) -> bool {
        (!self.strict || a.report.is_strictly_deza) && self.rank.is_none_or(|r| a.ring.rank() == r)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SurveyConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub filters: Filters,
    pub exec: Exec,
    pub multiplier_reduction: bool,
    pub force: bool,
}

impl SurveyConfig {
    pub fn new(n_min: usize, n_max: usize) -> Self {
        Self {
            n_min,
            n_max,
            filters: Filters::default(),
            exec: Exec::Parallel,
            multiplier_reduction: true,
            force: false,
        }
    }
}

/// One isomorphism class of circulant Deza graphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchRecord {
    pub n: usize,
    pub set: String,
    pub k: usize,
    pub b: u64,
    pub a: u64,
    pub wl_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank4_case: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matched_family: Option<FamilySpec>,
    pub dim: String,
    pub strict: bool,
    pub srg: bool,
    pub ddg: bool,
    #[serde(skip)]
    pub form: Option<CanonicalForm>,
}

impl SearchRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain record")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub n: usize,
    pub set: String,
    pub kind: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.kind, self.set, self.detail)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OrderStats {
    pub n: usize,
    pub raw: u64,
    pub deza: u64,
    pub representatives: u64,
    pub classes: u64,
}

/// How many structural checks ran; all of them passed unless a violation
/// is listed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckCounts {
    pub closures: u64,
    pub tensors: u64,
    pub subgroup_pairs: u64,
}

#[derive(Clone, Debug, Default)]
pub struct SurveyOutput {
    pub records: Vec<SearchRecord>,
    pub violations: Vec<Violation>,
    pub stats: Vec<OrderStats>,
    pub checks: CheckCounts,
}

impl SurveyOutput {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_jsonl(&self) -> String {
        self.records.iter().map(|r| r.to_json() + "\n").collect()
    }
}

/// Full single-graph analysis; every structural identity is checked on the
/// way and a failure is returned as an error.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub set: GroupSubset,
    pub report: DezaReport,
    pub closure: CoherentConfiguration,
    pub ring: SchurRing,
    pub rank4: Vec<Rank4Form>,
    pub rank3: Vec<Rank3Form>,
    pub dim: DimBounds,
    pub family: Option<FamilySpec>,
}

pub fn analyze(n: usize, s: &GroupSubset, family: Option<FamilySpec>) -> Result<Analysis> {
    let report = deza_report(n, s)?;
    let closure = wl_closure(&Digraph::cayley(s)?);
    closure.verify_axioms()?;
    let ring = sring_from_closure(&closure)?;
    let constants = ring.structure_constants()?;
    constants.check_triple_identity()?;
    constants.check_against_closure(&ring, &closure, &intersection_numbers(&closure)?)?;
    let rank4 = rank4_matches(&ring);
    if ring.rank() == 4 && rank4.len() != 1 {
        return Err(Error::Classification(format!(
            "rank-4 ring matches {} shapes: {}",
            rank4.len(),
            ring.to_text().replace('\n', " | ")
        )));
    }
    let rank3 = rank3_matches(&ring);
    let dim = dimension_bounds_with_family(&closure, &ring, &report, family.map(|f| f.label()))?;
    dim.replay(&ring, &report)?;
    Ok(Analysis {
        set: s.clone(),
        report,
        closure,
        ring,
        rank4,
        rank3,
        dim,
        family,
    })
}

impl Analysis {
    pub fn record(&self, form: Option<CanonicalForm>) -> Option<SearchRecord> {
        let params = self.report.params()?;
        Some(SearchRecord {
            n: params.n,
            set: self.set.to_string(),
            k: params.k,
            b: params.b,
            a: params.a,
            wl_rank: self.ring.rank(),
            rank4_case: self.rank4.first().map(|f| f.case_number()),
            matched_family: self.family,
            dim: self.dim.interval(),
            strict: self.report.is_strictly_deza,
            srg: self.report.is_srg,
            ddg: self.report.is_ddg,
            form,
        })
    }

    /// Single-graph JSON report for the `analyze` command.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "set": self.set.to_string(),
            "deza": self.report,
            "diameter": self.report.diameter.to_string(),
            "wl_rank": self.ring.rank(),
            "basic_sets": self.ring.basic_sets().iter().map(|x| x.members().to_vec()).collect::<Vec<_>>(),
            "rank4": self.rank4.first(),
            "rank3": self.rank3.first().map(|f| f.to_string()),
            "tensor_splittings": self.ring.tensor_splittings(),
            "wreath_sections": self.ring.generalized_wreath_sections(),
            "cyclotomic": self.ring.recognize_cyclotomic(),
            "family": self.family,
            "dim": self.dim.interval(),
            "trace": self.dim.trace.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Theorem-level properties of one analysed class; empty when all hold.
pub fn theorem_violations(a: &Analysis) -> Vec<(&'static str, String)> {
    let mut out = Vec::new();
    let rank = a.ring.rank();
    if rank == 4 && a.report.is_deza && !a.family.is_some_and(|f| FamilyLabel::RANK4.contains(&f.label())) {
        out.push(("rank4-unexplained", "rank-4 Deza circulant outside the rank-4 families".to_string()));
    }
    if let Some(f) = a.family {
        if f.expected_rank() != rank {
            out.push(("family-rank", format!("{f} has WL-rank {rank}, expected {}", f.expected_rank())));
        }
    }
    if a.report.is_strictly_deza {
        if rank > 6 {
            out.push(("strict-rank", format!("strictly Deza with WL-rank {rank}")));
        }
        if a.dim.upper.is_none_or(|u| u > 3) {
            out.push(("strict-dim", format!("strictly Deza with dimension bounds {}", a.dim)));
        }
    }
    out
}

struct FamilyIndex {
    entries: Vec<(FamilySpec, (usize, u64, u64), CanonicalForm)>,
}

impl FamilyIndex {
    fn build(n: usize) -> Result<Self> {
        let mut entries = Vec::new();
        for spec in family_instances_of_order(n, &FamilyLabel::ALL) {
            let (_, s) = family_graph(&spec)?;
            let r = deza_report(n, &s)?;
            if let Some(p) = r.params() {
                entries.push((spec, (p.k, p.b, p.a), canonical_form(n, &s)?));
            }
        }
        Ok(Self { entries })
    }

    fn lookup(&self, report: &DezaReport, form: Option<&CanonicalForm>) -> Option<FamilySpec> {
        let p = report.params()?;
        let form = form?;
        self.entries
            .iter()
            .find(|(_, q, f)| *q == (p.k, p.b, p.a) && f == form)
            .map(|(spec, _, _)| *spec)
    }
}

/// The family instance isomorphic to `Cay(Z_n, S)`, if any.
pub fn match_family(n: usize, s: &GroupSubset) -> Result<Option<FamilySpec>> {
    let form = canonical_form(n, s)?;
    Ok(FamilyIndex::build(n)?.lookup(&deza_report(n, s)?, Some(&form)))
}

fn survey_order(n: usize, cfg: &SurveyConfig, out: &mut SurveyOutput) -> Result<()> {
    let classes = pair_classes(n);
    let total = 1u64 << classes.len();
    let hits: Vec<Option<u64>> = map_range(cfg.exec, total as usize, |mask| {
        let bits = mask_to_bits(&classes, mask as u64);
        is_deza_bits(n, bits).then_some(bits)
    });
    let deza: Vec<u64> = hits.into_iter().flatten().collect();
    let units = CyclicGroup::new(n)?.units();
    let reps: Vec<GroupSubset> = deza
        .iter()
        .map(|&b| bits_to_subset(n, b))
        .filter(|s| !cfg.multiplier_reduction || is_multiplier_canonical(s, &units))
        .collect();

    let with_forms = n <= CANON_LIMIT;
    let forms: Vec<Option<CanonicalForm>> = if with_forms {
        map_slice(cfg.exec, &reps, |s| canonical_form(n, s).ok())
    } else {
        vec![None; reps.len()]
    };
    let mut seen: HashMap<&CanonicalForm, ()> = HashMap::new();
    let mut unique: Vec<(GroupSubset, Option<CanonicalForm>)> = Vec::new();
    for (s, f) in reps.iter().zip(&forms) {
        if let Some(f) = f {
            if seen.insert(f, ()).is_some() {
                continue;
            }
        }
        unique.push((s.clone(), f.clone()));
    }

    let index = if with_forms { FamilyIndex::build(n)? } else { FamilyIndex { entries: vec![] } };
    let analysed: Vec<(GroupSubset, Option<CanonicalForm>, Result<Analysis>)> =
        map_slice(cfg.exec, &unique, |(s, f)| {
            let family = deza_report(n, s).ok().and_then(|r| index.lookup(&r, f.as_ref()));
            (s.clone(), f.clone(), analyze(n, s, family))
        });

    out.stats.push(OrderStats {
        n,
        raw: total,
        deza: deza.len() as u64,
        representatives: reps.len() as u64,
        classes: unique.len() as u64,
    });
    match check_subgroup_chain_identity(n) {
        Ok(pairs) => out.checks.subgroup_pairs += pairs as u64,
        Err(e) => out.violations.push(Violation {
            n,
            set: format!("Z_{n}"),
            kind: "subgroup-chain",
            detail: e.to_string(),
        }),
    }

    let mut found: Vec<&CanonicalForm> = Vec::new();
    for (s, form, result) in &analysed {
        let a = match result {
            Ok(a) => a,
            Err(e) => {
                out.violations.push(Violation {
                    n,
                    set: s.to_string(),
                    kind: "structure",
                    detail: e.to_string(),
                });
                continue;
            }
        };
        out.checks.closures += 1;
        out.checks.tensors += 1;
        for (kind, detail) in theorem_violations(a) {
            out.violations.push(Violation {
                n,
                set: s.to_string(),
                kind,
                detail,
            });
        }
        if let Some(f) = form {
            found.push(f);
        }
        if cfg.filters.keep(a) {
            out.records.extend(a.record(form.clone()));
        }
    }

    // Every family instance of this order must be among the classes found.
    if with_forms {
        for (spec, _, f) in &index.entries {
            if !found.contains(&f) {
                out.violations.push(Violation {
                    n,
                    set: spec.to_string(),
                    kind: "family-missing",
                    detail: format!("{spec} was not produced by the enumeration"),
                });
            }
        }
    }
    Ok(())
}

pub fn run_survey(cfg: &SurveyConfig) -> Result<SurveyOutput> {
    if cfg.n_min > cfg.n_max {
        return Err(Error::Precondition(format!("empty range {}..={}", cfg.n_min, cfg.n_max)));
    }
    for n in [cfg.n_min.max(2), cfg.n_max] {
        check_order(n, cfg.force)?;
    }
    let mut out = SurveyOutput::default();
    for n in cfg.n_min.max(2)..=cfg.n_max {
        survey_order(n, cfg, &mut out)?;
    }
    Ok(out)
}

/// Rank-4 Deza classes against the rank-4 family instances.
#[derive(Clone, Debug)]
pub struct RankFourReport {
    pub max_n: usize,
    pub records: Vec<SearchRecord>,
    pub unexplained: Vec<SearchRecord>,
    pub missing: Vec<FamilySpec>,
    pub violations: Vec<Violation>,
}

impl RankFourReport {
    pub fn holds(&self) -> bool {
        self.unexplained.is_empty() && self.missing.is_empty() && self.violations.is_empty()
    }
}

impl fmt::Display for RankFourReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "rank-4 Deza classes with n <= {}: {} ({} unexplained, {} family instances missing, {} violations)",
            self.max_n,
            self.records.len(),
            self.unexplained.len(),
            self.missing.len(),
            self.violations.len()
        )?;
        let mut per_family: BTreeMap<FamilyLabel, usize> = BTreeMap::new();
        for r in &self.records {
            if let Some(fam) = r.matched_family {
                *per_family.entry(fam.label()).or_default() += 1;
            }
        }
        for (label, count) in per_family {
            writeln!(f, "  {label}: {count}")?;
        }
        for r in &self.unexplained {
            writeln!(f, "  unexplained {} ({},{},{},{})", r.set, r.n, r.k, r.b, r.a)?;
        }
        for m in &self.missing {
            writeln!(f, "  missing {m}")?;
        }
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

pub fn verify_rank_four(max_n: usize, exec: Exec) -> Result<RankFourReport> {
    let mut cfg = SurveyConfig::new(4, max_n);
    cfg.exec = exec;
    cfg.filters.rank = Some(4);
    let out = run_survey(&cfg)?;
    let unexplained: Vec<SearchRecord> = out
        .records
        .iter()
        .filter(|r| !r.matched_family.is_some_and(|f| FamilyLabel::RANK4.contains(&f.label())))
        .cloned()
        .collect();
    let mut missing = Vec::new();
    for n in 4..=max_n {
        for spec in family_instances_of_order(n, &FamilyLabel::RANK4) {
            if !out.records.iter().any(|r| r.matched_family == Some(spec)) {
                missing.push(spec);
            }
        }
    }
    Ok(RankFourReport {
        max_n,
        records: out.records,
        unexplained,
        missing,
        violations: out.violations,
    })
}

/// Strictly Deza classes: WL-rank and dimension bounds.
#[derive(Clone, Debug)]
pub struct StrictReport {
    pub max_n: usize,
    pub records: Vec<SearchRecord>,
    pub rank_histogram: BTreeMap<usize, usize>,
    pub violations: Vec<Violation>,
}

impl StrictReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for StrictReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "strictly Deza classes with n <= {}: {} ({} violations)",
            self.max_n,
            self.records.len(),
            self.violations.len()
        )?;
        for (rank, count) in &self.rank_histogram {
            writeln!(f, "  WL-rank {rank}: {count}")?;
        }
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

pub fn verify_strict(max_n: usize, exec: Exec) -> Result<StrictReport> {
    let mut cfg = SurveyConfig::new(4, max_n);
    cfg.exec = exec;
    cfg.filters.strict = true;
    let out = run_survey(&cfg)?;
    let mut rank_histogram = BTreeMap::new();
    for r in &out.records {
        *rank_histogram.entry(r.wl_rank).or_default() += 1;
    }
    Ok(StrictReport {
        max_n,
        records: out.records,
        rank_histogram,
        violations: out.violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_symmetric_sets(4, false).unwrap().len(), 4);
        assert_eq!(enumerate_symmetric_sets(5, false).unwrap().len(), 4);
        assert_eq!(enumerate_symmetric_sets(12, false).unwrap().len(), 64);
        let n4: Vec<String> = enumerate_symmetric_sets(4, false)
            .unwrap()
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(n4, ["4:", "4: 1,3", "4: 2", "4: 1,2,3"]);
    }

    #[test]
    fn deza_bits_agree_with_report() {
        for n in 4..=14 {
            for s in enumerate_symmetric_sets(n, false).unwrap() {
                let bits = s.members().iter().fold(0u64, |b, &x| b | 1 << x);
                assert_eq!(is_deza_bits(n, bits), deza_report(n, &s).unwrap().is_deza, "{s}");
            }
        }
    }

    #[test]
    fn eight_strict_is_the_sporadic_class() {
        let mut cfg = SurveyConfig::new(8, 8);
        cfg.filters.strict = true;
        let out = run_survey(&cfg).unwrap();
        assert!(out.is_clean(), "{:?}", out.violations);
        // The sporadic class, and G5 with l = m = 2, which is strict as well.
        let got: Vec<_> = out
            .records
            .iter()
            .map(|r| (r.k, r.b, r.a, r.wl_rank, r.matched_family))
            .collect();
        assert_eq!(
            got,
            [
                (4, 2, 1, 5, Some(FamilySpec::SP8)),
                (5, 4, 2, 4, Some(FamilySpec::G5 { l: 2, m: 2 }))
            ]
        );
    }

    #[test]
    fn output_is_independent_of_execution_mode() {
        let mut cfg = SurveyConfig::new(4, 16);
        let par = run_survey(&cfg).unwrap();
        cfg.exec = Exec::Sequential;
        let seq = run_survey(&cfg).unwrap();
        assert_eq!(par.to_jsonl(), seq.to_jsonl());
        assert!(par.is_clean(), "{:?}", par.violations);
    }

    #[test]
    fn reduction_keeps_every_class() {
        for n in 4..=16 {
            let mut cfg = SurveyConfig::new(n, n);
            let reduced = run_survey(&cfg).unwrap();
            cfg.multiplier_reduction = false;
            let raw = run_survey(&cfg).unwrap();
            let forms = |o: &SurveyOutput| {
                let mut v: Vec<CanonicalForm> = o.records.iter().filter_map(|r| r.form.clone()).collect();
                v.sort();
                v
            };
            assert_eq!(forms(&reduced), forms(&raw), "n = {n}");
        }
    }

    #[test]
    fn guards() {
        assert!(run_survey(&SurveyConfig::new(4, 41)).is_err());
        assert!(enumerate_symmetric_sets(1, false).is_err());
    }
}
