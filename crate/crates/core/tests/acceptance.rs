//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use circwl::aut::{aut_order_bruteforce, expected_aut_order_family, BRUTEFORCE_LIMIT};
use circwl::closure::{intersection_numbers, wl_closure, Digraph};
use circwl::cyclotomy::{
    check_order3_identities, cyclotomic_constants_bruteforce, cyclotomic_numbers_bruteforce,
    is_prime, order2_closed_form, primes_below, primitive_root, prime_form_test, solve_four_p,
    structure_constants_from_table, t_set,
};
use circwl::deza::deza_report;
use circwl::families::{family_graph, smallest_instances, table_params, FamilyLabel, FamilySpec};
use circwl::group::GroupSubset;
use circwl::par::Exec;
use circwl::sring::{check_subgroup_chain_identity, schur_wielandt_closure, sring_from_closure};
use circwl::survey::{run_survey, verify_rank_four, verify_strict, SurveyConfig};
use circwl::tables::cubic_family_params;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rank4_instances() -> Vec<FamilySpec> {
    FamilyLabel::RANK4
        .iter()
        .flat_map(|&l| smallest_instances(l, 3))
        .collect()
}

fn graph(spec: &FamilySpec) -> (usize, GroupSubset) {
    family_graph(spec).unwrap()
}

/// Printed `(n, k, {b, a})`; the cube-class rows are given by formula and
/// are evaluated from the cyclotomic constants.
fn printed_params(spec: &FamilySpec) -> (usize, usize, BTreeSet<u64>) {
    match table_params(spec) {
        Some((n, k, b, a)) => (n, k, BTreeSet::from([b as u64, a as u64])),
        None => {
            let p = cubic_family_params(spec).unwrap();
            (p.n, p.k, BTreeSet::from([p.b, p.a]))
        }
    }
}

fn family_parameters() -> Outcome {
    let specs = rank4_instances();
    ensure(specs.len() == 24, || format!("{} instances instead of 24", specs.len()))?;
    for spec in &specs {
        let (n, s) = graph(spec);
        let p = deza_report(n, &s).unwrap().params().ok_or_else(|| format!("{spec} is not Deza"))?;
        let got = (p.n, p.k, BTreeSet::from([p.b, p.a]));
        ensure(got == printed_params(spec), || format!("{spec}: got {p}, printed {:?}", printed_params(spec)))?;
    }
    let show = |spec: FamilySpec| {
        let (n, s) = graph(&spec);
        deza_report(n, &s).unwrap().params().unwrap().to_string()
    };
    let fixed = [
        (FamilySpec::G1 { m: 3 }, "(12,5,2,1)"),
        (FamilySpec::G4 { l: 2, m: 2 }, "(8,2,2,0)"),
        (FamilySpec::G6 { p: 5 }, "(10,5,4,2)"),
    ];
    for (spec, want) in fixed {
        ensure(show(spec) == want, || format!("{spec}: {} instead of {want}", show(spec)))?;
    }
    Ok(format!("{} instances of G1-G8 match (b,a as an unordered pair)", specs.len()))
}

fn wl_ranks() -> Outcome {
    let mut cases: Vec<(FamilySpec, usize)> = rank4_instances().into_iter().map(|s| (s, 4)).collect();
    cases.extend([
        (FamilySpec::F1 { p: 3, q: 7 }, 5),
        (FamilySpec::SP8, 5),
        (FamilySpec::SP9, 5),
        (FamilySpec::F2 { k: 3 }, 6),
        (FamilySpec::F2 { k: 5 }, 6),
        (FamilySpec::F2 { k: 7 }, 6),
    ]);
    for (spec, want) in &cases {
        let (_, s) = graph(spec);
        let rank = wl_closure(&Digraph::cayley(&s).unwrap()).rank();
        ensure(rank == *want, || format!("{spec}: WL-rank {rank}, expected {want}"))?;
    }
    Ok(format!("{} graphs", cases.len()))
}

fn rank_four_survey() -> Outcome {
    let report = verify_rank_four(30, Exec::Parallel).map_err(|e| e.to_string())?;
    ensure(report.holds(), || report.to_string())?;
    Ok(format!(
        "n in [4,30]: {} rank-4 Deza classes, all family instances, none missing",
        report.records.len()
    ))
}

fn strict_survey() -> Outcome {
    let report = verify_strict(40, Exec::Parallel).map_err(|e| e.to_string())?;
    ensure(report.holds(), || report.to_string())?;
    let max_rank = report.rank_histogram.keys().max().copied().unwrap_or(0);
    ensure(max_rank <= 6, || format!("rank {max_rank}"))?;
    let dims: BTreeSet<&str> = report.records.iter().map(|r| r.dim.as_str()).collect();
    ensure(dims.iter().all(|d| *d == "{2}" || *d == "{2,3}" || *d == "{1,2,3}" || *d == "{1,2}"), || {
        format!("dimension intervals {dims:?}")
    })?;
    Ok(format!(
        "n in [4,40]: {} strictly Deza classes, max WL-rank {max_rank}, dims {dims:?}",
        report.records.len()
    ))
}

fn cyclotomy() -> Outcome {
    let (mut quadratic, mut cubic) = (0, 0);
    for p in primes_below(1000).into_iter().filter(|&p| p > 3) {
        let l = primitive_root(p).unwrap();
        if p % 4 == 1 {
            let c = structure_constants_from_table(&cyclotomic_numbers_bruteforce(p, 2, l).unwrap()).unwrap();
            let closed = order2_closed_form(p).unwrap();
            for i in 1..=2 {
                for j in 1..=2 {
                    ensure(c.get(i, j, 1) == closed[i - 1][j - 1], || format!("p={p}: c^1_{i}{j}"))?;
                }
            }
            quadratic += 1;
        }
        if p % 3 == 1 {
            let c = cyclotomic_constants_bruteforce(p, 3, l).unwrap();
            let d = check_order3_identities(&c).map_err(|e| format!("p={p}: {e}"))?;
            let (x, y) = solve_four_p(p).ok_or_else(|| format!("p={p}: no solution of 4p = x^2 + 27y^2"))?;
            ensure((d.x, d.y_abs()) == (x, y), || format!("p={p}: ({}, {}) vs ({x}, {y})", d.x, d.y_abs()))?;
            for i in 1..=2 {
                let two = t_set(&c, i).len() == 2;
                let square = prime_form_test(p, i).unwrap();
                ensure(two == square, || format!("p={p}, i={i}: |T_i|=2 is {two}, square test {square}"))?;
            }
            cubic += 1;
        }
    }
    ensure(is_prime(997), || "prime sieve".into())?;
    Ok(format!("{quadratic} primes for order 2, {cubic} for order 3"))
}

fn structural_identities() -> Outcome {
    let mut tensors = 0u64;
    let mut specs = rank4_instances();
    specs.extend([
        FamilySpec::F1 { p: 3, q: 7 },
        FamilySpec::SP8,
        FamilySpec::SP9,
        FamilySpec::F2 { k: 3 },
        FamilySpec::F2 { k: 5 },
        FamilySpec::F2 { k: 7 },
    ]);
    for spec in &specs {
        let (_, s) = graph(spec);
        let x = wl_closure(&Digraph::cayley(&s).unwrap());
        x.verify_axioms().map_err(|e| format!("{spec}: {e}"))?;
        let ring = sring_from_closure(&x).map_err(|e| format!("{spec}: {e}"))?;
        let c = ring.structure_constants().map_err(|e| e.to_string())?;
        c.check_triple_identity().map_err(|e| format!("{spec}: {e}"))?;
        c.check_against_closure(&ring, &x, &intersection_numbers(&x).unwrap())
            .map_err(|e| format!("{spec}: {e}"))?;
        tensors += 1;
    }
    // Every Deza class up to 40, which covers the classes of both surveys.
    let out = run_survey(&SurveyConfig::new(4, 40)).map_err(|e| e.to_string())?;
    ensure(out.is_clean(), || {
        out.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
    })?;
    let mut pairs = 0;
    for n in 1..=40 {
        pairs += check_subgroup_chain_identity(n).map_err(|e| format!("n={n}: {e}"))?;
    }
    Ok(format!(
        "{} tensors and closures, {pairs} subgroup pairs",
        tensors + out.checks.tensors
    ))
}

fn automorphisms() -> Outcome {
    let mut checked = Vec::new();
    for spec in rank4_instances() {
        let (n, s) = graph(&spec);
        if n > BRUTEFORCE_LIMIT {
            continue;
        }
        let counted = aut_order_bruteforce(&Digraph::cayley(&s).unwrap()).unwrap();
        let formula = expected_aut_order_family(&spec).unwrap();
        ensure(counted == formula, || format!("{spec}: counted {counted}, formula {formula}"))?;
        checked.push(format!("{spec}={counted}"));
    }
    for (spec, want) in [(FamilySpec::G2 { m: 3 }, 12u32), (FamilySpec::G3 { m: 2 }, 200)] {
        let (_, s) = graph(&spec);
        let counted = aut_order_bruteforce(&Digraph::cayley(&s).unwrap()).unwrap();
        ensure(counted == want.into(), || format!("{spec}: {counted}"))?;
    }
    for must in ["g4(l=2,m=2)", "g5(l=2,m=2)"] {
        ensure(checked.iter().any(|c| c.starts_with(must)), || format!("{must} not checked"))?;
    }
    Ok(checked.join(" "))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut ranks = BTreeSet::new();
    for i in 0..500 {
        let n = rng.random_range(4..=30);
        let keep: Vec<bool> = (0..=n / 2).map(|_| rng.random_bool(0.5)).collect();
        let s = GroupSubset::from_fn(n, |x| x != 0 && keep[x.min(n - x)]);
        let a = sring_from_closure(&wl_closure(&Digraph::cayley(&s).unwrap())).unwrap();
        let b = schur_wielandt_closure(n, &s).unwrap();
        ensure(a.basic_sets() == b.basic_sets(), || format!("sample {i}: {s}"))?;
        ranks.insert(a.rank());
    }
    Ok(format!("500 samples, ranks {:?}", ranks))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("family parameters", family_parameters, Duration::from_secs(1)),
        ("WL-ranks", wl_ranks, Duration::from_secs(5)),
        ("rank-4 Deza survey", rank_four_survey, Duration::from_secs(600)),
        ("strictly Deza survey", strict_survey, Duration::from_secs(1800)),
        ("cyclotomy", cyclotomy, Duration::from_secs(60)),
        ("structural identities", structural_identities, Duration::from_secs(600)),
        ("automorphism orders", automorphisms, Duration::from_secs(60)),
        ("oracle equivalence", oracle_equivalence, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed > *budget {
                Err(format!("took {elapsed:.2?}, budget {budget:?} ({detail})"))
            } else {
                Ok(detail)
            }
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} [{elapsed:.2?}] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} [{elapsed:.2?}] {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
