//! Automorphism group orders: closed forms for the recognised shapes and an
//! exhaustive count for small graphs.

use num_bigint::BigUint;

use crate::closure::{wl_closure, CoherentConfiguration, Digraph};
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::sring::Rank4Form;

pub const BRUTEFORCE_LIMIT: usize = 12;

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, i| acc * i)
}

fn big(n: usize) -> BigUint {
    BigUint::from(n)
}

/// `|A ≀ Sym(k)| = |A|^k · k!`.
fn wreath(base: BigUint, k: usize) -> BigUint {
    base.pow(k as u32) * factorial(k)
}

/// `|Aut(X(A))|` for a rank-4 shape over `Z_n`.
pub fn expected_aut_order_form(form: &Rank4Form, n: usize) -> Result<BigUint> {
    Ok(match *form {
        Rank4Form::TensorTT { l, u } => factorial(l) * factorial(u),
        Rank4Form::DoubleWreath { l, u } => wreath(wreath(factorial(l), u / l), n / u),
        Rank4Form::CycWreathBottom { p } => wreath(big(p * (p - 1) / 2), n / p),
        Rank4Form::WreathCycTop { l, p } => factorial(l).pow(p as u32) * big(p * (p - 1) / 2),
        Rank4Form::PrimeCubicCyclotomic { p, .. } => big(p * (p - 1) / 3),
        Rank4Form::Z4Full => big(4),
    })
}

/// `|Aut(Γ)|` for a family instance, from the table expressions.
pub fn expected_aut_order_family(spec: &FamilySpec) -> Result<BigUint> {
    spec.validate()?;
    Ok(match *spec {
        FamilySpec::G1 { m } => factorial(4) * factorial(m),
        FamilySpec::G2 { m } => big(2) * factorial(m),
        FamilySpec::G3 { m } => wreath(big(10), m),
        FamilySpec::G4 { l, m } => wreath(wreath(factorial(m), 2), l),
        FamilySpec::G5 { l, m } => wreath(wreath(big(2), m), l),
        FamilySpec::G6 { p } => big(2).pow(p as u32) * big(p * (p - 1) / 2),
        FamilySpec::G7 { p } | FamilySpec::G8 { p } => big(p * (p - 1) / 3),
        FamilySpec::F1 { p, q } => big(p * q * (p - 1) * (q - 1) / 2),
        FamilySpec::F2 { k } => big(8) * factorial(k),
        FamilySpec::SP8 => big(16),
        FamilySpec::SP9 => big(18),
    })
}

/// Exact `|Aut(Γ)|` as a product of orbit lengths along the pointwise
/// stabiliser chain of `0, 1, …`. Candidate images are pruned with the
/// colours of the WL-closure, whose automorphisms are those of `Γ`.
pub fn aut_order_bruteforce(g: &Digraph) -> Result<BigUint> {
    let n = g.vertex_count();
    if n > BRUTEFORCE_LIMIT {
        return Err(Error::SizeGuard {
            what: "vertex count",
            size: n,
            limit: BRUTEFORCE_LIMIT,
        });
    }
    let x = wl_closure(g);
    let mut order = BigUint::from(1u32);
    for i in 0..n {
        let orbit = (0..n)
            .filter(|&c| {
                let mut image: Vec<usize> = (0..i).collect();
                image.push(c);
                extends(&x, &mut image)
            })
            .count();
        order *= orbit;
    }
    Ok(order)
}

fn consistent(x: &CoherentConfiguration, image: &[usize]) -> bool {
    let last = image.len() - 1;
    let v = image[last];
    if image[..last].contains(&v) {
        return false;
    }
    (0..=last).all(|a| {
        x.color(a, last) == x.color(image[a], v) && x.color(last, a) == x.color(v, image[a])
    })
}

/// Depth-first search for a colour-preserving bijection extending `image`.
fn extends(x: &CoherentConfiguration, image: &mut Vec<usize>) -> bool {
    if !consistent(x, image) {
        return false;
    }
    if image.len() == x.vertex_count() {
        return true;
    }
    for v in 0..x.vertex_count() {
        image.push(v);
        if extends(x, image) {
            image.pop();
            return true;
        }
        image.pop();
    }
    false
}

#[cfg(test)]
fn is_automorphism(g: &Digraph, perm: &[usize]) -> bool {
    g.arcs().all(|(u, v)| g.has_arc(perm[u], perm[v]))
}
