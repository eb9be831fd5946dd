//! Cyclotomic numbers of order 2 and 3 over prime fields.
//!
//! `(k,h)_m` counts `x, y ∈ [0, f)` with `l^{mx+k} + 1 ≡ l^{my+h} (mod p)`,
//! where `f = (p-1)/m` and `l` is a primitive root. Equivalently it is the
//! number of `u` in the class `C_k = l^k⟨l^m⟩` with `u + 1 ∈ C_h`.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Roots;

use crate::error::{Error, Result};

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn primes_below(limit: usize) -> Vec<usize> {
    (2..limit).filter(|&p| is_prime(p)).collect()
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut result = 1 % m;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result
}

pub fn is_primitive_root(l: usize, p: usize) -> bool {
    if !is_prime(p) || l.is_multiple_of(p) {
        return false;
    }
    prime_factors(p - 1)
        .into_iter()
        .all(|q| pow_mod(l as u64, ((p - 1) / q) as u64, p as u64) != 1)
}

/// The smallest primitive root mod `p`, or `None` when `p` is not prime.
pub fn primitive_root(p: usize) -> Option<usize> {
    if !is_prime(p) {
        return None;
    }
    if p == 2 {
        return Some(1);
    }
    (2..p).find(|&l| is_primitive_root(l, p))
}

/// `log[l^e mod p] = e` for `e < p - 1`; `log[0]` is unused.
fn discrete_logs(p: usize, l: usize) -> Vec<usize> {
    let mut log = vec![usize::MAX; p];
    let mut v = 1;
    for e in 0..p - 1 {
        log[v] = e;
        v = v * l % p;
    }
    log
}

fn check_args(p: usize, m: usize, l: usize) -> Result<()> {
    if !is_prime(p) || p == 2 {
        return Err(Error::Precondition(format!("{p} is not an odd prime")));
    }
    if !(m == 2 || m == 3) || !(p - 1).is_multiple_of(m) {
        return Err(Error::Precondition(format!(
            "order {m} must be 2 or 3 and divide {}",
            p - 1
        )));
    }
    if !is_primitive_root(l, p) {
        return Err(Error::Precondition(format!(
            "{l} is not a primitive root mod {p}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicTable {
    pub p: usize,
    pub m: usize,
    pub f: usize,
    pub primitive_root: usize,
    table: Vec<Vec<u64>>,
}

impl CyclotomicTable {
    pub fn get(&self, k: usize, h: usize) -> u64 {
        self.table[k % self.m][h % self.m]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.table
    }

    pub fn total(&self) -> u64 {
        self.table.iter().flatten().sum()
    }
}

impl fmt::Display for CyclotomicTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.p, self.m, self.primitive_root)?;
        for row in &self.table {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Counts every `(k,h)_m` in one pass over the field using discrete logs.
pub fn cyclotomic_numbers_bruteforce(p: usize, m: usize, l: usize) -> Result<CyclotomicTable> {
    check_args(p, m, l)?;
    let log = discrete_logs(p, l);
    let mut table = vec![vec![0u64; m]; m];
    for u in 1..p - 1 {
        table[log[u] % m][log[u + 1] % m] += 1;
    }
    Ok(CyclotomicTable {
        p,
        m,
        f: (p - 1) / m,
        primitive_root: l,
        table,
    })
}

/// Literal double loop over `x, y`; quadratic in `f`, kept as a cross-check.
pub fn cyclotomic_numbers_naive(p: usize, m: usize, l: usize) -> Result<CyclotomicTable> {
    check_args(p, m, l)?;
    let f = (p - 1) / m;
    let (pp, ll) = (p as u64, l as u64);
    let mut table = vec![vec![0u64; m]; m];
    for (k, row) in table.iter_mut().enumerate() {
        for (h, cell) in row.iter_mut().enumerate() {
            for x in 0..f {
                let lhs = (pow_mod(ll, (m * x + k) as u64, pp) + 1) % pp;
                for y in 0..f {
                    if lhs == pow_mod(ll, (m * y + h) as u64, pp) {
                        *cell += 1;
                    }
                }
            }
        }
    }
    Ok(CyclotomicTable {
        p,
        m,
        f,
        primitive_root: l,
        table,
    })
}

/// `c^k_{ij}` of `cyc((p-1)/m, Z_p)` with basic sets `X_i = l^{i-1}⟨l^m⟩`,
/// indices `1..=m`. Only meaningful for even `f`, where every `X_i` is symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicConstants {
    pub p: usize,
    pub m: usize,
    c: Vec<u64>,
}

impl CyclotomicConstants {
    /// `c^k_{ij}`, all indices 1-based.
    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        let m = self.m;
        self.c[((i - 1) * m + (j - 1)) * m + (k - 1)]
    }
}

/// Reads `c^1_{ij} = (i-1, j-1)_m` off the table; the other superscripts are
/// left unset (zero) since only the first is determined directly.
pub fn structure_constants_from_table(t: &CyclotomicTable) -> Result<CyclotomicConstants> {
    if !t.f.is_multiple_of(2) {
        return Err(Error::Unsupported(format!(
            "f = {} is odd, so the basic sets are not symmetric",
            t.f
        )));
    }
    let m = t.m;
    let mut c = vec![0; m * m * m];
    for i in 1..=m {
        for j in 1..=m {
            c[((i - 1) * m + (j - 1)) * m] = t.get(i - 1, j - 1);
        }
    }
    Ok(CyclotomicConstants { p: t.p, m, c })
}

/// Every `c^k_{ij}` by counting representations `a_k = x + y`, `x ∈ X_i`,
/// `y ∈ X_j`, for the representative `a_k = l^{k-1}`.
pub fn cyclotomic_constants_bruteforce(p: usize, m: usize, l: usize) -> Result<CyclotomicConstants> {
    check_args(p, m, l)?;
    let log = discrete_logs(p, l);
    let class = |u: usize| log[u] % m;
    let mut c = vec![0; m * m * m];
    let mut a = 1;
    for k in 0..m {
        for x in 1..p {
            let y = (a + p - x) % p;
            if y != 0 {
                c[(class(x) * m + class(y)) * m + k] += 1;
            }
        }
        a = a * l % p;
    }
    Ok(CyclotomicConstants { p, m, c })
}

/// The order-2 closed form for `p ≡ 1 (mod 4)`:
/// `c^1_{11} = f/2 - 1` and `c^1_{12} = c^1_{21} = c^1_{22} = f/2`.
pub fn order2_closed_form(p: usize) -> Result<[[u64; 2]; 2]> {
    if !is_prime(p) || p % 4 != 1 {
        return Err(Error::Precondition(format!("{p} is not a prime ≡ 1 mod 4")));
    }
    let half = ((p - 1) / 4) as u64;
    Ok([[half - 1, half], [half, half]])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CubicDecomposition {
    pub p: usize,
    pub x: i64,
    /// `c^1_{12} - c^1_{13}` for the smallest primitive root.
    pub y: i64,
}

impl CubicDecomposition {
    pub fn y_abs(&self) -> u64 {
        self.y.unsigned_abs()
    }
}

fn check_cubic_prime(p: usize) -> Result<()> {
    if !is_prime(p) || p % 3 != 1 {
        return Err(Error::Precondition(format!("{p} is not a prime ≡ 1 mod 3")));
    }
    Ok(())
}

/// `x = 9c^1_{23} - p - 1`, `y = c^1_{12} - c^1_{13}` from the counted table.
pub fn cubic_decomposition(p: usize) -> Result<CubicDecomposition> {
    check_cubic_prime(p)?;
    let l = primitive_root(p).expect("prime");
    let t = cyclotomic_numbers_bruteforce(p, 3, l)?;
    let (pi, c23) = (p as i64, t.get(1, 2) as i64);
    Ok(CubicDecomposition {
        p,
        x: 9 * c23 - pi - 1,
        y: t.get(0, 1) as i64 - t.get(0, 2) as i64,
    })
}

/// Solves `4p = x² + 27y²` with `x ≡ 1 (mod 3)` and `y > 0` by search.
pub fn solve_four_p(p: usize) -> Option<(i64, u64)> {
    let four_p = 4 * p as u64;
    let mut y = 1u64;
    while 27 * y * y < four_p {
        if let Some(s) = perfect_sqrt(four_p - 27 * y * y) {
            let s = s as i64;
            let x = if s.rem_euclid(3) == 1 { s } else { -s };
            if x.rem_euclid(3) == 1 {
                return Some((x, y));
            }
        }
        y += 1;
    }
    None
}

/// Checks the three order-3 identities for `p ≡ 1 (mod 3)` with even `f`:
/// `4p = x² + 27y²` with `x ≡ 1 (mod 3)`, `9c^1_{11} = p - 8 + x`, and
/// `18c^1_{12} = 2p - 4 - x + 9y`, `18c^1_{13} = 2p - 4 - x - 9y`.
pub fn check_order3_identities(c: &CyclotomicConstants) -> Result<CubicDecomposition> {
    let p = c.p as i64;
    if c.m != 3 || !(c.p - 1).is_multiple_of(6) {
        return Err(Error::Precondition(format!(
            "need order 3 with even f, got m={} p={}",
            c.m, c.p
        )));
    }
    let g = |i, j| c.get(i, j, 1) as i64;
    let x = 9 * g(2, 3) - p - 1;
    let y = g(1, 2) - g(1, 3);
    let fail = |what: &str| Err(Error::Inconsistent(format!("p={p}: {what} fails (x={x}, y={y})")));
    if 4 * p != x * x + 27 * y * y || x.rem_euclid(3) != 1 {
        return fail("4p = x² + 27y², x ≡ 1 mod 3");
    }
    if 9 * g(1, 1) != p - 8 + x {
        return fail("9c11 = p - 8 + x");
    }
    if 18 * g(1, 2) != 2 * p - 4 - x + 9 * y || 18 * g(1, 3) != 2 * p - 4 - x - 9 * y {
        return fail("18c12 / 18c13");
    }
    Ok(CubicDecomposition { p: c.p, x, y })
}

pub fn perfect_sqrt(v: u64) -> Option<u64> {
    let r = v.sqrt();
    (r * r == v).then_some(r)
}

/// `p - 3i²` is a perfect square.
pub fn prime_form_test(p: usize, i: usize) -> Result<bool> {
    check_cubic_prime(p)?;
    if !((p - 1) / 3).is_multiple_of(2) {
        return Err(Error::Precondition(format!("(p-1)/3 is odd for p={p}")));
    }
    if !(i == 1 || i == 2) {
        return Err(Error::Precondition(format!("i must be 1 or 2, got {i}")));
    }
    let v = p as i64 - 3 * (i * i) as i64;
    Ok(v >= 0 && perfect_sqrt(v as u64).is_some())
}

/// `T_i = {c^1_{11} + 2(i-1), c^2_{11}, c^3_{11}}` from counted constants.
pub fn t_set(c: &CyclotomicConstants, i: usize) -> BTreeSet<u64> {
    [
        c.get(1, 1, 1) + 2 * (i as u64 - 1),
        c.get(1, 1, 2),
        c.get(1, 1, 3),
    ]
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_roots() {
        assert_eq!(primes_below(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(primitive_root(7), Some(3));
        assert_eq!(primitive_root(13), Some(2));
        assert_eq!(primitive_root(19), Some(2));
        assert_eq!(primitive_root(15), None);
        assert!(!is_primitive_root(4, 7));
    }

    #[test]
    fn order2_p13() {
        let t = cyclotomic_numbers_bruteforce(13, 2, 2).unwrap();
        assert_eq!(t.get(0, 0), 2);
        assert_eq!(t, cyclotomic_numbers_naive(13, 2, 2).unwrap());
        let c = structure_constants_from_table(&t).unwrap();
        assert_eq!(c.get(1, 1, 1), 2);
        assert_eq!([[2, 3], [3, 3]], order2_closed_form(13).unwrap());
    }

    #[test]
    fn order3_small_primes() {
        let t7 = cyclotomic_numbers_bruteforce(7, 3, 3).unwrap();
        assert_eq!(t7.total(), 5);
        assert_eq!(t7, cyclotomic_numbers_naive(7, 3, 3).unwrap());

        let c13 = cyclotomic_constants_bruteforce(13, 3, 2).unwrap();
        assert_eq!(c13.get(1, 1, 1), 0);
        let d = check_order3_identities(&c13).unwrap();
        assert_eq!(d.x, -5);
        assert_eq!(d.y.abs(), 1);

        let c19 = cyclotomic_constants_bruteforce(19, 3, 2).unwrap();
        assert_eq!(c19.get(1, 1, 1), 2);
        assert_eq!(check_order3_identities(&c19).unwrap().x, 7);
    }

    #[test]
    fn table_route_agrees_with_counting() {
        for p in [13, 19, 31, 37, 43] {
            let l = primitive_root(p).unwrap();
            let t = cyclotomic_numbers_bruteforce(p, 3, l).unwrap();
            let a = structure_constants_from_table(&t).unwrap();
            let b = cyclotomic_constants_bruteforce(p, 3, l).unwrap();
            for i in 1..=3 {
                for j in 1..=3 {
                    assert_eq!(a.get(i, j, 1), b.get(i, j, 1));
                }
            }
        }
        let odd_f = cyclotomic_numbers_bruteforce(7, 2, 3).unwrap();
        assert!(structure_constants_from_table(&odd_f).is_err());
    }

    #[test]
    fn decompositions() {
        assert_eq!(cubic_decomposition(7).unwrap().x, 1);
        assert_eq!(cubic_decomposition(7).unwrap().y_abs(), 1);
        assert_eq!(cubic_decomposition(13).unwrap().x, -5);
        assert_eq!(cubic_decomposition(19).unwrap().x, 7);
        assert_eq!(solve_four_p(13), Some((-5, 1)));
        assert_eq!(solve_four_p(31), Some((4, 2)));
    }

    #[test]
    fn prime_forms() {
        assert!(prime_form_test(7, 1).unwrap());
        assert!(prime_form_test(11, 1).is_err());
        assert!(prime_form_test(13, 2).unwrap());
        assert!(!prime_form_test(13, 1).unwrap());
        assert!(prime_form_test(19, 1).unwrap());
        let c = cyclotomic_constants_bruteforce(13, 3, 2).unwrap();
        assert_eq!(t_set(&c, 2).len(), 2);
        assert_eq!(t_set(&c, 1).len(), 3);
    }

    #[test]
    fn dump_format() {
        let t = cyclotomic_numbers_bruteforce(7, 3, 3).unwrap();
        let text = t.to_string();
        assert!(text.starts_with("7 3 3\n"));
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(cyclotomic_numbers_bruteforce(13, 2, 3).is_err());
        assert!(cyclotomic_numbers_bruteforce(11, 3, 2).is_err());
        assert!(cyclotomic_numbers_bruteforce(15, 2, 2).is_err());
    }
}
