use circwl::canon::canonical_form_graph;
use circwl::closure::Digraph;
use circwl::families::{family_graph, FamilySpec};

/// Vertices `(x, y)` of a two-factor product, numbered `x * inner + y`.
fn product(outer: usize, inner: usize, adj: impl Fn((usize, usize), (usize, usize)) -> bool) -> Digraph {
    let n = outer * inner;
    let pair = |v: usize| (v / inner, v % inner);
    let arcs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v && adj(pair(u), pair(v)))
        .collect();
    Digraph::new(n, arcs).unwrap()
}

fn circulant(spec: FamilySpec) -> Digraph {
    let (_, s) = family_graph(&spec).unwrap();
    Digraph::cayley(&s).unwrap()
}

fn same_graph(a: &Digraph, b: &Digraph) -> bool {
    canonical_form_graph(a, vec![]).unwrap() == canonical_form_graph(b, vec![]).unwrap()
}

#[test]
fn g1_is_the_cartesian_product_of_complete_graphs() {
    for m in [3, 5, 7] {
        let direct = product(4, m, |(x, y), (u, v)| (x == u) != (y == v));
        assert!(same_graph(&direct, &circulant(FamilySpec::G1 { m })), "m = {m}");
    }
}

#[test]
fn g2_is_the_tensor_product_of_complete_graphs() {
    for m in [3, 5, 7, 9, 11, 13, 15] {
        let direct = product(2, m, |(x, y), (u, v)| x != u && y != v);
        assert!(same_graph(&direct, &circulant(FamilySpec::G2 { m })), "m = {m}");
    }
}

#[test]
fn g6_is_paley_lexicographic_k2() {
    for p in [5, 13] {
        let square = |d: usize| (1..p).any(|t| t * t % p == d);
        let direct = product(p, 2, |(x, y), (u, v)| {
            if x == u {
                y != v
            } else {
                square((p + u - x) % p)
            }
        });
        assert!(same_graph(&direct, &circulant(FamilySpec::G6 { p })), "p = {p}");
    }
}

#[test]
fn the_oracle_separates_non_isomorphic_products() {
    // Same order, different graphs.
    let cartesian = product(4, 3, |(x, y), (u, v)| (x == u) != (y == v));
    let g5 = circulant(FamilySpec::G5 { l: 2, m: 3 });
    assert!(!same_graph(&cartesian, &g5));
    let c6 = circulant(FamilySpec::G2 { m: 3 });
    let two_triangles = product(2, 3, |(x, _), (u, _)| x == u);
    assert!(!same_graph(&c6, &two_triangles));
}

/// Numbering the coset `B + i·a` (with `a = k`, `B = 4Z_{4k}`) as block
/// `σ(i)`, `σ = (2 3)`, gives the block matrix with `J - I` everywhere except
/// `I` on the anti-diagonal.
#[test]
fn f2_block_matrix() {
    for k in [3, 5, 7, 9] {
        let n = 4 * k;
        let (_, s) = family_graph(&FamilySpec::F2 { k }).unwrap();
        let sigma = [0, 1, 3, 2];
        let index = |x: usize| {
            let i = (0..4).find(|&i| (x + n - i * k).is_multiple_of(4)).unwrap();
            let b = (x + n - i * k) % n;
            sigma[i] * k + b / 4
        };
        let mut got = vec![vec![false; n]; n];
        for x in 0..n {
            for y in 0..n {
                got[index(x)][index(y)] = s.contains((y + n - x) % n);
            }
        }
        for r in 0..n {
            for c in 0..n {
                let (br, bc) = (r / k, c / k);
                let diagonal = r % k == c % k;
                let expected = if br + bc == 3 { diagonal } else { !diagonal };
                assert_eq!(got[r][c], expected, "k = {k}, entry ({r}, {c})");
            }
        }
    }
}
