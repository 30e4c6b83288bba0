mod common;

use common::*;
use invarank::exactmath::{ExactMatrix, FieldSpec, Scalar};
use invarank::liealg::{squarezero_basis, AlgebraKind};
use invarank::reptheory::{induced_derivative_action, induced_group_action, parse_rep, rep_basis, rep_dim, RepExpr};
use proptest::prelude::*;

fn count_multisets(n: usize, k: usize) -> usize {
    // brute force: nondecreasing k-tuples over 0..n
    (0..n.pow(k as u32))
        .filter(|&code| {
            let digits: Vec<usize> = (0..k).map(|i| code / n.pow(i as u32) % n).collect();
            digits.windows(2).all(|w| w[0] <= w[1])
        })
        .count()
}

fn dim_oracle(e: &RepExpr, n: usize) -> usize {
    match e {
        RepExpr::V => n,
        RepExpr::Dual(a) => dim_oracle(a, n),
        RepExpr::Sum(a, b) => dim_oracle(a, n) + dim_oracle(b, n),
        RepExpr::Tensor(a, b) => dim_oracle(a, n) * dim_oracle(b, n),
        RepExpr::Sym(k, a) => count_multisets(dim_oracle(a, n), *k as usize),
        RepExpr::Ext(k, a) => binomial(dim_oracle(a, n), *k as usize),
    }
}

#[test]
fn dimensions_of_powers() {
    for n in 1..=6 {
        for k in 1..=3u32 {
            let sym = RepExpr::Sym(k, Box::new(RepExpr::V));
            let ext = RepExpr::Ext(k, Box::new(RepExpr::V));
            assert_eq!(rep_dim(&sym, n), count_multisets(n, k as usize));
            assert_eq!(rep_dim(&ext, n), binomial(n, k as usize));
            assert_eq!(rep_basis(&sym, n).labels.len(), rep_dim(&sym, n));
            assert_eq!(rep_basis(&ext, n).labels.len(), rep_dim(&ext, n));
        }
    }
    assert_eq!(rep_dim(&parse_rep("E3(V)").unwrap(), 6), 20);
    assert_eq!(rep_dim(&parse_rep("V + S2(V)").unwrap(), 2), 5);
}

#[test]
fn basis_labels() {
    let b = rep_basis(&parse_rep("V + S2(V*)").unwrap(), 2);
    assert_eq!(b.labels, ["v1", "v2", "v1*.v1*", "v1*.v2*", "v2*.v2*"]);
    let e = rep_basis(&parse_rep("E3(V)").unwrap(), 4);
    assert_eq!(e.labels[0], "v1^v2^v3");
    assert_eq!(e.labels[3], "v2^v3^v4");
}

fn expr_strategy() -> impl Strategy<Value = RepExpr> {
    let leaf = Just(RepExpr::V);
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| RepExpr::Dual(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| RepExpr::Sum(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| RepExpr::Tensor(Box::new(a), Box::new(b))),
            (1u32..=3, inner.clone()).prop_map(|(k, a)| RepExpr::Sym(k, Box::new(a))),
            (1u32..=3, inner).prop_map(|(k, a)| RepExpr::Ext(k, Box::new(a))),
        ]
    })
}

/// Expressions with a small total dimension for `n`, to keep the matrices cheap.
fn small_expr(n: usize) -> impl Strategy<Value = RepExpr> {
    expr_strategy().prop_filter("dimension too large", move |e| (1..=30).contains(&dim_oracle(e, n)))
}

fn square(field: FieldSpec, n: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| mat(field, n, n, &v))
}

fn invertible(field: FieldSpec, n: usize) -> impl Strategy<Value = ExactMatrix> {
    square(field, n).prop_filter("singular", |m| !m.det().unwrap().is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn display_reparses(e in expr_strategy()) {
        prop_assert_eq!(parse_rep(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn dimension_matches_oracle(e in expr_strategy(), n in 1usize..=3) {
        let d = dim_oracle(&e, n);
        prop_assume!(d <= 200);
        prop_assert_eq!(rep_dim(&e, n), d);
        prop_assert_eq!(rep_basis(&e, n).dim, d);
    }

    #[test]
    fn derivative_action_is_a_lie_homomorphism(
        (e, a, b) in (2usize..=3).prop_flat_map(|n| (small_expr(n), square(Q, n), square(Q, n)))
    ) {
        let ra = induced_derivative_action(&e, &a).unwrap();
        let rb = induced_derivative_action(&e, &b).unwrap();
        let lhs = induced_derivative_action(&e, &a.commutator(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, ra.commutator(&rb).unwrap());
        // and linear
        let sum = induced_derivative_action(&e, &a.add(&b).unwrap()).unwrap();
        prop_assert_eq!(sum, ra.add(&rb).unwrap());
    }

    #[test]
    fn group_action_is_multiplicative(
        (e, g, h) in (2usize..=3).prop_flat_map(|n| (small_expr(n), invertible(Q, n), invertible(Q, n)))
    ) {
        let n = g.rows();
        let rg = induced_group_action(&e, &g).unwrap();
        let rh = induced_group_action(&e, &h).unwrap();
        prop_assert_eq!(induced_group_action(&e, &g.mul(&h).unwrap()).unwrap(), rg.mul(&rh).unwrap());
        let id = induced_group_action(&e, &ExactMatrix::identity(Q, n)).unwrap();
        prop_assert_eq!(id, ExactMatrix::identity(Q, dim_oracle(&e, n)));
    }

    #[test]
    fn group_action_mod_p_is_multiplicative(
        (e, g, h) in (2usize..=3).prop_flat_map(|n| (small_expr(n), invertible(GF5, n), invertible(GF5, n)))
    ) {
        let rg = induced_group_action(&e, &g).unwrap();
        let rh = induced_group_action(&e, &h).unwrap();
        prop_assert_eq!(induced_group_action(&e, &g.mul(&h).unwrap()).unwrap(), rg.mul(&rh).unwrap());
    }

    #[test]
    fn derivative_is_the_tangent_of_the_group_action(
        (e, idx, n) in (2usize..=3).prop_flat_map(|n| (small_expr(n), 0..n * n - 1, Just(n)))
    ) {
        // t ↦ ρ(I + tB) is a polynomial of degree at most weight(e) for B² = 0,
        // so its derivative at 0 follows from Lagrange interpolation.
        let b = squarezero_basis(AlgebraKind::Sl, n, Q).unwrap().elements[idx].clone();
        let d = e.weight() as i64;
        let id = ExactMatrix::identity(Q, n);
        let dim = dim_oracle(&e, n);
        let mut tangent = ExactMatrix::zeros(Q, dim, dim);
        for k in 0..=d {
            let g = id.add(&b.scale(&s(Q, k))).unwrap();
            let value = induced_group_action(&e, &g).unwrap();
            tangent = tangent.add(&value.scale(&lagrange_derivative_at_zero(d, k))).unwrap();
        }
        prop_assert_eq!(tangent, induced_derivative_action(&e, &b).unwrap());
    }

    #[test]
    fn traces_add_over_sums_and_tensors(
        (e1, e2, a) in (2usize..=3).prop_flat_map(|n| (small_expr(n), small_expr(n), square(Q, n)))
    ) {
        let n = a.rows();
        let t = |e: &RepExpr| induced_derivative_action(e, &a).unwrap().trace().unwrap();
        let sum = RepExpr::Sum(Box::new(e1.clone()), Box::new(e2.clone()));
        prop_assert_eq!(t(&sum), &t(&e1) + &t(&e2));
        let (d1, d2) = (s(Q, dim_oracle(&e1, n) as i64), s(Q, dim_oracle(&e2, n) as i64));
        let tensor = RepExpr::Tensor(Box::new(e1.clone()), Box::new(e2.clone()));
        prop_assert_eq!(t(&tensor), &(&d2 * &t(&e1)) + &(&d1 * &t(&e2)));
        prop_assert_eq!(t(&RepExpr::Dual(Box::new(e1.clone()))), -&t(&e1));
    }
}

/// `L_k'(0)` for the Lagrange basis on the nodes `0, 1, ..., d`.
fn lagrange_derivative_at_zero(d: i64, k: i64) -> Scalar {
    if k == 0 {
        return (1..=d).fold(s(Q, 0), |acc, j| &acc - &s(Q, j).inv().unwrap());
    }
    let mut num = s(Q, 1);
    let mut den = s(Q, 1);
    for j in 0..=d {
        if j == k {
            continue;
        }
        if j != 0 {
            num = &num * &s(Q, -j);
        }
        den = &den * &s(Q, k - j);
    }
    &num * &den.inv().unwrap()
}

fn sorted_diagonal(m: &ExactMatrix) -> Vec<String> {
    let mut d: Vec<String> = (0..m.rows()).map(|i| m.get(i, i).to_string()).collect();
    d.sort();
    d
}

#[test]
fn diagonal_actions_have_weight_sums_as_eigenvalues() {
    let diag = [2i64, -3, 7];
    let a = ExactMatrix::diagonal(Q, &diag.map(|v| s(Q, v)));
    for k in 1..=3usize {
        let sym = induced_derivative_action(&RepExpr::Sym(k as u32, Box::new(RepExpr::V)), &a).unwrap();
        let ext = induced_derivative_action(&RepExpr::Ext(k as u32, Box::new(RepExpr::V)), &a).unwrap();
        let mut sym_expected = Vec::new();
        for code in 0..3usize.pow(k as u32) {
            let idx: Vec<usize> = (0..k).map(|i| code / 3usize.pow(i as u32) % 3).collect();
            if idx.windows(2).all(|w| w[0] <= w[1]) {
                sym_expected.push(idx.iter().map(|&i| diag[i]).sum::<i64>().to_string());
            }
        }
        sym_expected.sort();
        let mut ext_expected: Vec<String> =
            subsets(3, k).iter().map(|sub| sub.iter().map(|&i| diag[i]).sum::<i64>().to_string()).collect();
        ext_expected.sort();
        assert_eq!(sorted_diagonal(&sym), sym_expected);
        assert_eq!(sorted_diagonal(&ext), ext_expected);
        for m in [&sym, &ext] {
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    assert!(i == j || m.get(i, j).is_zero());
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn top_exterior_power_is_the_determinant(g in (2usize..=4).prop_flat_map(|n| invertible(Q, n))) {
        let n = g.rows() as u32;
        let r = induced_group_action(&RepExpr::Ext(n, Box::new(RepExpr::V)), &g).unwrap();
        prop_assert_eq!(r.rows(), 1);
        prop_assert_eq!(r.get(0, 0).clone(), g.det().unwrap());
        let a = g.clone();
        let ra = induced_derivative_action(&RepExpr::Ext(n, Box::new(RepExpr::V)), &a).unwrap();
        prop_assert_eq!(ra.get(0, 0).clone(), a.trace().unwrap());
    }
}

#[test]
fn singular_group_elements_are_rejected() {
    let g = mat(Q, 2, 2, &[1, 2, 2, 4]);
    assert!(induced_group_action(&RepExpr::V, &g).is_err());
    assert!(induced_group_action(&parse_rep("V*").unwrap(), &g).is_err());
    // a zero-dimensional summand is dropped, a zero-dimensional total is not
    let sum = parse_rep("V + E3(V)").unwrap();
    let a = mat(Q, 2, 2, &[1, 2, 3, 4]);
    assert_eq!(induced_derivative_action(&sum, &a).unwrap(), a);
    assert!(induced_derivative_action(&parse_rep("E3(V)").unwrap(), &a).is_err());
}
