// Independent oracles shared by the integration tests. Nothing here calls
// into the elimination code it is used to check.
#![allow(dead_code)]

use invarank::exactmath::{ExactMatrix, FieldSpec, Scalar};

pub const Q: FieldSpec = FieldSpec::Rationals;
pub const GF2: FieldSpec = FieldSpec::Prime(2);
pub const GF3: FieldSpec = FieldSpec::Prime(3);
pub const GF5: FieldSpec = FieldSpec::Prime(5);
pub const GF7: FieldSpec = FieldSpec::Prime(7);

pub fn s(field: FieldSpec, v: i64) -> Scalar {
    Scalar::from_i64(field, v)
}

pub fn mat(field: FieldSpec, rows: usize, cols: usize, vals: &[i64]) -> ExactMatrix {
    ExactMatrix::new(field, rows, cols, vals.iter().map(|&v| s(field, v)).collect()).unwrap()
}

/// Leibniz expansion of the determinant of a square block of entries.
pub fn det_leibniz(field: FieldSpec, m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    let mut total = Scalar::zero(field);
    for (perm, sign) in permutations_lex(n) {
        let mut term = s(field, sign);
        for (i, &j) in perm.iter().enumerate() {
            term = &term * &m[i][j];
        }
        total = &total + &term;
    }
    total
}

/// All permutations of 0..n in lexicographic order with their signs.
pub fn permutations_lex(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut perms = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let inv = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            (p, if inv % 2 == 0 { 1 } else { -1 })
        })
        .collect()
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Rank as the size of the largest nonvanishing minor.
pub fn rank_by_minors(m: &ExactMatrix) -> usize {
    let field = m.field();
    for k in (1..=m.rows().min(m.cols())).rev() {
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                let block: Vec<Vec<Scalar>> =
                    rs.iter().map(|&i| cs.iter().map(|&j| m.get(i, j).clone()).collect()).collect();
                if !det_leibniz(field, &block).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}
