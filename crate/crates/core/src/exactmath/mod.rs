//! Exact arithmetic: fields, dense matrices and sparse polynomials.

mod field;
mod matrix;
mod poly;

pub use field::{is_prime, rational_sqrt, FieldSpec, Scalar, MAX_PRIME};
pub use matrix::{bareiss_rank, rank_of_rows, ExactMatrix, MatrixJson};
pub use poly::{Monomial, MultiPoly};

use crate::error::Result;

pub fn mat_mul(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
    a.mul(b)
}

pub fn mat_rank(m: &ExactMatrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &ExactMatrix) -> Vec<Vec<Scalar>> {
    m.kernel_basis()
}

pub fn poly_diff(p: &MultiPoly, var: usize) -> Result<MultiPoly> {
    p.diff(var)
}

pub fn poly_eval(p: &MultiPoly, point: &[Scalar]) -> Result<Scalar> {
    p.eval(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn matrix_unit_products() {
        let e12 = ExactMatrix::unit(Q, 2, 0, 1);
        let e21 = ExactMatrix::unit(Q, 2, 1, 0);
        assert_eq!(mat_mul(&e12, &e21).unwrap(), ExactMatrix::unit(Q, 2, 0, 0));
        let m = ExactMatrix::from_ints(Q, [[1, -2, 3], [0, 5, 7]]);
        assert_eq!(mat_mul(&ExactMatrix::identity(Q, 2), &m).unwrap(), m);
        let n = ExactMatrix::from_ints(Q, [[1, 1], [-1, -1]]);
        assert!(mat_mul(&n, &n).unwrap().is_zero());
    }

    #[test]
    fn mul_errors() {
        let a = ExactMatrix::identity(Q, 2);
        let b = ExactMatrix::identity(Q, 3);
        assert!(matches!(mat_mul(&a, &b), Err(Error::DimensionMismatch(_))));
        let c = ExactMatrix::identity(FieldSpec::Prime(5), 2);
        assert!(matches!(mat_mul(&a, &c), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn rank_basics() {
        assert_eq!(mat_rank(&ExactMatrix::zeros(Q, 3, 3)), 0);
        for n in 1..6 {
            assert_eq!(mat_rank(&ExactMatrix::identity(Q, n)), n);
            assert_eq!(mat_rank(&ExactMatrix::identity(FieldSpec::Prime(3), n)), n);
        }
        // rank drops mod p only
        let m = ExactMatrix::from_ints(Q, [[1, 2], [3, 1]]);
        assert_eq!(m.rank(), 2);
        let m5 = ExactMatrix::from_ints(FieldSpec::Prime(5), [[1, 2], [3, 1]]);
        assert_eq!(m5.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&ExactMatrix::identity(Q, 4)).is_empty());
        assert_eq!(kernel_basis(&ExactMatrix::zeros(Q, 2, 3)).len(), 3);
        let f5 = FieldSpec::Prime(5);
        let m = ExactMatrix::from_ints(f5, [[1, 2]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        // GF(5)^2 enumeration: the nonzero solutions of x + 2y = 0 are the multiples of (3, 1)
        let sols: Vec<(i64, i64)> = (0..5)
            .flat_map(|x| (0..5).map(move |y| (x, y)))
            .filter(|&(x, y)| (x, y) != (0, 0) && (x + 2 * y) % 5 == 0)
            .collect();
        assert_eq!(sols.len(), 4);
        assert!(sols.contains(&(3, 1)));
        let v = &k[0];
        let as_pair = |s: &Scalar| s.to_string().parse::<i64>().unwrap();
        assert!(sols.contains(&(as_pair(&v[0]), as_pair(&v[1]))));
        assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
    }

    #[test]
    fn inverse_and_det() {
        let g = ExactMatrix::from_ints(Q, [[2, 1], [1, 1]]);
        let gi = g.inverse().unwrap();
        assert_eq!(g.mul(&gi).unwrap(), ExactMatrix::identity(Q, 2));
        assert_eq!(g.det().unwrap(), Scalar::from_i64(Q, 1));
        let s = ExactMatrix::from_ints(Q, [[1, 2], [2, 4]]);
        assert_eq!(s.inverse(), Err(Error::Singular));
        assert!(s.det().unwrap().is_zero());
    }

    #[test]
    fn json_round_trip() {
        let m = ExactMatrix::from_json(r#"{"field": "q", "rows": [["1/2", "-3"], ["0", "4/6"]]}"#).unwrap();
        assert_eq!(m.get(1, 1).to_string(), "2/3");
        let back = serde_json::to_string(&m).unwrap();
        assert_eq!(back, r#"{"field":"q","rows":[["1/2","-3"],["0","2/3"]]}"#);
        assert!(ExactMatrix::from_json(r#"{"field": "q", "rows": [["1"], ["1", "2"]]}"#).is_err());
        assert!(ExactMatrix::from_json(r#"{"field": "p:4", "rows": [["1"]]}"#).is_err());
        assert!(ExactMatrix::from_json(r#"{"field": "q", "rows": []}"#).is_err());
    }
}
