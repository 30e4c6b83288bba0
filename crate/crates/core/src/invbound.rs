//! Linear vector fields attached to a Lie algebra acting on a
//! representation, the generic rank of the module they span, and the
//! resulting bound on the number of algebraically independent invariants.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactmath::{rank_of_rows, ExactMatrix, FieldSpec, MultiPoly, Scalar};
use crate::liealg::{squarezero_basis, standard_basis, AlgebraKind, LieBasis};
use crate::reptheory::{induced_derivative_action, rep_dim, RepExpr};

/// The derivation `Σ_j (Σ_k A[j][k] x_k) ∂/∂x_j` on polynomials in `dim` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearVectorField {
    coeff: ExactMatrix,
}

impl LinearVectorField {
    pub fn dim(&self) -> usize {
        self.coeff.rows()
    }

    pub fn coeff(&self) -> &ExactMatrix {
        &self.coeff
    }

    pub fn field(&self) -> FieldSpec {
        self.coeff.field()
    }

    /// `Σ x_i ∂/∂x_i`.
    pub fn euler(field: FieldSpec, dim: usize) -> Self {
        Self { coeff: ExactMatrix::identity(field, dim) }
    }

    /// The linear form multiplying `∂/∂x_j`.
    pub fn component(&self, j: usize) -> MultiPoly {
        MultiPoly::linear(self.field(), self.coeff.row(j))
    }

    /// Applies the derivation to a polynomial in `dim` variables.
    pub fn apply(&self, p: &MultiPoly) -> Result<MultiPoly> {
        if p.nvars() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "field on {} variables applied to a polynomial in {}",
                self.dim(),
                p.nvars()
            )));
        }
        let mut out = MultiPoly::zero(self.field(), self.dim());
        for j in 0..self.dim() {
            let dp = p.diff(j)?;
            if dp.is_zero() {
                continue;
            }
            out = out.add(&self.component(j).mul(&dp));
        }
        Ok(out)
    }

    /// Value of the field at a point: the vector `A · x`.
    pub fn at(&self, point: &[Scalar]) -> Result<Vec<Scalar>> {
        self.coeff.mul_vec(point)
    }
}

pub fn vector_field(a_rep: &ExactMatrix) -> Result<LinearVectorField> {
    a_rep.require_square()?;
    Ok(LinearVectorField { coeff: a_rep.clone() })
}

/// The invariant derivation `D_A = Σ a_ik x_ji ∂/∂x_jk` on functions of an
/// n×n matrix `X`, with variables flattened row-major (`x_11, x_12, …, x_nn`).
/// Its component on `x_jk` is `(X A)_jk`, i.e. the field `X ↦ X A`.
pub fn group_derivation(a: &ExactMatrix) -> Result<LinearVectorField> {
    a.require_square()?;
    let n = a.rows();
    let mut c = ExactMatrix::zeros(a.field(), n * n, n * n);
    for j in 0..n {
        for k in 0..n {
            for i in 0..n {
                c.set(j * n + k, j * n + i, a.get(i, k).clone());
            }
        }
    }
    Ok(LinearVectorField { coeff: c })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Strategy {
    RandomEval,
    Symbolic,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::RandomEval => "RandomEval",
            Strategy::Symbolic => "Symbolic",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "random" | "randomeval" | "random-eval" => Ok(Strategy::RandomEval),
            "symbolic" => Ok(Strategy::Symbolic),
            _ => Err(Error::InvalidParameter(format!("unknown strategy {s:?}"))),
        }
    }
}

pub const DEFAULT_PRIME: u64 = 32003;
pub const DEFAULT_TRIALS: u32 = 5;
pub const DEFAULT_SYMBOLIC_MAX_N: usize = 12;
/// Smallest prime accepted for random evaluation over GF(p).
pub const MIN_RANDOM_PRIME: u64 = 1000;
/// Integer sample range `[-RATIONAL_SAMPLE_RADIUS, RATIONAL_SAMPLE_RADIUS]` over ℚ.
pub const RATIONAL_SAMPLE_RADIUS: i64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankOptions {
    pub strategy: Strategy,
    pub trials: u32,
    pub seed: u64,
    /// Largest space dimension accepted by the symbolic strategy.
    pub symbolic_max_n: usize,
}

impl Default for RankOptions {
    fn default() -> Self {
        Self {
            strategy: Strategy::RandomEval,
            trials: DEFAULT_TRIALS,
            seed: 0,
            symbolic_max_n: DEFAULT_SYMBOLIC_MAX_N,
        }
    }
}

impl RankOptions {
    pub fn random(trials: u32, seed: u64) -> Self {
        Self { strategy: Strategy::RandomEval, trials, seed, ..Self::default() }
    }

    pub fn symbolic() -> Self {
        Self { strategy: Strategy::Symbolic, ..Self::default() }
    }
}

fn ser_ratio<S: Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(q) => s.collect_str(&format!("{}/{}", q.numer(), q.denom())),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankReport {
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub r: usize,
    pub strategy: Strategy,
    pub trials: u32,
    pub seed: Option<u64>,
    pub field: FieldSpec,
    /// Upper bound on the probability that `r` is below the generic rank.
    #[serde(serialize_with = "ser_ratio")]
    pub failure_bound: Option<BigRational>,
}

/// Size of the set evaluation points are drawn from, coordinate-wise.
pub fn sample_set_size(field: FieldSpec) -> u64 {
    match field {
        FieldSpec::Rationals => 2 * RATIONAL_SAMPLE_RADIUS as u64 + 1,
        FieldSpec::Prime(p) => p,
    }
}

/// `(min(m, N) / |S|)^trials`: every nonzero minor of the evaluation matrix
/// has degree at most `min(m, N)` in the coordinates.
pub fn failure_bound(m: usize, n: usize, field: FieldSpec, trials: u32) -> BigRational {
    let deg = BigInt::from(m.min(n));
    let size = BigInt::from(sample_set_size(field));
    let base = BigRational::new(deg, size);
    (0..trials).fold(BigRational::one(), |acc, _| acc * &base)
}

fn check_fields(fields: &[LinearVectorField]) -> Result<(usize, FieldSpec)> {
    let first = fields
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty list of vector fields".into()))?;
    let (n, field) = (first.dim(), first.field());
    for f in fields {
        if f.dim() != n {
            return Err(Error::DimensionMismatch(format!("fields of dimension {n} and {}", f.dim())));
        }
        if f.field() != field {
            return Err(Error::FieldMismatch(field, f.field()));
        }
    }
    Ok((n, field))
}

/// Matrix whose i-th row is the value of field i at `point`.
pub fn evaluation_matrix(fields: &[LinearVectorField], point: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
    fields.iter().map(|f| f.at(point)).collect()
}

/// Rank of the evaluation matrix at one point.
pub fn rank_at(fields: &[LinearVectorField], point: &[Scalar]) -> Result<usize> {
    let (_, field) = check_fields(fields)?;
    Ok(rank_of_rows(field, &evaluation_matrix(fields, point)?))
}

/// Coordinate-wise uniform point from the sample set of `field`.
pub fn random_point<R: Rng>(rng: &mut R, field: FieldSpec, n: usize) -> Vec<Scalar> {
    (0..n)
        .map(|_| match field {
            FieldSpec::Rationals => {
                Scalar::from_i64(field, rng.gen_range(-RATIONAL_SAMPLE_RADIUS..=RATIONAL_SAMPLE_RADIUS))
            }
            FieldSpec::Prime(p) => Scalar::from_i64(field, rng.gen_range(0..p) as i64),
        })
        .collect()
}

/// Deterministic generator for task `index` under `seed`.
pub fn task_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn generic_rank(fields: &[LinearVectorField], opts: &RankOptions) -> Result<RankReport> {
    let (n, field) = check_fields(fields)?;
    let m = fields.len();
    match opts.strategy {
        Strategy::RandomEval => {
            if opts.trials == 0 {
                return Err(Error::InvalidParameter("trials must be at least 1".into()));
            }
            if let FieldSpec::Prime(p) = field {
                if p <= MIN_RANDOM_PRIME {
                    return Err(Error::InvalidParameter(format!(
                        "random evaluation over GF({p}) needs p > {MIN_RANDOM_PRIME}"
                    )));
                }
            }
            let ranks = (0..opts.trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = task_rng(opts.seed, t as u64);
                    let point = random_point(&mut rng, field, n);
                    rank_at(fields, &point)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(RankReport {
                m,
                n,
                r: ranks.into_iter().max().unwrap_or(0),
                strategy: Strategy::RandomEval,
                trials: opts.trials,
                seed: Some(opts.seed),
                field,
                failure_bound: Some(failure_bound(m, n, field, opts.trials)),
            })
        }
        Strategy::Symbolic => {
            if n > opts.symbolic_max_n {
                return Err(Error::Unsupported(format!(
                    "symbolic rank refused for N = {n} > {} (raise the limit to override)",
                    opts.symbolic_max_n
                )));
            }
            let matrix: Vec<Vec<MultiPoly>> = fields
                .iter()
                .map(|f| (0..n).map(|j| f.component(j)).collect())
                .collect();
            Ok(RankReport {
                m,
                n,
                r: symbolic_rank(matrix),
                strategy: Strategy::Symbolic,
                trials: 0,
                seed: None,
                field,
                failure_bound: None,
            })
        }
    }
}

/// Rank over the field of rational functions, by fraction-free elimination
/// with full pivoting. The pivot is the nonzero entry of lowest total degree
/// (then fewest terms), which keeps intermediate minors small.
pub fn symbolic_rank(mut m: Vec<Vec<MultiPoly>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return 0;
    }
    let field = m[0][0].field();
    let nvars = m[0][0].nvars();
    let mut prev = MultiPoly::constant(Scalar::one(field), nvars);
    for k in 0..rows.min(cols) {
        let pivot = (k..rows)
            .flat_map(|i| (k..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[i][j].is_zero())
            .min_by_key(|&(i, j)| (m[i][j].degree(), m[i][j].num_terms()));
        let Some((pi, pj)) = pivot else {
            return k;
        };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        for i in k + 1..rows {
            for j in k + 1..cols {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = MultiPoly::zero(field, nvars);
        }
        prev = m[k][k].clone();
    }
    rows.min(cols)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub group: AlgebraKind,
    pub n: usize,
    pub rep: RepExpr,
    #[serde(rename = "N")]
    pub dim: usize,
    pub m: usize,
    pub r: usize,
    pub bound: usize,
    pub strategy: Strategy,
    pub trials: u32,
    pub seed: Option<u64>,
    #[serde(serialize_with = "ser_ratio")]
    pub failure_bound: Option<BigRational>,
    pub star_certified: bool,
    #[serde(skip)]
    pub field: FieldSpec,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

/// Basis used for the bound: the square-zero one when a construction
/// exists, else the standard basis. The flag reports which.
pub fn bound_basis(kind: AlgebraKind, n: usize, field: FieldSpec) -> Result<(LieBasis, bool)> {
    if kind.has_squarezero_basis() {
        Ok((squarezero_basis(kind, n, field)?, true))
    } else {
        Ok((standard_basis(kind, n, field)?, false))
    }
}

/// The fields `ρ_*(B)` for each basis element `B`.
pub fn induced_fields(basis: &LieBasis, expr: &RepExpr) -> Result<Vec<LinearVectorField>> {
    basis
        .elements
        .iter()
        .map(|b| vector_field(&induced_derivative_action(expr, b)?))
        .collect()
}

pub fn invariant_bound(
    kind: AlgebraKind,
    n: usize,
    expr: &RepExpr,
    field: FieldSpec,
    opts: &RankOptions,
) -> Result<BoundReport> {
    let (basis, star_certified) = bound_basis(kind, n, field)?;
    let dim = rep_dim(expr, basis.ambient);
    if dim == 0 {
        return Err(Error::InvalidParameter(format!("{expr} has dimension 0 for n = {n}")));
    }
    let fields = induced_fields(&basis, expr)?;
    let report = generic_rank(&fields, opts)?;
    let mut warnings = Vec::new();
    if !star_certified {
        warnings.push(format!(
            "{kind} has no square-zero basis; bound computed from the standard basis is not certified"
        ));
    }
    Ok(BoundReport {
        group: kind,
        n,
        rep: expr.clone(),
        dim,
        m: report.m,
        r: report.r,
        bound: dim - report.r,
        strategy: report.strategy,
        trials: report.trials,
        seed: report.seed,
        failure_bound: report.failure_bound,
        star_certified,
        field,
        warnings,
    })
}

/// Converts a failure bound to `f64` for display.
pub fn approx(q: &BigRational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::INFINITY) / q.denom().to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reptheory::parse_rep;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn vector_field_examples() {
        let z = vector_field(&ExactMatrix::zeros(Q, 3, 3)).unwrap();
        assert!((0..3).all(|j| z.component(j).is_zero()));
        // E12 on F^2 is y ∂/∂x
        let f = vector_field(&ExactMatrix::unit(Q, 2, 0, 1)).unwrap();
        assert_eq!(f.component(0), MultiPoly::var(Q, 2, 1));
        assert!(f.component(1).is_zero());
        let e = vector_field(&ExactMatrix::identity(Q, 4)).unwrap();
        assert_eq!(e, LinearVectorField::euler(Q, 4));
        assert!(vector_field(&ExactMatrix::zeros(Q, 2, 3)).is_err());
    }

    #[test]
    fn group_derivation_examples() {
        let z = group_derivation(&ExactMatrix::zeros(Q, 2, 2)).unwrap();
        assert!(z.coeff().is_zero());
        assert_eq!(group_derivation(&ExactMatrix::identity(Q, 3)).unwrap(), LinearVectorField::euler(Q, 9));
        // a = E12: D = x11 ∂/∂x12 + x21 ∂/∂x22, variables (x11, x12, x21, x22)
        let d = group_derivation(&ExactMatrix::unit(Q, 2, 0, 1)).unwrap();
        assert!(d.component(0).is_zero());
        assert_eq!(d.component(1), MultiPoly::var(Q, 4, 0));
        assert!(d.component(2).is_zero());
        assert_eq!(d.component(3), MultiPoly::var(Q, 4, 2));
    }

    #[test]
    fn sl2_on_standard_rep() {
        let b = standard_basis(AlgebraKind::Sl, 2, Q).unwrap();
        let fields = induced_fields(&b, &RepExpr::V).unwrap();
        let r = generic_rank(&fields, &RankOptions::symbolic()).unwrap();
        assert_eq!(r.r, 2);
        let one = [Scalar::one(Q), Scalar::one(Q)];
        assert_eq!(rank_at(&fields, &one).unwrap(), 2);
    }

    #[test]
    fn sl2_on_v_plus_sym2() {
        let b = standard_basis(AlgebraKind::Sl, 2, Q).unwrap();
        let fields = induced_fields(&b, &parse_rep("V + S2(V)").unwrap()).unwrap();
        let r = generic_rank(&fields, &RankOptions::symbolic()).unwrap();
        assert_eq!((r.m, r.n, r.r), (3, 5, 3));
    }

    #[test]
    fn rank_errors() {
        assert!(generic_rank(&[], &RankOptions::symbolic()).is_err());
        let small = FieldSpec::Prime(997);
        let f = [LinearVectorField::euler(small, 2)];
        assert!(generic_rank(&f, &RankOptions::random(3, 1)).is_err());
        let q = [LinearVectorField::euler(Q, 13)];
        assert!(matches!(generic_rank(&q, &RankOptions::symbolic()), Err(Error::Unsupported(_))));
        let opts = RankOptions { symbolic_max_n: 13, ..RankOptions::symbolic() };
        assert_eq!(generic_rank(&q, &opts).unwrap().r, 1);
        assert!(generic_rank(&q, &RankOptions::random(0, 1)).is_err());
        let mixed = [LinearVectorField::euler(Q, 2), LinearVectorField::euler(Q, 3)];
        assert!(generic_rank(&mixed, &RankOptions::symbolic()).is_err());
    }

    #[test]
    fn failure_bound_formula() {
        let b = failure_bound(21, 20, Q, 5);
        assert_eq!(b, BigRational::new(BigInt::from(20).pow(5), BigInt::from(2001).pow(5)));
        assert!(failure_bound(21, 20, FieldSpec::Prime(32003), 5) < b);
    }
}
