//! Explicit invariant functions, exact checks that a vector field or a group
//! element preserves them, and the first-integral classification of linear
//! vector fields in the plane.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{rational_sqrt, ExactMatrix, FieldSpec, MultiPoly, Scalar};
use crate::invbound::{task_rng, LinearVectorField};
use crate::liealg::{is_square_zero, LieBasis};
use crate::reptheory::{induced_group_action, rep_dim, RepExpr};

/// Coordinate names of the five-dimensional examples: `v = x v1 + y v2` and
/// the symmetric part `(z, t, u)`.
pub const XYZTU: [&str; 5] = ["x", "y", "z", "t", "u"];

/// `numerator / denominator`, polynomials in `nvars` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalInvariant {
    pub numerator: MultiPoly,
    pub denominator: MultiPoly,
}

impl RationalInvariant {
    pub fn new(numerator: MultiPoly, denominator: MultiPoly) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        if numerator.nvars() != denominator.nvars() || numerator.field() != denominator.field() {
            return Err(Error::DimensionMismatch("numerator and denominator disagree".into()));
        }
        Ok(Self { numerator, denominator })
    }

    pub fn polynomial(p: MultiPoly) -> Self {
        let one = MultiPoly::constant(Scalar::one(p.field()), p.nvars());
        Self { numerator: p, denominator: one }
    }

    pub fn nvars(&self) -> usize {
        self.numerator.nvars()
    }

    pub fn field(&self) -> FieldSpec {
        self.numerator.field()
    }

    /// `(numerator, denominator)` values at a point.
    pub fn eval_parts(&self, point: &[Scalar]) -> Result<(Scalar, Scalar)> {
        Ok((self.numerator.eval(point)?, self.denominator.eval(point)?))
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        let num = self.numerator.display_with(names);
        if self.denominator.degree() == Some(0) && self.denominator.leading_term().is_some_and(|(_, c)| c.is_one()) {
            num
        } else {
            format!("({num})/({})", self.denominator.display_with(names))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum InvariantName {
    I1,
    I1dual,
    I2,
}

impl fmt::Display for InvariantName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvariantName::I1 => "I1",
            InvariantName::I1dual => "I1dual",
            InvariantName::I2 => "I2",
        })
    }
}

impl FromStr for InvariantName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I1" => Ok(InvariantName::I1),
            "I1dual" => Ok(InvariantName::I1dual),
            "I2" => Ok(InvariantName::I2),
            _ => Err(Error::InvalidParameter(format!("unknown invariant {s:?} (I1, I1dual, I2)"))),
        }
    }
}

/// The invariants of `V ⊕ S²(V)` for 2×2 groups, in coordinates (x, y, z, t, u):
///
/// - `I1 = (2xyt - x²u - y²z) / (t² - zu)`, the inverse metric evaluated on v;
/// - `I1dual = x²z + 2xyt + y²u`, the form `s*(v, v)` for `s* ∈ S²(V*)`;
/// - `I2 = zu - t²`, the discriminant.
pub fn builtin_invariant(name: InvariantName, field: FieldSpec) -> RationalInvariant {
    let p = |terms: &[(i64, &[u32])]| MultiPoly::from_int_terms(field, 5, terms);
    match name {
        InvariantName::I1 => RationalInvariant {
            numerator: p(&[(2, &[1, 1, 0, 1, 0]), (-1, &[2, 0, 0, 0, 1]), (-1, &[0, 2, 1, 0, 0])]),
            denominator: p(&[(1, &[0, 0, 0, 2, 0]), (-1, &[0, 0, 1, 0, 1])]),
        },
        InvariantName::I1dual => RationalInvariant::polynomial(p(&[
            (1, &[2, 0, 1, 0, 0]),
            (2, &[1, 1, 0, 1, 0]),
            (1, &[0, 2, 0, 0, 1]),
        ])),
        InvariantName::I2 => {
            RationalInvariant::polynomial(p(&[(1, &[0, 0, 1, 0, 1]), (-1, &[0, 0, 0, 2, 0])]))
        }
    }
}

/// Whether the derivation annihilates `P/Q`: `X(P)·Q − P·X(Q) = 0` exactly.
pub fn annihilation_check(field: &LinearVectorField, inv: &RationalInvariant) -> Result<bool> {
    if field.dim() != inv.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "field on {} variables, invariant on {}",
            field.dim(),
            inv.nvars()
        )));
    }
    let (p, q) = (&inv.numerator, &inv.denominator);
    let lhs = field.apply(p)?.mul(q);
    let rhs = p.mul(&field.apply(q)?);
    Ok(lhs.sub(&rhs).is_zero())
}

/// Redraw budget per sample when a denominator vanishes.
const MAX_REDRAWS: usize = 64;

fn random_scalar_t<R: Rng>(rng: &mut R, field: FieldSpec) -> Scalar {
    loop {
        let num: i64 = rng.gen_range(-9..=9);
        let den: i64 = rng.gen_range(1..=5);
        if let Ok(t) = Scalar::from_ratio(field, &BigInt::from(num), &BigInt::from(den)) {
            if !t.is_zero() {
                return t;
            }
        }
    }
}

fn random_vector<R: Rng>(rng: &mut R, field: FieldSpec, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| Scalar::from_i64(field, rng.gen_range(-20..=20))).collect()
}

/// Cross-multiplied check of `I(g·v) = I(v)` at one point, with `rep` the
/// matrix of `g` on the representation space. `None` when a denominator vanishes.
fn invariant_at(inv: &RationalInvariant, rep: &ExactMatrix, v: &[Scalar]) -> Result<Option<bool>> {
    let (p0, q0) = inv.eval_parts(v)?;
    let gv = rep.mul_vec(v)?;
    let (p1, q1) = inv.eval_parts(&gv)?;
    if q0.is_zero() || q1.is_zero() {
        return Ok(None);
    }
    Ok(Some(&p1 * &q0 == &p0 * &q1))
}

fn check_dims(expr: &RepExpr, ambient: usize, inv: &RationalInvariant) -> Result<()> {
    let dim = rep_dim(expr, ambient);
    if dim != inv.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "{expr} has dimension {dim} but the invariant has {} variables",
            inv.nvars()
        )));
    }
    Ok(())
}

/// Checks `I(g·v) = I(v)` for one fixed group element at `samples` random points.
pub fn invariant_under(
    expr: &RepExpr,
    inv: &RationalInvariant,
    g: &ExactMatrix,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    check_dims(expr, g.rows(), inv)?;
    let rep = induced_group_action(expr, g)?;
    let field = inv.field();
    for s in 0..samples {
        let mut rng = task_rng(seed, s as u64);
        let mut verdict = None;
        for _ in 0..MAX_REDRAWS {
            let v = random_vector(&mut rng, field, inv.nvars());
            if let Some(ok) = invariant_at(inv, &rep, &v)? {
                verdict = Some(ok);
                break;
            }
        }
        match verdict {
            Some(true) => {}
            Some(false) => return Ok(false),
            None => return Err(Error::Domain("denominator vanished at every drawn point".into())),
        }
    }
    Ok(true)
}

/// Tests invariance under random words of length 1 to 3 in the generators
/// `I + tB`, `B` from a square-zero basis, each acting through `expr`.
pub fn group_invariance_check(
    expr: &RepExpr,
    inv: &RationalInvariant,
    basis: &LieBasis,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    if basis.is_empty() {
        return Err(Error::InvalidParameter("empty basis".into()));
    }
    for (i, b) in basis.elements.iter().enumerate() {
        if !is_square_zero(b)? {
            return Err(Error::InvalidParameter(format!(
                "basis element {} ({}) is not square-zero",
                i, basis.labels[i]
            )));
        }
    }
    check_dims(expr, basis.ambient, inv)?;
    let field = basis.field;
    let id = ExactMatrix::identity(field, basis.ambient);
    for s in 0..samples {
        let mut rng = task_rng(seed, s as u64);
        let len = rng.gen_range(1..=3);
        let mut g = id.clone();
        for _ in 0..len {
            let b = &basis.elements[rng.gen_range(0..basis.len())];
            let t = random_scalar_t(&mut rng, field);
            g = g.mul(&id.add(&b.scale(&t))?)?;
        }
        let rep = induced_group_action(expr, &g)?;
        let mut verdict = None;
        for _ in 0..MAX_REDRAWS {
            let v = random_vector(&mut rng, field, inv.nvars());
            if let Some(ok) = invariant_at(inv, &rep, &v)? {
                verdict = Some(ok);
                break;
            }
        }
        match verdict {
            Some(true) => {}
            Some(false) => return Ok(false),
            None => return Err(Error::Domain("denominator vanished at every drawn point".into())),
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum IntegralKind {
    Rational,
    Polynomial,
    TranscendentalOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassCase {
    /// `A = αI`, annihilator `λ − α`.
    Scalar,
    /// `αβ = 0`, including the nilpotent case.
    Singular,
    /// `α = β ≠ 0` with annihilator `(λ − α)²`.
    Jordan,
    /// `α ≠ β`, `αβ ≠ 0`, `β/α ∈ ℚ`.
    DistinctRationalRatio,
    /// `α ≠ β`, `αβ ≠ 0`, `β/α ∉ ℚ`.
    DistinctIrrationalRatio,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FirstIntegralClass {
    pub class: IntegralKind,
    pub witness: Option<String>,
    pub case: ClassCase,
}

fn rat(s: &Scalar) -> &BigRational {
    s.as_rational().expect("rational matrix")
}

fn fmt_q(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn linear_form(coeffs: &[Scalar]) -> String {
    MultiPoly::linear(FieldSpec::Rationals, coeffs).display_with(&["x", "y"])
}

/// Classifies the first integrals of the linear field `ẋ = A x` on the plane
/// for a nonzero rational 2×2 matrix `A`, by eigenvalue data alone.
pub fn classify_2x2(a: &ExactMatrix) -> Result<FirstIntegralClass> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::InvalidParameter(format!("expected a 2x2 matrix, got {}x{}", a.rows(), a.cols())));
    }
    if a.field() != FieldSpec::Rationals {
        return Err(Error::InvalidParameter("classification needs a rational matrix".into()));
    }
    if a.is_zero() {
        return Err(Error::InvalidParameter("zero matrix has no nonconstant dynamics".into()));
    }
    let tau = rat(&a.trace()?).clone();
    let delta = rat(&a.det()?).clone();
    let disc = &tau * &tau - BigRational::from_integer(4.into()) * &delta;
    let scalar = a.get(0, 1).is_zero() && a.get(1, 0).is_zero() && a.get(0, 0) == a.get(1, 1);

    if scalar {
        return Ok(FirstIntegralClass {
            class: IntegralKind::Rational,
            witness: Some("y/x".into()),
            case: ClassCase::Scalar,
        });
    }
    if delta.is_zero() {
        // linear first integral: a covector c with cᵀ A = 0
        let c = a.transpose().kernel_basis().into_iter().next().expect("singular matrix has a left kernel");
        return Ok(FirstIntegralClass {
            class: IntegralKind::Polynomial,
            witness: Some(linear_form(&c)),
            case: ClassCase::Singular,
        });
    }
    if disc.is_zero() {
        // N = A - αI is nonzero with N² = 0; for a nonzero row r_j of N the
        // coordinates x' = r_j·v, y' = v_j give ẋ' = αx', ẏ' = x' + αy'.
        let alpha = &tau / BigRational::from_integer(2.into());
        let alpha_s = Scalar::Rational(alpha.clone());
        let nil = a.sub(&ExactMatrix::identity(FieldSpec::Rationals, 2).scale(&alpha_s))?;
        let j = (0..2).find(|&j| nil.row(j).iter().any(|s| !s.is_zero())).expect("non-scalar");
        let xp = linear_form(nil.row(j));
        let yp = ["x", "y"][j];
        let coeff = if alpha.is_one() { String::new() } else { format!("({})*", fmt_q(&alpha)) };
        return Ok(FirstIntegralClass {
            class: IntegralKind::TranscendentalOnly,
            witness: Some(format!("x'*exp(-{coeff}y'/x') with x' = {xp}, y' = {yp}")),
            case: ClassCase::Jordan,
        });
    }
    let two = BigRational::from_integer(2.into());
    if let Some(root) = rational_sqrt(&disc) {
        let alpha = (&tau + &root) / &two;
        let beta = (&tau - &root) / &two;
        return Ok(FirstIntegralClass {
            class: IntegralKind::Rational,
            witness: Some(format!(
                "eigenvalues {} and {}, ratio {}",
                fmt_q(&alpha),
                fmt_q(&beta),
                fmt_q(&(&beta / &alpha))
            )),
            case: ClassCase::DistinctRationalRatio,
        });
    }
    if tau.is_zero() {
        let witness = if delta.is_negative() {
            "eigenvalues ±sqrt(d), ratio -1"
        } else {
            "eigenvalues ±i*sqrt(d), ratio -1"
        };
        return Ok(FirstIntegralClass {
            class: IntegralKind::Rational,
            witness: Some(witness.into()),
            case: ClassCase::DistinctRationalRatio,
        });
    }
    Ok(FirstIntegralClass {
        class: IntegralKind::TranscendentalOnly,
        witness: None,
        case: ClassCase::DistinctIrrationalRatio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invbound::{induced_fields, vector_field};
    use crate::liealg::{squarezero_basis, standard_basis, AlgebraKind};
    use crate::reptheory::{induced_derivative_action, parse_rep};

    const Q: FieldSpec = FieldSpec::Rationals;

    fn pt(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_i64(Q, x)).collect()
    }

    #[test]
    fn builtin_values() {
        let i2 = builtin_invariant(InvariantName::I2, Q);
        assert_eq!(i2.eval_parts(&pt(&[0, 0, 1, 2, 3])).unwrap().0, Scalar::from_i64(Q, -1));
        let i1 = builtin_invariant(InvariantName::I1, Q);
        assert_eq!(i1.eval_parts(&pt(&[1, 1, 0, 1, 0])).unwrap().0, Scalar::from_i64(Q, 2));
        let d = builtin_invariant(InvariantName::I1dual, Q);
        for (z, t, u) in [(3, -1, 7), (0, 5, 2)] {
            assert_eq!(d.eval_parts(&pt(&[1, 0, z, t, u])).unwrap().0, Scalar::from_i64(Q, z));
        }
        assert_eq!(i2.display_with(&XYZTU), "z*u - t^2");
        assert_eq!(i1.display_with(&XYZTU), "(-x^2*u + 2*x*y*t - y^2*z)/(-z*u + t^2)");
    }

    #[test]
    fn annihilation_examples() {
        let rep = parse_rep("V + S2(V)").unwrap();
        let c = RationalInvariant::polynomial(MultiPoly::constant(Scalar::from_i64(Q, 5), 5));
        let i2 = builtin_invariant(InvariantName::I2, Q);
        let sz = squarezero_basis(AlgebraKind::Sl, 2, Q).unwrap();
        for f in induced_fields(&sz, &rep).unwrap() {
            assert!(annihilation_check(&f, &c).unwrap());
            assert!(annihilation_check(&f, &i2).unwrap());
        }
        let euler = LinearVectorField::euler(Q, 5);
        assert!(!annihilation_check(&euler, &i2).unwrap());
        // X(I2) = 2 I2 for the Euler field
        let applied = euler.apply(&i2.numerator).unwrap();
        assert_eq!(applied, i2.numerator.scale(&Scalar::from_i64(Q, 2)));
        assert!(annihilation_check(&LinearVectorField::euler(Q, 4), &i2).is_err());
    }

    #[test]
    fn i1_under_gl2_standard_fields() {
        let rep = parse_rep("V + S2(V)").unwrap();
        let i1 = builtin_invariant(InvariantName::I1, Q);
        let gl = standard_basis(AlgebraKind::Gl, 2, Q).unwrap();
        for b in &gl.elements {
            let f = vector_field(&induced_derivative_action(&rep, b).unwrap()).unwrap();
            assert!(annihilation_check(&f, &i1).unwrap());
        }
    }

    #[test]
    fn group_checks() {
        let rep = parse_rep("V + S2(V)").unwrap();
        let i2 = builtin_invariant(InvariantName::I2, Q);
        let e12 = squarezero_basis(AlgebraKind::StrictUpper, 2, Q).unwrap();
        assert!(group_invariance_check(&rep, &i2, &e12, 20, 3).unwrap());
        let i1 = builtin_invariant(InvariantName::I1, Q);
        assert!(group_invariance_check(&rep, &i1, &e12, 20, 3).unwrap());
        let diag = ExactMatrix::from_ints(Q, [[2, 0], [0, 1]]);
        assert!(!invariant_under(&rep, &i2, &diag, 5, 3).unwrap());
        let not_sz = standard_basis(AlgebraKind::Sl, 2, Q).unwrap();
        assert!(group_invariance_check(&rep, &i2, &not_sz, 5, 3).is_err());
        assert!(group_invariance_check(&RepExpr::V, &i2, &e12, 5, 3).is_err());
    }

    #[test]
    fn classifier_examples() {
        let c = |rows: [[i64; 2]; 2]| classify_2x2(&ExactMatrix::from_ints(Q, rows)).unwrap();
        assert_eq!(c([[1, 0], [0, 2]]).class, IntegralKind::Rational);
        assert_eq!(c([[1, 1], [1, 2]]).class, IntegralKind::TranscendentalOnly);
        let nil = c([[0, 1], [0, 0]]);
        assert_eq!(nil.class, IntegralKind::Polynomial);
        assert_eq!(nil.witness.as_deref(), Some("y"));
        let jordan = c([[1, 0], [1, 1]]);
        assert_eq!(jordan.class, IntegralKind::TranscendentalOnly);
        assert_eq!(jordan.case, ClassCase::Jordan);
        assert_eq!(jordan.witness.as_deref(), Some("x'*exp(-y'/x') with x' = x, y' = y"));
        assert_eq!(c([[3, 0], [0, 0]]).class, IntegralKind::Polynomial);
        assert_eq!(c([[2, 0], [0, 2]]).case, ClassCase::Scalar);
        assert_eq!(c([[0, 1], [2, 0]]).class, IntegralKind::Rational);
        assert!(classify_2x2(&ExactMatrix::zeros(Q, 2, 2)).is_err());
        assert!(classify_2x2(&ExactMatrix::identity(Q, 3)).is_err());
    }
}
