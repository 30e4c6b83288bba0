//! Sparse multivariate polynomials with dense exponent vectors.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::field::{FieldSpec, Scalar};
use crate::error::{Error, Result};

/// Exponent vector ordered graded-lexicographically: total degree first,
/// then lexicographic with the first variable most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    field: FieldSpec,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero(field: FieldSpec, nvars: usize) -> Self {
        Self { nvars, field, terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar, nvars: usize) -> Self {
        let mut p = Self::zero(c.field(), nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(field: FieldSpec, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable {i} out of range");
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial::var(nvars, i), Scalar::one(field));
        p
    }

    /// `Σ coeffs[i] · x_i`.
    pub fn linear(field: FieldSpec, coeffs: &[Scalar]) -> Self {
        let nvars = coeffs.len();
        let mut p = Self::zero(field, nvars);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(nvars, i), c.clone());
        }
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs with integer
    /// coefficients; repeated monomials are merged.
    pub fn from_int_terms(field: FieldSpec, nvars: usize, terms: &[(i64, &[u32])]) -> Self {
        let mut p = Self::zero(field, nvars);
        for (c, e) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e.to_vec()), Scalar::from_i64(field, *c));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| Scalar::zero(self.field))
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = &*existing + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomials over different variable sets");
        assert_eq!(self.field, other.field, "polynomials over different fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one(self.field))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.field, self.nvars);
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            out.terms.insert(m.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(self.field, self.nvars);
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                out.add_term(ma.mul(mb), a * b);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(Scalar::one(self.field), self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative. The exponent is mapped into the field, so
    /// in characteristic p a term `x^(kp)` differentiates to zero.
    pub fn diff(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::InvalidParameter(format!(
                "variable index {var} out of range for {} variables",
                self.nvars
            )));
        }
        let mut out = Self::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[var] -= 1;
            out.add_term(dm, c * &Scalar::from_i64(self.field, e as i64));
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars
            )));
        }
        let mut acc = Scalar::zero(self.field);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Quotient `self / d` when `d` divides `self` exactly, else `None`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        self.check_compatible(d);
        let (dm, dc) = d.leading_term()?;
        let dinv = dc.inv().expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.field, self.nvars);
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(dm)?;
            let qc = rc * &dinv;
            let mut t = Self::zero(self.field, self.nvars);
            t.add_term(qm.clone(), qc.clone());
            rem = rem.sub(&t.mul(d));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Renders with the given variable names, highest grlex term first.
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut coeff = c.to_string();
            let negative = coeff.starts_with('-');
            if negative {
                coeff.remove(0);
            }
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    let name = names.get(v).map_or_else(|| format!("x{}", v + 1), |s| s.to_string());
                    if e == 1 { name } else { format!("{name}^{e}") }
                })
                .collect();
            if vars.is_empty() {
                out.push_str(&coeff);
            } else {
                if coeff != "1" {
                    out.push_str(&coeff);
                    out.push('*');
                }
                out.push_str(&vars.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn diff_examples() {
        // x^2 y
        let p = MultiPoly::from_int_terms(Q, 2, &[(1, &[2, 1])]);
        let expect = MultiPoly::from_int_terms(Q, 2, &[(2, &[1, 1])]);
        assert_eq!(p.diff(0).unwrap(), expect);
        let gf2 = FieldSpec::Prime(2);
        let sq = MultiPoly::from_int_terms(gf2, 1, &[(1, &[2])]);
        assert!(sq.diff(0).unwrap().is_zero());
        assert!(p.diff(2).is_err());
    }

    #[test]
    fn eval_examples() {
        let seven = MultiPoly::constant(Scalar::from_i64(Q, 7), 2);
        let pt = [Scalar::from_i64(Q, -4), Scalar::from_i64(Q, 9)];
        assert_eq!(seven.eval(&pt).unwrap(), Scalar::from_i64(Q, 7));
        let p = MultiPoly::from_int_terms(Q, 2, &[(1, &[2, 0]), (-1, &[0, 1])]);
        let pt = [Scalar::from_i64(Q, 3), Scalar::from_i64(Q, 2)];
        assert_eq!(p.eval(&pt).unwrap(), Scalar::from_i64(Q, 7));
        // t^2 - z u at (z, t, u) = (1, 2, 3)
        let d = MultiPoly::from_int_terms(Q, 3, &[(1, &[0, 2, 0]), (-1, &[1, 0, 1])]);
        let pt: Vec<_> = [1, 2, 3].iter().map(|&v| Scalar::from_i64(Q, v)).collect();
        assert_eq!(d.eval(&pt).unwrap(), Scalar::from_i64(Q, 1));
        assert!(d.eval(&pt[..2]).is_err());
    }

    #[test]
    fn exact_division() {
        let x = MultiPoly::var(Q, 2, 0);
        let y = MultiPoly::var(Q, 2, 1);
        let a = x.add(&y);
        let b = x.sub(&y).add(&MultiPoly::constant(Scalar::from_i64(Q, 3), 2));
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&b), Some(a));
        assert_eq!(x.div_exact(&y), None);
        assert!(prod.add(&x).div_exact(&b).is_none());
    }

    #[test]
    fn display_is_grlex() {
        let p = MultiPoly::from_int_terms(Q, 3, &[(1, &[1, 0, 1]), (-1, &[0, 2, 0]), (4, &[0, 0, 0])]);
        assert_eq!(p.display_with(&["z", "t", "u"]), "z*u - t^2 + 4");
    }
}
