//! Representations built from the standard one by duals, direct sums, tensor
//! products and symmetric and exterior powers, together with the induced
//! action of Lie-algebra elements and group elements on them.
//!
//! Basis conventions:
//! - direct sums concatenate coordinates left to right;
//! - tensor products use row-major pairs `(a, b)`, matching [`ExactMatrix::kron`];
//! - `Sym(k, e)` uses one basis vector per multiset `i1 <= ... <= ik`, namely
//!   the sum of the distinct tensors `w_{σ(1)} ⊗ ... ⊗ w_{σ(k)}` (so
//!   `v1v2 = v1⊗v2 + v2⊗v1` and `v1v1 = v1⊗v1`), which needs no division;
//! - `Ext(k, e)` uses `w_{i1} ∧ ... ∧ w_{ik}`, `i1 < ... < ik`, in lexicographic order;
//! - duals carry the dual basis; a Lie-algebra element acts by `-Aᵀ`, a
//!   group element by `(g⁻¹)ᵀ`.

mod parse;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

pub use parse::parse_rep;

use crate::error::{Error, Result};
use crate::exactmath::{ExactMatrix, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RepExpr {
    V,
    Dual(Box<RepExpr>),
    Sum(Box<RepExpr>, Box<RepExpr>),
    Tensor(Box<RepExpr>, Box<RepExpr>),
    Sym(u32, Box<RepExpr>),
    Ext(u32, Box<RepExpr>),
}

impl RepExpr {
    pub fn dual(self) -> Self {
        RepExpr::Dual(Box::new(self))
    }

    /// Degree in `t` of the induced action of `I + tU` for square-zero `U`.
    pub fn weight(&self) -> u32 {
        match self {
            RepExpr::V => 1,
            RepExpr::Dual(e) => e.weight(),
            RepExpr::Sum(a, b) => a.weight().max(b.weight()),
            RepExpr::Tensor(a, b) => a.weight() + b.weight(),
            RepExpr::Sym(k, e) | RepExpr::Ext(k, e) => k * e.weight(),
        }
    }
}

impl fmt::Display for RepExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepExpr::V => write!(f, "V"),
            RepExpr::Dual(e) => match **e {
                RepExpr::Sum(..) | RepExpr::Tensor(..) => write!(f, "({e})*"),
                _ => write!(f, "{e}*"),
            },
            RepExpr::Sum(a, b) => match **b {
                RepExpr::Sum(..) => write!(f, "{a} + ({b})"),
                _ => write!(f, "{a} + {b}"),
            },
            RepExpr::Tensor(a, b) => {
                let wrap = |e: &RepExpr| matches!(e, RepExpr::Sum(..));
                let left = if wrap(a) { format!("({a})") } else { a.to_string() };
                let right = if wrap(b) || matches!(**b, RepExpr::Tensor(..)) {
                    format!("({b})")
                } else {
                    b.to_string()
                };
                write!(f, "{left} * {right}")
            }
            RepExpr::Sym(k, e) => write!(f, "S{k}({e})"),
            RepExpr::Ext(k, e) => write!(f, "E{k}({e})"),
        }
    }
}

impl Serialize for RepExpr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepBasis {
    pub expr: RepExpr,
    pub n: usize,
    pub dim: usize,
    pub labels: Vec<String>,
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

pub fn rep_dim(expr: &RepExpr, n: usize) -> usize {
    match expr {
        RepExpr::V => n,
        RepExpr::Dual(e) => rep_dim(e, n),
        RepExpr::Sum(a, b) => rep_dim(a, n) + rep_dim(b, n),
        RepExpr::Tensor(a, b) => rep_dim(a, n) * rep_dim(b, n),
        RepExpr::Sym(k, e) => {
            let d = rep_dim(e, n);
            if d == 0 {
                0
            } else {
                binomial(d + *k as usize - 1, *k as usize)
            }
        }
        RepExpr::Ext(k, e) => binomial(rep_dim(e, n), *k as usize),
    }
}

fn needs_parens(label: &str) -> bool {
    label.contains(['.', '^', '⊗', '('])
}

fn wrap(label: &str) -> String {
    if needs_parens(label) {
        format!("({label})")
    } else {
        label.to_string()
    }
}

pub fn rep_basis(expr: &RepExpr, n: usize) -> RepBasis {
    let labels = labels(expr, n);
    RepBasis { expr: expr.clone(), n, dim: labels.len(), labels }
}

fn labels(expr: &RepExpr, n: usize) -> Vec<String> {
    match expr {
        RepExpr::V => (1..=n).map(|i| format!("v{i}")).collect(),
        RepExpr::Dual(e) => labels(e, n).iter().map(|l| format!("{}*", wrap(l))).collect(),
        RepExpr::Sum(a, b) => {
            let mut out = labels(a, n);
            out.extend(labels(b, n));
            out
        }
        RepExpr::Tensor(a, b) => {
            let (la, lb) = (labels(a, n), labels(b, n));
            la.iter()
                .flat_map(|x| lb.iter().map(move |y| format!("{}⊗{}", wrap(x), wrap(y))))
                .collect()
        }
        RepExpr::Sym(k, e) => {
            let inner = labels(e, n);
            multisets(inner.len(), *k as usize)
                .iter()
                .map(|m| m.iter().map(|&i| wrap(&inner[i])).collect::<Vec<_>>().join("."))
                .collect()
        }
        RepExpr::Ext(k, e) => {
            let inner = labels(e, n);
            combinations(inner.len(), *k as usize)
                .iter()
                .map(|m| m.iter().map(|&i| wrap(&inner[i])).collect::<Vec<_>>().join("^"))
                .collect()
        }
    }
}

/// Non-decreasing k-tuples from `0..d`, lexicographic.
pub(crate) fn multisets(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            go(i, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, d, k, &mut Vec::new(), &mut out);
    out
}

/// Strictly increasing k-tuples from `0..d`, lexicographic.
pub(crate) fn combinations(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            go(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, d, k, &mut Vec::new(), &mut out);
    out
}

fn index_of(tuples: &[Vec<usize>]) -> HashMap<Vec<usize>, usize> {
    tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect()
}

fn check_base(a: &ExactMatrix) -> Result<()> {
    a.require_square()
}

fn empty_guard(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidParameter("representation has dimension 0".into()));
    }
    Ok(())
}

/// Matrix of the Lie-algebra element `a` acting on the representation space.
pub fn induced_derivative_action(expr: &RepExpr, a: &ExactMatrix) -> Result<ExactMatrix> {
    check_base(a)?;
    let f = a.field();
    match expr {
        RepExpr::V => Ok(a.clone()),
        RepExpr::Dual(e) => Ok(induced_derivative_action(e, a)?.transpose().neg()),
        // zero-dimensional summands contribute nothing
        RepExpr::Sum(l, r) if rep_dim(l, a.rows()) == 0 => induced_derivative_action(r, a),
        RepExpr::Sum(l, r) if rep_dim(r, a.rows()) == 0 => induced_derivative_action(l, a),
        RepExpr::Sum(l, r) => {
            ExactMatrix::block_diag(&[induced_derivative_action(l, a)?, induced_derivative_action(r, a)?])
        }
        RepExpr::Tensor(l, r) => {
            let (x, y) = (induced_derivative_action(l, a)?, induced_derivative_action(r, a)?);
            let il = ExactMatrix::identity(f, x.rows());
            let ir = ExactMatrix::identity(f, y.rows());
            x.kron(&ir)?.add(&il.kron(&y)?)
        }
        RepExpr::Sym(k, e) => {
            let b = induced_derivative_action(e, a)?;
            let d = b.rows();
            let basis = multisets(d, *k as usize);
            empty_guard(basis.len())?;
            let index = index_of(&basis);
            let mut out = ExactMatrix::zeros(f, basis.len(), basis.len());
            for (col, alpha) in basis.iter().enumerate() {
                let mut prev = None;
                for (s, &i) in alpha.iter().enumerate() {
                    if prev == Some(i) {
                        continue;
                    }
                    prev = Some(i);
                    for l in 0..d {
                        let coeff = b.get(l, i);
                        if coeff.is_zero() {
                            continue;
                        }
                        let mut gamma = alpha.clone();
                        gamma[s] = l;
                        gamma.sort_unstable();
                        let mult = gamma.iter().filter(|&&g| g == l).count() as i64;
                        let row = index[&gamma];
                        let v = out.get(row, col) + &(coeff * &Scalar::from_i64(f, mult));
                        out.set(row, col, v);
                    }
                }
            }
            Ok(out)
        }
        RepExpr::Ext(k, e) => {
            let b = induced_derivative_action(e, a)?;
            let d = b.rows();
            let basis = combinations(d, *k as usize);
            empty_guard(basis.len())?;
            let index = index_of(&basis);
            let mut out = ExactMatrix::zeros(f, basis.len(), basis.len());
            for (col, alpha) in basis.iter().enumerate() {
                for (s, &i) in alpha.iter().enumerate() {
                    for l in 0..d {
                        let coeff = b.get(l, i);
                        if coeff.is_zero() || (l != i && alpha.contains(&l)) {
                            continue;
                        }
                        let mut gamma = alpha.clone();
                        gamma[s] = l;
                        let sign = sort_with_sign(&mut gamma);
                        let row = index[&gamma];
                        let v = out.get(row, col) + &(coeff * &Scalar::from_i64(f, sign));
                        out.set(row, col, v);
                    }
                }
            }
            Ok(out)
        }
    }
}

/// Sorts distinct entries in place, returning the permutation sign.
fn sort_with_sign(v: &mut [usize]) -> i64 {
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    sign
}

/// Distinct permutations of a sorted multiset.
fn distinct_permutations(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = sorted.to_vec();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

/// Matrix of the group element `g` acting on the representation space.
pub fn induced_group_action(expr: &RepExpr, g: &ExactMatrix) -> Result<ExactMatrix> {
    check_base(g)?;
    if g.det()?.is_zero() {
        return Err(Error::Singular);
    }
    group_action(expr, g)
}

fn group_action(expr: &RepExpr, g: &ExactMatrix) -> Result<ExactMatrix> {
    let f = g.field();
    match expr {
        RepExpr::V => Ok(g.clone()),
        RepExpr::Dual(e) => Ok(group_action(e, g)?.inverse()?.transpose()),
        RepExpr::Sum(l, r) if rep_dim(l, g.rows()) == 0 => group_action(r, g),
        RepExpr::Sum(l, r) if rep_dim(r, g.rows()) == 0 => group_action(l, g),
        RepExpr::Sum(l, r) => ExactMatrix::block_diag(&[group_action(l, g)?, group_action(r, g)?]),
        RepExpr::Tensor(l, r) => group_action(l, g)?.kron(&group_action(r, g)?),
        RepExpr::Sym(k, e) => {
            let h = group_action(e, g)?;
            let basis = multisets(h.rows(), *k as usize);
            empty_guard(basis.len())?;
            let mut out = ExactMatrix::zeros(f, basis.len(), basis.len());
            for (col, alpha) in basis.iter().enumerate() {
                let orbit = distinct_permutations(alpha);
                for (row, beta) in basis.iter().enumerate() {
                    let mut acc = Scalar::zero(f);
                    for tau in &orbit {
                        let mut term = Scalar::one(f);
                        for (&bs, &ts) in beta.iter().zip(tau) {
                            term = &term * h.get(bs, ts);
                            if term.is_zero() {
                                break;
                            }
                        }
                        acc = &acc + &term;
                    }
                    out.set(row, col, acc);
                }
            }
            Ok(out)
        }
        RepExpr::Ext(k, e) => {
            let h = group_action(e, g)?;
            let basis = combinations(h.rows(), *k as usize);
            empty_guard(basis.len())?;
            let mut out = ExactMatrix::zeros(f, basis.len(), basis.len());
            for (col, alpha) in basis.iter().enumerate() {
                for (row, beta) in basis.iter().enumerate() {
                    let minor: Vec<Vec<Scalar>> = beta
                        .iter()
                        .map(|&r| alpha.iter().map(|&c| h.get(r, c).clone()).collect())
                        .collect();
                    out.set(row, col, ExactMatrix::from_rows(f, minor)?.det()?);
                }
            }
            Ok(out)
        }
    }
}
