//! Classical matrix Lie algebras, their square-zero bases, and the
//! characteristic-2 algebras `L(f)` of self-adjoint maps.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{rank_of_rows, ExactMatrix, FieldSpec, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraKind {
    Gl,
    Sl,
    So,
    Sp,
    StrictUpper,
}

impl AlgebraKind {
    pub const ALL: [AlgebraKind; 5] =
        [AlgebraKind::Gl, AlgebraKind::Sl, AlgebraKind::So, AlgebraKind::Sp, AlgebraKind::StrictUpper];

    /// Size of the matrices for parameter `n`; `sp` with parameter n lives in 2n×2n.
    pub fn ambient(&self, n: usize) -> usize {
        match self {
            AlgebraKind::Sp => 2 * n,
            _ => n,
        }
    }

    pub fn dim(&self, n: usize) -> usize {
        match self {
            AlgebraKind::Gl => n * n,
            AlgebraKind::Sl => n * n - 1,
            AlgebraKind::So | AlgebraKind::StrictUpper => n * (n - 1) / 2,
            AlgebraKind::Sp => 2 * n * n + n,
        }
    }

    fn min_n(&self) -> usize {
        match self {
            AlgebraKind::Gl | AlgebraKind::Sp => 1,
            _ => 2,
        }
    }

    /// Whether a square-zero basis construction is available.
    pub fn has_squarezero_basis(&self) -> bool {
        matches!(self, AlgebraKind::Sl | AlgebraKind::Sp | AlgebraKind::StrictUpper)
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraKind::Gl => "gl",
            AlgebraKind::Sl => "sl",
            AlgebraKind::So => "so",
            AlgebraKind::Sp => "sp",
            AlgebraKind::StrictUpper => "strict_upper",
        })
    }
}

impl FromStr for AlgebraKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(AlgebraKind::Gl),
            "sl" => Ok(AlgebraKind::Sl),
            "so" => Ok(AlgebraKind::So),
            "sp" => Ok(AlgebraKind::Sp),
            "strict_upper" | "strict-upper" | "upper" => Ok(AlgebraKind::StrictUpper),
            _ => Err(Error::InvalidParameter(format!("unknown algebra kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LieBasis {
    pub kind: AlgebraKind,
    pub n: usize,
    pub ambient: usize,
    pub field: FieldSpec,
    pub elements: Vec<ExactMatrix>,
    pub labels: Vec<String>,
}

impl LieBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Rank of the elements flattened into vectors of length ambient².
    pub fn span_rank(&self) -> usize {
        span_rank(self.field, &self.elements)
    }

    /// Whether `x` lies in the span of the basis.
    pub fn contains(&self, x: &ExactMatrix) -> bool {
        let mut all = self.elements.clone();
        all.push(x.clone());
        span_rank(self.field, &all) == self.span_rank()
    }
}

pub fn span_rank(field: FieldSpec, elements: &[ExactMatrix]) -> usize {
    let rows: Vec<Vec<Scalar>> = elements.iter().map(|m| m.entries().to_vec()).collect();
    rank_of_rows(field, &rows)
}

/// Accumulates signed matrix units `±E(h,i)` (1-based) and their label.
struct Combo {
    matrix: ExactMatrix,
    label: String,
}

impl Combo {
    fn new(field: FieldSpec, size: usize) -> Self {
        Self { matrix: ExactMatrix::zeros(field, size, size), label: String::new() }
    }

    fn term(mut self, sign: i64, h: usize, i: usize) -> Self {
        let f = self.matrix.field();
        let v = self.matrix.get(h - 1, i - 1) + &Scalar::from_i64(f, sign);
        self.matrix.set(h - 1, i - 1, v);
        if !self.label.is_empty() || sign < 0 {
            self.label.push(if sign < 0 { '-' } else { '+' });
        }
        self.label.push_str(&format!("E({h},{i})"));
        self
    }

    fn unit(field: FieldSpec, size: usize, h: usize, i: usize) -> Self {
        Self::new(field, size).term(1, h, i)
    }
}

fn check_n(kind: AlgebraKind, n: usize) -> Result<()> {
    if n < kind.min_n() {
        return Err(Error::InvalidParameter(format!(
            "{kind} needs n >= {}, got {n}",
            kind.min_n()
        )));
    }
    Ok(())
}

fn assemble(kind: AlgebraKind, n: usize, field: FieldSpec, combos: Vec<Combo>) -> LieBasis {
    let (elements, labels) = combos.into_iter().map(|c| (c.matrix, c.label)).unzip();
    LieBasis { kind, n, ambient: kind.ambient(n), field, elements, labels }
}

/// The usual vector-space basis of each algebra.
pub fn standard_basis(kind: AlgebraKind, n: usize, field: FieldSpec) -> Result<LieBasis> {
    check_n(kind, n)?;
    let size = kind.ambient(n);
    let mut out = Vec::new();
    match kind {
        AlgebraKind::Gl => {
            for h in 1..=n {
                for i in 1..=n {
                    out.push(Combo::unit(field, size, h, i));
                }
            }
        }
        AlgebraKind::Sl => {
            push_off_diagonal(&mut out, field, n);
            for h in 2..=n {
                out.push(Combo::unit(field, size, h, h).term(-1, 1, 1));
            }
        }
        AlgebraKind::So => {
            for h in 1..=n {
                for i in h + 1..=n {
                    out.push(Combo::unit(field, size, h, i).term(-1, i, h));
                }
            }
        }
        AlgebraKind::Sp => {
            for i in 1..=n {
                out.push(Combo::unit(field, size, i, n + i));
                out.push(Combo::unit(field, size, n + i, i));
                out.push(Combo::unit(field, size, i, i).term(-1, n + i, n + i));
            }
            push_sp_off_diagonal(&mut out, field, n);
        }
        AlgebraKind::StrictUpper => push_strict_upper(&mut out, field, n),
    }
    Ok(assemble(kind, n, field, out))
}

fn push_off_diagonal(out: &mut Vec<Combo>, field: FieldSpec, n: usize) {
    for h in 1..=n {
        for i in 1..=n {
            if h != i {
                out.push(Combo::unit(field, n, h, i));
            }
        }
    }
}

fn push_strict_upper(out: &mut Vec<Combo>, field: FieldSpec, n: usize) {
    for h in 1..=n {
        for i in h + 1..=n {
            out.push(Combo::unit(field, n, h, i));
        }
    }
}

// Elements with i < j. The diagonal block pairs A with -A^T and the
// off-diagonal blocks are symmetric, which is what X^T J + J X = 0 demands.
fn push_sp_off_diagonal(out: &mut Vec<Combo>, field: FieldSpec, n: usize) {
    let size = 2 * n;
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(Combo::unit(field, size, i, j).term(-1, n + j, n + i));
            out.push(Combo::unit(field, size, j, i).term(-1, n + i, n + j));
            out.push(Combo::unit(field, size, i, n + j).term(1, j, n + i));
            out.push(Combo::unit(field, size, n + i, j).term(1, n + j, i));
        }
    }
}

/// A basis made entirely of square-zero matrices, for the algebras where
/// one is known (`sl`, `sp`, `strict_upper`).
pub fn squarezero_basis(kind: AlgebraKind, n: usize, field: FieldSpec) -> Result<LieBasis> {
    check_n(kind, n)?;
    let size = kind.ambient(n);
    let mut out = Vec::new();
    match kind {
        AlgebraKind::Gl => {
            return Err(Error::Domain(
                "gl has no square-zero basis: the identity has nonzero trace in general".into(),
            ))
        }
        AlgebraKind::So => {
            return Err(Error::Domain(
                "no square-zero basis construction for so (impossible over formally real fields)".into(),
            ))
        }
        AlgebraKind::Sl => {
            push_off_diagonal(&mut out, field, n);
            for h in 2..=n {
                out.push(
                    Combo::unit(field, size, h, h)
                        .term(-1, 1, 1)
                        .term(-1, 1, h)
                        .term(1, h, 1),
                );
            }
        }
        AlgebraKind::Sp => {
            for i in 1..=n {
                out.push(Combo::unit(field, size, i, n + i));
                out.push(Combo::unit(field, size, n + i, i));
                out.push(
                    Combo::unit(field, size, i, i)
                        .term(-1, n + i, n + i)
                        .term(1, i, n + i)
                        .term(-1, n + i, i),
                );
            }
            push_sp_off_diagonal(&mut out, field, n);
        }
        AlgebraKind::StrictUpper => push_strict_upper(&mut out, field, n),
    }
    Ok(assemble(kind, n, field, out))
}

pub fn is_square_zero(x: &ExactMatrix) -> Result<bool> {
    x.require_square()?;
    Ok(x.mul(x)?.is_zero())
}

/// `J_n = [[0, I], [-I, 0]]` of size 2n.
pub fn symplectic_form(field: FieldSpec, n: usize) -> ExactMatrix {
    let mut j = ExactMatrix::zeros(field, 2 * n, 2 * n);
    for i in 0..n {
        j.set(i, n + i, Scalar::one(field));
        j.set(n + i, i, -Scalar::one(field));
    }
    j
}

fn is_skew(x: &ExactMatrix) -> bool {
    x.is_square()
        && (0..x.rows()).all(|i| {
            x.get(i, i).is_zero() && (0..i).all(|j| (x.get(i, j) + x.get(j, i)).is_zero())
        })
}

/// Membership test for the algebra `kind` with parameter `n`.
pub fn in_algebra(kind: AlgebraKind, n: usize, x: &ExactMatrix) -> bool {
    let size = kind.ambient(n);
    if x.rows() != size || x.cols() != size {
        return false;
    }
    match kind {
        AlgebraKind::Gl => true,
        AlgebraKind::Sl => x.trace().map(|t| t.is_zero()).unwrap_or(false),
        AlgebraKind::So => is_skew(x),
        AlgebraKind::Sp => {
            let j = symplectic_form(x.field(), n);
            let lhs = x.transpose().mul(&j).and_then(|a| a.add(&j.mul(x)?));
            lhs.map(|m| m.is_zero()).unwrap_or(false)
        }
        AlgebraKind::StrictUpper => (0..size).all(|i| (0..=i).all(|j| x.get(i, j).is_zero())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarReport {
    pub all_square_zero: bool,
    pub in_algebra: bool,
    pub span_rank: usize,
    pub target_dim: usize,
    pub satisfied: bool,
    /// Indices of elements that are not square-zero or lie outside the algebra.
    pub failing_indices: Vec<usize>,
}

/// Checks whether `basis` witnesses the square-zero basis property for the
/// algebra `(kind, n)`.
pub fn verify_star(basis: &LieBasis, kind: AlgebraKind, n: usize) -> Result<StarReport> {
    let size = kind.ambient(n);
    if basis.ambient != size || basis.elements.iter().any(|m| m.rows() != size || m.cols() != size) {
        return Err(Error::DimensionMismatch(format!(
            "basis has ambient size {}, {kind}({n}) needs {size}",
            basis.ambient
        )));
    }
    let mut failing = Vec::new();
    let mut all_square_zero = true;
    let mut all_in = true;
    for (idx, m) in basis.elements.iter().enumerate() {
        let sz = is_square_zero(m)?;
        let member = in_algebra(kind, n, m);
        all_square_zero &= sz;
        all_in &= member;
        if !(sz && member) {
            failing.push(idx);
        }
    }
    let span_rank = basis.span_rank();
    let target_dim = kind.dim(n);
    Ok(StarReport {
        all_square_zero,
        in_algebra: all_in,
        span_rank,
        target_dim,
        satisfied: all_square_zero && all_in && span_rank == target_dim,
        failing_indices: failing,
    })
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let field = a[0].field();
    a.iter().zip(b).fold(Scalar::zero(field), |acc, (x, y)| &acc + &(x * y))
}

/// Isotropy criterion for skew-symmetric matrices: `x² = 0` exactly when a
/// maximal independent set of columns spans a totally isotropic subspace for
/// the standard dot product. Characteristic 2 is rejected.
pub fn so_isotropy_test(x: &ExactMatrix) -> Result<bool> {
    x.require_square()?;
    if x.field().characteristic() == 2 {
        return Err(Error::Unsupported("isotropy criterion needs characteristic != 2".into()));
    }
    if !is_skew(x) {
        return Err(Error::InvalidParameter("matrix is not skew-symmetric".into()));
    }
    let field = x.field();
    let mut chosen: Vec<Vec<Scalar>> = Vec::new();
    for j in 0..x.cols() {
        let col = x.column(j);
        chosen.push(col);
        if rank_of_rows(field, &chosen) < chosen.len() {
            chosen.pop();
        }
    }
    for a in 0..chosen.len() {
        for b in a..chosen.len() {
            if !dot(&chosen[a], &chosen[b]).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True when the trace argument forbids writing the n×n identity as a sum
/// of square-zero matrices: characteristic 0, or characteristic p with p ∤ n.
pub fn trace_obstruction(n: usize, field: FieldSpec) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    Ok(match field {
        FieldSpec::Rationals => true,
        FieldSpec::Prime(p) => n as u64 % p != 0,
    })
}

/// Writes the n×n identity over GF(2), n even, as a sum of 3n/2 square-zero
/// matrices: for each pair (2i-1, 2i) the all-ones 2×2 block and the two
/// off-diagonal units inside that block.
pub fn identity_decomposition_char2(n: usize) -> Result<Vec<ExactMatrix>> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!("n must be even and positive, got {n}")));
    }
    let f = FieldSpec::Prime(2);
    let mut out = Vec::with_capacity(3 * n / 2);
    for i in 0..n / 2 {
        let (a, b) = (2 * i, 2 * i + 1);
        let mut block = ExactMatrix::zeros(f, n, n);
        for r in [a, b] {
            for c in [a, b] {
                block.set(r, c, Scalar::one(f));
            }
        }
        out.push(block);
        // v*_{2i-1} ⊗ v_{2i} sends v_{2i-1} to v_{2i}
        out.push(ExactMatrix::unit(f, n, b, a));
        out.push(ExactMatrix::unit(f, n, a, b));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LfReport {
    pub gram: ExactMatrix,
    pub dimension: usize,
    pub basis: Vec<ExactMatrix>,
    pub abelian: bool,
}

/// Solves `Xᵀ F = F X` for the Gram matrix `F`: the maps self-adjoint for
/// the bilinear form `f(u, v) = uᵀ F v`. In characteristic 2 this is `L(f)`.
pub fn lf_algebra(gram: &ExactMatrix) -> Result<LfReport> {
    gram.require_square()?;
    let n = gram.rows();
    let field = gram.field();
    // Row (r,c) of the linearized system, column (a,b) = unknown X[a][b]:
    // coefficient [b == r] F[a][c] - [b == c] F[r][a].
    let mut sys = ExactMatrix::zeros(field, n * n, n * n);
    for r in 0..n {
        for c in 0..n {
            for a in 0..n {
                let row = r * n + c;
                let left = gram.get(a, c);
                let right = gram.get(r, a);
                if !left.is_zero() {
                    let v = sys.get(row, a * n + r) + left;
                    sys.set(row, a * n + r, v);
                }
                if !right.is_zero() {
                    let v = sys.get(row, a * n + c) - right;
                    sys.set(row, a * n + c, v);
                }
            }
        }
    }
    let basis: Vec<ExactMatrix> = sys
        .kernel_basis()
        .into_iter()
        .map(|v| ExactMatrix::new(field, n, n, v))
        .collect::<Result<_>>()?;
    let mut abelian = true;
    'outer: for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if !basis[i].commutator(&basis[j])?.is_zero() {
                abelian = false;
                break 'outer;
            }
        }
    }
    Ok(LfReport { gram: gram.clone(), dimension: basis.len(), basis, abelian })
}

/// Largest basis size accepted by [`star_bruteforce_gf2`].
pub const BRUTEFORCE_MAX_DIM: usize = 20;

/// Enumerates the whole GF(2)-span of `basis` and reports whether its
/// square-zero elements span it.
pub fn star_bruteforce_gf2(basis: &LieBasis) -> Result<bool> {
    if basis.field != FieldSpec::Prime(2) {
        return Err(Error::InvalidParameter("brute force runs over GF(2) only".into()));
    }
    let d = basis.len();
    if d > BRUTEFORCE_MAX_DIM {
        return Err(Error::InvalidParameter(format!(
            "basis of size {d} exceeds enumeration bound {BRUTEFORCE_MAX_DIM}"
        )));
    }
    let size = basis.ambient;
    let bits: Vec<Vec<u8>> = basis
        .elements
        .iter()
        .map(|m| m.entries().iter().map(|s| u8::from(!s.is_zero())).collect())
        .collect();
    let target = span_rank(basis.field, &basis.elements);
    let mut echelon: Vec<Vec<u8>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut x = vec![0u8; size * size];
    for mask in 1u32..(1u32 << d) {
        x.iter_mut().for_each(|e| *e = 0);
        for (k, b) in bits.iter().enumerate() {
            if mask >> k & 1 == 1 {
                x.iter_mut().zip(b).for_each(|(e, v)| *e ^= v);
            }
        }
        if !square_is_zero_gf2(&x, size) {
            continue;
        }
        let mut v = x.clone();
        for (row, &p) in echelon.iter().zip(&pivots) {
            if v[p] == 1 {
                v.iter_mut().zip(row).for_each(|(e, r)| *e ^= r);
            }
        }
        if let Some(p) = v.iter().position(|&e| e == 1) {
            echelon.push(v);
            pivots.push(p);
            if echelon.len() == target {
                break;
            }
        }
    }
    Ok(echelon.len() == d && target == d)
}

fn square_is_zero_gf2(x: &[u8], n: usize) -> bool {
    (0..n).all(|i| {
        (0..n).all(|j| (0..n).fold(0u8, |acc, k| acc ^ (x[i * n + k] & x[k * n + j])) == 0)
    })
}
