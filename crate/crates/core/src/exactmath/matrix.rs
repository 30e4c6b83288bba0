//! Dense matrices over a [`FieldSpec`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::{FieldSpec, Scalar};
use crate::error::{Error, Result};

/// Row-major dense matrix. All entries belong to `field`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!("empty matrix {rows}x{cols}")));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| e.field() != field) {
            return Err(Error::FieldMismatch(field, bad.field()));
        }
        Ok(Self { rows, cols, field, entries })
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self { rows, cols, field, entries: vec![Scalar::zero(field); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    /// The matrix unit with a single 1 at `(i, j)` (0-based).
    pub fn unit(field: FieldSpec, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        m.set(i, j, Scalar::one(field));
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_ints<I, R>(field: FieldSpec, rows: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: AsRef<[i64]>,
    {
        let rows = rows
            .into_iter()
            .map(|r| r.as_ref().iter().map(|&v| Scalar::from_i64(field, v)).collect())
            .collect();
        Self::from_rows(field, rows).expect("well-formed integer rows")
    }

    pub fn diagonal(field: FieldSpec, diag: &[Scalar]) -> Self {
        let mut m = Self::zeros(field, diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(|a| a * c)
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> Result<Scalar> {
        self.require_square()?;
        Ok((0..self.rows).fold(Scalar::zero(self.field), |acc, i| &acc + self.get(i, i)))
    }

    pub fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(())
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Kronecker product, `(a ⊗ b)[(i,k),(j,l)] = a[i,j] b[k,l]`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(self.field, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn block_diag(blocks: &[ExactMatrix]) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::DimensionMismatch("no blocks".into()))?;
        for b in blocks {
            first.same_field(b)?;
        }
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(first.field, r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Scalar::zero(self.field), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(self.field, &self.row_vecs())
    }

    /// Basis of the right null space, one vector per free column of the
    /// reduced row echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let (rref, pivots) = rref(self.row_vecs(), self.cols);
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Scalar::zero(self.field); self.cols];
            v[free] = Scalar::one(self.field);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&rref[r][free];
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let aug: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| Scalar::from_i64(self.field, (i == j) as i64)));
                row
            })
            .collect();
        let (red, pivots) = rref(aug, n);
        if pivots.len() < n {
            return Err(Error::Singular);
        }
        let rows = red.into_iter().map(|r| r[n..].to_vec()).collect();
        Self::from_rows(self.field, rows)
    }

    pub fn det(&self) -> Result<Scalar> {
        self.require_square()?;
        let n = self.rows;
        let mut m = self.row_vecs();
        let mut det = Scalar::one(self.field);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return Ok(Scalar::zero(self.field));
            };
            if p != c {
                m.swap(p, c);
                det = -&det;
            }
            det = &det * &m[c][c];
            let inv = m[c][c].inv().expect("nonzero pivot");
            for r in c + 1..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = &m[r][c] * &inv;
                for j in c..n {
                    let t = &f * &m[c][j];
                    m[r][j] = &m[r][j] - &t;
                }
            }
        }
        Ok(det)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        self.require_square()?;
        let mut acc = Self::identity(self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

/// Rank of a list of row vectors over `field`.
///
/// Over the rationals the rows are scaled to integers and reduced with
/// fraction-free (Bareiss) elimination; over GF(p) plain elimination is used.
pub fn rank_of_rows(field: FieldSpec, rows: &[Vec<Scalar>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    match field {
        FieldSpec::Rationals => {
            let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
            bareiss_rank(ints)
        }
        FieldSpec::Prime(p) => {
            let residues: Vec<Vec<u64>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|s| match s {
                            Scalar::Residue { value, .. } => *value,
                            Scalar::Rational(_) => panic!("rational entry in GF({p}) matrix"),
                        })
                        .collect()
                })
                .collect();
            modp_rank(residues, p)
        }
    }
}

/// Clears denominators of a rational row.
fn integer_row(row: &[Scalar]) -> Vec<BigInt> {
    let qs: Vec<_> = row
        .iter()
        .map(|s| s.as_rational().expect("rational entry").clone())
        .collect();
    let lcm = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    qs.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
}

/// Fraction-free Gaussian elimination; every division is exact.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

fn modp_rank(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = Scalar::Residue { value: m[r][c], p }.inv().expect("nonzero");
        let Scalar::Residue { value: inv, .. } = inv else { unreachable!() };
        for i in r + 1..rows {
            if m[i][c] == 0 {
                continue;
            }
            let f = (m[i][c] as u128 * inv as u128 % p as u128) as u64;
            for j in c..cols {
                let t = (f as u128 * m[r][j] as u128 % p as u128) as u64;
                m[i][j] = (m[i][j] + p - t) % p;
            }
        }
        r += 1;
    }
    r
}

/// Reduced row echelon form restricted to the first `pivot_cols` columns.
/// Returns the reduced rows and the pivot columns in order.
fn rref(mut m: Vec<Vec<Scalar>>, pivot_cols: usize) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let rows = m.len();
    let width = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for j in 0..width {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..width {
                let t = &f * &m[r][j];
                m[i][j] = &m[i][j] - &t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// On-disk form: `{"field": "q" | "p:<prime>", "rows": [["1", "2/3"], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: String,
    pub rows: Vec<Vec<String>>,
}

impl From<&ExactMatrix> for MatrixJson {
    fn from(m: &ExactMatrix) -> Self {
        MatrixJson {
            field: m.field.to_string(),
            rows: (0..m.rows)
                .map(|i| m.row(i).iter().map(ToString::to_string).collect())
                .collect(),
        }
    }
}

impl TryFrom<MatrixJson> for ExactMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        let field: FieldSpec = j.field.parse()?;
        let rows = j
            .rows
            .iter()
            .map(|r| r.iter().map(|s| Scalar::parse(field, s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        ExactMatrix::from_rows(field, rows)
    }
}

impl ExactMatrix {
    pub fn from_json(src: &str) -> Result<Self> {
        let j: MatrixJson = serde_json::from_str(src).map_err(|e| Error::Malformed(e.to_string()))?;
        j.try_into()
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(deserializer)?;
        j.try_into().map_err(serde::de::Error::custom)
    }
}
