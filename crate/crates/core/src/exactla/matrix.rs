use std::fmt;
use std::ops::Index;

use super::elim;
use super::field::{FieldSpec, Scalar};
use super::LinalgError;

/// A column vector, stored as its entries.
pub type Vector = Vec<Scalar>;

/// Dense row-major matrix over an exact field. Values are immutable once built; every
/// operation returns a new matrix.
///
/// Element access through `Index<(usize, usize)>` is 0-based. The constructors that mirror
/// the elementary matrices `E_{i,j}` ([`elementary_matrix`]) take 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        entries: Vec<Scalar>,
    ) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Empty("matrix"));
        }
        if entries.len() != rows * cols {
            return Err(LinalgError::LengthMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if let Some(bad) = entries.iter().find(|s| s.field() != field) {
            return Err(LinalgError::FieldMismatch(field, bad.field()));
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Matrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LinalgError::LengthMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        let nrows = rows.len();
        Matrix::new(field, nrows, cols, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix from columns.
    pub fn from_columns(field: FieldSpec, columns: &[Vector]) -> Result<Self, LinalgError> {
        Ok(Matrix::from_rows(field, columns.to_vec())?.transpose())
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(field: FieldSpec, rows: &[&[i64]]) -> Result<Self, LinalgError> {
        Matrix::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix::new(field, rows, cols, entries).expect("from_fn produced a malformed matrix")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// Nonzero entries of each row as `(column, value)`.
    pub(crate) fn sparse_rows(&self) -> SparseRows<'_> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .collect()
            })
            .collect()
    }

    /// Whether `self · other = other · self`, computed over nonzero entries only.
    pub fn commutes_with(&self, other: &Matrix) -> Result<bool, LinalgError> {
        self.check_field(other)?;
        if !self.is_square() || !other.is_square() || self.rows != other.rows {
            return Err(self.mismatch(other, "commutes_with"));
        }
        Ok(sparse_commute(self.field, &self.sparse_rows(), &other.sparse_rows()))
    }

    fn check_field(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    fn mismatch(&self, other: &Matrix, op: &'static str) -> LinalgError {
        LinalgError::DimensionMismatch {
            op,
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(self.mismatch(other, "mul"));
        }
        let b = other.sparse_rows();
        let mut out = vec![self.field.zero(); self.rows * other.cols];
        for i in 0..self.rows {
            let acc = &mut out[i * other.cols..(i + 1) * other.cols];
            for (k, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for &(j, x) in &b[k] {
                    acc[j] = &acc[j] + &(a * x);
                }
            }
        }
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: other.cols,
            entries: out,
        })
    }

    fn zip_with(
        &self,
        other: &Matrix,
        op: &'static str,
        f: impl Fn(&Scalar, &Scalar) -> Scalar,
    ) -> Result<Matrix, LinalgError> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(self.mismatch(other, op));
        }
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> Result<Matrix, LinalgError> {
        if c.field() != self.field {
            return Err(LinalgError::FieldMismatch(self.field, c.field()));
        }
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * c).collect(),
        })
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vector, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::LengthMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        if let Some(bad) = v.iter().find(|s| s.field() != self.field) {
            return Err(LinalgError::FieldMismatch(self.field, bad.field()));
        }
        Ok((0..self.rows)
            .map(|i| dot_unchecked(self.field, self.row(i), v))
            .collect())
    }

    pub fn rank(&self) -> usize {
        elim::rank(self.field, &self.to_rows(), self.cols)
    }

    pub fn determinant(&self) -> Result<Scalar, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare("determinant"));
        }
        Ok(elim::determinant(self.field, &self.to_rows()))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare("inverse"));
        }
        let n = self.rows;
        let one = self.field.one();
        let mut aug: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| if i == j { one.clone() } else { self.field.zero() }));
                row
            })
            .collect();
        for c in 0..n {
            let piv = (c..n)
                .find(|&i| !aug[i][c].is_zero())
                .ok_or(LinalgError::Singular)?;
            aug.swap(piv, c);
            let inv = aug[c][c].inv().expect("nonzero pivot");
            for x in aug[c].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..n {
                if i == c || aug[i][c].is_zero() {
                    continue;
                }
                let f = aug[i][c].clone();
                let pivot_row = aug[c].clone();
                for (x, p) in aug[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * p);
                }
            }
        }
        Matrix::from_rows(self.field, aug.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    /// `basis⁻¹ · self · basis`: the matrix of the same map in the basis given by the columns
    /// of `basis`.
    pub fn conjugate_by(&self, basis: &Matrix) -> Result<Matrix, LinalgError> {
        basis.inverse()?.mul(self)?.mul(basis)
    }

    /// The `height × width` block with top-left corner at 0-based `(row, col)`.
    pub fn submatrix(&self, row: usize, col: usize, height: usize, width: usize) -> Matrix {
        Matrix::from_fn(self.field, height, width, |i, j| self[(row + i, col + j)].clone())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

fn dot_unchecked(field: FieldSpec, a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(field.zero(), |acc, (x, y)| &acc + &(x * y))
}

/// `Σ a_k b_k`, e.g. a covector applied to a vector.
pub fn dot(a: &[Scalar], b: &[Scalar]) -> Result<Scalar, LinalgError> {
    if a.len() != b.len() {
        return Err(LinalgError::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let field = a.first().ok_or(LinalgError::Empty("dot"))?.field();
    if let Some(bad) = a.iter().chain(b).find(|s| s.field() != field) {
        return Err(LinalgError::FieldMismatch(field, bad.field()));
    }
    Ok(dot_unchecked(field, a, b))
}

pub fn identity(r: usize, field: FieldSpec) -> Matrix {
    Matrix::from_fn(field, r, r, |i, j| {
        if i == j {
            field.one()
        } else {
            field.zero()
        }
    })
}

/// `E_{i,j}` in `M_r`, with 1-based `i` and `j`.
pub fn elementary_matrix(
    r: usize,
    i: usize,
    j: usize,
    field: FieldSpec,
) -> Result<Matrix, LinalgError> {
    if r == 0 {
        return Err(LinalgError::Empty("elementary_matrix"));
    }
    if i == 0 || j == 0 || i > r || j > r {
        return Err(LinalgError::IndexOutOfRange {
            row: i,
            col: j,
            dim: r,
        });
    }
    Ok(Matrix::from_fn(field, r, r, |a, b| {
        if a + 1 == i && b + 1 == j {
            field.one()
        } else {
            field.zero()
        }
    }))
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    if !a.is_square() || !b.is_square() {
        return Err(LinalgError::NotSquare("commutator"));
    }
    a.mul(b)?.sub(&b.mul(a)?)
}

pub fn rank(a: &Matrix) -> usize {
    a.rank()
}

/// Basis of the right null space of `a`; empty iff `a` has full column rank.
pub fn kernel_basis(a: &Matrix) -> Vec<Vector> {
    elim::kernel(a.field, &a.to_rows(), a.cols)
}

fn check_vectors(vectors: &[Vector], what: &'static str) -> Result<(FieldSpec, usize), LinalgError> {
    let first = vectors.first().ok_or(LinalgError::Empty(what))?;
    let len = first.len();
    let field = first.first().ok_or(LinalgError::Empty(what))?.field();
    for v in vectors {
        if v.len() != len {
            return Err(LinalgError::LengthMismatch {
                expected: len,
                found: v.len(),
            });
        }
        if let Some(bad) = v.iter().find(|s| s.field() != field) {
            return Err(LinalgError::FieldMismatch(field, bad.field()));
        }
    }
    Ok((field, len))
}

/// Dimension of the span of a nonempty list of equal-length vectors.
pub fn span_rank(vectors: &[Vector]) -> Result<usize, LinalgError> {
    let (field, len) = check_vectors(vectors, "span_rank")?;
    Ok(elim::rank(field, vectors, len))
}

/// Reduced row echelon basis of the span of `vectors` (nonzero rows only). The result is
/// canonical: two lists with the same span give identical output.
pub fn row_space_basis(vectors: &[Vector]) -> Result<Vec<Vector>, LinalgError> {
    let (_, len) = check_vectors(vectors, "row_space_basis")?;
    let mut m: Vec<Vector> = vectors.to_vec();
    let mut r = 0;
    for c in 0..len {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(piv, r);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = &*x - &(&f * p);
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    Ok(m)
}

/// Square blocks placed along the diagonal, zeros elsewhere.
pub fn block_diagonal(blocks: &[Matrix]) -> Result<Matrix, LinalgError> {
    let first = blocks.first().ok_or(LinalgError::Empty("block_diagonal"))?;
    let field = first.field;
    for b in blocks {
        if b.field != field {
            return Err(LinalgError::FieldMismatch(field, b.field));
        }
        if !b.is_square() {
            return Err(LinalgError::NotSquare("block_diagonal"));
        }
    }
    let n: usize = blocks.iter().map(|b| b.rows).sum();
    let mut out = Matrix::zeros(field, n, n);
    let mut offset = 0;
    for b in blocks {
        for i in 0..b.rows {
            for j in 0..b.cols {
                out.entries[(offset + i) * n + offset + j] = b[(i, j)].clone();
            }
        }
        offset += b.rows;
    }
    Ok(out)
}

pub(crate) type SparseRows<'a> = Vec<Vec<(usize, &'a Scalar)>>;

/// `a · b = b · a` for square matrices of equal size given by their nonzero entries.
pub(crate) fn sparse_commute(field: FieldSpec, a: &SparseRows<'_>, b: &SparseRows<'_>) -> bool {
    let mut acc = vec![field.zero(); a.len()];
    let mut touched = Vec::new();
    for i in 0..a.len() {
        for (x, y, negate) in [(a, b, false), (b, a, true)] {
            for &(k, u) in &x[i] {
                for &(j, w) in &y[k] {
                    let t = u * w;
                    acc[j] = if negate { &acc[j] - &t } else { &acc[j] + &t };
                    touched.push(j);
                }
            }
        }
        let mut equal = true;
        for j in touched.drain(..) {
            equal &= acc[j].is_zero();
            acc[j] = field.zero();
        }
        if !equal {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn e(r: usize, i: usize, j: usize, field: FieldSpec) -> Matrix {
        elementary_matrix(r, i, j, field).unwrap()
    }

    #[test]
    fn identity_examples() {
        assert_eq!(identity(1, q()), Matrix::from_ints(q(), &[&[1]]).unwrap());
        let i3 = identity(3, f(2));
        for k in 0..3 {
            assert!(i3[(k, k)].is_one());
        }
        assert_eq!(i3.rank(), 3);
        let a = Matrix::from_ints(q(), &[&[1, -7], &[3, 5]]).unwrap();
        assert_eq!(identity(2, q()).mul(&a).unwrap(), a);
    }

    #[test]
    fn elementary_examples() {
        assert_eq!(
            e(2, 1, 2, q()),
            Matrix::from_ints(q(), &[&[0, 1], &[0, 0]]).unwrap()
        );
        let m = e(3, 2, 2, f(3));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m[(i, j)].is_one(), (i, j) == (1, 1));
            }
        }
        assert_eq!(e(3, 1, 2, q()).mul(&e(3, 2, 2, q())).unwrap(), e(3, 1, 2, q()));
        assert!(elementary_matrix(3, 0, 1, q()).is_err());
        assert!(elementary_matrix(3, 1, 4, q()).is_err());
    }

    #[test]
    fn elementary_products_exhaustive() {
        for r in 1..=4 {
            for a in 1..=r {
                for b in 1..=r {
                    for c in 1..=r {
                        for d in 1..=r {
                            let prod = e(r, a, b, q()).mul(&e(r, c, d, q())).unwrap();
                            if b == c {
                                assert_eq!(prod, e(r, a, d, q()));
                            } else {
                                assert!(prod.is_zero());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn commutator_examples() {
        let c = commutator(&e(2, 1, 2, q()), &e(2, 2, 1, q())).unwrap();
        assert_eq!(c, Matrix::from_ints(q(), &[&[1, 0], &[0, -1]]).unwrap());
        let a = Matrix::from_ints(q(), &[&[2, 3], &[-1, 4]]).unwrap();
        assert!(commutator(&a, &identity(2, q())).unwrap().is_zero());
        assert!(commutator(&a, &a).unwrap().is_zero());
        assert!(commutator(&a, &identity(3, q())).is_err());
        assert!(commutator(&a, &identity(2, f(2))).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&identity(4, q())), 4);
        assert_eq!(rank(&Matrix::from_ints(q(), &[&[1, 2], &[2, 4]]).unwrap()), 1);
        assert_eq!(rank(&Matrix::from_ints(f(2), &[&[1, 1], &[1, 1]]).unwrap()), 1);
        assert_eq!(rank(&Matrix::zeros(q(), 3, 2)), 0);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&identity(2, q())).is_empty());
        assert_eq!(kernel_basis(&Matrix::zeros(q(), 2, 2)).len(), 2);
        let m = Matrix::from_ints(q(), &[&[0, -2], &[0, 0]]).unwrap();
        assert_eq!(kernel_basis(&m), vec![vec![q().one(), q().zero()]]);
    }

    #[test]
    fn span_rank_examples() {
        let v = |a: i64, b: i64| vec![q().from_i64(a), q().from_i64(b)];
        assert_eq!(span_rank(&[v(1, 0), v(0, 1)]).unwrap(), 2);
        assert_eq!(span_rank(&[v(1, 1), v(2, 2)]).unwrap(), 1);
        assert!(span_rank(&[]).is_err());
        assert!(span_rank(&[v(1, 0), vec![q().one()]]).is_err());
        assert!(span_rank(&[v(1, 0), vec![f(2).one(), f(2).one()]]).is_err());
    }

    #[test]
    fn block_diagonal_examples() {
        let two = Matrix::from_ints(q(), &[&[2]]).unwrap();
        let three = Matrix::from_ints(q(), &[&[3]]).unwrap();
        assert_eq!(
            block_diagonal(&[two, three]).unwrap(),
            Matrix::from_ints(q(), &[&[2, 0], &[0, 3]]).unwrap()
        );
        let blocks = vec![identity(2, q()); 4];
        assert_eq!(block_diagonal(&blocks).unwrap(), identity(8, q()));
        let a = Matrix::from_ints(q(), &[&[1, 2], &[3, 4]]).unwrap();
        let b = Matrix::from_ints(q(), &[&[0, 1], &[1, 1]]).unwrap();
        let x = block_diagonal(&[a, identity(2, q())]).unwrap();
        let y = block_diagonal(&[identity(2, q()), b]).unwrap();
        assert!(commutator(&x, &y).unwrap().is_zero());
        assert!(block_diagonal(&[identity(1, q()), identity(1, f(2))]).is_err());
    }

    #[test]
    fn determinant_and_inverse() {
        let a = Matrix::from_ints(q(), &[&[0, 2, 1], &[1, 0, 0], &[3, 1, 5]]).unwrap();
        // Cofactor expansion along the second row: -1 * (2*5 - 1*1) = -9.
        assert_eq!(a.determinant().unwrap(), q().from_i64(-9));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), identity(3, q()));
        let s = Matrix::from_ints(f(5), &[&[1, 2], &[2, 4]]).unwrap();
        assert!(s.determinant().unwrap().is_zero());
        assert_eq!(s.inverse(), Err(LinalgError::Singular));
        let g = Matrix::from_ints(f(5), &[&[0, 1], &[1, 1]]).unwrap();
        assert_eq!(g.determinant().unwrap(), f(5).from_i64(-1));
    }

    #[test]
    fn row_space_basis_is_canonical() {
        let v = |a: i64, b: i64, c: i64| vec![q().from_i64(a), q().from_i64(b), q().from_i64(c)];
        let b1 = row_space_basis(&[v(1, 2, 3), v(2, 4, 7)]).unwrap();
        let b2 = row_space_basis(&[v(0, 0, 5), v(3, 6, 9), v(1, 2, 4)]).unwrap();
        assert_eq!(b1, b2);
        assert_eq!(b1, vec![v(1, 2, 0), v(0, 0, 1)]);
    }

    fn big_rational() -> impl Strategy<Value = Scalar> {
        (any::<i64>(), 1i64..1_000_000_007).prop_map(|(n, d)| {
            q().from_fraction(&(BigInt::from(n) * BigInt::from(n)), &BigInt::from(d))
                .unwrap()
        })
    }

    fn rational_matrix(n: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(big_rational(), n * n)
            .prop_map(move |entries| Matrix::new(q(), n, n, entries).unwrap())
    }

    fn small_matrix(p: u64, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(0..p as i64, rows * cols).prop_map(move |v| {
            let field = f(p);
            Matrix::new(field, rows, cols, v.into_iter().map(|x| field.from_i64(x)).collect())
                .unwrap()
        })
    }

    fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
            Matrix::new(q(), rows, cols, v.into_iter().map(|x| q().from_i64(x)).collect())
                .unwrap()
        })
    }

    proptest! {
        #[test]
        fn rational_products_associate(a in rational_matrix(3), b in rational_matrix(3), c in rational_matrix(3)) {
            let left = a.mul(&b).unwrap().mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn commutator_alternating_and_bilinear(a in small_matrix(7, 3, 3), b in small_matrix(7, 3, 3), c in small_matrix(7, 3, 3), k in 0i64..7) {
            prop_assert!(commutator(&a, &a).unwrap().is_zero());
            let ab = commutator(&a, &b).unwrap();
            prop_assert_eq!(ab.clone(), commutator(&b, &a).unwrap().neg());
            let scalar = f(7).from_i64(k);
            let lhs = commutator(&a.scale(&scalar).unwrap().add(&c).unwrap(), &b).unwrap();
            let rhs = ab.scale(&scalar).unwrap().add(&commutator(&c, &b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn rank_transpose_and_product(a in int_matrix(3, 4), b in int_matrix(4, 2)) {
            prop_assert_eq!(a.rank(), a.transpose().rank());
            let ab = a.mul(&b).unwrap();
            prop_assert!(ab.rank() <= a.rank().min(b.rank()));
        }

        #[test]
        fn rank_transpose_mod_p(a in small_matrix(3, 4, 3)) {
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn kernel_vectors_are_independent_solutions(a in int_matrix(3, 5)) {
            let ker = kernel_basis(&a);
            prop_assert_eq!(ker.len(), 5 - a.rank());
            for v in &ker {
                prop_assert!(a.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
            }
            if !ker.is_empty() {
                prop_assert_eq!(span_rank(&ker).unwrap(), ker.len());
            }
        }

        #[test]
        fn kernel_mod_p(a in small_matrix(2, 3, 4)) {
            let ker = kernel_basis(&a);
            prop_assert_eq!(ker.len(), 4 - a.rank());
            for v in &ker {
                prop_assert!(a.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
            }
        }

        #[test]
        fn determinant_matches_invertibility(a in int_matrix(3, 3)) {
            prop_assert_eq!(a.determinant().unwrap().is_zero(), !a.is_invertible());
            if a.is_invertible() {
                prop_assert_eq!(a.mul(&a.inverse().unwrap()).unwrap(), identity(3, q()));
            }
        }
    }
}
