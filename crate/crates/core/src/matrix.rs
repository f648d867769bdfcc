//! Dense matrices over a finite field.

use std::fmt;

use crate::counter::OpCounter;
use crate::error::{ensure_distinct, Error, Result};
use crate::gf::Field;

#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl FieldMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        FieldMatrix { field, rows, cols, data }
    }

    /// Builds a matrix from row vectors, checking shape and element range.
    pub fn from_rows<R: AsRef<[u32]>>(field: Field, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for &x in r {
                data.push(field.check(x as u64)?);
            }
        }
        Ok(FieldMatrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn field(&self) -> Field {
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

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(self.field.contains(v));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Stacks the listed rows in the given order.
    pub fn submatrix_rows(&self, indices: &[usize]) -> Result<Self> {
        ensure_distinct(indices, self.rows)?;
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Ok(FieldMatrix {
            field: self.field,
            rows: indices.len(),
            cols: self.cols,
            data,
        })
    }

    /// Columns `start..end`.
    pub fn column_block(&self, start: usize, end: usize) -> Self {
        assert!(start <= end && end <= self.cols);
        Self::from_fn(self.field, self.rows, end - start, |r, c| self.get(r, start + c))
    }

    pub fn hstack(&self, right: &FieldMatrix) -> Result<Self> {
        self.same_field(right)?;
        if self.rows != right.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, right.rows
            )));
        }
        Ok(Self::from_fn(self.field, self.rows, self.cols + right.cols, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                right.get(r, c - self.cols)
            }
        }))
    }

    pub fn vstack(&self, below: &FieldMatrix) -> Result<Self> {
        self.same_field(below)?;
        if self.cols != below.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, below.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        Ok(FieldMatrix {
            field: self.field,
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        })
    }

    fn same_field(&self, other: &FieldMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Matrix product; counts rows·cols·inner multiplications.
    pub fn mul(&self, rhs: &FieldMatrix, ops: &OpCounter) -> Result<Self> {
        self.same_field(rhs)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, rhs.cols);
        for r in 0..self.rows {
            let lhs_row = self.row(r);
            for c in 0..rhs.cols {
                let mut acc = 0u32;
                for (i, &a) in lhs_row.iter().enumerate() {
                    acc = f.add(acc, f.mul(a, rhs.get(i, c)));
                }
                out.data[r * rhs.cols + c] = acc;
            }
        }
        let cells = (self.rows * rhs.cols) as u64;
        ops.muls(cells * self.cols as u64);
        ops.adds(cells * self.cols.saturating_sub(1) as u64);
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u32], ops: &OpCounter) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let f = self.field;
        let out = (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect();
        ops.muls((self.rows * self.cols) as u64);
        ops.adds((self.rows * self.cols.saturating_sub(1)) as u64);
        Ok(out)
    }

    pub fn add(&self, rhs: &FieldMatrix, ops: &OpCounter) -> Result<Self> {
        self.zip_with(rhs, ops, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, rhs: &FieldMatrix, ops: &OpCounter) -> Result<Self> {
        self.zip_with(rhs, ops, |f, a, b| f.sub(a, b))
    }

    fn zip_with(&self, rhs: &FieldMatrix, ops: &OpCounter, op: impl Fn(&Field, u32, u32) -> u32) -> Result<Self> {
        self.same_field(rhs)?;
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = self.field;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| op(&f, a, b)).collect();
        ops.adds(self.data.len() as u64);
        Ok(FieldMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn neg(&self, ops: &OpCounter) -> Self {
        let f = self.field;
        ops.adds(self.data.len() as u64);
        FieldMatrix {
            data: self.data.iter().map(|&a| f.neg(a)).collect(),
            ..self.clone()
        }
    }

    /// Gauss–Jordan inversion. The pivot is the first nonzero entry at or
    /// below the diagonal; a column without one means the matrix is singular.
    pub fn inverse(&self, ops: &OpCounter) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let f = self.field;
        let mut a = self.clone();
        let mut inv = Self::identity(f, n);
        let (mut muls, mut adds) = (0u64, 0u64);
        for col in 0..n {
            let pivot = (col..n).find(|&r| a.get(r, col) != 0).ok_or(Error::SingularMatrix)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p_inv = f.inv(a.get(col, col))?;
            muls += 1;
            if p_inv != 1 {
                for c in 0..n {
                    a.data[col * n + c] = f.mul(a.data[col * n + c], p_inv);
                    inv.data[col * n + c] = f.mul(inv.data[col * n + c], p_inv);
                }
                muls += 2 * n as u64;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in 0..n {
                    let av = f.mul(factor, a.data[col * n + c]);
                    a.data[r * n + c] = f.sub(a.data[r * n + c], av);
                    let iv = f.mul(factor, inv.data[col * n + c]);
                    inv.data[r * n + c] = f.sub(inv.data[r * n + c], iv);
                }
                muls += 2 * n as u64;
                adds += 2 * n as u64;
            }
        }
        ops.muls(muls);
        ops.adds(adds);
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.inverse(&OpCounter::new()).is_ok()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// A[i,j] = −A[j,i] and A[i,i] = 0.
    pub fn is_skew_symmetric(&self) -> bool {
        let f = self.field;
        self.is_square()
            && (0..self.rows).all(|i| {
                self.get(i, i) == 0 && (0..i).all(|j| self.get(i, j) == f.neg(self.get(j, i)))
            })
    }
}

/// A square matrix with A = −Aᵗ and a zero diagonal. The diagonal is checked
/// explicitly since in characteristic two the off-diagonal condition does not
/// force it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewSymmetric(FieldMatrix);

impl SkewSymmetric {
    pub fn as_matrix(&self) -> &FieldMatrix {
        &self.0
    }

    pub fn into_inner(self) -> FieldMatrix {
        self.0
    }

    /// Fills the strict upper triangle row by row from `upper` and mirrors
    /// it with negation.
    pub fn from_strict_upper(field: Field, n: usize, upper: &[u32]) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if upper.len() != expected {
            return Err(Error::WrongMessageLength {
                expected,
                got: upper.len(),
            });
        }
        let mut m = FieldMatrix::zeros(field, n, n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = field.check(*it.next().unwrap() as u64)?;
                m.set(i, j, v);
                m.set(j, i, field.neg(v));
            }
        }
        Ok(SkewSymmetric(m))
    }
}

impl TryFrom<FieldMatrix> for SkewSymmetric {
    type Error = Error;

    fn try_from(m: FieldMatrix) -> Result<Self> {
        if m.is_skew_symmetric() {
            Ok(SkewSymmetric(m))
        } else {
            Err(Error::NotSkewSymmetric)
        }
    }
}

/// Vandermonde matrix with entry [i, j] = points[i]^j for j < k.
pub fn vandermonde(field: Field, points: &[u32], k: usize) -> Result<FieldMatrix> {
    let n = points.len();
    if n > field.order() as usize {
        return Err(Error::FieldTooSmall {
            order: field.order(),
            what: format!("{n} distinct points"),
        });
    }
    if k > n {
        return Err(Error::DimensionMismatch(format!("k = {k} exceeds n = {n}")));
    }
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DuplicatePoints);
    }
    for &p in points {
        field.check(p as u64)?;
    }
    Ok(FieldMatrix::from_fn(field, n, k, |i, j| field.pow(points[i], j as u64)))
}

/// Generator of the doubly extended Reed–Solomon code, as `n` rows of
/// length `k`: the point 0 (row e₁) first, then the nonzero points in
/// enumeration order, and the point at infinity (row e_k) last when
/// `n = q + 1`.
pub fn extended_vandermonde(field: Field, n: usize, k: usize) -> Result<FieldMatrix> {
    let q = field.order() as usize;
    if n > q + 1 {
        return Err(Error::FieldTooSmall {
            order: field.order(),
            what: format!("doubly extended code of length {n} needs n <= q + 1"),
        });
    }
    if k == 0 || k > n {
        return Err(Error::DimensionMismatch(format!("k = {k} must be in 1..={n}")));
    }
    let interior = (n - 1).min(q - 1);
    let mut points = vec![0u32];
    points.extend(field.enumerate(interior)?);
    let mut m = vandermonde(field, &points, k)?;
    if n == q + 1 {
        let mut last = vec![0u32; k];
        last[k - 1] = 1;
        m = m.vstack(&FieldMatrix::from_rows(field, &[last])?)?;
    }
    Ok(m)
}

/// P · M · Pᵗ.
pub fn congruence(p: &FieldMatrix, m: &FieldMatrix, ops: &OpCounter) -> Result<FieldMatrix> {
    if !m.is_square() || p.cols() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "congruence of {}x{} by {}x{}",
            m.rows(),
            m.cols(),
            p.rows(),
            p.cols()
        )));
    }
    p.mul(m, ops)?.mul(&p.transpose(), ops)
}

/// Calls `visit` with every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// True when every `k`-row submatrix of the `k`-column matrix `m` is
/// invertible.
pub fn all_row_subsets_invertible(m: &FieldMatrix, k: usize) -> bool {
    let mut ok = true;
    for_each_subset(m.rows(), k, |rows| {
        ok = m.submatrix_rows(rows).map(|s| s.is_invertible()).unwrap_or(false);
        ok
    });
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf7() -> Field {
        Field::prime(7).unwrap()
    }

    fn random_matrix(rng: &mut impl Rng, f: Field, r: usize, c: usize) -> FieldMatrix {
        FieldMatrix::from_fn(f, r, c, |_, _| rng.gen_range(0..f.order()))
    }

    #[test]
    fn product_basics() {
        let ops = OpCounter::new();
        let f = gf7();
        let x = FieldMatrix::from_rows(f, &[[1, 2, 3], [4, 5, 6], [0, 1, 2]]).unwrap();
        assert_eq!(FieldMatrix::identity(f, 3).mul(&x, &ops).unwrap(), x);
        let z = FieldMatrix::zeros(f, 3, 3);
        assert_eq!(z.mul(&x, &ops).unwrap(), z);
        assert_eq!(ops.count().muls, 54);
        let bad = FieldMatrix::zeros(f, 2, 2);
        assert!(matches!(x.mul(&bad, &ops), Err(Error::DimensionMismatch(_))));
        let other = FieldMatrix::identity(Field::prime(11).unwrap(), 3);
        assert_eq!(x.mul(&other, &ops), Err(Error::FieldMismatch));
    }

    #[test]
    fn inverse_examples() {
        let ops = OpCounter::new();
        let f = gf7();
        let i3 = FieldMatrix::identity(f, 3);
        assert_eq!(i3.inverse(&ops).unwrap(), i3);
        let a = FieldMatrix::from_rows(f, &[[1, 0], [1, 1]]).unwrap();
        let expected = FieldMatrix::from_rows(f, &[[1, 0], [6, 1]]).unwrap();
        assert_eq!(a.inverse(&ops).unwrap(), expected);
        let s = FieldMatrix::from_rows(f, &[[1, 1], [1, 1]]).unwrap();
        assert_eq!(s.inverse(&ops), Err(Error::SingularMatrix));
    }

    #[test]
    fn random_inverses() {
        let ops = OpCounter::new();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for f in [gf7(), Field::binary(4).unwrap(), Field::fermat(), Field::binary(16).unwrap()] {
            for n in 1..=12 {
                let id = FieldMatrix::identity(f, n);
                let mut found = 0;
                while found < 100 {
                    let m = random_matrix(&mut rng, f, n, n);
                    if let Ok(inv) = m.inverse(&ops) {
                        assert_eq!(inv.mul(&m, &ops).unwrap(), id);
                        assert_eq!(m.mul(&inv, &ops).unwrap(), id);
                        found += 1;
                    }
                }
            }
        }
    }

    #[test]
    fn vandermonde_examples() {
        let f = gf7();
        let v = vandermonde(f, &[1, 2, 3], 2).unwrap();
        assert_eq!(v, FieldMatrix::from_rows(f, &[[1, 1], [1, 2], [1, 3]]).unwrap());
        let ones = vandermonde(f, &[1, 2, 3, 4], 1).unwrap();
        assert!(ones.to_rows().iter().all(|r| r == &[1]));
        assert_eq!(vandermonde(f, &[1, 1], 1), Err(Error::DuplicatePoints));
        let v5 = vandermonde(f, &f.enumerate(5).unwrap(), 3).unwrap();
        assert!(all_row_subsets_invertible(&v5, 3));
    }

    #[test]
    fn extended_vandermonde_shapes() {
        // GF(4), ω = 2, ω² = 3, ω⁴ = ω.
        let f = Field::binary(2).unwrap();
        let ev = extended_vandermonde(f, 5, 3).unwrap();
        let expected = FieldMatrix::from_rows(f, &[[1, 0, 0], [1, 1, 1], [1, 2, 3], [1, 3, 2], [0, 0, 1]]).unwrap();
        assert_eq!(ev, expected);
        assert!(all_row_subsets_invertible(&ev, 3));
        let sq = extended_vandermonde(gf7(), 4, 4).unwrap();
        assert!(sq.is_invertible());
        assert!(matches!(extended_vandermonde(f, 6, 3), Err(Error::FieldTooSmall { .. })));
    }

    #[test]
    fn mds_rows_exhaustive_up_to_8() {
        for f in [Field::prime(11).unwrap(), Field::binary(3).unwrap()] {
            let q = f.order() as usize;
            for n in 1..=8.min(q + 1) {
                for k in 1..=n {
                    let ev = extended_vandermonde(f, n, k).unwrap();
                    assert!(all_row_subsets_invertible(&ev, k), "{f} n={n} k={k}");
                    if n <= q {
                        let v = vandermonde(f, &f.enumerate(n).unwrap(), k).unwrap();
                        assert!(all_row_subsets_invertible(&v, k), "{f} n={n} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn row_selection_and_transpose() {
        let f = gf7();
        let a = FieldMatrix::from_fn(f, 6, 4, |r, c| ((r * 4 + c) % 7) as u32);
        assert_eq!(a.transpose().transpose(), a);
        let s = a.submatrix_rows(&[0, 1, 3]).unwrap();
        assert_eq!(s.row(2), a.row(3));
        let empty = a.submatrix_rows(&[]).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 4));
        assert_eq!(a.submatrix_rows(&[1, 1]), Err(Error::DuplicateIndex(1)));
        assert!(matches!(a.submatrix_rows(&[6]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn congruence_preserves_skew_symmetry() {
        let ops = OpCounter::new();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in [gf7(), Field::binary(3).unwrap(), Field::fermat()] {
            let n = 5;
            let i5 = FieldMatrix::identity(f, n);
            for _ in 0..50 {
                let upper: Vec<u32> = (0..10).map(|_| rng.gen_range(0..f.order())).collect();
                let m = SkewSymmetric::from_strict_upper(f, n, &upper).unwrap();
                let p = random_matrix(&mut rng, f, n, n);
                let c = congruence(&p, m.as_matrix(), &ops).unwrap();
                assert!(SkewSymmetric::try_from(c).is_ok());
                assert_eq!(congruence(&i5, m.as_matrix(), &ops).unwrap(), *m.as_matrix());
            }
            let z = FieldMatrix::zeros(f, n, n);
            assert_eq!(congruence(&i5, &z, &ops).unwrap(), z);
        }
    }

    #[test]
    fn char2_skew_needs_zero_diagonal() {
        let f = Field::binary(2).unwrap();
        let m = FieldMatrix::from_rows(f, &[[1, 2], [2, 0]]).unwrap();
        assert!(m.is_symmetric());
        assert_eq!(SkewSymmetric::try_from(m), Err(Error::NotSkewSymmetric));
    }

    #[test]
    fn subsets_enumerated() {
        let mut seen = Vec::new();
        for_each_subset(5, 3, |s| {
            seen.push(s.to_vec());
            true
        });
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[9], vec![2, 3, 4]);
        let mut count = 0;
        for_each_subset(4, 0, |_| {
            count += 1;
            true
        });
        assert_eq!(count, 1);
    }
}
