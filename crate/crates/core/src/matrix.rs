//! Dense matrices over a [`ValuedField`]. Arithmetic takes the field as an
//! explicit argument.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Valuation, ValuedField};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
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

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: E) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[E] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<E> {
        self.data
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn map<T, G: FnMut(&E) -> T>(&self, f: G) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<T, G: FnMut(&E) -> Result<T>>(&self, f: G) -> Result<Matrix<T>> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_>>()? })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<E>]) -> Self {
        let r = cols.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * cols.len());
        for i in 0..r {
            for c in cols {
                data.push(c[i].clone());
            }
        }
        Matrix { rows: r, cols: cols.len(), data }
    }

    pub fn columns(&self) -> Vec<Vec<E>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }
}

impl<E: Clone> Matrix<E> {
    pub fn identity<F: ValuedField<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Matrix::filled(n, n, f.zero());
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    pub fn zeros<F: ValuedField<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, f.zero())
    }

    pub fn from_i64<F: ValuedField<Elem = E>>(f: &F, rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect())
    }

    /// The matrix unit `E_ij` of size `n`.
    pub fn unit<F: ValuedField<Elem = E>>(f: &F, n: usize, i: usize, j: usize) -> Self {
        let mut m = Matrix::zeros(f, n, n);
        m.set(i, j, f.one());
        m
    }

    pub fn mul<F: ValuedField<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        out
    }

    pub fn mul_vec<F: ValuedField<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !f.is_zero(a) && !f.is_zero(b))
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    pub fn add<F: ValuedField<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub<F: ValuedField<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale<F: ValuedField<Elem = E>>(&self, f: &F, c: &E) -> Self {
        self.map(|a| f.mul(a, c))
    }

    pub fn is_zero<F: ValuedField<Elem = E>>(&self, f: &F) -> bool {
        self.data.iter().all(|a| f.is_zero(a))
    }

    pub fn trace<F: ValuedField<Elem = E>>(&self, f: &F) -> E {
        (0..self.rows.min(self.cols)).fold(f.zero(), |acc, i| f.add(&acc, self.get(i, i)))
    }

    /// Minimum valuation over all entries.
    pub fn min_valuation<F: ValuedField<Elem = E>>(&self, f: &F) -> Valuation {
        self.data.iter().map(|a| f.val(a)).min().unwrap_or(Valuation::Infinity)
    }

    pub fn is_integral<F: ValuedField<Elem = E>>(&self, f: &F) -> bool {
        self.data.iter().all(|a| f.is_integral(a))
    }

    /// Gaussian elimination choosing the pivot of least valuation, which keeps
    /// intermediate entries small for the exact backends.
    fn eliminate<F: ValuedField<Elem = E>>(&self, f: &F, mut aug: Option<&mut Self>) -> (Self, E, bool) {
        let n = self.rows;
        let mut a = self.clone();
        let mut det = f.one();
        for c in 0..n {
            let pivot = (c..n).filter(|&r| !f.is_zero(a.get(r, c))).min_by_key(|&r| f.val(a.get(r, c)));
            let Some(r) = pivot else {
                return (a, f.zero(), false);
            };
            if r != c {
                a.swap_rows(r, c);
                if let Some(b) = aug.as_deref_mut() {
                    b.swap_rows(r, c);
                }
                det = f.neg(&det);
            }
            let p = a.get(c, c).clone();
            det = f.mul(&det, &p);
            let pinv = f.inv(&p).unwrap();
            for rr in 0..n {
                if rr == c || (aug.is_none() && rr < c) {
                    continue;
                }
                let factor = f.mul(a.get(rr, c), &pinv);
                if f.is_zero(&factor) {
                    continue;
                }
                a.axpy_row(f, rr, c, &factor);
                if let Some(b) = aug.as_deref_mut() {
                    b.axpy_row(f, rr, c, &factor);
                }
            }
            if let Some(b) = aug.as_deref_mut() {
                for j in 0..b.cols {
                    let v = f.mul(b.get(c, j), &pinv);
                    b.set(c, j, v);
                }
                for j in c..n {
                    let v = f.mul(a.get(c, j), &pinv);
                    a.set(c, j, v);
                }
            }
        }
        (a, det, true)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `row[dst] -= factor * row[src]`
    fn axpy_row<F: ValuedField<Elem = E>>(&mut self, f: &F, dst: usize, src: usize, factor: &E) {
        for j in 0..self.cols {
            let s = self.get(src, j);
            if f.is_zero(s) {
                continue;
            }
            let v = f.sub(self.get(dst, j), &f.mul(factor, s));
            self.set(dst, j, v);
        }
    }

    pub fn determinant<F: ValuedField<Elem = E>>(&self, f: &F) -> E {
        assert!(self.is_square());
        self.eliminate(f, None).1
    }

    pub fn inverse<F: ValuedField<Elem = E>>(&self, f: &F) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let mut inv = Matrix::identity(f, self.rows);
        let (_, _, ok) = self.eliminate(f, Some(&mut inv));
        if ok {
            Ok(inv)
        } else {
            Err(Error::Singular)
        }
    }

    pub fn format<F: ValuedField<Elem = E>>(&self, f: &F) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|a| f.format(a)).collect()).collect()
    }

    pub fn parse<F: ValuedField<Elem = E>>(f: &F, rows: &[Vec<String>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| f.parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if parsed.iter().any(|r| r.len() != parsed[0].len()) {
            return Err(Error::Parse("ragged matrix".into()));
        }
        Ok(Matrix::from_rows(parsed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{LaurentField, PAdicRationals};

    #[test]
    fn inverse_and_determinant() {
        let f = PAdicRationals::new(3).unwrap();
        let a = Matrix::from_i64(&f, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(f.format(&a.determinant(&f)), "18");
        let ai = a.inverse(&f).unwrap();
        assert_eq!(a.mul(&f, &ai), Matrix::identity(&f, 3));
        let sing = Matrix::from_i64(&f, &[&[1, 2], &[2, 4]]);
        assert_eq!(sing.inverse(&f), Err(Error::Singular));
        assert!(f.is_zero(&sing.determinant(&f)));
    }

    #[test]
    fn laurent_inverse() {
        let f = LaurentField::new(2).unwrap();
        let t = f.uniformizer_pow(1);
        let one = f.one();
        let a = Matrix::from_rows(vec![vec![t.clone(), one.clone()], vec![one.clone(), f.zero()]]);
        let ai = a.inverse(&f).unwrap();
        assert_eq!(ai.mul(&f, &a), Matrix::identity(&f, 2));
    }

    #[test]
    fn columns_round_trip() {
        let f = PAdicRationals::new(2).unwrap();
        let a = Matrix::from_i64(&f, &[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(Matrix::from_columns(&a.columns()), a);
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.mul_vec(&f, &[f.one(), f.zero(), f.one()]), vec![f.from_i64(4), f.from_i64(10)]);
    }
}
