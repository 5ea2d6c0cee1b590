//! Linear algebra over a finite residue field.

use crate::field::{ResidueElem, ResidueField};
use crate::matrix::Matrix;

pub type KMatrix = Matrix<ResidueElem>;

/// Row-reduces in place to reduced echelon form, returning pivot columns.
pub fn rref_in_place(k: &ResidueField, rows: &mut Vec<Vec<ResidueElem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = k.inv(rows[r][c]).unwrap();
        if inv != 1 {
            for x in rows[r].iter_mut() {
                *x = k.mul(*x, inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let factor = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if y != 0 {
                    *x = k.sub(*x, k.mul(factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(k: &ResidueField, m: &KMatrix) -> usize {
    let mut rows: Vec<Vec<ResidueElem>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    rref_in_place(k, &mut rows).len()
}

pub fn mul(k: &ResidueField, a: &KMatrix, b: &KMatrix) -> KMatrix {
    assert_eq!(a.cols(), b.rows());
    let mut out = Matrix::filled(a.rows(), b.cols(), 0);
    for i in 0..a.rows() {
        for l in 0..a.cols() {
            let x = *a.get(i, l);
            if x == 0 {
                continue;
            }
            for j in 0..b.cols() {
                let y = *b.get(l, j);
                if y != 0 {
                    let v = k.add(*out.get(i, j), k.mul(x, y));
                    out.set(i, j, v);
                }
            }
        }
    }
    out
}

pub fn mul_vec(k: &ResidueField, a: &KMatrix, v: &[ResidueElem]) -> Vec<ResidueElem> {
    (0..a.rows())
        .map(|i| {
            a.row(i).iter().zip(v).fold(0, |acc, (&x, &y)| if x == 0 || y == 0 { acc } else { k.add(acc, k.mul(x, y)) })
        })
        .collect()
}

pub fn identity(n: usize) -> KMatrix {
    let mut m = Matrix::filled(n, n, 0);
    for i in 0..n {
        m.set(i, i, 1);
    }
    m
}

/// Basis of the right kernel `{v : a v = 0}`.
pub fn nullspace(k: &ResidueField, a: &KMatrix) -> Vec<Vec<ResidueElem>> {
    let n = a.cols();
    let mut rows: Vec<Vec<ResidueElem>> = (0..a.rows()).map(|i| a.row(i).to_vec()).collect();
    let pivots = rref_in_place(k, &mut rows);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0; n];
            v[fc] = 1;
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = k.neg(row[fc]);
            }
            v
        })
        .collect()
}

/// A subspace of `k^N`, stored as its reduced echelon basis. Equality of
/// subspaces is equality of this representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    dim_ambient: usize,
    basis: Vec<Vec<ResidueElem>>,
}

impl Subspace {
    pub fn span(k: &ResidueField, dim_ambient: usize, mut vectors: Vec<Vec<ResidueElem>>) -> Self {
        vectors.retain(|v| v.iter().any(|&x| x != 0));
        if vectors.is_empty() {
            return Subspace { dim_ambient, basis: Vec::new() };
        }
        rref_in_place(k, &mut vectors);
        Subspace { dim_ambient, basis: vectors }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim_ambient
    }

    pub fn basis(&self) -> &[Vec<ResidueElem>] {
        &self.basis
    }

    pub fn is_proper_nonzero(&self) -> bool {
        self.dim() > 0 && self.dim() < self.dim_ambient
    }

    pub fn contains(&self, k: &ResidueField, v: &[ResidueElem]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rref_in_place(k, &mut rows).len() == self.dim()
    }

    pub fn sum(&self, k: &ResidueField, other: &Subspace) -> Subspace {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Subspace::span(k, self.dim_ambient, v)
    }

    pub fn is_invariant(&self, k: &ResidueField, gens: &[KMatrix]) -> bool {
        gens.iter().all(|g| self.basis.iter().all(|v| self.contains(k, &mul_vec(k, g, v))))
    }
}

/// Incrementally maintained row echelon form.
#[derive(Clone, Debug, Default)]
pub struct RowEchelon {
    rows: Vec<(usize, Vec<ResidueElem>)>,
}

impl RowEchelon {
    pub fn new() -> Self {
        RowEchelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, k: &ResidueField, v: &mut [ResidueElem]) {
        for (c, row) in &self.rows {
            let x = v[*c];
            if x != 0 {
                for (a, &b) in v.iter_mut().zip(row).skip(*c) {
                    if b != 0 {
                        *a = k.sub(*a, k.mul(x, b));
                    }
                }
            }
        }
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, k: &ResidueField, mut v: Vec<ResidueElem>) -> bool {
        self.reduce(k, &mut v);
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = k.inv(v[c]).unwrap();
        for x in v.iter_mut() {
            *x = k.mul(*x, inv);
        }
        self.rows.push((c, v));
        true
    }

    pub fn contains(&self, k: &ResidueField, v: &[ResidueElem]) -> bool {
        let mut v = v.to_vec();
        self.reduce(k, &mut v);
        v.iter().all(|&x| x == 0)
    }
}

/// Smallest subspace containing `seeds` and stable under every matrix in `gens`.
pub fn spin(k: &ResidueField, dim: usize, seeds: &[Vec<ResidueElem>], gens: &[KMatrix]) -> Subspace {
    let mut ech = RowEchelon::new();
    let mut rows: Vec<Vec<ResidueElem>> = Vec::new();
    let mut queue: Vec<Vec<ResidueElem>> = seeds.to_vec();
    while let Some(v) = queue.pop() {
        if ech.insert(k, v.clone()) {
            for g in gens {
                queue.push(mul_vec(k, g, &v));
            }
            rows.push(v);
            if rows.len() == dim {
                break;
            }
        }
    }
    Subspace::span(k, dim, rows)
}

/// A basis of the associative algebra generated by `gens` and the identity,
/// as matrices.
pub fn enveloping_algebra(k: &ResidueField, n: usize, gens: &[KMatrix]) -> Vec<KMatrix> {
    let mut basis: Vec<KMatrix> = Vec::new();
    let mut ech = RowEchelon::new();
    let mut queue = vec![identity(n)];
    while let Some(a) = queue.pop() {
        if ech.insert(k, a.as_slice().to_vec()) {
            for g in gens {
                queue.push(mul(k, g, &a));
            }
            basis.push(a);
            if basis.len() == n * n {
                break;
            }
        }
    }
    basis
}

/// A few elements of `span` generating it as an algebra, assuming the span
/// is itself an algebra containing the identity.
pub fn algebra_generators(k: &ResidueField, n: usize, span: &[KMatrix]) -> Vec<KMatrix> {
    let mut target = RowEchelon::new();
    for m in span {
        target.insert(k, m.as_slice().to_vec());
    }
    let mut chosen: Vec<KMatrix> = Vec::new();
    let mut generated = RowEchelon::new();
    generated.insert(k, identity(n).into_vec());
    for m in span {
        if generated.rank() == target.rank() {
            break;
        }
        if generated.contains(k, m.as_slice()) {
            continue;
        }
        chosen.push(m.clone());
        generated = RowEchelon::new();
        for b in enveloping_algebra(k, n, &chosen) {
            generated.insert(k, b.into_vec());
        }
    }
    chosen
}
