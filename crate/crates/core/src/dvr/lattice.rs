//! Full-rank lattices in `K^N` and their homothety classes.

use serde::Serialize;

use super::{hnf_dvr, smith_divisors, Exact, Hnf};
use crate::error::{Error, Result};
use crate::field::{Valuation, ValuedField};
use crate::matrix::Matrix;

/// A full-rank `R`-lattice in `K^N`, stored in canonical Hermite form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice<E> {
    n: usize,
    basis: Vec<Vec<E>>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> Lattice<E> {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Canonical basis vectors.
    pub fn basis(&self) -> &[Vec<E>] {
        &self.basis
    }

    /// The basis as the columns of a matrix.
    pub fn basis_matrix(&self) -> Matrix<E> {
        Matrix::from_columns(&self.basis)
    }
}

impl<E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug> Lattice<E> {
    /// The `R`-span of `vectors`; fails unless it has rank `n`.
    pub fn span<F: ValuedField<Elem = E>>(f: &F, n: usize, vectors: &[Vec<E>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch(format!("vector of length {} in dimension {n}", v.len())));
        }
        let h: Hnf<E> = hnf_dvr(f, n, vectors);
        if h.echelon.rank() < n {
            return Err(Error::NotFullRank { rank: h.echelon.rank(), expected: n });
        }
        Ok(Lattice { n, basis: h.basis() })
    }

    pub fn from_basis_matrix<F: ValuedField<Elem = E>>(f: &F, b: &Matrix<E>) -> Result<Self> {
        Self::span(f, b.rows(), &b.columns())
    }

    pub fn standard<F: ValuedField<Elem = E>>(f: &F, n: usize) -> Self {
        Self::from_basis_matrix(f, &Matrix::identity(f, n)).expect("identity has full rank")
    }

    pub fn contains<F: ValuedField<Elem = E>>(&self, f: &F, v: &[E]) -> bool {
        let inv = self.basis_matrix().inverse(f).expect("lattice basis is invertible");
        inv.mul_vec(f, v).iter().all(|x| f.is_integral(x))
    }

    pub fn contains_lattice<F: ValuedField<Elem = E>>(&self, f: &F, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(f, v))
    }

    /// `ϖ^k L`.
    pub fn scaled<F: ValuedField<Elem = E>>(&self, f: &F, k: i64) -> Self {
        let c = f.uniformizer_pow(k);
        let vs: Vec<Vec<E>> = self.basis.iter().map(|v| v.iter().map(|x| f.mul(x, &c)).collect()).collect();
        Self::span(f, self.n, &vs).expect("scaling keeps full rank")
    }

    /// `g L`.
    pub fn transform<F: ValuedField<Elem = E>>(&self, f: &F, g: &Matrix<E>) -> Result<Self> {
        let vs: Vec<Vec<E>> = self.basis.iter().map(|v| g.mul_vec(f, v)).collect();
        Self::span(f, self.n, &vs)
    }

    pub fn sum<F: ValuedField<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Self::span(f, self.n, &vs).expect("sum of full-rank lattices")
    }

    /// `L^∨ = {x : ⟨x, L⟩ ⊆ R}`.
    pub fn dual<F: ValuedField<Elem = E>>(&self, f: &F) -> Self {
        let inv = self.basis_matrix().inverse(f).expect("lattice basis is invertible");
        Self::from_basis_matrix(f, &inv.transpose()).expect("dual has full rank")
    }

    pub fn intersection<F: ValuedField<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.dual(f).sum(f, &other.dual(f)).dual(f)
    }

    /// Least valuation of an element of the lattice.
    pub fn min_valuation<F: ValuedField<Elem = E>>(&self, f: &F) -> i64 {
        self.basis.iter().flatten().map(|x| f.val(x)).min().and_then(Valuation::finite).expect("nonzero lattice")
    }

    /// Elementary divisor valuations of `other` relative to `self`.
    pub fn relative_divisors<F: ValuedField<Elem = E>>(&self, f: &F, other: &Self) -> Vec<i64> {
        let inv = self.basis_matrix().inverse(f).expect("lattice basis is invertible");
        let rel = inv.mul(f, &other.basis_matrix());
        smith_divisors(&Exact(f), &rel.columns())
    }
}

/// The homothety class `[L]`, represented by the unique member contained in
/// `R^N` but not in `ϖR^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct LatticeClass<E> {
    #[serde(skip)]
    rep: Option<Lattice<E>>,
    key: Vec<Vec<String>>,
}

impl<E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug> LatticeClass<E> {
    pub fn new<F: ValuedField<Elem = E>>(f: &F, lattice: &Lattice<E>) -> Self {
        let m = lattice.min_valuation(f);
        let rep = if m == 0 { lattice.clone() } else { lattice.scaled(f, -m) };
        let key = rep.basis.iter().map(|v| v.iter().map(|x| f.format(x)).collect()).collect();
        LatticeClass { rep: Some(rep), key }
    }

    pub fn representative(&self) -> &Lattice<E> {
        self.rep.as_ref().expect("class constructed from a lattice")
    }

    /// The canonical basis vectors, formatted.
    pub fn key(&self) -> &[Vec<String>] {
        &self.key
    }
}

impl<E: Eq> PartialOrd for LatticeClass<E> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<E: Eq> Ord for LatticeClass<E> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key.cmp(&other.key)
    }
}

/// Graph distance between two vertices of the building: the spread of the
/// elementary divisors of one lattice relative to the other.
pub fn distance<F: ValuedField>(f: &F, a: &LatticeClass<F::Elem>, b: &LatticeClass<F::Elem>) -> u64 {
    let d = a.representative().relative_divisors(f, b.representative());
    (d.last().unwrap() - d.first().unwrap()) as u64
}
