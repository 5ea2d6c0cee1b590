//! Linear algebra over the valuation ring `R`.
//!
//! All echelon and Smith computations are written against [`DvrArith`], which
//! is implemented by the exact field ([`Exact`]) and by the truncated rings
//! `R/ϖ^P R` in [`trunc`]. Module computations run in a truncated ring once a
//! precision is reached at which the answer is provably exact, and lift back.

mod lattice;
mod module;
pub mod trunc;

pub use lattice::{distance, Lattice, LatticeClass};
pub use module::{compute_order, module_add_and_saturate, Certificate, ComputedOrder, MatrixModule, OrderOptions};

use std::fmt::Debug;

use crate::field::{Valuation, ValuedField};

/// Arithmetic of `R` (or `K`, or `R/ϖ^P R`) as needed for echelon forms.
pub trait DvrArith {
    type E: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `None` for zero.
    fn val(&self, a: &Self::E) -> Option<i64>;
    fn pi_pow(&self, k: i64) -> Self::E;
    /// `a ϖ^{-k}`; in a truncated ring requires `val(a) ≥ k` and returns some lift.
    fn shift_down(&self, a: &Self::E, k: i64) -> Self::E;
    /// Inverse of the unit `a ϖ^{-val(a)}`.
    fn unit_part_inverse(&self, a: &Self::E) -> Self::E;
    /// Canonical representative of `a` modulo `ϖ^k R`.
    fn canonical_rem(&self, a: &Self::E, k: i64) -> Self::E;
}

/// The exact field, viewed through [`DvrArith`].
pub struct Exact<'a, F>(pub &'a F);

impl<F: ValuedField> DvrArith for Exact<'_, F> {
    type E = F::Elem;

    fn zero(&self) -> F::Elem {
        self.0.zero()
    }
    fn is_zero(&self, a: &F::Elem) -> bool {
        self.0.is_zero(a)
    }
    fn add(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.0.add(a, b)
    }
    fn sub(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.0.sub(a, b)
    }
    fn mul(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.0.mul(a, b)
    }
    fn val(&self, a: &F::Elem) -> Option<i64> {
        self.0.val(a).finite()
    }
    fn pi_pow(&self, k: i64) -> F::Elem {
        self.0.uniformizer_pow(k)
    }
    fn shift_down(&self, a: &F::Elem, k: i64) -> F::Elem {
        if k == 0 {
            return a.clone();
        }
        self.0.mul(a, &self.0.uniformizer_pow(-k))
    }
    fn unit_part_inverse(&self, a: &F::Elem) -> F::Elem {
        self.0.inv(&self.0.unit_part(a)).expect("nonzero")
    }
    fn canonical_rem(&self, a: &F::Elem, k: i64) -> F::Elem {
        self.0.canonical_rem(a, k)
    }
}

fn axpy<A: DvrArith>(a: &A, dst: &mut [A::E], factor: &A::E, src: &[A::E]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !a.is_zero(s) {
            *d = a.sub(d, &a.mul(factor, s));
        }
    }
}

fn scale<A: DvrArith>(a: &A, v: &mut [A::E], c: &A::E) {
    for x in v.iter_mut() {
        if !a.is_zero(x) {
            *x = a.mul(x, c);
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Row<E> {
    pivot: usize,
    exp: i64,
    v: Vec<E>,
}

/// An `R`-submodule of `K^m` in row echelon form: every basis vector vanishes
/// before its pivot column, where its entry is exactly `ϖ^exp`. Pivot
/// columns are distinct and sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct Echelon<E> {
    dim: usize,
    rows: Vec<Row<E>>,
}

impl<E: Clone + PartialEq + Debug> Echelon<E> {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// `(pivot column, exponent)` per basis vector.
    pub fn pivots(&self) -> Vec<(usize, i64)> {
        self.rows.iter().map(|r| (r.pivot, r.exp)).collect()
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[E]> {
        self.rows.iter().map(|r| r.v.as_slice())
    }

    fn normalize<A: DvrArith<E = E>>(a: &A, v: &mut [E], c: usize) -> i64 {
        let k = a.val(&v[c]).expect("pivot entry is nonzero");
        let u = a.unit_part_inverse(&v[c]);
        scale(a, v, &u);
        v[c] = a.pi_pow(k);
        k
    }

    /// Adds `v` to the module; returns whether the module grew.
    pub fn insert<A: DvrArith<E = E>>(&mut self, a: &A, mut v: Vec<E>) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut grew = false;
        let mut start = 0;
        loop {
            let Some(c) = (start..self.dim).find(|&c| !a.is_zero(&v[c])) else {
                return grew;
            };
            start = c;
            match self.rows.binary_search_by_key(&c, |r| r.pivot) {
                Ok(i) => {
                    let k = self.rows[i].exp;
                    let kv = a.val(&v[c]).unwrap();
                    if kv >= k {
                        let factor = a.shift_down(&v[c], k);
                        axpy(a, &mut v, &factor, &self.rows[i].v);
                        v[c] = a.zero();
                    } else {
                        let kv = Self::normalize(a, &mut v, c);
                        std::mem::swap(&mut v, &mut self.rows[i].v);
                        self.rows[i].exp = kv;
                        grew = true;
                    }
                }
                Err(i) => {
                    let k = Self::normalize(a, &mut v, c);
                    self.rows.insert(i, Row { pivot: c, exp: k, v });
                    return true;
                }
            }
        }
    }

    pub fn contains<A: DvrArith<E = E>>(&self, a: &A, v: &[E]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        let mut start = 0;
        loop {
            let Some(c) = (start..self.dim).find(|&c| !a.is_zero(&v[c])) else {
                return true;
            };
            start = c;
            let Ok(i) = self.rows.binary_search_by_key(&c, |r| r.pivot) else {
                return false;
            };
            let k = self.rows[i].exp;
            if a.val(&v[c]).unwrap() < k {
                return false;
            }
            let factor = a.shift_down(&v[c], k);
            axpy(a, &mut v, &factor, &self.rows[i].v);
            v[c] = a.zero();
        }
    }

    /// Reduces every entry sitting in a later pivot column to its canonical
    /// residue modulo that pivot. The result is unique per module.
    pub fn canonicalize<A: DvrArith<E = E>>(&mut self, a: &A) {
        for i in 0..self.rows.len() {
            for j in i + 1..self.rows.len() {
                let (c, k) = (self.rows[j].pivot, self.rows[j].exp);
                let x = self.rows[i].v[c].clone();
                if a.is_zero(&x) {
                    continue;
                }
                let r = a.canonical_rem(&x, k);
                let diff = a.sub(&x, &r);
                if a.is_zero(&diff) {
                    continue;
                }
                let q = a.shift_down(&diff, k);
                let (head, tail) = self.rows.split_at_mut(j);
                axpy(a, &mut head[i].v, &q, &tail[0].v);
                head[i].v[c] = r;
            }
        }
    }

    /// Builds an echelon form from rows already known to be one.
    pub fn from_rows_unchecked(dim: usize, rows: Vec<(usize, i64, Vec<E>)>) -> Self {
        let rows: Vec<Row<E>> = rows.into_iter().map(|(pivot, exp, v)| Row { pivot, exp, v }).collect();
        debug_assert!(rows.windows(2).all(|w| w[0].pivot < w[1].pivot));
        Echelon { dim, rows }
    }

    pub fn map<T: Clone + PartialEq + Debug>(&self, mut g: impl FnMut(&E) -> T) -> Echelon<T> {
        Echelon {
            dim: self.dim,
            rows: self
                .rows
                .iter()
                .map(|r| Row { pivot: r.pivot, exp: r.exp, v: r.v.iter().map(&mut g).collect() })
                .collect(),
        }
    }
}

/// Valuations of the elementary divisors of the `R`-module spanned by the
/// given vectors, ascending.
pub fn smith_divisors<A: DvrArith>(a: &A, vectors: &[Vec<A::E>]) -> Vec<i64> {
    let mut rows: Vec<Vec<A::E>> = vectors.iter().filter(|v| v.iter().any(|x| !a.is_zero(x))).cloned().collect();
    let mut out = Vec::new();
    loop {
        let mut best: Option<(i64, usize, usize)> = None;
        for (i, r) in rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                if let Some(v) = a.val(x) {
                    if best.is_none_or(|(b, _, _)| v < b) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((k, i, j)) = best else {
            break;
        };
        out.push(k);
        let mut pivot_row = rows.swap_remove(i);
        let u = a.unit_part_inverse(&pivot_row[j]);
        scale(a, &mut pivot_row, &u);
        pivot_row[j] = a.pi_pow(k);
        for r in rows.iter_mut() {
            if a.is_zero(&r[j]) {
                continue;
            }
            let factor = a.shift_down(&r[j], k);
            axpy(a, r, &factor, &pivot_row);
            r[j] = a.zero();
        }
        rows.retain(|r| r.iter().any(|x| !a.is_zero(x)));
    }
    out.sort_unstable();
    out
}

/// Canonical echelon basis of an `R`-span together with its elementary
/// divisor valuations.
#[derive(Clone, Debug, PartialEq)]
pub struct Hnf<E> {
    pub echelon: Echelon<E>,
    pub divisors: Vec<i64>,
}

impl<E: Clone + PartialEq + Debug> Hnf<E> {
    pub fn basis(&self) -> Vec<Vec<E>> {
        self.echelon.vectors().map(<[E]>::to_vec).collect()
    }
}

/// Hermite form over `R`: pivots of least valuation, pivot entries powers of
/// `ϖ`, entries above pivots canonical modulo the pivot.
pub fn hnf_dvr<F: ValuedField>(f: &F, dim: usize, vectors: &[Vec<F::Elem>]) -> Hnf<F::Elem> {
    let a = Exact(f);
    let mut ech = Echelon::new(dim);
    for v in vectors {
        ech.insert(&a, v.clone());
    }
    ech.canonicalize(&a);
    let basis: Vec<Vec<F::Elem>> = ech.vectors().map(<[F::Elem]>::to_vec).collect();
    let divisors = smith_divisors(&a, &basis);
    Hnf { echelon: ech, divisors }
}

/// Minimum valuation over a collection of entries.
pub fn min_val<'a, F: ValuedField + 'a>(f: &F, xs: impl IntoIterator<Item = &'a F::Elem>) -> Valuation {
    xs.into_iter().map(|x| f.val(x)).min().unwrap_or(Valuation::Infinity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{LaurentField, PAdicRationals};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn vecs(f: &PAdicRationals, rows: &[&[&str]]) -> Vec<Vec<num_rational::BigRational>> {
        rows.iter().map(|r| r.iter().map(|s| f.parse(s).unwrap()).collect()).collect()
    }

    #[test]
    fn identity_is_canonical() {
        let f = PAdicRationals::new(2).unwrap();
        let h = hnf_dvr(&f, 3, &vecs(&f, &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]]));
        assert_eq!(h.divisors, vec![0, 0, 0]);
        assert_eq!(h.basis(), vecs(&f, &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]]));
    }

    #[test]
    fn hand_reduction() {
        // R(1,1) + 2R^2 at p = 2
        let f = PAdicRationals::new(2).unwrap();
        let h = hnf_dvr(&f, 2, &vecs(&f, &[&["2", "0"], &["0", "2"], &["1", "1"]]));
        assert_eq!(h.divisors, vec![0, 1]);
        assert_eq!(h.basis(), vecs(&f, &[&["1", "1"], &["0", "2"]]));
        let dup = hnf_dvr(&f, 2, &vecs(&f, &[&["2", "0"], &["0", "2"], &["1", "1"], &["1", "1"], &["2", "0"]]));
        assert_eq!(dup, h);
    }

    #[test]
    fn membership_and_scaling() {
        let f = PAdicRationals::new(3).unwrap();
        let h = hnf_dvr(&f, 2, &vecs(&f, &[&["1", "2"], &["0", "9"]]));
        let a = Exact(&f);
        assert!(h.echelon.contains(&a, &vecs(&f, &[&["1", "2"]])[0]));
        assert!(h.echelon.contains(&a, &vecs(&f, &[&["1/2", "1"]])[0]));
        assert!(!h.echelon.contains(&a, &vecs(&f, &[&["1/3", "2/3"]])[0]));
        assert!(!h.echelon.contains(&a, &vecs(&f, &[&["0", "3"]])[0]));
    }

    #[test]
    fn negative_valuations_allowed() {
        let g = LaurentField::new(2).unwrap();
        let t_inv = g.uniformizer_pow(-1);
        let one = g.one();
        let h = hnf_dvr(&g, 2, &[vec![t_inv.clone(), one.clone()], vec![g.zero(), one.clone()]]);
        assert_eq!(h.divisors, vec![-1, 0]);
    }

    fn random_vectors(
        f: &PAdicRationals,
        rng: &mut ChaCha8Rng,
        count: usize,
        dim: usize,
    ) -> Vec<Vec<num_rational::BigRational>> {
        (0..count)
            .map(|_| {
                (0..dim)
                    .map(|_| {
                        let num = rng.gen_range(-20i64..=20);
                        let den = [1i64, 2, 3, 4, 6, 9][rng.gen_range(0..6)];
                        f.div(&f.from_i64(num), &f.from_i64(den)).unwrap()
                    })
                    .collect()
            })
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn hnf_span_and_idempotence(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 5]), count in 1usize..6, dim in 1usize..5) {
            let f = PAdicRationals::new(p).unwrap();
            let a = Exact(&f);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let input = random_vectors(&f, &mut rng, count, dim);
            let h = hnf_dvr(&f, dim, &input);
            for v in &input {
                prop_assert!(h.echelon.contains(&a, v));
            }
            let basis = h.basis();
            let mut back = Echelon::new(dim);
            for v in &input {
                back.insert(&a, v.clone());
            }
            for v in &basis {
                prop_assert!(back.contains(&a, v));
            }
            let again = hnf_dvr(&f, dim, &basis);
            prop_assert_eq!(again, h);
        }
    }
}
