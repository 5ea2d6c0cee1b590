//! Generators of `GL_n(R)` used to sample the group.

use rand::Rng;

use crate::field::ValuedField;
use crate::matrix::Matrix;

/// Permutation transpositions, elementary transvections `I + E_ij` and unit
/// diagonals `diag(1, …, u, …, 1)` for `u` in the field's unit sample set.
pub fn standard_generators<F: ValuedField>(f: &F, n: usize, level: u32) -> Vec<Matrix<F::Elem>> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut s = Matrix::identity(f, n);
            s.set(i, i, f.zero());
            s.set(j, j, f.zero());
            s.set(i, j, f.one());
            s.set(j, i, f.one());
            gens.push(s);
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut e = Matrix::identity(f, n);
                e.set(i, j, f.one());
                gens.push(e);
            }
        }
    }
    for u in f.unit_sample_set(level) {
        for i in 0..n {
            let mut d = Matrix::identity(f, n);
            d.set(i, i, u.clone());
            gens.push(d);
        }
    }
    gens
}

/// A random element of `GL_n(R)`: a short word in `gens` times a random unit
/// diagonal times a random transvection `I + a E_ij`, `a ∈ R`.
pub fn random_group_element<F: ValuedField, G: Rng>(
    f: &F,
    n: usize,
    gens: &[Matrix<F::Elem>],
    rng: &mut G,
) -> Matrix<F::Elem> {
    const DIGITS: u32 = 6;
    let mut g = Matrix::identity(f, n);
    if !gens.is_empty() {
        for _ in 0..rng.gen_range(1..=8) {
            g = g.mul(f, &gens[rng.gen_range(0..gens.len())]);
        }
    }
    let mut d = Matrix::identity(f, n);
    for i in 0..n {
        d.set(i, i, f.random_unit(rng, DIGITS));
    }
    g = g.mul(f, &d);
    if n > 1 {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let mut t = Matrix::identity(f, n);
        t.set(i, j, f.random_integral(rng, DIGITS));
        g = g.mul(f, &t);
    }
    g
}
