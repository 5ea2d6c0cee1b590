//! `R`-submodules of `M_N(K)` and the order generated by a representation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::trunc::{word_sized, Embed, ModPk, Trunc};
use super::{smith_divisors, DvrArith, Echelon, Exact};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, ValuedField};
use crate::generators::{random_group_element, standard_generators};
use crate::matrix::Matrix;
use crate::schur::SchurModule;

/// An `R`-submodule of `N×N` matrices, in canonical echelon form on the
/// row-major flattening.
#[derive(Clone, Debug)]
pub struct MatrixModule<F: ValuedField> {
    n: usize,
    echelon: Echelon<F::Elem>,
    divisors: Vec<i64>,
}

impl<F: ValuedField> MatrixModule<F> {
    pub fn span(f: &F, n: usize, mats: &[Matrix<F::Elem>]) -> Result<Self> {
        let a = Exact(f);
        let mut ech = Echelon::new(n * n);
        for m in mats {
            check_size(n, m)?;
            ech.insert(&a, m.as_slice().to_vec());
        }
        Ok(Self::from_echelon(f, n, ech))
    }

    fn from_echelon(f: &F, n: usize, mut echelon: Echelon<F::Elem>) -> Self {
        let a = Exact(f);
        echelon.canonicalize(&a);
        let basis: Vec<Vec<F::Elem>> = echelon.vectors().map(<[F::Elem]>::to_vec).collect();
        let divisors = smith_divisors(&a, &basis);
        MatrixModule { n, echelon, divisors }
    }

    /// The matrix size `N`.
    pub fn matrix_size(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn is_full_rank(&self) -> bool {
        self.echelon.is_full_rank()
    }

    /// Elementary divisor valuations, ascending.
    pub fn divisors(&self) -> &[i64] {
        &self.divisors
    }

    /// Least `s ≥ 0` with `ϖ^s M_N(R) ⊆ M`, for full-rank integral modules.
    pub fn congruence_level(&self) -> Option<u32> {
        if !self.is_full_rank() {
            return None;
        }
        Some(self.divisors.iter().copied().max().unwrap_or(0).max(0) as u32)
    }

    pub fn pivots(&self) -> Vec<(usize, i64)> {
        self.echelon.pivots()
    }

    pub fn basis(&self) -> Vec<Matrix<F::Elem>> {
        self.echelon.vectors().map(|v| Matrix::from_vec(self.n, self.n, v.to_vec())).collect()
    }

    pub fn contains(&self, f: &F, x: &Matrix<F::Elem>) -> bool {
        x.rows() == self.n && x.cols() == self.n && self.echelon.contains(&Exact(f), x.as_slice())
    }

    pub fn contains_module(&self, f: &F, other: &Self) -> bool {
        other.basis().iter().all(|b| self.contains(f, b))
    }

    /// Whether the module is closed under multiplication.
    pub fn is_ring(&self, f: &F) -> bool {
        let basis = self.basis();
        basis.iter().all(|x| basis.iter().all(|y| self.contains(f, &x.mul(f, y))))
    }
}

impl<F: ValuedField> PartialEq for MatrixModule<F> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.echelon == other.echelon
    }
}

fn check_size<E: Clone>(n: usize, m: &Matrix<E>) -> Result<()> {
    if m.rows() != n || m.cols() != n {
        return Err(Error::ShapeMismatch { expected: vec![n, n], found: vec![m.rows(), m.cols()] });
    }
    Ok(())
}

fn mat_mul<A: DvrArith>(a: &A, n: usize, x: &[A::E], y: &[A::E]) -> Vec<A::E> {
    let mut out = vec![a.zero(); n * n];
    for i in 0..n {
        for l in 0..n {
            let xv = &x[i * n + l];
            if a.is_zero(xv) {
                continue;
            }
            for j in 0..n {
                let yv = &y[l * n + j];
                if !a.is_zero(yv) {
                    let o = &mut out[i * n + j];
                    *o = a.add(o, &a.mul(xv, yv));
                }
            }
        }
    }
    out
}

/// Grows an echelon form under left multiplication (and optionally right
/// multiplication) by a growing set of generators.
struct Spinner<'a, A: DvrArith> {
    a: &'a A,
    n: usize,
    two_sided: bool,
    echelon: Echelon<A::E>,
    accepted: Vec<Vec<A::E>>,
    gens: Vec<Vec<A::E>>,
}

impl<'a, A: DvrArith> Spinner<'a, A> {
    fn new(a: &'a A, n: usize, two_sided: bool) -> Self {
        Spinner { a, n, two_sided, echelon: Echelon::new(n * n), accepted: Vec::new(), gens: Vec::new() }
    }

    fn run(&mut self, mut queue: Vec<Vec<A::E>>) {
        while let Some(v) = queue.pop() {
            if !self.echelon.insert(self.a, v.clone()) {
                continue;
            }
            for g in &self.gens {
                queue.push(mat_mul(self.a, self.n, g, &v));
                if self.two_sided {
                    queue.push(mat_mul(self.a, self.n, &v, g));
                }
            }
            self.accepted.push(v);
        }
    }

    fn add_generator(&mut self, g: Vec<A::E>) {
        let mut queue: Vec<Vec<A::E>> = self.accepted.iter().map(|v| mat_mul(self.a, self.n, &g, v)).collect();
        if self.two_sided {
            queue.extend(self.accepted.iter().map(|v| mat_mul(self.a, self.n, v, &g)));
        }
        self.gens.push(g);
        self.run(queue);
    }

    /// Adds `g` as a generator if it is not already in the module.
    fn absorb(&mut self, g: Vec<A::E>) -> bool {
        if self.echelon.contains(self.a, &g) {
            return false;
        }
        self.add_generator(g.clone());
        self.run(vec![g]);
        true
    }
}

/// The smallest ring containing `m` and `gens`. Inputs must be integral.
pub fn module_add_and_saturate<F: ValuedField>(
    f: &F,
    m: &MatrixModule<F>,
    gens: &[Matrix<F::Elem>],
) -> Result<MatrixModule<F>> {
    let n = m.n;
    for g in gens {
        check_size(n, g)?;
        if !g.is_integral(f) {
            return Err(Error::NonIntegralInput);
        }
    }
    let basis: Vec<Vec<F::Elem>> = m.echelon.vectors().map(<[F::Elem]>::to_vec).collect();
    if basis.iter().flatten().any(|x| !f.is_integral(x)) {
        return Err(Error::NonIntegralInput);
    }
    let a = Exact(f);
    let mut sp = Spinner::new(&a, n, true);
    for v in basis.iter().cloned().chain(gens.iter().map(|g| g.as_slice().to_vec())) {
        sp.absorb(v);
    }
    Ok(MatrixModule::from_echelon(f, n, sp.echelon))
}

/// Parameters of [`compute_order`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderOptions {
    /// Density level of the unit generators in equal characteristic.
    pub level: u32,
    /// Consecutive random group elements that must already lie in the order.
    pub trials: u32,
    pub seed: u64,
}

impl Default for OrderOptions {
    fn default() -> Self {
        OrderOptions { level: 2, trials: 64, seed: 0 }
    }
}

/// How the computed order is known to be correct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub status: String,
    pub level: u32,
    pub trials: u32,
    pub enlargements: u32,
    pub seed: u64,
    /// Working precision of the truncated computation, if one was used.
    pub precision: Option<u32>,
}

/// The order `H = R[ρ(GL_n(R))]` with its certificate.
#[derive(Clone, Debug)]
pub struct ComputedOrder<F: ValuedField> {
    pub module: MatrixModule<F>,
    pub certificate: Certificate,
    /// Images of the generators the order was spun from.
    pub generator_images: Vec<Matrix<F::Elem>>,
}

impl<F: ValuedField> Embed<F> for Exact<'_, F> {
    fn precision(&self) -> u32 {
        u32::MAX
    }
    fn embed(&self, _f: &F, x: &F::Elem) -> F::Elem {
        x.clone()
    }
    fn lift(&self, _f: &F, x: &F::Elem) -> F::Elem {
        x.clone()
    }
}

struct Outcome<E> {
    echelon: Echelon<E>,
    divisors: Vec<i64>,
    passed: u32,
    enlargements: u32,
}

struct Job<'a, F: ValuedField> {
    f: &'a F,
    module: &'a SchurModule,
    group_gens: Vec<Matrix<F::Elem>>,
    images: Vec<Matrix<F::Elem>>,
    opts: OrderOptions,
}

impl<F: ValuedField> Job<'_, F> {
    /// Spins and tests in `a`; in a truncated ring gives up unless the result
    /// contains `ϖ^s M_N(R)` for some `s` below the working precision.
    fn run<A: Embed<F>>(&self, a: &A, truncated: bool) -> Result<Option<Outcome<A::E>>> {
        let big = self.module.dim();
        let embed = |m: &Matrix<F::Elem>| m.as_slice().iter().map(|x| a.embed(self.f, x)).collect::<Vec<_>>();
        let mut sp = Spinner::new(a, big, false);
        sp.gens = self.images.iter().map(embed).collect();
        sp.run(vec![embed(&Matrix::identity(self.f, big))]);
        if truncated {
            if !sp.echelon.is_full_rank() {
                return Ok(None);
            }
            let basis: Vec<Vec<A::E>> = sp.echelon.vectors().map(<[A::E]>::to_vec).collect();
            let d = smith_divisors(a, &basis);
            if d.len() < big * big || d.iter().any(|&k| k >= a.precision() as i64) {
                return Ok(None);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed);
        let (mut passed, mut enlargements) = (0, 0);
        while passed < self.opts.trials {
            let g = random_group_element(self.f, self.module.n(), &self.group_gens, &mut rng);
            let img = self.module.rho(self.f, &g)?;
            if sp.absorb(embed(&img)) {
                enlargements += 1;
                passed = 0;
            } else {
                passed += 1;
            }
        }
        let mut echelon = sp.echelon;
        echelon.canonicalize(a);
        let basis: Vec<Vec<A::E>> = echelon.vectors().map(<[A::E]>::to_vec).collect();
        let divisors = smith_divisors(a, &basis);
        Ok(Some(Outcome { echelon, divisors, passed, enlargements }))
    }

    fn finish<A: Embed<F>>(&self, a: &A, out: Outcome<A::E>, precision: Option<u32>) -> ComputedOrder<F> {
        let echelon = out.echelon.map(|x| a.lift(self.f, x));
        let status = match self.f.spec() {
            FieldSpec::RationalAtP { .. } => "proven".to_string(),
            FieldSpec::RationalFunctionOverFq { .. } => {
                format!("certified at level {} / {} trials", self.opts.level, self.opts.trials)
            }
        };
        ComputedOrder {
            module: MatrixModule { n: self.module.dim(), echelon, divisors: out.divisors },
            certificate: Certificate {
                status,
                level: self.opts.level,
                trials: out.passed,
                enlargements: out.enlargements,
                seed: self.opts.seed,
                precision,
            },
            generator_images: self.images.clone(),
        }
    }
}

const PRECISIONS: [u32; 3] = [8, 16, 32];

/// The `R`-algebra generated by `ρ(GL_n(R))`, computed from the standard
/// generators and then tested against random group elements until
/// `opts.trials` consecutive ones lie in it.
pub fn compute_order<F: ValuedField>(f: &F, module: &SchurModule, opts: &OrderOptions) -> Result<ComputedOrder<F>> {
    let group_gens = standard_generators(f, module.n(), opts.level);
    let images = group_gens.iter().map(|g| module.rho(f, g)).collect::<Result<Vec<_>>>()?;
    let job = Job { f, module, group_gens, images, opts: *opts };
    let spec = f.spec();
    for prec in PRECISIONS {
        if word_sized(spec, prec) {
            let a = ModPk::new(spec.residue_characteristic(), prec);
            if let Some(out) = job.run(&a, true)? {
                return Ok(job.finish(&a, out, Some(prec)));
            }
        } else if matches!(spec, FieldSpec::RationalFunctionOverFq { .. }) {
            let a = Trunc::new(f, prec);
            if let Some(out) = job.run(&a, true)? {
                return Ok(job.finish(&a, out, Some(prec)));
            }
        }
    }
    let a = Exact(f);
    let out = job.run(&a, false)?.expect("exact run always finishes");
    Ok(job.finish(&a, out, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{LaurentField, PAdicRationals};
    use crate::schur::Realization;
    use crate::tableau::Partition;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn symmetric_square_at_two() {
        let f = PAdicRationals::new(2).unwrap();
        let sm = SchurModule::new(2, part("2")).unwrap();
        let h = compute_order(&f, &sm, &OrderOptions::default()).unwrap();
        assert_eq!(h.module.rank(), 9);
        // ρ(g) mod 2 only depends on g mod 2, and the six images of GL_2(F_2)
        // span a 5-dimensional space, so exactly five divisors vanish.
        assert_eq!(h.module.divisors().iter().filter(|&&d| d == 0).count(), 5);
        assert_eq!(h.module.divisors(), &[0, 0, 0, 0, 0, 1, 1, 2, 2]);
        assert_eq!(h.certificate.status, "proven");
        let e12 = Matrix::unit(&f, 3, 0, 1);
        assert!(!h.module.contains(&f, &e12));
        for b in h.module.basis() {
            assert!(f.val(b.get(0, 1)) >= crate::field::Valuation::Finite(1));
            assert!(f.val(b.get(2, 1)) >= crate::field::Valuation::Finite(1));
        }
        assert!(h.module.is_ring(&f));
    }

    #[test]
    fn truncated_matches_exact() {
        let f = PAdicRationals::new(2).unwrap();
        for (n, l) in [(2, "2"), (2, "3"), (3, "2"), (2, "2,1")] {
            let sm = SchurModule::new(n, part(l)).unwrap();
            let opts = OrderOptions { trials: 8, ..Default::default() };
            let fast = compute_order(&f, &sm, &opts).unwrap();
            let job = Job {
                f: &f,
                module: &sm,
                group_gens: standard_generators(&f, n, 2),
                images: fast.generator_images.clone(),
                opts,
            };
            let a = Exact(&f);
            let slow = job.finish(&a, job.run(&a, false).unwrap().unwrap(), None);
            assert_eq!(fast.module, slow.module, "n={n} λ={l}");
        }
    }

    #[test]
    fn standard_representation_gives_all_matrices() {
        let f = PAdicRationals::new(3).unwrap();
        let sm = SchurModule::new(3, part("1")).unwrap();
        let h = compute_order(&f, &sm, &OrderOptions::default()).unwrap();
        assert!(h.module.is_full_rank());
        assert_eq!(h.module.congruence_level(), Some(0));
    }

    #[test]
    fn seed_independence_and_level_monotonicity() {
        let f = PAdicRationals::new(3).unwrap();
        let sm = SchurModule::new(2, part("3")).unwrap();
        let base = compute_order(&f, &sm, &OrderOptions { seed: 1, ..Default::default() }).unwrap();
        for seed in [2, 3] {
            let other = compute_order(&f, &sm, &OrderOptions { seed, ..Default::default() }).unwrap();
            assert_eq!(base.module, other.module);
        }
        let g = LaurentField::new(2).unwrap();
        let sm = SchurModule::with_realization(2, part("2"), Realization::Schur).unwrap();
        let lo = compute_order(&g, &sm, &OrderOptions { level: 1, trials: 16, seed: 0 }).unwrap();
        let hi = compute_order(&g, &sm, &OrderOptions { level: 3, trials: 16, seed: 0 }).unwrap();
        assert!(hi.module.contains_module(&g, &lo.module));
        assert!(lo.certificate.status.starts_with("certified at level 1"));
    }

    #[test]
    fn saturation_closes_under_products() {
        let f = PAdicRationals::new(2).unwrap();
        let zero = MatrixModule::span(&f, 2, &[]).unwrap();
        let x = Matrix::from_i64(&f, &[&[0, 2], &[0, 0]]);
        let y = Matrix::from_i64(&f, &[&[0, 0], &[1, 0]]);
        let r = module_add_and_saturate(&f, &zero, &[x.clone(), y.clone()]).unwrap();
        assert!(r.is_ring(&f));
        assert!(r.contains(&f, &x.mul(&f, &y)));
        assert!(!r.contains(&f, &Matrix::identity(&f, 2)));
        let bad = Matrix::from_vec(2, 2, vec![f.parse("1/2").unwrap(), f.zero(), f.zero(), f.zero()]);
        assert_eq!(module_add_and_saturate(&f, &zero, &[bad]), Err(Error::NonIntegralInput));
    }
}
