//! Gaussian measures on lattices: the pushforward of Haar measure on `R^N`
//! under a basis, realized at a finite number of digits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::building::is_invariant;
use crate::dvr::{Lattice, MatrixModule};
use crate::error::{Error, Result};
use crate::field::ValuedField;
use crate::matrix::Matrix;

/// Significance level of the digit uniformity tests.
pub const SIGNIFICANCE: f64 = 0.001;

/// The Gaussian with support `L`, sampled to `precision` digits.
#[derive(Clone, Debug)]
pub struct LatticeGaussian<E> {
    lattice: Lattice<E>,
    precision: u32,
    seed: u64,
}

impl<E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug> LatticeGaussian<E> {
    pub fn new(lattice: Lattice<E>, precision: u32, seed: u64) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InvalidArgument("sampling precision must be at least 1".into()));
        }
        Ok(LatticeGaussian { lattice, precision, seed })
    }

    pub fn lattice(&self) -> &Lattice<E> {
        &self.lattice
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `count` samples `Σ ξ_j v_j`, with `ξ_j` uniform digits.
    pub fn sample<F: ValuedField<Elem = E>>(&self, f: &F, count: usize) -> Vec<Vec<E>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        self.sample_with(f, count, &mut rng)
    }

    fn sample_with<F: ValuedField<Elem = E>>(&self, f: &F, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<E>> {
        let b = self.lattice.basis_matrix();
        let n = self.lattice.dim();
        (0..count)
            .map(|_| {
                let xi: Vec<E> = (0..n).map(|_| f.random_integral(rng, self.precision)).collect();
                b.mul_vec(f, &xi)
            })
            .collect()
    }
}

/// Pearson's test of the leading coordinate digits for one group element.
#[derive(Clone, Debug, Serialize)]
pub struct DigitTest {
    /// Indices into the generator list, applied left to right.
    pub word: Vec<usize>,
    pub statistic: f64,
    pub degrees_of_freedom: u32,
    pub critical_value: f64,
    pub passed: bool,
    pub retried: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    /// `ρ(g)L = L` for every `g`, decided exactly.
    pub exact_invariant: bool,
    /// Empty when the exact check fails.
    pub tests: Vec<DigitTest>,
    pub samples: usize,
    pub seed: u64,
    pub precision: u32,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.exact_invariant && self.tests.iter().all(|t| t.passed)
    }
}

/// Decides invariance of the measure exactly, then checks that pushing
/// samples through random words in `generators` keeps the leading digits of
/// their `L`-coordinates uniform. A failed test is rerun once on fresh samples.
pub fn invariance_report<F: ValuedField>(
    f: &F,
    gauss: &LatticeGaussian<F::Elem>,
    h: &MatrixModule<F>,
    generators: &[Matrix<F::Elem>],
    trials: usize,
    samples: usize,
) -> Result<InvarianceReport> {
    let exact_invariant = is_invariant(f, h, &gauss.lattice);
    let mut report =
        InvarianceReport { exact_invariant, tests: Vec::new(), samples, seed: gauss.seed, precision: gauss.precision };
    if !exact_invariant || generators.is_empty() {
        return Ok(report);
    }
    let q = f.residue_field().order();
    let dof = q - 1;
    let critical =
        ChiSquared::new(dof as f64).map_err(|e| Error::InvalidArgument(e.to_string()))?.inverse_cdf(1.0 - SIGNIFICANCE);
    let binv = gauss.lattice.basis_matrix().inverse(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(gauss.seed);
    for _ in 0..trials {
        let word: Vec<usize> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(0..generators.len())).collect();
        let g = word.iter().fold(Matrix::identity(f, gauss.lattice.dim()), |acc, &i| acc.mul(f, &generators[i]));
        let to_coords = binv.mul(f, &g);
        let mut retried = false;
        let mut statistic = f64::INFINITY;
        for attempt in 0..2 {
            retried = attempt > 0;
            let mut counts = vec![0u64; q as usize];
            for s in gauss.sample_with(f, samples, &mut rng) {
                for x in to_coords.mul_vec(f, &s) {
                    let d =
                        f.reduce(&x).map_err(|_| Error::InvariantViolation("pushed sample left the lattice".into()))?;
                    counts[d as usize] += 1;
                }
            }
            statistic = chi_square(&counts);
            if statistic <= critical {
                break;
            }
        }
        report.tests.push(DigitTest {
            word,
            statistic,
            degrees_of_freedom: dof,
            critical_value: critical,
            passed: statistic <= critical,
            retried,
        });
    }
    Ok(report)
}

/// Pearson statistic against the uniform distribution on the bins.
pub fn chi_square(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum()
}
