//! A single computation case and its options.

use std::fmt;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use schur_lattice::dvr::OrderOptions;
use schur_lattice::schur::{Realization, SchurModule};
use schur_lattice::{Error, FieldSpec, Partition, Result};

use crate::cache;

/// Default cap on the module dimension `N`.
pub const DEFAULT_CAP_N: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Padic,
    Laurent,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Polytrope,
    Bfs,
    #[default]
    Both,
}

impl Method {
    pub fn polytrope(self) -> bool {
        matches!(self, Method::Polytrope | Method::Both)
    }

    pub fn bfs(self) -> bool {
        matches!(self, Method::Bfs | Method::Both)
    }
}

/// `(n, λ, K)` together with the matrix convention.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Case {
    pub n: usize,
    pub lambda: Partition,
    pub field: FieldSpec,
    pub realization: Realization,
}

impl Case {
    pub fn new(n: usize, lambda: Partition, kind: FieldKind, prime: u32, realization: Realization) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        let field = match kind {
            FieldKind::Padic => FieldSpec::RationalAtP { p: prime },
            FieldKind::Laurent => FieldSpec::RationalFunctionOverFq { q: prime },
        };
        Ok(Case { n, lambda, field, realization })
    }

    /// `N = dim S_λ(K^n)`.
    pub fn dim(&self) -> usize {
        self.lambda.schur_dimension(self.n) as usize
    }

    /// Builds the Schur module, honoring the dimension cap and the table cache.
    pub fn module(&self, cap_n: usize) -> Result<SchurModule> {
        let dim = self.lambda.schur_dimension(self.n);
        if dim == 0 {
            return Err(Error::InvalidArgument(format!("{} has more than n = {} rows", self.lambda, self.n)));
        }
        if dim > cap_n as u128 {
            return Err(Error::CapExceeded(format!("N = {dim} exceeds the cap {cap_n}")));
        }
        cache::load(self.n, &self.lambda, self.realization)
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} λ={} {}", self.n, self.lambda, self.field)?;
        if self.realization != Realization::default() {
            write!(f, " schur")?;
        }
        Ok(())
    }
}

/// Options shared by every pipeline stage.
#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub order: OrderOptions,
    pub method: Method,
    /// Coordinate range for unbounded polytropes.
    pub radius: u32,
    pub cap_n: usize,
    pub subspace_cap: u64,
    pub timings: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            order: OrderOptions::default(),
            method: Method::Both,
            radius: schur_lattice::building::DEFAULT_POLYTROPE_RADIUS,
            cap_n: DEFAULT_CAP_N,
            subspace_cap: schur_lattice::building::DEFAULT_SUBSPACE_CAP,
            timings: false,
        }
    }
}
