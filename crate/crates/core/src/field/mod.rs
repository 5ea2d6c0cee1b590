//! Exact discretely valued fields.
//!
//! Two backends are provided: [`PAdicRationals`] (the field `Q` with its
//! `p`-adic valuation, residue field `F_p`, characteristic 0) and
//! [`LaurentField`] (the field `F_q(t)` with the `t`-adic valuation, residue
//! field `F_q`, characteristic `p`). Both are exact; the valuation ring `R` is
//! the localisation at the uniformizer and never needs a precision cap.
//!
//! Field objects carry all context; elements are plain values and every
//! operation goes through the field, in the style of ring-object libraries.

mod laurent;
mod padic;
mod residue;

use std::fmt;
use std::hash::Hash;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use laurent::{FqPoly, LaurentField, RatFn};
pub use padic::PAdicRationals;
pub use residue::{is_prime, prime_power, ResidueElem, ResidueField};

use crate::error::Result;

/// Normalized valuation with `+∞` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinity
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// Which concrete field, serialized as `{"backend": "p-adic", "p": 2}` or
/// `{"backend": "laurent", "q": 4}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "backend")]
pub enum FieldSpec {
    #[serde(rename = "p-adic")]
    RationalAtP { p: u32 },
    #[serde(rename = "laurent")]
    RationalFunctionOverFq { q: u32 },
}

impl FieldSpec {
    /// Characteristic of the residue field.
    pub fn residue_characteristic(&self) -> u32 {
        match *self {
            FieldSpec::RationalAtP { p } => p,
            FieldSpec::RationalFunctionOverFq { q } => prime_power(q as u64).map(|(p, _)| p as u32).unwrap_or(0),
        }
    }

    /// Characteristic of the field itself.
    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::RationalAtP { .. } => 0,
            FieldSpec::RationalFunctionOverFq { .. } => self.residue_characteristic(),
        }
    }

    pub fn residue_field_size(&self) -> u32 {
        match *self {
            FieldSpec::RationalAtP { p } => p,
            FieldSpec::RationalFunctionOverFq { q } => q,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::RationalAtP { p } => write!(f, "Q at p={p}"),
            FieldSpec::RationalFunctionOverFq { q } => write!(f, "F_{q}(t)"),
        }
    }
}

/// A discretely valued field `K` with valuation ring `R`, uniformizer `ϖ` and
/// residue field `k = R/ϖR`.
pub trait ValuedField: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn residue_field(&self) -> &ResidueField;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, x: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn val(&self, a: &Self::Elem) -> Valuation;
    /// `ϖ^k` for any integer `k`.
    fn uniformizer_pow(&self, k: i64) -> Self::Elem;

    /// Image in the residue field; fails when `val(a) < 0`.
    fn reduce(&self, a: &Self::Elem) -> Result<ResidueElem>;
    /// Canonical lift of a residue class: a digit in `0..p`, or a constant
    /// polynomial.
    fn lift(&self, r: ResidueElem) -> Self::Elem;

    /// Canonical representative of the class of `a` in `K / ϖ^k R`: the
    /// truncation of the `ϖ`-adic expansion of `a` below degree `k`.
    fn canonical_rem(&self, a: &Self::Elem, k: i64) -> Self::Elem;

    /// Finite set of units whose generated subgroup is dense (mixed
    /// characteristic) or dense to the given level (equal characteristic).
    fn unit_sample_set(&self, level: u32) -> Vec<Self::Elem>;

    /// Uniform element of `R/ϖ^precision R`, lifted canonically.
    fn random_integral(&self, rng: &mut dyn rand::RngCore, precision: u32) -> Self::Elem;

    /// The first `k` digits of the `ϖ`-adic expansion of an integral element.
    fn digits(&self, a: &Self::Elem, k: u32) -> Vec<ResidueElem>;

    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    // Provided helpers.

    /// `Σ lift(d_i) ϖ^i`.
    fn from_digits(&self, digits: &[ResidueElem]) -> Self::Elem {
        digits
            .iter()
            .rev()
            .fold(self.zero(), |acc, &d| self.add(&self.mul(&acc, &self.uniformizer_pow(1)), &self.lift(d)))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, e: u32) -> Self::Elem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// `a · ϖ^{-val(a)}`, a unit of `R`. Zero maps to zero.
    fn unit_part(&self, a: &Self::Elem) -> Self::Elem {
        match self.val(a) {
            Valuation::Infinity => self.zero(),
            Valuation::Finite(v) => self.mul(a, &self.uniformizer_pow(-v)),
        }
    }

    fn is_integral(&self, a: &Self::Elem) -> bool {
        self.val(a) >= Valuation::Finite(0)
    }

    /// Uniform random unit of `R` with the given number of digits.
    fn random_unit(&self, rng: &mut dyn rand::RngCore, precision: u32) -> Self::Elem {
        loop {
            let x = self.random_integral(rng, precision.max(1));
            if self.val(&x) == Valuation::Finite(0) {
                return x;
            }
        }
    }
}

/// Runtime choice of backend, for code paths that dispatch on a [`FieldSpec`].
pub enum AnyField {
    PAdic(PAdicRationals),
    Laurent(LaurentField),
}

impl AnyField {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        Ok(match spec {
            FieldSpec::RationalAtP { p } => AnyField::PAdic(PAdicRationals::new(p)?),
            FieldSpec::RationalFunctionOverFq { q } => AnyField::Laurent(LaurentField::new(q)?),
        })
    }
}

/// Calls a generic closure-like body with the concrete field behind an
/// [`AnyField`].
#[macro_export]
macro_rules! with_field {
    ($any:expr, $f:ident => $body:expr) => {
        match $any {
            $crate::field::AnyField::PAdic($f) => $body,
            $crate::field::AnyField::Laurent($f) => $body,
        }
    };
}

pub(crate) fn rng_range<R: Rng + ?Sized>(rng: &mut R, hi: u64) -> u64 {
    rng.gen_range(0..hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_elem<F: ValuedField>(f: &F, rng: &mut ChaCha8Rng) -> F::Elem {
        use rand::Rng;
        let a = f.random_integral(rng, 4);
        let b = f.random_unit(rng, 3);
        let shift = rng.gen_range(-2i64..=2);
        let x = f.mul(&f.div(&a, &b).unwrap(), &f.uniformizer_pow(shift));
        if rng.gen_bool(0.05) {
            f.zero()
        } else {
            x
        }
    }

    fn ultrametric_suite<F: ValuedField>(f: &F, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10_000 {
            let x = random_elem(f, &mut rng);
            let y = random_elem(f, &mut rng);
            let (vx, vy) = (f.val(&x), f.val(&y));
            let vs = f.val(&f.add(&x, &y));
            assert!(vs >= vx.min(vy), "{x:?} + {y:?}");
            if vx != vy {
                assert_eq!(vs, vx.min(vy));
            }
            if let (Valuation::Finite(a), Valuation::Finite(b)) = (vx, vy) {
                assert_eq!(f.val(&f.mul(&x, &y)), Valuation::Finite(a + b));
            }
            if vx >= Valuation::Finite(0) && vy >= Valuation::Finite(0) {
                let k = f.residue_field();
                let (rx, ry) = (f.reduce(&x).unwrap(), f.reduce(&y).unwrap());
                assert_eq!(f.reduce(&f.add(&x, &y)).unwrap(), k.add(rx, ry));
                assert_eq!(f.reduce(&f.mul(&x, &y)).unwrap(), k.mul(rx, ry));
            }
        }
    }

    #[test]
    fn ultrametric_and_reduction_padic() {
        for p in [2, 3, 5] {
            ultrametric_suite(&PAdicRationals::new(p).unwrap(), p as u64);
        }
    }

    #[test]
    fn ultrametric_and_reduction_laurent() {
        for q in [2, 3, 4] {
            ultrametric_suite(&LaurentField::new(q).unwrap(), 100 + q as u64);
        }
    }

    #[test]
    fn canonical_rem_is_a_residue_system() {
        let f = PAdicRationals::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let x = random_elem(&f, &mut rng);
            for k in -2..4 {
                let r = f.canonical_rem(&x, k);
                let diff = f.sub(&x, &r);
                assert!(f.val(&diff) >= Valuation::Finite(k));
                assert_eq!(f.canonical_rem(&r, k), r);
                let shifted = f.add(&x, &f.uniformizer_pow(k));
                assert_eq!(f.canonical_rem(&shifted, k), r);
            }
        }
        let g = LaurentField::new(4).unwrap();
        for _ in 0..500 {
            let x = random_elem(&g, &mut rng);
            for k in -2..4 {
                let r = g.canonical_rem(&x, k);
                assert!(g.val(&g.sub(&x, &r)) >= Valuation::Finite(k));
                assert_eq!(g.canonical_rem(&r, k), r);
            }
        }
    }

    #[test]
    fn digits_round_trip() {
        let f = PAdicRationals::new(3).unwrap();
        let x = f.parse("-1/2").unwrap();
        // -1/2 = 1 + 1*3 + 1*9 + ... in Z_3
        assert_eq!(f.digits(&x, 4), vec![1, 1, 1, 1]);
        assert_eq!(f.from_digits(&[2, 0, 1]), f.from_i64(11));
        let g = LaurentField::new(4).unwrap();
        let y = g.parse("(1 + 2*t)/(1 + t)").unwrap();
        let d = g.digits(&y, 5);
        assert_eq!(g.from_digits(&d), g.canonical_rem(&y, 5));
    }

    #[test]
    fn field_spec_json_shape() {
        let s = serde_json::to_string(&FieldSpec::RationalAtP { p: 2 }).unwrap();
        assert_eq!(s, r#"{"backend":"p-adic","p":2}"#);
        let l: FieldSpec = serde_json::from_str(r#"{"backend":"laurent","q":4}"#).unwrap();
        assert_eq!(l, FieldSpec::RationalFunctionOverFq { q: 4 });
        assert_eq!(l.characteristic(), 2);
        assert_eq!(FieldSpec::RationalAtP { p: 3 }.characteristic(), 0);
    }
}
