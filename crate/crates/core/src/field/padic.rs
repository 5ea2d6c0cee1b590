use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

use super::residue::{pow_mod, prime_factors};
use super::{FieldSpec, ResidueElem, ResidueField, Valuation, ValuedField};
use crate::error::{Error, Result};

/// The rationals with the `p`-adic valuation. `R = Z_(p)`, `ϖ = p`, `k = F_p`.
#[derive(Clone, Debug)]
pub struct PAdicRationals {
    p: u32,
    p_big: BigInt,
    residue: ResidueField,
}

impl PAdicRationals {
    pub fn new(p: u32) -> Result<Self> {
        let residue = ResidueField::prime(p)?;
        Ok(PAdicRationals { p, p_big: BigInt::from(p), residue })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    /// Exponent of `p` in a nonzero integer, and the cofactor.
    fn split_int(&self, x: &BigInt) -> (i64, BigInt) {
        debug_assert!(!x.is_zero());
        if self.p == 2 {
            let tz = x.trailing_zeros().unwrap_or(0);
            return (tz as i64, x >> tz);
        }
        let mut v = 0;
        let mut y = x.clone();
        loop {
            let (q, r) = y.div_rem(&self.p_big);
            if !r.is_zero() {
                return (v, y);
            }
            y = q;
            v += 1;
        }
    }

    fn int_val(&self, x: &BigInt) -> i64 {
        if self.p == 2 {
            return x.trailing_zeros().unwrap_or(0) as i64;
        }
        if let Some(small) = x.to_i64() {
            let (mut v, mut y, p) = (0, small, self.p as i64);
            while y % p == 0 {
                y /= p;
                v += 1;
            }
            return v;
        }
        self.split_int(x).0
    }

    fn p_pow(&self, e: u32) -> BigInt {
        num_traits::pow(self.p_big.clone(), e as usize)
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

impl ValuedField for PAdicRationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::RationalAtP { p: self.p }
    }

    fn residue_field(&self) -> &ResidueField {
        &self.residue
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        if b.is_zero() {
            return a.clone();
        }
        if a.is_zero() {
            return b.clone();
        }
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        if b.is_zero() {
            return a.clone();
        }
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        if a.is_zero() || b.is_zero() {
            return BigRational::zero();
        }
        if a.is_one() {
            return b.clone();
        }
        if b.is_one() {
            return a.clone();
        }
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn val(&self, a: &BigRational) -> Valuation {
        if a.is_zero() {
            return Valuation::Infinity;
        }
        Valuation::Finite(self.int_val(a.numer()) - self.int_val(a.denom()))
    }

    fn uniformizer_pow(&self, k: i64) -> BigRational {
        let pk = self.p_pow(k.unsigned_abs() as u32);
        if k >= 0 {
            BigRational::from_integer(pk)
        } else {
            BigRational::new_raw(BigInt::one(), pk)
        }
    }

    fn reduce(&self, a: &BigRational) -> Result<ResidueElem> {
        match self.val(a) {
            Valuation::Infinity => Ok(0),
            Valuation::Finite(v) if v < 0 => Err(Error::NegativeValuation(v)),
            Valuation::Finite(v) if v > 0 => Ok(0),
            Valuation::Finite(_) => {
                let p = self.p as u64;
                let n = a.numer().mod_floor(&self.p_big).to_u64().unwrap();
                let d = a.denom().mod_floor(&self.p_big).to_u64().unwrap();
                Ok((n * pow_mod(d, p - 2, p) % p) as u32)
            }
        }
    }

    fn lift(&self, r: ResidueElem) -> BigRational {
        self.from_i64(r as i64)
    }

    fn canonical_rem(&self, a: &BigRational, k: i64) -> BigRational {
        let v = match self.val(a) {
            Valuation::Infinity => return BigRational::zero(),
            Valuation::Finite(v) => v,
        };
        if v >= k {
            return BigRational::zero();
        }
        let (e, dprime) = self.split_int(a.denom());
        let modulus = self.p_pow((k + e) as u32);
        let c = (a.numer() * mod_inverse(&dprime, &modulus)).mod_floor(&modulus);
        BigRational::new(c, self.p_pow(e as u32))
    }

    fn unit_sample_set(&self, _level: u32) -> Vec<BigRational> {
        if self.p == 2 {
            return vec![self.from_i64(-1), self.from_i64(3)];
        }
        // A primitive root mod p^2 generates Z_p^× topologically.
        let p = self.p as u64;
        let m = p * p;
        let phi = p * (p - 1);
        let factors = prime_factors(phi);
        let g = (2..m)
            .find(|&g| g % p != 0 && factors.iter().all(|&f| pow_mod(g, phi / f, m) != 1))
            .expect("Z/p^2 is cyclic for odd p");
        vec![self.from_i64(g as i64), self.from_i64(-1)]
    }

    fn random_integral(&self, rng: &mut dyn RngCore, precision: u32) -> BigRational {
        let mut acc = BigInt::zero();
        for _ in 0..precision {
            let digit = super::rng_range(rng, self.p as u64);
            acc = acc * &self.p_big + BigInt::from(digit);
        }
        BigRational::from_integer(acc)
    }

    fn digits(&self, a: &BigRational, k: u32) -> Vec<ResidueElem> {
        let mut x = self.canonical_rem(a, k as i64).to_integer();
        let mut out = Vec::with_capacity(k as usize);
        for _ in 0..k {
            let (q, r) = x.div_rem(&self.p_big);
            out.push(r.to_u32().unwrap());
            x = q;
        }
        out
    }

    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn parse(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        let parse_int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| Error::Parse(s.to_string()));
        match s.split_once('/') {
            None => Ok(BigRational::from_integer(parse_int(s)?)),
            Some((n, d)) => {
                let d = parse_int(d)?;
                if d.is_zero() {
                    return Err(Error::Parse(s.to_string()));
                }
                Ok(BigRational::new(parse_int(n)?, d))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        let f = PAdicRationals::new(2).unwrap();
        assert_eq!(f.val(&f.from_i64(12)), Valuation::Finite(2));
        assert_eq!(f.val(&f.zero()), Valuation::Infinity);
        assert_eq!(f.val(&f.parse("3/8").unwrap()), Valuation::Finite(-3));
    }

    #[test]
    fn reduce_examples() {
        let f = PAdicRationals::new(3).unwrap();
        assert_eq!(f.reduce(&f.from_i64(7)).unwrap(), 1);
        assert_eq!(f.reduce(&f.uniformizer_pow(1)).unwrap(), 0);
        assert_eq!(f.reduce(&f.uniformizer_pow(-1)), Err(Error::NegativeValuation(-1)));
        // 1/2 = 2 mod 3
        assert_eq!(f.reduce(&f.parse("1/2").unwrap()).unwrap(), 2);
    }

    #[test]
    fn unit_samples() {
        let f3 = PAdicRationals::new(3).unwrap();
        let u = f3.unit_sample_set(1);
        assert!(u.contains(&f3.from_i64(2)));
        assert!(u.contains(&f3.from_i64(-1)));
        // 2 generates (Z/9)^× by direct powering
        let mut seen = std::collections::BTreeSet::new();
        let mut x = 1u64;
        for _ in 0..6 {
            seen.insert(x);
            x = x * 2 % 9;
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), vec![1, 2, 4, 5, 7, 8]);

        let f2 = PAdicRationals::new(2).unwrap();
        assert_eq!(f2.unit_sample_set(1), vec![f2.from_i64(-1), f2.from_i64(3)]);
    }

    #[test]
    fn canonical_rem_digits() {
        let f = PAdicRationals::new(2).unwrap();
        // 1/3 = 1 + 2 + 8 + 32 + ... in Z_2 (…10101011)
        let third = f.parse("1/3").unwrap();
        assert_eq!(f.canonical_rem(&third, 3), f.from_i64(3));
        assert_eq!(f.canonical_rem(&third, 4), f.from_i64(11));
        assert_eq!(f.canonical_rem(&f.parse("5/4").unwrap(), 1), f.parse("5/4").unwrap());
        assert_eq!(f.canonical_rem(&f.parse("5/4").unwrap(), 0), f.parse("1/4").unwrap());
        assert_eq!(f.canonical_rem(&f.from_i64(-1), 2), f.from_i64(3));
    }

    #[test]
    fn parse_format_round_trip() {
        let f = PAdicRationals::new(5).unwrap();
        for s in ["0", "-7", "3/25", "-1/2"] {
            assert_eq!(f.format(&f.parse(s).unwrap()), s);
        }
        assert!(f.parse("1/0").is_err());
        assert!(f.parse("x").is_err());
    }
}
