//! Truncated rings `R/ϖ^P R`.

use super::DvrArith;
use crate::field::{FieldSpec, ValuedField};

/// Moving elements of `R` in and out of a truncated ring.
pub trait Embed<F: ValuedField>: DvrArith {
    fn precision(&self) -> u32;
    /// Image of an integral element.
    fn embed(&self, f: &F, x: &F::Elem) -> Self::E;
    /// The canonical lift of a residue.
    fn lift(&self, f: &F, x: &Self::E) -> F::Elem;
}

/// `Z/p^P` with machine words.
#[derive(Clone, Debug)]
pub struct ModPk {
    p: u64,
    prec: u32,
    modulus: u64,
}

impl ModPk {
    /// Largest usable precision for `p`.
    pub fn max_precision(p: u32) -> u32 {
        let mut m: u64 = 1;
        let mut k = 0;
        while let Some(next) = m.checked_mul(p as u64) {
            if next > 1 << 62 {
                break;
            }
            m = next;
            k += 1;
        }
        k
    }

    pub fn new(p: u32, prec: u32) -> Self {
        assert!(prec >= 1 && prec <= Self::max_precision(p));
        ModPk { p: p as u64, prec, modulus: (p as u64).pow(prec) }
    }

    fn inverse(&self, u: u64) -> u64 {
        let (mut r0, mut r1) = (self.modulus as i128, u as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        s0.rem_euclid(self.modulus as i128) as u64
    }
}

impl DvrArith for ModPk {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.modulus as u128) as u64
    }
    fn val(&self, a: &u64) -> Option<i64> {
        if *a == 0 {
            return None;
        }
        let (mut x, mut v) = (*a, 0);
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        Some(v)
    }
    fn pi_pow(&self, k: i64) -> u64 {
        assert!(k >= 0);
        if k as u32 >= self.prec {
            0
        } else {
            self.p.pow(k as u32)
        }
    }
    fn shift_down(&self, a: &u64, k: i64) -> u64 {
        a / self.p.pow(k as u32)
    }
    fn unit_part_inverse(&self, a: &u64) -> u64 {
        let v = self.val(a).expect("nonzero");
        self.inverse(a / self.p.pow(v as u32))
    }
    fn canonical_rem(&self, a: &u64, k: i64) -> u64 {
        if k as u32 >= self.prec {
            *a
        } else {
            a % self.p.pow(k as u32)
        }
    }
}

impl<F: ValuedField> Embed<F> for ModPk {
    fn precision(&self) -> u32 {
        self.prec
    }
    fn embed(&self, f: &F, x: &F::Elem) -> u64 {
        f.digits(x, self.prec).iter().rev().fold(0, |acc, &d| acc * self.p + d as u64)
    }
    fn lift(&self, f: &F, x: &u64) -> F::Elem {
        let mut digits = Vec::new();
        let mut x = *x;
        while x > 0 {
            digits.push((x % self.p) as u32);
            x /= self.p;
        }
        f.from_digits(&digits)
    }
}

/// `R/ϖ^P R` for any field, elements stored as canonical representatives.
#[derive(Clone, Debug)]
pub struct Trunc<'a, F> {
    f: &'a F,
    prec: u32,
}

impl<'a, F: ValuedField> Trunc<'a, F> {
    pub fn new(f: &'a F, prec: u32) -> Self {
        Trunc { f, prec }
    }

    fn norm(&self, a: F::Elem) -> F::Elem {
        self.f.canonical_rem(&a, self.prec as i64)
    }
}

impl<F: ValuedField> DvrArith for Trunc<'_, F> {
    type E = F::Elem;

    fn zero(&self) -> F::Elem {
        self.f.zero()
    }
    fn is_zero(&self, a: &F::Elem) -> bool {
        self.f.is_zero(a)
    }
    fn add(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.norm(self.f.add(a, b))
    }
    fn sub(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.norm(self.f.sub(a, b))
    }
    fn mul(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.norm(self.f.mul(a, b))
    }
    fn val(&self, a: &F::Elem) -> Option<i64> {
        self.f.val(a).finite()
    }
    fn pi_pow(&self, k: i64) -> F::Elem {
        self.norm(self.f.uniformizer_pow(k))
    }
    fn shift_down(&self, a: &F::Elem, k: i64) -> F::Elem {
        self.norm(self.f.mul(a, &self.f.uniformizer_pow(-k)))
    }
    fn unit_part_inverse(&self, a: &F::Elem) -> F::Elem {
        self.norm(self.f.inv(&self.f.unit_part(a)).expect("nonzero"))
    }
    fn canonical_rem(&self, a: &F::Elem, k: i64) -> F::Elem {
        self.f.canonical_rem(a, k.min(self.prec as i64))
    }
}

impl<F: ValuedField> Embed<F> for Trunc<'_, F> {
    fn precision(&self) -> u32 {
        self.prec
    }
    fn embed(&self, _f: &F, x: &F::Elem) -> F::Elem {
        self.norm(x.clone())
    }
    fn lift(&self, _f: &F, x: &F::Elem) -> F::Elem {
        x.clone()
    }
}

/// Whether machine-word arithmetic applies to this field at precision `prec`.
pub fn word_sized(spec: FieldSpec, prec: u32) -> bool {
    matches!(spec, FieldSpec::RationalAtP { p } if prec <= ModPk::max_precision(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{LaurentField, PAdicRationals};

    #[test]
    fn word_ring_basics() {
        let r = ModPk::new(3, 4);
        assert_eq!(r.val(&54), Some(3));
        assert_eq!(r.mul(&r.unit_part_inverse(&54), &2), 1);
        assert_eq!(r.sub(&1, &2), 80);
        assert_eq!(ModPk::max_precision(2), 62);
    }

    #[test]
    fn embed_lift_round_trip() {
        let f = PAdicRationals::new(5).unwrap();
        let r = ModPk::new(5, 6);
        let x = f.parse("-3/7").unwrap();
        let e = r.embed(&f, &x);
        let back = r.lift(&f, &e);
        assert_eq!(f.canonical_rem(&x, 6), back);
        assert_eq!(r.mul(&e, &7), r.sub(&0, &3));
    }

    #[test]
    fn series_truncation() {
        let g = LaurentField::new(2).unwrap();
        let tr = Trunc::new(&g, 3);
        let x = g.parse("1/(1 + t)").unwrap();
        assert_eq!(g.format(&tr.embed(&g, &x)), "1 + t + t^2");
        assert!(tr.is_zero(&tr.pi_pow(3)));
    }
}
