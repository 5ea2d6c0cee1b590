//! Finite residue fields `F_q`, `q = p^k`.
//!
//! Elements are encoded as integers in `0..q`: the base-`p` digits of the code
//! are the coefficients of a polynomial in a fixed root of the defining
//! irreducible polynomial. For `k = 1` this is ordinary arithmetic mod `p`.

use rand::Rng;

use crate::error::{Error, Result};

/// Element of a [`ResidueField`].
pub type ResidueElem = u32;

/// Largest `q` supported for non-prime fields (arithmetic goes through tables).
pub const MAX_EXTENSION_ORDER: u32 = 1 << 10;

#[derive(Clone, Debug)]
pub struct ResidueField {
    p: u32,
    degree: u32,
    q: u32,
    /// Monic irreducible polynomial of degree `degree` over `F_p`, low
    /// coefficient first. Empty for prime fields.
    modulus: Vec<u32>,
    mul_table: Vec<u32>,
    inv_table: Vec<u32>,
}

impl PartialEq for ResidueField {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}
impl Eq for ResidueField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^k` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    if !is_prime(p) {
        return None;
    }
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

impl ResidueField {
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(ResidueField { p, degree: 1, q: p, modulus: Vec::new(), mul_table: Vec::new(), inv_table: Vec::new() })
    }

    /// The field with `q` elements.
    pub fn new(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q as u64).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        if k == 1 {
            return Self::prime(p as u32);
        }
        if q > MAX_EXTENSION_ORDER {
            return Err(Error::InvalidField(format!("extension field of order {q} exceeds {MAX_EXTENSION_ORDER}")));
        }
        let p = p as u32;
        let modulus = find_irreducible(p, k);
        let mut field = ResidueField { p, degree: k, q, modulus, mul_table: Vec::new(), inv_table: Vec::new() };
        let qs = q as usize;
        let mut table = vec![0u32; qs * qs];
        for a in 0..q {
            for b in a..q {
                let c = field.poly_mul_mod(a, b);
                table[a as usize * qs + b as usize] = c;
                table[b as usize * qs + a as usize] = c;
            }
        }
        let mut inv = vec![0u32; qs];
        for a in 1..q {
            for b in 1..q {
                if table[a as usize * qs + b as usize] == 1 {
                    inv[a as usize] = b;
                    break;
                }
            }
        }
        field.mul_table = table;
        field.inv_table = inv;
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.degree as usize);
        for _ in 0..self.degree {
            d.push(a % self.p);
            a /= self.p;
        }
        d
    }

    fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    fn poly_mul_mod(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let k = self.degree as usize;
        let mut prod = vec![0u64; 2 * k];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % self.p as u64;
            }
        }
        let p = self.p as u64;
        for top in (k..2 * k).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            // x^k = -(m_0 + ... + m_{k-1} x^{k-1})
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let idx = top - k + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
            prod[top] = 0;
        }
        let low: Vec<u32> = prod[..k].iter().map(|&x| x as u32).collect();
        self.from_digits(&low)
    }

    pub fn zero(&self) -> ResidueElem {
        0
    }

    pub fn one(&self) -> ResidueElem {
        1
    }

    pub fn from_i64(&self, x: i64) -> ResidueElem {
        x.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        if self.degree == 1 {
            return ((a as u64 + b as u64) % self.p as u64) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.from_digits(&s)
    }

    pub fn neg(&self, a: ResidueElem) -> ResidueElem {
        if self.degree == 1 {
            return (self.p - a) % self.p;
        }
        let s: Vec<u32> = self.digits(a).iter().map(|x| (self.p - x) % self.p).collect();
        self.from_digits(&s)
    }

    pub fn sub(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        if self.degree == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        self.mul_table[a as usize * self.q as usize + b as usize]
    }

    pub fn inv(&self, a: ResidueElem) -> Option<ResidueElem> {
        if a == 0 {
            return None;
        }
        if self.degree == 1 {
            return Some(pow_mod(a as u64, self.p as u64 - 2, self.p as u64) as u32);
        }
        Some(self.inv_table[a as usize])
    }

    pub fn pow(&self, a: ResidueElem, mut e: u64) -> ResidueElem {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Smallest (by code) generator of the cyclic group `F_q^×`.
    pub fn multiplicative_generator(&self) -> ResidueElem {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        (1..self.q)
            .find(|&g| factors.iter().all(|&f| self.pow(g, order / f) != 1))
            .expect("finite field has a primitive element")
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> ResidueElem {
        rng.gen_range(0..self.q)
    }

    pub fn elements(&self) -> impl Iterator<Item = ResidueElem> {
        0..self.q
    }
}

pub(crate) fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = (b % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    acc as u64
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// First monic irreducible polynomial of degree `k` over `F_p` in
/// lexicographic order of its lower coefficients.
fn find_irreducible(p: u32, k: u32) -> Vec<u32> {
    let total = (p as u64).pow(k);
    'outer: for code in 0..total {
        let mut coeffs = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            coeffs.push((c % p as u64) as u32);
            c /= p as u64;
        }
        coeffs.push(1);
        if coeffs[0] == 0 {
            continue;
        }
        // trial division by every monic polynomial of degree 1..=k/2
        for deg in 1..=k / 2 {
            for dcode in 0..(p as u64).pow(deg) {
                let mut div = Vec::with_capacity(deg as usize + 1);
                let mut c = dcode;
                for _ in 0..deg {
                    div.push((c % p as u64) as u32);
                    c /= p as u64;
                }
                div.push(1);
                if poly_rem_is_zero(&coeffs, &div, p) {
                    continue 'outer;
                }
            }
        }
        return coeffs;
    }
    unreachable!("irreducible polynomials of every degree exist")
}

fn poly_rem_is_zero(num: &[u32], monic_div: &[u32], p: u32) -> bool {
    let mut r: Vec<u64> = num.iter().map(|&x| x as u64).collect();
    let dd = monic_div.len() - 1;
    let p = p as u64;
    for top in (dd..r.len()).rev() {
        let c = r[top] % p;
        if c == 0 {
            continue;
        }
        for (i, &m) in monic_div.iter().enumerate() {
            let idx = top - dd + i;
            r[idx] = (r[idx] + (p - c) * m as u64) % p;
        }
    }
    r[..dd].iter().all(|&x| x % p == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_field_axioms(f: &ResidueField) {
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in f.elements().step_by(3) {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                }
            }
        }
    }

    #[test]
    fn prime_fields_are_fields() {
        for p in [2, 3, 5, 7] {
            check_field_axioms(&ResidueField::new(p).unwrap());
        }
    }

    #[test]
    fn extension_fields_are_fields() {
        for q in [4, 8, 9, 16, 25] {
            let f = ResidueField::new(q).unwrap();
            assert_eq!(f.characteristic().pow(f.degree()), q);
            check_field_axioms(&f);
        }
    }

    #[test]
    fn generator_has_full_order() {
        for q in [2, 3, 4, 5, 8, 9, 49] {
            let f = ResidueField::new(q).unwrap();
            let g = f.multiplicative_generator();
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..q - 1 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(seen.len() as u32, q - 1);
        }
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert!(ResidueField::new(6).is_err());
        assert!(ResidueField::new(1).is_err());
        assert!(ResidueField::prime(9).is_err());
    }
}
