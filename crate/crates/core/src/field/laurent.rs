use rand::RngCore;

use super::{FieldSpec, ResidueElem, ResidueField, Valuation, ValuedField};
use crate::error::{Error, Result};

/// Polynomial over `F_q`, lowest coefficient first, no trailing zeros.
pub type FqPoly = Vec<ResidueElem>;

/// Reduced fraction `num/den` in `F_q(t)` with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    pub num: FqPoly,
    pub den: FqPoly,
}

/// The rational function field `F_q(t)` with the `t`-adic valuation:
/// `R = F_q[t]_(t)`, `ϖ = t`, `k = F_q`.
#[derive(Clone, Debug)]
pub struct LaurentField {
    k: ResidueField,
}

fn trim(mut a: FqPoly) -> FqPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn ord(a: &[ResidueElem]) -> Option<usize> {
    a.iter().position(|&c| c != 0)
}

impl LaurentField {
    pub fn new(q: u32) -> Result<Self> {
        Ok(LaurentField { k: ResidueField::new(q)? })
    }

    pub fn poly_add(&self, a: &[ResidueElem], b: &[ResidueElem]) -> FqPoly {
        let n = a.len().max(b.len());
        let out = (0..n).map(|i| self.k.add(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0))).collect();
        trim(out)
    }

    pub fn poly_neg(&self, a: &[ResidueElem]) -> FqPoly {
        a.iter().map(|&c| self.k.neg(c)).collect()
    }

    pub fn poly_mul(&self, a: &[ResidueElem], b: &[ResidueElem]) -> FqPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.k.add(out[i + j], self.k.mul(x, y));
            }
        }
        trim(out)
    }

    fn poly_scale(&self, a: &[ResidueElem], c: ResidueElem) -> FqPoly {
        trim(a.iter().map(|&x| self.k.mul(x, c)).collect())
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn poly_divrem(&self, a: &[ResidueElem], b: &[ResidueElem]) -> (FqPoly, FqPoly) {
        let lead_inv = self.k.inv(*b.last().expect("division by zero polynomial")).unwrap();
        let mut r: FqPoly = a.to_vec();
        if r.len() < b.len() {
            return (Vec::new(), trim(r));
        }
        let mut q = vec![0; r.len() - b.len() + 1];
        for top in (b.len() - 1..r.len()).rev() {
            let c = self.k.mul(r[top], lead_inv);
            if c == 0 {
                continue;
            }
            let shift = top + 1 - b.len();
            q[shift] = c;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = self.k.sub(r[shift + i], self.k.mul(c, bi));
            }
        }
        (trim(q), trim(r))
    }

    pub fn poly_gcd(&self, a: &[ResidueElem], b: &[ResidueElem]) -> FqPoly {
        let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
        while !y.is_empty() {
            let (_, r) = self.poly_divrem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    fn monic(&self, a: &[ResidueElem]) -> FqPoly {
        match a.last() {
            None => Vec::new(),
            Some(&l) => self.poly_scale(a, self.k.inv(l).unwrap()),
        }
    }

    fn make(&self, num: FqPoly, den: FqPoly) -> RatFn {
        let (num, den) = (trim(num), trim(den));
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() {
            return RatFn { num, den: vec![1] };
        }
        let g = self.poly_gcd(&num, &den);
        let (mut n, _) = self.poly_divrem(&num, &g);
        let (mut d, _) = self.poly_divrem(&den, &g);
        let l = *d.last().unwrap();
        if l != 1 {
            let li = self.k.inv(l).unwrap();
            n = self.poly_scale(&n, li);
            d = self.poly_scale(&d, li);
        }
        RatFn { num: n, den: d }
    }

    pub fn from_poly(&self, p: FqPoly) -> RatFn {
        RatFn { num: trim(p), den: vec![1] }
    }

    /// `a · b^{-1} mod t^prec` for `b(0) ≠ 0`.
    fn series_div(&self, a: &[ResidueElem], b: &[ResidueElem], prec: usize) -> FqPoly {
        let b0_inv = self.k.inv(b[0]).expect("unit constant term");
        let mut out = vec![0; prec];
        let mut rem: Vec<ResidueElem> = (0..prec).map(|i| a.get(i).copied().unwrap_or(0)).collect();
        for i in 0..prec {
            let c = self.k.mul(rem[i], b0_inv);
            out[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if i + j < prec {
                    rem[i + j] = self.k.sub(rem[i + j], self.k.mul(c, bj));
                }
            }
        }
        trim(out)
    }

    fn format_poly(&self, a: &[ResidueElem]) -> String {
        if a.is_empty() {
            return "0".into();
        }
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".into(),
                (1, c) => format!("{c}*t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}*t^{i}"),
            })
            .collect();
        terms.join(" + ")
    }

    fn parse_poly(&self, s: &str) -> Result<FqPoly> {
        let err = || Error::Parse(s.to_string());
        let s = s.trim();
        let s = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(s);
        let mut out: FqPoly = Vec::new();
        let normalized = s.replace('-', "+-");
        for raw in normalized.split('+') {
            let term: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
            if term.is_empty() {
                continue;
            }
            let (negate, term) = match term.strip_prefix('-') {
                Some(t) => (true, t.to_string()),
                None => (false, term),
            };
            let (coeff, deg) = if let Some(idx) = term.find('t') {
                let c = term[..idx].trim_end_matches('*');
                let c = if c.is_empty() { 1 } else { c.parse::<u32>().map_err(|_| err())? };
                let rest = &term[idx + 1..];
                let d = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').ok_or_else(err)?.parse::<usize>().map_err(|_| err())?
                };
                (c, d)
            } else {
                (term.parse::<u32>().map_err(|_| err())?, 0)
            };
            if coeff >= self.k.order() && self.k.degree() > 1 {
                return Err(err());
            }
            let mut c = if self.k.degree() == 1 { coeff % self.k.order() } else { coeff };
            if negate {
                c = self.k.neg(c);
            }
            if out.len() <= deg {
                out.resize(deg + 1, 0);
            }
            out[deg] = self.k.add(out[deg], c);
        }
        Ok(trim(out))
    }
}

impl ValuedField for LaurentField {
    type Elem = RatFn;

    fn spec(&self) -> FieldSpec {
        FieldSpec::RationalFunctionOverFq { q: self.k.order() }
    }

    fn residue_field(&self) -> &ResidueField {
        &self.k
    }

    fn zero(&self) -> RatFn {
        RatFn { num: Vec::new(), den: vec![1] }
    }

    fn one(&self) -> RatFn {
        RatFn { num: vec![1], den: vec![1] }
    }

    fn from_i64(&self, x: i64) -> RatFn {
        self.from_poly(vec![self.k.from_i64(x)])
    }

    fn is_zero(&self, a: &RatFn) -> bool {
        a.num.is_empty()
    }

    fn add(&self, a: &RatFn, b: &RatFn) -> RatFn {
        if a.num.is_empty() {
            return b.clone();
        }
        if b.num.is_empty() {
            return a.clone();
        }
        if a.den == b.den {
            return self.make(self.poly_add(&a.num, &b.num), a.den.clone());
        }
        let num = self.poly_add(&self.poly_mul(&a.num, &b.den), &self.poly_mul(&b.num, &a.den));
        self.make(num, self.poly_mul(&a.den, &b.den))
    }

    fn sub(&self, a: &RatFn, b: &RatFn) -> RatFn {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &RatFn, b: &RatFn) -> RatFn {
        if a.num.is_empty() || b.num.is_empty() {
            return self.zero();
        }
        self.make(self.poly_mul(&a.num, &b.num), self.poly_mul(&a.den, &b.den))
    }

    fn neg(&self, a: &RatFn) -> RatFn {
        RatFn { num: self.poly_neg(&a.num), den: a.den.clone() }
    }

    fn inv(&self, a: &RatFn) -> Option<RatFn> {
        (!a.num.is_empty()).then(|| self.make(a.den.clone(), a.num.clone()))
    }

    fn val(&self, a: &RatFn) -> Valuation {
        match ord(&a.num) {
            None => Valuation::Infinity,
            Some(o) => Valuation::Finite(o as i64 - ord(&a.den).unwrap() as i64),
        }
    }

    fn uniformizer_pow(&self, k: i64) -> RatFn {
        let mut mono = vec![0; k.unsigned_abs() as usize + 1];
        mono[k.unsigned_abs() as usize] = 1;
        if k >= 0 {
            RatFn { num: mono, den: vec![1] }
        } else {
            RatFn { num: vec![1], den: mono }
        }
    }

    fn reduce(&self, a: &RatFn) -> Result<ResidueElem> {
        match self.val(a) {
            Valuation::Infinity => Ok(0),
            Valuation::Finite(v) if v < 0 => Err(Error::NegativeValuation(v)),
            Valuation::Finite(v) if v > 0 => Ok(0),
            Valuation::Finite(_) => Ok(self.k.mul(a.num[0], self.k.inv(a.den[0]).unwrap())),
        }
    }

    fn lift(&self, r: ResidueElem) -> RatFn {
        self.from_poly(vec![r])
    }

    fn canonical_rem(&self, a: &RatFn, k: i64) -> RatFn {
        let v = match self.val(a) {
            Valuation::Infinity => return self.zero(),
            Valuation::Finite(v) => v,
        };
        if v >= k {
            return self.zero();
        }
        let on = ord(&a.num).unwrap();
        let od = ord(&a.den).unwrap();
        let series = self.series_div(&a.num[on..], &a.den[od..], (k - v) as usize);
        if v >= 0 {
            let mut num = vec![0; v as usize];
            num.extend(series);
            self.from_poly(num)
        } else {
            self.make(series, self.uniformizer_pow(-v).num)
        }
    }

    fn unit_sample_set(&self, level: u32) -> Vec<RatFn> {
        let c = if self.k.order() == 2 { 1 } else { self.k.multiplicative_generator() };
        let mut out = vec![self.from_poly(vec![c])];
        for j in 1..=level as usize {
            let mut p = vec![0; j + 1];
            p[0] = 1;
            p[j] = c;
            out.push(self.from_poly(p));
        }
        out
    }

    fn random_integral(&self, rng: &mut dyn RngCore, precision: u32) -> RatFn {
        let coeffs = (0..precision).map(|_| super::rng_range(rng, self.k.order() as u64) as u32).collect();
        self.from_poly(coeffs)
    }

    fn digits(&self, a: &RatFn, k: u32) -> Vec<ResidueElem> {
        let r = self.canonical_rem(a, k as i64);
        (0..k as usize).map(|i| r.num.get(i).copied().unwrap_or(0)).collect()
    }

    fn format(&self, a: &RatFn) -> String {
        if a.den == [1] {
            self.format_poly(&a.num)
        } else {
            format!("({})/({})", self.format_poly(&a.num), self.format_poly(&a.den))
        }
    }

    fn parse(&self, s: &str) -> Result<RatFn> {
        let mut depth = 0i32;
        let mut split = None;
        for (i, ch) in s.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '/' if depth == 0 => split = Some(i),
                _ => {}
            }
        }
        match split {
            None => Ok(self.from_poly(self.parse_poly(s)?)),
            Some(i) => {
                let den = self.parse_poly(&s[i + 1..])?;
                if den.is_empty() {
                    return Err(Error::Parse(s.to_string()));
                }
                Ok(self.make(self.parse_poly(&s[..i])?, den))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_at_zero() {
        let f = LaurentField::new(2).unwrap();
        let x = f.parse("t^2/(1+t)").unwrap();
        assert_eq!(f.val(&x), Valuation::Finite(2));
        assert_eq!(f.val(&f.zero()), Valuation::Infinity);
        assert_eq!(f.val(&f.parse("(1+t)/(t^3+t)").unwrap()), Valuation::Finite(-1));
    }

    #[test]
    fn reduction() {
        let f = LaurentField::new(3).unwrap();
        assert_eq!(f.reduce(&f.parse("(2 + t)/(1 + t^2)").unwrap()).unwrap(), 2);
        assert_eq!(f.reduce(&f.uniformizer_pow(1)).unwrap(), 0);
        assert!(matches!(f.reduce(&f.uniformizer_pow(-1)), Err(Error::NegativeValuation(-1))));
    }

    #[test]
    fn unit_samples_level_two() {
        let f = LaurentField::new(2).unwrap();
        let u = f.unit_sample_set(2);
        let want: Vec<RatFn> = ["1", "1+t", "1+t^2"].iter().map(|s| f.parse(s).unwrap()).collect();
        assert_eq!(u, want);
    }

    #[test]
    fn fractions_are_reduced() {
        let f = LaurentField::new(2).unwrap();
        // (t^2 + 1)/(t + 1) = t + 1 in characteristic 2
        assert_eq!(f.parse("(t^2+1)/(t+1)").unwrap(), f.parse("1+t").unwrap());
        let x = f.parse("(1+t)/(t^2)").unwrap();
        assert_eq!(f.format(&x), "(1 + t)/(t^2)");
        assert_eq!(f.parse(&f.format(&x)).unwrap(), x);
    }

    #[test]
    fn series_remainder() {
        let f = LaurentField::new(2).unwrap();
        // 1/(1+t) = 1 + t + t^2 + ...
        let x = f.parse("1/(1+t)").unwrap();
        assert_eq!(f.canonical_rem(&x, 3), f.parse("1+t+t^2").unwrap());
        let y = f.parse("1/(t+t^2)").unwrap();
        // t^-1 (1 + t + t^2 + ...) mod t^1 = t^-1 + 1
        assert_eq!(f.canonical_rem(&y, 1), f.parse("(1+t)/(t)").unwrap());
    }
}
