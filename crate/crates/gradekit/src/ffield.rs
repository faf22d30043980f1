//! Finite fields GF(p^k) with q ≤ 2^16.
//!
//! An element is stored as the integer `Σ c_i p^i` of its coefficient vector in
//! the power basis of the modulus. Ordering elements by that integer is the
//! "lexicographic coefficient order" used for every deterministic choice
//! (default modulus, primitive root, scan orders): the leading coefficient is
//! compared first.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_Q: u64 = 1 << 16;

/// A field element. Carries no reference to its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct FqElem(pub u32);

#[derive(Debug)]
struct FieldData {
    p: u32,
    k: u32,
    modulus: Vec<u32>,
    q: u32,
    prim: Option<FqElem>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
}

/// GF(p^k). Cheap to clone; log and exp tables are built once at construction.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldData>);

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for FieldSpec {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    /// `b` is read as a non-negative exponent (its integer encoding).
    Pow,
    /// Unary; `b` is ignored.
    Inv,
    /// Unary; `b` is ignored.
    Neg,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// Polynomials over Z_p as coefficient vectors, low degree first.
fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let b = poly_trim(b.to_vec());
    let mut r = poly_trim(a.to_vec());
    let lb = *b.last().expect("nonzero divisor");
    let inv_lb = mod_pow(lb as u64, (p - 2) as u64, p as u64) as u32;
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = (*r.last().unwrap() as u64 * inv_lb as u64 % p as u64) as u32;
        for (i, &bi) in b.iter().enumerate() {
            let sub = (c as u64 * bi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = poly_trim(r);
    }
    r
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Exhaustive irreducibility test: no monic factor of degree ≤ k/2.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    if k == 1 {
        return true;
    }
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                g.push((c % p as u64) as u32);
                c /= p as u64;
            }
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Build GF(p^k). Without a modulus, the smallest monic irreducible of
    /// degree k is chosen (coefficients compared from the top down).
    pub fn new(p: u64, k: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if k == 0 {
            return Err(Error::ReduciblePolynomial(0));
        }
        let q = p.checked_pow(k).filter(|&q| q <= MAX_Q).ok_or(Error::FieldTooLarge(
            p.saturating_pow(k),
        ))?;
        let p32 = p as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != k as usize + 1 || m[k as usize] != 1 || m.iter().any(|&c| c >= p32) {
                    return Err(Error::ReduciblePolynomial(k));
                }
                if !is_irreducible(m, p32) {
                    return Err(Error::ReduciblePolynomial(k));
                }
                m.to_vec()
            }
            None => {
                if k == 1 {
                    vec![0, 1]
                } else {
                    let mut found = None;
                    for code in 0..q {
                        let mut f = Vec::with_capacity(k as usize + 1);
                        let mut c = code;
                        for _ in 0..k {
                            f.push((c % p) as u32);
                            c /= p;
                        }
                        f.push(1);
                        if is_irreducible(&f, p32) {
                            found = Some(f);
                            break;
                        }
                    }
                    found.expect("irreducible polynomials exist in every degree")
                }
            }
        };
        let mut data = FieldData {
            p: p32,
            k,
            modulus,
            q: q as u32,
            prim: None,
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
        };
        data.neg = (0..data.q).map(|a| digit_neg(&data, a)).collect();
        build_tables(&mut data);
        Ok(FieldSpec(Arc::new(data)))
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn k(&self) -> u32 {
        self.0.k
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    /// Order of the unit group.
    pub fn units(&self) -> u32 {
        self.0.q - 1
    }

    pub fn name(&self) -> String {
        if self.0.k == 1 {
            format!("GF({})", self.0.p)
        } else {
            format!("GF({}^{})", self.0.p, self.0.k)
        }
    }

    pub fn zero(&self) -> FqElem {
        FqElem(0)
    }
    pub fn one(&self) -> FqElem {
        FqElem(1)
    }

    pub fn contains(&self, a: FqElem) -> bool {
        a.0 < self.0.q
    }

    /// Image of an integer under Z → F.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FqElem> {
        if coeffs.len() != self.0.k as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::FieldMismatch);
        }
        let mut v = 0u32;
        for &c in coeffs.iter().rev() {
            v = v * self.0.p + c;
        }
        Ok(FqElem(v))
    }

    pub fn coeffs(&self, a: FqElem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.0.k as usize);
        let mut v = a.0;
        for _ in 0..self.0.k {
            out.push(v % self.0.p);
            v /= self.0.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let d = &*self.0;
        if d.k == 1 {
            let s = a.0 + b.0;
            FqElem(if s >= d.p { s - d.p } else { s })
        } else {
            let (mut x, mut y, mut r, mut place) = (a.0, b.0, 0u32, 1u32);
            while x > 0 || y > 0 {
                let s = (x % d.p + y % d.p) % d.p;
                r += s * place;
                place *= d.p;
                x /= d.p;
                y /= d.p;
            }
            FqElem(r)
        }
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        FqElem(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem(0);
        }
        let d = &*self.0;
        if d.q == 2 {
            return FqElem(1);
        }
        let n = d.q - 1;
        let s = d.log[a.0 as usize] + d.log[b.0 as usize];
        FqElem(d.exp[(if s >= n { s - n } else { s }) as usize])
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let d = &*self.0;
        if d.q == 2 {
            return Ok(FqElem(1));
        }
        let n = d.q - 1;
        let l = d.log[a.0 as usize];
        Ok(FqElem(d.exp[((n - l) % n) as usize]))
    }

    /// Inverse of a value known to be nonzero.
    #[inline]
    pub fn inv_nz(&self, a: FqElem) -> FqElem {
        self.inv(a).expect("inverse of a nonzero element")
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FqElem, e: u64) -> FqElem {
        if e == 0 {
            return FqElem(1);
        }
        if a.0 == 0 {
            return FqElem(0);
        }
        let d = &*self.0;
        if d.q == 2 {
            return FqElem(1);
        }
        let n = (d.q - 1) as u64;
        let l = d.log[a.0 as usize] as u64 * (e % n) % n;
        FqElem(d.exp[l as usize])
    }

    /// Bundled arithmetic entry point with operand validation.
    pub fn arith(&self, op: ArithOp, a: FqElem, b: FqElem) -> Result<FqElem> {
        if !self.contains(a) {
            return Err(Error::FieldMismatch);
        }
        if !matches!(op, ArithOp::Pow | ArithOp::Inv | ArithOp::Neg) && !self.contains(b) {
            return Err(Error::FieldMismatch);
        }
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b)?,
            ArithOp::Pow => self.pow(a, b.0 as u64),
            ArithOp::Inv => self.inv(a)?,
            ArithOp::Neg => self.neg(a),
        })
    }

    /// Smallest element of multiplicative order q−1.
    pub fn primitive_root(&self) -> Result<FqElem> {
        self.0.prim.ok_or(Error::TrivialUnitGroup)
    }

    /// Discrete logarithm to the primitive root, in [0, q−1).
    pub fn dlog(&self, x: FqElem) -> Result<u32> {
        if x.0 == 0 {
            return Err(Error::LogOfZero);
        }
        if !self.contains(x) {
            return Err(Error::FieldMismatch);
        }
        if self.0.q == 2 {
            return Ok(0);
        }
        Ok(self.0.log[x.0 as usize])
    }

    /// `primitive_root^e`; for GF(2) always 1.
    pub fn exp(&self, e: u64) -> FqElem {
        let d = &*self.0;
        if d.q == 2 {
            return FqElem(1);
        }
        FqElem(d.exp[(e % (d.q as u64 - 1)) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: FqElem) -> Result<u32> {
        let l = self.dlog(a)?;
        let n = self.units();
        Ok(n / gcd(n, l))
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.0.q).map(FqElem)
    }

    pub fn units_iter(&self) -> impl Iterator<Item = FqElem> {
        (1..self.0.q).map(FqElem)
    }

    /// Render as an integer (prime fields) or a polynomial in `x`.
    pub fn format(&self, a: FqElem) -> String {
        if self.0.k == 1 {
            return a.0.to_string();
        }
        let c = self.coeffs(a);
        let mut terms = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let coef = if ci == 1 && i > 0 { String::new() } else { ci.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Parse `"3"`, `"-1"`, `"x+1"`, `"2x^2+x"` and similar.
    pub fn parse(&self, s: &str) -> Result<FqElem> {
        let bad = || Error::parse(format!("element {s:?}"), "not a field element");
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad());
        }
        let mut acc = self.zero();
        let mut rest = t.as_str();
        while !rest.is_empty() {
            let (negative, body) = match rest.as_bytes()[0] {
                b'+' => (false, &rest[1..]),
                b'-' => (true, &rest[1..]),
                _ => (false, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            if term.is_empty() {
                return Err(bad());
            }
            let (coef_str, power) = match term.find('x') {
                None => (term, 0u32),
                Some(ix) => {
                    let after = &term[ix + 1..];
                    let power = if after.is_empty() {
                        1
                    } else {
                        after.strip_prefix('^').and_then(|e| e.parse().ok()).ok_or_else(bad)?
                    };
                    (term[..ix].trim_end_matches('*'), power)
                }
            };
            let coef = if coef_str.is_empty() {
                1i64
            } else {
                coef_str.parse::<i64>().map_err(|_| bad())?
            };
            if power > 0 && self.0.k == 1 {
                return Err(bad());
            }
            let xpow = self.x_power(power);
            let mut term_val = self.mul(self.from_int(coef), xpow);
            if negative {
                term_val = self.neg(term_val);
            }
            acc = self.add(acc, term_val);
        }
        Ok(acc)
    }

    fn x_power(&self, e: u32) -> FqElem {
        if e == 0 {
            return self.one();
        }
        let x = if self.0.k == 1 {
            return self.zero();
        } else {
            FqElem(self.0.p)
        };
        let mut r = self.one();
        for _ in 0..e {
            r = slow_mul(&self.0, r.0, x.0).into();
        }
        r
    }
}

impl From<u32> for FqElem {
    fn from(v: u32) -> Self {
        FqElem(v)
    }
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn digit_neg(d: &FieldData, a: u32) -> u32 {
    let (mut x, mut r, mut place) = (a, 0u32, 1u32);
    while x > 0 {
        let c = x % d.p;
        r += ((d.p - c) % d.p) * place;
        place *= d.p;
        x /= d.p;
    }
    r
}

/// Multiplication by polynomial reduction; used only to build the tables.
fn slow_mul(d: &FieldData, a: u32, b: u32) -> u32 {
    let p = d.p as u64;
    let k = d.k as usize;
    let digits = |mut v: u32| {
        let mut out = vec![0u64; k];
        for o in out.iter_mut() {
            *o = (v % d.p) as u64;
            v /= d.p;
        }
        out
    };
    let (x, y) = (digits(a), digits(b));
    let mut prod = vec![0u64; 2 * k];
    for i in 0..k {
        for j in 0..k {
            prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
        }
    }
    for deg in (k..2 * k).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for (i, &mi) in d.modulus.iter().take(k).enumerate() {
            let idx = deg - k + i;
            prod[idx] = (prod[idx] + p * p - c * mi as u64) % p;
        }
    }
    let mut v = 0u32;
    for &c in prod[..k].iter().rev() {
        v = v * d.p + c as u32;
    }
    v
}

fn build_tables(d: &mut FieldData) {
    let q = d.q;
    if q == 2 {
        return;
    }
    let n = q - 1;
    for cand in 2..q {
        // Walk powers; cand is primitive iff it returns to 1 only after n steps.
        let mut exp = Vec::with_capacity(n as usize);
        let mut x = 1u32;
        let mut ok = true;
        for i in 0..n {
            if i > 0 && x == 1 {
                ok = false;
                break;
            }
            exp.push(x);
            x = slow_mul(d, x, cand);
        }
        if ok && x == 1 {
            let mut log = vec![0u32; q as usize];
            for (i, &v) in exp.iter().enumerate() {
                log[v as usize] = i as u32;
            }
            d.prim = Some(FqElem(cand));
            d.exp = exp;
            d.log = log;
            return;
        }
    }
    unreachable!("finite field unit groups are cyclic");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf9_default_modulus_and_square_of_x() {
        let f = FieldSpec::new(3, 2, None).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let x = f.parse("x").unwrap();
        assert_eq!(f.mul(x, x), f.from_int(2));
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(FieldSpec::new(4, 1, None).unwrap_err(), Error::NonPrime(4));
        assert!(matches!(FieldSpec::new(2, 17, None), Err(Error::FieldTooLarge(_))));
        assert_eq!(
            FieldSpec::new(3, 2, Some(&[2, 0, 1])).unwrap_err(),
            Error::ReduciblePolynomial(2)
        );
    }

    #[test]
    fn gf2_has_no_generator() {
        let f = FieldSpec::prime(2).unwrap();
        assert_eq!(f.primitive_root(), Err(Error::TrivialUnitGroup));
        assert_eq!(f.mul(f.one(), f.one()), f.one());
    }

    #[test]
    fn parse_and_format_round_trip() {
        let f = FieldSpec::new(5, 2, None).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse(&f.format(a)).unwrap(), a);
        }
        let g = FieldSpec::prime(7).unwrap();
        assert_eq!(g.parse("-1").unwrap(), FqElem(6));
        assert!(g.parse("x").is_err());
    }

    #[test]
    fn arith_rejects_foreign_elements() {
        let f = FieldSpec::prime(5).unwrap();
        assert_eq!(f.arith(ArithOp::Add, FqElem(7), FqElem(1)), Err(Error::FieldMismatch));
        assert_eq!(f.arith(ArithOp::Div, FqElem(1), FqElem(0)), Err(Error::DivisionByZero));
        assert_eq!(f.dlog(FqElem(0)), Err(Error::LogOfZero));
    }
}
