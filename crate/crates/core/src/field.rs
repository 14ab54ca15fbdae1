//! Finite fields GF(p^e).
//!
//! Elements are `u32` codes: the polynomial `c_0 + c_1 X + ... + c_{e-1} X^{e-1}`
//! is stored as `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`. The prime subfield is
//! therefore the codes `0..p`. Multiplication goes through log/exp tables;
//! addition is XOR in characteristic 2, integer arithmetic for prime fields
//! and Zech logarithms otherwise.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Elem = u32;

/// Largest field order we build tables for.
pub const MAX_ORDER: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Prime,
    Binary,
    General,
}

struct Tables {
    p: u32,
    e: u32,
    q: u32,
    kind: Kind,
    /// Monic modulus, low degree first, length e+1.
    modulus: Vec<u32>,
    /// exp[i] = g^i for 0 <= i < 2(q-1).
    exp: Vec<u32>,
    /// log[a] for a != 0.
    log: Vec<u32>,
    /// zech[d] = log(1 + g^d), or NONE when 1 + g^d = 0. Only for General.
    zech: Vec<u32>,
}

const NONE: u32 = u32::MAX;

/// A finite field handle. Cheap to clone; equality compares (p, e).
#[derive(Clone)]
pub struct Field(Arc<Tables>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.e == other.0.e
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.e)
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn new(p: u32, e: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= MAX_ORDER);
        let Some(q) = q else {
            return Err(Error::InvalidField(format!(
                "GF({p}^{e}) exceeds the table limit of {MAX_ORDER} elements"
            )));
        };
        Ok(Field(Arc::new(build_tables(p, e, q as u32))))
    }

    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1)
    }

    pub fn from_spec(spec: FieldSpec) -> Result<Field> {
        Field::new(spec.p, spec.e)
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.0.p, e: self.0.e }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }
    #[inline]
    pub fn e(&self) -> u32 {
        self.0.e
    }
    #[inline]
    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Coefficients of the modulus, low degree first (monic).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// The multiplicative generator used for the log tables.
    pub fn generator(&self) -> Elem {
        self.0.exp[1]
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let t = &*self.0;
        match t.kind {
            Kind::Binary => a ^ b,
            Kind::Prime => {
                let s = a + b;
                if s >= t.p {
                    s - t.p
                } else {
                    s
                }
            }
            Kind::General => {
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                let la = t.log[a as usize];
                let lb = t.log[b as usize];
                let n = t.q - 1;
                let d = if lb >= la { lb - la } else { lb + n - la };
                let z = t.zech[d as usize];
                if z == NONE {
                    0
                } else {
                    t.exp[(la + z) as usize]
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let t = &*self.0;
        match t.kind {
            Kind::Binary => a,
            Kind::Prime => {
                if a == 0 {
                    0
                } else {
                    t.p - a
                }
            }
            Kind::General => {
                if a == 0 {
                    return 0;
                }
                // -1 = g^((q-1)/2) for odd q
                let h = (t.q - 1) / 2;
                t.exp[(t.log[a as usize] + h) as usize]
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &*self.0;
        if t.kind == Kind::Prime {
            return ((a as u64 * b as u64) % t.p as u64) as u32;
        }
        t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero in {self}");
        let t = &*self.0;
        let l = t.log[a as usize];
        if l == 0 {
            1
        } else {
            t.exp[(t.q - 1 - l) as usize]
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let t = &*self.0;
        let n = (t.q - 1) as u64;
        let l = (t.log[a as usize] as u64 * (k % n)) % n;
        t.exp[l as usize]
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.0.p as i64) as u32
    }

    /// Discrete log with respect to `generator()`.
    pub fn log(&self, a: Elem) -> Option<u32> {
        (a != 0).then(|| self.0.log[a as usize])
    }

    pub fn exp(&self, k: u64) -> Elem {
        self.0.exp[(k % (self.0.q as u64 - 1)) as usize]
    }

    /// Coordinates over the prime field, low degree first.
    pub fn digits(&self, a: Elem) -> Vec<u32> {
        let p = self.0.p;
        let mut a = a;
        (0..self.0.e)
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Elem> {
        if digits.len() > self.0.e as usize || digits.iter().any(|&d| d >= self.0.p) {
            return Err(Error::InvalidField(format!(
                "coefficient vector {digits:?} is not an element of {self}"
            )));
        }
        Ok(digits.iter().rev().fold(0u32, |acc, &d| acc * self.0.p + d))
    }

    pub fn is_valid(&self, a: Elem) -> bool {
        a < self.0.q
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.q
    }

    /// Whether `a` lies in the prime subfield.
    pub fn in_prime_field(&self, a: Elem) -> bool {
        a < self.0.p
    }

    /// Human-readable element: integers for prime fields, `g^k` otherwise.
    pub fn format(&self, a: Elem) -> String {
        if self.0.e == 1 || a < self.0.p {
            a.to_string()
        } else {
            let l = self.0.log[a as usize];
            if l == 1 {
                "g".to_string()
            } else {
                format!("g^{l}")
            }
        }
    }

    /// dst[i] += c * src[i]
    #[inline]
    pub fn axpy(&self, dst: &mut [Elem], c: Elem, src: &[Elem]) {
        debug_assert_eq!(dst.len(), src.len());
        if c == 0 {
            return;
        }
        let t = &*self.0;
        match t.kind {
            Kind::Prime => {
                let p = t.p as u64;
                let c = c as u64;
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        *d = ((*d as u64 + c * s as u64) % p) as u32;
                    }
                }
            }
            Kind::Binary => {
                let lc = t.log[c as usize];
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        *d ^= t.exp[(lc + t.log[s as usize]) as usize];
                    }
                }
            }
            Kind::General => {
                let lc = t.log[c as usize];
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        let cs = t.exp[(lc + t.log[s as usize]) as usize];
                        *d = self.add(*d, cs);
                    }
                }
            }
        }
    }

    /// v[i] *= c
    pub fn scale(&self, v: &mut [Elem], c: Elem) {
        if c == 1 {
            return;
        }
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }

    /// Embedding of `self` into `big`, as a lookup table indexed by element code.
    ///
    /// The generator of `self` is sent to the least root (by code) of its modulus.
    pub fn embedding_into(&self, big: &Field) -> Result<Vec<Elem>> {
        if self.p() != big.p() || big.e() % self.e() != 0 {
            return Err(Error::FieldMismatch(format!("{self} does not embed in {big}")));
        }
        if self == big {
            return Ok(self.elements().collect());
        }
        if self.e() == 1 {
            return Ok(self.elements().collect());
        }
        let m = self.modulus();
        let eval = |r: Elem| {
            let mut acc = 0;
            for &c in m.iter().rev() {
                acc = big.add(big.mul(acc, r), c);
            }
            acc
        };
        let root = big
            .elements()
            .find(|&r| eval(r) == 0)
            .ok_or_else(|| Error::FieldMismatch(format!("no root of the {self} modulus in {big}")))?;
        let e = self.e() as usize;
        let mut powers = vec![1u32; e];
        for i in 1..e {
            powers[i] = big.mul(powers[i - 1], root);
        }
        Ok(self
            .elements()
            .map(|a| {
                self.digits(a)
                    .iter()
                    .zip(&powers)
                    .fold(0, |acc, (&d, &pw)| big.add(acc, big.mul(d, pw)))
            })
            .collect())
    }
}

/// Multiply a polynomial in X (digits over GF(p), low first) by X modulo `modulus`.
fn times_x(v: &mut [u32], modulus: &[u32], p: u32) {
    let e = v.len();
    let top = v[e - 1];
    for i in (1..e).rev() {
        v[i] = v[i - 1];
    }
    v[0] = 0;
    if top != 0 {
        for i in 0..e {
            // subtract top * modulus[i]
            v[i] = (v[i] + p - (top * modulus[i]) % p) % p;
        }
    }
}

fn encode(v: &[u32], p: u32) -> u32 {
    v.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Generate the exp table for modulus `m` if X is primitive; None otherwise.
fn primitive_exp(m: &[u32], p: u32, e: u32, q: u32) -> Option<Vec<u32>> {
    let n = (q - 1) as usize;
    let mut exp = Vec::with_capacity(2 * n);
    let mut v = vec![0u32; e as usize];
    v[0] = 1;
    for i in 0..n {
        let c = encode(&v, p);
        if i > 0 && c == 1 {
            return None;
        }
        if c == 0 {
            return None;
        }
        exp.push(c);
        times_x(&mut v, m, p);
    }
    if encode(&v, p) != 1 {
        return None;
    }
    let head: Vec<u32> = exp.clone();
    exp.extend(head);
    Some(exp)
}

fn build_tables(p: u32, e: u32, q: u32) -> Tables {
    let n = q - 1;
    let (modulus, exp) = if e == 1 {
        // least primitive root g; modulus X - g
        let mut found = None;
        for g in 1..p.max(2) {
            let mut exp = Vec::with_capacity(2 * n as usize);
            let mut x = 1u64;
            let mut ok = true;
            for i in 0..n {
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x as u32);
                x = x * g as u64 % p as u64;
            }
            if ok && x == 1 {
                let head = exp.clone();
                exp.extend(head);
                found = Some((vec![(p - g) % p, 1], exp));
                break;
            }
        }
        found.unwrap_or_else(|| (vec![0, 1], vec![1, 1]))
    } else {
        // least primitive polynomial by code of its lower coefficients
        let mut found = None;
        for low in 1..q {
            let mut m: Vec<u32> = (0..e).map(|i| (low / p.pow(i)) % p).collect();
            if m[0] == 0 {
                continue;
            }
            m.push(1);
            if let Some(exp) = primitive_exp(&m, p, e, q) {
                found = Some((m, exp));
                break;
            }
        }
        found.expect("a primitive polynomial exists for every degree")
    };
    let mut log = vec![0u32; q as usize];
    for i in 0..n {
        log[exp[i as usize] as usize] = i;
    }
    let kind = if e == 1 {
        Kind::Prime
    } else if p == 2 {
        Kind::Binary
    } else {
        Kind::General
    };
    let mut zech = Vec::new();
    if kind == Kind::General {
        zech = vec![NONE; n as usize];
        for d in 0..n {
            // 1 + g^d computed digit-wise
            let mut digits: Vec<u32> = {
                let mut a = exp[d as usize];
                (0..e)
                    .map(|_| {
                        let r = a % p;
                        a /= p;
                        r
                    })
                    .collect()
            };
            digits[0] = (digits[0] + 1) % p;
            let c = encode(&digits, p);
            if c != 0 {
                zech[d as usize] = log[c as usize];
            }
        }
    }
    Tables { p, e, q, kind, modulus, exp, log, zech }
}
