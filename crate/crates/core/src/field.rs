//! Exact coefficient fields.
//!
//! Everything downstream is generic over [`Field`]. Two implementations are
//! provided: arbitrary-precision rationals ([`Rational`]) and prime fields
//! [`Fp`] whose modulus is carried by the value.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// A commutative field with exact arithmetic.
///
/// `zero()` and `one()` come from `num_traits`; `integer` embeds a machine
/// integer into the same field as `self` (this matters for [`Fp`], whose
/// modulus lives in the value).
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn inv(&self) -> Option<Self>;

    /// Characteristic of the field `self` belongs to (0 for the rationals).
    fn characteristic(&self) -> u64;

    fn integer(&self, n: i64) -> Self;

    /// All `d`-th roots of `self` lying in the field.
    fn nth_roots(&self, d: u64) -> Vec<Self>;

    /// Every element of the field, when it is finite and small enough to list.
    fn elements(&self) -> Option<Vec<Self>>;

    /// Canonical hashable key, used to bucket coefficients.
    fn key(&self) -> String {
        self.to_string()
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn integer(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn nth_roots(&self, d: u64) -> Vec<Self> {
        if d == 0 {
            return vec![];
        }
        if self.is_zero() {
            return vec![self.clone()];
        }
        let neg = self.is_negative();
        if neg && d % 2 == 0 {
            return vec![];
        }
        let num = self.numer().abs();
        let den = self.denom().clone();
        let (Some(rn), Some(rd)) = (int_root(&num, d), int_root(&den, d)) else {
            return vec![];
        };
        let r = BigRational::new(rn, rd);
        let r = if neg { -r } else { r };
        if d % 2 == 0 {
            vec![r.clone(), -r]
        } else {
            vec![r]
        }
    }

    fn elements(&self) -> Option<Vec<Self>> {
        None
    }
}

fn int_root(n: &BigInt, d: u64) -> Option<BigInt> {
    let r = n.nth_root(d as u32);
    if num_traits::pow::pow(r.clone(), d as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Element of the prime field `F_p`, `p < 2^31`.
///
/// The modulus travels with the value. `Fp::zero()` and `Fp::one()` carry no
/// modulus (`p == 0`) and behave as plain integers until combined with a value
/// that has one.
#[derive(Clone, Copy)]
pub struct Fp {
    v: i64,
    p: u64,
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 31), "modulus out of range");
        Fp {
            v: v.rem_euclid(p as i64),
            p,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Representative in `[0, p)`; for modulus-free constants the raw integer.
    pub fn value(&self) -> i64 {
        self.v
    }

    fn unify(a: Fp, b: Fp) -> (i64, i64, u64) {
        let p = match (a.p, b.p) {
            (0, q) | (q, 0) => q,
            (p, q) => {
                debug_assert_eq!(p, q, "mixing prime fields");
                p
            }
        };
        if p == 0 {
            (a.v, b.v, 0)
        } else {
            let m = p as i64;
            (a.v.rem_euclid(m), b.v.rem_euclid(m), p)
        }
    }

    fn reduce(v: i128, p: u64) -> Fp {
        if p == 0 {
            Fp {
                v: v.to_i64().expect("modulus-free constant overflow"),
                p: 0,
            }
        } else {
            Fp {
                v: v.rem_euclid(p as i128) as i64,
                p,
            }
        }
    }

    pub fn pow(&self, mut e: u64) -> Fp {
        let mut base = *self;
        let mut acc = Fp { v: 1, p: self.p };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = Fp::unify(*self, *other);
        a == b
    }
}

impl Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p == 0 {
            write!(f, "{}", self.v)
        } else {
            write!(f, "{} mod {}", self.v, self.p)
        }
    }
}

/// Symmetric representative: values above `p/2` print as negatives.
impl Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p == 0 {
            return write!(f, "{}", self.v);
        }
        let p = self.p as i64;
        let v = self.v.rem_euclid(p);
        if v > p / 2 {
            write!(f, "{}", v - p)
        } else {
            write!(f, "{}", v)
        }
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        let (a, b, p) = Fp::unify(self, o);
        Fp::reduce(a as i128 + b as i128, p)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        let (a, b, p) = Fp::unify(self, o);
        Fp::reduce(a as i128 - b as i128, p)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        let (a, b, p) = Fp::unify(self, o);
        Fp::reduce(a as i128 * b as i128, p)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp::reduce(-(self.v as i128), self.p)
    }
}

impl Div for Fp {
    type Output = Fp;
    fn div(self, o: Fp) -> Fp {
        let (_, _, p) = Fp::unify(self, o);
        let o = Fp { v: o.v, p: if o.p == 0 { p } else { o.p } };
        self * o.inv().expect("division by zero in F_p")
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp { v: 0, p: 0 }
    }
    fn is_zero(&self) -> bool {
        if self.p == 0 {
            self.v == 0
        } else {
            self.v.rem_euclid(self.p as i64) == 0
        }
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp { v: 1, p: 0 }
    }
}

impl Field for Fp {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.p == 0 {
            return match self.v {
                1 | -1 => Some(*self),
                _ => panic!("cannot invert modulus-free constant {}", self.v),
            };
        }
        let g = (self.v as i128).extended_gcd(&(self.p as i128));
        Some(Fp::reduce(g.x, self.p))
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn integer(&self, n: i64) -> Self {
        if self.p == 0 {
            Fp { v: n, p: 0 }
        } else {
            Fp::new(n, self.p)
        }
    }

    fn nth_roots(&self, d: u64) -> Vec<Self> {
        if d == 0 {
            return vec![];
        }
        if self.p == 0 {
            return match self.v {
                0 | 1 => vec![*self],
                _ => vec![],
            };
        }
        fp_roots(*self, d)
    }

    fn elements(&self) -> Option<Vec<Self>> {
        if self.p == 0 || self.p > 1 << 16 {
            return None;
        }
        Some((0..self.p as i64).map(|v| Fp::new(v, self.p)).collect())
    }

    fn key(&self) -> String {
        if self.p == 0 {
            self.v.to_string()
        } else {
            self.v.rem_euclid(self.p as i64).to_string()
        }
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn primitive_root(p: u64) -> Fp {
    let phi = p - 1;
    let fs = prime_factors(phi);
    (2..p)
        .map(|g| Fp::new(g as i64, p))
        .find(|g| fs.iter().all(|&q| !g.pow(phi / q).is_one()))
        .unwrap_or_else(|| Fp::new(1, p))
}

/// Baby-step giant-step discrete logarithm base `g` in `F_p^*`.
fn discrete_log(g: Fp, h: Fp, p: u64) -> Option<u64> {
    let n = p - 1;
    let m = (n as f64).sqrt().ceil() as u64 + 1;
    let mut table = std::collections::HashMap::new();
    let mut e = Fp::new(1, p);
    for j in 0..m {
        table.entry(e.v).or_insert(j);
        e = e * g;
    }
    let factor = g.pow(n - (m % n));
    let mut gamma = h;
    for i in 0..=m {
        if let Some(&j) = table.get(&gamma.v) {
            return Some((i * m + j) % n);
        }
        gamma = gamma * factor;
    }
    None
}

fn fp_roots(c: Fp, d: u64) -> Vec<Fp> {
    let p = c.p;
    if c.is_zero() {
        return vec![c];
    }
    if p == 2 {
        return vec![c];
    }
    let n = p - 1;
    let g = primitive_root(p);
    let Some(l) = discrete_log(g, c, p) else {
        return vec![];
    };
    // solve d*k = l (mod n)
    let gcd = d.gcd(&n);
    if l % gcd != 0 {
        return vec![];
    }
    let (d2, l2, n2) = (d / gcd, l / gcd, n / gcd);
    let inv = if n2 == 1 {
        0
    } else {
        let e = (d2 as i128).extended_gcd(&(n2 as i128));
        e.x.rem_euclid(n2 as i128) as u64
    };
    let k0 = ((l2 as u128 * inv as u128) % n2.max(1) as u128) as u64;
    let mut roots: Vec<Fp> = (0..gcd).map(|t| g.pow(k0 + t * n2)).collect();
    roots.sort_by_key(|r| r.v);
    roots.dedup();
    roots
}

/// Field element from a big integer, in the field of `template`.
pub fn from_bigint<F: Field>(template: &F, n: &BigInt) -> F {
    if let Some(v) = n.to_i64() {
        return template.integer(v);
    }
    // Horner in base 2^32 for values beyond i64.
    let (sign, digits) = n.to_u32_digits();
    let base = template.integer(1 << 32);
    let mut acc = F::zero();
    for d in digits.iter().rev() {
        acc = acc * base.clone() + template.integer(*d as i64);
    }
    if sign == num_bigint::Sign::Minus {
        -acc
    } else {
        acc
    }
}
