//! Arithmetic in the 8th cyclotomic field Q(zeta_8).
//!
//! Elements are stored on the basis {1, z, z^2, z^3} with z^4 = -1, so the
//! field contains i = z^2 and sqrt(2) = z - z^3.  Coordinates are
//! arbitrary-precision rationals kept in lowest terms, which makes every
//! operation exact.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Element of Q(zeta_8) with coordinates on the power basis of zeta_8.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar(pub [Rational; 4]);

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar([
            BigRational::from_integer(BigInt::from(n)),
            Zero::zero(),
            Zero::zero(),
            Zero::zero(),
        ])
    }

    pub fn from_big(n: BigInt) -> Self {
        Scalar([
            BigRational::from_integer(n),
            Zero::zero(),
            Zero::zero(),
            Zero::zero(),
        ])
    }

    pub fn from_rational(q: Rational) -> Self {
        Scalar([q, Zero::zero(), Zero::zero(), Zero::zero()])
    }

    pub fn from_frac(p: i64, q: i64) -> Self {
        assert!(q != 0);
        Scalar::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// zeta_8 itself.
    pub fn zeta() -> Self {
        let mut s = Scalar::zero();
        s.0[1] = One::one();
        s
    }

    /// i = zeta^2.
    pub fn i() -> Self {
        let mut s = Scalar::zero();
        s.0[2] = One::one();
        s
    }

    /// sqrt(2) = zeta - zeta^3.
    pub fn sqrt2() -> Self {
        let mut s = Scalar::zero();
        s.0[1] = One::one();
        s.0[3] = BigRational::from_integer(BigInt::from(-1));
        s
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.0[0].is_one() && self.0[1].is_zero() && self.0[2].is_zero() && self.0[3].is_zero()
    }

    /// Returns Some(q) if the element is rational.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.0[1].is_zero() && self.0[2].is_zero() && self.0[3].is_zero() {
            Some(&self.0[0])
        } else {
            None
        }
    }

    /// Multiply by zeta^k (k may be any integer).
    pub fn mul_zeta_pow(&self, k: i64) -> Self {
        let k = k.rem_euclid(8);
        let mut out = Scalar::zero();
        for (j, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (j as i64 + k).rem_euclid(8);
            let (idx, sign) = if e < 4 { (e as usize, 1) } else { ((e - 4) as usize, -1) };
            if sign > 0 {
                out.0[idx] += c;
            } else {
                out.0[idx] -= c;
            }
        }
        out
    }

    /// Galois conjugate zeta -> zeta^k for odd k in {1,3,5,7}.
    pub fn galois(&self, k: u8) -> Self {
        assert!(k % 2 == 1 && k < 8);
        let mut out = Scalar::zero();
        for (j, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (j as u32 * k as u32) % 8;
            let (idx, sign) = if e < 4 { (e as usize, 1) } else { ((e - 4) as usize, -1) };
            if sign > 0 {
                out.0[idx] += c;
            } else {
                out.0[idx] -= c;
            }
        }
        out
    }

    /// Exact inverse via the Galois norm. Errors on zero.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c3 = self.galois(3);
        let c5 = self.galois(5);
        let c7 = self.galois(7);
        let prod = &(&c3 * &c5) * &c7;
        let norm = self * &prod;
        let q = norm
            .as_rational()
            .expect("norm of a field element is rational")
            .clone();
        debug_assert!(!q.is_zero());
        let mut out = prod;
        let qinv = q.recip();
        for c in out.0.iter_mut() {
            *c *= &qinv;
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: i64) -> Result<Self> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Square root when it exists in the field.
    ///
    /// Handles every element of the form q * w^2 for w in
    /// {zeta^k, sqrt(2) zeta^k} and q a square rational, which covers all
    /// curve data built from the fixtures. Anything else is rejected with a
    /// diagnostic rather than approximated. Of the two roots, the one whose
    /// first nonzero coordinate is positive is returned.
    pub fn sqrt(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(Scalar::zero());
        }
        // candidate unit squares: zeta^{2k} and 2 * zeta^{2k}
        for k in 0..4i64 {
            for &two in &[false, true] {
                let mut w = Scalar::zeta().pow(k)?;
                if two {
                    w = &w * &Scalar::sqrt2();
                }
                let w2 = &w * &w;
                let q = self * &w2.inverse()?;
                if let Some(r) = q.as_rational() {
                    if !r.is_negative() {
                        if let Some(root) = rational_sqrt(r) {
                            let cand = &Scalar::from_rational(root) * &w;
                            return Ok(canonical_sign(cand));
                        }
                    }
                }
            }
        }
        Err(Error::NoSquareRoot(self.to_string()))
    }
}

/// Fix the sign of a root: first nonzero coordinate positive.
fn canonical_sign(s: Scalar) -> Scalar {
    for c in s.0.iter() {
        if !c.is_zero() {
            return if c.is_negative() { -&s } else { s };
        }
    }
    s
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_zero() {
        return Some(Zero::zero());
    }
    if q.is_negative() {
        return None;
    }
    let ns = q.numer().sqrt();
    let ds = q.denom().sqrt();
    if &(&ns * &ns) == q.numer() && &(&ds * &ds) == q.denom() {
        Some(BigRational::new(ns, ds))
    } else {
        None
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["", "r", "r^2", "r^3"];
        let mut first = true;
        for (j, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            if j == 0 || !a.is_one() {
                write!(f, "{}", a)?;
                if j > 0 {
                    write!(f, "*")?;
                }
            }
            write!(f, "{}", names[j])?;
            first = false;
        }
        Ok(())
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (a, b) in out.0.iter_mut().zip(rhs.0.iter()) {
            *a += b;
        }
        out
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (a, b) in out.0.iter_mut().zip(rhs.0.iter()) {
            *a -= b;
        }
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let mut out = self.clone();
        for a in out.0.iter_mut() {
            *a = -a.clone();
        }
        out
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (j, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in rhs.0.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let e = j + k;
                let prod = a * b;
                if e < 4 {
                    out.0[e] += prod;
                } else {
                    out.0[e - 4] -= prod;
                }
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($Op:ident, $method:ident) => {
        impl $Op for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $Op<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (a, b) in self.0.iter_mut().zip(rhs.0.iter()) {
            *a += b;
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (a, b) in self.0.iter_mut().zip(rhs.0.iter()) {
            *a -= b;
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inverse().expect("division by zero")
    }
}

/// Serialized form: four "p/q" strings on the basis {1, zeta, zeta^2, zeta^3}.
impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self
            .0
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        if strs.len() != 4 {
            return Err(serde::de::Error::custom("scalar needs exactly 4 coordinates"));
        }
        let mut out = Scalar::zero();
        for (i, st) in strs.iter().enumerate() {
            out.0[i] = parse_rational(st).map_err(serde::de::Error::custom)?;
        }
        Ok(out)
    }
}

pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|e| format!("bad numerator {num:?}: {e}"))?;
    let d: BigInt = den.parse().map_err(|e| format!("bad denominator {den:?}: {e}"))?;
    if d.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Scalar {
        Scalar::from_frac(p, q)
    }

    #[test]
    fn defining_relation() {
        // zeta^4 = -1
        assert_eq!(Scalar::zeta().pow(4).unwrap(), r(-1, 1));
        // (zeta^2)^2 = -1, i.e. i^2 = -1
        assert_eq!(&Scalar::i() * &Scalar::i(), r(-1, 1));
        // (zeta - zeta^3)^2 = 2
        assert_eq!(&Scalar::sqrt2() * &Scalar::sqrt2(), r(2, 1));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = &(&r(3, 7) + &(&Scalar::zeta() * &r(2, 5))) + &(&Scalar::i() * &r(-1, 3));
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_one());
        assert!(Scalar::zero().inverse().is_err());
    }

    #[test]
    fn sqrt_cases() {
        assert_eq!(r(4, 9).sqrt().unwrap(), r(2, 3));
        assert_eq!(r(2, 1).sqrt().unwrap(), Scalar::sqrt2());
        // sqrt(-2) = i*sqrt(2) up to canonical sign
        let s = r(-2, 1).sqrt().unwrap();
        assert_eq!(&s * &s, r(-2, 1));
        // sqrt(1/2)
        let h = r(1, 2).sqrt().unwrap();
        assert_eq!(&h * &h, r(1, 2));
        // sqrt(i) = zeta
        assert_eq!(Scalar::i().sqrt().unwrap(), Scalar::zeta());
        // sqrt(2i) = 1 + i
        let t = (&Scalar::i() * &r(2, 1)).sqrt().unwrap();
        assert_eq!(&t * &t, &Scalar::i() * &r(2, 1));
        // 3 is not a square in Q(zeta_8)
        assert!(r(3, 1).sqrt().is_err());
        // nor is zeta itself
        assert!(Scalar::zeta().sqrt().is_err());
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        let coord = (-40i64..40, 1i64..12).prop_map(|(p, q)| BigRational::new(p.into(), q.into()));
        (coord.clone(), coord.clone(), coord.clone(), coord)
            .prop_map(|(a, b, c, d)| Scalar([a, b, c, d]))
    }

    proptest! {
        #[test]
        fn field_laws(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            // associativity and distributivity
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            // exact inverses: (a*b)/b = a
            if !b.is_zero() {
                let ab = &a * &b;
                prop_assert_eq!(&ab * &b.inverse().unwrap(), a);
            }
        }

        #[test]
        fn galois_is_homomorphism(a in arb_scalar(), b in arb_scalar()) {
            for k in [3u8, 5, 7] {
                prop_assert_eq!((&a * &b).galois(k), &a.galois(k) * &b.galois(k));
            }
        }
    }
}
