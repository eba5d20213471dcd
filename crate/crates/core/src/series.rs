//! Truncated Laurent series with explicit, pessimistic order tracking.
//!
//! A series knows its coefficients for exponents in [low, order); exponents
//! below `low` are exactly zero and anything at or above `order` is unknown.
//! Reading past the order is an error, never a silent zero, which keeps long
//! residue chains honest.

use crate::error::{Error, Result};
use crate::ring::Coeff;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Debug)]
pub struct Series<C: Coeff> {
    pub low: i64,
    /// coefficient of exponent low + i at index i
    pub coeffs: Vec<C>,
    /// exponents >= order are unknown
    pub order: i64,
}

pub type ScalarSeries = Series<Scalar>;

impl<C: Coeff> Series<C> {
    pub fn zero_to(order: i64) -> Self {
        Series { low: order, coeffs: Vec::new(), order }
    }

    pub fn from_coeffs(low: i64, coeffs: Vec<C>, order: i64) -> Self {
        assert!(low + coeffs.len() as i64 <= order, "coefficients past truncation order");
        let mut s = Series { low, coeffs, order };
        s.normalize();
        s
    }

    /// Monomial c * t^e known up to `order`.
    pub fn monomial(c: C, e: i64, order: i64) -> Self {
        if e >= order || c.is_zero() {
            return Self::zero_to(order);
        }
        Series { low: e, coeffs: vec![c], order }
    }

    pub fn constant(c: C, order: i64) -> Self {
        Self::monomial(c, 0, order)
    }

    pub fn one(order: i64) -> Self {
        Self::constant(C::one(), order)
    }

    /// The variable t itself.
    pub fn t(order: i64) -> Self {
        Self::monomial(C::one(), 1, order)
    }

    fn normalize(&mut self) {
        // pad truncation: drop stored coefficients at or above order
        let max_len = (self.order - self.low).max(0) as usize;
        self.coeffs.truncate(max_len);
        // trim leading zeros
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        // trim trailing zeros (they stay implied by [low, order) semantics)
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.low = self.order;
        }
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero_to_order(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest exponent with a nonzero known coefficient.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.low)
        }
    }

    /// Coefficient at exponent e; error if e is beyond the known range.
    pub fn coeff(&self, e: i64) -> Result<C> {
        if e >= self.order {
            return Err(Error::OrderExceeded { exp: e, order: self.order });
        }
        if e < self.low || e >= self.low + self.coeffs.len() as i64 {
            return Ok(C::zero());
        }
        Ok(self.coeffs[(e - self.low) as usize].clone())
    }

    /// Coefficient of t^{-1}.
    pub fn residue(&self) -> Result<C> {
        self.coeff(-1)
    }

    pub fn truncate(&self, order: i64) -> Self {
        let mut s = self.clone();
        s.order = s.order.min(order);
        s.normalize();
        s
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let low = self.low.min(rhs.low).min(order);
        let len = (order - low).max(0) as usize;
        let mut coeffs = vec![C::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.low + i as i64;
            if e < order {
                coeffs[(e - low) as usize] = c.clone();
            }
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            let e = rhs.low + i as i64;
            if e < order {
                let slot = &mut coeffs[(e - low) as usize];
                *slot = slot.add_ref(c);
            }
        }
        Series::from_coeffs(low, coeffs, order)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.iter_mut() {
            *c = c.neg_ref();
        }
        s
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero_to(self.order);
        }
        let mut s = self.clone();
        for c in s.coeffs.iter_mut() {
            *c = c.mul_ref(k);
        }
        s.normalize();
        s
    }

    /// Multiply by t^k.
    pub fn shift(&self, k: i64) -> Self {
        Series { low: self.low + k, coeffs: self.coeffs.clone(), order: self.order + k }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        // product of orders rule: error terms are O(t^{o1+v2}) and O(t^{o2+v1})
        let v1 = self.valuation().unwrap_or(self.order);
        let v2 = rhs.valuation().unwrap_or(rhs.order);
        let order = (self.order + v2).min(rhs.order + v1);
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::zero_to(order);
        }
        let low = v1 + v2;
        let len = (order - low).max(0) as usize;
        let mut coeffs = vec![C::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let e = self.low + i as i64 + rhs.low + j as i64;
                if e >= order {
                    break;
                }
                let slot = &mut coeffs[(e - low) as usize];
                *slot = slot.add_ref(&a.mul_ref(b));
            }
        }
        Series::from_coeffs(low, coeffs, order)
    }

    /// Exact inverse; the leading coefficient must be invertible.
    pub fn inverse(&self) -> Result<Self> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::Series("cannot invert a series that vanishes to order".into()))?;
        let lead = self.coeffs[0].clone();
        let lead_inv = lead.try_inverse()?;
        // f = lead * t^v * (1 + u), invert (1 + u) by the standard recurrence
        let n = (self.order - v) as usize; // known length of (1+u)
        let mut u = vec![C::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            u[i] = c.mul_ref(&lead_inv);
        }
        let mut inv = vec![C::zero(); n];
        inv[0] = C::one();
        for k in 1..n {
            // coefficient of t^k in (1+u)*(inv) must vanish
            let mut acc = C::zero();
            for j in 0..k {
                if !inv[j].is_zero() && !u[k - j].is_zero() {
                    acc = acc.add_ref(&inv[j].mul_ref(&u[k - j]));
                }
            }
            inv[k] = acc.neg_ref();
        }
        for c in inv.iter_mut() {
            *c = c.mul_ref(&lead_inv);
        }
        Ok(Series::from_coeffs(-v, inv, self.order - 2 * v))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inverse()?))
    }

    /// Derivative d/dt.
    pub fn derivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.low + i as i64;
            coeffs.push(c.mul_ref(&C::from_int(e)));
        }
        Series::from_coeffs(self.low - 1, coeffs, self.order - 1)
    }

    /// Substitute t -> -t.
    pub fn flip_sign(&self) -> Self {
        let mut s = self.clone();
        for (i, c) in s.coeffs.iter_mut().enumerate() {
            let e = s.low + i as i64;
            if e.rem_euclid(2) == 1 {
                *c = c.neg_ref();
            }
        }
        s
    }

    /// Even part (f(t) + f(-t))/2 -- exact, no division by 2 needed per slot.
    pub fn even_part(&self) -> Self {
        let mut s = self.clone();
        for (i, c) in s.coeffs.iter_mut().enumerate() {
            if (s.low + i as i64).rem_euclid(2) == 1 {
                *c = C::zero();
            }
        }
        s.normalize();
        s
    }

    pub fn odd_part(&self) -> Self {
        let mut s = self.clone();
        for (i, c) in s.coeffs.iter_mut().enumerate() {
            if (s.low + i as i64).rem_euclid(2) == 0 {
                *c = C::zero();
            }
        }
        s.normalize();
        s
    }

    /// Composition f(g) for g with valuation >= 1.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        let m = match g.valuation() {
            Some(v) if v >= 1 => v,
            Some(_) => return Err(Error::Series("composition needs valuation >= 1".into())),
            // g vanishes to order: treat as exactly zero only if f has no negative part
            None => {
                if self.low < 0 {
                    return Err(Error::Series("composed zero into a Laurent pole".into()));
                }
                return Ok(Series::constant(self.coeff(0).unwrap_or_else(|_| C::zero()), g.order));
            }
        };
        // overall tail from the truncation of f
        let tail_order = m.saturating_mul(self.order);
        let mut acc = Series::zero_to(tail_order);
        // non-negative powers by Horner on the part with exponents >= 0
        let mut horner = Series::zero_to(tail_order);
        let top = self.order - 1;
        let mut e = top;
        while e >= 0 {
            horner = horner.mul(g);
            let c = self.coeff(e)?;
            if !c.is_zero() {
                horner = horner.add(&Series::constant(c, horner.order.max(tail_order)));
            }
            e -= 1;
        }
        acc = acc.add(&horner);
        // negative powers via powers of g^{-1}
        if self.low < 0 {
            let ginv = g.inverse()?;
            let mut p = ginv.clone();
            let mut k = -1i64;
            loop {
                if k < self.low {
                    break;
                }
                let c = self.coeff(k)?;
                if !c.is_zero() {
                    acc = acc.add(&p.scale(&c));
                }
                k -= 1;
                if k >= self.low {
                    p = p.mul(&ginv);
                }
            }
        }
        Ok(acc.truncate(tail_order))
    }

    /// Compositional inverse of a series with valuation exactly 1 and
    /// invertible linear coefficient: returns g with self(g(t)) = t.
    pub fn reverse(&self) -> Result<Self> {
        if self.valuation() != Some(1) {
            return Err(Error::Series("reversion needs valuation exactly 1".into()));
        }
        let a1 = self.coeff(1)?;
        let a1_inv = a1.try_inverse()?;
        let n = self.order;
        if n <= 1 {
            return Ok(Series::zero_to(n));
        }
        let mut g = Series::monomial(a1_inv.clone(), 1, 2);
        for k in 2..n {
            // extend g to order k+1, solve for the t^k coefficient
            let mut gk = g.clone();
            gk.order = k + 1;
            let fg = self.truncate(k + 1).compose(&gk)?;
            let delta = fg.coeff(k)?;
            let b = delta.neg_ref().mul_ref(&a1_inv);
            gk = gk.add(&Series::monomial(b, k, k + 1));
            g = gk;
        }
        Ok(g)
    }
}

impl Series<Scalar> {
    /// Square root of a series with even valuation whose leading coefficient
    /// is a square in Q(zeta_8). The branch is fixed by the canonical sign of
    /// the leading-root; flip with `neg` where a different sheet is wanted.
    pub fn sqrt(&self) -> Result<Self> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::Series("sqrt of a series vanishing to order".into()))?;
        if v.rem_euclid(2) != 0 {
            return Err(Error::Series(format!("sqrt needs even valuation, found {v}")));
        }
        let lead = self.coeffs[0].clone();
        let root = lead.sqrt()?;
        // self = lead t^v (1+u); compute (1+u)^{1/2} by Newton iteration
        let one_plus_u = self.shift(-v).scale(&lead.inverse()?);
        let n = one_plus_u.order;
        let mut h = Series::one(n);
        let half = Scalar::from_frac(1, 2);
        loop {
            let next = h.add(&one_plus_u.div(&h)?).scale(&half).truncate(n);
            if next == h {
                break;
            }
            h = next;
        }
        Ok(h.scale(&root).shift(v / 2))
    }
}

/// Independent Lagrange-inversion oracle used by tests:
/// [t^n] g = (1/n) [t^{n-1}] (t / f(t))^n.
pub fn lagrange_reverse_oracle(f: &ScalarSeries) -> Result<ScalarSeries> {
    if f.valuation() != Some(1) {
        return Err(Error::Series("oracle needs valuation 1".into()));
    }
    let n_max = f.order;
    let t_over_f = ScalarSeries::t(f.order).div(f)?; // valuation 0
    let mut coeffs = Vec::new();
    for n in 1..n_max {
        let mut p = ScalarSeries::one(n_max);
        for _ in 0..n {
            p = p.mul(&t_over_f);
        }
        let c = p.coeff(n - 1)?;
        coeffs.push(&c * &Scalar::from_int(n).inverse()?);
    }
    Ok(ScalarSeries::from_coeffs(1, coeffs, n_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(v: Vec<i64>, low: i64, order: i64) -> ScalarSeries {
        ScalarSeries::from_coeffs(low, v.into_iter().map(Scalar::from_int).collect(), order)
    }

    #[test]
    fn residue_basics() {
        // 1/z -> 1
        assert_eq!(s(vec![1], -1, 3).residue().unwrap(), Scalar::from_int(1));
        // z^2 -> 0
        assert_eq!(s(vec![1], 2, 5).residue().unwrap(), Scalar::zero());
        // 3/z^2 + 5/z -> 5
        assert_eq!(s(vec![3, 5], -2, 2).residue().unwrap(), Scalar::from_int(5));
        // unknown range is an error
        assert!(ScalarSeries::zero_to(-1).residue().is_err());
    }

    #[test]
    fn inverse_and_mul() {
        let f = s(vec![2, 1, 3], 0, 6);
        let g = f.inverse().unwrap();
        let p = f.mul(&g);
        assert_eq!(p.coeff(0).unwrap(), Scalar::one());
        for e in 1..p.order {
            assert!(p.coeff(e).unwrap().is_zero());
        }
    }

    #[test]
    fn reversion_matches_hand_value() {
        // reverse(t - t^2/2 + 3 t^3/8 - 5 t^4/16) = t + t^2/2 + t^3/8 + 0 t^4
        let f = ScalarSeries::from_coeffs(
            1,
            vec![
                Scalar::from_int(1),
                Scalar::from_frac(-1, 2),
                Scalar::from_frac(3, 8),
                Scalar::from_frac(-5, 16),
            ],
            5,
        );
        let g = f.reverse().unwrap();
        assert_eq!(g.coeff(1).unwrap(), Scalar::from_int(1));
        assert_eq!(g.coeff(2).unwrap(), Scalar::from_frac(1, 2));
        assert_eq!(g.coeff(3).unwrap(), Scalar::from_frac(1, 8));
        assert_eq!(g.coeff(4).unwrap(), Scalar::zero());
        // independent Lagrange-inversion oracle agrees
        let oracle = lagrange_reverse_oracle(&f).unwrap();
        for e in 1..5 {
            assert_eq!(g.coeff(e).unwrap(), oracle.coeff(e).unwrap());
        }
    }

    #[test]
    fn reversion_trivial_cases() {
        assert_eq!(
            ScalarSeries::t(6).reverse().unwrap().coeff(1).unwrap(),
            Scalar::one()
        );
        let two_t = ScalarSeries::monomial(Scalar::from_int(2), 1, 6);
        assert_eq!(two_t.reverse().unwrap().coeff(1).unwrap(), Scalar::from_frac(1, 2));
    }

    #[test]
    fn sqrt_cases() {
        // sqrt(1+t) binomial series
        let f = s(vec![1, 1], 0, 6);
        let r = f.sqrt().unwrap();
        assert_eq!(r.coeff(0).unwrap(), Scalar::one());
        assert_eq!(r.coeff(1).unwrap(), Scalar::from_frac(1, 2));
        assert_eq!(r.coeff(2).unwrap(), Scalar::from_frac(-1, 8));
        assert_eq!(r.mul(&r).coeff(3).unwrap(), Scalar::zero());
        // sqrt(2 t^2) = sqrt(2) t
        let f = ScalarSeries::monomial(Scalar::from_int(2), 2, 8);
        assert_eq!(f.sqrt().unwrap().coeff(1).unwrap(), Scalar::sqrt2());
        // odd valuation errors
        assert!(s(vec![1], 3, 8).sqrt().is_err());
    }

    fn arb_poly(val: i64) -> impl Strategy<Value = ScalarSeries> {
        proptest::collection::vec(-9i64..9, 5).prop_map(move |mut v| {
            if v[0] == 0 {
                v[0] = 1;
            }
            ScalarSeries::from_coeffs(
                val,
                v.into_iter().map(Scalar::from_int).collect(),
                val + 5,
            )
        })
    }

    proptest! {
        #[test]
        fn compose_reverse_roundtrip(f in arb_poly(1)) {
            let g = f.reverse().unwrap();
            let t = f.compose(&g).unwrap();
            prop_assert_eq!(t.coeff(1).unwrap(), Scalar::one());
            for e in 2..t.order {
                prop_assert!(t.coeff(e).unwrap().is_zero());
            }
        }

        #[test]
        fn residue_of_derivative_vanishes(f in arb_poly(-2)) {
            // residue(df) = 0 for any Laurent series
            let df = f.derivative();
            prop_assert!(df.residue().unwrap().is_zero());
        }
    }
}
