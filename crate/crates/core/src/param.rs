//! Laurent polynomials in the formal deformation parameters
//! {y_{-1}, y_1, y_3, y_5, ...} with Q(zeta_8) coefficients.
//!
//! Negative powers of the distinguished invertible parameters y_{-1} and y_1
//! are permitted, so prefactors like y_{-1}^{2-2g-n} are honest elements.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Scalar;

/// Index of a formal parameter: the odd integer j of y_j (j = -1, 1, 3, 5, ...).
pub type ParamIdx = i32;

/// Exponent vector, sparse and sorted by parameter index.
pub type ExpVec = Vec<(ParamIdx, i32)>;

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ParamScalar {
    /// monomial -> coefficient, zero coefficients purged
    pub terms: BTreeMap<ExpVec, Scalar>,
}

fn normalize(mut e: ExpVec) -> ExpVec {
    e.retain(|&(_, x)| x != 0);
    e.sort_unstable();
    e
}

impl ParamScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(s: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(Vec::new(), s);
        }
        ParamScalar { terms }
    }

    /// The variable y_j.
    pub fn var(j: ParamIdx) -> Self {
        Self::var_pow(j, 1)
    }

    pub fn var_pow(j: ParamIdx, e: i32) -> Self {
        assert!(j % 2 != 0, "parameters are indexed by odd integers");
        let mut terms = BTreeMap::new();
        terms.insert(normalize(vec![(j, e)]), Scalar::one());
        ParamScalar { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            let entry = out.terms.entry(m.clone()).or_insert_with(Scalar::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(m);
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = ParamScalar::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let mut m = m1.clone();
                for &(j, e) in m2 {
                    match m.iter_mut().find(|(jj, _)| *jj == j) {
                        Some((_, ee)) => *ee += e,
                        None => m.push((j, e)),
                    }
                }
                let m = normalize(m);
                let c = c1 * c2;
                let entry = out.terms.entry(m).or_insert_with(Scalar::zero);
                *entry += &c;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= s;
        }
        out
    }

    /// Inverse of a single-monomial element; None otherwise.
    pub fn monomial_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let cinv = c.inverse().ok()?;
        let minv: ExpVec = m.iter().map(|&(j, e)| (j, -e)).collect();
        let mut terms = BTreeMap::new();
        terms.insert(normalize(minv), cinv);
        Some(ParamScalar { terms })
    }

    /// Partial derivative with respect to y_j.
    pub fn diff(&self, j: ParamIdx) -> Self {
        let mut out = ParamScalar::zero();
        for (m, c) in &self.terms {
            if let Some(&(_, e)) = m.iter().find(|(jj, _)| *jj == j) {
                let mut m2: ExpVec = m.clone();
                for t in m2.iter_mut() {
                    if t.0 == j {
                        t.1 -= 1;
                    }
                }
                let coeff = c * &Scalar::from_int(e as i64);
                let m2 = normalize(m2);
                let entry = out.terms.entry(m2).or_insert_with(Scalar::zero);
                *entry += &coeff;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// Substitute numerical values for the parameters.
    pub fn eval(&self, values: &dyn Fn(ParamIdx) -> Scalar) -> crate::error::Result<Scalar> {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(j, e) in m {
                t = &t * &values(j).pow(e as i64)?;
            }
            acc += &t;
        }
        Ok(acc)
    }
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({})", c)?;
            for &(j, e) in m {
                write!(f, "*y[{}]^{}", j, e)?;
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_ops() {
        let y1 = ParamScalar::var(1);
        let y3 = ParamScalar::var(3);
        let p = y1.mul(&y1).add(&y3.scale(&Scalar::from_int(2)));
        let q = p.mul(&p);
        // (y1^2 + 2 y3)^2 = y1^4 + 4 y1^2 y3 + 4 y3^2
        assert_eq!(q.terms.len(), 3);
        assert_eq!(p.diff(1), y1.scale(&Scalar::from_int(2)));
        let inv = ParamScalar::var_pow(-1, 2).monomial_inverse().unwrap();
        assert_eq!(ParamScalar::var_pow(-1, 2).mul(&inv), ParamScalar::one());
        assert!(p.monomial_inverse().is_none());
    }
}
