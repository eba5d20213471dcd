//! Coefficient-ring abstraction so the recursion engine can run both over
//! Q(zeta_8) and over Laurent polynomials in formal deformation parameters.

use crate::error::{Error, Result};
use crate::param::ParamScalar;
use crate::scalar::Scalar;

pub trait Coeff: Clone + PartialEq + std::fmt::Display + std::fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Exact inverse where one exists; errors otherwise.
    fn try_inverse(&self) -> Result<Self>;
    fn from_scalar(s: Scalar) -> Self;
    fn from_int(n: i64) -> Self {
        Self::from_scalar(Scalar::from_int(n))
    }
    fn from_frac(p: i64, q: i64) -> Self {
        Self::from_scalar(Scalar::from_frac(p, q))
    }
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn try_inverse(&self) -> Result<Self> {
        self.inverse()
    }
    fn from_scalar(s: Scalar) -> Self {
        s
    }
}

impl Coeff for ParamScalar {
    fn zero() -> Self {
        ParamScalar::zero()
    }
    fn one() -> Self {
        ParamScalar::one()
    }
    fn is_zero(&self) -> bool {
        ParamScalar::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn try_inverse(&self) -> Result<Self> {
        self.monomial_inverse()
            .ok_or_else(|| Error::NotInvertible(self.to_string()))
    }
    fn from_scalar(s: Scalar) -> Self {
        ParamScalar::constant(s)
    }
}
