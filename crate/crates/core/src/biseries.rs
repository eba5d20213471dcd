//! Bivariate Taylor series in (s, t), used for the double expansions of the
//! Bergman kernel at pairs of branch points.
//!
//! Knowledge is tracked on the triangle i + j < bound, which is the natural
//! domain for the recurrences involved (division by s - t propagates along
//! anti-diagonals).

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::ScalarSeries;

#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries {
    /// grid[i][j] = coefficient of s^i t^j, valid for i + j < bound
    grid: Vec<Vec<Scalar>>,
    pub bound: usize,
}

impl BiSeries {
    pub fn zero(bound: usize) -> Self {
        let grid = (0..bound).map(|i| vec![Scalar::zero(); bound - i]).collect();
        BiSeries { grid, bound }
    }

    pub fn coeff(&self, i: usize, j: usize) -> Result<Scalar> {
        if i + j >= self.bound {
            return Err(Error::OrderExceeded { exp: (i + j) as i64, order: self.bound as i64 });
        }
        Ok(self.grid[i][j].clone())
    }

    fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.grid[i][j] = v;
    }

    /// u(s) * v(t); both factors must be Taylor.
    pub fn from_outer(u: &ScalarSeries, v: &ScalarSeries) -> Result<Self> {
        if u.low < 0 || v.low < 0 {
            return Err(Error::Series("outer product needs Taylor factors".into()));
        }
        let bound = u.order.min(v.order).max(0) as usize;
        let mut out = Self::zero(bound);
        for i in 0..bound {
            let a = u.coeff(i as i64)?;
            if a.is_zero() {
                continue;
            }
            for j in 0..(bound - i) {
                let b = v.coeff(j as i64)?;
                if !b.is_zero() {
                    out.set(i, j, &a * &b);
                }
            }
        }
        Ok(out)
    }

    /// u(s) viewed bivariately; exact in t, so the bound is u's order.
    pub fn from_s(u: &ScalarSeries) -> Result<Self> {
        if u.low < 0 {
            return Err(Error::Series("needs a Taylor series".into()));
        }
        let bound = u.order.max(0) as usize;
        let mut out = Self::zero(bound);
        for i in 0..bound {
            let a = u.coeff(i as i64)?;
            if !a.is_zero() {
                out.set(i, 0, a);
            }
        }
        Ok(out)
    }

    pub fn from_t(v: &ScalarSeries) -> Result<Self> {
        Ok(Self::from_s(v)?.transpose())
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.bound);
        for i in 0..self.bound {
            for j in 0..(self.bound - i) {
                out.grid[j][i] = self.grid[i][j].clone();
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let bound = self.bound.min(rhs.bound);
        let mut out = Self::zero(bound);
        for i in 0..bound {
            for j in 0..(bound - i) {
                out.grid[i][j] = &self.grid[i][j] + &rhs.grid[i][j];
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for row in out.grid.iter_mut() {
            for c in row.iter_mut() {
                *c = -&*c;
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let bound = self.bound.min(rhs.bound);
        let mut out = Self::zero(bound);
        for i1 in 0..self.bound {
            for j1 in 0..(self.bound - i1) {
                let a = &self.grid[i1][j1];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..rhs.bound {
                    if i1 + i2 >= bound {
                        break;
                    }
                    for j2 in 0..(rhs.bound - i2) {
                        if i1 + i2 + j1 + j2 >= bound {
                            break;
                        }
                        let b = &rhs.grid[i2][j2];
                        if !b.is_zero() {
                            out.grid[i1 + i2][j1 + j2] += &(a * b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Inverse of a series with invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        if self.bound == 0 {
            return Err(Error::Series("empty bivariate series".into()));
        }
        let c00_inv = self.grid[0][0].inverse()?;
        let mut out = Self::zero(self.bound);
        for total in 0..self.bound {
            for i in 0..=total {
                let j = total - i;
                let mut acc = if total == 0 { Scalar::one() } else { Scalar::zero() };
                for i1 in 0..=i {
                    for j1 in 0..=j {
                        if i1 == i && j1 == j {
                            continue;
                        }
                        let a = &self.grid[i - i1][j - j1];
                        if a.is_zero() || out.grid[i1][j1].is_zero() {
                            continue;
                        }
                        acc -= &(a * &out.grid[i1][j1]);
                    }
                }
                out.grid[i][j] = &acc * &c00_inv;
            }
        }
        Ok(out)
    }

    /// Exact division by (s - t); the input must be divisible.
    /// N[i][j] = A[i-1][j] - A[i][j-1]  =>  A[i][j] = A[i-1][j+1] - N[i][j+1].
    pub fn div_s_minus_t(&self) -> Result<Self> {
        if self.bound < 1 {
            return Err(Error::Series("insufficient order".into()));
        }
        let bound = self.bound - 1;
        let mut out = Self::zero(bound);
        for i in 0..bound {
            for j in 0..(bound - i) {
                let prev = if i == 0 { Scalar::zero() } else { out.grid[i - 1][j + 1].clone() };
                out.grid[i][j] = &prev - &self.grid[i][j + 1];
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divide_by_s_minus_t() {
        // (s - t)(s + 2t) = s^2 + s t - 2 t^2
        let mut n = BiSeries::zero(6);
        n.grid[2][0] = Scalar::from_int(1);
        n.grid[1][1] = Scalar::from_int(1);
        n.grid[0][2] = Scalar::from_int(-2);
        let a = n.div_s_minus_t().unwrap();
        assert_eq!(a.coeff(1, 0).unwrap(), Scalar::from_int(1));
        assert_eq!(a.coeff(0, 1).unwrap(), Scalar::from_int(2));
        assert_eq!(a.coeff(1, 1).unwrap(), Scalar::zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let mut f = BiSeries::zero(7);
        f.grid[0][0] = Scalar::from_int(2);
        f.grid[1][0] = Scalar::from_int(1);
        f.grid[0][1] = Scalar::from_int(-3);
        f.grid[1][1] = Scalar::from_frac(1, 2);
        let g = f.inverse().unwrap();
        let p = f.mul(&g);
        assert_eq!(p.coeff(0, 0).unwrap(), Scalar::one());
        for i in 0..7usize {
            for j in 0..(7 - i) {
                if i + j > 0 {
                    assert!(p.coeff(i, j).unwrap().is_zero(), "({i},{j})");
                }
            }
        }
    }
}
