//! Sparse polynomials in hbar and the time variables v^{k,alpha}, graded by
//! genus through the hbar exponent. Partition functions, free energies and
//! the quantised operators all act on this type.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A time variable index (k, label). Labels number branch points from 0; the
/// tau^+/tau^- namespace uses labels 0 and 1, single-branch t-times label 0.
pub type TimeVar = (u32, u32);

/// Monomial: hbar exponent (= g - 1 on free-energy terms) and a sorted list
/// of time variables with repetition.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct TMono {
    pub hbar: i64,
    pub times: Vec<TimeVar>,
}

impl TMono {
    pub fn new(hbar: i64, mut times: Vec<TimeVar>) -> Self {
        times.sort_unstable();
        TMono { hbar, times }
    }

    pub fn one() -> Self {
        TMono { hbar: 0, times: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.times.len()
    }

    pub fn k_sum(&self) -> i64 {
        self.times.iter().map(|(k, _)| *k as i64).sum()
    }

    /// W = 3 hbar + degree - k_sum; every operator of the pipeline raises it.
    pub fn w_grade(&self) -> i64 {
        3 * self.hbar + self.degree() as i64 - self.k_sum()
    }

    /// product over repeated variables of multiplicity factorials
    pub fn aut_factorial(&self) -> num_bigint::BigInt {
        use num_bigint::BigInt;
        let mut acc = BigInt::from(1);
        let mut run = 1u64;
        for w in self.times.windows(2) {
            if w[0] == w[1] {
                run += 1;
                acc *= run;
            } else {
                run = 1;
            }
        }
        acc
    }
}

impl fmt::Display for TMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h^{}", self.hbar)?;
        let mut i = 0;
        while i < self.times.len() {
            let v = self.times[i];
            let mut e = 1;
            while i + e < self.times.len() && self.times[i + e] == v {
                e += 1;
            }
            write!(f, " v({},{})", v.0, v.1 + 1)?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
            i += e;
        }
        Ok(())
    }
}

/// Truncation window; every operation drops monomials outside it.
#[derive(Clone, Copy, Debug)]
pub struct Window {
    pub hbar_min: i64,
    pub hbar_max: i64,
    pub deg_max: usize,
    pub k_sum_max: i64,
    /// optional cap on the W grading (used by the operator pipeline)
    pub w_max: Option<i64>,
}

impl Window {
    pub fn new(hbar_min: i64, hbar_max: i64, deg_max: usize, k_sum_max: i64) -> Self {
        Window { hbar_min, hbar_max, deg_max, k_sum_max, w_max: None }
    }

    pub fn with_w_cap(mut self, w: i64) -> Self {
        self.w_max = Some(w);
        self
    }

    pub fn contains(&self, m: &TMono) -> bool {
        m.hbar >= self.hbar_min
            && m.hbar <= self.hbar_max
            && m.degree() <= self.deg_max
            && m.k_sum() <= self.k_sum_max
            && self.w_max.map_or(true, |w| m.w_grade() <= w)
    }
}

#[derive(Clone, PartialEq, Debug, Default)]
pub struct TimesPoly {
    pub terms: BTreeMap<TMono, Scalar>,
}

impl TimesPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut t = Self::default();
        t.terms.insert(TMono::one(), Scalar::one());
        t
    }

    pub fn monomial(m: TMono, c: Scalar) -> Self {
        let mut t = Self::default();
        if !c.is_zero() {
            t.terms.insert(m, c);
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &TMono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: TMono, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            let e = out.terms.entry(m.clone()).or_insert_with(Scalar::zero);
            *e += c;
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= k;
        }
        out
    }

    pub fn filter(&self, win: &Window) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if win.contains(m) {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self, win: &Window) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let hbar = m1.hbar + m2.hbar;
                if hbar > win.hbar_max || m1.degree() + m2.degree() > win.deg_max {
                    continue;
                }
                let mut times = m1.times.clone();
                times.extend_from_slice(&m2.times);
                let m = TMono::new(hbar, times);
                if !win.contains(&m) {
                    continue;
                }
                let c = c1 * c2;
                let e = out.terms.entry(m).or_insert_with(Scalar::zero);
                *e += &c;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    /// exp within the window; every monomial must have positive degree.
    pub fn exp(&self, win: &Window) -> Result<Self> {
        for m in self.terms.keys() {
            if m.degree() == 0 {
                return Err(Error::InvalidInput(format!(
                    "exp needs positive-degree terms only, found {m}"
                )));
            }
        }
        let mut acc = Self::one();
        let mut pw = Self::one();
        let mut j = 1i64;
        loop {
            pw = pw.mul(self, win);
            if pw.is_zero() {
                break;
            }
            let inv = Scalar::from_int(j).inverse()?;
            pw = pw.scale(&inv);
            acc = acc.add(&pw);
            j += 1;
            if j > (win.deg_max as i64) + 1 {
                break;
            }
        }
        Ok(acc)
    }

    /// log within the window; the constant term must be exactly 1.
    pub fn log(&self, win: &Window) -> Result<Self> {
        let c0 = self.coeff(&TMono::one());
        if !c0.is_one() {
            return Err(Error::InvalidInput(format!(
                "log needs unit constant term, found {c0}"
            )));
        }
        let mut n = self.clone();
        n.terms.remove(&TMono::one());
        for m in n.terms.keys() {
            if m.degree() == 0 {
                return Err(Error::InvalidInput(
                    "log needs positive-degree corrections only".into(),
                ));
            }
        }
        let mut acc = Self::zero();
        let mut pw = Self::one();
        let mut j = 1i64;
        loop {
            pw = pw.mul(&n, win);
            if pw.is_zero() {
                break;
            }
            let c = &Scalar::from_int(if j % 2 == 1 { 1 } else { -1 })
                * &Scalar::from_int(j).inverse()?;
            acc = acc.add(&pw.scale(&c));
            j += 1;
            if j > (win.deg_max as i64) + 1 {
                break;
            }
        }
        Ok(acc)
    }

    /// Partial derivative with respect to one time variable.
    pub fn diff(&self, v: TimeVar) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mult = m.times.iter().filter(|t| **t == v).count();
            if mult == 0 {
                continue;
            }
            let mut times = m.times.clone();
            let pos = times.iter().position(|t| *t == v).unwrap();
            times.remove(pos);
            let mn = TMono { hbar: m.hbar, times };
            let cc = c * &Scalar::from_int(mult as i64);
            let e = out.terms.entry(mn).or_insert_with(Scalar::zero);
            *e += &cc;
        }
        out
    }

    /// Multiply by a single time variable.
    pub fn mul_var(&self, v: TimeVar) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut times = m.times.clone();
            times.push(v);
            out.terms.insert(TMono::new(m.hbar, times), c.clone());
        }
        out
    }

    /// Multiply by hbar^j.
    pub fn shift_hbar(&self, j: i64) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.terms
                .insert(TMono { hbar: m.hbar + j, times: m.times.clone() }, c.clone());
        }
        out
    }

    /// Linear change of time variables: each v is replaced by a linear
    /// combination of target variables.
    pub fn substitute_linear<F>(&self, map: F, win: &Window) -> Self
    where
        F: Fn(TimeVar) -> Vec<(TimeVar, Scalar)>,
    {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut acc = Self::monomial(TMono { hbar: m.hbar, times: Vec::new() }, c.clone());
            for t in &m.times {
                let img = map(*t);
                let mut factor = Self::zero();
                for (tv, cv) in img {
                    factor = factor.add(&Self::monomial(TMono::new(0, vec![tv]), cv));
                }
                acc = acc.mul(&factor, win);
            }
            out = out.add(&acc);
        }
        out
    }

    /// Set every time with the given label-set to zero except those listed.
    pub fn restrict_vars<F>(&self, keep: F) -> Self
    where
        F: Fn(TimeVar) -> bool,
    {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.times.iter().all(|t| keep(*t)) {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// First differing monomial against another polynomial, for reports.
    pub fn first_difference(&self, rhs: &Self) -> Option<(TMono, Scalar, Scalar)> {
        let mut keys: Vec<&TMono> = self.terms.keys().chain(rhs.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            let a = self.coeff(k);
            let b = rhs.coeff(k);
            if a != b {
                return Some((k.clone(), a, b));
            }
        }
        None
    }
}

impl fmt::Display for TimesPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({}) {}", c, m)?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn win() -> Window {
        Window::new(-3, 3, 6, 18)
    }

    #[test]
    fn exp_basics() {
        // exp(0) = 1
        assert_eq!(TimesPoly::zero().exp(&win()).unwrap(), TimesPoly::one());
        // exp(a t0) to degree 2
        let a = Scalar::from_frac(3, 7);
        let p = TimesPoly::monomial(TMono::new(0, vec![(0, 0)]), a.clone());
        let e = p.exp(&Window::new(-1, 1, 2, 6)).unwrap();
        assert_eq!(e.coeff(&TMono::one()), Scalar::one());
        assert_eq!(e.coeff(&TMono::new(0, vec![(0, 0)])), a);
        assert_eq!(
            e.coeff(&TMono::new(0, vec![(0, 0), (0, 0)])),
            &(&a * &a) * &Scalar::from_frac(1, 2)
        );
    }

    #[test]
    fn log_exp_roundtrip_hbar_grading() {
        // log(exp(h^{-1} t0^3/6)) = h^{-1} t0^3/6 within bounds
        let f = TimesPoly::monomial(
            TMono::new(-1, vec![(0, 0), (0, 0), (0, 0)]),
            Scalar::from_frac(1, 6),
        );
        let w = Window::new(-3, 2, 9, 12);
        let z = f.exp(&w).unwrap();
        let back = z.log(&w).unwrap();
        // within the window, terms of degree <= 3 must match exactly
        assert_eq!(back.coeff(&TMono::new(-1, vec![(0, 0), (0, 0), (0, 0)])), Scalar::from_frac(1, 6));
    }

    proptest! {
        #[test]
        fn log_exp_identity(coeffs in proptest::collection::vec((-6i64..6, 1i64..5), 1..4)) {
            let w = Window::new(-2, 3, 5, 10);
            let mut f = TimesPoly::zero();
            for (i, (p, q)) in coeffs.iter().enumerate() {
                let m = TMono::new(i as i64 % 2, vec![(i as u32 % 3, 0)]);
                f = f.add(&TimesPoly::monomial(m, Scalar::from_frac(*p, *q)));
            }
            let f = f.filter(&w);
            let z = f.exp(&w).unwrap();
            let back = z.log(&w).unwrap();
            // grading-safe comparison: every monomial the window keeps closed
            // under multiplication must round-trip; filter both to a smaller
            // interior window for the comparison
            let interior = Window::new(-1, 2, 2, 4);
            prop_assert_eq!(back.filter(&interior), f.filter(&interior));
        }
    }
}
