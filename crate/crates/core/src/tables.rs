//! Coefficient tables of the Airy and Bessel correlators: omega_{g,n} written
//! on the pole basis prod dz_i/z_i^{mu_i+1}, entries indexed by genus and the
//! sorted odd multi-index mu.

use std::collections::BTreeMap;

use crate::curve::Curve;
use crate::double_factorial_odd;
use crate::error::Result;
use crate::fixtures;
use crate::recursion::Engine;
use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    Airy,
    Bessel,
}

#[derive(Clone, Debug)]
pub struct CoeffTable {
    pub family: Family,
    /// (g, sorted mu) -> value
    pub entries: BTreeMap<(u32, Vec<u32>), Scalar>,
    /// per-genus n range actually built
    pub built_n: BTreeMap<u32, u32>,
}

impl CoeffTable {
    /// Build by running the recursion on the local model; `ranges` lists the
    /// (genus, max n) pairs to compute.
    pub fn build(family: Family, ranges: &[(u32, u32)]) -> Result<Self> {
        let g_max = ranges.iter().map(|r| r.0).max().unwrap_or(0);
        let n_max = ranges.iter().map(|r| r.1).max().unwrap_or(1);
        let k_top = (3 * g_max as i64 - 3 + n_max as i64 + 2).max(4) as usize;
        let order = (4 * (3 * g_max as i64 - 3 + n_max as i64) + 12).max(16);
        let curve: Curve = match family {
            Family::Airy => fixtures::airy(order, k_top),
            Family::Bessel => fixtures::bessel(order, k_top),
        };
        let mut eng = Engine::new(&curve)?;
        let mut entries = BTreeMap::new();
        let mut built_n = BTreeMap::new();
        for &(g, nmax) in ranges {
            for n in 1..=nmax {
                if 2 * g as i64 - 2 + n as i64 <= 0 {
                    continue;
                }
                let corr = eng.correlator(g, n)?;
                for (idx, c) in &corr.coeffs {
                    let mu: Vec<u32> = idx.iter().map(|(k, _)| 2 * k + 1).collect();
                    let mut df = Scalar::one();
                    for (k, _) in idx {
                        df = &df * &Scalar::from_big(double_factorial_odd(*k as i64 + 1));
                    }
                    entries.insert((g, mu), c * &df);
                }
            }
            let e = built_n.entry(g).or_insert(0u32);
            *e = (*e).max(nmax);
        }
        Ok(CoeffTable { family, entries, built_n })
    }

    /// Table value a_{g,n}(mu) or b_{g,n}(mu); zero off the parity and
    /// homogeneity support. The multi-index need not be sorted.
    pub fn value(&self, g: u32, mu: &[u32]) -> Scalar {
        let n = mu.len() as i64;
        if mu.iter().any(|m| m % 2 == 0) {
            return Scalar::zero();
        }
        let weight: i64 = mu.iter().map(|&m| m as i64).sum();
        let expect = match self.family {
            Family::Airy => 6 * g as i64 - 6 + 3 * n,
            Family::Bessel => 2 * g as i64 - 2 + n,
        };
        if weight != expect {
            return Scalar::zero();
        }
        let mut key: Vec<u32> = mu.to_vec();
        key.sort_unstable();
        debug_assert!(
            self.built_n.get(&g).is_some_and(|&m| m as i64 >= n),
            "table {:?} queried at ({g}, n={n}) beyond built range",
            self.family
        );
        self.entries.get(&(g, key)).cloned().unwrap_or_else(Scalar::zero)
    }

    /// V-normalized coefficient: value(mu = 2k+1) / prod (2k_i+1)!!.
    pub fn vcoeff(&self, g: u32, ks: &[u32]) -> Scalar {
        let mu: Vec<u32> = ks.iter().map(|k| 2 * k + 1).collect();
        let v = self.value(g, &mu);
        if v.is_zero() {
            return v;
        }
        let mut df = Scalar::one();
        for k in ks {
            df = &df * &Scalar::from_big(double_factorial_odd(*k as i64 + 1));
        }
        &v * &df.inverse().expect("nonzero double factorial")
    }

    /// All support multi-indices at (g, n), sorted.
    pub fn support(&self, g: u32, n: u32) -> Vec<Vec<u32>> {
        self.entries
            .iter()
            .filter(|((gg, mu), _)| *gg == g && mu.len() == n as usize)
            .map(|((_, mu), _)| mu.clone())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_table_values() {
        let t = CoeffTable::build(Family::Bessel, &[(1, 5), (2, 5), (3, 5)]).unwrap();
        // b_{1,n}(1,...,1) = (n-1)!/8
        let mut fact = 1i64;
        for n in 1..=5u32 {
            if n > 1 {
                fact *= (n - 1) as i64;
            }
            let mu = vec![1u32; n as usize];
            assert_eq!(t.value(1, &mu), Scalar::from_frac(fact, 8), "b_1,{n}");
        }
        // b_{2,n}(3,1,...,1) = 9 (n+1)!/256
        let mut f = 2i64; // (1+1)!
        for n in 1..=4u32 {
            let mut mu = vec![1u32; n as usize - 1];
            mu.push(3);
            assert_eq!(
                t.value(2, &mu),
                &Scalar::from_frac(9, 256) * &Scalar::from_int(f),
                "b_2,{n}(3,1..)"
            );
            f *= (n + 2) as i64;
        }
        // b_{3,n}(5,1,...,1) = 75 (n+3)!/8192
        let mut f = 24i64; // 4!
        for n in 1..=4u32 {
            let mut mu = vec![1u32; n as usize - 1];
            mu.push(5);
            assert_eq!(
                t.value(3, &mu),
                &Scalar::from_frac(75, 8192) * &Scalar::from_int(f),
                "b_3,{n}(5,1..)"
            );
            f *= (n + 4) as i64;
        }
        // b_{3,n}(3,3,1,...,1) = 189 (n+3)!/20480
        let mut f = 120i64; // 5! for n = 2
        for n in 2..=4u32 {
            let mut mu = vec![1u32; n as usize - 2];
            mu.extend_from_slice(&[3, 3]);
            assert_eq!(
                t.value(3, &mu),
                &Scalar::from_frac(189, 20480) * &Scalar::from_int(f),
                "b_3,{n}(3,3,1..)"
            );
            f *= (n + 4) as i64;
        }
        // off-support
        assert!(t.value(1, &[3]).is_zero());
        assert!(t.value(1, &[2]).is_zero());
    }

    #[test]
    fn airy_table_values() {
        let t = CoeffTable::build(Family::Airy, &[(0, 5), (1, 3), (2, 1)]).unwrap();
        assert_eq!(t.value(0, &[1, 1, 1]), Scalar::one());
        // a_{1,1}(3) = 3!! <tau_1> = 1/8
        assert_eq!(t.value(1, &[3]), Scalar::from_frac(1, 8));
        // V-normalized: <tau_1> = 1/24
        assert_eq!(t.vcoeff(1, &[1]), Scalar::from_frac(1, 24));
        // a_{0,4}(1,1,1,3) = 3!! <tau_0^3 tau_1> = 3
        assert_eq!(t.value(0, &[1, 1, 1, 3]), Scalar::from_int(3));
        // a_{2,1}(9) = 9*7*5*3 <tau_4>_2 ... = 105/128
        assert_eq!(t.value(2, &[9]), Scalar::from_frac(105, 128));
    }
}
