//! Free energies and partition functions: F = sum hbar^{g-1} omega_{g,n}/n!
//! with the V-differentials replaced by time variables, Z = exp F.

use crate::curve::RecursionCurve;
use crate::error::Result;
use crate::recursion::{Correlator, Engine};
use crate::scalar::Scalar;
use crate::tables::CoeffTable;
use crate::times::{TMono, TimesPoly, Window};

/// F-contribution of a single correlator: sum over its multi-indices tau of
/// hbar^{g-1} c_tau / prod(multiplicities!) * v^tau.
pub fn free_energy_term(corr: &Correlator<Scalar>) -> TimesPoly {
    let mut out = TimesPoly::zero();
    for (idx, c) in &corr.coeffs {
        let m = TMono::new(corr.g as i64 - 1, idx.iter().map(|&(k, a)| (k, a)).collect());
        let aut = Scalar::from_big(m.aut_factorial());
        let coeff = c * &aut.inverse().expect("nonzero factorial");
        out.add_term(m, &coeff);
    }
    out
}

/// Free energy of a curve over the stable range g <= g_max, n <= n_max.
pub fn free_energy<C, K>(engine: &mut Engine<'_, Scalar, K>, g_max: u32, n_max: u32) -> Result<TimesPoly>
where
    C: Sized,
    K: RecursionCurve<Scalar>,
{
    let mut f = TimesPoly::zero();
    for g in 0..=g_max {
        for n in 1..=n_max {
            if 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            let corr = engine.correlator(g, n)?;
            f = f.add(&free_energy_term(corr));
        }
    }
    Ok(f)
}

/// Z = exp(F) within the window.
pub fn partition_function<K>(
    engine: &mut Engine<'_, Scalar, K>,
    g_max: u32,
    n_max: u32,
    win: &Window,
) -> Result<TimesPoly>
where
    K: RecursionCurve<Scalar>,
{
    let f = free_energy::<Scalar, K>(engine, g_max, n_max)?;
    f.filter(win).exp(win)
}

/// Free energy of a tau-function family in single-branch t-times (label),
/// assembled from a coefficient table: per genus g and sorted k-multiset,
/// the term hbar^{g-1} vcoeff / prod(mult!).
pub fn tau_free_energy(table: &CoeffTable, label: u32, g_max: u32, n_max: u32) -> TimesPoly {
    let mut out = TimesPoly::zero();
    for (&(g, ref mu), _) in table.entries.iter() {
        if g > g_max || mu.len() > n_max as usize {
            continue;
        }
        let ks: Vec<u32> = mu.iter().map(|m| (m - 1) / 2).collect();
        let c = table.vcoeff(g, &ks);
        if c.is_zero() {
            continue;
        }
        let m = TMono::new(g as i64 - 1, ks.into_iter().map(|k| (k, label)).collect());
        let aut = Scalar::from_big(m.aut_factorial());
        let coeff = &c * &aut.inverse().expect("nonzero");
        out.add_term(m, &coeff);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::recursion::Engine;
    use crate::tables::{CoeffTable, Family};

    fn t(ks: &[u32]) -> Vec<(u32, u32)> {
        ks.iter().map(|&k| (k, 0)).collect()
    }

    #[test]
    fn airy_partition_heads() {
        // F^KW = h^{-1}(t0^3/3! + t0^3 t1/3! + t0^4 t2/4!) + t1/24 + ...
        let curve = fixtures::airy(30, 10);
        let mut eng = Engine::new(&curve).unwrap();
        let f = free_energy::<Scalar, _>(&mut eng, 1, 4).unwrap();
        assert_eq!(f.coeff(&TMono::new(-1, t(&[0, 0, 0]))), Scalar::from_frac(1, 6));
        assert_eq!(f.coeff(&TMono::new(-1, t(&[0, 0, 0, 1]))), Scalar::from_frac(1, 6));
        assert_eq!(f.coeff(&TMono::new(-1, t(&[0, 0, 0, 0, 2]))), Scalar::from_frac(1, 24));
        assert_eq!(f.coeff(&TMono::new(0, t(&[1]))), Scalar::from_frac(1, 24));
        // string/dilaton-free cross-check (t0^3 coefficient exactly 1/6)
        let win = Window::new(-2, 1, 4, 10);
        let z = f.filter(&win).exp(&win).unwrap();
        let back = z.log(&win).unwrap();
        assert_eq!(back.coeff(&TMono::new(-1, t(&[0, 0, 0]))), Scalar::from_frac(1, 6));
    }

    #[test]
    fn bessel_partition_heads() {
        // F^BGW = t0/8 + t0^2/16 + t0^3/24 + h(3 t1/128 + 9 t0 t1/128) + ...
        let curve = fixtures::bessel(26, 8);
        let mut eng = Engine::new(&curve).unwrap();
        let f = free_energy::<Scalar, _>(&mut eng, 2, 4).unwrap();
        assert_eq!(f.coeff(&TMono::new(0, t(&[0]))), Scalar::from_frac(1, 8));
        assert_eq!(f.coeff(&TMono::new(0, t(&[0, 0]))), Scalar::from_frac(1, 16));
        assert_eq!(f.coeff(&TMono::new(0, t(&[0, 0, 0]))), Scalar::from_frac(1, 24));
        assert_eq!(f.coeff(&TMono::new(1, t(&[1]))), Scalar::from_frac(3, 128));
        assert_eq!(f.coeff(&TMono::new(1, t(&[0, 1]))), Scalar::from_frac(9, 128));
    }

    #[test]
    fn tau_free_energy_matches_direct() {
        let table = CoeffTable::build(Family::Bessel, &[(1, 4), (2, 4)]).unwrap();
        let f = tau_free_energy(&table, 0, 2, 4);
        assert_eq!(f.coeff(&TMono::new(0, t(&[0, 0]))), Scalar::from_frac(1, 16));
        assert_eq!(f.coeff(&TMono::new(1, t(&[0, 1]))), Scalar::from_frac(9, 128));
    }

    #[test]
    fn empty_stable_range_gives_unit_z() {
        let curve = fixtures::bessel(12, 3);
        let mut eng = Engine::new(&curve).unwrap();
        let win = Window::new(-1, 0, 2, 4);
        // g_max = 0, n_max = 2: no stable (g,n) at all
        let z = partition_function(&mut eng, 0, 2, &win).unwrap();
        assert_eq!(z, TimesPoly::one());
    }
}
