//! The first KdV equation as an exact residual check on free energies in
//! single-branch times: with U = hbar d^2F/dt0^2,
//!     U_{t1} - U U_{t0} - (hbar/12) U_{t0 t0 t0}
//! must vanish for a tau function of the hierarchy.

use crate::error::Result;
use crate::scalar::Scalar;
use crate::times::{TMono, TimesPoly, Window};

pub struct KdvReport {
    pub residual: TimesPoly,
    /// U restricted to t_k = 0 for k >= 1
    pub initial_condition: TimesPoly,
}

pub fn kdv_residual(f: &TimesPoly, label: u32, win: &Window) -> Result<KdvReport> {
    let t0 = (0u32, label);
    let t1 = (1u32, label);
    let u = f.diff(t0).diff(t0).shift_hbar(1).filter(win);
    let u_t1 = u.diff(t1).filter(win);
    let u_t0 = u.diff(t0).filter(win);
    let u_t03 = u.diff(t0).diff(t0).diff(t0).shift_hbar(1).filter(win);
    let residual = u_t1
        .sub(&u.mul(&u_t0, win))
        .sub(&u_t03.scale(&Scalar::from_frac(1, 12)))
        .filter(win);
    let initial_condition = u.restrict_vars(|(k, _)| k == 0);
    Ok(KdvReport { residual, initial_condition })
}

/// Expected BGW initial condition hbar/(8 (1-t0)^2) as a truncated series.
pub fn bgw_initial_condition(label: u32, deg_max: usize) -> TimesPoly {
    // hbar/8 * sum_{j>=0} (j+1) t0^j
    let mut out = TimesPoly::zero();
    for j in 0..=deg_max {
        let m = TMono::new(1, vec![(0u32, label); j]);
        let c = Scalar::from_frac(j as i64 + 1, 8);
        out.add_term(m, &c);
    }
    out
}

/// Expected KW initial condition: U(t0, 0, ...) = t0.
pub fn kw_initial_condition(label: u32) -> TimesPoly {
    TimesPoly::monomial(TMono::new(0, vec![(0, label)]), Scalar::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_tau_function_fails() {
        // F = t1^2 is not a tau function: residual nonzero
        let f = TimesPoly::monomial(TMono::new(-1, vec![(0, 0); 3]), Scalar::from_frac(1, 6))
            .add(&TimesPoly::monomial(TMono::new(0, vec![(1, 0), (1, 0)]), Scalar::one()));
        let win = Window::new(-2, 2, 4, 8);
        let rep = kdv_residual(&f, 0, &win).unwrap();
        assert!(!rep.residual.is_zero());
    }
}
