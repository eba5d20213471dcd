//! Spectral curves: branch-point discovery, local coordinates, local
//! expansions of y and the Bergman kernel, auxiliary V-differentials, and
//! branch-point evaluation.
//!
//! Only genus-zero curves with the Cauchy kernel B = dz dz'/(z-z')^2 are
//! supported, which covers every built-in fixture and keeps all data exact.

use serde::{Deserialize, Serialize};

use crate::biseries::BiSeries;
use crate::double_factorial_odd;
use crate::error::{Error, Result};
use crate::ratfun::{Poly, RatFun};
use crate::ring::Coeff;
use crate::scalar::Scalar;
use crate::series::{ScalarSeries, Series};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchKind {
    Regular,
    Irregular,
}

/// Serialized curve description.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveSpec {
    pub name: String,
    pub x: RatFunSpec,
    pub y: YSpec,
    /// optional per-branch sign flips for the local coordinate, in branch order
    #[serde(default)]
    pub signs: Vec<i8>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatFunSpec {
    pub num: Vec<Scalar>,
    pub den: Vec<Scalar>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum YSpec {
    Rational(RatFunSpec),
    /// per-branch local series of y in the local coordinate s
    Local(Vec<LocalYSpec>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalYSpec {
    pub branch: usize,
    pub low: i64,
    pub coeffs: Vec<Scalar>,
}

impl RatFunSpec {
    pub fn to_ratfun(&self) -> Result<RatFun> {
        RatFun::new(Poly::from_coeffs(self.num.clone()), Poly::from_coeffs(self.den.clone()))
    }

    pub fn from_ratfun(f: &RatFun) -> Self {
        RatFunSpec { num: f.num.0.clone(), den: f.den.0.clone() }
    }
}

/// Everything attached to one zero of dx.
#[derive(Clone, Debug)]
pub struct BranchData {
    /// 1-based label; irregular branch points come first
    pub label: usize,
    pub location: Scalar,
    pub x_value: Scalar,
    pub kind: BranchKind,
    /// leading coefficient of s in terms of z - z_alpha (the epsilon choice)
    pub eps: Scalar,
    /// local coordinate z(s) with x(z(s)) = x(P_alpha) + s^2/2
    pub z_of_s: ScalarSeries,
    /// y(z(s))
    pub y_local: ScalarSeries,
    /// eta = y_{1}^2 (regular) or y_{-1}^2 (irregular)
    pub eta: Scalar,
    /// y_1 or y_{-1}, the square root of eta with the epsilon-induced sign
    pub y_min: Scalar,
}

/// A fully built global spectral curve.
#[derive(Debug)]
pub struct Curve {
    pub name: String,
    pub x: RatFun,
    pub y_rational: Option<RatFun>,
    pub branches: Vec<BranchData>,
    pub order: i64,
    pub kmax: usize,
    v_rat: Vec<Vec<RatFun>>,
    v_loc: Vec<Vec<Vec<ScalarSeries>>>,
    b_tables: Vec<Vec<BiSeries>>,
    b_diag: Vec<ScalarSeries>,
    y_odd: Vec<ScalarSeries>,
}

/// Branch locations and kinds, prior to the expensive build.
pub fn find_branch_points(spec: &CurveSpec) -> Result<Vec<(Scalar, BranchKind)>> {
    let x = spec.x.to_ratfun()?;
    if x.num.degree().unwrap_or(0) == 0 && x.den.degree().unwrap_or(0) == 0 {
        return Err(Error::Curve("x must be nonconstant".into()));
    }
    // zeros of dx: numerator of x'
    let dx = x.derivative();
    let num = dx.num.clone();
    if num.is_zero() {
        return Err(Error::Curve("dx vanishes identically".into()));
    }
    let mut roots = num.roots_in_field()?;
    // discard zeros that are poles of x (not points of the affine chart where
    // x is finite) -- at a pole of x, dx has a pole, not a zero
    roots.retain(|r| !x.den.eval(r).is_zero());
    if roots.is_empty() {
        return Err(Error::Curve("no branch points in the finite chart".into()));
    }
    // simplicity: no repeated roots
    let mut sorted = roots.clone();
    sorted.sort_by_key(|r| format!("{:?}", r.0));
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::Curve(format!("non-simple zero of dx at z = {}", w[0])));
        }
    }
    let mut out = Vec::new();
    for r in roots {
        let kind = match &spec.y {
            YSpec::Rational(ys) => {
                let y = ys.to_ratfun()?;
                match y.valuation_at(&r) {
                    v if v >= 0 => BranchKind::Regular,
                    -1 => BranchKind::Irregular,
                    v => {
                        return Err(Error::Curve(format!(
                            "y has a pole of order {} >= 2 at branch point z = {}",
                            -v, r
                        )))
                    }
                }
            }
            YSpec::Local(locals) => {
                // classified after ordering; do a provisional pass by index below
                // here mark regular; fixed up in build()
                let _ = locals;
                BranchKind::Regular
            }
        };
        out.push((r, kind));
    }
    // canonical order: irregular first, then descending location coordinates
    out.sort_by(|a, b| {
        let ka = matches!(a.1, BranchKind::Irregular);
        let kb = matches!(b.1, BranchKind::Irregular);
        kb.cmp(&ka).then_with(|| cmp_scalar_desc(&a.0, &b.0))
    });
    Ok(out)
}

fn cmp_scalar_desc(a: &Scalar, b: &Scalar) -> std::cmp::Ordering {
    for (x, y) in b.0.iter().zip(a.0.iter()) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

impl Curve {
    /// Build a curve with local data to the given series order and with
    /// V-differentials up to index `kmax`.
    pub fn build(spec: &CurveSpec, order: i64, kmax: usize) -> Result<Curve> {
        let x = spec.x.to_ratfun()?;
        let y_rational = match &spec.y {
            YSpec::Rational(ys) => Some(ys.to_ratfun()?),
            YSpec::Local(_) => None,
        };
        let mut pts = find_branch_points(spec)?;
        // local-y curves: classification comes from the supplied series
        if let YSpec::Local(locals) = &spec.y {
            if locals.len() != pts.len() {
                return Err(Error::Curve(format!(
                    "curve has {} branch points but {} local y series were supplied",
                    pts.len(),
                    locals.len()
                )));
            }
            for (i, l) in locals.iter().enumerate() {
                pts[i].1 = if l.low < 0 { BranchKind::Irregular } else { BranchKind::Regular };
                if l.low < -1 {
                    return Err(Error::Curve("local y has a pole of order >= 2".into()));
                }
            }
            pts.sort_by(|a, b| {
                let ka = matches!(a.1, BranchKind::Irregular);
                let kb = matches!(b.1, BranchKind::Irregular);
                kb.cmp(&ka).then_with(|| cmp_scalar_desc(&a.0, &b.0))
            });
        }

        let mut branches = Vec::new();
        for (i, (loc, kind)) in pts.iter().enumerate() {
            let sign = spec.signs.get(i).copied().unwrap_or(1);
            let x_value = x.eval(loc)?;
            // F(w) = x(z_alpha + w) - x_alpha, a double zero in w
            let shift = ScalarSeries::from_coeffs(0, vec![loc.clone(), Scalar::one()], order + 2);
            let f = x.compose_series(&shift)?
                .sub(&ScalarSeries::constant(x_value.clone(), order + 2));
            if f.valuation() != Some(2) {
                return Err(Error::Curve(format!(
                    "x - x(P) does not vanish to exactly second order at z = {loc}"
                )));
            }
            // s(w) = sqrt(2 F(w)), branch by canonical sign then user flip
            let mut s_of_w = f.scale(&Scalar::from_int(2)).sqrt()?;
            if sign < 0 {
                s_of_w = s_of_w.neg();
            }
            let eps = s_of_w.coeff(1)?;
            let w_of_s = s_of_w.reverse()?;
            let z_of_s = w_of_s.add(&ScalarSeries::constant(loc.clone(), w_of_s.order));
            branches.push(BranchData {
                label: i + 1,
                location: loc.clone(),
                x_value,
                kind: *kind,
                eps,
                z_of_s,
                y_local: ScalarSeries::zero_to(order), // filled below
                eta: Scalar::zero(),
                y_min: Scalar::zero(),
            });
        }

        // y locals
        for (i, b) in branches.iter_mut().enumerate() {
            let y_local = match &spec.y {
                YSpec::Rational(ys) => {
                    let y = ys.to_ratfun()?;
                    y.compose_series(&b.z_of_s)?
                }
                YSpec::Local(locals) => {
                    // locals are indexed by final branch order here
                    let l = &locals[i];
                    let mut ser = ScalarSeries::from_coeffs(l.low, l.coeffs.clone(), l.low + l.coeffs.len() as i64);
                    ser.order = ser.order.max(order);
                    ser
                }
            };
            // the constant term is never consumed; drop it
            let c0 = y_local.coeff(0).unwrap_or_else(|_| Scalar::zero());
            let y_local = y_local.sub(&ScalarSeries::constant(c0, y_local.order));
            match b.kind {
                BranchKind::Regular => {
                    let y1 = y_local.coeff(1)?;
                    if y1.is_zero() {
                        return Err(Error::Curve(format!(
                            "dy vanishes at the regular branch point z = {} (degenerate curve)",
                            b.location
                        )));
                    }
                    b.eta = &y1 * &y1;
                    b.y_min = y1;
                }
                BranchKind::Irregular => {
                    let ym1 = y_local.coeff(-1)?;
                    if ym1.is_zero() {
                        return Err(Error::Curve("vanishing y_{-1} at an irregular branch point".into()));
                    }
                    b.eta = &ym1 * &ym1;
                    b.y_min = ym1;
                }
            }
            if b.eta.is_zero() {
                return Err(Error::Curve("eta = 0 (degenerate curve)".into()));
            }
            b.y_local = y_local;
        }

        let d = branches.len();

        // Global V-differentials: the unique rational differential with
        // principal part (2k+1)!!/s^{2k+2} at its own branch point and
        // analytic everywhere else including infinity. Built by triangular
        // matching against the pole basis e_j = dp/(p - z_b)^j, whose local
        // expansions are computed by powering 1/(z(s) - z_b) so the series
        // order degrades only linearly in j.
        let jmax = 2 * kmax + 2;
        // basis_loc[beta][alpha][j-1] = expansion of e_j (pole at beta) at alpha
        let mut basis_loc: Vec<Vec<Vec<ScalarSeries>>> = Vec::with_capacity(d);
        for beta in 0..d {
            let mut per_alpha = Vec::with_capacity(d);
            for alpha in 0..d {
                let z = &branches[alpha].z_of_s;
                let zp = z.derivative();
                let w = z.sub(&ScalarSeries::constant(branches[beta].location.clone(), z.order));
                let w_inv = w.inverse()?;
                let mut pw = ScalarSeries::one(z.order);
                let mut per_j = Vec::with_capacity(jmax);
                for _ in 1..=jmax {
                    pw = pw.mul(&w_inv);
                    per_j.push(pw.mul(&zp));
                }
                per_alpha.push(per_j);
            }
            basis_loc.push(per_alpha);
        }

        let mut v_rat: Vec<Vec<RatFun>> = Vec::with_capacity(d);
        let mut v_loc: Vec<Vec<Vec<ScalarSeries>>> = Vec::with_capacity(d);
        for (beta, b) in branches.iter().enumerate() {
            let mut rat_row = Vec::with_capacity(kmax + 1);
            let mut loc_row = Vec::with_capacity(kmax + 1);
            let lin = Poly::linear_root(&b.location);
            let mut dens = Vec::with_capacity(jmax);
            let mut den = Poly::constant(Scalar::one());
            for _ in 0..jmax {
                den = den.mul(&lin);
                dens.push(den.clone());
            }
            for k in 0..=kmax {
                let top = 2 * k as i64 + 2;
                let mut coeffs_j: Vec<(usize, Scalar)> = Vec::new();
                let mut acc_loc = ScalarSeries::zero_to(order);
                for j in (2..=top).rev() {
                    let want = if j == top {
                        Scalar::from_big(double_factorial_odd(k as i64 + 1))
                    } else {
                        Scalar::zero()
                    };
                    let have = acc_loc.coeff(-j).unwrap_or_else(|_| Scalar::zero());
                    let need = &want - &have;
                    if need.is_zero() {
                        continue;
                    }
                    let e = &basis_loc[beta][beta][(j - 1) as usize];
                    let lead = e.coeff(-j)?;
                    let c = &need * &lead.inverse()?;
                    acc_loc = acc_loc.add(&e.scale(&c));
                    coeffs_j.push(((j - 1) as usize, c));
                }
                let res = acc_loc.coeff(-1)?;
                if !res.is_zero() {
                    return Err(Error::Curve(format!(
                        "V-differential construction left residue {res} at branch {}",
                        b.label
                    )));
                }
                // assemble the rational form and all local expansions
                let mut acc_rat = RatFun::constant(Scalar::zero());
                for (ji, c) in &coeffs_j {
                    acc_rat = acc_rat.add(
                        &RatFun::new(Poly::constant(c.clone()), dens[*ji].clone())?,
                    );
                }
                let mut per_alpha = Vec::with_capacity(d);
                for alpha in 0..d {
                    if alpha == beta {
                        per_alpha.push(acc_loc.clone());
                    } else {
                        let mut s = ScalarSeries::zero_to(order);
                        for (ji, c) in &coeffs_j {
                            s = s.add(&basis_loc[beta][alpha][*ji].scale(c));
                        }
                        per_alpha.push(s);
                    }
                }
                rat_row.push(acc_rat);
                loc_row.push(per_alpha);
            }
            v_rat.push(rat_row);
            v_loc.push(loc_row);
        }
        // reindex v_loc as [beta][k][alpha]
        let v_loc: Vec<Vec<Vec<ScalarSeries>>> = v_loc;

        // regularized Bergman tables
        let ord_b = (order.max(4)) as usize;
        let mut b_tables: Vec<Vec<BiSeries>> = Vec::with_capacity(d);
        for alpha in 0..d {
            let mut row = Vec::with_capacity(d);
            for beta in 0..d {
                row.push(bergman_table(&branches[alpha], &branches[beta], alpha == beta, ord_b)?);
            }
            b_tables.push(row);
        }

        // diagonal kernel series phi(s) = z'(s) z'(-s) / (z(s) - z(-s))^2
        let mut b_diag = Vec::with_capacity(d);
        let mut y_odd = Vec::with_capacity(d);
        for b in &branches {
            let zp = b.z_of_s.derivative();
            let zpm = zp.flip_sign();
            let diff = b.z_of_s.sub(&b.z_of_s.flip_sign());
            let phi = zp.mul(&zpm).div(&diff.mul(&diff))?;
            b_diag.push(phi);
            y_odd.push(b.y_local.odd_part());
        }

        Ok(Curve {
            name: spec.name.clone(),
            x,
            y_rational,
            branches,
            order,
            kmax,
            v_rat,
            v_loc,
            b_tables,
            b_diag,
            y_odd,
        })
    }

    pub fn num_branches(&self) -> usize {
        self.branches.len()
    }

    /// Global rational form of V^alpha_k (alpha 0-based).
    pub fn v_rational(&self, alpha: usize, k: usize) -> &RatFun {
        &self.v_rat[alpha][k]
    }

    /// Local expansion of V^beta_k at branch alpha (ds-normalized).
    pub fn v_local(&self, beta: usize, k: usize, alpha: usize) -> &ScalarSeries {
        &self.v_loc[beta][k][alpha]
    }

    /// Regularized double expansion of B at the pair (alpha, beta).
    pub fn bergman_coeff(&self, alpha: usize, beta: usize, m: usize, mp: usize) -> Result<Scalar> {
        self.b_tables[alpha][beta].coeff(m, mp)
    }

    /// eta via the residue route, which must agree with the stored local form.
    pub fn eta_residue(&self, alpha: usize) -> Result<Scalar> {
        let b = &self.branches[alpha];
        let y = self
            .y_rational
            .as_ref()
            .ok_or_else(|| Error::Curve("residue form of eta needs rational y".into()))?;
        let xp = self.x.derivative();
        let w = match b.kind {
            BranchKind::Regular => {
                // Res (dy)^2/dx = Res (y'(z))^2 / x'(z) dz
                let yp = y.derivative();
                yp.mul(&yp).div(&xp)?
            }
            BranchKind::Irregular => {
                // Res y^2 dx
                y.mul(y).mul(&xp)
            }
        };
        let ser = w.compose_series(&ScalarSeries::from_coeffs(
            0,
            vec![b.location.clone(), Scalar::one()],
            self.order,
        ))?;
        ser.residue()
    }

    /// Evaluation of a rational differential at a branch point:
    /// Res_{p -> P_alpha} omega / sqrt(2(x - x(P_alpha))).
    pub fn evaluate_at_branch(&self, omega: &RatFun, alpha: usize) -> Result<Scalar> {
        let b = &self.branches[alpha];
        let z = &b.z_of_s;
        let zp = z.derivative();
        let pulled = omega.compose_series(z)?.mul(&zp);
        pulled.shift(-1).residue()
    }

    /// Project a rational differential onto the V-basis. Errors if the
    /// principal parts are not skew or if a nonzero residual remains.
    pub fn project_rational(&self, omega: &RatFun) -> Result<Vec<(usize, usize, Scalar)>> {
        let mut out = Vec::new();
        let mut residual = omega.clone();
        for alpha in 0..self.num_branches() {
            let b = &self.branches[alpha];
            let z = &b.z_of_s;
            let zp = z.derivative();
            let local = omega.compose_series(z)?.mul(&zp);
            let low = local.valuation().unwrap_or(0);
            let mut e = low;
            while e < 0 {
                let c = local.coeff(e)?;
                if !c.is_zero() {
                    if e.rem_euclid(2) != 0 {
                        return Err(Error::ProjectionResidual(format!(
                            "sigma-invariant principal part s^{e} at branch {}",
                            alpha + 1
                        )));
                    }
                    let k = ((-e) / 2 - 1) as usize;
                    if k > self.kmax {
                        return Err(Error::Curve(format!(
                            "pole order needs V-index {k} > built kmax {}",
                            self.kmax
                        )));
                    }
                    let df = Scalar::from_big(double_factorial_odd(k as i64 + 1));
                    let coeff = &c * &df.inverse()?;
                    residual = residual.sub(&self.v_rat[alpha][k].scale(&coeff));
                    out.push((alpha, k, coeff));
                }
                e += 1;
            }
        }
        if !residual.is_zero() {
            return Err(Error::ProjectionResidual(
                "projection leaves a nonzero rational remainder".into(),
            ));
        }
        Ok(out)
    }
}

/// Double Taylor table of B at a pair of branch points, with the Cauchy
/// singularity removed on the diagonal.
fn bergman_table(ba: &BranchData, bb: &BranchData, diagonal: bool, ord: usize) -> Result<BiSeries> {
    let za = ba.z_of_s.clone().truncate(ord as i64);
    let zb = bb.z_of_s.clone().truncate(ord as i64);
    let zap = za.derivative();
    let zbp = zb.derivative();
    if diagonal {
        // z(s) - z(t) = (s - t) Q(s,t); table = (z' z' - Q^2)/((s-t)^2 Q^2)
        let num = BiSeries::from_s(&za.sub(&ScalarSeries::constant(ba.location.clone(), za.order)))?
            .sub(&BiSeries::from_t(&zb.sub(&ScalarSeries::constant(bb.location.clone(), zb.order)))?);
        let q = num.div_s_minus_t()?;
        let zz = BiSeries::from_outer(&zap, &zbp)?;
        let n = zz.sub(&q.mul(&q));
        let m = n.div_s_minus_t()?.div_s_minus_t()?;
        Ok(m.mul(&q.mul(&q).inverse()?))
    } else {
        let diff = BiSeries::from_s(&za)?.sub(&BiSeries::from_t(&zb)?);
        let zz = BiSeries::from_outer(&zap, &zbp)?;
        Ok(zz.mul(&diff.mul(&diff).inverse()?))
    }
}

/// Curves given purely by local data at each branch point: x = x_a + s^2/2
/// with the trivial Bergman kernel. Used for S_0 companions and for formal
/// deformations of the Airy and Bessel curves.
#[derive(Clone, Debug)]
pub struct LocalCurve<C: Coeff> {
    pub branches: Vec<LocalBranch<C>>,
    pub order: i64,
}

#[derive(Clone, Debug)]
pub struct LocalBranch<C: Coeff> {
    pub kind: BranchKind,
    pub y_local: Series<C>,
}

impl<C: Coeff> LocalCurve<C> {
    pub fn new(branches: Vec<LocalBranch<C>>, order: i64) -> Self {
        LocalCurve { branches, order }
    }
}

/// What the recursion engine needs from a curve.
pub trait RecursionCurve<C: Coeff>: Sync {
    fn num_branches(&self) -> usize;
    fn is_irregular(&self, alpha: usize) -> bool;
    fn series_order(&self) -> i64;
    fn max_v_index(&self) -> usize;
    /// odd part of the local y
    fn y_odd_local(&self, alpha: usize) -> Series<C>;
    /// phi(s) = z'(s) z'(-s)/(z(s)-z(-s))^2
    fn b_diag_phi(&self, alpha: usize) -> Series<C>;
    /// expansion of V^beta_k at branch alpha
    fn v_local_series(&self, beta: usize, k: usize, alpha: usize) -> Series<C>;
}

impl RecursionCurve<Scalar> for Curve {
    fn num_branches(&self) -> usize {
        self.branches.len()
    }
    fn is_irregular(&self, alpha: usize) -> bool {
        matches!(self.branches[alpha].kind, BranchKind::Irregular)
    }
    fn series_order(&self) -> i64 {
        self.order
    }
    fn max_v_index(&self) -> usize {
        self.kmax
    }
    fn y_odd_local(&self, alpha: usize) -> ScalarSeries {
        self.y_odd[alpha].clone()
    }
    fn b_diag_phi(&self, alpha: usize) -> ScalarSeries {
        self.b_diag[alpha].clone()
    }
    fn v_local_series(&self, beta: usize, k: usize, alpha: usize) -> ScalarSeries {
        self.v_loc[beta][k][alpha].clone()
    }
}

impl<C: Coeff> RecursionCurve<C> for LocalCurve<C> {
    fn num_branches(&self) -> usize {
        self.branches.len()
    }
    fn is_irregular(&self, alpha: usize) -> bool {
        matches!(self.branches[alpha].kind, BranchKind::Irregular)
    }
    fn series_order(&self) -> i64 {
        self.order
    }
    fn max_v_index(&self) -> usize {
        ((self.order / 2) as usize).saturating_sub(2)
    }
    fn y_odd_local(&self, alpha: usize) -> Series<C> {
        self.branches[alpha].y_local.odd_part()
    }
    fn b_diag_phi(&self, _alpha: usize) -> Series<C> {
        // z(s) = s exactly: phi = 1/(2s)^2
        Series::monomial(C::from_frac(1, 4), -2, self.order)
    }
    fn v_local_series(&self, beta: usize, k: usize, alpha: usize) -> Series<C> {
        if beta == alpha {
            let df = double_factorial_odd(k as i64 + 1);
            Series::monomial(
                C::from_scalar(Scalar::from_big(df)),
                -(2 * k as i64 + 2),
                self.order,
            )
        } else {
            Series::zero_to(self.order)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn branch_discovery() {
        let spec = fixtures::legendre_spec();
        let pts = find_branch_points(&spec).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].0, Scalar::from_int(1));
        assert_eq!(pts[1].0, Scalar::from_int(-1));
        assert!(matches!(pts[0].1, BranchKind::Irregular));

        let airy = fixtures::airy_spec();
        let pts = find_branch_points(&airy).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].0.is_zero());

        // x = z^3 has a non-simple zero of dx
        let bad = CurveSpec {
            name: "bad".into(),
            x: RatFunSpec {
                num: vec![Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::one()],
                den: vec![Scalar::one()],
            },
            y: YSpec::Rational(RatFunSpec { num: vec![Scalar::zero(), Scalar::one()], den: vec![Scalar::one()] }),
            signs: vec![],
        };
        assert!(find_branch_points(&bad).is_err());
    }

    #[test]
    fn legendre_local_coordinate() {
        let curve = fixtures::legendre(16, 6);
        let b = &curve.branches[0];
        assert_eq!(b.location, Scalar::from_int(1));
        assert_eq!(b.eps, Scalar::sqrt2());
        let sqrt2_inv = Scalar::sqrt2().inverse().unwrap();
        // z(s) = 1 + s/sqrt(2) + s^2/4 + s^3/(16 sqrt 2) + 0 s^4 + ...
        assert_eq!(b.z_of_s.coeff(0).unwrap(), Scalar::from_int(1));
        assert_eq!(b.z_of_s.coeff(1).unwrap(), sqrt2_inv);
        assert_eq!(b.z_of_s.coeff(2).unwrap(), Scalar::from_frac(1, 4));
        assert_eq!(
            b.z_of_s.coeff(3).unwrap(),
            &Scalar::from_frac(1, 16) * &sqrt2_inv
        );
        assert_eq!(b.z_of_s.coeff(4).unwrap(), Scalar::zero());
        // defining identity x(z(s)) - x(P) - s^2/2 = 0 to order
        let check = curve
            .x
            .compose_series(&b.z_of_s)
            .unwrap()
            .sub(&ScalarSeries::constant(b.x_value.clone(), b.z_of_s.order))
            .sub(&ScalarSeries::monomial(Scalar::from_frac(1, 2), 2, b.z_of_s.order));
        assert!(check.is_zero_to_order(), "residual {:?}", check);
        // second branch has eps = i sqrt 2
        let b2 = &curve.branches[1];
        assert_eq!(b2.eps, &Scalar::i() * &Scalar::sqrt2());
    }

    #[test]
    fn airy_local_coordinate_is_identity() {
        let curve = fixtures::airy(12, 5);
        let b = &curve.branches[0];
        assert_eq!(b.eps, Scalar::one());
        assert_eq!(b.z_of_s.coeff(1).unwrap(), Scalar::one());
        assert_eq!(b.z_of_s.coeff(2).unwrap(), Scalar::zero());
    }

    #[test]
    fn y_locals_and_eta() {
        // Bessel: y = 1/z -> y(z(s)) = 1/s, eta = 1
        let bessel = fixtures::bessel(12, 5);
        let b = &bessel.branches[0];
        assert!(matches!(b.kind, BranchKind::Irregular));
        assert_eq!(b.y_local.coeff(-1).unwrap(), Scalar::one());
        assert_eq!(b.eta, Scalar::one());

        // Legendre at z=1: low = -1, y_{-1} = 1/sqrt 2, eta = 1/2
        let leg = fixtures::legendre(16, 6);
        let b = &leg.branches[0];
        assert_eq!(b.y_local.valuation(), Some(-1));
        let expect = Scalar::sqrt2().inverse().unwrap();
        assert_eq!(b.y_min, expect);
        assert_eq!(b.eta, Scalar::from_frac(1, 2));
        // residue route agrees
        assert_eq!(leg.eta_residue(0).unwrap(), Scalar::from_frac(1, 2));
        // second branch: eta = -1/2
        assert_eq!(leg.branches[1].eta, Scalar::from_frac(-1, 2));
        assert_eq!(leg.eta_residue(1).unwrap(), Scalar::from_frac(-1, 2));

        // Gaussian at z=1: regular with y_1 = 1/sqrt 2
        let gauss = fixtures::gauss(16, 6);
        let b = &gauss.branches[0];
        assert!(matches!(b.kind, BranchKind::Regular));
        assert_eq!(b.y_local.coeff(1).unwrap(), expect);
        assert_eq!(b.y_local.coeff(2).unwrap(), Scalar::from_frac(1, 4));

        // y with a double pole at a branch point is rejected
        let bad = CurveSpec {
            name: "bad".into(),
            x: fixtures::airy_spec().x,
            y: YSpec::Rational(RatFunSpec {
                num: vec![Scalar::one()],
                den: vec![Scalar::zero(), Scalar::zero(), Scalar::one()],
            }),
            signs: vec![],
        };
        assert!(Curve::build(&bad, 8, 3).is_err());
    }

    #[test]
    fn bergman_tables() {
        let leg = fixtures::legendre(16, 6);
        // B^{11}_{00} = -1/16
        assert_eq!(leg.bergman_coeff(0, 0, 0, 0).unwrap(), Scalar::from_frac(-1, 16));
        // B^{12}_{00} = -i/8
        assert_eq!(
            leg.bergman_coeff(0, 1, 0, 0).unwrap(),
            &Scalar::i() * &Scalar::from_frac(-1, 8)
        );
        // B^{22}_{00} = 1/16
        assert_eq!(leg.bergman_coeff(1, 1, 0, 0).unwrap(), Scalar::from_frac(1, 16));
        // symmetry B^{ab}_{m,m'} = B^{ba}_{m',m}
        for (a, b) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1)] {
            for m in 0..6 {
                for mp in 0..6 {
                    assert_eq!(
                        leg.bergman_coeff(a, b, m, mp).unwrap(),
                        leg.bergman_coeff(b, a, mp, m).unwrap(),
                        "symmetry fails at ({a},{b},{m},{mp})"
                    );
                }
            }
        }
        // Airy curve: trivial tables
        let airy = fixtures::airy(16, 5);
        for m in 0..6 {
            for mp in 0..6 {
                if m + mp < 10 {
                    assert!(airy.bergman_coeff(0, 0, m, mp).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn bergman_oracle_in_t_coordinates() {
        // independent double-Taylor oracle: with f(t) = z(sqrt2 t) the
        // regularized kernel has constant term -1/8, which must equal
        // 2 * B^{11}_{00}
        let leg = fixtures::legendre(16, 6);
        let z = &leg.branches[0].z_of_s;
        // f(t) = z(sqrt(2) t): substitute s = sqrt2 * t
        let mut coeffs = Vec::new();
        let mut pw = Scalar::one();
        for e in 0..z.order {
            let c = z.coeff(e).unwrap();
            coeffs.push(&c * &pw);
            pw = &pw * &Scalar::sqrt2();
        }
        let f = ScalarSeries::from_coeffs(0, coeffs, z.order);
        let fp = f.derivative();
        let fs = BiSeries::from_s(&f).unwrap();
        let ft = BiSeries::from_t(&f).unwrap();
        let q = fs.sub(&ft).div_s_minus_t().unwrap();
        let n = BiSeries::from_outer(&fp, &fp).unwrap().sub(&q.mul(&q));
        let table = n
            .div_s_minus_t()
            .unwrap()
            .div_s_minus_t()
            .unwrap()
            .mul(&q.mul(&q).inverse().unwrap());
        assert_eq!(table.coeff(0, 0).unwrap(), Scalar::from_frac(-1, 8));
        assert_eq!(
            &leg.bergman_coeff(0, 0, 0, 0).unwrap() * &Scalar::from_int(2),
            Scalar::from_frac(-1, 8)
        );
    }

    #[test]
    fn v_differentials() {
        // Airy: V_k = (2k+1)!! dz/z^{2k+2}
        let airy = fixtures::airy(14, 4);
        for k in 0..4usize {
            let v = airy.v_rational(0, k);
            let expect_num = Scalar::from_big(double_factorial_odd(k as i64 + 1));
            let val = v.eval(&Scalar::from_int(2)).unwrap();
            let expect = &expect_num * &Scalar::from_frac(1, 2i64.pow(2 * k as u32 + 2)).clone();
            assert_eq!(val, expect, "V_{k} at z=2");
        }
        // Legendre V^1_0 = dp/(sqrt2 (1-p)^2)
        let leg = fixtures::legendre(16, 6);
        let v0 = leg.v_rational(0, 0);
        let at3 = v0.eval(&Scalar::from_int(3)).unwrap();
        // 1/(sqrt2 * 4)
        assert_eq!(at3, &Scalar::sqrt2().inverse().unwrap() * &Scalar::from_frac(1, 4));
        // principal part of V^1_0 at branch 1 is ds/s^2 + O(1)
        let loc = leg.v_local(0, 0, 0);
        assert_eq!(loc.coeff(-2).unwrap(), Scalar::one());
        assert_eq!(loc.coeff(-1).unwrap(), Scalar::zero());
        // V^1_k analytic at the other branch point
        let other = leg.v_local(0, 2, 1);
        assert!(other.valuation().unwrap_or(0) >= 0);
        // principal parts: single term (2k+1)!!/s^{2k+2}
        for k in 0..4usize {
            let l = leg.v_local(0, k, 0);
            assert_eq!(
                l.coeff(-(2 * k as i64) - 2).unwrap(),
                Scalar::from_big(double_factorial_odd(k as i64 + 1))
            );
            let mut e = -(2 * k as i64) - 1;
            while e < 0 {
                assert!(l.coeff(e).unwrap().is_zero(), "V_{k} lower principal at {e}");
                e += 1;
            }
        }
    }

    #[test]
    fn evaluate_and_project() {
        let airy = fixtures::airy(14, 4);
        // evaluate(dz) at the branch: Res dz/s = 1
        let dz = RatFun::constant(Scalar::one());
        assert_eq!(airy.evaluate_at_branch(&dz, 0).unwrap(), Scalar::one());
        // projecting V^1_2 returns the unit coefficient and zero residual
        let leg = fixtures::legendre(16, 6);
        let v = leg.v_rational(0, 2).clone();
        let proj = leg.project_rational(&v).unwrap();
        assert_eq!(proj, vec![(0, 2, Scalar::one())]);
        // an even-pole-free but sigma-invariant differential errors:
        // dz/(z-1)^3 has an odd-order pole at the branch point
        let bad = RatFun::new(
            Poly::constant(Scalar::one()),
            Poly::linear_root(&Scalar::from_int(1))
                .mul(&Poly::linear_root(&Scalar::from_int(1)))
                .mul(&Poly::linear_root(&Scalar::from_int(1))),
        )
        .unwrap();
        assert!(leg.project_rational(&bad).is_err());
    }
}
