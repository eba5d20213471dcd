//! Built-in spectral curves: the Airy and Bessel local models and the four
//! x = z + 1/z curves (Gromov-Witten of P^1, Gaussian ensemble, Legendre
//! ensemble, dessins d'enfant), plus trivial-kernel companions and formal
//! deformations.

use crate::curve::{
    BranchKind, Curve, CurveSpec, LocalBranch, LocalCurve, LocalYSpec, RatFunSpec, YSpec,
};
use crate::error::Result;
use crate::param::ParamScalar;
use crate::scalar::Scalar;
use crate::series::{ScalarSeries, Series};

fn s_int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn poly(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&n| s_int(n)).collect()
}

/// x = z^2/2, y = z
pub fn airy_spec() -> CurveSpec {
    CurveSpec {
        name: "airy".into(),
        x: RatFunSpec { num: vec![s_int(0), s_int(0), Scalar::from_frac(1, 2)], den: poly(&[1]) },
        y: YSpec::Rational(RatFunSpec { num: poly(&[0, 1]), den: poly(&[1]) }),
        signs: vec![],
    }
}

/// x = z^2/2, y = 1/z
pub fn bessel_spec() -> CurveSpec {
    CurveSpec {
        name: "bessel".into(),
        x: RatFunSpec { num: vec![s_int(0), s_int(0), Scalar::from_frac(1, 2)], den: poly(&[1]) },
        y: YSpec::Rational(RatFunSpec { num: poly(&[1]), den: poly(&[0, 1]) }),
        signs: vec![],
    }
}

fn zp1z_x() -> RatFunSpec {
    // x = (z^2 + 1)/z
    RatFunSpec { num: poly(&[1, 0, 1]), den: poly(&[0, 1]) }
}

/// Legendre ensemble: x = z + 1/z, y = z/(z^2 - 1); both branch points hard edges.
pub fn legendre_spec() -> CurveSpec {
    CurveSpec {
        name: "legendre".into(),
        x: zp1z_x(),
        y: YSpec::Rational(RatFunSpec { num: poly(&[0, 1]), den: poly(&[-1, 0, 1]) }),
        signs: vec![],
    }
}

/// Gaussian ensemble: x = z + 1/z, y = z; both branch points regular.
pub fn gauss_spec() -> CurveSpec {
    CurveSpec {
        name: "gauss".into(),
        x: zp1z_x(),
        y: YSpec::Rational(RatFunSpec { num: poly(&[0, 1]), den: poly(&[1]) }),
        signs: vec![],
    }
}

/// Dessins d'enfant: x = z + 1/z, y = z/(z+1); hard edge at z = -1 only.
pub fn des_spec() -> CurveSpec {
    CurveSpec {
        name: "des".into(),
        x: zp1z_x(),
        y: YSpec::Rational(RatFunSpec { num: poly(&[0, 1]), den: poly(&[1, 1]) }),
        signs: vec![],
    }
}

pub fn airy(order: i64, kmax: usize) -> Curve {
    Curve::build(&airy_spec(), order, kmax).expect("airy fixture")
}

pub fn bessel(order: i64, kmax: usize) -> Curve {
    Curve::build(&bessel_spec(), order, kmax).expect("bessel fixture")
}

pub fn legendre(order: i64, kmax: usize) -> Curve {
    Curve::build(&legendre_spec(), order, kmax).expect("legendre fixture")
}

pub fn gauss(order: i64, kmax: usize) -> Curve {
    Curve::build(&gauss_spec(), order, kmax).expect("gauss fixture")
}

pub fn des(order: i64, kmax: usize) -> Curve {
    Curve::build(&des_spec(), order, kmax).expect("des fixture")
}

/// log(1 + w) as a series for w of positive valuation.
fn log1p(w: &ScalarSeries) -> ScalarSeries {
    let order = w.order;
    let mut acc = ScalarSeries::zero_to(order);
    let mut p = ScalarSeries::one(order);
    let n_terms = order.max(1);
    for j in 1..=n_terms {
        p = p.mul(w).truncate(order);
        let c = Scalar::from_frac(if j % 2 == 1 { 1 } else { -1 }, j);
        acc = acc.add(&p.scale(&c));
        if p.is_zero_to_order() {
            break;
        }
    }
    acc
}

/// Gromov-Witten of P^1: x = z + 1/z with y = ln z given as local data
/// (the constant i*pi at the second branch is discarded by construction).
pub fn gw_spec(order: i64) -> Result<CurveSpec> {
    // borrow the gauss build for the local coordinates
    let base = Curve::build(&gauss_spec(), order, 0)?;
    let mut locals = Vec::new();
    for b in &base.branches {
        // branch 1: z = 1 + w -> ln z = log1p(w)
        // branch 2: z = -1 + w = -(1 - w) -> ln z = i pi + log1p(-w); drop the constant
        let w = b
            .z_of_s
            .sub(&ScalarSeries::constant(b.location.clone(), b.z_of_s.order));
        let arg = if b.location == Scalar::from_int(1) { w } else { w.neg() };
        let ser = log1p(&arg);
        locals.push(LocalYSpec {
            branch: b.label,
            low: ser.valuation().unwrap_or(0),
            coeffs: {
                let lo = ser.valuation().unwrap_or(0);
                (lo..ser.order).map(|e| ser.coeff(e).unwrap()).collect()
            },
        });
    }
    Ok(CurveSpec { name: "gw-local".into(), x: zp1z_x(), y: YSpec::Local(locals), signs: vec![] })
}

pub fn gw(order: i64, kmax: usize) -> Curve {
    Curve::build(&gw_spec(order).expect("gw locals"), order, kmax).expect("gw fixture")
}

pub fn spec_by_name(name: &str, order: i64) -> Result<CurveSpec> {
    match name {
        "airy" => Ok(airy_spec()),
        "bessel" => Ok(bessel_spec()),
        "legendre" => Ok(legendre_spec()),
        "gauss" | "gue" => Ok(gauss_spec()),
        "des" => Ok(des_spec()),
        "gw-local" | "gw" => gw_spec(order),
        other => Err(crate::error::Error::InvalidInput(format!("unknown fixture {other:?}"))),
    }
}

pub const FIXTURE_NAMES: [&str; 6] = ["airy", "bessel", "legendre", "gauss", "des", "gw-local"];

/// Trivial-kernel companion S_0: same branch structure, trivial Bergman
/// kernel, and y truncated to its minimal local term, so that the partition
/// function is exactly the Delta-hat-scaled product of tau functions.
pub fn s0_companion(curve: &Curve) -> LocalCurve<Scalar> {
    let order = curve.order;
    let branches = curve
        .branches
        .iter()
        .map(|b| {
            let e = match b.kind {
                BranchKind::Irregular => -1,
                BranchKind::Regular => 1,
            };
            LocalBranch {
                kind: b.kind,
                y_local: Series::monomial(b.y_min.clone(), e, order),
            }
        })
        .collect();
    LocalCurve::new(branches, order)
}

/// Formal deformation of the Airy curve: y = y1 z + y3 z^3 + ... + y_{2m+1} z^{2m+1}.
pub fn deformed_airy_curve(odd_indices: &[i32], order: i64) -> LocalCurve<ParamScalar> {
    let mut ser = Series::zero_to(order);
    ser = ser.add(&Series::monomial(ParamScalar::var(1), 1, order));
    for &j in odd_indices {
        assert!(j >= 3 && j % 2 == 1);
        ser = ser.add(&Series::monomial(ParamScalar::var(j), j as i64, order));
    }
    LocalCurve::new(vec![LocalBranch { kind: BranchKind::Regular, y_local: ser }], order)
}

/// Formal deformation of the Bessel curve: y = y_{-1}/z + y1 z + y3 z^3 + ...
pub fn deformed_bessel_curve(odd_indices: &[i32], order: i64) -> LocalCurve<ParamScalar> {
    let mut ser = Series::zero_to(order);
    ser = ser.add(&Series::monomial(ParamScalar::var(-1), -1, order));
    for &j in odd_indices {
        assert!(j >= 1 && j % 2 == 1);
        ser = ser.add(&Series::monomial(ParamScalar::var(j), j as i64, order));
    }
    LocalCurve::new(vec![LocalBranch { kind: BranchKind::Irregular, y_local: ser }], order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gw_locals_are_regular_with_expected_slope() {
        let c = gw(14, 4);
        assert_eq!(c.branches.len(), 2);
        for b in &c.branches {
            assert!(matches!(b.kind, BranchKind::Regular));
        }
        // d(ln z)/ds at z=1 equals z'(0)/z(0) = 1/sqrt2
        assert_eq!(
            c.branches[0].y_min,
            Scalar::sqrt2().inverse().unwrap()
        );
        // and at z=-1: z'(0)/z(0) = (1/(i sqrt2))/(-1) = i/sqrt2
        let expect = &Scalar::i() * &Scalar::sqrt2().inverse().unwrap();
        assert_eq!(c.branches[1].y_min, expect);
    }

    #[test]
    fn des_branch_order_and_eta() {
        let c = des(14, 4);
        // irregular branch z = -1 is labeled 1
        assert!(matches!(c.branches[0].kind, BranchKind::Irregular));
        assert_eq!(c.branches[0].location, Scalar::from_int(-1));
        // eta_1 = -2 and eta_2 = 1/32
        assert_eq!(c.branches[0].eta, Scalar::from_int(-2));
        assert_eq!(c.branches[1].eta, Scalar::from_frac(1, 32));
        // y_min at the hard edge is -i sqrt2 (with the default eps = i sqrt2)
        let expect = &(-&Scalar::i()) * &Scalar::sqrt2();
        assert_eq!(c.branches[0].y_min, expect);
    }

    #[test]
    fn s0_of_legendre_is_pure_bessel_pair() {
        let c = legendre(12, 4);
        let s0 = s0_companion(&c);
        assert_eq!(s0.branches.len(), 2);
        let y = s0.branches[0].y_local.clone();
        assert_eq!(y.valuation(), Some(-1));
        assert_eq!(y.coeff(-1).unwrap(), Scalar::sqrt2().inverse().unwrap());
        assert_eq!(y.coeff(1).unwrap(), Scalar::zero());
    }
}
