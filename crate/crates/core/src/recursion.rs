//! The residue recursion for correlators, computed exactly in the basis of
//! auxiliary V-differentials.
//!
//! For each branch point the bracket of the recursion is assembled as a map
//! from rest-slot tag monomials to local Laurent series; the projection onto
//! V^alpha_k then reads off the coefficient of s^{-2k-2} in the kernel
//! residue. Appearances of omega_{0,2} inside the bracket expand over a tag
//! alphabet in which the even local coefficients of B are exact multiples of
//! the V-differentials and the odd ones are independent bookkeeping symbols
//! whose total contribution must cancel; that cancellation is asserted on
//! every computed correlator.

use std::collections::{BTreeMap, HashMap};

use crate::curve::RecursionCurve;
use crate::double_factorial_odd;
use crate::error::{Error, Result};
use crate::par;
use crate::ring::Coeff;
use crate::scalar::Scalar;
use crate::series::Series;

/// One V-basis index: (k, branch) with branch 0-based.
pub type VIdx = (u32, u32);

/// Sorted multiset of V-indices.
pub type MultiIdx = Vec<VIdx>;

/// Rest-slot tag: either a V-differential or an odd bookkeeping symbol.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Tag {
    V(u32, u32),
    /// odd local coefficient of B at (j, branch); must cancel in totals
    W(u32, u32),
}

pub type TagMonomial = Vec<Tag>;

#[derive(Clone, Debug)]
pub struct Correlator<C: Coeff> {
    pub g: u32,
    pub n: u32,
    pub coeffs: BTreeMap<MultiIdx, C>,
}

impl<C: Coeff> Correlator<C> {
    pub fn empty(g: u32, n: u32) -> Self {
        Correlator { g, n, coeffs: BTreeMap::new() }
    }

    pub fn coeff(&self, idx: &MultiIdx) -> C {
        debug_assert!(idx.windows(2).all(|w| w[0] <= w[1]));
        self.coeffs.get(idx).cloned().unwrap_or_else(C::zero)
    }

    /// Distinct decompositions of each stored multi-index into one
    /// distinguished entry and the sorted remainder.
    pub fn single_decompositions(&self) -> Vec<(VIdx, MultiIdx, C)> {
        let mut out = Vec::new();
        for (idx, c) in &self.coeffs {
            let mut seen: Option<VIdx> = None;
            for (i, e) in idx.iter().enumerate() {
                if seen == Some(*e) {
                    continue;
                }
                seen = Some(*e);
                let mut rest = idx.clone();
                rest.remove(i);
                out.push((*e, rest, c.clone()));
            }
        }
        out
    }

    /// Largest Sum(2k+1) over the support.
    pub fn max_weight(&self) -> i64 {
        self.coeffs
            .keys()
            .map(|idx| idx.iter().map(|(k, _)| 2 * *k as i64 + 1).sum())
            .max()
            .unwrap_or(0)
    }
}

/// Memoizing recursion engine over a fixed curve.
pub struct Engine<'a, C: Coeff, K: RecursionCurve<C>> {
    pub curve: &'a K,
    cache: HashMap<(u32, u32), Correlator<C>>,
    inv_2y_odd: Vec<Series<C>>,
}

/// Factor expansion item: local series in s times a rest-tag monomial.
type Expansion<C> = Vec<(Series<C>, TagMonomial)>;

impl<'a, C: Coeff, K: RecursionCurve<C>> Engine<'a, C, K> {
    pub fn new(curve: &'a K) -> Result<Self> {
        let mut inv = Vec::new();
        for alpha in 0..curve.num_branches() {
            let y_odd = curve.y_odd_local(alpha);
            if y_odd.is_zero_to_order() {
                return Err(Error::Curve(format!(
                    "odd part of y vanishes identically at branch {}",
                    alpha + 1
                )));
            }
            inv.push(y_odd.scale(&C::from_int(2)).inverse()?);
        }
        Ok(Engine { curve, cache: HashMap::new(), inv_2y_odd: inv })
    }

    /// Denominator series 1/(2 y_odd) of the recursion kernel at a branch.
    pub fn kernel_inverse_denominator(&self, alpha: usize) -> &Series<C> {
        &self.inv_2y_odd[alpha]
    }

    pub fn correlator(&mut self, g: u32, n: u32) -> Result<&Correlator<C>> {
        if 2 * g as i64 - 2 + n as i64 <= 0 {
            return Err(Error::InvalidInput(format!("unstable (g,n) = ({g},{n})")));
        }
        if !self.cache.contains_key(&(g, n)) {
            // ensure all lower correlators exist (avoids deep recursion)
            let chi = 2 * g as i64 - 2 + n as i64;
            for c in 1..chi {
                for gg in 0..=g {
                    let nn = c - 2 * gg as i64 + 2;
                    if nn >= 1 && 2 * gg as i64 - 2 + nn > 0 && nn <= n as i64 + (g - gg) as i64 * 2 {
                        let key = (gg, nn as u32);
                        if !self.cache.contains_key(&key) {
                            let v = self.compute(gg, nn as u32)?;
                            self.cache.insert(key, v);
                        }
                    }
                }
            }
            let v = self.compute(g, n)?;
            self.cache.insert((g, n), v);
        }
        Ok(&self.cache[&(g, n)])
    }

    /// Expansion of the factor omega_{g,n'}(slot, rest...) at branch alpha.
    /// `sigma` selects the slot z(-s) with its orientation sign.
    fn factor_expansion(&self, g: u32, np: u32, alpha: usize, sigma: bool) -> Result<Expansion<C>> {
        let order = self.curve.series_order();
        let mut out: Expansion<C> = Vec::new();
        if (g, np) == (0, 2) {
            // omega_{0,2}(slot, p_j): tag series of B at alpha
            let m_cap = 2 * self.curve.max_v_index() + 4;
            for m in 0..=m_cap {
                let tag;
                let coeff;
                if m % 2 == 0 {
                    let j = (m / 2) as u32;
                    tag = Tag::V(j, alpha as u32);
                    coeff = C::from_scalar(
                        Scalar::from_big(double_factorial_odd(j as i64))
                            .inverse()
                            .expect("double factorial nonzero"),
                    );
                } else {
                    tag = Tag::W(((m - 1) / 2) as u32, alpha as u32);
                    coeff = C::one();
                }
                let ser = Series::monomial(coeff, m as i64, order);
                out.push((ser, vec![tag]));
            }
        } else {
            let sub = self
                .cache
                .get(&(g, np))
                .ok_or_else(|| Error::InvalidInput(format!("missing correlator ({g},{np})")))?;
            for (e, rest, c) in sub.single_decompositions() {
                let ser = self
                    .curve
                    .v_local_series(e.1 as usize, e.0 as usize, alpha)
                    .scale(&c);
                let tags = rest.into_iter().map(|(k, b)| Tag::V(k, b)).collect();
                out.push((ser, tags));
            }
        }
        if sigma {
            for (ser, _) in out.iter_mut() {
                *ser = ser.flip_sign().neg();
            }
        }
        Ok(out)
    }

    fn compute(&self, g: u32, n: u32) -> Result<Correlator<C>> {
        let order = self.curve.series_order();
        let d = self.curve.num_branches();
        let k_cap = (3 * g as i64 - 3 + n as i64).max(0) as u32;
        if k_cap as usize > self.curve.max_v_index() {
            return Err(Error::Curve(format!(
                "curve built with kmax {} but correlator ({g},{n}) needs V-index {k_cap}",
                self.curve.max_v_index()
            )));
        }

        // d-map: (distinguished entry, rest monomial) -> coefficient
        let mut dmap: BTreeMap<(VIdx, TagMonomial), C> = BTreeMap::new();

        for alpha in 0..d {
            // assemble the bracket E_alpha
            let mut e_map: BTreeMap<TagMonomial, Series<C>> = BTreeMap::new();
            let add = |m: TagMonomial, s: Series<C>, map: &mut BTreeMap<TagMonomial, Series<C>>| {
                if s.is_zero_to_order() {
                    // still record the truncation order pessimistically
                }
                map.entry(m)
                    .and_modify(|t| *t = t.add(&s))
                    .or_insert(s);
            };

            // term 1: omega_{g-1, n+1}(z(s), z(-s), rest)
            if g >= 1 {
                if (g - 1, n + 1) == (0, 2) {
                    let phi = self.curve.b_diag_phi(alpha);
                    add(Vec::new(), phi.neg(), &mut e_map);
                } else {
                    let sub = &self.cache[&(g - 1, n + 1)];
                    for (idx, c) in &sub.coeffs {
                        // distinct ordered pairs (e1 at slot s, e2 at slot -s)
                        let mut seen1: Option<VIdx> = None;
                        for (i, e1) in idx.iter().enumerate() {
                            if seen1 == Some(*e1) {
                                continue;
                            }
                            seen1 = Some(*e1);
                            let mut rem = idx.clone();
                            rem.remove(i);
                            let s1 = self
                                .curve
                                .v_local_series(e1.1 as usize, e1.0 as usize, alpha);
                            let mut seen2: Option<VIdx> = None;
                            for (j, e2) in rem.iter().enumerate() {
                                if seen2 == Some(*e2) {
                                    continue;
                                }
                                seen2 = Some(*e2);
                                let mut rest = rem.clone();
                                rest.remove(j);
                                let s2 = self
                                    .curve
                                    .v_local_series(e2.1 as usize, e2.0 as usize, alpha)
                                    .flip_sign()
                                    .neg();
                                let prod = s1.mul(&s2).scale(c);
                                let tags: TagMonomial =
                                    rest.iter().map(|&(k, b)| Tag::V(k, b)).collect();
                                add(tags, prod, &mut e_map);
                            }
                        }
                    }
                }
            }

            // term 2: ordered stable splits, omega_{0,1} factors excluded
            for g1 in 0..=g {
                let g2 = g - g1;
                for n1 in 1..=n {
                    let n2 = n + 1 - n1;
                    if n2 < 1 {
                        continue;
                    }
                    let stable1 = 2 * g1 as i64 - 2 + n1 as i64 > 0 || (g1, n1) == (0, 2);
                    let stable2 = 2 * g2 as i64 - 2 + n2 as i64 > 0 || (g2, n2) == (0, 2);
                    if !stable1 || !stable2 {
                        continue;
                    }
                    let f1 = self.factor_expansion(g1, n1, alpha, false)?;
                    let f2 = self.factor_expansion(g2, n2, alpha, true)?;
                    for (s1, m1) in &f1 {
                        if s1.is_zero_to_order() {
                            continue;
                        }
                        for (s2, m2) in &f2 {
                            if s2.is_zero_to_order() {
                                continue;
                            }
                            let mut merged = m1.clone();
                            merged.extend_from_slice(m2);
                            merged.sort_unstable();
                            let mult = split_multinomial(&merged, m1);
                            let mut prod = s1.mul(s2);
                            if mult != 1 {
                                prod = prod.scale(&C::from_int(mult));
                            }
                            add(merged, prod, &mut e_map);
                        }
                    }
                }
            }

            // kernel residues: coefficient of V^alpha_k from s^{-2k-2}
            let inv = self.inv_2y_odd[alpha].clone();
            let items: Vec<(TagMonomial, Series<C>)> = e_map.into_iter().collect();
            let results: Vec<Result<Vec<((VIdx, TagMonomial), C)>>> =
                par::map_collect(items, |(tags, ser)| {
                    let base = ser.mul(&inv);
                    let mut local = Vec::new();
                    for k in 0..=k_cap {
                        let res = base.coeff(-1 - 2 * k as i64)?;
                        if res.is_zero() {
                            continue;
                        }
                        let df = C::from_scalar(
                            Scalar::from_big(double_factorial_odd(k as i64 + 1))
                                .inverse()
                                .expect("nonzero"),
                        );
                        let c = res.neg_ref().mul_ref(&df);
                        local.push((((k, alpha as u32), tags.clone()), c));
                    }
                    Ok(local)
                });
            for r in results {
                for (key, c) in r? {
                    dmap.entry(key)
                        .and_modify(|t| *t = t.add_ref(&c))
                        .or_insert(c);
                }
            }
        }

        // split into V-only results and W-junk, then check consistency
        let mut by_tau: BTreeMap<MultiIdx, Vec<(VIdx, C)>> = BTreeMap::new();
        for ((e, tags), c) in dmap {
            let mut has_w = false;
            let mut tau: MultiIdx = Vec::with_capacity(tags.len() + 1);
            for t in &tags {
                match t {
                    Tag::V(k, b) => tau.push((*k, *b)),
                    Tag::W(..) => {
                        has_w = true;
                        break;
                    }
                }
            }
            if has_w {
                if !c.is_zero() {
                    return Err(Error::Mismatch(format!(
                        "odd Bergman bookkeeping terms fail to cancel at ({g},{n}): {c} on {tags:?}"
                    )));
                }
                continue;
            }
            tau.push(e);
            tau.sort_unstable();
            by_tau.entry(tau).or_default().push((e, c));
        }

        let mut coeffs = BTreeMap::new();
        for (tau, reads) in by_tau {
            // the same coefficient is read from every distinguished slot; all
            // reads must agree (this is the symmetry of the correlator), and
            // a nonzero value must be seen from every distinct slot
            let first = reads[0].1.clone();
            for (_, v) in &reads[1..] {
                if *v != first {
                    return Err(Error::Mismatch(format!(
                        "correlator ({g},{n}) not symmetric on {tau:?}: {first} vs {v}"
                    )));
                }
            }
            if !first.is_zero() {
                let mut distinct = tau.clone();
                distinct.dedup();
                if reads.len() != distinct.len() {
                    return Err(Error::Mismatch(format!(
                        "correlator ({g},{n}) slot reads incomplete on {tau:?}"
                    )));
                }
            }
            // support bound
            let weight: i64 = tau.iter().map(|(k, _)| 2 * *k as i64 + 1).sum();
            if weight > 6 * g as i64 - 6 + 3 * n as i64 && !first.is_zero() {
                return Err(Error::Mismatch(format!(
                    "support bound violated at ({g},{n}): {tau:?}"
                )));
            }
            if !first.is_zero() {
                coeffs.insert(tau, first);
            }
        }
        let _ = order;
        Ok(Correlator { g, n, coeffs })
    }
}

/// Number of labeled splits realizing (m1, m2) inside the merged multiset:
/// product over distinct tag values v of C(mult_merged(v), mult_m1(v)).
fn split_multinomial(merged: &TagMonomial, m1: &TagMonomial) -> i64 {
    let mut mult_all: BTreeMap<Tag, i64> = BTreeMap::new();
    for t in merged {
        *mult_all.entry(*t).or_insert(0) += 1;
    }
    let mut mult_1: BTreeMap<Tag, i64> = BTreeMap::new();
    for t in m1 {
        *mult_1.entry(*t).or_insert(0) += 1;
    }
    let mut acc = 1i64;
    for (t, &a) in &mult_all {
        let b = mult_1.get(t).copied().unwrap_or(0);
        acc *= binom(a, b);
    }
    acc
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1i64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn coeff_of(c: &Correlator<Scalar>, idx: &[(u32, u32)]) -> Scalar {
        c.coeff(&idx.to_vec())
    }

    #[test]
    fn airy_small_correlators() {
        let curve = fixtures::airy(26, 8);
        let mut eng = Engine::new(&curve).unwrap();
        // omega_{0,3} = prod dz_i/z_i^2: single V-coefficient 1
        let c03 = eng.correlator(0, 3).unwrap().clone();
        assert_eq!(c03.coeffs.len(), 1);
        assert_eq!(coeff_of(&c03, &[(0, 0), (0, 0), (0, 0)]), Scalar::one());
        // omega_{1,1}: coefficient of V_1 is <tau_1> = 1/24
        let c11 = eng.correlator(1, 1).unwrap().clone();
        assert_eq!(c11.coeffs.len(), 1);
        assert_eq!(coeff_of(&c11, &[(1, 0)]), Scalar::from_frac(1, 24));
        // omega_{1,2}: <tau_0 tau_2> = <tau_1^2> = 1/24
        let c12 = eng.correlator(1, 2).unwrap().clone();
        assert_eq!(coeff_of(&c12, &[(0, 0), (2, 0)]), Scalar::from_frac(1, 24));
        assert_eq!(coeff_of(&c12, &[(1, 0), (1, 0)]), Scalar::from_frac(1, 24));
        // omega_{2,1}: <tau_4>_2 = 1/1152
        let c21 = eng.correlator(2, 1).unwrap().clone();
        assert_eq!(coeff_of(&c21, &[(4, 0)]), Scalar::from_frac(1, 1152));
        // omega_{0,4}: <tau_0^3 tau_1> = 1
        let c04 = eng.correlator(0, 4).unwrap().clone();
        assert_eq!(coeff_of(&c04, &[(0, 0), (0, 0), (0, 0), (1, 0)]), Scalar::one());
    }

    #[test]
    fn bessel_small_correlators() {
        let curve = fixtures::bessel(26, 8);
        let mut eng = Engine::new(&curve).unwrap();
        // b_{1,1}(1) = 1/8: V_0-coefficient 1/8
        let c11 = eng.correlator(1, 1).unwrap().clone();
        assert_eq!(coeff_of(&c11, &[(0, 0)]), Scalar::from_frac(1, 8));
        // b_{2,1}(3) = 9/128: V_1-coefficient 9/(128*3) = 3/128
        let c21 = eng.correlator(2, 1).unwrap().clone();
        assert_eq!(coeff_of(&c21, &[(1, 0)]), Scalar::from_frac(3, 128));
        // b_{3,1}(5) = 225/1024: V_2-coefficient / 5!! -> 15/1024
        let c31 = eng.correlator(3, 1).unwrap().clone();
        assert_eq!(coeff_of(&c31, &[(2, 0)]), Scalar::from_frac(15, 1024));
        // purely irregular support: Sum(2k+1) = 2g-2+n exactly
        for (gn, c) in [((1u32, 1u32), c11), ((2, 1), c21), ((3, 1), c31)] {
            for idx in c.coeffs.keys() {
                let w: i64 = idx.iter().map(|(k, _)| 2 * *k as i64 + 1).sum();
                assert_eq!(w, 2 * gn.0 as i64 - 2 + gn.1 as i64);
            }
        }
    }

    #[test]
    fn memoization_determinism() {
        let curve = fixtures::bessel(22, 7);
        let mut e1 = Engine::new(&curve).unwrap();
        let a = e1.correlator(2, 2).unwrap().coeffs.clone();
        let mut e2 = Engine::new(&curve).unwrap();
        let b = e2.correlator(2, 2).unwrap().coeffs.clone();
        assert_eq!(a, b);
    }

    #[test]
    fn legendre_multibranch_runs_and_is_supported() {
        let curve = fixtures::legendre(30, 8);
        let mut eng = Engine::new(&curve).unwrap();
        let c11 = eng.correlator(1, 1).unwrap().clone();
        // top pole coefficient at branch 1: eta^{-1/2} b_{1,1}(1) = sqrt2/8
        let expect = &Scalar::sqrt2() * &Scalar::from_frac(1, 8);
        assert_eq!(coeff_of(&c11, &[(0, 0)]), expect);
        // purely irregular: omega_{0,3} vanishes (support bound 2g-2+n = 1)
        let c03 = eng.correlator(0, 3).unwrap().clone();
        assert!(c03.coeffs.is_empty());
        // the regular Gaussian curve has omega_{0,3} with coefficient
        // y_{1,a}^{-1} on V_0^3 at each branch
        let gauss = fixtures::gauss(30, 8);
        let mut ge = Engine::new(&gauss).unwrap();
        let g03 = ge.correlator(0, 3).unwrap().clone();
        assert_eq!(coeff_of(&g03, &[(0, 0), (0, 0), (0, 0)]), Scalar::sqrt2());
        let i_sqrt2 = &Scalar::i() * &Scalar::sqrt2();
        assert_eq!(coeff_of(&g03, &[(0, 1), (0, 1), (0, 1)]), i_sqrt2);
        // no mixed-branch terms at (0,3)
        assert_eq!(coeff_of(&g03, &[(0, 0), (0, 0), (0, 1)]), Scalar::zero());
    }
}
