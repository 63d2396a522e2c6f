//! Rewrites α dlog β over K = k(s)(θ), a separable extension of degree p,
//! into a sum of ξ·dlog y (y in the base) and x·dlog η (x in the base)
//! plus an exact remainder. β is pre-factored as y0·Π(θ − b_i); per factor
//! τ = θ − b the expansion α = Σ c_i τ^i reduces c_i τ^i dlog τ for i ≥ 1
//! through c_i τ^i dlog τ = d((1/i)c_i τ^i) − (1/i)c_i τ^i dlog c_i.

use super::field::{nat_rep, FfElem, FunField, LayerKind};
use super::form::Diff1;
use super::ratfun::RatFun;
use crate::ff::factor::factor_poly;
use crate::ff::poly::Poly;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BtaTerm {
    /// ξ·dlog y with ξ ∈ K, y ∈ k(s)
    XiDlogY { xi: FfElem, y: RatFun },
    /// x·dlog η with x ∈ k(s), η ∈ K
    XDlogEta { x: RatFun, eta: FfElem },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BtaRewrite {
    field: FunField,
    terms: Vec<BtaTerm>,
    remainder: FfElem,
}

impl BtaRewrite {
    pub fn field(&self) -> &FunField {
        &self.field
    }

    pub fn terms(&self) -> &[BtaTerm] {
        &self.terms
    }

    pub fn remainder(&self) -> &FfElem {
        &self.remainder
    }

    /// Σ terms + d(remainder) as a form on K.
    pub fn evaluate(&self) -> Result<Diff1> {
        let l = &self.field;
        let mut out = Diff1::d(l, &self.remainder);
        for term in &self.terms {
            let w = match term {
                BtaTerm::XiDlogY { xi, y } => {
                    Diff1::dlog(l, &l.from_ratfun(y.clone()))?.scale(xi)
                }
                BtaTerm::XDlogEta { x, eta } => {
                    Diff1::dlog(l, eta)?.scale(&l.from_ratfun(x.clone()))
                }
            };
            out = out.add(&w)?;
        }
        Ok(out)
    }
}

fn binom(field: &crate::ff::Field, n: usize, k: usize) -> crate::ff::Rep {
    let mut c: u64 = 1;
    for i in 0..k {
        c = c * (n - i) as u64 / (i + 1) as u64;
    }
    nat_rep(field, c)
}

/// α in powers of τ = θ − b: coefficient i is Σ_{j≥i} C(j,i) b^{j−i} α_j.
fn tau_expansion(l: &FunField, alpha: &FfElem, b: &RatFun) -> Vec<RatFun> {
    let k = l.constants();
    let d = l.deg();
    let mut out = vec![RatFun::zero(k); d];
    for (j, aj) in alpha.coords().iter().enumerate() {
        if aj.is_zero() {
            continue;
        }
        for i in 0..=j {
            let c = RatFun::constant(k, binom(k, j, i)).mul(&b.pow((j - i) as u32));
            out[i] = out[i].add(&aj.mul(&c));
        }
    }
    out
}

/// Rewrites α dlog(y0·Π(θ − b_i)) for a pre-factored β.
pub fn bta_rewrite_factored(
    l: &FunField,
    alpha: &FfElem,
    y0: &RatFun,
    bs: &[RatFun],
) -> Result<BtaRewrite> {
    match l.layer() {
        Some(lay) if lay.kind == LayerKind::Separable && l.deg() as u64 == l.p() => {}
        _ => {
            return Err(Error::UnsupportedShape(
                "separable layer of degree p required".into(),
            ))
        }
    }
    if y0.is_zero() {
        return Err(Error::DlogZero);
    }
    let k = l.constants();
    let mut terms = Vec::new();
    let mut remainder = l.zero();
    if !l.is_zero(alpha) && !y0.is_constant() {
        terms.push(BtaTerm::XiDlogY {
            xi: alpha.clone(),
            y: y0.clone(),
        });
    }
    let theta = l.gen_elem()?;
    for b in bs {
        let tau = l.sub(&theta, &l.from_ratfun(b.clone()));
        let cs = tau_expansion(l, alpha, b);
        if !cs[0].is_zero() {
            terms.push(BtaTerm::XDlogEta {
                x: cs[0].clone(),
                eta: tau.clone(),
            });
        }
        for (i, ci) in cs.iter().enumerate().skip(1) {
            if ci.is_zero() {
                continue;
            }
            // c τ^i dlog τ = d((1/i)·c·τ^i) − (1/i)·c·τ^i·dlog c
            let inv_i = RatFun::constant(k, k.inv(&nat_rep(k, i as u64))?);
            let piece = l.scale(&l.pow(&tau, i as u64), &ci.mul(&inv_i));
            remainder = l.add(&remainder, &piece);
            if !ci.is_constant() {
                terms.push(BtaTerm::XiDlogY {
                    xi: l.neg(&piece),
                    y: ci.clone(),
                });
            }
        }
    }
    Ok(BtaRewrite {
        field: l.clone(),
        terms,
        remainder,
    })
}

/// Rewrites α dlog β for β with constant θ-coordinates, factoring β as a
/// polynomial in θ over the constants; a nonlinear irreducible factor is
/// reported as an error.
pub fn bta_rewrite(l: &FunField, alpha: &FfElem, beta: &FfElem) -> Result<BtaRewrite> {
    let k = l.constants();
    let mut coeffs = Vec::with_capacity(l.deg());
    for c in beta.coords() {
        match c.as_constant() {
            Some(r) => coeffs.push(r),
            None => {
                return Err(Error::UnsupportedShape(
                    "coordinates must be constants to factor over k".into(),
                ))
            }
        }
    }
    let b_poly = Poly::new(k.clone(), coeffs);
    if b_poly.is_zero() {
        return Err(Error::DlogZero);
    }
    let mut bs = Vec::new();
    for (f, e) in factor_poly(&b_poly, 0)? {
        let d = f.degree().unwrap_or(0);
        if d > 1 {
            return Err(Error::NonLinearFactor { degree: d });
        }
        let root = k.neg(&f.coeff(0));
        for _ in 0..e {
            bs.push(RatFun::constant(k, root.clone()));
        }
    }
    let y0 = RatFun::constant(k, b_poly.leading().expect("nonzero").clone());
    bta_rewrite_factored(l, alpha, &y0, &bs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{Field, Rep};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rfun(k: &Field, num: &[u64], den: &[u64]) -> RatFun {
        let mk = |cs: &[u64]| {
            Poly::new(
                k.clone(),
                cs.iter().map(|&c| Rep::Base(c % k.p())).collect(),
            )
        };
        RatFun::new(mk(num), mk(den)).unwrap()
    }

    /// θ² + θ = s over F_2(s)
    fn asw2() -> FunField {
        let k = Field::prime(2).unwrap();
        FunField::rational(&k, "s")
            .extend_separable(
                "h",
                vec![RatFun::var(&k), RatFun::one(&k), RatFun::one(&k)],
            )
            .unwrap()
    }

    /// θ³ − θ = s over F_3(s)
    fn asw3() -> FunField {
        let k = Field::prime(3).unwrap();
        FunField::rational(&k, "s")
            .extend_separable(
                "h",
                vec![
                    rfun(&k, &[0, 2], &[1]),
                    rfun(&k, &[2], &[1]),
                    RatFun::zero(&k),
                    RatFun::one(&k),
                ],
            )
            .unwrap()
    }

    fn random_elem(kf: &FunField, rng: &mut ChaCha8Rng) -> FfElem {
        let k = kf.constants().clone();
        let coords = (0..kf.deg())
            .map(|_| loop {
                let num = Poly::random(&k, rng.gen_range(0..3), rng);
                let den = Poly::random(&k, rng.gen_range(0..2), rng);
                if !den.is_zero() {
                    return RatFun::new(num, den).unwrap();
                }
            })
            .collect();
        kf.from_coords(coords).unwrap()
    }

    fn check_replay(l: &FunField, alpha: &FfElem, rw: &BtaRewrite, beta: &FfElem) {
        let lhs = Diff1::dlog(l, beta).unwrap().scale(alpha);
        assert_eq!(rw.evaluate().unwrap(), lhs);
    }

    #[test]
    fn asw_example() {
        // α = θ, β = θ + 1 over F_2(s): θ dlog(θ+1) = dlog(θ+1) + d(θ+1)
        let l = asw2();
        let alpha = l.gen_elem().unwrap();
        let beta = l.add(&alpha, &l.one());
        let rw = bta_rewrite(&l, &alpha, &beta).unwrap();
        assert_eq!(
            rw.terms(),
            &[BtaTerm::XDlogEta {
                x: RatFun::one(l.constants()),
                eta: beta.clone(),
            }]
        );
        assert_eq!(*rw.remainder(), beta);
        check_replay(&l, &alpha, &rw, &beta);
    }

    #[test]
    fn constant_and_zero_inputs() {
        let l = asw2();
        let alpha = l.gen_elem().unwrap();
        // β a nonzero constant: dlog β = 0, empty rewrite
        let beta = l.one();
        let rw = bta_rewrite(&l, &alpha, &beta).unwrap();
        assert!(rw.terms().is_empty());
        assert!(l.is_zero(rw.remainder()));
        check_replay(&l, &alpha, &rw, &beta);
        // α = 0
        let beta = l.add(&l.gen_elem().unwrap(), &l.one());
        let rw = bta_rewrite(&l, &l.zero(), &beta).unwrap();
        assert!(rw.terms().is_empty());
        assert!(l.is_zero(rw.remainder()));
        check_replay(&l, &l.zero(), &rw, &beta);
        // β = 0
        assert!(matches!(
            bta_rewrite(&l, &alpha, &l.zero()),
            Err(Error::DlogZero)
        ));
    }

    #[test]
    fn nonlinear_factor_is_reported() {
        // β = θ² + 1 over F_3(s): T² + 1 is irreducible over F_3
        let l = asw3();
        let theta = l.gen_elem().unwrap();
        let beta = l.add(&l.mul(&theta, &theta), &l.one());
        assert!(matches!(
            bta_rewrite(&l, &theta, &beta),
            Err(Error::NonLinearFactor { degree: 2 })
        ));
        // non-constant coordinates are rejected
        let bad = l.scale(&theta, &RatFun::var(l.constants()));
        assert!(matches!(
            bta_rewrite(&l, &theta, &bad),
            Err(Error::UnsupportedShape(_))
        ));
        // degree ≠ p layers are rejected
        let k = Field::prime(3).unwrap();
        let quad = FunField::rational(&k, "s")
            .extend_separable(
                "y",
                vec![rfun(&k, &[0, 2], &[1]), RatFun::zero(&k), RatFun::one(&k)],
            )
            .unwrap();
        assert!(matches!(
            bta_rewrite_factored(&quad, &quad.one(), &RatFun::one(&k), &[]),
            Err(Error::UnsupportedShape(_))
        ));
    }

    #[test]
    fn random_factored_replay() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for l in [asw2(), asw3()] {
            for _ in 0..15 {
                let alpha = random_elem(&l, &mut rng);
                let y0 = loop {
                    let c = random_elem(&l.base(), &mut rng).coords()[0].clone();
                    if !c.is_zero() {
                        break c;
                    }
                };
                let nb = rng.gen_range(0..3);
                let bs: Vec<RatFun> = (0..nb)
                    .map(|_| random_elem(&l.base(), &mut rng).coords()[0].clone())
                    .collect();
                let rw = bta_rewrite_factored(&l, &alpha, &y0, &bs).unwrap();
                // β = y0·Π(θ − b)
                let mut beta = l.from_ratfun(y0.clone());
                let theta = l.gen_elem().unwrap();
                for b in &bs {
                    beta = l.mul(&beta, &l.sub(&theta, &l.from_ratfun(b.clone())));
                }
                check_replay(&l, &alpha, &rw, &beta);
            }
        }
    }

    #[test]
    fn random_constant_beta_replay() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for l in [asw2(), asw3()] {
            let k = l.constants().clone();
            let mut checked = 0;
            while checked < 15 {
                let alpha = random_elem(&l, &mut rng);
                // β built from random roots in k so it always splits
                let mut beta = l.from_ratfun(RatFun::constant(
                    &k,
                    Rep::Base(rng.gen_range(1..k.p())),
                ));
                let theta = l.gen_elem().unwrap();
                for _ in 0..rng.gen_range(0..l.deg() as u32) {
                    let root = RatFun::constant(&k, Rep::Base(rng.gen_range(0..k.p())));
                    beta = l.mul(&beta, &l.sub(&theta, &l.from_ratfun(root)));
                }
                let rw = bta_rewrite(&l, &alpha, &beta).unwrap();
                check_replay(&l, &alpha, &rw, &beta);
                checked += 1;
            }
        }
    }
}
