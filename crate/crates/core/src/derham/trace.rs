//! Field norm and trace for one-layer extensions L/K of a rational
//! function field, and the induced trace maps Ω¹_L → Ω¹_K: coefficientwise
//! for separable layers, and through the closed residue rule
//! Tr(Σ f_i u^i du) = f_{p−1}·a′ dt for a purely inseparable layer u^p = a.

use super::field::{FfElem, FunField, LayerKind};
use super::form::Diff1;
use super::ratfun::RatFun;
use crate::{Error, Result};

/// Matrix of multiplication by x on the layer-generator power basis;
/// m[i][j] is the i-th coordinate of x·y^j.
fn mult_matrix(l: &FunField, x: &FfElem) -> Vec<Vec<RatFun>> {
    let d = l.deg();
    let mut cols = Vec::with_capacity(d);
    let mut pw = l.one();
    let y = if d > 1 {
        l.gen_elem().expect("layered field")
    } else {
        l.one()
    };
    for _ in 0..d {
        cols.push(l.mul(x, &pw).coords().to_vec());
        pw = l.mul(&pw, &y);
    }
    (0..d)
        .map(|i| (0..d).map(|j| cols[j][i].clone()).collect())
        .collect()
}

fn det(mat: &[Vec<RatFun>], k: &crate::ff::Field) -> RatFun {
    let n = mat.len();
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut out = RatFun::zero(k);
    for (j, c) in mat[0].iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let minor: Vec<Vec<RatFun>> = mat[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(jj, _)| *jj != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = c.mul(&det(&minor, k));
        out = if j % 2 == 0 { out.add(&term) } else { out.sub(&term) };
    }
    out
}

/// N_{L/K}(x).
pub fn norm_ff(l: &FunField, x: &FfElem) -> RatFun {
    det(&mult_matrix(l, x), l.constants())
}

/// Tr_{L/K}(x).
pub fn trace_ff(l: &FunField, x: &FfElem) -> RatFun {
    let m = mult_matrix(l, x);
    let mut out = RatFun::zero(l.constants());
    for (i, row) in m.iter().enumerate() {
        out = out.add(&row[i]);
    }
    out
}

/// Tr: Ω¹_L → Ω¹_K for a separable layer with separating basis t:
/// Tr(f dt) = Tr_{L/K}(f) dt.
pub fn trace_form_sep(l: &FunField, w: &Diff1) -> Result<Diff1> {
    if w.field() != l {
        return Err(Error::MismatchedCarriers);
    }
    if matches!(l.layer(), Some(lay) if lay.kind == LayerKind::Inseparable) {
        return Err(Error::InseparableInput);
    }
    let base = l.base();
    Ok(Diff1::new(&base, base.from_ratfun(trace_ff(l, w.coeff()))))
}

/// Tr: Ω¹_L → Ω¹_K for u^p = a(t) with a′ ≠ 0, via the residue rule
/// Tr((Σ f_i u^i) du) = f_{p−1}·a′ dt.
pub fn trace_form_insep(l: &FunField, w: &Diff1) -> Result<Diff1> {
    if w.field() != l {
        return Err(Error::MismatchedCarriers);
    }
    if !matches!(l.layer(), Some(lay) if lay.kind == LayerKind::Inseparable) {
        return Err(Error::NotPurelyInseparable);
    }
    let a = l.insep_a()?;
    let top = w.coeff().coords()[l.deg() - 1].clone();
    let base = l.base();
    Ok(Diff1::new(&base, base.from_ratfun(top.mul(&a.derivative()))))
}

/// Trace of a form along the layer, dispatching on its kind.
pub fn trace_form(l: &FunField, w: &Diff1) -> Result<Diff1> {
    match l.layer() {
        Some(lay) if lay.kind == LayerKind::Inseparable => trace_form_insep(l, w),
        _ => trace_form_sep(l, w),
    }
}

/// Checks Tr(dlog β) = dlog N(β) for a nonzero β.
pub fn verify_ntr(l: &FunField, beta: &FfElem) -> Result<bool> {
    let lhs = trace_form(l, &Diff1::dlog(l, beta)?)?;
    let base = l.base();
    let n = base.from_ratfun(norm_ff(l, beta));
    Ok(lhs == Diff1::dlog(&base, &n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::poly::Poly;
    use crate::ff::{Field, Rep};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rf(k: &Field, num: &[u64], den: &[u64]) -> RatFun {
        let mk = |cs: &[u64]| {
            Poly::new(
                k.clone(),
                cs.iter().map(|&c| Rep::Base(c % k.p())).collect(),
            )
        };
        RatFun::new(mk(num), mk(den)).unwrap()
    }

    /// y² = t over F_3(t)
    fn quad() -> FunField {
        let k = Field::prime(3).unwrap();
        let kf = FunField::rational(&k, "t");
        kf.extend_separable(
            "y",
            vec![rf(&k, &[0, 2], &[1]), RatFun::zero(&k), RatFun::one(&k)],
        )
        .unwrap()
    }

    fn insep(p: u64) -> FunField {
        let k = Field::prime(p).unwrap();
        let kf = FunField::rational(&k, "t");
        kf.extend_inseparable("u", RatFun::var(&k)).unwrap()
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

    #[test]
    fn norm_and_trace_examples() {
        let l = quad();
        let k = l.constants().clone();
        let y = l.gen_elem().unwrap();
        // N(y) = −t, Tr(y) = 0
        assert_eq!(norm_ff(&l, &y), rf(&k, &[0, 2], &[1]));
        assert!(trace_ff(&l, &y).is_zero());
        // constants: N(c) = c^{[L:K]}, Tr(c) = [L:K]·c
        let c = l.from_ratfun(rf(&k, &[2], &[1]));
        assert_eq!(norm_ff(&l, &c), rf(&k, &[4], &[1]));
        assert_eq!(trace_ff(&l, &c), rf(&k, &[4], &[1]));
        // inseparable: N(u) = t over F_2 and F_3
        for p in [2, 3] {
            let li = insep(p);
            let u = li.gen_elem().unwrap();
            assert_eq!(norm_ff(&li, &u), RatFun::var(li.constants()));
            assert!(trace_ff(&li, &u).is_zero());
        }
        // multiplicativity of N, additivity of Tr
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let a = random_elem(&l, &mut rng);
            let b = random_elem(&l, &mut rng);
            assert_eq!(norm_ff(&l, &l.mul(&a, &b)), norm_ff(&l, &a).mul(&norm_ff(&l, &b)));
            assert_eq!(
                trace_ff(&l, &l.add(&a, &b)),
                trace_ff(&l, &a).add(&trace_ff(&l, &b))
            );
        }
    }

    #[test]
    fn trace_form_is_base_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for l in [quad(), insep(3)] {
            let base = l.base();
            for _ in 0..10 {
                let f = random_elem(&l, &mut rng);
                let g = random_elem(&l, &mut rng);
                let c = random_elem(&base, &mut rng).coords()[0].clone();
                let wf = Diff1::new(&l, f.clone());
                let wg = Diff1::new(&l, g.clone());
                let lhs = trace_form(&l, &wf.scale(&l.from_ratfun(c.clone())).add(&wg).unwrap())
                    .unwrap();
                let rhs = trace_form(&l, &wf)
                    .unwrap()
                    .scale(&base.from_ratfun(c))
                    .add(&trace_form(&l, &wg).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn trace_after_restriction_is_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        // separable: Tr(res η) = [L:K]·η; inseparable: res = 0 and p·η = 0
        for l in [quad(), insep(3)] {
            let base = l.base();
            let d = crate::derham::field::nat_rep(base.constants(), l.deg() as u64);
            for _ in 0..10 {
                let eta = Diff1::new(&base, random_elem(&base, &mut rng));
                let res = Diff1::res_from_base(&l, &eta).unwrap();
                let back = trace_form(&l, &res).unwrap();
                assert_eq!(back, eta.scale(&base.from_ratfun(RatFun::constant(
                    base.constants(),
                    d.clone(),
                ))));
            }
        }
    }

    #[test]
    fn trace_commutes_with_d() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for l in [quad(), insep(2), insep(3)] {
            let base = l.base();
            for _ in 0..10 {
                let x = random_elem(&l, &mut rng);
                let lhs = trace_form(&l, &Diff1::d(&l, &x)).unwrap();
                let rhs = Diff1::d(&base, &base.from_ratfun(trace_ff(&l, &x)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn ntr_examples_and_random() {
        // Tr(dlog y) = dt/t for y² = t over F_3
        let l = quad();
        let base = l.base();
        let y = l.gen_elem().unwrap();
        let tr = trace_form(&l, &Diff1::dlog(&l, &y).unwrap()).unwrap();
        assert_eq!(tr, Diff1::dlog(&base, &base.t_elem()).unwrap());
        // Tr(dlog u) = dlog a for u^p = a
        for p in [2, 3] {
            let li = insep(p);
            let b = li.base();
            let u = li.gen_elem().unwrap();
            let tr = trace_form_insep(&li, &Diff1::dlog(&li, &u).unwrap()).unwrap();
            assert_eq!(tr, Diff1::dlog(&b, &b.t_elem()).unwrap());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for l in [quad(), insep(2), insep(3)] {
            let mut checked = 0;
            while checked < 15 {
                let beta = random_elem(&l, &mut rng);
                if l.is_zero(&beta) {
                    continue;
                }
                assert!(verify_ntr(&l, &beta).unwrap());
                checked += 1;
            }
        }
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let l = quad();
        let li = insep(3);
        let w = Diff1::new(&l, l.one());
        let wi = Diff1::new(&li, li.one());
        assert!(matches!(
            trace_form_insep(&l, &w),
            Err(Error::NotPurelyInseparable)
        ));
        assert!(matches!(
            trace_form_sep(&li, &wi),
            Err(Error::InseparableInput)
        ));
        assert!(matches!(
            trace_form_sep(&li, &w),
            Err(Error::MismatchedCarriers)
        ));
    }

    /// Converts an element of K(u), u^p = t, between the insep-layer
    /// coordinate view over K = F_q(t) and the rational view F_q(u).
    fn to_u_rational(m: &FunField, urat: &FunField, x: &FfElem) -> RatFun {
        let up = RatFun::var(urat.constants()).pow(m.p() as u32);
        let mut out = RatFun::zero(urat.constants());
        let u = RatFun::var(urat.constants());
        for (i, c) in x.coords().iter().enumerate() {
            out = out.add(&c.substitute(&up).unwrap().mul(&u.pow(i as u32)));
        }
        out
    }

    fn to_insep_coords(m: &FunField, g: &RatFun) -> FfElem {
        // g = N/D = N·D^{p−1}/D^p; D^p is a p-th power, a polynomial in t
        let p = m.p() as usize;
        let k = m.constants().clone();
        let mut num = g.num().clone();
        for _ in 0..p - 1 {
            num = num.mul(g.den());
        }
        let dp = {
            let root = RatFun::new(g.den().clone(), Poly::constant(&k, k.one_rep()))
                .unwrap()
                .pow(p as u32);
            // coefficients of D^p sit at u^{pj}; re-read them at t^j
            let cs: Vec<Rep> = (0..=root.num().degree().unwrap_or(0) / p)
                .map(|j| root.num().coeff(j * p))
                .collect();
            Poly::new(k.clone(), cs)
        };
        let mut coords = Vec::with_capacity(p);
        for i in 0..p {
            let cs: Vec<Rep> = (0..)
                .map(|j| j * p + i)
                .take_while(|&idx| idx <= num.degree().unwrap_or(0))
                .map(|idx| num.coeff(idx))
                .collect();
            coords.push(RatFun::new(Poly::new(k.clone(), cs), dp.clone()).unwrap());
        }
        m.from_coords(coords).unwrap()
    }

    #[test]
    fn transitivity_through_mixed_tower() {
        // K = F_3(t) ⊂ M = K(u), u³ = t ⊂ L = M(y), y² = u + 1, with M
        // re-presented as the rational field F_3(u)
        let k3 = Field::prime(3).unwrap();
        let kf = FunField::rational(&k3, "t");
        let m = kf.extend_inseparable("u", RatFun::var(&k3)).unwrap();
        let urat = FunField::rational(&k3, "u");
        let lf = urat
            .extend_separable(
                "y",
                vec![
                    rf(&k3, &[2, 2], &[1]), // −(u + 1)
                    RatFun::zero(&k3),
                    RatFun::one(&k3),
                ],
            )
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut checked = 0;
        while checked < 10 {
            let beta = random_elem(&lf, &mut rng);
            if lf.is_zero(&beta) {
                continue;
            }
            // composite norm N_{M/K}(N_{L/M}(β)) against the composite
            // trace Tr_{M/K}(Tr_{L/M}(dlog β))
            let n_lm = norm_ff(&lf, &beta);
            let n_lk = norm_ff(&m, &to_insep_coords(&m, &n_lm));
            let step = trace_form(&lf, &Diff1::dlog(&lf, &beta).unwrap()).unwrap();
            let step_m = Diff1::new(&m, to_insep_coords(&m, &step.coeff().coords()[0]));
            let down = trace_form(&m, &step_m).unwrap();
            assert_eq!(
                down,
                Diff1::dlog(&kf, &kf.from_ratfun(n_lk)).unwrap()
            );
            checked += 1;
        }
        // and d-commutation through the tower: Tr(d x) = d(Tr x)
        for _ in 0..10 {
            let x = random_elem(&lf, &mut rng);
            let step = trace_form(&lf, &Diff1::d(&lf, &x)).unwrap();
            let step_m = Diff1::new(&m, to_insep_coords(&m, &step.coeff().coords()[0]));
            let down = trace_form(&m, &step_m).unwrap();
            let tr_x = to_insep_coords(&m, &trace_ff(&lf, &x));
            let composite = kf.from_ratfun(trace_ff(&m, &tr_x));
            assert_eq!(down, Diff1::d(&kf, &composite));
        }
        // round-trip of the coordinate conversions
        for _ in 0..10 {
            let x = random_elem(&m, &mut rng);
            assert_eq!(to_insep_coords(&m, &to_u_rational(&m, &urat, &x)), x);
        }
    }
}
