//! Degree-1 differential forms ω = f·ds in the canonical separating basis,
//! with d, dlog, the Cartier operator (exactness test), and the
//! inverse-Cartier ℘ = F − id on classes modulo exact forms.

use super::field::{nat_rep, FfElem, FunField, LayerKind};
use super::ratfun::RatFun;
use crate::ff::factor::factor_poly;
use crate::ff::poly::Poly;
use crate::{Error, Result};
use std::fmt;

/// f·ds where s is the owner's canonical separating element.
#[derive(Clone, PartialEq, Eq)]
pub struct Diff1 {
    field: FunField,
    coeff: FfElem,
}

impl Diff1 {
    pub fn new(field: &FunField, coeff: FfElem) -> Diff1 {
        Diff1 {
            field: field.clone(),
            coeff,
        }
    }

    pub fn zero(field: &FunField) -> Diff1 {
        Diff1::new(field, field.zero())
    }

    pub fn field(&self) -> &FunField {
        &self.field
    }

    pub fn coeff(&self) -> &FfElem {
        &self.coeff
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.coeff)
    }

    pub fn add(&self, other: &Diff1) -> Result<Diff1> {
        if self.field != other.field {
            return Err(Error::MismatchedCarriers);
        }
        Ok(Diff1::new(&self.field, self.field.add(&self.coeff, &other.coeff)))
    }

    pub fn neg(&self) -> Diff1 {
        Diff1::new(&self.field, self.field.neg(&self.coeff))
    }

    pub fn sub(&self, other: &Diff1) -> Result<Diff1> {
        self.add(&other.neg())
    }

    pub fn scale(&self, x: &FfElem) -> Diff1 {
        Diff1::new(&self.field, self.field.mul(&self.coeff, x))
    }

    /// df in the separating basis.
    pub fn d(field: &FunField, x: &FfElem) -> Diff1 {
        Diff1::new(field, field.d_ds(x))
    }

    /// df/f.
    pub fn dlog(field: &FunField, x: &FfElem) -> Result<Diff1> {
        if field.is_zero(x) {
            return Err(Error::DlogZero);
        }
        Ok(Diff1::new(field, field.div(&field.d_ds(x), x)?))
    }

    /// Restriction of a form on the rational base: coefficient embedding
    /// for t-based layers, zero for a purely inseparable layer (dt = 0).
    pub fn res_from_base(l: &FunField, eta: &Diff1) -> Result<Diff1> {
        if eta.field != l.base() {
            return Err(Error::MismatchedCarriers);
        }
        match l.layer() {
            Some(lay) if lay.kind == LayerKind::Inseparable => Ok(Diff1::zero(l)),
            _ => Ok(Diff1::new(l, l.from_ratfun(eta.coeff.coords()[0].clone()))),
        }
    }

    /// Cartier operator: with f = Σ f_i^p s^i, C(f ds) = f_{p−1} ds,
    /// computed as (−f^{(p−1)})^{1/p} — the only term of the decomposition
    /// surviving p−1 derivatives, with (p−1)! = −1.
    pub fn cartier(&self) -> Result<Diff1> {
        let p = self.field.p();
        let mut f = self.coeff.clone();
        for _ in 0..p - 1 {
            f = self.field.d_ds(&f);
        }
        let root = self.field.pth_root(&self.field.neg(&f))?;
        Ok(Diff1::new(&self.field, root))
    }

    /// ω is exact iff it lies in the kernel of the Cartier operator.
    pub fn is_exact(&self) -> Result<bool> {
        Ok(self.cartier()?.is_zero())
    }

    /// Equality modulo exact forms.
    pub fn equivalent(&self, other: &Diff1) -> Result<bool> {
        self.sub(other)?.is_exact()
    }

    /// The Frobenius section of the Cartier operator,
    /// F(f ds) = f^p s^{p−1} ds; on monomials F(a dlog s) = a^p dlog s,
    /// and F(a dlog b) ≡ a^p dlog b modulo exact forms for any b.
    pub fn frobenius(&self) -> Diff1 {
        let p = self.field.p();
        let fp = self.field.pow(&self.coeff, p);
        let sp = self.field.pow(&self.field.sep_elem(), p - 1);
        Diff1::new(&self.field, self.field.mul(&fp, &sp))
    }

    /// ℘ = F − id; its image together with dK spans the relation subgroup
    /// of the additive presentation.
    pub fn wp(&self) -> Diff1 {
        self.frobenius().sub(self).expect("same carrier")
    }

    /// Splits ω = reduced + d(anti) over the rational field, pulling out
    /// d-exact pieces from the polynomial part and, partial-fraction style,
    /// from every denominator power q^e with p ∤ (e − 1). Display-level
    /// canonicalization; exactness decisions go through `cartier`.
    pub fn normal_form(&self) -> Result<(Diff1, FfElem)> {
        if self.field.layer().is_some() {
            return Err(Error::UnsupportedShape(
                "normal form is implemented over the rational field".into(),
            ));
        }
        let k = self.field.constants().clone();
        let p = k.p();
        let f = &self.coeff.coords()[0];
        let (q_part, mut rem) = f.num().divrem(f.den())?;
        let mut anti = RatFun::zero(&k);
        let mut kept = RatFun::zero(&k);
        // polynomial part: c·t^i = d(c/(i+1)·t^{i+1}) unless p | i+1
        let mut kept_poly = Vec::new();
        for (i, c) in q_part.coeffs().iter().enumerate() {
            if (i as u64 + 1).is_multiple_of(p) {
                kept_poly.push(c.clone());
                continue;
            }
            kept_poly.push(k.zero_rep());
            let inv = k.inv(&nat_rep(&k, i as u64 + 1))?;
            let mut mono = vec![k.zero_rep(); i + 2];
            mono[i + 1] = k.mul(c, &inv);
            anti = anti.add(&RatFun::from_poly(Poly::new(k.clone(), mono)));
        }
        kept = kept.add(&RatFun::from_poly(Poly::new(k.clone(), kept_poly)));
        // fraction part: strip one power of each repeated factor at a time
        let mut mults = factor_poly(f.den(), 0)?;
        while let Some(pos) = mults.iter().position(|(_, e)| *e >= 2) {
            if rem.is_zero() {
                break;
            }
            let (q, e) = mults[pos].clone();
            let mut b = Poly::constant(&k, k.one_rep());
            for (i, (g, m)) in mults.iter().enumerate() {
                let reps = if i == pos { 0 } else { *m };
                for _ in 0..reps {
                    b = b.mul(g);
                }
            }
            // rem = a·q'·B + q·R₁ with a determined mod q
            let qb = q.derivative().mul(&b).rem(&q)?;
            let (g, s, _) = qb.extended_gcd(&q)?;
            let ginv = k.inv(&g.coeff(0))?;
            let a = rem.mul(&s.scale(&ginv)).rem(&q)?;
            let r1 = {
                let num = rem.sub(&a.mul(&q.derivative()).mul(&b));
                num.divrem(&q)?.0
            };
            let mut qe1 = Poly::constant(&k, k.one_rep());
            for _ in 0..e - 1 {
                qe1 = qe1.mul(&q);
            }
            if (e as u64 - 1).is_multiple_of(p) {
                // a·q'/q^e is not reducible by an exact form; keep it
                kept = kept.add(&RatFun::new(a.mul(&q.derivative()), qe1.mul(&q))?);
                rem = r1;
            } else {
                // a·q'/q^e = d(c·a·q^{1−e}) − c·a'·q^{1−e}, c = (1−e)⁻¹
                let c = k.inv(&nat_rep(&k, (p + 1).wrapping_sub(e as u64 % p) % p))?;
                anti = anti.add(&RatFun::new(a.scale(&c), qe1.clone())?);
                rem = r1.sub(&a.derivative().scale(&c).mul(&b));
            }
            mults[pos].1 = e - 1;
            // denominator dropped one factor of q
        }
        let mut den = Poly::constant(&k, k.one_rep());
        for (g, m) in &mults {
            for _ in 0..*m {
                den = den.mul(g);
            }
        }
        if !rem.is_zero() {
            kept = kept.add(&RatFun::new(rem, den)?);
        }
        let reduced = Diff1::new(&self.field, self.field.from_ratfun(kept));
        let anti_elem = self.field.from_ratfun(anti);
        debug_assert!({
            let replay = reduced
                .add(&Diff1::d(&self.field, &anti_elem))
                .unwrap();
            replay == *self
        });
        Ok((reduced, anti_elem))
    }
}

impl fmt::Debug for Diff1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) d{}",
            self.field.render(&self.coeff),
            self.field.sep_var()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{Field, Rep};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rat(p: u64) -> FunField {
        FunField::rational(&Field::prime(p).unwrap(), "t")
    }

    fn rf(k: &Field, num: &[u64], den: &[u64]) -> RatFun {
        let mk = |cs: &[u64]| {
            Poly::new(
                k.clone(),
                cs.iter().map(|&c| Rep::Base(c % k.p())).collect(),
            )
        };
        RatFun::new(mk(num), mk(den)).unwrap()
    }

    fn random_elem(kf: &FunField, rng: &mut ChaCha8Rng) -> FfElem {
        let k = kf.constants().clone();
        let coords = (0..kf.deg())
            .map(|_| loop {
                let num = Poly::random(&k, rng.gen_range(0..4), rng);
                let den = Poly::random(&k, rng.gen_range(0..3), rng);
                if !den.is_zero() {
                    return RatFun::new(num, den).unwrap();
                }
            })
            .collect();
        kf.from_coords(coords).unwrap()
    }

    #[test]
    fn d_and_dlog_basics() {
        let kf = rat(3);
        let t = kf.t_elem();
        // dlog t = (1/t) dt
        let dl = Diff1::dlog(&kf, &t).unwrap();
        assert_eq!(dl, Diff1::new(&kf, kf.inv(&t).unwrap()));
        // d(t³) = 0
        assert!(Diff1::d(&kf, &kf.pow(&t, 3)).is_zero());
        // dlog(t²(t+1)) = (2/t + 1/(t+1)) dt over F_3
        let k = kf.constants().clone();
        let x = kf.from_ratfun(rf(&k, &[0, 0, 1, 1], &[1])); // t³ + t² = t²(t+1)
        let expect = rf(&k, &[2], &[0, 1]).add(&rf(&k, &[1], &[1, 1]));
        assert_eq!(
            Diff1::dlog(&kf, &x).unwrap(),
            Diff1::new(&kf, kf.from_ratfun(expect))
        );
        // Leibniz: dlog(fg) = dlog f + dlog g
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let f = random_elem(&kf, &mut rng);
            let g = random_elem(&kf, &mut rng);
            if kf.is_zero(&f) || kf.is_zero(&g) {
                continue;
            }
            let lhs = Diff1::dlog(&kf, &kf.mul(&f, &g)).unwrap();
            let rhs = Diff1::dlog(&kf, &f)
                .unwrap()
                .add(&Diff1::dlog(&kf, &g).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
        assert!(Diff1::dlog(&kf, &kf.zero()).is_err());
    }

    #[test]
    fn cartier_examples() {
        for p in [2u64, 3, 5] {
            let kf = rat(p);
            let t = kf.t_elem();
            // C(dt) = 0
            assert!(Diff1::d(&kf, &t).cartier().unwrap().is_zero());
            assert!(Diff1::d(&kf, &t).is_exact().unwrap());
            // C(t^{p−1} dt) = dt
            let w = Diff1::new(&kf, kf.pow(&t, p - 1));
            assert_eq!(w.cartier().unwrap(), Diff1::new(&kf, kf.one()));
            // C(dlog t) = dlog t, not exact
            let dl = Diff1::dlog(&kf, &t).unwrap();
            assert_eq!(dl.cartier().unwrap(), dl);
            assert!(!dl.is_exact().unwrap());
        }
    }

    #[test]
    fn cartier_semilinearity_and_d() {
        let kf = rat(3);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..25 {
            let f = random_elem(&kf, &mut rng);
            let g = random_elem(&kf, &mut rng);
            // C∘d = 0
            assert!(Diff1::d(&kf, &f).cartier().unwrap().is_zero());
            // additive
            let a = Diff1::new(&kf, f.clone());
            let b = Diff1::new(&kf, g.clone());
            assert_eq!(
                a.add(&b).unwrap().cartier().unwrap(),
                a.cartier().unwrap().add(&b.cartier().unwrap()).unwrap()
            );
            // C(f^p ω) = f·C(ω)
            let fp = kf.pow(&f, 3);
            assert_eq!(
                b.scale(&fp).cartier().unwrap(),
                b.cartier().unwrap().scale(&f)
            );
        }
    }

    #[test]
    fn cartier_on_extension_layers() {
        // separable y² = t over F_3 and inseparable u³ = t
        let k3 = Field::prime(3).unwrap();
        let base = FunField::rational(&k3, "t");
        let quad = base
            .extend_separable(
                "y",
                vec![
                    rf(&k3, &[0, 2], &[1]),
                    RatFun::zero(&k3),
                    RatFun::one(&k3),
                ],
            )
            .unwrap();
        let insep = base
            .extend_inseparable("u", RatFun::var(&k3))
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kf in [quad, insep] {
            for _ in 0..10 {
                let f = random_elem(&kf, &mut rng);
                assert!(Diff1::d(&kf, &f).cartier().unwrap().is_zero());
                if !kf.is_zero(&f) {
                    let dl = Diff1::dlog(&kf, &f).unwrap();
                    assert_eq!(dl.cartier().unwrap(), dl);
                }
            }
        }
    }

    #[test]
    fn frobenius_and_wp() {
        let kf = rat(3);
        let t = kf.t_elem();
        // F(dlog t) = dlog t, so ℘(dlog t) = 0 exactly
        let dl = Diff1::dlog(&kf, &t).unwrap();
        assert_eq!(dl.frobenius(), dl);
        assert!(dl.wp().is_zero());
        // F(t dt) = t^{2p−1} dt
        let w = Diff1::new(&kf, t.clone());
        assert_eq!(w.frobenius(), Diff1::new(&kf, kf.pow(&t, 5)));
        // F(a dlog b) ≡ a^p dlog b mod exact
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..15 {
            let a = random_elem(&kf, &mut rng);
            let b = random_elem(&kf, &mut rng);
            if kf.is_zero(&b) {
                continue;
            }
            let w = Diff1::dlog(&kf, &b).unwrap().scale(&a);
            let expect = Diff1::dlog(&kf, &b).unwrap().scale(&kf.pow(&a, 3));
            assert!(w.frobenius().equivalent(&expect).unwrap());
            // F is a section of the Cartier operator
            assert_eq!(w.frobenius().cartier().unwrap(), w);
            let df = Diff1::d(&kf, &a);
            assert_eq!(df.frobenius().cartier().unwrap(), df);
        }
    }

    #[test]
    fn normal_form_reduces() {
        let kf = rat(3);
        let k = kf.constants().clone();
        let t = kf.t_elem();
        // t dt = d(t²/2): fully exact
        let (red, anti) = Diff1::new(&kf, t.clone()).normal_form().unwrap();
        assert!(red.is_zero());
        assert!(!kf.is_zero(&anti));
        // dlog t is already reduced
        let dl = Diff1::dlog(&kf, &t).unwrap();
        let (red, anti) = dl.normal_form().unwrap();
        assert_eq!(red, dl);
        assert!(kf.is_zero(&anti));
        // 1/t² dt = d(−1/t)
        let w = Diff1::new(&kf, kf.from_ratfun(rf(&k, &[1], &[0, 0, 1])));
        let (red, _) = w.normal_form().unwrap();
        assert!(red.is_zero());
        // random replay: ω = reduced + d(anti), with matching Cartier
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let f = random_elem(&kf, &mut rng);
            let w = Diff1::new(&kf, f);
            let (red, anti) = w.normal_form().unwrap();
            let replay = red.add(&Diff1::d(&kf, &anti)).unwrap();
            assert_eq!(replay, w);
            assert_eq!(red.cartier().unwrap(), w.cartier().unwrap());
        }
    }
}
