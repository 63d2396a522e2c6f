//! Rational functions in one variable over a finite constants field, kept
//! as reduced fractions with monic denominators. The Frobenius
//! decomposition f = Σ f_i^p t^i (coefficient-wise q/p-th powers plus
//! exponent division) drives p-th roots and the Cartier operator.

use crate::ff::poly::Poly;
use crate::ff::{Field, Rep};
use crate::{Error, Result};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct RatFun {
    field: Field,
    num: Poly,
    den: Poly,
}

impl RatFun {
    /// Reduces and normalizes the denominator to be monic.
    pub fn new(num: Poly, den: Poly) -> Result<RatFun> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = num.field().clone();
        if num.is_zero() {
            return Ok(RatFun {
                field: field.clone(),
                num,
                den: Poly::constant(&field, field.one_rep()),
            });
        }
        let g = num.gcd(&den)?;
        let num = num.divrem(&g)?.0;
        let den = den.divrem(&g)?.0;
        let lead = den.leading().expect("nonzero denominator").clone();
        let inv = field.inv(&lead)?;
        Ok(RatFun {
            field,
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn from_poly(num: Poly) -> RatFun {
        let field = num.field().clone();
        let den = Poly::constant(&field, field.one_rep());
        RatFun { field, num, den }
    }

    pub fn zero(field: &Field) -> RatFun {
        RatFun::from_poly(Poly::zero(field))
    }

    pub fn one(field: &Field) -> RatFun {
        RatFun::from_poly(Poly::constant(field, field.one_rep()))
    }

    pub fn constant(field: &Field, c: Rep) -> RatFun {
        RatFun::from_poly(Poly::constant(field, c))
    }

    /// The generator t.
    pub fn var(field: &Field) -> RatFun {
        RatFun::from_poly(Poly::x(field))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().is_none_or(|d| d == 0) && self.den.degree() == Some(0)
    }

    pub fn as_constant(&self) -> Option<Rep> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        RatFun::new(num, self.den.mul(&other.den)).expect("nonzero denominator")
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            field: self.field.clone(),
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominator")
    }

    pub fn inv(&self) -> Result<RatFun> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn scale(&self, c: &Rep) -> RatFun {
        RatFun::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    pub fn pow(&self, e: u32) -> RatFun {
        let mut out = RatFun::one(&self.field);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// d/dt by the quotient rule.
    pub fn derivative(&self) -> RatFun {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        RatFun::new(num, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    /// Frobenius decomposition: self = Σ_{i<p} out_i^p · t^i.
    pub fn frobenius_decompose(&self) -> Result<Vec<RatFun>> {
        let p = self.field.p() as usize;
        let root_exp = self.field.q() / self.field.p() as u128;
        // N/D = N·D^{p-1} / D^p, and D^p has only t^{pj} monomials
        let mut m = self.num.clone();
        for _ in 0..p - 1 {
            m = m.mul(&self.den);
        }
        let mut out = Vec::with_capacity(p);
        for i in 0..p {
            let mut coeffs = Vec::new();
            let mut j = 0;
            while j * p + i <= m.degree().unwrap_or(0) {
                let c = m.coeff(j * p + i);
                coeffs.push(self.field.pow(&c, root_exp));
                j += 1;
            }
            let s = Poly::new(self.field.clone(), coeffs);
            out.push(RatFun::new(s, self.den.clone())?);
        }
        Ok(out)
    }

    /// The unique g with g^p = self, if one exists.
    pub fn pth_root(&self) -> Result<RatFun> {
        let parts = self.frobenius_decompose()?;
        if parts.iter().skip(1).any(|x| !x.is_zero()) {
            return Err(Error::ShapeMismatch(
                "rational function is not a p-th power".into(),
            ));
        }
        Ok(parts[0].clone())
    }

    /// Evaluates the fraction at another rational function (substitution of
    /// the variable).
    pub fn substitute(&self, g: &RatFun) -> Result<RatFun> {
        let eval = |poly: &Poly| -> RatFun {
            let mut acc = RatFun::zero(&self.field);
            for c in poly.coeffs().iter().rev() {
                acc = acc.mul(g).add(&RatFun::constant(&self.field, c.clone()));
            }
            acc
        };
        eval(&self.num).div(&eval(&self.den))
    }

    pub fn render(&self, var: &str) -> String {
        let show = |poly: &Poly| {
            let mut terms = Vec::new();
            for (i, c) in poly.coeffs().iter().enumerate() {
                if self.field.is_zero(c) {
                    continue;
                }
                let cs = self.field.render(c);
                let t = match i {
                    0 => cs,
                    1 if cs == "1" => var.to_string(),
                    1 => format!("{cs}*{var}"),
                    _ if cs == "1" => format!("{var}^{i}"),
                    _ => format!("{cs}*{var}^{i}"),
                };
                terms.push(t);
            }
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            }
        };
        if self.den.degree() == Some(0) {
            show(&self.num)
        } else {
            format!("({})/({})", show(&self.num), show(&self.den))
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3t(num: &[u64], den: &[u64]) -> RatFun {
        let f3 = Field::prime(3).unwrap();
        let mk = |cs: &[u64]| {
            Poly::new(
                f3.clone(),
                cs.iter().map(|&c| Rep::Base(c % 3)).collect(),
            )
        };
        RatFun::new(mk(num), mk(den)).unwrap()
    }

    #[test]
    fn reduction_and_arithmetic() {
        // (t² - 1)/(t - 1) = t + 1
        let x = f3t(&[2, 0, 1], &[2, 1]);
        assert_eq!(x, f3t(&[1, 1], &[1]));
        let t = f3t(&[0, 1], &[1]);
        assert_eq!(t.mul(&t.inv().unwrap()), RatFun::one(t.field()));
        assert!(t.sub(&t).is_zero());
        // 1/t + 1/(t+1) = (2t + 1)/(t² + t)
        let a = f3t(&[1], &[0, 1]);
        let b = f3t(&[1], &[1, 1]);
        assert_eq!(a.add(&b), f3t(&[1, 2], &[0, 1, 1]));
    }

    #[test]
    fn derivative_rules() {
        let t = f3t(&[0, 1], &[1]);
        // d(t³) = 0 in characteristic 3
        assert!(t.pow(3).derivative().is_zero());
        // d(1/t) = -1/t²
        assert_eq!(
            t.inv().unwrap().derivative(),
            f3t(&[2], &[0, 0, 1])
        );
        // Leibniz on a random-ish pair
        let a = f3t(&[1, 2, 1], &[0, 1]);
        let b = f3t(&[2, 1], &[1, 0, 1]);
        assert_eq!(
            a.mul(&b).derivative(),
            a.derivative().mul(&b).add(&a.mul(&b.derivative()))
        );
    }

    #[test]
    fn frobenius_decompose_roundtrip() {
        let t = f3t(&[0, 1], &[1]);
        for x in [
            f3t(&[1, 2, 0, 1, 2, 2, 1], &[2, 0, 0, 1]),
            f3t(&[1], &[0, 1]),
            f3t(&[0, 0, 2], &[1, 1]),
        ] {
            let parts = x.frobenius_decompose().unwrap();
            assert_eq!(parts.len(), 3);
            let mut back = RatFun::zero(x.field());
            for (i, s) in parts.iter().enumerate() {
                back = back.add(&s.pow(3).mul(&t.pow(i as u32)));
            }
            assert_eq!(back, x);
        }
    }

    #[test]
    fn pth_root_examples() {
        let t = f3t(&[0, 1], &[1]);
        let x = f3t(&[1, 2], &[0, 0, 1]);
        assert_eq!(x.pow(3).pth_root().unwrap(), x);
        assert!(t.pth_root().is_err());
        // over F_9 the constants get q/p-th powered
        let f9 = Field::make_field(3, &[2], 0).unwrap();
        let g = RatFun::constant(&f9, f9.gen_rep());
        assert_eq!(g.pow(3).pth_root().unwrap(), g);
    }

    #[test]
    fn substitution() {
        // f(t) = 1/(t+1) at t = u² gives 1/(u²+1)
        let f = f3t(&[1], &[1, 1]);
        let u2 = f3t(&[0, 0, 1], &[1]);
        assert_eq!(f.substitute(&u2).unwrap(), f3t(&[1], &[1, 0, 1]));
    }
}
