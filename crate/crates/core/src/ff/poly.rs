//! Dense univariate polynomials over a tower field: division, gcds,
//! modular exponentiation, and the irreducibility machinery used for layer
//! construction.

use super::{Field, Rep};
use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;
use std::fmt;

/// Coefficients low degree first, trailing zeros trimmed; the zero
/// polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Rep>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Rep>) -> Self {
        while coeffs.last().map(|c| field.is_zero(c)).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: &Field) -> Self {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: &Field, c: Rep) -> Self {
        Poly::new(field.clone(), vec![c])
    }

    pub fn x(field: &Field) -> Self {
        Poly::new(field.clone(), vec![field.zero_rep(), field.one_rep()])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rep] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rep {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero_rep())
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs
            .last()
            .map(|c| *c == self.field.one_rep())
            .unwrap_or(false)
    }

    pub fn leading(&self) -> Option<&Rep> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let f = &self.field;
        let v = (0..n)
            .map(|i| f.add(&self.coeff(i), &other.coeff(i)))
            .collect();
        Poly::new(f.clone(), v)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly {
            field: f.clone(),
            coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut v = vec![f.zero_rep(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = f.mul(a, b);
                v[i + j] = f.add(&v[i + j], &t);
            }
        }
        Poly::new(f.clone(), v)
    }

    pub fn scale(&self, c: &Rep) -> Poly {
        let f = &self.field;
        Poly::new(
            f.clone(),
            self.coeffs.iter().map(|a| f.mul(a, c)).collect(),
        )
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let f = &self.field;
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(d.leading().unwrap())?;
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![f.zero_rep(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if f.is_zero(&rem[i]) {
                continue;
            }
            let c = f.mul(&rem[i], &lead_inv);
            quot[i - dd] = c.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = f.mul(&c, dc);
                rem[i - dd + j] = f.sub(&rem[i - dd + j], &t);
            }
        }
        Ok((Poly::new(f.clone(), quot), Poly::new(f.clone(), rem)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    pub fn monic(&self) -> Result<Poly> {
        let lead = self.leading().ok_or(Error::ZeroPolynomial)?;
        let inv = self.field.inv(lead)?;
        Ok(self.scale(&inv))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            a.monic()
        }
    }

    /// Returns (g, s, t) with s·self + t·other = g. g is not normalized.
    pub fn extended_gcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::constant(f, f.one_rep()), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::constant(f, f.one_rep()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        Ok((r0, s0, t0))
    }

    pub fn eval(&self, x: &Rep) -> Rep {
        let f = &self.field;
        let mut acc = f.zero_rep();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        if self.coeffs.len() <= 1 {
            return Poly::zero(f);
        }
        let v = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = f.from_u64((i as u64) + 1);
                f.mul(&k, c)
            })
            .collect();
        Poly::new(f.clone(), v)
    }

    /// self^e mod m, with an arbitrary-precision exponent (q^d grows past
    /// machine words quickly).
    pub fn modpow(&self, e: &BigUint, m: &Poly) -> Result<Poly> {
        let mut base = self.rem(m)?;
        let mut acc = Poly::constant(&self.field, self.field.one_rep());
        let mut e = e.clone();
        while !e.is_zero() {
            if e.bit(0) {
                acc = acc.mul(&base).rem(m)?;
            }
            e >>= 1;
            if !e.is_zero() {
                base = base.mul(&base).rem(m)?;
            }
        }
        Ok(acc)
    }

    /// Rabin irreducibility test: f monic of degree n over F_Q is
    /// irreducible iff T^(Q^n) ≡ T (mod f) and gcd(T^(Q^(n/l)) − T, f) = 1
    /// for every prime l | n.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = match self.monic() {
            Ok(f) => f,
            Err(_) => return false,
        };
        let q = BigUint::from(self.field.q());
        let x = Poly::x(&self.field);
        let top = x.modpow(&q.pow(n as u32), &f).unwrap();
        if top != x {
            return false;
        }
        for (l, _) in super::factor_u128(n as u128) {
            let e = q.pow((n as u128 / l) as u32);
            let xe = x.modpow(&e, &f).unwrap();
            let g = xe.sub(&x).gcd(&f).unwrap();
            if g.degree() != Some(0) {
                return false;
            }
        }
        true
    }

    pub fn random<R: Rng>(field: &Field, degree: usize, rng: &mut R) -> Poly {
        let v = (0..=degree).map(|_| field.random_rep(rng)).collect();
        Poly::new(field.clone(), v)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if self.field.is_zero(c) {
                continue;
            }
            let cs = self.field.render(c);
            let coeff = if cs.contains('+') || cs.contains('-') {
                format!("({cs})")
            } else {
                cs
            };
            terms.push(match i {
                0 => coeff,
                1 if coeff == "1" => "T".to_string(),
                1 => format!("{coeff}*T"),
                _ if coeff == "1" => format!("T^{i}"),
                _ => format!("{coeff}*T^{i}"),
            });
        }
        write!(out, "{}", terms.join("+"))
    }
}

/// Seeded search for a monic irreducible of the given degree; returns the
/// coefficient vector (low first, length degree + 1).
pub fn random_irreducible<R: Rng>(field: &Field, degree: usize, rng: &mut R) -> Result<Vec<Rep>> {
    if degree == 0 {
        return Err(Error::ZeroDegree);
    }
    loop {
        let mut coeffs: Vec<Rep> = (0..degree).map(|_| field.random_rep(rng)).collect();
        coeffs.push(field.one_rep());
        let f = Poly::new(field.clone(), coeffs.clone());
        if f.is_irreducible() {
            return Ok(coeffs);
        }
    }
}
