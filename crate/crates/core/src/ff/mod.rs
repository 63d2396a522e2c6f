//! Finite fields as explicit extension towers. A field is either a prime
//! field F_p or a field below extended by a monic irreducible polynomial.
//! Elements are nested coefficient vectors of fixed length, so structural
//! equality is canonical equality.

pub mod embed;
pub mod factor;
pub mod poly;

use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub use embed::{tensor_decompose, Embedding, TensorComponent};
pub use factor::factor_poly;
pub use poly::Poly;

/// Element data: a base residue, or a coefficient vector over the layer
/// below of length exactly the relative degree (low degree first). The
/// fixed length makes derived Eq/Ord/Hash canonical.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rep {
    Base(u64),
    Ext(Vec<Rep>),
}

pub struct Layer {
    pub below: Field,
    pub var: String,
    /// Monic irreducible over `below`, low degree first, length rel_deg + 1.
    pub modulus: Vec<Rep>,
}

impl Layer {
    pub fn rel_deg(&self) -> usize {
        self.modulus.len() - 1
    }
}

pub struct FieldData {
    pub p: u64,
    pub layer: Option<Layer>,
    pub abs_deg: u32,
    pub q: u128,
}

#[derive(Clone)]
pub struct Field(pub(crate) Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.p != other.0.p || self.0.abs_deg != other.0.abs_deg {
            return false;
        }
        match (&self.0.layer, &other.0.layer) {
            (None, None) => true,
            (Some(a), Some(b)) => a.modulus == b.modulus && a.below == b.below,
            _ => false,
        }
    }
}
impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.abs_deg.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut degs = Vec::new();
        let mut cur = self;
        loop {
            degs.push(cur.0.abs_deg);
            match &cur.0.layer {
                Some(l) => cur = &l.below,
                None => break,
            }
        }
        let parts: Vec<String> = degs
            .iter()
            .map(|&d| {
                if d == 1 {
                    format!("GF({})", self.0.p)
                } else {
                    format!("GF({}^{})", self.0.p, d)
                }
            })
            .collect();
        // the chain always ends at GF(p); drop that suffix unless it is all
        if parts.len() > 1 {
            write!(f, "{}", parts[..parts.len() - 1].join("/"))
        } else {
            write!(f, "{}", parts[0])
        }
    }
}

// wire format: (p, [(var, modulus), ...]) from the bottom layer up
impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut layers = Vec::new();
        let mut cur = self.clone();
        while let Some(l) = cur.layer() {
            layers.push((l.var.clone(), l.modulus.clone()));
            let below = l.below.clone();
            cur = below;
        }
        layers.reverse();
        (self.p(), layers).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (p, layers): (u64, Vec<(String, Vec<Rep>)>) = Deserialize::deserialize(d)?;
        let mut f = Field::prime(p).map_err(serde::de::Error::custom)?;
        for (var, modulus) in layers {
            f = f.extend(&var, modulus).map_err(serde::de::Error::custom)?;
        }
        Ok(f)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

const LAYER_VARS: [&str; 4] = ["x", "y", "z", "w"];

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field(Arc::new(FieldData {
            p,
            layer: None,
            abs_deg: 1,
            q: p as u128,
        })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn q(&self) -> u128 {
        self.0.q
    }

    pub fn abs_deg(&self) -> u32 {
        self.0.abs_deg
    }

    pub fn layer(&self) -> Option<&Layer> {
        self.0.layer.as_ref()
    }

    pub fn below(&self) -> Option<&Field> {
        self.0.layer.as_ref().map(|l| &l.below)
    }

    /// Extends by a monic modulus over `self`; irreducibility is checked.
    pub fn extend(&self, var: &str, modulus: Vec<Rep>) -> Result<Field> {
        let poly = Poly::new(self.clone(), modulus.clone());
        match poly.degree() {
            Some(d) if d >= 1 => {}
            _ => return Err(Error::ZeroDegree),
        }
        if !poly.is_monic() {
            return Err(Error::UnsupportedShape("modulus must be monic".into()));
        }
        if !poly.is_irreducible() {
            return Err(Error::UnsupportedShape(
                "modulus must be irreducible".into(),
            ));
        }
        self.extend_unchecked(var, modulus)
    }

    pub(crate) fn extend_unchecked(&self, var: &str, modulus: Vec<Rep>) -> Result<Field> {
        let rel = modulus.len() - 1;
        let q = (1..rel)
            .try_fold(self.0.q, |acc, _| acc.checked_mul(self.0.q))
            .ok_or(Error::BoundExceeded {
                size: u128::MAX,
                bound: u128::MAX,
            })?;
        Ok(Field(Arc::new(FieldData {
            p: self.0.p,
            abs_deg: self.0.abs_deg * rel as u32,
            q,
            layer: Some(Layer {
                below: self.clone(),
                var: var.to_string(),
                modulus,
            }),
        })))
    }

    /// Builds a tower over F_p with the given relative layer degrees.
    /// Layer polynomials come from a seeded random irreducible search, so
    /// the result is deterministic in (p, degrees, seed).
    pub fn make_field(p: u64, degrees: &[u32], seed: u64) -> Result<Field> {
        let mut field = Field::prime(p)?;
        let mut var_idx = 0usize;
        for (i, &d) in degrees.iter().enumerate() {
            if d == 0 {
                return Err(Error::ZeroDegree);
            }
            if d == 1 {
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(
                seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
                    .wrapping_add(i as u64),
            );
            let modulus = poly::random_irreducible(&field, d as usize, &mut rng)?;
            let var = if var_idx < LAYER_VARS.len() {
                LAYER_VARS[var_idx].to_string()
            } else {
                format!("x{var_idx}")
            };
            field = field.extend_unchecked(&var, modulus)?;
            var_idx += 1;
        }
        Ok(field)
    }

    pub fn zero_rep(&self) -> Rep {
        match &self.0.layer {
            None => Rep::Base(0),
            Some(l) => Rep::Ext(vec![l.below.zero_rep(); l.rel_deg()]),
        }
    }

    pub fn from_u64(&self, c: u64) -> Rep {
        match &self.0.layer {
            None => Rep::Base(c % self.0.p),
            Some(l) => {
                let mut v = vec![l.below.zero_rep(); l.rel_deg()];
                v[0] = l.below.from_u64(c);
                Rep::Ext(v)
            }
        }
    }

    pub fn one_rep(&self) -> Rep {
        self.from_u64(1)
    }

    /// The class of the top layer variable (the tower generator); for a
    /// prime field this is just 1.
    pub fn gen_rep(&self) -> Rep {
        match &self.0.layer {
            None => Rep::Base(1.min(self.0.p - 1)),
            Some(l) => {
                let mut v = vec![l.below.zero_rep(); l.rel_deg()];
                if l.rel_deg() >= 2 {
                    v[1] = l.below.one_rep();
                } else {
                    // degree-1 layer cannot happen (rel_deg >= 2 enforced)
                    v[0] = l.below.one_rep();
                }
                Rep::Ext(v)
            }
        }
    }

    pub fn is_zero(&self, a: &Rep) -> bool {
        match a {
            Rep::Base(c) => *c == 0,
            Rep::Ext(v) => {
                let below = &self.0.layer.as_ref().unwrap().below;
                v.iter().all(|c| below.is_zero(c))
            }
        }
    }

    pub fn add(&self, a: &Rep, b: &Rep) -> Rep {
        match (&self.0.layer, a, b) {
            (None, Rep::Base(x), Rep::Base(y)) => Rep::Base((x + y) % self.0.p),
            (Some(l), Rep::Ext(u), Rep::Ext(v)) => Rep::Ext(
                u.iter()
                    .zip(v)
                    .map(|(x, y)| l.below.add(x, y))
                    .collect(),
            ),
            _ => panic!("rep does not match field shape"),
        }
    }

    pub fn neg(&self, a: &Rep) -> Rep {
        match (&self.0.layer, a) {
            (None, Rep::Base(x)) => Rep::Base((self.0.p - x) % self.0.p),
            (Some(l), Rep::Ext(u)) => Rep::Ext(u.iter().map(|x| l.below.neg(x)).collect()),
            _ => panic!("rep does not match field shape"),
        }
    }

    pub fn sub(&self, a: &Rep, b: &Rep) -> Rep {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Rep, b: &Rep) -> Rep {
        match (&self.0.layer, a, b) {
            (None, Rep::Base(x), Rep::Base(y)) => {
                Rep::Base(((*x as u128 * *y as u128) % self.0.p as u128) as u64)
            }
            (Some(l), Rep::Ext(u), Rep::Ext(v)) => {
                let below = &l.below;
                let n = l.rel_deg();
                let mut prod = vec![below.zero_rep(); 2 * n - 1];
                for (i, x) in u.iter().enumerate() {
                    if below.is_zero(x) {
                        continue;
                    }
                    for (j, y) in v.iter().enumerate() {
                        let t = below.mul(x, y);
                        prod[i + j] = below.add(&prod[i + j], &t);
                    }
                }
                // reduce mod the monic modulus
                for i in (n..2 * n - 1).rev() {
                    if below.is_zero(&prod[i]) {
                        continue;
                    }
                    let c = std::mem::replace(&mut prod[i], below.zero_rep());
                    for j in 0..n {
                        let t = below.mul(&c, &l.modulus[j]);
                        prod[i - n + j] = below.sub(&prod[i - n + j], &t);
                    }
                }
                prod.truncate(n);
                Rep::Ext(prod)
            }
            _ => panic!("rep does not match field shape"),
        }
    }

    pub fn inv(&self, a: &Rep) -> Result<Rep> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        match (&self.0.layer, a) {
            (None, Rep::Base(x)) => {
                let p = BigInt::from(self.0.p);
                let e = BigInt::from(*x).extended_gcd(&p);
                debug_assert!(e.gcd.is_one());
                let inv = e.x.mod_floor(&p).to_u64().unwrap();
                Ok(Rep::Base(inv))
            }
            (Some(l), Rep::Ext(u)) => {
                let below = &l.below;
                let a_poly = Poly::new(below.clone(), u.clone());
                let m_poly = Poly::new(below.clone(), l.modulus.clone());
                let (g, s, _) = a_poly.extended_gcd(&m_poly)?;
                debug_assert_eq!(g.degree(), Some(0)); // modulus irreducible
                let lc_inv = below.inv(&g.coeffs()[0])?;
                let inv = s.scale(&lc_inv).rem(&m_poly)?;
                let mut v = inv.coeffs().to_vec();
                v.resize(l.rel_deg(), below.zero_rep());
                Ok(Rep::Ext(v))
            }
            _ => panic!("rep does not match field shape"),
        }
    }

    pub fn pow(&self, a: &Rep, mut e: u128) -> Rep {
        let mut base = a.clone();
        let mut acc = self.one_rep();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn frobenius(&self, a: &Rep) -> Rep {
        self.pow(a, self.0.p as u128)
    }

    /// Flat F_p coordinate vector of length abs_deg.
    pub fn flatten(&self, a: &Rep) -> Vec<u64> {
        match (a, &self.0.layer) {
            (Rep::Base(c), None) => vec![*c],
            (Rep::Ext(v), Some(l)) => v.iter().flat_map(|c| l.below.flatten(c)).collect(),
            _ => panic!("rep does not match field shape"),
        }
    }

    pub fn unflatten(&self, coords: &[u64]) -> Rep {
        assert_eq!(coords.len(), self.0.abs_deg as usize);
        match &self.0.layer {
            None => Rep::Base(coords[0] % self.0.p),
            Some(l) => {
                let step = l.below.abs_deg() as usize;
                Rep::Ext(
                    coords
                        .chunks(step)
                        .map(|chunk| l.below.unflatten(chunk))
                        .collect(),
                )
            }
        }
    }

    pub fn random_rep<R: Rng>(&self, rng: &mut R) -> Rep {
        let coords: Vec<u64> = (0..self.0.abs_deg)
            .map(|_| rng.gen_range(0..self.0.p))
            .collect();
        self.unflatten(&coords)
    }

    /// All elements, in lexicographic flattened-coordinate order.
    pub fn elements(&self, bound: usize) -> Result<Vec<Rep>> {
        if self.0.q > bound as u128 {
            return Err(Error::BoundExceeded {
                size: self.0.q,
                bound: bound as u128,
            });
        }
        let d = self.0.abs_deg as usize;
        let mut out = Vec::with_capacity(self.0.q as usize);
        let mut digits = vec![0u64; d];
        loop {
            out.push(self.unflatten(&digits));
            let mut i = d;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < self.0.p {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    /// True iff `self` is a tower prefix of `other` (the canonical subfield
    /// chain).
    pub fn is_subtower_of(&self, other: &Field) -> bool {
        if self == other {
            return true;
        }
        match &other.0.layer {
            Some(l) => self.is_subtower_of(&l.below),
            None => false,
        }
    }

    /// Canonical inclusion of a subtower element.
    pub fn include_from(&self, sub: &Field, a: &Rep) -> Result<Rep> {
        if self == sub {
            return Ok(a.clone());
        }
        let l = self.0.layer.as_ref().ok_or_else(|| Error::NotSubfield {
            sub: sub.to_string(),
            sup: self.to_string(),
        })?;
        let lower = l.below.include_from(sub, a)?;
        let mut v = vec![l.below.zero_rep(); l.rel_deg()];
        v[0] = lower;
        Ok(Rep::Ext(v))
    }

    /// Inverse of `include_from`; errors when upper coordinates are nonzero.
    pub fn restrict_to(&self, sub: &Field, a: &Rep) -> Result<Rep> {
        if self == sub {
            return Ok(a.clone());
        }
        let l = self.0.layer.as_ref().ok_or_else(|| Error::NotSubfield {
            sub: sub.to_string(),
            sup: self.to_string(),
        })?;
        let Rep::Ext(v) = a else {
            panic!("rep does not match field shape")
        };
        for c in &v[1..] {
            if !l.below.is_zero(c) {
                return Err(Error::NotInSubfield);
            }
        }
        l.below.restrict_to(sub, &v[0])
    }

    /// Norm down a subtower: product of the q_K-power Frobenius conjugates.
    pub fn norm(&self, k: &Field, a: &Rep) -> Result<Rep> {
        let conj = self.conjugates(k, a)?;
        let mut acc = self.one_rep();
        for c in &conj {
            acc = self.mul(&acc, c);
        }
        self.restrict_to(k, &acc)
    }

    /// Trace down a subtower: sum of the q_K-power Frobenius conjugates.
    pub fn trace_field(&self, k: &Field, a: &Rep) -> Result<Rep> {
        let conj = self.conjugates(k, a)?;
        let mut acc = self.zero_rep();
        for c in &conj {
            acc = self.add(&acc, c);
        }
        self.restrict_to(k, &acc)
    }

    fn conjugates(&self, k: &Field, a: &Rep) -> Result<Vec<Rep>> {
        if !k.is_subtower_of(self) {
            return Err(Error::NotSubfield {
                sub: k.to_string(),
                sup: self.to_string(),
            });
        }
        let n = (self.0.abs_deg / k.0.abs_deg) as usize;
        let qk = k.0.q;
        let mut out = Vec::with_capacity(n);
        let mut x = a.clone();
        for _ in 0..n {
            out.push(x.clone());
            x = self.pow(&x, qk);
        }
        Ok(out)
    }

    /// Solves c^e = b when gcd(e, q - 1) = 1, by inverting the exponent.
    pub fn prime_to_p_root(&self, b: &Rep, e: u128) -> Result<Rep> {
        if self.is_zero(b) {
            return Err(Error::DivisionByZero);
        }
        let m = self.0.q - 1;
        let eb = BigInt::from(e);
        let mb = BigInt::from(m);
        let ext = eb.extended_gcd(&mb);
        if !ext.gcd.is_one() {
            return Err(Error::GcdCondition { e, m });
        }
        if m == 0 {
            return Ok(b.clone());
        }
        let inv = ext.x.mod_floor(&mb).to_u128().unwrap();
        let c = self.pow(b, inv);
        debug_assert_eq!(self.pow(&c, e % m.max(1)), *b);
        Ok(c)
    }

    /// Order of a nonzero element in the multiplicative group.
    pub fn mult_order(&self, a: &Rep) -> Result<u128> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        let m = self.0.q - 1;
        let mut ord = m;
        for (l, _) in factor_u128(m) {
            while ord.is_multiple_of(l) && self.pow(a, ord / l) == self.one_rep() {
                ord /= l;
            }
        }
        Ok(ord)
    }

    /// Deterministic generator of the multiplicative group: first element in
    /// enumeration order with order q - 1.
    pub fn multiplicative_generator(&self) -> Result<Rep> {
        if self.0.q > (1u128 << 32) {
            return Err(Error::BoundExceeded {
                size: self.0.q,
                bound: 1u128 << 32,
            });
        }
        for rep in self.elements(1 << 32)? {
            if !self.is_zero(&rep) && self.mult_order(&rep)? == self.0.q - 1 {
                return Ok(rep);
            }
        }
        unreachable!("finite field multiplicative group is cyclic")
    }

    /// Discrete log of `a` base `g` by brute force; `g` must generate.
    pub fn dlog(&self, g: &Rep, a: &Rep) -> Result<u128> {
        if self.is_zero(a) {
            return Err(Error::DlogZero);
        }
        let mut x = self.one_rep();
        for k in 0..self.0.q - 1 {
            if x == *a {
                return Ok(k);
            }
            x = self.mul(&x, g);
        }
        Err(Error::DlogZero)
    }

    /// Renders an element as a polynomial expression in the layer variables.
    pub fn render(&self, a: &Rep) -> String {
        match (a, &self.0.layer) {
            (Rep::Base(c), None) => c.to_string(),
            (Rep::Ext(v), Some(l)) => {
                let mut terms = Vec::new();
                for (i, c) in v.iter().enumerate() {
                    if l.below.is_zero(c) {
                        continue;
                    }
                    let cs = l.below.render(c);
                    let needs_paren = cs.contains('+') || cs.contains('-');
                    let coeff = if needs_paren { format!("({cs})") } else { cs };
                    let term = match i {
                        0 => coeff,
                        1 if coeff == "1" => l.var.clone(),
                        1 => format!("{coeff}*{}", l.var),
                        _ if coeff == "1" => format!("{}^{i}", l.var),
                        _ => format!("{coeff}*{}^{i}", l.var),
                    };
                    terms.push(term);
                }
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join("+")
                }
            }
            _ => panic!("rep does not match field shape"),
        }
    }
}

/// Trial-division factorization; fine at desk scale.
pub(crate) fn factor_u128(mut n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// An element paired with its owner field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Elem {
    pub field: Field,
    pub rep: Rep,
}

impl Elem {
    pub fn new(field: Field, rep: Rep) -> Self {
        Elem { field, rep }
    }

    pub fn zero(field: &Field) -> Self {
        Elem::new(field.clone(), field.zero_rep())
    }

    pub fn one(field: &Field) -> Self {
        Elem::new(field.clone(), field.one_rep())
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.rep)
    }

    pub fn add(&self, other: &Elem) -> Elem {
        assert_eq!(self.field, other.field);
        Elem::new(self.field.clone(), self.field.add(&self.rep, &other.rep))
    }

    pub fn sub(&self, other: &Elem) -> Elem {
        assert_eq!(self.field, other.field);
        Elem::new(self.field.clone(), self.field.sub(&self.rep, &other.rep))
    }

    pub fn mul(&self, other: &Elem) -> Elem {
        assert_eq!(self.field, other.field);
        Elem::new(self.field.clone(), self.field.mul(&self.rep, &other.rep))
    }

    pub fn neg(&self) -> Elem {
        Elem::new(self.field.clone(), self.field.neg(&self.rep))
    }

    pub fn inv(&self) -> Result<Elem> {
        Ok(Elem::new(self.field.clone(), self.field.inv(&self.rep)?))
    }

    pub fn pow(&self, e: u128) -> Elem {
        Elem::new(self.field.clone(), self.field.pow(&self.rep, e))
    }
}

impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Elem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rep.cmp(&other.rep)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.render(&self.rep))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn f4_has_the_unique_quadratic_modulus() {
        let f4 = Field::make_field(2, &[2], 0).unwrap();
        assert_eq!(f4.q(), 4);
        let l = f4.layer().unwrap();
        // x^2 + x + 1 is the only monic irreducible quadratic over F_2
        assert_eq!(l.modulus, vec![Rep::Base(1), Rep::Base(1), Rep::Base(1)]);
    }

    #[test]
    fn prime_field_has_no_layers() {
        let f3 = Field::make_field(3, &[1], 7).unwrap();
        assert!(f3.layer().is_none());
        assert_eq!(f3.q(), 3);
        assert!(Field::make_field(4, &[1], 0).is_err());
        assert!(Field::make_field(2, &[0], 0).is_err());
    }

    #[test]
    fn two_layer_tower_has_16_distinct_elements() {
        let f = Field::make_field(2, &[2, 2], 0).unwrap();
        assert_eq!(f.q(), 16);
        let elems = f.elements(100).unwrap();
        assert_eq!(elems.len(), 16);
        let set: std::collections::HashSet<_> = elems.iter().collect();
        assert_eq!(set.len(), 16);
    }

    #[test]
    fn field_axioms_on_samples() {
        for (p, degs) in [(2u64, vec![2u32, 2]), (3, vec![3]), (5, vec![2]), (7, vec![1])] {
            let f = Field::make_field(p, &degs, 1).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            for _ in 0..30 {
                let a = f.random_rep(&mut rng);
                let b = f.random_rep(&mut rng);
                let c = f.random_rep(&mut rng);
                assert_eq!(f.add(&a, &b), f.add(&b, &a));
                assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
                assert_eq!(
                    f.mul(&a, &f.add(&b, &c)),
                    f.add(&f.mul(&a, &b), &f.mul(&a, &c))
                );
                assert_eq!(
                    f.mul(&f.mul(&a, &b), &c),
                    f.mul(&a, &f.mul(&b, &c))
                );
                // x^q = x
                assert_eq!(f.pow(&a, f.q()), a);
                if !f.is_zero(&a) {
                    let ai = f.inv(&a).unwrap();
                    assert_eq!(f.mul(&a, &ai), f.one_rep());
                }
            }
        }
    }

    #[test]
    fn norm_and_trace_of_omega_in_f4() {
        let f4 = Field::make_field(2, &[2], 0).unwrap();
        let f2 = Field::prime(2).unwrap();
        let omega = f4.gen_rep();
        // ω has order 3, so N(ω) = ω·ω² = 1
        assert_eq!(f4.norm(&f2, &omega).unwrap(), Rep::Base(1));
        // ω + ω² = 1 since ω² = ω + 1
        assert_eq!(f4.trace_field(&f2, &omega).unwrap(), Rep::Base(1));
        // identity extension
        let x = f4.gen_rep();
        assert_eq!(f4.norm(&f4, &x).unwrap(), x);
    }

    #[test]
    fn norm_trace_transitive_along_tower() {
        let l = Field::make_field(2, &[2, 2], 3).unwrap();
        let m = l.below().unwrap().clone();
        let k = Field::prime(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let x = l.random_rep(&mut rng);
            let tr_direct = l.trace_field(&k, &x).unwrap();
            let tr_step = m
                .trace_field(&k, &l.trace_field(&m, &x).unwrap())
                .unwrap();
            assert_eq!(tr_direct, tr_step);
            let n_direct = l.norm(&k, &x).unwrap();
            let n_step = m.norm(&k, &l.norm(&m, &x).unwrap()).unwrap();
            assert_eq!(n_direct, n_step);
        }
    }

    #[test]
    fn trace_is_k_linear_and_surjective() {
        let l = Field::make_field(3, &[2], 5).unwrap();
        let k = Field::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut hit_nonzero = false;
        for _ in 0..30 {
            let x = l.random_rep(&mut rng);
            let y = l.random_rep(&mut rng);
            let lhs = l.trace_field(&k, &l.add(&x, &y)).unwrap();
            let rhs = k.add(
                &l.trace_field(&k, &x).unwrap(),
                &l.trace_field(&k, &y).unwrap(),
            );
            assert_eq!(lhs, rhs);
            if !k.is_zero(&lhs) {
                hit_nonzero = true;
            }
        }
        assert!(hit_nonzero); // separable extension: trace not identically 0
    }

    #[test]
    fn prime_to_p_root_examples() {
        let f4 = Field::make_field(2, &[2], 0).unwrap();
        let omega = f4.gen_rep();
        let c = f4.prime_to_p_root(&omega, 2).unwrap();
        assert_eq!(f4.pow(&c, 2), omega);
        assert_eq!(c, f4.mul(&omega, &omega)); // ω² since 2⁻¹ ≡ 2 mod 3
        assert_eq!(f4.prime_to_p_root(&f4.one_rep(), 5).unwrap(), f4.one_rep());
        let f8 = Field::make_field(2, &[3], 0).unwrap();
        let g = f8.multiplicative_generator().unwrap();
        let c = f8.prime_to_p_root(&g, 4).unwrap();
        assert_eq!(c, f8.pow(&g, 2)); // 4·2 = 8 ≡ 1 mod 7
        assert!(matches!(
            f4.prime_to_p_root(&omega, 3),
            Err(Error::GcdCondition { .. })
        ));
        assert!(f4.prime_to_p_root(&f4.zero_rep(), 2).is_err());
    }

    #[test]
    fn generator_has_full_order() {
        for (p, degs) in [(2u64, vec![4u32]), (3, vec![2]), (5, vec![1]), (2, vec![2, 2])] {
            let f = Field::make_field(p, &degs, 2).unwrap();
            let g = f.multiplicative_generator().unwrap();
            assert_eq!(f.mult_order(&g).unwrap(), f.q() - 1);
            assert_eq!(f.pow(&g, f.q() - 1), f.one_rep());
        }
    }

    #[test]
    fn restrict_roundtrip_and_membership() {
        let l = Field::make_field(3, &[2, 2], 1).unwrap();
        let k = l.below().unwrap().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = k.random_rep(&mut rng);
        let lifted = l.include_from(&k, &a).unwrap();
        assert_eq!(l.restrict_to(&k, &lifted).unwrap(), a);
        assert!(matches!(
            l.restrict_to(&k, &l.gen_rep()),
            Err(Error::NotInSubfield)
        ));
    }

    #[test]
    fn dlog_inverts_powers() {
        let f = Field::make_field(3, &[2], 0).unwrap();
        let g = f.multiplicative_generator().unwrap();
        for k in 0..8u128 {
            assert_eq!(f.dlog(&g, &f.pow(&g, k)).unwrap(), k);
        }
    }

    #[test]
    fn make_field_is_seed_deterministic() {
        let a = Field::make_field(5, &[3], 42).unwrap();
        let b = Field::make_field(5, &[3], 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn display_follows_the_grammar() {
        assert_eq!(Field::prime(7).unwrap().to_string(), "GF(7)");
        assert_eq!(Field::make_field(2, &[4], 0).unwrap().to_string(), "GF(2^4)");
        assert_eq!(
            Field::make_field(2, &[2, 2], 0).unwrap().to_string(),
            "GF(2^4)/GF(2^2)"
        );
    }
}
