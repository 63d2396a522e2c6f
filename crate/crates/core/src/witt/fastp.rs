//! Fast Witt arithmetic over characteristic-p fields. Coordinates are
//! lifted to the tower ring with base (Z/p^N) — the field's layer moduli
//! lift verbatim since their base digits sit in 0..p — ghost components are
//! computed there, and coordinates are recovered by exact division. The
//! universal laws are integral, so every division is exact; precision
//! N = 1 + max_s v_p(s) is enough because multiplying by d restores the
//! digits a previous division by p^{v_p(d)} consumed.

use crate::ff::{Field, Rep};
use crate::truncation::TruncationSet;
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Tower ring with base Z/p^N, mirroring a given field's layer structure.
pub(crate) struct LiftRing {
    pub field: Field,
    pub p: u64,
    /// p^N
    pub pn: u64,
}

impl LiftRing {
    /// Precision from the truncation set: N = 1 + max v_p(s).
    pub fn for_tset(field: &Field, tset: &TruncationSet) -> LiftRing {
        let p = field.p();
        let vmax = tset
            .elements()
            .iter()
            .map(|&s| {
                let mut v = 0u32;
                let mut x = s;
                while x % p == 0 {
                    v += 1;
                    x /= p;
                }
                v
            })
            .max()
            .unwrap_or(0);
        let pn = p.pow(vmax + 1);
        LiftRing {
            field: field.clone(),
            p,
            pn,
        }
    }

    /// A field element is its own canonical lift (base digits in 0..p).
    pub fn lift(&self, a: &Rep) -> Rep {
        a.clone()
    }

    /// Reduce base digits mod p, giving a field element.
    pub fn project(&self, a: &Rep) -> Rep {
        match a {
            Rep::Base(c) => Rep::Base(c % self.p),
            Rep::Ext(v) => Rep::Ext(v.iter().map(|c| self.project(c)).collect()),
        }
    }

    pub fn zero(&self) -> Rep {
        self.field.zero_rep()
    }

    fn add_in(&self, f: &Field, a: &Rep, b: &Rep) -> Rep {
        match (f.layer(), a, b) {
            (None, Rep::Base(x), Rep::Base(y)) => Rep::Base((x + y) % self.pn),
            (Some(l), Rep::Ext(u), Rep::Ext(v)) => Rep::Ext(
                u.iter()
                    .zip(v)
                    .map(|(x, y)| self.add_in(&l.below, x, y))
                    .collect(),
            ),
            _ => panic!("rep does not match ring shape"),
        }
    }

    fn neg_in(&self, f: &Field, a: &Rep) -> Rep {
        match (f.layer(), a) {
            (None, Rep::Base(x)) => Rep::Base((self.pn - x % self.pn) % self.pn),
            (Some(l), Rep::Ext(u)) => {
                Rep::Ext(u.iter().map(|x| self.neg_in(&l.below, x)).collect())
            }
            _ => panic!("rep does not match ring shape"),
        }
    }

    fn is_zero_in(&self, f: &Field, a: &Rep) -> bool {
        match (f.layer(), a) {
            (None, Rep::Base(x)) => *x == 0,
            (Some(l), Rep::Ext(u)) => u.iter().all(|x| self.is_zero_in(&l.below, x)),
            _ => panic!("rep does not match ring shape"),
        }
    }

    fn mul_in(&self, f: &Field, a: &Rep, b: &Rep) -> Rep {
        match (f.layer(), a, b) {
            (None, Rep::Base(x), Rep::Base(y)) => {
                Rep::Base(((*x as u128 * *y as u128) % self.pn as u128) as u64)
            }
            (Some(l), Rep::Ext(u), Rep::Ext(v)) => {
                let below = &l.below;
                let n = l.rel_deg();
                let mut prod = vec![self.zero_of(below); 2 * n - 1];
                for (i, x) in u.iter().enumerate() {
                    if self.is_zero_in(below, x) {
                        continue;
                    }
                    for (j, y) in v.iter().enumerate() {
                        let t = self.mul_in(below, x, y);
                        prod[i + j] = self.add_in(below, &prod[i + j], &t);
                    }
                }
                for i in (n..2 * n - 1).rev() {
                    if self.is_zero_in(below, &prod[i]) {
                        continue;
                    }
                    let c = std::mem::replace(&mut prod[i], self.zero_of(below));
                    for j in 0..n {
                        let t = self.mul_in(below, &c, &l.modulus[j]);
                        let nt = self.neg_in(below, &t);
                        prod[i - n + j] = self.add_in(below, &prod[i - n + j], &nt);
                    }
                }
                prod.truncate(n);
                Rep::Ext(prod)
            }
            _ => panic!("rep does not match ring shape"),
        }
    }

    fn zero_of(&self, f: &Field) -> Rep {
        f.zero_rep()
    }

    pub fn add(&self, a: &Rep, b: &Rep) -> Rep {
        self.add_in(&self.field, a, b)
    }

    pub fn neg(&self, a: &Rep) -> Rep {
        self.neg_in(&self.field, a)
    }

    pub fn mul(&self, a: &Rep, b: &Rep) -> Rep {
        self.mul_in(&self.field, a, b)
    }

    pub fn mul_scalar(&self, k: u64, a: &Rep) -> Rep {
        let k = Rep::Base(k % self.pn);
        self.scalar_mul_in(&self.field, &k, a)
    }

    fn scalar_mul_in(&self, f: &Field, k: &Rep, a: &Rep) -> Rep {
        let Rep::Base(kv) = k else { unreachable!() };
        match (f.layer(), a) {
            (None, Rep::Base(x)) => {
                Rep::Base(((*x as u128 * *kv as u128) % self.pn as u128) as u64)
            }
            (Some(l), Rep::Ext(u)) => Rep::Ext(
                u.iter()
                    .map(|x| self.scalar_mul_in(&l.below, k, x))
                    .collect(),
            ),
            _ => panic!("rep does not match ring shape"),
        }
    }

    pub fn pow(&self, a: &Rep, mut e: u64) -> Rep {
        let mut base = a.clone();
        let mut acc = self.lift(&self.field.one_rep());
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

    /// Divides every base digit by p^v; errors (as integrality failure) if
    /// any digit is not divisible.
    fn div_exact(&self, f: &Field, a: &Rep, pv: u64, at: u64) -> Result<Rep> {
        match (f.layer(), a) {
            (None, Rep::Base(x)) => {
                if x % pv != 0 {
                    Err(Error::IntegralityFailure(at))
                } else {
                    Ok(Rep::Base(x / pv))
                }
            }
            (Some(l), Rep::Ext(u)) => Ok(Rep::Ext(
                u.iter()
                    .map(|x| self.div_exact(&l.below, x, pv, at))
                    .collect::<Result<_>>()?,
            )),
            _ => panic!("rep does not match ring shape"),
        }
    }

    /// Ghost components of lifted Witt coordinates: w_s = Σ_{d|s} d·x_d^{s/d}.
    pub fn ghost(&self, tset: &TruncationSet, lifts: &BTreeMap<u64, Rep>) -> BTreeMap<u64, Rep> {
        let mut out = BTreeMap::new();
        for &s in tset.elements() {
            let mut acc = self.zero();
            for (&d, x) in lifts {
                if s % d == 0 {
                    let t = self.mul_scalar(d, &self.pow(x, s / d));
                    acc = self.add(&acc, &t);
                }
            }
            out.insert(s, acc);
        }
        out
    }

    /// Recovers field Witt coordinates from target ghost values. Per s
    /// ascending: y_s = (W_s − Σ_{d|s, d<s} d·y_d^{s/d}) / s, splitting s
    /// into its unit part (inverted mod p^N) and p-part (exact division).
    pub fn coords_from_ghost(
        &self,
        tset: &TruncationSet,
        ghost: &BTreeMap<u64, Rep>,
    ) -> Result<BTreeMap<u64, Rep>> {
        let mut lifts: BTreeMap<u64, Rep> = BTreeMap::new();
        let mut out = BTreeMap::new();
        for &s in tset.elements() {
            let mut acc = ghost[&s].clone();
            for (&d, y) in &lifts {
                if s % d == 0 && d < s {
                    let t = self.mul_scalar(d, &self.pow(y, s / d));
                    acc = self.add(&acc, &self.neg(&t));
                }
            }
            // s = m·p^v with gcd(m, p) = 1
            let mut pv = 1u64;
            let mut m = s;
            while m % self.p == 0 {
                m /= self.p;
                pv *= self.p;
            }
            let m_inv = inv_mod(m % self.pn, self.pn);
            acc = self.mul_scalar(m_inv, &acc);
            let y = self.div_exact(&self.field, &acc, pv, s)?;
            out.insert(s, self.project(&y));
            lifts.insert(s, y);
        }
        Ok(out)
    }
}

/// Inverse of a unit mod n (n a prime power here, x coprime to it).
fn inv_mod(x: u64, n: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (n as i128, (x % n) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    (t.rem_euclid(n as i128)) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inv_mod_works() {
        assert_eq!(inv_mod(3, 8), 3);
        assert_eq!(inv_mod(5, 9), 2);
        assert_eq!(inv_mod(7, 16), 7);
    }

    #[test]
    fn ghost_roundtrip_over_f2() {
        let f2 = Field::prime(2).unwrap();
        let s = TruncationSet::validate(&[1, 2, 4]).unwrap();
        let ring = LiftRing::for_tset(&f2, &s);
        assert_eq!(ring.pn, 8);
        // every Witt vector: lift, ghost, recover, compare
        for bits in 0..8u64 {
            let coords: BTreeMap<u64, Rep> = [1u64, 2, 4]
                .iter()
                .enumerate()
                .map(|(i, &sv)| (sv, Rep::Base((bits >> i) & 1)))
                .collect();
            let lifts: BTreeMap<u64, Rep> =
                coords.iter().map(|(&k, v)| (k, ring.lift(v))).collect();
            let ghost = ring.ghost(&s, &lifts);
            let back = ring.coords_from_ghost(&s, &ghost).unwrap();
            assert_eq!(back, coords);
        }
    }

    #[test]
    fn ghost_roundtrip_over_f9_mixed_set() {
        use rand::SeedableRng;
        let f9 = Field::make_field(3, &[2], 0).unwrap();
        let s = TruncationSet::validate(&[1, 2, 3, 6]).unwrap();
        let ring = LiftRing::for_tset(&f9, &s);
        assert_eq!(ring.pn, 9);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..25 {
            let coords: BTreeMap<u64, Rep> = s
                .elements()
                .iter()
                .map(|&sv| (sv, f9.random_rep(&mut rng)))
                .collect();
            let lifts: BTreeMap<u64, Rep> =
                coords.iter().map(|(&k, v)| (k, ring.lift(v))).collect();
            let ghost = ring.ghost(&s, &lifts);
            let back = ring.coords_from_ghost(&s, &ghost).unwrap();
            assert_eq!(back, coords);
        }
    }
}
