//! Witt vectors W_S(A) for finite truncation sets, over exact integers and
//! over finite fields. Integer arithmetic evaluates the cached universal
//! laws; finite-field arithmetic goes through the truncated ghost lift
//! (see `fastp`), and the two paths are cross-checked in the tests.

pub mod fastp;
pub mod laws;

use crate::ff::{Embedding, Field, Rep};
use crate::truncation::TruncationSet;
use crate::{Error, Result};
use fastp::LiftRing;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum WittVector {
    Int {
        tset: TruncationSet,
        coords: BTreeMap<u64, BigInt>,
    },
    Field {
        tset: TruncationSet,
        field: Field,
        coords: BTreeMap<u64, Rep>,
    },
}

use WittVector::{Field as WField, Int as WInt};

impl WittVector {
    pub fn zero_int(tset: &TruncationSet) -> Self {
        WInt {
            tset: tset.clone(),
            coords: tset.elements().iter().map(|&s| (s, BigInt::zero())).collect(),
        }
    }

    pub fn int_from_coords(tset: &TruncationSet, coords: BTreeMap<u64, BigInt>) -> Result<Self> {
        let keys: Vec<u64> = coords.keys().copied().collect();
        if keys != tset.elements() {
            return Err(Error::MismatchedCarriers);
        }
        Ok(WInt {
            tset: tset.clone(),
            coords,
        })
    }

    pub fn zero(tset: &TruncationSet, field: &Field) -> Self {
        WField {
            tset: tset.clone(),
            field: field.clone(),
            coords: tset
                .elements()
                .iter()
                .map(|&s| (s, field.zero_rep()))
                .collect(),
        }
    }

    pub fn from_coords(
        tset: &TruncationSet,
        field: &Field,
        coords: BTreeMap<u64, Rep>,
    ) -> Result<Self> {
        let keys: Vec<u64> = coords.keys().copied().collect();
        if keys != tset.elements() {
            return Err(Error::MismatchedCarriers);
        }
        Ok(WField {
            tset: tset.clone(),
            field: field.clone(),
            coords,
        })
    }

    pub fn teichmuller_int(tset: &TruncationSet, b: BigInt) -> Self {
        let mut w = Self::zero_int(tset);
        if let WInt { coords, .. } = &mut w {
            coords.insert(1, b);
        }
        w
    }

    pub fn teichmuller(tset: &TruncationSet, field: &Field, b: &Rep) -> Self {
        let mut w = Self::zero(tset, field);
        if let WField { coords, .. } = &mut w {
            coords.insert(1, b.clone());
        }
        w
    }

    pub fn tset(&self) -> &TruncationSet {
        match self {
            WInt { tset, .. } | WField { tset, .. } => tset,
        }
    }

    pub fn field(&self) -> Option<&Field> {
        match self {
            WField { field, .. } => Some(field),
            WInt { .. } => None,
        }
    }

    pub fn field_coords(&self) -> Option<&BTreeMap<u64, Rep>> {
        match self {
            WField { coords, .. } => Some(coords),
            WInt { .. } => None,
        }
    }

    pub fn int_coords(&self) -> Option<&BTreeMap<u64, BigInt>> {
        match self {
            WInt { coords, .. } => Some(coords),
            WField { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            WInt { coords, .. } => coords.values().all(|c| c.is_zero()),
            WField { field, coords, .. } => coords.values().all(|c| field.is_zero(c)),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        let ok = match (self, other) {
            (WInt { tset: a, .. }, WInt { tset: b, .. }) => a == b,
            (
                WField {
                    tset: a, field: fa, ..
                },
                WField {
                    tset: b, field: fb, ..
                },
            ) => a == b && fa == fb,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::MismatchedCarriers)
        }
    }

    /// Ghost components over the integers: w_s = Σ_{d|s} d·x_d^(s/d).
    pub fn ghost(&self) -> Result<BTreeMap<u64, BigInt>> {
        let WInt { tset, coords } = self else {
            return Err(Error::NonIntegerCoefficients);
        };
        let mut out = BTreeMap::new();
        for &s in tset.elements() {
            let mut acc = BigInt::zero();
            for (&d, x) in coords {
                if s % d == 0 {
                    acc += BigInt::from(d) * x.pow((s / d) as u32);
                }
            }
            out.insert(s, acc);
        }
        Ok(out)
    }

    fn int_law_vals(a: &BTreeMap<u64, BigInt>, b: &BTreeMap<u64, BigInt>) -> Vec<BigInt> {
        a.values().chain(b.values()).cloned().collect()
    }

    fn eval_int_laws(
        tset: &TruncationSet,
        laws: &BTreeMap<u64, laws::IPoly>,
        vals: &[BigInt],
    ) -> Self {
        WInt {
            tset: tset.clone(),
            coords: tset
                .elements()
                .iter()
                .map(|&s| (s, laws[&s].eval_int(vals)))
                .collect(),
        }
    }

    fn field_ghost_op<F>(&self, other: Option<&Self>, op: F) -> Result<Self>
    where
        F: Fn(&LiftRing, &Rep, Option<&Rep>) -> Rep,
    {
        let WField {
            tset,
            field,
            coords,
        } = self
        else {
            return Err(Error::NonFieldCoefficients);
        };
        let ring = LiftRing::for_tset(field, tset);
        let gx = ring.ghost(tset, coords);
        let gy = other.map(|o| {
            let WField { coords, .. } = o else { unreachable!() };
            ring.ghost(tset, coords)
        });
        let target: BTreeMap<u64, Rep> = tset
            .elements()
            .iter()
            .map(|&s| (s, op(&ring, &gx[&s], gy.as_ref().map(|g| &g[&s]))))
            .collect();
        let coords = ring.coords_from_ghost(tset, &target)?;
        Ok(WField {
            tset: tset.clone(),
            field: field.clone(),
            coords,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        match (self, other) {
            (WInt { tset, coords: a }, WInt { coords: b, .. }) => {
                let l = laws::laws_for(tset)?;
                Ok(Self::eval_int_laws(tset, &l.add, &Self::int_law_vals(a, b)))
            }
            _ => self.field_ghost_op(Some(other), |r, x, y| r.add(x, y.unwrap())),
        }
    }

    pub fn neg(&self) -> Result<Self> {
        match self {
            WInt { tset, coords } => {
                let l = laws::laws_for(tset)?;
                let vals: Vec<BigInt> = coords.values().cloned().collect();
                Ok(Self::eval_int_laws(tset, &l.neg, &vals))
            }
            _ => self.field_ghost_op(None, |r, x, _| r.neg(x)),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg()?)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        match (self, other) {
            (WInt { tset, coords: a }, WInt { coords: b, .. }) => {
                let l = laws::laws_for(tset)?;
                Ok(Self::eval_int_laws(tset, &l.mul, &Self::int_law_vals(a, b)))
            }
            _ => self.field_ghost_op(Some(other), |r, x, y| r.mul(x, y.unwrap())),
        }
    }

    /// k-fold Witt sum.
    pub fn scalar(&self, k: u64) -> Result<Self> {
        match self {
            WField { .. } => self.field_ghost_op(None, |r, x, _| r.mul_scalar(k, x)),
            WInt { .. } => {
                let mut acc = Self::zero_int(self.tset());
                for _ in 0..k {
                    acc = acc.add(self)?;
                }
                Ok(acc)
            }
        }
    }

    /// Coordinate drop R^S_T for T ⊆ S.
    pub fn restrict(&self, target: &TruncationSet) -> Result<Self> {
        if !target.is_subset_of(self.tset()) {
            return Err(Error::NotDivisorClosed(0));
        }
        Ok(match self {
            WInt { coords, .. } => WInt {
                tset: target.clone(),
                coords: target
                    .elements()
                    .iter()
                    .map(|&s| (s, coords[&s].clone()))
                    .collect(),
            },
            WField { field, coords, .. } => WField {
                tset: target.clone(),
                field: field.clone(),
                coords: target
                    .elements()
                    .iter()
                    .map(|&s| (s, coords[&s].clone()))
                    .collect(),
            },
        })
    }

    /// V_n: W_{S/n} → W_S; self lives on target/n.
    pub fn verschiebung(&self, n: u64, target: &TruncationSet) -> Result<Self> {
        if target.quotient(n).as_ref() != Some(self.tset()) {
            return Err(Error::MismatchedCarriers);
        }
        Ok(match self {
            WInt { coords, .. } => WInt {
                tset: target.clone(),
                coords: target
                    .elements()
                    .iter()
                    .map(|&s| {
                        let v = if s % n == 0 {
                            coords[&(s / n)].clone()
                        } else {
                            BigInt::zero()
                        };
                        (s, v)
                    })
                    .collect(),
            },
            WField { field, coords, .. } => WField {
                tset: target.clone(),
                field: field.clone(),
                coords: target
                    .elements()
                    .iter()
                    .map(|&s| {
                        let v = if s % n == 0 {
                            coords[&(s / n)].clone()
                        } else {
                            field.zero_rep()
                        };
                        (s, v)
                    })
                    .collect(),
            },
        })
    }

    /// F_n: W_S → W_{S/n}, defined by ghost(F_n x)_t = ghost(x)_{nt}.
    /// Over char-p fields the p-part uses the componentwise-Frobenius
    /// shortcut; the prime-to-p part goes through the ghost lift.
    pub fn frobenius_n(&self, n: u64) -> Result<Self> {
        if n == 1 {
            return Ok(self.clone());
        }
        self.tset().quotient(n).ok_or(Error::EmptyQuotient)?;
        match self {
            WInt { tset, coords } => {
                let laws = laws::frobenius_laws(tset, n)?;
                let quot = tset.quotient(n).unwrap();
                let vals: Vec<BigInt> = coords.values().cloned().collect();
                Ok(WInt {
                    tset: quot.clone(),
                    coords: quot
                        .elements()
                        .iter()
                        .map(|&t| (t, laws[&t].eval_int(&vals)))
                        .collect(),
                })
            }
            WField {
                tset,
                field,
                coords,
            } => {
                let p = field.p();
                let mut m = n;
                let mut cur_tset = tset.clone();
                let mut cur: BTreeMap<u64, Rep> = coords.clone();
                while m.is_multiple_of(p) {
                    // F_p in char p: coordinate t picks up x_t^p
                    let quot = cur_tset.quotient(p).ok_or(Error::EmptyQuotient)?;
                    cur = quot
                        .elements()
                        .iter()
                        .map(|&t| (t, field.pow(&cur[&t], p as u128)))
                        .collect();
                    cur_tset = quot;
                    m /= p;
                }
                if m > 1 {
                    let quot = cur_tset.quotient(m).ok_or(Error::EmptyQuotient)?;
                    let ring = LiftRing::for_tset(field, &cur_tset);
                    let g = ring.ghost(&cur_tset, &cur);
                    let target: BTreeMap<u64, Rep> = quot
                        .elements()
                        .iter()
                        .map(|&t| (t, g[&(m * t)].clone()))
                        .collect();
                    cur = ring.coords_from_ghost(&quot, &target)?;
                    cur_tset = quot;
                }
                Ok(WField {
                    tset: cur_tset,
                    field: field.clone(),
                    coords: cur,
                })
            }
        }
    }

    /// p̄ at degree 0: zero-pad to pS and multiply by p in W_{pS}.
    pub fn p_underline(&self, p: u64) -> Result<Self> {
        let target = self.tset().p_extend(p);
        let padded = self.pad_to(&target)?;
        if let WField { field, .. } = self {
            if field.p() != p {
                return Err(Error::WrongField);
            }
        }
        padded.scalar(p)
    }

    /// Zero-pad onto a superset (the canonical lift along the restriction).
    pub fn pad_to(&self, target: &TruncationSet) -> Result<Self> {
        if !self.tset().is_subset_of(target) {
            return Err(Error::MismatchedCarriers);
        }
        Ok(match self {
            WInt { tset, coords } => WInt {
                tset: target.clone(),
                coords: target
                    .elements()
                    .iter()
                    .map(|&s| {
                        let v = if tset.contains(s) {
                            coords[&s].clone()
                        } else {
                            BigInt::zero()
                        };
                        (s, v)
                    })
                    .collect(),
            },
            WField {
                tset,
                field,
                coords,
            } => WField {
                tset: target.clone(),
                field: field.clone(),
                coords: target
                    .elements()
                    .iter()
                    .map(|&s| {
                        let v = if tset.contains(s) {
                            coords[&s].clone()
                        } else {
                            field.zero_rep()
                        };
                        (s, v)
                    })
                    .collect(),
            },
        })
    }

    /// Componentwise application of the coefficient-field Frobenius
    /// (the functorial map W_S(φ), not the structure map F_p).
    pub fn coeff_frobenius(&self) -> Result<Self> {
        let WField {
            tset,
            field,
            coords,
        } = self
        else {
            return Err(Error::NonFieldCoefficients);
        };
        Ok(WField {
            tset: tset.clone(),
            field: field.clone(),
            coords: coords
                .iter()
                .map(|(&s, x)| (s, field.frobenius(x)))
                .collect(),
        })
    }

    /// ℘ = F − id on p-typical Witt vectors over a char-p field.
    pub fn wp(&self) -> Result<Self> {
        let WField { tset, field, .. } = self else {
            return Err(Error::NonFieldCoefficients);
        };
        let r = tset.len() as u32;
        if *tset != TruncationSet::p_typical(field.p(), r) {
            return Err(Error::MismatchedCarriers);
        }
        self.coeff_frobenius()?.sub(self)
    }

    /// Componentwise application of a field embedding (restriction map of
    /// the Witt Mackey functor).
    pub fn map_coords(&self, emb: &Embedding) -> Result<Self> {
        let WField {
            tset,
            field,
            coords,
        } = self
        else {
            return Err(Error::NonFieldCoefficients);
        };
        if *field != emb.from {
            return Err(Error::WrongField);
        }
        Ok(WField {
            tset: tset.clone(),
            field: emb.to.clone(),
            coords: coords.iter().map(|(&s, x)| (s, emb.apply(x))).collect(),
        })
    }

    /// Witt trace along a field embedding: Witt-sum of the Galois
    /// conjugates, pulled back through the embedding.
    pub fn trace_along(&self, emb: &Embedding) -> Result<Self> {
        let WField {
            tset,
            field,
            coords: _,
        } = self
        else {
            return Err(Error::NonFieldCoefficients);
        };
        if *field != emb.to {
            return Err(Error::WrongField);
        }
        let n = (emb.to.abs_deg() / emb.from.abs_deg()) as usize;
        let qk = emb.from.q();
        let mut conj = self.clone();
        let mut acc: Option<Self> = None;
        for _ in 0..n {
            acc = Some(match acc {
                None => conj.clone(),
                Some(a) => a.add(&conj)?,
            });
            conj = conj.pow_coords(qk)?;
        }
        let sum = acc.unwrap();
        let WField { coords, .. } = &sum else { unreachable!() };
        let pulled: BTreeMap<u64, Rep> = coords
            .iter()
            .map(|(&s, x)| Ok((s, emb.preimage(x)?)))
            .collect::<Result<_>>()?;
        Ok(WField {
            tset: tset.clone(),
            field: emb.from.clone(),
            coords: pulled,
        })
    }

    fn pow_coords(&self, e: u128) -> Result<Self> {
        let WField {
            tset,
            field,
            coords,
        } = self
        else {
            return Err(Error::NonFieldCoefficients);
        };
        Ok(WField {
            tset: tset.clone(),
            field: field.clone(),
            coords: coords.iter().map(|(&s, x)| (s, field.pow(x, e))).collect(),
        })
    }

    /// Witt trace down a subtower K ⊆ L.
    pub fn witt_trace(&self, k: &Field) -> Result<Self> {
        let WField { field, .. } = self else {
            return Err(Error::NonFieldCoefficients);
        };
        let emb = Embedding::canonical(k, field)?;
        self.trace_along(&emb)
    }

    /// Restriction (base change) of a Witt vector over K to L ⊇ K.
    pub fn witt_res(&self, l: &Field) -> Result<Self> {
        let WField { field, .. } = self else {
            return Err(Error::NonFieldCoefficients);
        };
        let emb = Embedding::canonical(field, l)?;
        self.map_coords(&emb)
    }

    /// Canonical decomposition over a char-p field: one p-typical component
    /// per prime-to-p element m of S, namely F_m(x) restricted to the
    /// p-typical part of S/m.
    pub fn decompose(&self) -> Result<Vec<(u64, WittVector)>> {
        let WField { tset, field, .. } = self else {
            return Err(Error::NonFieldCoefficients);
        };
        let p = field.p();
        let mut out = Vec::new();
        for (m, r) in tset.decomposition_profile(p) {
            let comp = self
                .frobenius_n(m)?
                .restrict(&TruncationSet::p_typical(p, r))?;
            out.push((m, comp));
        }
        Ok(out)
    }

    /// Inverse of `decompose`, by brute-force search over W_S.
    pub fn recombine(
        tset: &TruncationSet,
        field: &Field,
        comps: &[(u64, WittVector)],
        bound: usize,
    ) -> Result<WittVector> {
        for cand in Self::all_vectors(tset, field, bound)? {
            if cand.decompose()? == comps {
                return Ok(cand);
            }
        }
        Err(Error::ShapeMismatch(
            "no Witt vector has the given decomposition".into(),
        ))
    }

    /// Exhaustive enumeration of W_S(F_q); errors when q^|S| exceeds the
    /// bound.
    pub fn all_vectors(
        tset: &TruncationSet,
        field: &Field,
        bound: usize,
    ) -> Result<Vec<WittVector>> {
        let size = field
            .q()
            .checked_pow(tset.len() as u32)
            .unwrap_or(u128::MAX);
        if size > bound as u128 {
            return Err(Error::BoundExceeded {
                size,
                bound: bound as u128,
            });
        }
        let elems = field.elements(bound)?;
        let mut out: Vec<BTreeMap<u64, Rep>> = vec![BTreeMap::new()];
        for &s in tset.elements() {
            let mut next = Vec::with_capacity(out.len() * elems.len());
            for partial in &out {
                for e in &elems {
                    let mut m = partial.clone();
                    m.insert(s, e.clone());
                    next.push(m);
                }
            }
            out = next;
        }
        Ok(out
            .into_iter()
            .map(|coords| WField {
                tset: tset.clone(),
                field: field.clone(),
                coords,
            })
            .collect())
    }
}
