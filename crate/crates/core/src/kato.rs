//! The generator/relation model of H^n_{p^r}(k) for a finite field k:
//! the group (W_r(k) ⊗ (k×)^{⊗(n−1)})/J with J spanned by the
//! repeated-slot, coordinate/slot-coincidence, and ℘-image relations —
//! plus the brute-force Artin–Schreier–Witt cokernel as an independent
//! oracle at n = 1.

use crate::abgrp::{FinPresAbGroup, FiniteStructure, structure_of_finite};
use crate::ff::{Field, Rep};
use crate::truncation::TruncationSet;
use crate::witt::WittVector;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::{HashMap, HashSet};
use std::sync::{Mutex, OnceLock};

/// Enumeration caps. `elems` bounds |W_r(k)| = q^r; `units` bounds q−1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KatoBounds {
    pub elems: usize,
    pub units: u128,
}

impl Default for KatoBounds {
    fn default() -> Self {
        KatoBounds {
            elems: 256,
            units: 15,
        }
    }
}

/// W_r(k)/℘(W_r(k)) computed by exhaustive enumeration, with a
/// class-lookup table.
#[derive(Debug, Clone)]
pub struct AswCokernel {
    pub field: Field,
    pub r: u32,
    pub invariants: Vec<u64>,
    structure: FiniteStructure<WittVector>,
    canon: HashMap<WittVector, WittVector>,
}

impl AswCokernel {
    /// Coordinates of the class of x in the invariant-factor basis.
    pub fn class_of(&self, x: &WittVector) -> Result<Vec<u64>> {
        let rep = self.canon.get(x).ok_or(Error::MismatchedCarriers)?;
        Ok(self.structure.coords[rep].clone())
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }
}

pub fn asw_cokernel(k: &Field, r: u32, bound: usize) -> Result<AswCokernel> {
    let tset = TruncationSet::p_typical(k.p(), r);
    let mut all = WittVector::all_vectors(&tset, k, bound)?;
    all.sort_by(|a, b| a.field_coords().cmp(&b.field_coords()));
    let image: HashSet<WittVector> = all.iter().map(|x| x.wp().unwrap()).collect();
    let mut canon: HashMap<WittVector, WittVector> = HashMap::new();
    for x in &all {
        if canon.contains_key(x) {
            continue;
        }
        let coset: Vec<WittVector> = image.iter().map(|im| x.add(im).unwrap()).collect();
        let rep = coset
            .iter()
            .min_by(|a, b| a.field_coords().cmp(&b.field_coords()))
            .unwrap()
            .clone();
        for y in coset {
            canon.insert(y, rep.clone());
        }
    }
    let mut carrier: Vec<WittVector> = canon.values().cloned().collect::<HashSet<_>>().into_iter().collect();
    carrier.sort_by(|a, b| a.field_coords().cmp(&b.field_coords()));
    let zero = canon[&WittVector::zero(&tset, k)].clone();
    let structure = structure_of_finite(
        &carrier,
        |a, b| canon[&a.add(b).unwrap()].clone(),
        &zero,
        |a| canon[&a.neg().unwrap()].clone(),
        bound,
    )?;
    Ok(AswCokernel {
        field: k.clone(),
        r,
        invariants: structure.invariants.clone(),
        structure,
        canon,
    })
}

/// The presented group (W_r(k) ⊗ (k×)^{⊗(n−1)})/J over a finite field.
#[derive(Debug, Clone)]
pub struct KatoPresentation {
    pub field: Field,
    pub r: u32,
    pub n: u32,
    /// structure of W_r(k) supplying the Witt-side generators
    pub witt: FiniteStructure<WittVector>,
    /// generator of the cyclic k× (unused sentinel when q = 2)
    pub unit_gen: Rep,
    pub unit_order: u64,
    /// tensor group before the relations
    pub tensor: FinPresAbGroup,
    /// the quotient by relations (a), (b), (c)
    pub group: FinPresAbGroup,
}

impl KatoPresentation {
    /// Coordinates of ⟨𝐚, b_1, …, b_{n−1}⟩ in the tensor-group generators.
    pub fn element(&self, a: &WittVector, bs: &[Rep]) -> Result<Vec<BigInt>> {
        if bs.len() + 1 != self.n as usize {
            return Err(Error::ShapeMismatch(format!(
                "expected {} unit slots, got {}",
                self.n - 1,
                bs.len()
            )));
        }
        let c = self
            .witt
            .coords
            .get(a)
            .ok_or(Error::MismatchedCarriers)?;
        let mut e = BigInt::from(1);
        for b in bs {
            e *= BigInt::from(self.field.dlog(&self.unit_gen, b)?);
        }
        Ok(c.iter().map(|&ci| BigInt::from(ci) * &e).collect())
    }

    pub fn class_is_zero(&self, a: &WittVector, bs: &[Rep]) -> Result<bool> {
        let v = self.element(a, bs)?;
        self.group.is_zero_in(&v)
    }

    pub fn same_class(&self, v: &[BigInt], w: &[BigInt]) -> Result<bool> {
        let diff: Vec<BigInt> = v.iter().zip(w).map(|(x, y)| x - y).collect();
        self.group.is_zero_in(&diff)
    }

    pub fn invariants(&self) -> Vec<u64> {
        self.group
            .smith_invariants()
            .iter()
            .map(|d| u64::try_from(d).expect("finite group"))
            .collect()
    }
}

type Cache<K, V> = OnceLock<Mutex<HashMap<K, V>>>;

static PRESENTATIONS: Cache<(Field, u32, u32), KatoPresentation> = OnceLock::new();

// the n² addition table of W_r(k) is by far the dominant cost; share it
// across the degrees n
static WITT_STRUCTURES: Cache<(Field, u32), FiniteStructure<WittVector>> = OnceLock::new();

fn witt_structure(k: &Field, r: u32, bound: usize) -> Result<FiniteStructure<WittVector>> {
    let cache = WITT_STRUCTURES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().unwrap().get(&(k.clone(), r)) {
        return Ok(s.clone());
    }
    let tset = TruncationSet::p_typical(k.p(), r);
    let mut all = WittVector::all_vectors(&tset, k, bound)?;
    all.sort_by(|a, b| a.field_coords().cmp(&b.field_coords()));
    let witt = structure_of_finite(
        &all,
        |a, b| a.add(b).unwrap(),
        &WittVector::zero(&tset, k),
        |a| a.neg().unwrap(),
        bound,
    )?;
    cache
        .lock()
        .unwrap()
        .insert((k.clone(), r), witt.clone());
    Ok(witt)
}

pub fn build_presentation(
    k: &Field,
    r: u32,
    n: u32,
    bounds: &KatoBounds,
) -> Result<KatoPresentation> {
    if n == 0 {
        return Err(Error::ShapeMismatch("degree n must be at least 1".into()));
    }
    if k.q() - 1 > bounds.units {
        return Err(Error::BoundExceeded {
            size: k.q() - 1,
            bound: bounds.units,
        });
    }
    let cache = PRESENTATIONS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&(k.clone(), r, n)) {
        return Ok(p.clone());
    }

    let p = k.p();
    let tset = TruncationSet::p_typical(p, r);
    let witt = witt_structure(k, r, bounds.elems)?;
    let q1 = (k.q() - 1) as u64;
    let unit_gen = if q1 == 1 {
        k.one_rep()
    } else {
        k.multiplicative_generator()?
    };

    let mut tensor = witt.group();
    for _ in 1..n {
        tensor = tensor.tensor(&FinPresAbGroup::cyclic(q1));
    }
    let u = witt.generators.len();

    // relation rows in the tensor generators; slots not forced by the
    // relation carry the unit-group generator (dlog 1), which spans the
    // same sublattice as letting them range over all of k×
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let row_of = |coords: &[u64], e: &BigInt| -> Vec<BigInt> {
        coords.iter().map(|&c| BigInt::from(c) * e).collect()
    };
    // (c): ℘ of each Witt generator
    for g in &witt.generators {
        let pg = g.wp()?;
        rows.push(row_of(&witt.coords[&pg], &BigInt::from(1)));
    }
    if n >= 2 {
        // (b): V^i([a]) ⊗ a ⊗ γ ⊗ ⋯ for every a ∈ k× and slot position i
        for e in 0..q1 as u128 {
            let a = k.pow(&unit_gen, e);
            if k.is_zero(&a) {
                continue;
            }
            for i in 0..r {
                let mut coords = std::collections::BTreeMap::new();
                for &s in tset.elements() {
                    coords.insert(s, if s == p.pow(i) { a.clone() } else { k.zero_rep() });
                }
                let v = WittVector::from_coords(&tset, k, coords)?;
                rows.push(row_of(&witt.coords[&v], &BigInt::from(e)));
            }
            if q1 == 1 {
                break;
            }
        }
    }
    if n >= 3 {
        // (a): repeated unit slots — dlog(b)² against each Witt generator
        for e in 0..q1 as u128 {
            let e2 = BigInt::from(e) * BigInt::from(e);
            for g in &witt.generators {
                rows.push(row_of(&witt.coords[g], &e2));
            }
            if q1 == 1 {
                break;
            }
        }
    }
    // each cyclic tensor factor has one generator, so the width stays u
    debug_assert_eq!(tensor.num_generators(), u);
    let group = tensor.quotient_by(&rows)?;
    let pres = KatoPresentation {
        field: k.clone(),
        r,
        n,
        witt,
        unit_gen,
        unit_order: q1,
        tensor,
        group,
    };
    cache
        .lock()
        .unwrap()
        .insert((k.clone(), r, n), pres.clone());
    Ok(pres)
}

/// Invariant factors of the presented group.
pub fn invariants(k: &Field, r: u32, n: u32, bounds: &KatoBounds) -> Result<Vec<u64>> {
    Ok(build_presentation(k, r, n, bounds)?.invariants())
}

/// Invariant factors of a direct product given per-factor invariants.
pub fn product_invariants(lists: &[Vec<u64>]) -> Vec<u64> {
    let all: Vec<u64> = lists.iter().flatten().copied().collect();
    let g = FinPresAbGroup {
        generators: (0..all.len()).map(|i| format!("g{i}")).collect(),
        relations: all
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut row = vec![BigInt::zero(); all.len()];
                row[i] = BigInt::from(d);
                row
            })
            .collect(),
    };
    g.smith_invariants()
        .iter()
        .map(|d| u64::try_from(d).expect("finite"))
        .collect()
}

/// Checks M_S^n(k) ≅ ∏_m M_{p^{r_m}}^n(k) against the H-side model built
/// from the same profile: the presentation invariants per component must
/// multiply up to the per-component oracle invariants (ASW cokernel at
/// n = 1, the trivial group at n ≥ 2 over finite fields).
pub fn decm_check(s: &TruncationSet, k: &Field, n: u32, bounds: &KatoBounds) -> Result<bool> {
    let profile = s.decomposition_profile(k.p());
    let mut m_side = Vec::new();
    let mut h_side = Vec::new();
    for &(_, rm) in &profile {
        m_side.push(invariants(k, rm, n, bounds)?);
        h_side.push(if n == 1 {
            asw_cokernel(k, rm, bounds.elems)?.invariants
        } else {
            Vec::new()
        });
    }
    Ok(product_invariants(&m_side) == product_invariants(&h_side))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(bounds_elems: usize) -> KatoBounds {
        KatoBounds {
            elems: bounds_elems,
            units: 4096,
        }
    }

    #[test]
    fn asw_cokernel_examples() {
        let f2 = Field::prime(2).unwrap();
        let c = asw_cokernel(&f2, 2, 64).unwrap();
        assert_eq!(c.invariants, vec![4]); // ℘ = 0 on W_2(F_2)
        let f4 = Field::make_field(2, &[2], 0).unwrap();
        let c = asw_cokernel(&f4, 1, 64).unwrap();
        assert_eq!(c.invariants, vec![2]);
        let f3 = Field::prime(3).unwrap();
        let c = asw_cokernel(&f3, 1, 64).unwrap();
        assert_eq!(c.invariants, vec![3]);
    }

    #[test]
    fn asw_cokernel_is_cyclic_p_to_the_r() {
        for (p, d, rmax) in [(2u64, 1u32, 3u32), (2, 2, 3), (3, 1, 3), (3, 2, 2), (5, 1, 2)] {
            let k = Field::make_field(p, &[d], 0).unwrap();
            for r in 1..=rmax {
                if k.q().pow(r) > 4096 {
                    continue;
                }
                let c = asw_cokernel(&k, r, 4096).unwrap();
                assert_eq!(c.invariants, vec![p.pow(r)], "p={p} d={d} r={r}");
            }
        }
    }

    #[test]
    fn asw_class_lookup_is_a_homomorphism() {
        let f4 = Field::make_field(2, &[2], 0).unwrap();
        let c = asw_cokernel(&f4, 2, 64).unwrap();
        let s = TruncationSet::p_typical(2, 2);
        let all = WittVector::all_vectors(&s, &f4, 64).unwrap();
        for x in &all {
            // ℘-images land in the zero class
            assert_eq!(c.class_of(&x.wp().unwrap()).unwrap(), vec![0; c.invariants.len()]);
            for y in &all {
                let cx = c.class_of(x).unwrap();
                let cy = c.class_of(y).unwrap();
                let cs = c.class_of(&x.add(y).unwrap()).unwrap();
                let expect: Vec<u64> = cx
                    .iter()
                    .zip(&cy)
                    .zip(&c.invariants)
                    .map(|((a, b), d)| (a + b) % d)
                    .collect();
                assert_eq!(cs, expect);
            }
        }
    }

    #[test]
    fn presentation_trivial_cases() {
        let f2 = Field::prime(2).unwrap();
        // k× trivial ⇒ trivial group at n = 2
        assert!(invariants(&f2, 1, 2, &KatoBounds::default()).unwrap().is_empty());
        // F_4 ⊗ Z/3 = 0 before relations
        let f4 = Field::make_field(2, &[2], 0).unwrap();
        let pres = build_presentation(&f4, 1, 2, &KatoBounds::default()).unwrap();
        assert!(pres.tensor.is_trivial());
        assert!(pres.invariants().is_empty());
    }

    #[test]
    fn presentation_n1_equals_asw() {
        for (p, d, rmax) in [(2u64, 1u32, 3u32), (2, 2, 2), (3, 1, 2), (5, 1, 2)] {
            let k = Field::make_field(p, &[d], 0).unwrap();
            for r in 1..=rmax {
                let inv = invariants(&k, r, 1, &big(4096)).unwrap();
                let asw = asw_cokernel(&k, r, 4096).unwrap().invariants;
                assert_eq!(inv, asw, "p={p} d={d} r={r}");
                assert_eq!(inv, vec![p.pow(r)]);
            }
        }
    }

    #[test]
    fn presentation_vanishes_for_higher_n() {
        for (p, d) in [(2u64, 1u32), (2, 2), (3, 1), (5, 1)] {
            let k = Field::make_field(p, &[d], 0).unwrap();
            for r in 1..=2u32 {
                for n in 2..=3u32 {
                    assert!(
                        invariants(&k, r, n, &big(4096)).unwrap().is_empty(),
                        "p={p} d={d} r={r} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn relation_elements_have_zero_class() {
        let f4 = Field::make_field(2, &[2], 0).unwrap();
        let pres = build_presentation(&f4, 2, 2, &big(4096)).unwrap();
        let s = TruncationSet::p_typical(2, 2);
        // (c): ℘-images
        for a in WittVector::all_vectors(&s, &f4, 64).unwrap() {
            for e in 0..3u128 {
                let b = f4.pow(&pres.unit_gen, e);
                assert!(pres.class_is_zero(&a.wp().unwrap(), &[b]).unwrap());
            }
        }
        // (b): ⟨V^i([a]), a⟩
        for e in 0..3u128 {
            let a = f4.pow(&pres.unit_gen, e);
            for i in 0..2u32 {
                let coords: std::collections::BTreeMap<u64, Rep> = s
                    .elements()
                    .iter()
                    .map(|&sv| {
                        (sv, if sv == 2u64.pow(i) { a.clone() } else { f4.zero_rep() })
                    })
                    .collect();
                let v = WittVector::from_coords(&s, &f4, coords).unwrap();
                assert!(pres.class_is_zero(&v, std::slice::from_ref(&a)).unwrap());
            }
        }
    }

    #[test]
    fn class_of_detects_nonzero() {
        let f2 = Field::prime(2).unwrap();
        let pres = build_presentation(&f2, 2, 1, &KatoBounds::default()).unwrap();
        assert_eq!(pres.invariants(), vec![4]);
        let s = TruncationSet::p_typical(2, 2);
        let x = WittVector::teichmuller(&s, &f2, &f2.one_rep());
        let v = pres.element(&x, &[]).unwrap();
        assert!(!pres.group.is_zero_in(&v).unwrap());
        // (1,0) generates Z/4: order 4
        assert_eq!(pres.group.element_order(&v).unwrap(), BigInt::from(4));
    }

    #[test]
    fn decm_check_examples() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        // S = P_r reduces to invariants(k, r, n)
        assert!(decm_check(&TruncationSet::p_typical(2, 2), &f2, 1, &KatoBounds::default()).unwrap());
        // S = {1,2,3,6}, F_2, n=1: profile [(1,2),(3,2)] → Z/4 × Z/4
        let s = TruncationSet::validate(&[1, 2, 3, 6]).unwrap();
        assert!(decm_check(&s, &f2, 1, &KatoBounds::default()).unwrap());
        let profile = s.decomposition_profile(2);
        assert_eq!(profile, vec![(1, 2), (3, 2)]);
        let per: Vec<Vec<u64>> = profile
            .iter()
            .map(|&(_, rm)| asw_cokernel(&f2, rm, 64).unwrap().invariants)
            .collect();
        assert_eq!(product_invariants(&per), vec![4, 4]);
        // n = 2: trivial = trivial
        assert!(decm_check(&s, &f2, 2, &KatoBounds::default()).unwrap());
        assert!(decm_check(&s, &f3, 2, &KatoBounds::default()).unwrap());
    }

    #[test]
    fn bounds_are_enforced() {
        let f4 = Field::make_field(2, &[2], 0).unwrap();
        assert!(matches!(
            asw_cokernel(&f4, 4, 100),
            Err(Error::BoundExceeded { .. })
        ));
        let tight = KatoBounds { elems: 4, units: 2 };
        assert!(matches!(
            build_presentation(&f4, 1, 2, &tight),
            Err(Error::BoundExceeded { .. })
        ));
    }
}
