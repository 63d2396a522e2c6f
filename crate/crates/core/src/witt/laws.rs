//! Universal Witt laws. The addition/negation/multiplication polynomials
//! for a truncation set are solved once over the rationals from the ghost
//! equations, checked to be integral, and cached for the whole process.

use crate::ff::{Field, Rep};
use crate::truncation::TruncationSet;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

/// Maximum |S| for which universal laws are solved symbolically.
pub const LAW_SET_BOUND: usize = 8;

/// Sparse multivariate polynomial over the rationals; keys are exponent
/// vectors over a fixed variable list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u16>, BigRational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0u16; nvars];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigRational::one());
        MPoly { nvars, terms }
    }

    fn insert(&mut self, e: Vec<u16>, c: BigRational) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u64) -> MPoly {
        let mut acc = MPoly {
            nvars: self.nvars,
            terms: [(vec![0u16; self.nvars], BigRational::one())].into(),
        };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

/// Same shape with proven-integral coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u16>, BigInt>,
}

impl IPoly {
    fn from_mpoly(p: &MPoly, at: u64) -> Result<IPoly> {
        if !p.is_integral() {
            return Err(Error::IntegralityFailure(at));
        }
        Ok(IPoly {
            nvars: p.nvars,
            terms: p
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.to_integer()))
                .collect(),
        })
    }

    pub fn eval_int(&self, vals: &[BigInt]) -> BigInt {
        assert_eq!(vals.len(), self.nvars);
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    t *= &vals[i];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_field(&self, field: &Field, vals: &[Rep]) -> Rep {
        assert_eq!(vals.len(), self.nvars);
        let p = BigInt::from(field.p());
        let mut acc = field.zero_rep();
        for (e, c) in &self.terms {
            let cm = c.mod_floor_u64(&p);
            if cm == 0 {
                continue;
            }
            let mut t = field.from_u64(cm);
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    t = field.mul(&t, &field.pow(&vals[i], exp as u128));
                }
            }
            acc = field.add(&acc, &t);
        }
        acc
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: &BigInt) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: &BigInt) -> u64 {
        use num_integer::Integer;
        let m = self.mod_floor(p);
        let (_, digits) = m.to_u64_digits();
        if digits.is_empty() {
            0
        } else {
            debug_assert!(!m.is_negative());
            digits[0]
        }
    }
}

/// Ghost polynomial w_s = Σ_{d|s} d·x_d^{s/d} in the alphabet starting at
/// `offset` (variable offset + index of d in the sorted truncation set).
fn ghost_mpoly(tset: &TruncationSet, s: u64, offset: usize, nvars: usize) -> MPoly {
    let mut out = MPoly::zero(nvars);
    for (i, &d) in tset.elements().iter().enumerate() {
        if !s.is_multiple_of(d) {
            continue;
        }
        let v = MPoly::var(nvars, offset + i).pow(s / d);
        out = out.add(&v.scale(&BigRational::from(BigInt::from(d))));
    }
    out
}

/// Solves law_s from ghost targets: for each s of `out_set` ascending,
/// ghost(law)_s must equal target(s), so
/// law_s = (target(s) − Σ_{d|s, d<s} d·law_d^(s/d)) / s.
fn solve_laws<F>(out_set: &TruncationSet, _nvars: usize, target: F) -> Result<BTreeMap<u64, IPoly>>
where
    F: Fn(u64) -> MPoly,
{
    let mut laws: BTreeMap<u64, MPoly> = BTreeMap::new();
    for &s in out_set.elements() {
        let mut rhs = target(s);
        for (&d, law) in &laws {
            if s % d == 0 && d < s {
                let t = law.pow(s / d).scale(&BigRational::from(BigInt::from(d)));
                rhs = rhs.sub(&t);
            }
        }
        let inv_s = BigRational::new(BigInt::one(), BigInt::from(s));
        laws.insert(s, rhs.scale(&inv_s));
    }
    laws
        .into_iter()
        .map(|(s, p)| IPoly::from_mpoly(&p, s).map(|ip| (s, ip)))
        .collect()
}

/// The cached universal laws of one truncation set. Binary laws use
/// variables [a_s..., b_s...] in sorted-s order; negation uses [a_s...].
pub struct LawSet {
    pub tset: TruncationSet,
    pub add: BTreeMap<u64, IPoly>,
    pub neg: BTreeMap<u64, IPoly>,
    pub mul: BTreeMap<u64, IPoly>,
}

fn build_law_set(tset: &TruncationSet) -> Result<LawSet> {
    if tset.len() > LAW_SET_BOUND {
        return Err(Error::BoundExceeded {
            size: tset.len() as u128,
            bound: LAW_SET_BOUND as u128,
        });
    }
    let n = tset.len();
    let add = solve_laws(tset, 2 * n, |s| {
        ghost_mpoly(tset, s, 0, 2 * n).add(&ghost_mpoly(tset, s, n, 2 * n))
    })?;
    let neg = solve_laws(tset, n, |s| ghost_mpoly(tset, s, 0, n).neg())?;
    let mul = solve_laws(tset, 2 * n, |s| {
        ghost_mpoly(tset, s, 0, 2 * n).mul(&ghost_mpoly(tset, s, n, 2 * n))
    })?;
    Ok(LawSet {
        tset: tset.clone(),
        add,
        neg,
        mul,
    })
}

type LawCache = Mutex<HashMap<TruncationSet, Arc<LawSet>>>;
type FrobCache = Mutex<HashMap<(TruncationSet, u64), Arc<BTreeMap<u64, IPoly>>>>;

static LAWS: OnceLock<LawCache> = OnceLock::new();
static FROBS: OnceLock<FrobCache> = OnceLock::new();

/// Laws for S, built on first use and shared afterwards. Concurrent first
/// use may build twice; the first insert wins, so the result is stable.
pub fn laws_for(tset: &TruncationSet) -> Result<Arc<LawSet>> {
    let cache = LAWS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(l) = cache.lock().unwrap().get(tset) {
        return Ok(l.clone());
    }
    let built = Arc::new(build_law_set(tset)?);
    let mut guard = cache.lock().unwrap();
    Ok(guard.entry(tset.clone()).or_insert(built).clone())
}

/// Integral laws for F_n: W_S → W_{S/n}; variables are the S-coordinates.
pub fn frobenius_laws(tset: &TruncationSet, n: u64) -> Result<Arc<BTreeMap<u64, IPoly>>> {
    let quot = tset.quotient(n).ok_or(Error::EmptyQuotient)?;
    let key = (tset.clone(), n);
    let cache = FROBS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(l) = cache.lock().unwrap().get(&key) {
        return Ok(l.clone());
    }
    if tset.len() > LAW_SET_BOUND {
        return Err(Error::BoundExceeded {
            size: tset.len() as u128,
            bound: LAW_SET_BOUND as u128,
        });
    }
    let nv = tset.len();
    let built = Arc::new(solve_laws(&quot, nv, |t| ghost_mpoly(tset, n * t, 0, nv))?);
    let mut guard = cache.lock().unwrap();
    Ok(guard.entry(key).or_insert(built).clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn singleton_laws_are_plain_ring_ops() {
        let s = TruncationSet::validate(&[1]).unwrap();
        let l = laws_for(&s).unwrap();
        // a + b
        let add1 = &l.add[&1];
        assert_eq!(add1.terms.len(), 2);
        assert_eq!(add1.terms[&vec![1, 0]], BigInt::one());
        assert_eq!(add1.terms[&vec![0, 1]], BigInt::one());
        // a·b
        let mul1 = &l.mul[&1];
        assert_eq!(mul1.terms.len(), 1);
        assert_eq!(mul1.terms[&vec![1, 1]], BigInt::one());
    }

    #[test]
    fn p_typical_2_2_sum_law() {
        // s_1 = a_1 + b_1 − a_0·b_0 in positional names; here variables are
        // [a@1, a@2, b@1, b@2]
        let s = TruncationSet::p_typical(2, 2);
        let l = laws_for(&s).unwrap();
        let add2 = &l.add[&2];
        let mut expected = BTreeMap::new();
        expected.insert(vec![0, 1, 0, 0], BigInt::from(1));
        expected.insert(vec![0, 0, 0, 1], BigInt::from(1));
        expected.insert(vec![1, 0, 1, 0], BigInt::from(-1));
        assert_eq!(add2.terms, expected);
    }

    #[test]
    fn laws_are_integral_for_mixed_sets() {
        for elems in [vec![1u64, 2, 3, 6], vec![1, 2, 4], vec![1, 3, 9], vec![1, 2, 3, 4, 6, 12]] {
            let s = TruncationSet::validate(&elems).unwrap();
            let l = laws_for(&s).unwrap();
            assert_eq!(l.add.len(), s.len());
            assert_eq!(l.mul.len(), s.len());
            assert_eq!(l.neg.len(), s.len());
        }
    }

    #[test]
    fn ghost_equation_holds_symbolically() {
        // verify w_s(add-law) = w_s(a) + w_s(b) by re-substitution
        let s = TruncationSet::validate(&[1, 2, 3, 6]).unwrap();
        let n = s.len();
        let l = laws_for(&s).unwrap();
        for &sv in s.elements() {
            // rebuild rational law polys and plug into the ghost
            let mut ghost_of_law = MPoly::zero(2 * n);
            for (i, &d) in s.elements().iter().enumerate() {
                if sv % d != 0 {
                    continue;
                }
                let law_d = &l.add[&d];
                let as_mpoly = MPoly {
                    nvars: 2 * n,
                    terms: law_d
                        .terms
                        .iter()
                        .map(|(e, c)| (e.clone(), BigRational::from(c.clone())))
                        .collect(),
                };
                let _ = i;
                ghost_of_law =
                    ghost_of_law.add(&as_mpoly.pow(sv / d).scale(&rat(d as i64)));
            }
            let want = ghost_mpoly(&s, sv, 0, 2 * n).add(&ghost_mpoly(&s, sv, n, 2 * n));
            assert_eq!(ghost_of_law, want);
        }
    }

    #[test]
    fn law_bound_is_enforced() {
        let s = TruncationSet::divisor_closure(&[24, 36]).unwrap();
        assert!(s.len() > LAW_SET_BOUND);
        assert!(matches!(
            laws_for(&s),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn frobenius_law_f2_on_12() {
        // F_2: W_{1,2} → W_{1}: single law w = a_1^2 + 2·a_2
        let s = TruncationSet::validate(&[1, 2]).unwrap();
        let f = frobenius_laws(&s, 2).unwrap();
        assert_eq!(f.len(), 1);
        let law = &f[&1];
        let mut expected = BTreeMap::new();
        expected.insert(vec![2, 0], BigInt::from(1));
        expected.insert(vec![0, 1], BigInt::from(2));
        assert_eq!(law.terms, expected);
    }
}
