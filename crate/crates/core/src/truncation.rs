//! Finite truncation sets: nonempty, divisor-closed sets of positive
//! integers. They index Witt vector coordinates.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TruncationSet {
    elements: Vec<u64>,
}

impl TruncationSet {
    /// Validates that `elements` is a nonempty divisor-closed set.
    pub fn validate(elements: &[u64]) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyTruncationSet);
        }
        let mut v: Vec<u64> = elements.to_vec();
        v.sort_unstable();
        v.dedup();
        if v[0] == 0 {
            return Err(Error::NotDivisorClosed(0));
        }
        for &s in &v {
            for t in 1..=s {
                if s % t == 0 && v.binary_search(&t).is_err() {
                    return Err(Error::NotDivisorClosed(t));
                }
            }
        }
        Ok(TruncationSet { elements: v })
    }

    /// Smallest truncation set containing `elements`.
    pub fn divisor_closure(elements: &[u64]) -> Result<Self> {
        if elements.is_empty() || elements.contains(&0) {
            return Err(Error::EmptyTruncationSet);
        }
        let mut v = Vec::new();
        for &s in elements {
            for t in 1..=s {
                if s % t == 0 {
                    v.push(t);
                }
            }
        }
        v.sort_unstable();
        v.dedup();
        Ok(TruncationSet { elements: v })
    }

    /// The p-typical set `P_r = {1, p, ..., p^(r-1)}`.
    pub fn p_typical(p: u64, r: u32) -> Self {
        let mut v = Vec::with_capacity(r as usize);
        let mut x = 1u64;
        for _ in 0..r {
            v.push(x);
            x *= p;
        }
        TruncationSet { elements: v }
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, s: u64) -> bool {
        self.elements.binary_search(&s).is_ok()
    }

    pub fn max(&self) -> u64 {
        *self.elements.last().unwrap()
    }

    /// `S/n = {s | ns in S}`. May be empty (`None`), the caller treats
    /// `W_empty` as the zero ring.
    pub fn quotient(&self, n: u64) -> Option<Self> {
        let v: Vec<u64> = self
            .elements
            .iter()
            .filter(|&&s| s % n == 0)
            .map(|&s| s / n)
            .collect();
        if v.is_empty() {
            None
        } else {
            Some(TruncationSet { elements: v })
        }
    }

    /// `pS = S ∪ {ps | s in S}`.
    pub fn p_extend(&self, p: u64) -> Self {
        let mut v = self.elements.clone();
        v.extend(self.elements.iter().map(|&s| p * s));
        v.sort_unstable();
        v.dedup();
        TruncationSet { elements: v }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.elements.iter().all(|&s| other.contains(s))
    }

    /// Splits each `s` as `m * p^i` with `gcd(m, p) = 1` and returns, for
    /// every coprime `m` in the set, the length `r_m` of the p-typical part
    /// of `S/m`.
    ///
    /// `r_m = #(S/m ∩ {1, p, p^2, ...})`, so that the profile cardinalities
    /// sum to `|S|`. (The printed formula with an extra `+1` breaks that
    /// counting identity; see the decomposition tests.)
    pub fn decomposition_profile(&self, p: u64) -> Vec<(u64, u32)> {
        let mut profile = Vec::new();
        for &m in &self.elements {
            if m % p == 0 {
                continue;
            }
            let quot = self.quotient(m).expect("m in S so 1 in S/m");
            let mut r = 0u32;
            let mut pw = 1u64;
            while quot.contains(pw) {
                r += 1;
                pw *= p;
            }
            profile.push((m, r));
        }
        debug_assert_eq!(
            profile.iter().map(|&(_, r)| r as usize).sum::<usize>(),
            self.elements.len()
        );
        profile
    }
}

impl std::fmt::Display for TruncationSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let strs: Vec<String> = self.elements.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", strs.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_accepts_closed_sets() {
        assert!(TruncationSet::validate(&[1, 2, 4]).is_ok());
        assert!(TruncationSet::validate(&[1]).is_ok());
    }

    #[test]
    fn validate_rejects_missing_divisor() {
        assert!(matches!(
            TruncationSet::validate(&[2, 4]),
            Err(Error::NotDivisorClosed(1))
        ));
        assert!(matches!(
            TruncationSet::validate(&[]),
            Err(Error::EmptyTruncationSet)
        ));
    }

    #[test]
    fn closure_of_12() {
        let s = TruncationSet::divisor_closure(&[12]).unwrap();
        assert_eq!(s.elements(), &[1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn quotient_examples() {
        let s = TruncationSet::validate(&[1, 2, 3, 4, 6]).unwrap();
        assert_eq!(s.quotient(2).unwrap().elements(), &[1, 2, 3]);
        let one = TruncationSet::validate(&[1]).unwrap();
        assert!(one.quotient(2).is_none());
    }

    #[test]
    fn p_typical_example() {
        assert_eq!(TruncationSet::p_typical(2, 3).elements(), &[1, 2, 4]);
    }

    #[test]
    fn profile_examples() {
        let s = TruncationSet::validate(&[1, 2, 3, 4, 6]).unwrap();
        assert_eq!(s.decomposition_profile(2), vec![(1, 3), (3, 2)]);
        let p3 = TruncationSet::p_typical(3, 4);
        assert_eq!(p3.decomposition_profile(3), vec![(1, 4)]);
        let one = TruncationSet::validate(&[1]).unwrap();
        assert_eq!(one.decomposition_profile(5), vec![(1, 1)]);
    }

    #[test]
    fn quotient_composes() {
        let s = TruncationSet::divisor_closure(&[24, 18]).unwrap();
        for a in 1..5u64 {
            for b in 1..5u64 {
                let lhs = s.quotient(a).and_then(|t| t.quotient(b));
                let rhs = s.quotient(a * b);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn p_extend_is_superset_truncation_set() {
        let s = TruncationSet::divisor_closure(&[6]).unwrap();
        let e = s.p_extend(2);
        assert!(s.is_subset_of(&e));
        assert!(TruncationSet::validate(e.elements()).is_ok());
        assert_eq!(e.elements(), &[1, 2, 3, 4, 6, 12]);
    }
}
