//! Vanishing certificates: move lists that rewrite a term to the empty
//! combination, generated from factorization data and checked by replay.

use super::{Move, MackeyTerm, Slot0, Symbol};
use crate::ff::factor::{factor_poly, roots};
use crate::ff::poly::Poly;
use crate::ff::{Field, Rep};
use crate::truncation::TruncationSet;
use crate::witt::WittVector;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Mutex;

/// Session tower: extensions adjoined on demand, cached by (base layer,
/// modulus) so repeated constructions hand back the identical field.
#[derive(Debug)]
pub struct Universe {
    pub base: Field,
    cache: Mutex<HashMap<(Field, Vec<Rep>), Field>>,
}

impl Universe {
    pub fn new(base: &Field) -> Self {
        Universe {
            base: base.clone(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// k[T]/(modulus) as a registered tower layer; the generator of the new
    /// layer is a root of the modulus.
    pub fn adjoin(&self, below: &Field, modulus: &[Rep]) -> Result<Field> {
        let key = (below.clone(), modulus.to_vec());
        let mut cache = self.cache.lock().unwrap();
        if let Some(f) = cache.get(&key) {
            return Ok(f.clone());
        }
        let var = format!("u{}", cache.len());
        let f = below.extend(&var, modulus.to_vec())?;
        cache.insert(key, f.clone());
        Ok(f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub initial: MackeyTerm,
    pub moves: Vec<Move>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub ok: bool,
    /// index of the first failing move; `moves.len()` when every move
    /// checked but the final term is not empty
    pub failed_at: Option<usize>,
}

/// Replays every move against its witnesses; ok iff the final term is the
/// empty combination. Failures are reported, never thrown.
pub fn verify_certificate(cert: &Certificate) -> VerifyOutcome {
    if cert.initial.validate().is_err() {
        return VerifyOutcome {
            ok: false,
            failed_at: Some(0),
        };
    }
    let mut cur = cert.initial.clone();
    for (i, mv) in cert.moves.iter().enumerate() {
        match cur.apply(mv) {
            Ok(next) => cur = next,
            Err(_) => {
                return VerifyOutcome {
                    ok: false,
                    failed_at: Some(i),
                }
            }
        }
    }
    if cur.is_empty() {
        VerifyOutcome {
            ok: true,
            failed_at: None,
        }
    } else {
        VerifyOutcome {
            ok: false,
            failed_at: Some(cert.moves.len()),
        }
    }
}

/// Generator state: moves are applied as they are emitted so symbol
/// indices always refer to the live term.
struct Builder {
    cur: MackeyTerm,
    moves: Vec<Move>,
}

impl Builder {
    fn new(initial: &MackeyTerm) -> Self {
        Builder {
            cur: initial.clone(),
            moves: Vec::new(),
        }
    }

    fn push(&mut self, mv: Move) -> Result<()> {
        self.cur = self.cur.apply(&mv)?;
        self.moves.push(mv);
        Ok(())
    }

    fn find(&self, sym: &Symbol) -> Result<usize> {
        self.cur
            .symbols
            .iter()
            .position(|(_, s)| s == sym)
            .ok_or(Error::ShapeMismatch("expected symbol not present".into()))
    }

    fn finish(self, initial: MackeyTerm) -> Result<Certificate> {
        if !self.cur.is_empty() {
            return Err(Error::ShapeMismatch(
                "generated moves do not close the term".into(),
            ));
        }
        Ok(Certificate {
            initial,
            moves: self.moves,
        })
    }
}

/// Solves l·x ≡ e (mod m) for prime l, i.e. finds an l-th root exponent;
/// None when l | m but l ∤ e.
fn root_exponent(l: u128, e: u128, m: u128) -> Option<u128> {
    if m.is_multiple_of(l) {
        if !e.is_multiple_of(l) {
            return None;
        }
        return Some(e / l);
    }
    // gcd(l, m) = 1 since l is prime: invert l mod m
    let (mut r0, mut r1) = (m as i128, l as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    Some(((t0.rem_euclid(m as i128)) as u128 * (e % m)) % m)
}

/// Proves {a, 1−a, a_2, …}_{k/k} ≡ 0 mod l, following the factorization of
/// T^l − a: an in-field l-th root gives a two-move certificate; otherwise
/// each irreducible factor is peeled off by multilinearity, expanded to its
/// root field by (PF), and killed by the exponent identity α^l = a.
pub fn steinberg_certificate(
    u: &Universe,
    a: &Rep,
    rest: &[Rep],
    l: u64,
    seed: u64,
) -> Result<Certificate> {
    let k = &u.base;
    if k.is_zero(a) {
        return Err(Error::DivisionByZero);
    }
    let one = k.one_rep();
    let one_minus_a = k.sub(&one, a);
    if k.is_zero(&one_minus_a) {
        return Err(Error::DivisionByZero);
    }
    let n = 2 + rest.len() as u32;
    let mut units = vec![one_minus_a.clone()];
    units.extend(rest.iter().cloned());
    let initial = MackeyTerm::with_symbols(
        k,
        0,
        n,
        l,
        vec![(
            1,
            Symbol {
                ext: k.clone(),
                slot0: Slot0::Unit(a.clone()),
                units,
            },
        )],
    )?;
    let mut b = Builder::new(&initial);
    if initial.is_empty() || rest.contains(&one) {
        // a unit slot already holds 1
        if !initial.is_empty() {
            b.push(Move::DropZero { index: 0 })?;
        }
        return b.finish(initial);
    }

    if l == k.p() {
        // 1 − a = (1 − a^{1/p})^p; the p-th root lives in k
        let s = k.pow(a, k.q() / k.p() as u128);
        let root = k.sub(&one, &s);
        b.push(Move::Scalar {
            index: 0,
            slot: 1,
            root: Slot0::Unit(root),
            multiple: l,
        })?;
        b.push(Move::ModDrop { index: 0 })?;
        return b.finish(initial);
    }

    let g = k.multiplicative_generator()?;
    let e = k.dlog(&g, a)?;
    if let Some(x) = root_exponent(l as u128, e, k.q() - 1) {
        // a = c^l directly
        let c = k.pow(&g, x);
        debug_assert_eq!(k.pow(&c, l as u128), *a);
        b.push(Move::Scalar {
            index: 0,
            slot: 0,
            root: Slot0::Unit(c),
            multiple: l,
        })?;
        b.push(Move::ModDrop { index: 0 })?;
        return b.finish(initial);
    }

    // T^l − a = Π f_i; 1 − a = Π f_i(1) = Π N_{K_i/k}(1 − α_i)
    let mut coeffs = vec![k.zero_rep(); l as usize + 1];
    coeffs[0] = k.neg(a);
    coeffs[l as usize] = one.clone();
    let f = Poly::new(k.clone(), coeffs);
    let factors = factor_poly(&f, seed)?;
    let mut pending: Vec<Poly> = Vec::new();
    for (fi, mult) in factors {
        for _ in 0..mult {
            pending.push(fi.clone());
        }
    }
    pending.retain(|fi| fi.eval(&one) != one); // value-1 factors need no move
    let mut remaining = one_minus_a;
    let last = pending.len().saturating_sub(1);
    for (i, fi) in pending.iter().enumerate() {
        if b.cur.is_empty() {
            break; // a merge closed the term early
        }
        let val = fi.eval(&one);
        let tail = Symbol {
            ext: k.clone(),
            slot0: Slot0::Unit(a.clone()),
            units: {
                let mut v = vec![remaining.clone()];
                v.extend(rest.iter().cloned());
                v
            },
        };
        let idx = b.find(&tail)?;
        let piece_units = {
            let mut v = vec![val.clone()];
            v.extend(rest.iter().cloned());
            v
        };
        if i != last {
            b.push(Move::Split {
                index: idx,
                slot: 1,
                first: Slot0::Unit(val.clone()),
            })?;
            remaining = k.mul(&remaining, &k.inv(&val)?);
        }
        let piece = Symbol {
            ext: k.clone(),
            slot0: Slot0::Unit(a.clone()),
            units: piece_units.clone(),
        };
        let j = b.find(&piece)?;
        let (ext, alpha) = if fi.degree() == Some(1) {
            (k.clone(), k.neg(&fi.coeff(0)))
        } else {
            let ki = u.adjoin(k, fi.coeffs())?;
            (ki.clone(), ki.gen_rep())
        };
        let witness = ext.sub(&ext.one_rep(), &alpha);
        b.push(Move::PfExpand {
            index: j,
            slot: 1,
            ext: ext.clone(),
            witness: Slot0::Unit(witness.clone()),
        })?;
        let emb = crate::ff::Embedding::canonical(k, &ext)?;
        let expanded = Symbol {
            ext: ext.clone(),
            slot0: Slot0::Unit(emb.apply(a)),
            units: {
                let mut v = vec![witness];
                v.extend(rest.iter().map(|x| emb.apply(x)));
                v
            },
        };
        let j2 = b.find(&expanded)?;
        b.push(Move::Scalar {
            index: j2,
            slot: 0,
            root: Slot0::Unit(alpha.clone()),
            multiple: l,
        })?;
        let scaled = Symbol {
            ext: ext.clone(),
            slot0: Slot0::Unit(alpha),
            units: expanded.units.clone(),
        };
        let j3 = b.find(&scaled)?;
        b.push(Move::ModDrop { index: j3 })?;
    }
    b.finish(initial)
}

/// Proves {a; b_1, …, b_{n−1}}_{k/k} = 0 in M_p^n(k) for the two shapes of
/// the symbol lemma: a repeated unit slot (kill via the in-field p-th root
/// and a scalar step into the level-1 Witt slot), or b_1 equal to the Witt
/// coordinate a (kill via an Artin–Schreier root of T^p − T − a, in k or in
/// a degree-p layer reached by (PF)).
pub fn as_vanishing_certificate(
    u: &Universe,
    w: &WittVector,
    units: &[Rep],
    seed: u64,
) -> Result<Certificate> {
    let k = &u.base;
    let p = k.p();
    if w.field() != Some(k) || *w.tset() != TruncationSet::p_typical(p, 1) {
        return Err(Error::MismatchedCarriers);
    }
    let n = 1 + units.len() as u32;
    let initial = MackeyTerm::with_symbols(
        k,
        1,
        n,
        0,
        vec![(
            1,
            Symbol {
                ext: k.clone(),
                slot0: Slot0::Witt(w.clone()),
                units: units.to_vec(),
            },
        )],
    )?;
    let mut b = Builder::new(&initial);
    if w.is_zero() {
        b.push(Move::DropZero { index: 0 })?;
        return b.finish(initial);
    }

    // repeated unit slots: b = s^p pulls a factor p into the Witt slot
    for i in 0..units.len() {
        for j in i + 1..units.len() {
            if units[i] == units[j] {
                let s = k.pow(&units[i], k.q() / p as u128);
                b.push(Move::Scalar {
                    index: 0,
                    slot: i + 1,
                    root: Slot0::Unit(s),
                    multiple: p,
                })?;
                b.push(Move::ScalarAbsorb {
                    index: 0,
                    slot: 0,
                    multiple: p,
                })?;
                b.push(Move::DropZero { index: 0 })?;
                return b.finish(initial);
            }
        }
    }

    // {a; a, …}: close with ℘(α) = a for a root α of T^p − T − a
    let coords = w.field_coords().ok_or(Error::NonFieldCoefficients)?;
    let a = coords.get(&1).cloned().unwrap_or_else(|| k.zero_rep());
    if units.first() != Some(&a) {
        if initial.symbols[0].1.is_zero_symbol() {
            b.push(Move::DropZero { index: 0 })?;
            return b.finish(initial);
        }
        return Err(Error::ShapeMismatch(
            "expected a repeated slot or units[0] equal to the Witt coordinate".into(),
        ));
    }
    let mut coeffs = vec![k.neg(&a), k.neg(&k.one_rep())];
    coeffs.extend(std::iter::repeat_n(k.zero_rep(), p as usize - 2));
    coeffs.push(k.one_rep());
    let f = Poly::new(k.clone(), coeffs);
    let rts = roots(&f, seed)?;
    if let Some(alpha) = rts.first() {
        b.push(Move::WpInsert {
            coeff: -1,
            ext: k.clone(),
            witness: WittVector::teichmuller(w.tset(), k, alpha),
            units: units.to_vec(),
        })?;
        return b.finish(initial);
    }
    // f irreducible: pass to K = k(α) where N_{K/k}(α) = a
    let kk = u.adjoin(k, f.coeffs())?;
    let alpha = kk.gen_rep();
    b.push(Move::PfExpand {
        index: 0,
        slot: 1,
        ext: kk.clone(),
        witness: Slot0::Unit(alpha.clone()),
    })?;
    let emb = crate::ff::Embedding::canonical(k, &kk)?;
    let mut up_units = vec![alpha.clone()];
    up_units.extend(units.iter().skip(1).map(|x| emb.apply(x)));
    b.push(Move::WpInsert {
        coeff: -1,
        ext: kk.clone(),
        witness: WittVector::teichmuller(&TruncationSet::p_typical(p, 1), &kk, &alpha),
        units: up_units,
    })?;
    b.finish(initial)
}

/// Proves {𝐚; b_1, …}_{K/k} = 0 for n ≥ 2 over finite fields: b_1 = c^{p^r}
/// since p^r is prime to the unit-group order, and p^r annihilates W_r.
pub fn perfect_vanishing_certificate(
    u: &Universe,
    w: &WittVector,
    units: &[Rep],
) -> Result<Certificate> {
    let ext = w.field().ok_or(Error::NonFieldCoefficients)?.clone();
    let p = ext.p();
    let r = w.tset().len() as u32;
    if *w.tset() != TruncationSet::p_typical(p, r) {
        return Err(Error::MismatchedCarriers);
    }
    if units.is_empty() {
        return Err(Error::ShapeMismatch("need n >= 2".into()));
    }
    let n = 1 + units.len() as u32;
    let initial = MackeyTerm::with_symbols(
        &u.base,
        r,
        n,
        0,
        vec![(
            1,
            Symbol {
                ext: ext.clone(),
                slot0: Slot0::Witt(w.clone()),
                units: units.to_vec(),
            },
        )],
    )?;
    let mut b = Builder::new(&initial);
    if initial.is_empty() {
        return b.finish(initial);
    }
    if initial.symbols[0].1.is_zero_symbol() {
        b.push(Move::DropZero { index: 0 })?;
        return b.finish(initial);
    }
    let pr = (p as u128)
        .checked_pow(r)
        .ok_or(Error::BoundExceeded {
            size: u128::MAX,
            bound: u128::MAX,
        })?;
    let c = ext.prime_to_p_root(&units[0], pr)?;
    b.push(Move::Scalar {
        index: 0,
        slot: 1,
        root: Slot0::Unit(c),
        multiple: pr as u64,
    })?;
    b.push(Move::ScalarAbsorb {
        index: 0,
        slot: 0,
        multiple: pr as u64,
    })?;
    b.push(Move::DropZero { index: 0 })?;
    b.finish(initial)
}
