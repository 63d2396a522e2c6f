//! Formal Mackey-product terms over a fixed finite-field tower: integer
//! combinations of symbols {x_0; b_1, …, b_{n−1}}_{K/k}, rewritten only by
//! locally checkable moves (projection formula, multilinearity, scalar
//! absorption, ℘-relations). Equality in the quotient is never decided;
//! certificates prove vanishing by replaying moves to the empty term.

pub mod cert;
pub mod maps;

pub use cert::{
    as_vanishing_certificate, perfect_vanishing_certificate, steinberg_certificate,
    verify_certificate, Certificate, Universe, VerifyOutcome,
};
pub use maps::{pi_map, t_map, GroupValue};

use crate::ff::{Embedding, Field, Rep};
use crate::truncation::TruncationSet;
use crate::witt::WittVector;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Slot-0 entry: a p-typical Witt vector (W_r-products) or a unit
/// (G_m-only products).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slot0 {
    Witt(WittVector),
    Unit(Rep),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol {
    /// the extension K the entries live over
    pub ext: Field,
    pub slot0: Slot0,
    /// unit slots 1..n−1
    pub units: Vec<Rep>,
}

impl Symbol {
    fn validate(&self, base: &Field, r: u32, n: u32) -> Result<()> {
        Embedding::canonical(base, &self.ext)?;
        if self.units.len() + 1 != n as usize {
            return Err(Error::ShapeMismatch(format!(
                "symbol has {} slots, term wants {n}",
                self.units.len() + 1
            )));
        }
        match &self.slot0 {
            Slot0::Witt(w) => {
                if r == 0 {
                    return Err(Error::NoWittSlot);
                }
                if w.field() != Some(&self.ext)
                    || *w.tset() != TruncationSet::p_typical(self.ext.p(), r)
                {
                    return Err(Error::MismatchedCarriers);
                }
            }
            Slot0::Unit(u) => {
                if r != 0 {
                    return Err(Error::NoWittSlot);
                }
                if self.ext.is_zero(u) {
                    return Err(Error::DivisionByZero);
                }
            }
        }
        if self.units.iter().any(|u| self.ext.is_zero(u)) {
            return Err(Error::DivisionByZero);
        }
        Ok(())
    }

    /// Literal zero of the tensor group: zero Witt entry or a unit slot
    /// holding 1.
    fn is_zero_symbol(&self) -> bool {
        let one = self.ext.one_rep();
        match &self.slot0 {
            Slot0::Witt(w) => {
                if w.is_zero() {
                    return true;
                }
            }
            Slot0::Unit(u) => {
                if *u == one {
                    return true;
                }
            }
        }
        self.units.contains(&one)
    }
}

/// Integer-linear combination of symbols with a common base field, Witt
/// level r (0 = G_m-only) and slot count n; coefficients live in Z, or in
/// Z/modulus when `modulus > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MackeyTerm {
    pub base: Field,
    pub r: u32,
    pub n: u32,
    pub modulus: u64,
    pub symbols: Vec<(i64, Symbol)>,
}

impl MackeyTerm {
    pub fn empty(base: &Field, r: u32, n: u32, modulus: u64) -> Self {
        MackeyTerm {
            base: base.clone(),
            r,
            n,
            modulus,
            symbols: Vec::new(),
        }
    }

    pub fn with_symbols(
        base: &Field,
        r: u32,
        n: u32,
        modulus: u64,
        symbols: Vec<(i64, Symbol)>,
    ) -> Result<Self> {
        for (_, s) in &symbols {
            s.validate(base, r, n)?;
        }
        let mut t = MackeyTerm {
            base: base.clone(),
            r,
            n,
            modulus,
            symbols,
        };
        t.coalesce();
        Ok(t)
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Re-checks the symbol invariants, e.g. after deserialization.
    pub fn validate(&self) -> Result<()> {
        for (_, s) in &self.symbols {
            s.validate(&self.base, self.r, self.n)?;
        }
        Ok(())
    }

    /// Free-abelian-group arithmetic: merge identical symbols, drop zero
    /// coefficients. Order of first appearance is kept.
    fn coalesce(&mut self) {
        let mut out: Vec<(i64, Symbol)> = Vec::new();
        for (c, s) in self.symbols.drain(..) {
            match out.iter_mut().find(|(_, t)| *t == s) {
                Some((c0, _)) => *c0 += c,
                None => out.push((c, s)),
            }
        }
        out.retain(|(c, _)| *c != 0);
        self.symbols = out;
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.base != other.base
            || self.r != other.r
            || self.n != other.n
            || self.modulus != other.modulus
        {
            return Err(Error::MismatchedCarriers);
        }
        let mut t = self.clone();
        t.symbols.extend(other.symbols.iter().cloned());
        t.coalesce();
        Ok(t)
    }

    pub fn neg(&self) -> Self {
        let mut t = self.clone();
        for (c, _) in &mut t.symbols {
            *c = -*c;
        }
        t
    }

    fn get(&self, index: usize) -> Result<&(i64, Symbol)> {
        self.symbols.get(index).ok_or(Error::BadWitness(index))
    }

    /// Applies one rewrite move, checking its witnesses.
    pub fn apply(&self, mv: &Move) -> Result<MackeyTerm> {
        let mut t = self.clone();
        match mv {
            Move::PfExpand {
                index,
                slot,
                ext,
                witness,
            } => {
                let (c, sym) = t.get(*index)?.clone();
                let emb = Embedding::canonical(&sym.ext, ext)?;
                let entry = slot_entry(&sym, *slot)?;
                let traced = trace_down(witness, &emb)?;
                if traced != entry {
                    return Err(Error::BadWitness(*index));
                }
                let mut new = restrict_symbol(&sym, &emb)?;
                set_slot(&mut new, *slot, witness.clone())?;
                new.validate(&t.base, t.r, t.n)?;
                t.symbols[*index] = (c, new);
            }
            Move::PfContract {
                index,
                slot,
                target,
            } => {
                let (c, sym) = t.get(*index)?.clone();
                let emb = Embedding::canonical(target, &sym.ext)?;
                let entry = slot_entry(&sym, *slot)?;
                // mask the distinguished slot so the preimage check covers
                // exactly the other slots
                let mut masked = sym.clone();
                let trivial = match &entry {
                    Slot0::Witt(w) => Slot0::Witt(WittVector::zero(w.tset(), &sym.ext)),
                    Slot0::Unit(_) => Slot0::Unit(sym.ext.one_rep()),
                };
                set_slot(&mut masked, *slot, trivial)?;
                let mut new = preimage_symbol(&masked, &emb)?;
                set_slot(&mut new, *slot, trace_down(&entry, &emb)?)?;
                new.validate(&t.base, t.r, t.n)?;
                t.symbols[*index] = (c, new);
            }
            Move::Split { index, slot, first } => {
                let (c, sym) = t.get(*index)?.clone();
                let entry = slot_entry(&sym, *slot)?;
                let second = match (&entry, first) {
                    (Slot0::Witt(e), Slot0::Witt(f)) => Slot0::Witt(e.sub(f)?),
                    (Slot0::Unit(e), Slot0::Unit(f)) => {
                        Slot0::Unit(sym.ext.mul(e, &sym.ext.inv(f)?))
                    }
                    _ => return Err(Error::BadWitness(*index)),
                };
                let mut a = sym.clone();
                set_slot(&mut a, *slot, first.clone())?;
                let mut b = sym.clone();
                set_slot(&mut b, *slot, second)?;
                a.validate(&t.base, t.r, t.n)?;
                b.validate(&t.base, t.r, t.n)?;
                t.symbols.splice(*index..=*index, [(c, a), (c, b)]);
            }
            Move::Merge { index, other, slot } => {
                if index == other {
                    return Err(Error::BadWitness(*index));
                }
                let (c1, s1) = t.get(*index)?.clone();
                let (c2, s2) = t.get(*other)?.clone();
                let mut s1x = s1.clone();
                let e2 = slot_entry(&s2, *slot)?;
                set_slot(&mut s1x, *slot, e2.clone())?;
                if c1 != c2 || s1x != s2 {
                    return Err(Error::BadWitness(*index));
                }
                let merged = match (slot_entry(&s1, *slot)?, e2) {
                    (Slot0::Witt(a), Slot0::Witt(b)) => Slot0::Witt(a.add(&b)?),
                    (Slot0::Unit(a), Slot0::Unit(b)) => Slot0::Unit(s1.ext.mul(&a, &b)),
                    _ => return Err(Error::BadWitness(*index)),
                };
                let mut new = s1.clone();
                set_slot(&mut new, *slot, merged)?;
                let (hi, lo) = (index.max(other), index.min(other));
                t.symbols.remove(*hi);
                t.symbols[*lo] = (c1, new);
            }
            Move::Scalar {
                index,
                slot,
                root,
                multiple,
            } => {
                let (c, sym) = t.get(*index)?.clone();
                let entry = slot_entry(&sym, *slot)?;
                let expect = power_of(root, *multiple, &sym.ext)?;
                if expect != entry {
                    return Err(Error::BadWitness(*index));
                }
                let nc = c
                    .checked_mul(i64::try_from(*multiple).map_err(|_| Error::BadWitness(*index))?)
                    .ok_or(Error::BadWitness(*index))?;
                let mut new = sym.clone();
                set_slot(&mut new, *slot, root.clone())?;
                new.validate(&t.base, t.r, t.n)?;
                t.symbols[*index] = (nc, new);
            }
            Move::ScalarAbsorb {
                index,
                slot,
                multiple,
            } => {
                let (c, sym) = t.get(*index)?.clone();
                let m = i64::try_from(*multiple).map_err(|_| Error::BadWitness(*index))?;
                if m == 0 || c % m != 0 {
                    return Err(Error::BadWitness(*index));
                }
                let entry = slot_entry(&sym, *slot)?;
                let mut new = sym.clone();
                set_slot(&mut new, *slot, power_of(&entry, *multiple, &sym.ext)?)?;
                t.symbols[*index] = (c / m, new);
            }
            Move::WpInsert {
                coeff,
                ext,
                witness,
                units,
            } => {
                if t.r == 0 {
                    return Err(Error::NoWittSlot);
                }
                let sym = Symbol {
                    ext: ext.clone(),
                    slot0: Slot0::Witt(witness.wp()?),
                    units: units.clone(),
                };
                sym.validate(&t.base, t.r, t.n)?;
                t.symbols.push((*coeff, sym));
            }
            Move::DropZero { index } => {
                let (_, sym) = t.get(*index)?;
                if !sym.is_zero_symbol() {
                    return Err(Error::BadWitness(*index));
                }
                t.symbols.remove(*index);
            }
            Move::ModDrop { index } => {
                let (c, _) = t.get(*index)?;
                if t.modulus == 0 || c.rem_euclid(t.modulus as i64) != 0 {
                    return Err(Error::BadWitness(*index));
                }
                t.symbols.remove(*index);
            }
        }
        t.coalesce();
        Ok(t)
    }
}

/// Rewrite moves; each carries the witnesses needed to check it locally.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Move {
    /// slot entry = tr_{L/K}(witness): pass to L, witness in the slot,
    /// restrictions elsewhere
    PfExpand {
        index: usize,
        slot: usize,
        ext: Field,
        witness: Slot0,
    },
    /// all other slots are restrictions from `target`: descend, taking the
    /// trace/norm in the distinguished slot
    PfContract {
        index: usize,
        slot: usize,
        target: Field,
    },
    /// split a slot entry as first ∘ rest (multilinearity)
    Split {
        index: usize,
        slot: usize,
        first: Slot0,
    },
    /// inverse of Split for two symbols equal away from `slot`
    Merge {
        index: usize,
        other: usize,
        slot: usize,
    },
    /// entry = root^multiple ⇒ coefficient picks up the exponent
    Scalar {
        index: usize,
        slot: usize,
        root: Slot0,
        multiple: u64,
    },
    /// coefficient divisible by `multiple` ⇒ push it into the slot
    ScalarAbsorb {
        index: usize,
        slot: usize,
        multiple: u64,
    },
    /// append coeff·{℘(witness); units}: zero in the ℘-quotient
    WpInsert {
        coeff: i64,
        ext: Field,
        witness: WittVector,
        units: Vec<Rep>,
    },
    /// delete a symbol with a literally zero tensor factor
    DropZero { index: usize },
    /// delete a symbol whose coefficient vanishes mod the term modulus
    ModDrop { index: usize },
}

fn slot_entry(sym: &Symbol, slot: usize) -> Result<Slot0> {
    if slot == 0 {
        Ok(sym.slot0.clone())
    } else {
        sym.units
            .get(slot - 1)
            .map(|u| Slot0::Unit(u.clone()))
            .ok_or(Error::ShapeMismatch(format!("no slot {slot}")))
    }
}

fn set_slot(sym: &mut Symbol, slot: usize, entry: Slot0) -> Result<()> {
    if slot == 0 {
        sym.slot0 = entry;
        return Ok(());
    }
    let u = sym
        .units
        .get_mut(slot - 1)
        .ok_or(Error::ShapeMismatch(format!("no slot {slot}")))?;
    match entry {
        Slot0::Unit(x) => *u = x,
        Slot0::Witt(_) => return Err(Error::NoWittSlot),
    }
    Ok(())
}

/// trace (Witt slot) / norm (unit slot) down an embedding
fn trace_down(entry: &Slot0, emb: &Embedding) -> Result<Slot0> {
    Ok(match entry {
        Slot0::Witt(w) => Slot0::Witt(w.trace_along(emb)?),
        Slot0::Unit(u) => Slot0::Unit(emb.norm(u)?),
    })
}

fn power_of(entry: &Slot0, m: u64, field: &Field) -> Result<Slot0> {
    Ok(match entry {
        Slot0::Witt(w) => Slot0::Witt(w.scalar(m)?),
        Slot0::Unit(u) => Slot0::Unit(field.pow(u, m as u128)),
    })
}

/// componentwise restriction of every slot along an embedding
fn restrict_symbol(sym: &Symbol, emb: &Embedding) -> Result<Symbol> {
    Ok(Symbol {
        ext: emb.to.clone(),
        slot0: match &sym.slot0 {
            Slot0::Witt(w) => Slot0::Witt(w.map_coords(emb)?),
            Slot0::Unit(u) => Slot0::Unit(emb.apply(u)),
        },
        units: sym.units.iter().map(|u| emb.apply(u)).collect(),
    })
}

fn witt_preimage(w: &WittVector, emb: &Embedding) -> Result<WittVector> {
    let coords = w.field_coords().ok_or(Error::NonFieldCoefficients)?;
    let pulled: BTreeMap<u64, Rep> = coords
        .iter()
        .map(|(&s, x)| Ok((s, emb.preimage(x)?)))
        .collect::<Result<_>>()?;
    WittVector::from_coords(w.tset(), &emb.from, pulled)
}

/// preimage of every slot; errors if any entry is not a restriction
fn preimage_symbol(sym: &Symbol, emb: &Embedding) -> Result<Symbol> {
    Ok(Symbol {
        ext: emb.from.clone(),
        slot0: match &sym.slot0 {
            Slot0::Witt(w) => Slot0::Witt(witt_preimage(w, emb)?),
            Slot0::Unit(u) => Slot0::Unit(emb.preimage(u)?),
        },
        units: sym
            .units
            .iter()
            .map(|u| emb.preimage(u))
            .collect::<Result<_>>()?,
    })
}

/// tr_{K'/K}: relabel the base field (symbols keep their extensions).
pub fn tr_term(term: &MackeyTerm, down_to: &Field) -> Result<MackeyTerm> {
    Embedding::canonical(down_to, &term.base)?;
    let mut t = term.clone();
    t.base = down_to.clone();
    Ok(t)
}

/// res_{K'/K}: push every symbol through the tensor decomposition
/// L ⊗_K K' = ⊕ L'_i.
pub fn res_term(term: &MackeyTerm, up_to: &Field, seed: u64) -> Result<MackeyTerm> {
    Embedding::canonical(&term.base, up_to)?;
    let mut out = MackeyTerm::empty(up_to, term.r, term.n, term.modulus);
    for (c, sym) in &term.symbols {
        for comp in crate::ff::tensor_decompose(&sym.ext, up_to, &term.base, seed)? {
            let new = restrict_symbol(sym, &comp.left)?;
            out.symbols.push((c * comp.multiplicity as i64, new));
        }
    }
    out.coalesce();
    Ok(out)
}

/// ℘ ⊗ id: apply ℘ to slot 0 of every symbol.
pub fn wp_term(term: &MackeyTerm) -> Result<MackeyTerm> {
    let mut t = term.clone();
    for (_, sym) in &mut t.symbols {
        match &sym.slot0 {
            Slot0::Witt(w) => sym.slot0 = Slot0::Witt(w.wp()?),
            Slot0::Unit(_) => return Err(Error::NoWittSlot),
        }
    }
    // ℘ may create zero slots; keep them — terms are not auto-normalized
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w1(field: &Field, a: &Rep) -> WittVector {
        WittVector::teichmuller(&TruncationSet::p_typical(field.p(), 1), field, a)
    }

    #[test]
    fn pf_expand_and_contract_roundtrip() {
        // {a, N_{F_16/F_4}(β)}_{F_4} → {res a, β}_{F_16} → back
        let f4 = Field::make_field(2, &[2], 0).unwrap();
        let f16 = f4
            .extend(
                "y",
                crate::ff::poly::random_irreducible(&f4, 2, &mut ChaCha8Rng::seed_from_u64(1))
                    .unwrap(),
            )
            .unwrap();
        let emb = Embedding::canonical(&f4, &f16).unwrap();
        let beta = f16.gen_rep();
        let nb = emb.norm(&beta).unwrap();
        let a = f4.gen_rep();
        let term = MackeyTerm::with_symbols(
            &f4,
            1,
            2,
            0,
            vec![(
                1,
                Symbol {
                    ext: f4.clone(),
                    slot0: Slot0::Witt(w1(&f4, &a)),
                    units: vec![nb.clone()],
                },
            )],
        )
        .unwrap();
        let up = term
            .apply(&Move::PfExpand {
                index: 0,
                slot: 1,
                ext: f16.clone(),
                witness: Slot0::Unit(beta.clone()),
            })
            .unwrap();
        assert_eq!(up.symbols[0].1.ext, f16);
        assert_eq!(up.symbols[0].1.units[0], beta);
        let down = up
            .apply(&Move::PfContract {
                index: 0,
                slot: 1,
                target: f4.clone(),
            })
            .unwrap();
        assert_eq!(down, term);
        // wrong witness is rejected
        assert!(term
            .apply(&Move::PfExpand {
                index: 0,
                slot: 1,
                ext: f16.clone(),
                witness: Slot0::Unit(f16.mul(&beta, &beta)),
            })
            .is_err());
        // identity move: L = K
        let id = term
            .apply(&Move::PfExpand {
                index: 0,
                slot: 1,
                ext: f4.clone(),
                witness: Slot0::Unit(nb),
            })
            .unwrap();
        assert_eq!(id, term);
    }

    #[test]
    fn split_merge_scalar() {
        let f9 = Field::make_field(3, &[2], 0).unwrap();
        let g = f9.multiplicative_generator().unwrap();
        let g2 = f9.mul(&g, &g);
        let sym = Symbol {
            ext: f9.clone(),
            slot0: Slot0::Unit(g.clone()),
            units: vec![f9.mul(&g, &g2)],
        };
        let term = MackeyTerm::with_symbols(&f9, 0, 2, 0, vec![(1, sym)]).unwrap();
        let split = term
            .apply(&Move::Split {
                index: 0,
                slot: 1,
                first: Slot0::Unit(g.clone()),
            })
            .unwrap();
        assert_eq!(split.symbols.len(), 2);
        assert_eq!(split.symbols[1].1.units[0], g2);
        let merged = split
            .apply(&Move::Merge {
                index: 0,
                other: 1,
                slot: 1,
            })
            .unwrap();
        assert_eq!(merged, term);
        // scalar: g² in slot 1 of the second summand becomes 2·{…, g, …}
        let sc = split
            .apply(&Move::Scalar {
                index: 1,
                slot: 1,
                root: Slot0::Unit(g.clone()),
                multiple: 2,
            })
            .unwrap();
        // both summands now hold g in slot 1 — they coalesce to 3·{g, g}
        assert_eq!(sc.symbols.len(), 1);
        assert_eq!(sc.symbols[0].0, 3);
        let back = sc
            .apply(&Move::ScalarAbsorb {
                index: 0,
                slot: 1,
                multiple: 3,
            })
            .unwrap();
        assert_eq!(back.symbols[0].0, 1);
        assert_eq!(back.symbols[0].1.units[0], f9.pow(&g, 3));
    }

    #[test]
    fn wp_insert_cancels_matching_symbol() {
        // ℘(ω) = ω² + ω = 1 in F_4
        let f4 = Field::make_field(2, &[2], 0).unwrap();
        let omega = f4.gen_rep();
        let one = f4.one_rep();
        let term = MackeyTerm::with_symbols(
            &f4,
            1,
            2,
            0,
            vec![(
                1,
                Symbol {
                    ext: f4.clone(),
                    slot0: Slot0::Witt(w1(&f4, &one)),
                    units: vec![omega.clone()],
                },
            )],
        )
        .unwrap();
        let t = term
            .apply(&Move::WpInsert {
                coeff: -1,
                ext: f4.clone(),
                witness: w1(&f4, &omega),
                units: vec![omega.clone()],
            })
            .unwrap();
        assert!(t.is_empty());
    }

    #[test]
    fn drop_zero_and_mod_drop() {
        let f4 = Field::make_field(2, &[2], 0).unwrap();
        let one = f4.one_rep();
        let sym = Symbol {
            ext: f4.clone(),
            slot0: Slot0::Unit(f4.gen_rep()),
            units: vec![one.clone()],
        };
        let term = MackeyTerm::with_symbols(&f4, 0, 2, 3, vec![(1, sym.clone())]).unwrap();
        assert!(term
            .apply(&Move::DropZero { index: 0 })
            .unwrap()
            .is_empty());
        let mut t3 = term.clone();
        t3.symbols[0].0 = 3;
        assert!(t3.apply(&Move::ModDrop { index: 0 }).unwrap().is_empty());
        assert!(term.apply(&Move::ModDrop { index: 0 }).is_err());
        let sym_nonzero = Symbol {
            ext: f4.clone(),
            slot0: Slot0::Unit(f4.gen_rep()),
            units: vec![f4.gen_rep()],
        };
        let t = MackeyTerm::with_symbols(&f4, 0, 2, 0, vec![(1, sym_nonzero)]).unwrap();
        assert!(t.apply(&Move::DropZero { index: 0 }).is_err());
    }

    #[test]
    fn tr_res_composition_counts_conjugates() {
        // res ∘ tr along F_{q²}/F_q of a symbol over F_{q²}: 2 conjugates
        let f3 = Field::prime(3).unwrap();
        let f9 = Field::make_field(3, &[2], 0).unwrap();
        let g = f9.multiplicative_generator().unwrap();
        let term = MackeyTerm::with_symbols(
            &f9,
            1,
            2,
            0,
            vec![(
                1,
                Symbol {
                    ext: f9.clone(),
                    slot0: Slot0::Witt(w1(&f9, &g)),
                    units: vec![g.clone()],
                },
            )],
        )
        .unwrap();
        let down = tr_term(&term, &f3).unwrap();
        assert_eq!(down.base, f3);
        let back = res_term(&down, &f9, 0).unwrap();
        // gcd(2,2) = 2 copies (Frobenius-twisted embeddings)
        assert_eq!(back.symbols.iter().map(|(c, _)| c).sum::<i64>(), 2);
        // tr_{K/K} = id
        assert_eq!(tr_term(&term, &f9).unwrap(), term);
    }

    #[test]
    fn wp_term_examples() {
        let f2 = Field::prime(2).unwrap();
        let one = f2.one_rep();
        let term = MackeyTerm::with_symbols(
            &f2,
            1,
            2,
            0,
            vec![(
                1,
                Symbol {
                    ext: f2.clone(),
                    slot0: Slot0::Witt(w1(&f2, &one)),
                    units: vec![one.clone()],
                },
            )],
        )
        .unwrap();
        // ℘ = 0 on W_1(F_2): slot 0 becomes the zero vector
        let w = wp_term(&term).unwrap();
        assert!(matches!(&w.symbols[0].1.slot0, Slot0::Witt(v) if v.is_zero()));
        // additivity
        let f4 = Field::make_field(2, &[2], 0).unwrap();
        let omega = f4.gen_rep();
        let mk = |a: &Rep| {
            MackeyTerm::with_symbols(
                &f4,
                1,
                2,
                0,
                vec![(
                    1,
                    Symbol {
                        ext: f4.clone(),
                        slot0: Slot0::Witt(w1(&f4, a)),
                        units: vec![omega.clone()],
                    },
                )],
            )
            .unwrap()
        };
        let a = mk(&omega);
        let b = mk(&f4.one_rep());
        assert_eq!(
            wp_term(&a.add(&b).unwrap()).unwrap(),
            wp_term(&a).unwrap().add(&wp_term(&b).unwrap()).unwrap()
        );
        assert!(wp_term(&MackeyTerm::empty(&f4, 1, 2, 0)).unwrap().is_empty());
    }

    #[test]
    fn term_serde_roundtrip() {
        let f4 = Field::make_field(2, &[2], 0).unwrap();
        let term = MackeyTerm::with_symbols(
            &f4,
            1,
            2,
            0,
            vec![(
                2,
                Symbol {
                    ext: f4.clone(),
                    slot0: Slot0::Witt(w1(&f4, &f4.gen_rep())),
                    units: vec![f4.gen_rep()],
                },
            )],
        )
        .unwrap();
        let json = serde_json::to_string(&term).unwrap();
        let back: MackeyTerm = serde_json::from_str(&json).unwrap();
        assert_eq!(back, term);
    }
}
