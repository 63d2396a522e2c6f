//! Field embeddings. An embedding is stored as the images of the source
//! tower's layer generators; preimages are computed by an F_p-linear solve
//! on flattened coordinates. Embedding choices are pinned to the
//! lexicographically least root so a session sees consistent maps.

use super::{factor, Field, Poly, Rep};
use crate::{Error, Result};
use num_integer::Integer;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub from: Field,
    pub to: Field,
    /// Image in `to` of each layer generator of `from`, bottom layer first.
    pub gen_images: Vec<Rep>,
}

fn layer_chain(field: &Field) -> Vec<Field> {
    // prefix fields from the prime field up to `field`, one per layer
    let mut chain = Vec::new();
    let mut cur = field.clone();
    while let Some(l) = cur.layer() {
        let below = l.below.clone();
        chain.push(cur);
        cur = below;
    }
    chain.reverse();
    chain
}

impl Embedding {
    /// The canonical inclusion of a tower prefix.
    pub fn canonical(sub: &Field, sup: &Field) -> Result<Embedding> {
        if !sub.is_subtower_of(sup) {
            return Err(Error::NotSubfield {
                sub: sub.to_string(),
                sup: sup.to_string(),
            });
        }
        let gen_images = layer_chain(sub)
            .iter()
            .map(|prefix| sup.include_from(prefix, &prefix.gen_rep()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Embedding {
            from: sub.clone(),
            to: sup.clone(),
            gen_images,
        })
    }

    /// Identity on a field.
    pub fn identity(field: &Field) -> Embedding {
        Embedding::canonical(field, field).unwrap()
    }

    /// A (non-canonical) embedding, layer generators sent to the
    /// lexicographically least admissible roots, chosen bottom-up.
    pub fn pick(from: &Field, to: &Field) -> Result<Embedding> {
        let mut emb = Embedding {
            from: Field::prime(from.p()).unwrap(),
            to: to.clone(),
            gen_images: Vec::new(),
        };
        if from.p() != to.p() {
            return Err(Error::NotSubfield {
                sub: from.to_string(),
                sup: to.to_string(),
            });
        }
        for prefix in layer_chain(from) {
            let l = prefix.layer().unwrap();
            let mapped: Vec<Rep> = l.modulus.iter().map(|c| emb.apply(c)).collect();
            let poly = Poly::new(to.clone(), mapped);
            let rs = factor::roots(&poly, 0)?;
            let root = rs.into_iter().next().ok_or_else(|| Error::NotSubfield {
                sub: from.to_string(),
                sup: to.to_string(),
            })?;
            emb.gen_images.push(root);
            emb.from = prefix;
        }
        Ok(emb)
    }

    /// All embeddings of `from` into `to` that restrict to the canonical
    /// inclusion on the subtower `fixing`.
    pub fn all_fixing(from: &Field, to: &Field, fixing: &Field) -> Result<Vec<Embedding>> {
        if !fixing.is_subtower_of(from) || !fixing.is_subtower_of(to) {
            return Err(Error::NotSubfield {
                sub: fixing.to_string(),
                sup: format!("{from} and {to}"),
            });
        }
        let base = Embedding::canonical(fixing, to)?;
        let mut partial = vec![base];
        for prefix in layer_chain(from) {
            if prefix.is_subtower_of(fixing) {
                continue; // already covered by the canonical part
            }
            let l = prefix.layer().unwrap();
            let mut next = Vec::new();
            for emb in &partial {
                let mapped: Vec<Rep> = l.modulus.iter().map(|c| emb.apply(c)).collect();
                let poly = Poly::new(to.clone(), mapped);
                for root in factor::roots(&poly, 0)? {
                    let mut e = emb.clone();
                    e.gen_images.push(root);
                    e.from = prefix.clone();
                    next.push(e);
                }
            }
            partial = next;
        }
        for e in &mut partial {
            e.from = from.clone();
        }
        partial.sort_by(|a, b| a.gen_images.cmp(&b.gen_images));
        Ok(partial)
    }

    pub fn apply(&self, a: &Rep) -> Rep {
        let depth = self.gen_images.len();
        self.apply_at(&self.from, a, depth)
    }

    fn apply_at(&self, f: &Field, a: &Rep, depth: usize) -> Rep {
        match (a, f.layer()) {
            (Rep::Base(c), None) => self.to.from_u64(*c),
            (Rep::Ext(v), Some(l)) => {
                let g = &self.gen_images[depth - 1];
                let mut acc = self.to.zero_rep();
                for c in v.iter().rev() {
                    let cl = self.apply_at(&l.below, c, depth - 1);
                    acc = self.to.add(&self.to.mul(&acc, g), &cl);
                }
                acc
            }
            _ => panic!("rep does not match field shape"),
        }
    }

    /// Solves apply(x) = a; errors when `a` is outside the image.
    pub fn preimage(&self, a: &Rep) -> Result<Rep> {
        let p = self.to.p();
        let dt = self.to.abs_deg() as usize;
        let df = self.from.abs_deg() as usize;
        // columns: images of the F_p basis of `from`
        let mut cols = Vec::with_capacity(df);
        for j in 0..df {
            let mut e = vec![0u64; df];
            e[j] = 1;
            let basis = self.from.unflatten(&e);
            cols.push(self.to.flatten(&self.apply(&basis)));
        }
        let rhs = self.to.flatten(a);
        let x = solve_mod_p(p, dt, df, &cols, &rhs).ok_or(Error::NotInSubfield)?;
        Ok(self.from.unflatten(&x))
    }

    /// Norm along the embedding: product of the q_from-power Frobenius
    /// conjugates, pulled back to `from`.
    pub fn norm(&self, a: &Rep) -> Result<Rep> {
        let mut acc = self.to.one_rep();
        for c in self.conjugates(a) {
            acc = self.to.mul(&acc, &c);
        }
        self.preimage(&acc)
    }

    /// Trace along the embedding.
    pub fn trace(&self, a: &Rep) -> Result<Rep> {
        let mut acc = self.to.zero_rep();
        for c in self.conjugates(a) {
            acc = self.to.add(&acc, &c);
        }
        self.preimage(&acc)
    }

    fn conjugates(&self, a: &Rep) -> Vec<Rep> {
        let n = (self.to.abs_deg() / self.from.abs_deg()) as usize;
        let qk = self.from.q();
        let mut out = Vec::with_capacity(n);
        let mut x = a.clone();
        for _ in 0..n {
            out.push(x.clone());
            x = self.to.pow(&x, qk);
        }
        out
    }

    /// Post-composition with the q-power Frobenius of the target for the
    /// given q (moves each generator image to its conjugate).
    fn twist(&self, q: u128) -> Embedding {
        Embedding {
            from: self.from.clone(),
            to: self.to.clone(),
            gen_images: self
                .gen_images
                .iter()
                .map(|g| self.to.pow(g, q))
                .collect(),
        }
    }
}

/// Gaussian elimination over F_p: solves the column system, returns any
/// solution.
fn solve_mod_p(
    p: u64,
    rows: usize,
    cols: usize,
    columns: &[Vec<u64>],
    rhs: &[u64],
) -> Option<Vec<u64>> {
    let mut aug: Vec<Vec<u64>> = (0..rows)
        .map(|i| {
            let mut row: Vec<u64> = (0..cols).map(|j| columns[j][i] % p).collect();
            row.push(rhs[i] % p);
            row
        })
        .collect();
    let inv = |x: u64| -> u64 {
        // p is prime; Fermat inverse
        let mut acc = 1u128;
        let mut base = x as u128 % p as u128;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u128;
            }
            base = base * base % p as u128;
            e >>= 1;
        }
        acc as u64
    };
    let mut pivot_of_col = vec![usize::MAX; cols];
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !aug[i][c].is_multiple_of(p)) else {
            continue;
        };
        aug.swap(r, pr);
        let iv = inv(aug[r][c]);
        for v in aug[r].iter_mut() {
            *v = (*v as u128 * iv as u128 % p as u128) as u64;
        }
        for i in 0..rows {
            if i != r && aug[i][c] != 0 {
                let f = aug[i][c];
                for j in 0..=cols {
                    let sub = (aug[r][j] as u128 * f as u128) % p as u128;
                    aug[i][j] = ((aug[i][j] as u128 + p as u128 - sub) % p as u128) as u64;
                }
            }
        }
        pivot_of_col[c] = r;
        r += 1;
    }
    // consistency: no pivot in the rhs column
    for i in r..rows {
        if aug[i][cols] != 0 {
            return None;
        }
    }
    let mut x = vec![0u64; cols];
    for c in 0..cols {
        if pivot_of_col[c] != usize::MAX {
            x[c] = aug[pivot_of_col[c]][cols];
        }
    }
    Some(x)
}

/// One simple factor of L ⊗_K K': the composite field with the two maps
/// into it.
#[derive(Debug, Clone)]
pub struct TensorComponent {
    pub field: Field,
    pub multiplicity: u32,
    /// L → composite (a K-embedding).
    pub left: Embedding,
    /// K' → composite (the canonical inclusion).
    pub right: Embedding,
}

/// Decomposes L ⊗_K K' for finite fields: gcd([L:K], [K':K]) copies of the
/// degree-lcm composite, each with multiplicity 1. Components are the
/// Frobenius orbits of the K-embeddings L → M where M/K' has the
/// complementary degree.
pub fn tensor_decompose(
    l: &Field,
    kp: &Field,
    k: &Field,
    seed: u64,
) -> Result<Vec<TensorComponent>> {
    if !k.is_subtower_of(l) || !k.is_subtower_of(kp) {
        return Err(Error::NotSubfield {
            sub: k.to_string(),
            sup: format!("{l} and {kp}"),
        });
    }
    let a = (l.abs_deg() / k.abs_deg()) as u64;
    let b = (kp.abs_deg() / k.abs_deg()) as u64;
    let g = a.gcd(&b);
    let rel = (a / g) as usize; // [M : K']
    let m = if rel == 1 {
        kp.clone()
    } else {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let modulus = super::poly::random_irreducible(kp, rel, &mut rng)?;
        kp.extend_unchecked("c", modulus)?
    };
    let right = Embedding::canonical(kp, &m)?;
    let homs = Embedding::all_fixing(l, &m, k)?;
    debug_assert_eq!(homs.len() as u64, a);
    // orbits under post-composition with the q_{K'}-power Frobenius
    let mut remaining: Vec<Embedding> = homs;
    let mut components = Vec::new();
    while let Some(first) = remaining.first().cloned() {
        let mut orbit = vec![first.clone()];
        let mut cur = first.twist(kp.q());
        while cur != first {
            orbit.push(cur.clone());
            cur = cur.twist(kp.q());
        }
        remaining.retain(|e| !orbit.contains(e));
        let rep = orbit.iter().min_by(|x, y| x.gen_images.cmp(&y.gen_images)).unwrap();
        components.push(TensorComponent {
            field: m.clone(),
            multiplicity: 1,
            left: rep.clone(),
            right: right.clone(),
        });
    }
    debug_assert_eq!(components.len() as u64, g);
    Ok(components)
}
