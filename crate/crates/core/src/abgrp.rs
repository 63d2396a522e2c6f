//! Finitely presented abelian groups over exact integers: Smith normal
//! form, tensor products, quotients and cokernels, and a brute-force
//! structure algorithm for small enumerated groups.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Euclid, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::hash::Hash;

pub type Mat = Vec<Vec<BigInt>>;

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

/// Presentation by an integer relation matrix: rows are relations, columns
/// index the named generators.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FinPresAbGroup {
    pub generators: Vec<String>,
    pub relations: Mat,
}

/// Smith data for a relation matrix `A`: unimodular `V` with `U A V = D`.
/// Only the column transform is kept; membership in the row lattice of `A`
/// is decided through it.
struct Smith {
    diag: Vec<BigInt>,
    v: Mat,
    rank: usize,
}

fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { bi(1) } else { bi(0) }).collect())
        .collect()
}

/// Smith normal form by least-absolute-value pivoting, tracking column
/// operations in `v`.
fn smith(a: &Mat, ncols: usize) -> Smith {
    let mut m: Mat = a.clone();
    let nrows = m.len();
    let mut v = identity(ncols);
    let mut t = 0usize;
    while t < nrows.min(ncols) {
        // pick nonzero entry of least absolute value in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !m[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        if pj != t {
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
        }
        // eliminate column t below and row t to the right
        let mut clean = true;
        for i in t + 1..nrows {
            if !m[i][t].is_zero() {
                let q = m[i][t].div_euclid(&m[t][t]);
                for j in t..ncols {
                    let s = &m[t][j] * &q;
                    m[i][j] -= s;
                }
                if !m[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..ncols {
            if !m[t][j].is_zero() {
                let q = m[t][j].div_euclid(&m[t][t]);
                for i in 0..nrows {
                    let s = &m[i][t] * &q;
                    m[i][j] -= s;
                }
                for i in 0..ncols {
                    let s = &v[i][t] * &q;
                    v[i][j] -= s;
                }
                if !m[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue; // smaller pivot appeared, redo this step
        }
        // divisibility fix: pivot must divide the rest of the block
        let mut fixed = true;
        'outer: for i in t + 1..nrows {
            for j in t + 1..ncols {
                if !(&m[i][j] % &m[t][t]).is_zero() {
                    // add row i to row t and restart the step
                    for jj in 0..ncols {
                        let s = m[i][jj].clone();
                        m[t][jj] += s;
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if fixed {
            if m[t][t].is_negative() {
                for j in 0..ncols {
                    m[t][j] = -m[t][j].clone();
                }
            }
            t += 1;
        }
    }
    let rank = t;
    let diag = (0..ncols)
        .map(|i| if i < rank { m[i][i].clone() } else { bi(0) })
        .collect();
    Smith { diag, v, rank }
}

impl FinPresAbGroup {
    pub fn new(generators: Vec<String>, relations: Mat) -> Result<Self> {
        for (i, row) in relations.iter().enumerate() {
            if row.len() != generators.len() {
                let _ = i;
                return Err(Error::RelationWidth {
                    got: row.len(),
                    expected: generators.len(),
                });
            }
        }
        Ok(FinPresAbGroup {
            generators,
            relations,
        })
    }

    /// Free group of the given rank with default generator names.
    pub fn free(rank: usize) -> Self {
        FinPresAbGroup {
            generators: (0..rank).map(|i| format!("g{i}")).collect(),
            relations: Vec::new(),
        }
    }

    /// Z/n on one generator.
    pub fn cyclic(n: u64) -> Self {
        FinPresAbGroup {
            generators: vec!["g".into()],
            relations: vec![vec![BigInt::from(n)]],
        }
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    fn smith(&self) -> Smith {
        smith(&self.relations, self.generators.len())
    }

    /// Invariant factors `d_1 | d_2 | ...` with units dropped and free rank
    /// reported as trailing zeros.
    pub fn smith_invariants(&self) -> Vec<BigInt> {
        let s = self.smith();
        let mut factors: Vec<BigInt> = s.diag[..s.rank]
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect();
        // enforce d_1 | d_2 | ... (pairwise gcd/lcm normalization)
        loop {
            let mut changed = false;
            for i in 0..factors.len() {
                for j in i + 1..factors.len() {
                    if !(&factors[j] % &factors[i]).is_zero() {
                        let g = factors[i].gcd(&factors[j]);
                        let l = &factors[i] / &g * &factors[j];
                        factors[i] = g;
                        factors[j] = l;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        factors.retain(|d| !d.is_one());
        factors.sort();
        for _ in s.rank..self.generators.len() {
            factors.push(bi(0));
        }
        factors
    }

    /// Group order; `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        let inv = self.smith_invariants();
        if inv.iter().any(|d| d.is_zero()) {
            return None;
        }
        Some(inv.iter().product())
    }

    pub fn is_trivial(&self) -> bool {
        self.smith_invariants().is_empty()
    }

    /// Tensor product presentation: generators `g_i ⊗ h_j`, relations from
    /// each factor tensored against the other factor's generators.
    pub fn tensor(&self, other: &Self) -> Self {
        let n1 = self.num_generators();
        let n2 = other.num_generators();
        let mut generators = Vec::with_capacity(n1 * n2);
        for g in &self.generators {
            for h in &other.generators {
                generators.push(format!("{g}⊗{h}"));
            }
        }
        let mut relations = Vec::new();
        for rel in &self.relations {
            for j in 0..n2 {
                let mut row = vec![bi(0); n1 * n2];
                for (i, c) in rel.iter().enumerate() {
                    row[i * n2 + j] = c.clone();
                }
                relations.push(row);
            }
        }
        for rel in &other.relations {
            for i in 0..n1 {
                let mut row = vec![bi(0); n1 * n2];
                for (j, c) in rel.iter().enumerate() {
                    row[i * n2 + j] = c.clone();
                }
                relations.push(row);
            }
        }
        FinPresAbGroup {
            generators,
            relations,
        }
    }

    /// Adds the given combinations as extra relations.
    pub fn quotient_by(&self, extra: &[Vec<BigInt>]) -> Result<Self> {
        let mut g = self.clone();
        for row in extra {
            if row.len() != self.generators.len() {
                return Err(Error::RelationWidth {
                    got: row.len(),
                    expected: self.generators.len(),
                });
            }
            g.relations.push(row.clone());
        }
        Ok(g)
    }

    /// True iff `element` lies in the relation lattice.
    pub fn is_zero_in(&self, element: &[BigInt]) -> Result<bool> {
        if element.len() != self.generators.len() {
            return Err(Error::RelationWidth {
                got: element.len(),
                expected: self.generators.len(),
            });
        }
        let s = self.smith();
        let n = self.generators.len();
        // w = element * V
        for j in 0..n {
            let w: BigInt = (0..n).map(|i| &element[i] * &s.v[i][j]).sum();
            if j < s.rank {
                if !(&w % &s.diag[j]).is_zero() {
                    return Ok(false);
                }
            } else if !w.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Order of the class of `element`; 0 means infinite order.
    pub fn element_order(&self, element: &[BigInt]) -> Result<BigInt> {
        let s = self.smith();
        let n = self.generators.len();
        let mut order = BigInt::one();
        for j in 0..n {
            let w: BigInt = (0..n).map(|i| &element[i] * &s.v[i][j]).sum();
            if j < s.rank {
                let d = &s.diag[j];
                let g = w.gcd(d);
                let k = d / g;
                order = order.lcm(&k);
            } else if !w.is_zero() {
                return Ok(bi(0));
            }
        }
        Ok(order)
    }
}

/// Cokernel of a generator-wise map `f: G -> H`, given by the images of
/// G's generators as combinations of H's generators. Checks that relations
/// of G map to zero in H.
pub fn cokernel(g: &FinPresAbGroup, h: &FinPresAbGroup, images: &Mat) -> Result<FinPresAbGroup> {
    if images.len() != g.num_generators() {
        return Err(Error::RelationWidth {
            got: images.len(),
            expected: g.num_generators(),
        });
    }
    for (idx, rel) in g.relations.iter().enumerate() {
        let mut img = vec![bi(0); h.num_generators()];
        for (i, c) in rel.iter().enumerate() {
            for (j, x) in images[i].iter().enumerate() {
                img[j] += c * x;
            }
        }
        if !h.is_zero_in(&img)? {
            return Err(Error::RelationNotRespected(idx));
        }
    }
    let mut out = h.clone();
    for row in images {
        out.relations.push(row.clone());
    }
    Ok(out)
}

/// Result of the brute-force structure computation: invariant factors
/// (in divisibility order), chosen generators, and the coordinates of every
/// carrier element with respect to those generators.
#[derive(Debug, Clone)]
pub struct FiniteStructure<T> {
    pub invariants: Vec<u64>,
    pub generators: Vec<T>,
    pub coords: HashMap<T, Vec<u64>>,
}

impl<T: Eq + Hash + Clone> FiniteStructure<T> {
    pub fn group(&self) -> FinPresAbGroup {
        let generators = (0..self.invariants.len())
            .map(|i| format!("g{i}"))
            .collect();
        let relations = self
            .invariants
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut row = vec![bi(0); self.invariants.len()];
                row[i] = BigInt::from(d);
                row
            })
            .collect();
        FinPresAbGroup {
            generators,
            relations,
        }
    }
}

/// Structure of a finite abelian group given by an enumerated carrier and
/// closures for the operation. Greedy peeling: pick an element of maximal
/// order, split it off as a direct summand, recurse on the quotient.
pub fn structure_of_finite<T, A, N>(
    carrier: &[T],
    add: A,
    zero: &T,
    neg: N,
    bound: usize,
) -> Result<FiniteStructure<T>>
where
    T: Eq + Hash + Clone,
    A: Fn(&T, &T) -> T,
    N: Fn(&T) -> T,
{
    if carrier.len() > bound {
        return Err(Error::BoundExceeded {
            size: carrier.len() as u128,
            bound: bound as u128,
        });
    }
    let index: HashMap<T, usize> = carrier
        .iter()
        .enumerate()
        .map(|(i, x)| (x.clone(), i))
        .collect();
    if index.len() != carrier.len() {
        return Err(Error::NotClosed); // duplicates
    }
    let idx_of = |x: &T| -> Result<usize> { index.get(x).copied().ok_or(Error::NotClosed) };
    let zero_idx = idx_of(zero)?;
    let n = carrier.len();
    // addition table on indices (n <= bound, so n^2 stays desk-scale)
    let mut table = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            table[i * n + j] = idx_of(&add(&carrier[i], &carrier[j]))?;
        }
    }
    let neg_idx: Vec<usize> = carrier
        .iter()
        .map(|x| idx_of(&neg(x)))
        .collect::<Result<_>>()?;

    // recursive peeling on index sets
    struct Ctx<'a> {
        n: usize,
        table: &'a [usize],
        zero: usize,
    }
    impl Ctx<'_> {
        fn addi(&self, a: usize, b: usize) -> usize {
            self.table[a * self.n + b]
        }
        fn order_of(&self, a: usize) -> u64 {
            let mut x = a;
            let mut k = 1u64;
            while x != self.zero {
                x = self.addi(x, a);
                k += 1;
            }
            k
        }
        fn mul(&self, k: u64, a: usize) -> usize {
            let mut acc = self.zero;
            for _ in 0..k {
                acc = self.addi(acc, a);
            }
            acc
        }
    }
    let ctx = Ctx {
        n,
        table: &table,
        zero: zero_idx,
    };

    // basis: list of (generator index, order), built over the full group by
    // peeling quotients represented as coset structures.
    fn peel(
        ctx: &Ctx,
        members: &[usize],
        neg_idx: &[usize],
    ) -> Vec<(usize, u64)> {
        if members.len() == 1 {
            return Vec::new();
        }
        // element of maximal order, ties broken by index for determinism
        let (&g, d) = members
            .iter()
            .map(|m| (m, ctx.order_of(*m)))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(a.0)))
            .unwrap();
        // cosets of <g> among members
        let mut gmul = Vec::with_capacity(d as usize);
        let mut x = ctx.zero;
        for _ in 0..d {
            gmul.push(x);
            x = ctx.addi(x, g);
        }
        let mut coset_rep: HashMap<usize, usize> = HashMap::new();
        let mut reps: Vec<usize> = Vec::new();
        for &m in members {
            let rep = gmul
                .iter()
                .map(|&h| ctx.addi(m, h))
                .min()
                .unwrap();
            if let std::collections::hash_map::Entry::Vacant(e) = coset_rep.entry(rep) {
                e.insert(rep);
                reps.push(rep);
            }
        }
        reps.sort_unstable();
        // quotient structure recursively; quotient ops are inherited: coset of
        // a+b is determined by representatives, with re-canonicalization.
        // Build a sub-ctx via a mapping trick: operate on reps directly by
        // canonicalizing after each add.
        // For recursion we materialize the quotient as its own table.
        let qn = reps.len();
        let rep_index: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let canon = |m: usize| -> usize {
            gmul.iter().map(|&h| ctx.addi(m, h)).min().unwrap()
        };
        let mut qtable = vec![0usize; qn * qn];
        for i in 0..qn {
            for j in 0..qn {
                qtable[i * qn + j] = rep_index[&canon(ctx.addi(reps[i], reps[j]))];
            }
        }
        let qzero = rep_index[&canon(ctx.zero)];
        let qctx = Ctx {
            n: qn,
            table: &qtable,
            zero: qzero,
        };
        let qneg: Vec<usize> = (0..qn).map(|i| rep_index[&canon(neg_idx[reps[i]])]).collect();
        let qmembers: Vec<usize> = (0..qn).collect();
        let sub = peel(&qctx, &qmembers, &qneg);
        // lift quotient generators, adjusting so the lift has the same order
        let mut basis = vec![(g, d)];
        for (qg, qd) in sub {
            let h = reps[qg];
            // qd * h lies in <g>; find k with qd*h = k*g
            let m = ctx.mul(qd, h);
            let k = gmul.iter().position(|&x| x == m).expect("lift lands in <g>") as u64;
            debug_assert_eq!(k % qd, 0);
            let corr = ctx.mul((d - k / qd) % d, g); // -(k/qd) * g
            let h2 = ctx.addi(h, corr);
            debug_assert_eq!(ctx.mul(qd, h2), ctx.zero);
            basis.push((h2, qd));
        }
        basis
    }

    let members: Vec<usize> = (0..n).collect();
    let basis = peel(&ctx, &members, &neg_idx);
    // coordinates by full enumeration of the basis span
    let mut coords: HashMap<T, Vec<u64>> = HashMap::new();
    let mut stack: Vec<(usize, Vec<u64>)> = vec![(zero_idx, Vec::new())];
    for &(g, d) in &basis {
        let mut next = Vec::with_capacity(stack.len() * d as usize);
        for (e, cs) in stack {
            let mut x = e;
            for k in 0..d {
                let mut cs2 = cs.clone();
                cs2.push(k);
                next.push((x, cs2));
                x = ctx.addi(x, g);
            }
        }
        stack = next;
    }
    if stack.len() != n {
        return Err(Error::NotClosed);
    }
    for (e, cs) in stack {
        if coords.insert(carrier[e].clone(), cs).is_some() {
            return Err(Error::NotClosed);
        }
    }
    // greedy basis has d_1 >= d_2 >= ... with each dividing the previous;
    // report in divisibility order and reorder coordinates to match.
    let mut invariants: Vec<u64> = basis.iter().map(|&(_, d)| d).collect();
    let mut generators: Vec<T> = basis.iter().map(|&(g, _)| carrier[g].clone()).collect();
    invariants.reverse();
    generators.reverse();
    for v in coords.values_mut() {
        v.reverse();
    }
    Ok(FiniteStructure {
        invariants,
        generators,
        coords,
    })
}
