//! Polynomial factorization over tower fields: characteristic-aware
//! squarefree decomposition, distinct-degree splitting, and a seeded
//! equal-degree split (quadratic-residue style for odd p, additive trace
//! for p = 2).

use super::{Poly, Rep};
use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Factors a nonzero polynomial into monic irreducibles with
/// multiplicities, sorted deterministically. Multiplying the factors and
/// the leading coefficient of the input recovers the input.
pub fn factor_poly(f: &Poly, seed: u64) -> Result<Vec<(Poly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monic = f.monic()?;
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (part, mult) in squarefree_parts(&monic)? {
        for (g, d) in distinct_degree(&part)? {
            for irr in equal_degree(&g, d, &mut rng)? {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    Ok(out)
}

/// All roots of `f` in its coefficient field, sorted.
pub fn roots(f: &Poly, seed: u64) -> Result<Vec<Rep>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = f.field().clone();
    if f.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let monic = f.monic()?;
    let x = Poly::x(&field);
    let xq = x.modpow(&BigUint::from(field.q()), &monic)?;
    // gcd(T^q − T, f): the (squarefree) product of the linear factors
    let lin = xq.sub(&x).gcd(&monic)?;
    if lin.is_zero() || lin.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Rep> = equal_degree(&lin, 1, &mut rng)?
        .into_iter()
        .map(|l| field.neg(&l.coeff(0)))
        .collect();
    out.sort();
    Ok(out)
}

/// Squarefree decomposition of a monic polynomial in characteristic p:
/// pairs (squarefree monic part, multiplicity), parts pairwise coprime.
fn squarefree_parts(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let field = f.field().clone();
    let one = Poly::constant(&field, field.one_rep());
    if f.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let df = f.derivative();
    if df.is_zero() {
        // f = g(T^p): pull out the p-th root and scale multiplicities
        let g = pth_root_poly(f)?;
        let sub = squarefree_parts(&g)?;
        return Ok(sub
            .into_iter()
            .map(|(part, m)| (part, m * field.p() as u32))
            .collect());
    }
    let mut out = Vec::new();
    let mut c = f.gcd(&df)?;
    let mut w = f.divrem(&c)?.0;
    let mut i = 1u32;
    while w != one {
        let y = w.gcd(&c)?;
        let z = w.divrem(&y)?.0;
        if z.degree().unwrap_or(0) > 0 {
            out.push((z, i));
        }
        w = y;
        c = c.divrem(&w)?.0;
        i += 1;
    }
    if c != one {
        // leftover c = g(T^p) carries the multiplicities divisible by p
        let g = pth_root_poly(&c)?;
        for (part, m) in squarefree_parts(&g)? {
            out.push((part, m * field.p() as u32));
        }
    }
    Ok(out)
}

/// For f(T) = g(T^p), recovers g by taking p-th roots of coefficients
/// (c^(q/p) in F_q).
fn pth_root_poly(f: &Poly) -> Result<Poly> {
    let field = f.field().clone();
    let p = field.p() as usize;
    let root_exp = field.q() / field.p() as u128;
    let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
    debug_assert_eq!(deg % p, 0);
    let mut coeffs = Vec::with_capacity(deg / p + 1);
    for i in 0..=deg {
        let c = f.coeff(i);
        if i % p == 0 {
            coeffs.push(field.pow(&c, root_exp));
        } else {
            debug_assert!(field.is_zero(&c));
        }
    }
    Ok(Poly::new(field, coeffs))
}

/// Splits a squarefree monic polynomial into products of irreducibles of
/// equal degree: pairs (product, degree of its irreducible factors).
fn distinct_degree(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let field = f.field().clone();
    let q = BigUint::from(field.q());
    let x = Poly::x(&field);
    let mut g = f.clone();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 0usize;
    while g.degree().unwrap_or(0) > 0 {
        d += 1;
        if 2 * d > g.degree().unwrap() {
            out.push((g.clone(), g.degree().unwrap()));
            break;
        }
        h = h.modpow(&q, &g)?;
        let gd = h.sub(&x).gcd(&g)?;
        if gd.degree().unwrap_or(0) > 0 {
            out.push((gd.clone(), d));
            g = g.divrem(&gd)?.0;
            h = h.rem(&g)?;
        }
    }
    Ok(out)
}

/// Splits a product of distinct degree-d irreducibles into its factors.
fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
    let field = f.field().clone();
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == d {
        return Ok(vec![f.monic()?]);
    }
    let split = loop {
        let r = Poly::random(&field, n - 1, rng);
        if r.degree().unwrap_or(0) == 0 || r.is_zero() {
            continue;
        }
        let candidate = if field.p() == 2 {
            // additive trace to F_2: r + r^2 + r^4 + ... (kd summands where
            // q^d = 2^(kd))
            let kd = field.abs_deg() as usize * d;
            let mut s = Poly::zero(&field);
            let mut t = r.rem(f)?;
            for _ in 0..kd {
                s = s.add(&t);
                t = t.mul(&t).rem(f)?;
            }
            s.gcd(f)?
        } else {
            let e = (BigUint::from(field.q()).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            let s = r.modpow(&e, f)?;
            let one = Poly::constant(&field, field.one_rep());
            s.sub(&one).gcd(f)?
        };
        let cd = candidate.degree().unwrap_or(0);
        if cd > 0 && cd < n {
            break candidate;
        }
    };
    let mut out = equal_degree(&split, d, rng)?;
    out.extend(equal_degree(&f.divrem(&split)?.0, d, rng)?);
    Ok(out)
}
