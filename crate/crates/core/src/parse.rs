//! Input grammars for the CLI: field specs `GF(p)`, `GF(p^d)`,
//! `GF(p^d)/GF(p^e)`; truncation sets as comma lists or `P(p,r)`; function
//! fields `GF(q)(t)` and `GF(q)(t)[y]/(g)`; element and coordinate lists.
//! All errors carry the byte position of the offending token.

use crate::derham::{FunField, RatFun};
use crate::ff::poly::Poly;
use crate::ff::{Field, Rep};
use crate::truncation::TruncationSet;
use crate::{Error, Result};

fn perr(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { s, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn eat(&mut self, token: &str) -> Result<()> {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(perr(self.pos, format!("expected `{token}`")))
        }
    }

    fn eat_opt(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64> {
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(perr(self.pos, "expected a number"));
        }
        self.pos += digits.len();
        digits
            .parse()
            .map_err(|_| perr(self.pos - digits.len(), "number out of range"))
    }

    fn done(&self) -> Result<()> {
        if self.pos == self.s.len() {
            Ok(())
        } else {
            Err(perr(self.pos, "trailing input"))
        }
    }
}

/// `GF(q)` for a prime power q, `GF(p^d)`, or `GF(p^d)/GF(p^e)` with e | d.
/// The seed fixes the irreducible tower polynomials.
pub fn parse_field(spec: &str, seed: u64) -> Result<Field> {
    fn gf(c: &mut Cursor) -> Result<(u64, u32)> {
        c.eat("GF(")?;
        let p_pos = c.pos;
        let mut p = c.number()?;
        let mut d = if c.eat_opt("^") {
            let d_pos = c.pos;
            let d = c.number()?;
            if d == 0 {
                return Err(perr(d_pos, "degree must be positive"));
            }
            d as u32
        } else {
            1
        };
        c.eat(")")?;
        if p < 2 {
            return Err(perr(p_pos, "order must be a prime power"));
        }
        // bare prime powers: GF(4) means GF(2^2)
        if d == 1 {
            let base = (2..=p).find(|f| p % f == 0).expect("p >= 2");
            let mut q = p;
            let mut e = 0;
            while q % base == 0 {
                q /= base;
                e += 1;
            }
            if q != 1 {
                return Err(perr(p_pos, "order must be a prime power"));
            }
            p = base;
            d = e;
        }
        Ok((p, d))
    }
    let mut c = Cursor::new(spec);
    let (p, d) = gf(&mut c)?;
    if c.eat_opt("/") {
        let sub_pos = c.pos;
        let (p2, e) = gf(&mut c)?;
        c.done()?;
        if p2 != p {
            return Err(perr(sub_pos, "tower layers must share the characteristic"));
        }
        if d % e != 0 || e == d {
            return Err(perr(sub_pos, "subfield degree must properly divide the top degree"));
        }
        Field::make_field(p, &[e, d / e], seed)
    } else {
        c.done()?;
        Field::make_field(p, &[d], seed)
    }
}

/// Comma list `1,2,3,6` or the p-typical shorthand `P(p,r)`.
pub fn parse_tset(spec: &str) -> Result<TruncationSet> {
    let mut c = Cursor::new(spec);
    if c.eat_opt("P(") {
        let p = c.number()?;
        c.eat(",")?;
        let r_pos = c.pos;
        let r = c.number()?;
        c.eat(")")?;
        c.done()?;
        if r == 0 || r > 64 {
            return Err(perr(r_pos, "p-typical length out of range"));
        }
        return Ok(TruncationSet::p_typical(p, r as u32));
    }
    let mut elems = Vec::new();
    loop {
        elems.push(c.number()?);
        if !c.eat_opt(",") {
            break;
        }
    }
    c.done()?;
    TruncationSet::validate(&elems)
}

/// Field elements on the wire are integer indices: the base-p digits of the
/// index, least significant first, are the flattened tower coordinates. In
/// particular index 0 is zero, index 1 is one, and over a prime field the
/// index is the natural representative.
pub fn elem_from_index(field: &Field, n: u128) -> Result<Rep> {
    if n >= field.q() {
        return Err(perr(0, format!("element index {n} out of range for GF({})", field.q())));
    }
    let d = field.abs_deg() as usize;
    let mut digits = vec![0u64; d];
    let mut m = n;
    for digit in digits.iter_mut() {
        *digit = (m % field.p() as u128) as u64;
        m /= field.p() as u128;
    }
    Ok(field.unflatten(&digits))
}

/// Inverse of `elem_from_index`.
pub fn elem_to_index(field: &Field, a: &Rep) -> u128 {
    field
        .flatten(a)
        .iter()
        .rev()
        .fold(0u128, |acc, &c| acc * field.p() as u128 + c as u128)
}

/// Comma list of element indices.
pub fn parse_elems(spec: &str, field: &Field) -> Result<Vec<Rep>> {
    let mut c = Cursor::new(spec);
    let mut out = Vec::new();
    loop {
        let pos = c.pos;
        let n = c.number()?;
        out.push(elem_from_index(field, n as u128).map_err(|_| {
            perr(pos, format!("element index {n} out of range for GF({})", field.q()))
        })?);
        if !c.eat_opt(",") {
            break;
        }
    }
    c.done()?;
    Ok(out)
}

/// `GF(q)(t)` or `GF(q)(t)[y]/(g)` where g lists its y-coefficients low
/// degree first, separated by `;`, each a polynomial in t as a comma list
/// of element indices (low degree first). An Eisenstein-type shape
/// y^p − a(t) with a not a p-th power builds the purely inseparable layer.
pub fn parse_funfield(spec: &str, seed: u64) -> Result<FunField> {
    let open = spec
        .find(")(")
        .ok_or_else(|| perr(0, "expected `GF(q)(t)`"))?;
    let constants = parse_field(&spec[..open + 1], seed)?;
    let mut c = Cursor::new(spec);
    c.pos = open + 1;
    c.eat("(")?;
    let var_start = c.pos;
    let var: String = c
        .rest()
        .chars()
        .take_while(|ch| ch.is_ascii_alphanumeric())
        .collect();
    if var.is_empty() {
        return Err(perr(var_start, "expected a variable name"));
    }
    c.pos += var.len();
    c.eat(")")?;
    let base = FunField::rational(&constants, &var);
    if c.pos == spec.len() {
        return Ok(base);
    }
    c.eat("[")?;
    let yvar_start = c.pos;
    let yvar: String = c
        .rest()
        .chars()
        .take_while(|ch| ch.is_ascii_alphanumeric())
        .collect();
    if yvar.is_empty() {
        return Err(perr(yvar_start, "expected a layer variable name"));
    }
    c.pos += yvar.len();
    c.eat("]/(")?;
    let mut modulus = Vec::new();
    loop {
        let mut coeffs = Vec::new();
        loop {
            let pos = c.pos;
            let n = c.number()?;
            coeffs.push(
                elem_from_index(&constants, n as u128).map_err(|_| {
                    perr(pos, format!("element index {n} out of range for GF({})", constants.q()))
                })?,
            );
            if !c.eat_opt(",") {
                break;
            }
        }
        modulus.push(RatFun::from_poly(Poly::new(constants.clone(), coeffs)));
        if !c.eat_opt(";") {
            break;
        }
    }
    c.eat(")")?;
    c.done()?;
    let d = modulus.len().saturating_sub(1);
    let insep_shape = d as u64 == constants.p()
        && modulus[d] == RatFun::one(&constants)
        && modulus[1..d].iter().all(|m| m.is_zero())
        && modulus[0].neg().pth_root().is_err();
    if insep_shape {
        base.extend_inseparable(&yvar, modulus[0].neg())
    } else {
        base.extend_separable(&yvar, modulus)
    }
}

/// `num` or `num/den` where both sides are comma lists of element indices,
/// low degree first: `0,2/1,1` is 2t/(1+t) over a characteristic-3 field.
pub fn parse_ratfun(spec: &str, field: &Field) -> Result<RatFun> {
    let poly = |part: &str, off: usize| -> Result<Poly> {
        let mut c = Cursor::new(part);
        let mut coeffs = Vec::new();
        loop {
            let pos = c.pos;
            let n = c.number()?;
            coeffs.push(elem_from_index(field, n as u128).map_err(|_| {
                perr(off + pos, format!("element index {n} out of range for GF({})", field.q()))
            })?);
            if !c.eat_opt(",") {
                break;
            }
        }
        c.done().map_err(|e| match e {
            Error::Parse { pos, msg } => perr(off + pos, msg),
            other => other,
        })?;
        Ok(Poly::new(field.clone(), coeffs))
    };
    match spec.find('/') {
        Some(slash) => {
            let num = poly(&spec[..slash], 0)?;
            let den = poly(&spec[slash + 1..], slash + 1)?;
            if den.is_zero() {
                return Err(perr(slash + 1, "zero denominator"));
            }
            RatFun::new(num, den)
        }
        None => Ok(RatFun::from_poly(poly(spec, 0)?)),
    }
}

/// Function-field element: layer coordinates (low power first) separated by
/// `;`, each a rational function per `parse_ratfun`.
pub fn parse_ffelem(spec: &str, kf: &FunField) -> Result<crate::derham::FfElem> {
    let parts: Vec<&str> = spec.split(';').collect();
    if parts.len() != kf.deg() {
        return Err(perr(
            0,
            format!("expected {} coordinates, got {}", kf.deg(), parts.len()),
        ));
    }
    let mut off = 0;
    let mut coords = Vec::with_capacity(parts.len());
    for part in parts {
        coords.push(parse_ratfun(part, kf.constants()).map_err(|e| match e {
            Error::Parse { pos, msg } => perr(off + pos, msg),
            other => other,
        })?);
        off += part.len() + 1;
    }
    kf.from_coords(coords)
}

/// Comma list of unsigned integers (witt coordinate shorthand and sweeps).
pub fn parse_u64_list(spec: &str) -> Result<Vec<u64>> {
    let mut c = Cursor::new(spec);
    let mut out = Vec::new();
    loop {
        out.push(c.number()?);
        if !c.eat_opt(",") {
            break;
        }
    }
    c.done()?;
    Ok(out)
}
