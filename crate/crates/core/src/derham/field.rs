//! One-variable function fields F_q(t), optionally with a single simple
//! extension layer: separable y with monic g(t, y), or purely inseparable
//! u with u^p = a(t). Elements are coordinate vectors over the rational
//! base in the layer-generator power basis.

use super::ratfun::RatFun;
use crate::ff::Field;
use crate::{Error, Result};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerKind {
    Separable,
    Inseparable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunLayer {
    pub var: String,
    /// monic in the layer variable, low degree first, coefficients in F_q(t)
    pub modulus: Vec<RatFun>,
    pub kind: LayerKind,
}

#[derive(Debug, PartialEq, Eq)]
struct FunData {
    constants: Field,
    var: String,
    layer: Option<FunLayer>,
}

/// F_q(t) or a one-layer extension of it; cheap to clone.
#[derive(Clone, PartialEq, Eq)]
pub struct FunField(Arc<FunData>);

/// Coordinates in the layer-generator power basis (length 1 over the
/// rational field).
#[derive(Clone, PartialEq, Eq)]
pub struct FfElem(pub(crate) Vec<RatFun>);

impl FunField {
    pub fn rational(constants: &Field, var: &str) -> FunField {
        FunField(Arc::new(FunData {
            constants: constants.clone(),
            var: var.to_string(),
            layer: None,
        }))
    }

    /// Extends by a monic separable polynomial g(t, y); irreducibility is
    /// decided by the rational root test, which is complete for the
    /// supported degrees 2 and 3.
    pub fn extend_separable(&self, var: &str, modulus: Vec<RatFun>) -> Result<FunField> {
        if self.layer().is_some() {
            return Err(Error::UnsupportedShape(
                "only one extension layer is supported".into(),
            ));
        }
        let d = modulus.len().saturating_sub(1);
        if !(2..=3).contains(&d) {
            return Err(Error::UnsupportedShape(
                "separable layers of degree 2 or 3 only".into(),
            ));
        }
        if modulus[d] != RatFun::one(&self.0.constants) {
            return Err(Error::UnsupportedShape("modulus must be monic".into()));
        }
        let gy = vp_derivative(&modulus);
        if vp_gcd_degree(&modulus, &gy)? != 0 {
            return Err(Error::InseparableInput);
        }
        if has_rational_root(&modulus)? {
            return Err(Error::UnsupportedShape(
                "modulus must be irreducible".into(),
            ));
        }
        Ok(FunField(Arc::new(FunData {
            constants: self.0.constants.clone(),
            var: self.0.var.clone(),
            layer: Some(FunLayer {
                var: var.to_string(),
                modulus,
                kind: LayerKind::Separable,
            }),
        })))
    }

    /// Extends by u with u^p = a, a not a p-th power in F_q(t).
    pub fn extend_inseparable(&self, var: &str, a: RatFun) -> Result<FunField> {
        if self.layer().is_some() {
            return Err(Error::UnsupportedShape(
                "only one extension layer is supported".into(),
            ));
        }
        if a.pth_root().is_ok() {
            return Err(Error::NotPurelyInseparable);
        }
        let p = self.0.constants.p() as usize;
        let mut modulus = vec![RatFun::zero(&self.0.constants); p + 1];
        modulus[0] = a.neg();
        modulus[p] = RatFun::one(&self.0.constants);
        Ok(FunField(Arc::new(FunData {
            constants: self.0.constants.clone(),
            var: self.0.var.clone(),
            layer: Some(FunLayer {
                var: var.to_string(),
                modulus,
                kind: LayerKind::Inseparable,
            }),
        })))
    }

    pub fn constants(&self) -> &Field {
        &self.0.constants
    }

    pub fn p(&self) -> u64 {
        self.0.constants.p()
    }

    pub fn var(&self) -> &str {
        &self.0.var
    }

    pub fn layer(&self) -> Option<&FunLayer> {
        self.0.layer.as_ref()
    }

    /// Degree of the extension layer (1 for the rational field).
    pub fn deg(&self) -> usize {
        self.layer().map_or(1, |l| l.modulus.len() - 1)
    }

    /// The rational base field F_q(t).
    pub fn base(&self) -> FunField {
        FunField::rational(&self.0.constants, &self.0.var)
    }

    /// Name of the canonical separating element: the layer generator for a
    /// purely inseparable layer (where dt = 0), t otherwise.
    pub fn sep_var(&self) -> &str {
        match self.layer() {
            Some(l) if l.kind == LayerKind::Inseparable => &l.var,
            _ => &self.0.var,
        }
    }

    /// The canonical separating element as a field element.
    pub fn sep_elem(&self) -> FfElem {
        match self.layer() {
            Some(l) if l.kind == LayerKind::Inseparable => {
                self.gen_elem().expect("layered field has a generator")
            }
            _ => self.t_elem(),
        }
    }

    /// For an inseparable layer u^p = a, the element a of the base.
    pub fn insep_a(&self) -> Result<RatFun> {
        match self.layer() {
            Some(l) if l.kind == LayerKind::Inseparable => Ok(l.modulus[0].neg()),
            _ => Err(Error::NotPurelyInseparable),
        }
    }

    pub fn zero(&self) -> FfElem {
        FfElem(vec![RatFun::zero(&self.0.constants); self.deg()])
    }

    pub fn one(&self) -> FfElem {
        self.from_ratfun(RatFun::one(&self.0.constants))
    }

    /// Embeds an element of the rational base.
    pub fn from_ratfun(&self, x: RatFun) -> FfElem {
        let mut coords = vec![RatFun::zero(&self.0.constants); self.deg()];
        coords[0] = x;
        FfElem(coords)
    }

    /// The rational generator t as an element.
    pub fn t_elem(&self) -> FfElem {
        self.from_ratfun(RatFun::var(&self.0.constants))
    }

    /// The layer generator y (errors over the rational field).
    pub fn gen_elem(&self) -> Result<FfElem> {
        if self.deg() < 2 {
            return Err(Error::UnsupportedShape("no extension layer".into()));
        }
        let mut coords = vec![RatFun::zero(&self.0.constants); self.deg()];
        coords[1] = RatFun::one(&self.0.constants);
        Ok(FfElem(coords))
    }

    pub fn from_coords(&self, coords: Vec<RatFun>) -> Result<FfElem> {
        if coords.len() != self.deg() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} coordinates, got {}",
                self.deg(),
                coords.len()
            )));
        }
        Ok(FfElem(coords))
    }

    pub fn is_zero(&self, x: &FfElem) -> bool {
        x.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, a: &FfElem, b: &FfElem) -> FfElem {
        FfElem(a.0.iter().zip(&b.0).map(|(x, y)| x.add(y)).collect())
    }

    pub fn neg(&self, a: &FfElem) -> FfElem {
        FfElem(a.0.iter().map(|x| x.neg()).collect())
    }

    pub fn sub(&self, a: &FfElem, b: &FfElem) -> FfElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FfElem, b: &FfElem) -> FfElem {
        let prod = vp_mul(&a.0, &b.0, &self.0.constants);
        let red = match self.layer() {
            Some(l) => vp_rem(&prod, &l.modulus, &self.0.constants),
            None => prod,
        };
        self.pad(red)
    }

    pub fn scale(&self, a: &FfElem, c: &RatFun) -> FfElem {
        FfElem(a.0.iter().map(|x| x.mul(c)).collect())
    }

    pub fn inv(&self, a: &FfElem) -> Result<FfElem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        match self.layer() {
            None => Ok(FfElem(vec![a.0[0].inv()?])),
            Some(l) => {
                let (g, s, _) = vp_xgcd(&a.0, &l.modulus, &self.0.constants)?;
                // gcd with the irreducible modulus is a unit
                if vp_degree(&g) != Some(0) {
                    return Err(Error::DivisionByZero);
                }
                let c = g[0].inv()?;
                Ok(self.pad(s.iter().map(|x| x.mul(&c)).collect()))
            }
        }
    }

    pub fn div(&self, a: &FfElem, b: &FfElem) -> Result<FfElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FfElem, e: u64) -> FfElem {
        let mut out = self.one();
        for _ in 0..e {
            out = self.mul(&out, a);
        }
        out
    }

    /// d/ds with respect to the canonical separating element.
    pub fn d_ds(&self, x: &FfElem) -> FfElem {
        match self.layer() {
            None => FfElem(vec![x.0[0].derivative()]),
            Some(l) if l.kind == LayerKind::Inseparable => {
                // ∂/∂u; the base coefficients are constants for du
                let mut coords = vec![RatFun::zero(&self.0.constants); self.deg()];
                for (i, c) in x.0.iter().enumerate().skip(1) {
                    coords[i - 1] =
                        c.scale(&nat_rep(&self.0.constants, i as u64));
                }
                FfElem(coords)
            }
            Some(l) => {
                // df/dt = f_t + f_y·y' with y' = −g_t/g_y
                let ft = FfElem(x.0.iter().map(|c| c.derivative()).collect());
                let fy = self.partial_y(x);
                let gt = self.pad(l.modulus.iter().map(|c| c.derivative()).collect());
                let gy = self.pad(vp_derivative(&l.modulus));
                let yp = self
                    .div(&self.neg(&gt), &gy)
                    .expect("separable modulus has invertible g_y");
                self.add(&ft, &self.mul(&fy, &yp))
            }
        }
    }

    fn partial_y(&self, x: &FfElem) -> FfElem {
        let mut coords = vec![RatFun::zero(&self.0.constants); self.deg()];
        for (i, c) in x.0.iter().enumerate().skip(1) {
            coords[i - 1] = c.scale(&nat_rep(&self.0.constants, i as u64));
        }
        FfElem(coords)
    }

    /// The unique g with g^p = x, when it exists.
    pub fn pth_root(&self, x: &FfElem) -> Result<FfElem> {
        let k = &self.0.constants;
        let p = k.p() as usize;
        match self.layer() {
            None => Ok(FfElem(vec![x.0[0].pth_root()?])),
            Some(l) if l.kind == LayerKind::Inseparable => {
                if x.0.iter().skip(1).any(|c| !c.is_zero()) {
                    return Err(Error::ShapeMismatch(
                        "p-th powers in an inseparable layer lie in the base".into(),
                    ));
                }
                // x = Σ c_j^p a^j; decompose over the t-power basis of
                // K/K^p and change basis to the a-powers
                let a = self.insep_a()?;
                let mut cols = Vec::with_capacity(p);
                for j in 0..p as u32 {
                    cols.push(a.pow(j).frobenius_decompose()?);
                }
                let rhs = x.0[0].frobenius_decompose()?;
                let mat: Vec<Vec<RatFun>> =
                    (0..p).map(|k_| (0..p).map(|j| cols[j][k_].clone()).collect()).collect();
                let c = solve_linear(mat, rhs)?;
                let root = FfElem(c);
                debug_assert_eq!(self.pow(&root, k.p()), *x);
                Ok(root)
            }
            Some(_) => {
                // g = Σ δ_m^{1/p} y^m with Σ δ_m (y^p)^m = x, δ_m ∈ K^p
                let d = self.deg();
                let yp = self.pow(&self.gen_elem()?, k.p());
                let mut pw = self.one();
                let mut cols = Vec::with_capacity(d);
                for _ in 0..d {
                    cols.push(pw.0.clone());
                    pw = self.mul(&pw, &yp);
                }
                let mat: Vec<Vec<RatFun>> =
                    (0..d).map(|j| (0..d).map(|m| cols[m][j].clone()).collect()).collect();
                let delta = solve_linear(mat, x.0.clone())?;
                let mut coords = Vec::with_capacity(d);
                for dm in delta {
                    coords.push(dm.pth_root()?);
                }
                let root = FfElem(coords);
                debug_assert_eq!(self.pow(&root, k.p()), *x);
                Ok(root)
            }
        }
    }

    pub fn render(&self, x: &FfElem) -> String {
        let yvar = self.layer().map(|l| l.var.clone());
        let mut terms = Vec::new();
        for (i, c) in x.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = c.render(&self.0.var);
            let t = match (i, &yvar) {
                (0, _) => cs,
                (1, Some(v)) if cs == "1" => v.clone(),
                (1, Some(v)) => format!("({cs})*{v}"),
                (_, Some(v)) if cs == "1" => format!("{v}^{i}"),
                (_, Some(v)) => format!("({cs})*{v}^{i}"),
                _ => unreachable!("rational elements have one coordinate"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    fn pad(&self, mut coords: Vec<RatFun>) -> FfElem {
        coords.resize(self.deg(), RatFun::zero(&self.0.constants));
        FfElem(coords)
    }
}

impl fmt::Debug for FunField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.layer() {
            None => write!(f, "GF({})({})", self.0.constants.q(), self.0.var),
            Some(l) => write!(
                f,
                "GF({})({})[{}] deg {}",
                self.0.constants.q(),
                self.0.var,
                l.var,
                self.deg()
            ),
        }
    }
}

impl fmt::Debug for FfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl FfElem {
    pub fn coords(&self) -> &[RatFun] {
        &self.0
    }
}

/// n·1 in the constants field.
pub(crate) fn nat_rep(field: &Field, n: u64) -> crate::ff::Rep {
    let one = field.one_rep();
    let mut acc = field.zero_rep();
    for _ in 0..n % field.p() {
        acc = field.add(&acc, &one);
    }
    acc
}

// -- dense polynomials in the layer variable over F_q(t) --

fn vp_trim(mut v: Vec<RatFun>) -> Vec<RatFun> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn vp_degree(v: &[RatFun]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

fn vp_mul(a: &[RatFun], b: &[RatFun], k: &Field) -> Vec<RatFun> {
    if vp_degree(a).is_none() || vp_degree(b).is_none() {
        return Vec::new();
    }
    let mut out = vec![RatFun::zero(k); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    vp_trim(out)
}

fn vp_divrem(a: &[RatFun], d: &[RatFun], k: &Field) -> Result<(Vec<RatFun>, Vec<RatFun>)> {
    let dd = vp_degree(d).ok_or(Error::DivisionByZero)?;
    let lead_inv = d[dd].inv()?;
    let mut rem: Vec<RatFun> = vp_trim(a.to_vec());
    let mut quo = vec![RatFun::zero(k); rem.len().saturating_sub(dd) + 1];
    while let Some(rd) = vp_degree(&rem) {
        if rd < dd {
            break;
        }
        let c = rem[rd].mul(&lead_inv);
        quo[rd - dd] = c.clone();
        for i in 0..=dd {
            rem[rd - dd + i] = rem[rd - dd + i].sub(&c.mul(&d[i]));
        }
        rem = vp_trim(rem);
    }
    Ok((vp_trim(quo), rem))
}

fn vp_rem(a: &[RatFun], d: &[RatFun], k: &Field) -> Vec<RatFun> {
    vp_divrem(a, d, k).expect("monic modulus").1
}

fn vp_xgcd(
    a: &[RatFun],
    b: &[RatFun],
    k: &Field,
) -> Result<(Vec<RatFun>, Vec<RatFun>, Vec<RatFun>)> {
    let one = vec![RatFun::one(k)];
    let (mut r0, mut r1) = (vp_trim(a.to_vec()), vp_trim(b.to_vec()));
    let (mut s0, mut s1) = (one.clone(), Vec::new());
    let (mut t0, mut t1) = (Vec::new(), one);
    while vp_degree(&r1).is_some() {
        let (q, r) = vp_divrem(&r0, &r1, k)?;
        let step = |x0: &[RatFun], x1: &[RatFun]| {
            let qx = vp_mul(&q, x1, k);
            let n = x0.len().max(qx.len());
            let mut out = vec![RatFun::zero(k); n];
            for (i, c) in x0.iter().enumerate() {
                out[i] = out[i].add(c);
            }
            for (i, c) in qx.iter().enumerate() {
                out[i] = out[i].sub(c);
            }
            vp_trim(out)
        };
        let ns = step(&s0, &s1);
        let nt = step(&t0, &t1);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, ns);
        (t0, t1) = (t1, nt);
    }
    Ok((r0, s0, t0))
}

fn vp_derivative(v: &[RatFun]) -> Vec<RatFun> {
    if v.len() <= 1 {
        return Vec::new();
    }
    let k = v[0].field().clone();
    let mut out = Vec::with_capacity(v.len() - 1);
    for (i, c) in v.iter().enumerate().skip(1) {
        out.push(c.scale(&nat_rep(&k, i as u64)));
    }
    vp_trim(out)
}

fn vp_gcd_degree(a: &[RatFun], b: &[RatFun]) -> Result<usize> {
    let k = a[0].field().clone();
    let (g, _, _) = vp_xgcd(a, b, &k)?;
    vp_degree(&g).ok_or(Error::DivisionByZero)
}

/// Rational root test for a monic g over F_q(t) with polynomial
/// coefficients (after clearing denominators a root must divide the
/// constant term, up to a unit).
fn has_rational_root(modulus: &[RatFun]) -> Result<bool> {
    let k = modulus[0].field().clone();
    // clear denominators: substitute y = z / D with D = common denominator
    // is avoided — monic over F_q(t) with polynomial coefficients is the
    // supported shape; otherwise fall back to "no root found"
    if modulus.iter().any(|c| c.den().degree() != Some(0)) {
        return Ok(false);
    }
    let g0 = modulus[0].num().clone();
    if g0.is_zero() {
        return Ok(true); // y = 0 is a root
    }
    let facs = crate::ff::factor::factor_poly(&g0, 0)?;
    // enumerate monic divisors of the constant term
    let mut divisors = vec![crate::ff::poly::Poly::constant(&k, k.one_rep())];
    for (f, e) in &facs {
        let mut next = Vec::new();
        for d in &divisors {
            let mut pw = d.clone();
            next.push(pw.clone());
            for _ in 0..*e {
                pw = pw.mul(f);
                next.push(pw.clone());
            }
        }
        divisors = next;
    }
    let units: Vec<_> = k
        .elements(1 << 16)?
        .into_iter()
        .filter(|c| !k.is_zero(c))
        .collect();
    for d in divisors {
        for u in &units {
            let cand = RatFun::from_poly(d.scale(u));
            // evaluate g at the candidate
            let mut acc = RatFun::zero(&k);
            for c in modulus.iter().rev() {
                acc = acc.mul(&cand).add(c);
            }
            if acc.is_zero() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Gaussian elimination over F_q(t); errors on singular systems.
pub(crate) fn solve_linear(mut mat: Vec<Vec<RatFun>>, mut rhs: Vec<RatFun>) -> Result<Vec<RatFun>> {
    let n = mat.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !mat[r][col].is_zero())
            .ok_or(Error::DivisionByZero)?;
        mat.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = mat[col][col].inv()?;
        for c in col..n {
            mat[col][c] = mat[col][c].mul(&inv);
        }
        rhs[col] = rhs[col].mul(&inv);
        for r in 0..n {
            if r == col || mat[r][col].is_zero() {
                continue;
            }
            let f = mat[r][col].clone();
            for c in col..n {
                mat[r][c] = mat[r][c].sub(&f.mul(&mat[col][c]));
            }
            rhs[r] = rhs[r].sub(&f.mul(&rhs[col]));
        }
    }
    Ok(rhs)
}
