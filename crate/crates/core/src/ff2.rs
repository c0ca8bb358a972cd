//! Bivariate polynomials over finite fields and the common-torus-zero
//! decision procedure.
//!
//! The decision procedure is exact: strip monomial factors, peel off common
//! curve components via bivariate gcds, then eliminate y with pairwise
//! resultants and verify every candidate x in its explicit finite extension.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::{FFElem, FFPoly, FqField};

/// Bivariate polynomial with nonnegative exponents over a fixed finite field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FF2Poly {
    pub field: Arc<FqField>,
    terms: BTreeMap<(u32, u32), FFElem>,
}

impl FF2Poly {
    pub fn zero(field: Arc<FqField>) -> Self {
        FF2Poly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), FFElem)>>(
        field: Arc<FqField>,
        terms: I,
    ) -> Self {
        let mut t = BTreeMap::new();
        for (e, c) in terms {
            if !c.is_zero() {
                t.insert(e, c);
            }
        }
        FF2Poly { field, terms: t }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), FFElem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn deg_y(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    /// Divides out the largest monomial factor x^a y^b.
    pub fn strip_monomials(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let a = self.terms.keys().map(|&(i, _)| i).min().unwrap();
        let b = self.terms.keys().map(|&(_, j)| j).min().unwrap();
        FF2Poly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i - a, j - b), c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = FF2Poly::zero(self.field.clone());
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                let key = (i1 + i2, j1 + j2);
                let add = c1.mul(c2);
                let entry = out
                    .terms
                    .entry(key)
                    .or_insert_with(|| self.field.zero());
                *entry = entry.add(&add);
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// Evaluation in an extension of the coefficient field.
    pub fn eval_in(&self, x: &FFElem, y: &FFElem) -> Result<FFElem> {
        let target = x.field.clone();
        let mut acc = target.zero();
        for (&(i, j), c) in &self.terms {
            let ce = c.embed(&target)?;
            acc = acc.add(&ce.mul(&x.pow(i as u64)).mul(&y.pow(j as u64)));
        }
        Ok(acc)
    }

    /// Coefficients in y: index j holds the x-polynomial coefficient of y^j.
    fn y_coeffs(&self) -> Vec<FFPoly> {
        let dy = self.deg_y() as usize;
        let mut rows: Vec<Vec<FFElem>> = vec![Vec::new(); dy + 1];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, self.field.zero());
            }
            row[i as usize] = c.clone();
        }
        rows.into_iter()
            .map(|r| FFPoly::from_raw(self.field.clone(), r))
            .collect()
    }

    fn from_y_coeffs(field: Arc<FqField>, ys: &[FFPoly]) -> Self {
        let mut terms = BTreeMap::new();
        for (j, xp) in ys.iter().enumerate() {
            for (i, c) in xp.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    terms.insert((i as u32, j as u32), c.clone());
                }
            }
        }
        FF2Poly { field, terms }
    }

    /// Univariate specialization at x = a (in an extension field).
    pub fn specialize_x(&self, a: &FFElem) -> Result<FFPoly> {
        let target = a.field.clone();
        let dy = self.deg_y() as usize;
        let mut out = vec![target.zero(); dy + 1];
        for (&(i, j), c) in &self.terms {
            let ce = c.embed(&target)?;
            let term = ce.mul(&a.pow(i as u64));
            out[j as usize] = out[j as usize].add(&term);
        }
        Ok(FFPoly::from_raw(target, out))
    }

    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (&(i, j), c) in self.terms.iter().rev() {
            let cs = format!("{}", c);
            let mut factors = Vec::new();
            if cs != "1" || (i == 0 && j == 0) {
                if cs.contains('+') {
                    factors.push(format!("({})", cs));
                } else {
                    factors.push(cs);
                }
            }
            if i > 0 {
                factors.push(if i == 1 {
                    "x".to_string()
                } else {
                    format!("x^{}", i)
                });
            }
            if j > 0 {
                factors.push(if j == 1 {
                    "y".to_string()
                } else {
                    format!("y^{}", j)
                });
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

fn content(ys: &[FFPoly]) -> FFPoly {
    let field = ys[0].field.clone();
    let mut g = FFPoly::zero(field);
    for c in ys {
        g = g.gcd(c).expect("same field");
    }
    g
}

fn primitive_part(ys: &[FFPoly], cont: &FFPoly) -> Vec<FFPoly> {
    ys.iter()
        .map(|c| {
            if c.is_zero() {
                c.clone()
            } else {
                c.div_exact(cont)
            }
        })
        .collect()
}

fn trim_y(ys: &mut Vec<FFPoly>) {
    while matches!(ys.last(), Some(c) if c.is_zero()) {
        ys.pop();
    }
}

/// Pseudo-remainder of a by b in (F[x])[y]; deg_y a >= deg_y b >= 1.
fn pseudo_rem(a: &[FFPoly], b: &[FFPoly]) -> Vec<FFPoly> {
    let field = b[0].field.clone();
    let db = b.len() - 1;
    let lc_b = b[db].clone();
    let mut r: Vec<FFPoly> = a.to_vec();
    trim_y(&mut r);
    while r.len() >= b.len() && !r.is_empty() {
        let dr = r.len() - 1;
        let lead = r[dr].clone();
        // r = lc_b * r - lead * y^(dr-db) * b
        for item in r.iter_mut() {
            *item = item.mul(&lc_b);
        }
        for (k, bk) in b.iter().enumerate() {
            let idx = dr - db + k;
            r[idx] = r[idx].sub(&lead.mul(bk));
        }
        let _ = field;
        trim_y(&mut r);
    }
    r
}

/// Exact division in (F[x])[y]; panics if not exact.
fn div_exact_y(a: &[FFPoly], b: &[FFPoly]) -> Vec<FFPoly> {
    let field = b[0].field.clone();
    let mut r: Vec<FFPoly> = a.to_vec();
    trim_y(&mut r);
    let db = b.len() - 1;
    let lc_b = &b[db];
    let mut q = vec![FFPoly::zero(field.clone()); r.len().saturating_sub(db)];
    while r.len() > db {
        let dr = r.len() - 1;
        let qc = r[dr].div_exact(lc_b);
        q[dr - db] = qc.clone();
        for (k, bk) in b.iter().enumerate() {
            let idx = dr - db + k;
            r[idx] = r[idx].sub(&qc.mul(bk));
        }
        trim_y(&mut r);
    }
    assert!(r.is_empty(), "inexact bivariate division");
    q
}

/// Bivariate gcd over a finite field (primitive PRS), defined up to a unit;
/// normalized so the leading coefficient polynomial is monic.
pub fn gcd2(f: &FF2Poly, g: &FF2Poly) -> FF2Poly {
    let field = f.field.clone();
    if f.is_zero() {
        return g.clone();
    }
    if g.is_zero() {
        return f.clone();
    }
    let fy = f.y_coeffs();
    let gy = g.y_coeffs();
    let cf = content(&fy);
    let cg = content(&gy);
    let cont_gcd = cf.gcd(&cg).expect("same field");
    let mut a = primitive_part(&fy, &cf);
    let mut b = primitive_part(&gy, &cg);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let pp_gcd: Vec<FFPoly> = loop {
        if b.len() <= 1 {
            // primitive and constant in y: unit
            break vec![FFPoly::one(field.clone())];
        }
        let mut r = pseudo_rem(&a, &b);
        if r.is_empty() {
            break b;
        }
        let rc = content(&r);
        let rp = primitive_part(&r, &rc);
        a = b;
        b = rp;
        trim_y(&mut a);
        let _ = &mut r;
    };
    // assemble content * primitive gcd
    let mut out = FF2Poly::from_y_coeffs(field.clone(), &pp_gcd);
    let cont2 = FF2Poly::from_y_coeffs(field, &[cont_gcd]);
    out = out.mul(&cont2);
    // normalize leading coefficient
    if let Some((_, c)) = out.terms.iter().next_back() {
        let inv = c.inv();
        let terms = out
            .terms
            .iter()
            .map(|(&e, v)| (e, v.mul(&inv)))
            .collect();
        out = FF2Poly {
            field: out.field.clone(),
            terms,
        };
    }
    out
}

/// Exact quotient f / g of bivariate polynomials (g must divide f).
pub fn div2_exact(f: &FF2Poly, g: &FF2Poly) -> FF2Poly {
    let fy = f.y_coeffs();
    let gy = g.y_coeffs();
    if gy.len() == 1 {
        // divisor is a polynomial in x only
        let q: Vec<FFPoly> = fy.iter().map(|c| {
            if c.is_zero() {
                c.clone()
            } else {
                c.div_exact(&gy[0])
            }
        }).collect();
        return FF2Poly::from_y_coeffs(f.field.clone(), &q);
    }
    let q = div_exact_y(&fy, &gy);
    FF2Poly::from_y_coeffs(f.field.clone(), &q)
}

/// Resultant of f and g with respect to y, a polynomial in x.
pub fn resultant_y(f: &FF2Poly, g: &FF2Poly) -> FFPoly {
    let field = f.field.clone();
    if f.is_zero() || g.is_zero() {
        return FFPoly::zero(field);
    }
    let fy = f.y_coeffs();
    let gy = g.y_coeffs();
    let m = fy.len() - 1;
    let n = gy.len() - 1;
    if m == 0 {
        return pow_poly(&fy[0], n as u32);
    }
    if n == 0 {
        return pow_poly(&gy[0], m as u32);
    }
    // Sylvester matrix over F[x], size (m+n)
    let size = m + n;
    let zero = FFPoly::zero(field.clone());
    let mut mat = vec![vec![zero.clone(); size]; size];
    for row in 0..n {
        for (k, c) in fy.iter().enumerate() {
            mat[row][row + (m - k)] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in gy.iter().enumerate() {
            mat[n + row][row + (n - k)] = c.clone();
        }
    }
    bareiss_det(mat)
}

fn pow_poly(f: &FFPoly, e: u32) -> FFPoly {
    let mut acc = FFPoly::one(f.field.clone());
    for _ in 0..e {
        acc = acc.mul(f);
    }
    acc
}

/// Fraction-free determinant over F[x].
fn bareiss_det(mut m: Vec<Vec<FFPoly>>) -> FFPoly {
    let n = m.len();
    if n == 0 {
        return FFPoly::one(m[0][0].field.clone());
    }
    let field = m[0][0].field.clone();
    let mut sign_flip = false;
    let mut prev = FFPoly::one(field.clone());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            // pivot search
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return FFPoly::zero(field),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev);
            }
        }
        for i in k + 1..n {
            m[i][k] = FFPoly::zero(field.clone());
        }
        prev = m[k][k].clone();
    }
    let mut det = m[n - 1][n - 1].clone();
    if sign_flip {
        det = det.neg();
    }
    det
}

/// A common zero of a polynomial system in the torus, with both coordinates
/// in an explicit canonical extension F_{p^d}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusWitness {
    pub x: FFElem,
    pub y: FFElem,
}

impl TorusWitness {
    pub fn extension_degree(&self) -> usize {
        self.x.field.d
    }

    pub fn display(&self) -> String {
        format!(
            "x = {}, y = {} in F_{}^{}",
            self.x, self.y, self.x.field.p, self.x.field.d
        )
    }
}

const WITNESS_FIELD_CAP: u64 = 1 << 16;

/// Decides whether the system has a common zero (x0, y0) with x0, y0 nonzero
/// in the algebraic closure of the coefficient field. Returns a verified
/// witness in an explicit finite extension when one is found within the
/// enumeration cap.
pub fn has_common_torus_zero(polys: &[FF2Poly]) -> Result<(bool, Option<TorusWitness>)> {
    if polys.is_empty() {
        return Err(Error::IndeterminateSystem);
    }
    let field = polys[0].field.clone();
    let stripped: Vec<FF2Poly> = polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.strip_monomials())
        .collect();
    if stripped.is_empty() {
        return Err(Error::IndeterminateSystem);
    }
    let _ = field;
    solve(stripped)
}

fn solve(mut polys: Vec<FF2Poly>) -> Result<(bool, Option<TorusWitness>)> {
    let field = polys[0].field.clone();
    let p = field.p;
    // monomials strip to constants; any nonzero constant kills the system
    for f in &polys {
        debug_assert!(!f.is_zero());
        if f.is_constant() {
            return Ok((false, None));
        }
    }
    polys.sort_by_key(|f| f.terms().len());
    polys.dedup();

    if polys.len() == 1 {
        // a stripped nonconstant curve always meets the torus over the closure
        return Ok((true, brute_witness(&polys, p)));
    }

    // peel off shared components so pairwise resultants are nonzero
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            let g = gcd2(&polys[i], &polys[j]).strip_monomials();
            if !g.is_constant() && !g.is_zero() {
                let qi = div2_exact(&polys[i], &g).strip_monomials();
                let qj = div2_exact(&polys[j], &g).strip_monomials();
                // zeros(fi) ∩ zeros(fj) = zeros(g) ∪ (zeros(fi/g) ∩ zeros(fj/g))
                let mut with_g: Vec<FF2Poly> = Vec::new();
                let mut without: Vec<FF2Poly> = Vec::new();
                for (k, f) in polys.iter().enumerate() {
                    if k == i || k == j {
                        continue;
                    }
                    with_g.push(f.clone());
                    without.push(f.clone());
                }
                with_g.push(g);
                without.push(qi);
                without.push(qj);
                let first = solve(with_g)?;
                if first.0 {
                    return Ok(first);
                }
                return solve(without);
            }
        }
    }

    // eliminate y
    let mut constraints: Vec<FFPoly> = Vec::new();
    let mut ypolys: Vec<&FF2Poly> = Vec::new();
    for f in &polys {
        if f.deg_y() == 0 {
            let ys = f.y_coeffs();
            constraints.push(ys[0].clone());
        } else {
            ypolys.push(f);
        }
    }
    for i in 0..ypolys.len() {
        for j in i + 1..ypolys.len() {
            let r = resultant_y(ypolys[i], ypolys[j]);
            debug_assert!(!r.is_zero(), "coprime polynomials have nonzero resultant");
            constraints.push(r);
        }
    }
    let mut g = FFPoly::zero(field.clone());
    for c in &constraints {
        g = g.gcd(c)?;
    }
    let (g, _) = g.strip_powers();
    if g.is_constant() {
        return Ok((false, None));
    }
    for (h, _) in g.factor()? {
        let m = h.degree().expect("factors are nonconstant");
        let ext = FqField::extension(p, m * field.d)?;
        let lifted = FFPoly::from_raw(
            ext.clone(),
            h.coeffs()
                .iter()
                .map(|c| c.embed(&ext))
                .collect::<Result<Vec<_>>>()?,
        );
        let roots = lifted.roots_in_field();
        let alpha = roots.first().cloned().expect("factor splits in its degree field");
        debug_assert!(!alpha.is_zero(), "stripped constraint has no zero root");
        let mut specialized: Vec<FFPoly> = Vec::new();
        let mut all_zero = true;
        let mut dead = false;
        for f in &polys {
            let s = f.specialize_x(&alpha)?;
            if s.is_zero() {
                continue;
            }
            all_zero = false;
            if s.is_constant() {
                dead = true;
                break;
            }
            specialized.push(s);
        }
        if dead {
            continue;
        }
        if all_zero {
            return Ok((true, Some(TorusWitness {
                x: alpha,
                y: ext.one(),
            })));
        }
        let mut w = FFPoly::zero(ext.clone());
        for s in &specialized {
            w = w.gcd(s)?;
        }
        let (w, _) = w.strip_powers();
        if w.is_constant() {
            continue;
        }
        // a nonzero common y exists; produce it explicitly if the field is small
        let roots = w.roots_in_field();
        if let Some(beta) = roots.first() {
            return Ok((true, Some(TorusWitness { x: alpha.clone(), y: beta.clone() })));
        }
        let t = w
            .factor()?
            .iter()
            .map(|(f, _)| f.degree().unwrap())
            .min()
            .expect("nonconstant polynomial has factors");
        let full = ext.d * t;
        let target_order = (p as u128).checked_pow(full as u32);
        if target_order.map_or(true, |o| o > WITNESS_FIELD_CAP as u128) {
            return Ok((true, None));
        }
        let big = FqField::extension(p, full)?;
        let alpha_big = alpha.embed(&big)?;
        let w_big = FFPoly::from_raw(
            big.clone(),
            w.coeffs()
                .iter()
                .map(|c| c.embed(&big))
                .collect::<Result<Vec<_>>>()?,
        );
        let beta = w_big
            .roots_in_field()
            .into_iter()
            .next()
            .expect("root exists in the splitting degree field");
        return Ok((true, Some(TorusWitness { x: alpha_big, y: beta })));
    }
    Ok((false, None))
}

/// Exhaustive small-field witness search for systems already known solvable.
fn brute_witness(polys: &[FF2Poly], p: u64) -> Option<TorusWitness> {
    for d in 1..=6usize {
        let order = (p as u128).checked_pow(d as u32)?;
        if order > 4096 {
            break;
        }
        let ext = FqField::extension(p, d).ok()?;
        for xk in 1..ext.order() {
            let x = ext.element(xk);
            for yk in 1..ext.order() {
                let y = ext.element(yk);
                if polys
                    .iter()
                    .all(|f| f.eval_in(&x, &y).map_or(false, |v| v.is_zero()))
                {
                    return Some(TorusWitness { x, y });
                }
            }
        }
    }
    None
}
