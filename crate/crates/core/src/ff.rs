//! Finite fields F_{p^d} with deterministic moduli, and univariate polynomial
//! algebra over them: gcd, squarefree decomposition, factorization, roots.
//!
//! Extension moduli are the lexicographically smallest irreducible monic
//! polynomials, so every F_{p^d} used anywhere in the library is canonical and
//! reports are reproducible.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Description of F_{p^d} as F_p[t]/(modulus).
#[derive(Debug, PartialEq, Eq)]
pub struct FqField {
    pub p: u64,
    pub d: usize,
    /// Monic modulus of degree d over F_p, low coefficients first; length d+1.
    pub modulus: Vec<u64>,
}

impl FqField {
    /// The prime field F_p, with the conventional modulus t.
    pub fn prime(p: u64) -> Result<Arc<FqField>> {
        if !crate::rat::is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Arc::new(FqField {
            p,
            d: 1,
            modulus: vec![0, 1],
        }))
    }

    /// F_{p^d} with the lexicographically smallest irreducible monic modulus.
    pub fn extension(p: u64, d: usize) -> Result<Arc<FqField>> {
        if !crate::rat::is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if d == 0 {
            return Err(Error::InvalidDegree);
        }
        if d == 1 {
            return FqField::prime(p);
        }
        let base = FqField::prime(p)?;
        // candidates ordered by the base-p counter of their low coefficients
        let total = p.pow(d as u32);
        for k in 0..total {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut kk = k;
            for _ in 0..d {
                coeffs.push(kk % p);
                kk /= p;
            }
            coeffs.push(1);
            let cand = FFPoly::from_raw(
                base.clone(),
                coeffs
                    .iter()
                    .map(|&c| FFElem::from_u64(base.clone(), c))
                    .collect(),
            );
            if cand.is_irreducible() {
                return Ok(Arc::new(FqField {
                    p,
                    d,
                    modulus: coeffs,
                }));
            }
        }
        unreachable!("irreducible polynomials of every degree exist over F_p")
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.d as u32)
    }

    pub fn zero(self: &Arc<Self>) -> FFElem {
        FFElem {
            field: self.clone(),
            c: vec![0; self.d],
        }
    }

    pub fn one(self: &Arc<Self>) -> FFElem {
        FFElem::from_u64(self.clone(), 1)
    }

    /// The t-th element in counter order (digits of k base p).
    pub fn element(self: &Arc<Self>, k: u64) -> FFElem {
        let mut c = vec![0u64; self.d];
        let mut kk = k;
        for slot in c.iter_mut() {
            *slot = kk % self.p;
            kk /= self.p;
        }
        FFElem {
            field: self.clone(),
            c,
        }
    }

    /// All elements in counter order.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FFElem> + '_ {
        (0..self.order()).map(move |k| self.element(k))
    }

    /// The generator t of F_{p^d} over F_p (equals 0 in the prime field).
    pub fn gen(self: &Arc<Self>) -> FFElem {
        if self.d == 1 {
            self.zero()
        } else {
            self.element(self.p)
        }
    }
}

/// Element of a fixed F_{p^d}; representative of degree < d, low coefficients first.
#[derive(Clone)]
pub struct FFElem {
    pub field: Arc<FqField>,
    c: Vec<u64>,
}

impl PartialEq for FFElem {
    fn eq(&self, other: &Self) -> bool {
        self.field.p == other.field.p
            && self.field.modulus == other.field.modulus
            && self.c == other.c
    }
}
impl Eq for FFElem {}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.d == 1 {
            return write!(f, "{}", self.c[0]);
        }
        let mut parts = Vec::new();
        for (i, &ci) in self.c.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            parts.push(match i {
                0 => format!("{}", ci),
                1 if ci == 1 => "g".to_string(),
                1 => format!("{}*g", ci),
                _ if ci == 1 => format!("g^{}", i),
                _ => format!("{}*g^{}", ci, i),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

impl FFElem {
    pub fn from_u64(field: Arc<FqField>, v: u64) -> FFElem {
        let mut c = vec![0u64; field.d];
        c[0] = v % field.p;
        FFElem { field, c }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    /// Counter key, used for deterministic orderings.
    pub fn key(&self) -> u64 {
        let mut k = 0u64;
        for &ci in self.c.iter().rev() {
            k = k * self.field.p + ci;
        }
        k
    }

    fn check(&self, other: &FFElem) -> Result<()> {
        if self.field.p != other.field.p || self.field.modulus != other.field.modulus {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &FFElem) -> FFElem {
        self.check(other).expect("field mismatch");
        let p = self.field.p;
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        FFElem {
            field: self.field.clone(),
            c,
        }
    }

    pub fn neg(&self) -> FFElem {
        let p = self.field.p;
        let c = self.c.iter().map(|&a| (p - a) % p).collect();
        FFElem {
            field: self.field.clone(),
            c,
        }
    }

    pub fn sub(&self, other: &FFElem) -> FFElem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FFElem) -> FFElem {
        self.check(other).expect("field mismatch");
        let p = self.field.p;
        let d = self.field.d;
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        // reduce modulo the monic modulus
        for i in (d..prod.len()).rev() {
            let coef = prod[i];
            if coef == 0 {
                continue;
            }
            prod[i] = 0;
            for (j, &mj) in self.field.modulus.iter().enumerate().take(d) {
                let idx = i - d + j;
                prod[idx] = (prod[idx] + coef * (p - mj)) % p;
            }
        }
        prod.truncate(d);
        FFElem {
            field: self.field.clone(),
            c: prod,
        }
    }

    pub fn pow(&self, mut e: u64) -> FFElem {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> FFElem {
        assert!(!self.is_zero(), "inverse of zero");
        // a^(q-2) in F_q
        self.pow(self.field.order() - 2)
    }

    /// p-th root (inverse Frobenius): a^(p^(d-1)).
    pub fn pth_root(&self) -> FFElem {
        if self.field.d == 1 {
            return self.clone();
        }
        self.pow(self.field.p.pow(self.field.d as u32 - 1))
    }

    /// Image under the embedding of F_{p^a} into `target` = F_{p^b}, a | b.
    /// The embedding sends the generator to the smallest root (in counter
    /// order) of the source modulus in the target field.
    pub fn embed(&self, target: &Arc<FqField>) -> Result<FFElem> {
        if self.field.p != target.p {
            return Err(Error::FieldMismatch);
        }
        if target.d % self.field.d != 0 {
            return Err(Error::InvalidDegree);
        }
        if self.field.modulus == target.modulus {
            return Ok(FFElem {
                field: target.clone(),
                c: self.c.clone(),
            });
        }
        let root = smallest_modulus_root(&self.field, target)?;
        // Horner on the representative
        let mut acc = target.zero();
        for &ci in self.c.iter().rev() {
            acc = acc.mul(&root).add(&FFElem::from_u64(target.clone(), ci));
        }
        Ok(acc)
    }
}

fn smallest_modulus_root(src: &Arc<FqField>, target: &Arc<FqField>) -> Result<FFElem> {
    let modulus: Vec<FFElem> = src
        .modulus
        .iter()
        .map(|&c| FFElem::from_u64(target.clone(), c))
        .collect();
    for cand in target.elements() {
        let mut acc = target.zero();
        for m in modulus.iter().rev() {
            acc = acc.mul(&cand).add(m);
        }
        if acc.is_zero() {
            return Ok(cand);
        }
    }
    Err(Error::FieldMismatch)
}

/// Univariate polynomial over a fixed F_{p^d}; coefficients low-first,
/// leading coefficient nonzero, empty vector is the zero polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct FFPoly {
    pub field: Arc<FqField>,
    coeffs: Vec<FFElem>,
}

impl fmt::Debug for FFPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("t"))
    }
}

impl FFPoly {
    pub fn zero(field: Arc<FqField>) -> FFPoly {
        FFPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: Arc<FqField>) -> FFPoly {
        let one = field.one();
        FFPoly::from_raw(field, vec![one])
    }

    pub fn x(field: Arc<FqField>) -> FFPoly {
        let (z, o) = (field.zero(), field.one());
        FFPoly::from_raw(field, vec![z, o])
    }

    pub fn constant(e: FFElem) -> FFPoly {
        FFPoly::from_raw(e.field.clone(), vec![e])
    }

    pub fn from_raw(field: Arc<FqField>, coeffs: Vec<FFElem>) -> FFPoly {
        let mut p = FFPoly { field, coeffs };
        p.normalize();
        p
    }

    pub fn from_u64s(field: Arc<FqField>, cs: &[u64]) -> FFPoly {
        let coeffs = cs
            .iter()
            .map(|&c| FFElem::from_u64(field.clone(), c))
            .collect();
        FFPoly::from_raw(field, coeffs)
    }

    fn normalize(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> FFElem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn coeffs(&self) -> &[FFElem] {
        &self.coeffs
    }

    pub fn leading(&self) -> FFElem {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &FFPoly) -> FFPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&other.coeff(i)));
        }
        FFPoly::from_raw(self.field.clone(), out)
    }

    pub fn neg(&self) -> FFPoly {
        FFPoly::from_raw(
            self.field.clone(),
            self.coeffs.iter().map(|c| c.neg()).collect(),
        )
    }

    pub fn sub(&self, other: &FFPoly) -> FFPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FFPoly) -> FFPoly {
        if self.is_zero() || other.is_zero() {
            return FFPoly::zero(self.field.clone());
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        FFPoly::from_raw(self.field.clone(), out)
    }

    pub fn scale(&self, c: &FFElem) -> FFPoly {
        FFPoly::from_raw(
            self.field.clone(),
            self.coeffs.iter().map(|a| a.mul(c)).collect(),
        )
    }

    pub fn mul_xk(&self, k: usize) -> FFPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![self.field.zero(); k];
        out.extend(self.coeffs.iter().cloned());
        FFPoly::from_raw(self.field.clone(), out)
    }

    /// Euclidean division; divisor must be nonzero.
    pub fn divrem(&self, div: &FFPoly) -> (FFPoly, FFPoly) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let dd = div.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return (FFPoly::zero(self.field.clone()), self.clone());
        }
        let lead_inv = div.leading().inv();
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i].mul(&lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c.clone();
            for (j, m) in div.coeffs.iter().enumerate() {
                rem[i - dd + j] = rem[i - dd + j].sub(&c.mul(m));
            }
        }
        (
            FFPoly::from_raw(self.field.clone(), quot),
            FFPoly::from_raw(self.field.clone(), rem),
        )
    }

    pub fn rem(&self, div: &FFPoly) -> FFPoly {
        self.divrem(div).1
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, div: &FFPoly) -> FFPoly {
        let (q, r) = self.divrem(div);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> FFPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().inv())
    }

    pub fn derivative(&self) -> FFPoly {
        if self.coeffs.len() <= 1 {
            return FFPoly::zero(self.field.clone());
        }
        let p = self.field.p;
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&FFElem::from_u64(self.field.clone(), (i as u64) % p)))
            .collect();
        FFPoly::from_raw(self.field.clone(), out)
    }

    pub fn eval(&self, x: &FFElem) -> FFElem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Monic gcd. gcd(a, 0) = monic(a).
    pub fn gcd(&self, other: &FFPoly) -> Result<FFPoly> {
        if self.field.p != other.field.p || self.field.modulus != other.field.modulus {
            return Err(Error::FieldMismatch);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn pow_mod(&self, mut e: u64, m: &FFPoly) -> FFPoly {
        let mut base = self.rem(m);
        let mut acc = FFPoly::one(self.field.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Strips the largest power of t dividing the polynomial; returns
    /// (stripped polynomial, removed power). Zero strips to zero.
    pub fn strip_powers(&self) -> (FFPoly, usize) {
        if self.is_zero() {
            return (self.clone(), 0);
        }
        let k = self
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero polynomial has a nonzero coefficient");
        (
            FFPoly::from_raw(self.field.clone(), self.coeffs[k..].to_vec()),
            k,
        )
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.is_constant() {
            return true;
        }
        let d = self.derivative();
        if d.is_zero() {
            return false;
        }
        self.gcd(&d).expect("same field").is_constant()
    }

    /// Rabin irreducibility test over the coefficient field.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let q = self.field.order();
        let f = self.monic();
        let x = FFPoly::x(self.field.clone());
        // x^(q^n) == x mod f
        let mut h = x.clone();
        for _ in 0..n {
            h = h.pow_mod(q, &f);
        }
        if h != x.rem(&f) {
            return false;
        }
        // for each prime divisor r of n: gcd(x^(q^(n/r)) - x, f) == 1
        for r in prime_divisors(n) {
            let mut h = x.clone();
            for _ in 0..(n / r) {
                h = h.pow_mod(q, &f);
            }
            let g = h.sub(&x).gcd(&f).expect("same field");
            if !g.is_constant() {
                return false;
            }
        }
        true
    }

    /// Squarefree decomposition in characteristic p: list of (monic squarefree
    /// factor, multiplicity) with pairwise coprime factors.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(FFPoly, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = self.monic();
        if f.is_constant() {
            return Ok(Vec::new());
        }
        let p = self.field.p as u32;
        let deriv = f.derivative();
        if deriv.is_zero() {
            // f = h(t^p); take p-th roots of the surviving coefficients
            let mut h_coeffs = Vec::new();
            for i in (0..f.coeffs.len()).step_by(p as usize) {
                h_coeffs.push(f.coeff(i).pth_root());
            }
            let h = FFPoly::from_raw(self.field.clone(), h_coeffs);
            let inner = h.squarefree_decomposition()?;
            return Ok(inner.into_iter().map(|(g, m)| (g, m * p)).collect());
        }
        let mut out: Vec<(FFPoly, u32)> = Vec::new();
        let mut c = f.gcd(&deriv)?;
        let mut w = f.div_exact(&c);
        let mut i = 1u32;
        while !w.is_constant() {
            let y = w.gcd(&c)?;
            let z = w.div_exact(&y);
            if !z.is_constant() {
                out.push((z, i));
            }
            w = y;
            c = c.div_exact(&w);
            i += 1;
        }
        if !c.is_constant() {
            // remaining part is a p-th power
            let inner = c.squarefree_decomposition()?;
            for (g, m) in inner {
                out.push((g, m));
            }
        }
        Ok(out)
    }

    /// Full factorization into monic irreducibles with multiplicities,
    /// deterministically ordered by (degree, coefficient keys).
    pub fn factor(&self) -> Result<Vec<(FFPoly, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut out: Vec<(FFPoly, u32)> = Vec::new();
        for (sq, mult) in self.squarefree_decomposition()? {
            for (deg, part) in distinct_degree_split(&sq)? {
                for irr in equal_degree_split(&part, deg) {
                    out.push((irr, mult));
                }
            }
        }
        out.sort_by(|a, b| poly_sort_key(&a.0).cmp(&poly_sort_key(&b.0)));
        Ok(out)
    }

    /// Roots in the coefficient field, in counter order.
    pub fn roots_in_field(&self) -> Vec<FFElem> {
        let mut out = Vec::new();
        if self.is_zero() {
            return out;
        }
        for e in self.field.elements() {
            if self.eval(&e).is_zero() {
                out.push(e);
            }
        }
        out
    }

    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = format!("{}", c);
            let needs_paren = cs.contains('+');
            let cpart = if needs_paren {
                format!("({})", cs)
            } else {
                cs.clone()
            };
            parts.push(match i {
                0 => cpart,
                1 if cs == "1" => var.to_string(),
                1 => format!("{}*{}", cpart, var),
                _ if cs == "1" => format!("{}^{}", var, i),
                _ => format!("{}*{}^{}", cpart, var, i),
            });
        }
        parts.join(" + ")
    }
}

fn poly_sort_key(f: &FFPoly) -> (usize, Vec<u64>) {
    let deg = f.degree().unwrap_or(0);
    // leading coefficient first
    let keys = f.coeffs().iter().rev().map(|c| c.key()).collect();
    (deg, keys)
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Distinct-degree splitting of a monic squarefree polynomial; returns pairs
/// (degree, product of the irreducible factors of that degree).
fn distinct_degree_split(f: &FFPoly) -> Result<Vec<(usize, FFPoly)>> {
    let mut out = Vec::new();
    let mut f = f.monic();
    if f.is_constant() {
        return Ok(out);
    }
    let q = f.field.order();
    let x = FFPoly::x(f.field.clone());
    let mut h = x.clone();
    let mut i = 0usize;
    while f.degree().unwrap_or(0) >= 2 * (i + 1) {
        i += 1;
        h = h.pow_mod(q, &f);
        let g = h.sub(&x).gcd(&f)?;
        if !g.is_constant() {
            out.push((i, g.clone()));
            f = f.div_exact(&g);
            h = h.rem(&f);
        }
    }
    if !f.is_constant() {
        out.push((f.degree().unwrap(), f));
    }
    Ok(out)
}

/// Splits a product of distinct irreducibles of known equal degree by
/// exhaustive trial division over candidates in counter order. Deterministic;
/// inputs are desk-scale.
fn equal_degree_split(part: &FFPoly, deg: usize) -> Vec<FFPoly> {
    let mut out = Vec::new();
    let mut f = part.monic();
    if f.degree() == Some(deg) {
        return vec![f];
    }
    let field = f.field.clone();
    let q = field.order();
    let total = q.checked_pow(deg as u32).expect("candidate space fits u64");
    let mut k = 0u64;
    while f.degree().map_or(false, |d| d > deg) && k < total {
        // monic candidate of degree `deg` with counter k
        let mut coeffs = Vec::with_capacity(deg + 1);
        let mut kk = k;
        for _ in 0..deg {
            coeffs.push(field.element(kk % q));
            kk /= q;
        }
        coeffs.push(field.one());
        let cand = FFPoly::from_raw(field.clone(), coeffs);
        let (quot, rem) = f.divrem(&cand);
        if rem.is_zero() {
            out.push(cand);
            f = quot;
        }
        k += 1;
    }
    if !f.is_constant() {
        out.push(f);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> Arc<FqField> {
        FqField::prime(2).unwrap()
    }

    #[test]
    fn extend_deterministic_moduli() {
        assert_eq!(FqField::extension(2, 1).unwrap().modulus, vec![0, 1]);
        assert_eq!(FqField::extension(2, 2).unwrap().modulus, vec![1, 1, 1]);
        assert_eq!(FqField::extension(3, 2).unwrap().modulus, vec![1, 0, 1]);
    }

    #[test]
    fn gcd_examples() {
        let f = f2();
        // x^2+1 and x+1 over F_2
        let a = FFPoly::from_u64s(f.clone(), &[1, 0, 1]);
        let b = FFPoly::from_u64s(f.clone(), &[1, 1]);
        assert_eq!(a.gcd(&b).unwrap(), b);
        // gcd(x, 1) = 1
        let x = FFPoly::x(f.clone());
        let one = FFPoly::one(f.clone());
        assert_eq!(x.gcd(&one).unwrap(), one);
        // gcd(x^3+x, x^2+x) = x^2+x
        let a = FFPoly::from_u64s(f.clone(), &[0, 1, 0, 1]);
        let b = FFPoly::from_u64s(f.clone(), &[0, 1, 1]);
        assert_eq!(a.gcd(&b).unwrap(), b);
    }

    #[test]
    fn gcd_field_mismatch() {
        let a = FFPoly::x(f2());
        let b = FFPoly::x(FqField::prime(3).unwrap());
        assert_eq!(a.gcd(&b), Err(Error::FieldMismatch));
    }

    #[test]
    fn factor_examples() {
        let f = f2();
        // x^3 + x = x (x+1)^2 over F_2
        let a = FFPoly::from_u64s(f.clone(), &[0, 1, 0, 1]);
        let fac = a.factor().unwrap();
        assert_eq!(
            fac,
            vec![
                (FFPoly::from_u64s(f.clone(), &[0, 1]), 1),
                (FFPoly::from_u64s(f.clone(), &[1, 1]), 2),
            ]
        );
        // x^4 + x + 1 irreducible over F_2
        let a = FFPoly::from_u64s(f.clone(), &[1, 1, 0, 0, 1]);
        assert_eq!(a.factor().unwrap(), vec![(a.clone(), 1)]);
        // x^2 - 1 over F_5
        let f5 = FqField::prime(5).unwrap();
        let a = FFPoly::from_u64s(f5.clone(), &[4, 0, 1]);
        assert_eq!(
            a.factor().unwrap(),
            vec![
                (FFPoly::from_u64s(f5.clone(), &[1, 1]), 1),
                (FFPoly::from_u64s(f5.clone(), &[4, 1]), 1),
            ]
        );
        assert_eq!(FFPoly::zero(f).factor(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn embedding_is_ring_hom() {
        let f4 = FqField::extension(2, 2).unwrap();
        let f16 = FqField::extension(2, 4).unwrap();
        for a in f4.elements() {
            for b in f4.elements() {
                let ea = a.embed(&f16).unwrap();
                let eb = b.embed(&f16).unwrap();
                assert_eq!(a.mul(&b).embed(&f16).unwrap(), ea.mul(&eb));
                assert_eq!(a.add(&b).embed(&f16).unwrap(), ea.add(&eb));
            }
        }
    }

    #[test]
    fn extension_arithmetic_roundtrip() {
        let f9 = FqField::extension(3, 2).unwrap();
        for a in f9.elements() {
            if a.is_zero() {
                continue;
            }
            assert_eq!(a.mul(&a.inv()), f9.one());
        }
    }

    fn arb_poly(p: u64, max_deg: usize) -> impl Strategy<Value = FFPoly> {
        prop::collection::vec(0u64..p, 1..=max_deg + 1).prop_map(move |cs| {
            FFPoly::from_u64s(FqField::prime(p).unwrap(), &cs)
        })
    }

    proptest! {
        #[test]
        fn factor_remultiplies(pi in 0usize..4, cs in prop::collection::vec(0u64..7, 1..=13)) {
            let p = [2u64, 3, 5, 7][pi];
            let field = FqField::prime(p).unwrap();
            let cs: Vec<u64> = cs.iter().map(|c| c % p).collect();
            let f = FFPoly::from_u64s(field.clone(), &cs);
            prop_assume!(!f.is_zero());
            let fac = f.factor().unwrap();
            let mut prod = FFPoly::constant(f.leading());
            for (g, m) in &fac {
                for _ in 0..*m {
                    prod = prod.mul(g);
                }
            }
            prop_assert_eq!(prod, f);
        }

        #[test]
        fn gcd_symmetric(a in arb_poly(3, 8), b in arb_poly(3, 8)) {
            prop_assert_eq!(a.gcd(&b).unwrap(), b.gcd(&a).unwrap());
            let z = FFPoly::zero(a.field.clone());
            prop_assert_eq!(a.gcd(&z).unwrap(), a.monic());
        }

        #[test]
        fn root_count_matches_factor_degrees(cs in prop::collection::vec(0u64..3, 2..=9), d in 1usize..4) {
            let field = FqField::prime(3).unwrap();
            let f = FFPoly::from_u64s(field.clone(), &cs);
            prop_assume!(!f.is_zero() && f.is_squarefree());
            let ext = FqField::extension(3, d).unwrap();
            let lifted = FFPoly::from_raw(
                ext.clone(),
                f.coeffs().iter().map(|c| c.embed(&ext).unwrap()).collect(),
            );
            let nroots = lifted.roots_in_field().len();
            let expect = f
                .factor()
                .unwrap()
                .iter()
                .filter(|(g, _)| d % g.degree().unwrap() == 0)
                .map(|(g, _)| g.degree().unwrap())
                .sum::<usize>();
            prop_assert_eq!(nroots, expect);
        }
    }
}
