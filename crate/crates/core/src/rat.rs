//! Exact rationals, the extended value `Infinity` and p-adic valuations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational; always stored reduced with positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Renders a rational as "num/den", or just "num" when the denominator is 1.
pub fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Element of Q ∪ {∞}; `Infinity` absorbs addition and exceeds every rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtRat {
    Finite(Rat),
    Infinity,
}

impl ExtRat {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::Finite(r) => Some(r),
            ExtRat::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRat::Infinity)
    }

    pub fn min(self, other: ExtRat) -> ExtRat {
        match (self, other) {
            (ExtRat::Infinity, b) => b,
            (a, ExtRat::Infinity) => a,
            (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite(a.min(b)),
        }
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (ExtRat::Infinity, ExtRat::Infinity) => Ordering::Equal,
            (ExtRat::Infinity, _) => Ordering::Greater,
            (_, ExtRat::Infinity) => Ordering::Less,
            (ExtRat::Finite(a), ExtRat::Finite(b)) => a.cmp(b),
        }
    }
}

impl std::fmt::Display for ExtRat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtRat::Finite(r) => write!(f, "{}", rat_str(r)),
            ExtRat::Infinity => write!(f, "infinity"),
        }
    }
}

/// Trial-division primality check; inputs here are desk-scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn int_val(mut n: BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut v = 0i64;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        n = q;
    }
}

/// p-adic valuation of a rational; `val_p(0) = Infinity`.
pub fn val_p(a: &Rat, p: u64) -> Result<ExtRat> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    if a.is_zero() {
        return Ok(ExtRat::Infinity);
    }
    Ok(ExtRat::Finite(Rat::from_integer(BigInt::from(val_p_int(
        a, p,
    )))))
}

/// Integer p-adic valuation of a nonzero rational. Panics on zero.
pub fn val_p_int(a: &Rat, p: u64) -> i64 {
    assert!(!a.is_zero(), "valuation of zero is infinite");
    let pb = BigInt::from(p);
    int_val(a.numer().clone(), &pb) - int_val(a.denom().clone(), &pb)
}

/// Residue of a p-integral rational in F_p, returned as an integer in [0, p).
pub fn residue_int(a: &Rat, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    if a.is_zero() {
        return Ok(0);
    }
    if val_p_int(a, p) < 0 {
        return Err(Error::NotIntegral);
    }
    let pb = BigInt::from(p);
    let num = a.numer().mod_floor(&pb);
    let den = a.denom().mod_floor(&pb);
    let den_u = den
        .to_string()
        .parse::<u64>()
        .expect("residue fits in u64");
    let num_u = num
        .to_string()
        .parse::<u64>()
        .expect("residue fits in u64");
    // denominator is a unit mod p since the valuation is >= 0
    let inv = mod_inv(den_u, p);
    Ok(num_u * inv % p)
}

pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    // extended Euclid; p prime and a not divisible by p
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert!(r == 1, "element not invertible");
    ((t % p as i128 + p as i128) % p as i128) as u64
}

/// Decimal part of a rational: x - floor(x), always in [0, 1).
pub fn decimal_part(x: &Rat) -> Rat {
    x - x.floor()
}

/// floor(x) as BigInt.
pub fn floor_int(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

/// Sign-aware absolute value helper used by property tests.
pub fn rat_abs(x: &Rat) -> Rat {
    x.abs()
}
