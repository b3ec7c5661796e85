//! Valuations, norms and digit expansions at every place of Q, plus
//! ultrametric ball geometry and principal adele/idele profiles.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{pow_signed, Rational};

/// Trial division runs up to this bound before the cofactor must be
/// certified prime by Miller-Rabin.
pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// A prime that passed a deterministic primality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime_u64(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The real place or one finite place per prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Real,
    Finite(Prime),
}

impl Place {
    pub fn prime(p: u64) -> Result<Self> {
        Prime::new(p).map(Place::Finite)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => f.write_str("real"),
            Place::Finite(p) => p.fmt(f),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "real" | "inf" | "infinity" => Ok(Place::Real),
            other => {
                let p: u64 = other.parse().map_err(|_| Error::Parse {
                    input: s.to_string(),
                    reason: "expected `real` or a prime".to_string(),
                })?;
                Place::prime(p)
            }
        }
    }
}

/// p-adic valuation; `PlusInfinity` exactly for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    PlusInfinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::PlusInfinity => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        use Valuation::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), PlusInfinity) => Ordering::Less,
            (PlusInfinity, Finite(_)) => Ordering::Greater,
            (PlusInfinity, PlusInfinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => v.fmt(f),
            Valuation::PlusInfinity => f.write_str("inf"),
        }
    }
}

/// An exact absolute value. Finite-place norms are kept as exponents of p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NormValue {
    RealAbs(Rational),
    /// `p^exponent`, where `exponent = -v_p(x)`.
    PPower {
        p: Prime,
        exponent: i64,
    },
    Zero,
}

impl NormValue {
    /// Exact comparison of the norm with 1.
    pub fn cmp_one(&self) -> Ordering {
        match self {
            NormValue::RealAbs(r) => r.cmp(&Rational::one()),
            NormValue::PPower { exponent, .. } => exponent.cmp(&0),
            NormValue::Zero => Ordering::Less,
        }
    }

    pub fn to_rational(&self) -> Rational {
        match self {
            NormValue::RealAbs(r) => r.clone(),
            NormValue::PPower { p, exponent } => pow_signed(p.get(), *exponent),
            NormValue::Zero => Rational::zero(),
        }
    }

    /// Product of two norms taken at the same place.
    pub fn mul(&self, other: &NormValue) -> NormValue {
        use NormValue::*;
        match (self, other) {
            (Zero, _) | (_, Zero) => Zero,
            (RealAbs(x), RealAbs(y)) => RealAbs(x * y),
            (PPower { p, exponent: e }, PPower { p: q, exponent: f }) if p == q => PPower {
                p: *p,
                exponent: e + f,
            },
            _ => panic!("norms taken at different places"),
        }
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormValue::RealAbs(r) => r.fmt(f),
            NormValue::PPower { p, exponent } => write!(f, "{p}^{exponent}"),
            NormValue::Zero => f.write_str("0"),
        }
    }
}

fn vp_int(n: &BigInt, p: u64) -> i64 {
    let mut m = n.magnitude().clone();
    let p = BigUint::from(p);
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// `x = p^v * m/n` with `p` dividing neither `m` nor `n`.
pub fn vp(x: &Rational, p: Prime) -> Valuation {
    if x.is_zero() {
        return Valuation::PlusInfinity;
    }
    Valuation::Finite(vp_int(x.numer(), p.get()) - vp_int(x.denom(), p.get()))
}

pub fn norm(x: &Rational, place: Place) -> NormValue {
    if x.is_zero() {
        return NormValue::Zero;
    }
    match place {
        Place::Real => NormValue::RealAbs(x.abs()),
        Place::Finite(p) => {
            let v = vp(x, p).finite().expect("nonzero has finite valuation");
            NormValue::PPower { p, exponent: -v }
        }
    }
}

/// Leading digits of the canonical expansion `x = p^v (x0 + x1 p + ...)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicDigits {
    pub prime: Prime,
    pub valuation: i64,
    pub digits: Vec<u64>,
}

impl PAdicDigits {
    /// `p^v * sum(digits[i] * p^i)`.
    pub fn partial_sum(&self) -> Rational {
        let p = BigInt::from(self.prime.get());
        let mut acc = BigInt::zero();
        for d in self.digits.iter().rev() {
            acc = acc * &p + BigInt::from(*d);
        }
        Rational::from_integer(acc) * pow_signed(self.prime.get(), self.valuation)
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "argument must be invertible");
    t0.rem_euclid(m as i128) as u64
}

pub fn padic_expand(x: &Rational, p: Prime, count: usize) -> Result<PAdicDigits> {
    if x.is_zero() {
        return Err(Error::ZeroExpansion);
    }
    if count == 0 {
        return Err(Error::EmptyExpansion);
    }
    let pv = p.get();
    let pb = BigInt::from(pv);
    let valuation = vp(x, p).finite().expect("nonzero");
    let unit = x / pow_signed(pv, valuation);
    let mut num = unit.numer().clone();
    let den = unit.denom().clone();
    let den_inv = mod_inverse(den.mod_floor(&pb).to_u64().expect("below p"), pv);

    let mut digits = Vec::with_capacity(count);
    for _ in 0..count {
        let n_mod = num.mod_floor(&pb).to_u64().expect("below p");
        let digit = ((n_mod as u128 * den_inv as u128) % pv as u128) as u64;
        digits.push(digit);
        num = (num - BigInt::from(digit) * &den) / &pb;
    }
    Ok(PAdicDigits {
        prime: p,
        valuation,
        digits,
    })
}

/// `|x - center|_p <= p^radius_exponent`.
pub fn in_closed_ball(x: &Rational, center: &Rational, radius_exponent: i64, p: Prime) -> bool {
    match vp(&(x - center), p) {
        Valuation::PlusInfinity => true,
        Valuation::Finite(v) => -v <= radius_exponent,
    }
}

/// `|x - center|_p < p^radius_exponent`.
pub fn in_open_ball(x: &Rational, center: &Rational, radius_exponent: i64, p: Prime) -> bool {
    match vp(&(x - center), p) {
        Valuation::PlusInfinity => true,
        Valuation::Finite(v) => -v < radius_exponent,
    }
}

/// `|x - center|_p == p^radius_exponent`.
pub fn on_sphere(x: &Rational, center: &Rational, radius_exponent: i64, p: Prime) -> bool {
    vp(&(x - center), p) == Valuation::Finite(-radius_exponent)
}

/// Primes with nonzero valuation in `x`. An empty map means `x` is a
/// p-adic unit (or integer, for zero) at every prime. With `nonzero` set,
/// zero is rejected.
pub fn principal_profile(x: &Rational, nonzero: bool) -> Result<BTreeMap<u64, i64>> {
    let mut out = BTreeMap::new();
    if x.is_zero() {
        return if nonzero {
            Err(Error::ZeroIdele)
        } else {
            Ok(out)
        };
    }
    for (p, e) in factor(x.numer().magnitude())? {
        out.insert(p, e as i64);
    }
    for (p, e) in factor(x.denom().magnitude())? {
        out.insert(p, -(e as i64));
    }
    Ok(out)
}

/// Prime factorization of a positive integer: trial division up to
/// [`TRIAL_DIVISION_BOUND`], then a deterministic test on the cofactor.
pub fn factor(n: &BigUint) -> Result<Vec<(u64, u32)>> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut out = Vec::new();
    let mut n = n.clone();
    let mut d: u64 = 2;

    // Big phase: the cofactor does not fit in a machine word yet.
    while n.to_u64().is_none() && d <= TRIAL_DIVISION_BOUND {
        let mut e = 0;
        loop {
            let (q, r) = n.div_rem(&BigUint::from(d));
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d = if d == 2 { 3 } else { d + 2 };
    }

    let Some(mut m) = n.to_u64() else {
        return Err(Error::FactorizationBound(n.to_string()));
    };
    while d <= TRIAL_DIVISION_BOUND && (d as u128) * (d as u128) <= m as u128 {
        let mut e = 0;
        while m % d == 0 {
            m /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    if m > 1 {
        if is_prime_u64(m) {
            out.push((m, 1));
        } else {
            return Err(Error::FactorizationBound(m.to_string()));
        }
    }
    Ok(out)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; these witnesses cover all of u64.
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
