#![allow(dead_code)]

use adelic_core::mobius::{
    case_c, case_c_sub, case_d, case_d_sub, from_parameter, FamilyParameter, MobiusMap,
    ParabolicCase, ProjectivePoint, Sign,
};
use adelic_core::rational::frac;
use adelic_core::Rational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform rational with |numerator| ≤ h and 1 ≤ denominator ≤ h.
pub fn rational(rng: &mut impl Rng, h: i64) -> Rational {
    frac(rng.gen_range(-h..=h), rng.gen_range(1..=h))
}

pub fn nonzero(rng: &mut impl Rng, h: i64) -> Rational {
    loop {
        let x = rational(rng, h);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn sign(rng: &mut impl Rng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// A family parameter with t, a, c of height ≤ h.
pub fn family_parameter(rng: &mut impl Rng, h: i64) -> FamilyParameter {
    loop {
        let t = rational(rng, h);
        if (&t * &t).is_one() {
            continue;
        }
        return FamilyParameter {
            t,
            sign: sign(rng),
            a: rational(rng, h),
            c: nonzero(rng, h),
        };
    }
}

pub fn family_map(rng: &mut impl Rng, h: i64) -> MobiusMap {
    from_parameter(&family_parameter(rng, h)).expect("valid parameter")
}

/// Any unimodular map with c ≠ 0: pick a ≠ 0, b, c ≠ 0 and solve for d.
pub fn random_map(rng: &mut impl Rng, h: i64) -> MobiusMap {
    let a = nonzero(rng, h);
    let b = rational(rng, h);
    let c = nonzero(rng, h);
    let d = (Rational::one() + &b * &c) / &a;
    MobiusMap::new(a, b, c, d).expect("det = 1 by construction")
}

pub fn parabolic_map(rng: &mut impl Rng, case: ParabolicCase, h: i64) -> MobiusMap {
    let c = nonzero(rng, h);
    match case {
        ParabolicCase::C => case_c(&rational(rng, h), &c),
        ParabolicCase::CSub => case_c_sub(&c, sign(rng)),
        ParabolicCase::D => case_d(&rational(rng, h), &c),
        ParabolicCase::DSub => case_d_sub(&c, sign(rng)),
    }
    .expect("valid constructor input")
}

pub fn point(rng: &mut impl Rng, h: i64) -> ProjectivePoint {
    if rng.gen_ratio(1, 10) {
        ProjectivePoint::Infinity
    } else {
        ProjectivePoint::Finite(rational(rng, h))
    }
}

/// Independent valuation oracle: strip factors of p one division at a time.
pub fn valuation_oracle(x: &Rational, p: u64) -> i64 {
    use num_bigint::BigInt;
    let p = BigInt::from(p);
    let strip = |n: &BigInt| {
        let mut n = n.clone();
        let mut v = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            v += 1;
        }
        v
    };
    strip(x.numer()) - strip(x.denom())
}

/// Prime factors of a machine integer by plain trial division.
pub fn prime_factors_oracle(n: u128) -> Vec<u64> {
    let mut n = n;
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d as u64);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n as u64);
    }
    out
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n)
        .filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0))
        .collect()
}
