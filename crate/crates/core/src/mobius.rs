//! Unimodular linear-fractional maps `f(x) = (ax + b)/(cx + d)` acting on
//! the rational projective line.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{parse_rational, rational_sqrt, Rational};

/// A point of P¹(Q).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProjectivePoint {
    Finite(Rational),
    Infinity,
}

impl ProjectivePoint {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ProjectivePoint::Finite(x) => Some(x),
            ProjectivePoint::Infinity => None,
        }
    }
}

impl From<Rational> for ProjectivePoint {
    fn from(x: Rational) -> Self {
        ProjectivePoint::Finite(x)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectivePoint::Finite(x) => x.fmt(f),
            ProjectivePoint::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ProjectivePoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" => Ok(ProjectivePoint::Infinity),
            other => parse_rational(other).map(ProjectivePoint::Finite),
        }
    }
}

/// A 2×2 rational matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix2 {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl Matrix2 {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Matrix2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Matrix2::new(
            Rational::one(),
            Rational::zero(),
            Rational::zero(),
            Rational::one(),
        )
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, rhs: &Matrix2) -> Matrix2 {
        Matrix2 {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }

    /// Binary exponentiation.
    pub fn pow(&self, mut n: u64) -> Matrix2 {
        let mut acc = Matrix2::identity();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `λI` with `λ ≠ 0`, i.e. the identity of P¹.
    pub fn is_scalar(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d && !self.a.is_zero()
    }

    /// Projective action; requires a nonzero determinant.
    pub fn apply(&self, x: &ProjectivePoint) -> ProjectivePoint {
        match x {
            ProjectivePoint::Finite(x) => {
                let den = &self.c * x + &self.d;
                if den.is_zero() {
                    ProjectivePoint::Infinity
                } else {
                    ProjectivePoint::Finite((&self.a * x + &self.b) / den)
                }
            }
            ProjectivePoint::Infinity => {
                if self.c.is_zero() {
                    ProjectivePoint::Infinity
                } else {
                    ProjectivePoint::Finite(&self.a / &self.c)
                }
            }
        }
    }
}

/// `f(x) = (ax + b)/(cx + d)` with `ad − bc = 1` and `c ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MobiusMap {
    a: Rational,
    b: Rational,
    c: Rational,
    d: Rational,
}

impl MobiusMap {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        let map = || format!("{a}, {b}, {c}, {d}");
        if c.is_zero() {
            return Err(Error::CZero { map: map() });
        }
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(Error::Determinant {
                map: map(),
                det: det.to_string(),
            });
        }
        Ok(MobiusMap { a, b, c, d })
    }

    pub fn from_matrix(m: Matrix2) -> Result<Self> {
        MobiusMap::new(m.a, m.b, m.c, m.d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }
    pub fn b(&self) -> &Rational {
        &self.b
    }
    pub fn c(&self) -> &Rational {
        &self.c
    }
    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn matrix(&self) -> Matrix2 {
        Matrix2::new(
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
        )
    }

    /// The inverse map `(d, −b, −c, a)`.
    pub fn inverse(&self) -> MobiusMap {
        MobiusMap {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    /// The point sent to infinity, `−d/c`.
    pub fn pole(&self) -> Rational {
        -&self.d / &self.c
    }

    pub fn apply(&self, x: &ProjectivePoint) -> ProjectivePoint {
        self.matrix().apply(x)
    }

    pub fn apply_rational(&self, x: &Rational) -> ProjectivePoint {
        self.apply(&ProjectivePoint::Finite(x.clone()))
    }

    /// `self ∘ other`, as the matrix product.
    pub fn compose(&self, other: &MobiusMap) -> Result<MobiusMap> {
        let m = self.matrix().mul(&other.matrix());
        if m.c.is_zero() {
            return Err(Error::CompositionLeavesClass);
        }
        MobiusMap::from_matrix(m)
    }

    /// `F^n`. The result may be scalar or affine.
    pub fn power(&self, n: u64) -> Result<Matrix2> {
        if n == 0 {
            return Err(Error::ZeroCount);
        }
        Ok(self.matrix().pow(n))
    }

    /// `f^n(x)` through `F^n`.
    pub fn iterate(&self, x: &ProjectivePoint, n: u64) -> ProjectivePoint {
        self.matrix().pow(n).apply(x)
    }

    /// `f'(x) = 1/(cx + d)²`.
    pub fn derivative_at(&self, x: &Rational) -> Result<Rational> {
        let den = &self.c * x + &self.d;
        if den.is_zero() {
            return Err(Error::DerivativeAtPole(x.clone()));
        }
        Ok((&den * &den).recip())
    }

    /// `(a + d)² − 4`.
    pub fn discriminant(&self) -> Rational {
        let tr = &self.a + &self.d;
        &tr * &tr - Rational::from_integer(BigInt::from(4))
    }

    pub fn fixed_points(&self) -> FixedPointResult {
        let disc = self.discriminant();
        let two_c = &self.c * Rational::from_integer(BigInt::from(2));
        let a_minus_d = &self.a - &self.d;
        if disc.is_zero() {
            return FixedPointResult::RationalDouble(a_minus_d / two_c);
        }
        match rational_sqrt(&disc) {
            Some(delta) => FixedPointResult::RationalPair(
                (&a_minus_d + &delta) / &two_c,
                (&a_minus_d - &delta) / &two_c,
            ),
            None => FixedPointResult::IrrationalPair(disc),
        }
    }

    /// `(ξ₁ξ₂, f'(ξ₁)f'(ξ₂))`; both are checked against `(−b/c, 1)`.
    pub fn pair_relations(&self, xi1: &Rational, xi2: &Rational) -> Result<(Rational, Rational)> {
        for xi in [xi1, xi2] {
            if self.apply_rational(xi) != ProjectivePoint::Finite(xi.clone()) {
                return Err(Error::NotFixedPoint(xi.clone()));
            }
        }
        let product = xi1 * xi2;
        let deriv = self.derivative_at(xi1)? * self.derivative_at(xi2)?;
        debug_assert_eq!(product, -&self.b / &self.c);
        debug_assert!(deriv.is_one());
        Ok((product, deriv))
    }

    /// The smallest `k ≤ k_max` with `F^k = λI`.
    pub fn detect_period(&self, k_max: u64) -> Option<u64> {
        let f = self.matrix();
        let mut acc = f.clone();
        for k in 1..=k_max {
            if acc.is_scalar() {
                return Some(k);
            }
            acc = acc.mul(&f);
        }
        None
    }

    /// Which of the named families A–D the coefficients satisfy.
    pub fn family(&self) -> Option<CaseFamily> {
        let two = Rational::from_integer(BigInt::from(2));
        let tr = &self.a + &self.d;
        if self.b.is_zero() {
            Some(CaseFamily::A)
        } else if self.b == self.c && self.a == self.d {
            Some(CaseFamily::B)
        } else if tr == two {
            Some(CaseFamily::C)
        } else if tr == -two {
            Some(CaseFamily::D)
        } else {
            None
        }
    }
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for MobiusMap {
    type Err = Error;

    /// `a,b,c,d`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::Parse {
                input: s.to_string(),
                reason: "a map is written a,b,c,d".to_string(),
            });
        }
        let mut coeffs = parts.into_iter().map(parse_rational);
        let mut next = || coeffs.next().expect("four parts");
        MobiusMap::new(next()?, next()?, next()?, next()?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedPointResult {
    /// `ξ₁` takes the `+δ` branch, `δ > 0`.
    RationalPair(Rational, Rational),
    RationalDouble(Rational),
    /// Carries the non-square discriminant `(a + d)² − 4`.
    IrrationalPair(Rational),
}

impl FixedPointResult {
    /// The distinct rational fixed points, `ξ₁` first.
    pub fn rational_points(&self) -> Vec<Rational> {
        match self {
            FixedPointResult::RationalPair(x, y) => vec![x.clone(), y.clone()],
            FixedPointResult::RationalDouble(x) => vec![x.clone()],
            FixedPointResult::IrrationalPair(_) => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseFamily {
    A,
    B,
    C,
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_rational(self) -> Rational {
        match self {
            Sign::Plus => Rational::one(),
            Sign::Minus => -Rational::one(),
        }
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "plus" | "+1" | "1" => Ok(Sign::Plus),
            "-" | "minus" | "-1" => Ok(Sign::Minus),
            other => Err(Error::Parse {
                input: other.to_string(),
                reason: "sign is + or -".to_string(),
            }),
        }
    }
}

/// Free parameters of the rational-fixed-point family: `t ∉ {±1}`, the
/// trace sign, and the coefficients `a`, `c ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyParameter {
    pub t: Rational,
    pub sign: Sign,
    pub a: Rational,
    pub c: Rational,
}

impl FamilyParameter {
    /// `(a + d, δ) = (±2(1 + t²)/(1 − t²), 4t/(1 − t²))`.
    pub fn trace_and_delta(&self) -> Result<(Rational, Rational)> {
        let t2 = &self.t * &self.t;
        let one = Rational::one();
        let den = &one - &t2;
        if den.is_zero() {
            return Err(Error::ParametrizationPole(self.t.clone()));
        }
        let two = Rational::from_integer(BigInt::from(2));
        let four = Rational::from_integer(BigInt::from(4));
        let trace = self.sign.as_rational() * two * (&one + &t2) / &den;
        let delta = four * &self.t / den;
        Ok((trace, delta))
    }
}

/// Builds the map with trace `±2(1 + t²)/(1 − t²)` and
/// `bc = (δ² − a² − d²)/2 + 1`, which forces `det = 1`.
pub fn from_parameter(fp: &FamilyParameter) -> Result<MobiusMap> {
    if fp.c.is_zero() {
        return Err(Error::CaseConstraint {
            case: "family",
            reason: "c must be nonzero".to_string(),
        });
    }
    let (trace, delta) = fp.trace_and_delta()?;
    let d = trace - &fp.a;
    let two = Rational::from_integer(BigInt::from(2));
    let bc = (&delta * &delta - &fp.a * &fp.a - &d * &d) / two + Rational::one();
    let b = bc / &fp.c;
    MobiusMap::new(fp.a.clone(), b, fp.c.clone(), d)
}

fn require_nonzero(case: &'static str, name: &str, x: &Rational) -> Result<()> {
    if x.is_zero() {
        Err(Error::CaseConstraint {
            case,
            reason: format!("{name} must be nonzero"),
        })
    } else {
        Ok(())
    }
}

/// Case A: `b = 0`, `d = 1/a`.
pub fn case_a(a: &Rational, c: &Rational) -> Result<MobiusMap> {
    require_nonzero("A", "a", a)?;
    require_nonzero("A", "c", c)?;
    MobiusMap::new(a.clone(), Rational::zero(), c.clone(), a.recip())
}

/// Case B: `a = d = (1 + t²)/(1 − t²)`, `b = c = 2t/(1 − t²)`.
pub fn case_b(t: &Rational) -> Result<MobiusMap> {
    let one = Rational::one();
    let den = &one - t * t;
    if den.is_zero() {
        return Err(Error::ParametrizationPole(t.clone()));
    }
    require_nonzero("B", "t", t)?;
    let a = (&one + t * t) / &den;
    let c = Rational::from_integer(BigInt::from(2)) * t / &den;
    MobiusMap::new(a.clone(), c.clone(), c, a)
}

/// Case C: `d = 2 − a`, `b = −(a − 1)²/c`; double fixed point `(a − 1)/c`.
pub fn case_c(a: &Rational, c: &Rational) -> Result<MobiusMap> {
    require_nonzero("C", "c", c)?;
    let one = Rational::one();
    let am1 = a - &one;
    let b = -(&am1 * &am1) / c;
    MobiusMap::new(
        a.clone(),
        b,
        c.clone(),
        Rational::from_integer(BigInt::from(2)) - a,
    )
}

/// Case C subcase: `a = c ± 1`, `b = −c`, `d = a − 2c`; double fixed point 1.
pub fn case_c_sub(c: &Rational, sign: Sign) -> Result<MobiusMap> {
    require_nonzero("C_sub", "c", c)?;
    let a = c + sign.as_rational();
    let d = &a - c * Rational::from_integer(BigInt::from(2));
    MobiusMap::new(a, -c, c.clone(), d)
}

/// Case D: `d = −a − 2`, `b = −(a + 1)²/c`; double fixed point `(a + 1)/c`.
pub fn case_d(a: &Rational, c: &Rational) -> Result<MobiusMap> {
    require_nonzero("D", "c", c)?;
    let ap1 = a + Rational::one();
    let b = -(&ap1 * &ap1) / c;
    MobiusMap::new(
        a.clone(),
        b,
        c.clone(),
        -a - Rational::from_integer(BigInt::from(2)),
    )
}

/// Case D subcase: `a = −c ± 1`, `b = −c`, `d = a + 2c`; double fixed point −1.
pub fn case_d_sub(c: &Rational, sign: Sign) -> Result<MobiusMap> {
    require_nonzero("D_sub", "c", c)?;
    let a = -c + sign.as_rational();
    let d = &a + c * Rational::from_integer(BigInt::from(2));
    MobiusMap::new(a, -c, c.clone(), d)
}

/// The parabolic families with explicit n-th iterates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParabolicCase {
    C,
    CSub,
    D,
    DSub,
}

impl ParabolicCase {
    pub fn name(self) -> &'static str {
        match self {
            ParabolicCase::C => "C",
            ParabolicCase::CSub => "C_sub",
            ParabolicCase::D => "D",
            ParabolicCase::DSub => "D_sub",
        }
    }

    pub fn matches(self, f: &MobiusMap) -> bool {
        let one = Rational::one();
        let two = Rational::from_integer(BigInt::from(2));
        let (a, b, c, d) = (f.a(), f.b(), f.c(), f.d());
        match self {
            ParabolicCase::C => a + d == two,
            ParabolicCase::D => a + d == -two,
            ParabolicCase::CSub => {
                let e = a - c;
                *b == -c && *d == a - c * &two && e.abs() == one
            }
            ParabolicCase::DSub => {
                let e = a + c;
                *b == -c && *d == a + c * &two && e.abs() == one
            }
        }
    }

    /// The explicit n-th iterate matrix. Projectively equal to `F^n`.
    pub fn iterate_matrix(self, f: &MobiusMap, n: u64) -> Matrix2 {
        let n = Rational::from_integer(BigInt::from(n));
        let one = Rational::one();
        let (a, b, c) = (f.a(), f.b(), f.c());
        match self {
            // ((na − n + 1)x + nb) / (ncx − na + n + 1)
            ParabolicCase::C => {
                Matrix2::new(&n * a - &n + &one, &n * b, &n * c, -(&n * a) + &n + &one)
            }
            // ([a + (n − 1)c]x − nc) / (ncx + a − (n + 1)c)
            ParabolicCase::CSub => {
                Matrix2::new(a + (&n - &one) * c, -(&n * c), &n * c, a - (&n + &one) * c)
            }
            // s[n(a + 1) − 1]x + s·nb over s·ncx − s[n(a + 1) + 1], s = (−1)^(n+1)
            ParabolicCase::D => {
                let s = if (&n + &one).numer() % 2u8 == BigInt::zero() {
                    one.clone()
                } else {
                    -one.clone()
                };
                let na1 = &n * (a + &one);
                Matrix2::new(
                    &s * (&na1 - &one),
                    &s * &n * b,
                    &s * &n * c,
                    -(&s * (&na1 + &one)),
                )
            }
            // ([a − (n − 1)c]x − nc) / (ncx + a + (n + 1)c)
            ParabolicCase::DSub => {
                Matrix2::new(a - (&n - &one) * c, -(&n * c), &n * c, a + (&n + &one) * c)
            }
        }
    }
}

impl FromStr for ParabolicCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "C" => Ok(ParabolicCase::C),
            "C2" | "C_sub" => Ok(ParabolicCase::CSub),
            "D" => Ok(ParabolicCase::D),
            "D2" | "D_sub" => Ok(ParabolicCase::DSub),
            other => Err(Error::Parse {
                input: other.to_string(),
                reason: "case is one of C, C2, D, D2".to_string(),
            }),
        }
    }
}

/// `x_n` from the explicit formula of the given parabolic case.
pub fn closed_iterate(
    case: ParabolicCase,
    f: &MobiusMap,
    x0: &ProjectivePoint,
    n: u64,
) -> Result<ProjectivePoint> {
    if !case.matches(f) {
        return Err(Error::CaseMismatch(case.name()));
    }
    if n == 0 {
        return Err(Error::ZeroCount);
    }
    Ok(case.iterate_matrix(f, n).apply(x0))
}

/// `(α₁ − α₃)(α₂ − α₄) / ((α₁ − α₄)(α₂ − α₃))`; factors containing ∞ are
/// dropped in pairs.
pub fn cross_ratio(points: [&ProjectivePoint; 4]) -> Result<Rational> {
    for i in 0..4 {
        for j in i + 1..4 {
            if points[i] == points[j] {
                return Err(Error::RepeatedPoints);
            }
        }
    }
    let diff = |i: usize, j: usize| -> Option<Rational> {
        match (points[i], points[j]) {
            (ProjectivePoint::Finite(x), ProjectivePoint::Finite(y)) => Some(x - y),
            _ => None,
        }
    };
    let factors = [diff(0, 2), diff(1, 3), diff(0, 3), diff(1, 2)];
    let one = Rational::one();
    let [n1, n2, d1, d2] = factors.map(|f| f.unwrap_or_else(|| one.clone()));
    Ok(n1 * n2 / (d1 * d2))
}
