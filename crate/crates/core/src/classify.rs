//! Attractor/repeller/indifferent verdicts for rational fixed points at
//! each place, the finite exceptional prime set, and Siegel radii.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mobius::{FixedPointResult, MobiusMap, ProjectivePoint};
use crate::padic::{factor, norm, principal_profile, vp, NormValue, Place, Prime};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Attractor,
    Repeller,
    Indifferent,
}

impl Verdict {
    /// From the comparison of `|f'(ξ)|_v` with 1.
    pub fn from_norm(n: &NormValue) -> Verdict {
        match n.cmp_one() {
            Ordering::Less => Verdict::Attractor,
            Ordering::Greater => Verdict::Repeller,
            Ordering::Equal => Verdict::Indifferent,
        }
    }

    /// The verdict of the partner fixed point at the same place.
    pub fn dual(self) -> Verdict {
        match self {
            Verdict::Attractor => Verdict::Repeller,
            Verdict::Repeller => Verdict::Attractor,
            Verdict::Indifferent => Verdict::Indifferent,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Attractor => "attractor",
            Verdict::Repeller => "repeller",
            Verdict::Indifferent => "indifferent",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceReport {
    pub place: Place,
    pub derivative_norm: NormValue,
    pub verdict: Verdict,
}

fn require_fixed(f: &MobiusMap, xi: &Rational) -> Result<()> {
    if f.apply_rational(xi) == ProjectivePoint::Finite(xi.clone()) {
        Ok(())
    } else {
        Err(Error::NotFixedPoint(xi.clone()))
    }
}

pub fn classify_at(f: &MobiusMap, xi: &Rational, place: Place) -> Result<PlaceReport> {
    require_fixed(f, xi)?;
    let derivative_norm = norm(&f.derivative_at(xi)?, place);
    Ok(PlaceReport {
        place,
        verdict: Verdict::from_norm(&derivative_norm),
        derivative_norm,
    })
}

/// `cξ + d`, whose square is `1/f'(ξ)`.
fn multiplier_root(f: &MobiusMap, xi: &Rational) -> Rational {
    f.c() * xi + f.d()
}

/// Verdict at `p` read off `v_p(cξ + d)`: `|f'(ξ)|_p = p^{2 v_p(cξ + d)}`,
/// so a negative valuation attracts.
pub fn verdict_from_valuation(v: i64) -> Verdict {
    match v.cmp(&0) {
        Ordering::Less => Verdict::Attractor,
        Ordering::Greater => Verdict::Repeller,
        Ordering::Equal => Verdict::Indifferent,
    }
}

/// The primes at which `ξ` is not indifferent. They are exactly the prime
/// factors of the numerator and denominator of `cξ + d`.
pub fn exceptional_primes(f: &MobiusMap, xi: &Rational) -> Result<Vec<(Prime, Verdict)>> {
    require_fixed(f, xi)?;
    let root = multiplier_root(f, xi);
    let profile = principal_profile(&root, true)?;
    profile
        .into_iter()
        .map(|(p, v)| Ok((Prime::new(p)?, verdict_from_valuation(v))))
        .collect()
}

/// Classification of one rational fixed point at all places. Every prime
/// not in `exceptional` is indifferent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdelicReport {
    pub fixed_point: Rational,
    pub real: PlaceReport,
    pub exceptional: Vec<PlaceReport>,
}

impl AdelicReport {
    pub const DEFAULT: Verdict = Verdict::Indifferent;

    pub fn verdict_at(&self, place: Place) -> Verdict {
        match place {
            Place::Real => self.real.verdict,
            Place::Finite(_) => self
                .exceptional
                .iter()
                .find(|r| r.place == place)
                .map_or(Self::DEFAULT, |r| r.verdict),
        }
    }

    pub fn is_indifferent_everywhere(&self) -> bool {
        self.real.verdict == Verdict::Indifferent && self.exceptional.is_empty()
    }
}

struct ExceptionalEntry<'a>(&'a PlaceReport);

impl Serialize for ExceptionalEntry<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (p, exp) = match (&self.0.place, &self.0.derivative_norm) {
            (Place::Finite(p), NormValue::PPower { exponent, .. }) => (p.get(), *exponent),
            _ => unreachable!("exceptional entries are finite-place powers"),
        };
        let mut s = serializer.serialize_struct("Exceptional", 3)?;
        s.serialize_field("p", &p)?;
        s.serialize_field("verdict", &self.0.verdict)?;
        s.serialize_field("deriv_norm_exp", &exp)?;
        s.end()
    }
}

impl Serialize for AdelicReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let exceptional: Vec<_> = self.exceptional.iter().map(ExceptionalEntry).collect();
        let mut s = serializer.serialize_struct("AdelicReport", 4)?;
        s.serialize_field("fixed_point", &self.fixed_point.to_string())?;
        s.serialize_field("real", &self.real.verdict)?;
        s.serialize_field("exceptional", &exceptional)?;
        s.serialize_field("default", &Self::DEFAULT)?;
        s.end()
    }
}

pub fn adelic_report_at(f: &MobiusMap, xi: &Rational) -> Result<AdelicReport> {
    let real = classify_at(f, xi, Place::Real)?;
    let root = multiplier_root(f, xi);
    let mut exceptional = Vec::new();
    for (p, _) in factor(root.numer().magnitude())?
        .into_iter()
        .chain(factor(root.denom().magnitude())?)
    {
        exceptional.push(classify_at(f, xi, Place::Finite(Prime::new(p)?))?);
    }
    exceptional.sort_by_key(|r| r.place);
    Ok(AdelicReport {
        fixed_point: xi.clone(),
        real,
        exceptional,
    })
}

/// One report per distinct rational fixed point, `ξ₁` first.
pub fn adelic_report(f: &MobiusMap) -> Result<Vec<AdelicReport>> {
    match f.fixed_points() {
        FixedPointResult::IrrationalPair(disc) => Err(Error::IrrationalFixedPoints(disc)),
        fp => fp
            .rational_points()
            .iter()
            .map(|xi| adelic_report_at(f, xi))
            .collect(),
    }
}

/// `r = |a|_p / |c|_p = p^{v_p(c) − v_p(a)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SiegelRadius {
    pub prime: u64,
    pub radius_exponent: i64,
    /// False when the map lies outside the families A–D, where the
    /// formula has not been established.
    pub applies: bool,
}

impl SiegelRadius {
    pub fn radius(&self) -> Rational {
        crate::rational::pow_signed(self.prime, self.radius_exponent)
    }
}

pub fn siegel_radius(f: &MobiusMap, p: Prime) -> Result<SiegelRadius> {
    if f.a().is_zero() {
        return Err(Error::RadiusUndefined);
    }
    let va = vp(f.a(), p).finite().expect("a ≠ 0");
    let vc = vp(f.c(), p).finite().expect("c ≠ 0");
    Ok(SiegelRadius {
        prime: p.get(),
        radius_exponent: vc - va,
        applies: f.family().is_some(),
    })
}

/// The primes at which `f(x)` leaves `Z_p`. Always finite.
pub fn check_adelic_image(f: &MobiusMap, x: &Rational) -> Result<BTreeSet<u64>> {
    match f.apply_rational(x) {
        ProjectivePoint::Infinity => Err(Error::PoleInput(x.clone())),
        ProjectivePoint::Finite(y) => Ok(principal_profile(&y, false)?
            .into_iter()
            .filter(|&(_, v)| v < 0)
            .map(|(p, _)| p)
            .collect()),
    }
}
