//! Exact orbits on P¹(Q), per-place distance traces to a fixed point,
//! invariant-sphere checks and basin sampling.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::classify::{classify_at, siegel_radius, Verdict};
use crate::error::{Error, Result};
use crate::mobius::{MobiusMap, ProjectivePoint};
use crate::padic::{norm, on_sphere, NormValue, Place, Prime};
use crate::rational::{height_bits, pow_signed};
use crate::Rational;

/// Default bit budget per rational coordinate.
pub const DEFAULT_MAX_BITS: u64 = 1_000_000;

fn check_budget(x: &ProjectivePoint, limit: u64, step: usize) -> Result<()> {
    if let ProjectivePoint::Finite(r) = x {
        let bits = height_bits(r);
        if bits > limit {
            return Err(Error::SizeBudget { bits, limit, step });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord {
    pub initial: ProjectivePoint,
    /// `points[0] = initial`, `points[k + 1] = f(points[k])`.
    pub points: Vec<ProjectivePoint>,
}

impl OrbitRecord {
    pub fn len(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Serialize for OrbitRecord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let points: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
        let mut s = serializer.serialize_struct("OrbitRecord", 2)?;
        s.serialize_field("initial", &self.initial.to_string())?;
        s.serialize_field("points", &points)?;
        s.end()
    }
}

/// `n + 1` exact points; poles map to ∞ and ∞ maps to `a/c`.
pub fn run_orbit(
    f: &MobiusMap,
    x0: &ProjectivePoint,
    n: usize,
    max_bits: u64,
) -> Result<OrbitRecord> {
    check_budget(x0, max_bits, 0)?;
    let mut points = Vec::with_capacity(n + 1);
    points.push(x0.clone());
    for step in 1..=n {
        let next = f.apply(&points[step - 1]);
        check_budget(&next, max_bits, step)?;
        points.push(next);
    }
    Ok(OrbitRecord {
        initial: x0.clone(),
        points,
    })
}

/// `|x_k − ξ|_v` along an orbit; `None` where `x_k = ∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTrace {
    pub place: Place,
    pub center: Rational,
    pub values: Vec<Option<NormValue>>,
}

impl DistanceTrace {
    /// The common sphere radius when every distance is the same.
    pub fn constant_value(&self) -> Option<&NormValue> {
        let first = self.values.first()?.as_ref()?;
        self.values
            .iter()
            .all(|v| v.as_ref() == Some(first))
            .then_some(first)
    }

    /// `v_p(x_k − ξ)` at a finite place; `None` for ∞ and for zero distance.
    pub fn valuations(&self) -> Vec<Option<i64>> {
        self.values
            .iter()
            .map(|v| match v {
                Some(NormValue::PPower { exponent, .. }) => Some(-exponent),
                _ => None,
            })
            .collect()
    }
}

struct TraceEntry<'a>(&'a Option<NormValue>);

impl Serialize for TraceEntry<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            None => serializer.serialize_none(),
            Some(NormValue::Zero) => serializer.serialize_str("inf"),
            Some(NormValue::PPower { exponent, .. }) => serializer.serialize_i64(-exponent),
            Some(NormValue::RealAbs(r)) => serializer.serialize_str(&r.to_string()),
        }
    }
}

impl Serialize for DistanceTrace {
    /// Finite places emit valuations (`"inf"` at zero distance); the real
    /// place emits `|x_k − ξ|` as rational strings. `null` marks `x_k = ∞`.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let values: Vec<_> = self.values.iter().map(TraceEntry).collect();
        let mut s = serializer.serialize_struct("DistanceTrace", 3)?;
        s.serialize_field("place", &self.place.to_string())?;
        s.serialize_field("center", &self.center.to_string())?;
        s.serialize_field("values", &values)?;
        s.end()
    }
}

fn distance(x: &ProjectivePoint, center: &Rational, place: Place) -> Option<NormValue> {
    x.finite().map(|x| norm(&(x - center), place))
}

fn require_fixed(f: &MobiusMap, xi: &Rational) -> Result<()> {
    if f.apply_rational(xi) == ProjectivePoint::Finite(xi.clone()) {
        Ok(())
    } else {
        Err(Error::NotFixedPoint(xi.clone()))
    }
}

pub fn distance_trace(
    f: &MobiusMap,
    x0: &ProjectivePoint,
    xi: &Rational,
    place: Place,
    n: usize,
    max_bits: u64,
) -> Result<DistanceTrace> {
    require_fixed(f, xi)?;
    let orbit = run_orbit(f, x0, n, max_bits)?;
    Ok(DistanceTrace {
        place,
        center: xi.clone(),
        values: orbit
            .points
            .iter()
            .map(|x| distance(x, xi, place))
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SphereWitness {
    #[serde(serialize_with = "ser_display")]
    pub x0: Rational,
    pub step: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SphereCheck {
    pub invariant: bool,
    pub witness: Option<SphereWitness>,
    #[serde(serialize_with = "ser_display_vec")]
    pub samples: Vec<Rational>,
    /// Whether `ξ` is indifferent at `p`.
    pub indifferent: bool,
    /// Whether `p^ρ` lies below the Siegel radius, when that radius is defined.
    pub within_siegel_radius: Option<bool>,
}

fn ser_display<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_display_vec<S: Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

/// Points `ξ + s·p^{−ρ}`, `s = 1..=min(count, p − 1)`, all on the sphere of
/// radius `p^ρ` about `ξ`.
pub fn sphere_samples(xi: &Rational, p: Prime, rho_exponent: i64, count: usize) -> Vec<Rational> {
    let step = pow_signed(p.get(), -rho_exponent);
    let count = (count.max(1) as u64).min(p.get() - 1);
    (1..=count)
        .map(|s| xi + Rational::from_integer(BigInt::from(s)) * &step)
        .collect()
}

/// Follows each sample for `n` steps and checks that `|x_k − ξ|_p` stays
/// `p^ρ`. Reports the first failing sample (in sample order) and step.
pub fn invariant_sphere_check(
    f: &MobiusMap,
    xi: &Rational,
    p: Prime,
    rho_exponent: i64,
    samples: usize,
    n: usize,
    max_bits: u64,
) -> Result<SphereCheck> {
    let report = classify_at(f, xi, Place::Finite(p))?;
    let within_siegel_radius = siegel_radius(f, p)
        .ok()
        .map(|r| rho_exponent < r.radius_exponent);
    let points = sphere_samples(xi, p, rho_exponent, samples);

    let failures: Vec<Option<usize>> = points
        .par_iter()
        .map(|x0| -> Result<Option<usize>> {
            let mut x = ProjectivePoint::Finite(x0.clone());
            for step in 1..=n {
                x = f.apply(&x);
                check_budget(&x, max_bits, step)?;
                let stays = x
                    .finite()
                    .is_some_and(|x| on_sphere(x, xi, rho_exponent, p));
                if !stays {
                    return Ok(Some(step));
                }
            }
            Ok(None)
        })
        .collect::<Result<_>>()?;

    let witness = points.iter().zip(&failures).find_map(|(x0, fail)| {
        fail.map(|step| SphereWitness {
            x0: x0.clone(),
            step,
        })
    });
    Ok(SphereCheck {
        invariant: witness.is_none(),
        witness,
        samples: points,
        indifferent: report.verdict == Verdict::Indifferent,
        within_siegel_radius,
    })
}

/// Convergence thresholds for [`basin_sample`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasinCriteria {
    /// Required growth of `v_p(x_n − ξ)` over the window at a finite place.
    pub valuation_gain: i64,
    /// Bound on `|x_n − ξ|_∞` at the real place.
    pub real_threshold: Rational,
}

impl Default for BasinCriteria {
    fn default() -> Self {
        BasinCriteria {
            valuation_gain: 20,
            real_threshold: Rational::new(BigInt::from(1), BigInt::from(1_000_000)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasinPoint {
    #[serde(serialize_with = "ser_display")]
    pub x0: Rational,
    pub converged: bool,
    /// First step meeting the threshold, or the window length.
    pub steps_observed: usize,
    /// The orbit passed through ∞ at some step.
    pub hit_pole: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasinSample {
    #[serde(serialize_with = "ser_place")]
    pub place: Place,
    #[serde(serialize_with = "ser_display")]
    pub attractor: Rational,
    pub tested: Vec<BasinPoint>,
}

fn ser_place<S: Serializer>(p: &Place, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

fn judge_finite(values: &[Option<NormValue>], gain: i64) -> (bool, usize) {
    let n = values.len() - 1;
    // +inf distance once the orbit lands on ξ; None at ∞.
    let val = |k: usize| -> Option<Option<i64>> {
        match &values[k] {
            None => None,
            Some(NormValue::Zero) => Some(None),
            Some(NormValue::PPower { exponent, .. }) => Some(Some(-exponent)),
            Some(NormValue::RealAbs(_)) => unreachable!("finite place"),
        }
    };
    if let Some(hit) = (0..=n).find(|&k| val(k) == Some(None)) {
        return (true, hit);
    }
    let Some(Some(v0)) = val(0) else {
        return (false, n);
    };
    let reached = (0..=n).find(|&k| matches!(val(k), Some(Some(v)) if v - v0 >= gain));
    let tail = n - n / 4;
    let increasing = (tail + 1..=n).all(|k| match (val(k - 1), val(k)) {
        (Some(Some(a)), Some(Some(b))) => b > a,
        _ => false,
    });
    match reached {
        Some(k) if increasing => (true, k),
        _ => (false, n),
    }
}

fn judge_real(values: &[Option<NormValue>], threshold: &Rational) -> (bool, usize) {
    let n = values.len() - 1;
    let dist = |k: usize| values[k].as_ref().map(NormValue::to_rational);
    if let Some(hit) = (0..=n).find(|&k| dist(k).is_some_and(|d| d.is_zero())) {
        return (true, hit);
    }
    let reached = (0..=n).find(|&k| dist(k).is_some_and(|d| &d < threshold));
    let tail = n - n / 4;
    let decreasing = (tail + 1..=n).all(|k| match (dist(k - 1), dist(k)) {
        (Some(a), Some(b)) => b < a,
        _ => false,
    });
    let last_below = dist(n).is_some_and(|d| &d < threshold);
    match reached {
        Some(k) if decreasing && last_below => (true, k),
        _ => (false, n),
    }
}

/// Decides convergence to an attracting `ξ` for each grid point over `n`
/// steps. Results come back in grid order.
pub fn basin_sample(
    f: &MobiusMap,
    xi: &Rational,
    place: Place,
    grid: &[Rational],
    n: usize,
    criteria: &BasinCriteria,
    max_bits: u64,
) -> Result<BasinSample> {
    if classify_at(f, xi, place)?.verdict != Verdict::Attractor {
        return Err(Error::NotAttractor(xi.clone()));
    }
    if n == 0 {
        return Err(Error::ZeroCount);
    }
    let tested = grid
        .par_iter()
        .map(|x0| {
            let trace = distance_trace(f, &x0.clone().into(), xi, place, n, max_bits)?;
            let hit_pole = trace.values.iter().any(Option::is_none);
            let (converged, steps_observed) = match place {
                Place::Finite(_) => judge_finite(&trace.values, criteria.valuation_gain),
                Place::Real => judge_real(&trace.values, &criteria.real_threshold),
            };
            Ok(BasinPoint {
                x0: x0.clone(),
                converged,
                steps_observed,
                hit_pole,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BasinSample {
        place,
        attractor: xi.clone(),
        tested,
    })
}

/// Exponent of a closed ball about an attracting `ξ` on which `f` strictly
/// contracts: `p^{2 v_p(cξ + d)}`, shrunk when needed so that
/// `|x − ξ|_p < |cξ + d|_p / |c|_p` holds on the ball.
pub fn contraction_radius_exponent(f: &MobiusMap, xi: &Rational, p: Prime) -> Option<i64> {
    let root = f.c() * xi + f.d();
    let v = crate::padic::vp(&root, p).finite()?;
    let vc = crate::padic::vp(f.c(), p).finite()?;
    Some((2 * v).min(vc - v - 1))
}

/// `1/4` of the distance to the partner fixed point at the real place.
pub fn real_contraction_radius(xi: &Rational, partner: &Rational) -> Rational {
    (xi - partner).abs() / Rational::from_integer(BigInt::from(4))
}
