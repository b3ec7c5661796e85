use std::fmt::Write;

use serde_json::{json, Value};

use adelic_core::classify::{adelic_report, classify_at, siegel_radius, PlaceReport, Verdict};
use adelic_core::mobius::{
    case_a, case_b, case_c, case_c_sub, case_d, case_d_sub, cross_ratio, from_parameter,
    FamilyParameter, FixedPointResult, MobiusMap, ProjectivePoint, Sign,
};
use adelic_core::orbit::{
    basin_sample, distance_trace, invariant_sphere_check, run_orbit, BasinCriteria,
};
use adelic_core::padic::{NormValue, Place, Prime};
use adelic_core::{parse_rational, Error, Rational};

use crate::{Command, Global, EXIT_BUDGET, EXIT_INPUT};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::SizeBudget { .. }) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Input(s) => f.write_str(s),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// The same result rendered both ways.
pub struct Output {
    pub json: Value,
    pub table: String,
}

fn rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .map(|x| parse_rational(x).map_err(CliError::from))
        .collect()
}

fn default_fixed_point(f: &MobiusMap) -> Result<Rational> {
    match f.fixed_points() {
        FixedPointResult::IrrationalPair(d) => Err(Error::IrrationalFixedPoints(d).into()),
        fp => Ok(fp.rational_points().remove(0)),
    }
}

fn fixed_point_arg(f: &MobiusMap, xi: &Option<String>) -> Result<Rational> {
    match xi {
        Some(s) => Ok(parse_rational(s)?),
        None => default_fixed_point(f),
    }
}

fn norm_text(place: Place, n: &NormValue) -> String {
    match place {
        Place::Real => format!("|f'| = {n}"),
        Place::Finite(p) => format!("|f'|_{p} = {n}"),
    }
}

fn points_json(points: &[Rational]) -> Value {
    json!(points.iter().map(ToString::to_string).collect::<Vec<_>>())
}

pub fn run(cmd: &Command, global: &Global) -> Result<Output> {
    match cmd {
        Command::FixedPoints(m) => fixed_points(&m.map.parse()?),
        Command::Classify { map, place } => classify(&map.map.parse()?, place.as_deref()),
        Command::Orbit { map, x0, n } => {
            let f: MobiusMap = map.map.parse()?;
            let x0: ProjectivePoint = x0.parse()?;
            let orbit = run_orbit(&f, &x0, *n, global.max_bits)?;
            let mut table = format!("map: {f}\n");
            for (k, x) in orbit.points.iter().enumerate() {
                writeln!(table, "{k:>5}  {x}").unwrap();
            }
            Ok(Output {
                json: serde_json::to_value(&orbit).unwrap(),
                table,
            })
        }
        Command::Trace {
            map,
            x0,
            xi,
            place,
            n,
        } => {
            let f: MobiusMap = map.map.parse()?;
            let xi = fixed_point_arg(&f, xi)?;
            let place: Place = place.parse()?;
            let x0: ProjectivePoint = x0.parse()?;
            let trace = distance_trace(&f, &x0, &xi, place, *n, global.max_bits)?;
            let mut table = format!("map: {f}\ncenter: {xi}\nplace: {place}\n");
            let header = match place {
                Place::Real => "|x_k - xi|",
                Place::Finite(_) => "v_p(x_k - xi)",
            };
            writeln!(table, "{:>5}  {header}", "k").unwrap();
            for (k, v) in trace.values.iter().enumerate() {
                let cell = match v {
                    None => "undefined (x_k = inf)".to_string(),
                    Some(NormValue::Zero) => match place {
                        Place::Real => "0".to_string(),
                        Place::Finite(_) => "inf".to_string(),
                    },
                    Some(NormValue::PPower { exponent, .. }) => (-exponent).to_string(),
                    Some(NormValue::RealAbs(r)) => r.to_string(),
                };
                writeln!(table, "{k:>5}  {cell}").unwrap();
            }
            Ok(Output {
                json: serde_json::to_value(&trace).unwrap(),
                table,
            })
        }
        Command::SphereCheck {
            map,
            xi,
            p,
            rho,
            samples,
            n,
        } => {
            let f: MobiusMap = map.map.parse()?;
            let xi = fixed_point_arg(&f, xi)?;
            let prime = Prime::new(*p)?;
            let check =
                invariant_sphere_check(&f, &xi, prime, *rho, *samples, *n, global.max_bits)?;
            let radius = siegel_radius(&f, prime).ok();
            let mut table = format!("map: {f}\ncenter: {xi}\nsphere: |x - {xi}|_{p} = {p}^{rho}\n");
            let samples: Vec<String> = check.samples.iter().map(ToString::to_string).collect();
            writeln!(table, "samples: {}", samples.join(", ")).unwrap();
            if let Some(r) = &radius {
                writeln!(
                    table,
                    "siegel radius: {p}^{}{}",
                    r.radius_exponent,
                    if r.applies {
                        ""
                    } else {
                        " (formula outside cases A-D)"
                    }
                )
                .unwrap();
            }
            writeln!(table, "indifferent at {p}: {}", check.indifferent).unwrap();
            match &check.witness {
                None => writeln!(table, "invariant: yes ({n} steps)").unwrap(),
                Some(w) => writeln!(
                    table,
                    "invariant: no (x0 = {} leaves at step {})",
                    w.x0, w.step
                )
                .unwrap(),
            }
            let mut json = serde_json::to_value(&check).unwrap();
            json["siegel_radius"] = serde_json::to_value(radius).unwrap();
            Ok(Output { json, table })
        }
        Command::Basin {
            map,
            xi,
            place,
            grid,
            n,
            threshold,
            gain,
        } => {
            let f: MobiusMap = map.map.parse()?;
            let place: Place = place.parse()?;
            let xi = match xi {
                Some(s) => parse_rational(s)?,
                None => attracting_point(&f, place)?,
            };
            let criteria = BasinCriteria {
                valuation_gain: *gain,
                real_threshold: parse_rational(threshold)?,
            };
            let grid = rational_list(grid)?;
            let sample = basin_sample(&f, &xi, place, &grid, *n, &criteria, global.max_bits)?;
            let mut table = format!("map: {f}\nattractor: {xi}\nplace: {place}\n");
            writeln!(
                table,
                "{:>12}  {:>9}  {:>5}  pole",
                "x0", "converged", "steps"
            )
            .unwrap();
            for b in &sample.tested {
                writeln!(
                    table,
                    "{:>12}  {:>9}  {:>5}  {}",
                    b.x0.to_string(),
                    if b.converged { "yes" } else { "no" },
                    b.steps_observed,
                    if b.hit_pole { "yes" } else { "no" }
                )
                .unwrap();
            }
            Ok(Output {
                json: serde_json::to_value(&sample).unwrap(),
                table,
            })
        }
        Command::Period { map, kmax } => {
            let f: MobiusMap = map.map.parse()?;
            let k = f.detect_period(*kmax);
            let table = match k {
                Some(k) => format!("period: {k}\n"),
                None => format!("period: none (k <= {kmax})\n"),
            };
            Ok(Output {
                json: json!({"map": f.to_string(), "kmax": kmax, "period": k}),
                table,
            })
        }
        Command::CrossRatio { points } => {
            let pts = points
                .split(',')
                .map(|s| s.parse::<ProjectivePoint>().map_err(CliError::from))
                .collect::<Result<Vec<_>>>()?;
            let [a, b, c, d] = pts.as_slice() else {
                return Err(CliError::Input(
                    "cross-ratio needs exactly four points".into(),
                ));
            };
            let cr = cross_ratio([a, b, c, d])?;
            let names: Vec<String> = pts.iter().map(ToString::to_string).collect();
            Ok(Output {
                json: json!({"points": names, "cross_ratio": cr.to_string()}),
                table: format!("cross-ratio({}): {cr}\n", names.join(", ")),
            })
        }
        Command::Generate { t, sign, a, c } => {
            let fp = FamilyParameter {
                t: parse_rational(t)?,
                sign: sign.parse()?,
                a: parse_rational(a)?,
                c: parse_rational(c)?,
            };
            let (trace, delta) = fp.trace_and_delta()?;
            let f = from_parameter(&fp)?;
            let fps = f.fixed_points().rational_points();
            let mut table = format!("map: {f}\ntrace: {trace}\ndelta: {delta}\n");
            for (i, x) in fps.iter().enumerate() {
                writeln!(table, "xi{}: {x}", i + 1).unwrap();
            }
            Ok(Output {
                json: json!({
                    "map": f.to_string(),
                    "trace": trace.to_string(),
                    "delta": delta.to_string(),
                    "fixed_points": points_json(&fps),
                }),
                table,
            })
        }
        Command::Preset {
            case,
            a,
            c,
            t,
            sign,
        } => preset(case, a, c, t, sign),
    }
}

fn attracting_point(f: &MobiusMap, place: Place) -> Result<Rational> {
    let points = match f.fixed_points() {
        FixedPointResult::IrrationalPair(d) => return Err(Error::IrrationalFixedPoints(d).into()),
        fp => fp.rational_points(),
    };
    for xi in &points {
        if classify_at(f, xi, place)?.verdict == Verdict::Attractor {
            return Ok(xi.clone());
        }
    }
    Err(CliError::Input(format!(
        "no fixed point attracts at place {place}"
    )))
}

fn fixed_points(f: &MobiusMap) -> Result<Output> {
    let fp = f.fixed_points();
    let disc = f.discriminant();
    let (kind, points) = match &fp {
        FixedPointResult::RationalPair(..) => ("rational_pair", fp.rational_points()),
        FixedPointResult::RationalDouble(_) => ("rational_double", fp.rational_points()),
        FixedPointResult::IrrationalPair(_) => ("irrational_pair", Vec::new()),
    };
    let mut table = format!(
        "map: {f}\ndiscriminant: {disc}\nfixed points: {}\n",
        kind.replace('_', " ")
    );
    for (i, x) in points.iter().enumerate() {
        writeln!(table, "  xi{} = {x}", i + 1).unwrap();
    }
    Ok(Output {
        json: json!({
            "map": f.to_string(),
            "discriminant": disc.to_string(),
            "kind": kind,
            "fixed_points": points_json(&points),
        }),
        table,
    })
}

fn place_report_json(xi: &Rational, r: &PlaceReport) -> Value {
    json!({
        "fixed_point": xi.to_string(),
        "place": r.place.to_string(),
        "verdict": r.verdict,
        "deriv_norm": r.derivative_norm.to_rational().to_string(),
    })
}

fn classify(f: &MobiusMap, place: Option<&str>) -> Result<Output> {
    let mut table = format!("map: {f}\n");
    if let Some(place) = place {
        let place: Place = place.parse()?;
        let points = match f.fixed_points() {
            FixedPointResult::IrrationalPair(d) => {
                return Err(Error::IrrationalFixedPoints(d).into())
            }
            fp => fp.rational_points(),
        };
        let mut out = Vec::new();
        for xi in &points {
            let r = classify_at(f, xi, place)?;
            writeln!(
                table,
                "fixed point {xi} at {place}: {} ({})",
                r.verdict,
                norm_text(place, &r.derivative_norm)
            )
            .unwrap();
            out.push(place_report_json(xi, &r));
        }
        return Ok(Output {
            json: Value::Array(out),
            table,
        });
    }
    let reports = adelic_report(f)?;
    for r in &reports {
        writeln!(table, "fixed point {}", r.fixed_point).unwrap();
        writeln!(
            table,
            "  real: {} ({})",
            r.real.verdict,
            norm_text(Place::Real, &r.real.derivative_norm)
        )
        .unwrap();
        for e in &r.exceptional {
            writeln!(
                table,
                "  p = {}: {} ({})",
                e.place,
                e.verdict,
                norm_text(e.place, &e.derivative_norm)
            )
            .unwrap();
        }
        let others = if r.exceptional.is_empty() {
            "all primes"
        } else {
            "all other primes"
        };
        writeln!(table, "  {others}: indifferent").unwrap();
    }
    Ok(Output {
        json: serde_json::to_value(&reports).unwrap(),
        table,
    })
}

fn required(name: &str, v: &Option<String>, case: &str) -> Result<Rational> {
    match v {
        Some(s) => Ok(parse_rational(s)?),
        None => Err(CliError::Input(format!("case {case} needs --{name}"))),
    }
}

fn preset(
    case: &str,
    a: &Option<String>,
    c: &Option<String>,
    t: &Option<String>,
    sign: &str,
) -> Result<Output> {
    let sign: Sign = sign.parse()?;
    let f = match case {
        "A" => case_a(&required("a", a, case)?, &required("c", c, case)?)?,
        "B" => case_b(&required("t", t, case)?)?,
        "C" => case_c(&required("a", a, case)?, &required("c", c, case)?)?,
        "C2" => case_c_sub(&required("c", c, case)?, sign)?,
        "D" => case_d(&required("a", a, case)?, &required("c", c, case)?)?,
        "D2" => case_d_sub(&required("c", c, case)?, sign)?,
        other => {
            return Err(CliError::Input(format!(
                "unknown case {other:?}; expected A, B, C, C2, D or D2"
            )))
        }
    };
    let points = f.fixed_points().rational_points();
    let mut table = format!("map: {f}\n");
    match points.as_slice() {
        [xi] => writeln!(table, "fixed point: {xi}").unwrap(),
        _ => {
            let names: Vec<String> = points.iter().map(ToString::to_string).collect();
            writeln!(table, "fixed points: {}", names.join(", ")).unwrap()
        }
    }
    Ok(Output {
        json: json!({"case": case, "map": f.to_string(), "fixed_points": points_json(&points)}),
        table,
    })
}
