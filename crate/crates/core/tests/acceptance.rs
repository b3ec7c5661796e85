//! Exit criteria. Each criterion prints one PASS/FAIL line; the binary
//! exits nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use adelic_core::classify::{
    adelic_report, classify_at, exceptional_primes, siegel_radius, Verdict,
};
use adelic_core::mobius::{
    case_c, case_c_sub, case_d, case_d_sub, closed_iterate, cross_ratio, FixedPointResult,
    MobiusMap, ParabolicCase, ProjectivePoint,
};
use adelic_core::orbit::{
    basin_sample, distance_trace, invariant_sphere_check, BasinCriteria, DEFAULT_MAX_BITS,
};
use adelic_core::padic::{norm, padic_expand, principal_profile, vp, Place, Prime, Valuation};
use adelic_core::rational::{frac, int};
use adelic_core::Rational;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn family_maps() -> Vec<MobiusMap> {
    let mut rng = common::rng(0xAC1);
    (0..100).map(|_| common::family_map(&mut rng, 50)).collect()
}

/// Every rational fixed point is indifferent outside the exceptional set,
/// which sits inside the prime factors of num·den of cξ + d.
fn ac1_indifference_theorem() -> Outcome {
    let primes = common::primes_up_to(1000);
    let mut points = 0;
    for f in family_maps() {
        let fps = f.fixed_points();
        ensure(!fps.rational_points().is_empty(), || {
            format!("{f}: irrational fixed points")
        })?;
        for xi in fps.rational_points() {
            points += 1;
            let root = f.c() * &xi + f.d();
            let mut oracle =
                common::prime_factors_oracle(root.numer().magnitude().to_u128().unwrap());
            oracle.extend(common::prime_factors_oracle(
                root.denom().magnitude().to_u128().unwrap(),
            ));
            let exc: Vec<u64> = exceptional_primes(&f, &xi)
                .map_err(|e| e.to_string())?
                .iter()
                .map(|(p, _)| p.get())
                .collect();
            ensure(exc.iter().all(|p| oracle.contains(p)), || {
                format!("{f} ξ={xi}: {exc:?} ⊄ {oracle:?}")
            })?;
            for &p in primes.iter().chain(&exc) {
                let v =
                    classify_at(&f, &xi, Place::prime(p).unwrap()).map_err(|e| e.to_string())?;
                ensure(
                    (v.verdict != Verdict::Indifferent) == exc.contains(&p),
                    || format!("{f} ξ={xi} p={p}: {:?} vs exceptional {exc:?}", v.verdict),
                )?;
            }
        }
    }
    Ok(format!(
        "100 maps, {points} fixed points, primes ≤ 1000 plus exceptional sets"
    ))
}

fn ac2_pair_relations() -> Outcome {
    let mut pairs = 0;
    let mut places = 0;
    for f in family_maps() {
        match f.fixed_points() {
            FixedPointResult::RationalPair(x1, x2) => {
                let (prod, deriv) = f.pair_relations(&x1, &x2).map_err(|e| e.to_string())?;
                ensure(prod == -f.b() / f.c(), || format!("{f}: ξ₁ξ₂ = {prod}"))?;
                ensure(deriv.is_one(), || format!("{f}: f'(ξ₁)f'(ξ₂) = {deriv}"))?;
                let r = adelic_report(&f).map_err(|e| e.to_string())?;
                let mut all = vec![Place::Real];
                all.extend(
                    r[0].exceptional
                        .iter()
                        .chain(&r[1].exceptional)
                        .map(|x| x.place),
                );
                for p in [2, 3, 5, 7, 11, 13] {
                    all.push(Place::prime(p).unwrap());
                }
                for place in all {
                    places += 1;
                    ensure(
                        r[0].verdict_at(place).dual() == r[1].verdict_at(place),
                        || format!("{f}: duality fails at {place}"),
                    )?;
                }
                pairs += 1;
            }
            FixedPointResult::RationalDouble(xi) => {
                let d = f.derivative_at(&xi).map_err(|e| e.to_string())?;
                ensure(d.is_one(), || format!("{f}: double point f'(ξ) = {d}"))?;
            }
            FixedPointResult::IrrationalPair(_) => return Err(format!("{f}: irrational")),
        }
    }
    Ok(format!(
        "{pairs} pairs exact, duality on {places} place checks"
    ))
}

fn ac3_parabolic_cases() -> Outcome {
    let mut rng = common::rng(0xAC3);
    for case in [
        ParabolicCase::C,
        ParabolicCase::CSub,
        ParabolicCase::D,
        ParabolicCase::DSub,
    ] {
        for _ in 0..10 {
            let c = common::nonzero(&mut rng, 40);
            let a = common::rational(&mut rng, 40);
            let sign = common::sign(&mut rng);
            let (f, expect) = match case {
                ParabolicCase::C => (case_c(&a, &c), (&a - int(1)) / &c),
                ParabolicCase::CSub => (case_c_sub(&c, sign), int(1)),
                ParabolicCase::D => (case_d(&a, &c), (&a + int(1)) / &c),
                ParabolicCase::DSub => (case_d_sub(&c, sign), int(-1)),
            };
            let f = f.map_err(|e| e.to_string())?;
            ensure(
                f.fixed_points() == FixedPointResult::RationalDouble(expect.clone()),
                || format!("{f}: {:?} ≠ {expect}", f.fixed_points()),
            )?;
            let d = f.derivative_at(&expect).map_err(|e| e.to_string())?;
            ensure(d.is_one(), || format!("{f}: f'(ξ) = {d}"))?;
            let r = adelic_report(&f).map_err(|e| e.to_string())?;
            ensure(r.len() == 1 && r[0].is_indifferent_everywhere(), || {
                format!("{f}: not indifferent everywhere")
            })?;
        }
    }
    Ok("40 constructor instances, fused points exact, indifferent at every place".into())
}

fn ac4_closed_iterates() -> Outcome {
    let f = case_c(&int(2), &int(1)).map_err(|e| e.to_string())?;
    let x3 = closed_iterate(ParabolicCase::C, &f, &int(2).into(), 3).map_err(|e| e.to_string())?;
    ensure(x3 == frac(5, 4).into(), || {
        format!("worked value x₃ = {x3}")
    })?;
    let mut rng = common::rng(0xAC4);
    let mut compared = 0;
    for case in [
        ParabolicCase::C,
        ParabolicCase::CSub,
        ParabolicCase::D,
        ParabolicCase::DSub,
    ] {
        for _ in 0..20 {
            let f = common::parabolic_map(&mut rng, case, 20);
            let x0 = common::point(&mut rng, 20);
            let mut x = x0.clone();
            for n in 1..=50 {
                x = f.apply(&x);
                let c = closed_iterate(case, &f, &x0, n).map_err(|e| e.to_string())?;
                ensure(c == x, || format!("{f} x₀={x0} n={n}: {c} ≠ {x}"))?;
                compared += 1;
            }
        }
    }
    Ok(format!(
        "x₃ = 5/4; {compared} closed-form iterates equal repeated apply"
    ))
}

/// x₀ = 2 gives u = x₀ − ξ = 1 and x_n − 1 = u/(nu + 1) = 1/(n + 1),
/// i.e. the k-th orbit point (x₀ first) sits at distance 1/k.
fn ac5_real_parabolic_convergence() -> Outcome {
    let f = case_c(&int(2), &int(1)).map_err(|e| e.to_string())?;
    let t = distance_trace(
        &f,
        &int(2).into(),
        &int(1),
        Place::Real,
        1000,
        DEFAULT_MAX_BITS,
    )
    .map_err(|e| e.to_string())?;
    let d: Vec<Rational> = t
        .values
        .iter()
        .map(|v| v.as_ref().unwrap().to_rational())
        .collect();
    for (n, dn) in d.iter().enumerate() {
        let u = int(1);
        let expect = &u / (int(n as i64) * &u + int(1));
        ensure(*dn == expect, || format!("n={n}: {dn} ≠ {expect}"))?;
        if n > 0 {
            ensure(*dn < d[n - 1], || format!("not decreasing at {n}"))?;
        }
    }
    Ok(format!(
        "|x_n − 1| = 1/(n+1) exactly, strictly decreasing, |x_1000 − 1| = {}",
        d[1000]
    ))
}

fn ac6_siegel_spheres() -> Outcome {
    let f = case_c(&int(2), &int(1)).map_err(|e| e.to_string())?;
    let three = Prime::new(3).unwrap();
    let check = invariant_sphere_check(&f, &int(1), three, -1, 2, 200, DEFAULT_MAX_BITS)
        .map_err(|e| e.to_string())?;
    ensure(check.samples.len() >= 2, || "fewer than 2 samples".into())?;
    ensure(check.invariant, || {
        format!("sphere not invariant: {:?}", check.witness)
    })?;
    let mut rng = common::rng(0xAC6);
    let primes = [2u64, 3, 5, 7, 11];
    for _ in 0..20 {
        let f = common::random_map(&mut rng, 60);
        let p = primes[rng.gen_range(0..primes.len())];
        let r = siegel_radius(&f, Prime::new(p).unwrap()).map_err(|e| e.to_string())?;
        let expect = common::valuation_oracle(f.c(), p) - common::valuation_oracle(f.a(), p);
        ensure(r.radius_exponent == expect, || {
            format!("{f} p={p}: exponent {} ≠ {expect}", r.radius_exponent)
        })?;
    }
    Ok(format!(
        "ρ = 1/3 sphere invariant over {} samples × 200 steps; 20 radii match",
        check.samples.len()
    ))
}

fn ac7_attractor_dynamics() -> Outcome {
    let f: MobiusMap = "2,0,1,1/2"
        .parse()
        .map_err(|e: adelic_core::Error| e.to_string())?;
    let two = Place::prime(2).unwrap();
    for x0 in [int(1), int(3), frac(1, 3), int(5)] {
        let t = distance_trace(&f, &x0.clone().into(), &int(0), two, 30, DEFAULT_MAX_BITS)
            .map_err(|e| e.to_string())?;
        let v = t.valuations();
        let v0 = v[0].unwrap();
        for (n, vn) in v.iter().enumerate() {
            let vn = vn.ok_or_else(|| format!("x₀={x0}: undefined valuation at {n}"))?;
            ensure(vn - v0 == 2 * n as i64, || {
                format!("x₀={x0} n={n}: gain {}", vn - v0)
            })?;
        }
    }
    let grid = [int(1), int(2), int(10), int(-5)];
    let criteria = BasinCriteria::default();
    ensure(criteria.real_threshold == frac(1, 1_000_000), || {
        "threshold".into()
    })?;
    let s = basin_sample(
        &f,
        &frac(3, 2),
        Place::Real,
        &grid,
        200,
        &criteria,
        DEFAULT_MAX_BITS,
    )
    .map_err(|e| e.to_string())?;
    let steps: Vec<usize> = s.tested.iter().map(|b| b.steps_observed).collect();
    ensure(s.tested.iter().all(|b| b.converged), || {
        format!("{:?}", s.tested)
    })?;
    Ok(format!(
        "v₂ gain = 2n for n ≤ 30; real basin converged below 1e-6 at steps {steps:?}"
    ))
}

fn ac8_cross_ratio() -> Outcome {
    let pts: Vec<ProjectivePoint> = (0..4).map(|k| int(k).into()).collect();
    let cr = cross_ratio([&pts[0], &pts[1], &pts[2], &pts[3]]).map_err(|e| e.to_string())?;
    ensure(cr == frac(4, 3), || format!("cross_ratio(0,1,2,3) = {cr}"))?;
    let mut rng = common::rng(0xAC8);
    let mut through_infinity = 0;
    for _ in 0..20 {
        let f = common::random_map(&mut rng, 15);
        let mut done = 0;
        while done < 100 {
            let q: Vec<ProjectivePoint> = (0..4).map(|_| common::point(&mut rng, 15)).collect();
            let Ok(before) = cross_ratio([&q[0], &q[1], &q[2], &q[3]]) else {
                continue;
            };
            let img: Vec<ProjectivePoint> = q.iter().map(|x| f.apply(x)).collect();
            through_infinity += img.contains(&ProjectivePoint::Infinity) as usize;
            let after =
                cross_ratio([&img[0], &img[1], &img[2], &img[3]]).map_err(|e| e.to_string())?;
            ensure(after == before, || format!("{f}: {before} ≠ {after}"))?;
            done += 1;
        }
    }
    Ok(format!(
        "(0,1,2,3) = 4/3; 2000 quadruples invariant ({through_infinity} images through ∞)"
    ))
}

fn ac9_periodicity() -> Outcome {
    let g: MobiusMap = "0,-1,1,0"
        .parse()
        .map_err(|e: adelic_core::Error| e.to_string())?;
    let k = g.detect_period(24);
    ensure(k == Some(2), || format!("(0,-1,1,0): {k:?}"))?;
    let f = case_c(&int(2), &int(1)).map_err(|e| e.to_string())?;
    let k = f.detect_period(24);
    ensure(k.is_none(), || format!("case_C(2,1): {k:?}"))?;
    Ok("period 2 for x ↦ −1/x; none up to 24 for case_C(2,1)".into())
}

fn ac10_number_kernel() -> Outcome {
    let mut rng = common::rng(0xAC10);
    for p in [2u64, 3, 5, 7, 101] {
        let prime = Prime::new(p).unwrap();
        for _ in 0..100_000 {
            // Mix in p-power factors so valuations actually collide and differ.
            let scale = |rng: &mut rand_chacha::ChaCha8Rng| {
                adelic_core::rational::pow_signed(p, rng.gen_range(-3..=3))
            };
            let x = common::rational(&mut rng, 1000) * scale(&mut rng);
            let y = common::rational(&mut rng, 1000) * scale(&mut rng);
            let (vx, vy, vs) = (vp(&x, prime), vp(&y, prime), vp(&(&x + &y), prime));
            ensure(vs >= vx.min(vy), || format!("p={p}: v({x}+{y}) < min"))?;
            if vx != vy {
                ensure(vs == vx.min(vy), || format!("p={p}: v({x}+{y}) ≠ min"))?;
            }
        }
    }
    for _ in 0..10_000 {
        let x = Rational::new(
            BigInt::from(
                rng.gen_range(1i64..=1_000_000_000) * if rng.gen_bool(0.5) { 1 } else { -1 },
            ),
            BigInt::from(rng.gen_range(1i64..=1_000_000_000)),
        );
        let mut prod = norm(&x, Place::Real).to_rational();
        for (p, _) in principal_profile(&x, true).map_err(|e| e.to_string())? {
            prod *= norm(&x, Place::prime(p).unwrap()).to_rational();
        }
        ensure(prod.is_one(), || {
            format!("product formula fails for {x}: {prod}")
        })?;
    }
    for p in [2u64, 3, 5] {
        let prime = Prime::new(p).unwrap();
        for _ in 0..1000 {
            let x = common::nonzero(&mut rng, 1_000_000);
            let e = padic_expand(&x, prime, 32).map_err(|e| e.to_string())?;
            ensure(e.digits[0] != 0 && e.digits.iter().all(|&d| d < p), || {
                format!("digits {x}")
            })?;
            let rest = &x - e.partial_sum();
            let ok = rest.is_zero() || vp(&rest, prime) >= Valuation::Finite(e.valuation + 32);
            ensure(ok, || {
                format!("p={p} x={x}: remainder valuation {:?}", vp(&rest, prime))
            })?;
        }
    }
    Ok("5×10⁵ ultrametric pairs, 10⁴ product formulas, 3×10³ expansions to 32 digits".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "AC1 indifference outside a finite prime set",
            ac1_indifference_theorem,
        ),
        ("AC2 pair relations and verdict duality", ac2_pair_relations),
        ("AC3 parabolic cases C/C_sub/D/D_sub", ac3_parabolic_cases),
        ("AC4 closed-form iterates", ac4_closed_iterates),
        (
            "AC5 real parabolic convergence",
            ac5_real_parabolic_convergence,
        ),
        (
            "AC6 Siegel radius and invariant spheres",
            ac6_siegel_spheres,
        ),
        ("AC7 attractor dynamics", ac7_attractor_dynamics),
        ("AC8 cross-ratio invariance", ac8_cross_ratio),
        ("AC9 periodicity", ac9_periodicity),
        ("AC10 number kernel", ac10_number_kernel),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
