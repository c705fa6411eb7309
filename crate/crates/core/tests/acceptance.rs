//! Acceptance suite: one `PASS`/`FAIL` line per criterion, non-zero exit if
//! any criterion fails.

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde_json::Value;
use towerlab::analysis::{
    build_graph, genus_ladder, level1_genus_oracle, limit_report, target_identity_holds,
    target_limit,
};
use towerlab::projline::{mobius_search, P1Point};
use towerlab::singer::{build_singer, image_of_r, trace_fiber, SingerData};
use towerlab::towergen::{
    brute_force_phi_oracle, build_g_closed_form, build_g_composed, closed_form_c,
    first_family_spec, phi_candidates, q5_instance, search, standard_family, trace_condition,
    validate_spec, PhiParams, TaSign, TowerSpec,
};
use towerlab::{Fe, FieldTower};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn tower(p: u32, n: u32) -> Arc<FieldTower> {
    Arc::new(FieldTower::new(p, n, 2).expect("desk-scale field"))
}

/// `(p, n)` with `q = p^n`.
fn field_of(q: u64) -> (u32, u32) {
    match q {
        4 => (2, 2),
        9 => (3, 2),
        _ => (q as u32, 1),
    }
}

/// Every Singer datum over `F_q`, one per irreducible `X² - aX + b`, in
/// canonical `(a, b)` order.
fn all_singers(q: u64) -> Vec<SingerData> {
    let (p, n) = field_of(q);
    let t = tower(p, n);
    let elems: Vec<Fe> = t.base().elements().collect();
    let mut out = Vec::new();
    for &a in &elems {
        for &b in &elems {
            if let Ok(sd) = build_singer(t.clone(), a, b) {
                out.push(sd);
            }
        }
    }
    out
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_towerlab"))
        .args(["build", "--q5"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(out.status.success(), || {
        format!("exit status {}", out.status)
    })?;
    let doc: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let f = doc["f"]["text"].as_str().unwrap_or_default();
    let g = doc["g"]["text"].as_str().unwrap_or_default();
    check(f == "(x^6 + x + 2)/(x^5 - x)", || format!("f = {f}"))?;
    check(g == "(x^6 + x^5 + 2x + 3)/(x^5 - x)", || format!("g = {g}"))?;
    check(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("f = {f}, g = {g} in {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let mut covers = 0;
    for q in [5, 7, 9, 11, 13] {
        for sd in all_singers(q) {
            let image = image_of_r(&sd);
            check(image.len() == q as usize, || {
                format!("q = {q}: |f(R)| = {}", image.len())
            })?;
            check(image == trace_fiber(&sd), || {
                format!("q = {q}: f(R) differs from the trace fiber")
            })?;
            covers += 1;
        }
    }
    Ok(format!("{covers} covers over q ∈ {{5, 7, 9, 11, 13}}"))
}

fn criterion_3() -> Outcome {
    let mut covers = 0;
    for q in [4, 5, 7, 9, 11, 13] {
        for sd in all_singers(q) {
            let base = sd.base();
            let criterion: Vec<PhiParams> = base
                .elements()
                .flat_map(|c| base.elements().map(move |d| PhiParams { c, d }))
                .filter(|phi| trace_condition(&sd, phi.c, phi.d))
                .collect();
            check(brute_force_phi_oracle(&sd) == criterion, || {
                format!(
                    "q = {q}, (a, b) = ({}, {})",
                    base.format(sd.a),
                    base.format(sd.b)
                )
            })?;
            covers += 1;
        }
    }
    Ok(format!("{covers} covers over q ∈ {{4, 5, 7, 9, 11, 13}}"))
}

fn premises_hold(spec: &TowerSpec) -> Result<(), String> {
    let report = validate_spec(spec);
    check(report.passed(), || {
        format!("q = {}: failed {:?}", spec.q(), report.failures())
    })?;
    check(
        report.get("g_fixes_q") == Some(true) && report.get("q_unramified_for_g") == Some(true),
        || format!("q = {}: g(Q) = Q or e_g(Q) = 1 missing", spec.q()),
    )
}

fn criterion_4() -> Outcome {
    premises_hold(&q5_instance().map_err(|e| e.to_string())?)?;
    let mut chosen = Vec::new();
    for q in [7, 9, 11, 13] {
        let (p, n) = field_of(q);
        let spec = first_family_spec(tower(p, n)).map_err(|e| e.to_string())?;
        premises_hold(&spec)?;
        let doc = spec.to_doc();
        chosen.push(format!("q={q}:(b,n)=({},{})", doc.b, doc.n_param));
    }
    Ok(format!("q5 instance and {}", chosen.join(" ")))
}

fn valid_specs(q: u64) -> Result<Vec<TowerSpec>, String> {
    let (p, n) = field_of(q);
    let sd = towerlab::singer::default_singer(tower(p, n)).map_err(|e| e.to_string())?;
    let mut specs = Vec::new();
    search(&sd, |s| specs.push(s.clone())).map_err(|e| e.to_string())?;
    Ok(specs)
}

fn criterion_5() -> Outcome {
    let mut parts = Vec::new();
    for q in [2, 3] {
        let (p, n) = field_of(q);
        let sd = towerlab::singer::default_singer(tower(p, n)).map_err(|e| e.to_string())?;
        let phis = phi_candidates(&sd);
        check(phis.is_empty(), || {
            format!("q = {q}: {} valid φ", phis.len())
        })?;
        let specs = valid_specs(q)?;
        check(specs.is_empty(), || {
            format!("q = {q}: {} valid specs", specs.len())
        })?;
        parts.push(format!("q={q}: none"));
    }
    let specs = valid_specs(4)?;
    check(!specs.is_empty(), || "q = 4: no valid spec".into())?;
    parts.push(format!("q=4: {} specs", specs.len()));
    Ok(parts.join(", "))
}

fn criterion_6() -> Outcome {
    let mut total = 0;
    for q in [5u64, 7, 9] {
        let expected = BigInt::from(q * q);
        let bidegree = BigInt::from((q + 1 - 1) * (q + 1 - 1));
        for spec in valid_specs(q)? {
            let ladder = genus_ladder(&spec, 1).map_err(|e| e.to_string())?;
            let oracle = level1_genus_oracle(&spec).map_err(|e| e.to_string())?;
            check(ladder[0].genus == BigInt::from(0), || {
                format!("q = {q}: g_0 = {}", ladder[0].genus)
            })?;
            check(
                ladder[1].genus == expected && oracle == expected && bidegree == expected,
                || {
                    format!(
                        "q = {q}: ladder {}, oracle {oracle}, bidegree {bidegree}",
                        ladder[1].genus
                    )
                },
            )?;
            total += 1;
        }
    }
    Ok(format!("{total} specs over q ∈ {{5, 7, 9}}"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let spec = q5_instance().map_err(|e| e.to_string())?;
    let report = limit_report(&spec, 6).map_err(|e| e.to_string())?;
    let target = BigRational::new(BigInt::from(2), BigInt::from(3));
    check(report.target == target, || {
        format!("target {}", report.target)
    })?;
    for row in &report.rows[1..] {
        let lambda = row
            .lambda
            .as_ref()
            .ok_or_else(|| format!("m = {}: λ undefined", row.m))?;
        check(*lambda >= target, || format!("m = {}: λ = {lambda}", row.m))?;
    }
    let lambda1 = report.rows[1].lambda.clone();
    check(
        lambda1 == Some(BigRational::new(BigInt::from(36), BigInt::from(25))),
        || format!("λ_1 = {lambda1:?}"),
    )?;
    for q in [4u64, 5, 7, 8, 9, 11, 13, 16, 25, 27, 49] {
        check(target_identity_holds(q), || {
            format!("identity fails at q = {q}")
        })?;
        let t = target_limit(q).map_err(|e| e.to_string())?;
        check(
            t == BigRational::new(BigInt::from(2), BigInt::from(q - 2)),
            || format!("target at q = {q}"),
        )?;
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    let last = report
        .rows
        .last()
        .and_then(|r| r.lambda.clone())
        .expect("level 6 computed");
    Ok(format!("λ_1 = 36/25, λ_6 = {last} ≥ 2/3 in {elapsed:?}"))
}

fn criterion_8() -> Outcome {
    let t = tower(13, 1);
    let base = t.base();
    let (b, n) = (base.from_int(11), base.from_int(6));
    check(
        !base.is_square(base.neg(b)) && !base.is_square(base.neg(n)),
        || "-b or -n is a square".into(),
    )?;
    check(n != b && n != base.neg(b), || "n = ±b".into())?;
    let spec = standard_family(t.clone(), b, n).map_err(|e| format!("construction failed: {e}"))?;
    let report = validate_spec(&spec);
    let failures = report.failures();
    check(failures == ["q_unramified_for_g"], || {
        format!("expected exactly [\"q_unramified_for_g\"] to fail, got {failures:?}")
    })?;
    Ok("only q_unramified_for_g fails".into())
}

/// `φ ∘ f ∘ ψ` with `ψ(ρ) = θ` and `φ` the affine map over `F_q` sending
/// `f(ψ(Q))` to `θ`.
fn composed_for(sd: &SingerData, rho: Fe) -> Result<towerlab::projline::RatMap, String> {
    let quad = sd.quad();
    let tower = &sd.tower;
    let psi = *mobius_search(tower, 2, &[(P1Point::Finite(rho), sd.q_point())])
        .map_err(|e| e.to_string())?
        .first()
        .ok_or("no ψ with ψ(ρ) = θ")?;
    let psi2 = psi.embed(tower, 1, 2).map_err(|e| e.to_string())?;
    let w = match sd.f_at(psi2.apply(sd.q_point(), quad)) {
        P1Point::Finite(w) => w,
        P1Point::Infinity => return Err("f(ψ(Q)) = ∞".into()),
    };
    let c = quad
        .div(quad.sub(sd.theta, sd.theta_bar), quad.sub(w, tower.conj(w)))
        .map_err(|e| e.to_string())?;
    let d = quad.sub(sd.theta, quad.mul(c, w));
    let phi = PhiParams {
        c: tower.restrict(2, 1, c).map_err(|e| e.to_string())?,
        d: tower.restrict(2, 1, d).map_err(|e| e.to_string())?,
    };
    build_g_composed(sd, &phi, &psi).map_err(|e| e.to_string())
}

/// Valid `(a, b, t, n)` in lexicographic order, sampled at 20 evenly spaced
/// positions.
fn sampled_tuples(q: u64) -> Vec<(SingerData, Fe, Fe)> {
    let singers = all_singers(q);
    let mut valid = Vec::new();
    for sd in &singers {
        for other in &singers {
            let (t, n) = (other.a, other.b);
            if build_g_closed_form(sd, t, n, TaSign::Minus).is_ok() {
                valid.push((sd.clone(), t, n));
            }
        }
    }
    let len = valid.len();
    if len <= 20 {
        return valid;
    }
    (0..20).map(|i| valid[i * len / 20].clone()).collect()
}

fn criterion_9() -> Outcome {
    let spec = q5_instance().map_err(|e| e.to_string())?;
    let sd = &spec.singer;
    let (t, n) = (spec.t, spec.n_param);
    let minus = build_g_closed_form(sd, t, n, TaSign::Minus).map_err(|e| e.to_string())?;
    check(minus.g == spec.g, || {
        "q5: minus-sign g differs from the composed g".into()
    })?;
    check(minus.g == composed_for(sd, minus.rho)?, || {
        "q5: independent composition differs".into()
    })?;
    let base = sd.base();
    let plus_c = closed_form_c(sd.a, sd.b, t, n, TaSign::Plus, base).map_err(|e| e.to_string())?;
    check(plus_c == base.from_int(4) && minus.c == Fe::ONE, || {
        format!(
            "q5: c(minus) = {}, c(plus) = {}",
            base.format(minus.c),
            base.format(plus_c)
        )
    })?;
    check(build_g_closed_form(sd, t, n, TaSign::Plus).is_err(), || {
        "q5: plus-sign g accepted".into()
    })?;
    let mut counts = Vec::new();
    for q in [7, 9, 11, 13] {
        let tuples = sampled_tuples(q);
        check(tuples.len() == 20, || {
            format!("q = {q}: only {} valid tuples", tuples.len())
        })?;
        for (sd, t, n) in &tuples {
            let cf = build_g_closed_form(sd, *t, *n, TaSign::Minus).map_err(|e| e.to_string())?;
            let composed = composed_for(sd, cf.rho)?;
            check(cf.g == composed, || {
                let b = sd.base();
                format!(
                    "q = {q}, (a,b,t,n) = ({},{},{},{})",
                    b.format(sd.a),
                    b.format(sd.b),
                    b.format(*t),
                    b.format(*n)
                )
            })?;
        }
        counts.push(format!("q={q}: 20"));
    }
    Ok(format!(
        "q5 plus-sign c = 4 rejected; {}",
        counts.join(", ")
    ))
}

fn consistency(spec: &TowerSpec, m_split: usize, m_genus: usize) -> Result<(), String> {
    let q = spec.q();
    let graph = build_graph(spec, 1).map_err(|e| e.to_string())?;
    for m in 0..=m_split {
        let expected = BigUint::from(q + 1).pow(m as u32 + 1);
        let counted = graph.count_split_chains(m);
        check(counted == expected, || {
            format!("q = {q}, m = {m}: {counted} split chains")
        })?;
    }
    let report = limit_report(spec, m_genus).map_err(|e| format!("q = {q}: {e}"))?;
    for row in report.rows.iter().filter(|r| r.m <= 3) {
        check(
            row.weil_k1 == Some(true) && row.weil_k2 == Some(true),
            || {
                format!(
                    "q = {q}, m = {}: Weil {:?}/{:?}",
                    row.m, row.weil_k1, row.weil_k2
                )
            },
        )?;
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let mut analyzed = 0;
    consistency(&q5_instance().map_err(|e| e.to_string())?, 4, 6)?;
    analyzed += 1;
    for q in [7, 9, 11, 13] {
        let (p, n) = field_of(q);
        let spec = first_family_spec(tower(p, n)).map_err(|e| e.to_string())?;
        consistency(&spec, 4, 4)?;
        analyzed += 1;
    }
    for q in [4, 5, 7] {
        let specs = valid_specs(q)?;
        let step = (specs.len() / 5).max(1);
        for spec in specs.iter().step_by(step) {
            consistency(spec, 4, 3)?;
            analyzed += 1;
        }
    }
    Ok(format!("{analyzed} specs"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("q=5 instance fidelity", criterion_1),
        ("image of R is the trace fiber", criterion_2),
        ("φ criterion matches brute force", criterion_3),
        ("tower premises", criterion_4),
        ("degenerate fields", criterion_5),
        ("genus ladder base", criterion_6),
        ("limit ladder", criterion_7),
        ("(13, 11, 6) counterexample regression", criterion_8),
        ("closed-form constant", criterion_9),
        ("consistency suite", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
