//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero on any failure not listed in `KNOWN`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::Gen;
use rand::Rng;
use superhilb::charts::{hilb11_atlas, hilb21_atlas, parse_frac, verify_cocycle, Atlas, TransitionMap};
use superhilb::obstruction::{build_coboundary_system, extract_obstruction, is_coboundary, split_check_11, wedge2_degrees, Witness};
use superhilb::parser::{parse_poly, pretty};
use superhilb::quotient::stratification_generators;
use superhilb::{Frac, Parity, ParseError, SuperPoly};

/// Criteria expected to fail: number, exact failure detail prefix, reason.
/// Any other failure, or a different failure of these, is fatal.
const KNOWN: &[(usize, &str, &str)] = &[(
    7,
    "k = 0 is a coboundary",
    "at k = 0 the quadratic cochain is a coboundary, so only k != 0 is non-split",
)];

type Check = Result<String, String>;

fn frac(atlas: &Atlas, chart: &str, text: &str) -> Frac {
    parse_frac(text, &atlas.chart(chart).unwrap().ring().unwrap()).unwrap()
}

fn rule(t: &TransitionMap, name: &str) -> Frac {
    t.rules.iter().find(|(v, _)| v.name() == name).map(|(_, r)| r.clone()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn algebra_kernel() -> Check {
    let mut g = Gen::new(1);
    for i in 0..1000 {
        let (a, b, c) = (g.poly(), g.poly(), g.poly());
        ensure(&(&a * &b) * &c == &a * &(&b * &c), || format!("associativity, sample {i}"))?;
        ensure(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), || format!("left distributivity, sample {i}"))?;
        ensure(&(&a + &b) * &c == &(&a * &c) + &(&b * &c), || format!("right distributivity, sample {i}"))?;
        let pu = if g.rng.gen() { Parity::Odd } else { Parity::Even };
        let pv = if g.rng.gen() { Parity::Odd } else { Parity::Even };
        let (u, v) = (g.homogeneous(pu), g.homogeneous(pv));
        let swapped = &v * &u;
        let sign = if pu.is_odd() && pv.is_odd() { -&swapped } else { swapped };
        ensure(&u * &v == sign, || format!("supercommutativity, sample {i}"))?;
    }
    for i in 0..200 {
        let u = g.unit();
        let inv = u.invert().map_err(|e| format!("inverse {i}: {e}"))?;
        ensure((&u * &inv).is_one() && (&inv * &u).is_one(), || format!("inverse round trip {i}"))?;
    }
    Ok("1000 x 4 ring identities, 200 inverses".into())
}

fn block_inverse() -> Check {
    let mut g = Gen::new(2);
    for i in 0..100 {
        let (p, q) = (g.rng.gen_range(0..=4), g.rng.gen_range(0..=4));
        let m = g.supermatrix(p, q);
        let inv = m.left_inverse().map_err(|e| format!("matrix {i} ({p}|{q}): {e}"))?;
        let left = inv.matmul(&m).map_err(|e| e.to_string())?;
        let right = m.matmul(&inv).map_err(|e| e.to_string())?;
        ensure(left.is_identity() && right.is_identity(), || format!("matrix {i} ({p}|{q})"))?;
    }
    Ok("100 supermatrices up to (4|4)".into())
}

fn stratification() -> Check {
    let mut n = 0;
    for p in 0..=4 {
        for q in 0..=p {
            let s = stratification_generators(p, q).map_err(|e| format!("({p}|{q}): {e}"))?;
            let expected: Vec<SuperPoly> = s.change.c.iter().chain(&s.change.gamma).cloned().collect();
            ensure(s.generators.len() == 2 * q && s.generators == expected, || format!("({p}|{q}) generators"))?;
            let pres = s.change.residual_presentation();
            let fiber = s.change.canonical.fiber();
            for w in [&s.witnesses.0, &s.witnesses.1] {
                let expanded = &(&w.cofactor_f * &pres.f) + &(&w.cofactor_g * &pres.g);
                ensure(w.vector.to_poly(fiber) == expanded, || format!("({p}|{q}) witness"))?;
            }
            ensure(s.dimension == (p, p), || format!("({p}|{q}) dimension {:?}", s.dimension))?;
            n += 1;
        }
    }
    Ok(format!("{n} strata"))
}

fn hilb11() -> Check {
    for k in -2..=6 {
        let atlas = hilb11_atlas(k).map_err(|e| e.to_string())?;
        let t = atlas.transition("H0", "H1").map_err(|e| e.to_string())?;
        ensure(rule(t, "b") == frac(&atlas, "H0", "a^-1"), || format!("k = {k}: b"))?;
        ensure(rule(t, "beta") == frac(&atlas, "H0", &format!("-a^{}*alpha", k - 2)), || format!("k = {k}: beta"))?;
        let v = split_check_11(k).map_err(|e| e.to_string())?;
        ensure(v.split && v.witness == Witness::Twist(-k + 2), || format!("k = {k}: {v:?}"))?;
    }
    Ok("k = -2..6".into())
}

fn hilb21_transitions() -> Check {
    for k in -2..=5 {
        let atlas = hilb21_atlas(k).map_err(|e| e.to_string())?;
        let t = atlas.transition("V3", "V1").map_err(|e| e.to_string())?;
        let on13 = [
            ("a1", format!("c1 - (-c2)^{}*gamma1*gamma2", -k)),
            ("a2", "c2^-1".to_string()),
            ("alpha1", "gamma1*(c2^-1 - c1)".to_string()),
            ("alpha2", format!("(-c2)^{}*gamma2", -k)),
        ];
        for (v, text) in on13 {
            ensure(rule(t, v) == frac(&atlas, "V3", &text), || format!("k = {k}: V3 -> V1 {v}"))?;
        }
        let t = atlas.transition("V2", "V1").map_err(|e| e.to_string())?;
        let on12 = [
            ("a1", format!("b1^-1 + (-b1)^{}*beta1*beta2", k - 2)),
            ("a2", "b2".to_string()),
            ("alpha1", format!("-(-b1)^{}*beta1*(b2 - b1^-1)", k - 2)),
            ("alpha2", "beta2".to_string()),
        ];
        for (v, text) in on12 {
            ensure(rule(t, v) == frac(&atlas, "V2", &text), || format!("k = {k}: V2 -> V1 {v}"))?;
        }
        let report = verify_cocycle(&atlas).map_err(|e| e.to_string())?;
        if let Some(f) = report.failure {
            return Err(format!("k = {k}: {f}"));
        }
    }
    Ok("k = -2..5, cocycle holds".into())
}

fn wedge_degrees() -> Check {
    for k in -3..=6 {
        let d = wedge2_degrees(k).map_err(|e| e.to_string())?;
        ensure(d == (k - 3, -k - 1), || format!("k = {k}: {d:?}"))?;
    }
    Ok("k = -3..6".into())
}

fn non_splitness() -> Check {
    let mut bad = Vec::new();
    for k in -3i32..=6 {
        let v = is_coboundary(k).map_err(|e| format!("k = {k}: {e}"))?;
        let solver_agrees = (0..=k.unsigned_abs() as usize + 6).all(|d| {
            let found = build_coboundary_system(k, d).unwrap().solve_bounded().is_some();
            found == v.split
        });
        if !solver_agrees {
            return Err(format!("k = {k}: bounded solver disagrees with the case analysis"));
        }
        if v.split {
            let last = v.trace().last().cloned().unwrap_or_default();
            bad.push(format!("k = {k} is a coboundary ({last})"));
        }
    }
    if bad.is_empty() {
        Ok("k = -3..6 all non-split".into())
    } else {
        Err(bad.join("; "))
    }
}

fn cochain_identities() -> Check {
    for k in -2..=5 {
        let atlas = hilb21_atlas(k).map_err(|e| e.to_string())?;
        let c = extract_obstruction(&atlas).map_err(|e| e.to_string())?;
        ensure(c.get("V2", "V3").is_empty() && c.get("V3", "V2").is_empty(), || format!("k = {k}: Ψ23 != 0"))?;
        let psi = frac(&atlas, "V1", "-alpha1*alpha2 over a2 - a1");
        let in_v3 = frac(&atlas, "V3", &format!("-(-c2)^{}*gamma1*gamma2", -k));
        let t31 = atlas.transition("V3", "V1").map_err(|e| e.to_string())?;
        ensure(t31.pull_back(&psi).map_err(|e| e.to_string())? == in_v3, || format!("k = {k}: frame transport"))?;
        let e13 = c.component("V1", "V3", "a1").ok_or(format!("k = {k}: Ψ13 missing"))?;
        ensure(e13.extracted == in_v3, || format!("k = {k}: extracted Ψ13"))?;
        let coefficient = frac(&atlas, "V1", "-1 over a2 - a1");
        for j in ["V2", "V3"] {
            let e = c.component("V1", j, "a1").ok_or(format!("k = {k}: Ψ(V1,{j}) missing"))?;
            ensure(e.coefficient == coefficient, || format!("k = {k}: Ψ(V1,{j})"))?;
        }
    }
    Ok("k = -2..5".into())
}

fn positioned(e: &ParseError) -> bool {
    match e {
        ParseError::Syntax { line, column, .. }
        | ParseError::UnknownVariable { line, column, .. }
        | ParseError::NegativePowerOfNonInvertible { line, column, .. }
        | ParseError::Evaluation { line, column, .. } => *line >= 1 && *column >= 1,
        ParseError::DuplicateVariable(_) | ParseError::InvertibleOddVariable(_) => false,
    }
}

fn parser() -> Check {
    let mut g = Gen::new(9);
    let ring = g.ring();
    for i in 0..1000 {
        let p = g.poly();
        let text = pretty(&p);
        let back = parse_poly(&text, &ring).map_err(|e| format!("sample {i} `{text}`: {e}"))?;
        ensure(back == p, || format!("sample {i} `{text}` reparsed differently"))?;
    }
    const TOKENS: &[&str] = &[
        "x", "y", "u", "v", "t1", "t2", "t4", "q", "+", "-", "*", "^", "(", ")", "/", "2", "-3", "10", " ", "1/2", "^-1", "**", "@", "\n", "é", "0", "99999999999999999999",
    ];
    let mut ok = 0usize;
    for i in 0..100_000 {
        let input: Vec<u8> = if g.rng.gen_ratio(7, 10) {
            let n = g.rng.gen_range(0..16);
            (0..n).flat_map(|_| TOKENS[g.rng.gen_range(0..TOKENS.len())].bytes()).collect()
        } else {
            let n = g.rng.gen_range(0..24);
            (0..n).map(|_| g.rng.gen()).collect()
        };
        match parse_poly(&input, &ring) {
            Ok(_) => ok += 1,
            Err(e) if positioned(&e) => {}
            Err(e) => return Err(format!("input {i} {:?}: unpositioned error {e}", String::from_utf8_lossy(&input))),
        }
    }
    Ok(format!("1000 round trips, 100000 fuzz inputs ({ok} parsed)"))
}

fn main() {
    let criteria: [(usize, &str, u64, fn() -> Check); 9] = [
        (1, "algebra kernel properties", 10, algebra_kernel),
        (2, "block inverse", 30, block_inverse),
        (3, "stratification generators", 60, stratification),
        (4, "Hilb^{1|1} transition and twist", 10, hilb11),
        (5, "Hilb^{2|1} transitions and cocycle", 120, hilb21_transitions),
        (6, "wedge^2 degrees", 30, wedge_degrees),
        (7, "non-splitness of Hilb^{2|1}", 120, non_splitness),
        (8, "obstruction cochain identities", 30, cochain_identities),
        (9, "parser round trip and fuzz", 60, parser),
    ];
    let mut unexpected = 0;
    for (n, name, limit, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > Duration::from_secs(limit) => Err(format!("took longer than {limit}s")),
            r => r,
        };
        match result {
            Ok(detail) => println!("PASS {n} {name}: {detail} ({:.2}s)", elapsed.as_secs_f64()),
            Err(detail) => {
                let known = KNOWN
                    .iter()
                    .find(|(k, prefix, _)| *k == n && detail.starts_with(prefix) && !detail.contains(';'));
                println!("FAIL {n} {name}: {detail} ({:.2}s)", elapsed.as_secs_f64());
                match known {
                    Some((_, _, why)) => println!("     known: {why}"),
                    None => unexpected += 1,
                }
            }
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
