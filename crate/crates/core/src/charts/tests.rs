use super::*;
use crate::grassmann::rat;

fn e(name: &str) -> Frac {
    Frac::from(SuperPoly::var(&Var::unit(name)))
}

fn o(name: &str) -> Frac {
    Frac::from(SuperPoly::var(&Var::odd(name)))
}

fn c(n: i64) -> Frac {
    Frac::from(SuperPoly::constant(rat(n)))
}

fn signed_pow(v: &str, m: i32) -> Frac {
    // (-v)^m
    (-&e(v)).pow(m as i64).unwrap()
}

fn rule(t: &TransitionMap, name: &str) -> Frac {
    t.rules.iter().find(|(v, _)| v.name() == name).map(|(_, r)| r.clone()).unwrap()
}

#[test]
fn hilb11_transition() {
    for k in -2..=6 {
        let atlas = hilb11_atlas(k).unwrap();
        let t = atlas.transition("H0", "H1").unwrap();
        assert_eq!(rule(t, "b"), e("a").invert().unwrap(), "k={k}");
        let beta = -&(&e("a").pow((k - 2) as i64).unwrap() * &o("alpha"));
        assert_eq!(rule(t, "beta"), beta, "k={k}");
        assert!(verify_cocycle(&atlas).unwrap().ok());
    }
}

#[test]
fn on13_at_all_k() {
    for k in -2..=5 {
        let atlas = hilb21_atlas(k).unwrap();
        let t = atlas.transition("V3", "V1").unwrap();
        let g12 = &o("gamma1") * &o("gamma2");
        assert_eq!(rule(t, "a1"), &e("c1") - &(&g12 * &signed_pow("c2", -k)), "k={k}");
        assert_eq!(rule(t, "a2"), e("c2").invert().unwrap());
        assert_eq!(rule(t, "alpha1"), &o("gamma1") * &(&e("c2").invert().unwrap() - &e("c1")));
        assert_eq!(rule(t, "alpha2"), &o("gamma2") * &signed_pow("c2", -k));
    }
}

#[test]
fn on12_at_all_k() {
    for k in -2..=5 {
        let atlas = hilb21_atlas(k).unwrap();
        let t = atlas.transition("V2", "V1").unwrap();
        let inv_b1 = e("b1").invert().unwrap();
        let b12 = &o("beta1") * &o("beta2");
        assert_eq!(rule(t, "a1"), &inv_b1 + &(&b12 * &signed_pow("b1", k - 2)), "k={k}");
        assert_eq!(rule(t, "a2"), e("b2"));
        let a1 = -&(&(&o("beta1") * &signed_pow("b1", k - 2)) * &(&e("b2") - &inv_b1));
        assert_eq!(rule(t, "alpha1"), a1);
        assert_eq!(rule(t, "alpha2"), o("beta2"));
    }
}

#[test]
fn hilb21_cocycle() {
    for k in [-1, 0, 3] {
        let atlas = hilb21_atlas(k).unwrap();
        assert_eq!(atlas.transitions.len(), 12);
        let report = verify_cocycle(&atlas).unwrap();
        assert!(report.ok(), "k={k}: {}", report.failure.unwrap());
        assert!(report.checked >= 36 * 4);
    }
}

#[test]
fn flipped_sign_is_caught() {
    let mut atlas = hilb21_atlas(1).unwrap();
    let key = ("V3".to_string(), "V1".to_string());
    let t = atlas.transitions.get_mut(&key).unwrap();
    let a1 = t.rules.keys().find(|v| v.name() == "alpha2").unwrap().clone();
    let flipped = -&t.rules[&a1];
    t.rules.insert(a1, flipped);
    let report = verify_cocycle(&atlas).unwrap();
    let failure = report.failure.expect("negative control must fail");
    assert!(failure.path.contains(&"V1".to_string()) && failure.path.contains(&"V3".to_string()));
}

#[test]
fn bosonic_two_point_charts() {
    let atlas = hilb21_atlas(2).unwrap();
    let t = atlas.transition("V2", "V1").unwrap();
    let zero: BTreeMap<Var, Frac> = [Var::odd("beta1"), Var::odd("beta2")].into_iter().map(|v| (v, Frac::zero())).collect();
    let r = t.restrict(&zero).unwrap();
    assert_eq!(rule(&r, "a1"), e("b1").invert().unwrap());
    assert_eq!(rule(&r, "a2"), e("b2"));
    let t = atlas.transition("V1", "V4").unwrap().restrict(&[Var::odd("alpha1"), Var::odd("alpha2")].into_iter().map(|v| (v, Frac::zero())).collect()).unwrap();
    assert_eq!(rule(&t, "d1"), e("a1").invert().unwrap());
    assert_eq!(rule(&t, "d2"), e("a2").invert().unwrap());
}

#[test]
fn pi_v_round_trip() {
    for k in [0, 2, -3] {
        let atlas = pi_v_atlas(k).unwrap();
        assert!(verify_cocycle(&atlas).unwrap().ok());
        let t = atlas.transition("U0", "U1").unwrap();
        let x = Frac::from(SuperPoly::var(&Var::even("x")));
        let theta = Frac::from(SuperPoly::var(&Var::odd("theta")));
        assert_eq!(rule(t, "psi"), &x.pow(-k as i64).unwrap() * &theta);
    }
    let _ = c(0);
}

#[test]
fn atlas_text_round_trip() {
    let atlas = hilb21_atlas(2).unwrap();
    let text = atlas.to_text();
    assert!(text.starts_with("atlas hilb21 k=2\nchart V1\n"));
    assert!(text.contains("transition V3 -> V1\n"));
    let back = parse_atlas(&text).unwrap();
    assert_eq!(back, atlas);
}
