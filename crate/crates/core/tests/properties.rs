mod common;

use std::collections::BTreeMap;

use common::Gen;
use proptest::prelude::*;
use rand::Rng;
use superhilb::charts::{canonicalize, change_patch, IdealOnChart, Patch};
use superhilb::grassmann::ratio;
use superhilb::obstruction::LaurentBivar;
use superhilb::parser::{parse_poly, pretty};
use superhilb::quotient::{reduce_to_basis, CanonicalIdeal, Fiber};
use superhilb::{Parity, SuperPoly, Var};

fn numeric_canonical(g: &mut Gen, p: usize, q: usize) -> CanonicalIdeal {
    let even = |n: usize, g: &mut Gen| -> Vec<SuperPoly> {
        (0..n).map(|_| SuperPoly::constant(ratio(g.rng.gen_range(-5..=5), g.rng.gen_range(1..=3)))).collect()
    };
    let a = even(p - q, g);
    let b = even(q, g);
    let odd = |n: usize, g: &mut Gen, tag: &str| -> Vec<SuperPoly> {
        (0..n)
            .map(|i| SuperPoly::var(&Var::odd(format!("{tag}{i}"))).scale(&ratio(g.rng.gen_range(1..=4), 1)))
            .collect()
    };
    let alpha = odd(p - q, g, "s");
    let beta = odd(q, g, "r");
    CanonicalIdeal::new(p, q, Fiber::default(), a, b, alpha, beta).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn substitution_is_a_ring_map(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (a, b) = (g.poly(), g.poly());
        let assignment = BTreeMap::from([
            (Var::even("x"), g.homogeneous(Parity::Even)),
            (Var::odd("t1"), g.homogeneous(Parity::Odd)),
        ]);
        let lhs = (&a * &b).substitute(&assignment).unwrap();
        let rhs = &a.substitute(&assignment).unwrap() * &b.substitute(&assignment).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn odd_elements_square_to_zero(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let t = g.homogeneous(Parity::Odd);
        prop_assert!((&t * &t).is_zero());
    }

    #[test]
    fn pretty_then_parse(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let ring = g.ring();
        let p = g.poly();
        prop_assert_eq!(parse_poly(pretty(&p), &ring).unwrap(), p);
    }

    #[test]
    fn unit_inverse_is_two_sided(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let u = g.unit();
        let inv = u.invert().unwrap();
        prop_assert!((&u * &inv).is_one());
        prop_assert!((&inv * &u).is_one());
    }

    #[test]
    fn block_inverse_small(seed in any::<u64>(), p in 0usize..=2, q in 0usize..=2) {
        let mut g = Gen::new(seed);
        let m = g.supermatrix(p, q);
        let inv = m.left_inverse().unwrap();
        prop_assert!(inv.matmul(&m).unwrap().is_identity());
    }

    #[test]
    fn reduction_reassembles(seed in any::<u64>(), p in 1usize..=3, q in 0usize..=3) {
        prop_assume!(q <= p);
        let mut g = Gen::new(seed);
        let ideal = numeric_canonical(&mut g, p, q);
        let fiber = Fiber::default();
        let n = g.rng.gen_range(0..=5);
        let poly = &fiber.x_pow(n) * &(&SuperPoly::one() + &fiber.theta());
        let pres = ideal.presentation();
        let red = reduce_to_basis(&poly, &pres).unwrap();
        prop_assert!(red.verify(&poly, &pres));
    }

    #[test]
    fn canonicalize_recovers_scrambled_generators(seed in any::<u64>(), p in 1usize..=3, q in 0usize..=3) {
        prop_assume!(q <= p);
        let mut g = Gen::new(seed);
        let ideal = numeric_canonical(&mut g, p, q);
        let c = SuperPoly::constant(ratio(g.rng.gen_range(1..=5), 1));
        let eta = SuperPoly::var(&Var::odd("eta"));
        // f' = c·f + η·g and g' = g + η·f generate the same ideal
        let f2 = &(&c * ideal.f()) + &(&eta * ideal.g());
        let g2 = ideal.g() + &(&eta * ideal.f());
        let on_chart = IdealOnChart::new(Patch::U0, vec![f2, g2]).unwrap();
        let back = canonicalize(&on_chart, p, q).unwrap();
        prop_assert_eq!(back.f(), ideal.f());
        prop_assert_eq!(back.g(), ideal.g());
    }

    #[test]
    fn change_patch_round_trip(seed in any::<u64>(), p in 1usize..=2, k in -2i32..=3) {
        let mut g = Gen::new(seed);
        let ideal = numeric_canonical(&mut g, p, p.min(1));
        let moved = change_patch(&ideal, Patch::U0, k);
        prop_assume!(moved.is_ok());
        let back = change_patch(&moved.unwrap(), Patch::U1, k).unwrap();
        prop_assert_eq!(back.f(), ideal.f());
        prop_assert_eq!(back.g(), ideal.g());
    }

    #[test]
    fn diagonal_division(terms in prop::collection::vec(((-3i32..=3, -3i32..=3), -5i64..=5), 0..6)) {
        let mut q = LaurentBivar::zero();
        for (e, c) in terms {
            q.add(e, ratio(c, 1));
        }
        let mut zw = LaurentBivar::monomial(ratio(1, 1), (1, 0));
        zw.add((0, 1), ratio(-1, 1));
        prop_assert_eq!(zw.mul(&q).div_z_minus_w(), Some(q));
    }
}
