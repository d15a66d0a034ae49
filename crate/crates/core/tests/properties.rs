use proptest::prelude::*;
use ykr::algebra::{expand_closed_form, MPoly, Mono, Rat, RatFn, SeriesWindow, TriDeg, VarSet};
use ykr::braid::{parse_braid, BraidWord};
use ykr::checks::invariants_of;
use ykr::complex::{gaussian_eliminate, rouquier, tensor_complex};
use ykr::homology::{degreewise_homology, hy, normalize, raw_window, Normalization};

fn rat() -> impl Strategy<Value = Rat> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| Rat::new(n, d))
}

fn word(max_len: usize) -> impl Strategy<Value = BraidWord> {
    (2usize..=3).prop_flat_map(move |n| {
        prop::collection::vec((1..n, prop::bool::ANY), 0..=max_len)
            .prop_map(move |ls| BraidWord::new(n, ls.into_iter().map(|(i, p)| (i, if p { 1 } else { -1 })).collect()).unwrap())
    })
}

fn poly(vars: VarSet) -> impl Strategy<Value = MPoly> {
    prop::collection::vec((prop::collection::vec(0u32..3, 2), -5i64..5), 0..4).prop_map(move |ts| {
        MPoly::from_terms(vars, ts.into_iter().map(|(e, c)| (Mono::from_exps(&[e[0], e[1]]), Rat::from_int(c))).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn rationals_form_a_field(a in rat(), b in rat(), c in rat()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv()).is_one());
        }
    }

    #[test]
    fn polynomials_distribute(p in poly(VarSet::x(2)), q in poly(VarSet::x(2)), r in poly(VarSet::x(2))) {
        let lhs = p.try_add(&q).unwrap().try_mul(&r).unwrap();
        let rhs = p.try_mul(&r).unwrap().try_add(&q.try_mul(&r).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tridegree_exponents_round_trip(q in -6i32..6, t in -6i32..6, a in 0i32..3) {
        let c = TriDeg::from_qta(q, t, a);
        prop_assert_eq!(c.qta(), Some((q, t, a)));
        let (q2, t2, a2) = c.doubled_qta();
        prop_assert_eq!(TriDeg::from_doubled_qta(q2, t2, a2 / 2), c);
    }

    #[test]
    fn braid_text_round_trips(b in word(8)) {
        prop_assert_eq!(parse_braid(&b.to_string()).unwrap(), b);
    }

    #[test]
    fn series_arithmetic_inverts(i in 0i32..3, j in 0i32..3, k in 0i32..2) {
        let w = SeriesWindow::qta(4, 2);
        let f = RatFn::poly(&[(1, i, j, k)]).over((1, 0, 0), 1).over((0, 1, 0), 2);
        let g = expand_closed_form(&f, &w).unwrap();
        let q = TriDeg::from_qta(1, 0, 0);
        let a = TriDeg::from_qta(0, 0, 1);
        let back = g.mul_poly(&[(TriDeg::ZERO, 1), (a, 1)]).div_one_plus(a);
        prop_assert!(back.compare(&g).unwrap() > 0);
        let num = expand_closed_form(&RatFn::poly(&[(1, i, j, k)]).over((0, 1, 0), 2), &w).unwrap();
        prop_assert!(g.mul_poly(&[(TriDeg::ZERO, 1), (q, -1)]).compare(&num).unwrap() > 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn structural_invariants_hold(b in word(5)) {
        prop_assert_eq!(invariants_of(&b, 2), Ok(()));
    }

    #[test]
    fn rouquier_is_monoidal(b1 in word(3), k in 0usize..=3) {
        let b2 = BraidWord::new(b1.n, b1.letters[..k.min(b1.letters.len())].to_vec()).unwrap();
        let joint = rouquier(&b1.concat(&b2));
        let split = gaussian_eliminate(&tensor_complex(&rouquier(&b1), &rouquier(&b2)).unwrap());
        let lo = joint.chain.iter().chain(split.chain.iter()).flat_map(|m| m.shifts.iter().copied()).min().unwrap_or(0);
        prop_assert_eq!(degreewise_homology(&joint, lo, lo + 4), degreewise_homology(&split, lo, lo + 4));
    }

    #[test]
    fn hy_is_conjugation_invariant(b in word(4), r in 0usize..4) {
        prop_assume!(!b.letters.is_empty());
        let r = r % b.letters.len();
        let mut rotated = b.letters[r..].to_vec();
        rotated.extend_from_slice(&b.letters[..r]);
        let c = BraidWord::new(b.n, rotated).unwrap();
        let norm = Normalization::of(&b.closure(), b.n);
        prop_assume!(norm.shift().is_ok());
        let w = SeriesWindow::qta(2, b.n as i32);
        let raw = raw_window(&w, &norm).unwrap();
        let g1 = normalize(&hy(&b, &raw), &norm).unwrap();
        let g2 = normalize(&hy(&c, &raw), &norm).unwrap();
        prop_assert!(g1.compare(&g2).is_ok());
    }

    #[test]
    fn hy_dimensions_are_nonnegative(b in word(4)) {
        prop_assert!(hy(&b, &SeriesWindow::qta(2, b.n as i32)).is_nonnegative());
    }
}
