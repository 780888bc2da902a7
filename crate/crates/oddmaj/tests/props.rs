//! Property tests: randomized contracts for the polynomial ring, the
//! statistic identities that hold pointwise on every element, and the
//! involution/bijection plumbing used by the verification runners.

use proptest::prelude::*;

use oddmaj::enumerate::{
    domino_bij_a, domino_bij_b, domino_inv_a, domino_inv_b, iota_a, is_domino_a, is_domino_b,
    phi_b, psi_b_first, psi_b_last, GroupSpec,
};
use oddmaj::genfun::{twisted_genfun, Character};
use oddmaj::perm::{
    descent_set_a, descent_set_b, flatten, length_a, length_b, length_d, neg_set, star, IndexSet,
    Perm, SignedPerm,
};
use oddmaj::poly::{q_int, MonomialImage, MultiPoly};
use oddmaj::stats::{eval_stat, odd_length_a, odd_length_b, Element, Family, StatName};

fn arb_perm(max_n: usize) -> impl Strategy<Value = Perm> {
    (1..=max_n).prop_flat_map(|n| {
        Just((1..=n as i32).collect::<Vec<i32>>())
            .prop_shuffle()
            .prop_map(|w| Perm::new(w).unwrap())
    })
}

fn arb_signed(max_n: usize) -> impl Strategy<Value = SignedPerm> {
    (1..=max_n).prop_flat_map(|n| {
        (
            Just((1..=n as i32).collect::<Vec<i32>>()).prop_shuffle(),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(w, flips)| {
                let window: Vec<i32> = w
                    .iter()
                    .zip(flips.iter())
                    .map(|(&v, &f)| if f { -v } else { v })
                    .collect();
                SignedPerm::new(window).unwrap()
            })
    })
}

/// Small random polynomials in x and y with coefficients in [-9, 9].
fn arb_poly() -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec((0u32..5, 0u32..5, -9i64..=9), 0..6).prop_map(|terms| {
        let mut p = MultiPoly::zero(&["x", "y"]).unwrap();
        for (a, b, c) in terms {
            let m = MultiPoly::monomial(&["x", "y"], c, &[("x", a), ("y", b)]).unwrap();
            p = p.add(&m).unwrap();
        }
        p
    })
}

fn stat(name: StatName, e: &Element) -> u64 {
    eval_stat(name, e).unwrap()
}

proptest! {
    #[test]
    fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        let ab = a.add(&b).unwrap();
        prop_assert!(ab.eq_aligned(&b.add(&a).unwrap()));
        prop_assert!(ab.add(&c).unwrap().eq_aligned(&a.add(&b.add(&c).unwrap()).unwrap()));
        let prod = a.mul(&b).unwrap();
        prop_assert!(prod.eq_aligned(&b.mul(&a).unwrap()));
        prop_assert!(
            prod.mul(&c).unwrap().eq_aligned(&a.mul(&b.mul(&c).unwrap()).unwrap())
        );
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert!(lhs.eq_aligned(&rhs));
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn exact_division_recovers_factor(a in arb_poly(), b in arb_poly()) {
        prop_assume!(!b.is_zero());
        let quot = a.mul(&b).unwrap().div_exact(&b).unwrap();
        prop_assert!(quot.eq_aligned(&a));
    }

    #[test]
    fn parse_display_round_trip(a in arb_poly()) {
        let back = MultiPoly::parse(&a.to_string()).unwrap();
        prop_assert!(back.eq_aligned(&a));
    }

    #[test]
    fn monomial_substitution_matches_term_expansion(
        terms in proptest::collection::vec((0u32..4, 0u32..4, -5i64..=5), 0..5)
    ) {
        let mut p = MultiPoly::zero(&["q1", "q2"]).unwrap();
        let mut expected = MultiPoly::zero(&["x", "y"]).unwrap();
        for (a, b, c) in terms {
            let m = MultiPoly::monomial(&["q1", "q2"], c, &[("q1", a), ("q2", b)]).unwrap();
            p = p.add(&m).unwrap();
            let e =
                MultiPoly::monomial(&["x", "y"], c, &[("x", 2 * a), ("y", 2 * b)]).unwrap();
            expected = expected.add(&e).unwrap();
        }
        let image = p
            .substitute_monomials(&[
                ("q1", MonomialImage::new(1, &[("x", 2)])),
                ("q2", MonomialImage::new(1, &[("y", 2)])),
            ])
            .unwrap();
        prop_assert!(image.eq_aligned(&expected));
    }

    #[test]
    fn plain_statistic_relations(p in arb_perm(8)) {
        let e = Element::A(p.clone());
        let des = stat(StatName::Des, &e);
        let maj = stat(StatName::Maj, &e);
        let odes = stat(StatName::Odes, &e);
        let edes = stat(StatName::Edes, &e);
        let omaj = stat(StatName::Omaj, &e);
        let emaj = stat(StatName::Emaj, &e);
        prop_assert_eq!(odes + edes, des);
        prop_assert_eq!(2 * (omaj + emaj), maj + odes);
        prop_assert_eq!(stat(StatName::LenA, &e), length_a(p.window()));
        prop_assert_eq!(stat(StatName::OddlenA, &e), odd_length_a(&p));
    }

    #[test]
    fn signed_statistic_relations(s in arb_signed(7)) {
        let e = Element::B(s.clone());
        let des = stat(StatName::Des, &e);
        let maj = stat(StatName::Maj, &e);
        let odes = stat(StatName::Odes, &e);
        let edes = stat(StatName::Edes, &e);
        let omaj = stat(StatName::Omaj, &e);
        let emaj = stat(StatName::Emaj, &e);
        let neg = stat(StatName::Neg, &e);
        let oneg = stat(StatName::Oneg, &e);
        let eneg = stat(StatName::Eneg, &e);
        prop_assert_eq!(odes + edes, des);
        prop_assert_eq!(2 * (omaj + emaj), maj + odes);
        prop_assert_eq!(oneg + eneg, neg);
        prop_assert_eq!(stat(StatName::Fmaj, &e), 2 * maj + neg);
        prop_assert_eq!(stat(StatName::Ofmaj, &e), 2 * omaj + oneg);
        prop_assert_eq!(stat(StatName::Efmaj, &e), 2 * emaj + eneg);
        prop_assert_eq!(stat(StatName::LenB, &e), length_b(&s));
        prop_assert_eq!(stat(StatName::OddlenB, &e), odd_length_b(&s));
        if s.is_even_neg() {
            prop_assert_eq!(stat(StatName::LenD, &e), length_d(&s).unwrap());
        }
    }

    #[test]
    fn flattening_preserves_comparisons(s in arb_signed(7)) {
        let flat = flatten(s.window()).unwrap();
        prop_assert_eq!(length_a(flat.window()), length_a(s.window()));
        prop_assert_eq!(descent_set_a(flat.window()), descent_set_a(s.window()));
    }

    #[test]
    fn plain_domino_pairing_round_trips(p in arb_perm(5), flips in proptest::collection::vec(any::<bool>(), 5)) {
        let mut s = IndexSet::EMPTY;
        for j in 1..=p.rank() {
            if flips[j - 1] {
                s.insert(j as u32);
            }
        }
        let u = domino_bij_a(&p, s).unwrap();
        prop_assert_eq!(u.rank(), 2 * p.rank());
        prop_assert!(is_domino_a(&u));
        let (back, back_s) = domino_inv_a(&u).unwrap();
        prop_assert_eq!(back, p);
        prop_assert_eq!(back_s, s);
    }

    #[test]
    fn signed_domino_pairing_round_trips(sp in arb_signed(4), flips in proptest::collection::vec(any::<bool>(), 4)) {
        let mut s = IndexSet::EMPTY;
        for j in 1..=sp.rank() {
            if flips[j - 1] {
                s.insert(j as u32);
            }
        }
        let u = domino_bij_b(&sp, s).unwrap();
        prop_assert_eq!(u.rank(), 2 * sp.rank());
        prop_assert!(is_domino_b(&u));
        prop_assert_eq!(neg_set(&u).iter().count(), 2 * neg_set(&sp).iter().count());
        let (back, back_s) = domino_inv_b(&u).unwrap();
        prop_assert_eq!(back, sp);
        prop_assert_eq!(back_s, s);
    }

    #[test]
    fn plain_star_involution_contract(p in arb_perm(6)) {
        prop_assume!(!is_domino_a(&p));
        let q = iota_a(&p).unwrap();
        prop_assert_eq!(iota_a(&q).unwrap(), p.clone());
        prop_assert_eq!(descent_set_a(q.window()), descent_set_a(p.window()));
        prop_assert_eq!((length_a(p.window()) + length_a(q.window())) % 2, 1);
    }

    #[test]
    fn signed_star_involution_contract(s in arb_signed(6)) {
        prop_assume!(!is_domino_b(&s));
        let t = phi_b(&s).unwrap();
        prop_assert_eq!(phi_b(&t).unwrap(), s.clone());
        prop_assert_eq!(descent_set_b(&t), descent_set_b(&s));
        prop_assert_eq!(neg_set(&t), neg_set(&s));
        prop_assert_eq!((length_b(&s) + length_b(&t)) % 2, 1);
    }

    #[test]
    fn odd_rank_last_entry_involution_contract(s in arb_signed(5)) {
        let n = s.rank();
        prop_assume!(n % 2 == 1);
        prop_assume!(s.window()[n - 1].unsigned_abs() as usize != n);
        let t = psi_b_last(&s).unwrap();
        prop_assert_eq!(psi_b_last(&t).unwrap(), s.clone());
        prop_assert_eq!(neg_set(&t), neg_set(&s));
        let (a, b) = (Element::B(s.clone()), Element::B(t.clone()));
        prop_assert_eq!(stat(StatName::Odes, &b), stat(StatName::Odes, &a));
        prop_assert_eq!(stat(StatName::Omaj, &b), stat(StatName::Omaj, &a));
        prop_assert_eq!((length_b(&s) + length_b(&t)) % 2, 1);
    }

    #[test]
    fn even_rank_first_entry_involution_contract(s in arb_signed(6)) {
        prop_assume!(s.rank() % 2 == 0);
        let t = psi_b_first(&s).unwrap();
        prop_assert_eq!(psi_b_first(&t).unwrap(), s.clone());
        prop_assert_eq!(neg_set(&t), neg_set(&s));
        let (a, b) = (Element::B(s.clone()), Element::B(t.clone()));
        prop_assert_eq!(stat(StatName::Edes, &b), stat(StatName::Edes, &a));
        prop_assert_eq!(stat(StatName::Emaj, &b), stat(StatName::Emaj, &a));
        prop_assert_eq!((length_b(&s) + length_b(&t)) % 2, 1);
    }
}

#[test]
fn star_is_a_parity_swapping_involution() {
    for n in 1..=8usize {
        for i in -(n as i32)..=n as i32 {
            if i == 0 {
                continue;
            }
            let j = star(i, n).unwrap();
            assert_eq!(star(j, n).unwrap(), i);
            // Inside the interval the image flips parity; fixed points
            // are exactly the out-of-range partners.
            if j != i {
                assert_eq!(
                    (i.unsigned_abs() + j.unsigned_abs()) % 2,
                    1,
                    "star({i}) = {j} at n = {n}"
                );
            }
        }
    }
}

#[test]
fn flag_major_distribution_matches_even_product() {
    for n in 1..=4usize {
        let dist = twisted_genfun(
            &GroupSpec::new(Family::B, n),
            Character::Trivial,
            &[(StatName::Fmaj, "x")],
            1,
        )
        .unwrap();
        let mut prod = MultiPoly::one(&["x"]).unwrap();
        for i in 1..=n as u32 {
            prod = prod.mul(&q_int(2 * i, "x").unwrap()).unwrap();
        }
        assert!(dist.eq_aligned(&prod), "rank {n}: {dist} != {prod}");
    }
}
