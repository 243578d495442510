use abideal_core::ce::{differential, Cochain};
use abideal_core::correspondence::{inverse, l_support, pair};
use abideal_core::ideals::{enumerate_increasing, is_increasing};
use abideal_core::liealg::StructureTable;
use abideal_core::roots::positive_roots;
use abideal_core::{IncreasingSet, IntPolynomial, Perm, RootSet, SignedPerm};
use proptest::prelude::*;

fn signed_perm(max: usize) -> impl Strategy<Value = SignedPerm> {
    (1..=max)
        .prop_flat_map(|n| {
            (
                Just((1..=n as i8).collect::<Vec<_>>()).prop_shuffle(),
                proptest::collection::vec(any::<bool>(), n),
            )
        })
        .prop_map(|(img, neg)| {
            let signed: Vec<i8> = img
                .iter()
                .zip(&neg)
                .map(|(&v, &s)| if s { -v } else { v })
                .collect();
            SignedPerm::from_images(&signed).unwrap()
        })
}

fn same_rank_pair(max: usize) -> impl Strategy<Value = (SignedPerm, SignedPerm)> {
    signed_perm(max).prop_flat_map(|a| {
        let n = a.rank();
        (
            Just(a),
            (
                Just((1..=n as i8).collect::<Vec<_>>()).prop_shuffle(),
                proptest::collection::vec(any::<bool>(), n),
            )
                .prop_map(|(img, neg)| {
                    let signed: Vec<i8> = img
                        .iter()
                        .zip(&neg)
                        .map(|(&v, &s)| if s { -v } else { v })
                        .collect();
                    SignedPerm::from_images(&signed).unwrap()
                }),
        )
    })
}

proptest! {
    #[test]
    fn standard_form_recomposes(w in signed_perm(8)) {
        prop_assert_eq!(w.standard_form().recompose(), w);
        prop_assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn length_matches_inversions_and_inverse(w in signed_perm(8)) {
        let phi = w.inversion_set();
        prop_assert_eq!(w.length(), phi.len());
        prop_assert_eq!(w.inverse().length(), phi.len());
        // Φ_w = {α > 0 : w⁻¹α < 0}
        let inv = w.inverse();
        for r in positive_roots(w.rank()).unwrap() {
            prop_assert_eq!(phi.contains(r), !inv.act_on_root(r).positive);
        }
    }

    #[test]
    fn action_is_a_homomorphism((a, b) in same_rank_pair(6)) {
        let ab = a.compose(&b);
        for r in positive_roots(a.rank()).unwrap() {
            let step = b.act_on_root(r);
            let twice = a.act_on_root(step.root);
            let direct = ab.act_on_root(r);
            prop_assert_eq!(direct.root, twice.root);
            prop_assert_eq!(direct.positive, twice.positive == step.positive);
        }
    }

    #[test]
    fn correspondence_round_trip(w in signed_perm(7)) {
        let p = pair(&w).unwrap();
        prop_assert!(is_increasing(p.xi.members()).unwrap());
        prop_assert_eq!(
            p.eta.inversions(),
            w.inversion_set().intersection(&RootSet::diff_part(w.rank()))
        );
        prop_assert_eq!(l_support(&p.eta, &p.xi).unwrap(), w.inversion_set());
        prop_assert_eq!(w.length(), p.eta.length() + p.xi.dim());
        prop_assert_eq!(inverse(&p.eta, &p.xi).unwrap(), w);
    }

    #[test]
    fn perm_from_inversions(w in signed_perm(9)) {
        let p: Perm = w.perm();
        prop_assert_eq!(Perm::from_inversions(&p.inversions()), Some(p));
    }

    #[test]
    fn increasing_sets_rebuild_from_roots(n in 1usize..=8, pick in any::<prop::sample::Index>()) {
        let all = enumerate_increasing(n).unwrap();
        let s = &all[pick.index(all.len())];
        let rebuilt = IncreasingSet::try_from_roots(s.members()).unwrap();
        prop_assert_eq!(&rebuilt, s);
        prop_assert_eq!(IncreasingSet::from_profile(n, s.profile()).unwrap(), rebuilt);
    }

    #[test]
    fn polynomial_division_inverts_multiplication(
        a in proptest::collection::vec(-20i64..=20, 1..8),
        mut b in proptest::collection::vec(-20i64..=20, 0..5),
    ) {
        b.push(1);
        let (pa, pb) = (IntPolynomial::new(a), IntPolynomial::new(b));
        prop_assert_eq!((&pa * &pb).div_exact(&pb).unwrap(), pa.clone());
        let (q, r) = (&(&pa * &pb) + &IntPolynomial::one()).div_rem(&pb).unwrap();
        prop_assert_eq!(&(&q * &pb) + &r, &(&pa * &pb) + &IntPolynomial::one());
    }

    #[test]
    fn d_squared_on_random_monomials(n in 1usize..=3, bits in any::<u128>()) {
        let table = StructureTable::build(n).unwrap();
        let set = RootSet::from_bits(n, bits & RootSet::all(n).bits());
        let c = Cochain::monomial(&set);
        prop_assert!(differential(&table, &differential(&table, &c)).is_zero());
    }
}
