//! Property tests for the algebraic, criterion and decision invariants.

mod common;

use gbdecide::algebra::{Polynomial, Term, TermOrdering};
use gbdecide::criteria::{
    decide_main, extended_criterion, remainder_is_reduced, verify_report, B3Options, Mode,
};
use gbdecide::groebner::{decide_plain, reduce};
use gbdecide::parser::{parse_system, serialize_system, SystemFile};
use gbdecide::pham::{decide_pham_like, detect_pham_like, generate_pham_like, PhamConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const N: usize = 3;

fn term() -> impl Strategy<Value = Term> {
    prop::collection::vec(0u32..4, N).prop_map(Term::from_exponents)
}

fn ordering() -> impl Strategy<Value = TermOrdering> {
    prop_oneof![
        Just(TermOrdering::lex(N)),
        Just(TermOrdering::grlex(N)),
        Just(TermOrdering::grevlex(N)),
    ]
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn poly_pair(seed: u64) -> (Polynomial, Polynomial, TermOrdering) {
    let mut r = rng(seed);
    let ctx = common::ring(N);
    let ord = common::random_ordering(&mut r, N);
    let p = common::random_poly(&mut r, &ctx, 4, 3);
    let q = common::random_poly(&mut r, &ctx, 4, 3);
    (p, q, ord)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gcd_times_lcm_is_product(a in term(), b in term()) {
        prop_assert_eq!(a.gcd(&b).mul(&a.lcm(&b)).unwrap(), a.mul(&b).unwrap());
        prop_assert!(a.gcd(&b).divides(&a) && a.divides(&a.lcm(&b)));
    }

    #[test]
    fn ordering_is_total_and_multiplicative(
        ord in ordering(), a in term(), b in term(), c in term()
    ) {
        let ab = ord.cmp_terms(&a, &b);
        prop_assert_eq!(ab.reverse(), ord.cmp_terms(&b, &a));
        prop_assert_eq!(ab.is_eq(), a == b);
        let (ac, bc) = (a.mul(&c).unwrap(), b.mul(&c).unwrap());
        prop_assert_eq!(ord.cmp_terms(&ac, &bc), ab);
        prop_assert!(ord.cmp_terms(&Term::one(N), &a).is_le());
    }

    #[test]
    fn ordering_is_transitive(ord in ordering(), a in term(), b in term(), c in term()) {
        if ord.cmp_terms(&a, &b).is_le() && ord.cmp_terms(&b, &c).is_le() {
            prop_assert!(ord.cmp_terms(&a, &c).is_le());
        }
    }

    #[test]
    fn leading_term_is_multiplicative(seed in any::<u64>()) {
        let (p, q, ord) = poly_pair(seed);
        let pq = p.mul(&q).unwrap();
        let expected = p.leading_term(&ord).unwrap().mul(q.leading_term(&ord).unwrap()).unwrap();
        prop_assert_eq!(pq.leading_term(&ord).unwrap(), &expected);
    }

    #[test]
    fn leading_term_of_sum_is_bounded(seed in any::<u64>()) {
        let (p, q, ord) = poly_pair(seed);
        let sum = p.add(&q).unwrap();
        if !sum.is_zero() {
            let top = ord.max(p.leading_term(&ord).unwrap(), q.leading_term(&ord).unwrap());
            prop_assert!(ord.cmp_terms(sum.leading_term(&ord).unwrap(), top).is_le());
        }
    }

    #[test]
    fn serialization_round_trips(seed in any::<u64>()) {
        let s = common::random_system(&mut rng(seed));
        let text = serialize_system(&s);
        let back = parse_system(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(serialize_system(&back), text);
    }

    #[test]
    fn division_traces_are_sound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = common::random_system(&mut r);
        let p = common::random_poly(&mut r, &s.context, 6, 4);
        let ord = &s.ordering;
        let tr = reduce(&p, &s.polys, ord).unwrap();
        prop_assert_eq!(tr.reconstruct(&s.polys).unwrap(), p.clone());
        prop_assert!(remainder_is_reduced(&tr.remainder, &s.polys, ord).unwrap());
        let heads: Vec<Term> = tr
            .steps
            .iter()
            .map(|st| st.term.mul(s.polys[st.reducer].leading_term(ord).unwrap()).unwrap())
            .collect();
        for w in heads.windows(2) {
            prop_assert!(ord.cmp_terms(&w[1], &w[0]).is_lt());
        }
        if let Some(first) = heads.first() {
            prop_assert!(ord.cmp_terms(first, p.leading_term(ord).unwrap()).is_le());
        }
        let used: std::collections::BTreeSet<usize> = tr.steps.iter().map(|st| st.reducer).collect();
        prop_assert_eq!(used, tr.reducers_used);
    }

    #[test]
    fn ec_is_reversal_invariant(ts in prop::collection::vec(term(), 1..7)) {
        let rev: Vec<Term> = ts.iter().rev().cloned().collect();
        prop_assert_eq!(extended_criterion(&ts).is_pass(), extended_criterion(&rev).is_pass());
    }

    #[test]
    fn coprime_endpoints_pass_ec(ts in prop::collection::vec(term(), 2..7)) {
        let mut ts = ts;
        let first = ts[0].clone();
        let last = ts.last_mut().unwrap();
        let e: Vec<u32> = (0..N)
            .map(|v| if first.degree(v) > 0 { 0 } else { last.degree(v) })
            .collect();
        *last = Term::from_exponents(e);
        prop_assert!(extended_criterion(&ts).is_pass());
    }
}

fn decide(s: &SystemFile, mode: Mode) -> gbdecide::criteria::DecisionReport {
    decide_main(s, mode, &B3Options::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn modes_agree_and_criteria_only_save_work(seed in any::<u64>()) {
        let s = common::random_system(&mut rng(seed));
        let plain = decide(&s, Mode::Plain);
        let buch = decide(&s, Mode::Buchberger);
        let ext = decide(&s, Mode::Extended);
        prop_assert_eq!(plain.is_groebner(), buch.is_groebner());
        prop_assert_eq!(plain.is_groebner(), ext.is_groebner());
        let m = s.len();
        prop_assert_eq!(plain.counts.reductions_performed, m * m.saturating_sub(1) / 2);
        prop_assert!(buch.counts.reductions_performed <= plain.counts.reductions_performed);
        prop_assert!(ext.counts.reductions_performed <= buch.counts.reductions_performed);
        for r in [&plain, &buch, &ext] {
            prop_assert!(verify_report(&s, r).is_ok(), "{:?}", verify_report(&s, r));
        }
    }

    #[test]
    fn extended_without_rereduce_agrees(seed in any::<u64>()) {
        let s = common::random_system(&mut rng(seed));
        let opts = B3Options { rereduce: false, ..B3Options::default() };
        let r = decide_main(&s, Mode::Extended, &opts).unwrap();
        prop_assert_eq!(r.is_groebner(), decide_plain(&s).unwrap().is_groebner());
        prop_assert!(verify_report(&s, &r).is_ok());
    }

    #[test]
    fn verdict_ignores_polynomial_order(seed in any::<u64>(), shift in 0usize..4) {
        let s = common::random_system(&mut rng(seed));
        let m = s.len();
        let order: Vec<usize> = (0..m).map(|k| (k + shift) % m).rev().collect();
        let t = s.subsystem(&order);
        prop_assert_eq!(decide_plain(&s).unwrap().is_groebner(), decide_plain(&t).unwrap().is_groebner());
    }

    #[test]
    fn pham_like_shortcut_matches_plain(seed in any::<u64>(), m in 2usize..6, gb in any::<bool>()) {
        let g = generate_pham_like(&PhamConfig::new(m, seed, gb)).unwrap();
        let lts = g.system.leading_terms();
        let f = detect_pham_like(&lts).unwrap();
        prop_assert!(f.is_valid_for(&lts));
        let fast = decide_pham_like(&g.system).unwrap();
        prop_assert_eq!(fast.counts.reductions_performed, m - 1);
        prop_assert_eq!(fast.is_groebner(), decide_plain(&g.system).unwrap().is_groebner());
        prop_assert_eq!(fast.is_groebner(), gb);
        prop_assert!(verify_report(&g.system, &fast).is_ok());
    }

    #[test]
    fn pham_like_terms_pass_ec_in_any_rotation(seed in any::<u64>(), m in 2usize..6, shift in 0usize..6) {
        let g = generate_pham_like(&PhamConfig::new(m, seed, true)).unwrap();
        let lts = g.system.leading_terms();
        let rotated: Vec<Term> = (0..m).map(|k| lts[(k + shift) % m].clone()).collect();
        prop_assert!(extended_criterion(&rotated).is_pass());
        for i in 0..m {
            for j in i + 1..m {
                prop_assert!(!lts[i].is_coprime(&lts[j]));
            }
        }
    }
}
