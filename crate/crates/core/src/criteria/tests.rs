use super::*;
use crate::parser::parse_system;

fn t(e: &[u32]) -> Term {
    Term::from_exponents(e.to_vec())
}

fn easy() -> SystemFile {
    parse_system(include_str!("../../data/easy-example.sys")).unwrap()
}

fn bad() -> SystemFile {
    parse_system(include_str!("../../data/bad-application.sys")).unwrap()
}

#[test]
fn gcd_criterion_examples() {
    assert!(gcd_criterion(&t(&[2, 0]), &t(&[0, 2])));
    assert!(!gcd_criterion(&t(&[1, 1, 0]), &t(&[2, 0, 1])));
    assert!(gcd_criterion(&t(&[0, 0]), &t(&[3, 1])));
}

#[test]
fn lcm_criterion_examples() {
    assert!(lcm_criterion(&t(&[2, 1]), &t(&[1, 1]), &t(&[1, 2])));
    // x0 x1, x0^3 x4, x0^2 x2
    assert!(!lcm_criterion(
        &t(&[1, 1, 0, 0, 0]),
        &t(&[3, 0, 0, 0, 1]),
        &t(&[2, 0, 1, 0, 0])
    ));
    let a = t(&[1, 2, 3]);
    assert!(lcm_criterion(&a, &a, &a));
}

fn t1(m: usize) -> Vec<Term> {
    (1..=m)
        .map(|k| {
            let mut e = vec![0; m + 1];
            e[0] = 1;
            e[k] = 1;
            Term::from_exponents(e)
        })
        .collect()
}

fn five(rows: &[[u32; 5]]) -> Vec<Term> {
    rows.iter().map(|r| t(r)).collect()
}

#[test]
fn extended_criterion_examples() {
    assert_eq!(extended_criterion(&t1(5)), EcOutcome::Pass);
    let t2 = five(&[[1, 1, 0, 0, 0], [2, 0, 1, 0, 0], [2, 0, 0, 1, 0], [3, 0, 0, 0, 1]]);
    assert_eq!(extended_criterion(&t2), EcOutcome::Pass);
    let t3 = five(&[[1, 1, 0, 0, 0], [2, 0, 1, 0, 0], [3, 0, 0, 1, 0], [2, 0, 0, 0, 1]]);
    assert_eq!(
        extended_criterion(&t3),
        EcOutcome::Fail(EcFailure::EVar(0))
    );
    let t3_perm = five(&[[1, 1, 0, 0, 0], [2, 0, 1, 0, 0], [2, 0, 0, 0, 1], [3, 0, 0, 1, 0]]);
    assert_eq!(extended_criterion(&t3_perm), EcOutcome::Pass);
}

#[test]
fn ediv_failure_reports_position() {
    // gcd(xy, xy) = xy does not divide x.
    let ts = vec![t(&[1, 1]), t(&[1, 0]), t(&[1, 1])];
    assert_eq!(extended_criterion(&ts), EcOutcome::Fail(EcFailure::EDiv(1)));
}

// Variables x1..x5, y, z.
fn no_permutation_list() -> Vec<Term> {
    vec![
        t(&[1, 0, 0, 0, 0, 1, 1]),
        t(&[0, 1, 0, 0, 0, 2, 1]),
        t(&[0, 0, 1, 0, 0, 1, 2]),
        t(&[0, 0, 0, 1, 0, 3, 2]),
        t(&[0, 0, 0, 0, 1, 1, 1]),
    ]
}

#[test]
fn permutation_search() {
    let t3 = five(&[[1, 1, 0, 0, 0], [2, 0, 1, 0, 0], [3, 0, 0, 1, 0], [2, 0, 0, 0, 1]]);
    assert_eq!(
        ec_permutation_exists(&t3, EC_PERMUTATION_CAP).unwrap(),
        Some(vec![0, 1, 3, 2])
    );
    assert_eq!(
        ec_permutation_exists(&no_permutation_list(), EC_PERMUTATION_CAP).unwrap(),
        None
    );
    let pair = vec![t(&[1, 0]), t(&[0, 1])];
    assert_eq!(
        ec_permutation_exists(&pair, EC_PERMUTATION_CAP).unwrap(),
        Some(vec![0, 1])
    );
    assert!(ec_permutation_exists(&t1(9), EC_PERMUTATION_CAP).is_err());
}

#[test]
fn exhaustive_permutation_oracle() {
    // Independent check: all 120 orders, built by nested loops.
    let ts = no_permutation_list();
    let mut passing = 0;
    let mut count = 0;
    for a in 0..5 {
        for b in 0..5 {
            for c in 0..5 {
                for d in 0..5 {
                    for e in 0..5 {
                        let idx = [a, b, c, d, e];
                        let mut s = idx.to_vec();
                        s.sort_unstable();
                        s.dedup();
                        if s.len() != 5 {
                            continue;
                        }
                        count += 1;
                        let image: Vec<Term> = idx.iter().map(|&k| ts[k].clone()).collect();
                        if extended_criterion(&image).is_pass() {
                            passing += 1;
                        }
                    }
                }
            }
        }
    }
    assert_eq!(count, 120);
    assert_eq!(passing, 0);
}

#[test]
fn b2_chain_search() {
    let lts = vec![t(&[2, 1]), t(&[1, 1]), t(&[1, 2])];
    let confirmed: BTreeSet<Pair> = [Pair::new(0, 1), Pair::new(1, 2)].into();
    assert_eq!(
        find_b2_chain(Pair::new(0, 2), &lts, &confirmed),
        Some(vec![0, 1, 2])
    );
    assert_eq!(find_b2_chain(Pair::new(0, 2), &lts, &BTreeSet::new()), None);

    let easy_lts = easy().leading_terms();
    let everything: BTreeSet<Pair> = pair_schedule(4).into_iter().collect();
    for pair in pair_schedule(4) {
        let chain = find_b2_chain(pair, &easy_lts, &everything);
        // Only the pair itself divides its lcm, and the pair is not an edge of itself.
        let without: BTreeSet<Pair> = everything.iter().copied().filter(|&p| p != pair).collect();
        assert_eq!(find_b2_chain(pair, &easy_lts, &without), None, "{pair}");
        assert_eq!(chain.map(|c| c.len()), Some(2));
    }
}

#[test]
fn easy_example_extended_uses_three_reductions() {
    let s = easy();
    let r = decide_main(&s, Mode::Extended, &B3Options::default()).unwrap();
    assert!(r.is_groebner());
    assert_eq!(r.counts.reductions_performed, 3);
    for (i, j) in [(0, 2), (1, 3), (0, 3)] {
        assert_eq!(r.disposition(Pair::new(i, j)).unwrap().rule, Rule::B3);
    }
    for (i, j) in [(0, 1), (1, 2), (2, 3)] {
        assert_eq!(r.disposition(Pair::new(i, j)).unwrap().rule, Rule::B0);
    }
    match &r.disposition(Pair::new(0, 3)).unwrap().certificate {
        Certificate::ExtendedChain { chain, .. } => assert_eq!(chain, &vec![0, 1, 2, 3]),
        other => panic!("unexpected certificate {other:?}"),
    }
    verify_report(&s, &r).unwrap();
}

#[test]
fn easy_example_buchberger_reduces_everything() {
    let s = easy();
    let r = decide_main(&s, Mode::Buchberger, &B3Options::default()).unwrap();
    assert!(r.is_groebner());
    assert_eq!(r.counts.reductions_performed, 6);
    verify_report(&s, &r).unwrap();
}

#[test]
fn bad_application_all_modes() {
    let s = bad();
    let yz = crate::parser::parse_polynomial(&s.context, "y*z").unwrap();
    for mode in [Mode::Plain, Mode::Buchberger, Mode::Extended] {
        let r = decide_main(&s, mode, &B3Options::default()).unwrap();
        assert!(!r.is_groebner(), "{mode}");
        let w = r.witness().unwrap();
        assert_eq!(w.pair, Pair::new(0, 2), "{mode}");
        assert_eq!(w.trace.remainder, yz, "{mode}");
        verify_report(&s, &r).unwrap();
    }
}

#[test]
fn bad_application_chain_rejected_over_subsystem() {
    let s = bad();
    let z2 = crate::parser::parse_polynomial(&s.context, "z^2").unwrap();
    match check_b3_chain(&s, &[0, 1, 2]).unwrap() {
        Err(B3Rejection::EdgesNotReduced(failed)) => {
            assert_eq!(failed, vec![(Pair::new(0, 1), z2)]);
        }
        other => panic!("chain should be rejected, got {other:?}"),
    }
    // The same edges reduce to zero over the whole system.
    assert!(crate::groebner::reduce_pair(&s, Pair::new(0, 1))
        .unwrap()
        .reduces_to_zero());
    let mut cache = TraceCache::new();
    let out = find_b3_chain(&s, Pair::new(0, 2), &mut cache, &B3Options::default(), 10).unwrap();
    assert!(out.disposition.is_none());
}

#[test]
fn easy_example_chain_accepted_over_subsystem() {
    let s = easy();
    let edges = check_b3_chain(&s, &[0, 1, 2, 3]).unwrap().unwrap();
    assert_eq!(edges.len(), 3);
    assert!(matches!(
        check_b3_chain(&s, &[0, 3]).unwrap(),
        Err(B3Rejection::Malformed)
    ));
}

#[test]
fn trace_cache_respects_reducer_sets() {
    let s = bad();
    let trace = crate::groebner::reduce_pair(&s, Pair::new(0, 1)).unwrap();
    assert_eq!(trace.reducers_used, BTreeSet::from([3]));
    let mut cache = TraceCache::new();
    assert!(cache.insert(Pair::new(0, 1), trace));
    assert!(cache.find(Pair::new(0, 1), &BTreeSet::from([0, 1, 2])).is_none());
    assert!(cache.find(Pair::new(0, 1), &BTreeSet::from([0, 1, 3])).is_some());
}

#[test]
fn tampered_certificates_fail_verification() {
    let s = easy();
    let mut r = decide_main(&s, Mode::Extended, &B3Options::default()).unwrap();
    let d = r
        .dispositions
        .iter_mut()
        .find(|d| d.pair == Pair::new(0, 3))
        .unwrap();
    d.certificate = Certificate::ExtendedChain {
        chain: vec![0, 2, 1, 3],
        edges: vec![],
    };
    assert!(verify_report(&s, &r).is_err());

    let mut r = decide_main(&s, Mode::Extended, &B3Options::default()).unwrap();
    r.dispositions.pop();
    assert!(matches!(
        verify_report(&s, &r),
        Err(VerifyError::MissingPair(_))
    ));
}
