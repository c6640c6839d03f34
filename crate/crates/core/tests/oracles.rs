mod common;

use common::*;
use itertools::Itertools;
use smdc_core::cover::{verify_chain, yz_chain};
use smdc_core::erasure::{
    is_perfectly_secret, ramp_decode, ramp_encode, rs_decode, rs_encode, CodeSpec, Field, Gf16, Gf256,
};
use smdc_core::lp::{self, LinearProgram, LpStatus, Sense};
use smdc_core::rational::{int, parse_list, ratio};
use smdc_core::region::{f_alpha, f_profile, smdc_member, smdca_member, ssmdc_member, RateTuple, WeightVector};
use smdc_core::Rational;

use rand::Rng;

fn w(text: &str) -> WeightVector {
    WeightVector::new(parse_list(text).unwrap()).unwrap()
}

#[test]
fn frozen_profiles_from_vertex_enumeration() {
    // Values computed once by `brute_force_f` and frozen here.
    let cases: [(&str, Vec<Rational>); 5] = [
        ("2,1,1", vec![int(4), int(2), int(1)]),
        ("5,1,1", vec![int(7), int(2), int(1)]),
        ("3,2,2,1", vec![int(8), int(4), ratio(5, 2), int(1)]),
        ("1,0,0,0", vec![int(1), int(0), int(0), int(0)]),
        ("1/2,1/3,1/6", vec![int(1), ratio(1, 2), ratio(1, 6)]),
    ];
    for (lambda, expected) in cases {
        let l = w(lambda);
        let brute: Vec<Rational> = (1..=l.len()).map(|a| brute_force_f(l.as_slice(), a)).collect();
        assert_eq!(brute, expected, "oracle drifted for {lambda}");
        assert_eq!(f_profile(&l).unwrap(), expected, "{lambda}");
    }
}

#[test]
fn packing_optimum_matches_vertex_enumeration() {
    let mut rng = rng(101);
    for _ in 0..60 {
        let l = rng.gen_range(1..=4);
        let lambda = random_lambda(&mut rng, l);
        for alpha in 1..=l {
            let lp = f_alpha(&lambda, alpha).unwrap().total;
            assert_eq!(lp, brute_force_f(lambda.as_slice(), alpha), "{lambda:?} α={alpha}");
            assert_eq!(lp, closed_form_f(lambda.as_slice(), alpha));
        }
    }
    let lambda = w("3,1,4,1,5");
    for alpha in 1..=5 {
        assert_eq!(f_alpha(&lambda, alpha).unwrap().total, brute_force_f(lambda.as_slice(), alpha));
    }
}

#[test]
fn simplex_matches_vertex_enumeration_on_random_packings() {
    let mut rng = rng(7);
    for _ in 0..80 {
        let rows = rng.gen_range(1..=3);
        let cols = rng.gen_range(1..=4);
        let a: Vec<Vec<Rational>> =
            (0..rows).map(|_| (0..cols).map(|_| random_rational(&mut rng, 5, 3)).collect()).collect();
        // A zero column makes the program unbounded; give each column mass.
        let a: Vec<Vec<Rational>> = a
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                row.into_iter().enumerate().map(|(j, x)| if i == j % rows { x + int(1) } else { x }).collect()
            })
            .collect();
        let cap: Vec<Rational> = (0..rows).map(|_| random_rational(&mut rng, 9, 4)).collect();
        let mut lp = LinearProgram::with_objective(vec![int(1); cols]);
        for (row, c) in a.iter().zip(&cap) {
            lp.add_constraint(row.clone(), Sense::Le, c.clone()).unwrap();
        }
        let sol = lp::solve_max(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!(lp.is_optimality_certificate(&sol.primal, &sol.dual));
        assert_eq!(sol.value, brute_force_packing_max(&a, &cap));
    }
}

#[test]
fn chain_levels_match_vertex_enumeration() {
    let mut rng = rng(55);
    for _ in 0..40 {
        let l = rng.gen_range(2..=4);
        let lambda = random_lambda(&mut rng, l);
        let chain = yz_chain(&lambda).unwrap();
        assert!(verify_chain(&chain).unwrap().passed());
        for alpha in 1..=l {
            assert_eq!(chain.level(alpha).total, brute_force_f(lambda.as_slice(), alpha));
        }
    }
}

#[test]
fn membership_witnesses_are_feasible() {
    let mut rng = rng(3);
    let mut seen = (0, 0);
    for _ in 0..120 {
        let l = rng.gen_range(1..=4);
        let h = random_entropies(&mut rng, l);
        let rates: Vec<Rational> = (0..l).map(|_| random_rational(&mut rng, 16, 4)).collect();
        let v = smdc_member(&RateTuple::new(rates.clone()).unwrap(), &h).unwrap();
        if let Some(wit) = &v.witness {
            seen.0 += 1;
            assert!(allocation_is_feasible(&wit.levels, false, &rates, None, h.as_slice()));
        } else {
            seen.1 += 1;
            let c = v.certificate.unwrap();
            let rhs: Rational = (1..=l).map(|a| closed_form_f(c.lambda.as_slice(), a) * &h.as_slice()[a - 1]).sum();
            assert_eq!(c.rhs, rhs);
            assert!(c.lhs < rhs);
        }

        let r0 = random_rational(&mut rng, 8, 2);
        let t = RateTuple::with_all_access(r0.clone(), rates.clone()).unwrap();
        if let Some(wit) = smdca_member(&t, &h).unwrap().witness {
            assert!(allocation_is_feasible(&wit.levels, true, &rates, Some(&r0), h.as_slice()));
        }

        if l >= 2 {
            let n = rng.gen_range(0..l);
            let hs = random_entropies(&mut rng, l - n);
            if let Some(wit) = ssmdc_member(&RateTuple::new(rates.clone()).unwrap(), &hs, n).unwrap().witness {
                assert!(allocation_is_feasible(&wit.levels, false, &rates, None, hs.as_slice()));
            }
        }
    }
    assert!(seen.0 > 10 && seen.1 > 10, "{seen:?}");
}

#[test]
fn mds_exhaustive_small_lengths() {
    let mut rng = rng(8);
    for n in 1..=8 {
        for k in 1..=n {
            let spec = CodeSpec::<Gf256>::mds(n, k).unwrap();
            let data: Vec<Gf256> = (0..k).map(|_| Gf256::from(rng.gen::<u8>())).collect();
            let shares = rs_encode(&data, &spec).unwrap();
            for subset in (1..=n).combinations(k) {
                let picked: Vec<(usize, Gf256)> = subset.iter().map(|&p| (p, shares[p - 1])).collect();
                assert_eq!(rs_decode(&picked, &spec).unwrap(), data, "n={n} k={k} {subset:?}");
            }
        }
    }
}

#[test]
fn ramp_recovers_from_any_threshold_set() {
    let mut rng = rng(9);
    for l in 1..=5 {
        for n in 0..l {
            for alpha in 1..=l - n {
                let spec = CodeSpec::<Gf256>::ramp(l, n, alpha).unwrap();
                let msg: Vec<Gf256> = (0..alpha).map(|_| Gf256::from(rng.gen::<u8>())).collect();
                let keys: Vec<Gf256> = (0..n).map(|_| Gf256::from(rng.gen::<u8>())).collect();
                let shares = ramp_encode(&msg, &keys, &spec).unwrap();
                for subset in (1..=l).combinations(n + alpha) {
                    let picked: Vec<(usize, Gf256)> = subset.iter().map(|&p| (p, shares[p - 1])).collect();
                    assert_eq!(ramp_decode(&picked, &spec).unwrap(), msg);
                }
            }
        }
    }
}

#[test]
fn gf16_ramp_secrecy_up_to_four_shares() {
    for l in 2..=4 {
        for n in 1..l {
            for alpha in 1..=(l - n).min(2) {
                let spec = CodeSpec::<Gf16>::ramp(l, n, alpha).unwrap();
                for size in 1..=n {
                    for a in (1..=l).combinations(size) {
                        assert!(is_perfectly_secret(&spec, &a).unwrap(), "L={l} N={n} α={alpha} A={a:?}");
                    }
                }
            }
        }
    }
    // N + 1 shares of a single-symbol secret determine it, so secrecy fails.
    let spec = CodeSpec::<Gf16>::ramp(3, 1, 1).unwrap();
    assert!(!is_perfectly_secret(&spec, &[1, 2]).unwrap());
    assert_eq!(Gf16::ORDER, 16);
}
