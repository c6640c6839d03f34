mod common;

use common::closed_form_f;
use proptest::prelude::*;
use smdc_core::codec::{
    key_bytes_needed, smdc_decode, smdc_encode, smdca_decode, smdca_encode, ssmdc_decode, ssmdc_encode, ShareBundle,
    SourceMessages,
};
use smdc_core::cover::{chain_from_text, chain_to_text, verify_chain, yz_chain};
use smdc_core::entropy::{check_han, check_sliding_window, random_pmf, JointPMF};
use smdc_core::erasure::{ramp_decode, ramp_encode, rs_decode, rs_encode, CodeSpec, Gf256};
use smdc_core::rational::{int, ratio};
use smdc_core::region::{f_profile, smdc_member, EntropyProfile, RateTuple, WeightVector};
use smdc_core::Rational;

fn rational() -> impl Strategy<Value = Rational> {
    (0i64..=20, 1i64..=6).prop_map(|(p, q)| ratio(p, q))
}

fn lambda(max_len: usize) -> impl Strategy<Value = WeightVector> {
    prop::collection::vec(rational(), 1..=max_len).prop_map(|w| WeightVector::new(w).unwrap())
}

fn sources(count: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Vec<u8>>> {
    prop::collection::vec(prop::collection::vec(any::<u8>(), 0..20), count)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn profile_matches_closed_form_and_is_monotone(l in lambda(5)) {
        let p = f_profile(&l).unwrap();
        for (i, f) in p.iter().enumerate() {
            prop_assert_eq!(f, &closed_form_f(l.as_slice(), i + 1));
        }
        prop_assert!(p.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn profile_is_positively_homogeneous(l in lambda(5), c in rational()) {
        let scaled: Vec<Rational> = f_profile(&l).unwrap().iter().map(|f| f * &c).collect();
        prop_assert_eq!(f_profile(&l.scaled(&c)).unwrap(), scaled);
    }

    #[test]
    fn membership_is_monotone_in_rates(
        rates in prop::collection::vec(rational(), 1..=4),
        bump in rational(),
    ) {
        let h = EntropyProfile::new((1..=rates.len()).map(|a| ratio(a as i64, 2)).collect()).unwrap();
        let inside = smdc_member(&RateTuple::new(rates.clone()).unwrap(), &h).unwrap().member;
        let larger: Vec<Rational> = rates.iter().map(|r| r + &bump).collect();
        if inside {
            prop_assert!(smdc_member(&RateTuple::new(larger).unwrap(), &h).unwrap().member);
        }
    }

    #[test]
    fn chains_verify_and_survive_text(l in lambda(5)) {
        prop_assume!(l.len() >= 2);
        let chain = yz_chain(&l).unwrap();
        prop_assert!(verify_chain(&chain).unwrap().passed());
        let back = chain_from_text(&chain_to_text(&chain)).unwrap();
        prop_assert_eq!(chain_to_text(&back), chain_to_text(&chain));
    }

    #[test]
    fn mds_round_trip(data in prop::collection::vec(any::<u8>(), 1..6), extra in 0usize..4, pick in any::<u64>()) {
        let k = data.len();
        let n = k + extra;
        let spec = CodeSpec::<Gf256>::mds(n, k).unwrap();
        let word: Vec<Gf256> = data.iter().map(|&b| Gf256::from(b)).collect();
        let shares = rs_encode(&word, &spec).unwrap();
        let mut positions: Vec<usize> = (1..=n).collect();
        positions.rotate_left((pick % n as u64) as usize);
        let picked: Vec<(usize, Gf256)> = positions[..k].iter().map(|&p| (p, shares[p - 1])).collect();
        prop_assert_eq!(rs_decode(&picked, &spec).unwrap(), word);
    }

    #[test]
    fn ramp_round_trip(msg in prop::collection::vec(any::<u8>(), 1..4), keys in prop::collection::vec(any::<u8>(), 0..3), extra in 0usize..3) {
        let (alpha, n) = (msg.len(), keys.len());
        let l = alpha + n + extra;
        let spec = CodeSpec::<Gf256>::ramp(l, n, alpha).unwrap();
        let m: Vec<Gf256> = msg.iter().map(|&b| b.into()).collect();
        let k: Vec<Gf256> = keys.iter().map(|&b| b.into()).collect();
        let shares = ramp_encode(&m, &k, &spec).unwrap();
        let picked: Vec<(usize, Gf256)> = (extra + 1..=l).map(|p| (p, shares[p - 1])).collect();
        prop_assert_eq!(ramp_decode(&picked, &spec).unwrap(), m);
    }

    #[test]
    fn smdc_round_trip_through_bytes(payloads in sources(1..=5), drop in any::<u64>()) {
        let src = SourceMessages::new(payloads);
        let bundles = smdc_encode(&src).unwrap();
        for b in &bundles {
            prop_assert_eq!(&ShareBundle::from_bytes(&b.to_bytes()).unwrap(), b);
        }
        let keep = 1 + (drop % bundles.len() as u64) as usize;
        let got = smdc_decode(&bundles[bundles.len() - keep..]).unwrap();
        prop_assert_eq!(got, src.payloads[..keep].to_vec());
    }

    #[test]
    fn smdca_round_trip(payloads in sources(1..=4), r0 in 0u64..80) {
        let src = SourceMessages::new(payloads);
        let out = smdca_encode(&src, r0).unwrap();
        let got = smdca_decode(&out.bundle0, &out.bundles[..1]).unwrap();
        prop_assert_eq!(got, src.payloads[..1].to_vec());
        let all = smdca_decode(&out.bundle0, &out.bundles).unwrap();
        prop_assert_eq!(all, src.payloads.clone());
    }

    #[test]
    fn ssmdc_round_trip(payloads in sources(1..=3), n in 0usize..3, key_seed in any::<u8>()) {
        let src = SourceMessages::new(payloads);
        let need = key_bytes_needed(&src.lengths(), n) as usize;
        let keys: Vec<u8> = (0..need).map(|i| (i as u8).wrapping_mul(31) ^ key_seed).collect();
        let bundles = ssmdc_encode(&src, n, &keys).unwrap();
        prop_assert_eq!(bundles.len(), src.len() + n);
        prop_assert_eq!(ssmdc_decode(&bundles).unwrap(), src.payloads.clone());
        prop_assert!(ssmdc_decode(&bundles[..n]).is_err());
    }

    #[test]
    fn han_and_windows_hold(sizes in prop::collection::vec(2usize..=3, 2..=4), seed in any::<u64>()) {
        let pmf = random_pmf(&sizes, seed).unwrap();
        for alpha in 2..=sizes.len() {
            prop_assert!(check_han(&pmf, alpha).unwrap().holds);
            prop_assert!(check_sliding_window(&pmf, alpha).unwrap().holds);
        }
    }

    #[test]
    fn pmf_text_round_trip(sizes in prop::collection::vec(2usize..=3, 1..=3), seed in any::<u64>()) {
        let pmf = random_pmf(&sizes, seed).unwrap();
        let back = JointPMF::parse_text(&pmf.to_text()).unwrap();
        prop_assert_eq!(back.probabilities(), pmf.probabilities());
        prop_assert_eq!(back.probabilities().iter().sum::<Rational>(), int(1));
    }
}
