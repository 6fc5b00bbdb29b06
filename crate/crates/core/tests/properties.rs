use icsaead::aead::{aead_decrypt, aead_encrypt};
use icsaead::envelope::{open, seal, SealedMessage, OVERHEAD};
use icsaead::harness::{budget_fraction, filter_invalid, summarize, BudgetSpec, Phase, PhaseSample};
use icsaead::{
    chacha20_block, chacha20_xor, poly1305_key_gen, poly1305_mac, BlockCounter32, CounterEntropy, Error, Key256,
    Nonce96, Tag128,
};
use num_bigint::BigUint;
use proptest::prelude::*;
use std::time::Duration;

/// Textbook Poly1305 on arbitrary-precision integers.
fn poly1305_bignum(key: &[u8; 32], msg: &[u8]) -> [u8; 16] {
    let mut r_bytes = [0u8; 16];
    r_bytes.copy_from_slice(&key[..16]);
    for i in [3, 7, 11, 15] {
        r_bytes[i] &= 15;
    }
    for i in [4, 8, 12] {
        r_bytes[i] &= 252;
    }
    let r = BigUint::from_bytes_le(&r_bytes);
    let s = BigUint::from_bytes_le(&key[16..]);
    let p = (BigUint::from(1u8) << 130u32) - BigUint::from(5u8);
    let mut acc = BigUint::from(0u8);
    for chunk in msg.chunks(16) {
        let mut block = chunk.to_vec();
        block.push(1);
        acc = ((acc + BigUint::from_bytes_le(&block)) * &r) % &p;
    }
    let tag = (acc + s) % (BigUint::from(1u8) << 128u32);
    let mut out = [0u8; 16];
    let bytes = tag.to_bytes_le();
    out[..bytes.len()].copy_from_slice(&bytes);
    out
}

fn arb_key() -> impl Strategy<Value = Key256> {
    any::<[u8; 32]>().prop_map(Key256::new)
}

fn arb_nonce() -> impl Strategy<Value = Nonce96> {
    any::<[u8; 12]>().prop_map(Nonce96::new)
}

const EDGE_LENGTHS: [usize; 12] = [0, 1, 15, 16, 17, 63, 64, 65, 28, 56, 112, 224];

fn arb_len() -> impl Strategy<Value = usize> {
    prop_oneof![prop::sample::select(EDGE_LENGTHS.to_vec()), 0usize..600]
}

fn arb_bytes() -> impl Strategy<Value = Vec<u8>> {
    arb_len().prop_flat_map(|n| prop::collection::vec(any::<u8>(), n))
}

#[test]
fn poly1305_edge_values_match_bignum() {
    // r = 0 with s all ones, and limb-boundary messages near 2^130 - 5.
    let cases: [([u8; 32], Vec<u8>); 3] = [
        ([0xff; 32], vec![0xff; 64]),
        ({
            let mut k = [0u8; 32];
            k[0] = 2;
            k
        }, vec![0xfb, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff]),
        ([0; 32].map(|_: u8| 0x0f), vec![0xff; 17]),
    ];
    for (k, m) in cases {
        assert_eq!(poly1305_mac(&k, &m).unwrap().as_bytes(), &poly1305_bignum(&k, &m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn poly1305_matches_bignum(key in any::<[u8; 32]>(), msg in arb_bytes()) {
        prop_assert_eq!(*poly1305_mac(&key, &msg).unwrap().as_bytes(), poly1305_bignum(&key, &msg));
    }

    #[test]
    fn round_trip_and_length(key in arb_key(), nonce in arb_nonce(), pt in arb_bytes(), aad in arb_bytes()) {
        let (ct, tag) = aead_encrypt(&key, &nonce, &pt, &aad);
        prop_assert_eq!(ct.len(), pt.len());
        prop_assert_eq!(aead_decrypt(&key, &nonce, &ct, &tag, &aad).unwrap(), pt);
    }

    #[test]
    fn single_bit_flips_are_rejected(
        key in arb_key(), nonce in arb_nonce(), pt in arb_bytes(), aad in arb_bytes(),
        target in 0usize..4, pos in any::<prop::sample::Index>(), bit in 0u8..8,
    ) {
        let (mut ct, tag) = aead_encrypt(&key, &nonce, &pt, &aad);
        let mut tag = *tag.as_bytes();
        let mut nonce = *nonce.as_bytes();
        let mut aad = aad;
        let field: &mut [u8] = match target {
            0 if !ct.is_empty() => &mut ct,
            2 => &mut nonce,
            3 if !aad.is_empty() => &mut aad,
            _ => &mut tag,
        };
        let i = pos.index(field.len());
        field[i] ^= 1 << bit;
        prop_assert_eq!(
            aead_decrypt(&key, &Nonce96::new(nonce), &ct, &Tag128::new(tag), &aad),
            Err(Error::AuthenticationFailed)
        );
    }

    #[test]
    fn xor_is_an_involution(key in arb_key(), nonce in arb_nonce(), c in any::<u32>(), m in arb_bytes()) {
        let c = BlockCounter32(c);
        prop_assert_eq!(chacha20_xor(&key, &nonce, c, &chacha20_xor(&key, &nonce, c, &m)), m);
    }

    #[test]
    fn keystream_split_at_block_boundary(
        key in arb_key(), nonce in arb_nonce(), c in 0u32..1_000_000, m in arb_bytes(), blocks in 0usize..10,
    ) {
        let p = (blocks * 64).min(m.len() / 64 * 64);
        let c = BlockCounter32(c);
        let mut joined = chacha20_xor(&key, &nonce, c, &m[..p]);
        joined.extend(chacha20_xor(&key, &nonce, c.wrapping_add((p / 64) as u32), &m[p..]));
        prop_assert_eq!(joined, chacha20_xor(&key, &nonce, c, &m));
    }

    #[test]
    fn key_gen_is_block_prefix(key in arb_key(), nonce in arb_nonce()) {
        let block = chacha20_block(&key, BlockCounter32(0), &nonce);
        prop_assert_eq!(&poly1305_key_gen(&key, &nonce)[..], &block.as_bytes()[..32]);
    }

    #[test]
    fn sealed_size_and_round_trip(key in arb_key(), p in arb_bytes(), start in any::<u64>()) {
        let sealed = seal(&key, &p, &mut CounterEntropy::starting_at(start as u128)).unwrap();
        prop_assert_eq!(sealed.len(), p.len() + OVERHEAD);
        prop_assert_eq!(open(&key, &sealed).unwrap(), p);
    }

    #[test]
    fn framing_is_total(buf in prop::collection::vec(any::<u8>(), 0..200)) {
        match SealedMessage::parse(&buf) {
            Ok(m) => {
                prop_assert!(buf.len() >= 28);
                prop_assert_eq!(m.serialize(), buf);
            }
            Err(e) => {
                prop_assert!(buf.len() < 28);
                prop_assert_eq!(e, Error::MalformedMessage { len: buf.len(), min: 28 });
            }
        }
    }

    #[test]
    fn wrong_key_fails(k1 in arb_key(), k2 in arb_key(), p in arb_bytes()) {
        prop_assume!(k1 != k2);
        let sealed = seal(&k1, &p, &mut CounterEntropy::default()).unwrap();
        prop_assert_eq!(open(&k2, &sealed), Err(Error::AuthenticationFailed));
    }

    #[test]
    fn budget_fraction_inverts(d in 1.0f64..1e10, limit_ns in 1u64..10_000_000_000) {
        let b = BudgetSpec::new("x", Duration::from_nanos(limit_ns)).unwrap();
        let back = budget_fraction(d, &b) * limit_ns as f64 / 100.0;
        // two roundings each way
        prop_assert!((back - d).abs() <= 2.0 * f64::EPSILON * d, "{back} vs {d}");
    }

    #[test]
    fn summary_invariants(raw in prop::collection::vec((-5i64..1000, 0i64..1000, 0i64..1000), 1..300)) {
        let samples: Vec<PhaseSample> = raw
            .iter()
            .map(|&(r, e, d)| PhaseSample { random_ns: r, encrypt_ns: e, decrypt_ns: d, functional_ns: r.max(0) + e + d })
            .collect();
        let (valid, dropped) = filter_invalid(&samples);
        prop_assert_eq!(valid.len() + dropped, samples.len());
        prop_assert!(valid.iter().all(|s| s.functional_ns >= s.random_ns));
        match summarize(&valid, dropped) {
            Ok(s) => {
                prop_assert_eq!(s.n_valid + s.n_dropped, s.n_total);
                for phase in Phase::ALL {
                    let st = s.phase(phase);
                    prop_assert!(st.p5_ns <= st.p95_ns);
                    prop_assert!(st.min_ns <= st.p5_ns && st.p95_ns <= st.max_ns);
                    prop_assert!(st.min_ns as f64 <= st.mean_ns && st.mean_ns <= st.max_ns as f64);
                }
                prop_assert_eq!(summarize(&valid, dropped).unwrap(), s);
            }
            Err(e) => {
                prop_assert!(valid.is_empty());
                prop_assert_eq!(e, Error::EmptySampleSet);
            }
        }
    }
}

#[test]
fn distinct_nonces_give_distinct_one_time_keys() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x1c5);
    let key = Key256::new(rng.random());
    let mut seen = std::collections::HashSet::new();
    for _ in 0..20_000 {
        let n: [u8; 12] = rng.random();
        seen.insert((n, poly1305_key_gen(&key, &Nonce96::new(n))));
    }
    let keys: std::collections::HashSet<_> = seen.iter().map(|(_, k)| *k).collect();
    let nonces: std::collections::HashSet<_> = seen.iter().map(|(n, _)| *n).collect();
    assert_eq!(keys.len(), nonces.len());
}

#[test]
fn one_byte_message_changes_change_the_tag() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for _ in 0..5_000 {
        let key: [u8; 32] = rng.random();
        let len = rng.random_range(1..100);
        let msg: Vec<u8> = (0..len).map(|_| rng.random()).collect();
        let mut other = msg.clone();
        let i = rng.random_range(0..len);
        other[i] = other[i].wrapping_add(rng.random_range(1..=255));
        assert_ne!(poly1305_mac(&key, &msg).unwrap(), poly1305_mac(&key, &other).unwrap());
    }
}
