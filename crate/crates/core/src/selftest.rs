//! Embedded known-answer vectors, run before any measurement.

use crate::aead::{aead_decrypt, aead_encrypt, poly1305_key_gen};
use crate::chacha20::{chacha20_block, quarter_round, ChaChaState};
use crate::envelope::{open, seal, CounterEntropy};
use crate::error::{Error, Result};
use crate::poly1305::poly1305_mac;
use crate::types::{BlockCounter32, Key256, KeystreamBlock, Nonce96, Tag128};

pub type BlockFn = fn(&Key256, BlockCounter32, &Nonce96) -> KeystreamBlock;
pub type MacFn = fn(&[u8], &[u8]) -> Result<Tag128>;
pub type QuarterRoundFn = fn(ChaChaState, usize, usize, usize, usize) -> Result<ChaChaState>;

/// The primitives under test. Swappable so a deliberately broken primitive
/// can be shown to fail the suite.
#[derive(Clone, Copy)]
pub struct Primitives {
    pub quarter_round: QuarterRoundFn,
    pub block: BlockFn,
    pub mac: MacFn,
}

impl Primitives {
    pub fn reference() -> Self {
        Self { quarter_round, block: chacha20_block, mac: poly1305_mac }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorResult {
    pub name: &'static str,
    /// Offset of the first differing byte, `None` on a match.
    pub first_mismatch: Option<usize>,
    pub note: Option<String>,
}

impl VectorResult {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none() && self.note.is_none()
    }
}

fn compare(name: &'static str, got: &[u8], want: &[u8]) -> VectorResult {
    let first_mismatch = got
        .iter()
        .zip(want)
        .position(|(a, b)| a != b)
        .or_else(|| (got.len() != want.len()).then(|| got.len().min(want.len())));
    VectorResult { name, first_mismatch, note: None }
}

fn unhex(s: &str) -> Vec<u8> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    (0..s.len())
        .step_by(2)
        .map(|i| u8::from_str_radix(&s[i..i + 2], 16).expect("valid hex vector"))
        .collect()
}

fn words_le(words: &[u32]) -> Vec<u8> {
    words.iter().flat_map(|w| w.to_le_bytes()).collect()
}

const QR_INPUT: [u32; 16] = [
    0x879531e0, 0xc5ecf37d, 0x516461b1, 0xc9a62f8a, 0x44c20ef3, 0x3390af7f, 0xd9fc690b, 0x2a5f714c,
    0x53372767, 0xb00a5631, 0x974c541a, 0x359e9963, 0x5c971061, 0x3d631689, 0x2098d9d6, 0x91dbd320,
];
const QR_OUTPUT: [u32; 16] = [
    0x879531e0, 0xc5ecf37d, 0xbdb886dc, 0xc9a62f8a, 0x44c20ef3, 0x3390af7f, 0xd9fc690b, 0xcfacafd2,
    0xe46bea80, 0xb00a5631, 0x974c541a, 0x359e9963, 0x5c971061, 0xccc07c79, 0x2098d9d6, 0x91dbd320,
];

const BLOCK_ZERO: &str = "76b8e0ada0f13d90405d6ae55386bd28bdd219b8a08ded1aa836efcc8b770dc7\
                          da41597c5157488d7724e03fb8d84a376a43b8f41518a11cc387b669b2ee6586";
const BLOCK_COUNTER1: &str = "10f1e7e4d13b5915500fdd1fa32071c4c7d1f4c733c068030422aa9ac3d46c4e\
                              d2826446079faa0914c2d705d98b02a2b5129cd1de164eb9cbd083e8a2503c4e";
const MAC_KEY: &str = "85d6be7857556d337f4452fe42d506a80103808afb0db2fd4abff6af4149f51b";
const MAC_TAG: &str = "a8061dc1305136c6c22b8baf0c0127a9";
const OTK: &str = "8ad5a08b905f81cc815040274ab29471a833b637e3fd0da508dbb8e2fdd1a646";

pub const AEAD_PLAINTEXT: &[u8] = b"Ladies and Gentlemen of the class of '99: If I could offer you only one \
tip for the future, sunscreen would be it.";
pub const AEAD_AAD: &str = "50515253c0c1c2c3c4c5c6c7";
pub const AEAD_NONCE: &str = "070000004041424344454647";
pub const AEAD_CIPHERTEXT: &str = "d31a8d34648e60db7b86afbc53ef7ec2a4aded51296e08fea9e2b5a736ee62d6\
                                   3dbea45e8ca9671282fafb69da92728b1a71de0a9e060b2905d6a5b67ecd3b36\
                                   92ddbd7f2d778b8c9803aee328091b58fab324e4fad675945585808b4831d7bc\
                                   3ff4def08e4b7a9de576d26586cec64b6116";
pub const AEAD_TAG: &str = "1ae10b594f09e26a7e902ecbd0600691";

/// Key bytes 0x80..=0x9f, shared by the key-generation and AEAD vectors.
pub fn aead_vector_key() -> Key256 {
    Key256::new(core::array::from_fn(|i| 0x80 + i as u8))
}

pub fn run_selftest() -> Vec<VectorResult> {
    run_selftest_with(&Primitives::reference())
}

pub fn run_selftest_with(p: &Primitives) -> Vec<VectorResult> {
    let mut results = Vec::new();

    let qr = (p.quarter_round)(ChaChaState::from_words(QR_INPUT), 2, 7, 8, 13)
        .map(|s| words_le(&s.words))
        .unwrap_or_default();
    results.push(compare("chacha20 quarter round", &qr, &words_le(&QR_OUTPUT)));

    let zero = (p.block)(&Key256::new([0; 32]), BlockCounter32(0), &Nonce96::new([0; 12]));
    results.push(compare("chacha20 block, zero key", zero.as_bytes(), &unhex(BLOCK_ZERO)));

    let key = Key256::new(core::array::from_fn(|i| i as u8));
    let nonce = Nonce96::new([0, 0, 0, 0x09, 0, 0, 0, 0x4a, 0, 0, 0, 0]);
    let b1 = (p.block)(&key, BlockCounter32(1), &nonce);
    results.push(compare("chacha20 block, counter 1", b1.as_bytes(), &unhex(BLOCK_COUNTER1)));

    let tag = (p.mac)(&unhex(MAC_KEY), b"Cryptographic Forum Research Group")
        .map(|t| t.as_bytes().to_vec())
        .unwrap_or_default();
    results.push(compare("poly1305 mac", &tag, &unhex(MAC_TAG)));

    let otk_nonce = Nonce96::new([0, 0, 0, 0, 0, 1, 2, 3, 4, 5, 6, 7]);
    results.push(compare(
        "poly1305 key generation",
        &poly1305_key_gen(&aead_vector_key(), &otk_nonce),
        &unhex(OTK),
    ));

    let key = aead_vector_key();
    let nonce = Nonce96::from_slice(&unhex(AEAD_NONCE)).unwrap();
    let aad = unhex(AEAD_AAD);
    let (ct, tag) = aead_encrypt(&key, &nonce, AEAD_PLAINTEXT, &aad);
    let mut sealed = ct.clone();
    sealed.extend_from_slice(tag.as_bytes());
    let mut want = unhex(AEAD_CIPHERTEXT);
    want.extend_from_slice(&unhex(AEAD_TAG));
    results.push(compare("aead encrypt", &sealed, &want));

    let want_tag = Tag128::from_slice(&unhex(AEAD_TAG)).unwrap();
    let mut r = match aead_decrypt(&key, &nonce, &unhex(AEAD_CIPHERTEXT), &want_tag, &aad) {
        Ok(pt) => compare("aead decrypt", &pt, AEAD_PLAINTEXT),
        Err(e) => VectorResult { name: "aead decrypt", first_mismatch: None, note: Some(e.to_string()) },
    };
    let mut bad = unhex(AEAD_CIPHERTEXT);
    bad[0] ^= 1;
    if aead_decrypt(&key, &nonce, &bad, &want_tag, &aad) != Err(Error::AuthenticationFailed) {
        r.note = Some("tampered ciphertext was accepted".into());
    }
    results.push(r);

    let mut entropy = CounterEntropy::default();
    let key = Key256::new([0x5c; 32]);
    let mut env = VectorResult { name: "envelope round trip", first_mismatch: None, note: None };
    for len in [0usize, 1, 28, 56, 64, 112, 224] {
        let payload: Vec<u8> = (0..len).map(|i| i as u8).collect();
        let outcome = seal(&key, &payload, &mut entropy).and_then(|s| {
            if s.len() != len + 28 {
                return Err(Error::InvalidLength { what: "sealed message", expected: len + 28, actual: s.len() });
            }
            open(&key, &s)
        });
        match outcome {
            Ok(pt) if pt == payload => {}
            Ok(pt) => {
                env = compare("envelope round trip", &pt, &payload);
                break;
            }
            Err(e) => {
                env.note = Some(format!("{len} B payload: {e}"));
                break;
            }
        }
    }
    results.push(env);

    results
}
