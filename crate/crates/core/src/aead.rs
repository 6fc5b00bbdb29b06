//! The combined ChaCha20-Poly1305 construction.
//!
//! The Poly1305 one-time key is the first half of keystream block 0; the
//! payload is encrypted from block 1. The tag covers
//! `aad || pad16 || ciphertext || pad16 || le64(|aad|) || le64(|ciphertext|)`.

use crate::chacha20::{chacha20_block, chacha20_xor_in_place};
use crate::error::{Error, Result};
use crate::poly1305::{tags_equal, Poly1305};
use crate::types::{BlockCounter32, Key256, Nonce96, Tag128};

pub const TAG_LEN: usize = Tag128::LEN;

const PAYLOAD_COUNTER: BlockCounter32 = BlockCounter32(1);

pub fn poly1305_key_gen(key: &Key256, nonce: &Nonce96) -> [u8; 32] {
    let block = chacha20_block(key, BlockCounter32(0), nonce);
    let mut otk = [0u8; 32];
    otk.copy_from_slice(&block.as_bytes()[..32]);
    otk
}

fn compute_tag(key: &Key256, nonce: &Nonce96, aad: &[u8], ciphertext: &[u8]) -> Tag128 {
    let mut mac = Poly1305::new(&poly1305_key_gen(key, nonce));
    mac.update(aad);
    mac.pad_to_block();
    mac.update(ciphertext);
    mac.pad_to_block();
    let mut lengths = [0u8; 16];
    lengths[..8].copy_from_slice(&(aad.len() as u64).to_le_bytes());
    lengths[8..].copy_from_slice(&(ciphertext.len() as u64).to_le_bytes());
    mac.update(&lengths);
    mac.finalize()
}

/// Encrypts `buffer` in place and returns the tag.
pub fn aead_encrypt_in_place(key: &Key256, nonce: &Nonce96, buffer: &mut [u8], aad: &[u8]) -> Tag128 {
    chacha20_xor_in_place(key, nonce, PAYLOAD_COUNTER, buffer);
    compute_tag(key, nonce, aad, buffer)
}

/// Verifies the tag and, only if it matches, decrypts `buffer` in place.
/// On failure the buffer is left as ciphertext.
pub fn aead_decrypt_in_place(
    key: &Key256,
    nonce: &Nonce96,
    buffer: &mut [u8],
    tag: &Tag128,
    aad: &[u8],
) -> Result<()> {
    let expected = compute_tag(key, nonce, aad, buffer);
    if !tags_equal(&expected, tag) {
        return Err(Error::AuthenticationFailed);
    }
    chacha20_xor_in_place(key, nonce, PAYLOAD_COUNTER, buffer);
    Ok(())
}

pub fn aead_encrypt(key: &Key256, nonce: &Nonce96, plaintext: &[u8], aad: &[u8]) -> (Vec<u8>, Tag128) {
    let mut ct = plaintext.to_vec();
    let tag = aead_encrypt_in_place(key, nonce, &mut ct, aad);
    (ct, tag)
}

pub fn aead_decrypt(
    key: &Key256,
    nonce: &Nonce96,
    ciphertext: &[u8],
    tag: &Tag128,
    aad: &[u8],
) -> Result<Vec<u8>> {
    let mut pt = ciphertext.to_vec();
    aead_decrypt_in_place(key, nonce, &mut pt, tag, aad)?;
    Ok(pt)
}
