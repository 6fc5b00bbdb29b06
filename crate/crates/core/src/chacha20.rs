//! The ChaCha20 stream cipher (IETF variant: 96-bit nonce, 32-bit counter).

use crate::error::{Error, Result};
use crate::types::{BlockCounter32, Key256, KeystreamBlock, Nonce96};

/// "expand 32-byte k"
pub const CONSTANTS: [u32; 4] = [0x6170_7865, 0x3320_646e, 0x7962_2d32, 0x6b20_6574];

pub const BLOCK_LEN: usize = 64;

const DOUBLE_ROUNDS: usize = 10;

/// The 16-word ChaCha working state.
///
/// Layout: words 0..4 constants, 4..12 key, 12 counter, 13..16 nonce, all
/// loaded little-endian.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ChaChaState {
    pub words: [u32; 16],
}

#[inline(always)]
fn qr(s: &mut [u32; 16], a: usize, b: usize, c: usize, d: usize) {
    s[a] = s[a].wrapping_add(s[b]);
    s[d] = (s[d] ^ s[a]).rotate_left(16);
    s[c] = s[c].wrapping_add(s[d]);
    s[b] = (s[b] ^ s[c]).rotate_left(12);
    s[a] = s[a].wrapping_add(s[b]);
    s[d] = (s[d] ^ s[a]).rotate_left(8);
    s[c] = s[c].wrapping_add(s[d]);
    s[b] = (s[b] ^ s[c]).rotate_left(7);
}

impl ChaChaState {
    pub const fn from_words(words: [u32; 16]) -> Self {
        Self { words }
    }

    pub fn new(key: &Key256, counter: BlockCounter32, nonce: &Nonce96) -> Self {
        let mut words = [0u32; 16];
        words[..4].copy_from_slice(&CONSTANTS);
        for (w, chunk) in words[4..12].iter_mut().zip(key.as_bytes().chunks_exact(4)) {
            *w = u32::from_le_bytes(chunk.try_into().unwrap());
        }
        words[12] = counter.0;
        for (w, chunk) in words[13..].iter_mut().zip(nonce.as_bytes().chunks_exact(4)) {
            *w = u32::from_le_bytes(chunk.try_into().unwrap());
        }
        Self { words }
    }

    /// Applies one ARX quarter round to the words at `a`, `b`, `c`, `d`.
    pub fn quarter_round(&mut self, a: usize, b: usize, c: usize, d: usize) -> Result<()> {
        let idx = [a, b, c, d];
        let distinct = (0..4).all(|i| (i + 1..4).all(|j| idx[i] != idx[j]));
        if !distinct || idx.iter().any(|&i| i >= 16) {
            return Err(Error::InvalidIndices(idx));
        }
        qr(&mut self.words, a, b, c, d);
        Ok(())
    }

    /// Column round followed by diagonal round.
    #[inline(always)]
    pub fn double_round(&mut self) {
        let s = &mut self.words;
        qr(s, 0, 4, 8, 12);
        qr(s, 1, 5, 9, 13);
        qr(s, 2, 6, 10, 14);
        qr(s, 3, 7, 11, 15);
        qr(s, 0, 5, 10, 15);
        qr(s, 1, 6, 11, 12);
        qr(s, 2, 7, 8, 13);
        qr(s, 3, 4, 9, 14);
    }

    /// Runs the 20 rounds, adds the input state back in and serializes
    /// little-endian.
    pub fn keystream(&self) -> KeystreamBlock {
        let mut working = *self;
        for _ in 0..DOUBLE_ROUNDS {
            working.double_round();
        }
        let mut out = [0u8; BLOCK_LEN];
        for (i, chunk) in out.chunks_exact_mut(4).enumerate() {
            chunk.copy_from_slice(&working.words[i].wrapping_add(self.words[i]).to_le_bytes());
        }
        KeystreamBlock::new(out)
    }
}

/// Free-function form of [`ChaChaState::quarter_round`].
pub fn quarter_round(
    mut state: ChaChaState,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
) -> Result<ChaChaState> {
    state.quarter_round(a, b, c, d)?;
    Ok(state)
}

pub fn chacha20_block(key: &Key256, counter: BlockCounter32, nonce: &Nonce96) -> KeystreamBlock {
    ChaChaState::new(key, counter, nonce).keystream()
}

/// XORs `data` in place with the keystream starting at block `initial_counter`.
pub fn chacha20_xor_in_place(
    key: &Key256,
    nonce: &Nonce96,
    initial_counter: BlockCounter32,
    data: &mut [u8],
) {
    let mut state = ChaChaState::new(key, initial_counter, nonce);
    for chunk in data.chunks_mut(BLOCK_LEN) {
        let ks = state.keystream();
        for (d, k) in chunk.iter_mut().zip(ks.as_bytes()) {
            *d ^= k;
        }
        state.words[12] = state.words[12].wrapping_add(1);
    }
}

pub fn chacha20_xor(
    key: &Key256,
    nonce: &Nonce96,
    initial_counter: BlockCounter32,
    data: &[u8],
) -> Vec<u8> {
    let mut out = data.to_vec();
    chacha20_xor_in_place(key, nonce, initial_counter, &mut out);
    out
}
