//! Poly1305 one-time authenticator.
//!
//! Arithmetic modulo 2^130 - 5 on five 26-bit limbs with 64-bit products.

use crate::error::{Error, Result};
use crate::types::Tag128;

pub const KEY_LEN: usize = 32;
pub const BLOCK_LEN: usize = 16;

const MASK26: u32 = 0x03ff_ffff;

#[inline(always)]
fn le32(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

/// Incremental Poly1305 state.
#[derive(Clone)]
pub struct Poly1305 {
    r: [u32; 5],
    pad: [u32; 4],
    h: [u32; 5],
    buf: [u8; BLOCK_LEN],
    buf_len: usize,
}

impl Poly1305 {
    pub fn new(key: &[u8; KEY_LEN]) -> Self {
        // Clamping folded into the limb split.
        let r = [
            le32(key, 0) & 0x03ff_ffff,
            (le32(key, 3) >> 2) & 0x03ff_ff03,
            (le32(key, 6) >> 4) & 0x03ff_c0ff,
            (le32(key, 9) >> 6) & 0x03f0_3fff,
            (le32(key, 12) >> 8) & 0x000f_ffff,
        ];
        let pad = [le32(key, 16), le32(key, 20), le32(key, 24), le32(key, 28)];
        Self {
            r,
            pad,
            h: [0; 5],
            buf: [0; BLOCK_LEN],
            buf_len: 0,
        }
    }

    /// Absorbs one 16-byte chunk. `hibit` is 1 << 24 for a full chunk (the
    /// appended 0x01 byte) and 0 when the chunk has been padded by hand.
    fn block(&mut self, m: &[u8; BLOCK_LEN], hibit: u32) {
        let [r0, r1, r2, r3, r4] = self.r.map(u64::from);
        let (s1, s2, s3, s4) = (r1 * 5, r2 * 5, r3 * 5, r4 * 5);

        let h0 = u64::from(self.h[0] + (le32(m, 0) & MASK26));
        let h1 = u64::from(self.h[1] + ((le32(m, 3) >> 2) & MASK26));
        let h2 = u64::from(self.h[2] + ((le32(m, 6) >> 4) & MASK26));
        let h3 = u64::from(self.h[3] + ((le32(m, 9) >> 6) & MASK26));
        let h4 = u64::from(self.h[4] + ((le32(m, 12) >> 8) | hibit));

        let d0 = h0 * r0 + h1 * s4 + h2 * s3 + h3 * s2 + h4 * s1;
        let mut d1 = h0 * r1 + h1 * r0 + h2 * s4 + h3 * s3 + h4 * s2;
        let mut d2 = h0 * r2 + h1 * r1 + h2 * r0 + h3 * s4 + h4 * s3;
        let mut d3 = h0 * r3 + h1 * r2 + h2 * r1 + h3 * r0 + h4 * s4;
        let mut d4 = h0 * r4 + h1 * r3 + h2 * r2 + h3 * r1 + h4 * r0;

        let mut c = d0 >> 26;
        let mut h0 = d0 as u32 & MASK26;
        d1 += c;
        c = d1 >> 26;
        let mut h1 = d1 as u32 & MASK26;
        d2 += c;
        c = d2 >> 26;
        let h2 = d2 as u32 & MASK26;
        d3 += c;
        c = d3 >> 26;
        let h3 = d3 as u32 & MASK26;
        d4 += c;
        c = d4 >> 26;
        let h4 = d4 as u32 & MASK26;
        h0 += c as u32 * 5;
        let c = h0 >> 26;
        h0 &= MASK26;
        h1 += c;

        self.h = [h0, h1, h2, h3, h4];
    }

    pub fn update(&mut self, mut data: &[u8]) {
        if self.buf_len > 0 {
            let take = (BLOCK_LEN - self.buf_len).min(data.len());
            self.buf[self.buf_len..self.buf_len + take].copy_from_slice(&data[..take]);
            self.buf_len += take;
            data = &data[take..];
            if self.buf_len < BLOCK_LEN {
                return;
            }
            let buf = self.buf;
            self.block(&buf, 1 << 24);
            self.buf_len = 0;
        }
        let mut chunks = data.chunks_exact(BLOCK_LEN);
        for chunk in &mut chunks {
            self.block(chunk.try_into().unwrap(), 1 << 24);
        }
        let rest = chunks.remainder();
        self.buf[..rest.len()].copy_from_slice(rest);
        self.buf_len = rest.len();
    }

    /// Feeds zero bytes up to the next 16-byte boundary.
    pub fn pad_to_block(&mut self) {
        if self.buf_len > 0 {
            let zeros = [0u8; BLOCK_LEN];
            self.update(&zeros[..BLOCK_LEN - self.buf_len]);
        }
    }

    pub fn finalize(mut self) -> Tag128 {
        if self.buf_len > 0 {
            let mut last = [0u8; BLOCK_LEN];
            last[..self.buf_len].copy_from_slice(&self.buf[..self.buf_len]);
            last[self.buf_len] = 1;
            self.block(&last, 0);
        }

        let [mut h0, mut h1, mut h2, mut h3, mut h4] = self.h;

        // full carry
        let mut c = h1 >> 26;
        h1 &= MASK26;
        h2 += c;
        c = h2 >> 26;
        h2 &= MASK26;
        h3 += c;
        c = h3 >> 26;
        h3 &= MASK26;
        h4 += c;
        c = h4 >> 26;
        h4 &= MASK26;
        h0 += c * 5;
        c = h0 >> 26;
        h0 &= MASK26;
        h1 += c;

        // g = h + 5 - 2^130; keep g if it did not borrow.
        let mut g0 = h0.wrapping_add(5);
        c = g0 >> 26;
        g0 &= MASK26;
        let mut g1 = h1.wrapping_add(c);
        c = g1 >> 26;
        g1 &= MASK26;
        let mut g2 = h2.wrapping_add(c);
        c = g2 >> 26;
        g2 &= MASK26;
        let mut g3 = h3.wrapping_add(c);
        c = g3 >> 26;
        g3 &= MASK26;
        let g4 = h4.wrapping_add(c).wrapping_sub(1 << 26);

        let keep_g = (g4 >> 31).wrapping_sub(1);
        let keep_h = !keep_g;
        h0 = (h0 & keep_h) | (g0 & keep_g);
        h1 = (h1 & keep_h) | (g1 & keep_g);
        h2 = (h2 & keep_h) | (g2 & keep_g);
        h3 = (h3 & keep_h) | (g3 & keep_g);
        h4 = (h4 & keep_h) | (g4 & keep_g);

        // h mod 2^128
        let w0 = h0 | (h1 << 26);
        let w1 = (h1 >> 6) | (h2 << 20);
        let w2 = (h2 >> 12) | (h3 << 14);
        let w3 = (h3 >> 18) | (h4 << 8);

        let mut f = u64::from(w0) + u64::from(self.pad[0]);
        let t0 = f as u32;
        f = u64::from(w1) + u64::from(self.pad[1]) + (f >> 32);
        let t1 = f as u32;
        f = u64::from(w2) + u64::from(self.pad[2]) + (f >> 32);
        let t2 = f as u32;
        f = u64::from(w3) + u64::from(self.pad[3]) + (f >> 32);
        let t3 = f as u32;

        let mut tag = [0u8; 16];
        tag[0..4].copy_from_slice(&t0.to_le_bytes());
        tag[4..8].copy_from_slice(&t1.to_le_bytes());
        tag[8..12].copy_from_slice(&t2.to_le_bytes());
        tag[12..16].copy_from_slice(&t3.to_le_bytes());
        Tag128::new(tag)
    }
}

/// One-shot MAC. `one_time_key` must be exactly 32 bytes and must never be
/// used for a second message.
pub fn poly1305_mac(one_time_key: &[u8], message: &[u8]) -> Result<Tag128> {
    let key: &[u8; KEY_LEN] = one_time_key.try_into().map_err(|_| Error::InvalidLength {
        what: "one-time key",
        expected: KEY_LEN,
        actual: one_time_key.len(),
    })?;
    let mut mac = Poly1305::new(key);
    mac.update(message);
    Ok(mac.finalize())
}

/// Compares two tags without an early exit.
pub fn tags_equal(a: &Tag128, b: &Tag128) -> bool {
    let diff = a
        .as_bytes()
        .iter()
        .zip(b.as_bytes())
        .fold(0u8, |acc, (x, y)| acc | (x ^ y));
    std::hint::black_box(diff) == 0
}
