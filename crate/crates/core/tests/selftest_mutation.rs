//! A cipher with one wrong rotation constant must not get past the selftest.

use icsaead::selftest::{run_selftest, run_selftest_with, Primitives};
use icsaead::{BlockCounter32, ChaChaState, Key256, KeystreamBlock, Nonce96, Result};

fn mutant_qr(s: &mut [u32; 16], a: usize, b: usize, c: usize, d: usize) {
    s[a] = s[a].wrapping_add(s[b]);
    s[d] = (s[d] ^ s[a]).rotate_left(16);
    s[c] = s[c].wrapping_add(s[d]);
    s[b] = (s[b] ^ s[c]).rotate_left(13); // should be 12
    s[a] = s[a].wrapping_add(s[b]);
    s[d] = (s[d] ^ s[a]).rotate_left(8);
    s[c] = s[c].wrapping_add(s[d]);
    s[b] = (s[b] ^ s[c]).rotate_left(7);
}

fn mutant_quarter_round(mut s: ChaChaState, a: usize, b: usize, c: usize, d: usize) -> Result<ChaChaState> {
    mutant_qr(&mut s.words, a, b, c, d);
    Ok(s)
}

fn mutant_block(key: &Key256, counter: BlockCounter32, nonce: &Nonce96) -> KeystreamBlock {
    let init = ChaChaState::new(key, counter, nonce);
    let mut w = init.words;
    for _ in 0..10 {
        for (a, b, c, d) in [(0, 4, 8, 12), (1, 5, 9, 13), (2, 6, 10, 14), (3, 7, 11, 15)] {
            mutant_qr(&mut w, a, b, c, d);
        }
        for (a, b, c, d) in [(0, 5, 10, 15), (1, 6, 11, 12), (2, 7, 8, 13), (3, 4, 9, 14)] {
            mutant_qr(&mut w, a, b, c, d);
        }
    }
    let mut out = [0u8; 64];
    for (i, chunk) in out.chunks_exact_mut(4).enumerate() {
        chunk.copy_from_slice(&w[i].wrapping_add(init.words[i]).to_le_bytes());
    }
    KeystreamBlock::new(out)
}

#[test]
fn reference_build_passes() {
    assert!(run_selftest().iter().all(|r| r.passed()));
}

#[test]
fn wrong_rotation_is_caught() {
    let mutant = Primitives { quarter_round: mutant_quarter_round, block: mutant_block, ..Primitives::reference() };
    let results = run_selftest_with(&mutant);
    let failed: Vec<_> = results.iter().filter(|r| !r.passed()).collect();
    assert!(failed.iter().any(|r| r.name == "chacha20 quarter round"));
    assert!(failed.iter().any(|r| r.name == "chacha20 block, zero key"));
    assert!(failed.iter().all(|r| r.first_mismatch.is_some()));
}
