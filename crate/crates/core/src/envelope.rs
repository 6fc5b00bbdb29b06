//! Sealed-message envelope.
//!
//! Wire layout, no header or trailer:
//!
//! ```text
//! +-----------+----------------------+----------+
//! | nonce(12) | ciphertext(|payload|) | tag(16)  |
//! +-----------+----------------------+----------+
//! ```
//!
//! The nonce leads so the opener has it before touching the ciphertext; the
//! ciphertext is the only variable-length field. No associated data is
//! authenticated. A sealed file on disk is exactly this buffer, and a key file
//! is exactly 32 raw bytes.

use std::collections::HashSet;
use std::path::Path;

use crate::aead::{aead_decrypt_in_place, aead_encrypt_in_place};
use crate::error::{Error, Result};
use crate::types::{Key256, Nonce96, Tag128};

pub const NONCE_LEN: usize = Nonce96::LEN;
pub const TAG_LEN: usize = Tag128::LEN;
/// Envelope overhead, and the shortest buffer that parses.
pub const OVERHEAD: usize = NONCE_LEN + TAG_LEN;

/// Source of nonce bytes.
pub trait EntropySource {
    fn fill(&mut self, dest: &mut [u8]) -> Result<()>;
}

impl<T: EntropySource + ?Sized> EntropySource for &mut T {
    fn fill(&mut self, dest: &mut [u8]) -> Result<()> {
        (**self).fill(dest)
    }
}

/// The operating system CSPRNG. Failure is reported, never papered over.
#[derive(Debug, Default, Clone, Copy)]
pub struct OsEntropy;

impl EntropySource for OsEntropy {
    fn fill(&mut self, dest: &mut [u8]) -> Result<()> {
        getrandom::fill(dest).map_err(|e| Error::Entropy(e.to_string()))
    }
}

/// Replays a fixed byte script, then fails. For tests and fault injection.
#[derive(Debug, Clone)]
pub struct ScriptedEntropy {
    bytes: Vec<u8>,
    pos: usize,
}

impl ScriptedEntropy {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Self {
        Self { bytes: bytes.into(), pos: 0 }
    }
}

impl EntropySource for ScriptedEntropy {
    fn fill(&mut self, dest: &mut [u8]) -> Result<()> {
        let end = self.pos + dest.len();
        if end > self.bytes.len() {
            return Err(Error::Entropy("scripted entropy exhausted".into()));
        }
        dest.copy_from_slice(&self.bytes[self.pos..end]);
        self.pos = end;
        Ok(())
    }
}

/// Deterministic, never-repeating source: each fill writes a little-endian
/// counter. Not random; for reproducible benchmarks and tests only.
#[derive(Debug, Default, Clone)]
pub struct CounterEntropy {
    next: u128,
}

impl CounterEntropy {
    pub fn starting_at(next: u128) -> Self {
        Self { next }
    }
}

impl EntropySource for CounterEntropy {
    fn fill(&mut self, dest: &mut [u8]) -> Result<()> {
        let bytes = self.next.to_le_bytes();
        for (i, d) in dest.iter_mut().enumerate() {
            *d = bytes[i % bytes.len()];
        }
        self.next = self.next.wrapping_add(1);
        Ok(())
    }
}

pub fn generate_nonce<E: EntropySource + ?Sized>(entropy: &mut E) -> Result<Nonce96> {
    let mut bytes = [0u8; NONCE_LEN];
    entropy.fill(&mut bytes)?;
    Ok(Nonce96::new(bytes))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SealedMessage {
    pub nonce: Nonce96,
    pub ciphertext: Vec<u8>,
    pub tag: Tag128,
}

impl SealedMessage {
    pub fn serialized_len(&self) -> usize {
        OVERHEAD + self.ciphertext.len()
    }

    pub fn serialize(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.serialized_len());
        out.extend_from_slice(self.nonce.as_bytes());
        out.extend_from_slice(&self.ciphertext);
        out.extend_from_slice(self.tag.as_bytes());
        out
    }

    /// Splits a buffer into its fields. Any buffer of at least 28 bytes
    /// parses; authenticity is only checked by [`open_message`].
    pub fn parse(buffer: &[u8]) -> Result<Self> {
        if buffer.len() < OVERHEAD {
            return Err(Error::MalformedMessage { len: buffer.len(), min: OVERHEAD });
        }
        let (nonce, rest) = buffer.split_at(NONCE_LEN);
        let (ciphertext, tag) = rest.split_at(rest.len() - TAG_LEN);
        Ok(Self {
            nonce: Nonce96::from_slice(nonce)?,
            ciphertext: ciphertext.to_vec(),
            tag: Tag128::from_slice(tag)?,
        })
    }
}

/// Encrypts `payload` under an already-chosen nonce straight into the
/// single output buffer.
pub fn seal_with_nonce(key: &Key256, nonce: &Nonce96, payload: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; payload.len() + OVERHEAD];
    let (head, rest) = out.split_at_mut(NONCE_LEN);
    let (body, tail) = rest.split_at_mut(payload.len());
    head.copy_from_slice(nonce.as_bytes());
    body.copy_from_slice(payload);
    let tag = aead_encrypt_in_place(key, nonce, body, &[]);
    tail.copy_from_slice(tag.as_bytes());
    out
}

pub fn seal<E: EntropySource + ?Sized>(key: &Key256, payload: &[u8], entropy: &mut E) -> Result<Vec<u8>> {
    let nonce = generate_nonce(entropy)?;
    Ok(seal_with_nonce(key, &nonce, payload))
}

/// Authenticates and decrypts a parsed message, consuming it.
pub fn open_message(key: &Key256, message: SealedMessage) -> Result<Vec<u8>> {
    let SealedMessage { nonce, mut ciphertext, tag } = message;
    aead_decrypt_in_place(key, &nonce, &mut ciphertext, &tag, &[])?;
    Ok(ciphertext)
}

/// Splits and opens a sealed buffer. Short buffers give
/// [`Error::MalformedMessage`], bad tags [`Error::AuthenticationFailed`].
pub fn open(key: &Key256, buffer: &[u8]) -> Result<Vec<u8>> {
    open_message(key, SealedMessage::parse(buffer)?)
}

/// Reads a key file of exactly 32 raw bytes.
pub fn read_key_file(path: impl AsRef<Path>) -> Result<Key256> {
    let bytes = std::fs::read(path)?;
    Key256::from_slice(&bytes)
}

/// A sealer that remembers every nonce it has used.
///
/// Owned by one thread; the record is not synchronized.
pub struct SealingSession<E> {
    key: Key256,
    entropy: E,
    seen: HashSet<Nonce96>,
    collisions: usize,
}

impl<E: EntropySource> SealingSession<E> {
    pub fn new(key: Key256, entropy: E) -> Self {
        Self { key, entropy, seen: HashSet::new(), collisions: 0 }
    }

    pub fn next_nonce(&mut self) -> Result<Nonce96> {
        let nonce = generate_nonce(&mut self.entropy)?;
        self.record(nonce);
        Ok(nonce)
    }

    /// Records a nonce generated elsewhere. Returns false on a repeat.
    pub fn record(&mut self, nonce: Nonce96) -> bool {
        let fresh = self.seen.insert(nonce);
        if !fresh {
            self.collisions += 1;
        }
        fresh
    }

    pub fn seal(&mut self, payload: &[u8]) -> Result<Vec<u8>> {
        let nonce = self.next_nonce()?;
        Ok(seal_with_nonce(&self.key, &nonce, payload))
    }

    pub fn open(&self, buffer: &[u8]) -> Result<Vec<u8>> {
        open(&self.key, buffer)
    }

    pub fn nonces_recorded(&self) -> usize {
        self.seen.len() + self.collisions
    }

    pub fn collisions(&self) -> usize {
        self.collisions
    }

    pub fn entropy_mut(&mut self) -> &mut E {
        &mut self.entropy
    }

    pub fn key(&self) -> &Key256 {
        &self.key
    }
}
