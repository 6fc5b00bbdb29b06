//! ChaCha20-Poly1305 for industrial control traffic, plus a harness that
//! measures what sealing and opening one message costs against protocol
//! latency budgets (GOOSE, IEC 60834-1, SCADA).
//!
//! * [`chacha20`], [`poly1305`], [`aead`]: the cipher, the MAC and their
//!   combination with a 96-bit nonce and 32-bit block counter. No external
//!   cryptographic code.
//! * [`envelope`]: `nonce || ciphertext || tag` framing with a fresh random
//!   nonce per message.
//! * [`harness`]: warmed, output-free timing loops split into random,
//!   encryption, decryption and functional phases; nearest-rank percentiles;
//!   budget verdicts; CSV/JSON reports.
//! * [`selftest`]: known-answer vectors.
//!
//! ```
//! use icsaead::{envelope, Key256, OsEntropy};
//!
//! let key = Key256::new([7; 32]);
//! let sealed = envelope::seal(&key, b"close breaker 4", &mut OsEntropy).unwrap();
//! assert_eq!(sealed.len(), 15 + 28);
//! assert_eq!(envelope::open(&key, &sealed).unwrap(), b"close breaker 4");
//! ```

pub mod aead;
pub mod chacha20;
pub mod envelope;
mod error;
pub mod harness;
pub mod poly1305;
pub mod selftest;
mod types;

pub use aead::{aead_decrypt, aead_encrypt, poly1305_key_gen};
pub use chacha20::{chacha20_block, chacha20_xor, quarter_round, ChaChaState};
pub use envelope::{
    generate_nonce, open, seal, CounterEntropy, EntropySource, OsEntropy, ScriptedEntropy,
    SealedMessage, SealingSession,
};
pub use error::{Error, Result};
pub use poly1305::poly1305_mac;
pub use types::{BlockCounter32, Key256, KeystreamBlock, Nonce96, Tag128};
