//! Fixed-size cryptographic material.

use std::fmt;

use crate::error::{Error, Result};

macro_rules! byte_array_newtype {
    ($(#[$meta:meta])* $name:ident, $len:expr, $what:expr) => {
        $(#[$meta])*
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        pub struct $name([u8; $len]);

        impl $name {
            pub const LEN: usize = $len;

            pub const fn new(bytes: [u8; $len]) -> Self {
                Self(bytes)
            }

            pub fn from_slice(bytes: &[u8]) -> Result<Self> {
                let arr: [u8; $len] = bytes.try_into().map_err(|_| Error::InvalidLength {
                    what: $what,
                    expected: $len,
                    actual: bytes.len(),
                })?;
                Ok(Self(arr))
            }

            pub const fn as_bytes(&self) -> &[u8; $len] {
                &self.0
            }
        }

        impl From<[u8; $len]> for $name {
            fn from(bytes: [u8; $len]) -> Self {
                Self(bytes)
            }
        }

        impl TryFrom<&[u8]> for $name {
            type Error = Error;

            fn try_from(bytes: &[u8]) -> Result<Self> {
                Self::from_slice(bytes)
            }
        }

        impl AsRef<[u8]> for $name {
            fn as_ref(&self) -> &[u8] {
                &self.0
            }
        }
    };
}

byte_array_newtype!(
    /// A 256-bit ChaCha20 key.
    Key256,
    32,
    "key"
);

byte_array_newtype!(
    /// A 96-bit nonce. Must never repeat under one key.
    Nonce96,
    12,
    "nonce"
);

byte_array_newtype!(
    /// A 128-bit Poly1305 authentication tag.
    Tag128,
    16,
    "tag"
);

byte_array_newtype!(
    /// One 64-byte block of ChaCha20 keystream.
    KeystreamBlock,
    64,
    "keystream block"
);

// Keys are secret; never print them.
impl fmt::Debug for Key256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Key256(..)")
    }
}

impl fmt::Debug for Nonce96 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Nonce96(")?;
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Tag128 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tag128(")?;
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for KeystreamBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KeystreamBlock({:02x?})", &self.0[..])
    }
}

/// 32-bit block index into the keystream. Wraps modulo 2^32.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BlockCounter32(pub u32);

impl BlockCounter32 {
    pub const fn wrapping_add(self, blocks: u32) -> Self {
        Self(self.0.wrapping_add(blocks))
    }
}

impl From<u32> for BlockCounter32 {
    fn from(v: u32) -> Self {
        Self(v)
    }
}
