//! Landmark identifiers and content keys.
//!
//! A [`LandmarkId`] is 128 bits: 48 bits of creation-epoch milliseconds
//! followed by 80 pseudorandom bits. Ordering is byte-lexicographic, so ids
//! sort by creation time first. The pit is the all-zero id on every peer.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

const TIME_MASK: u64 = (1 << 48) - 1;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LandmarkId([u8; 16]);

impl LandmarkId {
    pub const PIT: LandmarkId = LandmarkId([0; 16]);

    pub fn from_bytes(bytes: [u8; 16]) -> Self {
        LandmarkId(bytes)
    }

    /// Builds an id from a millisecond timestamp and 80 random bits.
    /// Bits of `random` above the low 80 are discarded.
    pub fn from_parts(millis: u64, random: u128) -> Self {
        let mut bytes = [0u8; 16];
        bytes[..6].copy_from_slice(&(millis & TIME_MASK).to_be_bytes()[2..]);
        bytes[6..].copy_from_slice(&random.to_be_bytes()[6..]);
        LandmarkId(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; 16] {
        &self.0
    }

    pub fn millis(&self) -> u64 {
        let mut buf = [0u8; 8];
        buf[2..].copy_from_slice(&self.0[..6]);
        u64::from_be_bytes(buf)
    }

    pub fn is_pit(&self) -> bool {
        *self == Self::PIT
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    /// Last eight hex characters, the random part of the id.
    pub fn short(&self) -> String {
        self.to_hex()[24..].to_string()
    }
}

impl fmt::Display for LandmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for LandmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.to_hex())
    }
}

impl FromStr for LandmarkId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() != 32 || s.bytes().any(|b| b.is_ascii_uppercase()) {
            return Err(Error::Malformed(format!("id {s:?} is not 32 lowercase hex characters")));
        }
        let mut bytes = [0u8; 16];
        hex::decode_to_slice(s, &mut bytes).map_err(|e| Error::Malformed(format!("id {s:?}: {e}")))?;
        Ok(LandmarkId(bytes))
    }
}

impl serde::Serialize for LandmarkId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> serde::Deserialize<'de> for LandmarkId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Hash of `label ‖ 0x00 ‖ concrete-type name`. Used to find duplicate
/// candidates, never as identity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContentKey([u8; 32]);

impl ContentKey {
    pub fn new(label: &str, type_name: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(label.as_bytes());
        hasher.update([0u8]);
        hasher.update(type_name.as_bytes());
        let mut out = [0u8; 32];
        out.copy_from_slice(hasher.finalize().as_slice());
        ContentKey(out)
    }
}

impl fmt::Debug for ContentKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ContentKey({})", &hex::encode(self.0)[..12])
    }
}

/// Seeded id source. Two generators with the same seed fed the same clock
/// readings produce the same ids.
#[derive(Debug, Clone)]
pub struct IdGenerator {
    rng: ChaCha8Rng,
}

impl IdGenerator {
    pub fn from_seed(seed: u64) -> Self {
        IdGenerator { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn from_entropy() -> Self {
        IdGenerator { rng: ChaCha8Rng::from_entropy() }
    }

    pub fn next_id(&mut self, now_ms: u64) -> LandmarkId {
        let hi = u128::from(self.rng.next_u64());
        let lo = u128::from(self.rng.next_u64());
        let id = LandmarkId::from_parts(now_ms, (hi << 64) | lo);
        if id.is_pit() {
            // only reachable at epoch 0 with an all-zero draw
            return LandmarkId::from_parts(now_ms, 1);
        }
        id
    }
}
