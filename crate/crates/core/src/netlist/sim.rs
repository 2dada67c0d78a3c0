use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One bit per primary input, in input declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TestVector(Vec<bool>);

impl TestVector {
    pub fn new(bits: Vec<bool>) -> Self {
        TestVector(bits)
    }

    /// Vector whose first input is the most significant bit of `code`.
    pub fn from_index(code: u64, width: usize) -> Self {
        TestVector((0..width).map(|i| code >> (width - 1 - i) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = !self.0[i];
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.0[i] = value;
    }

    pub fn to_bitstring(&self) -> String {
        self.0.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for TestVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

impl FromStr for TestVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::syntax(1, i + 1, format!("invalid vector bit `{c}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(TestVector)
    }
}

impl Serialize for TestVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_bitstring())
    }
}

impl<'de> Deserialize<'de> for TestVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Seeded source of uniform random input patterns, 64 at a time.
///
/// The generator is xoshiro256++ seeded through SplitMix64
/// (`Xoshiro256PlusPlus::seed_from_u64`). Each block draws one `u64` per
/// input in declaration order; lane `j` of the block is vector `64*b + j`.
pub struct VectorStream {
    rng: Xoshiro256PlusPlus,
    width: usize,
}

impl VectorStream {
    pub fn new(width: usize, seed: u64) -> Self {
        VectorStream {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
            width,
        }
    }

    pub fn next_block(&mut self) -> Vec<u64> {
        (0..self.width).map(|_| self.rng.random::<u64>()).collect()
    }
}

/// Unpacks lane `lane` of a block of input words into a vector.
pub fn lane_vector(words: &[u64], lane: usize) -> TestVector {
    TestVector(words.iter().map(|w| w >> lane & 1 == 1).collect())
}

/// The first `n` vectors of the seeded [`VectorStream`].
pub fn random_vectors(width: usize, n: usize, seed: u64) -> Vec<TestVector> {
    let mut stream = VectorStream::new(width, seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let block = stream.next_block();
        let take = (n - out.len()).min(64);
        out.extend((0..take).map(|lane| lane_vector(&block, lane)));
    }
    out
}

/// Packs up to 64 vectors into per-input words (vector `j` in lane `j`).
pub fn pack_vectors(vectors: &[TestVector], width: usize) -> Vec<u64> {
    debug_assert!(vectors.len() <= 64);
    let mut words = vec![0u64; width];
    for (lane, v) in vectors.iter().enumerate() {
        for (i, &b) in v.bits().iter().enumerate() {
            if b {
                words[i] |= 1 << lane;
            }
        }
    }
    words
}

/// Mask selecting the low `lanes` lanes of a word.
pub fn lane_mask(lanes: usize) -> u64 {
    if lanes >= 64 {
        !0
    } else {
        (1u64 << lanes) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitstring_roundtrip() {
        let v: TestVector = "10110".parse().unwrap();
        assert_eq!(v.to_bitstring(), "10110");
        assert!("10a".parse::<TestVector>().is_err());
    }

    #[test]
    fn from_index_is_msb_first() {
        assert_eq!(TestVector::from_index(0b100, 3).to_bitstring(), "100");
        assert_eq!(TestVector::from_index(0b011, 3).to_bitstring(), "011");
    }

    #[test]
    fn random_vectors_are_seed_deterministic() {
        let a = random_vectors(7, 200, 42);
        let b = random_vectors(7, 200, 42);
        let c = random_vectors(7, 200, 43);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 200);
    }

    #[test]
    fn prefix_stable_across_lengths() {
        let a = random_vectors(3, 10, 5);
        let b = random_vectors(3, 130, 5);
        assert_eq!(a[..], b[..10]);
    }

    #[test]
    fn pack_then_unpack() {
        let vs = random_vectors(5, 40, 1);
        let words = pack_vectors(&vs, 5);
        for (lane, v) in vs.iter().enumerate() {
            assert_eq!(&lane_vector(&words, lane), v);
        }
    }
}
