//! Fixed-length 0/1 vectors packed into a `u64`.
//!
//! Coordinate 0 is the most significant bit, so integer order on `value`
//! coincides with lexicographic order on the vector, and `value` is the
//! row-major index of the vector in a table over `{0,1}^len`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const MAX_BITS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    len: usize,
    value: u64,
}

fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl Bits {
    pub fn new(len: usize, value: u64) -> Result<Self> {
        if len > MAX_BITS {
            return Err(Error::TooLarge(format!("bit vector of length {len}")));
        }
        if value & !mask(len) != 0 {
            return Err(Error::InvalidArgument(format!(
                "value {value} does not fit in {len} bits"
            )));
        }
        Ok(Bits { len, value })
    }

    pub(crate) fn from_raw(len: usize, value: u64) -> Self {
        debug_assert!(len <= MAX_BITS && value & !mask(len) == 0);
        Bits { len, value }
    }

    pub fn zeros(len: usize) -> Self {
        Bits { len, value: 0 }
    }

    pub fn from_slice(bits: &[bool]) -> Result<Self> {
        let mut value = 0u64;
        for &b in bits {
            value = (value << 1) | b as u64;
        }
        Bits::new(bits.len(), value)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn get(&self, j: usize) -> bool {
        assert!(j < self.len);
        (self.value >> (self.len - 1 - j)) & 1 == 1
    }

    pub fn to_vec(&self) -> Vec<bool> {
        (0..self.len).map(|j| self.get(j)).collect()
    }

    pub fn meet(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits::from_raw(self.len, self.value & other.value)
    }

    pub fn join(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits::from_raw(self.len, self.value | other.value)
    }

    pub fn complement(&self) -> Bits {
        Bits::from_raw(self.len, !self.value & mask(self.len))
    }

    /// The `i`-th block of width `k` (0-based), as a `k`-bit integer.
    pub fn block(&self, k: usize, i: usize) -> u64 {
        let shift = self.len - (i + 1) * k;
        (self.value >> shift) & mask(k)
    }

    /// Concatenate `k`-bit blocks, first block most significant.
    pub fn from_blocks(k: usize, blocks: &[u64]) -> Result<Bits> {
        let len = k * blocks.len();
        if len > MAX_BITS {
            return Err(Error::TooLarge(format!("bit vector of length {len}")));
        }
        let mut value = 0u64;
        for &b in blocks {
            value = if k == 64 { b } else { (value << k) | (b & mask(k)) };
        }
        Ok(Bits { len, value })
    }

    /// All vectors of length `len` in lexicographic order.
    pub fn all(len: usize) -> impl Iterator<Item = Bits> {
        assert!(len < 64, "enumeration of 2^{len} vectors");
        (0..(1u64 << len)).map(move |value| Bits { len, value })
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.len {
            f.write_str(if self.get(j) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .filter(|c| *c != ',' && !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("bad bit `{other}` in `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Bits::from_slice(&bits)
    }
}

impl serde::Serialize for Bits {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Bits {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
