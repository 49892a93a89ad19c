//! `(k, rho, sigma)` encodings: a labeled domain `D`, an injective
//! `sigma: D -> {0,1}^k` with image `E`, and a retraction
//! `rho: {0,1}^k -> E` fixing `E` pointwise.
//!
//! Blocks are `k`-bit integers, most significant bit first (see [`Bits`]).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::costfn::{binary_domain, diamond_labels, labels, parse_k, split_call};
use crate::error::{Error, Result};

/// Largest block width accepted; `rho` is stored as a `2^k` table.
pub const MAX_K: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Encoding {
    k: usize,
    domain: Vec<String>,
    sigma: Vec<u64>,
    rho: Vec<u64>,
}

pub const STANDARD_ENCODINGS: &[&str] = &[
    "identity",
    "pair",
    "star1",
    "star2",
    "unary(3)",
    "tilde(2)",
    "diamond(2)",
    "diamond(3)",
];

fn unit(k: usize, i: usize) -> u64 {
    // Coordinate i (1-based) as the (i-1)-th bit from the left.
    1u64 << (k - i)
}

fn all_ones(k: usize) -> u64 {
    (1u64 << k) - 1
}

impl Encoding {
    pub fn new(k: usize, domain: Vec<String>, sigma: Vec<u64>, rho: Vec<u64>) -> Result<Self> {
        if k == 0 || k > MAX_K {
            return Err(Error::Encoding(format!("block width {k} outside 1..={MAX_K}")));
        }
        if domain.is_empty() {
            return Err(Error::Encoding("empty domain".into()));
        }
        if sigma.len() != domain.len() {
            return Err(Error::LengthMismatch { expected: domain.len(), got: sigma.len() });
        }
        if rho.len() != 1 << k {
            return Err(Error::LengthMismatch { expected: 1 << k, got: rho.len() });
        }
        for (i, a) in domain.iter().enumerate() {
            if domain[..i].contains(a) {
                return Err(Error::Encoding(format!("duplicate label `{a}`")));
            }
        }
        let limit = 1u64 << k;
        for (i, &s) in sigma.iter().enumerate() {
            if s >= limit {
                return Err(Error::Encoding(format!("sigma value {s} has more than {k} bits")));
            }
            if sigma[..i].contains(&s) {
                return Err(Error::Encoding(format!(
                    "sigma is not injective: `{}` and `{}` share an image",
                    domain[sigma[..i].iter().position(|&t| t == s).unwrap()],
                    domain[i]
                )));
            }
        }
        for (a, &r) in rho.iter().enumerate() {
            if !sigma.contains(&r) {
                return Err(Error::Encoding(format!(
                    "rho({}) = {} lies outside the image of sigma",
                    Bits::from_raw(k, a as u64),
                    Bits::from_raw(k, r.min(limit - 1))
                )));
            }
        }
        for &s in &sigma {
            if rho[s as usize] != s {
                return Err(Error::Encoding(format!(
                    "rho does not fix {}",
                    Bits::from_raw(k, s)
                )));
            }
        }
        Ok(Encoding { k, domain, sigma, rho })
    }

    pub fn identity() -> Self {
        Encoding::new(1, binary_domain(), vec![0, 1], vec![0, 1]).unwrap()
    }

    /// `sigma_k`: 0 to the zero block, `i` to the `i`-th unit vector;
    /// `rho_k` keeps zero and unit blocks and sends the rest to zero.
    pub fn unary(k: usize) -> Result<Self> {
        let domain = (0..=k).map(|i| i.to_string()).collect();
        Self::unary_with_labels(k, domain)
    }

    fn unary_with_labels(k: usize, domain: Vec<String>) -> Result<Self> {
        if k == 0 || k > MAX_K {
            return Err(Error::InvalidArgument(format!("unary({k}) needs 1 <= k <= {MAX_K}")));
        }
        let mut sigma = vec![0];
        sigma.extend((1..=k).map(|i| unit(k, i)));
        let rho = (0..1u64 << k)
            .map(|a| if a.count_ones() == 1 { a } else { 0 })
            .collect();
        Encoding::new(k, domain, sigma, rho)
    }

    /// `unary(2)` over the labels `0, 1, -1` with `1 -> 10`, `-1 -> 01`.
    pub fn pair() -> Self {
        Self::unary_with_labels(2, labels(&["0", "1", "-1"])).unwrap()
    }

    /// Width `2k`: `i` goes to `(e_i, 1 - e_i)`, 0 to the zero vector; the
    /// retraction keeps those images and sends the rest to zero.
    pub fn tilde(k: usize) -> Result<Self> {
        if k == 0 || 2 * k > MAX_K {
            return Err(Error::InvalidArgument(format!("tilde({k}) needs 1 <= 2k <= {MAX_K}")));
        }
        let domain = (0..=k).map(|i| i.to_string()).collect();
        let mut sigma = vec![0];
        for i in 1..=k {
            let e = unit(k, i);
            sigma.push((e << k) | (all_ones(k) ^ e));
        }
        let rho = (0..1u64 << (2 * k))
            .map(|a| if sigma.contains(&a) { a } else { 0 })
            .collect();
        Encoding::new(2 * k, domain, sigma, rho)
    }

    fn star(sigma: Vec<u64>) -> Self {
        // rho* keeps 10 and sends everything else to 01.
        let rho = vec![0b01, 0b01, 0b10, 0b01];
        Encoding::new(2, binary_domain(), sigma, rho).unwrap()
    }

    /// `sigma(1) = 10`, `sigma(0) = 01`.
    pub fn star1() -> Self {
        Self::star(vec![0b01, 0b10])
    }

    /// `sigma(1) = 01`, `sigma(0) = 10`.
    pub fn star2() -> Self {
        Self::star(vec![0b10, 0b01])
    }

    /// Labels `bot, 1..k, top`; `top` goes to all ones, atoms to unit
    /// vectors, `bot` to zero. The retraction keeps zero and unit blocks and
    /// sends the rest to all ones.
    pub fn diamond(k: usize) -> Result<Self> {
        if !(2..=MAX_K).contains(&k) {
            return Err(Error::InvalidArgument(format!("diamond({k}) needs 2 <= k <= {MAX_K}")));
        }
        let mut sigma = vec![0];
        sigma.extend((1..=k).map(|i| unit(k, i)));
        sigma.push(all_ones(k));
        let rho = (0..1u64 << k)
            .map(|a| if a.count_ones() <= 1 { a } else { all_ones(k) })
            .collect();
        Encoding::new(k, diamond_labels(k), sigma, rho)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn domain_size(&self) -> usize {
        self.domain.len()
    }

    /// `sigma` by label position.
    pub fn sigma(&self, label: usize) -> u64 {
        self.sigma[label]
    }

    pub fn sigma_table(&self) -> &[u64] {
        &self.sigma
    }

    pub fn rho(&self, block: u64) -> u64 {
        self.rho[block as usize]
    }

    pub fn rho_table(&self) -> &[u64] {
        &self.rho
    }

    /// Label position whose image is `block`, if any.
    pub fn sigma_inverse(&self, block: u64) -> Option<usize> {
        self.sigma.iter().position(|&s| s == block)
    }

    pub fn label_position(&self, label: &str) -> Result<usize> {
        let label = label.trim();
        self.domain
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::InvalidLabel(label.to_string()))
    }

    /// Concatenated `sigma` blocks of a point given by label positions.
    pub fn encode_tuple(&self, x: &[usize]) -> Result<Bits> {
        let blocks = x
            .iter()
            .map(|&p| {
                self.sigma.get(p).copied().ok_or(Error::LabelOutOfRange {
                    index: p,
                    size: self.domain.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Bits::from_blocks(self.k, &blocks)
    }

    pub fn encode_labels<S: AsRef<str>>(&self, x: &[S]) -> Result<Bits> {
        let pos = x
            .iter()
            .map(|l| self.label_position(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.encode_tuple(&pos)
    }

    /// Blockwise `sigma^-1`, or `None` if some block is outside `E`.
    pub fn decode(&self, v: &Bits) -> Result<Option<Vec<usize>>> {
        let n = self.blocks_in(v)?;
        Ok((0..n).map(|i| self.sigma_inverse(v.block(self.k, i))).collect())
    }

    fn blocks_in(&self, v: &Bits) -> Result<usize> {
        if !v.len().is_multiple_of(self.k) {
            return Err(Error::InvalidArgument(format!(
                "length {} is not a multiple of {}",
                v.len(),
                self.k
            )));
        }
        Ok(v.len() / self.k)
    }

    /// `rho` applied to each `k`-block.
    pub fn retract_blocks(&self, v: &Bits) -> Result<Bits> {
        let n = self.blocks_in(v)?;
        Ok(Bits::from_raw(v.len(), self.retract_value(v.value(), n)))
    }

    /// Blockwise retraction on a raw `kn`-bit value.
    pub(crate) fn retract_value(&self, value: u64, n: usize) -> u64 {
        let k = self.k;
        let mask = all_ones(k);
        let mut out = 0u64;
        for i in 0..n {
            let shift = (n - 1 - i) * k;
            out |= self.rho[((value >> shift) & mask) as usize] << shift;
        }
        out
    }

    /// `sigma(x) -> sigma(complement x)` on a two-label domain.
    pub fn bar(&self) -> Result<Encoding> {
        if self.domain.len() != 2 {
            return Err(Error::DomainMismatch(format!(
                "bar needs two labels, got {}",
                self.domain.len()
            )));
        }
        Ok(Encoding {
            k: self.k,
            domain: self.domain.clone(),
            sigma: vec![self.sigma[1], self.sigma[0]],
            rho: self.rho.clone(),
        })
    }
}

pub fn standard_encoding(spec: &str) -> Result<Encoding> {
    let (name, arg) = split_call(spec)?;
    let no_arg = |e: fn() -> Encoding| {
        if arg.is_some() {
            Err(Error::InvalidArgument(format!("`{name}` takes no parameter")))
        } else {
            Ok(e())
        }
    };
    match name {
        "identity" => no_arg(Encoding::identity),
        "pair" => no_arg(Encoding::pair),
        "star1" => no_arg(Encoding::star1),
        "star2" => no_arg(Encoding::star2),
        "unary" => Encoding::unary(parse_k(name, arg)?),
        "tilde" => Encoding::tilde(parse_k(name, arg)?),
        "diamond" => Encoding::diamond(parse_k(name, arg)?),
        _ => Err(Error::UnknownName(spec.to_string())),
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} sigma:", self.k)?;
        for (l, &s) in self.domain.iter().zip(&self.sigma) {
            write!(f, " {l}->{}", Bits::from_raw(self.k, s))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct EncodingJson {
    k: usize,
    domain: Vec<String>,
    sigma: serde_json::Map<String, serde_json::Value>,
    rho: serde_json::Map<String, serde_json::Value>,
}

impl Serialize for Encoding {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let bits = |v: u64| serde_json::Value::String(Bits::from_raw(self.k, v).to_string());
        let sigma = self
            .domain
            .iter()
            .zip(&self.sigma)
            .map(|(l, &v)| (l.clone(), bits(v)))
            .collect();
        let rho = self
            .rho
            .iter()
            .enumerate()
            .map(|(a, &v)| (Bits::from_raw(self.k, a as u64).to_string(), bits(v)))
            .collect();
        EncodingJson { k: self.k, domain: self.domain.clone(), sigma, rho }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Encoding {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = EncodingJson::deserialize(d)?;
        from_json_parts(raw).map_err(serde::de::Error::custom)
    }
}

fn block_of(k: usize, v: &serde_json::Value) -> Result<u64> {
    let s = v
        .as_str()
        .ok_or_else(|| Error::Parse(format!("expected a bitstring, got {v}")))?;
    let b: Bits = s.parse()?;
    if b.len() != k {
        return Err(Error::Encoding(format!("bitstring `{s}` does not have length {k}")));
    }
    Ok(b.value())
}

fn from_json_parts(raw: EncodingJson) -> Result<Encoding> {
    let k = raw.k;
    if k == 0 || k > MAX_K {
        return Err(Error::Encoding(format!("block width {k} outside 1..={MAX_K}")));
    }
    if raw.sigma.len() != raw.domain.len() {
        return Err(Error::LengthMismatch { expected: raw.domain.len(), got: raw.sigma.len() });
    }
    let sigma = raw
        .domain
        .iter()
        .map(|l| {
            let v = raw
                .sigma
                .get(l)
                .ok_or_else(|| Error::Encoding(format!("sigma misses label `{l}`")))?;
            block_of(k, v)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rho = vec![None; 1 << k];
    for (key, v) in &raw.rho {
        let a = block_of(k, &serde_json::Value::String(key.clone()))?;
        if rho[a as usize].replace(block_of(k, v)?).is_some() {
            return Err(Error::Encoding(format!("duplicate rho entry `{key}`")));
        }
    }
    let rho = rho
        .into_iter()
        .enumerate()
        .map(|(a, r)| {
            r.ok_or_else(|| {
                Error::Encoding(format!("rho is not total: missing {}", Bits::from_raw(k, a as u64)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Encoding::new(k, raw.domain, sigma, rho)
}
