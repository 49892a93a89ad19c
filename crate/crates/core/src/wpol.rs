//! Operation tables, weighted polymorphisms and the nonmembership value
//! `sum_phi omega(phi) f(phi(x^1, ..., x^m))`.
//!
//! A positive value for some tuples in `dom f` proves that `f` is outside
//! every language admitting `omega`. [`validate_wpol`] only samples the
//! defining conditions on a finite set of functions; it never proves that
//! `omega` is a weighted polymorphism of an infinite language.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use num_traits::{Signed, Zero};

use crate::costfn::{ksub2, bisub3, split_call, parse_k, CostFunction};
use crate::encoding::Encoding;
use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, ExtRat, Rational};

/// Operation tables larger than this are refused.
pub const MAX_OPERATION_TABLE: usize = 1 << 21;

/// Largest `k` accepted by `omega_k`: its tables have `(k+1)^8` entries.
pub const MAX_OMEGA_K: usize = 5;

/// `phi: D^m -> D`, stored row-major with the first argument most
/// significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperationTable {
    domain: Vec<String>,
    arity: usize,
    table: Vec<u8>,
}

fn table_len(d: usize, arity: usize) -> Result<usize> {
    let mut size = 1usize;
    for _ in 0..arity {
        size = size
            .checked_mul(d)
            .filter(|&s| s <= MAX_OPERATION_TABLE)
            .ok_or_else(|| Error::TooLarge(format!("operation table {d}^{arity}")))?;
    }
    Ok(size)
}

impl OperationTable {
    pub fn new(domain: Vec<String>, arity: usize, table: Vec<u8>) -> Result<Self> {
        if domain.is_empty() || domain.len() > u8::MAX as usize {
            return Err(Error::InvalidArgument(format!("domain of size {}", domain.len())));
        }
        if arity == 0 {
            return Err(Error::InvalidArgument("operation arity must be at least 1".into()));
        }
        let len = table_len(domain.len(), arity)?;
        if table.len() != len {
            return Err(Error::LengthMismatch { expected: len, got: table.len() });
        }
        if let Some(&bad) = table.iter().find(|&&v| v as usize >= domain.len()) {
            return Err(Error::LabelOutOfRange { index: bad as usize, size: domain.len() });
        }
        Ok(OperationTable { domain, arity, table })
    }

    pub fn from_fn(
        domain: Vec<String>,
        arity: usize,
        mut f: impl FnMut(&[usize]) -> Result<usize>,
    ) -> Result<Self> {
        let d = domain.len();
        let len = table_len(d, arity)?;
        let mut table = Vec::with_capacity(len);
        let mut args = vec![0usize; arity];
        for _ in 0..len {
            table.push(u8::try_from(f(&args)?).map_err(|_| Error::InvalidArgument("label overflow".into()))?);
            for a in args.iter_mut().rev() {
                *a += 1;
                if *a < d {
                    break;
                }
                *a = 0;
            }
        }
        OperationTable::new(domain, arity, table)
    }

    /// `e_i^(m)`, with `i` 0-based.
    pub fn projection(domain: Vec<String>, arity: usize, i: usize) -> Result<Self> {
        if i >= arity {
            return Err(Error::InvalidArgument(format!("projection {i} of arity {arity}")));
        }
        OperationTable::from_fn(domain, arity, |a| Ok(a[i]))
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    fn index(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &a| acc * self.domain.len() + a)
    }

    /// Value at one argument tuple of label positions.
    pub fn apply(&self, args: &[usize]) -> Result<usize> {
        if args.len() != self.arity {
            return Err(Error::LengthMismatch { expected: self.arity, got: args.len() });
        }
        if let Some(&a) = args.iter().find(|&&a| a >= self.domain.len()) {
            return Err(Error::LabelOutOfRange { index: a, size: self.domain.len() });
        }
        Ok(self.table[self.index(args)] as usize)
    }

    /// Coordinatewise application to `m` points of equal length.
    pub fn apply_operation(&self, tuples: &[Vec<usize>]) -> Result<Vec<usize>> {
        if tuples.len() != self.arity {
            return Err(Error::LengthMismatch { expected: self.arity, got: tuples.len() });
        }
        let n = tuples[0].len();
        if let Some(t) = tuples.iter().find(|t| t.len() != n) {
            return Err(Error::LengthMismatch { expected: n, got: t.len() });
        }
        let mut args = vec![0; self.arity];
        (0..n)
            .map(|j| {
                for (a, t) in args.iter_mut().zip(tuples) {
                    *a = t[j];
                }
                self.apply(&args)
            })
            .collect()
    }

    /// `Some(i)` iff this is the projection onto argument `i` (0-based).
    pub fn is_projection(&self) -> Option<usize> {
        (0..self.arity).find(|&i| {
            OperationTable::projection(self.domain.clone(), self.arity, i)
                .map(|p| p.table == self.table)
                .unwrap_or(false)
        })
    }
}

/// One element of the support of `omega`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedOperation {
    pub name: String,
    pub op: OperationTable,
    pub weight: Rational,
}

/// Finitely supported `omega`; operations outside the support weigh 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPolymorphism {
    arity: usize,
    support: Vec<WeightedOperation>,
}

impl WeightedPolymorphism {
    /// Checks shapes only: every operation has the given arity and all share
    /// one domain. The weight conditions are left to [`validate_wpol`].
    pub fn new(arity: usize, support: Vec<WeightedOperation>) -> Result<Self> {
        if let Some(first) = support.first() {
            for w in &support {
                if w.op.arity != arity {
                    return Err(Error::LengthMismatch { expected: arity, got: w.op.arity });
                }
                if w.op.domain != first.op.domain {
                    return Err(Error::DomainMismatch(format!("operation `{}`", w.name)));
                }
            }
        }
        Ok(WeightedPolymorphism { arity, support })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn support(&self) -> &[WeightedOperation] {
        &self.support
    }

    pub fn domain(&self) -> Option<&[String]> {
        self.support.first().map(|w| w.op.domain())
    }

    pub fn weight_sum(&self) -> Rational {
        self.support.iter().map(|w| &w.weight).sum()
    }
}

// ---------------------------------------------------------------------------
// Refutation value

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Contribution {
    pub name: String,
    #[serde(with = "crate::rational::rat_string")]
    pub weight: Rational,
    /// `phi(x^1, ..., x^m)` as labels.
    pub output: Vec<String>,
    pub value: ExtRat,
    /// `weight * value`; `+inf` when a positive weight meets `+inf`.
    pub weighted: ExtRat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub contributions: Vec<Contribution>,
    pub total: ExtRat,
}

impl Refutation {
    /// A strictly positive total certifies nonmembership.
    pub fn refutes(&self) -> bool {
        match &self.total {
            ExtRat::Infinity => true,
            ExtRat::Finite(r) => r.is_positive(),
        }
    }
}

fn check_domain(omega: &WeightedPolymorphism, f: &CostFunction) -> Result<()> {
    match omega.domain() {
        Some(d) if d != f.domain() => Err(Error::DomainMismatch(format!(
            "omega over [{}] but function over [{}]",
            d.join(","),
            f.domain().join(",")
        ))),
        _ => Ok(()),
    }
}

/// Superposition sum over finite values, or `None` when some operation with
/// nonzero weight leaves `dom f`. Negative weights on `+inf` cannot occur
/// for tuples in `dom f` when those weights sit on projections.
fn weighted(weight: &Rational, value: &ExtRat) -> Result<ExtRat> {
    match value {
        ExtRat::Finite(v) => Ok(ExtRat::Finite(weight * v)),
        ExtRat::Infinity if weight.is_zero() => Ok(ExtRat::zero()),
        ExtRat::Infinity if weight.is_positive() => Ok(ExtRat::Infinity),
        ExtRat::Infinity => Err(Error::InvalidArgument(
            "negative weight on an operation leaving dom f".into(),
        )),
    }
}

/// `sum_phi omega(phi) f(phi(tuples))`, exact. Every tuple must lie in
/// `dom f`.
pub fn refutation_value(
    omega: &WeightedPolymorphism,
    f: &CostFunction,
    tuples: &[Vec<usize>],
) -> Result<Refutation> {
    check_domain(omega, f)?;
    if tuples.len() != omega.arity {
        return Err(Error::LengthMismatch { expected: omega.arity, got: tuples.len() });
    }
    for t in tuples {
        f.check_point(t)?;
        if f.value(t).is_infinite() {
            return Err(Error::InvalidArgument(format!(
                "tuple ({}) is outside dom f",
                f.point_labels(t).join(",")
            )));
        }
    }
    let mut total = ExtRat::zero();
    let mut contributions = Vec::with_capacity(omega.support.len());
    for w in &omega.support {
        let out = w.op.apply_operation(tuples)?;
        let value = f.value(&out).clone();
        let weighted = weighted(&w.weight, &value)?;
        total += &weighted;
        contributions.push(Contribution {
            name: w.name.clone(),
            weight: w.weight.clone(),
            output: f.point_labels(&out),
            value,
            weighted,
        });
    }
    Ok(Refutation { contributions, total })
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WpolViolation {
    WeightSum(Rational),
    NegativeNonProjection(String),
    /// Superposition value above 0 on `sample[function]`.
    Inequality { function: usize, tuples: Vec<Vec<usize>>, total: ExtRat },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WpolCheck {
    pub holds: bool,
    pub violation: Option<WpolViolation>,
    /// Tuple choices evaluated across the sample.
    pub evaluated: usize,
}

/// Tuple choices per function above which [`validate_wpol`] samples at
/// random (fixed seed) instead of enumerating.
pub const EXHAUSTIVE_LIMIT: usize = 1 << 20;

/// Necessary-condition check: weights sum to 0, negative weights sit on
/// projections, and for every function in `sample` the superposition
/// value is at most 0. Up to [`EXHAUSTIVE_LIMIT`] tuple choices are
/// enumerated per function; beyond that `max_samples` choices are drawn
/// from a generator seeded with `seed`.
pub fn validate_wpol(
    omega: &WeightedPolymorphism,
    sample: &[CostFunction],
    max_samples: usize,
    seed: u64,
) -> Result<WpolCheck> {
    for f in sample {
        check_domain(omega, f)?;
    }
    let fail = |v: WpolViolation, evaluated| Ok(WpolCheck { holds: false, violation: Some(v), evaluated });
    let sum = omega.weight_sum();
    if !sum.is_zero() {
        return fail(WpolViolation::WeightSum(sum), 0);
    }
    if let Some(w) = omega.support.iter().find(|w| w.weight.is_negative() && w.op.is_projection().is_none()) {
        return fail(WpolViolation::NegativeNonProjection(w.name.clone()), 0);
    }
    let m = omega.arity;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evaluated = 0;
    for (fi, f) in sample.iter().enumerate() {
        let dom: Vec<Vec<usize>> = f.dom_indices().map(|i| f.point_of(i)).collect();
        if dom.is_empty() {
            continue;
        }
        let choices = dom.len().checked_pow(m as u32).filter(|&c| c <= EXHAUSTIVE_LIMIT);
        let mut test = |idx: &[usize]| -> Result<Option<WpolCheck>> {
            let tuples: Vec<Vec<usize>> = idx.iter().map(|&i| dom[i].clone()).collect();
            evaluated += 1;
            let r = refutation_value(omega, f, &tuples)?;
            if r.refutes() {
                let v = WpolViolation::Inequality { function: fi, tuples, total: r.total };
                return Ok(Some(WpolCheck { holds: false, violation: Some(v), evaluated }));
            }
            Ok(None)
        };
        match choices {
            Some(c) => {
                let mut idx = vec![0usize; m];
                for _ in 0..c {
                    if let Some(v) = test(&idx)? {
                        return Ok(v);
                    }
                    for a in idx.iter_mut().rev() {
                        *a += 1;
                        if *a < dom.len() {
                            break;
                        }
                        *a = 0;
                    }
                }
            }
            None => {
                for _ in 0..max_samples {
                    let idx: Vec<usize> = (0..m).map(|_| rng.gen_range(0..dom.len())).collect();
                    if let Some(v) = test(&idx)? {
                        return Ok(v);
                    }
                }
            }
        }
    }
    Ok(WpolCheck { holds: true, violation: None, evaluated })
}

// ---------------------------------------------------------------------------
// Standard constructions

type Term = fn(&[u64]) -> u64;

/// `sigma^-1(rho(term(sigma(a_1), ..., sigma(a_m))))` as a table.
pub fn term_operation(enc: &Encoding, arity: usize, term: impl Fn(&[u64]) -> u64) -> Result<OperationTable> {
    let mut blocks = vec![0u64; arity];
    OperationTable::from_fn(enc.domain().to_vec(), arity, |a| {
        for (b, &x) in blocks.iter_mut().zip(a) {
            *b = enc.sigma(x);
        }
        let r = enc.rho(term(&blocks));
        enc.sigma_inverse(r)
            .ok_or_else(|| Error::Internal("retraction left the sigma image".into()))
    })
}

fn projections(domain: &[String], arity: usize, weights: &[i64]) -> Result<Vec<WeightedOperation>> {
    weights
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            Ok(WeightedOperation {
                name: format!("e{}", i + 1),
                op: OperationTable::projection(domain.to_vec(), arity, i)?,
                weight: int(w),
            })
        })
        .collect()
}

fn term_support(enc: &Encoding, arity: usize, terms: &[(i64, Term)]) -> Result<Vec<WeightedOperation>> {
    terms
        .iter()
        .enumerate()
        .map(|(i, &(w, t))| {
            Ok(WeightedOperation {
                name: format!("phi{}", i + 1),
                op: term_operation(enc, arity, t)?,
                weight: int(w),
            })
        })
        .collect()
}

const OMEGA2_TERMS: [(i64, Term); 4] = [
    (1, |b| b[0] & b[1]),
    (1, |b| (b[0] | b[1]) & b[2]),
    (1, |b| (b[0] | b[1] | b[2]) & b[3]),
    (1, |b| b[0] | b[1] | b[2] | b[3]),
];

// b[0] is b_1 and so on.
const OMEGA_K_TERMS: [(i64, Term); 16] = [
    (3, |b| b[0] & b[3]),
    (2, |b| b[0] & b[6]),
    (2, |b| b[1] & b[4]),
    (3, |b| b[1] & b[7]),
    (1, |b| (b[0] | b[3]) & b[2]),
    (1, |b| (b[1] | b[7]) & b[5]),
    (2, |b| (b[0] | b[3]) & (b[1] | b[4]) & b[2]),
    (2, |b| (b[0] | b[6]) & (b[1] | b[7]) & b[5]),
    (2, |b| (b[0] | b[1] | b[3] | b[4]) & (b[0] | b[1] | b[6] | b[7])),
    (1, |b| (((b[0] | b[3]) & (b[1] | b[4])) | b[2]) & (b[1] | b[5] | b[7])),
    (1, |b| (((b[0] | b[6]) & (b[1] | b[7])) | b[5]) & (b[0] | b[2] | b[3])),
    (1, |b| (((b[0] | b[3]) & (b[1] | b[4])) | b[2]) & (((b[0] | b[6]) & (b[1] | b[7])) | b[5])),
    (1, |b| ((b[0] | b[3]) & (b[1] | b[4])) | ((b[0] | b[6]) & (b[1] | b[7])) | b[2] | b[5]),
    (1, |b| {
        (b[0] | b[1] | b[3] | b[4] | b[6] | b[7])
            & (((b[0] | b[3]) & (b[1] | b[4])) | b[1] | b[2] | b[5] | b[7])
    }),
    (1, |b| {
        (b[0] | b[1] | b[3] | b[4] | b[6] | b[7])
            & (((b[0] | b[6]) & (b[1] | b[7])) | b[0] | b[2] | b[3] | b[5])
    }),
    (2, |b| b.iter().fold(0, |acc, &x| acc | x)),
];

/// A standard weighted polymorphism with the tuples and target function
/// for which it yields a positive value.
#[derive(Clone, Debug)]
pub struct StandardWpol {
    pub name: String,
    pub omega: WeightedPolymorphism,
    pub encoding: Encoding,
    pub target: CostFunction,
    pub tuples: Vec<Vec<usize>>,
}

pub const STANDARD_WPOLS: &[&str] = &["omega2", "omega_k(3)"];

/// 4-ary, over `0, 1, -1`: the four projections weigh -1, the four
/// retracted chain terms of the pair encoding weigh 1.
pub fn omega2() -> Result<StandardWpol> {
    let enc = Encoding::pair();
    let mut support = projections(enc.domain(), 4, &[-1, -1, -1, -1])?;
    support.extend(term_support(&enc, 4, &OMEGA2_TERMS)?);
    let target = bisub3()?;
    let tuples = [["0", "1", "-1"], ["0", "-1", "-1"], ["0", "-1", "1"], ["-1", "1", "1"]]
        .iter()
        .map(|t| target.parse_point(t))
        .collect::<Result<_>>()?;
    Ok(StandardWpol {
        name: "omega2".into(),
        omega: WeightedPolymorphism::new(4, support)?,
        encoding: enc,
        target,
        tuples,
    })
}

/// 8-ary, over `[0, k]`, for `3 <= k <= MAX_OMEGA_K`. The sixteen terms
/// are evaluated through the unary encoding of width `k`; on labels up to
/// 3 this agrees with width 3.
pub fn omega_k(k: usize) -> Result<StandardWpol> {
    if !(3..=MAX_OMEGA_K).contains(&k) {
        return Err(Error::InvalidArgument(format!("omega_k needs 3 <= k <= {MAX_OMEGA_K}, got {k}")));
    }
    let enc = Encoding::unary(k)?;
    let mut support = projections(enc.domain(), 8, &[-5, -5, -3, -3, -2, -3, -2, -3])?;
    support.extend(term_support(&enc, 8, &OMEGA_K_TERMS)?);
    let target = ksub2(k)?;
    let tuples = [(1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)]
        .iter()
        .map(|&(a, b)| vec![a, b])
        .collect();
    Ok(StandardWpol {
        name: format!("omega_k({k})"),
        omega: WeightedPolymorphism::new(8, support)?,
        encoding: enc,
        target,
        tuples,
    })
}

pub fn standard_wpol(spec: &str) -> Result<StandardWpol> {
    let (name, arg) = split_call(spec)?;
    match name {
        "omega2" if arg.is_none() => omega2(),
        "omega_k" => omega_k(parse_k(name, arg)?),
        _ => Err(Error::UnknownName(spec.to_string())),
    }
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
struct OperationJson {
    domain: Vec<String>,
    arity: usize,
    table: serde_json::Map<String, serde_json::Value>,
}

impl Serialize for OperationTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.domain.len();
        let mut table = serde_json::Map::new();
        let mut args = vec![0usize; self.arity];
        for &v in &self.table {
            let key: Vec<&str> = args.iter().map(|&a| self.domain[a].as_str()).collect();
            table.insert(key.join(","), self.domain[v as usize].clone().into());
            for a in args.iter_mut().rev() {
                *a += 1;
                if *a < d {
                    break;
                }
                *a = 0;
            }
        }
        OperationJson { domain: self.domain.clone(), arity: self.arity, table }.serialize(s)
    }
}

fn operation_from_json(raw: OperationJson) -> Result<OperationTable> {
    let pos = |l: &str| {
        raw.domain
            .iter()
            .position(|x| x == l.trim())
            .ok_or_else(|| Error::InvalidLabel(l.to_string()))
    };
    let d = raw.domain.len();
    let mut table: Vec<Option<u8>> = vec![None; table_len(d.max(1), raw.arity)?];
    for (key, value) in &raw.table {
        let parts: Vec<&str> = key.split(',').collect();
        if parts.len() != raw.arity {
            return Err(Error::Parse(format!("table key `{key}` has wrong arity")));
        }
        let idx = parts.iter().try_fold(0usize, |acc, p| Ok::<_, Error>(acc * d + pos(p)?))?;
        let v = value
            .as_str()
            .ok_or_else(|| Error::Parse(format!("table value for `{key}` is not a label")))?;
        if table[idx].replace(pos(v)? as u8).is_some() {
            return Err(Error::Parse(format!("duplicate table key `{key}`")));
        }
    }
    let table = table
        .into_iter()
        .map(|v| v.ok_or_else(|| Error::Parse("operation table is not total".into())))
        .collect::<Result<Vec<_>>>()?;
    OperationTable::new(raw.domain, raw.arity, table)
}

impl<'de> Deserialize<'de> for OperationTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        operation_from_json(OperationJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct WeightedOperationJson {
    name: String,
    op: OperationTable,
    weight: String,
}

#[derive(Serialize, Deserialize)]
struct WpolJson {
    arity: usize,
    support: Vec<WeightedOperationJson>,
}

impl Serialize for WeightedPolymorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let support = self
            .support
            .iter()
            .map(|w| WeightedOperationJson {
                name: w.name.clone(),
                op: w.op.clone(),
                weight: format_rational(&w.weight),
            })
            .collect();
        WpolJson { arity: self.arity, support }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightedPolymorphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = WpolJson::deserialize(d)?;
        let support = raw
            .support
            .into_iter()
            .map(|w| {
                Ok(WeightedOperation { name: w.name, op: w.op, weight: parse_rational(&w.weight)? })
            })
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        WeightedPolymorphism::new(raw.arity, support).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(f: &CostFunction, p: &[&str]) -> Vec<usize> {
        f.parse_point(p).unwrap()
    }

    #[test]
    fn omega2_refutes_bisub3() {
        let w = omega2().unwrap();
        assert_eq!(w.omega.support().len(), 8);
        assert!(w.omega.weight_sum().is_zero());
        let phi = |i: usize| w.omega.support()[4 + i].op.apply_operation(&w.tuples).unwrap();
        assert_eq!(phi(0), labels(&w.target, &["0", "0", "-1"]));
        assert_eq!(phi(1), labels(&w.target, &["0", "-1", "0"]));
        assert_eq!(phi(2), labels(&w.target, &["0", "1", "1"]));
        assert_eq!(phi(3), labels(&w.target, &["-1", "0", "0"]));
        let r = refutation_value(&w.omega, &w.target, &w.tuples).unwrap();
        assert_eq!(r.total, ExtRat::int(1));
        assert!(r.refutes());
    }

    #[test]
    fn projections_are_detected() {
        let w = omega2().unwrap();
        for (i, op) in w.omega.support().iter().enumerate() {
            assert_eq!(op.op.is_projection(), (i < 4).then_some(i));
        }
        let t = &w.tuples;
        assert_eq!(w.omega.support()[0].op.apply_operation(t).unwrap(), t[0]);
    }

    #[test]
    fn equal_tuples_give_zero() {
        let w = omega2().unwrap();
        let x = vec![1, 2, 0];
        let r = refutation_value(&w.omega, &w.target, &vec![x; 4]).unwrap();
        assert_eq!(r.total, ExtRat::zero());
    }

    #[test]
    fn negative_non_projection_is_rejected() {
        let mut w = omega2().unwrap().omega;
        w.support[4].weight = int(-1);
        w.support[0].weight = int(1);
        let check = validate_wpol(&w, &[], 0, 0).unwrap();
        assert_eq!(check.violation, Some(WpolViolation::NegativeNonProjection("phi1".into())));
    }

    #[test]
    fn validate_catches_bisub3() {
        let w = omega2().unwrap();
        let check = validate_wpol(&w.omega, std::slice::from_ref(&w.target), 100, 1).unwrap();
        assert!(!check.holds);
        assert!(matches!(check.violation, Some(WpolViolation::Inequality { .. })));
    }

    #[test]
    fn json_round_trip() {
        let w = omega2().unwrap().omega;
        let s = serde_json::to_string(&w).unwrap();
        let back: WeightedPolymorphism = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn omega_k_bounds() {
        assert!(omega_k(2).is_err());
        assert!(standard_wpol("omega_k(6)").is_err());
        assert!(standard_wpol("omega3").is_err());
    }
}
