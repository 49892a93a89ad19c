//! Dense cost-function tables over finite labeled domains.
//!
//! A point of `D^n` is a slice of label positions (`0..|D|`); the table is
//! row-major in that order, first coordinate most significant. Label order
//! is part of the function's identity: the lattice properties read position
//! 0 as the bottom element (`0` for submodular and k-submodular checks,
//! `bot` for the diamond).

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeFamily;
use crate::rational::{ExtRat, Rational};

/// Largest table we are willing to materialize.
pub const MAX_TABLE: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostFunction {
    domain: Vec<String>,
    arity: usize,
    table: Vec<ExtRat>,
}

fn table_size(d: usize, arity: usize) -> Result<usize> {
    let mut size = 1usize;
    for _ in 0..arity {
        size = size
            .checked_mul(d)
            .filter(|&s| s <= MAX_TABLE)
            .ok_or_else(|| Error::TooLarge(format!("{d}^{arity} table entries")))?;
    }
    Ok(size)
}

impl CostFunction {
    pub fn new(domain: Vec<String>, arity: usize, table: Vec<ExtRat>) -> Result<Self> {
        if domain.is_empty() {
            return Err(Error::InvalidArgument("empty domain".into()));
        }
        if arity == 0 {
            return Err(Error::InvalidArgument("arity must be at least 1".into()));
        }
        for (i, a) in domain.iter().enumerate() {
            if a.is_empty() || a.contains(',') {
                return Err(Error::InvalidLabel(a.clone()));
            }
            if domain[..i].contains(a) {
                return Err(Error::InvalidArgument(format!("duplicate label `{a}`")));
            }
        }
        let size = table_size(domain.len(), arity)?;
        if table.len() != size {
            return Err(Error::LengthMismatch { expected: size, got: table.len() });
        }
        Ok(CostFunction { domain, arity, table })
    }

    /// Tabulate `f` over all points in row-major order.
    pub fn from_fn(
        domain: Vec<String>,
        arity: usize,
        mut f: impl FnMut(&[usize]) -> ExtRat,
    ) -> Result<Self> {
        let size = table_size(domain.len(), arity)?;
        let d = domain.len();
        let mut point = vec![0usize; arity];
        let mut table = Vec::with_capacity(size);
        for _ in 0..size {
            table.push(f(&point));
            increment(&mut point, d);
        }
        CostFunction::new(domain, arity, table)
    }

    pub fn constant(domain: Vec<String>, arity: usize, value: ExtRat) -> Result<Self> {
        CostFunction::from_fn(domain, arity, |_| value.clone())
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[ExtRat] {
        &self.table
    }

    pub fn domain_size(&self) -> usize {
        self.domain.len()
    }

    pub fn index_of(&self, point: &[usize]) -> usize {
        debug_assert_eq!(point.len(), self.arity);
        point.iter().fold(0, |acc, &p| acc * self.domain.len() + p)
    }

    pub fn point_of(&self, mut index: usize) -> Vec<usize> {
        let d = self.domain.len();
        let mut point = vec![0; self.arity];
        for slot in point.iter_mut().rev() {
            *slot = index % d;
            index /= d;
        }
        point
    }

    pub fn value(&self, point: &[usize]) -> &ExtRat {
        &self.table[self.index_of(point)]
    }

    pub fn value_checked(&self, point: &[usize]) -> Result<&ExtRat> {
        self.check_point(point)?;
        Ok(self.value(point))
    }

    pub fn set(&mut self, point: &[usize], value: ExtRat) {
        let i = self.index_of(point);
        self.table[i] = value;
    }

    pub fn check_point(&self, point: &[usize]) -> Result<()> {
        if point.len() != self.arity {
            return Err(Error::LengthMismatch { expected: self.arity, got: point.len() });
        }
        for &p in point {
            if p >= self.domain.len() {
                return Err(Error::LabelOutOfRange { index: p, size: self.domain.len() });
            }
        }
        Ok(())
    }

    pub fn label_position(&self, label: &str) -> Result<usize> {
        let label = label.trim();
        self.domain
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::InvalidLabel(label.to_string()))
    }

    pub fn parse_point<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        if labels.len() != self.arity {
            return Err(Error::LengthMismatch { expected: self.arity, got: labels.len() });
        }
        labels.iter().map(|l| self.label_position(l.as_ref())).collect()
    }

    pub fn point_labels(&self, point: &[usize]) -> Vec<String> {
        point.iter().map(|&p| self.domain[p].clone()).collect()
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.table.len()).map(|i| self.point_of(i))
    }

    /// Indices of the finite entries, in row-major order.
    pub fn dom_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.table.iter().enumerate().filter(|(_, v)| v.is_finite()).map(|(i, _)| i)
    }

    pub fn is_finite_everywhere(&self) -> bool {
        self.table.iter().all(ExtRat::is_finite)
    }
}

fn increment(point: &mut [usize], d: usize) {
    for slot in point.iter_mut().rev() {
        *slot += 1;
        if *slot < d {
            return;
        }
        *slot = 0;
    }
}

pub fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

pub fn binary_domain() -> Vec<String> {
    labels(&["0", "1"])
}

// ---------------------------------------------------------------------------
// Properties

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    Submodular,
    KSubmodular(usize),
    DiamondSubmodular(usize),
    MonotoneNondecreasing,
    MonotoneNonincreasing,
}

impl Property {
    fn family(&self) -> Option<LatticeFamily> {
        match *self {
            Property::Submodular => Some(LatticeFamily::Boolean { m: 1 }),
            Property::KSubmodular(k) => Some(LatticeFamily::Ksub { k }),
            Property::DiamondSubmodular(k) => Some(LatticeFamily::Diamond { k }),
            _ => None,
        }
    }

    fn expected_labels(&self) -> usize {
        match *self {
            Property::Submodular
            | Property::MonotoneNondecreasing
            | Property::MonotoneNonincreasing => 2,
            Property::KSubmodular(k) => k + 1,
            Property::DiamondSubmodular(k) => k + 2,
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Submodular => write!(f, "submodular"),
            Property::KSubmodular(k) => write!(f, "ksubmodular({k})"),
            Property::DiamondSubmodular(k) => write!(f, "diamond_submodular({k})"),
            Property::MonotoneNondecreasing => write!(f, "monotone_nondecreasing"),
            Property::MonotoneNonincreasing => write!(f, "monotone_nonincreasing"),
        }
    }
}

/// Split `name(arg)` into `("name", Some("arg"))`.
pub(crate) fn split_call(s: &str) -> Result<(&str, Option<&str>)> {
    let s = s.trim();
    match s.find('(') {
        None => Ok((s, None)),
        Some(open) => {
            let inner = s[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in `{s}`")))?;
            Ok((s[..open].trim(), Some(inner.trim())))
        }
    }
}

pub(crate) fn parse_k(name: &str, arg: Option<&str>) -> Result<usize> {
    let arg = arg.ok_or_else(|| Error::Parse(format!("`{name}` needs a parameter k")))?;
    arg.parse::<usize>()
        .map_err(|_| Error::Parse(format!("bad parameter `{arg}` for `{name}`")))
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = split_call(s)?;
        let p = match name {
            "submodular" => Property::Submodular,
            "bisubmodular" => Property::KSubmodular(2),
            "ksubmodular" => Property::KSubmodular(parse_k(name, arg)?),
            "diamond_submodular" => Property::DiamondSubmodular(parse_k(name, arg)?),
            "monotone_nondecreasing" => Property::MonotoneNondecreasing,
            "monotone_nonincreasing" => Property::MonotoneNonincreasing,
            _ => return Err(Error::UnknownName(s.to_string())),
        };
        if matches!(p, Property::KSubmodular(0) | Property::DiamondSubmodular(0)) {
            return Err(Error::InvalidArgument(format!("`{s}` needs k >= 1")));
        }
        Ok(p)
    }
}

/// A point pair refuting a property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `f(x) + f(y) < f(meet) + f(join)`.
    Pair { x: Vec<usize>, y: Vec<usize>, meet: Vec<usize>, join: Vec<usize> },
    /// `lower` and `upper` differ in one coordinate, raised from label 0 to
    /// label 1, and the value moves the wrong way.
    Step { lower: Vec<usize>, upper: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyCheck {
    pub holds: bool,
    pub violation: Option<Violation>,
}

/// `a + b >= c + d` under the convention that an infinite left side holds
/// and a finite left side against an infinite right side fails.
pub(crate) fn pair_inequality_holds(a: &ExtRat, b: &ExtRat, c: &ExtRat, d: &ExtRat) -> bool {
    let lhs = a + b;
    if lhs.is_infinite() {
        return true;
    }
    lhs >= c + d
}

pub fn check_property(f: &CostFunction, property: Property) -> Result<PropertyCheck> {
    let expected = property.expected_labels();
    if f.domain_size() != expected {
        return Err(Error::DomainMismatch(format!(
            "{property} needs {expected} labels, function has {}",
            f.domain_size()
        )));
    }
    let violation = match property.family() {
        Some(family) => first_lattice_violation(f, family),
        None => first_monotone_violation(f, property == Property::MonotoneNondecreasing),
    };
    Ok(PropertyCheck { holds: violation.is_none(), violation })
}

fn first_lattice_violation(f: &CostFunction, family: LatticeFamily) -> Option<Violation> {
    let size = f.table.len();
    if family == (LatticeFamily::Boolean { m: 1 }) {
        // Row-major indices over {0,1} are the points themselves.
        for i in 0..size {
            for j in i + 1..size {
                let (mi, ji) = (i & j, i | j);
                if mi == i || mi == j {
                    continue;
                }
                if !pair_inequality_holds(&f.table[i], &f.table[j], &f.table[mi], &f.table[ji]) {
                    return Some(Violation::Pair {
                        x: f.point_of(i),
                        y: f.point_of(j),
                        meet: f.point_of(mi),
                        join: f.point_of(ji),
                    });
                }
            }
        }
        return None;
    }
    let points: Vec<Vec<u32>> =
        (0..size).map(|i| f.point_of(i).into_iter().map(|p| p as u32).collect()).collect();
    for i in 0..size {
        for j in i + 1..size {
            let (m, jn) = family.meet_join_unchecked(&points[i], &points[j]);
            let m: Vec<usize> = m.0.iter().map(|&v| v as usize).collect();
            let jn: Vec<usize> = jn.0.iter().map(|&v| v as usize).collect();
            let (mi, ji) = (f.index_of(&m), f.index_of(&jn));
            if (mi == i && ji == j) || (mi == j && ji == i) {
                continue;
            }
            if !pair_inequality_holds(&f.table[i], &f.table[j], &f.table[mi], &f.table[ji]) {
                return Some(Violation::Pair {
                    x: f.point_of(i),
                    y: f.point_of(j),
                    meet: m,
                    join: jn,
                });
            }
        }
    }
    None
}

fn first_monotone_violation(f: &CostFunction, nondecreasing: bool) -> Option<Violation> {
    for lower in f.points() {
        for c in 0..f.arity {
            if lower[c] != 0 {
                continue;
            }
            let mut upper = lower.clone();
            upper[c] = 1;
            let (a, b) = (f.value(&lower), f.value(&upper));
            let ok = if nondecreasing { a <= b } else { a >= b };
            if !ok {
                return Some(Violation::Step { lower, upper });
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Weighted relational clone operations

/// Pointwise `alpha * f + beta`.
pub fn scale_shift(f: &CostFunction, alpha: &Rational, beta: &Rational) -> Result<CostFunction> {
    if alpha.is_negative() {
        return Err(Error::InvalidArgument(format!("negative scale {alpha}")));
    }
    Ok(CostFunction {
        domain: f.domain.clone(),
        arity: f.arity,
        table: f.table.iter().map(|v| v.affine(alpha, beta)).collect(),
    })
}

/// `h(x) = f(x[s1[0]], ..) + g(x[s2[0]], ..)` on `D^n`. The scope maps are
/// 0-based.
pub fn add(
    f: &CostFunction,
    g: &CostFunction,
    s1: &[usize],
    s2: &[usize],
    n: usize,
) -> Result<CostFunction> {
    if f.domain != g.domain {
        return Err(Error::DomainMismatch(format!("{:?} vs {:?}", f.domain, g.domain)));
    }
    if s1.len() != f.arity {
        return Err(Error::LengthMismatch { expected: f.arity, got: s1.len() });
    }
    if s2.len() != g.arity {
        return Err(Error::LengthMismatch { expected: g.arity, got: s2.len() });
    }
    if let Some(&bad) = s1.iter().chain(s2).find(|&&i| i >= n) {
        return Err(Error::InvalidArgument(format!("scope index {bad} out of range for arity {n}")));
    }
    let mut pf = vec![0; f.arity];
    let mut pg = vec![0; g.arity];
    CostFunction::from_fn(f.domain.clone(), n, |x| {
        for (slot, &i) in pf.iter_mut().zip(s1) {
            *slot = x[i];
        }
        for (slot, &i) in pg.iter_mut().zip(s2) {
            *slot = x[i];
        }
        f.value(&pf) + g.value(&pg)
    })
}

/// Minimize out the last `drop` coordinates of an `(keep + drop)`-ary `f`.
pub fn partial_min(f: &CostFunction, keep: usize, drop: usize) -> Result<CostFunction> {
    if keep + drop != f.arity {
        return Err(Error::LengthMismatch { expected: f.arity, got: keep + drop });
    }
    if drop >= f.arity {
        return Err(Error::InvalidArgument(format!(
            "cannot minimize out {drop} of {} coordinates",
            f.arity
        )));
    }
    let block = f.table.len() / table_size(f.domain.len(), keep)?;
    let table = f
        .table
        .chunks(block)
        .map(|chunk| chunk.iter().min().cloned().unwrap_or(ExtRat::Infinity))
        .collect();
    CostFunction::new(f.domain.clone(), keep, table)
}

/// `x -> f(complement of x)` on a two-label domain.
pub fn complement_function(f: &CostFunction) -> Result<CostFunction> {
    if f.domain_size() != 2 {
        return Err(Error::DomainMismatch(format!(
            "complement needs two labels, got {}",
            f.domain_size()
        )));
    }
    let last = f.table.len() - 1;
    Ok(CostFunction {
        domain: f.domain.clone(),
        arity: f.arity,
        table: (0..=last).map(|i| f.table[last - i].clone()).collect(),
    })
}

/// Global minimum and its lexicographically least argmin. An all-infinite
/// function yields `(+inf, 0..0)`.
pub fn brute_force_min(f: &CostFunction) -> (ExtRat, Vec<usize>) {
    let mut best = 0;
    for (i, v) in f.table.iter().enumerate() {
        if *v < f.table[best] {
            best = i;
        }
    }
    (f.table[best].clone(), f.point_of(best))
}

// ---------------------------------------------------------------------------
// Builtins

pub const BUILTIN_FUNCTIONS: &[&str] = &[
    "and2",
    "and3",
    "h0",
    "h1",
    "h2",
    "bisub3",
    "weighted_equality(2)",
    "ksub2(3)",
    "diamond_distance(2)",
    "diamond_distance(3)",
];

pub fn weighted_equality(domain: Vec<String>) -> Result<CostFunction> {
    CostFunction::from_fn(domain, 2, |x| {
        if x[0] == x[1] {
            ExtRat::zero()
        } else {
            ExtRat::Infinity
        }
    })
}

/// `and_n`: 1 at the all-ones point, 0 elsewhere.
pub fn and_n(n: usize) -> Result<CostFunction> {
    CostFunction::from_fn(binary_domain(), n, |x| {
        ExtRat::int(x.iter().all(|&v| v == 1) as i64)
    })
}

/// The ternary bisubmodular function over labels `0, 1, -1`.
pub fn bisub3() -> Result<CostFunction> {
    CostFunction::from_fn(labels(&["0", "1", "-1"]), 3, |x| {
        let v = match x {
            [0, 0, 0] => -1,
            [0, 1, 1] | [1, 0, 1] | [1, 1, 0] => 1,
            [1, 1, 1] => 2,
            _ => 0,
        };
        ExtRat::int(v)
    })
}

/// Binary function on `[0,k]`: -1 at `(0,0)`, 1 at `(1,1)`, 0 elsewhere.
pub fn ksub2(k: usize) -> Result<CostFunction> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("ksub2 needs k >= 2, got {k}")));
    }
    let domain = (0..=k).map(|i| i.to_string()).collect();
    CostFunction::from_fn(domain, 2, |x| match x {
        [0, 0] => ExtRat::int(-1),
        [1, 1] => ExtRat::int(1),
        _ => ExtRat::zero(),
    })
}

pub fn diamond_labels(k: usize) -> Vec<String> {
    let mut d = vec!["bot".to_string()];
    d.extend((1..=k).map(|i| i.to_string()));
    d.push("top".to_string());
    d
}

/// Hasse-diagram distance on the k-diamond.
pub fn diamond_distance(k: usize) -> Result<CostFunction> {
    if k == 0 {
        return Err(Error::InvalidArgument("diamond_distance needs k >= 1".into()));
    }
    let top = k + 1;
    CostFunction::from_fn(diamond_labels(k), 2, |x| {
        let (a, b) = (x[0].min(x[1]), x[0].max(x[1]));
        let v = if a == b {
            0
        } else if (a == 0 && b != top) || (b == top && a != 0) {
            1
        } else {
            2
        };
        ExtRat::int(v)
    })
}

pub fn builtin_function(spec: &str) -> Result<CostFunction> {
    let (name, arg) = split_call(spec)?;
    let no_arg = |f: fn() -> Result<CostFunction>| {
        if arg.is_some() {
            Err(Error::InvalidArgument(format!("`{name}` takes no parameter")))
        } else {
            f()
        }
    };
    match name {
        "and2" => no_arg(|| and_n(2)),
        "and3" => no_arg(|| and_n(3)),
        "bisub3" => no_arg(bisub3),
        "h0" => no_arg(|| {
            CostFunction::new(binary_domain(), 1, vec![ExtRat::zero(), ExtRat::Infinity])
        }),
        "h1" => no_arg(|| {
            CostFunction::new(binary_domain(), 1, vec![ExtRat::Infinity, ExtRat::zero()])
        }),
        "h2" => no_arg(|| weighted_equality(binary_domain())),
        "weighted_equality" => {
            let d = match arg {
                None => 2,
                Some(_) => parse_k(name, arg)?,
            };
            if d == 0 {
                return Err(Error::InvalidArgument("weighted_equality needs a label".into()));
            }
            weighted_equality((0..d).map(|i| i.to_string()).collect())
        }
        "ksub2" => ksub2(parse_k(name, arg)?),
        "diamond_distance" => diamond_distance(parse_k(name, arg)?),
        _ => Err(Error::UnknownName(spec.to_string())),
    }
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
struct CostFunctionJson {
    domain: Vec<String>,
    arity: usize,
    table: serde_json::Map<String, serde_json::Value>,
}

impl Serialize for CostFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut table = serde_json::Map::new();
        for (i, v) in self.table.iter().enumerate() {
            let key = self.point_labels(&self.point_of(i)).join(",");
            table.insert(key, serde_json::Value::String(v.to_string()));
        }
        CostFunctionJson { domain: self.domain.clone(), arity: self.arity, table }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CostFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CostFunctionJson::deserialize(d)?;
        from_json_parts(raw).map_err(serde::de::Error::custom)
    }
}

fn from_json_parts(raw: CostFunctionJson) -> Result<CostFunction> {
    let size = table_size(raw.domain.len().max(1), raw.arity)?;
    let mut table: Vec<Option<ExtRat>> = vec![None; size];
    let probe = CostFunction::new(raw.domain.clone(), raw.arity, vec![ExtRat::zero(); size])?;
    for (key, value) in &raw.table {
        let parts: Vec<&str> = key.split(',').collect();
        let point = probe.parse_point(&parts)?;
        let v: ExtRat = match value {
            serde_json::Value::String(s) => s.parse()?,
            serde_json::Value::Number(n) => n.to_string().parse()?,
            other => return Err(Error::Parse(format!("bad table value {other}"))),
        };
        let slot = &mut table[probe.index_of(&point)];
        if slot.is_some() {
            return Err(Error::Parse(format!("duplicate table key `{key}`")));
        }
        *slot = Some(v);
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| {
                Error::Parse(format!(
                    "missing table entry `{}`",
                    probe.point_labels(&probe.point_of(i)).join(",")
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    CostFunction::new(raw.domain, raw.arity, table)
}
