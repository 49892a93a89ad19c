//! Deciding whether `f` on `D^n` is `(k, rho, sigma)`-submodular
//! representable: whether some submodular `g` on `{0,1}^{kn}` satisfies
//! `g(sigma(x)) = f(x)` for all `x` and `g(v) >= g(rho(v))` for all `v`.
//!
//! `g` is only given finite values on the smallest set containing the
//! encodings of `dom f` that is closed under meet, join and blockwise
//! `rho`. Any valid `g` is finite there (a finite left side of a
//! submodular or retraction inequality forces a finite right side), and
//! setting `g = +inf` elsewhere only removes constraints, so the decision
//! is unchanged. A constant offset is not needed since submodular
//! functions are closed under adding constants.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::bits::Bits;
use crate::costfn::{check_property, CostFunction, Property};
use crate::encoding::Encoding;
use crate::error::{Error, Result};
use crate::ratlp::{feasible, FeasResult, LinSystem};
use crate::rational::{ExtRat, Rational};

/// Largest `k * n` accepted by [`decide_representable`].
pub const MAX_DECIDE_BITS: usize = 10;
/// Largest `k * n` accepted by [`dom_closure`].
pub const MAX_CLOSURE_BITS: usize = 24;

fn check_alignment(f: &CostFunction, enc: &Encoding) -> Result<()> {
    if f.domain() != enc.domain() {
        return Err(Error::DomainMismatch(format!(
            "function labels {:?} differ from encoding labels {:?}",
            f.domain(),
            enc.domain()
        )));
    }
    Ok(())
}

fn total_bits(f: &CostFunction, enc: &Encoding, limit: usize) -> Result<usize> {
    let bits = f.arity() * enc.k();
    if bits > limit {
        return Err(Error::TooLarge(format!("k*n = {bits} exceeds {limit}")));
    }
    Ok(bits)
}

/// Smallest set containing the encodings of `dom f`, closed under `&`,
/// `|` and blockwise `rho`; sorted.
pub fn dom_closure(f: &CostFunction, enc: &Encoding) -> Result<Vec<Bits>> {
    check_alignment(f, enc)?;
    let len = total_bits(f, enc, MAX_CLOSURE_BITS)?;
    let n = f.arity();
    let mut inside = vec![false; 1usize << len];
    let mut members: Vec<u64> = Vec::new();
    let mut queue: Vec<u64> = Vec::new();
    let visit = |v: u64, inside: &mut Vec<bool>, queue: &mut Vec<u64>| {
        if !inside[v as usize] {
            inside[v as usize] = true;
            queue.push(v);
        }
    };
    for i in f.dom_indices() {
        let v = enc.encode_tuple(&f.point_of(i))?.value();
        visit(v, &mut inside, &mut queue);
    }
    while let Some(w) = queue.pop() {
        visit(enc.retract_value(w, n), &mut inside, &mut queue);
        for &u in &members {
            visit(u & w, &mut inside, &mut queue);
            visit(u | w, &mut inside, &mut queue);
        }
        members.push(w);
    }
    Ok((0..inside.len() as u64)
        .filter(|&v| inside[v as usize])
        .map(|v| Bits::from_raw(len, v))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomMode {
    /// The minimal closed set from [`dom_closure`].
    Minimal,
    /// All of `{0,1}^{kn}`; needs `f` finite everywhere.
    Full,
}

/// What a row of the decision system says.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RowTag {
    /// `g(sigma(x)) = f(x)`.
    Eq { x: Vec<usize> },
    /// `g(u) + g(v) >= g(u & v) + g(u | v)`.
    Sub { u: Bits, v: Bits },
    /// `g(v) >= g(rho(v))`.
    Rho { v: Bits },
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RepStats {
    pub variables: usize,
    pub eq_rows: usize,
    pub sub_rows: usize,
    pub rho_rows: usize,
}

#[derive(Clone, Debug)]
pub struct RepSystem {
    pub dom: Vec<Bits>,
    pub system: LinSystem,
    pub eq_tags: Vec<RowTag>,
    pub ineq_tags: Vec<RowTag>,
    pub stats: RepStats,
}

/// Linear form of a tagged row over bit vectors, with right hand side.
/// Returns `None` for an equality row at a point where `f` is infinite.
pub fn tagged_row(
    tag: &RowTag,
    f: &CostFunction,
    enc: &Encoding,
) -> Result<Option<(Vec<(Bits, Rational)>, Rational)>> {
    let one = Rational::one;
    let row = match tag {
        RowTag::Eq { x } => {
            f.check_point(x)?;
            let Some(value) = f.value(x).finite() else {
                return Ok(None);
            };
            (vec![(enc.encode_tuple(x)?, one())], value.clone())
        }
        RowTag::Sub { u, v } => {
            if u.len() != v.len() {
                return Err(Error::LengthMismatch { expected: u.len(), got: v.len() });
            }
            (
                vec![(*u, one()), (*v, one()), (u.meet(v), -one()), (u.join(v), -one())],
                Rational::zero(),
            )
        }
        RowTag::Rho { v } => (vec![(*v, one()), (enc.retract_blocks(v)?, -one())], Rational::zero()),
    };
    Ok(Some(row))
}

/// The forced-finite point of `f`, if any: the first `x` with `f(x) = +inf`
/// whose encoding lies in `dom`.
fn forced_finite(f: &CostFunction, enc: &Encoding, dom: &[Bits]) -> Result<Option<Vec<usize>>> {
    for (i, v) in f.table().iter().enumerate() {
        if v.is_infinite() {
            let x = f.point_of(i);
            if dom.binary_search(&enc.encode_tuple(&x)?).is_ok() {
                return Ok(Some(x));
            }
        }
    }
    Ok(None)
}

pub fn build_system(f: &CostFunction, enc: &Encoding, mode: DomMode) -> Result<RepSystem> {
    check_alignment(f, enc)?;
    let len = total_bits(f, enc, MAX_DECIDE_BITS)?;
    let dom = match mode {
        DomMode::Minimal => dom_closure(f, enc)?,
        DomMode::Full => {
            if !f.is_finite_everywhere() {
                return Err(Error::InvalidArgument(
                    "the full domain needs a function that is finite everywhere".into(),
                ));
            }
            Bits::all(len).collect()
        }
    };
    let index: HashMap<Bits, usize> = dom.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    let mut system = LinSystem::new(dom.len());
    let mut eq_tags = Vec::new();
    let mut ineq_tags = Vec::new();

    let lower = |tag: &RowTag| -> Result<Option<(Vec<(usize, Rational)>, Rational)>> {
        let Some((terms, rhs)) = tagged_row(tag, f, enc)? else {
            return Ok(None);
        };
        let coeffs = terms
            .into_iter()
            .map(|(b, a)| {
                index
                    .get(&b)
                    .map(|&i| (i, a))
                    .ok_or_else(|| Error::Internal(format!("{b} is outside the closed domain")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Some((coeffs, rhs)))
    };

    for i in f.dom_indices() {
        let tag = RowTag::Eq { x: f.point_of(i) };
        if let Some((coeffs, rhs)) = lower(&tag)? {
            system.add_equality(coeffs, rhs)?;
            eq_tags.push(tag);
        }
    }
    let mut ineq = Vec::new();
    for (a, u) in dom.iter().enumerate() {
        for v in &dom[a + 1..] {
            ineq.push(RowTag::Sub { u: *u, v: *v });
        }
    }
    let sub_rows = ineq.len();
    ineq.extend(dom.iter().map(|v| RowTag::Rho { v: *v }));
    for tag in ineq {
        if let Some((coeffs, rhs)) = lower(&tag)? {
            system.add_inequality(coeffs, rhs)?;
            ineq_tags.push(tag);
        }
    }
    let eq_rows = eq_tags.len();
    let stats = RepStats {
        variables: dom.len(),
        eq_rows,
        sub_rows,
        rho_rows: ineq_tags.len() - sub_rows,
    };
    Ok(RepSystem { dom, system, eq_tags, ineq_tags, stats })
}

/// Why `f` is not representable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepCertificate {
    /// Nonzero multipliers of tagged rows summing to `0 >= c` with `c > 0`;
    /// multipliers of `Sub` and `Rho` rows are positive.
    Farkas(Vec<(RowTag, Rational)>),
    /// `f(x) = +inf` but the encoding of `x` lies in the closed domain, so
    /// every valid `g` is finite there.
    ForcedFinite { x: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepVerdict {
    /// A witness `g` on `{0,1}^{kn}`, `+inf` outside the domain used.
    Feasible(CostFunction),
    Infeasible(RepCertificate),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepDecision {
    pub verdict: RepVerdict,
    pub dom_used: Vec<Bits>,
    pub stats: RepStats,
}

impl RepDecision {
    pub fn is_feasible(&self) -> bool {
        matches!(self.verdict, RepVerdict::Feasible(_))
    }
}

fn witness_function(len: usize, dom: &[Bits], values: &[Rational]) -> Result<CostFunction> {
    let mut table = vec![ExtRat::Infinity; 1usize << len];
    for (b, v) in dom.iter().zip(values) {
        table[b.value() as usize] = ExtRat::Finite(v.clone());
    }
    CostFunction::new(crate::costfn::binary_domain(), len, table)
}

pub fn decide_representable(f: &CostFunction, enc: &Encoding, mode: DomMode) -> Result<RepDecision> {
    let rep = build_system(f, enc, mode)?;
    let len = f.arity() * enc.k();
    if let Some(x) = forced_finite(f, enc, &rep.dom)? {
        return Ok(RepDecision {
            verdict: RepVerdict::Infeasible(RepCertificate::ForcedFinite { x }),
            dom_used: rep.dom,
            stats: rep.stats,
        });
    }
    let verdict = match feasible(&rep.system)? {
        FeasResult::Feasible(values) => {
            let g = witness_function(len, &rep.dom, &values)?;
            if !verify_witness(&g, f, enc)? {
                return Err(Error::Internal("representation witness failed verification".into()));
            }
            RepVerdict::Feasible(g)
        }
        FeasResult::Infeasible(cert) => {
            let mut terms = Vec::new();
            let pairs = rep.eq_tags.iter().zip(&cert.eq_multipliers);
            let pairs = pairs.chain(rep.ineq_tags.iter().zip(&cert.ineq_multipliers));
            for (tag, y) in pairs {
                if !y.is_zero() {
                    terms.push((tag.clone(), y.clone()));
                }
            }
            let cert = RepCertificate::Farkas(terms);
            check_certificate(f, enc, mode, &cert)?;
            RepVerdict::Infeasible(cert)
        }
    };
    Ok(RepDecision { verdict, dom_used: rep.dom, stats: rep.stats })
}

/// Checks a nonrepresentability certificate from scratch: the domain of
/// `mode` is recomputed, every row is rebuilt from its tag, and the
/// combination must be `0 >= c` with `c > 0`. Returns `c` for a Farkas
/// certificate and zero for a forced-finite one.
pub fn check_certificate(
    f: &CostFunction,
    enc: &Encoding,
    mode: DomMode,
    cert: &RepCertificate,
) -> Result<Rational> {
    let bad = |m: String| Err(Error::Internal(format!("invalid certificate: {m}")));
    check_alignment(f, enc)?;
    let dom = match mode {
        DomMode::Minimal => Some(dom_closure(f, enc)?),
        DomMode::Full if f.is_finite_everywhere() => None,
        DomMode::Full => return bad("the full domain needs a function that is finite everywhere".into()),
    };
    let in_dom = |b: &Bits| dom.as_ref().is_none_or(|d| d.binary_search(b).is_ok());
    match cert {
        RepCertificate::ForcedFinite { x } => {
            f.check_point(x)?;
            if f.value(x).is_finite() {
                return bad("the point has a finite value".into());
            }
            if !in_dom(&enc.encode_tuple(x)?) {
                return bad("the encoded point is outside the closed domain".into());
            }
            Ok(Rational::zero())
        }
        RepCertificate::Farkas(terms) => {
            let len = f.arity() * enc.k();
            let mut combined: HashMap<Bits, Rational> = HashMap::new();
            let mut rhs = Rational::zero();
            for (tag, y) in terms {
                if !matches!(tag, RowTag::Eq { .. }) && y.is_negative() {
                    return bad("negative multiplier on an inequality".into());
                }
                let Some((row, b)) = tagged_row(tag, f, enc)? else {
                    return bad("equality row at an infinite value".into());
                };
                for (v, a) in row {
                    if v.len() != len || !in_dom(&v) {
                        return bad(format!("{v} is outside the closed domain"));
                    }
                    *combined.entry(v).or_insert_with(Rational::zero) += a * y;
                }
                rhs += b * y;
            }
            if combined.values().any(|c| !c.is_zero()) {
                return bad("combined row is not zero".into());
            }
            if !rhs.is_positive() {
                return bad("combined right hand side is not positive".into());
            }
            Ok(rhs)
        }
    }
}

/// `g` submodular, `g(sigma(x)) = f(x)` for every `x`, and
/// `g(v) >= g(rho(v))` for every `v`.
pub fn verify_witness(g: &CostFunction, f: &CostFunction, enc: &Encoding) -> Result<bool> {
    check_alignment(f, enc)?;
    let len = f.arity() * enc.k();
    if g.domain_size() != 2 || g.arity() != len {
        return Ok(false);
    }
    for i in 0..f.table().len() {
        let x = f.point_of(i);
        let v = enc.encode_tuple(&x)?;
        if g.table()[v.value() as usize] != f.table()[i] {
            return Ok(false);
        }
    }
    for v in 0..g.table().len() {
        let r = enc.retract_value(v as u64, f.arity()) as usize;
        let (gv, gr) = (&g.table()[v], &g.table()[r]);
        if gv.is_finite() && gv < gr {
            return Ok(false);
        }
    }
    Ok(check_property(g, Property::Submodular)?.holds)
}
