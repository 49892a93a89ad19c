//! Directed s-t networks with exact capacities, max-flow/min-cut, pinned
//! cut values and the representations they induce.
//!
//! Node indices are fixed: `0` is `s`, `1` is `t`, designated node `(i, l)`
//! (0-based) is `2 + i*k + l`, and extra nodes follow. Designated nodes are
//! named `i^l` with 1-based `i, l`; when `k = 1` the bare name `i` is used.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::costfn::CostFunction;
use crate::encoding::Encoding;
use crate::error::{Error, Result};
use crate::rational::{ratio, ExtRat, Rational};

pub const SOURCE: usize = 0;
pub const SINK: usize = 1;

/// Designated nodes beyond this are refused by the exhaustive routines.
pub const MAX_DESIGNATED: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub cap: ExtRat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    n: usize,
    k: usize,
    extras: Vec<String>,
    edges: Vec<Edge>,
}

impl Network {
    /// Builds a network; parallel edges are merged by adding capacities and
    /// edges are kept sorted by `(from, to)`.
    pub fn new(n: usize, k: usize, extras: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Network("k must be at least 1".into()));
        }
        let designated = n
            .checked_mul(k)
            .filter(|&d| d <= 64)
            .ok_or_else(|| Error::TooLarge(format!("{n} x {k} designated nodes")))?;
        for (i, name) in extras.iter().enumerate() {
            if name == "s" || name == "t" || parse_designated(name, n, k).is_some() {
                return Err(Error::Network(format!("extra node `{name}` clashes with a reserved name")));
            }
            if name.is_empty() || extras[..i].contains(name) {
                return Err(Error::Network(format!("duplicate or empty node name `{name}`")));
            }
        }
        let num_nodes = 2 + designated + extras.len();
        let mut merged: Vec<Edge> = Vec::with_capacity(edges.len());
        let mut sorted = edges;
        sorted.sort_by_key(|e| (e.from, e.to));
        for e in sorted {
            if e.from >= num_nodes || e.to >= num_nodes {
                return Err(Error::Network(format!("edge ({}, {}) uses an unknown node", e.from, e.to)));
            }
            if e.to == SOURCE {
                return Err(Error::Network("edge into s".into()));
            }
            if e.from == SINK {
                return Err(Error::Network("edge out of t".into()));
            }
            if e.from == e.to {
                return Err(Error::Network("self-loop".into()));
            }
            if e.cap.is_negative() {
                return Err(Error::Network(format!("negative capacity {}", e.cap)));
            }
            match merged.last_mut() {
                Some(last) if last.from == e.from && last.to == e.to => last.cap += &e.cap,
                _ => merged.push(e),
            }
        }
        Ok(Network { n, k, extras, edges: merged })
    }

    /// An edgeless network on `s`, `t` and the designated nodes.
    pub fn empty(n: usize, k: usize) -> Result<Self> {
        Network::new(n, k, Vec::new(), Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn extras(&self) -> &[String] {
        &self.extras
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_designated(&self) -> usize {
        self.n * self.k
    }

    pub fn num_nodes(&self) -> usize {
        2 + self.num_designated() + self.extras.len()
    }

    /// Node index of designated `(i, l)`, both 0-based.
    pub fn designated(&self, i: usize, l: usize) -> usize {
        2 + i * self.k + l
    }

    pub fn node_name(&self, v: usize) -> String {
        match v {
            SOURCE => "s".into(),
            SINK => "t".into(),
            v if v < 2 + self.num_designated() => {
                let (i, l) = ((v - 2) / self.k, (v - 2) % self.k);
                if self.k == 1 {
                    format!("{}", i + 1)
                } else {
                    format!("{}^{}", i + 1, l + 1)
                }
            }
            v => self.extras[v - 2 - self.num_designated()].clone(),
        }
    }

    pub fn node_index(&self, name: &str) -> Result<usize> {
        let name = name.trim();
        match name {
            "s" => Ok(SOURCE),
            "t" => Ok(SINK),
            _ => {
                if let Some((i, l)) = parse_designated(name, self.n, self.k) {
                    return Ok(self.designated(i, l));
                }
                self.extras
                    .iter()
                    .position(|e| e == name)
                    .map(|p| 2 + self.num_designated() + p)
                    .ok_or_else(|| Error::Network(format!("unknown node `{name}`")))
            }
        }
    }

    pub fn node_names(&self) -> Vec<String> {
        (0..self.num_nodes()).map(|v| self.node_name(v)).collect()
    }

    /// Capacity of the edge `(from, to)`, zero if absent.
    pub fn cap(&self, from: usize, to: usize) -> ExtRat {
        self.edges
            .binary_search_by_key(&(from, to), |e| (e.from, e.to))
            .map(|i| self.edges[i].cap.clone())
            .unwrap_or_else(|_| ExtRat::zero())
    }

    /// `C(X)`: capacity of edges leaving `X ∪ {s}` and not entering `X`.
    /// `side[v]` marks membership; `s` is always in and `t` always out.
    pub fn cut_value(&self, side: &[bool]) -> ExtRat {
        let inside = |v: usize| v == SOURCE || (v != SINK && side[v]);
        let mut total = ExtRat::zero();
        for e in &self.edges {
            if inside(e.from) && !inside(e.to) {
                total += &e.cap;
            }
        }
        total
    }

    /// Same network with extra nodes renamed apart and appended to `self`,
    /// sharing `s`, `t` and the designated nodes.
    pub fn disjoint_union(&self, other: &Network) -> Result<Network> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::Network("union needs equal n and k".into()));
        }
        let base = 2 + self.num_designated();
        let mut extras = self.extras.clone();
        let shift = extras.len();
        for name in &other.extras {
            let mut fresh = format!("{name}'");
            while extras.contains(&fresh) {
                fresh.push('\'');
            }
            extras.push(fresh);
        }
        let remap = |v: usize| if v < base { v } else { v + shift };
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| Edge {
            from: remap(e.from),
            to: remap(e.to),
            cap: e.cap.clone(),
        }));
        Network::new(self.n, self.k, extras, edges)
    }
}

fn parse_designated(name: &str, n: usize, k: usize) -> Option<(usize, usize)> {
    let (i, l) = match name.split_once('^') {
        Some((i, l)) => (i.parse::<usize>().ok()?, l.parse::<usize>().ok()?),
        None if k == 1 => (name.parse::<usize>().ok()?, 1),
        None => return None,
    };
    if (1..=n).contains(&i) && (1..=k).contains(&l) {
        Some((i - 1, l - 1))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Max flow

#[derive(Clone, Debug, PartialEq, Eq)]
enum Cap {
    Fin(BigInt),
    Inf,
}

struct Residual {
    head: Vec<usize>,
    cap: Vec<Cap>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn add(&mut self, from: usize, to: usize, cap: Cap) {
        let id = self.head.len();
        self.head.push(to);
        self.cap.push(cap);
        self.adj[from].push(id);
        self.head.push(from);
        self.cap.push(Cap::Fin(BigInt::zero()));
        self.adj[to].push(id + 1);
    }

    fn open(&self, arc: usize) -> bool {
        match &self.cap[arc] {
            Cap::Inf => true,
            Cap::Fin(c) => c.is_positive(),
        }
    }

    fn reachable(&self, from: usize, only_infinite: bool) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let ok = if only_infinite { self.cap[a] == Cap::Inf } else { self.open(a) };
                let v = self.head[a];
                if ok && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinCut {
    pub value: ExtRat,
    /// Source side of the minimal minimum cut, sorted node indices.
    pub source_side: Vec<usize>,
}

/// Minimum s-t cut by Edmonds-Karp on capacities scaled to integers.
///
/// The returned side is the set reachable from `s` in the final residual
/// graph, which is the inclusion-minimal minimum cut. If some s-t path uses
/// only infinite edges the value is `+inf` and the side is `{s}`.
pub fn min_cut(net: &Network) -> Result<MinCut> {
    let nodes = net.num_nodes();
    let scale = net
        .edges
        .iter()
        .filter_map(|e| e.cap.finite())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut res = Residual {
        head: Vec::new(),
        cap: Vec::new(),
        adj: vec![Vec::new(); nodes],
    };
    for e in &net.edges {
        let cap = match &e.cap {
            ExtRat::Infinity => Cap::Inf,
            ExtRat::Finite(c) => Cap::Fin((c * Rational::from_integer(scale.clone())).to_integer()),
        };
        res.add(e.from, e.to, cap);
    }
    if res.reachable(SOURCE, true)[SINK] {
        return Ok(MinCut { value: ExtRat::Infinity, source_side: vec![SOURCE] });
    }

    let mut flow = BigInt::zero();
    loop {
        let mut via: Vec<Option<usize>> = vec![None; nodes];
        let mut seen = vec![false; nodes];
        seen[SOURCE] = true;
        let mut queue = VecDeque::from([SOURCE]);
        while let Some(u) = queue.pop_front() {
            if u == SINK {
                break;
            }
            for &a in &res.adj[u] {
                let v = res.head[a];
                if !seen[v] && res.open(a) {
                    seen[v] = true;
                    via[v] = Some(a);
                    queue.push_back(v);
                }
            }
        }
        if !seen[SINK] {
            break;
        }
        let mut path = Vec::new();
        let mut v = SINK;
        while let Some(a) = via[v] {
            path.push(a);
            v = res.head[a ^ 1];
        }
        let bottleneck = path
            .iter()
            .filter_map(|&a| match &res.cap[a] {
                Cap::Fin(c) => Some(c.clone()),
                Cap::Inf => None,
            })
            .min()
            .ok_or_else(|| Error::Internal("augmenting path of infinite capacity".into()))?;
        for &a in &path {
            if let Cap::Fin(c) = &mut res.cap[a] {
                *c -= &bottleneck;
            }
            if let Cap::Fin(c) = &mut res.cap[a ^ 1] {
                *c += &bottleneck;
            }
        }
        flow += bottleneck;
    }

    let side = res.reachable(SOURCE, false);
    let value = ExtRat::Finite(Rational::new(flow, scale));
    let check = net.cut_value(&side);
    if check != value {
        return Err(Error::Internal(format!("cut capacity {check} differs from flow value {value}")));
    }
    let source_side = (0..nodes).filter(|&v| side[v]).collect();
    Ok(MinCut { value, source_side })
}

/// Network with `s -> v` (pin 1) and `v -> t` (pin 0) infinite edges for
/// every designated node. `pin` lists designated bits in node order.
pub fn pinned(net: &Network, pin: &Bits) -> Result<Network> {
    let d = net.num_designated();
    if pin.len() != d {
        return Err(Error::LengthMismatch { expected: d, got: pin.len() });
    }
    let mut edges = net.edges.clone();
    for j in 0..d {
        let v = 2 + j;
        edges.push(if pin.get(j) {
            Edge { from: SOURCE, to: v, cap: ExtRat::Infinity }
        } else {
            Edge { from: v, to: SINK, cap: ExtRat::Infinity }
        });
    }
    Network::new(net.n, net.k, net.extras.clone(), edges)
}

/// Minimum cut capacity among cuts agreeing with `pin` on the designated
/// nodes.
pub fn c_min(net: &Network, pin: &Bits) -> Result<ExtRat> {
    Ok(min_cut(&pinned(net, pin)?)?.value)
}

/// `c_min` at every pinning, indexed by the pinning's integer value.
pub fn c_min_table(net: &Network) -> Result<Vec<ExtRat>> {
    let d = net.num_designated();
    if d > MAX_DESIGNATED {
        return Err(Error::TooLarge(format!("{d} designated nodes")));
    }
    Bits::all(d).map(|x| c_min(net, &x)).collect()
}

fn check_encoding(net: &Network, enc: &Encoding) -> Result<()> {
    if net.k != enc.k() {
        return Err(Error::Network(format!(
            "network has {} designated nodes per variable, encoding width is {}",
            net.k,
            enc.k()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractCheck {
    pub holds: bool,
    /// Lexicographically first `x` with `c_min(x) < c_min(rho(x))`.
    pub counterexample: Option<Bits>,
}

/// Checks `c_min(x) >= c_min(rho(x))` for every `x` in `{0,1}^{kn}`
/// (one max-flow per pinning).
pub fn is_retractable(net: &Network, enc: &Encoding) -> Result<RetractCheck> {
    check_encoding(net, enc)?;
    let table = c_min_table(net)?;
    for x in Bits::all(net.num_designated()) {
        let r = enc.retract_value(x.value(), net.n);
        if table[x.value() as usize] < table[r as usize] {
            return Ok(RetractCheck { holds: false, counterexample: Some(x) });
        }
    }
    Ok(RetractCheck { holds: true, counterexample: None })
}

/// `f(x) = c_min(sigma(x_1), .., sigma(x_n)) + kappa` on `D^n`.
pub fn eval_representation(net: &Network, enc: &Encoding, kappa: &Rational) -> Result<CostFunction> {
    check_encoding(net, enc)?;
    if net.n == 0 {
        return Err(Error::Network("network has no designated variables".into()));
    }
    let mut err = None;
    let f = CostFunction::from_fn(enc.domain().to_vec(), net.n, |x| {
        let v = enc.encode_tuple(x).and_then(|bits| c_min(net, &bits));
        match v {
            Ok(v) => v.affine(&Rational::one(), kappa),
            Err(e) => {
                err.get_or_insert(e);
                ExtRat::Infinity
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(f),
    }
}

/// Reverses internal edges, turns `(s, v)` into `(v, t)` and `(u, t)` into
/// `(s, u)`, and keeps `(s, t)`.
pub fn complement_network(net: &Network) -> Network {
    let edges = net
        .edges
        .iter()
        .map(|e| {
            let (from, to) = match (e.from, e.to) {
                (SOURCE, SINK) => (SOURCE, SINK),
                (SOURCE, v) => (v, SINK),
                (u, SINK) => (SOURCE, u),
                (u, v) => (v, u),
            };
            Edge { from, to, cap: e.cap.clone() }
        })
        .collect();
    Network::new(net.n, net.k, net.extras.clone(), edges).expect("complement of a valid network")
}

// ---------------------------------------------------------------------------
// Gadgets

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub network: Network,
    pub encoding: Encoding,
    pub kappa: Rational,
}

pub const GADGETS: &[&str] = &["h0", "h1", "h2", "halfpair"];

pub fn gadget(name: &str) -> Result<Gadget> {
    let inf = || ExtRat::Infinity;
    let (network, encoding) = match name.trim() {
        "h0" => (
            Network::new(1, 1, vec![], vec![Edge { from: 2, to: SINK, cap: inf() }])?,
            Encoding::identity(),
        ),
        "h1" => (
            Network::new(1, 1, vec![], vec![Edge { from: SOURCE, to: 2, cap: inf() }])?,
            Encoding::identity(),
        ),
        "h2" => (
            Network::new(
                2,
                1,
                vec![],
                vec![Edge { from: 2, to: 3, cap: inf() }, Edge { from: 3, to: 2, cap: inf() }],
            )?,
            Encoding::identity(),
        ),
        "halfpair" => {
            let half = || ExtRat::Finite(ratio(1, 2));
            // Nodes 1^1, 1^2, 2^1, 2^2 are 2, 3, 4, 5.
            (
                Network::new(
                    2,
                    2,
                    vec![],
                    vec![Edge { from: 2, to: 5, cap: half() }, Edge { from: 4, to: 3, cap: half() }],
                )?,
                Encoding::star1(),
            )
        }
        other => return Err(Error::UnknownName(other.to_string())),
    };
    Ok(Gadget { network, encoding, kappa: Rational::zero() })
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    from: String,
    to: String,
    cap: ExtRat,
}

#[derive(Serialize, Deserialize)]
struct NetworkJson {
    n: usize,
    k: usize,
    nodes: Vec<String>,
    edges: Vec<EdgeJson>,
}

impl Serialize for Network {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NetworkJson {
            n: self.n,
            k: self.k,
            nodes: self.node_names(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    from: self.node_name(e.from),
                    to: self.node_name(e.to),
                    cap: e.cap.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Network {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = NetworkJson::deserialize(d)?;
        from_json_parts(raw).map_err(serde::de::Error::custom)
    }
}

fn from_json_parts(raw: NetworkJson) -> Result<Network> {
    let (n, k) = (raw.n, raw.k);
    if k == 0 {
        return Err(Error::Network("k must be at least 1".into()));
    }
    let mut seen_fixed = vec![false; 2 + n.saturating_mul(k).min(64)];
    let mut extras = Vec::new();
    for name in &raw.nodes {
        let name = name.trim();
        let fixed = match name {
            "s" => Some(SOURCE),
            "t" => Some(SINK),
            _ => parse_designated(name, n, k).map(|(i, l)| 2 + i * k + l),
        };
        match fixed {
            Some(v) if v < seen_fixed.len() => {
                if std::mem::replace(&mut seen_fixed[v], true) {
                    return Err(Error::Network(format!("node `{name}` listed twice")));
                }
            }
            _ => extras.push(name.to_string()),
        }
    }
    if let Some(v) = seen_fixed.iter().position(|&b| !b) {
        let probe = Network::empty(n, k)?;
        return Err(Error::Network(format!("missing node `{}`", probe.node_name(v))));
    }
    let shell = Network::new(n, k, extras, vec![])?;
    let edges = raw
        .edges
        .into_iter()
        .map(|e| {
            Ok(Edge { from: shell.node_index(&e.from)?, to: shell.node_index(&e.to)?, cap: e.cap })
        })
        .collect::<Result<Vec<_>>>()?;
    Network::new(n, k, shell.extras, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costfn::{and_n, builtin_function};

    fn b(s: &str) -> Bits {
        s.parse().unwrap()
    }

    #[test]
    fn trivial_cuts() {
        let net = Network::empty(1, 1).unwrap();
        assert_eq!(min_cut(&net).unwrap(), MinCut { value: ExtRat::zero(), source_side: vec![0] });
        let st = Network::new(0, 1, vec![], vec![Edge { from: 0, to: 1, cap: ExtRat::ratio(3, 2) }])
            .unwrap();
        assert_eq!(min_cut(&st).unwrap().value, ExtRat::ratio(3, 2));
        let hp = gadget("halfpair").unwrap().network;
        assert_eq!(min_cut(&hp).unwrap(), MinCut { value: ExtRat::zero(), source_side: vec![0] });
    }

    #[test]
    fn flow_through_extra_node() {
        // s -> a (2), a -> t (3/2), s -> t (1), a -> 1 (inf), 1 -> t (1/3)
        let net = Network::new(
            1,
            1,
            vec!["a".into()],
            vec![
                Edge { from: 0, to: 3, cap: ExtRat::int(2) },
                Edge { from: 3, to: 1, cap: ExtRat::ratio(3, 2) },
                Edge { from: 0, to: 1, cap: ExtRat::int(1) },
                Edge { from: 3, to: 2, cap: ExtRat::Infinity },
                Edge { from: 2, to: 1, cap: ExtRat::ratio(1, 3) },
            ],
        )
        .unwrap();
        let cut = min_cut(&net).unwrap();
        assert_eq!(cut.value, ExtRat::ratio(17, 6));
        assert_eq!(cut.source_side, vec![0, 2, 3]);
        assert_eq!(c_min(&net, &b("0")).unwrap(), ExtRat::int(3));
        assert_eq!(c_min(&net, &b("1")).unwrap(), ExtRat::ratio(17, 6));
    }

    #[test]
    fn gadgets_reproduce_functions() {
        for name in ["h0", "h1", "h2"] {
            let g = gadget(name).unwrap();
            let f = eval_representation(&g.network, &g.encoding, &g.kappa).unwrap();
            assert_eq!(f, builtin_function(name).unwrap(), "{name}");
            assert!(is_retractable(&g.network, &g.encoding).unwrap().holds);
        }
        let g = gadget("halfpair").unwrap();
        assert_eq!(eval_representation(&g.network, &g.encoding, &g.kappa).unwrap(), and_n(2).unwrap());
        assert_eq!(c_min(&g.network, &b("1010")).unwrap(), ExtRat::int(1));
        assert!(is_retractable(&g.network, &g.encoding).unwrap().holds);
    }

    #[test]
    fn pinned_infinity() {
        let h0 = gadget("h0").unwrap().network;
        assert_eq!(c_min(&h0, &b("1")).unwrap(), ExtRat::Infinity);
        assert_eq!(c_min(&h0, &b("0")).unwrap(), ExtRat::zero());
        assert!(c_min(&h0, &b("10")).is_err());
        let with_extra = Network::new(
            1,
            1,
            vec!["x".into()],
            vec![Edge { from: 2, to: 3, cap: ExtRat::Infinity }, Edge { from: 3, to: 1, cap: ExtRat::Infinity }],
        )
        .unwrap();
        assert_eq!(c_min(&with_extra, &b("1")).unwrap(), ExtRat::Infinity);
        assert_eq!(c_min(&with_extra, &b("0")).unwrap(), ExtRat::zero());
    }

    #[test]
    fn complement_of_h0_is_h1() {
        let h0 = gadget("h0").unwrap().network;
        assert_eq!(complement_network(&h0), gadget("h1").unwrap().network);
        let hp = gadget("halfpair").unwrap().network;
        assert_eq!(complement_network(&complement_network(&hp)), hp);
    }

    #[test]
    fn retractability_failure_is_reported() {
        // One edge 1^1 -> t: pinning 11 costs 1, its retraction 00 costs 0,
        // pinning 10 costs 1 and stays put. Pair encoding: 11 -> 00.
        let net = Network::new(1, 2, vec![], vec![Edge { from: 2, to: 1, cap: ExtRat::int(1) }]).unwrap();
        assert!(is_retractable(&net, &Encoding::pair()).unwrap().holds);
        let net = Network::new(1, 2, vec![], vec![Edge { from: 0, to: 2, cap: ExtRat::int(1) }]).unwrap();
        let r = is_retractable(&net, &Encoding::pair()).unwrap();
        assert_eq!(r.counterexample, Some(b("11")));
    }

    #[test]
    fn validation() {
        let e = |from, to| Edge { from, to, cap: ExtRat::int(1) };
        assert!(Network::new(1, 1, vec![], vec![e(2, 0)]).is_err());
        assert!(Network::new(1, 1, vec![], vec![e(1, 2)]).is_err());
        assert!(Network::new(1, 1, vec![], vec![e(2, 2)]).is_err());
        assert!(Network::new(1, 1, vec![], vec![e(2, 9)]).is_err());
        assert!(Network::new(1, 1, vec!["s".into()], vec![]).is_err());
        let neg = Edge { from: 0, to: 2, cap: ExtRat::int(-1) };
        assert!(Network::new(1, 1, vec![], vec![neg]).is_err());
        let merged = Network::new(1, 1, vec![], vec![e(0, 2), e(0, 2)]).unwrap();
        assert_eq!(merged.edges().len(), 1);
        assert_eq!(merged.cap(0, 2), ExtRat::int(2));
    }

    #[test]
    fn json_round_trip() {
        let g = gadget("halfpair").unwrap().network;
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(
            s,
            r#"{"n":2,"k":2,"nodes":["s","t","1^1","1^2","2^1","2^2"],"edges":[{"from":"1^1","to":"2^2","cap":"1/2"},{"from":"2^1","to":"1^2","cap":"1/2"}]}"#
        );
        assert_eq!(serde_json::from_str::<Network>(&s).unwrap(), g);
        let h0 = r#"{"n":1,"k":1,"nodes":["s","t","1"],"edges":[{"from":"1","to":"t","cap":"inf"}]}"#;
        assert_eq!(serde_json::from_str::<Network>(h0).unwrap(), gadget("h0").unwrap().network);
        let missing = r#"{"n":1,"k":1,"nodes":["s","1"],"edges":[]}"#;
        assert!(serde_json::from_str::<Network>(missing).is_err());
    }
}
