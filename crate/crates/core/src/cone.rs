//! The cone of `(n, rho)`-retractable networks without extra nodes.
//!
//! With every node pinned, `C_min(x)` is the cut capacity `C(X_x)`, a
//! linear form in the edge capacities, so retractability is the finite set
//! of homogeneous rows `C(X_x) - C(X_rho(x)) >= 0` together with `c >= 0`.
//! Extreme rays come from a double description run over integer vectors.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::encoding::Encoding;
use crate::error::{Error, Result};
use crate::network::{Edge, Network, SINK, SOURCE};
use crate::ratlp::{nonneg_combination, FeasResult, LinSystem};
use crate::rational::{ExtRat, Rational};

/// Designated nodes beyond this make the row enumeration too large.
pub const MAX_CONE_DESIGNATED: usize = 12;

/// Which network shapes the cone ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSpec {
    n: usize,
    enc: Encoding,
    include_st: bool,
    edges: Vec<(usize, usize)>,
}

impl ConeSpec {
    /// Edges `(u, v)` with `u` in `{s} ∪ designated`, `v` in `designated ∪
    /// {t}`, `u != v`, ordered by node index; `(s, t)` only if `include_st`.
    pub fn new(n: usize, enc: Encoding, include_st: bool) -> Result<Self> {
        let d = n * enc.k();
        if n == 0 || d > MAX_CONE_DESIGNATED {
            return Err(Error::TooLarge(format!("cone over {d} designated nodes")));
        }
        let designated = 2..2 + d;
        let mut edges = Vec::new();
        for u in std::iter::once(SOURCE).chain(designated.clone()) {
            for v in designated.clone().chain(std::iter::once(SINK)) {
                if u != v && (include_st || (u, v) != (SOURCE, SINK)) {
                    edges.push((u, v));
                }
            }
        }
        edges.sort_unstable();
        Ok(ConeSpec { n, enc, include_st, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn encoding(&self) -> &Encoding {
        &self.enc
    }

    pub fn include_st(&self) -> bool {
        self.include_st
    }

    pub fn num_designated(&self) -> usize {
        self.n * self.enc.k()
    }

    /// Variable order of every capacity vector.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_index(&self, from: usize, to: usize) -> Option<usize> {
        self.edges.binary_search(&(from, to)).ok()
    }

    /// 0/1 coefficients of `C(X_x)` over the edge variables.
    pub fn cut_coefficients(&self, x: &Bits) -> Vec<i64> {
        let inside = |v: usize| v == SOURCE || (v != SINK && x.get(v - 2));
        self.edges
            .iter()
            .map(|&(u, v)| (inside(u) && !inside(v)) as i64)
            .collect()
    }

    /// The capacity vector of a network with no extra nodes, finite
    /// capacities and only allowed edges.
    pub fn capacity_vector(&self, net: &Network) -> Result<Vec<Rational>> {
        if net.n() != self.n || net.k() != self.enc.k() {
            return Err(Error::Network(format!(
                "network has n={}, k={}; cone has n={}, k={}",
                net.n(),
                net.k(),
                self.n,
                self.enc.k()
            )));
        }
        if !net.extras().is_empty() {
            return Err(Error::Network("cone networks have no extra nodes".into()));
        }
        let mut c = vec![Rational::zero(); self.edges.len()];
        for e in net.edges() {
            let name = || format!("({}, {})", net.node_name(e.from), net.node_name(e.to));
            let idx = self
                .edge_index(e.from, e.to)
                .ok_or_else(|| Error::Network(format!("edge {} is outside the cone's edge set", name())))?;
            c[idx] = e
                .cap
                .finite()
                .cloned()
                .ok_or_else(|| Error::Network(format!("edge {} has infinite capacity", name())))?;
        }
        Ok(c)
    }

    /// The network with the given capacity vector; zero entries are dropped.
    pub fn network(&self, caps: &[Rational]) -> Result<Network> {
        if caps.len() != self.edges.len() {
            return Err(Error::LengthMismatch { expected: self.edges.len(), got: caps.len() });
        }
        let edges = self
            .edges
            .iter()
            .zip(caps)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&(from, to), c)| Edge { from, to, cap: ExtRat::Finite(c.clone()) })
            .collect();
        Network::new(self.n, self.enc.k(), Vec::new(), edges)
    }
}

/// Rows `C(X_x) - C(X_rho(x)) >= 0` for every `x` moved by blockwise `rho`
/// (zero rows dropped), plus `c >= 0`.
pub fn build_cone(spec: &ConeSpec) -> Result<LinSystem> {
    let d = spec.num_designated();
    let mut sys = LinSystem::new(spec.edges.len());
    sys.set_all_nonneg();
    for x in Bits::all(d) {
        let rx = spec.enc.retract_blocks(&x)?;
        if rx == x {
            continue;
        }
        let a = spec.cut_coefficients(&x);
        let b = spec.cut_coefficients(&rx);
        let coeffs: Vec<(usize, Rational)> = a
            .iter()
            .zip(&b)
            .enumerate()
            .filter(|(_, (p, q))| p != q)
            .map(|(j, (p, q))| (j, Rational::from_integer(BigInt::from(p - q))))
            .collect();
        if !coeffs.is_empty() {
            sys.add_inequality(coeffs, Rational::zero())?;
        }
    }
    Ok(sys)
}

/// A primitive nonnegative integer vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ray(pub Vec<BigInt>);

impl Ray {
    pub fn to_rationals(&self) -> Vec<Rational> {
        self.0.iter().map(|v| Rational::from_integer(v.clone())).collect()
    }

    /// Scales to the primitive integer vector on the same ray. Errors on
    /// the zero vector.
    pub fn from_rationals(v: &[Rational]) -> Result<Ray> {
        let lcm = v.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let ints: Vec<BigInt> = v.iter().map(|r| (r * &lcm).to_integer()).collect();
        Ray::primitive(ints)
    }

    fn primitive(mut v: Vec<BigInt>) -> Result<Ray> {
        let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return Err(Error::InvalidArgument("zero vector is not a ray".into()));
        }
        for x in &mut v {
            *x /= &g;
        }
        Ok(Ray(v))
    }
}

impl Serialize for Ray {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Ray {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let ints = v
            .iter()
            .map(|s| s.trim().parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ray::primitive(ints).map_err(serde::de::Error::custom)
    }
}

/// Dense integer rows of a homogeneous system whose variables are all
/// nonnegative: the bound rows `e_j` first, then the remaining rows
/// deduplicated and sorted. Equalities enter as two opposite rows.
fn homogeneous_rows(sys: &LinSystem) -> Result<(usize, Vec<Vec<BigInt>>)> {
    let d = sys.num_vars();
    let bounded: BTreeSet<usize> = sys.nonneg_vars().iter().copied().collect();
    if bounded.len() != d {
        return Err(Error::LinSystem("extreme rays need every variable nonnegative".into()));
    }
    let dense = |row: &crate::ratlp::Row, sign: i64| {
        let mut v = vec![BigInt::zero(); d];
        for (j, a) in &row.coeffs {
            // Rows are stored as coprime integers.
            v[*j] = a.to_integer() * sign;
        }
        v
    };
    let mut extra = BTreeSet::new();
    for r in sys.equalities().iter().chain(sys.inequalities()) {
        if !r.rhs.is_zero() {
            return Err(Error::LinSystem("extreme rays need a homogeneous system".into()));
        }
    }
    for r in sys.inequalities() {
        extra.insert(dense(r, 1));
    }
    for r in sys.equalities() {
        extra.insert(dense(r, 1));
        extra.insert(dense(r, -1));
    }
    let mut rows: Vec<Vec<BigInt>> = (0..d)
        .map(|j| (0..d).map(|i| BigInt::from((i == j) as i64)).collect())
        .collect();
    rows.extend(extra.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
    Ok((d, rows))
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Rank of a set of integer rows (fraction-free elimination).
fn rank(rows: &[&Vec<BigInt>], d: usize) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| (*r).clone()).collect();
    let mut r = 0;
    for col in 0..d {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let (a, b) = (m[r][col].clone(), m[i][col].clone());
            for j in col..d {
                let v = &m[i][j] * &a - &m[r][j] * &b;
                m[i][j] = v;
            }
            let g = m[i].iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for x in &mut m[i] {
                    *x /= &g;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

fn tight<'a>(rows: &'a [Vec<BigInt>], ray: &[BigInt]) -> Vec<&'a Vec<BigInt>> {
    rows.iter().filter(|a| dot(a, ray).is_zero()).collect()
}

/// Checks that `ray` is a nonzero member of the cone whose tight rows have
/// rank `d - 1`.
pub fn certify_ray(sys: &LinSystem, ray: &Ray) -> Result<()> {
    let (d, rows) = homogeneous_rows(sys)?;
    certify(&rows, d, ray)
}

fn certify(rows: &[Vec<BigInt>], d: usize, ray: &Ray) -> Result<()> {
    if ray.0.len() != d {
        return Err(Error::LengthMismatch { expected: d, got: ray.0.len() });
    }
    if ray.0.iter().all(Zero::is_zero) {
        return Err(Error::Internal("zero ray".into()));
    }
    if rows.iter().any(|a| dot(a, &ray.0).is_negative()) {
        return Err(Error::Internal("ray violates a cone row".into()));
    }
    let tight = tight(rows, &ray.0);
    if rank(&tight, d) + 1 != d {
        return Err(Error::Internal("ray is not extreme".into()));
    }
    Ok(())
}

/// Extreme rays of `{x >= 0 : rows >= 0}` (homogeneous), sorted, each
/// certified. Rows are inserted in sorted order starting from the
/// orthant, so the output does not depend on the input row order.
pub fn extreme_rays(sys: &LinSystem) -> Result<Vec<Ray>> {
    let (d, rows) = homogeneous_rows(sys)?;
    let mut rays: Vec<Vec<BigInt>> = rows[..d].to_vec();
    for step in d..rows.len() {
        let a = &rows[step];
        let done = &rows[..step];
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(a, r)).collect();
        let mut next: Vec<Vec<BigInt>> = rays
            .iter()
            .zip(&vals)
            .filter(|(_, v)| !v.is_negative())
            .map(|(r, _)| r.clone())
            .collect();
        let zsets: Vec<Vec<bool>> = rays
            .iter()
            .map(|r| done.iter().map(|b| dot(b, r).is_zero()).collect())
            .collect();
        for (p, vp) in vals.iter().enumerate().filter(|(_, v)| v.is_positive()) {
            for (q, vq) in vals.iter().enumerate().filter(|(_, v)| v.is_negative()) {
                let common: Vec<&Vec<BigInt>> = done
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| zsets[p][i] && zsets[q][i])
                    .map(|(_, b)| b)
                    .collect();
                if common.len() + 2 < d || rank(&common, d) + 2 != d {
                    continue;
                }
                let neg = -vq;
                let v: Vec<BigInt> = rays[q]
                    .iter()
                    .zip(&rays[p])
                    .map(|(x, y)| vp * x + &neg * y)
                    .collect();
                next.push(Ray::primitive(v)?.0);
            }
        }
        next.sort();
        next.dedup();
        rays = next;
    }
    rays.sort();
    let out: Vec<Ray> = rays.into_iter().map(Ray).collect();
    for r in &out {
        certify(&rows, d, r)?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Symmetry

/// A permutation of node indices; it must fix `s` and `t`.
pub type NodePermutation = Vec<usize>;

/// `+ <-> -` on every variable at once (`i^1 <-> i^2`) and the swap of
/// variables 1 and 2, for the pair encoding.
pub fn pair_symmetries(n: usize) -> Vec<NodePermutation> {
    let nodes = 2 + 2 * n;
    let mut flip: Vec<usize> = (0..nodes).collect();
    for i in 0..n {
        flip.swap(2 + 2 * i, 3 + 2 * i);
    }
    let mut gens = vec![flip];
    if n >= 2 {
        let mut swap: Vec<usize> = (0..nodes).collect();
        swap.swap(2, 4);
        swap.swap(3, 5);
        gens.push(swap);
    }
    gens
}

/// `+ <-> -` on variable `i` alone.
pub fn pair_flip(n: usize, i: usize) -> NodePermutation {
    let mut p: Vec<usize> = (0..2 + 2 * n).collect();
    p.swap(2 + 2 * i, 3 + 2 * i);
    p
}

/// Edge-index permutation induced by a node permutation.
fn edge_map(spec: &ConeSpec, perm: &NodePermutation) -> Result<Vec<usize>> {
    let nodes = 2 + spec.num_designated();
    let mut seen = vec![false; nodes];
    if perm.len() != nodes || perm[SOURCE] != SOURCE || perm[SINK] != SINK {
        return Err(Error::InvalidArgument("permutation must fix s and t".into()));
    }
    for &v in perm {
        if v >= nodes || std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidArgument("not a permutation of the nodes".into()));
        }
    }
    spec.edges
        .iter()
        .map(|&(u, v)| {
            spec.edge_index(perm[u], perm[v])
                .ok_or_else(|| Error::InvalidArgument("permutation leaves the edge set".into()))
        })
        .collect()
}

fn permute(ray: &Ray, map: &[usize]) -> Ray {
    let mut out = vec![BigInt::zero(); ray.0.len()];
    for (j, x) in ray.0.iter().enumerate() {
        out[map[j]] = x.clone();
    }
    Ray(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    /// Lexicographically least member.
    pub representative: Ray,
    pub size: usize,
}

/// One representative per orbit of the group generated by `generators`,
/// in order of first appearance in `rays`.
pub fn symmetry_reduce(spec: &ConeSpec, rays: &[Ray], generators: &[NodePermutation]) -> Result<Vec<Orbit>> {
    let maps = generators.iter().map(|g| edge_map(spec, g)).collect::<Result<Vec<_>>>()?;
    let mut assigned: BTreeSet<Ray> = BTreeSet::new();
    let mut orbits = Vec::new();
    for r in rays {
        if assigned.contains(r) {
            continue;
        }
        let mut orbit = BTreeSet::from([r.clone()]);
        let mut stack = vec![r.clone()];
        while let Some(x) = stack.pop() {
            for m in &maps {
                let y = permute(&x, m);
                if orbit.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        let representative = orbit.iter().next().cloned().expect("orbit is nonempty");
        orbits.push(Orbit { representative, size: orbit.len() });
        assigned.extend(orbit);
    }
    Ok(orbits)
}

/// True iff every generator maps the ray set onto itself.
pub fn is_invariant(spec: &ConeSpec, rays: &[Ray], generators: &[NodePermutation]) -> Result<bool> {
    let set: BTreeSet<&Ray> = rays.iter().collect();
    for g in generators {
        let m = edge_map(spec, g)?;
        if !rays.iter().all(|r| set.contains(&permute(r, &m))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Nonnegative coefficients over `rays` reproducing the network's capacity
/// vector, or a certificate that none exist.
pub fn decompose(spec: &ConeSpec, net: &Network, rays: &[Ray]) -> Result<FeasResult> {
    let target = spec.capacity_vector(net)?;
    let gens: Vec<Vec<Rational>> = rays.iter().map(Ray::to_rationals).collect();
    nonneg_combination(&target, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::is_retractable;
    use crate::rational::int;

    fn orthant(d: usize) -> LinSystem {
        let mut s = LinSystem::new(d);
        s.set_all_nonneg();
        s
    }

    #[test]
    fn orthant_rays() {
        let rays = extreme_rays(&orthant(2)).unwrap();
        let want = vec![Ray(vec![0.into(), 1.into()]), Ray(vec![1.into(), 0.into()])];
        assert_eq!(rays, want);
    }

    #[test]
    fn pair_cone_shapes() {
        let one = build_cone(&ConeSpec::new(1, Encoding::pair(), false).unwrap()).unwrap();
        assert_eq!(one.num_vars(), 6);
        assert_eq!(one.inequalities().len(), 1);
        let two = build_cone(&ConeSpec::new(2, Encoding::pair(), false).unwrap()).unwrap();
        assert_eq!(two.num_vars(), 20);
        assert_eq!(two.inequalities().len(), 7);
        let st = ConeSpec::new(1, Encoding::pair(), true).unwrap();
        assert_eq!(st.edges().len(), 7);
    }

    #[test]
    fn n1_rays_are_retractable() {
        let spec = ConeSpec::new(1, Encoding::pair(), false).unwrap();
        let rays = extreme_rays(&build_cone(&spec).unwrap()).unwrap();
        assert!(!rays.is_empty());
        for r in &rays {
            let net = spec.network(&r.to_rationals()).unwrap();
            assert!(is_retractable(&net, spec.encoding()).unwrap().holds);
            let d = decompose(&spec, &net, &rays).unwrap();
            assert!(d.is_feasible());
        }
        let orbits = symmetry_reduce(&spec, &rays, &pair_symmetries(1)).unwrap();
        assert_eq!(orbits.iter().map(|o| o.size).sum::<usize>(), rays.len());
        assert!(is_invariant(&spec, &rays, &pair_symmetries(1)).unwrap());
    }

    #[test]
    fn capacity_vector_rejects_outside_edges() {
        let spec = ConeSpec::new(1, Encoding::pair(), false).unwrap();
        let st = Network::new(1, 2, vec![], vec![Edge { from: 0, to: 1, cap: ExtRat::int(1) }]).unwrap();
        assert!(spec.capacity_vector(&st).is_err());
        let inf = Network::new(1, 2, vec![], vec![Edge { from: 0, to: 2, cap: ExtRat::Infinity }]).unwrap();
        assert!(spec.capacity_vector(&inf).is_err());
        let ok = Network::new(1, 2, vec![], vec![Edge { from: 0, to: 2, cap: ExtRat::int(3) }]).unwrap();
        assert_eq!(spec.capacity_vector(&ok).unwrap()[0], int(3));
    }

    #[test]
    fn ray_normalization() {
        let r = Ray::from_rationals(&[Rational::new(2.into(), 3.into()), int(0), int(4)]).unwrap();
        assert_eq!(r, Ray(vec![1.into(), 0.into(), 6.into()]));
        assert!(Ray::from_rationals(&[int(0)]).is_err());
    }
}
