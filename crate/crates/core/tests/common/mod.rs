#![allow(dead_code)]

use netrep_core::costfn::{labels, CostFunction};
use netrep_core::network::{Edge, Network, SINK, SOURCE};
use netrep_core::ratlp::LinSystem;
use netrep_core::rational::{ExtRat, Rational};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

// ---------------------------------------------------------------------------
// Bisubmodularity, written out independently of the library's lattice code.
// Labels are positions in `0, 1, -1`.

fn ksub_meet(a: usize, b: usize) -> usize {
    if a == b { a } else { 0 }
}

fn ksub_join(a: usize, b: usize) -> usize {
    match (a, b) {
        _ if a == b => a,
        (0, x) | (x, 0) => x,
        _ => 0,
    }
}

/// Every pair inequality `f(x) + f(y) >= f(x meet y) + f(x join y)` over
/// `{0, 1, -1}^n` for a finite integer table.
pub fn is_bisubmodular(table: &[i64], n: usize) -> bool {
    let size = 3usize.pow(n as u32);
    let digits = |mut i: usize| {
        let mut d = vec![0; n];
        for slot in d.iter_mut().rev() {
            *slot = i % 3;
            i /= 3;
        }
        d
    };
    let index = |d: &[usize]| d.iter().fold(0, |acc, &x| acc * 3 + x);
    for i in 0..size {
        for j in i + 1..size {
            let (x, y) = (digits(i), digits(j));
            let m: Vec<usize> = x.iter().zip(&y).map(|(&a, &b)| ksub_meet(a, b)).collect();
            let jn: Vec<usize> = x.iter().zip(&y).map(|(&a, &b)| ksub_join(a, b)).collect();
            if table[i] + table[j] < table[index(&m)] + table[index(&jn)] {
                return false;
            }
        }
    }
    true
}

/// Rejection sampling of bisubmodular tables with entries in `0..=max`.
pub fn random_bisubmodular(rng: &mut ChaCha8Rng, n: usize, max: i64) -> (CostFunction, usize) {
    let size = 3usize.pow(n as u32);
    let mut tries = 0;
    loop {
        tries += 1;
        let table: Vec<i64> = (0..size).map(|_| rng.gen_range(0..=max)).collect();
        if is_bisubmodular(&table, n) {
            let f = CostFunction::new(
                labels(&["0", "1", "-1"]),
                n,
                table.into_iter().map(ExtRat::int).collect(),
            )
            .unwrap();
            return (f, tries);
        }
    }
}

// ---------------------------------------------------------------------------
// Networks

/// A random network over `n` variables of width `k` with `extras` extra
/// nodes. Capacities are in `1..=4`, and infinite with probability `p_inf`.
pub fn random_network(rng: &mut ChaCha8Rng, n: usize, k: usize, extras: usize, density: f64, p_inf: f64) -> Network {
    let nodes = 2 + n * k + extras;
    let mut edges = Vec::new();
    for u in 0..nodes {
        for v in 0..nodes {
            if u == v || u == SINK || v == SOURCE || !rng.gen_bool(density) {
                continue;
            }
            let cap = if rng.gen_bool(p_inf) { ExtRat::Infinity } else { ExtRat::int(rng.gen_range(1..=4)) };
            edges.push(Edge { from: u, to: v, cap });
        }
    }
    let names = (0..extras).map(|j| format!("w{j}")).collect();
    Network::new(n, k, names, edges).unwrap()
}

// ---------------------------------------------------------------------------
// Vertex enumeration

fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let d = b.len();
    for c in 0..d {
        let p = (c..d).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        for i in 0..d {
            if i != c && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..d {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
                let t = &f * &b[c];
                b[i] -= t;
            }
        }
    }
    Some((0..d).map(|i| &b[i] / &a[i][i]).collect())
}

fn combinations(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        combinations(n, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Feasibility by enumerating basic solutions. Free variables are split
/// into two nonnegative parts so the polyhedron is pointed and, when
/// nonempty, has a vertex.
pub fn vertex_feasible(sys: &LinSystem) -> bool {
    let n = sys.num_vars();
    let free: Vec<usize> = (0..n).filter(|v| !sys.nonneg_vars().contains(v)).collect();
    let d = n + free.len();
    let expand = |coeffs: &[(usize, Rational)]| {
        let mut row = vec![Rational::zero(); d];
        for (v, a) in coeffs {
            row[*v] += a;
            if let Some(p) = free.iter().position(|f| f == v) {
                row[n + p] -= a;
            }
        }
        row
    };
    // (row, rhs, is_equality); every constraint reads row . z >= rhs.
    let mut cons: Vec<(Vec<Rational>, Rational, bool)> = Vec::new();
    for e in sys.equalities() {
        cons.push((expand(&e.coeffs), e.rhs.clone(), true));
    }
    for e in sys.inequalities() {
        cons.push((expand(&e.coeffs), e.rhs.clone(), false));
    }
    for v in 0..d {
        let mut row = vec![Rational::zero(); d];
        row[v] = Rational::one();
        cons.push((row, Rational::zero(), false));
    }
    let ok = |z: &[Rational]| {
        cons.iter().all(|(row, rhs, eq)| {
            let s: Rational = row.iter().zip(z).map(|(a, b)| a * b).sum();
            if *eq { s == *rhs } else { s >= *rhs }
        })
    };
    if d == 0 {
        return ok(&[]);
    }
    let mut subsets = Vec::new();
    combinations(cons.len(), d, 0, &mut Vec::new(), &mut subsets);
    subsets.into_iter().any(|s| {
        let a = s.iter().map(|&i| cons[i].0.clone()).collect();
        let b = s.iter().map(|&i| cons[i].1.clone()).collect();
        solve_square(a, b).is_some_and(|z| ok(&z))
    })
}

/// A random system over `n` variables with small integer coefficients.
pub fn random_system(rng: &mut ChaCha8Rng, n: usize) -> LinSystem {
    let mut sys = LinSystem::new(n);
    let row = |rng: &mut ChaCha8Rng| -> Vec<(usize, Rational)> {
        (0..n).map(|v| (v, r(rng.gen_range(-3..=3)))).collect()
    };
    for _ in 0..rng.gen_range(0..=2) {
        let c = row(rng);
        sys.add_equality(c, r(rng.gen_range(-4..=4))).unwrap();
    }
    for _ in 0..rng.gen_range(1..=4) {
        let c = row(rng);
        sys.add_inequality(c, r(rng.gen_range(-4..=4))).unwrap();
    }
    for v in 0..n {
        if rng.gen_bool(0.6) {
            sys.set_nonneg(v).unwrap();
        }
    }
    sys
}

pub fn is_nonneg(x: &[Rational]) -> bool {
    x.iter().all(|v| !v.is_negative())
}
