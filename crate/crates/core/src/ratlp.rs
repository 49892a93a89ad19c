//! Exact rational linear feasibility.
//!
//! [`feasible`] decides `{x : A_eq x = b_eq, A_ge x >= b_ge, x_v >= 0 for v
//! in nonneg_vars}` and returns either a witness or a Farkas certificate.
//! Both are re-verified exactly before they are returned.
//!
//! Internally everything goes through one phase-one simplex on a standard
//! form `M y = e, y >= 0, e >= 0` (revised simplex, dense basis inverse,
//! Bland's rule). Two reductions feed it; the one with fewer rows is used:
//!
//! * primal: free variables split, slacks added, rows with negative right
//!   hand side negated. A phase-one dual `pi` becomes a Farkas certificate.
//! * dual: the unknowns are the certificate multipliers, constrained so the
//!   combined row is `0 . x >= 1`. A phase-one dual `(p, lambda)` with
//!   `lambda > 0` becomes the witness `x = -p / lambda`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// A sparse row `sum coeffs[j].1 * x[coeffs[j].0]` with right hand side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

impl Row {
    pub fn dot(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(v, a)| a * &x[*v]).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Sorts, merges and drops zero coefficients, then scales by a positive
/// factor so all entries are coprime integers.
fn normalize(num_vars: usize, mut coeffs: Vec<(usize, Rational)>, rhs: Rational) -> Result<Row> {
    if let Some((v, _)) = coeffs.iter().find(|(v, _)| *v >= num_vars) {
        return Err(Error::LinSystem(format!("variable {v} out of range ({num_vars} variables)")));
    }
    coeffs.sort_by_key(|(v, _)| *v);
    let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(coeffs.len());
    for (v, a) in coeffs {
        match merged.last_mut() {
            Some((w, b)) if *w == v => *b += a,
            _ => merged.push((v, a)),
        }
    }
    merged.retain(|(_, a)| !a.is_zero());

    let mut denom = BigInt::one();
    let mut numer = BigInt::zero();
    for r in merged.iter().map(|(_, a)| a).chain(std::iter::once(&rhs)) {
        if !r.is_zero() {
            denom = denom.lcm(r.denom());
            numer = numer.gcd(r.numer());
        }
    }
    if numer.is_zero() {
        return Ok(Row { coeffs: merged, rhs });
    }
    let factor = Rational::new(denom, numer);
    Ok(Row {
        coeffs: merged.into_iter().map(|(v, a)| (v, a * &factor)).collect(),
        rhs: rhs * factor,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinSystem {
    num_vars: usize,
    equalities: Vec<Row>,
    inequalities: Vec<Row>,
    nonneg_vars: Vec<usize>,
}

impl LinSystem {
    pub fn new(num_vars: usize) -> Self {
        LinSystem { num_vars, ..Default::default() }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn equalities(&self) -> &[Row] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Row] {
        &self.inequalities
    }

    pub fn nonneg_vars(&self) -> &[usize] {
        &self.nonneg_vars
    }

    /// Adds `coeffs . x = rhs`; returns the row index.
    pub fn add_equality(&mut self, coeffs: Vec<(usize, Rational)>, rhs: Rational) -> Result<usize> {
        self.equalities.push(normalize(self.num_vars, coeffs, rhs)?);
        Ok(self.equalities.len() - 1)
    }

    /// Adds `coeffs . x >= rhs`; returns the row index.
    pub fn add_inequality(&mut self, coeffs: Vec<(usize, Rational)>, rhs: Rational) -> Result<usize> {
        self.inequalities.push(normalize(self.num_vars, coeffs, rhs)?);
        Ok(self.inequalities.len() - 1)
    }

    pub fn set_nonneg(&mut self, v: usize) -> Result<()> {
        if v >= self.num_vars {
            return Err(Error::LinSystem(format!("variable {v} out of range")));
        }
        if let Err(pos) = self.nonneg_vars.binary_search(&v) {
            self.nonneg_vars.insert(pos, v);
        }
        Ok(())
    }

    pub fn set_all_nonneg(&mut self) {
        self.nonneg_vars = (0..self.num_vars).collect();
    }

    /// True iff `x` satisfies every row and sign constraint exactly.
    pub fn check_witness(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && self.equalities.iter().all(|r| r.dot(x) == r.rhs)
            && self.inequalities.iter().all(|r| r.dot(x) >= r.rhs)
            && self.nonneg_vars.iter().all(|&v| !x[v].is_negative())
    }
}

/// Multipliers combining the rows into `0 . x >= c` with `c > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub eq_multipliers: Vec<Rational>,
    /// Nonnegative, one per inequality row.
    pub ineq_multipliers: Vec<Rational>,
    /// Nonnegative, one per entry of `nonneg_vars`.
    pub bound_multipliers: Vec<Rational>,
}

impl FarkasCertificate {
    /// The constant `c` of the combined row, or an error describing why the
    /// multipliers do not form a certificate.
    pub fn check(&self, sys: &LinSystem) -> Result<Rational> {
        let bad = |m: &str| Err(Error::Internal(format!("invalid Farkas certificate: {m}")));
        if self.eq_multipliers.len() != sys.equalities.len()
            || self.ineq_multipliers.len() != sys.inequalities.len()
            || self.bound_multipliers.len() != sys.nonneg_vars.len()
        {
            return bad("multiplier count mismatch");
        }
        if self.ineq_multipliers.iter().chain(&self.bound_multipliers).any(Signed::is_negative) {
            return bad("negative multiplier on an inequality");
        }
        let mut combined = vec![Rational::zero(); sys.num_vars];
        let mut rhs = Rational::zero();
        let rows = sys.equalities.iter().zip(&self.eq_multipliers);
        let rows = rows.chain(sys.inequalities.iter().zip(&self.ineq_multipliers));
        for (row, y) in rows {
            if y.is_zero() {
                continue;
            }
            for (v, a) in &row.coeffs {
                combined[*v] += a * y;
            }
            rhs += &row.rhs * y;
        }
        for (&v, mu) in sys.nonneg_vars.iter().zip(&self.bound_multipliers) {
            combined[v] += mu;
        }
        if combined.iter().any(|c| !c.is_zero()) {
            return bad("combined row is not zero");
        }
        if !rhs.is_positive() {
            return bad("combined right hand side is not positive");
        }
        Ok(rhs)
    }

    pub fn verify(&self, sys: &LinSystem) -> bool {
        self.check(sys).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasResult {
    Feasible(Vec<Rational>),
    Infeasible(FarkasCertificate),
}

impl FeasResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasResult::Feasible(_))
    }

    pub fn verify(&self, sys: &LinSystem) -> bool {
        match self {
            FeasResult::Feasible(x) => sys.check_witness(x),
            FeasResult::Infeasible(c) => c.verify(sys),
        }
    }
}

// ---------------------------------------------------------------------------
// Phase one

type Column = Vec<(usize, Rational)>;

enum PhaseOne {
    Feasible(Vec<Rational>),
    /// `pi` with `pi . col <= 0` for every column and `pi . rhs > 0`.
    Infeasible(Vec<Rational>),
}

/// Finds `y >= 0` with `sum_j y_j columns[j] = rhs` (`rhs >= 0`) or a dual
/// ray proving there is none.
///
/// Columns and right hand side are scaled to integers and the basis
/// inverse is kept fraction-free as `adj / det`: with `det > 0` the update
/// after a pivot on `p` is `(p * row_i - u_i * row_r) / det_old`, an exact
/// integer division, and `det_new = p`.
fn phase_one(m: usize, columns: &[Column], rhs: &[Rational]) -> Result<PhaseOne> {
    debug_assert!(rhs.iter().all(|b| !b.is_negative()));
    let num = columns.len();
    let scale: Vec<BigInt> = columns
        .iter()
        .map(|c| c.iter().fold(BigInt::one(), |acc, (_, a)| acc.lcm(a.denom())))
        .collect();
    let cols: Vec<Vec<(usize, BigInt)>> = columns
        .iter()
        .zip(&scale)
        .map(|(c, s)| c.iter().map(|(r, a)| (*r, (a * s).to_integer())).collect())
        .collect();
    let rhs_scale = rhs.iter().fold(BigInt::one(), |acc, b| acc.lcm(b.denom()));
    let mut xb: Vec<BigInt> = rhs.iter().map(|b| (b * &rhs_scale).to_integer()).collect();

    // Variables num..num+m are the artificials; the basis starts with them.
    let mut basis: Vec<usize> = (num..num + m).collect();
    let mut adj: Vec<Vec<BigInt>> = (0..m)
        .map(|i| {
            let mut row = vec![BigInt::zero(); m];
            row[i] = BigInt::one();
            row
        })
        .collect();
    let mut det = BigInt::one();
    let mut in_basis = vec![false; num];

    loop {
        // det * (c_B^T B^-1) with cost 1 on artificials.
        let mut pi = vec![BigInt::zero(); m];
        for (pos, &var) in basis.iter().enumerate() {
            if var >= num {
                for (p, a) in pi.iter_mut().zip(&adj[pos]) {
                    if !a.is_zero() {
                        *p += a;
                    }
                }
            }
        }

        // Bland: the first column with negative reduced cost -pi . A_j.
        let entering = (0..num).find(|&j| {
            !in_basis[j] && cols[j].iter().map(|(r, a)| &pi[*r] * a).sum::<BigInt>().is_positive()
        });
        let Some(j) = entering else {
            let artificial_left = basis.iter().zip(&xb).any(|(&var, x)| var >= num && !x.is_zero());
            if !artificial_left {
                let mut y = vec![Rational::zero(); num];
                let denom = &det * &rhs_scale;
                for (&var, x) in basis.iter().zip(&xb) {
                    if var < num && !x.is_zero() {
                        y[var] = Rational::new(x * &scale[var], denom.clone());
                    }
                }
                return Ok(PhaseOne::Feasible(y));
            }
            return Ok(PhaseOne::Infeasible(pi.into_iter().map(Rational::from_integer).collect()));
        };

        // det * B^-1 A_j
        let mut u = vec![BigInt::zero(); m];
        for (r, a) in &cols[j] {
            for (ui, row) in u.iter_mut().zip(&adj) {
                let b = &row[*r];
                if !b.is_zero() {
                    *ui += b * a;
                }
            }
        }
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if !u[i].is_positive() {
                continue;
            }
            let better = match leave {
                None => true,
                Some(l) => {
                    let (lhs, rhs) = (&xb[i] * &u[l], &xb[l] * &u[i]);
                    lhs < rhs || (lhs == rhs && basis[i] < basis[l])
                }
            };
            if better {
                leave = Some(i);
            }
        }
        let r = leave.ok_or_else(|| Error::Internal("phase one is unbounded".into()))?;

        let p = u[r].clone();
        let prow = adj[r].clone();
        let px = xb[r].clone();
        for i in 0..m {
            if i == r {
                continue;
            }
            let ui = &u[i];
            for (a, pr) in adj[i].iter_mut().zip(&prow) {
                if ui.is_zero() {
                    if !a.is_zero() {
                        *a = &*a * &p / &det;
                    }
                } else {
                    *a = (&*a * &p - ui * pr) / &det;
                }
            }
            xb[i] = (&xb[i] * &p - ui * &px) / &det;
        }
        det = p;
        if basis[r] < num {
            in_basis[basis[r]] = false;
        }
        basis[r] = j;
        in_basis[j] = true;
    }
}

/// Primal reduction: rows are the system's rows.
fn solve_primal(sys: &LinSystem) -> Result<FeasResult> {
    let n = sys.num_vars;
    let rows: Vec<&Row> = sys.equalities.iter().chain(&sys.inequalities).collect();
    let m = rows.len();
    let n_eq = sys.equalities.len();
    let sign: Vec<bool> = rows.iter().map(|r| r.rhs.is_negative()).collect();

    let mut nonneg = vec![false; n];
    for &v in &sys.nonneg_vars {
        nonneg[v] = true;
    }
    let mut var_cols: Vec<Column> = vec![Vec::new(); n];
    for (i, row) in rows.iter().enumerate() {
        for (v, a) in &row.coeffs {
            var_cols[*v].push((i, if sign[i] { -a } else { a.clone() }));
        }
    }
    // Column layout: for each variable its positive part, then (free
    // variables only) its negative part; then one slack per inequality.
    let mut columns: Vec<Column> = Vec::new();
    let mut pos_col = vec![0usize; n];
    let mut neg_col = vec![None; n];
    for v in 0..n {
        pos_col[v] = columns.len();
        columns.push(var_cols[v].clone());
        if !nonneg[v] {
            neg_col[v] = Some(columns.len());
            columns.push(var_cols[v].iter().map(|(r, a)| (*r, -a)).collect());
        }
    }
    for i in n_eq..m {
        let s = if sign[i] { Rational::one() } else { -Rational::one() };
        columns.push(vec![(i, s)]);
    }
    let rhs: Vec<Rational> = rows.iter().map(|r| r.rhs.abs()).collect();

    match phase_one(m, &columns, &rhs)? {
        PhaseOne::Feasible(y) => {
            let x = (0..n)
                .map(|v| match neg_col[v] {
                    Some(c) => &y[pos_col[v]] - &y[c],
                    None => y[pos_col[v]].clone(),
                })
                .collect();
            Ok(FeasResult::Feasible(x))
        }
        PhaseOne::Infeasible(pi) => {
            let w: Vec<Rational> =
                pi.iter().zip(&sign).map(|(p, &s)| if s { -p } else { p.clone() }).collect();
            let mut wa = vec![Rational::zero(); n];
            for (row, wi) in rows.iter().zip(&w) {
                for (v, a) in &row.coeffs {
                    wa[*v] += a * wi;
                }
            }
            Ok(FeasResult::Infeasible(FarkasCertificate {
                eq_multipliers: w[..n_eq].to_vec(),
                ineq_multipliers: w[n_eq..].to_vec(),
                bound_multipliers: sys.nonneg_vars.iter().map(|&v| -&wa[v]).collect(),
            }))
        }
    }
}

#[derive(Clone, Copy)]
enum Origin {
    EqPlus(usize),
    EqMinus(usize),
    Ineq(usize),
    Bound(usize),
}

/// Dual reduction: rows are the variables plus one right-hand-side row.
fn solve_dual(sys: &LinSystem) -> Result<FeasResult> {
    let n = sys.num_vars;
    let m = n + 1;
    let mut columns: Vec<Column> = Vec::new();
    let mut origins: Vec<Origin> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let as_column = |row: &Row, sign: bool| -> Column {
        let mut col: Column =
            row.coeffs.iter().map(|(v, a)| (*v, if sign { -a } else { a.clone() })).collect();
        if !row.rhs.is_zero() {
            col.push((n, if sign { -&row.rhs } else { row.rhs.clone() }));
        }
        col
    };
    let mut push = |col: Column, origin: Origin| {
        if !col.is_empty() && seen.insert(col.clone()) {
            columns.push(col);
            origins.push(origin);
        }
    };
    for (i, row) in sys.equalities.iter().enumerate() {
        push(as_column(row, false), Origin::EqPlus(i));
        push(as_column(row, true), Origin::EqMinus(i));
    }
    for (i, row) in sys.inequalities.iter().enumerate() {
        push(as_column(row, false), Origin::Ineq(i));
    }
    for (b, &v) in sys.nonneg_vars.iter().enumerate() {
        push(vec![(v, Rational::one())], Origin::Bound(b));
    }
    let mut rhs = vec![Rational::zero(); m];
    rhs[n] = Rational::one();

    match phase_one(m, &columns, &rhs)? {
        PhaseOne::Feasible(y) => {
            let mut cert = FarkasCertificate {
                eq_multipliers: vec![Rational::zero(); sys.equalities.len()],
                ineq_multipliers: vec![Rational::zero(); sys.inequalities.len()],
                bound_multipliers: vec![Rational::zero(); sys.nonneg_vars.len()],
            };
            for (val, origin) in y.into_iter().zip(&origins) {
                if val.is_zero() {
                    continue;
                }
                match *origin {
                    Origin::EqPlus(i) => cert.eq_multipliers[i] += val,
                    Origin::EqMinus(i) => cert.eq_multipliers[i] -= val,
                    Origin::Ineq(i) => cert.ineq_multipliers[i] += val,
                    Origin::Bound(b) => cert.bound_multipliers[b] += val,
                }
            }
            Ok(FeasResult::Infeasible(cert))
        }
        PhaseOne::Infeasible(pi) => {
            let lambda = pi[n].clone();
            if !lambda.is_positive() {
                return Err(Error::Internal("dual ray without positive scale".into()));
            }
            Ok(FeasResult::Feasible(pi[..n].iter().map(|p| -p / &lambda).collect()))
        }
    }
}

/// Exact feasibility decision. The witness or certificate is checked
/// before it is returned; a failed check is reported as an internal error.
pub fn feasible(sys: &LinSystem) -> Result<FeasResult> {
    let primal_rows = sys.equalities.len() + sys.inequalities.len();
    let result = if primal_rows <= sys.num_vars + 1 {
        solve_primal(sys)?
    } else {
        solve_dual(sys)?
    };
    match &result {
        FeasResult::Feasible(x) if !sys.check_witness(x) => {
            Err(Error::Internal("feasibility witness does not satisfy the system".into()))
        }
        FeasResult::Infeasible(c) => {
            c.check(sys)?;
            Ok(result)
        }
        _ => Ok(result),
    }
}

/// `lambda >= 0` with `sum_j lambda_j generators[j] = target`, or a
/// certificate that none exists. The system's variables are the `lambda_j`
/// and its equality rows are the coordinates.
pub fn nonneg_combination(target: &[Rational], generators: &[Vec<Rational>]) -> Result<FeasResult> {
    feasible(&nonneg_combination_system(target, generators)?)
}

pub fn nonneg_combination_system(target: &[Rational], generators: &[Vec<Rational>]) -> Result<LinSystem> {
    let d = target.len();
    if let Some(g) = generators.iter().find(|g| g.len() != d) {
        return Err(Error::LengthMismatch { expected: d, got: g.len() });
    }
    let mut sys = LinSystem::new(generators.len());
    sys.set_all_nonneg();
    for (coord, t) in target.iter().enumerate() {
        let coeffs = generators
            .iter()
            .enumerate()
            .filter(|(_, g)| !g[coord].is_zero())
            .map(|(j, g)| (j, g[coord].clone()))
            .collect();
        sys.add_equality(coeffs, t.clone())?;
    }
    Ok(sys)
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
struct RowJson {
    coeffs: Vec<(usize, String)>,
    rhs: String,
}

#[derive(Serialize, Deserialize)]
struct LinSystemJson {
    num_vars: usize,
    equalities: Vec<RowJson>,
    inequalities: Vec<RowJson>,
    nonneg_vars: Vec<usize>,
}

fn row_json(r: &Row) -> RowJson {
    RowJson {
        coeffs: r.coeffs.iter().map(|(v, a)| (*v, format_rational(a))).collect(),
        rhs: format_rational(&r.rhs),
    }
}

fn parse_row(r: &RowJson) -> Result<(Vec<(usize, Rational)>, Rational)> {
    let coeffs = r
        .coeffs
        .iter()
        .map(|(v, a)| Ok((*v, parse_rational(a)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((coeffs, parse_rational(&r.rhs)?))
}

impl Serialize for LinSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LinSystemJson {
            num_vars: self.num_vars,
            equalities: self.equalities.iter().map(row_json).collect(),
            inequalities: self.inequalities.iter().map(row_json).collect(),
            nonneg_vars: self.nonneg_vars.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = LinSystemJson::deserialize(d)?;
        let build = || -> Result<LinSystem> {
            let mut sys = LinSystem::new(raw.num_vars);
            for r in &raw.equalities {
                let (c, b) = parse_row(r)?;
                sys.add_equality(c, b)?;
            }
            for r in &raw.inequalities {
                let (c, b) = parse_row(r)?;
                sys.add_inequality(c, b)?;
            }
            for &v in &raw.nonneg_vars {
                sys.set_nonneg(v)?;
            }
            Ok(sys)
        };
        build().map_err(serde::de::Error::custom)
    }
}
