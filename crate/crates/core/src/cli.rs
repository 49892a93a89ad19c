//! The `netrep` command line.
//!
//! Every subcommand prints one JSON document on stdout. Exit status 0
//! means the affirmative answer (property holds, feasible, refutation
//! found, member, certificate valid), 1 the negative one, and 2 a usage or
//! validation error, reported as JSON on stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_traits::{Signed, Zero};
use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::bits::Bits;
use crate::cone::{
    build_cone, decompose, extreme_rays, is_invariant, pair_flip, pair_symmetries, symmetry_reduce,
    ConeSpec, NodePermutation, Ray,
};
use crate::costfn::{builtin_function, check_property, CostFunction, Property, Violation, BUILTIN_FUNCTIONS};
use crate::encoding::{standard_encoding, Encoding, STANDARD_ENCODINGS};
use crate::error::{Error, Result};
use crate::lattice::{closure_meet_join, LatticeFamily, Point};
use crate::network::{gadget, is_retractable, min_cut, pinned, eval_representation, Network, GADGETS};
use crate::ratlp::{nonneg_combination_system, FarkasCertificate, FeasResult};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::rep_lp::{
    check_certificate, decide_representable, verify_witness, DomMode, RepCertificate, RepVerdict, RowTag,
};
use crate::wpol::{refutation_value, standard_wpol, validate_wpol, WeightedPolymorphism, STANDARD_WPOLS};

#[derive(Debug, Parser)]
#[command(
    name = "netrep",
    version,
    about = "Decide, exhibit and refute network representability of cost functions")]
pub struct Cli {
    /// Re-check a certificate emitted by `decide`, `wpol-refute` or
    /// `decompose`.
    #[arg(long, value_name = "FILE")]
    verify_certificate: Option<PathBuf>,

    /// Add a `wall_time_ms` field to the output.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a lattice property of a cost function.
    Check {
        #[arg(long)]
        property: String,
        /// JSON file or `builtin:NAME`.
        #[arg(long)]
        function: String,
    },
    /// Minimum s-t cut, optionally with designated nodes pinned.
    Mincut {
        #[arg(long)]
        network: String,
        /// Bit string over the designated nodes in node order.
        #[arg(long)]
        pin: Option<String>,
    },
    /// The function represented by a network under an encoding.
    EvalRep {
        #[arg(long)]
        network: String,
        #[arg(long)]
        encoding: String,
        #[arg(long, default_value = "0")]
        kappa: String,
        /// Do not check retractability first.
        #[arg(long)]
        skip_retractable_check: bool,
    },
    /// Whether retraction never increases the pinned cut value.
    Retractable {
        #[arg(long)]
        network: String,
        #[arg(long)]
        encoding: String,
    },
    /// Decide submodular representability by exact LP.
    Decide {
        #[arg(long)]
        function: String,
        #[arg(long)]
        encoding: String,
        /// Use all of {0,1}^{kn} instead of the minimal closed domain.
        #[arg(long)]
        full_dom: bool,
    },
    /// Meet/join closure of a point set, with an optional membership query.
    Closure {
        /// JSON: an array of label arrays, or {"family": .., "points": [..]}.
        #[arg(long)]
        points: String,
        #[arg(long)]
        family: Option<String>,
        /// Comma-separated labels, or a 0/1 string for boolean(1).
        #[arg(long)]
        query: Option<String>,
    },
    /// Evaluate a weighted polymorphism's nonmembership sum.
    WpolRefute {
        /// `omega2`, `omega_k(K)`, `builtin:NAME` or a JSON file.
        #[arg(long)]
        omega: String,
        /// Defaults to the standard target of a builtin omega.
        #[arg(long)]
        function: Option<String>,
        /// `;`-separated points of comma-separated labels, or a JSON file
        /// holding an array of label arrays.
        #[arg(long)]
        tuples: Option<String>,
    },
    /// Extreme rays of the cone of retractable networks without extra nodes.
    Rays {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "builtin:pair")]
        encoding: String,
        /// Allow the (s, t) edge.
        #[arg(long)]
        include_st: bool,
        /// `pair` (global + <-> - and 1 <-> 2), `pair-per-variable` or `none`.
        #[arg(long)]
        symmetry: Option<String>,
        /// Write one network file per ray and a manifest here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a network as a nonnegative combination of cone rays.
    Decompose {
        #[arg(long)]
        network: String,
        #[arg(long, default_value = "builtin:pair")]
        encoding: String,
        /// Output of `rays`; enumerated on the fly when omitted.
        #[arg(long)]
        rays: Option<PathBuf>,
        #[arg(long)]
        include_st: bool,
    },
    /// Materialize every builtin function, encoding, gadget and weighted
    /// polymorphism.
    Fixtures {
        #[arg(long)]
        out: PathBuf,
    },
}

struct Outcome {
    json: Value,
    code: i32,
}

fn outcome(json: Value, affirmative: bool) -> Outcome {
    Outcome { json, code: if affirmative { 0 } else { 1 } }
}

/// Parses `args` (program name first), runs, and writes to the given
/// streams. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let start = Instant::now();
    match dispatch(&cli) {
        Ok(mut o) => {
            if cli.timing {
                if let Value::Object(m) = &mut o.json {
                    m.insert("wall_time_ms".into(), json!(start.elapsed().as_secs_f64() * 1e3));
                }
            }
            let _ = writeln!(out, "{}", pretty(&o.json));
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "{}", pretty(&json!({ "error": e.to_string() })));
            2
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    if let Some(path) = &cli.verify_certificate {
        if cli.command.is_some() {
            return Err(Error::InvalidArgument("--verify-certificate takes no subcommand".into()));
        }
        return verify_certificate_file(path);
    }
    let Some(cmd) = &cli.command else {
        return Err(Error::InvalidArgument("no subcommand given (see --help)".into()));
    };
    match cmd {
        Command::Check { property, function } => cmd_check(property, function),
        Command::Mincut { network, pin } => cmd_mincut(network, pin.as_deref()),
        Command::EvalRep { network, encoding, kappa, skip_retractable_check } => {
            cmd_eval_rep(network, encoding, kappa, *skip_retractable_check)
        }
        Command::Retractable { network, encoding } => cmd_retractable(network, encoding),
        Command::Decide { function, encoding, full_dom } => cmd_decide(function, encoding, *full_dom),
        Command::Closure { points, family, query } => cmd_closure(points, family.as_deref(), query.as_deref()),
        Command::WpolRefute { omega, function, tuples } => {
            cmd_wpol_refute(omega, function.as_deref(), tuples.as_deref())
        }
        Command::Rays { n, encoding, include_st, symmetry, out } => {
            cmd_rays(*n, encoding, *include_st, symmetry.as_deref(), out.as_deref())
        }
        Command::Decompose { network, encoding, rays, include_st } => {
            cmd_decompose(network, encoding, rays.as_deref(), *include_st)
        }
        Command::Fixtures { out } => cmd_fixtures(out),
    }
}

// ---------------------------------------------------------------------------
// Inputs

fn read_json<T: DeserializeOwned>(path: &str) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn builtin(spec: &str) -> Option<&str> {
    spec.strip_prefix("builtin:")
}

fn load_function(spec: &str) -> Result<CostFunction> {
    match builtin(spec) {
        Some(name) => builtin_function(name),
        None => read_json(spec),
    }
}

fn load_encoding(spec: &str) -> Result<Encoding> {
    match builtin(spec) {
        Some(name) => standard_encoding(name),
        None => read_json(spec),
    }
}

/// A network file, a gadget file (`{"network": ..}`) or `builtin:GADGET`.
fn load_network(spec: &str) -> Result<Network> {
    if let Some(name) = builtin(spec) {
        return Ok(gadget(name)?.network);
    }
    let v: Value = read_json(spec)?;
    let v = match v {
        Value::Object(mut m) if m.contains_key("network") => m.remove("network").unwrap_or(Value::Null),
        other => other,
    };
    serde_json::from_value(v).map_err(|e| Error::Parse(format!("{spec}: {e}")))
}

fn from_value<T: DeserializeOwned>(v: &Value, what: &str) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field `{key}`")))
}

fn str_field<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    field(v, key)?.as_str().ok_or_else(|| Error::Parse(format!("field `{key}` is not a string")))
}

fn rat(v: &Value, what: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        _ => Err(Error::Parse(format!("{what} is not a rational"))),
    }
}

fn rats(r: &[Rational]) -> Value {
    Value::Array(r.iter().map(|x| Value::String(format_rational(x))).collect())
}

fn parse_rats(v: &Value, what: &str) -> Result<Vec<Rational>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what} is not an array")))?
        .iter()
        .map(|x| rat(x, what))
        .collect()
}

fn labels_of(f: &CostFunction, x: &[usize]) -> Value {
    json!(f.point_labels(x))
}

fn parse_labels(v: &Value) -> Result<Vec<String>> {
    from_value(v, "point")
}

// ---------------------------------------------------------------------------
// check, mincut, eval-rep, retractable

fn violation_json(f: &CostFunction, v: &Violation) -> Value {
    match v {
        Violation::Pair { x, y, meet, join } => {
            let val = |p: &Vec<usize>| f.value(p).clone();
            json!({
                "x": labels_of(f, x),
                "y": labels_of(f, y),
                "meet": labels_of(f, meet),
                "join": labels_of(f, join),
                "lhs": &val(x) + &val(y),
                "rhs": &val(meet) + &val(join),
            })
        }
        Violation::Step { lower, upper } => json!({
            "lower": labels_of(f, lower),
            "upper": labels_of(f, upper),
            "f_lower": f.value(lower),
            "f_upper": f.value(upper),
        }),
    }
}

fn cmd_check(property: &str, function: &str) -> Result<Outcome> {
    let p = Property::from_str(property)?;
    let f = load_function(function)?;
    let c = check_property(&f, p)?;
    let json = json!({
        "command": "check",
        "property": p.to_string(),
        "holds": c.holds,
        "violation": c.violation.as_ref().map(|v| violation_json(&f, v)),
    });
    Ok(outcome(json, c.holds))
}

fn cmd_mincut(network: &str, pin: Option<&str>) -> Result<Outcome> {
    let net = load_network(network)?;
    let (target, pin_json) = match pin {
        Some(p) => {
            let bits: Bits = p.parse()?;
            (pinned(&net, &bits)?, json!(bits.to_string()))
        }
        None => (net.clone(), Value::Null),
    };
    let cut = min_cut(&target)?;
    let side: Vec<String> = cut.source_side.iter().map(|&v| net.node_name(v)).collect();
    let json = json!({
        "command": "mincut",
        "pin": pin_json,
        "value": cut.value,
        "source_side": side,
    });
    Ok(outcome(json, true))
}

fn cmd_eval_rep(network: &str, encoding: &str, kappa: &str, skip: bool) -> Result<Outcome> {
    let net = load_network(network)?;
    let enc = load_encoding(encoding)?;
    let kappa = parse_rational(kappa)?;
    let check = if skip { None } else { Some(is_retractable(&net, &enc)?) };
    let f = eval_representation(&net, &enc, &kappa)?;
    let ok = check.as_ref().is_none_or(|c| c.holds);
    let json = json!({
        "command": "eval-rep",
        "retractable": check.as_ref().map(|c| c.holds),
        "counterexample": check.as_ref().and_then(|c| c.counterexample).map(|b| b.to_string()),
        "kappa": format_rational(&kappa),
        "function": f,
    });
    Ok(outcome(json, ok))
}

fn cmd_retractable(network: &str, encoding: &str) -> Result<Outcome> {
    let net = load_network(network)?;
    let enc = load_encoding(encoding)?;
    let c = is_retractable(&net, &enc)?;
    let json = json!({
        "command": "retractable",
        "retractable": c.holds,
        "counterexample": c.counterexample.map(|b| b.to_string()),
        "pinnings": 1u64 << net.num_designated(),
    });
    Ok(outcome(json, c.holds))
}

// ---------------------------------------------------------------------------
// decide

fn tag_json(f: &CostFunction, tag: &RowTag) -> Value {
    match tag {
        RowTag::Eq { x } => json!({ "eq": labels_of(f, x) }),
        RowTag::Sub { u, v } => json!({ "sub": [u.to_string(), v.to_string()] }),
        RowTag::Rho { v } => json!({ "rho": v.to_string() }),
    }
}

fn parse_tag(f: &CostFunction, v: &Value) -> Result<RowTag> {
    let bits = |v: &Value| -> Result<Bits> {
        v.as_str().ok_or_else(|| Error::Parse("bit string expected".into()))?.parse()
    };
    if let Some(x) = v.get("eq") {
        return Ok(RowTag::Eq { x: f.parse_point(&parse_labels(x)?)? });
    }
    if let Some(Value::Array(uv)) = v.get("sub") {
        if uv.len() == 2 {
            return Ok(RowTag::Sub { u: bits(&uv[0])?, v: bits(&uv[1])? });
        }
    }
    if let Some(r) = v.get("rho") {
        return Ok(RowTag::Rho { v: bits(r)? });
    }
    Err(Error::Parse(format!("unrecognized row tag {v}")))
}

const DECIDE_NOTE: &str = "infeasible means no submodular g exists, so f is not (k, rho, sigma)-network \
                           representable either";

fn mode_name(mode: DomMode) -> &'static str {
    match mode {
        DomMode::Minimal => "minimal",
        DomMode::Full => "full",
    }
}

fn cmd_decide(function: &str, encoding: &str, full: bool) -> Result<Outcome> {
    let f = load_function(function)?;
    let enc = load_encoding(encoding)?;
    let mode = if full { DomMode::Full } else { DomMode::Minimal };
    let d = decide_representable(&f, &enc, mode)?;
    let (verdict, witness, certificate) = match &d.verdict {
        RepVerdict::Feasible(g) => ("feasible", serde_json::to_value(g)?, Value::Null),
        RepVerdict::Infeasible(RepCertificate::Farkas(terms)) => {
            let value = check_certificate(&f, &enc, mode, &d.verdict_certificate())?;
            let rows: Vec<Value> = terms
                .iter()
                .map(|(t, y)| json!({ "row": tag_json(&f, t), "multiplier": format_rational(y) }))
                .collect();
            ("infeasible", Value::Null, json!({ "farkas": rows, "value": format_rational(&value) }))
        }
        RepVerdict::Infeasible(RepCertificate::ForcedFinite { x }) => {
            ("infeasible", Value::Null, json!({ "forced_finite": labels_of(&f, x) }))
        }
    };
    let feasible = d.is_feasible();
    let json = json!({
        "command": "decide",
        "function": f,
        "encoding": enc,
        "dom": mode_name(mode),
        "verdict": verdict,
        "stats": {
            "variables": d.stats.variables,
            "eq_rows": d.stats.eq_rows,
            "sub_rows": d.stats.sub_rows,
            "rho_rows": d.stats.rho_rows,
        },
        "dom_used": d.dom_used.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "witness": witness,
        "certificate": certificate,
        "note": DECIDE_NOTE,
    });
    Ok(outcome(json, feasible))
}

trait VerdictCertificate {
    fn verdict_certificate(&self) -> RepCertificate;
}

impl VerdictCertificate for crate::rep_lp::RepDecision {
    fn verdict_certificate(&self) -> RepCertificate {
        match &self.verdict {
            RepVerdict::Infeasible(c) => c.clone(),
            RepVerdict::Feasible(_) => RepCertificate::Farkas(Vec::new()),
        }
    }
}

/// `Ok(Err(reason))` for a well-formed but invalid certificate.
type Check = Result<std::result::Result<String, String>>;

fn verify_decide(doc: &Value) -> Check {
    let f: CostFunction = from_value(field(doc, "function")?, "function")?;
    let enc: Encoding = from_value(field(doc, "encoding")?, "encoding")?;
    let mode = match str_field(doc, "dom")? {
        "minimal" => DomMode::Minimal,
        "full" => DomMode::Full,
        other => return Err(Error::Parse(format!("unknown dom `{other}`"))),
    };
    match str_field(doc, "verdict")? {
        "feasible" => {
            let g: CostFunction = from_value(field(doc, "witness")?, "witness")?;
            Ok(if verify_witness(&g, &f, &enc)? {
                Ok("witness is submodular, matches f on the encoded points and respects rho".into())
            } else {
                Err("witness fails verification".into())
            })
        }
        "infeasible" => {
            let cert = field(doc, "certificate")?;
            let cert = if let Some(x) = cert.get("forced_finite") {
                RepCertificate::ForcedFinite { x: f.parse_point(&parse_labels(x)?)? }
            } else {
                let rows = field(cert, "farkas")?
                    .as_array()
                    .ok_or_else(|| Error::Parse("`farkas` is not an array".into()))?;
                let terms = rows
                    .iter()
                    .map(|r| Ok((parse_tag(&f, field(r, "row")?)?, rat(field(r, "multiplier")?, "multiplier")?)))
                    .collect::<Result<Vec<_>>>()?;
                RepCertificate::Farkas(terms)
            };
            Ok(match check_certificate(&f, &enc, mode, &cert) {
                Ok(c) => Ok(format!("rows combine to 0 >= {}", format_rational(&c))),
                Err(Error::Internal(m)) => Err(m),
                Err(e) => return Err(e),
            })
        }
        other => Err(Error::Parse(format!("unknown verdict `{other}`"))),
    }
}

// ---------------------------------------------------------------------------
// closure

fn cmd_closure(points: &str, family: Option<&str>, query: Option<&str>) -> Result<Outcome> {
    let raw: Value = read_json(points)?;
    let (file_family, list) = match &raw {
        Value::Array(_) => (None, raw.clone()),
        Value::Object(m) => (
            m.get("family").and_then(Value::as_str).map(str::to_string),
            field(&raw, "points")?.clone(),
        ),
        _ => return Err(Error::Parse("points must be an array or an object".into())),
    };
    let family: LatticeFamily = family.map(str::to_string).or(file_family).as_deref().unwrap_or("boolean").parse()?;
    let pts = list
        .as_array()
        .ok_or_else(|| Error::Parse("`points` is not an array".into()))?
        .iter()
        .map(|p| family.parse_point(&parse_labels(p)?))
        .collect::<Result<Vec<Point>>>()?;
    let closed = closure_meet_join(family, &pts)?;
    let query_point = match query {
        None => None,
        Some(q) => {
            let labels: Vec<String> = if q.contains(',') {
                q.split(',').map(|s| s.trim().to_string()).collect()
            } else if family == (LatticeFamily::Boolean { m: 1 }) {
                q.trim().chars().map(String::from).collect()
            } else {
                vec![q.trim().to_string()]
            };
            Some(family.parse_point(&labels)?)
        }
    };
    let member = query_point.as_ref().map(|q| closed.binary_search(q).is_ok());
    let json = json!({
        "command": "closure",
        "family": family.to_string(),
        "input_size": pts.len(),
        "size": closed.len(),
        "closure": closed.iter().map(|p| family.point_labels(p)).collect::<Vec<_>>(),
        "query": query_point.as_ref().map(|q| family.point_labels(q)),
        "member": member,
    });
    Ok(outcome(json, member.unwrap_or(true)))
}

// ---------------------------------------------------------------------------
// wpol-refute

struct OmegaInput {
    omega: WeightedPolymorphism,
    /// Name for builtins, the full object otherwise.
    source: Value,
    default_target: Option<CostFunction>,
    default_tuples: Option<Vec<Vec<usize>>>,
    note: Option<String>,
}

fn load_omega(spec: &str) -> Result<OmegaInput> {
    let name = builtin(spec).unwrap_or(spec);
    if !Path::new(spec).exists() || builtin(spec).is_some() {
        let w = standard_wpol(name)?;
        let k = w.encoding.k();
        let note = (w.name.starts_with("omega_k") && k > 3).then(|| {
            format!("terms evaluated through the width-{k} unary encoding; the tuples only use labels 0..3")
        });
        return Ok(OmegaInput {
            source: Value::String(w.name.clone()),
            omega: w.omega,
            default_target: Some(w.target),
            default_tuples: Some(w.tuples),
            note,
        });
    }
    let omega: WeightedPolymorphism = read_json(spec)?;
    Ok(OmegaInput {
        source: serde_json::to_value(&omega)?,
        omega,
        default_target: None,
        default_tuples: None,
        note: None,
    })
}

fn parse_tuples(f: &CostFunction, spec: &str) -> Result<Vec<Vec<usize>>> {
    let raw: Vec<Vec<String>> = if Path::new(spec).exists() {
        read_json(spec)?
    } else {
        spec.split(';')
            .map(|p| p.split(',').map(|l| l.trim().to_string()).collect())
            .collect()
    };
    raw.iter().map(|p| f.parse_point(p)).collect()
}

/// Conditions on the weights alone: zero sum and negative weights only on
/// projections.
fn weight_conditions(omega: &WeightedPolymorphism) -> Result<(bool, bool)> {
    let sum_zero = omega.weight_sum().is_zero();
    let projections = omega
        .support()
        .iter()
        .all(|w| !w.weight.is_negative() || w.op.is_projection().is_some());
    // Cross-check against the library's own validator on an empty sample.
    let check = validate_wpol(omega, &[], 0, 0)?;
    if check.holds != (sum_zero && projections) {
        return Err(Error::Internal("weight condition checks disagree".into()));
    }
    Ok((sum_zero, projections))
}

fn refutation_json(omega: &OmegaInput, f: &CostFunction, tuples: &[Vec<usize>]) -> Result<(Value, bool)> {
    let (sum_zero, projections) = weight_conditions(&omega.omega)?;
    let r = refutation_value(&omega.omega, f, tuples)?;
    let refutes = r.refutes() && sum_zero && projections;
    let json = json!({
        "command": "wpol-refute",
        "omega": omega.source,
        "function": f,
        "tuples": tuples.iter().map(|t| f.point_labels(t)).collect::<Vec<_>>(),
        "weights_sum_to_zero": sum_zero,
        "negative_weights_on_projections": projections,
        "contributions": r.contributions,
        "total": r.total,
        "refutes": refutes,
        "note": omega.note,
    });
    Ok((json, refutes))
}

fn cmd_wpol_refute(omega: &str, function: Option<&str>, tuples: Option<&str>) -> Result<Outcome> {
    let omega = load_omega(omega)?;
    let f = match function {
        Some(s) => load_function(s)?,
        None => omega
            .default_target
            .clone()
            .ok_or_else(|| Error::InvalidArgument("--function is required for a custom omega".into()))?,
    };
    let tuples = match tuples {
        Some(s) => parse_tuples(&f, s)?,
        None => omega
            .default_tuples
            .clone()
            .ok_or_else(|| Error::InvalidArgument("--tuples is required for a custom omega".into()))?,
    };
    let (json, refutes) = refutation_json(&omega, &f, &tuples)?;
    Ok(outcome(json, refutes))
}

fn verify_wpol(doc: &Value) -> Check {
    let source = field(doc, "omega")?;
    let omega = match source {
        Value::String(name) => load_omega(&format!("builtin:{name}"))?,
        other => {
            let omega: WeightedPolymorphism = from_value(other, "omega")?;
            OmegaInput { source: other.clone(), omega, default_target: None, default_tuples: None, note: None }
        }
    };
    let f: CostFunction = from_value(field(doc, "function")?, "function")?;
    let tuples = from_value::<Vec<Vec<String>>>(field(doc, "tuples")?, "tuples")?
        .iter()
        .map(|p| f.parse_point(p))
        .collect::<Result<Vec<_>>>()?;
    let (recomputed, refutes) = refutation_json(&omega, &f, &tuples)?;
    for key in ["contributions", "total"] {
        if recomputed.get(key) != doc.get(key) {
            return Ok(Err(format!("recomputed `{key}` differs from the certificate")));
        }
    }
    Ok(if refutes {
        Ok(format!("superposition sum is {}", recomputed["total"].as_str().unwrap_or("?")))
    } else {
        Err("the sum is not positive or the weights are invalid".into())
    })
}

// ---------------------------------------------------------------------------
// rays, decompose

fn edge_names(spec: &ConeSpec, net: &Network) -> Vec<[String; 2]> {
    spec.edges().iter().map(|&(u, v)| [net.node_name(u), net.node_name(v)]).collect()
}

fn symmetry_generators(spec: &ConeSpec, name: Option<&str>) -> Result<Vec<NodePermutation>> {
    let is_pair = spec.encoding().k() == 2;
    match name.unwrap_or(if is_pair { "pair" } else { "none" }) {
        "none" => Ok(Vec::new()),
        "pair" if is_pair => Ok(pair_symmetries(spec.n())),
        "pair-per-variable" if is_pair => {
            let mut g = pair_symmetries(spec.n());
            g.extend((0..spec.n()).map(|i| pair_flip(spec.n(), i)));
            Ok(g)
        }
        other => Err(Error::InvalidArgument(format!("symmetry `{other}` does not apply to this encoding"))),
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn cmd_rays(n: usize, encoding: &str, include_st: bool, symmetry: Option<&str>, out: Option<&Path>) -> Result<Outcome> {
    let enc = load_encoding(encoding)?;
    let spec = ConeSpec::new(n, enc.clone(), include_st)?;
    let sys = build_cone(&spec)?;
    let rays = extreme_rays(&sys)?;
    let gens = symmetry_generators(&spec, symmetry)?;
    let invariant = is_invariant(&spec, &rays, &gens)?;
    let orbits = symmetry_reduce(&spec, &rays, &gens)?;
    let empty = Network::empty(n, enc.k())?;
    let cone_json = json!({
        "n": n,
        "encoding": enc,
        "include_st": include_st,
        "edges": edge_names(&spec, &empty),
        "system": sys,
    });
    let cone_hash = sha256_hex(serde_json::to_string(&cone_json)?.as_bytes());
    let mut json = json!({
        "command": "rays",
        "n": n,
        "encoding": enc,
        "include_st": include_st,
        "edges": edge_names(&spec, &empty),
        "rows": sys.inequalities().len(),
        "cone_hash": cone_hash,
        "ray_count": rays.len(),
        "rays": rays,
        "symmetry": symmetry.unwrap_or(if enc.k() == 2 { "pair" } else { "none" }),
        "invariant": invariant,
        "orbit_count": orbits.len(),
        "orbits": orbits,
    });
    if let Some(dir) = out {
        let mut files = Vec::new();
        fs::create_dir_all(dir)?;
        for (i, r) in rays.iter().enumerate() {
            let name = format!("ray_{:03}.json", i + 1);
            let text = pretty(&serde_json::to_value(spec.network(&r.to_rationals())?)?);
            fs::write(dir.join(&name), &text)?;
            files.push(json!({ "file": name, "sha256": sha256_hex(text.as_bytes()) }));
        }
        let manifest = json!({
            "n": n,
            "encoding": enc,
            "include_st": include_st,
            "cone_hash": cone_hash,
            "ray_count": rays.len(),
            "orbit_count": orbits.len(),
            "orbit_sizes": orbits.iter().map(|o| o.size).collect::<Vec<_>>(),
            "representatives": orbits
                .iter()
                .map(|o| rays.binary_search(&o.representative).map(|i| format!("ray_{:03}.json", i + 1)).ok())
                .collect::<Vec<_>>(),
            "files": files,
        });
        fs::write(dir.join("manifest.json"), pretty(&manifest))?;
        json["out"] = json!(dir.display().to_string());
    }
    Ok(outcome(json, true))
}

fn load_rays(path: &Path, spec: &ConeSpec) -> Result<Vec<Ray>> {
    let doc: Value = read_json(&path.display().to_string())?;
    let enc: Encoding = from_value(field(&doc, "encoding")?, "encoding")?;
    let n = field(&doc, "n")?.as_u64().unwrap_or(0) as usize;
    let st = field(&doc, "include_st")?.as_bool().unwrap_or(false);
    if n != spec.n() || &enc != spec.encoding() || st != spec.include_st() {
        return Err(Error::InvalidArgument("ray file was enumerated for a different cone".into()));
    }
    let rays: Vec<Ray> = from_value(field(&doc, "rays")?, "rays")?;
    if rays.iter().any(|r| r.0.len() != spec.edges().len()) {
        return Err(Error::Parse("ray length does not match the edge set".into()));
    }
    Ok(rays)
}

fn farkas_json(c: &FarkasCertificate) -> Value {
    json!({
        "eq_multipliers": rats(&c.eq_multipliers),
        "ineq_multipliers": rats(&c.ineq_multipliers),
        "bound_multipliers": rats(&c.bound_multipliers),
    })
}

fn cmd_decompose(network: &str, encoding: &str, rays: Option<&Path>, include_st: bool) -> Result<Outcome> {
    let net = load_network(network)?;
    let enc = load_encoding(encoding)?;
    let spec = ConeSpec::new(net.n(), enc.clone(), include_st)?;
    let rays = match rays {
        Some(p) => load_rays(p, &spec)?,
        None => extreme_rays(&build_cone(&spec)?)?,
    };
    let result = decompose(&spec, &net, &rays)?;
    let (coefficients, certificate) = match &result {
        FeasResult::Feasible(l) => (
            Value::Array(
                l.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| json!({ "ray": i, "coefficient": format_rational(c) }))
                    .collect(),
            ),
            Value::Null,
        ),
        FeasResult::Infeasible(c) => (Value::Null, farkas_json(c)),
    };
    let json = json!({
        "command": "decompose",
        "network": net,
        "encoding": enc,
        "include_st": include_st,
        "rays": rays,
        "feasible": result.is_feasible(),
        "coefficients": coefficients,
        "certificate": certificate,
    });
    Ok(outcome(json, result.is_feasible()))
}

fn verify_decompose(doc: &Value) -> Check {
    let net: Network = from_value(field(doc, "network")?, "network")?;
    let enc: Encoding = from_value(field(doc, "encoding")?, "encoding")?;
    let st = field(doc, "include_st")?.as_bool().unwrap_or(false);
    let spec = ConeSpec::new(net.n(), enc, st)?;
    let rays: Vec<Ray> = from_value(field(doc, "rays")?, "rays")?;
    let target = spec.capacity_vector(&net)?;
    let gens: Vec<Vec<Rational>> = rays.iter().map(Ray::to_rationals).collect();
    let sys = nonneg_combination_system(&target, &gens)?;
    if field(doc, "feasible")?.as_bool() == Some(true) {
        let mut lambda = vec![Rational::zero(); rays.len()];
        for c in field(doc, "coefficients")?.as_array().ok_or_else(|| Error::Parse("coefficients".into()))? {
            let i = field(c, "ray")?.as_u64().ok_or_else(|| Error::Parse("ray index".into()))? as usize;
            if i >= rays.len() {
                return Ok(Err(format!("ray index {i} out of range")));
            }
            lambda[i] = rat(field(c, "coefficient")?, "coefficient")?;
        }
        Ok(if sys.check_witness(&lambda) {
            Ok("coefficients are nonnegative and reproduce the capacity vector".into())
        } else {
            Err("coefficients do not reproduce the capacity vector".into())
        })
    } else {
        let c = field(doc, "certificate")?;
        let cert = FarkasCertificate {
            eq_multipliers: parse_rats(field(c, "eq_multipliers")?, "eq_multipliers")?,
            ineq_multipliers: parse_rats(field(c, "ineq_multipliers")?, "ineq_multipliers")?,
            bound_multipliers: parse_rats(field(c, "bound_multipliers")?, "bound_multipliers")?,
        };
        Ok(match cert.check(&sys) {
            Ok(v) => Ok(format!("rows combine to 0 >= {}", format_rational(&v))),
            Err(e) => Err(e.to_string()),
        })
    }
}

// ---------------------------------------------------------------------------
// verify-certificate

fn verify_certificate_file(path: &Path) -> Result<Outcome> {
    let doc: Value = read_json(&path.display().to_string())?;
    let (json, valid) = verify_certificate(&doc)?;
    Ok(outcome(json, valid))
}

/// Re-checks a document emitted by `decide`, `wpol-refute` or `decompose`.
/// Returns the report and whether the certificate is valid.
pub fn verify_certificate(doc: &Value) -> Result<(Value, bool)> {
    let kind = str_field(doc, "command")?.to_string();
    let check = match kind.as_str() {
        "decide" => verify_decide(doc)?,
        "wpol-refute" => verify_wpol(doc)?,
        "decompose" => verify_decompose(doc)?,
        other => return Err(Error::InvalidArgument(format!("`{other}` output carries no certificate"))),
    };
    let (valid, detail) = match check {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    let json = json!({
        "command": "verify-certificate",
        "kind": kind,
        "claim": doc.get("verdict").or_else(|| doc.get("refutes")).or_else(|| doc.get("feasible")),
        "valid": valid,
        "detail": detail,
    });
    Ok((json, valid))
}

// ---------------------------------------------------------------------------
// fixtures

/// The seven points whose closure contains `(1,0,1,0,1,0)`.
pub const CLOSURE_POINTS: [&str; 7] = ["010101", "010110", "011001", "011010", "100101", "100110", "101001"];

fn file_stem(name: &str) -> String {
    name.replace('(', "_").replace(')', "")
}

fn cmd_fixtures(out: &Path) -> Result<Outcome> {
    let mut files = Map::new();
    let mut write = |rel: String, v: Value| -> Result<()> {
        let path = out.join(&rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let text = serde_json::to_string(&v)?;
        fs::write(&path, &text)?;
        files.insert(rel, Value::String(sha256_hex(text.as_bytes())));
        Ok(())
    };
    for name in BUILTIN_FUNCTIONS {
        write(format!("functions/{}.json", file_stem(name)), serde_json::to_value(builtin_function(name)?)?)?;
    }
    for name in STANDARD_ENCODINGS {
        write(format!("encodings/{}.json", file_stem(name)), serde_json::to_value(standard_encoding(name)?)?)?;
    }
    for name in GADGETS {
        let g = gadget(name)?;
        write(
            format!("gadgets/{name}.json"),
            json!({ "network": g.network, "encoding": g.encoding, "kappa": format_rational(&g.kappa) }),
        )?;
    }
    for name in STANDARD_WPOLS {
        let w = standard_wpol(name)?;
        write(
            format!("wpols/{}.json", file_stem(name)),
            json!({
                "name": w.name,
                "omega": w.omega,
                "target": w.target,
                "tuples": w.tuples.iter().map(|t| w.target.point_labels(t)).collect::<Vec<_>>(),
            }),
        )?;
    }
    let points: Vec<Vec<String>> =
        CLOSURE_POINTS.iter().map(|p| p.chars().map(String::from).collect()).collect();
    write("points/closure_seven.json".into(), json!({ "family": "boolean(1)", "points": points }))?;
    let manifest = json!({ "command": "fixtures", "out": out.display().to_string(), "files": files });
    fs::write(out.join("manifest.json"), pretty(&manifest))?;
    Ok(outcome(manifest, true))
}
