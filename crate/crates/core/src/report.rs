//! JSON curve files, verification reports and the parameter sweep.
//!
//! Field elements are written as integer codes `Σ c_i p^i` of their
//! coordinates in the power basis of the modulus.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::artin_schreier::ASField;
use crate::cert::{CheckRecord, MainBuildCertificate, Outcome};
use crate::constructors::{theorem1, verify_all, Theorem1Params, VerifyConfig, MAX_DEGREE};
use crate::curve::{Family, ParamCurve};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldElem, FieldSpec};
use crate::poly::Poly;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Coefficient lists longer than this are written as sparse terms.
const DENSE_LIMIT: usize = 4096;
const MAX_COORDS: usize = 64;
const MAX_Q: u64 = 1 << 12;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// On-disk form of a curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveFile {
    kind: String,
    p: u64,
    field_m: u32,
    modulus: Option<Vec<u32>>,
    q_exponent: u32,
    #[serde(rename = "N")]
    n: usize,
    degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    affine_coeffs: Option<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    affine_terms: Option<Vec<Vec<(usize, u64)>>>,
    family: Option<Family>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ASFile {
    kind: String,
    p: u64,
    field_m: u32,
    modulus: Option<Vec<u32>>,
    q: u64,
    g: Vec<u64>,
    alpha: u64,
    #[serde(rename = "N")]
    n: usize,
}

/// An Artin–Schreier build request.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ASSpec {
    pub field: ASField,
    pub alpha: FieldElem,
    pub n_dim: usize,
}

/// Contents of a curve file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveInput {
    Param(ParamCurve),
    ArtinSchreier(ASSpec),
}

fn field_of(p: u64, m: u32, modulus: &Option<Vec<u32>>) -> Result<FieldSpec> {
    if m == 0 {
        return Err(parse_err("field_m must be positive"));
    }
    let k = match modulus {
        None if m == 1 => crate::field::make_field(p, 1)?,
        None => return Err(parse_err("modulus required when field_m > 1")),
        Some(md) => {
            if md.len() != m as usize + 1 {
                return Err(parse_err(format!("modulus must have {} entries", m + 1)));
            }
            FieldSpec::with_modulus(p, md)?
        }
    };
    if k.m() != m {
        return Err(parse_err("modulus degree disagrees with field_m"));
    }
    Ok(k)
}

fn modulus_of(k: &FieldSpec) -> Option<Vec<u32>> {
    if k.m() == 1 {
        None
    } else {
        k.modulus().map(|m| m.to_vec())
    }
}

fn elem_of(k: &FieldSpec, code: u64) -> Result<Elem> {
    if code >= k.size() {
        return Err(parse_err(format!("coefficient {code} is not below {}", k.size())));
    }
    Ok(k.from_code(code))
}

fn poly_codes(p: &Poly) -> Vec<u64> {
    p.coeffs().iter().map(|&c| p.field().code(c)).collect()
}

/// JSON description of a parametrized curve.
pub fn curve_json(c: &ParamCurve) -> Value {
    serde_json::to_value(curve_file(c)).expect("serializable")
}

fn curve_file(c: &ParamCurve) -> CurveFile {
    let k = c.field();
    let sparse = c.degree() + 1 > DENSE_LIMIT;
    let (affine_coeffs, affine_terms) = if sparse {
        let terms = c.affine().iter().map(|p| p.terms().map(|(e, x)| (e, k.code(x))).collect()).collect();
        (None, Some(terms))
    } else {
        (Some(c.affine().iter().map(poly_codes).collect()), None)
    };
    CurveFile {
        kind: "param_curve".into(),
        p: k.p() as u64,
        field_m: k.m(),
        modulus: modulus_of(k),
        q_exponent: c.q_exponent(),
        n: c.n(),
        degree: c.degree(),
        affine_coeffs,
        affine_terms,
        family: c.family().cloned(),
    }
}

fn curve_from_file(f: CurveFile) -> Result<ParamCurve> {
    if f.kind != "param_curve" {
        return Err(parse_err(format!("unexpected kind {}", f.kind)));
    }
    let k = field_of(f.p, f.field_m, &f.modulus)?;
    if f.degree as u64 > MAX_DEGREE {
        return Err(parse_err("degree too large"));
    }
    let polys: Vec<Poly> = match (f.affine_coeffs, f.affine_terms) {
        (Some(cs), None) => {
            if cs.len() > MAX_COORDS {
                return Err(parse_err("too many coordinates"));
            }
            cs.iter()
                .map(|v| {
                    if v.len() > f.degree + 1 {
                        return Err(parse_err("coefficient list longer than degree + 1"));
                    }
                    Ok(Poly::new(&k, v.iter().map(|&c| elem_of(&k, c)).collect::<Result<_>>()?))
                })
                .collect::<Result<_>>()?
        }
        (None, Some(ts)) => {
            if ts.len() > MAX_COORDS {
                return Err(parse_err("too many coordinates"));
            }
            ts.iter()
                .map(|terms| {
                    let mut v = vec![k.zero(); f.degree + 1];
                    let mut last = None;
                    for &(e, c) in terms {
                        if e > f.degree || last.is_some_and(|l| l >= e) {
                            return Err(parse_err("terms must have increasing exponents up to the degree"));
                        }
                        let x = elem_of(&k, c)?;
                        if k.is_zero(x) {
                            return Err(parse_err("zero coefficient in sparse terms"));
                        }
                        v[e] = x;
                        last = Some(e);
                    }
                    Ok(Poly::new(&k, v))
                })
                .collect::<Result<_>>()?
        }
        _ => return Err(parse_err("exactly one of affine_coeffs and affine_terms is required")),
    };
    let mut c = ParamCurve::from_affine(polys)?.with_q_exponent(f.q_exponent)?;
    if c.n() != f.n || c.degree() != f.degree {
        return Err(parse_err("N or degree disagrees with the coordinates (or they share a factor)"));
    }
    if let Some(fam) = f.family {
        c = c.with_family(fam);
    }
    Ok(c)
}

pub fn as_json(s: &ASSpec) -> Value {
    let k = s.field.field();
    serde_json::to_value(ASFile {
        kind: "artin_schreier".into(),
        p: k.p() as u64,
        field_m: k.m(),
        modulus: modulus_of(k),
        q: s.field.q(),
        g: poly_codes(s.field.g()),
        alpha: k.code(s.alpha.value()),
        n: s.n_dim,
    })
    .expect("serializable")
}

fn as_from_file(f: ASFile) -> Result<ASSpec> {
    let k = field_of(f.p, f.field_m, &f.modulus)?;
    if f.q > MAX_Q || f.g.len() > DENSE_LIMIT || f.n > MAX_COORDS {
        return Err(parse_err("artin_schreier parameters too large"));
    }
    let g = Poly::new(&k, f.g.iter().map(|&c| elem_of(&k, c)).collect::<Result<_>>()?);
    if poly_codes(&g) != f.g {
        return Err(parse_err("g has trailing zero coefficients"));
    }
    let field = ASField::new(&k, f.q, g)?;
    let alpha = k.elem(elem_of(&k, f.alpha)?);
    Ok(ASSpec {
        field,
        alpha,
        n_dim: f.n,
    })
}

/// Parse a curve file (either kind). Every rejection, including
/// mathematically invalid contents, is reported as [`Error::Parse`].
pub fn parse_curve(text: &str) -> Result<CurveInput> {
    parse_curve_inner(text).map_err(|e| match e {
        Error::Parse(_) => e,
        other => parse_err(other.to_string()),
    })
}

fn parse_curve_inner(text: &str) -> Result<CurveInput> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| parse_err("missing kind"))?;
    match kind {
        "param_curve" => {
            let f: CurveFile = serde_json::from_value(v).map_err(|e| parse_err(e.to_string()))?;
            Ok(CurveInput::Param(curve_from_file(f)?))
        }
        "artin_schreier" => {
            let f: ASFile = serde_json::from_value(v).map_err(|e| parse_err(e.to_string()))?;
            Ok(CurveInput::ArtinSchreier(as_from_file(f)?))
        }
        other => Err(parse_err(format!("unknown kind {other}"))),
    }
}

/// Pretty JSON text of a curve file, newline-terminated.
pub fn write_curve(input: &CurveInput) -> String {
    let v = match input {
        CurveInput::Param(c) => curve_json(c),
        CurveInput::ArtinSchreier(s) => as_json(s),
    };
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

/// Integers separated by commas and/or whitespace, optionally inside
/// brackets: `1,0,2`, `[1, 0, 2]`, `1 0 2`.
pub fn parse_coeff_list(text: &str) -> Result<Vec<i64>> {
    let t = text.trim();
    let t = match (t.strip_prefix('['), t.ends_with(']')) {
        (Some(rest), true) => &rest[..rest.len() - 1],
        (None, false) => t,
        _ => return Err(parse_err("unbalanced brackets")),
    };
    if t.trim().is_empty() {
        return Err(parse_err("empty coefficient list"));
    }
    let out: Vec<i64> = t
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().map_err(|e| parse_err(format!("{s:?}: {e}"))))
        .collect::<Result<_>>()?;
    if out.len() > DENSE_LIMIT {
        return Err(parse_err("coefficient list too long"));
    }
    // "1,,2" and trailing commas are malformed.
    let commas = t.split(',').count();
    if t.contains(',') && t.split(',').any(|s| s.trim().is_empty()) {
        return Err(parse_err(format!("empty entry among {commas} comma-separated fields")));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReport {
    pub tool_version: String,
    pub curve: Value,
    pub checks: Vec<CheckRecord>,
    pub witnesses: BTreeMap<String, Value>,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn from_certificate(cert: MainBuildCertificate) -> VerificationReport {
        let verdict = if cert.passed() { Verdict::Pass } else { Verdict::Fail };
        VerificationReport {
            tool_version: TOOL_VERSION.to_string(),
            curve: cert.curve,
            checks: cert.checks,
            witnesses: cert.witnesses,
            verdict,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// The report with every timing zeroed, for comparisons.
    pub fn without_timings(&self) -> VerificationReport {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.elapsed_ms = 0;
        }
        r
    }
}

/// Parse a report, checking that the verdict matches its checks.
pub fn parse_report(text: &str) -> Result<VerificationReport> {
    let r: VerificationReport = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    let any_fail = r.checks.iter().any(|c| c.result.is_fail());
    if any_fail != (r.verdict == Verdict::Fail) {
        return Err(parse_err("verdict disagrees with the check results"));
    }
    Ok(r)
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub primes: Vec<u64>,
    /// Exponents `e` with `q = p^e`.
    pub q_exponents: Vec<u32>,
    pub n_values: Vec<u32>,
    /// Rows above this degree are reported without running anything.
    pub max_degree: u64,
    pub verify: VerifyConfig,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: u64,
    pub q: u64,
    pub n: u32,
    pub degree: u64,
    pub generic_count: Option<usize>,
    pub symbolic_count: Option<usize>,
    pub sampled_count: Option<usize>,
    pub gauss_degree: Option<usize>,
    pub separable: Option<bool>,
    pub symbolic: String,
    pub sampled: String,
    pub wall_ms: u64,
    pub error: Option<String>,
}

fn status(rec: Option<&CheckRecord>) -> String {
    match rec.map(|r| &r.result) {
        None => "absent".into(),
        Some(Outcome::Pass) => "pass".into(),
        Some(Outcome::Fail) => "fail".into(),
        Some(Outcome::Skipped(why)) if why.starts_with("degree") => "skipped(degree)".into(),
        Some(Outcome::Skipped(why)) => format!("skipped({why})"),
    }
}

fn sweep_row(params: Theorem1Params, cfg: &SweepConfig) -> SweepRow {
    let start = Instant::now();
    let mut row = SweepRow {
        p: params.p(),
        q: params.q(),
        n: params.n(),
        degree: params.degree(),
        generic_count: None,
        symbolic_count: None,
        sampled_count: None,
        gauss_degree: None,
        separable: None,
        symbolic: "absent".into(),
        sampled: "absent".into(),
        wall_ms: 0,
        error: None,
    };
    if params.degree() > cfg.max_degree {
        row.symbolic = "skipped(budget)".into();
        row.sampled = "skipped(budget)".into();
        return row;
    }
    let c = match theorem1(&params) {
        Ok(c) => c,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let mut vcfg = cfg.verify.clone();
    vcfg.checks = Some(
        ["tangency_symbolic", "tangency_sampled", "tangency_legs_agree", "gauss_degree"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    let cert = verify_all(&c, &[], &vcfg);
    let count = |name: &str| {
        cert.check(name)
            .and_then(|r| r.witness.get("generic_count"))
            .and_then(Value::as_u64)
            .map(|x| x as usize)
    };
    row.symbolic_count = count("tangency_symbolic");
    row.sampled_count = count("tangency_sampled");
    row.generic_count = row.symbolic_count.or(row.sampled_count);
    if let Some(g) = cert.check("gauss_degree") {
        row.gauss_degree = g.witness.get("degree").and_then(Value::as_u64).map(|x| x as usize);
        row.separable = g.witness.get("separable").and_then(Value::as_bool);
    }
    row.symbolic = status(cert.check("tangency_symbolic"));
    row.sampled = status(cert.check("tangency_sampled"));
    let failed = cert.failures();
    if !failed.is_empty() {
        row.error = Some(format!("failed: {}", failed.join(", ")));
    }
    row.wall_ms = start.elapsed().as_millis() as u64;
    row
}

/// One row per valid `(p, q, n)`; invalid triples are left out.
pub fn sweep(cfg: &SweepConfig) -> Vec<SweepRow> {
    let mut triples = Vec::new();
    for &p in &cfg.primes {
        for &e in &cfg.q_exponents {
            let Some(q) = p.checked_pow(e) else { continue };
            for &n in &cfg.n_values {
                if let Ok(t) = Theorem1Params::new(p, q, n) {
                    triples.push(t);
                }
            }
        }
    }
    triples.par_iter().map(|&t| sweep_row(t, cfg)).collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "p",
        "q",
        "n",
        "degree",
        "generic_count",
        "symbolic_count",
        "sampled_count",
        "gauss_degree",
        "separable",
        "symbolic",
        "sampled",
        "wall_ms",
        "error",
    ])
    .map_err(|e| parse_err(e.to_string()))?;
    let opt = |x: Option<String>| x.unwrap_or_default();
    for r in rows {
        w.write_record([
            r.p.to_string(),
            r.q.to_string(),
            r.n.to_string(),
            r.degree.to_string(),
            opt(r.generic_count.map(|x| x.to_string())),
            opt(r.symbolic_count.map(|x| x.to_string())),
            opt(r.sampled_count.map(|x| x.to_string())),
            opt(r.gauss_degree.map(|x| x.to_string())),
            opt(r.separable.map(|x| x.to_string())),
            r.symbolic.clone(),
            r.sampled.clone(),
            r.wall_ms.to_string(),
            opt(r.error.clone()),
        ])
        .map_err(|e| parse_err(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| parse_err(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| parse_err(e.to_string()))
}

pub fn sweep_json(rows: &[SweepRow]) -> String {
    let mut s = serde_json::to_string_pretty(&json!({ "rows": rows })).expect("serializable");
    s.push('\n');
    s
}
