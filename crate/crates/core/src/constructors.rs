//! Builders for the named curve families and the full verification run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cert::{timed, CheckRecord, MainBuildCertificate, Outcome};
use crate::curve::{Family, ParamCurve};
use crate::error::{Error, Result};
use crate::field::{make_field, roots_of_unity, FieldElem};
use crate::gauss::{
    field_recovery_certificate, gauss_degree_detail, sampling_fields, tangency_sampled_with, tangency_symbolic, Leg,
    TangencyProfile, ENUM_LIMIT, GCD_DEGREE_LIMIT,
};
use crate::linalg::rank;
use crate::poly::Poly;
use crate::proj::wedge;
use crate::vspace::{nonclassical_detail, Automorphism};

/// Largest curve degree the constructors will build.
pub const MAX_DEGREE: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Theorem1Params {
    p: u64,
    q: u64,
    n: u32,
    q_exponent: u32,
}

/// `(q − 2) | q^n − 1`, by exact integer arithmetic.
pub fn divides_direct(q: u64, n: u32) -> bool {
    let m = q as u128 - 2;
    match (q as u128).checked_pow(n) {
        Some(v) => (v - 1) % m == 0,
        None => {
            let mut acc = 1u128;
            for _ in 0..n {
                acc = acc * (q as u128 % m) % m;
            }
            acc % m == 1 % m
        }
    }
}

/// `2^n ≡ 1 (mod q − 2)`, using `q ≡ 2`.
pub fn divides_via_two(q: u64, n: u32) -> bool {
    let m = q - 2;
    crate::arith::pow_mod_u128(2, n as u64, m as u128) == 1 % m as u128
}

impl Theorem1Params {
    pub fn new(p: u64, q: u64, n: u32) -> Result<Theorem1Params> {
        if !crate::arith::is_prime_u64(p) {
            return Err(Error::HypothesisViolation(format!("p = {p} is not prime")));
        }
        if p == 2 {
            return Err(Error::HypothesisViolation("p = 2 is excluded (need p > 2)".into()));
        }
        let mut e = 0u32;
        let mut r = q;
        while r > 1 && r % p == 0 {
            r /= p;
            e += 1;
        }
        if r != 1 || e == 0 {
            return Err(Error::HypothesisViolation(format!("q = {q} is not a power of p = {p}")));
        }
        if n == 0 {
            return Err(Error::HypothesisViolation("n must be positive".into()));
        }
        if !divides_direct(q, n) {
            return Err(Error::HypothesisViolation(format!(
                "q-2 = {} does not divide q^n-1 = {}^{}-1",
                q - 2,
                q,
                n
            )));
        }
        let too_big = q.checked_pow(2 * n).map_or(true, |d| d >= MAX_DEGREE);
        if too_big {
            return Err(Error::UnsupportedShape(format!("degree q^(2n)+1 for q = {q}, n = {n} is too large")));
        }
        Ok(Theorem1Params { p, q, n, q_exponent: e })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> u64 {
        self.q.pow(2 * self.n) + 1
    }
}

/// `(1 : t : t² − t^q : t^{q^n} − t^{q^{2n}} : t(t^{q^n} − t^{q^{2n}}))`.
pub fn theorem1(params: &Theorem1Params) -> Result<ParamCurve> {
    let k = make_field(params.p, 1)?;
    let q = params.q as usize;
    let a = q.pow(params.n);
    let b = q.pow(2 * params.n);
    ParamCurve::from_affine(vec![
        Poly::one(&k),
        Poly::x(&k),
        Poly::from_terms(&k, &[(2, 1), (q, -1)]),
        Poly::from_terms(&k, &[(a, 1), (b, -1)]),
        Poly::from_terms(&k, &[(a + 1, 1), (b + 1, -1)]),
    ])?
    .with_q_exponent(params.q_exponent)
    .map(|c| {
        c.with_family(Family::Theorem1 {
            p: params.p,
            q: params.q,
            n: params.n,
        })
    })
}

/// The `q − 2` solutions of `α^{q−2} = 1` in `F_{q^n}`.
pub fn translate_set(params: &Theorem1Params) -> Result<Vec<FieldElem>> {
    let big = make_field(params.p, params.q_exponent * params.n)?;
    let out = roots_of_unity(&big, params.q - 2);
    if out.len() as u64 != params.q - 2 {
        return Err(Error::HypothesisViolation(format!(
            "F_(q^n) holds {} of the q-2 = {} roots",
            out.len(),
            params.q - 2
        )));
    }
    Ok(out)
}

/// `(1 : t : t² − t^p : t³ + 2t^p − 3t^{p+1})` over `F_p`.
pub fn esteves_homma(p: u64) -> Result<ParamCurve> {
    if p == 2 {
        return Err(Error::BadCharacteristic(2));
    }
    let k = make_field(p, 1)?;
    let pu = p as usize;
    Ok(ParamCurve::from_affine(vec![
        Poly::one(&k),
        Poly::x(&k),
        Poly::from_terms(&k, &[(2, 1), (pu, -1)]),
        Poly::from_terms(&k, &[(3, 1), (pu, 2), (pu + 1, -3)]),
    ])?
    .with_family(Family::EstevesHomma { p }))
}

/// Set for `p = 3`, where the last coordinate reduces to zero.
pub fn esteves_homma_warning(p: u64) -> Option<String> {
    (p == 3).then(|| "for p = 3 the last coordinate t^3 + 2t^p - 3t^(p+1) vanishes; the curve lies in a plane".into())
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Check names to run; `None` runs everything.
    pub checks: Option<Vec<String>>,
    pub samples: usize,
    /// Parameters are drawn from `F_{q^ext}`; `None` picks a size from the
    /// sample count.
    pub ext_deg: Option<u32>,
    pub seed: u64,
    pub symbolic_cap: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            checks: None,
            samples: 50,
            ext_deg: None,
            seed: 0,
            symbolic_cap: 2000,
        }
    }
}

pub const CHECK_NAMES: &[&str] = &[
    "nondegenerate",
    "embedding",
    "tangency_symbolic",
    "tangency_sampled",
    "tangency_legs_agree",
    "gauss_degree",
    "field_recovery",
    "nonclassical",
];

impl VerifyConfig {
    fn wants(&self, name: &str) -> bool {
        self.checks.as_ref().map_or(true, |v| v.iter().any(|c| c == name))
    }
}

/// Tangency count the family is known to have.
pub fn expected_count(c: &ParamCurve) -> Option<usize> {
    match c.family()? {
        Family::Theorem1 { q, .. } => Some(*q as usize - 2),
        Family::EstevesHomma { p } if *p > 3 => Some(1),
        _ => None,
    }
}

/// Automorphisms the family is known to make non-classical; other curves
/// are probed with `t ↦ t + 1`.
pub fn default_automorphisms(c: &ParamCurve) -> Vec<Automorphism> {
    match c.family() {
        Some(Family::Theorem1 { p, q, n }) => Theorem1Params::new(*p, *q, *n)
            .and_then(|t| translate_set(&t))
            .map(|v| v.iter().map(Automorphism::translation).collect())
            .unwrap_or_default(),
        _ => vec![Automorphism::translation(&c.field().elem(c.field().one()))],
    }
}

/// Default `ext`: a multiple of `n` for the translate family (so the
/// translates are rational over the sampling field) with room for the
/// requested samples.
pub fn default_ext_deg(c: &ParamCurve, samples: usize) -> u32 {
    let step = match c.family() {
        Some(Family::Theorem1 { n, .. }) => *n,
        _ => 1,
    };
    let q = c.q() as f64;
    let want = (4 * samples).max(64) as f64;
    let mut e = step;
    while q.powi(e as i32) < want && e < 64 {
        e += step;
    }
    e
}

fn tangency_ok(c: &ParamCurve, count: usize) -> bool {
    match expected_count(c) {
        Some(want) => count == want,
        None => count >= 1,
    }
}

fn profile_json(p: &TangencyProfile) -> Value {
    serde_json::to_value(p).expect("serializable")
}

/// Injectivity and smoothness from samples only, for curves past the
/// symbolic cap.
fn embedding_sampled(c: &ParamCurve, seed: u64) -> CheckRecord {
    let k = c.field();
    let (no_collision, ext_deg, tried) = c.sampled_collisions();
    let v = c.infinity_vector();
    let d = c.degree();
    let sub: Vec<_> = c.affine().iter().map(|p| p.coeff(d - 1)).collect();
    let unram_inf = rank(k, &[v, sub]) == 2;
    let mut unram = true;
    let mut checked = 0usize;
    if let Ok(ext) = make_field(k.p() as u64, c.q_exponent() * ext_deg.max(1)) {
        if let Ok(lifted) = c.lift(&ext) {
            let derivs: Vec<Poly> = lifted.affine().iter().map(|p| p.derivative()).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..200 {
                let t = ext.random(&mut rng);
                let a: Vec<_> = lifted.affine().iter().map(|p| p.eval(t)).collect();
                let b: Vec<_> = derivs.iter().map(|p| p.eval(t)).collect();
                checked += 1;
                if wedge(&ext, &a, &b).iter().all(|&x| ext.is_zero(x)) {
                    unram = false;
                    break;
                }
            }
        }
    }
    let ok = no_collision && unram && unram_inf;
    CheckRecord::new(
        "embedding",
        Outcome::from_bool(ok),
        json!({
            "sampled_only": true,
            "collision_free": no_collision,
            "collision_ext_deg": ext_deg,
            "collision_samples": tried,
            "unramified_samples": checked,
            "unramified": unram,
            "unramified_at_infinity": unram_inf,
        }),
    )
    .with_leg(Leg::Sampled)
    .with_seed(seed)
}

/// Run every requested check on `c`. Failures are recorded, not returned.
pub fn verify_all(c: &ParamCurve, sigmas: &[Automorphism], cfg: &VerifyConfig) -> MainBuildCertificate {
    let mut cert = MainBuildCertificate::new(crate::report::curve_json(c));
    let symbolic = c.degree() <= cfg.symbolic_cap;
    let cap_reason = format!("degree {} exceeds symbolic cap {}", c.degree(), cfg.symbolic_cap);

    if cfg.wants("nondegenerate") {
        cert.push(timed(|| {
            CheckRecord::new("nondegenerate", Outcome::from_bool(c.nondegenerate()), json!({ "N": c.n() }))
                .with_leg(Leg::Symbolic)
        }));
    }
    if cfg.wants("embedding") {
        cert.push(timed(|| {
            if symbolic {
                let r = c.injectivity_unramified();
                CheckRecord::new("embedding", Outcome::from_bool(r.embedding), serde_json::to_value(&r).unwrap())
                    .with_leg(Leg::Symbolic)
            } else {
                embedding_sampled(c, cfg.seed)
            }
        }));
    }

    let mut sym_profile = None;
    let mut bad_locus = None;
    if cfg.wants("tangency_symbolic") || cfg.wants("tangency_legs_agree") {
        let rec = timed(|| {
            if !symbolic {
                return CheckRecord::skipped("tangency_symbolic", cap_reason.clone());
            }
            match tangency_symbolic(c) {
                Ok(s) => {
                    let n = s.profile.bad_locus_size;
                    let ok = tangency_ok(c, s.profile.generic_count);
                    let rec = CheckRecord::new("tangency_symbolic", Outcome::from_bool(ok), profile_json(&s.profile))
                        .with_leg(Leg::Symbolic)
                        .with_bad_locus(n);
                    sym_profile = Some(s.profile);
                    bad_locus = Some(s.bad_locus);
                    rec
                }
                Err(e) => CheckRecord::new("tangency_symbolic", Outcome::Fail, json!(e.to_string())).with_leg(Leg::Symbolic),
            }
        });
        if cfg.wants("tangency_symbolic") {
            cert.push(rec);
        }
    }

    let mut sampled_profile = None;
    if cfg.wants("tangency_sampled") || cfg.wants("tangency_legs_agree") {
        let ext = cfg.ext_deg.unwrap_or_else(|| default_ext_deg(c, cfg.samples));
        let rec = timed(|| {
            let too_big = c.degree() > GCD_DEGREE_LIMIT
                && sampling_fields(c, ext).map_or(true, |(_, big)| big.size() > ENUM_LIMIT);
            if too_big {
                return CheckRecord::skipped("tangency_sampled", format!("sampling field for ext {ext} is too large"))
                    .with_leg(Leg::Sampled)
                    .with_seed(cfg.seed);
            }
            match tangency_sampled_with(c, ext, cfg.samples, cfg.seed, bad_locus.as_ref()) {
                Ok(p) => {
                    let ok = tangency_ok(c, p.generic_count);
                    let n = p.bad_locus_size;
                    let rec = CheckRecord::new("tangency_sampled", Outcome::from_bool(ok), profile_json(&p))
                        .with_leg(Leg::Sampled)
                        .with_seed(cfg.seed)
                        .with_bad_locus(n);
                    sampled_profile = Some(p);
                    rec
                }
                Err(e) => CheckRecord::new("tangency_sampled", Outcome::Fail, json!(e.to_string()))
                    .with_leg(Leg::Sampled)
                    .with_seed(cfg.seed),
            }
        });
        if cfg.wants("tangency_sampled") {
            cert.push(rec);
        }
    }
    if cfg.wants("tangency_legs_agree") {
        let rec = match (&sym_profile, &sampled_profile) {
            (Some(s), Some(p)) => CheckRecord::new(
                "tangency_legs_agree",
                Outcome::from_bool(s.generic_count == p.generic_count),
                json!({ "symbolic": s.generic_count, "sampled": p.generic_count }),
            )
            .with_leg(Leg::Both)
            .with_seed(cfg.seed),
            _ => CheckRecord::skipped("tangency_legs_agree", "one of the legs did not run"),
        };
        cert.push(rec);
    }

    if cfg.wants("gauss_degree") {
        cert.push(timed(|| {
            if !symbolic {
                return CheckRecord::skipped("gauss_degree", cap_reason.clone());
            }
            match gauss_degree_detail(c) {
                Ok(g) => CheckRecord::new(
                    "gauss_degree",
                    Outcome::from_bool(g.degree == 1 && g.separable),
                    json!({ "degree": g.degree, "separable": g.separable, "gcd": g.gcd.to_string() }),
                )
                .with_leg(Leg::Symbolic),
                Err(e) => CheckRecord::new("gauss_degree", Outcome::Fail, json!(e.to_string())).with_leg(Leg::Symbolic),
            }
        }));
    }
    if cfg.wants("field_recovery") {
        cert.push(timed(|| {
            if !symbolic {
                return CheckRecord::skipped("field_recovery", cap_reason.clone());
            }
            match field_recovery_certificate(c) {
                Some(w) => {
                    CheckRecord::new("field_recovery", Outcome::Pass, serde_json::to_value(&w).unwrap()).with_leg(Leg::Symbolic)
                }
                None => CheckRecord::new("field_recovery", Outcome::Fail, Value::Null).with_leg(Leg::Symbolic),
            }
        }));
    }
    if cfg.wants("nonclassical") {
        let own;
        let sigmas = if sigmas.is_empty() {
            own = default_automorphisms(c);
            &own[..]
        } else {
            sigmas
        };
        cert.push(timed(|| {
            if sigmas.is_empty() {
                return CheckRecord::skipped("nonclassical", "no automorphism supplied");
            }
            let mut rows = Vec::new();
            let mut all = true;
            for s in sigmas {
                let [a, b, cc, d] = s.matrix();
                let k = s.field();
                let label = format!(
                    "t -> ({} t + {}) / ({} t + {})",
                    k.fmt_elem(a),
                    k.fmt_elem(b),
                    k.fmt_elem(cc),
                    k.fmt_elem(d)
                );
                match nonclassical_detail(c, s) {
                    Ok(det) => {
                        all &= det.nonclassical;
                        rows.push(json!({ "sigma": label, "nonclassical": det.nonclassical, "witness_minor": det.witness_minor }));
                    }
                    Err(e) => {
                        all = false;
                        rows.push(json!({ "sigma": label, "error": e.to_string() }));
                    }
                }
            }
            CheckRecord::new("nonclassical", Outcome::from_bool(all), json!(rows)).with_leg(Leg::Symbolic)
        }));
    }

    if let Some(Family::Theorem1 { p, q, n }) = c.family() {
        if let Ok(set) = Theorem1Params::new(*p, *q, *n).and_then(|t| translate_set(&t)) {
            let shown: Vec<String> = set.iter().map(|a| a.field().fmt_elem(a.value())).collect();
            cert.witnesses.insert("translate_set".into(), json!(shown));
        }
    }
    if let Some(rec) = cert.check("field_recovery") {
        if rec.result.is_pass() {
            cert.witnesses.insert("recovery_chain".into(), rec.witness.clone());
        }
    }
    cert
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vspace::nonclassical_check;

    #[test]
    fn hypothesis_forms_agree() {
        for q in 3..=100u64 {
            for n in 1..=12u32 {
                assert_eq!(divides_direct(q, n), divides_via_two(q, n), "q = {q}, n = {n}");
            }
        }
    }

    #[test]
    fn params_validation() {
        assert!(Theorem1Params::new(3, 3, 1).is_ok());
        let e = Theorem1Params::new(5, 5, 1).unwrap_err();
        assert!(matches!(&e, Error::HypothesisViolation(m) if m.contains("does not divide")), "{e}");
        assert!(Theorem1Params::new(5, 5, 2).is_ok());
        assert!(matches!(Theorem1Params::new(2, 4, 1), Err(Error::HypothesisViolation(_))));
        assert!(matches!(Theorem1Params::new(3, 6, 1), Err(Error::HypothesisViolation(_))));
        assert!(matches!(Theorem1Params::new(4, 4, 1), Err(Error::HypothesisViolation(_))));
        assert!(Theorem1Params::new(3, 9, 3).is_ok());
    }

    #[test]
    fn theorem1_examples() {
        let c = theorem1(&Theorem1Params::new(3, 3, 1).unwrap()).unwrap();
        let k = c.field().clone();
        let want = [
            Poly::one(&k),
            Poly::x(&k),
            Poly::from_i64s(&k, &[0, 0, 1, -1]),
            Poly::from_terms(&k, &[(3, 1), (9, -1)]),
            Poly::from_terms(&k, &[(4, 1), (10, -1)]),
        ];
        assert_eq!(c.affine(), &want);
        assert_eq!(c.degree(), 10);
        let c = theorem1(&Theorem1Params::new(5, 5, 2).unwrap()).unwrap();
        assert_eq!(c.degree(), 626);
        let c = theorem1(&Theorem1Params::new(3, 9, 3).unwrap()).unwrap();
        assert_eq!(c.q(), 9);
        assert_eq!(c.degree(), 531_442);
    }

    #[test]
    fn translate_examples() {
        let one = |p, q, n| translate_set(&Theorem1Params::new(p, q, n).unwrap()).unwrap();
        let s = one(3, 3, 1);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].value(), s[0].field().one());
        assert_eq!(one(3, 3, 2).len(), 1);
        let s = one(5, 5, 2);
        assert_eq!(s.len(), 3);
        for a in &s {
            assert_eq!(a.pow(3).value(), a.field().one());
        }
        let params = Theorem1Params::new(5, 5, 2).unwrap();
        let c = theorem1(&params).unwrap();
        for a in translate_set(&params).unwrap() {
            assert!(nonclassical_check(&c, &Automorphism::translation(&a)).unwrap());
        }
    }

    #[test]
    fn esteves_homma_examples() {
        let k = make_field(5, 1).unwrap();
        let c = esteves_homma(5).unwrap();
        assert_eq!(c.affine()[3], Poly::from_i64s(&k, &[0, 0, 0, 1, 0, 2, 2]));
        let k7 = make_field(7, 1).unwrap();
        let c = esteves_homma(7).unwrap();
        assert_eq!(c.affine()[2], Poly::from_terms(&k7, &[(2, 1), (7, -1)]));
        assert_eq!(c.affine()[3], Poly::from_terms(&k7, &[(3, 1), (7, 2), (8, 4)]));
        assert_eq!(esteves_homma(2).unwrap_err(), Error::BadCharacteristic(2));
        assert!(esteves_homma_warning(3).is_some());
        assert!(!esteves_homma(3).unwrap().nondegenerate());
    }

    #[test]
    fn verify_examples() {
        let c = theorem1(&Theorem1Params::new(3, 3, 1).unwrap()).unwrap();
        let cert = verify_all(&c, &[], &VerifyConfig::default());
        assert!(cert.passed(), "{:?}", cert.failures());
        assert_eq!(cert.check("tangency_symbolic").unwrap().witness["generic_count"], 1);

        let eh = esteves_homma(5).unwrap();
        let cert = verify_all(&eh, &[], &VerifyConfig::default());
        assert!(cert.passed(), "{:?}", cert.failures());
        assert_eq!(cert.check("tangency_sampled").unwrap().witness["generic_count"], 1);

        let k = make_field(5, 1).unwrap();
        let cubic = ParamCurve::from_affine((0..4).map(|e| Poly::from_terms(&k, &[(e, 1)])).collect()).unwrap();
        let sigma = Automorphism::translation(&k.elem(k.one()));
        let cert = verify_all(&cubic, &[sigma], &VerifyConfig::default());
        assert!(cert.check("nonclassical").unwrap().result.is_fail());
        assert_eq!(cert.check("tangency_symbolic").unwrap().witness["generic_count"], 0);
        assert!(!cert.passed());
    }

    #[test]
    fn check_selection_and_cap() {
        let c = theorem1(&Theorem1Params::new(3, 3, 2).unwrap()).unwrap();
        let cfg = VerifyConfig {
            checks: Some(vec!["gauss_degree".into()]),
            symbolic_cap: 50,
            ..VerifyConfig::default()
        };
        let cert = verify_all(&c, &[], &cfg);
        assert_eq!(cert.checks.len(), 1);
        assert!(matches!(cert.checks[0].result, Outcome::Skipped(_)));
        assert!(cert.passed());
    }
}
