//! Tangent lines, the Gauss map and tangency counts.

use std::collections::{BTreeMap, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipoly::{resultant_u, BiPoly};
use crate::curve::{CurvePoint, ParamCurve};
use crate::embed::embedding;
use crate::error::{Error, Result};
use crate::field::{make_field, Elem, FieldSpec};
use crate::poly::Poly;
use crate::proj::{on_line, pair_indices, pair_pos, span_line, wedge3, PlueckerLine, ProjPoint};
use crate::sepgcd::SepSystem;

/// Plücker polynomials of the tangent line with their common content removed.
#[derive(Clone, Debug)]
pub struct GaussData {
    pub plucker_funcs: Vec<Poly>,
    pub content: Poly,
}

impl GaussData {
    pub fn new(c: &ParamCurve) -> Result<GaussData> {
        let raw = c.plucker_polys();
        let content = raw.iter().fold(Poly::zero(c.field()), |g, p| g.gcd(p));
        if content.is_zero() {
            return Err(Error::DegenerateTangentSystem);
        }
        let plucker_funcs = raw.iter().map(|p| p.exact_div(&content).expect("content divides")).collect();
        Ok(GaussData { plucker_funcs, content })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Leg {
    Symbolic,
    Sampled,
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleStats {
    pub ext_deg: u32,
    pub samples: usize,
    pub seed: u64,
    pub counts: Vec<usize>,
    pub modal_count: usize,
    pub disagreements: usize,
    pub rejected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangencyProfile {
    pub generic_count: usize,
    pub leg: Leg,
    /// (multiplicity, number of roots) over the algebraic closure of
    /// `F_q(t)`, for the roots other than `u = t`.
    pub multiplicity_pattern: Vec<(usize, usize)>,
    pub tangency_gcd: Option<String>,
    pub gcd_u_degree: Option<usize>,
    pub diagonal_multiplicity: Option<usize>,
    pub squarefree: Option<bool>,
    pub infinity_incident: bool,
    pub bad_locus_size: usize,
    pub sampled: Option<SampleStats>,
}

/// Everything the symbolic leg derives, beyond the profile.
#[derive(Clone, Debug)]
pub struct SymbolicTangency {
    pub profile: TangencyProfile,
    pub gcd: BiPoly,
    /// The gcd with every factor `u - t` removed.
    pub residual: BiPoly,
    pub bad_locus: Poly,
}

/// The 3x3 minors of `[φ(t); φ'(t); φ(u)]`, as sums `ω(t) * f(u)`.
fn minor_system(c: &ParamCurve, omega: &[Poly]) -> SepSystem {
    let n = c.affine().len();
    let mut sys = SepSystem::new(c.field(), c.affine().to_vec());
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                sys.push(vec![
                    (omega[pair_pos(n, i, j)].clone(), l),
                    (omega[pair_pos(n, i, l)].neg(), j),
                    (omega[pair_pos(n, j, l)].clone(), i),
                ]);
            }
        }
    }
    sys
}

/// Gcd of the polynomials in `t` whose common roots are the parameters where
/// the tangent line meets the image of `(0:1)`; zero when it always does.
fn infinity_incidence(c: &ParamCurve, omega: &[Poly]) -> Poly {
    let k = c.field();
    let v = c.infinity_vector();
    let n = v.len();
    let mut g = Poly::zero(k);
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                let m = omega[pair_pos(n, i, j)]
                    .scale(v[l])
                    .sub(&omega[pair_pos(n, i, l)].scale(v[j]))
                    .add(&omega[pair_pos(n, j, l)].scale(v[i]));
                g = g.gcd(&m);
            }
        }
    }
    g
}

/// Tangent line at a parameter over `target`.
pub fn tangent_line(c: &ParamCurve, target: &FieldSpec, pt: CurvePoint) -> Result<PlueckerLine> {
    let (a, b) = match pt {
        CurvePoint::Affine(t) => {
            let a = c.eval_affine(target, t)?;
            let b: Vec<Elem> = c
                .derivative_polys()
                .iter()
                .map(|p| Ok(p.lift(target)?.eval(t)))
                .collect::<Result<_>>()?;
            (a, b)
        }
        CurvePoint::Infinity => {
            // Chart (s : 1): the forms are the reversed coefficient lists.
            let emb = embedding(c.field(), target)?;
            let d = c.degree();
            let a = c.infinity_vector().into_iter().map(|x| emb.apply(x)).collect();
            let b = c
                .affine()
                .iter()
                .map(|p| if d == 0 { target.zero() } else { emb.apply(p.coeff(d - 1)) })
                .collect();
            (a, b)
        }
    };
    let pa = ProjPoint::new(target, a)?;
    let pb = ProjPoint::new(target, b).map_err(|_| Error::RamifiedPoint)?;
    span_line(&pa, &pb).map_err(|_| Error::RamifiedPoint)
}

/// Exact tangency data over `F_q(t)`.
pub fn tangency_symbolic(c: &ParamCurve) -> Result<SymbolicTangency> {
    let k = c.field();
    let gd = GaussData::new(c)?;
    let omega = &gd.plucker_funcs;
    let sys = minor_system(c, omega);
    let gcd = match sys.gcd() {
        Ok(g) => g,
        Err(Error::AllConstantInU) => return Err(Error::DegenerateTangentSystem),
        Err(e) => return Err(e),
    };
    let mut residual = gcd.clone();
    let mut e = 0usize;
    loop {
        let (q, r) = residual.div_u_minus_t_minus(k.zero());
        if !r.is_zero() || residual.degree_u() == Some(0) {
            break;
        }
        residual = q.primitive_part();
        e += 1;
    }
    let pattern = residual.root_multiplicities();
    let finite: usize = pattern.iter().map(|&(_, r)| r).sum();
    let inf = infinity_incidence(c, omega);
    let infinity_incident = inf.is_zero();

    let mut bad = gd.content.clone();
    bad = bad.mul(&gcd.lc());
    if residual.degree_u().unwrap_or(0) > 0 {
        bad = bad.mul(&residual.eval_u_at_t_plus(k.zero()));
        if let Some(rad) = residual.separable_radical() {
            if rad.degree_u().unwrap() > 1 && rad.weight() <= 4096 {
                bad = bad.mul(&resultant_u(&rad, &rad.derivative_u()));
            }
        }
    }
    if !infinity_incident {
        bad = bad.mul(&inf);
    }
    let bad_locus = bad.squarefree_part();
    let profile = TangencyProfile {
        generic_count: finite + usize::from(infinity_incident),
        leg: Leg::Symbolic,
        squarefree: Some(pattern.iter().all(|&(m, _)| m == 1)),
        multiplicity_pattern: pattern,
        tangency_gcd: Some(gcd.to_string()),
        gcd_u_degree: gcd.degree_u(),
        diagonal_multiplicity: Some(e),
        infinity_incident,
        bad_locus_size: bad_locus.degree().unwrap_or(0),
        sampled: None,
    };
    Ok(SymbolicTangency {
        profile,
        gcd,
        residual,
        bad_locus,
    })
}

pub fn tangency_profile_symbolic(c: &ParamCurve) -> Result<TangencyProfile> {
    Ok(tangency_symbolic(c)?.profile)
}

/// Above this degree the sampled leg enumerates `F_{q^(2 ext)}` instead of
/// taking gcds of the specialized minors.
pub const GCD_DEGREE_LIMIT: usize = 4096;
/// Above this degree no bad-locus polynomial is computed and ramified
/// samples are rejected one at a time.
pub const BAD_LOCUS_DEGREE_LIMIT: usize = 10_000;
/// Largest field the sampled leg will enumerate.
pub const ENUM_LIMIT: u64 = 1 << 22;

/// Parameters to avoid when sampling without the symbolic leg: ramified
/// points and points whose tangent line meets the image of `(0:1)`.
pub fn sampling_bad_locus(c: &ParamCurve) -> Result<Poly> {
    let gd = GaussData::new(c)?;
    let inf = infinity_incidence(c, &gd.plucker_funcs);
    let bad = if inf.is_zero() { gd.content.clone() } else { gd.content.mul(&inf) };
    Ok(bad.squarefree_part())
}

fn lcm(a: u32, b: u32) -> u32 {
    a / crate::arith::gcd_u64(a as u64, b as u64) as u32 * b
}

/// Fields for the sampled leg: parameters `t` from `F_{q^ext}`, incident
/// parameters `u` searched in `F_{q^(2 ext)}`.
pub fn sampling_fields(c: &ParamCurve, ext_deg: u32) -> Result<(FieldSpec, FieldSpec)> {
    let p = c.field().p() as u64;
    let mt = lcm(c.field().m(), c.q_exponent() * ext_deg);
    Ok((make_field(p, mt)?, make_field(p, 2 * mt)?))
}

fn tangent_wedge(big: &FieldSpec, lifted: &[Poly], derivs: &[Poly], t0: Elem) -> Option<Vec<Elem>> {
    let a: Vec<Elem> = lifted.iter().map(|p| p.eval(t0)).collect();
    let b: Vec<Elem> = derivs.iter().map(|p| p.eval(t0)).collect();
    let w = crate::proj::wedge(big, &a, &b);
    if w.iter().all(|&x| big.is_zero(x)) {
        None
    } else {
        Some(w)
    }
}

/// Number of parameters `u != t0` over `big`, including `(0:1)`, whose image
/// lies on the tangent line at `t0`.
pub fn incident_count(c: &ParamCurve, big: &FieldSpec, lifted: &[Poly], t0: Elem) -> Result<usize> {
    let n = lifted.len();
    let derivs: Vec<Poly> = lifted.iter().map(|p| p.derivative()).collect();
    let w = tangent_wedge(big, lifted, &derivs, t0).ok_or(Error::RamifiedPoint)?;
    let line = tangent_line(c, big, CurvePoint::Affine(t0))?;
    let ut = Poly::new(big, vec![big.neg(t0), big.one()]);
    let mut g = Poly::zero(big);
    'outer: for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                let m = lifted[l]
                    .scale(w[pair_pos(n, i, j)])
                    .sub(&lifted[j].scale(w[pair_pos(n, i, l)]))
                    .add(&lifted[i].scale(w[pair_pos(n, j, l)]));
                g = g.gcd(&m);
                if g == ut {
                    break 'outer;
                }
            }
        }
    }
    let mut count = 0;
    if !g.is_zero() {
        for u in g.roots() {
            if u == t0 {
                continue;
            }
            let img = c.eval(big, CurvePoint::Affine(u))?;
            assert!(on_line(&img, &line), "root of the incidence gcd off the tangent line");
            count += 1;
        }
    }
    if on_line(&c.eval(big, CurvePoint::Infinity)?, &line) {
        count += 1;
    }
    Ok(count)
}

/// Images of every parameter of `big`, for curves too large for gcds.
struct ImageTable {
    points: Vec<(Elem, Vec<Elem>)>,
    infinity: Vec<Elem>,
}

impl ImageTable {
    fn new(c: &ParamCurve, big: &FieldSpec, lifted: &[Poly]) -> Result<ImageTable> {
        let all: Vec<Elem> = big.elements().collect();
        let terms: Vec<Vec<(usize, Elem)>> = lifted.iter().map(|p| p.terms().collect()).collect();
        let dense: Vec<bool> = lifted.iter().zip(&terms).map(|(p, t)| t.len() * 8 >= p.coeffs().len()).collect();
        let eval = |i: usize, u: Elem| -> Elem {
            if dense[i] {
                lifted[i].eval(u)
            } else {
                terms[i].iter().fold(big.zero(), |acc, &(e, c)| big.add(acc, big.mul(c, big.pow(u, e as u64))))
            }
        };
        let points = all
            .par_iter()
            .map(|&u| (u, (0..lifted.len()).map(|i| eval(i, u)).collect()))
            .collect();
        let infinity = c.eval(big, CurvePoint::Infinity)?.coords().to_vec();
        Ok(ImageTable { points, infinity })
    }

    fn count(&self, big: &FieldSpec, w: &[Elem], t0: Elem) -> usize {
        let on = |x: &[Elem]| wedge3(big, w, x).all(|e| big.is_zero(e));
        self.points.iter().filter(|(u, img)| *u != t0 && on(img)).count() + usize::from(on(&self.infinity))
    }
}

/// Sampled tangency count, avoiding the roots of `bad` (or of
/// [`sampling_bad_locus`] when `None`). Ramified samples are always
/// rejected.
pub fn tangency_sampled_with(
    c: &ParamCurve,
    ext_deg: u32,
    samples: usize,
    seed: u64,
    bad: Option<&Poly>,
) -> Result<TangencyProfile> {
    if ext_deg == 0 {
        return Err(Error::DegenerateInput("ext_deg must be positive".into()));
    }
    let own;
    let bad = match bad {
        Some(b) => Some(b),
        None if c.degree() <= BAD_LOCUS_DEGREE_LIMIT => {
            own = sampling_bad_locus(c)?;
            Some(&own)
        }
        None => None,
    };
    let (small, big) = sampling_fields(c, ext_deg)?;
    let use_table = c.degree() > GCD_DEGREE_LIMIT;
    if use_table && big.size() > ENUM_LIMIT {
        return Err(Error::DegenerateInput(format!(
            "degree {} needs enumeration of a field of size {} (limit {ENUM_LIMIT})",
            c.degree(),
            big.size()
        )));
    }
    let bad_small = bad.map(|b| b.lift(&small)).transpose()?;
    let bad_size = bad.and_then(|b| b.degree()).unwrap_or(0);
    let available = (small.size() as usize).saturating_sub(bad_size);
    if available < samples {
        return Err(Error::InsufficientPoints { available: available as u64, requested: samples });
    }
    let emb = embedding(&small, &big)?;
    let lifted: Vec<Poly> = c.affine().iter().map(|p| p.lift(&big)).collect::<Result<_>>()?;
    let derivs: Vec<Poly> = lifted.iter().map(|p| p.derivative()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = Vec::with_capacity(samples);
    let mut seen = HashSet::new();
    let mut rejected = 0usize;
    let limit = 50 * samples + 1000;
    while chosen.len() < samples {
        if rejected + chosen.len() > limit || seen.len() as u64 == small.size() {
            return Err(Error::InsufficientPoints { available: chosen.len() as u64, requested: samples });
        }
        let t = small.random(&mut rng);
        if !seen.insert(t) {
            continue;
        }
        if bad_small.as_ref().is_some_and(|b| small.is_zero(b.eval(t))) {
            rejected += 1;
            continue;
        }
        let t_big = emb.apply(t);
        match tangent_wedge(&big, &lifted, &derivs, t_big) {
            Some(w) => chosen.push((t_big, w)),
            None => rejected += 1,
        }
    }
    let counts: Vec<usize> = if use_table {
        let table = ImageTable::new(c, &big, &lifted)?;
        chosen.par_iter().map(|(t, w)| table.count(&big, w, *t)).collect()
    } else {
        chosen
            .par_iter()
            .map(|(t, _)| incident_count(c, &big, &lifted, *t))
            .collect::<Result<_>>()?
    };
    let mut freq = BTreeMap::new();
    for &x in &counts {
        *freq.entry(x).or_insert(0usize) += 1;
    }
    let modal = freq.iter().max_by_key(|&(x, f)| (*f, std::cmp::Reverse(*x))).map(|(x, _)| *x).unwrap_or(0);
    let disagreements = counts.iter().filter(|&&x| x != modal).count();
    let inf_on = match chosen.first() {
        Some((_, w)) => {
            let v = c.eval(&big, CurvePoint::Infinity)?;
            wedge3(&big, w, v.coords()).all(|e| big.is_zero(e))
        }
        None => false,
    };
    Ok(TangencyProfile {
        generic_count: modal,
        leg: Leg::Sampled,
        multiplicity_pattern: Vec::new(),
        tangency_gcd: None,
        gcd_u_degree: None,
        diagonal_multiplicity: None,
        squarefree: None,
        infinity_incident: inf_on,
        bad_locus_size: bad_size,
        sampled: Some(SampleStats {
            ext_deg,
            samples,
            seed,
            counts,
            modal_count: modal,
            disagreements,
            rejected,
        }),
    })
}

pub fn tangency_sampled(c: &ParamCurve, ext_deg: u32, samples: usize, seed: u64) -> Result<TangencyProfile> {
    tangency_sampled_with(c, ext_deg, samples, seed, None)
}

#[derive(Clone, Debug)]
pub struct GaussDegree {
    pub degree: usize,
    pub separable: bool,
    pub gcd: BiPoly,
}

/// Degree of the Gauss map onto its image and whether it is separable.
pub fn gauss_degree_detail(c: &ParamCurve) -> Result<GaussDegree> {
    let gd = GaussData::new(c)?;
    let g = &gd.plucker_funcs;
    let live: Vec<usize> = (0..g.len()).filter(|&i| !g[i].is_zero()).collect();
    let mut sys = SepSystem::new(c.field(), g.clone());
    for (a, &i) in live.iter().enumerate() {
        for &j in &live[a + 1..] {
            sys.push(vec![(g[j].clone(), i), (g[i].neg(), j)]);
        }
    }
    let gcd = match sys.gcd() {
        Ok(x) => x,
        Err(Error::AllConstantInU) => return Err(Error::DegenerateTangentSystem),
        Err(e) => return Err(e),
    };
    let separable = live.iter().enumerate().any(|(a, &i)| {
        live[a + 1..].iter().any(|&j| {
            !g[i].derivative().mul(&g[j]).sub(&g[i].mul(&g[j].derivative())).is_zero()
        })
    });
    Ok(GaussDegree {
        degree: gcd.degree_u().unwrap(),
        separable,
        gcd,
    })
}

pub fn gauss_degree(c: &ParamCurve) -> Result<(usize, bool)> {
    let d = gauss_degree_detail(c)?;
    Ok((d.degree, d.separable))
}

/// A ratio of two Plücker functions that is a degree-1 function of `t`, so
/// `t` lies in the function field of the Gauss image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub numerator: (usize, usize),
    pub denominator: (usize, usize),
    pub ratio: String,
}

pub fn field_recovery_certificate(c: &ParamCurve) -> Option<Witness> {
    let gd = GaussData::new(c).ok()?;
    let g = &gd.plucker_funcs;
    let pairs = pair_indices(c.affine().len());
    let k = c.field();
    for (a, &pa) in pairs.iter().enumerate() {
        for (b, &pb) in pairs.iter().enumerate() {
            let (num, den) = (&g[a], &g[b]);
            if a == b || num.is_zero() || den.is_zero() || num.deg().abs_diff(den.deg()) > 1 {
                continue;
            }
            let h = num.gcd(den);
            let (x, y) = (num.exact_div(&h).unwrap(), den.exact_div(&h).unwrap());
            if x.deg() > 1 || y.deg() > 1 {
                continue;
            }
            let det = k.sub(k.mul(x.coeff(0), y.coeff(1)), k.mul(x.coeff(1), y.coeff(0)));
            if k.is_zero(det) {
                continue;
            }
            let ratio = crate::poly::RatFunc::new(x, y).expect("nonzero denominator");
            return Some(Witness {
                numerator: pa,
                denominator: pb,
                ratio: ratio.to_string(),
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldSpec {
        make_field(p, 1).unwrap()
    }

    fn thm1(p: u64, n: u32) -> ParamCurve {
        let k = f(p);
        let q = p as usize;
        let a = q.pow(n);
        let b = q.pow(2 * n);
        ParamCurve::from_affine(vec![
            Poly::one(&k),
            Poly::x(&k),
            Poly::from_terms(&k, &[(2, 1), (q, -1)]),
            Poly::from_terms(&k, &[(a, 1), (b, -1)]),
            Poly::from_terms(&k, &[(a + 1, 1), (b + 1, -1)]),
        ])
        .unwrap()
    }

    fn cubic(k: &FieldSpec) -> ParamCurve {
        ParamCurve::from_affine((0..4).map(|e| Poly::from_terms(k, &[(e, 1)])).collect()).unwrap()
    }

    /// Independent oracle: test every `u` of `big` and `(0:1)` for incidence.
    fn brute_count(c: &ParamCurve, big: &FieldSpec, t0: Elem) -> usize {
        let line = tangent_line(c, big, CurvePoint::Affine(t0)).unwrap();
        let mut n = 0;
        for u in big.elements() {
            if u != t0 && on_line(&c.eval(big, CurvePoint::Affine(u)).unwrap(), &line) {
                n += 1;
            }
        }
        n + usize::from(on_line(&c.eval(big, CurvePoint::Infinity).unwrap(), &line))
    }

    #[test]
    fn image_table_matches_gcd_route() {
        let c = thm1(3, 2);
        let (small, big) = sampling_fields(&c, 2).unwrap();
        let emb = embedding(&small, &big).unwrap();
        let lifted: Vec<Poly> = c.affine().iter().map(|p| p.lift(&big).unwrap()).collect();
        let derivs: Vec<Poly> = lifted.iter().map(|p| p.derivative()).collect();
        let table = ImageTable::new(&c, &big, &lifted).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..6 {
            let t = emb.apply(small.random(&mut rng));
            let Some(w) = tangent_wedge(&big, &lifted, &derivs, t) else { continue };
            assert_eq!(table.count(&big, &w, t), incident_count(&c, &big, &lifted, t).unwrap());
        }
    }

    #[test]
    fn tangent_line_examples() {
        let k3 = f(3);
        let c = thm1(3, 1);
        let l = tangent_line(&c, &k3, CurvePoint::Affine(k3.zero())).unwrap();
        let e = |v: &[i64]| ProjPoint::from_i64s(&k3, v).unwrap();
        assert_eq!(l, span_line(&e(&[1, 0, 0, 0, 0]), &e(&[0, 1, 0, 0, 0])).unwrap());
        // Reduced rows at a generic t.
        let ext = make_field(3, 5).unwrap();
        let t = ext.primitive_element();
        let (tq, tqq) = (ext.pow(t, 3), ext.pow(t, 9));
        let r1 = vec![ext.one(), ext.zero(), ext.neg(ext.add(ext.mul(t, t), tq)), ext.sub(tq, tqq), ext.zero()];
        let r2 = vec![ext.zero(), ext.one(), ext.add(t, t), ext.zero(), ext.sub(tq, tqq)];
        let want = span_line(&ProjPoint::new(&ext, r1).unwrap(), &ProjPoint::new(&ext, r2).unwrap()).unwrap();
        assert_eq!(tangent_line(&c, &ext, CurvePoint::Affine(t)).unwrap(), want);
        let k5 = f(5);
        let l = tangent_line(&cubic(&k5), &k5, CurvePoint::Affine(k5.one())).unwrap();
        let want = span_line(
            &ProjPoint::from_i64s(&k5, &[1, 1, 1, 1]).unwrap(),
            &ProjPoint::from_i64s(&k5, &[0, 1, 2, 3]).unwrap(),
        )
        .unwrap();
        assert_eq!(l, want);
    }

    #[test]
    fn symbolic_examples() {
        let s = tangency_symbolic(&thm1(3, 1)).unwrap();
        let k = f(3);
        let ut = |c: i64| BiPoly::u_minus_t_minus(&k, k.from_i64(c));
        assert_eq!(s.profile.generic_count, 1);
        assert_eq!(s.residual, ut(1));
        assert_eq!(s.gcd, ut(0).pow(2).mul(&ut(1)));
        assert!(!s.profile.infinity_incident);

        let tc = tangency_symbolic(&cubic(&f(5))).unwrap();
        assert_eq!(tc.profile.generic_count, 0);
        assert_eq!(tc.residual, BiPoly::one(&f(5)));
    }

    #[test]
    fn sampled_matches_brute_force() {
        let c = thm1(3, 1);
        let prof = tangency_sampled(&c, 3, 10, 7).unwrap();
        assert_eq!(prof.generic_count, 1);
        let (small, big) = sampling_fields(&c, 3).unwrap();
        let emb = embedding(&small, &big).unwrap();
        let lifted: Vec<Poly> = c.affine().iter().map(|p| p.lift(&big).unwrap()).collect();
        let bad = sampling_bad_locus(&c).unwrap().lift(&small).unwrap();
        for t in small.elements().filter(|&t| !small.is_zero(bad.eval(t))) {
            let t = emb.apply(t);
            assert_eq!(incident_count(&c, &big, &lifted, t).unwrap(), brute_count(&c, &big, t));
        }
        let k5 = f(5);
        let tc = cubic(&k5);
        assert_eq!(tangency_sampled(&tc, 2, 10, 1).unwrap().generic_count, 0);
    }

    #[test]
    fn gauss_examples() {
        assert_eq!(gauss_degree(&thm1(3, 1)).unwrap(), (1, true));
        let k5 = f(5);
        let c = ParamCurve::from_affine(vec![
            Poly::one(&k5),
            Poly::x(&k5),
            Poly::from_terms(&k5, &[(5, 1)]),
            Poly::from_terms(&k5, &[(10, 1)]),
        ])
        .unwrap();
        let d = gauss_degree_detail(&c).unwrap();
        assert_eq!((d.degree, d.separable), (5, false));
        assert_eq!(d.gcd, BiPoly::u_minus_t(&k5).pow(5));
    }

    #[test]
    fn recovery_examples() {
        assert!(field_recovery_certificate(&thm1(3, 1)).is_some());
        assert!(field_recovery_certificate(&cubic(&f(3))).is_some());
        let k5 = f(5);
        let c = ParamCurve::from_affine(vec![
            Poly::one(&k5),
            Poly::x(&k5),
            Poly::from_terms(&k5, &[(5, 1)]),
            Poly::from_terms(&k5, &[(10, 1)]),
        ])
        .unwrap();
        assert!(field_recovery_certificate(&c).is_none());
    }

    #[test]
    fn line_is_degenerate() {
        let k = f(5);
        let c = ParamCurve::from_affine(vec![Poly::one(&k), Poly::x(&k), Poly::zero(&k)]).unwrap();
        assert_eq!(tangency_symbolic(&c).unwrap_err(), Error::DegenerateTangentSystem);
    }
}
