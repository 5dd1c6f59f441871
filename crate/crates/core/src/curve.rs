//! Rational curves `P^1 -> P^N` given by binary forms of a common degree.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::gcd_u64;
use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::field::{make_field, Elem, FieldSpec};
use crate::linalg::rank;
use crate::poly::{Poly, RatFunc};
use crate::proj::{pair_indices, ProjPoint};
use crate::sepgcd::SepSystem;

/// Named families the constructors produce; carried so a serialized curve
/// can be verified against the right automorphisms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Theorem1 { p: u64, q: u64, n: u32 },
    EstevesHomma { p: u64 },
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamCurve {
    field: FieldSpec,
    q_exponent: u32,
    affine: Vec<Poly>,
    degree: usize,
    family: Option<Family>,
}

/// A point `(s : t)` of `P^1`, stored as `(1 : t)` or `(0 : 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Affine(Elem),
    Infinity,
}

impl CurvePoint {
    pub fn new(k: &FieldSpec, s: Elem, t: Elem) -> Result<CurvePoint> {
        if k.is_zero(s) {
            if k.is_zero(t) {
                return Err(Error::ZeroPoint);
            }
            return Ok(CurvePoint::Infinity);
        }
        Ok(CurvePoint::Affine(k.div(t, s)))
    }
}

impl ParamCurve {
    /// Homogenize to the largest degree and remove common factors.
    pub fn from_affine(polys: Vec<Poly>) -> Result<ParamCurve> {
        let Some(first) = polys.first() else {
            return Err(Error::DegenerateInput("no coordinates".into()));
        };
        let k = first.field().clone();
        if polys.iter().any(|p| p.field() != &k) {
            return Err(Error::FieldMismatch);
        }
        if polys.iter().all(|p| p.is_zero()) {
            return Err(Error::DegenerateInput("all coordinates zero".into()));
        }
        let g = polys.iter().fold(Poly::zero(&k), |g, p| g.gcd(p));
        let affine: Vec<Poly> = polys.iter().map(|p| p.exact_div(&g).expect("gcd divides")).collect();
        let degree = affine.iter().filter_map(|p| p.degree()).max().unwrap();
        let rows: Vec<Vec<Elem>> = affine.iter().map(|p| coeff_row(p, degree)).collect();
        if rank(&k, &rows) < 2 {
            return Err(Error::DegenerateInput("coordinates are proportional".into()));
        }
        Ok(ParamCurve {
            q_exponent: k.m(),
            field: k,
            affine,
            degree,
            family: None,
        })
    }

    /// Declare the base field `F_q`, `q = p^e`; the coefficient field must be
    /// a subfield of it.
    pub fn with_q_exponent(mut self, e: u32) -> Result<ParamCurve> {
        if e == 0 || e % self.field.m() != 0 {
            return Err(Error::NotAnExtension {
                p: self.field.p(),
                source_m: self.field.m(),
                target_m: e,
            });
        }
        self.q_exponent = e;
        Ok(self)
    }

    pub fn with_family(mut self, family: Family) -> ParamCurve {
        self.family = Some(family);
        self
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn q_exponent(&self) -> u32 {
        self.q_exponent
    }

    pub fn q(&self) -> u64 {
        (self.field.p() as u64).pow(self.q_exponent)
    }

    /// Ambient dimension `N`.
    pub fn n(&self) -> usize {
        self.affine.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn affine(&self) -> &[Poly] {
        &self.affine
    }

    pub fn family(&self) -> Option<&Family> {
        self.family.as_ref()
    }

    /// Same curve with coefficients in an extension field.
    pub fn lift(&self, target: &FieldSpec) -> Result<ParamCurve> {
        let affine = self.affine.iter().map(|p| p.lift(target)).collect::<Result<Vec<_>>>()?;
        let (a, b) = (self.q_exponent as u64, target.m() as u64);
        Ok(ParamCurve {
            field: target.clone(),
            q_exponent: (a / gcd_u64(a, b) * b) as u32,
            affine,
            degree: self.degree,
            family: self.family.clone(),
        })
    }

    /// Coefficients of `t^d` across coordinates: the image of `(0:1)`.
    pub fn infinity_vector(&self) -> Vec<Elem> {
        self.affine.iter().map(|p| p.coeff(self.degree)).collect()
    }

    /// Affine lift `(f_0(t), ..., f_N(t))` at `t` in an extension field.
    pub fn eval_affine(&self, target: &FieldSpec, t: Elem) -> Result<Vec<Elem>> {
        self.affine.iter().map(|p| Ok(p.lift(target)?.eval(t))).collect()
    }

    /// Image of a parameter given over `target`, an extension of the
    /// coefficient field.
    pub fn eval(&self, target: &FieldSpec, pt: CurvePoint) -> Result<ProjPoint> {
        let v = match pt {
            CurvePoint::Affine(t) => self.eval_affine(target, t)?,
            CurvePoint::Infinity => {
                let emb = crate::embed::embedding(&self.field, target)?;
                self.infinity_vector().into_iter().map(|c| emb.apply(c)).collect()
            }
        };
        ProjPoint::new(target, v)
    }

    /// Form `i` at `(s : t)`: `sum_j c_j s^(d-j) t^j`.
    pub fn eval_form(&self, target: &FieldSpec, i: usize, s: Elem, t: Elem) -> Result<Elem> {
        let p = self.affine[i].lift(target)?;
        let k = target;
        let mut acc = k.zero();
        for j in 0..=self.degree {
            let c = p.coeff(j);
            if !k.is_zero(c) {
                acc = k.add(acc, k.mul(c, k.mul(k.pow(s, (self.degree - j) as u64), k.pow(t, j as u64))));
            }
        }
        Ok(acc)
    }

    pub fn derivative_polys(&self) -> Vec<Poly> {
        self.affine.iter().map(|p| p.derivative()).collect()
    }

    pub fn derivative_vector(&self) -> Vec<RatFunc> {
        self.derivative_polys().into_iter().map(RatFunc::from_poly).collect()
    }

    /// Forms linearly independent over the coefficient field.
    pub fn nondegenerate(&self) -> bool {
        let rows: Vec<Vec<Elem>> = self.affine.iter().map(|p| coeff_row(p, self.degree)).collect();
        rank(&self.field, &rows) == self.affine.len()
    }

    /// Raw Plücker polynomials `f_i f_j' - f_j f_i'`, `i < j`.
    pub fn plucker_polys(&self) -> Vec<Poly> {
        let d = self.derivative_polys();
        pair_indices(self.affine.len())
            .into_iter()
            .map(|(i, j)| self.affine[i].mul(&d[j]).sub(&self.affine[j].mul(&d[i])))
            .collect()
    }

    /// Monic gcd of the Plücker polynomials; its roots are the ramified
    /// affine parameters.
    pub fn ramification_poly(&self) -> Poly {
        self.plucker_polys().iter().fold(Poly::zero(&self.field), |g, p| g.gcd(p))
    }

    /// Gcd over `F_q(t)` of `f_i(u) f_j(t) - f_j(u) f_i(t)`.
    pub fn coincidence_gcd(&self) -> Result<BiPoly> {
        let mut sys = SepSystem::new(&self.field, self.affine.clone());
        for (i, j) in pair_indices(self.affine.len()) {
            sys.push(vec![(self.affine[j].clone(), i), (self.affine[i].neg(), j)]);
        }
        sys.gcd()
    }

    /// Indices of two coordinates of degree at most 1 spanning `<1, t>`.
    pub fn moebius_pair(&self) -> Option<(usize, usize)> {
        let k = &self.field;
        pair_indices(self.affine.len()).into_iter().find(|&(i, j)| {
            let (a, b) = (&self.affine[i], &self.affine[j]);
            a.deg() <= 1 && b.deg() <= 1 && {
                let det = k.sub(k.mul(a.coeff(0), b.coeff(1)), k.mul(a.coeff(1), b.coeff(0)));
                !k.is_zero(det)
            }
        })
    }

    pub fn injectivity_unramified(&self) -> EmbeddingReport {
        let k = &self.field;
        let gcd = self.coincidence_gcd();
        let generic = matches!(&gcd, Ok(g) if *g == BiPoly::u_minus_t(k));
        let v = self.infinity_vector();
        let at_infinity = pair_indices(self.affine.len())
            .into_iter()
            .map(|(i, j)| self.affine[i].scale(v[j]).sub(&self.affine[j].scale(v[i])))
            .fold(Poly::zero(k), |g, p| g.gcd(&p));
        let infinity_separate = at_infinity.is_constant() && !at_infinity.is_zero();
        let (isolated, cert) = match self.moebius_pair() {
            Some((i, j)) => (true, InjectivityCertificate::MoebiusPair { i, j }),
            None if generic => {
                let (ok, ext_deg, samples) = self.sampled_collisions();
                (ok, InjectivityCertificate::Sampled { ext_deg, samples })
            }
            None => (false, InjectivityCertificate::None),
        };
        let injective = generic && infinity_separate && isolated;
        let ram = self.ramification_poly();
        let unramified_affine = ram.is_constant() && !ram.is_zero();
        let d = self.degree;
        let sub: Vec<Elem> = self.affine.iter().map(|p| if d == 0 { k.zero() } else { p.coeff(d - 1) }).collect();
        let unramified_infinity = rank(k, &[v, sub]) == 2;
        let unramified = unramified_affine && unramified_infinity;
        EmbeddingReport {
            injective,
            unramified,
            embedding: injective && unramified,
            coincidence_gcd: match gcd {
                Ok(g) => g.to_string(),
                Err(e) => e.to_string(),
            },
            infinity_separate,
            certificate: cert,
            ramification_poly: ram.to_string(),
            unramified_at_infinity: unramified_infinity,
        }
    }

    /// Search for two parameters with the same image over an extension.
    /// Returns (no collision found, extension degree, parameters tried).
    pub fn sampled_collisions(&self) -> (bool, u32, usize) {
        let k = &self.field;
        let p = k.p() as u64;
        let mut m = self.q_exponent;
        while (p as f64).powi(m as i32) < 500.0 && m < 6 * self.q_exponent {
            m += self.q_exponent;
        }
        let Ok(ext) = make_field(p, m) else {
            return (true, m, 0);
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0xc011);
        let budget = 2000usize.min(ext.size() as usize);
        let params: Vec<CurvePoint> = if ext.size() as usize <= budget {
            ext.elements().map(CurvePoint::Affine).collect()
        } else {
            let mut seen = HashSet::new();
            while seen.len() < budget {
                seen.insert(ext.random(&mut rng));
            }
            seen.into_iter().map(CurvePoint::Affine).collect()
        };
        let mut images = HashSet::new();
        let mut ok = images.insert(self.eval(&ext, CurvePoint::Infinity).expect("no base points"));
        for &pt in &params {
            ok &= images.insert(self.eval(&ext, pt).expect("no base points"));
        }
        (ok, m, params.len() + 1)
    }
}

fn coeff_row(p: &Poly, d: usize) -> Vec<Elem> {
    (0..=d).map(|j| p.coeff(j)).collect()
}

/// How isolated double points were excluded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InjectivityCertificate {
    /// Two coordinates form a degree-1 map to `P^1`.
    MoebiusPair { i: usize, j: usize },
    /// No symbolic certificate; no collision among sampled parameters.
    Sampled { ext_deg: u32, samples: usize },
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub injective: bool,
    pub unramified: bool,
    pub embedding: bool,
    pub coincidence_gcd: String,
    pub infinity_separate: bool,
    pub certificate: InjectivityCertificate,
    pub ramification_poly: String,
    pub unramified_at_infinity: bool,
}
