//! Automorphisms of the parameter line, the spaces `V_{σ,x}` and the
//! non-classicality test.

use serde::Serialize;

use crate::curve::ParamCurve;
use crate::embed::embedding;
use crate::error::{Error, Result};
use crate::field::{make_field, Elem, FieldElem, FieldSpec};
use crate::poly::{Poly, RatFunc};
use crate::proj::pair_pos;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AutKind {
    Translation(Elem),
    Affine { a: Elem, b: Elem },
    Moebius { a: Elem, b: Elem, c: Elem, d: Elem },
}

/// An automorphism `t ↦ (a t + b) / (c t + d)` of `P^1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    field: FieldSpec,
    kind: AutKind,
}

impl Automorphism {
    pub fn translation(alpha: &FieldElem) -> Automorphism {
        Automorphism {
            field: alpha.field().clone(),
            kind: AutKind::Translation(alpha.value()),
        }
    }

    pub fn affine(a: &FieldElem, b: &FieldElem) -> Result<Automorphism> {
        if a.field() != b.field() {
            return Err(Error::FieldMismatch);
        }
        if a.is_zero() {
            return Err(Error::DegenerateInput("affine map needs a != 0".into()));
        }
        Ok(Automorphism {
            field: a.field().clone(),
            kind: AutKind::Affine { a: a.value(), b: b.value() },
        })
    }

    pub fn moebius(a: &FieldElem, b: &FieldElem, c: &FieldElem, d: &FieldElem) -> Result<Automorphism> {
        let k = a.field();
        if [b, c, d].iter().any(|x| x.field() != k) {
            return Err(Error::FieldMismatch);
        }
        let (a, b, c, d) = (a.value(), b.value(), c.value(), d.value());
        if k.is_zero(k.sub(k.mul(a, d), k.mul(b, c))) {
            return Err(Error::DegenerateInput("moebius map needs ad - bc != 0".into()));
        }
        Ok(Automorphism {
            field: k.clone(),
            kind: AutKind::Moebius { a, b, c, d },
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn kind(&self) -> AutKind {
        self.kind
    }

    /// `(a, b, c, d)` with `σ(t) = (a t + b) / (c t + d)`.
    pub fn matrix(&self) -> [Elem; 4] {
        let k = &self.field;
        match self.kind {
            AutKind::Translation(al) => [k.one(), al, k.zero(), k.one()],
            AutKind::Affine { a, b } => [a, b, k.zero(), k.one()],
            AutKind::Moebius { a, b, c, d } => [a, b, c, d],
        }
    }

    fn is_affine(&self) -> bool {
        self.field.is_zero(self.matrix()[2])
    }

    pub fn is_identity(&self) -> bool {
        let k = &self.field;
        let [a, b, c, d] = self.matrix();
        k.is_zero(b) && k.is_zero(c) && a == d
    }

    /// The same map over an extension field.
    pub fn lift(&self, target: &FieldSpec) -> Result<Automorphism> {
        let emb = embedding(&self.field, target)?;
        let kind = match self.kind {
            AutKind::Translation(a) => AutKind::Translation(emb.apply(a)),
            AutKind::Affine { a, b } => AutKind::Affine { a: emb.apply(a), b: emb.apply(b) },
            AutKind::Moebius { a, b, c, d } => AutKind::Moebius {
                a: emb.apply(a),
                b: emb.apply(b),
                c: emb.apply(c),
                d: emb.apply(d),
            },
        };
        Ok(Automorphism { field: target.clone(), kind })
    }

    /// Image of a point of the affine line; `None` at the pole.
    pub fn apply_elem(&self, t: Elem) -> Option<Elem> {
        let k = &self.field;
        let [a, b, c, d] = self.matrix();
        let den = k.add(k.mul(c, t), d);
        if k.is_zero(den) {
            None
        } else {
            Some(k.div(k.add(k.mul(a, t), b), den))
        }
    }

    /// Pullback `σ*g = g ∘ σ`, over the common field of `g` and `σ`.
    pub fn pullback(&self, g: &RatFunc) -> Result<RatFunc> {
        let (g, s) = common_field(g, self)?;
        let [a, b, c, d] = s.matrix();
        if s.is_affine() {
            let num = g.num().subst_affine(a, b);
            let den = g.den().subst_affine(a, b);
            RatFunc::new(num, den)
        } else {
            Ok(g.compose_moebius(a, b, c, d))
        }
    }

    /// `σ ∘ τ`.
    pub fn then(&self, tau: &Automorphism) -> Result<Automorphism> {
        if self.field != tau.field {
            return Err(Error::FieldMismatch);
        }
        let k = &self.field;
        let [a, b, c, d] = self.matrix();
        let [e, f, g, h] = tau.matrix();
        let m = [
            k.add(k.mul(a, e), k.mul(b, g)),
            k.add(k.mul(a, f), k.mul(b, h)),
            k.add(k.mul(c, e), k.mul(d, g)),
            k.add(k.mul(c, f), k.mul(d, h)),
        ];
        Ok(Automorphism {
            field: k.clone(),
            kind: AutKind::Moebius { a: m[0], b: m[1], c: m[2], d: m[3] },
        })
    }
}

/// Smallest field containing both `a` and `b`.
pub(crate) fn join_fields(a: &FieldSpec, b: &FieldSpec) -> Result<FieldSpec> {
    if a.p() != b.p() {
        return Err(Error::FieldMismatch);
    }
    if a == b {
        return Ok(a.clone());
    }
    let (ma, mb) = (a.m() as u64, b.m() as u64);
    let m = ma / crate::arith::gcd_u64(ma, mb) * mb;
    if m == ma {
        Ok(a.clone())
    } else if m == mb {
        Ok(b.clone())
    } else {
        make_field(a.p() as u64, m as u32)
    }
}

fn common_field(g: &RatFunc, s: &Automorphism) -> Result<(RatFunc, Automorphism)> {
    let k = join_fields(g.field(), s.field())?;
    Ok((g.lift(&k)?, s.lift(&k)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VMembershipResult {
    pub member: bool,
    /// `σ*g − g − f·dg/dx` with `f = σ*x − x`.
    pub residual: RatFunc,
}

/// Decide `g ∈ V_{σ,x}`, i.e. `σ*g − g = f · dg/dx` with `f = σ*x − x`.
pub fn v_membership(g: &RatFunc, sigma: &Automorphism, x: &RatFunc) -> Result<VMembershipResult> {
    let k = join_fields(&join_fields(g.field(), x.field())?, sigma.field())?;
    let (g, x) = (g.lift(&k)?, x.lift(&k)?);
    let f = sigma.pullback(&x)?.sub(&x);
    if f.is_zero() {
        return Err(Error::ZeroF);
    }
    let dx = x.derivative();
    if dx.is_zero() {
        return Err(Error::NotLocalParameter);
    }
    let dg_dx = g.derivative().div(&dx)?;
    let residual = sigma.pullback(&g)?.sub(&g).sub(&f.mul(&dg_dx));
    Ok(VMembershipResult {
        member: residual.is_zero(),
        residual,
    })
}

/// `t² + β t^{p^n}` with `β = −α^{2 − p^n}`, the member of `V_{σ_α,t}`
/// built from `β α^{p^n} + α² = 0`.
pub fn witness_quadratic(alpha: &FieldElem, p: u64, n: u32) -> Result<Poly> {
    let k = alpha.field();
    if k.p() as u64 != p {
        return Err(Error::FieldMismatch);
    }
    if alpha.is_zero() {
        return Err(Error::ZeroAlpha);
    }
    let a = alpha.value();
    let e = p.checked_pow(n).ok_or_else(|| Error::DegenerateInput("p^n overflows".into()))?;
    // α^{2 − p^n} = α² / α^{p^n}
    let beta = k.neg(k.div(k.mul(a, a), k.pow(a, e)));
    let mut coeffs = vec![k.zero(); e as usize + 1];
    coeffs[2] = k.add(coeffs[2], k.one());
    coeffs[e as usize] = k.add(coeffs[e as usize], beta);
    Ok(Poly::new(k, coeffs))
}

/// `((t^p − α^{p−1} t)^p)^j` for `j = 1..=count`, p-th powers of a
/// σ-invariant function.
pub fn invariant_pth_powers(sigma: &Automorphism, count: usize) -> Result<Vec<RatFunc>> {
    let AutKind::Translation(alpha) = sigma.kind else {
        return Err(Error::UnsupportedKind);
    };
    let k = sigma.field();
    if k.is_zero(alpha) {
        return Err(Error::ZeroAlpha);
    }
    let p = k.p() as usize;
    let inv = Poly::new(k, {
        let mut v = vec![k.zero(); p + 1];
        v[p] = k.one();
        v[1] = k.neg(k.pow(alpha, p as u64 - 1));
        v
    });
    let base = inv.pow(p as u64);
    let mut out = Vec::with_capacity(count);
    let mut cur = Poly::one(k);
    for _ in 0..count {
        cur = cur.mul(&base);
        out.push(RatFunc::from_poly(cur.clone()));
    }
    Ok(out)
}

/// Least `m ≤ bound` with `σ^m = id`.
pub fn order_of(sigma: &Automorphism, bound: u64) -> Option<u64> {
    let mut cur = sigma.clone();
    for m in 1..=bound {
        if cur.is_identity() {
            return Some(m);
        }
        cur = cur.then(sigma).ok()?;
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonClassicalDetail {
    pub nonclassical: bool,
    /// First minor `(i, j, l)` that does not vanish, if any.
    pub witness_minor: Option<(usize, usize, usize)>,
}

/// Whether every 3x3 minor of `[φ(t); φ'(t); φ(σ(t))]` vanishes.
pub fn nonclassical_check(c: &ParamCurve, sigma: &Automorphism) -> Result<bool> {
    Ok(nonclassical_detail(c, sigma)?.nonclassical)
}

pub fn nonclassical_detail(c: &ParamCurve, sigma: &Automorphism) -> Result<NonClassicalDetail> {
    if sigma.is_identity() {
        return Err(Error::IdentityAutomorphism);
    }
    let k = join_fields(c.field(), sigma.field())?;
    let c = c.lift(&k)?;
    let s = sigma.lift(&k)?;
    let [a, b, cc, d] = s.matrix();
    let n = c.affine().len();
    let deg = c.degree();
    // φ(σ t) cleared of the denominator (c t + d)^deg.
    let moved: Vec<Poly> = if s.is_affine() {
        c.affine().iter().map(|f| f.subst_affine(a, b)).collect()
    } else {
        let top = Poly::new(&k, vec![b, a]);
        let bot = Poly::new(&k, vec![d, cc]);
        c.affine()
            .iter()
            .map(|f| {
                f.terms().fold(Poly::zero(&k), |acc, (e, coef)| {
                    acc.add(&top.pow(e as u64).mul(&bot.pow((deg - e) as u64)).scale(coef))
                })
            })
            .collect()
    };
    let omega = c.plucker_polys();
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                let m = omega[pair_pos(n, i, j)]
                    .mul(&moved[l])
                    .sub(&omega[pair_pos(n, i, l)].mul(&moved[j]))
                    .add(&omega[pair_pos(n, j, l)].mul(&moved[i]));
                if !m.is_zero() {
                    return Ok(NonClassicalDetail {
                        nonclassical: false,
                        witness_minor: Some((i, j, l)),
                    });
                }
            }
        }
    }
    Ok(NonClassicalDetail {
        nonclassical: true,
        witness_minor: None,
    })
}
