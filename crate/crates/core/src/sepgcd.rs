//! Gcds over `F_q(t)` of families of the shape `sum_k a_k(t) * b_k(u)`.
//!
//! The `b_k` are shared across the family (coordinates of a curve, Plücker
//! functions, monomials), which keeps specialization at `t = t0` cheap. The
//! gcd is found by specializing at random points of an extension field,
//! interpolating the normalized images, and then certified: the candidate
//! must divide every input exactly, and its `u`-degree must equal a
//! specialized gcd degree taken where some input keeps its leading
//! coefficient. If interpolation does not settle, the subresultant sequence
//! on the expanded inputs is used instead.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bipoly::{gcd_over_ratfield, BiPoly};
use crate::embed::descend;
use crate::error::{Error, Result};
use crate::field::{make_field, Elem, FieldSpec};
use crate::poly::Poly;

const SEED: u64 = 0x5e9_9cd;

/// One member of a [`SepSystem`]: pairs (a(t), index of b(u)).
pub type SepInput = Vec<(Poly, usize)>;

#[derive(Clone, Debug)]
pub struct SepSystem {
    field: FieldSpec,
    us: Vec<Poly>,
    inputs: Vec<SepInput>,
}

impl SepSystem {
    pub fn new(field: &FieldSpec, us: Vec<Poly>) -> SepSystem {
        SepSystem {
            field: field.clone(),
            us,
            inputs: Vec::new(),
        }
    }

    /// Each polynomial becomes `sum_j F_j(t) u^j` over shared monomials.
    pub fn from_bipolys(field: &FieldSpec, fs: &[BiPoly]) -> SepSystem {
        let du = fs.iter().filter_map(|f| f.degree_u()).max().unwrap_or(0);
        let us = (0..=du).map(|j| Poly::monomial(field, field.one(), j)).collect();
        let mut s = SepSystem::new(field, us);
        for f in fs {
            s.push(f.coeffs().iter().cloned().enumerate().map(|(j, c)| (c, j)).collect());
        }
        s
    }

    pub fn push(&mut self, terms: SepInput) {
        let terms: SepInput = terms
            .into_iter()
            .filter(|(a, i)| !a.is_zero() && !self.us[*i].is_zero())
            .collect();
        self.inputs.push(terms);
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    /// Coefficient of `u^j` in input `i`.
    pub fn coeff_u(&self, i: usize, j: usize) -> Poly {
        let k = &self.field;
        let mut acc = Poly::zero(k);
        for (a, idx) in &self.inputs[i] {
            let c = self.us[*idx].coeff(j);
            if !k.is_zero(c) {
                acc = acc.add(&a.scale(c));
            }
        }
        acc
    }

    /// `u`-degree and leading coefficient of input `i`, `None` if it is zero.
    pub fn lead(&self, i: usize) -> Option<(usize, Poly)> {
        let top = self.inputs[i].iter().filter_map(|(_, idx)| self.us[*idx].degree()).max()?;
        (0..=top).rev().find_map(|j| {
            let c = self.coeff_u(i, j);
            (!c.is_zero()).then_some((j, c))
        })
    }

    pub fn degree_t(&self, i: usize) -> usize {
        self.inputs[i].iter().filter_map(|(a, _)| a.degree()).max().unwrap_or(0)
    }

    pub fn expand(&self, i: usize) -> BiPoly {
        let terms: Vec<(&Poly, &Poly)> = self.inputs[i].iter().map(|(a, idx)| (a, &self.us[*idx])).collect();
        BiPoly::sum_of_products(&self.field, &terms)
    }

    /// True when `g` (positive `u`-degree) divides every input over `F_q(t)`.
    pub fn divides_all(&self, g: &BiPoly) -> bool {
        let Some(dg) = g.degree_u() else {
            return false;
        };
        if dg == 0 {
            return true;
        }
        let k = &self.field;
        let mut used: Vec<usize> = self.inputs.iter().flatten().map(|(_, i)| *i).collect();
        used.sort_unstable();
        used.dedup();
        let delta = |i: usize| self.us[i].degree().map_or(0, |d| (d + 1).saturating_sub(dg));
        let big = used.iter().map(|&i| delta(i)).max().unwrap_or(0);
        let lc = g.lc();
        let mut rems: Vec<Option<BiPoly>> = vec![None; self.us.len()];
        for &i in &used {
            let r = BiPoly::from_u(&self.us[i]).prem(g);
            let fix = big - delta(i);
            rems[i] = Some(if fix == 0 || lc.is_one() { r } else { r.scale_t(&lc.pow(fix as u64)) });
        }
        self.inputs.iter().all(|inp| {
            let mut acc = BiPoly::zero(k);
            for (a, idx) in inp {
                acc = acc.add(&rems[*idx].as_ref().unwrap().scale_t(a));
            }
            acc.is_zero()
        })
    }

    /// Certified primitive gcd over `F_q(t)` of all inputs. Zero inputs are
    /// ignored; a nonzero input constant in `u` gives 1, provided some input
    /// has positive `u`-degree.
    pub fn gcd(&self) -> Result<BiPoly> {
        let k = &self.field;
        let mut live = Vec::new();
        let mut saw_constant = false;
        for i in 0..self.inputs.len() {
            if let Some((d, lc)) = self.lead(i) {
                if d == 0 {
                    saw_constant = true;
                } else {
                    live.push((i, d, lc));
                }
            }
        }
        if live.is_empty() {
            return Err(Error::AllConstantInU);
        }
        if saw_constant {
            return Ok(BiPoly::one(k));
        }
        live.sort_by_key(|&(i, d, _)| (d, self.degree_t(i)));
        let gamma = live.iter().fold(Poly::zero(k), |g, (_, _, lc)| g.gcd(lc));
        let min_dt = live.iter().map(|&(i, _, _)| self.degree_t(i)).min().unwrap();
        let bound = gamma.degree().unwrap() + min_dt;
        match self.modular_gcd(&live, &gamma, bound) {
            Some(g) => Ok(g),
            None => {
                let fs: Vec<BiPoly> = live.iter().map(|&(i, _, _)| self.expand(i)).collect();
                gcd_over_ratfield(&fs)
            }
        }
    }

    fn modular_gcd(&self, live: &[(usize, usize, Poly)], gamma: &Poly, bound: usize) -> Option<BiPoly> {
        let k = &self.field;
        let ext = eval_field(k, 8 * (bound + 4))?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let us: Vec<Poly> = self.us.iter().map(|b| b.lift(&ext).unwrap()).collect();
        let inputs: Vec<Vec<(Poly, usize)>> = live
            .iter()
            .map(|&(i, _, _)| self.inputs[i].iter().map(|(a, idx)| (a.lift(&ext).unwrap(), *idx)).collect())
            .collect();
        let gamma_e = gamma.lift(&ext).ok()?;
        let lc0 = live[0].2.lift(&ext).ok()?;

        let specialize = |t0: Elem, weights: &[Elem]| -> Poly {
            let mut per_b = vec![ext.zero(); us.len()];
            for (inp, &w) in inputs.iter().zip(weights) {
                for (a, idx) in inp {
                    per_b[*idx] = ext.add(per_b[*idx], ext.mul(w, a.eval(t0)));
                }
            }
            let mut acc = Poly::zero(&ext);
            for (b, c) in us.iter().zip(per_b) {
                if !ext.is_zero(c) {
                    acc = acc.add(&b.scale(c));
                }
            }
            acc
        };

        let mut target_deg = usize::MAX;
        let mut nodes: Vec<Elem> = Vec::new();
        let mut newton: Vec<Vec<Elem>> = Vec::new();
        let mut stable = 0usize;
        let max_tries = 4 * (bound + 4) + 32;
        for _ in 0..max_tries {
            let t0 = ext.random(&mut rng);
            if ext.is_zero(gamma_e.eval(t0)) || ext.is_zero(lc0.eval(t0)) || nodes.contains(&t0) {
                continue;
            }
            let g0 = if inputs.len() == 1 {
                specialize(t0, &[ext.one()])
            } else {
                let w1: Vec<Elem> = (0..inputs.len()).map(|_| ext.random(&mut rng)).collect();
                let w2: Vec<Elem> = (0..inputs.len()).map(|_| ext.random(&mut rng)).collect();
                let mut first = vec![ext.zero(); inputs.len()];
                first[0] = ext.one();
                specialize(t0, &first).gcd(&specialize(t0, &w1)).gcd(&specialize(t0, &w2))
            };
            let d = g0.degree()?;
            if d == 0 {
                return Some(BiPoly::one(k));
            }
            if d > target_deg {
                continue;
            }
            if d < target_deg {
                target_deg = d;
                nodes.clear();
                newton = vec![Vec::new(); d + 1];
                stable = 0;
            }
            let scale = gamma_e.eval(t0);
            let image: Vec<Elem> = (0..=d).map(|j| ext.mul(scale, g0.coeff(j))).collect();
            let mut all_zero = true;
            for (col, &y) in newton.iter_mut().zip(&image) {
                let c = newton_extend(&ext, &nodes, col, t0, y);
                all_zero &= ext.is_zero(c);
            }
            nodes.push(t0);
            stable = if all_zero { stable + 1 } else { 0 };
            if stable >= 2 || nodes.len() > bound + 1 {
                if let Some(g) = self.assemble(&ext, &nodes, &newton) {
                    if g.degree_u() == Some(target_deg) && self.divides_all(&g) {
                        return Some(g);
                    }
                }
                if nodes.len() > bound + 1 {
                    return None;
                }
            }
        }
        None
    }

    fn assemble(&self, ext: &FieldSpec, nodes: &[Elem], newton: &[Vec<Elem>]) -> Option<BiPoly> {
        let k = &self.field;
        let mut cols = Vec::with_capacity(newton.len());
        for col in newton {
            let p = newton_to_poly(ext, nodes, col);
            let mut down = Vec::with_capacity(p.coeffs().len());
            for &c in p.coeffs() {
                down.push(descend(k, ext, c).ok()??);
            }
            cols.push(Poly::new(k, down));
        }
        Some(BiPoly::new(k, cols).primitive_part())
    }
}

/// Smallest extension of `k` with at least `need` elements (never `k`'s
/// proper subfield), preferring table-backed sizes.
fn eval_field(k: &FieldSpec, need: usize) -> Option<FieldSpec> {
    let need = need.max(1024) as u64;
    let p = k.p() as u64;
    let mut m = k.m();
    while (p as f64).powi(m as i32) < need as f64 {
        m += k.m();
    }
    make_field(p, m).ok()
}

/// Add node `x` with value `y` to a Newton interpolant; returns the new
/// top coefficient.
fn newton_extend(k: &FieldSpec, nodes: &[Elem], col: &mut Vec<Elem>, x: Elem, y: Elem) -> Elem {
    let mut val = k.zero();
    let mut w = k.one();
    for (c, &xi) in col.iter().zip(nodes) {
        val = k.add(val, k.mul(*c, w));
        w = k.mul(w, k.sub(x, xi));
    }
    let c = k.div(k.sub(y, val), w);
    col.push(c);
    c
}

fn newton_to_poly(k: &FieldSpec, nodes: &[Elem], col: &[Elem]) -> Poly {
    let mut acc = Poly::zero(k);
    for i in (0..col.len()).rev() {
        acc = acc.mul(&Poly::new(k, vec![k.neg(nodes[i]), k.one()])).add(&Poly::constant(k, col[i]));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ut(k: &FieldSpec, c: i64) -> BiPoly {
        BiPoly::u_minus_t_minus(k, k.from_i64(c))
    }

    #[test]
    fn separated_examples() {
        let k = make_field(3, 1).unwrap();
        let a = ut(&k, 0);
        let b = ut(&k, 0).mul(&ut(&k, 1));
        let s = SepSystem::from_bipolys(&k, &[a.clone(), b]);
        assert_eq!(s.gcd().unwrap(), a);

        // f_i(u) f_j(t) - f_j(u) f_i(t) for [1, t^2] over F_5: gcd (u-t)(u+t).
        let k5 = make_field(5, 1).unwrap();
        let us = vec![Poly::one(&k5), Poly::from_terms(&k5, &[(2, 1)])];
        let mut s = SepSystem::new(&k5, us.clone());
        s.push(vec![(us[1].clone(), 0), (us[0].neg(), 1)]);
        let want = ut(&k5, 0).mul(&BiPoly::new(&k5, vec![Poly::x(&k5), Poly::one(&k5)]));
        assert_eq!(s.gcd().unwrap(), want);
        assert!(s.divides_all(&want));
        assert!(!s.divides_all(&ut(&k5, 1)));
    }

    #[test]
    fn nonconstant_lead() {
        let k = make_field(5, 1).unwrap();
        let t = Poly::x(&k);
        let common = BiPoly::new(&k, vec![Poly::from_i64s(&k, &[-1]), t.clone()]);
        let a = common.mul(&BiPoly::new(&k, vec![Poly::from_terms(&k, &[(2, 1)]), Poly::one(&k)]));
        let b = common.mul(&BiPoly::new(&k, vec![Poly::from_i64s(&k, &[3]), t]));
        assert_eq!(SepSystem::from_bipolys(&k, &[a, b]).gcd().unwrap(), common);
    }

    #[test]
    fn non_prime_coefficients() {
        let k = make_field(3, 2).unwrap();
        let g = k.primitive_element();
        let f = ut(&k, 0).mul(&BiPoly::u_minus_t_minus(&k, g));
        let h = BiPoly::u_minus_t_minus(&k, g).mul(&BiPoly::from_u(&Poly::new(&k, vec![g, k.one(), k.one()])));
        let s = SepSystem::from_bipolys(&k, &[f, h]);
        assert_eq!(s.gcd().unwrap(), BiPoly::u_minus_t_minus(&k, g));
    }

    fn arb() -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-2i64..3, 0..4), 1..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn agrees_with_subresultant(c in arb(), x in arb(), y in arb(), z in arb()) {
            let k = make_field(5, 1).unwrap();
            let mk = |v: &Vec<Vec<i64>>| BiPoly::new(&k, v.iter().map(|c| Poly::from_i64s(&k, c)).collect());
            let common = mk(&c);
            let fs = vec![common.mul(&mk(&x)), common.mul(&mk(&y)), common.mul(&mk(&z))];
            let want = gcd_over_ratfield(&fs);
            let got = SepSystem::from_bipolys(&k, &fs).gcd();
            prop_assert_eq!(got, want);
        }
    }
}
