//! Polynomials in `u` with coefficients in `F_q[t]`, and gcds over the
//! rational function field `F_q(t)`.
//!
//! The gcd uses the subresultant remainder sequence, so every intermediate
//! stays in `F_q[t][u]`; content is removed only at the end.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::poly::Poly;

/// `sum_i coeffs[i](t) * u^i`, canonical (no trailing zero coefficients).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiPoly {
    field: FieldSpec,
    coeffs: Vec<Poly>,
}

impl BiPoly {
    pub fn new(field: &FieldSpec, mut coeffs: Vec<Poly>) -> BiPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BiPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &FieldSpec) -> BiPoly {
        BiPoly::new(field, Vec::new())
    }

    pub fn one(field: &FieldSpec) -> BiPoly {
        BiPoly::from_t(Poly::one(field))
    }

    /// A polynomial in `t` alone.
    pub fn from_t(p: Poly) -> BiPoly {
        let k = p.field().clone();
        BiPoly::new(&k, vec![p])
    }

    /// A polynomial in `u` alone.
    pub fn from_u(p: &Poly) -> BiPoly {
        let k = p.field();
        BiPoly::new(k, p.coeffs().iter().map(|&c| Poly::constant(k, c)).collect())
    }

    /// `u - t - c`.
    pub fn u_minus_t_minus(field: &FieldSpec, c: Elem) -> BiPoly {
        let k = field;
        BiPoly::new(k, vec![Poly::new(k, vec![k.neg(c), k.neg(k.one())]), Poly::one(k)])
    }

    /// `u - t`.
    pub fn u_minus_t(field: &FieldSpec) -> BiPoly {
        BiPoly::u_minus_t_minus(field, field.zero())
    }

    /// `sum_k a_k(t) * b_k(u)`.
    pub fn sum_of_products(field: &FieldSpec, terms: &[(&Poly, &Poly)]) -> BiPoly {
        let k = field;
        let du = terms.iter().map(|(_, b)| b.coeffs().len()).max().unwrap_or(0);
        let dt = terms.iter().map(|(a, _)| a.coeffs().len()).max().unwrap_or(0);
        let mut rows = vec![vec![k.zero(); dt]; du];
        for (a, b) in terms {
            for (e, c) in b.terms() {
                let row = &mut rows[e];
                for (i, &x) in a.coeffs().iter().enumerate() {
                    if !k.is_zero(x) {
                        row[i] = k.add(row[i], k.mul(c, x));
                    }
                }
            }
        }
        BiPoly::new(k, rows.into_iter().map(|r| Poly::new(k, r)).collect())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Poly {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Poly::zero(&self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `u`; `None` for zero.
    pub fn degree_u(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn degree_t(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(|c| c.degree()).max()
    }

    /// Leading coefficient in `u`.
    pub fn lc(&self) -> Poly {
        self.coeffs.last().cloned().unwrap_or_else(|| Poly::zero(&self.field))
    }

    /// Number of stored field coefficients; a rough cost measure.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().map(|c| c.coeffs().len()).sum()
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        BiPoly::new(&self.field, v)
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly::new(&self.field, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() || other.is_zero() {
            return BiPoly::zero(&self.field);
        }
        let mut v = vec![Poly::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] = v[i + j].add(&a.mul(b));
                }
            }
        }
        BiPoly::new(&self.field, v)
    }

    /// Multiply every coefficient by a polynomial in `t`.
    pub fn scale_t(&self, c: &Poly) -> BiPoly {
        BiPoly::new(&self.field, self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn pow(&self, mut e: u64) -> BiPoly {
        let mut acc = BiPoly::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Monic gcd of the `t`-coefficients.
    pub fn content(&self) -> Poly {
        let mut g = Poly::zero(&self.field);
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide out the content and scale so the leading coefficient of the
    /// leading `t`-polynomial is 1.
    pub fn primitive_part(&self) -> BiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        let v: Vec<Poly> = if c.is_one() {
            self.coeffs.clone()
        } else {
            self.coeffs.iter().map(|x| x.exact_div(&c).expect("content divides")).collect()
        };
        let lead = v.last().unwrap().lc();
        let inv = self.field.inv(lead);
        BiPoly::new(&self.field, v.into_iter().map(|x| x.scale(inv)).collect())
    }

    /// Pseudo-division: returns (q, r) with `lc(d)^(deg self - deg d + 1) * self = q*d + r`.
    pub fn pseudo_div_rem(&self, d: &BiPoly) -> (BiPoly, BiPoly) {
        let k = &self.field;
        let dd = d.degree_u().expect("pseudo-division by zero");
        let Some(ds) = self.degree_u() else {
            return (BiPoly::zero(k), BiPoly::zero(k));
        };
        if ds < dd {
            return (BiPoly::zero(k), self.clone());
        }
        let delta = ds - dd + 1;
        let lc = d.lc();
        if lc.is_constant() {
            // Unit leading coefficient: ordinary division, scaled at the end.
            let c = lc.coeff(0);
            let inv = k.inv(c);
            let mut r = self.coeffs.clone();
            let mut q = vec![Poly::zero(k); ds - dd + 1];
            for i in (0..=ds - dd).rev() {
                let top = std::mem::replace(&mut r[i + dd], Poly::zero(k));
                if top.is_zero() {
                    continue;
                }
                let f = top.scale(inv);
                for (j, dj) in d.coeffs[..dd].iter().enumerate() {
                    if !dj.is_zero() {
                        r[i + j] = r[i + j].sub(&f.mul(dj));
                    }
                }
                q[i] = f;
            }
            r.truncate(dd);
            let s = k.pow(c, delta as u64);
            let q = BiPoly::new(k, q.into_iter().map(|x| x.scale(s)).collect());
            let r = BiPoly::new(k, r.into_iter().map(|x| x.scale(s)).collect());
            return (q, r);
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![Poly::zero(k); ds - dd + 1];
        let mut steps = 0usize;
        for i in (0..=ds - dd).rev() {
            let top = std::mem::replace(&mut r[i + dd], Poly::zero(k));
            for x in r.iter_mut().take(i + dd) {
                if !x.is_zero() {
                    *x = x.mul(&lc);
                }
            }
            for x in q.iter_mut() {
                if !x.is_zero() {
                    *x = x.mul(&lc);
                }
            }
            steps += 1;
            if top.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs[..dd].iter().enumerate() {
                if !dj.is_zero() {
                    r[i + j] = r[i + j].sub(&top.mul(dj));
                }
            }
            q[i] = top;
        }
        debug_assert_eq!(steps, delta);
        r.truncate(dd);
        (BiPoly::new(k, q), BiPoly::new(k, r))
    }

    pub fn prem(&self, d: &BiPoly) -> BiPoly {
        self.pseudo_div_rem(d).1
    }

    /// Quotient over `F_q(t)` of primitive polynomials, returned primitive;
    /// `None` unless `d` divides `self` over `F_q(t)`.
    pub fn div_over_ratfield(&self, d: &BiPoly) -> Option<BiPoly> {
        let (q, r) = self.pseudo_div_rem(d);
        r.is_zero().then(|| q.primitive_part())
    }

    /// Divide by `u - t - c` (monic in `u`): quotient and the remainder `self(t + c, t)`.
    pub fn div_u_minus_t_minus(&self, c: Elem) -> (BiPoly, Poly) {
        let k = &self.field;
        let root = Poly::new(k, vec![c, k.one()]);
        let Some(n) = self.degree_u() else {
            return (BiPoly::zero(k), Poly::zero(k));
        };
        let mut q = vec![Poly::zero(k); n];
        let mut acc = self.coeffs[n].clone();
        for i in (0..n).rev() {
            q[i] = acc.clone();
            acc = self.coeffs[i].add(&acc.mul(&root));
        }
        (BiPoly::new(k, q), acc)
    }

    /// `self(u = t + c)` as a polynomial in `t`.
    pub fn eval_u_at_t_plus(&self, c: Elem) -> Poly {
        self.div_u_minus_t_minus(c).1
    }

    pub fn derivative_u(&self) -> BiPoly {
        let k = &self.field;
        if self.coeffs.len() <= 1 {
            return BiPoly::zero(k);
        }
        BiPoly::new(
            k,
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.scale(k.from_i64((i + 1) as i64)))
                .collect(),
        )
    }

    /// `S` with `self = S(u^p)`, when every `u`-exponent is divisible by `p`.
    pub fn deflate_u(&self) -> Option<BiPoly> {
        let p = self.field.p() as usize;
        if self.coeffs.iter().enumerate().any(|(i, c)| i % p != 0 && !c.is_zero()) {
            return None;
        }
        Some(BiPoly::new(&self.field, self.coeffs.iter().step_by(p).cloned().collect()))
    }

    /// Substitute `t = t0` (coefficients lifted to the field of `t0`).
    pub fn eval_t(&self, target: &FieldSpec, t0: Elem) -> Result<Poly> {
        let v = self
            .coeffs
            .iter()
            .map(|c| Ok(c.lift(target)?.eval(t0)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(target, v))
    }

    /// Number of distinct roots in `u` over an algebraic closure of `F_q(t)`.
    ///
    /// Splits off the factors with nonzero derivative and multiplicity prime
    /// to `p`; what remains is a polynomial in `u^p` and is deflated.
    pub fn distinct_root_count(&self) -> usize {
        let Some(d) = self.degree_u() else {
            panic!("root count of the zero polynomial");
        };
        if d == 0 {
            return 0;
        }
        let r = self.primitive_part();
        let dr = r.derivative_u();
        if dr.is_zero() {
            return r.deflate_u().expect("zero derivative").distinct_root_count();
        }
        let c = subresultant_gcd(&r, &dr);
        let w = r.div_over_ratfield(&c).expect("gcd divides");
        let mut z = c;
        loop {
            let h = subresultant_gcd(&z, &w);
            if h.degree_u() == Some(0) {
                break;
            }
            z = z.div_over_ratfield(&h).expect("gcd divides");
        }
        w.degree_u().unwrap() + z.distinct_root_count()
    }

    /// Multiplicity pattern over an algebraic closure of `F_q(t)`: pairs
    /// (multiplicity, number of distinct roots with that multiplicity).
    pub fn root_multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out = std::collections::BTreeMap::new();
        if self.degree_u().is_some_and(|d| d > 0) {
            sqf_into(&self.primitive_part(), 1, &mut out);
        }
        out.into_iter().collect()
    }

    /// `self / gcd(self, d/du)` when that already has all the roots (the
    /// separable case); `None` when an inseparable part remains.
    pub fn separable_radical(&self) -> Option<BiPoly> {
        let r = self.primitive_part();
        if r.degree_u()? == 0 {
            return Some(BiPoly::one(&self.field));
        }
        let dr = r.derivative_u();
        if dr.is_zero() {
            return None;
        }
        let c = subresultant_gcd(&r, &dr);
        let w = r.div_over_ratfield(&c)?;
        (w.degree_u()? == r.distinct_root_count()).then_some(w)
    }

    pub fn fmt_vars(&self, u: &str, t: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.fmt_var(t);
            let mono = match i {
                0 => String::new(),
                1 => u.to_string(),
                _ => format!("{u}^{i}"),
            };
            parts.push(if i == 0 {
                cs
            } else if cs == "1" {
                mono
            } else if c.nnz() == 1 {
                format!("{cs}*{mono}")
            } else {
                format!("({cs})*{mono}")
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.fmt_vars("u", "t"), self.field)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_vars("u", "t"))
    }
}

fn sqf_into(f: &BiPoly, scale: usize, out: &mut std::collections::BTreeMap<usize, usize>) {
    if f.degree_u().unwrap_or(0) == 0 {
        return;
    }
    let p = f.field.p() as usize;
    let df = f.derivative_u();
    if df.is_zero() {
        sqf_into(&f.deflate_u().expect("zero derivative"), scale * p, out);
        return;
    }
    let mut c = subresultant_gcd(f, &df);
    let mut w = f.div_over_ratfield(&c).expect("gcd divides");
    let mut i = 1;
    while w.degree_u().unwrap() > 0 {
        let y = subresultant_gcd(&w, &c);
        let z = w.div_over_ratfield(&y).expect("gcd divides");
        let dz = z.degree_u().unwrap();
        if dz > 0 {
            *out.entry(i * scale).or_insert(0) += dz;
        }
        i += 1;
        c = c.div_over_ratfield(&y).expect("gcd divides");
        w = y;
    }
    if c.degree_u().unwrap() > 0 {
        sqf_into(&c.deflate_u().expect("remaining part is a polynomial in u^p"), scale * p, out);
    }
}

/// Primitive gcd over `F_q(t)` of two polynomials, not both zero, by the
/// subresultant remainder sequence.
pub fn subresultant_gcd(a: &BiPoly, b: &BiPoly) -> BiPoly {
    let k = a.field().clone();
    if a.is_zero() {
        return b.primitive_part();
    }
    if b.is_zero() {
        return a.primitive_part();
    }
    let (mut a, mut b) = if a.degree_u() >= b.degree_u() {
        (a.primitive_part(), b.primitive_part())
    } else {
        (b.primitive_part(), a.primitive_part())
    };
    let mut g = Poly::one(&k);
    let mut h = Poly::one(&k);
    loop {
        if b.degree_u() == Some(0) {
            return BiPoly::one(&k);
        }
        let delta = (a.degree_u().unwrap() - b.degree_u().unwrap()) as u64;
        let r = a.prem(&b);
        if r.is_zero() {
            return b.primitive_part();
        }
        if r.degree_u() == Some(0) {
            return BiPoly::one(&k);
        }
        let divisor = g.mul(&h.pow(delta));
        a = b;
        b = BiPoly::new(
            &k,
            r.coeffs.iter().map(|c| c.exact_div(&divisor).expect("subresultant division is exact")).collect(),
        );
        g = a.lc();
        // h <- g^delta / h^(delta - 1)
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).exact_div(&h.pow(delta - 1)).expect("subresultant division is exact")
        };
    }
}

/// Resultant with respect to `u` (a polynomial in `t`), via the subresultant
/// sequence. Both inputs must have positive `u`-degree.
pub fn resultant_u(a: &BiPoly, b: &BiPoly) -> Poly {
    let k = a.field().clone();
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut sign_neg = false;
    let (da, db) = (a.degree_u().unwrap(), b.degree_u().unwrap());
    if da < db {
        std::mem::swap(&mut a, &mut b);
        if da % 2 == 1 && db % 2 == 1 {
            sign_neg = true;
        }
    }
    let mut g = Poly::one(&k);
    let mut h = Poly::one(&k);
    let res = loop {
        let (da, db) = (a.degree_u().unwrap(), b.degree_u().unwrap());
        let delta = (da - db) as u64;
        if da % 2 == 1 && db % 2 == 1 {
            sign_neg = !sign_neg;
        }
        let r = a.prem(&b);
        a = b;
        let divisor = g.mul(&h.pow(delta));
        b = BiPoly::new(
            &k,
            r.coeffs.iter().map(|c| c.exact_div(&divisor).expect("exact")).collect(),
        );
        g = a.lc();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).exact_div(&h.pow(delta - 1)).expect("exact")
        };
        match b.degree_u() {
            None => break Poly::zero(&k),
            Some(0) => {
                let da = a.degree_u().unwrap() as u64;
                let bc = b.coeff(0);
                break if da <= 1 {
                    bc.pow(da).mul(&h.pow(1 - da))
                } else {
                    bc.pow(da).exact_div(&h.pow(da - 1)).expect("exact")
                };
            }
            Some(_) => {}
        }
    };
    if sign_neg {
        res.neg()
    } else {
        res
    }
}

/// Gcd over `F_q(t)` of a family of polynomials in `u`, as a primitive
/// polynomial with normalized leading coefficient. Zero inputs are ignored;
/// a nonzero input constant in `u` forces the gcd to 1.
pub fn gcd_over_ratfield(fs: &[BiPoly]) -> Result<BiPoly> {
    gcd_over_ratfield_with(fs.iter().cloned(), None)
}

/// As [`gcd_over_ratfield`], consuming inputs lazily. When `floor` is given
/// and known to divide every input, folding stops as soon as the running gcd
/// equals it.
pub fn gcd_over_ratfield_with<I>(fs: I, floor: Option<&BiPoly>) -> Result<BiPoly>
where
    I: IntoIterator<Item = BiPoly>,
{
    let mut g: Option<BiPoly> = None;
    let mut field = None;
    let floor = floor.map(|f| f.primitive_part());
    let mut saw_constant = false;
    for f in fs {
        field.get_or_insert_with(|| f.field().clone());
        match f.degree_u() {
            None => continue,
            Some(0) => {
                saw_constant = true;
                continue;
            }
            Some(_) => {}
        }
        if saw_constant {
            g.get_or_insert_with(|| BiPoly::one(f.field()));
            continue;
        }
        let next = match &g {
            None => f.primitive_part(),
            Some(cur) => subresultant_gcd(cur, &f),
        };
        if next.degree_u() == Some(0) {
            saw_constant = true;
            g = Some(next);
            continue;
        }
        let done = floor.as_ref().is_some_and(|fl| fl == &next);
        g = Some(next);
        if done {
            break;
        }
    }
    match (g, saw_constant) {
        (None, _) => Err(Error::AllConstantInU),
        (Some(g), false) => Ok(g),
        (Some(g), true) => Ok(BiPoly::one(g.field())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use proptest::prelude::*;

    fn ut(k: &FieldSpec, c: i64) -> BiPoly {
        BiPoly::u_minus_t_minus(k, k.from_i64(c))
    }

    #[test]
    fn gcd_examples() {
        let k = make_field(3, 1).unwrap();
        let a = ut(&k, 0);
        let b = ut(&k, 0).mul(&ut(&k, 1));
        assert_eq!(gcd_over_ratfield(&[a.clone(), b]).unwrap(), a);

        let k5 = make_field(5, 1).unwrap();
        let up = BiPoly::from_u(&Poly::from_terms(&k5, &[(5, 1)]));
        let tp = BiPoly::from_t(Poly::from_terms(&k5, &[(5, 1)]));
        let f = up.sub(&tp);
        assert_eq!(gcd_over_ratfield(&[f.clone()]).unwrap(), ut(&k5, 0).pow(5));
        assert!(f.derivative_u().is_zero());
        assert_eq!(gcd_over_ratfield(&[f.clone(), ut(&k5, 1)]).unwrap(), BiPoly::one(&k5));
        assert_eq!(
            gcd_over_ratfield(&[BiPoly::from_t(Poly::x(&k5))]).unwrap_err(),
            Error::AllConstantInU
        );
        assert_eq!(gcd_over_ratfield(&[f, BiPoly::from_t(Poly::x(&k5))]).unwrap(), BiPoly::one(&k5));
    }

    #[test]
    fn gcd_with_nonconstant_leading_coefficients() {
        let k = make_field(5, 1).unwrap();
        let t = Poly::x(&k);
        // (t u - 1)(u + t^2) and (t u - 1)(t u + 3)
        let common = BiPoly::new(&k, vec![Poly::from_i64s(&k, &[-1]), t.clone()]);
        let a = common.mul(&BiPoly::new(&k, vec![Poly::from_terms(&k, &[(2, 1)]), Poly::one(&k)]));
        let b = common.mul(&BiPoly::new(&k, vec![Poly::from_i64s(&k, &[3]), t.clone()]));
        assert_eq!(gcd_over_ratfield(&[a, b]).unwrap(), common);
    }

    #[test]
    fn root_counts() {
        let k = make_field(3, 1).unwrap();
        // (u-t)^2 (u-t-1): two distinct roots.
        let f = ut(&k, 0).pow(2).mul(&ut(&k, 1));
        assert_eq!(f.distinct_root_count(), 2);
        assert_eq!(f.separable_radical().unwrap(), ut(&k, 0).mul(&ut(&k, 1)));
        // u^3 - t: purely inseparable, one root.
        let g = BiPoly::new(&k, vec![Poly::from_i64s(&k, &[0, -1]), Poly::zero(&k), Poly::zero(&k), Poly::one(&k)]);
        assert_eq!(g.distinct_root_count(), 1);
        assert!(g.separable_radical().is_none());
        // (u^3 - t)^2 (u - t)^3 (u + 1): three roots.
        let h = g.pow(2).mul(&ut(&k, 0).pow(3)).mul(&BiPoly::from_u(&Poly::from_i64s(&k, &[1, 1])));
        assert_eq!(h.distinct_root_count(), 3);
        assert_eq!(h.root_multiplicities(), vec![(1, 1), (3, 1), (6, 1)]);
        assert_eq!(f.root_multiplicities(), vec![(1, 1), (2, 1)]);
        // (u-t)^4 (u-t-1) over F_3: multiplicity 4 = 3 + 1.
        let m = ut(&k, 0).pow(4).mul(&ut(&k, 1));
        assert_eq!(m.root_multiplicities(), vec![(1, 1), (4, 1)]);
    }

    #[test]
    fn resultant_matches_product_of_differences() {
        let k = make_field(7, 1).unwrap();
        // Res_u(u - a(t), u - b(t)) = a - b up to sign, and Res(f, g) for
        // f = (u-t)(u-1), g = u - 2: f(2) = (2 - t)(1).
        let f = ut(&k, 0).mul(&BiPoly::from_u(&Poly::from_i64s(&k, &[-1, 1])));
        let g = BiPoly::from_u(&Poly::from_i64s(&k, &[-2, 1]));
        let r = resultant_u(&f, &g);
        assert_eq!(r, Poly::from_i64s(&k, &[2, -1]));
    }

    /// Oracle for the gcd: specialize `t` to many values of an extension
    /// field and compare with univariate gcds there.
    fn specialized_gcd_degree(fs: &[BiPoly], ext: &FieldSpec) -> usize {
        let mut min_deg = usize::MAX;
        for t0 in ext.elements().take(200) {
            let mut g = Poly::zero(ext);
            let mut ok = true;
            for f in fs {
                let fu = f.eval_t(ext, t0).unwrap();
                if fu.degree() != f.degree_u() {
                    ok = false;
                }
                g = g.gcd(&fu);
            }
            if ok {
                min_deg = min_deg.min(g.degree().unwrap_or(0));
            }
        }
        min_deg
    }

    fn arb_bipoly() -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-2i64..3, 0..3), 1..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn gcd_divides_inputs_and_matches_specialization(
            c in arb_bipoly(), x in arb_bipoly(), y in arb_bipoly()
        ) {
            let k = make_field(3, 1).unwrap();
            let mk = |v: &Vec<Vec<i64>>| BiPoly::new(&k, v.iter().map(|c| Poly::from_i64s(&k, c)).collect());
            let common = mk(&c);
            let a = common.mul(&mk(&x));
            let b = common.mul(&mk(&y));
            prop_assume!(a.degree_u().unwrap_or(0) > 0 || b.degree_u().unwrap_or(0) > 0);
            prop_assume!(!a.is_zero() && !b.is_zero());
            let g = gcd_over_ratfield(&[a.clone(), b.clone()]).unwrap();
            prop_assert!(a.div_over_ratfield(&g).is_some());
            prop_assert!(b.div_over_ratfield(&g).is_some());
            if common.degree_u().unwrap_or(0) > 0 {
                prop_assert!(g.div_over_ratfield(&common).is_some());
            }
            let ext = make_field(3, 4).unwrap();
            prop_assert_eq!(g.degree_u().unwrap(), specialized_gcd_degree(&[a, b], &ext));
        }
    }
}
