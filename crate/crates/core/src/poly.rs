//! Dense univariate polynomials and reduced rational functions over a finite
//! field.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldElem, FieldSpec};

const KARATSUBA_THRESHOLD: usize = 32;

/// Polynomial with coefficients low degree first and no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<Elem>,
}

fn trim(k: &FieldSpec, v: &mut Vec<Elem>) {
    while let Some(&c) = v.last() {
        if k.is_zero(c) {
            v.pop();
        } else {
            break;
        }
    }
}

fn schoolbook(k: &FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if k.is_zero(y) {
                continue;
            }
            out[i + j] = k.add(out[i + j], k.mul(x, y));
        }
    }
    out
}

fn add_into(k: &FieldSpec, dst: &mut [Elem], src: &[Elem]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = k.add(*d, s);
    }
}

fn sub_into(k: &FieldSpec, dst: &mut [Elem], src: &[Elem]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = k.sub(*d, s);
    }
}

fn karatsuba(k: &FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if b.len() < KARATSUBA_THRESHOLD {
        return schoolbook(k, a, b);
    }
    if a.len() >= 2 * b.len() {
        // Unbalanced: multiply b against chunks of a.
        let mut out = vec![k.zero(); a.len() + b.len() - 1];
        for (c, chunk) in a.chunks(b.len()).enumerate() {
            let part = karatsuba(k, chunk, b);
            add_into(k, &mut out[c * b.len()..], &part);
        }
        return out;
    }
    let h = b.len() / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let z0 = karatsuba(k, a0, b0);
    let z2 = karatsuba(k, a1, b1);
    let mut sa = a1.to_vec();
    add_into(k, &mut sa, a0);
    let mut sb = b1.to_vec();
    add_into(k, &mut sb, b0);
    let mut z1 = karatsuba(k, &sa, &sb);
    sub_into(k, &mut z1, &z0);
    sub_into(k, &mut z1, &z2);
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    add_into(k, &mut out, &z0);
    add_into(k, &mut out[h..], &z1);
    add_into(k, &mut out[2 * h..], &z2);
    out
}

pub(crate) fn mul_slices(k: &FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let nnz_a = a.iter().filter(|&&c| !k.is_zero(c)).count();
    let nnz_b = b.iter().filter(|&&c| !k.is_zero(c)).count();
    // Sparse operands (the curves here are mostly a handful of monomials of
    // huge degree) are cheaper term by term.
    if a.len().min(b.len()) < KARATSUBA_THRESHOLD || nnz_a * nnz_b * 8 <= a.len() * b.len() {
        schoolbook(k, a, b)
    } else {
        karatsuba(k, a, b)
    }
}

impl Poly {
    pub fn new(field: &FieldSpec, mut coeffs: Vec<Elem>) -> Poly {
        trim(field, &mut coeffs);
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &FieldSpec) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &FieldSpec) -> Poly {
        Poly::constant(field, field.one())
    }

    pub fn constant(field: &FieldSpec, c: Elem) -> Poly {
        Poly::new(field, vec![c])
    }

    /// The variable itself.
    pub fn x(field: &FieldSpec) -> Poly {
        Poly::monomial(field, field.one(), 1)
    }

    pub fn monomial(field: &FieldSpec, c: Elem, k: usize) -> Poly {
        let mut v = vec![field.zero(); k + 1];
        v[k] = c;
        Poly::new(field, v)
    }

    /// Integer coefficients, low degree first, mapped through `Z -> F_p`.
    pub fn from_i64s(field: &FieldSpec, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// Sparse constructor from (exponent, integer coefficient) terms.
    pub fn from_terms(field: &FieldSpec, terms: &[(usize, i64)]) -> Poly {
        let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut v = vec![field.zero(); deg + 1];
        for &(e, c) in terms {
            v[e] = field.add(v[e], field.from_i64(c));
        }
        Poly::new(field, v)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Elem {
        self.coeffs.get(k).copied().unwrap_or(self.field.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to -1.
    pub fn deg(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == self.field.one()
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lc(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(self.field.zero())
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.iter().filter(|&&c| !self.field.is_zero(c)).count()
    }

    /// Nonzero terms as (exponent, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (usize, Elem)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| !self.field.is_zero(c))
            .map(|(i, &c)| (i, c))
    }

    fn same_field(&self, other: &Poly) {
        assert!(self.field == other.field, "polynomials over different fields");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let k = &self.field;
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut v = long.coeffs.clone();
        add_into(k, &mut v, &short.coeffs);
        Poly::new(k, v)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        let k = &self.field;
        Poly {
            field: k.clone(),
            coeffs: self.coeffs.iter().map(|&c| k.neg(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_field(other);
        Poly::new(&self.field, mul_slices(&self.field, &self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let k = &self.field;
        if k.is_zero(c) {
            return Poly::zero(k);
        }
        Poly {
            field: k.clone(),
            coeffs: self.coeffs.iter().map(|&x| k.mul(x, c)).collect(),
        }
    }

    /// Multiply by `x^k`.
    pub fn shl(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![self.field.zero(); k];
        v.extend_from_slice(&self.coeffs);
        Poly {
            field: self.field.clone(),
            coeffs: v,
        }
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
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

    /// Quotient and remainder. Panics if `d` is zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        self.same_field(d);
        assert!(!d.is_zero(), "polynomial division by zero");
        let k = &self.field;
        if self.coeffs.len() < d.coeffs.len() {
            return (Poly::zero(k), self.clone());
        }
        let dd = d.coeffs.len() - 1;
        let inv = k.inv(d.lc());
        let mut r = self.coeffs.clone();
        let mut q = vec![k.zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = k.mul(r[i + dd], inv);
            q[i] = c;
            if k.is_zero(c) {
                continue;
            }
            for (j, &dj) in d.coeffs.iter().enumerate() {
                if !k.is_zero(dj) {
                    r[i + j] = k.sub(r[i + j], k.mul(c, dj));
                }
            }
        }
        r.truncate(dd);
        (Poly::new(k, q), Poly::new(k, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// `self / d` when the division is exact.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lc()))
    }

    /// Monic gcd; zero when both inputs are zero.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: (g, s, t) with s*self + t*other = g, g monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let k = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(k), Poly::zero(k));
        let (mut t0, mut t1) = (Poly::zero(k), Poly::one(k));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = k.inv(r0.lc());
        (r0.scale(c), s0.scale(c), t0.scale(c))
    }

    pub fn derivative(&self) -> Poly {
        let k = &self.field;
        if self.coeffs.len() <= 1 {
            return Poly::zero(k);
        }
        let v = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| k.mul(c, k.from_i64((i + 1) as i64)))
            .collect();
        Poly::new(k, v)
    }

    /// Evaluate at a point of the coefficient field. Sparse polynomials are
    /// summed term by term, dense ones by Horner.
    pub fn eval(&self, x: Elem) -> Elem {
        let k = &self.field;
        let n = self.coeffs.len();
        if n == 0 {
            return k.zero();
        }
        let nnz = self.nnz();
        if nnz * 8 < n {
            let mut acc = k.zero();
            for (e, c) in self.terms() {
                acc = k.add(acc, k.mul(c, k.pow(x, e as u64)));
            }
            acc
        } else {
            self.coeffs.iter().rev().fold(k.zero(), |acc, &c| k.add(k.mul(acc, x), c))
        }
    }

    /// Image of the coefficients in an extension field.
    pub fn lift(&self, target: &FieldSpec) -> Result<Poly> {
        if &self.field == target {
            return Ok(self.clone());
        }
        let emb = crate::embed::embedding(&self.field, target)?;
        Ok(Poly::new(target, self.coeffs.iter().map(|&c| emb.apply(c)).collect()))
    }

    /// Apply a coefficient map into another field (no checks).
    pub fn map_coeffs(&self, target: &FieldSpec, f: impl Fn(Elem) -> Elem) -> Poly {
        Poly::new(target, self.coeffs.iter().map(|&c| f(c)).collect())
    }

    /// `self(x + a)` by repeated Horner steps.
    pub fn shift(&self, a: Elem) -> Poly {
        let k = &self.field;
        if k.is_zero(a) || self.coeffs.len() <= 1 {
            return self.clone();
        }
        let mut c = self.coeffs.clone();
        let n = c.len();
        // Taylor shift: after pass i, c[i] is final.
        for i in 0..n {
            for j in (i..n - 1).rev() {
                c[j] = k.add(c[j], k.mul(a, c[j + 1]));
            }
        }
        Poly::new(k, c)
    }

    /// `self(a x + b)`. Sparse inputs expand each `(a x + b)^e` digit by
    /// digit in base p, which keeps Frobenius-heavy exponents cheap.
    pub fn subst_affine(&self, a: Elem, b: Elem) -> Poly {
        let k = &self.field;
        if self.coeffs.len() > 1 && self.nnz() * 8 >= self.coeffs.len() {
            let h = self.shift(b);
            let mut ai = k.one();
            let mut c = h.coeffs;
            for x in c.iter_mut() {
                *x = k.mul(*x, ai);
                ai = k.mul(ai, a);
            }
            return Poly::new(k, c);
        }
        let p = k.p() as u64;
        let mut acc = Poly::zero(k);
        for (e, coef) in self.terms() {
            let mut term = Poly::constant(k, coef);
            let (mut rest, mut pi, mut ap, mut bp) = (e as u64, 1usize, a, b);
            while rest > 0 {
                let digit = rest % p;
                if digit > 0 {
                    let lin = Poly::new(k, {
                        let mut v = vec![k.zero(); pi + 1];
                        v[0] = bp;
                        v[pi] = ap;
                        v
                    });
                    term = term.mul(&lin.pow(digit));
                }
                rest /= p;
                if rest > 0 {
                    pi *= p as usize;
                    ap = k.pow(ap, p);
                    bp = k.pow(bp, p);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// `self(other(x))`.
    pub fn compose(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let k = &self.field;
        let mut acc = Poly::zero(k);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(other).add(&Poly::constant(k, c));
        }
        acc
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut acc = Poly::one(&self.field).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    /// `h` with `h^p = self`, if it exists.
    pub fn pth_root(&self) -> Option<Poly> {
        let k = &self.field;
        let p = k.p() as usize;
        if self.terms().any(|(e, _)| e % p != 0) {
            return None;
        }
        let n = self.coeffs.len().div_ceil(p).max(if self.is_zero() { 0 } else { 1 });
        let v = (0..n).map(|i| k.pth_root(self.coeff(i * p))).collect();
        Some(Poly::new(k, v))
    }

    /// `S` with `self = S(x^p)` when every exponent is divisible by p.
    pub fn deflate(&self) -> Option<Poly> {
        let k = &self.field;
        let p = k.p() as usize;
        if self.terms().any(|(e, _)| e % p != 0) {
            return None;
        }
        let n = if self.is_zero() { 0 } else { self.coeffs.len().div_ceil(p) };
        Some(Poly::new(k, (0..n).map(|i| self.coeff(i * p)).collect()))
    }

    /// Number of distinct roots in an algebraic closure.
    pub fn distinct_root_count(&self) -> usize {
        assert!(!self.is_zero());
        if self.is_constant() {
            return 0;
        }
        let d = self.derivative();
        if d.is_zero() {
            return self.deflate().expect("zero derivative").distinct_root_count();
        }
        let c = self.gcd(&d);
        let w = self.exact_div(&c).expect("gcd divides");
        let mut z = c;
        loop {
            let h = z.gcd(&w);
            if h.is_constant() {
                break;
            }
            z = z.exact_div(&h).expect("gcd divides");
        }
        w.degree().unwrap() + z.distinct_root_count()
    }

    /// Product of the distinct monic irreducible factors (over a perfect field).
    pub fn squarefree_part(&self) -> Poly {
        assert!(!self.is_zero());
        if self.is_constant() {
            return Poly::one(&self.field);
        }
        let d = self.derivative();
        if d.is_zero() {
            return self.pth_root().expect("perfect field").squarefree_part();
        }
        let c = self.gcd(&d);
        let w = self.exact_div(&c).expect("gcd divides").monic();
        let mut z = c;
        loop {
            let h = z.gcd(&w);
            if h.is_constant() {
                break;
            }
            z = z.exact_div(&h).expect("gcd divides");
        }
        if z.is_constant() {
            w
        } else {
            w.mul(&z.squarefree_part()).monic()
        }
    }

    /// All roots in the coefficient field, sorted in coefficient-lexicographic
    /// order. Uses gcd with `x^Q - x` and equal-degree splitting with a fixed
    /// seed, so the output is deterministic.
    pub fn roots(&self) -> Vec<Elem> {
        let k = &self.field;
        assert!(!self.is_zero());
        if self.is_constant() {
            return Vec::new();
        }
        let f = self.monic();
        let x = Poly::x(k);
        let xq = x.powmod(k.size(), &f);
        let g = f.gcd(&xq.sub(&x));
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x7a6e_6465_67);
        split_linear(&g, &mut rng, &mut out);
        out.sort_by_key(|&a| k.lex_key(a));
        out
    }

    pub fn fmt_var(&self, var: &str) -> String {
        let k = &self.field;
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let cs = k.fmt_elem(c);
            let cs = if k.is_prime_field() || !cs.contains('+') {
                cs
            } else {
                format!("({cs})")
            };
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            parts.push(match (e, cs.as_str()) {
                (0, _) => cs,
                (_, "1") => mono,
                _ => format!("{cs}{mono}"),
            });
        }
        parts.join(" + ")
    }
}

fn split_linear(g: &Poly, rng: &mut ChaCha8Rng, out: &mut Vec<Elem>) {
    let k = g.field();
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let g = g.monic();
            out.push(k.neg(g.coeff(0)));
        }
        Some(_) => loop {
            let a = k.random(rng);
            let h = if k.p() == 2 {
                // Trace map: sum of (a*x)^(2^i), i < m.
                let mut acc = Poly::zero(k);
                let mut term = Poly::new(k, vec![k.zero(), a]).rem(g);
                for _ in 0..k.m() {
                    acc = acc.add(&term);
                    term = term.mul(&term).rem(g);
                }
                acc
            } else {
                let xa = Poly::new(k, vec![a, k.one()]);
                xa.powmod((k.size() - 1) / 2, g).sub(&Poly::one(k))
            };
            let d = g.gcd(&h);
            if let Some(dd) = d.degree() {
                if dd > 0 && dd < g.degree().unwrap() {
                    split_linear(&d, rng, out);
                    split_linear(&g.exact_div(&d).unwrap(), rng, out);
                    return;
                }
            }
        },
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.fmt_var("t"), self.field)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}

impl<'a> std::ops::Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::add(self, rhs)
    }
}

impl<'a> std::ops::Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly::sub(self, rhs)
    }
}

impl<'a> std::ops::Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

/// Monic gcd of two polynomials; both zero is an error.
pub fn gcd_uni(a: &Poly, b: &Poly) -> Result<Poly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    Ok(a.gcd(b))
}

/// A reduced fraction `num / den` with `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        num.same_field(&den);
        let k = num.field().clone();
        if num.is_zero() {
            return Ok(RatFunc::zero(&k));
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let c = d.lc();
        if c != k.one() {
            let ci = k.inv(c);
            n = n.scale(ci);
            d = d.scale(ci);
        }
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        let k = p.field().clone();
        RatFunc { num: p, den: Poly::one(&k) }
    }

    pub fn zero(k: &FieldSpec) -> RatFunc {
        RatFunc::from_poly(Poly::zero(k))
    }

    pub fn one(k: &FieldSpec) -> RatFunc {
        RatFunc::from_poly(Poly::one(k))
    }

    pub fn constant(k: &FieldSpec, c: Elem) -> RatFunc {
        RatFunc::from_poly(Poly::constant(k, c))
    }

    pub fn t(k: &FieldSpec) -> RatFunc {
        RatFunc::from_poly(Poly::x(k))
    }

    pub fn field(&self) -> &FieldSpec {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_poly().then_some(&self.num)
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.den == other.den {
            return RatFunc::new(self.num.add(&other.num), self.den.clone()).unwrap();
        }
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .unwrap()
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_poly() && other.is_poly() {
            return RatFunc::from_poly(self.num.mul(&other.num));
        }
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den)).unwrap()
    }

    pub fn scale(&self, c: Elem) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone()).unwrap()
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u64) -> RatFunc {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Formal d/dt by the quotient rule.
    pub fn derivative(&self) -> RatFunc {
        if self.is_poly() {
            return RatFunc::from_poly(self.num.derivative());
        }
        let n = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        RatFunc::new(n, self.den.mul(&self.den)).unwrap()
    }

    /// Value at a point, `None` at a pole.
    pub fn eval(&self, x: Elem) -> Option<Elem> {
        let k = self.field();
        let d = self.den.eval(x);
        if k.is_zero(d) {
            None
        } else {
            Some(k.div(self.num.eval(x), d))
        }
    }

    pub fn lift(&self, target: &FieldSpec) -> Result<RatFunc> {
        Ok(RatFunc {
            num: self.num.lift(target)?,
            den: self.den.lift(target)?,
        })
    }

    /// `g(t + a)`, computed over the field of `a` (lifting `g` if needed).
    pub fn shift(&self, a: &FieldElem) -> Result<RatFunc> {
        let g = self.lift(a.field())?;
        Ok(RatFunc {
            num: g.num.shift(a.value()),
            den: g.den.shift(a.value()),
        })
    }

    /// `g((a t + b) / (c t + d))`, all coefficients in this field.
    pub fn compose_moebius(&self, a: Elem, b: Elem, c: Elem, d: Elem) -> RatFunc {
        let k = self.field();
        let top = Poly::new(k, vec![b, a]);
        let bot = Poly::new(k, vec![d, c]);
        let homog = |p: &Poly, deg: usize| -> Poly {
            let mut acc = Poly::zero(k);
            for (e, coef) in p.terms() {
                acc = acc.add(&top.pow(e as u64).mul(&bot.pow((deg - e) as u64)).scale(coef));
            }
            acc
        };
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let n = homog(&self.num, dn);
        let m = homog(&self.den, dd);
        // g = n / B^dn divided by m / B^dd.
        let (n, m) = if dd >= dn {
            (n.mul(&bot.pow((dd - dn) as u64)), m)
        } else {
            (n, m.mul(&bot.pow((dn - dd) as u64)))
        };
        RatFunc::new(n, m).expect("moebius image of a nonzero denominator")
    }

    /// `h` with `h^p = self`, if one exists (it is then unique).
    pub fn pth_root(&self) -> Option<RatFunc> {
        Some(RatFunc {
            num: self.num.pth_root()?,
            den: self.den.pth_root()?,
        })
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_poly() {
            self.num.fmt_var(var)
        } else {
            format!("({}) / ({})", self.num.fmt_var(var), self.den.fmt_var(var))
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.fmt_var("t"), self.field())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}

/// Formal derivative of a rational function.
pub fn derivative(f: &RatFunc) -> RatFunc {
    f.derivative()
}

/// `g(t + alpha)`.
pub fn shift(g: &RatFunc, alpha: &FieldElem) -> Result<RatFunc> {
    g.shift(alpha)
}

/// The unique p-th root of `f`, if `f` is a p-th power.
pub fn is_pth_power(f: &RatFunc) -> Option<RatFunc> {
    f.pth_root()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use proptest::prelude::*;

    fn f(p: u64) -> FieldSpec {
        make_field(p, 1).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let k = f(3);
        let g = RatFunc::from_poly(Poly::from_i64s(&k, &[0, 0, 1, -1]));
        assert_eq!(g.derivative(), RatFunc::from_poly(Poly::from_i64s(&k, &[0, 2])));
        let h = RatFunc::from_poly(Poly::from_terms(&k, &[(3, 1), (9, -1)]));
        assert!(h.derivative().is_zero());
        let k5 = f(5);
        let inv_t = RatFunc::t(&k5).inv().unwrap();
        let expect = RatFunc::new(Poly::from_i64s(&k5, &[4]), Poly::from_i64s(&k5, &[0, 0, 1])).unwrap();
        assert_eq!(inv_t.derivative(), expect);
    }

    #[test]
    fn shift_examples() {
        let k = f(3);
        let g = RatFunc::from_poly(Poly::from_i64s(&k, &[0, 0, 1, -1]));
        let one = FieldElem::from_i64(&k, 1);
        // Oracle: (t+1)^2 - (t+1)^3 expanded over Z, then reduced mod 3.
        let over_z = [1 - 1, 2 - 3, 1 - 3, -1];
        assert_eq!(g.shift(&one).unwrap(), RatFunc::from_poly(Poly::from_i64s(&k, &over_z)));
        assert_eq!(g.shift(&one).unwrap().num().coeffs().len(), 4);
        assert_eq!(g.shift(&FieldElem::from_i64(&k, 0)).unwrap(), g);

        let k9 = make_field(3, 2).unwrap();
        let h = RatFunc::from_poly(Poly::from_terms(&k, &[(3, 1), (9, -1)]));
        for a in k.elements() {
            let alpha = FieldElem::from_i64(&k, 0).add(&k.elem(a)).unwrap().lift(&k9).unwrap();
            assert_eq!(h.shift(&alpha).unwrap(), h.lift(&k9).unwrap());
        }
    }

    #[test]
    fn gcd_uni_examples() {
        let k = f(5);
        let a = Poly::from_i64s(&k, &[-1, 1]).mul(&Poly::from_i64s(&k, &[-2, 1]));
        let b = Poly::from_i64s(&k, &[-1, 1]);
        assert_eq!(gcd_uni(&a, &b).unwrap(), b);
        let c = Poly::from_i64s(&k, &[3, 0, 2]);
        assert_eq!(gcd_uni(&c, &Poly::zero(&k)).unwrap(), c.monic());
        assert_eq!(gcd_uni(&Poly::zero(&k), &Poly::zero(&k)).unwrap_err(), Error::BothZero);
        let k3 = f(3);
        let t9 = Poly::from_terms(&k3, &[(9, 1), (1, -1)]);
        let t3 = Poly::from_terms(&k3, &[(3, 1), (1, -1)]);
        assert_eq!(gcd_uni(&t9, &t3).unwrap(), t3);
    }

    #[test]
    fn pth_power_examples() {
        let k = f(3);
        let t3 = RatFunc::from_poly(Poly::from_terms(&k, &[(3, 1)]));
        assert_eq!(is_pth_power(&t3), Some(RatFunc::t(&k)));
        assert_eq!(is_pth_power(&RatFunc::t(&k)), None);
        let h = RatFunc::new(Poly::from_i64s(&k, &[0, -1, 0, 1]), Poly::from_i64s(&k, &[1, 0, 0, 1])).unwrap();
        assert_eq!(is_pth_power(&h.pow(3)), Some(h));
    }

    #[test]
    fn roots_match_scan() {
        for k in [f(7), make_field(3, 3).unwrap(), make_field(2, 4).unwrap(), make_field(5, 2).unwrap()] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..20 {
                let deg = 1 + (rand::Rng::gen_range(&mut rng, 0..6));
                let p = Poly::new(&k, (0..=deg).map(|_| k.random(&mut rng)).collect());
                if p.is_zero() {
                    continue;
                }
                let mut brute: Vec<Elem> = k.elements().filter(|&x| k.is_zero(p.eval(x))).collect();
                brute.sort_by_key(|&a| k.lex_key(a));
                if p.is_constant() {
                    continue;
                }
                assert_eq!(p.roots(), brute);
            }
        }
    }

    #[test]
    fn distinct_roots_in_char_p() {
        let k = f(3);
        // (t-1)^3 (t-2)^2 t: three distinct roots.
        let p = Poly::from_i64s(&k, &[-1, 1]).pow(3).mul(&Poly::from_i64s(&k, &[-2, 1]).pow(2)).mul(&Poly::x(&k));
        assert_eq!(p.distinct_root_count(), 3);
        assert_eq!(p.squarefree_part(), Poly::from_i64s(&k, &[-1, 1]).mul(&Poly::from_i64s(&k, &[-2, 1])).mul(&Poly::x(&k)));
        // t^9 - t: nine distinct roots in F_9.
        assert_eq!(Poly::from_terms(&k, &[(9, 1), (1, -1)]).distinct_root_count(), 9);
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        let k = make_field(5, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (la, lb) in [(40, 40), (100, 33), (257, 70), (64, 200)] {
            let a: Vec<Elem> = (0..la).map(|_| k.random(&mut rng)).collect();
            let b: Vec<Elem> = (0..lb).map(|_| k.random(&mut rng)).collect();
            assert_eq!(karatsuba(&k, &a, &b), schoolbook(&k, &a, &b));
        }
    }

    fn arb_ratfunc() -> impl Strategy<Value = RatFunc> {
        (prop::collection::vec(-3i64..4, 0..6), prop::collection::vec(-3i64..4, 1..5)).prop_filter_map("nonzero den", |(n, d)| {
            let k = f(5);
            RatFunc::new(Poly::from_i64s(&k, &n), Poly::from_i64s(&k, &d)).ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn subst_affine_matches_compose(
            terms in prop::collection::vec((0usize..200, 1i64..7), 1..5),
            a in 1i64..7,
            b in 0i64..7,
        ) {
            let k = f(7);
            let g = Poly::from_terms(&k, &terms);
            let lin = Poly::from_i64s(&k, &[b, a]);
            prop_assert_eq!(g.subst_affine(k.from_i64(a), k.from_i64(b)), g.compose(&lin));
        }

        #[test]
        fn leibniz(a in arb_ratfunc(), b in arb_ratfunc()) {
            let lhs = a.mul(&b).derivative();
            let rhs = a.derivative().mul(&b).add(&a.mul(&b.derivative()));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn shift_is_automorphism(a in arb_ratfunc(), b in arb_ratfunc(), x in 0i64..5, y in 0i64..5) {
            let k = f(5);
            let (ax, ay) = (FieldElem::from_i64(&k, x), FieldElem::from_i64(&k, y));
            prop_assert_eq!(a.mul(&b).shift(&ax).unwrap(), a.shift(&ax).unwrap().mul(&b.shift(&ax).unwrap()));
            prop_assert_eq!(a.shift(&ax).unwrap().shift(&ay).unwrap(), a.shift(&ax.add(&ay).unwrap()).unwrap());
        }

        #[test]
        fn zero_derivative_iff_pth_power(a in arb_ratfunc(), pow in any::<bool>()) {
            let g = if pow { a.pow(5) } else { a };
            prop_assert_eq!(g.derivative().is_zero(), is_pth_power(&g).is_some());
        }
    }
}
