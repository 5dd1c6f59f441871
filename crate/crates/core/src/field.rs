//! Finite fields `F_{p^m}`.
//!
//! A [`FieldSpec`] is a cheap, shareable handle; elements are plain [`Elem`]
//! words whose meaning depends on the field's internal representation, so all
//! arithmetic goes through the field: `k.mul(a, b)`. Three representations are
//! used:
//!
//! * prime fields store residues directly;
//! * extension fields with at most [`TABLE_LIMIT`] elements store discrete
//!   logarithms to a fixed primitive element and add through a Zech table;
//! * larger extension fields store the base-`p` code of the coefficient vector
//!   and multiply by reduction modulo the defining polynomial.
//!
//! [`FieldElem`] bundles an element with its field for the checked public API.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::arith::{factor_u64, gcd_u64, is_prime_u64};
use crate::error::{Error, Result};

/// Extension fields up to this size use log/Zech tables.
pub const TABLE_LIMIT: u64 = 1 << 21;

const NO_LOG: u32 = u32::MAX;
const MAX_M: usize = 64;

/// An element of some [`FieldSpec`]. Only meaningful together with its field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub(crate) u64);

#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

struct Inner {
    p: u32,
    m: u32,
    /// Monic, low degree first, length m + 1. Empty for prime fields.
    modulus: Vec<u32>,
    size: u64,
    repr: Repr,
    primitive: OnceLock<Elem>,
}

enum Repr {
    Prime,
    Log(LogTables),
    Code,
}

struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    order: u64,
}

/// Coefficient-vector arithmetic on base-`p` codes. Used for the large-field
/// representation and while building log tables.
#[derive(Clone)]
struct CodeArith {
    p: u64,
    m: usize,
    modulus: Vec<u64>,
}

impl CodeArith {
    fn decode(&self, mut c: u64, out: &mut [u64]) {
        for d in out.iter_mut().take(self.m) {
            *d = c % self.p;
            c /= self.p;
        }
    }

    fn encode(&self, digits: &[u64]) -> u64 {
        digits[..self.m].iter().rev().fold(0u64, |acc, &d| acc * self.p + d)
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let (mut da, mut db) = ([0u64; MAX_M], [0u64; MAX_M]);
        self.decode(a, &mut da);
        self.decode(b, &mut db);
        for i in 0..self.m {
            da[i] = (da[i] + db[i]) % self.p;
        }
        self.encode(&da)
    }

    fn neg(&self, a: u64) -> u64 {
        let mut da = [0u64; MAX_M];
        self.decode(a, &mut da);
        for d in da.iter_mut().take(self.m) {
            *d = (self.p - *d) % self.p;
        }
        self.encode(&da)
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        let (mut da, mut db) = ([0u64; MAX_M], [0u64; MAX_M]);
        self.decode(a, &mut da);
        self.decode(b, &mut db);
        let m = self.m;
        let p = self.p;
        let mut prod = [0u64; 2 * MAX_M];
        for i in 0..m {
            if da[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for k in (m..2 * m - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..m {
                let s = k - m + j;
                prod[s] = (prod[s] + c * (p - self.modulus[j])) % p;
            }
        }
        self.encode(&prod)
    }

    fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn registry() -> &'static Mutex<HashMap<(u32, Vec<u32>), FieldSpec>> {
    static REG: OnceLock<Mutex<HashMap<(u32, Vec<u32>), FieldSpec>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

fn canonical() -> &'static Mutex<HashMap<(u32, u32), FieldSpec>> {
    static REG: OnceLock<Mutex<HashMap<(u32, u32), FieldSpec>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

fn check_size(p: u64, m: u32) -> Result<u64> {
    if p >= 1 << 31 {
        return Err(Error::FieldTooLarge { p, m });
    }
    let mut size: u64 = 1;
    for _ in 0..m {
        size = size
            .checked_mul(p)
            .filter(|&s| s < 1 << 62)
            .ok_or(Error::FieldTooLarge { p, m })?;
    }
    Ok(size)
}

/// The field `F_{p^m}` with the lexicographically smallest monic irreducible
/// modulus (coefficients compared constant term first).
pub fn make_field(p: u64, m: u32) -> Result<FieldSpec> {
    if !is_prime_u64(p) {
        return Err(Error::NonPrimeCharacteristic(p));
    }
    if m == 0 {
        return Err(Error::DegenerateInput("extension degree must be at least 1".into()));
    }
    check_size(p, m)?;
    let p32 = p as u32;
    if let Some(k) = canonical().lock().unwrap().get(&(p32, m)) {
        return Ok(k.clone());
    }
    let modulus = if m == 1 {
        Vec::new()
    } else {
        smallest_irreducible(p, m as usize)
    };
    let k = FieldSpec::from_parts(p32, m, modulus);
    canonical().lock().unwrap().insert((p32, m), k.clone());
    Ok(k)
}

fn smallest_irreducible(p: u64, m: usize) -> Vec<u32> {
    // c_0 is the most significant position of the search order.
    let total = p.pow(m as u32);
    for n in 0..total {
        let mut coeffs = vec![0u64; m + 1];
        let mut r = n;
        for i in (0..m).rev() {
            coeffs[i] = r % p;
            r /= p;
        }
        coeffs[m] = 1;
        if coeffs[0] == 0 {
            continue;
        }
        if is_irreducible_mod_p(&coeffs, p) {
            return coeffs.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

// Dense helpers over F_p used only by the irreducibility test, so that field
// construction does not depend on the polynomial layer.
fn fp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let db = b.len() - 1;
    let inv = mod_inv(b[db], p);
    while r.len() > db {
        let c = r[r.len() - 1] * inv % p;
        let shift = r.len() - 1 - db;
        for (j, &bj) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + (p - c) * bj % p) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    fp_rem(&prod, f, p)
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Rabin-style test: `f` of degree m is irreducible over F_p iff it has no
/// factor of degree <= m/2, i.e. gcd(X^{p^i} - X, f) = 1 for i <= m/2.
fn is_irreducible_mod_p(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    let mut xp = x.clone();
    for _ in 1..=m / 2 {
        // xp <- xp^p mod f
        let mut acc = vec![1u64];
        let mut base = xp.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_mulmod(&acc, &base, f, p);
            }
            base = fp_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        xp = acc;
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        fp_trim(&mut diff);
        let g = fp_gcd(f, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

impl FieldSpec {
    /// A field with an explicit modulus (monic, low degree first). The modulus
    /// is checked for irreducibility.
    pub fn with_modulus(p: u64, modulus: &[u32]) -> Result<FieldSpec> {
        if !is_prime_u64(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        if modulus.len() < 2 {
            return make_field(p, 1);
        }
        let m = modulus.len() - 1;
        check_size(p, m as u32)?;
        let f: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        if f[m] != 1 || f.iter().any(|&c| c >= p) || !is_irreducible_mod_p(&f, p) {
            return Err(Error::ReducibleModulus(m));
        }
        if m == 1 {
            return make_field(p, 1);
        }
        Ok(FieldSpec::from_parts(p as u32, m as u32, modulus.to_vec()))
    }

    fn from_parts(p: u32, m: u32, modulus: Vec<u32>) -> FieldSpec {
        let key = (p, modulus.clone());
        if let Some(k) = registry().lock().unwrap().get(&key) {
            return k.clone();
        }
        let size = (p as u64).pow(m);
        let repr = if m == 1 {
            Repr::Prime
        } else if size <= TABLE_LIMIT {
            Repr::Log(build_tables(p as u64, m as usize, &modulus, size))
        } else {
            Repr::Code
        };
        let k = FieldSpec(Arc::new(Inner {
            p,
            m,
            modulus,
            size,
            repr,
            primitive: OnceLock::new(),
        }));
        registry().lock().unwrap().insert(key, k.clone());
        k
    }

    fn code_arith(&self) -> CodeArith {
        CodeArith {
            p: self.0.p as u64,
            m: self.0.m as usize,
            modulus: self.0.modulus.iter().map(|&c| c as u64).collect(),
        }
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn m(&self) -> u32 {
        self.0.m
    }

    /// Number of elements, `p^m`.
    pub fn size(&self) -> u64 {
        self.0.size
    }

    /// The defining polynomial (monic, low degree first); `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        if self.0.m == 1 {
            None
        } else {
            Some(&self.0.modulus)
        }
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.m == 1
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        Elem(1)
    }

    #[inline]
    pub fn is_zero(&self, a: Elem) -> bool {
        a.0 == 0
    }

    /// Image of an integer under `Z -> F_p -> F_{p^m}`.
    pub fn from_i64(&self, v: i64) -> Elem {
        let p = self.0.p as i64;
        self.from_code(v.rem_euclid(p) as u64)
    }

    /// Element with the given coordinates in the power basis of the modulus.
    /// Coordinates are reduced mod p; missing ones are zero.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Elem> {
        if coeffs.len() > self.0.m as usize {
            return Err(Error::Parse(format!(
                "{} coordinates for a degree-{} field",
                coeffs.len(),
                self.0.m
            )));
        }
        let p = self.0.p as u64;
        let code = coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c % p);
        Ok(self.from_code(code))
    }

    /// Coordinates in the power basis, length m.
    pub fn coeffs(&self, a: Elem) -> Vec<u64> {
        let p = self.0.p as u64;
        let mut c = self.code(a);
        (0..self.0.m)
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .collect()
    }

    /// Base-p integer code of the coordinate vector (constant term least
    /// significant). A bijection onto `0..size()`.
    pub fn code(&self, a: Elem) -> u64 {
        match &self.0.repr {
            Repr::Prime | Repr::Code => a.0,
            Repr::Log(t) => {
                if a.0 == 0 {
                    0
                } else {
                    t.exp[(a.0 - 1) as usize] as u64
                }
            }
        }
    }

    pub fn from_code(&self, c: u64) -> Elem {
        debug_assert!(c < self.0.size);
        match &self.0.repr {
            Repr::Prime | Repr::Code => Elem(c),
            Repr::Log(t) => {
                if c == 0 {
                    Elem(0)
                } else {
                    Elem(t.log[c as usize] as u64 + 1)
                }
            }
        }
    }

    /// Sort key for the coefficient-lexicographic order (constant term first).
    pub fn lex_key(&self, a: Elem) -> Vec<u64> {
        self.coeffs(a)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.repr {
            Repr::Prime => {
                let s = a.0 + b.0;
                let p = self.0.p as u64;
                Elem(if s >= p { s - p } else { s })
            }
            Repr::Log(t) => {
                if a.0 == 0 {
                    return b;
                }
                if b.0 == 0 {
                    return a;
                }
                let (la, lb) = (a.0 - 1, b.0 - 1);
                let d = if lb >= la { lb - la } else { lb + t.order - la };
                let z = t.zech[d as usize];
                if z == NO_LOG {
                    Elem(0)
                } else {
                    let s = la + z as u64;
                    Elem(if s >= t.order { s - t.order } else { s } + 1)
                }
            }
            Repr::Code => Elem(self.code_arith().add(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if a.0 == 0 {
            return a;
        }
        match &self.0.repr {
            Repr::Prime => Elem(self.0.p as u64 - a.0),
            Repr::Log(t) => {
                if self.0.p == 2 {
                    a
                } else {
                    let s = a.0 - 1 + t.order / 2;
                    Elem(if s >= t.order { s - t.order } else { s } + 1)
                }
            }
            Repr::Code => Elem(self.code_arith().neg(a.0)),
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.repr {
            Repr::Prime => Elem(a.0 * b.0 % self.0.p as u64),
            Repr::Log(t) => {
                if a.0 == 0 || b.0 == 0 {
                    return Elem(0);
                }
                let s = a.0 + b.0 - 2;
                Elem(if s >= t.order { s - t.order } else { s } + 1)
            }
            Repr::Code => Elem(self.code_arith().mul(a.0, b.0)),
        }
    }

    /// Multiplicative inverse. Panics on zero; use [`FieldElem`] for checked
    /// division.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a.0 != 0, "inverse of zero");
        match &self.0.repr {
            Repr::Prime => Elem(mod_inv(a.0, self.0.p as u64)),
            Repr::Log(t) => {
                let l = a.0 - 1;
                Elem(if l == 0 { 0 } else { t.order - l } + 1)
            }
            Repr::Code => Elem(self.code_arith().pow(a.0, self.0.size - 2)),
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return a;
        }
        match &self.0.repr {
            Repr::Log(t) => {
                let l = (a.0 - 1) as u128 * (e % t.order) as u128 % t.order as u128;
                Elem(l as u64 + 1)
            }
            _ => {
                let order = self.0.size - 1;
                let mut e = e % order;
                if e == 0 {
                    e = order;
                }
                let mut base = a;
                let mut acc = self.one();
                while e > 0 {
                    if e & 1 == 1 {
                        acc = self.mul(acc, base);
                    }
                    base = self.mul(base, base);
                    e >>= 1;
                }
                acc
            }
        }
    }

    /// `a^(p^e)`.
    pub fn frobenius(&self, a: Elem, e: u64) -> Elem {
        let e = e % self.0.m as u64;
        if e == 0 || self.0.m == 1 {
            return a;
        }
        self.pow(a, (self.0.p as u64).pow(e as u32))
    }

    /// Unique `p`-th root (inverse Frobenius).
    pub fn pth_root(&self, a: Elem) -> Elem {
        self.frobenius(a, self.0.m as u64 - 1)
    }

    /// True when `a` lies in the subfield with `p^d` elements.
    pub fn in_subfield(&self, a: Elem, d: u32) -> bool {
        d > 0 && self.0.m % d == 0 && self.frobenius(a, d as u64) == a
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.0.size).map(move |c| self.from_code(c))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        self.from_code(rng.gen_range(0..self.0.size))
    }

    /// A generator of the multiplicative group (smallest by code for table
    /// fields).
    pub fn primitive_element(&self) -> Elem {
        *self.0.primitive.get_or_init(|| match &self.0.repr {
            Repr::Log(_) => Elem(2),
            _ => {
                let order = self.0.size - 1;
                let primes: Vec<u64> = factor_u64(order).into_iter().map(|(q, _)| q).collect();
                (1..self.0.size)
                    .map(|c| self.from_code(c))
                    .find(|&g| primes.iter().all(|&q| self.pow(g, order / q) != self.one()))
                    .expect("multiplicative group is cyclic")
            }
        })
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_of(&self, a: Elem) -> u64 {
        assert!(a.0 != 0);
        let mut order = self.0.size - 1;
        for (q, _) in factor_u64(order) {
            while order % q == 0 && self.pow(a, order / q) == self.one() {
                order /= q;
            }
        }
        order
    }

    /// All `a` with `a^d = 1`; there are `gcd(d, p^m - 1)` of them.
    pub fn roots_of_unity(&self, d: u64) -> Vec<Elem> {
        assert!(d > 0);
        let order = self.0.size - 1;
        let e = gcd_u64(d, order);
        let g = self.primitive_element();
        let step = self.pow(g, order / e);
        let mut out = Vec::with_capacity(e as usize);
        let mut cur = self.one();
        for _ in 0..e {
            out.push(cur);
            cur = self.mul(cur, step);
        }
        out.sort_by_key(|&a| self.lex_key(a));
        out
    }

    pub fn fmt_elem(&self, a: Elem) -> String {
        if self.0.m == 1 {
            return a.0.to_string();
        }
        let c = self.coeffs(a);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| match (i, v) {
                (0, v) => v.to_string(),
                (1, 1) => "X".to_string(),
                (1, v) => format!("{v}X"),
                (i, 1) => format!("X^{i}"),
                (i, v) => format!("{v}X^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    pub fn elem(&self, value: Elem) -> FieldElem {
        FieldElem {
            field: self.clone(),
            value,
        }
    }

    pub fn ptr_eq(&self, other: &FieldSpec) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

fn build_tables(p: u64, m: usize, modulus: &[u32], size: u64) -> LogTables {
    let ca = CodeArith {
        p,
        m,
        modulus: modulus.iter().map(|&c| c as u64).collect(),
    };
    let order = size - 1;
    let primes: Vec<u64> = factor_u64(order).into_iter().map(|(q, _)| q).collect();
    let g = (2..size)
        .find(|&c| primes.iter().all(|&q| ca.pow(c, order / q) != 1))
        .expect("multiplicative group is cyclic");
    let mut exp = vec![0u32; order as usize];
    let mut log = vec![NO_LOG; size as usize];
    let mut cur = 1u64;
    for k in 0..order as usize {
        exp[k] = cur as u32;
        log[cur as usize] = k as u32;
        cur = ca.mul(cur, g);
    }
    debug_assert_eq!(cur, 1);
    let zech = exp
        .iter()
        .map(|&c| {
            // 1 + x only touches the constant coordinate.
            let c = c as u64;
            let c0 = c % p;
            let shifted = c - c0 + (c0 + 1) % p;
            if shifted == 0 {
                NO_LOG
            } else {
                log[shifted as usize]
            }
        })
        .collect();
    LogTables {
        exp,
        log,
        zech,
        order,
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus && self.0.m == other.0.m)
    }
}

impl Eq for FieldSpec {}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.m.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}[{:?}]", self.0.p, self.0.m, self.0.modulus)
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}", self.0.p, self.0.m)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An element bundled with its field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    field: FieldSpec,
    value: Elem,
}

impl FieldElem {
    pub fn new(field: &FieldSpec, value: Elem) -> Self {
        FieldElem {
            field: field.clone(),
            value,
        }
    }

    pub fn from_i64(field: &FieldSpec, v: i64) -> Self {
        FieldElem::new(field, field.from_i64(v))
    }

    pub fn from_coeffs(field: &FieldSpec, coeffs: &[u64]) -> Result<Self> {
        Ok(FieldElem::new(field, field.from_coeffs(coeffs)?))
    }

    /// The class of `X` in `F_p[X]/(modulus)` (for prime fields, 0... callers
    /// should not rely on it there).
    pub fn generator(field: &FieldSpec) -> Self {
        if field.is_prime_field() {
            FieldElem::new(field, field.zero())
        } else {
            FieldElem::new(field, field.from_code(field.p() as u64))
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u64> {
        self.field.coeffs(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value.0 == 0
    }

    pub fn arith(&self, other: &FieldElem, op: ArithOp) -> Result<FieldElem> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let k = &self.field;
        let (a, b) = (self.value, other.value);
        let value = match op {
            ArithOp::Add => k.add(a, b),
            ArithOp::Sub => k.sub(a, b),
            ArithOp::Mul => k.mul(a, b),
            ArithOp::Div => {
                if k.is_zero(b) {
                    return Err(Error::DivisionByZero);
                }
                k.div(a, b)
            }
        };
        Ok(FieldElem::new(k, value))
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.arith(other, ArithOp::Add)
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.arith(other, ArithOp::Sub)
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.arith(other, ArithOp::Mul)
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.arith(other, ArithOp::Div)
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem::new(&self.field, self.field.neg(self.value))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        FieldElem::new(&self.field, self.field.pow(self.value, e))
    }

    pub fn frobenius(&self, e: u64) -> FieldElem {
        FieldElem::new(&self.field, self.field.frobenius(self.value, e))
    }

    pub fn lift(&self, target: &FieldSpec) -> Result<FieldElem> {
        let v = crate::embed::lift(&self.field, self.value, target)?;
        Ok(FieldElem::new(target, v))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.field.fmt_elem(self.value), self.field)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.fmt_elem(self.value))
    }
}

/// `roots_of_unity` on a spec, returned with their field attached.
pub fn roots_of_unity(spec: &FieldSpec, d: u64) -> Vec<FieldElem> {
    spec.roots_of_unity(d)
        .into_iter()
        .map(|a| FieldElem::new(spec, a))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_smallest_irreducible(p: u64, m: usize) -> Vec<u32> {
        // Oracle: a monic polynomial of degree m is irreducible iff it has no
        // monic factor of degree 1..=m/2; test by trial division over all
        // monic candidates.
        let monics = |d: usize| -> Vec<Vec<u64>> {
            (0..p.pow(d as u32))
                .map(|mut n| {
                    let mut v = vec![0u64; d + 1];
                    for c in v.iter_mut().take(d) {
                        *c = n % p;
                        n /= p;
                    }
                    v[d] = 1;
                    v
                })
                .collect()
        };
        let mut cands = monics(m);
        cands.sort_by(|a, b| a[..m].cmp(&b[..m]));
        for f in cands {
            let reducible = (1..=m / 2).any(|d| monics(d).iter().any(|g| fp_rem(&f, g, p).is_empty()));
            if !reducible {
                return f.into_iter().map(|c| c as u32).collect();
            }
        }
        unreachable!()
    }

    #[test]
    fn make_field_examples() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(f3.size(), 3);
        assert!(f3.modulus().is_none());
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(f9.modulus().unwrap(), &[1, 0, 1]);
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NonPrimeCharacteristic(4));
    }

    #[test]
    fn modulus_matches_exhaustive_scan() {
        for &(p, m) in &[(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)] {
            let k = make_field(p, m).unwrap();
            assert_eq!(k.modulus().unwrap(), brute_smallest_irreducible(p, m as usize).as_slice(), "p={p} m={m}");
        }
    }

    #[test]
    fn arith_examples() {
        let f3 = make_field(3, 1).unwrap();
        let two = FieldElem::from_i64(&f3, 2);
        assert_eq!(two.mul(&two).unwrap(), FieldElem::from_i64(&f3, 1));

        let f9 = make_field(3, 2).unwrap();
        let x = FieldElem::generator(&f9);
        assert_eq!(x.mul(&x).unwrap(), FieldElem::from_i64(&f9, 2));

        let f5 = make_field(5, 1).unwrap();
        let q = FieldElem::from_i64(&f5, 3).div(&FieldElem::from_i64(&f5, 4)).unwrap();
        assert_eq!(q, FieldElem::from_i64(&f5, 2));

        let zero = FieldElem::from_i64(&f5, 0);
        assert_eq!(q.div(&zero).unwrap_err(), Error::DivisionByZero);
        assert_eq!(q.add(&x).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn frobenius_examples() {
        let f3 = make_field(3, 1).unwrap();
        for a in f3.elements() {
            assert_eq!(f3.frobenius(a, 1), a);
        }
        let f9 = make_field(3, 2).unwrap();
        let x = FieldElem::generator(&f9);
        assert_eq!(x.frobenius(1), FieldElem::from_coeffs(&f9, &[0, 2]).unwrap());
        assert_eq!(x.frobenius(0), x);
    }

    #[test]
    fn roots_of_unity_examples() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(f3.roots_of_unity(1), vec![f3.one()]);
        let f25 = make_field(5, 2).unwrap();
        let brute: Vec<Elem> = f25.elements().filter(|&a| !f25.is_zero(a) && f25.pow(a, 3) == f25.one()).collect();
        assert_eq!(brute.len(), 3);
        assert_eq!(f25.roots_of_unity(3).len(), 3);
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.roots_of_unity(3), vec![f5.one()]);
    }

    /// Field axioms on random triples, across all three representations.
    #[test]
    fn field_axioms_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let fields = [
            make_field(3, 1).unwrap(),
            make_field(7, 3).unwrap(),
            make_field(2, 5).unwrap(),
            make_field(3, 14).unwrap(), // code representation
            make_field(2147483647, 1).unwrap(),
        ];
        for k in &fields {
            for _ in 0..1000 {
                let (a, b, c) = (k.random(&mut rng), k.random(&mut rng), k.random(&mut rng));
                assert_eq!(k.add(a, b), k.add(b, a));
                assert_eq!(k.mul(a, b), k.mul(b, a));
                assert_eq!(k.add(k.add(a, b), c), k.add(a, k.add(b, c)));
                assert_eq!(k.mul(k.mul(a, b), c), k.mul(a, k.mul(b, c)));
                assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
                assert_eq!(k.sub(k.add(a, b), b), a);
                if !k.is_zero(b) {
                    assert_eq!(k.mul(k.div(a, b), b), a);
                }
            }
        }
    }

    #[test]
    fn representations_agree_on_codes() {
        // The same field built as log tables and as code arithmetic must agree.
        let k = make_field(5, 3).unwrap();
        let ca = k.code_arith();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let (a, b) = (k.random(&mut rng), k.random(&mut rng));
            assert_eq!(k.code(k.mul(a, b)), ca.mul(k.code(a), k.code(b)));
            assert_eq!(k.code(k.add(a, b)), ca.add(k.code(a), k.code(b)));
        }
    }

    #[test]
    fn frobenius_is_homomorphism_and_periodic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in [make_field(3, 4).unwrap(), make_field(5, 2).unwrap(), make_field(3, 14).unwrap()] {
            for _ in 0..200 {
                let (a, b) = (k.random(&mut rng), k.random(&mut rng));
                assert_eq!(k.frobenius(a, k.m() as u64), a);
                assert_eq!(k.frobenius(k.mul(a, b), 1), k.mul(k.frobenius(a, 1), k.frobenius(b, 1)));
                assert_eq!(k.frobenius(k.add(a, b), 1), k.add(k.frobenius(a, 1), k.frobenius(b, 1)));
                assert_eq!(k.frobenius(k.pth_root(a), 1), a);
            }
        }
    }

    #[test]
    fn roots_of_unity_count_matches_gcd() {
        for k in [make_field(5, 2).unwrap(), make_field(3, 4).unwrap(), make_field(7, 1).unwrap(), make_field(3, 14).unwrap()] {
            for d in [1u64, 2, 3, 4, 5, 8, 13, 16, 40] {
                if d % k.p() as u64 == 0 {
                    continue;
                }
                let r = k.roots_of_unity(d);
                assert_eq!(r.len() as u64, gcd_u64(d, k.size() - 1));
                assert!(r.iter().all(|&a| k.pow(a, d) == k.one()));
            }
        }
    }

    #[test]
    fn custom_modulus_checked() {
        assert!(FieldSpec::with_modulus(3, &[1, 0, 1]).is_ok());
        assert_eq!(FieldSpec::with_modulus(3, &[2, 0, 1]).unwrap_err(), Error::ReducibleModulus(2));
        let k = FieldSpec::with_modulus(3, &[2, 1, 1]).unwrap();
        assert_eq!(k.m(), 2);
        assert_ne!(k, make_field(3, 2).unwrap());
    }
}
