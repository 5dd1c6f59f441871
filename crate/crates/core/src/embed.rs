//! Embeddings `F_{p^a} -> F_{p^c}` for `a | c`.
//!
//! The image of the source generator is the coefficient-lexicographically
//! smallest root of the source modulus in the target that is compatible with
//! the embeddings already fixed for every intermediate subfield, so lifting
//! through a tower agrees with lifting directly. Results are cached per
//! (source, target) pair.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::field::{make_field, Elem, FieldElem, FieldSpec};
use crate::poly::Poly;

#[derive(Debug)]
pub struct Embedding {
    source: FieldSpec,
    target: FieldSpec,
    /// Images of 1, X, X^2, ... of the source power basis.
    basis: Vec<Elem>,
}

impl Embedding {
    pub fn source(&self) -> &FieldSpec {
        &self.source
    }

    pub fn target(&self) -> &FieldSpec {
        &self.target
    }

    pub fn apply(&self, a: Elem) -> Elem {
        let t = &self.target;
        if self.source == self.target {
            return a;
        }
        if self.source.is_prime_field() {
            return t.from_code(self.source.code(a));
        }
        let mut acc = t.zero();
        for (c, &b) in self.source.coeffs(a).into_iter().zip(&self.basis) {
            if c != 0 {
                acc = t.add(acc, t.mul(t.from_code(c), b));
            }
        }
        acc
    }
}

type Cache = Mutex<HashMap<(FieldSpec, FieldSpec), Arc<Embedding>>>;

fn cache() -> &'static Cache {
    static C: OnceLock<Cache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn basis_from_root(target: &FieldSpec, r: Elem, m: usize) -> Vec<Elem> {
    let mut out = Vec::with_capacity(m);
    let mut cur = target.one();
    for _ in 0..m {
        out.push(cur);
        cur = target.mul(cur, r);
    }
    out
}

pub fn embedding(source: &FieldSpec, target: &FieldSpec) -> Result<Arc<Embedding>> {
    if source.p() != target.p() || target.m() % source.m() != 0 {
        return Err(Error::NotAnExtension {
            p: source.p(),
            source_m: source.m(),
            target_m: target.m(),
        });
    }
    let key = (source.clone(), target.clone());
    if let Some(e) = cache().lock().unwrap().get(&key) {
        return Ok(e.clone());
    }
    let m = source.m() as usize;
    let basis = if source == target {
        basis_from_root(target, FieldElem::generator(target).value(), m)
    } else if source.is_prime_field() {
        vec![target.one()]
    } else {
        choose_basis(source, target)?
    };
    let e = Arc::new(Embedding {
        source: source.clone(),
        target: target.clone(),
        basis,
    });
    cache().lock().unwrap().insert(key, e.clone());
    Ok(e)
}

fn choose_basis(source: &FieldSpec, target: &FieldSpec) -> Result<Vec<Elem>> {
    let m = source.m() as usize;
    let modulus: Vec<Elem> = source
        .modulus()
        .expect("extension field")
        .iter()
        .map(|&c| target.from_i64(c as i64))
        .collect();
    let roots = Poly::new(target, modulus).roots();
    let p = source.p() as u64;
    // Intermediate subfields F_{p^b}, 1 < b < m, b | m.
    let mut checks = Vec::new();
    for b in 2..m as u32 {
        if source.m() % b != 0 {
            continue;
        }
        let sub = make_field(p, b)?;
        let into_source = embedding(&sub, source)?;
        let into_target = embedding(&sub, target)?;
        let gen = FieldElem::generator(&sub).value();
        checks.push((into_source.apply(gen), into_target.apply(gen)));
    }
    for r in roots {
        let basis = basis_from_root(target, r, m);
        let candidate = Embedding {
            source: source.clone(),
            target: target.clone(),
            basis,
        };
        if checks.iter().all(|&(s, t)| candidate.apply(s) == t) {
            return Ok(candidate.basis);
        }
    }
    unreachable!("a tower-compatible embedding always exists")
}

/// Image of `a` (an element of `source`) in the extension `target`.
pub fn lift(source: &FieldSpec, a: Elem, target: &FieldSpec) -> Result<Elem> {
    Ok(embedding(source, target)?.apply(a))
}

type InvCache = Mutex<HashMap<(FieldSpec, FieldSpec), Arc<HashMap<Elem, Elem>>>>;

/// Preimage of `a` (an element of `target`) under the embedding of `source`,
/// if `a` lies in the image. Non-prime sources use a table over all of
/// `source`, so they must be small.
pub fn descend(source: &FieldSpec, target: &FieldSpec, a: Elem) -> Result<Option<Elem>> {
    if source == target {
        return Ok(Some(a));
    }
    let emb = embedding(source, target)?;
    if source.is_prime_field() {
        let c = target.code(a);
        return Ok((c < source.p() as u64).then(|| source.from_code(c)));
    }
    static C: OnceLock<InvCache> = OnceLock::new();
    let cache = C.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (source.clone(), target.clone());
    let table = {
        let hit = cache.lock().unwrap().get(&key).cloned();
        match hit {
            Some(t) => t,
            None => {
                let t: HashMap<Elem, Elem> = source.elements().map(|x| (emb.apply(x), x)).collect();
                let t = Arc::new(t);
                cache.lock().unwrap().insert(key, t.clone());
                t
            }
        }
    };
    Ok(table.get(&a).copied())
}
