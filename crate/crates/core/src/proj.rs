//! Points of `P^N` and lines in Plücker form.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};

/// A point of `P^N`, scaled so the first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    field: FieldSpec,
    coords: Vec<Elem>,
}

fn normalize(k: &FieldSpec, v: &mut [Elem]) -> bool {
    let Some(&lead) = v.iter().find(|&&c| !k.is_zero(c)) else {
        return false;
    };
    let inv = k.inv(lead);
    for c in v.iter_mut() {
        *c = k.mul(*c, inv);
    }
    true
}

impl ProjPoint {
    pub fn new(field: &FieldSpec, mut coords: Vec<Elem>) -> Result<ProjPoint> {
        if !normalize(field, &mut coords) {
            return Err(Error::ZeroPoint);
        }
        Ok(ProjPoint {
            field: field.clone(),
            coords,
        })
    }

    pub fn from_i64s(field: &FieldSpec, coords: &[i64]) -> Result<ProjPoint> {
        ProjPoint::new(field, coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    /// Ambient dimension `N`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|&c| self.field.fmt_elem(c)).collect();
        write!(f, "({})", parts.join(":"))
    }
}

/// Index pairs `(i, j)`, `i < j < n`, in the order used for Plücker vectors.
pub fn pair_indices(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

/// Position of `(i, j)` (`i < j`) among [`pair_indices`]`(n)`.
pub fn pair_pos(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Wedge product `a ∧ b` of two vectors, indexed by [`pair_indices`].
pub fn wedge(k: &FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len();
    pair_indices(n)
        .into_iter()
        .map(|(i, j)| k.sub(k.mul(a[i], b[j]), k.mul(a[j], b[i])))
        .collect()
}

/// Components of `ω ∧ x` for a 2-vector `ω` and a vector `x`, indexed by
/// triples `i < j < l`. All vanish iff `x` lies in the span of `ω`.
pub fn wedge3<'a>(k: &'a FieldSpec, omega: &'a [Elem], x: &[Elem]) -> impl Iterator<Item = Elem> + 'a {
    let n = x.len();
    let x = x.to_vec();
    (0..n).flat_map(move |i| {
        let x = x.clone();
        (i + 1..n).flat_map(move |j| {
            let x = x.clone();
            (j + 1..n).map(move |l| {
                let a = k.mul(omega[pair_pos(n, i, j)], x[l]);
                let b = k.mul(omega[pair_pos(n, i, l)], x[j]);
                let c = k.mul(omega[pair_pos(n, j, l)], x[i]);
                k.add(k.sub(a, b), c)
            })
        })
    })
}

/// A line of `P^N` by its Plücker coordinates `p_ij`, `i < j`, normalized
/// like [`ProjPoint`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlueckerLine {
    field: FieldSpec,
    n: usize,
    pl: Vec<Elem>,
}

impl PlueckerLine {
    /// Build from raw coordinates, checking they are nonzero and decomposable.
    pub fn from_coords(field: &FieldSpec, n: usize, mut pl: Vec<Elem>) -> Result<PlueckerLine> {
        if pl.len() != n * (n - 1) / 2 {
            return Err(Error::DegenerateInput(format!("expected {} Plücker coordinates", n * (n - 1) / 2)));
        }
        if !normalize(field, &mut pl) {
            return Err(Error::ZeroPoint);
        }
        let line = PlueckerLine {
            field: field.clone(),
            n,
            pl,
        };
        if !line.is_decomposable() {
            return Err(Error::DegenerateInput("Plücker relations fail".into()));
        }
        Ok(line)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coords(&self) -> &[Elem] {
        &self.pl
    }

    pub fn p(&self, i: usize, j: usize) -> Elem {
        let k = &self.field;
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.pl[pair_pos(self.n, i, j)],
            std::cmp::Ordering::Greater => k.neg(self.pl[pair_pos(self.n, j, i)]),
            std::cmp::Ordering::Equal => k.zero(),
        }
    }

    /// All components of `ω ∧ ω` vanish.
    pub fn is_decomposable(&self) -> bool {
        let k = &self.field;
        let n = self.n;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        let v = k.add(
                            k.sub(k.mul(self.p(a, b), self.p(c, d)), k.mul(self.p(a, c), self.p(b, d))),
                            k.mul(self.p(a, d), self.p(b, c)),
                        );
                        if !k.is_zero(v) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Two points spanning the line: rows of the contraction matrix
    /// `(p_ij)_j` for the two indices `i` with the most useful pivots.
    pub fn spanning_points(&self) -> (ProjPoint, ProjPoint) {
        let k = &self.field;
        let n = self.n;
        let (a, b) = pair_indices(n)
            .into_iter()
            .find(|&(i, j)| !k.is_zero(self.p(i, j)))
            .expect("nonzero line");
        // Rows i = a and i = b of the matrix (p_ij)_j span the line.
        let row = |i: usize| (0..n).map(|j| self.p(i, j)).collect::<Vec<_>>();
        let r1 = ProjPoint::new(k, row(a)).expect("nonzero row");
        let r2 = ProjPoint::new(k, row(b)).expect("nonzero row");
        (r1, r2)
    }
}

impl fmt::Debug for PlueckerLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pl.iter().map(|&c| self.field.fmt_elem(c)).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// The line through two distinct points.
pub fn span_line(a: &ProjPoint, b: &ProjPoint) -> Result<PlueckerLine> {
    if a.field != b.field || a.coords.len() != b.coords.len() {
        return Err(Error::FieldMismatch);
    }
    let k = &a.field;
    let mut pl = wedge(k, &a.coords, &b.coords);
    if !normalize(k, &mut pl) {
        return Err(Error::CoincidentPoints);
    }
    Ok(PlueckerLine {
        field: k.clone(),
        n: a.coords.len(),
        pl,
    })
}

/// Whether `q` lies on `line`: every component of `ω ∧ q` vanishes.
pub fn on_line(q: &ProjPoint, line: &PlueckerLine) -> bool {
    assert_eq!(q.coords.len(), line.n, "dimension mismatch");
    let k = &line.field;
    wedge3(k, &line.pl, &q.coords).all(|c| k.is_zero(c))
}
