//! Dense linear algebra over a finite field.

use crate::field::{Elem, FieldSpec};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(k: &FieldSpec, rows: &mut Vec<Vec<Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| !k.is_zero(rows[i][c])) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = k.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = k.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || k.is_zero(row[c]) {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                if !k.is_zero(y) {
                    *x = k.sub(*x, k.mul(f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(k: &FieldSpec, rows: &[Vec<Elem>]) -> usize {
    let mut m = rows.to_vec();
    rref(k, &mut m).len()
}

/// A basis of `{x : M x = 0}`.
pub fn nullspace(k: &FieldSpec, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut m = rows.to_vec();
    let pivots = rref(k, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![k.zero(); ncols];
            v[f] = k.one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = k.neg(row[f]);
            }
            v
        })
        .collect()
}
