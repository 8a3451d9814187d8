//! Small dense linear algebra over GF(q): reduced echelon forms, null
//! spaces, and coordinate solves. Everything here works on row vectors of
//! `Elt` and is deterministic.

use crate::gf::{Elt, Field};
use alloc::vec::Vec;

/// Reduced row echelon form; zero rows are dropped. The result is the
/// canonical basis of the row space.
pub(crate) fn rref(f: &Field, mut rows: Vec<Vec<Elt>>) -> Vec<Vec<Elt>> {
    if rows.is_empty() {
        return rows;
    }
    let ncols = rows[0].len();
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(r) = (pivot_row..rows.len()).find(|&r| rows[r][col] != Elt(0)) else {
            continue;
        };
        rows.swap(pivot_row, r);
        let inv = f.inv(rows[pivot_row][col]).expect("pivot is nonzero");
        for v in rows[pivot_row].iter_mut() {
            *v = f.mul(*v, inv);
        }
        for r in 0..rows.len() {
            if r != pivot_row && rows[r][col] != Elt(0) {
                let factor = rows[r][col];
                for c in 0..ncols {
                    let sub = f.mul(factor, rows[pivot_row][c]);
                    rows[r][c] = f.sub(rows[r][c], sub);
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.retain(|r| r.iter().any(|&v| v != Elt(0)));
    rows
}

/// Canonical basis (RREF) of the solution space of `rows * x = 0`.
pub(crate) fn nullspace(f: &Field, rows: &[Vec<Elt>], ncols: usize) -> Vec<Vec<Elt>> {
    let reduced = rref(f, rows.to_vec());
    let mut pivot_cols = Vec::new();
    for row in &reduced {
        let col = row.iter().position(|&v| v != Elt(0)).expect("no zero rows after rref");
        pivot_cols.push(col);
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = alloc::vec![Elt(0); ncols];
        v[free] = Elt(1);
        for (row, &pc) in reduced.iter().zip(&pivot_cols) {
            v[pc] = f.neg(row[free]);
        }
        basis.push(v);
    }
    rref(f, basis)
}

/// Coefficients `c` with `sum c_i basis_i = target`, if the target lies in
/// the span.
pub(crate) fn coords_in_basis(
    f: &Field,
    basis: &[Vec<Elt>],
    target: &[Elt],
) -> Option<Vec<Elt>> {
    let n = basis.len();
    if n == 0 {
        return None;
    }
    let dim = target.len();
    // augmented system: columns are the basis vectors
    let mut m: Vec<Vec<Elt>> = (0..dim)
        .map(|row| {
            let mut r: Vec<Elt> = basis.iter().map(|b| b[row]).collect();
            r.push(target[row]);
            r
        })
        .collect();
    let mut pivot_of_col = alloc::vec![usize::MAX; n];
    let mut pivot_row = 0;
    for col in 0..n {
        let Some(r) = (pivot_row..dim).find(|&r| m[r][col] != Elt(0)) else {
            continue;
        };
        m.swap(pivot_row, r);
        let inv = f.inv(m[pivot_row][col]).expect("pivot is nonzero");
        for v in m[pivot_row].iter_mut() {
            *v = f.mul(*v, inv);
        }
        for r in 0..dim {
            if r != pivot_row && m[r][col] != Elt(0) {
                let factor = m[r][col];
                for c in col..=n {
                    let sub = f.mul(factor, m[pivot_row][c]);
                    m[r][c] = f.sub(m[r][c], sub);
                }
            }
        }
        pivot_of_col[col] = pivot_row;
        pivot_row += 1;
    }
    // inconsistent rows mean the target is outside the span
    for r in pivot_row..dim {
        if m[r][n] != Elt(0) {
            return None;
        }
    }
    let mut c = alloc::vec![Elt(0); n];
    for (col, &pr) in pivot_of_col.iter().enumerate() {
        if pr != usize::MAX {
            c[col] = m[pr][n];
        }
    }
    Some(c)
}

/// Matrix * vector over GF(q); `m` is row-major.
pub(crate) fn mat_vec(f: &Field, m: &[Vec<Elt>], v: &[Elt]) -> Vec<Elt> {
    m.iter()
        .map(|row| {
            let mut acc = Elt(0);
            for (a, b) in row.iter().zip(v) {
                acc = f.add(acc, f.mul(*a, *b));
            }
            acc
        })
        .collect()
}
