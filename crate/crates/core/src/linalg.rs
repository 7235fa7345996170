//! Small dense linear algebra over ℚ, used to reason about coordinate
//! subgroups of value groups.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Row-reduced echelon form of an augmented system. Returns the reduced
/// rows and the pivot column of each nonzero row.
fn rref(mut m: Vec<Vec<BigRational>>, cols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = BigRational::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    rref(rows.to_vec(), cols).1.len()
}

/// Some `x` with `rows · x = rhs`, or `None` when inconsistent.
pub fn solve(rows: &[Vec<BigRational>], rhs: &[BigRational], n: usize) -> Option<Vec<BigRational>> {
    let aug: Vec<Vec<BigRational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let (red, pivots) = rref(aug, n + 1);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (row, &c) in red.iter().zip(pivots.iter()) {
        x[c] = row[n].clone();
    }
    Some(x)
}

/// A basis of `{x : rows · x = 0}` in ℚⁿ.
pub fn nullspace(rows: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigRational>> {
    let (red, pivots) = if rows.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        rref(rows.to_vec(), n)
    };
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); n];
        v[free] = BigRational::one();
        for (row, &c) in red.iter().zip(pivots.iter()) {
            v[c] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}
