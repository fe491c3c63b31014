//! Exact Gaussian elimination over [`Scalar`].

use crate::scalar::Scalar;

/// The unique `x` with `rows · x = rhs`, or `None` if the system is
/// inconsistent or underdetermined.
pub fn solve(rows: &[Vec<Scalar>], rhs: &[Scalar]) -> Option<Vec<Scalar>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Scalar>> =
        rows.iter().zip(rhs).map(|(r, b)| r.iter().cloned().chain(std::iter::once(b.clone())).collect()).collect();
    let mut pivots = Vec::with_capacity(cols);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            return None;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().ok()?;
        for x in m[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(r);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&i| m[i][cols].clone()).collect())
}
