//! Exact rational row reduction.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<BigRational>>, ncols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = BigRational::one() / &rows[r][c];
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: Vec<Vec<BigRational>>, ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of the right null space `{w : M w = 0}`.
pub fn nullspace(rows: Vec<Vec<BigRational>>, ncols: usize) -> Vec<Vec<BigRational>> {
    let (red, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut w = vec![BigRational::zero(); ncols];
            w[f] = BigRational::one();
            for (row, &p) in red.iter().zip(&pivots) {
                w[p] = -row[f].clone();
            }
            w
        })
        .collect()
}

/// Solves the square system `M x = b`; `None` if singular.
pub fn solve(m: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = m.len();
    let aug: Vec<Vec<BigRational>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect())
        .collect();
    let (red, pivots) = rref(aug, n + 1);
    if pivots.len() != n || pivots.iter().any(|&p| p == n) {
        return None;
    }
    Some(red.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(a.clone(), 3), 2);
        let ns = nullspace(a.clone(), 3);
        assert_eq!(ns.len(), 1);
        for row in &a {
            let dot: BigRational = row.iter().zip(&ns[0]).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solves_square_systems() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![crate::rational::ratio(4, 5), crate::rational::ratio(7, 5)]);
        assert!(solve(&m(&[&[1, 1], &[2, 2]]), &[int(1), int(2)]).is_none());
    }
}
