//! Double-description enumeration of the extreme rays of `{x : A x >= 0}`.
//!
//! Rows are inserted in the order given. Adjacency of a positive/negative ray
//! pair is decided algebraically: the rows tight on both must have rank
//! `dim - 2`.

use super::int::{dot, make_primitive, Echelon, ExactInt};
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum DdFailure {
    /// `i128` arithmetic overflowed; retry with `BigInt`.
    Overflow,
    /// The constraint rows do not span the space, so the cone has a lineality space.
    Lineality,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn with_capacity(bits: usize) -> Self {
        Self { words: vec![0; bits.div_ceil(64)] }
    }
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }
    pub fn intersect_count(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }
    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut b = bits;
            std::iter::from_fn(move || {
                if b == 0 {
                    return None;
                }
                let t = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(w * 64 + t)
            })
        })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Ray<T> {
    pub coords: Vec<T>,
    pub zeros: BitSet,
}

pub(crate) fn extreme_rays<T: ExactInt>(rows: &[Vec<T>], dim: usize) -> Result<Vec<Ray<T>>, DdFailure> {
    // Initial simplicial cone from the first `dim` independent rows.
    let mut ech = Echelon::<T>::new();
    let mut basis = Vec::with_capacity(dim);
    for (i, r) in rows.iter().enumerate() {
        if ech.push(r).ok_or(DdFailure::Overflow)? {
            basis.push(i);
            if basis.len() == dim {
                break;
            }
        }
    }
    if basis.len() < dim {
        return Err(DdFailure::Lineality);
    }
    let mut rays = initial_rays(rows, &basis, dim)?;
    let mut processed = BitSet::with_capacity(rows.len());
    for &b in &basis {
        processed.insert(b);
    }

    for (i, row) in rows.iter().enumerate() {
        if processed.contains(i) {
            continue;
        }
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut vals = Vec::with_capacity(rays.len());
        for (k, ray) in rays.iter().enumerate() {
            let v = dot(row, &ray.coords).ok_or(DdFailure::Overflow)?;
            if v.is_positive() {
                pos.push(k);
            } else if v.is_negative() {
                neg.push(k);
            }
            vals.push(v);
        }
        processed.insert(i);
        if neg.is_empty() {
            for (ray, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    ray.zeros.insert(i);
                }
            }
            continue;
        }

        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let zp = &rays[p].zeros;
                let zn = &rays[n].zeros;
                if zp.intersect_count(zn) + 2 < dim {
                    continue;
                }
                let common = zp.intersection(zn);
                if !adjacent(rows, &common, dim)? {
                    continue;
                }
                let vp = &vals[p];
                let vn = vals[n].checked_neg().ok_or(DdFailure::Overflow)?;
                let mut coords = Vec::with_capacity(dim);
                for (a, b) in rays[n].coords.iter().zip(&rays[p].coords) {
                    let t = a.checked_mul(vp).ok_or(DdFailure::Overflow)?;
                    let u = b.checked_mul(&vn).ok_or(DdFailure::Overflow)?;
                    coords.push(t.checked_add(&u).ok_or(DdFailure::Overflow)?);
                }
                make_primitive(&mut coords);
                let mut zeros = common;
                zeros.insert(i);
                fresh.push(Ray { coords, zeros });
            }
        }

        let mut next = Vec::with_capacity(pos.len() + fresh.len() + rays.len() - pos.len() - neg.len());
        for (ray, v) in rays.into_iter().zip(vals) {
            if v.is_negative() {
                continue;
            }
            let mut ray = ray;
            if v.is_zero() {
                ray.zeros.insert(i);
            }
            next.push(ray);
        }
        next.extend(fresh);
        rays = next;
    }
    Ok(rays)
}

fn adjacent<T: ExactInt>(rows: &[Vec<T>], common: &BitSet, dim: usize) -> Result<bool, DdFailure> {
    let target = dim - 2;
    if target == 0 {
        return Ok(true);
    }
    let mut ech = Echelon::<T>::new();
    for j in common.iter() {
        ech.push(&rows[j]).ok_or(DdFailure::Overflow)?;
        if ech.rank() == target {
            return Ok(true);
        }
    }
    Ok(false)
}

fn initial_rays<T: ExactInt>(rows: &[Vec<T>], basis: &[usize], dim: usize) -> Result<Vec<Ray<T>>, DdFailure> {
    // Column j of B^{-1} satisfies B_i . r_j = delta_ij.
    let b: Vec<Vec<BigRational>> = basis
        .iter()
        .map(|&i| rows[i].iter().map(|v| BigRational::from_integer(v.to_big())).collect())
        .collect();
    let mut rays = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut rhs = vec![BigRational::zero(); dim];
        rhs[j] = BigRational::from_integer(1.into());
        let col = super::linalg::solve(&b, &rhs).ok_or(DdFailure::Lineality)?;
        let ints = crate::rational::primitive_integer_vector(&col);
        let coords = ints
            .iter()
            .map(|v| T::from_big(v).ok_or(DdFailure::Overflow))
            .collect::<Result<Vec<_>, _>>()?;
        let mut zeros = BitSet::with_capacity(rows.len());
        for (k, &bi) in basis.iter().enumerate() {
            if k != j {
                zeros.insert(bi);
            }
        }
        rays.push(Ray { coords, zeros });
    }
    Ok(rays)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut rays: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
        rays.sort();
        rays
    }

    #[test]
    fn positive_orthant() {
        let rows = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let rays = extreme_rays::<i128>(&rows, 3).unwrap();
        let got = sorted(rays.into_iter().map(|r| r.coords).collect());
        assert_eq!(got, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
    }

    #[test]
    fn square_cone_has_four_rays() {
        // t >= 0 implied; x >= 0, y >= 0, t - x >= 0, t - y >= 0 in (t, x, y).
        let rows = vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, -1, 0], vec![1, 0, -1]];
        let rays = extreme_rays::<i128>(&rows, 3).unwrap();
        let got = sorted(rays.into_iter().map(|r| r.coords).collect());
        assert_eq!(got, vec![vec![1, 0, 0], vec![1, 0, 1], vec![1, 1, 0], vec![1, 1, 1]]);
    }

    #[test]
    fn lineality_is_detected() {
        let rows = vec![vec![1, 0, 0], vec![0, 1, 0]];
        assert_eq!(extreme_rays::<i128>(&rows, 3).unwrap_err(), DdFailure::Lineality);
    }

    #[test]
    fn bigint_backend_agrees() {
        let rows = vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, -1, 0], vec![1, 0, -1], vec![3, -2, -2]];
        let small = sorted(extreme_rays::<i128>(&rows, 3).unwrap().into_iter().map(|r| r.coords).collect());
        let big_rows: Vec<Vec<num_bigint::BigInt>> =
            rows.iter().map(|r| r.iter().map(|&v| v.into()).collect()).collect();
        let mut big: Vec<Vec<i128>> = extreme_rays(&big_rows, 3)
            .unwrap()
            .into_iter()
            .map(|r| r.coords.iter().map(|v| i128::try_from(v).unwrap()).collect())
            .collect();
        big.sort();
        assert_eq!(small, big);
    }
}
