//! Small dense complex matrix helpers.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * c(0.5, 0.0)
}

pub fn hermiticity_error(m: &CMat) -> f64 {
    (m - m.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `Re Tr(a b)`.
pub fn trace_product(a: &CMat, b: &CMat) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let x = a[(i, j)];
            let y = b[(j, i)];
            s += x.re * y.re - x.im * y.im;
        }
    }
    s
}

pub fn trace_re(a: &CMat) -> f64 {
    a.diagonal().iter().map(|v| v.re).sum()
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let e = SymmetricEigen::new(hermitian_part(m));
    let mut idx: Vec<usize> = (0..e.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let vals = idx.iter().map(|&i| e.eigenvalues[i]).collect();
    let vecs = CMat::from_columns(&idx.iter().map(|&i| e.eigenvectors.column(i).into_owned()).collect::<Vec<_>>());
    (vals, vecs)
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    eigh(m).0[0]
}

/// Applies `f` to the eigenvalues of a Hermitian matrix.
pub fn spectral_map(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = eigh(m);
    let d = CMat::from_diagonal(&DVector::from_iterator(vals.len(), vals.iter().map(|&v| c(f(v), 0.0))));
    &vecs * d * vecs.adjoint()
}

/// Nearest PSD matrix in Frobenius norm.
pub fn psd_part(m: &CMat) -> CMat {
    spectral_map(m, |v| v.max(0.0))
}

/// Projector onto the eigenspace of strictly positive eigenvalues.
pub fn positive_projector(m: &CMat) -> CMat {
    spectral_map(m, |v| if v > 0.0 { 1.0 } else { 0.0 })
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_ket(a: &CVec, b: &CVec) -> CVec {
    CVec::from_iterator(a.len() * b.len(), a.iter().flat_map(|x| b.iter().map(move |y| x * y)))
}

pub fn kron_all(ms: &[&CMat]) -> CMat {
    let mut out = CMat::identity(1, 1);
    for m in ms {
        out = kron(&out, m);
    }
    out
}

pub fn ket_to_density(v: &CVec) -> CMat {
    v * v.adjoint()
}

pub fn normalized(v: &CVec) -> CVec {
    v / c(v.norm(), 0.0)
}

/// Haar-random pure state of dimension `d`.
pub fn haar_ket<R: Rng>(rng: &mut R, d: usize) -> CVec {
    let v = CVec::from_iterator(d, (0..d).map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal))));
    normalized(&v)
}

/// Trace norm of a Hermitian matrix.
pub fn trace_norm(m: &CMat) -> f64 {
    eigh(m).0.iter().map(|v| v.abs()).sum()
}

/// `Tr_{others}[(ρ_others ⊗ 1_i) M]` for operator `m` on `⊗_j C^{dims[j]}`, where
/// `others[j]` is `Some(ρ_j)` for every `j != i`.
pub fn reduced_operator(m: &CMat, dims: &[usize], i: usize, others: &[Option<&CMat>]) -> CMat {
    let total: usize = dims.iter().product();
    assert_eq!(m.nrows(), total);
    let di = dims[i];
    let digits = |mut k: usize| -> Vec<usize> {
        let mut out = vec![0; dims.len()];
        for j in (0..dims.len()).rev() {
            out[j] = k % dims[j];
            k /= dims[j];
        }
        out
    };
    // (ρ_others ⊗ 1)[r, s] is nonzero only when the i-th digits agree.
    let mut out = CMat::zeros(di, di);
    let idx: Vec<Vec<usize>> = (0..total).map(digits).collect();
    for r in 0..total {
        for s in 0..total {
            let (dr, ds) = (&idx[r], &idx[s]);
            // Tr[(K) M] with K = ρ_others ⊗ |a><b|: out[b, a] accumulates K-weight * M[s, r]
            let mut w = c(1.0, 0.0);
            for (j, o) in others.iter().enumerate() {
                if j == i {
                    continue;
                }
                w *= o.expect("state for every other sender")[(dr[j], ds[j])];
                if w == c(0.0, 0.0) {
                    break;
                }
            }
            if w != c(0.0, 0.0) {
                out[(ds[i], dr[i])] += w * m[(s, r)];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn reduced_operator_matches_full_trace() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let dims = [2, 3];
        let a = ket_to_density(&haar_ket(&mut rng, 2));
        let b = ket_to_density(&haar_ket(&mut rng, 3));
        let g = CMat::from_fn(6, 6, |_, _| c(rng.gen::<f64>(), rng.gen::<f64>()));
        let m = hermitian_part(&g);
        let full = trace_product(&kron(&a, &b), &m);
        let r0 = reduced_operator(&m, &dims, 0, &[None, Some(&b)]);
        let r1 = reduced_operator(&m, &dims, 1, &[Some(&a), None]);
        assert!((trace_product(&a, &r0) - full).abs() < 1e-12);
        assert!((trace_product(&b, &r1) - full).abs() < 1e-12);
        assert!(hermiticity_error(&r0) < 1e-12);
    }

    #[test]
    fn spectral_helpers() {
        let m = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 2.0), c(0.0, -2.0), c(1.0, 0.0)]);
        let (vals, _) = eigh(&m);
        assert!((vals[0] + 1.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
        assert!(min_eigenvalue(&psd_part(&m)) > -1e-12);
        assert!((trace_norm(&m) - 4.0).abs() < 1e-12);
        let p = positive_projector(&m);
        assert!(((&p * &p) - &p).norm() < 1e-12);
    }
}
