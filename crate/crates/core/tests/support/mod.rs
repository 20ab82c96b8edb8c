//! Test-only oracles, written independently of the library's solver and
//! linear algebra.

#![allow(dead_code)]

use edtransfer::linalg::C64;
use edtransfer::polyalg::MultiPoly;
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn cgauss<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn rgauss<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Dense polynomial of total degree `d` in `n` variables with complex
/// Gaussian coefficients.
pub fn random_dense_poly<R: Rng>(n: usize, d: u32, rng: &mut R) -> MultiPoly {
    let mut exps: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..n {
        exps = exps
            .into_iter()
            .flat_map(|e| (0..=d).map(move |k| {
                let mut e2 = e.clone();
                e2.push(k);
                e2
            }))
            .filter(|e| e.iter().sum::<u32>() <= d)
            .collect();
    }
    MultiPoly::from_terms(n, exps.into_iter().map(|e| (e, cgauss(rng)))).unwrap()
}

/// Gaussian elimination with partial pivoting on a small dense complex system.
pub fn gauss_solve(mut a: Vec<Vec<C64>>, mut b: Vec<C64>) -> Option<Vec<C64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[piv][col].norm() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            let pivot_row = a[col].clone();
            for (dst, v) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                *dst -= f * v;
            }
            let v = b[col];
            b[r] -= f * v;
        }
    }
    let mut x = vec![C64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for c in r + 1..n {
            s -= a[r][c] * x[c];
        }
        x[r] = s / a[r][r];
    }
    Some(x)
}

/// Plain Newton on `polys` from `x0`; returns the root on convergence.
pub fn oracle_newton(polys: &[MultiPoly], grads: &[Vec<MultiPoly>], x0: Vec<C64>, iters: usize) -> Option<Vec<C64>> {
    let mut x = x0;
    for _ in 0..iters {
        let f: Vec<C64> = polys.iter().map(|p| p.eval_unchecked(&x)).collect();
        let j: Vec<Vec<C64>> = grads.iter().map(|g| g.iter().map(|q| q.eval_unchecked(&x)).collect()).collect();
        let dx = gauss_solve(j, f)?;
        let step: f64 = dx.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for (a, d) in x.iter_mut().zip(&dx) {
            *a -= d;
        }
        let size: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !size.is_finite() || size > 1e7 {
            return None;
        }
        if step < 1e-13 * (1.0 + size) {
            return Some(x);
        }
    }
    None
}

pub fn dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

pub fn size(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Root set of a square system by exhaustive Newton from `starts` random
/// starts spread over several magnitudes.
pub fn exhaustive_newton_roots<R: Rng>(polys: &[MultiPoly], starts: usize, rng: &mut R) -> Vec<Vec<C64>> {
    let n = polys.len();
    let grads: Vec<Vec<MultiPoly>> = polys.iter().map(MultiPoly::grad).collect();
    let mut roots: Vec<Vec<C64>> = Vec::new();
    for _ in 0..starts {
        let scale = 10f64.powf(rng.random_range(-1.0..1.5));
        let x0: Vec<C64> = (0..n).map(|_| cgauss(rng) * scale).collect();
        if let Some(r) = oracle_newton(polys, &grads, x0, 80) {
            if !roots.iter().any(|q| dist(q, &r) < 1e-7 * (1.0 + size(&r))) {
                roots.push(r);
            }
        }
    }
    roots
}

/// Match two point sets one-to-one within `tol` (relative to magnitude).
pub fn sets_match(a: &[Vec<C64>], b: &[Vec<C64>], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for p in a {
        let hit = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .find(|(_, q)| dist(p, q) <= tol * (1.0 + size(p)));
        match hit {
            Some((k, _)) => used[k] = true,
            None => return false,
        }
    }
    true
}

/// Best rank-`r` approximation from a full SVD (Eckart-Young).
pub fn truncated_svd(y: &DMatrix<f64>, r: usize) -> DMatrix<f64> {
    let svd = y.clone().svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let mut s: Vec<(f64, usize)> = svd.singular_values.iter().copied().zip(0..).collect();
    s.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut out = DMatrix::zeros(y.nrows(), y.ncols());
    for &(sigma, k) in s.iter().take(r) {
        out += u.column(k) * vt.row(k) * sigma;
    }
    out
}

/// Nearest orthogonal matrix `U V^T` for `Y = U Σ V^T`.
pub fn procrustes(y: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = y.clone().svd(true, true);
    svd.u.unwrap() * svd.v_t.unwrap()
}

/// Singular values, descending.
pub fn sigma(y: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = y.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn rmatrix<R: Rng>(n: usize, t: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(n, t, |_, _| rgauss(rng))
}

pub fn cmatrix<R: Rng>(n: usize, t: usize, rng: &mut R) -> DMatrix<C64> {
    DMatrix::from_fn(n, t, |_, _| cgauss(rng))
}

/// Multisets agree after taking absolute values and sorting.
pub fn match_up_to_signed_permutation(a: &[C64], b: &[f64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut x: Vec<f64> = a.iter().map(|z| z.norm()).collect();
    let mut y: Vec<f64> = b.iter().map(|v| v.abs()).collect();
    x.sort_by(|p, q| p.total_cmp(q));
    y.sort_by(|p, q| p.total_cmp(q));
    a.iter().all(|z| z.im.abs() <= tol * (1.0 + z.norm()))
        && x.iter().zip(&y).all(|(p, q)| (p - q).abs() <= tol * (1.0 + q))
}
