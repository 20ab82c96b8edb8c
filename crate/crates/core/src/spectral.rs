//! Matrix-side linear algebra: real SVD, eigenpairs of complex symmetric
//! matrices, the algebraic SVD and the quotient map `X ↦ e(XX^T)`.
//!
//! Over the complex numbers everything uses complex-orthogonal matrices
//! (`U^T U = I`), not unitary ones.

use nalgebra::linalg::Schur;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, CMatrix, CVector, RMatrix, C64, ONE, ZERO};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("matrix has shape {rows}x{cols}; need rows <= cols")]
    Shape { rows: usize, cols: usize },
    #[error("matrix is not symmetric (defect {0:e})")]
    NotSymmetric(f64),
    #[error("eigenvalue gap {gap:e} below threshold {threshold:e}; diagonalizability undecidable")]
    Indeterminate { gap: f64, threshold: f64 },
    #[error("eigenvector {index} is isotropic (v^T v = {value:e}); no complex-orthogonal normalization exists")]
    Isotropic { index: usize, value: f64 },
    #[error("no algebraic SVD: rank(A) = {rank_a} but rank(AA^T) = {rank_aat}")]
    RankMismatch { rank_a: usize, rank_aat: usize },
    #[error("eigenvalue computation did not converge")]
    NoConvergence,
}

/// Gap threshold, relative to the spectral scale.
pub const GAP_REL: f64 = 1e-8;
/// Relative threshold for numerical rank decisions.
pub const RANK_REL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct RealSVD {
    pub u: RMatrix,
    pub sigma: Vec<f64>,
    pub v: RMatrix,
}

impl RealSVD {
    pub fn reconstruct(&self) -> RMatrix {
        let (n, t) = (self.u.nrows(), self.v.nrows());
        let mut d = RMatrix::zeros(n, t);
        for (i, s) in self.sigma.iter().enumerate() {
            d[(i, i)] = *s;
        }
        &self.u * d * self.v.transpose()
    }
}

/// Full SVD `Y = U·Diag(σ)·V^T` of a real `n x t` matrix with `n <= t`,
/// `U ∈ O(n)`, `V ∈ O(t)` and `σ` nonincreasing.
pub fn svd_real(y: &RMatrix) -> Result<RealSVD, SpectralError> {
    let (n, t) = y.shape();
    if n > t {
        return Err(SpectralError::Shape { rows: n, cols: t });
    }
    if n == 0 {
        return Ok(RealSVD { u: RMatrix::zeros(0, 0), sigma: vec![], v: RMatrix::identity(t, t) });
    }
    let svd = y.clone().svd(true, true);
    let u_thin = svd.u.expect("requested U");
    let vt_thin = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sigma: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let u = RMatrix::from_fn(n, n, |r, c| u_thin[(r, order[c])]);
    let mut cols: Vec<nalgebra::DVector<f64>> = order.iter().map(|&k| vt_thin.row(k).transpose()).collect();
    complete_real_orthonormal(&mut cols, t);
    let v = RMatrix::from_columns(&cols);
    Ok(RealSVD { u, sigma, v })
}

/// Extend orthonormal columns to an orthonormal basis of `R^dim` with
/// coordinate vectors, re-orthogonalizing twice.
fn complete_real_orthonormal(cols: &mut Vec<nalgebra::DVector<f64>>, dim: usize) {
    let mut k = 0;
    while cols.len() < dim && k < dim {
        let mut w = nalgebra::DVector::<f64>::zeros(dim);
        w[k] = 1.0;
        k += 1;
        for _ in 0..2 {
            for c in cols.iter() {
                let p = c.dot(&w);
                w -= c * p;
            }
        }
        let nw = w.norm();
        if nw > 1e-6 {
            cols.push(w / nw);
        }
    }
}

/// Eigenpairs of a complex symmetric matrix with simple spectrum.
#[derive(Clone, Debug)]
pub struct SymEigen {
    /// Sorted by descending modulus, then descending real part.
    pub values: Vec<C64>,
    /// Columns normalized so that `v^T v = 1`; pairwise `v_i^T v_j = 0`.
    pub vectors: CMatrix,
}

/// Elementary symmetric functions of the eigenvalues: `e_k` is the sum of
/// the principal `k x k` minors, so `det(λI - B) = Σ (-1)^k e_k λ^{n-k}`.
pub fn char_poly_coefficients(b: &CMatrix) -> Vec<C64> {
    let n = b.nrows();
    let mut e = vec![ZERO; n];
    for mask in 1u32..(1u32 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let k = idx.len();
        let sub = CMatrix::from_fn(k, k, |r, c| b[(idx[r], idx[c])]);
        e[k - 1] += sub.determinant();
    }
    e
}

/// Roots of `λ^n - e_1 λ^{n-1} + e_2 λ^{n-2} - ...` from the eigenvalues of
/// the balanced companion matrix.
fn char_poly_roots(e: &[C64]) -> Result<Vec<C64>, SpectralError> {
    let n = e.len();
    if n == 0 {
        return Ok(vec![]);
    }
    let mut comp = CMatrix::zeros(n, n);
    for k in 1..=n {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        comp[(0, k - 1)] = e[k - 1] * sign;
    }
    for i in 1..n {
        comp[(i, i - 1)] = ONE;
    }
    balance(&mut comp);
    let schur = Schur::try_new(comp, 1e-15, 10_000).ok_or(SpectralError::NoConvergence)?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Parlett-Reinsch diagonal balancing with powers of two.
fn balance(m: &mut CMatrix) {
    let n = m.nrows();
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let c: f64 = (0..n).filter(|&j| j != i).map(|j| m[(j, i)].norm()).sum();
            let r: f64 = (0..n).filter(|&j| j != i).map(|j| m[(i, j)].norm()).sum();
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let (mut c2, mut r2) = (c, r);
            while c2 < r2 / 2.0 {
                c2 *= 2.0;
                r2 /= 2.0;
                f *= 2.0;
            }
            while c2 >= r2 * 2.0 {
                c2 /= 2.0;
                r2 *= 2.0;
                f /= 2.0;
            }
            if (c2 + r2) < 0.95 * s {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

fn sort_desc(values: &mut [(C64, usize)]) {
    values.sort_by(|a, b| b.0.norm().total_cmp(&a.0.norm()).then(b.0.re.total_cmp(&a.0.re)));
}

/// Eigenvalues of `b` (no simplicity requirement), polished where simple.
pub fn eigenvalues(b: &CMatrix) -> Result<Vec<C64>, SpectralError> {
    let mut vals = char_poly_roots(&char_poly_coefficients(b))?;
    let scale = spectral_scale(b, &vals);
    let n = vals.len();
    for i in 0..n {
        let gap = (0..n).filter(|&j| j != i).map(|j| (vals[i] - vals[j]).norm()).fold(f64::INFINITY, f64::min);
        if gap > 1e-6 * scale {
            if let Some((lam, _)) = rayleigh_refine(b, vals[i]) {
                vals[i] = lam;
            }
        }
    }
    Ok(vals)
}

fn spectral_scale(b: &CMatrix, vals: &[C64]) -> f64 {
    let m = vals.iter().map(|z| z.norm()).fold(0.0, f64::max);
    m.max(linalg::frobenius(b) / (b.nrows().max(1) as f64).sqrt())
}

/// Smallest right singular vector of `b - λI`, then transpose-Rayleigh
/// quotient iteration. Returns the refined (λ, v).
fn rayleigh_refine(b: &CMatrix, lam0: C64) -> Option<(C64, CVector)> {
    let n = b.nrows();
    let shifted = b - CMatrix::identity(n, n) * lam0;
    let svd = shifted.svd(false, true);
    let vt = svd.v_t?;
    let k = (0..n).min_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]))?;
    let mut v: CVector = vt.row(k).adjoint().into_owned();
    let mut lam = lam0;
    for _ in 0..3 {
        let shifted = b - CMatrix::identity(n, n) * lam;
        let Some(w) = linalg::solve(&shifted, &v) else { break };
        let nw = w.norm();
        if !(nw.is_finite() && nw > 0.0) {
            break;
        }
        v = w / C64::new(nw, 0.0);
        let vtv = v.transpose() * &v;
        if vtv[(0, 0)].norm() < 1e-14 {
            break;
        }
        let new_lam = (v.transpose() * b * &v)[(0, 0)] / vtv[(0, 0)];
        // keep the eigenvalue we started from; a large jump means another branch
        if (new_lam - lam0).norm() > 1e-3 * lam0.norm().max(1e-300) + 1e-12 {
            break;
        }
        lam = new_lam;
    }
    Some((lam, v))
}

fn symmetry_defect(b: &CMatrix) -> f64 {
    linalg::frobenius(&(b - b.transpose()))
}

/// Eigen-decomposition of a complex symmetric matrix (`B = B^T`).
///
/// Eigenvalues come from the characteristic polynomial; each simple
/// eigenvalue gets an eigenvector normalized by `v^T v = 1`, so the matrix of
/// eigenvectors is complex orthogonal. A gap below `GAP_REL · scale` is
/// reported as [`SpectralError::Indeterminate`].
pub fn complex_sym_eigen(b: &CMatrix) -> Result<SymEigen, SpectralError> {
    let n = b.nrows();
    let defect = symmetry_defect(b);
    if b.ncols() != n || defect > 1e-10 * linalg::frobenius(b).max(1.0) {
        return Err(SpectralError::NotSymmetric(defect));
    }
    let roots = char_poly_roots(&char_poly_coefficients(b))?;
    let scale = spectral_scale(b, &roots);
    let threshold = GAP_REL * scale;
    let mut gap = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            gap = gap.min((roots[i] - roots[j]).norm());
        }
    }
    if n > 1 && !(gap >= threshold && threshold > 0.0) {
        return Err(SpectralError::Indeterminate { gap, threshold });
    }
    let mut pairs: Vec<(C64, CVector)> = Vec::with_capacity(n);
    for &r in &roots {
        let (lam, v) = rayleigh_refine(b, r).ok_or(SpectralError::NoConvergence)?;
        pairs.push((lam, v));
    }
    let mut order: Vec<(C64, usize)> = pairs.iter().enumerate().map(|(k, p)| (p.0, k)).collect();
    sort_desc(&mut order);
    let mut values = Vec::with_capacity(n);
    let mut cols = Vec::with_capacity(n);
    for (index, &(_, k)) in order.iter().enumerate() {
        let (lam, v) = &pairs[k];
        values.push(*lam);
        cols.push(normalize_transpose(v, index)?);
    }
    let vectors = if n == 0 { CMatrix::zeros(0, 0) } else { CMatrix::from_columns(&cols) };
    Ok(SymEigen { values, vectors })
}

/// Scale `v` so that `v^T v = 1`, fixing the sign so the largest entry has
/// positive real part.
fn normalize_transpose(v: &CVector, index: usize) -> Result<CVector, SpectralError> {
    let vtv: C64 = v.iter().map(|z| z * z).sum();
    let nv2 = v.norm_squared();
    if vtv.norm() < 1e-8 * nv2 {
        return Err(SpectralError::Isotropic { index, value: vtv.norm() / nv2.max(1e-300) });
    }
    let mut out = v / vtv.sqrt();
    let lead = out.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or(ONE);
    if lead.re < 0.0 || (lead.re == 0.0 && lead.im < 0.0) {
        out = -out;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AsvdVerdict {
    Yes,
    No,
    Indeterminate,
}

/// Existence of `A = U·D·V^T` with complex orthogonal `U`, `V`: this holds
/// exactly when `AA^T` is diagonalizable and `rank(A) = rank(AA^T)`.
///
/// `Yes` is certified by a simple spectrum (or `AA^T` a scalar matrix),
/// `No` by a rank mismatch or a defective eigenvalue cluster. A repeated
/// eigenvalue with a full set of eigenvectors is reported as
/// `Indeterminate`. Tall matrices are decided through their transpose.
pub fn has_algebraic_svd(a: &CMatrix) -> AsvdVerdict {
    let (n, t) = a.shape();
    if n > t {
        return has_algebraic_svd(&a.transpose());
    }
    let b = a * a.transpose();
    let (rank_a, rank_b) = ranks(a, &b);
    if rank_a != rank_b {
        return AsvdVerdict::No;
    }
    if is_scalar_matrix(&b) {
        return AsvdVerdict::Yes;
    }
    match complex_sym_eigen(&b) {
        Ok(_) => AsvdVerdict::Yes,
        Err(_) if has_defective_cluster(&b) => AsvdVerdict::No,
        Err(_) => AsvdVerdict::Indeterminate,
    }
}

/// Whether some cluster of `m` nearly equal eigenvalues has fewer than `m`
/// independent eigenvectors. Near a Jordan block the smallest singular
/// values of `B - λI` split into one of size `O(δ^2)` and the rest of size
/// `O(1)`, while a diagonalizable cluster gives `m` of size `O(δ)`.
fn has_defective_cluster(b: &CMatrix) -> bool {
    let Ok(vals) = eigenvalues(b) else {
        return false;
    };
    let n = b.nrows();
    let scale = spectral_scale(b, &vals);
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        let members: Vec<usize> = (i..n).filter(|&j| !used[j] && (vals[j] - vals[i]).norm() <= 1e-6 * scale).collect();
        members.iter().for_each(|&j| used[j] = true);
        if members.len() < 2 {
            continue;
        }
        let center = members.iter().map(|&j| vals[j]).sum::<C64>() / members.len() as f64;
        let sv = linalg::singular_values(&(b - CMatrix::identity(n, n) * center));
        let geometric = sv.iter().filter(|&&s| s <= 1e-6 * scale).count();
        if geometric < members.len() {
            return true;
        }
    }
    false
}

fn ranks(a: &CMatrix, b: &CMatrix) -> (usize, usize) {
    let sa = linalg::singular_values(a);
    let sb = linalg::singular_values(b);
    let amax = sa.first().copied().unwrap_or(0.0);
    let rank_a = sa.iter().filter(|&&s| s > RANK_REL * amax && s > 1e-300).count();
    let rank_b = sb.iter().filter(|&&s| s > RANK_REL * amax * amax && s > 1e-300).count();
    (rank_a, rank_b)
}

fn is_scalar_matrix(b: &CMatrix) -> bool {
    let n = b.nrows();
    if n == 0 {
        return true;
    }
    let mean: C64 = (0..n).map(|i| b[(i, i)]).sum::<C64>() / n as f64;
    let dev = linalg::frobenius(&(b - CMatrix::identity(n, n) * mean));
    dev <= 1e-12 * linalg::frobenius(b).max(1e-300)
}

#[derive(Clone, Debug)]
pub struct AlgebraicSVD {
    pub u: CMatrix,
    pub d: Vec<C64>,
    pub v: CMatrix,
    /// `||U·Diag(d)·V^T - A||_F`.
    pub residual: f64,
}

impl AlgebraicSVD {
    pub fn reconstruct(&self) -> CMatrix {
        &self.u * linalg::diag_rect(&self.d, self.u.nrows(), self.v.nrows()) * self.v.transpose()
    }
}

/// Seed for the random fill used to complete `V`; fixed for reproducibility.
const FILL_SEED: u64 = 0x0a5d_f111;

/// Construct `A = U·Diag(d)·V^T` for a matrix whose `AA^T` has simple
/// spectrum. `U` holds normalized eigenvectors of `AA^T`, `d_i` is the
/// principal square root of the eigenvalue and `v_i = A^T u_i / d_i`; the
/// remaining columns of `V` are completed by transpose Gram-Schmidt. A tall
/// matrix is factored through its transpose.
pub fn algebraic_svd(a: &CMatrix) -> Result<AlgebraicSVD, SpectralError> {
    let (n, t) = a.shape();
    if n > t {
        let f = algebraic_svd(&a.transpose())?;
        return Ok(AlgebraicSVD { u: f.v, d: f.d, v: f.u, residual: f.residual });
    }
    let b = a * a.transpose();
    let (rank_a, rank_aat) = ranks(a, &b);
    if rank_a != rank_aat {
        return Err(SpectralError::RankMismatch { rank_a, rank_aat });
    }
    let eig = if is_scalar_matrix(&b) {
        let mean = (0..n).map(|i| b[(i, i)]).sum::<C64>() / n.max(1) as f64;
        SymEigen { values: vec![mean; n], vectors: CMatrix::identity(n, n) }
    } else {
        complex_sym_eigen(&b)?
    };
    let mut order: Vec<(C64, usize)> = eig.values.iter().enumerate().map(|(k, l)| (l.sqrt(), k)).collect();
    sort_desc(&mut order);
    let d: Vec<C64> = order.iter().map(|p| p.0).collect();
    let u = CMatrix::from_fn(n, n, |r, c| eig.vectors[(r, order[c].1)]);

    let amax = linalg::singular_values(a).first().copied().unwrap_or(0.0);
    let mut cols: Vec<CVector> = Vec::with_capacity(t);
    let mut zero_slots = Vec::new();
    for (i, di) in d.iter().enumerate() {
        if di.norm() <= (RANK_REL * amax * amax).sqrt() || di.norm() == 0.0 {
            zero_slots.push(i);
            cols.push(CVector::zeros(t));
            continue;
        }
        let col = a.transpose() * u.column(i) / *di;
        cols.push(col);
    }
    complete_transpose_orthogonal(&mut cols, &zero_slots, t)?;
    let v = CMatrix::from_columns(&cols);
    let mut out = AlgebraicSVD { u, d, v, residual: 0.0 };
    out.residual = linalg::frobenius(&(out.reconstruct() - a));
    Ok(out)
}

/// Fill the placeholder columns `slots` and append columns until there are
/// `dim`, each transpose-orthogonal to the rest and normalized by `w^T w = 1`.
fn complete_transpose_orthogonal(cols: &mut Vec<CVector>, slots: &[usize], dim: usize) -> Result<(), SpectralError> {
    let mut rng = ChaCha8Rng::seed_from_u64(FILL_SEED);
    let mut targets: Vec<usize> = slots.to_vec();
    let first_new = cols.len();
    targets.extend(first_new..dim);
    cols.resize(dim, CVector::zeros(dim));
    let mut done: Vec<bool> = (0..dim).map(|k| !targets.contains(&k)).collect();
    for &k in &targets {
        let mut placed = false;
        for _attempt in 0..10 {
            let mut w = CVector::from_fn(dim, |_, _| C64::new(rng.sample(StandardNormal), 0.0));
            for _ in 0..2 {
                for (j, c) in cols.iter().enumerate() {
                    if done[j] {
                        let p: C64 = c.iter().zip(w.iter()).map(|(x, y)| x * y).sum();
                        w -= c * p;
                    }
                }
            }
            let wtw: C64 = w.iter().map(|z| z * z).sum();
            if wtw.norm() > 1e-8 * w.norm_squared() && w.norm() > 1e-8 {
                cols[k] = w / wtw.sqrt();
                done[k] = true;
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(SpectralError::Isotropic { index: k, value: 0.0 });
        }
    }
    Ok(())
}

/// Principal square roots of the eigenvalues of `XX^T`, sorted by
/// descending modulus then descending real part.
pub fn singular_value_vector(x: &CMatrix) -> Result<Vec<C64>, SpectralError> {
    let (n, t) = x.shape();
    if n > t {
        return Err(SpectralError::Shape { rows: n, cols: t });
    }
    let b = x * x.transpose();
    let vals = eigenvalues(&b)?;
    let mut roots: Vec<(C64, usize)> = vals.iter().map(|l| l.sqrt()).zip(0..).collect();
    sort_desc(&mut roots);
    Ok(roots.into_iter().map(|p| p.0).collect())
}

/// `(e_1(XX^T), ..., e_n(XX^T))`, the coefficients of the characteristic
/// polynomial of `XX^T`.
pub fn quotient_map(x: &CMatrix) -> Result<Vec<C64>, SpectralError> {
    let (n, t) = x.shape();
    if n > t {
        return Err(SpectralError::Shape { rows: n, cols: t });
    }
    Ok(char_poly_coefficients(&(x * x.transpose())))
}

/// Random real orthogonal matrix from the QR factorization of a Gaussian
/// matrix, with the sign fix that makes it Haar distributed.
pub fn random_orthogonal<R: Rng>(n: usize, rng: &mut R) -> RMatrix {
    let g = RMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn cdiag(d: &[C64]) -> CMatrix {
        linalg::diag_rect(d, d.len(), d.len())
    }

    #[test]
    fn svd_of_diagonal() {
        let y = RMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 3.0, 2.0]));
        let s = svd_real(&y).unwrap();
        assert_eq!(s.sigma.len(), 3);
        for (a, b) in s.sigma.iter().zip([3.0, 2.0, 1.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((s.reconstruct() - &y).norm() < 1e-13);
    }

    #[test]
    fn svd_of_zero_and_wide() {
        let s = svd_real(&RMatrix::zeros(2, 3)).unwrap();
        assert!(s.sigma.iter().all(|&v| v == 0.0));
        assert!((s.v.transpose() * &s.v - RMatrix::identity(3, 3)).norm() < 1e-12);
        assert!(matches!(svd_real(&RMatrix::zeros(3, 2)), Err(SpectralError::Shape { .. })));
    }

    #[test]
    fn eigen_of_diagonal() {
        let e = complex_sym_eigen(&cdiag(&[c(1.0, 0.0), c(4.0, 0.0)])).unwrap();
        assert!((e.values[0] - c(4.0, 0.0)).norm() < 1e-12);
        assert!((e.values[1] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((e.vectors[(1, 0)] - ONE).norm() < 1e-12);
        assert!((e.vectors[(0, 1)] - ONE).norm() < 1e-12);
    }

    #[test]
    fn defective_nilpotent_is_indeterminate() {
        // [[1, i], [i, -1]] squares to zero
        let b = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(-1.0, 0.0)]);
        assert!(matches!(complex_sym_eigen(&b), Err(SpectralError::Indeterminate { .. })));
    }

    #[test]
    fn non_symmetric_rejected() {
        let b = CMatrix::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]);
        assert!(matches!(complex_sym_eigen(&b), Err(SpectralError::NotSymmetric(_))));
    }

    #[test]
    fn counterexample_has_no_algebraic_svd() {
        let a = CMatrix::from_row_slice(2, 2, &[ONE, c(0.0, 1.0), ZERO, ZERO]);
        assert_eq!(has_algebraic_svd(&a), AsvdVerdict::No);
        assert!(matches!(algebraic_svd(&a), Err(SpectralError::RankMismatch { rank_a: 1, rank_aat: 0 })));
        let s = singular_value_vector(&a).unwrap();
        assert!(s.iter().all(|z| z.norm() < 1e-7));
    }

    #[test]
    fn diagonal_has_algebraic_svd() {
        let a = cdiag(&[c(2.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(has_algebraic_svd(&a), AsvdVerdict::Yes);
        let f = algebraic_svd(&a).unwrap();
        assert!((f.d[0] - c(2.0, 0.0)).norm() < 1e-12 && (f.d[1] - ONE).norm() < 1e-12);
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn complex_diagonal_recovers_values_up_to_sign() {
        let d = [c(1.0, 2.0), c(-0.5, 0.3), c(0.2, -1.0)];
        let f = algebraic_svd(&cdiag(&d)).unwrap();
        for di in d {
            assert!(f.d.iter().any(|e| (e - di).norm() < 1e-10 || (e + di).norm() < 1e-10));
        }
        assert!(linalg::orthogonality_defect(&f.u) < 1e-10);
        assert!(linalg::orthogonality_defect(&f.v) < 1e-10);
    }

    #[test]
    fn identity_and_zero_are_decided() {
        assert_eq!(has_algebraic_svd(&CMatrix::identity(3, 3)), AsvdVerdict::Yes);
        assert_eq!(has_algebraic_svd(&CMatrix::zeros(2, 3)), AsvdVerdict::Yes);
    }

    #[test]
    fn repeated_eigenvalues() {
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]));
        assert_eq!(has_algebraic_svd(&d), AsvdVerdict::Indeterminate);
        // [[1, i, 0], [0, 0, 1]]: AA^T = [[0, 0], [0, 1]] is diagonalizable but
        // rank(A) = 2 > rank(AA^T) = 1
        let a = CMatrix::from_row_slice(2, 3, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(has_algebraic_svd(&a), AsvdVerdict::No);
    }

    #[test]
    fn rank_deficient_real_matrix_factors() {
        let a = CMatrix::from_row_slice(2, 3, &[ONE, c(2.0, 0.0), ZERO, c(2.0, 0.0), c(4.0, 0.0), ZERO]);
        let f = algebraic_svd(&a).unwrap();
        assert!(f.residual < 1e-10);
        assert!(linalg::orthogonality_defect(&f.v) < 1e-10);
        assert!(f.d[1].norm() < 1e-7);
    }

    #[test]
    fn quotient_map_examples() {
        let q = quotient_map(&CMatrix::identity(2, 2)).unwrap();
        assert!((q[0] - c(2.0, 0.0)).norm() < 1e-14 && (q[1] - ONE).norm() < 1e-14);
        let z = quotient_map(&CMatrix::zeros(2, 3)).unwrap();
        assert!(z.iter().all(|v| v.norm() == 0.0));
        assert!(quotient_map(&CMatrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn singular_value_vector_of_diagonal() {
        let s = singular_value_vector(&cdiag(&[c(1.0, 0.0), c(3.0, 0.0), c(2.0, 0.0)])).unwrap();
        for (a, b) in s.iter().zip([3.0, 2.0, 1.0]) {
            assert!((a - c(b, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn tall_matrices_use_the_transpose() {
        let a = CMatrix::from_row_slice(3, 2, &[c(1.0, 0.5), c(0.0, 1.0), c(2.0, 0.0), c(-1.0, 0.3), c(0.4, 0.0), c(1.0, -1.0)]);
        assert_eq!(has_algebraic_svd(&a), AsvdVerdict::Yes);
        let f = algebraic_svd(&a).unwrap();
        assert_eq!((f.u.shape(), f.v.shape(), f.d.len()), ((3, 3), (2, 2), 2));
        assert!(linalg::frobenius(&(f.reconstruct() - &a)) < 1e-10);
        assert!(linalg::orthogonality_defect(&f.u) < 1e-10 && linalg::orthogonality_defect(&f.v) < 1e-10);
        let counter = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(has_algebraic_svd(&counter.transpose()), AsvdVerdict::No);
    }
}
