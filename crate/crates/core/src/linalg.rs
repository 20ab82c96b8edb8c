//! Small dense linear-algebra helpers shared by the solver and the matrix side.
//!
//! Everything here works on `nalgebra::DMatrix<Complex64>`. Complex
//! orthogonality in this crate is always the transpose pairing `v^T w`,
//! never the Hermitian one; helpers that use conjugation say so.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;
pub type RMatrix = DMatrix<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Euclidean (Hermitian) norm of a complex slice.
pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Frobenius norm using moduli, so it is a true norm for complex input.
pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Bilinear pairing `sum a_i b_i` without conjugation.
pub fn bilinear(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|v| C64::new(v, 0.0))
}

pub fn real_part(m: &CMatrix) -> RMatrix {
    m.map(|z| z.re)
}

/// Largest imaginary part in absolute value.
pub fn max_imag(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

/// `n x t` matrix with `d` on the leading diagonal.
pub fn diag_rect(d: &[C64], n: usize, t: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, t);
    for (i, v) in d.iter().enumerate().take(n.min(t)) {
        m[(i, i)] = *v;
    }
    m
}

/// `|| M^T M - I ||_F`, the transpose-orthogonality defect.
pub fn orthogonality_defect(m: &CMatrix) -> f64 {
    let g = m.transpose() * m;
    frobenius(&(g - CMatrix::identity(m.ncols(), m.ncols())))
}

/// Singular values of a complex matrix, nonincreasing.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank with threshold `rel_tol * max(1, sigma_max)`.
pub fn numerical_rank(m: &CMatrix, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let scale = s.first().copied().unwrap_or(0.0).max(1.0);
    s.iter().filter(|&&v| v > rel_tol * scale).count()
}

/// Solve the square system `a x = b`, `None` when `a` is numerically singular.
pub fn solve(a: &CMatrix, b: &CVector) -> Option<CVector> {
    let lu = a.clone().lu();
    let x = lu.solve(b)?;
    if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Some(x)
    } else {
        None
    }
}

/// Minimum-norm least-squares solution of `a x = b` through the SVD.
pub fn min_norm_solve(a: &CMatrix, b: &CVector) -> Option<CVector> {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let eps = 1e-13 * smax.max(f64::MIN_POSITIVE);
    svd.solve(b, eps).ok()
}

/// Orthonormal (Hermitian sense) basis of `{ a : m a = 0 }`, returned as columns.
///
/// The kernel is a linear notion, so the choice of pairing does not matter
/// for membership; the basis vectors just happen to be unitary-orthonormal.
pub fn null_space(m: &CMatrix, rel_tol: f64) -> CMatrix {
    let ncols = m.ncols();
    if m.nrows() == 0 {
        return CMatrix::identity(ncols, ncols);
    }
    // pad to square so the SVD returns a full right factor
    let mut padded = CMatrix::zeros(m.nrows().max(ncols), ncols);
    padded.view_mut((0, 0), (m.nrows(), ncols)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right factor");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = rel_tol * smax.max(1.0);
    let cols: Vec<CVector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cut)
        .map(|(k, _)| v_t.row(k).adjoint().into_owned())
        .collect();
    if cols.is_empty() {
        CMatrix::zeros(ncols, 0)
    } else {
        CMatrix::from_columns(&cols)
    }
}

/// Flatten a matrix row-major into a vector.
pub fn flatten(m: &CMatrix) -> Vec<C64> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}
