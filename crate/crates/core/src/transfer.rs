//! Transfer between the diagonal restriction `S` and the matrix variety
//! `M = σ⁻¹(S)`: dimensions, tangent spaces and the lift of ED critical
//! points through a (possibly algebraic) SVD of the data matrix.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use thiserror::Error;

use crate::edcrit::{self, ComponentSpec, EDCriticalPoint, EdOptions, EdcritError, VarietySpec};
use crate::homotopy::lex_cmp;
use crate::linalg::{self, CMatrix, C64};
use crate::polyalg::sample_zero_set;
use crate::spectral::{self, AsvdVerdict, SpectralError};

#[derive(Debug, Error)]
pub enum TransferError {
    #[error("{what}: expected {expected}, got {got}")]
    Shape { what: &'static str, expected: String, got: String },
    #[error("U or V is not orthogonal (defect {0:e})")]
    NotOrthogonal(f64),
    #[error("data matrix has no algebraic SVD ({0:?})")]
    NoAlgebraicSvd(AsvdVerdict),
    #[error("lifted point {index} fails the criticality check: residual {residual:e} > {tol:e}")]
    VerificationFailed { index: usize, residual: f64, tol: f64 },
    #[error("could not sample a point on component `{0}`")]
    Sampling(String),
    #[error("point does not lie on any component")]
    NotOnVariety,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Edcrit(#[from] EdcritError),
}

/// Sizes of the groups of equal magnitudes in `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionData {
    pub rho: usize,
    /// Sizes of the nonzero groups, largest magnitude first.
    pub p: Vec<usize>,
    pub p0: usize,
}

/// Groups the absolute values of `x` that agree within
/// `tol·max(1, ‖x‖∞)`; entries below that bound form the zero block.
pub fn partition_of(x: &[f64], tol: f64) -> PartitionData {
    let mut a: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    a.sort_by(|u, v| v.total_cmp(u));
    let cut = tol * a.first().copied().unwrap_or(0.0).max(1.0);
    let mut p: Vec<usize> = Vec::new();
    let mut last = f64::NAN;
    let mut p0 = 0;
    for v in a {
        if v < cut {
            p0 += 1;
        } else if (last - v).abs() <= cut {
            *p.last_mut().expect("group started") += 1;
        } else {
            p.push(1);
            last = v;
        }
    }
    PartitionData { rho: p.len(), p, p0 }
}

/// Partition of a complex point by equality of the squares `x_i²`, which
/// is the complex analogue of equal magnitudes up to sign.
pub fn partition_of_complex(x: &[C64], tol: f64) -> PartitionData {
    let scale = linalg::max_abs(x).max(1.0);
    let mut p0 = 0;
    let mut groups: Vec<(C64, usize)> = Vec::new();
    for z in x {
        if z.norm() < tol * scale {
            p0 += 1;
            continue;
        }
        let sq = z * z;
        match groups.iter_mut().find(|(g, _)| (g - sq).norm() <= tol * scale * scale) {
            Some(g) => g.1 += 1,
            None => groups.push((sq, 1)),
        }
    }
    groups.sort_by(|a, b| b.0.norm().total_cmp(&a.0.norm()));
    PartitionData { rho: groups.len(), p: groups.into_iter().map(|g| g.1).collect(), p0 }
}

/// Dimension of the fiber `σ⁻¹(x)` over a point with partition `part`.
pub fn dim_fiber(part: &PartitionData, n: usize, t: usize) -> usize {
    let mut blocks = vec![part.p0];
    blocks.extend(&part.p);
    let mut pairs = 0;
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            pairs += blocks[i] * blocks[j];
        }
    }
    let k = part.p0 + t - n;
    pairs + t * (t - 1) / 2 - k * k.saturating_sub(1) / 2
}

/// `dim S + dim σ⁻¹(x*)` for a point `x*` of the top stratum.
pub fn dim_m(dim_s: usize, part: &PartitionData, n: usize, t: usize) -> usize {
    dim_s + dim_fiber(part, n, t)
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionReport {
    pub dim_s: usize,
    pub dim_m: usize,
    pub dim_fiber: usize,
    pub partition: PartitionData,
    pub component: String,
    pub sample: Vec<C64>,
}

const PARTITION_TOL: f64 = 1e-8;

/// A generic point of a component: a random point of an affine subspace,
/// or a Newton-sampled regular point of a complete intersection (real if
/// possible).
pub fn sample_component<R: Rng>(c: &ComponentSpec, rng: &mut R) -> Option<Vec<C64>> {
    if let Some(a) = c.affine_component() {
        let mut x: Vec<f64> = a.base().to_vec();
        for d in a.directions() {
            let w: f64 = rng.sample(StandardNormal);
            x.iter_mut().zip(d).for_each(|(xi, di)| *xi += w * di);
        }
        return Some(edcrit::complexify(&x));
    }
    for real in [true, false] {
        let pts = sample_zero_set(c.generators(), 20, real, rng);
        if let Some(p) = pts.into_iter().find(|p| c.is_regular_at(p)) {
            return Some(p);
        }
    }
    None
}

fn report_at(c: &ComponentSpec, x: Vec<C64>, n: usize, t: usize) -> DimensionReport {
    let partition = if x.iter().all(|z| z.im.abs() < 1e-12) {
        partition_of(&x.iter().map(|z| z.re).collect::<Vec<_>>(), PARTITION_TOL)
    } else {
        partition_of_complex(&x, PARTITION_TOL)
    };
    let fiber = dim_fiber(&partition, n, t);
    DimensionReport {
        dim_s: c.dim(),
        dim_m: c.dim() + fiber,
        dim_fiber: fiber,
        partition,
        component: c.label().to_string(),
        sample: x,
    }
}

/// Dimension of `M`: the maximum over components of the dimension formula
/// at a random point of the component.
pub fn dimension(s: &VarietySpec, seed: u64) -> Result<DimensionReport, TransferError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<DimensionReport> = None;
    for c in &s.components {
        let x = sample_component(c, &mut rng).ok_or_else(|| TransferError::Sampling(c.label().to_string()))?;
        let r = report_at(c, x, s.n, s.t);
        if best.as_ref().is_none_or(|b| r.dim_m > b.dim_m) {
            best = Some(r);
        }
    }
    Ok(best.expect("variety has components"))
}

/// Dimension formula at a user-supplied point of `S`.
pub fn dimension_at(s: &VarietySpec, x: &[C64]) -> Result<DimensionReport, TransferError> {
    if x.len() != s.n {
        return Err(TransferError::Shape { what: "sample point", expected: s.n.to_string(), got: x.len().to_string() });
    }
    let c = s
        .components
        .iter()
        .filter(|c| c.contains_point(x, 1e-8))
        .max_by_key(|c| c.dim())
        .ok_or(TransferError::NotOnVariety)?;
    Ok(report_at(c, x.to_vec(), s.n, s.t))
}

fn skew(k: usize, i: usize, j: usize) -> CMatrix {
    let mut e = CMatrix::zeros(k, k);
    e[(i, j)] = C64::new(1.0, 0.0);
    e[(j, i)] = C64::new(-1.0, 0.0);
    e
}

/// Spanning set of the tangent space of `M` at `U·Diag(x)·V^T`:
/// `U·Z₁·Diag(x)·V^T`, `U·Diag(x)·Z₂^T·V^T` for elementary skew `Z₁`, `Z₂`,
/// and `U·Diag(a)·V^T` for each tangent vector `a` of `S` at `x`.
pub fn tangent_basis_m(u: &CMatrix, x: &[C64], v: &CMatrix, tangent_s: &[Vec<C64>]) -> Result<Vec<CMatrix>, TransferError> {
    let (n, t) = (u.nrows(), v.nrows());
    if u.ncols() != n || v.ncols() != t || x.len() != n || n > t {
        return Err(TransferError::Shape {
            what: "U, x, V",
            expected: "n x n, length n, t x t with n <= t".into(),
            got: format!("{}x{}, {}, {}x{}", u.nrows(), u.ncols(), x.len(), v.nrows(), v.ncols()),
        });
    }
    if let Some(a) = tangent_s.iter().find(|a| a.len() != n) {
        return Err(TransferError::Shape { what: "tangent vector", expected: n.to_string(), got: a.len().to_string() });
    }
    let defect = linalg::orthogonality_defect(u).max(linalg::orthogonality_defect(v));
    if defect > 1e-8 * linalg::frobenius(u).max(linalg::frobenius(v)).max(1.0).powi(2) {
        return Err(TransferError::NotOrthogonal(defect));
    }
    let dx = linalg::diag_rect(x, n, t);
    let vt = v.transpose();
    let mut out = Vec::with_capacity(n * (n - 1) / 2 + t * (t - 1) / 2 + tangent_s.len());
    for i in 0..n {
        for j in i + 1..n {
            out.push(u * skew(n, i, j) * &dx * &vt);
        }
    }
    for i in 0..t {
        for j in i + 1..t {
            out.push(u * &dx * skew(t, i, j).transpose() * &vt);
        }
    }
    for a in tangent_s {
        out.push(u * linalg::diag_rect(a, n, t) * &vt);
    }
    Ok(out)
}

/// `max_T |trace((Y - X)·T^T)| / max(1, ‖Y - X‖·‖T‖)` over the spanning set.
pub fn verify_criticality(y: &CMatrix, x: &CMatrix, basis: &[CMatrix]) -> f64 {
    let diff = y - x;
    let dn = linalg::frobenius(&diff);
    basis
        .iter()
        .map(|t| {
            let pairing: C64 = diff.iter().zip(t.iter()).map(|(a, b)| a * b).sum();
            pairing.norm() / (dn * linalg::frobenius(t)).max(1.0)
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct LiftedCriticalPoint {
    pub x_matrix: CMatrix,
    pub x: EDCriticalPoint,
    pub u: CMatrix,
    pub v: CMatrix,
    pub criticality_residual: f64,
    pub is_real: bool,
    /// `‖Y - X‖_F`.
    pub distance: f64,
}

#[derive(Clone, Debug)]
pub struct TransferOptions {
    pub ed: EdOptions,
    /// Bound on the criticality residual of every lifted point.
    pub tol: f64,
}

impl Default for TransferOptions {
    fn default() -> Self {
        Self { ed: EdOptions::default(), tol: 1e-7 }
    }
}

#[derive(Clone, Debug)]
pub struct MatrixCritical {
    /// Sorted lexicographically by the diagonal point.
    pub points: Vec<LiftedCriticalPoint>,
    /// Algebraic singular values of the data.
    pub y: Vec<C64>,
    pub u: CMatrix,
    pub v: CMatrix,
    pub warnings: Vec<String>,
    pub overlap_discards: usize,
}

impl MatrixCritical {
    /// The real critical point closest to the data.
    pub fn nearest_real(&self) -> Option<&LiftedCriticalPoint> {
        self.points.iter().filter(|p| p.is_real).min_by(|a, b| a.distance.total_cmp(&b.distance))
    }
}

const EIGEN_GAP_REL: f64 = 1e-6;

/// Whether the eigenvalues of `YY^T` (the squares `y_i²`) are nonzero and
/// pairwise distinct relative to `‖YY^T‖`.
fn distinct_eigenvalue_warning(y: &[C64], yyt_norm: f64) -> Option<String> {
    let sq: Vec<C64> = y.iter().map(|z| z * z).collect();
    let cut = EIGEN_GAP_REL * yyt_norm.max(1e-300);
    let mut gap = sq.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    for i in 0..sq.len() {
        for j in i + 1..sq.len() {
            gap = gap.min((sq[i] - sq[j]).norm());
        }
    }
    (gap <= cut).then(|| {
        format!("eigenvalues of YY^T are not nonzero and distinct (gap {gap:.3e}); data is not generic")
    })
}

/// ED critical points of `Y` on `M = σ⁻¹(S)`, obtained by decomposing
/// `Y = U·Diag(y)·V^T`, solving on `S` and lifting each point `x` to
/// `U·Diag(x)·V^T`. Every lift is checked against the tangent space of `M`.
pub fn matrix_ed_critical(y: &CMatrix, s: &VarietySpec, opts: &TransferOptions) -> Result<MatrixCritical, TransferError> {
    let (n, t) = y.shape();
    if (n, t) != (s.n, s.t) {
        return Err(TransferError::Shape {
            what: "data matrix",
            expected: format!("{}x{}", s.n, s.t),
            got: format!("{n}x{t}"),
        });
    }
    let real = linalg::max_imag(y) == 0.0;
    let (u, d, v) = if real {
        let svd = spectral::svd_real(&linalg::real_part(y))?;
        (linalg::to_complex(&svd.u), edcrit::complexify(&svd.sigma), linalg::to_complex(&svd.v))
    } else {
        match spectral::has_algebraic_svd(y) {
            AsvdVerdict::Yes => {}
            verdict => return Err(TransferError::NoAlgebraicSvd(verdict)),
        }
        let a = spectral::algebraic_svd(y)?;
        (a.u, a.d, a.v)
    };
    let mut warnings = Vec::new();
    let yyt = y * y.transpose();
    warnings.extend(distinct_eigenvalue_warning(&d, linalg::frobenius(&yyt)));

    let crit = edcrit::ed_critical_points(s, &d, &opts.ed)?;
    if crit.overlap_discards > 0 {
        warnings.push(format!("{} critical point(s) on several components discarded", crit.overlap_discards));
    }
    if crit.solver_warnings > 0 {
        warnings.push(format!("{} path(s) ended singular or failed", crit.solver_warnings));
    }
    let mut points = Vec::with_capacity(crit.points.len());
    for p in crit.points {
        let comp = s.component(&p.component).expect("label from spec");
        let tan = comp.tangent_space(&p.x);
        let tangent_s: Vec<Vec<C64>> = (0..tan.ncols()).map(|k| tan.column(k).iter().copied().collect()).collect();
        let x_matrix = &u * linalg::diag_rect(&p.x, n, t) * v.transpose();
        let basis = tangent_basis_m(&u, &p.x, &v, &tangent_s)?;
        let criticality_residual = verify_criticality(y, &x_matrix, &basis);
        let is_real = p.is_real && real;
        let distance = linalg::frobenius(&(y - &x_matrix));
        points.push(LiftedCriticalPoint {
            x_matrix,
            x: p,
            u: u.clone(),
            v: v.clone(),
            criticality_residual,
            is_real,
            distance,
        });
    }
    points.sort_by(|a, b| lex_cmp(&a.x.x, &b.x.x));
    if let Some((index, p)) = points.iter().enumerate().find(|(_, p)| p.criticality_residual.is_nan() || p.criticality_residual >= opts.tol) {
        return Err(TransferError::VerificationFailed { index, residual: p.criticality_residual, tol: opts.tol });
    }
    Ok(MatrixCritical { points, y: d, u, v, warnings, overlap_discards: crit.overlap_discards })
}

/// `matrix_ed_critical` for real data.
pub fn matrix_ed_critical_real(
    y: &linalg::RMatrix,
    s: &VarietySpec,
    opts: &TransferOptions,
) -> Result<MatrixCritical, TransferError> {
    matrix_ed_critical(&linalg::to_complex(y), s, opts)
}
