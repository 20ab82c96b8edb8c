//! ED critical points and ED degrees of a variety given as a union of
//! components, each a complete intersection or an affine subspace.
//!
//! A point `x` on a component with generators `f_1..f_c` is ED critical
//! for data `y` when `y - x = Σ λ_j ∇f_j(x)`. Complete intersections are
//! solved by homotopy continuation on the Lagrange system in `(x, λ)`;
//! affine subspaces are handled by projection.

use std::collections::BTreeMap;

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangements::{AffineComponent, ArrangementError};
use crate::homotopy::{self, lex_cmp, HomotopyError, SquareSystem, TrackOptions};
use crate::linalg::{self, CMatrix, RMatrix, C64};
use crate::polyalg::group::{in_span, vanishes_at};
use crate::polyalg::{sample_zero_set, MultiPoly, SignedPermutation, Symmetry};

#[derive(Debug, Error)]
pub enum EdcritError {
    #[error("component `{label}`: {msg}")]
    Component { label: String, msg: String },
    #[error("Lagrange systems are only built for complete intersections; `{0}` is an affine subspace")]
    KindMismatch(String),
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid variety: {0}")]
    InvalidVariety(String),
    #[error("at least 2 trials are required, got {0}")]
    TooFewTrials(usize),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentKind {
    AffineSubspace,
    CompleteIntersection,
}

/// Smallest singular value of the generator Jacobian relative to the
/// largest; below this a point is not regular.
pub const REGULAR_REL: f64 = 1e-8;
pub const REAL_TOL: f64 = 1e-7;

/// One irreducible component.
#[derive(Clone, Debug)]
pub struct ComponentSpec {
    generators: Vec<MultiPoly>,
    kind: ComponentKind,
    codim: usize,
    label: String,
    affine: Option<AffineComponent>,
}

impl ComponentSpec {
    /// A complete intersection cut out by `generators`; the codimension is
    /// the number of generators.
    pub fn complete_intersection(generators: Vec<MultiPoly>, label: impl Into<String>) -> Result<Self, EdcritError> {
        let label = label.into();
        let err = |msg: &str| EdcritError::Component { label: label.clone(), msg: msg.into() };
        let Some(n) = generators.first().map(MultiPoly::num_vars) else {
            return Err(err("no generators"));
        };
        if generators.iter().any(|g| g.num_vars() != n) {
            return Err(err("generators live in different rings"));
        }
        if generators.len() > n {
            return Err(err("more generators than variables"));
        }
        if generators.iter().any(|g| g.total_degree() == 0) {
            return Err(err("constant generator"));
        }
        Ok(Self { codim: generators.len(), generators, kind: ComponentKind::CompleteIntersection, label, affine: None })
    }

    /// An affine subspace; its generators are `ν_k · (x - base)` for an
    /// orthonormal basis `ν_k` of the normal space.
    pub fn affine(comp: AffineComponent, label: impl Into<String>) -> Self {
        let n = comp.ambient_dim();
        let generators = comp
            .normal_basis()
            .iter()
            .map(|nu| {
                let mut f = MultiPoly::constant(n, C64::new(-nu.iter().zip(comp.base()).map(|(a, b)| a * b).sum::<f64>(), 0.0));
                for (i, &c) in nu.iter().enumerate() {
                    f = f + MultiPoly::var(n, i).scale(C64::new(c, 0.0));
                }
                f
            })
            .collect::<Vec<_>>();
        Self { codim: generators.len(), generators, kind: ComponentKind::AffineSubspace, label: label.into(), affine: Some(comp) }
    }

    /// An affine subspace given by real degree-1 generators.
    pub fn affine_from_generators(generators: Vec<MultiPoly>, label: impl Into<String>) -> Result<Self, EdcritError> {
        let label = label.into();
        let err = |msg: &str| EdcritError::Component { label: label.clone(), msg: msg.into() };
        let Some(n) = generators.first().map(MultiPoly::num_vars) else {
            return Err(err("no generators"));
        };
        if generators.iter().any(|g| g.num_vars() != n) {
            return Err(err("generators live in different rings"));
        }
        if generators.iter().any(|g| g.total_degree() > 1) {
            return Err(err("affine-subspace generators must have degree 1"));
        }
        if !generators.iter().all(MultiPoly::has_real_coefficients) {
            return Err(err("affine-subspace generators must have real coefficients"));
        }
        let c = generators.len();
        let a = RMatrix::from_fn(c, n, |r, k| {
            let mut e = vec![0u32; n];
            e[k] = 1;
            generators[r].coeff(&e).re
        });
        let b = DVector::from_iterator(c, generators.iter().map(|g| -g.coeff(&vec![0u32; n]).re));
        let svd = a.clone().svd(true, true);
        let base = svd.solve(&b, 1e-12).map_err(&err)?;
        if (&a * &base - &b).norm() > 1e-9 * b.norm().max(1.0) {
            return Err(err("inconsistent linear equations"));
        }
        let rows = (0..c).map(|r| a.row(r).iter().copied().collect()).collect();
        let directions = AffineComponent::span(n, rows)?.normal_basis();
        let comp = AffineComponent::new(base.iter().copied().collect(), directions)?;
        Ok(Self::affine(comp, label))
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn kind(&self) -> ComponentKind {
        self.kind
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn num_vars(&self) -> usize {
        match &self.affine {
            Some(a) => a.ambient_dim(),
            None => self.generators[0].num_vars(),
        }
    }

    pub fn dim(&self) -> usize {
        self.num_vars() - self.codim
    }

    pub fn affine_component(&self) -> Option<&AffineComponent> {
        self.affine.as_ref()
    }

    /// Jacobian of the generators at `x`, `codim x n`.
    pub fn jacobian(&self, x: &[C64]) -> CMatrix {
        let n = x.len();
        CMatrix::from_fn(self.codim, n, |r, c| self.generators[r].partial(c).eval_unchecked(x))
    }

    /// Tangent space at `x` as columns, computed as the kernel of the
    /// generator Jacobian.
    pub fn tangent_space(&self, x: &[C64]) -> CMatrix {
        match &self.affine {
            Some(a) => {
                let n = a.ambient_dim();
                CMatrix::from_fn(n, a.dim(), |r, c| C64::new(a.directions()[c][r], 0.0))
            }
            None => linalg::null_space(&self.jacobian(x), 1e-8),
        }
    }

    /// Whether `x` is a regular point of the component's generators.
    pub fn is_regular_at(&self, x: &[C64]) -> bool {
        if self.codim == 0 || self.affine.is_some() {
            return true;
        }
        let s = linalg::singular_values(&self.jacobian(x));
        let (smax, smin) = (s[0], s[s.len() - 1]);
        smax > 0.0 && smin > REGULAR_REL * smax
    }

    /// First-order distance from `x` to the zero set.
    pub fn distance_estimate(&self, x: &[C64]) -> f64 {
        if let Some(a) = &self.affine {
            return a.distance_complex(x);
        }
        self.generators
            .iter()
            .map(|g| {
                let gn = linalg::norm(&g.grad().iter().map(|d| d.eval_unchecked(x)).collect::<Vec<_>>());
                let v = g.eval_unchecked(x).norm();
                if gn > 0.0 {
                    v / gn
                } else if v == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn contains_point(&self, x: &[C64], tol: f64) -> bool {
        self.distance_estimate(x) < tol * linalg::norm(x).max(1.0)
    }

    /// Image of the component under a signed permutation.
    pub fn act(&self, g: &SignedPermutation) -> Self {
        match &self.affine {
            Some(a) => Self::affine(a.act(g), self.label.clone()),
            None => Self {
                generators: self.generators.iter().map(|f| g.act(f).expect("same dimension")).collect(),
                ..self.clone()
            },
        }
    }

    /// Same zero set, decided by mutual span containment of the generators
    /// (subspace equality for affine components).
    fn same_as(&self, other: &Self) -> bool {
        if self.codim != other.codim || self.num_vars() != other.num_vars() {
            return false;
        }
        match (&self.affine, &other.affine) {
            (Some(a), Some(b)) => a.same_subspace(b),
            _ => {
                self.generators.iter().all(|f| in_span(f, &other.generators))
                    && other.generators.iter().all(|f| in_span(f, &self.generators))
            }
        }
    }
}

/// A variety `S ⊆ C^n` given as a union of components, together with the
/// column count `t` of the matrix space it describes.
#[derive(Clone, Debug)]
pub struct VarietySpec {
    pub n: usize,
    pub t: usize,
    pub components: Vec<ComponentSpec>,
    pub symmetrized: bool,
}

impl VarietySpec {
    pub fn new(n: usize, t: usize, components: Vec<ComponentSpec>) -> Result<Self, EdcritError> {
        if n == 0 || n > t {
            return Err(EdcritError::InvalidVariety(format!("need 1 <= n <= t, got n = {n}, t = {t}")));
        }
        if components.is_empty() {
            return Err(EdcritError::InvalidVariety("no components".into()));
        }
        if let Some(c) = components.iter().find(|c| c.num_vars() != n) {
            return Err(EdcritError::InvalidVariety(format!(
                "component `{}` uses {} variables, expected {n}",
                c.label,
                c.num_vars()
            )));
        }
        Ok(Self { n, t, components, symmetrized: false })
    }

    /// Checks that the union is invariant under signed permutations and
    /// records the result in `symmetrized`.
    pub fn check_symmetry(&mut self) -> Symmetry {
        let s = union_symmetry(&self.components, self.n);
        self.symmetrized = s == Symmetry::Symmetric;
        s
    }

    pub fn is_arrangement(&self) -> bool {
        self.components.iter().all(|c| c.kind == ComponentKind::AffineSubspace)
    }

    pub fn dim(&self) -> usize {
        self.components.iter().map(ComponentSpec::dim).max().unwrap_or(0)
    }

    pub fn component(&self, label: &str) -> Option<&ComponentSpec> {
        self.components.iter().find(|c| c.label == label)
    }
}

const SYMMETRY_STARTS: usize = 30;
const SYMMETRY_MIN_SAMPLES: usize = 5;

/// Each generator of the group must map every component onto a component.
/// Components are matched by their generators first; unmatched images are
/// sampled and tested against the union.
fn union_symmetry(components: &[ComponentSpec], n: usize) -> Symmetry {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0005_eed0_fa11);
    let mut indeterminate = false;
    for g in SignedPermutation::generators(n) {
        for c in components {
            let img = c.act(&g);
            if components.iter().any(|d| d.same_as(&img)) {
                continue;
            }
            if img.affine.is_some() && components.iter().all(|d| d.affine.is_some()) {
                return Symmetry::NotSymmetric;
            }
            let samples = sample_zero_set(&img.generators, SYMMETRY_STARTS, false, &mut rng);
            if samples.len() < SYMMETRY_MIN_SAMPLES {
                indeterminate = true;
                continue;
            }
            let covered = samples
                .iter()
                .all(|x| components.iter().any(|d| d.generators.iter().all(|f| vanishes_at(f, x, 1e-8))));
            if !covered {
                return Symmetry::NotSymmetric;
            }
        }
    }
    if indeterminate {
        Symmetry::Indeterminate
    } else {
        Symmetry::Symmetric
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EDCriticalPoint {
    pub x: Vec<C64>,
    pub multipliers: Vec<C64>,
    pub component: String,
    pub residual: f64,
    pub is_real: bool,
}

impl EDCriticalPoint {
    pub fn real_x(&self) -> Vec<f64> {
        self.x.iter().map(|z| z.re).collect()
    }
}

/// The Lagrange system `x_i - y_i + Σ_j λ_j ∂f_j/∂x_i = 0`, `f_j = 0` in
/// the unknowns `(x_1..x_n, λ_1..λ_c)`.
pub fn build_lagrange_system(c: &ComponentSpec, y: &[C64]) -> Result<SquareSystem, EdcritError> {
    if c.kind != ComponentKind::CompleteIntersection {
        return Err(EdcritError::KindMismatch(c.label.clone()));
    }
    let n = c.num_vars();
    if y.len() != n {
        return Err(EdcritError::DimensionMismatch { expected: n, got: y.len() });
    }
    let m = n + c.codim;
    let grads: Vec<Vec<MultiPoly>> = c.generators.iter().map(|f| f.grad()).collect();
    let mut eqs = Vec::with_capacity(m);
    for i in 0..n {
        let mut e = MultiPoly::var(m, i) - MultiPoly::constant(m, y[i]);
        for (j, g) in grads.iter().enumerate() {
            e = e + MultiPoly::var(m, n + j) * g[i].extend_vars(m);
        }
        eqs.push(e);
    }
    eqs.extend(c.generators.iter().map(|f| f.extend_vars(m)));
    Ok(SquareSystem::new(eqs)?)
}

/// `max(‖(y - x) - Σ λ_j ∇f_j(x)‖, max_j |f_j(x)|)`.
pub fn lagrange_residual(c: &ComponentSpec, y: &[C64], x: &[C64], multipliers: &[C64]) -> f64 {
    let jac = c.jacobian(x);
    let stationarity = (0..x.len())
        .map(|i| {
            let s: C64 = multipliers.iter().enumerate().map(|(j, l)| l * jac[(j, i)]).sum();
            y[i] - x[i] - s
        })
        .collect::<Vec<_>>();
    let feas = c.generators.iter().map(|f| f.eval_unchecked(x).norm()).fold(0.0, f64::max);
    linalg::norm(&stationarity).max(feas)
}

#[derive(Clone, Debug)]
pub struct EdOptions {
    pub track: TrackOptions,
    pub real_tol: f64,
}

impl Default for EdOptions {
    fn default() -> Self {
        Self { track: TrackOptions::default(), real_tol: REAL_TOL }
    }
}

impl EdOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.track.rng_seed = seed;
        self
    }
}

/// Critical points of the union together with what was thrown away.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalSet {
    /// Sorted by component order, then lexicographically.
    pub points: Vec<EDCriticalPoint>,
    /// Points lying on more than one component.
    pub overlap_discards: usize,
    /// Solutions where the generator Jacobian drops rank.
    pub singular_discards: usize,
    /// Singular endpoints or failed paths reported by the solver.
    pub solver_warnings: usize,
}

impl CriticalSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn component_points(
    c: &ComponentSpec,
    y: &[C64],
    opts: &EdOptions,
    seed: u64,
    warnings: &mut usize,
) -> Result<Vec<EDCriticalPoint>, EdcritError> {
    if let Some(a) = &c.affine {
        return Ok(vec![a.critical_point(y, &c.label, opts.real_tol)]);
    }
    let n = y.len();
    let system = build_lagrange_system(c, y)?;
    let track = TrackOptions { rng_seed: seed, ..opts.track.clone() };
    let sols = homotopy::solve(&system, &track)?;
    *warnings += sols.singular_points.len() + sols.count(homotopy::PathStatus::Failed);
    Ok(sols
        .points
        .into_iter()
        .filter(|z| system.residual(z) < opts.track.endpoint_tol * linalg::norm(z).max(1.0))
        .map(|z| {
            let (x, lambda) = z.split_at(n);
            let residual = lagrange_residual(c, y, x, lambda);
            EDCriticalPoint {
                is_real: x.iter().all(|v| v.im.abs() < opts.real_tol),
                x: x.to_vec(),
                multipliers: lambda.to_vec(),
                component: c.label.clone(),
                residual,
            }
        })
        .collect())
}

/// ED critical points of `y` on every component, keeping regular points
/// that lie on exactly one component.
pub fn ed_critical_points(s: &VarietySpec, y: &[C64], opts: &EdOptions) -> Result<CriticalSet, EdcritError> {
    if y.len() != s.n {
        return Err(EdcritError::DimensionMismatch { expected: s.n, got: y.len() });
    }
    let dedupe = opts.track.dedupe_tol;
    let mut points = Vec::new();
    let mut overlap_discards = 0;
    let mut singular_discards = 0;
    let mut solver_warnings = 0;
    for (k, c) in s.components.iter().enumerate() {
        let seed = opts.track.rng_seed.wrapping_add(k as u64);
        let mut found = component_points(c, y, opts, seed, &mut solver_warnings)?;
        found.sort_by(|a, b| lex_cmp(&a.x, &b.x));
        for p in found {
            if !c.is_regular_at(&p.x) {
                singular_discards += 1;
            } else if s.components.iter().enumerate().any(|(j, d)| j != k && d.contains_point(&p.x, dedupe)) {
                overlap_discards += 1;
            } else {
                points.push(p);
            }
        }
    }
    Ok(CriticalSet { points, overlap_discards, singular_discards, solver_warnings })
}

/// Standard complex Gaussian vector.
pub fn random_complex_data<R: Rng>(n: usize, rng: &mut R) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) * std::f64::consts::FRAC_1_SQRT_2)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdDegree {
    /// Most frequent count; ties go to the larger count.
    pub count: usize,
    pub stable: bool,
    pub per_trial: Vec<usize>,
}

/// Counts critical points for `trials` independent complex Gaussian data
/// points.
pub fn ed_degree(s: &VarietySpec, trials: usize, seed: u64) -> Result<EdDegree, EdcritError> {
    ed_degree_with(s, trials, seed, &EdOptions::default())
}

pub fn ed_degree_with(s: &VarietySpec, trials: usize, seed: u64, opts: &EdOptions) -> Result<EdDegree, EdcritError> {
    if trials < 2 {
        return Err(EdcritError::TooFewTrials(trials));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_trial = Vec::with_capacity(trials);
    for _ in 0..trials {
        let y = random_complex_data(s.n, &mut rng);
        let o = opts.clone().with_seed(rng.random());
        per_trial.push(ed_critical_points(s, &y, &o)?.len());
    }
    let mut freq: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in &per_trial {
        *freq.entry(c).or_default() += 1;
    }
    let count = freq.iter().max_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(b.0))).map(|(&c, _)| c).unwrap_or(0);
    Ok(EdDegree { count, stable: freq.len() == 1, per_trial })
}

/// Convenience: real data as complex.
pub fn complexify(y: &[f64]) -> Vec<C64> {
    y.iter().map(|&v| C64::new(v, 0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{parse_poly, standard_vars};

    fn ci(eqs: &[&str], n: usize, label: &str) -> ComponentSpec {
        let v = standard_vars(n);
        ComponentSpec::complete_intersection(eqs.iter().map(|s| parse_poly(s, &v).unwrap()).collect(), label).unwrap()
    }

    fn circle() -> VarietySpec {
        VarietySpec::new(2, 2, vec![ci(&["x1^2 + x2^2 - 1"], 2, "circle")]).unwrap()
    }

    fn hyperbolas(n: usize) -> VarietySpec {
        let prod = (1..=n).map(|i| format!("x{i}")).collect::<Vec<_>>().join("*");
        VarietySpec::new(
            n,
            n,
            vec![ci(&[&format!("{prod} - 1")], n, "plus"), ci(&[&format!("{prod} + 1")], n, "minus")],
        )
        .unwrap()
    }

    #[test]
    fn lagrange_system_shape() {
        let c = ci(&["x1^2 + x2^2 - 1"], 2, "circle");
        let sys = build_lagrange_system(&c, &complexify(&[3.0, 0.0])).unwrap();
        assert_eq!(sys.dim(), 3);
        assert_eq!(sys.degrees(), &[2, 2, 2]);
        let f = ci(&["x1^4 + x2^4 - 1"], 2, "fermat");
        let sys = build_lagrange_system(&f, &complexify(&[0.3, 0.1])).unwrap();
        assert_eq!(sys.degrees(), &[4, 4, 4]);
    }

    #[test]
    fn lagrange_rejects_affine() {
        let c = ComponentSpec::affine(AffineComponent::coordinate(2, &[0]), "axis");
        assert!(matches!(build_lagrange_system(&c, &complexify(&[1.0, 1.0])), Err(EdcritError::KindMismatch(_))));
    }

    #[test]
    fn hyperbola_kkt_after_eliminating_multiplier() {
        let s = hyperbolas(2);
        let y = complexify(&[0.7, -1.3]);
        let plus = VarietySpec::new(2, 2, vec![s.components[0].clone()]).unwrap();
        let pts = ed_critical_points(&plus, &y, &EdOptions::default()).unwrap();
        assert_eq!(pts.len(), 4);
        for p in &pts.points {
            let (x1, x2) = (p.x[0], p.x[1]);
            assert!((x1 * (x1 - y[0]) - x2 * (x2 - y[1])).norm() < 1e-9);
            assert!((x1 * x2 - 1.0).norm() < 1e-9);
        }
    }

    #[test]
    fn circle_critical_points() {
        let pts = ed_critical_points(&circle(), &complexify(&[3.0, 0.0]), &EdOptions::default()).unwrap();
        assert_eq!(pts.len(), 2);
        assert!((pts.points[0].x[0] + 1.0).norm() < 1e-10 && pts.points[0].x[1].norm() < 1e-10);
        assert!((pts.points[1].x[0] - 1.0).norm() < 1e-10 && pts.points[1].x[1].norm() < 1e-10);
        assert!(pts.points.iter().all(|p| p.is_real && p.residual < 1e-8));
    }

    #[test]
    fn data_on_variety_is_critical() {
        let pts = ed_critical_points(&circle(), &complexify(&[1.0, 0.0]), &EdOptions::default()).unwrap();
        let hit = pts.points.iter().find(|p| (p.x[0] - 1.0).norm() < 1e-12).unwrap();
        assert!(hit.residual < 1e-14);
    }

    #[test]
    fn transpose_orthogonality() {
        let s = hyperbolas(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let y = random_complex_data(2, &mut rng);
        let pts = ed_critical_points(&s, &y, &EdOptions::default()).unwrap();
        assert_eq!(pts.len(), 8);
        for p in &pts.points {
            let c = s.component(&p.component).unwrap();
            let tan = c.tangent_space(&p.x);
            let diff: Vec<C64> = y.iter().zip(&p.x).map(|(a, b)| a - b).collect();
            for k in 0..tan.ncols() {
                let a: Vec<C64> = tan.column(k).iter().copied().collect();
                assert!(linalg::bilinear(&diff, &a).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn degrees_of_small_examples() {
        let d = ed_degree(&circle(), 3, 1).unwrap();
        assert_eq!((d.count, d.stable), (2, true));
        let d = ed_degree(&hyperbolas(2), 3, 1).unwrap();
        assert_eq!((d.count, d.stable), (8, true));
    }

    #[test]
    fn too_few_trials() {
        assert!(matches!(ed_degree(&circle(), 1, 0), Err(EdcritError::TooFewTrials(1))));
    }

    #[test]
    fn overlapping_points_are_discarded() {
        // two lines crossing at the origin; data on the diagonal projects
        // to the crossing point on both
        let a = ComponentSpec::affine(AffineComponent::coordinate(2, &[0]), "a");
        let b = ComponentSpec::affine(AffineComponent::coordinate(2, &[1]), "b");
        let s = VarietySpec::new(2, 2, vec![a, b]).unwrap();
        let out = ed_critical_points(&s, &complexify(&[0.0, 0.0]), &EdOptions::default()).unwrap();
        assert_eq!(out.len(), 0);
        assert_eq!(out.overlap_discards, 2);
        let out = ed_critical_points(&s, &complexify(&[1.0, 2.0]), &EdOptions::default()).unwrap();
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn affine_from_linear_generators() {
        let v = standard_vars(3);
        let gens = vec![parse_poly("x1 - x2", &v).unwrap(), parse_poly("x3", &v).unwrap()];
        let c = ComponentSpec::affine_from_generators(gens, "line").unwrap();
        assert_eq!(c.codim(), 2);
        let a = c.affine_component().unwrap();
        assert_eq!(a.dim(), 1);
        let d = &a.directions()[0];
        assert!((d[0].abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12 && (d[0] - d[1]).abs() < 1e-12);
        let bad = vec![parse_poly("x1^2", &v).unwrap()];
        assert!(ComponentSpec::affine_from_generators(bad, "q").is_err());
        let inconsistent = vec![parse_poly("x1 - 1", &v).unwrap(), parse_poly("x1 - 2", &v).unwrap()];
        assert!(ComponentSpec::affine_from_generators(inconsistent, "q").is_err());
    }

    #[test]
    fn union_symmetry_checks() {
        let mut s = hyperbolas(2);
        assert_eq!(s.check_symmetry(), Symmetry::Symmetric);
        assert!(s.symmetrized);
        let mut half = VarietySpec::new(2, 2, vec![s.components[0].clone()]).unwrap();
        assert_eq!(half.check_symmetry(), Symmetry::NotSymmetric);
        let mut c = circle();
        assert_eq!(c.check_symmetry(), Symmetry::Symmetric);
        let axis = ComponentSpec::affine(AffineComponent::coordinate(2, &[0]), "a");
        let mut one_axis = VarietySpec::new(2, 2, vec![axis]).unwrap();
        assert_eq!(one_axis.check_symmetry(), Symmetry::NotSymmetric);
    }

    #[test]
    fn variety_validation() {
        assert!(VarietySpec::new(3, 2, vec![ci(&["x1"], 3, "a")]).is_err());
        assert!(VarietySpec::new(2, 2, vec![ci(&["x1"], 3, "a")]).is_err());
        assert!(VarietySpec::new(2, 2, vec![]).is_err());
    }
}
