//! Total-degree homotopy continuation for square polynomial systems.
//!
//! The start system is `g_i = x_i^{d_i} - 1` and the homotopy is
//! `H(x, t) = (1 - t)·γ·g(x) + t·f(x)` with a random unit-modulus `γ`.
//! Each of the Bézout-many start solutions is tracked from `t = 0` to
//! `t = 1` with an Euler predictor and a short Newton corrector, then
//! polished by Newton's method on `f` itself.

use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, CMatrix, CVector, C64, ZERO};
use crate::polyalg::MultiPoly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HomotopyError {
    #[error("system is not square: {equations} equations in {variables} variables")]
    NotSquare { equations: usize, variables: usize },
    #[error("equation {0} is constant; every equation needs degree at least one")]
    ConstantEquation(usize),
    #[error("point has length {got}, system has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("Jacobian is numerically singular at iteration {0}")]
    SingularJacobian(usize),
    #[error("Newton did not converge in {iters} iterations (residual {residual:e})")]
    NoConvergence { iters: usize, residual: f64 },
    #[error("invalid tracking options: {0}")]
    InvalidOptions(String),
}

/// A polynomial flattened for repeated evaluation.
#[derive(Clone, Debug)]
struct Compiled {
    terms: Vec<(Vec<u32>, C64)>,
}

impl Compiled {
    fn new(p: &MultiPoly) -> Self {
        Self { terms: p.terms().map(|(e, c)| (e.clone(), *c)).collect() }
    }

    fn eval(&self, powers: &[Vec<C64>]) -> C64 {
        let mut acc = ZERO;
        for (e, c) in &self.terms {
            let mut m = *c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    m *= powers[i][k as usize];
                }
            }
            acc += m;
        }
        acc
    }
}

/// `m` polynomials in `m` unknowns.
#[derive(Clone, Debug)]
pub struct SquareSystem {
    polys: Vec<MultiPoly>,
    degrees: Vec<u32>,
    f: Vec<Compiled>,
    jac: Vec<Vec<Compiled>>,
    max_deg: u32,
}

impl SquareSystem {
    pub fn new(polys: Vec<MultiPoly>) -> Result<Self, HomotopyError> {
        let m = polys.len();
        if let Some(p) = polys.iter().find(|p| p.num_vars() != m) {
            return Err(HomotopyError::NotSquare { equations: m, variables: p.num_vars() });
        }
        if m == 0 {
            return Err(HomotopyError::NotSquare { equations: 0, variables: 0 });
        }
        let degrees: Vec<u32> = polys.iter().map(MultiPoly::total_degree).collect();
        if let Some(i) = degrees.iter().position(|&d| d == 0) {
            return Err(HomotopyError::ConstantEquation(i));
        }
        let f = polys.iter().map(Compiled::new).collect();
        let jac = polys
            .iter()
            .map(|p| p.grad().iter().map(Compiled::new).collect())
            .collect();
        let max_deg = *degrees.iter().max().expect("nonempty");
        Ok(Self { polys, degrees, f, jac, max_deg })
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn dim(&self) -> usize {
        self.polys.len()
    }

    fn powers(&self, x: &[C64]) -> Vec<Vec<C64>> {
        x.iter()
            .map(|&xi| {
                let mut row = Vec::with_capacity(self.max_deg as usize + 1);
                let mut acc = C64::new(1.0, 0.0);
                for _ in 0..=self.max_deg {
                    row.push(acc);
                    acc *= xi;
                }
                row
            })
            .collect()
    }

    pub fn eval(&self, x: &[C64]) -> Vec<C64> {
        let pw = self.powers(x);
        self.f.iter().map(|p| p.eval(&pw)).collect()
    }

    pub fn jacobian(&self, x: &[C64]) -> CMatrix {
        let pw = self.powers(x);
        let m = self.dim();
        CMatrix::from_fn(m, m, |r, c| self.jac[r][c].eval(&pw))
    }

    fn eval_with_jacobian(&self, x: &[C64]) -> (Vec<C64>, CMatrix) {
        let pw = self.powers(x);
        let m = self.dim();
        let f = self.f.iter().map(|p| p.eval(&pw)).collect();
        let j = CMatrix::from_fn(m, m, |r, c| self.jac[r][c].eval(&pw));
        (f, j)
    }

    /// `max_i |f_i(x)|`.
    pub fn residual(&self, x: &[C64]) -> f64 {
        linalg::max_abs(&self.eval(x))
    }
}

/// Product of the total degrees.
pub fn bezout_bound(system: &SquareSystem) -> u64 {
    system.degrees.iter().map(|&d| u64::from(d)).product()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrackOptions {
    pub step_init: f64,
    pub step_min: f64,
    /// Relative size of the last corrector update accepted as converged.
    pub corrector_tol: f64,
    pub endpoint_tol: f64,
    pub divergence_bound: f64,
    pub dedupe_tol: f64,
    /// Corrector iterations per step.
    pub max_newton_iters: usize,
    pub rng_seed: u64,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self {
            step_init: 0.02,
            step_min: 1e-10,
            corrector_tol: 1e-9,
            endpoint_tol: 1e-8,
            divergence_bound: 1e8,
            dedupe_tol: 1e-6,
            max_newton_iters: 3,
            rng_seed: 42,
        }
    }
}

impl TrackOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    fn validate(&self) -> Result<(), HomotopyError> {
        let positive = [
            ("step_init", self.step_init),
            ("step_min", self.step_min),
            ("corrector_tol", self.corrector_tol),
            ("endpoint_tol", self.endpoint_tol),
            ("divergence_bound", self.divergence_bound),
            ("dedupe_tol", self.dedupe_tol),
        ];
        if let Some((name, v)) = positive.iter().find(|(_, v)| v.is_nan() || *v <= 0.0) {
            return Err(HomotopyError::InvalidOptions(format!("{name} = {v} must be positive")));
        }
        if self.step_min > self.step_init {
            return Err(HomotopyError::InvalidOptions("step_min exceeds step_init".into()));
        }
        if self.max_newton_iters == 0 {
            return Err(HomotopyError::InvalidOptions("max_newton_iters must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PathStatus {
    Converged,
    Singular,
    Diverged,
    Failed,
}

#[derive(Clone, Debug, Serialize)]
pub struct PathDiagnostic {
    pub status: PathStatus,
    pub steps: usize,
    pub t_reached: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolutionSet {
    /// Regular endpoints, deduplicated and sorted lexicographically.
    pub points: Vec<Vec<C64>>,
    /// Endpoints whose Jacobian is numerically singular, deduplicated.
    pub singular_points: Vec<Vec<C64>>,
    pub path_diagnostics: Vec<PathDiagnostic>,
    pub bezout: u64,
    /// Regular endpoints reached by more than one path.
    pub duplicate_paths: usize,
}

impl SolutionSet {
    pub fn count(&self, status: PathStatus) -> usize {
        self.path_diagnostics.iter().filter(|d| d.status == status).count()
    }
}

const ENDGAME_ITERS: usize = 50;
const SINGULAR_REL: f64 = 1e-8;
const SWITCH_T: f64 = 1.0 - 1e-8;
const MAX_STEPS: usize = 200_000;
const POLISH_ITERS: usize = 40;
/// A regular root is the endpoint of exactly one path; several paths ending
/// at an ill-conditioned point mark it as singular.
const CLUSTER_COND: f64 = 1e-6;

/// Newton's method on `system` from `x0` until `max |f_i| < tol`.
pub fn newton_refine(
    system: &SquareSystem,
    x0: &[C64],
    tol: f64,
    max_iters: usize,
) -> Result<Vec<C64>, HomotopyError> {
    if x0.len() != system.dim() {
        return Err(HomotopyError::DimensionMismatch { expected: system.dim(), got: x0.len() });
    }
    let mut x = x0.to_vec();
    let mut residual = f64::INFINITY;
    for it in 0..=max_iters {
        let (f, j) = system.eval_with_jacobian(&x);
        residual = linalg::max_abs(&f);
        if residual < tol {
            return Ok(x);
        }
        if it == max_iters {
            break;
        }
        let dx = linalg::solve(&j, &CVector::from_vec(f)).ok_or(HomotopyError::SingularJacobian(it))?;
        for (xi, d) in x.iter_mut().zip(dx.iter()) {
            *xi -= d;
        }
    }
    Err(HomotopyError::NoConvergence { iters: max_iters, residual })
}

struct Tracker<'a> {
    target: &'a SquareSystem,
    gamma: C64,
    opts: &'a TrackOptions,
}

impl Tracker<'_> {
    /// H(x,t), dH/dx and dH/dt.
    fn homotopy(&self, x: &[C64], t: f64) -> (CVector, CMatrix, CVector) {
        let (f, jf) = self.target.eval_with_jacobian(x);
        let m = x.len();
        let s = 1.0 - t;
        let mut h = CVector::zeros(m);
        let mut ht = CVector::zeros(m);
        let mut hx = jf * C64::new(t, 0.0);
        for i in 0..m {
            let d = self.target.degrees[i];
            let xd1 = x[i].powu(d - 1);
            let g = xd1 * x[i] - 1.0;
            h[i] = self.gamma * g * s + f[i] * t;
            ht[i] = f[i] - self.gamma * g;
            hx[(i, i)] += self.gamma * xd1 * (f64::from(d) * s);
        }
        (h, hx, ht)
    }

    fn correct(&self, x: &mut [C64], t: f64) -> bool {
        let mut prev = f64::INFINITY;
        for _ in 0..self.opts.max_newton_iters {
            let (h, hx, _) = self.homotopy(x, t);
            let Some(dx) = linalg::solve(&hx, &h) else { return false };
            for (xi, d) in x.iter_mut().zip(dx.iter()) {
                *xi -= d;
            }
            let step = dx.norm();
            if step > 0.5 * prev {
                return false;
            }
            if step <= self.opts.corrector_tol * (1.0 + linalg::norm(x)) {
                return true;
            }
            prev = step;
        }
        false
    }

    /// Track one start solution to `t = 1` and polish; returns the endpoint on success.
    fn track(&self, start: Vec<C64>) -> (PathDiagnostic, Option<Vec<C64>>) {
        let opts = self.opts;
        let mut x = start;
        let mut t = 0.0_f64;
        let mut h = opts.step_init;
        let mut streak = 0;
        let mut steps = 0;
        let diag = |status, steps, t| PathDiagnostic { status, steps, t_reached: t };
        while t < 1.0 {
            steps += 1;
            if steps > MAX_STEPS {
                return (diag(PathStatus::Failed, steps, t), None);
            }
            let dt = h.min(1.0 - t);
            let (_, hx, ht) = self.homotopy(&x, t);
            let Some(v) = linalg::solve(&hx, &(-ht)) else {
                return (diag(PathStatus::Failed, steps, t), None);
            };
            let mut trial: Vec<C64> = x.iter().zip(v.iter()).map(|(xi, vi)| xi + vi * dt).collect();
            let t1 = if dt == 1.0 - t { 1.0 } else { t + dt };
            if self.correct(&mut trial, t1) {
                x = trial;
                t = t1;
                streak += 1;
                if streak >= 5 {
                    h = (2.0 * h).min(opts.step_init);
                    streak = 0;
                }
                if linalg::norm(&x) > opts.divergence_bound {
                    return (diag(PathStatus::Diverged, steps, t), None);
                }
            } else {
                h *= 0.5;
                streak = 0;
                if h < opts.step_min {
                    if t >= SWITCH_T {
                        break;
                    }
                    return (diag(PathStatus::Diverged, steps, t), None);
                }
            }
        }
        match newton_refine(self.target, &x, opts.endpoint_tol, ENDGAME_ITERS) {
            Ok(end) => {
                let end = self.polish(end);
                let cond = conditioning(&self.target.jacobian(&end));
                let status = if cond.smin < SINGULAR_REL * cond.smax.max(1.0) {
                    PathStatus::Singular
                } else {
                    PathStatus::Converged
                };
                (diag(status, steps, t), Some(end))
            }
            Err(_) => {
                let status = if linalg::norm(&x) > 1e4 { PathStatus::Diverged } else { PathStatus::Failed };
                (diag(status, steps, t), None)
            }
        }
    }

    /// Extra Newton sweeps down to the precision floor. Near a singular root
    /// this drives the Jacobian towards its singular limit.
    fn polish(&self, mut x: Vec<C64>) -> Vec<C64> {
        let mut prev = f64::INFINITY;
        for _ in 0..POLISH_ITERS {
            let (f, j) = self.target.eval_with_jacobian(&x);
            let Some(dx) = linalg::solve(&j, &CVector::from_vec(f)) else { break };
            let step = dx.norm();
            if step.is_nan() || step >= prev {
                break;
            }
            for (xi, d) in x.iter_mut().zip(dx.iter()) {
                *xi -= d;
            }
            prev = step;
            if step <= 1e-15 * (1.0 + linalg::norm(&x)) {
                break;
            }
        }
        x
    }
}

struct Conditioning {
    smin: f64,
    smax: f64,
}

fn conditioning(j: &CMatrix) -> Conditioning {
    let sv = linalg::singular_values(j);
    Conditioning { smax: sv.first().copied().unwrap_or(0.0), smin: sv.last().copied().unwrap_or(0.0) }
}

/// Start solutions of `x_i^{d_i} = 1`: all tuples of roots of unity.
fn start_solutions(degrees: &[u32]) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = vec![Vec::new()];
    for &d in degrees {
        let roots: Vec<C64> = (0..d).map(|k| C64::from_polar(1.0, TAU * f64::from(k) / f64::from(d))).collect();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                roots.iter().map(move |r| {
                    let mut p = prefix.clone();
                    p.push(*r);
                    p
                })
            })
            .collect();
    }
    out
}

/// Lexicographic order on (re, im) of each coordinate.
pub fn lex_cmp(a: &[C64], b: &[C64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o.is_ne() {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

pub(crate) fn close(a: &[C64], b: &[C64], rel: f64) -> bool {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    d <= rel * linalg::norm(a).max(linalg::norm(b)).max(1.0)
}

/// Group points within relative distance `rel` of a group's first member,
/// groups in lexicographic order of their representatives.
pub(crate) fn cluster_sorted(mut pts: Vec<Vec<C64>>, rel: f64) -> Vec<Vec<Vec<C64>>> {
    pts.sort_by(|a, b| lex_cmp(a, b));
    let mut out: Vec<Vec<Vec<C64>>> = Vec::new();
    for p in pts {
        match out.iter_mut().find(|g| close(&g[0], &p, rel)) {
            Some(g) => g.push(p),
            None => out.push(vec![p]),
        }
    }
    out
}

pub fn solve(system: &SquareSystem, opts: &TrackOptions) -> Result<SolutionSet, HomotopyError> {
    opts.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
    let gamma = C64::from_polar(1.0, rng.random_range(0.0..TAU));
    let tracker = Tracker { target: system, gamma, opts };

    let mut diagnostics = Vec::new();
    let mut finite: Vec<(Vec<C64>, bool)> = Vec::new();
    for start in start_solutions(&system.degrees) {
        let (d, end) = tracker.track(start);
        if let Some(p) = end {
            finite.push((p, d.status == PathStatus::Singular));
        }
        diagnostics.push(d);
    }

    let flagged: Vec<Vec<C64>> = finite.iter().filter(|(_, s)| *s).map(|(p, _)| p.clone()).collect();
    let mut points = Vec::new();
    let mut singular_points = Vec::new();
    let mut duplicate_paths = 0;
    for cluster in cluster_sorted(finite.into_iter().map(|(p, _)| p).collect(), opts.dedupe_tol) {
        let rep = cluster[0].clone();
        let touches_singular = cluster.iter().any(|p| flagged.contains(p));
        let is_singular = touches_singular
            || (cluster.len() > 1 && {
                let c = conditioning(&system.jacobian(&rep));
                c.smin < CLUSTER_COND * c.smax.max(1.0)
            });
        if is_singular {
            singular_points.push(rep);
        } else {
            duplicate_paths += cluster.len() - 1;
            points.push(rep);
        }
    }
    Ok(SolutionSet {
        points,
        singular_points,
        path_diagnostics: diagnostics,
        bezout: bezout_bound(system),
        duplicate_paths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{parse_poly, standard_vars};

    fn system(eqs: &[&str]) -> SquareSystem {
        let v = standard_vars(eqs.len());
        SquareSystem::new(eqs.iter().map(|s| parse_poly(s, &v).unwrap()).collect()).unwrap()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn bezout_examples() {
        assert_eq!(bezout_bound(&system(&["x1^2 - 1"])), 2);
        assert_eq!(bezout_bound(&system(&["x1^2 + 3*x2^2 - 1", "x1*x2 + x1 - 2"])), 4);
    }

    #[test]
    fn rejects_malformed_systems() {
        let v = standard_vars(2);
        let p = parse_poly("x1 + x2", &v).unwrap();
        assert!(matches!(SquareSystem::new(vec![p.clone()]), Err(HomotopyError::NotSquare { .. })));
        let k = parse_poly("3", &v).unwrap();
        assert_eq!(SquareSystem::new(vec![p, k]).unwrap_err(), HomotopyError::ConstantEquation(1));
    }

    #[test]
    fn invalid_options() {
        let f = system(&["x1^2 - 1"]);
        let opts = TrackOptions { step_min: 1.0, ..TrackOptions::default() };
        assert!(matches!(solve(&f, &opts), Err(HomotopyError::InvalidOptions(_))));
        let opts = TrackOptions { endpoint_tol: 0.0, ..TrackOptions::default() };
        assert!(matches!(solve(&f, &opts), Err(HomotopyError::InvalidOptions(_))));
    }

    #[test]
    fn solves_square_roots_of_one() {
        let sols = solve(&system(&["x1^2 - 1"]), &TrackOptions::default()).unwrap();
        assert_eq!(sols.points.len(), 2);
        assert!((sols.points[0][0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((sols.points[1][0] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn circle_meets_diagonal() {
        let sols = solve(&system(&["x1^2 + x2^2 - 1", "x1 - x2"]), &TrackOptions::default()).unwrap();
        // x1 = x2, 2 x1^2 = 1
        let r = 0.5_f64.sqrt();
        assert_eq!(sols.points.len(), 2);
        assert!((sols.points[0][0] - c(-r, 0.0)).norm() < 1e-10);
        assert!((sols.points[1][1] - c(r, 0.0)).norm() < 1e-10);
        assert_eq!(sols.count(PathStatus::Diverged) + sols.count(PathStatus::Failed), 0);
        assert_eq!(sols.bezout, 2);
    }

    #[test]
    fn hyperbola_with_diverging_paths() {
        // x1 x2 = 1, x1 = 2 x2: two finite roots, Bézout 2
        let sols = solve(&system(&["x1*x2 - 1", "x1 - 2*x2"]), &TrackOptions::default()).unwrap();
        assert_eq!(sols.points.len(), 2);
        let parallel = solve(&system(&["x1*x2 - 1", "x1*x2 + x1 - 3"]), &TrackOptions::default()).unwrap();
        // x1 = 2, x2 = 1/2: one finite root, other paths diverge
        assert_eq!(parallel.points.len(), 1);
        assert!((parallel.points[0][0] - c(2.0, 0.0)).norm() < 1e-10);
        assert!(parallel.count(PathStatus::Diverged) >= 1);
    }

    #[test]
    fn double_root_flagged_singular() {
        let sols = solve(&system(&["(x1 - 1)^2"]), &TrackOptions::default()).unwrap();
        assert!(sols.points.is_empty());
        assert_eq!(sols.singular_points.len(), 1);
    }

    #[test]
    fn start_system_is_recovered_exactly() {
        let f = system(&["x1^3 - 1", "x2^2 - 1"]);
        let sols = solve(&f, &TrackOptions::default()).unwrap();
        assert_eq!(sols.points.len() as u64, bezout_bound(&f));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let f = system(&["x1^2 + x2^2 - 1 + 0.3*x1*x2", "x1^3 - x2 + i"]);
        let a = solve(&f, &TrackOptions::default()).unwrap();
        let b = solve(&f, &TrackOptions::default()).unwrap();
        assert_eq!(a.points, b.points);
    }

    #[test]
    fn newton_examples() {
        let f = system(&["x1^2 - 1"]);
        let x = newton_refine(&f, &[c(1.1, 0.0)], 1e-12, 50).unwrap();
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-12);
        let x = newton_refine(&f, &[c(0.1, 0.9)], 1e-12, 100).unwrap();
        assert!((x[0].norm() - 1.0).abs() < 1e-12);
        assert!(matches!(newton_refine(&f, &[ZERO], 1e-12, 10), Err(HomotopyError::SingularJacobian(0))));
        assert!(matches!(newton_refine(&f, &[ZERO, ZERO], 1e-12, 10), Err(HomotopyError::DimensionMismatch { .. })));
    }

    #[test]
    fn newton_recovers_circle_line_root() {
        let f = system(&["x1^2 + x2^2 - 1", "x1 - x2"]);
        let r = 0.5_f64.sqrt();
        let x = newton_refine(&f, &[c(r + 1e-3, 0.0), c(r - 2e-3, 1e-3)], 1e-14, 50).unwrap();
        assert!((x[0] - c(r, 0.0)).norm() < 1e-12 && (x[1] - c(r, 0.0)).norm() < 1e-12);
    }
}
