//! Absolutely symmetric subspace arrangements.
//!
//! For a union of affine subspaces the ED critical points of a real data
//! point are just its orthogonal projections onto the maximal components,
//! so this path needs no polynomial solving at all.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::edcrit::EDCriticalPoint;
use crate::linalg::{C64, ZERO};
use crate::polyalg::SignedPermutation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArrangementError {
    #[error("component lives in R^{got}, expected R^{expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("symmetrization is limited to n <= {max}, got n = {n}")]
    TooLarge { n: usize, max: usize },
    #[error("non-finite entry in component data")]
    NonFinite,
}

pub const MAX_SYMMETRIZE_DIM: usize = 8;
/// Tolerance for subspace containment and equality.
pub const SUBSPACE_TOL: f64 = 1e-10;
/// Projections closer than this mark the data point as non-generic.
pub const GENERIC_TOL: f64 = 1e-9;

/// `base + span(directions)` with orthonormal directions. The stored base is
/// the point of the subspace closest to the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineComponent {
    base: Vec<f64>,
    directions: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

impl AffineComponent {
    /// Orthonormalizes `directions` (dropping dependent ones) and moves the
    /// base to the closest point to the origin.
    pub fn new(base: Vec<f64>, directions: Vec<Vec<f64>>) -> Result<Self, ArrangementError> {
        let n = base.len();
        if base.iter().chain(directions.iter().flatten()).any(|v| !v.is_finite()) {
            return Err(ArrangementError::NonFinite);
        }
        let mut ortho: Vec<Vec<f64>> = Vec::new();
        for d in directions {
            if d.len() != n {
                return Err(ArrangementError::DimensionMismatch { expected: n, got: d.len() });
            }
            let scale = norm(&d);
            let mut w = d;
            for _ in 0..2 {
                for q in &ortho {
                    let p = dot(q, &w);
                    w.iter_mut().zip(q).for_each(|(a, b)| *a -= p * b);
                }
            }
            let nw = norm(&w);
            if nw > 1e-12 * scale.max(1e-300) && nw > 0.0 {
                ortho.push(w.into_iter().map(|v| v / nw).collect());
            }
        }
        let mut c = Self { base, directions: ortho };
        let offset = c.tangent_part(&c.base.clone());
        c.base.iter_mut().zip(offset).for_each(|(b, o)| *b -= o);
        Ok(c)
    }

    pub fn point(p: Vec<f64>) -> Self {
        Self::new(p, vec![]).expect("finite point")
    }

    /// Linear span of `directions` (base at the origin).
    pub fn span(n: usize, directions: Vec<Vec<f64>>) -> Result<Self, ArrangementError> {
        Self::new(vec![0.0; n], directions)
    }

    /// The coordinate subspace spanned by `e_i` for `i` in `coords`.
    pub fn coordinate(n: usize, coords: &[usize]) -> Self {
        let dirs = coords
            .iter()
            .map(|&i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                e
            })
            .collect();
        Self { base: vec![0.0; n], directions: dirs }
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    /// Projection of a vector onto the direction space.
    fn tangent_part(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for d in &self.directions {
            let p = dot(d, v);
            out.iter_mut().zip(d).for_each(|(o, di)| *o += p * di);
        }
        out
    }

    /// Orthogonal projection of a real point.
    pub fn project(&self, y: &[f64]) -> Vec<f64> {
        let rel: Vec<f64> = y.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        let t = self.tangent_part(&rel);
        self.base.iter().zip(t).map(|(b, v)| b + v).collect()
    }

    /// Projection of a complex point using the bilinear pairing. The
    /// directions are real, so this is the complexified projection.
    pub fn project_complex(&self, y: &[C64]) -> Vec<C64> {
        let mut out: Vec<C64> = self.base.iter().map(|&b| C64::new(b, 0.0)).collect();
        for d in &self.directions {
            let p: C64 = y.iter().zip(&self.base).zip(d).map(|((yi, bi), di)| (yi - bi) * di).sum();
            out.iter_mut().zip(d).for_each(|(o, di)| *o += p * di);
        }
        out
    }

    /// Distance from a real point to the subspace.
    pub fn distance(&self, y: &[f64]) -> f64 {
        let p = self.project(y);
        norm(&y.iter().zip(p).map(|(a, b)| a - b).collect::<Vec<_>>())
    }

    /// Modulus of the residual `y - P(y)` for a complex point.
    pub fn distance_complex(&self, y: &[C64]) -> f64 {
        let p = self.project_complex(y);
        y.iter().zip(p).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    /// `other ⊆ self`, tested by projecting `other`'s base and directions.
    pub fn contains(&self, other: &Self) -> bool {
        if other.ambient_dim() != self.ambient_dim() || other.dim() > self.dim() {
            return false;
        }
        let scale = norm(&other.base).max(1.0);
        if self.distance(&other.base) > SUBSPACE_TOL * scale {
            return false;
        }
        other.directions.iter().all(|d| {
            let t = self.tangent_part(d);
            norm(&d.iter().zip(t).map(|(a, b)| a - b).collect::<Vec<_>>()) <= SUBSPACE_TOL
        })
    }

    pub fn same_subspace(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.contains(other) && other.contains(self)
    }

    /// Image `{g·x : x ∈ self}`.
    pub fn act(&self, g: &SignedPermutation) -> Self {
        Self {
            base: g.apply(&self.base),
            directions: self.directions.iter().map(|d| g.apply(d)).collect(),
        }
    }

    /// Orthonormal basis of the orthogonal complement of the direction space.
    pub fn normal_basis(&self) -> Vec<Vec<f64>> {
        let n = self.ambient_dim();
        let mut all = self.directions.clone();
        let mut normals = Vec::new();
        for k in 0..n {
            let mut w = vec![0.0; n];
            w[k] = 1.0;
            for _ in 0..2 {
                for q in &all {
                    let p = dot(q, &w);
                    w.iter_mut().zip(q).for_each(|(a, b)| *a -= p * b);
                }
            }
            let nw = norm(&w);
            if nw > 1e-8 {
                let w: Vec<f64> = w.into_iter().map(|v| v / nw).collect();
                all.push(w.clone());
                normals.push(w);
            }
            if normals.len() + self.dim() == n {
                break;
            }
        }
        normals
    }

    /// The ED critical point of complex data `y` on this component with its
    /// multipliers in the normal basis.
    pub fn critical_point(&self, y: &[C64], label: &str, real_tol: f64) -> EDCriticalPoint {
        let x = self.project_complex(y);
        let diff: Vec<C64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
        let normals = self.normal_basis();
        let multipliers: Vec<C64> = normals
            .iter()
            .map(|nv| diff.iter().zip(nv).map(|(a, b)| a * b).sum())
            .collect();
        let mut recon = vec![ZERO; y.len()];
        for (m, nv) in multipliers.iter().zip(&normals) {
            recon.iter_mut().zip(nv).for_each(|(r, v)| *r += m * v);
        }
        let residual = diff.iter().zip(&recon).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        let is_real = x.iter().all(|z| z.im.abs() < real_tol);
        EDCriticalPoint { x, multipliers, component: label.to_string(), residual, is_real }
    }
}

/// Orthogonal projection of `y` onto `c`.
pub fn project(y: &[f64], c: &AffineComponent) -> Vec<f64> {
    c.project(y)
}

#[derive(Clone, Debug)]
pub struct ArrangementCritical {
    pub points: Vec<EDCriticalPoint>,
    /// False when two projections coincided (the duplicate is counted once).
    pub generic: bool,
}

/// One projection per component; all are real for real data.
pub fn arrangement_critical(y: &[f64], comps: &[AffineComponent]) -> ArrangementCritical {
    let yc: Vec<C64> = y.iter().map(|&v| C64::new(v, 0.0)).collect();
    let mut points: Vec<EDCriticalPoint> = Vec::with_capacity(comps.len());
    let mut generic = true;
    for (k, c) in comps.iter().enumerate() {
        let p = c.critical_point(&yc, &format!("component-{k}"), 1e-7);
        let dup = points.iter().any(|q| {
            q.x.iter().zip(&p.x).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt() < GENERIC_TOL
        });
        if dup {
            generic = false;
        } else {
            points.push(p);
        }
    }
    ArrangementCritical { points, generic }
}

/// Orbit of `c` under all signed permutations, deduplicated as subspaces.
///
/// The orbit is closed under the group generators, which is the same as
/// closing it under the whole group.
pub fn symmetrize(c: &AffineComponent, n: usize) -> Result<Vec<AffineComponent>, ArrangementError> {
    if n > MAX_SYMMETRIZE_DIM {
        return Err(ArrangementError::TooLarge { n, max: MAX_SYMMETRIZE_DIM });
    }
    if c.ambient_dim() != n {
        return Err(ArrangementError::DimensionMismatch { expected: n, got: c.ambient_dim() });
    }
    let gens = SignedPermutation::generators(n);
    let mut orbit = vec![c.clone()];
    let mut frontier = 0;
    while frontier < orbit.len() {
        let cur = orbit[frontier].clone();
        frontier += 1;
        for g in &gens {
            let img = cur.act(g);
            if !orbit.iter().any(|o| o.same_subspace(&img)) {
                orbit.push(img);
            }
        }
    }
    Ok(orbit)
}

/// Drop components contained in another one; exact duplicates keep the
/// first representative.
pub fn maximal_components(comps: &[AffineComponent]) -> Vec<AffineComponent> {
    let mut out: Vec<AffineComponent> = Vec::new();
    for (i, c) in comps.iter().enumerate() {
        let dominated = comps.iter().enumerate().any(|(j, d)| {
            j != i && d.contains(c) && (!c.contains(d) || j < i)
        });
        if !dominated {
            out.push(c.clone());
        }
    }
    out
}

/// True when every group generator maps each component onto some component.
pub fn is_closed_under_group(comps: &[AffineComponent]) -> bool {
    let Some(n) = comps.first().map(AffineComponent::ambient_dim) else {
        return true;
    };
    let gens = SignedPermutation::generators(n);
    comps.iter().all(|c| {
        gens.iter().all(|g| {
            let img = c.act(g);
            comps.iter().any(|d| d.same_subspace(&img))
        })
    })
}
