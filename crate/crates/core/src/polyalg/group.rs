//! The signed-permutation group acting on coordinates and polynomials.

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::{MultiPoly, PolyError};
use crate::linalg::{self, CMatrix, CVector, C64};

/// Element of the hyperoctahedral group. Acts on vectors by
/// `(g·x)_i = signs[i] * x[perm[i]]` and on polynomials by `(g·f)(x) = f(g·x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self, PolyError> {
        let n = perm.len();
        if signs.len() != n {
            return Err(PolyError::InvalidPermutation(format!(
                "{} signs for {} coordinates",
                signs.len(),
                n
            )));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(PolyError::InvalidPermutation(format!("{perm:?} is not a bijection")));
            }
            seen[p] = true;
        }
        if let Some(s) = signs.iter().find(|s| s.abs() != 1) {
            return Err(PolyError::InvalidPermutation(format!("sign {s} is not ±1")));
        }
        Ok(Self { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        Self { perm: (0..n).collect(), signs: vec![1; n] }
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut g = Self::identity(n);
        g.perm.swap(i, j);
        g
    }

    pub fn sign_flip(n: usize, i: usize) -> Self {
        let mut g = Self::identity(n);
        g.signs[i] = -1;
        g
    }

    /// Adjacent transpositions and single sign flips; together they generate the group.
    pub fn generators(n: usize) -> Vec<Self> {
        let mut out: Vec<Self> = (0..n.saturating_sub(1)).map(|i| Self::transposition(n, i, i + 1)).collect();
        out.extend((0..n).map(|i| Self::sign_flip(n, i)));
        out
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn apply<T>(&self, x: &[T]) -> Vec<T>
    where
        T: Copy + std::ops::Neg<Output = T>,
    {
        self.perm
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| if s < 0 { -x[p] } else { x[p] })
            .collect()
    }

    /// The element acting on vectors as `x ↦ self·(other·x)`.
    pub fn compose(&self, other: &Self) -> Self {
        let perm = self.perm.iter().map(|&p| other.perm[p]).collect();
        let signs = self
            .perm
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| s * other.signs[p])
            .collect();
        Self { perm, signs }
    }

    pub fn inverse(&self) -> Self {
        let n = self.len();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        Self { perm, signs }
    }

    /// Substitute `x_i ↦ sign_i · x_{perm(i)}`.
    pub fn act(&self, p: &MultiPoly) -> Result<MultiPoly, PolyError> {
        if p.num_vars() != self.len() {
            return Err(PolyError::DimensionMismatch { expected: self.len(), got: p.num_vars() });
        }
        let terms = p.terms().map(|(e, c)| {
            let mut out = vec![0; e.len()];
            let mut coef = *c;
            for (i, &k) in e.iter().enumerate() {
                out[self.perm[i]] += k;
                if self.signs[i] < 0 && k % 2 == 1 {
                    coef = -coef;
                }
            }
            (out, coef)
        });
        MultiPoly::from_terms(p.num_vars(), terms)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    Symmetric,
    NotSymmetric,
    Indeterminate,
}

const SAMPLE_STARTS: usize = 50;
const MIN_SAMPLES: usize = 10;

/// Decide whether the zero set of `generators` is invariant under every
/// signed permutation.
///
/// First tries span membership: if each acted generator is a linear
/// combination of the originals the zero set is certainly invariant.
/// Otherwise the zero set is sampled by Newton's method from random complex
/// starts and the acted generators are evaluated there.
pub fn is_abs_symmetric(generators: &[MultiPoly]) -> Symmetry {
    let Some(n) = generators.first().map(MultiPoly::num_vars) else {
        return Symmetry::Symmetric;
    };
    if generators.iter().any(|g| g.num_vars() != n) {
        return Symmetry::NotSymmetric;
    }
    let group = SignedPermutation::generators(n);
    let acted: Vec<MultiPoly> = group
        .iter()
        .flat_map(|g| generators.iter().map(move |f| g.act(f).expect("same dimension")))
        .collect();
    if acted.iter().all(|q| in_span(q, generators)) {
        return Symmetry::Symmetric;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_5a3b);
    let samples = sample_zero_set(generators, SAMPLE_STARTS, false, &mut rng);
    if samples.len() < MIN_SAMPLES {
        return Symmetry::Indeterminate;
    }
    let vanishes = samples.iter().all(|x| acted.iter().all(|q| vanishes_at(q, x, 1e-8)));
    if vanishes {
        Symmetry::Symmetric
    } else {
        Symmetry::NotSymmetric
    }
}

/// `|p(x)| <= tol * sum_e |c_e x^e|`, a scale-aware zero test.
pub(crate) fn vanishes_at(p: &MultiPoly, x: &[C64], tol: f64) -> bool {
    let magnitude: f64 = p
        .terms()
        .map(|(e, c)| c.norm() * e.iter().zip(x).map(|(&k, xi)| xi.norm().powi(k as i32)).product::<f64>())
        .sum();
    p.eval_unchecked(x).norm() <= tol * magnitude.max(1.0)
}

/// Least-squares test of `q ∈ span(basis)` on coefficient vectors.
pub(crate) fn in_span(q: &MultiPoly, basis: &[MultiPoly]) -> bool {
    if q.is_zero() {
        return true;
    }
    let mut monos: Vec<&Vec<u32>> = basis.iter().flat_map(|b| b.terms().map(|(e, _)| e)).collect();
    monos.extend(q.terms().map(|(e, _)| e));
    monos.sort();
    monos.dedup();
    let a = CMatrix::from_fn(monos.len(), basis.len(), |r, c| basis[c].coeff(monos[r]));
    let b = CVector::from_iterator(monos.len(), monos.iter().map(|e| q.coeff(e)));
    let Some(x) = linalg::min_norm_solve(&a, &b) else {
        return false;
    };
    let resid = (&a * x - &b).norm();
    resid <= 1e-9 * b.norm().max(1.0)
}

/// Points on the zero set of `gens` found by minimum-norm Newton iteration
/// from `starts` random starts. With `real = true` the starts are real, so
/// real-coefficient systems stay real.
pub fn sample_zero_set<R: Rng>(gens: &[MultiPoly], starts: usize, real: bool, rng: &mut R) -> Vec<Vec<C64>> {
    let Some(n) = gens.first().map(MultiPoly::num_vars) else {
        return Vec::new();
    };
    let jac: Vec<Vec<MultiPoly>> = gens.iter().map(MultiPoly::grad).collect();
    let mut out = Vec::new();
    for _ in 0..starts {
        let mut x: Vec<C64> = (0..n)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = if real { 0.0 } else { rng.sample(StandardNormal) };
                C64::new(re, im)
            })
            .collect();
        let mut ok = false;
        for _ in 0..100 {
            let f = DVector::from_iterator(gens.len(), gens.iter().map(|g| g.eval_unchecked(&x)));
            if gens.iter().all(|g| vanishes_at(g, &x, 1e-12)) {
                ok = true;
                break;
            }
            let j = CMatrix::from_fn(gens.len(), n, |r, c| jac[r][c].eval_unchecked(&x));
            let Some(dx) = linalg::min_norm_solve(&j, &f) else { break };
            for (xi, d) in x.iter_mut().zip(dx.iter()) {
                *xi -= d;
            }
            if linalg::norm(&x) > 1e8 || x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                break;
            }
        }
        if ok {
            if real {
                x.iter_mut().for_each(|z| z.im = 0.0);
            }
            out.push(x);
        }
    }
    out
}
