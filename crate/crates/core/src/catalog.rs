//! Built-in orthogonally invariant varieties, described by their diagonal
//! restrictions.

use serde::Serialize;
use thiserror::Error;

use crate::arrangements::{symmetrize, AffineComponent};
use crate::edcrit::{ComponentSpec, VarietySpec};
use crate::linalg::C64;
use crate::polyalg::MultiPoly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
    #[error("bad parameters for `{name}`: {msg}")]
    BadParameters { name: String, msg: String },
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub spec: VarietySpec,
    /// `None` when no closed form is built in.
    pub expected_ed_degree: Option<u64>,
    pub expected_dim_m: usize,
    pub notes: String,
}

/// Summary row for listings.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogRow {
    pub name: String,
    pub n: usize,
    pub t: usize,
    pub expected_ed_degree: Option<u64>,
    pub expected_dim_m: usize,
    pub notes: String,
}

impl CatalogEntry {
    pub fn row(&self) -> CatalogRow {
        CatalogRow {
            name: self.name.clone(),
            n: self.spec.n,
            t: self.spec.t,
            expected_ed_degree: self.expected_ed_degree,
            expected_dim_m: self.expected_dim_m,
            notes: self.notes.clone(),
        }
    }
}

fn bad(name: &str, msg: impl Into<String>) -> CatalogError {
    CatalogError::BadParameters { name: name.into(), msg: msg.into() }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

fn arrangement(n: usize, t: usize, comps: Vec<AffineComponent>, prefix: &str) -> VarietySpec {
    let cs = comps.into_iter().enumerate().map(|(k, c)| ComponentSpec::affine(c, format!("{prefix}{k}"))).collect();
    let mut spec = VarietySpec::new(n, t, cs).expect("valid catalog shape");
    spec.symmetrized = true;
    spec
}

/// Matrices of rank at most `r` in `n x t`; the restriction is the union
/// of the coordinate `r`-planes.
pub fn rank_variety(n: usize, t: usize, r: usize) -> Result<CatalogEntry, CatalogError> {
    let name = format!("rank:{n},{t},{r}");
    if !(0 < r && r < n && n <= t) {
        return Err(bad(&name, "need 0 < r < n <= t"));
    }
    if n > 8 {
        return Err(bad(&name, "n <= 8"));
    }
    let comps = subsets(n, r).iter().map(|s| AffineComponent::coordinate(n, s)).collect();
    Ok(CatalogEntry {
        spec: arrangement(n, t, comps, "coord"),
        expected_ed_degree: Some(binomial(n, r)),
        expected_dim_m: r * (n + t - r),
        notes: format!("{} coordinate {r}-planes in R^{n}", binomial(n, r)),
        name,
    })
}

/// Essential matrices: `σ₁ = σ₂`, `σ₃ = 0`; six lines in `R³`.
pub fn essential_variety() -> CatalogEntry {
    let line = AffineComponent::span(3, vec![vec![1.0, 1.0, 0.0]]).expect("valid line");
    let comps = symmetrize(&line, 3).expect("n = 3");
    CatalogEntry {
        name: "essential".into(),
        spec: arrangement(3, 3, comps, "line"),
        expected_ed_degree: Some(6),
        expected_dim_m: 6,
        notes: "lines x_i = ±x_j with the third coordinate zero".into(),
    }
}

/// Orthogonal group `O(n)`; the restriction is the `2^n` points `(±1, …, ±1)`.
pub fn orthogonal_group(n: usize) -> Result<CatalogEntry, CatalogError> {
    let name = format!("orthogonal:{n}");
    if !(1..=10).contains(&n) {
        return Err(bad(&name, "need 1 <= n <= 10"));
    }
    let comps = (0..1usize << n)
        .map(|mask| AffineComponent::point((0..n).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 }).collect()))
        .collect();
    Ok(CatalogEntry {
        spec: arrangement(n, n, comps, "pt"),
        expected_ed_degree: Some(1u64 << n),
        expected_dim_m: n * (n - 1) / 2,
        notes: format!("{} sign vectors", 1u64 << n),
        name,
    })
}

fn product(n: usize) -> MultiPoly {
    MultiPoly::monomial(vec![1; n], C64::new(1.0, 0.0))
}

/// `H_n^+ = {x₁⋯x_n = 1}` alone; not absolutely symmetric, only half of
/// the restriction of `SL_n^±`.
pub fn hyperbola_plus(n: usize) -> Result<VarietySpec, CatalogError> {
    if !(2..=4).contains(&n) {
        return Err(bad(&format!("hplus:{n}"), "need 2 <= n <= 4"));
    }
    let c = ComponentSpec::complete_intersection(vec![product(n) - MultiPoly::constant(n, C64::new(1.0, 0.0))], "plus")
        .expect("valid hypersurface");
    Ok(VarietySpec::new(n, n, vec![c]).expect("valid shape"))
}

/// `SL_n^± = {det = ±1}`; the restriction is `x₁⋯x_n = ±1`.
pub fn sl_pm(n: usize) -> Result<CatalogEntry, CatalogError> {
    let name = format!("sl_pm:{n}");
    if !(2..=4).contains(&n) {
        return Err(bad(&name, "need 2 <= n <= 4"));
    }
    let one = MultiPoly::constant(n, C64::new(1.0, 0.0));
    let plus = ComponentSpec::complete_intersection(vec![product(n) - one.clone()], "plus").expect("valid");
    let minus = ComponentSpec::complete_intersection(vec![product(n) + one], "minus").expect("valid");
    let mut spec = VarietySpec::new(n, n, vec![plus, minus]).expect("valid shape");
    spec.symmetrized = true;
    Ok(CatalogEntry {
        name,
        spec,
        expected_ed_degree: Some(n as u64 * (1u64 << n)),
        expected_dim_m: n * n - 1,
        notes: "hypersurfaces x1*...*xn = 1 and = -1".into(),
    })
}

/// Unit ball boundary of the Schatten `d`-norm in `n x t`; the restriction
/// is the Fermat hypersurface `Σ x_i^d = 1`.
pub fn fermat(n: usize, d: u32, t: usize) -> Result<CatalogEntry, CatalogError> {
    let name = format!("fermat:{n},{d},{t}");
    if n < 2 || n > t {
        return Err(bad(&name, "need 2 <= n <= t"));
    }
    if d < 2 || !d.is_multiple_of(2) || d > 6 || n > 3 {
        return Err(bad(&name, "need even 2 <= d <= 6 and n <= 3"));
    }
    let mut f = MultiPoly::constant(n, C64::new(-1.0, 0.0));
    for i in 0..n {
        f = f + MultiPoly::var(n, i).pow(d);
    }
    let c = ComponentSpec::complete_intersection(vec![f], "fermat").expect("valid hypersurface");
    let mut spec = VarietySpec::new(n, t, vec![c]).expect("valid shape");
    spec.symmetrized = true;
    Ok(CatalogEntry {
        name,
        spec,
        expected_ed_degree: if d == 2 { Some(2) } else { None },
        expected_dim_m: n * t - 1,
        notes: if d == 2 {
            "sphere, sum of x_i^2 = 1".into()
        } else {
            format!("sum of x_i^{d} = 1; ED degree computed numerically")
        },
    })
}

/// All of `C^{n x t}`; a single affine component with no equations.
pub fn full_space(n: usize, t: usize) -> Result<CatalogEntry, CatalogError> {
    let name = format!("full:{n},{t}");
    if n == 0 || n > t || t > 8 {
        return Err(bad(&name, "need 1 <= n <= t <= 8"));
    }
    let all: Vec<usize> = (0..n).collect();
    Ok(CatalogEntry {
        spec: arrangement(n, t, vec![AffineComponent::coordinate(n, &all)], "full"),
        expected_ed_degree: Some(1),
        expected_dim_m: n * t,
        notes: "the whole matrix space".into(),
        name,
    })
}

fn params(name: &str, args: &str, count: std::ops::RangeInclusive<usize>) -> Result<Vec<usize>, CatalogError> {
    let v: Vec<usize> = args
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| bad(name, format!("`{s}` is not a nonnegative integer"))))
        .collect::<Result<_, _>>()?;
    if !count.contains(&v.len()) {
        return Err(bad(name, format!("expected {count:?} parameters, got {}", v.len())));
    }
    Ok(v)
}

/// Parses `essential`, `rank:n,t,r`, `orthogonal:n`, `sl_pm:n`,
/// `fermat:n,d[,t]` and `full:n,t`.
pub fn lookup(spec: &str) -> Result<CatalogEntry, CatalogError> {
    let (head, args) = match spec.split_once(':') {
        Some((h, a)) => (h.trim(), Some(a)),
        None => (spec.trim(), None),
    };
    let need = |range| args.map(|a| params(head, a, range)).ok_or_else(|| bad(head, "missing parameters"));
    match head {
        "essential" => match args {
            None => Ok(essential_variety()),
            Some(_) => Err(bad(head, "takes no parameters")),
        },
        "rank" => {
            let p = need(3..=3)??;
            rank_variety(p[0], p[1], p[2])
        }
        "orthogonal" | "o" => {
            let p = need(1..=1)??;
            orthogonal_group(p[0])
        }
        "sl_pm" | "sl" => {
            let p = need(1..=1)??;
            sl_pm(p[0])
        }
        "fermat" => {
            let p = need(2..=3)??;
            let d = u32::try_from(p[1]).map_err(|_| bad(head, "degree too large"))?;
            fermat(p[0], d, p.get(2).copied().unwrap_or(p[0]))
        }
        "full" => {
            let p = need(2..=2)??;
            full_space(p[0], p[1])
        }
        _ => Err(CatalogError::UnknownName(spec.to_string())),
    }
}

/// The entries exercised by the test suite and `catalog list`.
pub fn standard_entries() -> Vec<CatalogEntry> {
    let names = [
        "rank:2,2,1",
        "rank:3,3,1",
        "rank:3,3,2",
        "rank:3,4,1",
        "rank:3,4,2",
        "rank:4,5,2",
        "essential",
        "orthogonal:1",
        "orthogonal:2",
        "orthogonal:3",
        "orthogonal:4",
        "sl_pm:2",
        "sl_pm:3",
        "fermat:2,2",
        "fermat:3,2",
        "fermat:2,4",
        "full:2,3",
    ];
    names.iter().map(|n| lookup(n).expect("valid built-in name")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangements::is_closed_under_group;
    use crate::edcrit::ed_degree;
    use crate::polyalg::Symmetry;
    use crate::transfer::dimension;

    #[test]
    fn binomials() {
        assert_eq!(binomial(3, 1), 3);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(2, 3), 0);
    }

    #[test]
    fn rank_entries() {
        for (n, t, r, k, dim) in [(3, 4, 1, 3, 6), (3, 3, 2, 3, 8), (2, 2, 1, 2, 3)] {
            let e = rank_variety(n, t, r).unwrap();
            assert_eq!(e.spec.components.len(), k);
            assert_eq!(e.expected_ed_degree, Some(k as u64));
            assert_eq!(e.expected_dim_m, dim);
        }
        assert!(rank_variety(3, 3, 3).is_err());
        assert!(rank_variety(4, 3, 1).is_err());
    }

    #[test]
    fn essential_entry() {
        let e = essential_variety();
        assert_eq!(e.spec.components.len(), 6);
        assert_eq!(dimension(&e.spec, 0).unwrap().dim_m, 6);
    }

    #[test]
    fn orthogonal_entries() {
        assert_eq!(orthogonal_group(1).unwrap().spec.components.len(), 2);
        assert_eq!(orthogonal_group(3).unwrap().spec.components.len(), 8);
        let e = orthogonal_group(2).unwrap();
        assert_eq!(e.expected_dim_m, 1);
        assert_eq!(dimension(&e.spec, 0).unwrap().dim_m, 1);
        assert!(orthogonal_group(11).is_err());
    }

    #[test]
    fn sl_entries() {
        assert_eq!(sl_pm(2).unwrap().expected_ed_degree, Some(8));
        assert_eq!(sl_pm(3).unwrap().expected_ed_degree, Some(24));
        assert!(sl_pm(5).is_err());
        assert_eq!(dimension(&sl_pm(2).unwrap().spec, 0).unwrap().dim_m, 3);
    }

    #[test]
    fn fermat_entries() {
        let e = fermat(2, 2, 2).unwrap();
        assert_eq!(ed_degree(&e.spec, 3, 0).unwrap().count, 2);
        assert_eq!(fermat(2, 4, 2).unwrap().expected_ed_degree, None);
        assert!(fermat(2, 3, 2).is_err());
        assert_eq!(dimension(&fermat(2, 4, 3).unwrap().spec, 0).unwrap().dim_m, 5);
    }

    #[test]
    fn lookup_names() {
        assert_eq!(lookup("rank:3,4,1").unwrap().name, "rank:3,4,1");
        assert_eq!(lookup("essential").unwrap().name, "essential");
        assert_eq!(lookup("sl_pm:2").unwrap().spec.components.len(), 2);
        assert_eq!(lookup("fermat:2,4").unwrap().spec.t, 2);
        assert!(matches!(lookup("nope"), Err(CatalogError::UnknownName(_))));
        assert!(lookup("rank:3,4").is_err());
        assert!(lookup("rank:a,b,c").is_err());
        assert!(lookup("essential:1").is_err());
    }

    #[test]
    fn every_entry_is_symmetric() {
        for e in standard_entries() {
            if e.spec.is_arrangement() {
                let comps: Vec<_> = e.spec.components.iter().map(|c| c.affine_component().unwrap().clone()).collect();
                assert!(is_closed_under_group(&comps), "{}", e.name);
            }
            let mut s = e.spec.clone();
            assert_eq!(s.check_symmetry(), Symmetry::Symmetric, "{}", e.name);
        }
    }
}
