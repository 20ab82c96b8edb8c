use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use edtransfer::arrangements::AffineComponent;
use edtransfer::catalog::{self, CatalogEntry};
use edtransfer::edcrit::{self, ComponentKind, ComponentSpec, VarietySpec};
use edtransfer::linalg::{CMatrix, C64};
use edtransfer::polyalg::{parse_poly, standard_vars, Symmetry};
use edtransfer::spectral::{self, AsvdVerdict};
use edtransfer::transfer::{self, TransferOptions};

#[derive(Parser, Debug)]
#[command(name = "edtransfer", version, about = "ED degrees and ED critical points of orthogonally invariant matrix varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// ED degree of the matrix variety, counted on its diagonal restriction.
    Eddegree {
        #[command(flatten)]
        source: SpecSource,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// All ED critical points of a data matrix.
    Critical {
        #[command(flatten)]
        source: SpecSource,
        /// JSON 2-D array; entries are numbers or [re, im] pairs.
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Dimension of the matrix variety.
    Dimension {
        #[command(flatten)]
        source: SpecSource,
        /// Comma-separated point of the diagonal restriction; sampled if absent.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Existence and factors of an algebraic SVD.
    Asvd {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Built-in varieties.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    List {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct SpecSource {
    /// Built-in entry such as `essential`, `rank:3,4,1`, `sl_pm:2`.
    #[arg(long)]
    catalog: Option<String>,
    /// JSON variety description.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Serialize, Debug)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub input_digest: String,
    pub seed: Option<u64>,
    pub ok: bool,
    pub warnings: Vec<String>,
    pub result: Value,
    pub elapsed_ms: f64,
}

#[derive(Deserialize, Debug)]
struct SpecFile {
    n: usize,
    t: Option<usize>,
    components: Vec<ComponentFile>,
}

#[derive(Deserialize, Debug)]
struct ComponentFile {
    kind: ComponentKind,
    #[serde(default)]
    generators: Option<Vec<String>>,
    #[serde(default)]
    base: Option<Vec<f64>>,
    #[serde(default)]
    directions: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    label: Option<String>,
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

struct Loaded {
    spec: VarietySpec,
    name: String,
    digest_input: Vec<u8>,
}

fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    let bytes = h.finalize();
    let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

fn parse_spec_json(text: &str) -> Result<VarietySpec> {
    let file: SpecFile = serde_json::from_str(text).context("spec is not valid JSON for the variety schema")?;
    let n = file.n;
    let vars = standard_vars(n);
    let mut comps = Vec::with_capacity(file.components.len());
    for (k, c) in file.components.into_iter().enumerate() {
        let label = c.label.unwrap_or_else(|| format!("c{k}"));
        let parsed = |gens: Vec<String>| -> Result<Vec<_>> {
            gens.iter()
                .map(|g| parse_poly(g, &vars).with_context(|| format!("component `{label}`: cannot parse `{g}`")))
                .collect()
        };
        let comp = match (c.kind, c.generators, c.base) {
            (ComponentKind::CompleteIntersection, Some(g), None) => ComponentSpec::complete_intersection(parsed(g)?, label)?,
            (ComponentKind::AffineSubspace, Some(g), None) => ComponentSpec::affine_from_generators(parsed(g)?, label)?,
            (ComponentKind::AffineSubspace, None, Some(base)) => {
                ensure!(base.len() == n, "component `{label}`: base has length {}, expected {n}", base.len());
                let dirs = c.directions.unwrap_or_default();
                ComponentSpec::affine(AffineComponent::new(base, dirs)?, label)
            }
            (kind, _, _) => bail!("component `{label}` of kind {kind:?} needs exactly one of `generators` or `base`"),
        };
        comps.push(comp);
    }
    Ok(VarietySpec::new(n, file.t.unwrap_or(n), comps)?)
}

fn load_spec(source: &SpecSource) -> Result<Loaded> {
    if let Some(name) = &source.catalog {
        let entry: CatalogEntry = catalog::lookup(name)?;
        return Ok(Loaded { spec: entry.spec, name: entry.name, digest_input: name.as_bytes().to_vec() });
    }
    let path = source.spec.as_ref().expect("clap enforces one source");
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut spec = parse_spec_json(&text)?;
    match spec.check_symmetry() {
        Symmetry::Symmetric => {}
        other => bail!("variety is not absolutely symmetric (check returned {other:?})"),
    }
    Ok(Loaded { spec, name: path.display().to_string(), digest_input: text.into_bytes() })
}

fn parse_matrix(text: &str) -> Result<CMatrix> {
    let rows: Vec<Vec<Entry>> = serde_json::from_str(text).context("matrix must be a JSON 2-D array")?;
    let n = rows.len();
    ensure!(n > 0, "matrix has no rows");
    let t = rows[0].len();
    ensure!(rows.iter().all(|r| r.len() == t), "matrix rows have different lengths");
    let mut m = CMatrix::zeros(n, t);
    for (i, r) in rows.iter().enumerate() {
        for (j, e) in r.iter().enumerate() {
            m[(i, j)] = match e {
                Entry::Real(v) => C64::new(*v, 0.0),
                Entry::Complex([re, im]) => C64::new(*re, *im),
            };
            ensure!(m[(i, j)].re.is_finite() && m[(i, j)].im.is_finite(), "non-finite entry at ({i}, {j})");
        }
    }
    Ok(m)
}

fn read_matrix(path: &Path) -> Result<(CMatrix, String)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok((parse_matrix(&text)?, text))
}

fn rows(m: &CMatrix) -> Vec<Vec<C64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn cmd_eddegree(source: &SpecSource, trials: usize, seed: u64) -> Result<RunReport> {
    let loaded = load_spec(source)?;
    let d = edcrit::ed_degree(&loaded.spec, trials, seed)?;
    let mut warnings = Vec::new();
    if !d.stable {
        warnings.push(format!("counts differ across trials: {:?}", d.per_trial));
    }
    Ok(RunReport {
        schema: 1,
        command: format!("eddegree {}", loaded.name),
        input_digest: digest(&[&loaded.digest_input]),
        seed: Some(seed),
        ok: d.stable,
        warnings,
        result: json!({ "ed_degree": d.count, "stable": d.stable, "per_trial": d.per_trial, "trials": trials }),
        elapsed_ms: 0.0,
    })
}

fn cmd_critical(source: &SpecSource, matrix: &Path, tol: f64, seed: u64) -> Result<RunReport> {
    let loaded = load_spec(source)?;
    let (y, text) = read_matrix(matrix)?;
    let mut opts = TransferOptions { tol, ..TransferOptions::default() };
    opts.ed = opts.ed.with_seed(seed);
    let out = transfer::matrix_ed_critical(&y, &loaded.spec, &opts)?;
    let nearest = out
        .nearest_real()
        .and_then(|b| out.points.iter().position(|p| std::ptr::eq(p, b)));
    let points: Vec<Value> = out
        .points
        .iter()
        .map(|p| {
            json!({
                "component": p.x.component,
                "x": p.x.x,
                "matrix": rows(&p.x_matrix),
                "distance": p.distance,
                "lagrange_residual": p.x.residual,
                "criticality_residual": p.criticality_residual,
                "is_real": p.is_real,
            })
        })
        .collect();
    let generic = out.warnings.is_empty();
    Ok(RunReport {
        schema: 1,
        command: format!("critical {} {}", loaded.name, matrix.display()),
        input_digest: digest(&[&loaded.digest_input, text.as_bytes()]),
        seed: Some(seed),
        ok: true,
        warnings: out.warnings.clone(),
        result: json!({
            "count": out.points.len(),
            "generic": generic,
            "singular_values": out.y,
            "nearest": nearest,
            "points": points,
        }),
        elapsed_ms: 0.0,
    })
}

fn parse_point(text: &str, n: usize) -> Result<Vec<C64>> {
    let v: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("`{s}` is not a number")))
        .collect::<Result<_>>()?;
    ensure!(v.len() == n, "point has {} coordinates, expected {n}", v.len());
    Ok(edcrit::complexify(&v))
}

fn cmd_dimension(source: &SpecSource, point: Option<&str>, seed: u64) -> Result<RunReport> {
    let loaded = load_spec(source)?;
    let report = match point {
        Some(p) => transfer::dimension_at(&loaded.spec, &parse_point(p, loaded.spec.n)?)?,
        None => transfer::dimension(&loaded.spec, seed)?,
    };
    let mut parts: Vec<&[u8]> = vec![&loaded.digest_input];
    if let Some(p) = point {
        parts.push(p.as_bytes());
    }
    Ok(RunReport {
        schema: 1,
        command: format!("dimension {}", loaded.name),
        input_digest: digest(&parts),
        seed: Some(seed),
        ok: true,
        warnings: vec![],
        result: json!({
            "dim_s": report.dim_s,
            "dim_m": report.dim_m,
            "dim_fiber": report.dim_fiber,
            "partition": report.partition,
            "component": report.component,
            "sample": report.sample,
        }),
        elapsed_ms: 0.0,
    })
}

fn cmd_asvd(matrix: &Path) -> Result<RunReport> {
    let (a, text) = read_matrix(matrix)?;
    let verdict = spectral::has_algebraic_svd(&a);
    let mut result = json!({ "verdict": verdict });
    let mut warnings = Vec::new();
    if verdict == AsvdVerdict::Yes {
        let f = spectral::algebraic_svd(&a)?;
        result["d"] = json!(f.d);
        result["u"] = json!(rows(&f.u));
        result["v"] = json!(rows(&f.v));
        result["residual"] = json!(f.residual);
    } else if verdict == AsvdVerdict::Indeterminate {
        warnings.push("repeated eigenvalue of AA^T; diagonalizability not decided".into());
    }
    Ok(RunReport {
        schema: 1,
        command: format!("asvd {}", matrix.display()),
        input_digest: digest(&[text.as_bytes()]),
        seed: None,
        ok: true,
        warnings,
        result,
        elapsed_ms: 0.0,
    })
}

fn cmd_catalog_list() -> RunReport {
    let rows: Vec<_> = catalog::standard_entries().iter().map(CatalogEntry::row).collect();
    RunReport {
        schema: 1,
        command: "catalog list".into(),
        input_digest: digest(&[]),
        seed: None,
        ok: true,
        warnings: vec![],
        result: json!({ "entries": rows }),
        elapsed_ms: 0.0,
    }
}

fn fmt_c(z: &Value) -> String {
    match z {
        Value::Array(p) if p.len() == 2 => {
            let (re, im) = (p[0].as_f64().unwrap_or(f64::NAN), p[1].as_f64().unwrap_or(f64::NAN));
            if im == 0.0 {
                format!("{re:.6}")
            } else {
                format!("{re:.6}{im:+.6}i")
            }
        }
        other => other.to_string(),
    }
}

fn fmt_vec(v: &Value) -> String {
    let items: Vec<String> = v.as_array().map(|a| a.iter().map(fmt_c).collect()).unwrap_or_default();
    format!("({})", items.join(", "))
}

fn print_text(r: &RunReport) {
    let res = &r.result;
    match r.command.split_whitespace().next().unwrap_or("") {
        "eddegree" => {
            println!("ED degree: {}", res["ed_degree"]);
            println!("stable: {}  per trial: {}", res["stable"], res["per_trial"]);
        }
        "critical" => {
            println!("critical points: {}  (data singular values {})", res["count"], fmt_vec(&res["singular_values"]));
            let nearest = res["nearest"].as_u64();
            for (k, p) in res["points"].as_array().into_iter().flatten().enumerate() {
                let mark = if nearest == Some(k as u64) { "*" } else { " " };
                println!(
                    "{mark} [{}] x = {}  dist = {:.6e}  residual = {:.2e}  real = {}",
                    p["component"].as_str().unwrap_or(""),
                    fmt_vec(&p["x"]),
                    p["distance"].as_f64().unwrap_or(f64::NAN),
                    p["criticality_residual"].as_f64().unwrap_or(f64::NAN),
                    p["is_real"],
                );
            }
            if nearest.is_some() {
                println!("* nearest real critical point");
            }
        }
        "dimension" => {
            println!("dim S = {}", res["dim_s"]);
            println!("partition = {}", res["partition"]);
            println!("dim fiber = {}", res["dim_fiber"]);
            println!("dim M = {}", res["dim_m"]);
        }
        "asvd" => {
            println!("algebraic SVD: {}", res["verdict"].as_str().unwrap_or(""));
            if res.get("d").is_some() {
                println!("d = {}", fmt_vec(&res["d"]));
                println!("residual = {:.3e}", res["residual"].as_f64().unwrap_or(f64::NAN));
            }
        }
        _ => {
            println!("{:<14} {:>3} {:>3} {:>10} {:>6}  notes", "name", "n", "t", "ED degree", "dim");
            for e in res["entries"].as_array().into_iter().flatten() {
                let ed = e["expected_ed_degree"].as_u64().map_or("unknown".to_string(), |v| v.to_string());
                println!(
                    "{:<14} {:>3} {:>3} {:>10} {:>6}  {}",
                    e["name"].as_str().unwrap_or(""),
                    e["n"].to_string(),
                    e["t"].to_string(),
                    ed,
                    e["expected_dim_m"].to_string(),
                    e["notes"].as_str().unwrap_or("")
                );
            }
        }
    }
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    let start = Instant::now();
    let (mut report, json_out) = match &cli.command {
        Command::Eddegree { source, trials, seed, json } => (cmd_eddegree(source, *trials, *seed)?, *json),
        Command::Critical { source, matrix, tol, seed, json } => (cmd_critical(source, matrix, *tol, *seed)?, *json),
        Command::Dimension { source, point, seed, json } => (cmd_dimension(source, point.as_deref(), *seed)?, *json),
        Command::Asvd { matrix, json } => (cmd_asvd(matrix)?, *json),
        Command::Catalog { action: CatalogAction::List { json } } => (cmd_catalog_list(), *json),
    };
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    if json_out {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print_text(&report);
    }
    Ok(if report.ok { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_schema_round_trip() {
        let text = r#"{"n": 2, "t": 3, "components": [
            {"kind": "complete-intersection", "generators": ["x1*x2 - 1"], "label": "plus"},
            {"kind": "complete-intersection", "generators": ["x1*x2 + 1"], "label": "minus"}]}"#;
        let s = parse_spec_json(text).unwrap();
        assert_eq!((s.n, s.t, s.components.len()), (2, 3, 2));
        let text = r#"{"n": 2, "components": [
            {"kind": "affine-subspace", "base": [0, 0], "directions": [[1, 0]]},
            {"kind": "affine-subspace", "generators": ["x1"]}]}"#;
        let s = parse_spec_json(text).unwrap();
        assert_eq!(s.t, 2);
        assert_eq!(s.components[1].label(), "c1");
    }

    #[test]
    fn spec_schema_errors() {
        assert!(parse_spec_json("{").is_err());
        let both = r#"{"n": 2, "components": [{"kind": "affine-subspace", "generators": ["x1"], "base": [0, 0]}]}"#;
        assert!(parse_spec_json(both).is_err());
        let bad_poly = r#"{"n": 2, "components": [{"kind": "complete-intersection", "generators": ["x1 +"]}]}"#;
        assert!(parse_spec_json(bad_poly).is_err());
    }

    #[test]
    fn matrix_entries() {
        let m = parse_matrix("[[1, [0, 1]], [0, 0]]").unwrap();
        assert_eq!(m[(0, 1)], C64::new(0.0, 1.0));
        assert!(parse_matrix("[[1, 2], [3]]").is_err());
        assert!(parse_matrix("[]").is_err());
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest(&[b"abc"]), digest(&[b"abc"]));
        assert_ne!(digest(&[b"ab", b"c"]), digest(&[b"a", b"bc"]));
        assert!(digest(&[]).starts_with("sha256:"));
    }
}
