//! Artifact serialization: versioned JSON documents and plot-ready CSV.

use crate::{ensure_dir, Failure, SCHEMA_VERSION};
use serde::Serialize;
use sispace_core::analysis::BasisReport;
use sispace_core::bracket::{bracket_numeric, Decay, IdentityCheck};
use sispace_core::dual::DualSystem;
use sispace_core::orthonorm::OrthoGenerator;
use sispace_core::piecewise::{self, PiecewiseFn};
use sispace_core::summation::ReconstructionReport;
use sispace_core::trigpoly::TrigPoly;
use sispace_core::C64;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Serialize)]
pub struct Versioned<'a, T: Serialize> {
    pub schema_version: u32,
    #[serde(flatten)]
    pub data: &'a T,
}

pub fn versioned<T: Serialize>(data: &T) -> Versioned<'_, T> {
    Versioned {
        schema_version: SCHEMA_VERSION,
        data,
    }
}

#[derive(Serialize)]
pub struct AnalyzeDoc {
    pub schema_version: u32,
    pub generator: String,
    pub weight: TrigPoly,
    pub basis_report: BasisReport,
}

#[derive(Serialize)]
pub struct DualDoc {
    pub schema_version: u32,
    pub generator: String,
    pub kind: String,
    pub omega: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_number: Option<f64>,
    /// Singular case: interpolant coefficients per retained shift.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub interpolants: BTreeMap<String, TrigPoly>,
    /// Regular case: coefficients of the reciprocal weight.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_coefficients: Option<TrigPoly>,
    pub biorthogonality_deviation: f64,
}

impl DualDoc {
    pub fn singular(generator: String, sys: &DualSystem, range: i64) -> Result<Self, Failure> {
        let mut interpolants = BTreeMap::new();
        for (n, t) in sys.interpolants(range)? {
            interpolants.insert(n.to_string(), t);
        }
        Ok(DualDoc {
            schema_version: SCHEMA_VERSION,
            generator,
            kind: "singular".into(),
            omega: sys.omega().indices().collect(),
            condition_number: Some(sys.condition_number()),
            interpolants,
            dual_coefficients: None,
            biorthogonality_deviation: sys.biorthogonality_check(range)?,
        })
    }

    pub fn regular(
        generator: String,
        coeffs: TrigPoly,
        f: &PiecewiseFn,
        range: i64,
    ) -> Result<Self, Failure> {
        let deviation = regular_biorthogonality(f, &coeffs, range)?;
        Ok(DualDoc {
            schema_version: SCHEMA_VERSION,
            generator,
            kind: "regular".into(),
            omega: Vec::new(),
            condition_number: None,
            interpolants: BTreeMap::new(),
            dual_coefficients: Some(coeffs),
            biorthogonality_deviation: deviation,
        })
    }
}

/// `max_j |∫ f(x+j)·g(x) dx - δ_{j0}|` for the truncated dual
/// `g = Σ d_k f(·+k)`, through exact piecewise integrals.
pub fn regular_biorthogonality(
    f: &PiecewiseFn,
    dual_coeffs: &TrigPoly,
    range: i64,
) -> Result<f64, Failure> {
    let mut shifts = Vec::new();
    let mut coeffs: Vec<C64> = Vec::new();
    for (k, c) in dual_coeffs.coeffs() {
        shifts.push(piecewise::shift_dilate(f, 1.0, -k as f64));
        coeffs.push(c);
    }
    let g = piecewise::combine(&coeffs, &shifts)?;
    let mut worst = 0.0f64;
    for j in -range..=range {
        let v = piecewise::inner_product(&piecewise::shift_dilate(f, 1.0, -j as f64), &g, 0);
        let expect = if j == 0 { 1.0 } else { 0.0 };
        worst = worst.max((v - C64::new(expect, 0.0)).norm());
    }
    Ok(worst)
}

/// Mean orders for sweeps: 16, 32, … doubling up to `n_max` (plus `n_max`
/// itself when it is not a power of two times 16).
pub fn doubling_orders(n_max: i64) -> Vec<i64> {
    let mut orders = Vec::new();
    let mut n = 16i64;
    while n < n_max {
        orders.push(n);
        n *= 2;
    }
    orders.push(n_max);
    orders.dedup();
    orders
}

pub fn write_json<T: Serialize>(
    dir: &Path,
    name: &str,
    value: &T,
    to_stdout: bool,
) -> Result<(), Failure> {
    ensure_dir(dir)?;
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::io("serializing", std::io::Error::other(e)))?;
    text.push('\n');
    std::fs::write(dir.join(name), &text).map_err(|e| Failure::io("writing artifact", e))?;
    if to_stdout {
        print!("{text}");
    } else {
        println!("wrote {}", dir.join(name).display());
    }
    Ok(())
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<(), Failure> {
    ensure_dir(dir)?;
    std::fs::write(dir.join(name), text).map_err(|e| Failure::io("writing artifact", e))
}

fn write_csv(dir: &Path, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    ensure_dir(dir)?;
    let mut out = format!("# schema_version={SCHEMA_VERSION}\n");
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    std::fs::write(dir.join(name), out).map_err(|e| Failure::io("writing artifact", e))?;
    println!("wrote {}", dir.join(name).display());
    Ok(())
}

pub fn write_reconstruction_csv(dir: &Path, report: &ReconstructionReport) -> Result<(), Failure> {
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.method.clone(),
                format!("{}", r.param),
                format!("{}", r.n),
                format!("{}", r.error),
            ]
        })
        .collect();
    write_csv(
        dir,
        "reconstruction.csv",
        &["method", "param", "n", "error"],
        &rows,
    )
}

pub fn write_identities_csv(dir: &Path, rows: &[(&str, IdentityCheck)]) -> Result<(), Failure> {
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|(id, c)| {
            vec![
                id.to_string(),
                format!("{}", c.xi),
                format!("{}", c.truncation_k),
                format!("{}", c.lhs),
                format!("{}", c.rhs),
                format!("{}", c.rel_error),
            ]
        })
        .collect();
    write_csv(
        dir,
        "identities.csv",
        &["identity", "xi", "K", "lhs", "rhs", "rel_error"],
        &table,
    )
}

#[derive(Serialize)]
pub struct IdentityRow {
    pub identity: String,
    pub xi: f64,
    pub k: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
}

#[derive(Serialize)]
pub struct IdentitiesDoc {
    pub schema_version: u32,
    pub rows: Vec<IdentityRow>,
}

pub fn identities_json(rows: &[(&str, IdentityCheck)]) -> IdentitiesDoc {
    IdentitiesDoc {
        schema_version: SCHEMA_VERSION,
        rows: rows
            .iter()
            .map(|(id, c)| IdentityRow {
                identity: id.to_string(),
                xi: c.xi,
                k: c.truncation_k,
                lhs: c.lhs,
                rhs: c.rhs,
                rel_error: c.rel_error,
            })
            .collect(),
    }
}

#[derive(Serialize)]
struct OrthoSummary {
    schema_version: u32,
    generator: String,
    truncation_k: u32,
    grid_points: usize,
    max_deviation: f64,
    tail_bound: f64,
}

pub fn write_orthonormality(
    dir: &Path,
    format: &str,
    generator: &str,
    ortho: &OrthoGenerator,
    grid: &[f64],
    truncation_k: u32,
) -> Result<(), Failure> {
    let decay = Decay::for_generator(ortho.base())?;
    let mut rows = Vec::with_capacity(grid.len());
    let mut max_deviation = 0.0f64;
    let mut worst_tail = 0.0f64;
    for &t in grid {
        let pt = bracket_numeric(
            |xi| piecewise::fourier(ortho.base(), xi).value,
            decay,
            t,
            truncation_k,
        )?;
        let w = ortho.weight().eval(t).re;
        let sum = pt.value / w;
        let deviation = (sum - 1.0).abs();
        let tail = pt.tail_bound / w;
        max_deviation = max_deviation.max(deviation);
        worst_tail = worst_tail.max(tail);
        rows.push(vec![
            format!("{t}"),
            format!("{sum}"),
            format!("{deviation}"),
            format!("{tail}"),
        ]);
    }
    if format != "json" {
        write_csv(
            dir,
            "orthonormality.csv",
            &["t", "lattice_sum", "deviation", "tail_bound"],
            &rows,
        )?;
    }
    if format != "csv" {
        let summary = OrthoSummary {
            schema_version: SCHEMA_VERSION,
            generator: generator.to_string(),
            truncation_k,
            grid_points: grid.len(),
            max_deviation,
            tail_bound: worst_tail,
        };
        write_json(dir, "orthonormality.json", &summary, true)?;
    }
    Ok(())
}
