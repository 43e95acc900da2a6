//! Markdown rendering of the aggregate per-generator report.

use crate::{dual_system_for, Failure};
use sispace_core::analysis::classify_with_omega_start;
use sispace_core::bracket::autocorrelation;
use sispace_core::dual::regular_dual;
use sispace_core::orthonorm::{grid_avoiding, OrthoGenerator};
use sispace_core::piecewise::PiecewiseFn;
use sispace_core::summation::reconstruction_sweep;
use sispace_core::trigpoly::TrigPoly;
use std::fmt::Write as _;

/// Probe function used in the convergence table: symbol `e_3 + 0.5·e_{-2}`.
fn probe_symbol() -> TrigPoly {
    TrigPoly::from_real_coeffs([(3, 1.0), (-2, 0.5)])
}

pub fn full_report(
    f: &PiecewiseFn,
    id: &str,
    omega_start: Option<i64>,
    n_max: i64,
    truncation_k: u32,
) -> Result<String, Failure> {
    let phi = autocorrelation(f);
    let report = classify_with_omega_start(&phi, omega_start)?;
    let mut md = String::new();
    let w = &mut md;

    let _ = writeln!(w, "# Shift-system report: {id}\n");

    // generator
    let (a, b) = f.support().unwrap_or((0.0, 0.0));
    let _ = writeln!(w, "## Generator\n");
    let _ = writeln!(w, "- support: [{a}, {b}]");
    let _ = writeln!(w, "- piece degree: {}", f.degree());
    let _ = writeln!(w, "- integral: {:.12}", f.integral().re);
    let _ = writeln!(w, "- squared L2 norm: {:.12}\n", f.norm_sq());

    // weight
    let _ = writeln!(w, "## Spectral weight\n");
    let _ = writeln!(w, "| k | re(c_k) | im(c_k) |");
    let _ = writeln!(w, "|---|---------|---------|");
    for (k, c) in phi.coeffs() {
        let _ = writeln!(w, "| {k} | {:.12} | {:.12} |", c.re, c.im);
    }
    let ext = phi.extrema();
    let _ = writeln!(
        w,
        "\nrange on the torus: [{:.12}, {:.12}]\n",
        ext.min.1, ext.max.1
    );

    // classification
    let _ = writeln!(w, "## Classification\n");
    let _ = writeln!(w, "- Riesz basis (full system): {}", yn(report.riesz));
    if let Some((lo, hi)) = report.riesz_bounds {
        let _ = writeln!(w, "- frame constants: ({lo:.12}, {hi:.12})");
    }
    let _ = writeln!(
        w,
        "- Schauder basis in natural enumeration: {}",
        yn(report.schauder)
    );
    let _ = writeln!(w, "- M-basis (full system): {}", yn(report.m_basis_full));
    if let Some(omega) = report.omega {
        let _ = writeln!(
            w,
            "- removed block: {:?}",
            omega.indices().collect::<Vec<_>>()
        );
    }
    if let Some(th) = report.cesaro_threshold {
        let _ = writeln!(w, "- Cesàro summation threshold: α > {th}");
    }
    let _ = writeln!(w, "- Abel–Poisson summable: {}", yn(report.abel_summable));
    for note in &report.notes {
        let _ = writeln!(w, "- note: {note}");
    }
    let _ = writeln!(w);

    // orthonormality check
    let _ = writeln!(w, "## Orthonormalized generator\n");
    let ortho = OrthoGenerator::new(f.clone())?;
    let margin = if ortho.profile().is_empty() {
        1e-3
    } else {
        0.02
    };
    let grid = grid_avoiding(48, ortho.profile(), margin);
    let onb = ortho.check_onb(&grid, truncation_k.max(2000))?;
    let _ = writeln!(
        w,
        "lattice-sum deviation from 1 over {} grid points (K = {}): {:.3e} \
         (raw-tail bound {:.3e})\n",
        grid.len(),
        truncation_k.max(2000),
        onb.max_deviation,
        onb.tail_bound
    );

    // dual system
    let _ = writeln!(w, "## Dual system\n");
    if report.profile.is_empty() {
        let d = regular_dual(&phi, truncation_k as i64)?;
        let _ = writeln!(w, "regular dual: coefficients of the reciprocal weight\n");
        let _ = writeln!(w, "| k | d_k | ratio d_k/d_(k-1) |");
        let _ = writeln!(w, "|---|-----|--------------------|");
        let upper = 8i64.min(truncation_k as i64);
        for k in 0..=upper {
            let dk = d.coeff(k).re;
            let prev = d.coeff(k - 1).re;
            let ratio = if k == 0 || prev.abs() < 1e-12 {
                String::from("—")
            } else {
                format!("{:.9}", dk / prev)
            };
            let _ = writeln!(w, "| {k} | {dk:.12} | {ratio} |");
        }
        let deviation = crate::output::regular_biorthogonality(f, &d, 8)?;
        let _ = writeln!(
            w,
            "\nbiorthogonality deviation over |j| ≤ 8 (truncation K = {truncation_k}): {deviation:.3e}\n"
        );
    } else {
        let sys = dual_system_for(&phi, omega_start)?;
        let _ = writeln!(
            w,
            "singular case: removed block {:?}, interpolation condition number {:.3e}\n",
            sys.omega().indices().collect::<Vec<_>>(),
            sys.condition_number()
        );
        let _ = writeln!(w, "| n | interpolant coefficients on the block |");
        let _ = writeln!(w, "|---|----------------------------------------|");
        for n in -4i64..=4 {
            let t = sys.interpolant(n)?;
            let desc: Vec<String> = t
                .coeffs()
                .map(|(k, c)| format!("c_{k} = {:.6}{:+.6}i", c.re, c.im))
                .collect();
            let _ = writeln!(w, "| {n} | {} |", desc.join(", "));
        }
        let _ = writeln!(
            w,
            "\nbiorthogonality deviation over the retained shifts, range 8: {:.3e}\n",
            sys.biorthogonality_check(8)?
        );
    }

    // reconstruction table
    let _ = writeln!(w, "## Reconstruction of the probe function\n");
    let h = probe_symbol();
    let _ = writeln!(w, "probe symbol: e_3 + 0.5·e_(-2)\n");
    let sys = dual_system_for(&phi, omega_start)?;
    let n_list = crate::output::doubling_orders(n_max);
    let sweep = reconstruction_sweep(
        &phi,
        &sys,
        &h,
        true,
        &[0.25, 0.5, 1.0],
        &n_list,
        &[0.5, 0.9, 0.99, 0.999],
        id,
        "probe",
    )?;
    let _ = writeln!(w, "| method | parameter | n | L2 error |");
    let _ = writeln!(w, "|--------|-----------|---|----------|");
    for row in &sweep.rows {
        let _ = writeln!(
            w,
            "| {} | {} | {} | {:.6e} |",
            row.method, row.param, row.n, row.error
        );
    }
    let _ = writeln!(w);
    Ok(md)
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
