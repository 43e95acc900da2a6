//! Summation of generalized Fourier series and exact reconstruction errors.
//!
//! Approximants are formed as symbols (trigonometric polynomials); the
//! `L²(ℝ)` reconstruction error of `f ↔ h` against an approximant symbol is
//! exactly `‖h - approx‖_{L²(𝕋,Φ)}`, computed in coefficient algebra.
//!
//! The `(C,α)` mean over the symmetric enumeration `k = -n..n` applies the
//! multiplier `A^α_{n-|k|}/A^α_n` to the coefficient at `k` — equivalently
//! it is the `A^{α-1}`-weighted average of the symmetric partial sums, which
//! reduces to plain partial sums at `α = 0` and to the triangular weights
//! `1 - |k|/(n+1)` at `α = 1`. Removed-block indices contribute zero rather
//! than being skipped, keeping the index bookkeeping uniform.

use crate::analysis::{self, OmegaBlock};
use crate::dual::{DualSystem, GfCoefficients};
use crate::error::Error;
use crate::trigpoly::TrigPoly;
use crate::{Result, C64};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Cesàro numbers `A_m^α` and the companion row `A_m^{α-1}`, for `m ≤ n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CesaroWeights {
    pub alpha: f64,
    /// `A_0^α .. A_n^α` via `A_m = A_{m-1}(m+α)/m`.
    pub row: Vec<f64>,
    /// `A_0^{α-1} .. A_n^{α-1}`.
    pub prev_row: Vec<f64>,
}

/// Builds both rows of Cesàro numbers; requires `α > -1`.
pub fn cesaro_weights(alpha: f64, n: usize) -> Result<CesaroWeights> {
    if alpha.is_nan() || alpha <= -1.0 {
        return Err(Error::InvalidArgument(format!(
            "Cesàro order must exceed -1, got {alpha}"
        )));
    }
    let fill = |a: f64| -> Vec<f64> {
        let mut row = Vec::with_capacity(n + 1);
        row.push(1.0);
        for m in 1..=n {
            let prev = row[m - 1];
            row.push(prev * (m as f64 + a) / m as f64);
        }
        row
    };
    Ok(CesaroWeights {
        alpha,
        row: fill(alpha),
        prev_row: fill(alpha - 1.0),
    })
}

impl CesaroWeights {
    fn n(&self) -> usize {
        self.row.len() - 1
    }

    /// Multiplier applied to the coefficient at `|k|`: `A^α_{n-|k|}/A^α_n`.
    pub fn multiplier(&self, k_abs: usize) -> f64 {
        let n = self.n();
        if k_abs > n {
            0.0
        } else {
            self.row[n - k_abs] / self.row[n]
        }
    }
}

/// `(C,α)` mean of the generalized Fourier series, as a symbol.
pub fn cesaro_mean(c: &GfCoefficients, alpha: f64, n: i64) -> Result<TrigPoly> {
    if n < 0 {
        return Err(Error::InvalidArgument("mean order n must be ≥ 0".into()));
    }
    if c.range() < n {
        return Err(Error::MissingCoefficients {
            needed: n,
            available: c.range(),
        });
    }
    let w = cesaro_weights(alpha, n as usize)?;
    Ok(TrigPoly::from_coeffs((-n..=n).filter_map(|k| {
        let coeff = c.get(k) * w.multiplier(k.unsigned_abs() as usize);
        (coeff.norm_sqr() != 0.0).then_some((k, coeff))
    })))
}

/// Symmetric partial sum `Σ_{|k|≤n} c_k e_k` (the direct `(C,0)` path).
pub fn partial_sum(c: &GfCoefficients, n: i64) -> Result<TrigPoly> {
    if c.range() < n {
        return Err(Error::MissingCoefficients {
            needed: n,
            available: c.range(),
        });
    }
    Ok(TrigPoly::from_coeffs(
        (-n..=n)
            .map(|k| (k, c.get(k)))
            .filter(|(_, v)| v.norm_sqr() != 0.0),
    ))
}

/// Abel–Poisson mean `Σ r^{|n|} c_n e_n`, truncated at `cutoff`.
pub fn abel_mean(c: &GfCoefficients, r: f64, cutoff: i64) -> Result<TrigPoly> {
    if !(0.0 < r && r < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "Abel parameter must lie in (0,1), got {r}"
        )));
    }
    let cutoff = cutoff.min(c.range());
    Ok(TrigPoly::from_coeffs((-cutoff..=cutoff).filter_map(|k| {
        let coeff = c.get(k) * r.powi(k.unsigned_abs() as i32);
        (coeff.norm_sqr() != 0.0).then_some((k, coeff))
    })))
}

/// Smallest cutoff `M` with `sup|c|·r^M/(1-r) ≤ tol`: beyond it the dropped
/// Abel tail is below `tol`.
pub fn abel_cutoff(r: f64, coeff_sup: f64, tol: f64) -> i64 {
    assert!(0.0 < r && r < 1.0);
    if coeff_sup <= tol * (1.0 - r) {
        return 1;
    }
    let m = ((tol * (1.0 - r) / coeff_sup).ln() / r.ln()).ceil();
    (m as i64).max(1)
}

/// Exact `‖h - approx‖_{L²(𝕋,Φ)}`, which equals `‖f - approximant‖_{L²(ℝ)}`
/// for `f ↔ h` under the weighted-norm isometry.
pub fn weighted_error(h: &TrigPoly, approx: &TrigPoly, phi: &TrigPoly) -> f64 {
    let delta = h.sub(approx);
    let sq = delta.mul(phi).pair(&delta).re;
    sq.max(0.0).sqrt()
}

/// `‖h‖_{L²(𝕋,Φ)}`.
pub fn weighted_norm(h: &TrigPoly, phi: &TrigPoly) -> f64 {
    weighted_error(h, &TrigPoly::zero(), phi)
}

// ---------------------------------------------------------------------------
// Reconstruction sweeps
// ---------------------------------------------------------------------------

/// One reconstruction measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconRow {
    /// `partial`, `cesaro`, or `abel`.
    pub method: String,
    /// `α` for Cesàro rows, `r` for Abel rows, 0 for partial sums.
    pub param: f64,
    /// Mean order `n` for partial/Cesàro rows, cutoff for Abel rows.
    pub n: i64,
    /// Exact `L²(ℝ)` error.
    pub error: f64,
}

/// Reconstruction errors of one function across methods and parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructionReport {
    pub generator: String,
    pub symbol: String,
    pub rows: Vec<ReconRow>,
}

/// Sweeps partial sums, `(C,α)` means and Abel means for the symbol `h`.
#[allow(clippy::too_many_arguments)]
pub fn reconstruction_sweep(
    phi: &TrigPoly,
    system: &DualSystem,
    h: &TrigPoly,
    include_partial: bool,
    alphas: &[f64],
    n_list: &[i64],
    r_list: &[f64],
    generator: &str,
    symbol: &str,
) -> Result<ReconstructionReport> {
    let max_n = n_list.iter().copied().max().unwrap_or(0);
    let sup_estimate = 1.0 + h.l1_norm();
    let abel_cut = r_list
        .iter()
        .map(|&r| abel_cutoff(r, sup_estimate, 1e-12))
        .max()
        .unwrap_or(1);
    let range = max_n.max(abel_cut).max(h.degree() + 1);
    let coeffs = system.gf_coefficients(h, range)?;
    let mut rows = Vec::new();
    if include_partial {
        for &n in n_list {
            let approx = partial_sum(&coeffs, n)?;
            rows.push(ReconRow {
                method: "partial".into(),
                param: 0.0,
                n,
                error: weighted_error(h, &approx, phi),
            });
        }
    }
    for &alpha in alphas {
        for &n in n_list {
            let approx = cesaro_mean(&coeffs, alpha, n)?;
            rows.push(ReconRow {
                method: "cesaro".into(),
                param: alpha,
                n,
                error: weighted_error(h, &approx, phi),
            });
        }
    }
    for &r in r_list {
        let cutoff = abel_cutoff(r, sup_estimate, 1e-12);
        let approx = abel_mean(&coeffs, r, cutoff)?;
        rows.push(ReconRow {
            method: "abel".into(),
            param: r,
            n: cutoff.min(coeffs.range()),
            error: weighted_error(h, &approx, phi),
        });
    }
    Ok(ReconstructionReport {
        generator: generator.into(),
        symbol: symbol.into(),
        rows,
    })
}

// ---------------------------------------------------------------------------
// Operator-growth scan
// ---------------------------------------------------------------------------

/// Lower bound on the `(C,α)` operator norm at one mean order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: i64,
    pub lower_bound: f64,
}

/// Empirical lower bounds on `‖σ_n^α‖_{L²(𝕋,Φ)→L²(𝕋,Φ)}` for each `n`.
///
/// The bound is the best Rayleigh quotient found by power iteration on the
/// finite section of frequencies `|k| ≤ n + deg Φ + 8`, restarted from
/// singularity-concentrated symbols (modulated Dirichlet-type vectors) and
/// seeded random trials. Rayleigh quotients are valid lower bounds whether
/// or not the iteration has converged; growth without saturation across `n`
/// is evidence of unboundedness, never a proof.
pub fn operator_growth_scan(
    phi: &TrigPoly,
    alpha: f64,
    n_list: &[i64],
    trial_count: usize,
    seed: u64,
) -> Result<Vec<GrowthRow>> {
    let prof = analysis::profile(phi)?;
    let omega = OmegaBlock::centered(prof.total() as usize);
    let system = DualSystem::new(&prof, omega)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        if n < 1 {
            return Err(Error::InvalidArgument("mean orders must be ≥ 1".into()));
        }
        let big_n = n + phi.degree() + 8;
        let dim = (2 * big_n + 1) as usize;
        let out_dim = (2 * n + 1) as usize;
        let freq = |i: usize| i as i64 - big_n;
        let out_freq = |i: usize| i as i64 - n;

        // Gram matrices of the weighted inner product
        let gram = |half: i64| -> DMatrix<C64> {
            let d = (2 * half + 1) as usize;
            DMatrix::from_fn(d, d, |i, j| {
                phi.coeff((i as i64 - half) - (j as i64 - half))
            })
        };
        let g_big = gram(big_n);
        let g_out = gram(n);

        // σ_n^α as a matrix: row j carries μ_|j|·(h_j - ⟨h, T_j⟩)
        let w = cesaro_weights(alpha, n as usize)?;
        let mut sigma = DMatrix::from_element(out_dim, dim, Complex64::new(0.0, 0.0));
        for i in 0..out_dim {
            let j = out_freq(i);
            if omega.contains(j) {
                continue;
            }
            let mu = w.multiplier(j.unsigned_abs() as usize);
            let t_j = system.interpolant(j)?;
            for col in 0..dim {
                let k = freq(col);
                let delta = if j == k { 1.0 } else { 0.0 };
                let entry = (Complex64::new(delta, 0.0) - t_j.coeff(k).conj()) * mu;
                if entry.norm_sqr() != 0.0 {
                    sigma[(i, col)] = entry;
                }
            }
        }

        // numerator quadratic form: A = σᴴ G_out σ
        let a = sigma.adjoint() * (&g_out * &sigma);
        let chol = g_big.clone().cholesky().ok_or_else(|| {
            Error::Internal("weighted Gram matrix is not positive definite".into())
        })?;

        let rayleigh = |x: &DMatrix<C64>| -> f64 {
            let num = (x.adjoint() * (&a * x))[(0, 0)].re;
            let den = (x.adjoint() * (&g_big * x))[(0, 0)].re;
            if den <= 0.0 {
                0.0
            } else {
                (num / den).max(0.0)
            }
        };

        let mut starts: Vec<DMatrix<C64>> = Vec::new();
        // singularity-concentrated starts: Dirichlet vectors modulated to x_j
        for p in &prof.points {
            starts.push(DMatrix::from_fn(dim, 1, |i, _| {
                Complex64::from_polar(1.0, -std::f64::consts::TAU * freq(i) as f64 * p.location)
            }));
            starts.push(DMatrix::from_fn(dim, 1, |i, _| {
                let taper = 1.0 - (freq(i).abs() as f64) / (big_n as f64 + 1.0);
                Complex64::from_polar(taper, -std::f64::consts::TAU * freq(i) as f64 * p.location)
            }));
        }
        // flat-weight fallback start
        starts.push(DMatrix::from_fn(dim, 1, |i, _| {
            Complex64::new(if freq(i) == 0 { 1.0 } else { 0.0 }, 0.0)
        }));
        while starts.len() < trial_count.max(3) {
            starts.push(DMatrix::from_fn(dim, 1, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            }));
        }

        let mut best = 0.0f64;
        for mut x in starts {
            if x.norm() == 0.0 {
                continue;
            }
            best = best.max(rayleigh(&x));
            for _ in 0..100 {
                let y = &a * &x;
                let mut next = y.clone();
                chol.solve_mut(&mut next);
                let norm = next.norm();
                if norm == 0.0 {
                    break;
                }
                x = next / Complex64::new(norm, 0.0);
                best = best.max(rayleigh(&x));
            }
        }
        rows.push(GrowthRow {
            n,
            lower_bound: best.sqrt(),
        });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::profile;
    use crate::bracket::autocorrelation;
    use crate::piecewise::{boxcar, combine, psi1, shift_dilate};
    use approx::assert_abs_diff_eq;

    fn flat_system() -> DualSystem {
        DualSystem::new(&Default::default(), OmegaBlock::at(0, 0)).unwrap()
    }

    fn psi_setup() -> (TrigPoly, DualSystem) {
        let phi = autocorrelation(&psi1());
        let prof = profile(&phi).unwrap();
        let sys = DualSystem::new(&prof, OmegaBlock::centered(prof.total() as usize)).unwrap();
        (phi, sys)
    }

    #[test]
    fn cesaro_number_rows() {
        let w = cesaro_weights(0.0, 6).unwrap();
        assert!(w.row.iter().all(|&a| a == 1.0));
        // A^{-1}: 1, 0, 0, ...
        assert_eq!(w.prev_row[0], 1.0);
        assert!(w.prev_row[1..].iter().all(|&a| a == 0.0));

        let w = cesaro_weights(1.0, 6).unwrap();
        for (m, &a) in w.row.iter().enumerate() {
            assert_abs_diff_eq!(a, (m + 1) as f64, epsilon = 1e-14);
        }

        let w = cesaro_weights(0.5, 4).unwrap();
        assert_abs_diff_eq!(w.row[4], 315.0 / 128.0, epsilon = 1e-14);

        assert!(cesaro_weights(-1.0, 4).is_err());
    }

    #[test]
    fn cesaro_positivity() {
        for &alpha in &[-0.5, -0.1, 0.3, 1.7] {
            let w = cesaro_weights(alpha, 64).unwrap();
            assert!(w.row.iter().all(|&a| a > 0.0), "alpha={alpha}");
        }
    }

    #[test]
    fn fejer_weights_on_flat_generator() {
        // f = φ(·+5) with the box generator: symbol e_5, Fejér multiplier
        let sys = flat_system();
        let h = TrigPoly::exponential(5);
        let c = sys.gf_coefficients(&h, 64).unwrap();
        for n in [8i64, 32, 64] {
            let approx = cesaro_mean(&c, 1.0, n).unwrap();
            let expect = 1.0 - 5.0 / (n as f64 + 1.0);
            assert_abs_diff_eq!(approx.coeff(5).re, expect, epsilon = 1e-13);
        }
        // n = 0 keeps only the constant coefficient, unscaled
        let h0 = TrigPoly::one();
        let c0 = sys.gf_coefficients(&h0, 4).unwrap();
        let approx = cesaro_mean(&c0, 0.7, 0).unwrap();
        assert_eq!(approx, TrigPoly::one());
    }

    #[test]
    fn cesaro_zero_equals_partial_sum() {
        let (_, sys) = psi_setup();
        let h = TrigPoly::from_real_coeffs([(3, 1.0), (-2, 0.5), (1, -0.25)]);
        let c = sys.gf_coefficients(&h, 16).unwrap();
        for n in [0i64, 1, 4, 9] {
            let a = cesaro_mean(&c, 0.0, n).unwrap();
            let b = partial_sum(&c, n).unwrap();
            assert!(a.sub(&b).l1_norm() < 1e-12);
        }
    }

    #[test]
    fn cesaro_requires_coefficients() {
        let sys = flat_system();
        let c = sys.gf_coefficients(&TrigPoly::one(), 4).unwrap();
        assert!(matches!(
            cesaro_mean(&c, 1.0, 10),
            Err(Error::MissingCoefficients { .. })
        ));
    }

    #[test]
    fn abel_mean_of_shift() {
        // ψ-case: f = φ(·+3): c_n = δ_{3n}, Abel symbol r³·e_3
        let (_, sys) = psi_setup();
        let h = TrigPoly::exponential(3);
        let c = sys.gf_coefficients(&h, 32).unwrap();
        let approx = abel_mean(&c, 0.9, 32).unwrap();
        assert_eq!(approx.support_len(), 1);
        assert_abs_diff_eq!(approx.coeff(3).re, 0.9f64.powi(3), epsilon = 1e-14);

        // r → 0: only the n = 0 coefficient survives at full strength
        let h = TrigPoly::from_real_coeffs([(0, 2.0), (4, 1.0)]);
        let sys_flat = flat_system();
        let c = sys_flat.gf_coefficients(&h, 8).unwrap();
        let approx = abel_mean(&c, 1e-6, 8).unwrap();
        assert_abs_diff_eq!(approx.coeff(0).re, 2.0, epsilon = 1e-15);
        assert!(approx.coeff(4).norm() < 1e-23);
    }

    #[test]
    fn abel_parameter_validation() {
        let sys = flat_system();
        let c = sys.gf_coefficients(&TrigPoly::one(), 4).unwrap();
        assert!(abel_mean(&c, 0.0, 4).is_err());
        assert!(abel_mean(&c, 1.0, 4).is_err());
    }

    #[test]
    fn abel_cutoff_bounds_tail() {
        for &r in &[0.5, 0.9, 0.99, 0.999] {
            let m = abel_cutoff(r, 10.0, 1e-12);
            assert!(10.0 * r.powi(m as i32) / (1.0 - r) <= 1e-12 * 1.0001);
        }
    }

    #[test]
    fn weighted_error_examples() {
        let (phi, _) = psi_setup();
        let h = TrigPoly::from_real_coeffs([(2, 1.0), (0, -0.5)]);
        assert_eq!(weighted_error(&h, &h, &phi), 0.0);
        // Plancherel with the flat weight
        assert_abs_diff_eq!(
            weighted_error(
                &TrigPoly::exponential(1),
                &TrigPoly::zero(),
                &TrigPoly::one()
            ),
            1.0,
            epsilon = 1e-15
        );
        // Δ = 1 against the ψ weight: √(c_0) = √(2/3)
        assert_abs_diff_eq!(
            weighted_error(&TrigPoly::one(), &TrigPoly::zero(), &phi),
            (2.0f64 / 3.0).sqrt(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn weighted_norm_matches_piecewise_route() {
        // ‖Σ h_k ψ₁(·+k)‖_{L²(ℝ)} two ways
        let (phi, _) = psi_setup();
        let h = TrigPoly::from_real_coeffs([(0, 1.0), (1, -0.7), (3, 0.25)]);
        let via_symbol = weighted_norm(&h, &phi);
        let shifts: Vec<_> = [0i64, 1, 3]
            .iter()
            .map(|&k| shift_dilate(&psi1(), 1.0, -k as f64))
            .collect();
        let coeffs = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(-0.7, 0.0),
            Complex64::new(0.25, 0.0),
        ];
        let f = combine(&coeffs, &shifts).unwrap();
        let via_pieces = f.norm_sq().sqrt();
        assert!(
            (via_symbol - via_pieces).abs() < 1e-10 * (1.0 + via_pieces),
            "{via_symbol} vs {via_pieces}"
        );
    }

    #[test]
    fn flat_weight_means_are_contractions() {
        let phi = autocorrelation(&boxcar());
        for &alpha in &[0.0, 0.5, 1.0] {
            let rows = operator_growth_scan(&phi, alpha, &[4, 16], 4, 42).unwrap();
            for row in rows {
                assert!(
                    row.lower_bound <= 1.0 + 1e-9,
                    "alpha={alpha} n={} bound={}",
                    row.n,
                    row.lower_bound
                );
            }
        }
    }

    #[test]
    fn scan_is_deterministic_for_fixed_seed() {
        let (phi, _) = psi_setup();
        let a = operator_growth_scan(&phi, 0.25, &[8, 16], 4, 7).unwrap();
        let b = operator_growth_scan(&phi, 0.25, &[8, 16], 4, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn abel_errors_decrease_on_every_fixture() {
        use crate::piecewise::{bspline, hat};
        let h = TrigPoly::from_real_coeffs([(3, 1.0), (-2, 0.5)]);
        for f in [boxcar(), hat(), bspline(4).unwrap(), psi1()] {
            let phi = autocorrelation(&f);
            let prof = profile(&phi).unwrap();
            let sys = DualSystem::new(&prof, OmegaBlock::centered(prof.total() as usize)).unwrap();
            let mut last = f64::INFINITY;
            for r in [0.5, 0.9, 0.99, 0.999] {
                let cutoff = abel_cutoff(r, 1.0 + h.l1_norm(), 1e-12);
                let c = sys.gf_coefficients(&h, cutoff.max(4)).unwrap();
                let err = weighted_error(&h, &abel_mean(&c, r, cutoff).unwrap(), &phi);
                assert!(err < last, "r={r}: {err} !< {last}");
                last = err;
            }
        }
    }

    #[test]
    fn fejer_error_nonincreasing_beyond_degree() {
        let (phi, sys) = psi_setup();
        let h = TrigPoly::from_real_coeffs([(3, 1.0), (-2, 0.5)]);
        let c = sys.gf_coefficients(&h, 128).unwrap();
        let mut last = f64::INFINITY;
        for n in [4i64, 8, 16, 32, 64, 128] {
            let err = weighted_error(&h, &cesaro_mean(&c, 1.0, n).unwrap(), &phi);
            assert!(err <= last, "n={n}");
            last = err;
        }
    }

    #[test]
    fn reconstruction_sweep_has_all_rows() {
        let (phi, sys) = psi_setup();
        let h = TrigPoly::from_real_coeffs([(3, 1.0), (-2, 0.5)]);
        let report = reconstruction_sweep(
            &phi,
            &sys,
            &h,
            true,
            &[1.0],
            &[4, 16],
            &[0.5, 0.9],
            "psi1",
            "test",
        )
        .unwrap();
        assert_eq!(report.rows.len(), 2 + 2 + 2);
        assert!(report
            .rows
            .iter()
            .all(|r| r.error.is_finite() && r.error >= 0.0));
        // partial sums beyond the symbol degree reproduce it exactly here
        let exact = report
            .rows
            .iter()
            .find(|r| r.method == "partial" && r.n == 16)
            .unwrap();
        assert!(exact.error < 1e-12);
    }
}
