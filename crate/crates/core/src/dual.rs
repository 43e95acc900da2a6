//! Biorthogonal dual systems and generalized Fourier coefficients.
//!
//! Regular case (`Φ > 0`): the dual generator has transform `Φ⁻¹·φ̂`, and
//! [`regular_dual`] computes the Fourier coefficients of `1/Φ` by periodic
//! trapezoid quadrature (geometrically accurate since `1/Φ` is analytic).
//!
//! Singular case: for each retained shift `n ∉ Ω` the dual is kept in the
//! factored frequency form `η̂_n = φ̂·Φ⁻¹·(e_n - T_n)`, where the
//! trigonometric polynomial `T_n`, supported on the removed block `Ω`,
//! matches `e^{2πint}` at every singular point to the order of the
//! singularity. `T_n` solves a confluent Vandermonde system; all pairings
//! with elements of `S(φ)` then reduce to exact coefficient algebra
//! (`c_n(f) = h_n - ⟨h, T_n⟩` for `f ↔ symbol h`), so no integral with the
//! non-integrable factor `Φ⁻¹` is ever formed numerically.

use crate::analysis::{OmegaBlock, SingularityProfile};
use crate::error::Error;
use crate::trigpoly::TrigPoly;
use crate::{Result, C64};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::BTreeMap;

const TAU: f64 = std::f64::consts::TAU;

/// Residual allowed on each interpolation condition.
pub const INTERPOLATION_TOL: f64 = 1e-9;

/// Generalized Fourier coefficients of one function, over `|n| ≤ range`.
/// Indices inside the removed block are identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GfCoefficients {
    omega: OmegaBlock,
    coeffs: BTreeMap<i64, C64>,
    range: i64,
}

impl GfCoefficients {
    pub fn get(&self, n: i64) -> C64 {
        self.coeffs.get(&n).copied().unwrap_or_default()
    }

    pub fn range(&self) -> i64 {
        self.range
    }

    pub fn omega(&self) -> OmegaBlock {
        self.omega
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn sup_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// The dual system of `{φ(·+k)}_{k∉Ω}`: removed block, interpolation
/// conditions, and the factorized confluent Vandermonde solver for the
/// interpolants `T_n`.
#[derive(Debug, Clone)]
pub struct DualSystem {
    profile: SingularityProfile,
    omega: OmegaBlock,
    conditions: Vec<(f64, u32)>,
    matrix: DMatrix<C64>,
    inverse: DMatrix<C64>,
    condition_number: f64,
}

impl DualSystem {
    /// Builds the solver for a given profile and removed block. The block
    /// length must equal `Σλ_j` — each interpolant has exactly as many
    /// coefficients as there are Hermite conditions.
    pub fn new(profile: &SingularityProfile, omega: OmegaBlock) -> Result<Self> {
        if omega.len != profile.total() as usize {
            return Err(Error::InvalidArgument(format!(
                "block length {} must equal the condition count Σλ_j = {}",
                omega.len,
                profile.total()
            )));
        }
        for (i, a) in profile.points.iter().enumerate() {
            for b in profile.points.iter().skip(i + 1) {
                let d = (a.location - b.location).abs();
                if d.min(1.0 - d) < 1e-9 {
                    return Err(Error::InvalidArgument(format!(
                        "duplicate singular points at {} and {}",
                        a.location, b.location
                    )));
                }
            }
        }
        let mut conditions = Vec::new();
        for p in &profile.points {
            for d in 0..p.order {
                conditions.push((p.location, d));
            }
        }
        let m = conditions.len();
        let mut matrix = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
        for (row, &(x, d)) in conditions.iter().enumerate() {
            for (col, k) in omega.indices().enumerate() {
                matrix[(row, col)] = derivative_of_exponential(k, d, x);
            }
        }
        let (inverse, condition_number) = if m == 0 {
            (DMatrix::from_element(0, 0, Complex64::new(0.0, 0.0)), 1.0)
        } else {
            let inv = matrix.clone().try_inverse().ok_or_else(|| {
                Error::Internal("confluent Vandermonde system is singular".into())
            })?;
            let cond = one_norm(&matrix) * one_norm(&inv);
            (inv, cond)
        };
        Ok(DualSystem {
            profile: profile.clone(),
            omega,
            conditions,
            matrix,
            inverse,
            condition_number,
        })
    }

    pub fn omega(&self) -> OmegaBlock {
        self.omega
    }

    pub fn profile(&self) -> &SingularityProfile {
        &self.profile
    }

    /// 1-norm condition number of the interpolation matrix.
    pub fn condition_number(&self) -> f64 {
        self.condition_number
    }

    /// The interpolant `T_n`, supported on the removed block. For `n` in the
    /// block the interpolant is `e_n` itself, exactly.
    pub fn interpolant(&self, n: i64) -> Result<TrigPoly> {
        if self.omega.contains(n) {
            return Ok(TrigPoly::exponential(n));
        }
        if self.conditions.is_empty() {
            return Ok(TrigPoly::zero());
        }
        let m = self.conditions.len();
        let mut rhs = DMatrix::from_element(m, 1, Complex64::new(0.0, 0.0));
        for (row, &(x, d)) in self.conditions.iter().enumerate() {
            rhs[(row, 0)] = derivative_of_exponential(n, d, x);
        }
        let sol = &self.inverse * &rhs;
        // enforce the interpolation conditions
        let residual_vec = &self.matrix * &sol - &rhs;
        for row in 0..m {
            let scale = 1.0f64.max(rhs[(row, 0)].norm());
            let res = residual_vec[(row, 0)].norm();
            if res > INTERPOLATION_TOL * scale {
                return Err(Error::InterpolationResidual {
                    n,
                    residual: res,
                    tol: INTERPOLATION_TOL * scale,
                });
            }
        }
        Ok(TrigPoly::from_coeffs(
            self.omega
                .indices()
                .enumerate()
                .map(|(i, k)| (k, sol[(i, 0)])),
        ))
    }

    /// Interpolants for all `|n| ≤ range`.
    pub fn interpolants(&self, range: i64) -> Result<BTreeMap<i64, TrigPoly>> {
        (-range..=range)
            .map(|n| Ok((n, self.interpolant(n)?)))
            .collect()
    }

    /// The generalized Fourier coefficient `c_n(f)` for `f ∈ S(φ)` given by
    /// its symbol `h` (so `f̂ = φ̂·h`): exactly `h_n - ⟨h, T_n⟩`. Indices in
    /// the removed block give zero — their duals vanish identically.
    pub fn gf_coefficient(&self, h: &TrigPoly, n: i64) -> Result<C64> {
        if self.omega.contains(n) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let t_n = self.interpolant(n)?;
        Ok(h.coeff(n) - h.pair(&t_n))
    }

    pub fn gf_coefficients(&self, h: &TrigPoly, range: i64) -> Result<GfCoefficients> {
        let mut coeffs = BTreeMap::new();
        for n in -range..=range {
            let c = self.gf_coefficient(h, n)?;
            if c.norm_sqr() != 0.0 {
                coeffs.insert(n, c);
            }
        }
        Ok(GfCoefficients {
            omega: self.omega,
            coeffs,
            range,
        })
    }

    /// `max |c_n(φ(·+k)) - δ_{kn}|` over retained shifts `|k|,|n| ≤ range`.
    pub fn biorthogonality_check(&self, range: i64) -> Result<f64> {
        let mut worst = 0.0f64;
        for k in -range..=range {
            if self.omega.contains(k) {
                continue;
            }
            let h = TrigPoly::exponential(k);
            for n in -range..=range {
                if self.omega.contains(n) {
                    continue;
                }
                let c = self.gf_coefficient(&h, n)?;
                let expect = if k == n { 1.0 } else { 0.0 };
                worst = worst.max((c - Complex64::new(expect, 0.0)).norm());
            }
        }
        Ok(worst)
    }

    /// Checks the completeness implication on a concrete symbol: if every
    /// probed coefficient vanishes then the symbol itself must vanish.
    /// Probing range: the symbol's frequency span plus the block size plus a
    /// margin.
    pub fn completeness_probe(&self, h: &TrigPoly) -> Result<bool> {
        let range = h.degree() + self.omega.len as i64 + 8;
        let eps = 1e-11 * (1.0 + h.l1_norm());
        let mut all_zero = true;
        for n in -range..=range {
            if self.omega.contains(n) {
                continue;
            }
            if self.gf_coefficient(h, n)?.norm() > eps {
                all_zero = false;
                break;
            }
        }
        if !all_zero {
            return Ok(true); // implication holds vacuously
        }
        Ok(h.l1_norm() <= 1e-9)
    }
}

/// `d/dt^d e^{2πikt}` at `x`: `(2πik)^d e^{2πikx}`.
fn derivative_of_exponential(k: i64, d: u32, x: f64) -> C64 {
    let factor = Complex64::new(0.0, TAU * k as f64).powu(d);
    let angle = TAU * (k as f64 * x).rem_euclid(1.0);
    factor * Complex64::from_polar(1.0, angle)
}

fn one_norm(m: &DMatrix<C64>) -> f64 {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Convenience wrapper: the interpolant for one shift without keeping the
/// system around.
pub fn hermite_interpolant(
    n: i64,
    omega: OmegaBlock,
    profile: &SingularityProfile,
) -> Result<TrigPoly> {
    DualSystem::new(profile, omega)?.interpolant(n)
}

/// Fourier coefficients `d_k` of `1/Φ` for `|k| ≤ k_max`, by periodic
/// trapezoid quadrature with the point count doubled until the aliasing
/// error falls below 1e-10. Requires a strictly positive weight; since
/// `1/Φ` is then analytic the quadrature converges geometrically.
pub fn regular_dual(phi: &TrigPoly, k_max: i64) -> Result<TrigPoly> {
    if phi.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let ext = phi.extrema();
    if ext.min.1.is_nan() || ext.min.1 <= 1e-12 * ext.max.1.abs() {
        return Err(Error::WeightHasZeros);
    }
    let mut n_points = 256usize.max(4 * (k_max as usize + 1)).next_power_of_two();
    let mut prev: Option<Vec<C64>> = None;
    loop {
        let inv: Vec<f64> = (0..n_points)
            .map(|j| 1.0 / phi.eval(j as f64 / n_points as f64).re)
            .collect();
        let mut coeffs = Vec::with_capacity((2 * k_max + 1) as usize);
        for k in -k_max..=k_max {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &v) in inv.iter().enumerate() {
                let angle = -TAU * (k as f64 * j as f64 / n_points as f64).rem_euclid(1.0);
                acc += v * Complex64::from_polar(1.0, angle);
            }
            coeffs.push(acc / n_points as f64);
        }
        if let Some(p) = &prev {
            let change = p
                .iter()
                .zip(&coeffs)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            if change < 1e-10 {
                return Ok(TrigPoly::from_coeffs(
                    (-k_max..=k_max).zip(coeffs).filter(|(_, c)| c.norm() > 0.0),
                ));
            }
        }
        prev = Some(coeffs);
        n_points *= 2;
        if n_points > (1 << 20) {
            return Err(Error::QuadratureDiverged(
                "aliasing did not fall below 1e-10 by 2^20 quadrature points".into(),
            ));
        }
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{profile, SingularPoint};
    use crate::bracket::autocorrelation;
    use crate::piecewise::{boxcar, combine, hat, inner_product, psi1, shift_dilate};
    use proptest::prelude::*;

    fn psi_system() -> DualSystem {
        let phi = autocorrelation(&psi1());
        let prof = profile(&phi).unwrap();
        DualSystem::new(&prof, OmegaBlock::centered(prof.total() as usize)).unwrap()
    }

    #[test]
    fn psi_interpolants_are_constant_one() {
        let sys = psi_system();
        assert_eq!(sys.omega(), OmegaBlock::at(0, 1));
        for n in [-5i64, -1, 1, 2, 7] {
            let t = sys.interpolant(n).unwrap();
            assert_eq!(t.support_len(), 1);
            assert!((t.coeff(0) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        // n in the block: the exponential itself
        let t = sys.interpolant(0).unwrap();
        assert_eq!(t, TrigPoly::exponential(0));
        assert!(sys.condition_number() < 1e8);
    }

    #[test]
    fn order_two_interpolants_by_hand() {
        // profile {(0,2)}, block {0,1}: T_n(0)=1, T_n'(0)=2πin
        // => c0 = 1-n, c1 = n
        let prof = SingularityProfile {
            points: vec![SingularPoint {
                location: 0.0,
                order: 2,
            }],
        };
        let sys = DualSystem::new(&prof, OmegaBlock::at(0, 2)).unwrap();
        for n in [-3i64, 2, 5] {
            let t = sys.interpolant(n).unwrap();
            assert!((t.coeff(0) - Complex64::new(1.0 - n as f64, 0.0)).norm() < 1e-10);
            assert!((t.coeff(1) - Complex64::new(n as f64, 0.0)).norm() < 1e-10);
        }
        assert!(sys.condition_number() < 1e8);
    }

    #[test]
    fn interpolation_conditions_hold_everywhere() {
        // two singular points with orders 1 and 2
        let prof = SingularityProfile {
            points: vec![
                SingularPoint {
                    location: 0.2,
                    order: 1,
                },
                SingularPoint {
                    location: 0.7,
                    order: 2,
                },
            ],
        };
        let sys = DualSystem::new(&prof, OmegaBlock::centered(3)).unwrap();
        assert!(sys.condition_number() < 1e8);
        for n in -32i64..=32 {
            let t = sys.interpolant(n).unwrap();
            for p in &prof.points {
                for d in 0..p.order {
                    let got = t.eval_derivative(d, p.location);
                    let expect = derivative_of_exponential(n, d, p.location);
                    assert!(
                        (got - expect).norm() <= 1e-9 * (1.0 + expect.norm()),
                        "n={n} d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn block_size_must_match() {
        let prof = SingularityProfile {
            points: vec![SingularPoint {
                location: 0.0,
                order: 2,
            }],
        };
        assert!(DualSystem::new(&prof, OmegaBlock::centered(1)).is_err());
    }

    #[test]
    fn gf_coefficients_of_retained_shifts() {
        let sys = psi_system();
        for k in [-4i64, 1, 3] {
            let h = TrigPoly::exponential(k);
            for n in -6..=6 {
                let c = sys.gf_coefficient(&h, n).unwrap();
                let expect = if n == k && !sys.omega().contains(n) {
                    1.0
                } else {
                    0.0
                };
                assert!((c - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn gf_coefficients_inside_block_vanish_for_any_symbol() {
        let sys = psi_system();
        let h = TrigPoly::from_coeffs([
            (0, Complex64::new(0.3, -1.0)),
            (3, Complex64::new(1.0, 0.0)),
            (-2, Complex64::new(0.5, 0.25)),
        ]);
        for n in sys.omega().indices() {
            assert_eq!(sys.gf_coefficient(&h, n).unwrap(), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn gf_coefficient_hand_example() {
        // h = e_3 + e_{-2}, block {0}: T_n ≡ 1 pairs only with h_0 = 0,
        // so c_3 = 1, c_{-2} = 1, all others zero.
        let sys = psi_system();
        let h = TrigPoly::from_real_coeffs([(3, 1.0), (-2, 1.0)]);
        let c = sys.gf_coefficients(&h, 8).unwrap();
        assert!((c.get(3) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((c.get(-2) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(c.get(1).norm() < 1e-14);
        assert!(c.get(0).norm() == 0.0);
    }

    #[test]
    fn biorthogonality_is_exact_in_coefficient_algebra() {
        let sys = psi_system();
        assert!(sys.biorthogonality_check(8).unwrap() < 1e-12);
        // regular (empty block) case: trivially exact
        let empty = DualSystem::new(&SingularityProfile::empty(), OmegaBlock::at(0, 0)).unwrap();
        assert_eq!(empty.biorthogonality_check(6).unwrap(), 0.0);
    }

    #[test]
    fn completeness_probe_examples() {
        let sys = psi_system();
        assert!(sys.completeness_probe(&TrigPoly::zero()).unwrap());
        // e_5 has c_5 = 1 ≠ 0: implication vacuous
        assert!(sys.completeness_probe(&TrigPoly::exponential(5)).unwrap());
        let h = TrigPoly::from_real_coeffs([(0, 1.0), (1, 1.0)]);
        assert!(sys.completeness_probe(&h).unwrap());
    }

    #[test]
    fn completeness_rank_oracle() {
        // Independent route: the linear map h ↦ (c_n(h)) on degree-10
        // symbols has full column rank, so only h = 0 is annihilated.
        let sys = psi_system();
        let deg = 10i64;
        let range = deg + 9;
        let cols: Vec<i64> = (-deg..=deg).collect();
        let rows: Vec<i64> = (-range..=range)
            .filter(|n| !sys.omega().contains(*n))
            .collect();
        let mut m = DMatrix::from_element(rows.len(), cols.len(), Complex64::new(0.0, 0.0));
        for (j, &k) in cols.iter().enumerate() {
            let h = TrigPoly::exponential(k);
            for (i, &n) in rows.iter().enumerate() {
                m[(i, j)] = sys.gf_coefficient(&h, n).unwrap();
            }
        }
        // Gram matrix must be (numerically) positive definite
        let gram = m.adjoint() * &m;
        let chol = gram.cholesky();
        assert!(chol.is_some(), "coefficient map lost rank");
        let l = chol.unwrap().l();
        let mut min_diag = f64::INFINITY;
        let mut max_diag: f64 = 0.0;
        for i in 0..l.nrows() {
            min_diag = min_diag.min(l[(i, i)].norm());
            max_diag = max_diag.max(l[(i, i)].norm());
        }
        assert!(min_diag > 1e-9 * max_diag);
    }

    #[test]
    fn regular_dual_of_flat_weight_is_identity() {
        let phi = autocorrelation(&boxcar());
        let d = regular_dual(&phi, 8).unwrap();
        assert!((d.coeff(0) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        for k in 1..=8 {
            assert!(d.coeff(k).norm() < 1e-12);
        }
    }

    #[test]
    fn regular_dual_hat_coefficients_alternate_and_decay() {
        // Laurent expansion of 3/(2+cos2πξ): d_k = √3·(-1)^k (2-√3)^{|k|}
        let phi = autocorrelation(&hat());
        let d = regular_dual(&phi, 24).unwrap();
        let r = 2.0 - 3.0f64.sqrt();
        for k in 0..=24i64 {
            let expect = 3.0f64.sqrt() * (-r).powi(k as i32);
            assert!(
                (d.coeff(k).re - expect).abs() < 1e-10,
                "k={k}: {} vs {}",
                d.coeff(k).re,
                expect
            );
            assert!(d.coeff(k).im.abs() < 1e-12);
        }
    }

    #[test]
    fn regular_dual_biorthogonal_to_shifts() {
        // g = Σ d_k φ(·+k) built as a piecewise function; ∫hat(x+j)·g(x)dx
        // must be δ_{j0} (exact piecewise integrals, no quadrature).
        let phi = autocorrelation(&hat());
        let k_max = 24i64;
        let d = regular_dual(&phi, k_max).unwrap();
        let shifts: Vec<_> = (-k_max..=k_max)
            .map(|k| shift_dilate(&hat(), 1.0, -k as f64))
            .collect();
        let coeffs: Vec<C64> = (-k_max..=k_max).map(|k| d.coeff(k)).collect();
        let g = combine(&coeffs, &shifts).unwrap();
        for j in -6i64..=6 {
            let v = inner_product(&shift_dilate(&hat(), 1.0, -j as f64), &g, 0);
            let expect = if j == 0 { 1.0 } else { 0.0 };
            assert!(
                (v - Complex64::new(expect, 0.0)).norm() < 1e-8,
                "j={j}: {v}"
            );
        }
    }

    #[test]
    fn regular_dual_rejects_singular_weight() {
        let phi = autocorrelation(&psi1());
        assert!(matches!(regular_dual(&phi, 8), Err(Error::WeightHasZeros)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn gf_coefficient_is_linear(
            a_re in -2.0f64..2.0, b_re in -2.0f64..2.0,
            k1 in -5i64..=5, k2 in -5i64..=5, n in -6i64..=6,
        ) {
            let sys = psi_system();
            let a = Complex64::new(a_re, 0.4);
            let b = Complex64::new(b_re, -0.9);
            let h1 = TrigPoly::exponential(k1);
            let h2 = TrigPoly::exponential(k2);
            let combined = h1.scale(a).add(&h2.scale(b));
            let lhs = sys.gf_coefficient(&combined, n).unwrap();
            let rhs = a * sys.gf_coefficient(&h1, n).unwrap()
                + b * sys.gf_coefficient(&h2, n).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
        }
    }
}
