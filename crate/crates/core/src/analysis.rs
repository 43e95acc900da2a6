//! Basis-property classification of `{φ(·+k)}` from the spectral weight.
//!
//! The weight's zero set with orders (its singularity profile) decides
//! everything: a strictly positive weight gives a Riesz basis with the
//! weight's bounds as the frame constants; a zero of order λ destroys the
//! Riesz and Schauder properties, leaves an M-basis after removing a block
//! of `Σλ_j` consecutive shifts, and puts the Cesàro summation threshold at
//! `λ₀ - 1/2`.

use crate::error::Error;
use crate::trigpoly::TrigPoly;
use crate::Result;
use serde::{Deserialize, Serialize};

/// Default threshold for root multiplicity detection.
pub const ROOT_TOL: f64 = 1e-8;

/// Residual allowed when reconstructing the weight from its factorization.
pub const FACTOR_RESIDUAL_TOL: f64 = 1e-9;

/// One zero of the weight, recorded with the singularity order `λ`
/// (the weight vanishes to order `2λ`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub location: f64,
    pub order: u32,
}

/// The zero set `X = {x_j}` of the weight with orders `Λ = {λ_j}`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SingularityProfile {
    pub points: Vec<SingularPoint>,
}

impl SingularityProfile {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `|Λ| = Σ_j λ_j`, the number of shifts that must be removed.
    pub fn total(&self) -> u32 {
        self.points.iter().map(|p| p.order).sum()
    }

    /// `λ₀ = max_j λ_j`.
    pub fn lambda0(&self) -> u32 {
        self.points.iter().map(|p| p.order).max().unwrap_or(0)
    }
}

/// A block of consecutive integers `{start, …, start+len-1}` removed from
/// the shift system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaBlock {
    pub start: i64,
    pub len: usize,
}

impl OmegaBlock {
    /// Centered placement: `{-⌊n/2⌋, …}`.
    pub fn centered(len: usize) -> Self {
        OmegaBlock {
            start: -((len / 2) as i64),
            len,
        }
    }

    pub fn at(start: i64, len: usize) -> Self {
        OmegaBlock { start, len }
    }

    pub fn contains(&self, k: i64) -> bool {
        k >= self.start && k < self.start + self.len as i64
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        self.start..self.start + self.len as i64
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// `ω(t) = Π_j sin^{λ_j} π(t - x_j)`, the singular factor of the weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SineProduct {
    pub factors: Vec<SingularPoint>,
}

impl SineProduct {
    pub fn eval(&self, t: f64) -> f64 {
        self.factors
            .iter()
            .map(|f| {
                (std::f64::consts::PI * (t - f.location))
                    .sin()
                    .abs()
                    .powi(f.order as i32)
            })
            .product()
    }

    /// `|ω|²` as a trigonometric polynomial.
    pub fn abs_squared(&self) -> TrigPoly {
        let mut acc = TrigPoly::one();
        for f in &self.factors {
            let s2 = TrigPoly::sin_sq_at(f.location);
            for _ in 0..f.order {
                acc = acc.mul(&s2);
            }
        }
        acc
    }
}

/// Classification of the shift system `{φ(·+k)}` in `S(φ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisReport {
    /// Riesz basis in the full enumeration.
    pub riesz: bool,
    /// Essential bounds of the weight when positive: the frame constants.
    pub riesz_bounds: Option<(f64, f64)>,
    /// Schauder basis in the natural enumeration (A₂ behaviour of the weight).
    pub schauder: bool,
    /// Full system is an M-basis (needs `1/Φ ∈ L(𝕋)`).
    pub m_basis_full: bool,
    /// Shift block whose removal leaves an M-basis, when the full system
    /// fails to be one.
    pub omega: Option<OmegaBlock>,
    /// `(C,α)` summation threshold `λ₀ - 1/2` for the reduced system.
    pub cesaro_threshold: Option<f64>,
    /// Abel–Poisson means converge for every element of `S(φ)`.
    pub abel_summable: bool,
    pub profile: SingularityProfile,
    pub notes: Vec<String>,
}

/// Reads the singularity profile off the weight's zero set: a zero of
/// multiplicity `2λ` is a singularity of order `λ`. Odd multiplicities
/// contradict nonnegativity and are reported as failures.
pub fn profile(phi: &TrigPoly) -> Result<SingularityProfile> {
    profile_with_tol(phi, ROOT_TOL)
}

pub fn profile_with_tol(phi: &TrigPoly, tol: f64) -> Result<SingularityProfile> {
    let roots = phi.roots_on_torus(tol)?;
    let mut points = Vec::with_capacity(roots.len());
    for r in roots {
        if r.multiplicity % 2 != 0 {
            return Err(Error::OddMultiplicity {
                location: r.location,
                multiplicity: r.multiplicity,
            });
        }
        points.push(SingularPoint {
            location: r.location,
            order: r.multiplicity / 2,
        });
    }
    Ok(SingularityProfile { points })
}

/// Factors `Φ = |ω|²·P` with `P > 0`, dividing out each singular sine power
/// and verifying the reconstruction residual.
pub fn factorize(phi: &TrigPoly, profile: &SingularityProfile) -> Result<(SineProduct, TrigPoly)> {
    let omega = SineProduct {
        factors: profile.points.clone(),
    };
    let mut p = phi.clone();
    for pt in &profile.points {
        p = p.divide_out(pt.location, 2 * pt.order, 1e-7)?;
    }
    let p = p.chop(1e-13 * (1.0 + phi.l1_norm()));
    // P must be strictly positive on the torus
    let ext = p.extrema();
    if ext.min.1 <= 0.0 || ext.min.1.is_nan() {
        return Err(Error::FactorizationResidual {
            residual: -ext.min.1,
            tol: 0.0,
        });
    }
    let back = omega.abs_squared().mul(&p);
    let residual = back.sub(phi).l1_norm();
    let tol = FACTOR_RESIDUAL_TOL * (1.0 + phi.l1_norm());
    if residual > tol {
        return Err(Error::FactorizationResidual { residual, tol });
    }
    Ok((omega, p))
}

/// Full basis classification with the default (centered) block placement.
pub fn classify(phi: &TrigPoly) -> Result<BasisReport> {
    classify_full(phi, None, ROOT_TOL)
}

/// Classification with an explicit start for the removed block.
pub fn classify_with_omega_start(phi: &TrigPoly, omega_start: Option<i64>) -> Result<BasisReport> {
    classify_full(phi, omega_start, ROOT_TOL)
}

/// Classification with explicit block placement and root-detection
/// tolerance.
pub fn classify_full(phi: &TrigPoly, omega_start: Option<i64>, tol: f64) -> Result<BasisReport> {
    if phi.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let prof = profile_with_tol(phi, tol)?;
    if prof.is_empty() {
        let ext = phi.extrema();
        if ext.min.1 <= 0.0 || ext.min.1.is_nan() {
            return Err(Error::RootConditioning(format!(
                "no zeros located but the weight attains {:.3e} at t = {}",
                ext.min.1, ext.min.0
            )));
        }
        return Ok(BasisReport {
            riesz: true,
            riesz_bounds: Some((ext.min.1, ext.max.1)),
            schauder: true,
            m_basis_full: true,
            omega: None,
            cesaro_threshold: None,
            abel_summable: true,
            profile: prof,
            notes: vec![format!(
                "weight in [{:.12}, {:.12}]: shifts form a Riesz basis",
                ext.min.1, ext.max.1
            )],
        });
    }

    let total = prof.total() as usize;
    let omega = match omega_start {
        Some(s) => OmegaBlock::at(s, total),
        None => OmegaBlock::centered(total),
    };
    let lambda0 = prof.lambda0();
    let threshold = lambda0 as f64 - 0.5;
    let notes = vec![
        "weight vanishes on the torus: not a Riesz basis, and no enumeration is a Schauder basis"
            .to_string(),
        format!(
            "removing the {total} consecutive shift(s) {:?} leaves an M-basis",
            omega.indices().collect::<Vec<_>>()
        ),
        format!("(C,α) summation basis of the reduced system iff α > {threshold}"),
        "Abel–Poisson means converge for every element".to_string(),
    ];
    Ok(BasisReport {
        riesz: false,
        riesz_bounds: None,
        schauder: false,
        m_basis_full: false,
        omega: Some(omega),
        cesaro_threshold: Some(threshold),
        abel_summable: true,
        profile: prof,
        notes,
    })
}

// ---------------------------------------------------------------------------
// Heuristic Muckenhoupt A₂ scan
// ---------------------------------------------------------------------------

/// Result of the dyadic A₂ scan. The verdict is heuristic: a finite dyadic
/// family cannot certify the condition over all intervals, it can only
/// exhibit unbounded growth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct A2Scan {
    pub sup_by_depth: Vec<f64>,
    pub a2_lower_bound: f64,
    pub passes: bool,
}

/// Sup over dyadic intervals of `avg(w)·avg(1/w)`, refined per depth.
/// "Fails" when the sup keeps growing geometrically across the last depths.
pub fn a2_scan(w: impl Fn(f64) -> f64, depth: u32) -> Result<A2Scan> {
    let depth = depth.clamp(4, 16);
    let mut sup_by_depth = Vec::with_capacity(depth as usize + 1);
    for d in 0..=depth {
        let cells = 1usize << d;
        let h = 1.0 / cells as f64;
        let mut int_w = Vec::with_capacity(cells);
        let mut int_winv = Vec::with_capacity(cells);
        for i in 0..cells {
            let a = i as f64 * h;
            let (mut acc_w, mut acc_winv) = (0.0, 0.0);
            for (x, wt) in gauss8(a, a + h) {
                let v = w(x);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "weight sample at {x} is not a finite nonnegative number"
                    )));
                }
                let inv = 1.0 / v;
                if !inv.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "weight vanishes exactly at quadrature node {x}"
                    )));
                }
                acc_w += wt * v;
                acc_winv += wt * inv;
            }
            int_w.push(acc_w);
            int_winv.push(acc_winv);
        }
        // prefix sums, then sup over all dyadic generations g <= d
        let mut pre_w = vec![0.0; cells + 1];
        let mut pre_winv = vec![0.0; cells + 1];
        for i in 0..cells {
            pre_w[i + 1] = pre_w[i] + int_w[i];
            pre_winv[i + 1] = pre_winv[i] + int_winv[i];
        }
        let mut sup = 0.0f64;
        for g in 0..=d {
            let window = 1usize << (d - g);
            let count = 1usize << g;
            let len = window as f64 * h;
            for j in 0..count {
                let lo = j * window;
                let hi = lo + window;
                let avg_w = (pre_w[hi] - pre_w[lo]) / len;
                let avg_winv = (pre_winv[hi] - pre_winv[lo]) / len;
                sup = sup.max(avg_w * avg_winv);
            }
        }
        sup_by_depth.push(sup);
    }
    let n = sup_by_depth.len();
    let passes =
        (n.saturating_sub(3)..n - 1).all(|i| sup_by_depth[i + 1] <= 1.15 * sup_by_depth[i]);
    Ok(A2Scan {
        a2_lower_bound: sup_by_depth[n - 1],
        sup_by_depth,
        passes,
    })
}

fn gauss8(a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    const X: [f64; 4] = [
        0.1834346424956498,
        0.525532409916329,
        0.7966664774136267,
        0.9602898564975363,
    ];
    const W: [f64; 4] = [
        0.362683783378362,
        0.3137066458778873,
        0.2223810344533745,
        0.1012285362903763,
    ];
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (0..8).map(move |i| {
        let (x, w) = (X[i / 2], W[i / 2]);
        let node = if i % 2 == 0 {
            mid - half * x
        } else {
            mid + half * x
        };
        (node, w * half)
    })
}

// ---------------------------------------------------------------------------
// Integrability probe behind the definition of singularity order
// ---------------------------------------------------------------------------

/// Refinement sequences for `∫ (x-x₀)^{2(λ-1)}/Φ` (must diverge) and
/// `∫ (x-x₀)^{2λ}/Φ` (must converge) near a claimed singular point.
#[derive(Debug, Clone, PartialEq)]
pub struct Def8Check {
    pub lower_route: Vec<f64>,
    pub upper_route: Vec<f64>,
    pub lower_diverges: bool,
    pub upper_converges: bool,
}

/// Numerically confirms the order of a singular point by the two-integral
/// criterion, refining a midpoint rule that never samples `x₀` itself.
///
/// The refinement depth is capped so that the nearest node still evaluates
/// the weight well above the f64 cancellation floor: the weight vanishes
/// like `dist^{2·order}`, so nodes closer than
/// `(1e-13)^{1/(2·order)}/π` produce noise, not values.
pub fn def8_check(phi: &TrigPoly, x0: f64, order: u32) -> Def8Check {
    let radius = 0.2;
    let integrate = |power: i32, n: usize| -> f64 {
        let h = radius / n as f64;
        let mut acc = 0.0;
        for side in [-1.0f64, 1.0] {
            for i in 0..n {
                let x = x0 + side * (i as f64 + 0.5) * h;
                let dx = x - x0;
                acc += h * dx.abs().powi(power) / phi.eval(x).re;
            }
        }
        acc
    };
    let lower_pow = 2 * (order as i32 - 1);
    let upper_pow = 2 * order as i32;
    let dist_min = 2.0 * 1e-13f64.powf(1.0 / (2.0 * order as f64)) / std::f64::consts::PI;
    let d_max = ((radius / (2.0 * dist_min)).log2().floor() as u32).clamp(7, 14);
    let mut lower_route = Vec::new();
    let mut upper_route = Vec::new();
    for d in (d_max - 4)..=d_max {
        let n = 1usize << d;
        lower_route.push(integrate(lower_pow, n));
        upper_route.push(integrate(upper_pow, n));
    }
    let m = lower_route.len();
    let lower_diverges = (m - 3..m - 1).all(|i| lower_route[i + 1] > 1.2 * lower_route[i]);
    let upper_converges = {
        let a = upper_route[m - 2];
        let b = upper_route[m - 1];
        (b - a).abs() <= 1e-3 * b.abs().max(1e-300)
    };
    Def8Check {
        lower_route,
        upper_route,
        lower_diverges,
        upper_converges,
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::autocorrelation;
    use crate::piecewise::{boxcar, hat, psi1};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn phi_psi() -> TrigPoly {
        autocorrelation(&psi1())
    }

    fn phi_hat() -> TrigPoly {
        autocorrelation(&hat())
    }

    #[test]
    fn profile_of_fixtures() {
        let p = profile(&phi_psi()).unwrap();
        assert_eq!(p.points.len(), 1);
        assert!(p.points[0].location.min(1.0 - p.points[0].location) < 1e-9);
        assert_eq!(p.points[0].order, 1);
        assert_eq!(p.lambda0(), 1);

        assert!(profile(&phi_hat()).unwrap().is_empty());
    }

    #[test]
    fn profile_of_constructed_fixture() {
        // sin⁴π(t - 1/4)·(2 + cos 2πt): order-2 singularity at 1/4.
        // Oracle: closed-form pointwise values.
        let s2 = TrigPoly::sin_sq_at(0.25);
        let base = TrigPoly::from_real_coeffs([(0, 2.0), (1, 0.5), (-1, 0.5)]);
        let fixture = s2.mul(&s2).mul(&base);
        for i in 0..32 {
            let t = i as f64 / 32.0;
            let expect = (std::f64::consts::PI * (t - 0.25)).sin().powi(4)
                * (2.0 + (std::f64::consts::TAU * t).cos());
            assert_abs_diff_eq!(fixture.eval(t).re, expect, epsilon = 1e-12);
        }
        let p = profile(&fixture).unwrap();
        assert_eq!(p.points.len(), 1);
        assert_abs_diff_eq!(p.points[0].location, 0.25, epsilon = 1e-9);
        assert_eq!(p.points[0].order, 2);
    }

    #[test]
    fn profile_invariant_under_positive_cofactor() {
        let pos = TrigPoly::from_real_coeffs([(0, 3.0), (1, 0.7), (-1, 0.7)]);
        let a = profile(&phi_psi()).unwrap();
        let b = profile(&phi_psi().mul(&pos)).unwrap();
        assert_eq!(a.points.len(), b.points.len());
        for (x, y) in a.points.iter().zip(&b.points) {
            assert_eq!(x.order, y.order);
            let d = (x.location - y.location).abs();
            assert!(d.min(1.0 - d) < 1e-8);
        }
    }

    #[test]
    fn factorize_fixtures() {
        let (omega, p) = factorize(&phi_psi(), &profile(&phi_psi()).unwrap()).unwrap();
        assert_eq!(omega.factors.len(), 1);
        assert_eq!(p.support_len(), 1);
        assert_abs_diff_eq!(p.coeff(0).re, 4.0 / 3.0, epsilon = 1e-12);

        // regular weight: ω = 1, P = Φ
        let (omega, p) = factorize(&phi_hat(), &SingularityProfile::empty()).unwrap();
        assert!(omega.factors.is_empty());
        assert_eq!(p, phi_hat());

        // constructed order-2 fixture: P = 2 + cos 2πt recovered
        let s2 = TrigPoly::sin_sq_at(0.25);
        let base = TrigPoly::from_real_coeffs([(0, 2.0), (1, 0.5), (-1, 0.5)]);
        let fixture = s2.mul(&s2).mul(&base);
        let prof = profile(&fixture).unwrap();
        let (_, p) = factorize(&fixture, &prof).unwrap();
        assert!(p.sub(&base).l1_norm() < 1e-9);
    }

    #[test]
    fn classify_box() {
        let report = classify(&autocorrelation(&boxcar())).unwrap();
        assert!(report.riesz && report.schauder && report.m_basis_full);
        let (lo, hi) = report.riesz_bounds.unwrap();
        assert_abs_diff_eq!(lo, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-12);
        assert!(report.omega.is_none());
    }

    #[test]
    fn classify_hat() {
        let report = classify(&phi_hat()).unwrap();
        assert!(report.riesz);
        let (lo, hi) = report.riesz_bounds.unwrap();
        assert_abs_diff_eq!(lo, 1.0 / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn classify_psi1() {
        let report = classify(&phi_psi()).unwrap();
        assert!(!report.riesz && !report.schauder && !report.m_basis_full);
        let omega = report.omega.unwrap();
        assert_eq!(omega.len, 1);
        assert_eq!(omega.start, 0);
        assert_abs_diff_eq!(report.cesaro_threshold.unwrap(), 0.5, epsilon = 0.0);
        assert!(report.abel_summable);
    }

    #[test]
    fn classify_is_scale_invariant() {
        for scale in [0.01, 1.0, 250.0] {
            let scaled = phi_psi().scale(Complex64::new(scale, 0.0));
            let report = classify(&scaled).unwrap();
            assert!(!report.riesz && !report.schauder);
            assert_eq!(report.cesaro_threshold, Some(0.5));
            let regular = phi_hat().scale(Complex64::new(scale, 0.0));
            let report = classify(&regular).unwrap();
            assert!(report.riesz && report.schauder && report.m_basis_full);
        }
    }

    #[test]
    fn profile_rejects_sign_changing_weights() {
        // cos 2πt has simple (odd) zeros: not a nonnegative weight
        let cosine = TrigPoly::from_real_coeffs([(1, 0.5), (-1, 0.5)]);
        assert!(matches!(
            profile(&cosine),
            Err(Error::OddMultiplicity { .. })
        ));
    }

    #[test]
    fn classify_rejects_zero() {
        assert!(matches!(
            classify(&TrigPoly::zero()),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn omega_override() {
        let report = classify_with_omega_start(&phi_psi(), Some(3)).unwrap();
        let omega = report.omega.unwrap();
        assert_eq!(omega.start, 3);
        assert!(omega.contains(3) && !omega.contains(0));
    }

    #[test]
    fn a2_constant_weight() {
        let scan = a2_scan(|_| 1.0, 10).unwrap();
        assert!(scan.passes);
        assert_abs_diff_eq!(scan.a2_lower_bound, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn a2_order_two_zero_fails() {
        let scan = a2_scan(|t| (std::f64::consts::PI * t).sin().powi(2), 12).unwrap();
        assert!(!scan.passes, "sup sequence {:?}", scan.sup_by_depth);
        // growth ~ 1/|I| near the zero: successive depths roughly double
        let n = scan.sup_by_depth.len();
        assert!(scan.sup_by_depth[n - 1] > 1.7 * scan.sup_by_depth[n - 2]);
    }

    #[test]
    fn a2_order_one_zero_saturates() {
        let scan = a2_scan(|t| (std::f64::consts::PI * t).sin().abs(), 12).unwrap();
        assert!(scan.passes, "sup sequence {:?}", scan.sup_by_depth);
    }

    #[test]
    fn def8_confirms_orders() {
        // ψ-type weight: order 1 at 0
        let chk = def8_check(&phi_psi(), 0.0, 1);
        assert!(chk.lower_diverges, "lower route {:?}", chk.lower_route);
        assert!(chk.upper_converges, "upper route {:?}", chk.upper_route);
        // overshooting the order: the lower route now converges
        let chk = def8_check(&phi_psi(), 0.0, 2);
        assert!(!chk.lower_diverges);

        // constructed order-2 fixture at 1/4
        let s2 = TrigPoly::sin_sq_at(0.25);
        let base = TrigPoly::from_real_coeffs([(0, 2.0), (1, 0.5), (-1, 0.5)]);
        let fixture = s2.mul(&s2).mul(&base);
        let chk = def8_check(&fixture, 0.25, 2);
        assert!(chk.lower_diverges && chk.upper_converges);
    }
}
