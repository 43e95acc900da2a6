//! Orthonormalized generators and prescribed spectral weights.
//!
//! `φ̂₀ = φ̂/√Φ` has orthonormal integer shifts spanning the same space;
//! it is kept in frequency domain only — every downstream check is a
//! frequency-side lattice sum. When the weight vanishes somewhere, the
//! quotient stays bounded only if `φ̂` vanishes there at least to the
//! singularity order; [`OrthoGenerator::new`] verifies this from exact
//! transform derivatives.

use crate::analysis::{self, SingularityProfile};
use crate::bracket::{self, Decay};
use crate::error::Error;
use crate::piecewise::{self, PiecewiseFn};
use crate::trigpoly::TrigPoly;
use crate::{Result, C64};
use serde::Serialize;

/// Margin around singular points inside which evaluation is refused.
pub const SINGULAR_MARGIN: f64 = 1e-9;

/// A generator together with its weight, ready to evaluate `φ̂₀ = φ̂/√Φ`.
#[derive(Debug, Clone)]
pub struct OrthoGenerator {
    base: PiecewiseFn,
    phi: TrigPoly,
    profile: SingularityProfile,
    decay: Decay,
}

/// Outcome of the orthonormality lattice-sum check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OnbReport {
    pub max_deviation: f64,
    pub tail_bound: f64,
}

impl OrthoGenerator {
    /// Builds from a generator; computes its weight, the singular profile,
    /// and verifies that the transform vanishes to sufficient order at every
    /// singular point (so the quotient stays locally bounded).
    pub fn new(base: PiecewiseFn) -> Result<Self> {
        let phi = bracket::autocorrelation(&base);
        if phi.is_zero() {
            return Err(Error::InvalidArgument(
                "cannot orthonormalize the zero generator".into(),
            ));
        }
        let profile = analysis::profile(&phi)?;
        let decay = Decay::for_generator(&base)?;
        let gen = OrthoGenerator {
            base,
            phi,
            profile,
            decay,
        };
        for p in &gen.profile.points {
            // pointwise order at a window of integer translates
            for m in -8i64..=8 {
                let found = gen.hat_zero_order(p.location + m as f64)?;
                if found < p.order {
                    return Err(Error::InsufficientZeroOrder {
                        location: p.location + m as f64,
                        required: p.order,
                        found,
                    });
                }
            }
        }
        Ok(gen)
    }

    /// Diagnostic constructor with an explicit weight in place of the
    /// generator's own; used for negative controls.
    pub fn with_weight(base: PiecewiseFn, phi: TrigPoly) -> Result<Self> {
        let profile = analysis::profile(&phi)?;
        let decay = Decay::for_generator(&base)?;
        Ok(OrthoGenerator {
            base,
            phi,
            profile,
            decay,
        })
    }

    pub fn base(&self) -> &PiecewiseFn {
        &self.base
    }

    pub fn weight(&self) -> &TrigPoly {
        &self.phi
    }

    pub fn profile(&self) -> &SingularityProfile {
        &self.profile
    }

    fn distance_to_singular(&self, t: f64) -> f64 {
        self.profile
            .points
            .iter()
            .map(|p| {
                let d = (t - p.location).rem_euclid(1.0);
                d.min(1.0 - d)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Order of the zero of `φ̂` at the point `xi` (0 when `φ̂(xi) ≠ 0`),
    /// from exact transform derivatives.
    fn hat_zero_order(&self, xi: f64) -> Result<u32> {
        let (a, b) = self.base.support().expect("nonzero generator");
        let t_max = a.abs().max(b.abs()).max(1.0);
        let mass: f64 = {
            // ∫|φ| by midpoint sampling; only used as a scale
            let n = 2048;
            let h = (b - a) / n as f64;
            (0..n)
                .map(|i| self.base.eval(a + (i as f64 + 0.5) * h).norm() * h)
                .sum()
        };
        for d in 0..=(piecewise::DEGREE_CAP as u32 + 2) {
            let scale = (std::f64::consts::TAU * t_max).powi(d as i32) * mass;
            let v = piecewise::fourier_derivative(&self.base, xi, d)?.value;
            if v.norm() > 1e-9 * scale.max(1e-300) {
                return Ok(d);
            }
        }
        Err(Error::Internal(format!(
            "transform derivatives all vanish at {xi}"
        )))
    }

    /// `φ̂₀(ξ) = φ̂(ξ)/√Φ(ξ mod 1)`. Evaluation inside the margin around a
    /// singular point is refused.
    pub fn ortho_hat(&self, xi: f64) -> Result<C64> {
        let t = xi.rem_euclid(1.0);
        let dist = self.distance_to_singular(t);
        if dist < SINGULAR_MARGIN {
            return Err(Error::NearSingularPoint { xi, margin: dist });
        }
        let w = self.phi.eval(t).re;
        if w <= 0.0 {
            return Err(Error::NearSingularPoint { xi, margin: dist });
        }
        Ok(piecewise::fourier(&self.base, xi).value / w.sqrt())
    }

    /// `max_t |Σ_{|k|≤K} |φ̂₀(t+k)|² - 1|` over the grid, with the lattice
    /// sum evaluated through the tail-corrected bracket. Grid points must
    /// keep a 1e-3 margin from the singular set.
    pub fn check_onb(&self, grid: &[f64], truncation_k: u32) -> Result<OnbReport> {
        let mut max_deviation = 0.0f64;
        let mut tail_bound = 0.0f64;
        for &t in grid {
            let t = t.rem_euclid(1.0);
            if self.distance_to_singular(t) < 1e-3 {
                return Err(Error::InvalidArgument(format!(
                    "grid point {t} is within 1e-3 of a singular point"
                )));
            }
            let w = self.phi.eval(t).re;
            if w <= 0.0 {
                return Err(Error::Internal(format!(
                    "weight nonpositive at grid point {t}"
                )));
            }
            let pt = bracket::bracket_numeric(
                |xi| piecewise::fourier(&self.base, xi).value,
                self.decay,
                t,
                truncation_k,
            )?;
            max_deviation = max_deviation.max((pt.value / w - 1.0).abs());
            tail_bound = tail_bound.max(pt.tail_bound / w);
        }
        Ok(OnbReport {
            max_deviation,
            tail_bound,
        })
    }
}

/// Uniform midpoint grid with points closer than `margin` to a singular
/// point dropped.
pub fn grid_avoiding(n: usize, profile: &SingularityProfile, margin: f64) -> Vec<f64> {
    (0..n)
        .map(|i| (i as f64 + 0.5) / n as f64)
        .filter(|&t| {
            profile.points.iter().all(|p| {
                let d = (t - p.location).rem_euclid(1.0);
                d.min(1.0 - d) >= margin
            })
        })
        .collect()
}

/// Builds the generator `φ = Σ h_k ψ(·+k)` whose weight is `|h|²`, given a
/// reference generator `ψ` with orthonormal integer shifts. The returned
/// function's autocorrelation is verified against the exact coefficient
/// expansion of `|h|²` before it is handed back.
pub fn prescribe_phi(h: &TrigPoly, psi: &PiecewiseFn) -> Result<PiecewiseFn> {
    let auto = bracket::autocorrelation(psi);
    let deviation = auto.sub(&TrigPoly::one()).l1_norm();
    if deviation > 1e-12 {
        return Err(Error::ShiftsNotOrthonormal { deviation });
    }
    let mut coeffs: Vec<C64> = Vec::new();
    let mut shifts = Vec::new();
    for (k, c) in h.coeffs() {
        coeffs.push(c);
        shifts.push(piecewise::shift_dilate(psi, 1.0, -k as f64));
    }
    let phi = piecewise::combine(&coeffs, &shifts)?;
    let target = h.mul(&h.conj_reflection());
    let got = bracket::autocorrelation(&phi);
    let err = got.sub(&target).l1_norm();
    if err > 1e-10 * (1.0 + target.l1_norm()) {
        return Err(Error::Internal(format!(
            "prescribed weight mismatch: coefficient residual {err:.3e}"
        )));
    }
    Ok(phi)
}

// ---------------------------------------------------------------------------
