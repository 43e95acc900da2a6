//! The periodized spectral weight `Φ_φ(t) = Σ_k |φ̂(t+k)|²`.
//!
//! For a compactly supported generator the weight is a trigonometric
//! polynomial whose Fourier coefficients are the shift autocorrelations
//! `c_k = ∫ φ(t)·conj(φ(t+k)) dt`; [`autocorrelation`] computes it exactly.
//! [`bracket_numeric`] evaluates the lattice sum directly from frequency
//! samples with a midpoint-rule tail estimate and a certified tail bound,
//! which is how the two routes cross-check each other.

use crate::error::Error;
use crate::piecewise::{self, PiecewiseFn};
use crate::trigpoly::TrigPoly;
use crate::{Result, C64};

const TAU: f64 = std::f64::consts::TAU;
const PI: f64 = std::f64::consts::PI;

/// Declared decay of a frequency-domain function: `|f̂(ξ)| ≤ c·|ξ|^{-p}`.
///
/// The periodized square sum is only certifiable for `p > 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decay {
    pub p: f64,
    pub c: f64,
}

impl Decay {
    pub fn new(p: f64, c: f64) -> Result<Self> {
        if p.is_nan() || p <= 0.5 {
            return Err(Error::DecayTooSlow { p });
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "decay constant must be positive and finite, got {c}"
            )));
        }
        Ok(Decay { p, c })
    }

    /// Rigorous decay bound for a compactly supported piecewise polynomial:
    /// differentiates while the layer is continuous; at the first layer with
    /// jumps, `|f̂(ξ)| ≤ V(f^{(p-1)}) / (2π|ξ|)^p` with `V` the layer's
    /// total variation.
    pub fn for_generator(f: &PiecewiseFn) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::InvalidArgument(
                "the zero generator has no decay profile".into(),
            ));
        }
        let scale = 1e-9 * (1.0 + f.norm_sq().sqrt());
        let mut layer = f.clone();
        for order in 1..=(piecewise::DEGREE_CAP as i32 + 2) {
            if layer.jump_total() > scale {
                return Decay::new(order as f64, total_variation(&layer) / TAU.powi(order));
            }
            layer = layer.derivative_pieces();
        }
        Err(Error::Internal(
            "no discontinuous derivative layer found for a nonzero compactly supported function"
                .into(),
        ))
    }
}

/// Jump mass plus within-piece variation; the continuous part is sampled
/// piece by piece so jumps are never double counted.
fn total_variation(f: &PiecewiseFn) -> f64 {
    let mut v = f.jump_total();
    let bks = f.breakpoints();
    for i in 0..bks.len().saturating_sub(1) {
        let (a, b) = (bks[i], bks[i + 1]);
        let n = 512;
        let h = (b - a) / n as f64;
        let mut prev = f.eval(a + 0.5 * h);
        for j in 1..n {
            let cur = f.eval(a + (j as f64 + 0.5) * h);
            v += (cur - prev).norm();
            prev = cur;
        }
    }
    v
}

/// Exact periodization: `c_k = ∫ φ(t)·conj(φ(t+k)) dt` for the finitely many
/// overlapping shifts; `c_{-k} = conj(c_k)` is enforced structurally.
pub fn autocorrelation(phi: &PiecewiseFn) -> TrigPoly {
    let Some((a, b)) = phi.support() else {
        return TrigPoly::zero();
    };
    let span = (b - a).ceil() as i64;
    let mut coeffs: Vec<(i64, C64)> = Vec::new();
    for k in 0..=span {
        let c = piecewise::inner_product(phi, phi, k);
        if c.norm() == 0.0 {
            continue;
        }
        if k == 0 {
            coeffs.push((0, C64::new(c.re, 0.0)));
        } else {
            coeffs.push((k, c));
            coeffs.push((-k, c.conj()));
        }
    }
    TrigPoly::from_coeffs(coeffs)
}

/// One point of the numeric bracket sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketPoint {
    /// `Σ_{|k|≤K} |f̂(t+k)|²` plus the midpoint-rule tail estimate.
    pub value: f64,
    /// Integral-comparison bound on the raw tail `Σ_{|k|>K} |f̂(t+k)|²`.
    pub tail_bound: f64,
}

/// Truncated lattice sum `Σ_{|k|≤K} |f̂(t+k)|²` with a tail estimate.
///
/// The tail is estimated per side by the midpoint rule for
/// `∫ A·x^{-2p} dx` with the amplitude `A` read off the last two summands,
/// which captures the periodic envelope of the fixtures exactly. The
/// reported `tail_bound` is the conservative integral-comparison bound
/// `2c²(K-1)^{1-2p}/(2p-1)` from the declared decay.
pub fn bracket_numeric(
    fhat: impl Fn(f64) -> C64,
    decay: Decay,
    t: f64,
    truncation_k: u32,
) -> Result<BracketPoint> {
    if decay.p.is_nan() || decay.p <= 0.5 {
        return Err(Error::DecayTooSlow { p: decay.p });
    }
    if truncation_k < 4 {
        return Err(Error::InvalidArgument(
            "bracket truncation K must be at least 4".into(),
        ));
    }
    let k = truncation_k as i64;
    let mut sum = 0.0;
    for j in -k..=k {
        sum += fhat(t + j as f64).norm_sqr();
    }
    let two_p = 2.0 * decay.p;
    // amplitude per side from the trailing samples (mean of the last two
    // absorbs period-2 envelopes)
    let amp = |offsets: [i64; 2]| -> f64 {
        offsets
            .iter()
            .map(|&j| {
                let x = t + j as f64;
                fhat(x).norm_sqr() * x.abs().powf(two_p)
            })
            .sum::<f64>()
            / 2.0
    };
    let amp_right = amp([k - 1, k]);
    let amp_left = amp([-k + 1, -k]);
    let kk = k as f64;
    let corr_right = amp_right * (t + kk + 0.5).abs().powf(1.0 - two_p) / (two_p - 1.0);
    let corr_left = amp_left * (kk + 0.5 - t).abs().powf(1.0 - two_p) / (two_p - 1.0);
    let tail_bound = 2.0 * decay.c * decay.c * (kk - 1.0).powf(1.0 - two_p) / (two_p - 1.0);
    Ok(BracketPoint {
        value: sum + corr_right + corr_left,
        tail_bound,
    })
}

/// Either route's description of the spectral weight.
#[derive(Debug, Clone, PartialEq)]
pub enum BracketResult {
    Exact {
        phi: TrigPoly,
    },
    Sampled {
        truncation_k: u32,
        samples: Vec<(f64, f64)>,
        tail_bound: f64,
    },
}

impl BracketResult {
    /// Exact route: the autocorrelation polynomial.
    pub fn exact(phi: &PiecewiseFn) -> Self {
        BracketResult::Exact {
            phi: autocorrelation(phi),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            BracketResult::Exact { phi } => phi.eval(t).re,
            BracketResult::Sampled { samples, .. } => samples
                .iter()
                .min_by(|a, b| (a.0 - t).abs().partial_cmp(&(b.0 - t).abs()).unwrap())
                .map(|(_, v)| *v)
                .unwrap_or(f64::NAN),
        }
    }
}

/// Samples the numeric bracket on a uniform grid.
pub fn bracket_grid(
    fhat: impl Fn(f64) -> C64,
    decay: Decay,
    grid_points: usize,
    truncation_k: u32,
) -> Result<BracketResult> {
    let mut samples = Vec::with_capacity(grid_points);
    let mut worst = 0.0f64;
    for i in 0..grid_points {
        let t = (i as f64 + 0.5) / grid_points as f64;
        let pt = bracket_numeric(&fhat, decay, t, truncation_k)?;
        worst = worst.max(pt.tail_bound);
        samples.push((t, pt.value));
    }
    Ok(BracketResult::Sampled {
        truncation_k,
        samples,
        tail_bound: worst,
    })
}

// ---------------------------------------------------------------------------
// Lattice-sum identities
// ---------------------------------------------------------------------------

/// Closed form of `Σ_k 1/|ξ+k|²`.
pub fn quadratic_identity_rhs(xi: f64) -> f64 {
    let s = (PI * xi).sin();
    PI * PI / (s * s)
}

/// Closed form of `Σ_k 1/|ξ+k|⁴`.
pub fn quartic_identity_rhs(xi: f64) -> f64 {
    let s = (PI * xi).sin();
    PI.powi(4) / 3.0 * (2.0 + (TAU * xi).cos()) / s.powi(4)
}

/// Outcome of one identity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub xi: f64,
    pub truncation_k: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
}

fn check_xi(xi: f64) -> Result<()> {
    if (xi - xi.round()).abs() < 1e-9 {
        return Err(Error::XiNearInteger { xi });
    }
    Ok(())
}

fn lattice_sum(xi: f64, truncation_k: u32, power: i32) -> f64 {
    let k = truncation_k as i64;
    let mut sum = 0.0;
    for j in -k..=k {
        sum += (xi + j as f64).abs().powi(-power);
    }
    // midpoint-rule tails: ∫_{K+1/2}^∞ (x ± ξ)^{-power} dx
    let kk = k as f64 + 0.5;
    let q = (power - 1) as f64;
    sum += ((kk + xi).powi(-(power - 1)) + (kk - xi).powi(-(power - 1))) / q;
    sum
}

/// Truncated `Σ 1/|ξ+k|²` with tail correction against `π²/sin²πξ`.
pub fn verify_quadratic_identity(xi: f64, truncation_k: u32) -> Result<IdentityCheck> {
    check_xi(xi)?;
    let lhs = lattice_sum(xi, truncation_k, 2);
    let rhs = quadratic_identity_rhs(xi);
    Ok(IdentityCheck {
        xi,
        truncation_k,
        lhs,
        rhs,
        rel_error: (lhs - rhs).abs() / rhs.abs(),
    })
}

/// Truncated `Σ 1/|ξ+k|⁴` with tail correction against
/// `(π⁴/3)(2+cos2πξ)/sin⁴πξ`.
pub fn verify_quartic_identity(xi: f64, truncation_k: u32) -> Result<IdentityCheck> {
    check_xi(xi)?;
    let lhs = lattice_sum(xi, truncation_k, 4);
    let rhs = quartic_identity_rhs(xi);
    Ok(IdentityCheck {
        xi,
        truncation_k,
        lhs,
        rhs,
        rel_error: (lhs - rhs).abs() / rhs.abs(),
    })
}

/// Consistency of the two closed forms: the quartic sum is one sixth of the
/// second derivative of the quadratic one, term by term. Checked with a
/// five-point stencil; `ξ` must stay at distance ≥ 0.1 from the integers for
/// the stencil error to stay below 1e-6.
pub fn identity_second_derivative_check(xi: f64) -> Result<IdentityCheck> {
    check_xi(xi)?;
    if (xi - xi.round()).abs() < 0.1 {
        return Err(Error::InvalidArgument(
            "second-derivative check needs ξ at distance ≥ 0.1 from the integers".into(),
        ));
    }
    let h = 1e-3;
    let f = quadratic_identity_rhs;
    let d2 = (-f(xi - 2.0 * h) + 16.0 * f(xi - h) - 30.0 * f(xi) + 16.0 * f(xi + h)
        - f(xi + 2.0 * h))
        / (12.0 * h * h);
    let lhs = quartic_identity_rhs(xi);
    let rhs = d2 / 6.0;
    Ok(IdentityCheck {
        xi,
        truncation_k: 0,
        lhs,
        rhs,
        rel_error: (lhs - rhs).abs() / rhs.abs(),
    })
}

// ---------------------------------------------------------------------------
