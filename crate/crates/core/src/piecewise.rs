//! Exact calculus for compactly supported piecewise-polynomial functions.
//!
//! A [`PiecewiseFn`] is a finite list of strictly increasing breakpoints with
//! one complex polynomial per interval; the function is identically zero
//! outside the support. Construction, shifting, dilation, linear combination,
//! convolution and inner products are all closed-form operations on the
//! polynomial coefficients, so the standard fixtures (indicator, triangle,
//! their differences and iterated convolutions) stay exact to rounding.

use crate::error::Error;
use crate::{Result, C64};
use num_complex::Complex64;
use serde::Deserialize;

/// Maximum polynomial degree accepted per piece. Inputs above this are
/// rejected as mis-specified rather than silently ground through exact
/// arithmetic.
pub const DEGREE_CAP: usize = 16;

/// Breakpoints closer than this are merged when grids are combined.
pub const MERGE_TOL: f64 = 1e-12;

const TAU: f64 = std::f64::consts::TAU;

// ---------------------------------------------------------------------------
// Internal dense polynomial in one real variable, complex coefficients.
// ---------------------------------------------------------------------------

/// Coefficients ascending in power; empty vector is the zero polynomial.
#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct Poly {
    pub coeffs: Vec<C64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Poly { coeffs: vec![c] }.normalized()
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.norm_sqr() == 0.0) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, t: f64) -> C64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly { coeffs: out }.normalized()
    }

    pub fn scale(&self, s: C64) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
        .normalized()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly { coeffs: out }.normalized()
    }

    pub fn conj(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// p(a + b·t) by iterated multiplication with the linear factor.
    pub fn compose_linear(&self, a: f64, b: f64) -> Poly {
        let lin = Poly {
            coeffs: vec![Complex64::new(a, 0.0), Complex64::new(b, 0.0)],
        };
        let mut out = Poly::zero();
        let mut pow = Poly::constant(Complex64::new(1.0, 0.0));
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                pow = pow.mul(&lin);
            }
            out = out.add(&pow.scale(c));
        }
        out
    }

    pub fn antiderivative(&self) -> Poly {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i + 1] = c / (i + 1) as f64;
        }
        Poly { coeffs: out }.normalized()
    }

    pub fn definite_integral(&self, a: f64, b: f64) -> C64 {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }
}

// ---------------------------------------------------------------------------
// PiecewiseFn
// ---------------------------------------------------------------------------

/// Compactly supported piecewise polynomial on ℝ.
///
/// `breakpoints` is strictly increasing with `pieces.len() + 1` entries; the
/// function equals `pieces[i]` on `[breakpoints[i], breakpoints[i+1])` and is
/// zero outside `[breakpoints.first, breakpoints.last]`. No continuity is
/// assumed, so indicators are representable. An empty function (no pieces)
/// is the zero function.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseFn {
    breakpoints: Vec<f64>,
    pieces: Vec<Poly>,
}

/// A single evaluation of the Fourier transform `f̂(ξ) = ∫ f(t) e^{-2πitξ} dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierValue {
    pub xi: f64,
    pub value: C64,
}

impl PiecewiseFn {
    /// Builds from raw breakpoints and per-interval coefficient lists
    /// (ascending powers of `t` in global coordinates).
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<Vec<C64>>) -> Result<Self> {
        if breakpoints.len() != pieces.len() + 1 {
            return Err(Error::InvalidSpec(format!(
                "expected {} breakpoints for {} pieces, got {}",
                pieces.len() + 1,
                pieces.len(),
                breakpoints.len()
            )));
        }
        if breakpoints
            .windows(2)
            .any(|w| w[1] <= w[0] || !(w[1] - w[0]).is_finite())
        {
            return Err(Error::InvalidSpec(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidSpec("breakpoints must be finite".into()));
        }
        let polys: Vec<Poly> = pieces
            .into_iter()
            .map(|cs| Poly { coeffs: cs }.normalized())
            .collect();
        for p in &polys {
            if p.degree() > DEGREE_CAP {
                return Err(Error::DegreeCap {
                    degree: p.degree(),
                    cap: DEGREE_CAP,
                });
            }
        }
        Ok(Self {
            breakpoints,
            pieces: polys,
        }
        .pruned())
    }

    pub fn new_real(breakpoints: Vec<f64>, pieces: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(
            breakpoints,
            pieces
                .into_iter()
                .map(|cs| cs.into_iter().map(|c| Complex64::new(c, 0.0)).collect())
                .collect(),
        )
    }

    fn from_parts(breakpoints: Vec<f64>, pieces: Vec<Poly>) -> Self {
        Self {
            breakpoints,
            pieces,
        }
        .pruned()
    }

    /// Zero function.
    pub fn zero() -> Self {
        Self {
            breakpoints: Vec::new(),
            pieces: Vec::new(),
        }
    }

    /// Drops zero pieces at the edges (support is only defined modulo null
    /// sets) and degenerate intervals.
    fn pruned(mut self) -> Self {
        // degenerate intervals
        let mut i = 0;
        while i < self.pieces.len() {
            if self.breakpoints[i + 1] - self.breakpoints[i] <= MERGE_TOL {
                self.breakpoints.remove(i + 1);
                self.pieces.remove(i);
            } else {
                i += 1;
            }
        }
        while self.pieces.first().is_some_and(|p| p.is_zero()) {
            self.pieces.remove(0);
            self.breakpoints.remove(0);
        }
        while self.pieces.last().is_some_and(|p| p.is_zero()) {
            self.pieces.pop();
            self.breakpoints.pop();
        }
        if self.pieces.is_empty() {
            self.breakpoints.clear();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Support interval `[a, b]`, `None` for the zero function.
    pub fn support(&self) -> Option<(f64, f64)> {
        if self.is_zero() {
            None
        } else {
            Some((self.breakpoints[0], *self.breakpoints.last().unwrap()))
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Largest piece degree.
    pub fn degree(&self) -> usize {
        self.pieces.iter().map(|p| p.degree()).max().unwrap_or(0)
    }

    /// Pointwise evaluation; intervals are half-open `[b_i, b_{i+1})`.
    pub fn eval(&self, t: f64) -> C64 {
        let zero = Complex64::new(0.0, 0.0);
        if self.is_zero() {
            return zero;
        }
        if t < self.breakpoints[0] || t >= *self.breakpoints.last().unwrap() {
            return zero;
        }
        let idx = match self
            .breakpoints
            .binary_search_by(|b| b.partial_cmp(&t).unwrap())
        {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let idx = idx.min(self.pieces.len() - 1);
        self.pieces[idx].eval(t)
    }

    /// `∫ f`, exact per piece.
    pub fn integral(&self) -> C64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, p) in self.pieces.iter().enumerate() {
            acc += p.definite_integral(self.breakpoints[i], self.breakpoints[i + 1]);
        }
        acc
    }

    /// `‖f‖²_{L²(ℝ)}`.
    pub fn norm_sq(&self) -> f64 {
        inner_product(self, self, 0).re
    }

    /// Total jump mass `Σ |f(b+) - f(b-)|` over all breakpoints.
    pub fn jump_total(&self) -> f64 {
        let mut total = 0.0;
        for (i, &b) in self.breakpoints.iter().enumerate() {
            let left = if i == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                self.pieces[i - 1].eval(b)
            };
            let right = if i == self.pieces.len() {
                Complex64::new(0.0, 0.0)
            } else {
                self.pieces[i].eval(b)
            };
            total += (right - left).norm();
        }
        total
    }

    /// Exact distributional-free derivative: differentiates each piece,
    /// keeping the same breakpoints. Jump discontinuities are *not*
    /// represented; use [`PiecewiseFn::jump_total`] to inspect them.
    pub fn derivative_pieces(&self) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let mut out = Vec::with_capacity(p.coeffs.len().saturating_sub(1));
                for (i, &c) in p.coeffs.iter().enumerate().skip(1) {
                    out.push(c * i as f64);
                }
                Poly { coeffs: out }.normalized()
            })
            .collect();
        Self::from_parts(self.breakpoints.clone(), pieces)
    }

    /// Multiplies by a polynomial in `t` (global coordinates).
    pub(crate) fn mul_poly(&self, q: &Poly) -> Result<Self> {
        let pieces: Vec<Poly> = self.pieces.iter().map(|p| p.mul(q)).collect();
        for p in &pieces {
            if p.degree() > DEGREE_CAP {
                return Err(Error::DegreeCap {
                    degree: p.degree(),
                    cap: DEGREE_CAP,
                });
            }
        }
        Ok(Self::from_parts(self.breakpoints.clone(), pieces))
    }

    pub(crate) fn piece(&self, i: usize) -> (&Poly, f64, f64) {
        (
            &self.pieces[i],
            self.breakpoints[i],
            self.breakpoints[i + 1],
        )
    }
}

// ---------------------------------------------------------------------------
// Named generators
// ---------------------------------------------------------------------------

/// Indicator of `[0, 1]`.
pub fn boxcar() -> PiecewiseFn {
    PiecewiseFn::new_real(vec![0.0, 1.0], vec![vec![1.0]]).unwrap()
}

/// Triangle on `[0, 2]`: the convolution of two unit indicators.
pub fn hat() -> PiecewiseFn {
    PiecewiseFn::new_real(vec![0.0, 1.0, 2.0], vec![vec![0.0, 1.0], vec![2.0, -1.0]]).unwrap()
}

/// `hat(2t) - hat(2t - 2)`: a mean-zero bump pair on `[0, 2]`.
pub fn psi1() -> PiecewiseFn {
    let up = shift_dilate(&hat(), 2.0, 0.0);
    let down = shift_dilate(&hat(), 2.0, 2.0);
    combine(
        &[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
        &[up, down],
    )
    .unwrap()
}

/// Cardinal B-spline of order `m` (`m`-fold convolution of indicators),
/// supported on `[0, m]`. `bspline(1)` is the indicator, `bspline(2)` the
/// triangle.
pub fn bspline(m: u32) -> Result<PiecewiseFn> {
    if m == 0 || m > 8 {
        return Err(Error::InvalidArgument(format!(
            "spline order must be in 1..=8, got {m}"
        )));
    }
    let mut f = boxcar();
    for _ in 1..m {
        f = convolve(&f, &boxcar())?;
    }
    Ok(f)
}

/// Builds a builtin generator by name. `order` is only consulted for
/// `bspline`.
pub fn builtin(name: &str, order: Option<u32>) -> Result<PiecewiseFn> {
    match name {
        "box" => Ok(boxcar()),
        "hat" => Ok(hat()),
        "psi1" => Ok(psi1()),
        "bspline" => bspline(order.ok_or_else(|| {
            Error::InvalidSpec("bspline requires an order, e.g. bspline:3".into())
        })?),
        other => Err(Error::InvalidSpec(format!("unknown builtin '{other}'"))),
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// `t ↦ f(scale·t - shift)`, exact coefficient transform. `scale > 0`.
pub fn shift_dilate(f: &PiecewiseFn, scale: f64, shift: f64) -> PiecewiseFn {
    assert!(scale > 0.0, "scale must be positive");
    if f.is_zero() {
        return PiecewiseFn::zero();
    }
    let breakpoints = f
        .breakpoints
        .iter()
        .map(|b| (b + shift) / scale)
        .collect::<Vec<_>>();
    let pieces = f
        .pieces
        .iter()
        .map(|p| p.compose_linear(-shift, scale))
        .collect();
    PiecewiseFn::from_parts(breakpoints, pieces)
}

/// Exact linear combination `Σ c_i f_i` on the merged breakpoint grid.
pub fn combine(coeffs: &[C64], fns: &[PiecewiseFn]) -> Result<PiecewiseFn> {
    if coeffs.len() != fns.len() {
        return Err(Error::InvalidArgument(format!(
            "combine: {} coefficients for {} functions",
            coeffs.len(),
            fns.len()
        )));
    }
    let mut grid: Vec<f64> = fns
        .iter()
        .flat_map(|f| f.breakpoints.iter().copied())
        .collect();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup_by(|a, b| (*a - *b).abs() <= MERGE_TOL);
    if grid.len() < 2 {
        return Ok(PiecewiseFn::zero());
    }
    let mut pieces = Vec::with_capacity(grid.len() - 1);
    for w in grid.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let mut acc = Poly::zero();
        for (c, f) in coeffs.iter().zip(fns) {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            if let Some(p) = piece_at(f, mid) {
                acc = acc.add(&p.scale(*c));
            }
        }
        pieces.push(acc);
    }
    Ok(PiecewiseFn::from_parts(grid, pieces))
}

fn piece_at(f: &PiecewiseFn, t: f64) -> Option<&Poly> {
    if f.is_zero() || t < f.breakpoints[0] || t > *f.breakpoints.last().unwrap() {
        return None;
    }
    let idx = match f
        .breakpoints
        .binary_search_by(|b| b.partial_cmp(&t).unwrap())
    {
        Ok(i) => i,
        Err(i) => i.saturating_sub(1),
    };
    f.pieces.get(idx.min(f.pieces.len() - 1))
}

/// `∫ f(t)·conj(g(t + k)) dt`, exact on the overlap of supports.
/// Returns zero for disjoint supports.
pub fn inner_product(f: &PiecewiseFn, g: &PiecewiseFn, k: i64) -> C64 {
    let zero = Complex64::new(0.0, 0.0);
    let (Some((fa, fb)), Some((ga, gb))) = (f.support(), g.support()) else {
        return zero;
    };
    // g(t + k): support shifts left by k.
    let (ga, gb) = (ga - k as f64, gb - k as f64);
    let lo = fa.max(ga);
    let hi = fb.min(gb);
    if hi - lo <= MERGE_TOL {
        return zero;
    }
    let mut grid: Vec<f64> = f
        .breakpoints
        .iter()
        .copied()
        .chain(g.breakpoints.iter().map(|b| b - k as f64))
        .filter(|t| *t > lo - MERGE_TOL && *t < hi + MERGE_TOL)
        .collect();
    grid.push(lo);
    grid.push(hi);
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup_by(|a, b| (*a - *b).abs() <= MERGE_TOL);
    let mut acc = zero;
    for w in grid.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let half = 0.5 * (w[1] - w[0]);
        let (Some(pf), Some(pg)) = (piece_at(f, mid), piece_at_shifted(g, mid, k)) else {
            continue;
        };
        // Work in coordinates centered on the window: the degree-2D
        // antiderivative is then evaluated at |u| ≤ half instead of at
        // global t, which would shed ~t^(2D+1)·ε of precision far from
        // the origin.
        let pf_local = pf.compose_linear(mid, 1.0);
        let pg_local = pg.compose_linear(mid + k as f64, 1.0).conj();
        acc += pf_local.mul(&pg_local).definite_integral(-half, half);
    }
    acc
}

fn piece_at_shifted(g: &PiecewiseFn, t: f64, k: i64) -> Option<&Poly> {
    piece_at(g, t + k as f64)
}

/// Exact piecewise-polynomial convolution `(f*g)(t) = ∫ f(s) g(t-s) ds`.
///
/// The result's breakpoints are the pairwise sums of the operands'
/// breakpoints; on each interval the contribution of a piece pair is the
/// bivariate antiderivative evaluated between the active limits, which are
/// affine in `t` there.
pub fn convolve(f: &PiecewiseFn, g: &PiecewiseFn) -> Result<PiecewiseFn> {
    if f.is_zero() || g.is_zero() {
        return Ok(PiecewiseFn::zero());
    }
    let out_degree = f.degree() + g.degree() + 1;
    if out_degree > DEGREE_CAP {
        return Err(Error::DegreeCap {
            degree: out_degree,
            cap: DEGREE_CAP,
        });
    }
    let mut grid: Vec<f64> = Vec::new();
    for &a in &f.breakpoints {
        for &c in &g.breakpoints {
            grid.push(a + c);
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup_by(|a, b| (*a - *b).abs() <= MERGE_TOL);

    // Per piece pair: antiderivative in s of p(s)·q(t-s), as polynomials in t
    // indexed by the power of s.
    struct PairData {
        a1: f64,
        b1: f64,
        c2: f64,
        d2: f64,
        anti: Vec<Poly>, // anti[m] multiplies s^m
    }
    let mut pairs = Vec::new();
    for i in 0..f.pieces.len() {
        let (p, a1, b1) = f.piece(i);
        if p.is_zero() {
            continue;
        }
        for j in 0..g.pieces.len() {
            let (q, c2, d2) = g.piece(j);
            if q.is_zero() {
                continue;
            }
            // q(t - s) = Σ_j q_j Σ_m C(j,m) t^{j-m} (-s)^m
            let mut integrand: Vec<Poly> = vec![Poly::zero(); q.coeffs.len()];
            for (jj, &qc) in q.coeffs.iter().enumerate() {
                let mut binom = 1.0f64;
                for m in 0..=jj {
                    if m > 0 {
                        binom *= (jj - m + 1) as f64 / m as f64;
                    }
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    let mut mono = vec![Complex64::new(0.0, 0.0); jj - m + 1];
                    mono[jj - m] = qc * binom * sign;
                    integrand[m] = integrand[m].add(&Poly { coeffs: mono }.normalized());
                }
            }
            // multiply by p(s): shifts s-powers
            let mut full: Vec<Poly> = vec![Poly::zero(); p.coeffs.len() + integrand.len()];
            for (i_pow, &pc) in p.coeffs.iter().enumerate() {
                if pc.norm_sqr() == 0.0 {
                    continue;
                }
                for (m, tp) in integrand.iter().enumerate() {
                    full[i_pow + m] = full[i_pow + m].add(&tp.scale(pc));
                }
            }
            // antiderivative in s
            let mut anti: Vec<Poly> = vec![Poly::zero(); full.len() + 1];
            for (m, tp) in full.iter().enumerate() {
                anti[m + 1] = tp.scale(Complex64::new(1.0 / (m + 1) as f64, 0.0));
            }
            pairs.push(PairData {
                a1,
                b1,
                c2,
                d2,
                anti,
            });
        }
    }

    let eval_anti_at = |anti: &[Poly], limit: &Poly| -> Poly {
        // Horner in the affine limit polynomial.
        let mut acc = Poly::zero();
        for tp in anti.iter().rev() {
            acc = acc.mul(limit).add(tp);
        }
        acc
    };

    let mut pieces = Vec::with_capacity(grid.len().saturating_sub(1));
    for w in grid.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let mut acc = Poly::zero();
        for pd in &pairs {
            if mid <= pd.a1 + pd.c2 || mid >= pd.b1 + pd.d2 {
                continue;
            }
            // limits: lo(t) = max(a1, t - d2), hi(t) = min(b1, t - c2);
            // the active branch is fixed within this interval.
            let lo = if pd.a1 >= mid - pd.d2 {
                Poly::constant(Complex64::new(pd.a1, 0.0))
            } else {
                Poly {
                    coeffs: vec![Complex64::new(-pd.d2, 0.0), Complex64::new(1.0, 0.0)],
                }
            };
            let hi = if pd.b1 <= mid - pd.c2 {
                Poly::constant(Complex64::new(pd.b1, 0.0))
            } else {
                Poly {
                    coeffs: vec![Complex64::new(-pd.c2, 0.0), Complex64::new(1.0, 0.0)],
                }
            };
            let contrib = eval_anti_at(&pd.anti, &hi)
                .add(&eval_anti_at(&pd.anti, &lo).scale(Complex64::new(-1.0, 0.0)));
            acc = acc.add(&contrib);
        }
        pieces.push(acc);
    }
    Ok(PiecewiseFn::from_parts(grid, pieces))
}

// ---------------------------------------------------------------------------
// Fourier transform
// ---------------------------------------------------------------------------

/// Closed-form evaluation of `f̂(ξ) = ∫ f(t) e^{-2πitξ} dt`.
///
/// Each piece is centered at its midpoint; when `π|ξ|·len` is small the
/// oscillatory factor is expanded as a power series (the 1/ξ^m terms of the
/// integration-by-parts form cancel catastrophically there), otherwise the
/// integration-by-parts recurrence is used.
pub fn fourier(f: &PiecewiseFn, xi: f64) -> FourierValue {
    let mut value = Complex64::new(0.0, 0.0);
    let c = Complex64::new(0.0, -TAU * xi);
    for i in 0..f.pieces.len() {
        let (p, a, b) = f.piece(i);
        if p.is_zero() {
            continue;
        }
        let t0 = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let centered = p.compose_linear(t0, 1.0);
        let z = std::f64::consts::PI * xi.abs() * (b - a);
        let inner = if z < 4.0 {
            series_piece_integral(&centered, c, h)
        } else {
            ibp_piece_integral(&centered, c, h)
        };
        value += (c * t0).exp() * inner;
    }
    FourierValue { xi, value }
}

/// `∫_{-h}^{h} p(u) e^{cu} du` via the exponential power series.
fn series_piece_integral(p: &Poly, c: C64, h: f64) -> C64 {
    // moments M_m = ∫ u^m p(u) du over [-h, h]
    let moment = |m: usize| -> C64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &pc) in p.coeffs.iter().enumerate() {
            let pow = m + i + 1;
            let val = (h.powi(pow as i32) - (-h).powi(pow as i32)) / pow as f64;
            acc += pc * val;
        }
        acc
    };
    let mut acc = Complex64::new(0.0, 0.0);
    let mut factor = Complex64::new(1.0, 0.0); // c^m / m!
    let mut small_run = 0;
    for m in 0..120 {
        if m > 0 {
            factor *= c / m as f64;
        }
        let term = factor * moment(m);
        acc += term;
        if term.norm() <= 1e-18 * (1.0 + acc.norm()) {
            small_run += 1;
            if small_run >= 3 {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    acc
}

/// `∫_{-h}^{h} p(u) e^{cu} du` by the integration-by-parts recurrence
/// `J_i = [u^i e^{cu}/c] - (i/c)·J_{i-1}`.
fn ibp_piece_integral(p: &Poly, c: C64, h: f64) -> C64 {
    let ep = (c * h).exp();
    let em = (-c * h).exp();
    let mut j_prev = (ep - em) / c;
    let mut acc = p
        .coeffs
        .first()
        .map_or(Complex64::new(0.0, 0.0), |&c0| c0 * j_prev);
    let mut hp = 1.0; // h^i
    for i in 1..p.coeffs.len() {
        hp *= h;
        let mhp = if i % 2 == 0 { hp } else { -hp };
        let boundary = (hp * ep - mhp * em) / c;
        let j = boundary - j_prev * (i as f64) / c;
        if let Some(&pc) = p.coeffs.get(i) {
            acc += pc * j;
        }
        j_prev = j;
    }
    acc
}

/// `d`-th derivative of the transform: `f̂^{(d)}(ξ)`, computed exactly as the
/// transform of `(-2πit)^d f(t)`.
pub fn fourier_derivative(f: &PiecewiseFn, xi: f64, d: u32) -> Result<FourierValue> {
    if d == 0 {
        return Ok(fourier(f, xi));
    }
    let mut mono = vec![Complex64::new(0.0, 0.0); d as usize + 1];
    mono[d as usize] = Complex64::new(0.0, -TAU).powu(d);
    let weighted = f.mul_poly(&Poly { coeffs: mono }.normalized())?;
    Ok(fourier(&weighted, xi))
}

// ---------------------------------------------------------------------------
// JSON generator specification
// ---------------------------------------------------------------------------

/// On-disk generator description: either an explicit breakpoints/pieces
/// table or a named builtin.
///
/// ```json
/// {"breakpoints": [0.0, 1.0], "pieces": [[1.0]]}
/// {"builtin": "bspline", "order": 3}
/// ```
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum GeneratorSpec {
    Builtin {
        builtin: String,
        #[serde(default)]
        order: Option<u32>,
    },
    Explicit {
        breakpoints: Vec<f64>,
        pieces: Vec<Vec<f64>>,
    },
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<PiecewiseFn> {
        match self {
            GeneratorSpec::Builtin {
                builtin: name,
                order,
            } => builtin(name, *order),
            GeneratorSpec::Explicit {
                breakpoints,
                pieces,
            } => PiecewiseFn::new_real(breakpoints.clone(), pieces.clone()),
        }
    }
}

/// Parses a generator from its JSON description.
pub fn from_spec_json(text: &str) -> Result<PiecewiseFn> {
    let spec: GeneratorSpec =
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    spec.build()
}

// ---------------------------------------------------------------------------
