//! Algebra of 1-periodic trigonometric (Laurent) polynomials.
//!
//! A [`TrigPoly`] is a finite map `k ↦ c_k` representing
//! `p(t) = Σ c_k e^{2πikt}`. Arithmetic is exact coefficient arithmetic;
//! `pair` is the exact `L²(𝕋)` pairing; zeros on the torus are located with
//! multiplicities through the algebraic polynomial in `z = e^{2πit}`.

use crate::error::Error;
use crate::{Result, C64};
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;

const TAU: f64 = std::f64::consts::TAU;

/// Maps to `[0, 1)`; `rem_euclid` alone can round `-ε` up to exactly 1.0.
fn wrap_unit(t: f64) -> f64 {
    let t = t.rem_euclid(1.0);
    if t >= 1.0 {
        0.0
    } else {
        t
    }
}

/// Finite Laurent coefficient map `k ↦ c_k`; exact zeros are not stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPoly {
    coeffs: BTreeMap<i64, C64>,
}

/// A zero of a trigonometric polynomial on the torus, with multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootOnTorus {
    /// Location in `[0, 1)`.
    pub location: f64,
    pub multiplicity: u32,
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C64) -> Self {
        Self::from_coeffs([(0, c)])
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// `e^{2πikt}`.
    pub fn exponential(k: i64) -> Self {
        Self::from_coeffs([(k, Complex64::new(1.0, 0.0))])
    }

    /// `sin²π(t - x0)` as a Laurent polynomial:
    /// `1/2 - e^{-2πix0}/4·e_1 - e^{2πix0}/4·e_{-1}`.
    pub fn sin_sq_at(x0: f64) -> Self {
        let w = Complex64::from_polar(0.25, -TAU * x0);
        Self::from_coeffs([(0, Complex64::new(0.5, 0.0)), (1, -w), (-1, -w.conj())])
    }

    pub fn from_coeffs<I: IntoIterator<Item = (i64, C64)>>(iter: I) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, c) in iter {
            if c.norm_sqr() != 0.0 {
                coeffs.insert(k, c);
            }
        }
        Self { coeffs }
    }

    pub fn from_real_coeffs<I: IntoIterator<Item = (i64, f64)>>(iter: I) -> Self {
        Self::from_coeffs(iter.into_iter().map(|(k, c)| (k, Complex64::new(c, 0.0))))
    }

    pub fn coeff(&self, k: i64) -> C64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn min_freq(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_freq(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Largest |frequency| present.
    pub fn degree(&self) -> i64 {
        self.coeffs.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.coeffs.clone();
        for (&k, &c) in &other.coeffs {
            let e = out.entry(k).or_default();
            *e += c;
            if e.norm_sqr() == 0.0 {
                out.remove(&k);
            }
        }
        Self { coeffs: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_coeffs(self.coeffs().map(|(k, c)| (k, c * s)))
    }

    /// Exact coefficient convolution.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<i64, C64> = BTreeMap::new();
        for (&k1, &c1) in &self.coeffs {
            for (&k2, &c2) in &other.coeffs {
                *out.entry(k1 + k2).or_default() += c1 * c2;
            }
        }
        out.retain(|_, c| c.norm_sqr() != 0.0);
        Self { coeffs: out }
    }

    /// `conj(p(t))` as a Laurent polynomial: `k ↦ conj(c_{-k})`.
    pub fn conj_reflection(&self) -> Self {
        Self::from_coeffs(self.coeffs().map(|(k, c)| (-k, c.conj())))
    }

    /// `p'(t)`: multiplies coefficient `k` by `2πik`.
    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs()
                .map(|(k, c)| (k, c * Complex64::new(0.0, TAU * k as f64))),
        )
    }

    pub fn eval(&self, t: f64) -> C64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&k, &c) in &self.coeffs {
            let angle = TAU * (k as f64 * t).rem_euclid(1.0);
            acc += c * Complex64::from_polar(1.0, angle);
        }
        acc
    }

    /// `p^{(d)}(t)` without materializing the derivative polynomial.
    pub fn eval_derivative(&self, d: u32, t: f64) -> C64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&k, &c) in &self.coeffs {
            let factor = Complex64::new(0.0, TAU * k as f64).powu(d);
            let angle = TAU * (k as f64 * t).rem_euclid(1.0);
            acc += c * factor * Complex64::from_polar(1.0, angle);
        }
        acc
    }

    /// `Σ |c_k|·(2π|k|)^d`, the coefficient norm of the d-th derivative.
    pub fn derivative_l1(&self, d: u32) -> f64 {
        self.coeffs()
            .map(|(k, c)| c.norm() * (TAU * k.abs() as f64).powi(d as i32))
            .sum()
    }

    /// `c_{-k} = conj(c_k)` within `tol·(1 + ‖p‖₁)`.
    pub fn is_real_valued(&self, tol: f64) -> bool {
        let scale = 1.0 + self.l1_norm();
        self.coeffs()
            .all(|(k, c)| (self.coeff(-k).conj() - c).norm() <= tol * scale)
    }

    /// Locations and values of the global extrema of a real-valued
    /// polynomial on `[0, 1)`: dense grid scan plus one-dimensional Newton
    /// polish on the derivative.
    pub fn extrema(&self) -> Extrema {
        let n = (16 * self.degree().max(16) as usize).clamp(512, 1 << 16);
        let mut best_min = (0.0f64, f64::INFINITY);
        let mut best_max = (0.0f64, f64::NEG_INFINITY);
        for i in 0..n {
            let t = i as f64 / n as f64;
            let v = self.eval(t).re;
            if v < best_min.1 {
                best_min = (t, v);
            }
            if v > best_max.1 {
                best_max = (t, v);
            }
        }
        let polish = |(t0, v0): (f64, f64), want_min: bool| -> (f64, f64) {
            let mut t = t0;
            for _ in 0..40 {
                let d1 = self.eval_derivative(1, t).re;
                let d2 = self.eval_derivative(2, t).re;
                if d2.abs() < 1e-300 {
                    break;
                }
                let step = d1 / d2;
                if !step.is_finite() || step.abs() > 1.0 / n as f64 {
                    break;
                }
                t -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let t = wrap_unit(t);
            let v = self.eval(t).re;
            let better = if want_min { v < v0 } else { v > v0 };
            if better {
                (t, v)
            } else {
                (t0, v0)
            }
        };
        Extrema {
            min: polish(best_min, true),
            max: polish(best_max, false),
        }
    }

    /// Exact `∫₀¹ p(t)·conj(q(t)) dt = Σ_k p_k·conj(q_k)`.
    pub fn pair(&self, other: &Self) -> C64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&k, &c) in &self.coeffs {
            if let Some(&d) = other.coeffs.get(&k) {
                acc += c * d.conj();
            }
        }
        acc
    }

    /// All zeros of a real-valued polynomial in `[0, 1)` with multiplicities.
    ///
    /// Zeros are located as roots of the algebraic polynomial
    /// `z^{-k_min} p(z)` restricted to the unit circle, clustered, and their
    /// multiplicities determined by successive derivatives at the clustered
    /// location: the multiplicity is the first `d` with
    /// `|p^{(d)}(x₀)| > tol·‖p^{(d)}‖₁`. Locations are polished by Newton
    /// iteration on `p^{(m-1)}`.
    pub fn roots_on_torus(&self, tol: f64) -> Result<Vec<RootOnTorus>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !self.is_real_valued(1e-9) {
            return Err(Error::InvalidArgument(
                "roots_on_torus expects a real-valued trigonometric polynomial".into(),
            ));
        }
        let k_min = self.min_freq().unwrap();
        let k_max = self.max_freq().unwrap();
        let mut alg: Vec<C64> = vec![Complex64::new(0.0, 0.0); (k_max - k_min + 1) as usize];
        for (k, c) in self.coeffs() {
            alg[(k - k_min) as usize] = c;
        }
        // strip exact zeros at the low end (roots at z = 0 are off-circle)
        while alg.first().is_some_and(|c| c.norm_sqr() == 0.0) {
            alg.remove(0);
        }
        if alg.len() <= 1 {
            return Ok(Vec::new());
        }
        let roots = aberth_roots(&alg)?;

        // keep near-circle roots and cluster them by angle
        let mut angles: Vec<f64> = roots
            .iter()
            .filter(|z| (z.norm() - 1.0).abs() <= 1e-2)
            .map(|z| wrap_unit(z.arg() / TAU))
            .collect();
        if angles.is_empty() {
            return Ok(Vec::new());
        }
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let gap = 2e-2;
        let mut clusters: Vec<Vec<f64>> = vec![vec![angles[0]]];
        for &a in &angles[1..] {
            if a - clusters.last().unwrap().iter().next_back().unwrap() <= gap {
                clusters.last_mut().unwrap().push(a);
            } else {
                clusters.push(vec![a]);
            }
        }
        // wraparound: merge the last cluster into the first when they touch
        if clusters.len() > 1 {
            let first = clusters[0][0];
            let last = *clusters.last().unwrap().iter().next_back().unwrap();
            if first + 1.0 - last <= gap {
                let tail = clusters.pop().unwrap();
                clusters[0].extend(tail.into_iter().map(|a| a - 1.0));
            }
        }

        let mut out = Vec::new();
        for cluster in clusters {
            // circular mean
            let mean_vec: C64 = cluster
                .iter()
                .map(|&a| Complex64::from_polar(1.0, TAU * a))
                .sum();
            let x0 = wrap_unit(mean_vec.arg() / TAU);
            let Some(mut m) = self.multiplicity_at(x0, tol) else {
                continue; // cluster was an off-circle artifact
            };
            // The multiplicity seen at the unpolished location can be too
            // low; alternate polishing and recounting until stable.
            let mut x0 = x0;
            for _ in 0..4 {
                x0 = self.polish_root(x0, m);
                match self.multiplicity_at(x0, tol) {
                    Some(m2) if m2 != m => m = m2,
                    _ => break,
                }
            }
            let residual = self.eval(x0).norm();
            let budget = tol.max(1e-9) * (1.0 + self.l1_norm());
            if residual > budget {
                return Err(Error::RootConditioning(format!(
                    "residual {residual:.3e} at t = {x0} exceeds budget {budget:.3e}"
                )));
            }
            out.push(RootOnTorus {
                location: x0,
                multiplicity: m,
            });
        }
        out.sort_by(|a, b| a.location.partial_cmp(&b.location).unwrap());
        out.dedup_by(|a, b| {
            if (a.location - b.location).abs() < 1e-9 {
                b.multiplicity = b.multiplicity.max(a.multiplicity);
                true
            } else {
                false
            }
        });
        Ok(out)
    }

    /// First derivative order with a non-negligible value at `t`, or `None`
    /// if even the value itself is non-negligible (multiplicity 0 means "not
    /// a zero"; `None` means no order up to the frequency span was found).
    fn multiplicity_at(&self, t: f64, tol: f64) -> Option<u32> {
        let span = 2 * (self.degree() as u32) + 2;
        for d in 0..=span {
            let scale = self.derivative_l1(d);
            if scale == 0.0 {
                continue;
            }
            if self.eval_derivative(d, t).norm() > tol * scale {
                return if d == 0 { None } else { Some(d) };
            }
        }
        None
    }

    /// Newton on `p^{(m-1)}` (which has a simple zero at a multiplicity-`m`
    /// root of `p`).
    fn polish_root(&self, x0: f64, m: u32) -> f64 {
        let mut t = x0;
        for _ in 0..60 {
            let g = self.eval_derivative(m - 1, t).re;
            let dg = self.eval_derivative(m, t).re;
            if dg.abs() < 1e-300 {
                break;
            }
            let step = g / dg;
            if !step.is_finite() || step.abs() > 0.05 {
                break;
            }
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        wrap_unit(t)
    }

    /// Divides out `sin^m π(t - x0)` (m even) by exact Laurent division,
    /// failing if the remainder at any stage exceeds `tol·‖p‖₁`.
    pub fn divide_out(&self, x0: f64, m: u32, tol: f64) -> Result<TrigPoly> {
        if m == 0 || !m.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "divide_out needs a positive even order, got {m}"
            )));
        }
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let k_min = self.min_freq().unwrap();
        let k_max = self.max_freq().unwrap();
        if (k_max - k_min) < m as i64 {
            return Err(Error::NonzeroRemainder {
                location: x0,
                order: m,
                residual: self.l1_norm(),
            });
        }
        let mut alg: Vec<C64> = vec![Complex64::new(0.0, 0.0); (k_max - k_min + 1) as usize];
        for (k, c) in self.coeffs() {
            alg[(k - k_min) as usize] = c;
        }
        let z0 = Complex64::from_polar(1.0, TAU * x0);
        let budget = tol * (1.0 + self.l1_norm());
        // p(z)/(z - z0)^m by synthetic division, remainder checked each pass
        for _ in 0..m {
            let mut quotient = vec![Complex64::new(0.0, 0.0); alg.len() - 1];
            let mut carry = Complex64::new(0.0, 0.0);
            for j in (0..alg.len()).rev() {
                if j == 0 {
                    let remainder = alg[0] + z0 * carry;
                    if remainder.norm() > budget {
                        return Err(Error::NonzeroRemainder {
                            location: x0,
                            order: m,
                            residual: remainder.norm(),
                        });
                    }
                } else {
                    let b = alg[j] + z0 * carry;
                    quotient[j - 1] = b;
                    carry = b;
                }
            }
            alg = quotient;
        }
        // sin²π(t-x0) = -e^{-2πix0}/4 · z^{-1} (z - z0)², so each squared
        // sine contributes the scalar (-4 e^{2πix0}) and one power of z.
        let gamma = (Complex64::from_polar(4.0, TAU * x0) * Complex64::new(-1.0, 0.0)).powu(m / 2);
        let offset = k_min + (m / 2) as i64;
        Ok(TrigPoly::from_coeffs(
            alg.iter()
                .enumerate()
                .map(|(j, &c)| (offset + j as i64, c * gamma))
                .filter(|(_, c)| c.norm() > 0.0),
        ))
    }

    /// Drops coefficients with `|c_k| <= tol` (cleanup after float division).
    pub fn chop(&self, tol: f64) -> Self {
        Self::from_coeffs(self.coeffs().filter(|(_, c)| c.norm() > tol))
    }
}

/// Global extrema of a real-valued trigonometric polynomial: `(location, value)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    pub min: (f64, f64),
    pub max: (f64, f64),
}

// ---------------------------------------------------------------------------
// Aberth–Ehrlich simultaneous root iteration for the algebraic polynomial.
// ---------------------------------------------------------------------------

fn horner(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn aberth_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    if lead.norm() == 0.0 {
        return Err(Error::Internal("leading coefficient vanished".into()));
    }
    // initial ring: geometric-mean radius, angles offset to break symmetry
    let tail = coeffs[0].norm().max(1e-300);
    let r0 = (tail / lead.norm()).powf(1.0 / n as f64).clamp(0.25, 4.0);
    let mut z: Vec<C64> = (0..n)
        .map(|i| Complex64::from_polar(r0, TAU * (i as f64 + 0.3764) / n as f64 + 0.2711))
        .collect();
    for _ in 0..400 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = if dp.norm() == 0.0 {
                Complex64::new(1e-8, 1e-8)
            } else {
                p / dp
            };
            let mut s = Complex64::new(0.0, 0.0);
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    let d = z[i] - zj;
                    if d.norm() > 1e-290 {
                        s += Complex64::new(1.0, 0.0) / d;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let mut step = if denom.norm() < 1e-290 { w } else { w / denom };
            if step.norm() > 1.0 {
                step = step / step.norm();
            }
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 {
            break;
        }
    }
    Ok(z)
}

// ---------------------------------------------------------------------------
// JSON representation: {"coeffs": {"k": [re, im], ...}}
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TrigPolyRepr {
    coeffs: BTreeMap<String, [f64; 2]>,
}

impl Serialize for TrigPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = TrigPolyRepr {
            coeffs: self
                .coeffs()
                .map(|(k, c)| (k.to_string(), [c.re, c.im]))
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TrigPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = TrigPolyRepr::deserialize(deserializer)?;
        let mut coeffs = BTreeMap::new();
        for (k, [re, im]) in repr.coeffs {
            let key: i64 = k
                .parse()
                .map_err(|_| D::Error::custom(format!("non-integer frequency key '{k}'")))?;
            let c = Complex64::new(re, im);
            if c.norm_sqr() != 0.0 {
                coeffs.insert(key, c);
            }
        }
        Ok(TrigPoly { coeffs })
    }
}

impl TrigPoly {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trig polynomial serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn phi_hat_fixture() -> TrigPoly {
        TrigPoly::from_real_coeffs([(0, 2.0 / 3.0), (1, 1.0 / 6.0), (-1, 1.0 / 6.0)])
    }

    fn phi_psi_fixture() -> TrigPoly {
        TrigPoly::from_real_coeffs([(0, 2.0 / 3.0), (1, -1.0 / 3.0), (-1, -1.0 / 3.0)])
    }

    #[test]
    fn eval_fixtures() {
        let one = TrigPoly::one();
        for &t in &[0.0, 0.3, 0.99] {
            assert_abs_diff_eq!(one.eval(t).re, 1.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(phi_hat_fixture().eval(0.0).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(phi_psi_fixture().eval(0.0).re, 0.0, epsilon = 1e-15);
        // periodicity
        let p = phi_hat_fixture();
        assert!((p.eval(0.37) - p.eval(1.37)).norm() < 1e-12);
    }

    #[test]
    fn mul_basics() {
        let a = TrigPoly::exponential(1);
        let b = TrigPoly::exponential(-1);
        assert_eq!(a.mul(&b), TrigPoly::one());

        let sin_sq = TrigPoly::sin_sq_at(0.0);
        let doubled = sin_sq.mul(&TrigPoly::constant(Complex64::new(2.0, 0.0)));
        assert_abs_diff_eq!(doubled.coeff(0).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(doubled.coeff(1).re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(doubled.coeff(-1).re, -0.5, epsilon = 1e-15);

        assert!(a.mul(&TrigPoly::zero()).is_zero());
    }

    #[test]
    fn pairing() {
        for n in -3..=3i64 {
            for m in -3..=3i64 {
                let v = TrigPoly::exponential(n).pair(&TrigPoly::exponential(m));
                let expect = if n == m { 1.0 } else { 0.0 };
                assert_eq!(v, Complex64::new(expect, 0.0));
            }
        }
        assert_abs_diff_eq!(
            phi_hat_fixture().pair(&TrigPoly::one()).re,
            2.0 / 3.0,
            epsilon = 1e-15
        );
        // ‖h‖²_{L²(𝕋,Φ)} = pair(h, h·Φ) against direct quadrature
        let h = TrigPoly::one();
        let phi = phi_hat_fixture();
        let exact = h.pair(&h.mul(&phi)).re;
        let n = 20_000;
        let quad: f64 = (0..n)
            .map(|i| {
                let t = (i as f64 + 0.5) / n as f64;
                (h.eval(t).norm_sqr()) * phi.eval(t).re / n as f64
            })
            .sum();
        assert_abs_diff_eq!(exact, quad, epsilon = 1e-9);
        assert_abs_diff_eq!(exact, 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn sin_sq_matches_closed_form() {
        for &x0 in &[0.0, 0.25, 0.5, 0.8] {
            let p = TrigPoly::sin_sq_at(x0);
            for i in 0..20 {
                let t = i as f64 / 20.0;
                let expect = (std::f64::consts::PI * (t - x0)).sin().powi(2);
                assert_abs_diff_eq!(p.eval(t).re, expect, epsilon = 1e-13);
                assert!(p.eval(t).im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn roots_of_fixtures() {
        let roots = phi_psi_fixture().roots_on_torus(1e-8).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].location.min(1.0 - roots[0].location) < 1e-10);
        assert_eq!(roots[0].multiplicity, 2);

        assert!(phi_hat_fixture().roots_on_torus(1e-8).unwrap().is_empty());

        // sin⁴π(t - 1/2): multiplicity 4 at 0.5
        let s2 = TrigPoly::sin_sq_at(0.5);
        let s4 = s2.mul(&s2);
        let roots = s4.roots_on_torus(1e-8).unwrap();
        assert_eq!(roots.len(), 1);
        assert_abs_diff_eq!(roots[0].location, 0.5, epsilon = 1e-9);
        assert_eq!(roots[0].multiplicity, 4);
    }

    #[test]
    fn roots_rejects_degenerate_inputs() {
        assert!(matches!(
            TrigPoly::zero().roots_on_torus(1e-8),
            Err(Error::ZeroPolynomial)
        ));
        let complex_valued = TrigPoly::exponential(2);
        assert!(complex_valued.roots_on_torus(1e-8).is_err());
    }

    #[test]
    fn divide_out_fixtures() {
        // (4/3)sin²πt / sin²πt = 4/3
        let q = phi_psi_fixture().divide_out(0.0, 2, 1e-10).unwrap();
        assert_eq!(q.support_len(), 1);
        assert_abs_diff_eq!(q.coeff(0).re, 4.0 / 3.0, epsilon = 1e-12);

        let unit = TrigPoly::sin_sq_at(0.0).divide_out(0.0, 2, 1e-10).unwrap();
        assert_eq!(unit.support_len(), 1);
        assert_abs_diff_eq!(unit.coeff(0).re, 1.0, epsilon = 1e-13);

        assert!(matches!(
            phi_hat_fixture().divide_out(0.0, 2, 1e-10),
            Err(Error::NonzeroRemainder { .. })
        ));
    }

    #[test]
    fn divide_out_offcenter_roundtrip() {
        // p = sin⁴π(t - 0.3)·(2 + cos 2πt)
        let base = TrigPoly::from_real_coeffs([(0, 2.0), (1, 0.5), (-1, 0.5)]);
        let s2 = TrigPoly::sin_sq_at(0.3);
        let p = s2.mul(&s2).mul(&base);
        let q = p.divide_out(0.3, 4, 1e-9).unwrap();
        let back = q.mul(&s2).mul(&s2);
        let diff = back.sub(&p);
        assert!(diff.l1_norm() < 1e-9, "residual {}", diff.l1_norm());
        let qd = q.sub(&base);
        assert!(qd.l1_norm() < 1e-9);
    }

    #[test]
    fn extrema_of_hat_weight() {
        let e = phi_hat_fixture().extrema();
        assert_abs_diff_eq!(e.min.1, 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.max.1, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.min.0, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn json_roundtrip() {
        let p = TrigPoly::from_coeffs([
            (-2, Complex64::new(0.5, -0.25)),
            (0, Complex64::new(1.0, 0.0)),
            (3, Complex64::new(0.0, 2.0)),
        ]);
        let text = p.to_json();
        assert!(text.contains("\"coeffs\""));
        let q = TrigPoly::from_json(&text).unwrap();
        assert_eq!(p, q);
        assert!(TrigPoly::from_json(r#"{"coeffs":{"x":[1,0]}}"#).is_err());
    }

    // ---- property tests ----------------------------------------------------

    fn arb_trigpoly() -> impl Strategy<Value = TrigPoly> {
        proptest::collection::vec((-4i64..=4, -2.0f64..2.0, -2.0f64..2.0), 1..6).prop_map(|v| {
            TrigPoly::from_coeffs(v.into_iter().map(|(k, re, im)| (k, Complex64::new(re, im))))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn pair_with_self_is_coefficient_energy(p in arb_trigpoly()) {
            let v = p.pair(&p);
            let energy: f64 = p.coeffs().map(|(_, c)| c.norm_sqr()).sum();
            prop_assert!(v.im == 0.0);
            prop_assert!(v.re >= 0.0);
            prop_assert!((v.re - energy).abs() <= 1e-12 * (1.0 + energy));
        }

        #[test]
        fn squared_magnitude_roots_have_even_multiplicity(
            q in arb_trigpoly(),
            x0 in 0.0f64..1.0,
        ) {
            // force a genuine circle zero at x0: q1 = (e_1 - e^{2πix0})·q
            let factor = TrigPoly::from_coeffs([
                (1, Complex64::new(1.0, 0.0)),
                (0, -Complex64::from_polar(1.0, TAU * x0)),
            ]);
            let q1 = factor.mul(&q);
            prop_assume!(!q1.is_zero());
            let p = q1.mul(&q1.conj_reflection());
            if let Ok(roots) = p.roots_on_torus(1e-8) {
                for r in roots {
                    prop_assert_eq!(r.multiplicity % 2, 0);
                }
            }
        }

        #[test]
        fn divide_out_then_multiply_back(q in arb_trigpoly(), x0 in 0.05f64..0.95, half_m in 1u32..=2) {
            // p = sin^{2·half_m}·(|q|² + 1): strictly positive cofactor
            let pos = q.mul(&q.conj_reflection()).add(&TrigPoly::one());
            let s2 = TrigPoly::sin_sq_at(x0);
            let mut p = pos;
            for _ in 0..half_m {
                p = p.mul(&s2);
            }
            let m = 2 * half_m;
            let rec = p.divide_out(x0, m, 1e-8).unwrap();
            let mut back = rec;
            for _ in 0..half_m {
                back = back.mul(&s2);
            }
            let err = back.sub(&p).l1_norm();
            prop_assert!(err < 1e-9 * (1.0 + p.l1_norm()), "residual {}", err);
        }
    }
}
