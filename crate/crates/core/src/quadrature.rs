//! The q-ultraspherical weight and integrals against it.
//!
//! With `x = cos θ` the measure `w(x) dx / √(1-x²)` becomes `W(θ) dθ` on
//! `[0, π]`, where `W(θ) = (e^{±2iθ}; q)_∞ / (βe^{±2iθ}; q)_∞` is smooth,
//! even and `2π`-periodic. A trapezoid rule is then spectrally accurate, and
//! since `W` vanishes at both endpoints only interior nodes are needed.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::accum::CompensatedSum;
use crate::error::{Error, Result};
use crate::hyperseries::{eval_phi, SeriesSpec, TailTracker};
use crate::qcore::{
    check_finite, int_pow, poch_pm, poch_ratio_inf, poch_with, real, ComplexScalar, Order, QBase,
    SpectralPoint, TruncationPolicy,
};
use crate::ultraspherical::{classical_cn, BilateralEvaluator, UltraParams};

pub const INITIAL_NODES: usize = 8;
/// Refinement is never accepted below this many intervals.
pub const MIN_NODES: usize = 64;
pub const MAX_NODES: usize = 1 << 20;

/// Real `β` and `0 < q < 1` inside the positivity window `-1 < β < q^{-1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParams {
    pub beta: f64,
    pub q: QBase,
}

impl WeightParams {
    pub fn new(beta: f64, q: QBase) -> Result<Self> {
        let qr = q.require_real_positive("the orthogonality measure")?;
        if !(beta > -1.0 && beta < qr.powf(-0.5)) {
            return Err(Error::Domain(format!(
                "β = {beta} outside the positivity window (-1, q^(-1/2) = {})",
                qr.powf(-0.5)
            )));
        }
        Ok(WeightParams { beta, q })
    }

    /// `(1/2π) ∫ w(x) dx/√(1-x²) = (β, qβ; q)_∞ / (q, β²; q)_∞`.
    pub fn total_mass(&self) -> Result<ComplexScalar> {
        let (b, qv) = (real(self.beta), self.q.value());
        poch_ratio_inf(&[b, qv * b], &[qv, b * b], self.q)
    }

    /// `W(θ)`, the weight without the `1/√(1-x²)` factor.
    fn reduced(&self, theta: f64) -> Result<f64> {
        let p2 = SpectralPoint::from_theta(2.0 * theta);
        let v = poch_pm(real(1.0), p2, self.q)? / poch_pm(real(self.beta), p2, self.q)?;
        Ok(v.re)
    }
}

/// An integral value with refinement diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: ComplexScalar,
    pub nodes_used: usize,
    pub last_refinement_delta: f64,
}

/// `w(x | β) = W(θ)/√(1-x²)` at `x = cos θ`, `0 < θ < π`.
pub fn weight_value(theta: f64, w: &WeightParams) -> Result<f64> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::Domain(format!("θ = {theta} outside (0, π)")));
    }
    Ok(w.reduced(theta)? / theta.sin())
}

/// `(1/2π) ∫_{-1}^{1} f(x) w(x) dx / √(1-x²)` by node doubling.
///
/// Refinement stops at `N ≥ 64` intervals once two successive values differ by
/// less than `tol · max(1, |value|)`.
pub fn integrate<F>(mut f: F, w: &WeightParams, tol: f64) -> Result<QuadratureResult>
where
    F: FnMut(&SpectralPoint) -> Result<ComplexScalar>,
{
    if !(tol > 0.0) {
        return Err(Error::Config(format!("quadrature tolerance must be positive, got {tol}")));
    }
    let mut g = |theta: f64| -> Result<ComplexScalar> {
        let v = f(&SpectralPoint::from_theta(theta))?;
        Ok(v * w.reduced(theta)?)
    };
    // I_N = (1/2N) ∑_{j=1}^{N-1} g(πj/N); doubling only adds the odd nodes
    let mut n = INITIAL_NODES;
    let mut sum: CompensatedSum = (1..n).map(|j| g(PI * j as f64 / n as f64)).collect::<Result<Vec<_>>>()?.into_iter().collect();
    let mut value = sum.value() / (2.0 * n as f64);
    loop {
        if 2 * n > MAX_NODES {
            return Err(Error::non_convergence("quadrature node doubling", n));
        }
        let m = 2 * n;
        for j in (1..m).step_by(2) {
            sum.add(g(PI * j as f64 / m as f64)?);
        }
        let next = check_finite(sum.value() / (2.0 * m as f64), "quadrature")?;
        let delta = (next - value).norm();
        n = m;
        value = next;
        if n >= MIN_NODES && delta < tol * value.norm().max(1.0) {
            return Ok(QuadratureResult { value, nodes_used: n - 1, last_refinement_delta: delta });
        }
    }
}

/// `(1/2π) ∫ C_m C_n w dx` for the polynomials `C_n(x; β | q)`.
pub fn orthogonality_entry(m: i64, n: i64, w: &WeightParams, tol: f64) -> Result<QuadratureResult> {
    if m < 0 || n < 0 {
        return Err(Error::Domain(format!("orthogonality needs m, n ≥ 0, got ({m}, {n})")));
    }
    let b = real(w.beta);
    integrate(|p| Ok(classical_cn(m, p, b, w.q)? * classical_cn(n, p, b, w.q)?), w, tol)
}

/// The diagonal value `(β, qβ)_∞/(q, β²)_∞ · (β²)_n/(q)_n · (1-β)/(1-βq^n)`.
pub fn orthogonality_norm(n: i64, w: &WeightParams) -> Result<ComplexScalar> {
    let (b, q) = (real(w.beta), w.q);
    let policy = TruncationPolicy::default();
    let ratio = poch_with(b * b, q, Order::Finite(n), &policy)? / poch_with(q.value(), q, Order::Finite(n), &policy)?;
    Ok(w.total_mass()? * ratio * (1.0 - b) / (1.0 - b * q.pow(n)))
}

fn check_unit_disc(t: ComplexScalar, name: &str) -> Result<()> {
    if t.norm() >= 1.0 {
        return Err(Error::Region(format!("|{name}| < 1 fails (|{name}| = {})", t.norm())));
    }
    Ok(())
}

/// The integral of `(βt₁e^{±iθ}, βt₂e^{±iθ})_∞ / (t₁e^{±iθ}, t₂e^{±iθ})_∞` against the weight.
pub fn kernel_integral(t1: ComplexScalar, t2: ComplexScalar, w: &WeightParams, tol: f64) -> Result<QuadratureResult> {
    check_unit_disc(t1, "t1")?;
    check_unit_disc(t2, "t2")?;
    let (b, q) = (real(w.beta), w.q);
    integrate(
        |p| {
            let num = poch_pm(b * t1, *p, q)? * poch_pm(b * t2, *p, q)?;
            let den = poch_pm(t1, *p, q)? * poch_pm(t2, *p, q)?;
            Ok(num / den)
        },
        w,
        tol,
    )
}

/// `(β, qβ)_∞/(q, β²)_∞ · 2φ1(β², β; qβ; q, t₁t₂)`.
pub fn kernel_integral_rhs(t1: ComplexScalar, t2: ComplexScalar, w: &WeightParams, policy: &TruncationPolicy) -> Result<ComplexScalar> {
    check_unit_disc(t1, "t1")?;
    check_unit_disc(t2, "t2")?;
    Ok(w.total_mass()? * phi_beta(w, t1 * t2, policy)?)
}

fn phi_beta(w: &WeightParams, arg: ComplexScalar, policy: &TruncationPolicy) -> Result<ComplexScalar> {
    let b = real(w.beta);
    eval_phi(&SeriesSpec::phi(vec![b * b, b], vec![w.q.value() * b], w.q, arg), policy)
}

/// Parameters `(β², 1/β)` of the bilateral function integrated in
/// [`bilateral_delta_integral`].
pub fn delta_integral_params(beta: f64, q: QBase) -> UltraParams {
    UltraParams::new(real(beta * beta), real(1.0 / beta), q)
}

/// `(1/2π) ∫ C_n(x; β², 1/β | q) w(x | β) dx`, which is `δ_{n,0}` times
/// [`bilateral_delta_rhs`].
pub fn bilateral_delta_integral(
    n: i64,
    beta: f64,
    q: QBase,
    tol: f64,
    policy: &TruncationPolicy,
) -> Result<QuadratureResult> {
    let w = WeightParams::new(beta, q)?;
    let params = delta_integral_params(beta, q);
    params.check_region(&SpectralPoint::from_theta(0.0))?;
    let mut e = BilateralEvaluator::new(params, *policy);
    integrate(|p| e.value(n, p), &w, tol)
}

/// `(q; q)²_∞ (β, q/β²; q)_∞ / ((q/β; q)³_∞ (β²; q)_∞)`.
pub fn bilateral_delta_rhs(beta: f64, q: QBase) -> Result<ComplexScalar> {
    let (b, qv) = (real(beta), q.value());
    poch_ratio_inf(&[qv, qv, b, qv / (b * b)], &[qv / b, qv / b, qv / b, b * b], q)
}

/// Both sides of the shifted orthogonality relation for one `(m, n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedPair {
    pub lhs: ComplexScalar,
    pub rhs: ComplexScalar,
    pub nodes_used: usize,
    /// Largest `|k|` reached by the k-sum at any node.
    pub max_shift: i64,
    pub last_refinement_delta: f64,
}

fn check_shifted_params(params: &UltraParams) -> Result<WeightParams> {
    params.check_poles()?;
    if params.beta.im != 0.0 || params.gamma.im != 0.0 {
        return Err(Error::Domain("shifted orthogonality needs real β and γ".into()));
    }
    let w = WeightParams::new(params.beta.re, params.q)?;
    let qv = params.q.value();
    let r = (qv / (params.beta * params.beta * params.gamma)).norm();
    if r >= 1.0 {
        return Err(Error::Region(format!("|q/β²γ| < 1 fails ({r})")));
    }
    let bg = (params.beta * params.gamma).norm();
    if bg >= 1.0 {
        return Err(Error::Region(format!("|βγ| < 1 fails ({bg})")));
    }
    params.check_region(&SpectralPoint::from_theta(0.0))?;
    Ok(w)
}

/// `(1/2π) ∫ ∑_k C_{m+k} C_{n+k} (q/β²γ)^k w dx` together with the closed form.
///
/// At each node the k-sum runs outward from `k = 0` in both directions until
/// the policy's tail rule accepts it; the quadrature then refines over nodes.
pub fn shifted_orthogonality_pair(
    m: i64,
    n: i64,
    params: &UltraParams,
    tol: f64,
    policy: &TruncationPolicy,
) -> Result<ShiftedPair> {
    let w = check_shifted_params(params)?;
    let r = params.q.value() / (params.beta * params.beta * params.gamma);
    let mut e = BilateralEvaluator::new(*params, *policy);
    let mut max_shift = 0i64;
    let quad = integrate(
        |p| {
            let mut memo: BTreeMap<i64, ComplexScalar> = BTreeMap::new();
            let mut c = |j: i64, e: &mut BilateralEvaluator| -> Result<ComplexScalar> {
                if let Some(v) = memo.get(&j) {
                    return Ok(*v);
                }
                let v = e.value(j, p)?;
                memo.insert(j, v);
                Ok(v)
            };
            let mut acc = CompensatedSum::new();
            for step in [1i64, -1] {
                let mut k = if step > 0 { 0 } else { -1 };
                let mut tail = TailTracker::new(policy);
                loop {
                    let term = c(m + k, &mut e)? * c(n + k, &mut e)? * int_pow(r, k);
                    acc.add(term);
                    max_shift = max_shift.max(k.abs());
                    if tail.settled(term.norm(), policy.threshold(acc.value())) {
                        break;
                    }
                    if k.unsigned_abs() as usize >= policy.max_terms {
                        return Err(Error::non_convergence("shifted orthogonality k-sum", k.unsigned_abs() as usize));
                    }
                    k += step;
                }
            }
            Ok(acc.value())
        },
        &w,
        tol,
    )?;
    let rhs = if m == n { shifted_orthogonality_rhs(n, params, policy)? } else { real(0.0) };
    Ok(ShiftedPair {
        lhs: quad.value,
        rhs,
        nodes_used: quad.nodes_used,
        max_shift,
        last_refinement_delta: quad.last_refinement_delta,
    })
}

/// The diagonal closed form of the shifted orthogonality relation at index `n`.
pub fn shifted_orthogonality_rhs(n: i64, params: &UltraParams, policy: &TruncationPolicy) -> Result<ComplexScalar> {
    let w = check_shifted_params(params)?;
    let (b, g, q) = (params.beta, params.gamma, params.q);
    let qv = q.value();
    let num = [qv, qv, qv, qv / b, qv / b, qv / b, qv / b, b, qv * b];
    let mut den = Vec::with_capacity(9);
    for _ in 0..4 {
        den.push(qv * g);
        den.push(qv / (b * g));
    }
    den.push(b * b);
    let products = poch_ratio_inf(&num, &den, q)?;
    let phi = phi_beta(&w, qv / (b * b * g), policy)?;
    check_finite(products * phi * int_pow(b * b * g / qv, n), "shifted orthogonality closed form")
}

/// Laurent coefficients `c_n` of `f(t) = ∑ c_n t^n` on the circle `|t| = radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentResult {
    pub coefficients: Vec<ComplexScalar>,
    pub samples: usize,
}

/// Samples `f` at `2^j` equally spaced points of the circle, doubling until two
/// successive sample sizes agree to `tol · max(1, |c_n|)` for every requested `n`.
pub fn laurent_coefficients<F>(mut f: F, radius: f64, indices: &[i64], tol: f64) -> Result<LaurentResult>
where
    F: FnMut(ComplexScalar) -> Result<ComplexScalar>,
{
    let mut samples = 16usize;
    let mut previous: Option<Vec<ComplexScalar>> = None;
    while samples <= MAX_NODES {
        let values: Vec<ComplexScalar> = (0..samples)
            .map(|j| f(Complex64::from_polar(radius, 2.0 * PI * j as f64 / samples as f64)))
            .collect::<Result<_>>()?;
        let coeffs: Vec<ComplexScalar> = indices
            .iter()
            .map(|&n| {
                let acc: CompensatedSum = values
                    .iter()
                    .enumerate()
                    .map(|(j, v)| {
                        let angle = -2.0 * PI * ((n * j as i64).rem_euclid(samples as i64)) as f64 / samples as f64;
                        v * Complex64::from_polar(1.0, angle)
                    })
                    .collect();
                acc.value() / samples as f64 * int_pow(real(radius), -n)
            })
            .collect();
        if let Some(prev) = &previous {
            if prev.iter().zip(&coeffs).all(|(a, b)| (a - b).norm() <= tol * b.norm().max(1.0)) {
                return Ok(LaurentResult { coefficients: coeffs, samples });
            }
        }
        previous = Some(coeffs);
        samples *= 2;
    }
    Err(Error::non_convergence("Laurent coefficient sampling", samples))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(beta: f64) -> WeightParams {
        WeightParams::new(beta, QBase::real(0.3).unwrap()).unwrap()
    }

    fn close(a: ComplexScalar, b: ComplexScalar, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn positivity_window() {
        let q = QBase::real(0.3).unwrap();
        assert!(WeightParams::new(1.9, q).is_err());
        assert!(WeightParams::new(-1.0, q).is_err());
        assert!(WeightParams::new(1.8, q).is_ok());
        assert!(WeightParams::new(0.5, QBase::new(Complex64::new(0.1, 0.2)).unwrap()).is_err());
    }

    #[test]
    fn weight_at_beta_zero_is_positive() {
        let w0 = w(0.0);
        for j in 1..20 {
            let theta = PI * j as f64 / 20.0;
            let v = weight_value(theta, &w0).unwrap();
            let expected = poch_pm(real(1.0), SpectralPoint::from_theta(2.0 * theta), w0.q).unwrap().re / theta.sin();
            assert!(v > 0.0);
            assert!((v - expected).abs() <= 1e-14 * expected);
        }
        assert!(weight_value(0.0, &w0).is_err());
    }

    #[test]
    fn total_mass_from_quadrature() {
        let w8 = w(0.8);
        let r = integrate(|_| Ok(real(1.0)), &w8, 1e-12).unwrap();
        assert!(close(r.value, w8.total_mass().unwrap(), 1e-12));
        assert!(r.last_refinement_delta < 1e-12);
    }

    #[test]
    fn odd_degree_orthogonal_to_constants() {
        let r = orthogonality_entry(1, 0, &w(0.8), 1e-12).unwrap();
        assert!(r.value.norm() < 1e-12);
    }

    #[test]
    fn orthogonality_diagonal_and_off_diagonal() {
        let w8 = w(0.8);
        let d = orthogonality_entry(3, 3, &w8, 1e-12).unwrap();
        assert!(close(d.value, orthogonality_norm(3, &w8).unwrap(), 1e-8));
        let o = orthogonality_entry(2, 5, &w8, 1e-12).unwrap();
        assert!(o.value.norm() < 1e-10);
    }

    #[test]
    fn kernel_integral_matches_phi() {
        let w8 = w(0.8);
        let policy = TruncationPolicy::default();
        let (t1, t2) = (real(0.4), real(-0.25));
        let lhs = kernel_integral(t1, t2, &w8, 1e-12).unwrap();
        assert!(close(lhs.value, kernel_integral_rhs(t1, t2, &w8, &policy).unwrap(), 1e-8));
        assert!(matches!(kernel_integral(real(1.0), t2, &w8, 1e-12), Err(Error::Region(_))));
    }

    #[test]
    fn delta_integral_on_corrected_parameters() {
        let q = QBase::real(0.3).unwrap();
        let policy = TruncationPolicy::default();
        let rhs = bilateral_delta_rhs(0.8, q).unwrap();
        for n in -2..=2 {
            let v = bilateral_delta_integral(n, 0.8, q, 1e-12, &policy).unwrap().value / rhs;
            let expected = if n == 0 { 1.0 } else { 0.0 };
            assert!((v - expected).norm() <= 1e-8, "n={n}: {v}");
        }
    }

    #[test]
    fn delta_integral_outside_window() {
        let q = QBase::real(0.5).unwrap();
        let r = bilateral_delta_integral(0, 1.5, q, 1e-10, &TruncationPolicy::default());
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn shifted_orthogonality_at_defaults() {
        let params = UltraParams::new(real(0.8), real(0.7), QBase::real(0.3).unwrap());
        let policy = TruncationPolicy::default();
        let d = shifted_orthogonality_pair(0, 0, &params, 1e-10, &policy).unwrap();
        assert!(close(d.lhs, d.rhs, 1e-6), "{} vs {}", d.lhs, d.rhs);
        let o = shifted_orthogonality_pair(0, 1, &params, 1e-10, &policy).unwrap();
        assert!(o.lhs.norm() <= 1e-6 * d.rhs.norm());
    }

    #[test]
    fn laurent_of_known_series() {
        // 1/(1 - t/2) = ∑ 2^{-n} t^n
        let r = laurent_coefficients(|t| Ok((1.0 - t / 2.0).inv()), 0.6, &[-1, 0, 1, 3], 1e-12).unwrap();
        let expected = [0.0, 1.0, 0.5, 0.125];
        for (c, e) in r.coefficients.iter().zip(expected) {
            assert!((c - e).norm() < 1e-12);
        }
    }
}
