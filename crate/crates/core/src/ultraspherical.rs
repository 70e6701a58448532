//! Continuous q-ultraspherical polynomials `C_n(x; β | q)` and the bilateral
//! functions `C_n(x; β, γ | q)`.
//!
//! The bilateral functions are summed directly from their two-sided
//! definition. The coefficient `A(j) = (βγ; q)_j / (qγ; q)_j` does not depend
//! on the spectral point, so [`BilateralEvaluator`] keeps a lazily grown
//! table of it and can be reused across many points.

use std::fmt;
use std::str::FromStr;

use crate::accum::CompensatedSum;
use crate::error::{Error, Result};
use crate::hyperseries::{sum_psi, DivergenceGuard, SeriesSpec, TailTracker};
use crate::qcore::{
    check_finite, coincide, is_unit, poch_pm, poch_ratio_inf, poch_with, real, ComplexScalar, Order, QBase,
    SpectralPoint, TruncationPolicy,
};

/// Parameters `(β, γ, q)` of the bilateral family; `γ = 1` gives the polynomials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UltraParams {
    pub beta: ComplexScalar,
    pub gamma: ComplexScalar,
    pub q: QBase,
}

impl UltraParams {
    pub fn new(beta: ComplexScalar, gamma: ComplexScalar, q: QBase) -> Self {
        UltraParams { beta, gamma, q }
    }

    pub fn classical(beta: ComplexScalar, q: QBase) -> Self {
        UltraParams { beta, gamma: real(1.0), q }
    }

    pub fn with_beta(self, beta: ComplexScalar) -> Self {
        UltraParams { beta, ..self }
    }

    pub fn with_gamma(self, gamma: ComplexScalar) -> Self {
        UltraParams { gamma, ..self }
    }

    /// `|q z^{±2}/β| < 1`, the convergence region of the two-sided sum.
    pub fn check_region(&self, p: &SpectralPoint) -> Result<()> {
        if self.beta.norm() == 0.0 {
            return Err(Error::Region("β = 0".into()));
        }
        let qb = self.q.value() / self.beta;
        let worst = (qb * p.z() * p.z()).norm().max((qb * p.z_inv() * p.z_inv()).norm());
        if worst >= 1.0 {
            return Err(Error::Region(format!("|q z^±2/β| < 1 fails ({worst})")));
        }
        Ok(())
    }

    /// Pole error if some `A(j)` is undefined, i.e. `γ` or `βγ` lies on the
    /// lattice where a denominator factor of the coefficient table vanishes.
    pub fn check_poles(&self) -> Result<()> {
        const CAP: i64 = 100_000;
        let mut a = BilateralCoefficients::new(self);
        let qa = self.q.abs();
        let qg = (self.q.value() * self.gamma).norm();
        let mut j = 1;
        while j < CAP && qg * qa.powi(j as i32 - 1) >= 0.5 {
            a.get(j)?;
            j += 1;
        }
        let bg = (self.beta * self.gamma).norm();
        let mut j = 1;
        while j < CAP && bg * qa.powi(-(j as i32)) <= 2.0 {
            a.get(-j)?;
            j += 1;
        }
        Ok(())
    }
}

/// One evaluated bilateral function value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UltraValue {
    pub n: i64,
    pub point: SpectralPoint,
    pub value: ComplexScalar,
    pub truncation_terms: usize,
}

/// Polynomial (`γ = 1`) or bilateral form of an identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Classical,
    Bilateral,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Classical => "classical",
            Kind::Bilateral => "bilateral",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Kind::Classical),
            "bilateral" => Ok(Kind::Bilateral),
            _ => Err(Error::Config(format!("unknown kind '{s}' (expected classical or bilateral)"))),
        }
    }
}

fn z_power(p: &SpectralPoint, n: i64) -> ComplexScalar {
    if n >= 0 {
        p.z().powi(n as i32)
    } else {
        p.z_inv().powi((-n) as i32)
    }
}

/// `C_n(x; β | q)` as the finite sum over `k = 0..=n`.
pub fn classical_cn(n: i64, p: &SpectralPoint, beta: ComplexScalar, q: QBase) -> Result<ComplexScalar> {
    if n < 0 {
        return Err(Error::Domain(format!("classical C_n needs n ≥ 0, got {n}")));
    }
    let n = n as usize;
    // c[k] = (β; q)_k / (q; q)_k
    let mut c = Vec::with_capacity(n + 1);
    c.push(real(1.0));
    let mut qk = real(1.0);
    for _ in 0..n {
        let last = *c.last().unwrap();
        c.push(last * (1.0 - beta * qk) / (1.0 - qk * q.value()));
        qk *= q.value();
    }
    let z2inv = p.z_inv() * p.z_inv();
    let mut zp = z_power(p, n as i64);
    let mut acc = CompensatedSum::new();
    for k in 0..=n {
        acc.add(c[k] * c[n - k] * zp);
        zp *= z2inv;
    }
    check_finite(acc.value(), "classical C_n")
}

/// Lazily extended table of `A(j) = (βγ; q)_j / (qγ; q)_j`, `j ∈ ℤ`.
#[derive(Debug, Clone)]
pub struct BilateralCoefficients {
    beta_gamma: ComplexScalar,
    q_gamma: ComplexScalar,
    q: QBase,
    /// `A(0), A(1), ...`
    up: Vec<ComplexScalar>,
    /// `A(-1), A(-2), ...`
    down: Vec<ComplexScalar>,
}

impl BilateralCoefficients {
    pub fn new(params: &UltraParams) -> Self {
        BilateralCoefficients {
            beta_gamma: params.beta * params.gamma,
            q_gamma: params.q.value() * params.gamma,
            q: params.q,
            up: vec![real(1.0)],
            down: Vec::new(),
        }
    }

    pub fn get(&mut self, j: i64) -> Result<ComplexScalar> {
        if j >= 0 {
            while self.up.len() <= j as usize {
                let i = self.up.len() as i64 - 1;
                let last = *self.up.last().unwrap();
                // once the numerator has vanished the remaining values are 0
                let next = if last == real(0.0) {
                    last
                } else {
                    let w = self.q_gamma * self.q.pow(i);
                    if is_unit(w) {
                        return Err(Error::pole("(qγ; q)_j in A(j)", i + 1));
                    }
                    last * (1.0 - self.beta_gamma * self.q.pow(i)) / (1.0 - w)
                };
                self.up.push(next);
            }
            Ok(self.up[j as usize])
        } else {
            let m = (-j) as usize;
            while self.down.len() < m {
                // A(i-1) = A(i) (1 - qγ q^{i-1}) / (1 - βγ q^{i-1})
                let i = -(self.down.len() as i64);
                let last = if i == 0 { self.up[0] } else { *self.down.last().unwrap() };
                let next = if last == real(0.0) {
                    last
                } else {
                    // multiplied through by u = q^{1-i} so nothing overflows
                    let u = self.q.pow(1 - i);
                    if coincide(self.beta_gamma, u) {
                        return Err(Error::pole("(βγ; q)_j in A(j)", i - 1));
                    }
                    last * (u - self.q_gamma) / (u - self.beta_gamma)
                };
                self.down.push(next);
            }
            Ok(self.down[m - 1])
        }
    }
}

/// Evaluates `C_n(x; β, γ | q)` for many `n` and points with one coefficient table.
#[derive(Debug, Clone)]
pub struct BilateralEvaluator {
    params: UltraParams,
    policy: TruncationPolicy,
    coeffs: BilateralCoefficients,
    poles_checked: bool,
}

impl BilateralEvaluator {
    pub fn new(params: UltraParams, policy: TruncationPolicy) -> Self {
        BilateralEvaluator { params, policy, coeffs: BilateralCoefficients::new(&params), poles_checked: false }
    }

    pub fn params(&self) -> &UltraParams {
        &self.params
    }

    pub fn eval(&mut self, n: i64, p: &SpectralPoint) -> Result<UltraValue> {
        if !self.poles_checked {
            self.params.check_poles()?;
            self.poles_checked = true;
        }
        self.params.check_region(p)?;
        let policy = self.policy;
        let z2 = p.z() * p.z();
        let z2inv = p.z_inv() * p.z_inv();
        let zn = z_power(p, n);
        let (lo, hi) = (n.min(0), n.max(0));
        let mut acc = CompensatedSum::new();
        let mut terms = 0usize;

        // k = 0, 1, ...; the tail test starts once k has passed the index range [lo, hi]
        let mut zp = zn;
        let mut tail = TailTracker::new(&policy);
        let mut guard = DivergenceGuard::new(&policy);
        let mut k = 0i64;
        loop {
            let term = self.coeffs.get(k)? * self.coeffs.get(n - k)? * zp;
            acc.add(term);
            terms += 1;
            if k >= hi {
                if tail.settled(term.norm(), policy.threshold(acc.value())) {
                    break;
                }
                if guard.diverging(term.norm()) {
                    return Err(Error::non_convergence("bilateral C_n, k → ∞", terms));
                }
                if (k - hi) as usize >= policy.max_terms {
                    return Err(Error::non_convergence("bilateral C_n, k → ∞", terms));
                }
            }
            k += 1;
            zp *= z2inv;
        }

        let mut zp = zn * z2;
        let mut tail = TailTracker::new(&policy);
        let mut guard = DivergenceGuard::new(&policy);
        let mut k = -1i64;
        loop {
            let term = self.coeffs.get(k)? * self.coeffs.get(n - k)? * zp;
            acc.add(term);
            terms += 1;
            if k <= lo {
                if tail.settled(term.norm(), policy.threshold(acc.value())) {
                    break;
                }
                if guard.diverging(term.norm()) {
                    return Err(Error::non_convergence("bilateral C_n, k → -∞", terms));
                }
                if (lo - k) as usize >= policy.max_terms {
                    return Err(Error::non_convergence("bilateral C_n, k → -∞", terms));
                }
            }
            k -= 1;
            zp *= z2;
        }

        Ok(UltraValue { n, point: *p, value: check_finite(acc.value(), "bilateral C_n")?, truncation_terms: terms })
    }

    pub fn value(&mut self, n: i64, p: &SpectralPoint) -> Result<ComplexScalar> {
        self.eval(n, p).map(|v| v.value)
    }
}

/// `C_n(x; β, γ | q)` by direct two-sided summation.
pub fn bilateral_cn(n: i64, p: &SpectralPoint, params: &UltraParams, policy: &TruncationPolicy) -> Result<UltraValue> {
    BilateralEvaluator::new(*params, *policy).eval(n, p)
}

/// `C_n(x; β, γ | q)` through its well-poised `2ψ2` representation.
pub fn bilateral_cn_via_psi(
    n: i64,
    p: &SpectralPoint,
    params: &UltraParams,
    policy: &TruncationPolicy,
) -> Result<ComplexScalar> {
    params.check_region(p)?;
    let (b, g, q) = (params.beta, params.gamma, params.q);
    let qv = q.value();
    let bg = b * g;
    let qn = q.pow(-n);
    let spec = SeriesSpec::psi(vec![bg, qn / g], vec![qv * g, qv * qn / bg], q, qv * p.z_inv() * p.z_inv() / b);
    let series = sum_psi(&spec, policy)?;
    let pre = poch_with(bg, q, Order::Finite(n), policy)? / poch_with(qv * g, q, Order::Finite(n), policy)?;
    check_finite(pre * z_power(p, n) * series.value, "bilateral C_n via 2ψ2")
}

/// Right-hand side of the generating function `∑ C_n t^n`.
pub fn generating_rhs(kind: Kind, t: ComplexScalar, p: &SpectralPoint, params: &UltraParams) -> Result<ComplexScalar> {
    let (tz, tzi) = ((t * p.z()).norm(), (t * p.z_inv()).norm());
    let q = params.q;
    match kind {
        Kind::Classical => {
            if tz >= 1.0 || tzi >= 1.0 {
                return Err(Error::Region(format!("generating function needs |t z^±1| < 1 ({tz}, {tzi})")));
            }
            let num = poch_pm(params.beta * t, *p, q)?;
            let den = poch_pm(t, *p, q)?;
            check_finite(num / den, "classical generating function")
        }
        Kind::Bilateral => {
            let inner = (q.value() / params.beta).norm();
            if !(inner < tz.min(tzi) && tz.max(tzi) < 1.0) {
                return Err(Error::Region(format!(
                    "generating function needs |q/β| < |t z^±1| < 1 ({inner}, {tz}, {tzi})"
                )));
            }
            let (b, g, qv) = (params.beta, params.gamma, q.value());
            let pre = poch_ratio_inf(&[qv, qv / b], &[qv * g, qv / (b * g)], q)?;
            let num = poch_pm(b * g * t, *p, q)? * poch_pm(qv / (b * g * t), *p, q)?;
            let den = poch_pm(t, *p, q)? * poch_pm(qv / (b * t), *p, q)?;
            if den.norm() == 0.0 {
                return Err(Error::pole("generating function denominator", 0));
            }
            check_finite(pre * pre * num / den, "bilateral generating function")
        }
    }
}

/// The truncated sum `∑_{n=-N}^{N} C_n t^n`, each tail stopped by the policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratingSum {
    pub value: ComplexScalar,
    pub lowest: i64,
    pub highest: i64,
    pub terms: usize,
}

pub fn generating_sum(
    t: ComplexScalar,
    p: &SpectralPoint,
    params: &UltraParams,
    policy: &TruncationPolicy,
) -> Result<GeneratingSum> {
    let mut eval = BilateralEvaluator::new(*params, *policy);
    let mut acc = CompensatedSum::new();
    let mut terms = 0usize;
    let mut bounds = [0i64; 2];
    for (slot, step) in [(1usize, 1i64), (0, -1)] {
        let mut n = if step > 0 { 0 } else { -1 };
        let mut tn = if step > 0 { real(1.0) } else { t.inv() };
        let mut tail = TailTracker::new(policy);
        let mut count = 0usize;
        loop {
            let v = eval.eval(n, p)?;
            terms += v.truncation_terms;
            let term = v.value * tn;
            acc.add(term);
            count += 1;
            if tail.settled(term.norm(), policy.threshold(acc.value())) {
                break;
            }
            if count >= policy.max_terms {
                return Err(Error::non_convergence("generating-function sum", count));
            }
            n += step;
            tn = if step > 0 { tn * t } else { tn / t };
        }
        bounds[slot] = n;
    }
    Ok(GeneratingSum { value: acc.value(), lowest: bounds[0], highest: bounds[1], terms })
}

fn recurrence_scale(cn: ComplexScalar) -> f64 {
    cn.norm().max(1.0)
}

/// Residual of the three-term recurrence at index `n`, scaled by `max(1, |C_n|)`.
pub fn recurrence_residual(
    kind: Kind,
    n: i64,
    p: &SpectralPoint,
    params: &UltraParams,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let q = params.q;
    let x = p.x();
    let (b, g2) = match kind {
        Kind::Classical => (params.beta, real(1.0)),
        Kind::Bilateral => (params.beta, params.gamma * params.gamma),
    };
    let (prev, cur, next) = match kind {
        Kind::Classical => {
            if n < 1 {
                return Err(Error::Domain(format!("classical recurrence needs n ≥ 1, got {n}")));
            }
            (classical_cn(n - 1, p, b, q)?, classical_cn(n, p, b, q)?, classical_cn(n + 1, p, b, q)?)
        }
        Kind::Bilateral => {
            let mut e = BilateralEvaluator::new(*params, *policy);
            (e.value(n - 1, p)?, e.value(n, p)?, e.value(n + 1, p)?)
        }
    };
    let lhs = 2.0 * x * (1.0 - b * g2 * q.pow(n)) * cur;
    let rhs = (1.0 - g2 * q.pow(n + 1)) * next + (1.0 - b * b * g2 * q.pow(n - 1)) * prev;
    Ok((lhs - rhs).norm() / recurrence_scale(cur))
}

/// `|C_n(x; β, γ) - (β/q)^n C_{-n}(x; β, 1/βγ)| / max(1, |C_n|)`.
pub fn symmetry_residual(n: i64, p: &SpectralPoint, params: &UltraParams, policy: &TruncationPolicy) -> Result<f64> {
    let left = bilateral_cn(n, p, params, policy)?.value;
    let dual = params.with_gamma((params.beta * params.gamma).inv());
    let right = bilateral_cn(-n, p, &dual, policy)?.value;
    let factor = crate::qcore::int_pow(params.beta / params.q.value(), n);
    Ok((left - factor * right).norm() / left.norm().max(1.0))
}

/// `C_n(0; β, γ | q)` in closed form; zero for odd `n`.
pub fn constant_term(n: i64, params: &UltraParams) -> Result<ComplexScalar> {
    if n % 2 != 0 {
        return Ok(real(0.0));
    }
    let m = n / 2;
    let (b, g, q) = (params.beta, params.gamma, params.q);
    let qv = q.value();
    let q2 = q.squared();
    let policy = TruncationPolicy::default();
    let ratio = poch_with(b * b * g * g, q2, Order::Finite(m), &policy)?
        / poch_with(qv * qv * g * g, q2, Order::Finite(m), &policy)?;
    let tail = poch_ratio_inf(&[qv, qv / b, -qv * g, -qv / (b * g)], &[-qv, -qv / b, qv * g, qv / (b * g)], q)?;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    check_finite(sign * ratio * tail, "constant term")
}

/// The point `z = q^{1/4}` and the closed form claimed for `C_0` there.
pub fn special_value_c0(params: &UltraParams) -> Result<(SpectralPoint, ComplexScalar)> {
    params.check_poles()?;
    let q = params.q.require_real_positive("the special value of C_0")?;
    let point = SpectralPoint::from_real(q.powf(0.25))?;
    let (b, g) = (params.beta, params.gamma);
    let (qv, rq) = (real(q), real(q.sqrt()));
    let value = poch_ratio_inf(&[qv, qv / b, rq / (b * g), rq * g], &[qv / (b * g), qv * g, rq, rq / b], params.q)?;
    Ok((point, value))
}

/// The point `z = q^{1/2}` and the closed form claimed for `C_{-1}` there.
pub fn special_value_cm1(params: &UltraParams) -> Result<(SpectralPoint, ComplexScalar)> {
    params.check_poles()?;
    let q = params.q.require_real_positive("the special value of C_-1")?;
    let point = SpectralPoint::from_real(q.sqrt())?;
    params.check_region(&point)?;
    let (b, g) = (params.beta, params.gamma);
    let one = real(1.0);
    let value = q.sqrt() * (one - g) * (one - g) / (g * (one - b));
    Ok((point, check_finite(value, "special value of C_-1")?))
}

/// Residual of the product formula `C_m C_n = ∑_k coeff(k) C_{m+n-2k}`.
pub fn linearization_residual(m: i64, n: i64, p: &SpectralPoint, beta: ComplexScalar, q: QBase) -> Result<f64> {
    if m < 0 || n < 0 {
        return Err(Error::Domain(format!("linearization needs m, n ≥ 0, got ({m}, {n})")));
    }
    let lhs = classical_cn(m, p, beta, q)? * classical_cn(n, p, beta, q)?;
    // prefix products (a; q)_j with (β; q)_{j+1} = (β; q)_j · (1 - βq^j) bit for bit,
    // so the degenerate coefficients cancel exactly
    let len = (m + n + 2) as usize;
    let mut pq = vec![real(1.0); len];
    let mut pb = vec![real(1.0); len];
    let mut pbb = vec![real(1.0); len];
    let mut fb = vec![real(1.0); len];
    let mut qj = real(1.0);
    for j in 0..len - 1 {
        fb[j] = 1.0 - beta * qj;
        pq[j + 1] = pq[j] * (1.0 - q.value() * qj);
        pb[j + 1] = pb[j] * fb[j];
        pbb[j + 1] = pbb[j] * (1.0 - beta * beta * qj);
        qj *= q.value();
    }
    let mut acc = CompensatedSum::new();
    for k in 0..=m.min(n) {
        let (s, a, b, c, t) = ((m + n - 2 * k) as usize, (m - k) as usize, (n - k) as usize, k as usize, (m + n - k) as usize);
        // (qβ; q)_t (1 - β) = (β; q)_{t+1}
        let coeff = pq[s] / (pq[a] * pq[b] * pq[c]) * (pbb[t] / pbb[s]) * (pb[a] * pb[b] * pb[c] * fb[s] / pb[t + 1]);
        acc.add(coeff * classical_cn(s as i64, p, beta, q)?);
    }
    Ok((lhs - acc.value()).norm() / lhs.norm().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn defaults() -> UltraParams {
        UltraParams::new(real(0.8), real(0.7), QBase::real(0.3).unwrap())
    }

    fn close(a: ComplexScalar, b: ComplexScalar, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn classical_low_degrees() {
        let q = QBase::real(0.3).unwrap();
        let p = SpectralPoint::from_theta(0.4);
        let b = real(0.8);
        assert_eq!(classical_cn(0, &p, b, q).unwrap(), real(1.0));
        let c1 = classical_cn(1, &p, b, q).unwrap();
        assert!(close(c1, 2.0 * p.x() * (1.0 - b) / (1.0 - q.value()), 1e-15));
        assert!(classical_cn(-1, &p, b, q).is_err());
    }

    #[test]
    fn classical_matches_recurrence_build_up() {
        let q = QBase::real(0.3).unwrap();
        let p = SpectralPoint::from_theta(0.4);
        let b = real(0.8);
        let qv = q.value();
        let x = p.x();
        let mut prev = real(1.0);
        let mut cur = 2.0 * x * (1.0 - b) / (1.0 - qv);
        for n in 1..4 {
            let next = (2.0 * x * (1.0 - b * q.pow(n)) * cur - (1.0 - b * b * q.pow(n - 1)) * prev)
                / (1.0 - q.pow(n + 1));
            prev = cur;
            cur = next;
        }
        assert!(close(classical_cn(4, &p, b, q).unwrap(), cur, 1e-12));
    }

    #[test]
    fn gamma_one_reduces_to_polynomial() {
        let params = UltraParams::classical(real(0.8), QBase::real(0.3).unwrap());
        let policy = TruncationPolicy::default();
        for theta in [0.4, 1.0, 2.2] {
            let p = SpectralPoint::from_theta(theta);
            for n in 0..6 {
                let b = bilateral_cn(n, &p, &params, &policy).unwrap().value;
                let c = classical_cn(n, &p, params.beta, params.q).unwrap();
                assert!(close(b, c, 1e-13), "n={n}: {b} vs {c}");
            }
        }
    }

    #[test]
    fn direct_and_psi_paths_agree() {
        let params = defaults();
        let policy = TruncationPolicy::default();
        let p = SpectralPoint::from_theta(1.0);
        for n in -4..=4 {
            let direct = bilateral_cn(n, &p, &params, &policy).unwrap().value;
            let psi = bilateral_cn_via_psi(n, &p, &params, &policy).unwrap();
            assert!(close(direct, psi, 1e-11), "n={n}: {direct} vs {psi}");
        }
    }

    #[test]
    fn gamma_on_pole_lattice() {
        let q = QBase::real(0.3).unwrap();
        let params = UltraParams::new(real(0.8), q.pow(-2), q);
        let r = bilateral_cn(0, &SpectralPoint::from_theta(1.0), &params, &TruncationPolicy::default());
        assert!(matches!(r, Err(Error::Pole { .. })), "{r:?}");
    }

    #[test]
    fn region_violation() {
        let params = defaults().with_beta(real(0.2));
        let r = bilateral_cn(0, &SpectralPoint::from_theta(1.0), &params, &TruncationPolicy::default());
        assert!(matches!(r, Err(Error::Region(_))));
    }

    #[test]
    fn recurrence_examples() {
        let params = defaults();
        let policy = TruncationPolicy::default();
        let p = SpectralPoint::from_theta(1.0);
        for n in [0, -5, 3] {
            assert!(recurrence_residual(Kind::Bilateral, n, &p, &params, &policy).unwrap() <= 1e-10);
        }
        let classical = UltraParams::classical(real(0.8), params.q);
        assert!(recurrence_residual(Kind::Classical, 1, &p, &classical, &policy).unwrap() <= 1e-12);
        assert!(recurrence_residual(Kind::Classical, 0, &p, &classical, &policy).is_err());
    }

    #[test]
    fn symmetry_examples() {
        let params = defaults();
        let policy = TruncationPolicy::default();
        let p = SpectralPoint::from_theta(0.4);
        for n in [0, 3, -2] {
            assert!(symmetry_residual(n, &p, &params, &policy).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn constant_terms() {
        let params = defaults();
        assert_eq!(constant_term(3, &params).unwrap(), real(0.0));
        let classical = UltraParams::classical(real(0.8), params.q);
        assert!(close(constant_term(0, &classical).unwrap(), real(1.0), 1e-14));
        let at_i = SpectralPoint::new(Complex64::new(0.0, 1.0)).unwrap();
        let direct = bilateral_cn(4, &at_i, &params, &TruncationPolicy::default()).unwrap().value;
        assert!(close(direct, constant_term(4, &params).unwrap(), 1e-9));
    }

    #[test]
    fn special_value_of_c0() {
        let params = defaults().with_beta(real(1.25));
        let (p, closed) = special_value_c0(&params).unwrap();
        let direct = bilateral_cn(0, &p, &params, &TruncationPolicy::default()).unwrap().value;
        assert!(close(direct, closed, 1e-10), "{direct} vs {closed}");
    }

    #[test]
    fn generating_function_gamma_one_prefactor() {
        let q = QBase::real(0.3).unwrap();
        let params = UltraParams::classical(real(0.8), q);
        let qv = q.value();
        let pre = poch_ratio_inf(&[qv, qv / params.beta], &[qv * params.gamma, qv / params.beta], q).unwrap();
        assert!(close(pre, real(1.0), 1e-15));
        assert_eq!(
            generating_rhs(Kind::Classical, real(0.0), &SpectralPoint::from_theta(0.4), &params).unwrap(),
            real(1.0)
        );
    }

    #[test]
    fn generating_function_matches_sum() {
        let params = defaults();
        let policy = TruncationPolicy::default();
        let p = SpectralPoint::from_theta(0.4);
        let t = real(0.6);
        let rhs = generating_rhs(Kind::Bilateral, t, &p, &params).unwrap();
        let sum = generating_sum(t, &p, &params, &policy).unwrap();
        assert!(close(sum.value, rhs, 1e-8), "{} vs {rhs}", sum.value);
    }

    #[test]
    fn linearization_examples() {
        let q = QBase::real(0.3).unwrap();
        let p = SpectralPoint::from_theta(0.4);
        let b = real(0.8);
        assert_eq!(linearization_residual(0, 3, &p, b, q).unwrap(), 0.0);
        assert!(linearization_residual(1, 1, &p, b, q).unwrap() <= 1e-12);
        assert!(linearization_residual(3, 4, &p, b, q).unwrap() <= 1e-11);
    }

    #[test]
    fn kind_parses() {
        assert_eq!("bilateral".parse::<Kind>().unwrap(), Kind::Bilateral);
        assert!("x".parse::<Kind>().is_err());
    }
}
