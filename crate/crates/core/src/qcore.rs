//! Scalars, the base `q`, spectral points and q-shifted factorials.
//!
//! `(a; q)_k` is supported for every integer `k` and for `k = ∞`:
//!
//! * `k ≥ 0`: `∏_{j=0}^{k-1} (1 - a q^j)`
//! * `k < 0`: `1 / (a q^k; q)_{-k} = 1 / ∏_{j=1}^{-k} (1 - a q^{-j})`
//! * `k = ∞`: the convergent infinite product, truncated under a
//!   [`TruncationPolicy`].

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

/// Relative distance from 1 below which a factor `1 - w` is treated as an exact zero.
pub const LATTICE_TOL: f64 = 1e-12;

#[inline]
pub fn real(x: f64) -> ComplexScalar {
    Complex64::new(x, 0.0)
}

/// True when `1 - w` vanishes up to [`LATTICE_TOL`].
#[inline]
pub(crate) fn is_unit(w: ComplexScalar) -> bool {
    (w - 1.0).norm() <= LATTICE_TOL * w.norm().max(1.0)
}

/// True when `a = b` up to [`LATTICE_TOL`]; the same test as `is_unit(a / b)`
/// but safe when `|b|²` is subnormal.
#[inline]
pub(crate) fn coincide(a: ComplexScalar, b: ComplexScalar) -> bool {
    (a - b).norm() <= LATTICE_TOL * a.norm().max(b.norm())
}

pub(crate) fn check_finite(v: ComplexScalar, context: &str) -> Result<ComplexScalar> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(context.to_string()))
    }
}

/// The base `q` with `0 < |q| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QBase(ComplexScalar);

impl QBase {
    pub fn new(q: ComplexScalar) -> Result<Self> {
        let r = q.norm();
        if !(q.re.is_finite() && q.im.is_finite()) || !(r > 0.0 && r < 1.0) {
            return Err(Error::Domain(format!("base q = {q} must satisfy 0 < |q| < 1")));
        }
        Ok(QBase(q))
    }

    pub fn real(q: f64) -> Result<Self> {
        Self::new(real(q))
    }

    #[inline]
    pub fn value(self) -> ComplexScalar {
        self.0
    }

    #[inline]
    pub fn abs(self) -> f64 {
        self.0.norm()
    }

    /// `Some(q)` when the base is real with `0 < q < 1`.
    pub fn as_real_positive(self) -> Option<f64> {
        (self.0.im == 0.0 && self.0.re > 0.0).then_some(self.0.re)
    }

    pub fn require_real_positive(self, what: &str) -> Result<f64> {
        self.as_real_positive()
            .ok_or_else(|| Error::Domain(format!("{what} requires real 0 < q < 1, got {}", self.0)))
    }

    /// The base `q^2`, used by the constant-term and q-Kummer products.
    pub fn squared(self) -> QBase {
        QBase(self.0 * self.0)
    }

    /// Principal square root of `q`.
    pub fn sqrt(self) -> ComplexScalar {
        self.0.sqrt()
    }

    /// `q^n` for any integer `n`.
    pub fn pow(self, n: i64) -> ComplexScalar {
        int_pow(self.0, n)
    }
}

/// `c^n` for any integer `n`. Negative powers invert `c` first: inverting
/// `c^n` instead would underflow `|c^n|²` long before `c^n` itself.
pub fn int_pow(c: ComplexScalar, n: i64) -> ComplexScalar {
    if n >= 0 {
        c.powi(n as i32)
    } else {
        c.inv().powi((-n) as i32)
    }
}

/// Stopping rules shared by infinite products, series and k-sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_terms: usize,
    /// Consecutive sub-threshold terms required before accepting convergence.
    pub tail_window: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { rel_tol: 1e-13, abs_tol: 1e-300, max_terms: 10_000, tail_window: 3 }
    }
}

impl TruncationPolicy {
    pub fn new(rel_tol: f64, abs_tol: f64, max_terms: usize, tail_window: usize) -> Result<Self> {
        let p = TruncationPolicy { rel_tol, abs_tol, max_terms, tail_window };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::Config(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::Config(format!("abs_tol must be positive, got {}", self.abs_tol)));
        }
        if self.tail_window == 0 || self.max_terms < self.tail_window {
            return Err(Error::Config(format!(
                "need max_terms >= tail_window >= 1, got {} and {}",
                self.max_terms, self.tail_window
            )));
        }
        Ok(())
    }

    /// Threshold a term must fall below to count toward the tail window.
    #[inline]
    pub fn threshold(&self, partial: ComplexScalar) -> f64 {
        self.rel_tol * partial.norm() + self.abs_tol
    }
}

/// A nonzero `z` encoding `x = (z + 1/z) / 2`.
///
/// Both `z` and `1/z` are stored so that inversion is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    z: ComplexScalar,
    z_inv: ComplexScalar,
}

impl SpectralPoint {
    pub fn new(z: ComplexScalar) -> Result<Self> {
        let z_inv = z.inv();
        if z == Complex64::new(0.0, 0.0) || !z.is_finite() || !z_inv.is_finite() {
            return Err(Error::Domain(format!("spectral point z = {z} must be finite and nonzero")));
        }
        Ok(SpectralPoint { z, z_inv })
    }

    /// `z = e^{iθ}` for real `θ`.
    pub fn from_theta(theta: f64) -> Self {
        let z = Complex64::from_polar(1.0, theta);
        SpectralPoint { z, z_inv: z.conj() }
    }

    /// Real `z` (encodes real `x` with `|x| ≥ 1`).
    pub fn from_real(z: f64) -> Result<Self> {
        Self::new(real(z))
    }

    /// Branch choice: `|x| ≤ 1` maps to `x + i√(1-x²)` on the unit circle,
    /// `|x| > 1` maps to the real root `x + √(x²-1)`.
    pub fn from_x(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("x = {x} is not finite")));
        }
        if x.abs() <= 1.0 {
            let z = Complex64::new(x, (1.0 - x * x).max(0.0).sqrt());
            Ok(SpectralPoint { z, z_inv: z.conj() })
        } else {
            Self::from_real(x + x.signum() * (x * x - 1.0).sqrt())
        }
    }

    #[inline]
    pub fn z(&self) -> ComplexScalar {
        self.z
    }

    #[inline]
    pub fn z_inv(&self) -> ComplexScalar {
        self.z_inv
    }

    #[inline]
    pub fn x(&self) -> ComplexScalar {
        (self.z + self.z_inv) * 0.5
    }

    /// The point `1/z`, which encodes the same `x`.
    #[inline]
    pub fn inv(&self) -> Self {
        SpectralPoint { z: self.z_inv, z_inv: self.z }
    }

    /// The point `-z`, which encodes `-x`.
    #[inline]
    pub fn neg(&self) -> Self {
        SpectralPoint { z: -self.z, z_inv: -self.z_inv }
    }

    /// The point `s·z`.
    pub fn scaled(&self, s: ComplexScalar) -> Result<Self> {
        Self::new(self.z * s)
    }

    /// The point `s·z` with `1/z` scaled by the supplied `s_inv`, so that
    /// scaling `1/z` by the swapped pair gives the exact inverse point.
    pub fn scaled_pair(&self, s: ComplexScalar, s_inv: ComplexScalar) -> Result<Self> {
        let (z, z_inv) = (self.z * s, self.z_inv * s_inv);
        if z == Complex64::new(0.0, 0.0) || !z.is_finite() || z_inv == Complex64::new(0.0, 0.0) || !z_inv.is_finite() {
            return Err(Error::Domain(format!("scaled spectral point z = {z} must be finite and nonzero")));
        }
        Ok(SpectralPoint { z, z_inv })
    }
}

/// Index of a q-shifted factorial: any integer, or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(i64),
    Infinite,
}

impl From<i64> for Order {
    fn from(k: i64) -> Self {
        Order::Finite(k)
    }
}

/// `(a; q)_k` under the default truncation policy.
pub fn poch(a: ComplexScalar, q: QBase, k: impl Into<Order>) -> Result<ComplexScalar> {
    poch_with(a, q, k, &TruncationPolicy::default())
}

/// `(a; q)_k`; the policy only matters for `k = ∞`.
pub fn poch_with(
    a: ComplexScalar,
    q: QBase,
    k: impl Into<Order>,
    policy: &TruncationPolicy,
) -> Result<ComplexScalar> {
    match k.into() {
        Order::Finite(k) if k >= 0 => {
            let mut prod = real(1.0);
            let mut w = a;
            for _ in 0..k {
                prod *= 1.0 - w;
                w *= q.value();
            }
            check_finite(prod, "q-shifted factorial")
        }
        Order::Finite(k) => {
            let qi = q.value().inv();
            let mut den = real(1.0);
            let mut w = a * qi;
            for j in 1..=(-k) {
                if is_unit(w) {
                    return Err(Error::pole(format!("({a}; q)_{k}"), j));
                }
                den *= 1.0 - w;
                w *= qi;
            }
            check_finite(den.inv(), "q-shifted factorial")
        }
        Order::Infinite => poch_infinite(a, q, policy),
    }
}

fn poch_infinite(a: ComplexScalar, q: QBase, policy: &TruncationPolicy) -> Result<ComplexScalar> {
    infinite_product(a, q, policy, false)
}

/// `(a; q)_∞` destined for a denominator: a vanishing factor is a pole.
pub(crate) fn poch_infinite_nonzero(
    a: ComplexScalar,
    q: QBase,
    policy: &TruncationPolicy,
) -> Result<ComplexScalar> {
    infinite_product(a, q, policy, true)
}

fn infinite_product(
    a: ComplexScalar,
    q: QBase,
    policy: &TruncationPolicy,
    denominator: bool,
) -> Result<ComplexScalar> {
    let bound = policy.rel_tol * (1.0 - q.abs());
    let mut prod = real(1.0);
    let mut w = a;
    let mut quiet = 0usize;
    for j in 0..policy.max_terms {
        if denominator && is_unit(w) {
            return Err(Error::pole(format!("({a}; q)_∞"), j as i64));
        }
        prod *= 1.0 - w;
        if w.norm() < bound {
            quiet += 1;
            if quiet >= policy.tail_window {
                return check_finite(prod, "infinite q-product");
            }
        } else {
            quiet = 0;
        }
        w *= q.value();
    }
    Err(Error::non_convergence(format!("({a}; q)_∞"), policy.max_terms))
}

/// `(a_1, …, a_m; q)_k = ∏ (a_i; q)_k`.
pub fn poch_multi(as_: &[ComplexScalar], q: QBase, k: impl Into<Order>) -> Result<ComplexScalar> {
    poch_multi_with(as_, q, k, &TruncationPolicy::default())
}

pub fn poch_multi_with(
    as_: &[ComplexScalar],
    q: QBase,
    k: impl Into<Order>,
    policy: &TruncationPolicy,
) -> Result<ComplexScalar> {
    let k = k.into();
    let mut prod = real(1.0);
    for (i, &a) in as_.iter().enumerate() {
        prod *= poch_with(a, q, k, policy).map_err(|e| tag_factor(e, i))?;
    }
    check_finite(prod, "multi-factor q-product")
}

fn tag_factor(e: Error, i: usize) -> Error {
    match e {
        Error::Pole { context, index } => Error::Pole { context: format!("factor {i}: {context}"), index },
        Error::NonConvergence { context, terms } => {
            Error::NonConvergence { context: format!("factor {i}: {context}"), terms }
        }
        other => other,
    }
}

/// `(t z, t/z; q)_∞`, the `(t e^{±iθ}; q)_∞` shorthand.
pub fn poch_pm(t: ComplexScalar, p: SpectralPoint, q: QBase) -> Result<ComplexScalar> {
    poch_pm_with(t, p, q, &TruncationPolicy::default())
}

pub fn poch_pm_with(
    t: ComplexScalar,
    p: SpectralPoint,
    q: QBase,
    policy: &TruncationPolicy,
) -> Result<ComplexScalar> {
    let up = poch_infinite(t * p.z(), q, policy)?;
    let down = poch_infinite(t * p.z_inv(), q, policy)?;
    check_finite(up * down, "(t e^{±iθ}; q)_∞")
}

/// Ratio of infinite products `∏ (num_i; q)_∞ / ∏ (den_j; q)_∞`.
pub fn poch_ratio_inf(num: &[ComplexScalar], den: &[ComplexScalar], q: QBase) -> Result<ComplexScalar> {
    let policy = TruncationPolicy::default();
    let n = poch_multi(num, q, Order::Infinite)?;
    let mut d = real(1.0);
    for (i, &b) in den.iter().enumerate() {
        d *= poch_infinite_nonzero(b, q, &policy).map_err(|e| tag_factor(e, i))?;
    }
    check_finite(n / d, "infinite-product ratio")
}
