//! The Askey–Wilson divided-difference operator `D_q` on functions of
//! `x = (z + 1/z)/2`.

use crate::error::{Error, Result};
use crate::qcore::{check_finite, real, ComplexScalar, QBase, SpectralPoint, TruncationPolicy};
use crate::ultraspherical::{classical_cn, BilateralEvaluator, Kind, UltraParams};

pub const SINGULAR_TOL: f64 = 1e-12;

/// `D_q f` at `p`. The evaluator receives the points `q^{1/2} z` and `q^{-1/2} z`.
pub fn apply_dq<F>(mut f: F, p: &SpectralPoint, q: QBase) -> Result<ComplexScalar>
where
    F: FnMut(&SpectralPoint) -> Result<ComplexScalar>,
{
    let z = p.z();
    if (z - 1.0).norm() < SINGULAR_TOL || (z + 1.0).norm() < SINGULAR_TOL {
        return Err(Error::SingularPoint(format!("D_q at z = {z}")));
    }
    let s = q.sqrt();
    let s_inv = s.inv();
    let up = f(&p.scaled_pair(s, s_inv)?)?;
    let down = f(&p.scaled_pair(s_inv, s)?)?;
    let den = (s - s_inv) * (z - p.z_inv()) * 0.5;
    check_finite((up - down) / den, "D_q")
}

/// Checks that `f(z) = f(1/z)` to `rel_tol` at the given points.
pub fn check_x_function<F>(mut f: F, points: &[SpectralPoint], rel_tol: f64) -> Result<()>
where
    F: FnMut(&SpectralPoint) -> Result<ComplexScalar>,
{
    for p in points {
        let (a, b) = (f(p)?, f(&p.inv())?);
        if (a - b).norm() > rel_tol * a.norm().max(1.0) {
            return Err(Error::Contract(format!("f(z) ≠ f(1/z) at z = {}: {a} vs {b}", p.z())));
        }
    }
    Ok(())
}

/// [`apply_dq`] after verifying that `f` depends on `x` only, at `p` and at
/// both shifted points.
pub fn apply_dq_checked<F>(mut f: F, p: &SpectralPoint, q: QBase, rel_tol: f64) -> Result<ComplexScalar>
where
    F: FnMut(&SpectralPoint) -> Result<ComplexScalar>,
{
    let s = q.sqrt();
    let points = [*p, p.scaled_pair(s, s.inv())?, p.scaled_pair(s.inv(), s)?];
    check_x_function(&mut f, &points, rel_tol)?;
    apply_dq(f, p, q)
}

/// Residual of the lowering action of `D_q` on `C_n`, scaled by `max(1, |D_q C_n|)`.
pub fn dq_action_residual(
    kind: Kind,
    n: i64,
    p: &SpectralPoint,
    params: &UltraParams,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let q = params.q;
    let qv = q.value();
    let one = real(1.0);
    let b = params.beta;
    // q^{(1-n)/2}
    let shift = crate::qcore::int_pow(q.sqrt(), 1 - n);
    let (lhs, rhs) = match kind {
        Kind::Classical => {
            if n < 0 {
                return Err(Error::Domain(format!("classical D_q action needs n ≥ 0, got {n}")));
            }
            let lhs = apply_dq(|w| classical_cn(n, w, b, q), p, q)?;
            let lower = if n == 0 { real(0.0) } else { classical_cn(n - 1, p, qv * b, q)? };
            (lhs, 2.0 * (one - b) / (one - qv) * shift * lower)
        }
        Kind::Bilateral => {
            let g = params.gamma;
            let mut e = BilateralEvaluator::new(*params, *policy);
            let lhs = apply_dq(|w| e.value(n, w), p, q)?;
            let mut lowered = BilateralEvaluator::new(params.with_beta(qv * b), *policy);
            let lower = lowered.value(n - 1, p)?;
            let c = 2.0 * (one - b * g) * (one - b * g) / ((one - qv) * (one - b) * g);
            (lhs, c * shift * lower)
        }
    };
    Ok((lhs - rhs).norm() / lhs.norm().max(1.0))
}
