//! Test-only reference implementations in double-double complex arithmetic.
//!
//! Everything here is rebuilt from the defining products and sums with fixed
//! truncation depths. Nothing calls into the library.

#![allow(dead_code)]

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use twofloat::TwoFloat;

#[derive(Debug, Clone, Copy)]
pub struct Dd {
    pub re: TwoFloat,
    pub im: TwoFloat,
}

impl Dd {
    pub fn new(re: f64, im: f64) -> Self {
        Dd { re: TwoFloat::from(re), im: TwoFloat::from(im) }
    }

    pub fn from_c(c: Complex64) -> Self {
        Dd::new(c.re, c.im)
    }

    pub fn real(x: f64) -> Self {
        Dd::new(x, 0.0)
    }

    pub fn one() -> Self {
        Dd::real(1.0)
    }

    pub fn zero() -> Self {
        Dd::real(0.0)
    }

    pub fn to_c(self) -> Complex64 {
        Complex64::new(self.re.hi() + self.re.lo(), self.im.hi() + self.im.lo())
    }

    pub fn norm(self) -> f64 {
        self.to_c().norm()
    }

    pub fn inv(self) -> Self {
        Dd::one() / self
    }

    pub fn powi(self, n: i64) -> Self {
        let (mut base, mut e) = if n < 0 { (self.inv(), -n) } else { (self, n) };
        let mut acc = Dd::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        Dd { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        Dd { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        Dd { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let d = o.re * o.re + o.im * o.im;
        Dd { re: (self.re * o.re + self.im * o.im) / d, im: (self.im * o.re - self.re * o.im) / d }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { re: -self.re, im: -self.im }
    }
}

fn one_minus(x: Dd) -> Dd {
    Dd::one() - x
}

/// `(a; q)_n` for `n ≥ 0` as the plain product.
pub fn poch(a: Dd, q: Dd, n: usize) -> Dd {
    let mut acc = Dd::one();
    let mut qi = Dd::one();
    for _ in 0..n {
        acc = acc * one_minus(a * qi);
        qi = qi * q;
    }
    acc
}

/// `(a; q)_∞` with `depth` factors.
pub fn poch_inf(a: Dd, q: Dd, depth: usize) -> Dd {
    poch(a, q, depth)
}

/// Enough factors that `|a q^J|` is far below double-double resolution, then doubled.
pub fn depth_for(a: f64, q: f64) -> usize {
    let mut j = 0usize;
    let mut v = a.abs();
    while v > 1e-40 {
        v *= q.abs();
        j += 1;
    }
    2 * j + 10
}

pub fn poch_inf_auto(a: Complex64, q: f64) -> Complex64 {
    poch_inf(Dd::from_c(a), Dd::real(q), depth_for(a.norm(), q)).to_c()
}

/// `(t z, t/z; q)_∞` as one product over both factors.
pub fn poch_pm(t: Complex64, z: Complex64, q: f64) -> Complex64 {
    let (t, z, qd) = (Dd::from_c(t), Dd::from_c(z), Dd::real(q));
    let depth = depth_for(t.norm() * z.norm().max(1.0 / z.norm()), q);
    let (mut acc, mut qi) = (Dd::one(), Dd::one());
    for _ in 0..depth {
        acc = acc * one_minus(t * z * qi) * one_minus(t / z * qi);
        qi = qi * qd;
    }
    acc.to_c()
}

/// Ratio of infinite products `∏(num; q)_∞ / ∏(den; q)_∞`.
pub fn poch_ratio(num: &[Complex64], den: &[Complex64], q: f64) -> Complex64 {
    let qd = Dd::real(q);
    let mut acc = Dd::one();
    for a in num {
        acc = acc * poch_inf(Dd::from_c(*a), qd, depth_for(a.norm(), q));
    }
    for b in den {
        acc = acc / poch_inf(Dd::from_c(*b), qd, depth_for(b.norm(), q));
    }
    acc.to_c()
}

/// The `k`-th term of `rψs` straight from the definition, for `k ∈ ℤ`.
///
/// For `k < 0` the Pochhammer symbols are `(a; q)_k = 1/∏_{i=1}^{|k|} (1 - a q^{-i})`;
/// their quotient is accumulated one index `i` at a time so that no single
/// product overflows.
pub fn psi_term(upper: &[Dd], lower: &[Dd], q: Dd, z: Dd, k: i64) -> Dd {
    let e = lower.len() as i64 - upper.len() as i64;
    let mut t = Dd::one();
    if k >= 0 {
        let mut qi = Dd::one();
        for _ in 0..k {
            for a in upper {
                t = t * one_minus(*a * qi);
            }
            for b in lower {
                t = t / one_minus(*b * qi);
            }
            // [(-1)^k q^{k(k-1)/2}]^{s-r} picks up (-q^i)^{s-r} at each step
            t = t * (-qi).powi(e) * z;
            qi = qi * q;
        }
    } else {
        let qinv = q.inv();
        let mut qi = qinv;
        for i in 1..=(-k) {
            for b in lower {
                t = t * one_minus(*b * qi);
            }
            for a in upper {
                t = t / one_minus(*a * qi);
            }
            // k(k-1)/2 grows by i as k steps from -(i-1) to -i; the sign flips each step
            t = t * (-q.powi(i)).powi(e) / z;
            qi = qi * qinv;
        }
    }
    t
}

/// `∑_{k=-neg}^{pos} ψ-term(k)` with plain double-double accumulation.
pub fn psi_sum(upper: &[Complex64], lower: &[Complex64], q: f64, z: Complex64, neg: i64, pos: i64) -> Complex64 {
    let up: Vec<Dd> = upper.iter().map(|c| Dd::from_c(*c)).collect();
    let lo: Vec<Dd> = lower.iter().map(|c| Dd::from_c(*c)).collect();
    let (qd, zd) = (Dd::real(q), Dd::from_c(z));
    let mut acc = Dd::zero();
    for k in -neg..=pos {
        acc = acc + psi_term(&up, &lo, qd, zd, k);
    }
    acc.to_c()
}

/// `rφs`: its `(q; q)_k` denominator is a lower parameter `q` of the ψ-term,
/// which also raises the sign-and-power exponent to `1 + s - r`.
pub fn phi_sum(upper: &[Complex64], lower: &[Complex64], q: f64, z: Complex64, terms: i64) -> Complex64 {
    let mut lo = lower.to_vec();
    lo.push(Complex64::new(q, 0.0));
    psi_sum(upper, &lo, q, z, 0, terms)
}

/// `A(j) = (βγ; q)_j / (qγ; q)_j` from the definition.
pub fn coeff_a(j: i64, bg: Dd, qg: Dd, q: Dd) -> Dd {
    let mut t = Dd::one();
    if j >= 0 {
        let mut qi = Dd::one();
        for _ in 0..j {
            t = t * one_minus(bg * qi) / one_minus(qg * qi);
            qi = qi * q;
        }
    } else {
        let qinv = q.inv();
        let mut qi = qinv;
        for _ in 0..(-j) {
            t = t * one_minus(qg * qi) / one_minus(bg * qi);
            qi = qi * qinv;
        }
    }
    t
}

/// `C_n(x; β, γ | q) = ∑_k A(k) A(n-k) z^{n-2k}` over `k ∈ [min(0,n) - depth, max(0,n) + depth]`.
pub fn bilateral_cn(n: i64, z: Complex64, beta: Complex64, gamma: Complex64, q: f64, depth: i64) -> Complex64 {
    let (b, g, qd, zd) = (Dd::from_c(beta), Dd::from_c(gamma), Dd::real(q), Dd::from_c(z));
    let (bg, qg) = (b * g, qd * g);
    let mut acc = Dd::zero();
    for k in (n.min(0) - depth)..=(n.max(0) + depth) {
        acc = acc + coeff_a(k, bg, qg, qd) * coeff_a(n - k, bg, qg, qd) * zd.powi(n - 2 * k);
    }
    acc.to_c()
}

/// Classical `C_n(x; β | q)` from its finite defining sum.
pub fn classical_cn(n: i64, z: Complex64, beta: Complex64, q: f64) -> Complex64 {
    bilateral_cn(n, z, beta, Complex64::new(1.0, 0.0), q, 0)
}

/// `A(j)` for `j ∈ [-span, span]`, each entry from its own product.
pub struct ATable {
    span: i64,
    vals: Vec<Dd>,
}

impl ATable {
    pub fn new(beta: Complex64, gamma: Complex64, q: f64, span: i64) -> Self {
        let (b, g, qd) = (Dd::from_c(beta), Dd::from_c(gamma), Dd::real(q));
        let vals = (-span..=span).map(|j| coeff_a(j, b * g, qd * g, qd)).collect();
        ATable { span, vals }
    }

    pub fn get(&self, j: i64) -> Dd {
        assert!(j.abs() <= self.span, "A({j}) outside the table");
        self.vals[(j + self.span) as usize]
    }

    /// `C_n` at `z` summed over `k ∈ [min(0,n) - depth, max(0,n) + depth]`.
    pub fn cn(&self, n: i64, z: Complex64, depth: i64) -> Dd {
        let zd = Dd::from_c(z);
        let z2inv = (zd * zd).inv();
        let lo = n.min(0) - depth;
        let mut zp = zd.powi(n - 2 * lo);
        let mut acc = Dd::zero();
        for k in lo..=(n.max(0) + depth) {
            acc = acc + self.get(k) * self.get(n - k) * zp;
            zp = zp * z2inv;
        }
        acc
    }
}

/// `W(θ) = (e^{±2iθ}; q)_∞ / (βe^{±2iθ}; q)_∞`.
pub fn reduced_weight(theta: f64, beta: f64, q: f64) -> f64 {
    let z2 = Complex64::from_polar(1.0, 2.0 * theta);
    (poch_pm(Complex64::new(1.0, 0.0), z2, q) / poch_pm(Complex64::new(beta, 0.0), z2, q)).re
}
