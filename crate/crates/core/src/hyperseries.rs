//! Unilateral `rφs` and bilateral `rψs` series, closed-form summations and
//! transformation checks.
//!
//! Terms are generated by multiplying term ratios, never by recomputing
//! q-shifted factorials. Bilateral series are summed outward from `k = 0`
//! in both directions, each tail with its own stopping rule.

use std::fmt;
use std::str::FromStr;

use crate::accum::CompensatedSum;
use crate::error::{Error, Result};
use crate::qcore::{check_finite, coincide, is_unit, poch_ratio_inf, real, ComplexScalar, QBase, TruncationPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Unilateral,
    Bilateral,
}

/// An `rφs` or `rψs` series: parameters, base and argument.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    pub kind: SeriesKind,
    pub upper: Vec<ComplexScalar>,
    pub lower: Vec<ComplexScalar>,
    pub q: QBase,
    pub z: ComplexScalar,
}

impl SeriesSpec {
    pub fn phi(upper: Vec<ComplexScalar>, lower: Vec<ComplexScalar>, q: QBase, z: ComplexScalar) -> Self {
        SeriesSpec { kind: SeriesKind::Unilateral, upper, lower, q, z }
    }

    pub fn psi(upper: Vec<ComplexScalar>, lower: Vec<ComplexScalar>, q: QBase, z: ComplexScalar) -> Self {
        SeriesSpec { kind: SeriesKind::Bilateral, upper, lower, q, z }
    }

    /// Drops each upper parameter that equals a lower one, together with
    /// that lower parameter. In a bilateral series the pair contributes
    /// `(a; q)_k / (a; q)_k = 1` for every `k`, including the limit at
    /// `a = q^{1+m}` where both sides are separately infinite for `k < -m`.
    pub fn without_common_pairs(&self) -> SeriesSpec {
        let mut lower = self.lower.clone();
        let mut upper = Vec::with_capacity(self.upper.len());
        for &a in &self.upper {
            match lower.iter().position(|&b| coincide(a, b)) {
                Some(j) => {
                    lower.remove(j);
                }
                None => upper.push(a),
            }
        }
        SeriesSpec { upper, lower, ..self.clone() }
    }

    /// Smallest `n ≥ 0` with some upper parameter equal to `q^{-n}`.
    pub fn terminates_above(&self) -> Option<usize> {
        self.upper.iter().filter_map(|&a| lattice_index_down(a, self.q)).min()
    }

    /// Smallest `m ≥ 0` with some lower parameter equal to `q^{1+m}`;
    /// bilateral terms with `k < -m` then vanish.
    pub fn terminates_below(&self) -> Option<usize> {
        self.lower.iter().filter_map(|&b| lattice_index_up(b, self.q)).min()
    }

    /// Checks the convergence region, taking termination into account.
    pub fn check_region(&self) -> Result<()> {
        let r = self.upper.len() as i64;
        let s = self.lower.len() as i64;
        match self.kind {
            SeriesKind::Unilateral => {
                if self.terminates_above().is_some() {
                    return Ok(());
                }
                if r > s + 1 {
                    return Err(Error::Region(format!("{r}φ{s} with r > s+1 diverges")));
                }
                if r == s + 1 && self.z.norm() >= 1.0 {
                    return Err(Error::Region(format!("{r}φ{s} needs |z| < 1, got |z| = {}", self.z.norm())));
                }
                Ok(())
            }
            SeriesKind::Bilateral => {
                if self.terminates_above().is_none() {
                    if r > s {
                        return Err(Error::Region(format!("{r}ψ{s} with r > s diverges for k → ∞")));
                    }
                    if r == s && self.z.norm() >= 1.0 {
                        return Err(Error::Region(format!(
                            "{r}ψ{s} needs |z| < 1, got |z| = {}",
                            self.z.norm()
                        )));
                    }
                }
                if self.terminates_below().is_none() {
                    if self.z.norm() == 0.0 {
                        return Err(Error::Region("bilateral series at z = 0".into()));
                    }
                    // k → -∞: the term ratio behaves like
                    // (-q^{k-1})^{(#zero upper) - (#zero lower)} · ∏b' / (∏a' z)
                    // over the nonzero parameters a', b'.
                    let zero = |v: &[ComplexScalar]| v.iter().filter(|c| c.norm() == 0.0).count() as i64;
                    let excess = zero(&self.upper) - zero(&self.lower);
                    if excess > 0 {
                        return Err(Error::Region("zero upper parameters make the k → -∞ tail diverge".into()));
                    }
                    if excess == 0 {
                        let prod = |v: &[ComplexScalar]| {
                            v.iter().filter(|c| c.norm() != 0.0).fold(real(1.0), |acc, &c| acc * c)
                        };
                        let ratio = (prod(&self.lower) / (prod(&self.upper) * self.z)).norm();
                        if ratio >= 1.0 {
                            return Err(Error::Region(format!(
                                "{r}ψ{s} needs |b₁⋯bₛ/(a₁⋯aᵣ z)| < 1, got {ratio}"
                            )));
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

fn lattice_index_down(a: ComplexScalar, q: QBase) -> Option<usize> {
    // a q^n = 1 requires |a q^n| ≈ 1; stop once the orbit is well inside the unit disc.
    let mut w = a;
    for n in 0..100_000 {
        if is_unit(w) {
            return Some(n);
        }
        if w.norm() < 0.5 {
            return None;
        }
        w *= q.value();
    }
    None
}

fn lattice_index_up(b: ComplexScalar, q: QBase) -> Option<usize> {
    let qi = q.value().inv();
    let mut w = b * qi;
    for m in 0..100_000 {
        if is_unit(w) {
            return Some(m);
        }
        if w.norm() > 2.0 || w.norm() == 0.0 {
            return None;
        }
        w *= qi;
    }
    None
}

/// A series value together with the number of terms that were summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: ComplexScalar,
    pub terms: usize,
    /// `∑|t_k|`; its ratio to `|value|` bounds the cancellation in the sum.
    pub magnitude: f64,
}

/// Flags a tail whose block-wise magnitude envelope keeps growing.
pub(crate) struct DivergenceGuard {
    block: usize,
    seen: usize,
    current: f64,
    previous: Option<f64>,
    strikes: usize,
}

impl DivergenceGuard {
    pub(crate) fn new(policy: &TruncationPolicy) -> Self {
        DivergenceGuard { block: policy.tail_window * 8, seen: 0, current: 0.0, previous: None, strikes: 0 }
    }

    /// Returns true once three consecutive blocks failed to decay.
    pub(crate) fn diverging(&mut self, magnitude: f64) -> bool {
        self.current = self.current.max(magnitude);
        self.seen += 1;
        if self.seen < self.block {
            return false;
        }
        if let Some(prev) = self.previous {
            if self.current > prev {
                self.strikes += 1;
            } else {
                self.strikes = 0;
            }
        }
        self.previous = Some(self.current);
        self.current = 0.0;
        self.seen = 0;
        self.strikes >= 3
    }
}

/// Tracks the tail-window stopping rule for one direction of a sum.
pub(crate) struct TailTracker {
    quiet: usize,
    window: usize,
    previous: Option<f64>,
}

impl TailTracker {
    pub(crate) fn new(policy: &TruncationPolicy) -> Self {
        TailTracker { quiet: 0, window: policy.tail_window, previous: None }
    }

    /// Records one term; true once `tail_window` consecutive terms were small.
    ///
    /// A term counts as small when it and the geometric tail `|t| r/(1-r)`
    /// implied by the last ratio `r < 1` are both below `threshold`.
    pub(crate) fn settled(&mut self, term: f64, threshold: f64) -> bool {
        let tail = match self.previous {
            Some(prev) if prev > 0.0 && term < prev => {
                let r = term / prev;
                term * r / (1.0 - r)
            }
            _ => term,
        };
        self.previous = Some(term);
        if term <= threshold && tail <= threshold {
            self.quiet += 1;
        } else {
            self.quiet = 0;
        }
        self.quiet >= self.window
    }
}

fn signed_power(w: ComplexScalar, e: i64) -> ComplexScalar {
    // (-w)^e
    (-w).powi(e as i32)
}

/// Evaluates a unilateral `rφs` series.
pub fn eval_phi(spec: &SeriesSpec, policy: &TruncationPolicy) -> Result<ComplexScalar> {
    sum_phi(spec, policy).map(|s| s.value)
}

pub fn sum_phi(spec: &SeriesSpec, policy: &TruncationPolicy) -> Result<SeriesSum> {
    if spec.kind != SeriesKind::Unilateral {
        return Err(Error::Domain("eval_phi needs a unilateral series".into()));
    }
    spec.check_region()?;
    let q = spec.q.value();
    let exponent = 1 + spec.lower.len() as i64 - spec.upper.len() as i64;
    let stop_at = spec.terminates_above();

    let mut acc = CompensatedSum::new();
    let mut term = real(1.0);
    acc.add(term);
    let mut magnitude = 1.0;
    let mut qk = real(1.0);
    let mut tail = TailTracker::new(policy);
    let mut guard = DivergenceGuard::new(policy);
    let mut k = 0usize;
    loop {
        if stop_at == Some(k) {
            break;
        }
        if k >= policy.max_terms {
            return Err(Error::non_convergence("rφs series", k));
        }
        let mut num = real(1.0);
        for &a in &spec.upper {
            num *= 1.0 - a * qk;
        }
        let mut den = 1.0 - qk * q;
        for &b in &spec.lower {
            let w = b * qk;
            if is_unit(w) {
                return Err(Error::pole("lower parameter of rφs", k as i64));
            }
            den *= 1.0 - w;
        }
        term *= num / den * spec.z * signed_power(qk, exponent);
        acc.add(term);
        magnitude += term.norm();
        k += 1;
        qk *= q;
        if stop_at.is_none() {
            if tail.settled(term.norm(), policy.threshold(acc.value())) {
                break;
            }
            if guard.diverging(term.norm()) {
                return Err(Error::non_convergence("rφs series (terms not decaying)", k));
            }
        }
    }
    let value = check_finite(acc.value(), "rφs series")?;
    Ok(SeriesSum { value, terms: k + 1, magnitude })
}

/// Evaluates a bilateral `rψs` series.
pub fn eval_psi(spec: &SeriesSpec, policy: &TruncationPolicy) -> Result<ComplexScalar> {
    sum_psi(spec, policy).map(|s| s.value)
}

pub fn sum_psi(spec: &SeriesSpec, policy: &TruncationPolicy) -> Result<SeriesSum> {
    if spec.kind != SeriesKind::Bilateral {
        return Err(Error::Domain("eval_psi needs a bilateral series".into()));
    }
    let spec = &spec.without_common_pairs();
    spec.check_region()?;
    let q = spec.q.value();
    let exponent = spec.lower.len() as i64 - spec.upper.len() as i64;

    let mut forward = CompensatedSum::new();
    forward.add(real(1.0));
    let mut backward = CompensatedSum::new();
    let mut magnitude = 1.0;
    let total = |f: &CompensatedSum, b: &CompensatedSum| f.value() + b.value();

    // k = 0, 1, 2, ...
    let mut term = real(1.0);
    let mut qk = real(1.0);
    let mut tail = TailTracker::new(policy);
    let mut guard = DivergenceGuard::new(policy);
    let mut up_terms = 0usize;
    loop {
        if up_terms >= policy.max_terms {
            return Err(Error::non_convergence("rψs series, k → ∞ tail", up_terms));
        }
        let mut num = real(1.0);
        let mut terminated = false;
        for &a in &spec.upper {
            let w = a * qk;
            if is_unit(w) {
                terminated = true;
            }
            num *= 1.0 - w;
        }
        if terminated {
            break;
        }
        let mut den = real(1.0);
        for &b in &spec.lower {
            let w = b * qk;
            if is_unit(w) {
                return Err(Error::pole("lower parameter of rψs", up_terms as i64));
            }
            den *= 1.0 - w;
        }
        term *= num / den * spec.z * signed_power(qk, exponent);
        forward.add(term);
        magnitude += term.norm();
        up_terms += 1;
        qk *= q;
        if tail.settled(term.norm(), policy.threshold(total(&forward, &backward))) {
            break;
        }
        if guard.diverging(term.norm()) {
            return Err(Error::non_convergence("rψs series, k → ∞ tail (terms not decaying)", up_terms));
        }
    }

    // k = -1, -2, ...; with u = q^{1-k} the ratio t(k-1)/t(k) is
    // ∏(u - b) / ∏(u - a) · (-1)^{s-r} / z, which stays bounded as k → -∞.
    let mut term = real(1.0);
    let mut u = real(1.0) * q;
    let mut tail = TailTracker::new(policy);
    let mut guard = DivergenceGuard::new(policy);
    let mut down_terms = 0usize;
    loop {
        if down_terms >= policy.max_terms {
            return Err(Error::non_convergence("rψs series, k → -∞ tail", down_terms));
        }
        let mut num = real(1.0);
        let mut terminated = false;
        for &b in &spec.lower {
            if coincide(b, u) {
                terminated = true;
            }
            num *= u - b;
        }
        if terminated {
            break;
        }
        let mut den = real(1.0);
        for &a in &spec.upper {
            if coincide(a, u) {
                return Err(Error::pole("upper parameter of rψs", -(down_terms as i64) - 1));
            }
            den *= u - a;
        }
        let sign = if exponent % 2 == 0 { 1.0 } else { -1.0 };
        term *= num / den * sign / spec.z;
        backward.add(term);
        magnitude += term.norm();
        down_terms += 1;
        u *= q;
        if tail.settled(term.norm(), policy.threshold(total(&forward, &backward))) {
            break;
        }
        if guard.diverging(term.norm()) {
            return Err(Error::non_convergence("rψs series, k → -∞ tail (terms not decaying)", down_terms));
        }
    }

    let value = check_finite(total(&forward, &backward), "rψs series")?;
    Ok(SeriesSum { value, terms: 1 + up_terms + down_terms, magnitude })
}

/// Named summation formulas with product right-hand sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClosedForm {
    /// `1φ0(a; -; q, z) = (az; q)_∞/(z; q)_∞`; params `[a, z]`.
    QBinomial,
    /// `2φ1(a, b; c; q, c/ab)`; params `[a, b, c]`.
    QGauss,
    /// `1ψ1(a; b; q, z)`; params `[a, b, z]`.
    Ramanujan1Psi1,
    /// `2ψ2(b, c; aq/b, aq/c; q, -aq/bc)`; params `[a, b, c]`.
    QKummer2Psi2,
    /// `3ψ3(b, c, d; q/b, q/c, q/d; q, q/bcd)`; params `[b, c, d]`.
    Bailey3Psi3A,
    /// `3ψ3(b, c, d; q²/b, q²/c, q²/d; q, q²/bcd)`; params `[b, c, d]`.
    Bailey3Psi3B,
}

impl ClosedForm {
    pub const ALL: [ClosedForm; 6] = [
        ClosedForm::QBinomial,
        ClosedForm::QGauss,
        ClosedForm::Ramanujan1Psi1,
        ClosedForm::QKummer2Psi2,
        ClosedForm::Bailey3Psi3A,
        ClosedForm::Bailey3Psi3B,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClosedForm::QBinomial => "q_binomial",
            ClosedForm::QGauss => "q_gauss",
            ClosedForm::Ramanujan1Psi1 => "ramanujan_1psi1",
            ClosedForm::QKummer2Psi2 => "q_kummer_2psi2",
            ClosedForm::Bailey3Psi3A => "bailey_3psi3_a",
            ClosedForm::Bailey3Psi3B => "bailey_3psi3_b",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            ClosedForm::QBinomial => 2,
            _ => 3,
        }
    }

    /// The series whose sum the formula gives.
    pub fn series(self, params: &[ComplexScalar], q: QBase) -> Result<SeriesSpec> {
        check_arity(self.name(), params, self.arity())?;
        let qv = q.value();
        Ok(match self {
            ClosedForm::QBinomial => SeriesSpec::phi(vec![params[0]], vec![], q, params[1]),
            ClosedForm::QGauss => {
                let (a, b, c) = (params[0], params[1], params[2]);
                SeriesSpec::phi(vec![a, b], vec![c], q, c / (a * b))
            }
            ClosedForm::Ramanujan1Psi1 => SeriesSpec::psi(vec![params[0]], vec![params[1]], q, params[2]),
            ClosedForm::QKummer2Psi2 => {
                let (a, b, c) = (params[0], params[1], params[2]);
                SeriesSpec::psi(vec![b, c], vec![a * qv / b, a * qv / c], q, -a * qv / (b * c))
            }
            ClosedForm::Bailey3Psi3A => {
                let (b, c, d) = (params[0], params[1], params[2]);
                SeriesSpec::psi(vec![b, c, d], vec![qv / b, qv / c, qv / d], q, qv / (b * c * d))
            }
            ClosedForm::Bailey3Psi3B => {
                let (b, c, d) = (params[0], params[1], params[2]);
                let q2 = qv * qv;
                SeriesSpec::psi(vec![b, c, d], vec![q2 / b, q2 / c, q2 / d], q, q2 / (b * c * d))
            }
        })
    }

    fn check_region(self, params: &[ComplexScalar], q: QBase) -> Result<()> {
        let qv = q.value();
        let fail = |what: &str, v: f64| Err(Error::Region(format!("{}: {what} (got {v})", self.name())));
        match self {
            ClosedForm::QBinomial => {
                let z = params[1].norm();
                if z >= 1.0 {
                    return fail("|z| < 1", z);
                }
            }
            ClosedForm::QGauss => {
                let v = (params[2] / (params[0] * params[1])).norm();
                if v >= 1.0 {
                    return fail("|c/ab| < 1", v);
                }
            }
            ClosedForm::Ramanujan1Psi1 => {
                let (a, b, z) = (params[0], params[1], params[2]);
                let inner = (b / a).norm();
                if !(inner < z.norm() && z.norm() < 1.0) {
                    return fail("|b/a| < |z| < 1", z.norm());
                }
            }
            ClosedForm::QKummer2Psi2 => {
                let v = (params[0] * qv / (params[1] * params[2])).norm();
                if v >= 1.0 {
                    return fail("|aq/bc| < 1", v);
                }
            }
            ClosedForm::Bailey3Psi3A | ClosedForm::Bailey3Psi3B => {
                // both tails of the well-poised 3ψ3 must converge
                self.series(params, q)?.check_region()?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClosedForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClosedForm::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown closed form '{s}'")))
    }
}

fn check_arity(name: &str, params: &[ComplexScalar], n: usize) -> Result<()> {
    if params.len() != n {
        return Err(Error::Config(format!("{name} takes {n} parameters, got {}", params.len())));
    }
    Ok(())
}

/// Product side of a named summation formula.
pub fn closed_form(name: ClosedForm, params: &[ComplexScalar], q: QBase) -> Result<ComplexScalar> {
    check_arity(name.name(), params, name.arity())?;
    name.check_region(params, q)?;
    let qv = q.value();
    match name {
        ClosedForm::QBinomial => {
            let (a, z) = (params[0], params[1]);
            poch_ratio_inf(&[a * z], &[z], q)
        }
        ClosedForm::QGauss => {
            let (a, b, c) = (params[0], params[1], params[2]);
            poch_ratio_inf(&[c / a, c / b], &[c, c / (a * b)], q)
        }
        ClosedForm::Ramanujan1Psi1 => {
            let (a, b, z) = (params[0], params[1], params[2]);
            poch_ratio_inf(&[qv, a * z, qv / (a * z), b / a], &[b, z, b / (a * z), qv / a], q)
        }
        ClosedForm::QKummer2Psi2 => {
            let (a, b, c) = (params[0], params[1], params[2]);
            let q2 = q.squared();
            let qq = qv * qv;
            let base = poch_ratio_inf(&[a * qv / (b * c)], &[a * qv / b, a * qv / c, qv / b, qv / c, -a * qv / (b * c)], q)?;
            let even = poch_ratio_inf(&[qq, a * qv, qv / a, a * qq / (b * b), a * qq / (c * c)], &[], q2)?;
            check_finite(base * even, "q-Kummer product")
        }
        ClosedForm::Bailey3Psi3A => {
            let (b, c, d) = (params[0], params[1], params[2]);
            poch_ratio_inf(
                &[qv, qv / (b * c), qv / (b * d), qv / (c * d)],
                &[qv / b, qv / c, qv / d, qv / (b * c * d)],
                q,
            )
        }
        ClosedForm::Bailey3Psi3B => {
            let (b, c, d) = (params[0], params[1], params[2]);
            let q2 = qv * qv;
            poch_ratio_inf(
                &[qv, q2 / (b * c), q2 / (b * d), q2 / (c * d)],
                &[q2 / b, q2 / c, q2 / d, q2 / (b * c * d)],
                q,
            )
        }
    }
}

/// Transformations between two bilateral series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Transform {
    /// Bailey's single `2ψ2` transformation; params `[a, b, c, d, z]`.
    Bailey2Psi2Single,
    /// Bailey's iterated `2ψ2` transformation; params `[a, b, c, d, z]`.
    Bailey2Psi2Iterated,
    /// `2ψ2` as a multiple of a very-well-poised `6ψ8`; params `[a, c, d, e, f]`.
    WellPoised6Psi8,
}

impl Transform {
    pub const ALL: [Transform; 3] =
        [Transform::Bailey2Psi2Single, Transform::Bailey2Psi2Iterated, Transform::WellPoised6Psi8];

    pub fn name(self) -> &'static str {
        match self {
            Transform::Bailey2Psi2Single => "bailey_2psi2_single",
            Transform::Bailey2Psi2Iterated => "bailey_2psi2_iterated",
            Transform::WellPoised6Psi8 => "wellpoised_6psi8",
        }
    }

    /// The formula's own validity condition (both sides must also converge).
    pub fn check_region(self, params: &[ComplexScalar], q: QBase) -> Result<()> {
        check_arity(self.name(), params, 5)?;
        let qv = q.value();
        let worst = match self {
            Transform::Bailey2Psi2Single => {
                let (a, b, c, d, z) = (params[0], params[1], params[2], params[3], params[4]);
                [z.norm(), (c * d / (a * b * z)).norm(), (d / a).norm(), (c / b).norm()]
                    .into_iter()
                    .fold(0.0, f64::max)
            }
            Transform::Bailey2Psi2Iterated => {
                let (a, b, c, d, z) = (params[0], params[1], params[2], params[3], params[4]);
                z.norm().max((c * d / (a * b * z)).norm())
            }
            Transform::WellPoised6Psi8 => {
                let (a, c, d, e, f) = (params[0], params[1], params[2], params[3], params[4]);
                (a * qv / (c * d)).norm().max((a * qv / (e * f)).norm())
            }
        };
        if worst >= 1.0 {
            return Err(Error::Region(format!("{}: region bound {worst} ≥ 1", self.name())));
        }
        Ok(())
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Transform::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown transformation '{s}'")))
    }
}

/// Both sides of a transformation, evaluated independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformSides {
    pub lhs: ComplexScalar,
    pub rhs: ComplexScalar,
    pub terms: usize,
    /// Largest `∑|t_k|` of either side (the right one times its prefactor),
    /// on the scale of [`residual`](Self::residual).
    pub condition: f64,
}

impl TransformSides {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).norm() / self.lhs.norm().max(1.0)
    }
}

pub fn transform_sides(
    name: Transform,
    params: &[ComplexScalar],
    q: QBase,
    policy: &TruncationPolicy,
) -> Result<TransformSides> {
    name.check_region(params, q)?;
    let qv = q.value();
    let (lhs_spec, prefactor, rhs_spec) = match name {
        Transform::Bailey2Psi2Single => {
            let (a, b, c, d, z) = (params[0], params[1], params[2], params[3], params[4]);
            let lhs = SeriesSpec::psi(vec![a, b], vec![c, d], q, z);
            let pre = poch_ratio_inf(
                &[a * z, d / a, c / b, d * qv / (a * b * z)],
                &[z, d, qv / b, c * d / (a * b * z)],
                q,
            )?;
            let rhs = SeriesSpec::psi(vec![a, a * b * z / d], vec![a * z, c], q, d / a);
            (lhs, pre, rhs)
        }
        Transform::Bailey2Psi2Iterated => {
            let (a, b, c, d, z) = (params[0], params[1], params[2], params[3], params[4]);
            let lhs = SeriesSpec::psi(vec![a, b], vec![c, d], q, z);
            let abz = a * b * z;
            let pre = poch_ratio_inf(
                &[a * z, b * z, c * qv / abz, d * qv / abz],
                &[qv / a, qv / b, c, d],
                q,
            )?;
            let rhs = SeriesSpec::psi(vec![abz / c, abz / d], vec![a * z, b * z], q, c * d / abz);
            (lhs, pre, rhs)
        }
        Transform::WellPoised6Psi8 => {
            let (a, c, d, e, f) = (params[0], params[1], params[2], params[3], params[4]);
            let aq = a * qv;
            let lhs = SeriesSpec::psi(vec![e, f], vec![aq / c, aq / d], q, aq / (e * f));
            let pre = poch_ratio_inf(
                &[qv / c, qv / d, aq / e, aq / f],
                &[aq, qv / a, aq / (c * d), aq / (e * f)],
                q,
            )?;
            let ra = a.sqrt();
            let zero = real(0.0);
            let rhs = SeriesSpec::psi(
                vec![qv * ra, -qv * ra, c, d, e, f],
                vec![ra, -ra, aq / c, aq / d, aq / e, aq / f, zero, zero],
                q,
                a * a * a * qv * qv / (c * d * e * f),
            );
            (lhs, pre, rhs)
        }
    };
    let lhs = sum_psi(&lhs_spec, policy)?;
    let rhs = sum_psi(&rhs_spec, policy)?;
    Ok(TransformSides {
        lhs: lhs.value,
        rhs: check_finite(prefactor * rhs.value, "transformation right-hand side")?,
        terms: lhs.terms + rhs.terms,
        condition: lhs.magnitude.max(prefactor.norm() * rhs.magnitude) / lhs.value.norm().max(1.0),
    })
}

/// `|LHS - RHS| / max(1, |LHS|)` for a named transformation.
pub fn transform_residual(
    name: Transform,
    params: &[ComplexScalar],
    q: QBase,
    policy: &TruncationPolicy,
) -> Result<f64> {
    transform_sides(name, params, q, policy).map(|s| s.residual())
}
