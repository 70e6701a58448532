//! The named-identity verification suite.
//!
//! Every check produces entries carrying a residual and the tolerance it is
//! held to. Inputs outside an identity's region (or on a pole lattice) are
//! listed as skipped; numerical failures become failing entries.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qultra::awoperator::dq_action_residual;
use qultra::hyperseries::{sum_psi, transform_sides};
use qultra::qcore::{int_pow, real, SpectralPoint};
use qultra::quadrature::{
    bilateral_delta_integral, bilateral_delta_rhs, kernel_integral, kernel_integral_rhs, laurent_coefficients,
    orthogonality_entry, orthogonality_norm, shifted_orthogonality_pair, shifted_orthogonality_rhs, WeightParams,
};
use qultra::ultraspherical::{
    bilateral_cn, bilateral_cn_via_psi, classical_cn, constant_term, generating_rhs, generating_sum,
    linearization_residual, recurrence_residual, special_value_c0, special_value_cm1, symmetry_residual, Kind,
    UltraParams,
};
use qultra::{closed_form, ClosedForm, ComplexScalar, Error, Result, Transform};

use crate::config::{SamplePoint, SuiteConfig};
use crate::report::{Entry, Skipped, VerificationReport};

/// Residual and effort of one check.
#[derive(Debug, Clone, Copy, Default)]
pub struct Check {
    pub residual: f64,
    pub terms: u64,
    pub nodes: u64,
}

impl Check {
    fn new(residual: f64) -> Self {
        Check { residual, terms: 0, nodes: 0 }
    }

    fn terms(mut self, terms: usize) -> Self {
        self.terms = terms as u64;
        self
    }

    fn nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes as u64;
        self
    }

    /// Worst-case merge of a sweep.
    fn absorb(&mut self, other: Check) {
        self.residual = self.residual.max(other.residual);
        self.terms += other.terms;
        self.nodes += other.nodes;
    }
}

fn rel(a: ComplexScalar, b: ComplexScalar) -> f64 {
    (a - b).norm() / b.norm()
}

struct Ctx<'a> {
    cfg: &'a SuiteConfig,
    entries: Vec<Entry>,
    skipped: Vec<Skipped>,
    errors: Vec<String>,
}

impl<'a> Ctx<'a> {
    fn record(&mut self, name: &str, params: &[(&str, f64)], tolerance: f64, check: impl FnOnce() -> Result<Check>) {
        let params: BTreeMap<String, f64> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        match check() {
            Ok(c) if c.residual.is_finite() => self.entries.push(Entry {
                identity_name: name.to_string(),
                params,
                residual: c.residual,
                tolerance,
                passed: c.residual <= tolerance,
                terms_used: c.terms,
                nodes_used: c.nodes,
            }),
            Ok(c) => self.fail(name, params, tolerance, format!("non-finite residual {}", c.residual)),
            Err(e @ (Error::Region(_) | Error::Domain(_) | Error::Pole { .. } | Error::SingularPoint(_))) => {
                let pole = matches!(e, Error::Pole { .. });
                self.skipped.push(Skipped { identity_name: name.to_string(), params, reason: e.to_string(), pole })
            }
            Err(e) => self.fail(name, params, tolerance, e.to_string()),
        }
    }

    fn fail(&mut self, name: &str, params: BTreeMap<String, f64>, tolerance: f64, why: String) {
        self.errors.push(format!("{name}: {why}"));
        self.entries.push(Entry {
            identity_name: name.to_string(),
            params,
            residual: f64::MAX,
            tolerance,
            passed: false,
            terms_used: 0,
            nodes_used: 0,
        });
    }

    fn q(&self) -> qultra::QBase {
        self.cfg.base()
    }

    fn params(&self) -> UltraParams {
        UltraParams::new(real(self.cfg.beta), real(self.cfg.gamma), self.q())
    }

    /// The configured sweep, or the single index from the config.
    fn sweep(&self, range: std::ops::RangeInclusive<i64>) -> Vec<i64> {
        match self.cfg.n {
            Some(n) => vec![n],
            None => range.collect(),
        }
    }

    fn pair_sweep(&self, range: std::ops::RangeInclusive<i64>) -> Vec<(i64, i64)> {
        match (self.cfg.m, self.cfg.n) {
            (Some(m), Some(n)) => vec![(m, n)],
            (None, Some(n)) => range.map(|m| (m, n)).collect(),
            (Some(m), None) => range.map(|n| (m, n)).collect(),
            (None, None) => range.clone().flat_map(|m| range.clone().map(move |n| (m, n))).collect(),
        }
    }

    fn base_params(&self, extra: &[(&'static str, f64)]) -> Vec<(&'static str, f64)> {
        let mut v = vec![("q", self.cfg.q), ("beta", self.cfg.beta), ("gamma", self.cfg.gamma)];
        v.extend_from_slice(extra);
        v
    }

    fn point_params(&self, p: &SamplePoint, sweep: &[i64], extra: &[(&'static str, f64)]) -> Vec<(&'static str, f64)> {
        let mut v = self.base_params(extra);
        v.extend(p.params());
        v.push(("n_min", *sweep.iter().min().unwrap() as f64));
        v.push(("n_max", *sweep.iter().max().unwrap() as f64));
        v
    }
}

fn sample(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> ComplexScalar {
    Complex64::from_polar(rng.gen_range(lo..hi), rng.gen_range(-PI..PI))
}

fn complex_params(names: &[&'static str], values: &[ComplexScalar]) -> Vec<(&'static str, f64)> {
    let mut v = Vec::new();
    for (i, c) in values.iter().enumerate() {
        // names come in re/im pairs
        v.push((names[2 * i], c.re));
        v.push((names[2 * i + 1], c.im));
    }
    v
}

fn ramanujan(ctx: &mut Ctx) {
    let q = ctx.q();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
    for i in 0..ctx.cfg.random_points {
        let a = sample(&mut rng, 0.6, 1.6);
        let b = sample(&mut rng, 0.05, 0.45);
        let inner = (b / a).norm();
        let z = sample(&mut rng, inner + 0.05, 0.9);
        let mut params = vec![("sample", i as f64), ("seed", ctx.cfg.seed as f64), ("q", ctx.cfg.q)];
        params.extend(complex_params(&["a_re", "a_im", "b_re", "b_im", "z_re", "z_im"], &[a, b, z]));
        ctx.record("ramanujan_1psi1", &params, 1e-9, || {
            let spec = ClosedForm::Ramanujan1Psi1.series(&[a, b, z], q)?;
            let lhs = sum_psi(&spec, &ctx_policy(ctx.cfg))?;
            let rhs = closed_form(ClosedForm::Ramanujan1Psi1, &[a, b, z], q)?;
            Ok(Check::new(rel(lhs.value, rhs)).terms(lhs.terms))
        });
    }
}

fn ctx_policy(cfg: &SuiteConfig) -> qultra::TruncationPolicy {
    cfg.policy
}

fn transforms(ctx: &mut Ctx) {
    let q = ctx.q();
    let policy = ctx.cfg.policy;
    // each transformation draws from its own stream so that the point sets
    // do not depend on how many points the others use
    for (offset, t) in Transform::ALL.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed.wrapping_add(1 + offset as u64));
        for i in 0..ctx.cfg.transform_points {
            let values: Vec<ComplexScalar> = match t {
                Transform::Bailey2Psi2Single | Transform::Bailey2Psi2Iterated => {
                    let a = sample(&mut rng, 0.5, 1.0);
                    let b = sample(&mut rng, 0.5, 1.0);
                    let c = b * sample(&mut rng, 0.05, 0.6);
                    let d = a * sample(&mut rng, 0.05, 0.6);
                    let inner = (c * d / (a * b)).norm();
                    let z = sample(&mut rng, inner + 0.1, 0.85);
                    vec![a, b, c, d, z]
                }
                Transform::WellPoised6Psi8 => loop {
                    let a = sample(&mut rng, 0.2, 0.9);
                    let v: Vec<ComplexScalar> = (0..4).map(|_| sample(&mut rng, 0.4, 1.2)).collect();
                    let qv = q.value();
                    if (a * qv / (v[0] * v[1])).norm() <= 0.85 && (a * qv / (v[2] * v[3])).norm() <= 0.85 {
                        break vec![a, v[0], v[1], v[2], v[3]];
                    }
                },
            };
            let names: &[&'static str] = match t {
                Transform::WellPoised6Psi8 => {
                    &["a_re", "a_im", "c_re", "c_im", "d_re", "d_im", "e_re", "e_im", "f_re", "f_im"]
                }
                _ => &["a_re", "a_im", "b_re", "b_im", "c_re", "c_im", "d_re", "d_im", "z_re", "z_im"],
            };
            let mut params = vec![("sample", i as f64), ("seed", ctx.cfg.seed as f64), ("q", ctx.cfg.q)];
            params.extend(complex_params(names, &values));
            ctx.record(t.name(), &params, 1e-9, || {
                let s = transform_sides(t, &values, q, &policy)?;
                Ok(Check::new(s.residual()).terms(s.terms))
            });
        }
    }
}

fn closed_forms(ctx: &mut Ctx) {
    let q = ctx.q();
    let policy = ctx.cfg.policy;
    let (b, g) = (real(ctx.cfg.beta), real(ctx.cfg.gamma));
    let qv = q.value();
    let rq = q.sqrt();
    let cases: [(ClosedForm, Vec<ComplexScalar>); 4] = [
        (ClosedForm::QGauss, vec![b * b, b, qv * b]),
        (ClosedForm::QKummer2Psi2, vec![b, b * g, real(1.0) / g]),
        (ClosedForm::Bailey3Psi3A, vec![b * g, real(1.0) / g, rq]),
        // d = q would make the pair d, q²/d coincide, where the formula only
        // holds as a limit whose value depends on the direction of approach
        (ClosedForm::Bailey3Psi3B, vec![b * g, qv / g, rq]),
    ];
    for (form, values) in cases {
        let params = ctx.base_params(&[]);
        ctx.record(form.name(), &params, 1e-10, || {
            let spec = form.series(&values, q)?;
            let rhs = closed_form(form, &values, q)?;
            let (lhs, terms) = match spec.kind {
                qultra::SeriesKind::Unilateral => {
                    let s = qultra::hyperseries::sum_phi(&spec, &policy)?;
                    (s.value, s.terms)
                }
                qultra::SeriesKind::Bilateral => {
                    let s = sum_psi(&spec, &policy)?;
                    (s.value, s.terms)
                }
            };
            Ok(Check::new(rel(lhs, rhs)).terms(terms))
        });
    }
}

fn gamma_one(ctx: &mut Ctx) {
    let q = ctx.q();
    let params = UltraParams::classical(real(ctx.cfg.beta), q);
    let sweep = ctx.sweep(0..=8);
    for p in ctx.cfg.points.clone() {
        let pp = ctx.point_params(&p, &sweep, &[]);
        ctx.record("gamma_one_reduction", &pp, 1e-10, || {
            let mut c = Check::default();
            for &n in &sweep {
                let b = bilateral_cn(n, &p.point, &params, &ctx.cfg.policy)?;
                let cl = classical_cn(n, &p.point, params.beta, q)?;
                c.absorb(Check::new((b.value - cl).norm() / cl.norm().max(1.0)).terms(b.truncation_terms));
            }
            Ok(c)
        });
    }
}

fn psi_form(ctx: &mut Ctx) {
    let params = ctx.params();
    let sweep = ctx.sweep(-4..=4);
    for p in ctx.cfg.points.clone() {
        let pp = ctx.point_params(&p, &sweep, &[]);
        ctx.record("bilateral_cn_psi_form", &pp, 1e-10, || {
            let mut c = Check::default();
            for &n in &sweep {
                let direct = bilateral_cn(n, &p.point, &params, &ctx.cfg.policy)?;
                let psi = bilateral_cn_via_psi(n, &p.point, &params, &ctx.cfg.policy)?;
                c.absorb(Check::new((direct.value - psi).norm() / psi.norm().max(1.0)).terms(direct.truncation_terms));
            }
            Ok(c)
        });
    }
}

fn recurrences(ctx: &mut Ctx) {
    let params = ctx.params();
    let classical = UltraParams::classical(params.beta, params.q);
    let policy = ctx.cfg.policy;
    let bil = ctx.sweep(-6..=6);
    let cls = ctx.sweep(1..=8);
    for p in ctx.cfg.points.clone() {
        let pp = ctx.point_params(&p, &bil, &[]);
        ctx.record("bilateral_cn_recurrence", &pp, 1e-10, || {
            let mut c = Check::default();
            for &n in &bil {
                let terms = bilateral_cn(n, &p.point, &params, &policy)?.truncation_terms;
                c.absorb(Check::new(recurrence_residual(Kind::Bilateral, n, &p.point, &params, &policy)?).terms(terms));
            }
            Ok(c)
        });
        let pp = ctx.point_params(&p, &cls, &[]);
        ctx.record("classical_recurrence", &pp, 1e-12, || {
            let mut c = Check::default();
            for &n in &cls {
                c.absorb(Check::new(recurrence_residual(Kind::Classical, n, &p.point, &classical, &policy)?));
            }
            Ok(c)
        });
    }
}

fn generating(ctx: &mut Ctx) {
    let params = ctx.params();
    let policy = ctx.cfg.policy;
    let t = Complex64::new(ctx.cfg.t, ctx.cfg.t_im);
    for p in ctx.cfg.points.clone() {
        let mut pp = ctx.base_params(&[("t_re", ctx.cfg.t), ("t_im", ctx.cfg.t_im)]);
        pp.extend(p.params());
        ctx.record("bilateral_cn_generating_sum", &pp, 1e-8, || {
            let rhs = generating_rhs(Kind::Bilateral, t, &p.point, &params)?;
            let sum = generating_sum(t, &p.point, &params, &policy)?;
            Ok(Check::new(rel(sum.value, rhs)).terms(sum.terms))
        });
        let sweep = ctx.sweep(-4..=4);
        let pp = ctx.point_params(&p, &sweep, &[("t_re", ctx.cfg.t), ("t_im", ctx.cfg.t_im)]);
        ctx.record("bilateral_cn_generating_laurent", &pp, 1e-7, || {
            let coeffs = laurent_coefficients(|s| generating_rhs(Kind::Bilateral, s, &p.point, &params), t.norm(), &sweep, 1e-9)?;
            let mut c = Check::default().nodes(coeffs.samples);
            for (&n, coeff) in sweep.iter().zip(&coeffs.coefficients) {
                let v = bilateral_cn(n, &p.point, &params, &policy)?;
                c.absorb(Check::new((coeff - v.value).norm() / v.value.norm().max(1.0)).terms(v.truncation_terms));
            }
            Ok(c)
        });
    }
}

fn symmetry(ctx: &mut Ctx) {
    let params = ctx.params();
    let policy = ctx.cfg.policy;
    let sweep = ctx.sweep(-4..=4);
    for p in ctx.cfg.points.clone() {
        let pp = ctx.point_params(&p, &sweep, &[]);
        ctx.record("bilateral_cn_symmetry", &pp, 1e-10, || {
            let mut c = Check::default();
            for &n in &sweep {
                c.absorb(Check::new(symmetry_residual(n, &p.point, &params, &policy)?));
            }
            Ok(c)
        });
    }
}

fn constant_terms(ctx: &mut Ctx) {
    let params = ctx.params();
    let policy = ctx.cfg.policy;
    let sweep = ctx.sweep(-4..=4);
    let i = SpectralPoint::new(Complex64::new(0.0, 1.0)).expect("z = i");
    let pp = ctx.base_params(&[("n_min", sweep[0] as f64), ("n_max", *sweep.last().unwrap() as f64)]);
    ctx.record("bilateral_cn_constant_term", &pp, 1e-9, || {
        let mut c = Check::default();
        for &n in &sweep {
            let v = bilateral_cn(n, &i, &params, &policy)?;
            let ct = constant_term(n, &params)?;
            c.absorb(Check::new((v.value - ct).norm() / ct.norm().max(1.0)).terms(v.truncation_terms));
        }
        Ok(c)
    });
}

fn special_values(ctx: &mut Ctx) {
    let params = ctx.params();
    let policy = ctx.cfg.policy;
    let pp = ctx.base_params(&[]);
    ctx.record("bilateral_cn_special_c0", &pp, 1e-10, || {
        let (p, closed) = special_value_c0(&params)?;
        let v = bilateral_cn(0, &p, &params, &policy)?;
        Ok(Check::new(rel(v.value, closed)).terms(v.truncation_terms))
    });
    ctx.record("bilateral_cn_special_cm1", &pp, 1e-10, || {
        let (p, closed) = special_value_cm1(&params)?;
        let v = bilateral_cn(-1, &p, &params, &policy)?;
        Ok(Check::new(rel(v.value, closed)).terms(v.truncation_terms))
    });
}

fn dq_actions(ctx: &mut Ctx) {
    let params = ctx.params();
    let classical = UltraParams::classical(params.beta, params.q);
    let shifted = params.with_beta(real(ctx.cfg.dq_beta));
    let policy = ctx.cfg.policy;
    let cls = ctx.sweep(1..=6);
    let bil = ctx.sweep(-4..=4);
    for p in ctx.cfg.points.clone() {
        let pp = ctx.point_params(&p, &cls, &[]);
        ctx.record("classical_dq_action", &pp, 1e-10, || {
            let mut c = Check::default();
            for &n in &cls {
                c.absorb(Check::new(dq_action_residual(Kind::Classical, n, &p.point, &classical, &policy)?));
            }
            Ok(c)
        });
        let mut pp = vec![("q", ctx.cfg.q), ("beta", ctx.cfg.dq_beta), ("gamma", ctx.cfg.gamma)];
        pp.extend(p.params());
        pp.push(("n_min", bil[0] as f64));
        pp.push(("n_max", *bil.last().unwrap() as f64));
        ctx.record("bilateral_cn_dq_action", &pp, 1e-8, || {
            let mut c = Check::default();
            for &n in &bil {
                c.absorb(Check::new(dq_action_residual(Kind::Bilateral, n, &p.point, &shifted, &policy)?));
            }
            Ok(c)
        });
    }
}

fn linearization(ctx: &mut Ctx) {
    let q = ctx.q();
    let b = real(ctx.cfg.beta);
    let pairs = ctx.pair_sweep(0..=4);
    for p in ctx.cfg.points.clone() {
        let mut pp = vec![("q", ctx.cfg.q), ("beta", ctx.cfg.beta)];
        pp.extend(p.params());
        ctx.record("linearization", &pp, 1e-10, || {
            let mut c = Check::default();
            for &(m, n) in &pairs {
                c.absorb(Check::new(linearization_residual(m, n, &p.point, b, q)?));
            }
            Ok(c)
        });
    }
}

fn orthogonality(ctx: &mut Ctx) {
    let cfg = ctx.cfg;
    let pp = vec![("q", cfg.q), ("beta", cfg.beta), ("quad_tol", cfg.quad_tol)];
    let gram = (|| -> Result<(Vec<Vec<ComplexScalar>>, usize, WeightParams)> {
        let w = WeightParams::new(cfg.beta, cfg.base())?;
        let mut nodes = 0;
        let mut g = vec![vec![real(0.0); 7]; 7];
        for m in 0..7 {
            for n in 0..7 {
                let r = orthogonality_entry(m as i64, n as i64, &w, cfg.quad_tol)?;
                nodes += r.nodes_used;
                g[m][n] = r.value;
            }
        }
        Ok((g, nodes, w))
    })();
    let gram = match gram {
        Ok(g) => Ok(g),
        Err(e) => Err(e),
    };
    let g2 = gram.clone();
    ctx.record("classical_orthogonality_off_diagonal", &pp, 1e-9, || {
        let (g, nodes, _) = g2?;
        let scale = g[0][0].norm();
        let mut worst: f64 = 0.0;
        for m in 0..7 {
            for n in 0..7 {
                if m != n {
                    worst = worst.max(g[m][n].norm() / scale);
                }
            }
        }
        Ok(Check::new(worst).nodes(nodes))
    });
    ctx.record("classical_orthogonality_diagonal", &pp, 1e-8, || {
        let (g, nodes, w) = gram?;
        let mut worst: f64 = 0.0;
        for n in 0..7 {
            worst = worst.max(rel(g[n][n], orthogonality_norm(n as i64, &w)?));
        }
        Ok(Check::new(worst).nodes(nodes))
    });
}

fn kernel(ctx: &mut Ctx) {
    let cfg = ctx.cfg;
    let pp = vec![("q", cfg.q), ("beta", cfg.beta), ("t1", cfg.t1), ("t2", cfg.t2)];
    ctx.record("kernel_integral", &pp, 1e-8, || {
        let w = WeightParams::new(cfg.beta, cfg.base())?;
        let (t1, t2) = (real(cfg.t1), real(cfg.t2));
        let lhs = kernel_integral(t1, t2, &w, cfg.quad_tol)?;
        let rhs = kernel_integral_rhs(t1, t2, &w, &cfg.policy)?;
        Ok(Check::new(rel(lhs.value, rhs)).nodes(lhs.nodes_used))
    });
}

fn delta_integral(ctx: &mut Ctx) {
    let cfg = ctx.cfg;
    let sweep = ctx.sweep(-3..=3);
    let pp = vec![("q", cfg.q), ("beta", cfg.beta), ("n_min", sweep[0] as f64), ("n_max", *sweep.last().unwrap() as f64)];
    ctx.record("bilateral_delta_integral", &pp, 1e-7, || {
        let rhs = bilateral_delta_rhs(cfg.beta, cfg.base())?;
        let mut c = Check::default();
        for &n in &sweep {
            let r = bilateral_delta_integral(n, cfg.beta, cfg.base(), cfg.quad_tol, &cfg.policy)?;
            let expected = if n == 0 { 1.0 } else { 0.0 };
            c.absorb(Check::new((r.value / rhs - expected).norm()).nodes(r.nodes_used));
        }
        Ok(c)
    });
}

fn shifted(ctx: &mut Ctx) {
    let cfg = ctx.cfg;
    let params = ctx.params();
    let pairs = ctx.pair_sweep(-2..=2);
    let pp = ctx.base_params(&[("quad_tol", cfg.quad_tol)]);
    let results = (|| -> Result<Vec<(i64, i64, qultra::quadrature::ShiftedPair)>> {
        pairs
            .iter()
            .map(|&(m, n)| Ok((m, n, shifted_orthogonality_pair(m, n, &params, cfg.quad_tol, &cfg.policy)?)))
            .collect()
    })();
    let r2 = results.clone();
    ctx.record("bilateral_cn_shifted_orthogonality_diagonal", &pp, 1e-6, || {
        let mut c = Check::default();
        for (m, n, s) in r2? {
            if m == n {
                c.absorb(Check::new((s.lhs / s.rhs - 1.0).norm()).nodes(s.nodes_used).terms(s.max_shift as usize));
            }
        }
        Ok(c)
    });
    ctx.record("bilateral_cn_shifted_orthogonality_off_diagonal", &pp, 1e-6, || {
        let scale = shifted_orthogonality_rhs(0, &params, &cfg.policy)?.norm();
        let mut c = Check::default();
        for (m, n, s) in results? {
            if m != n {
                c.absorb(Check::new(s.lhs.norm() / scale).nodes(s.nodes_used).terms(s.max_shift as usize));
            }
        }
        Ok(c)
    });
    let sweep = ctx.sweep(-2..=2);
    ctx.record("bilateral_cn_shifted_orthogonality_scaling", &pp, 1e-14, || {
        let base = shifted_orthogonality_rhs(0, &params, &cfg.policy)?;
        let ratio = params.beta * params.beta * params.gamma / params.q.value();
        let mut c = Check::default();
        for &n in &sweep {
            let expected = int_pow(ratio, n);
            c.absorb(Check::new(rel(shifted_orthogonality_rhs(n, &params, &cfg.policy)? / base, expected)));
        }
        Ok(c)
    });
}

type Group = fn(&mut Ctx);

/// Identity names and the group that produces them.
const GROUPS: &[(&[&str], Group)] = &[
    (&["ramanujan_1psi1"], ramanujan),
    (&["bailey_2psi2_iterated", "bailey_2psi2_single", "wellpoised_6psi8"], transforms),
    (&["bailey_3psi3_a", "bailey_3psi3_b", "q_gauss", "q_kummer_2psi2"], closed_forms),
    (&["gamma_one_reduction"], gamma_one),
    (&["bilateral_cn_psi_form"], psi_form),
    (&["bilateral_cn_recurrence", "classical_recurrence"], recurrences),
    (&["bilateral_cn_generating_laurent", "bilateral_cn_generating_sum"], generating),
    (&["bilateral_cn_symmetry"], symmetry),
    (&["bilateral_cn_constant_term"], constant_terms),
    (&["bilateral_cn_special_c0", "bilateral_cn_special_cm1"], special_values),
    (&["bilateral_cn_dq_action", "classical_dq_action"], dq_actions),
    (&["linearization"], linearization),
    (&["classical_orthogonality_diagonal", "classical_orthogonality_off_diagonal"], orthogonality),
    (&["kernel_integral"], kernel),
    (&["bilateral_delta_integral"], delta_integral),
    (
        &[
            "bilateral_cn_shifted_orthogonality_diagonal",
            "bilateral_cn_shifted_orthogonality_off_diagonal",
            "bilateral_cn_shifted_orthogonality_scaling",
        ],
        shifted,
    ),
];

/// All identity names, sorted.
pub fn identity_names() -> Vec<&'static str> {
    let mut v: Vec<&str> = GROUPS.iter().flat_map(|(names, _)| names.iter().copied()).collect();
    v.sort_unstable();
    v
}

fn run_groups(cfg: &SuiteConfig, only: Option<&str>) -> VerificationReport {
    let mut ctx = Ctx { cfg, entries: Vec::new(), skipped: Vec::new(), errors: Vec::new() };
    for (names, group) in GROUPS {
        if only.map_or(true, |o| names.contains(&o)) {
            group(&mut ctx);
        }
    }
    if let Some(o) = only {
        ctx.entries.retain(|e| e.identity_name == o);
        ctx.skipped.retain(|s| s.identity_name == o);
        ctx.errors.retain(|e| e.starts_with(&format!("{o}:")));
    }
    VerificationReport::new(ctx.entries, ctx.skipped, ctx.errors)
}

/// Runs every registered identity.
pub fn run_suite(cfg: &SuiteConfig) -> VerificationReport {
    run_groups(cfg, None)
}

/// Runs one named identity.
pub fn run_identity(name: &str, cfg: &SuiteConfig) -> Result<VerificationReport> {
    if !identity_names().contains(&name) {
        return Err(Error::Config(format!("unknown identity '{name}'; known: {}", identity_names().join(", "))));
    }
    Ok(run_groups(cfg, Some(name)))
}
