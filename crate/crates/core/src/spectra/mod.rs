//! Real eigenpairs of symmetric tensors, found as critical points of the
//! potential on the unit sphere.
//!
//! [`find_eigenpairs`] seeds a deterministic covering of the sphere, refines
//! every start with a bordered Newton iteration on
//! `{grad P(x) - lambda x = 0, |x|^2 = 1}`, and reduces the converged points
//! sequentially (deduplication, antipode completion, classification). The
//! counting checks live in [`counting`], local classification in
//! [`classify`](mod@classify).

pub mod classify;
pub mod counting;
mod starts;

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symtensor::HomogeneousPolynomial;

pub use classify::{classify, multiplicity_one, CriticalClass, CriticalKind};
pub use counting::{
    bezout_bound, eigenspace_bound, euler_characteristic, index_sum_check, parity_check,
    table_compatibility,
};

/// Tri-state outcome of a check whose preconditions may not hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inapplicable,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inapplicable => "inapplicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Deterministic start points; `None` uses `max(200, 50 * N_R)`.
    pub starts: Option<usize>,
    /// Extra Gaussian starts drawn from `seed`.
    pub random_starts: usize,
    pub seed: u64,
    /// Residual tolerance `|grad P(v) - lambda v|`.
    pub tol: f64,
    /// Angular distance below which two unit eigenvectors are identified.
    pub dedup_tol: f64,
    pub max_iter: usize,
    /// Relative threshold on projected-Hessian eigenvalues.
    pub degeneracy_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            starts: None,
            random_starts: 0,
            seed: 0,
            tol: 1e-10,
            dedup_tol: 1e-6,
            max_iter: 100,
            degeneracy_tol: 1e-8,
        }
    }
}

/// Unit eigenvector with its eigenvalue and final residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigenpair {
    pub v: Vec<f64>,
    pub lambda: f64,
    pub residual: f64,
}

impl Eigenpair {
    /// Antipodal eigenpair `-v`, with `lambda` scaled by `(-1)^n`.
    pub fn antipode(&self, degree: u32) -> Eigenpair {
        let sign = if degree.is_multiple_of(2) { 1.0 } else { -1.0 };
        Eigenpair {
            v: self.v.iter().map(|x| -x).collect(),
            lambda: sign * self.lambda,
            residual: self.residual,
        }
    }

    /// Polar angle in `(-pi, pi]` for planar eigenvectors.
    pub fn angle(&self) -> f64 {
        polar_angle(&self.v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifiedEigenpair {
    #[serde(flatten)]
    pub pair: Eigenpair,
    pub multiplicity_one: Verdict,
    #[serde(flatten)]
    pub class: CriticalClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub dim: usize,
    pub degree: u32,
    pub eigenpairs: Vec<ClassifiedEigenpair>,
    /// Maximal finite number of real eigenspaces, `N_R`.
    pub bezout_bound: u64,
    pub real_count: usize,
    pub eigenspace_count: usize,
    pub parity: Verdict,
    pub index_sum: Option<i64>,
    pub chi: i64,
    pub index_sum_ok: Verdict,
    /// The critical set looks like a continuum; the point list is unreliable.
    pub degenerate_family: bool,
    pub starts: usize,
    pub converged_starts: usize,
}

impl SpectrumReport {
    /// Builds a report around an explicit point list and fills in the
    /// counting diagnostics.
    pub fn from_points(
        dim: usize,
        degree: u32,
        eigenpairs: Vec<ClassifiedEigenpair>,
        degenerate_family: bool,
    ) -> Result<Self> {
        let bound = eigenspace_bound(degree.saturating_sub(1), dim as u32)?;
        let eigenspace_count = count_eigenspaces(&eigenpairs, 1e-6);
        let mut report = SpectrumReport {
            dim,
            degree,
            real_count: eigenpairs.len(),
            eigenpairs,
            bezout_bound: bound,
            eigenspace_count,
            parity: Verdict::Inapplicable,
            index_sum: None,
            chi: euler_characteristic(dim),
            index_sum_ok: Verdict::Inapplicable,
            degenerate_family,
            starts: 0,
            converged_starts: 0,
        };
        report.index_sum = report.index_sum_value();
        report.index_sum_ok = index_sum_check(&report, dim);
        report.parity = parity_check(&report, degree.saturating_sub(1), dim as u32);
        Ok(report)
    }

    fn index_sum_value(&self) -> Option<i64> {
        if self.degenerate_family {
            return None;
        }
        self.eigenpairs
            .iter()
            .map(|e| e.class.ph_index.map(i64::from))
            .sum()
    }

    pub fn count_kind(&self, pred: impl Fn(CriticalKind) -> bool) -> usize {
        self.eigenpairs
            .iter()
            .filter(|e| pred(e.class.kind))
            .count()
    }
}

pub(crate) fn polar_angle(v: &[f64]) -> f64 {
    let a = v[1].atan2(v[0]);
    // atan2 returns -pi for (-1, -0.0)
    if a <= -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        a
    }
}

/// Angle between two unit vectors, accurate for nearly parallel inputs.
pub fn angular_distance(a: &[f64], b: &[f64]) -> f64 {
    let chord = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt();
    2.0 * (0.5 * chord).min(1.0).asin()
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Residual `|grad P(v) - lambda v|` and `lambda = v . grad P(v)` at a unit `v`.
fn residual_at(p: &HomogeneousPolynomial, v: &[f64]) -> (f64, f64) {
    let g = p.gradient_unchecked(v);
    let lambda = dot(v, &g);
    let r = g
        .iter()
        .zip(v)
        .map(|(gi, vi)| (gi - lambda * vi).powi(2))
        .sum::<f64>()
        .sqrt();
    (r, lambda)
}

const MAX_STEP: f64 = 0.5;
const POLISH_STEPS: usize = 3;

/// Refines `x0` to a nearby unit eigenvector with Newton's method on the
/// Lagrange system. Returns `None` if the residual does not drop below
/// `config.tol` within `config.max_iter` iterations.
pub fn refine(
    p: &HomogeneousPolynomial,
    x0: &[f64],
    config: &SolverConfig,
) -> Result<Option<Eigenpair>> {
    let m = p.dim();
    if x0.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: x0.len(),
        });
    }
    let mut x = x0.to_vec();
    if normalize(&mut x) == 0.0 || x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "refine needs a nonzero start".into(),
        ));
    }

    let (mut res, mut lambda) = residual_at(p, &x);
    let mut best: Option<Eigenpair> = None;
    let mut polish = 0;
    for _ in 0..=config.max_iter {
        if res < config.tol {
            let improved = best.as_ref().is_none_or(|b| res < b.residual);
            if improved {
                best = Some(Eigenpair {
                    v: x.clone(),
                    lambda,
                    residual: res,
                });
            }
            if res == 0.0 || !improved || polish == POLISH_STEPS {
                break;
            }
            polish += 1;
        }
        newton_step(p, &mut x, lambda);
        let (r, l) = residual_at(p, &x);
        res = r;
        lambda = l;
    }
    Ok(best)
}

fn newton_step(p: &HomogeneousPolynomial, x: &mut [f64], lambda: f64) {
    let m = x.len();
    let g = p.gradient_unchecked(x);
    let h = p.hessian_unchecked(x);

    let mut jac = DMatrix::<f64>::zeros(m + 1, m + 1);
    let mut rhs = DVector::<f64>::zeros(m + 1);
    for i in 0..m {
        for j in 0..m {
            jac[(i, j)] = h[(i, j)];
        }
        jac[(i, i)] -= lambda;
        jac[(i, m)] = -x[i];
        jac[(m, i)] = x[i];
        rhs[i] = -(g[i] - lambda * x[i]);
    }
    rhs[m] = -0.5 * (dot(x, x) - 1.0);

    let step = jac
        .lu()
        .solve(&rhs)
        .filter(|s| s.iter().all(|v| v.is_finite()));
    match step {
        Some(step) => {
            let norm = step.rows(0, m).norm();
            let scale = if norm > MAX_STEP {
                MAX_STEP / norm
            } else {
                1.0
            };
            for i in 0..m {
                x[i] += scale * step[i];
            }
        }
        None => {
            // singular bordered Jacobian: projected gradient step
            let hnorm = h.amax().max(f64::MIN_POSITIVE);
            for i in 0..m {
                x[i] += 0.5 / hnorm * (g[i] - lambda * x[i]);
            }
        }
    }
    normalize(x);
}

fn sort_key_cmp(a: &[f64], b: &[f64]) -> Ordering {
    if a.len() == 2 {
        return polar_angle(a).total_cmp(&polar_angle(b));
    }
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Number of lines `Rv` among the points, matching `v` with `-v`.
pub(crate) fn count_eigenspaces(points: &[ClassifiedEigenpair], tol: f64) -> usize {
    let mut lines: Vec<&[f64]> = Vec::new();
    for e in points {
        let v = e.pair.v.as_slice();
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        let known = lines
            .iter()
            .any(|l| angular_distance(l, v) < tol || angular_distance(l, &neg) < tol);
        if !known {
            lines.push(v);
        }
    }
    lines.len()
}

/// All real unit eigenpairs of `p`, deduplicated, classified and checked
/// against the counting theorems.
pub fn find_eigenpairs(p: &HomogeneousPolynomial, config: &SolverConfig) -> Result<SpectrumReport> {
    let m = p.dim();
    let n = p.degree();
    if m < 2 {
        return Err(Error::InvalidArgument(
            "eigenpair search needs dimension >= 2".into(),
        ));
    }
    let bound = eigenspace_bound(n - 1, m as u32).unwrap_or(u64::MAX);
    let count = config.starts.unwrap_or_else(|| {
        let scaled = bound.saturating_mul(50).min(20_000) as usize;
        scaled.max(200)
    });
    let mut start_points = starts::covering(m, count);
    start_points.extend(starts::random(m, config.random_starts, config.seed));

    let refined: Vec<Option<Eigenpair>> = start_points
        .par_iter()
        .map(|x0| refine(p, x0, config).ok().flatten())
        .collect();
    let converged_starts = refined.iter().filter(|r| r.is_some()).count();
    if converged_starts == 0 {
        return Err(Error::NoConvergence {
            starts: start_points.len(),
        });
    }

    let mut distinct: Vec<Eigenpair> = Vec::new();
    let push_unique = |e: Eigenpair, distinct: &mut Vec<Eigenpair>| {
        if !distinct
            .iter()
            .any(|d| angular_distance(&d.v, &e.v) < config.dedup_tol)
        {
            distinct.push(e);
        }
    };
    for e in refined.into_iter().flatten() {
        push_unique(e, &mut distinct);
    }
    for k in 0..distinct.len() {
        let anti = distinct[k].antipode(n);
        push_unique(anti, &mut distinct);
    }

    let degenerate_family = (distinct.len() as u64) > bound.saturating_mul(2);

    let mut points: Vec<ClassifiedEigenpair> = distinct
        .into_iter()
        .map(|pair| {
            let class = classify(p, &pair, config.degeneracy_tol);
            let multiplicity_one = multiplicity_one(p, &pair);
            ClassifiedEigenpair {
                pair,
                multiplicity_one,
                class,
            }
        })
        .collect();
    points.sort_by(|a, b| sort_key_cmp(&a.pair.v, &b.pair.v));

    let mut report = SpectrumReport::from_points(m, n, points, degenerate_family)?;
    report.starts = start_points.len();
    report.converged_starts = converged_starts;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symtensor::Monomial;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

    fn quartic(a: f64, b: f64, c2: f64) -> HomogeneousPolynomial {
        HomogeneousPolynomial::from_terms(
            2,
            4,
            [
                (Monomial::new(vec![4, 0]), a),
                (Monomial::new(vec![0, 4]), b),
                (Monomial::new(vec![2, 2]), c2),
            ],
        )
        .unwrap()
    }

    fn vsym(beta: f64) -> HomogeneousPolynomial {
        quartic(1.0, 1.0, 2.0 + beta)
    }

    fn half_diag(a: f64, b: f64) -> HomogeneousPolynomial {
        HomogeneousPolynomial::from_terms(
            2,
            2,
            [
                (Monomial::new(vec![2, 0]), 0.5 * a),
                (Monomial::new(vec![0, 2]), 0.5 * b),
            ],
        )
        .unwrap()
    }

    #[test]
    fn vsym_has_eight_points_on_the_quarter_grid() {
        let report = find_eigenpairs(&vsym(1.0), &SolverConfig::default()).unwrap();
        assert!(!report.degenerate_family);
        assert_eq!(report.real_count, 8);
        assert_eq!(report.eigenspace_count, 4);
        for (k, e) in report.eigenpairs.iter().enumerate() {
            let expected = -3.0 * FRAC_PI_4 + k as f64 * FRAC_PI_4;
            assert!((e.pair.angle() - expected).abs() < 1e-8);
            let lam = if k % 2 == 1 { 4.0 } else { 5.0 };
            assert_relative_eq!(e.pair.lambda, lam, epsilon = 1e-9);
        }
        assert_eq!(report.parity, Verdict::Pass);
        assert_eq!(report.index_sum, Some(0));
        assert_eq!(report.index_sum_ok, Verdict::Pass);
    }

    #[test]
    fn quadratic_reduces_to_matrix_eigenvectors() {
        let report = find_eigenpairs(&half_diag(1.0, 2.0), &SolverConfig::default()).unwrap();
        assert_eq!(report.real_count, 4);
        for e in &report.eigenpairs {
            let v = &e.pair.v;
            if v[0].abs() > 0.5 {
                assert_relative_eq!(e.pair.lambda, 1.0, epsilon = 1e-12);
                assert!(v[1].abs() < 1e-12);
            } else {
                assert_relative_eq!(e.pair.lambda, 2.0, epsilon = 1e-12);
                assert!(v[0].abs() < 1e-12);
            }
        }
        assert_eq!(report.parity, Verdict::Inapplicable);
    }

    #[test]
    fn lower_symmetry_middle_region_has_only_axes() {
        let report = find_eigenpairs(&quartic(1.0, 0.25, 1.0), &SolverConfig::default()).unwrap();
        assert_eq!(report.real_count, 4);
        for e in &report.eigenpairs {
            assert!(e.pair.v.iter().any(|c| c.abs() < 1e-12));
        }
        assert_eq!(report.eigenspace_count, 2);
        assert_eq!(report.parity, Verdict::Pass);
    }

    #[test]
    fn rotationally_invariant_quartic_is_degenerate() {
        let report = find_eigenpairs(&vsym(0.0), &SolverConfig::default()).unwrap();
        assert!(report.degenerate_family);
        assert_eq!(report.parity, Verdict::Inapplicable);
        assert_eq!(report.index_sum_ok, Verdict::Inapplicable);
    }

    #[test]
    fn refine_examples() {
        let cfg = SolverConfig::default();
        let e = refine(&vsym(1.0), &[0.9999, 0.0141], &cfg)
            .unwrap()
            .unwrap();
        assert!(angular_distance(&e.v, &[1.0, 0.0]) < 1e-12);
        assert_relative_eq!(e.lambda, 4.0, epsilon = 1e-12);

        let e = refine(&half_diag(1.0, 2.0), &[1.0, 1.0], &cfg)
            .unwrap()
            .unwrap();
        let on_axis = e.v.iter().filter(|c| c.abs() < 1e-12).count() == 1;
        assert!(on_axis, "{:?}", e.v);

        let e = refine(&vsym(1.0), &[FRAC_1_SQRT_2, FRAC_1_SQRT_2], &cfg)
            .unwrap()
            .unwrap();
        assert!(angular_distance(&e.v, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]) < 1e-15);
        assert!(e.residual < 1e-14);

        assert!(refine(&vsym(1.0), &[0.0, 0.0], &cfg).is_err());
        assert!(refine(&vsym(1.0), &[1.0], &cfg).is_err());
    }

    #[test]
    fn refine_gives_up_on_tiny_budget() {
        let cfg = SolverConfig {
            max_iter: 0,
            ..SolverConfig::default()
        };
        assert!(refine(&vsym(1.0), &[1.0, 0.3], &cfg).unwrap().is_none());
    }

    #[test]
    fn odd_degree_antipodes_flip_eigenvalue() {
        // x^3 + y^3 - 3 x y^2 style cubic
        let p = HomogeneousPolynomial::from_terms(
            2,
            3,
            [
                (Monomial::new(vec![3, 0]), 1.0),
                (Monomial::new(vec![1, 2]), -3.0),
                (Monomial::new(vec![0, 3]), 0.5),
            ],
        )
        .unwrap();
        let report = find_eigenpairs(&p, &SolverConfig::default()).unwrap();
        assert_eq!(report.real_count % 2, 0);
        for e in &report.eigenpairs {
            let anti = e.pair.antipode(3);
            let partner = report
                .eigenpairs
                .iter()
                .find(|o| angular_distance(&o.pair.v, &anti.v) < 1e-8)
                .expect("antipode present");
            assert_relative_eq!(partner.pair.lambda, -e.pair.lambda, epsilon = 1e-10);
        }
    }

    #[test]
    fn angle_convention() {
        assert_eq!(polar_angle(&[-1.0, -0.0]), PI);
        assert_eq!(polar_angle(&[-1.0, 0.0]), PI);
        assert!(angular_distance(&[1.0, 0.0], &[1.0, 1e-13]) > 0.0);
    }
}
