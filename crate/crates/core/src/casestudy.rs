//! The two planar quartic families with closed-form mode structure.
//!
//! * higher symmetry: `V = (x^2 + y^2)^2 + beta x^2 y^2`, admissible for
//!   `beta > -4`, `beta != 0`; restricted to the unit circle
//!   `W = (8 - beta cos 4t + beta) / 8`.
//! * lower symmetry: `V = x^4 + alpha y^4 + 2 beta x^2 y^2`, admissible for
//!   `0 < alpha < 1`, `beta > -sqrt(alpha)`; restricted to the unit circle
//!   `W = cos^4 t + alpha sin^4 t + 2 beta sin^2 t cos^2 t`.
//!
//! Angles live in `(-pi, pi]`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{SecondOrderSystem, State};
use crate::error::{Error, Result};
use crate::spectra::{find_eigenpairs, CriticalKind, SolverConfig};
use crate::symtensor::{HomogeneousPolynomial, Monomial};

/// Second derivatives below this magnitude mark a degenerate angle.
const DEGENERATE_D2W: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum QuarticFamily {
    #[serde(rename = "higher")]
    HigherSymmetry { beta: f64 },
    #[serde(rename = "lower")]
    LowerSymmetry { alpha: f64, beta: f64 },
}

impl fmt::Display for QuarticFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuarticFamily::HigherSymmetry { beta } => write!(f, "higher symmetry (beta = {beta})"),
            QuarticFamily::LowerSymmetry { alpha, beta } => {
                write!(f, "lower symmetry (alpha = {alpha}, beta = {beta})")
            }
        }
    }
}

impl QuarticFamily {
    pub fn check_admissible(&self) -> Result<()> {
        match *self {
            QuarticFamily::HigherSymmetry { beta } => {
                if !(beta > -4.0) {
                    return Err(Error::Inadmissible(format!(
                        "higher symmetry needs beta > -4 for a minimum at the origin, got beta = {beta}"
                    )));
                }
                if beta == 0.0 {
                    return Err(Error::Inadmissible(
                        "beta = 0 is rotationally invariant: every direction is a mode".into(),
                    ));
                }
            }
            QuarticFamily::LowerSymmetry { alpha, beta } => {
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(Error::Inadmissible(format!(
                        "lower symmetry needs 0 < alpha < 1, got alpha = {alpha}"
                    )));
                }
                if !(beta > -alpha.sqrt()) {
                    return Err(Error::Inadmissible(format!(
                        "stability of the origin requires beta > -sqrt(alpha) = {}, got beta = {beta}",
                        -alpha.sqrt()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Restricted potential `W(theta)` from its closed form.
    pub fn w(&self, theta: f64) -> f64 {
        match *self {
            QuarticFamily::HigherSymmetry { beta } => {
                (8.0 - beta * (4.0 * theta).cos() + beta) / 8.0
            }
            QuarticFamily::LowerSymmetry { alpha, beta } => {
                let (s, c) = theta.sin_cos();
                let (s2, c2) = (s * s, c * c);
                c2 * c2 + alpha * s2 * s2 + 2.0 * beta * s2 * c2
            }
        }
    }

    pub fn dw(&self, theta: f64) -> f64 {
        match *self {
            QuarticFamily::HigherSymmetry { beta } => 0.5 * beta * (4.0 * theta).sin(),
            QuarticFamily::LowerSymmetry { alpha, beta } => {
                -(1.0 - alpha + (1.0 + alpha - 2.0 * beta) * (2.0 * theta).cos())
                    * (2.0 * theta).sin()
            }
        }
    }

    pub fn d2w(&self, theta: f64) -> f64 {
        match *self {
            QuarticFamily::HigherSymmetry { beta } => 2.0 * beta * (4.0 * theta).cos(),
            QuarticFamily::LowerSymmetry { alpha, beta } => {
                -2.0 * ((1.0 - alpha) * (2.0 * theta).cos()
                    + (1.0 + alpha - 2.0 * beta) * (4.0 * theta).cos())
            }
        }
    }

    /// `cos(2 theta*)` for the off-axis lower-symmetry pair, when it exists.
    fn off_axis_cos2(alpha: f64, beta: f64) -> Option<f64> {
        let denom = 1.0 + alpha - 2.0 * beta;
        if denom == 0.0 {
            return None;
        }
        let c = (alpha - 1.0) / denom;
        (c.abs() < 1.0).then_some(c)
    }
}

pub fn potential_of(family: &QuarticFamily) -> Result<HomogeneousPolynomial> {
    family.check_admissible()?;
    let (a4, b4, c22) = match *family {
        QuarticFamily::HigherSymmetry { beta } => (1.0, 1.0, 2.0 + beta),
        QuarticFamily::LowerSymmetry { alpha, beta } => (1.0, alpha, 2.0 * beta),
    };
    HomogeneousPolynomial::from_terms(
        2,
        4,
        [
            (Monomial::new(vec![4, 0]), a4),
            (Monomial::new(vec![0, 4]), b4),
            (Monomial::new(vec![2, 2]), c22),
        ],
    )
}

/// Uniform grid `theta_j = -pi + (j + 1) 2 pi / samples`, ending at `pi`.
pub fn theta_grid(samples: usize) -> Vec<f64> {
    (0..samples)
        .map(|j| -PI + (j + 1) as f64 * 2.0 * PI / samples as f64)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngularProfile {
    pub thetas: Vec<f64>,
    pub values: Vec<f64>,
}

pub const MIN_PROFILE_SAMPLES: usize = 8;

/// Samples `W` on a uniform grid and cross-checks each value against the
/// potential evaluated on the unit circle.
pub fn restrict(family: &QuarticFamily, samples: usize) -> Result<AngularProfile> {
    if samples < MIN_PROFILE_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_PROFILE_SAMPLES} samples, got {samples}"
        )));
    }
    let p = potential_of(family)?;
    let thetas = theta_grid(samples);
    let mut values = Vec::with_capacity(samples);
    for &t in &thetas {
        let w = family.w(t);
        let direct = p.evaluate(&[t.cos(), t.sin()])?;
        if (w - direct).abs() > 1e-12 * w.abs().max(1.0) {
            return Err(Error::Mismatch(format!(
                "closed-form W({t}) = {w} but the potential gives {direct}"
            )));
        }
        values.push(w);
    }
    Ok(AngularProfile { thetas, values })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Stable,
    Unstable,
    Degenerate,
}

impl ModeKind {
    fn from_d2w(d2w: f64) -> Self {
        if d2w > DEGENERATE_D2W {
            ModeKind::Stable
        } else if d2w < -DEGENERATE_D2W {
            ModeKind::Unstable
        } else {
            ModeKind::Degenerate
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModeKind::Stable => "stable",
            ModeKind::Unstable => "unstable",
            ModeKind::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeAngle {
    pub theta: f64,
    /// `d^2 W / d theta^2` from the closed-form expression for this angle.
    pub d2w: f64,
    pub kind: ModeKind,
    /// Radial coefficient: `V(r cos theta, r sin theta) = c_theta r^4`.
    pub c_theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeSet {
    pub modes: Vec<ModeAngle>,
}

impl ModeSet {
    pub fn count(&self) -> usize {
        self.modes.len()
    }

    pub fn angles(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.theta).collect()
    }

    pub fn has_degenerate(&self) -> bool {
        self.modes.iter().any(|m| m.kind == ModeKind::Degenerate)
    }
}

/// Critical angles of `W` with their closed-form curvature, sorted by angle.
pub fn critical_angles(family: &QuarticFamily) -> Result<ModeSet> {
    family.check_admissible()?;
    let mut raw: Vec<(f64, f64)> = match *family {
        QuarticFamily::HigherSymmetry { beta } => (-3..=4)
            .map(|k| {
                let theta = k as f64 * FRAC_PI_4;
                (theta, 2.0 * beta * (4.0 * theta).cos())
            })
            .collect(),
        QuarticFamily::LowerSymmetry { alpha, beta } => {
            let on_x = -4.0 * (1.0 - beta);
            let on_y = -4.0 * (alpha - beta);
            let mut v = vec![
                (0.0, on_x),
                (PI, on_x),
                (FRAC_PI_2, on_y),
                (-FRAC_PI_2, on_y),
            ];
            if let Some(c2) = QuarticFamily::off_axis_cos2(alpha, beta) {
                let star = 0.5 * c2.acos();
                let d2 = 8.0 * (alpha - beta) * (1.0 - beta) / (1.0 + alpha - 2.0 * beta);
                for theta in [star, -star, PI - star, star - PI] {
                    v.push((theta, d2));
                }
            }
            v
        }
    };
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let modes = raw
        .into_iter()
        .map(|(theta, d2w)| ModeAngle {
            theta,
            d2w,
            kind: ModeKind::from_d2w(d2w),
            c_theta: family.w(theta),
        })
        .collect();
    Ok(ModeSet { modes })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub beta: f64,
    pub count: usize,
    pub angles: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transition {
    /// Bisection estimate of the parameter where the count changes.
    pub beta: f64,
    pub count_below: usize,
    pub count_above: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BifurcationScan {
    pub alpha: f64,
    pub rows: Vec<ScanRow>,
    pub transitions: Vec<Transition>,
}

/// Bisection tolerance for transition locations.
pub const TRANSITION_TOL: f64 = 1e-9;

/// Inclusive grid `lo, lo + step, ..` not exceeding `hi`.
pub fn beta_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "invalid range {lo}:{hi}:{step}"
        )));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| lo + k as f64 * step).collect())
}

/// Mode count of the lower-symmetry family across a range of `beta`, with
/// the parameter values where the count changes located by bisection.
/// Inadmissible grid points are skipped.
pub fn bifurcation_scan(alpha: f64, lo: f64, hi: f64, step: f64) -> Result<BifurcationScan> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Inadmissible(format!(
            "lower symmetry needs 0 < alpha < 1, got alpha = {alpha}"
        )));
    }
    let betas: Vec<f64> = beta_grid(lo, hi, step)?
        .into_iter()
        .filter(|&b| b > -alpha.sqrt())
        .collect();
    if betas.is_empty() {
        return Err(Error::Inadmissible(format!(
            "no beta in {lo}:{hi} satisfies beta > -sqrt(alpha) = {}",
            -alpha.sqrt()
        )));
    }
    let rows: Vec<ScanRow> = betas
        .par_iter()
        .map(|&beta| {
            let set = critical_angles(&QuarticFamily::LowerSymmetry { alpha, beta })?;
            Ok(ScanRow {
                beta,
                count: set.count(),
                angles: set.angles(),
            })
        })
        .collect::<Result<_>>()?;

    let count_at = |beta: f64| -> Result<usize> {
        Ok(critical_angles(&QuarticFamily::LowerSymmetry { alpha, beta })?.count())
    };
    let mut transitions = Vec::new();
    for pair in rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.count == b.count {
            continue;
        }
        let (mut lo, mut hi) = (a.beta, b.beta);
        while hi - lo > TRANSITION_TOL {
            let mid = 0.5 * (lo + hi);
            if count_at(mid)? == a.count {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        transitions.push(Transition {
            beta: 0.5 * (lo + hi),
            count_below: a.count,
            count_above: b.count,
        });
    }
    Ok(BifurcationScan {
        alpha,
        rows,
        transitions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OffsetVerdict {
    Stable,
    Unstable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OffsetOutcome {
    pub family: QuarticFamily,
    pub theta0: f64,
    pub offset: f64,
    pub t_end: f64,
    pub dt: f64,
    /// Largest distance from the mode line, in units of the initial radius.
    pub max_deviation: f64,
    pub stable_below: f64,
    pub unstable_above: f64,
    pub verdict: OffsetVerdict,
}

/// Containment threshold as a multiple of the initial offset.
pub const CONTAINMENT_FACTOR: f64 = 10.0;
/// Escape threshold on the normalized deviation.
pub const ESCAPE_DEVIATION: f64 = 0.5;
pub const OFFSET_DT: f64 = 1e-3;

/// Largest transverse distance of the orbit from `span(v)`, divided by the
/// initial radius. Equals the angular offset while `|q| = |q0|`, and stays
/// meaningful when the orbit passes through the origin.
pub fn transverse_deviation(samples: &[State], v: &[f64]) -> f64 {
    let r0 = samples
        .first()
        .map(|s| s.q.iter().map(|x| x * x).sum::<f64>().sqrt())
        .filter(|&r| r > 0.0)
        .unwrap_or(1.0);
    samples
        .iter()
        .map(|s| {
            let along: f64 = s.q.iter().zip(v).map(|(a, b)| a * b).sum();
            s.q.iter()
                .zip(v)
                .map(|(a, b)| (a - along * b).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
        / r0
}

/// Releases the particle at rest on the unit circle at `theta0 + offset` and
/// reports whether it stays near the line of the mode at `theta0`.
pub fn offset_experiment(
    family: &QuarticFamily,
    theta0: f64,
    offset: f64,
    t_end: f64,
) -> Result<OffsetOutcome> {
    offset_experiment_with(family, theta0, offset, t_end, OFFSET_DT)
}

pub fn offset_experiment_with(
    family: &QuarticFamily,
    theta0: f64,
    offset: f64,
    t_end: f64,
    dt: f64,
) -> Result<OffsetOutcome> {
    let potential = potential_of(family)?;
    if family.dw(theta0).abs() > 1e-8 {
        return Err(Error::InvalidArgument(format!(
            "theta0 = {theta0} is not a critical angle of {family}"
        )));
    }
    let sys = SecondOrderSystem::unit_mass(potential);
    let start = theta0 + offset;
    let traj = sys.integrate(&State::at_rest(vec![start.cos(), start.sin()]), dt, t_end)?;
    let line = [theta0.cos(), theta0.sin()];
    let max_deviation = transverse_deviation(&traj.samples, &line);
    let stable_below = CONTAINMENT_FACTOR * offset.abs();
    let verdict = if traj.blow_up.is_some() || max_deviation > ESCAPE_DEVIATION {
        OffsetVerdict::Unstable
    } else if max_deviation < stable_below {
        OffsetVerdict::Stable
    } else {
        OffsetVerdict::Inconclusive
    };
    Ok(OffsetOutcome {
        family: *family,
        theta0,
        offset,
        t_end,
        dt,
        max_deviation,
        stable_below,
        unstable_above: ESCAPE_DEVIATION,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossValidation {
    pub points: usize,
    pub max_angle_error: f64,
    pub max_lambda_error: f64,
}

pub const ANGLE_MATCH_TOL: f64 = 1e-8;
pub const LAMBDA_MATCH_TOL: f64 = 1e-9;

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Runs the generic eigenpair solver on the family's potential and checks it
/// against the closed-form mode set: same count, matching angles, matching
/// stability, and `lambda = 4 W(theta)`.
pub fn cross_validate(family: &QuarticFamily, config: &SolverConfig) -> Result<CrossValidation> {
    let modes = critical_angles(family)?;
    if modes.has_degenerate() {
        return Err(Error::InvalidArgument(format!(
            "{family} sits on a bifurcation value"
        )));
    }
    let report = find_eigenpairs(&potential_of(family)?, config)?;
    let describe = || {
        let numeric: Vec<String> = report
            .eigenpairs
            .iter()
            .map(|e| format!("{:.12}:{}", e.pair.angle(), e.class.kind))
            .collect();
        let analytic: Vec<String> = modes
            .modes
            .iter()
            .map(|m| format!("{:.12}:{}", m.theta, m.kind.as_str()))
            .collect();
        format!(
            "solver [{}] vs closed form [{}]",
            numeric.join(", "),
            analytic.join(", ")
        )
    };
    if report.degenerate_family || report.real_count != modes.count() {
        return Err(Error::Mismatch(format!(
            "{family}: count {} vs {}; {}",
            report.real_count,
            modes.count(),
            describe()
        )));
    }
    let mut max_angle_error: f64 = 0.0;
    let mut max_lambda_error: f64 = 0.0;
    for e in &report.eigenpairs {
        let theta = e.pair.angle();
        let nearest = modes
            .modes
            .iter()
            .min_by(|a, b| angle_gap(a.theta, theta).total_cmp(&angle_gap(b.theta, theta)))
            .expect("mode set is nonempty");
        let gap = angle_gap(nearest.theta, theta);
        let lambda_err = (e.pair.lambda - 4.0 * family.w(nearest.theta)).abs();
        let kind_ok = matches!(
            (e.class.kind, nearest.kind),
            (CriticalKind::Minimum, ModeKind::Stable) | (CriticalKind::Maximum, ModeKind::Unstable)
        );
        if gap > ANGLE_MATCH_TOL || lambda_err > LAMBDA_MATCH_TOL || !kind_ok {
            return Err(Error::Mismatch(format!(
                "{family}: point at {theta} ({}) vs {} ({}), lambda error {lambda_err}; {}",
                e.class.kind,
                nearest.theta,
                nearest.kind.as_str(),
                describe()
            )));
        }
        max_angle_error = max_angle_error.max(gap);
        max_lambda_error = max_lambda_error.max(lambda_err);
    }
    Ok(CrossValidation {
        points: report.real_count,
        max_angle_error,
        max_lambda_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const HIGH1: QuarticFamily = QuarticFamily::HigherSymmetry { beta: 1.0 };

    #[test]
    fn admissibility() {
        assert!(HIGH1.check_admissible().is_ok());
        assert!(QuarticFamily::HigherSymmetry { beta: -5.0 }
            .check_admissible()
            .is_err());
        assert!(QuarticFamily::HigherSymmetry { beta: -4.0 }
            .check_admissible()
            .is_err());
        assert!(QuarticFamily::HigherSymmetry { beta: 0.0 }
            .check_admissible()
            .is_err());
        assert!(QuarticFamily::LowerSymmetry {
            alpha: 0.25,
            beta: -0.49
        }
        .check_admissible()
        .is_ok());
        assert!(QuarticFamily::LowerSymmetry {
            alpha: 0.25,
            beta: -0.5
        }
        .check_admissible()
        .is_err());
        assert!(QuarticFamily::LowerSymmetry {
            alpha: 1.0,
            beta: 0.0
        }
        .check_admissible()
        .is_err());
        let msg = potential_of(&QuarticFamily::HigherSymmetry { beta: -5.0 })
            .unwrap_err()
            .to_string();
        assert!(msg.contains("beta > -4"), "{msg}");
    }

    #[test]
    fn potentials() {
        let p = potential_of(&HIGH1).unwrap();
        let terms: Vec<(Vec<u32>, f64)> = p
            .terms()
            .map(|(m, c)| (m.exponents().to_vec(), c))
            .collect();
        assert_eq!(
            terms,
            vec![(vec![0, 4], 1.0), (vec![2, 2], 3.0), (vec![4, 0], 1.0)]
        );
        let q = potential_of(&QuarticFamily::LowerSymmetry {
            alpha: 0.25,
            beta: 0.0,
        })
        .unwrap();
        assert_eq!(q.terms().count(), 2);
        assert_eq!(q.coefficient(&Monomial::new(vec![0, 4])), 0.25);
    }

    #[test]
    fn profile_values() {
        let prof = restrict(&HIGH1, 8).unwrap();
        assert_eq!(prof.thetas.len(), 8);
        assert_eq!(*prof.thetas.last().unwrap(), PI);
        assert_relative_eq!(HIGH1.w(0.0), 1.0);
        assert_relative_eq!(HIGH1.w(FRAC_PI_4), 1.25, epsilon = 1e-15);
        let low = QuarticFamily::LowerSymmetry {
            alpha: 0.25,
            beta: 0.5,
        };
        assert_relative_eq!(low.w(FRAC_PI_2), 0.25, epsilon = 1e-15);
        assert!(restrict(&HIGH1, 7).is_err());
        assert!(restrict(&QuarticFamily::HigherSymmetry { beta: -4.5 }, 64).is_err());
    }

    #[test]
    fn higher_symmetry_modes() {
        let set = critical_angles(&HIGH1).unwrap();
        assert_eq!(set.count(), 8);
        for m in &set.modes {
            let on_axis = (m.theta / FRAC_PI_2).fract().abs() < 1e-12
                || ((m.theta / FRAC_PI_2).fract().abs() - 1.0).abs() < 1e-12;
            if on_axis {
                assert_eq!(m.kind, ModeKind::Stable);
                assert_relative_eq!(m.c_theta, 1.0, epsilon = 1e-15);
            } else {
                assert_eq!(m.kind, ModeKind::Unstable);
                assert_relative_eq!(m.c_theta, 1.25, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn lower_symmetry_modes() {
        let set = critical_angles(&QuarticFamily::LowerSymmetry {
            alpha: 0.25,
            beta: 0.0,
        })
        .unwrap();
        assert_eq!(set.count(), 8);
        let star = 0.5 * (-0.6f64).acos();
        assert_relative_eq!(star, 1.107_148_717_794_090_4, epsilon = 1e-15);
        let found = set
            .modes
            .iter()
            .find(|m| (m.theta - star).abs() < 1e-15)
            .unwrap();
        assert_eq!(found.kind, ModeKind::Stable);
        assert_relative_eq!(found.d2w, 1.6, epsilon = 1e-12);

        let mid = critical_angles(&QuarticFamily::LowerSymmetry {
            alpha: 0.25,
            beta: 0.5,
        })
        .unwrap();
        assert_eq!(mid.angles(), vec![-FRAC_PI_2, 0.0, FRAC_PI_2, PI]);

        let high = critical_angles(&QuarticFamily::LowerSymmetry {
            alpha: 0.25,
            beta: 1.2,
        })
        .unwrap();
        assert_eq!(high.count(), 8);
        for m in &high.modes {
            let axis = m.theta.abs() < 1e-12
                || (m.theta.abs() - FRAC_PI_2).abs() < 1e-12
                || (m.theta - PI).abs() < 1e-12;
            if !axis {
                assert_eq!(m.kind, ModeKind::Unstable);
            }
        }
    }

    #[test]
    fn bifurcation_values_are_degenerate() {
        let at_alpha = critical_angles(&QuarticFamily::LowerSymmetry {
            alpha: 0.25,
            beta: 0.25,
        })
        .unwrap();
        assert_eq!(at_alpha.count(), 4);
        assert!(at_alpha.has_degenerate());
        let at_one = critical_angles(&QuarticFamily::LowerSymmetry {
            alpha: 0.25,
            beta: 1.0,
        })
        .unwrap();
        assert_eq!(at_one.count(), 4);
        assert!(at_one.has_degenerate());
    }

    #[test]
    fn scan_examples() {
        let scan = bifurcation_scan(0.25, -0.3, -0.3, 0.01).unwrap();
        assert_eq!(scan.rows.len(), 1);
        assert_eq!(scan.rows[0].count, 8);
        let scan = bifurcation_scan(0.25, 1.2, 1.2, 0.01).unwrap();
        assert_eq!(scan.rows[0].count, 8);
        let scan = bifurcation_scan(0.25, 0.5, 0.5, 0.01).unwrap();
        assert_eq!(scan.rows[0].count, 4);
        assert!(bifurcation_scan(0.25, -2.0, -0.6, 0.1).is_err());
        assert!(bifurcation_scan(1.5, 0.0, 1.0, 0.1).is_err());
        let partial = bifurcation_scan(0.25, -1.0, 0.0, 0.1).unwrap();
        assert!(partial.rows.iter().all(|r| r.beta > -0.5));
    }

    #[test]
    fn grid_is_inclusive() {
        let g = beta_grid(-0.4, 1.5, 0.01).unwrap();
        assert_eq!(g.len(), 191);
        assert!((g.last().unwrap() - 1.5).abs() < 1e-12);
        assert!(beta_grid(0.0, 1.0, 0.0).is_err());
        assert!(beta_grid(1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn offset_experiment_rejects_non_critical_start() {
        assert!(offset_experiment(&HIGH1, 0.3, 1e-3, 1.0).is_err());
    }

    #[test]
    fn transverse_deviation_of_line_motion_is_zero() {
        let samples = vec![
            State::at_rest(vec![1.0, 0.0]),
            State::at_rest(vec![-0.5, 0.0]),
            State::at_rest(vec![0.0, 0.0]),
        ];
        assert_eq!(transverse_deviation(&samples, &[1.0, 0.0]), 0.0);
        let off = vec![
            State::at_rest(vec![2.0, 0.0]),
            State::at_rest(vec![0.0, 0.2]),
        ];
        assert_relative_eq!(transverse_deviation(&off, &[1.0, 0.0]), 0.1);
    }
}
