//! Motion in a homogeneous potential, `m x'' = -grad V(x)`, and the scalar
//! equation `g'' = alpha g^p` obeyed along an eigenline.
//!
//! Both integrators are fixed-step and time-symmetric. [`Scheme::Leapfrog`]
//! is velocity Verlet; [`Scheme::Yoshida4`] composes three leapfrog substeps
//! into a fourth-order symmetric step and is the default.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectra::Eigenpair;
use crate::symtensor::HomogeneousPolynomial;

/// Any state component above this magnitude ends the run.
pub const BLOW_UP_LIMIT: f64 = 1e12;

/// `|gamma|` above which a scalar run counts as escaping.
pub const ESCAPE_THRESHOLD: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Leapfrog,
    #[default]
    Yoshida4,
}

impl Scheme {
    /// Substep weights of one step.
    fn weights(self) -> &'static [f64] {
        const CBRT2: f64 = 1.259_921_049_894_873_2;
        const W1: f64 = 1.0 / (2.0 - CBRT2);
        const W0: f64 = -CBRT2 / (2.0 - CBRT2);
        match self {
            Scheme::Leapfrog => &[1.0],
            Scheme::Yoshida4 => &[W1, W0, W1],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderSystem {
    potential: HomogeneousPolynomial,
    mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct State {
    pub q: Vec<f64>,
    pub v: Vec<f64>,
    pub t: f64,
}

impl State {
    pub fn new(q: Vec<f64>, v: Vec<f64>) -> Self {
        State { q, v, t: 0.0 }
    }

    pub fn at_rest(q: Vec<f64>) -> Self {
        let v = vec![0.0; q.len()];
        State { q, v, t: 0.0 }
    }

    fn is_runaway(&self) -> bool {
        self.q
            .iter()
            .chain(&self.v)
            .any(|x| !x.is_finite() || x.abs() > BLOW_UP_LIMIT)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<State>,
    /// `max |H(t) - H(0)|` over the samples.
    pub energy_drift: f64,
    /// Time at which the run was cut short by a runaway state.
    pub blow_up: Option<f64>,
}

impl Trajectory {
    pub fn last(&self) -> &State {
        self.samples
            .last()
            .expect("trajectory has the initial sample")
    }
}

impl SecondOrderSystem {
    pub fn new(potential: HomogeneousPolynomial, mass: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "mass must be positive, got {mass}"
            )));
        }
        Ok(SecondOrderSystem { potential, mass })
    }

    pub fn unit_mass(potential: HomogeneousPolynomial) -> Self {
        SecondOrderSystem {
            potential,
            mass: 1.0,
        }
    }

    pub fn potential(&self) -> &HomogeneousPolynomial {
        &self.potential
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn dim(&self) -> usize {
        self.potential.dim()
    }

    pub fn acceleration(&self, q: &[f64]) -> Result<Vec<f64>> {
        let mut a = self.potential.gradient(q)?;
        a.iter_mut().for_each(|x| *x = -*x / self.mass);
        Ok(a)
    }

    /// `H = m |v|^2 / 2 + V(q)`.
    pub fn energy(&self, s: &State) -> Result<f64> {
        self.check_state(s)?;
        Ok(self.energy_unchecked(s))
    }

    fn energy_unchecked(&self, s: &State) -> f64 {
        let kinetic = 0.5 * self.mass * s.v.iter().map(|x| x * x).sum::<f64>();
        kinetic + self.potential.eval_unchecked(&s.q)
    }

    fn check_state(&self, s: &State) -> Result<()> {
        for len in [s.q.len(), s.v.len()] {
            if len != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    found: len,
                });
            }
        }
        Ok(())
    }

    fn kick(&self, s: &mut State, h: f64) {
        let g = self.potential.gradient_unchecked(&s.q);
        for (vi, gi) in s.v.iter_mut().zip(g) {
            *vi -= h * gi / self.mass;
        }
    }

    fn advance(&self, s: &mut State, dt: f64, scheme: Scheme) {
        for &w in scheme.weights() {
            let h = w * dt;
            self.kick(s, 0.5 * h);
            for (qi, vi) in s.q.iter_mut().zip(&s.v) {
                *qi += h * vi;
            }
            self.kick(s, 0.5 * h);
        }
    }

    /// Integrates from `s0` to `t_end` with the default scheme, keeping
    /// every step.
    pub fn integrate(&self, s0: &State, dt: f64, t_end: f64) -> Result<Trajectory> {
        self.integrate_with(s0, dt, t_end, Scheme::default())
    }

    pub fn integrate_with(
        &self,
        s0: &State,
        dt: f64,
        t_end: f64,
        scheme: Scheme,
    ) -> Result<Trajectory> {
        self.check_state(s0)?;
        let steps = step_count(s0.t, dt, t_end)?;
        let h0 = self.energy_unchecked(s0);
        let mut samples = Vec::with_capacity(steps + 1);
        samples.push(s0.clone());
        let mut drift: f64 = 0.0;
        let mut blow_up = None;
        let mut s = s0.clone();
        for k in 1..=steps {
            self.advance(&mut s, dt, scheme);
            s.t = s0.t + k as f64 * dt;
            if s.is_runaway() {
                blow_up = Some(s.t);
                break;
            }
            drift = drift.max((self.energy_unchecked(&s) - h0).abs());
            samples.push(s.clone());
        }
        Ok(Trajectory {
            samples,
            energy_drift: drift,
            blow_up,
        })
    }
}

fn step_count(t0: f64, dt: f64, t_end: f64) -> Result<usize> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "dt must be positive, got {dt}"
        )));
    }
    if !(t_end > t0) {
        return Err(Error::InvalidArgument(format!(
            "t_end {t_end} must exceed the start time {t0}"
        )));
    }
    Ok(((t_end - t0) / dt).round().max(1.0) as usize)
}

/// Angle between `q` and the line spanned by the unit vector `v`.
pub fn angle_to_line(q: &[f64], v: &[f64]) -> f64 {
    let along: f64 = q.iter().zip(v).map(|(a, b)| a * b).sum();
    let qnorm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    if qnorm < 1e-12 {
        return 0.0;
    }
    let perp = q
        .iter()
        .zip(v)
        .map(|(a, b)| (a - along * b).powi(2))
        .sum::<f64>()
        .sqrt();
    perp.atan2(along.abs())
}

/// Largest angular distance between the trajectory and `span(v)`.
pub fn line_deviation(traj: &Trajectory, v: &[f64]) -> f64 {
    traj.samples
        .iter()
        .map(|s| angle_to_line(&s.q, v))
        .fold(0.0, f64::max)
}

/// Scalar equation `gamma'' = alpha gamma^p_exp` along `direction`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedMode {
    pub alpha: f64,
    pub p_exp: u32,
    pub direction: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundedness {
    Periodic,
    Unbounded,
    /// `p = 1`: the classical linear oscillator (or its unstable counterpart).
    Linear,
}

impl ReducedMode {
    pub fn new(alpha: f64, p_exp: u32) -> Self {
        ReducedMode {
            alpha,
            p_exp,
            direction: Vec::new(),
        }
    }

    fn force(&self, gamma: f64) -> f64 {
        self.alpha * gamma.powi(self.p_exp as i32)
    }

    pub fn psi(&self, y1: f64, y2: f64) -> f64 {
        psi(self, y1, y2)
    }
}

/// Reduction of `m x'' = -grad P(x)` to the eigenline of `e`:
/// `alpha = -lambda / m`, `p = n - 1`.
pub fn reduced_mode(sys: &SecondOrderSystem, e: &Eigenpair) -> ReducedMode {
    ReducedMode {
        alpha: -e.lambda / sys.mass,
        p_exp: sys.potential.degree() - 1,
        direction: e.v.clone(),
    }
}

/// First integral `2 alpha y1^(p+1) - (p+1) y2^2`.
pub fn psi(mode: &ReducedMode, y1: f64, y2: f64) -> f64 {
    let p = mode.p_exp as i32;
    2.0 * mode.alpha * y1.powi(p + 1) - (p + 1) as f64 * y2 * y2
}

pub fn boundedness(mode: &ReducedMode) -> Boundedness {
    match mode.p_exp {
        1 => Boundedness::Linear,
        p if p >= 2 && p % 2 == 1 && mode.alpha < 0.0 => Boundedness::Periodic,
        _ => Boundedness::Unbounded,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarState {
    pub t: f64,
    pub gamma: f64,
    pub gammadot: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarTrajectory {
    pub samples: Vec<ScalarState>,
    /// Time at which `|gamma|` first exceeded the escape threshold.
    pub escape: Option<f64>,
}

impl ScalarTrajectory {
    pub fn psi_drift(&self, mode: &ReducedMode) -> f64 {
        let s0 = self.samples[0];
        let psi0 = psi(mode, s0.gamma, s0.gammadot);
        self.samples
            .iter()
            .map(|s| (psi(mode, s.gamma, s.gammadot) - psi0).abs())
            .fold(0.0, f64::max)
    }
}

fn scalar_advance(mode: &ReducedMode, s: &mut ScalarState, dt: f64, scheme: Scheme) {
    for &w in scheme.weights() {
        let h = w * dt;
        s.gammadot += 0.5 * h * mode.force(s.gamma);
        s.gamma += h * s.gammadot;
        s.gammadot += 0.5 * h * mode.force(s.gamma);
    }
}

/// Integrates the scalar mode equation. The run stops early once `|gamma|`
/// exceeds `escape` (if given) or [`BLOW_UP_LIMIT`].
pub fn integrate_mode(
    mode: &ReducedMode,
    gamma0: f64,
    gammadot0: f64,
    dt: f64,
    t_end: f64,
    escape: Option<f64>,
) -> Result<ScalarTrajectory> {
    let steps = step_count(0.0, dt, t_end)?;
    let limit = escape.unwrap_or(BLOW_UP_LIMIT).min(BLOW_UP_LIMIT);
    let mut s = ScalarState {
        t: 0.0,
        gamma: gamma0,
        gammadot: gammadot0,
    };
    let mut samples = vec![s];
    let mut escaped = None;
    for k in 1..=steps {
        scalar_advance(mode, &mut s, dt, Scheme::default());
        s.t = k as f64 * dt;
        if !(s.gamma.is_finite() && s.gammadot.is_finite()) || s.gamma.abs() > limit {
            escaped = Some(s.t);
            if s.gamma.is_finite() && s.gammadot.is_finite() {
                samples.push(s);
            }
            break;
        }
        samples.push(s);
    }
    Ok(ScalarTrajectory {
        samples,
        escape: escaped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodEstimate {
    pub period: f64,
    /// Phase-space distance between the returning state and the start.
    pub return_distance: f64,
}

/// Largest relative distance from the start accepted as a return.
const RETURN_TOL: f64 = 1e-3;

/// First return time to the start state, measured on the section through the
/// start that is normal to the flow there. `None` if the start is an
/// equilibrium, the run escapes, or no return happens before `t_max`.
pub fn find_period(
    mode: &ReducedMode,
    gamma0: f64,
    gammadot0: f64,
    dt: f64,
    t_max: f64,
) -> Result<Option<PeriodEstimate>> {
    let steps = step_count(0.0, dt, t_max)?;
    let flow = (gammadot0, mode.force(gamma0));
    if flow.0 == 0.0 && flow.1 == 0.0 {
        return Ok(None);
    }
    let section = |s: &ScalarState| (s.gamma - gamma0) * flow.0 + (s.gammadot - gammadot0) * flow.1;
    let mut s = ScalarState {
        t: 0.0,
        gamma: gamma0,
        gammadot: gammadot0,
    };
    let mut been_behind = false;
    for _ in 0..steps {
        let prev = s;
        scalar_advance(mode, &mut s, dt, Scheme::default());
        s.t = prev.t + dt;
        if !(s.gamma.abs() <= BLOW_UP_LIMIT && s.gammadot.abs() <= BLOW_UP_LIMIT) {
            return Ok(None);
        }
        let g = section(&s);
        if !been_behind {
            been_behind = g < 0.0;
            continue;
        }
        if g >= 0.0 {
            // bisection on a partial step from the last sample behind the section
            let (mut lo, mut hi) = (0.0, dt);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let mut probe = prev;
                scalar_advance(mode, &mut probe, mid, Scheme::default());
                if section(&probe) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let tau = 0.5 * (lo + hi);
            let mut hit = prev;
            scalar_advance(mode, &mut hit, tau, Scheme::default());
            let distance =
                ((hit.gamma - gamma0).powi(2) + (hit.gammadot - gammadot0).powi(2)).sqrt();
            // a crossing far from the start is not a return (escaping runs
            // can cross the section again once the scheme loses accuracy)
            if distance > RETURN_TOL * gamma0.hypot(gammadot0).max(1.0) {
                return Ok(None);
            }
            return Ok(Some(PeriodEstimate {
                period: prev.t + tau,
                return_distance: distance,
            }));
        }
    }
    Ok(None)
}

/// For `p = 2`, `max |z'^2 - (2/3) alpha z^3 - c|` over the samples, with `c`
/// fixed by the first sample. Returns `(residual, c)`.
pub fn weierstrass_residual(mode: &ReducedMode, traj: &ScalarTrajectory) -> Result<(f64, f64)> {
    if mode.p_exp != 2 {
        return Err(Error::InvalidArgument(format!(
            "the Weierstrass form needs p = 2, got p = {}",
            mode.p_exp
        )));
    }
    let lhs = |s: &ScalarState| s.gammadot * s.gammadot - 2.0 / 3.0 * mode.alpha * s.gamma.powi(3);
    let c = lhs(&traj.samples[0]);
    let residual = traj
        .samples
        .iter()
        .map(|s| (lhs(s) - c).abs())
        .fold(0.0, f64::max);
    Ok((residual, c))
}
