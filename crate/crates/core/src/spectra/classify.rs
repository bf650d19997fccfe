//! Local type of a critical point on the sphere.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Serialize, Serializer};

use super::{dot, normalize, Eigenpair, Verdict};
use crate::symtensor::HomogeneousPolynomial;

/// Samples on the circle used for the winding number around degenerate points.
pub const WINDING_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalKind {
    Minimum,
    Maximum,
    /// Nondegenerate saddle with the given number of descending directions.
    Saddle(usize),
    Degenerate,
}

impl fmt::Display for CriticalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriticalKind::Minimum => write!(f, "min"),
            CriticalKind::Maximum => write!(f, "max"),
            CriticalKind::Saddle(k) => write!(f, "saddle{k}"),
            CriticalKind::Degenerate => write!(f, "degenerate"),
        }
    }
}

impl Serialize for CriticalKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CriticalClass {
    pub kind: CriticalKind,
    pub morse_index: usize,
    /// `None` when the index of a degenerate point cannot be computed.
    pub ph_index: Option<i32>,
}

/// Orthonormal basis of the tangent space `v^perp`, one column per vector,
/// taken from a Householder reflection that maps `v` to a coordinate axis.
pub(crate) fn tangent_basis(v: &[f64]) -> DMatrix<f64> {
    let m = v.len();
    let k = (0..m)
        .max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()))
        .unwrap_or(0);
    let mut u = v.to_vec();
    u[k] += if v[k] >= 0.0 { 1.0 } else { -1.0 };
    let uu = dot(&u, &u);
    let mut basis = DMatrix::zeros(m, m - 1);
    for (col, j) in (0..m).filter(|&j| j != k).enumerate() {
        for i in 0..m {
            let e = if i == j { 1.0 } else { 0.0 };
            basis[(i, col)] = e - 2.0 * u[i] * u[j] / uu;
        }
    }
    basis
}

/// Second derivative of `P` restricted to the sphere at an eigenvector,
/// `E^T (Hess P(v) - lambda I) E` for a tangent basis `E`.
pub fn projected_hessian(p: &HomogeneousPolynomial, e: &Eigenpair) -> DMatrix<f64> {
    let m = p.dim();
    let mut h = p.hessian_unchecked(&e.v);
    for i in 0..m {
        h[(i, i)] -= e.lambda;
    }
    let basis = tangent_basis(&e.v);
    basis.transpose() * h * basis
}

fn problem_scale(p: &HomogeneousPolynomial, e: &Eigenpair) -> f64 {
    let h = p.hessian_unchecked(&e.v);
    let hmax = SymmetricEigen::new(h)
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, x| acc.max(x.abs()));
    hmax.max(e.lambda.abs())
}

/// Classifies a critical point from the eigenvalues of its projected
/// Hessian. Degeneracy is judged relative to the larger of the Hessian's
/// spectral radius and `|lambda|`.
pub fn classify(p: &HomogeneousPolynomial, e: &Eigenpair, degeneracy_tol: f64) -> CriticalClass {
    let m = p.dim();
    let proj = projected_hessian(p, e);
    let eigs = SymmetricEigen::new(proj).eigenvalues;
    let scale = problem_scale(p, e);
    let cutoff = degeneracy_tol * scale;
    let degenerate = scale == 0.0 || eigs.iter().any(|x| x.abs() <= cutoff);
    let morse_index = eigs.iter().filter(|&&x| x < -cutoff).count();

    if degenerate {
        let radius = index_radius(degeneracy_tol);
        let ph_index = match m {
            2 => Some(circle_index(p, &e.v, radius)),
            3 => Some(winding_index(p, &e.v, radius)),
            _ => None,
        };
        return CriticalClass {
            kind: CriticalKind::Degenerate,
            morse_index,
            ph_index,
        };
    }
    let kind = match morse_index {
        0 => CriticalKind::Minimum,
        k if k == m - 1 => CriticalKind::Maximum,
        k => CriticalKind::Saddle(k),
    };
    CriticalClass {
        kind,
        morse_index,
        ph_index: Some(if morse_index % 2 == 0 { 1 } else { -1 }),
    }
}

/// Radius of the loop used to compute the index of a degenerate point.
///
/// Gradients near a degenerate point vanish to third order or higher, so
/// the loop must be wide enough for them to clear rounding noise of the
/// radial component: `10 * sqrt(degeneracy_tol)`, i.e. 1e-3 by default.
pub fn index_radius(degeneracy_tol: f64) -> f64 {
    10.0 * degeneracy_tol.sqrt()
}

/// Tangential gradient of `P` at a unit point.
fn sphere_gradient(p: &HomogeneousPolynomial, x: &[f64]) -> Vec<f64> {
    let g = p.gradient_unchecked(x);
    let radial = dot(x, &g);
    g.iter().zip(x).map(|(gi, xi)| gi - radial * xi).collect()
}

fn offset_point(v: &[f64], dirs: &[(f64, &[f64])]) -> Vec<f64> {
    let mut x = v.to_vec();
    for (s, d) in dirs {
        for (xi, di) in x.iter_mut().zip(d.iter()) {
            *xi += s * di;
        }
    }
    normalize(&mut x);
    x
}

/// Index of an isolated zero of the gradient field on the circle: half the
/// jump in sign of the tangential derivative across the point.
fn circle_index(p: &HomogeneousPolynomial, v: &[f64], radius: f64) -> i32 {
    let t = [-v[1], v[0]];
    let slope = |s: f64| {
        let x = offset_point(v, &[(s, &t)]);
        dot(&sphere_gradient(p, &x), &t)
    };
    let sign = |x: f64| {
        if x > 0.0 {
            1
        } else if x < 0.0 {
            -1
        } else {
            0
        }
    };
    (sign(slope(radius)) - sign(slope(-radius))) / 2
}

/// Brouwer degree of the tangential gradient field on a small circle of
/// `radius` around `v` on the 2-sphere.
pub fn winding_index(p: &HomogeneousPolynomial, v: &[f64], radius: f64) -> i32 {
    let basis = tangent_basis(v);
    let e1: Vec<f64> = basis.column(0).iter().copied().collect();
    let e2: Vec<f64> = basis.column(1).iter().copied().collect();
    let angle_at = |k: usize| {
        let phi = 2.0 * PI * k as f64 / WINDING_SAMPLES as f64;
        let x = offset_point(v, &[(radius * phi.cos(), &e1), (radius * phi.sin(), &e2)]);
        let g = sphere_gradient(p, &x);
        dot(&g, &e2).atan2(dot(&g, &e1))
    };
    let first = angle_at(0);
    let mut prev = first;
    let mut total = 0.0;
    for k in 1..=WINDING_SAMPLES {
        let a = if k == WINDING_SAMPLES {
            first
        } else {
            angle_at(k)
        };
        let mut d = a - prev;
        while d > PI {
            d -= 2.0 * PI;
        }
        while d < -PI {
            d += 2.0 * PI;
        }
        total += d;
        prev = a;
    }
    (total / (2.0 * PI)).round() as i32
}

/// Whether `e.lambda` is absent from the spectrum of `Hess P(e.v)`, the
/// Jacobian of the gradient map. Inapplicable for `lambda = 0`.
pub fn multiplicity_one(p: &HomogeneousPolynomial, e: &Eigenpair) -> Verdict {
    let h = p.hessian_unchecked(&e.v);
    let eigs = SymmetricEigen::new(h).eigenvalues;
    let hmax = eigs.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if e.lambda.abs() <= 1e-14 * hmax.max(1.0) {
        return Verdict::Inapplicable;
    }
    let tol = 1e-8 * hmax.max(e.lambda.abs());
    Verdict::from_bool(eigs.iter().all(|mu| (mu - e.lambda).abs() > tol))
}
