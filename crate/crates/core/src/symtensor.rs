//! Homogeneous polynomials and their symmetric tensor view.
//!
//! A homogeneous polynomial of degree `n` in `m` variables is stored as a
//! sparse map from monomials to coefficients. The symmetric order-`n` tensor
//! with `P(x) = T[i1..in] x^i1 .. x^in` is derived from it on demand: the
//! entry for an index tuple is the coefficient of the matching monomial
//! divided by the number of distinct orderings of that tuple.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector of a monomial `x1^e1 .. xm^em`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: impl Into<Vec<u32>>) -> Self {
        Monomial(exponents.into())
    }

    /// Monomial obtained by counting how often each coordinate appears in an
    /// index tuple, e.g. `(0, 0, 1, 1)` in dimension 2 is `x^2 y^2`.
    pub fn from_indices(dim: usize, indices: &[usize]) -> Result<Self> {
        let mut exps = vec![0u32; dim];
        for &i in indices {
            if i >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: i + 1,
                });
            }
            exps[i] += 1;
        }
        Ok(Monomial(exps))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, &xi)| xi.powi(e as i32))
            .product()
    }

    /// Number of distinct index tuples that collapse to this monomial,
    /// `n! / (e1! .. em!)`.
    pub fn multinomial(&self) -> f64 {
        let mut count = 1.0;
        let mut k = 0u32;
        for &e in &self.0 {
            for j in 1..=e {
                k += 1;
                count *= k as f64 / j as f64;
            }
        }
        count.round()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            match e {
                1 => write!(f, "x{}", i + 1)?,
                _ => write!(f, "x{}^{}", i + 1, e)?,
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Sparse homogeneous polynomial of degree `>= 2`.
///
/// Immutable after construction. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPolynomial {
    dim: usize,
    degree: u32,
    terms: BTreeMap<Monomial, f64>,
}

impl HomogeneousPolynomial {
    /// Canonical constructor. Duplicate monomials are summed and terms whose
    /// coefficient ends up exactly zero are dropped.
    pub fn from_terms<I>(dim: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, f64)>,
    {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if degree < 2 {
            return Err(Error::DegreeTooLow(degree));
        }
        let mut map: BTreeMap<Monomial, f64> = BTreeMap::new();
        for (mono, coeff) in terms {
            if mono.dim() != dim {
                return Err(Error::InvalidMonomial {
                    exponents: mono.0,
                    reason: format!("expected {dim} exponents"),
                });
            }
            if mono.degree() != degree {
                return Err(Error::InvalidMonomial {
                    reason: format!("total degree {} differs from {degree}", mono.degree()),
                    exponents: mono.0,
                });
            }
            if !coeff.is_finite() {
                return Err(Error::InvalidMonomial {
                    exponents: mono.0,
                    reason: "coefficient is not finite".into(),
                });
            }
            *map.entry(mono).or_insert(0.0) += coeff;
        }
        map.retain(|_, c| *c != 0.0);
        Ok(HomogeneousPolynomial {
            dim,
            degree,
            terms: map,
        })
    }

    /// Quadratic form `x^T A x / 2` for a symmetric matrix `A`, whose tensor
    /// eigenpairs coincide with the matrix eigenpairs of `A`.
    pub fn half_quadratic_form(a: &DMatrix<f64>) -> Result<Self> {
        let m = a.nrows();
        if a.ncols() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: a.ncols(),
            });
        }
        let mut terms = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let mono = Monomial::from_indices(m, &[i, j])?;
                terms.push((mono, 0.5 * a[(i, j)]));
            }
        }
        Self::from_terms(m, 2, terms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, mono: &Monomial) -> f64 {
        self.terms.get(mono).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The same polynomial multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut terms = self.terms.clone();
        terms.values_mut().for_each(|c| *c *= factor);
        terms.retain(|_, c| *c != 0.0);
        HomogeneousPolynomial {
            dim: self.dim,
            degree: self.degree,
            terms,
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(self.gradient_unchecked(x))
    }

    pub fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.check_dim(x)?;
        Ok(self.hessian_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(m, c)| c * m.eval(x)).sum()
    }

    pub(crate) fn gradient_unchecked(&self, x: &[f64]) -> Vec<f64> {
        let mut grad = vec![0.0; self.dim];
        let mut exps = vec![0u32; self.dim];
        for (mono, &c) in &self.terms {
            for i in 0..self.dim {
                let e = mono.0[i];
                if e == 0 {
                    continue;
                }
                exps.copy_from_slice(&mono.0);
                exps[i] -= 1;
                grad[i] += c * e as f64 * eval_exponents(&exps, x);
            }
        }
        grad
    }

    pub(crate) fn hessian_unchecked(&self, x: &[f64]) -> DMatrix<f64> {
        let m = self.dim;
        let mut hess = DMatrix::zeros(m, m);
        let mut exps = vec![0u32; m];
        for (mono, &c) in &self.terms {
            for i in 0..m {
                for j in i..m {
                    exps.copy_from_slice(&mono.0);
                    let factor = if i == j {
                        let e = exps[i];
                        if e < 2 {
                            continue;
                        }
                        exps[i] -= 2;
                        (e * (e - 1)) as f64
                    } else {
                        let (ei, ej) = (exps[i], exps[j]);
                        if ei == 0 || ej == 0 {
                            continue;
                        }
                        exps[i] -= 1;
                        exps[j] -= 1;
                        (ei * ej) as f64
                    };
                    let val = c * factor * eval_exponents(&exps, x);
                    hess[(i, j)] += val;
                    if i != j {
                        hess[(j, i)] += val;
                    }
                }
            }
        }
        hess
    }

    pub fn tensor_view(&self) -> SymmetricTensor<'_> {
        SymmetricTensor { poly: self }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: TensorFile = serde_json::from_str(s)?;
        file.into_polynomial()
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        let file = TensorFile::from(self);
        serde_json::to_string_pretty(&file).expect("tensor file serializes")
    }
}

fn eval_exponents(exps: &[u32], x: &[f64]) -> f64 {
    exps.iter()
        .zip(x)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, &xi)| xi.powi(e as i32))
        .product()
}

impl fmt::Display for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (mono, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c} {mono}")?;
        }
        Ok(())
    }
}

/// Read-only symmetric tensor view of a polynomial.
#[derive(Debug, Clone, Copy)]
pub struct SymmetricTensor<'a> {
    poly: &'a HomogeneousPolynomial,
}

impl SymmetricTensor<'_> {
    pub fn dim(&self) -> usize {
        self.poly.dim
    }

    pub fn order(&self) -> usize {
        self.poly.degree as usize
    }

    /// Entry `T[i1..in]` (zero-based indices). Invariant under any
    /// permutation of `indices`.
    pub fn entry(&self, indices: &[usize]) -> Result<f64> {
        if indices.len() != self.order() {
            return Err(Error::DimensionMismatch {
                expected: self.order(),
                found: indices.len(),
            });
        }
        let mono = Monomial::from_indices(self.dim(), indices)?;
        Ok(self.poly.coefficient(&mono) / mono.multinomial())
    }

    /// Full contraction `T[i1..in] x^i1 .. x^in`, summed over all `m^n`
    /// index tuples. Intended for small dimensions and orders.
    pub fn contract(&self, x: &[f64]) -> Result<f64> {
        self.poly.check_dim(x)?;
        let (m, n) = (self.dim(), self.order());
        let mut idx = vec![0usize; n];
        let mut total = 0.0;
        loop {
            let t = self.entry(&idx)?;
            if t != 0.0 {
                total += t * idx.iter().map(|&i| x[i]).product::<f64>();
            }
            // odometer increment
            let mut k = 0;
            loop {
                if k == n {
                    return Ok(total);
                }
                idx[k] += 1;
                if idx[k] < m {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

/// On-disk JSON form: `{"dim": m, "degree": n, "terms": [{"monomial": [..], "coeff": c}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorFile {
    pub dim: usize,
    pub degree: u32,
    pub terms: Vec<TermEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub monomial: Vec<u32>,
    pub coeff: f64,
}

impl TensorFile {
    pub fn into_polynomial(self) -> Result<HomogeneousPolynomial> {
        if self.dim == 0 {
            return Err(Error::Field {
                field: "dim".into(),
                message: "must be positive".into(),
            });
        }
        if self.degree < 2 {
            return Err(Error::Field {
                field: "degree".into(),
                message: format!("must be at least 2, got {}", self.degree),
            });
        }
        for (k, term) in self.terms.iter().enumerate() {
            if term.monomial.len() != self.dim {
                return Err(Error::Field {
                    field: format!("terms[{k}].monomial"),
                    message: format!(
                        "has {} exponents, expected {}",
                        term.monomial.len(),
                        self.dim
                    ),
                });
            }
            let deg: u32 = term.monomial.iter().sum();
            if deg != self.degree {
                return Err(Error::Field {
                    field: format!("terms[{k}].monomial"),
                    message: format!("total degree {deg}, expected {}", self.degree),
                });
            }
        }
        HomogeneousPolynomial::from_terms(
            self.dim,
            self.degree,
            self.terms
                .into_iter()
                .map(|t| (Monomial(t.monomial), t.coeff)),
        )
    }
}

impl From<&HomogeneousPolynomial> for TensorFile {
    fn from(p: &HomogeneousPolynomial) -> Self {
        TensorFile {
            dim: p.dim,
            degree: p.degree,
            terms: p
                .terms
                .iter()
                .map(|(m, &c)| TermEntry {
                    monomial: m.0.clone(),
                    coeff: c,
                })
                .collect(),
        }
    }
}

/// All exponent vectors of total degree `degree` in `dim` variables, in
/// lexicographic order.
pub fn monomials(dim: usize, degree: u32) -> Vec<Monomial> {
    fn rec(dim: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == dim {
            prefix.push(left);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(dim, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if dim > 0 {
        rec(dim, degree, &mut Vec::with_capacity(dim), &mut out);
    }
    out
}

/// Dense polynomial with every monomial coefficient drawn uniformly from
/// `[-bound, bound]`.
pub fn random_polynomial<R: rand::Rng + ?Sized>(
    dim: usize,
    degree: u32,
    bound: f64,
    rng: &mut R,
) -> Result<HomogeneousPolynomial> {
    let terms: Vec<_> = monomials(dim, degree)
        .into_iter()
        .map(|m| (m, rng.gen_range(-bound..=bound)))
        .collect();
    HomogeneousPolynomial::from_terms(dim, degree, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn vsym(beta: f64) -> HomogeneousPolynomial {
        HomogeneousPolynomial::from_terms(
            2,
            4,
            [
                (mono(&[4, 0]), 1.0),
                (mono(&[0, 4]), 1.0),
                (mono(&[2, 2]), 2.0 + beta),
            ],
        )
        .unwrap()
    }

    fn vs(alpha: f64, beta: f64) -> HomogeneousPolynomial {
        HomogeneousPolynomial::from_terms(
            2,
            4,
            [
                (mono(&[4, 0]), 1.0),
                (mono(&[0, 4]), alpha),
                (mono(&[2, 2]), 2.0 * beta),
            ],
        )
        .unwrap()
    }

    #[test]
    fn from_terms_sums_and_drops() {
        let p = HomogeneousPolynomial::from_terms(2, 4, [(mono(&[4, 0]), 1.0)]).unwrap();
        assert_eq!(p.terms().count(), 1);

        let v = HomogeneousPolynomial::from_terms(
            2,
            4,
            [
                (mono(&[4, 0]), 1.0),
                (mono(&[0, 4]), 1.0),
                (mono(&[2, 2]), 1.0),
                (mono(&[2, 2]), 1.0),
            ],
        )
        .unwrap();
        assert_eq!(v.coefficient(&mono(&[2, 2])), 2.0);
        assert_eq!(v.terms().count(), 3);

        let zero =
            HomogeneousPolynomial::from_terms(2, 4, [(mono(&[4, 0]), 1.0), (mono(&[4, 0]), -1.0)])
                .unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn from_terms_rejects_bad_input() {
        assert!(matches!(
            HomogeneousPolynomial::from_terms(2, 4, [(mono(&[3, 0]), 1.0)]),
            Err(Error::InvalidMonomial { .. })
        ));
        assert!(matches!(
            HomogeneousPolynomial::from_terms(2, 4, [(mono(&[4, 0, 0]), 1.0)]),
            Err(Error::InvalidMonomial { .. })
        ));
        assert!(matches!(
            HomogeneousPolynomial::from_terms(2, 1, [(mono(&[1, 0]), 1.0)]),
            Err(Error::DegreeTooLow(1))
        ));
        assert!(matches!(
            HomogeneousPolynomial::from_terms(2, 0, []),
            Err(Error::DegreeTooLow(0))
        ));
    }

    #[test]
    fn evaluate_examples() {
        let p = vs(0.25, 0.0);
        assert_eq!(p.evaluate(&[0.0, 1.0]).unwrap(), 0.25);
        let p = vs(0.25, 0.5);
        assert_relative_eq!(p.evaluate(&[1.0, 1.0]).unwrap(), 2.25, epsilon = 1e-15);
        assert_eq!(p.evaluate(&[0.0, 0.0]).unwrap(), 0.0);
        assert!(matches!(
            p.evaluate(&[1.0]),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 1
            })
        ));
    }

    // Hand-differentiated (x^2+y^2)^2 + b x^2 y^2.
    fn vsym_grad_oracle(b: f64, x: f64, y: f64) -> [f64; 2] {
        let r2 = x * x + y * y;
        [
            4.0 * x * r2 + 2.0 * b * x * y * y,
            4.0 * y * r2 + 2.0 * b * x * x * y,
        ]
    }

    fn vsym_hess_oracle(b: f64, x: f64, y: f64) -> [[f64; 2]; 2] {
        let r2 = x * x + y * y;
        let xy = 8.0 * x * y + 4.0 * b * x * y;
        [
            [4.0 * r2 + 8.0 * x * x + 2.0 * b * y * y, xy],
            [xy, 4.0 * r2 + 8.0 * y * y + 2.0 * b * x * x],
        ]
    }

    #[test]
    fn gradient_examples() {
        let p =
            HomogeneousPolynomial::from_terms(2, 4, [(mono(&[4, 0]), 1.0), (mono(&[0, 4]), 1.0)])
                .unwrap();
        assert_eq!(p.gradient(&[1.0, 1.0]).unwrap(), vec![4.0, 4.0]);
        assert_eq!(p.gradient(&[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);

        let v = vsym(1.0);
        assert_eq!(v.gradient(&[1.0, 0.0]).unwrap(), vec![4.0, 0.0]);
        for &(x, y) in &[(0.3, -1.2), (1.7, 0.4), (-0.9, -0.6)] {
            let g = v.gradient(&[x, y]).unwrap();
            let o = vsym_grad_oracle(1.0, x, y);
            assert_relative_eq!(g[0], o[0], max_relative = 1e-14);
            assert_relative_eq!(g[1], o[1], max_relative = 1e-14);
        }
    }

    #[test]
    fn hessian_examples() {
        let p = HomogeneousPolynomial::from_terms(2, 4, [(mono(&[4, 0]), 1.0)]).unwrap();
        let h = p.hessian(&[1.0, 0.0]).unwrap();
        assert_eq!(h, DMatrix::from_row_slice(2, 2, &[12.0, 0.0, 0.0, 0.0]));

        let q =
            HomogeneousPolynomial::from_terms(2, 2, [(mono(&[2, 0]), 0.5), (mono(&[0, 2]), 1.0)])
                .unwrap();
        for x in [[0.0, 0.0], [1.0, -3.0], [2.5, 0.1]] {
            assert_eq!(
                q.hessian(&x).unwrap(),
                DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0])
            );
        }

        let v = vsym(1.0);
        let h = v.hessian(&[1.0, 0.0]).unwrap();
        assert_eq!(h, DMatrix::from_row_slice(2, 2, &[12.0, 0.0, 0.0, 6.0]));
        let (x, y) = (0.7, -1.1);
        let h = v.hessian(&[x, y]).unwrap();
        let o = vsym_hess_oracle(1.0, x, y);
        for i in 0..2 {
            for j in 0..2 {
                assert_relative_eq!(h[(i, j)], o[i][j], max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn multinomial_counts() {
        // brute-force count of distinct orderings of (0,0,1,1)
        let mut seen = std::collections::BTreeSet::new();
        let base = [0usize, 0, 1, 1];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let mut p = [a, b, c, d];
                        p.sort_unstable();
                        if p == [0, 1, 2, 3] {
                            seen.insert([base[a], base[b], base[c], base[d]]);
                        }
                    }
                }
            }
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(mono(&[2, 2]).multinomial(), 6.0);
        assert_eq!(mono(&[4, 0]).multinomial(), 1.0);
        assert_eq!(mono(&[1, 1, 2]).multinomial(), 12.0);
    }

    #[test]
    fn tensor_view_entries() {
        let p = HomogeneousPolynomial::from_terms(2, 4, [(mono(&[4, 0]), 1.0)]).unwrap();
        let t = p.tensor_view();
        assert_eq!(t.entry(&[0, 0, 0, 0]).unwrap(), 1.0);
        assert_eq!(t.entry(&[0, 0, 0, 1]).unwrap(), 0.0);
        assert_eq!(t.entry(&[1, 1, 0, 0]).unwrap(), 0.0);

        let p = HomogeneousPolynomial::from_terms(2, 4, [(mono(&[2, 2]), 2.0)]).unwrap();
        let t = p.tensor_view();
        let expected = 1.0 / 3.0;
        for idx in [[0, 0, 1, 1], [0, 1, 0, 1], [1, 0, 1, 0], [1, 1, 0, 0]] {
            assert_relative_eq!(t.entry(&idx).unwrap(), expected, epsilon = 1e-16);
        }
        assert!(t.entry(&[0, 0, 1]).is_err());
        assert!(t.entry(&[0, 0, 1, 2]).is_err());
    }

    #[test]
    fn json_round_trip_and_errors() {
        let v = vsym(1.0);
        let back = HomogeneousPolynomial::from_json_str(&v.to_json_string()).unwrap();
        assert_eq!(back, v);

        let dup = r#"{"dim":2,"degree":4,"terms":[{"monomial":[4,0],"coeff":1},{"monomial":[4,0],"coeff":2}]}"#;
        let p = HomogeneousPolynomial::from_json_str(dup).unwrap();
        assert_eq!(p.coefficient(&mono(&[4, 0])), 3.0);

        let bad_degree = r#"{"dim":2,"degree":4,"terms":[{"monomial":[3,0],"coeff":1}]}"#;
        match HomogeneousPolynomial::from_json_str(bad_degree) {
            Err(Error::Field { field, .. }) => assert_eq!(field, "terms[0].monomial"),
            other => panic!("unexpected {other:?}"),
        }

        let malformed = "{\"dim\":2,\n\"degree\":4,\n\"terms\":[{\"monomial\":[4,0]}]}";
        match HomogeneousPolynomial::from_json_str(malformed) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn monomial_enumeration() {
        let ms = monomials(3, 4);
        assert_eq!(ms.len(), 15);
        assert!(ms.iter().all(|m| m.degree() == 4 && m.dim() == 3));
        assert_eq!(monomials(2, 3).len(), 4);
    }
}
