//! Counting checks: eigenspace bound, parity, index sum, and critical point
//! type tables on the 2-sphere.

use std::collections::BTreeMap;

use super::{SpectrumReport, Verdict};
use crate::error::{Error, Result};

/// `(p^q - 1) / (p - 1) = 1 + p + .. + p^(q-1)`, the maximal finite number of
/// eigenspaces of a degree-`p` homogeneous map in `q` variables.
pub fn bezout_bound(p: u32, q: u32) -> Result<u64> {
    if p < 2 {
        return Err(Error::InvalidArgument(format!(
            "map degree p must be >= 2, got {p}"
        )));
    }
    if q < 1 {
        return Err(Error::InvalidArgument(format!(
            "dimension q must be >= 1, got {q}"
        )));
    }
    let mut total: u64 = 0;
    let mut power: u64 = 1;
    for k in 0..q {
        total = total
            .checked_add(power)
            .ok_or(Error::Overflow("bezout bound"))?;
        if k + 1 < q {
            power = power
                .checked_mul(p as u64)
                .ok_or(Error::Overflow("bezout bound"))?;
        }
    }
    Ok(total)
}

/// Same as [`bezout_bound`], extended to linear maps (`p = 1`) where a
/// generic symmetric matrix has `q` eigenspaces.
pub fn eigenspace_bound(p: u32, q: u32) -> Result<u64> {
    if p == 1 && q >= 1 {
        Ok(q as u64)
    } else {
        bezout_bound(p, q)
    }
}

/// Euler characteristic of the unit sphere `S^(m-1)` in `R^m`.
pub fn euler_characteristic(m: usize) -> i64 {
    if m % 2 == 1 {
        2
    } else {
        0
    }
}

/// Sum of Poincaré–Hopf indices equals the Euler characteristic of the sphere.
pub fn index_sum_check(report: &SpectrumReport, m: usize) -> Verdict {
    if report.degenerate_family {
        return Verdict::Inapplicable;
    }
    let sum: Option<i64> = report
        .eigenpairs
        .iter()
        .map(|e| e.class.ph_index.map(i64::from))
        .sum();
    match sum {
        Some(s) => Verdict::from_bool(s == euler_characteristic(m)),
        None => Verdict::Inapplicable,
    }
}

/// Number of real eigenspaces is congruent to the bound modulo 2.
pub fn parity_check(report: &SpectrumReport, p: u32, q: u32) -> Verdict {
    if report.degenerate_family {
        return Verdict::Inapplicable;
    }
    match bezout_bound(p, q) {
        Ok(bound) => Verdict::from_bool(report.eigenspace_count as u64 % 2 == bound % 2),
        Err(_) => Verdict::Inapplicable,
    }
}

/// Whether a census of critical points (maxima, minima, saddles keyed by
/// index `-k`) is topologically possible for a potential whose gradient map
/// has degree `p` on the sphere in `R^m`: indices sum to the Euler
/// characteristic (a maximum on `S^(m-1)` has index `(-1)^(m-1)`), the total
/// stays within twice the eigenspace bound, and odd-degree potentials pair
/// every maximum with an antipodal minimum.
pub fn table_compatibility(
    max_count: u32,
    min_count: u32,
    saddle_counts: &BTreeMap<u32, u32>,
    m: usize,
    p: u32,
) -> bool {
    let saddle_index: i64 = saddle_counts
        .iter()
        .map(|(&k, &c)| k as i64 * c as i64)
        .sum();
    let max_index = if m % 2 == 1 { 1 } else { -1 };
    let extrema = max_count as i64 + min_count as i64;
    let index_ok =
        min_count as i64 + max_index * max_count as i64 - saddle_index == euler_characteristic(m);

    let total = extrema + saddle_counts.values().map(|&c| c as i64).sum::<i64>();
    let count_ok = match bezout_bound(p, m as u32) {
        Ok(bound) => (total as u64) <= bound.saturating_mul(2),
        Err(_) => false,
    };

    let potential_degree_odd = (p + 1) % 2 == 1;
    let antipodal_ok = !potential_degree_odd || max_count == min_count;

    index_ok && count_ok && antipodal_ok
}
