//! Nearest-neighbor recurrence
//!
//! `(t - b_{n,k}) P_n - P_{n+e_k} = sum_j d_{n,j} P_{n-e_j}`
//!
//! with closed forms for both families, a coefficient-difference formula
//! for `b`, and the ratio of two lattice sums as an independent oracle
//! for `d`.
//!
//! For the Meixner family `b` is taken with the sign that reproduces the
//! classical monic Meixner recurrence at `r = 1`:
//! `b = (|n| + beta) c_k / (1 - c_k) + sum_j n_j / (1 - c_j)`. It is the
//! value forced by `b = alpha^n_{|n|-1} - alpha^{n+e_k}_{|n|}`.

use crate::constructors::explicit;
use crate::error::{Error, Result};
use crate::measures::{lattice_sum, CharlierParams, FamilyParams, MeixnerParams};
use crate::numeric::{Coeff, Scalar};
use crate::poly::{stirling_table, MultiIndex, PolyT};

#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceRow<S> {
    pub n: MultiIndex,
    pub k: usize,
    pub b: S,
    pub d: Vec<S>,
}

fn check(r: usize, n: &MultiIndex, k: usize) -> Result<()> {
    if n.r() != r {
        return Err(Error::DimensionMismatch { expected: r, got: n.r() });
    }
    if k >= r {
        return Err(Error::Parameter(format!("leg {k} out of range for r = {r}")));
    }
    Ok(())
}

/// `b = a_k + |n|`, `d_j = a_j n_j`.
pub fn charlier_coeffs<S: Coeff>(params: &CharlierParams<S>, n: &MultiIndex, k: usize) -> Result<RecurrenceRow<S>> {
    check(params.r(), n, k)?;
    let a = params.a();
    let b = a[k].clone() + S::from_i64(n.total() as i64);
    let d = a
        .iter()
        .zip(n.entries())
        .map(|(aj, &nj)| aj.clone() * S::from_i64(nj as i64))
        .collect();
    Ok(RecurrenceRow { n: n.clone(), k, b, d })
}

/// `b = (|n|+beta) c_k/(1-c_k) + sum_j n_j/(1-c_j)`,
/// `d_j = c_j n_j (beta + |n| - 1)/(c_j - 1)^2`.
pub fn meixner_coeffs<S: Coeff>(params: &MeixnerParams<S>, n: &MultiIndex, k: usize) -> Result<RecurrenceRow<S>> {
    check(params.r(), n, k)?;
    let c = params.c();
    if let Some(l) = c.iter().position(|cl| cl.is_one()) {
        return Err(Error::Parameter(format!("c_{l} = 1")));
    }
    let total = S::from_i64(n.total() as i64);
    let one = S::one();
    let mut b = ((total.clone() + params.beta().clone()) * c[k].clone()).checked_div(&(one.clone() - c[k].clone()))?;
    for (cj, &nj) in c.iter().zip(n.entries()) {
        b = b + S::from_i64(nj as i64).checked_div(&(one.clone() - cj.clone()))?;
    }
    let shifted = params.beta().clone() + total - one.clone();
    let d = c
        .iter()
        .zip(n.entries())
        .map(|(cj, &nj)| {
            let gap = cj.clone() - one.clone();
            (cj.clone() * S::from_i64(nj as i64) * shifted.clone()).checked_div(&(gap.clone() * gap))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RecurrenceRow { n: n.clone(), k, b, d })
}

pub fn coeffs<S: Coeff>(params: &FamilyParams<S>, n: &MultiIndex, k: usize) -> Result<RecurrenceRow<S>> {
    match params {
        FamilyParams::Charlier(p) => charlier_coeffs(p, n, k),
        FamilyParams::Meixner(p) => meixner_coeffs(p, n, k),
    }
}

/// `(t - b) P_n - P_{n+e_k} - sum_j d_j P_{n-e_j}`, all polynomials from the
/// explicit pathway. Terms with `n_j = 0` are absent.
pub fn recurrence_residual<S: Coeff>(params: &FamilyParams<S>, n: &MultiIndex, k: usize) -> Result<PolyT<S>> {
    let row = coeffs(params, n, k)?;
    residual_for_row(params, &row)
}

pub fn residual_for_row<S: Coeff>(params: &FamilyParams<S>, row: &RecurrenceRow<S>) -> Result<PolyT<S>> {
    let n = &row.n;
    let p = explicit(params, n)?;
    let up = explicit(params, &n.raised(row.k))?;
    let mut out = &(&PolyT::linear_root(row.b.clone()) * &p) - &up;
    for (j, dj) in row.d.iter().enumerate() {
        if let Some(down) = n.lowered(j) {
            out = &out - &explicit(params, &down)?.scale(dj);
        }
    }
    Ok(out)
}

/// `alpha^n_{|n|-1} - alpha^{n+e_k}_{|n|}` read off the constructed
/// polynomials.
pub fn b_from_coefficients<S: Coeff>(params: &FamilyParams<S>, n: &MultiIndex, k: usize) -> Result<S> {
    check(params.r(), n, k)?;
    let total = n.total() as usize;
    let p = explicit(params, n)?;
    let up = explicit(params, &n.raised(k))?;
    let sub = if total == 0 { S::zero() } else { p.coeff(total - 1) };
    Ok(sub - up.coeff(total))
}

/// Closed-form-free oracle for `d_{n,l}`:
///
/// `sum_k k P_n(k) (-k)_{n_l-1} w_l(k) / sum_k P_{n-e_l}(k) (-k)_{n_l-1} w_l(k)`.
pub fn d_via_integral(params: &FamilyParams<Scalar>, n: &MultiIndex, leg: usize, tol: f64) -> Result<Scalar> {
    check(params.r(), n, leg)?;
    let Some(lower) = n.lowered(leg) else {
        return Err(Error::Parameter(format!("n_{leg} must be at least 1")));
    };
    let table = stirling_table(n.get(leg) as usize);
    let falling = table.neg_pochhammer::<Scalar>(n.get(leg) as usize - 1);
    let p = explicit(params, n)?;
    let q = explicit(params, &lower)?;
    let numerator = lattice_sum(params, leg, &(&p.mul_t() * &falling), tol)?;
    let denominator = lattice_sum(params, leg, &(&q * &falling), tol)?;
    let magnitude = denominator.value.abs_f64();
    if magnitude <= tol + denominator.tail_bound {
        return Err(Error::DegenerateDenominator { magnitude });
    }
    numerator.value.checked_div(&denominator.value)
}
