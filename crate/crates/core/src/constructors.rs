//! Three independent ways to build the monic type II polynomial `P_n(t)`:
//!
//! * **explicit**: the closed-form double sum in the basis `(-t)_s`,
//!   grouped by `s = |k|` and converted to monomials;
//! * **rodrigues**: iterated first-order raising operators starting from
//!   the constant `1`;
//! * **determinant**: the linear system imposed by the orthogonality
//!   conditions, assembled from certified moments and solved in floating
//!   point.
//!
//! The first two are pure ring computations and run in either scalar regime;
//! the third needs series and runs on [`Scalar`] only.

use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::measures::{CharlierParams, FamilyParams, MeixnerParams, MomentTable};
use crate::numeric::{Coeff, PrecisionConfig, Scalar};
use crate::poly::{rising_in_t, stirling_table, MultiIndex, PochhammerPoly, PolyT};

/// Extra bits carried by the moment solve before rounding back.
pub const GUARD_BITS: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pathway {
    Explicit,
    Rodrigues,
    Determinant,
}

impl Pathway {
    pub fn name(self) -> &'static str {
        match self {
            Pathway::Explicit => "explicit",
            Pathway::Rodrigues => "rodrigues",
            Pathway::Determinant => "determinant",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConstructionReport<S> {
    pub pathway: Pathway,
    pub polynomial: PolyT<S>,
    /// 1-norm condition number of the solved system (determinant pathway).
    pub condition_estimate: Option<f64>,
    pub exact: bool,
}

fn check_dims(r: usize, n: &MultiIndex) -> Result<()> {
    if n.r() != r {
        return Err(Error::DimensionMismatch { expected: r, got: n.r() });
    }
    Ok(())
}

fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

/// Product of per-ray coefficient vectors: entry `s` collects every `k` with `|k| = s`.
fn convolve_rays<S: Coeff>(rays: Vec<Vec<S>>) -> Vec<S> {
    rays.into_iter()
        .fold(PolyT::one(), |acc, v| &acc * &PolyT::new(v))
        .into_coeffs()
}

pub fn charlier_explicit<S: Coeff>(params: &CharlierParams<S>, n: &MultiIndex) -> Result<PolyT<S>> {
    check_dims(params.r(), n)?;
    // ray l contributes C(n_l, k) (-a_l)^(n_l - k) to the weight of (-1)^k (-t)_k
    let rays = params
        .a()
        .iter()
        .zip(n.entries())
        .map(|(a, &nl)| {
            let neg_a = -a.clone();
            (0..=nl)
                .map(|k| {
                    let pow = (0..nl - k).fold(S::one(), |acc, _| acc * neg_a.clone());
                    S::from_integer(&binomial(nl, k)) * pow
                })
                .collect()
        })
        .collect();
    let grouped = convolve_rays(rays);
    let coeffs = grouped
        .into_iter()
        .enumerate()
        .map(|(s, g)| if s % 2 == 0 { g } else { -g })
        .collect();
    Ok(PochhammerPoly::new(coeffs).to_monomial())
}

pub fn meixner_explicit<S: Coeff>(params: &MeixnerParams<S>, n: &MultiIndex) -> Result<PolyT<S>> {
    check_dims(params.r(), n)?;
    let total = n.total();
    let mut rays = Vec::with_capacity(params.r());
    for (c, &nl) in params.c().iter().zip(n.entries()) {
        let cm1 = c.clone() - S::one();
        let denom = (0..nl).fold(S::one(), |acc, _| acc * cm1.clone());
        let mut v = Vec::with_capacity(nl as usize + 1);
        for k in 0..=nl {
            let pow = (0..nl - k).fold(S::one(), |acc, _| acc * c.clone());
            v.push((S::from_integer(&binomial(nl, k)) * pow).checked_div(&denom)?);
        }
        rays.push(v);
    }
    let grouped = convolve_rays(rays);
    let table = stirling_table(total as usize);
    let mut out = PolyT::zero();
    for (s, g) in grouped.into_iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let falling = table.neg_pochhammer::<S>(s);
        let rising = rising_in_t(params.beta(), total - s as u32);
        out = &out + &(&falling * &rising).scale(&g);
    }
    Ok(out)
}

/// `t p(t-1) - a_l p(t)`: maps `P_n` to `P_{n + e_l}`.
pub fn raising_charlier_step<S: Coeff>(p: &PolyT<S>, params: &CharlierParams<S>, leg: usize) -> PolyT<S> {
    &p.shift_arg().mul_t() - &p.scale(&params.a()[leg])
}

pub fn rodrigues_charlier<S: Coeff>(params: &CharlierParams<S>, n: &MultiIndex) -> Result<PolyT<S>> {
    check_dims(params.r(), n)?;
    let mut p = PolyT::one();
    for leg in 0..n.r() {
        for _ in 0..n.get(leg) {
            p = raising_charlier_step(&p, params, leg);
        }
    }
    Ok(p)
}

/// `(c_l/(c_l-1)) [ (t + beta' - 1) p(t) - (t/c_l) p(t-1) ]`: maps the
/// polynomial at parameter `beta'` to the one at `beta' - 1` with leg `l`
/// raised.
pub fn raising_meixner_step<S: Coeff>(
    p: &PolyT<S>,
    params: &MeixnerParams<S>,
    leg: usize,
    beta_current: &S,
) -> Result<PolyT<S>> {
    let c = &params.c()[leg];
    let cm1 = c.clone() - S::one();
    if cm1.is_zero() {
        return Err(Error::Parameter(format!("c_{leg} = 1 makes the raising operator singular")));
    }
    let factor = c.checked_div(&cm1)?;
    let linear = PolyT::new(vec![beta_current.clone() - S::one(), S::one()]);
    let shifted = p.shift_arg().mul_t().try_div_scalar(c)?;
    Ok((&(&linear * p) - &shifted).scale(&factor))
}

/// Starts from `1` at parameter `beta + |n|` and applies `|n|` raising
/// steps, legs in ascending order, lowering the running parameter by one
/// per step.
pub fn rodrigues_meixner<S: Coeff>(params: &MeixnerParams<S>, n: &MultiIndex) -> Result<PolyT<S>> {
    check_dims(params.r(), n)?;
    let mut beta_running = params.beta().clone() + S::from_i64(n.total() as i64);
    let mut p = PolyT::one();
    for leg in 0..n.r() {
        for _ in 0..n.get(leg) {
            p = raising_meixner_step(&p, params, leg, &beta_running)?;
            beta_running = beta_running - S::one();
        }
    }
    Ok(p)
}

pub fn explicit<S: Coeff>(params: &FamilyParams<S>, n: &MultiIndex) -> Result<PolyT<S>> {
    match params {
        FamilyParams::Charlier(p) => charlier_explicit(p, n),
        FamilyParams::Meixner(p) => meixner_explicit(p, n),
    }
}

pub fn rodrigues<S: Coeff>(params: &FamilyParams<S>, n: &MultiIndex) -> Result<PolyT<S>> {
    match params {
        FamilyParams::Charlier(p) => rodrigues_charlier(p, n),
        FamilyParams::Meixner(p) => rodrigues_meixner(p, n),
    }
}

/// Highest moment power needed for multi-index `n`.
pub fn moment_order(n: &MultiIndex) -> usize {
    (n.total() + n.max_entry()).saturating_sub(1) as usize
}

/// Moment-matrix construction at `config.bits + GUARD_BITS`, rounded to
/// `config.bits` on return.
pub fn determinant_construct(
    params: &FamilyParams<Scalar>,
    n: &MultiIndex,
    tol: f64,
    config: &PrecisionConfig,
) -> Result<ConstructionReport<Scalar>> {
    check_dims(params.r(), n)?;
    let work_bits = config.bits() + GUARD_BITS;
    let wide = params.to_scalar(work_bits);
    let table = MomentTable::build(&wide, moment_order(n), tol)?;
    determinant_from_moments(&table, n, config)
}

/// Solves for the non-leading coefficients `alpha_0 .. alpha_{N-1}`:
/// for every ray `l` and `i < n_l`,
/// `sum_m alpha_m m^(l)_{m+i} = -m^(l)_{N+i}`.
pub fn determinant_from_moments(
    table: &MomentTable,
    n: &MultiIndex,
    config: &PrecisionConfig,
) -> Result<ConstructionReport<Scalar>> {
    check_dims(table.r(), n)?;
    let total = n.total() as usize;
    if total == 0 {
        return Ok(ConstructionReport {
            pathway: Pathway::Determinant,
            polynomial: PolyT::one(),
            condition_estimate: Some(1.0),
            exact: false,
        });
    }
    if moment_order(n) > table.max_power() {
        return Err(Error::Parameter(format!(
            "moment table holds powers up to {}, need {}",
            table.max_power(),
            moment_order(n)
        )));
    }
    let mut matrix = Vec::with_capacity(total);
    let mut rhs = Vec::with_capacity(total);
    for leg in 0..n.r() {
        for i in 0..n.get(leg) as usize {
            matrix.push((0..total).map(|m| table.get(leg, m + i).clone()).collect::<Vec<_>>());
            rhs.push(-table.get(leg, total + i).clone());
        }
    }
    let non_normal = |reason: String| Error::NonNormalIndex {
        index: n.entries().to_vec(),
        reason,
    };
    let solution = solve_dense(&matrix, &rhs).map_err(|_| non_normal("singular moment matrix".into()))?;
    let gate = 2f64.powi(config.bits() as i32 / 2);
    if !(solution.condition <= gate) {
        return Err(non_normal(format!("condition estimate {:e} exceeds {gate:e}", solution.condition)));
    }
    if !(solution.relative_residual <= 2f64.powi(-(config.bits() as i32) / 2)) {
        return Err(non_normal(format!("residual check failed ({:e})", solution.relative_residual)));
    }
    let mut coeffs: Vec<Scalar> = solution.x.into_iter().map(|v| v.with_prec(config.bits())).collect();
    coeffs.push(Scalar::one().with_prec(config.bits()));
    Ok(ConstructionReport {
        pathway: Pathway::Determinant,
        polynomial: PolyT::new(coeffs),
        condition_estimate: Some(solution.condition),
        exact: false,
    })
}

pub struct DenseSolution {
    pub x: Vec<Scalar>,
    /// `||A||_1 ||A^-1||_1`
    pub condition: f64,
    /// `||Ax - b||_inf / (||A||_inf ||x||_inf + ||b||_inf)`
    pub relative_residual: f64,
}

fn col_norm1(m: &[Vec<Scalar>]) -> f64 {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].abs_f64()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Gauss-Jordan with partial pivoting on `[A | I | b]`.
pub fn solve_dense(a: &[Vec<Scalar>], b: &[Scalar]) -> Result<DenseSolution> {
    let size = a.len();
    let prec = a.iter().flatten().map(Scalar::prec).max().unwrap_or(64);
    let width = 2 * size + 1;
    let mut aug: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, bi))| {
            let mut r = row.clone();
            r.extend((0..size).map(|j| {
                if i == j {
                    Scalar::one().with_prec(prec)
                } else {
                    Scalar::zero_with_prec(prec)
                }
            }));
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..size {
        let (pivot_row, pivot_abs) = (col..size)
            .map(|r| (r, aug[r][col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap_or(std::cmp::Ordering::Equal))
            .expect("non-empty range");
        if pivot_abs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        aug.swap(col, pivot_row);
        let pivot = aug[col][col].clone();
        for j in col..width {
            aug[col][j] = aug[col][j].checked_div(&pivot)?;
        }
        for r in 0..size {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let factor = aug[r][col].clone();
            for j in col..width {
                let v = aug[col][j].clone() * factor.clone();
                aug[r][j] = aug[r][j].clone() - v;
            }
        }
    }
    let inverse: Vec<Vec<Scalar>> = aug.iter().map(|row| row[size..2 * size].to_vec()).collect();
    let x: Vec<Scalar> = aug.iter().map(|row| row[width - 1].clone()).collect();
    let condition = col_norm1(a) * col_norm1(&inverse);

    let mut worst = 0f64;
    let mut a_inf = 0f64;
    for (row, bi) in a.iter().zip(b) {
        let mut acc = -bi.clone();
        for (aij, xj) in row.iter().zip(&x) {
            acc = acc + aij.clone() * xj.clone();
        }
        worst = worst.max(acc.abs_f64());
        a_inf = a_inf.max(row.iter().map(Coeff::abs_f64).sum());
    }
    let x_inf = x.iter().map(Coeff::abs_f64).fold(0.0, f64::max);
    let b_inf = b.iter().map(Coeff::abs_f64).fold(0.0, f64::max);
    let scale = a_inf * x_inf + b_inf;
    let relative_residual = if scale > 0.0 { worst / scale } else { worst };
    Ok(DenseSolution {
        x,
        condition,
        relative_residual,
    })
}

/// Coefficientwise agreement bound `10 * kappa * 2^-bits`.
pub fn determinant_tolerance(condition: f64, bits: u32) -> f64 {
    10.0 * condition * 2f64.powi(-(bits as i32))
}

/// Builds a float polynomial from `p` and reports its max coefficient
/// distance from `q`, both rounded to `bits`.
pub fn float_distance<S: Coeff>(p: &PolyT<S>, q: &PolyT<Scalar>, bits: u32) -> f64 {
    let wide = bits + GUARD_BITS;
    let diff = &p.to_scalar(wide) - &q.to_scalar(wide);
    diff.coeffs()
        .iter()
        .map(|c| Float::with_val(wide, c.abs()).to_f64())
        .fold(0.0, f64::max)
}
