//! The two discrete measure systems on the r-star.
//!
//! Mass points are `z_{j,k} = k^{1/r} w^j` with `w = exp(2 pi i / r)`. Every
//! sum in this crate depends on a mass point only through `z^r = k`, so
//! points are stored as a ray index and a lattice value.
//!
//! Weights (per ray `l`, lattice value `k`):
//!
//! * Charlier: `a_l^k / k!`
//! * Meixner:  `(beta)_k c_l^k / k!`, the negative binomial weight with the
//!   constant `Gamma(beta)` factored out. The constant scales every
//!   orthogonality condition of a ray uniformly and drops out of every
//!   construction.
//!
//! Both are generated by running products, so no Gamma function is ever
//! evaluated at a complex argument.

use rug::Float;

use crate::error::{Error, Result};
use crate::numeric::{Coeff, Scalar};
use crate::poly::PolyT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Charlier,
    Meixner,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Charlier => "charlier",
            Family::Meixner => "meixner",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharlierParams<S> {
    a: Vec<S>,
}

impl<S: Coeff> CharlierParams<S> {
    pub fn new(a: Vec<S>) -> Result<Self> {
        let p = Self::unchecked(a);
        p.validate()?;
        Ok(p)
    }

    pub fn unchecked(a: Vec<S>) -> Self {
        Self { a }
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.is_empty() {
            return Err(Error::Parameter("at least one ray is required".into()));
        }
        if let Some(l) = self.a.iter().position(Coeff::is_zero) {
            return Err(Error::Parameter(format!("a_{l} must be non-zero")));
        }
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[S] {
        &self.a
    }

    pub fn to_scalar(&self, bits: u32) -> CharlierParams<Scalar> {
        CharlierParams {
            a: self.a.iter().map(|v| v.to_scalar(bits)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeixnerParams<S> {
    beta: S,
    c: Vec<S>,
}

impl<S: Coeff> MeixnerParams<S> {
    pub fn new(beta: S, c: Vec<S>) -> Result<Self> {
        let p = Self::unchecked(beta, c);
        p.validate()?;
        Ok(p)
    }

    pub fn unchecked(beta: S, c: Vec<S>) -> Self {
        Self { beta, c }
    }

    pub fn validate(&self) -> Result<()> {
        if self.c.is_empty() {
            return Err(Error::Parameter("at least one ray is required".into()));
        }
        if self.beta.is_nonpositive_integer() {
            return Err(Error::Parameter(format!("beta = {:?} is a nonpositive integer", self.beta)));
        }
        for (l, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                return Err(Error::Parameter(format!("c_{l} must be non-zero")));
            }
            if !c.modulus_below_one() {
                return Err(Error::Parameter(format!("|c_{l}| must be below 1, got {:?}", c)));
            }
        }
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.c.len()
    }

    pub fn beta(&self) -> &S {
        &self.beta
    }

    pub fn c(&self) -> &[S] {
        &self.c
    }

    /// Same `c`, different `beta`; used by the Rodrigues pipeline, whose
    /// intermediate parameters are shifted by positive integers.
    pub fn with_beta(&self, beta: S) -> Self {
        Self {
            beta,
            c: self.c.clone(),
        }
    }

    /// `max_l |c_l|`, the bound that controls series convergence.
    pub fn c_bar(&self) -> f64 {
        self.c.iter().map(Coeff::abs_f64).fold(0.0, f64::max)
    }

    pub fn to_scalar(&self, bits: u32) -> MeixnerParams<Scalar> {
        MeixnerParams {
            beta: self.beta.to_scalar(bits),
            c: self.c.iter().map(|v| v.to_scalar(bits)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyParams<S> {
    Charlier(CharlierParams<S>),
    Meixner(MeixnerParams<S>),
}

impl<S: Coeff> FamilyParams<S> {
    pub fn family(&self) -> Family {
        match self {
            FamilyParams::Charlier(_) => Family::Charlier,
            FamilyParams::Meixner(_) => Family::Meixner,
        }
    }

    pub fn r(&self) -> usize {
        match self {
            FamilyParams::Charlier(p) => p.r(),
            FamilyParams::Meixner(p) => p.r(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FamilyParams::Charlier(p) => p.validate(),
            FamilyParams::Meixner(p) => p.validate(),
        }
    }

    /// The per-ray parameter (`a_l` or `c_l`).
    pub fn ray_params(&self) -> &[S] {
        match self {
            FamilyParams::Charlier(p) => p.a(),
            FamilyParams::Meixner(p) => p.c(),
        }
    }

    pub fn to_scalar(&self, bits: u32) -> FamilyParams<Scalar> {
        match self {
            FamilyParams::Charlier(p) => FamilyParams::Charlier(p.to_scalar(bits)),
            FamilyParams::Meixner(p) => FamilyParams::Meixner(p.to_scalar(bits)),
        }
    }

    /// `w(l, k + 1) / w(l, k)`.
    pub fn weight_ratio(&self, leg: usize, k: u64) -> Result<S> {
        let next = S::from_i64(k as i64 + 1);
        match self {
            FamilyParams::Charlier(p) => p.a[leg].checked_div(&next),
            FamilyParams::Meixner(p) => {
                (p.c[leg].clone() * (p.beta.clone() + S::from_i64(k as i64))).checked_div(&next)
            }
        }
    }

    pub fn weight(&self, leg: usize, k: u64) -> Result<S> {
        let mut w = S::one();
        for i in 0..k {
            w = w * self.weight_ratio(leg, i)?;
        }
        Ok(w)
    }

    /// Upper bound for the term ratio of `k^degree * |w(l, k)|` at every
    /// index `>= k`; monotone nonincreasing in `k` (requires `k >= 1`).
    fn ratio_bound(&self, leg: usize, k: u64, degree: usize) -> f64 {
        let kf = k as f64;
        let power = (1.0 + 1.0 / kf).powi(degree as i32);
        let base = match self {
            FamilyParams::Charlier(p) => p.a[leg].abs_f64() / (kf + 1.0),
            FamilyParams::Meixner(p) => {
                let beta_gap = (p.beta.clone() - S::one()).abs_f64();
                p.c[leg].abs_f64() * (1.0 + beta_gap / (kf + 1.0))
            }
        };
        base * power * (1.0 + 1e-12)
    }

    /// Ratio `rho*` the tail terms must certifiably stay below.
    pub fn target_ratio(&self) -> f64 {
        match self {
            FamilyParams::Charlier(_) => 0.5,
            FamilyParams::Meixner(p) => (1.0 + p.c_bar()) / 2.0,
        }
    }
}

pub fn weight_charlier<S: Coeff>(params: &CharlierParams<S>, leg: usize, k: u64) -> S {
    let mut w = S::one();
    for i in 0..k {
        w = w * params.a[leg].checked_div(&S::from_i64(i as i64 + 1)).expect("positive divisor");
    }
    w
}

pub fn weight_meixner<S: Coeff>(params: &MeixnerParams<S>, leg: usize, k: u64) -> Result<S> {
    params.validate()?;
    FamilyParams::Meixner(params.clone()).weight(leg, k)
}

/// Mass points `z_{j,k}` for `0 <= k < count`, stored as (ray, lattice value).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MassPointGrid {
    r: usize,
    count: u64,
}

impl MassPointGrid {
    pub fn new(r: usize, count: u64) -> Self {
        Self { r, count }
    }

    pub fn points(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        (0..self.r).flat_map(move |j| (0..self.count).map(move |k| (j, k)))
    }

    /// `t = z^r` of a point; exact by construction.
    pub fn lattice_value(&self, _ray: usize, k: u64) -> u64 {
        k
    }

    /// The complex coordinate `k^{1/r} w^ray`.
    pub fn coordinate(&self, ray: usize, k: u64, bits: u32) -> Scalar {
        let radius = Float::with_val(bits, k).root(self.r as u32);
        Scalar::root_of_unity(self.r, ray, bits).scale_f(&radius)
    }
}

/// A truncated lattice series with a certified bound on the omitted tail.
#[derive(Debug, Clone)]
pub struct SeriesSum {
    pub value: Scalar,
    pub tail_bound: f64,
    /// Number of lattice points summed (`k = 0 .. terms - 1`).
    pub terms: u64,
}

const MAX_TERMS: u64 = 2_000_000;

/// `sum_{k >= 0} q(k) w(l, k)` truncated once the tail is certified below `tol`.
///
/// For `k >= 1`, `|q(k)| <= ||q||_1 k^D` with `D = deg q`, so the tail after
/// index `K` is bounded by `||q||_1 K^D |w_K| rho/(1 - rho)` as soon as the
/// (monotone) ratio bound of `k^D |w_k|` at `K` is at most `rho`. At least
/// `8 (D + 1)` terms are always summed.
pub fn lattice_sum(params: &FamilyParams<Scalar>, leg: usize, integrand: &PolyT<Scalar>, tol: f64) -> Result<SeriesSum> {
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    params.validate()?;
    if let FamilyParams::Meixner(p) = params {
        if p.c_bar() >= 1.0 {
            return Err(Error::Parameter("Meixner series diverges for |c| >= 1".into()));
        }
    }
    let bits = params.ray_params().iter().map(Scalar::prec).max().unwrap_or(64);
    let degree = integrand.degree().unwrap_or(0);
    let norm = integrand.norm1();
    let rho = params.target_ratio();
    let min_terms = 8 * (degree as u64 + 1);

    let mut sum = Scalar::zero_with_prec(bits);
    let mut w = Scalar::one().with_prec(bits);
    let mut k: u64 = 0;
    loop {
        // at working precision: with only integer coefficients, Horner would
        // otherwise round at the 64-bit precision of the operands
        let kk = Scalar::from_i64(k as i64).with_prec(bits);
        sum = sum + integrand.evaluate(&kk) * w.clone();
        if k >= 1 && k + 1 >= min_terms && params.ratio_bound(leg, k, degree) <= rho {
            let majorant = norm * (k as f64).powi(degree as i32) * w.abs_f64();
            let tail = majorant * rho / (1.0 - rho);
            if tail < tol {
                return Ok(SeriesSum {
                    value: sum,
                    tail_bound: tail,
                    terms: k + 1,
                });
            }
        }
        if k >= MAX_TERMS {
            return Err(Error::NonConvergent { terms: k as usize });
        }
        w = w * params.weight_ratio(leg, k)?;
        k += 1;
    }
}

/// Moment `m_j^(l) = sum_k k^j w(l, k)`.
pub fn moment(params: &FamilyParams<Scalar>, leg: usize, power: usize, tol: f64) -> Result<SeriesSum> {
    lattice_sum(params, leg, &PolyT::monomial(power), tol)
}

/// Moments `m[l][j]` for `0 <= j <= max_power`.
#[derive(Debug, Clone)]
pub struct MomentTable {
    family: Family,
    moments: Vec<Vec<Scalar>>,
    tail_bounds: Vec<Vec<f64>>,
    k_used: u64,
}

impl MomentTable {
    pub fn build(params: &FamilyParams<Scalar>, max_power: usize, tol: f64) -> Result<Self> {
        let mut moments = Vec::with_capacity(params.r());
        let mut tail_bounds = Vec::with_capacity(params.r());
        let mut k_used = 0;
        for leg in 0..params.r() {
            let mut row = Vec::with_capacity(max_power + 1);
            let mut tails = Vec::with_capacity(max_power + 1);
            for j in 0..=max_power {
                let s = moment(params, leg, j, tol)?;
                k_used = k_used.max(s.terms);
                row.push(s.value);
                tails.push(s.tail_bound);
            }
            moments.push(row);
            tail_bounds.push(tails);
        }
        Ok(Self {
            family: params.family(),
            moments,
            tail_bounds,
            k_used,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn r(&self) -> usize {
        self.moments.len()
    }

    pub fn max_power(&self) -> usize {
        self.moments.first().map_or(0, |m| m.len() - 1)
    }

    pub fn get(&self, leg: usize, power: usize) -> &Scalar {
        &self.moments[leg][power]
    }

    pub fn tail_bound(&self, leg: usize, power: usize) -> f64 {
        self.tail_bounds[leg][power]
    }

    pub fn k_used(&self) -> u64 {
        self.k_used
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectnessReport {
    pub pass: bool,
    /// Rays whose parameters coincide.
    pub violating_pairs: Vec<(usize, usize)>,
    /// Problems with the parameters themselves (zero entries, invalid beta, ...).
    pub invalid: Vec<String>,
}

/// Pairwise distinctness of the ray parameters plus parameter validity.
///
/// Under the principal branch `ln(a_j / a_l) = 2 pi i k` only happens for
/// `k = 0`, i.e. `a_j = a_l`.
pub fn perfectness_check<S: Coeff>(params: &FamilyParams<S>, tol: f64) -> PerfectnessReport {
    let mut invalid = Vec::new();
    if let Err(e) = params.validate() {
        invalid.push(e.to_string());
    }
    let ray = params.ray_params();
    let mut violating_pairs = Vec::new();
    for j in 0..ray.len() {
        for l in j + 1..ray.len() {
            if ray[j].approx_eq(&ray[l], tol) {
                violating_pairs.push((j, l));
            }
        }
    }
    PerfectnessReport {
        pass: invalid.is_empty() && violating_pairs.is_empty(),
        violating_pairs,
        invalid,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{approx_equal, ExactScalar};
    use rug::float::Constant;

    const BITS: u32 = 256;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::ratio(n, d)
    }

    fn charlier(a: &[(i64, i64)]) -> FamilyParams<Scalar> {
        FamilyParams::Charlier(CharlierParams::new(a.iter().map(|&(n, d)| q(n, d)).collect()).unwrap().to_scalar(BITS))
    }

    fn meixner(beta: (i64, i64), c: &[(i64, i64)]) -> FamilyParams<Scalar> {
        FamilyParams::Meixner(
            MeixnerParams::new(q(beta.0, beta.1), c.iter().map(|&(n, d)| q(n, d)).collect())
                .unwrap()
                .to_scalar(BITS),
        )
    }

    #[test]
    fn charlier_weight_examples() {
        let p = CharlierParams::new(vec![q(2, 1)]).unwrap();
        assert_eq!(weight_charlier(&p, 0, 0), q(1, 1));
        assert_eq!(weight_charlier(&p, 0, 3), q(4, 3));
        let i = ExactScalar::new(0.into(), 1.into());
        let p = CharlierParams::new(vec![i]).unwrap();
        assert_eq!(weight_charlier(&p, 0, 2), q(-1, 2));
    }

    #[test]
    fn meixner_weight_examples() {
        let p = MeixnerParams::new(q(5, 3), vec![q(1, 2)]).unwrap();
        assert_eq!(weight_meixner(&p, 0, 0).unwrap(), q(1, 1));
        let p = MeixnerParams::new(q(2, 1), vec![q(1, 2)]).unwrap();
        assert_eq!(weight_meixner(&p, 0, 1).unwrap(), q(1, 1));
        let c = q(2, 7);
        let p = MeixnerParams::new(q(1, 1), vec![c.clone()]).unwrap();
        for k in 0..6 {
            let ck = (0..k).fold(q(1, 1), |acc, _| acc * c.clone());
            assert_eq!(weight_meixner(&p, 0, k).unwrap(), ck);
        }
        let bad = MeixnerParams::unchecked(q(-1, 1), vec![q(1, 2)]);
        assert!(weight_meixner(&bad, 0, 1).is_err());
    }

    #[test]
    fn charlier_moment_closed_forms() {
        let e = Float::with_val(BITS, 1).exp();
        let m0 = moment(&charlier(&[(1, 1)]), 0, 0, 1e-70).unwrap();
        assert!(approx_equal(&m0.value, &Scalar::real(e), 1e-64));
        assert!(m0.tail_bound < 1e-70);

        let a = Float::with_val(BITS, 3) / 2u32;
        let expect = Scalar::real(a.clone() * a.exp());
        let m1 = moment(&charlier(&[(3, 2)]), 0, 1, 1e-70).unwrap();
        assert!(approx_equal(&m1.value, &expect, 1e-64));
    }

    #[test]
    fn meixner_moment_closed_form() {
        // sum (beta)_k c^k / k! = (1 - c)^(-beta)
        for (beta, c) in [((1, 2), (1, 4)), ((3, 1), (1, 3)), ((1, 1), (1, 2))] {
            let params = meixner(beta, &[c]);
            let b = Float::with_val(BITS, beta.0) / beta.1 as u32;
            let cf = Float::with_val(BITS, c.0) / c.1 as u32;
            let expect = rug::ops::Pow::pow(Float::with_val(BITS, 1) - cf, -b);
            let m0 = moment(&params, 0, 0, 1e-70).unwrap();
            assert!(approx_equal(&m0.value, &Scalar::real(expect), 2f64.powi(-64)), "{beta:?} {c:?}");
        }
    }

    #[test]
    fn doubling_terms_stays_inside_tail_bound() {
        for params in [charlier(&[(3, 1)]), meixner((1, 2), &[(1, 2)])] {
            for j in [0usize, 3, 7] {
                let s = moment(&params, 0, j, 1e-40).unwrap();
                // brute force with twice as many terms
                let mut longer = Scalar::zero_with_prec(BITS);
                let mut w = Scalar::one().with_prec(BITS);
                for k in 0..2 * s.terms {
                    longer = longer + Scalar::from_i64(k as i64).with_prec(BITS).powu(j as u32) * w.clone();
                    w = w * params.weight_ratio(0, k).unwrap();
                }
                let diff = (longer - s.value.clone()).abs_f64();
                assert!(diff <= s.tail_bound, "j={j}: {diff:e} > {:e}", s.tail_bound);
            }
        }
    }

    #[test]
    fn empirical_ratio_below_target_at_truncation() {
        for params in [charlier(&[(2, 1)]), meixner((3, 1), &[(1, 3)])] {
            let s = moment(&params, 0, 4, 1e-50).unwrap();
            let k = s.terms - 1;
            let term = |k: u64| (k as f64).powi(4) * params.weight(0, k).unwrap().abs_f64();
            let ratio = term(k + 1) / term(k);
            assert!(ratio < params.target_ratio());
        }
    }

    #[test]
    fn minimum_term_count() {
        let s = moment(&charlier(&[(1, 100)]), 0, 3, 1e-3).unwrap();
        assert!(s.terms >= 32);
    }

    #[test]
    fn perfectness_examples() {
        let pass = perfectness_check(&FamilyParams::Charlier(CharlierParams::unchecked(vec![q(1, 1), q(2, 1)])), 0.0);
        assert!(pass.pass);
        let fail = perfectness_check(&FamilyParams::Charlier(CharlierParams::unchecked(vec![q(1, 1), q(1, 1)])), 0.0);
        assert!(!fail.pass);
        assert_eq!(fail.violating_pairs, vec![(0, 1)]);
        let bad_beta = perfectness_check(
            &FamilyParams::Meixner(MeixnerParams::unchecked(q(-1, 1), vec![q(1, 2), q(1, 3)])),
            0.0,
        );
        assert!(!bad_beta.pass);
        assert!(bad_beta.violating_pairs.is_empty());
        assert_eq!(bad_beta.invalid.len(), 1);
    }

    #[test]
    fn parameter_validation() {
        assert!(CharlierParams::new(vec![q(0, 1)]).is_err());
        assert!(MeixnerParams::new(q(1, 1), vec![q(1, 1)]).is_err());
        assert!(MeixnerParams::new(q(0, 1), vec![q(1, 2)]).is_err());
        assert!(MeixnerParams::new(q(-1, 2), vec![q(1, 2)]).is_ok());
        let unit = ExactScalar::new(0.into(), 1.into());
        assert!(MeixnerParams::new(q(1, 1), vec![unit]).is_err());
    }

    #[test]
    fn mass_points_lie_on_rays() {
        let grid = MassPointGrid::new(3, 5);
        for (ray, k) in grid.points() {
            let z = grid.coordinate(ray, k, BITS);
            let zr = z.powu(3);
            assert!(approx_equal(&zr, &Scalar::from_i64(grid.lattice_value(ray, k) as i64), 1e-70));
            if k > 0 {
                let expected = Float::with_val(BITS, Constant::Pi) * 2u32 * ray as u32 / 3u32;
                let mut arg = z.arg();
                if arg < 0 {
                    arg += Float::with_val(BITS, Constant::Pi) * 2u32;
                }
                assert!((arg - expected).abs() < 1e-60);
            }
        }
    }
}
