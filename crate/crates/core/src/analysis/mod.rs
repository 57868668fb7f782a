//! Orthogonality, zeros, ω-symmetry and the Meixner-to-Charlier limit.

pub mod roots;

use rug::Float;

use crate::constructors::{charlier_explicit, meixner_explicit};
use crate::error::{Error, Result};
use crate::measures::{lattice_sum, CharlierParams, FamilyParams, MeixnerParams};
use crate::numeric::{Coeff, PrecisionConfig, Scalar};
use crate::poly::{stirling_table, MultiIndex, PolyT, StarPolynomial};

#[derive(Debug, Clone)]
pub struct OrthogonalityReport {
    /// `residuals[l][j] = sum_k p(k) (-k)_j w_l(k)` for `j < n_l`.
    pub residuals: Vec<Vec<Scalar>>,
    pub tail_bounds: Vec<Vec<f64>>,
    pub max_residual: f64,
}

impl OrthogonalityReport {
    /// Every `|residual| + tail <= threshold`.
    pub fn passes(&self, threshold: f64) -> bool {
        self.residuals
            .iter()
            .zip(&self.tail_bounds)
            .flat_map(|(rs, ts)| rs.iter().zip(ts))
            .all(|(r, t)| r.abs_f64() + t <= threshold)
    }

    /// Largest `|residual| + tail` over all conditions.
    pub fn max_certified(&self) -> f64 {
        self.residuals
            .iter()
            .zip(&self.tail_bounds)
            .flat_map(|(rs, ts)| rs.iter().zip(ts))
            .map(|(r, t)| r.abs_f64() + t)
            .fold(0.0, f64::max)
    }
}

pub fn orthogonality_check(
    params: &FamilyParams<Scalar>,
    n: &MultiIndex,
    p: &PolyT<Scalar>,
    tol: f64,
) -> Result<OrthogonalityReport> {
    if n.r() != params.r() {
        return Err(Error::DimensionMismatch { expected: params.r(), got: n.r() });
    }
    let total = n.total() as usize;
    if p.degree().unwrap_or(0) != total {
        return Err(Error::Parameter(format!(
            "polynomial degree {:?} does not match |n| = {total}",
            p.degree()
        )));
    }
    let table = stirling_table(n.max_entry() as usize);
    let mut residuals = Vec::with_capacity(n.r());
    let mut tail_bounds = Vec::with_capacity(n.r());
    let mut max_residual = 0.0f64;
    for leg in 0..n.r() {
        let mut rs = Vec::new();
        let mut ts = Vec::new();
        for j in 0..n.get(leg) as usize {
            let integrand = p * &table.neg_pochhammer::<Scalar>(j);
            let sum = lattice_sum(params, leg, &integrand, tol)?;
            max_residual = max_residual.max(sum.value.abs_f64());
            rs.push(sum.value);
            ts.push(sum.tail_bound);
        }
        residuals.push(rs);
        tail_bounds.push(ts);
    }
    Ok(OrthogonalityReport {
        residuals,
        tail_bounds,
        max_residual,
    })
}

#[derive(Debug, Clone)]
pub struct Root {
    pub value: Scalar,
    /// Separated from every other root by more than the precision-scaled gap.
    pub simple: bool,
}

#[derive(Debug, Clone)]
pub struct StarZero {
    pub ray: usize,
    pub radius: Float,
}

#[derive(Debug, Clone)]
pub struct ZeroReport {
    pub t_roots: Vec<Root>,
    pub all_positive_real_simple: bool,
    pub star_zeros: Option<Vec<StarZero>>,
}

impl ZeroReport {
    /// Attaches `t^(1/r)` on every ray for each positive real root.
    pub fn with_star_zeros(mut self, r: usize) -> Self {
        let mut zeros = Vec::new();
        for root in &self.t_roots {
            let v = &root.value;
            if v.im().is_zero() && *v.re() > 0 {
                let radius = Float::with_val(v.prec(), v.re().root_ref(r as u32));
                for ray in 0..r {
                    zeros.push(StarZero { ray, radius: radius.clone() });
                }
            }
        }
        self.star_zeros = Some(zeros);
        self
    }
}

fn mark_simple(values: Vec<Scalar>, config: &PrecisionConfig) -> Vec<Root> {
    let sep = config.root_separation();
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let gap = sep * (1.0 + v.abs_f64());
            let simple = values
                .iter()
                .enumerate()
                .all(|(j, w)| i == j || (v.clone() - w.clone()).abs_f64() > gap);
            Root { value: v.clone(), simple }
        })
        .collect()
}

/// All roots of `p` in `t`.
///
/// For a diagonal index the expected picture is `|n|` simple positive
/// roots in `t`; each one gives `r` zeros `t^(1/r) omega^j` on the star, one
/// per ray. The count is taken from the degree in `t`, not from a per-ray
/// count of `n`.
///
/// Classification requires real coefficients. With
/// `require_classification` set, complex input yields
/// [`Error::ClassificationUnavailable`] carrying the unclassified roots.
pub fn zero_locate(p: &PolyT<Scalar>, require_classification: bool, config: &PrecisionConfig) -> Result<ZeroReport> {
    let degree = p.degree().unwrap_or(0);
    if degree == 0 {
        return Err(Error::Parameter("zero location needs degree >= 1".into()));
    }
    let bits = config.bits();
    let real_coeffs = p.coeffs().iter().all(Scalar::is_real);
    if real_coeffs {
        if let Some(roots) = roots::real_roots_sturm(p, bits) {
            let t_roots = mark_simple(roots.into_iter().map(Scalar::real).collect(), config);
            let all_positive_real_simple = t_roots.iter().all(|r| r.simple && *r.value.re() > 0);
            return Ok(ZeroReport {
                t_roots,
                all_positive_real_simple,
                star_zeros: None,
            });
        }
    }
    let mut values = roots::aberth_roots(p, bits);
    values.sort_by(|x, y| {
        x.re()
            .partial_cmp(y.re())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.im().partial_cmp(y.im()).unwrap_or(std::cmp::Ordering::Equal))
    });
    let report = ZeroReport {
        t_roots: mark_simple(values, config),
        all_positive_real_simple: false,
        star_zeros: None,
    };
    if !real_coeffs && require_classification {
        return Err(Error::ClassificationUnavailable(Box::new(report)));
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct LimitReport {
    pub beta_values: Vec<f64>,
    /// Max coefficient modulus of `M^{beta, gamma}_n - C^a_n`.
    pub coefficient_distances: Vec<f64>,
    /// Least-squares slope of `log distance` against `log beta` over the
    /// upper half of the grid; `None` when fewer than two nonzero points.
    pub fitted_rate: Option<f64>,
}

/// Meixner polynomials at `gamma_l = a_l/(a_l + beta)` compared with the
/// Charlier polynomial at `a`.
pub fn limit_check<S: Coeff>(a: &CharlierParams<S>, n: &MultiIndex, betas: &[S]) -> Result<LimitReport> {
    a.validate()?;
    if betas.is_empty() {
        return Err(Error::Parameter("beta grid is empty".into()));
    }
    let mut beta_values = Vec::with_capacity(betas.len());
    for beta in betas {
        let s = beta.to_scalar(64);
        if !s.is_real() || *s.re() <= 0 {
            return Err(Error::Parameter(format!("beta must be positive real, got {beta:?}")));
        }
        let v = s.re().to_f64();
        if beta_values.last().is_some_and(|&last| v <= last) {
            return Err(Error::Parameter("beta values must be strictly increasing".into()));
        }
        beta_values.push(v);
    }
    let charlier = charlier_explicit(a, n)?;
    let mut coefficient_distances = Vec::with_capacity(betas.len());
    for beta in betas {
        let gamma = a
            .a()
            .iter()
            .map(|al| al.checked_div(&(al.clone() + beta.clone())))
            .collect::<Result<Vec<_>>>()?;
        for (i, gi) in gamma.iter().enumerate() {
            if gamma[..i].iter().any(|gj| gj == gi) {
                return Err(Error::Parameter(format!("gamma_{i} collides with an earlier ray")));
            }
        }
        let meixner = MeixnerParams::new(beta.clone(), gamma)?;
        let m = meixner_explicit(&meixner, n)?;
        coefficient_distances.push((&m - &charlier).max_abs_coeff());
    }
    let fitted_rate = fit_rate(&beta_values, &coefficient_distances);
    Ok(LimitReport {
        beta_values,
        coefficient_distances,
        fitted_rate,
    })
}

fn fit_rate(betas: &[f64], dists: &[f64]) -> Option<f64> {
    let start = betas.len() / 2;
    let points: Vec<(f64, f64)> = betas[start..]
        .iter()
        .zip(&dists[start..])
        .filter(|(_, &d)| d > 0.0)
        .map(|(&b, &d)| (b.ln(), d.ln()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let len = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / len;
    let my = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn sample_points(samples: usize, bits: u32) -> Vec<Scalar> {
    (0..samples)
        .map(|s| {
            let radius = Float::with_val(bits, 0.5 + 0.37 * s as f64);
            Scalar::root_of_unity(97, (13 * s + 5) % 97, bits).scale_f(&radius)
        })
        .collect()
}

/// `|sp(omega^j z) - sp(z)| <= tol` on `samples` deterministic points.
pub fn symmetry_check(sp: &StarPolynomial, samples: usize, tol: f64) -> bool {
    symmetry_check_with(sp.r(), samples, tol, sp.base().coeffs().first().map_or(64, Scalar::prec), |z| {
        sp.evaluate(z)
    })
}

/// As [`symmetry_check`] with a caller-supplied evaluator.
pub fn symmetry_check_with(r: usize, samples: usize, tol: f64, bits: u32, eval: impl Fn(&Scalar) -> Scalar) -> bool {
    let bits = bits.max(64);
    sample_points(samples.max(1), bits).iter().all(|z| {
        let base = eval(z);
        (1..r).all(|j| {
            let rotated = Scalar::root_of_unity(r, j, bits) * z.clone();
            let v = eval(&rotated);
            (v.clone() - base.clone()).abs_f64() <= tol * (1.0 + base.abs_f64())
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::explicit;
    use crate::measures::MeixnerParams;
    use crate::numeric::{approx_equal, ExactScalar};

    fn ex(v: i64) -> ExactScalar {
        ExactScalar::from_i64(v)
    }

    fn charlier(a: &[i64]) -> CharlierParams<ExactScalar> {
        CharlierParams::new(a.iter().map(|&v| ex(v)).collect()).unwrap()
    }

    fn idx(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn orthogonality_linear_charlier() {
        let params = FamilyParams::Charlier(charlier(&[2])).to_scalar(256);
        let p = PolyT::new(vec![ex(-2), ex(1)]).to_scalar(256);
        let report = orthogonality_check(&params, &idx(&[1]), &p, 1e-60).unwrap();
        assert!(report.passes(1e-50), "{:?}", report.max_residual);
    }

    #[test]
    fn orthogonality_zero_index_is_empty() {
        let params = FamilyParams::Charlier(charlier(&[1, 2])).to_scalar(256);
        let report = orthogonality_check(&params, &idx(&[0, 0]), &PolyT::one(), 1e-60).unwrap();
        assert!(report.residuals.iter().all(Vec::is_empty));
        assert!(report.passes(0.0));
    }

    #[test]
    fn perturbed_polynomial_fails_by_the_mass() {
        let params = FamilyParams::Charlier(charlier(&[2])).to_scalar(256);
        let p = PolyT::new(vec![ex(-1), ex(1)]).to_scalar(256);
        let report = orthogonality_check(&params, &idx(&[1]), &p, 1e-60).unwrap();
        let mass = std::f64::consts::E.powi(2);
        assert!((report.residuals[0][0].abs_f64() - mass).abs() < 1e-12);
        assert!(!report.passes(1e-50));
    }

    #[test]
    fn orthogonality_for_meixner_pair() {
        let m = MeixnerParams::new(ex(1), vec![ExactScalar::ratio(1, 3), ExactScalar::ratio(1, 2)]).unwrap();
        let fam = FamilyParams::Meixner(m);
        for n in MultiIndex::all_up_to(2, 4) {
            let p = explicit(&fam, &n).unwrap().to_scalar(256);
            let report = orthogonality_check(&fam.to_scalar(256), &n, &p, 1e-60).unwrap();
            assert!(report.passes(1e-50), "{n:?}: {}", report.max_certified());
        }
    }

    #[test]
    fn zeros_of_linear() {
        let p = PolyT::new(vec![ex(-2), ex(1)]).to_scalar(256);
        let report = zero_locate(&p, true, &PrecisionConfig::default()).unwrap();
        assert_eq!(report.t_roots.len(), 1);
        assert!(report.all_positive_real_simple);
        assert_eq!(report.t_roots[0].value.re().to_f64(), 2.0);
    }

    #[test]
    fn zeros_of_charlier_pair_and_star_map() {
        let p = charlier_explicit(&charlier(&[1, 2]), &idx(&[1, 1])).unwrap().to_scalar(256);
        let report = zero_locate(&p, true, &PrecisionConfig::default()).unwrap();
        assert!(report.all_positive_real_simple);
        let s2 = 2f64.sqrt();
        let got: Vec<f64> = report.t_roots.iter().map(|r| r.value.re().to_f64()).collect();
        assert!((got[0] - (2.0 - s2)).abs() < 1e-15 && (got[1] - (2.0 + s2)).abs() < 1e-15);
        let star = report.with_star_zeros(2).star_zeros.unwrap();
        assert_eq!(star.len(), 4);
        assert_eq!(star.iter().filter(|z| z.ray == 1).count(), 2);
        assert!((star[0].radius.to_f64() - (2.0 - s2).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn complex_coefficients_refuse_classification() {
        let i = Scalar::new(Float::with_val(256, 0), Float::with_val(256, 1));
        let p = PolyT::new(vec![-i, Scalar::one()]);
        match zero_locate(&p, true, &PrecisionConfig::default()) {
            Err(Error::ClassificationUnavailable(report)) => assert_eq!(report.t_roots.len(), 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(zero_locate(&p, false, &PrecisionConfig::default()).is_ok());
    }

    #[test]
    fn repeated_root_is_not_simple() {
        let p = PolyT::new(vec![ex(4), ex(-4), ex(1)]).to_scalar(256);
        let report = zero_locate(&p, false, &PrecisionConfig::default()).unwrap();
        assert_eq!(report.t_roots.len(), 2);
        assert!(!report.all_positive_real_simple);
        assert!(report.t_roots.iter().all(|r| !r.simple));
    }

    #[test]
    fn limit_r1_exact_zero() {
        let betas: Vec<ExactScalar> = (4..=12).map(|e| ex(1 << e)).collect();
        let report = limit_check(&charlier(&[3]), &idx(&[1]), &betas).unwrap();
        assert!(report.coefficient_distances.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn limit_rate_near_minus_one() {
        let betas: Vec<ExactScalar> = (4..=12).map(|e| ex(1 << e)).collect();
        let report = limit_check(&charlier(&[1, 2]), &idx(&[1, 1]), &betas).unwrap();
        let rate = report.fitted_rate.unwrap();
        assert!((rate + 1.0).abs() <= 0.15, "{rate}");
    }

    #[test]
    fn limit_rejects_bad_grids() {
        assert!(limit_check(&charlier(&[1]), &idx(&[1]), &[ex(4), ex(2)]).is_err());
        assert!(limit_check(&charlier(&[1]), &idx(&[1]), &[ex(-2)]).is_err());
        // a = -1/2, beta = 1 gives gamma = -1
        let a = CharlierParams::new(vec![ExactScalar::ratio(-1, 2)]).unwrap();
        assert!(limit_check(&a, &idx(&[1]), &[ex(1)]).is_err());
    }

    #[test]
    fn symmetry_holds_and_mutation_is_caught() {
        let base = PolyT::new(vec![ex(0), ex(0), ex(1)]).to_scalar(256);
        let sp = StarPolynomial::new(3, base.clone()).unwrap();
        assert!(symmetry_check(&sp, 8, 1e-60));
        let z = Scalar::new(Float::with_val(256, 1), Float::with_val(256, 1));
        let w = Scalar::root_of_unity(3, 1, 256) * z.clone();
        assert!(approx_equal(&sp.evaluate(&w), &sp.evaluate(&z), 1e-60));
        let corrupted = |w: &Scalar| base.evaluate(&w.powu(2));
        assert!(!symmetry_check_with(3, 4, 1e-60, 256, corrupted));
    }
}
