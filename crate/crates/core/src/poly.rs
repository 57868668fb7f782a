//! Polynomials in the reduced variable `t = z^r`.
//!
//! Every polynomial handled by the crate depends on `z` only through `z^r`,
//! so the variable of record is `t` and all shifts act on `t` (the mass
//! points sit at `t = 0, 1, 2, ...` on every ray). The `z` view exists only
//! in [`StarPolynomial`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Integer;

use crate::error::{Error, Result};
use crate::numeric::{Coeff, Scalar};

/// Multi-index `n = (n_0, ..., n_{r-1})` with nonnegative entries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Parameter("multi-index must have at least one entry".into()));
        }
        Ok(Self(entries))
    }

    pub fn zero(r: usize) -> Self {
        assert!(r > 0, "r must be positive");
        Self(vec![0; r])
    }

    pub fn unit(r: usize, leg: usize) -> Self {
        let mut n = Self::zero(r);
        n.0[leg] = 1;
        n
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    /// `|n|`
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, leg: usize) -> u32 {
        self.0[leg]
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn max_entry(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// `n + e_leg`
    pub fn raised(&self, leg: usize) -> Self {
        let mut n = self.clone();
        n.0[leg] += 1;
        n
    }

    /// `n - e_leg`, or `None` when the entry is already zero.
    pub fn lowered(&self, leg: usize) -> Option<Self> {
        if self.0[leg] == 0 {
            return None;
        }
        let mut n = self.clone();
        n.0[leg] -= 1;
        Some(n)
    }

    pub fn is_diagonal(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    /// All multi-indices of length `r` with `|n| <= max_total`, in
    /// lexicographic order.
    pub fn all_up_to(r: usize, max_total: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut current = vec![0u32; r];
        fn rec(pos: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if pos == current.len() {
                out.push(MultiIndex(current.clone()));
                return;
            }
            for v in 0..=remaining {
                current[pos] = v;
                rec(pos + 1, remaining - v, current, out);
            }
            current[pos] = 0;
        }
        rec(0, max_total, &mut current, &mut out);
        out
    }

    /// All multi-indices inside the box `0 <= n_l <= upper_l`.
    pub fn boxed(upper: &[u32]) -> Vec<MultiIndex> {
        let mut out = vec![Vec::new()];
        for &u in upper {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=u).map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(MultiIndex).collect()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Dense polynomial in `t`, lowest degree first, trailing zeros stripped.
/// The zero polynomial has no coefficients.
#[derive(Clone, PartialEq)]
pub struct PolyT<S> {
    coeffs: Vec<S>,
}

impl<S: Coeff> PolyT<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// `t - root`
    pub fn linear_root(root: S) -> Self {
        Self::new(vec![-root, S::one()])
    }

    pub fn monomial(degree: usize) -> Self {
        let mut coeffs = vec![S::zero(); degree + 1];
        coeffs[degree] = S::one();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^m`; zero beyond the degree.
    pub fn coeff(&self, m: usize) -> S {
        self.coeffs.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn is_monic(&self, tol: f64) -> bool {
        self.leading().is_some_and(|c| c.approx_eq(&S::one(), tol))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn try_div_scalar(&self, c: &S) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.checked_div(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }

    /// Multiplication by `t`.
    pub fn mul_t(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(S::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// `q(t) = p(t - 1)`.
    pub fn shift_arg(&self) -> Self {
        self.taylor_shift(-S::one())
    }

    /// `q(t) = p(t + 1)`, inverse of [`PolyT::shift_arg`].
    pub fn unshift_arg(&self) -> Self {
        self.taylor_shift(S::one())
    }

    /// `q(t) = p(t + h)` by repeated synthetic division.
    pub fn taylor_shift(&self, h: S) -> Self {
        let mut acc = Self::zero();
        let step = Self::new(vec![h, S::one()]);
        for c in self.coeffs.iter().rev() {
            acc = &acc * &step + Self::constant(c.clone());
        }
        acc
    }

    /// Horner evaluation.
    pub fn evaluate(&self, t: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(m, c)| c.clone() * S::from_i64(m as i64))
                .collect(),
        )
    }

    pub fn map<T: Coeff>(&self, f: impl Fn(&S) -> T) -> PolyT<T> {
        PolyT::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_scalar(&self, bits: u32) -> PolyT<Scalar> {
        self.map(|c| c.to_scalar(bits))
    }

    /// Largest coefficient modulus, zero for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(Coeff::abs_f64).fold(0.0, f64::max)
    }

    /// Sum of coefficient moduli; `|p(k)| <= norm1 * k^deg` for `k >= 1`.
    pub fn norm1(&self) -> f64 {
        self.coeffs.iter().map(Coeff::abs_f64).sum()
    }

    /// Max coefficient distance, padding the shorter polynomial with zeros.
    pub fn max_distance(&self, other: &Self) -> f64 {
        (self - other).max_abs_coeff()
    }
}

impl<S: fmt::Debug> fmt::Debug for PolyT<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl<S: Coeff> Add for &PolyT<S> {
    type Output = PolyT<S>;
    fn add(self, rhs: &PolyT<S>) -> PolyT<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyT::new((0..n).map(|m| self.coeff(m) + rhs.coeff(m)).collect())
    }
}

impl<S: Coeff> Sub for &PolyT<S> {
    type Output = PolyT<S>;
    fn sub(self, rhs: &PolyT<S>) -> PolyT<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyT::new((0..n).map(|m| self.coeff(m) - rhs.coeff(m)).collect())
    }
}

impl<S: Coeff> Mul for &PolyT<S> {
    type Output = PolyT<S>;
    fn mul(self, rhs: &PolyT<S>) -> PolyT<S> {
        if self.is_zero() || rhs.is_zero() {
            return PolyT::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        PolyT::new(out)
    }
}

impl<S: Coeff> Neg for &PolyT<S> {
    type Output = PolyT<S>;
    fn neg(self) -> PolyT<S> {
        PolyT::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<S: Coeff> $tr for PolyT<S> {
            type Output = PolyT<S>;
            fn $m(self, rhs: PolyT<S>) -> PolyT<S> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Polynomial in the basis `(-t)_0, (-t)_1, ...`; index `j` holds the
/// coefficient of `(-t)_j`.
#[derive(Clone, PartialEq, Debug)]
pub struct PochhammerPoly<S> {
    coeffs: Vec<S>,
}

impl<S: Coeff> PochhammerPoly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Converts with a freshly built table of the right size.
    pub fn to_monomial(&self) -> PolyT<S> {
        let table = stirling_table(self.coeffs.len().saturating_sub(1));
        pochhammer_to_monomial(self, &table).expect("table sized to the polynomial")
    }
}

/// Signed Stirling numbers of the first kind `S_n^(m)`, defined by
/// `(-z)_n = (-1)^n sum_m S_n^(m) z^m`.
#[derive(Clone, Debug)]
pub struct StirlingTable {
    rows: Vec<Vec<Integer>>,
}

impl StirlingTable {
    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: usize, m: usize) -> &Integer {
        &self.rows[n][m]
    }

    pub fn row(&self, n: usize) -> &[Integer] {
        &self.rows[n]
    }

    /// Monomial expansion of `(-t)_n`.
    pub fn neg_pochhammer<S: Coeff>(&self, n: usize) -> PolyT<S> {
        let sign = if n.is_multiple_of(2) { 1 } else { -1 };
        PolyT::new(
            self.rows[n]
                .iter()
                .map(|s| S::from_integer(&Integer::from(s * sign)))
                .collect(),
        )
    }
}

pub fn stirling_table(n_max: usize) -> StirlingTable {
    let mut rows: Vec<Vec<Integer>> = Vec::with_capacity(n_max + 1);
    rows.push(vec![Integer::from(1)]);
    for n in 0..n_max {
        let prev = &rows[n];
        let mut next = vec![Integer::new(); n + 2];
        for m in 1..=n + 1 {
            let mut v = prev.get(m - 1).cloned().unwrap_or_default();
            if let Some(s) = prev.get(m) {
                v -= Integer::from(s * n as u32);
            }
            next[m] = v;
        }
        rows.push(next);
    }
    StirlingTable { rows }
}

pub fn pochhammer_to_monomial<S: Coeff>(p: &PochhammerPoly<S>, table: &StirlingTable) -> Result<PolyT<S>> {
    let degree = p.coeffs.len().saturating_sub(1);
    if !p.coeffs.is_empty() && degree > table.n_max() {
        return Err(Error::TableTooSmall {
            available: table.n_max(),
            needed: degree,
        });
    }
    let mut out = vec![S::zero(); p.coeffs.len()];
    for (j, c) in p.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let sign: i64 = if j % 2 == 0 { 1 } else { -1 };
        for (m, s) in table.row(j).iter().enumerate() {
            if *s != 0 {
                let term = S::from_integer(&Integer::from(s * sign));
                out[m] = out[m].clone() + c.clone() * term;
            }
        }
    }
    Ok(PolyT::new(out))
}

/// Inverse of [`pochhammer_to_monomial`], peeling the leading term of
/// `(-t)_j`, which is `(-1)^j t^j`.
pub fn monomial_to_pochhammer<S: Coeff>(p: &PolyT<S>) -> PochhammerPoly<S> {
    let Some(degree) = p.degree() else {
        return PochhammerPoly::new(Vec::new());
    };
    let table = stirling_table(degree);
    let mut rest: Vec<S> = p.coeffs().to_vec();
    let mut out = vec![S::zero(); degree + 1];
    for j in (0..=degree).rev() {
        let c = if j % 2 == 0 { rest[j].clone() } else { -rest[j].clone() };
        if c.is_zero() {
            continue;
        }
        let sign: i64 = if j % 2 == 0 { 1 } else { -1 };
        for (m, s) in table.row(j).iter().enumerate() {
            if *s != 0 {
                rest[m] = rest[m].clone() - c.clone() * S::from_integer(&Integer::from(s * sign));
            }
        }
        out[j] = c;
    }
    PochhammerPoly::new(out)
}

/// Rising factorial `(t + shift)_n` as a polynomial in `t`.
pub fn rising_in_t<S: Coeff>(shift: &S, n: u32) -> PolyT<S> {
    let mut acc = PolyT::one();
    for i in 0..n {
        acc = &acc * &PolyT::new(vec![shift.clone() + S::from_i64(i as i64), S::one()]);
    }
    acc
}

/// A polynomial in `t` viewed as a function of `z` on the r-star.
#[derive(Clone, Debug, PartialEq)]
pub struct StarPolynomial {
    r: usize,
    base: PolyT<Scalar>,
}

impl StarPolynomial {
    pub fn new(r: usize, base: PolyT<Scalar>) -> Result<Self> {
        if r == 0 {
            return Err(Error::Parameter("r must be positive".into()));
        }
        Ok(Self { r, base })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn base(&self) -> &PolyT<Scalar> {
        &self.base
    }

    pub fn evaluate(&self, z: &Scalar) -> Scalar {
        evaluate_on_star(self, z)
    }
}

pub fn evaluate(p: &PolyT<Scalar>, t: &Scalar) -> Scalar {
    p.evaluate(t)
}

/// `base(z^r)`.
pub fn evaluate_on_star(sp: &StarPolynomial, z: &Scalar) -> Scalar {
    sp.base.evaluate(&z.powu(sp.r as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{approx_equal, ExactScalar};
    use proptest::prelude::*;
    use rug::Float;

    fn q(n: i64) -> ExactScalar {
        ExactScalar::from_i64(n)
    }

    fn poly(c: &[i64]) -> PolyT<ExactScalar> {
        PolyT::new(c.iter().map(|&v| q(v)).collect())
    }

    #[test]
    fn stirling_examples() {
        let t = stirling_table(3);
        assert_eq!(*t.get(1, 1), 1);
        assert_eq!(*t.get(2, 1), -1);
        assert_eq!(*t.get(2, 2), 1);
        assert_eq!(*t.get(3, 1), 2);
        assert_eq!(*t.get(3, 0), 0);
    }

    #[test]
    fn stirling_invariants_hold_past_u64() {
        let t = stirling_table(30);
        for n in 0..=30 {
            assert_eq!(*t.get(n, n), 1);
            if n >= 1 {
                assert_eq!(*t.get(n, 0), 0);
            }
        }
        for n in 1..30 {
            for m in 1..=n {
                let expect = t.get(n, m - 1) - Integer::from(t.get(n, m) * n as u32);
                assert_eq!(*t.get(n + 1, m), expect);
            }
        }
        assert!(t.get(25, 1).significant_bits() > 64);
    }

    #[test]
    fn stirling_matches_direct_product() {
        let t = stirling_table(12);
        for n in 0..=12 {
            let direct = (0..n).fold(PolyT::<ExactScalar>::one(), |acc, i| &acc * &poly(&[i as i64, -1]));
            assert_eq!(t.neg_pochhammer::<ExactScalar>(n), direct);
        }
    }

    #[test]
    fn pochhammer_to_monomial_examples() {
        let table = stirling_table(2);
        let p = |c: &[i64]| PochhammerPoly::new(c.iter().map(|&v| q(v)).collect());
        assert_eq!(pochhammer_to_monomial(&p(&[5]), &table).unwrap(), poly(&[5]));
        assert_eq!(pochhammer_to_monomial(&p(&[0, 1]), &table).unwrap(), poly(&[0, -1]));
        assert_eq!(pochhammer_to_monomial(&p(&[0, 0, 1]), &table).unwrap(), poly(&[0, -1, 1]));
        assert!(matches!(
            pochhammer_to_monomial(&p(&[0, 0, 0, 1]), &table),
            Err(Error::TableTooSmall { .. })
        ));
    }

    #[test]
    fn monomial_to_pochhammer_examples() {
        assert_eq!(monomial_to_pochhammer(&poly(&[1])).coeffs(), &[q(1)]);
        assert_eq!(monomial_to_pochhammer(&poly(&[0, -1, 1])).coeffs(), &[q(0), q(0), q(1)]);
        assert_eq!(monomial_to_pochhammer(&poly(&[0, 1])).coeffs(), &[q(0), q(-1)]);
    }

    #[test]
    fn leading_pair_of_signed_pochhammer() {
        let table = stirling_table(20);
        for n in 2..=20usize {
            let sign = if n % 2 == 0 { q(1) } else { q(-1) };
            let p = table.neg_pochhammer::<ExactScalar>(n).scale(&sign);
            assert_eq!(p.coeff(n), q(1));
            assert_eq!(p.coeff(n - 1), q(-((n * (n - 1) / 2) as i64)));
        }
    }

    #[test]
    fn shift_examples() {
        assert_eq!(poly(&[1]).shift_arg(), poly(&[1]));
        assert_eq!(poly(&[0, 1]).shift_arg(), poly(&[-1, 1]));
        assert_eq!(poly(&[0, 0, 1]).shift_arg(), poly(&[1, -2, 1]));
    }

    #[test]
    fn evaluate_examples() {
        let a = q(7);
        assert!(PolyT::linear_root(a.clone()).evaluate(&a).is_zero());
        assert_eq!(poly(&[2, -4, 1]).evaluate(&q(2)), q(-2));
        assert_eq!(poly(&[9, 3, 5]).evaluate(&q(0)), q(9));
    }

    #[test]
    fn star_evaluation_examples() {
        let bits = 256;
        let i = Scalar::new(Float::new(bits), Float::with_val(bits, 1));
        let sp = StarPolynomial::new(2, poly(&[0, 1]).to_scalar(bits)).unwrap();
        assert!(approx_equal(&sp.evaluate(&i), &Scalar::from_i64(-1), 1e-70));

        let w = Scalar::root_of_unity(3, 1, bits);
        let sp = StarPolynomial::new(3, poly(&[-1, 1]).to_scalar(bits)).unwrap();
        assert!(sp.evaluate(&w).abs_f64() < 1e-70);

        let two = Float::with_val(bits, 2);
        let z = Scalar::real((two.clone() + two.sqrt()).sqrt());
        let sp = StarPolynomial::new(2, poly(&[2, -4, 1]).to_scalar(bits)).unwrap();
        assert!(sp.evaluate(&z).abs_f64() < 1e-70);
    }

    #[test]
    fn multi_index_enumeration() {
        assert_eq!(MultiIndex::all_up_to(3, 6).len(), 84);
        assert_eq!(MultiIndex::boxed(&[1, 2]).len(), 6);
        let n = MultiIndex::new(vec![2, 0]).unwrap();
        assert!(n.lowered(1).is_none());
        assert_eq!(n.lowered(0).unwrap().entries(), &[1, 0]);
        assert_eq!(n.raised(1).total(), 3);
        assert!(MultiIndex::new(vec![]).is_err());
    }

    fn small_poly() -> impl Strategy<Value = PolyT<ExactScalar>> {
        proptest::collection::vec((-50i64..50, 1i64..5), 0..41)
            .prop_map(|c| PolyT::new(c.into_iter().map(|(n, d)| ExactScalar::ratio(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn basis_round_trip_is_identity(p in small_poly()) {
            let back = monomial_to_pochhammer(&p).to_monomial();
            prop_assert_eq!(back, p.clone());
            let pp = monomial_to_pochhammer(&p);
            prop_assert_eq!(monomial_to_pochhammer(&pp.to_monomial()), pp);
        }

        #[test]
        fn shift_then_unshift_is_identity(p in small_poly()) {
            prop_assert_eq!(p.shift_arg().unshift_arg(), p.clone());
        }

        #[test]
        fn shift_agrees_with_pointwise(p in small_poly(), t in -20i64..20) {
            prop_assert_eq!(p.shift_arg().evaluate(&q(t)), p.evaluate(&q(t - 1)));
        }

        #[test]
        fn omega_symmetry(coeffs in proptest::collection::vec(-9i64..9, 1..8), r in 1usize..6,
                          re in -1.5f64..1.5, im in -1.5f64..1.5) {
            let bits = 192;
            let sp = StarPolynomial::new(r, poly(&coeffs).to_scalar(bits)).unwrap();
            let z = Scalar::new(Float::with_val(bits, re), Float::with_val(bits, im));
            let base = sp.evaluate(&z);
            for j in 1..r {
                let zj = Scalar::root_of_unity(r, j, bits) * z.clone();
                prop_assert!(approx_equal(&sp.evaluate(&zj), &base, 2f64.powi(-(bits as i32) / 2)));
            }
        }
    }
}
