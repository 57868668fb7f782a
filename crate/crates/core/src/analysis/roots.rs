//! Polynomial root finding at working precision.
//!
//! Real-coefficient input goes through Sturm-sequence isolation and
//! bisection; if that does not account for every root (complex or repeated
//! roots), or the coefficients are complex, Aberth-Ehrlich simultaneous
//! iteration is used instead. Both finish with Newton polishing.

use rug::Float;

use crate::numeric::{Coeff, Scalar};
use crate::poly::PolyT;

fn eval_real(coeffs: &[Float], x: &Float, prec: u32) -> Float {
    let mut acc = Float::new(prec);
    for c in coeffs.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}

fn derivative_real(coeffs: &[Float], prec: u32) -> Vec<Float> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(m, c)| Float::with_val(prec, c * m as u32))
        .collect()
}

fn strip(mut v: Vec<Float>, eps: &Float) -> Vec<Float> {
    let scale = v.iter().map(|c| Float::with_val(c.prec(), c.abs_ref())).fold(Float::new(64), |a, b| a.max(&b));
    let cut = scale * eps;
    while v.last().is_some_and(|c| Float::with_val(c.prec(), c.abs_ref()) <= cut) {
        v.pop();
    }
    v
}

/// Remainder of `a / b` (both lowest degree first).
fn remainder(a: &[Float], b: &[Float], prec: u32) -> Vec<Float> {
    let mut rem: Vec<Float> = a.iter().map(|c| Float::with_val(prec, c)).collect();
    let db = b.len() - 1;
    let lead = &b[db];
    while rem.len() > db {
        let top = rem.len() - 1;
        let factor = Float::with_val(prec, &rem[top] / lead);
        for (i, bc) in b.iter().enumerate() {
            let idx = top - db + i;
            rem[idx] -= Float::with_val(prec, &factor * bc);
        }
        rem.pop();
    }
    rem
}

struct Sturm {
    chain: Vec<Vec<Float>>,
    prec: u32,
}

impl Sturm {
    fn new(coeffs: &[Float], prec: u32) -> Self {
        let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
        let mut chain = vec![coeffs.to_vec(), derivative_real(coeffs, prec)];
        loop {
            let len = chain.len();
            if chain[len - 1].len() <= 1 {
                break;
            }
            let r = remainder(&chain[len - 2], &chain[len - 1], prec);
            let r = strip(r, &eps);
            if r.is_empty() {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        Self { chain, prec }
    }

    fn variations(&self, x: &Float) -> usize {
        let mut count = 0;
        let mut last: Option<bool> = None;
        for p in &self.chain {
            let v = eval_real(p, x, self.prec);
            if v.is_zero() {
                continue;
            }
            let neg = v.is_sign_negative();
            if last.is_some_and(|l| l != neg) {
                count += 1;
            }
            last = Some(neg);
        }
        count
    }
}

fn cauchy_bound(coeffs: &[Scalar], prec: u32) -> Float {
    let lead = coeffs.last().expect("non-constant").abs();
    let mut best = Float::new(prec);
    for c in &coeffs[..coeffs.len() - 1] {
        let ratio = Float::with_val(prec, c.abs() / &lead);
        if ratio > best {
            best = ratio;
        }
    }
    best + 1u32
}

/// All roots of a real polynomial when they are real and distinct, else `None`.
pub fn real_roots_sturm(p: &PolyT<Scalar>, bits: u32) -> Option<Vec<Float>> {
    let degree = p.degree()?;
    let prec = bits + 32;
    let coeffs: Vec<Float> = p.coeffs().iter().map(|c| Float::with_val(prec, c.re())).collect();
    let sturm = Sturm::new(&coeffs, prec);
    let bound = cauchy_bound(p.coeffs(), prec);
    let lo = Float::with_val(prec, -&bound);
    let hi = bound;
    let total = sturm.variations(&lo).saturating_sub(sturm.variations(&hi));
    if total != degree {
        return None;
    }
    let mut isolated = Vec::with_capacity(degree);
    let mut stack = vec![(lo, hi, total)];
    let mut splits = 0usize;
    while let Some((a, b, count)) = stack.pop() {
        match count {
            0 => {}
            1 => isolated.push((a, b)),
            _ => {
                splits += 1;
                if splits > 64 * (bits as usize) * degree {
                    return None;
                }
                let mid = Float::with_val(prec, &a + &b) / 2u32;
                let vm = sturm.variations(&mid);
                let left = sturm.variations(&a).saturating_sub(vm);
                let right = vm.saturating_sub(sturm.variations(&b));
                stack.push((mid.clone(), b, right));
                stack.push((a, mid, left));
            }
        }
    }
    if isolated.len() != degree {
        return None;
    }
    let dcoeffs = derivative_real(&coeffs, prec);
    let mut roots: Vec<Float> = isolated
        .into_iter()
        .map(|(a, b)| refine_bisection(&coeffs, &dcoeffs, a, b, bits, prec))
        .collect();
    roots.sort_by(|x, y| x.partial_cmp(y).expect("finite roots"));
    Some(roots.into_iter().map(|r| Float::with_val(bits, r)).collect())
}

fn refine_bisection(coeffs: &[Float], dcoeffs: &[Float], mut a: Float, mut b: Float, bits: u32, prec: u32) -> Float {
    // the isolating interval is (a, b]; b itself may be the root
    if eval_real(coeffs, &b, prec).is_zero() {
        return b;
    }
    let mut fa = eval_real(coeffs, &a, prec);
    for _ in 0..(4 * prec) {
        let width = Float::with_val(prec, &b - &a);
        let scale = Float::with_val(prec, a.abs_ref()).max(&Float::with_val(prec, b.abs_ref())).max(&Float::with_val(prec, 1));
        if width <= scale * Float::with_val(prec, Float::i_exp(1, -(bits as i32) - 8)) {
            break;
        }
        let mid = Float::with_val(prec, &a + &b) / 2u32;
        let fm = eval_real(coeffs, &mid, prec);
        if fm.is_zero() {
            return mid;
        }
        if fm.is_sign_negative() == fa.is_sign_negative() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let mut x = Float::with_val(prec, &a + &b) / 2u32;
    for _ in 0..3 {
        let d = eval_real(dcoeffs, &x, prec);
        if d.is_zero() {
            break;
        }
        let step = eval_real(coeffs, &x, prec) / d;
        let candidate = Float::with_val(prec, &x - &step);
        if candidate < a || candidate > b {
            break;
        }
        x = candidate;
    }
    x
}

/// Aberth-Ehrlich iteration for all roots of `p` (any complex coefficients).
pub fn aberth_roots(p: &PolyT<Scalar>, bits: u32) -> Vec<Scalar> {
    let Some(degree) = p.degree() else {
        return Vec::new();
    };
    if degree == 0 {
        return Vec::new();
    }
    let prec = bits + 32;
    let lead = p.leading().expect("non-zero").to_scalar(prec);
    let monic = p
        .to_scalar(prec)
        .try_div_scalar(&lead)
        .expect("leading coefficient is non-zero");
    let dp = monic.derivative();
    let radius = cauchy_bound(monic.coeffs(), prec);
    let mut z: Vec<Scalar> = (0..degree)
        .map(|k| {
            let angle_turn = Scalar::root_of_unity(4 * degree, 4 * k + 1, prec);
            angle_turn.scale_f(&Float::with_val(prec, &radius * 0.5f64))
        })
        .collect();
    let tol = Float::with_val(prec, Float::i_exp(1, -(bits as i32) - 4));
    for _ in 0..(20 * prec as usize) {
        let mut worst = Float::new(prec);
        for k in 0..degree {
            let pv = monic.evaluate(&z[k]);
            if pv.is_zero() {
                continue;
            }
            let dv = dp.evaluate(&z[k]);
            let Ok(ratio) = pv.checked_div(&dv) else {
                continue;
            };
            let mut repulsion = Scalar::zero_with_prec(prec);
            for j in 0..degree {
                if j != k {
                    if let Ok(inv) = Scalar::one().checked_div(&(z[k].clone() - z[j].clone())) {
                        repulsion = repulsion + inv;
                    }
                }
            }
            let denom = Scalar::one() - ratio.clone() * repulsion;
            let step = ratio.checked_div(&denom).unwrap_or(ratio);
            let size = step.abs() / (z[k].abs() + 1u32);
            if size > worst {
                worst = size;
            }
            z[k] = z[k].clone() - step;
        }
        if worst <= tol {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..2 {
            let dv = dp.evaluate(zk);
            if let Ok(step) = monic.evaluate(zk).checked_div(&dv) {
                *zk = zk.clone() - step;
            }
        }
    }
    z.into_iter().map(|v| v.with_prec(bits)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ExactScalar;

    fn poly(c: &[i64]) -> PolyT<Scalar> {
        PolyT::new(c.iter().map(|&v| ExactScalar::from_i64(v).to_scalar(256)).collect())
    }

    #[test]
    fn sturm_finds_distinct_real_roots() {
        // (t-1)(t-2)(t-3)(t+4)
        let p = &(&poly(&[-1, 1]) * &poly(&[-2, 1])) * &(&poly(&[-3, 1]) * &poly(&[4, 1]));
        let roots = real_roots_sturm(&p, 256).unwrap();
        let expect = [-4.0, 1.0, 2.0, 3.0];
        for (r, e) in roots.iter().zip(expect) {
            assert!((r.to_f64() - e).abs() < 1e-60);
        }
    }

    #[test]
    fn sturm_rejects_complex_and_repeated() {
        assert!(real_roots_sturm(&poly(&[1, 0, 1]), 256).is_none());
        assert!(real_roots_sturm(&poly(&[1, -2, 1]), 256).is_none());
    }

    #[test]
    fn aberth_finds_complex_roots() {
        let roots = aberth_roots(&poly(&[1, 0, 1]), 256);
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert!(r.re().to_f64().abs() < 1e-60);
            assert!((r.im().to_f64().abs() - 1.0).abs() < 1e-60);
        }
    }

    #[test]
    fn aberth_on_close_real_roots() {
        let p = &(&poly(&[-1, 1]) * &poly(&[-2, 1])) * &poly(&[-10, 1]);
        let mut roots: Vec<f64> = aberth_roots(&p, 256).iter().map(|r| r.re().to_f64()).collect();
        roots.sort_by(f64::total_cmp);
        assert!((roots[0] - 1.0).abs() < 1e-50 && (roots[1] - 2.0).abs() < 1e-50 && (roots[2] - 10.0).abs() < 1e-50);
    }
}
