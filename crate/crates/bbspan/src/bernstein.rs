//! Bernstein-basis kernels on the local parameter `t ∈ [0, 1]`.
//!
//! Provides evaluation of single basis polynomials
//! `B^n_i(t) = C(n,i) t^i (1-t)^{n-i}`, de Casteljau evaluation of
//! coefficient vectors, and the three coefficient maps the conversion
//! algorithms and their verification need: multiplication by `t`, degree
//! elevation, and differentiation.

use crate::scalar::Scalar;
use thiserror::Error;

/// Errors from the Bernstein kernels.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BernsteinError {
    #[error("basis index {i} out of range 0..={n}")]
    IndexOutOfRange { i: usize, n: usize },

    #[error("cannot differentiate a degree-0 polynomial")]
    DegreeZero,
}

/// Binomial coefficient `C(n, k)` as an `f64`.
///
/// Uses the multiplicative recurrence, never factorials; every intermediate
/// is an exact integer below 2^53 for `n ≤ 51`, which covers the degrees
/// this crate exercises.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for q in 1..=k {
        c = c * ((n - k + q) as f64) / (q as f64);
    }
    c
}

/// Value of the `i`th Bernstein basis polynomial of degree `n` at `t`.
pub fn eval_basis(n: usize, i: usize, t: f64) -> Result<f64, BernsteinError> {
    if i > n {
        return Err(BernsteinError::IndexOutOfRange { i, n });
    }
    Ok(binomial(n, i) * t.powi(i as i32) * (1.0 - t).powi((n - i) as i32))
}

/// A polynomial in Bernstein form: `Σ_k c_k B^n_k(t)` with `n = degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> BernsteinPoly<T> {
    /// Wraps a coefficient vector; the degree is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a Bernstein polynomial needs at least one coefficient");
        BernsteinPoly { coeffs }
    }

    /// The zero polynomial of the given degree.
    pub fn zero(degree: usize) -> Self {
        BernsteinPoly {
            coeffs: vec![T::zero(); degree + 1],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Evaluates at `t` by the de Casteljau scheme: repeated convex
    /// combinations, numerically stable on `[0, 1]`.
    pub fn eval(&self, t: &T) -> T {
        let s = T::one() - t.clone();
        let mut buf = self.coeffs.clone();
        for level in (1..buf.len()).rev() {
            for k in 0..level {
                buf[k] = buf[k].clone() * s.clone() + buf[k + 1].clone() * t.clone();
            }
        }
        buf.into_iter().next().unwrap()
    }

    /// Coefficients of `t · p(t)`, one degree higher:
    /// `c'_{k+1} = c_k (k+1)/(n+1)` with `c'_0 = 0`, from the identity
    /// `t B^n_k = ((k+1)/(n+1)) B^{n+1}_{k+1}`.
    pub fn multiply_by_t(&self) -> Self {
        let n1 = T::from_int(self.coeffs.len() as i64);
        let mut out = vec![T::zero(); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k + 1] = c.clone() * T::from_int(k as i64 + 1) / n1.clone();
        }
        BernsteinPoly { coeffs: out }
    }

    /// The same polynomial one degree higher:
    /// `c'_k = c_{k-1} k/(n+1) + c_k (n+1-k)/(n+1)`.
    pub fn degree_elevate(&self) -> Self {
        let n1 = T::from_int(self.coeffs.len() as i64);
        let mut out = vec![T::zero(); self.coeffs.len() + 1];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut acc = T::zero();
            if k > 0 && k - 1 < self.coeffs.len() {
                acc = acc + self.coeffs[k - 1].clone() * T::from_int(k as i64) / n1.clone();
            }
            if k < self.coeffs.len() {
                acc = acc
                    + self.coeffs[k].clone() * (n1.clone() - T::from_int(k as i64)) / n1.clone();
            }
            *slot = acc;
        }
        BernsteinPoly { coeffs: out }
    }

    /// Coefficients of `d/dt p(t)`, one degree lower:
    /// `d_k = n (c_{k+1} - c_k)`.
    pub fn derivative(&self) -> Result<Self, BernsteinError> {
        let n = self.degree();
        if n == 0 {
            return Err(BernsteinError::DegreeZero);
        }
        let nf = T::from_int(n as i64);
        let coeffs = self
            .coeffs
            .windows(2)
            .map(|w| nf.clone() * (w[1].clone() - w[0].clone()))
            .collect();
        Ok(BernsteinPoly { coeffs })
    }

    /// Coefficient-wise scaling.
    pub fn scale(&self, factor: &T) -> Self {
        BernsteinPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.clone() * factor.clone())
                .collect(),
        }
    }

    /// Coefficient-wise sum; degrees must match.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in add");
        BernsteinPoly {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    /// Coefficient-wise difference; degrees must match.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in sub");
        BernsteinPoly {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_rational::BigRational;

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    #[test]
    fn basis_values() {
        assert_eq!(eval_basis(2, 1, 0.5).unwrap(), 0.5);
        assert_eq!(eval_basis(5, 0, 0.0).unwrap(), 1.0);
        assert_relative_eq!(
            eval_basis(3, 2, 1.0 / 3.0).unwrap(),
            2.0 / 9.0,
            max_relative = 1e-15
        );
        assert_eq!(
            eval_basis(2, 3, 0.5),
            Err(BernsteinError::IndexOutOfRange { i: 3, n: 2 })
        );
    }

    #[test]
    fn binomials_are_exact_integers() {
        assert_eq!(binomial(50, 25), 126410606437752.0);
        assert_eq!(binomial(10, 0), 1.0);
        assert_eq!(binomial(4, 7), 0.0);
    }

    #[test]
    fn de_casteljau_matches_known_values() {
        let p = BernsteinPoly::new(vec![1.0, 1.0, 1.0]);
        assert_eq!(p.eval(&0.7), 1.0); // partition of unity
        let q = BernsteinPoly::new(vec![0.0, 0.0, 1.0]);
        assert_eq!(q.eval(&0.5), 0.25); // B^2_2(0.5)
        let l = BernsteinPoly::new(vec![1.0, 0.0]);
        assert_eq!(l.eval(&0.25), 0.75); // 1 - t
    }

    #[test]
    fn multiply_by_t_known_coefficients() {
        let c = BernsteinPoly::new(vec![rat(1, 1)]);
        assert_eq!(c.multiply_by_t().coeffs(), &[rat(0, 1), rat(1, 1)]);

        let l = BernsteinPoly::new(vec![rat(1, 1), rat(0, 1)]);
        assert_eq!(
            l.multiply_by_t().coeffs(),
            &[rat(0, 1), rat(1, 2), rat(0, 1)]
        );
    }

    #[test]
    fn multiply_by_t_agrees_pointwise() {
        // Oracle for the derived case [1, 1]: t·p(t) at sample points.
        let p = BernsteinPoly::new(vec![1.0_f64, 1.0]);
        let tp = p.multiply_by_t();
        assert_eq!(tp.coeffs(), &[0.0, 0.5, 1.0]);
        for t in [0.0, 0.25, 0.5, 1.0] {
            assert_relative_eq!(tp.eval(&t), t * p.eval(&t), max_relative = 1e-15);
        }
    }

    #[test]
    fn degree_elevate_known_coefficients() {
        let l = BernsteinPoly::new(vec![rat(1, 1), rat(0, 1)]);
        assert_eq!(
            l.degree_elevate().coeffs(),
            &[rat(1, 1), rat(1, 2), rat(0, 1)]
        );
        let c = BernsteinPoly::new(vec![rat(1, 1)]);
        assert_eq!(c.degree_elevate().coeffs(), &[rat(1, 1), rat(1, 1)]);
    }

    #[test]
    fn degree_elevate_preserves_the_polynomial() {
        // 2t(1-t) = B^2_1 elevated to degree 3; pointwise oracle at five
        // sample points fixes the coefficients as [0, 2/3, 2/3, 0].
        let p = BernsteinPoly::new(vec![0.0_f64, 1.0, 0.0]);
        let up = p.degree_elevate();
        assert_eq!(up.coeffs(), &[0.0, 2.0 / 3.0, 2.0 / 3.0, 0.0]);
        for t in [0.0, 0.2, 0.5, 0.8, 1.0] {
            assert_relative_eq!(up.eval(&t), p.eval(&t), max_relative = 1e-15);
        }
    }

    #[test]
    fn derivative_coefficients() {
        let ramp = BernsteinPoly::new(vec![0.0_f64, 1.0]);
        assert_eq!(ramp.derivative().unwrap().coeffs(), &[1.0]);

        let constant = BernsteinPoly::new(vec![1.0_f64, 1.0, 1.0]);
        assert_eq!(constant.derivative().unwrap().coeffs(), &[0.0, 0.0]);

        let square = BernsteinPoly::new(vec![0.0_f64, 0.0, 1.0]);
        assert_eq!(square.derivative().unwrap().coeffs(), &[0.0, 2.0]);

        let c = BernsteinPoly::new(vec![1.0_f64]);
        assert_eq!(c.derivative(), Err(BernsteinError::DegreeZero));
    }

    #[test]
    fn partition_of_unity_over_degrees() {
        for n in 0..=30 {
            for step in 0..=20 {
                let t = step as f64 / 20.0;
                let sum: f64 = (0..=n).map(|i| eval_basis(n, i, t).unwrap()).sum();
                assert!((sum - 1.0).abs() <= 1e-13, "n={n} t={t} sum={sum}");
            }
        }
    }

    #[test]
    fn rational_elevation_is_exact() {
        let p = BernsteinPoly::new(vec![rat(1, 3), rat(-2, 7), rat(5, 2)]);
        let up = p.degree_elevate();
        for k in 0..=10 {
            let t = rat(k, 10);
            assert_eq!(up.eval(&t), p.eval(&t));
        }
        let tp = p.multiply_by_t();
        for k in 0..=10 {
            let t = rat(k, 10);
            assert_eq!(tp.eval(&t), t.clone() * p.eval(&t));
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let p = BernsteinPoly::new(vec![0.3_f64, -1.2, 2.0, 0.5, 1.0, -0.25]);
        let dp = p.derivative().unwrap();
        let h = 1e-6;
        for step in 1..10 {
            let t = step as f64 / 10.0;
            let fd = (p.eval(&(t + h)) - p.eval(&(t - h))) / (2.0 * h);
            assert!((dp.eval(&t) - fd).abs() <= 1e-6, "t={t}");
        }
    }

    #[test]
    fn counted_scalar_runs_the_kernels() {
        use crate::scalar::{op_count, reset_op_count, CountedF64};
        reset_op_count();
        let p = BernsteinPoly::new(vec![CountedF64(1.0), CountedF64(2.0)]);
        let _ = p.eval(&CountedF64(0.5));
        assert!(op_count() > 0);
    }
}
