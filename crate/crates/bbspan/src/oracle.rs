//! Reference evaluations of B-spline basis functions from first principles.
//!
//! Two independent routes to `N_{m,i}(u)` live here:
//!
//! * the divided-difference definition
//!   `N_{m,i}(u) = (t_{i+m+1} - t_i) [t_i, …, t_{i+m+1}] (t - u)^m_+`,
//!   with confluent (repeated) nodes handled through derivative values of
//!   the truncated power, and
//! * the de Boor-Cox recurrence seeded by the degree-0 indicator.
//!
//! Both are generic over [`Scalar`]; instantiated with `BigRational` they
//! are exact and serve as ground truth for the conversion algorithms. The
//! float instantiations exist for spot checks only.
//!
//! A quotient whose knot difference vanishes contributes zero (checked by
//! exact knot equality before dividing), and a basis function indexed
//! outside `-p ≤ i < n` is identically zero.

use crate::knots::KnotVector;
use crate::scalar::Scalar;
use thiserror::Error;

/// Errors from the reference oracles.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(
        "UnsupportedConfluency: a node equal to the evaluation point repeats \
         {order} + 1 times, requiring derivative order {order} >= {degree} of \
         the truncated power at its kink"
    )]
    UnsupportedConfluency { order: usize, degree: usize },

    #[error("function index {i} out of range [{lo}, {hi})")]
    IndexOutOfRange { i: isize, lo: isize, hi: isize },
}

/// The truncated power `(x - c)^m_+`: `(x - c)^m` for `x ≥ c`, else zero.
/// For `m = 0` and `x ≥ c` the value is 1.
pub fn truncated_power<T: Scalar>(x: &T, c: &T, m: usize) -> T {
    if x < c {
        return T::zero();
    }
    let base = x.clone() - c.clone();
    let mut acc = T::one();
    for _ in 0..m {
        acc = acc * base.clone();
    }
    acc
}

/// `f^(s)(x) / s!` for `f(t) = (t - u)^m_+`.
///
/// For `s < m` this is `C(m,s) (x - u)^{m-s}_+`, continuous everywhere. For
/// `s ≥ m` the value jumps at the kink, so `x = u` is an error; away from it
/// the one-sided value applies.
fn truncated_power_derivative_over_factorial<T: Scalar>(
    x: &T,
    u: &T,
    m: usize,
    s: usize,
) -> Result<T, OracleError> {
    if s < m {
        let binom = T::from_knot(crate::bernstein::binomial(m, s));
        return Ok(binom * truncated_power(x, u, m - s));
    }
    if x == u {
        return Err(OracleError::UnsupportedConfluency {
            order: s,
            degree: m,
        });
    }
    if s == m && x > u {
        Ok(T::one())
    } else {
        Ok(T::zero())
    }
}

/// The generalized divided difference `[nodes] (t - u)^m_+`, acting on `t`.
///
/// Nodes must be nondecreasing. Coincident nodes of multiplicity `r + 1` use
/// the confluent rule `[x,…,x] f = f^(r)(x) / r!`.
pub fn divided_difference_truncated_power<T: Scalar>(
    nodes: &[T],
    u: &T,
    m: usize,
) -> Result<T, OracleError> {
    assert!(!nodes.is_empty(), "divided difference needs at least one node");
    debug_assert!(
        nodes.windows(2).all(|w| w[0] <= w[1]),
        "divided-difference nodes must be nondecreasing"
    );
    let mut level: Vec<T> = nodes.iter().map(|x| truncated_power(x, u, m)).collect();
    for s in 1..nodes.len() {
        for r in 0..nodes.len() - s {
            let lo = &nodes[r];
            let hi = &nodes[r + s];
            level[r] = if lo == hi {
                truncated_power_derivative_over_factorial(lo, u, m, s)?
            } else {
                (level[r + 1].clone() - level[r].clone()) / (hi.clone() - lo.clone())
            };
        }
    }
    Ok(level.into_iter().next().unwrap())
}

/// `N_{m,i}(u)` straight from the divided-difference definition.
///
/// The degree-0 case returns the indicator of `[t_i, t_{i+1})` directly. For
/// `m ≥ 1`, `u` equal to a knot of multiplicity `m + 1` (a fully clamped
/// boundary) is unsupported — see [`OracleError::UnsupportedConfluency`];
/// every other parameter value works, and the support property
/// `N_{m,i} = 0` outside `[t_i, t_{i+m+1})` falls out of the definition.
pub fn bspline_value_definition<T: Scalar>(
    kv: &KnotVector,
    i: isize,
    u: f64,
) -> Result<T, OracleError> {
    let m = kv.degree() as isize;
    let n = kv.spans() as isize;
    if i < -m || i >= n {
        return Err(OracleError::IndexOutOfRange { i, lo: -m, hi: n });
    }
    if m == 0 {
        let inside = kv.knot(i) <= u && u < kv.knot(i + 1);
        return Ok(if inside { T::one() } else { T::zero() });
    }
    let nodes: Vec<T> = (i..=i + m + 1).map(|q| T::from_knot(kv.knot(q))).collect();
    let dd = divided_difference_truncated_power(&nodes, &T::from_knot(u), m as usize)?;
    let width = T::from_knot(kv.knot(i + m + 1)) - T::from_knot(kv.knot(i));
    Ok(width * dd)
}

/// `N_{p,i}(u)` for any degree `p ≤ kv.degree()`, by the de Boor-Cox
/// triangular recurrence seeded with degree-0 indicators.
///
/// Indices outside `-p ≤ i < n` return zero. Lower degrees share the same
/// knot sequence; the identity suite relies on that.
pub fn deboor_cox_eval_degree<T: Scalar>(kv: &KnotVector, degree: usize, i: isize, u: f64) -> T {
    assert!(
        degree <= kv.degree(),
        "degree {degree} exceeds the knot vector's degree {}",
        kv.degree()
    );
    let n = kv.spans() as isize;
    if i < -(degree as isize) || i >= n {
        return T::zero();
    }
    let mut vals: Vec<T> = (i..=i + degree as isize)
        .map(|q| {
            let inside = kv.knot(q) <= u && u < kv.knot(q + 1);
            if inside {
                T::one()
            } else {
                T::zero()
            }
        })
        .collect();
    for p in 1..=degree as isize {
        for idx in 0..=(degree as isize - p) {
            let q = i + idx;
            let mut acc = T::zero();
            if kv.knot(q + p) != kv.knot(q) {
                let w = (T::from_knot(u) - T::from_knot(kv.knot(q)))
                    / (T::from_knot(kv.knot(q + p)) - T::from_knot(kv.knot(q)));
                acc = acc + w * vals[idx as usize].clone();
            }
            if kv.knot(q + p + 1) != kv.knot(q + 1) {
                let w = (T::from_knot(kv.knot(q + p + 1)) - T::from_knot(u))
                    / (T::from_knot(kv.knot(q + p + 1)) - T::from_knot(kv.knot(q + 1)));
                acc = acc + w * vals[idx as usize + 1].clone();
            }
            vals[idx as usize] = acc;
        }
    }
    vals.into_iter().next().unwrap()
}

/// `N_{m,i}(u)` at the vector's own degree.
pub fn deboor_cox_eval<T: Scalar>(kv: &KnotVector, i: isize, u: f64) -> T {
    deboor_cox_eval_degree(kv, kv.degree(), i, u)
}

/// `N'_{m,i}(u) = m (N_{m-1,i}/(t_{m+i}-t_i) - N_{m-1,i+1}/(t_{m+i+1}-t_{i+1}))`,
/// with vanishing-denominator terms dropped.
pub fn deboor_cox_derivative<T: Scalar>(kv: &KnotVector, i: isize, u: f64) -> T {
    let m = kv.degree();
    assert!(m >= 1, "derivative needs degree >= 1");
    let n = kv.spans() as isize;
    if i < -(m as isize) || i >= n {
        return T::zero();
    }
    let mut acc = T::zero();
    let lo = kv.knot(i);
    let mid = kv.knot(i + m as isize);
    if mid != lo {
        acc = acc
            + deboor_cox_eval_degree::<T>(kv, m - 1, i, u)
                / (T::from_knot(mid) - T::from_knot(lo));
    }
    let lo1 = kv.knot(i + 1);
    let hi = kv.knot(i + m as isize + 1);
    if hi != lo1 {
        acc = acc
            - deboor_cox_eval_degree::<T>(kv, m - 1, i + 1, u)
                / (T::from_knot(hi) - T::from_knot(lo1));
    }
    T::from_int(m as i64) * acc
}

/// A basis-function sample: the value and, when the degree permits, the
/// first derivative. Values are nonnegative and vanish outside
/// `[t_i, t_{i+m+1})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BSplineValue {
    pub value: f64,
    pub derivative: Option<f64>,
}

/// Samples `N_{m,i}` (and `N'_{m,i}` for `m ≥ 1`) by the de Boor-Cox route.
pub fn evaluate_basis_function(kv: &KnotVector, i: isize, u: f64) -> BSplineValue {
    let value = deboor_cox_eval::<f64>(kv, i, u);
    let derivative = (kv.degree() >= 1).then(|| deboor_cox_derivative::<f64>(kv, i, u));
    BSplineValue { value, derivative }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_rational::BigRational;

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    fn rf(x: f64) -> BigRational {
        BigRational::from_knot(x)
    }

    /// Uniform integer knots for a given degree/span count.
    fn uniform(degree: usize, spans: usize) -> KnotVector {
        let lo = -(degree as isize);
        let hi = (spans + degree) as isize;
        KnotVector::new(degree, spans, (lo..=hi).map(|k| k as f64).collect()).unwrap()
    }

    fn bezier(degree: usize) -> KnotVector {
        let mut values = vec![0.0; degree + 1];
        values.extend(vec![1.0; degree + 1]);
        KnotVector::new(degree, 1, values).unwrap()
    }

    #[test]
    fn truncated_power_branches() {
        assert_eq!(truncated_power(&2.0, &1.0, 3), 1.0);
        assert_eq!(truncated_power(&0.0, &1.0, 3), 0.0);
        assert_eq!(truncated_power(&1.0, &1.0, 0), 1.0);
        assert_eq!(truncated_power(&rat(5, 2), &rat(1, 2), 2), rat(4, 1));
    }

    #[test]
    fn divided_difference_two_point() {
        let dd = divided_difference_truncated_power(&[0.0, 1.0], &0.5, 1).unwrap();
        assert_eq!(dd, 0.5);
    }

    #[test]
    fn divided_difference_three_point() {
        // Hand expansion: ([1,2]f - [0,1]f) / 2 = (1 - 0) / 2.
        let dd = divided_difference_truncated_power(&[0.0, 1.0, 2.0], &1.0, 1).unwrap();
        assert_eq!(dd, 0.5);
        let dd = divided_difference_truncated_power(&[rf(0.0), rf(1.0), rf(2.0)], &rf(1.0), 1);
        assert_eq!(dd.unwrap(), rat(1, 2));
    }

    #[test]
    fn divided_difference_confluent_uses_derivative() {
        // [2,2](t-1)^2 = d/dt (t-1)^2 at t=2, i.e. 2.
        let dd = divided_difference_truncated_power(&[2.0, 2.0], &1.0, 2).unwrap();
        assert_eq!(dd, 2.0);
    }

    #[test]
    fn divided_difference_rejects_kink_confluency() {
        let err = divided_difference_truncated_power(&[1.0, 1.0], &1.0, 1).unwrap_err();
        assert_eq!(
            err,
            OracleError::UnsupportedConfluency {
                order: 1,
                degree: 1
            }
        );
        let err = divided_difference_truncated_power(&[0.0, 0.0, 0.0], &0.0, 2).unwrap_err();
        assert_eq!(
            err,
            OracleError::UnsupportedConfluency {
                order: 2,
                degree: 2
            }
        );
    }

    #[test]
    fn definition_degree_zero_is_the_indicator() {
        let kv = KnotVector::new(0, 3, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(bspline_value_definition::<f64>(&kv, 1, 1.0).unwrap(), 1.0);
        assert_eq!(bspline_value_definition::<f64>(&kv, 1, 1.9).unwrap(), 1.0);
        assert_eq!(bspline_value_definition::<f64>(&kv, 1, 2.0).unwrap(), 0.0);
        assert_eq!(bspline_value_definition::<f64>(&kv, 0, 2.5).unwrap(), 0.0);
    }

    #[test]
    fn definition_uniform_cubic_midpoint() {
        let kv = uniform(3, 6);
        let v: BigRational = bspline_value_definition(&kv, 0, 2.0).unwrap();
        assert_eq!(v, rat(2, 3));
    }

    #[test]
    fn definition_vanishes_outside_support() {
        let kv = uniform(3, 6);
        // supp(N_{3,0}) = [0, 4)
        assert_eq!(bspline_value_definition::<f64>(&kv, 0, 4.5).unwrap(), 0.0);
        assert_eq!(bspline_value_definition::<f64>(&kv, 2, 0.5).unwrap(), 0.0);
        assert!(matches!(
            bspline_value_definition::<f64>(&kv, -4, 1.0),
            Err(OracleError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn deboor_cox_hat_function() {
        let kv = uniform(1, 4);
        assert_eq!(deboor_cox_eval::<f64>(&kv, 0, 0.5), 0.5);
        assert_eq!(deboor_cox_derivative::<f64>(&kv, 0, 0.5), 1.0);
    }

    #[test]
    fn deboor_cox_reduces_to_bernstein_on_clamped_span() {
        let kv = bezier(3);
        let v = deboor_cox_eval::<f64>(&kv, -3, 0.5);
        assert_eq!(v, 0.125);
        for i in -3..=0 {
            let b = crate::bernstein::eval_basis(3, (i + 3) as usize, 0.25).unwrap();
            assert_relative_eq!(deboor_cox_eval::<f64>(&kv, i, 0.25), b, max_relative = 1e-15);
        }
    }

    #[test]
    fn deboor_cox_matches_definition_at_midpoint() {
        let kv = uniform(3, 6);
        assert_eq!(
            deboor_cox_eval::<BigRational>(&kv, 0, 2.0),
            bspline_value_definition::<BigRational>(&kv, 0, 2.0).unwrap()
        );
    }

    #[test]
    fn deboor_cox_derivative_symmetric_at_center() {
        let kv = uniform(3, 6);
        assert_eq!(deboor_cox_derivative::<BigRational>(&kv, 0, 2.0), rat(0, 1));
    }

    #[test]
    fn deboor_cox_derivative_matches_finite_differences() {
        let kv =
            KnotVector::new(2, 4, vec![-0.5, 0.0, 0.25, 1.0, 1.5, 2.75, 3.0, 3.5, 4.0]).unwrap();
        let h = 1e-6;
        for i in -2..4 {
            for u in [0.4, 0.9, 1.2, 2.0, 2.5] {
                let fd = (deboor_cox_eval::<f64>(&kv, i, u + h)
                    - deboor_cox_eval::<f64>(&kv, i, u - h))
                    / (2.0 * h);
                let d = deboor_cox_derivative::<f64>(&kv, i, u);
                assert!((d - fd).abs() <= 1e-6, "i={i} u={u}: {d} vs {fd}");
            }
        }
    }

    #[test]
    fn out_of_range_indices_are_zero_by_convention() {
        let kv = uniform(2, 4);
        assert_eq!(deboor_cox_eval::<f64>(&kv, -3, 1.0), 0.0);
        assert_eq!(deboor_cox_eval::<f64>(&kv, 4, 1.0), 0.0);
        assert_eq!(deboor_cox_eval_degree::<f64>(&kv, 1, -2, 1.0), 0.0);
    }

    #[test]
    fn sample_struct_reports_support() {
        let kv = uniform(2, 4);
        let s = evaluate_basis_function(&kv, 0, 3.5);
        assert_eq!(s.value, 0.0);
        let s = evaluate_basis_function(&kv, 0, 1.5);
        assert!(s.value > 0.0);
        assert!(s.derivative.is_some());
    }
}
