//! Bernstein-Bézier coefficients of B-spline basis functions over one knot
//! span.
//!
//! Over a non-empty span `[t_j, t_{j+1})` of a degree-`m` knot sequence,
//! the `m + 1` non-trivial basis functions `N_{m,i}`, `i = j-m..j`, are
//! plain polynomials; this crate computes their coefficients in the
//! Bernstein basis of the span's local parameter. The workhorse is an
//! `O(m²)` recurrence scheme — optimal, since there are `(m+1)²`
//! coefficients to produce — alongside an `O(m³)` de Boor-Cox ladder used
//! as an independent comparator, divided-difference and de Boor-Cox value
//! oracles, and an experiment harness that reproduces the accuracy and
//! timing studies at desk scale.
//!
//! All conversion code is generic over [`scalar::Scalar`], so the same
//! algorithms run in `f64`, in exact rational arithmetic (the verification
//! path), and under an operation counter (the complexity checks).
//!
//! ```
//! use bbspan::{convert_span_new, KnotVector};
//!
//! // Uniform cubic knots t_{-3}..t_{9}, spans [t_0,t_1)..[t_5,t_6).
//! let kv = KnotVector::new(3, 6, (-3..=9).map(f64::from).collect()).unwrap();
//! let j = kv.find_span(2.5).unwrap();
//! let table = convert_span_new::<f64>(&kv, j, 3).unwrap();
//! // The classical 1/6-family of the uniform cubic segment.
//! assert_eq!(table.coefficient(0, j.index() as isize - 3), 1.0 / 6.0);
//! assert_eq!(table.coefficient(3, j.index() as isize), 1.0 / 6.0);
//! ```
//!
//! Distinct spans are independent; [`convert_all_spans`] fans the work out
//! with rayon when the `parallel` feature (default) is enabled and falls
//! back to a sequential sweep without it.

pub mod bernstein;
pub mod conversion;
pub mod experiments;
pub mod knots;
pub mod oracle;
pub mod scalar;
pub mod verify;

pub use conversion::{
    convert_all_spans, convert_all_spans_seq, convert_span, convert_span_deboor,
    convert_span_new, reconstruct, ConversionError, Method, SpanTable,
};
pub use knots::{KnotError, KnotVector, SpanIndex};
pub use scalar::Scalar;
