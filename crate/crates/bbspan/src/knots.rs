//! Knot vectors and span location.
//!
//! A degree-`m` knot vector over `n` index spans stores the nondecreasing
//! sequence `t_{-m} ≤ … ≤ t_0 ≤ … ≤ t_n ≤ … ≤ t_{n+m}` with `t_0 < t_n`.
//! The signed indexing of the sequence (boundary knots at negative indices)
//! is preserved through an internal offset, so callers address knots and
//! basis functions exactly the way the formulas are written.
//!
//! Knot equality is exact value equality of the stored `f64`s, never
//! tolerance-based: coalescing nearly-equal knots would silently change the
//! basis. NaNs are rejected by validation (they violate the ordering scan).

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Validation and lookup errors for knot vectors.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum KnotError {
    #[error(
        "knot sequence has {found} values; degree {degree} with {spans} spans requires {expected}"
    )]
    LengthMismatch {
        degree: usize,
        spans: usize,
        expected: usize,
        found: usize,
    },

    #[error("NotNondecreasing: t_{index} = {left} > t_{next} = {right}", next = index + 1)]
    NotNondecreasing { index: isize, left: f64, right: f64 },

    #[error("DegenerateDomain: t_0 = t_n = {value}")]
    DegenerateDomain { value: f64 },

    #[error(
        "InnerMultiplicityTooHigh: inner knot {value} has multiplicity {multiplicity} > {max}"
    )]
    InnerMultiplicityTooHigh {
        value: f64,
        multiplicity: usize,
        max: usize,
    },

    #[error("parameter {u} outside the domain [{lo}, {hi}]")]
    OutOfDomain { u: f64, lo: f64, hi: f64 },

    #[error("span index {j} out of range: vector has spans 0..{spans}")]
    SpanOutOfRange { j: usize, spans: usize },

    #[error("cannot parse knot vector: {0}")]
    Parse(String),
}

/// Index `j` of the half-open knot span `[t_j, t_{j+1})`, `0 ≤ j < n`.
///
/// Obtained from [`KnotVector::span`] or [`KnotVector::find_span`], so a
/// value of this type is always in range for the vector that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpanIndex(pub(crate) usize);

impl SpanIndex {
    /// The raw span number `j`.
    pub fn index(self) -> usize {
        self.0
    }
}

/// A validated knot sequence `t_{-m}, …, t_{n+m}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawKnotVector", into = "RawKnotVector")]
pub struct KnotVector {
    degree: usize,
    spans: usize,
    values: Vec<f64>,
}

/// Wire form of a knot vector, `{"degree": m, "spans": n, "knots": [...]}`.
#[derive(Serialize, Deserialize)]
struct RawKnotVector {
    degree: usize,
    spans: usize,
    knots: Vec<f64>,
}

impl TryFrom<RawKnotVector> for KnotVector {
    type Error = KnotError;

    fn try_from(raw: RawKnotVector) -> Result<Self, KnotError> {
        KnotVector::new(raw.degree, raw.spans, raw.knots)
    }
}

impl From<KnotVector> for RawKnotVector {
    fn from(kv: KnotVector) -> Self {
        RawKnotVector {
            degree: kv.degree,
            spans: kv.spans,
            knots: kv.values,
        }
    }
}

impl KnotVector {
    /// Validates a raw sequence and builds a knot vector.
    ///
    /// Checks, in order: the length is `n + 2m + 1`; the values are
    /// nondecreasing; `t_0 < t_n`; no inner knot `t_1..t_{n-1}` has
    /// multiplicity above `max(m, 1)` (the `m = 0` floor keeps degree-0
    /// vectors with distinct knots usable; a multiplicity above `m` would
    /// split the basis in two at that knot).
    pub fn new(degree: usize, spans: usize, values: Vec<f64>) -> Result<Self, KnotError> {
        let expected = spans + 2 * degree + 1;
        if values.len() != expected {
            return Err(KnotError::LengthMismatch {
                degree,
                spans,
                expected,
                found: values.len(),
            });
        }

        let offset = degree as isize;
        for (pos, pair) in values.windows(2).enumerate() {
            // `!(a <= b)` also catches NaN anywhere in the sequence.
            if !(pair[0] <= pair[1]) {
                return Err(KnotError::NotNondecreasing {
                    index: pos as isize - offset,
                    left: pair[0],
                    right: pair[1],
                });
            }
        }

        let t0 = values[degree];
        let tn = values[degree + spans];
        if !(t0 < tn) {
            return Err(KnotError::DegenerateDomain { value: t0 });
        }

        // Multiplicity scan over runs of equal values. A run counts against
        // the inner limit iff it covers at least one inner position.
        let max_mult = degree.max(1);
        let inner_lo = degree + 1; // storage index of t_1
        let inner_hi = degree + spans - 1; // storage index of t_{n-1}
        let mut run_start = 0;
        for pos in 1..=values.len() {
            if pos == values.len() || values[pos] != values[run_start] {
                let run_len = pos - run_start;
                let touches_inner = spans >= 2 && run_start <= inner_hi && pos - 1 >= inner_lo;
                if touches_inner && run_len > max_mult {
                    return Err(KnotError::InnerMultiplicityTooHigh {
                        value: values[run_start],
                        multiplicity: run_len,
                        max: max_mult,
                    });
                }
                run_start = pos;
            }
        }

        Ok(KnotVector {
            degree,
            spans,
            values,
        })
    }

    /// The degree `m`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The number of index spans `n`.
    pub fn spans(&self) -> usize {
        self.spans
    }

    /// The stored sequence `t_{-m}, …, t_{n+m}` in storage order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The knot `t_i`, `-m ≤ i ≤ n+m`.
    pub fn knot(&self, i: isize) -> f64 {
        let pos = i + self.degree as isize;
        assert!(
            (0..self.values.len() as isize).contains(&pos),
            "knot index {i} outside [{}, {}]",
            -(self.degree as isize),
            (self.spans + self.degree) as isize
        );
        self.values[pos as usize]
    }

    /// The domain `[t_0, t_n]`.
    pub fn domain(&self) -> (f64, f64) {
        (self.values[self.degree], self.values[self.degree + self.spans])
    }

    /// Checked construction of a span index.
    pub fn span(&self, j: usize) -> Result<SpanIndex, KnotError> {
        if j < self.spans {
            Ok(SpanIndex(j))
        } else {
            Err(KnotError::SpanOutOfRange {
                j,
                spans: self.spans,
            })
        }
    }

    /// Whether `[t_j, t_{j+1})` contains points.
    pub fn span_is_empty(&self, j: SpanIndex) -> bool {
        self.knot(j.0 as isize) == self.knot(j.0 as isize + 1)
    }

    /// All non-empty spans, left to right.
    pub fn nonempty_spans(&self) -> impl Iterator<Item = SpanIndex> + '_ {
        (0..self.spans)
            .map(SpanIndex)
            .filter(|&j| !self.span_is_empty(j))
    }

    /// Locates the non-empty span containing `u`: returns `j` with
    /// `t_j ≤ u < t_{j+1}`. The right endpoint `u = t_n` is mapped to the
    /// last non-empty span, closing the domain on the right.
    pub fn find_span(&self, u: f64) -> Result<SpanIndex, KnotError> {
        let (lo, hi) = self.domain();
        if !(u >= lo && u <= hi) {
            return Err(KnotError::OutOfDomain { u, lo, hi });
        }
        // Window t_0..t_{n-1}; binary search for the count of knots ≤ u
        // (strictly < for the closed right end).
        let window = &self.values[self.degree..self.degree + self.spans];
        let count = if u == hi {
            window.partition_point(|&t| t < u)
        } else {
            window.partition_point(|&t| t <= u)
        };
        Ok(SpanIndex(count - 1))
    }

    /// Number of knots exactly equal to `value`, over the whole sequence.
    pub fn multiplicity(&self, value: f64) -> usize {
        self.values.iter().filter(|&&t| t == value).count()
    }

    /// Parses the plain-text form: first line `m n`, second line the
    /// whitespace-separated knots.
    pub fn from_text(text: &str) -> Result<Self, KnotError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| KnotError::Parse("missing header line".into()))?;
        let mut head = header.split_whitespace();
        let degree: usize = head
            .next()
            .ok_or_else(|| KnotError::Parse("missing degree".into()))?
            .parse()
            .map_err(|e| KnotError::Parse(format!("bad degree: {e}")))?;
        let spans: usize = head
            .next()
            .ok_or_else(|| KnotError::Parse("missing span count".into()))?
            .parse()
            .map_err(|e| KnotError::Parse(format!("bad span count: {e}")))?;
        if head.next().is_some() {
            return Err(KnotError::Parse("header must be exactly `m n`".into()));
        }
        let values = lines
            .flat_map(|l| l.split_whitespace())
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|e| KnotError::Parse(format!("bad knot `{tok}`: {e}")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        KnotVector::new(degree, spans, values)
    }

    /// The plain-text form accepted by [`KnotVector::from_text`].
    pub fn to_text(&self) -> String {
        let knots: Vec<String> = self.values.iter().map(|t| t.to_string()).collect();
        format!("{} {}\n{}\n", self.degree, self.spans, knots.join(" "))
    }

    /// Parses the JSON form `{"degree": m, "spans": n, "knots": [...]}`.
    pub fn from_json(text: &str) -> Result<Self, KnotError> {
        serde_json::from_str(text).map_err(|e| KnotError::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clamped_quadratic() -> KnotVector {
        KnotVector::new(2, 3, vec![0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 3.0, 3.0]).unwrap()
    }

    #[test]
    fn validate_accepts_clamped_sequence() {
        let kv = clamped_quadratic();
        assert_eq!(kv.degree(), 2);
        assert_eq!(kv.spans(), 3);
        assert_eq!(kv.knot(-2), 0.0);
        assert_eq!(kv.knot(5), 3.0);
        assert_eq!(kv.domain(), (0.0, 3.0));
    }

    #[test]
    fn validate_rejects_decreasing() {
        let err = KnotVector::new(2, 3, vec![0.0, 0.0, 0.0, 2.0, 1.0, 3.0, 3.0, 3.0]).unwrap_err();
        assert!(matches!(err, KnotError::NotNondecreasing { .. }));
    }

    #[test]
    fn validate_rejects_high_inner_multiplicity() {
        let err = KnotVector::new(1, 4, vec![0.0, 0.0, 1.0, 1.0, 2.0, 3.0, 3.0]).unwrap_err();
        assert_eq!(
            err,
            KnotError::InnerMultiplicityTooHigh {
                value: 1.0,
                multiplicity: 2,
                max: 1
            }
        );
    }

    #[test]
    fn validate_rejects_wrong_length() {
        let err = KnotVector::new(2, 3, vec![0.0; 7]).unwrap_err();
        assert!(matches!(err, KnotError::LengthMismatch { expected: 8, .. }));
    }

    #[test]
    fn validate_rejects_degenerate_domain() {
        let err = KnotVector::new(1, 1, vec![0.0, 1.0, 1.0, 2.0]).unwrap_err();
        assert!(matches!(err, KnotError::DegenerateDomain { .. }));
    }

    #[test]
    fn validate_rejects_nan() {
        let err = KnotVector::new(0, 2, vec![0.0, f64::NAN, 1.0]).unwrap_err();
        assert!(matches!(err, KnotError::NotNondecreasing { .. }));
    }

    #[test]
    fn boundary_multiplicity_above_degree_is_allowed() {
        // Only inner knots are constrained; m+1-fold boundary knots are the
        // ordinary clamped layout.
        clamped_quadratic();
    }

    #[test]
    fn find_span_brackets_the_parameter() {
        let kv = clamped_quadratic();
        assert_eq!(kv.find_span(1.5).unwrap().index(), 1);
        assert_eq!(kv.find_span(0.0).unwrap().index(), 0);
        assert_eq!(kv.find_span(3.0).unwrap().index(), 2);
        assert!(matches!(
            kv.find_span(3.5),
            Err(KnotError::OutOfDomain { .. })
        ));
        assert!(matches!(
            kv.find_span(-0.1),
            Err(KnotError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn find_span_skips_empty_spans() {
        // t_1 = t_2 = 1 makes span 1 empty; u = 1 belongs to span 2.
        let kv = KnotVector::new(2, 4, vec![0.0, 0.0, 0.0, 1.0, 1.0, 2.0, 3.0, 3.0, 3.0]).unwrap();
        let j = kv.find_span(1.0).unwrap();
        assert_eq!(j.index(), 2);
        assert!(!kv.span_is_empty(j));
    }

    #[test]
    fn multiplicity_counts_exact_matches() {
        let kv = clamped_quadratic();
        assert_eq!(kv.multiplicity(0.0), 3);
        assert_eq!(kv.multiplicity(1.5), 0);
        assert_eq!(kv.multiplicity(3.0), 3);
    }

    #[test]
    fn nonempty_spans_enumerates_in_order() {
        let kv = KnotVector::new(2, 4, vec![0.0, 0.0, 0.0, 1.0, 1.0, 2.0, 3.0, 3.0, 3.0]).unwrap();
        let spans: Vec<usize> = kv.nonempty_spans().map(SpanIndex::index).collect();
        assert_eq!(spans, vec![0, 2, 3]);
    }

    #[test]
    fn text_round_trip() {
        let kv = clamped_quadratic();
        let parsed = KnotVector::from_text(&kv.to_text()).unwrap();
        assert_eq!(parsed, kv);
    }

    #[test]
    fn json_round_trip_revalidates() {
        let kv = clamped_quadratic();
        let json = serde_json::to_string(&kv).unwrap();
        assert!(json.contains("\"knots\""));
        let parsed = KnotVector::from_json(&json).unwrap();
        assert_eq!(parsed, kv);

        let bad = r#"{"degree": 2, "spans": 3, "knots": [0, 0, 0, 2, 1, 3, 3, 3]}"#;
        let err = KnotVector::from_json(bad).unwrap_err();
        assert!(matches!(err, KnotError::Parse(msg) if msg.contains("NotNondecreasing")));
    }
}
