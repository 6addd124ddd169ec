//! Bernstein-Bézier coefficients of all B-spline basis functions over one
//! knot span.
//!
//! Over a non-empty span `[t_j, t_{j+1})` every non-trivial basis function
//! `N_{m,i}`, `i = j-m..j`, restricts to a degree-`m` polynomial
//!
//! ```text
//! N_{m,i}(u) = Σ_k b_{m,k}^{(i,j)} B^m_k((u - t_j) / (t_{j+1} - t_j)),
//! ```
//!
//! and this module computes the full `(m+1) × (m+1)` coefficient table two
//! ways:
//!
//! * [`convert_span_new`] — the `O(m²)` scheme: a triangular recurrence
//!   fills the rightmost coefficients `b_{p,p}^{(i,j)}`, the first
//!   function's single non-zero coefficient comes from a closed form, and a
//!   back-substitution driven by a differential-recurrence relation between
//!   basis functions of the *same* degree fills the interior;
//! * [`convert_span_deboor`] — the `O(m³)` comparator, raising degree
//!   `p = 0..m` with the de Boor-Cox recurrence at every level.
//!
//! Both are generic over [`Scalar`], so the identical code path runs in
//! machine floats, exact rationals, and the op-counting instrumentation.
//! Spans are independent: conversions are pure and may run concurrently
//! ([`convert_all_spans`]).

use crate::bernstein::BernsteinPoly;
use crate::knots::{KnotError, KnotVector, SpanIndex};
use crate::scalar::Scalar;
use thiserror::Error;

/// Errors from span conversion.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConversionError {
    #[error("span {j} is empty: t_{j} = t_{j1} = {value}", j1 = j + 1)]
    EmptySpan { j: usize, value: f64 },

    #[error("requested degree {requested} exceeds the knot vector's degree {max}")]
    DegreeOutOfRange { requested: usize, max: usize },

    #[error("parameter {u} outside span {j}: [{lo}, {hi}]")]
    OutOfSpan { u: f64, j: usize, lo: f64, hi: f64 },

    #[error("cannot parse span table: {0}")]
    Parse(String),

    #[error(transparent)]
    Knot(#[from] KnotError),
}

/// Which conversion algorithm to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// The `O(m²)` single-span scheme.
    New,
    /// The `O(m³)` de Boor-Cox degree ladder.
    DeBoor,
}

/// The `(m+1) × (m+1)` coefficient table of one span.
///
/// Entry `(k, i)` is `b_{m,k}^{(i,j)}`, the `k`th Bernstein coefficient of
/// basis function `N_{m,i}` over span `j`, for `k = 0..m` and
/// `i = j-m..j`. Storage is one contiguous array in `k`-major order so the
/// back-substitution sweep and the partition-of-unity row sums are
/// cache-friendly passes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanTable<T> {
    degree: usize,
    span: usize,
    entries: Vec<T>,
}

impl<T: Scalar> SpanTable<T> {
    fn zeroed(degree: usize, span: usize) -> Self {
        SpanTable {
            degree,
            span,
            entries: vec![T::zero(); (degree + 1) * (degree + 1)],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The span index `j`.
    pub fn span(&self) -> usize {
        self.span
    }

    /// Index of the leftmost non-trivial function, `j - m`.
    pub fn first_function(&self) -> isize {
        self.span as isize - self.degree as isize
    }

    /// The function indices covered by the table, `j-m ..= j`.
    pub fn functions(&self) -> impl Iterator<Item = isize> {
        self.first_function()..=self.span as isize
    }

    fn column_of(&self, i: isize) -> Option<usize> {
        let c = i - self.first_function();
        (0..=self.degree as isize).contains(&c).then_some(c as usize)
    }

    /// `b_{m,k}^{(i,j)}`; functions outside `j-m ..= j` are zero without
    /// computation, matching their empty support on this span.
    pub fn coefficient(&self, k: usize, i: isize) -> T {
        match self.column_of(i) {
            Some(c) => self.entries[k * (self.degree + 1) + c].clone(),
            None => T::zero(),
        }
    }

    /// Row `k`: the `k`th Bernstein coefficient of every function.
    pub fn row(&self, k: usize) -> &[T] {
        let w = self.degree + 1;
        &self.entries[k * w..(k + 1) * w]
    }

    /// The coefficient vector of `N_{m,i}` as a Bernstein polynomial in the
    /// local parameter (a zero polynomial for `i` outside the span).
    pub fn function_coeffs(&self, i: isize) -> BernsteinPoly<T> {
        match self.column_of(i) {
            Some(c) => BernsteinPoly::new(
                (0..=self.degree)
                    .map(|k| self.entries[k * (self.degree + 1) + c].clone())
                    .collect(),
            ),
            None => BernsteinPoly::zero(self.degree),
        }
    }

    fn set(&mut self, k: usize, i: isize, value: T) {
        let c = self.column_of(i).expect("function index inside the span");
        self.entries[k * (self.degree + 1) + c] = value;
    }
}

impl SpanTable<f64> {
    /// JSON form `{"degree": m, "span": j, "columns": {"i": [b_0..b_m]}}`,
    /// columns in ascending `i`. Deterministic for identical inputs.
    pub fn to_json(&self) -> String {
        let mut columns = serde_json::Map::new();
        for i in self.functions() {
            let coeffs = self.function_coeffs(i).into_coeffs();
            columns.insert(i.to_string(), serde_json::json!(coeffs));
        }
        serde_json::json!({
            "degree": self.degree,
            "span": self.span,
            "columns": columns,
        })
        .to_string()
    }

    /// Parses the JSON form produced by [`SpanTable::to_json`]. Columns may
    /// appear in any order but must cover exactly `i = j-m ..= j`, each with
    /// `m + 1` coefficients.
    pub fn from_json(text: &str) -> Result<Self, ConversionError> {
        #[derive(serde::Deserialize)]
        struct Raw {
            degree: usize,
            span: usize,
            columns: std::collections::BTreeMap<String, Vec<f64>>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| ConversionError::Parse(e.to_string()))?;
        let mut table = SpanTable::zeroed(raw.degree, raw.span);
        if raw.columns.len() != raw.degree + 1 {
            return Err(ConversionError::Parse(format!(
                "expected {} columns, found {}",
                raw.degree + 1,
                raw.columns.len()
            )));
        }
        for (key, coeffs) in raw.columns {
            let i: isize = key
                .parse()
                .map_err(|_| ConversionError::Parse(format!("bad column index `{key}`")))?;
            if table.column_of(i).is_none() {
                return Err(ConversionError::Parse(format!(
                    "column {i} outside {}..={}",
                    table.first_function(),
                    raw.span
                )));
            }
            if coeffs.len() != raw.degree + 1 {
                return Err(ConversionError::Parse(format!(
                    "column {i} has {} coefficients, expected {}",
                    coeffs.len(),
                    raw.degree + 1
                )));
            }
            for (k, v) in coeffs.into_iter().enumerate() {
                table.set(k, i, v);
            }
        }
        Ok(table)
    }

    /// CSV form with header `k,i=j-m,…,i=j` and one row per `k`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k");
        for i in self.functions() {
            out.push_str(&format!(",i={i}"));
        }
        out.push('\n');
        for k in 0..=self.degree {
            out.push_str(&k.to_string());
            for v in self.row(k) {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}

/// The triangular table `b_{p,p}^{(i,j)}` for `p = 0..m`, `i = j-p..j`.
///
/// Row `m` is the rightmost column of the final [`SpanTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct BmmColumn<T> {
    degree: usize,
    span: usize,
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> BmmColumn<T> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn span(&self) -> usize {
        self.span
    }

    /// `b_{p,p}^{(i,j)}`; zero for `i < j - p` (empty support) and for
    /// `i > j`.
    pub fn value(&self, p: usize, i: isize) -> T {
        let c = i - (self.span as isize - p as isize);
        if (0..=p as isize).contains(&c) {
            self.rows[p][c as usize].clone()
        } else {
            T::zero()
        }
    }

    /// The `p = m` row, ordered `i = j-m ..= j`.
    pub fn last_row(&self) -> &[T] {
        self.rows.last().unwrap()
    }
}

fn validate_request(kv: &KnotVector, j: SpanIndex, m: usize) -> Result<(), ConversionError> {
    if j.index() >= kv.spans() {
        return Err(KnotError::SpanOutOfRange {
            j: j.index(),
            spans: kv.spans(),
        }
        .into());
    }
    if m > kv.degree() {
        return Err(ConversionError::DegreeOutOfRange {
            requested: m,
            max: kv.degree(),
        });
    }
    if kv.span_is_empty(j) {
        return Err(ConversionError::EmptySpan {
            j: j.index(),
            value: kv.knot(j.index() as isize),
        });
    }
    Ok(())
}

#[inline]
fn knot<T: Scalar>(kv: &KnotVector, i: isize) -> T {
    T::from_knot(kv.knot(i))
}

/// The diagonal seed `b_{p,p}^{(j,j)}`, `p = 0..m`: entry `p` is
/// `Π_{q=2..p} (t_{j+1} - t_j)/(t_{j+q} - t_j)` (1 for `p ∈ {0, 1}`),
/// accumulated as a product of ratios so magnitudes stay near 1 even when
/// `(t_{j+1} - t_j)^{m-1}` alone would underflow.
pub fn bmm_diagonal_seed<T: Scalar>(
    kv: &KnotVector,
    j: SpanIndex,
    m: usize,
) -> Result<Vec<T>, ConversionError> {
    validate_request(kv, j, m)?;
    let jj = j.index() as isize;
    let mut out = Vec::with_capacity(m + 1);
    out.push(T::one());
    if m == 0 {
        return Ok(out);
    }
    let width = knot::<T>(kv, jj + 1) - knot::<T>(kv, jj);
    let mut acc = T::one();
    for p in 1..=m as isize {
        // t_{j+p} > t_j whenever the span is non-empty, for any valid vector.
        assert!(
            kv.knot(jj + p) != kv.knot(jj),
            "zero denominator t_{}-t_{} in the diagonal seed",
            jj + p,
            jj
        );
        acc = acc * width.clone() / (knot::<T>(kv, jj + p) - knot::<T>(kv, jj));
        out.push(acc.clone());
    }
    Ok(out)
}

/// The triangular scheme: for `p = 1..m` and `i = j-1, …, j-p`,
///
/// ```text
/// b_{p,p}^{(i,j)} = (t_{j+1}-t_i)/(t_{p+i}-t_i) · b_{p-1,p-1}^{(i,j)}
///                 + (t_{p+i+1}-t_{j+1})/(t_{p+i+1}-t_{i+1}) · b_{p-1,p-1}^{(i+1,j)},
/// ```
///
/// seeded by the Kronecker delta at `p = 0`, the diagonal ratios at `i = j`,
/// and zeros for `i < j-p`. Terms with a vanishing knot difference drop out.
pub fn bmm_column<T: Scalar>(
    kv: &KnotVector,
    j: SpanIndex,
    m: usize,
) -> Result<BmmColumn<T>, ConversionError> {
    let diagonal = bmm_diagonal_seed::<T>(kv, j, m)?;
    let jj = j.index() as isize;
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(m + 1);
    rows.push(vec![T::one()]);
    for p in 1..=m as isize {
        let prev = &rows[p as usize - 1];
        let mut row = vec![T::zero(); p as usize + 1];
        row[p as usize] = diagonal[p as usize].clone();
        // prev holds i = j-p+1 ..= j at offset i - (j-p+1).
        let prev_at = |i: isize| -> T {
            let c = i - (jj - p + 1);
            if (0..p).contains(&c) {
                prev[c as usize].clone()
            } else {
                T::zero()
            }
        };
        for i in (jj - p..jj).rev() {
            let mut acc = T::zero();
            if kv.knot(p + i) != kv.knot(i) {
                acc = acc
                    + (knot::<T>(kv, jj + 1) - knot::<T>(kv, i))
                        / (knot::<T>(kv, p + i) - knot::<T>(kv, i))
                        * prev_at(i);
            }
            if kv.knot(p + i + 1) != kv.knot(i + 1) {
                acc = acc
                    + (knot::<T>(kv, p + i + 1) - knot::<T>(kv, jj + 1))
                        / (knot::<T>(kv, p + i + 1) - knot::<T>(kv, i + 1))
                        * prev_at(i + 1);
            }
            row[(i - (jj - p)) as usize] = acc;
        }
        rows.push(row);
    }
    Ok(BmmColumn {
        degree: m,
        span: j.index(),
        rows,
    })
}

/// Coefficients of the first non-trivial function `N_{m,j-m}`: only
/// `b_{m,0}` is non-zero,
///
/// ```text
/// b_{m,0}^{(j-m,j)} = (t_{j+1}-t_j)^{m-1} / Π_{q=2..m} (t_{j+1}-t_{j-q+1}),
/// ```
///
/// accumulated as `m-1` ratios for the same overflow reason as the seed.
pub fn first_function_row<T: Scalar>(
    kv: &KnotVector,
    j: SpanIndex,
    m: usize,
) -> Result<BernsteinPoly<T>, ConversionError> {
    validate_request(kv, j, m)?;
    let jj = j.index() as isize;
    let mut coeffs = vec![T::zero(); m + 1];
    let width = knot::<T>(kv, jj + 1) - knot::<T>(kv, jj);
    let mut acc = T::one();
    for q in 2..=m as isize {
        assert!(
            kv.knot(jj + 1) != kv.knot(jj - q + 1),
            "zero denominator t_{}-t_{} in the first-function row",
            jj + 1,
            jj - q + 1
        );
        acc = acc * width.clone() / (knot::<T>(kv, jj + 1) - knot::<T>(kv, jj - q + 1));
    }
    coeffs[0] = acc;
    Ok(BernsteinPoly::new(coeffs))
}

/// The `O(m²)` conversion.
///
/// Steps: (1) diagonal seed, (2) triangular scheme for the `k = m` row,
/// (3) closed form for function `j-m`, (4) back-substitution for
/// `k = m-1..0`, `i = j-1..j-m+1`:
///
/// ```text
/// b_{m,k}^{(i,j)} = (t_j-t_i)/(t_{j+1}-t_i) · b_{m,k+1}^{(i,j)}
///   + v_{mi}/(t_{j+1}-t_i) · ((t_{j+1}-t_{m+i+2}) b_{m,k}^{(i+1,j)}
///                           + (t_{m+i+2}-t_j) b_{m,k+1}^{(i+1,j)}),
/// ```
///
/// with `v_{mi} = (t_{m+i+1}-t_i)/(t_{m+i+2}-t_{i+1})`, taken as zero when
/// `t_{m+i+2} = t_{i+1}`. The recurrence is never applied at the boundary
/// columns `i = j-m` and `i = j`, which steps 2–3 supply. Degree 0 returns
/// the 1×1 table `[1]`.
pub fn convert_span_new<T: Scalar>(
    kv: &KnotVector,
    j: SpanIndex,
    m: usize,
) -> Result<SpanTable<T>, ConversionError> {
    validate_request(kv, j, m)?;
    let mut table = SpanTable::zeroed(m, j.index());
    let jj = j.index() as isize;
    if m == 0 {
        table.set(0, jj, T::one());
        return Ok(table);
    }

    let bmm = bmm_column::<T>(kv, j, m)?;
    for (c, v) in bmm.last_row().iter().enumerate() {
        table.set(m, jj - m as isize + c as isize, v.clone());
    }

    let first = first_function_row::<T>(kv, j, m)?;
    table.set(0, jj - m as isize, first.coeffs()[0].clone());

    let mi = m as isize;
    for k in (0..m).rev() {
        for i in (jj - mi + 1..jj).rev() {
            let den = knot::<T>(kv, jj + 1) - knot::<T>(kv, i);
            let mut b = (knot::<T>(kv, jj) - knot::<T>(kv, i)) / den.clone()
                * table.coefficient(k + 1, i);
            if kv.knot(mi + i + 2) != kv.knot(i + 1) {
                let v = (knot::<T>(kv, mi + i + 1) - knot::<T>(kv, i))
                    / (knot::<T>(kv, mi + i + 2) - knot::<T>(kv, i + 1));
                let c = (knot::<T>(kv, jj + 1) - knot::<T>(kv, mi + i + 2))
                    * table.coefficient(k, i + 1)
                    + (knot::<T>(kv, mi + i + 2) - knot::<T>(kv, jj))
                        * table.coefficient(k + 1, i + 1);
                b = b + v / den * c;
            }
            table.set(k, i, b);
        }
    }
    Ok(table)
}

/// The `O(m³)` de Boor-Cox ladder: builds the degree-`p` table from the
/// degree-`p-1` table for `p = 1..m`,
///
/// ```text
/// b_{p,k}^{(i,j)} = (p-k)/p · ( b_{p-1,k}^{(i,j)} (t_j-t_i)/(t_{p+i}-t_i)
///                             + b_{p-1,k}^{(i+1,j)} (t_{p+i+1}-t_j)/(t_{p+i+1}-t_{i+1}) )
///                 +   k/p   · ( b_{p-1,k-1}^{(i,j)} (t_{j+1}-t_i)/(t_{p+i}-t_i)
///                             + b_{p-1,k-1}^{(i+1,j)} (t_{p+i+1}-t_{j+1})/(t_{p+i+1}-t_{i+1}) ),
/// ```
///
/// starting from the Kronecker delta at degree 0; out-of-range coefficients
/// are zero and vanishing knot differences drop their term.
pub fn convert_span_deboor<T: Scalar>(
    kv: &KnotVector,
    j: SpanIndex,
    m: usize,
) -> Result<SpanTable<T>, ConversionError> {
    validate_request(kv, j, m)?;
    let mut table = SpanTable::zeroed(m, j.index());
    let jj = j.index() as isize;
    if m == 0 {
        table.set(0, jj, T::one());
        return Ok(table);
    }

    // Two rolling (m+1)² buffers, k-major with fixed stride m+1; the
    // degree-p block occupies rows 0..=p, columns 0..=p (column c holds
    // function i = j - p + c).
    let w = m + 1;
    let mut prev = vec![T::zero(); w * w];
    let mut cur = vec![T::zero(); w * w];
    prev[0] = T::one(); // degree 0: b_{0,0}^{(j,j)} = 1

    for p in 1..=m {
        let pi = p as isize;
        // Coefficient b_{p-1,k}^{(q,j)} from the previous level.
        let prev_at = |k: isize, q: isize| -> T {
            let c = q - (jj - pi + 1);
            if (0..pi).contains(&c) && (0..pi).contains(&k) {
                prev[k as usize * w + c as usize].clone()
            } else {
                T::zero()
            }
        };
        let pf = T::from_int(p as i64);
        for c in 0..=p {
            let i = jj - pi + c as isize;
            let lower_ok = kv.knot(pi + i) != kv.knot(i);
            let upper_ok = kv.knot(pi + i + 1) != kv.knot(i + 1);
            let lower_den = knot::<T>(kv, pi + i) - knot::<T>(kv, i);
            let upper_den = knot::<T>(kv, pi + i + 1) - knot::<T>(kv, i + 1);
            for k in 0..=p {
                let ki = k as isize;
                let mut acc = T::zero();
                if k < p {
                    let mut bracket = T::zero();
                    if lower_ok {
                        bracket = bracket
                            + prev_at(ki, i) * (knot::<T>(kv, jj) - knot::<T>(kv, i))
                                / lower_den.clone();
                    }
                    if upper_ok {
                        bracket = bracket
                            + prev_at(ki, i + 1)
                                * (knot::<T>(kv, pi + i + 1) - knot::<T>(kv, jj))
                                / upper_den.clone();
                    }
                    acc = acc + T::from_int((p - k) as i64) / pf.clone() * bracket;
                }
                if k > 0 {
                    let mut bracket = T::zero();
                    if lower_ok {
                        bracket = bracket
                            + prev_at(ki - 1, i) * (knot::<T>(kv, jj + 1) - knot::<T>(kv, i))
                                / lower_den.clone();
                    }
                    if upper_ok {
                        bracket = bracket
                            + prev_at(ki - 1, i + 1)
                                * (knot::<T>(kv, pi + i + 1) - knot::<T>(kv, jj + 1))
                                / upper_den.clone();
                    }
                    acc = acc + T::from_int(k as i64) / pf.clone() * bracket;
                }
                cur[k * w + c] = acc;
            }
        }
        std::mem::swap(&mut prev, &mut cur);
    }

    table.entries = prev;
    Ok(table)
}

/// Runs the chosen conversion method.
pub fn convert_span<T: Scalar>(
    kv: &KnotVector,
    j: SpanIndex,
    m: usize,
    method: Method,
) -> Result<SpanTable<T>, ConversionError> {
    match method {
        Method::New => convert_span_new(kv, j, m),
        Method::DeBoor => convert_span_deboor(kv, j, m),
    }
}

/// Converts every non-empty span sequentially, left to right.
pub fn convert_all_spans_seq<T: Scalar>(
    kv: &KnotVector,
    method: Method,
) -> Result<Vec<SpanTable<T>>, ConversionError> {
    kv.nonempty_spans()
        .map(|j| convert_span(kv, j, kv.degree(), method))
        .collect()
}

/// Converts every non-empty span, in parallel when the `parallel` feature
/// is enabled. Spans are fully independent, so the result is identical to
/// the sequential version, in the same left-to-right order.
pub fn convert_all_spans<T: Scalar + Send + Sync>(
    kv: &KnotVector,
    method: Method,
) -> Result<Vec<SpanTable<T>>, ConversionError> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let spans: Vec<SpanIndex> = kv.nonempty_spans().collect();
        spans
            .par_iter()
            .map(|&j| convert_span(kv, j, kv.degree(), method))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        convert_all_spans_seq(kv, method)
    }
}

/// Evaluates `N_{m,i}(u)` from a span table by de Casteljau on the local
/// parameter. Accepts `t_j ≤ u ≤ t_{j+1}`; the closed right end evaluates
/// the polynomial at local parameter 1.
pub fn reconstruct<T: Scalar>(
    table: &SpanTable<T>,
    kv: &KnotVector,
    i: isize,
    u: f64,
) -> Result<T, ConversionError> {
    let jj = table.span() as isize;
    let lo = kv.knot(jj);
    let hi = kv.knot(jj + 1);
    if !(u >= lo && u <= hi) {
        return Err(ConversionError::OutOfSpan {
            u,
            j: table.span(),
            lo,
            hi,
        });
    }
    let s = (T::from_knot(u) - T::from_knot(lo)) / (T::from_knot(hi) - T::from_knot(lo));
    Ok(table.function_coeffs(i).eval(&s))
}

/// One segment of a piecewise polynomial: span `j` mapped to `[lo, hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment<T> {
    pub span: usize,
    pub lo: f64,
    pub hi: f64,
    pub poly: BernsteinPoly<T>,
}

/// A B-spline basis function (or a derivative of one) as per-span Bernstein
/// rows: the exact verification vehicle for the differential identities.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePolynomial<T> {
    degree: usize,
    segments: Vec<Segment<T>>,
}

impl<T: Scalar> PiecewisePolynomial<T> {
    /// Assembles `N_{m,i}` over its support from per-span conversion
    /// tables.
    pub fn basis_function(
        kv: &KnotVector,
        i: isize,
        m: usize,
        method: Method,
    ) -> Result<Self, ConversionError> {
        let lo_span = i.max(0) as usize;
        let hi_span = ((i + m as isize).min(kv.spans() as isize - 1)).max(-1);
        let mut segments = Vec::new();
        for j in lo_span as isize..=hi_span {
            let span = kv.span(j as usize)?;
            if kv.span_is_empty(span) {
                continue;
            }
            let table = convert_span(kv, span, m, method)?;
            segments.push(Segment {
                span: j as usize,
                lo: kv.knot(j),
                hi: kv.knot(j + 1),
                poly: table.function_coeffs(i),
            });
        }
        Ok(PiecewisePolynomial {
            degree: m,
            segments,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    /// Value at `u`; zero outside the stored segments, with the final
    /// segment closed on the right.
    pub fn eval(&self, u: f64) -> T {
        for (idx, seg) in self.segments.iter().enumerate() {
            let last = idx + 1 == self.segments.len();
            if (seg.lo <= u && u < seg.hi) || (last && u == seg.hi) {
                let s = (T::from_knot(u) - T::from_knot(seg.lo))
                    / (T::from_knot(seg.hi) - T::from_knot(seg.lo));
                return seg.poly.eval(&s);
            }
        }
        T::zero()
    }

    /// The derivative, segment by segment: Bernstein differentiation in the
    /// local parameter carries the chain factor `1/(t_{j+1} - t_j)`.
    pub fn derivative(&self) -> Result<Self, crate::bernstein::BernsteinError> {
        let segments = self
            .segments
            .iter()
            .map(|seg| {
                let width = T::from_knot(seg.hi) - T::from_knot(seg.lo);
                Ok(Segment {
                    span: seg.span,
                    lo: seg.lo,
                    hi: seg.hi,
                    poly: seg.poly.derivative()?.scale(&(T::one() / width)),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PiecewisePolynomial {
            degree: self.degree - 1,
            segments,
        })
    }
}
