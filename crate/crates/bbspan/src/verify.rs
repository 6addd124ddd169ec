//! Invariant checks over conversion output, backing the `verify` command.
//!
//! For every non-empty span the suite checks partition of unity,
//! nonnegativity, boundary-function sparsity, agreement between the two
//! conversion methods, and reconstruction against the de Boor-Cox oracle,
//! reporting the worst deviation seen for each check.

use crate::conversion::{convert_span_deboor, convert_span_new, reconstruct, SpanTable};
use crate::knots::KnotVector;
use crate::oracle::deboor_cox_eval;

/// Outcome of one named check, aggregated over all spans.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

/// Results of the whole suite.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    /// One `PASS`/`FAIL` line per check with its worst deviation.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{status} {:<24} max deviation {:9.3e} (tolerance {:.1e})\n",
                c.name, c.max_deviation, c.tolerance
            ));
        }
        out
    }
}

fn merge(worst: &mut f64, candidate: f64) {
    if candidate > *worst {
        *worst = candidate;
    }
}

/// Table-level checks, usable on any table (including a corrupted one, which
/// is how the negative path is tested). Returns the worst deviations for
/// partition of unity, nonnegativity, boundary sparsity, and reconstruction
/// against the oracle at `samples` evenly spaced parameters per span.
pub fn check_table(kv: &KnotVector, table: &SpanTable<f64>, samples: usize) -> Vec<CheckResult> {
    let m = table.degree();
    let jj = table.span() as isize;

    let mut partition = 0.0_f64;
    for k in 0..=m {
        let sum: f64 = table.row(k).iter().sum();
        merge(&mut partition, (sum - 1.0).abs());
    }

    let mut negativity = 0.0_f64;
    for k in 0..=m {
        for v in table.row(k) {
            merge(&mut negativity, -v.min(0.0));
        }
    }

    let mut sparsity = 0.0_f64;
    for k in 1..=m {
        merge(&mut sparsity, table.coefficient(k, jj - m as isize).abs());
    }
    for k in 0..m {
        merge(&mut sparsity, table.coefficient(k, jj).abs());
    }

    let mut recon = 0.0_f64;
    let lo = kv.knot(jj);
    let hi = kv.knot(jj + 1);
    for q in 0..samples {
        let u = lo + (hi - lo) * (q as f64 + 0.5) / samples as f64;
        for i in jj - m as isize..=jj {
            let direct = deboor_cox_eval::<f64>(kv, i, u);
            let rebuilt = reconstruct(table, kv, i, u).expect("sample inside span");
            merge(&mut recon, (rebuilt - direct).abs() / direct.abs().max(1.0));
        }
    }

    vec![
        CheckResult {
            name: "partition-of-unity",
            max_deviation: partition,
            tolerance: 1e-12,
        },
        CheckResult {
            name: "nonnegativity",
            max_deviation: negativity,
            tolerance: 1e-12,
        },
        CheckResult {
            name: "boundary-sparsity",
            max_deviation: sparsity,
            tolerance: 0.0,
        },
        CheckResult {
            name: "reconstruction",
            max_deviation: recon,
            tolerance: 1e-12,
        },
    ]
}

/// Runs the full suite over every non-empty span of `kv`.
pub fn run_checks(kv: &KnotVector, samples: usize) -> VerifyReport {
    let m = kv.degree();
    let mut aggregate: Vec<CheckResult> = Vec::new();
    let mut equivalence = 0.0_f64;

    for j in kv.nonempty_spans() {
        let table = convert_span_new::<f64>(kv, j, m).expect("non-empty span");
        let other = convert_span_deboor::<f64>(kv, j, m).expect("non-empty span");
        for k in 0..=m {
            for (a, b) in table.row(k).iter().zip(other.row(k)) {
                merge(&mut equivalence, (a - b).abs() / b.abs().max(1.0));
            }
        }
        let span_checks = check_table(kv, &table, samples);
        if aggregate.is_empty() {
            aggregate = span_checks;
        } else {
            for (total, c) in aggregate.iter_mut().zip(span_checks) {
                merge(&mut total.max_deviation, c.max_deviation);
            }
        }
    }

    aggregate.push(CheckResult {
        name: "method-equivalence",
        max_deviation: equivalence,
        tolerance: 1e-10,
    });
    VerifyReport { checks: aggregate }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{generate_knots, GeneratorConfig};

    #[test]
    fn random_vectors_pass_all_checks() {
        for seed in 0..10 {
            let kv = generate_knots(&GeneratorConfig::new(4, 8, seed, seed % 2 == 0));
            let report = run_checks(&kv, 25);
            assert!(report.all_passed(), "seed {seed}:\n{}", report.to_text());
        }
    }

    #[test]
    fn bezier_passes_with_zero_deviation() {
        let kv = KnotVector::new(3, 1, vec![0.0; 4].into_iter().chain(vec![1.0; 4]).collect())
            .unwrap();
        let report = run_checks(&kv, 10);
        assert!(report.all_passed());
        for c in &report.checks {
            assert_eq!(c.max_deviation, 0.0, "{}", c.name);
        }
    }

    #[test]
    fn corrupted_table_fails() {
        let kv = generate_knots(&GeneratorConfig::new(3, 6, 5, true));
        let j = kv.nonempty_spans().next().unwrap();
        let good = convert_span_new::<f64>(&kv, j, 3).unwrap();
        let checks = check_table(&kv, &good, 10);
        assert!(checks.iter().all(CheckResult::passed));

        // Inject a corrupted coefficient through the JSON round trip.
        let jj = good.span() as isize;
        let mut doc: serde_json::Value = serde_json::from_str(&good.to_json()).unwrap();
        doc["columns"][(jj - 1).to_string()][1] = serde_json::json!(0.25 + 1.0);
        let table = SpanTable::from_json(&doc.to_string()).unwrap();
        let checks = check_table(&kv, &table, 10);
        assert!(checks.iter().any(|c| !c.passed()));
    }
}
