//! The verification suite: nine rows per scenario over a corpus.

use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::extension::{a3_stability, build_valuation_algebraic, expansion_crosscheck, gauss_crosscheck, standard_pcs, x2_minus_t, Case};
use crate::keyseq::checks::{self, Check};

use super::report::{values_json, Assertion, Report};
use super::run::{scenario_sequence, scenario_target, structure_rows, Overrides};
use super::scenario::Scenario;

/// Row names in ledger order.
pub const ROWS: [&str; 9] = [
    "monotonicity",
    "kras-equals-previous-delta",
    "degree-sampled",
    "unique-maximal-root",
    "kras-chain",
    "tame-defectless",
    "completeness-sampled",
    "gauss-crosscheck",
    "a3-stability",
];

/// Samples per step for the sampled degree bound.
const DEGREE_SAMPLES: usize = 8;
const GAUSS_SAMPLES: usize = 100;
const EXPANSION_SAMPLES: usize = 50;

/// The built-in corpus, in order.
pub const CORPUS: [(&str, &str); 12] = [
    ("worked", include_str!("../../scenarios/01_worked.toml")),
    ("in_k", include_str!("../../scenarios/02_in_k.toml")),
    ("f5_quadratic", include_str!("../../scenarios/03_f5_quadratic.toml")),
    ("f5_sixth", include_str!("../../scenarios/04_f5_sixth.toml")),
    ("f49_quartic", include_str!("../../scenarios/05_f49_quartic.toml")),
    ("q_cubic", include_str!("../../scenarios/06_q_cubic.toml")),
    ("gaussian", include_str!("../../scenarios/07_gaussian.toml")),
    ("f5_quartic", include_str!("../../scenarios/08_f5_quartic.toml")),
    ("value_transcendental", include_str!("../../scenarios/09_value_transcendental.toml")),
    ("residue_transcendental", include_str!("../../scenarios/10_residue_transcendental.toml")),
    ("valuation_algebraic", include_str!("../../scenarios/11_valuation_algebraic.toml")),
    ("pcs_transcendental", include_str!("../../scenarios/12_pcs_transcendental.toml")),
];

pub fn builtin_corpus() -> Result<Vec<Scenario>> {
    CORPUS.iter().map(|(_, src)| Scenario::parse(src)).collect()
}

fn row(i: usize, statement: &str, c: Check) -> Assertion {
    Assertion::from_check(ROWS[i], statement, c)
}

/// The nine rows for one scenario.
pub fn scenario_rows(sc: &Scenario) -> Result<Vec<Assertion>> {
    Ok(rows_and_summary(sc)?.0)
}

fn rows_and_summary(sc: &Scenario) -> Result<(Vec<Assertion>, Json)> {
    let k = sc.ground_field()?;
    let (x, oracle) = scenario_target(sc, &k)?;
    let seq = scenario_sequence(sc, &k, &x)?;
    let policy = sc.policy();
    let structure = structure_rows(&seq, &x, sc);
    let find = |id: &str| structure.iter().find(|a| a.id == id).cloned().expect("structure row present");

    let degree = row(2, "sampled z with v(x - z) > delta_(i-1) have degree at least deg Q_i", checks::ks6_sampled(&seq, &x, &policy, DEGREE_SAMPLES, sc.seed));
    let family = checks::sample_family(&seq, sc.limits.degree_bound, sc.limits.samples, sc.seed);
    let complete = match checks::completeness(&seq, &x, &policy, &family) {
        Ok(s) => s.check(),
        Err(e) => Check { pass: false, checked: 0, witness: Some(format!("error: {e}")) },
    };
    let completeness = row(6, "every sampled f with deg f <= the degree bound is covered by some Q_i with deg Q_i <= deg f and delta(f) <= delta(Q_i)", complete);

    let gauss = match oracle.as_ref().filter(|o| o.case() != Case::A3) {
        Some(o) => {
            let g = gauss_crosscheck(&k, GAUSS_SAMPLES, sc.seed);
            let e = expansion_crosscheck(o, EXPANSION_SAMPLES, 4, sc.seed);
            let c = if g.pass { e } else { g };
            row(7, "the product-formula value equals the coefficient minimum for the Gauss point and the formal expansion for this extension", c)
        }
        None => row(7, "the product-formula value equals the coefficient minimum for the Gauss point", gauss_crosscheck(&k, GAUSS_SAMPLES, sc.seed)),
    };

    let a3 = match oracle.as_ref().filter(|o| o.case() == Case::A3) {
        Some(o) => row(8, "v(X^2 - t) on this extension is certified and stable under refinement", a3_stability(o, &x2_minus_t(&k))),
        None => {
            let c = standard_pcs(&k, 12)
                .and_then(|r| build_valuation_algebraic(&k, &r, None))
                .map(|o| a3_stability(&o, &x2_minus_t(&k)))
                .unwrap_or_else(|e| Check { pass: false, checked: 0, witness: Some(format!("error: {e}")) });
            row(8, "v(X^2 - t) on the sum of t^(1-1/(i+1)) is certified and stable under refinement", c)
        }
    };

    let summary = json!({
        "name": sc.name,
        "x": x.describe(),
        "degrees": seq.degrees(),
        "deltas": values_json(&seq.deltas()),
        "stopping": seq.stopping.as_str(),
    });
    let rows = vec![
        find("monotonicity"),
        find("kras-equals-previous-delta"),
        degree,
        find("unique-maximal-root"),
        find("kras-chain"),
        find("tame-defectless"),
        completeness,
        gauss,
        a3,
    ];
    Ok((rows, summary))
}

/// Runs every scenario in parallel. Row ids are `<scenario>/<row>`.
pub fn verify_suite(corpus: &[Scenario], overrides: &Overrides) -> Result<Report> {
    if corpus.is_empty() {
        return Err(Error::Scenario("empty corpus".into()));
    }
    let start = Instant::now();
    let mut corpus = corpus.to_vec();
    for sc in &mut corpus {
        overrides.apply(sc)?;
    }
    let outcomes: Vec<Result<(Vec<Assertion>, Json)>> = corpus
        .par_iter()
        .map(rows_and_summary)
        .collect();
    let mut assertions = Vec::new();
    let mut summaries = Vec::new();
    for (sc, out) in corpus.iter().zip(outcomes) {
        let (rows, mut summary) = out.map_err(|e| Error::Scenario(format!("scenario {:?}: {e}", sc.name)))?;
        summary["pass"] = json!(rows.iter().all(|r| r.pass));
        summaries.push(summary);
        for mut r in rows {
            r.id = format!("{}/{}", sc.name, r.id);
            assertions.push(r);
        }
    }
    let result = json!({ "scenarios": summaries, "rows_per_scenario": ROWS.len(), "rows": assertions.len() });
    let echo = Json::Array(corpus.iter().map(|s| s.to_json()).collect());
    Ok(Report { subcommand: "verify_suite".into(), scenario: echo, result, assertions, timing_ms: start.elapsed().as_millis() })
}
