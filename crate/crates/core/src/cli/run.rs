//! Subcommand dispatch.

use std::time::Instant;

use serde_json::{json, Value as Json};

use crate::algebra::GroundField;
use crate::error::{Error, Result};
use crate::extension::{a3_stability, expansion_crosscheck, x2_minus_t, Case, ValuationOracle};
use crate::galois::AlgebraicElement;
use crate::keyseq::checks::{self, Check, CONJUGATE_CHECK_LIMIT, ROOT_CHECK_LIMIT};
use crate::keyseq::{delta, icf_report, key_sequence, maximal_roots, KeySequence, Target};
use crate::newton::{puiseux_roots, RootMode};
use crate::puiseux::PuiseuxSeries;
use crate::values::{Value, Q64};

use super::report::{poly_json, sequence_json, series_json, value_json, values_json, Assertion, Report};
use super::scenario::Scenario;
use super::suite;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subcommand {
    Roots,
    Delta,
    Kras,
    Keyseq,
    Keypolys,
    Icf,
    Classify,
    VerifySuite,
}

impl Subcommand {
    pub const ALL: [Subcommand; 8] = [
        Subcommand::Roots,
        Subcommand::Delta,
        Subcommand::Kras,
        Subcommand::Keyseq,
        Subcommand::Keypolys,
        Subcommand::Icf,
        Subcommand::Classify,
        Subcommand::VerifySuite,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Subcommand::Roots => "roots",
            Subcommand::Delta => "delta",
            Subcommand::Kras => "kras",
            Subcommand::Keyseq => "keyseq",
            Subcommand::Keypolys => "keypolys",
            Subcommand::Icf => "icf",
            Subcommand::Classify => "classify",
            Subcommand::VerifySuite => "verify_suite",
        }
    }

    pub fn parse(s: &str) -> Result<Subcommand> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Scenario(format!("unknown subcommand {s:?}")))
    }
}

/// Command-line overrides of the scenario.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub max_steps: Option<usize>,
    /// Truncation order for root expansions and element approximations.
    pub precision: Option<i64>,
}

impl Overrides {
    pub fn apply(&self, sc: &mut Scenario) -> Result<()> {
        if let Some(s) = self.seed {
            sc.seed = s;
        }
        if let Some(m) = self.max_steps {
            if m == 0 {
                return Err(Error::Scenario("--max-steps must be positive".into()));
            }
            sc.limits.max_steps = m;
        }
        if let Some(p) = self.precision {
            if p <= 0 {
                return Err(Error::Scenario("--precision must be positive".into()));
            }
            sc.limits.root_precision = p;
        }
        Ok(())
    }
}

/// Runs one subcommand. `Err` is an input error; a report with a failed
/// row is an assertion failure.
pub fn run_scenario(sc: &Scenario, sub: Subcommand) -> Result<Report> {
    let start = Instant::now();
    let (result, assertions) = match sub {
        Subcommand::Roots => roots(sc)?,
        Subcommand::Delta => delta_cmd(sc)?,
        Subcommand::Kras => kras(sc)?,
        Subcommand::Keyseq => keyseq_cmd(sc)?,
        Subcommand::Keypolys => keypolys(sc)?,
        Subcommand::Icf => icf(sc)?,
        Subcommand::Classify => classify(sc)?,
        Subcommand::VerifySuite => {
            let rows = suite::scenario_rows(sc)?;
            (json!({ "scenarios": [sc.name] }), rows)
        }
    };
    Ok(Report { subcommand: sub.as_str().into(), scenario: sc.to_json(), result, assertions, timing_ms: start.elapsed().as_millis() })
}

type Outcome = (Json, Vec<Assertion>);

fn require<T>(v: Option<T>, what: &str, sub: &str) -> Result<T> {
    v.ok_or_else(|| Error::Scenario(format!("{sub} needs {what}")))
}

/// The point the key sequence approximates: `[element]`, else the
/// extension's `x`.
pub fn scenario_target(sc: &Scenario, k: &GroundField) -> Result<(Target, Option<ValuationOracle>)> {
    let o = sc.oracle(k)?;
    match sc.target(k)? {
        Some(t) => Ok((t, o)),
        None => match &o {
            Some(o) => Ok((o.target(), Some(o.clone()))),
            None => Err(Error::Scenario("the scenario has neither [element] nor [extension]".into())),
        },
    }
}

pub fn scenario_sequence(sc: &Scenario, k: &GroundField, x: &Target) -> Result<KeySequence> {
    let mut seq = key_sequence(x, k, &sc.keyseq_options())?;
    if let Some(m) = &sc.mutate {
        let i = m.q_index;
        let entry = seq.entries.get_mut(i.wrapping_sub(1)).ok_or_else(|| Error::Scenario(format!("mutate.q_index = {i} is out of range")))?;
        let q = entry.q.as_ref().ok_or_else(|| Error::Scenario(format!("Q_{i} is not explicit and cannot be mutated")))?;
        let c = sc.series(k, &m.constant)?;
        let c = if c.field() == q.field() { c } else { c.lift_to(q.field())? };
        let mut coeffs = q.coeffs().to_vec();
        coeffs[0] = c;
        entry.q = Some(crate::newton::SeriesPoly::new(q.field(), coeffs));
        seq.notes.push(format!("Q_{i} mutated: constant coefficient replaced by {}", m.constant));
    }
    Ok(seq)
}

fn roots(sc: &Scenario) -> Result<Outcome> {
    let k = sc.ground_field()?;
    let f = require(sc.poly(&k)?, "a [poly] block", "roots")?;
    let prec = Q64::from_integer(sc.limits.root_precision);
    let b = puiseux_roots(&f, prec, RootMode::Auto)?;
    let bounds = b.residual_bounds()?;
    let residuals = b.residuals()?;
    let roots: Vec<Json> = b
        .roots
        .iter()
        .zip(&residuals)
        .map(|(r, res)| json!({ "root": series_json(&r.series), "multiplicity": r.multiplicity, "orbit": r.orbit, "e": r.e(), "residual": value_json(res) }))
        .collect();
    let result = json!({
        "poly": poly_json(&f),
        "precision": prec.to_string(),
        "field": b.field.describe(),
        "count": b.count(),
        "roots": roots,
        "values": b.values().iter().map(|(v, m)| json!([v.to_string(), m])).collect::<Vec<_>>(),
        "separation": b.separation()?.map(|v| v.to_string()),
    });
    let reconstructs = b.reconstructs()?;
    let count: usize = b.roots.iter().map(|r| r.multiplicity * r.orbit).sum();
    let low = bounds.iter().position(|v| *v < Value::Rat(prec));
    let asserts = vec![
        Assertion::new("roots-reconstruct", "the product of (X - root) over all roots reproduces f up to the working precision", reconstructs, (!reconstructs).then(|| format!("product {} differs from f = {}", b.product().map(|p| p.display()).unwrap_or_default(), f.display()))),
        Assertion::equal("roots-count", "roots counted with multiplicity and orbit size number deg f", count, f.degree()),
        Assertion::new(
            "roots-residual",
            "each root lies within the working precision of a true root, certified by v(f(r)) - v(f'(r))",
            low.is_none(),
            low.map(|i| format!("root {} has certified distance {} < {}", b.roots[i].series.to_literal(), bounds[i], prec)),
        ),
    ];
    Ok((result, asserts))
}

fn delta_cmd(sc: &Scenario) -> Result<Outcome> {
    let k = sc.ground_field()?;
    let f = require(sc.poly(&k)?, "a [poly] block", "delta")?;
    let x = require(sc.target(&k)?, "an [element] block", "delta")?;
    let policy = sc.policy();
    let d = delta(&f, &x, &policy)?;
    let mut asserts = Vec::new();
    let mut result = json!({ "poly": poly_json(&f), "x": x.describe(), "delta": value_json(&d) });
    if f.degree() <= ROOT_CHECK_LIMIT {
        let (d2, hits) = maximal_roots(&f, &x, &policy)?;
        result["maximal_roots"] = Json::Array(hits.iter().map(series_json).collect());
        asserts.push(Assertion::equal("delta-two-routes", "delta from the Newton polygon of f(x + Y) equals the largest v(x - b) over the expanded roots b", d.to_string(), d2.to_string()));
    }
    Ok((result, asserts))
}

/// The element as an exact series: explicit elements as given, others
/// truncated at the working precision.
fn exact_element(sc: &Scenario, k: &GroundField, sub: &str) -> Result<(PuiseuxSeries, Option<String>)> {
    let x = require(sc.target(k)?, "an [element] block", sub)?;
    if let Target::Series { x: crate::puiseux::LazySeries::Explicit(s), .. } = &x {
        if s.is_exact() {
            return Ok((s.clone(), None));
        }
    }
    let p = Q64::from_integer(sc.limits.root_precision);
    Ok((x.approx(p)?.as_exact(), Some(format!("element truncated below t^{p}"))))
}

fn kras(sc: &Scenario) -> Result<Outcome> {
    let k = sc.ground_field()?;
    let (a, note) = exact_element(sc, &k, "kras")?;
    let el = AlgebraicElement::new(&k, &a)?;
    let inv = el.ramification_invariants()?;
    let deg = el.degree();
    let mut result = json!({
        "element": series_json(&a),
        "note": note,
        "degree": deg,
        "e": inv.e,
        "f": inv.f,
        "tame": inv.tame,
        "defectless": inv.defectless,
        "kras": value_json(&el.kras()),
        "homogeneous": el.is_homogeneous(),
    });
    let mut asserts = vec![
        Assertion::equal("degree-is-e-times-f", "the degree over K equals e times f", deg, inv.e as usize * inv.f),
    ];
    if deg <= CONJUGATE_CHECK_LIMIT {
        let by_conj = el.kras_by_conjugates()?;
        result["kras_by_conjugates"] = value_json(&by_conj);
        asserts.push(Assertion::equal("kras-two-routes", "Kras from the stabilizer chain equals the largest v(a - a') over conjugates a' != a", el.kras().to_string(), by_conj.to_string()));
        let m = el.min_poly_capped(CONJUGATE_CHECK_LIMIT)?;
        result["min_poly"] = poly_json(&m);
        asserts.push(Assertion::equal("min-poly-degree", "the minimal polynomial has degree [K(a):K]", m.degree(), deg));
        let res = el.min_poly_residuals()?;
        let bad = res.iter().position(|v| !v.is_inf());
        asserts.push(Assertion::new(
            "min-poly-vanishes",
            "the minimal polynomial vanishes exactly at every conjugate",
            bad.is_none(),
            bad.map(|i| format!("conjugate {i}: v(Q(b)) = {}", res[i])),
        ));
    } else {
        result["note_degree"] = json!(format!("degree {deg} is above {CONJUGATE_CHECK_LIMIT}; conjugate checks skipped"));
    }
    Ok((result, asserts))
}

/// Rows shared by `keyseq` and the suite.
pub fn structure_rows(seq: &KeySequence, x: &Target, sc: &Scenario) -> Vec<Assertion> {
    let policy = sc.policy();
    vec![
        Assertion::from_check("monotonicity", "delta_i strictly increases, v(a_(i+1) - a_i) = delta_i, and the degrees strictly increase", checks::monotonicity(seq)),
        Assertion::from_check("kras-equals-previous-delta", "Kras(a_i) equals delta_(i-1) for every i >= 2", checks::ks5(seq)),
        Assertion::from_check("unique-maximal-root", "a_i is the only root of Q_i attaining delta(Q_i), and no other conjugate of a_i reaches delta_i", checks::unique_maximal_root(seq, x, &policy)),
        Assertion::from_check("kras-chain", "for b = a_i and b = a_i - a_(i-1), every conjugate s b != b has v(b) <= v(b - s b) <= Kras(b), and Kras(b) is attained", checks::krasner_chain(seq)),
        Assertion::from_check("tame-defectless", "each e_i is prime to the characteristic and e_i f_i = deg Q_i", checks::tameness(seq)),
    ]
}

fn delta_of_q_row(seq: &KeySequence, x: &Target, sc: &Scenario) -> Assertion {
    let policy = sc.policy();
    let run = || -> Result<Check> {
        let mut n = 0;
        for (i, e) in seq.entries.iter().enumerate() {
            let Some(q) = &e.q else { continue };
            if !q.is_exact() || q.degree() > ROOT_CHECK_LIMIT {
                continue;
            }
            n += 1;
            let d = delta(q, x, &policy)?;
            if d != e.delta {
                return Ok(Check { pass: false, checked: n, witness: Some(format!("delta(Q_{}) = {} but delta_{} = {} for Q_{} = {}", i + 1, d, i + 1, e.delta, i + 1, q.display())) });
            }
        }
        Ok(Check { pass: true, checked: n, witness: None })
    };
    let c = run().unwrap_or_else(|e| Check { pass: false, checked: 0, witness: Some(format!("error: {e}")) });
    Assertion::from_check("delta-of-key-polynomials", "delta(Q_i) recomputed from Q_i equals delta_i", c)
}

fn keyseq_cmd(sc: &Scenario) -> Result<Outcome> {
    let k = sc.ground_field()?;
    let (x, _) = scenario_target(sc, &k)?;
    let seq = scenario_sequence(sc, &k, &x)?;
    let mut asserts = structure_rows(&seq, &x, sc);
    asserts.push(delta_of_q_row(&seq, &x, sc));
    asserts.push(Assertion::from_check("kras-of-difference", "Kras(a_i - a_(i-1)) equals delta_(i-1) for every i >= 2", checks::difference_kras(&seq)));
    Ok((json!({ "x": x.describe(), "sequence": sequence_json(&seq) }), asserts))
}

fn keypolys(sc: &Scenario) -> Result<Outcome> {
    let k = sc.ground_field()?;
    let (x, _) = scenario_target(sc, &k)?;
    let seq = scenario_sequence(sc, &k, &x)?;
    let policy = sc.policy();
    let family = checks::sample_family(&seq, sc.limits.degree_bound, sc.limits.samples, sc.seed);
    let mut rows = Vec::new();
    let mut asserts = Vec::new();
    for (i, e) in seq.entries.iter().enumerate() {
        let Some(q) = &e.q else { continue };
        if !q.is_exact() || q.degree() > ROOT_CHECK_LIMIT {
            rows.push(json!({ "i": i + 1, "deg": e.deg, "checked": false }));
            continue;
        }
        let s = checks::is_key_polynomial(q, &x, &policy, &family)?;
        rows.push(json!({ "i": i + 1, "deg": e.deg, "q": poly_json(q), "checked": true, "smaller_tested": s.tested, "refuted": !s.violations.is_empty() }));
        asserts.push(Assertion::from_check(&format!("key-polynomial-{}", i + 1), "no sampled polynomial of smaller degree reaches delta(Q_i)", s.check()));
    }
    let c = checks::completeness(&seq, &x, &policy, &family)?;
    asserts.push(Assertion::from_check("completeness-sampled", "every sampled f is covered by some Q_i with deg Q_i <= deg f and delta(f) <= delta(Q_i)", c.check()));
    Ok((json!({ "x": x.describe(), "degrees": seq.degrees(), "deltas": values_json(&seq.deltas()), "key_polynomials": rows, "samples": family.len() }), asserts))
}

fn icf(sc: &Scenario) -> Result<Outcome> {
    let k = sc.ground_field()?;
    let (x, _) = scenario_target(sc, &k)?;
    let seq = scenario_sequence(sc, &k, &x)?;
    let r = icf_report(&seq);
    let result = json!({
        "generators": r.generators.iter().map(series_json).collect::<Vec<_>>(),
        "e_chain": r.e_chain,
        "f_chain": r.f_chain,
        "deg_chain": r.deg_chain,
        "value_groups": r.value_groups,
        "residue_fields": r.residue_fields,
        "residual_torsion": r.residual_torsion,
        "l_equals_last": r.l_equals_last,
        "statement": r.statement,
        "stopping": seq.stopping.as_str(),
    });
    let products: Vec<usize> = r.e_chain.iter().zip(&r.f_chain).map(|(e, f)| *e as usize * f).collect();
    let e_divides = r.e_chain.windows(2).all(|w| w[1] % w[0] == 0);
    let asserts = vec![
        Assertion::equal("degree-is-e-times-f", "each K(a_i) has degree e_i f_i", products, r.deg_chain.clone()),
        Assertion::new("ramification-tower", "each ramification index divides the next", e_divides, (!e_divides).then(|| format!("e chain {:?}", r.e_chain))),
    ];
    Ok((result, asserts))
}

fn classify(sc: &Scenario) -> Result<Outcome> {
    let k = sc.ground_field()?;
    let o = require(sc.oracle(&k)?, "an [extension] block", "classify")?;
    let c = o.classify();
    let mut result = json!({ "case": o.case().as_str(), "classification": c.label(), "kind": c.kind, "detail": c.detail, "gamma": o.gamma().map(|g| g.to_string()) });
    let asserts = match o.case() {
        Case::A1 | Case::A2 => vec![Assertion::from_check("value-two-routes", "the product-formula value matches the formal expansion on 50 random polynomials", expansion_crosscheck(&o, 50, 4, sc.seed))],
        Case::A3 => {
            let f = x2_minus_t(&k);
            let v = o.a3_value(&f)?;
            result["a3_value"] = json!({ "poly": poly_json(&f), "value": value_json(&v.value), "certified_at": v.certified_at, "stable": v.stable });
            vec![Assertion::from_check("a3-stability", "v(X^2 - t) is certified and unchanged at two further refinements", a3_stability(&o, &f))]
        }
    };
    Ok((result, asserts))
}
