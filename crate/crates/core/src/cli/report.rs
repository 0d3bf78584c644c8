//! JSON reports and the assertion ledger.

use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::keyseq::checks::Check;
use crate::keyseq::{Entry, KeySequence, TailEntry};
use crate::newton::SeriesPoly;
use crate::puiseux::PuiseuxSeries;
use crate::values::Value;

/// One ledger row.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Assertion {
    pub id: String,
    pub statement: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Assertion {
    pub fn new(id: &str, statement: &str, pass: bool, witness: Option<String>) -> Assertion {
        Assertion { id: id.into(), statement: statement.into(), pass, witness }
    }

    pub fn from_check(id: &str, statement: &str, c: Check) -> Assertion {
        let witness = if c.pass { None } else { Some(c.witness.unwrap_or_else(|| "no witness recorded".into())) };
        Assertion { id: id.into(), statement: statement.into(), pass: c.pass, witness }
    }

    /// Passes when `got == want`, else records both.
    pub fn equal<T: PartialEq + std::fmt::Debug>(id: &str, statement: &str, got: T, want: T) -> Assertion {
        let pass = got == want;
        Assertion::new(id, statement, pass, (!pass).then(|| format!("got {got:?}, expected {want:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub subcommand: String,
    pub scenario: Json,
    pub result: Json,
    pub assertions: Vec<Assertion>,
    pub timing_ms: u128,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.pass)
    }

    /// The report without its timing field; equal runs give equal values.
    pub fn deterministic_json(&self) -> Json {
        json!({
            "subcommand": self.subcommand,
            "scenario": self.scenario,
            "result": self.result,
            "assertions": self.assertions,
            "pass": self.pass(),
        })
    }

    pub fn to_json(&self) -> Json {
        let mut j = self.deterministic_json();
        j["timing_ms"] = json!(self.timing_ms as u64);
        j
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report serializes") + "\n"
    }
}

pub fn series_json(s: &PuiseuxSeries) -> Json {
    json!(s.to_literal())
}

pub fn value_json(v: &Value) -> Json {
    json!(v.to_string())
}

pub fn values_json(vs: &[Value]) -> Json {
    Json::Array(vs.iter().map(value_json).collect())
}

pub fn poly_json(p: &SeriesPoly) -> Json {
    json!({ "degree": p.degree(), "coeffs": p.to_literals(), "exact": p.is_exact() })
}

fn entry_json(i: usize, e: &Entry) -> Json {
    json!({
        "i": i + 1,
        "a": series_json(&e.a),
        "a_tilde": e.a_tilde.as_ref().map(series_json),
        "delta": value_json(&e.delta),
        "deg": e.deg,
        "e": e.e,
        "f": e.f,
        "kras": value_json(&e.kras),
        "q": e.q.as_ref().map(poly_json),
        "q_note": e.q_note,
        "difference_homogeneous": e.difference_homogeneous,
    })
}

fn tail_json(t: &TailEntry) -> Json {
    json!({
        "z": series_json(&t.z),
        "q": t.q.as_ref().map(poly_json),
        "delta": value_json(&t.delta),
        "deg": t.deg,
    })
}

pub fn sequence_json(seq: &KeySequence) -> Json {
    json!({
        "field": seq.k.describe(),
        "entries": seq.entries.iter().enumerate().map(|(i, e)| entry_json(i, e)).collect::<Vec<_>>(),
        "deltas": values_json(&seq.deltas()),
        "degrees": seq.degrees(),
        "e_chain": seq.e_chain(),
        "f_chain": seq.f_chain(),
        "stopping": seq.stopping.as_str(),
        "pcs_tail": seq.pcs_tail.iter().map(tail_json).collect::<Vec<_>>(),
        "assumptions": seq.assumptions,
        "notes": seq.notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timing_is_the_only_unstable_field() {
        let mk = |ms| Report {
            subcommand: "delta".into(),
            scenario: json!({"name": "x"}),
            result: json!({"delta": "2/3"}),
            assertions: vec![Assertion::equal("a", "two equal numbers", 1, 1)],
            timing_ms: ms,
        };
        assert_eq!(mk(3).deterministic_json(), mk(900).deterministic_json());
        assert_ne!(mk(3).render(), mk(900).render());
        assert!(mk(3).render().trim_end().ends_with('}'));
    }

    #[test]
    fn failed_rows_carry_witnesses() {
        let a = Assertion::equal("d", "degrees", vec![1, 2], vec![1, 3]);
        assert!(!a.pass);
        assert!(a.witness.unwrap().contains("[1, 3]"));
    }
}
