//! Scenario files: a ground field, an element, an optional polynomial, an
//! optional extension case and limits, all in TOML.

use serde::{Deserialize, Serialize};

use crate::algebra::{adjoin_root, GroundField};
use crate::error::{Error, Result};
use crate::extension::{build_residue_transcendental, build_valuation_algebraic, build_value_transcendental, Case, ValuationOracle};
use crate::keyseq::{KeySeqOptions, PrecisionPolicy, Target};
use crate::newton::SeriesPoly;
use crate::parse::{parse_series, parse_upoly, Symbols};
use crate::puiseux::lazy::branch_by_index;
use crate::puiseux::{DeclaredType, LazySeries, PcsRule, PuiseuxSeries};
use crate::values::{Value, Q64};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    pub field: FieldSpec,
    pub element: Option<ElementSpec>,
    pub poly: Option<PolySpec>,
    pub extension: Option<ExtensionSpec>,
    #[serde(default)]
    pub limits: Limits,
    pub mutate: Option<Mutation>,
    /// Raw text, for locating errors inside literals.
    #[serde(skip)]
    pub source: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    /// `rationals`, `prime`, `finite` or `cyclotomic`.
    pub kind: String,
    pub p: Option<u64>,
    /// Conductor for `cyclotomic`.
    pub n: Option<u64>,
    /// Modulus of a `finite` field over `F_p`, in the variable `generator`.
    pub modulus: Option<String>,
    pub generator: Option<String>,
    #[serde(default)]
    pub extensions: Vec<ExtensionStep>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExtensionStep {
    pub generator: String,
    pub modulus: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Branch {
    Index(usize),
    Prefix(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    /// `series`, `algebraic` or `pcs`.
    pub kind: String,
    pub series: Option<String>,
    pub poly: Option<Vec<String>>,
    pub branch: Option<Branch>,
    pub rule: Option<String>,
    pub declared_type: Option<String>,
    pub max_terms: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PolySpec {
    pub coeffs: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PcsSpec {
    pub rule: String,
    pub max_terms: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum RatLit {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub case: String,
    pub a: Option<String>,
    /// `[dominant, secondary]`.
    pub gamma: Option<Vec<RatLit>>,
    pub d: Option<String>,
    pub e: Option<u64>,
    #[serde(default)]
    pub pin_icf: bool,
    pub pcs: Option<PcsSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Limits {
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    #[serde(default = "default_precision_cap")]
    pub precision_cap: i64,
    #[serde(default = "default_degree_bound")]
    pub degree_bound: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Precision for `roots`.
    #[serde(default = "default_root_precision")]
    pub root_precision: i64,
}

fn default_max_steps() -> usize {
    12
}
fn default_precision_cap() -> i64 {
    128
}
fn default_degree_bound() -> usize {
    6
}
fn default_samples() -> usize {
    100
}
fn default_root_precision() -> i64 {
    6
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            max_steps: default_max_steps(),
            precision_cap: default_precision_cap(),
            degree_bound: default_degree_bound(),
            samples: default_samples(),
            root_precision: default_root_precision(),
        }
    }
}

/// Deliberate corruption of one key polynomial, for testing the checks.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Mutation {
    /// 1-based index of the `Q_i` to corrupt.
    pub q_index: usize,
    /// Replacement constant coefficient.
    pub constant: String,
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn rat_lit(r: &RatLit) -> Result<Q64> {
    match r {
        RatLit::Int(n) => Ok(Q64::from_integer(*n)),
        RatLit::Text(s) => {
            let s = s.trim();
            let (n, d) = match s.split_once('/') {
                Some((n, d)) => (n.trim(), d.trim()),
                None => (s, "1"),
            };
            let bad = || Error::Scenario(format!("not a rational: {s:?}"));
            let n: i64 = n.parse().map_err(|_| bad())?;
            let d: i64 = d.parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q64::new(n, d))
        }
    }
}

impl Scenario {
    pub fn parse(src: &str) -> Result<Scenario> {
        let sc: Scenario = toml::from_str(src).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_col(src, s.start));
            Error::Parse { line, column, message: e.message().to_string() }
        })?;
        let mut sc = sc;
        sc.source = Some(src.to_string());
        sc.validate()?;
        Ok(sc)
    }

    pub fn load(path: &std::path::Path) -> Result<Scenario> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::Scenario(format!("cannot read {}: {e}", path.display())))?;
        Scenario::parse(&src)
    }

    fn validate(&self) -> Result<()> {
        let l = &self.limits;
        if l.max_steps == 0 || l.precision_cap <= 0 || l.degree_bound == 0 || l.root_precision <= 0 {
            return Err(Error::Scenario("limits must be positive".into()));
        }
        // field and literals fail here rather than in whichever subcommand reads them
        let k = self.ground_field()?;
        for lit in self.literals() {
            self.series(&k, lit)?;
        }
        Ok(())
    }

    fn literals(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        if let Some(e) = &self.element {
            out.extend(e.series.as_deref());
            out.extend(e.poly.iter().flatten().map(String::as_str));
            if let Some(Branch::Prefix(b)) = &e.branch {
                out.push(b);
            }
        }
        if let Some(p) = &self.poly {
            out.extend(p.coeffs.iter().map(String::as_str));
        }
        if let Some(x) = &self.extension {
            out.extend(x.a.as_deref());
            out.extend(x.d.as_deref());
        }
        if let Some(m) = &self.mutate {
            out.push(&m.constant);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("scenario serializes")
    }

    /// The coefficient field `k`.
    pub fn ground_field(&self) -> Result<GroundField> {
        let f = &self.field;
        let mut k = match f.kind.as_str() {
            "rationals" => GroundField::rationals(),
            "prime" => GroundField::prime(f.p.ok_or_else(|| Error::Scenario("field.p is required for a prime field".into()))?)?,
            "cyclotomic" => GroundField::cyclotomic(f.n.ok_or_else(|| Error::Scenario("field.n is required for a cyclotomic field".into()))?),
            "finite" => {
                let p = f.p.ok_or_else(|| Error::Scenario("field.p is required for a finite field".into()))?;
                let m = f.modulus.as_ref().ok_or_else(|| Error::Scenario("field.modulus is required for a finite field".into()))?;
                let g = f.generator.clone().unwrap_or_else(|| "s".into());
                adjoin(&GroundField::prime(p)?, &g, m)?
            }
            other => return Err(Error::Scenario(format!("unknown field kind {other:?}"))),
        };
        for step in &f.extensions {
            k = adjoin(&k, &step.generator, &step.modulus)?;
        }
        Ok(k)
    }

    pub fn series(&self, k: &GroundField, src: &str) -> Result<PuiseuxSeries> {
        parse_series(src, &Symbols::for_field(k)).map_err(|e| self.locate(src, e))
    }

    /// Moves a parse error inside the literal `lit` to file coordinates.
    fn locate(&self, lit: &str, e: Error) -> Error {
        let (Error::Parse { line: 1, column, message }, Some(text)) = (&e, &self.source) else { return e };
        match text.find(&format!("\"{lit}\"")) {
            Some(at) => {
                let (line, col) = line_col(text, at + 1);
                Error::Parse { line, column: col + column - 1, message: format!("{message} (in {lit:?})") }
            }
            None => e,
        }
    }

    pub fn polynomial(&self, k: &GroundField, coeffs: &[String]) -> Result<SeriesPoly> {
        let cs = coeffs.iter().map(|c| self.series(k, c)).collect::<Result<Vec<_>>>()?;
        for c in &cs {
            if !c.has_integral_exponents() {
                return Err(Error::Scenario(format!("coefficient {} is not in K", c.to_literal())));
            }
        }
        let p = SeriesPoly::new(k, cs);
        if p.is_zero() {
            return Err(Error::Scenario("zero polynomial".into()));
        }
        Ok(p)
    }

    /// The polynomial of the `[poly]` block.
    pub fn poly(&self, k: &GroundField) -> Result<Option<SeriesPoly>> {
        self.poly.as_ref().map(|p| self.polynomial(k, &p.coeffs)).transpose()
    }

    pub fn policy(&self) -> PrecisionPolicy {
        PrecisionPolicy::with_cap(self.limits.precision_cap)
    }

    pub fn keyseq_options(&self) -> KeySeqOptions {
        KeySeqOptions { max_steps: self.limits.max_steps, policy: self.policy(), ..KeySeqOptions::default() }
    }

    fn rule(&self, k: &GroundField, src: &str, max_terms: Option<usize>, declared: Option<&str>) -> Result<PcsRule> {
        let declared = DeclaredType::parse(declared.unwrap_or("algebraic"))?;
        PcsRule::new(src, Symbols::for_field(k), max_terms.unwrap_or(16), declared)
    }

    /// The element of the `[element]` block.
    pub fn target(&self, k: &GroundField) -> Result<Option<Target>> {
        let Some(e) = &self.element else { return Ok(None) };
        let need = |v: &Option<String>, key: &str| v.clone().ok_or_else(|| Error::Scenario(format!("element.{key} is required for kind {:?}", e.kind)));
        let t = match e.kind.as_str() {
            "series" => Target::explicit(self.series(k, &need(&e.series, "series")?)?),
            "algebraic" => {
                let coeffs = e.poly.as_ref().ok_or_else(|| Error::Scenario("element.poly is required for kind \"algebraic\"".into()))?;
                let poly = self.polynomial(k, coeffs)?;
                let prec = Q64::from_integer(self.limits.root_precision);
                let branch = match e.branch.as_ref().unwrap_or(&Branch::Index(0)) {
                    Branch::Index(i) => branch_by_index(&poly, *i, prec)?,
                    Branch::Prefix(s) => self.series(k, s)?,
                };
                Target::series(LazySeries::algebraic(poly, branch))
            }
            "pcs" => Target::series(LazySeries::Pcs(self.rule(k, &need(&e.rule, "rule")?, e.max_terms, e.declared_type.as_deref())?)),
            other => return Err(Error::Scenario(format!("unknown element kind {other:?}"))),
        };
        Ok(Some(t))
    }

    /// The oracle of the `[extension]` block.
    pub fn oracle(&self, k: &GroundField) -> Result<Option<ValuationOracle>> {
        let Some(x) = &self.extension else { return Ok(None) };
        let a = match &x.a {
            Some(s) => self.series(k, s)?,
            None => PuiseuxSeries::zero(k),
        };
        let o = match Case::parse(&x.case)? {
            Case::A1 => {
                let g = x.gamma.as_ref().ok_or_else(|| Error::Scenario("extension.gamma is required for A1".into()))?;
                if g.len() != 2 {
                    return Err(Error::Scenario("extension.gamma must be a pair [dominant, secondary]".into()));
                }
                let gamma = Value::Rank2(rat_lit(&g[0])?, rat_lit(&g[1])?);
                build_value_transcendental(k, &a, gamma, x.pin_icf)?
            }
            Case::A2 => {
                let d = self.series(k, x.d.as_deref().ok_or_else(|| Error::Scenario("extension.d is required for A2".into()))?)?;
                build_residue_transcendental(k, &a, &d, x.e.unwrap_or(1), x.pin_icf)?
            }
            Case::A3 => {
                let pcs = x.pcs.as_ref().ok_or_else(|| Error::Scenario("extension.pcs.rule is required for A3".into()))?;
                let rule = self.rule(k, &pcs.rule, pcs.max_terms, None)?;
                let pin = (x.pin_icf && x.a.is_some()).then_some(&a);
                build_valuation_algebraic(k, &rule, pin)?
            }
        };
        Ok(Some(o))
    }
}

fn adjoin(k: &GroundField, generator: &str, modulus: &str) -> Result<GroundField> {
    let m = parse_upoly(modulus, generator, &Symbols::for_field(k))?;
    Ok(adjoin_root(k, &m, generator)?.field)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_minimal_scenario() {
        let sc = Scenario::parse(
            r#"
name = "w"
[field]
kind = "rationals"
[element]
kind = "series"
series = "t^(1/2) + t^(2/3)"
"#,
        )
        .unwrap();
        let k = sc.ground_field().unwrap();
        assert!(sc.target(&k).unwrap().is_some());
        assert_eq!(sc.limits.samples, 100);
    }

    #[test]
    fn reports_line_and_column() {
        let err = Scenario::parse("[field]\nkind = \"rationals\"\nbogus = 1\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn finite_field_with_tower() {
        let sc = Scenario::parse(
            r#"
[field]
kind = "finite"
p = 7
modulus = "s^2 - 3"
[[field.extensions]]
generator = "w"
modulus = "w^3 - s"
"#,
        )
        .unwrap();
        let k = sc.ground_field().unwrap();
        assert_eq!(k.absolute_degree(), 6);
        // a reducible modulus is refused on load
        assert!(Scenario::parse("[field]\nkind = \"finite\"\np = 5\nmodulus = \"s^2 - 4\"\n").is_err());
    }
}
