//! Extensions of `v` from `K` to `K(x)` for transcendental `x`, each given
//! by an oracle for `v f(x)`: value-transcendental (`v(x - a)` outside the
//! divisible hull of `vK`), residue-transcendental, and valuation-algebraic
//! (`x` the limit of a rule-defined pseudo Cauchy sequence).

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::GroundField;
use crate::error::{Error, Result};
use crate::galois::AlgebraicElement;
use crate::keyseq::checks::{random_k_poly, Check};
use crate::keyseq::{FormalPoint, Target};
use crate::newton::roots::move_poly;
use crate::newton::{NewtonPolygon, SeriesPoly};
use crate::puiseux::{LazySeries, PcsRule, PuiseuxSeries};
use crate::values::{is_torsion_over, Value, ValueSet, Q64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    A1,
    A2,
    A3,
}

impl Case {
    pub fn parse(s: &str) -> Result<Case> {
        match s {
            "A1" | "a1" => Ok(Case::A1),
            "A2" | "a2" => Ok(Case::A2),
            "A3" | "a3" => Ok(Case::A3),
            _ => Err(Error::Scenario(format!("unknown extension case {s:?} (expected A1, A2 or A3)"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Case::A1 => "A1",
            Case::A2 => "A2",
            Case::A3 => "A3",
        }
    }
}

#[derive(Clone, Debug)]
pub enum OracleData {
    /// `v(x - a) = gamma`, non-torsion over `vK`.
    ValueTranscendental { a: PuiseuxSeries, gamma: Value },
    /// `v(x - a) = -v(d)/e` and the residue of `d (x - a)^e` is a new
    /// transcendental symbol.
    ResidueTranscendental { a: PuiseuxSeries, d: PuiseuxSeries, e: u64, gamma: Q64, symbol: String },
    /// `x = a + sum_(i > start) term_i` for a rule whose exponent
    /// denominators are unbounded.
    ValuationAlgebraic { rule: PcsRule, a: PuiseuxSeries, start: usize },
}

#[derive(Clone, Debug)]
pub struct ValuationOracle {
    pub k: GroundField,
    pub data: OracleData,
    /// `L = K(a)` when the implicit constant field was pinned.
    pub pinned: Option<PuiseuxSeries>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub kind: &'static str,
    pub detail: String,
}

impl Classification {
    pub fn label(&self) -> String {
        format!("{} ({})", self.kind, self.detail)
    }
}

fn kras_of(k: &GroundField, a: &PuiseuxSeries) -> Result<Value> {
    Ok(AlgebraicElement::new(k, a)?.kras())
}

/// Case A1. `gamma` must be non-torsion over `vK = Z`; with `pin_icf` it must
/// also exceed `Kras(a, K)`.
pub fn build_value_transcendental(k: &GroundField, a: &PuiseuxSeries, gamma: Value, pin_icf: bool) -> Result<ValuationOracle> {
    if gamma.is_inf() || is_torsion_over(&gamma, &ValueSet::integers())?.is_some() {
        return Err(Error::InvalidArgument(format!("gamma = {gamma} is torsion over vK")));
    }
    let pinned = if pin_icf {
        let kr = kras_of(k, a)?;
        if gamma <= kr {
            return Err(Error::InvalidArgument(format!("gamma = {gamma} does not exceed Kras(a, K) = {kr}")));
        }
        Some(a.clone())
    } else {
        None
    };
    Ok(ValuationOracle { k: k.clone(), data: OracleData::ValueTranscendental { a: a.clone(), gamma: gamma.to_rank2() }, pinned })
}

/// Case A2 with `v(d) + e v(x - a) = 0`.
pub fn build_residue_transcendental(k: &GroundField, a: &PuiseuxSeries, d: &PuiseuxSeries, e: u64, pin_icf: bool) -> Result<ValuationOracle> {
    if e == 0 {
        return Err(Error::InvalidArgument("e must be positive".into()));
    }
    if d.project_to(k).is_none() || !d.has_integral_exponents() || !d.is_exact() {
        return Err(Error::InvalidArgument(format!("d = {} is not an element of K", d.to_literal())));
    }
    let vd = d.valuation()?.as_rat().ok_or_else(|| Error::InvalidArgument("d = 0".into()))?;
    let gamma = -vd / Q64::from_integer(e as i64);
    let pinned = if pin_icf {
        let kr = kras_of(k, a)?;
        if Value::Rat(gamma) <= kr {
            return Err(Error::InvalidArgument(format!("v(x - a) = {gamma} does not exceed Kras(a, K) = {kr}")));
        }
        Some(a.clone())
    } else {
        None
    };
    let data = OracleData::ResidueTranscendental { a: a.clone(), d: d.clone(), e, gamma, symbol: "T".into() };
    Ok(ValuationOracle { k: k.clone(), data, pinned })
}

/// Whether the exponent denominators of the first `n` terms keep growing:
/// the lcm over the last third of the terms exceeds the lcm over the rest.
pub fn escapes_ramification(rule: &PcsRule) -> Result<bool> {
    let n = rule.max_terms;
    if n < 3 {
        return Ok(false);
    }
    let mut lcm = 1u64;
    let mut grew_late = false;
    for i in 1..=n {
        let v = rule.term_value(i)?;
        let d = *v.denom() as u64;
        let next = num_integer::lcm(lcm, d);
        if next != lcm && i > 2 * n / 3 {
            grew_late = true;
        }
        lcm = next;
    }
    Ok(grew_late)
}

/// Case A3. With `pin`, the sequence is moved to `a + (x - x_mu)` for the
/// least `mu` with `v(x - x_mu) > Kras(a, K)`.
pub fn build_valuation_algebraic(k: &GroundField, rule: &PcsRule, pin: Option<&PuiseuxSeries>) -> Result<ValuationOracle> {
    let mut last: Option<Q64> = None;
    for i in 1..=rule.max_terms {
        let v = rule.term_value(i)?;
        if last.is_some_and(|l| l >= v) {
            return Err(Error::InvalidArgument(format!("term exponents of {} do not increase at i = {i}", rule.source)));
        }
        last = Some(v);
    }
    if !escapes_ramification(rule)? {
        return Err(Error::InvalidArgument(format!("{} does not escape every finite ramification within {} terms", rule.source, rule.max_terms)));
    }
    let (a, start) = match pin {
        Some(a) => {
            let kr = kras_of(k, a)?;
            let mut mu = 0;
            while Value::Rat(rule.term_value(mu + 1)?) <= kr {
                mu += 1;
                if mu >= rule.max_terms {
                    return Err(Error::InvalidArgument(format!("no term of {} lies above Kras(a, K) = {kr}", rule.source)));
                }
            }
            (a.clone(), mu)
        }
        None => (PuiseuxSeries::zero(&rule.symbols.field), 0),
    };
    let data = OracleData::ValuationAlgebraic { rule: rule.clone(), a: a.clone(), start };
    Ok(ValuationOracle { k: k.clone(), data, pinned: pin.cloned() })
}

/// Root values `v(b_i - a)` of `f`, with multiplicity.
fn root_values_at(f: &SeriesPoly, a: &PuiseuxSeries) -> Result<Vec<(Value, usize)>> {
    let g = if f.field() == a.field() { f.clone() } else { move_poly(f, a.field())? };
    Ok(NewtonPolygon::of(&g.shift(a))?.root_values())
}

impl ValuationOracle {
    pub fn case(&self) -> Case {
        match self.data {
            OracleData::ValueTranscendental { .. } => Case::A1,
            OracleData::ResidueTranscendental { .. } => Case::A2,
            OracleData::ValuationAlgebraic { .. } => Case::A3,
        }
    }

    /// `v(x - a)` for the first two cases.
    pub fn gamma(&self) -> Option<Value> {
        match &self.data {
            OracleData::ValueTranscendental { gamma, .. } => Some(*gamma),
            OracleData::ResidueTranscendental { gamma, .. } => Some(Value::Rat(*gamma)),
            OracleData::ValuationAlgebraic { .. } => None,
        }
    }

    /// `x` as a key-sequence target.
    pub fn target(&self) -> Target {
        match &self.data {
            OracleData::ValueTranscendental { a, gamma, .. } => {
                Target::Formal(FormalPoint { a: a.clone(), gamma: *gamma, label: "z (value-transcendental)".into() })
            }
            OracleData::ResidueTranscendental { a, gamma, .. } => {
                Target::Formal(FormalPoint { a: a.clone(), gamma: Value::Rat(*gamma), label: "z (residue-transcendental)".into() })
            }
            OracleData::ValuationAlgebraic { rule, a, start } => {
                if a.is_zero() && *start == 0 {
                    Target::series(LazySeries::Pcs(rule.clone()))
                } else {
                    Target::explicit(self.partial(rule, a, *start, rule.max_terms))
                }
            }
        }
    }

    fn partial(&self, rule: &PcsRule, a: &PuiseuxSeries, start: usize, nu: usize) -> PuiseuxSeries {
        let mut s = a.clone();
        for i in start + 1..=nu {
            s = s.add(&rule.term(i).expect("rule terms were validated at construction"));
        }
        s
    }

    /// `v f(x)`. For A1 and A2 the product formula
    /// `v(lc) + sum min(v(x - a), v(b_i - a))`; for A3 the value at a
    /// refinement certified stable.
    pub fn value(&self, f: &SeriesPoly) -> Result<Value> {
        if f.is_zero() {
            return Ok(Value::Inf);
        }
        match &self.data {
            OracleData::ValueTranscendental { a, .. } | OracleData::ResidueTranscendental { a, .. } => {
                let gamma = self.gamma().unwrap();
                let mut total = f.lc().valuation()?;
                for (v, m) in root_values_at(f, a)? {
                    total = total + v.min(gamma).scale(m as i64);
                }
                Ok(if matches!(self.data, OracleData::ValueTranscendental { .. }) { total.to_rank2() } else { total })
            }
            OracleData::ValuationAlgebraic { .. } => Ok(self.a3_value(f)?.value),
        }
    }

    /// `min_k (v(c_k) + k gamma)` where `f(a + Z) = sum c_k Z^k` is
    /// expanded from the binomial powers of `a + Z`.
    pub fn expansion_value(&self, f: &SeriesPoly) -> Result<Value> {
        let (a, gamma) = match &self.data {
            OracleData::ValueTranscendental { a, gamma } => (a, *gamma),
            OracleData::ResidueTranscendental { a, gamma, .. } => (a, Value::Rat(*gamma)),
            OracleData::ValuationAlgebraic { .. } => return Err(Error::InvalidArgument("no formal expansion in the pcs case".into())),
        };
        let field = a.field().clone();
        let f = if f.field() == &field { f.clone() } else { move_poly(f, &field)? };
        let az = SeriesPoly::new(&field, vec![a.clone(), PuiseuxSeries::one(&field)]);
        let mut acc = SeriesPoly::zero(&field);
        let mut power = SeriesPoly::one(&field);
        for c in f.coeffs() {
            acc = acc.add(&power.scale(c));
            power = power.mul(&az);
        }
        let mut best: Option<Value> = None;
        for (k, c) in acc.coeffs().iter().enumerate() {
            let v = c.valuation()?;
            if v.is_inf() {
                continue;
            }
            let term = v + gamma.scale(k as i64);
            best = Some(best.map_or(term, |b| b.min(term)));
        }
        let out = best.unwrap_or(Value::Inf);
        Ok(if matches!(self.data, OracleData::ValueTranscendental { .. }) { out.to_rank2() } else { out })
    }

    /// The A3 value with its refinement record.
    pub fn a3_value(&self, f: &SeriesPoly) -> Result<A3Value> {
        let OracleData::ValuationAlgebraic { rule, a, start } = &self.data else {
            return Err(Error::InvalidArgument("not a pcs oracle".into()));
        };
        let field = rule.symbols.field.clone();
        let f = if f.field() == &field { f.clone() } else { move_poly(f, &field)? };
        let mut history = Vec::new();
        let mut certified: Option<(usize, Value)> = None;
        for nu in start + 1..rule.max_terms {
            let xn = self.partial(rule, a, *start, nu);
            // v(x - x_nu) is the exponent of the next term
            let gap = Value::Rat(rule.term_value(nu + 1)?);
            let roots = NewtonPolygon::of(&f.shift(&xn))?.max_root_value().unwrap_or(Value::Inf);
            let val = f.eval(&xn).valuation()?;
            history.push((nu, val, roots));
            if let Some((n0, v0)) = &certified {
                if val != *v0 {
                    return Ok(A3Value { value: *v0, certified_at: *n0, history, stable: false });
                }
                if nu >= n0 + 2 {
                    return Ok(A3Value { value: *v0, certified_at: *n0, history, stable: true });
                }
            } else if gap > roots {
                certified = Some((nu, val));
            }
        }
        match certified {
            Some((n0, v0)) => Ok(A3Value { value: v0, certified_at: n0, history, stable: false }),
            None => Err(Error::PrecisionExhausted { bound: Value::Rat(rule.term_value(rule.max_terms)?) }),
        }
    }

    pub fn classify(&self) -> Classification {
        match &self.data {
            OracleData::ValueTranscendental { .. } => Classification { kind: "valuation transcendental", detail: "value-transcendental".into() },
            OracleData::ResidueTranscendental { symbol, d, e, a, .. } => Classification {
                kind: "valuation transcendental",
                detail: format!("residue-transcendental; {} = residue of ({})(x - ({}))^{}", symbol, d.to_literal(), a.to_literal(), e),
            },
            OracleData::ValuationAlgebraic { .. } => {
                Classification { kind: "valuation algebraic", detail: "immediate over the implicit constant field".into() }
            }
        }
    }
}

/// An A3 value and the refinements behind it.
#[derive(Clone, Debug)]
pub struct A3Value {
    pub value: Value,
    /// First refinement where `v(x - x_nu)` exceeds every `v(x_nu - b_i)`.
    pub certified_at: usize,
    /// `(nu, v f(x_nu), max v(x_nu - b_i))`.
    pub history: Vec<(usize, Value, Value)>,
    /// The value was unchanged at two further refinements.
    pub stable: bool,
}

/// `v f(x)` for `v(x) = 0` with transcendental residue: `min v(c_i)`.
pub fn gauss_value(f: &SeriesPoly) -> Result<Value> {
    let mut best = Value::Inf;
    for c in f.coeffs() {
        best = best.min(c.valuation()?);
    }
    Ok(best)
}

/// Random polynomials over `K` of degree 1 to `max_deg`.
pub fn random_polys(k: &GroundField, count: usize, max_deg: usize, seed: u64) -> Vec<SeriesPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d = rng.gen_range(1..=max_deg);
            random_k_poly(k, d, &mut rng)
        })
        .collect()
}

/// The residue-transcendental oracle with `a = 0`, `d = 1`, `e = 1` against
/// the coefficient minimum.
pub fn gauss_crosscheck(k: &GroundField, count: usize, seed: u64) -> Check {
    let run = || -> Result<Check> {
        let o = build_residue_transcendental(k, &PuiseuxSeries::zero(k), &PuiseuxSeries::one(k), 1, false)?;
        for (i, f) in random_polys(k, count, 6, seed).iter().enumerate() {
            let a = o.value(f)?;
            let b = gauss_value(f)?;
            if a != b {
                return Ok(Check { pass: false, checked: i + 1, witness: Some(format!("f = {}: product formula {a}, coefficient minimum {b}", f.display())) });
            }
        }
        Ok(Check { pass: true, checked: count, witness: None })
    };
    run().unwrap_or_else(|e| Check { pass: false, checked: 0, witness: Some(format!("error: {e}")) })
}

/// Product formula against the formal expansion on random polynomials.
pub fn expansion_crosscheck(o: &ValuationOracle, count: usize, max_deg: usize, seed: u64) -> Check {
    let run = || -> Result<Check> {
        for (i, f) in random_polys(&o.k, count, max_deg, seed).iter().enumerate() {
            let a = o.value(f)?;
            let b = o.expansion_value(f)?;
            if a != b {
                return Ok(Check { pass: false, checked: i + 1, witness: Some(format!("f = {}: product formula {a}, expansion {b}", f.display())) });
            }
        }
        Ok(Check { pass: true, checked: count, witness: None })
    };
    run().unwrap_or_else(|e| Check { pass: false, checked: 0, witness: Some(format!("error: {e}")) })
}

/// `X^2 - t` over `k`.
pub fn x2_minus_t(k: &GroundField) -> SeriesPoly {
    SeriesPoly::new(
        k,
        vec![PuiseuxSeries::monomial(k, k.neg(&k.one()), Q64::one()), PuiseuxSeries::zero(k), PuiseuxSeries::one(k)],
    )
}

/// The A3 value of `f` must be certified and stable.
pub fn a3_stability(o: &ValuationOracle, f: &SeriesPoly) -> Check {
    match o.a3_value(f) {
        Ok(r) if r.stable => Check { pass: true, checked: r.history.len(), witness: None },
        Ok(r) => Check { pass: false, checked: r.history.len(), witness: Some(format!("f = {}: values along refinements {:?}", f.display(), r.history.iter().map(|h| h.1.to_string()).collect::<Vec<_>>())) },
        Err(e) => Check { pass: false, checked: 0, witness: Some(format!("f = {}: {e}", f.display())) },
    }
}

/// `x` as a standard rule: `sum t^(1 - 1/(i+1))`.
pub fn standard_pcs(k: &GroundField, max_terms: usize) -> Result<PcsRule> {
    PcsRule::new("t^(1-1/(i+1))", crate::parse::Symbols::for_field(k), max_terms, crate::puiseux::DeclaredType::Algebraic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_series, Symbols};
    use num_traits::Zero;

    fn s(k: &GroundField, src: &str) -> PuiseuxSeries {
        parse_series(src, &Symbols::for_field(k)).unwrap()
    }

    #[test]
    fn value_transcendental_example() {
        let k = GroundField::rationals();
        let o = build_value_transcendental(&k, &PuiseuxSeries::zero(&k), Value::Rank2(Q64::one(), Q64::zero()), false).unwrap();
        let f = x2_minus_t(&k);
        assert_eq!(f.coeff(0), s(&k, "-t"));
        // both roots have v(b - 0) = 1/2 < (1, 0)
        assert_eq!(o.value(&f).unwrap(), Value::Rank2(Q64::zero(), Q64::one()));
        assert_eq!(o.expansion_value(&f).unwrap(), Value::Rank2(Q64::zero(), Q64::one()));
        assert_eq!(o.classify().kind, "valuation transcendental");
        assert!(build_value_transcendental(&k, &PuiseuxSeries::zero(&k), Value::rat(1, 2), false).is_err());
    }

    #[test]
    fn pinning_needs_gamma_above_kras() {
        let k = GroundField::rationals();
        let a = s(&k, "t^(1/2)");
        let o = build_value_transcendental(&k, &a, Value::Rank2(Q64::one(), Q64::zero()), true).unwrap();
        assert_eq!(o.pinned.as_ref(), Some(&a));
        assert!(build_value_transcendental(&k, &a, Value::Rank2(-Q64::one(), Q64::zero()), true).is_err());
    }

    #[test]
    fn gauss_case() {
        let k = GroundField::rationals();
        let o = build_residue_transcendental(&k, &PuiseuxSeries::zero(&k), &PuiseuxSeries::one(&k), 1, false).unwrap();
        let f = SeriesPoly::new(&k, vec![s(&k, "t^2"), PuiseuxSeries::one(&k), s(&k, "t")]);
        assert_eq!(o.value(&f).unwrap(), Value::zero());
        assert_eq!(gauss_value(&f).unwrap(), Value::zero());
        assert!(gauss_crosscheck(&k, 30, 5).pass);
        assert!(gauss_crosscheck(&GroundField::prime(5).unwrap(), 30, 5).pass);
    }

    #[test]
    fn expansion_agrees_with_product_formula() {
        let k = GroundField::rationals();
        let a = s(&k, "t^(1/2) + t^(2/3)");
        let o = build_value_transcendental(&k, &a, Value::Rank2(Q64::one(), Q64::new(1, 3)), false).unwrap();
        let c = expansion_crosscheck(&o, 20, 4, 9);
        assert!(c.pass, "{c:?}");
        // d must lie in K
        assert!(build_residue_transcendental(&k, &a, &s(&k, "t^(1/2)"), 2, false).is_err());
        let o2 = build_residue_transcendental(&k, &s(&k, "t^(1/3)"), &s(&k, "t^(-1)"), 2, false).unwrap();
        assert_eq!(o2.gamma(), Some(Value::rat(1, 2)));
        let c = expansion_crosscheck(&o2, 20, 4, 10);
        assert!(c.pass, "{c:?}");
    }

    #[test]
    fn pcs_value_of_x2_minus_t() {
        let k = GroundField::rationals();
        let o = build_valuation_algebraic(&k, &standard_pcs(&k, 12).unwrap(), None).unwrap();
        let r = o.a3_value(&x2_minus_t(&k)).unwrap();
        assert_eq!(r.value, Value::rat(7, 6));
        assert!(r.stable);
        assert_eq!(o.classify().kind, "valuation algebraic");
    }

    #[test]
    fn bounded_denominators_are_rejected() {
        let k = GroundField::rationals();
        let rule = PcsRule::new("t^(i/2)", Symbols::for_field(&k), 10, crate::puiseux::DeclaredType::Algebraic).unwrap();
        assert!(build_valuation_algebraic(&k, &rule, None).is_err());
    }
}
