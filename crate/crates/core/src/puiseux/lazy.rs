//! Series refined on demand: explicit, algebraic (a branch of a polynomial),
//! or given by a term rule.

use std::sync::Mutex;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::newton::{puiseux_roots, RootMode, SeriesPoly};
use crate::parse::{eval_series, Expr, Symbols};
use crate::values::{Value, Q64};

use super::PuiseuxSeries;

/// What a term rule is declared to converge to. Trusted, not certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeclaredType {
    Algebraic,
    Transcendental,
}

impl DeclaredType {
    pub fn parse(s: &str) -> Result<DeclaredType> {
        match s {
            "algebraic" => Ok(DeclaredType::Algebraic),
            "transcendental" => Ok(DeclaredType::Transcendental),
            _ => Err(Error::Scenario(format!("unknown declared_type '{s}'"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            DeclaredType::Algebraic => "algebraic",
            DeclaredType::Transcendental => "transcendental",
        }
    }
}

/// `sum_{i >= 1} term(i)` where `term` is an expression in `i` and `t`.
#[derive(Clone, Debug)]
pub struct PcsRule {
    pub source: String,
    pub expr: Expr,
    pub symbols: Symbols,
    pub max_terms: usize,
    pub declared: DeclaredType,
}

impl PcsRule {
    pub fn new(source: &str, symbols: Symbols, max_terms: usize, declared: DeclaredType) -> Result<PcsRule> {
        let expr = crate::parse::parse_expr(source)?;
        let rule = PcsRule { source: source.to_string(), expr, symbols, max_terms, declared };
        rule.term(1)?;
        Ok(rule)
    }

    /// The `i`-th term (`i >= 1`).
    pub fn term(&self, i: usize) -> Result<PuiseuxSeries> {
        let sym = self.symbols.with_var("i", Q64::from_integer(i as i64));
        let s = eval_series(&self.expr, &sym)?;
        if s.is_zero() || !s.is_exact() {
            return Err(Error::Scenario(format!("rule term {i} is zero or truncated")));
        }
        Ok(s)
    }

    /// `sum_{i <= n} term(i)`, checking that term values strictly increase.
    pub fn partial_sum(&self, n: usize) -> Result<PuiseuxSeries> {
        let mut acc = PuiseuxSeries::zero(&self.symbols.field);
        let mut last: Option<Value> = None;
        for i in 1..=n {
            let t = self.term(i)?;
            let v = t.valuation()?;
            if last.as_ref().is_some_and(|l| *l >= v) {
                return Err(Error::Scenario(format!("rule term values do not increase at i = {i}")));
            }
            last = Some(v);
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Exponent of the `i`-th term.
    pub fn term_value(&self, i: usize) -> Result<Q64> {
        self.term(i)?.valuation()?.as_rat().ok_or_else(|| Error::Scenario("zero term".into()))
    }

    /// The series modulo `t^prec`, using at most `max_terms` terms.
    pub fn approx(&self, prec: Q64) -> Result<PuiseuxSeries> {
        let mut acc = PuiseuxSeries::zero(&self.symbols.field);
        let mut last: Option<Q64> = None;
        for i in 1..=self.max_terms {
            let t = self.term(i)?;
            let v = t.valuation()?.as_rat().unwrap();
            if last.is_some_and(|l| l >= v) {
                return Err(Error::Scenario(format!("rule term values do not increase at i = {i}")));
            }
            last = Some(v);
            if v >= prec {
                return Ok(acc.truncate(prec));
            }
            acc = acc.add(&t);
        }
        Err(Error::RefinerExhausted(format!("{} terms of {} do not reach t^{}", self.max_terms, self.source, prec)))
    }
}

/// A series known through successive refinement.
#[derive(Debug)]
pub enum LazySeries {
    Explicit(PuiseuxSeries),
    /// The root of `poly` whose expansion starts with `branch`.
    Algebraic {
        poly: SeriesPoly,
        branch: PuiseuxSeries,
        cache: Mutex<Option<PuiseuxSeries>>,
    },
    Pcs(PcsRule),
}

impl Clone for LazySeries {
    fn clone(&self) -> LazySeries {
        match self {
            LazySeries::Explicit(s) => LazySeries::Explicit(s.clone()),
            LazySeries::Algebraic { poly, branch, cache } => LazySeries::Algebraic {
                poly: poly.clone(),
                branch: branch.clone(),
                cache: Mutex::new(cache.lock().unwrap().clone()),
            },
            LazySeries::Pcs(r) => LazySeries::Pcs(r.clone()),
        }
    }
}

impl LazySeries {
    pub fn algebraic(poly: SeriesPoly, branch: PuiseuxSeries) -> LazySeries {
        LazySeries::Algebraic { poly, branch, cache: Mutex::new(None) }
    }

    /// The series modulo `t^prec` (or exactly, if it is a known finite sum).
    pub fn approx(&self, prec: Q64) -> Result<PuiseuxSeries> {
        match self {
            LazySeries::Explicit(s) => {
                if let Some(p) = s.prec_q() {
                    if p < prec {
                        return Err(Error::PrecisionExhausted { bound: Value::Rat(p) });
                    }
                }
                Ok(if s.is_exact() { s.clone() } else { s.truncate(prec) })
            }
            LazySeries::Algebraic { poly, branch, cache } => {
                let mut guard = cache.lock().unwrap();
                if let Some(c) = guard.as_ref() {
                    if c.is_exact() {
                        return Ok(c.clone());
                    }
                    if c.prec_q().is_some_and(|p| p >= prec) {
                        return Ok(c.truncate(prec));
                    }
                }
                let r = select_branch(poly, branch, prec)?;
                *guard = Some(r.clone());
                Ok(if r.is_exact() { r } else { r.truncate(prec) })
            }
            LazySeries::Pcs(rule) => rule.approx(prec),
        }
    }

    /// Known exactly as a finite sum.
    pub fn exact(&self) -> Option<PuiseuxSeries> {
        match self {
            LazySeries::Explicit(s) if s.is_exact() => Some(s.clone()),
            LazySeries::Algebraic { .. } => match self.approx(Q64::zero()) {
                Ok(s) if s.is_exact() => Some(s),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn defining_poly(&self) -> Option<&SeriesPoly> {
        match self {
            LazySeries::Algebraic { poly, .. } => Some(poly),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            LazySeries::Explicit(s) => s.to_literal(),
            LazySeries::Algebraic { poly, branch, .. } => format!("root of {} starting {}", poly.display(), branch.to_literal()),
            LazySeries::Pcs(r) => format!("sum_(i>=1) {}", r.source),
        }
    }
}

/// The shortest prefix singling out root number `index` (in canonical
/// order) of `poly`.
pub fn branch_by_index(poly: &SeriesPoly, index: usize, prec: Q64) -> Result<PuiseuxSeries> {
    let bundle = puiseux_roots(poly, prec, RootMode::Auto)?;
    if !bundle.is_split() {
        return Err(Error::Unsupported("branch selection needs explicit roots".into()));
    }
    let roots = bundle.expanded()?;
    let r = roots.get(index).ok_or_else(|| Error::InvalidArgument(format!("branch index {index} out of range ({} roots)", roots.len())))?;
    for n in 1..=r.num_terms() {
        let head = r.first_terms(n);
        if roots.iter().filter(|o| o.first_terms(n) == head).count() == 1 {
            return Ok(head);
        }
    }
    Err(Error::InvalidArgument(format!("root {index} is repeated to precision {prec}")))
}

/// The unique root of `poly` agreeing with `branch` on its known terms,
/// to precision `prec`.
pub fn select_branch(poly: &SeriesPoly, branch: &PuiseuxSeries, prec: Q64) -> Result<PuiseuxSeries> {
    // the roots must be known past the last term of the branch
    let past = branch.iter().last().map_or(prec, |(e, _)| e + Q64::from_integer(1));
    let work = prec.max(past);
    // root fields are then built over the branch's own coefficient field
    let poly = crate::newton::roots::lift_poly_into(poly, branch.field())?;
    let bundle = puiseux_roots(&poly, work, RootMode::Auto)?;
    if !bundle.is_split() {
        return Err(Error::Unsupported("branch selection needs explicit roots".into()));
    }
    let roots = bundle.expanded()?;
    let blen = branch.num_terms();
    let mut hits = Vec::new();
    for r in &roots {
        let head = r.first_terms(blen);
        let b = crate::newton::roots::move_series(branch, r.field())?;
        if head == b.as_exact() && hits.iter().all(|h: &PuiseuxSeries| h != r) {
            hits.push(r.clone());
        }
    }
    match hits.len() {
        1 => Ok(hits.pop().unwrap()),
        0 => Err(Error::NoRoot(format!("no root of {} starts with {}", poly.display(), branch.to_literal()))),
        n => Err(Error::InvalidArgument(format!("branch {} matches {n} roots", branch.to_literal()))),
    }
}
