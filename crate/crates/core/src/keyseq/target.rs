//! The element `x` whose key sequence is built.

use std::sync::OnceLock;

use num_traits::Zero;

use crate::algebra::GroundField;
use crate::error::{Error, Result};
use crate::newton::{puiseux_roots, RootMode, SeriesPoly};
use crate::puiseux::{DeclaredType, LazySeries, PuiseuxSeries};
use crate::values::{Value, Q64};

/// Working precision: start, doubling, hard cap.
#[derive(Clone, Copy, Debug)]
pub struct PrecisionPolicy {
    /// Added to `v(x)` for the first attempt.
    pub margin: Q64,
    pub cap: Q64,
}

impl Default for PrecisionPolicy {
    fn default() -> PrecisionPolicy {
        PrecisionPolicy { margin: Q64::from_integer(8), cap: Q64::from_integer(128) }
    }
}

impl PrecisionPolicy {
    pub fn with_cap(cap: i64) -> PrecisionPolicy {
        PrecisionPolicy { cap: Q64::from_integer(cap), ..PrecisionPolicy::default() }
    }

    /// Successive precisions starting at `start`, doubling up to the cap.
    pub fn ladder(&self, start: Q64) -> Vec<Q64> {
        let mut out = Vec::new();
        let mut p = start.max(Q64::new(1, 1));
        while p < self.cap {
            out.push(p);
            p *= 2;
        }
        out.push(self.cap);
        out
    }
}

/// `a + z` where `z` is a formal element of value `gamma` that no element of
/// the algebraic closure approximates better than `a` does.
#[derive(Clone, Debug)]
pub struct FormalPoint {
    pub a: PuiseuxSeries,
    pub gamma: Value,
    pub label: String,
}

/// How a term scan ended.
#[derive(Clone, Debug, PartialEq)]
pub enum ScanEnd {
    /// Every term of `x` was seen (finite series, or an algebraic series
    /// scanned past its root separation).
    Complete,
    /// The formal tail of a [`FormalPoint`] was reached.
    Formal(Value),
    /// Term budget or precision cap exhausted.
    Cap,
}

/// Outcome of scanning the terms of `x` in increasing order.
#[derive(Clone, Debug)]
pub enum Scan {
    /// The callback rejected the term at this position; `prefix` holds the
    /// accepted terms before it.
    Stopped { prefix: PuiseuxSeries, term: PuiseuxSeries },
    Ended { prefix: PuiseuxSeries, end: ScanEnd },
}

#[derive(Debug)]
pub enum Target {
    Series { x: LazySeries, sep: OnceLock<std::result::Result<Value, String>> },
    Formal(FormalPoint),
}

impl Clone for Target {
    fn clone(&self) -> Target {
        match self {
            Target::Series { x, .. } => Target::series(x.clone()),
            Target::Formal(p) => Target::Formal(p.clone()),
        }
    }
}

impl Target {
    pub fn series(x: LazySeries) -> Target {
        Target::Series { x, sep: OnceLock::new() }
    }

    pub fn explicit(x: PuiseuxSeries) -> Target {
        Target::series(LazySeries::Explicit(x))
    }

    pub fn lazy(&self) -> Option<&LazySeries> {
        match self {
            Target::Series { x, .. } => Some(x),
            Target::Formal(_) => None,
        }
    }

    pub fn declared(&self) -> Option<DeclaredType> {
        match self {
            Target::Series { x: LazySeries::Pcs(r), .. } => Some(r.declared),
            _ => None,
        }
    }

    pub fn is_pcs(&self) -> bool {
        matches!(self, Target::Series { x: LazySeries::Pcs(_), .. })
    }

    pub fn describe(&self) -> String {
        match self {
            Target::Series { x, .. } => x.describe(),
            Target::Formal(p) => format!("{} + {}", p.a.to_literal(), p.label),
        }
    }

    /// `v(x)`.
    pub fn valuation(&self, policy: &PrecisionPolicy) -> Result<Value> {
        match self {
            Target::Formal(p) => Ok(p.a.valuation()?.min(p.gamma.clone())),
            Target::Series { x: LazySeries::Pcs(r), .. } => Ok(Value::Rat(r.term_value(1)?)),
            Target::Series { x, .. } => {
                for p in policy.ladder(Q64::from_integer(1)) {
                    let s = x.approx(p)?;
                    match s.valuation() {
                        Ok(v) => return Ok(v),
                        Err(Error::PrecisionExhausted { .. }) => continue,
                        Err(e) => return Err(e),
                    }
                }
                Err(Error::PrecisionExhausted { bound: Value::Rat(policy.cap) })
            }
        }
    }

    /// `x` modulo `t^p`; for a formal point, `a` (whose terms all lie below
    /// the formal tail when `gamma` is beyond them).
    pub fn approx(&self, p: Q64) -> Result<PuiseuxSeries> {
        match self {
            Target::Series { x, .. } => x.approx(p),
            Target::Formal(f) => Ok(f.a.clone()),
        }
    }

    /// `v(x - y)`, refining `x` until the difference shows below the
    /// working precision.
    pub fn distance(&self, y: &PuiseuxSeries, policy: &PrecisionPolicy) -> Result<Value> {
        if let Target::Formal(f) = self {
            let (a, b) = crate::newton::roots::in_common(&f.a, y)?;
            let d = a.sub(&b).valuation()?;
            return Ok(d.min(f.gamma.clone()));
        }
        let ladder = match self {
            Target::Series { x: LazySeries::Pcs(rule), .. } => {
                (2..=rule.max_terms).map(|i| rule.term_value(i)).collect::<Result<Vec<_>>>()?
            }
            _ => policy.ladder(self.valuation(policy)?.as_rat().unwrap_or_else(Q64::zero) + Q64::from_integer(1)),
        };
        for p in ladder {
            let xp = self.approx(p)?;
            let (a, b) = crate::newton::roots::in_common(&xp, y)?;
            match a.sub(&b).valuation() {
                Ok(v) if xp.is_exact() || v < Value::Rat(p) => return Ok(v),
                Ok(_) | Err(Error::PrecisionExhausted { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::PrecisionExhausted { bound: Value::Rat(policy.cap) })
    }

    /// Largest distance between distinct roots of the defining polynomial
    /// of an algebraic target (`None` for a single root).
    pub fn separation(&self, policy: &PrecisionPolicy) -> Result<Option<Value>> {
        let Target::Series { x: LazySeries::Algebraic { poly, .. }, sep } = self else {
            return Ok(None);
        };
        let r = sep.get_or_init(|| separation_of(poly, policy).map_err(|e| e.to_string()));
        match r {
            Ok(Value::Inf) => Ok(None),
            Ok(v) => Ok(Some(v.clone())),
            Err(e) => Err(Error::Assertion(e.clone())),
        }
    }

    /// Streams the monomials of `x` in increasing exponent order. `accept`
    /// returns whether to continue past a term.
    pub fn scan(&self, policy: &PrecisionPolicy, mut accept: impl FnMut(&PuiseuxSeries) -> Result<bool>) -> Result<Scan> {
        match self {
            Target::Formal(f) => {
                let mut prefix = PuiseuxSeries::zero(f.a.field());
                for (e, c) in f.a.iter() {
                    if Value::Rat(e) >= f.gamma {
                        break;
                    }
                    let m = PuiseuxSeries::monomial(f.a.field(), c.clone(), e);
                    if !accept(&m)? {
                        return Ok(Scan::Stopped { prefix, term: m });
                    }
                    prefix = prefix.add(&m);
                }
                Ok(Scan::Ended { prefix, end: ScanEnd::Formal(f.gamma.clone()) })
            }
            Target::Series { x: LazySeries::Explicit(s), .. } => {
                let mut prefix = PuiseuxSeries::zero(s.field());
                for (e, c) in s.iter() {
                    let m = PuiseuxSeries::monomial(s.field(), c.clone(), e);
                    if !accept(&m)? {
                        return Ok(Scan::Stopped { prefix, term: m });
                    }
                    prefix = prefix.add(&m);
                }
                Ok(Scan::Ended { prefix, end: if s.is_exact() { ScanEnd::Complete } else { ScanEnd::Cap } })
            }
            Target::Series { x: LazySeries::Pcs(rule), .. } => {
                let field = rule.symbols.field.clone();
                let mut prefix = PuiseuxSeries::zero(&field);
                for i in 1..=rule.max_terms {
                    let t = rule.term(i)?;
                    for (e, c) in t.iter() {
                        let m = PuiseuxSeries::monomial(&field, c.clone(), e);
                        if !accept(&m)? {
                            return Ok(Scan::Stopped { prefix, term: m });
                        }
                        prefix = prefix.add(&m);
                    }
                }
                Ok(Scan::Ended { prefix, end: ScanEnd::Cap })
            }
            Target::Series { x, .. } => {
                let sep = self.separation(policy)?;
                let start = self.valuation(policy)?.as_rat().unwrap_or_else(Q64::zero) + policy.margin;
                let mut seen = 0usize;
                let mut prefix: Option<PuiseuxSeries> = None;
                for p in policy.ladder(start) {
                    let s = x.approx(p)?;
                    let pre = prefix.get_or_insert_with(|| PuiseuxSeries::zero(s.field()));
                    if pre.field() != s.field() {
                        *pre = crate::newton::roots::move_series(pre, s.field())?;
                    }
                    for (e, c) in s.iter().skip(seen) {
                        let m = PuiseuxSeries::monomial(s.field(), c.clone(), e);
                        if !accept(&m)? {
                            return Ok(Scan::Stopped { prefix: pre.clone(), term: m });
                        }
                        *pre = pre.add(&m);
                        seen += 1;
                    }
                    if s.is_exact() {
                        return Ok(Scan::Ended { prefix: pre.clone(), end: ScanEnd::Complete });
                    }
                    if sep.as_ref().is_none_or(|v| Value::Rat(p) > *v) {
                        return Ok(Scan::Ended { prefix: pre.clone().truncate(p), end: ScanEnd::Complete });
                    }
                }
                Ok(Scan::Ended { prefix: prefix.unwrap(), end: ScanEnd::Cap })
            }
        }
    }
}

fn separation_of(poly: &SeriesPoly, policy: &PrecisionPolicy) -> Result<Value> {
    for p in policy.ladder(Q64::from_integer(4)) {
        let b = puiseux_roots(poly, p, RootMode::Auto)?;
        match b.separation() {
            Ok(Some(v)) => return Ok(v),
            Ok(None) => return Ok(Value::Inf),
            Err(Error::PrecisionExhausted { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::PrecisionExhausted { bound: Value::Rat(policy.cap) })
}

/// The coefficient field `x` lives in (after any root-field extension).
pub fn target_field(x: &Target, policy: &PrecisionPolicy) -> Result<GroundField> {
    let v = x.valuation(policy)?;
    let p = v.as_rat().unwrap_or_else(Q64::zero) + Q64::from_integer(1);
    Ok(x.approx(p)?.field().clone())
}
