//! Key sequences: `delta(f)`, best approximations from subfields,
//! homogeneous approximations, the step-by-step construction of a key
//! sequence, and its key polynomials.

pub mod checks;
pub mod target;

use num_integer::Integer;
use num_traits::Zero;

use crate::algebra::{min_poly_over, GroundField};
use crate::error::{Error, Result};
use crate::galois::{AlgebraicElement, Ambient, GroupElem};
use crate::newton::roots::{in_common, join_fields, lift_poly_into, move_series};
use crate::newton::{puiseux_roots, NewtonPolygon, RootMode, SeriesPoly};
use crate::puiseux::{DeclaredType, LazySeries, PuiseuxSeries};
use crate::values::{Value, Q64};

pub use target::{FormalPoint, PrecisionPolicy, Scan, ScanEnd, Target};

// ---- delta ------------------------------------------------------------------------------

/// Precisions to try for `x`: a doubling ladder, or term boundaries for a
/// rule-defined series.
fn precision_ladder(x: &Target, policy: &PrecisionPolicy) -> Result<Vec<Q64>> {
    if let Target::Series { x: LazySeries::Pcs(rule), .. } = x {
        return (2..=rule.max_terms).map(|i| rule.term_value(i)).collect();
    }
    let v = x.valuation(policy)?.as_rat().unwrap_or_else(Q64::zero);
    Ok(policy.ladder(v + policy.margin))
}

/// `delta(f) = max v(x - r)` over the roots `r` of `f`, read off the Newton
/// polygon of `f(x_P + Y)`, refining `P` until the maximum lies below it.
pub fn delta(f: &SeriesPoly, x: &Target, policy: &PrecisionPolicy) -> Result<Value> {
    if f.degree() == 0 {
        return Err(Error::InvalidArgument("delta of a constant".into()));
    }
    if let Target::Formal(p) = x {
        let g = lift_common(f, &p.a)?.shift(&p.a);
        let np = NewtonPolygon::of(&g)?;
        let m = np.max_root_value().unwrap_or(Value::Inf);
        return Ok(m.min(p.gamma.clone()));
    }
    for p in precision_ladder(x, policy)? {
        let xp = x.approx(p)?;
        let known = xp.as_exact();
        let g = lift_common(f, &known)?.shift(&known);
        if g.has_zero_constant() && xp.is_exact() {
            return Ok(Value::Inf);
        }
        let np = NewtonPolygon::of(&g)?;
        let m = np.max_root_value().unwrap_or(Value::Inf);
        if xp.is_exact() || m < Value::Rat(p) {
            return Ok(m);
        }
    }
    Err(Error::PrecisionExhausted { bound: Value::Rat(policy.cap) })
}

fn lift_common(f: &SeriesPoly, s: &PuiseuxSeries) -> Result<SeriesPoly> {
    if f.field() == s.field() {
        Ok(f.clone())
    } else {
        crate::newton::roots::move_poly(f, s.field())
    }
}

/// `delta(f)` together with the roots attaining it, from explicit roots.
pub fn maximal_roots(f: &SeriesPoly, x: &Target, policy: &PrecisionPolicy) -> Result<(Value, Vec<PuiseuxSeries>)> {
    if let Target::Formal(pt) = x {
        return formal_maximal_roots(f, pt, policy);
    }
    for p in precision_ladder(x, policy)? {
        let xp = x.approx(p)?;
        let bundle = puiseux_roots(&lift_poly_into(f, xp.field())?, p, RootMode::Auto)?;
        let roots = bundle.expanded()?;
        let mut best: Option<Value> = None;
        let mut vals = Vec::new();
        let mut ok = true;
        for r in &roots {
            let (a, b) = in_common(r, &xp)?;
            let v = match a.v_diff(&b) {
                Ok(v) => v,
                Err(Error::PrecisionExhausted { .. }) => {
                    ok = false;
                    break;
                }
                Err(e) => return Err(e),
            };
            if !v.is_inf() && v >= Value::Rat(p) || v.is_inf() && !(xp.is_exact() && r.is_exact()) {
                ok = false;
                break;
            }
            best = Some(best.map_or(v.clone(), |b: Value| b.max(v.clone())));
            vals.push(v);
        }
        if ok {
            let best = best.unwrap_or(Value::Inf);
            let hits = roots.iter().zip(vals).filter(|(_, v)| *v == best).map(|(r, _)| r.clone()).collect();
            return Ok((best, hits));
        }
    }
    Err(Error::PrecisionExhausted { bound: Value::Rat(policy.cap) })
}

/// `v(x - b) = min(v(a - b), gamma)` with roots expanded past `gamma`.
fn formal_maximal_roots(f: &SeriesPoly, pt: &FormalPoint, policy: &PrecisionPolicy) -> Result<(Value, Vec<PuiseuxSeries>)> {
    let (g, _) = pt.gamma.as_pair().ok_or_else(|| Error::InvalidArgument("formal point with infinite gamma".into()))?;
    let p = g.floor() + policy.margin.max(Q64::from_integer(2));
    let roots = puiseux_roots(&lift_poly_into(f, pt.a.field())?, p, RootMode::Auto)?.expanded()?;
    let mut vals = Vec::new();
    for r in &roots {
        let (a, b) = in_common(r, &pt.a)?;
        let v = match a.v_diff(&b) {
            Ok(v) => v.min(pt.gamma),
            Err(Error::PrecisionExhausted { .. }) => pt.gamma,
            Err(e) => return Err(e),
        };
        vals.push(v);
    }
    let best = vals.iter().cloned().fold(None, |m: Option<Value>, v| Some(m.map_or(v.clone(), |m| m.max(v)))).unwrap_or(Value::Inf);
    let hits = roots.iter().zip(&vals).filter(|(_, v)| **v == best).map(|(r, _)| r.clone()).collect();
    Ok((best, hits))
}

// ---- membership and best approximation ----------------------------------------------------

/// Decides `c t^q in K(gen)` through stabilizers in a common ambient group.
pub struct Membership {
    k: GroundField,
    gen: Option<PuiseuxSeries>,
    cache: Vec<(GroundField, u64, Ambient, Vec<GroupElem>)>,
}

impl Membership {
    pub fn new(k: &GroundField, gen: Option<&PuiseuxSeries>) -> Membership {
        Membership { k: k.clone(), gen: gen.cloned(), cache: Vec::new() }
    }

    /// Whether the monomial `m` lies in `K(gen)` (in `K` when there is no
    /// generator).
    pub fn contains(&mut self, m: &PuiseuxSeries) -> Result<bool> {
        let Some(gen) = &self.gen else {
            return Ok(m.has_integral_exponents() && m.project_to(&self.k).is_some());
        };
        let field = join_fields(gen.field(), m.field())
            .ok_or_else(|| Error::FieldMismatch(format!("{} and {} share no field", gen.field().describe(), m.field().describe())))?;
        let e = gen.exponent_denominator().lcm(&m.exponent_denominator());
        let idx = match self.cache.iter().position(|(f, e2, _, _)| *f == field && *e2 == e) {
            Some(i) => i,
            None => {
                let g = move_series(gen, &field)?;
                let el = AlgebraicElement::with_ramification(&self.k, &g, e)?;
                let h = el.stabilizer().to_vec();
                self.cache.push((field.clone(), e, Ambient::new(&self.k, &field, e)?, h));
                self.cache.len() - 1
            }
        };
        let (_, _, amb, h) = &self.cache[idx];
        let me = amb.embed(&move_series(m, &field)?)?;
        Ok(h.iter().all(|g| amb.act(*g, &me) == me))
    }
}

/// Result of [`max_approx_in`].
#[derive(Clone, Debug)]
pub enum MaxApprox {
    /// `v(x - a) = v` is the maximum of `v(x - E)`; `complete` when `x`
    /// itself lies in `E` (`v` infinite) and `formal` when the escape is a
    /// formal tail.
    Attained { a: PuiseuxSeries, v: Value, escape: Option<PuiseuxSeries>, complete: bool, formal: bool },
    /// All available terms lie in `E` (term budget exhausted).
    NoMaximum { prefix: PuiseuxSeries },
}

/// Best approximation of `x` from `E = K(gen)` (or `K`): the longest prefix
/// of `x` inside `E`, the first escaping exponent being the value.
pub fn max_approx_in(x: &Target, k: &GroundField, gen: Option<&PuiseuxSeries>, policy: &PrecisionPolicy) -> Result<MaxApprox> {
    let mut mem = Membership::new(k, gen);
    let scan = x.scan(policy, |m| mem.contains(m))?;
    Ok(match scan {
        Scan::Stopped { prefix, term } => {
            let v = term.valuation()?;
            MaxApprox::Attained { a: prefix, v, escape: Some(term), complete: false, formal: false }
        }
        Scan::Ended { prefix, end: ScanEnd::Complete } => MaxApprox::Attained { a: prefix, v: Value::Inf, escape: None, complete: true, formal: false },
        Scan::Ended { prefix, end: ScanEnd::Formal(g) } => MaxApprox::Attained { a: prefix, v: g, escape: None, complete: false, formal: true },
        Scan::Ended { prefix, end: ScanEnd::Cap } => MaxApprox::NoMaximum { prefix },
    })
}

// ---- homogeneous approximation ---------------------------------------------------------------

/// The intermediate objects of the homogeneous-approximation construction.
#[derive(Clone, Debug)]
pub struct HomogeneousApprox {
    /// The approximation, the monomial `lc(b) t^gamma`.
    pub a: PuiseuxSeries,
    pub gamma: Q64,
    pub e: u64,
    pub f: usize,
    pub degree: usize,
    /// `c = t^(-e gamma)`.
    pub c: PuiseuxSeries,
    /// Residue of `c b^e`.
    pub rho: crate::algebra::Elem,
    /// Root of the lifted residue polynomial with residue `rho`.
    pub a0: PuiseuxSeries,
    /// Residue-1 `e`-th root of `a0 / (c b^e)`.
    pub a1: PuiseuxSeries,
    /// `a1 * b`, which must equal `a` where known.
    pub a1b: PuiseuxSeries,
}

/// Homogeneous approximation of `b` over `K`: `a` with `v(b - a) > v(b)`,
/// `v(a) = Kras(a, K)` and `[K(a):K] = e f`.
pub fn homogeneous_approximation(b: &PuiseuxSeries, k: &GroundField) -> Result<HomogeneousApprox> {
    let field = b.field().clone();
    let (gamma, c0) = b.leading().ok_or_else(|| Error::InvalidArgument("homogeneous approximation of zero".into()))?;
    let e = *gamma.denom() as u64;
    let p = k.characteristic();
    if p != 0 && e % p == 0 {
        return Err(Error::Wild { e, characteristic: p });
    }
    let eg = (gamma * Q64::from_integer(e as i64)).to_integer();
    let c = PuiseuxSeries::monomial(&field, field.one(), Q64::from_integer(-eg));
    let rho = field.pow(&c0, e);
    let rho_min = min_poly_over(&field, &rho, k)?;
    let f = rho_min.deg();
    // lift the residue polynomial to K[X]; its root with residue rho is rho itself
    let lifted = SeriesPoly::from_upoly(&rho_min).lift_to(&field)?;
    let a0 = PuiseuxSeries::constant(&field, rho.clone());
    if !lifted.eval(&a0).is_zero() {
        return Err(Error::Assertion("lifted residue polynomial does not vanish at its residue root".into()));
    }
    // enough to see a1 b agree with a beyond gamma
    let rel = match b.prec_q() {
        Some(pb) => (pb - gamma).min(Q64::from_integer(2)),
        None => Q64::from_integer(2),
    };
    let cbe = c.mul(&b.pow(e as u32));
    let w = a0.div(&cbe, rel)?;
    let a1 = w.root(e, true, rel)?;
    let a1b = a1.mul(b);
    let a = PuiseuxSeries::monomial(&field, c0.clone(), gamma);
    // a^e = rho t^(e gamma) and a agrees with a1 b beyond gamma
    let ae = a.pow(e as u32);
    if ae != PuiseuxSeries::monomial(&field, rho.clone(), Q64::from_integer(eg)) {
        return Err(Error::Assertion("a^e differs from rho t^(e gamma)".into()));
    }
    match a1b.v_diff(&a) {
        Ok(v) if v > Value::Rat(gamma) => {}
        Err(Error::PrecisionExhausted { .. }) => {}
        Ok(v) => return Err(Error::Assertion(format!("v(a1 b - a) = {v} is not above {gamma}"))),
        Err(err) => return Err(err),
    }
    let el = AlgebraicElement::new(k, &a)?;
    let degree = el.degree();
    if degree != e as usize * f {
        return Err(Error::Assertion(format!("degree {degree} of {a} differs from e f = {}", e as usize * f)));
    }
    if !el.is_homogeneous() {
        return Err(Error::Assertion(format!("{a} is not homogeneous")));
    }
    Ok(HomogeneousApprox { a, gamma, e, f, degree, c, rho, a0, a1, a1b })
}

// ---- key sequences ------------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stopping {
    /// `x = a_n`.
    Equality,
    /// `v(x - a_n)` is the maximum of `v(x - K~)`.
    MaxOverKtilde,
    /// The remaining terms stay in `K(a_n)` and `x` is declared transcendental.
    PcsTranscendental,
    /// Truncated at `max_steps`.
    Open,
}

impl Stopping {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stopping::Equality => "equality",
            Stopping::MaxOverKtilde => "max-over-Ktilde",
            Stopping::PcsTranscendental => "pcs-transcendental",
            Stopping::Open => "open",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub a: PuiseuxSeries,
    pub a_tilde: Option<PuiseuxSeries>,
    /// `min_poly(a_i)`, absent above the degree cap.
    pub q: Option<SeriesPoly>,
    pub q_note: Option<String>,
    pub delta: Value,
    pub e: u64,
    pub f: usize,
    pub deg: usize,
    pub kras: Value,
    /// Whether `a_i - a_(i-1)` happens to be homogeneous (reported only).
    pub difference_homogeneous: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct TailEntry {
    pub z: PuiseuxSeries,
    pub q: Option<SeriesPoly>,
    pub delta: Value,
    pub deg: usize,
}

#[derive(Clone, Debug)]
pub struct KeySequence {
    pub k: GroundField,
    pub entries: Vec<Entry>,
    pub stopping: Stopping,
    pub pcs_tail: Vec<TailEntry>,
    /// Trusted inputs the result depends on.
    pub assumptions: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct KeySeqOptions {
    pub max_steps: usize,
    pub policy: PrecisionPolicy,
    pub degree_cap: usize,
    /// Number of tail elements emitted for a declared-transcendental stop.
    pub tail_len: usize,
}

impl Default for KeySeqOptions {
    fn default() -> KeySeqOptions {
        KeySeqOptions { max_steps: 12, policy: PrecisionPolicy::default(), degree_cap: crate::galois::DEFAULT_DEGREE_CAP, tail_len: 3 }
    }
}

/// An entry for `a`. An inexact `a` is a truncation of an algebraic `x`
/// beyond its separation: it has the same stabilizer as `x`, and its orbit
/// product approximates `min_poly(x)`.
fn make_entry(k: &GroundField, a: &PuiseuxSeries, a_tilde: Option<PuiseuxSeries>, delta: Value, prev: Option<&PuiseuxSeries>, cap: usize) -> Result<Entry> {
    let el = AlgebraicElement::new(k, &a.as_exact())?;
    let inv = el.ramification_invariants()?;
    let (q, q_note) = match el.min_poly_capped(cap) {
        Ok(q) => match a.prec_q() {
            Some(p) => {
                let v = a.valuation_lower_bound().as_rat().unwrap_or_else(Q64::zero).min(Q64::zero());
                let loss = v * Q64::from_integer(el.degree() as i64 - 1);
                (Some(q.truncate(p + loss)), Some("coefficients known to finite precision".into()))
            }
            None => (Some(q), None),
        },
        Err(Error::DegreeBoundExceeded { degree, bound, .. }) => (None, Some(format!("degree {degree} exceeds the cap {bound}; Q_i not expanded"))),
        Err(e) => return Err(e),
    };
    let difference_homogeneous = match prev {
        Some(p) => {
            let d = a.as_exact().sub(&move_series(p, a.field())?);
            if d.is_zero() {
                None
            } else {
                Some(AlgebraicElement::new(k, &d)?.is_homogeneous())
            }
        }
        None => None,
    };
    Ok(Entry { a: a.clone(), a_tilde, q, q_note, delta, e: inv.e, f: inv.f, deg: el.degree(), kras: el.kras(), difference_homogeneous })
}

/// `x - a` known beyond its leading term, for the homogeneous approximation.
fn difference_for_approx(x: &Target, a: &PuiseuxSeries, delta: &Value, policy: &PrecisionPolicy) -> Result<PuiseuxSeries> {
    let d = delta.as_rat().ok_or_else(|| Error::InvalidArgument("no finite difference value".into()))?;
    let xp = match x {
        Target::Series { x: LazySeries::Pcs(rule), .. } => {
            // the partial sum through a few terms beyond the escape, truncated at the next exponent
            let mut i = 1;
            while rule.term_value(i)? <= d && i < rule.max_terms {
                i += 1;
            }
            let upto = (i + 3).min(rule.max_terms - 1).max(i);
            rule.partial_sum(upto)?.truncate(rule.term_value(upto + 1)?)
        }
        Target::Formal(f) => match f.gamma.as_rat() {
            Some(g) => f.a.truncate(g),
            None => f.a.clone(),
        },
        _ => x.approx(d + policy.margin.min(Q64::from_integer(2)))?,
    };
    let a = move_series(a, xp.field())?;
    Ok(xp.sub(&a))
}

/// Builds a key sequence for `x` over `K = k((t))`.
pub fn key_sequence(x: &Target, k: &GroundField, opts: &KeySeqOptions) -> Result<KeySequence> {
    let policy = &opts.policy;
    let mut assumptions = Vec::new();
    let mut notes = Vec::new();
    if let Some(d) = x.declared() {
        assumptions.push(format!("declared type of the term rule is trusted: {}", d.as_str()));
    }
    let mut entries: Vec<Entry> = Vec::new();
    let (a1, d1, mut formal) = match max_approx_in(x, k, None, policy)? {
        MaxApprox::Attained { a, v, formal, .. } => (a, v, formal),
        MaxApprox::NoMaximum { .. } => {
            notes.push("no maximum in K: a_1 = 0".into());
            (PuiseuxSeries::zero(k), x.valuation(policy)?, false)
        }
    };
    entries.push(make_entry(k, &a1, None, d1, None, opts.degree_cap)?);
    let mut pcs_tail = Vec::new();
    let stopping = loop {
        let last = entries.last().unwrap();
        if last.delta.is_inf() {
            break Stopping::Equality;
        }
        if formal {
            break Stopping::MaxOverKtilde;
        }
        if entries.len() >= opts.max_steps {
            break Stopping::Open;
        }
        let prev = last.a.clone();
        let b = difference_for_approx(x, &prev, &last.delta, policy)?;
        let h = homogeneous_approximation(&b, k)?;
        let prev_l = move_series(&prev, h.a.field())?;
        let a_tilde = prev_l.add(&h.a);
        match max_approx_in(x, k, Some(&a_tilde), policy)? {
            MaxApprox::Attained { a, v, formal: fm, .. } => {
                let da = AlgebraicElement::new(k, &a.as_exact())?.degree();
                let dt = AlgebraicElement::new(k, &a_tilde)?.degree();
                if da != dt {
                    return Err(Error::Assertion(format!("[K(a_i):K] = {da} differs from [K(a~_i):K] = {dt}")));
                }
                entries.push(make_entry(k, &a, Some(a_tilde), v, Some(&prev), opts.degree_cap)?);
                formal = fm;
            }
            MaxApprox::NoMaximum { prefix } => {
                if x.declared() == Some(DeclaredType::Transcendental) {
                    // a_n = a~_n; x is a limit of the prefixes inside K(a_n)
                    let (pl, al) = in_common(&prefix, &a_tilde)?;
                    let dn = pl.sub(&al).valuation()?;
                    entries.push(make_entry(k, &a_tilde, Some(a_tilde.clone()), dn.clone(), Some(&prev), opts.degree_cap)?);
                    pcs_tail = build_tail(k, &prefix, &dn, opts)?;
                    notes.push("terms stay inside K(a_n) up to the term budget".into());
                    break Stopping::PcsTranscendental;
                }
                notes.push("terms stay inside K(a~_i) up to the term budget; stopping left open".into());
                break Stopping::Open;
            }
        }
    };
    Ok(KeySequence { k: k.clone(), entries, stopping, pcs_tail, assumptions, notes })
}

/// Partial sums of `x` beyond `v(x - a_n)`, with their minimal polynomials.
fn build_tail(k: &GroundField, prefix: &PuiseuxSeries, dn: &Value, opts: &KeySeqOptions) -> Result<Vec<TailEntry>> {
    let terms = prefix.terms_q();
    let mut out = Vec::new();
    for keep in 1..terms.len() {
        if Value::Rat(terms[keep - 1].0) < *dn {
            continue;
        }
        if out.len() == opts.tail_len {
            break;
        }
        let z = PuiseuxSeries::from_rational_terms(prefix.field(), terms[..keep].to_vec(), None);
        let el = AlgebraicElement::new(k, &z)?;
        out.push(TailEntry { q: el.min_poly_capped(opts.degree_cap).ok(), delta: Value::Rat(terms[keep].0), deg: el.degree(), z });
    }
    Ok(out)
}

impl KeySequence {
    pub fn deltas(&self) -> Vec<Value> {
        self.entries.iter().map(|e| e.delta.clone()).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.deg).collect()
    }

    pub fn e_chain(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.e).collect()
    }

    pub fn f_chain(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.f).collect()
    }

    /// `Q_i` for every entry (absent above the degree cap).
    pub fn key_polynomials(&self) -> Vec<Option<SeriesPoly>> {
        self.entries.iter().map(|e| e.q.clone()).collect()
    }
}

/// Implicit-constant-field report.
#[derive(Clone, Debug)]
pub struct IcfReport {
    pub generators: Vec<PuiseuxSeries>,
    pub e_chain: Vec<u64>,
    pub f_chain: Vec<usize>,
    pub deg_chain: Vec<usize>,
    /// Value group chain as the denominators `e_i` of `(1/e_i) Z`.
    pub value_groups: Vec<String>,
    pub residue_fields: Vec<String>,
    /// Order of the torsion seen in `v(x)`-values modulo the last value group.
    pub residual_torsion: u64,
    /// `L = K(a_n)` when the sequence is finite.
    pub l_equals_last: bool,
    pub statement: String,
}

pub fn icf_report(seq: &KeySequence) -> IcfReport {
    let gens: Vec<PuiseuxSeries> = seq.entries.iter().map(|e| e.a.clone()).collect();
    let last = seq.entries.last().unwrap();
    let finite = matches!(seq.stopping, Stopping::Equality | Stopping::MaxOverKtilde | Stopping::PcsTranscendental);
    // torsion of the last delta modulo (1/e_n) Z
    let residual_torsion = match last.delta.as_rat() {
        Some(d) if !last.delta.is_inf() => {
            let scaled = d * Q64::from_integer(last.e as i64);
            *scaled.denom() as u64
        }
        _ => 1,
    };
    let statement = if finite {
        format!("L = K(a_{}) of degree {}", seq.entries.len(), last.deg)
    } else {
        format!("L contains K(a_{}) of degree {}; sequence truncated", seq.entries.len(), last.deg)
    };
    IcfReport {
        generators: gens,
        e_chain: seq.e_chain(),
        f_chain: seq.f_chain(),
        deg_chain: seq.degrees(),
        value_groups: seq.entries.iter().map(|e| if e.e == 1 { "Z".to_string() } else { format!("(1/{})Z", e.e) }).collect(),
        residue_fields: seq.entries.iter().map(|e| if e.f == 1 { seq.k.describe() } else { format!("degree {} over {}", e.f, seq.k.describe()) }).collect(),
        residual_torsion,
        l_equals_last: finite,
        statement,
    }
}

/// Least integer `m` with `m > bound`, used to scale tower adjustments.
pub(crate) fn least_integer_above(bound: &Value) -> i64 {
    match bound.as_rat() {
        Some(b) if !bound.is_inf() => {
            let f = b.floor().to_integer();
            f + 1
        }
        _ => 0,
    }
}

/// Key sequence of a tower `y~_1, y~_2, ...` with `K(y~_j)` increasing:
/// each new generator is folded in as `y_(j+1) = y_j + c_j (y~_(j+1) - z_j)`
/// with `z_j` the best approximation of `y~_(j+1)` from `K(y_j)` and
/// `c_j = t^m` pushing the new part beyond the current sequence.
#[derive(Clone, Debug)]
pub struct TowerSequence {
    pub seq: KeySequence,
    /// Entry index where each stage starts.
    pub stage_marks: Vec<usize>,
    pub y: Vec<PuiseuxSeries>,
    pub c_exponents: Vec<i64>,
}

pub fn strongly_complete_tower(k: &GroundField, tower: &[PuiseuxSeries], opts: &KeySeqOptions) -> Result<TowerSequence> {
    if tower.is_empty() {
        return Err(Error::InvalidArgument("empty tower".into()));
    }
    let mut y = tower[0].clone();
    let mut ys = vec![y.clone()];
    let mut cs = Vec::new();
    let mut seq = key_sequence(&Target::explicit(y.clone()), k, opts)?;
    let mut marks = vec![0];
    for next in &tower[1..] {
        let d_prev = AlgebraicElement::new(k, &y)?.degree();
        let z = match max_approx_in(&Target::explicit(next.clone()), k, Some(&y), &opts.policy)? {
            MaxApprox::Attained { a, .. } => a,
            MaxApprox::NoMaximum { prefix } => prefix,
        };
        let z = move_series(&z, next.field())?;
        let diff = next.sub(&z);
        if diff.is_zero() {
            return Err(Error::InvalidArgument("tower step does not enlarge the field".into()));
        }
        // bound: the last finite value of the current sequence
        let bound = seq
            .entries
            .iter()
            .filter(|e| !e.delta.is_inf())
            .map(|e| e.delta.clone())
            .max()
            .unwrap_or(Value::Rat(Q64::zero()))
            .max(y.valuation().unwrap_or(Value::Rat(Q64::zero())));
        let vd = diff.valuation()?.as_rat().unwrap();
        let top = y.iter().last().map(|(e, _)| Value::Rat(e)).unwrap_or(Value::Rat(Q64::zero())).max(bound);
        let mut m = least_integer_above(&(top - Value::Rat(vd)));
        if m < 0 {
            m = 0;
        }
        let c = PuiseuxSeries::monomial(diff.field(), diff.field().one(), Q64::from_integer(m));
        let yl = move_series(&y, diff.field())?;
        let y_next = yl.add(&c.mul(&diff));
        let d_next = AlgebraicElement::new(k, &y_next)?.degree();
        if d_next <= d_prev {
            return Err(Error::Assertion(format!("tower adjustment did not enlarge the degree ({d_prev} -> {d_next})")));
        }
        cs.push(m);
        y = y_next;
        ys.push(y.clone());
        seq = key_sequence(&Target::explicit(y.clone()), k, opts)?;
        let start = seq.entries.iter().position(|e| e.deg > d_prev).unwrap_or(seq.entries.len());
        marks.push(start);
    }
    Ok(TowerSequence { seq, stage_marks: marks, y: ys, c_exponents: cs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_series, Symbols};
    use crate::values::q;

    fn series(k: &GroundField, s: &str) -> PuiseuxSeries {
        parse_series(s, &Symbols::for_field(k)).unwrap()
    }

    #[test]
    fn worked_example_sequence() {
        let k = GroundField::rationals();
        let x = series(&k, "t^(1/2) + t^(2/3)");
        let seq = key_sequence(&Target::explicit(x.clone()), &k, &KeySeqOptions::default()).unwrap();
        assert_eq!(seq.deltas(), vec![Value::rat(1, 2), Value::rat(2, 3), Value::Inf]);
        assert_eq!(seq.degrees(), vec![1, 2, 6]);
        assert_eq!(seq.e_chain(), vec![1, 2, 6]);
        assert_eq!(seq.stopping, Stopping::Equality);
        assert!(seq.entries[0].a.is_zero());
        assert_eq!(seq.entries[1].a, series(&k, "t^(1/2)"));
        assert_eq!(seq.entries[2].a, x);
        let q2 = seq.entries[1].q.as_ref().unwrap();
        assert_eq!(q2.degree(), 2);
        assert_eq!(seq.entries[2].q.as_ref().unwrap().degree(), 6);
        // Kras(a_i) = delta_(i-1)
        assert_eq!(seq.entries[1].kras, Value::rat(1, 2));
        assert_eq!(seq.entries[2].kras, Value::rat(2, 3));
    }

    #[test]
    fn element_of_k_stops_at_once() {
        let k = GroundField::rationals();
        let x = series(&k, "t + 2*t^3");
        let seq = key_sequence(&Target::explicit(x.clone()), &k, &KeySeqOptions::default()).unwrap();
        assert_eq!(seq.entries.len(), 1);
        assert_eq!(seq.entries[0].a, x);
        assert_eq!(seq.stopping, Stopping::Equality);
    }

    #[test]
    fn max_approx_examples() {
        let k = GroundField::rationals();
        let x = Target::explicit(series(&k, "t^(1/2) + t^(2/3)"));
        let p = PrecisionPolicy::default();
        match max_approx_in(&x, &k, None, &p).unwrap() {
            MaxApprox::Attained { a, v, .. } => {
                assert!(a.is_zero());
                assert_eq!(v, Value::rat(1, 2));
            }
            other => panic!("{other:?}"),
        }
        let g = series(&k, "t^(1/2)");
        match max_approx_in(&x, &k, Some(&g), &p).unwrap() {
            MaxApprox::Attained { a, v, .. } => {
                assert_eq!(a, g);
                assert_eq!(v, Value::rat(2, 3));
            }
            other => panic!("{other:?}"),
        }
        // K(t^(1/6)) contains everything
        let g6 = series(&k, "t^(1/6)");
        match max_approx_in(&x, &k, Some(&g6), &p).unwrap() {
            MaxApprox::Attained { v, complete, .. } => {
                assert!(v.is_inf() && complete);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn homogeneous_approximation_chain() {
        let k = GroundField::rationals();
        let b = series(&k, "2*t^(2/3) + t + O(t^2)");
        let h = homogeneous_approximation(&b, &k).unwrap();
        assert_eq!(h.a, series(&k, "2*t^(2/3)"));
        assert_eq!((h.e, h.f, h.degree), (3, 1, 3));
        // a1 has residue one and a1 b agrees with a beyond 2/3
        assert_eq!(h.a1.leading().unwrap().0, q(0, 1));
        assert!(h.a1b.v_diff(&h.a).map(|v| v > Value::rat(2, 3)).unwrap_or(true));
    }

    #[test]
    fn residue_extension_is_a_factor() {
        let k = GroundField::prime(5).unwrap();
        // x^2 - 2 t^2 (1 + t): x = s t (1 + t)^(1/2), s^2 = 2 not a square mod 5
        let poly = SeriesPoly::new(&k, vec![series(&k, "-2*t^2 - 2*t^3"), PuiseuxSeries::zero(&k), PuiseuxSeries::one(&k)]);
        let branch = crate::puiseux::lazy::select_branch(&poly, &PuiseuxSeries::zero(&k), q(4, 1));
        // two conjugate branches: the empty prefix does not single one out
        assert!(branch.is_err());
        let roots = puiseux_roots(&poly, q(4, 1), RootMode::Auto).unwrap();
        let r = roots.expanded().unwrap()[0].clone();
        let x = Target::series(LazySeries::algebraic(poly.clone(), r.first_terms(1)));
        let seq = key_sequence(&x, &k, &KeySeqOptions::default()).unwrap();
        assert_eq!(seq.deltas(), vec![Value::rat(1, 1), Value::Inf]);
        assert_eq!(seq.degrees(), vec![1, 2]);
        assert_eq!(seq.f_chain(), vec![1, 2]);
        let q2 = seq.entries[1].q.as_ref().unwrap();
        assert!(q2.agrees_with(&poly.lift_to(q2.field()).unwrap()));
    }

    #[test]
    fn delta_of_key_polynomials() {
        let k = GroundField::rationals();
        let x = Target::explicit(series(&k, "t^(1/2) + t^(2/3)"));
        let seq = key_sequence(&x, &k, &KeySeqOptions::default()).unwrap();
        let p = PrecisionPolicy::default();
        for e in &seq.entries {
            let qi = e.q.as_ref().unwrap();
            assert_eq!(delta(qi, &x, &p).unwrap(), e.delta);
            let (m, hits) = maximal_roots(qi, &x, &p).unwrap();
            assert_eq!(m, e.delta);
            assert_eq!(hits.len(), 1);
        }
    }

    #[test]
    fn rule_defined_series() {
        let k = GroundField::rationals();
        let rule = crate::puiseux::PcsRule::new("t^(1 - 1/(i+1))", Symbols::for_field(&k), 12, DeclaredType::Algebraic).unwrap();
        let x = Target::series(LazySeries::Pcs(rule));
        let seq = key_sequence(&x, &k, &KeySeqOptions { max_steps: 6, ..Default::default() }).unwrap();
        let want: Vec<Value> = [(1, 2), (2, 3), (3, 4), (4, 5), (6, 7), (7, 8)].iter().map(|&(a, b)| Value::rat(a, b)).collect();
        assert_eq!(seq.deltas(), want);
        assert_eq!(seq.degrees(), vec![1, 2, 6, 12, 60, 420]);
        assert_eq!(seq.stopping, Stopping::Open);
        assert!(seq.entries[5].q.is_none());
    }
}
