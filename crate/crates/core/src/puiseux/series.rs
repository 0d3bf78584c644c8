//! Truncated Puiseux series `sum c_g t^g` with exponents in `(1/ram) Z`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{nth_root_in_field, Elem, GroundField};
use crate::error::{Error, Result};
use crate::values::{Q64, Value};

/// A Puiseux series known exactly (`prec == None`) or modulo `t^prec`.
///
/// Terms are kept sorted by exponent with nonzero coefficients; exponents
/// are stored as numerators over `ram`.
#[derive(Clone, Debug)]
pub struct PuiseuxSeries {
    field: GroundField,
    ram: u64,
    terms: Vec<(i64, Elem)>,
    prec: Option<i64>,
}

impl PartialEq for PuiseuxSeries {
    /// Same field, same known terms and same precision; `ram` is ignored.
    fn eq(&self, other: &PuiseuxSeries) -> bool {
        self.field == other.field
            && self.prec_q() == other.prec_q()
            && self.terms.len() == other.terms.len()
            && self.iter().zip(other.iter()).all(|(a, b)| a == b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

fn num_over(x: Q64, ram: u64) -> i64 {
    let v = x * Q64::from_integer(ram as i64);
    assert!(v.is_integer(), "exponent {x} not in (1/{ram})Z");
    v.to_integer()
}

impl PuiseuxSeries {
    // ---- construction ---------------------------------------------------------------

    /// Builds a series, combining equal exponents and dropping zero
    /// coefficients and terms at or beyond the precision.
    pub fn from_terms(field: &GroundField, ram: u64, terms: Vec<(i64, Elem)>, prec: Option<i64>) -> PuiseuxSeries {
        let mut terms = terms;
        terms.sort_by_key(|(e, _)| *e);
        let mut out: Vec<(i64, Elem)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            if prec.is_some_and(|p| e >= p) {
                continue;
            }
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc = field.add(lc, &c),
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !field.is_zero(c));
        PuiseuxSeries { field: field.clone(), ram: ram.max(1), terms: out, prec }
    }

    /// Builds from rational exponents; `ram` becomes the lcm of denominators.
    pub fn from_rational_terms(field: &GroundField, terms: Vec<(Q64, Elem)>, prec: Option<Q64>) -> PuiseuxSeries {
        let mut ram = 1u64;
        for (e, _) in &terms {
            ram = lcm(ram, *e.denom() as u64);
        }
        if let Some(p) = prec {
            ram = lcm(ram, *p.denom() as u64);
        }
        let t = terms.into_iter().map(|(e, c)| (num_over(e, ram), c)).collect();
        PuiseuxSeries::from_terms(field, ram, t, prec.map(|p| num_over(p, ram)))
    }

    pub fn zero(field: &GroundField) -> PuiseuxSeries {
        PuiseuxSeries { field: field.clone(), ram: 1, terms: Vec::new(), prec: None }
    }

    /// `O(t^p)`: nothing known below `p`.
    pub fn unknown(field: &GroundField, p: Q64) -> PuiseuxSeries {
        PuiseuxSeries::from_rational_terms(field, Vec::new(), Some(p))
    }

    pub fn constant(field: &GroundField, c: Elem) -> PuiseuxSeries {
        PuiseuxSeries::from_terms(field, 1, vec![(0, c)], None)
    }

    pub fn one(field: &GroundField) -> PuiseuxSeries {
        PuiseuxSeries::constant(field, field.one())
    }

    pub fn monomial(field: &GroundField, c: Elem, exp: Q64) -> PuiseuxSeries {
        PuiseuxSeries::from_rational_terms(field, vec![(exp, c)], None)
    }

    /// The uniformizer `t`.
    pub fn t(field: &GroundField) -> PuiseuxSeries {
        PuiseuxSeries::monomial(field, field.one(), Q64::one())
    }

    // ---- accessors ------------------------------------------------------------------

    pub fn field(&self) -> &GroundField {
        &self.field
    }

    pub fn ram(&self) -> u64 {
        self.ram
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn prec_q(&self) -> Option<Q64> {
        self.prec.map(|p| Q64::new(p, self.ram as i64))
    }

    /// Precision as a value; `Inf` for exact series.
    pub fn prec_value(&self) -> Value {
        self.prec_q().map_or(Value::Inf, Value::Rat)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn raw_terms(&self) -> &[(i64, Elem)] {
        &self.terms
    }

    pub fn exponent_of(&self, num: i64) -> Q64 {
        Q64::new(num, self.ram as i64)
    }

    /// Terms as `(exponent, coefficient)`.
    pub fn iter(&self) -> impl Iterator<Item = (Q64, &Elem)> + '_ {
        self.terms.iter().map(move |(e, c)| (Q64::new(*e, self.ram as i64), c))
    }

    pub fn terms_q(&self) -> Vec<(Q64, Elem)> {
        self.iter().map(|(e, c)| (e, c.clone())).collect()
    }

    pub fn coeff_at(&self, exp: Q64) -> Elem {
        self.iter()
            .find(|(e, _)| *e == exp)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn leading(&self) -> Option<(Q64, Elem)> {
        self.iter().next().map(|(e, c)| (e, c.clone()))
    }

    /// Certified zero: exact with no terms.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_none()
    }

    /// Least exponent, `Inf` for the certified zero.
    pub fn valuation(&self) -> Result<Value> {
        match (self.terms.first(), self.prec) {
            (Some((e, _)), _) => Ok(Value::Rat(self.exponent_of(*e))),
            (None, None) => Ok(Value::Inf),
            (None, Some(p)) => Err(Error::PrecisionExhausted { bound: Value::Rat(self.exponent_of(p)) }),
        }
    }

    /// A lower bound for the valuation: the first term, the precision, or `Inf`.
    pub fn valuation_lower_bound(&self) -> Value {
        match (self.terms.first(), self.prec) {
            (Some((e, _)), _) => Value::Rat(self.exponent_of(*e)),
            (None, Some(p)) => Value::Rat(self.exponent_of(p)),
            (None, None) => Value::Inf,
        }
    }

    /// The coefficient at exponent 0 of a series of valuation 0.
    pub fn residue_unit(&self) -> Result<Elem> {
        let v = self.valuation()?;
        if v != Value::zero() {
            return Err(Error::NonzeroValuation(v));
        }
        Ok(self.terms[0].1.clone())
    }

    /// Whether all exponents are integers (the series lies in `k((t))` up to
    /// its coefficients).
    pub fn has_integral_exponents(&self) -> bool {
        self.iter().all(|(e, _)| e.is_integer())
    }

    /// The least `e` with every exponent in `(1/e) Z`.
    pub fn exponent_denominator(&self) -> u64 {
        self.iter().fold(1u64, |acc, (e, _)| lcm(acc, *e.denom() as u64))
    }

    // ---- representation changes --------------------------------------------------------

    /// Re-expresses exponents over a multiple of the current `ram`.
    pub fn with_ram(&self, ram: u64) -> PuiseuxSeries {
        assert!(ram % self.ram == 0, "ram {ram} is not a multiple of {}", self.ram);
        let k = (ram / self.ram) as i64;
        PuiseuxSeries {
            field: self.field.clone(),
            ram,
            terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
            prec: self.prec.map(|p| p * k),
        }
    }

    /// Re-expresses over `ram`, which must clear every exponent and the
    /// precision.
    pub fn at_ram(&self, ram: u64) -> PuiseuxSeries {
        PuiseuxSeries {
            field: self.field.clone(),
            ram,
            terms: self.iter().map(|(e, c)| (num_over(e, ram), c.clone())).collect(),
            prec: self.prec_q().map(|p| num_over(p, ram)),
        }
    }

    /// The least `r` with exponents and precision in `(1/r) Z`.
    pub fn full_denominator(&self) -> u64 {
        let d = self.exponent_denominator();
        match self.prec_q() {
            Some(p) => lcm(d, *p.denom() as u64),
            None => d,
        }
    }

    /// Drops everything at or beyond `p` (no-op if already coarser).
    pub fn truncate(&self, p: Q64) -> PuiseuxSeries {
        if self.prec_q().is_some_and(|cur| cur <= p) {
            return self.clone();
        }
        let ram = lcm(self.ram, *p.denom() as u64);
        let s = self.with_ram(ram);
        let pn = num_over(p, ram);
        PuiseuxSeries::from_terms(&s.field, ram, s.terms, Some(pn))
    }

    /// Forgets exactness beyond the known terms at precision `p`, keeping
    /// the coarser of the two precisions.
    pub fn with_prec(&self, p: Option<Q64>) -> PuiseuxSeries {
        match p {
            None => self.clone(),
            Some(p) => self.truncate(p),
        }
    }

    pub fn lift_to(&self, target: &GroundField) -> Result<PuiseuxSeries> {
        if &self.field == target {
            return Ok(self.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| Ok((*e, target.lift_from(&self.field, c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PuiseuxSeries { field: target.clone(), ram: self.ram, terms, prec: self.prec })
    }

    pub fn project_to(&self, target: &GroundField) -> Option<PuiseuxSeries> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| Some((*e, self.field.project_to(target, c)?)))
            .collect::<Option<Vec<_>>>()?;
        Some(PuiseuxSeries { field: target.clone(), ram: self.ram, terms, prec: self.prec })
    }

    pub fn map_coeffs(&self, target: &GroundField, g: impl Fn(&Elem) -> Elem) -> PuiseuxSeries {
        let terms = self.terms.iter().map(|(e, c)| (*e, g(c))).collect();
        PuiseuxSeries::from_terms(target, self.ram, terms, self.prec)
    }

    /// The substitution `t^(1/ram) -> w t^(1/ram)` termwise, i.e. the term at
    /// numerator `n` is multiplied by `twist(n)`.
    pub fn twist(&self, twist: impl Fn(i64) -> Elem) -> PuiseuxSeries {
        let terms = self.terms.iter().map(|(e, c)| (*e, self.field.mul(c, &twist(*e)))).collect();
        PuiseuxSeries::from_terms(&self.field, self.ram, terms, self.prec)
    }

    /// Terms with exponent strictly below `p`, as an exact series.
    pub fn prefix_below(&self, p: Q64) -> PuiseuxSeries {
        let terms = self.iter().filter(|(e, _)| *e < p).map(|(e, c)| (e, c.clone())).collect();
        PuiseuxSeries::from_rational_terms(&self.field, terms, None).with_ram_at_least(self.ram)
    }

    /// The first `n` terms as an exact series.
    pub fn first_terms(&self, n: usize) -> PuiseuxSeries {
        PuiseuxSeries {
            field: self.field.clone(),
            ram: self.ram,
            terms: self.terms.iter().take(n).cloned().collect(),
            prec: None,
        }
    }

    /// Marks the known terms as the whole series.
    pub fn as_exact(&self) -> PuiseuxSeries {
        PuiseuxSeries { prec: None, ..self.clone() }
    }

    fn with_ram_at_least(self, ram: u64) -> PuiseuxSeries {
        let r = lcm(self.ram, ram);
        self.with_ram(r)
    }

    fn aligned(&self, other: &PuiseuxSeries) -> (PuiseuxSeries, PuiseuxSeries) {
        let (a, b) = self.common_field(other).expect("series over incompatible fields");
        let r = lcm(a.ram, b.ram);
        (a.with_ram(r), b.with_ram(r))
    }

    /// Lifts both operands into the larger of the two fields.
    pub fn common_field(&self, other: &PuiseuxSeries) -> Result<(PuiseuxSeries, PuiseuxSeries)> {
        if self.field == other.field {
            return Ok((self.clone(), other.clone()));
        }
        if self.field.is_subfield_of(&other.field) {
            return Ok((self.lift_to(&other.field)?, other.clone()));
        }
        if other.field.is_subfield_of(&self.field) {
            return Ok((self.clone(), other.lift_to(&self.field)?));
        }
        Err(Error::FieldMismatch(format!(
            "{} and {} share no tower",
            self.field.describe(),
            other.field.describe()
        )))
    }

    // ---- ring operations -------------------------------------------------------------

    pub fn add(&self, other: &PuiseuxSeries) -> PuiseuxSeries {
        let (a, b) = self.aligned(other);
        let prec = match (a.prec, b.prec) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        let mut terms = a.terms;
        terms.extend(b.terms);
        PuiseuxSeries::from_terms(&a.field, a.ram, terms, prec)
    }

    pub fn neg(&self) -> PuiseuxSeries {
        PuiseuxSeries {
            field: self.field.clone(),
            ram: self.ram,
            terms: self.terms.iter().map(|(e, c)| (*e, self.field.neg(c))).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &PuiseuxSeries) -> PuiseuxSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Elem) -> PuiseuxSeries {
        let terms = self.terms.iter().map(|(e, x)| (*e, self.field.mul(x, c))).collect();
        PuiseuxSeries::from_terms(&self.field, self.ram, terms, self.prec)
    }

    /// Multiplication by `c t^exp`.
    pub fn mul_monomial(&self, c: &Elem, exp: Q64) -> PuiseuxSeries {
        let ram = lcm(self.ram, *exp.denom() as u64);
        let s = self.with_ram(ram);
        let k = num_over(exp, ram);
        let terms = s.terms.iter().map(|(e, x)| (e + k, self.field.mul(x, c))).collect();
        PuiseuxSeries::from_terms(&self.field, ram, terms, s.prec.map(|p| p + k))
    }

    pub fn mul(&self, other: &PuiseuxSeries) -> PuiseuxSeries {
        let (a, b) = self.aligned(other);
        let f = &a.field;
        let lv = |s: &PuiseuxSeries| -> Option<i64> {
            s.terms.first().map(|(e, _)| *e).or(s.prec)
        };
        // precision: min(va + pb, vb + pa) over the finite parts
        let prec = match (a.prec, b.prec) {
            (None, None) => None,
            (Some(pa), None) => lv(&b).map(|vb| pa + vb),
            (None, Some(pb)) => lv(&a).map(|va| pb + va),
            (Some(pa), Some(pb)) => {
                let x = lv(&b).map(|vb| pa + vb);
                let y = lv(&a).map(|va| pb + va);
                match (x, y) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                }
            }
        };
        if a.is_zero() || b.is_zero() {
            return PuiseuxSeries::zero(f);
        }
        let mut terms: Vec<(i64, Elem)> = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (ea, ca) in &a.terms {
            if prec.is_some_and(|p| ea + b.terms.first().map_or(0, |t| t.0) >= p) {
                break;
            }
            for (eb, cb) in &b.terms {
                let e = ea + eb;
                if prec.is_some_and(|p| e >= p) {
                    break;
                }
                terms.push((e, f.mul(ca, cb)));
            }
        }
        PuiseuxSeries::from_terms(f, a.ram, terms, prec)
    }

    pub fn pow(&self, n: u32) -> PuiseuxSeries {
        let mut r = PuiseuxSeries::one(&self.field);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                r = r.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    /// Inverse to relative precision `rel` (ignored when the inverse is a
    /// monomial and hence exact).
    pub fn invert(&self, rel: Q64) -> Result<PuiseuxSeries> {
        let (v, c) = self.leading().ok_or(Error::DivisionByZero)?;
        let f = &self.field;
        let cinv = f.inv(&c)?;
        if self.terms.len() == 1 && self.is_exact() {
            return Ok(PuiseuxSeries::monomial(f, cinv, -v));
        }
        // self = c t^v (1 + u), v(u) > 0
        let rel = match self.prec_q() {
            Some(p) => rel.min(p - v),
            None => rel,
        };
        let u = self.mul_monomial(&cinv, -v).sub(&PuiseuxSeries::one(f)).truncate(rel);
        let mut acc = PuiseuxSeries::one(f).truncate(rel);
        let mut power = PuiseuxSeries::one(f).truncate(rel);
        if let Some(vu) = u.leading().map(|(e, _)| e) {
            let mut k = Q64::zero();
            while k < rel {
                power = power.mul(&u).neg().truncate(rel);
                acc = acc.add(&power);
                k += vu;
            }
        }
        Ok(acc.truncate(rel).mul_monomial(&cinv, -v))
    }

    /// `self / other` with relative precision `rel` for the inverse.
    pub fn div(&self, other: &PuiseuxSeries, rel: Q64) -> Result<PuiseuxSeries> {
        Ok(self.mul(&other.invert(rel)?))
    }

    /// An `e`-th root. With `residue_one`, the leading coefficient must be 1
    /// and the root with leading coefficient 1 is returned; otherwise the
    /// canonical root of the leading coefficient is used.
    pub fn root(&self, e: u64, residue_one: bool, rel: Q64) -> Result<PuiseuxSeries> {
        let f = &self.field;
        let p = f.characteristic();
        if e == 0 {
            return Err(Error::InvalidArgument("root of index 0".into()));
        }
        if p != 0 && e % p == 0 {
            return Err(Error::Wild { e, characteristic: p });
        }
        let (v, c) = self.leading().ok_or_else(|| Error::InvalidArgument("root of zero".into()))?;
        let r0 = if residue_one {
            if !f.is_one(&c) {
                return Err(Error::InvalidArgument("residue-1 root of a series whose leading coefficient is not 1".into()));
            }
            f.one()
        } else {
            nth_root_in_field(f, &c, e)?
                .ok_or_else(|| Error::NoRoot(format!("{}-th root of {} in {}", e, f.display(&c), f.describe())))?
        };
        let exp = v / Q64::from_integer(e as i64);
        let cinv = f.inv(&c)?;
        // unit part w = self / (c t^v), residue 1
        let w = self.mul_monomial(&cinv, -v);
        let rel = match w.prec_q() {
            Some(p) => rel.min(p),
            None => rel,
        };
        let y = unit_root(&w, e, rel)?;
        Ok(y.mul_monomial(&r0, exp))
    }

    /// `v(self - other)`; `Err(PrecisionExhausted)` when the known parts agree.
    pub fn v_diff(&self, other: &PuiseuxSeries) -> Result<Value> {
        self.sub(other).valuation()
    }

    /// Evaluates `sum c_i y^i` at this series (Horner).
    pub fn eval_poly(coeffs: &[PuiseuxSeries], y: &PuiseuxSeries) -> PuiseuxSeries {
        let mut acc = PuiseuxSeries::zero(y.field());
        for c in coeffs.iter().rev() {
            acc = acc.mul(y).add(c);
        }
        acc
    }

    // ---- display ------------------------------------------------------------------

    /// A literal in the scenario grammar, e.g. `t^(1/2) + 3*t^(2/3) + O(t)`.
    pub fn to_literal(&self) -> String {
        let f = &self.field;
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in self.iter() {
            let mono = if e.is_zero() {
                String::new()
            } else if e.is_one() {
                "t".into()
            } else if e.is_integer() && e.is_positive() {
                format!("t^{e}")
            } else {
                format!("t^({e})")
            };
            let cs = f.display(c);
            let term = if mono.is_empty() {
                cs
            } else if f.is_one(c) {
                mono
            } else if f.is_one(&f.neg(c)) {
                format!("-{mono}")
            } else if f.is_atomic_display(c) || (c.as_rat().is_some() && cs.starts_with('-') && !cs.contains('/')) {
                format!("{cs}*{mono}")
            } else {
                format!("({cs})*{mono}")
            };
            parts.push(term);
        }
        if let Some(p) = self.prec_q() {
            let o = if p.is_zero() {
                "O(1)".to_string()
            } else if p.is_one() {
                "O(t)".to_string()
            } else if p.is_integer() && p.is_positive() {
                format!("O(t^{p})")
            } else {
                format!("O(t^({p}))")
            };
            parts.push(o);
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(p);
                }
            }
        }
        out
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

/// The residue-1 `e`-th root of a unit series `w` with residue 1, to
/// precision `rel`, by Newton iteration `y <- y - (y^e - w) / (e y^(e-1))`.
fn unit_root(w: &PuiseuxSeries, e: u64, rel: Q64) -> Result<PuiseuxSeries> {
    let f = w.field();
    if e == 1 {
        return Ok(w.truncate(rel));
    }
    let one = PuiseuxSeries::one(f);
    let dev = w.sub(&one);
    if dev.is_zero() {
        return Ok(one);
    }
    // y = 1 is correct up to v(w - 1); each step doubles that
    let mut correct = dev.valuation_lower_bound().as_rat().unwrap_or(rel);
    let e_elem = f.from_i64(e as i64);
    let mut y = one;
    while correct < rel {
        let target = (correct * 2).min(rel);
        let ye1 = y.pow((e - 1) as u32).truncate(target);
        let num = ye1.mul(&y).sub(w).truncate(target);
        let den = ye1.scale(&e_elem);
        let corr = num.mul(&den.invert(target)?).truncate(target);
        y = y.sub(&corr).truncate(target).as_exact();
        correct = target;
    }
    Ok(y.truncate(rel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::values::q;

    fn qq() -> GroundField {
        GroundField::rationals()
    }

    fn s(terms: &[(i64, i64, i64)]) -> PuiseuxSeries {
        let k = qq();
        PuiseuxSeries::from_rational_terms(&k, terms.iter().map(|&(c, n, d)| (q(n, d), k.from_i64(c))).collect(), None)
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(PuiseuxSeries::t(&qq()).valuation().unwrap(), Value::rat(1, 1));
        assert_eq!(s(&[(1, 1, 2), (1, 2, 3)]).valuation().unwrap(), Value::rat(1, 2));
        assert_eq!(PuiseuxSeries::zero(&qq()).valuation().unwrap(), Value::Inf);
        let unknown = PuiseuxSeries::unknown(&qq(), q(3, 1));
        assert!(matches!(unknown.valuation(), Err(Error::PrecisionExhausted { .. })));
    }

    #[test]
    fn v_diff_examples() {
        let x = s(&[(1, 1, 2), (1, 2, 3)]);
        assert_eq!(x.v_diff(&s(&[(1, 1, 2)])).unwrap(), Value::rat(2, 3));
        assert_eq!(x.v_diff(&x).unwrap(), Value::Inf);
        assert_eq!(x.v_diff(&s(&[(-1, 1, 2)])).unwrap(), Value::rat(1, 2));
    }

    #[test]
    fn residue_examples() {
        let k = qq();
        assert_eq!(s(&[(1, 0, 1), (2, 1, 6)]).residue_unit().unwrap(), k.one());
        assert!(s(&[(1, 1, 2)]).residue_unit().is_err());
    }

    #[test]
    fn ring_examples() {
        let h = s(&[(1, 1, 2)]);
        assert_eq!(h.mul(&h), PuiseuxSeries::t(&qq()));
        let inv = s(&[(1, 0, 1), (1, 1, 1)]).invert(q(3, 1)).unwrap();
        assert_eq!(inv, s(&[(1, 0, 1), (-1, 1, 1), (1, 2, 1)]).truncate(q(3, 1)));
        let back = inv.mul(&s(&[(1, 0, 1), (1, 1, 1)]));
        assert_eq!(back, PuiseuxSeries::one(&qq()).truncate(q(3, 1)));
        let t = PuiseuxSeries::t(&qq());
        assert!(t.sub(&t).is_zero());
    }

    #[test]
    fn root_examples() {
        let r = PuiseuxSeries::t(&qq()).root(2, false, q(4, 1)).unwrap();
        assert_eq!(r, s(&[(1, 1, 2)]));
        let x = s(&[(1, 0, 1), (2, 1, 6), (1, 1, 3)]);
        let r = x.root(2, true, q(2, 1)).unwrap();
        assert_eq!(r.truncate(q(2, 1)), s(&[(1, 0, 1), (1, 1, 6)]).truncate(q(2, 1)));
        assert_eq!(s(&[(1, 2, 1)]).root(2, false, q(4, 1)).unwrap(), PuiseuxSeries::t(&qq()));
        let f5 = GroundField::prime(5).unwrap();
        let wild = PuiseuxSeries::t(&f5).root(5, false, q(2, 1));
        assert!(matches!(wild, Err(Error::Wild { .. })));
    }

    #[test]
    fn literal_display() {
        assert_eq!(s(&[(1, 1, 2), (3, 2, 3)]).to_literal(), "t^(1/2) + 3*t^(2/3)");
        assert_eq!(s(&[(-1, 1, 1), (1, 2, 1)]).truncate(q(3, 1)).to_literal(), "-t + t^2 + O(t^3)");
    }
}
