//! Polynomials whose coefficients are Puiseux series.

use num_traits::Zero;

use crate::algebra::matrix::{determinant, Ring};
use crate::algebra::{Elem, GroundField, UPoly};
use crate::error::{Error, Result};
use crate::puiseux::PuiseuxSeries;
use crate::values::{Value, Q64};

/// `sum c_i X^i` with series coefficients, low to high. Exact zero
/// coefficients at the top are trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesPoly {
    field: GroundField,
    coeffs: Vec<PuiseuxSeries>,
}

impl SeriesPoly {
    pub fn new(field: &GroundField, coeffs: Vec<PuiseuxSeries>) -> SeriesPoly {
        let coeffs = coeffs
            .into_iter()
            .map(|c| c.lift_to(field).expect("coefficient outside the polynomial's field"))
            .collect();
        let mut p = SeriesPoly { field: field.clone(), coeffs };
        while p.coeffs.last().is_some_and(|c| c.is_zero()) {
            p.coeffs.pop();
        }
        p
    }

    pub fn zero(field: &GroundField) -> SeriesPoly {
        SeriesPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &GroundField) -> SeriesPoly {
        SeriesPoly::constant(PuiseuxSeries::one(field))
    }

    pub fn constant(c: PuiseuxSeries) -> SeriesPoly {
        let f = c.field().clone();
        SeriesPoly::new(&f, vec![c])
    }

    pub fn x(field: &GroundField) -> SeriesPoly {
        SeriesPoly::new(field, vec![PuiseuxSeries::zero(field), PuiseuxSeries::one(field)])
    }

    /// `X - r`.
    pub fn linear(r: &PuiseuxSeries) -> SeriesPoly {
        let f = r.field().clone();
        SeriesPoly::new(&f, vec![r.neg(), PuiseuxSeries::one(&f)])
    }

    /// Constant-coefficient polynomial.
    pub fn from_upoly(p: &UPoly) -> SeriesPoly {
        let f = p.field().clone();
        SeriesPoly::new(&f, p.coeffs().iter().map(|c| PuiseuxSeries::constant(&f, c.clone())).collect())
    }

    pub fn field(&self) -> &GroundField {
        &self.field
    }

    pub fn coeffs(&self) -> &[PuiseuxSeries] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> PuiseuxSeries {
        self.coeffs.get(i).cloned().unwrap_or_else(|| PuiseuxSeries::zero(&self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> PuiseuxSeries {
        self.coeffs.last().cloned().unwrap_or_else(|| PuiseuxSeries::zero(&self.field))
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact())
    }

    /// The lcm of the coefficients' exponent denominators.
    pub fn ram(&self) -> u64 {
        self.coeffs.iter().fold(1u64, |acc, c| num_integer::lcm(acc, c.full_denominator()))
    }

    /// Whether every coefficient lies in `k((t))`: integral exponents and
    /// coefficients in `k`.
    pub fn lies_over(&self, k: &GroundField) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.has_integral_exponents() && c.project_to(k).is_some())
    }

    pub fn project_to(&self, k: &GroundField) -> Option<SeriesPoly> {
        let cs = self.coeffs.iter().map(|c| c.project_to(k)).collect::<Option<Vec<_>>>()?;
        Some(SeriesPoly { field: k.clone(), coeffs: cs })
    }

    pub fn lift_to(&self, target: &GroundField) -> Result<SeriesPoly> {
        let cs = self.coeffs.iter().map(|c| c.lift_to(target)).collect::<Result<Vec<_>>>()?;
        Ok(SeriesPoly { field: target.clone(), coeffs: cs })
    }

    pub fn map_coeffs(&self, g: impl Fn(&PuiseuxSeries) -> PuiseuxSeries) -> SeriesPoly {
        let f = self.field.clone();
        SeriesPoly::new(&f, self.coeffs.iter().map(g).collect())
    }

    pub fn add(&self, other: &SeriesPoly) -> SeriesPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        SeriesPoly::new(&self.field, (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }

    pub fn neg(&self) -> SeriesPoly {
        SeriesPoly { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, other: &SeriesPoly) -> SeriesPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SeriesPoly) -> SeriesPoly {
        if self.is_zero() || other.is_zero() {
            return SeriesPoly::zero(&self.field);
        }
        let mut out = vec![PuiseuxSeries::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        SeriesPoly::new(&self.field, out)
    }

    pub fn scale(&self, c: &PuiseuxSeries) -> SeriesPoly {
        SeriesPoly::new(&self.field, self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn truncate(&self, p: Q64) -> SeriesPoly {
        SeriesPoly::new(&self.field, self.coeffs.iter().map(|c| c.truncate(p)).collect())
    }

    pub fn pow(&self, n: u32) -> SeriesPoly {
        let mut r = SeriesPoly::one(&self.field);
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Horner evaluation at a series.
    pub fn eval(&self, y: &PuiseuxSeries) -> PuiseuxSeries {
        let (f, y) = if y.field() != &self.field && self.field.is_subfield_of(y.field()) {
            (self.lift_to(y.field()).unwrap(), y.clone())
        } else {
            (self.clone(), y.lift_to(&self.field).expect("evaluation point outside the field tower"))
        };
        PuiseuxSeries::eval_poly(&f.coeffs, &y)
    }

    pub fn derivative(&self) -> SeriesPoly {
        let f = &self.field;
        SeriesPoly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&f.from_i64(i as i64)))
                .collect(),
        )
    }

    /// `self(a + Y)`; the coefficients are the Hasse derivatives at `a`.
    pub fn shift(&self, a: &PuiseuxSeries) -> SeriesPoly {
        let (f, a) = if a.field() != &self.field && self.field.is_subfield_of(a.field()) {
            (self.lift_to(a.field()).unwrap(), a.clone())
        } else {
            (self.clone(), a.lift_to(&self.field).expect("shift outside the field tower"))
        };
        let field = f.field.clone();
        let lin = SeriesPoly::new(&field, vec![a, PuiseuxSeries::one(&field)]);
        let mut acc = SeriesPoly::zero(&field);
        for c in f.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&SeriesPoly::constant(c.clone()));
        }
        acc
    }

    /// Divides by the leading coefficient; exact when it is a monomial.
    pub fn monic(&self, rel: Q64) -> Result<SeriesPoly> {
        let inv = self.lc().invert(rel)?;
        let mut p = self.scale(&inv);
        if let Some(last) = p.coeffs.last_mut() {
            *last = PuiseuxSeries::one(&self.field);
        }
        Ok(p)
    }

    /// Valuations of the coefficients (`None` for an exact zero coefficient,
    /// and `Err` when a coefficient is known only as `O(t^p)`).
    pub fn coefficient_values(&self) -> Vec<std::result::Result<Option<Q64>, Q64>> {
        self.coeffs
            .iter()
            .map(|c| match c.valuation() {
                Ok(Value::Inf) => Ok(None),
                Ok(v) => Ok(v.as_rat()),
                Err(_) => Err(c.prec_q().unwrap_or(Q64::zero())),
            })
            .collect()
    }

    /// Coefficients as literals, for reports.
    pub fn to_literals(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_literal()).collect()
    }

    pub fn display(&self) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{i}"),
            };
            let lit = c.to_literal();
            let one = c.is_exact() && c.num_terms() == 1 && c.leading().is_some_and(|(e, x)| e.is_zero() && self.field.is_one(&x));
            parts.push(if mono.is_empty() {
                format!("({lit})")
            } else if one {
                mono
            } else {
                format!("({lit})*{mono}")
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// `F((t^(1/r)))[X]` as a ring for determinant computations.
pub struct SeriesPolyRing(pub GroundField);

impl Ring for SeriesPolyRing {
    type E = SeriesPoly;
    fn zero(&self) -> SeriesPoly {
        SeriesPoly::zero(&self.0)
    }
    fn one(&self) -> SeriesPoly {
        SeriesPoly::one(&self.0)
    }
    fn add(&self, a: &SeriesPoly, b: &SeriesPoly) -> SeriesPoly {
        a.add(b)
    }
    fn neg(&self, a: &SeriesPoly) -> SeriesPoly {
        a.neg()
    }
    fn mul(&self, a: &SeriesPoly, b: &SeriesPoly) -> SeriesPoly {
        a.mul(b)
    }
}

/// Coordinates of a series over `F = base[y]/(m)` as `d` series over `base`.
fn series_coordinates(s: &PuiseuxSeries, base: &GroundField, d: usize) -> Vec<PuiseuxSeries> {
    (0..d)
        .map(|i| {
            let terms = s
                .raw_terms()
                .iter()
                .map(|(e, c)| (*e, c.as_vec().expect("extension element")[i].clone()))
                .collect();
            PuiseuxSeries::from_terms(base, s.ram(), terms, s.prec_q().map(|p| (p * Q64::from_integer(s.ram() as i64)).to_integer()))
        })
        .collect()
}

/// `N_{F/base}` of a polynomial with coefficients over `F((t^(1/r)))`,
/// taken coefficientwise in the field direction only.
pub fn coefficient_norm_step(p: &SeriesPoly) -> Result<SeriesPoly> {
    let field = p.field().clone();
    let base = field.base().cloned().ok_or_else(|| Error::InvalidArgument("norm over a prime field".into()))?;
    let d = field.relative_degree();
    let alpha = field.generator().unwrap();
    let mut cols: Vec<Vec<SeriesPoly>> = Vec::with_capacity(d);
    let mut mult = field.one();
    for _ in 0..d {
        let scaled = p.map_coeffs(|c| c.scale(&mult));
        let n = scaled.coeffs().len();
        let coords: Vec<Vec<PuiseuxSeries>> = scaled.coeffs().iter().map(|c| series_coordinates(c, &base, d)).collect();
        cols.push((0..d).map(|i| SeriesPoly::new(&base, (0..n).map(|k| coords[k][i].clone()).collect())).collect());
        mult = field.mul(&mult, &alpha);
    }
    let m: Vec<Vec<SeriesPoly>> = (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect();
    Ok(determinant(&SeriesPolyRing(base), &m))
}

/// Coefficientwise norm from the polynomial's field down to `k`.
pub fn coefficient_norm(p: &SeriesPoly, k: &GroundField) -> Result<SeriesPoly> {
    let mut cur = p.clone();
    while cur.field() != k {
        if cur.field().base().is_none() {
            return Err(Error::FieldMismatch(format!("{} is not in the tower", k.describe())));
        }
        cur = coefficient_norm_step(&cur)?;
    }
    Ok(cur)
}

/// The norm from `F((s))` to `F((s^q))`, `s = t^(1/r)`, `q` prime dividing `r`.
pub fn ramification_norm_step(p: &SeriesPoly, r: u64, q: u64) -> SeriesPoly {
    let field = p.field().clone();
    let qi = q as usize;
    // P = sum_j s^j P_j(s^q, X)
    let parts: Vec<SeriesPoly> = (0..qi)
        .map(|j| {
            p.map_coeffs(|c| {
                let c = c.at_ram(r);
                let terms: Vec<(i64, Elem)> = c
                    .raw_terms()
                    .iter()
                    .filter(|(e, _)| e.rem_euclid(q as i64) == j as i64)
                    .map(|(e, x)| (e - j as i64, x.clone()))
                    .collect();
                PuiseuxSeries::from_terms(&field, r, terms, c.prec_q().map(|pp| (pp * Q64::from_integer(r as i64)).to_integer() - j as i64))
            })
        })
        .collect();
    let u = PuiseuxSeries::monomial(&field, field.one(), Q64::new(q as i64, r as i64));
    let m: Vec<Vec<SeriesPoly>> = (0..qi)
        .map(|i| {
            (0..qi)
                .map(|k| {
                    if i >= k {
                        parts[i - k].clone()
                    } else {
                        parts[i + qi - k].scale(&u)
                    }
                })
                .collect()
        })
        .collect();
    determinant(&SeriesPolyRing(field), &m)
}

// ---- squarefree decomposition over k(t^(1/r)) ------------------------------------------------

/// Polynomials in `X` over `F[T]`, `T = t^(1/r)`; coefficients low to high.
type BPoly = Vec<UPoly>;

fn bp_trim(mut a: BPoly) -> BPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn bp_content(a: &BPoly) -> UPoly {
    let f = a[0].field().clone();
    a.iter().fold(UPoly::zero(&f), |g, c| g.gcd(c))
}

fn bp_primitive(a: &BPoly) -> BPoly {
    let c = bp_content(a);
    bp_trim(a.iter().map(|x| x.exact_div(&c).unwrap()).collect())
}

fn bp_deriv(a: &BPoly) -> BPoly {
    bp_trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&c.field().from_i64(i as i64)))
            .collect(),
    )
}

/// Pseudo-division: `lc(b)^k a = q b + r`; returns `(q, r, lc(b)^k)`.
fn bp_pseudo_divrem(a: &BPoly, b: &BPoly) -> (BPoly, BPoly, UPoly) {
    let f = b[0].field().clone();
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r = a.clone();
    let mut q: BPoly = vec![UPoly::zero(&f); a.len().saturating_sub(db).max(1)];
    let mut mult = UPoly::one(&f);
    while r.len() > db && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        // r <- lb * r - lr * X^shift * b
        for c in r.iter_mut() {
            *c = c.mul(&lb);
        }
        for c in q.iter_mut() {
            *c = c.mul(&lb);
        }
        q[shift] = q[shift].add(&lr);
        for (k, bc) in b.iter().enumerate() {
            r[shift + k] = r[shift + k].sub(&lr.mul(bc));
        }
        mult = mult.mul(&lb);
        r = bp_trim(r);
    }
    (bp_trim(q), r, mult)
}

fn bp_gcd(a: &BPoly, b: &BPoly) -> BPoly {
    let (mut x, mut y) = (bp_primitive(a), bp_primitive(b));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() && y.len() > 1 {
        let (_, r, _) = bp_pseudo_divrem(&x, &y);
        x = y;
        y = if r.is_empty() { r } else { bp_primitive(&r) };
    }
    if y.is_empty() {
        bp_primitive(&x)
    } else {
        // a nonzero constant in X: the gcd is trivial
        vec![UPoly::one(a[0].field())]
    }
}

/// Exact division of primitive polynomials over `F[T]`.
fn bp_exact_div(a: &BPoly, b: &BPoly) -> BPoly {
    let (q, r, m) = bp_pseudo_divrem(a, b);
    debug_assert!(r.is_empty());
    let q = bp_trim(q.iter().map(|c| c.exact_div(&m).expect("exact quotient")).collect());
    if q.is_empty() {
        q
    } else {
        bp_primitive(&q)
    }
}

fn to_bpoly(p: &SeriesPoly, r: u64) -> BPoly {
    let f = p.field().clone();
    let cs: Vec<PuiseuxSeries> = p.coeffs().iter().map(|c| c.at_ram(r)).collect();
    let shift = cs.iter().filter_map(|c| c.raw_terms().first().map(|t| t.0)).min().unwrap_or(0);
    cs.iter()
        .map(|c| {
            let mut v: Vec<Elem> = Vec::new();
            for (e, x) in c.raw_terms() {
                let n = (e - shift) as usize;
                if v.len() <= n {
                    v.resize(n + 1, f.zero());
                }
                v[n] = x.clone();
            }
            UPoly::new(f.clone(), v)
        })
        .collect()
}

fn from_bpoly(a: &BPoly, r: u64, field: &GroundField) -> SeriesPoly {
    SeriesPoly::new(
        field,
        a.iter()
            .map(|c| {
                let terms = c.coeffs().iter().enumerate().map(|(i, x)| (i as i64, x.clone())).collect();
                PuiseuxSeries::from_terms(field, r, terms, None)
            })
            .collect(),
    )
}

/// Whether `gcd(a, b) = 1` is visible after `T = c` for a small `c` with
/// `lc(a)(c) != 0`: a common factor would survive the substitution.
fn coprime_at_a_point(a: &BPoly, b: &BPoly) -> bool {
    let f = a[0].field().clone();
    let lc = a.last().unwrap();
    let limit = match f.characteristic() {
        0 => 40,
        p => p.min(40) as i64,
    };
    for c in (0..limit).map(|i| f.from_i64(i)) {
        if f.is_zero(&lc.eval(&c)) {
            continue;
        }
        let at = |p: &BPoly| UPoly::new(f.clone(), p.iter().map(|x| x.eval(&c)).collect());
        let (ac, bc) = (at(a), at(b));
        if bc.is_zero() {
            continue;
        }
        if ac.gcd(&bc).deg() == 0 {
            return true;
        }
    }
    false
}

/// Squarefree decomposition of an exact polynomial over `F((t^(1/r)))`.
/// Factors are normalized to be primitive over `F[T]` (not monic in `X`).
pub fn squarefree_decomposition(p: &SeriesPoly) -> Result<Vec<(SeriesPoly, usize)>> {
    if !p.is_exact() {
        return Err(Error::InvalidArgument("squarefree decomposition needs exact coefficients".into()));
    }
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let r = p.ram();
    let field = p.field().clone();
    let bp = to_bpoly(p, r);
    let f = bp_primitive(&bp);
    let d = bp_deriv(&f);
    if d.is_empty() {
        return Err(Error::Inseparable(format!("derivative of {} vanishes", p.display())));
    }
    if coprime_at_a_point(&f, &d) {
        return Ok(vec![(from_bpoly(&f, r, &field), 1)]);
    }
    let mut out = Vec::new();
    let mut c = bp_gcd(&f, &d);
    let mut w = bp_exact_div(&f, &c);
    let mut i = 1;
    while w.len() > 1 {
        let y = bp_gcd(&w, &c);
        let z = bp_exact_div(&w, &y);
        if z.len() > 1 {
            out.push((from_bpoly(&z, r, &field), i));
        }
        i += 1;
        w = y.clone();
        c = bp_exact_div(&c, &y);
    }
    if c.len() > 1 {
        return Err(Error::Inseparable("polynomial has an inseparable factor".into()));
    }
    Ok(out)
}

impl SeriesPoly {
    /// Leading-coefficient-normalized check that `self` and `other` agree up
    /// to the precision of their coefficients.
    pub fn agrees_with(&self, other: &SeriesPoly) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|i| {
            let d = self.coeff(i).sub(&other.coeff(i));
            d.num_terms() == 0
        })
    }

    /// The least precision among the coefficients.
    pub fn precision(&self) -> Value {
        self.coeffs.iter().map(|c| c.prec_value()).min().unwrap_or(Value::Inf)
    }

    pub fn has_zero_constant(&self) -> bool {
        self.coeffs.first().is_none_or(|c| c.is_zero())
    }

    pub fn is_monic_exact(&self) -> bool {
        let lc = self.lc();
        lc.is_exact() && lc.num_terms() == 1 && lc.leading().is_some_and(|(e, c)| e.is_zero() && self.field.is_one(&c))
    }

    pub fn constant_term_value(&self) -> Value {
        self.coeff(0).valuation_lower_bound()
    }

    pub fn zero_q() -> Q64 {
        Q64::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_series, Symbols};
    use crate::values::q;

    fn poly(field: &GroundField, lits: &[&str]) -> SeriesPoly {
        let sym = Symbols::for_field(field);
        SeriesPoly::new(field, lits.iter().map(|l| parse_series(l, &sym).unwrap()).collect())
    }

    #[test]
    fn shift_matches_taylor() {
        let k = GroundField::rationals();
        let f = poly(&k, &["-t", "0", "1"]);
        let a = parse_series("t^(1/2)", &Symbols::for_field(&k)).unwrap();
        let g = f.shift(&a);
        // (a + Y)^2 - t = 2a Y + Y^2
        assert!(g.coeff(0).is_zero());
        assert_eq!(g.coeff(1), a.scale(&k.from_i64(2)));
    }

    #[test]
    fn squarefree_over_laurent_coefficients() {
        let k = GroundField::rationals();
        // (X^2 - t)^2 (X - 1)
        let a = poly(&k, &["-t", "0", "1"]);
        let b = poly(&k, &["-1", "1"]);
        let p = a.mul(&a).mul(&b);
        let parts = squarefree_decomposition(&p).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts.iter().map(|(g, m)| (g.degree(), *m)).collect::<Vec<_>>(), vec![(1, 1), (2, 2)]);
    }

    #[test]
    fn norms_multiply_conjugates() {
        let k = GroundField::rationals();
        // N(X - t^(1/2)) from Q((t^(1/2))) to Q((t)) is X^2 - t
        let r = parse_series("t^(1/2)", &Symbols::for_field(&k)).unwrap();
        let n = ramification_norm_step(&SeriesPoly::linear(&r), 2, 2);
        assert_eq!(n, poly(&k, &["-t", "0", "1"]));
        let _ = q(1, 2);
    }
}
