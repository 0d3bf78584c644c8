//! Conjugates, minimal polynomials, Krasner constants and ramification data
//! for algebraic elements over `K = k((t))`.
//!
//! Everything goes through an explicit finite group. With `E` a multiple of
//! the exponent denominators and `A` the coefficient field enlarged to
//! contain a primitive `E`-th root of unity `z`, the field
//! `A((t^(1/E)))` is Galois over `K` with group `Gal(A/k) x Z/E`, where
//! `(s, j)` sends `c t^(n/E)` to `s(c) z^(jn) t^(n/E)`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::algebra::ext::{cyclotomic_automorphism, cyclotomic_root_of_unity};
use crate::algebra::{root_of_unity, Elem, GroundField};
use crate::error::{Error, Result};
use crate::newton::roots::{canonical_cmp, move_series};
use crate::newton::spoly::{coefficient_norm, ramification_norm_step, squarefree_decomposition};
use crate::newton::SeriesPoly;
use crate::puiseux::PuiseuxSeries;
use crate::values::{Value, Q64};

/// Minimal polynomials above this degree are not expanded.
pub const DEFAULT_DEGREE_CAP: usize = 64;
/// Orbit products are used up to this degree; the norm route above it.
pub const ORBIT_PRODUCT_LIMIT: usize = 24;
/// Conjugates are enumerated only for groups up to this order.
pub const CONJUGATE_GROUP_LIMIT: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sigma {
    /// `x -> x^(q^i)`, `q = |k|`.
    Frob(u32),
    /// `zeta_N -> zeta_N^u`.
    Cyc(u64),
}

/// An element `(s, j)` of the ambient group, by index into its parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElem {
    pub sigma: usize,
    pub twist: u64,
}

/// The group `Gal(A/k) x Z/E` acting on `A((t^(1/E)))`.
#[derive(Debug)]
pub struct Ambient {
    pub k: GroundField,
    pub field: GroundField,
    pub e: u64,
    sigmas: Vec<Sigma>,
    zeta_powers: OnceLock<Vec<Elem>>,
    zeta_log: OnceLock<BTreeMap<Elem, u64>>,
}

impl Ambient {
    /// Ambient for coefficients in `coeffs` (a field over `k`) and
    /// exponents in `(1/e) Z`.
    pub fn new(k: &GroundField, coeffs: &GroundField, e: u64) -> Result<Ambient> {
        let p = k.characteristic();
        if p != 0 && e % p == 0 {
            return Err(Error::Wild { e, characteristic: p });
        }
        if coeffs.is_finite() {
            if !k.is_subfield_of(coeffs) {
                return Err(Error::FieldMismatch(format!("{} is not over {}", coeffs.describe(), k.describe())));
            }
            let (a, _) = root_of_unity(coeffs, e)?;
            let d = a.absolute_degree() / k.absolute_degree();
            return Ok(Ambient {
                k: k.clone(),
                field: a,
                e,
                sigmas: (0..d as u32).map(Sigma::Frob).collect(),
                zeta_powers: OnceLock::new(),
                zeta_log: OnceLock::new(),
            });
        }
        match (coeffs.cyclotomic_conductor(), k.cyclotomic_conductor()) {
            (Some(n), Some(m)) => {
                let a = GroundField::cyclotomic(n.lcm(&e).lcm(&m));
                let nn = a.cyclotomic_conductor().unwrap();
                let sigmas = (1..=nn.max(1))
                    .filter(|u| u.gcd(&nn) == 1 && (m <= 1 || u % m == 1 % m))
                    .map(Sigma::Cyc)
                    .collect();
                Ok(Ambient { k: k.clone(), field: a, e, sigmas, zeta_powers: OnceLock::new(), zeta_log: OnceLock::new() })
            }
            _ => Err(Error::Unsupported(format!(
                "conjugates over {} need a splitting field that is not built",
                coeffs.describe()
            ))),
        }
    }

    pub fn order(&self) -> usize {
        self.sigmas.len() * self.e as usize
    }

    /// `[A : k]`.
    pub fn residue_degree(&self) -> usize {
        self.sigmas.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElem> + '_ {
        (0..self.sigmas.len()).flat_map(move |s| (0..self.e).map(move |j| GroupElem { sigma: s, twist: j }))
    }

    fn zeta_powers(&self) -> &Vec<Elem> {
        self.zeta_powers.get_or_init(|| {
            let f = &self.field;
            if f.is_finite() {
                let (_, z) = root_of_unity(f, self.e).expect("A contains zeta_E");
                let mut v = Vec::with_capacity(self.e as usize);
                let mut cur = f.one();
                for _ in 0..self.e {
                    v.push(cur.clone());
                    cur = f.mul(&cur, &z);
                }
                v
            } else {
                (0..self.e)
                    .map(|i| cyclotomic_root_of_unity(f, i as i64, self.e).expect("A contains zeta_E"))
                    .collect()
            }
        })
    }

    fn zeta_log(&self) -> &BTreeMap<Elem, u64> {
        self.zeta_log
            .get_or_init(|| self.zeta_powers().iter().enumerate().map(|(i, z)| (z.clone(), i as u64)).collect())
    }

    /// `z^m`.
    pub fn zeta_pow(&self, m: u64) -> Elem {
        self.zeta_powers()[(m % self.e) as usize].clone()
    }

    fn apply_sigma(&self, s: usize, c: &Elem) -> Elem {
        match self.sigmas[s] {
            Sigma::Frob(0) | Sigma::Cyc(1) => c.clone(),
            Sigma::Frob(i) => {
                let q = self.k.order().unwrap();
                self.field.pow_big(c, &q.pow(i))
            }
            Sigma::Cyc(u) => cyclotomic_automorphism(&self.field, u, c),
        }
    }

    /// Moves a series into `A` with numerators over `E`.
    pub fn embed(&self, s: &PuiseuxSeries) -> Result<PuiseuxSeries> {
        let d = s.full_denominator();
        if self.e % d != 0 {
            return Err(Error::InvalidArgument(format!("exponent denominator {d} does not divide {}", self.e)));
        }
        Ok(move_series(s, &self.field)?.at_ram(self.e))
    }

    /// `g(s)` for `s` already embedded.
    pub fn act(&self, g: GroupElem, s: &PuiseuxSeries) -> PuiseuxSeries {
        let f = &self.field;
        let terms = s
            .raw_terms()
            .iter()
            .map(|(n, c)| {
                let sc = self.apply_sigma(g.sigma, c);
                let tw = (g.twist as i64 * n).rem_euclid(self.e as i64) as u64;
                (*n, if tw == 0 { sc } else { f.mul(&sc, &self.zeta_pow(tw)) })
            })
            .collect();
        let prec = s.prec_q().map(|p| (p * Q64::from_integer(self.e as i64)).to_integer());
        PuiseuxSeries::from_terms(f, self.e, terms, prec)
    }

    /// For each `sigma`, the twists `j` fixing every term of `s`, filtered
    /// term by term. Returns the stabilizer sizes after each term.
    fn stabilizer_chain(&self, s: &PuiseuxSeries) -> (Vec<GroupElem>, Vec<usize>) {
        let f = &self.field;
        let e = self.e as i64;
        let mut alive: Vec<GroupElem> = self.elements().collect();
        let mut sizes = Vec::with_capacity(s.num_terms());
        for (n, c) in s.raw_terms() {
            let mut cache: BTreeMap<usize, Option<u64>> = BTreeMap::new();
            if f.contains_in_subfield(&self.k, c) {
                cache.extend((0..self.sigmas.len()).map(|i| (i, Some(0))));
            }
            alive.retain(|g| {
                // need s(c) z^(jn) = c, i.e. z^(jn) = c / s(c)
                let want = *cache.entry(g.sigma).or_insert_with(|| {
                    let sc = self.apply_sigma(g.sigma, c);
                    if &sc == c {
                        Some(0)
                    } else {
                        let r = f.div(c, &sc).ok()?;
                        self.zeta_log().get(&r).copied()
                    }
                });
                match want {
                    None => false,
                    Some(l) => (g.twist as i64 * n).rem_euclid(e) as u64 == l,
                }
            });
            sizes.push(alive.len());
        }
        (alive, sizes)
    }
}

/// Ramification data of `K(a)/K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationInvariants {
    pub e: u64,
    pub f: usize,
    pub tame: bool,
    pub defectless: bool,
}

/// The conjugates of an element with the group elements producing them.
#[derive(Clone, Debug)]
pub struct ConjugateSet {
    pub elements: Vec<PuiseuxSeries>,
    pub acting: Vec<GroupElem>,
}

/// An exact (finite) Puiseux series viewed as an algebraic element over `K`.
#[derive(Debug)]
pub struct AlgebraicElement {
    pub series: PuiseuxSeries,
    pub ambient: Ambient,
    embedded: PuiseuxSeries,
    stabilizer: Vec<GroupElem>,
    chain: Vec<usize>,
    min_poly: OnceLock<std::result::Result<SeriesPoly, String>>,
}

impl AlgebraicElement {
    pub fn new(k: &GroundField, series: &PuiseuxSeries) -> Result<AlgebraicElement> {
        let e = series.exponent_denominator();
        AlgebraicElement::with_ramification(k, series, e)
    }

    /// With exponents read over `(1/e) Z` for a given multiple `e` of the
    /// exponent denominator.
    pub fn with_ramification(k: &GroundField, series: &PuiseuxSeries, e: u64) -> Result<AlgebraicElement> {
        if !series.is_exact() {
            return Err(Error::InvalidArgument("algebraic elements are exact finite series here".into()));
        }
        let ambient = Ambient::new(k, series.field(), e)?;
        let embedded = ambient.embed(series)?;
        let (stabilizer, chain) = ambient.stabilizer_chain(&embedded);
        Ok(AlgebraicElement { series: series.clone(), ambient, embedded, stabilizer, chain, min_poly: OnceLock::new() })
    }

    pub fn k(&self) -> &GroundField {
        &self.ambient.k
    }

    /// `[K(a) : K]`.
    pub fn degree(&self) -> usize {
        self.ambient.order() / self.stabilizer.len()
    }

    pub fn in_k(&self) -> bool {
        self.degree() == 1
    }

    pub fn valuation(&self) -> Value {
        self.series.valuation().unwrap_or(Value::Inf)
    }

    pub fn stabilizer(&self) -> &[GroupElem] {
        &self.stabilizer
    }

    /// Whether `g` fixes `a`.
    pub fn fixed_by(&self, g: GroupElem) -> bool {
        self.stabilizer.binary_search(&g).is_ok()
    }

    /// `Kras(a, K)` from the stabilizer chain: the exponent of the last term
    /// at which the stabilizer shrinks; `v(a)` when `a` lies in `K`.
    pub fn kras(&self) -> Value {
        let order = self.ambient.order();
        let mut last = None;
        let mut prev = order;
        for (i, &s) in self.chain.iter().enumerate() {
            if s < prev {
                last = Some(i);
            }
            prev = s;
        }
        match last {
            None => self.valuation(),
            Some(i) => Value::Rat(self.series.exponent_of(self.embedded_num(i))),
        }
    }

    fn embedded_num(&self, i: usize) -> i64 {
        // exponent of term i, expressed over the series' own ram
        let (n, _) = &self.embedded.raw_terms()[i];
        let q = Q64::new(*n, self.ambient.e as i64);
        (q * Q64::from_integer(self.series.ram() as i64)).to_integer()
    }

    /// `max v(a - s a)` over conjugates `s a != a`, by enumeration.
    pub fn kras_by_conjugates(&self) -> Result<Value> {
        let c = self.conjugates()?;
        let mut best: Option<Value> = None;
        for b in &c.elements {
            if *b == self.embedded {
                continue;
            }
            let v = self.embedded.v_diff(b)?;
            best = Some(best.map_or(v.clone(), |x: Value| x.max(v)));
        }
        Ok(best.unwrap_or_else(|| self.valuation()))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.valuation() == self.kras()
    }

    /// The distinct conjugates, identity first, the rest in canonical order.
    pub fn conjugates(&self) -> Result<ConjugateSet> {
        if self.ambient.order() > CONJUGATE_GROUP_LIMIT {
            return Err(Error::DegreeBoundExceeded { degree: self.ambient.order(), bound: CONJUGATE_GROUP_LIMIT, context: "conjugate enumeration" });
        }
        let mut seen: Vec<(PuiseuxSeries, GroupElem)> = Vec::new();
        for g in self.ambient.elements() {
            let b = self.ambient.act(g, &self.embedded);
            if !seen.iter().any(|(x, _)| *x == b) {
                seen.push((b, g));
                if seen.len() == self.degree() {
                    break;
                }
            }
        }
        let first = seen.remove(0);
        seen.sort_by(|a, b| canonical_cmp(&a.0, &b.0));
        seen.insert(0, first);
        Ok(ConjugateSet { acting: seen.iter().map(|x| x.1).collect(), elements: seen.into_iter().map(|x| x.0).collect() })
    }

    /// Ramification index and residue degree of `K(a)/K` from the
    /// stabilizer: `e = E / |H ∩ I|`, `f = [A:k] / |image of H|`.
    pub fn ramification_invariants(&self) -> Result<RamificationInvariants> {
        let inertia = self.stabilizer.iter().filter(|g| g.sigma == 0).count();
        let mut sig: Vec<usize> = self.stabilizer.iter().map(|g| g.sigma).collect();
        sig.dedup();
        let e = self.ambient.e / inertia as u64;
        let f = self.ambient.residue_degree() / sig.len();
        let p = self.k().characteristic();
        let tame = p == 0 || e % p != 0;
        let defectless = match self.min_poly() {
            Ok(m) => m.degree() == e as usize * f,
            Err(Error::DegreeBoundExceeded { .. }) => self.degree() == e as usize * f,
            Err(err) => return Err(err),
        };
        Ok(RamificationInvariants { e, f, tame, defectless })
    }

    /// The minimal polynomial over `K`, monic with coefficients in `k((t))`.
    pub fn min_poly(&self) -> Result<SeriesPoly> {
        self.min_poly_capped(DEFAULT_DEGREE_CAP)
    }

    pub fn min_poly_capped(&self, cap: usize) -> Result<SeriesPoly> {
        let d = self.degree();
        if d > cap {
            return Err(Error::DegreeBoundExceeded { degree: d, bound: cap, context: "minimal polynomial" });
        }
        let r = self
            .min_poly
            .get_or_init(|| {
                let p = if d <= ORBIT_PRODUCT_LIMIT { self.min_poly_by_orbit() } else { self.min_poly_by_norm() };
                p.map_err(|e| e.to_string())
            })
            .clone();
        r.map_err(Error::Assertion)
    }

    /// `prod (X - b)` over the conjugates.
    pub fn min_poly_by_orbit(&self) -> Result<SeriesPoly> {
        let c = self.conjugates()?;
        let mut p = SeriesPoly::one(&self.ambient.field);
        for b in &c.elements {
            p = p.mul(&SeriesPoly::linear(b));
        }
        self.certify_over_k(&p)
    }

    /// `N(X - a)` down the ramification and the coefficient tower, then the
    /// exact root of the power it is of the minimal polynomial.
    pub fn min_poly_by_norm(&self) -> Result<SeriesPoly> {
        let k = self.k().clone();
        let mut p = SeriesPoly::linear(&self.series);
        let mut r = self.series.exponent_denominator();
        let mut rest = r;
        let mut q = 2;
        while rest > 1 {
            while rest % q == 0 {
                p = ramification_norm_step(&p, r, q);
                r /= q;
                rest /= q;
            }
            q += 1;
        }
        let field = p.field().clone();
        if field != k {
            if field.is_subfield_of(&k) || !k.is_subfield_of(&field) {
                // cyclotomic coefficients: fall back to the orbit product
                return self.min_poly_by_orbit();
            }
            p = coefficient_norm(&p, &k)?;
        }
        let m = p.degree() / self.degree();
        if m > 1 {
            let ch = k.characteristic();
            if ch != 0 && m as u64 % ch == 0 {
                return self.min_poly_by_orbit();
            }
            let parts = squarefree_decomposition(&p)?;
            if parts.len() != 1 || parts[0].1 != m {
                return Err(Error::Assertion(format!("norm is not a {m}-th power of an irreducible polynomial")));
            }
            p = parts[0].0.clone();
            p = p.monic(Q64::from_integer(1))?;
        }
        self.certify_over_k(&p)
    }

    fn certify_over_k(&self, p: &SeriesPoly) -> Result<SeriesPoly> {
        let k = self.k();
        let out = if p.field() == k {
            Some(p.clone())
        } else {
            p.project_to(k)
        };
        match out {
            Some(q) if q.lies_over(k) && q.is_monic_exact() && q.degree() == self.degree() => Ok(q),
            _ => Err(Error::Assertion(format!("minimal polynomial of {} is not over K", self.series))),
        }
    }

    /// `v(Q(b))` for each conjugate `b`; `Inf` when exact.
    pub fn min_poly_residuals(&self) -> Result<Vec<Value>> {
        let m = self.min_poly()?;
        let c = self.conjugates()?;
        let m = m.lift_to(&self.ambient.field).or_else(|_| crate::newton::roots::move_poly(&m, &self.ambient.field))?;
        c.elements.iter().map(|b| m.eval(b).valuation()).collect()
    }
}

impl Clone for AlgebraicElement {
    fn clone(&self) -> AlgebraicElement {
        AlgebraicElement::with_ramification(self.k(), &self.series, self.ambient.e).expect("rebuild of a valid element")
    }
}

/// `[K(a):K]` without building conjugates.
pub fn degree_over_k(k: &GroundField, a: &PuiseuxSeries) -> Result<usize> {
    Ok(AlgebraicElement::new(k, a)?.degree())
}

/// Whether the `q`-power map used for Frobenius fits machine integers.
#[allow(dead_code)]
fn frob_exponent(q: &BigUint, i: u32) -> BigUint {
    q.pow(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_series, Symbols};
    use crate::values::q;

    fn el(k: &GroundField, field: &GroundField, lit: &str) -> AlgebraicElement {
        AlgebraicElement::new(k, &parse_series(lit, &Symbols::for_field(field)).unwrap()).unwrap()
    }

    fn poly(field: &GroundField, lits: &[&str]) -> SeriesPoly {
        let sym = Symbols::for_field(field);
        SeriesPoly::new(field, lits.iter().map(|l| parse_series(l, &sym).unwrap()).collect())
    }

    #[test]
    fn square_root_of_t() {
        let k = GroundField::rationals();
        let a = el(&k, &k, "t^(1/2)");
        assert_eq!(a.degree(), 2);
        assert_eq!(a.kras(), Value::rat(1, 2));
        assert_eq!(a.kras_by_conjugates().unwrap(), Value::rat(1, 2));
        assert!(a.is_homogeneous());
        assert_eq!(a.min_poly().unwrap(), poly(&k, &["-t", "0", "1"]));
        let inv = a.ramification_invariants().unwrap();
        assert_eq!(inv, RamificationInvariants { e: 2, f: 1, tame: true, defectless: true });
        let c = a.conjugates().unwrap();
        assert_eq!(c.elements.len(), 2);
        assert_eq!(c.elements[1], a.ambient.embed(&a.series.neg()).unwrap());
    }

    #[test]
    fn residue_extension_element() {
        let k = GroundField::prime(5).unwrap();
        let f25 = crate::algebra::adjoin_root(&k, &crate::algebra::UPoly::from_i64s(&k, &[-2, 0, 1]), "s").unwrap().field;
        let a = el(&k, &f25, "s");
        assert_eq!(a.degree(), 2);
        assert_eq!(a.min_poly().unwrap(), poly(&k, &["-2", "0", "1"]));
        let c = a.conjugates().unwrap();
        let s = f25.generator().unwrap();
        let img = c.elements[1].coeff_at(q(0, 1));
        assert_eq!(a.ambient.field.project_to(&f25, &img), Some(f25.neg(&s)));
        assert_eq!(a.ramification_invariants().unwrap(), RamificationInvariants { e: 1, f: 2, tame: true, defectless: true });
        assert_eq!(a.kras(), Value::rat(0, 1));
    }

    #[test]
    fn worked_example_element() {
        let k = GroundField::rationals();
        let a = el(&k, &k, "t^(1/2) + t^(2/3)");
        assert_eq!(a.degree(), 6);
        assert_eq!(a.kras(), Value::rat(2, 3));
        assert_eq!(a.kras_by_conjugates().unwrap(), Value::rat(2, 3));
        assert!(!a.is_homogeneous());
        let m = a.min_poly().unwrap();
        assert_eq!(m.degree(), 6);
        assert_eq!(a.min_poly_by_norm().unwrap(), m);
        assert!(a.min_poly_residuals().unwrap().iter().all(|v| v.is_inf()));
        let c = a.conjugates().unwrap();
        for (i, x) in c.elements.iter().enumerate() {
            for y in &c.elements[i + 1..] {
                assert_ne!(x, y);
            }
        }
        assert_eq!(a.ramification_invariants().unwrap(), RamificationInvariants { e: 6, f: 1, tame: true, defectless: true });
    }

    #[test]
    fn elements_of_k() {
        let k = GroundField::rationals();
        let a = el(&k, &k, "5");
        assert!(a.in_k());
        assert_eq!(a.kras(), Value::rat(0, 1));
        assert!(a.is_homogeneous());
        assert_eq!(a.min_poly().unwrap(), poly(&k, &["-5", "1"]));
    }

    #[test]
    fn norm_route_on_a_degree_60_element() {
        let k = GroundField::rationals();
        let a = el(&k, &k, "t^(1/2) + t^(2/3) + t^(3/4) + t^(4/5)");
        assert_eq!(a.degree(), 60);
        assert_eq!(a.kras(), Value::rat(4, 5));
        let m = a.min_poly().unwrap();
        assert_eq!(m.degree(), 60);
        assert!(m.eval(&a.series).is_zero());
        let b = el(&k, &k, "t^(1/2) + t^(2/3) + t^(3/4) + t^(4/5) + t^(5/6) + t^(6/7)");
        assert_eq!(b.degree(), 420);
        assert!(matches!(b.min_poly(), Err(Error::DegreeBoundExceeded { .. })));
    }
}
