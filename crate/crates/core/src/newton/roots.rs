//! Newton–Puiseux root finding.
//!
//! Two ways of dealing with a residue polynomial that does not split over
//! the current coefficient field:
//!
//! * split: extend one global coefficient field and start over, so every
//!   root is explicit. Used over finite fields, and over `Q` and its
//!   cyclotomic fields when the factor divides some `X^n - c` and has a root there.
//! * orbit: adjoin a root of the factor on the current branch only. The
//!   resulting root stands for its `[F_leaf : F0]` conjugates.

use std::cmp::Ordering;

use crate::algebra::ext::{adjoin_irreducible, cyclotomic_embed};
use crate::algebra::{factor_univariate, roots_in_field, GroundField, UPoly};
use crate::error::{Error, Result};
use crate::puiseux::PuiseuxSeries;
use crate::values::{Value, Q64};

use super::polygon::NewtonPolygon;
use super::spoly::{coefficient_norm, squarefree_decomposition, SeriesPoly};

/// How to handle residue factors that do not split.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootMode {
    /// Split where possible (finite fields, cyclotomic factors over `Q`),
    /// orbit otherwise.
    Auto,
    /// Always adjoin per branch.
    Orbit,
}

/// A root, or a representative of a Galois orbit of roots.
#[derive(Clone, Debug)]
pub struct PuiseuxRoot {
    pub series: PuiseuxSeries,
    pub multiplicity: usize,
    /// `[field of series : base field]`: the number of conjugate roots this
    /// entry stands for.
    pub orbit: usize,
}

impl PuiseuxRoot {
    pub fn field(&self) -> &GroundField {
        self.series.field()
    }

    /// The exponent denominator of the root.
    pub fn e(&self) -> u64 {
        self.series.exponent_denominator()
    }
}

/// The roots of a polynomial over `K`, to a requested precision.
#[derive(Clone, Debug)]
pub struct RootBundle {
    pub poly: SeriesPoly,
    /// Product of the distinct squarefree factors (the polynomial itself when
    /// its coefficients are truncated).
    pub radical: SeriesPoly,
    /// Field of the input polynomial.
    pub base: GroundField,
    /// Global coefficient field after any restarts.
    pub field: GroundField,
    pub precision: Q64,
    pub roots: Vec<PuiseuxRoot>,
}

struct Ctx {
    mode: RootMode,
    precision: Q64,
    /// The global field; a restart replaces it.
    field: GroundField,
}

enum Flow {
    Restart(GroundField),
}

type Step<T> = std::result::Result<T, StepErr>;

enum StepErr {
    Flow(Flow),
    Fail(Error),
}

impl From<Error> for StepErr {
    fn from(e: Error) -> StepErr {
        StepErr::Fail(e)
    }
}

/// Moves a series into `target`: along the tower, or between cyclotomic fields.
pub fn move_series(s: &PuiseuxSeries, target: &GroundField) -> Result<PuiseuxSeries> {
    if s.field() == target || s.field().is_subfield_of(target) {
        return s.lift_to(target);
    }
    if s.field().cyclotomic_conductor().is_some() && target.cyclotomic_conductor().is_some() {
        let from = s.field().clone();
        let terms = s
            .raw_terms()
            .iter()
            .map(|(e, c)| Ok((*e, cyclotomic_embed(&from, target, c)?)))
            .collect::<Result<Vec<_>>>()?;
        let prec = s.prec_q().map(|p| (p * Q64::from_integer(s.ram() as i64)).to_integer());
        return Ok(PuiseuxSeries::from_terms(target, s.ram(), terms, prec));
    }
    Err(Error::FieldMismatch(format!("cannot move {} into {}", s.field().describe(), target.describe())))
}

/// `f` lifted into `field` when its coefficients live in a subfield, so that
/// root fields get built over `field` rather than a fresh presentation.
pub fn lift_poly_into(f: &SeriesPoly, field: &GroundField) -> Result<SeriesPoly> {
    if f.field() != field && f.field().is_subfield_of(field) {
        move_poly(f, field)
    } else {
        Ok(f.clone())
    }
}

/// The smaller of two fields containing both, when one exists in this model.
pub fn join_fields(a: &GroundField, b: &GroundField) -> Option<GroundField> {
    if a.is_subfield_of(b) {
        return Some(b.clone());
    }
    if b.is_subfield_of(a) {
        return Some(a.clone());
    }
    match (a.cyclotomic_conductor(), b.cyclotomic_conductor()) {
        (Some(m), Some(n)) => Some(GroundField::cyclotomic(num_integer::lcm(m, n))),
        _ => None,
    }
}

/// Both series moved into their joined field.
pub fn in_common(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Result<(PuiseuxSeries, PuiseuxSeries)> {
    let f = join_fields(a.field(), b.field())
        .ok_or_else(|| Error::FieldMismatch(format!("{} and {} share no field", a.field().describe(), b.field().describe())))?;
    Ok((move_series(a, &f)?, move_series(b, &f)?))
}

pub fn move_poly(p: &SeriesPoly, target: &GroundField) -> Result<SeriesPoly> {
    Ok(SeriesPoly::new(target, p.coeffs().iter().map(|c| move_series(c, target)).collect::<Result<Vec<_>>>()?))
}

/// All roots of `f` to absolute precision at least `precision`.
pub fn puiseux_roots(f: &SeriesPoly, precision: Q64, mode: RootMode) -> Result<RootBundle> {
    if f.degree() == 0 {
        return Err(Error::InvalidArgument("roots of a constant".into()));
    }
    let base = f.field().clone();
    let parts: Vec<(SeriesPoly, usize)> = if f.is_exact() {
        match squarefree_decomposition(f) {
            Err(Error::Inseparable(msg)) => {
                // report a wild edge by name when there is one
                for seg in NewtonPolygon::of(f)?.segments {
                    wild_check(&base, seg.gamma)?;
                }
                return Err(Error::Inseparable(msg));
            }
            r => r?,
        }
    } else {
        vec![(f.clone(), 1)]
    };
    let radical = parts.iter().fold(SeriesPoly::one(&base), |acc, (g, _)| acc.mul(g));
    let mut ctx = Ctx { mode, precision, field: base.clone() };
    loop {
        let mut roots = Vec::new();
        let mut restart = None;
        for (g, m) in &parts {
            let g = move_poly(g, &ctx.field)?;
            match branch(&mut ctx, &g, &PuiseuxSeries::zero(&g.field().clone()), None, &mut roots) {
                Ok(()) => {}
                Err(StepErr::Flow(Flow::Restart(l))) => {
                    restart = Some(l);
                    break;
                }
                Err(StepErr::Fail(e)) => return Err(e),
            }
            for r in roots.iter_mut().filter(|r| r.multiplicity == 0) {
                r.multiplicity = *m;
            }
        }
        match restart {
            Some(l) => ctx.field = l,
            None => {
                let field = ctx.field.clone();
                for r in roots.iter_mut() {
                    r.orbit = r.field().degree_over(&field).unwrap_or(1) as usize;
                }
                roots.sort_by(|a, b| canonical_cmp(&a.series, &b.series));
                return Ok(RootBundle { poly: f.clone(), radical, base, field, precision, roots });
            }
        }
    }
}

/// Order on roots: walking the terms, a smaller next exponent comes first,
/// then the canonical coefficient order.
pub fn canonical_cmp(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Ordering {
    let ta = a.terms_q();
    let tb = b.terms_q();
    for (x, y) in ta.iter().zip(tb.iter()) {
        match x.0.cmp(&y.0) {
            Ordering::Equal => {}
            o => return o,
        }
        match x.1.cmp(&y.1) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    ta.len().cmp(&tb.len()).reverse()
}

fn wild_check(field: &GroundField, gamma: Q64) -> Result<()> {
    let p = field.characteristic();
    if p != 0 && (*gamma.denom() as u64) % p == 0 {
        return Err(Error::Wild { e: *gamma.denom() as u64, characteristic: p });
    }
    Ok(())
}

/// Smallest `n <= 840` with `h | X^n - c` for a constant `c`, with `c`.
fn kummer_order(h: &UPoly) -> Option<(u64, crate::algebra::Elem)> {
    let f = h.field();
    let x = UPoly::x(f).rem(h).ok()?;
    let mut r = x.clone();
    for n in 1..=840u64 {
        if r.is_constant() {
            return Some((n, r.coeff(0)));
        }
        r = r.mul(&x).rem(h).ok()?;
    }
    None
}

/// What to do with an irreducible residue factor of degree > 1 on a branch
/// over `field`: `Ok(Some(L))` restarts with `L`, `Ok(None)` adjoins locally.
fn extension_policy(ctx: &Ctx, field: &GroundField, h: &UPoly) -> Result<Option<GroundField>> {
    if ctx.mode == RootMode::Orbit || field != &ctx.field {
        return Ok(None);
    }
    if field.is_finite() {
        let name = format!("u{}", field.depth() + 1);
        return Ok(Some(adjoin_irreducible(field, h, &name).field));
    }
    if let Some(n0) = field.cyclotomic_conductor() {
        if let Some((n, c)) = kummer_order(h) {
            // c a root of unity: h divides X^(n d) - 1 and splits over zeta_(n d)
            let span = num_integer::lcm(2, n0);
            if field.is_one(&field.pow(&c, span)) {
                let d = (1..=span).find(|&d| span % d == 0 && field.is_one(&field.pow(&c, d))).unwrap_or(span);
                return Ok(Some(GroundField::cyclotomic(num_integer::lcm(n0, n * d))));
            }
            let l = GroundField::cyclotomic(num_integer::lcm(n0, n));
            // X^n - 1 splits in l; a scaled factor needs one root of c as well
            if &l == field {
                return Ok(None);
            }
            // a root check past the factoring bound leaves the factor to orbit mode
            let splits = match roots_in_field(&h.lift_to(&l)?) {
                    Ok(rs) => !rs.is_empty(),
                    Err(Error::DegreeBoundExceeded { .. }) => false,
                    Err(e) => return Err(e),
                };
            if splits {
                return Ok(Some(l));
            }
        }
    }
    Ok(None)
}

/// Residue polynomial of `g` along segment `seg`, as a polynomial in `z`.
fn residue_poly(g: &SeriesPoly, np: &NewtonPolygon, seg: &super::polygon::Segment) -> UPoly {
    let f = g.field();
    let idx = np.on_segment(g, seg);
    let mut coeffs = vec![f.zero(); seg.length() + 1];
    for i in idx {
        let (_, c) = g.coeff(i).leading().unwrap();
        coeffs[i - seg.start] = c;
    }
    UPoly::new(f.clone(), coeffs)
}

/// Finds the roots `prefix + y` of `f`, where `g = f(prefix + Y)` and
/// `v(y) > gamma_prev`.
fn branch(ctx: &mut Ctx, g: &SeriesPoly, prefix: &PuiseuxSeries, gamma_prev: Option<Q64>, out: &mut Vec<PuiseuxRoot>) -> Step<()> {
    let field = g.field().clone();
    let np = NewtonPolygon::of(g)?;
    if np.zero_roots > 0 {
        out.push(PuiseuxRoot { series: prefix.clone(), multiplicity: 0, orbit: 1 });
        if np.zero_roots > 1 {
            return Err(StepErr::Fail(Error::InvalidArgument("repeated root in a squarefree factor".into())));
        }
    }
    for seg in np.segments.clone() {
        if gamma_prev.is_some_and(|gp| seg.gamma <= gp) {
            continue;
        }
        wild_check(&field, seg.gamma)?;
        let phi = residue_poly(g, &np, &seg);
        for (h, m) in factor_univariate(&phi)? {
            let (lfield, c) = if h.deg() == 1 {
                (field.clone(), field.neg(&h.coeff(0)))
            } else {
                match extension_policy(ctx, &field, &h)? {
                    Some(l) => return Err(StepErr::Flow(Flow::Restart(l))),
                    None => {
                                        let name = format!("u{}", field.depth() + 1);
                        let adj = adjoin_irreducible(&field, &h, &name);
                        (adj.field, adj.root)
                    }
                }
            };
            let g_l = g.lift_to(&lfield)?;
            let prefix_l = prefix.lift_to(&lfield)?;
            let term = PuiseuxSeries::monomial(&lfield, c, seg.gamma);
            if m == 1 {
                let root = newton_lift(&g_l, &term, seg.gamma, ctx.precision)?;
                out.push(PuiseuxRoot { series: prefix_l.add(&root), multiplicity: 0, orbit: 1 });
            } else {
                let shifted = g_l.shift(&term);
                branch(ctx, &shifted, &prefix_l.add(&term), Some(seg.gamma), out)?;
            }
        }
    }
    Ok(())
}

/// The unique root of `g` with leading term `start` (a simple residue root
/// on the edge of value `gamma`), to absolute precision at least `goal`.
/// Exactness is kept when an iterate is an exact root.
fn newton_lift(g: &SeriesPoly, start: &PuiseuxSeries, gamma: Q64, goal: Q64) -> Result<PuiseuxSeries> {
    let dg = g.derivative();
    let mut y = start.clone();
    loop {
        let gy = g.eval(&y);
        if gy.is_zero() {
            return Ok(y);
        }
        let dgy = dg.eval(&y);
        let vg = gy.valuation()?.as_rat().unwrap();
        let vd = dgy.valuation()?.as_rat().ok_or(Error::DivisionByZero)?;
        let eps = vg - vd;
        let want = goal.max(goal - vd);
        if eps >= want && vg >= goal {
            return Ok(y.truncate(eps));
        }
        let target = (eps * Q64::from_integer(2) - gamma).min(want.max(goal)).max(eps + Q64::new(1, 2 * *eps.denom()));
        let inv = dgy.invert(target - eps)?;
        let corr = gy.mul(&inv).truncate(target);
        y = y.sub(&corr).truncate(target).as_exact();
    }
}

impl RootBundle {
    /// Total number of roots counted with multiplicity and orbits.
    pub fn count(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity * r.orbit).sum()
    }

    pub fn is_split(&self) -> bool {
        self.roots.iter().all(|r| r.orbit == 1)
    }

    /// Every root explicitly, with multiplicity (split bundles only).
    pub fn expanded(&self) -> Result<Vec<PuiseuxSeries>> {
        if !self.is_split() {
            return Err(Error::Unsupported("orbit representatives are not expanded".into()));
        }
        let mut out = Vec::new();
        for r in &self.roots {
            for _ in 0..r.multiplicity {
                out.push(move_series(&r.series, &self.field)?);
            }
        }
        Ok(out)
    }

    /// `lc(f) * prod N(X - r)^mult`, over the base field.
    pub fn product(&self) -> Result<SeriesPoly> {
        let mut acc = SeriesPoly::constant(move_series(&self.poly.lc(), &self.field)?);
        for r in &self.roots {
            let lin = coefficient_norm(&SeriesPoly::linear(&r.series), &self.field)?;
            for _ in 0..r.multiplicity {
                acc = acc.mul(&lin);
            }
        }
        Ok(acc)
    }

    /// Whether the product of the roots agrees with the polynomial wherever
    /// both are known.
    pub fn reconstructs(&self) -> Result<bool> {
        let p = self.product()?;
        let f = move_poly(&self.poly, &self.field)?;
        Ok(p.degree() == f.degree() && p.agrees_with(&f))
    }

    /// `v(f(r)) - v(f'(r))` for each root's known part: the certified
    /// distance to an actual root (`Inf` for exact roots). Measured on the
    /// radical so repeated roots do not degenerate.
    pub fn residual_bounds(&self) -> Result<Vec<Value>> {
        let rad = move_poly(&self.radical, &self.field)?;
        let drad = rad.derivative();
        self.roots
            .iter()
            .map(|r| {
                let y = r.series.as_exact();
                let fy = rad.eval(&y);
                if fy.is_zero() {
                    return Ok(Value::Inf);
                }
                let d = drad.eval(&y).valuation()?;
                Ok(fy.valuation()? - d)
            })
            .collect()
    }

    /// Substitution residuals `v(f(r))`.
    pub fn residuals(&self) -> Result<Vec<Value>> {
        let f = move_poly(&self.poly, &self.field)?;
        self.roots.iter().map(|r| f.eval(&r.series.as_exact()).valuation()).collect()
    }

    /// The largest `v(r_i - r_j)` over distinct roots (`None` for a single
    /// root), read off the Newton polygon of `rad(r + Y)` for each root.
    pub fn separation(&self) -> Result<Option<Value>> {
        let rad = move_poly(&self.radical, &self.field)?;
        let mut best: Option<Value> = None;
        for r in &self.roots {
            let known = r.series.as_exact();
            let eps = r.series.prec_value();
            let rad_r = rad.lift_to(r.field())?;
            let np = NewtonPolygon::of(&rad_r.shift(&known))?;
            let vals = np.root_values();
            let mut it = vals.into_iter();
            let (top, m) = it.next().unwrap();
            if m > 1 || top < eps && !eps.is_inf() {
                return Err(Error::PrecisionExhausted { bound: eps });
            }
            if let Some((v, _)) = it.next() {
                best = Some(match best {
                    Some(b) => b.max(v),
                    None => v,
                });
            }
        }
        Ok(best)
    }

    /// Root values `v(r)` with multiplicities (orbits counted).
    pub fn values(&self) -> Vec<(Value, usize)> {
        self.roots
            .iter()
            .map(|r| (r.series.valuation_lower_bound(), r.multiplicity * r.orbit))
            .collect()
    }
}

/// Split-mode cross-check for [`RootBundle::separation`]: pairwise `v_diff`.
pub fn pairwise_separation(roots: &[PuiseuxSeries]) -> Option<Value> {
    let mut best: Option<Value> = None;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let v = roots[i].v_diff(&roots[j]).unwrap_or_else(|_| roots[i].prec_value().min(roots[j].prec_value()));
            best = Some(match best {
                Some(b) => b.max(v),
                None => v,
            });
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ext::cyclotomic_root_of_unity;
    use crate::parse::{parse_series, Symbols};
    use crate::values::q;

    fn poly(field: &GroundField, lits: &[&str]) -> SeriesPoly {
        let sym = Symbols::for_field(field);
        SeriesPoly::new(field, lits.iter().map(|l| parse_series(l, &sym).unwrap()).collect())
    }

    fn lit(field: &GroundField, l: &str) -> PuiseuxSeries {
        parse_series(l, &Symbols::for_field(field)).unwrap()
    }

    #[test]
    fn square_root_of_t() {
        let k = GroundField::rationals();
        let b = puiseux_roots(&poly(&k, &["-t", "0", "1"]), q(4, 1), RootMode::Auto).unwrap();
        let roots = b.expanded().unwrap();
        assert_eq!(roots, vec![lit(&k, "t^(1/2)"), lit(&k, "-t^(1/2)")]);
        assert!(b.roots.iter().all(|r| r.e() == 2));
        assert!(b.reconstructs().unwrap());
    }

    #[test]
    fn residue_extension_over_f5() {
        let k = GroundField::prime(5).unwrap();
        let b = puiseux_roots(&poly(&k, &["-2", "0", "1"]), q(4, 1), RootMode::Auto).unwrap();
        assert_eq!(b.field.degree_over(&k).unwrap(), 2);
        let roots = b.expanded().unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert_eq!(r.exponent_denominator(), 1);
            let c = r.coeff_at(q(0, 1));
            assert_eq!(b.field.mul(&c, &c), b.field.from_i64(2));
        }
        assert!(b.reconstructs().unwrap());
    }

    #[test]
    fn orbit_mode_over_q() {
        let k = GroundField::rationals();
        let b = puiseux_roots(&poly(&k, &["-2 - t", "0", "1"]), q(4, 1), RootMode::Auto).unwrap();
        assert_eq!(b.roots.len(), 1);
        assert_eq!(b.roots[0].orbit, 2);
        assert_eq!(b.count(), 2);
        assert!(b.reconstructs().unwrap());
        assert!(b.residuals().unwrap().iter().all(|v| *v >= Value::rat(4, 1)));
    }

    #[test]
    fn six_conjugates_of_the_worked_example() {
        // oracle: prod_k (X - z^(3k) t^(1/2) - z^(4k) t^(2/3)) with z a primitive 6th root of unity
        let c6 = GroundField::cyclotomic(6);
        let mut prod = SeriesPoly::one(&c6);
        let mut conj = Vec::new();
        for k in 0..6u64 {
            let r = PuiseuxSeries::from_rational_terms(
                &c6,
                vec![(q(1, 2), cyclotomic_root_of_unity(&c6, 3 * k as i64, 6).unwrap()), (q(2, 3), cyclotomic_root_of_unity(&c6, 4 * k as i64, 6).unwrap())],
                None,
            );
            prod = prod.mul(&SeriesPoly::linear(&r));
            conj.push(r);
        }
        let k = GroundField::rationals();
        let f = prod.project_to(&k).expect("coefficients in Q((t))");
        assert!(f.lies_over(&k));
        let b = puiseux_roots(&f, q(3, 1), RootMode::Auto).unwrap();
        let roots = b.expanded().unwrap();
        assert_eq!(roots.len(), 6);
        for r in &conj {
            let r = move_series(r, &b.field).unwrap();
            assert!(roots.contains(&r), "missing {r}");
        }
        assert!(roots.iter().all(|r| r.is_exact()));
        assert!(b.reconstructs().unwrap());
        assert_eq!(b.separation().unwrap(), Some(Value::rat(2, 3)));
        assert_eq!(pairwise_separation(&roots), Some(Value::rat(2, 3)));
    }

    #[test]
    fn cubic_with_one_edge() {
        let k = GroundField::rationals();
        let f = poly(&k, &["t", "t", "0", "1"]);
        let np = NewtonPolygon::of(&f).unwrap();
        assert_eq!(np.root_values(), vec![(Value::rat(1, 3), 3)]);
        let b = puiseux_roots(&f, q(3, 1), RootMode::Auto).unwrap();
        assert_eq!(b.count(), 3);
        assert!(b.reconstructs().unwrap());
        for (r, v) in b.roots.iter().zip(b.residual_bounds().unwrap()) {
            assert_eq!(r.series.valuation().unwrap(), Value::rat(1, 3));
            assert!(v >= Value::rat(3, 1));
        }
    }

    #[test]
    fn repeated_and_zero_roots() {
        let k = GroundField::rationals();
        let a = poly(&k, &["-t", "0", "1"]);
        let f = a.mul(&a).mul(&SeriesPoly::x(&k));
        let b = puiseux_roots(&f, q(2, 1), RootMode::Auto).unwrap();
        assert_eq!(b.count(), 5);
        let mults: Vec<usize> = b.roots.iter().map(|r| r.multiplicity).collect();
        assert_eq!(mults, vec![2, 2, 1]);
        assert!(b.roots[2].series.is_zero());
        assert!(b.reconstructs().unwrap());
    }

    #[test]
    fn wild_edges_are_rejected() {
        let k = GroundField::prime(5).unwrap();
        let f = poly(&k, &["-t", "t", "0", "0", "0", "1"]);
        assert!(matches!(puiseux_roots(&f, q(2, 1), RootMode::Auto), Err(Error::Wild { .. })));
        let g = poly(&k, &["-t", "0", "0", "0", "0", "1"]);
        assert!(matches!(puiseux_roots(&g, q(2, 1), RootMode::Auto), Err(Error::Wild { .. })));
    }
}
