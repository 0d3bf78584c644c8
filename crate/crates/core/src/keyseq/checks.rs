//! Checks run against a constructed key sequence. Each returns a
//! [`Check`] with a concrete witness on failure.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::GroundField;
use crate::error::{Error, Result};
use crate::galois::AlgebraicElement;
use crate::newton::roots::{in_common, move_series};
use crate::newton::SeriesPoly;
use crate::puiseux::PuiseuxSeries;
use crate::values::{Value, Q64};

use super::{delta, maximal_roots, KeySequence, PrecisionPolicy, Target};

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub pass: bool,
    /// Number of individual comparisons made.
    pub checked: usize,
    pub witness: Option<String>,
}

impl Check {
    fn ok(checked: usize) -> Check {
        Check { pass: true, checked, witness: None }
    }

    fn fail(checked: usize, witness: String) -> Check {
        Check { pass: false, checked, witness: Some(witness) }
    }

    fn from_result(r: Result<Check>) -> Check {
        r.unwrap_or_else(|e| Check::fail(0, format!("error: {e}")))
    }
}

/// Conjugate enumeration above this degree is skipped.
pub const CONJUGATE_CHECK_LIMIT: usize = 64;
/// Maximal roots are recomputed from `Q_i` up to this degree.
pub const ROOT_CHECK_LIMIT: usize = 24;

/// `delta_i` strictly increasing and `v(a_(i+1) - a_i) = delta_i`.
pub fn monotonicity(seq: &KeySequence) -> Check {
    Check::from_result((|| {
        let mut n = 0;
        for (i, w) in seq.entries.windows(2).enumerate() {
            n += 1;
            if w[1].delta <= w[0].delta {
                return Ok(Check::fail(n, format!("delta_{} = {} is not below delta_{} = {}", i + 1, w[0].delta, i + 2, w[1].delta)));
            }
            let (a, b) = in_common(&w[1].a.as_exact(), &w[0].a)?;
            let d = match a.sub(&b).valuation() {
                Ok(v) => v,
                Err(Error::PrecisionExhausted { .. }) => Value::Inf,
                Err(e) => return Err(e),
            };
            if d != w[0].delta {
                return Ok(Check::fail(n, format!("v(a_{} - a_{}) = {} but delta_{} = {}", i + 2, i + 1, d, i + 1, w[0].delta)));
            }
        }
        // degrees strictly increase from the second entry on
        for (i, w) in seq.entries.windows(2).enumerate().skip(1) {
            if w[1].deg <= w[0].deg {
                return Ok(Check::fail(n, format!("deg_{} = {} is not above deg_{} = {}", i + 2, w[1].deg, i + 1, w[0].deg)));
            }
        }
        if let Some(a1) = seq.entries.first() {
            if !a1.a.has_integral_exponents() || a1.a.project_to(&seq.k).is_none() {
                return Ok(Check::fail(n, format!("a_1 = {} is not in K", a1.a.to_literal())));
            }
        }
        Ok(Check::ok(n))
    })())
}

/// `Kras(a_i) = delta_(i-1)` for `i >= 2`.
pub fn ks5(seq: &KeySequence) -> Check {
    let mut n = 0;
    for i in 1..seq.entries.len() {
        n += 1;
        let e = &seq.entries[i];
        let want = &seq.entries[i - 1].delta;
        if e.kras != *want {
            return Check::fail(n, format!("Kras(a_{}) = {} but delta_{} = {} (a_{} = {})", i + 1, e.kras, i, want, i + 1, e.a.to_literal()));
        }
    }
    Check::ok(n)
}

/// `v(b) <= v(b - s b) <= Kras(b)` for every conjugate `s b != b`, and
/// `Kras(b)` from the stabilizer chain equal to the enumerated maximum, for
/// `b = a_i` and `b = a_i - a_(i-1)` up to the conjugate limit.
pub fn krasner_chain(seq: &KeySequence) -> Check {
    Check::from_result((|| {
        let mut n = 0;
        for i in 0..seq.entries.len() {
            let a = seq.entries[i].a.as_exact();
            let mut items = vec![(format!("a_{}", i + 1), a.clone())];
            if i > 0 {
                items.push((format!("a_{} - a_{}", i + 1, i), a.sub(&move_series(&seq.entries[i - 1].a.as_exact(), a.field())?)));
            }
            for (name, b) in items {
                let el = AlgebraicElement::new(&seq.k, &b)?;
                if el.degree() == 1 || el.degree() > CONJUGATE_CHECK_LIMIT {
                    continue;
                }
                let (vb, kras) = (el.valuation(), el.kras());
                let conj = el.conjugates()?;
                let me = &conj.elements[0];
                let mut best: Option<Value> = None;
                for c in conj.elements.iter().skip(1) {
                    n += 1;
                    let d = me.v_diff(c)?;
                    if d < vb || d > kras {
                        return Ok(Check::fail(n, format!("{name} = {}: conjugate {} gives v(b - s b) = {d} outside [v(b), Kras(b)] = [{vb}, {kras}]", b.to_literal(), c.to_literal())));
                    }
                    best = Some(best.map_or(d, |x: Value| x.max(d)));
                }
                n += 1;
                if best != Some(kras) {
                    return Ok(Check::fail(n, format!("{name} = {}: Kras is {kras} from the stabilizer chain but {:?} over conjugates", b.to_literal(), best.map(|v| v.to_string()))));
                }
            }
        }
        Ok(Check::ok(n))
    })())
}

/// `Kras(a_i - a_(i-1)) = delta_(i-1)` for `i >= 2`.
pub fn difference_kras(seq: &KeySequence) -> Check {
    Check::from_result((|| {
        let mut n = 0;
        for i in 1..seq.entries.len() {
            let a = seq.entries[i].a.as_exact();
            let d = a.sub(&move_series(&seq.entries[i - 1].a.as_exact(), a.field())?);
            let kd = AlgebraicElement::new(&seq.k, &d)?.kras();
            n += 1;
            if kd != seq.entries[i - 1].delta {
                return Ok(Check::fail(n, format!("Kras(a_{} - a_{}) = {kd} for a_{} - a_{} = {}, but delta_{} = {}", i + 1, i, i + 1, i, d.to_literal(), i, seq.entries[i - 1].delta)));
            }
        }
        Ok(Check::ok(n))
    })())
}

/// `e_i` prime to the characteristic and `e_i f_i = deg_i`.
pub fn tameness(seq: &KeySequence) -> Check {
    let p = seq.k.characteristic();
    let mut n = 0;
    for (i, e) in seq.entries.iter().enumerate() {
        n += 1;
        if p != 0 && e.e % p == 0 {
            return Check::fail(n, format!("e_{} = {} is divisible by {}", i + 1, e.e, p));
        }
        if e.e as usize * e.f != e.deg {
            return Check::fail(n, format!("e_{} f_{} = {} * {} differs from deg_{} = {}", i + 1, i + 1, e.e, e.f, i + 1, e.deg));
        }
    }
    Check::ok(n)
}

/// Every conjugate `a' != a_i` has `v(x - a') < delta_i`; for small degrees
/// the maximal roots of `Q_i` itself are recomputed and must be `{a_i}`.
pub fn unique_maximal_root(seq: &KeySequence, x: &Target, policy: &PrecisionPolicy) -> Check {
    Check::from_result((|| {
        let mut n = 0;
        for (i, e) in seq.entries.iter().enumerate() {
            if let Some(q) = &e.q {
                if q.degree() <= ROOT_CHECK_LIMIT && q.is_exact() {
                    n += 1;
                    let (d, hits) = maximal_roots(q, x, policy)?;
                    if d != e.delta || hits.len() != 1 {
                        let roots: Vec<String> = hits.iter().map(|r| r.to_literal()).collect();
                        return Ok(Check::fail(
                            n,
                            format!("Q_{} = {}: delta(Q_{}) = {} with maximal roots [{}]; expected delta_{} = {} attained only at a_{} = {}", i + 1, q.display(), i + 1, d, roots.join(", "), i + 1, e.delta, i + 1, e.a.to_literal()),
                        ));
                    }
                    let (h, a) = in_common(&hits[0], &e.a)?;
                    if !e.delta.is_inf() && h.sub(&a).valuation().map(|v| v <= e.delta).unwrap_or(false) {
                        return Ok(Check::fail(n, format!("maximal root {} of Q_{} is not a_{}", hits[0].to_literal(), i + 1, i + 1)));
                    }
                }
            }
            if e.deg > CONJUGATE_CHECK_LIMIT || e.deg == 1 {
                continue;
            }
            let el = AlgebraicElement::new(&seq.k, &e.a.as_exact())?;
            let conj = el.conjugates()?;
            for c in conj.elements.iter().skip(1) {
                n += 1;
                let v = x.distance(c, policy)?;
                if v >= e.delta {
                    return Ok(Check::fail(n, format!("conjugate {} of a_{} has v(x - .) = {} >= delta_{} = {}", c.to_literal(), i + 1, v, i + 1, e.delta)));
                }
            }
        }
        Ok(Check::ok(n))
    })())
}

/// Sampled `z` with `v(x - z) > delta_(i-1)` all have degree at least `deg_i`.
pub fn ks6_sampled(seq: &KeySequence, x: &Target, policy: &PrecisionPolicy, samples: usize, seed: u64) -> Check {
    Check::from_result((|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut n = 0;
        for i in 1..seq.entries.len() {
            let e = &seq.entries[i];
            let Some(lo) = seq.entries[i - 1].delta.as_rat() else { continue };
            let a = e.a.as_exact();
            let field = a.field().clone();
            let base_den = a.exponent_denominator().max(1);
            for _ in 0..samples {
                // a_i plus a random monomial above delta_(i-1)
                let den = base_den * [1u64, 1, 2, 3][rng.gen_range(0..4)];
                if seq.k.characteristic() != 0 && den % seq.k.characteristic() == 0 {
                    continue;
                }
                let step = Q64::new(rng.gen_range(1..=3 * den as i64), den as i64);
                let q = (lo * Q64::from_integer(den as i64)).floor() / Q64::from_integer(den as i64) + step;
                if q <= lo {
                    continue;
                }
                let mut c = seq.k.random(&mut rng);
                if seq.k.is_zero(&c) {
                    c = seq.k.one();
                }
                let m = PuiseuxSeries::monomial(&field, field.lift_from(&seq.k, &c)?, q);
                let z = a.add(&m);
                let vz = x.distance(&z, policy)?;
                if vz <= Value::Rat(lo) {
                    continue;
                }
                let el = AlgebraicElement::new(&seq.k, &z)?;
                n += 1;
                if el.degree() < e.deg {
                    return Ok(Check::fail(n, format!("z = {} has v(x - z) = {} > delta_{} = {} but degree {} < deg_{} = {}", z.to_literal(), vz, i, lo, el.degree(), i + 1, e.deg)));
                }
            }
        }
        Ok(Check::ok(n))
    })())
}

/// A random element of `K` with 1 to 3 terms and exponents in `[-1, 4]`.
pub fn random_k_element<R: Rng + ?Sized>(k: &GroundField, rng: &mut R) -> PuiseuxSeries {
    let n = rng.gen_range(1..=3);
    let mut exps: Vec<i64> = (-1..=4).collect();
    exps.shuffle(rng);
    let terms = exps[..n]
        .iter()
        .map(|&e| {
            let mut c = k.random(rng);
            if k.is_zero(&c) {
                c = k.one();
            }
            (Q64::from_integer(e), c)
        })
        .collect();
    PuiseuxSeries::from_rational_terms(k, terms, None)
}

/// A random polynomial over `K` of degree exactly `d`.
pub fn random_k_poly<R: Rng + ?Sized>(k: &GroundField, d: usize, rng: &mut R) -> SeriesPoly {
    let coeffs = (0..=d)
        .map(|i| if i < d && rng.gen_bool(0.3) { PuiseuxSeries::zero(k) } else { random_k_element(k, rng) })
        .collect();
    SeriesPoly::new(k, coeffs)
}

/// A seeded family of polynomials of degree at most `degree_bound`: random
/// ones plus perturbations and multiples of the `Q_i`.
pub fn sample_family(seq: &KeySequence, degree_bound: usize, samples: usize, seed: u64) -> Vec<SeriesPoly> {
    let k = &seq.k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    let qs: Vec<SeriesPoly> = seq
        .entries
        .iter()
        .filter_map(|e| e.q.clone())
        .filter(|q| q.is_exact() && q.degree() <= degree_bound && q.lies_over(k))
        .filter_map(|q| q.project_to(k))
        .collect();
    while out.len() < samples {
        let structured = !qs.is_empty() && out.len() % 4 == 3;
        let f = if structured {
            let q = qs[rng.gen_range(0..qs.len())].clone();
            let room = degree_bound - q.degree();
            if room > 0 && rng.gen_bool(0.5) {
                let d = rng.gen_range(1..=room);
                q.mul(&random_k_poly(k, d, &mut rng))
            } else {
                // perturb a lower coefficient by a high power of t
                let j = rng.gen_range(0..q.degree());
                let m = PuiseuxSeries::monomial(k, k.one(), Q64::from_integer(rng.gen_range(1..=6)));
                let mut c = q.coeffs().to_vec();
                c[j] = c[j].add(&m);
                SeriesPoly::new(k, c)
            }
        } else {
            let d = rng.gen_range(1..=degree_bound);
            random_k_poly(k, d, &mut rng)
        };
        if f.degree() >= 1 {
            out.push(f);
        }
    }
    out
}

/// Verdict of a bounded completeness or key-polynomial check.
#[derive(Clone, Debug)]
pub struct Sampled {
    pub tested: usize,
    /// `(f, delta(f), reason)` for each uncovered sample.
    pub violations: Vec<(String, String, String)>,
}

impl Sampled {
    pub fn check(&self) -> Check {
        match self.violations.first() {
            None => Check::ok(self.tested),
            Some((f, d, why)) => Check::fail(self.tested, format!("f = {f}: delta(f) = {d}; {why}")),
        }
    }
}

/// `(deg Q, delta(Q))` for every `Q_i` and tail polynomial. `delta(Q_i)` is
/// recomputed from `Q_i` when it is explicit with exact coefficients.
pub fn coverage_table(seq: &KeySequence, x: &Target, policy: &PrecisionPolicy) -> Result<Vec<(usize, Value)>> {
    let mut out = Vec::new();
    for e in &seq.entries {
        let d = match &e.q {
            Some(q) if q.is_exact() && !e.delta.is_inf() && q.degree() <= ROOT_CHECK_LIMIT => delta(q, x, policy)?,
            _ => e.delta.clone(),
        };
        out.push((e.deg, d));
    }
    for t in &seq.pcs_tail {
        out.push((t.deg, t.delta.clone()));
    }
    Ok(out)
}

/// Each sampled `f` needs some `i` with `deg Q_i <= deg f` and
/// `delta(f) <= delta(Q_i)`.
pub fn completeness(seq: &KeySequence, x: &Target, policy: &PrecisionPolicy, family: &[SeriesPoly]) -> Result<Sampled> {
    let table = coverage_table(seq, x, policy)?;
    let results: Vec<Option<(String, String, String)>> = family
        .par_iter()
        .map(|f| {
            let d = match delta(f, x, policy) {
                Ok(d) => d,
                Err(e) => return Some((f.display(), "?".into(), format!("delta failed: {e}"))),
            };
            let covered = table.iter().any(|(dq, vq)| *dq <= f.degree() && d <= *vq);
            (!covered).then(|| (f.display(), d.to_string(), format!("no Q_i with deg <= {} and delta >= it", f.degree())))
        })
        .collect();
    Ok(Sampled { tested: family.len(), violations: results.into_iter().flatten().collect() })
}

/// Bounded refutation: looks for `f` in `family` with `deg f < deg Q` and
/// `delta(f) >= delta(Q)`.
pub fn is_key_polynomial(q: &SeriesPoly, x: &Target, policy: &PrecisionPolicy, family: &[SeriesPoly]) -> Result<Sampled> {
    let dq = delta(q, x, policy)?;
    let smaller: Vec<&SeriesPoly> = family.iter().filter(|f| f.degree() < q.degree()).collect();
    let results: Vec<Option<(String, String, String)>> = smaller
        .par_iter()
        .map(|f| match delta(f, x, policy) {
            Ok(d) if d >= dq => Some((f.display(), d.to_string(), format!("deg {} < {} and delta(Q) = {}", f.degree(), q.degree(), dq))),
            Ok(_) => None,
            Err(e) => Some((f.display(), "?".into(), format!("delta failed: {e}"))),
        })
        .collect();
    Ok(Sampled { tested: smaller.len(), violations: results.into_iter().flatten().collect() })
}

/// Linear polynomials `X - c` for `count` sampled `c` in `K`.
pub fn linear_family(k: &GroundField, count: usize, seed: u64) -> Vec<SeriesPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| SeriesPoly::linear(&random_k_element(k, &mut rng))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::keyseq::{key_sequence, KeySeqOptions};
    use crate::parse::{parse_series, Symbols};

    fn worked() -> (GroundField, Target, KeySequence) {
        let k = GroundField::rationals();
        let x = Target::explicit(parse_series("t^(1/2) + t^(2/3)", &Symbols::for_field(&k)).unwrap());
        let seq = key_sequence(&x, &k, &KeySeqOptions::default()).unwrap();
        (k, x, seq)
    }

    #[test]
    fn worked_example_passes_every_check() {
        let (_, x, seq) = worked();
        let p = PrecisionPolicy::default();
        assert!(monotonicity(&seq).pass);
        assert!(ks5(&seq).pass);
        assert!(krasner_chain(&seq).pass);
        assert!(tameness(&seq).pass);
        let u = unique_maximal_root(&seq, &x, &p);
        assert!(u.pass, "{u:?}");
        let s = ks6_sampled(&seq, &x, &p, 10, 7);
        assert!(s.pass && s.checked > 0, "{s:?}");
        let fam = sample_family(&seq, 6, 40, 3);
        let c = completeness(&seq, &x, &p, &fam).unwrap().check();
        assert!(c.pass, "{c:?}");
    }

    #[test]
    fn corrupted_key_polynomial_is_caught() {
        let (k, x, mut seq) = worked();
        let sym = Symbols::for_field(&k);
        let t2 = parse_series("-t^2", &sym).unwrap();
        let q = seq.entries[1].q.as_ref().unwrap();
        let mut c = q.coeffs().to_vec();
        c[0] = t2;
        seq.entries[1].q = Some(SeriesPoly::new(&k, c));
        let u = unique_maximal_root(&seq, &x, &PrecisionPolicy::default());
        assert!(!u.pass);
        assert!(u.witness.unwrap().contains("delta(Q_2) = 1/2"));
    }

    #[test]
    fn key_polynomial_verdicts() {
        let (k, x, _) = worked();
        let p = PrecisionPolicy::default();
        let sym = Symbols::for_field(&k);
        let s = |src: &str| parse_series(src, &sym).unwrap();
        let fam = linear_family(&k, 50, 1);
        let q = SeriesPoly::new(&k, vec![s("-t"), PuiseuxSeries::zero(&k), PuiseuxSeries::one(&k)]);
        assert!(is_key_polynomial(&q, &x, &p, &fam).unwrap().violations.is_empty());
        // X^2 - t^2 is beaten by X - t
        let q2 = SeriesPoly::new(&k, vec![s("-t^2"), PuiseuxSeries::zero(&k), PuiseuxSeries::one(&k)]);
        let mut fam2 = fam.clone();
        fam2.push(SeriesPoly::linear(&s("t")));
        assert!(!is_key_polynomial(&q2, &x, &p, &fam2).unwrap().violations.is_empty());
    }

    #[test]
    fn cubic_is_covered_by_the_quadratic() {
        let (k, x, seq) = worked();
        let p = PrecisionPolicy::default();
        let f = SeriesPoly::new(&k, vec![parse_series("-t", &Symbols::for_field(&k)).unwrap(), PuiseuxSeries::zero(&k), PuiseuxSeries::zero(&k), PuiseuxSeries::one(&k)]);
        assert_eq!(delta(&f, &x, &p).unwrap(), Value::rat(1, 3));
        assert!(completeness(&seq, &x, &p, &[f]).unwrap().violations.is_empty());
    }
}
