//! Acceptance criteria 1-8, one PASS/FAIL line each.
//!
//! Runs without the test harness so each criterion prints exactly one line.
//! A failing criterion fails the target unless it is listed in
//! `KNOWN_UNATTAINABLE`; those still print FAIL with their witness, and the
//! values the engine actually derives for them are asserted instead.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tamekey::algebra::GroundField;
use tamekey::cli::scenario::Scenario;
use tamekey::cli::builtin_corpus;
use tamekey::cli::run::{scenario_sequence, scenario_target};
use tamekey::error::Error;
use tamekey::extension::{build_valuation_algebraic, build_value_transcendental, expansion_crosscheck, gauss_crosscheck, standard_pcs, x2_minus_t};
use tamekey::galois::AlgebraicElement;
use tamekey::keyseq::checks::{self, CONJUGATE_CHECK_LIMIT};
use tamekey::keyseq::{homogeneous_approximation, key_sequence, KeySeqOptions, Stopping, Target};
use tamekey::newton::roots::in_common;
use tamekey::newton::{puiseux_roots, RootMode, SeriesPoly};
use tamekey::puiseux::{LazySeries, PuiseuxSeries};
use tamekey::values::{Value, Q64};

use common::{f25, finite, random_series, series};

/// Criterion 8 asks for delta_5 = 5/6 and degrees ending at 60. The field
/// K(a_5) = K(t^(1/60)) already contains t^(5/6), so a_5 absorbs that term
/// and delta_5 = 6/7.
const KNOWN_UNATTAINABLE: [usize; 1] = [8];

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(detail: impl Into<String>) -> Outcome {
    Outcome { pass: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { pass: false, detail: detail.into() }
}

fn q(n: i64, d: i64) -> Value {
    Value::Rat(Q64::new(n, d))
}

fn worked_example() -> Outcome {
    let start = Instant::now();
    let k = GroundField::rationals();
    let x = Target::explicit(series(&k, "t^(1/2) + t^(2/3)"));
    let seq = key_sequence(&x, &k, &KeySeqOptions::default()).unwrap();
    let elapsed = start.elapsed();
    let a: Vec<String> = seq.entries.iter().map(|e| e.a.to_literal()).collect();
    if a != ["0", "t^(1/2)", "t^(1/2) + t^(2/3)"] {
        return fail(format!("a = {a:?}"));
    }
    if seq.deltas() != [q(1, 2), q(2, 3), Value::Inf] {
        return fail(format!("delta = {:?}", seq.deltas()));
    }
    if seq.degrees() != [1, 2, 6] || seq.e_chain() != [1, 2, 6] {
        return fail(format!("deg = {:?}, e = {:?}", seq.degrees(), seq.e_chain()));
    }
    // Q_3 by hand: (X - s)^3 = t^2 with s^2 = t gives
    // (X^3 + 3tX - t^2)^2 = t (3X^2 + t)^2
    let want = [
        vec![series(&k, "-t"), series(&k, "0"), series(&k, "1")],
        ["t^4 - t^3", "-6*t^3", "3*t^2", "-2*t^2", "-3*t", "0", "1"].iter().map(|c| series(&k, c)).collect(),
    ];
    let qs = seq.key_polynomials();
    let q1 = SeriesPoly::x(&k);
    let q2 = SeriesPoly::new(&k, want[0].clone());
    let q3 = SeriesPoly::new(&k, want[1].clone());
    for (i, w) in [q1, q2, q3].iter().enumerate() {
        match &qs[i] {
            Some(got) if got.agrees_with(w) && got.degree() == w.degree() => {}
            other => return fail(format!("Q_{} = {:?}, expected {}", i + 1, other.as_ref().map(|p| p.display()), w.display())),
        }
    }
    if elapsed >= Duration::from_secs(1) {
        return fail(format!("took {elapsed:?}"));
    }
    ok(format!("a = (0, t^(1/2), x), delta = (1/2, 2/3, inf), deg = e = (1, 2, 6), Q_3 matches the hand elimination, {elapsed:?}"))
}

/// A random tame `y` over `F_5` with `K(y)` of the given `(e, f)`.
fn tame_sample(rng: &mut ChaCha8Rng, e: u64, f: usize) -> (PuiseuxSeries, AlgebraicElement) {
    let k = GroundField::prime(5).unwrap();
    let coeffs = if f == 1 { k.clone() } else { f25() };
    loop {
        let y = random_series(&coeffs, e, rng);
        let Ok(el) = AlgebraicElement::new(&k, &y) else { continue };
        let Ok(inv) = el.ramification_invariants() else { continue };
        if inv.e == e && inv.f == f {
            return (y, el);
        }
    }
}

fn mt2_random() -> Outcome {
    let start = Instant::now();
    let k = GroundField::prime(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let pairs: Vec<(u64, usize)> = [2u64, 3, 4, 6].iter().flat_map(|&e| [(e, 1usize), (e, 2)]).collect();
    let opts = KeySeqOptions::default();
    for n in 0..20 {
        let (e, f) = pairs[n % pairs.len()];
        let (y, el) = tame_sample(&mut rng, e, f);
        let poly = el.min_poly().unwrap().project_to(&k).unwrap();
        let x = Target::series(LazySeries::algebraic(poly.clone(), y.clone()));
        let seq = match key_sequence(&x, &k, &opts) {
            Ok(s) => s,
            Err(err) => return fail(format!("x = {} (root of {}): {err}", y.to_literal(), poly.display())),
        };
        let ctx = format!("x = {} (e = {e}, f = {f})", y.to_literal());
        for c in [checks::monotonicity(&seq), checks::ks5(&seq), checks::tameness(&seq), checks::unique_maximal_root(&seq, &x, &opts.policy)] {
            if !c.pass {
                return fail(format!("{ctx}: {}", c.witness.unwrap_or_default()));
            }
        }
        if seq.stopping != Stopping::Equality {
            return fail(format!("{ctx}: stopped with {}", seq.stopping.as_str()));
        }
        // a_n is a root of the minimal polynomial of x over k
        let last = seq.entries.last().unwrap();
        let el_n = AlgebraicElement::new(&k, &last.a.as_exact()).unwrap();
        let qn = el_n.min_poly().unwrap();
        if !(qn.agrees_with(&poly.lift_to(qn.field()).unwrap()) && qn.degree() == poly.degree()) {
            return fail(format!("{ctx}: min_poly(a_n) = {} differs from {}", qn.display(), poly.display()));
        }
        if last.deg != e as usize * f {
            return fail(format!("{ctx}: deg_n = {}", last.deg));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(60) {
        return fail(format!("took {elapsed:?}"));
    }
    ok(format!("20 samples over all (e, f) in {{2,3,4,6}} x {{1,2}}, {elapsed:?}"))
}

fn corpus_sequences() -> Vec<(Scenario, Target, tamekey::keyseq::KeySequence)> {
    builtin_corpus()
        .unwrap()
        .into_iter()
        .map(|sc| {
            let k = sc.ground_field().unwrap();
            let (x, _) = scenario_target(&sc, &k).unwrap();
            let seq = scenario_sequence(&sc, &k, &x).unwrap();
            (sc, x, seq)
        })
        .collect()
}

fn ks5_corpus(corpus: &[(Scenario, Target, tamekey::keyseq::KeySequence)]) -> Outcome {
    let mut n = 0;
    for (sc, _, seq) in corpus {
        for i in 1..seq.entries.len() {
            n += 1;
            if seq.entries[i].kras != seq.entries[i - 1].delta {
                return fail(format!("{}: Kras(a_{}) = {} but delta_{} = {}", sc.name, i + 1, seq.entries[i].kras, i, seq.entries[i - 1].delta));
            }
            // the stored Kras against a fresh conjugate enumeration
            let el = AlgebraicElement::new(&seq.k, &seq.entries[i].a.as_exact()).unwrap();
            if el.degree() <= CONJUGATE_CHECK_LIMIT && el.kras_by_conjugates().unwrap() != seq.entries[i - 1].delta {
                return fail(format!("{}: conjugates give Kras(a_{}) = {}", sc.name, i + 1, el.kras_by_conjugates().unwrap()));
            }
        }
    }
    ok(format!("{n} identities over {} scenarios", corpus.len()))
}

fn completeness_corpus(corpus: &[(Scenario, Target, tamekey::keyseq::KeySequence)]) -> Outcome {
    let mut tested = 0;
    for (sc, x, seq) in corpus {
        let family = checks::sample_family(seq, 6, 100, sc.seed);
        if family.len() != 100 || family.iter().any(|f| f.degree() > 6) {
            return fail(format!("{}: bad family", sc.name));
        }
        let s = checks::completeness(seq, x, &sc.policy(), &family).unwrap();
        tested += s.tested;
        if let Some(v) = s.violations.first() {
            return fail(format!("{}: f = {} has delta {} ({})", sc.name, v.0, v.1, v.2));
        }
    }
    ok(format!("{tested} polynomials, no violations"))
}

fn exkrap() -> Outcome {
    let q = GroundField::rationals();
    let f5 = GroundField::prime(5).unwrap();
    let f7 = GroundField::prime(7).unwrap();
    let cases = [
        ("Q", q.clone(), q.clone()),
        ("Q, coefficients in Q(i)", q, GroundField::cyclotomic(4)),
        ("F_5", f5.clone(), f5.clone()),
        ("F_5, coefficients in F_25", f5, f25()),
        ("F_7, coefficients in F_49", f7, finite(7, "s^2 - 3")),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut with_f2 = 0;
    for (name, k, coeffs) in &cases {
        for _ in 0..50 {
            let e = [1u64, 2, 3, 4, 6][rng.gen_range(0..5)];
            let b = random_series(coeffs, e, &mut rng);
            let h = match homogeneous_approximation(&b, k) {
                Ok(h) => h,
                Err(err) => return fail(format!("{name}: b = {}: {err}", b.to_literal())),
            };
            let (x, y) = in_common(&b, &h.a).unwrap();
            let vb = b.valuation().unwrap();
            if x.v_diff(&y).unwrap() <= vb {
                return fail(format!("{name}: v(b - a) <= v(b) for b = {}, a = {}", b.to_literal(), h.a.to_literal()));
            }
            let el = AlgebraicElement::new(k, &h.a).unwrap();
            // homogeneous: every conjugate pair differs at value v(a)
            let conj = el.conjugates().unwrap().elements;
            let va = el.valuation();
            for (i, c) in conj.iter().enumerate() {
                for d in &conj[i + 1..] {
                    if c.v_diff(d).unwrap() != va {
                        return fail(format!("{name}: a = {} has v(c - d) = {} != v(a)", h.a.to_literal(), c.v_diff(d).unwrap()));
                    }
                }
            }
            let inv = el.ramification_invariants().unwrap();
            if el.degree() != inv.e as usize * inv.f || h.degree != el.degree() {
                return fail(format!("{name}: a = {} has degree {} but e f = {} * {}", h.a.to_literal(), el.degree(), inv.e, inv.f));
            }
            if inv.f >= 2 {
                with_f2 += 1;
            }
        }
    }
    if with_f2 == 0 {
        return fail("no sample had f >= 2");
    }
    ok(format!("250 samples over 5 fields, {with_f2} with f >= 2"))
}

fn newton_puiseux() -> Outcome {
    let prec = Q64::from_integer(6);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut summary = Vec::new();
    for k in [GroundField::rationals(), GroundField::prime(5).unwrap()] {
        let (mut done, mut wild) = (0, 0);
        while done < 100 {
            let d = rng.gen_range(1..=6);
            let f = checks::random_k_poly(&k, d, &mut rng);
            if f.degree() == 0 {
                continue;
            }
            let b = match puiseux_roots(&f, prec, RootMode::Auto) {
                Ok(b) => b,
                Err(Error::Wild { .. }) => {
                    wild += 1;
                    continue;
                }
                Err(err) => return fail(format!("f = {}: {err}", f.display())),
            };
            done += 1;
            if !b.reconstructs().unwrap() {
                return fail(format!("f = {}: product of roots differs", f.display()));
            }
            // roots are certified within prec of true roots
            if let Some(v) = b.residual_bounds().unwrap().into_iter().find(|v| *v < Value::Rat(prec)) {
                return fail(format!("f = {}: certified distance {v}", f.display()));
            }
            // root values match the Newton polygon segments
            let flat = |vs: Vec<(Value, usize)>| vs.into_iter().flat_map(|(v, m)| std::iter::repeat(v).take(m)).collect::<Vec<_>>();
            let mut from_np = flat(tamekey::newton::NewtonPolygon::of(&f).unwrap().root_values());
            let mut from_roots = flat(b.values());
            from_np.sort();
            from_roots.sort();
            if from_np != from_roots {
                return fail(format!("f = {}: root values {from_roots:?} vs polygon {from_np:?}", f.display()));
            }
        }
        summary.push(format!("{}: 100 ({wild} wild skipped)", k.describe()));
    }
    ok(summary.join(", "))
}

fn oracles() -> Outcome {
    let k = GroundField::rationals();
    let g = gauss_crosscheck(&k, 100, 7);
    if !g.pass || g.checked != 100 {
        return fail(format!("Gauss: {:?}", g.witness));
    }
    let a1 = build_value_transcendental(&k, &series(&k, "t^(1/2)"), Value::Rank2(Q64::from_integer(1), Q64::from_integer(0)), false).unwrap();
    let e = expansion_crosscheck(&a1, 50, 4, 7);
    if !e.pass || e.checked != 50 {
        return fail(format!("A1 expansion: {:?}", e.witness));
    }
    let a3 = build_valuation_algebraic(&k, &standard_pcs(&k, 12).unwrap(), None).unwrap();
    let v = a3.a3_value(&x2_minus_t(&k)).unwrap();
    // x^2 = t + 2 t^(1/2 + 2/3) + ...
    if v.value != q(7, 6) || !v.stable {
        return fail(format!("A3 value of X^2 - t is {} (stable: {})", v.value, v.stable));
    }
    ok("Gauss 100/100, A1 expansion 50/50, A3 v(X^2 - t) = 7/6 stable")
}

fn pcs_case() -> (Outcome, bool) {
    let k = GroundField::rationals();
    let o = build_valuation_algebraic(&k, &standard_pcs(&k, 12).unwrap(), None).unwrap();
    let x = o.target();
    let opts = KeySeqOptions { max_steps: 6, ..KeySeqOptions::default() };
    let seq = key_sequence(&x, &k, &opts).unwrap();
    let label = o.classify().label();
    // what the construction provably gives
    let derived = seq.deltas() == [q(1, 2), q(2, 3), q(3, 4), q(4, 5), q(6, 7), q(7, 8)]
        && seq.degrees() == [1, 2, 6, 12, 60, 420]
        && label.starts_with("valuation algebraic");
    let deltas = seq.deltas();
    let mut bad = Vec::new();
    for i in 2..=deltas.len() {
        if deltas[i - 1] != q(i as i64, i as i64 + 1) {
            bad.push(format!("delta_{i} = {} (expected {}/{})", deltas[i - 1], i, i + 1));
        }
    }
    if seq.degrees() != [1, 2, 6, 12, 60] {
        bad.push(format!("deg = {:?} (expected [1, 2, 6, 12, 60])", seq.degrees()));
    }
    if !label.starts_with("valuation algebraic") {
        bad.push(format!("classification {label}"));
    }
    let out = if bad.is_empty() { ok(format!("{label}")) } else { fail(bad.join("; ")) };
    (out, derived)
}

fn main() {
    let mut unexpected = Vec::new();
    let mut report = |n: usize, o: Outcome| {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {n}: {}", o.detail);
        if !o.pass && !KNOWN_UNATTAINABLE.contains(&n) {
            unexpected.push(n);
        }
    };
    report(1, worked_example());
    report(2, mt2_random());
    let corpus = corpus_sequences();
    report(3, ks5_corpus(&corpus));
    report(4, completeness_corpus(&corpus));
    report(5, exkrap());
    report(6, newton_puiseux());
    report(7, oracles());
    let (o8, derived) = pcs_case();
    report(8, o8);
    if !derived {
        println!("FAIL criterion 8 (derived): expected delta (1/2, 2/3, 3/4, 4/5, 6/7, 7/8) and deg (1, 2, 6, 12, 60, 420)");
        unexpected.push(8);
    } else {
        println!("note criterion 8: derived values delta = (1/2, 2/3, 3/4, 4/5, 6/7, 7/8), deg = (1, 2, 6, 12, 60, 420) hold");
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
