//! Property tests. Each case draws a seed and builds its inputs from it.

mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tamekey::algebra::factor::random_monic;
use tamekey::algebra::{adjoin_root, factor_univariate, is_irreducible, nth_root_in_field, GroundField, UPoly};
use tamekey::extension::{a3_stability, build_residue_transcendental, build_valuation_algebraic, build_value_transcendental, expansion_crosscheck, standard_pcs, x2_minus_t};
use tamekey::galois::AlgebraicElement;
use tamekey::keyseq::checks;
use tamekey::keyseq::{homogeneous_approximation, key_sequence, KeySeqOptions, Stopping, Target};
use tamekey::newton::{puiseux_roots, NewtonPolygon, RootMode};
use tamekey::puiseux::{LazySeries, PuiseuxSeries};
use tamekey::values::{Value, Q64};

use common::{f25, finite, nonzero, random_series, series};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn fields() -> Vec<GroundField> {
    vec![GroundField::rationals(), GroundField::prime(5).unwrap(), f25(), finite(7, "s^2 - 3"), GroundField::cyclotomic(4)]
}

fn pick_field(r: &mut ChaCha8Rng) -> GroundField {
    let fs = fields();
    fs[r.gen_range(0..fs.len())].clone()
}

/// Ramification indices that stay tame in every field above.
fn tame_e(r: &mut ChaCha8Rng) -> u64 {
    [1u64, 2, 3, 4, 6][r.gen_range(0..5)]
}

fn q(n: i64) -> Q64 {
    Q64::from_integer(n)
}

fn flat(vs: Vec<(Value, usize)>) -> Vec<Value> {
    let mut out: Vec<Value> = vs.into_iter().flat_map(|(v, m)| std::iter::repeat(v).take(m)).collect();
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn factors_multiply_back(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = [GroundField::prime(5).unwrap(), f25(), GroundField::rationals()][r.gen_range(0..3)].clone();
        let f = random_monic(&k, r.gen_range(1..=6), &mut r);
        let parts = factor_univariate(&f).unwrap();
        let mut prod = UPoly::one(&k);
        for (g, m) in &parts {
            prop_assert!(is_irreducible(g).unwrap());
            prop_assert!(g.is_monic());
            prod = prod.mul(&g.pow(*m as u32));
        }
        prop_assert_eq!(prod, f);
    }

    #[test]
    fn adjoined_root_satisfies_modulus(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = [GroundField::prime(5).unwrap(), GroundField::prime(7).unwrap(), f25()][r.gen_range(0..3)].clone();
        let m = loop {
            let m = random_monic(&k, r.gen_range(2..=3), &mut r);
            if is_irreducible(&m).unwrap() {
                break m;
            }
        };
        let adj = adjoin_root(&k, &m, "u").unwrap();
        let lifted = m.lift_to(&adj.field).unwrap();
        prop_assert!(adj.field.is_zero(&lifted.eval(&adj.root)));
        prop_assert_eq!(adj.field.absolute_degree(), k.absolute_degree() * m.deg());
        prop_assert!(k.is_subfield_of(&adj.field));
    }

    #[test]
    fn nth_root_of_a_power(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = pick_field(&mut r);
        let n = r.gen_range(1..=4u64);
        let c = nonzero(&k, &mut r);
        let cn = k.pow(&c, n);
        let root = nth_root_in_field(&k, &cn, n).unwrap().expect("c^n has an n-th root");
        prop_assert_eq!(k.pow(&root, n), cn);
    }

    #[test]
    fn series_valuation_rules(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = pick_field(&mut r);
        let x = random_series(&k, tame_e(&mut r), &mut r);
        let y = random_series(&k, tame_e(&mut r), &mut r);
        let (vx, vy) = (x.valuation().unwrap(), y.valuation().unwrap());
        let sum = x.add(&y);
        if !sum.is_zero() {
            let vs = sum.valuation().unwrap();
            prop_assert!(vs >= vx.min(vy));
            if vx != vy {
                prop_assert_eq!(vs, vx.min(vy));
            }
        }
        prop_assert_eq!(x.mul(&y).valuation().unwrap(), vx + vy);
        let inv = x.invert(q(6)).unwrap();
        prop_assert_eq!(inv.valuation().unwrap(), -vx);
        // x * x^-1 = 1 up to the relative precision
        let one = x.mul(&inv);
        let err = one.sub(&PuiseuxSeries::one(&k));
        prop_assert!(err.valuation_lower_bound() >= Value::Rat(q(6)));
    }

    #[test]
    fn series_root_powers_back(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = [GroundField::rationals(), GroundField::prime(5).unwrap(), f25()][r.gen_range(0..3)].clone();
        let n = [2u64, 3][r.gen_range(0..2)];
        let y = random_series(&k, tame_e(&mut r), &mut r);
        // y^n has an n-th root with the field's leading coefficient
        let s = y.pow(n as u32);
        let root = s.root(n, false, q(5)).unwrap();
        let back = root.pow(n as u32);
        let v = s.valuation().unwrap().as_rat().unwrap();
        prop_assert!(back.sub(&s).valuation_lower_bound() >= Value::Rat(v + q(5)));
    }

    #[test]
    fn lazy_prefixes_are_stable(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = GroundField::prime(5).unwrap();
        let y = random_series(&k, [2u64, 3][r.gen_range(0..2)], &mut r);
        let el = AlgebraicElement::new(&k, &y).unwrap();
        let poly = el.min_poly().unwrap();
        let x = LazySeries::algebraic(poly, y.clone());
        let coarse = x.approx(q(3)).unwrap();
        let fine = x.approx(q(8)).unwrap();
        prop_assert_eq!(fine.truncate(q(3)).as_exact(), coarse.truncate(q(3)).as_exact());
        prop_assert_eq!(fine.first_terms(y.num_terms()).as_exact(), y.lift_to(fine.field()).unwrap());
    }

    #[test]
    fn roots_reconstruct_and_match_the_polygon(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = [GroundField::rationals(), GroundField::prime(5).unwrap()][r.gen_range(0..2)].clone();
        let f = checks::random_k_poly(&k, r.gen_range(1..=5), &mut r);
        let prec = q(5);
        match puiseux_roots(&f, prec, RootMode::Auto) {
            Err(tamekey::error::Error::Wild { .. }) => {}
            Err(e) => prop_assert!(false, "f = {}: {e}", f.display()),
            Ok(b) => {
                prop_assert!(b.reconstructs().unwrap());
                prop_assert_eq!(b.count(), f.degree());
                for v in b.residual_bounds().unwrap() {
                    prop_assert!(v >= Value::Rat(prec));
                }
                prop_assert_eq!(flat(b.values()), flat(NewtonPolygon::of(&f).unwrap().root_values()));
            }
        }
    }

    #[test]
    fn kras_agrees_with_conjugates(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = pick_field(&mut r);
        let coeffs = if k.is_finite() && k.absolute_degree() == 1 && r.gen_bool(0.5) { f25() } else { k.clone() };
        let k = if coeffs == f25() { GroundField::prime(5).unwrap() } else { k };
        let y = random_series(&coeffs, tame_e(&mut r), &mut r);
        let el = AlgebraicElement::new(&k, &y).unwrap();
        let kr = el.kras();
        prop_assert_eq!(kr, el.kras_by_conjugates().unwrap());
        // v(y) <= v(y - sigma y) <= Kras(y) for every conjugate
        let conj = el.conjugates().unwrap().elements;
        let base = &conj[0];
        for c in &conj[1..] {
            let d = base.v_diff(c).unwrap();
            prop_assert!(el.valuation() <= d && d <= kr);
        }
        let inv = el.ramification_invariants().unwrap();
        prop_assert_eq!(el.degree(), inv.e as usize * inv.f);
        prop_assert!(inv.tame && inv.defectless);
    }

    #[test]
    fn homogeneous_approximations_are_homogeneous(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = pick_field(&mut r);
        let b = random_series(&k, tame_e(&mut r), &mut r);
        let h = homogeneous_approximation(&b, &k).unwrap();
        prop_assert!(b.v_diff(&h.a.lift_to(b.field()).unwrap_or(h.a.clone())).unwrap_or(Value::Inf) > b.valuation().unwrap());
        let el = AlgebraicElement::new(&k, &h.a).unwrap();
        prop_assert!(el.is_homogeneous());
        prop_assert_eq!(el.kras(), el.valuation());
        prop_assert_eq!(h.degree, h.e as usize * h.f);
        prop_assert_eq!(h.degree, el.degree());
    }

    #[test]
    fn min_poly_vanishes_on_conjugates(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = pick_field(&mut r);
        let y = random_series(&k, [1u64, 2, 3][r.gen_range(0..3)], &mut r);
        let el = AlgebraicElement::new(&k, &y).unwrap();
        let m = el.min_poly().unwrap();
        prop_assert_eq!(m.degree(), el.degree());
        prop_assert!(m.lies_over(&k));
        for v in el.min_poly_residuals().unwrap() {
            prop_assert!(v.is_inf());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn key_sequences_of_explicit_series(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = [GroundField::rationals(), GroundField::prime(5).unwrap(), GroundField::prime(7).unwrap()][r.gen_range(0..3)].clone();
        let e = [1u64, 2, 3, 6][r.gen_range(0..4)];
        let x = Target::explicit(random_series(&k, e, &mut r));
        let opts = KeySeqOptions::default();
        let seq = key_sequence(&x, &k, &opts).unwrap();
        prop_assert_eq!(seq.stopping, Stopping::Equality);
        for c in [checks::monotonicity(&seq), checks::ks5(&seq), checks::tameness(&seq), checks::krasner_chain(&seq), checks::unique_maximal_root(&seq, &x, &opts.policy)] {
            prop_assert!(c.pass, "{:?}", c.witness);
        }
        let degs = seq.degrees();
        for w in degs.windows(2) {
            prop_assert!(w[1] % w[0] == 0);
        }
        for (en, d) in seq.entries.iter().zip(&degs) {
            prop_assert_eq!(*d, en.e as usize * en.f);
        }
    }

    #[test]
    fn transcendental_oracles_agree_with_expansion(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = GroundField::rationals();
        let a = random_series(&k, [1u64, 2, 3][r.gen_range(0..3)], &mut r);
        let o = if r.gen_bool(0.5) {
            let gamma = Value::Rank2(q(1), Q64::new(r.gen_range(-6..=6), r.gen_range(1..=4)));
            build_value_transcendental(&k, &a, gamma, false).unwrap()
        } else {
            let n = r.gen_range(1..=4);
            build_residue_transcendental(&k, &a, &series(&k, &format!("t^(-{n})")), r.gen_range(1..=3), false).unwrap()
        };
        let c = expansion_crosscheck(&o, 8, 3, seed);
        prop_assert!(c.pass, "{:?}", c.witness);
    }
}

#[test]
fn a3_value_is_stable() {
    let k = GroundField::rationals();
    let o = build_valuation_algebraic(&k, &standard_pcs(&k, 12).unwrap(), None).unwrap();
    let c = a3_stability(&o, &x2_minus_t(&k));
    assert!(c.pass, "{:?}", c.witness);
}
