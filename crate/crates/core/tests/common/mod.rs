#![allow(dead_code)]

use rand::Rng;

use tamekey::algebra::{adjoin_root, GroundField, UPoly};
use tamekey::parse::{parse_series, parse_upoly, Symbols};
use tamekey::puiseux::PuiseuxSeries;

pub fn series(k: &GroundField, src: &str) -> PuiseuxSeries {
    parse_series(src, &Symbols::for_field(k)).unwrap()
}

/// `F_p[s]/(m(s))`.
pub fn finite(p: u64, modulus: &str) -> GroundField {
    let fp = GroundField::prime(p).unwrap();
    let m: UPoly = parse_upoly(modulus, "s", &Symbols::for_field(&fp)).unwrap();
    adjoin_root(&fp, &m, "s").unwrap().field
}

pub fn f25() -> GroundField {
    finite(5, "s^2 - 2")
}

pub fn nonzero<R: Rng + ?Sized>(f: &GroundField, rng: &mut R) -> tamekey::algebra::Elem {
    loop {
        let c = f.random(rng);
        if !f.is_zero(&c) {
            return c;
        }
    }
}

/// A finite series over `coeffs` with exponents in `(1/e)Z`, leading
/// exponent `n0/e` with `gcd(n0, e) = 1`, and one to three further terms.
pub fn random_series<R: Rng + ?Sized>(coeffs: &GroundField, e: u64, rng: &mut R) -> PuiseuxSeries {
    let e = e as i64;
    let mut n = loop {
        let n0 = rng.gen_range(-e..=3 * e);
        if n0 != 0 && num_integer::gcd(n0, e) == 1 {
            break n0;
        }
    };
    let mut terms = vec![(n, nonzero(coeffs, rng))];
    for _ in 0..rng.gen_range(1..=3) {
        n += rng.gen_range(1..=e);
        terms.push((n, nonzero(coeffs, rng)));
    }
    PuiseuxSeries::from_terms(coeffs, e as u64, terms, None)
}
