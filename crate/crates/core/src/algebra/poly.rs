//! Dense univariate polynomials over a [`GroundField`].

use std::fmt;

use num_bigint::BigUint;
use rand::Rng;

use super::field::{Elem, GroundField};
use crate::error::{Error, Result};

/// Coefficients low to high; the leading coefficient is nonzero unless the
/// polynomial is zero (empty coefficient list).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    field: GroundField,
    coeffs: Vec<Elem>,
}

impl UPoly {
    pub fn new(field: GroundField, coeffs: Vec<Elem>) -> UPoly {
        let mut p = UPoly { field, coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(field: &GroundField, cs: &[i64]) -> UPoly {
        UPoly::new(field.clone(), cs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: &GroundField) -> UPoly {
        UPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &GroundField) -> UPoly {
        UPoly::constant(field, field.one())
    }

    pub fn constant(field: &GroundField, c: Elem) -> UPoly {
        UPoly::new(field.clone(), vec![c])
    }

    pub fn x(field: &GroundField) -> UPoly {
        UPoly::monomial(field, field.one(), 1)
    }

    pub fn monomial(field: &GroundField, c: Elem, n: usize) -> UPoly {
        let mut v = vec![field.zero(); n + 1];
        v[n] = c;
        UPoly::new(field.clone(), v)
    }

    /// `X - c`.
    pub fn linear(field: &GroundField, c: &Elem) -> UPoly {
        UPoly::new(field.clone(), vec![field.neg(c), field.one()])
    }

    pub fn random<R: Rng + ?Sized>(field: &GroundField, degree: usize, rng: &mut R) -> UPoly {
        let mut v: Vec<Elem> = (0..=degree).map(|_| field.random(rng)).collect();
        while field.is_zero(&v[degree]) {
            v[degree] = field.random(rng);
        }
        UPoly::new(field.clone(), v)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &GroundField {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.field.is_one(&self.lc())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| f.add(&self.coeff(i), &other.coeff(i))).collect();
        UPoly::new(f.clone(), v)
    }

    pub fn neg(&self) -> UPoly {
        UPoly::new(self.field.clone(), self.coeffs.iter().map(|c| self.field.neg(c)).collect())
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        UPoly::new(self.field.clone(), super::field::vp_mul(&self.field, &self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, c: &Elem) -> UPoly {
        UPoly::new(self.field.clone(), self.coeffs.iter().map(|x| self.field.mul(x, c)).collect())
    }

    pub fn shift(&self, n: usize) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![self.field.zero(); n];
        v.extend(self.coeffs.iter().cloned());
        UPoly::new(self.field.clone(), v)
    }

    pub fn pow(&self, n: u32) -> UPoly {
        let mut r = UPoly::one(&self.field);
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    pub fn monic(&self) -> Result<UPoly> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = self.field.inv(&self.lc())?;
        Ok(self.scale(&inv))
    }

    pub fn divrem(&self, other: &UPoly) -> Result<(UPoly, UPoly)> {
        let (q, r) = super::field::vp_divrem(&self.field, &self.coeffs, &other.coeffs)?;
        Ok((UPoly::new(self.field.clone(), q), UPoly::new(self.field.clone(), r)))
    }

    pub fn rem(&self, other: &UPoly) -> Result<UPoly> {
        Ok(self.divrem(other)?.1)
    }

    /// Division that must leave no remainder.
    pub fn exact_div(&self, other: &UPoly) -> Result<UPoly> {
        let (q, r) = self.divrem(other)?;
        if !r.is_zero() {
            return Err(Error::InvalidArgument("polynomial division is not exact".into()));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &UPoly) -> bool {
        other.rem(self).is_ok_and(|r| r.is_zero())
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic().expect("nonzero")
        }
    }

    /// `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &UPoly) -> Result<(UPoly, UPoly, UPoly)> {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UPoly::one(f), UPoly::zero(f));
        let (mut t0, mut t1) = (UPoly::zero(f), UPoly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = f.inv(&r0.lc())?;
        Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }

    pub fn derivative(&self) -> UPoly {
        let f = &self.field;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
            .collect();
        UPoly::new(f.clone(), v)
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    /// `self(g)`.
    pub fn compose(&self, g: &UPoly) -> UPoly {
        let mut acc = UPoly::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&UPoly::constant(&self.field, c.clone()));
        }
        acc
    }

    /// `self(X + c)`.
    pub fn shift_arg(&self, c: &Elem) -> UPoly {
        self.compose(&UPoly::new(self.field.clone(), vec![c.clone(), self.field.one()]))
    }

    pub fn mul_mod(&self, other: &UPoly, m: &UPoly) -> UPoly {
        self.mul(other).rem(m).expect("nonzero modulus")
    }

    pub fn pow_mod(&self, n: &BigUint, m: &UPoly) -> UPoly {
        let mut result = UPoly::one(&self.field).rem(m).expect("nonzero modulus");
        let base = self.rem(m).expect("nonzero modulus");
        for i in (0..n.bits()).rev() {
            result = result.mul_mod(&result, m);
            if n.bit(i) {
                result = result.mul_mod(&base, m);
            }
        }
        result
    }

    /// Coefficientwise embedding into an overfield.
    pub fn lift_to(&self, target: &GroundField) -> Result<UPoly> {
        let v = self
            .coeffs
            .iter()
            .map(|c| target.lift_from(&self.field, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(UPoly::new(target.clone(), v))
    }

    /// Coefficientwise projection into a subfield, if every coefficient lies there.
    pub fn project_to(&self, target: &GroundField) -> Option<UPoly> {
        let v = self
            .coeffs
            .iter()
            .map(|c| self.field.project_to(target, c))
            .collect::<Option<Vec<_>>>()?;
        Some(UPoly::new(target.clone(), v))
    }

    pub fn map_coeffs(&self, target: &GroundField, g: impl Fn(&Elem) -> Elem) -> UPoly {
        UPoly::new(target.clone(), self.coeffs.iter().map(g).collect())
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let cs = f.display(c);
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let term = if i == 0 {
                cs
            } else if f.is_one(c) {
                mono
            } else if f.is_atomic_display(c) {
                format!("{cs}*{mono}")
            } else {
                format!("({cs})*{mono}")
            };
            parts.push(term);
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) if !rest.starts_with('(') => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                _ => {
                    out.push_str(" + ");
                    out.push_str(p);
                }
            }
        }
        out
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("X"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let f5 = GroundField::prime(5).unwrap();
        let a = UPoly::from_i64s(&f5, &[-1, 0, 1]);
        let b = UPoly::from_i64s(&f5, &[-1, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, UPoly::from_i64s(&f5, &[1, 1]));
        assert_eq!(a.gcd(&b), b);
        let (g, s, t) = a.ext_gcd(&UPoly::from_i64s(&f5, &[2, 1])).unwrap();
        assert_eq!(g, UPoly::one(&f5));
        assert_eq!(s.mul(&a).add(&t.mul(&UPoly::from_i64s(&f5, &[2, 1]))), g);
    }

    #[test]
    fn display_and_eval() {
        let q = GroundField::rationals();
        let p = UPoly::from_i64s(&q, &[-1, 0, 1]);
        assert_eq!(p.to_string(), "X^2 - 1");
        assert!(q.is_zero(&p.eval(&q.from_i64(1))));
        assert_eq!(p.shift_arg(&q.from_i64(1)), UPoly::from_i64s(&q, &[0, 2, 1]));
    }
}
