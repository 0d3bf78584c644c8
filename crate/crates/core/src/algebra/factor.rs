//! Univariate factorization over the supported coefficient fields.
//!
//! Finite towers: squarefree decomposition, distinct-degree, then
//! Cantor-Zassenhaus equal-degree splitting. `Q`: squarefree decomposition,
//! factorization modulo a good prime, Hensel lifting and recombination.
//! Extensions of `Q`: the norm method over the immediate base.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Elem, FieldKind, GroundField};
use super::matrix::{determinant, Ring};
use super::poly::UPoly;
use crate::error::{Error, Result};

/// Default degree bound for factorization over `Q` and its extensions.
pub const RATIONAL_DEGREE_BOUND: usize = 16;

/// Irreducible monic factors with multiplicities, sorted by degree and then
/// by canonical coefficient order.
pub fn factor_univariate(f: &UPoly) -> Result<Vec<(UPoly, usize)>> {
    factor_with_bound(f, RATIONAL_DEGREE_BOUND)
}

pub fn factor_with_bound(f: &UPoly, bound: usize) -> Result<Vec<(UPoly, usize)>> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("cannot factor the zero polynomial".into()));
    }
    let mut out: Vec<(UPoly, usize)> = Vec::new();
    for (g, m) in squarefree_decomposition(f) {
        for h in factor_squarefree(&g, bound)? {
            out.push((h, m));
        }
    }
    sort_factors(&mut out);
    Ok(out)
}

fn sort_factors(v: &mut [(UPoly, usize)]) {
    v.sort_by(|(a, _), (b, _)| a.deg().cmp(&b.deg()).then_with(|| a.coeffs().cmp(b.coeffs())));
}

pub fn is_irreducible(f: &UPoly) -> Result<bool> {
    if f.deg() == 0 {
        return Ok(false);
    }
    let fs = factor_univariate(f)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}

/// Distinct roots in the coefficient field with multiplicities, in
/// canonical order.
pub fn roots_in_field(f: &UPoly) -> Result<Vec<(Elem, usize)>> {
    let field = f.field().clone();
    if f.deg() == 0 {
        return Ok(Vec::new());
    }
    if f.deg() == 1 {
        let r = field.neg(&field.div(&f.coeff(0), &f.coeff(1))?);
        return Ok(vec![(r, 1)]);
    }
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(f) {
        for r in squarefree_roots(&g)? {
            out.push((r, m));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

fn squarefree_roots(g: &UPoly) -> Result<Vec<Elem>> {
    let field = g.field().clone();
    if g.deg() == 0 {
        return Ok(Vec::new());
    }
    let lin: Vec<UPoly> = match field.kind() {
        FieldKind::Prime(_) | FieldKind::Extension { .. } if field.is_finite() => {
            // only the degree-1 part of the distinct-degree split is needed
            let monic = g.monic()?;
            let q = field.order().unwrap();
            let x = UPoly::x(&field);
            let h = x.pow_mod(&q, &monic);
            let lin = h.sub(&x).gcd(&monic);
            if lin.deg() == 0 {
                Vec::new()
            } else {
                equal_degree_split(&lin, 1)?
            }
        }
        FieldKind::Rationals => {
            let (int, _) = to_primitive_integer(g);
            match rational_roots_by_divisors(&int) {
                Some(rs) => rs.into_iter().map(|r| UPoly::linear(&field, &Elem::Rat(r))).collect(),
                None => factor_squarefree(g, usize::MAX)?.into_iter().filter(|h| h.deg() == 1).collect(),
            }
        }
        _ => factor_squarefree(g, RATIONAL_DEGREE_BOUND)?
            .into_iter()
            .filter(|h| h.deg() == 1)
            .collect(),
    };
    lin.iter()
        .map(|h| Ok(field.neg(&field.div(&h.coeff(0), &h.coeff(1))?)))
        .collect()
}

/// `n`-th roots of `c` in its field, canonical (least) first.
pub fn nth_roots(field: &GroundField, c: &Elem, n: u64) -> Result<Vec<Elem>> {
    if n == 0 {
        return Err(Error::InvalidArgument("root of index 0".into()));
    }
    if field.is_zero(c) {
        return Ok(vec![field.zero()]);
    }
    if let Some(rs) = rational_nth_root(field, c, n) {
        return Ok(rs);
    }
    let mut coeffs = vec![field.zero(); n as usize + 1];
    coeffs[0] = field.neg(c);
    coeffs[n as usize] = field.one();
    let p = UPoly::new(field.clone(), coeffs);
    Ok(roots_in_field(&p)?.into_iter().map(|(r, _)| r).collect())
}

/// The canonical `n`-th root: the least root in the canonical order.
pub fn nth_root_in_field(field: &GroundField, c: &Elem, n: u64) -> Result<Option<Elem>> {
    Ok(nth_roots(field, c, n)?.into_iter().next())
}

fn rational_nth_root(field: &GroundField, c: &Elem, n: u64) -> Option<Vec<Elem>> {
    if !field.is_rational() {
        return None;
    }
    let r = c.as_rat()?;
    let n32 = u32::try_from(n).ok()?;
    let neg = r.is_negative();
    if neg && n % 2 == 0 {
        return Some(Vec::new());
    }
    let num = r.numer().abs().nth_root(n32);
    let den = r.denom().nth_root(n32);
    if num.pow(n32) != r.numer().abs() || den.pow(n32) != *r.denom() {
        return Some(Vec::new());
    }
    let root = BigRational::new(if neg { -num } else { num }, den);
    if n % 2 == 0 {
        Some(vec![Elem::Rat(root.clone()), Elem::Rat(-root)])
    } else {
        Some(vec![Elem::Rat(root)])
    }
}

// ---- squarefree decomposition ----------------------------------------------------

/// Pairs `(g, m)` of pairwise coprime monic squarefree `g` with
/// `f = lc * prod g^m`.
pub fn squarefree_decomposition(f: &UPoly) -> Vec<(UPoly, usize)> {
    let field = f.field().clone();
    let f = f.monic().expect("nonzero polynomial");
    if f.deg() == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let d = f.derivative();
    let mut c = f.gcd(&d);
    let mut w = f.exact_div(&c).unwrap();
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let z = w.exact_div(&y).unwrap();
        if z.deg() > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y.clone();
        c = c.exact_div(&y).unwrap();
    }
    if c.deg() > 0 {
        // characteristic p: c is a polynomial in X^p
        let p = field.characteristic() as usize;
        let root = pth_root_poly(&c, p);
        for (g, m) in squarefree_decomposition(&root) {
            out.push((g, m * p));
        }
    }
    out
}

pub fn squarefree_part(f: &UPoly) -> UPoly {
    squarefree_decomposition(f)
        .into_iter()
        .fold(UPoly::one(f.field()), |acc, (g, _)| acc.mul(&g))
}

fn pth_root_poly(c: &UPoly, p: usize) -> UPoly {
    let field = c.field();
    // x^(1/p) = x^(q/p) in a field of order q
    let q = field.order().expect("finite field");
    let e = q / BigUint::from(p as u64);
    let v = (0..=c.deg() / p).map(|i| field.pow_big(&c.coeff(i * p), &e)).collect();
    UPoly::new(field.clone(), v)
}

fn factor_squarefree(g: &UPoly, bound: usize) -> Result<Vec<UPoly>> {
    let g = g.monic()?;
    if g.deg() <= 1 {
        return Ok(vec![g]);
    }
    let field = g.field().clone();
    if field.is_finite() {
        return factor_finite_squarefree(&g);
    }
    match field.kind() {
        FieldKind::Rationals => {
            if g.deg() > bound {
                return Err(Error::DegreeBoundExceeded {
                    degree: g.deg(),
                    bound,
                    context: "factorization over Q",
                });
            }
            factor_rational_squarefree(&g)
        }
        _ => {
            let total = g.deg() * field.absolute_degree();
            if total > bound {
                return Err(Error::DegreeBoundExceeded {
                    degree: total,
                    bound,
                    context: "norm degree for factorization over an extension of Q",
                });
            }
            factor_by_norm(&g, bound)
        }
    }
}

// ---- finite fields -------------------------------------------------------------

fn factor_finite_squarefree(f: &UPoly) -> Result<Vec<UPoly>> {
    let field = f.field().clone();
    let q = field.order().unwrap();
    let x = UPoly::x(&field);
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(&q, &rest);
        let g = h.sub(&x).gcd(&rest);
        if g.deg() > 0 {
            out.extend(equal_degree_split(&g, d)?);
            rest = rest.exact_div(&g)?;
            h = h.rem(&rest)?;
        }
    }
    if rest.deg() > 0 {
        out.push(rest);
    }
    Ok(out)
}

/// Splits a monic squarefree product of degree-`d` irreducibles.
fn equal_degree_split(g: &UPoly, d: usize) -> Result<Vec<UPoly>> {
    if g.deg() == d {
        return Ok(vec![g.monic()?]);
    }
    let field = g.field().clone();
    let q = field.order().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ g.deg() as u64);
    let qd = q.pow(d as u32);
    loop {
        let a = UPoly::random(&field, g.deg() - 1, &mut rng);
        if a.deg() == 0 {
            continue;
        }
        let b = if field.characteristic() == 2 {
            // absolute trace to F_2 of the residue ring: a + a^2 + ... + a^(2^(kd-1))
            let k = field.absolute_degree() * d;
            let mut acc = a.clone();
            let mut cur = a.clone();
            for _ in 1..k {
                cur = cur.mul_mod(&cur, g);
                acc = acc.add(&cur);
            }
            acc
        } else {
            let e = (&qd - BigUint::one()) / BigUint::from(2u32);
            a.pow_mod(&e, g).sub(&UPoly::one(&field))
        };
        let h = b.gcd(g);
        if h.deg() > 0 && h.deg() < g.deg() {
            let mut out = equal_degree_split(&h, d)?;
            out.extend(equal_degree_split(&g.exact_div(&h)?, d)?);
            return Ok(out);
        }
    }
}

// ---- rationals -------------------------------------------------------------------

type IPoly = Vec<BigInt>;

/// Primitive integer polynomial with positive leading coefficient, and the
/// scalar `s` with `f = s * int`.
pub(crate) fn to_primitive_integer(f: &UPoly) -> (IPoly, BigRational) {
    let mut den = BigInt::one();
    for c in f.coeffs() {
        den = den.lcm(c.as_rat().unwrap().denom());
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c.as_rat().unwrap() * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if ints.last().unwrap().is_negative() {
        g = -g;
    }
    let prim = ints.iter().map(|c| c / &g).collect();
    (prim, BigRational::new(g, den))
}

fn ipoly_to_monic_rational(p: &IPoly) -> UPoly {
    let q = GroundField::rationals();
    let lc = BigRational::from_integer(p.last().unwrap().clone());
    UPoly::new(q, p.iter().map(|c| Elem::Rat(BigRational::from_integer(c.clone()) / &lc)).collect())
}

fn factor_rational_squarefree(f: &UPoly) -> Result<Vec<UPoly>> {
    let (int, _) = to_primitive_integer(f);
    if int.len() - 1 <= 3 {
        if let Some(roots) = rational_roots_by_divisors(&int) {
            let q = GroundField::rationals();
            let mut out = Vec::new();
            let mut rest = f.clone();
            for r in roots {
                let lin = UPoly::linear(&q, &Elem::Rat(r));
                rest = rest.exact_div(&lin)?;
                out.push(lin);
            }
            if rest.deg() > 0 {
                out.push(rest.monic()?);
            }
            return Ok(out);
        }
    }
    Ok(zassenhaus(&int)?.iter().map(ipoly_to_monic_rational).collect())
}

/// All rational roots via the divisor test; `None` when the constant or
/// leading coefficient is too large to enumerate divisors.
fn rational_roots_by_divisors(p: &IPoly) -> Option<Vec<BigRational>> {
    let mut p = p.clone();
    let mut roots = Vec::new();
    if p[0].is_zero() {
        roots.push(BigRational::zero());
        while p[0].is_zero() {
            p.remove(0);
        }
    }
    if p.len() == 1 {
        return Some(roots);
    }
    let a0 = p[0].abs().to_u64().filter(|&v| v < 1_000_000_000_000)?;
    let an = p.last().unwrap().abs().to_u64().filter(|&v| v < 1_000_000_000_000)?;
    let da = divisors(a0);
    let dn = divisors(an);
    let mut cands: Vec<BigRational> = Vec::new();
    for &u in &da {
        for &w in &dn {
            if num_integer::gcd(u, w) != 1 {
                continue;
            }
            for s in [1i64, -1] {
                cands.push(BigRational::new(BigInt::from(u) * s, BigInt::from(w)));
            }
        }
    }
    cands.sort();
    cands.dedup();
    for r in cands {
        let mut acc = BigRational::zero();
        for c in p.iter().rev() {
            acc = acc * &r + BigRational::from_integer(c.clone());
        }
        if acc.is_zero() {
            roots.push(r);
        }
    }
    Some(roots)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, k) in super::field::factor_u64(n) {
        let cur = out.clone();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            out.extend(cur.iter().map(|d| d * pk));
        }
    }
    out
}

fn ip_mod(a: &[BigInt], m: &BigInt) -> IPoly {
    let mut v: IPoly = a.iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn ip_add(a: &[BigInt], b: &[BigInt]) -> IPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect()
}

fn ip_sub(a: &[BigInt], b: &[BigInt]) -> IPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect()
}

fn ip_mul(a: &[BigInt], b: &[BigInt]) -> IPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Division by a monic `h` modulo `m`.
fn ip_divrem_monic(a: &[BigInt], h: &[BigInt], m: &BigInt) -> (IPoly, IPoly) {
    let mut r = ip_mod(a, m);
    let dh = h.len() - 1;
    if r.len() <= dh {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - dh];
    for i in (0..q.len()).rev() {
        let c = r[i + dh].mod_floor(m);
        if !c.is_zero() {
            for k in 0..=dh {
                r[i + k] -= &c * &h[k];
            }
        }
        q[i] = c;
    }
    r.truncate(dh);
    (ip_mod(&q, m), ip_mod(&r, m))
}

fn symmetric(a: &[BigInt], m: &BigInt) -> IPoly {
    let half = m / 2;
    let mut v: IPoly = a
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn to_fp(a: &[BigInt], fp: &GroundField) -> UPoly {
    UPoly::new(fp.clone(), a.iter().map(|c| fp.from_bigint(c)).collect())
}

fn from_fp(a: &UPoly) -> IPoly {
    a.coeffs().iter().map(|c| BigInt::from(c.as_mod().unwrap())).collect()
}

/// One quadratic Hensel step: from `f = g*h mod m` to `mod m^2`.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (IPoly, IPoly, IPoly, IPoly) {
    let m2 = m * m;
    let e = ip_mod(&ip_sub(f, &ip_mul(g, h)), &m2);
    let (q, r) = ip_divrem_monic(&ip_mul(s, &e), h, &m2);
    let g2 = ip_mod(&ip_add(&ip_add(g, &ip_mul(t, &e)), &ip_mul(&q, g)), &m2);
    let mut h2 = ip_mod(&ip_add(h, &r), &m2);
    // keep h monic of the same degree
    h2.resize(h.len(), BigInt::zero());
    *h2.last_mut().unwrap() = BigInt::one();
    let b = ip_mod(&ip_sub(&ip_add(&ip_mul(s, &g2), &ip_mul(t, &h2)), &[BigInt::one()]), &m2);
    let (c, d) = ip_divrem_monic(&ip_mul(s, &b), &h2, &m2);
    let s2 = ip_mod(&ip_sub(s, &d), &m2);
    let t2 = ip_mod(&ip_sub(&ip_sub(t, &ip_mul(t, &b)), &ip_mul(&c, &g2)), &m2);
    (g2, h2, s2, t2)
}

/// Lifts `f = g*h mod p` (h monic) to `mod p^k`.
fn hensel_lift(f: &[BigInt], g: &UPoly, h: &UPoly, p: u64, k: u32) -> Result<(IPoly, IPoly)> {
    let (one, s, t) = g.ext_gcd(h)?;
    debug_assert!(one.deg() == 0);
    let (mut gi, mut hi, mut si, mut ti) = (from_fp(g), from_fp(h), from_fp(&s), from_fp(&t));
    let pk = BigInt::from(p).pow(k);
    let mut m = BigInt::from(p);
    while m < pk {
        let (a, b, c, d) = hensel_step(f, &gi, &hi, &si, &ti, &m);
        gi = a;
        hi = b;
        si = c;
        ti = d;
        m = &m * &m;
    }
    Ok((ip_mod(&gi, &pk), ip_mod(&hi, &pk)))
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).filter(|&n| super::field::is_prime(n))
}

fn zassenhaus(f: &IPoly) -> Result<Vec<IPoly>> {
    let n = f.len() - 1;
    let lc = f.last().unwrap().clone();
    // choose the good prime with the fewest modular factors among the first few
    let mut best: Option<(u64, Vec<UPoly>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = GroundField::prime(p)?;
        let fbar = to_fp(f, &fp).monic()?;
        if fbar.gcd(&fbar.derivative()).deg() > 0 {
            continue;
        }
        let facs = factor_finite_squarefree(&fbar)?;
        if facs.len() == 1 {
            return Ok(vec![f.clone()]);
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, mut facs) = best.ok_or_else(|| Error::Unsupported("no good prime found".into()))?;
    facs.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
    // coefficient bound for factors of lc * f
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = (BigInt::from(2u32).pow(n as u32) * (norm2.sqrt() + 1u32) * lc.abs()) * 2u32;
    let mut k = 1u32;
    let pb = BigInt::from(p);
    while pb.pow(k) <= bound {
        k += 1;
    }
    let pk = pb.pow(k);
    let fp = GroundField::prime(p)?;
    // lift one factor at a time
    let mut lifted: Vec<IPoly> = Vec::new();
    let mut cur: IPoly = f.clone();
    for i in 0..facs.len() - 1 {
        let h = facs[i].clone();
        let mut g = UPoly::constant(&fp, fp.from_bigint(cur.last().unwrap()));
        for other in &facs[i + 1..] {
            g = g.mul(other);
        }
        let (gl, hl) = hensel_lift(&cur, &g, &h, p, k)?;
        lifted.push(hl);
        cur = gl;
    }
    let lcinv = cur.last().unwrap().modinv(&pk).expect("unit leading coefficient");
    lifted.push(ip_mod(&cur.iter().map(|c| c * &lcinv).collect::<Vec<_>>(), &pk));

    // recombination
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = None;
        for subset in combinations(lifted.len(), s) {
            let rlc = rest.last().unwrap().clone();
            let mut g: IPoly = vec![rlc];
            for &i in &subset {
                g = ip_mod(&ip_mul(&g, &lifted[i]), &pk);
            }
            let g = primitive(&symmetric(&g, &pk));
            if let Some(q) = int_exact_div(&rest, &g) {
                found = Some((subset, g, q));
                break;
            }
        }
        match found {
            Some((subset, g, q)) => {
                out.push(g);
                rest = q;
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, v)| v)
                    .collect();
            }
            None => s += 1,
        }
    }
    if rest.len() > 1 {
        out.push(primitive(&rest));
    }
    Ok(out)
}

fn primitive(a: &[BigInt]) -> IPoly {
    let mut g = BigInt::zero();
    for c in a {
        g = g.gcd(c);
    }
    if a.last().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    a.iter().map(|c| c / &g).collect()
}

fn int_exact_div(a: &[BigInt], b: &[BigInt]) -> Option<IPoly> {
    if b.len() > a.len() {
        return None;
    }
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let (c, rem) = r[i + db].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for k in 0..=db {
            r[i + k] -= &c * &b[k];
        }
        q[i] = c;
    }
    r.iter().all(|c| c.is_zero()).then_some(q)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

// ---- extensions of Q: the norm method ------------------------------------------------

/// `base[X]` as a ring, for determinants of matrices with polynomial entries.
pub struct PolyRing(pub GroundField);

impl Ring for PolyRing {
    type E = UPoly;
    fn zero(&self) -> UPoly {
        UPoly::zero(&self.0)
    }
    fn one(&self) -> UPoly {
        UPoly::one(&self.0)
    }
    fn add(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a.add(b)
    }
    fn neg(&self, a: &UPoly) -> UPoly {
        a.neg()
    }
    fn mul(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a.mul(b)
    }
}

/// `N_{F/base}(g)` for `g` over an extension `F`, as a polynomial over the
/// immediate base.
pub fn norm_to_base(g: &UPoly) -> Result<UPoly> {
    let field = g.field().clone();
    let base = field
        .base()
        .cloned()
        .ok_or_else(|| Error::InvalidArgument("norm requested over a prime field".into()))?;
    let d = field.relative_degree();
    let alpha = field.generator().unwrap();
    // column j: coordinates of alpha^j * g as polynomials over the base
    let mut cols: Vec<Vec<UPoly>> = Vec::with_capacity(d);
    let mut mult = field.one();
    for _ in 0..d {
        let scaled = g.scale(&mult);
        cols.push(split_coordinates(&scaled, &base, d));
        mult = field.mul(&mult, &alpha);
    }
    let m: Vec<Vec<UPoly>> = (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect();
    Ok(determinant(&PolyRing(base), &m))
}

/// Writes `g = sum_i alpha^i G_i(X)` with `G_i` over the immediate base.
pub(crate) fn split_coordinates(g: &UPoly, base: &GroundField, d: usize) -> Vec<UPoly> {
    (0..d)
        .map(|i| {
            UPoly::new(
                base.clone(),
                g.coeffs().iter().map(|c| c.as_vec().expect("extension element")[i].clone()).collect(),
            )
        })
        .collect()
}

fn factor_by_norm(f: &UPoly, bound: usize) -> Result<Vec<UPoly>> {
    let field = f.field().clone();
    let alpha = field.generator().unwrap();
    for s in 0i64..32 {
        let shift = field.mul(&field.from_i64(s), &alpha);
        let g = f.shift_arg(&field.neg(&shift)); // g(X) = f(X - s*alpha)
        let n = norm_to_base(&g)?;
        if n.gcd(&n.derivative()).deg() > 0 {
            continue;
        }
        let facs = factor_with_bound(&n, bound)?;
        if facs.len() == 1 {
            return Ok(vec![f.clone()]);
        }
        let mut out = Vec::new();
        for (ni, _) in facs {
            let h = g.gcd(&ni.lift_to(&field)?);
            if h.deg() > 0 {
                out.push(h.shift_arg(&shift).monic()?);
            }
        }
        return Ok(out);
    }
    Err(Error::Unsupported("no squarefree norm found".into()))
}

/// Random monic polynomial helper for tests and samplers.
pub fn random_monic<R: Rng + ?Sized>(field: &GroundField, degree: usize, rng: &mut R) -> UPoly {
    let mut v: Vec<Elem> = (0..degree).map(|_| field.random(rng)).collect();
    v.push(field.one());
    UPoly::new(field.clone(), v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(f: &GroundField, fs: &[(UPoly, usize)]) -> UPoly {
        fs.iter().fold(UPoly::one(f), |acc, (g, m)| acc.mul(&g.pow(*m as u32)))
    }

    #[test]
    fn small_examples() {
        let f5 = GroundField::prime(5).unwrap();
        let fs = factor_univariate(&UPoly::from_i64s(&f5, &[-1, 0, 1])).unwrap();
        assert_eq!(fs, vec![(UPoly::from_i64s(&f5, &[1, 1]), 1), (UPoly::from_i64s(&f5, &[-1, 1]), 1)]);
        // no square root of 2 among 0..4
        assert!((0..5).all(|a| (a * a) % 5 != 2));
        assert!(is_irreducible(&UPoly::from_i64s(&f5, &[-2, 0, 1])).unwrap());
        let q = GroundField::rationals();
        assert_eq!(factor_univariate(&UPoly::x(&q)).unwrap(), vec![(UPoly::x(&q), 1)]);
    }

    #[test]
    fn nth_roots_canonical() {
        let f5 = GroundField::prime(5).unwrap();
        assert_eq!(nth_root_in_field(&f5, &Elem::Mod(4), 2).unwrap(), Some(Elem::Mod(2)));
        let q = GroundField::rationals();
        assert_eq!(nth_root_in_field(&q, &q.one(), 3).unwrap(), Some(q.one()));
        assert_eq!(nth_root_in_field(&q, &q.from_i64(2), 2).unwrap(), None);
        assert!(nth_root_in_field(&q, &q.one(), 0).is_err());
    }

    #[test]
    fn rational_zassenhaus() {
        let q = GroundField::rationals();
        // (X^4 + 1)(X^3 - 2)(X^2 - 3X + 7), each irreducible over Q
        let a = UPoly::from_i64s(&q, &[1, 0, 0, 0, 1]);
        let b = UPoly::from_i64s(&q, &[-2, 0, 0, 1]);
        let c = UPoly::from_i64s(&q, &[7, -3, 1]);
        let f = a.mul(&b).mul(&c).mul(&c);
        let fs = factor_univariate(&f).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&q, &fs), f);
        // X^4 + 1 splits modulo every prime but not over Q
        assert!(is_irreducible(&a).unwrap());
        let big = UPoly::from_i64s(&q, &[1; 18]);
        assert!(matches!(factor_univariate(&big), Err(Error::DegreeBoundExceeded { .. })));
    }

    #[test]
    fn norm_method_over_cyclotomic() {
        let k = GroundField::cyclotomic(3);
        let q = GroundField::rationals();
        // X^3 - 1 = (X - 1)(X - z)(X - z^2) over Q(zeta_3)
        let f = UPoly::from_i64s(&q, &[-1, 0, 0, 1]).lift_to(&k).unwrap();
        let fs = factor_univariate(&f).unwrap();
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|(g, _)| g.deg() == 1));
        assert_eq!(product(&k, &fs), f);
        // X^2 - 2 stays irreducible over Q(zeta_3)
        let g = UPoly::from_i64s(&q, &[-2, 0, 1]).lift_to(&k).unwrap();
        assert!(is_irreducible(&g).unwrap());
    }

    #[test]
    fn characteristic_two_splitting() {
        let f2 = GroundField::prime(2).unwrap();
        // X^3 + X = X (X + 1)^2
        let f = UPoly::from_i64s(&f2, &[0, 1, 0, 1]);
        let fs = factor_univariate(&f).unwrap();
        assert_eq!(product(&f2, &fs), f);
        let x15 = UPoly::from_i64s(&f2, &[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        let fs = factor_univariate(&x15).unwrap();
        // X^15 - 1 over F_2: 1 + 1 + 2 + 4 + 4 + 4 + ... degrees 1,2,4,4,4
        assert_eq!(fs.iter().map(|(g, _)| g.deg()).collect::<Vec<_>>(), vec![1, 2, 4, 4, 4]);
    }
}
