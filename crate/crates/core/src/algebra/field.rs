//! Exact coefficient fields: `Q`, `F_p`, and simple extension towers.
//!
//! Elements are plain [`Elem`] values; all arithmetic goes through the
//! owning [`GroundField`]. Extension elements are dense coefficient vectors
//! of length `[F : base]`, reduced modulo the tower's monic modulus, so
//! equality of elements is equality of representations.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    Rat(BigRational),
    Mod(u64),
    Vec(Vec<Elem>),
}

impl Elem {
    pub fn as_rat(&self) -> Option<&BigRational> {
        match self {
            Elem::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_mod(&self) -> Option<u64> {
        match self {
            Elem::Mod(m) => Some(*m),
            _ => None,
        }
    }

    pub fn as_vec(&self) -> Option<&[Elem]> {
        match self {
            Elem::Vec(v) => Some(v),
            _ => None,
        }
    }
}

/// Canonical order: rationals by absolute value with the positive sign
/// first, residues by least representative, vectors lexicographically from
/// the constant coefficient up.
impl Ord for Elem {
    fn cmp(&self, other: &Elem) -> Ordering {
        match (self, other) {
            (Elem::Rat(a), Elem::Rat(b)) => a
                .abs()
                .cmp(&b.abs())
                .then(a.is_negative().cmp(&b.is_negative())),
            (Elem::Mod(a), Elem::Mod(b)) => a.cmp(b),
            (Elem::Vec(a), Elem::Vec(b)) => a.cmp(b),
            (a, b) => variant_rank(a).cmp(&variant_rank(b)),
        }
    }
}

impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Elem) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn variant_rank(e: &Elem) -> u8 {
    match e {
        Elem::Rat(_) => 0,
        Elem::Mod(_) => 1,
        Elem::Vec(_) => 2,
    }
}

#[derive(Debug)]
pub enum FieldKind {
    Rationals,
    Prime(u64),
    Extension {
        base: GroundField,
        /// Monic modulus over `base`, coefficients low to high.
        modulus: Vec<Elem>,
        generator: String,
        /// `Some(n)` when this is `Q(zeta_n)` with generator `zeta_n`.
        cyclotomic: Option<u64>,
    },
}

#[derive(Debug)]
pub struct FieldData {
    id: u64,
    kind: FieldKind,
    characteristic: u64,
    /// Degree over the prime field.
    absolute_degree: usize,
    depth: usize,
}

/// A computable field. Cheap to clone; immutable after construction.
#[derive(Clone, Debug)]
pub struct GroundField(Arc<FieldData>);

static NEXT_ID: AtomicU64 = AtomicU64::new(16);

impl PartialEq for GroundField {
    fn eq(&self, other: &GroundField) -> bool {
        match (&self.0.kind, &other.0.kind) {
            (FieldKind::Rationals, FieldKind::Rationals) => true,
            (FieldKind::Prime(p), FieldKind::Prime(q)) => p == q,
            (
                FieldKind::Extension { base: b1, modulus: m1, generator: g1, cyclotomic: c1 },
                FieldKind::Extension { base: b2, modulus: m2, generator: g2, cyclotomic: c2 },
            ) => self.0.id == other.0.id || (c1 == c2 && g1 == g2 && m1 == m2 && b1 == b2),
            _ => false,
        }
    }
}

impl Eq for GroundField {}

impl GroundField {
    pub fn rationals() -> GroundField {
        GroundField(Arc::new(FieldData {
            id: 0,
            kind: FieldKind::Rationals,
            characteristic: 0,
            absolute_degree: 1,
            depth: 0,
        }))
    }

    pub fn prime(p: u64) -> Result<GroundField> {
        if p < 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not a supported prime")));
        }
        Ok(GroundField(Arc::new(FieldData {
            id: p,
            kind: FieldKind::Prime(p),
            characteristic: p,
            absolute_degree: 1,
            depth: 0,
        })))
    }

    /// Builds `base[y]/(modulus)` without checking irreducibility; callers
    /// go through [`crate::algebra::adjoin_root`] for the checked version.
    pub(crate) fn extension_unchecked(
        base: &GroundField,
        modulus: Vec<Elem>,
        generator: &str,
        cyclotomic: Option<u64>,
    ) -> GroundField {
        let degree = modulus.len() - 1;
        debug_assert!(degree >= 1);
        GroundField(Arc::new(FieldData {
            id: NEXT_ID.fetch_add(1, AtomicOrdering::Relaxed),
            characteristic: base.characteristic(),
            absolute_degree: base.absolute_degree() * degree,
            depth: base.depth() + 1,
            kind: FieldKind::Extension {
                base: base.clone(),
                modulus,
                generator: generator.to_string(),
                cyclotomic,
            },
        }))
    }

    /// `Q(zeta_n)`, shared per conductor. `n` with `n = 2 mod 4` is
    /// normalized to `n / 2`; `n <= 2` gives `Q` itself.
    pub fn cyclotomic(n: u64) -> GroundField {
        let n = normalize_conductor(n);
        if n <= 2 {
            return GroundField::rationals();
        }
        static CACHE: OnceLock<Mutex<HashMap<u64, GroundField>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        guard
            .entry(n)
            .or_insert_with(|| {
                let phi = cyclotomic_poly_int(n);
                let modulus = phi
                    .into_iter()
                    .map(|c| Elem::Rat(BigRational::from_integer(c)))
                    .collect();
                GroundField::extension_unchecked(
                    &GroundField::rationals(),
                    modulus,
                    &format!("z{n}"),
                    Some(n),
                )
            })
            .clone()
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0.kind
    }

    pub fn characteristic(&self) -> u64 {
        self.0.characteristic
    }

    pub fn absolute_degree(&self) -> usize {
        self.0.absolute_degree
    }

    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn is_finite(&self) -> bool {
        self.characteristic() != 0
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.kind(), FieldKind::Rationals)
    }

    pub fn base(&self) -> Option<&GroundField> {
        match self.kind() {
            FieldKind::Extension { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn modulus(&self) -> Option<&[Elem]> {
        match self.kind() {
            FieldKind::Extension { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    pub fn generator_name(&self) -> Option<&str> {
        match self.kind() {
            FieldKind::Extension { generator, .. } => Some(generator),
            _ => None,
        }
    }

    pub fn cyclotomic_conductor(&self) -> Option<u64> {
        match self.kind() {
            FieldKind::Rationals => Some(1),
            FieldKind::Extension { cyclotomic, .. } => *cyclotomic,
            FieldKind::Prime(_) => None,
        }
    }

    /// Degree over the immediate base (1 for prime fields).
    pub fn relative_degree(&self) -> usize {
        self.modulus().map_or(1, |m| m.len() - 1)
    }

    pub fn prime_field(&self) -> GroundField {
        match self.kind() {
            FieldKind::Extension { base, .. } => base.prime_field(),
            _ => self.clone(),
        }
    }

    /// The tower from the prime field up to `self`, inclusive.
    pub fn tower(&self) -> Vec<GroundField> {
        let mut out = vec![self.clone()];
        let mut cur = self.clone();
        while let Some(b) = cur.base().cloned() {
            out.push(b.clone());
            cur = b;
        }
        out.reverse();
        out
    }

    pub fn is_subfield_of(&self, other: &GroundField) -> bool {
        other.tower().iter().any(|f| f == self) || self.cyclotomic_inside(other)
    }

    /// `Q(zeta_m)` inside `Q(zeta_n)` with `m | n`, both beyond `Q`.
    fn cyclotomic_inside(&self, other: &GroundField) -> bool {
        match (self.cyclotomic_conductor(), other.cyclotomic_conductor()) {
            (Some(m), Some(n)) => m > 2 && self != other && n % m == 0,
            _ => false,
        }
    }

    /// `[self : sub]` for a field `sub` in the tower of `self`.
    pub fn degree_over(&self, sub: &GroundField) -> Option<usize> {
        if self == sub {
            return Some(1);
        }
        if sub.cyclotomic_inside(self) {
            return Some(self.absolute_degree() / sub.absolute_degree());
        }
        let base = self.base()?;
        base.degree_over(sub).map(|d| d * self.relative_degree())
    }

    /// Number of elements, for finite fields.
    pub fn order(&self) -> Option<BigUint> {
        (self.is_finite()).then(|| BigUint::from(self.characteristic()).pow(self.absolute_degree() as u32))
    }

    // ---- element constructors -------------------------------------------------

    pub fn zero(&self) -> Elem {
        match self.kind() {
            FieldKind::Rationals => Elem::Rat(BigRational::zero()),
            FieldKind::Prime(_) => Elem::Mod(0),
            FieldKind::Extension { base, modulus, .. } => {
                Elem::Vec(vec![base.zero(); modulus.len() - 1])
            }
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        match self.kind() {
            FieldKind::Rationals => Elem::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldKind::Prime(p) => Elem::Mod(n.rem_euclid(*p as i64) as u64),
            FieldKind::Extension { base, .. } => self.lift_base(base.from_i64(n)),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        match self.kind() {
            FieldKind::Rationals => Elem::Rat(BigRational::from_integer(n.clone())),
            FieldKind::Prime(p) => {
                let r = n % BigInt::from(*p);
                let r = if r.is_negative() { r + BigInt::from(*p) } else { r };
                Elem::Mod(r.to_u64().unwrap())
            }
            FieldKind::Extension { base, .. } => self.lift_base(base.from_bigint(n)),
        }
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Elem> {
        let num = self.from_bigint(r.numer());
        let den = self.from_bigint(r.denom());
        self.div(&num, &den)
    }

    /// The generator `y` of `base[y]/(m)`.
    pub fn generator(&self) -> Option<Elem> {
        let FieldKind::Extension { base, modulus, .. } = self.kind() else {
            return None;
        };
        let d = modulus.len() - 1;
        if d == 1 {
            // degree one: y = -m_0
            return Some(self.lift_base(base.neg(&modulus[0])));
        }
        let mut v = vec![base.zero(); d];
        v[1] = base.one();
        Some(Elem::Vec(v))
    }

    /// Embeds an element of the immediate base.
    pub fn lift_base(&self, b: Elem) -> Elem {
        match self.kind() {
            FieldKind::Extension { base, modulus, .. } => {
                let mut v = vec![base.zero(); modulus.len() - 1];
                v[0] = b;
                Elem::Vec(v)
            }
            _ => b,
        }
    }

    /// Embeds an element of any field in the tower below `self`.
    pub fn lift_from(&self, from: &GroundField, e: &Elem) -> Result<Elem> {
        if from == self {
            return Ok(e.clone());
        }
        if from.cyclotomic_inside(self) {
            return super::ext::cyclotomic_embed(from, self, e);
        }
        match self.kind() {
            FieldKind::Extension { base, .. } => Ok(self.lift_base(base.lift_from(from, e)?)),
            _ => Err(Error::FieldMismatch(format!(
                "{} is not a subfield of {}",
                from.describe(),
                self.describe()
            ))),
        }
    }

    /// Projects an element lying in the subfield `to` of the tower back down.
    pub fn project_to(&self, to: &GroundField, e: &Elem) -> Option<Elem> {
        if to == self {
            return Some(e.clone());
        }
        if to.cyclotomic_inside(self) {
            return super::ext::cyclotomic_project(self, to, e);
        }
        let base = self.base()?;
        let v = e.as_vec()?;
        if v[1..].iter().any(|c| !base.is_zero(c)) {
            return None;
        }
        base.project_to(to, &v[0])
    }

    pub fn contains_in_subfield(&self, sub: &GroundField, e: &Elem) -> bool {
        self.project_to(sub, e).is_some()
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        match self.kind() {
            FieldKind::Rationals => {
                let n: i64 = rng.gen_range(-9..=9);
                let d: i64 = rng.gen_range(1..=4);
                Elem::Rat(BigRational::new(n.into(), d.into()))
            }
            FieldKind::Prime(p) => Elem::Mod(rng.gen_range(0..*p)),
            FieldKind::Extension { base, modulus, .. } => {
                Elem::Vec((0..modulus.len() - 1).map(|_| base.random(rng)).collect())
            }
        }
    }

    // ---- arithmetic -----------------------------------------------------------

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Rat(r) => r.is_zero(),
            Elem::Mod(m) => *m == 0,
            Elem::Vec(v) => {
                let base = self.base().expect("vector element outside an extension");
                v.iter().all(|c| base.is_zero(c))
            }
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (self.kind(), a, b) {
            (FieldKind::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (FieldKind::Prime(p), Elem::Mod(x), Elem::Mod(y)) => Elem::Mod((x + y) % p),
            (FieldKind::Extension { base, .. }, Elem::Vec(x), Elem::Vec(y)) => {
                Elem::Vec(x.iter().zip(y).map(|(u, v)| base.add(u, v)).collect())
            }
            _ => panic!("element does not belong to {}", self.describe()),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (self.kind(), a) {
            (FieldKind::Rationals, Elem::Rat(x)) => Elem::Rat(-x),
            (FieldKind::Prime(p), Elem::Mod(x)) => Elem::Mod((p - x) % p),
            (FieldKind::Extension { base, .. }, Elem::Vec(x)) => {
                Elem::Vec(x.iter().map(|u| base.neg(u)).collect())
            }
            _ => panic!("element does not belong to {}", self.describe()),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self.kind(), a, b) {
            (FieldKind::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (FieldKind::Prime(p), Elem::Mod(x), Elem::Mod(y)) => {
                Elem::Mod(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            (FieldKind::Extension { base, modulus, .. }, Elem::Vec(x), Elem::Vec(y)) => {
                let prod = vp_mul(base, x, y);
                Elem::Vec(vp_reduce(base, prod, modulus))
            }
            _ => panic!("element does not belong to {}", self.describe()),
        }
    }

    /// Multiplies by an element of the immediate base.
    pub fn scale_base(&self, a: &Elem, b: &Elem) -> Elem {
        match (self.kind(), a) {
            (FieldKind::Extension { base, .. }, Elem::Vec(x)) => {
                Elem::Vec(x.iter().map(|u| base.mul(u, b)).collect())
            }
            _ => self.mul(a, b),
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (self.kind(), a) {
            (FieldKind::Rationals, Elem::Rat(x)) => Elem::Rat(x.recip()),
            (FieldKind::Prime(p), Elem::Mod(x)) => Elem::Mod(mod_pow(*x, p - 2, *p)),
            (FieldKind::Extension { base, modulus, .. }, Elem::Vec(x)) => {
                let inv = vp_inverse_mod(base, x, modulus)?;
                let mut v = inv;
                v.resize(modulus.len() - 1, base.zero());
                Elem::Vec(v)
            }
            _ => panic!("element does not belong to {}", self.describe()),
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, n: u64) -> Elem {
        self.pow_big(a, &BigUint::from(n))
    }

    pub fn pow_big(&self, a: &Elem, n: &BigUint) -> Elem {
        let mut result = self.one();
        let bits = n.bits();
        for i in (0..bits).rev() {
            result = self.mul(&result, &result);
            if n.bit(i) {
                result = self.mul(&result, a);
            }
        }
        result
    }

    pub fn pow_i64(&self, a: &Elem, n: i64) -> Result<Elem> {
        if n >= 0 {
            Ok(self.pow(a, n as u64))
        } else {
            Ok(self.pow(&self.inv(a)?, n.unsigned_abs()))
        }
    }

    /// `a^p` in characteristic `p`.
    pub fn frobenius(&self, a: &Elem) -> Elem {
        assert!(self.is_finite(), "Frobenius on a field of characteristic 0");
        self.pow(a, self.characteristic())
    }

    /// Multiplicative order of a nonzero element of a finite field.
    pub fn multiplicative_order(&self, a: &Elem) -> Option<u64> {
        let q = self.order()?.to_u64()?;
        let n = q - 1;
        let mut order = n;
        for (p, _) in factor_u64(n) {
            while order % p == 0 && self.is_one(&self.pow(a, order / p)) {
                order /= p;
            }
        }
        Some(order)
    }

    pub fn describe(&self) -> String {
        match self.kind() {
            FieldKind::Rationals => "Q".into(),
            FieldKind::Prime(p) => format!("F_{p}"),
            FieldKind::Extension {
                base,
                cyclotomic: Some(n),
                ..
            } if base.is_rational() => format!("Q(zeta_{n})"),
            FieldKind::Extension { base, modulus, generator, .. } => {
                let m = crate::algebra::UPoly::new(base.clone(), modulus.clone());
                format!("{}[{}]/({})", base.describe(), generator, m.display_in("X"))
            }
        }
    }

    pub fn display(&self, a: &Elem) -> String {
        ElemDisplay { field: self, elem: a }.to_string()
    }

    /// Whether `display` produces a single token that needs no parentheses.
    pub fn is_atomic_display(&self, a: &Elem) -> bool {
        match (self.kind(), a) {
            (FieldKind::Extension { base, .. }, Elem::Vec(v)) => {
                let nz: Vec<usize> = (0..v.len()).filter(|&i| !base.is_zero(&v[i])).collect();
                match nz.as_slice() {
                    [] => true,
                    [0] => base.is_atomic_display(&v[0]),
                    [_] => base.is_one(&v[nz[0]]),
                    _ => false,
                }
            }
            (FieldKind::Rationals, Elem::Rat(r)) => r.is_integer() && !r.is_negative(),
            _ => true,
        }
    }
}

struct ElemDisplay<'a> {
    field: &'a GroundField,
    elem: &'a Elem,
}

impl fmt::Display for ElemDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.field.kind(), self.elem) {
            (FieldKind::Rationals, Elem::Rat(r)) => write!(f, "{r}"),
            (FieldKind::Prime(_), Elem::Mod(m)) => write!(f, "{m}"),
            (FieldKind::Extension { base, generator, .. }, Elem::Vec(v)) => {
                let mut first = true;
                for (i, c) in v.iter().enumerate().rev() {
                    if base.is_zero(c) {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    let cs = base.display(c);
                    let wrapped = if base.is_atomic_display(c) { cs } else { format!("({cs})") };
                    match i {
                        0 => write!(f, "{wrapped}")?,
                        _ => {
                            if !base.is_one(c) {
                                write!(f, "{wrapped}*")?;
                            }
                            if i == 1 {
                                write!(f, "{generator}")?;
                            } else {
                                write!(f, "{generator}^{i}")?;
                            }
                        }
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
            _ => write!(f, "<foreign element>"),
        }
    }
}

// ---- dense vector polynomials over a field ------------------------------------
//
// Small helpers used by extension arithmetic; coefficients low to high, not
// necessarily normalized.

pub(crate) fn vp_trim(f: &GroundField, mut a: Vec<Elem>) -> Vec<Elem> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

pub(crate) fn vp_mul(f: &GroundField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if f.is_zero(y) {
                continue;
            }
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    out
}

/// Reduces modulo a monic `m`, returning exactly `deg m` coefficients.
pub(crate) fn vp_reduce(f: &GroundField, mut a: Vec<Elem>, m: &[Elem]) -> Vec<Elem> {
    let d = m.len() - 1;
    while a.len() > d {
        let c = a.pop().unwrap();
        if f.is_zero(&c) {
            continue;
        }
        let shift = a.len() - d;
        for k in 0..d {
            let t = f.mul(&c, &m[k]);
            a[shift + k] = f.sub(&a[shift + k], &t);
        }
    }
    a.resize(d, f.zero());
    a
}

/// Quotient and remainder; `b` must be nonzero after trimming.
pub(crate) fn vp_divrem(f: &GroundField, a: &[Elem], b: &[Elem]) -> Result<(Vec<Elem>, Vec<Elem>)> {
    let b = vp_trim(f, b.to_vec());
    if b.is_empty() {
        return Err(Error::DivisionByZero);
    }
    let mut r = vp_trim(f, a.to_vec());
    let db = b.len() - 1;
    let lc_inv = f.inv(b.last().unwrap())?;
    if r.len() < b.len() {
        return Ok((Vec::new(), r));
    }
    let mut qv = vec![f.zero(); r.len() - db];
    while r.len() >= b.len() {
        let c = f.mul(r.last().unwrap(), &lc_inv);
        let shift = r.len() - b.len();
        for k in 0..=db {
            let t = f.mul(&c, &b[k]);
            r[shift + k] = f.sub(&r[shift + k], &t);
        }
        qv[shift] = c;
        r.pop();
        r = vp_trim(f, r);
    }
    Ok((qv, r))
}

fn vp_inverse_mod(f: &GroundField, a: &[Elem], m: &[Elem]) -> Result<Vec<Elem>> {
    // extended Euclid: s*a + t*m = g
    let mut r0 = vp_trim(f, m.to_vec());
    let mut r1 = vp_trim(f, a.to_vec());
    let mut s0: Vec<Elem> = Vec::new();
    let mut s1: Vec<Elem> = vec![f.one()];
    while !r1.is_empty() {
        let (qv, r) = vp_divrem(f, &r0, &r1)?;
        let qs = vp_mul(f, &qv, &s1);
        let mut s2 = s0.clone();
        if s2.len() < qs.len() {
            s2.resize(qs.len(), f.zero());
        }
        for (i, c) in qs.iter().enumerate() {
            s2[i] = f.sub(&s2[i], c);
        }
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, vp_trim(f, s2));
    }
    if r0.len() != 1 {
        return Err(Error::Reducible("modulus shares a factor with the element".into()));
    }
    let g_inv = f.inv(&r0[0])?;
    Ok(s0.iter().map(|c| f.mul(c, &g_inv)).collect())
}

// ---- integer helpers ------------------------------------------------------------

pub fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut k = 0;
        while n % d == 0 {
            n /= d;
            k += 1;
        }
        if k > 0 {
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factor_u64(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn normalize_conductor(n: u64) -> u64 {
    if n % 4 == 2 {
        n / 2
    } else {
        n.max(1)
    }
}

/// Integer coefficients of the cyclotomic polynomial `Phi_n`, low to high.
pub fn cyclotomic_poly_int(n: u64) -> Vec<BigInt> {
    // Phi_n = prod_{d | n} (X^d - 1)^{mu(n/d)}
    let mut num: Vec<BigInt> = vec![BigInt::one()];
    let mut dens: Vec<u64> = Vec::new();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        match moebius(n / d) {
            1 => num = int_poly_mul_binomial(&num, d),
            -1 => dens.push(d),
            _ => {}
        }
    }
    for d in dens {
        num = int_poly_div_binomial(&num, d);
    }
    num
}

pub fn moebius(n: u64) -> i32 {
    let f = factor_u64(n);
    if f.iter().any(|&(_, k)| k > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

fn int_poly_mul_binomial(a: &[BigInt], d: u64) -> Vec<BigInt> {
    // a * (X^d - 1)
    let d = d as usize;
    let mut out = vec![BigInt::zero(); a.len() + d];
    for (i, c) in a.iter().enumerate() {
        out[i + d] += c;
        out[i] -= c;
    }
    out
}

fn int_poly_div_binomial(a: &[BigInt], d: u64) -> Vec<BigInt> {
    // exact a / (X^d - 1), top down
    let d = d as usize;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - d];
    for i in (0..q.len()).rev() {
        let c = r[i + d].clone();
        r[i + d] -= &c;
        r[i] += &c;
        q[i] = c;
    }
    debug_assert!(r.iter().all(|c| c.is_zero()));
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f25() -> GroundField {
        let f5 = GroundField::prime(5).unwrap();
        // s^2 = 2
        GroundField::extension_unchecked(&f5, vec![Elem::Mod(3), Elem::Mod(0), Elem::Mod(1)], "s", None)
    }

    #[test]
    fn prime_field_basics() {
        let f = GroundField::prime(5).unwrap();
        assert_eq!(f.from_i64(-1), Elem::Mod(4));
        assert_eq!(f.inv(&Elem::Mod(2)).unwrap(), Elem::Mod(3));
        assert!(f.inv(&Elem::Mod(0)).is_err());
        assert!(GroundField::prime(6).is_err());
    }

    #[test]
    fn extension_generator_squares_to_two() {
        let f = f25();
        let s = f.generator().unwrap();
        assert_eq!(f.mul(&s, &s), f.from_i64(2));
        assert_eq!(f.frobenius(&s), f.neg(&s));
        assert_eq!(f.display(&f.add(&s, &f.from_i64(3))), "s + 3");
        assert_eq!(f.multiplicative_order(&s), Some(8));
    }

    #[test]
    fn cyclotomic_polynomials() {
        let phi12: Vec<i64> = cyclotomic_poly_int(12).iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(phi12, vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly_int(60).len() - 1, 16);
        let q3 = GroundField::cyclotomic(6);
        assert_eq!(q3.cyclotomic_conductor(), Some(3));
        let z = q3.generator().unwrap();
        assert!(q3.is_one(&q3.pow(&z, 3)));
        assert!(GroundField::cyclotomic(2).is_rational());
    }

    fn check_ring_axioms(f: &GroundField, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
            assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
            assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            if !f.is_zero(&a) {
                assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
            }
        }
    }

    #[test]
    fn ring_axioms_on_sample_fields() {
        check_ring_axioms(&GroundField::prime(5).unwrap(), 1);
        check_ring_axioms(&f25(), 2);
        check_ring_axioms(&GroundField::rationals(), 3);
        check_ring_axioms(&GroundField::cyclotomic(5), 4);
    }

    proptest! {
        #[test]
        fn pow_adds_exponents(a in 1u64..5, m in 0u64..30, n in 0u64..30) {
            let f = f25();
            let s = f.add(&f.generator().unwrap(), &f.from_i64(a as i64));
            prop_assert_eq!(f.mul(&f.pow(&s, m), &f.pow(&s, n)), f.pow(&s, m + n));
        }
    }
}
