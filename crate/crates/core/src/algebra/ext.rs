//! Field extensions: checked adjunction, roots of unity, cyclotomic
//! embeddings and automorphisms, and minimal polynomials of field elements.

use super::factor::{is_irreducible, norm_to_base, roots_in_field, squarefree_decomposition};
use super::field::{cyclotomic_poly_int, normalize_conductor, Elem, FieldKind, GroundField};
use super::poly::UPoly;
use crate::error::{Error, Result};

/// `k[y]/(m)` together with the image of `y`.
#[derive(Clone, Debug)]
pub struct Adjoined {
    pub field: GroundField,
    pub root: Elem,
}

/// Adjoins a root of a monic irreducible `m`. Degree one collapses to `k`.
pub fn adjoin_root(k: &GroundField, m: &UPoly, generator: &str) -> Result<Adjoined> {
    if m.field() != k {
        return Err(Error::FieldMismatch("modulus is not defined over the base field".into()));
    }
    let m = m.monic()?;
    if m.deg() == 0 {
        return Err(Error::InvalidArgument("constant modulus".into()));
    }
    if m.deg() == 1 {
        return Ok(Adjoined { field: k.clone(), root: k.neg(&m.coeff(0)) });
    }
    if !is_irreducible(&m)? {
        return Err(Error::Reducible(format!("{} over {}", m.display_in(generator), k.describe())));
    }
    Ok(adjoin_irreducible(k, &m, generator))
}

/// Adjunction for a modulus already known to be irreducible.
pub(crate) fn adjoin_irreducible(k: &GroundField, m: &UPoly, generator: &str) -> Adjoined {
    if m.deg() == 1 {
        return Adjoined { field: k.clone(), root: k.neg(&m.coeff(0)) };
    }
    let field = GroundField::extension_unchecked(k, m.coeffs().to_vec(), generator, None);
    let root = field.generator().unwrap();
    Adjoined { field, root }
}

/// A primitive `e`-th root of unity over `k`, extending `k` on top of its
/// tower when necessary. Over `Q` and cyclotomic fields the result is the
/// shared cyclotomic field `Q(zeta_lcm)`; the returned field then replaces
/// `k` rather than extending it.
pub fn root_of_unity(k: &GroundField, e: u64) -> Result<(GroundField, Elem)> {
    if e == 0 {
        return Err(Error::InvalidArgument("root of unity of order 0".into()));
    }
    if e == 1 {
        return Ok((k.clone(), k.one()));
    }
    if k.is_finite() {
        if e % k.characteristic() == 0 {
            return Err(Error::Wild { e, characteristic: k.characteristic() });
        }
        let phi = cyclotomic_over(k, e);
        let roots = roots_in_field(&phi)?;
        if let Some((z, _)) = roots.into_iter().next() {
            return Ok((k.clone(), z));
        }
        let facs = super::factor::factor_univariate(&phi)?;
        let adj = adjoin_irreducible(k, &facs[0].0, &format!("w{e}"));
        return Ok((adj.field, adj.root));
    }
    match k.cyclotomic_conductor() {
        Some(n) => {
            let m = normalize_conductor(num_integer::lcm(n, e));
            let f = GroundField::cyclotomic(m);
            let z = cyclotomic_root_of_unity(&f, 1, e)?;
            Ok((f, z))
        }
        None => Err(Error::Unsupported(format!(
            "roots of unity over the non-cyclotomic field {}",
            k.describe()
        ))),
    }
}

/// `Phi_e` over `k`.
pub fn cyclotomic_over(k: &GroundField, e: u64) -> UPoly {
    let v = cyclotomic_poly_int(e).iter().map(|c| k.from_bigint(c)).collect();
    UPoly::new(k.clone(), v)
}

/// `zeta_N^j` in `Q(zeta_N)`, where `N` is the conductor of `f`. Odd `N`
/// also provides `-zeta_N^j` through [`cyclotomic_root_of_unity`].
pub fn cyclotomic_zeta_power(f: &GroundField, j: u64) -> Elem {
    match f.cyclotomic_conductor() {
        Some(1) | None => f.one(),
        Some(n) => {
            let z = f.generator().unwrap();
            f.pow(&z, j % n)
        }
    }
}

/// The element `exp(2 pi i k / order)` in the cyclotomic field `f`,
/// which must contain the `order`-th roots of unity.
pub fn cyclotomic_root_of_unity(f: &GroundField, k: i64, order: u64) -> Result<Elem> {
    let n = f.cyclotomic_conductor().ok_or_else(|| Error::Unsupported("not cyclotomic".into()))?;
    // Q(zeta_n) contains zeta_m exactly for m | lcm(2, n) (n odd) or m | n
    let full = if n % 2 == 1 { 2 * n } else { n };
    if full % order != 0 {
        return Err(Error::FieldMismatch(format!("{} lacks roots of unity of order {order}", f.describe())));
    }
    let idx = (k.rem_euclid(order as i64) as u64) * (full / order); // exp(2 pi i idx / full)
    if full == n {
        return Ok(cyclotomic_zeta_power(f, idx));
    }
    // full = 2n with n odd: exp(2 pi i idx / 2n); -zeta_n^((idx + n) / 2) when idx is odd
    if idx % 2 == 0 {
        Ok(cyclotomic_zeta_power(f, idx / 2))
    } else {
        Ok(f.neg(&cyclotomic_zeta_power(f, ((idx + n) / 2) % n)))
    }
}

/// Embeds an element of `Q(zeta_n)` into `Q(zeta_m)`, `n | m` after
/// normalization. Rationals embed as constants.
pub fn cyclotomic_embed(from: &GroundField, to: &GroundField, a: &Elem) -> Result<Elem> {
    let n = from.cyclotomic_conductor().ok_or_else(|| Error::Unsupported("not cyclotomic".into()))?;
    let m = to.cyclotomic_conductor().ok_or_else(|| Error::Unsupported("not cyclotomic".into()))?;
    if from == to {
        return Ok(a.clone());
    }
    if n == 1 {
        return to.lift_from(from, a);
    }
    if m % n != 0 {
        return Err(Error::FieldMismatch(format!("Q(zeta_{n}) does not embed in Q(zeta_{m})")));
    }
    let step = m / n;
    let coeffs = a.as_vec().unwrap();
    let mut acc = to.zero();
    for (i, c) in coeffs.iter().enumerate() {
        if c.as_rat().unwrap() == &num_rational::BigRational::default() {
            continue;
        }
        let term = to.scale_base(&cyclotomic_zeta_power(to, i as u64 * step), c);
        acc = to.add(&acc, &term);
    }
    Ok(acc)
}

/// The preimage of `a` under `Q(zeta_m) -> Q(zeta_n)`, if `a` lies in the
/// image. Solved in the power basis of `Q(zeta_m)`.
pub fn cyclotomic_project(from: &GroundField, to: &GroundField, a: &Elem) -> Option<Elem> {
    use num_rational::BigRational;
    use num_traits::Zero;
    let d = to.absolute_degree();
    let rows = from.absolute_degree();
    let unit = |i: usize| Elem::Vec((0..d).map(|j| Elem::Rat(BigRational::from_integer((i == j).into()))).collect());
    let cols: Vec<Vec<BigRational>> = (0..d)
        .map(|i| Some(cyclotomic_embed(to, from, &unit(i)).ok()?.as_vec()?.iter().map(|c| c.as_rat().cloned().unwrap_or_default()).collect()))
        .collect::<Option<_>>()?;
    let rhs: Vec<BigRational> = a.as_vec()?.iter().map(|c| c.as_rat().cloned().unwrap_or_default()).collect();
    // augmented rows [B | a]
    let mut m: Vec<Vec<BigRational>> = (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).chain([rhs[r].clone()]).collect()).collect();
    let mut pivots = Vec::with_capacity(d);
    let mut r = 0;
    for c in 0..d {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = BigRational::from_integer(1.into()) / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=d {
                    let v = m[r][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[d].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); d];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][d].clone();
    }
    Some(Elem::Vec(x.into_iter().map(Elem::Rat).collect()))
}

/// The automorphism `zeta -> zeta^u` of `Q(zeta_n)`.
pub fn cyclotomic_automorphism(f: &GroundField, u: u64, a: &Elem) -> Elem {
    let Some(n) = f.cyclotomic_conductor().filter(|&n| n > 1) else {
        return a.clone();
    };
    let coeffs = a.as_vec().unwrap();
    let mut acc = f.zero();
    for (i, c) in coeffs.iter().enumerate() {
        if c.as_rat().is_some_and(|r| *r == num_rational::BigRational::default()) {
            continue;
        }
        let term = f.scale_base(&cyclotomic_zeta_power(f, (i as u64 * u) % n), c);
        acc = f.add(&acc, &term);
    }
    acc
}

/// `N_{F/k}(X - a)`: the characteristic polynomial of `a` over a subfield
/// `k` of its tower.
pub fn charpoly_over(field: &GroundField, a: &Elem, k: &GroundField) -> Result<UPoly> {
    let mut p = UPoly::linear(field, a);
    let mut cur = field.clone();
    while &cur != k {
        p = norm_to_base(&p)?;
        cur = cur
            .base()
            .cloned()
            .ok_or_else(|| Error::FieldMismatch(format!("{} is not below {}", k.describe(), field.describe())))?;
    }
    Ok(p)
}

/// Minimal polynomial of `a` over a subfield `k` of its tower.
pub fn min_poly_over(field: &GroundField, a: &Elem, k: &GroundField) -> Result<UPoly> {
    let cp = charpoly_over(field, a, k)?;
    let parts = squarefree_decomposition(&cp);
    debug_assert_eq!(parts.len(), 1);
    Ok(parts.into_iter().next().unwrap().0)
}

pub fn degree_over(field: &GroundField, a: &Elem, k: &GroundField) -> Result<usize> {
    Ok(min_poly_over(field, a, k)?.deg())
}

/// Whether `k` is a finite field or a cyclotomic field over `Q`.
pub fn has_explicit_galois_group(k: &GroundField) -> bool {
    k.is_finite() || k.cyclotomic_conductor().is_some() || matches!(k.kind(), FieldKind::Rationals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoin_examples() {
        let f5 = GroundField::prime(5).unwrap();
        let f25 = adjoin_root(&f5, &UPoly::from_i64s(&f5, &[-2, 0, 1]), "s").unwrap();
        let s = f25.root.clone();
        assert!(f25.field.is_zero(&f25.field.sub(&f25.field.mul(&s, &s), &f25.field.from_i64(2))));
        assert_eq!(f25.field.degree_over(&f5), Some(2));
        // X^2 - s over F_25: brute-force root search finds nothing
        let k = &f25.field;
        let mut all = Vec::new();
        for a in 0..5 {
            for b in 0..5 {
                all.push(k.add(&k.from_i64(a), &k.mul(&k.from_i64(b), &s)));
            }
        }
        assert!(all.iter().all(|y| k.mul(y, y) != s));
        let m = UPoly::new(k.clone(), vec![k.neg(&s), k.zero(), k.one()]);
        let f625 = adjoin_root(k, &m, "r").unwrap();
        assert_eq!(f625.field.depth(), 2);
        assert_eq!(f625.field.absolute_degree(), 4);
        let q = GroundField::rationals();
        let same = adjoin_root(&q, &UPoly::from_i64s(&q, &[-3, 1]), "y").unwrap();
        assert!(same.field.is_rational());
        assert_eq!(same.root, q.from_i64(3));
        assert!(adjoin_root(&f5, &UPoly::from_i64s(&f5, &[-1, 0, 1]), "s").is_err());
    }

    #[test]
    fn roots_of_unity() {
        let f5 = GroundField::prime(5).unwrap();
        let (k, z) = root_of_unity(&f5, 3).unwrap();
        assert_eq!(k.absolute_degree(), 2);
        assert!(k.is_one(&k.pow(&z, 3)) && !k.is_one(&z));
        let (k4, z4) = root_of_unity(&f5, 4).unwrap();
        assert_eq!(k4, f5);
        assert_eq!(k4.multiplicative_order(&z4), Some(4));
        let q = GroundField::rationals();
        let (c, w) = root_of_unity(&q, 6).unwrap();
        assert_eq!(c.cyclotomic_conductor(), Some(3));
        let w6 = cyclotomic_root_of_unity(&c, 1, 6).unwrap();
        assert!(c.is_one(&c.pow(&w6, 6)) && !c.is_one(&c.pow(&w6, 3)) && !c.is_one(&c.pow(&w6, 2)));
        assert!(c.is_one(&c.pow(&w, 6)));
    }

    #[test]
    fn cyclotomic_maps() {
        let k3 = GroundField::cyclotomic(3);
        let k12 = GroundField::cyclotomic(12);
        let z3 = k3.generator().unwrap();
        let img = cyclotomic_embed(&k3, &k12, &z3).unwrap();
        assert!(k12.is_one(&k12.pow(&img, 3)));
        let conj = cyclotomic_automorphism(&k3, 2, &z3);
        assert_eq!(k3.add(&k3.add(&z3, &conj), &k3.one()), k3.zero());
    }

    #[test]
    fn min_polys_of_elements() {
        let f5 = GroundField::prime(5).unwrap();
        let f25 = adjoin_root(&f5, &UPoly::from_i64s(&f5, &[-2, 0, 1]), "s").unwrap();
        let mp = min_poly_over(&f25.field, &f25.root, &f5).unwrap();
        assert_eq!(mp, UPoly::from_i64s(&f5, &[-2, 0, 1]));
        let three = f25.field.from_i64(3);
        assert_eq!(degree_over(&f25.field, &three, &f5).unwrap(), 1);
    }
}
