//! Ordered abelian groups holding every valuation value.
//!
//! Rank-2 values are stored with the dominant coordinate first; `vK`
//! embeds into rank 2 as `{0} x vK`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};

/// Exact rational used for exponents and rank-1 values.
pub type Q64 = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q64 {
    Q64::new(n, d)
}

#[derive(Clone, Copy, Debug)]
pub enum Value {
    Rat(Q64),
    /// `(dominant, secondary)`, ordered lexicographically.
    Rank2(Q64, Q64),
    Inf,
}

impl Value {
    pub fn rat(n: i64, d: i64) -> Value {
        Value::Rat(q(n, d))
    }

    pub fn zero() -> Value {
        Value::Rat(Q64::zero())
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Value::Inf)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_inf()
    }

    /// The pair form; rank-1 values embed as `(0, q)`.
    pub fn as_pair(&self) -> Option<(Q64, Q64)> {
        match *self {
            Value::Rat(r) => Some((Q64::zero(), r)),
            Value::Rank2(a, b) => Some((a, b)),
            Value::Inf => None,
        }
    }

    pub fn as_rat(&self) -> Option<Q64> {
        match *self {
            Value::Rat(r) => Some(r),
            Value::Rank2(a, b) if a.is_zero() => Some(b),
            _ => None,
        }
    }

    /// Normalizes rank-2 values with a zero dominant coordinate back to rank 1.
    pub fn collapse(self) -> Value {
        match self {
            Value::Rank2(a, b) if a.is_zero() => Value::Rat(b),
            v => v,
        }
    }

    pub fn to_rank2(self) -> Value {
        match self {
            Value::Rat(r) => Value::Rank2(Q64::zero(), r),
            v => v,
        }
    }

    pub fn scale(self, n: i64) -> Value {
        match self {
            Value::Rat(r) => Value::Rat(r * n),
            Value::Rank2(a, b) => Value::Rank2(a * n, b * n),
            Value::Inf => {
                if n > 0 {
                    Value::Inf
                } else {
                    panic!("scaling infinity by a non-positive integer")
                }
            }
        }
    }

    pub fn min(self, other: Value) -> Value {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Value) -> Value {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Rat(r) => json!({"type": "rat", "num": r.numer(), "den": r.denom()}),
            Value::Rank2(a, b) => json!({
                "type": "rank2",
                "a": [a.numer(), a.denom()],
                "b": [b.numer(), b.denom()],
            }),
            Value::Inf => json!({"type": "inf"}),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Value> {
        let bad = || Error::InvalidArgument(format!("not a serialized value: {v}"));
        let ty = v.get("type").and_then(|t| t.as_str()).ok_or_else(bad)?;
        let pair = |key: &str| -> Result<Q64> {
            let arr = v.get(key).and_then(|a| a.as_array()).ok_or_else(bad)?;
            if arr.len() != 2 {
                return Err(bad());
            }
            let n = arr[0].as_i64().ok_or_else(bad)?;
            let d = arr[1].as_i64().ok_or_else(bad)?;
            if d == 0 {
                return Err(bad());
            }
            Ok(q(n, d))
        };
        match ty {
            "rat" => {
                let n = v.get("num").and_then(|x| x.as_i64()).ok_or_else(bad)?;
                let d = v.get("den").and_then(|x| x.as_i64()).ok_or_else(bad)?;
                if d == 0 {
                    return Err(bad());
                }
                Ok(Value::Rat(q(n, d)))
            }
            "rank2" => Ok(Value::Rank2(pair("a")?, pair("b")?)),
            "inf" => Ok(Value::Inf),
            _ => Err(bad()),
        }
    }
}

impl From<Q64> for Value {
    fn from(r: Q64) -> Value {
        Value::Rat(r)
    }
}

/// Equality follows the order, so `1/2 == (0, 1/2)`.
impl PartialEq for Value {
    fn eq(&self, other: &Value) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Value {}

impl std::hash::Hash for Value {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.as_pair().hash(state)
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Value) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Value) -> Ordering {
        match (self.as_pair(), other.as_pair()) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(a), Some(b)) => a.0.cmp(&b.0).then(a.1.cmp(&b.1)),
        }
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        match (self, rhs) {
            (Value::Inf, _) | (_, Value::Inf) => Value::Inf,
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a + b),
            (a, b) => {
                let (a0, a1) = a.as_pair().unwrap();
                let (b0, b1) = b.as_pair().unwrap();
                Value::Rank2(a0 + b0, a1 + b1)
            }
        }
    }
}

impl Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        match self {
            Value::Rat(r) => Value::Rat(-r),
            Value::Rank2(a, b) => Value::Rank2(-a, -b),
            Value::Inf => panic!("negating infinity"),
        }
    }
}

impl Sub for Value {
    type Output = Value;
    fn sub(self, rhs: Value) -> Value {
        self + (-rhs)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rat(r) => write!(f, "{r}"),
            Value::Rank2(a, b) => write!(f, "({a}, {b})"),
            Value::Inf => write!(f, "inf"),
        }
    }
}

/// A subgroup of `Q`: `{0}`, a cyclic lattice `step * Z`, or all of `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatSubgroup {
    Zero,
    Lattice(Q64),
    All,
}

impl RatSubgroup {
    /// `(1/e) Z`.
    pub fn one_over(e: u64) -> RatSubgroup {
        RatSubgroup::Lattice(q(1, e as i64))
    }

    pub fn contains(&self, x: Q64) -> bool {
        match *self {
            RatSubgroup::Zero => x.is_zero(),
            RatSubgroup::Lattice(s) => (x / s).is_integer(),
            RatSubgroup::All => true,
        }
    }

    /// Least `n >= 1` with `n * x` in the subgroup.
    pub fn torsion_order(&self, x: Q64) -> Option<u64> {
        match *self {
            RatSubgroup::Zero => x.is_zero().then_some(1),
            RatSubgroup::Lattice(s) => Some((x / s).denom().unsigned_abs()),
            RatSubgroup::All => Some(1),
        }
    }

    /// Index `(self : sub)` when finite.
    pub fn index_over(&self, sub: &RatSubgroup) -> Option<u64> {
        match (*self, *sub) {
            (RatSubgroup::Lattice(a), RatSubgroup::Lattice(b)) => {
                let r = b / a;
                r.is_integer().then(|| r.numer().unsigned_abs())
            }
            (RatSubgroup::Zero, RatSubgroup::Zero) | (RatSubgroup::All, RatSubgroup::All) => Some(1),
            _ => None,
        }
    }
}

/// A subgroup of the value universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueSet {
    Rank1(RatSubgroup),
    /// Product of a dominant-coordinate subgroup and a secondary one.
    Rank2(RatSubgroup, RatSubgroup),
}

impl ValueSet {
    /// The value group `Z` of `k((t))`.
    pub fn integers() -> ValueSet {
        ValueSet::Rank1(RatSubgroup::Lattice(Q64::one()))
    }

    pub fn one_over(e: u64) -> ValueSet {
        ValueSet::Rank1(RatSubgroup::one_over(e))
    }

    pub fn contains(&self, v: &Value) -> bool {
        match (self, v) {
            (_, Value::Inf) => false,
            (ValueSet::Rank1(g), Value::Rat(r)) => g.contains(*r),
            (ValueSet::Rank1(g), Value::Rank2(a, b)) => a.is_zero() && g.contains(*b),
            (ValueSet::Rank2(g0, g1), v) => {
                let (a, b) = v.as_pair().unwrap();
                g0.contains(a) && g1.contains(b)
            }
        }
    }
}

/// Least `n >= 1` with `n * gamma` in `reference`, or `None` when `gamma`
/// is non-torsion over it.
pub fn is_torsion_over(gamma: &Value, reference: &ValueSet) -> Result<Option<u64>> {
    let (a, b) = gamma
        .as_pair()
        .ok_or_else(|| Error::InvalidArgument("torsion test of infinity".into()))?;
    let (g0, g1) = match reference {
        ValueSet::Rank1(g) => (RatSubgroup::Zero, *g),
        ValueSet::Rank2(g0, g1) => (*g0, *g1),
    };
    match (g0.torsion_order(a), g1.torsion_order(b)) {
        (Some(n), Some(m)) => Ok(Some(n.lcm(&m))),
        _ => Ok(None),
    }
}

pub fn rat_abs(x: Q64) -> Q64 {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn compare_examples() {
        assert!(Value::Rank2(q(0, 1), q(7, 2)) < Value::Rank2(q(1, 1), q(0, 1)));
        assert!(Value::rat(1, 2) < Value::rat(2, 3));
        assert!(Value::Inf > Value::Rank2(q(5, 1), q(5, 1)));
        assert!(Value::rat(100, 1) < Value::Rank2(q(1, 1), q(-100, 1)));
        assert_eq!(Value::rat(3, 1).cmp(&Value::Rank2(q(0, 1), q(3, 1))), Ordering::Equal);
    }

    #[test]
    fn torsion_examples() {
        let z = ValueSet::integers();
        assert_eq!(is_torsion_over(&Value::rat(1, 2), &z).unwrap(), Some(2));
        let q_second = ValueSet::Rank2(RatSubgroup::Zero, RatSubgroup::All);
        assert_eq!(
            is_torsion_over(&Value::Rank2(q(1, 1), q(0, 1)), &q_second).unwrap(),
            None
        );
        // brute force n = 1..6 for 5/6 against (1/2)Z
        let half = ValueSet::one_over(2);
        let brute = (1..=6).find(|n| half.contains(&Value::rat(5 * n, 6)));
        assert_eq!(brute, Some(3));
        assert_eq!(is_torsion_over(&Value::rat(5, 6), &half).unwrap(), Some(3));
        assert!(is_torsion_over(&Value::Inf, &z).is_err());
    }

    #[test]
    fn infinity_absorbs() {
        assert_eq!(Value::Inf + Value::rat(3, 1), Value::Inf);
        assert_eq!(Value::rat(1, 1) + Value::Inf, Value::Inf);
    }

    #[test]
    fn json_round_trip() {
        for v in [Value::rat(-7, 3), Value::Rank2(q(1, 1), q(-1, 2)), Value::Inf] {
            assert_eq!(Value::from_json(&v.to_json()).unwrap(), v);
        }
        assert_eq!(
            Value::rat(6, 4).to_json().to_string(),
            r#"{"den":2,"num":3,"type":"rat"}"#
        );
    }

    fn small_rat() -> impl Strategy<Value = Q64> {
        (-40i64..40, 1i64..12).prop_map(|(n, d)| q(n, d))
    }

    fn value() -> impl Strategy<Value = Value> {
        prop_oneof![
            small_rat().prop_map(Value::Rat),
            (small_rat(), small_rat()).prop_map(|(a, b)| Value::Rank2(a, b)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn order_compatible_with_addition(a in value(), b in value(), c in value()) {
            if a < b {
                prop_assert!(a + c < b + c);
            }
            prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        }

        #[test]
        fn rank1_embedding_preserves_order_and_sum(x in small_rat(), y in small_rat()) {
            let (a, b) = (Value::Rat(x), Value::Rat(y));
            prop_assert_eq!(a.cmp(&b), a.to_rank2().cmp(&b.to_rank2()));
            prop_assert_eq!((a + b).to_rank2(), a.to_rank2() + b.to_rank2());
        }
    }
}
