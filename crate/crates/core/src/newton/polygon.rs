//! Newton polygons of polynomials over `K`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::values::{Value, Q64};

use super::spoly::SeriesPoly;

/// One edge of the lower hull: roots of value `gamma`, `length` of them,
/// between coefficient indices `start < end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub gamma: Q64,
}

impl Segment {
    pub fn length(&self) -> usize {
        self.end - self.start
    }
}

/// The lower convex hull of `(i, v(c_i))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Vertices `(i, v(c_i))`, left to right.
    pub vertices: Vec<(usize, Q64)>,
    /// Edges ordered by decreasing root value.
    pub segments: Vec<Segment>,
    /// Number of roots equal to zero (index of the first nonzero coefficient).
    pub zero_roots: usize,
}

impl NewtonPolygon {
    /// Hull of the given points; `None` entries are zero coefficients.
    pub fn from_points(points: &[Option<Q64>]) -> Result<NewtonPolygon> {
        let zero_roots = points.iter().position(|p| p.is_some()).ok_or_else(|| Error::InvalidArgument("Newton polygon of zero".into()))?;
        let pts: Vec<(usize, Q64)> = points.iter().enumerate().filter_map(|(i, v)| v.map(|v| (i, v))).collect();
        let mut hull: Vec<(usize, Q64)> = Vec::new();
        for &p in &pts {
            while hull.len() >= 2 {
                let (i1, v1) = hull[hull.len() - 2];
                let (i2, v2) = hull[hull.len() - 1];
                // drop the middle point unless it lies strictly below the chord
                let lhs = (v2 - v1) * Q64::from_integer((p.0 - i1) as i64);
                let rhs = (p.1 - v1) * Q64::from_integer((i2 - i1) as i64);
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        let segments = hull
            .windows(2)
            .map(|w| Segment {
                start: w[0].0,
                end: w[1].0,
                gamma: (w[0].1 - w[1].1) / Q64::from_integer((w[1].0 - w[0].0) as i64),
            })
            .collect();
        Ok(NewtonPolygon { vertices: hull, segments, zero_roots })
    }

    /// The polygon of a polynomial; coefficients known only as `O(t^p)` are
    /// reported as `PrecisionExhausted`.
    pub fn of(f: &SeriesPoly) -> Result<NewtonPolygon> {
        let mut pts = Vec::new();
        for c in f.coeffs() {
            pts.push(match c.valuation()? {
                Value::Inf => None,
                v => v.as_rat(),
            });
        }
        NewtonPolygon::from_points(&pts)
    }

    /// Root values with multiplicities, decreasing; zero roots come first as
    /// `Value::Inf`.
    pub fn root_values(&self) -> Vec<(Value, usize)> {
        let mut out = Vec::new();
        if self.zero_roots > 0 {
            out.push((Value::Inf, self.zero_roots));
        }
        for s in &self.segments {
            out.push((Value::Rat(s.gamma), s.length()));
        }
        out
    }

    pub fn max_root_value(&self) -> Option<Value> {
        self.root_values().first().map(|r| r.0.clone())
    }

    /// Number of roots with value at least `g`.
    pub fn count_at_least(&self, g: Q64) -> usize {
        self.zero_roots + self.segments.iter().filter(|s| s.gamma >= g).map(|s| s.length()).sum::<usize>()
    }

    /// The indices lying on the edge of slope `-gamma` (vertices included).
    pub fn on_segment(&self, f: &SeriesPoly, s: &Segment) -> Vec<usize> {
        let base = self.vertices.iter().find(|v| v.0 == s.start).map(|v| v.1).unwrap_or_else(Q64::zero);
        (s.start..=s.end)
            .filter(|&i| {
                f.coeff(i)
                    .valuation()
                    .ok()
                    .and_then(|v| v.as_rat())
                    .is_some_and(|v| v == base - s.gamma * Q64::from_integer((i - s.start) as i64))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::values::q;

    #[test]
    fn hull_examples() {
        // X^2 - t X: points (1, 1), (2, 0), zero root
        let np = NewtonPolygon::from_points(&[None, Some(q(1, 1)), Some(q(0, 1))]).unwrap();
        assert_eq!(np.zero_roots, 1);
        assert_eq!(np.root_values(), vec![(Value::Inf, 1), (Value::rat(1, 1), 1)]);
        // X^2 - t: one edge of slope 1/2
        let np = NewtonPolygon::from_points(&[Some(q(1, 1)), None, Some(q(0, 1))]).unwrap();
        assert_eq!(np.root_values(), vec![(Value::rat(1, 2), 2)]);
        // collinear middle point is dropped from vertices
        let np = NewtonPolygon::from_points(&[Some(q(2, 1)), Some(q(1, 1)), Some(q(0, 1))]).unwrap();
        assert_eq!(np.vertices.len(), 2);
        assert_eq!(np.count_at_least(q(1, 1)), 2);
    }
}
