//! The phi-Newton polygon: lower boundary of the points `P_i = (i, v(a_{n-i}))`.
//!
//! [`build_polygon`] follows the greedy vertex walk (minimal slope from the
//! current vertex, ties going to the largest index). [`hull_oracle`] computes
//! the same boundary by a monotone-chain sweep so the two can be compared.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::valuation::{ExtendedValue, Value};

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PolygonPoint {
    /// Abscissa `i`; the point carries `v(a_{n-i})`.
    #[serde(rename = "i")]
    pub abscissa: usize,
    pub val: ExtendedValue,
}

impl PolygonPoint {
    pub fn new(abscissa: usize, val: ExtendedValue) -> Self {
        PolygonPoint { abscissa, val }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PolygonEdge {
    pub from: usize,
    pub to: usize,
    pub slope: Value,
    pub width: usize,
    /// `val(to) - val(from)`, so `slope = rise / width`.
    pub rise: Value,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct NewtonPolygon {
    pub n: usize,
    pub points: Vec<PolygonPoint>,
    pub vertices: Vec<PolygonPoint>,
    pub edges: Vec<PolygonEdge>,
}

/// An edge of positive slope in coefficient indexing: it joins
/// `(n - k_next, v(a_{k_next}))` and `(n - k_prev, v(a_{k_prev}))`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PositiveEdge {
    pub k_prev: usize,
    pub k_next: usize,
    pub slope: Value,
    /// `v(a_{k_prev}) - v(a_{k_next})`.
    pub drop: Value,
}

impl PositiveEdge {
    pub fn width(&self) -> usize {
        self.k_next - self.k_prev
    }
}

fn finite_points(points: &[PolygonPoint]) -> Result<Vec<(usize, &Value)>> {
    if points.windows(2).any(|w| w[0].abscissa >= w[1].abscissa) {
        return Err(Error::InvalidInput(
            "polygon abscissas must be strictly increasing".into(),
        ));
    }
    let finite: Vec<(usize, &Value)> = points
        .iter()
        .filter_map(|p| p.val.finite().map(|v| (p.abscissa, v)))
        .collect();
    if finite.len() < 2 {
        return Err(Error::DegeneratePolygon);
    }
    let rank = finite[0].1.rank();
    if let Some((_, v)) = finite.iter().find(|(_, v)| v.rank() != rank) {
        return Err(Error::RankMismatch {
            expected: rank,
            found: v.rank(),
        });
    }
    Ok(finite)
}

fn slope_between(a: (usize, &Value), b: (usize, &Value)) -> Value {
    (b.1 - a.1).div_int((b.0 - a.0) as i64)
}

fn assemble(points: &[PolygonPoint], vertices: Vec<(usize, &Value)>) -> NewtonPolygon {
    let edges = vertices
        .windows(2)
        .map(|w| {
            let rise = w[1].1 - w[0].1;
            PolygonEdge {
                from: w[0].0,
                to: w[1].0,
                slope: slope_between(w[0], w[1]),
                width: w[1].0 - w[0].0,
                rise,
            }
        })
        .collect();
    NewtonPolygon {
        n: points.last().map_or(0, |p| p.abscissa),
        points: points.to_vec(),
        vertices: vertices
            .into_iter()
            .map(|(i, v)| PolygonPoint::new(i, ExtendedValue::Finite(v.clone())))
            .collect(),
        edges,
    }
}

/// Greedy construction: from each vertex take the later finite point of least
/// slope, preferring the largest index on ties.
pub fn build_polygon(points: &[PolygonPoint]) -> Result<NewtonPolygon> {
    let finite = finite_points(points)?;
    let mut vertices = vec![finite[0]];
    let mut cur = 0;
    while cur + 1 < finite.len() {
        let mut best = cur + 1;
        let mut best_slope = slope_between(finite[cur], finite[best]);
        for j in cur + 2..finite.len() {
            let s = slope_between(finite[cur], finite[j]);
            if s <= best_slope {
                best = j;
                best_slope = s;
            }
        }
        vertices.push(finite[best]);
        cur = best;
    }
    Ok(assemble(points, vertices))
}

/// Lower hull by Andrew's monotone chain, dropping collinear interior points.
pub fn hull_oracle(points: &[PolygonPoint]) -> Result<NewtonPolygon> {
    let finite = finite_points(points)?;
    let mut hull: Vec<(usize, &Value)> = Vec::with_capacity(finite.len());
    for &p in &finite {
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            // (a - o) x (p - o) in exact arithmetic; <= 0 means a is not strictly below op
            let lhs = (p.1 - o.1).scale_int((a.0 - o.0) as i64);
            let rhs = (a.1 - o.1).scale_int((p.0 - o.0) as i64);
            if (&lhs - &rhs).is_positive() {
                break;
            }
            hull.pop();
        }
        hull.push(p);
    }
    Ok(assemble(points, hull))
}

impl NewtonPolygon {
    /// Every finite point lies on or above the supporting line of every edge.
    pub fn supports_all_points(&self) -> bool {
        self.edges.iter().all(|e| {
            let base = self.vertices.iter().find(|v| v.abscissa == e.from).unwrap();
            let base = base.val.finite().unwrap();
            self.points.iter().all(|p| match p.val.finite() {
                None => true,
                Some(v) => {
                    let dx = p.abscissa as i64 - e.from as i64;
                    let lhs = (v - base).scale_int(e.width as i64);
                    !(&lhs - &e.rise.scale_int(dx)).is_negative()
                }
            })
        })
    }

    pub fn slopes_strictly_increase(&self) -> bool {
        self.edges.windows(2).all(|w| w[0].slope < w[1].slope)
    }
}

/// Edges of positive slope up to `k = s`, ordered by increasing `k`
/// (so the first has the steepest slope and starts at `k_0 = 0`).
pub fn positive_edges(poly: &NewtonPolygon, s: usize) -> Vec<PositiveEdge> {
    let n = poly.n;
    poly.edges
        .iter()
        .rev()
        .filter(|e| e.slope.is_positive() && n - e.from <= s)
        .map(|e| PositiveEdge {
            k_prev: n - e.to,
            k_next: n - e.from,
            slope: e.slope.clone(),
            drop: e.rise.clone(),
        })
        .collect()
}

/// Points `P_i = (i, vals[n - i])` for `i = 0..=n`, where `vals[k] = v(a_k)`.
pub fn points_from_valuations(vals: &[ExtendedValue]) -> Vec<PolygonPoint> {
    vals.iter()
        .rev()
        .enumerate()
        .map(|(i, v)| PolygonPoint::new(i, v.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn pts(entries: &[(usize, Option<i64>)]) -> Vec<PolygonPoint> {
        entries
            .iter()
            .map(|&(i, v)| PolygonPoint::new(i, v.map_or(ExtendedValue::Infinity, ExtendedValue::int)))
            .collect()
    }

    fn vertex_abscissas(p: &NewtonPolygon) -> Vec<usize> {
        p.vertices.iter().map(|v| v.abscissa).collect()
    }

    #[test]
    fn collinear_points_collapse() {
        let points = pts(&[(0, Some(0)), (2, Some(1)), (4, Some(2))]);
        let poly = build_polygon(&points).unwrap();
        assert_eq!(vertex_abscissas(&poly), vec![0, 4]);
        assert_eq!(poly.edges[0].slope, Value::ratio(1, 2));
        assert_eq!(poly, hull_oracle(&points).unwrap());

        let points = pts(&[(0, Some(0)), (1, Some(1)), (2, Some(2))]);
        assert_eq!(vertex_abscissas(&hull_oracle(&points).unwrap()), vec![0, 2]);
    }

    #[test]
    fn two_edges() {
        let points = pts(&[(0, Some(0)), (1, Some(1)), (5, Some(6))]);
        let poly = build_polygon(&points).unwrap();
        let slopes: Vec<_> = poly.edges.iter().map(|e| e.slope.clone()).collect();
        assert_eq!(slopes, vec![Value::int(1), Value::ratio(5, 4)]);
        assert_eq!(poly, hull_oracle(&points).unwrap());
    }

    #[test]
    fn infinite_points_are_skipped() {
        let points = pts(&[(0, Some(0)), (1, None), (2, Some(0))]);
        let poly = build_polygon(&points).unwrap();
        assert_eq!(vertex_abscissas(&poly), vec![0, 2]);
        assert_eq!(poly.edges[0].slope, Value::int(0));
        assert_eq!(poly.points.len(), 3);
        assert_eq!(poly, hull_oracle(&points).unwrap());
    }

    #[test]
    fn degenerate_input() {
        assert_eq!(
            build_polygon(&pts(&[(0, Some(0)), (1, None)])),
            Err(Error::DegeneratePolygon)
        );
        assert_eq!(hull_oracle(&pts(&[(0, Some(3))])), Err(Error::DegeneratePolygon));
    }

    #[test]
    fn positive_edge_examples() {
        // x^5 + 2x^4 + 64 at p = 2
        let vals: Vec<ExtendedValue> = [Some(6), None, None, None, Some(1), Some(0)]
            .iter()
            .map(|v| v.map_or(ExtendedValue::Infinity, ExtendedValue::int))
            .collect();
        let poly = build_polygon(&points_from_valuations(&vals)).unwrap();
        let edges = positive_edges(&poly, 5);
        let got: Vec<_> = edges.iter().map(|e| (e.k_prev, e.k_next, e.slope.clone())).collect();
        assert_eq!(got, vec![(0, 4, Value::ratio(5, 4)), (4, 5, Value::int(1))]);
        assert_eq!(edges[0].drop, Value::int(5));

        let vals = vec![
            ExtendedValue::int(1),
            ExtendedValue::Infinity,
            ExtendedValue::Infinity,
            ExtendedValue::Infinity,
            ExtendedValue::Infinity,
            ExtendedValue::int(0),
        ];
        let poly = build_polygon(&points_from_valuations(&vals)).unwrap();
        let got: Vec<_> = positive_edges(&poly, 5)
            .iter()
            .map(|e| (e.k_prev, e.k_next, e.slope.clone()))
            .collect();
        assert_eq!(got, vec![(0, 5, Value::ratio(1, 5))]);

        let vals = vec![ExtendedValue::int(0), ExtendedValue::int(2), ExtendedValue::int(0)];
        let poly = build_polygon(&points_from_valuations(&vals)).unwrap();
        assert!(positive_edges(&poly, 0).is_empty());
    }

    fn profile() -> impl Strategy<Value = Vec<Option<i64>>> {
        prop::collection::vec(prop::option::weighted(0.75, -6i64..12), 2..14)
    }

    fn to_points(p: &[Option<i64>]) -> Vec<PolygonPoint> {
        p.iter()
            .enumerate()
            .map(|(i, v)| PolygonPoint::new(i, v.map_or(ExtendedValue::Infinity, ExtendedValue::int)))
            .collect()
    }

    proptest! {
        #[test]
        fn greedy_matches_hull(p in profile()) {
            let points = to_points(&p);
            let a = build_polygon(&points);
            let b = hull_oracle(&points);
            prop_assert_eq!(&a, &b);
            if let Ok(poly) = a {
                prop_assert!(poly.slopes_strictly_increase());
                prop_assert!(poly.supports_all_points());
            }
        }

        #[test]
        fn translation_invariance(p in profile(), c in -20i64..20) {
            let points = to_points(&p);
            let shifted: Vec<_> = points.iter().map(|q| PolygonPoint::new(q.abscissa, &q.val + &ExtendedValue::int(c))).collect();
            if let (Ok(a), Ok(b)) = (build_polygon(&points), build_polygon(&shifted)) {
                prop_assert_eq!(vertex_abscissas(&a), vertex_abscissas(&b));
                let sa: Vec<_> = a.edges.iter().map(|e| &e.slope).collect();
                let sb: Vec<_> = b.edges.iter().map(|e| &e.slope).collect();
                prop_assert_eq!(sa, sb);
            }
        }

        #[test]
        fn lex_profiles_match_hull(p in prop::collection::vec(prop::option::weighted(0.8, (-4i64..6, -4i64..6)), 2..10)) {
            let points: Vec<_> = p.iter().enumerate().map(|(i, v)| PolygonPoint::new(i, match v {
                Some((a, b)) => ExtendedValue::Finite(Value::from_ints(&[*a, *b])),
                None => ExtendedValue::Infinity,
            })).collect();
            prop_assert_eq!(build_polygon(&points), hull_oracle(&points));
        }
    }

    #[test]
    fn rationals_with_big_values() {
        let big = BigInt::from(10).pow(40);
        let points = vec![
            PolygonPoint::new(0, ExtendedValue::int(big.clone())),
            PolygonPoint::new(3, ExtendedValue::int(0)),
            PolygonPoint::new(7, ExtendedValue::int(big)),
        ];
        assert_eq!(build_polygon(&points), hull_oracle(&points));
    }
}
