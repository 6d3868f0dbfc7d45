//! Index bookkeeping behind the bound, evaluated at the valuation level.
//!
//! For a slope `lambda > 0` the valuation of `f = sum a_i phi^i` is
//! `w(f) = min_i v(a_i) + i * lambda`; `I` and `S` are the least and greatest
//! indices attaining the minimum. Along every polygon edge `I` and `S` must be
//! the edge's endpoints, and both are additive under multiplication.

use serde::Serialize;

use crate::bound::BoundReport;
use crate::error::{Error, Result};
use crate::poly::{phi_expansion, IntPolynomial};
use crate::valuation::{ExtendedValue, Value};

#[derive(Clone, Debug)]
pub struct SlopeValuation {
    lambda: Value,
    vals: Vec<ExtendedValue>,
}

impl SlopeValuation {
    pub fn new(lambda: Value, vals: Vec<ExtendedValue>) -> Result<Self> {
        if !lambda.is_positive() {
            return Err(Error::NonPositiveSlope(lambda.to_string()));
        }
        if vals.iter().all(ExtendedValue::is_infinite) {
            return Err(Error::ZeroPolynomial);
        }
        Ok(SlopeValuation { lambda, vals })
    }

    pub fn lambda(&self) -> &Value {
        &self.lambda
    }

    fn terms(&self) -> impl Iterator<Item = (usize, Value)> + '_ {
        self.vals
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.finite().map(|v| (i, v + &self.lambda.scale_int(i as i64))))
    }

    pub fn term(&self, i: usize) -> Option<Value> {
        self.vals
            .get(i)
            .and_then(ExtendedValue::finite)
            .map(|v| v + &self.lambda.scale_int(i as i64))
    }

    pub fn w_value(&self) -> Value {
        self.terms().map(|(_, t)| t).min().unwrap()
    }

    /// `(I, S)`: least and greatest index attaining [`Self::w_value`].
    pub fn index_pair(&self) -> (usize, usize) {
        let w = self.w_value();
        let mut hits = self.terms().filter(|(_, t)| *t == w).map(|(i, _)| i);
        let first = hits.next().unwrap();
        (first, hits.last().unwrap_or(first))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct EdgeCheck {
    pub k_prev: usize,
    pub k_next: usize,
    pub lambda: Value,
    pub d: usize,
    pub w: Value,
    pub index_min: usize,
    pub index_max: usize,
    /// `I = k_prev` and `S = k_next`.
    pub endpoints: bool,
    /// `w = v(a_{k_prev}) + k_prev * lambda = v(a_{k_next}) + k_next * lambda`.
    pub w_identity: bool,
    /// Chord slopes to `k_next` from below are `>= lambda`, first equality at `k_prev`.
    pub lower_chords: bool,
    /// Chord slopes from `k_prev` to `i >= k_next` are `<= lambda`, equality only at `k_next`.
    pub upper_chords: bool,
    /// `S - I` equals the edge width and is a multiple of `d`.
    pub width_divisible: bool,
}

impl EdgeCheck {
    pub fn holds(&self) -> bool {
        self.endpoints && self.w_identity && self.lower_chords && self.upper_chords && self.width_divisible
    }
}

fn chord(vals: &[ExtendedValue], from: usize, to: usize) -> Option<Value> {
    // (v(a_from) - v(a_to)) / (to - from)
    let a = vals[from].finite()?;
    let b = vals[to].finite()?;
    Some((a - b).div_int(to as i64 - from as i64))
}

/// Checks each positive edge of `report` against the expansion valuations.
pub fn check_edge_identities(report: &BoundReport, vals: &[ExtendedValue]) -> Result<Vec<EdgeCheck>> {
    report
        .edges
        .iter()
        .map(|e| {
            let (kp, kn) = (e.k_prev, e.k_next);
            if kn >= vals.len() {
                return Err(Error::InvalidInput(format!("edge index {kn} outside the expansion")));
            }
            let sv = SlopeValuation::new(e.slope.clone(), vals.to_vec())?;
            let w = sv.w_value();
            let (i_min, i_max) = sv.index_pair();

            let w_identity = sv.term(kp).as_ref() == Some(&w) && sv.term(kn).as_ref() == Some(&w);

            let lower: Vec<(usize, Value)> = (0..kn).filter_map(|i| chord(vals, i, kn).map(|c| (i, c))).collect();
            let lower_chords = lower.iter().all(|(_, c)| *c >= e.slope)
                && lower.iter().find(|(_, c)| *c == e.slope).map(|(i, _)| *i) == Some(kp);

            let upper: Vec<(usize, Value)> = (kn..vals.len())
                .filter_map(|i| chord(vals, kp, i).map(|c| (i, c)))
                .collect();
            let upper_chords = upper.iter().all(|(_, c)| *c <= e.slope)
                && upper.iter().filter(|(_, c)| *c == e.slope).map(|(i, _)| *i).eq([kn]);

            let width = i_max - i_min;
            Ok(EdgeCheck {
                k_prev: kp,
                k_next: kn,
                lambda: e.slope.clone(),
                d: e.d,
                w,
                index_min: i_min,
                index_max: i_max,
                endpoints: (i_min, i_max) == (kp, kn),
                w_identity,
                lower_chords,
                upper_chords,
                width_divisible: width == kn - kp && width % e.d == 0,
            })
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct IndexData {
    pub w: Value,
    pub index_min: usize,
    pub index_max: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AdditivityVerdict {
    pub lambda: Value,
    pub f: IndexData,
    pub g: IndexData,
    pub product: IndexData,
}

impl AdditivityVerdict {
    /// `I` and `S` add, and so does `w`.
    pub fn holds(&self) -> bool {
        self.product.index_min == self.f.index_min + self.g.index_min
            && self.product.index_max == self.f.index_max + self.g.index_max
            && self.product.w == &self.f.w + &self.g.w
    }
}

pub fn index_data(f: &IntPolynomial, phi: &IntPolynomial, p: u64, lambda: &Value) -> Result<IndexData> {
    let vals = phi_expansion(f, phi)?.valuations(p);
    let sv = SlopeValuation::new(lambda.clone(), vals)?;
    let (index_min, index_max) = sv.index_pair();
    Ok(IndexData {
        w: sv.w_value(),
        index_min,
        index_max,
    })
}

pub fn additivity_check(
    f: &IntPolynomial,
    g: &IntPolynomial,
    phi: &IntPolynomial,
    p: u64,
    lambda: &Value,
) -> Result<AdditivityVerdict> {
    Ok(AdditivityVerdict {
        lambda: lambda.clone(),
        f: index_data(f, phi, p, lambda)?,
        g: index_data(g, phi, p, lambda)?,
        product: index_data(&(f * g), phi, p, lambda)?,
    })
}
