//! Lower bounds on the degree of an irreducible factor read off the positive
//! part of the phi-Newton polygon.
//!
//! For every edge of positive slope `lambda_j` joining the coefficient indices
//! `k_{j-1} < k_j`, let `d_j` be the least positive integer with
//! `d_j * lambda_j` in the value group. Then `f` has an irreducible factor of
//! degree at least `max_j d_j * deg(phi)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite_field::{ff_irreducible, is_prime};
use crate::poly::{check_phi, phi_expansion, IntPolynomial};
use crate::polygon::{build_polygon, points_from_valuations, positive_edges, NewtonPolygon};
use crate::valuation::{padic_valuation, smallest_denominator, ExtendedValue, Value, ValueGroup};

/// Either an integer polynomial with a prime and a key polynomial `phi`, or a
/// bare sequence of coefficient valuations `vals[k] = v(a_k)`.
#[derive(Clone, Debug)]
pub enum BoundInput {
    Polynomial {
        f: IntPolynomial,
        p: u64,
        phi: IntPolynomial,
    },
    Valuations {
        vals: Vec<ExtendedValue>,
        group: ValueGroup,
        m: usize,
    },
}

impl BoundInput {
    pub fn evaluate(&self) -> Result<BoundReport> {
        match self {
            BoundInput::Polynomial { f, p, phi } => factor_degree_bound(f, *p, phi),
            BoundInput::Valuations { vals, group, m } => bound_from_valuations(vals, *group, *m),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct EdgeBound {
    pub k_prev: usize,
    pub k_next: usize,
    pub slope: Value,
    /// `v(a_{k_prev}) - v(a_{k_next})`.
    pub drop: Value,
    pub d: usize,
}

impl EdgeBound {
    pub fn width(&self) -> usize {
        self.k_next - self.k_prev
    }
}

/// Outcome of the older criterion: with `k` the first index minimising
/// `r_i / (s - i)`, a factor of degree at least `s - k` exists when
/// `gcd(r_k, s - k) = 1`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct LegacyReport {
    pub s: usize,
    pub k: usize,
    #[serde(serialize_with = "as_string")]
    pub r_k: BigInt,
    pub coprime: bool,
    pub bound: Option<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct BoundReport {
    pub group: ValueGroup,
    pub prime: Option<u64>,
    pub f: Option<String>,
    pub phi: Option<String>,
    /// The polynomial the polygon was built for, after removing `phi^e`.
    pub cofactor: Option<String>,
    pub deg_f: usize,
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub stripped_phi_power: usize,
    /// `v(a_k)` for the expansion of the cofactor, indexed by `k`.
    pub valuations: Vec<ExtendedValue>,
    pub polygon: NewtonPolygon,
    pub edges: Vec<EdgeBound>,
    pub bound: usize,
    pub cofactor_bound: usize,
    pub legacy: Option<LegacyReport>,
    pub hypotheses: Vec<String>,
}

impl BoundReport {
    pub fn cofactor_bound(&self, deg_f: usize) -> usize {
        cofactor_bound(self, deg_f)
    }
}

fn as_string<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Upper bound on `min(deg f_1, deg f_2)` over all factorizations `f = f_1 f_2`.
pub fn cofactor_bound(report: &BoundReport, deg_f: usize) -> usize {
    deg_f.checked_sub(report.bound).expect("bound never exceeds the degree")
}

/// `width / gcd(width, drop)`: the integer form of `d_j` for the value group `Z`.
pub fn gcd_edge_degree(width: usize, drop: &BigInt) -> usize {
    let g = BigInt::from(width).gcd(drop);
    (BigInt::from(width) / g).to_usize().unwrap()
}

fn first_unit_index(vals: &[ExtendedValue]) -> Result<usize> {
    match vals.iter().position(ExtendedValue::is_zero) {
        None => Err(Error::NoUnitCoefficient),
        Some(0) => Err(Error::UnitConstantTerm),
        Some(s) if vals[..s].iter().all(ExtendedValue::is_infinite) => Err(Error::NoLowerCoefficient { s }),
        Some(s) => Ok(s),
    }
}

fn check_valuations(vals: &[ExtendedValue], group: ValueGroup) -> Result<()> {
    if vals.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    for (k, v) in vals.iter().enumerate() {
        if let Some(v) = v.finite() {
            group.check_rank(v)?;
            if !v.is_integral() {
                return Err(Error::InvalidInput(format!("v(a_{k}) = {v} is not in the value group")));
            }
            if v.is_negative() {
                return Err(Error::NegativeValuation { index: k });
            }
        }
    }
    let n = vals.len() - 1;
    if vals[n].is_infinite() {
        return Err(Error::ZeroLeading(n));
    }
    Ok(())
}

struct Analysis {
    n: usize,
    s: usize,
    polygon: NewtonPolygon,
    edges: Vec<EdgeBound>,
    max_d: usize,
}

/// The shared pipeline on valuations of an expansion with `a_0 != 0`.
fn analyze(vals: &[ExtendedValue], group: ValueGroup) -> Result<Analysis> {
    let s = first_unit_index(vals)?;
    let polygon = build_polygon(&points_from_valuations(vals))?;
    let mut edges = Vec::new();
    for e in positive_edges(&polygon, s) {
        let d = smallest_denominator(&e.slope, group)?.d;
        let d = d.to_usize().expect("d divides the edge width");
        if group == ValueGroup::Integers {
            let drop = e.drop.as_rational().unwrap().to_integer();
            debug_assert_eq!(d, gcd_edge_degree(e.width(), &drop));
        }
        edges.push(EdgeBound {
            k_prev: e.k_prev,
            k_next: e.k_next,
            slope: e.slope,
            drop: e.drop,
            d,
        });
    }
    debug_assert!(edges.first().is_some_and(|e| e.k_prev == 0));
    debug_assert!(edges.last().is_some_and(|e| e.k_next == s));
    let max_d = edges.iter().map(|e| e.d).max().ok_or(Error::NoLowerCoefficient { s })?;
    Ok(Analysis {
        n: vals.len() - 1,
        s,
        polygon,
        edges,
        max_d,
    })
}

fn hypothesis_notes(vals: &[ExtendedValue], s: usize, e: usize, phi_name: &str) -> Vec<String> {
    vec![
        format!("f = {phi_name}^e * g with e = {e}; the polygon is built for g"),
        format!("v(a_0) = {} > 0 (a_0 != 0 after stripping)", vals[0]),
        format!("s = {s} is the smallest index with v(a_s) = 0"),
        format!("a_0 is a nonzero coefficient with index 0 < s"),
    ]
}

/// The full pipeline for an integer polynomial `f`, a prime `p` and a monic
/// `phi` whose reduction modulo `p` is irreducible.
pub fn factor_degree_bound(f: &IntPolynomial, p: u64, phi: &IntPolynomial) -> Result<BoundReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    check_phi(phi)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !ff_irreducible(&phi.reduce_mod(p))? {
        return Err(Error::PhiReducible {
            phi: phi.to_string(),
            p,
        });
    }
    let mut g = f.clone();
    let mut e = 0;
    loop {
        let (q, r) = g.div_rem_monic(phi);
        if !r.is_zero() {
            break;
        }
        g = q;
        e += 1;
    }
    let expansion = phi_expansion(&g, phi)?;
    let vals = expansion.valuations(p);
    check_valuations(&vals, ValueGroup::Integers)?;
    let a = analyze(&vals, ValueGroup::Integers)?;
    let m = phi.degree().unwrap();
    let deg_f = f.degree().unwrap();
    let bound = a.max_d * m;
    let legacy = if *phi == IntPolynomial::x() {
        legacy_bound(f, p).ok()
    } else {
        None
    };
    let mut hypotheses = vec![format!("phi = {phi} is monic and irreducible modulo {p}")];
    hypotheses.extend(hypothesis_notes(&vals, a.s, e, "phi"));
    let mut report = BoundReport {
        group: ValueGroup::Integers,
        prime: Some(p),
        f: Some(f.to_string()),
        phi: Some(phi.to_string()),
        cofactor: Some(g.to_string()),
        deg_f,
        m,
        n: a.n,
        s: a.s,
        stripped_phi_power: e,
        valuations: vals,
        polygon: a.polygon,
        edges: a.edges,
        bound,
        cofactor_bound: 0,
        legacy,
        hypotheses,
    };
    report.cofactor_bound = cofactor_bound(&report, deg_f);
    Ok(report)
}

/// The same pipeline on bare valuations `vals[k] = v(a_k)` over `group`, with
/// a nominal `deg(phi) = m`. Leading infinite entries count as a factor `phi^e`.
pub fn bound_from_valuations(vals: &[ExtendedValue], group: ValueGroup, m: usize) -> Result<BoundReport> {
    if m == 0 {
        return Err(Error::InvalidInput("phi degree m must be positive".into()));
    }
    check_valuations(vals, group)?;
    let e = vals.iter().take_while(|v| v.is_infinite()).count();
    let stripped = &vals[e..];
    let a = analyze(stripped, group)?;
    let deg_f = (vals.len() - 1) * m;
    let legacy = if group == ValueGroup::Integers && m == 1 {
        legacy_from_valuations(vals).ok()
    } else {
        None
    };
    let mut hypotheses = vec![format!("value group {group}; nominal deg(phi) = {m}")];
    hypotheses.extend(hypothesis_notes(stripped, a.s, e, "phi"));
    let mut report = BoundReport {
        group,
        prime: None,
        f: None,
        phi: None,
        cofactor: None,
        deg_f,
        m,
        n: a.n,
        s: a.s,
        stripped_phi_power: e,
        valuations: stripped.to_vec(),
        polygon: a.polygon,
        edges: a.edges,
        bound: a.max_d * m,
        cofactor_bound: 0,
        legacy,
        hypotheses,
    };
    report.cofactor_bound = cofactor_bound(&report, deg_f);
    Ok(report)
}

/// Older criterion on coefficient valuations `r_i = vals[i]`.
pub fn legacy_from_valuations(vals: &[ExtendedValue]) -> Result<LegacyReport> {
    let s = match vals.iter().position(ExtendedValue::is_zero) {
        None => return Err(Error::NoUnitCoefficient),
        Some(0) => return Err(Error::UnitConstantTerm),
        Some(s) => s,
    };
    let mut best: Option<(usize, Value)> = None;
    for (i, v) in vals[..s].iter().enumerate() {
        let Some(v) = v.finite() else { continue };
        let ratio = v.div_int((s - i) as i64);
        if best.as_ref().is_none_or(|(_, b)| ratio < *b) {
            best = Some((i, ratio));
        }
    }
    let (k, _) = best.ok_or(Error::NoLowerCoefficient { s })?;
    let r_k = vals[k]
        .finite()
        .and_then(Value::as_rational)
        .filter(|q| q.is_integer())
        .ok_or_else(|| Error::InvalidInput("legacy criterion needs integer valuations".into()))?
        .to_integer();
    let coprime = r_k.gcd(&BigInt::from(s - k)).is_one();
    Ok(LegacyReport {
        s,
        k,
        r_k,
        coprime,
        bound: coprime.then_some(s - k),
    })
}

pub fn legacy_bound(f: &IntPolynomial, p: u64) -> Result<LegacyReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let vals: Vec<ExtendedValue> = f.coeffs().iter().map(|c| padic_valuation(c, p)).collect();
    legacy_from_valuations(&vals)
}

/// Closed form for `x^n + a x^m + b` with `v(a) = s`, `v(b) = r` and
/// `(n - m) r > n s > 0`: `max(m / gcd(m, r - s), (n - m) / gcd(n - m, s))`.
pub fn trinomial_bound(n: u64, m: u64, s: u64, r: u64) -> Result<u64> {
    if !(n > m && m >= 1) {
        return Err(Error::HypothesisFailed(format!(
            "need n > m >= 1, got n = {n}, m = {m}"
        )));
    }
    let lhs = (n - m) as u128 * r as u128;
    let rhs = n as u128 * s as u128;
    if !(lhs > rhs && rhs > 0) {
        return Err(Error::HypothesisFailed(format!(
            "need (n-m)r > ns > 0, got (n-m)r = {lhs}, ns = {rhs}"
        )));
    }
    Ok((m / m.gcd(&(r - s))).max((n - m) / (n - m).gcd(&s)))
}

/// `x^n + q^s x^m + q^r`, a concrete trinomial with `v_q(a) = s` and `v_q(b) = r`.
pub fn realize_trinomial(n: usize, m: usize, s: u32, r: u32, q: u64) -> IntPolynomial {
    let base = BigInt::from(q);
    let mut f = &IntPolynomial::monomial(1, n) + &IntPolynomial::monomial(base.pow(s), m);
    f = &f + &IntPolynomial::constant(base.pow(r));
    f
}

/// Per-prime results for one polynomial and the best bound among them.
#[derive(Clone, Debug)]
pub struct PrimeScan {
    pub results: Vec<(u64, Result<BoundReport>)>,
}

impl PrimeScan {
    /// `(p, bound)` with the largest bound; the first such prime wins ties.
    pub fn best(&self) -> Option<(u64, usize)> {
        self.results
            .iter()
            .filter_map(|(p, r)| r.as_ref().ok().map(|r| (*p, r.bound)))
            .fold(None, |acc: Option<(u64, usize)>, (p, b)| match acc {
                Some((_, best)) if best >= b => acc,
                _ => Some((p, b)),
            })
    }
}

pub fn scan_primes(f: &IntPolynomial, phi: &IntPolynomial, primes: &[u64]) -> PrimeScan {
    PrimeScan {
        results: primes.iter().map(|&p| (p, factor_degree_bound(f, p, phi))).collect(),
    }
}
