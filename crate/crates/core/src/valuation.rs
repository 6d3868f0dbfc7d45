//! Exact value groups, extended values and the valuations used throughout.
//!
//! Values live in the divisible closure of a value group: a vector of exact
//! rationals, compared lexicographically. The rank-one case is the ordinary
//! ordered group of rationals containing `Z`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// An element of the divisible closure of `Z^r`, ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Value(Vec<BigRational>);

impl Value {
    pub fn new(components: Vec<BigRational>) -> Self {
        assert!(!components.is_empty(), "a value has rank at least 1");
        Value(components)
    }

    pub fn int(n: impl Into<BigInt>) -> Self {
        Value(vec![BigRational::from_integer(n.into())])
    }

    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Value(vec![BigRational::new(num.into(), den.into())])
    }

    pub fn from_rational(q: BigRational) -> Self {
        Value(vec![q])
    }

    pub fn from_ints(components: &[i64]) -> Self {
        Value::new(
            components
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero(rank: usize) -> Self {
        Value(vec![BigRational::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[BigRational] {
        &self.0
    }

    /// The single component of a rank-one value.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self.0.as_slice() {
            [q] => Some(q),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn sign(&self) -> Ordering {
        self.0.iter().find(|c| !c.is_zero()).map_or(Ordering::Equal, |c| {
            if c.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        })
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(BigRational::is_integer)
    }

    pub fn scale(&self, k: &BigRational) -> Value {
        Value(self.0.iter().map(|c| c * k).collect())
    }

    pub fn scale_int(&self, k: i64) -> Value {
        self.scale(&BigRational::from_integer(k.into()))
    }

    /// Divides by a nonzero integer.
    pub fn div_int(&self, k: i64) -> Value {
        assert!(k != 0, "division by zero");
        self.scale(&BigRational::new(BigInt::one(), k.into()))
    }

    fn check_rank(&self, other: &Value) {
        assert_eq!(self.rank(), other.rank(), "value rank mismatch");
    }
}

impl Add for &Value {
    type Output = Value;
    fn add(self, rhs: &Value) -> Value {
        self.check_rank(rhs);
        Value(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Value {
    type Output = Value;
    fn sub(self, rhs: &Value) -> Value {
        self.check_rank(rhs);
        Value(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Value {
    type Output = Value;
    fn neg(self) -> Value {
        Value(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [q] => write!(f, "{q}"),
            comps => {
                write!(f, "(")?;
                for (i, c) in comps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A value or the symbol `INFINITY` (the valuation of zero).
///
/// Variant order makes every finite value compare below `Infinity`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ExtendedValue {
    Finite(Value),
    Infinity,
}

impl ExtendedValue {
    pub fn int(n: impl Into<BigInt>) -> Self {
        ExtendedValue::Finite(Value::int(n))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedValue::Infinity)
    }

    pub fn finite(&self) -> Option<&Value> {
        match self {
            ExtendedValue::Finite(v) => Some(v),
            ExtendedValue::Infinity => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.finite().is_some_and(Value::is_zero)
    }
}

impl Add for &ExtendedValue {
    type Output = ExtendedValue;
    fn add(self, rhs: &ExtendedValue) -> ExtendedValue {
        match (self, rhs) {
            (ExtendedValue::Finite(a), ExtendedValue::Finite(b)) => ExtendedValue::Finite(a + b),
            _ => ExtendedValue::Infinity,
        }
    }
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValue::Finite(v) => v.fmt(f),
            ExtendedValue::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A discrete value group: `Z`, or `Z^r` under the lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ValueGroup {
    Integers,
    Lex(usize),
}

impl ValueGroup {
    pub fn rank(self) -> usize {
        match self {
            ValueGroup::Integers => 1,
            ValueGroup::Lex(r) => r,
        }
    }

    pub fn zero(self) -> Value {
        Value::zero(self.rank())
    }

    pub fn contains(self, v: &Value) -> bool {
        v.rank() == self.rank() && v.is_integral()
    }

    pub fn check_rank(self, v: &Value) -> Result<()> {
        if v.rank() == self.rank() {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                expected: self.rank(),
                found: v.rank(),
            })
        }
    }
}

impl fmt::Display for ValueGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueGroup::Integers => f.write_str("z"),
            ValueGroup::Lex(r) => write!(f, "zlex:{r}"),
        }
    }
}

impl Serialize for ValueGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Smallest positive integer `d` with `d * slope` in the value group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DenominatorWitness {
    pub slope: Value,
    pub d: BigInt,
}

/// Exact multiplicity of `p` in `c`, or `None` when `c = 0`.
pub fn padic_multiplicity(c: &BigInt, p: u64) -> Option<u64> {
    if c.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut rest = c.abs();
    let mut k = 0;
    loop {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return Some(k);
        }
        rest = q;
        k += 1;
    }
}

pub fn padic_valuation(c: &BigInt, p: u64) -> ExtendedValue {
    match padic_multiplicity(c, p) {
        Some(k) => ExtendedValue::int(k),
        None => ExtendedValue::Infinity,
    }
}

/// Gaussian prolongation of the `p`-adic valuation: the minimum coefficient valuation.
pub fn gauss_valuation(h: &IntPolynomial, p: u64) -> ExtendedValue {
    h.coeffs()
        .iter()
        .map(|c| padic_valuation(c, p))
        .min()
        .unwrap_or(ExtendedValue::Infinity)
}

pub fn smallest_denominator(slope: &Value, group: ValueGroup) -> Result<DenominatorWitness> {
    group.check_rank(slope)?;
    if !slope.is_positive() {
        return Err(Error::NonPositiveSlope(slope.to_string()));
    }
    let d = slope
        .components()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    Ok(DenominatorWitness {
        slope: slope.clone(),
        d,
    })
}
