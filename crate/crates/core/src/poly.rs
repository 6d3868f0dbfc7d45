//! Dense univariate polynomials with arbitrary-precision integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::finite_field::FfPolynomial;
use crate::valuation::{gauss_valuation, ExtendedValue};

/// Coefficient `i` is the coefficient of `x^i`; no trailing zeros are stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    pub fn x() -> Self {
        Self::monomial(1, 1)
    }

    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// gcd of the coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn primitive_part(&self) -> IntPolynomial {
        let c = self.content();
        if c.is_zero() {
            return self.clone();
        }
        let mut coeffs: Vec<BigInt> = self.coeffs.iter().map(|a| a / &c).collect();
        if coeffs.last().is_some_and(Signed::is_negative) {
            coeffs.iter_mut().for_each(|a| *a = -&*a);
        }
        IntPolynomial { coeffs }
    }

    pub fn derivative(&self) -> IntPolynomial {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigInt) -> IntPolynomial {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Euclidean division by a monic divisor; the quotient and remainder stay integral.
    pub fn div_rem_monic(&self, divisor: &IntPolynomial) -> (IntPolynomial, IntPolynomial) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let m = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= m {
            return (IntPolynomial::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - m];
        for k in (0..quot.len()).rev() {
            let lead = std::mem::take(&mut rem[k + m]);
            if lead.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs[..m].iter().enumerate() {
                rem[k + j] -= &lead * d;
            }
            quot[k] = lead;
        }
        rem.truncate(m);
        (Self::new(quot), Self::new(rem))
    }

    /// Remainder of `lc(b)^(deg a - deg b + 1) * a` on division by `b`.
    pub fn pseudo_rem(&self, b: &IntPolynomial) -> IntPolynomial {
        let db = b.degree().expect("pseudo-division by zero");
        let lc = b.leading().unwrap().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lead = r.leading().unwrap().clone();
            r = &r.scale(&lc) - &(&IntPolynomial::monomial(lead, dr - db) * b);
        }
        r
    }

    /// Primitive gcd over `Q[x]` via the primitive remainder sequence.
    pub fn gcd(&self, other: &IntPolynomial) -> IntPolynomial {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part()
    }

    /// Squarefree over `Q`: `gcd(f, f')` is constant.
    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// `f(x + shift)`, by Horner's rule.
    pub fn shift(&self, shift: &BigInt) -> IntPolynomial {
        let lin = IntPolynomial::new(vec![shift.clone(), BigInt::one()]);
        self.coeffs.iter().rev().fold(IntPolynomial::zero(), |acc, c| {
            &(&acc * &lin) + &IntPolynomial::constant(c.clone())
        })
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn pow(&self, e: usize) -> IntPolynomial {
        (0..e).fold(IntPolynomial::constant(1), |acc, _| &acc * self)
    }

    pub fn reduce_mod(&self, p: u64) -> FfPolynomial {
        let q = BigInt::from(p);
        FfPolynomial::new(
            p,
            self.coeffs.iter().map(|c| c.mod_floor(&q).to_u64().unwrap()).collect(),
        )
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

/// Renders in the input grammar, highest power first: `x^4 + 2*x^2 + 4`.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// `f = sum a_i(x) * phi(x)^i` with `deg a_i < deg phi`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhiExpansion {
    pub phi: IntPolynomial,
    pub terms: Vec<IntPolynomial>,
}

impl PhiExpansion {
    /// Degree of `f` in `phi` (index of the last term).
    pub fn n(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn valuations(&self, p: u64) -> Vec<ExtendedValue> {
        self.terms.iter().map(|t| gauss_valuation(t, p)).collect()
    }

    pub fn reconstruct(&self) -> IntPolynomial {
        self.terms
            .iter()
            .rev()
            .fold(IntPolynomial::zero(), |acc, t| &(&acc * &self.phi) + t)
    }
}

pub fn check_phi(phi: &IntPolynomial) -> Result<()> {
    if phi.is_monic() && phi.degree() >= Some(1) {
        Ok(())
    } else {
        Err(Error::InvalidPhi(phi.to_string()))
    }
}

/// Expansion by the chain of Euclidean divisions `f = q_0`, `q_i = q_{i+1} phi + a_i`.
pub fn phi_expansion(f: &IntPolynomial, phi: &IntPolynomial) -> Result<PhiExpansion> {
    check_phi(phi)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut terms = Vec::new();
    let mut rest = f.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem_monic(phi);
        terms.push(r);
        rest = q;
    }
    Ok(PhiExpansion {
        phi: phi.clone(),
        terms,
    })
}
