//! Polynomials over prime fields: irreducibility, distinct-degree factorization,
//! equal-degree splitting and degree-partition bookkeeping.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, q: u64) -> u64 {
    assert!(!a.is_multiple_of(q), "zero has no inverse");
    pow_mod(a, q - 2, q)
}

/// Deterministic Miller-Rabin; the witness set is exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&n| is_prime(n)).collect()
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut t = 2;
    while t * t <= n {
        if n.is_multiple_of(t) {
            out.push(t);
            while n.is_multiple_of(t) {
                n /= t;
            }
        }
        t += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Polynomial over `F_q` with coefficients reduced into `[0, q)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FfPolynomial {
    q: u64,
    coeffs: Vec<u64>,
}

impl FfPolynomial {
    pub fn new(q: u64, coeffs: Vec<u64>) -> Self {
        let mut p = FfPolynomial {
            q,
            coeffs: coeffs.into_iter().map(|c| c % q).collect(),
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn zero(q: u64) -> Self {
        FfPolynomial { q, coeffs: Vec::new() }
    }

    pub fn one(q: u64) -> Self {
        FfPolynomial::new(q, vec![1])
    }

    pub fn x(q: u64) -> Self {
        FfPolynomial::new(q, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn monic(&self) -> FfPolynomial {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lc) => self.scale(inv_mod(lc, self.q)),
        }
    }

    pub fn scale(&self, k: u64) -> FfPolynomial {
        FfPolynomial::new(self.q, self.coeffs.iter().map(|&c| mul_mod(c, k, self.q)).collect())
    }

    pub fn derivative(&self) -> FfPolynomial {
        FfPolynomial::new(
            self.q,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % self.q, self.q))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &FfPolynomial) -> (FfPolynomial, FfPolynomial) {
        let dd = d.degree().expect("division by zero polynomial");
        let q = self.q;
        if self.coeffs.len() <= dd {
            return (FfPolynomial::zero(q), self.clone());
        }
        let inv = inv_mod(d.coeffs[dd], q);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = mul_mod(rem[k + dd], inv, q);
            if c == 0 {
                continue;
            }
            quot[k] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = (rem[k + j] + q - mul_mod(c, dc, q)) % q;
            }
        }
        rem.truncate(dd);
        (FfPolynomial::new(q, quot), FfPolynomial::new(q, rem))
    }

    pub fn rem(&self, d: &FfPolynomial) -> FfPolynomial {
        self.div_rem(d).1
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &FfPolynomial) -> FfPolynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mul_mod(&self, other: &FfPolynomial, m: &FfPolynomial) -> FfPolynomial {
        (self * other).rem(m)
    }

    pub fn pow_mod(&self, exp: &BigUint, m: &FfPolynomial) -> FfPolynomial {
        let mut acc = FfPolynomial::one(self.q).rem(m);
        let base = self.rem(m);
        for i in (0..exp.bits()).rev() {
            acc = acc.mul_mod(&acc, m);
            if exp.bit(i) {
                acc = acc.mul_mod(&base, m);
            }
        }
        acc
    }

    fn pow_q_mod(&self, m: &FfPolynomial) -> FfPolynomial {
        self.pow_mod(&BigUint::from(self.q), m)
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }
}

impl Add for &FfPolynomial {
    type Output = FfPolynomial;
    fn add(self, rhs: &FfPolynomial) -> FfPolynomial {
        let q = self.q;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &FfPolynomial, i: usize| p.coeffs.get(i).copied().unwrap_or(0);
        FfPolynomial::new(q, (0..n).map(|i| (get(self, i) + get(rhs, i)) % q).collect())
    }
}

impl Sub for &FfPolynomial {
    type Output = FfPolynomial;
    fn sub(self, rhs: &FfPolynomial) -> FfPolynomial {
        let q = self.q;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &FfPolynomial, i: usize| p.coeffs.get(i).copied().unwrap_or(0);
        FfPolynomial::new(q, (0..n).map(|i| (get(self, i) + q - get(rhs, i)) % q).collect())
    }
}

impl Mul for &FfPolynomial {
    type Output = FfPolynomial;
    fn mul(self, rhs: &FfPolynomial) -> FfPolynomial {
        let q = self.q;
        if self.is_zero() || rhs.is_zero() {
            return FfPolynomial::zero(q);
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, q)) % q;
            }
        }
        FfPolynomial::new(q, out)
    }
}

impl fmt::Display for FfPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (mod {})", self.q);
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match (k, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".into(),
                (1, c) => format!("{c}*x"),
                (k, 1) => format!("x^{k}"),
                (k, c) => format!("{c}*x^{k}"),
            })
            .collect();
        write!(f, "{} (mod {})", terms.join(" + "), self.q)
    }
}

/// Rabin's test: `x^(q^n) = x mod g` and `gcd(x^(q^(n/t)) - x, g) = 1` for primes `t | n`.
pub fn ff_irreducible(g: &FfPolynomial) -> Result<bool> {
    let n = match g.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(n) => n,
    };
    let g = g.monic();
    let x = FfPolynomial::x(g.q);
    // frob[k] = x^(q^k) mod g
    let mut frob = vec![x.rem(&g)];
    for k in 1..=n {
        let next = frob[k - 1].pow_q_mod(&g);
        frob.push(next);
    }
    if frob[n] != x.rem(&g) {
        return Ok(false);
    }
    for t in prime_divisors(n) {
        let h = &frob[n / t] - &x;
        if !h.gcd(&g).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Multiset of irreducible-factor degrees of a polynomial modulo `q`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DegreePartition {
    pub modulus: u64,
    /// Sorted in decreasing order; empty when `squarefree` is false.
    pub degrees: Vec<usize>,
    pub squarefree: bool,
}

impl DegreePartition {
    pub fn total(&self) -> usize {
        self.degrees.iter().sum()
    }
}

/// Products of the irreducible factors of each degree: `(d, g_d)` for every nontrivial `g_d`.
fn distinct_degree_groups(g: &FfPolynomial) -> Vec<(usize, FfPolynomial)> {
    let q = g.q;
    let x = FfPolynomial::x(q);
    let mut rest = g.monic();
    let mut h = x.rem(&rest);
    let mut groups = Vec::new();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_q_mod(&rest);
        let gd = (&h - &x).gcd(&rest);
        if !gd.is_one() {
            rest = rest.div_rem(&gd).0;
            h = h.rem(&rest);
            groups.push((d, gd));
        }
        d += 1;
    }
    if let Some(r) = rest.degree().filter(|&r| r > 0) {
        groups.push((r, rest));
    }
    groups
}

pub fn distinct_degree_factorization(g: &FfPolynomial) -> DegreePartition {
    if !g.is_squarefree() {
        return DegreePartition {
            modulus: g.q,
            degrees: Vec::new(),
            squarefree: false,
        };
    }
    let mut degrees: Vec<usize> = distinct_degree_groups(g)
        .into_iter()
        .flat_map(|(d, gd)| std::iter::repeat_n(d, gd.degree().unwrap() / d))
        .collect();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    DegreePartition {
        modulus: g.q,
        degrees,
        squarefree: true,
    }
}

fn random_below(rng: &mut ChaCha8Rng, g: &FfPolynomial) -> FfPolynomial {
    let n = g.degree().unwrap();
    FfPolynomial::new(g.q, (0..n).map(|_| rng.gen_range(0..g.q)).collect())
}

/// Cantor-Zassenhaus splitting of `g`, a product of distinct monic irreducibles of degree `d`.
pub fn equal_degree_split(g: &FfPolynomial, d: usize, rng: &mut ChaCha8Rng) -> Vec<FfPolynomial> {
    let n = g.degree().expect("zero polynomial");
    if n == d {
        return vec![g.monic()];
    }
    let q = g.q;
    loop {
        let a = random_below(rng, g);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if q == 2 {
            // trace map a + a^2 + ... + a^(2^(nd - 1)) over F_(2^d)
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = t.mul_mod(&t, g);
                acc = &acc + &t;
            }
            acc
        } else {
            let e = (BigUint::from(q).pow(d as u32) - BigUint::one()) >> 1;
            &a.pow_mod(&e, g) - &FfPolynomial::one(q)
        };
        let h = b.gcd(g);
        if let Some(hd) = h.degree() {
            if hd > 0 && hd < n {
                let other = g.div_rem(&h).0;
                let mut out = equal_degree_split(&h, d, rng);
                out.extend(equal_degree_split(&other, d, rng));
                return out;
            }
        }
    }
}

/// Complete factorization of a squarefree polynomial into monic irreducibles,
/// reproducible from `seed`.
pub fn factor_squarefree(g: &FfPolynomial, seed: u64) -> Vec<FfPolynomial> {
    assert!(g.is_squarefree(), "input must be squarefree");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<FfPolynomial> = distinct_degree_groups(g)
        .into_iter()
        .flat_map(|(d, gd)| equal_degree_split(&gd, d, &mut rng))
        .collect();
    out.sort_by(|a, b| (a.degree(), &a.coeffs).cmp(&(b.degree(), &b.coeffs)));
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Inconclusive,
}

fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Whether the parts of `fine` can be grouped into blocks whose sums are exactly `coarse`.
pub fn is_coarsening(coarse: &[usize], fine: &[usize]) -> bool {
    fn place(items: &[usize], bins: &mut [usize]) -> bool {
        let Some((&item, rest)) = items.split_first() else {
            return bins.iter().all(|&b| b == 0);
        };
        let mut tried = Vec::new();
        for i in 0..bins.len() {
            let cap = bins[i];
            if cap < item || tried.contains(&cap) {
                continue;
            }
            tried.push(cap);
            bins[i] -= item;
            if place(rest, bins) {
                return true;
            }
            bins[i] += item;
        }
        false
    }
    if coarse.iter().sum::<usize>() != fine.iter().sum::<usize>() {
        return false;
    }
    let mut items = fine.to_vec();
    items.sort_unstable_by(|a, b| b.cmp(a));
    let mut bins = coarse.to_vec();
    place(&items, &mut bins)
}

/// Partitions of `n` that coarsen every supplied mod-`q` partition.
pub fn coarsening_candidates(n: usize, parts: &[DegreePartition]) -> Vec<Vec<usize>> {
    partitions(n)
        .into_iter()
        .filter(|cand| parts.iter().all(|p| is_coarsening(cand, &p.degrees)))
        .collect()
}

/// `Verified` when every degree partition compatible with all of `parts` has a part `>= d`.
pub fn partition_consistency(n: usize, d: usize, parts: &[DegreePartition]) -> Result<Verdict> {
    for p in parts {
        if !p.squarefree || p.total() != n {
            return Err(Error::InvalidInput(format!(
                "partition modulo {} is unusable for degree {n}",
                p.modulus
            )));
        }
    }
    let candidates = coarsening_candidates(n, parts);
    if candidates.is_empty() {
        return Err(Error::InconsistentPartitions(n));
    }
    if candidates.iter().all(|c| c[0] >= d) {
        Ok(Verdict::Verified)
    } else {
        Ok(Verdict::Inconclusive)
    }
}
