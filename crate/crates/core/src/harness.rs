//! Soundness campaigns: multiply polynomials whose irreducibility is certified
//! independently, run the bound engine at many primes, and check that no
//! reported bound exceeds the largest true factor degree.

use num_bigint::BigInt;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bound::factor_degree_bound;
use crate::diagnostics::{check_edge_identities, EdgeCheck};
use crate::error::{Error, Result};
use crate::finite_field::{
    distinct_degree_factorization, ff_irreducible, partition_consistency, primes_up_to, DegreePartition, Verdict,
};
use crate::poly::IntPolynomial;

const MAX_RETRIES: usize = 10_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Eisenstein {
        p: u64,
    },
    /// `f(x) = h(x + shift)` with `h` Eisenstein at `p`.
    ShiftedEisenstein {
        p: u64,
        shift: i64,
    },
    /// `f mod q` is irreducible of the same degree as `f`.
    FiniteFieldIrreducible {
        q: u64,
    },
}

impl Certificate {
    pub fn prime(&self) -> u64 {
        match *self {
            Certificate::Eisenstein { p } | Certificate::ShiftedEisenstein { p, .. } => p,
            Certificate::FiniteFieldIrreducible { q } => q,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CertifiedIrreducible {
    #[serde(serialize_with = "as_display")]
    pub poly: IntPolynomial,
    pub degree: usize,
    pub certificate: Certificate,
}

fn as_display<S: serde::Serializer>(p: &IntPolynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

pub fn is_eisenstein(f: &IntPolynomial, p: u64) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    let p = BigInt::from(p);
    let c = f.coeffs();
    c[..n].iter().all(|a| a.is_multiple_of(&p)) && !c[n].is_multiple_of(&p) && !c[0].is_multiple_of(&(&p * &p))
}

impl CertifiedIrreducible {
    /// Validates the certificate against the polynomial.
    pub fn new(poly: IntPolynomial, certificate: Certificate) -> Result<Self> {
        let ok = match certificate {
            Certificate::Eisenstein { p } => is_eisenstein(&poly, p),
            Certificate::ShiftedEisenstein { p, shift } => is_eisenstein(&poly.shift(&BigInt::from(-shift)), p),
            Certificate::FiniteFieldIrreducible { q } => {
                let r = poly.reduce_mod(q);
                r.degree().is_some() && r.degree() == poly.degree() && ff_irreducible(&r)?
            }
        };
        if !ok {
            return Err(Error::InvalidInput(format!("{poly} does not satisfy {certificate:?}")));
        }
        Ok(CertifiedIrreducible {
            degree: poly.degree().unwrap(),
            poly,
            certificate,
        })
    }
}

fn unit_coeff(rng: &mut ChaCha8Rng, p: i64) -> i64 {
    loop {
        let c = rng.gen_range(-9i64..=9);
        if c % p != 0 {
            return c;
        }
    }
}

fn eisenstein_candidate(rng: &mut ChaCha8Rng, degree: usize, p: i64) -> IntPolynomial {
    let mut c = Vec::with_capacity(degree + 1);
    c.push(p * unit_coeff(rng, p));
    for _ in 1..degree {
        c.push(p * rng.gen_range(-3i64..=3));
    }
    c.push(unit_coeff(rng, p));
    IntPolynomial::from_i64s(&c)
}

/// A random polynomial of the given degree satisfying `certificate`.
/// The shift of a `ShiftedEisenstein` certificate is taken as given.
pub fn generate_certified_with(degree: usize, certificate: Certificate, rng: &mut ChaCha8Rng) -> CertifiedIrreducible {
    assert!(degree >= 1, "degree must be positive");
    for _ in 0..MAX_RETRIES {
        let poly = match certificate {
            Certificate::Eisenstein { p } => eisenstein_candidate(rng, degree, p as i64),
            Certificate::ShiftedEisenstein { p, shift } => {
                eisenstein_candidate(rng, degree, p as i64).shift(&BigInt::from(shift))
            }
            Certificate::FiniteFieldIrreducible { q } => {
                let mut c: Vec<i64> = (0..degree).map(|_| rng.gen_range(-9i64..=9)).collect();
                c.push(unit_coeff(rng, q as i64).abs());
                IntPolynomial::from_i64s(&c)
            }
        };
        if let Ok(cert) = CertifiedIrreducible::new(poly, certificate) {
            return cert;
        }
    }
    panic!("no certified polynomial of degree {degree} for {certificate:?} after {MAX_RETRIES} tries");
}

pub fn generate_certified(degree: usize, certificate: Certificate, seed: u64) -> CertifiedIrreducible {
    generate_certified_with(degree, certificate, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Violation {
    pub f: String,
    pub p: u64,
    pub bound: usize,
    pub max_true_degree: usize,
    pub vertices: Vec<(usize, String)>,
    /// A command line replaying the failing case.
    pub reproducer: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TrialOutcome {
    pub factors: Vec<CertifiedIrreducible>,
    pub max_true_degree: usize,
    pub best_bound: Option<usize>,
    pub applicable: usize,
    pub inapplicable: usize,
    pub errors: usize,
    pub identity_failures: usize,
    pub violations: Vec<Violation>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CampaignSummary {
    pub seed: u64,
    pub trials: usize,
    pub max_degree: usize,
    pub applicable: usize,
    pub inapplicable: usize,
    pub errors: usize,
    pub identity_failures: usize,
    /// Trials whose best bound equals the largest true factor degree (descriptive only).
    pub tight_trials: usize,
    pub violations: Vec<Violation>,
}

impl CampaignSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.errors == 0 && self.identity_failures == 0
    }
}

const CERT_PRIMES: [u64; 4] = [2, 3, 5, 7];

/// Deterministic per-trial seed.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed ^ (trial as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn random_certificate(rng: &mut ChaCha8Rng) -> Certificate {
    let p = *CERT_PRIMES.choose(rng).unwrap();
    match rng.gen_range(0..3) {
        0 => Certificate::Eisenstein { p },
        1 => Certificate::ShiftedEisenstein {
            p,
            shift: *[-2i64, -1, 1, 2].choose(rng).unwrap(),
        },
        _ => Certificate::FiniteFieldIrreducible { q: p },
    }
}

fn scan_set(factors: &[CertifiedIrreducible]) -> Vec<u64> {
    let mut primes = primes_up_to(50);
    primes.extend(factors.iter().map(|c| c.certificate.prime()));
    primes.sort_unstable();
    primes.dedup();
    primes
}

/// Runs the engine on a product of certified irreducibles at every scan prime.
pub fn check_product(factors: Vec<CertifiedIrreducible>) -> TrialOutcome {
    let f = factors.iter().fold(IntPolynomial::constant(1), |acc, c| &acc * &c.poly);
    let max_true_degree = factors.iter().map(|c| c.degree).max().unwrap_or(0);
    let x = IntPolynomial::x();
    let mut out = TrialOutcome {
        max_true_degree,
        best_bound: None,
        applicable: 0,
        inapplicable: 0,
        errors: 0,
        identity_failures: 0,
        violations: Vec::new(),
        factors: Vec::new(),
    };
    for p in scan_set(&factors) {
        match factor_degree_bound(&f, p, &x) {
            Ok(report) => {
                out.applicable += 1;
                out.best_bound = out.best_bound.max(Some(report.bound));
                match check_edge_identities(&report, &report.valuations) {
                    Ok(checks) if checks.iter().all(EdgeCheck::holds) => {}
                    _ => out.identity_failures += 1,
                }
                if report.bound > max_true_degree {
                    out.violations.push(Violation {
                        f: f.to_string(),
                        p,
                        bound: report.bound,
                        max_true_degree,
                        vertices: report
                            .polygon
                            .vertices
                            .iter()
                            .map(|v| (v.abscissa, v.val.to_string()))
                            .collect(),
                        reproducer: format!("irrbound bound --poly \"{f}\" --prime {p}"),
                    });
                }
            }
            Err(e) if e.is_inapplicable() => out.inapplicable += 1,
            Err(_) => out.errors += 1,
        }
    }
    out.factors = factors;
    out
}

pub fn run_trial(seed: u64, trial: usize, max_degree: usize) -> TrialOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, trial));
    let count = rng.gen_range(1..=3);
    let factors: Vec<CertifiedIrreducible> = (0..count)
        .map(|_| {
            let degree = rng.gen_range(1..=max_degree.max(1));
            let cert = random_certificate(&mut rng);
            generate_certified_with(degree, cert, &mut rng)
        })
        .collect();
    check_product(factors)
}

pub fn soundness_campaign(count: usize, max_degree: usize, seed: u64) -> CampaignSummary {
    let outcomes: Vec<TrialOutcome> = (0..count)
        .into_par_iter()
        .map(|i| run_trial(seed, i, max_degree))
        .collect();
    let mut summary = CampaignSummary {
        seed,
        trials: count,
        max_degree,
        applicable: 0,
        inapplicable: 0,
        errors: 0,
        identity_failures: 0,
        tight_trials: 0,
        violations: Vec::new(),
    };
    for o in outcomes {
        summary.applicable += o.applicable;
        summary.inapplicable += o.inapplicable;
        summary.errors += o.errors;
        summary.identity_failures += o.identity_failures;
        if o.best_bound == Some(o.max_true_degree) {
            summary.tight_trials += 1;
        }
        summary.violations.extend(o.violations);
    }
    summary
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PartitionReport {
    pub verdict: Verdict,
    pub reason: Option<String>,
    pub partitions: Vec<DegreePartition>,
}

impl PartitionReport {
    fn inconclusive(reason: impl Into<String>) -> Self {
        PartitionReport {
            verdict: Verdict::Inconclusive,
            reason: Some(reason.into()),
            partitions: Vec::new(),
        }
    }
}

/// Confirms from mod-`q` degree partitions that every factorization of `f`
/// over `Q` has a factor of degree at least `d`.
pub fn partition_verify(f: &IntPolynomial, d: usize, primes: &[u64]) -> Result<PartitionReport> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d <= 1 {
        return Ok(PartitionReport {
            verdict: Verdict::Verified,
            reason: Some("every partition has a part >= 1".into()),
            partitions: Vec::new(),
        });
    }
    if !f.is_squarefree() {
        return Ok(PartitionReport::inconclusive("f is not squarefree over Q"));
    }
    let partitions: Vec<DegreePartition> = primes
        .iter()
        .filter(|&&q| !f.leading().unwrap().is_multiple_of(&BigInt::from(q)))
        .map(|&q| distinct_degree_factorization(&f.reduce_mod(q)))
        .filter(|p| p.squarefree && p.total() == n)
        .collect();
    if partitions.is_empty() {
        return Ok(PartitionReport::inconclusive(
            "no usable prime: every reduction drops degree or is not squarefree",
        ));
    }
    let verdict = partition_consistency(n, d, &partitions)?;
    Ok(PartitionReport {
        verdict,
        reason: None,
        partitions,
    })
}

/// Primes tried by [`partition_verify`] when the caller supplies none.
pub fn default_verify_primes() -> Vec<u64> {
    primes_up_to(100)
}
