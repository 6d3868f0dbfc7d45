//! Machine (JSON) and human (aligned text) forms of the engine's reports.
//! Both are built from the same [`BoundReport`] values.

use std::fmt::Write;

use irrbound::diagnostics::{AdditivityVerdict, EdgeCheck};
use irrbound::harness::{CampaignSummary, PartitionReport};
use irrbound::render::{render_polygon, RenderMode};
use irrbound::{BoundReport, Error, ExtendedValue, LegacyReport};
use serde::Serialize;
use serde_json::{json, Value as Json};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Outcome for one prime (or one valuation vector).
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Ok { report: Box<BoundReport> },
    Inapplicable { message: String },
    Error { message: String },
}

impl Outcome {
    pub fn from_result(r: Result<BoundReport, Error>) -> Self {
        match r {
            Ok(report) => Outcome::Ok {
                report: Box::new(report),
            },
            Err(e) if e.is_inapplicable() => Outcome::Inapplicable { message: e.to_string() },
            Err(e) => Outcome::Error { message: e.to_string() },
        }
    }

    pub fn report(&self) -> Option<&BoundReport> {
        match self {
            Outcome::Ok { report } => Some(report),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeResult {
    pub prime: Option<u64>,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Clone, Debug, Serialize)]
pub struct Best {
    pub prime: Option<u64>,
    pub bound: usize,
    pub cofactor_bound: usize,
}

/// Everything `bound` computed for one input.
#[derive(Clone, Debug, Serialize)]
pub struct BoundDocument {
    pub input: Json,
    pub results: Vec<PrimeResult>,
    pub best: Option<Best>,
}

impl BoundDocument {
    pub fn new(input: Json, results: Vec<PrimeResult>) -> Self {
        let best = results
            .iter()
            .filter_map(|r| r.outcome.report().map(|rep| (r.prime, rep)))
            .fold(None::<(Option<u64>, &BoundReport)>, |acc, (p, rep)| match acc {
                Some((_, b)) if b.bound >= rep.bound => acc,
                _ => Some((p, rep)),
            })
            .map(|(prime, rep)| Best {
                prime,
                bound: rep.bound,
                cofactor_bound: rep.cofactor_bound,
            });
        BoundDocument { input, results, best }
    }

    /// 0 if some prime gave a bound, 1 if every failure was an inapplicable
    /// hypothesis, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.best.is_some() {
            0
        } else if self
            .results
            .iter()
            .any(|r| matches!(r.outcome, Outcome::Inapplicable { .. }))
        {
            1
        } else {
            2
        }
    }
}

pub fn with_version(command: &str, body: Json) -> Json {
    let mut doc = json!({ "version": VERSION, "command": command });
    if let (Some(d), Json::Object(b)) = (doc.as_object_mut(), body) {
        d.extend(b);
    }
    doc
}

pub fn to_json<T: Serialize>(v: &T) -> Json {
    serde_json::to_value(v).expect("reports serialize")
}

pub fn pretty(doc: &Json) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("json renders");
    s.push('\n');
    s
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

const LABEL: usize = 24;

fn field(out: &mut String, indent: usize, label: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{:indent$}{label:<LABEL$} {value}", "");
}

pub fn legacy_line(l: &LegacyReport) -> String {
    let g = if l.coprime { "= 1" } else { "> 1" };
    match l.bound {
        Some(b) => format!("{b} (s = {}, k = {}, r_k = {}, gcd(r_k, s - k) {g})", l.s, l.k, l.r_k),
        None => format!("n/a (s = {}, k = {}, r_k = {}, gcd(r_k, s - k) {g})", l.s, l.k, l.r_k),
    }
}

pub fn human_report(r: &BoundReport, indent: usize, ascii: bool) -> String {
    let mut out = String::new();
    field(&mut out, indent, "value group", r.group);
    field(&mut out, indent, "deg f", r.deg_f);
    field(&mut out, indent, "deg phi (m)", r.m);
    field(
        &mut out,
        indent,
        "stripped phi^e",
        format!("e = {}", r.stripped_phi_power),
    );
    field(&mut out, indent, "v(a_k), k = 0..n", join(&r.valuations));
    field(&mut out, indent, "n", r.n);
    field(&mut out, indent, "s", r.s);
    let _ = writeln!(out, "{:indent$}edges (k_prev, k_next, slope, d):", "");
    for e in &r.edges {
        let _ = writeln!(
            out,
            "{:indent$}  ({}, {}, {}, {})",
            "", e.k_prev, e.k_next, e.slope, e.d
        );
    }
    field(&mut out, indent, "bound", r.bound);
    field(&mut out, indent, "cofactor bound", r.cofactor_bound);
    if let Some(l) = &r.legacy {
        field(&mut out, indent, "legacy bound", legacy_line(l));
    }
    let _ = writeln!(out, "{:indent$}hypotheses:", "");
    for h in &r.hypotheses {
        let _ = writeln!(out, "{:indent$}  - {h}", "");
    }
    if ascii {
        for line in render_polygon(&r.polygon, RenderMode::Ascii).lines() {
            let _ = writeln!(out, "{:indent$}{line}", "");
        }
    }
    out
}

pub fn human_document(doc: &BoundDocument, ascii: bool) -> String {
    let mut out = format!("irrbound {VERSION}\n");
    if let Some(obj) = doc.input.as_object() {
        for key in ["f", "phi", "vals"] {
            if let Some(Json::String(v)) = obj.get(key) {
                field(&mut out, 0, key, v);
            }
        }
    }
    for r in &doc.results {
        match r.prime {
            Some(p) => {
                let _ = writeln!(out, "prime {p}:");
            }
            None => out.push_str("valuations:\n"),
        }
        match &r.outcome {
            Outcome::Ok { report } => out.push_str(&human_report(report, 2, ascii)),
            Outcome::Inapplicable { message } => {
                let _ = writeln!(out, "  inapplicable: {message}");
            }
            Outcome::Error { message } => {
                let _ = writeln!(out, "  error: {message}");
            }
        }
    }
    match &doc.best {
        Some(b) => {
            let at = b.prime.map_or(String::new(), |p| format!(" at p = {p}"));
            let _ = writeln!(
                out,
                "best: f has an irreducible factor of degree >= {}{at}; every factorization f = f1*f2 has min(deg f1, deg f2) <= {}",
                b.bound, b.cofactor_bound
            );
        }
        None => out.push_str("best: no bound\n"),
    }
    out
}

pub fn human_checks(checks: &[EdgeCheck]) -> String {
    let mut out = String::new();
    for c in checks {
        let _ = writeln!(out, "edge ({}, {}) slope {} d {}:", c.k_prev, c.k_next, c.lambda, c.d);
        field(&mut out, 2, "w", &c.w);
        field(&mut out, 2, "I, S", format!("{}, {}", c.index_min, c.index_max));
        for (name, ok) in [
            ("I = k_prev, S = k_next", c.endpoints),
            ("w at both endpoints", c.w_identity),
            ("chords below", c.lower_chords),
            ("chords above", c.upper_chords),
            ("d divides S - I", c.width_divisible),
        ] {
            let _ = writeln!(out, "  {name:<LABEL$} {}", if ok { "ok" } else { "FAILED" });
        }
    }
    out
}

pub fn human_additivity(v: &AdditivityVerdict) -> String {
    let mut out = format!("additivity at slope {}:\n", v.lambda);
    for (name, d) in [("f", &v.f), ("g", &v.g), ("f*g", &v.product)] {
        field(
            &mut out,
            2,
            name,
            format!("w = {}, I = {}, S = {}", d.w, d.index_min, d.index_max),
        );
    }
    let _ = writeln!(
        out,
        "  {:<LABEL$} {}",
        "I, S, w additive",
        if v.holds() { "ok" } else { "FAILED" }
    );
    out
}

pub fn human_campaign(s: &CampaignSummary) -> String {
    let mut out = String::new();
    field(&mut out, 0, "seed", s.seed);
    field(&mut out, 0, "trials", s.trials);
    field(&mut out, 0, "max factor degree", s.max_degree);
    field(&mut out, 0, "applicable runs", s.applicable);
    field(&mut out, 0, "inapplicable runs", s.inapplicable);
    field(&mut out, 0, "errors", s.errors);
    field(&mut out, 0, "identity failures", s.identity_failures);
    field(&mut out, 0, "tight trials", s.tight_trials);
    field(&mut out, 0, "violations", s.violations.len());
    for v in &s.violations {
        let _ = writeln!(
            out,
            "  {} at p = {}: bound {} > {}",
            v.f, v.p, v.bound, v.max_true_degree
        );
        let _ = writeln!(out, "    reproduce: {}", v.reproducer);
    }
    let _ = writeln!(out, "verdict: {}", if s.passed() { "PASS" } else { "FAIL" });
    out
}

pub fn human_partitions(r: &PartitionReport, d: usize) -> String {
    let mut out = String::new();
    field(
        &mut out,
        0,
        "claim",
        format!("some irreducible factor has degree >= {d}"),
    );
    for p in &r.partitions {
        field(&mut out, 0, &format!("degrees mod {}", p.modulus), join(&p.degrees));
    }
    if let Some(reason) = &r.reason {
        field(&mut out, 0, "note", reason);
    }
    field(&mut out, 0, "verdict", format!("{:?}", r.verdict).to_lowercase());
    out
}

pub fn vals_text(vals: &[ExtendedValue]) -> String {
    join(vals)
}
