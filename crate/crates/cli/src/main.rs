mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use irrbound::diagnostics::{additivity_check, check_edge_identities, EdgeCheck};
use irrbound::finite_field::{primes_up_to, Verdict};
use irrbound::harness::{default_verify_primes, partition_verify, soundness_campaign};
use irrbound::render::{render_polygon, RenderMode};
use irrbound::{
    bound_from_valuations, factor_degree_bound, legacy_bound, parse_coefficients, parse_group, parse_polynomial,
    parse_valuations, trinomial_bound, BoundReport, Error, ExtendedValue, IntPolynomial, ValueGroup,
};
use rayon::prelude::*;
use serde_json::{json, Value as Json};

use report::{
    human_additivity, human_campaign, human_checks, human_document, human_partitions, human_report, legacy_line,
    pretty, to_json, vals_text, with_version, BoundDocument, Outcome, PrimeResult,
};

const PRIMES_ENV: &str = "IRRBOUND_PRIMES";

#[derive(Parser)]
#[command(
    name = "irrbound",
    version,
    about = "Degree bounds for irreducible factors from Newton polygons"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the factor-degree bound.
    Bound(BoundArgs),
    /// Check the index identities along every edge.
    Diagnose(DiagnoseArgs),
    /// Run a soundness campaign, or confirm a bound from degree partitions.
    Verify(VerifyArgs),
    /// Closed-form bound for x^n + a x^m + b.
    Trinomial(TrinomialArgs),
    /// The older single-index criterion.
    Legacy(LegacyArgs),
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Polynomial expression, e.g. "x^5 + 2*x^4 + 64".
    #[arg(long, conflicts_with_all = ["coeffs", "vals"])]
    poly: Option<String>,
    /// Integer coefficients, constant term first.
    #[arg(long, conflicts_with = "vals")]
    coeffs: Option<String>,
    /// Valuations v(a_0), ..., v(a_n) of the phi-expansion; "inf" for zero.
    #[arg(long)]
    vals: Option<String>,
    /// Prime p; repeat to scan several. Ignored with --vals.
    #[arg(long = "prime")]
    primes: Vec<u64>,
    /// Monic phi whose reduction is irreducible; defaults to x.
    #[arg(long)]
    phi: Option<String>,
    /// Value group: z or zlex:R.
    #[arg(long, default_value = "z")]
    group: String,
    /// Degree of phi assumed with --vals.
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Read one polynomial per line from FILE.
    #[arg(long, conflicts_with_all = ["poly", "coeffs", "vals"])]
    batch: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    /// Append an ASCII drawing of the polygon.
    #[arg(long)]
    ascii: bool,
    /// Write an SVG drawing of the polygon to PATH.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct DiagnoseArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Second polynomial g: also check additivity of I and S on f*g at every edge slope.
    #[arg(long)]
    times: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 6)]
    max_degree: usize,
    /// Confirm the best bound for this polynomial from degree partitions instead.
    #[arg(long)]
    poly: Option<String>,
    /// Primes for the bound when --poly is given.
    #[arg(long = "prime")]
    primes: Vec<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TrinomialArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    m: u64,
    /// v(a) for the middle coefficient.
    #[arg(long)]
    s: u64,
    /// v(b) for the constant term.
    #[arg(long)]
    r: u64,
    /// Also run the engine on x^n + q^s x^m + q^r.
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LegacyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    json: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_inapplicable() { 1 } else { 2 },
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type CliResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bound(a) => run_bound(a),
        Command::Diagnose(a) => run_diagnose(a),
        Command::Verify(a) => run_verify(a),
        Command::Trinomial(a) => run_trinomial(a),
        Command::Legacy(a) => run_legacy(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("irrbound: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn default_primes() -> Result<Vec<u64>, Failure> {
    match std::env::var(PRIMES_ENV) {
        Ok(list) => list
            .split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| input_error(format!("{PRIMES_ENV} must be a comma-separated list of primes"))),
        Err(_) => Ok(primes_up_to(50)),
    }
}

enum Input {
    Polynomial {
        f: IntPolynomial,
        phi: IntPolynomial,
        primes: Vec<u64>,
    },
    Valuations {
        vals: Vec<ExtendedValue>,
        group: ValueGroup,
        m: usize,
    },
}

impl InputArgs {
    fn phi(&self) -> Result<IntPolynomial, Failure> {
        match &self.phi {
            Some(t) => Ok(parse_polynomial(t)?),
            None => Ok(IntPolynomial::x()),
        }
    }

    fn resolve(&self) -> Result<Input, Failure> {
        let group = parse_group(&self.group)?;
        if let Some(v) = &self.vals {
            let m = match (self.m, &self.phi) {
                (Some(m), _) => m,
                (None, Some(_)) => self.phi()?.degree().unwrap_or(0),
                (None, None) => 1,
            };
            return Ok(Input::Valuations {
                vals: parse_valuations(v, group)?,
                group,
                m,
            });
        }
        if group != ValueGroup::Integers {
            return Err(input_error("--group other than z needs --vals"));
        }
        let f = match (&self.poly, &self.coeffs) {
            (Some(t), _) => parse_polynomial(t)?,
            (None, Some(c)) => parse_coefficients(c)?,
            (None, None) => return Err(input_error("one of --poly, --coeffs or --vals is required")),
        };
        let primes = if self.primes.is_empty() {
            default_primes()?
        } else {
            self.primes.clone()
        };
        Ok(Input::Polynomial {
            f,
            phi: self.phi()?,
            primes,
        })
    }

    /// The input with exactly one prime, for commands that analyze a single valuation.
    fn resolve_single(&self) -> Result<(Input, Option<u64>), Failure> {
        let input = self.resolve()?;
        match &input {
            Input::Polynomial { .. } if self.primes.len() != 1 => Err(input_error("exactly one --prime is required")),
            Input::Polynomial { .. } => Ok((input, Some(self.primes[0]))),
            Input::Valuations { .. } => Ok((input, None)),
        }
    }
}

fn bound_document(input: &Input) -> BoundDocument {
    match input {
        Input::Polynomial { f, phi, primes } => {
            let results = primes
                .iter()
                .map(|&p| PrimeResult {
                    prime: Some(p),
                    outcome: Outcome::from_result(factor_degree_bound(f, p, phi)),
                })
                .collect();
            let desc = json!({
                "mode": "polynomial",
                "f": f.to_string(),
                "phi": phi.to_string(),
                "primes": primes,
                "group": ValueGroup::Integers.to_string(),
            });
            BoundDocument::new(desc, results)
        }
        Input::Valuations { vals, group, m } => {
            let results = vec![PrimeResult {
                prime: None,
                outcome: Outcome::from_result(bound_from_valuations(vals, *group, *m)),
            }];
            let desc = json!({
                "mode": "valuations",
                "vals": vals_text(vals),
                "group": group.to_string(),
                "m": m,
            });
            BoundDocument::new(desc, results)
        }
    }
}

fn best_report(doc: &BoundDocument) -> Option<&BoundReport> {
    let best = doc.best.as_ref()?;
    doc.results
        .iter()
        .find(|r| r.prime == best.prime && r.outcome.report().is_some_and(|rep| rep.bound == best.bound))
        .and_then(|r| r.outcome.report())
}

fn run_bound(a: BoundArgs) -> CliResult {
    if let Some(path) = &a.batch {
        return run_batch(&a, path);
    }
    let input = a.input.resolve()?;
    let doc = bound_document(&input);
    if a.json {
        let mut body = to_json(&doc);
        if a.ascii {
            if let Some(r) = best_report(&doc) {
                body["polygon_ascii"] = Json::String(render_polygon(&r.polygon, RenderMode::Ascii));
            }
        }
        print!("{}", pretty(&with_version("bound", body)));
    } else {
        print!("{}", human_document(&doc, a.ascii));
    }
    if let Some(path) = &a.svg {
        let Some(r) = best_report(&doc) else {
            return Err(input_error("no polygon to draw: no prime gave a bound"));
        };
        std::fs::write(path, render_polygon(&r.polygon, RenderMode::Svg))
            .map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))?;
    }
    let code = doc.exit_code() as u8;
    if code == 1 {
        eprintln!("irrbound: hypotheses fail at every prime tried; see the per-prime notes");
    }
    Ok(code)
}

fn run_batch(a: &BoundArgs, path: &PathBuf) -> CliResult {
    let text =
        std::fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    let phi = a.input.phi()?;
    let primes = if a.input.primes.is_empty() {
        default_primes()?
    } else {
        a.input.primes.clone()
    };
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let outputs: Vec<String> = lines
        .par_iter()
        .map(|&(line, src)| match parse_polynomial(src) {
            Ok(f) => {
                let doc = bound_document(&Input::Polynomial {
                    f,
                    phi: phi.clone(),
                    primes: primes.clone(),
                });
                if a.json {
                    let mut body = to_json(&doc);
                    body["line"] = json!(line);
                    serde_json::to_string(&with_version("bound", body)).unwrap()
                } else {
                    match &doc.best {
                        Some(b) => format!(
                            "line {line}: {src}: bound {} at p = {}",
                            b.bound,
                            b.prime.map_or("-".into(), |p| p.to_string())
                        ),
                        None => format!("line {line}: {src}: no bound"),
                    }
                }
            }
            Err(e) => {
                if a.json {
                    let body = json!({ "line": line, "error": e.to_string() });
                    serde_json::to_string(&with_version("bound", body)).unwrap()
                } else {
                    format!("line {line}: error: {e}")
                }
            }
        })
        .collect();
    for o in outputs {
        println!("{o}");
    }
    Ok(0)
}

/// `(f, phi, p)` behind a report built from a polynomial.
type PolySource = (IntPolynomial, IntPolynomial, u64);

fn single_report(input: &Input, prime: Option<u64>) -> Result<(BoundReport, Option<PolySource>), Failure> {
    match input {
        Input::Polynomial { f, phi, .. } => {
            let p = prime.unwrap();
            Ok((factor_degree_bound(f, p, phi)?, Some((f.clone(), phi.clone(), p))))
        }
        Input::Valuations { vals, group, m } => Ok((bound_from_valuations(vals, *group, *m)?, None)),
    }
}

fn run_diagnose(a: DiagnoseArgs) -> CliResult {
    let (input, prime) = a.input.resolve_single()?;
    let (report, poly) = single_report(&input, prime)?;
    let checks = check_edge_identities(&report, &report.valuations)?;
    let mut additivity = Vec::new();
    if let Some(g) = &a.times {
        let Some((f, phi, p)) = &poly else {
            return Err(input_error("--times needs a polynomial input"));
        };
        let g = parse_polynomial(g)?;
        for e in &report.edges {
            additivity.push(additivity_check(f, &g, phi, *p, &e.slope)?);
        }
    }
    let ok = checks.iter().all(EdgeCheck::holds) && additivity.iter().all(|v| v.holds());
    if a.json {
        let body = json!({
            "report": to_json(&report),
            "edge_checks": to_json(&checks),
            "additivity": to_json(&additivity),
            "holds": ok,
        });
        print!("{}", pretty(&with_version("diagnose", body)));
    } else {
        print!("{}", human_report(&report, 0, false));
        print!("{}", human_checks(&checks));
        for v in &additivity {
            print!("{}", human_additivity(v));
        }
        println!("verdict: {}", if ok { "all identities hold" } else { "FAILED" });
    }
    Ok(if ok { 0 } else { 3 })
}

fn run_verify(a: VerifyArgs) -> CliResult {
    let Some(text) = &a.poly else {
        if a.max_degree == 0 {
            return Err(input_error("--max-degree must be positive"));
        }
        let summary = soundness_campaign(a.count, a.max_degree, a.seed);
        if a.json {
            print!("{}", pretty(&with_version("verify", to_json(&summary))));
        } else {
            print!("{}", human_campaign(&summary));
        }
        return Ok(if summary.passed() { 0 } else { 3 });
    };
    let f = parse_polynomial(text)?;
    let primes = if a.primes.is_empty() {
        default_primes()?
    } else {
        a.primes.clone()
    };
    let doc = bound_document(&Input::Polynomial {
        f: f.clone(),
        phi: IntPolynomial::x(),
        primes,
    });
    let Some(best) = &doc.best else {
        return Err(Failure {
            code: doc.exit_code() as u8,
            message: "no prime gave a bound to verify".into(),
        });
    };
    let (code, partitions, message) = match partition_verify(&f, best.bound, &default_verify_primes()) {
        Ok(r) => (0, Some(r), None),
        Err(e @ Error::InconsistentPartitions(_)) => (3, None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    if a.json {
        let body = json!({
            "f": f.to_string(),
            "bound": best.bound,
            "prime": best.prime,
            "partitions": partitions.as_ref().map(to_json),
            "error": message,
        });
        print!("{}", pretty(&with_version("verify", body)));
    } else {
        println!("f: {f}");
        println!("bound {} at p = {}", best.bound, best.prime.unwrap_or(0));
        match &partitions {
            Some(r) => print!("{}", human_partitions(r, best.bound)),
            None => println!("verdict: FAILED ({})", message.as_deref().unwrap_or("")),
        }
    }
    if partitions.as_ref().is_some_and(|r| r.verdict == Verdict::Inconclusive) {
        eprintln!("irrbound: partition check inconclusive");
    }
    Ok(code)
}

fn run_trinomial(a: TrinomialArgs) -> CliResult {
    let formula = trinomial_bound(a.n, a.m, a.s, a.r)?;
    let mut engine = None;
    if let Some(q) = a.q {
        let (n, m) = (a.n as usize, a.m as usize);
        let s = u32::try_from(a.s).map_err(|_| input_error("--s too large"))?;
        let r = u32::try_from(a.r).map_err(|_| input_error("--r too large"))?;
        let f = irrbound::bound::realize_trinomial(n, m, s, r, q);
        let rep = factor_degree_bound(&f, q, &IntPolynomial::x())?;
        engine = Some((f.to_string(), rep.bound as u64));
    }
    let agree = engine.as_ref().is_none_or(|(_, b)| *b == formula);
    if a.json {
        let body = json!({
            "n": a.n, "m": a.m, "s": a.s, "r": a.r,
            "bound": formula,
            "realized": engine.as_ref().map(|(f, b)| json!({ "q": a.q, "f": f, "bound": b })),
            "agree": agree,
        });
        print!("{}", pretty(&with_version("trinomial", body)));
    } else {
        println!(
            "x^{} + a*x^{} + b with v(a) = {}, v(b) = {}: bound {formula}",
            a.n, a.m, a.s, a.r
        );
        if let Some((f, b)) = &engine {
            println!("engine on {f} at p = {}: bound {b}", a.q.unwrap());
        }
    }
    Ok(if agree { 0 } else { 3 })
}

fn run_legacy(a: LegacyArgs) -> CliResult {
    let (input, prime) = a.input.resolve_single()?;
    let report = match &input {
        Input::Polynomial { f, phi, .. } => {
            if *phi != IntPolynomial::x() {
                return Err(input_error("the legacy criterion uses phi = x"));
            }
            legacy_bound(f, prime.unwrap())?
        }
        Input::Valuations { vals, group, .. } => {
            if *group != ValueGroup::Integers {
                return Err(input_error("the legacy criterion needs --group z"));
            }
            irrbound::bound::legacy_from_valuations(vals)?
        }
    };
    if a.json {
        print!("{}", pretty(&with_version("legacy", to_json(&report))));
    } else {
        println!("legacy bound: {}", legacy_line(&report));
    }
    if report.bound.is_none() {
        eprintln!("irrbound: inapplicable: gcd(r_k, s - k) > 1");
        return Ok(1);
    }
    Ok(0)
}
