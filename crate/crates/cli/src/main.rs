use std::io::Write;
use std::process::ExitCode;

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde_json::{json, Value};

use thompson_core::certificate::{evaluate, tree_closed_walks};
use thompson_core::measure::{cocycle_range, deficit, integral_sqrt_rn, mu, rn_exponent, rn_profile, transported_mass};
use thompson_core::quadratic::QuadraticValue;
use thompson_core::{
    check_certificate, convolution_count, embed_supported, finite_level_related, fixtures, orbit_fragment,
    pingpong_verify, related, selftest, transporter, witness_cell, Alphabet, Bisection, BoxTable, Clopen, Error,
    NormBound, PingPongCertificate, Point, SymmetricSet, TableElement, TailWitness, Word,
};

#[derive(Parser, Debug)]
#[command(name = "thompson", version, about = "Exact arithmetic in the Higman-Thompson groups V_{d,k}")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Branching degree
    #[arg(long, global = true, default_value_t = 2)]
    d: u32,
    /// Number of roots
    #[arg(long, global = true, default_value_t = 1)]
    k: u32,
    /// Number of product factors (Brin-Thompson commands only)
    #[arg(long, global = true, default_value_t = 1)]
    m: u32,
    /// Emit {command, params, result} JSON
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compose elements right to left: `compose G H` is G∘H (H acts first)
    Compose {
        #[arg(required = true, num_args = 2..)]
        elements: Vec<String>,
    },
    /// Inverse element
    Inverse { element: String },
    /// Canonical reduced form of a pair list
    Reduce { element: String },
    /// Act on a point `u(v)^inf` or a clopen `{w, ...}`
    Act { element: String, target: String },
    /// Measure of a clopen set
    Measure { clopen: String },
    #[command(subcommand)]
    /// Radon-Nikodym cocycle of an element
    Cocycle(CocycleCmd),
    /// max over the family of mu(A symmetric-difference sA)
    Deficit {
        clopen: String,
        #[arg(required = true)]
        family: Vec<String>,
    },
    #[command(subcommand)]
    /// Compact open bisections of the groupoid
    Bisection(BisectionCmd),
    #[command(subcommand)]
    /// Tail equivalence with lag on eventually periodic points
    Tail(TailCmd),
    #[command(subcommand)]
    /// Free-subgroup certificates and the norm inequality
    Certificate(CertificateCmd),
    /// An element mapping the cylinder FROM onto the cylinder TO
    Transporter { from: String, to: String },
    /// Embed an element of V_{d,d} on the cylinder nu of X_{d,k}
    Embed {
        element: String,
        #[arg(long)]
        nu: String,
    },
    #[command(subcommand)]
    /// Brin-Thompson products (use --m)
    Mv(MvCmd),
    /// Randomized invariant sweep; exits nonzero on any failure
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        rounds: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CocycleCmd {
    /// Exponent j per block, omega = d^j
    Profile {
        element: String,
    },
    AtPoint {
        element: String,
        point: String,
    },
    /// Exact value of the integral of sqrt(omega)
    IntegralSqrt {
        element: String,
    },
    Range {
        element: String,
    },
}

#[derive(Subcommand, Debug)]
enum BisectionCmd {
    ToTable { bisection: String },
    FromTable { element: String },
    Compose { left: String, right: String },
    Inverse { bisection: String },
    IsFull { bisection: String },
    Act { bisection: String, point: String },
}

#[derive(Subcommand, Debug)]
enum TailCmd {
    Related {
        x: String,
        y: String,
    },
    /// Points nu·shift^j(x) with j and |nu| at most the depth
    Orbit {
        x: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// A double cylinder carrying x to y
    Cell {
        x: String,
        y: String,
    },
    /// Lag-free agreement from tail position n on
    Level {
        x: String,
        y: String,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args, Debug, Clone)]
struct SetSource {
    /// Named frozen ping-pong pair
    #[arg(long)]
    fixture: Option<String>,
    /// Explicit elements of V_{d,d} (repeat the flag)
    #[arg(long = "element")]
    elements: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum CertificateCmd {
    /// Evaluate the inequality on the cylinder nu
    Check {
        #[arg(long)]
        nu: String,
        #[command(flatten)]
        source: SetSource,
        /// Rigorous norm bound for an explicit element set, e.g. "2*sqrt(3)"
        #[arg(long)]
        norm: Option<String>,
    },
    /// Check the ping-pong conditions for a generator pair
    PingpongVerify {
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long = "p-a")]
        p_a: Option<String>,
        #[arg(long = "p-a-inv")]
        p_a_inv: Option<String>,
        #[arg(long = "p-b")]
        p_b: Option<String>,
        #[arg(long = "p-b-inv")]
        p_b_inv: Option<String>,
    },
    /// Closed words of length LEN over the symmetric set
    ConvolutionCount {
        #[command(flatten)]
        source: SetSource,
        #[arg(long, default_value_t = 12)]
        len: usize,
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
}

#[derive(Subcommand, Debug)]
enum MvCmd {
    Compose {
        left: String,
        right: String,
    },
    Inverse {
        element: String,
    },
    /// Act on an m-tuple of points given as separate arguments
    Act {
        element: String,
        #[arg(required = true)]
        points: Vec<String>,
    },
}

/// Failures the CLI distinguishes by exit code.
enum Failure {
    Usage(String),
    Domain(Error),
    Inconclusive(Output),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Run<T> = Result<T, Failure>;

/// A result in both renderings.
struct Output {
    text: String,
    json: Value,
}

fn out(text: impl Into<String>, json: Value) -> Output {
    Output { text: text.into(), json }
}

fn alphabet(g: &Global) -> Run<Alphabet> {
    Ok(Alphabet::with_factors(g.d, g.k, g.m)?)
}

fn base_alphabet(g: &Global) -> Run<Alphabet> {
    Ok(Alphabet::new(g.d, g.d)?)
}

/// Text form `{mu->nu, ...}` or the JSON pair list.
fn element(a: Alphabet, s: &str) -> Run<TableElement> {
    if s.trim_start().starts_with('[') {
        let v: Value =
            serde_json::from_str(s).map_err(|e| Failure::Domain(Error::Parse(format!("element JSON: {e}"))))?;
        Ok(TableElement::from_json(a, &v)?)
    } else {
        Ok(TableElement::parse(a, s)?)
    }
}

fn element_out(g: &TableElement) -> Output {
    out(g.to_string(), g.to_json())
}

fn fixture(name: &str) -> Run<PingPongCertificate> {
    fixtures::fixture(name).ok_or_else(|| {
        Failure::Usage(format!("unknown --fixture {name:?}; known: {}", fixtures::FIXTURE_NAMES.join(", ")))
    })
}

fn symmetric_set(g: &Global, source: &SetSource) -> Run<SymmetricSet> {
    match (&source.fixture, source.elements.is_empty()) {
        (Some(name), true) => {
            let cert = fixture(name)?;
            Ok(SymmetricSet::from_generators(&cert.a, &cert.b)?)
        }
        (None, false) => {
            let a = base_alphabet(g)?;
            let elems = source.elements.iter().map(|s| element(a, s)).collect::<Run<Vec<_>>>()?;
            Ok(SymmetricSet::unchecked(elems))
        }
        _ => Err(Failure::Usage("give exactly one of --fixture or --element".into())),
    }
}

fn report_out(r: &thompson_core::CertificateReport) -> Output {
    out(r.to_string(), r.to_json())
}

fn run(cmd: &Command, g: &Global) -> Run<Output> {
    match cmd {
        Command::Compose { elements } => {
            let a = alphabet(g)?;
            let mut acc = element(a, elements.last().expect("at least two"))?;
            for s in elements.iter().rev().skip(1) {
                acc = element(a, s)?.compose(&acc)?;
            }
            Ok(element_out(&acc))
        }
        Command::Inverse { element: s } => Ok(element_out(&element(alphabet(g)?, s)?.inverse())),
        Command::Reduce { element: s } => {
            let e = element(alphabet(g)?, s)?;
            let mut o = element_out(&e);
            o.json = json!({ "element": e.to_json(), "blocks": e.block_count() });
            Ok(o)
        }
        Command::Act { element: s, target } => {
            let a = alphabet(g)?;
            let e = element(a, s)?;
            if target.trim_start().starts_with('{') {
                let c = e.act_clopen(&Clopen::parse(a, target)?)?;
                Ok(out(c.to_string(), json!(c.to_string())))
            } else {
                let y = e.act_point(&Point::parse(a, target)?)?;
                Ok(out(y.to_string(), json!(y.to_string())))
            }
        }
        Command::Measure { clopen } => {
            let v = mu(&Clopen::parse(alphabet(g)?, clopen)?);
            Ok(out(v.to_string(), json!(v.to_string())))
        }
        Command::Cocycle(c) => cocycle(c, g),
        Command::Deficit { clopen, family } => {
            let a = alphabet(g)?;
            let set = Clopen::parse(a, clopen)?;
            let fam = family.iter().map(|s| element(a, s)).collect::<Run<Vec<_>>>()?;
            let v = deficit(&set, &fam)?;
            Ok(out(v.to_string(), json!(v.to_string())))
        }
        Command::Bisection(c) => bisection(c, g),
        Command::Tail(c) => tail(c, g),
        Command::Certificate(c) => certificate(c, g),
        Command::Transporter { from, to } => {
            let a = alphabet(g)?;
            Ok(element_out(&transporter(a, &Word::parse(a, from)?, &Word::parse(a, to)?)?))
        }
        Command::Embed { element: s, nu } => {
            let a = alphabet(g)?;
            let e = element(base_alphabet(g)?, s)?;
            Ok(element_out(&embed_supported(a, &e, &Word::parse(a, nu)?)?))
        }
        Command::Mv(c) => mv(c, g),
        Command::Selftest { seed, rounds } => {
            let results = selftest::run(*seed, *rounds);
            let text: Vec<String> =
                results.iter().map(|r| format!("{} {}", if r.passed { "PASS" } else { "FAIL" }, r.name)).collect();
            let json =
                json!(results.iter().map(|r| json!({ "check": r.name, "passed": r.passed })).collect::<Vec<_>>());
            let o = out(text.join("\n"), json);
            if results.iter().all(|r| r.passed) {
                Ok(o)
            } else {
                Err(Failure::Domain(Error::Invalid(format!("self-test failed:\n{}", o.text))))
            }
        }
    }
}

fn cocycle(c: &CocycleCmd, g: &Global) -> Run<Output> {
    let a = alphabet(g)?;
    match c {
        CocycleCmd::Profile { element: s } => {
            let e = element(a, s)?;
            let prof = rn_profile(&e);
            let text: Vec<String> = prof.iter().map(|(w, j)| format!("{} {}", w.display(a), j.0)).collect();
            let json = json!(prof
                .iter()
                .map(|(w, j)| json!({ "block": w.display(a).to_string(), "exponent": j.0 }))
                .collect::<Vec<_>>());
            let mass = transported_mass(&e);
            Ok(out(text.join("\n"), json!({ "blocks": json, "transported_mass": mass.to_string() })))
        }
        CocycleCmd::AtPoint { element: s, point } => {
            let j = rn_exponent(&element(a, s)?, &Point::parse(a, point)?)?;
            let value = j.value(a.d());
            Ok(out(format!("{} (= {}^{})", value, a.d(), j.0), json!({ "exponent": j.0, "value": value.to_string() })))
        }
        CocycleCmd::IntegralSqrt { element: s } => {
            let v = integral_sqrt_rn(&element(a, s)?);
            Ok(out(v.to_string(), v.to_json()))
        }
        CocycleCmd::Range { element: s } => {
            let r: Vec<i64> = cocycle_range(&element(a, s)?).into_iter().collect();
            let text: Vec<String> = r.iter().map(|j| j.to_string()).collect();
            Ok(out(text.join(" "), json!(r)))
        }
    }
}

fn bisection_out(b: &Bisection) -> Output {
    out(b.to_string(), b.to_json())
}

fn bisection(c: &BisectionCmd, g: &Global) -> Run<Output> {
    let a = alphabet(g)?;
    match c {
        BisectionCmd::ToTable { bisection } => Ok(element_out(&Bisection::parse(a, bisection)?.to_table()?)),
        BisectionCmd::FromTable { element: s } => Ok(bisection_out(&Bisection::from_table(&element(a, s)?))),
        BisectionCmd::Compose { left, right } => {
            Ok(bisection_out(&Bisection::parse(a, left)?.compose(&Bisection::parse(a, right)?)?))
        }
        BisectionCmd::Inverse { bisection } => Ok(bisection_out(&Bisection::parse(a, bisection)?.inverse())),
        BisectionCmd::IsFull { bisection } => {
            let full = Bisection::parse(a, bisection)?.is_full();
            Ok(out(full.to_string(), json!(full)))
        }
        BisectionCmd::Act { bisection, point } => match Bisection::parse(a, bisection)?.act(&Point::parse(a, point)?) {
            Some(y) => Ok(out(y.to_string(), json!(y.to_string()))),
            None => Ok(out("undefined (point outside the source)", Value::Null)),
        },
    }
}

fn witness_json(w: &Option<TailWitness>) -> Value {
    match w {
        Some(w) => json!({ "p": w.p, "q": w.q }),
        None => Value::Null,
    }
}

fn tail(c: &TailCmd, g: &Global) -> Run<Output> {
    let a = alphabet(g)?;
    match c {
        TailCmd::Related { x, y } => {
            let w = related(&Point::parse(a, x)?, &Point::parse(a, y)?);
            let text = match &w {
                Some(w) => format!("related p={} q={}", w.p, w.q),
                None => "unrelated".into(),
            };
            Ok(out(text, witness_json(&w)))
        }
        TailCmd::Orbit { x, depth } => {
            if *depth < 1 {
                return Err(Failure::Usage("--depth must be at least 1".into()));
            }
            let pts: Vec<String> = orbit_fragment(&Point::parse(a, x)?, *depth).iter().map(|p| p.to_string()).collect();
            Ok(out(pts.join("\n"), json!(pts)))
        }
        TailCmd::Cell { x, y } => {
            let (x, y) = (Point::parse(a, x)?, Point::parse(a, y)?);
            let w = related(&x, &y).ok_or(Error::NotRelated)?;
            let cell = witness_cell(&x, &y, w)?;
            let (nu, mu_w) = (cell.range.display(a).to_string(), cell.domain.display(a).to_string());
            Ok(out(
                format!("{nu}<-{mu_w}"),
                json!({ "range": nu, "domain": mu_w, "degree": cell.degree(), "witness": witness_json(&Some(w)) }),
            ))
        }
        TailCmd::Level { x, y, n } => {
            let v = finite_level_related(&Point::parse(a, x)?, &Point::parse(a, y)?, *n);
            Ok(out(v.to_string(), json!(v)))
        }
    }
}

fn certificate(c: &CertificateCmd, g: &Global) -> Run<Output> {
    match c {
        CertificateCmd::Check { nu, source, norm } => {
            let a = alphabet(g)?;
            let nu = Word::parse(a, nu)?;
            let result = match (norm, &source.fixture, source.elements.is_empty()) {
                (None, Some(name), true) => check_certificate(a, &fixture(name)?, &nu),
                (Some(norm), None, false) => {
                    let f = SymmetricSet::new(
                        source.elements.iter().map(|s| element(base_alphabet(g)?, s)).collect::<Run<Vec<_>>>()?,
                    )?;
                    let bound = NormBound::user_supplied(norm.parse::<QuadraticValue>()?)?;
                    let report = evaluate(a, &f, bound, &nu)?;
                    match report.verdict {
                        thompson_core::Verdict::Pass => Ok(report),
                        thompson_core::Verdict::Inconclusive => Err(Error::InconclusiveParameters(Box::new(report))),
                    }
                }
                _ => return Err(Failure::Usage("use --fixture NAME, or --element ... together with --norm".into())),
            };
            match result {
                Ok(r) => Ok(report_out(&r)),
                Err(Error::InconclusiveParameters(r)) => Err(Failure::Inconclusive(report_out(&r))),
                Err(e) => Err(e.into()),
            }
        }
        CertificateCmd::PingpongVerify { fixture: name, a, b, p_a, p_a_inv, p_b, p_b_inv } => {
            let cert = match (name, a, b, p_a, p_a_inv, p_b, p_b_inv) {
                (Some(name), None, None, None, None, None, None) => fixture(name)?,
                (None, Some(a), Some(b), Some(pa), Some(pai), Some(pb), Some(pbi)) => {
                    let al = base_alphabet(g)?;
                    PingPongCertificate {
                        a: element(al, a)?,
                        b: element(al, b)?,
                        p_a: Clopen::parse(al, pa)?,
                        p_a_inv: Clopen::parse(al, pai)?,
                        p_b: Clopen::parse(al, pb)?,
                        p_b_inv: Clopen::parse(al, pbi)?,
                    }
                }
                _ => {
                    return Err(Failure::Usage(
                        "use --fixture NAME, or all of --a --b --p-a --p-a-inv --p-b --p-b-inv".into(),
                    ))
                }
            };
            pingpong_verify(&cert)?;
            Ok(out("verified: <a, b> is free of rank 2", json!({ "verified": true, "certificate": cert.to_json() })))
        }
        CertificateCmd::ConvolutionCount { source, len, workers } => {
            let f = symmetric_set(g, source)?;
            let count = convolution_count(&f, *len, *workers)?;
            let tree = tree_closed_walks(f.len() as u64, *len);
            Ok(out(
                count.to_string(),
                json!({ "len": len, "count": count.to_string(), "tree_count": tree.to_string(), "set_size": f.len() }),
            ))
        }
    }
}

fn mv(c: &MvCmd, g: &Global) -> Run<Output> {
    let m = g.m as usize;
    if m == 0 {
        return Err(Failure::Usage("--m must be at least 1".into()));
    }
    let parse = |s: &str| -> Run<BoxTable> {
        if s.trim_start().starts_with('[') {
            let v: Value =
                serde_json::from_str(s).map_err(|e| Failure::Domain(Error::Parse(format!("box table JSON: {e}"))))?;
            Ok(BoxTable::from_json(m, &v)?)
        } else {
            Ok(BoxTable::parse(m, s)?)
        }
    };
    let table_out = |t: &BoxTable| out(t.to_string(), t.to_json());
    match c {
        MvCmd::Compose { left, right } => Ok(table_out(&parse(left)?.compose(&parse(right)?)?)),
        MvCmd::Inverse { element } => Ok(table_out(&parse(element)?.inverse())),
        MvCmd::Act { element, points } => {
            let xs = points.iter().map(|p| Point::parse(Alphabet::thompson(), p)).collect::<Result<Vec<_>, _>>()?;
            let ys: Vec<String> = parse(element)?.act(&xs)?.iter().map(|y| y.to_string()).collect();
            Ok(out(ys.join(" "), json!(ys)))
        }
    }
}

/// `certificate check` style name from the matched subcommand chain.
fn command_name(matches: &ArgMatches) -> String {
    let mut parts = Vec::new();
    let mut cur = matches;
    while let Some((name, sub)) = cur.subcommand() {
        parts.push(name.to_string());
        cur = sub;
    }
    parts.join(" ")
}

fn wrap(command: &str, params: &[String], result: &Value) -> String {
    json!({ "command": command, "params": params, "result": result }).to_string()
}

fn main() -> ExitCode {
    let parsed = Cli::command().try_get_matches().and_then(|m| Ok((Cli::from_arg_matches(&m)?, m)));
    let (cli, matches) = match parsed {
        Ok(v) => v,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let name = command_name(&matches);
    let params: Vec<String> = std::env::args().skip(1).filter(|a| a != "--json").collect();
    // A closed pipe downstream is not an error worth reporting.
    let print = |o: &Output| {
        let body = if cli.global.json { wrap(&name, &params, &o.json) } else { o.text.clone() };
        let _ = writeln!(std::io::stdout(), "{body}");
    };
    match run(&cli.command, &cli.global) {
        Ok(o) => {
            print(&o);
            ExitCode::SUCCESS
        }
        Err(Failure::Inconclusive(o)) => {
            print(&o);
            eprintln!("inconclusive: the left side does not exceed the norm bound at this depth");
            ExitCode::from(3)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
