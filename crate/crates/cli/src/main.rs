use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use superhilb::charts::{frac_text, hilb21_atlas, parse_frac, verify_cocycle, Atlas};
use superhilb::obstruction::{default_degree_bound, is_coboundary_bounded, split_check_11, SplitVerdict, Witness};
use superhilb::parser::{parse_poly, parse_ring, pretty, RingDecl};
use superhilb::quotient::{parse_generators, reduce_to_basis, stratification_generators, BasisVector, CanonicalIdeal, Fiber, Presentation};
use superhilb::{ChartError, ObstructionError, ParseError, QuotientError, SuperPoly};

#[derive(Parser)]
#[command(name = "superhilb", version, about = "Hilbert schemes of points on (1|1)-supercurves")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a polynomial onto the monomial basis of a canonical ideal.
    Reduce {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        /// Ring declaration for parameters, e.g. `even a; odd alpha;`.
        #[arg(long)]
        ring: Option<PathBuf>,
        /// Canonical parameter value, `a0=1/2`; unset parameters are zero.
        #[arg(long = "param", value_name = "NAME=EXPR")]
        params: Vec<String>,
        /// File with `f=` and `g=` lines, instead of parameters.
        #[arg(long, conflicts_with = "params")]
        ideal: Option<PathBuf>,
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Flattening generators of the stratum of length (p|q).
    Strata {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// Transition between two charts of Hilb^{2|1}: pair `ij` gives the
    /// coordinates of V_i in terms of those of V_j.
    Transition {
        #[command(flatten)]
        ks: KRange,
        #[arg(long)]
        pair: String,
    },
    /// Splitting verdict for Hilb^{1|1} or Hilb^{2|1}.
    SplitCheck {
        #[arg(long, value_enum)]
        target: Target,
        #[command(flatten)]
        ks: KRange,
        /// Degree bound of the cross-check solve; defaults to |k| + 4.
        #[arg(long)]
        degree_bound: Option<usize>,
    },
}

#[derive(clap::Args)]
#[group(required = true, multiple = false)]
struct KRange {
    #[arg(long, allow_hyphen_values = true)]
    k: Option<i32>,
    /// Inclusive range `A..B`.
    #[arg(long, allow_hyphen_values = true)]
    k_range: Option<String>,
}

impl KRange {
    fn values(&self) -> Result<(Vec<i32>, bool), Failure> {
        if let Some(k) = self.k {
            return Ok((vec![k], false));
        }
        let text = self.k_range.as_deref().unwrap_or_default();
        let parsed = text
            .split_once("..")
            .and_then(|(a, b)| Some((a.trim().parse::<i32>().ok()?, b.trim().parse::<i32>().ok()?)));
        match parsed {
            Some((a, b)) if a <= b => Ok(((a..=b).collect(), true)),
            _ => Err(Failure::Input(format!("bad k-range `{text}`, expected A..B with A <= B"))),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Hilb11,
    Hilb21,
}

enum Failure {
    Input(String),
    Math(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        Failure::Input(e.to_string())
    }
}

impl From<QuotientError> for Failure {
    fn from(e: QuotientError) -> Failure {
        match e {
            QuotientError::Shape(_) => Failure::Input(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

impl From<ChartError> for Failure {
    fn from(e: ChartError) -> Failure {
        match e {
            ChartError::Parse(p) => p.into(),
            ChartError::UnknownChart(_) => Failure::Input(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

impl From<ObstructionError> for Failure {
    fn from(e: ObstructionError) -> Failure {
        match e {
            ObstructionError::Chart(c) => c.into(),
            _ => Failure::Math(e.to_string()),
        }
    }
}

struct Report {
    human: String,
    json: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Reduce {
            p,
            q,
            ring,
            params,
            ideal,
            poly,
        } => reduce(p, q, ring, &params, ideal, &poly),
        Command::Strata { p, q } => strata(p, q),
        Command::Transition { ks, pair } => ks.values().and_then(|(ks, many)| batch(&ks, many, |k| transition(k, &pair))),
        Command::SplitCheck { target, ks, degree_bound } => {
            ks.values().and_then(|(ks, many)| batch(&ks, many, |k| split_check(target, k, degree_bound)))
        }
    };
    match result {
        Ok(report) => {
            let text = match cli.format {
                Format::Human => report.human,
                Format::Json => serde_json::to_string_pretty(&report.json).expect("json values serialize") + "\n",
            };
            // a closed pipe is not an error of the computation
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Math(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn batch(ks: &[i32], many: bool, run: impl Fn(i32) -> Result<Report, Failure>) -> Result<Report, Failure> {
    let reports = ks.iter().map(|&k| run(k)).collect::<Result<Vec<_>, _>>()?;
    if !many {
        return Ok(reports.into_iter().next().expect("one k"));
    }
    Ok(Report {
        human: reports.iter().map(|r| r.human.as_str()).collect(),
        json: Value::Array(reports.into_iter().map(|r| r.json).collect()),
    })
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn vector_json(v: &BasisVector) -> Value {
    json!({
        "even": v.even.iter().map(pretty).collect::<Vec<_>>(),
        "odd": v.odd.iter().map(pretty).collect::<Vec<_>>(),
    })
}

fn vector_human(v: &BasisVector) -> String {
    let mut out = String::new();
    for (i, c) in v.even.iter().enumerate() {
        let _ = writeln!(out, "  x^{i}: {}", pretty(c));
    }
    for (j, c) in v.odd.iter().enumerate() {
        let _ = writeln!(out, "  x^{j}*theta: {}", pretty(c));
    }
    out
}

fn reduce(p: usize, q: usize, ring: Option<PathBuf>, params: &[String], ideal: Option<PathBuf>, poly: &str) -> Result<Report, Failure> {
    if q > p {
        return Err(QuotientError::RankOrderViolation { p, q }.into());
    }
    let fiber = Fiber::default();
    let extra = match &ring {
        Some(path) => parse_ring(read(path)?)?,
        None => RingDecl::new([])?,
    };
    let mut full = RingDecl::new([fiber.x.clone(), fiber.theta.clone()])?;
    full.extend(&extra)?;
    let pres = match ideal {
        Some(path) => {
            let (f, g) = parse_generators(&read(&path)?, &full)?;
            Presentation::new(p, q, fiber, f, g)?
        }
        None => {
            let mut slots = [
                ("a", vec![SuperPoly::zero(); p - q]),
                ("b", vec![SuperPoly::zero(); q]),
                ("alpha", vec![SuperPoly::zero(); p - q]),
                ("beta", vec![SuperPoly::zero(); q]),
            ];
            for entry in params {
                let (name, expr) = entry
                    .split_once('=')
                    .ok_or_else(|| Failure::Input(format!("parameter `{entry}` is not NAME=EXPR")))?;
                let name = name.trim();
                let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
                let (kind, index) = name.split_at(split);
                let index: usize = index
                    .parse()
                    .map_err(|_| Failure::Input(format!("parameter `{name}` needs an index, e.g. a0")))?;
                let slot = slots
                    .iter_mut()
                    .find(|(k, _)| *k == kind)
                    .and_then(|(_, v)| v.get_mut(index))
                    .ok_or_else(|| Failure::Input(format!("no parameter `{name}` for (p|q) = ({p}|{q})")))?;
                *slot = parse_poly(expr, &extra)?;
            }
            let [(_, a), (_, b), (_, alpha), (_, beta)] = slots;
            CanonicalIdeal::new(p, q, fiber, a, b, alpha, beta)?.presentation()
        }
    };
    let target = parse_poly(poly, &full)?;
    let red = reduce_to_basis(&target, &pres)?;
    if !red.verify(&target, &pres) {
        return Err(Failure::Math("reduction certificate does not re-expand".into()));
    }
    let member = red.vector.is_zero();
    let mut human = format!("reduce ({p}|{q}): {}\n", pretty(&target));
    human.push_str(&vector_human(&red.vector));
    let _ = writeln!(human, "  cofactor f: {}", pretty(&red.cofactor_f));
    let _ = writeln!(human, "  cofactor g: {}", pretty(&red.cofactor_g));
    let _ = writeln!(human, "  member: {member}");
    Ok(Report {
        human,
        json: json!({
            "p": p,
            "q": q,
            "poly": pretty(&target),
            "vector": vector_json(&red.vector),
            "cofactor_f": pretty(&red.cofactor_f),
            "cofactor_g": pretty(&red.cofactor_g),
            "member": member,
        }),
    })
}

fn strata(p: usize, q: usize) -> Result<Report, Failure> {
    let s = stratification_generators(p, q)?;
    let gens: Vec<String> = s.generators.iter().map(pretty).collect();
    let (de, dodd) = s.dimension;
    let mut human = format!("strata ({p}|{q}): {} generators\n", gens.len());
    for g in &gens {
        let _ = writeln!(human, "  {g}");
    }
    let _ = writeln!(human, "  dimension ({de}|{dodd})");
    let witness = |w: &superhilb::quotient::Relation| {
        json!({
            "vector": vector_json(&w.vector),
            "cofactor_f": pretty(&w.cofactor_f),
            "cofactor_g": pretty(&w.cofactor_g),
        })
    };
    Ok(Report {
        human,
        json: json!({
            "p": p,
            "q": q,
            "generators": gens,
            "dimension": [de, dodd],
            "witnesses": [witness(&s.witnesses.0), witness(&s.witnesses.1)],
        }),
    })
}

/// Closed forms of `V_j -> V_i` known for pairs 12 and 13.
fn closed_form(k: i32, i: char, j: char) -> Option<Vec<(&'static str, String)>> {
    match (i, j) {
        ('1', '2') => Some(vec![
            ("a1", format!("b1^-1 + (-b1)^{}*beta1*beta2", k - 2)),
            ("a2", "b2".into()),
            ("alpha1", format!("-(-b1)^{}*beta1*(b2 - b1^-1)", k - 2)),
            ("alpha2", "beta2".into()),
        ]),
        ('1', '3') => Some(vec![
            ("a1", format!("c1 - (-c2)^{}*gamma1*gamma2", -k)),
            ("a2", "c2^-1".into()),
            ("alpha1", "gamma1*(c2^-1 - c1)".into()),
            ("alpha2", format!("(-c2)^{}*gamma2", -k)),
        ]),
        _ => None,
    }
}

fn matches_closed_form(atlas: &Atlas, source: &str, k: i32, i: char, j: char) -> Result<Option<bool>, Failure> {
    let Some(forms) = closed_form(k, i, j) else { return Ok(None) };
    let ring = atlas.chart(source)?.ring()?;
    let t = atlas.transition(source, &format!("V{i}"))?;
    for (name, text) in forms {
        let want = parse_frac(&text, &ring)?;
        let have = t.rules.iter().find(|(v, _)| v.name() == name).map(|(_, r)| r);
        if have != Some(&want) {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}

fn transition(k: i32, pair: &str) -> Result<Report, Failure> {
    let chars: Vec<char> = pair.chars().collect();
    let valid = chars.len() == 2 && chars.iter().all(|c| ('1'..='4').contains(c)) && chars[0] != chars[1];
    if !valid {
        return Err(Failure::Input(format!("pair `{pair}` must be two distinct digits from 1 to 4")));
    }
    let (i, j) = (chars[0], chars[1]);
    let (source, target) = (format!("V{j}"), format!("V{i}"));
    let atlas = hilb21_atlas(k)?;
    let t = atlas.transition(&source, &target)?;
    let cocycle = verify_cocycle(&atlas)?;
    let closed = matches_closed_form(&atlas, &source, k, i, j)?;
    let flag = match closed {
        Some(true) => "MATCH",
        Some(false) => "MISMATCH",
        None => "none",
    };
    let mut human = format!("transition {source} -> {target} (k={k})\n");
    let mut rules = Map::new();
    for (v, r) in &t.rules {
        let text = frac_text(r);
        let _ = writeln!(human, "  {} := {text}", v.name());
        rules.insert(v.name().to_string(), Value::String(text));
    }
    let _ = writeln!(human, "  closed form: {flag}");
    let _ = writeln!(human, "  cocycle: {}", if cocycle.ok() { "ok" } else { "FAILED" });
    if let Some(f) = &cocycle.failure {
        let _ = writeln!(human, "  {f}");
    }
    Ok(Report {
        human,
        json: json!({
            "k": k,
            "pair": pair,
            "source": source,
            "target": target,
            "rules": rules,
            "closed_form": flag,
            "cocycle": cocycle.ok(),
        }),
    })
}

fn verdict_report(v: &SplitVerdict) -> Report {
    let mut obj = Map::new();
    obj.insert("k".into(), json!(v.k));
    obj.insert("target".into(), json!(v.target));
    obj.insert("split".into(), json!(v.split));
    let mut human = format!("{} k={}: {}\n", v.target, v.k, if v.split { "split" } else { "non-split" });
    if let Witness::Twist(t) = v.witness {
        obj.insert("twist".into(), json!(t));
        let _ = writeln!(human, "  twist {t}");
    }
    if let Some(c) = v.case() {
        obj.insert("case".into(), json!(c.label()));
        let _ = writeln!(human, "  case {}", c.label());
    }
    if let Some((a, b)) = v.degrees {
        obj.insert("degrees".into(), json!([a, b]));
        let _ = writeln!(human, "  degrees ({a}, {b})");
    }
    if !v.trace().is_empty() {
        obj.insert("trace".into(), json!(v.trace()));
        for line in v.trace() {
            let _ = writeln!(human, "  {line}");
        }
    }
    Report {
        human,
        json: Value::Object(obj),
    }
}

fn split_check(target: Target, k: i32, degree_bound: Option<usize>) -> Result<Report, Failure> {
    let verdict = match target {
        Target::Hilb11 => split_check_11(k)?,
        Target::Hilb21 => is_coboundary_bounded(k, degree_bound.unwrap_or_else(|| default_degree_bound(k)))?,
    };
    Ok(verdict_report(&verdict))
}
