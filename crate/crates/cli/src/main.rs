//! quatlab: exact computations for periodic groups, quaternionic orders,
//! mass formulas and finite-ring class-set fibres.
//!
//! Every command prints a single JSON report with sorted keys (so identical
//! invocations are byte-identical); `--text` renders a flat human-readable
//! view instead. Exact rationals appear as "num/den" strings, with f64
//! companions added under `--approx`. Exit codes: 0 success, 2 invalid
//! input, 3 internal error or failed verification.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use quatlab_core::error::Error;
use quatlab_core::fixtures::FixtureSet;
use quatlab_core::periodic_groups::PeriodicGroupSpec;
use quatlab_core::rational::{format_rat, Rat};

#[derive(Parser)]
#[command(
    name = "quatlab",
    version,
    about = "Exact algebra for periodic groups, quaternionic orders and mass formulas"
)]
struct Cli {
    /// Directory holding fields.json / milnor_fixtures.json /
    /// reference_values.json (default: $QUATLAB_FIXTURES, then bundled
    /// copies).
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,

    /// Human-readable key/value output instead of JSON.
    #[arg(long, global = true)]
    text: bool,

    /// Add f64 approximations next to exact rationals.
    #[arg(long, global = true)]
    approx: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a group spec and report its quaternionic multiplicity.
    Classify {
        #[arg(long)]
        group: String,
    },
    /// Quaternionic multiplicity m_H of a group spec.
    Mh {
        #[arg(long)]
        group: String,
    },
    /// Maximal binary polyhedral quotients of a group spec.
    Bpq {
        #[arg(long)]
        group: String,
    },
    /// Stably free cancellation for the order with the given indices,
    /// e.g. `sfc 2,14`.
    Sfc { indices: String },
    /// Eichler constant and class-set mass for K = Q(zeta_m)^+.
    Mass {
        #[arg(long)]
        m: u64,
    },
    /// Cancellation obstruction tests for the field of conductor m.
    Obstruction {
        #[arg(long)]
        m: u64,
    },
    /// Milnor-square fibre computation: q28, l218 or l1030.
    Milnor { fixture: String },
    /// Swan class arithmetic over Z/N: multiply the classes in --mul.
    Swan {
        #[arg(long = "N")]
        n: u64,
        /// Comma-separated residues to multiply, e.g. 3,5.
        #[arg(long)]
        mul: String,
    },
    /// Cancellation predicate for the stable class of a group spec.
    Cancel {
        #[arg(long)]
        group: String,
    },
    /// Certified lower bound for the count of minimal classes, from m_H.
    Bound {
        #[arg(long)]
        mh: u64,
    },
    /// Quotient order of Z[Q_4n] without stably free cancellation.
    Witness {
        #[arg(long)]
        q4n: u64,
    },
    /// Exact special values of the field zeta function: `zeta -1 --m 16`.
    Zeta {
        #[arg(allow_hyphen_values = true)]
        s: i64,
        #[arg(long)]
        m: u64,
    },
    /// Run the built-in verification suite (all reference values).
    #[command(name = "verify-paper")]
    VerifyPaper {
        /// Only run checks whose id contains this substring.
        #[arg(long)]
        only: Option<String>,
        /// Disable the parallel schedule.
        #[arg(long)]
        sequential: bool,
    },
}

/// Parse the group mini-language: q28, c11, ttilde, otilde, itilde, sl2:7,
/// tl2:5, typeI:m=15,n=4,r=14, typeII:t=15,s=1,r=1,n=3,a=11,b=4,
/// qfam:n=3,a=1,b=3,c=7 — or a JSON object {"variant": ...}.
fn parse_group(s: &str) -> Result<PeriodicGroupSpec, Error> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s)
            .map_err(|e| Error::Validation(format!("bad group JSON: {e}")));
    }
    let lower = s.to_ascii_lowercase();
    let bad = |msg: String| Error::Validation(msg);
    let parse_fields = |body: &str| -> Result<BTreeMap<String, u64>, Error> {
        let mut out = BTreeMap::new();
        for part in body.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got {part:?}")))?;
            let v: u64 = v
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad integer {v:?} for {k}")))?;
            out.insert(k.trim().to_string(), v);
        }
        Ok(out)
    };
    let take = |f: &BTreeMap<String, u64>, k: &str| -> Result<u64, Error> {
        f.get(k)
            .copied()
            .ok_or_else(|| bad(format!("missing field {k}")))
    };
    if let Some(rest) = lower.strip_prefix("typei:") {
        let f = parse_fields(rest)?;
        return Ok(PeriodicGroupSpec::TypeI {
            m: take(&f, "m")?,
            n4: take(&f, "n")?,
            r: take(&f, "r")?,
        });
    }
    if let Some(rest) = lower.strip_prefix("typeii:") {
        let f = parse_fields(rest)?;
        return Ok(PeriodicGroupSpec::TypeII {
            t: take(&f, "t")?,
            s: f.get("s").copied().unwrap_or(1),
            r: take(&f, "r")?,
            n_exp: take(&f, "n")? as u32,
            a: take(&f, "a")?,
            b: take(&f, "b")?,
        });
    }
    if let Some(rest) = lower.strip_prefix("qfam:") {
        let f = parse_fields(rest)?;
        return Ok(PeriodicGroupSpec::QFamily {
            n_exp: take(&f, "n")? as u32,
            a: f.get("a").copied().unwrap_or(1),
            b: take(&f, "b")?,
            c: f.get("c").copied().unwrap_or(1),
        });
    }
    if let Some(rest) = lower.strip_prefix("sl2:") {
        let p = rest
            .parse()
            .map_err(|_| bad(format!("bad prime {rest:?}")))?;
        return Ok(PeriodicGroupSpec::SL2 { p });
    }
    if let Some(rest) = lower.strip_prefix("tl2:") {
        let p = rest
            .parse()
            .map_err(|_| bad(format!("bad prime {rest:?}")))?;
        return Ok(PeriodicGroupSpec::TL2 { p });
    }
    match lower.as_str() {
        "ttilde" | "2t" => return Ok(PeriodicGroupSpec::BinaryTetra),
        "otilde" | "2o" => return Ok(PeriodicGroupSpec::BinaryOcta),
        "itilde" | "2i" => return Ok(PeriodicGroupSpec::BinaryIcosa),
        _ => {}
    }
    if let Some(rest) = lower.strip_prefix('q') {
        let order: u64 = rest
            .parse()
            .map_err(|_| bad(format!("bad quaternion order {rest:?}")))?;
        return Ok(PeriodicGroupSpec::Quaternion { order });
    }
    if let Some(rest) = lower.strip_prefix('c') {
        let n: u64 = rest
            .parse()
            .map_err(|_| bad(format!("bad cyclic order {rest:?}")))?;
        return Ok(PeriodicGroupSpec::Cyclic { n });
    }
    Err(bad(format!(
        "cannot parse group {s:?}; try q28, c11, sl2:7, typeI:m=15,n=4,r=14 or JSON"
    )))
}

fn parse_indices(s: &str) -> Result<Vec<u64>, Error> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| Error::Validation(format!("bad index {x:?}")))
        })
        .collect()
}

struct ReportBuilder {
    command: String,
    inputs: Map<String, Value>,
    results: Map<String, Value>,
    citations: Vec<String>,
    approx: bool,
}

impl ReportBuilder {
    fn new(command: &str, approx: bool) -> Self {
        ReportBuilder {
            command: command.to_string(),
            inputs: Map::new(),
            results: Map::new(),
            citations: Vec::new(),
            approx,
        }
    }

    fn input(&mut self, key: &str, value: Value) -> &mut Self {
        self.inputs.insert(key.to_string(), value);
        self
    }

    fn result(&mut self, key: &str, value: Value) -> &mut Self {
        self.results.insert(key.to_string(), value);
        self
    }

    fn rational(&mut self, key: &str, q: &Rat) -> &mut Self {
        self.results
            .insert(key.to_string(), Value::String(format_rat(q)));
        if self.approx {
            if let Some(x) = q.to_f64() {
                self.results
                    .insert(format!("{key}_approx"), json!(x));
            }
        }
        self
    }

    fn cite(&mut self, ids: &[&str]) -> &mut Self {
        self.citations.extend(ids.iter().map(|s| s.to_string()));
        self
    }

    fn finish(self) -> Value {
        json!({
            "command": self.command,
            "inputs": Value::Object(self.inputs),
            "results": Value::Object(self.results),
            "citations": self.citations,
        })
    }
}

fn render_text(value: &Value, indent: usize, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{}{}:\n", "  ".repeat(indent), k));
                        render_text(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{}{}: {}\n", "  ".repeat(indent), k, v)),
                }
            }
        }
        Value::Array(items) => {
            for v in items {
                match v {
                    Value::Object(_) | Value::Array(_) => render_text(v, indent + 1, out),
                    _ => out.push_str(&format!("{}- {}\n", "  ".repeat(indent), v)),
                }
            }
        }
        other => out.push_str(&format!("{}{}\n", "  ".repeat(indent), other)),
    }
}

fn run(cli: &Cli) -> Result<(Value, u8), Error> {
    let approx = cli.approx;
    match &cli.command {
        Command::Classify { group } => {
            let spec = parse_group(group)?;
            let ty = quatlab_core::periodic_groups::classify_type(&spec)?;
            let mh = quatlab_core::periodic_groups::m_h(&spec)?;
            let mut r = ReportBuilder::new("classify", approx);
            r.input("group", serde_json::to_value(&spec).unwrap());
            r.result("type", json!(ty.to_string()));
            r.result("mH", json!(mh));
            r.cite(&["type-table", "mh-table"]);
            Ok((r.finish(), 0))
        }
        Command::Mh { group } => {
            let spec = parse_group(group)?;
            let mh = quatlab_core::periodic_groups::m_h(&spec)?;
            let mut r = ReportBuilder::new("mh", approx);
            r.input("group", serde_json::to_value(&spec).unwrap());
            r.result("mH", json!(mh));
            r.cite(&["mh-table"]);
            Ok((r.finish(), 0))
        }
        Command::Bpq { group } => {
            let spec = parse_group(group)?;
            let bm = quatlab_core::periodic_groups::maximal_bpq(&spec)?;
            let mut r = ReportBuilder::new("bpq", approx);
            r.input("group", serde_json::to_value(&spec).unwrap());
            r.result(
                "maximal_quotients",
                json!(bm.iter().map(|q| q.to_string()).collect::<Vec<_>>()),
            );
            r.result("count", json!(bm.len()));
            r.cite(&["quotient-table"]);
            Ok((r.finish(), 0))
        }
        Command::Sfc { indices } => {
            let indices = parse_indices(indices)?;
            let spec = quatlab_core::orders::validate_order_spec(&indices)?;
            let verdict = quatlab_core::orders::has_sfc(&spec)?;
            let mut r = ReportBuilder::new("sfc", approx);
            r.input("indices", json!(spec.indices));
            r.result("verdict", json!(verdict.verdict));
            r.result(
                "trace",
                json!(verdict
                    .trace
                    .iter()
                    .map(|s| json!({"rule": s.rule, "detail": s.detail}))
                    .collect::<Vec<_>>()),
            );
            r.result("two_adic_valuation", json!(spec.two_adic));
            r.result("ambient_n", json!(spec.ambient_n));
            r.cite(&["sfc-procedure", "sfc-list"]);
            Ok((r.finish(), 0))
        }
        Command::Mass { m } => {
            let fixtures = FixtureSet::load(cli.fixtures.as_deref())?;
            let ei = quatlab_core::mass_formula::eichler_constant(*m)?;
            let mut r = ReportBuilder::new("mass", approx);
            r.input("m", json!(m));
            r.rational("ei", &ei);
            match fixtures.field(*m) {
                Ok(fx) => {
                    let mv =
                        quatlab_core::mass_formula::mass_class_set(*m, fx.h_k, &fx.ramified_norms)?;
                    r.result("h_K", json!(fx.h_k));
                    r.result("ramified_norms", json!(fx.ramified_norms));
                    r.rational("mass", &mv.value);
                    r.rational("ramification_factor", &mv.ramification_factor);
                }
                Err(e) => {
                    r.result("mass", Value::Null);
                    r.result("mass_note", json!(e.to_string()));
                }
            }
            r.cite(&["ei-table", "mass-formula"]);
            Ok((r.finish(), 0))
        }
        Command::Obstruction { m } => {
            let ei = quatlab_core::mass_formula::eichler_constant(*m)?;
            let degree_ok = quatlab_core::mass_formula::sfc_degree_obstruction(*m)?;
            let numerator_ok = quatlab_core::mass_formula::numerator_power_of_two_test(*m)?;
            let mut r = ReportBuilder::new("obstruction", approx);
            r.input("m", json!(m));
            r.rational("ei", &ei);
            r.result("degree", json!(quatlab_core::arith::euler_phi(*m) / 2));
            r.result("degree_at_most_6", json!(degree_ok));
            r.result("numerator_power_of_two", json!(numerator_ok));
            r.result("sfc_excluded", json!(!degree_ok || !numerator_ok));
            r.cite(&["degree-bound", "numerator-test"]);
            Ok((r.finish(), 0))
        }
        Command::Milnor { fixture } => {
            let fixtures = FixtureSet::load(cli.fixtures.as_deref())?;
            let mut r = ReportBuilder::new("milnor", approx);
            r.input("fixture", json!(fixture));
            match fixture.as_str() {
                "q28" => {
                    let report = quatlab_core::finite_ring::q28_pipeline(&fixtures)?;
                    r.result("report", serde_json::to_value(&report).unwrap());
                    r.cite(&["fibre-q28"]);
                }
                "l218" => {
                    let report = quatlab_core::finite_ring::l218_pipeline(&fixtures)?;
                    r.result("report", serde_json::to_value(&report).unwrap());
                    r.cite(&["fibre-l218"]);
                }
                "l1030" => {
                    let report = quatlab_core::finite_ring::l1030_pipeline(&fixtures)?;
                    r.result("report", serde_json::to_value(&report).unwrap());
                    r.cite(&["fibre-l1030"]);
                }
                other => {
                    return Err(Error::Validation(format!(
                        "unknown fixture {other:?}; expected q28, l218 or l1030"
                    )))
                }
            }
            Ok((r.finish(), 0))
        }
        Command::Swan { n, mul } => {
            let residues = parse_indices(mul)?;
            if residues.is_empty() {
                return Err(Error::Validation("need at least one residue".into()));
            }
            let mut acc = quatlab_core::swan::SwanClass::free(*n)?;
            for &x in &residues {
                let c = quatlab_core::swan::SwanClass::new(*n, x)?;
                acc = quatlab_core::swan::swan_product(&acc, &c)?;
            }
            let mut r = ReportBuilder::new("swan", approx);
            r.input("N", json!(n));
            r.input("factors", json!(residues));
            r.result("product_r", json!(acc.r));
            r.result("is_free", json!(acc.is_free()));
            r.cite(&["swan-product"]);
            Ok((r.finish(), 0))
        }
        Command::Cancel { group } => {
            let spec = parse_group(group)?;
            let verdict = quatlab_core::swan::cancellation_predicate(&spec)?;
            let mut r = ReportBuilder::new("cancel", approx);
            r.input("group", serde_json::to_value(&spec).unwrap());
            r.result("mH", json!(verdict.m_h));
            r.result("cancellation", json!(verdict.cancellation));
            r.result("eichler", json!(verdict.eichler));
            r.result("reason", json!(verdict.reason));
            r.cite(&["cancellation-threshold"]);
            Ok((r.finish(), 0))
        }
        Command::Bound { mh } => {
            let bound = quatlab_core::swan::n_lower_bound(*mh)?;
            let mut r = ReportBuilder::new("bound", approx);
            r.input("mH", json!(mh));
            r.result("n0", json!(bound.n0));
            r.result("aut_order", json!(bound.aut_order));
            r.result("certified_minimum", json!(bound.certified.to_string()));
            r.result("log_lower", json!(bound.log_lower));
            r.result(
                "interval_trace",
                json!({
                    "coefficient": format_rat(&bound.class_set_bound.coefficient),
                    "sqrt_arg": bound.class_set_bound.sqrt_arg.to_string(),
                    "pi_exponent": bound.class_set_bound.pi_exp,
                }),
            );
            r.cite(&["class-set-bound", "quotient-bound"]);
            Ok((r.finish(), 0))
        }
        Command::Witness { q4n } => {
            if q4n % 4 != 0 {
                return Err(Error::Validation(format!(
                    "expected a quaternion group order divisible by 4, got {q4n}"
                )));
            }
            let spec = quatlab_core::orders::q4n_noncancellation_witness(q4n / 4)?;
            let verdict = quatlab_core::orders::has_sfc(&spec)?;
            let mut r = ReportBuilder::new("witness", approx);
            r.input("q4n", json!(q4n));
            r.result("indices", json!(spec.indices));
            r.result("verdict", json!(verdict.verdict));
            r.cite(&["witness-table"]);
            Ok((r.finish(), 0))
        }
        Command::Zeta { s, m } => {
            if *s != -1 {
                return Err(Error::Unsupported(
                    "only the special value at -1 is implemented".into(),
                ));
            }
            let field = quatlab_core::fields::RealCyclotomicField::new(*m)?;
            let z = quatlab_core::fields::zeta_minus_one(field)?;
            let mut r = ReportBuilder::new("zeta", approx);
            r.input("s", json!(s));
            r.input("m", json!(m));
            r.rational("value", &z);
            r.result("degree", json!(field.degree()));
            r.cite(&["zeta-characters"]);
            Ok((r.finish(), 0))
        }
        Command::VerifyPaper { only, sequential } => {
            let fixtures = FixtureSet::load(cli.fixtures.as_deref())?;
            let results =
                quatlab_core::verify::run(&fixtures, only.as_deref(), !*sequential);
            if results.is_empty() {
                return Err(Error::Validation(format!(
                    "no checks match filter {only:?}"
                )));
            }
            let all_passed = results.iter().all(|r| r.passed);
            let first_failure = results.iter().find(|r| !r.passed);
            let mut r = ReportBuilder::new("verify-paper", approx);
            if let Some(f) = only {
                r.input("only", json!(f));
            }
            r.result(
                "checks",
                json!(results
                    .iter()
                    .map(|c| json!({"id": c.id, "passed": c.passed, "detail": c.detail}))
                    .collect::<Vec<_>>()),
            );
            r.result("passed", json!(results.iter().filter(|c| c.passed).count()));
            r.result("failed", json!(results.iter().filter(|c| !c.passed).count()));
            r.result("all_passed", json!(all_passed));
            if let Some(f) = first_failure {
                r.result(
                    "first_failure",
                    json!({"id": f.id, "detail": f.detail}),
                );
            }
            r.result("fixture_hashes", json!(fixtures.hashes));
            if let Some(dir) = &fixtures.source_dir {
                r.result("fixture_dir", json!(dir.display().to_string()));
            }
            let citations: Vec<String> = results.iter().map(|c| c.id.clone()).collect();
            let mut report = r.finish();
            report["citations"] = json!(citations);
            Ok((report, if all_passed { 0 } else { 3 }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, code)) => {
            let rendered = if cli.text {
                let mut out = String::new();
                render_text(&report, 0, &mut out);
                out
            } else {
                let mut s = serde_json::to_string_pretty(&report).unwrap();
                s.push('\n');
                s
            };
            // A closed pipe downstream is not our error.
            use std::io::Write;
            let _ = std::io::stdout().write_all(rendered.as_bytes());
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
