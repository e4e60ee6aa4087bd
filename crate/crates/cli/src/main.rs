//! `rectsimplex`: decide normality and very ampleness of rectangular
//! simplices from the command line. Reports go to stdout as JSON, a short
//! summary goes to stderr.

mod cache;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use rectsimplex::config::{DEFAULT_MAX_CANDIDATES, DEFAULT_MAX_POINTS, DEFAULT_MAX_TABLE_BITS, DEFAULT_WITNESS_POINTS};
use rectsimplex::hypergraph::{self, WeightedHypergraph};
use rectsimplex::normality::{self, IndexReport};
use rectsimplex::prime_search::{self, PrimeSearchConfig};
use rectsimplex::wps::{self, WeightVector};
use rectsimplex::{criteria, frobenius, periodicity};
use rectsimplex::{CertifiedResult, EngineConfig, Error, Exec, RectSimplex};
use serde::Serialize;
use serde_json::{json, Value};

use cache::Cache;

const SCHEMA: &str = "rectsimplex.report/v1";

#[derive(Parser)]
#[command(
    name = "rectsimplex",
    version,
    about = "Normality and very ampleness of rectangular lattice simplices"
)]
struct Cli {
    #[command(flatten)]
    budgets: Budgets,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Budgets {
    /// Cap on lattice points any enumeration may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_POINTS)]
    max_points: u64,
    /// Cap on candidates tested by the prime search.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_CANDIDATES)]
    max_candidates: u64,
    /// Cap, in bits, on semigroup membership tables.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_TABLE_BITS)]
    max_table_bits: u64,
    /// Cap on points scanned for an explicit witness after a criterion.
    #[arg(long, global = true, default_value_t = DEFAULT_WITNESS_POINTS)]
    witness_points: u64,
    /// Plain enumeration; skip the arithmetic criteria.
    #[arg(long, global = true)]
    no_criteria: bool,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Ignore $RECTSIMPLEX_CACHE for this invocation.
    #[arg(long, global = true)]
    no_cache: bool,
}

impl Budgets {
    fn config(&self) -> EngineConfig {
        EngineConfig {
            max_points: self.max_points,
            max_table_bits: self.max_table_bits,
            max_candidates: self.max_candidates,
            witness_points: self.witness_points,
            use_criteria: !self.no_criteria,
            exec: if self.sequential {
                Exec::Sequential
            } else {
                Exec::default()
            },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Normality, very ampleness, A1N and LPE of Δ(rλ).
    Check {
        #[arg(required = true)]
        lambda: Vec<u64>,
        #[arg(long, short = 'r', default_value_t = 1)]
        dilation: u64,
    },
    /// Normality and very ample indices, maximal and sequential non-normality.
    Index {
        #[arg(required = true)]
        lambda: Vec<u64>,
        /// Also confirm the normality index by plain enumeration.
        #[arg(long)]
        confirm: bool,
    },
    /// Primes p making Δ(P, p) maximally non-normal.
    Search {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Skip the per-output residue check.
        #[arg(long)]
        no_verify: bool,
    },
    /// Frobenius number and the classical upper bounds.
    Frobenius {
        #[arg(required = true)]
        generators: Vec<u64>,
    },
    /// Prime-weighted hypergraph encoding.
    #[command(subcommand)]
    Hypergraph(HypergraphCommand),
    /// Periodicity reduction to the canonical representative.
    Reduce {
        #[arg(required = true)]
        lambda: Vec<u64>,
    },
    /// Normality of Δ(prefix, t) for every class of t modulo lcm(prefix).
    Classes {
        #[arg(required = true)]
        prefix: Vec<u64>,
    },
    /// Indices of a weighted projective space with a unit weight.
    Wps {
        #[arg(required = true)]
        weights: Vec<u64>,
        /// Also decide very ampleness of O(k·l).
        #[arg(long)]
        bundle: Option<u64>,
    },
}

#[derive(Subcommand)]
enum HypergraphCommand {
    /// Encode λ; writes the hypergraph file when --output is given.
    Encode {
        #[arg(required = true)]
        lambda: Vec<u64>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Validate and decode a hypergraph file.
    Decode { path: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Index { .. } => "index",
            Command::Search { .. } => "search",
            Command::Frobenius { .. } => "frobenius",
            Command::Hypergraph(HypergraphCommand::Encode { .. }) => "hypergraph-encode",
            Command::Hypergraph(HypergraphCommand::Decode { .. }) => "hypergraph-decode",
            Command::Reduce { .. } => "reduce",
            Command::Classes { .. } => "classes",
            Command::Wps { .. } => "wps",
        }
    }
}

/// Failure modes, each with its exit code.
enum Failure {
    Usage(String),
    Resource(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Resource(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Resource(_) => "resource",
            Failure::Internal(_) => "internal",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Resource(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource { .. } => Failure::Resource(e.to_string()),
            Error::Invariant(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Result body plus whether some verdict had to be left open.
struct Outcome {
    result: Value,
    inconclusive: bool,
    summary: String,
}

/// Tri-state verdicts: budget exhaustion is reported, never guessed.
#[derive(Default)]
struct Verdicts {
    inconclusive: bool,
}

impl Verdicts {
    fn take(&mut self, r: rectsimplex::Result<CertifiedResult>) -> Result<Value, Failure> {
        match r {
            Ok(r) => Ok(json!({
                "status": if r.verdict { "pass" } else { "fail" },
                "result": r,
            })),
            Err(e) if e.is_resource() => {
                self.inconclusive = true;
                Ok(json!({ "status": "inconclusive", "reason": e.to_string() }))
            }
            Err(e) => Err(e.into()),
        }
    }

    fn index(&mut self, r: rectsimplex::Result<IndexReport>) -> Result<Value, Failure> {
        match r {
            Ok(r) => Ok(serde_json::to_value(r).expect("serializable")),
            Err(e) if e.is_resource() => {
                self.inconclusive = true;
                Ok(json!({ "status": "inconclusive", "reason": e.to_string() }))
            }
            Err(e) => Err(e.into()),
        }
    }
}

fn status(v: &Value) -> &str {
    v.get("status").and_then(Value::as_str).unwrap_or("?")
}

fn value<T: Serialize>(x: T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Decimal numbers stay JSON numbers while they fit in 64 bits.
fn big(x: &BigUint) -> Value {
    u64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
}

fn big_int(x: &num_bigint::BigInt) -> Value {
    i64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
}

fn simplex(lambda: &[u64]) -> Result<RectSimplex, Failure> {
    Ok(RectSimplex::new(lambda.to_vec())?)
}

fn check(lambda: &[u64], r: u64, cfg: &EngineConfig) -> Result<Outcome, Failure> {
    let s = simplex(lambda)?.dilate(r)?;
    let mut v = Verdicts::default();
    let normal = v.take(normality::is_normal_with(&s, cfg))?;
    let very_ample = v.take(normality::is_very_ample_with(&s, cfg))?;
    let a1n = v.take(criteria::is_a1n(&s, cfg.max_table_bits))?;
    let lpe = criteria::lpe_level(&s)?;
    let d = criteria::hss_floor(&s)?;
    let summary = format!(
        "{s}: normal {}, very ample {}, A1N {}, LPE({lpe})",
        status(&normal),
        status(&very_ample),
        status(&a1n)
    );
    Ok(Outcome {
        result: json!({
            "simplex": s,
            "normal": normal,
            "very_ample": very_ample,
            "a1n": a1n,
            "lpe_level": lpe,
            "reciprocal_sum_floor": d,
            "interior_point": s.has_interior_point()?,
        }),
        inconclusive: v.inconclusive,
        summary,
    })
}

fn index(lambda: &[u64], confirm: bool, cfg: &EngineConfig) -> Result<Outcome, Failure> {
    let s = simplex(lambda)?;
    let mut v = Verdicts::default();
    let mu_norm = normality::mu_norm_with(&s, cfg);
    let confirmation = match (&mu_norm, confirm) {
        (Ok(rep), true) if rep.value > 1 => {
            let plain = EngineConfig {
                use_criteria: false,
                ..*cfg
            };
            Some(v.take(normality::is_normal_with(&s.dilate(rep.value - 1)?, &plain))?)
        }
        _ => None,
    };
    let mu_norm = v.index(mu_norm)?;
    let mu_va = v.index(normality::mu_va_with(&s, cfg))?;
    let maximal = v.take(normality::is_maximally_non_normal_with(&s, cfg))?;
    let sequential = if s.n() <= 20 {
        v.take(normality::is_sequentially_non_normal_with(&s, cfg))?
    } else {
        v.inconclusive = true;
        json!({ "status": "inconclusive", "reason": "more than 20 entries" })
    };
    if let Some(c) = &confirmation {
        if status(c) == "pass" {
            return Err(Failure::Internal(format!(
                "plain enumeration finds ({})Δ normal, contradicting the index",
                mu_norm["value"]
            )));
        }
    }
    let summary = format!(
        "{s}: μ_norm {}, μ_va {}, maximally non-normal {}, sequentially non-normal {}",
        mu_norm.get("value").unwrap_or(&Value::Null),
        mu_va.get("value").unwrap_or(&Value::Null),
        status(&maximal),
        status(&sequential)
    );
    let mut result = json!({
        "simplex": s,
        "mu_norm": mu_norm,
        "mu_va": mu_va,
        "maximally_non_normal": maximal,
        "sequentially_non_normal": sequential,
    });
    if let Some(c) = confirmation {
        result["confirmation"] = c;
    }
    Ok(Outcome {
        result,
        inconclusive: v.inconclusive,
        summary,
    })
}

fn search(primes: &[u64], count: usize, verify: bool, cfg: &EngineConfig) -> Result<Outcome, Failure> {
    let config = PrimeSearchConfig {
        seed_primes: primes.to_vec(),
        count,
        verify,
    };
    let found = prime_search::algorithm1(&config, cfg)?;
    let class = prime_search::target_class(primes)?;
    let mut result = json!({
        "seed_primes": primes,
        "class": { "residue": big(class.value()), "modulus": big(class.modulus()) },
        "primes": found.iter().map(big).collect::<Vec<_>>(),
    });
    if verify {
        let checks = found
            .iter()
            .map(|p| prime_search::verify_output(primes, p, cfg).map(value))
            .collect::<rectsimplex::Result<Vec<_>>>()?;
        result["verification"] = Value::Array(checks);
    }
    let shown: Vec<String> = found.iter().map(|p| p.to_string()).collect();
    Ok(Outcome {
        result,
        inconclusive: false,
        summary: format!(
            "{} ≡ {class}: [{}]",
            primes.iter().map(u64::to_string).collect::<Vec<_>>().join(","),
            shown.join(", ")
        ),
    })
}

fn frobenius_report(gens: &[u64], cfg: &EngineConfig) -> Result<Outcome, Failure> {
    let spec = frobenius::NumericalSemigroupSpec::new(gens.to_vec())?;
    let f = frobenius::frobenius_exact(&spec, cfg.max_table_bits)?;
    let minimal = spec.is_minimal(cfg.max_table_bits)?;
    let bounds = if spec.generators().len() >= 2 {
        json!({
            "brauer": big_int(&frobenius::bound_brauer(&spec)?),
            "selmer": big_int(&frobenius::bound_selmer(&spec)?),
            "erdos_graham": big_int(&frobenius::bound_erdos_graham(&spec)?),
            "selmer_and_erdos_graham_apply": minimal,
        })
    } else {
        Value::Null
    };
    Ok(Outcome {
        result: json!({
            "generators": spec.generators(),
            "minimal": minimal,
            "frobenius": f.to_string().parse::<i64>().map_or(Value::String(f.to_string()), Value::from),
            "bounds": bounds,
        }),
        inconclusive: false,
        summary: format!("F{:?} = {f}", spec.generators()),
    })
}

fn hypergraph_body(h: &WeightedHypergraph) -> Result<Value, Failure> {
    let s = hypergraph::decode(h)?;
    let all: Vec<usize> = (1..=h.n()).collect();
    let (g, l) = hypergraph::subset_gcd_lcm(h, &all)?;
    Ok(json!({
        "lambda": s,
        "hypergraph": hypergraph::canonicalize(h),
        "gcd": big(&g),
        "lcm": big(&l),
        "structure": hypergraph::structural_report(h),
    }))
}

fn encode(lambda: &[u64], output: Option<&PathBuf>) -> Result<Outcome, Failure> {
    let h = hypergraph::encode(&simplex(lambda)?)?;
    if let Some(path) = output {
        let text = serde_json::to_string_pretty(&h).expect("serializable") + "\n";
        std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(Outcome {
        summary: format!("{} edges on {} vertices", h.edges().len(), h.n()),
        result: hypergraph_body(&h)?,
        inconclusive: false,
    })
}

fn read_hypergraph(path: &PathBuf) -> Result<WeightedHypergraph, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn decode(h: &WeightedHypergraph) -> Result<Outcome, Failure> {
    let result = hypergraph_body(h)?;
    Ok(Outcome {
        summary: format!("Δ{}", result["lambda"]),
        result,
        inconclusive: false,
    })
}

fn reduce(lambda: &[u64]) -> Result<Outcome, Failure> {
    let s = simplex(lambda)?;
    let moduli = periodicity::period_moduli(&s)?;
    let r = periodicity::reduce(&s)?;
    Ok(Outcome {
        summary: format!("{} → {} in {} steps", r.input, r.result, r.trace.len()),
        result: json!({
            "period_moduli": moduli.iter().map(big).collect::<Vec<_>>(),
            "input": r.input,
            "result": r.result,
            "trace": r.trace,
        }),
        inconclusive: false,
    })
}

fn classes(prefix: &[u64], cfg: &EngineConfig) -> Result<Outcome, Failure> {
    let t = periodicity::congruence_class_verdict(prefix, cfg)?;
    let gaps = t.classes.iter().filter(|c| c.result.is_none()).count();
    let normal: Vec<u64> = t
        .classes
        .iter()
        .filter(|c| c.result.as_ref().is_some_and(|r| r.verdict))
        .map(|c| c.residue)
        .collect();
    Ok(Outcome {
        summary: format!("mod {}: normal classes {normal:?}, {gaps} undecided", t.modulus),
        result: value(&t),
        inconclusive: gaps > 0,
    })
}

fn wps_report(weights: &[u64], bundle: Option<u64>, cfg: &EngineConfig) -> Result<Outcome, Failure> {
    let w = WeightVector::new(weights.to_vec())?;
    let well_formed = wps::well_formed(&w);
    let s = wps::to_rect_simplex(&w)?;
    let mut v = Verdicts::default();
    let (mu_va, mu_norm) = match wps::mu_indices_wps(&w, cfg) {
        Ok(r) => (value(r.mu_va), value(r.mu_norm)),
        Err(e) if e.is_resource() => {
            v.inconclusive = true;
            let x = json!({ "status": "inconclusive", "reason": e.to_string() });
            (x.clone(), x)
        }
        Err(e) => return Err(e.into()),
    };
    let mut result = json!({
        "weights": w,
        "well_formed": well_formed,
        "l": big(&w.l()),
        "simplex": s,
        "mu_va": mu_va,
        "mu_norm": mu_norm,
    });
    let mut summary = format!(
        "ℙ{weights:?} ↔ {s}: μ_va {}, μ_norm {}",
        result["mu_va"].get("value").unwrap_or(&Value::Null),
        result["mu_norm"].get("value").unwrap_or(&Value::Null)
    );
    if let Some(k) = bundle {
        let b = v.take(wps::line_bundle_very_ample(&w, k, cfg))?;
        summary += &format!(", O({k}·l) very ample {}", status(&b));
        result["bundle"] = json!({ "k": k, "very_ample": b });
    }
    Ok(Outcome {
        result,
        inconclusive: v.inconclusive,
        summary,
    })
}

/// The echoed input; also the cache key material.
fn input_echo(c: &Command) -> Result<Value, Failure> {
    Ok(match c {
        Command::Check { lambda, dilation } => json!({ "lambda": lambda, "dilation": dilation }),
        Command::Index { lambda, confirm } => json!({ "lambda": lambda, "confirm": confirm }),
        Command::Search {
            primes,
            count,
            no_verify,
        } => {
            json!({ "primes": primes, "count": count, "verify": !no_verify })
        }
        Command::Frobenius { generators } => json!({ "generators": generators }),
        Command::Hypergraph(HypergraphCommand::Encode { lambda, .. }) => json!({ "lambda": lambda }),
        Command::Hypergraph(HypergraphCommand::Decode { path }) => {
            json!({ "path": path, "hypergraph": read_hypergraph(path)? })
        }
        Command::Reduce { lambda } => json!({ "lambda": lambda }),
        Command::Classes { prefix } => json!({ "prefix": prefix }),
        Command::Wps { weights, bundle } => json!({ "weights": weights, "bundle": bundle }),
    })
}

fn execute(c: &Command, cfg: &EngineConfig) -> Result<Outcome, Failure> {
    match c {
        Command::Check { lambda, dilation } => check(lambda, *dilation, cfg),
        Command::Index { lambda, confirm } => index(lambda, *confirm, cfg),
        Command::Search {
            primes,
            count,
            no_verify,
        } => search(primes, *count, !no_verify, cfg),
        Command::Frobenius { generators } => frobenius_report(generators, cfg),
        Command::Hypergraph(HypergraphCommand::Encode { lambda, output }) => encode(lambda, output.as_ref()),
        Command::Hypergraph(HypergraphCommand::Decode { path }) => decode(&read_hypergraph(path)?),
        Command::Reduce { lambda } => reduce(lambda),
        Command::Classes { prefix } => classes(prefix, cfg),
        Command::Wps { weights, bundle } => wps_report(weights, *bundle, cfg),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let cfg = cli.budgets.config();
    let started = Instant::now();
    let name = cli.command.name();

    let input = input_echo(&cli.command);
    let budgets = value(cfg);
    // writing a file is a side effect a cache hit would skip
    let cacheable = !matches!(
        cli.command,
        Command::Hypergraph(HypergraphCommand::Encode { output: Some(_), .. })
    );
    let cache = Cache::from_env().filter(|_| !cli.budgets.no_cache && cacheable);

    let outcome = input
        .as_ref()
        .map_err(|f| Failure::Usage(f.message().to_string()))
        .and_then(|input| {
            let key = Cache::key(&[&Value::from(name), input, &budgets]);
            if let Some(hit) = cache.as_ref().and_then(|c| c.get(&key)) {
                log::info!("cache hit {key}");
                let inconclusive = hit["inconclusive"].as_bool().unwrap_or(false);
                return Ok(Outcome {
                    summary: hit["summary"].as_str().unwrap_or_default().to_string(),
                    result: hit["result"].clone(),
                    inconclusive,
                });
            }
            let out = execute(&cli.command, &cfg)?;
            if let Some(c) = &cache {
                let entry = json!({ "result": out.result, "inconclusive": out.inconclusive, "summary": out.summary });
                if let Err(e) = c.put(&key, &entry) {
                    log::warn!("cache write failed: {e}");
                }
            }
            Ok(out)
        });

    let mut report = json!({
        "schema": SCHEMA,
        "version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "input": input.as_ref().ok(),
        "budgets": budgets,
    });
    let code = match &outcome {
        Ok(out) => {
            report["result"] = out.result.clone();
            eprintln!("{}", out.summary);
            if out.inconclusive {
                eprintln!("some verdicts exceeded the budget and are reported as inconclusive");
                3
            } else {
                0
            }
        }
        Err(f) => {
            report["error"] = json!({ "kind": f.kind(), "message": f.message() });
            eprintln!("error: {}", f.message());
            f.code()
        }
    };
    report["timings"] = json!({ "elapsed_ms": started.elapsed().as_secs_f64() * 1e3 });
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    ExitCode::from(code)
}
