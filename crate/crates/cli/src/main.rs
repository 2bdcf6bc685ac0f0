mod args;
mod record;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use serde_json::{json, Value};

use lac_core::certificate::certificate_report;
use lac_core::cyclegraph::{
    audit_interval_lattice, seeded_double_counts, AuditConfig, IntervalLattice,
    DEFAULT_MAX_ELEMENTS,
};
use lac_core::lattice::{
    extremal_construction, find_yk_copy, find_yk_prime_copy, parse_family, render_family,
};
use lac_core::ramus::{extremal_value, verify_min_residue, verify_sum_identities};
use lac_core::search::{
    run_search, SearchConfig, SearchMode, DEFAULT_MAX_ELEMENTS as SEARCH_MAX_ELEMENTS,
};
use lac_core::{Error, ExactInt, RamusParams};

use args::{Cli, Command, Common, Mode, Which};
use record::{RunRecord, Timing};

const FORMULA_MAX_N: u32 = 256;
const CONSTRUCT_MAX_N: u32 = 20;

/// What a command produced, before it is wrapped in a [`RunRecord`].
struct Output {
    command: &'static str,
    parameters: Value,
    result: Value,
    /// False when a verification failed.
    ok: bool,
    nodes: Option<u64>,
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payloads serialize")
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded(_) | Error::Timeout(_) => 3,
        Error::Certificate(_) | Error::ProfileRejected(_) => 1,
        _ => 2,
    }
}

fn usage(msg: String) -> Error {
    Error::InvalidParams(msg)
}

fn formula(n: u32, k: u32) -> Result<Output, Error> {
    if n > FORMULA_MAX_N {
        return Err(usage(format!(
            "formula supports n <= {FORMULA_MAX_N}, got {n}"
        )));
    }
    let params = RamusParams::new(n, k)?;
    let report = verify_min_residue(n, k)?;
    let mut result = to_value(&report);
    result["value"] = Value::String(extremal_value(params).to_string());
    if k < 3 {
        result["note"] =
            Value::String("the closed form 2^n - S(n,k,m) is proven only for k >= 3".into());
    }
    Ok(Output {
        command: "formula",
        parameters: json!({"n": n, "k": k}),
        result,
        ok: true,
        nodes: None,
    })
}

fn construct(n: u32, k: u32, out: Option<&std::path::Path>) -> Result<Output, Error> {
    if n > CONSTRUCT_MAX_N {
        return Err(Error::CapExceeded(format!(
            "construct emits at most n = {CONSTRUCT_MAX_N}, got {n}"
        )));
    }
    let family = extremal_construction(n, k)?;
    let expected = extremal_value(RamusParams::new(n, k)?);
    let admissible = lac_core::lattice::is_admissible(&family, k);
    if let Some(path) = out {
        std::fs::write(path, render_family(&family))
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let size = ExactInt::from(family.len());
    let ok = admissible && size == expected;
    Ok(Output {
        command: "construct",
        parameters: json!({"n": n, "k": k, "out": out.map(|p| p.display().to_string())}),
        result: json!({
            "family": family.lines(),
            "size": family.len(),
            "formula_value": expected.to_string(),
            "admissible": admissible,
        }),
        ok,
        nodes: None,
    })
}

fn verify_family(path: &std::path::Path, k: u32, n: Option<u32>) -> Result<Output, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let family = parse_family(&text, n)?;
    if k < 2 {
        return Err(usage(format!("k must be at least 2, got {k}")));
    }
    let y = find_yk_copy(&family, k);
    let y_prime = find_yk_prime_copy(&family, k);
    let admissible = y.is_none() && y_prime.is_none();
    Ok(Output {
        command: "verify-family",
        parameters: json!({"path": path.display().to_string(), "k": k, "n": family.n()}),
        result: json!({
            "n": family.n(),
            "size": family.len(),
            "admissible": admissible,
            "y_copy": y,
            "y_prime_copy": y_prime,
        }),
        ok: admissible,
        nodes: None,
    })
}

fn search(
    common: &Common,
    workers: usize,
    n: u32,
    k: u32,
    mode: Mode,
    prune_bound: Option<u64>,
    symmetry: bool,
) -> Result<Output, Error> {
    let mode = match mode {
        Mode::Full => SearchMode::Full,
        Mode::Interval => SearchMode::Interval,
    };
    let mut config = SearchConfig::new(n, k, mode);
    config.workers = workers;
    config.seed = common.seed;
    config.max_elements = common.max_elements.unwrap_or(SEARCH_MAX_ELEMENTS);
    config.time_limit = Some(time_limit(common)?);
    config.prune_bound = prune_bound.map(ExactInt::from);
    config.symmetry = symmetry;
    let r = run_search(&config)?;
    let mut result = to_value(&r);
    if mode == SearchMode::Full && k >= 3 {
        let closed = extremal_value(RamusParams::new(n, k)?);
        result["closed_form"] = Value::String(closed.to_string());
        result["matches_closed_form"] = Value::Bool(closed == r.optimum);
    }
    Ok(Output {
        command: "search",
        parameters: json!({
            "n": n,
            "k": k,
            "mode": mode,
            "prune_bound": prune_bound.map(|b| b.to_string()),
            "symmetry": symmetry,
            "seed": common.seed,
            "max_elements": config.max_elements,
        }),
        result,
        ok: true,
        nodes: Some(r.nodes_explored),
    })
}

fn time_limit(common: &Common) -> Result<Duration, Error> {
    Duration::try_from_secs_f64(common.max_seconds).map_err(|_| {
        usage(format!(
            "--max-seconds must be a nonnegative number, got {}",
            common.max_seconds
        ))
    })
}

fn verify(
    common: &Common,
    workers: usize,
    n: u32,
    k: u32,
    which: Which,
    samples: usize,
) -> Result<Output, Error> {
    let mut parameters = json!({"n": n, "k": k, "which": format!("{which:?}").to_lowercase()});
    let (result, ok) = match which {
        Which::Lemma1 | Which::Lemma2 | Which::Theorem9 => {
            let config = AuditConfig {
                max_elements: common.max_elements.unwrap_or(DEFAULT_MAX_ELEMENTS),
                workers,
                time_limit: Some(time_limit(common)?),
            };
            parameters["max_elements"] = json!(config.max_elements);
            let audit = audit_interval_lattice(&IntervalLattice::identity(n), k, &config)?;
            let report = match which {
                Which::Lemma1 => audit.lemma1_report(),
                Which::Lemma2 => audit.lemma2_report(),
                _ => audit.theorem9_report(),
            };
            (to_value(&report), report.passed())
        }
        Which::Identities => {
            let ids = verify_sum_identities(n, k)?;
            let min = verify_min_residue(n, k)?;
            let ok = ids.passed && min.m_in_argmin;
            (json!({"identities": ids, "min_residue": min}), ok)
        }
        Which::Certificate => {
            let report = certificate_report(n, k)?;
            (to_value(&report), report.passed)
        }
        Which::Doublecount => {
            parameters["samples"] = json!(samples);
            parameters["seed"] = json!(common.seed);
            let counts = seeded_double_counts(n, samples, common.seed)?;
            let ok = counts.iter().all(|d| d.holds());
            (json!({"n": n, "counts": counts, "passed": ok}), ok)
        }
    };
    Ok(Output {
        command: "verify",
        parameters,
        result,
        ok,
        nodes: None,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = &cli.common;
    let workers = common
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |v| v.get()))
        .max(1);
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Formula(s) => formula(s.n, s.k),
        Command::Construct { size, out } => construct(size.n, size.k, out.as_deref()),
        Command::VerifyFamily { path, k, n } => verify_family(path, *k, *n),
        Command::Search {
            size,
            mode,
            prune_bound,
            symmetry,
        } => search(
            common,
            workers,
            size.n,
            size.k,
            *mode,
            *prune_bound,
            *symmetry,
        ),
        Command::Verify {
            size,
            which,
            samples,
        } => verify(common, workers, size.n, size.k, *which, *samples),
    };
    let output = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let record = RunRecord {
        command: output.command,
        version: env!("CARGO_PKG_VERSION"),
        parameters: output.parameters,
        worker_count: workers,
        result: output.result,
        timing: Timing {
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            nodes_explored: output.nodes,
        },
    };
    if let Err(e) = record.write(common.format, &mut std::io::stdout().lock()) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if output.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
