use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;
use std::time::Instant;
use tncg::lichnerowicz::lemmas::{prove_curved, CURVED_IDENTITIES};
use tncg::report::Report;
use tncg::scenario::{goldens, scenario, ScenarioReport, SCENARIOS};
use tncg::suites::{run_suite, SuiteConfig, SUITES};

/// Exact verification runner for twisted spectral triples.
#[derive(Parser, Debug)]
#[command(name = "tncg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite and report every check.
    Verify(RunConfig),
    /// Derive a fermionic action density and compare it with its stated form.
    Demo {
        #[arg(value_parser = ["manifold", "weyl", "dirac"])]
        name: String,
        #[arg(long)]
        json: bool,
        /// Rewrite the scenario's golden file with the derived canonical form.
        #[arg(long)]
        update_goldens: bool,
    },
    /// Prove one curved-space identity by rewriting to normal form.
    Prove {
        #[arg(value_parser = CURVED_IDENTITIES)]
        id: String,
        /// Print every rule firing.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct RunConfig {
    #[arg(long, default_value = "all", value_parser = SUITES)]
    suite: String,
    /// Seed for every randomized check.
    #[arg(long, env = "TNCG_SEED", default_value_t = 42)]
    seed: u64,
    /// Number of random boosts.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Random assignments per numeric-oracle comparison.
    #[arg(long, default_value_t = tncg::oracle::ORACLE_TRIALS)]
    oracle_trials: usize,
    #[arg(long)]
    json: bool,
    /// Print per-suite timings on stderr (suites then run one after another).
    #[arg(long)]
    trace: bool,
    /// Rewrite the golden densities before checking (used by `action` and `all`).
    #[arg(long)]
    update_goldens: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let outcome = match cli.command {
        Command::Verify(cfg) => verify(&mut out, &cfg),
        Command::Demo { name, json, update_goldens } => demo(&mut out, &name, json, update_goldens),
        Command::Prove { id, trace, json } => prove(&mut out, &id, trace, json),
    };
    // a closed pipe (e.g. `| head`) is not an error of the run
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn check_json(r: &Report) -> Vec<Value> {
    r.checks
        .iter()
        .map(|c| {
            let mut v = json!({
                "anchor": c.anchor,
                "status": if c.passed { "pass" } else { "fail" },
                "detail": c.detail,
            });
            if let (false, Some(w)) = (c.passed, &c.witness) {
                v["witness"] = json!(w);
            }
            v
        })
        .collect()
}

fn print_json(out: &mut String, v: &Value) -> Result<(), String> {
    let text = serde_json::to_string_pretty(v).map_err(|e| e.to_string())?;
    let _ = writeln!(out, "{text}");
    Ok(())
}

fn write_golden(s: &ScenarioReport) -> Result<(), String> {
    let path = goldens::write(&s.name, &s.density.canonical()).map_err(|e| format!("writing golden {}: {e}", s.name))?;
    eprintln!("golden written: {} (rebuild to embed it)", path.display());
    Ok(())
}

fn verify(out: &mut String, cfg: &RunConfig) -> Result<bool, String> {
    if cfg.update_goldens && matches!(cfg.suite.as_str(), "action" | "all") {
        for name in SCENARIOS {
            write_golden(&scenario(name).map_err(|e| e.to_string())?)?;
        }
    }
    let sc = SuiteConfig { seed: cfg.seed, boost_trials: cfg.trials, oracle_trials: cfg.oracle_trials };
    let start = Instant::now();
    let report = if cfg.trace {
        let names: Vec<&str> = if cfg.suite == "all" { SUITES[..SUITES.len() - 1].to_vec() } else { vec![cfg.suite.as_str()] };
        let mut all = Report::new(cfg.suite.clone());
        for name in names {
            let t = Instant::now();
            let r = run_suite(name, &sc).map_err(|e| e.to_string())?;
            eprintln!("{name}: {} checks in {:.2?}", r.checks.len(), t.elapsed());
            all.extend(r);
        }
        all
    } else {
        run_suite(&cfg.suite, &sc).map_err(|e| e.to_string())?
    };
    let elapsed = start.elapsed();
    if cfg.json {
        print_json(
            out,
            &json!({
                "suite": cfg.suite,
                "seed": cfg.seed,
                "trials": cfg.trials,
                "passed": report.passed(),
                "total": report.checks.len(),
                "failed": report.failures().count(),
                "checks": check_json(&report),
            }),
        )?;
    } else {
        for c in &report.checks {
            let _ = writeln!(out, "{c}");
        }
        let failed = report.failures().count();
        let _ = writeln!(
            out,
            "suite {}: {}/{} passed (seed {}, {:.2?})",
            cfg.suite,
            report.checks.len() - failed,
            report.checks.len(),
            cfg.seed,
            elapsed
        );
    }
    Ok(report.passed())
}

fn demo(out: &mut String, name: &str, json: bool, update: bool) -> Result<bool, String> {
    let key = if name == "manifold" { "manifold-action" } else { name };
    let s = scenario(key).map_err(|e| e.to_string())?;
    if update {
        write_golden(&s)?;
    }
    let note = match key {
        "manifold-action" => Some(format!(
            "structure: no ∂₀ appears; the time direction enters only through f₀ ({} term)",
            s.density.terms_mentioning("f0")
        )),
        _ => None,
    };
    if json {
        let ids: Vec<Value> = s
            .identifications
            .iter()
            .map(|i| json!({ "label": i.label, "matched": i.matched, "up_to_total_derivative": i.up_to_total_derivative }))
            .collect();
        print_json(
            out,
            &json!({
                "scenario": key,
                "density": s.density.canonical(),
                "stated_form_matches": s.density == s.stated,
                "note": note,
                "identifications": ids,
                "passed": s.passed(),
                "checks": check_json(&s.report),
            }),
        )?;
    } else {
        let _ = writeln!(out, "scenario {key}");
        let _ = writeln!(out, "density (canonical, modulo total derivatives):");
        for line in s.density.canonical().lines() {
            let _ = writeln!(out, "  {line}");
        }
        if let Some(n) = note {
            let _ = writeln!(out, "{n}");
        }
        for c in &s.report.checks {
            let _ = writeln!(out, "{c}");
        }
    }
    Ok(s.passed())
}

fn prove(out: &mut String, id: &str, trace: bool, json: bool) -> Result<bool, String> {
    let d = prove_curved(id, trace).map_err(|e| e.to_string())?.ok_or_else(|| format!("unknown identity `{id}`"))?;
    if json {
        let eqs: Vec<Value> = d
            .equations
            .iter()
            .map(|e| json!({ "label": e.label, "holds": e.holds(), "lhs": e.lhs.to_string(), "rhs": e.rhs.to_string() }))
            .collect();
        let mut v = json!({ "id": d.id, "statement": d.statement, "holds": d.holds(), "equations": eqs });
        if trace {
            v["trace"] = json!(d.trace);
        }
        print_json(out, &v)?;
    } else {
        if trace {
            for line in &d.trace {
                let _ = writeln!(out, "{line}");
            }
        }
        let _ = write!(out, "{d}");
        let _ = writeln!(out, "{}", d.check());
    }
    Ok(d.holds())
}
