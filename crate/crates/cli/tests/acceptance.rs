//! Acceptance criteria, one line each. Findings count against a criterion
//! unless the criterion names them as accepted.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use kowtype::catalog::{sample_initial_state, SystemId};
use kowtype_cli::checks::{self, integrals, Abort, Partial};
use kowtype_cli::{Check, RunConfig, Status, EXIT_OK};

type Criterion<'a> = (&'static str, u64, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    ok: bool,
    note: String,
}

fn judge(partial: Partial, accept: impl Fn(&Check) -> bool) -> Outcome {
    let (checks, abort) = partial;
    let bad: Vec<String> = checks
        .iter()
        .filter(|c| c.status != Status::Pass && !accept(c))
        .map(|c| format!("{}::{}", c.target.name(), c.name))
        .collect();
    let mut note = format!("{} checks", checks.len());
    if let Some(a) = &abort {
        note.push_str(&format!(", aborted: {a:?}"));
    }
    if !bad.is_empty() {
        note.push_str(&format!(", not passing: {}", bad.join(", ")));
    }
    Outcome {
        ok: abort.is_none() && bad.is_empty() && !checks.is_empty(),
        note,
    }
}

fn strict(partial: Partial) -> Outcome {
    judge(partial, |_| false)
}

fn conservation(cfg: &RunConfig) -> Outcome {
    let mut all = Vec::new();
    let mut abort = None;
    for id in [SystemId::S3Cubic, SystemId::S1Complex] {
        let run = sample_initial_state(id, &cfg.params, cfg.seed, true)
            .map_err(Abort::from)
            .and_then(|(st, p)| integrals::drift_checks(&p, &st, 5.0, &cfg.tol, cfg.sample_dt));
        match run {
            Ok(c) => all.extend(c),
            Err(a) => abort = Some(a),
        }
    }
    strict((all, abort))
}

fn classification(cfg: &RunConfig) -> Outcome {
    let checks = integrals::classification_checks(&cfg.params, cfg.seed);
    judge((checks, None), |c| c.status == Status::Finding && c.name.starts_with("s2_twoparam."))
}

fn full_suite() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_kowtype"))
        .args(["verify", "all", "--seed", "0"])
        .output()
        .expect("run kowtype");
    let code = out.status.code();
    let tail = String::from_utf8_lossy(&out.stdout).lines().last().unwrap_or("").to_string();
    Outcome {
        ok: code == Some(EXIT_OK),
        note: format!("exit {code:?}, {tail}"),
    }
}

fn main() -> ExitCode {
    let cfg = RunConfig::default();
    let quad = RunConfig {
        system: SystemId::S1Complex,
        ..RunConfig::default()
    };
    let criteria: Vec<Criterion> = vec![
        ("separability identities", 5, Box::new(|| strict(checks::separability::run(&cfg)))),
        ("coefficient theorem", 10, Box::new(|| strict(checks::theorem::run(&cfg)))),
        ("invariant measure", 5, Box::new(|| strict(checks::measure::run(&cfg)))),
        ("conservation under flow", 20, Box::new(|| conservation(&cfg))),
        ("relation classification", 15, Box::new(|| classification(&cfg))),
        ("separation and quadrature", 30, Box::new(|| strict(checks::quadrature::run(&quad)))),
        ("chart consistency", 2, Box::new(|| strict(checks::chart::run(&cfg)))),
        ("full suite", 90, Box::new(full_suite)),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut o = run();
        let took = start.elapsed();
        if took > Duration::from_secs(*budget) {
            o.ok = false;
            o.note.push_str(&format!(", over the {budget} s budget"));
        }
        if !o.ok {
            failed += 1;
        }
        println!(
            "criterion {} {:<27} {}  {:.2} s  {}",
            i + 1,
            name,
            if o.ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            o.note
        );
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
