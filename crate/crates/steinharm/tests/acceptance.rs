use std::process::ExitCode;
use std::time::Instant;

use steinharm::verify::{run_criterion, Options, CRITERIA};

fn main() -> ExitCode {
    let opts = Options::default();
    let mut failed = 0;
    for (id, title) in CRITERIA {
        let start = Instant::now();
        let (status, detail) = match run_criterion(id, &opts) {
            Ok(outcome) => {
                let bad: Vec<String> = outcome
                    .checks
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| format!("{} (expected {}, got {})", c.name, c.expected, c.got))
                    .collect();
                let status = if outcome.pass() { "PASS" } else { "FAIL" };
                (status, format!("{} checks{}", outcome.checks.len(), if bad.is_empty() { String::new() } else { format!("; failing: {}", bad.join(", ")) }))
            }
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {id:>2} {status} {title} [{detail}, {:.1}s]", start.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
