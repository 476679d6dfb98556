//! Runs without the libtest harness so the per-criterion lines always print.

use std::process::ExitCode;

use rigidform::suite::{run_criterion, SuiteConfig, CRITERIA};

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut failed = Vec::new();
    for (id, ..) in CRITERIA {
        let r = run_criterion(id, &cfg);
        println!("{r}");
        if !r.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
