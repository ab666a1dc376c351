//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use idemcore_cli::acceptance::Acceptance;

fn main() {
    let acc = Acceptance::default();
    let mut failed = 0;
    for n in 1..=8 {
        let out = acc.run(n);
        println!("{} [{:.1}s]", out.line(), out.elapsed.as_secs_f64());
        if !out.passed() {
            failed += 1;
            for c in out.report.checks.iter().filter(|c| c.status != idemcore::report::Status::Pass).take(20) {
                println!("    {} [{}]: {}", c.name, c.status, c.witness.as_deref().unwrap_or(""));
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
