// Schöning's random walk on planted 3-SAT and the amplified repetition count.

use qsearch::apps::{self, Cnf3Formula};
use qsearch::SeededRng;

pub fn run_example() -> qsearch::Result<()> {
    let mut rng = SeededRng::new(9, 0);
    let (formula, planted) = Cnf3Formula::planted(14, 10.0, &mut rng)?;
    assert!(formula.satisfied_by(&planted));
    let stats = apps::estimate_success(&formula, 5000, &mut rng);
    let report = apps::quantum_speedup_report(&stats);
    println!(
        "n=14, {} clauses: eps_hat {:.4} (95% {:.4}..{:.4}), (3/4)^n = {:.4}",
        formula.clauses().len(),
        stats.eps_hat,
        stats.interval.0,
        stats.interval.1,
        0.75f64.powi(14)
    );
    println!(
        "amplified rounds {} vs classical repetitions {} ({})",
        report.quantum_reps, report.classical_reps, report.note
    );

    let text = "p cnf 3 2\n1 -2 3 0\n-1 2 0\n";
    let small = Cnf3Formula::parse_dimacs(text)?;
    println!("parsed DIMACS: {:?}", apps::schoening_run(&small, &mut rng));
    Ok(())
}

#[allow(dead_code)]
fn main() -> qsearch::Result<()> {
    run_example()
}
