// Search without knowing how many items are marked, and listing all of them.

use qsearch::grover;
use qsearch::sim::QueryOracle;
use qsearch::{BitOracle, SeededRng};

pub fn run_example() -> qsearch::Result<()> {
    let n = 1024;
    let mut rng = SeededRng::new(7, 0);
    for k in [0usize, 1, 16, 256] {
        let marked: Vec<usize> = (0..k).map(|i| i * (n / k.max(1))).collect();
        let o = BitOracle::from_marked(n, &marked)?;
        let found = grover::grover_search_unknown(&o, &mut rng, None)?;
        println!(
            "k={k:<3} found {found:?} after {} queries (sqrt(N/k) = {:.1})",
            o.query_count(),
            (n as f64 / k.max(1) as f64).sqrt()
        );
    }

    let o = BitOracle::from_marked(n, &[3, 500, 501, 1000])?;
    let all = grover::find_all(&o, &mut rng)?;
    println!("find_all: {all:?} in {} queries", o.query_count());
    Ok(())
}

#[allow(dead_code)]
fn main() -> qsearch::Result<()> {
    run_example()
}
