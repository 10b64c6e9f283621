// Grover search with the standard and the exact final iteration.

use qsearch::grover::{self, GroverParams};
use qsearch::sim::QueryOracle;
use qsearch::{BitOracle, SeededRng};

pub fn run_example() -> qsearch::Result<()> {
    let mut rng = SeededRng::new(42, 0);
    for (n, k) in [(4, 1), (64, 1), (100, 4), (1024, 3)] {
        let marked: Vec<usize> = (0..k).map(|i| (i * 37 + 5) % n).collect();
        let params = GroverParams::new(n, k)?;
        let p = grover::success_prob_analytic(n, k, params.t)?;

        let o = BitOracle::from_marked(n, &marked)?;
        let hit = grover::grover_search(&o, &params, &mut rng)?;
        let exact = BitOracle::from_marked(n, &marked)?;
        let certain = grover::grover_search_exact(&exact, &params, &mut rng)?;
        assert!(exact.peek(certain));

        println!(
            "N={n:<5} k={k}: {} queries, standard success {p:.4} (got marked: {}), exact run hit {certain} with {} queries",
            params.t,
            o.peek(hit),
            exact.query_count()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qsearch::Result<()> {
    run_example()
}
