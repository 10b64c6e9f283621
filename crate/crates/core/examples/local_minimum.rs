// Local minimum on the Boolean hypercube: sample, then search-guided descent.

use qsearch::optimize::{self, HypercubeOracle, LocalMinParams};
use qsearch::SeededRng;
use rand::Rng;

pub fn run_example() -> qsearch::Result<()> {
    let mut rng = SeededRng::new(5, 0);
    for n in [6usize, 10, 14] {
        let values: Vec<i64> = (0..1 << n).map(|_| rng.gen_range(0..1_000_000)).collect();
        let f = HypercubeOracle::new(n, values.clone())?;
        let params = LocalMinParams::for_dimension(n);
        let out = optimize::find_local_minimum(&f, &mut rng)?;

        let check = HypercubeOracle::new(n, values.clone())?;
        let ok = optimize::verify_local_min(&check, out.assignment);
        let classical = HypercubeOracle::new(n, values)?;
        let baseline = optimize::classical_local_descent(&classical, &mut rng);
        println!(
            "n={n:<2} m={:<4} local min {:#0w$b} value {} after {} descent steps: {} queries (classical descent {}), verified {ok}",
            params.m,
            out.assignment,
            out.value,
            out.descent_steps,
            out.queries,
            baseline.queries,
            w = n + 2
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qsearch::Result<()> {
    run_example()
}
