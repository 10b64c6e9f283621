// Minimum of an unsorted table with threshold searches.

use qsearch::optimize;
use qsearch::{SeededRng, ValueOracle};
use rand::seq::SliceRandom;

pub fn run_example() -> qsearch::Result<()> {
    let mut rng = SeededRng::new(11, 0);
    for n in [64usize, 1024, 16384] {
        let mut values: Vec<i64> = (0..n as i64).map(|v| 3 * v - 100).collect();
        values.shuffle(&mut rng);
        let f = ValueOracle::new(values)?;
        let out = optimize::find_minimum(&f, &mut rng, None)?;
        println!(
            "N={n:<6} min {} at {} (verified {}), {} queries, budget {}",
            out.value,
            out.index,
            out.verified,
            out.queries,
            optimize::default_min_budget(n)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qsearch::Result<()> {
    run_example()
}
