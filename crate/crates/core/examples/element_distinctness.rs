// Element distinctness two ways: sampling plus search, and the Johnson walk.

use qsearch::apps;
use qsearch::bench::planted_collision;
use qsearch::walks;
use qsearch::{SeededRng, ValueOracle};

pub fn run_example() -> qsearch::Result<()> {
    let mut rng = SeededRng::new(21, 0);
    let n = 256;
    let f = ValueOracle::new(planted_collision(n, &mut rng))?;
    let eps = apps::estimate_base_rate(&f, 400, &mut rng)?;
    let out = apps::element_distinctness_hybrid(&f, eps, &mut rng)?;
    println!(
        "hybrid N={n}: base rate {eps:.3}, {} rounds, {} queries, pair {:?} (model {:.0})",
        out.repetitions,
        out.queries,
        out.pair,
        apps::ed_hybrid_query_model(n, eps)?
    );

    let n = 10;
    let m = 5;
    let f = ValueOracle::new(planted_collision(n, &mut rng))?;
    let jc = walks::johnson_chain(n, m, &f)?;
    let out = walks::ed_walk(&f, m, &mut rng, None)?;
    println!(
        "walk N={n} M={m}: {} chain states, {} marked; pair {:?} after {} steps, {} queries",
        jc.chain().states(),
        jc.chain().marked_states().len(),
        out.pair,
        out.walk_steps,
        out.queries
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> qsearch::Result<()> {
    run_example()
}
