// Quantized Markov chains: spectral data, hitting times, and walk search.

use qsearch::walks::{self, FindOptions, MarkovChain, SzegedyCosts};
use qsearch::SeededRng;

pub fn run_example() -> qsearch::Result<()> {
    let mut rng = SeededRng::new(17, 0);
    let chains = [
        ("cycle 64", MarkovChain::cycle(64, &[10])?),
        ("torus 8x8", MarkovChain::torus(8, &[0])?),
        ("complete 64", MarkovChain::complete(64, &[1, 2, 3, 4])?),
    ];
    for (name, chain) in &chains {
        let budget = 100 * walks::max_window(chain, chain.delta());
        let costs = SzegedyCosts::new(1.0, 1.0, 1.0)?;
        let out = walks::szegedy_find_marked(chain, costs, FindOptions::with_budget(budget), &mut rng)?;
        println!(
            "{name:<12} delta {:.4} gap {:.4} hitting {:.1}; quantum found {:?} in {} steps, cost {}",
            chain.delta(),
            chain.gap(),
            chain.exact_hitting_time()?,
            out.state,
            out.walk_steps,
            out.cost
        );
    }

    let text = "3\n0 0.5 0.5\n0.5 0 0.5\n0.5 0.5 0\n2\n";
    let parsed = MarkovChain::parse(text)?;
    println!("parsed chain: {} states, marked {:?}", parsed.states(), parsed.marked_states());
    Ok(())
}

#[allow(dead_code)]
fn main() -> qsearch::Result<()> {
    run_example()
}
