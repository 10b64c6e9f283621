// Coined walk search on a torus against the row-by-row scan.

use qsearch::walks::{self, TorusGrid};
use qsearch::{BitOracle, SeededRng};

pub fn run_example() -> qsearch::Result<()> {
    let mut rng = SeededRng::new(13, 0);
    for (d, l) in [(2, 16), (2, 32), (3, 8)] {
        let grid = TorusGrid::new(d, l)?;
        let target = grid.cells() * 2 / 3;
        let series = walks::marked_probability_series(grid, &[target], walks::peak_window(grid));
        let peak = walks::peak_time(grid);

        let o = BitOracle::from_marked(grid.cells(), &[target])?;
        let q = walks::grid_walk_search(grid, &o, &mut rng, 100_000)?;
        let o = BitOracle::from_marked(grid.cells(), &[target])?;
        let c = walks::grid_classical_search(grid, &o)?;
        println!(
            "{d}D L={l:<2} N={:<5} peak t={peak} p={:.3}; walk found {:?} in {} steps, scan {} steps",
            grid.cells(),
            series[peak],
            q.cell,
            q.steps,
            c.steps
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qsearch::Result<()> {
    run_example()
}
