//! Quantum-walk search: coined walks on tori, Szegedy walks over symmetric
//! Markov chains, and the Johnson-graph walk for element distinctness.

mod grid;
mod johnson;
mod markov;
mod szegedy;

pub use grid::{
    grid_classical_search, grid_walk_search, marked_probability_series, peak_time, peak_window,
    CoinedState, GridSearchOutcome, TorusGrid, GRID_WINDOW, PEAK_FRACTION,
};
pub use johnson::{
    binomial, collision_vertex_probability, ed_walk, johnson_chain, EdWalkOutcome, JohnsonChain,
    ED_BUDGET_WINDOWS, JOHNSON_CAP,
};
pub use markov::{classical_hitting, MarkovChain, CHAIN_TOLERANCE, FILE_TOLERANCE};
pub use szegedy::{
    max_window, szegedy_find_marked, szegedy_step, FindOptions, SzegedyCosts, SzegedyOutcome,
    SzegedyWalk, SZEGEDY_WINDOW, WINDOW_GROWTH,
};
