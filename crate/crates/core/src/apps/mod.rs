//! End-to-end applications: 3-SAT through Schöning's walk and
//! amplification, and element distinctness by sampling plus Grover search.

mod cnf;
mod ed_hybrid;
mod sat;

pub use cnf::Cnf3Formula;
pub use ed_hybrid::{
    base_cost_bound, ed_base_run, ed_hybrid_query_model, element_distinctness_hybrid,
    estimate_base_rate, sample_size, BaseRun, HybridOutcome,
};
pub use sat::{
    amplified_cost,    estimate_success, quantum_speedup_report, schoening_run, schoening_run_counted,
    stats_from_counts, wilson_interval,
    SatRunStats, SpeedupReport, UNIFORM_INIT_NOTE,
};
