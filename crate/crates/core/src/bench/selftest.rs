//! Fast sanity checks exercised by `qsearch-bench selftest`.

use std::collections::BTreeSet;

use super::config::ExperimentConfig;
use super::emit::{Format, RecordWriter};
use super::experiments::{run_experiment, Experiment};
use super::fit::fit_exponent;
use crate::amplify::{classical_repetitions, predicted_repetitions};
use crate::error::Result;
use crate::grover::{self, GroverParams};
use crate::optimize::{self, HypercubeOracle};
use crate::sim::{BitOracle, QueryCounter, QueryOracle, SeededRng, StateVector};
use crate::walks::{self, MarkovChain, SzegedyWalk, TorusGrid};

pub struct Check {
    pub name: &'static str,
    pub run: fn() -> Result<bool>,
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn uniform_state() -> Result<bool> {
    let s = StateVector::uniform(4)?;
    Ok((0..4).all(|i| close(s.amplitude(i).re, 0.5, 1e-12))
        && (1..=1 << 16).step_by(997).all(|n| {
            StateVector::uniform(n).is_ok_and(|s| close(s.norm_sqr(), 1.0, 1e-12))
        }))
}

fn phase_flip_involution() -> Result<bool> {
    let c = QueryCounter::new();
    let mut s = StateVector::uniform(4)?;
    s.apply_phase_flip(&[2], &c)?;
    let flipped = close(s.amplitude(2).re, -0.5, 1e-12);
    s.apply_phase_flip(&[2], &c)?;
    Ok(flipped && close(s.amplitude(2).re, 0.5, 1e-12) && c.count() == 2)
}

fn grover_exact_small() -> Result<bool> {
    let mut rng = SeededRng::new(1, 0);
    for (n, k) in [(4, 1), (16, 1), (100, 4)] {
        let marked: Vec<usize> = (0..k).collect();
        let o = BitOracle::from_marked(n, &marked)?;
        let i = grover::grover_search_exact(&o, &GroverParams::new(n, k)?, &mut rng)?;
        if !o.peek(i) || o.query_count() != grover::optimal_query_count(n, k)? as u64 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn unknown_k_edges() -> Result<bool> {
    let mut rng = SeededRng::new(2, 0);
    let none = BitOracle::new(vec![false; 64])?;
    let all = BitOracle::new(vec![true; 64])?;
    Ok(grover::grover_search_unknown(&none, &mut rng, None)?.is_none()
        && grover::grover_search_unknown(&all, &mut rng, None)?.is_some()
        && grover::find_all(&none, &mut rng)?.is_empty())
}

fn repetitions() -> Result<bool> {
    Ok(predicted_repetitions(1.0)? == 0
        && classical_repetitions(1.0)? == 1
        && classical_repetitions(0.01)? == 100)
}

fn local_min_linear() -> Result<bool> {
    let mut rng = SeededRng::new(3, 0);
    let up = HypercubeOracle::from_fn(4, |x| x.count_ones() as i64)?;
    let down = HypercubeOracle::from_fn(4, |x| -(x.count_ones() as i64))?;
    Ok(optimize::find_local_minimum(&up, &mut rng)?.assignment == 0
        && optimize::find_local_minimum(&down, &mut rng)?.assignment == 15
        && optimize::verify_local_min(&up, 0)
        && !optimize::verify_local_min(&up, 15))
}

fn grid_classical() -> Result<bool> {
    let grid = TorusGrid::new(2, 8)?;
    let first = grid.snake_order()[0];
    let o = BitOracle::from_marked(64, &[first])?;
    let empty = BitOracle::new(vec![false; 64])?;
    let a = walks::grid_classical_search(grid, &o)?;
    let b = walks::grid_classical_search(grid, &empty)?;
    Ok(a.steps == 1 && b.cell.is_none() && b.steps == 64)
}

fn szegedy_fixed_point() -> Result<bool> {
    let chain = MarkovChain::cycle(16, &[])?;
    let walk = SzegedyWalk::new(&chain);
    let start = walk.stationary_state()?;
    let mut s = start.clone();
    for _ in 0..50 {
        walk.step(&mut s)?;
    }
    Ok(close(s.inner(&start).norm(), 1.0, 1e-9))
}

fn johnson_counts() -> Result<bool> {
    let f = crate::sim::ValueOracle::new(vec![0, 1, 2, 3])?;
    let jc = walks::johnson_chain(4, 2, &f)?;
    Ok(jc.chain().states() == 10 && jc.chain().marked_states().is_empty())
}

fn fit_exact_power() -> Result<bool> {
    let pts: Vec<(f64, f64)> = (1..6).map(|i| (i as f64 * 10.0, 3.0 * (i as f64 * 10.0).powf(0.75))).collect();
    let fit = fit_exponent(&pts)?;
    Ok(close(fit.slope, 0.75, 1e-12))
}

fn determinism() -> Result<bool> {
    let cfg = ExperimentConfig::new(Experiment::GroverScaling, vec![4, 16], 2, 7)?;
    let render = |jobs| -> Result<Vec<u8>> {
        let c = ExperimentConfig { jobs, ..cfg.clone() };
        let mut w = RecordWriter::new(Format::Csv, Vec::new())?;
        run_experiment(&c, |r| {
            let mut r = r.clone();
            r.ms = 0.0;
            w.write(&r)
        })?;
        w.finish()
    };
    let a = render(1)?;
    Ok(a == render(4)? && a.iter().filter(|&&b| b == b'\n').count() == 5)
}

fn find_all_small() -> Result<bool> {
    let mut rng = SeededRng::new(4, 0);
    let planted: BTreeSet<usize> = [3, 17, 40].into_iter().collect();
    let o = BitOracle::from_marked(64, &planted.iter().copied().collect::<Vec<_>>())?;
    Ok(grover::find_all(&o, &mut rng)? == planted)
}

pub const CHECKS: &[Check] = &[
    Check { name: "uniform state", run: uniform_state },
    Check { name: "phase flip involution", run: phase_flip_involution },
    Check { name: "exact grover small cases", run: grover_exact_small },
    Check { name: "unknown-k edge inputs", run: unknown_k_edges },
    Check { name: "find-all small set", run: find_all_small },
    Check { name: "repetition counts", run: repetitions },
    Check { name: "local minimum on linear cubes", run: local_min_linear },
    Check { name: "grid classical scan", run: grid_classical },
    Check { name: "szegedy stationary fixed point", run: szegedy_fixed_point },
    Check { name: "johnson chain counts", run: johnson_counts },
    Check { name: "exponent fit", run: fit_exact_power },
    Check { name: "run determinism", run: determinism },
];

/// Runs every check, printing one line each. Returns the failure count.
pub fn run_selftest(out: &mut impl std::io::Write) -> std::io::Result<usize> {
    let mut failed = 0;
    for c in CHECKS {
        let verdict = match (c.run)() {
            Ok(true) => "PASS".to_string(),
            Ok(false) => "FAIL".to_string(),
            Err(e) => format!("FAIL ({e})"),
        };
        if verdict != "PASS" {
            failed += 1;
        }
        writeln!(out, "{verdict:<6} {}", c.name)?;
    }
    Ok(failed)
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        let mut buf = Vec::new();
        let failed = super::run_selftest(&mut buf).unwrap();
        assert_eq!(failed, 0, "{}", String::from_utf8_lossy(&buf));
    }
}
