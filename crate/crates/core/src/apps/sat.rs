use rand::Rng;

use super::cnf::Cnf3Formula;
use crate::amplify::{classical_repetitions, predicted_repetitions};

/// Incremental bookkeeping for the repair walk: satisfied-literal counts
/// per clause and a bitset of unsatisfied clauses.
struct WalkState<'f> {
    formula: &'f Cnf3Formula,
    occurs: Vec<Vec<usize>>,
    true_count: Vec<u8>,
    unsat: Vec<u64>,
}

impl<'f> WalkState<'f> {
    fn new(formula: &'f Cnf3Formula) -> Self {
        let mut occurs = vec![Vec::new(); formula.vars()];
        for (i, c) in formula.clauses().iter().enumerate() {
            for &l in c {
                occurs[l.unsigned_abs() as usize - 1].push(i);
            }
        }
        let m = formula.clauses().len();
        Self {
            formula,
            occurs,
            true_count: vec![0; m],
            unsat: vec![0; m.div_ceil(64)],
        }
    }

    fn reset(&mut self, assignment: &[bool]) {
        self.unsat.iter_mut().for_each(|w| *w = 0);
        for (i, c) in self.formula.clauses().iter().enumerate() {
            let t = c.iter().filter(|&&l| Cnf3Formula::literal_true(l, assignment)).count() as u8;
            self.true_count[i] = t;
            if t == 0 {
                self.unsat[i / 64] |= 1 << (i % 64);
            }
        }
    }

    fn first_unsat(&self) -> Option<usize> {
        self.unsat
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn flip(&mut self, var: usize, assignment: &mut [bool]) {
        assignment[var] = !assignment[var];
        for &ci in &self.occurs[var] {
            let clause = &self.formula.clauses()[ci];
            // A clause may mention the variable more than once.
            for &l in clause.iter().filter(|l| l.unsigned_abs() as usize - 1 == var) {
                if Cnf3Formula::literal_true(l, assignment) {
                    self.true_count[ci] += 1;
                } else {
                    self.true_count[ci] -= 1;
                }
            }
            if self.true_count[ci] == 0 {
                self.unsat[ci / 64] |= 1 << (ci % 64);
            } else {
                self.unsat[ci / 64] &= !(1 << (ci % 64));
            }
        }
    }
}

fn run_with<R: Rng + ?Sized>(state: &mut WalkState<'_>, rng: &mut R) -> (Option<Vec<bool>>, usize) {
    let n = state.formula.vars();
    let mut x: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    state.reset(&x);
    for flips in 0..3 * n {
        let Some(ci) = state.first_unsat() else {
            return (Some(x), flips);
        };
        let clause = &state.formula.clauses()[ci];
        let lit = clause[rng.gen_range(0..clause.len())];
        state.flip(lit.unsigned_abs() as usize - 1, &mut x);
    }
    let ok = state.first_unsat().is_none();
    (ok.then_some(x), 3 * n)
}

/// One run of Schöning's walk: uniform random start, then up to `3n`
/// repairs, each flipping a random variable of the first unsatisfied
/// clause. Returns the assignment only if it satisfies the formula.
pub fn schoening_run<R: Rng + ?Sized>(formula: &Cnf3Formula, rng: &mut R) -> Option<Vec<bool>> {
    run_with(&mut WalkState::new(formula), rng).0
}

/// Like [`schoening_run`], also reporting how many flips were made.
pub fn schoening_run_counted<R: Rng + ?Sized>(
    formula: &Cnf3Formula,
    rng: &mut R,
) -> (Option<Vec<bool>>, usize) {
    run_with(&mut WalkState::new(formula), rng)
}

/// Wilson score interval for `successes / trials` at z = 1.96.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.96_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Single-run success estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct SatRunStats {
    pub trials: u64,
    pub successes: u64,
    pub eps_hat: f64,
    /// 95% Wilson interval around `eps_hat`.
    pub interval: (f64, f64),
    pub predicted_quantum_reps: Option<usize>,
    pub classical_reps: Option<usize>,
}

/// Runs the walk `trials` times. Repetition counts are filled in from the
/// interval's lower end when that is positive.
pub fn estimate_success<R: Rng + ?Sized>(
    formula: &Cnf3Formula,
    trials: u64,
    rng: &mut R,
) -> SatRunStats {
    let mut state = WalkState::new(formula);
    let successes = (0..trials)
        .filter(|_| run_with(&mut state, rng).0.is_some())
        .count() as u64;
    stats_from_counts(successes, trials)
}

pub fn stats_from_counts(successes: u64, trials: u64) -> SatRunStats {
    let interval = wilson_interval(successes, trials);
    let eps_hat = if trials == 0 {
        0.0
    } else {
        successes as f64 / trials as f64
    };
    let lo = interval.0;
    let (q, c) = if successes > 0 && lo > 0.0 {
        (predicted_repetitions(lo).ok(), classical_repetitions(lo).ok())
    } else {
        (None, None)
    };
    SatRunStats {
        trials,
        successes,
        eps_hat,
        interval,
        predicted_quantum_reps: q,
        classical_reps: c,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpeedupReport {
    /// The rate the counts are computed from (the interval's lower end).
    pub eps: f64,
    pub quantum_reps: usize,
    pub classical_reps: usize,
    /// Set when the interval reaches zero, so no rate can be certified.
    pub inconclusive: bool,
    /// The walk starts from a uniform assignment, not the improved
    /// distribution of later analyses.
    pub note: &'static str,
}

pub const UNIFORM_INIT_NOTE: &str = "uniform initial assignment; base rate compared against (3/4)^n";

/// Expected oracle calls of the amplified search, `pi / (2 asin(sqrt(eps)))`,
/// before rounding to whole rounds.
pub fn amplified_cost(eps: f64) -> f64 {
    std::f64::consts::FRAC_PI_2 / eps.clamp(0.0, 1.0).sqrt().asin()
}

/// Amplified versus plain repetition counts for the measured rate.
pub fn quantum_speedup_report(stats: &SatRunStats) -> SpeedupReport {
    let lo = if stats.successes == stats.trials && stats.trials > 0 {
        1.0
    } else {
        stats.interval.0
    };
    if stats.successes == 0 || lo <= 0.0 {
        return SpeedupReport {
            eps: 0.0,
            quantum_reps: 0,
            classical_reps: 0,
            inconclusive: true,
            note: UNIFORM_INIT_NOTE,
        };
    }
    SpeedupReport {
        eps: lo,
        quantum_reps: predicted_repetitions(lo).expect("lo in (0, 1]"),
        classical_reps: classical_repetitions(lo).expect("lo in (0, 1]"),
        inconclusive: false,
        note: UNIFORM_INIT_NOTE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::SeededRng;

    #[test]
    fn unit_clause_succeeds_always() {
        // One variable gets 3 repairs, enough to fix a wrong start.
        let f = Cnf3Formula::new(1, vec![vec![1]]).unwrap();
        let mut rng = SeededRng::new(0, 0);
        for _ in 0..200 {
            assert_eq!(schoening_run(&f, &mut rng), Some(vec![true]));
        }
    }

    #[test]
    fn unsatisfiable_never_returns() {
        let f = Cnf3Formula::new(1, vec![vec![1], vec![-1]]).unwrap();
        let mut rng = SeededRng::new(0, 0);
        let stats = estimate_success(&f, 1000, &mut rng);
        assert_eq!(stats.successes, 0);
        assert!(stats.interval.1 > 0.0);
        assert!(quantum_speedup_report(&stats).inconclusive);
    }

    #[test]
    fn tautology_like_formula() {
        let f = Cnf3Formula::new(3, vec![vec![1, -1], vec![2, -2, 3]]).unwrap();
        let mut rng = SeededRng::new(0, 0);
        let stats = estimate_success(&f, 500, &mut rng);
        assert_eq!(stats.eps_hat, 1.0);
        let r = quantum_speedup_report(&stats);
        assert_eq!((r.quantum_reps, r.classical_reps), (0, 1));
    }

    #[test]
    fn incremental_state_matches_direct_check() {
        let mut rng = SeededRng::new(5, 0);
        let (f, _) = Cnf3Formula::planted(12, 4.0, &mut rng).unwrap();
        for _ in 0..300 {
            if let Some(x) = schoening_run(&f, &mut rng) {
                assert!(f.satisfied_by(&x));
            }
        }
    }

    #[test]
    fn wilson_brackets_the_estimate() {
        let (lo, hi) = wilson_interval(30, 1000);
        assert!(lo < 0.03 && 0.03 < hi);
        assert!((lo - 0.0211).abs() < 1e-3 && (hi - 0.0425).abs() < 1e-3);
        assert_eq!(wilson_interval(0, 10).0, 0.0);
    }
}
