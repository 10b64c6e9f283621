use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::fit::{fit_exponent, fit_log_linear, ScalingFit};
use super::record::{trial_seed, ExperimentRecord};
use crate::apps::{self, Cnf3Formula};
use crate::error::{Error, Result};
use crate::grover::{self, GroverParams};
use crate::optimize::{self, HypercubeOracle};
use crate::sim::{BitOracle, QueryOracle, SeededRng, ValueOracle};
use crate::walks::{self, MarkovChain, SzegedyCosts, TorusGrid};

/// Clause-to-variable ratio of planted SAT instances.
pub const SAT_CLAUSE_RATIO: f64 = 10.0;

/// Largest search space for the statevector experiments.
pub const MAX_STATEVECTOR: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Experiment {
    GroverScaling,
    GroverExact,
    UnknownK,
    FindAll,
    MinScaling,
    LocalMin,
    SatSchoening,
    EdHybrid,
    EdWalk,
    GridWalk,
    GridClassical,
    SzegedyCycle,
}

impl Experiment {
    pub const ALL: [Experiment; 12] = [
        Experiment::GroverScaling,
        Experiment::GroverExact,
        Experiment::UnknownK,
        Experiment::FindAll,
        Experiment::MinScaling,
        Experiment::LocalMin,
        Experiment::SatSchoening,
        Experiment::EdHybrid,
        Experiment::EdWalk,
        Experiment::GridWalk,
        Experiment::GridClassical,
        Experiment::SzegedyCycle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::GroverScaling => "grover-scaling",
            Experiment::GroverExact => "grover-exact",
            Experiment::UnknownK => "unknown-k",
            Experiment::FindAll => "find-all",
            Experiment::MinScaling => "min-scaling",
            Experiment::LocalMin => "local-min",
            Experiment::SatSchoening => "sat-schoening",
            Experiment::EdHybrid => "ed-hybrid",
            Experiment::EdWalk => "ed-walk",
            Experiment::GridWalk => "grid-walk",
            Experiment::GridClassical => "grid-classical",
            Experiment::SzegedyCycle => "szegedy-cycle",
        }
    }

    /// What the size column means and the claim the fit is checked against.
    pub fn claim(self) -> &'static str {
        match self {
            Experiment::GroverScaling => "N items, k marked: queries ~ sqrt(N/k)",
            Experiment::GroverExact => "N items, certainty at ceil(pi/(4 asin sqrt(k/N)) - 1/2) queries",
            Experiment::UnknownK => "N items, k unknown: expected queries ~ sqrt(N/k)",
            Experiment::FindAll => "N items, k = sqrt(N) marked: queries ~ sqrt(N k) = N^0.75",
            Experiment::MinScaling => "N values: minimum in O(sqrt(N)) queries",
            Experiment::LocalMin => "n variables: local minimum in O(2^(n/3) n^(1/6)) queries",
            Experiment::SatSchoening => "n variables: amplified reps grow at half the rate of plain reps",
            Experiment::EdHybrid => "N values: sampling plus search in O(N^(3/4)) queries",
            Experiment::EdWalk => "N values: Johnson walk, M = ceil(N^(2/3))",
            Experiment::GridWalk => "side L: walk steps ~ sqrt(N) up to log factors, N = L^d",
            Experiment::GridClassical => "side L: row-by-row scan takes ~ N/2 steps",
            Experiment::SzegedyCycle => "cycle of S states, one marked: steps below 1/sqrt(delta gap)",
        }
    }

    /// Exponent the summary fit is compared with.
    pub fn expected_exponent(self) -> Option<f64> {
        match self {
            Experiment::GroverScaling | Experiment::UnknownK | Experiment::MinScaling => Some(0.5),
            Experiment::GroverExact | Experiment::GridWalk => Some(0.5),
            Experiment::FindAll | Experiment::EdHybrid => Some(0.75),
            Experiment::LocalMin => Some(1.0 / 3.0),
            Experiment::SatSchoening => Some(0.5),
            Experiment::EdWalk => Some(2.0 / 3.0),
            Experiment::GridClassical => Some(1.0),
            Experiment::SzegedyCycle => Some(1.5),
        }
    }

    pub fn default_sizes(self) -> Vec<usize> {
        match self {
            Experiment::GroverScaling | Experiment::GroverExact | Experiment::UnknownK => {
                vec![64, 256, 1024, 4096]
            }
            Experiment::FindAll | Experiment::MinScaling => vec![64, 256, 1024, 4096],
            Experiment::LocalMin => (6..=14).collect(),
            Experiment::SatSchoening => (8..=18).collect(),
            Experiment::EdHybrid => vec![16, 64, 256, 1024],
            Experiment::EdWalk => vec![6, 8, 10, 12],
            Experiment::GridWalk | Experiment::GridClassical => vec![8, 16, 32, 64],
            Experiment::SzegedyCycle => vec![8, 16, 32, 64, 128],
        }
    }

    fn grid_dims(config: &ExperimentConfig) -> Result<usize> {
        Ok(config.param("d")?.unwrap_or(2))
    }

    /// The x coordinate used in the summary fit.
    fn fit_x(self, config: &ExperimentConfig, size: usize) -> f64 {
        match self {
            Experiment::LocalMin => 2f64.powi(size as i32),
            Experiment::GridWalk | Experiment::GridClassical => {
                (size as f64).powi(Self::grid_dims(config).unwrap_or(2) as i32)
            }
            _ => size as f64,
        }
    }

    /// Rejects sizes beyond the module caps.
    pub fn check_size(self, config: &ExperimentConfig, size: usize) -> Result<()> {
        let cap_err = |what: &str, cap: usize| {
            Err(Error::Size {
                what: format!("{} size {size} ({what})", self.name()),
                cap,
            })
        };
        match self {
            Experiment::LocalMin if size == 0 || size > optimize::MAX_CUBE_DIM => {
                cap_err("hypercube dimension", optimize::MAX_CUBE_DIM)
            }
            Experiment::SatSchoening if !(3..=64).contains(&size) => cap_err("variables", 64),
            Experiment::EdWalk => {
                let m = ed_walk_m(config, size)?;
                let states = walks::binomial(size, m) + walks::binomial(size, m + 1);
                if size < 3 || m >= size || states > walks::JOHNSON_CAP as u128 {
                    return cap_err("Johnson chain states", walks::JOHNSON_CAP);
                }
                Ok(())
            }
            Experiment::GridWalk | Experiment::GridClassical => {
                let d = Self::grid_dims(config)?;
                if size < 2 || size.checked_pow(d as u32).map_or(true, |n| n > MAX_STATEVECTOR) {
                    return cap_err("cells", MAX_STATEVECTOR);
                }
                TorusGrid::new(d, size).map(|_| ())
            }
            Experiment::SzegedyCycle if !(3..=walks::JOHNSON_CAP).contains(&size) => {
                cap_err("chain states", walks::JOHNSON_CAP)
            }
            Experiment::EdHybrid if size < 4 || size > MAX_STATEVECTOR => {
                cap_err("values", MAX_STATEVECTOR)
            }
            _ if size == 0 || size > MAX_STATEVECTOR => cap_err("statevector", MAX_STATEVECTOR),
            _ => Ok(()),
        }
    }

    /// Runs one trial.
    pub fn run_trial(
        self,
        config: &ExperimentConfig,
        size: usize,
        rng: &mut SeededRng,
    ) -> Result<TrialOutcome> {
        let n = size;
        match self {
            Experiment::GroverScaling | Experiment::GroverExact | Experiment::UnknownK => {
                let k: usize = config.param("k")?.unwrap_or(1).clamp(1, n);
                let marked = rand::seq::index::sample(rng, n, k).into_vec();
                let o = BitOracle::from_marked(n, &marked)?;
                let hit = match self {
                    Experiment::GroverScaling => {
                        Some(grover::grover_search(&o, &GroverParams::new(n, k)?, rng)?)
                    }
                    Experiment::GroverExact => {
                        Some(grover::grover_search_exact(&o, &GroverParams::new(n, k)?, rng)?)
                    }
                    _ => grover::grover_search_unknown(&o, rng, None)?,
                };
                let q = o.query_count();
                Ok(TrialOutcome::new(q, q, hit.is_some_and(|i| o.peek(i))))
            }
            Experiment::FindAll => {
                let k = config
                    .param("k")?
                    .unwrap_or((n as f64).sqrt().round() as usize)
                    .clamp(1, n);
                let planted: BTreeSet<usize> =
                    rand::seq::index::sample(rng, n, k).into_iter().collect();
                let o = BitOracle::from_marked(n, &planted.iter().copied().collect::<Vec<_>>())?;
                let got = grover::find_all(&o, rng)?;
                let q = o.query_count();
                Ok(TrialOutcome::new(q, q, got == planted))
            }
            Experiment::MinScaling => {
                let mut values: Vec<i64> = (0..n as i64).collect();
                values.shuffle(rng);
                let argmin = values.iter().position(|&v| v == 0).expect("0 present");
                let f = ValueOracle::new(values)?;
                let budget = config.param("budget")?;
                let out = optimize::find_minimum(&f, rng, budget)?;
                Ok(TrialOutcome::new(out.queries, out.queries, out.index == argmin))
            }
            Experiment::LocalMin => {
                let values: Vec<i64> = (0..1usize << n).map(|_| rng.gen_range(0..1 << 30)).collect();
                let f = HypercubeOracle::new(n, values)?;
                match optimize::find_local_minimum(&f, rng) {
                    Ok(out) => {
                        let x = out.assignment;
                        let ok = (0..n).all(|b| f.peek(x ^ (1 << b)) >= f.peek(x));
                        Ok(TrialOutcome::new(out.queries, out.descent_steps as u64, ok))
                    }
                    Err(Error::DescentBudgetExhausted(_)) => {
                        Ok(TrialOutcome::new(f.query_count(), 0, false))
                    }
                    Err(e) => Err(e),
                }
            }
            Experiment::SatSchoening => {
                let ratio = config.param("ratio")?.unwrap_or(SAT_CLAUSE_RATIO);
                let (formula, _) = Cnf3Formula::planted(n, ratio, rng)?;
                let (found, flips) = apps::schoening_run_counted(&formula, rng);
                Ok(TrialOutcome::new(0, flips as u64, found.is_some()))
            }
            Experiment::EdHybrid => {
                let f = ValueOracle::new(planted_collision(n, rng))?;
                let run = apps::ed_base_run(&f, rng)?;
                let ok = run.pair.is_some_and(|(i, j)| i != j && f.peek(i) == f.peek(j));
                Ok(TrialOutcome::new(run.queries, run.queries, ok))
            }
            Experiment::EdWalk => {
                let f = ValueOracle::new(planted_collision(n, rng))?;
                let m = ed_walk_m(config, n)?;
                let out = walks::ed_walk(&f, m, rng, config.param("budget")?)?;
                let ok = out.pair.is_some_and(|(i, j)| i != j && f.peek(i) == f.peek(j));
                Ok(TrialOutcome::new(out.queries, out.walk_steps, ok))
            }
            Experiment::GridWalk | Experiment::GridClassical => {
                let grid = TorusGrid::new(Self::grid_dims(config)?, n)?;
                let target = rng.gen_range(0..grid.cells());
                let o = BitOracle::from_marked(grid.cells(), &[target])?;
                let out = if self == Experiment::GridWalk {
                    let budget = config
                        .param("budget")?
                        .unwrap_or(50 * walks::peak_window(grid) as u64);
                    walks::grid_walk_search(grid, &o, rng, budget)?
                } else {
                    walks::grid_classical_search(grid, &o)?
                };
                Ok(TrialOutcome::new(out.steps, out.steps, out.cell == Some(target)))
            }
            Experiment::SzegedyCycle => {
                let marked = rng.gen_range(0..n);
                let chain = MarkovChain::cycle(n, &[marked])?;
                let budget = config
                    .param("budget")?
                    .unwrap_or(100 * walks::max_window(&chain, chain.delta()));
                let opts = walks::FindOptions::with_budget(budget);
                let out = walks::szegedy_find_marked(&chain, SzegedyCosts::unit(), opts, rng)?;
                Ok(TrialOutcome::new(out.walk_steps, out.walk_steps, out.state == Some(marked)))
            }
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Experiment::ALL.iter().map(|e| e.name()).collect();
                Error::Usage(format!(
                    "unknown experiment {s:?}; valid names: {}",
                    names.join(", ")
                ))
            })
    }
}

fn ed_walk_m(config: &ExperimentConfig, n: usize) -> Result<usize> {
    Ok(config
        .param("m")?
        .unwrap_or_else(|| ((n as f64).powf(2.0 / 3.0) - 1e-9).ceil() as usize))
}

/// Distinct values except for one random pair.
pub fn planted_collision<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<i64> {
    let mut values: Vec<i64> = (0..n as i64).collect();
    values.shuffle(rng);
    let pair = rand::seq::index::sample(rng, n, 2);
    values[pair.index(1)] = values[pair.index(0)];
    values
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub queries: u64,
    pub steps: u64,
    pub success: bool,
}

impl TrialOutcome {
    pub fn new(queries: u64, steps: u64, success: bool) -> Self {
        Self {
            queries,
            steps,
            success,
        }
    }
}

/// Runs every (size, trial) pair, trials of one size in parallel up to
/// `config.jobs`, handing records to `sink` in (size, trial) order.
pub fn run_experiment(
    config: &ExperimentConfig,
    mut sink: impl FnMut(&ExperimentRecord) -> Result<()>,
) -> Result<Vec<ExperimentRecord>> {
    config.validate()?;
    for &size in &config.sizes {
        config.experiment.check_size(config, size)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Usage(e.to_string()))?;
    let mut all = Vec::with_capacity(config.sizes.len() * config.trials);
    for &size in &config.sizes {
        let batch: Vec<ExperimentRecord> = pool.install(|| {
            (0..config.trials)
                .into_par_iter()
                .map(|trial| {
                    let seed = trial_seed(config.seed, size, trial);
                    let mut rng = SeededRng::new(seed, 0);
                    let t0 = Instant::now();
                    let out = config.experiment.run_trial(config, size, &mut rng)?;
                    let ms = (t0.elapsed().as_secs_f64() * 1e6).round() / 1e3;
                    Ok(ExperimentRecord {
                        experiment: config.experiment.name().to_string(),
                        size,
                        trial,
                        seed,
                        queries: out.queries,
                        steps: out.steps,
                        success: out.success,
                        ms,
                    })
                })
                .collect::<Result<_>>()
        })?;
        for r in &batch {
            sink(r)?;
        }
        all.extend(batch);
    }
    Ok(all)
}

/// Per-size aggregates.
#[derive(Clone, Debug, PartialEq)]
pub struct SizeSummary {
    pub size: usize,
    pub mean_cost: f64,
    pub success_rate: f64,
}

/// Fitted scaling next to the claim it targets.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub experiment: Experiment,
    pub claim: &'static str,
    pub expected: Option<f64>,
    pub fit: Option<ScalingFit>,
    pub rows: Vec<SizeSummary>,
    pub note: Option<String>,
}

pub fn summarize(config: &ExperimentConfig, records: &[ExperimentRecord]) -> Summary {
    let exp = config.experiment;
    let rows: Vec<SizeSummary> = config
        .sizes
        .iter()
        .filter_map(|&size| {
            let rs: Vec<&ExperimentRecord> = records.iter().filter(|r| r.size == size).collect();
            if rs.is_empty() {
                return None;
            }
            let cost = |r: &ExperimentRecord| match exp {
                Experiment::SatSchoening => r.steps as f64,
                _ => r.queries as f64,
            };
            let n = rs.len() as f64;
            Some(SizeSummary {
                size,
                mean_cost: rs.iter().map(|r| cost(r)).sum::<f64>() / n,
                success_rate: rs.iter().filter(|r| r.success).count() as f64 / n,
            })
        })
        .collect();
    let (fit, note) = match exp {
        Experiment::SatSchoening => sat_summary(&rows),
        Experiment::EdHybrid => ed_summary(&rows),
        _ => {
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .map(|r| (exp.fit_x(config, r.size), r.mean_cost))
                .collect();
            (fit_exponent(&pts).ok(), None)
        }
    };
    Summary {
        experiment: exp,
        claim: exp.claim(),
        expected: exp.expected_exponent(),
        fit,
        rows,
        note,
    }
}

/// Log-linear fits of the amplified cost and of `1/eps` at the measured
/// rates; the reported slope is their ratio.
fn sat_summary(rows: &[SizeSummary]) -> (Option<ScalingFit>, Option<String>) {
    let usable: Vec<&SizeSummary> = rows.iter().filter(|r| r.success_rate > 0.0).collect();
    let q: Vec<(f64, f64)> = usable
        .iter()
        .map(|r| (r.size as f64, apps::amplified_cost(r.success_rate)))
        .collect();
    let c: Vec<(f64, f64)> = usable
        .iter()
        .map(|r| (r.size as f64, 1.0 / r.success_rate))
        .collect();
    match (fit_log_linear(&q), fit_log_linear(&c)) {
        (Ok(fq), Ok(fc)) => {
            let note = format!(
                "amplified rate {:.4}/var, plain rate {:.4}/var; {}",
                fq.slope,
                fc.slope,
                apps::UNIFORM_INIT_NOTE
            );
            (Some(ScalingFit { slope: fq.slope / fc.slope, ..fq }), Some(note))
        }
        _ => (None, Some("too few sizes with successes to fit".into())),
    }
}

/// Fit of the modeled total queries at the measured base rates.
fn ed_summary(rows: &[SizeSummary]) -> (Option<ScalingFit>, Option<String>) {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.success_rate > 0.0)
        .filter_map(|r| {
            apps::ed_hybrid_query_model(r.size, r.success_rate)
                .ok()
                .map(|q| (r.size as f64, q))
        })
        .collect();
    let band: Vec<String> = rows
        .iter()
        .map(|r| format!("{:.2}", r.success_rate * (r.size as f64).sqrt()))
        .collect();
    (
        fit_exponent(&pts).ok(),
        Some(format!("base rate times sqrt(N): {}", band.join(" "))),
    )
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}: {}", self.experiment, self.claim)?;
        for r in &self.rows {
            writeln!(
                f,
                "#   size {:>6}  mean cost {:>12.2}  success {:.3}",
                r.size, r.mean_cost, r.success_rate
            )?;
        }
        match (&self.fit, self.expected) {
            (Some(fit), Some(e)) => writeln!(
                f,
                "#   fitted {:.3} (rms {:.3}) vs expected {:.3}",
                fit.slope, fit.rms, e
            )?,
            (Some(fit), None) => writeln!(f, "#   fitted {:.3}", fit.slope)?,
            (None, _) => writeln!(f, "#   no fit (need 3 usable sizes)")?,
        }
        if let Some(n) = &self.note {
            writeln!(f, "#   {n}")?;
        }
        Ok(())
    }
}
