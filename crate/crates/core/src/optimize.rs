//! Global minimum finding over a value oracle and local-minimum search on
//! the Boolean hypercube.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::grover::{search_unknown, UnknownK};
use crate::sim::{PredicateOracle, QueryCounter, QueryOracle, ValueOracle};

/// Default query budget of [`find_minimum`], in units of `sqrt(N)`.
pub const MIN_BUDGET_FACTOR: f64 = 30.0;

/// Largest hypercube dimension accepted by [`find_local_minimum`].
pub const MAX_CUBE_DIM: usize = 16;

/// Champion returned by a minimum search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinOutcome {
    pub index: usize,
    pub value: i64,
    /// False when the budget ran out before a search for something smaller
    /// came back empty.
    pub verified: bool,
    pub queries: u64,
}

pub fn default_min_budget(n: usize) -> u64 {
    (MIN_BUDGET_FACTOR * (n as f64).sqrt()).ceil() as u64
}

/// Minimum search over `0..n` where `value` is an uncharged read and every
/// query is charged to `counter`.
///
/// Starts from a random champion, then repeatedly searches (unknown k) for
/// an index with a strictly smaller value. An empty search verifies the
/// champion.
pub fn minimize<R: Rng + ?Sized>(
    n: usize,
    value: &dyn Fn(usize) -> i64,
    counter: &QueryCounter,
    budget: u64,
    rng: &mut R,
) -> Result<MinOutcome> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if budget == 0 {
        return Err(Error::param("minimum search needs a budget of at least 1"));
    }
    let start = counter.count();
    let mut x = rng.gen_range(0..n);
    counter.charge(1);
    let mut fx = value(x);
    loop {
        let spent = counter.count() - start;
        if spent >= budget {
            return Ok(MinOutcome {
                index: x,
                value: fx,
                verified: false,
                queries: spent,
            });
        }
        let bar = fx;
        let below = PredicateOracle::new(n, counter, move |y| value(y) < bar);
        let opts = UnknownK {
            k_floor: None,
            budget: Some(budget - spent),
        };
        let report = search_unknown(&below, opts, rng)?;
        match report.found {
            // The checking query inside the search already revealed f(y).
            Some(y) => {
                x = y;
                fx = value(y);
            }
            None => {
                return Ok(MinOutcome {
                    index: x,
                    value: fx,
                    verified: !report.budget_hit,
                    queries: counter.count() - start,
                })
            }
        }
    }
}

/// Minimum of a value oracle. `budget` defaults to `ceil(30 sqrt(N))`.
pub fn find_minimum<R: Rng + ?Sized>(
    oracle: &ValueOracle,
    rng: &mut R,
    budget: Option<u64>,
) -> Result<MinOutcome> {
    let n = oracle.len();
    let budget = budget.unwrap_or_else(|| default_min_budget(n));
    minimize(n, &|i| oracle.peek(i), oracle.counter(), budget, rng)
}

/// Black box for `f: {0,1}^n -> Z`, assignments packed into the low `n`
/// bits of an index.
pub struct HypercubeOracle {
    n: usize,
    values: Vec<i64>,
    counter: QueryCounter,
}

impl HypercubeOracle {
    pub fn new(n: usize, values: Vec<i64>) -> Result<Self> {
        if n == 0 || n > 30 {
            return Err(Error::param(format!("hypercube dimension {n} out of range")));
        }
        if values.len() != 1 << n {
            return Err(Error::param(format!(
                "expected {} values for n={n}, got {}",
                1usize << n,
                values.len()
            )));
        }
        Ok(Self {
            n,
            values,
            counter: QueryCounter::new(),
        })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> i64) -> Result<Self> {
        if n == 0 || n > 30 {
            return Err(Error::param(format!("hypercube dimension {n} out of range")));
        }
        Self::new(n, (0..1usize << n).map(f).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn query(&self, x: usize) -> i64 {
        self.counter.charge(1);
        self.values[x]
    }

    pub fn peek(&self, x: usize) -> i64 {
        self.values[x]
    }

    pub fn counter(&self) -> &QueryCounter {
        &self.counter
    }

    pub fn neighbor(&self, x: usize, bit: usize) -> usize {
        x ^ (1 << bit)
    }
}

impl QueryOracle for HypercubeOracle {
    fn query_count(&self) -> u64 {
        self.counter.count()
    }
}

impl fmt::Debug for HypercubeOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HypercubeOracle")
            .field("n", &self.n)
            .field("queries", &self.counter.count())
            .finish()
    }
}

/// Sample size and descent budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalMinParams {
    pub m: usize,
    pub descent_budget: usize,
}

impl LocalMinParams {
    /// `m = round(2^{2n/3} n^{1/3})`, budget `ceil(2^{n+1} / m)`.
    pub fn for_dimension(n: usize) -> Self {
        let size = (1usize << n) as f64;
        let m = (size.powf(2.0 / 3.0) * (n as f64).cbrt()).round();
        let m = (m as usize).clamp(1, 1 << n);
        Self::with_sample(n, m)
    }

    pub fn with_sample(n: usize, m: usize) -> Self {
        let m = m.clamp(1, 1 << n);
        let descent_budget = ((2usize << n) as f64 / m as f64).ceil() as usize;
        Self { m, descent_budget }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalMinOutcome {
    pub assignment: usize,
    pub value: i64,
    pub descent_steps: usize,
    pub queries: u64,
}

/// Draws `m` distinct assignments.
pub fn sample_assignments<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Vec<usize> {
    rand::seq::index::sample(rng, 1 << n, m.min(1 << n)).into_vec()
}

/// Local minimum on the hypercube with the default parameters.
pub fn find_local_minimum<R: Rng + ?Sized>(
    oracle: &HypercubeOracle,
    rng: &mut R,
) -> Result<LocalMinOutcome> {
    find_local_minimum_with(oracle, LocalMinParams::for_dimension(oracle.n), rng)
}

/// Samples `m` assignments, takes their minimum by quantum minimum
/// finding, then descends. Each descent step searches the `n` single-bit
/// neighbours for a strictly better one; when that search is empty the
/// neighbours are scanned classically, so a returned assignment is always a
/// verified local minimum.
pub fn find_local_minimum_with<R: Rng + ?Sized>(
    oracle: &HypercubeOracle,
    params: LocalMinParams,
    rng: &mut R,
) -> Result<LocalMinOutcome> {
    let n = oracle.n;
    if n > MAX_CUBE_DIM {
        return Err(Error::Size {
            what: format!("hypercube dimension {n}"),
            cap: MAX_CUBE_DIM,
        });
    }
    let start = oracle.counter.count();
    let sample = sample_assignments(n, params.m, rng);
    let champ = minimize(
        sample.len(),
        &|i| oracle.peek(sample[i]),
        &oracle.counter,
        default_min_budget(sample.len()),
        rng,
    )?;
    let mut x = sample[champ.index];
    let mut fx = champ.value;

    for step in 0..params.descent_budget {
        let (current, bar) = (x, fx);
        let better = PredicateOracle::new(n, &oracle.counter, move |b| {
            oracle.peek(current ^ (1 << b)) < bar
        });
        let next = match search_unknown(&better, UnknownK::default(), rng)?.found {
            Some(b) => Some(current ^ (1 << b)),
            None => (0..n)
                .map(|b| current ^ (1 << b))
                .find(|&y| oracle.query(y) < fx),
        };
        match next {
            Some(y) => {
                x = y;
                fx = oracle.peek(y);
            }
            None => {
                return Ok(LocalMinOutcome {
                    assignment: x,
                    value: fx,
                    descent_steps: step,
                    queries: oracle.counter.count() - start,
                })
            }
        }
    }
    Err(Error::DescentBudgetExhausted(params.descent_budget))
}

/// True iff no single-bit flip lowers `f`. Charges `n + 1` queries.
pub fn verify_local_min(oracle: &HypercubeOracle, assignment: usize) -> bool {
    let fx = oracle.query(assignment);
    let mut ok = true;
    for b in 0..oracle.n {
        ok &= oracle.query(assignment ^ (1 << b)) >= fx;
    }
    ok
}

/// Plain steepest-free classical descent from a random start: query all
/// neighbours, move to the first better one. Baseline for comparisons.
pub fn classical_local_descent<R: Rng + ?Sized>(
    oracle: &HypercubeOracle,
    rng: &mut R,
) -> LocalMinOutcome {
    let start = oracle.counter.count();
    let mut x = rng.gen_range(0..oracle.size());
    let mut fx = oracle.query(x);
    let mut steps = 0;
    loop {
        let next = (0..oracle.n)
            .map(|b| x ^ (1 << b))
            .find(|&y| oracle.query(y) < fx);
        match next {
            Some(y) => {
                x = y;
                fx = oracle.peek(y);
                steps += 1;
            }
            None => {
                return LocalMinOutcome {
                    assignment: x,
                    value: fx,
                    descent_steps: steps,
                    queries: oracle.counter.count() - start,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::SeededRng;

    fn popcount_cube(n: usize, sign: i64) -> HypercubeOracle {
        HypercubeOracle::from_fn(n, |x| sign * x.count_ones() as i64).unwrap()
    }

    #[test]
    fn constant_function_returns_start() {
        let f = ValueOracle::new(vec![7; 32]).unwrap();
        let mut rng = SeededRng::new(1, 0);
        let out = find_minimum(&f, &mut rng, None).unwrap();
        assert_eq!(out.value, 7);
        assert!(out.verified);
    }

    #[test]
    fn identity_function_finds_zero() {
        let mut hits = 0;
        for seed in 0..1000 {
            let f = ValueOracle::new((0..8).collect()).unwrap();
            let mut rng = SeededRng::new(seed, 0);
            let out = find_minimum(&f, &mut rng, None).unwrap();
            hits += (out.index == 0) as u32;
            assert!(out.queries <= default_min_budget(8));
        }
        assert!(hits >= 900, "{hits}");
    }

    #[test]
    fn champion_never_worsens_under_tiny_budget() {
        let f = ValueOracle::new((0..256).rev().collect()).unwrap();
        let mut rng = SeededRng::new(2, 0);
        let out = find_minimum(&f, &mut rng, Some(3)).unwrap();
        assert!(out.queries <= 3);
        assert!(!out.verified || out.index == 255);
    }

    #[test]
    fn local_min_of_popcount() {
        let mut rng = SeededRng::new(4, 0);
        let up = popcount_cube(4, 1);
        assert_eq!(find_local_minimum(&up, &mut rng).unwrap().assignment, 0);
        let down = popcount_cube(4, -1);
        assert_eq!(find_local_minimum(&down, &mut rng).unwrap().assignment, 0b1111);
    }

    #[test]
    fn verify_cases_and_cost() {
        let f = popcount_cube(5, 1);
        assert!(verify_local_min(&f, 0));
        assert_eq!(f.query_count(), 6);
        assert!(!verify_local_min(&f, 0b11111));
    }

    #[test]
    fn verify_agrees_with_enumeration() {
        let mut rng = SeededRng::new(9, 0);
        let n = 6;
        let values: Vec<i64> = (0..1 << n).map(|_| rng.gen_range(0..20)).collect();
        let f = HypercubeOracle::new(n, values.clone()).unwrap();
        for x in 0..1usize << n {
            let brute = (0..n).all(|b| values[x ^ (1 << b)] >= values[x]);
            assert_eq!(verify_local_min(&f, x), brute);
        }
    }

    #[test]
    fn params_follow_formula() {
        let p = LocalMinParams::for_dimension(10);
        assert_eq!(p.m, 219);
        assert_eq!(p.descent_budget, 10);
        assert_eq!(LocalMinParams::for_dimension(1).m, 2);
    }

    #[test]
    fn classical_descent_ends_at_local_min() {
        let mut rng = SeededRng::new(3, 0);
        let values: Vec<i64> = (0..256).map(|_| rng.gen_range(-50..50)).collect();
        let f = HypercubeOracle::new(8, values).unwrap();
        let out = classical_local_descent(&f, &mut rng);
        assert!(verify_local_min(&f, out.assignment));
    }
}
