use rand::Rng;

use crate::amplify::{amplified_success, predicted_repetitions};
use crate::error::{Error, Result};
use crate::grover::{search_unknown, unknown_k_cap, UnknownK};
use crate::sim::{PredicateOracle, ValueOracle};

/// Number of indices sampled by a base run, `ceil(sqrt(N))`.
pub fn sample_size(n: usize) -> usize {
    let r = (n as f64).sqrt().ceil() as usize;
    // Guard against sqrt rounding just above a perfect square.
    if (r - 1) * (r - 1) >= n {
        r - 1
    } else {
        r
    }
}

/// Most queries one base run can spend: the sample plus the unknown-k
/// schedule cap over the remaining indices.
pub fn base_cost_bound(n: usize) -> u64 {
    let s = sample_size(n);
    s as u64 + unknown_k_cap(n - s, 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BaseRun {
    pub pair: Option<(usize, usize)>,
    pub queries: u64,
}

/// One base run: query `ceil(sqrt(N))` distinct random indices, return any
/// collision among them, otherwise search the other indices for a value
/// that appears in the sample. Membership in the sample is decided from the
/// sorted sampled values, so it costs nothing beyond the search's own
/// queries.
pub fn ed_base_run<R: Rng + ?Sized>(f: &ValueOracle, rng: &mut R) -> Result<BaseRun> {
    let n = f.len();
    if n < 2 {
        return Err(Error::param("element distinctness needs N >= 2"));
    }
    let start = f.counter().count();
    let s = sample_size(n);
    let picked = rand::seq::index::sample(rng, n, s).into_vec();
    let mut seen: Vec<(i64, usize)> = picked.iter().map(|&i| (f.query(i), i)).collect();
    seen.sort_unstable();
    if let Some(w) = seen.windows(2).find(|w| w[0].0 == w[1].0) {
        return Ok(BaseRun {
            pair: Some(ordered(w[0].1, w[1].1)),
            queries: f.counter().count() - start,
        });
    }
    let mut in_sample = vec![false; n];
    picked.iter().for_each(|&i| in_sample[i] = true);
    let rest: Vec<usize> = (0..n).filter(|&i| !in_sample[i]).collect();
    let lookup = |v: i64| seen.binary_search_by_key(&v, |&(x, _)| x).ok();
    let pred = PredicateOracle::new(rest.len(), f.counter(), |j| lookup(f.peek(rest[j])).is_some());
    let report = search_unknown(&pred, UnknownK::default(), rng)?;
    let pair = report.found.map(|j| {
        let partner = seen[lookup(f.peek(rest[j])).expect("search checked membership")].1;
        ordered(partner, rest[j])
    });
    Ok(BaseRun {
        pair,
        queries: f.counter().count() - start,
    })
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Fraction of successful base runs over `trials` runs on an uncharged
/// copy of `f`.
pub fn estimate_base_rate<R: Rng + ?Sized>(f: &ValueOracle, trials: u64, rng: &mut R) -> Result<f64> {
    let shadow = f.shadow();
    let mut hits = 0;
    for _ in 0..trials {
        hits += ed_base_run(&shadow, rng)?.pair.is_some() as u64;
    }
    Ok(hits as f64 / trials.max(1) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HybridOutcome {
    pub pair: Option<(usize, usize)>,
    pub repetitions: usize,
    pub queries: u64,
}

/// Cap on base runs used to draw the returned pair, in units of `1/eps`.
const PAIR_DRAW_FACTOR: f64 = 50.0;

/// Amplified hybrid algorithm, with the base run's success rate `eps_hat`
/// measured beforehand.
///
/// Embedding the base run's classical randomness into one unitary is out of
/// reach, so the amplified run is simulated on its two-outcome reduction:
/// after `r = predicted_repetitions(eps_hat)` rounds it succeeds with
/// probability `sin^2((2r + 1) asin(sqrt(eps_hat)))`. On success, the pair
/// reported is the one produced by base runs repeated on an uncharged copy
/// of `f` until one succeeds, so it is always a genuine collision and an
/// injective `f` can never yield one. The real oracle is charged
/// `(2r + 1)` base runs at their cost bound.
pub fn element_distinctness_hybrid<R: Rng + ?Sized>(
    f: &ValueOracle,
    eps_hat: f64,
    rng: &mut R,
) -> Result<HybridOutcome> {
    let r = predicted_repetitions(eps_hat)?;
    let n = f.len();
    f.counter().charge((2 * r as u64 + 1) * base_cost_bound(n));
    let queries = (2 * r as u64 + 1) * base_cost_bound(n);
    let mut pair = None;
    if rng.gen::<f64>() < amplified_success(eps_hat, r) {
        let shadow = f.shadow();
        let cap = (PAIR_DRAW_FACTOR / eps_hat).ceil() as u64;
        for _ in 0..cap {
            if let Some(p) = ed_base_run(&shadow, rng)?.pair {
                pair = Some(p);
                break;
            }
        }
    }
    Ok(HybridOutcome {
        pair,
        repetitions: r,
        queries,
    })
}

/// Predicted total queries, `(2r + 1) (sqrt(N) + ceil(4.5 sqrt(N - sqrt(N))))`
/// with `r = predicted_repetitions(eps_hat)`.
pub fn ed_hybrid_query_model(n: usize, eps_hat: f64) -> Result<f64> {
    let r = predicted_repetitions(eps_hat)?;
    Ok((2 * r + 1) as f64 * base_cost_bound(n) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{QueryOracle, SeededRng};

    #[test]
    fn sample_sizes() {
        assert_eq!(sample_size(16), 4);
        assert_eq!(sample_size(17), 5);
        assert_eq!(sample_size(1024), 32);
    }

    #[test]
    fn constant_function_collides_in_sample() {
        let f = ValueOracle::new(vec![3; 4]).unwrap();
        let mut rng = SeededRng::new(0, 0);
        let run = ed_base_run(&f, &mut rng).unwrap();
        assert!(run.pair.is_some());
        assert_eq!(run.queries, 2);
        let out = element_distinctness_hybrid(&f, 1.0, &mut rng).unwrap();
        assert_eq!(out.repetitions, 0);
        assert!(out.pair.is_some());
    }

    #[test]
    fn injective_function_has_no_pair() {
        let f = ValueOracle::new((0..16).collect()).unwrap();
        let mut rng = SeededRng::new(1, 0);
        for _ in 0..50 {
            assert!(ed_base_run(&f, &mut rng).unwrap().pair.is_none());
        }
        let out = element_distinctness_hybrid(&f, 0.25, &mut rng).unwrap();
        assert!(out.pair.is_none());
    }

    #[test]
    fn base_run_cost_is_sample_plus_search() {
        let mut rng = SeededRng::new(2, 0);
        let mut values: Vec<i64> = (0..64).collect();
        values[40] = 7;
        let f = ValueOracle::new(values).unwrap();
        for _ in 0..100 {
            let before = f.query_count();
            let run = ed_base_run(&f, &mut rng).unwrap();
            assert_eq!(f.query_count() - before, run.queries);
            assert!(run.queries >= 8 && run.queries <= base_cost_bound(64));
            if let Some((i, j)) = run.pair {
                assert_eq!((i, j), (7, 40));
            }
        }
    }

    #[test]
    fn query_model_at_full_rate() {
        assert_eq!(ed_hybrid_query_model(16, 1.0).unwrap(), (4 + 16) as f64);
        assert!(ed_hybrid_query_model(16, 0.0).is_err());
    }
}
