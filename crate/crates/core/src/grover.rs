//! Grover search: known k, the tuned certainty variant, unknown k, and
//! find-all.
//!
//! Every search here works on a [`PredicateOracle`], so composite predicates
//! (thresholds, restricted domains, "marked and not yet found") reuse the
//! same code. The [`BitOracle`] entry points are thin conveniences.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::sim::{BitOracle, PredicateOracle, StateVector};

/// Slack used when taking ceilings of expressions that land on integers in
/// exact arithmetic (N=4, k=1 evaluates to 0.9999999999999998 + 1/2).
const CEIL_SLACK: f64 = 1e-9;

/// Growth factor of the unknown-k iteration window.
pub const UNKNOWN_K_GROWTH: f64 = 6.0 / 5.0;

/// Query cap of the unknown-k schedule in units of `sqrt(N / k_floor)`.
pub const UNKNOWN_K_CAP: f64 = 4.5;

pub(crate) fn ceil_tol(x: f64) -> usize {
    (x - CEIL_SLACK).ceil().max(0.0) as usize
}

/// Iterations that maximize the success probability of a rotation by angle
/// `asin(sqrt(p))` per step.
pub(crate) fn rotation_count(p: f64) -> usize {
    let theta = p.sqrt().asin();
    ceil_tol(PI / (4.0 * theta) - 0.5)
}

/// Search-space size, marked count (if known) and iteration count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroverParams {
    pub n: usize,
    pub k: Option<usize>,
    pub t: usize,
}

impl GroverParams {
    /// Known `k`, with `t` set to [`optimal_query_count`].
    pub fn new(n: usize, k: usize) -> Result<Self> {
        let t = optimal_query_count(n, k)?;
        Ok(Self { n, k: Some(k), t })
    }

    pub fn with_iterations(n: usize, k: usize, t: usize) -> Result<Self> {
        check_nk(n, k)?;
        Ok(Self { n, k: Some(k), t })
    }

    pub fn unknown(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self { n, k: None, t: 0 })
    }
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::param(format!("need 1 <= k <= N, got N={n}, k={k}")));
    }
    Ok(())
}

/// `ceil(pi / (4 asin(sqrt(k/N))) - 1/2)`.
pub fn optimal_query_count(n: usize, k: usize) -> Result<usize> {
    check_nk(n, k)?;
    Ok(rotation_count(k as f64 / n as f64))
}

/// `sin^2((2t+1) asin(sqrt(k/N)))`.
pub fn success_prob_analytic(n: usize, k: usize, t: usize) -> Result<f64> {
    check_nk(n, k)?;
    let theta = (k as f64 / n as f64).sqrt().asin();
    Ok(((2 * t + 1) as f64 * theta).sin().powi(2))
}

/// One phase flip (one query) followed by the diffusion.
pub fn grover_iteration(state: &mut StateVector, oracle: &PredicateOracle<'_>) -> Result<()> {
    oracle.phase_flip(state)?;
    state.apply_diffusion();
    Ok(())
}

/// Uniform state after `t` Grover iterations against a fixed marked set.
/// Charges `t` queries to `oracle`.
pub fn evolve(oracle: &PredicateOracle<'_>, marked: &[usize], t: usize) -> Result<StateVector> {
    let mut s = StateVector::uniform(oracle.dim())?;
    for _ in 0..t {
        s.apply_phase_flip(marked, oracle.counter())?;
        s.apply_diffusion();
    }
    s.settle();
    Ok(s)
}

/// Runs `params.t` iterations and measures. The result is marked with
/// probability [`success_prob_analytic`]; callers that need certainty check
/// it classically.
pub fn grover_search<R: Rng + ?Sized>(
    oracle: &BitOracle,
    params: &GroverParams,
    rng: &mut R,
) -> Result<usize> {
    search_with(&oracle.predicate(), params, rng)
}

pub fn search_with<R: Rng + ?Sized>(
    oracle: &PredicateOracle<'_>,
    params: &GroverParams,
    rng: &mut R,
) -> Result<usize> {
    if params.n != oracle.dim() {
        return Err(Error::param("params.n does not match the oracle"));
    }
    let marked = oracle.marked_indices();
    evolve(oracle, &marked, params.t)?.measure(rng)
}

/// Phases `(phi, psi)` for the final generalized iteration of the certainty
/// variant, or `None` when no iterations are needed.
///
/// After `t - 1` ordinary iterations the state is `sin(a)|w> + cos(a)|r>`
/// with `a = (2t-1) theta`, where `|w>` and `|r>` are the normalized marked
/// and unmarked uniform states. Multiplying the marked part by `e^{i phi}`
/// and then the uniform component by `e^{i psi}` kills the `|r>` component
/// exactly when `|1 - z(phi)| = 1` for
/// `z = cos(a) / (cos(theta) <u|v>)`, and then `1 - e^{i psi} = z`.
pub fn exact_phases(n: usize, k: usize) -> Result<Option<(f64, f64)>> {
    let t = optimal_query_count(n, k)?;
    if t == 0 {
        return Ok(None);
    }
    let theta = (k as f64 / n as f64).sqrt().asin();
    let a = (2 * t - 1) as f64 * theta;
    let z = |phi: f64| {
        let uv = num_complex::Complex64::from_polar(a.sin() * theta.sin(), phi)
            + a.cos() * theta.cos();
        a.cos() / (theta.cos() * uv)
    };
    // |1 - z| = 1 is equivalent to Re(1/z) = 1/2, which solves in closed
    // form: cos(phi) = -cos(a) cos(2 theta) / (sin(a) sin(2 theta)).
    let c = -(a.cos() * (2.0 * theta).cos()) / (a.sin() * (2.0 * theta).sin());
    if c.abs() > 1.0 + 1e-9 {
        return Err(Error::param(format!("no phase solution for N={n}, k={k}")));
    }
    let phi = c.clamp(-1.0, 1.0).acos();
    let psi = (1.0 - z(phi)).arg();
    Ok(Some((phi, psi)))
}

/// State produced by the certainty variant, before measurement. Charges
/// exactly [`optimal_query_count`] queries.
pub fn exact_state(oracle: &PredicateOracle<'_>, k: usize) -> Result<StateVector> {
    let n = oracle.dim();
    let marked = oracle.marked_indices();
    if marked.len() != k {
        return Err(Error::param(format!(
            "oracle has {} marked items, params claim {k}",
            marked.len()
        )));
    }
    let Some((phi, psi)) = exact_phases(n, k)? else {
        return StateVector::uniform(n);
    };
    let t = optimal_query_count(n, k)?;
    let mut s = evolve(oracle, &marked, t - 1)?;
    s.apply_marked_phase(&marked, phi, oracle.counter())?;
    s.apply_phased_diffusion(psi);
    s.settle();
    Ok(s)
}

/// Finds a marked index with certainty (up to rounding) using exactly
/// [`optimal_query_count`] queries.
pub fn grover_search_exact<R: Rng + ?Sized>(
    oracle: &BitOracle,
    params: &GroverParams,
    rng: &mut R,
) -> Result<usize> {
    let k = params
        .k
        .ok_or(Error::UnsupportedMode("the certainty variant needs k"))?;
    if params.n != oracle.len() {
        return Err(Error::param("params.n does not match the oracle"));
    }
    exact_state(&oracle.predicate(), k)?.measure(rng)
}

/// Options for the unknown-k schedule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UnknownK {
    /// Promised lower bound on the number of marked items.
    pub k_floor: Option<usize>,
    /// Hard cap on queries spent by this call.
    pub budget: Option<u64>,
}

/// Result of an unknown-k search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub found: Option<usize>,
    pub queries: u64,
    /// True when the search stopped because the external budget, not the
    /// schedule's own cap, ran out.
    pub budget_hit: bool,
}

/// Schedule cap `ceil(4.5 sqrt(N / k_floor))`.
pub fn unknown_k_cap(n: usize, k_floor: usize) -> u64 {
    (UNKNOWN_K_CAP * (n as f64 / k_floor.max(1) as f64).sqrt()).ceil() as u64
}

/// Exponential search for an unknown number of marked items.
///
/// Round r draws `j` uniformly from `0..ceil(m)`, runs `j` iterations from
/// the uniform state, measures, and checks the outcome with one classical
/// query; `m` grows by 6/5 per round up to `sqrt(N)`. The schedule stops
/// before a round would push the spend past the cap.
pub fn search_unknown<R: Rng + ?Sized>(
    oracle: &PredicateOracle<'_>,
    opts: UnknownK,
    rng: &mut R,
) -> Result<SearchReport> {
    let n = oracle.dim();
    let k_floor = opts.k_floor.unwrap_or(1);
    if k_floor == 0 || k_floor > n {
        return Err(Error::param(format!("k_floor {k_floor} out of range for N={n}")));
    }
    let cap = unknown_k_cap(n, k_floor);
    let limit = opts.budget.map_or(cap, |b| b.min(cap));
    let marked = oracle.marked_indices();
    let start = oracle.counter().count();
    let m_max = (n as f64).sqrt().max(1.0);
    let mut m = 1.0_f64;
    loop {
        let spent = oracle.counter().count() - start;
        let j = rng.gen_range(0..m.ceil() as usize);
        if spent + j as u64 + 1 > limit {
            return Ok(SearchReport {
                found: None,
                queries: spent,
                budget_hit: limit < cap,
            });
        }
        let x = evolve(oracle, &marked, j)?.measure(rng)?;
        if oracle.evaluate(x) {
            return Ok(SearchReport {
                found: Some(x),
                queries: oracle.counter().count() - start,
                budget_hit: false,
            });
        }
        m = (m * UNKNOWN_K_GROWTH).min(m_max);
    }
}

/// Unknown-k search on a bit oracle, with an optional promised lower bound
/// on k.
pub fn grover_search_unknown<R: Rng + ?Sized>(
    oracle: &BitOracle,
    rng: &mut R,
    k_floor: Option<usize>,
) -> Result<Option<usize>> {
    let opts = UnknownK {
        k_floor,
        budget: None,
    };
    Ok(search_unknown(&oracle.predicate(), opts, rng)?.found)
}

/// Repeats the unknown-k search, removing each found item from the
/// predicate, until a search comes back empty.
pub fn find_all<R: Rng + ?Sized>(oracle: &BitOracle, rng: &mut R) -> Result<BTreeSet<usize>> {
    let mut found = BTreeSet::new();
    loop {
        let seen = found.clone();
        let rest = PredicateOracle::new(oracle.len(), oracle.counter(), move |i| {
            oracle.peek(i) && !seen.contains(&i)
        });
        match search_unknown(&rest, UnknownK::default(), rng)?.found {
            Some(i) => {
                found.insert(i);
            }
            None => return Ok(found),
        }
        if found.len() == oracle.len() {
            return Ok(found);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{QueryOracle, SeededRng};

    #[test]
    fn optimal_counts() {
        assert_eq!(optimal_query_count(4, 1).unwrap(), 1);
        assert_eq!(optimal_query_count(16, 1).unwrap(), 3);
        assert_eq!(optimal_query_count(100, 1).unwrap(), 8);
        assert_eq!(optimal_query_count(9, 9).unwrap(), 0);
        assert!(optimal_query_count(4, 0).is_err());
        assert!(optimal_query_count(4, 5).is_err());
    }

    #[test]
    fn optimal_count_non_increasing_in_k() {
        for n in 1..300 {
            let counts: Vec<usize> = (1..=n).map(|k| optimal_query_count(n, k).unwrap()).collect();
            assert!(counts.windows(2).all(|w| w[0] >= w[1]), "N={n}");
        }
    }

    #[test]
    fn analytic_success() {
        assert!((success_prob_analytic(10, 3, 0).unwrap() - 0.3).abs() < 1e-15);
        assert!((success_prob_analytic(4, 1, 1).unwrap() - 1.0).abs() < 1e-12);
        // sin^2(17 asin 0.1), evaluated independently.
        assert!((success_prob_analytic(100, 1, 8).unwrap() - 0.982_7).abs() < 1e-4);
    }

    #[test]
    fn simulation_matches_closed_form_small() {
        for n in 1..40 {
            for k in 1..=n {
                let marked: Vec<usize> = (0..k).map(|i| (i * 7) % n).collect::<BTreeSet<_>>().into_iter().collect();
                if marked.len() != k {
                    continue;
                }
                let o = BitOracle::from_marked(n, &marked).unwrap();
                let p = o.predicate();
                for t in 0..12 {
                    let s = evolve(&p, &marked, t).unwrap();
                    let want = success_prob_analytic(n, k, t).unwrap();
                    assert!((s.subspace_probability(&marked) - want).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn grover_4_1_always_succeeds() {
        for seed in 0..1000 {
            let o = BitOracle::from_marked(4, &[3]).unwrap();
            let mut rng = SeededRng::new(seed, 0);
            let params = GroverParams::new(4, 1).unwrap();
            assert_eq!(grover_search(&o, &params, &mut rng).unwrap(), 3);
            assert_eq!(o.query_count(), 1);
        }
    }

    #[test]
    fn grover_all_marked_needs_no_queries() {
        let o = BitOracle::new(vec![true; 8]).unwrap();
        let mut rng = SeededRng::new(0, 0);
        let params = GroverParams::new(8, 8).unwrap();
        let i = grover_search(&o, &params, &mut rng).unwrap();
        assert!(o.peek(i));
        assert_eq!(o.query_count(), 0);
        let i = grover_search_exact(&o, &params, &mut rng).unwrap();
        assert!(o.peek(i));
        assert_eq!(o.query_count(), 0);
    }

    #[test]
    fn grover_64_frequency_matches_closed_form() {
        let want = success_prob_analytic(64, 1, 6).unwrap();
        let trials = 4000;
        let mut hits = 0;
        for seed in 0..trials {
            let mut rng = SeededRng::new(seed, 0);
            let target = rng.gen_range(0..64);
            let o = BitOracle::from_marked(64, &[target]).unwrap();
            let params = GroverParams::new(64, 1).unwrap();
            hits += (grover_search(&o, &params, &mut rng).unwrap() == target) as u32;
        }
        assert!((hits as f64 / trials as f64 - want).abs() < 0.02);
    }

    #[test]
    fn exact_phases_small_cases() {
        let (phi, psi) = exact_phases(4, 1).unwrap().unwrap();
        // phi sits where cos(phi) = -1, so it is only determined to ~1e-8.
        assert!((phi - PI).abs() < 1e-6 && (psi.abs() - PI).abs() < 1e-6);
        assert!(exact_phases(5, 5).unwrap().is_none());
    }

    #[test]
    fn exact_reaches_certainty_everywhere_small() {
        for n in 1..70 {
            for k in 1..=n {
                let marked: Vec<usize> = (n - k..n).collect();
                let o = BitOracle::from_marked(n, &marked).unwrap();
                let s = exact_state(&o.predicate(), k).unwrap();
                assert!(s.subspace_probability(&marked) >= 1.0 - 1e-9, "N={n} k={k}");
                assert_eq!(o.query_count() as usize, optimal_query_count(n, k).unwrap());
            }
        }
    }

    #[test]
    fn exact_requires_k() {
        let o = BitOracle::from_marked(4, &[1]).unwrap();
        let mut rng = SeededRng::new(0, 0);
        let p = GroverParams::unknown(4).unwrap();
        assert!(matches!(
            grover_search_exact(&o, &p, &mut rng),
            Err(Error::UnsupportedMode(_))
        ));
    }

    #[test]
    fn unknown_k_edge_cases() {
        let mut rng = SeededRng::new(3, 0);
        let none = BitOracle::new(vec![false; 64]).unwrap();
        assert_eq!(grover_search_unknown(&none, &mut rng, None).unwrap(), None);
        assert!(none.query_count() <= unknown_k_cap(64, 1));

        let all = BitOracle::new(vec![true; 64]).unwrap();
        let got = grover_search_unknown(&all, &mut rng, None).unwrap();
        assert!(got.is_some());
        assert_eq!(all.query_count(), 1);
    }

    #[test]
    fn unknown_k_respects_budget() {
        let mut rng = SeededRng::new(5, 0);
        let none = BitOracle::new(vec![false; 1024]).unwrap();
        let r = search_unknown(
            &none.predicate(),
            UnknownK {
                k_floor: None,
                budget: Some(10),
            },
            &mut rng,
        )
        .unwrap();
        assert!(r.found.is_none() && r.budget_hit && r.queries <= 10);
    }

    #[test]
    fn find_all_recovers_planted_set() {
        let mut rng = SeededRng::new(11, 0);
        let empty = BitOracle::new(vec![false; 32]).unwrap();
        assert!(find_all(&empty, &mut rng).unwrap().is_empty());

        let mut ok = 0;
        for seed in 0..60 {
            let mut rng = SeededRng::new(seed, 1);
            let planted: BTreeSet<usize> =
                rand::seq::index::sample(&mut rng, 256, 16).into_iter().collect();
            let o = BitOracle::from_marked(256, &planted.iter().copied().collect::<Vec<_>>()).unwrap();
            ok += (find_all(&o, &mut rng).unwrap() == planted) as u32;
        }
        assert!(ok >= 40, "{ok}/60");
    }
}
