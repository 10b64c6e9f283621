use std::collections::HashMap;

use rand::Rng;

use super::markov::MarkovChain;
use super::szegedy::{szegedy_find_marked, FindOptions, SzegedyCosts};
use crate::error::{Error, Result};
use crate::sim::ValueOracle;

/// Largest state count `C(N, M) + C(N, M + 1)` accepted.
pub const JOHNSON_CAP: usize = 5000;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Fraction of `M`-subsets of `0..N` containing one fixed pair,
/// `(M/N) (M-1)/(N-1)`.
pub fn collision_vertex_probability(n: usize, m: usize) -> f64 {
    if m < 2 || n < 2 {
        return 0.0;
    }
    (m as f64 / n as f64) * ((m - 1) as f64 / (n - 1) as f64)
}

/// Add/remove walk on `M`-subsets and `(M+1)`-subsets of `0..N`, encoded as
/// bitmasks. Every move has probability `1/D` with `D = max(N - M, M + 1)`
/// and the remainder is a self-loop, which makes the chain symmetric.
#[derive(Clone, Debug)]
pub struct JohnsonChain {
    pub n: usize,
    pub m: usize,
    subsets: Vec<u32>,
    chain: MarkovChain,
}

impl JohnsonChain {
    pub fn chain(&self) -> &MarkovChain {
        &self.chain
    }

    pub fn subset(&self, v: usize) -> u32 {
        self.subsets[v]
    }

    pub fn members(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&i| self.subsets[v] >> i & 1 == 1).collect()
    }

    pub fn lower_layer(&self) -> usize {
        binomial(self.n, self.m) as usize
    }

    /// Marked fraction if exactly one colliding pair exists.
    pub fn promised_delta(&self) -> f64 {
        let (n, m) = (self.n, self.m);
        let with_pair = binomial(n - 2, m - 2) + binomial(n - 2, m - 1);
        with_pair as f64 / self.subsets.len() as f64
    }
}

fn subsets_of_size(n: usize, k: usize) -> Vec<u32> {
    (0u32..1 << n).filter(|s| s.count_ones() as usize == k).collect()
}

fn has_collision(mask: u32, n: usize, f: &ValueOracle) -> bool {
    let mut seen = std::collections::HashSet::new();
    (0..n)
        .filter(|&i| mask >> i & 1 == 1)
        .any(|i| !seen.insert(f.peek(i)))
}

/// Builds the Johnson chain for `f`; a vertex is marked when its subset
/// holds two indices with equal values. Construction reads `f` without
/// charging; algorithms pay for what they learn separately.
pub fn johnson_chain(n: usize, m: usize, f: &ValueOracle) -> Result<JohnsonChain> {
    if m == 0 || m >= n {
        return Err(Error::param(format!("need 1 <= M < N, got N={n}, M={m}")));
    }
    if f.len() != n {
        return Err(Error::param(format!("oracle has {} values, N={n}", f.len())));
    }
    let states = binomial(n, m) + binomial(n, m + 1);
    if n > 31 || states > JOHNSON_CAP as u128 {
        return Err(Error::Size {
            what: format!("Johnson chain on N={n}, M={m} ({states} states)"),
            cap: JOHNSON_CAP,
        });
    }
    let mut subsets = subsets_of_size(n, m);
    subsets.extend(subsets_of_size(n, m + 1));
    let index: HashMap<u32, usize> = subsets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let d = (n - m).max(m + 1) as f64;
    let rows = subsets
        .iter()
        .map(|&s| {
            let upper = s.count_ones() as usize == m + 1;
            let mut row: Vec<(usize, f64)> = (0..n)
                .filter(|&i| (s >> i & 1 == 1) == upper)
                .map(|i| (index[&(s ^ 1 << i)], 1.0 / d))
                .collect();
            let stay = 1.0 - row.len() as f64 / d;
            if stay > 0.0 {
                row.push((index[&s], stay));
            }
            row
        })
        .collect();
    let marked: Vec<usize> = (0..subsets.len())
        .filter(|&v| has_collision(subsets[v], n, f))
        .collect();
    let chain = MarkovChain::from_sparse(rows, &marked)?;
    Ok(JohnsonChain {
        n,
        m,
        subsets,
        chain,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdWalkOutcome {
    pub pair: Option<(usize, usize)>,
    pub walk_steps: u64,
    pub attempts: u64,
    pub queries: u64,
}

/// Default walk-step budget for [`ed_walk`], in units of the schedule's
/// longest window.
pub const ED_BUDGET_WINDOWS: u64 = 20;

/// Element distinctness by a Szegedy walk on the Johnson chain.
///
/// Each attempt costs `M` queries to load the starting subset's values and
/// each walk step one more. The walk is tuned for the promised single-pair
/// marked fraction, since the true one is unknown to the algorithm.
pub fn ed_walk<R: Rng + ?Sized>(
    f: &ValueOracle,
    m: usize,
    rng: &mut R,
    budget: Option<u64>,
) -> Result<EdWalkOutcome> {
    let n = f.len();
    let jc = johnson_chain(n, m, f)?;
    let delta = jc.promised_delta();
    let budget = budget
        .unwrap_or_else(|| ED_BUDGET_WINDOWS * super::szegedy::max_window(&jc.chain, delta));
    let costs = SzegedyCosts::new(m as f64, 1.0, 0.0)?;
    let opts = FindOptions {
        budget,
        delta_hint: Some(delta),
    };
    let out = szegedy_find_marked(&jc.chain, costs, opts, rng)?;
    let queries = out.attempts * m as u64 + out.walk_steps;
    f.counter().charge(queries);
    let pair = out.state.map(|v| {
        let members = jc.members(v);
        let mut first: HashMap<i64, usize> = HashMap::new();
        let mut found = None;
        for &i in &members {
            if let Some(&j) = first.get(&f.peek(i)) {
                found = Some((j, i));
                break;
            }
            first.insert(f.peek(i), i);
        }
        found.expect("marked subsets contain a collision")
    });
    Ok(EdWalkOutcome {
        pair,
        walk_steps: out.walk_steps,
        attempts: out.attempts,
        queries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{QueryOracle, SeededRng};

    #[test]
    fn small_chain_structure() {
        let f = ValueOracle::new(vec![1, 2, 3, 4]).unwrap();
        let jc = johnson_chain(4, 2, &f).unwrap();
        assert_eq!(jc.chain().states(), 10);
        assert!(jc.chain().marked_states().is_empty());
        for v in 0..jc.lower_layer() {
            let up = jc
                .chain()
                .row(v)
                .iter()
                .filter(|&&(y, _)| y >= jc.lower_layer())
                .count();
            assert_eq!(up, 2);
        }
    }

    #[test]
    fn marked_count_for_one_pair() {
        let f = ValueOracle::new(vec![7, 1, 2, 7, 3, 4]).unwrap();
        let jc = johnson_chain(6, 3, &f).unwrap();
        let lower = jc
            .chain()
            .marked_states()
            .into_iter()
            .filter(|&v| v < jc.lower_layer())
            .count();
        assert_eq!(lower, 4);
        assert!((jc.chain().delta() - jc.promised_delta()).abs() < 1e-15);
    }

    #[test]
    fn vertex_probability_cases() {
        assert_eq!(collision_vertex_probability(7, 7), 1.0);
        assert!((collision_vertex_probability(4, 2) - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(collision_vertex_probability(9, 1), 0.0);
    }

    #[test]
    fn rejects_oversized_chains() {
        let f = ValueOracle::new((0..20).collect()).unwrap();
        assert!(matches!(johnson_chain(20, 8, &f), Err(Error::Size { .. })));
    }

    #[test]
    fn injective_input_has_no_pair() {
        let f = ValueOracle::new((0..6).collect()).unwrap();
        let mut rng = SeededRng::new(0, 0);
        let out = ed_walk(&f, 2, &mut rng, None).unwrap();
        assert!(out.pair.is_none());
        assert_eq!(f.query_count(), out.queries);
    }

    #[test]
    fn planted_pair_is_found() {
        let mut hits = 0;
        for seed in 0..100 {
            let f = ValueOracle::new(vec![0, 1, 2, 3, 1, 5]).unwrap();
            let mut rng = SeededRng::new(seed, 0);
            let out = ed_walk(&f, 3, &mut rng, None).unwrap();
            if let Some((i, j)) = out.pair {
                assert_eq!((i.min(j), i.max(j)), (1, 4));
                hits += 1;
            }
        }
        assert!(hits >= 34, "{hits}");
    }
}
