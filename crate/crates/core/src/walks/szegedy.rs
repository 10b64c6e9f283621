use num_complex::Complex64;
use rand::Rng;

use super::markov::MarkovChain;
use crate::error::{Error, Result};
use crate::sim::StateVector;

/// Window constant `c` of the measurement schedule: walk lengths are drawn
/// from windows capped at `ceil(c / sqrt(delta * gap))`.
pub const SZEGEDY_WINDOW: f64 = 2.0;

/// Growth of the measurement window per round.
pub const WINDOW_GROWTH: f64 = 1.2;

/// Abstract step costs: setup, transition, marked check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SzegedyCosts {
    pub gamma0: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl SzegedyCosts {
    pub fn new(gamma0: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        if [gamma0, gamma1, gamma2].iter().any(|g| !(*g >= 0.0)) {
            return Err(Error::param("step costs must be non-negative"));
        }
        Ok(Self {
            gamma0,
            gamma1,
            gamma2,
        })
    }

    pub fn unit() -> Self {
        Self {
            gamma0: 1.0,
            gamma1: 1.0,
            gamma2: 1.0,
        }
    }
}

/// Szegedy walk `W = R_B R_A` on the edge space of a partially absorbing
/// version of the chain.
///
/// The walk is built from `P(s) = (1 - s) P + s P'`, where `P'` turns every
/// marked state into a self-loop. `R_A` reflects about
/// `span{|x>|p_x>}` with `|p_x> = sum_y sqrt(P(s)_{xy}) |y>`, and `R_B` is
/// the same reflection with the registers swapped. The edge basis holds
/// only pairs `(x, y)` with `P_{xy} > 0` plus the marked self-loops.
#[derive(Clone, Debug)]
pub struct SzegedyWalk<'c> {
    chain: &'c MarkovChain,
    s: f64,
    row_start: Vec<usize>,
    tail: Vec<usize>,
    head: Vec<usize>,
    amp: Vec<f64>,
    reverse: Vec<usize>,
}

impl<'c> SzegedyWalk<'c> {
    /// Interpolation `s = 1 - delta / (1 - delta)`, clamped to `[0, 1)`.
    pub fn new(chain: &'c MarkovChain) -> Self {
        Self::for_delta(chain, chain.delta())
    }

    /// Interpolation tuned for a promised marked fraction.
    pub fn for_delta(chain: &'c MarkovChain, delta: f64) -> Self {
        let s = if delta <= 0.0 || delta >= 1.0 {
            0.0
        } else {
            (1.0 - delta / (1.0 - delta)).clamp(0.0, 1.0 - 1e-12)
        };
        Self::with_interpolation(chain, s)
    }

    pub fn with_interpolation(chain: &'c MarkovChain, s: f64) -> Self {
        let n = chain.states();
        let mut row_start = Vec::with_capacity(n + 1);
        let (mut tail, mut head, mut amp) = (Vec::new(), Vec::new(), Vec::new());
        for x in 0..n {
            row_start.push(head.len());
            let mut row: Vec<(usize, f64)> = chain.row(x).to_vec();
            if chain.is_marked(x) {
                if !row.iter().any(|&(y, _)| y == x) {
                    row.push((x, 0.0));
                    row.sort_by_key(|&(y, _)| y);
                }
                for e in &mut row {
                    e.1 = (1.0 - s) * e.1 + if e.0 == x { s } else { 0.0 };
                }
            }
            for (y, p) in row {
                tail.push(x);
                head.push(y);
                amp.push(p.max(0.0).sqrt());
            }
        }
        row_start.push(head.len());
        let find = |x: usize, y: usize| {
            let r = &head[row_start[x]..row_start[x + 1]];
            row_start[x] + r.binary_search(&y).expect("edge support is symmetric")
        };
        let reverse = (0..head.len()).map(|e| find(head[e], tail[e])).collect();
        Self {
            chain,
            s,
            row_start,
            tail,
            head,
            amp,
            reverse,
        }
    }

    pub fn chain(&self) -> &MarkovChain {
        self.chain
    }

    pub fn interpolation(&self) -> f64 {
        self.s
    }

    /// Size of the edge basis.
    pub fn dim(&self) -> usize {
        self.head.len()
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        (self.tail[e], self.head[e])
    }

    /// `S^{-1/2} sum_x |x>|p_x>` for the original chain.
    pub fn stationary_state(&self) -> Result<StateVector> {
        self.stationary_over(|_| true)
    }

    /// The stationary edge state conditioned on an unmarked first register.
    pub fn unmarked_start(&self) -> Result<StateVector> {
        self.stationary_over(|x| !self.chain.is_marked(x))
    }

    fn stationary_over(&self, keep: impl Fn(usize) -> bool) -> Result<StateVector> {
        let mut amps = vec![Complex64::new(0.0, 0.0); self.dim()];
        for x in (0..self.chain.states()).filter(|&x| keep(x)) {
            for &(y, p) in self.chain.row(x) {
                let e = self.row_start[x]
                    + self.head[self.row_start[x]..self.row_start[x + 1]]
                        .binary_search(&y)
                        .expect("edge present");
                amps[e] = Complex64::new(p.sqrt(), 0.0);
            }
        }
        StateVector::normalized(amps)
    }

    fn reflect_rows(&self, amps: &mut [Complex64]) {
        for x in 0..self.chain.states() {
            let r = self.row_start[x]..self.row_start[x + 1];
            let c: Complex64 = amps[r.clone()]
                .iter()
                .zip(&self.amp[r.clone()])
                .map(|(a, w)| a * w)
                .sum::<Complex64>()
                * 2.0;
            for (a, w) in amps[r.clone()].iter_mut().zip(&self.amp[r]) {
                *a = c * w - *a;
            }
        }
    }

    fn swap(&self, amps: &mut [Complex64]) {
        let copy = amps.to_vec();
        for (e, a) in amps.iter_mut().enumerate() {
            *a = copy[self.reverse[e]];
        }
    }

    /// One application of `W = R_B R_A`.
    pub fn step(&self, state: &mut StateVector) -> Result<()> {
        if state.dim() != self.dim() {
            return Err(Error::InvalidDimension(state.dim()));
        }
        let amps = state.amplitudes_mut();
        self.reflect_rows(amps);
        self.swap(amps);
        self.reflect_rows(amps);
        self.swap(amps);
        Ok(())
    }

    /// Probability that the first register holds a marked state.
    pub fn marked_overlap(&self, state: &StateVector) -> f64 {
        (0..self.dim())
            .filter(|&e| self.chain.is_marked(self.tail[e]))
            .map(|e| state.probability(e))
            .sum()
    }

    /// Measures the first register.
    pub fn measure_vertex<R: Rng + ?Sized>(&self, state: &StateVector, rng: &mut R) -> Result<usize> {
        Ok(self.tail[state.measure(rng)?])
    }
}

/// One walk step; see [`SzegedyWalk::step`].
pub fn szegedy_step(walk: &SzegedyWalk<'_>, state: &mut StateVector) -> Result<()> {
    walk.step(state)
}

/// Options for [`szegedy_find_marked`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FindOptions {
    /// Cap on total walk steps.
    pub budget: u64,
    /// Marked fraction to tune for, when the caller has a promise rather
    /// than the true value.
    pub delta_hint: Option<f64>,
}

impl FindOptions {
    pub fn with_budget(budget: u64) -> Self {
        Self {
            budget,
            delta_hint: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SzegedyOutcome {
    pub state: Option<usize>,
    pub walk_steps: u64,
    /// Stationary-state preparations.
    pub attempts: u64,
    /// `attempts * gamma0 + walk_steps * (gamma1 + gamma2)`.
    pub cost: f64,
}

/// Longest walk the schedule will use, `ceil(c / sqrt(delta * gap))`.
pub fn max_window(chain: &MarkovChain, delta: f64) -> u64 {
    let delta = delta.max(1.0 / chain.states() as f64);
    let gap = chain.gap().max(1e-12);
    (SZEGEDY_WINDOW / (delta * gap).sqrt()).ceil().max(1.0) as u64
}

/// Looks for a marked state with the interpolated walk.
///
/// Each attempt prepares the stationary edge state and measures whether
/// the first register is marked; that measurement either succeeds outright
/// or leaves the unmarked part. The walk then runs for `t` steps, `t`
/// uniform in `1..=T_r`, with `T_r = min(ceil(1.2^r), T_max)`, and the first
/// register is measured again. An attempt whose walk would overrun the
/// step budget is not started.
pub fn szegedy_find_marked<R: Rng + ?Sized>(
    chain: &MarkovChain,
    costs: SzegedyCosts,
    opts: FindOptions,
    rng: &mut R,
) -> Result<SzegedyOutcome> {
    let delta = opts.delta_hint.unwrap_or(chain.delta());
    let walk = SzegedyWalk::for_delta(chain, delta);
    let t_max = max_window(chain, delta);
    let mut window = 1.0_f64;
    let (mut steps, mut attempts) = (0u64, 0u64);
    let finish = |state, steps: u64, attempts: u64| SzegedyOutcome {
        state,
        walk_steps: steps,
        attempts,
        cost: attempts as f64 * costs.gamma0 + steps as f64 * (costs.gamma1 + costs.gamma2),
    };
    let start = if chain.marked_states().len() < chain.states() {
        Some(walk.unmarked_start()?)
    } else {
        None
    };
    loop {
        let t = rng.gen_range(1..=(window.ceil() as u64).min(t_max));
        if steps + t > opts.budget {
            return Ok(finish(None, steps, attempts));
        }
        attempts += 1;
        let x = rng.gen_range(0..chain.states());
        if chain.is_marked(x) {
            return Ok(finish(Some(x), steps, attempts));
        }
        let mut s = start.clone().expect("an unmarked state exists");
        for _ in 0..t {
            walk.step(&mut s)?;
        }
        s.settle();
        steps += t;
        let y = walk.measure_vertex(&s, rng)?;
        if chain.is_marked(y) {
            return Ok(finish(Some(y), steps, attempts));
        }
        window *= WINDOW_GROWTH;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::SeededRng;

    #[test]
    fn stationary_state_is_fixed_without_marks() {
        let c = MarkovChain::torus(5, &[]).unwrap();
        let w = SzegedyWalk::new(&c);
        let mut s = w.stationary_state().unwrap();
        let before = s.clone();
        for _ in 0..5 {
            w.step(&mut s).unwrap();
        }
        assert!((s.inner(&before).norm() - 1.0).abs() < 1e-9);
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn random_chain_steps_preserve_norm() {
        let mut rng = SeededRng::new(8, 0);
        let s = 32;
        // Symmetric doubly stochastic: average of random permutation matrices
        // and their transposes.
        let mut p = vec![vec![0.0; s]; s];
        for _ in 0..4 {
            let perm = rand::seq::index::sample(&mut rng, s, s).into_vec();
            for (i, &j) in perm.iter().enumerate() {
                p[i][j] += 0.125;
                p[j][i] += 0.125;
            }
        }
        let c = MarkovChain::from_dense(&p, &[3, 9]).unwrap();
        let w = SzegedyWalk::new(&c);
        let mut st = w.unmarked_start().unwrap();
        for _ in 0..1000 {
            w.step(&mut st).unwrap();
            assert!((st.norm_sqr() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn two_state_flip_chain_stays_at_half() {
        let c = MarkovChain::from_dense(&[vec![0.0, 1.0], vec![1.0, 0.0]], &[1]).unwrap();
        let w = SzegedyWalk::new(&c);
        let mut s = w.stationary_state().unwrap();
        for _ in 0..=3 {
            assert!((w.marked_overlap(&s) - 0.5).abs() < 1e-12);
            w.step(&mut s).unwrap();
        }
    }

    #[test]
    fn all_marked_costs_only_setup() {
        let c = MarkovChain::cycle(6, &(0..6).collect::<Vec<_>>()).unwrap();
        let mut rng = SeededRng::new(0, 0);
        let costs = SzegedyCosts::new(5.0, 1.0, 1.0).unwrap();
        let out = szegedy_find_marked(&c, costs, FindOptions::with_budget(10), &mut rng).unwrap();
        assert!(out.state.is_some());
        assert_eq!(out.walk_steps, 0);
        assert_eq!(out.cost, 5.0);
    }

    #[test]
    fn empty_marked_set_returns_absent() {
        let c = MarkovChain::cycle(8, &[]).unwrap();
        let mut rng = SeededRng::new(0, 0);
        let out = szegedy_find_marked(&c, SzegedyCosts::unit(), FindOptions::with_budget(50), &mut rng).unwrap();
        assert!(out.state.is_none() && out.walk_steps <= 50);
    }

    #[test]
    fn complete_graph_finds_quickly() {
        let marked: Vec<usize> = (0..4).collect();
        let c = MarkovChain::complete(64, &marked).unwrap();
        let mut hits = 0;
        for seed in 0..300 {
            let mut rng = SeededRng::new(seed, 0);
            let out = szegedy_find_marked(&c, SzegedyCosts::unit(), FindOptions::with_budget(40), &mut rng).unwrap();
            hits += out.state.is_some() as u32;
        }
        assert!(hits >= 100, "{hits}/300");
    }
}
