//! Amplitude amplification over arbitrary state preparations, plus the
//! repetition calculus shared with the application modules.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::grover::{ceil_tol, rotation_count, UNKNOWN_K_CAP, UNKNOWN_K_GROWTH};
use crate::sim::StateVector;

type Procedure = Box<dyn Fn(&mut StateVector) + Send + Sync>;

/// A unitary procedure `A` with `A|0> = |psi>`, its inverse, and the number
/// of queries each application costs.
pub struct StatePreparation {
    dim: usize,
    forward: Procedure,
    inverse: Procedure,
    cost: u64,
}

impl StatePreparation {
    pub fn new(
        dim: usize,
        cost: u64,
        forward: impl Fn(&mut StateVector) + Send + Sync + 'static,
        inverse: impl Fn(&mut StateVector) + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self {
            dim,
            forward: Box::new(forward),
            inverse: Box::new(inverse),
            cost,
        })
    }

    /// Householder reflection sending `|0>` to `target` (up to a global
    /// phase). It is its own inverse, so any normalized state can be
    /// prepared this way.
    pub fn householder(target: &StateVector, cost: u64) -> Result<Self> {
        let dim = target.dim();
        let a0 = target.amplitude(0);
        let phase = if a0.norm() > 0.0 {
            a0.conj() / a0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        // v = |0> - e^{-i alpha}|target>, reflection I - 2|v><v|/<v|v>.
        let mut v: Vec<Complex64> = target.amplitudes().iter().map(|a| -a * phase).collect();
        v[0] += 1.0;
        let vv: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        let reflect = move |s: &mut StateVector| {
            if vv < 1e-30 {
                return;
            }
            let c: Complex64 = v
                .iter()
                .zip(s.amplitudes())
                .map(|(x, a)| x.conj() * a)
                .sum::<Complex64>()
                * (2.0 / vv);
            for (a, x) in s.amplitudes_mut().iter_mut().zip(&v) {
                *a -= c * x;
            }
        };
        let reflect = std::sync::Arc::new(reflect);
        let r2 = reflect.clone();
        Self::new(dim, cost, move |s| reflect(s), move |s| r2(s))
    }

    /// Preparation of the uniform superposition, the Grover special case.
    pub fn uniform(dim: usize, cost: u64) -> Result<Self> {
        Self::householder(&StateVector::uniform(dim)?, cost)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cost(&self) -> u64 {
        self.cost
    }

    pub fn apply_forward(&self, s: &mut StateVector) {
        (self.forward)(s)
    }

    pub fn apply_inverse(&self, s: &mut StateVector) {
        (self.inverse)(s)
    }

    /// `A|0>`; does not charge anything.
    pub fn prepared(&self) -> Result<StateVector> {
        let mut s = StateVector::basis(self.dim, 0)?;
        self.apply_forward(&mut s);
        Ok(s)
    }
}

impl fmt::Debug for StatePreparation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StatePreparation")
            .field("dim", &self.dim)
            .field("cost", &self.cost)
            .finish()
    }
}

/// Lower bound on the good-subspace weight and the good predicate.
pub struct AmplifyParams<'a> {
    pub eps: f64,
    pub good: Box<dyn Fn(usize) -> bool + 'a>,
    /// Treat `eps` only as a lower bound and run the exponential schedule
    /// instead of the fixed round count, so larger true weights do not
    /// overshoot.
    pub lower_bound_only: bool,
}

impl<'a> AmplifyParams<'a> {
    pub fn new(eps: f64, good: impl Fn(usize) -> bool + 'a) -> Result<Self> {
        check_eps(eps)?;
        Ok(Self {
            eps,
            good: Box::new(good),
            lower_bound_only: false,
        })
    }

    pub fn lower_bound(mut self) -> Self {
        self.lower_bound_only = true;
        self
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::param(format!("eps must lie in (0, 1], got {eps}")));
    }
    Ok(())
}

/// `ceil(pi / (4 asin(sqrt(eps))) - 1/2)` rounds of amplification.
pub fn predicted_repetitions(eps: f64) -> Result<usize> {
    check_eps(eps)?;
    Ok(rotation_count(eps))
}

/// `ceil(1/eps)` independent classical repetitions.
pub fn classical_repetitions(eps: f64) -> Result<usize> {
    check_eps(eps)?;
    Ok(ceil_tol(1.0 / eps))
}

/// Success probability after `rounds` rounds from initial good weight `p`.
pub fn amplified_success(p: f64, rounds: usize) -> f64 {
    let theta = p.clamp(0.0, 1.0).sqrt().asin();
    ((2 * rounds + 1) as f64 * theta).sin().powi(2)
}

/// Outcome of [`amplitude_amplify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AmplifyOutcome {
    pub index: usize,
    pub queries: u64,
    pub rounds: usize,
}

fn good_indices(dim: usize, good: &dyn Fn(usize) -> bool) -> Vec<usize> {
    (0..dim).filter(|&i| good(i)).collect()
}

/// Prepares `A|0>` and applies `rounds` rounds of a good-set phase flip
/// followed by the reflection `A (2|0><0| - I) A^{-1}` about the prepared
/// state, without measuring. Returns the state and the
/// queries charged: `(2 rounds + 1) cost + rounds`.
pub fn amplified_state(
    prep: &StatePreparation,
    good: &dyn Fn(usize) -> bool,
    rounds: usize,
) -> Result<(StateVector, u64)> {
    let marked = good_indices(prep.dim, good);
    let counter = crate::sim::QueryCounter::new();
    let mut s = StateVector::basis(prep.dim, 0)?;
    prep.apply_forward(&mut s);
    counter.charge(prep.cost);
    for _ in 0..rounds {
        s.apply_phase_flip(&marked, &counter)?;
        prep.apply_inverse(&mut s);
        s.reflect_about_basis(0)?;
        prep.apply_forward(&mut s);
        counter.charge(2 * prep.cost);
    }
    s.settle();
    Ok((s, counter.count()))
}

/// Boosts a one-sided-error preparation to constant success probability.
///
/// The returned index is good with probability at least 2/3 when the
/// prepared state's good weight really is at least `eps`; if that promise
/// is broken the guarantee is void but nothing fails.
pub fn amplitude_amplify<R: Rng + ?Sized>(
    prep: &StatePreparation,
    params: &AmplifyParams<'_>,
    rng: &mut R,
) -> Result<AmplifyOutcome> {
    check_eps(params.eps)?;
    if !params.lower_bound_only {
        let rounds = predicted_repetitions(params.eps)?;
        let (s, queries) = amplified_state(prep, &*params.good, rounds)?;
        return Ok(AmplifyOutcome {
            index: s.measure(rng)?,
            queries,
            rounds,
        });
    }

    // Exponential schedule; each attempt is checked with one good query.
    let cap = (UNKNOWN_K_CAP / params.eps.sqrt()).ceil() as usize;
    let m_max = (1.0 / params.eps).sqrt().max(1.0);
    let mut m = 1.0_f64;
    let mut queries = 0;
    let mut rounds_total = 0;
    let mut last = 0;
    loop {
        let j = rng.gen_range(0..m.ceil() as usize);
        if rounds_total > 0 && rounds_total + j + 1 > cap {
            return Ok(AmplifyOutcome {
                index: last,
                queries,
                rounds: rounds_total,
            });
        }
        let (s, q) = amplified_state(prep, &*params.good, j)?;
        last = s.measure(rng)?;
        queries += q + 1;
        rounds_total += j + 1;
        if (params.good)(last) {
            return Ok(AmplifyOutcome {
                index: last,
                queries,
                rounds: rounds_total,
            });
        }
        m = (m * UNKNOWN_K_GROWTH).min(m_max);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grover::{evolve, optimal_query_count};
    use crate::sim::{BitOracle, SeededRng};

    #[test]
    fn repetition_counts() {
        assert_eq!(predicted_repetitions(1.0).unwrap(), 0);
        assert_eq!(predicted_repetitions(0.25).unwrap(), 1);
        assert_eq!(predicted_repetitions(0.01).unwrap(), 8);
        assert_eq!(classical_repetitions(1.0).unwrap(), 1);
        assert_eq!(classical_repetitions(0.01).unwrap(), 100);
        assert!(predicted_repetitions(0.0).is_err());
        assert!(classical_repetitions(1.5).is_err());
        let ratio = classical_repetitions(1e-4).unwrap() as f64
            / predicted_repetitions(1e-4).unwrap() as f64;
        assert!((120.0..130.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn repetitions_coincide_with_grover_counts() {
        for n in (1..=10_000).step_by(37) {
            for k in [1, 2, 3, n / 7 + 1, n / 2 + 1, n] {
                if k > n {
                    continue;
                }
                assert_eq!(
                    predicted_repetitions(k as f64 / n as f64).unwrap(),
                    optimal_query_count(n, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn quantum_never_exceeds_classical_below_half() {
        for i in 1..=500 {
            let eps = i as f64 / 1000.0;
            let q = predicted_repetitions(eps).unwrap();
            let c = classical_repetitions(eps).unwrap();
            assert!(q <= c);
            if eps <= 0.1 {
                assert!(q < c);
            }
        }
    }

    #[test]
    fn householder_prepares_target() {
        let target = StateVector::normalized(vec![
            Complex64::new(0.0, 0.3),
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.2, 0.1),
        ])
        .unwrap();
        let prep = StatePreparation::householder(&target, 1).unwrap();
        let s = prep.prepared().unwrap();
        assert!((s.inner(&target).norm() - 1.0).abs() < 1e-12);
        let mut back = s.clone();
        prep.apply_inverse(&mut back);
        assert!((back.probability(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_preparation_reproduces_grover_round_for_round() {
        let n = 64;
        let marked = [5, 40];
        let o = BitOracle::from_marked(n, &marked).unwrap();
        let prep = StatePreparation::uniform(n, 0).unwrap();
        let good = |i: usize| marked.contains(&i);
        for r in 0..8 {
            let (a, q) = amplified_state(&prep, &good, r).unwrap();
            let g = evolve(&o.predicate(), &marked, r).unwrap();
            assert_eq!(q, r as u64);
            for (x, y) in a.amplitudes().iter().zip(g.amplitudes()) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn quarter_weight_reaches_certainty_in_one_round() {
        // Good weight exactly 1/4 on a non-uniform state.
        let amps = vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.6),
            Complex64::new(0.0, (1.0f64 - 0.25 - 0.72).sqrt()),
        ];
        let target = StateVector::from_amplitudes(amps).unwrap();
        let prep = StatePreparation::householder(&target, 3).unwrap();
        let good = |i: usize| i == 0;
        let (s, q) = amplified_state(&prep, &good, predicted_repetitions(0.25).unwrap()).unwrap();
        assert!(s.probability(0) >= 0.999);
        assert_eq!(q, 3 * 3 + 1);
    }

    #[test]
    fn success_follows_closed_form() {
        let n = 50;
        let mut amps: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + i as f64, 0.0)).collect();
        amps[7] = Complex64::new(3.0, 0.0);
        let target = StateVector::normalized(amps).unwrap();
        let prep = StatePreparation::householder(&target, 1).unwrap();
        let good = |i: usize| i == 7 || i == 11;
        let p = target.subspace_probability(&[7, 11]);
        for r in 0..10 {
            let (s, _) = amplified_state(&prep, &good, r).unwrap();
            assert!((s.subspace_probability(&[7, 11]) - amplified_success(p, r)).abs() < 1e-9);
        }
    }

    #[test]
    fn promise_violation_does_not_error() {
        let prep = StatePreparation::uniform(16, 1).unwrap();
        let params = AmplifyParams::new(0.5, |_| false).unwrap();
        let mut rng = SeededRng::new(0, 0);
        assert!(amplitude_amplify(&prep, &params, &mut rng).is_ok());
    }

    #[test]
    fn lower_bound_schedule_handles_large_true_weight() {
        let prep = StatePreparation::uniform(64, 1).unwrap();
        let mut hits = 0;
        for seed in 0..200 {
            let params = AmplifyParams::new(1.0 / 64.0, |i| i < 48).unwrap().lower_bound();
            let mut rng = SeededRng::new(seed, 0);
            let out = amplitude_amplify(&prep, &params, &mut rng).unwrap();
            hits += (out.index < 48) as u32;
        }
        assert!(hits >= 190);
    }
}
