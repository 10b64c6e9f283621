use std::cell::Cell;
use std::fmt;

use crate::error::{Error, Result};
use crate::sim::StateVector;

/// Monotone query counter shared by an oracle and the predicates built on
/// top of it.
#[derive(Debug, Default)]
pub struct QueryCounter(Cell<u64>);

impl QueryCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge(&self, n: u64) {
        self.0.set(self.0.get() + n);
    }

    pub fn count(&self) -> u64 {
        self.0.get()
    }
}

/// Anything that keeps a query count.
pub trait QueryOracle {
    fn query_count(&self) -> u64;
}

/// Black box over bits `x_0..x_{N-1}`.
pub struct BitOracle {
    bits: Vec<bool>,
    counter: QueryCounter,
}

impl BitOracle {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self {
            bits,
            counter: QueryCounter::new(),
        })
    }

    /// Oracle of size `n` with exactly the listed indices set.
    pub fn from_marked(n: usize, marked: &[usize]) -> Result<Self> {
        let mut bits = vec![false; n];
        for &i in marked {
            *bits.get_mut(i).ok_or(Error::IndexOutOfRange { index: i, dim: n })? = true;
        }
        Self::new(bits)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Classical query; costs one.
    pub fn query(&self, i: usize) -> bool {
        self.counter.charge(1);
        self.bits[i]
    }

    /// Simulator-side read; never charged. Algorithms must only use this to
    /// build operators or to reuse a value an earlier query already revealed.
    pub fn peek(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn marked_indices(&self) -> Vec<usize> {
        (0..self.bits.len()).filter(|&i| self.bits[i]).collect()
    }

    pub fn marked_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn counter(&self) -> &QueryCounter {
        &self.counter
    }

    /// The search predicate `x_i = 1`, charged to this oracle.
    pub fn predicate(&self) -> PredicateOracle<'_> {
        PredicateOracle::new(self.len(), &self.counter, move |i| self.bits[i])
    }
}

impl QueryOracle for BitOracle {
    fn query_count(&self) -> u64 {
        self.counter.count()
    }
}

impl fmt::Debug for BitOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BitOracle")
            .field("len", &self.bits.len())
            .field("marked", &self.marked_count())
            .field("queries", &self.counter.count())
            .finish()
    }
}

/// Black box answering `f(i)` for `i` in `0..N`.
pub struct ValueOracle {
    values: Vec<i64>,
    counter: QueryCounter,
}

impl ValueOracle {
    pub fn new(values: Vec<i64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self {
            values,
            counter: QueryCounter::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn query(&self, i: usize) -> i64 {
        self.counter.charge(1);
        self.values[i]
    }

    /// Simulator-side read; see [`BitOracle::peek`].
    pub fn peek(&self, i: usize) -> i64 {
        self.values[i]
    }

    pub fn counter(&self) -> &QueryCounter {
        &self.counter
    }

    /// Fresh oracle over the same values with its own zeroed counter.
    pub fn shadow(&self) -> ValueOracle {
        ValueOracle {
            values: self.values.clone(),
            counter: QueryCounter::new(),
        }
    }
}

impl QueryOracle for ValueOracle {
    fn query_count(&self) -> u64 {
        self.counter.count()
    }
}

impl fmt::Debug for ValueOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ValueOracle")
            .field("len", &self.values.len())
            .field("queries", &self.counter.count())
            .finish()
    }
}

/// A Boolean predicate over `0..dim`, evaluated through some underlying
/// oracle whose counter pays for it.
///
/// Composite searches (thresholds on a value oracle, restricted domains,
/// "marked and not yet found") are expressed by wrapping the underlying
/// oracle in a closure. Every phase-oracle application and every classical
/// evaluation costs one query on the shared counter.
pub struct PredicateOracle<'a> {
    dim: usize,
    test: Box<dyn Fn(usize) -> bool + 'a>,
    counter: &'a QueryCounter,
}

impl<'a> PredicateOracle<'a> {
    pub fn new(dim: usize, counter: &'a QueryCounter, test: impl Fn(usize) -> bool + 'a) -> Self {
        Self {
            dim,
            test: Box::new(test),
            counter,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Uncharged evaluation, for operator construction only.
    pub fn inspect(&self, i: usize) -> bool {
        (self.test)(i)
    }

    /// Classical evaluation; costs one query.
    pub fn evaluate(&self, i: usize) -> bool {
        self.counter.charge(1);
        (self.test)(i)
    }

    pub fn marked_indices(&self) -> Vec<usize> {
        (0..self.dim).filter(|&i| (self.test)(i)).collect()
    }

    pub fn counter(&self) -> &'a QueryCounter {
        self.counter
    }

    /// One application of the phase oracle `|i> -> (-1)^{p(i)} |i>`.
    pub fn phase_flip(&self, state: &mut StateVector) -> Result<()> {
        if state.dim() != self.dim {
            return Err(Error::InvalidDimension(state.dim()));
        }
        let marked = self.marked_indices();
        state.apply_phase_flip(&marked, self.counter)
    }
}

impl QueryOracle for PredicateOracle<'_> {
    fn query_count(&self) -> u64 {
        self.counter.count()
    }
}

impl fmt::Debug for PredicateOracle<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PredicateOracle")
            .field("dim", &self.dim)
            .field("queries", &self.counter.count())
            .finish()
    }
}
