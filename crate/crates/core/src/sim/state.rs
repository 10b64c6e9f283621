use num_complex::Complex64;
use rand::Rng;

use super::{QueryCounter, MEASURE_TOLERANCE, RENORMALIZE_THRESHOLD};
use crate::error::{Error, Result};

/// Normalized amplitudes over a fixed finite basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Equal superposition `1/sqrt(n)` over every basis index.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let a = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        Ok(Self { amps: vec![a; n] })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if index >= n {
            return Err(Error::IndexOutOfRange { index, dim: n });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Wraps amplitudes that are already normalized to within `1e-9`.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        let s = Self { amps };
        let n = s.norm_sqr();
        if (n - 1.0).abs() > RENORMALIZE_THRESHOLD {
            return Err(Error::Normalization(n));
        }
        Ok(s)
    }

    /// Scales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        let mut s = Self { amps };
        let n = s.norm_sqr();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Normalization(n));
        }
        s.scale(1.0 / n.sqrt());
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Raw access for operators implemented outside this module. Callers
    /// must keep the map unitary.
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn amplitude(&self, i: usize) -> Complex64 {
        self.amps[i]
    }

    pub fn probability(&self, i: usize) -> f64 {
        self.amps[i].norm_sqr()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Compensated sum, so the check stays tight for large dimensions.
    pub fn norm_sqr(&self) -> f64 {
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for a in &self.amps {
            let x = a.norm_sqr();
            let t = sum + x;
            if sum.abs() >= x.abs() {
                comp += (sum - t) + x;
            } else {
                comp += (x - t) + sum;
            }
            sum = t;
        }
        sum + comp
    }

    /// Squared norm of the projection onto the listed basis indices.
    pub fn subspace_probability(&self, indices: &[usize]) -> f64 {
        indices.iter().map(|&i| self.amps[i].norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn check_indices(&self, indices: &[usize]) -> Result<()> {
        let dim = self.dim();
        match indices.iter().find(|&&i| i >= dim) {
            Some(&index) => Err(Error::IndexOutOfRange { index, dim }),
            None => Ok(()),
        }
    }

    /// Negates the marked amplitudes. One oracle application, one query.
    pub fn apply_phase_flip(&mut self, marked: &[usize], counter: &QueryCounter) -> Result<()> {
        self.check_indices(marked)?;
        for &i in marked {
            self.amps[i] = -self.amps[i];
        }
        counter.charge(1);
        Ok(())
    }

    /// Multiplies the marked amplitudes by `e^{i phi}`; also one query.
    pub fn apply_marked_phase(
        &mut self,
        marked: &[usize],
        phi: f64,
        counter: &QueryCounter,
    ) -> Result<()> {
        self.check_indices(marked)?;
        let w = Complex64::from_polar(1.0, phi);
        for &i in marked {
            self.amps[i] *= w;
        }
        counter.charge(1);
        Ok(())
    }

    fn mean(&self) -> Complex64 {
        self.amps.iter().sum::<Complex64>() / self.amps.len() as f64
    }

    /// Inversion about the mean, `2|u><u| - I`. Not a query.
    pub fn apply_diffusion(&mut self) {
        let m2 = self.mean() * 2.0;
        for a in &mut self.amps {
            *a = m2 - *a;
        }
    }

    /// `(1 - e^{i psi})|u><u| - I`; reduces to [`apply_diffusion`] at
    /// `psi = pi`.
    ///
    /// [`apply_diffusion`]: StateVector::apply_diffusion
    pub fn apply_phased_diffusion(&mut self, psi: f64) {
        let c = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, psi)) * self.mean();
        for a in &mut self.amps {
            *a = c - *a;
        }
    }

    /// `2|v><v| - I` for a normalized `v` of the same dimension.
    pub fn reflect_about(&mut self, v: &StateVector) -> Result<()> {
        if v.dim() != self.dim() {
            return Err(Error::InvalidDimension(v.dim()));
        }
        let c = v.inner(self) * 2.0;
        for (a, b) in self.amps.iter_mut().zip(&v.amps) {
            *a = c * b - *a;
        }
        Ok(())
    }

    /// `2|i><i| - I`.
    pub fn reflect_about_basis(&mut self, index: usize) -> Result<()> {
        self.check_indices(&[index])?;
        for (j, a) in self.amps.iter_mut().enumerate() {
            if j != index {
                *a = -*a;
            }
        }
        Ok(())
    }

    pub fn negate(&mut self) {
        for a in &mut self.amps {
            *a = -*a;
        }
    }

    fn scale(&mut self, s: f64) {
        for a in &mut self.amps {
            *a *= s;
        }
    }

    /// Renormalizes if the squared norm drifted past `1e-9`.
    pub fn settle(&mut self) {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > RENORMALIZE_THRESHOLD {
            debug_assert!((n - 1.0).abs() < MEASURE_TOLERANCE, "norm drift {n}");
            self.scale(1.0 / n.sqrt());
        }
    }

    /// Samples a basis index with probability `|a_i|^2`.
    pub fn measure<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > MEASURE_TOLERANCE {
            return Err(Error::Normalization(n));
        }
        let r: f64 = rng.gen::<f64>() * n;
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = i;
            }
            acc += p;
            if r < acc {
                return Ok(i);
            }
        }
        Ok(last_nonzero)
    }
}
