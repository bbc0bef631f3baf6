//! Verifier side of the test, the classical baseline prover, and a
//! brute-force simulator of the honest quantum prover for small programs.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{check_len, Error, Result};
use crate::gf2::BitVec;
use crate::xprogram::{SecretKey, XProgram};

/// `cos²(π/8)`, the honest prover's probability of an orthogonal sample.
pub fn quantum_bias() -> f64 {
    (std::f64::consts::FRAC_PI_8).cos().powi(2)
}

/// Probability of an orthogonal sample under the baseline strategy.
pub const BASELINE_BIAS: f64 = 0.75;

pub const MAX_SIMULATED_TERMS: usize = 24;
pub const MAX_SIMULATED_QUBITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifierPolicy {
    /// Samples requested from the prover.
    pub sample_count: usize,
    /// Minimum orthogonal fraction for a pass.
    pub threshold: f64,
}

impl Default for VerifierPolicy {
    fn default() -> Self {
        Self {
            sample_count: 10_000,
            threshold: (BASELINE_BIAS + quantum_bias()) / 2.0,
        }
    }
}

impl VerifierPolicy {
    pub fn new(sample_count: usize, threshold: f64) -> Result<Self> {
        if sample_count == 0 || !(threshold > 0.0 && threshold < 1.0) {
            return Err(Error::Parameter(format!(
                "need sample_count >= 1 and 0 < threshold < 1, got {sample_count} and {threshold}"
            )));
        }
        Ok(Self {
            sample_count,
            threshold,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub orthogonal_fraction: f64,
    pub threshold: f64,
    pub pass: bool,
    pub sample_count: usize,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "fraction={} threshold={} pass={}",
            self.orthogonal_fraction, self.threshold, self.pass
        )
    }
}

/// Fraction of samples orthogonal to the key, compared with the policy
/// threshold. Every sample must have the key's length.
pub fn verify(key: &SecretKey, samples: &[BitVec], policy: &VerifierPolicy) -> Result<Verdict> {
    if samples.is_empty() {
        return Err(Error::Parameter("no samples to verify".into()));
    }
    let mut orthogonal = 0usize;
    for x in samples {
        check_len(key.len(), x.len())?;
        if !x.dot(key.bits())? {
            orthogonal += 1;
        }
    }
    let fraction = orthogonal as f64 / samples.len() as f64;
    Ok(Verdict {
        orthogonal_fraction: fraction,
        threshold: policy.threshold,
        pass: fraction >= policy.threshold,
        sample_count: samples.len(),
    })
}

/// XOR of the rows non-orthogonal to both of two uniformly random vectors.
pub fn baseline_sample<R: Rng + ?Sized>(prog: &XProgram, rng: &mut R) -> BitVec {
    let n = prog.qubits();
    let d = BitVec::random(n, rng);
    let e = BitVec::random(n, rng);
    baseline_sample_with(prog, &d, &e).expect("d, e sized to program")
}

pub fn baseline_sample_with(prog: &XProgram, d: &BitVec, e: &BitVec) -> Result<BitVec> {
    let p = prog.matrix();
    check_len(p.ncols(), d.len())?;
    check_len(p.ncols(), e.len())?;
    let mut y = BitVec::zeros(p.ncols());
    for row in p.rows() {
        if row.dot(d)? && row.dot(e)? {
            y.add_into(row)?;
        }
    }
    Ok(y)
}

/// Output amplitudes of `exp(iθH)|0…0⟩` for every basis state.
///
/// Index `x` of the table is the basis state whose bit `j` is bit `j` of `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Amplitudes {
    qubits: usize,
    values: Vec<Complex64>,
}

impl Amplitudes {
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, x: &BitVec) -> Result<Complex64> {
        check_len(self.qubits, x.len())?;
        Ok(self.values[index_of(x)])
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.values.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn total_probability(&self) -> f64 {
        self.values.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability of measuring some `x` with `x · s = 0`.
    pub fn orthogonal_mass(&self, s: &BitVec) -> Result<f64> {
        check_len(self.qubits, s.len())?;
        let mask = index_of(s);
        Ok(self
            .values
            .iter()
            .enumerate()
            .filter(|(x, _)| (x & mask).count_ones().is_multiple_of(2))
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Draws `count` outcomes by inverse CDF over the outcome table.
    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<BitVec> {
        let mut cdf = Vec::with_capacity(self.values.len());
        let mut acc = 0.0;
        for a in &self.values {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        (0..count)
            .map(|_| {
                let u = rng.random::<f64>() * acc;
                let x = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
                state_of(x, self.qubits)
            })
            .collect()
    }
}

fn index_of(x: &BitVec) -> usize {
    x.iter_ones().fold(0, |acc, j| acc | (1 << j))
}

fn state_of(x: usize, qubits: usize) -> BitVec {
    BitVec::from_fn(qubits, |j| (x >> j) & 1 == 1)
}

fn size_guard(prog: &XProgram) -> Result<()> {
    if prog.terms() > MAX_SIMULATED_TERMS || prog.qubits() > MAX_SIMULATED_QUBITS {
        return Err(Error::SizeGuard(format!(
            "m={} n={} exceeds m <= {MAX_SIMULATED_TERMS}, n <= {MAX_SIMULATED_QUBITS}",
            prog.terms(),
            prog.qubits()
        )));
    }
    Ok(())
}

/// Exact amplitudes by applying `cos θ + i sin θ X^p` for each row `p`.
///
/// The terms commute, so the row order only affects rounding.
pub fn quantum_amplitudes(prog: &XProgram) -> Result<Amplitudes> {
    size_guard(prog)?;
    let n = prog.qubits();
    let theta = prog.theta().radians();
    let (c, s) = (Complex64::new(theta.cos(), 0.0), Complex64::new(0.0, theta.sin()));
    let mut state = vec![Complex64::new(0.0, 0.0); 1 << n];
    state[0] = Complex64::new(1.0, 0.0);
    let mut next = state.clone();
    for row in prog.matrix().rows() {
        let flip = index_of(row);
        for (x, out) in next.iter_mut().enumerate() {
            *out = c * state[x] + s * state[x ^ flip];
        }
        std::mem::swap(&mut state, &mut next);
    }
    Ok(Amplitudes {
        qubits: n,
        values: state,
    })
}

/// i.i.d. samples from the honest prover's output distribution.
pub fn quantum_sample<R: Rng + ?Sized>(prog: &XProgram, count: usize, rng: &mut R) -> Result<Vec<BitVec>> {
    Ok(quantum_amplitudes(prog)?.sample(count, rng))
}
