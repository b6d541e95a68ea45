//! Dense statevector simulation.
//!
//! Qubit `k` is bit `k` of the basis index (qubit 0 least significant), so an
//! arithmetic register occupying qubits `base..base+w` reads out as
//! `(index >> base) & (2^w - 1)`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exec::{for_each_chunk_mut, Exec};
use crate::gates::Gate;
use crate::rng;

pub type Amplitude = Complex64;

/// Largest register the dense engine accepts (2^24 amplitudes).
pub const MAX_DENSE_QUBITS: usize = 24;

/// Normalization tolerance.
pub const NORM_TOL: f64 = 1e-10;

/// Amplitudes below this modulus are treated as zero when picking a phase
/// reference or reading out basis states.
const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Amplitude>,
}

/// Histogram of sampled basis outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementCounts {
    pub shots: u64,
    pub counts: BTreeMap<usize, u64>,
}

impl MeasurementCounts {
    pub fn get(&self, basis: usize) -> u64 {
        self.counts.get(&basis).copied().unwrap_or(0)
    }
}

fn check_cap(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::Resource(format!(
            "{n_qubits} qubits exceeds the dense simulation cap of {MAX_DENSE_QUBITS}"
        )));
    }
    Ok(())
}

impl StateVector {
    /// `|basis_index>` on `n_qubits` qubits.
    pub fn new_basis_state(n_qubits: usize, basis_index: usize) -> Result<Self> {
        if n_qubits == 0 {
            return domain("a state needs at least one qubit");
        }
        check_cap(n_qubits)?;
        let dim = 1usize << n_qubits;
        if basis_index >= dim {
            return domain(format!(
                "basis index {basis_index} out of range for {n_qubits} qubits"
            ));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[basis_index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// Wrap raw amplitudes. The length must be a power of two and the vector
    /// normalized within [`NORM_TOL`].
    pub fn from_amplitudes(amps: Vec<Amplitude>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return domain(format!("amplitude count {len} is not a power of two >= 2"));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_cap(n_qubits)?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return domain("amplitudes must be finite");
        }
        let s = StateVector { n_qubits, amps };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return domain(format!("state is not normalized (norm^2 = {norm})"));
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn amplitude(&self, basis: usize) -> Amplitude {
        self.amps[basis]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Returns a new state with `gate` applied.
    pub fn apply_gate(&self, gate: &Gate) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_gate_mut(gate, Exec::default())?;
        Ok(out)
    }

    /// In-place application for single-owner hot loops.
    pub fn apply_gate_mut(&mut self, gate: &Gate, exec: Exec) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let amps = &mut self.amps;
        let r = std::f64::consts::FRAC_1_SQRT_2;
        match *gate {
            Gate::H(q) => butterfly(exec, amps, q, |a, b| ((a + b) * r, (a - b) * r)),
            Gate::T(q) => phase(exec, amps, q, Complex64::new(r, r)),
            Gate::Tdg(q) => phase(exec, amps, q, Complex64::new(r, -r)),
            Gate::S(q) => phase(exec, amps, q, Complex64::new(0.0, 1.0)),
            Gate::Sdg(q) => phase(exec, amps, q, Complex64::new(0.0, -1.0)),
            Gate::X(q) => controlled_flip(exec, amps, q, 0),
            Gate::Cnot { control, target } => controlled_flip(exec, amps, target, 1 << control),
            Gate::Toffoli { c1, c2, target } => {
                controlled_flip(exec, amps, target, (1 << c1) | (1 << c2))
            }
            Gate::Swap(a, b) => controlled_swap(exec, amps, a, b, 0),
            Gate::Fredkin { control, t1, t2 } => controlled_swap(exec, amps, t1, t2, 1 << control),
        }
        Ok(())
    }

    /// `p_j = |c_j|^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Draw `shots` i.i.d. basis outcomes from [`Self::probabilities`].
    pub fn sample(&self, shots: u64, seed: u64) -> Result<MeasurementCounts> {
        if shots == 0 {
            return domain("shots must be at least 1");
        }
        let dist = WeightedIndex::new(self.probabilities())
            .map_err(|e| Error::Domain(format!("cannot sample state: {e}")))?;
        let mut rng = rng::seeded(seed);
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            *counts.entry(dist.sample(&mut rng)).or_insert(0) += 1;
        }
        Ok(MeasurementCounts { shots, counts })
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Amplitude> {
        if self.n_qubits != other.n_qubits {
            return domain(format!(
                "inner product of {}-qubit and {}-qubit states",
                self.n_qubits, other.n_qubits
            ));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`, clamped to `[0, 1]`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner_product(other)?.norm_sqr().clamp(0.0, 1.0))
    }

    /// Copy with the first non-negligible amplitude rotated onto the positive
    /// real axis.
    pub fn phase_canonical(&self) -> StateVector {
        let mut out = self.clone();
        if let Some(pivot) = self.amps.iter().find(|a| a.norm() > ZERO_TOL) {
            let rot = pivot.conj() / pivot.norm();
            for a in &mut out.amps {
                *a *= rot;
            }
        }
        out
    }

    /// Entrywise equality after removing global phase.
    pub fn approx_eq_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        if self.n_qubits != other.n_qubits {
            return false;
        }
        let a = self.phase_canonical();
        let b = other.phase_canonical();
        a.amps
            .iter()
            .zip(&b.amps)
            .all(|(x, y)| (x - y).norm() <= tol)
    }

    /// Index of the basis state this vector equals (up to phase), if its
    /// largest amplitude has modulus within `tol` of 1.
    pub fn basis_readout(&self, tol: f64) -> Option<usize> {
        let (idx, amp) = self
            .amps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))?;
        ((amp.norm() - 1.0).abs() <= tol).then_some(idx)
    }

    /// Single-qubit angles in the `c0 = cos θ`, `c1 = e^{iφ} sin θ`
    /// parameterization (θ in `[0, π/2]`, not the half-angle form).
    pub fn bloch_coords(&self) -> Result<(f64, f64)> {
        if self.n_qubits != 1 {
            return domain(format!(
                "bloch coordinates need a 1-qubit state, got {}",
                self.n_qubits
            ));
        }
        let (c0, c1) = (self.amps[0], self.amps[1]);
        let theta = c1.norm().atan2(c0.norm());
        let phi = if theta.sin() < ZERO_TOL {
            0.0
        } else {
            let rel = if c0.norm() > ZERO_TOL {
                c1.arg() - c0.arg()
            } else {
                0.0
            };
            let p = rel.rem_euclid(TAU);
            if p >= TAU {
                0.0
            } else {
                p
            }
        };
        debug_assert!((0.0..=PI / 2.0 + 1e-15).contains(&theta));
        Ok((theta, phi))
    }

    /// Cartesian Bloch vector `(⟨X⟩, ⟨Y⟩, ⟨Z⟩)` of a single-qubit state.
    pub fn bloch_vector(&self) -> Result<[f64; 3]> {
        let (theta, phi) = self.bloch_coords()?;
        let s = (2.0 * theta).sin();
        Ok([s * phi.cos(), s * phi.sin(), (2.0 * theta).cos()])
    }
}

fn butterfly<F>(exec: Exec, amps: &mut [Amplitude], q: usize, f: F)
where
    F: Fn(Amplitude, Amplitude) -> (Amplitude, Amplitude) + Sync + Send,
{
    let half = 1usize << q;
    for_each_chunk_mut(exec, amps, half << 1, |_, chunk| {
        let (lo, hi) = chunk.split_at_mut(half);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = f(*a, *b);
            *a = x;
            *b = y;
        }
    });
}

fn phase(exec: Exec, amps: &mut [Amplitude], q: usize, d: Amplitude) {
    let half = 1usize << q;
    for_each_chunk_mut(exec, amps, half << 1, |_, chunk| {
        for b in &mut chunk[half..] {
            *b *= d;
        }
    });
}

/// Swap the `target = 0/1` pair wherever every bit of `controls` is set.
fn controlled_flip(exec: Exec, amps: &mut [Amplitude], target: usize, controls: usize) {
    let half = 1usize << target;
    for_each_chunk_mut(exec, amps, half << 1, |off, chunk| {
        let (lo, hi) = chunk.split_at_mut(half);
        for j in 0..half {
            if (off + j) & controls == controls {
                std::mem::swap(&mut lo[j], &mut hi[j]);
            }
        }
    });
}

/// Exchange bits `a` and `b` wherever every bit of `controls` is set.
fn controlled_swap(exec: Exec, amps: &mut [Amplitude], a: usize, b: usize, controls: usize) {
    let (h, l) = (a.max(b), a.min(b));
    let half = 1usize << h;
    let low = 1usize << l;
    for_each_chunk_mut(exec, amps, half << 1, |off, chunk| {
        let (lo, hi) = chunk.split_at_mut(half);
        // lo[j] has bit h = 0; pick entries with bit l = 1, whose partner
        // (h = 1, l = 0) sits at hi[j - low].
        for j in 0..half {
            if j & low != 0 && (off + j) & controls == controls {
                std::mem::swap(&mut lo[j], &mut hi[j - low]);
            }
        }
    });
}
