//! Sparse statevector for registers wider than the dense cap.
//!
//! Only nonzero amplitudes are stored, keyed by basis index. Reversible
//! arithmetic keeps a basis input on a single basis state, and a lowered
//! Toffoli opens at most a two-branch superposition that its closing H
//! recombines, so circuits far wider than 24 qubits remain cheap as long as
//! the support stays small. The support size is capped.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;

use crate::error::{domain, Error, Result};
use crate::gates::Gate;
use crate::rng;

/// Widest register representable with `u128` basis keys.
pub const MAX_SPARSE_QUBITS: usize = 128;

/// Largest support tolerated before giving up.
pub const MAX_SUPPORT: usize = 1 << 20;

/// Amplitudes smaller than this are dropped after interference.
const PRUNE_TOL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct SparseState {
    n_qubits: usize,
    amps: HashMap<u128, Complex64>,
}

impl SparseState {
    pub fn new_basis_state(n_qubits: usize, basis: u128) -> Result<Self> {
        if n_qubits == 0 {
            return domain("a state needs at least one qubit");
        }
        if n_qubits > MAX_SPARSE_QUBITS {
            return Err(Error::Resource(format!(
                "{n_qubits} qubits exceeds the sparse simulation cap of {MAX_SPARSE_QUBITS}"
            )));
        }
        if n_qubits < 128 && basis >> n_qubits != 0 {
            return domain(format!(
                "basis index {basis} out of range for {n_qubits} qubits"
            ));
        }
        let mut amps = HashMap::new();
        amps.insert(basis, Complex64::new(1.0, 0.0));
        Ok(SparseState { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn support(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, basis: u128) -> Complex64 {
        self.amps.get(&basis).copied().unwrap_or_default()
    }

    /// Nonzero amplitudes sorted by basis index.
    pub fn entries(&self) -> Vec<(u128, Complex64)> {
        let mut v: Vec<_> = self.amps.iter().map(|(&k, &a)| (k, a)).collect();
        v.sort_by_key(|e| e.0);
        v
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn basis_readout(&self, tol: f64) -> Option<u128> {
        let (&idx, amp) = self
            .amps
            .iter()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))?;
        ((amp.norm() - 1.0).abs() <= tol).then_some(idx)
    }

    /// Draw `shots` basis outcomes; counts keyed by basis index.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<BTreeMap<u128, u64>> {
        if shots == 0 {
            return domain("shots must be at least 1");
        }
        let entries = self.entries();
        let dist = WeightedIndex::new(entries.iter().map(|e| e.1.norm_sqr()))
            .map_err(|e| Error::Domain(format!("cannot sample state: {e}")))?;
        let mut rng = rng::seeded(seed);
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            *counts.entry(entries[dist.sample(&mut rng)].0).or_insert(0) += 1;
        }
        Ok(counts)
    }

    pub fn apply_gate_mut(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        if gate.is_classical() {
            self.amps = self
                .amps
                .drain()
                .map(|(k, a)| (gate.apply_to_basis(k).expect("classical gate"), a))
                .collect();
            return Ok(());
        }
        let r = FRAC_1_SQRT_2;
        let diag = |q: usize, d: Complex64, amps: &mut HashMap<u128, Complex64>| {
            for (k, a) in amps.iter_mut() {
                if (k >> q) & 1 == 1 {
                    *a *= d;
                }
            }
        };
        match *gate {
            Gate::T(q) => diag(q, Complex64::new(r, r), &mut self.amps),
            Gate::Tdg(q) => diag(q, Complex64::new(r, -r), &mut self.amps),
            Gate::S(q) => diag(q, Complex64::new(0.0, 1.0), &mut self.amps),
            Gate::Sdg(q) => diag(q, Complex64::new(0.0, -1.0), &mut self.amps),
            Gate::H(q) => {
                let mask = 1u128 << q;
                let mut next: HashMap<u128, Complex64> =
                    HashMap::with_capacity(self.amps.len() * 2);
                for (&k, &a) in &self.amps {
                    let sign = if k & mask != 0 { -1.0 } else { 1.0 };
                    *next.entry(k & !mask).or_default() += a * r;
                    *next.entry(k | mask).or_default() += a * (r * sign);
                }
                next.retain(|_, a| a.norm() > PRUNE_TOL);
                if next.len() > MAX_SUPPORT {
                    return Err(Error::Resource(format!(
                        "sparse support {} exceeds {MAX_SUPPORT}",
                        next.len()
                    )));
                }
                self.amps = next;
            }
            _ => unreachable!("classical gates handled above"),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::decompose_toffoli;

    #[test]
    fn lowered_toffoli_on_wide_register_stays_a_basis_state() {
        let n = 100;
        let input = (1u128 << 97) | (1u128 << 42);
        let mut s = SparseState::new_basis_state(n, input).unwrap();
        for g in decompose_toffoli(97, 42, 5) {
            s.apply_gate_mut(&g).unwrap();
            assert!(s.support() <= 2);
        }
        assert_eq!(s.basis_readout(1e-10), Some(input | (1 << 5)));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bounds_are_checked() {
        assert!(matches!(
            SparseState::new_basis_state(129, 0),
            Err(Error::Resource(_))
        ));
        assert!(SparseState::new_basis_state(3, 8).is_err());
        let mut s = SparseState::new_basis_state(3, 0).unwrap();
        assert!(s.apply_gate_mut(&Gate::H(3)).is_err());
    }

    #[test]
    fn hadamard_pair_cancels() {
        let mut s = SparseState::new_basis_state(2, 0b10).unwrap();
        s.apply_gate_mut(&Gate::H(0)).unwrap();
        assert_eq!(s.support(), 2);
        s.apply_gate_mut(&Gate::H(0)).unwrap();
        assert_eq!(s.support(), 1);
        assert_eq!(s.basis_readout(1e-12), Some(0b10));
    }

    #[test]
    fn sampling_a_wide_bell_pair() {
        let mut s = SparseState::new_basis_state(40, 0).unwrap();
        s.apply_gate_mut(&Gate::H(39)).unwrap();
        s.apply_gate_mut(&Gate::cnot(39, 0)).unwrap();
        let counts = s.sample(1000, 5).unwrap();
        let keys: Vec<u128> = counts.keys().copied().collect();
        assert_eq!(keys, [0, (1u128 << 39) | 1]);
        assert_eq!(counts.values().sum::<u64>(), 1000);
        assert!(s.sample(0, 5).is_err());
    }
}
