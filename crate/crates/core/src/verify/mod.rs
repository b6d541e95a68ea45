//! Oracle equivalence, unitarity, tomography and randomized benchmarking.

mod fit;
mod rb;
mod tomography;

use serde::Serialize;

pub use fit::{fit_exponential_decay, FitResult};
pub use rb::{run_rb, Clifford1q, NoiseModel, RBResult};
pub use tomography::tomography_1q;

use crate::arith::ArithInstance;
use crate::circuit::{simulate_sparse, simulate_with};
use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};
use crate::gates::UnitaryMatrix;
use crate::sparse::MAX_SPARSE_QUBITS;

/// Widest instance simulated on the dense engine during exhaustive checks.
/// Wider instances use the sparse engine, which stays exact for basis inputs.
pub const DENSE_CHECK_QUBITS: usize = 16;

/// Largest input space an exhaustive check will enumerate.
pub const MAX_CHECK_INPUTS: u128 = 1 << 24;

/// Observed output must sit on one basis state with modulus within this of 1.
pub const AMPLITUDE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub input: Vec<u64>,
    pub expected: Vec<u64>,
    pub observed: Vec<u64>,
    pub expected_basis: u128,
    /// Most probable basis state of the simulated output.
    pub observed_basis: u128,
    /// Modulus of the expected basis state's amplitude.
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub total_inputs: u64,
    pub mismatches: Vec<Mismatch>,
    pub passed: bool,
}

impl EquivalenceReport {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "passed: {}\ntotal_inputs: {}\nmismatches: {}\n",
            self.passed,
            self.total_inputs,
            self.mismatches.len()
        );
        for m in &self.mismatches {
            s.push_str(&format!(
                "mismatch input={:?} expected={:?} observed={:?} amplitude={:.3e}\n",
                m.input, m.expected, m.observed, m.amplitude
            ));
        }
        s
    }
}

/// Simulate every input tuple of `inst` and compare the decoded outputs with
/// `oracle`. A point passes only if the state is exactly the oracle's basis
/// state: outputs as predicted and every other wire back at 0.
pub fn exhaustive_check<F>(inst: &ArithInstance, oracle: F, exec: Exec) -> Result<EquivalenceReport>
where
    F: Fn(&[u64]) -> Vec<u64> + Sync,
{
    let n = inst.circuit.n_qubits();
    if n > MAX_SPARSE_QUBITS {
        return Err(Error::Resource(format!(
            "{n} qubits exceeds the simulation cap of {MAX_SPARSE_QUBITS}"
        )));
    }
    let total = inst.input_space();
    if total > MAX_CHECK_INPUTS {
        return Err(Error::Resource(format!(
            "{total} inputs exceeds the exhaustive-check cap of {MAX_CHECK_INPUTS}"
        )));
    }
    let results = map_range(exec, total as usize, |k| {
        check_point(inst, &oracle, k as u128)
    });
    let mut mismatches = Vec::new();
    for r in results {
        if let Some(m) = r? {
            mismatches.push(m);
        }
    }
    Ok(EquivalenceReport {
        total_inputs: total as u64,
        passed: mismatches.is_empty(),
        mismatches,
    })
}

fn check_point<F>(inst: &ArithInstance, oracle: &F, k: u128) -> Result<Option<Mismatch>>
where
    F: Fn(&[u64]) -> Vec<u64>,
{
    let input = inst.input_tuple(k);
    let expected = oracle(&input);
    let expected_basis = inst.expected_basis(&expected)?;
    let basis = inst.encode(&input)?;
    let n = inst.circuit.n_qubits();
    let (amplitude, observed_basis) = if n <= DENSE_CHECK_QUBITS {
        let s = simulate_with(&inst.circuit, basis as usize, Exec::Sequential)?;
        let probs = s.probabilities();
        let top = (0..probs.len())
            .max_by(|&a, &b| probs[a].total_cmp(&probs[b]))
            .unwrap_or(0);
        (s.amplitude(expected_basis as usize).norm(), top as u128)
    } else {
        let s = simulate_sparse(&inst.circuit, basis)?;
        let top = s
            .entries()
            .into_iter()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .map_or(0, |e| e.0);
        (s.amplitude(expected_basis).norm(), top)
    };
    if (amplitude - 1.0).abs() <= AMPLITUDE_TOL {
        return Ok(None);
    }
    Ok(Some(Mismatch {
        observed: inst.decode(observed_basis),
        input,
        expected,
        expected_basis,
        observed_basis,
        amplitude,
    }))
}

/// Largest entry of `|U·U† − I|`.
pub fn unitarity_check(m: &UnitaryMatrix) -> f64 {
    m.mul(&m.adjoint())
        .max_abs_diff(&UnitaryMatrix::identity(m.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{build_adder, build_multiplier, ArithKind, TaylorConstants};
    use crate::gates::Gate;
    use num_complex::Complex64;

    #[test]
    fn adder_passes_and_mutant_fails() {
        let add = build_adder(4).unwrap();
        let oracle = ArithKind::Adder.oracle(4, TaylorConstants::default());
        let r = exhaustive_check(&add, &oracle, Exec::default()).unwrap();
        assert!(r.passed);
        assert_eq!(r.total_inputs, 256);

        let k = add
            .circuit
            .ops()
            .iter()
            .position(|g| g.mnemonic() == "cnot")
            .unwrap();
        let mut ops = add.circuit.ops().to_vec();
        ops.remove(k);
        let broken = ArithInstance {
            circuit: add.circuit.with_ops(ops).unwrap(),
            ..add
        };
        let r = exhaustive_check(&broken, &oracle, Exec::Sequential).unwrap();
        assert!(!r.passed && !r.mismatches.is_empty());
    }

    #[test]
    fn multiplier_two_bits() {
        let mul = build_multiplier(2).unwrap();
        let r = exhaustive_check(
            &mul,
            |v: &[u64]| vec![v[0] * v[1], v[0], v[1]],
            Exec::default(),
        )
        .unwrap();
        assert!(r.passed);
        assert_eq!(r.total_inputs, 16);
    }

    #[test]
    fn unitarity_examples() {
        assert!(unitarity_check(&Gate::H(0).matrix()) < 1e-15);
        assert!(unitarity_check(&Gate::T(0).matrix()) < 1e-15);
        let mut h = Gate::H(0).matrix();
        let v = h.get(0, 0) + Complex64::new(1e-3, 0.0);
        h.set(0, 0, v);
        assert!(unitarity_check(&h) >= 1e-4);
    }
}
