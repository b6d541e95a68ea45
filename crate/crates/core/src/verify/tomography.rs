use rand::Rng as _;

use crate::circuit::{simulate_with, Circuit};
use crate::error::{domain, Result};
use crate::exec::Exec;
use crate::gates::Gate;
use crate::rng;

/// Estimate the Bloch vector of `prep|0⟩` by rotating each axis onto Z and
/// sampling `shots_per_axis` measurements per axis.
pub fn tomography_1q(prep: &Circuit, shots_per_axis: u64, seed: u64) -> Result<[f64; 3]> {
    if prep.n_qubits() != 1 {
        return domain(format!(
            "tomography needs a 1-qubit preparation, got {} qubits",
            prep.n_qubits()
        ));
    }
    if shots_per_axis == 0 {
        return domain("shots_per_axis must be at least 1");
    }
    let state = simulate_with(prep, 0, Exec::Sequential)?;
    let rotations: [&[Gate]; 3] = [&[Gate::H(0)], &[Gate::Sdg(0), Gate::H(0)], &[]];
    let mut seeds = rng::seeded(seed);
    let mut v = [0.0; 3];
    for (axis, rot) in rotations.iter().enumerate() {
        let mut s = state.clone();
        for g in *rot {
            s.apply_gate_mut(g, Exec::Sequential)?;
        }
        let counts = s.sample(shots_per_axis, seeds.random())?;
        let (n0, n1) = (counts.get(0) as f64, counts.get(1) as f64);
        v[axis] = (n0 - n1) / shots_per_axis as f64;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prep(ops: Vec<Gate>) -> Circuit {
        Circuit::from_ops(1, ops).unwrap()
    }

    #[test]
    fn poles_and_equator() {
        let z = tomography_1q(&prep(vec![]), 10_000, 1).unwrap();
        assert!((z[2] - 1.0).abs() < 0.05 && z[0].abs() < 0.05 && z[1].abs() < 0.05);
        let one = tomography_1q(&prep(vec![Gate::X(0)]), 10_000, 2).unwrap();
        assert!((one[2] + 1.0).abs() < 0.05);
        let plus = tomography_1q(&prep(vec![Gate::H(0)]), 10_000, 3).unwrap();
        assert!((plus[0] - 1.0).abs() < 0.05 && plus[2].abs() < 0.05);
        let plus_i = tomography_1q(&prep(vec![Gate::H(0), Gate::S(0)]), 10_000, 4).unwrap();
        assert!((plus_i[1] - 1.0).abs() < 0.05);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(tomography_1q(&Circuit::empty(2), 10, 0).is_err());
        assert!(tomography_1q(&prep(vec![]), 0, 0).is_err());
    }

    #[test]
    fn seeded_runs_repeat() {
        let c = prep(vec![Gate::H(0), Gate::T(0)]);
        assert_eq!(
            tomography_1q(&c, 500, 9).unwrap(),
            tomography_1q(&c, 500, 9).unwrap()
        );
    }
}
