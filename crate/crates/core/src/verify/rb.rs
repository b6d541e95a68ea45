//! Single-qubit randomized benchmarking.
//!
//! Each shot draws its own noise trajectory. Because Paulis are Cliffords,
//! a trajectory is just a product in the 24-element Clifford group, tracked
//! as an index into a multiplication table; only the final element touches
//! amplitudes, through its |0⟩ survival probability.

use num_complex::Complex64;
use rand::Rng as _;
use serde::Serialize;

use super::fit::fit_exponential_decay;
use crate::error::{domain, Result};
use crate::exec::{map_range, Exec};
use crate::gates::Gate;
use crate::rng;

/// Depolarizing noise: after every Clifford, with probability
/// `depolarizing_prob`, a Pauli drawn uniformly from {I, X, Y, Z} is applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseModel {
    pub depolarizing_prob: f64,
}

impl NoiseModel {
    pub fn new(depolarizing_prob: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&depolarizing_prob) {
            return domain(format!(
                "depolarizing probability {depolarizing_prob} outside [0, 1]"
            ));
        }
        Ok(NoiseModel { depolarizing_prob })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RBResult {
    pub lengths: Vec<usize>,
    pub mean_fidelity: Vec<f64>,
    pub fit_a: f64,
    pub fit_b: f64,
    pub fit_p: f64,
    /// `(1 − p) / 2`.
    pub error_per_gate: f64,
}

impl RBResult {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (m, f) in self.lengths.iter().zip(&self.mean_fidelity) {
            s.push_str(&format!("length {m}: {f:.6}\n"));
        }
        s.push_str(&format!(
            "fit_a: {:.6}\nfit_b: {:.6}\nfit_p: {:.6}\nerror_per_gate: {:.6}\n",
            self.fit_a, self.fit_b, self.fit_p, self.error_per_gate
        ));
        s
    }
}

type Mat2 = [Complex64; 4];

fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

fn same_up_to_phase(x: &Mat2, y: &Mat2) -> bool {
    let k = (0..4)
        .max_by(|&i, &j| x[i].norm().total_cmp(&x[j].norm()))
        .unwrap();
    if y[k].norm() < 1e-9 {
        return false;
    }
    let phase = x[k] / y[k];
    (0..4).all(|i| (x[i] - phase * y[i]).norm() < 1e-9)
}

fn gate_mat(g: Gate) -> Mat2 {
    let m = g.matrix();
    [m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)]
}

/// The single-qubit Clifford group modulo global phase.
#[derive(Debug, Clone)]
pub struct Clifford1q {
    elements: Vec<Mat2>,
    /// `table[i][j]` is the index of `elements[i] · elements[j]`.
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    survival: Vec<f64>,
    paulis: [usize; 4],
}

impl Clifford1q {
    /// Close {H, S} under multiplication.
    pub fn new() -> Self {
        let gens = [gate_mat(Gate::H(0)), gate_mat(Gate::S(0))];
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::default();
        let mut elements: Vec<Mat2> = vec![[one, zero, zero, one]];
        let mut frontier = 0;
        while frontier < elements.len() {
            let e = elements[frontier];
            for g in &gens {
                let p = mat_mul(g, &e);
                if !elements.iter().any(|x| same_up_to_phase(x, &p)) {
                    elements.push(p);
                }
            }
            frontier += 1;
        }
        let find = |m: &Mat2| {
            elements
                .iter()
                .position(|x| same_up_to_phase(x, m))
                .expect("group is closed")
        };
        let table: Vec<Vec<usize>> = elements
            .iter()
            .map(|x| elements.iter().map(|y| find(&mat_mul(x, y))).collect())
            .collect();
        let inverse = (0..elements.len())
            .map(|i| {
                table[i]
                    .iter()
                    .position(|&k| k == 0)
                    .expect("group has inverses")
            })
            .collect();
        let survival = elements
            .iter()
            .map(|m| {
                let s = m[0].norm_sqr();
                [0.0, 0.5, 1.0]
                    .into_iter()
                    .find(|v| (s - v).abs() < 1e-9)
                    .unwrap_or(s)
            })
            .collect();
        let i = Complex64::new(0.0, 1.0);
        let paulis = [
            0,
            find(&[zero, one, one, zero]),
            find(&[zero, -i, i, zero]),
            find(&[one, zero, zero, -one]),
        ];
        Clifford1q {
            elements,
            table,
            inverse,
            survival,
            paulis,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Index of `elements[i] · elements[j]`.
    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverse[i]
    }

    /// Indices of I, X, Y, Z.
    pub fn paulis(&self) -> [usize; 4] {
        self.paulis
    }

    /// `|⟨0|C|0⟩|²`.
    pub fn survival(&self, i: usize) -> f64 {
        self.survival[i]
    }

    pub fn matrix(&self, i: usize) -> [Complex64; 4] {
        self.elements[i]
    }
}

impl Default for Clifford1q {
    fn default() -> Self {
        Self::new()
    }
}

/// Randomized benchmarking of one qubit.
///
/// For each length `m`, `n_sequences` random Clifford words of length `m`
/// are drawn and closed with their exact inverse. Each word is run `shots`
/// times with fresh noise and measured; survival of |0⟩ is averaged, and the
/// per-length means are fitted to `A·p^m + B`. Sequence `k` draws from its
/// own stream of `seed`, so results do not depend on scheduling.
pub fn run_rb(
    noise: NoiseModel,
    lengths: &[usize],
    n_sequences: usize,
    shots: u64,
    seed: u64,
    exec: Exec,
) -> Result<RBResult> {
    NoiseModel::new(noise.depolarizing_prob)?;
    if lengths.is_empty() {
        return domain("lengths must be nonempty");
    }
    if lengths.windows(2).any(|w| w[0] >= w[1]) {
        return domain("lengths must be strictly increasing");
    }
    if n_sequences == 0 || shots == 0 {
        return domain("sequences and shots must be at least 1");
    }
    let group = Clifford1q::new();
    let d = noise.depolarizing_prob;
    let per_seq = map_range(exec, lengths.len() * n_sequences, |k| {
        let m = lengths[k / n_sequences];
        let mut r = rng::stream(seed, k as u64);
        let word: Vec<usize> = (0..m).map(|_| r.random_range(0..group.len())).collect();
        let ideal = word.iter().fold(0, |acc, &c| group.compose(c, acc));
        let mut steps = word;
        steps.push(group.inverse(ideal));
        let mut survived = 0u64;
        for _ in 0..shots {
            let mut g = 0;
            for &c in &steps {
                g = group.compose(c, g);
                if d > 0.0 && r.random_bool(d) {
                    g = group.compose(group.paulis[r.random_range(0..4)], g);
                }
            }
            if r.random_bool(group.survival(g)) {
                survived += 1;
            }
        }
        survived as f64 / shots as f64
    });
    let mean_fidelity: Vec<f64> = per_seq
        .chunks(n_sequences)
        .map(|c| c.iter().sum::<f64>() / n_sequences as f64)
        .collect();
    let points: Vec<(usize, f64)> = lengths
        .iter()
        .copied()
        .zip(mean_fidelity.iter().copied())
        .collect();
    let fit = fit_exponential_decay(&points)?;
    Ok(RBResult {
        lengths: lengths.to_vec(),
        mean_fidelity,
        fit_a: fit.a,
        fit_b: fit.b,
        fit_p: fit.p,
        error_per_gate: (1.0 - fit.p) / 2.0,
    })
}
