//! The Clifford+T gate set plus the reversible multi-qubit gates built on it.
//!
//! Matrix convention: [`Gate::matrix`] returns the gate's local matrix with the
//! *first listed operand as the most significant bit*, the layout used in the
//! usual textbook pictures (CNOT control high, Fredkin swaps `|101>` and
//! `|110>`). Inside a circuit, qubit `k` is bit `k` of the basis index; use
//! [`UnitaryMatrix::embed`] to place a gate into an `n`-qubit space.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// A gate together with the qubits it acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    T(usize),
    Tdg(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Cnot {
        control: usize,
        target: usize,
    },
    Swap(usize, usize),
    /// Flips `target` iff both controls are 1.
    Toffoli {
        c1: usize,
        c2: usize,
        target: usize,
    },
    /// Exchanges `t1` and `t2` iff `control` is 1.
    Fredkin {
        control: usize,
        t1: usize,
        t2: usize,
    },
}

/// Mnemonics of the Clifford+T subset, the output alphabet of lowering.
pub const CLIFFORD_T: [&str; 7] = ["h", "t", "tdg", "s", "sdg", "x", "cnot"];

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        Gate::Toffoli { c1, c2, target }
    }

    pub fn fredkin(control: usize, t1: usize, t2: usize) -> Self {
        Gate::Fredkin { control, t1, t2 }
    }

    /// Text-format mnemonic.
    pub fn mnemonic(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::T(_) => "t",
            Gate::Tdg(_) => "tdg",
            Gate::S(_) => "s",
            Gate::Sdg(_) => "sdg",
            Gate::X(_) => "x",
            Gate::Cnot { .. } => "cnot",
            Gate::Swap(..) => "swap",
            Gate::Toffoli { .. } => "ccx",
            Gate::Fredkin { .. } => "cswap",
        }
    }

    /// Operands in the order they appear in the text format and in the local
    /// matrix (first = most significant).
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::T(q) | Gate::Tdg(q) | Gate::S(q) | Gate::Sdg(q) | Gate::X(q) => {
                vec![q]
            }
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Swap(a, b) => vec![a, b],
            Gate::Toffoli { c1, c2, target } => vec![c1, c2, target],
            Gate::Fredkin { control, t1, t2 } => vec![control, t1, t2],
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Gate::Cnot { .. } | Gate::Swap(..) => 2,
            Gate::Toffoli { .. } | Gate::Fredkin { .. } => 3,
            _ => 1,
        }
    }

    /// Rebuild the gate from a mnemonic and operand list.
    pub fn from_parts(mnemonic: &str, qs: &[usize]) -> Option<Gate> {
        let g = match (mnemonic, qs) {
            ("h", &[q]) => Gate::H(q),
            ("t", &[q]) => Gate::T(q),
            ("tdg", &[q]) => Gate::Tdg(q),
            ("s", &[q]) => Gate::S(q),
            ("sdg", &[q]) => Gate::Sdg(q),
            ("x", &[q]) => Gate::X(q),
            ("cnot", &[c, t]) => Gate::cnot(c, t),
            ("swap", &[a, b]) => Gate::Swap(a, b),
            ("ccx", &[a, b, c]) => Gate::toffoli(a, b, c),
            ("cswap", &[a, b, c]) => Gate::fredkin(a, b, c),
            _ => return None,
        };
        Some(g)
    }

    /// Expected operand count for a mnemonic, `None` if unknown.
    pub fn arity_of(mnemonic: &str) -> Option<usize> {
        match mnemonic {
            "h" | "t" | "tdg" | "s" | "sdg" | "x" => Some(1),
            "cnot" | "swap" => Some(2),
            "ccx" | "cswap" => Some(3),
            _ => None,
        }
    }

    pub fn is_t_type(&self) -> bool {
        matches!(self, Gate::T(_) | Gate::Tdg(_))
    }

    /// True for gates in {H, T, T†, S, S†, X, CNOT}.
    pub fn is_clifford_t(&self) -> bool {
        !matches!(
            self,
            Gate::Swap(..) | Gate::Toffoli { .. } | Gate::Fredkin { .. }
        )
    }

    /// True for gates that permute computational basis states without phases.
    pub fn is_classical(&self) -> bool {
        matches!(
            self,
            Gate::X(_)
                | Gate::Cnot { .. }
                | Gate::Swap(..)
                | Gate::Toffoli { .. }
                | Gate::Fredkin { .. }
        )
    }

    /// Check operands are pairwise distinct and below `n_qubits`.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q >= n_qubits {
                return domain(format!(
                    "{} acts on qubit {q}, but only {n_qubits} qubits exist",
                    self.mnemonic()
                ));
            }
            if qs[..i].contains(&q) {
                return domain(format!("{}: duplicate qubit {q}", self.mnemonic()));
            }
        }
        Ok(())
    }

    /// Relabel every operand through `f`.
    pub fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(f(q)),
            Gate::T(q) => Gate::T(f(q)),
            Gate::Tdg(q) => Gate::Tdg(f(q)),
            Gate::S(q) => Gate::S(f(q)),
            Gate::Sdg(q) => Gate::Sdg(f(q)),
            Gate::X(q) => Gate::X(f(q)),
            Gate::Cnot { control, target } => Gate::cnot(f(control), f(target)),
            Gate::Swap(a, b) => Gate::Swap(f(a), f(b)),
            Gate::Toffoli { c1, c2, target } => Gate::toffoli(f(c1), f(c2), f(target)),
            Gate::Fredkin { control, t1, t2 } => Gate::fredkin(f(control), f(t1), f(t2)),
        }
    }

    /// The gate whose matrix is this gate's conjugate transpose.
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::T(q) => Gate::Tdg(q),
            Gate::Tdg(q) => Gate::T(q),
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            g => g,
        }
    }

    /// Action of a classical gate on a basis index (qubit k = bit k).
    /// Returns `None` for gates that create superpositions or phases.
    pub fn apply_to_basis(&self, basis: u128) -> Option<u128> {
        let bit = |q: usize| (basis >> q) & 1 == 1;
        let flip = |q: usize| 1u128 << q;
        let out = match *self {
            Gate::X(q) => basis ^ flip(q),
            Gate::Cnot { control, target } => {
                if bit(control) {
                    basis ^ flip(target)
                } else {
                    basis
                }
            }
            Gate::Toffoli { c1, c2, target } => {
                if bit(c1) && bit(c2) {
                    basis ^ flip(target)
                } else {
                    basis
                }
            }
            Gate::Swap(a, b) => {
                if bit(a) != bit(b) {
                    basis ^ flip(a) ^ flip(b)
                } else {
                    basis
                }
            }
            Gate::Fredkin { control, t1, t2 } => {
                if bit(control) && bit(t1) != bit(t2) {
                    basis ^ flip(t1) ^ flip(t2)
                } else {
                    basis
                }
            }
            _ => return None,
        };
        Some(out)
    }

    /// Local unitary, first operand most significant.
    pub fn matrix(&self) -> UnitaryMatrix {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let diag = |d: Complex64| UnitaryMatrix::from_rows(2, vec![one, z, z, d]);
        match self {
            Gate::H(_) => UnitaryMatrix::from_rows(2, vec![r, r, r, -r]),
            Gate::T(_) => diag(Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2)),
            Gate::Tdg(_) => diag(Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)),
            Gate::S(_) => diag(Complex64::new(0.0, 1.0)),
            Gate::Sdg(_) => diag(Complex64::new(0.0, -1.0)),
            Gate::X(_) => UnitaryMatrix::from_rows(2, vec![z, one, one, z]),
            _ => {
                // Permutation gates: relabel onto local operands 0..arity and
                // read the truth table off `apply_to_basis`.
                let k = self.arity();
                let local = self.local();
                let dim = 1usize << k;
                let mut m = UnitaryMatrix::zeros(dim);
                for col in 0..dim {
                    let row = local.apply_to_basis(col as u128).expect("permutation gate") as usize;
                    m.set(row, col, one);
                }
                m
            }
        }
    }

    /// The same gate on local qubits, where operand `i` of `k` sits at bit
    /// `k - 1 - i`.
    fn local(&self) -> Gate {
        let qs = self.qubits();
        let k = qs.len();
        self.map_qubits(|q| {
            let pos = qs.iter().position(|&x| x == q).expect("operand");
            k - 1 - pos
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

/// Clifford+T realisation of the Toffoli gate: 2 H, 7 T/T†, 7 CNOT, T-depth 3.
pub fn decompose_toffoli(c1: usize, c2: usize, t: usize) -> Vec<Gate> {
    use Gate::*;
    vec![
        H(t),
        T(c1),
        T(c2),
        T(t),
        Gate::cnot(c2, c1),
        Gate::cnot(t, c2),
        Gate::cnot(c1, t),
        Tdg(c2),
        Gate::cnot(c1, c2),
        Tdg(c1),
        Tdg(c2),
        T(t),
        Gate::cnot(t, c2),
        Gate::cnot(c1, t),
        Gate::cnot(c2, c1),
        H(t),
    ]
}

/// Clifford+T realisation of the Fredkin gate: the Toffoli core with target
/// `t2`, conjugated by `CNOT(t2 -> t1)`.
pub fn decompose_fredkin(c: usize, t1: usize, t2: usize) -> Vec<Gate> {
    let mut out = Vec::with_capacity(18);
    out.push(Gate::cnot(t2, t1));
    out.extend(decompose_toffoli(c, t1, t2));
    out.push(Gate::cnot(t2, t1));
    out
}

/// Three alternating CNOTs.
pub fn decompose_swap(a: usize, b: usize) -> Vec<Gate> {
    vec![Gate::cnot(a, b), Gate::cnot(b, a), Gate::cnot(a, b)]
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn zeros(dim: usize) -> Self {
        UnitaryMatrix {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Panics if `entries.len() != dim * dim`.
    pub fn from_rows(dim: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(entries.len(), dim * dim, "matrix must be {dim}x{dim}");
        UnitaryMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.entries[row * self.dim + col] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                m.set(c, r, self.get(r, c).conj());
            }
        }
        m
    }

    /// `self * rhs`. Panics on dimension mismatch.
    pub fn mul(&self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut m = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    m.entries[r * n + c] += a * rhs.get(k, c);
                }
            }
        }
        m
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &UnitaryMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Global phase `e^{iφ}` with `self ≈ e^{iφ} other`, taken from the entry
    /// where `other` is largest in modulus.
    pub fn relative_phase(&self, other: &UnitaryMatrix) -> Option<Complex64> {
        let (idx, pivot) = other
            .entries
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
        if pivot.norm() == 0.0 {
            return None;
        }
        let ratio = self.entries[idx] / pivot;
        if ratio.norm() == 0.0 {
            return None;
        }
        Some(ratio / ratio.norm())
    }

    /// Entrywise equality up to one global phase.
    pub fn equal_up_to_phase(&self, other: &UnitaryMatrix, tol: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let Some(phase) = self.relative_phase(other) else {
            return false;
        };
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| (a - phase * b).norm() <= tol)
    }

    /// True when every entry is within `tol` of 0 or 1 and each row and
    /// column holds exactly one 1.
    pub fn is_permutation(&self, tol: f64) -> bool {
        let n = self.dim;
        let mut col_hits = vec![0usize; n];
        for r in 0..n {
            let mut hits = 0;
            for (c, col) in col_hits.iter_mut().enumerate() {
                let v = self.get(r, c);
                if (v - Complex64::new(1.0, 0.0)).norm() <= tol {
                    hits += 1;
                    *col += 1;
                } else if v.norm() > tol {
                    return false;
                }
            }
            if hits != 1 {
                return false;
            }
        }
        col_hits.iter().all(|&h| h == 1)
    }

    /// Place `gate` in an `n_qubits` space where qubit `k` is bit `k`.
    pub fn embed(gate: &Gate, n_qubits: usize) -> Result<UnitaryMatrix> {
        gate.validate(n_qubits)?;
        let local = gate.matrix();
        let qs = gate.qubits();
        let k = qs.len();
        let dim = 1usize << n_qubits;
        let local_index = |i: usize| -> usize {
            qs.iter()
                .enumerate()
                .fold(0, |acc, (pos, &q)| acc | (((i >> q) & 1) << (k - 1 - pos)))
        };
        let mask: usize = qs.iter().map(|&q| 1usize << q).sum();
        let mut m = Self::zeros(dim);
        for row in 0..dim {
            for col in 0..dim {
                if row & !mask != col & !mask {
                    continue;
                }
                let v = local.get(local_index(row), local_index(col));
                if v != Complex64::new(0.0, 0.0) {
                    m.set(row, col, v);
                }
            }
        }
        Ok(m)
    }

    /// Matrix of the sequence `gates` (first gate applied first).
    pub fn of_sequence(gates: &[Gate], n_qubits: usize) -> Result<UnitaryMatrix> {
        let mut acc = Self::identity(1 << n_qubits);
        for g in gates {
            acc = Self::embed(g, n_qubits)?.mul(&acc);
        }
        Ok(acc)
    }
}
