//! Circuit intermediate representation.
//!
//! A [`Circuit`] is an ordered gate list over `n_qubits` wires plus a
//! [`RegisterLayout`] naming contiguous wire ranges and their roles. Circuits
//! are plain values: every transformation returns a new circuit.

mod format;
mod resources;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use format::{parse, serialize};
pub use resources::{resources, ResourceReport};

use crate::error::{domain, Error, Result};
use crate::exec::Exec;
use crate::gates::{decompose_fredkin, decompose_swap, decompose_toffoli, Gate, UnitaryMatrix};
use crate::sparse::SparseState;
use crate::state::StateVector;

/// What a register carries in and out of the circuit.
///
/// `Ancilla` and `Output` registers must enter as all zeros; together they
/// make up a circuit's ancilla count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    /// Primary input overwritten in place by a result.
    Input,
    /// Primary input that reads back unchanged.
    RestoredInput,
    /// Constant-0 scratch.
    Ancilla,
    /// Starts at 0, ends holding a result.
    Output,
    /// Left holding a value that is neither an input nor a useful result.
    Garbage,
}

impl Role {
    pub fn as_str(&self) -> &'static str {
        match self {
            Role::Input => "input",
            Role::RestoredInput => "restored-input",
            Role::Ancilla => "ancilla",
            Role::Output => "output",
            Role::Garbage => "garbage",
        }
    }

    /// The register must be initialized to |0...0>.
    pub fn requires_zero(&self) -> bool {
        matches!(self, Role::Ancilla | Role::Output)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "input" => Role::Input,
            "restored-input" => Role::RestoredInput,
            "ancilla" => Role::Ancilla,
            "output" => Role::Output,
            "garbage" => Role::Garbage,
            other => return Err(format!("unknown role '{other}'")),
        })
    }
}

/// A named half-open wire range `lo..hi`; bit `i` of the register's value
/// lives on wire `lo + i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub lo: usize,
    pub hi: usize,
    pub role: Role,
}

impl Register {
    pub fn new(name: impl Into<String>, lo: usize, hi: usize, role: Role) -> Self {
        Register {
            name: name.into(),
            lo,
            hi,
            role,
        }
    }

    pub fn width(&self) -> usize {
        self.hi - self.lo
    }

    pub fn qubits(&self) -> std::ops::Range<usize> {
        self.lo..self.hi
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub registers: Vec<Register>,
}

impl RegisterLayout {
    pub fn new(registers: Vec<Register>) -> Self {
        RegisterLayout { registers }
    }

    /// One `input` register `q` spanning every wire (empty for zero wires).
    pub fn single(n_qubits: usize) -> Self {
        if n_qubits == 0 {
            return RegisterLayout::default();
        }
        RegisterLayout::new(vec![Register::new("q", 0, n_qubits, Role::Input)])
    }

    /// Build from `(name, width, role)` triples laid out back to back.
    pub fn stacked(parts: &[(&str, usize, Role)]) -> Self {
        let mut lo = 0;
        let registers = parts
            .iter()
            .map(|&(name, w, role)| {
                let r = Register::new(name, lo, lo + w, role);
                lo += w;
                r
            })
            .collect();
        RegisterLayout { registers }
    }

    pub fn get(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    pub fn n_qubits(&self) -> usize {
        self.registers.iter().map(Register::width).sum()
    }

    /// Qubits whose register role is in `pred`.
    pub fn count_where(&self, pred: impl Fn(Role) -> bool) -> usize {
        self.registers
            .iter()
            .filter(|r| pred(r.role))
            .map(Register::width)
            .sum()
    }

    /// Registers must have unique well-formed names and partition `0..n_qubits`.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let mut owner: Vec<Option<&str>> = vec![None; n_qubits];
        for (i, r) in self.registers.iter().enumerate() {
            if !valid_name(&r.name) {
                return domain(format!("invalid register name '{}'", r.name));
            }
            if self.registers[..i].iter().any(|o| o.name == r.name) {
                return domain(format!("duplicate register name '{}'", r.name));
            }
            if r.lo >= r.hi || r.hi > n_qubits {
                return domain(format!(
                    "register '{}' range {}..{} invalid for {n_qubits} qubits",
                    r.name, r.lo, r.hi
                ));
            }
            for q in r.qubits() {
                if let Some(other) = owner[q] {
                    return domain(format!(
                        "qubit {q} claimed by registers '{other}' and '{}'",
                        r.name
                    ));
                }
                owner[q] = Some(&r.name);
            }
        }
        if let Some(q) = owner.iter().position(Option::is_none) {
            return domain(format!("qubit {q} belongs to no register"));
        }
        Ok(())
    }
}

pub(crate) fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | '\''))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<Gate>,
    layout: RegisterLayout,
}

impl Circuit {
    /// Validates every gate against `n_qubits` and the layout partition.
    pub fn new(n_qubits: usize, ops: Vec<Gate>, layout: RegisterLayout) -> Result<Self> {
        for g in &ops {
            g.validate(n_qubits)?;
        }
        layout.validate(n_qubits)?;
        Ok(Circuit {
            n_qubits,
            ops,
            layout,
        })
    }

    /// A circuit with the default single-register layout.
    pub fn from_ops(n_qubits: usize, ops: Vec<Gate>) -> Result<Self> {
        Self::new(n_qubits, ops, RegisterLayout::single(n_qubits))
    }

    pub fn empty(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            ops: Vec::new(),
            layout: RegisterLayout::single(n_qubits),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Gate] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn with_layout(mut self, layout: RegisterLayout) -> Result<Self> {
        layout.validate(self.n_qubits)?;
        self.layout = layout;
        Ok(self)
    }

    /// Same circuit with `ops` replaced (layout kept).
    pub fn with_ops(&self, ops: Vec<Gate>) -> Result<Self> {
        Self::new(self.n_qubits, ops, self.layout.clone())
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.ops.push(gate);
        Ok(())
    }

    /// True when every gate is a basis permutation (X, CNOT, SWAP, Toffoli,
    /// Fredkin).
    pub fn is_classical(&self) -> bool {
        self.ops.iter().all(Gate::is_classical)
    }
}

/// `a` followed by `b` on the same wires. The merged layout is supplied by
/// the caller; `None` keeps `a`'s layout.
pub fn compose(a: &Circuit, b: &Circuit, layout: Option<RegisterLayout>) -> Result<Circuit> {
    if a.n_qubits != b.n_qubits {
        return domain(format!(
            "cannot compose {}-qubit and {}-qubit circuits without a qubit map",
            a.n_qubits, b.n_qubits
        ));
    }
    let ops = a.ops.iter().chain(&b.ops).copied().collect();
    Circuit::new(a.n_qubits, ops, layout.unwrap_or_else(|| a.layout.clone()))
}

/// `a` followed by `b`, with wire `i` of `b` placed on wire `map[i]` of `a`.
pub fn compose_mapped(
    a: &Circuit,
    b: &Circuit,
    map: &[usize],
    layout: Option<RegisterLayout>,
) -> Result<Circuit> {
    if map.len() != b.n_qubits {
        return domain(format!(
            "qubit map has {} entries for a {}-qubit circuit",
            map.len(),
            b.n_qubits
        ));
    }
    for (i, &q) in map.iter().enumerate() {
        if q >= a.n_qubits {
            return domain(format!(
                "qubit map sends {i} to {q}, outside 0..{}",
                a.n_qubits
            ));
        }
        if map[..i].contains(&q) {
            return domain(format!("qubit-map collision on wire {q}"));
        }
    }
    let ops = a
        .ops
        .iter()
        .copied()
        .chain(b.ops.iter().map(|g| g.map_qubits(|q| map[q])))
        .collect();
    Circuit::new(a.n_qubits, ops, layout.unwrap_or_else(|| a.layout.clone()))
}

/// Gates reversed and individually inverted; layout unchanged.
pub fn inverse_circuit(c: &Circuit) -> Circuit {
    Circuit {
        n_qubits: c.n_qubits,
        ops: inverse_ops(&c.ops),
        layout: c.layout.clone(),
    }
}

pub(crate) fn inverse_ops(ops: &[Gate]) -> Vec<Gate> {
    ops.iter().rev().map(Gate::inverse).collect()
}

/// Replace SWAP, Toffoli and Fredkin with their Clifford+T decompositions.
pub fn lower_to_clifford_t(c: &Circuit) -> Circuit {
    let mut ops = Vec::with_capacity(c.ops.len());
    for g in &c.ops {
        match *g {
            Gate::Swap(a, b) => ops.extend(decompose_swap(a, b)),
            Gate::Toffoli { c1, c2, target } => ops.extend(decompose_toffoli(c1, c2, target)),
            Gate::Fredkin { control, t1, t2 } => ops.extend(decompose_fredkin(control, t1, t2)),
            g => ops.push(g),
        }
    }
    Circuit {
        n_qubits: c.n_qubits,
        ops,
        layout: c.layout.clone(),
    }
}

/// Greedy as-soon-as-possible layering: each gate lands one layer after the
/// latest layer touching any of its qubits. No commutation is exploited.
pub fn schedule_layers(c: &Circuit) -> Vec<Vec<Gate>> {
    let mut frontier = vec![0usize; c.n_qubits];
    let mut layers: Vec<Vec<Gate>> = Vec::new();
    for g in &c.ops {
        let qs = g.qubits();
        let layer = qs.iter().map(|&q| frontier[q]).max().unwrap_or(0);
        if layer == layers.len() {
            layers.push(Vec::new());
        }
        layers[layer].push(*g);
        for q in qs {
            frontier[q] = layer + 1;
        }
    }
    layers
}

/// Dense simulation from basis state `input`.
pub fn simulate(c: &Circuit, input: usize) -> Result<StateVector> {
    simulate_with(c, input, Exec::default())
}

pub fn simulate_with(c: &Circuit, input: usize, exec: Exec) -> Result<StateVector> {
    let mut s = StateVector::new_basis_state(c.n_qubits, input)?;
    for g in &c.ops {
        s.apply_gate_mut(g, exec)?;
    }
    Ok(s)
}

/// Sparse simulation for circuits wider than the dense cap.
pub fn simulate_sparse(c: &Circuit, input: u128) -> Result<SparseState> {
    let mut s = SparseState::new_basis_state(c.n_qubits, input)?;
    for g in &c.ops {
        s.apply_gate_mut(g)?;
    }
    Ok(s)
}

/// Widest circuit [`unitary`] will build.
pub const MAX_UNITARY_QUBITS: usize = 12;

/// Full unitary, one simulated column per basis input.
pub fn unitary(c: &Circuit) -> Result<UnitaryMatrix> {
    if c.n_qubits > MAX_UNITARY_QUBITS {
        return Err(Error::Resource(format!(
            "unitary of {} qubits exceeds the {MAX_UNITARY_QUBITS}-qubit limit",
            c.n_qubits
        )));
    }
    let dim = 1usize << c.n_qubits;
    let mut m = UnitaryMatrix::zeros(dim);
    for col in 0..dim {
        let s = simulate_with(c, col, Exec::Sequential)?;
        for (row, a) in s.amplitudes().iter().enumerate() {
            m.set(row, col, *a);
        }
    }
    Ok(m)
}
