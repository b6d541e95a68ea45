//! Bennett's compute, copy, uncompute construction.

use crate::circuit::{inverse_ops, Circuit, Register, RegisterLayout, Role};
use crate::error::{domain, Result};
use crate::gates::Gate;

/// A circuit `U`, the wires holding its result, and where the copies go.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BennettSpec {
    pub inner: Circuit,
    /// Result wires of `U`, copied in this order.
    pub output_wires: Vec<usize>,
    /// First wire of the copy register. The register must start right after
    /// the inner wires.
    pub copy_lo: usize,
}

impl BennettSpec {
    /// Copy register appended after the inner wires.
    pub fn new(inner: Circuit, output_wires: Vec<usize>) -> Self {
        let copy_lo = inner.n_qubits();
        BennettSpec {
            inner,
            output_wires,
            copy_lo,
        }
    }
}

/// `U`, then CNOT each output wire onto its copy, then `U⁻¹`.
///
/// Registers of `U` that had to start at 0 come back as `ancilla` (they are
/// returned to 0); the rest become `restored-input`. The copy register is an
/// `output` register named `copy`.
pub fn bennett_wrap(spec: &BennettSpec) -> Result<Circuit> {
    let inner = &spec.inner;
    let n = inner.n_qubits();
    let k = spec.output_wires.len();
    if k == 0 {
        return domain("no output wires to copy");
    }
    for (i, &w) in spec.output_wires.iter().enumerate() {
        if w >= n {
            return domain(format!("output wire {w} outside 0..{n}"));
        }
        if spec.output_wires[..i].contains(&w) {
            return domain(format!("output wire {w} listed twice"));
        }
    }
    if spec.copy_lo < n {
        return domain(format!(
            "copy register {}..{} overlaps the inner wires 0..{n}",
            spec.copy_lo,
            spec.copy_lo + k
        ));
    }
    if spec.copy_lo > n {
        return domain(format!(
            "copy register must start at wire {n}, not {}",
            spec.copy_lo
        ));
    }

    let mut ops = Vec::with_capacity(2 * inner.len() + k);
    ops.extend_from_slice(inner.ops());
    ops.extend(
        spec.output_wires
            .iter()
            .enumerate()
            .map(|(i, &w)| Gate::cnot(w, n + i)),
    );
    ops.extend(inverse_ops(inner.ops()));

    let mut registers: Vec<Register> = inner
        .layout()
        .registers
        .iter()
        .map(|r| {
            let role = if r.role.requires_zero() {
                Role::Ancilla
            } else {
                Role::RestoredInput
            };
            Register::new(r.name.clone(), r.lo, r.hi, role)
        })
        .collect();
    let mut name = String::from("copy");
    while registers.iter().any(|r| r.name == name) {
        name.push('\'');
    }
    registers.push(Register::new(name, n, n + k, Role::Output));
    Circuit::new(n + k, ops, RegisterLayout::new(registers))
}
