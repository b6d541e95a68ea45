use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{lower_to_clifford_t, schedule_layers, Circuit, Role};
use crate::gates::Gate;

/// Fault-tolerance cost of a circuit, measured on its Clifford+T lowering.
///
/// Serialized as JSON with exactly these field names; `gate_histogram` maps
/// lowered mnemonics to counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub t_count: usize,
    /// Layers of the ASAP schedule that contain at least one T or T†.
    pub t_depth: usize,
    pub depth: usize,
    pub qubit_cost: usize,
    /// Wires that must enter as 0 (`ancilla` and `output` registers).
    pub ancilla_count: usize,
    pub garbage_count: usize,
    pub gate_histogram: BTreeMap<String, usize>,
}

impl ResourceReport {
    /// Flat `key: value` block, histogram entries as `gates.<mnemonic>`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "t_count: {}", self.t_count).unwrap();
        writeln!(s, "t_depth: {}", self.t_depth).unwrap();
        writeln!(s, "depth: {}", self.depth).unwrap();
        writeln!(s, "qubit_cost: {}", self.qubit_cost).unwrap();
        writeln!(s, "ancilla_count: {}", self.ancilla_count).unwrap();
        writeln!(s, "garbage_count: {}", self.garbage_count).unwrap();
        for (k, v) in &self.gate_histogram {
            writeln!(s, "gates.{k}: {v}").unwrap();
        }
        s
    }
}

pub fn resources(c: &Circuit) -> ResourceReport {
    let lowered = lower_to_clifford_t(c);
    let layers = schedule_layers(&lowered);
    let mut gate_histogram = BTreeMap::new();
    for g in lowered.ops() {
        *gate_histogram.entry(g.mnemonic().to_string()).or_insert(0) += 1;
    }
    ResourceReport {
        t_count: lowered.ops().iter().filter(|g| g.is_t_type()).count(),
        t_depth: layers
            .iter()
            .filter(|l| l.iter().any(Gate::is_t_type))
            .count(),
        depth: layers.len(),
        qubit_cost: c.n_qubits(),
        ancilla_count: c.layout().count_where(|r| r.requires_zero()),
        garbage_count: c.layout().count_where(|r| r == Role::Garbage),
        gate_histogram,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_toffoli() {
        let r = resources(&Circuit::from_ops(3, vec![Gate::toffoli(0, 1, 2)]).unwrap());
        assert_eq!(r.t_count, 7);
        assert_eq!(r.gate_histogram["t"] + r.gate_histogram["tdg"], 7);
        assert_eq!(r.gate_histogram["cnot"], 7);
        assert_eq!(r.gate_histogram["h"], 2);
        assert_eq!((r.t_depth, r.depth), (5, 9));
        assert_eq!(r.qubit_cost, 3);
    }

    #[test]
    fn clifford_only_and_empty() {
        let r = resources(
            &Circuit::from_ops(2, vec![Gate::H(0), Gate::cnot(0, 1), Gate::S(1)]).unwrap(),
        );
        assert_eq!((r.t_count, r.t_depth), (0, 0));
        assert_eq!(r.depth, 3);
        let r = resources(&Circuit::empty(0));
        assert_eq!(r, ResourceReport::default());
    }

    #[test]
    fn text_block() {
        let r = resources(&Circuit::from_ops(1, vec![Gate::T(0)]).unwrap());
        assert_eq!(
            r.to_text(),
            "t_count: 1\nt_depth: 1\ndepth: 1\nqubit_cost: 1\nancilla_count: 0\ngarbage_count: 0\ngates.t: 1\n"
        );
    }
}
