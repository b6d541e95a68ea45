//! Line-based circuit text format.
//!
//! ```text
//! # comment to end of line
//! qubits 9
//! register b 0..4 input
//! register a 4..8 restored-input
//! register z 8..9 output
//! cnot 5 1
//! ccx 0 4 5
//! ```
//!
//! The `qubits N` header must be the first non-comment line. Register
//! stanzas use half-open ranges and must partition the wires; a file with no
//! stanzas gets a single `q 0..N input` register. Each remaining line is one
//! gate: `h`, `t`, `tdg`, `s`, `sdg`, `x` take one index, `cnot`, `swap`
//! two, `ccx`, `cswap` three. Indices are decimal. Unknown mnemonics are
//! errors.

use std::fmt::Write;

use super::{valid_name, Circuit, Register, RegisterLayout, Role};
use crate::error::{Error, Result};
use crate::gates::Gate;

/// Render `c`: header, register stanzas, one gate per line.
pub fn serialize(c: &Circuit) -> String {
    let mut out = String::new();
    writeln!(out, "qubits {}", c.n_qubits()).unwrap();
    for r in &c.layout().registers {
        writeln!(out, "register {} {}..{} {}", r.name, r.lo, r.hi, r.role).unwrap();
    }
    for g in c.ops() {
        writeln!(out, "{g}").unwrap();
    }
    out
}

fn err<T>(line: usize, reason: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        reason: reason.into(),
    })
}

pub fn parse(text: &str) -> Result<Circuit> {
    let mut n_qubits: Option<usize> = None;
    let mut registers: Vec<Register> = Vec::new();
    let mut ops = Vec::new();
    let mut header_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "qubits" => {
                if n_qubits.is_some() {
                    return err(line, "duplicate header");
                }
                if tokens.len() != 2 {
                    return err(line, "header must be 'qubits N'");
                }
                let n = tokens[1]
                    .parse::<usize>()
                    .or_else(|_| err(line, format!("bad qubit count '{}'", tokens[1])))?;
                n_qubits = Some(n);
                header_line = line;
            }
            "register" => {
                let Some(n) = n_qubits else {
                    return err(line, "missing header");
                };
                registers.push(parse_register(line, &tokens, n)?);
            }
            mnemonic => {
                let gate = parse_gate(line, mnemonic, &tokens[1..])?;
                let Some(n) = n_qubits else {
                    return err(line, "missing header");
                };
                if let Some(q) = gate.qubits().into_iter().find(|&q| q >= n) {
                    return err(line, format!("qubit {q} out of range (qubits {n})"));
                }
                ops.push(gate);
            }
        }
    }

    let Some(n) = n_qubits else {
        return err(1, "missing header");
    };
    let layout = if registers.is_empty() {
        RegisterLayout::single(n)
    } else {
        RegisterLayout::new(registers)
    };
    if let Err(e) = layout.validate(n) {
        return err(header_line, e.to_string());
    }
    Circuit::new(n, ops, layout).or_else(|e| err(header_line, e.to_string()))
}

fn parse_index(line: usize, tok: &str) -> Result<usize> {
    tok.parse::<usize>()
        .or_else(|_| err(line, format!("bad qubit index '{tok}'")))
}

fn parse_gate(line: usize, mnemonic: &str, args: &[&str]) -> Result<Gate> {
    let Some(arity) = Gate::arity_of(mnemonic) else {
        return err(line, format!("unknown gate '{mnemonic}'"));
    };
    if args.len() != arity {
        return err(
            line,
            format!("{mnemonic} expects {arity} qubit(s), got {}", args.len()),
        );
    }
    let qs = args
        .iter()
        .map(|t| parse_index(line, t))
        .collect::<Result<Vec<_>>>()?;
    for (i, q) in qs.iter().enumerate() {
        if qs[..i].contains(q) {
            return err(line, "duplicate qubit");
        }
    }
    Ok(Gate::from_parts(mnemonic, &qs).expect("arity checked"))
}

fn parse_register(line: usize, tokens: &[&str], n: usize) -> Result<Register> {
    if tokens.len() != 4 {
        return err(
            line,
            "register stanza must be 'register <name> <lo>..<hi> <role>'",
        );
    }
    let name = tokens[1];
    if !valid_name(name) {
        return err(line, format!("invalid register name '{name}'"));
    }
    let Some((lo, hi)) = tokens[2].split_once("..") else {
        return err(line, format!("bad range '{}'", tokens[2]));
    };
    let lo = parse_index(line, lo)?;
    let hi = parse_index(line, hi)?;
    if lo >= hi || hi > n {
        return err(line, format!("range {lo}..{hi} invalid for {n} qubits"));
    }
    let role: Role = tokens[3].parse().or_else(|e: String| err(line, e))?;
    Ok(Register::new(name, lo, hi, role))
}
