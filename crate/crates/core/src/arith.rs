//! Reversible arithmetic generators.
//!
//! Every builder returns an [`ArithInstance`]: a circuit whose layout names
//! each register, plus the ordered list of registers that carry integer
//! inputs and the ordered list read back as outputs. Register bit `i` lives
//! on wire `lo + i`. All arithmetic is modular in the register width.
//!
//! Toffolis are emitted as primitives; call
//! [`lower_to_clifford_t`](crate::circuit::lower_to_clifford_t) for the
//! Clifford+T form.

use std::fmt;
use std::str::FromStr;

use crate::circuit::{inverse_ops, Circuit, Register, RegisterLayout, Role};
use crate::error::{domain, Result};
use crate::gates::Gate;

/// A generated circuit together with its integer encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithInstance {
    pub n_bits: usize,
    pub circuit: Circuit,
    /// Registers set from the caller's integers, in argument order. Every
    /// other register enters as 0.
    pub inputs: Vec<String>,
    /// Registers decoded after simulation, in result order. Every other
    /// register is expected to exit as 0.
    pub outputs: Vec<String>,
}

impl ArithInstance {
    fn new(n_bits: usize, circuit: Circuit, inputs: &[&str], outputs: &[&str]) -> Self {
        let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect();
        ArithInstance {
            n_bits,
            circuit,
            inputs: names(inputs),
            outputs: names(outputs),
        }
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.circuit.layout().get(name)
    }

    /// Widths of the input registers, in argument order.
    pub fn input_widths(&self) -> Vec<usize> {
        self.inputs.iter().map(|n| self.reg(n).width()).collect()
    }

    /// Number of distinct input tuples, `2^(sum of input widths)`.
    pub fn input_space(&self) -> u128 {
        1u128 << self.input_widths().iter().sum::<usize>()
    }

    /// Basis index with each input register holding its value and all other
    /// wires 0.
    pub fn encode(&self, values: &[u64]) -> Result<u128> {
        self.place(&self.inputs, values)
    }

    /// Basis index the circuit should reach: outputs hold `values`, every
    /// other wire 0.
    pub fn expected_basis(&self, values: &[u64]) -> Result<u128> {
        self.place(&self.outputs, values)
    }

    /// Output register values read from a basis index.
    pub fn decode(&self, basis: u128) -> Vec<u64> {
        self.outputs.iter().map(|n| self.read(basis, n)).collect()
    }

    /// Value of one register in a basis index (0 for unknown names).
    pub fn read(&self, basis: u128, name: &str) -> u64 {
        self.register(name)
            .map(|r| ((basis >> r.lo) & mask(r.width())) as u64)
            .unwrap_or(0)
    }

    /// Input values of the `k`-th point of the input space, first register
    /// in the low bits of `k`.
    pub fn input_tuple(&self, mut k: u128) -> Vec<u64> {
        self.input_widths()
            .into_iter()
            .map(|w| {
                let v = (k & mask(w)) as u64;
                k >>= w;
                v
            })
            .collect()
    }

    fn reg(&self, name: &str) -> &Register {
        self.register(name)
            .expect("instance names its own registers")
    }

    fn place(&self, names: &[String], values: &[u64]) -> Result<u128> {
        if names.len() != values.len() {
            return domain(format!(
                "expected {} values ({}), got {}",
                names.len(),
                names.join(", "),
                values.len()
            ));
        }
        if self.circuit.n_qubits() > 128 {
            return domain("basis indices are limited to 128 qubits");
        }
        let mut basis = 0u128;
        for (name, &v) in names.iter().zip(values) {
            let r = self.reg(name);
            if r.width() < 64 && v >> r.width() != 0 {
                return domain(format!(
                    "value {v} does not fit register '{name}' of width {}",
                    r.width()
                ));
            }
            basis |= (v as u128) << r.lo;
        }
        Ok(basis)
    }
}

fn mask(width: usize) -> u128 {
    if width >= 128 {
        u128::MAX
    } else {
        (1u128 << width) - 1
    }
}

fn check_width(n: usize) -> Result<()> {
    if n == 0 {
        return domain("register width must be at least 1");
    }
    Ok(())
}

fn range(lo: usize, n: usize) -> Vec<usize> {
    (lo..lo + n).collect()
}

fn instance(
    n: usize,
    parts: &[(&str, usize, Role)],
    ops: Vec<Gate>,
    inputs: &[&str],
    outputs: &[&str],
) -> ArithInstance {
    let layout = RegisterLayout::stacked(parts);
    let circuit =
        Circuit::new(layout.n_qubits(), ops, layout).expect("generator emits valid wires");
    ArithInstance::new(n, circuit, inputs, outputs)
}

/// Ripple-carry `b += a` with 2n−1 Toffolis and no input carry. With
/// `carry = Some(z)` the carry-out is XORed into `z`; with `None` the carry
/// circuitry is omitted and the sum is mod 2^n.
pub fn adder_gates(a: &[usize], b: &[usize], carry: Option<usize>) -> Vec<Gate> {
    let n = a.len();
    assert_eq!(n, b.len());
    let mut g = Vec::new();
    for i in 1..n {
        g.push(Gate::cnot(a[i], b[i]));
    }
    if let (Some(z), true) = (carry, n > 1) {
        g.push(Gate::cnot(a[n - 1], z));
    }
    for i in (1..n.saturating_sub(1)).rev() {
        g.push(Gate::cnot(a[i], a[i + 1]));
    }
    for i in 0..n - 1 {
        g.push(Gate::toffoli(b[i], a[i], a[i + 1]));
    }
    if let Some(z) = carry {
        g.push(Gate::toffoli(b[n - 1], a[n - 1], z));
    }
    for i in (1..n).rev() {
        g.push(Gate::cnot(a[i], b[i]));
        g.push(Gate::toffoli(b[i - 1], a[i - 1], a[i]));
    }
    g.push(Gate::cnot(a[0], b[0]));
    for i in 1..n.saturating_sub(1) {
        g.push(Gate::cnot(a[i], a[i + 1]));
    }
    for i in 1..n {
        g.push(Gate::cnot(a[i], b[i]));
    }
    g
}

/// Controlled ripple-carry `b += a` when `ctrl` is 1, identity otherwise.
/// `carry = Some((z, t))` XORs the controlled carry-out into `z` using the
/// zero ancilla `t`, which is restored.
pub fn ctrl_add_gates(
    ctrl: usize,
    a: &[usize],
    b: &[usize],
    carry: Option<(usize, usize)>,
) -> Vec<Gate> {
    let n = a.len();
    assert_eq!(n, b.len());
    let mut g = Vec::new();
    for i in 1..n {
        g.push(Gate::cnot(a[i], b[i]));
    }
    if let (Some((z, _)), true) = (carry, n > 1) {
        g.push(Gate::toffoli(ctrl, a[n - 1], z));
    }
    for i in (1..n.saturating_sub(1)).rev() {
        g.push(Gate::cnot(a[i], a[i + 1]));
    }
    for i in 0..n - 1 {
        g.push(Gate::toffoli(b[i], a[i], a[i + 1]));
    }
    if let Some((z, t)) = carry {
        g.push(Gate::toffoli(b[n - 1], a[n - 1], t));
        g.push(Gate::toffoli(ctrl, t, z));
        g.push(Gate::toffoli(b[n - 1], a[n - 1], t));
    }
    for i in (1..n).rev() {
        g.push(Gate::toffoli(ctrl, a[i], b[i]));
        g.push(Gate::toffoli(b[i - 1], a[i - 1], a[i]));
    }
    g.push(Gate::toffoli(ctrl, a[0], b[0]));
    for i in 1..n.saturating_sub(1) {
        g.push(Gate::cnot(a[i], a[i + 1]));
    }
    for i in 1..n {
        g.push(Gate::cnot(a[i], b[i]));
    }
    g
}

/// `b -= a` mod 2^n: complement `b`, add, complement again.
pub fn subtractor_gates(a: &[usize], b: &[usize]) -> Vec<Gate> {
    let mut g: Vec<Gate> = b.iter().map(|&q| Gate::X(q)).collect();
    g.extend(adder_gates(a, b, None));
    g.extend(b.iter().map(|&q| Gate::X(q)));
    g
}

/// Shift-and-add `p ^= a·b` over a zero product register of width 2n+1.
/// The first partial product is a Toffoli array; each later row is a
/// controlled adder acting on `p` shifted by the row index.
pub fn multiplier_gates(a: &[usize], b: &[usize], p: &[usize]) -> Vec<Gate> {
    let n = a.len();
    assert_eq!(p.len(), 2 * n + 1);
    let mut g: Vec<Gate> = (0..n).map(|j| Gate::toffoli(b[0], a[j], p[j])).collect();
    for i in 1..n {
        g.extend(ctrl_add_gates(
            b[i],
            a,
            &p[i..i + n],
            Some((p[i + n], p[i + n + 1])),
        ));
    }
    g
}

/// `p ^= a·b mod 2^n` over a zero product register of width n.
pub fn mod_multiplier_gates(a: &[usize], b: &[usize], p: &[usize]) -> Vec<Gate> {
    let n = a.len();
    assert_eq!(p.len(), n);
    let mut g: Vec<Gate> = (0..n).map(|j| Gate::toffoli(b[0], a[j], p[j])).collect();
    for i in 1..n {
        g.extend(ctrl_add_gates(b[i], &a[..n - i], &p[i..], None));
    }
    g
}

/// Inputs `(a, b)`; outputs `(sum, carry, a)` with the sum in `b`.
pub fn build_adder(n: usize) -> Result<ArithInstance> {
    check_width(n)?;
    let (b, a) = (range(0, n), range(n, n));
    let ops = adder_gates(&a, &b, Some(2 * n));
    Ok(instance(
        n,
        &[
            ("b", n, Role::Input),
            ("a", n, Role::RestoredInput),
            ("z", 1, Role::Output),
        ],
        ops,
        &["a", "b"],
        &["b", "z", "a"],
    ))
}

/// Inputs `(a, b)`; outputs `(b − a mod 2^n, a)` with the difference in `b`.
pub fn build_subtractor(n: usize) -> Result<ArithInstance> {
    check_width(n)?;
    let (b, a) = (range(0, n), range(n, n));
    Ok(instance(
        n,
        &[("b", n, Role::Input), ("a", n, Role::RestoredInput)],
        subtractor_gates(&a, &b),
        &["a", "b"],
        &["b", "a"],
    ))
}

/// Inputs `(ctrl, a, b)`; outputs `(ctrl, b', carry, a)` where `b' = a + b`
/// when `ctrl` is set and `b` otherwise. Layout `ctrl, b, a, z, t` with `t`
/// a scratch wire for the controlled carry.
pub fn build_ctrl_add(n: usize) -> Result<ArithInstance> {
    check_width(n)?;
    let (b, a) = (range(1, n), range(n + 1, n));
    let ops = ctrl_add_gates(0, &a, &b, Some((2 * n + 1, 2 * n + 2)));
    Ok(instance(
        n,
        &[
            ("ctrl", 1, Role::RestoredInput),
            ("b", n, Role::Input),
            ("a", n, Role::RestoredInput),
            ("z", 1, Role::Output),
            ("t", 1, Role::Ancilla),
        ],
        ops,
        &["ctrl", "a", "b"],
        &["ctrl", "b", "z", "a"],
    ))
}

/// Inputs `(a, b)`; outputs `(a·b, a, b)` with the product in the
/// (2n+1)-wide register `p`, whose top bit returns to 0.
pub fn build_multiplier(n: usize) -> Result<ArithInstance> {
    check_width(n)?;
    let (b, a, p) = (range(0, n), range(n, n), range(2 * n, 2 * n + 1));
    Ok(instance(
        n,
        &[
            ("b", n, Role::RestoredInput),
            ("a", n, Role::RestoredInput),
            ("p", 2 * n + 1, Role::Output),
        ],
        multiplier_gates(&a, &b, &p),
        &["a", "b"],
        &["p", "a", "b"],
    ))
}

/// Coefficients of the second-order expansion about `c`:
/// `f + fp·(x−c) + fpp·(x−c)²`, with `fpp` already halved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TaylorConstants {
    pub f: u64,
    pub fp: u64,
    pub fpp: u64,
    pub c: u64,
}

/// Input `(x)`; outputs `(x, y4)` with
/// `y4 = f + fp·(x−c) + fpp·(x−c)² mod 2^n`.
///
/// The constants sit in their own registers, written with X gates at the
/// start and cleared at the end. Every intermediate is uncomputed, so only
/// `x` and `y4` are nonzero afterwards.
pub fn build_taylor(n: usize, k: TaylorConstants) -> Result<ArithInstance> {
    check_width(n)?;
    for (name, v) in [("f", k.f), ("fp", k.fp), ("fpp", k.fpp), ("c", k.c)] {
        if n < 64 && v >> n != 0 {
            return domain(format!("constant {name}={v} is outside [0, 2^{n})"));
        }
    }
    let order = ["c", "f", "fp", "fpp", "x", "y3", "y1", "y2", "y4"];
    let reg = |name: &str| {
        let i = order.iter().position(|&o| o == name).unwrap();
        range(i * n, n)
    };
    let (c, f, fp, fpp, x) = (reg("c"), reg("f"), reg("fp"), reg("fpp"), reg("x"));
    let (y1, y2, y3, y4) = (reg("y1"), reg("y2"), reg("y3"), reg("y4"));

    let mut load = Vec::new();
    for (wires, v) in [(&c, k.c), (&f, k.f), (&fp, k.fp), (&fpp, k.fpp)] {
        load.extend(
            (0..n)
                .filter(|i| (v >> i) & 1 == 1)
                .map(|i| Gate::X(wires[i])),
        );
    }
    let copy: Vec<Gate> = (0..n).map(|i| Gate::cnot(x[i], y3[i])).collect();
    let linear = mod_multiplier_gates(&x, &fp, &y1);
    let square = mod_multiplier_gates(&x, &y3, &y2);

    let mut ops = load.clone();
    ops.extend(subtractor_gates(&c, &x));
    ops.extend(copy.iter().copied());
    ops.extend(linear.iter().copied());
    ops.extend(square.iter().copied());
    ops.extend(mod_multiplier_gates(&y2, &fpp, &y4));
    ops.extend(adder_gates(&f, &y1, None));
    ops.extend(adder_gates(&y1, &y4, None));
    ops.extend(inverse_ops(&square));
    ops.extend(subtractor_gates(&f, &y1));
    ops.extend(inverse_ops(&linear));
    ops.extend(copy);
    ops.extend(adder_gates(&c, &x, None));
    ops.extend(load);

    let parts: Vec<(&str, usize, Role)> = order
        .iter()
        .map(|&name| {
            let role = match name {
                "x" => Role::RestoredInput,
                "y4" => Role::Output,
                _ => Role::Ancilla,
            };
            (name, n, role)
        })
        .collect();
    Ok(instance(n, &parts, ops, &["x"], &["x", "y4"]))
}

/// Generator families exposed by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithKind {
    Adder,
    Sub,
    CtrlAdd,
    Mul,
    Taylor,
}

impl ArithKind {
    pub const ALL: [ArithKind; 5] = [
        ArithKind::Adder,
        ArithKind::Sub,
        ArithKind::CtrlAdd,
        ArithKind::Mul,
        ArithKind::Taylor,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ArithKind::Adder => "adder",
            ArithKind::Sub => "sub",
            ArithKind::CtrlAdd => "ctrladd",
            ArithKind::Mul => "mul",
            ArithKind::Taylor => "taylor",
        }
    }

    /// Build an instance; `consts` is only read for [`ArithKind::Taylor`].
    pub fn build(&self, n: usize, consts: TaylorConstants) -> Result<ArithInstance> {
        match self {
            ArithKind::Adder => build_adder(n),
            ArithKind::Sub => build_subtractor(n),
            ArithKind::CtrlAdd => build_ctrl_add(n),
            ArithKind::Mul => build_multiplier(n),
            ArithKind::Taylor => build_taylor(n, consts),
        }
    }

    /// Classical reference matching the instance's input and output order.
    pub fn oracle(
        &self,
        n: usize,
        k: TaylorConstants,
    ) -> impl Fn(&[u64]) -> Vec<u64> + Send + Sync {
        let kind = *self;
        let m = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
        move |v: &[u64]| match kind {
            ArithKind::Adder => {
                let s = v[0] as u128 + v[1] as u128;
                vec![(s as u64) & m, (s >> n) as u64 & 1, v[0]]
            }
            ArithKind::Sub => vec![v[1].wrapping_sub(v[0]) & m, v[0]],
            ArithKind::CtrlAdd => {
                let (ctrl, a, b) = (v[0], v[1], v[2]);
                if ctrl == 1 {
                    let s = a as u128 + b as u128;
                    vec![1, (s as u64) & m, (s >> n) as u64 & 1, a]
                } else {
                    vec![0, b, 0, a]
                }
            }
            ArithKind::Mul => vec![v[0].wrapping_mul(v[1]), v[0], v[1]],
            ArithKind::Taylor => {
                let d = v[0].wrapping_sub(k.c) & m;
                let y =
                    k.f.wrapping_add(k.fp.wrapping_mul(d))
                        .wrapping_add(k.fpp.wrapping_mul(d).wrapping_mul(d));
                vec![v[0], y & m]
            }
        }
    }
}

impl fmt::Display for ArithKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ArithKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ArithKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown circuit kind '{s}' (adder, sub, ctrladd, mul, taylor)"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::simulate_sparse;

    fn run(inst: &ArithInstance, inputs: &[u64]) -> Vec<u64> {
        let s = simulate_sparse(&inst.circuit, inst.encode(inputs).unwrap()).unwrap();
        let out = s.basis_readout(1e-9).expect("basis output");
        assert_eq!(
            out,
            inst.expected_basis(&inst.decode(out)).unwrap(),
            "stray bits"
        );
        inst.decode(out)
    }

    #[test]
    fn adder_examples() {
        let add = build_adder(4).unwrap();
        assert_eq!(add.circuit.n_qubits(), 9);
        assert_eq!(run(&add, &[3, 5]), [8, 0, 3]);
        assert_eq!(run(&add, &[15, 1]), [0, 1, 15]);
        assert_eq!(run(&add, &[0, 0]), [0, 0, 0]);
        let toffolis = add
            .circuit
            .ops()
            .iter()
            .filter(|g| g.mnemonic() == "ccx")
            .count();
        assert_eq!(toffolis, 7);
    }

    #[test]
    fn one_bit_adder_is_a_half_adder() {
        let add = build_adder(1).unwrap();
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert_eq!(run(&add, &[a, b]), [(a + b) & 1, (a + b) >> 1, a]);
        }
    }

    #[test]
    fn subtractor_examples() {
        let sub = build_subtractor(4).unwrap();
        assert_eq!(sub.circuit.n_qubits(), 8);
        assert_eq!(run(&sub, &[3, 5]), [2, 3]);
        assert_eq!(run(&sub, &[5, 3]), [14, 5]);
        for x in 0..16 {
            assert_eq!(run(&sub, &[0, x]), [x, 0]);
        }
    }

    #[test]
    fn ctrl_add_examples() {
        let ca = build_ctrl_add(4).unwrap();
        assert_eq!(run(&ca, &[1, 3, 5]), [1, 8, 0, 3]);
        assert_eq!(run(&ca, &[0, 3, 5]), [0, 5, 0, 3]);
        assert_eq!(run(&ca, &[1, 0, 7]), [1, 7, 0, 0]);
        assert_eq!(run(&ca, &[1, 9, 9]), [1, 2, 1, 9]);
    }

    #[test]
    fn multiplier_examples() {
        let mul = build_multiplier(4).unwrap();
        assert_eq!(mul.circuit.n_qubits(), 17);
        assert_eq!(run(&mul, &[3, 5]), [15, 3, 5]);
        assert_eq!(run(&build_multiplier(3).unwrap(), &[7, 7]), [49, 7, 7]);
        assert_eq!(run(&build_multiplier(1).unwrap(), &[1, 1]), [1, 1, 1]);
    }

    #[test]
    fn taylor_examples() {
        let k = TaylorConstants {
            f: 5,
            fp: 3,
            fpp: 1,
            c: 2,
        };
        let t = build_taylor(4, k).unwrap();
        assert_eq!(t.circuit.n_qubits(), 36);
        assert_eq!(run(&t, &[3]), [3, 9]);
        assert_eq!(run(&t, &[2]), [2, 5]);
        let q = build_taylor(
            4,
            TaylorConstants {
                f: 0,
                fp: 0,
                fpp: 2,
                c: 1,
            },
        )
        .unwrap();
        assert_eq!(run(&q, &[3]), [3, 8]);
    }

    #[test]
    fn taylor_rejects_wide_constants() {
        let k = TaylorConstants {
            f: 16,
            ..Default::default()
        };
        assert!(build_taylor(4, k).is_err());
        assert!(build_adder(0).is_err());
    }

    #[test]
    fn encoding_checks_widths() {
        let add = build_adder(2).unwrap();
        assert!(add.encode(&[4, 0]).is_err());
        assert!(add.encode(&[1]).is_err());
        assert_eq!(add.encode(&[1, 2]).unwrap(), 0b0110);
        assert_eq!(add.input_space(), 16);
        assert_eq!(add.input_tuple(0b1101), [1, 3]);
    }

    #[test]
    fn kinds_parse() {
        for k in ArithKind::ALL {
            assert_eq!(k.as_str().parse::<ArithKind>().unwrap(), k);
        }
        assert!("div".parse::<ArithKind>().is_err());
    }
}
