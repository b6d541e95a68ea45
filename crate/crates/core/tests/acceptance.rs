//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fail or overrun their time budget.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qarith::arith::{
    build_adder, build_ctrl_add, build_multiplier, build_subtractor, build_taylor, ArithKind,
};
use qarith::circuit::{lower_to_clifford_t, parse, resources, serialize, simulate, unitary};
use qarith::verify::{exhaustive_check, run_rb, tomography_1q, EquivalenceReport};
use qarith::{
    bennett_wrap, ArithInstance, BennettSpec, Circuit, Exec, Gate, NoiseModel, TaylorConstants,
    UnitaryMatrix,
};

type Check = std::result::Result<(), String>;

/// Name, time budget, check.
type Criterion = (&'static str, Duration, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

const UNITARY_TOL: f64 = 1e-10;
const TOMOGRAPHY_TOL: f64 = 0.05;
const RB_REL_TOL: f64 = 0.10;

/// Classical-permutation matrix of a 3-wire gate given as a basis map.
fn permutation(n: usize, f: impl Fn(usize) -> usize) -> UnitaryMatrix {
    let dim = 1 << n;
    let mut m = UnitaryMatrix::zeros(dim);
    for col in 0..dim {
        m.set(f(col), col, Complex64::new(1.0, 0.0));
    }
    m
}

fn bit(x: usize, k: usize) -> usize {
    (x >> k) & 1
}

fn lowering_check(gate: Gate, want: UnitaryMatrix) -> Check {
    let c = Circuit::from_ops(3, vec![gate]).unwrap();
    let lowered = lower_to_clifford_t(&c);
    ensure!(
        lowered.ops().iter().all(Gate::is_clifford_t),
        "lowering left non Clifford+T gates"
    );
    let t = lowered.ops().iter().filter(|g| g.is_t_type()).count();
    ensure!(t == 7, "T-count {t}, expected 7");
    ensure!(
        resources(&c).t_count == 7,
        "resource report disagrees with gate count"
    );
    let u = unitary(&lowered).map_err(|e| e.to_string())?;
    ensure!(
        u.equal_up_to_phase(&want, UNITARY_TOL),
        "unitary differs beyond {UNITARY_TOL}"
    );
    Ok(())
}

fn toffoli_lowering() -> Check {
    lowering_check(
        Gate::toffoli(0, 1, 2),
        permutation(3, |x| x ^ ((bit(x, 0) & bit(x, 1)) << 2)),
    )
}

fn fredkin_lowering() -> Check {
    lowering_check(
        Gate::fredkin(0, 1, 2),
        permutation(3, |x| {
            if bit(x, 0) == 1 && bit(x, 1) != bit(x, 2) {
                x ^ 0b110
            } else {
                x
            }
        }),
    )
}

fn passed(r: EquivalenceReport, total: u64) -> Check {
    ensure!(
        r.total_inputs == total,
        "{} inputs, expected {total}",
        r.total_inputs
    );
    ensure!(
        r.passed,
        "{} mismatches, first {:?}",
        r.mismatches.len(),
        r.mismatches.first()
    );
    Ok(())
}

fn check(inst: &ArithInstance, oracle: impl Fn(&[u64]) -> Vec<u64> + Sync, total: u64) -> Check {
    passed(
        exhaustive_check(inst, oracle, Exec::default()).map_err(|e| e.to_string())?,
        total,
    )
}

fn adder_exhaustive() -> Check {
    let inst = build_adder(4).unwrap();
    ensure!(
        inst.circuit.n_qubits() == 9,
        "adder(4) has {} qubits",
        inst.circuit.n_qubits()
    );
    let r = resources(&inst.circuit);
    ensure!(
        (r.ancilla_count, r.garbage_count) == (1, 0),
        "ancilla/garbage {:?}",
        (r.ancilla_count, r.garbage_count)
    );
    // outputs: sum in B, carry, A
    check(
        &inst,
        |v| vec![(v[0] + v[1]) % 16, (v[0] + v[1]) / 16, v[0]],
        256,
    )
}

fn subtractor_exhaustive() -> Check {
    let inst = build_subtractor(4).unwrap();
    ensure!(
        inst.circuit.n_qubits() == 8,
        "subtractor(4) has {} qubits",
        inst.circuit.n_qubits()
    );
    check(&inst, |v| vec![(v[1] + 16 - v[0]) % 16, v[0]], 256)
}

fn ctrl_add_exhaustive() -> Check {
    let inst = build_ctrl_add(4).unwrap();
    // inputs (ctrl, a, b); outputs ctrl, B, carry, A
    check(
        &inst,
        |v| match v[0] {
            1 => vec![1, (v[1] + v[2]) % 16, (v[1] + v[2]) / 16, v[1]],
            _ => vec![0, v[2], 0, v[1]],
        },
        512,
    )
}

fn multiplier_exhaustive() -> Check {
    let inst = build_multiplier(3).unwrap();
    ensure!(
        inst.circuit.n_qubits() == 13,
        "multiplier(3) has {} qubits",
        inst.circuit.n_qubits()
    );
    // full 7-bit P read back, so P[6] must be 0
    check(&inst, |v| vec![v[0] * v[1], v[0], v[1]], 64)
}

fn taylor_exhaustive() -> Check {
    let k = TaylorConstants {
        f: 5,
        fp: 3,
        fpp: 1,
        c: 2,
    };
    let inst = build_taylor(4, k).map_err(|e| e.to_string())?;
    let oracle = |v: &[u64]| {
        let d = (v[0] + 16 - 2) % 16;
        vec![v[0], (5 + 3 * d + d * d) % 16]
    };
    check(&inst, oracle, 16)
}

fn bennett_adder() -> Check {
    let inst = build_adder(3).unwrap();
    let inner = inst.circuit.clone();
    let sum: Vec<usize> = inst.register("b").unwrap().qubits().collect();
    let w =
        bennett_wrap(&BennettSpec::new(inner.clone(), sum.clone())).map_err(|e| e.to_string())?;
    ensure!(
        w.len() == 2 * inner.len() + sum.len(),
        "{} gates, expected {}",
        w.len(),
        2 * inner.len() + sum.len()
    );
    let n = inner.n_qubits();
    for a in 0..8usize {
        for b in 0..8usize {
            let basis = b | a << 3;
            let out = simulate(&w, basis)
                .map_err(|e| e.to_string())?
                .basis_readout(1e-9)
                .ok_or("output not a basis state")?;
            ensure!(
                out & ((1 << n) - 1) == basis,
                "a={a} b={b}: non-copy wires not restored"
            );
            ensure!(
                out >> n == (a + b) % 8,
                "a={a} b={b}: copy holds {}",
                out >> n
            );
        }
    }
    Ok(())
}

fn bell_statistics() -> Check {
    let bell = Circuit::from_ops(2, vec![Gate::H(0), Gate::cnot(0, 1)]).unwrap();
    let shots = 10_000u64;
    let counts = simulate(&bell, 0).unwrap().sample(shots, 2024).unwrap();
    let sigma = (shots as f64 * 0.25).sqrt();
    ensure!(
        counts.get(1) == 0 && counts.get(2) == 0,
        "saw 01 or 10: {:?}",
        counts.counts
    );
    for k in [0, 3] {
        let dev = (counts.get(k) as f64 - 5000.0).abs();
        ensure!(
            dev <= 3.0 * sigma,
            "outcome {k}: {} is {dev} from 5000",
            counts.get(k)
        );
    }
    Ok(())
}

fn rb_decay() -> Check {
    let lengths = [1, 2, 4, 8, 16, 32, 64, 100];
    let d = 0.02;
    let r = run_rb(
        NoiseModel::new(d).unwrap(),
        &lengths,
        200,
        100,
        7,
        Exec::default(),
    )
    .map_err(|e| e.to_string())?;
    // m uniformly depolarizing steps shrink the Bloch vector by (1 - d) each
    let analytic = 1.0 - d;
    let rel = (r.fit_p - analytic).abs() / analytic;
    ensure!(
        rel <= RB_REL_TOL,
        "p = {} vs analytic {analytic} (rel {rel})",
        r.fit_p
    );
    ensure!(r.fit_p < 1.0, "noisy fit returned p = 1");
    let clean = run_rb(
        NoiseModel::new(0.0).unwrap(),
        &lengths,
        20,
        20,
        7,
        Exec::default(),
    )
    .map_err(|e| e.to_string())?;
    ensure!(clean.fit_p == 1.0, "noiseless p = {}", clean.fit_p);
    ensure!(
        clean.mean_fidelity.iter().all(|&f| f == 1.0),
        "noiseless survival below 1"
    );
    Ok(())
}

fn tomography() -> Check {
    let cases = [
        (vec![], [0.0, 0.0, 1.0]),
        (vec![Gate::X(0)], [0.0, 0.0, -1.0]),
        (vec![Gate::H(0)], [1.0, 0.0, 0.0]),
    ];
    for (seed, (ops, want)) in cases.into_iter().enumerate() {
        let prep = Circuit::from_ops(1, ops).unwrap();
        let got = tomography_1q(&prep, 10_000, seed as u64).map_err(|e| e.to_string())?;
        for axis in 0..3 {
            ensure!(
                (got[axis] - want[axis]).abs() <= TOMOGRAPHY_TOL,
                "prep {:?}: estimate {got:?} vs {want:?}",
                prep.ops()
            );
        }
    }
    Ok(())
}

fn mutation_sensitivity() -> Check {
    let inst = build_adder(3).unwrap();
    let oracle = |v: &[u64]| vec![(v[0] + v[1]) % 8, (v[0] + v[1]) / 8, v[0]];
    let ops = inst.circuit.ops();
    let mut survivors = Vec::new();
    for k in 0..ops.len() {
        let mut mutated = ops.to_vec();
        mutated.remove(k);
        let m = ArithInstance {
            circuit: inst.circuit.with_ops(mutated).unwrap(),
            ..inst.clone()
        };
        if exhaustive_check(&m, oracle, Exec::default())
            .map_err(|e| e.to_string())?
            .passed
        {
            survivors.push(format!("#{k} {}", ops[k]));
        }
    }
    ensure!(
        survivors.is_empty(),
        "undetected deletions: {}",
        survivors.join(", ")
    );
    Ok(())
}

fn format_round_trip() -> Check {
    let k = TaylorConstants {
        f: 5,
        fp: 3,
        fpp: 1,
        c: 2,
    };
    let mut corpus = Vec::new();
    for kind in ArithKind::ALL {
        for n in 1..=4 {
            let c = kind
                .build(
                    n,
                    TaylorConstants {
                        f: k.f % (1 << n),
                        fp: k.fp % (1 << n),
                        fpp: k.fpp,
                        c: k.c % (1 << n),
                    },
                )
                .map_err(|e| e.to_string())?
                .circuit;
            corpus.push(lower_to_clifford_t(&c));
            let first = c.layout().registers[0].qubits().collect();
            corpus.push(
                bennett_wrap(&BennettSpec::new(c.clone(), first)).map_err(|e| e.to_string())?,
            );
            corpus.push(c);
        }
    }
    for c in &corpus {
        let text = serialize(c);
        let back = parse(&text).map_err(|e| e.to_string())?;
        ensure!(
            &back == c,
            "round trip changed a {}-qubit circuit",
            c.n_qubits()
        );
        ensure!(
            serialize(&back) == text,
            "re-serialization not byte-identical"
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("Toffoli lowering", Duration::from_secs(1), toffoli_lowering),
        ("Fredkin lowering", Duration::from_secs(1), fredkin_lowering),
        (
            "adder n=4 exhaustive",
            Duration::from_secs(10),
            adder_exhaustive,
        ),
        (
            "subtractor n=4 exhaustive",
            Duration::from_secs(10),
            subtractor_exhaustive,
        ),
        (
            "ctrl-add n=4 exhaustive",
            Duration::from_secs(20),
            ctrl_add_exhaustive,
        ),
        (
            "multiplier n=3 exhaustive",
            Duration::from_secs(60),
            multiplier_exhaustive,
        ),
        (
            "Taylor n=4 all x",
            Duration::from_secs(60),
            taylor_exhaustive,
        ),
        (
            "Bennett wrap of adder n=3",
            Duration::from_secs(30),
            bennett_adder,
        ),
        ("Bell statistics", Duration::from_secs(1), bell_statistics),
        ("RB decay", Duration::from_secs(120), rb_decay),
        (
            "single-qubit tomography",
            Duration::from_secs(5),
            tomography,
        ),
        (
            "mutation sensitivity",
            Duration::from_secs(120),
            mutation_sensitivity,
        ),
        (
            "format round trip",
            Duration::from_secs(5),
            format_round_trip,
        ),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed <= *budget {
                Ok(())
            } else {
                Err(format!("took {elapsed:.2?}, budget {budget:?}"))
            }
        });
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
