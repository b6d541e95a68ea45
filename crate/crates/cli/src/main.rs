//! `qarith`: generate, cost, simulate, uncompute and verify reversible
//! arithmetic circuits.
//!
//! Exit status is 0 on success, 1 when `verify` finds a mismatch and 2 on
//! any error. `QARITH_SEED` supplies `--seed` when the flag is absent.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qarith::arith::{ArithKind, TaylorConstants};
use qarith::circuit::{
    lower_to_clifford_t, parse, resources, serialize, simulate, simulate_sparse,
};
use qarith::state::MAX_DENSE_QUBITS;
use qarith::verify::{exhaustive_check, run_rb};
use qarith::{bennett_wrap, BennettSpec, Circuit, Exec, NoiseModel};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "qarith",
    version,
    about = "Reversible Clifford+T arithmetic circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated circuit in the text format
    Gen {
        kind: ArithKind,
        n: usize,
        out: PathBuf,
        #[command(flatten)]
        consts: ConstArgs,
        /// Emit the Clifford+T lowering instead of Toffoli primitives
        #[arg(long)]
        lower: bool,
    },
    /// Print the resource report of a circuit file
    Metrics {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Simulate a circuit file from a basis input
    Sim {
        path: PathBuf,
        /// Basis index of the input state
        #[arg(long)]
        input: u128,
        /// Sample this many measurements instead of reading out the state
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, env = "QARITH_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Wrap a circuit file in compute, copy, uncompute
    Uncompute {
        path: PathBuf,
        /// Comma-separated wires to copy out
        #[arg(long, value_delimiter = ',', required = true)]
        outputs: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exhaustively check a generator against its classical oracle
    Verify {
        kind: ArithKind,
        n: usize,
        #[command(flatten)]
        consts: ConstArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Single-qubit randomized benchmarking under depolarizing noise
    Rb {
        /// Depolarizing probability per Clifford
        #[arg(long)]
        d: f64,
        /// Comma-separated increasing sequence lengths
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64,100")]
        lengths: Vec<usize>,
        #[arg(long, default_value_t = 50)]
        sequences: usize,
        #[arg(long, default_value_t = 100)]
        shots: u64,
        #[arg(long, env = "QARITH_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Taylor coefficients; required for `taylor`, ignored otherwise.
#[derive(Args)]
struct ConstArgs {
    #[arg(long)]
    f: Option<u64>,
    #[arg(long)]
    fp: Option<u64>,
    /// Second derivative already divided by two
    #[arg(long)]
    fpp: Option<u64>,
    #[arg(long)]
    c: Option<u64>,
}

impl ConstArgs {
    fn resolve(&self, kind: ArithKind) -> Result<TaylorConstants, String> {
        if kind != ArithKind::Taylor {
            return Ok(TaylorConstants::default());
        }
        match (self.f, self.fp, self.fpp, self.c) {
            (Some(f), Some(fp), Some(fpp), Some(c)) => Ok(TaylorConstants { f, fp, fpp, c }),
            _ => Err("taylor needs --f, --fp, --fpp and --c".into()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_circuit(path: &Path) -> Result<Circuit, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_circuit(path: &Path, c: &Circuit) -> Result<(), String> {
    fs::write(path, serialize(c)).map_err(|e| format!("{}: {e}", path.display()))
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

/// Ok(false) means the command ran but a check failed.
fn run(cmd: Command) -> Result<bool, String> {
    let err = |e: qarith::Error| e.to_string();
    match cmd {
        Command::Gen {
            kind,
            n,
            out,
            consts,
            lower,
        } => {
            let inst = kind.build(n, consts.resolve(kind)?).map_err(err)?;
            let c = if lower {
                lower_to_clifford_t(&inst.circuit)
            } else {
                inst.circuit
            };
            write_circuit(&out, &c)?;
        }
        Command::Metrics { path, format } => {
            let r = resources(&read_circuit(&path)?);
            match format {
                Format::Text => print!("{}", r.to_text()),
                Format::Json => print!("{}", pretty(&r)),
            }
        }
        Command::Sim {
            path,
            input,
            shots,
            seed,
            format,
        } => {
            print!(
                "{}",
                sim(&read_circuit(&path)?, input, shots, seed, format)?
            );
        }
        Command::Uncompute { path, outputs, out } => {
            let wrapped =
                bennett_wrap(&BennettSpec::new(read_circuit(&path)?, outputs)).map_err(err)?;
            write_circuit(&out, &wrapped)?;
        }
        Command::Verify {
            kind,
            n,
            consts,
            format,
        } => {
            let k = consts.resolve(kind)?;
            let inst = kind.build(n, k).map_err(err)?;
            let report =
                exhaustive_check(&inst, kind.oracle(n, k), Exec::default()).map_err(err)?;
            match format {
                Format::Text => print!("kind: {kind}\nn: {n}\n{}", report.to_text()),
                Format::Json => print!("{}", pretty(&report)),
            }
            return Ok(report.passed);
        }
        Command::Rb {
            d,
            lengths,
            sequences,
            shots,
            seed,
            format,
        } => {
            let noise = NoiseModel::new(d).map_err(err)?;
            let r =
                run_rb(noise, &lengths, sequences, shots, seed, Exec::default()).map_err(err)?;
            match format {
                Format::Text => print!("{}", r.to_text()),
                Format::Json => print!("{}", pretty(&r)),
            }
        }
    }
    Ok(true)
}

fn bits(basis: u128, n: usize) -> String {
    (0..n)
        .rev()
        .map(|q| if (basis >> q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn sim(
    c: &Circuit,
    input: u128,
    shots: Option<u64>,
    seed: u64,
    format: Format,
) -> Result<String, String> {
    let n = c.n_qubits();
    if n < 128 && input >> n != 0 {
        return Err(format!("input {input} out of range for {n} qubits"));
    }
    let err = |e: qarith::Error| e.to_string();
    // (basis, amplitude) pairs with nonzero weight, sorted by basis
    let entries: Vec<(u128, f64, f64)>;
    let counts: Option<Vec<(u128, u64)>>;
    if n <= MAX_DENSE_QUBITS {
        let s = simulate(c, input as usize).map_err(err)?;
        entries = s
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 1e-24)
            .map(|(k, a)| (k as u128, a.re, a.im))
            .collect();
        counts = match shots {
            Some(k) => Some(
                s.sample(k, seed)
                    .map_err(err)?
                    .counts
                    .into_iter()
                    .map(|(b, v)| (b as u128, v))
                    .collect(),
            ),
            None => None,
        };
    } else {
        let s = simulate_sparse(c, input).map_err(err)?;
        entries = s
            .entries()
            .into_iter()
            .map(|(k, a)| (k, a.re, a.im))
            .collect();
        counts = match shots {
            Some(k) => Some(s.sample(k, seed).map_err(err)?.into_iter().collect()),
            None => None,
        };
    }

    let mut out = String::new();
    if let Some(counts) = counts {
        match format {
            Format::Text => {
                for (b, k) in &counts {
                    writeln!(out, "{}: {k}", bits(*b, n)).unwrap();
                }
            }
            Format::Json => {
                let m: serde_json::Map<String, serde_json::Value> = counts
                    .iter()
                    .map(|(b, k)| (bits(*b, n), json!(k)))
                    .collect();
                out = pretty(&json!({ "shots": shots, "counts": m }));
            }
        }
        return Ok(out);
    }

    let single =
        entries.len() == 1 && ((entries[0].1.powi(2) + entries[0].2.powi(2)) - 1.0).abs() < 1e-9;
    if single {
        let basis = entries[0].0;
        let regs: Vec<(String, u128)> = c
            .layout()
            .registers
            .iter()
            .map(|r| {
                let mask = if r.width() >= 128 {
                    u128::MAX
                } else {
                    (1u128 << r.width()) - 1
                };
                (r.name.clone(), (basis >> r.lo) & mask)
            })
            .collect();
        match format {
            Format::Text => {
                for (name, v) in &regs {
                    writeln!(out, "{name}: {v}").unwrap();
                }
            }
            Format::Json => {
                let m: serde_json::Map<String, serde_json::Value> =
                    regs.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
                out = pretty(&json!({ "basis": bits(basis, n), "registers": m }));
            }
        }
    } else {
        match format {
            Format::Text => {
                for (b, re, im) in &entries {
                    writeln!(out, "{}: {re:+.6} {im:+.6}i", bits(*b, n)).unwrap();
                }
            }
            Format::Json => {
                let amps: Vec<_> = entries
                    .iter()
                    .map(|(b, re, im)| json!({ "basis": bits(*b, n), "re": re, "im": im }))
                    .collect();
                out = pretty(&json!({ "amplitudes": amps }));
            }
        }
    }
    Ok(out)
}
