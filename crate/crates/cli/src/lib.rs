//! `hsh`: tables, verification, instance runs and ratio sweeps for the
//! H–S–H amplitude-doubling circuit.
//!
//! Results go to standard output as CSV or JSON; diagnostics go to standard
//! error. Exit status is 0 on success, 1 when a check fails and 2 on usage
//! or input errors.

pub mod output;
pub mod verify;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use hsh_core::bitmath::{hamming_weight, BitString};
use hsh_core::circuit::{self, Mode, WeightRule};
use hsh_core::closedform::{self, BRUTE_FORCE_MAX_QUBITS};
use hsh_core::{Error, GaussianInt, PartitionInstance};

use crate::output::{Cell, Format, Report};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

pub const RATIO_MAX_N: u32 = 30;

#[derive(Debug, Parser)]
#[command(
    name = "hsh",
    version,
    about = "H-S-H amplitude doubling: exact tables, verification and circuit simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Unnormalized amplitudes of H^n S^n H^n |0…0⟩ for every basis state.
    Table {
        /// Number of qubits (1 to 24).
        #[arg(long)]
        n: u32,
        /// Render amplitudes as Gaussian-integer strings ("-2+2i").
        #[arg(long)]
        exact: bool,
    },
    /// Cross-check closed forms, brute-force sums and the simulator.
    Verify {
        /// Largest qubit count to check (1 to 16).
        #[arg(long)]
        max_n: u32,
    },
    /// Simulate the doubling circuit on a Partition Problem instance.
    Run {
        /// JSON file of the form {"weights": [1, 2, 3]}.
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Fast)]
        mode: ModeArg,
    },
    /// Closed-form doubling ratio P(y)·2^n over a range of sizes.
    Ratio {
        #[arg(long)]
        min_n: u32,
        #[arg(long)]
        max_n: u32,
        #[arg(long, value_enum, default_value_t = WeightRuleArg::Half)]
        weight_rule: WeightRuleArg,
        /// Solution weight for `--weight-rule fixed`.
        #[arg(long, required_if_eq("weight_rule", "fixed"))]
        weight: Option<u32>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Fast,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightRuleArg {
    /// The same weight at every n.
    Fixed,
    /// floor(n/2).
    Half,
}

/// Why a command stopped early.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Check(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::Io(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Usage(e.to_string())
    }
}

/// Runs a parsed command and returns the process exit status.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let outcome = match &cli.command {
        Command::Table { n, exact } => cmd_table(*n, *exact, cli.format, out),
        Command::Verify { max_n } => {
            cmd_verify(*max_n, &verify::Sources::default(), cli.format, out)
        }
        Command::Run { instance, mode } => cmd_run(instance, *mode, cli.format, out, err),
        Command::Ratio {
            min_n,
            max_n,
            weight_rule,
            weight,
        } => {
            let rule = match weight_rule {
                WeightRuleArg::Half => WeightRule::Half,
                WeightRuleArg::Fixed => WeightRule::Fixed(weight.unwrap_or(0)),
            };
            cmd_ratio(*min_n, *max_n, rule, cli.format, out)
        }
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "check failed: {msg}");
            EXIT_CHECK_FAILED
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn gaussian_cells(value: GaussianInt, exact: bool) -> Vec<Cell> {
    if exact {
        vec![value.to_string().into()]
    } else {
        vec![value.re.into(), value.im.into()]
    }
}

pub fn cmd_table(n: u32, exact: bool, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    if !(1..=BRUTE_FORCE_MAX_QUBITS).contains(&n) {
        return Err(Failure::Usage(format!(
            "--n must be between 1 and {BRUTE_FORCE_MAX_QUBITS}, got {n}"
        )));
    }
    let mut columns = vec!["z"];
    columns.extend(if exact {
        vec!["a_z"]
    } else {
        vec!["a_re", "a_im"]
    });
    columns.extend(["amp_re", "amp_im", "probability"]);
    let mut report = Report::new("table", columns)
        .meta("n", n)
        .meta("normalization", format!("1/2^{n}"));
    // The amplitude only depends on the weight.
    let by_weight = (0..=n)
        .map(|w| closedform::closed_form_sum(n, w))
        .collect::<Result<Vec<_>, _>>()?;
    let scale = (n as f64).exp2();
    for z in BitString::iter_all(n)? {
        let a = by_weight[hamming_weight(z) as usize];
        let amp = a.scaled(scale);
        let mut row = vec![Cell::from(z.to_string())];
        row.extend(gaussian_cells(a, exact));
        row.extend([amp.re.into(), amp.im.into(), amp.norm_sqr().into()]);
        report.push(row);
    }
    report.write(format, out)?;
    Ok(())
}

pub fn cmd_verify(
    max_n: u32,
    sources: &verify::Sources,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    if !(1..=verify::MAX_N).contains(&max_n) {
        return Err(Failure::Usage(format!(
            "--max-n must be between 1 and {}, got {max_n}",
            verify::MAX_N
        )));
    }
    let checks = verify::run_checks(max_n, sources);
    let mut report = Report::new(
        "verify",
        vec!["check", "max_n", "cases", "status", "counterexample"],
    )
    .meta("max_n", max_n);
    for check in &checks {
        report.push(vec![
            check.name.into(),
            check.max_n.into(),
            check.cases.into(),
            if check.passed() { "pass" } else { "FAIL" }.into(),
            check.counterexample.clone().into(),
        ]);
    }
    let passed = checks.iter().all(verify::CheckReport::passed);
    report = report.meta("passed", passed);
    report.write(format, out)?;
    match checks.iter().find(|c| !c.passed()) {
        Some(c) => Err(Failure::Check(format!(
            "{}: {}",
            c.name,
            c.counterexample.as_deref().unwrap_or_default()
        ))),
        None => Ok(()),
    }
}

pub fn cmd_run(
    path: &PathBuf,
    mode: ModeArg,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let instance = PartitionInstance::from_json(&text)?;
    let result = match mode {
        ModeArg::Fast => circuit::run_fast(&instance)?,
        ModeArg::Full => circuit::run_full(&instance)?,
    };
    let layout = result.layout;
    if result.solutions.len() != 2 {
        writeln!(
            err,
            "warning: instance has {} solutions; closed-form predictions need exactly 2",
            result.solutions.len()
        )?;
    }

    let mut report = Report::new(
        "run",
        vec![
            "x",
            "probability",
            "solution",
            "solved_re",
            "solved_im",
            "unsolved_re",
            "unsolved_im",
            "solved_exact",
            "b_exact",
            "predicted_probability",
            "doubling_ratio",
        ],
    )
    .meta("mode", mode_name(result.mode))
    .meta("weights", format!("{:?}", instance.weights()))
    .meta("n", layout.n())
    .meta("m", layout.m())
    .meta("half_sum", layout.half_sum())
    .meta("qubits", layout.total())
    .meta("solutions", result.solutions.len() as u64)
    .meta("total_probability", result.total_probability())
    .meta("solved_normalization", format!("1/sqrt(2^{})", layout.n()))
    .meta("unsolved_normalization", format!("1/2^{}", layout.n()));

    for (x, p) in result.probabilities.iter().enumerate() {
        let label = BitString::new(x as u64, layout.n())?.to_string();
        let mut row = vec![Cell::from(label), Cell::from(*p)];
        match result
            .solutions
            .iter()
            .find(|d| d.state.value() == x as u64)
        {
            Some(d) => row.extend([
                true.into(),
                d.solved_branch.re.into(),
                d.solved_branch.im.into(),
                d.unsolved_branch.re.into(),
                d.unsolved_branch.im.into(),
                d.solved_branch_exact.to_string().into(),
                d.residual_exact.map(|b| b.to_string()).into(),
                d.predicted_probability.into(),
                d.doubling_ratio.into(),
            ]),
            None => {
                row.push(false.into());
                row.extend(std::iter::repeat_n(Cell::Empty, 8));
            }
        }
        report.push(row);
    }
    report.write(format, out)?;
    Ok(())
}

fn mode_name(mode: Mode) -> &'static str {
    mode.as_str()
}

pub fn cmd_ratio(
    min_n: u32,
    max_n: u32,
    rule: WeightRule,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    if min_n < 1 || min_n > max_n || max_n > RATIO_MAX_N {
        return Err(Failure::Usage(format!(
            "need 1 <= --min-n <= --max-n <= {RATIO_MAX_N}, got {min_n}..{max_n}"
        )));
    }
    if let WeightRule::Fixed(w) = rule {
        if w > min_n {
            return Err(Failure::Usage(format!(
                "--weight {w} exceeds --min-n {min_n}"
            )));
        }
    }
    let rows = circuit::doubling_ratio_sweep(min_n..=max_n, |n| rule.weight_for(n))?;
    let mut report = Report::new(
        "ratio",
        vec![
            "n",
            "weight",
            "b_norm_sqr",
            "predicted_probability",
            "ratio",
            "deviation",
            "bound",
            "within_bound",
        ],
    );
    for row in &rows {
        report.push(vec![
            row.n.into(),
            row.weight.into(),
            row.residual_norm_sqr.into(),
            row.probability.into(),
            row.ratio.into(),
            row.deviation().into(),
            row.bound().into(),
            row.within_bound().into(),
        ]);
    }
    report.write(format, out)?;
    match rows.iter().find(|r| !r.within_bound()) {
        Some(r) => Err(Failure::Check(format!(
            "n={} w={}: |ratio-2| = {} exceeds {}",
            r.n,
            r.weight,
            r.deviation(),
            r.bound()
        ))),
        None => Ok(()),
    }
}
