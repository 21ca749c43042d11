//! Command-line front end: parameter sweeps emitted as CSV or JSON tables.

mod table;

pub use table::{round_significant, Cell, Table};

use std::ffi::OsString;
use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::channel_core::mc_average_fidelity;
use crate::error::Error;
use crate::heisenberg::{spin_k_fidelity, SpinKMode};
use crate::memory_dynamics::{
    recycled_fidelity_reoptimized, recycled_fidelity_with, thermal_advantage_threshold, thermal_asymptote, thermal_fidelity,
    KernelForm,
};
use crate::mo_benchmark::{mo_optimal_fidelity, spin_k_mo_fidelity};
use crate::quantum_optimal::{optimal_fidelity, Problem};
use crate::spin_algebra::SpinLabel;
use crate::tolerance;

#[derive(Parser, Debug)]
#[command(name = "qrotlearn", version, about = "Learning qubit rotations from a spin-j memory: sweeps and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Optimal quantum fidelity. Columns: two_j, j, theta_over_pi, problem, regime, optimal_two_m, f_quantum.
    Optimal {
        #[command(flatten)]
        grid: Grid,
        #[command(flatten)]
        problems: Problems,
        #[command(flatten)]
        output: Output,
    },
    /// Quantum optimum against the measure-and-operate benchmark.
    /// Columns: two_j, j, theta_over_pi, problem, f_quantum, f_mo, advantage.
    Benchmark {
        #[command(flatten)]
        grid: Grid,
        #[command(flatten)]
        problems: Problems,
        #[command(flatten)]
        output: Output,
    },
    /// Fidelity under repeated use of one memory.
    /// Columns: two_j, theta_over_pi, t, f_t, f_mo, above_benchmark, crossing.
    Recycle {
        #[command(flatten)]
        grid: Grid,
        /// Number of uses; defaults to 2j.
        #[arg(long = "n-uses")]
        n_uses: Option<usize>,
        #[arg(long, value_enum, default_value_t = KernelArg::LeadingOrder)]
        kernel: KernelArg,
        /// Re-choose the interaction angle before every use.
        #[arg(long)]
        reoptimize: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Thermal memory. Columns: two_j, theta_over_pi, gamma, f_thermal, f_asymptote, f_mo, advantage, gamma_star.
    Thermal {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 2.0])]
        gamma: Vec<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Spin-k targets. Columns: two_j, two_k, theta_over_pi, f_quantum, f_quantum_asymptote,
    /// f_mo, f_mo_std_error, f_mo_asymptote, error_ratio.
    SpinK {
        #[command(flatten)]
        grid: Grid,
        #[arg(long = "two-k", value_delimiter = ',', default_values_t = vec![2u32, 3])]
        two_k: Vec<u32>,
        #[command(flatten)]
        mc: MonteCarlo,
        #[command(flatten)]
        output: Output,
    },
    /// Monte-Carlo check of every closed form; exits 1 on any 4σ violation.
    Verify {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1u8, 2])]
        problem: Vec<u8>,
        #[command(flatten)]
        mc: MonteCarlo,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Grid {
    /// Memory spins as 2j, comma separated.
    #[arg(long = "two-j", value_delimiter = ',')]
    pub two_j: Vec<u32>,
    /// Rotation angles in units of π, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "theta_grid")]
    pub theta: Vec<f64>,
    /// Number of equally spaced angles from --theta-min to --theta-max inclusive.
    #[arg(long = "theta-grid")]
    pub theta_grid: Option<usize>,
    #[arg(long = "theta-min", default_value_t = 0.0)]
    pub theta_min: f64,
    #[arg(long = "theta-max", default_value_t = 1.0)]
    pub theta_max: f64,
}

#[derive(Args, Debug, Clone)]
pub struct Problems {
    /// 1: probe fixed to |j,j⟩; 2: probe optimized too.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1u8])]
    pub problem: Vec<u8>,
}

#[derive(Args, Debug, Clone)]
pub struct MonteCarlo {
    #[arg(long = "n-samples", default_value_t = 100_000)]
    pub n_samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    LeadingOrder,
    Exact,
}

/// Failure of a command, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(Error),
    VerificationFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(
                Error::OutOfRange { .. } | Error::InvalidQuantumNumbers(_) | Error::InvalidMagneticIndex { .. } | Error::InapplicableCase { .. },
            ) => 2,
            CliError::Compute(_) | CliError::VerificationFailed(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Compute(e) => write!(f, "{e}"),
            CliError::VerificationFailed(n) => write!(f, "{n} verification check(s) failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

impl Grid {
    fn spins(&self, default: &[u32]) -> CliResult<Vec<u32>> {
        let v = if self.two_j.is_empty() { default.to_vec() } else { self.two_j.clone() };
        if v.contains(&0) {
            return Err(CliError::Usage("--two-j must be at least 1".into()));
        }
        Ok(v)
    }

    /// Angles in radians.
    fn thetas(&self, default: &[f64]) -> CliResult<Vec<f64>> {
        let units: Vec<f64> = match self.theta_grid {
            Some(0) => return Err(CliError::Usage("--theta-grid must be positive".into())),
            Some(1) => vec![self.theta_min],
            Some(n) => (0..n).map(|i| self.theta_min + (self.theta_max - self.theta_min) * i as f64 / (n - 1) as f64).collect(),
            None if self.theta.is_empty() => default.to_vec(),
            None => self.theta.clone(),
        };
        if let Some(bad) = units.iter().find(|&&u| !(0.0..2.0).contains(&u)) {
            return Err(CliError::Usage(format!("theta {bad}π lies outside [0, 2π)")));
        }
        Ok(units.into_iter().map(|u| u * PI).collect())
    }
}

impl Problems {
    fn parse(&self) -> CliResult<Vec<Problem>> {
        self.problem.iter().map(|&p| Problem::from_index(p).map_err(|e| CliError::Usage(e.to_string()))).collect()
    }
}

fn spin_j(two_j: u32) -> Cell {
    Cell::float(f64::from(two_j) / 2.0)
}

fn over_pi(theta: f64) -> Cell {
    Cell::float(theta / PI)
}

/// Evaluates every grid point in parallel and concatenates rows in grid order.
fn sweep<P, F>(points: Vec<P>, f: F) -> CliResult<Vec<Vec<Cell>>>
where
    P: Send + Sync,
    F: Fn(usize, &P) -> CliResult<Vec<Vec<Cell>>> + Sync + Send,
{
    let parts: Vec<CliResult<Vec<Vec<Cell>>>> = points.par_iter().enumerate().map(|(i, p)| f(i, p)).collect();
    let mut rows = Vec::new();
    for part in parts {
        rows.extend(part?);
    }
    Ok(rows)
}

fn product<A: Copy, B: Copy>(a: &[A], b: &[B]) -> Vec<(A, B)> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
}

fn cmd_optimal(grid: &Grid, problems: &Problems) -> CliResult<Table> {
    let mut table = Table::new(vec!["two_j", "j", "theta_over_pi", "problem", "regime", "optimal_two_m", "f_quantum"]);
    let problems = problems.parse()?;
    let points: Vec<((u32, f64), Problem)> = product(&product(&grid.spins(&[3])?, &grid.thetas(&[1.0])?), &problems);
    table.rows = sweep(points, |_, &((two_j, theta), problem)| {
        let r = optimal_fidelity(SpinLabel::new(two_j), theta, problem)?;
        let regime = serde_json::to_value(r.regime).expect("regime serializes");
        Ok(vec![vec![
            Cell::Int(i64::from(two_j)),
            spin_j(two_j),
            over_pi(theta),
            Cell::Int(i64::from(problem.index())),
            Cell::Text(regime.as_str().unwrap_or_default().to_string()),
            Cell::Int(i64::from(r.optimal_two_m)),
            Cell::float(r.fidelity),
        ]])
    })?;
    Ok(table)
}

fn cmd_benchmark(grid: &Grid, problems: &Problems) -> CliResult<Table> {
    let mut table = Table::new(vec!["two_j", "j", "theta_over_pi", "problem", "f_quantum", "f_mo", "advantage"]);
    let problems = problems.parse()?;
    let default: Vec<u32> = (1..=20).collect();
    let points = product(&product(&grid.spins(&default)?, &grid.thetas(&[1.0])?), &problems);
    table.rows = sweep(points, |_, &((two_j, theta), problem)| {
        let spin = SpinLabel::new(two_j);
        let q = optimal_fidelity(spin, theta, problem)?.fidelity;
        let mo = mo_optimal_fidelity(spin, theta, problem)?.fidelity;
        Ok(vec![vec![
            Cell::Int(i64::from(two_j)),
            spin_j(two_j),
            over_pi(theta),
            Cell::Int(i64::from(problem.index())),
            Cell::float(q),
            Cell::float(mo),
            Cell::float(round_significant(q) - round_significant(mo)),
        ]])
    })?;
    Ok(table)
}

fn cmd_recycle(grid: &Grid, n_uses: Option<usize>, kernel: KernelArg, reoptimize: bool) -> CliResult<Table> {
    let mut table = Table::new(vec!["two_j", "theta_over_pi", "t", "f_t", "f_mo", "above_benchmark", "crossing"]);
    let kernel = match kernel {
        KernelArg::LeadingOrder => KernelForm::LeadingOrder,
        KernelArg::Exact => KernelForm::Exact,
    };
    let points = product(&grid.spins(&[200, 400, 800])?, &grid.thetas(&[1.0])?);
    table.rows = sweep(points, |_, &(two_j, theta)| {
        let spin = SpinLabel::new(two_j);
        let n = n_uses.unwrap_or(two_j as usize).max(1);
        let f = if reoptimize {
            recycled_fidelity_reoptimized(spin, theta, n)?
        } else {
            recycled_fidelity_with(kernel, spin, theta, n)?
        };
        let mo = mo_optimal_fidelity(spin, theta, Problem::Problem1)?.fidelity;
        Ok((0..n)
            .map(|t| {
                let above = f[t] > mo;
                let crossing = above && f.get(t + 1).is_some_and(|&next| next <= mo);
                vec![
                    Cell::Int(i64::from(two_j)),
                    over_pi(theta),
                    Cell::Int(t as i64 + 1),
                    Cell::float(f[t]),
                    Cell::float(mo),
                    Cell::Bool(above),
                    Cell::Bool(crossing),
                ]
            })
            .collect())
    })?;
    Ok(table)
}

fn cmd_thermal(grid: &Grid, gammas: &[f64]) -> CliResult<Table> {
    let mut table = Table::new(vec!["two_j", "theta_over_pi", "gamma", "f_thermal", "f_asymptote", "f_mo", "advantage", "gamma_star"]);
    if let Some(bad) = gammas.iter().find(|&&g| !(g > 0.0)) {
        return Err(CliError::Usage(format!("--gamma {bad} must be positive")));
    }
    let points = product(&grid.spins(&[1000])?, &grid.thetas(&[1.0])?);
    table.rows = sweep(points, |_, &(two_j, theta)| {
        let spin = SpinLabel::new(two_j);
        let mo = mo_optimal_fidelity(spin, theta, Problem::Problem1)?.fidelity;
        let star = match thermal_advantage_threshold(spin, theta) {
            Ok(g) => Cell::float(g),
            Err(Error::Infeasible(_)) => Cell::Text(String::new()),
            Err(e) => return Err(e.into()),
        };
        gammas
            .iter()
            .map(|&gamma| {
                let f = thermal_fidelity(spin, theta, gamma)?;
                Ok(vec![
                    Cell::Int(i64::from(two_j)),
                    over_pi(theta),
                    Cell::float(gamma),
                    Cell::float(f),
                    Cell::float(thermal_asymptote(spin, theta, gamma)),
                    Cell::float(mo),
                    Cell::float(f - mo),
                    star.clone(),
                ])
            })
            .collect()
    })?;
    Ok(table)
}

fn cmd_spin_k(grid: &Grid, two_ks: &[u32], mc: &MonteCarlo) -> CliResult<Table> {
    let mut table = Table::new(vec![
        "two_j",
        "two_k",
        "theta_over_pi",
        "f_quantum",
        "f_quantum_asymptote",
        "f_mo",
        "f_mo_std_error",
        "f_mo_asymptote",
        "error_ratio",
    ]);
    if two_ks.contains(&0) {
        return Err(CliError::Usage("--two-k must be at least 1".into()));
    }
    let points = product(&product(&grid.spins(&[400])?, two_ks), &grid.thetas(&[1.0])?);
    table.rows = sweep(points, |index, &((two_j, two_k), theta)| {
        let q = spin_k_fidelity(two_j, two_k, theta, SpinKMode::Exact)?;
        let qa = spin_k_fidelity(two_j, two_k, theta, SpinKMode::Asymptotic)?;
        let mut rng = ChaCha8Rng::seed_from_u64(mc.seed);
        rng.set_stream(index as u64);
        let m = spin_k_mo_fidelity(two_j, two_k, theta, mc.n_samples, &mut rng)?;
        let ratio = if q < 1.0 { (1.0 - m.estimate.value) / (1.0 - q) } else { f64::NAN };
        Ok(vec![vec![
            Cell::Int(i64::from(two_j)),
            Cell::Int(i64::from(two_k)),
            over_pi(theta),
            Cell::float(q),
            Cell::float(qa),
            Cell::float(m.estimate.value),
            Cell::float(m.estimate.std_error),
            Cell::float(m.asymptote),
            if ratio.is_finite() { Cell::float(ratio) } else { Cell::Text(String::new()) },
        ]])
    })?;
    Ok(table)
}

/// Runs every optimal and benchmark strategy operationally and compares with the closed forms.
fn cmd_verify(grid: &Grid, problems: &Problems, mc: &MonteCarlo) -> CliResult<(Table, usize)> {
    let mut table = Table::new(vec![
        "check",
        "two_j",
        "theta_over_pi",
        "problem",
        "strategy",
        "expected",
        "estimate",
        "std_error",
        "z",
        "pass",
    ]);
    let problems = problems.parse()?;
    let points: Vec<(((u32, f64), Problem), &str)> =
        product(&product(&product(&grid.spins(&[1, 2, 3])?, &grid.thetas(&[0.5, 1.0])?), &problems), &["quantum", "mo"]);
    table.rows = sweep(points, |index, &(((two_j, theta), problem), check)| {
        let spin = SpinLabel::new(two_j);
        let report = match check {
            "quantum" => optimal_fidelity(spin, theta, problem)?,
            _ => mo_optimal_fidelity(spin, theta, problem)?,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(mc.seed);
        rng.set_stream(index as u64);
        let est = mc_average_fidelity(&report.strategy, theta, mc.n_samples, &mut rng)?;
        let z = est.z_score(report.fidelity);
        let strategy = serde_json::to_value(&report.strategy).expect("strategy serializes");
        Ok(vec![vec![
            Cell::Text(check.to_string()),
            Cell::Int(i64::from(two_j)),
            over_pi(theta),
            Cell::Int(i64::from(problem.index())),
            Cell::Text(strategy["kind"].as_str().unwrap_or_default().to_string()),
            Cell::float(report.fidelity),
            Cell::float(est.value),
            Cell::float(est.std_error),
            if z.is_finite() { Cell::float(z) } else { Cell::Text("inf".into()) },
            Cell::Bool(z.abs() <= tolerance::MC_SIGMAS),
        ]])
    })?;
    let failures = table.rows.iter().filter(|r| r.last() == Some(&Cell::Bool(false))).count();
    Ok((table, failures))
}

fn emit(text: &str, out: &Option<PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(table: &Table, format: Format) -> CliResult<String> {
    Ok(match format {
        Format::Csv => table.to_csv()?,
        Format::Json => table.to_json(),
    })
}

/// Executes a parsed command, writing its table to `--out` or standard output.
pub fn execute(cli: &Cli) -> CliResult<()> {
    let (table, output) = match &cli.command {
        Command::Optimal { grid, problems, output } => (cmd_optimal(grid, problems)?, output),
        Command::Benchmark { grid, problems, output } => (cmd_benchmark(grid, problems)?, output),
        Command::Recycle { grid, n_uses, kernel, reoptimize, output } => (cmd_recycle(grid, *n_uses, *kernel, *reoptimize)?, output),
        Command::Thermal { grid, gamma, output } => (cmd_thermal(grid, gamma)?, output),
        Command::SpinK { grid, two_k, mc, output } => (cmd_spin_k(grid, two_k, mc)?, output),
        Command::Verify { grid, problem, mc, out, format } => {
            let (table, failures) = cmd_verify(grid, &Problems { problem: problem.clone() }, mc)?;
            let text = match format {
                Format::Csv => table.to_csv()?,
                Format::Json => {
                    let report = json!({
                        "passed": failures == 0,
                        "failures": failures,
                        "n_samples": mc.n_samples,
                        "seed": mc.seed,
                        "sigmas": tolerance::MC_SIGMAS,
                        "checks": table.to_json_value(),
                    });
                    serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
                }
            };
            emit(&text, out)?;
            return if failures == 0 { Ok(()) } else { Err(CliError::VerificationFailed(failures)) };
        }
    };
    emit(&render(&table, output.format)?, &output.out)
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qrotlearn: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("qrotlearn").chain(args.iter().copied())).unwrap()
    }

    fn table_of(args: &[&str]) -> Table {
        match &parse(args).command {
            Command::Optimal { grid, problems, .. } => cmd_optimal(grid, problems).unwrap(),
            Command::Benchmark { grid, problems, .. } => cmd_benchmark(grid, problems).unwrap(),
            Command::Recycle { grid, n_uses, kernel, reoptimize, .. } => cmd_recycle(grid, *n_uses, *kernel, *reoptimize).unwrap(),
            Command::Thermal { grid, gamma, .. } => cmd_thermal(grid, gamma).unwrap(),
            Command::SpinK { grid, two_k, mc, .. } => cmd_spin_k(grid, two_k, mc).unwrap(),
            Command::Verify { grid, problem, mc, .. } => cmd_verify(grid, &Problems { problem: problem.clone() }, mc).unwrap().0,
        }
    }

    fn float(c: &Cell) -> f64 {
        match c {
            Cell::Float(x) => *x,
            other => panic!("not a float: {other:?}"),
        }
    }

    #[test]
    fn optimal_grid_is_monotone() {
        let t = table_of(&["optimal", "--two-j", "4", "--theta-grid", "100"]);
        assert_eq!(t.rows.len(), 100);
        let f: Vec<f64> = t.rows.iter().map(|r| float(&r[6])).collect();
        assert!(f.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn optimal_reference_rows() {
        let t = table_of(&["optimal", "--two-j", "3", "--theta", "1"]);
        assert_eq!(float(&t.rows[0][6]), 0.708333333333);
        let t = table_of(&["optimal", "--two-j", "2", "--theta", "1", "--problem", "2"]);
        assert_eq!(float(&t.rows[0][6]), 0.733333333333);
    }

    #[test]
    fn benchmark_rows() {
        let t = table_of(&["benchmark", "--two-j", "3,1", "--theta", "1,0"]);
        let row = |i: usize| (float(&t.rows[i][4]), float(&t.rows[i][5]), float(&t.rows[i][6]));
        let (q, mo, adv) = row(0);
        assert!((q - 0.70833).abs() < 1e-5 && (mo - 0.64444).abs() < 1e-5 && (adv - 0.06389).abs() < 1e-5);
        assert_eq!(row(1).2, 0.0);
        assert!(row(2).2.abs() < 1e-10);
        assert_eq!(row(3).2, 0.0);
    }

    #[test]
    fn recycle_flags_crossing() {
        let t = table_of(&["recycle", "--two-j", "200", "--theta", "1", "--n-uses", "80"]);
        let crossing: Vec<i64> = t
            .rows
            .iter()
            .filter(|r| r[6] == Cell::Bool(true))
            .map(|r| match r[2] {
                Cell::Int(t) => t,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(crossing, vec![50]);
        let q = table_of(&["optimal", "--two-j", "200", "--theta", "1"]);
        assert_eq!(float(&t.rows[0][3]), float(&q.rows[0][6]));
    }

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(run(["qrotlearn", "optimal", "--theta", "2.5"]), 2);
        assert_eq!(run(["qrotlearn", "optimal", "--problem", "3"]), 2);
        assert_eq!(run(["qrotlearn", "bogus"]), 2);
        assert_eq!(run(["qrotlearn", "thermal", "--gamma", "-1"]), 2);
        assert_eq!(run(["qrotlearn", "optimal", "--two-j", "0"]), 2);
    }

    #[test]
    fn output_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let paths: Vec<PathBuf> = (0..2).map(|i| dir.path().join(format!("o{i}.csv"))).collect();
        for p in &paths {
            let code = run([
                "qrotlearn",
                "spin-k",
                "--two-j",
                "40",
                "--two-k",
                "2",
                "--theta",
                "0.5,1",
                "--n-samples",
                "5000",
                "--seed",
                "3",
                "--out",
                p.to_str().unwrap(),
            ]);
            assert_eq!(code, 0);
        }
        assert_eq!(std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
    }
}
