//! Command-line front end.
//!
//! Exit codes: 0 for success or a positive answer, 1 for no solution or a
//! negative answer, 2 for usage and input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::elimination::{project_vocabulary, weakest_precondition, ElimError};
use crate::formula::{AtomSet, Formula};
use crate::oracle::{check_particular, enumerate_solutions, CostGuard};
use crate::parser::{parse, parse_atom_list, ParseError};
use crate::semantics::{compact, truth_table, MAX_TABLE_VARS};
use crate::solve::{
    exists_solution, restricted_closure, rigorous_solution, solve_constructive, solve_restricted,
    solve_restricted_two_stage, Method, Solution, SolutionKind, SolutionProblem, SolveError,
    Strategy, WitnessFn,
};

#[derive(Parser, Debug)]
#[command(
    name = "boolsolve",
    version,
    about = "Solve Boolean equations given as formulas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a solution, printed as `unknown := formula` lines.
    Solve {
        #[arg(long, value_enum, default_value_t = MethodArg::SecondOrder)]
        method: MethodArg,
        /// Witness construction for `--method witnesses`.
        #[arg(long, value_enum, default_value_t = WitnessArg::FTrue)]
        witness: WitnessArg,
        /// Return a reproductive solution over the parameters.
        #[arg(long)]
        reproductive: bool,
        /// Try polarity and definability shortcuts under all orderings of
        /// the unknowns before running the method.
        #[arg(long)]
        reorder: bool,
        file: PathBuf,
    },
    /// Decide whether a solution exists.
    Exists { file: PathBuf },
    /// Check a candidate solution, components separated by `;`.
    Check {
        #[arg(long = "with")]
        with: String,
        file: PathBuf,
    },
    /// Eliminate existentially quantified atoms from a formula.
    Eliminate {
        #[arg(long)]
        vars: String,
        formula: String,
    },
    /// Weakest condition on the other atoms under which a solution exists.
    Precondition { file: PathBuf },
    /// List all solutions whose components are functions of the basis.
    Enumerate {
        #[arg(long)]
        basis: String,
        /// Print components as truth tables over the basis.
        #[arg(long)]
        tables: bool,
        /// Lift the default size limits.
        #[arg(long)]
        force: bool,
        file: PathBuf,
    },
    /// Rewrite a formula over a subset of its atoms.
    Project {
        #[arg(long)]
        keep: String,
        formula: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MethodArg {
    SuccElim,
    SecondOrder,
    Witnesses,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum WitnessArg {
    FTrue,
    Dnf,
    Ackermann,
}

/// A parsed problem file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub unknowns: Vec<String>,
    pub parameters: Option<Vec<String>>,
    pub forbid: Option<AtomSet>,
    /// Per-unknown forbidden atoms, from `forbid <unknown>:` lines.
    pub forbid_each: Vec<(String, AtomSet)>,
    pub formula: Formula,
}

const KEYS: [&str; 4] = ["unknowns", "parameters", "forbid", "formula"];

/// Splits `key [name]: value`, returning `None` for lines of another shape.
fn key_line(line: &str) -> Option<(String, Option<String>, String)> {
    let (head, value) = line.split_once(':')?;
    let mut words = head.split_whitespace();
    let key = words.next()?.to_string();
    let name = words.next().map(str::to_string);
    if words.next().is_some() || !key.chars().all(|c| c.is_ascii_lowercase()) {
        return None;
    }
    Some((key, name, value.to_string()))
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(code, _)| code)
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile, ParseError> {
        let err = |line: usize, message: String| ParseError {
            line,
            column: 1,
            message,
        };
        let mut unknowns = None;
        let mut parameters = None;
        let mut forbid = None;
        let mut forbid_each: Vec<(String, AtomSet)> = Vec::new();
        // formula text, its first line number and the column it starts at
        let mut formula: Option<(String, usize, usize)> = None;
        let mut in_formula = false;

        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = strip_comment(raw);
            if line.trim().is_empty() {
                if in_formula {
                    formula.as_mut().expect("formula started").0.push('\n');
                }
                continue;
            }
            let Some((key, name, value)) = key_line(line) else {
                if in_formula {
                    formula
                        .as_mut()
                        .expect("formula started")
                        .0
                        .push_str(&format!("\n{line}"));
                    continue;
                }
                return Err(err(n, "expected `key: value`".into()));
            };
            in_formula = false;
            if !KEYS.contains(&key.as_str()) {
                return Err(err(n, format!("unknown key `{key}`")));
            }
            if name.is_some() && key != "forbid" {
                return Err(err(n, format!("`{key}` takes no unknown name")));
            }
            let atoms = |value: &str| {
                parse_atom_list(value).map_err(|e| ParseError {
                    line: n,
                    column: e.column + line.len() - value.len(),
                    message: e.message,
                })
            };
            let duplicate = || err(n, format!("duplicate `{key}` line"));
            match (key.as_str(), name) {
                ("unknowns", _) => {
                    if unknowns.replace(atoms(&value)?).is_some() {
                        return Err(duplicate());
                    }
                }
                ("parameters", _) => {
                    if parameters.replace(atoms(&value)?).is_some() {
                        return Err(duplicate());
                    }
                }
                ("forbid", None) => {
                    let set: AtomSet = atoms(&value)?.into_iter().collect();
                    if forbid.replace(set).is_some() {
                        return Err(duplicate());
                    }
                }
                ("forbid", Some(u)) => {
                    if forbid_each.iter().any(|(v, _)| *v == u) {
                        return Err(err(n, format!("duplicate `forbid {u}` line")));
                    }
                    forbid_each.push((u, atoms(&value)?.into_iter().collect()));
                }
                _ => {
                    if formula.is_some() {
                        return Err(duplicate());
                    }
                    let column = line.len() - value.len() + 1;
                    formula = Some((value, n, column));
                    in_formula = true;
                }
            }
        }
        let unknowns = unknowns.ok_or_else(|| err(1, "missing `unknowns:` line".into()))?;
        let (text, first, column) =
            formula.ok_or_else(|| err(1, "missing `formula:` line".into()))?;
        let formula = parse(&text).map_err(|e| ParseError {
            line: first + e.line - 1,
            column: if e.line == 1 {
                column + e.column - 1
            } else {
                e.column
            },
            message: e.message,
        })?;
        for (u, _) in &forbid_each {
            if !unknowns.contains(u) {
                return Err(err(1, format!("`forbid {u}` names no unknown")));
            }
        }
        Ok(ProblemFile {
            unknowns,
            parameters,
            forbid,
            forbid_each,
            formula,
        })
    }

    /// The solution problem with the global restriction, if any.
    pub fn problem(&self) -> Result<SolutionProblem, SolveError> {
        let mut sp = SolutionProblem::new(self.formula.clone(), &self.unknowns)?;
        if let Some(ps) = &self.parameters {
            sp = sp.with_parameters(ps)?;
        }
        if let Some(b) = &self.forbid {
            sp = sp.with_forbidden(b.clone())?;
        }
        Ok(sp)
    }

    /// Forbidden atoms per unknown, including the global ones; `None` when
    /// there are no per-unknown restrictions.
    pub fn per_unknown_forbidden(&self) -> Option<Vec<AtomSet>> {
        if self.forbid_each.is_empty() {
            return None;
        }
        let global = self.forbid.clone().unwrap_or_default();
        Some(
            self.unknowns
                .iter()
                .map(|u| {
                    self.forbid_each
                        .iter()
                        .filter(|(v, _)| v == u)
                        .fold(global.clone(), |acc, (_, b)| acc.union(b))
                })
                .collect(),
        )
    }
}

/// A failure with its exit code and one-line message.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        Failure {
            code: match e {
                SolveError::NoSolution | SolveError::NotSolvable => 1,
                _ => 2,
            },
            message: e.to_string(),
        }
    }
}

fn read_problem(path: &PathBuf) -> Result<ProblemFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let pf =
        ProblemFile::parse(&text).map_err(|e| Failure::input(format!("{}:{e}", path.display())))?;
    let names = pf.formula.all_names().len() + 2 * pf.unknowns.len();
    if names > MAX_TABLE_VARS {
        return Err(Failure::input(format!(
            "{}: too many atoms ({names} with parameters, at most {MAX_TABLE_VARS})",
            path.display()
        )));
    }
    Ok(pf)
}

fn parse_formula(text: &str) -> Result<Formula, Failure> {
    let f = parse(text).map_err(|e| Failure::input(format!("formula:{e}")))?;
    if f.all_names().len() > MAX_TABLE_VARS {
        return Err(Failure::input(format!(
            "formula: too many atoms (at most {MAX_TABLE_VARS})"
        )));
    }
    Ok(f)
}

fn parse_atoms(text: &str, what: &str) -> Result<AtomSet, Failure> {
    parse_atom_list(text)
        .map(|v| v.into_iter().collect())
        .map_err(|e| Failure::input(format!("{what}:{e}")))
}

fn print_solution(out: &mut dyn Write, sp: &SolutionProblem, sol: &Solution) {
    for (u, g) in sp.unknowns().iter().zip(&sol.components) {
        let _ = writeln!(out, "{u} := {}", compact(g));
    }
}

fn method_of(method: MethodArg, witness: WitnessArg, reproductive: bool) -> Method {
    match method {
        MethodArg::SuccElim => Method::SuccElim,
        MethodArg::SecondOrder if reproductive => Method::SecondOrder(Strategy::Reproductive),
        MethodArg::SecondOrder => Method::SecondOrder(Strategy::Interval),
        MethodArg::Witnesses => Method::Witnesses(match witness {
            WitnessArg::FTrue => WitnessFn::FTrue,
            WitnessArg::Dnf => WitnessFn::DnfEhw,
            WitnessArg::Ackermann => WitnessFn::AckermannThenFTrue,
        }),
    }
}

fn cmd_solve(
    out: &mut dyn Write,
    method: MethodArg,
    witness: WitnessArg,
    reproductive: bool,
    reorder: bool,
    file: &PathBuf,
) -> Result<(), Failure> {
    let pf = read_problem(file)?;
    let mut sp = pf.problem()?;
    let per_unknown = pf.per_unknown_forbidden();
    let needs_params = reproductive || method == MethodArg::SuccElim || per_unknown.is_some();
    if needs_params && sp.parameters().is_none() {
        sp = sp.with_fresh_parameters();
    }
    if let Some(sets) = per_unknown {
        if reproductive {
            return Err(Failure::input(
                "--reproductive cannot be combined with per-unknown restrictions",
            ));
        }
        let sol = solve_restricted_two_stage(&sp, &sets)?;
        print_solution(out, &sp, &sol);
        return Ok(());
    }
    // solutions of the closure are exactly the admissible ones
    let closed = restricted_closure(&sp)?;
    let m = method_of(method, witness, reproductive);
    let shortcut = if reorder {
        solve_constructive(&closed, true)
    } else {
        None
    };
    let mut sol = match shortcut {
        Some(s) => s,
        None => solve_restricted(&sp, m)?,
    };
    if reproductive && sol.kind == SolutionKind::Particular {
        sol = rigorous_solution(&closed, &sol.components)?;
    }
    print_solution(out, &sp, &sol);
    Ok(())
}

fn cmd_exists(out: &mut dyn Write, file: &PathBuf) -> Result<(), Failure> {
    let pf = read_problem(file)?;
    let sp = pf.problem()?;
    let solvable = match pf.per_unknown_forbidden() {
        Some(sets) => match solve_restricted_two_stage(&sp.with_fresh_parameters(), &sets) {
            Ok(_) => true,
            Err(SolveError::NoSolution) => false,
            Err(e) => return Err(e.into()),
        },
        None => exists_solution(&restricted_closure(&sp)?),
    };
    if solvable {
        let _ = writeln!(out, "solvable");
        Ok(())
    } else {
        let _ = writeln!(out, "unsolvable");
        Err(Failure {
            code: 1,
            message: String::new(),
        })
    }
}

fn cmd_check(out: &mut dyn Write, with: &str, file: &PathBuf) -> Result<(), Failure> {
    let pf = read_problem(file)?;
    let sp = pf.problem()?;
    let comps = with
        .split(';')
        .map(parse_formula)
        .collect::<Result<Vec<_>, _>>()?;
    if comps.len() != sp.unknowns().len() {
        return Err(Failure::input(format!(
            "{} components for {} unknowns",
            comps.len(),
            sp.unknowns().len()
        )));
    }
    let report = check_particular(&sp, &comps);
    if let Some(b) = comps.iter().find_map(|g| {
        g.free_atoms()
            .intersection(sp.forbidden())
            .iter()
            .next()
            .map(str::to_string)
    }) {
        let _ = writeln!(out, "invalid: mentions forbidden atom `{b}`");
        return Err(Failure {
            code: 1,
            message: String::new(),
        });
    }
    if report.verdict {
        let _ = writeln!(out, "valid");
        return Ok(());
    }
    for f in &report.failures {
        match &f.valuation {
            Some(v) => {
                let _ = writeln!(out, "invalid: {} at {v}", f.reason);
            }
            None => {
                let _ = writeln!(out, "invalid: {}", f.reason);
            }
        }
    }
    Err(Failure {
        code: 1,
        message: String::new(),
    })
}

fn cmd_enumerate(
    out: &mut dyn Write,
    basis: &str,
    tables: bool,
    force: bool,
    file: &PathBuf,
) -> Result<(), Failure> {
    let pf = read_problem(file)?;
    let sp = restricted_closure(&pf.problem()?)?;
    let basis = parse_atoms(basis, "basis")?;
    let guard = if force {
        CostGuard::unlimited()
    } else {
        CostGuard::default()
    };
    let sols =
        enumerate_solutions(&sp, &basis, guard).map_err(|e| Failure::input(e.to_string()))?;
    if tables {
        let _ = writeln!(out, "basis: {basis}");
    }
    for s in &sols {
        let parts: Vec<String> = s
            .components
            .iter()
            .map(|g| {
                if tables {
                    let t = truth_table(g, &basis).expect("components are over the basis");
                    format!("bits: {}", t.bit_string())
                } else {
                    g.to_string()
                }
            })
            .collect();
        let _ = writeln!(out, "{}", parts.join("; "));
    }
    if sols.is_empty() {
        return Err(Failure {
            code: 1,
            message: String::new(),
        });
    }
    Ok(())
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Solve {
            method,
            witness,
            reproductive,
            reorder,
            file,
        } => cmd_solve(out, method, witness, reproductive, reorder, &file),
        Command::Exists { file } => cmd_exists(out, &file),
        Command::Check { with, file } => cmd_check(out, &with, &file),
        Command::Eliminate { vars, formula } => {
            let vars: Vec<String> = parse_atoms(&vars, "vars")?.to_vec();
            let f = parse_formula(&formula)?;
            let _ = writeln!(out, "{}", weakest_precondition(&vars, &f));
            Ok(())
        }
        Command::Precondition { file } => {
            let pf = read_problem(&file)?;
            let sp = restricted_closure(&pf.problem()?)?;
            let _ = writeln!(out, "{}", weakest_precondition(sp.unknowns(), sp.formula()));
            Ok(())
        }
        Command::Enumerate {
            basis,
            tables,
            force,
            file,
        } => cmd_enumerate(out, &basis, tables, force, &file),
        Command::Project { keep, formula } => {
            let keep = parse_atoms(&keep, "keep")?;
            let f = parse_formula(&formula)?;
            match project_vocabulary(&f, &keep) {
                Ok(g) => {
                    let _ = writeln!(out, "{g}");
                    Ok(())
                }
                Err(e @ ElimError::NotIndependent { .. }) => Err(Failure {
                    code: 1,
                    message: e.to_string(),
                }),
                Err(e) => Err(Failure::input(e.to_string())),
            }
        }
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(f) => {
            if !f.message.is_empty() {
                let _ = writeln!(err, "error: {}", f.message);
            }
            f.code
        }
    }
}
