//! Brute-force ground truth over a finite space of Boolean functions.
//!
//! Candidates are all truth tables over a basis of atoms, represented by
//! canonical full-DNF formulas and enumerated in the integer order of their
//! table bits. Validity checks are done on precomputed truth tables.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::bits::Bits;
use crate::formula::{AtomSet, Formula};
use crate::semantics::{formula_from_table, table_over, TruthTable, Valuation, MAX_TABLE_VARS};
use crate::solve::{particular_violation, Solution, SolutionKind, SolutionProblem};

/// Hard upper bound on the basis size, so table codes fit in 32 bits.
pub const MAX_BASIS: usize = 5;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("too large for exhaustive checking: {0}")]
    TooLarge(String),
    #[error("basis atom `{0}` is an unknown")]
    BasisMentionsUnknown(String),
    #[error("the problem has no parameters")]
    MissingParameters,
    #[error("{components} components for {unknowns} unknowns")]
    Arity { components: usize, unknowns: usize },
}

/// Limits on exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CostGuard {
    pub max_basis: usize,
    pub max_unknowns: usize,
}

impl Default for CostGuard {
    fn default() -> Self {
        CostGuard {
            max_basis: 3,
            max_unknowns: 2,
        }
    }
}

impl CostGuard {
    /// Only the hard representation limits apply.
    pub fn unlimited() -> Self {
        CostGuard {
            max_basis: MAX_BASIS,
            max_unknowns: usize::MAX,
        }
    }

    fn admit(&self, basis: usize, unknowns: usize) -> Result<(), OracleError> {
        if basis > self.max_basis.min(MAX_BASIS) || unknowns > self.max_unknowns {
            return Err(OracleError::TooLarge(format!(
                "basis of {basis} atoms with {unknowns} unknowns exceeds the limit of {} and {}",
                self.max_basis.min(MAX_BASIS),
                self.max_unknowns
            )));
        }
        Ok(())
    }
}

/// All Boolean functions over a basis of atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionSpace {
    basis: AtomSet,
}

impl FunctionSpace {
    pub fn new(basis: AtomSet) -> Result<Self, OracleError> {
        if basis.len() > MAX_BASIS {
            return Err(OracleError::TooLarge(format!(
                "basis of {} atoms (at most {MAX_BASIS})",
                basis.len()
            )));
        }
        Ok(FunctionSpace { basis })
    }

    pub fn basis(&self) -> &AtomSet {
        &self.basis
    }

    /// Number of functions, `2^(2^|basis|)`.
    pub fn len(&self) -> u64 {
        1u64 << (1u64 << self.basis.len())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn table(&self, code: u64) -> TruthTable {
        TruthTable::from_code(self.basis.clone(), code)
    }

    pub fn formula(&self, code: u64) -> Formula {
        formula_from_table(&self.table(code))
    }

    pub fn iter(&self) -> impl Iterator<Item = Formula> + '_ {
        (0..self.len()).map(|c| self.formula(c))
    }
}

/// One failed obligation of a check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    /// The instantiation or candidate tuple the failure is about.
    pub subject: Vec<Formula>,
    pub reason: String,
    pub valuation: Option<Valuation>,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let subject: Vec<String> = self.subject.iter().map(|g| g.to_string()).collect();
        write!(f, "({}): {}", subject.join("; "), self.reason)?;
        if let Some(v) = &self.valuation {
            write!(f, " at {v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub verdict: bool,
    pub failures: Vec<CheckFailure>,
}

impl CheckReport {
    fn from_failures(failures: Vec<CheckFailure>) -> Self {
        CheckReport {
            verdict: failures.is_empty(),
            failures,
        }
    }
}

/// Counts through all tuples of `k` codes below `radix`, first position
/// outermost.
struct Tuples {
    current: Option<Vec<u64>>,
    radix: u64,
}

impl Tuples {
    fn new(k: usize, radix: u64) -> Self {
        Tuples {
            current: Some(vec![0; k]),
            radix,
        }
    }
}

impl Iterator for Tuples {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            next[i] += 1;
            if next[i] < self.radix {
                self.current = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    }
}

/// Truth tables of a problem and some formulas over a common world of
/// atoms: the basis, the free atoms of the formula other than unknowns,
/// and any further atoms of the extra formulas other than `extra_vars`.
struct World {
    atoms: AtomSet,
    space: FunctionSpace,
    /// Basis index of each world valuation.
    proj: Vec<usize>,
    /// Table of the formula over world atoms followed by the unknowns.
    f: Bits,
    /// Atoms whose free occurrences in the formula lie under a binder, per
    /// unknown.
    capturing: Vec<AtomSet>,
}

impl World {
    fn new(
        sp: &SolutionProblem,
        basis: &AtomSet,
        extra: &[Formula],
        extra_vars: &[String],
        guard: CostGuard,
    ) -> Result<Self, OracleError> {
        guard.admit(basis.len(), sp.unknowns().len())?;
        if let Some(u) = sp.unknowns().iter().find(|u| basis.contains(u)) {
            return Err(OracleError::BasisMentionsUnknown(u.clone()));
        }
        let mut atoms = basis.clone();
        for a in sp.formula().free_atoms().iter() {
            if !sp.unknowns().iter().any(|u| u == a) {
                atoms.insert(a);
            }
        }
        for g in extra {
            for a in g.free_atoms().iter() {
                if !extra_vars.iter().any(|v| v == a) {
                    atoms.insert(a);
                }
            }
        }
        let width = atoms.len() + sp.unknowns().len().max(extra_vars.len());
        if width > MAX_TABLE_VARS {
            return Err(OracleError::TooLarge(format!("{width} table variables")));
        }
        let basis_pos: Vec<usize> = basis
            .iter()
            .map(|b| atoms.index_of(b).expect("basis is part of the world"))
            .collect();
        let proj = (0..1usize << atoms.len())
            .map(|w| {
                basis_pos
                    .iter()
                    .enumerate()
                    .map(|(k, &pos)| ((w >> pos) & 1) << k)
                    .sum()
            })
            .collect();
        let mut vars = atoms.to_vec();
        vars.extend(sp.unknowns().iter().cloned());
        let f =
            table_over(sp.formula(), &vars).map_err(|e| OracleError::TooLarge(e.to_string()))?;
        let capturing = sp
            .unknowns()
            .iter()
            .map(|u| sp.formula().capturing_binders(u))
            .collect();
        Ok(World {
            atoms,
            space: FunctionSpace::new(basis.clone())?,
            proj,
            f,
            capturing,
        })
    }

    fn size(&self) -> usize {
        1 << self.atoms.len()
    }

    /// Value of the basis function `code` at world valuation `w`.
    fn at(&self, code: u64, w: usize) -> bool {
        (code >> self.proj[w]) & 1 == 1
    }

    /// Free atoms of the canonical formula of `code`.
    fn code_atoms(&self, code: u64) -> AtomSet {
        if code == 0 || code == self.space.len() - 1 {
            AtomSet::new()
        } else {
            self.space.basis().clone()
        }
    }

    /// Whether formulas with free atoms `free[j]` are substitutible for the
    /// unknowns.
    fn substitutible(&self, free: &[AtomSet]) -> bool {
        free.iter()
            .zip(&self.capturing)
            .all(|(g, c)| g.is_disjoint(c))
    }

    /// First world valuation at which the formula is false under the
    /// component values `g(w)`.
    fn falsified(&self, g: impl Fn(usize, usize) -> bool, n: usize) -> Option<usize> {
        let base = self.atoms.len();
        (0..self.size()).find(|&w| {
            let idx = (0..n).fold(w, |acc, j| acc | (usize::from(g(j, w)) << (base + j)));
            !self.f.get(idx)
        })
    }

    fn valuation(&self, w: usize) -> Valuation {
        Valuation::from_index(&self.atoms, w)
    }
}

/// All tuples of basis functions that are particular solutions, in
/// enumeration order.
pub fn enumerate_solutions(
    sp: &SolutionProblem,
    basis: &AtomSet,
    guard: CostGuard,
) -> Result<Vec<Solution>, OracleError> {
    let world = World::new(sp, basis, &[], &[], guard)?;
    Ok(solution_codes(&world, sp.unknowns().len())
        .into_iter()
        .map(|codes| Solution {
            components: codes.iter().map(|&c| world.space.formula(c)).collect(),
            kind: SolutionKind::Particular,
        })
        .collect())
}

fn solution_codes(world: &World, n: usize) -> Vec<Vec<u64>> {
    Tuples::new(n, world.space.len())
        .filter(|codes| {
            let free: Vec<AtomSet> = codes.iter().map(|&c| world.code_atoms(c)).collect();
            world.substitutible(&free) && world.falsified(|j, w| world.at(codes[j], w), n).is_none()
        })
        .collect()
}

/// Substitutibility and validity of the instance.
pub fn check_particular(sp: &SolutionProblem, sol: &[Formula]) -> CheckReport {
    if sol.len() != sp.unknowns().len() {
        return CheckReport::from_failures(vec![CheckFailure {
            subject: sol.to_vec(),
            reason: format!(
                "{} components for {} unknowns",
                sol.len(),
                sp.unknowns().len()
            ),
            valuation: None,
        }]);
    }
    let failures = match particular_violation(sp, sol) {
        None => Vec::new(),
        Some(reason) => {
            let valuation = sp
                .instance(sol)
                .ok()
                .and_then(|inst| crate::semantics::falsifying_valuation(&inst));
            let reason = if valuation.is_some() {
                "instance is not valid".to_string()
            } else {
                format!("not substitutible: {reason}")
            };
            vec![CheckFailure {
                subject: sol.to_vec(),
                reason,
                valuation,
            }]
        }
    };
    CheckReport::from_failures(failures)
}

/// Tables of the components of a parameterized solution, and what is
/// needed to decide substitutibility of instantiations.
struct Parameterized<'a> {
    world: &'a World,
    params: &'a [String],
    /// Table of each component over world atoms followed by parameters.
    tables: Vec<Bits>,
    /// Free atoms of each component other than parameters.
    own_atoms: Vec<AtomSet>,
    /// Per component and parameter: whether the parameter occurs free, and
    /// the binders over its free occurrences.
    param_use: Vec<Vec<(bool, AtomSet)>>,
}

impl<'a> Parameterized<'a> {
    fn new(world: &'a World, params: &'a [String], sol: &[Formula]) -> Self {
        let mut vars = world.atoms.to_vec();
        vars.extend(params.iter().cloned());
        let tables = sol
            .iter()
            .map(|g| table_over(g, &vars).expect("world covers the free atoms"))
            .collect();
        let own_atoms = sol
            .iter()
            .map(|g| {
                let mut a = g.free_atoms();
                params.iter().for_each(|t| {
                    a.remove(t);
                });
                a
            })
            .collect();
        let param_use = sol
            .iter()
            .map(|g| {
                params
                    .iter()
                    .map(|t| (g.occurs_free(t), g.capturing_binders(t)))
                    .collect()
            })
            .collect();
        Parameterized {
            world,
            params,
            tables,
            own_atoms,
            param_use,
        }
    }

    /// Free atoms of the instantiated components, or `None` when the
    /// instantiation is not substitutible.
    fn instantiated_atoms(&self, codes: &[u64]) -> Option<Vec<AtomSet>> {
        self.own_atoms
            .iter()
            .zip(&self.param_use)
            .map(|(own, uses)| {
                let mut atoms = own.clone();
                for ((occurs, binders), &c) in uses.iter().zip(codes) {
                    let t_atoms = self.world.code_atoms(c);
                    if !t_atoms.is_disjoint(binders) {
                        return None;
                    }
                    if *occurs {
                        atoms = atoms.union(&t_atoms);
                    }
                }
                Some(atoms)
            })
            .collect()
    }

    /// Value of component `j` under parameter functions `codes` at `w`.
    fn value(&self, j: usize, codes: &[u64], w: usize) -> bool {
        let base = self.world.atoms.len();
        let idx = (0..self.params.len()).fold(w, |acc, k| {
            acc | (usize::from(self.world.at(codes[k], w)) << (base + k))
        });
        self.tables[j].get(idx)
    }

    fn formulas(&self, codes: &[u64]) -> Vec<Formula> {
        codes.iter().map(|&c| self.world.space.formula(c)).collect()
    }

    /// Clause (a): every substitutible instantiation is a particular
    /// solution.
    fn parametric_failures(&self) -> Vec<CheckFailure> {
        let n = self.tables.len();
        let mut failures = Vec::new();
        for codes in Tuples::new(self.params.len(), self.world.space.len()) {
            let Some(atoms) = self.instantiated_atoms(&codes) else {
                continue;
            };
            if !self.world.substitutible(&atoms) {
                failures.push(CheckFailure {
                    subject: self.formulas(&codes),
                    reason: "instance is not substitutible into the formula".into(),
                    valuation: None,
                });
            } else if let Some(w) = self.world.falsified(|j, w| self.value(j, &codes, w), n) {
                failures.push(CheckFailure {
                    subject: self.formulas(&codes),
                    reason: "instantiation is not a particular solution".into(),
                    valuation: Some(self.world.valuation(w)),
                });
            }
        }
        failures
    }

    /// World tables of the components under parameter functions `codes`.
    fn instance_tables(&self, codes: &[u64]) -> Vec<Vec<bool>> {
        (0..self.tables.len())
            .map(|j| {
                (0..self.world.size())
                    .map(|w| self.value(j, codes, w))
                    .collect()
            })
            .collect()
    }
}

fn code_tables(world: &World, codes: &[u64]) -> Vec<Vec<bool>> {
    codes
        .iter()
        .map(|&c| (0..world.size()).map(|w| world.at(c, w)).collect())
        .collect()
}

fn prepare<'a>(sp: &'a SolutionProblem, sol: &[Formula]) -> Result<&'a [String], OracleError> {
    if sol.len() != sp.unknowns().len() {
        return Err(OracleError::Arity {
            components: sol.len(),
            unknowns: sp.unknowns().len(),
        });
    }
    sp.parameters().ok_or(OracleError::MissingParameters)
}

fn mentions_unknown(sp: &SolutionProblem, sol: &[Formula]) -> Option<CheckFailure> {
    sol.iter()
        .find(|g| sp.unknowns().iter().any(|u| g.occurs_free(u)))
        .map(|_| CheckFailure {
            subject: sol.to_vec(),
            reason: "not substitutible: a component mentions an unknown".into(),
            valuation: None,
        })
}

/// Reproductivity over the basis: (a) every instantiation of the
/// parameters by basis functions is a particular solution, and (b) every
/// particular solution over the basis is reproduced when substituted for
/// the parameters. Instantiations that are not substitutible into the
/// components are skipped.
pub fn check_reproductive(
    sp: &SolutionProblem,
    sol: &[Formula],
    basis: &AtomSet,
    guard: CostGuard,
) -> Result<CheckReport, OracleError> {
    let params = prepare(sp, sol)?;
    if let Some(f) = mentions_unknown(sp, sol) {
        return Ok(CheckReport::from_failures(vec![f]));
    }
    let world = World::new(sp, basis, sol, params, guard)?;
    let pz = Parameterized::new(&world, params, sol);
    let mut failures = pz.parametric_failures();
    for codes in solution_codes(&world, sol.len()) {
        if pz.instantiated_atoms(&codes).is_none() {
            continue;
        }
        let expected = code_tables(&world, &codes);
        let got = pz.instance_tables(&codes);
        let differs =
            (0..world.size()).find(|&w| expected.iter().zip(&got).any(|(e, g)| e[w] != g[w]));
        if let Some(w) = differs {
            failures.push(CheckFailure {
                subject: pz.formulas(&codes),
                reason: "solution is not reproduced".into(),
                valuation: Some(world.valuation(w)),
            });
        }
    }
    Ok(CheckReport::from_failures(failures))
}

/// Generality over the basis: clause (a) as for reproductivity, and every
/// particular solution over the basis equals some instantiation.
pub fn check_general(
    sp: &SolutionProblem,
    sol: &[Formula],
    basis: &AtomSet,
    guard: CostGuard,
) -> Result<CheckReport, OracleError> {
    let params = prepare(sp, sol)?;
    if let Some(f) = mentions_unknown(sp, sol) {
        return Ok(CheckReport::from_failures(vec![f]));
    }
    let world = World::new(sp, basis, sol, params, guard)?;
    let pz = Parameterized::new(&world, params, sol);
    let mut failures = pz.parametric_failures();
    let reachable: HashSet<Vec<Vec<bool>>> = Tuples::new(params.len(), world.space.len())
        .filter(|codes| pz.instantiated_atoms(codes).is_some())
        .map(|codes| pz.instance_tables(&codes))
        .collect();
    for codes in solution_codes(&world, sol.len()) {
        if !reachable.contains(&code_tables(&world, &codes)) {
            failures.push(CheckFailure {
                subject: pz.formulas(&codes),
                reason: "solution is not an instance".into(),
                valuation: None,
            });
        }
    }
    Ok(CheckReport::from_failures(failures))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::solve::{rigorous_solution, solve_succ_elim};

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn set(xs: &[&str]) -> AtomSet {
        xs.iter().copied().collect()
    }

    const EX1: &str = "(a -> b) -> ((p1 -> p2) & (a -> p2) & (p2 -> b))";

    fn ex1() -> SolutionProblem {
        SolutionProblem::new(p(EX1), &["p1", "p2"])
            .unwrap()
            .with_parameters(&["t1", "t2"])
            .unwrap()
    }

    fn canon(s: &str, basis: &AtomSet) -> Formula {
        formula_from_table(&crate::semantics::truth_table(&p(s), basis).unwrap())
    }

    #[test]
    fn function_space_order() {
        let fs = FunctionSpace::new(set(&["a"])).unwrap();
        let all: Vec<Formula> = fs.iter().collect();
        assert_eq!(all, vec![Formula::Bot, p("~a"), p("a"), Formula::Top]);
        assert_eq!(FunctionSpace::new(set(&["a", "b"])).unwrap().len(), 16);
    }

    #[test]
    fn tuples_count_first_position_outermost() {
        let all: Vec<Vec<u64>> = Tuples::new(2, 3).collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 0]);
        assert_eq!(Tuples::new(0, 3).count(), 1);
    }

    #[test]
    fn unique_solution() {
        let sp = SolutionProblem::new(p("p <-> a"), &["p"]).unwrap();
        let sols = enumerate_solutions(&sp, &set(&["a"]), CostGuard::default()).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].components, vec![p("a")]);
    }

    #[test]
    fn example_one_classification() {
        let basis = set(&["a", "b"]);
        let sols = enumerate_solutions(&ex1(), &basis, CostGuard::default()).unwrap();
        let found: HashSet<Vec<Formula>> = sols.into_iter().map(|s| s.components).collect();
        let pair = |x: &str, y: &str| vec![canon(x, &basis), canon(y, &basis)];
        for (x, y) in [
            ("a", "a"),
            ("a", "b"),
            ("false", "a"),
            ("b", "b"),
            ("a & b", "a | b"),
        ] {
            assert!(found.contains(&pair(x, y)), "{x}, {y}");
        }
        for (x, y) in [
            ("b", "a"),
            ("a", "false"),
            ("true", "true"),
            ("true", "false"),
            ("false", "true"),
            ("false", "false"),
        ] {
            assert!(!found.contains(&pair(x, y)), "{x}, {y}");
        }
    }

    #[test]
    fn unsolvable_has_no_solutions() {
        let sp =
            SolutionProblem::new(p("(p1 -> p2) & (a -> p2) & (p2 -> b)"), &["p1", "p2"]).unwrap();
        let sols = enumerate_solutions(&sp, &set(&["a", "b"]), CostGuard::default()).unwrap();
        assert!(sols.is_empty());
    }

    #[test]
    fn guard_limits() {
        let sp = SolutionProblem::new(p("p"), &["p"]).unwrap();
        let big = set(&["a", "b", "c", "d"]);
        assert!(matches!(
            enumerate_solutions(&sp, &big, CostGuard::default()),
            Err(OracleError::TooLarge(_))
        ));
        assert!(enumerate_solutions(&sp, &big, CostGuard::unlimited()).is_ok());
        assert!(matches!(
            enumerate_solutions(&sp, &set(&["p"]), CostGuard::default()),
            Err(OracleError::BasisMentionsUnknown(_))
        ));
    }

    #[test]
    fn particular_checks() {
        assert!(check_particular(&ex1(), &[p("a"), p("b")]).verdict);
        let r = check_particular(&ex1(), &[p("b"), p("a")]);
        assert!(!r.verdict);
        let v = r.failures[0].valuation.as_ref().unwrap();
        assert_eq!((v.get("a"), v.get("b")), (Some(false), Some(true)));
        let r = check_particular(&ex1(), &[p("p2"), p("b")]);
        assert!(!r.verdict && r.failures[0].reason.contains("not substitutible"));
    }

    #[test]
    fn reproductive_checks() {
        let basis = set(&["a", "b"]);
        let g = solve_succ_elim(&ex1()).unwrap();
        let r = check_reproductive(&ex1(), &g.components, &basis, CostGuard::default()).unwrap();
        assert!(r.verdict, "{:?}", r.failures);
        let r =
            check_reproductive(&ex1(), &[p("a"), p("b")], &basis, CostGuard::default()).unwrap();
        assert!(!r.verdict);
        let bb = vec![canon("b", &basis), canon("b", &basis)];
        assert!(r.failures.iter().any(|f| f.subject == bb));
        let rig = rigorous_solution(&ex1(), &[p("b"), p("b")]).unwrap();
        let r = check_reproductive(&ex1(), &rig.components, &basis, CostGuard::default()).unwrap();
        assert!(r.verdict, "{:?}", r.failures);
    }

    #[test]
    fn general_checks() {
        let basis = set(&["a", "b"]);
        let g = solve_succ_elim(&ex1()).unwrap();
        assert!(
            check_general(&ex1(), &g.components, &basis, CostGuard::default())
                .unwrap()
                .verdict
        );
        let r = check_general(&ex1(), &[p("a"), p("b")], &basis, CostGuard::default()).unwrap();
        assert!(!r.verdict);
        let sp = SolutionProblem::new(p("p"), &["p"])
            .unwrap()
            .with_parameters(&["t"])
            .unwrap();
        let r = check_general(&sp, &[p("t")], &set(&["a"]), CostGuard::default()).unwrap();
        // t itself is not a solution of p, so clause (a) fails while every
        // solution (true) is still reached
        assert!(r.failures.iter().all(|f| f.reason.contains("particular")));
    }

    #[test]
    fn capture_excludes_candidates() {
        // every function solves it, but `a` is bound over p
        let sp = SolutionProblem::new(p("(exists a . a & p) | ~p"), &["p"]).unwrap();
        let sols = enumerate_solutions(&sp, &set(&["a"]), CostGuard::default()).unwrap();
        let comps: Vec<Formula> = sols.into_iter().flat_map(|s| s.components).collect();
        assert_eq!(comps, vec![Formula::Bot, Formula::Top]);
    }
}
