//! Solution problems and their solvers.
//!
//! A solution problem pairs a formula with an ordered list of unknown atoms.
//! A particular solution is a list of formulas, one per unknown, whose
//! simultaneous substitution makes the formula valid. A reproductive
//! solution is parameterized by fresh atoms and yields, when the parameters
//! are replaced by any particular solution, that same solution again.

use thiserror::Error;

use crate::elimination::{
    ackermann_rewrite, elim_witness, elim_witness_dnf, eliminate_all, eliminate_all_universal,
    project_vocabulary,
};
use crate::formula::{
    clean_variant, clean_variant_avoiding, fresh_name, substitute, substitutibility_violation,
    AtomSet, Formula, Polarity,
};
use crate::parser::is_identifier;
use crate::semantics::{entails, falsifying_valuation, is_satisfiable, is_valid, simplify};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("no solution exists")]
    NoSolution,
    #[error("the method needs one parameter per unknown")]
    MissingParameters,
    #[error("the lower bound does not entail the upper bound")]
    NotSolvable,
    #[error("not a particular solution: {0}")]
    NotAParticularSolution(String),
    #[error("not substitutible: {0}")]
    NotSubstitutible(String),
    #[error("internal check failed: {0}")]
    InternalCheckFailed(String),
    #[error("vocabulary projection failed: {0}")]
    ProjectionFailed(String),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

fn internal(e: impl std::fmt::Display) -> SolveError {
    SolveError::InternalCheckFailed(e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionProblem {
    source: Formula,
    formula: Formula,
    unknowns: Vec<String>,
    parameters: Option<Vec<String>>,
    forbidden: AtomSet,
}

impl SolutionProblem {
    pub fn new<S: AsRef<str>>(formula: Formula, unknowns: &[S]) -> Result<Self, SolveError> {
        let sp = SolutionProblem {
            formula: formula.clone(),
            source: formula,
            unknowns: unknowns.iter().map(|u| u.as_ref().to_string()).collect(),
            parameters: None,
            forbidden: AtomSet::new(),
        };
        sp.validated()
    }

    pub fn with_parameters<S: AsRef<str>>(mut self, parameters: &[S]) -> Result<Self, SolveError> {
        self.parameters = Some(parameters.iter().map(|t| t.as_ref().to_string()).collect());
        self.validated()
    }

    /// Adds parameters `t_1, t_2, ...` (skipping names already in use).
    pub fn with_fresh_parameters(self) -> Self {
        let mut avoid = self
            .source
            .all_names()
            .union(&self.forbidden)
            .union(&self.unknowns.iter().cloned().collect());
        let params: Vec<String> = self
            .unknowns
            .iter()
            .map(|_| {
                let t = fresh_name("t", &avoid);
                avoid.insert(t.clone());
                t
            })
            .collect();
        self.with_parameters(&params)
            .expect("fresh parameters satisfy the problem invariants")
    }

    pub fn with_forbidden(mut self, forbidden: AtomSet) -> Result<Self, SolveError> {
        self.forbidden = forbidden;
        self.validated()
    }

    /// Same unknowns, parameters and forbidden atoms over another formula.
    pub fn with_formula(&self, formula: Formula) -> Result<Self, SolveError> {
        SolutionProblem {
            formula: formula.clone(),
            source: formula,
            ..self.clone()
        }
        .validated()
    }

    /// The formula as solved: a clean variant of the input whose bound
    /// atoms avoid the unknowns, parameters and forbidden atoms.
    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    /// The formula as given.
    pub fn source(&self) -> &Formula {
        &self.source
    }

    pub fn unknowns(&self) -> &[String] {
        &self.unknowns
    }

    pub fn parameters(&self) -> Option<&[String]> {
        self.parameters.as_deref()
    }

    pub fn forbidden(&self) -> &AtomSet {
        &self.forbidden
    }

    fn validated(mut self) -> Result<Self, SolveError> {
        let bad = |m: String| Err(SolveError::InvalidProblem(m));
        let mut names = self.unknowns.clone();
        names.extend(self.parameters.iter().flatten().cloned());
        names.extend(self.forbidden.iter().map(str::to_string));
        if let Some(n) = names.iter().find(|n| !is_identifier(n)) {
            return bad(format!("`{n}` is not a valid atom name"));
        }
        let unknowns: AtomSet = self.unknowns.iter().cloned().collect();
        if unknowns.len() != self.unknowns.len() {
            return bad("unknowns must be distinct".into());
        }
        if let Some(u) = self.unknowns.iter().find(|u| self.forbidden.contains(u)) {
            return bad(format!("unknown `{u}` is also forbidden"));
        }
        if let Some(ps) = &self.parameters {
            let params: AtomSet = ps.iter().cloned().collect();
            if params.len() != ps.len() {
                return bad("parameters must be distinct".into());
            }
            if ps.len() != self.unknowns.len() {
                return bad(format!(
                    "{} parameters for {} unknowns",
                    ps.len(),
                    self.unknowns.len()
                ));
            }
            let used = self.source.free_atoms().union(&unknowns);
            if let Some(t) = ps.iter().find(|t| used.contains(t)) {
                return bad(format!(
                    "parameter `{t}` occurs in the formula or among the unknowns"
                ));
            }
            if let Some(t) = ps.iter().find(|t| self.forbidden.contains(t)) {
                return bad(format!("parameter `{t}` is also forbidden"));
            }
        }
        let avoid: AtomSet = names.into_iter().collect();
        self.formula = clean_variant_avoiding(&self.source, &avoid);
        Ok(self)
    }

    /// The formula with `components` substituted for the unknowns.
    pub fn instance(&self, components: &[Formula]) -> Result<Formula, SolveError> {
        substitute(&self.formula, &self.unknowns, components)
            .map_err(|e| SolveError::NotSubstitutible(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionKind {
    Particular,
    Reproductive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub components: Vec<Formula>,
    pub kind: SolutionKind,
}

/// Why `components` is not a particular solution, if it is not.
pub fn particular_violation(sp: &SolutionProblem, components: &[Formula]) -> Option<String> {
    if let Some(v) = substitutibility_violation(components, sp.unknowns(), sp.formula()) {
        return Some(v.to_string());
    }
    if let Some((i, u)) = components.iter().enumerate().find_map(|(i, c)| {
        sp.unknowns()
            .iter()
            .find(|u| c.occurs_free(u))
            .map(|u| (i, u.clone()))
    }) {
        return Some(format!("component {} mentions unknown `{u}`", i + 1));
    }
    let inst = sp.instance(components).ok()?;
    falsifying_valuation(&inst).map(|v| format!("instance is false at {v}"))
}

pub fn is_particular_solution(sp: &SolutionProblem, components: &[Formula]) -> bool {
    particular_violation(sp, components).is_none()
}

fn verified(sp: &SolutionProblem, sol: Solution) -> Result<Solution, SolveError> {
    match particular_violation(sp, &sol.components) {
        None => Ok(sol),
        Some(reason) => Err(SolveError::InternalCheckFailed(reason)),
    }
}

fn params_of(sp: &SolutionProblem) -> Result<&[String], SolveError> {
    sp.parameters().ok_or(SolveError::MissingParameters)
}

/// Whether some particular solution exists, decided by validity of the
/// existential closure over the unknowns.
pub fn exists_solution(sp: &SolutionProblem) -> bool {
    is_valid(&Formula::exists_all(sp.unknowns(), sp.formula().clone()))
}

/// Peels a leading existential prefix off `f` and eliminates it.
fn eliminate_prefix(f: &Formula) -> Formula {
    let mut xs = Vec::new();
    let mut g = f;
    while let Formula::Exists(x, body) = g {
        xs.push(x.clone());
        g = body;
    }
    eliminate_all(&xs, g)
}

/// Lower and upper bound of the solution interval of `p` in `f`.
fn interval(f: &Formula, p: &str) -> Result<(Formula, Formula), SolveError> {
    let g = eliminate_prefix(f);
    let lower = simplify(&Formula::not(g.with_false(p)));
    let upper = simplify(&g.with_true(p));
    if !entails(&lower, &upper) {
        return Err(SolveError::NoSolution);
    }
    Ok((lower, upper))
}

/// Unary solver returning the lower end of the solution interval,
/// `~f[p:=false]`. A leading existential prefix of `f` is eliminated first.
pub fn solve1_interval(f: &Formula, p: &str) -> Result<Formula, SolveError> {
    interval(f, p).map(|(lower, _)| lower)
}

/// Unary reproductive solver: `(~f[p:=false] & ~t) | (f[p:=true] & t)`.
pub fn solve1_reproductive(f: &Formula, p: &str, t: &str) -> Result<Formula, SolveError> {
    if t == p || f.occurs_free(t) {
        return Err(SolveError::InvalidProblem(format!(
            "parameter `{t}` is not fresh"
        )));
    }
    let (lower, upper) = interval(f, p)?;
    let g = schroeder_interpolant(&lower, &upper, t, SchroederVariant::Selector)?;
    Ok(simplify(&g))
}

/// Forms of the reproductive solution of `(a -> p) & (p -> b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchroederVariant {
    /// `a | (b & t)`
    AOrBT,
    /// `b & (a | t)`
    BAndAOrT,
    /// `(a & ~t) | (b & t)`
    Selector,
}

pub fn schroeder_interpolant(
    a: &Formula,
    b: &Formula,
    t: &str,
    variant: SchroederVariant,
) -> Result<Formula, SolveError> {
    if !entails(a, b) {
        return Err(SolveError::NotSolvable);
    }
    let t = Formula::atom(t);
    let (a, b) = (a.clone(), b.clone());
    Ok(match variant {
        SchroederVariant::AOrBT => Formula::or(a, Formula::and(b, t)),
        SchroederVariant::BAndAOrT => Formula::and(b, Formula::or(a, t)),
        SchroederVariant::Selector => {
            Formula::or(Formula::and(a, Formula::not(t.clone())), Formula::and(b, t))
        }
    })
}

/// Unary solver used at each step of [`solve_on_second_order`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Interval,
    Reproductive,
}

/// Solves for the unknowns left to right, each as a unary problem with the
/// later unknowns existentially quantified.
pub fn solve_on_second_order(
    sp: &SolutionProblem,
    strategy: Strategy,
) -> Result<Solution, SolveError> {
    let params = match strategy {
        Strategy::Interval => None,
        Strategy::Reproductive => Some(params_of(sp)?),
    };
    let us = sp.unknowns();
    let mut comps: Vec<Formula> = Vec::with_capacity(us.len());
    for i in 0..us.len() {
        let inst = substitute(sp.formula(), &us[..i], &comps).map_err(internal)?;
        let f = Formula::exists_all(&us[i + 1..], inst);
        comps.push(match params {
            None => solve1_interval(&f, &us[i])?,
            Some(ts) => solve1_reproductive(&f, &us[i], &ts[i])?,
        });
    }
    let kind = match strategy {
        Strategy::Interval => SolutionKind::Particular,
        Strategy::Reproductive => SolutionKind::Reproductive,
    };
    verified(
        sp,
        Solution {
            components: comps,
            kind,
        },
    )
}

/// Reproductive solution by successive eliminations, with the intermediate
/// formulas: `stages[i]` has the unknowns after the i-th eliminated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuccElimTrace {
    pub stages: Vec<Formula>,
    pub solution: Solution,
}

pub fn solve_succ_elim(sp: &SolutionProblem) -> Result<Solution, SolveError> {
    solve_succ_elim_traced(sp).map(|t| t.solution)
}

pub fn solve_succ_elim_traced(sp: &SolutionProblem) -> Result<SuccElimTrace, SolveError> {
    let ts = params_of(sp)?;
    let us = sp.unknowns();
    let n = us.len();
    let mut stages = vec![sp.formula().clone(); n + 1];
    for i in (1..=n).rev() {
        let f = &stages[i];
        stages[i - 1] = simplify(&Formula::or(
            simplify(&f.with_true(&us[i - 1])),
            simplify(&f.with_false(&us[i - 1])),
        ));
    }
    if !is_valid(&stages[0]) {
        return Err(SolveError::NoSolution);
    }
    let mut comps: Vec<Formula> = Vec::with_capacity(n);
    for i in 0..n {
        let fi = substitute(&stages[i + 1], &us[..i], &comps).map_err(internal)?;
        let lower = simplify(&Formula::not(fi.with_false(&us[i])));
        let upper = simplify(&fi.with_true(&us[i]));
        let g = schroeder_interpolant(&lower, &upper, &ts[i], SchroederVariant::Selector)
            .map_err(internal)?;
        comps.push(simplify(&g));
    }
    let solution = verified(
        sp,
        Solution {
            components: comps,
            kind: SolutionKind::Reproductive,
        },
    )?;
    Ok(SuccElimTrace { stages, solution })
}

/// How [`solve_by_witnesses`] computes each elimination witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessFn {
    /// `f[p:=true]`
    FTrue,
    /// Combination of per-disjunct witnesses of a disjunctive form.
    DnfEhw,
    /// The Ackermann witness where it applies, `f[p:=true]` otherwise.
    AckermannThenFTrue,
}

fn witness(p: &str, f: &Formula, how: WitnessFn) -> Formula {
    match how {
        WitnessFn::FTrue => elim_witness(p, f).witness,
        WitnessFn::DnfEhw => elim_witness_dnf(p, f).witness,
        WitnessFn::AckermannThenFTrue => ackermann_rewrite(p, f)
            .map(|r| r.witness)
            .unwrap_or_else(|| elim_witness(p, f).witness),
    }
}

/// Computes elimination witnesses right to left, substituting each new
/// component into the previously computed ones.
pub fn solve_by_witnesses(sp: &SolutionProblem, how: WitnessFn) -> Result<Solution, SolveError> {
    if !exists_solution(sp) {
        return Err(SolveError::NoSolution);
    }
    let us = sp.unknowns();
    let n = us.len();
    let mut gs = vec![Formula::Top; n];
    for i in (0..n).rev() {
        let f = substitute(sp.formula(), &us[i + 1..], &gs[i + 1..]).map_err(internal)?;
        gs[i] = witness(&us[i], &f, how);
        let g = [gs[i].clone()];
        for gj in &mut gs[i + 1..] {
            *gj = simplify(&substitute(gj, &us[i..=i], &g).map_err(internal)?);
        }
    }
    verified(
        sp,
        Solution {
            components: gs,
            kind: SolutionKind::Particular,
        },
    )
}

/// Reproductive solution built from any particular solution `g`:
/// component i is a clean variant of `(g_i & ~F[t]) | (t_i & F[t])`.
pub fn rigorous_solution(sp: &SolutionProblem, g: &[Formula]) -> Result<Solution, SolveError> {
    let ts = params_of(sp)?;
    if g.len() != sp.unknowns().len() {
        return Err(SolveError::NotAParticularSolution(format!(
            "{} components for {} unknowns",
            g.len(),
            sp.unknowns().len()
        )));
    }
    if let Some(reason) = particular_violation(sp, g) {
        return Err(SolveError::NotAParticularSolution(reason));
    }
    let t_atoms: Vec<Formula> = ts.iter().map(Formula::atom).collect();
    let ft = sp.instance(&t_atoms).map_err(internal)?;
    let comps = g
        .iter()
        .zip(&t_atoms)
        .map(|(gi, ti)| {
            let r = Formula::or(
                Formula::and(gi.clone(), Formula::not(ft.clone())),
                Formula::and(ti.clone(), ft.clone()),
            );
            clean_variant(&simplify(&r))
        })
        .collect();
    verified(
        sp,
        Solution {
            components: comps,
            kind: SolutionKind::Reproductive,
        },
    )
}

/// Replaces the parameters of a reproductive solution by `ts`.
pub fn instantiate(
    sp: &SolutionProblem,
    sol: &Solution,
    ts: &[Formula],
) -> Result<Solution, SolveError> {
    let params = params_of(sp)?;
    if ts.len() != params.len() {
        return Err(SolveError::NotSubstitutible(format!(
            "{} formulas for {} parameters",
            ts.len(),
            params.len()
        )));
    }
    for (i, t) in ts.iter().enumerate() {
        if let Some(u) = sp.unknowns().iter().find(|u| t.occurs_free(u)) {
            return Err(SolveError::NotSubstitutible(format!(
                "instantiation {} mentions unknown `{u}`",
                i + 1
            )));
        }
    }
    let comps = sol
        .components
        .iter()
        .map(|c| {
            substitute(c, params, ts)
                .map(|g| simplify(&g))
                .map_err(|e| SolveError::NotSubstitutible(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(v) = substitutibility_violation(&comps, sp.unknowns(), sp.formula()) {
        return Err(SolveError::NotSubstitutible(v.to_string()));
    }
    verified(
        sp,
        Solution {
            components: comps,
            kind: SolutionKind::Particular,
        },
    )
}

/// Constant solution from syntactic polarity: `true` for unknowns occurring
/// only positively (or not at all), `false` for those occurring only
/// negatively. `None` when some unknown has both polarities or the
/// constants do not solve the problem.
pub fn polarity_shortcut(sp: &SolutionProblem) -> Option<Solution> {
    let comps = sp
        .unknowns()
        .iter()
        .map(|u| match sp.formula().polarity_of(u) {
            Polarity::PositiveOnly | Polarity::Absent => Some(Formula::Top),
            Polarity::NegativeOnly => Some(Formula::Bot),
            Polarity::Both => None,
        })
        .collect::<Option<Vec<_>>>()?;
    is_particular_solution(sp, &comps).then_some(Solution {
        components: comps,
        kind: SolutionKind::Particular,
    })
}

/// Definiens of `p` in `f` when `f` implicitly defines `p`, that is, when
/// `f[p:=true] & f[p:=false]` is unsatisfiable. Then `f` entails
/// `p <-> definiens`.
pub fn definiens(f: &Formula, p: &str) -> Option<Formula> {
    let pos = f.with_true(p);
    let neg = f.with_false(p);
    (!is_satisfiable(&Formula::and(pos.clone(), neg))).then(|| simplify(&pos))
}

fn constructive_in_order(sp: &SolutionProblem, order: &[usize]) -> Option<Vec<Formula>> {
    let us = sp.unknowns();
    let mut done: Vec<String> = Vec::new();
    let mut comps: Vec<Formula> = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        let inst = substitute(sp.formula(), &done, &comps).ok()?;
        let later: Vec<&String> = order[k + 1..].iter().map(|&j| &us[j]).collect();
        let f = simplify(&eliminate_all(&later, &inst));
        let u = &us[i];
        let g = match f.polarity_of(u) {
            Polarity::PositiveOnly | Polarity::Absent => Formula::Top,
            Polarity::NegativeOnly => Formula::Bot,
            Polarity::Both => definiens(&f, u)?,
        };
        done.push(u.clone());
        comps.push(g);
    }
    let mut out = vec![Formula::Top; us.len()];
    for (k, &i) in order.iter().enumerate() {
        out[i] = comps[k].clone();
    }
    Some(out)
}

/// Upper bound on unknowns for trying all orderings.
const MAX_REORDER: usize = 6;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..n {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Solves unknown by unknown using only polarity and definability in the
/// intermediate formula. With `reorder`, other orderings of the unknowns
/// are tried when the given one gets stuck. `None` when no ordering works.
pub fn solve_constructive(sp: &SolutionProblem, reorder: bool) -> Option<Solution> {
    if !exists_solution(sp) {
        return None;
    }
    let n = sp.unknowns().len();
    let orders = if reorder && n <= MAX_REORDER {
        permutations(n)
    } else {
        vec![(0..n).collect()]
    };
    orders.iter().find_map(|order| {
        let comps = constructive_in_order(sp, order)?;
        is_particular_solution(sp, &comps).then_some(Solution {
            components: comps,
            kind: SolutionKind::Particular,
        })
    })
}

/// Choice of n-ary solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    SuccElim,
    SecondOrder(Strategy),
    Witnesses(WitnessFn),
}

pub fn solve(sp: &SolutionProblem, method: Method) -> Result<Solution, SolveError> {
    match method {
        Method::SuccElim => solve_succ_elim(sp),
        Method::SecondOrder(s) => solve_on_second_order(sp, s),
        Method::Witnesses(w) => solve_by_witnesses(sp, w),
    }
}

/// Rewrites each component over its free atoms minus `banned`, failing when
/// a component depends on a banned atom.
fn project_components(comps: &mut [Formula], banned: &[&AtomSet]) -> Result<(), SolveError> {
    for (c, b) in comps.iter_mut().zip(banned) {
        if c.free_atoms().is_disjoint(b) {
            continue;
        }
        let keep = c.free_atoms().difference(b);
        *c = project_vocabulary(c, &keep)
            .map_err(|e| SolveError::ProjectionFailed(e.to_string()))?;
    }
    Ok(())
}

/// The problem over the universal closure of the formula on its forbidden
/// atoms. Its solutions are exactly the solutions of `sp` that do not
/// mention a forbidden atom.
pub fn restricted_closure(sp: &SolutionProblem) -> Result<SolutionProblem, SolveError> {
    let bs = sp
        .formula()
        .free_atoms()
        .intersection(sp.forbidden())
        .to_vec();
    sp.with_formula(eliminate_all_universal(&bs, sp.formula()))
}

/// Solves with the forbidden atoms of `sp` excluded from every component,
/// by solving the universal closure of the formula over them.
pub fn solve_restricted(sp: &SolutionProblem, method: Method) -> Result<Solution, SolveError> {
    let forbidden = sp.forbidden();
    if forbidden.is_empty() {
        return solve(sp, method);
    }
    let mut sol = solve(&restricted_closure(sp)?, method)?;
    let banned = vec![forbidden; sol.components.len()];
    project_components(&mut sol.components, &banned)?;
    verified(sp, sol)
}

/// Solves with a separate set of forbidden atoms per component. Stage one
/// computes a reproductive solution `R[t]`; stage two solves for
/// instantiations `T` such that each `R_i[T]` does not depend on its
/// forbidden atoms `b_i`, as the problem `&_i (R_i[t, c_i] -> R_i[t, b_i])`
/// in the unknowns `t`, with fresh copies `c_i` universally closed.
pub fn solve_restricted_two_stage(
    sp: &SolutionProblem,
    forbidden: &[AtomSet],
) -> Result<Solution, SolveError> {
    let ts = params_of(sp)?;
    if forbidden.len() != sp.unknowns().len() {
        return Err(SolveError::InvalidProblem(format!(
            "{} restrictions for {} unknowns",
            forbidden.len(),
            sp.unknowns().len()
        )));
    }
    let rs = solve_succ_elim(sp)?.components;

    let mut avoid = sp
        .formula()
        .all_names()
        .union(&sp.unknowns().iter().cloned().collect())
        .union(&ts.iter().cloned().collect());
    for r in &rs {
        avoid = avoid.union(&r.all_names());
    }
    for b in forbidden {
        avoid = avoid.union(b);
    }
    let mut copies = Vec::new();
    let mut conjuncts = Vec::new();
    for (r, b) in rs.iter().zip(forbidden) {
        let bs = r.free_atoms().intersection(b).to_vec();
        let cs: Vec<String> = bs
            .iter()
            .map(|x| {
                let c = fresh_name(x, &avoid);
                avoid.insert(c.clone());
                c
            })
            .collect();
        let c_atoms: Vec<Formula> = cs.iter().map(Formula::atom).collect();
        let renamed = substitute(r, &bs, &c_atoms).map_err(internal)?;
        conjuncts.push(Formula::implies(renamed, r.clone()));
        copies.extend(cs);
    }
    let stage2 = eliminate_all_universal(&copies, &Formula::and_all(conjuncts));
    let sp2 = SolutionProblem::new(stage2, ts)?;
    let t = solve_on_second_order(&sp2, Strategy::Interval)?.components;

    let mut comps = rs
        .iter()
        .map(|r| {
            substitute(r, ts, &t)
                .map(|g| simplify(&g))
                .map_err(internal)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let banned: Vec<&AtomSet> = forbidden.iter().collect();
    project_components(&mut comps, &banned)?;
    verified(
        sp,
        Solution {
            components: comps,
            kind: SolutionKind::Particular,
        },
    )
}
