//! Acceptance suite. Each criterion prints one `PASS` or `FAIL` line; the
//! process exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use boolsolve::elimination::{
    ackermann_rewrite, ehw_combine, elim_witness, elim_witness_dnf, project_vocabulary,
    weakest_precondition, DisjunctWitnesses,
};
use boolsolve::formula::{is_substitutible, substitute};
use boolsolve::oracle::{
    check_particular, check_reproductive, enumerate_solutions, CostGuard, FunctionSpace,
};
use boolsolve::random::{all_formulas, FormulaGen};
use boolsolve::semantics::{entails, equivalent, formula_from_table, truth_table};
use boolsolve::solve::{
    exists_solution, instantiate, rigorous_solution, solve_by_witnesses, solve_on_second_order,
    solve_restricted, solve_restricted_two_stage, solve_succ_elim, Method, Solution, SolutionKind,
    SolutionProblem, Strategy, WitnessFn,
};
use boolsolve::{parse, AtomSet, Formula};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f(text: &str) -> Formula {
    parse(text).unwrap()
}

fn basis(names: &[&str]) -> AtomSet {
    names.iter().copied().collect()
}

/// The canonical form of `g` as a function of `basis`.
fn over(g: &Formula, basis: &AtomSet) -> Formula {
    formula_from_table(&truth_table(g, basis).unwrap())
}

fn guard() -> CostGuard {
    CostGuard::default()
}

/// Unknown and base-atom shapes used for random problems.
const SHAPES: [(&[&str], &[&str]); 4] = [
    (&["p"], &["a"]),
    (&["p"], &["a", "b"]),
    (&["p1", "p2"], &["a"]),
    (&["p1", "p2"], &["a", "b"]),
];

fn random_solvable(gen: &mut FormulaGen, i: usize) -> SolutionProblem {
    let (us, bs) = SHAPES[i % SHAPES.len()];
    gen.solvable_problem(us, bs, 2 + i % 3)
}

fn golden_range() -> Outcome {
    let sp = SolutionProblem::new(
        f("(a -> b) -> ((p1 -> p2) & (a -> p2) & (p2 -> b))"),
        &["p1", "p2"],
    )
    .unwrap();
    let ab = basis(&["a", "b"]);
    let found: Vec<Vec<Formula>> = enumerate_solutions(&sp, &ab, guard())
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|s| s.components)
        .collect();
    let listed = |x: &str, y: &str| found.contains(&vec![over(&f(x), &ab), over(&f(y), &ab)]);
    let solutions = [
        ("a", "a"),
        ("a", "b"),
        ("false", "a"),
        ("b", "b"),
        ("a & b", "a | b"),
    ];
    let non_solutions = [
        ("b", "a"),
        ("a", "false"),
        ("false", "false"),
        ("false", "true"),
        ("true", "false"),
        ("true", "true"),
    ];
    for (x, y) in solutions {
        ensure(listed(x, y), || {
            format!("({x}, {y}) not classified as a solution")
        })?;
    }
    for (x, y) in non_solutions {
        ensure(!listed(x, y), || {
            format!("({x}, {y}) classified as a solution")
        })?;
    }
    Ok(format!(
        "{} solutions over {{a, b}}; 5 positive and 6 negative classifications match",
        found.len()
    ))
}

fn golden_precondition() -> Outcome {
    let body = f("(p1 -> p2) & (a -> p2) & (p2 -> b)");
    let sp = SolutionProblem::new(body.clone(), &["p1", "p2"]).unwrap();
    ensure(!exists_solution(&sp), || {
        "bare problem reported solvable".into()
    })?;
    let pre = weakest_precondition(&["p1", "p2"], &body);
    let expected = over(&f("a -> b"), &basis(&["a", "b"]));
    ensure(pre == expected, || {
        format!("precondition {pre}, expected {expected}")
    })?;
    let guarded = SolutionProblem::new(Formula::implies(pre.clone(), body), &["p1", "p2"]).unwrap();
    ensure(exists_solution(&guarded), || {
        "guarded problem unsolvable".into()
    })?;
    Ok(format!("precondition `{pre}`"))
}

fn existence_law() -> Outcome {
    let check = |sp: SolutionProblem, base: &AtomSet| -> Result<(), String> {
        let found = enumerate_solutions(&sp, base, guard()).map_err(|e| e.to_string())?;
        ensure(exists_solution(&sp) == !found.is_empty(), || {
            format!("disagreement on {}", sp.formula())
        })
    };
    let mut count = 0usize;
    // exhaustive: every formula up to depth 2 with one unknown and one base
    // atom, up to depth 1 for the larger shapes
    for (us, bs) in SHAPES {
        let atoms: Vec<&str> = us.iter().chain(bs).copied().collect();
        let depth = if atoms.len() == 2 { 2 } else { 1 };
        let base = basis(bs);
        for g in all_formulas(&atoms, depth) {
            check(SolutionProblem::new(g, us).unwrap(), &base)?;
            count += 1;
        }
    }
    let exhaustive = count;
    // sampled: depths 3 and 4, some with quantifiers
    let mut gen = FormulaGen::new(11).with_quantifiers(0.1);
    for i in 0..8000 {
        let (us, bs) = SHAPES[i % SHAPES.len()];
        let sp = gen.problem(us, bs, 3 + i % 2);
        check(sp, &basis(bs))?;
        count += 1;
    }
    Ok(format!(
        "{count} problems agree ({exhaustive} exhaustive, {} sampled)",
        count - exhaustive
    ))
}

/// All tuples of basis functions for the parameters of `sp`.
fn basis_tuples(sp: &SolutionProblem, base: &AtomSet) -> Vec<Vec<Formula>> {
    let space: Vec<Formula> = FunctionSpace::new(base.clone()).unwrap().iter().collect();
    let n = sp.parameters().unwrap().len();
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                space.iter().map(move |g| {
                    let mut t = t.clone();
                    t.push(g.clone());
                    t
                })
            })
            .collect();
    }
    out
}

fn solver_soundness() -> Outcome {
    let mut gen = FormulaGen::new(23).with_quantifiers(0.1);
    let methods = [
        Method::SuccElim,
        Method::SecondOrder(Strategy::Interval),
        Method::SecondOrder(Strategy::Reproductive),
        Method::Witnesses(WitnessFn::FTrue),
        Method::Witnesses(WitnessFn::DnfEhw),
        Method::Witnesses(WitnessFn::AckermannThenFTrue),
    ];
    let mut outputs = 0;
    let mut instances = 0;
    for i in 0..1000 {
        let sp = random_solvable(&mut gen, i);
        let base = basis(SHAPES[i % SHAPES.len()].1);
        for m in methods {
            let sol = boolsolve::solve::solve(&sp, m)
                .map_err(|e| format!("{m:?} failed on {}: {e}", sp.formula()))?;
            outputs += 1;
            match sol.kind {
                SolutionKind::Particular => {
                    let r = check_particular(&sp, &sol.components);
                    ensure(r.verdict, || {
                        format!("{m:?} on {}: {:?}", sp.formula(), r.failures)
                    })?;
                }
                SolutionKind::Reproductive => {
                    for ts in basis_tuples(&sp, &base) {
                        let inst = instantiate(&sp, &sol, &ts).map_err(|e| e.to_string())?;
                        let r = check_particular(&sp, &inst.components);
                        ensure(r.verdict, || {
                            format!("{m:?} on {} at {ts:?}: {:?}", sp.formula(), r.failures)
                        })?;
                        instances += 1;
                    }
                }
            }
        }
    }
    // the same checks through the individual entry points
    let sp = random_solvable(&mut gen, 3);
    let direct = [
        solve_succ_elim(&sp),
        solve_on_second_order(&sp, Strategy::Interval),
        solve_by_witnesses(&sp, WitnessFn::DnfEhw),
    ];
    for sol in direct {
        let sol = sol.map_err(|e| e.to_string())?;
        ensure(
            sol.kind == SolutionKind::Reproductive
                || check_particular(&sp, &sol.components).verdict,
            || "direct entry point disagrees".into(),
        )?;
    }
    Ok(format!(
        "{outputs} outputs on 1000 problems; {instances} parameter instantiations checked"
    ))
}

fn reproductivity() -> Outcome {
    let mut gen = FormulaGen::new(37).with_quantifiers(0.1);
    let mut checked = 0;
    for i in 0..1000 {
        let sp = random_solvable(&mut gen, i);
        let base = basis(SHAPES[i % SHAPES.len()].1);
        let succ = solve_succ_elim(&sp).map_err(|e| e.to_string())?;
        let particular =
            solve_on_second_order(&sp, Strategy::Interval).map_err(|e| e.to_string())?;
        let rigorous = rigorous_solution(&sp, &particular.components).map_err(|e| e.to_string())?;
        for (name, sol) in [("successive elimination", succ), ("rigorous", rigorous)] {
            let r = check_reproductive(&sp, &sol.components, &base, guard())
                .map_err(|e| e.to_string())?;
            ensure(r.verdict, || {
                format!("{name} output on {}: {}", sp.formula(), r.failures[0])
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} reproductive outputs verified against the oracle"
    ))
}

fn interval_law() -> Outcome {
    let mut gen = FormulaGen::new(41).with_quantifiers(0.1);
    let base = basis(&["a", "b"]);
    let space: Vec<Formula> = FunctionSpace::new(base.clone()).unwrap().iter().collect();
    for i in 0..500 {
        let sp = gen.solvable_problem(&["p"], &["a", "b"], 2 + i % 3);
        let found = enumerate_solutions(&sp, &base, guard()).map_err(|e| e.to_string())?;
        let body = sp.formula();
        let lower = Formula::not(body.with_false("p"));
        let upper = body.with_true("p");
        for g in &space {
            let in_range = entails(&lower, g) && entails(g, &upper);
            let listed = found.iter().any(|s| &s.components[0] == g);
            ensure(in_range == listed, || {
                format!("{g} on {}: range {in_range}, oracle {listed}", body)
            })?;
        }
    }
    Ok("500 unary problems; solution sets equal the ranges".into())
}

fn witness_laws() -> Outcome {
    let mut gen = FormulaGen::new(53).with_quantifiers(0.15);
    let mut ackermann = 0;
    for i in 0..1000 {
        let g = gen.formula(&["p", "a", "b", "c"], 2 + i % 3);
        let ex = Formula::exists("p", g.clone());
        for (name, r) in [
            ("f-true", elim_witness("p", &g)),
            ("dnf", elim_witness_dnf("p", &g)),
        ] {
            ensure(
                is_substitutible(std::slice::from_ref(&r.witness), &["p"], &r.body),
                || format!("{name} witness not substitutible in {g}"),
            )?;
            let residue = substitute(&r.body, &["p"], std::slice::from_ref(&r.witness)).unwrap();
            ensure(equivalent(&ex, &residue), || {
                format!("{name} witness wrong for {g}")
            })?;
        }
        if let Some(r) = ackermann_rewrite("p", &g) {
            ackermann += 1;
            let residue = substitute(&r.body, &["p"], std::slice::from_ref(&r.witness)).unwrap();
            ensure(equivalent(&ex, &residue), || {
                format!("ackermann witness wrong for {g}")
            })?;
        }
    }
    // two disjuncts with witnesses true and false
    let dw = DisjunctWitnesses {
        disjuncts: vec![f("p & a"), f("~p & b")],
        witnesses: vec![Formula::Top, Formula::Bot],
    };
    let w = ehw_combine("p", &dw).map_err(|e| e.to_string())?;
    let residue = substitute(&f("p & a | ~p & b"), &["p"], std::slice::from_ref(&w)).unwrap();
    ensure(equivalent(&residue, &f("a | b")), || {
        format!("combined witness {w} gives {residue}")
    })?;
    let r = elim_witness_dnf("p", &f("p & a | ~p & b"));
    ensure(equivalent(&r.residue, &f("a | b")), || {
        "dnf residue differs from a | b".into()
    })?;
    Ok(format!(
        "1000 formulas, {ackermann} with an Ackermann rewrite; combined witness `{w}`"
    ))
}

fn precondition_maximality() -> Outcome {
    let mut gen = FormulaGen::new(67).with_quantifiers(0.1);
    let base = basis(&["a", "b"]);
    let space: Vec<Formula> = FunctionSpace::new(base.clone()).unwrap().iter().collect();
    let mut pairs = 0;
    for i in 0..500 {
        let (us, _) = SHAPES[i % SHAPES.len()];
        let sp = gen.problem(us, &["a", "b"], 2 + i % 3);
        let pre = weakest_precondition(us, sp.formula());
        let guarded =
            SolutionProblem::new(Formula::implies(pre.clone(), sp.formula().clone()), us).unwrap();
        ensure(exists_solution(&guarded), || {
            format!("guarded {} unsolvable", sp.formula())
        })?;
        for b in &space {
            let with_b =
                SolutionProblem::new(Formula::implies(b.clone(), sp.formula().clone()), us)
                    .unwrap();
            if exists_solution(&with_b) {
                pairs += 1;
                ensure(entails(b, &pre), || format!("{b} does not entail {pre}"))?;
            }
        }
    }
    Ok(format!(
        "500 problems; {pairs} solvable antecedents entail the precondition"
    ))
}

fn restricted_solving() -> Outcome {
    let mut gen = FormulaGen::new(79).with_quantifiers(0.1);
    let methods = [
        Method::SecondOrder(Strategy::Interval),
        Method::SuccElim,
        Method::Witnesses(WitnessFn::FTrue),
        Method::SecondOrder(Strategy::Reproductive),
    ];
    for i in 0..200 {
        let us: &[&str] = if i % 2 == 0 { &["p"] } else { &["p1", "p2"] };
        let sp = gen.restricted_problem(us, &["a"], &["b"], 2 + i % 3);
        let m = methods[i % methods.len()];
        let sol =
            solve_restricted(&sp, m).map_err(|e| format!("{m:?} on {}: {e}", sp.formula()))?;
        let keep = sp
            .formula()
            .free_atoms()
            .union(
                &sp.parameters()
                    .unwrap()
                    .iter()
                    .map(String::as_str)
                    .collect(),
            )
            .difference(sp.forbidden());
        for c in &sol.components {
            project_vocabulary(c, &keep)
                .map_err(|e| format!("component {c} of {} mentions b: {e}", sp.formula()))?;
            ensure(!c.occurs_free("b"), || format!("component {c} mentions b"))?;
        }
        if sol.kind == SolutionKind::Particular {
            let r = check_particular(&sp, &sol.components);
            ensure(r.verdict, || {
                format!("{} on {}", r.failures[0], sp.formula())
            })?;
        } else {
            let r = check_reproductive(&sp, &sol.components, &basis(&["a"]), guard())
                .map_err(|e| e.to_string())?;
            ensure(r.verdict, || {
                format!("{} on {}", r.failures[0], sp.formula())
            })?;
        }
    }
    let demo = SolutionProblem::new(f("(a & (b <-> p)) <-> (b & (a <-> q))"), &["p", "q"])
        .unwrap()
        .with_fresh_parameters();
    let Solution { components, .. } =
        solve_restricted_two_stage(&demo, &[basis(&["b"]), basis(&["a"])])
            .map_err(|e| e.to_string())?;
    ensure(
        equivalent(&components[0], &f("a")) && equivalent(&components[1], &f("b")),
        || format!("demo returned ({}, {})", components[0], components[1]),
    )?;
    Ok(format!(
        "200 restricted problems; demo gives ({}, {})",
        components[0], components[1]
    ))
}

fn substitution_suite() -> Outcome {
    let mut gen = FormulaGen::new(97).with_quantifiers(0.2);
    let (mut first, mut second) = (0, 0);
    let mut tries = 0;
    while first < 1000 || second < 1000 {
        tries += 1;
        ensure(tries < 100_000, || "too few substitutible instances".into())?;
        let target = gen.formula(&["p", "a", "b", "q"], 2 + tries % 3);
        let g = gen.formula(&["a", "b", "q"], 2);
        if first < 1000 && is_substitutible(std::slice::from_ref(&g), &["p"], &target) {
            first += 1;
            let fg = substitute(&target, &["p"], std::slice::from_ref(&g)).unwrap();
            let bind = Formula::iff(Formula::atom("p"), g);
            let ex = Formula::exists("p", Formula::and(target.clone(), bind.clone()));
            let all = Formula::forall("p", Formula::or(target.clone(), Formula::not(bind)));
            ensure(equivalent(&fg, &ex) && equivalent(&fg, &all), || {
                format!("pulling out fails for {target}")
            })?;
        }
        let alpha = gen.formula(&["a", "b"], 2);
        let v = gen.formula(&["a", "b", "c"], 2);
        let w = gen.formula(&["a", "c"], 2);
        let mixed = Formula::or(
            Formula::and(alpha.clone(), v.clone()),
            Formula::and(Formula::not(alpha.clone()), w.clone()),
        );
        if second < 1000 && is_substitutible(std::slice::from_ref(&mixed), &["p"], &target) {
            second += 1;
            let lhs = substitute(&target, &["p"], &[mixed]).unwrap();
            let rhs = Formula::or(
                Formula::and(alpha.clone(), substitute(&target, &["p"], &[v]).unwrap()),
                Formula::and(
                    Formula::not(alpha),
                    substitute(&target, &["p"], &[w]).unwrap(),
                ),
            );
            ensure(equivalent(&lhs, &rhs), || {
                format!("distribution fails for {target}")
            })?;
        }
    }
    Ok(format!(
        "{first} pulling-out and {second} distribution instances"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("solutions between a and b", golden_range),
        ("precondition for solvability", golden_precondition),
        ("existence law", existence_law),
        ("solver soundness", solver_soundness),
        ("reproductivity", reproductivity),
        ("interval law", interval_law),
        ("witness laws", witness_laws),
        ("precondition maximality", precondition_maximality),
        ("restricted solving", restricted_solving),
        ("substitution equivalences", substitution_suite),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} ({secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
