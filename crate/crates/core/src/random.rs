//! Seeded generators of formulas and solution problems for testing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{AtomSet, Formula};
use crate::solve::{exists_solution, SolutionProblem};

/// Names used for quantified atoms. They never clash with generated free
/// atoms unless a caller passes them as atoms.
pub const BOUND_NAMES: [&str; 2] = ["q", "r"];

/// Deterministic random formula generator.
#[derive(Clone, Debug)]
pub struct FormulaGen {
    rng: ChaCha8Rng,
    /// Probability of a quantifier at an inner node.
    pub quantifier_rate: f64,
}

impl FormulaGen {
    pub fn new(seed: u64) -> FormulaGen {
        FormulaGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            quantifier_rate: 0.0,
        }
    }

    pub fn with_quantifiers(mut self, rate: f64) -> FormulaGen {
        self.quantifier_rate = rate;
        self
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A formula of depth at most `depth` over `atoms`.
    pub fn formula<S: AsRef<str>>(&mut self, atoms: &[S], depth: usize) -> Formula {
        self.formula_in(atoms, depth, &[])
    }

    fn leaf<S: AsRef<str>>(&mut self, atoms: &[S], bound: &[&str]) -> Formula {
        let k = atoms.len() + bound.len();
        let i = self.rng.gen_range(0..k + 2);
        if i < atoms.len() {
            Formula::atom(atoms[i].as_ref())
        } else if i < k {
            Formula::atom(bound[i - atoms.len()])
        } else if i == k {
            Formula::Top
        } else {
            Formula::Bot
        }
    }

    fn formula_in<S: AsRef<str>>(&mut self, atoms: &[S], depth: usize, bound: &[&str]) -> Formula {
        // constants are rarer than atoms at the leaves
        if depth == 0 || self.rng.gen_bool(0.2) {
            if self.rng.gen_bool(0.15) {
                return self.leaf::<&str>(&[], &[]);
            }
            return self.leaf(atoms, bound);
        }
        if self.rng.gen_bool(self.quantifier_rate) {
            let name = *BOUND_NAMES.choose(&mut self.rng).expect("nonempty");
            let mut inner = bound.to_vec();
            if !inner.contains(&name) {
                inner.push(name);
            }
            let body = self.formula_in(atoms, depth - 1, &inner);
            return if self.rng.gen_bool(0.5) {
                Formula::exists(name, body)
            } else {
                Formula::forall(name, body)
            };
        }
        match self.rng.gen_range(0..5) {
            0 => Formula::not(self.formula_in(atoms, depth - 1, bound)),
            op => {
                let f = self.formula_in(atoms, depth - 1, bound);
                let g = self.formula_in(atoms, depth - 1, bound);
                match op {
                    1 => Formula::and(f, g),
                    2 => Formula::or(f, g),
                    3 => Formula::implies(f, g),
                    _ => Formula::iff(f, g),
                }
            }
        }
    }

    /// A problem in `unknowns` over `unknowns ∪ base`, with parameters
    /// `t_1, t_2, ...`.
    pub fn problem(&mut self, unknowns: &[&str], base: &[&str], depth: usize) -> SolutionProblem {
        let atoms: Vec<&str> = unknowns.iter().chain(base).copied().collect();
        let f = self.formula(&atoms, depth);
        SolutionProblem::new(f, unknowns)
            .expect("generated names are valid")
            .with_fresh_parameters()
    }

    /// Like [`FormulaGen::problem`], retrying until the problem is solvable.
    pub fn solvable_problem(
        &mut self,
        unknowns: &[&str],
        base: &[&str],
        depth: usize,
    ) -> SolutionProblem {
        loop {
            let sp = self.problem(unknowns, base, depth);
            if exists_solution(&sp) {
                return sp;
            }
        }
    }

    /// A solvable problem whose formula mentions a forbidden atom, retrying
    /// until some solution avoids it.
    pub fn restricted_problem(
        &mut self,
        unknowns: &[&str],
        base: &[&str],
        forbidden: &[&str],
        depth: usize,
    ) -> SolutionProblem {
        let all: Vec<&str> = base.iter().chain(forbidden).copied().collect();
        let banned: AtomSet = forbidden.iter().copied().collect();
        loop {
            let sp = self
                .problem(unknowns, &all, depth)
                .with_forbidden(banned.clone())
                .expect("forbidden atoms are not unknowns");
            let closed = crate::solve::restricted_closure(&sp).expect("closure is well formed");
            if !sp.formula().free_atoms().is_disjoint(&banned) && exists_solution(&closed) {
                return sp;
            }
        }
    }
}

/// All quantifier-free formulas over `atoms` (and the constants) of depth at
/// most `depth`, in a fixed order.
pub fn all_formulas<S: AsRef<str>>(atoms: &[S], depth: usize) -> Vec<Formula> {
    let mut level: Vec<Formula> = atoms
        .iter()
        .map(|a| Formula::atom(a.as_ref()))
        .chain([Formula::Top, Formula::Bot])
        .collect();
    for _ in 0..depth {
        let mut next = level.clone();
        for f in &level {
            next.push(Formula::not(f.clone()));
        }
        for f in &level {
            for g in &level {
                next.push(Formula::and(f.clone(), g.clone()));
                next.push(Formula::or(f.clone(), g.clone()));
                next.push(Formula::implies(f.clone(), g.clone()));
                next.push(Formula::iff(f.clone(), g.clone()));
            }
        }
        level = next;
    }
    level
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let mut a = FormulaGen::new(7).with_quantifiers(0.2);
        let mut b = FormulaGen::new(7).with_quantifiers(0.2);
        for _ in 0..50 {
            assert_eq!(a.formula(&["p", "a"], 4), b.formula(&["p", "a"], 4));
        }
    }

    #[test]
    fn depth_is_bounded() {
        let mut g = FormulaGen::new(1).with_quantifiers(0.3);
        for _ in 0..200 {
            assert!(g.formula(&["p", "a", "b"], 3).depth() <= 3);
        }
    }

    #[test]
    fn exhaustive_counts() {
        // 1 atom plus two constants; depth 1 adds 3 negations and 4·9 binaries
        assert_eq!(all_formulas(&["a"], 0).len(), 3);
        assert_eq!(all_formulas(&["a"], 1).len(), 3 + 3 + 36);
    }

    #[test]
    fn solvable_problems_are_solvable() {
        let mut g = FormulaGen::new(3);
        for _ in 0..20 {
            let sp = g.solvable_problem(&["p1", "p2"], &["a", "b"], 3);
            assert!(exists_solution(&sp));
            assert_eq!(sp.parameters().map(|p| p.len()), Some(2));
        }
    }
}
