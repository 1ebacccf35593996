//! Second-order quantifier elimination on atoms, elimination witnesses and
//! vocabulary projection.

use thiserror::Error;

use crate::formula::{clean_variant, is_substitutible, substitute, AtomSet, Formula, Polarity};
use crate::semantics::{
    canonical, equivalent, is_satisfiable, minterm, simplify, table_over, Valuation,
};

/// Free-atom count up to which DNF conversion goes through the truth table.
pub const DEFAULT_DNF_CUTOFF: usize = 12;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ElimError {
    #[error("disjunct {} and its witness do not satisfy the elimination contract: {reason}", index + 1)]
    InvalidDisjunctWitness { index: usize, reason: String },
    #[error("{disjuncts} disjuncts but {witnesses} witnesses")]
    LengthMismatch { disjuncts: usize, witnesses: usize },
    #[error("formula depends on a dropped atom: value differs between {left} and {right}")]
    NotIndependent { left: Valuation, right: Valuation },
}

/// An elimination witness: `exists eliminated . body` is equivalent to
/// `residue`, which is `body` with `witness` substituted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessResult {
    pub witness: Formula,
    pub eliminated: String,
    /// The formula the witness was computed for; a clean variant of the
    /// input when the input bound one of the witness atoms.
    pub body: Formula,
    pub residue: Formula,
}

/// Disjuncts of a formula paired with per-disjunct elimination witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjunctWitnesses {
    pub disjuncts: Vec<Formula>,
    pub witnesses: Vec<Formula>,
}

/// `exists p . f` rewritten as `f[p:=true] | f[p:=false]`, simplified.
pub fn shannon_eliminate(p: &str, f: &Formula) -> Formula {
    simplify(&Formula::or(
        simplify(&f.with_true(p)),
        simplify(&f.with_false(p)),
    ))
}

/// Eliminates `exists ps . f` one quantifier at a time, innermost
/// (rightmost) first.
pub fn eliminate_all<S: AsRef<str>>(ps: &[S], f: &Formula) -> Formula {
    ps.iter()
        .rev()
        .fold(f.clone(), |acc, p| shannon_eliminate(p.as_ref(), &acc))
}

/// Universal counterpart of `eliminate_all`: `forall ps . f` via
/// `f[p:=true] & f[p:=false]`, innermost first.
pub fn eliminate_all_universal<S: AsRef<str>>(ps: &[S], f: &Formula) -> Formula {
    ps.iter().rev().fold(f.clone(), |acc, p| {
        let p = p.as_ref();
        simplify(&Formula::and(
            simplify(&acc.with_true(p)),
            simplify(&acc.with_false(p)),
        ))
    })
}

/// Removes every quantifier by expansion. The result is quantifier-free
/// and equivalent to `f`.
pub fn expand_quantifiers(f: &Formula) -> Formula {
    match f {
        Formula::Top | Formula::Bot | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(expand_quantifiers(g)),
        Formula::And(g, h) => Formula::and(expand_quantifiers(g), expand_quantifiers(h)),
        Formula::Or(g, h) => Formula::or(expand_quantifiers(g), expand_quantifiers(h)),
        Formula::Implies(g, h) => Formula::implies(expand_quantifiers(g), expand_quantifiers(h)),
        Formula::Iff(g, h) => Formula::iff(expand_quantifiers(g), expand_quantifiers(h)),
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            let body = expand_quantifiers(g);
            let (t, e) = (simplify(&body.with_true(x)), simplify(&body.with_false(x)));
            if matches!(f, Formula::Exists(..)) {
                simplify(&Formula::or(t, e))
            } else {
                simplify(&Formula::and(t, e))
            }
        }
    }
}

/// Elimination witness `f[p:=true]`: in propositional logic
/// `exists p . F` is equivalent to `F[F[true]]`.
pub fn elim_witness(p: &str, f: &Formula) -> WitnessResult {
    let witness = simplify(&f.with_true(p));
    let body = if is_substitutible(std::slice::from_ref(&witness), &[p], f) {
        f.clone()
    } else {
        clean_variant(f)
    };
    let residue = substitute(&body, &[p], std::slice::from_ref(&witness))
        .expect("witness is substitutible into a clean variant");
    WitnessResult {
        witness,
        eliminated: p.to_string(),
        body,
        residue,
    }
}

/// Positive Ackermann rewrite. Applies when some top-level conjunct of `f`
/// is `g -> p` with `p` not free in `g` and `p` occurs only negatively in
/// the remaining conjuncts; the witness is then `g`.
pub fn ackermann_rewrite(p: &str, f: &Formula) -> Option<WitnessResult> {
    let mut conjuncts = Vec::new();
    flatten_and(f, &mut conjuncts);
    for (i, c) in conjuncts.iter().enumerate() {
        let Formula::Implies(g, head) = c else {
            continue;
        };
        if !matches!(&**head, Formula::Atom(a) if a == p) || g.occurs_free(p) {
            continue;
        }
        let rest = Formula::and_all(
            conjuncts
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, c)| (*c).clone()),
        );
        if !matches!(
            rest.polarity_of(p),
            Polarity::NegativeOnly | Polarity::Absent
        ) {
            continue;
        }
        let witness = (**g).clone();
        let Ok(residue) = substitute(&rest, &[p], std::slice::from_ref(&witness)) else {
            continue;
        };
        return Some(WitnessResult {
            witness,
            eliminated: p.to_string(),
            body: f.clone(),
            residue,
        });
    }
    None
}

fn flatten_and<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::And(g, h) => {
            flatten_and(g, out);
            flatten_and(h, out);
        }
        _ => out.push(f),
    }
}

/// Combines per-disjunct witnesses into one witness for the disjunction:
/// the conjunction over i of
/// `(~D1[W1] & ... & ~D(i-1)[W(i-1)] & Di[Wi]) -> Wi`.
pub fn ehw_combine(p: &str, dw: &DisjunctWitnesses) -> Result<Formula, ElimError> {
    if dw.disjuncts.len() != dw.witnesses.len() {
        return Err(ElimError::LengthMismatch {
            disjuncts: dw.disjuncts.len(),
            witnesses: dw.witnesses.len(),
        });
    }
    let mut instances = Vec::with_capacity(dw.disjuncts.len());
    for (i, (d, w)) in dw.disjuncts.iter().zip(&dw.witnesses).enumerate() {
        if w.occurs_free(p) {
            return Err(ElimError::InvalidDisjunctWitness {
                index: i,
                reason: format!("witness mentions `{p}`"),
            });
        }
        let inst = substitute(d, &[p], std::slice::from_ref(w)).map_err(|e| {
            ElimError::InvalidDisjunctWitness {
                index: i,
                reason: e.to_string(),
            }
        })?;
        if !equivalent(&Formula::exists(p, d.clone()), &inst) {
            return Err(ElimError::InvalidDisjunctWitness {
                index: i,
                reason: "instance is not equivalent to the quantified disjunct".into(),
            });
        }
        instances.push(simplify(&inst));
    }
    let conjuncts = dw.witnesses.iter().enumerate().map(|(i, w)| {
        let guard = Formula::and_all(
            instances[..i]
                .iter()
                .map(|x| Formula::not(x.clone()))
                .chain(std::iter::once(instances[i].clone())),
        );
        Formula::implies(guard, w.clone())
    });
    Ok(simplify(&Formula::and_all(conjuncts)))
}

/// Disjunctive decomposition into conjunctions of literals. A formula that
/// is already such a disjunction keeps its disjuncts; otherwise full
/// minterm expansion when at most `cutoff` atoms are free, distributive
/// rewriting beyond.
pub fn dnf_disjuncts(f: &Formula, cutoff: usize) -> Vec<Formula> {
    if let Some(ds) = syntactic_dnf(f) {
        return ds;
    }
    let f = if f.is_quantifier_free() {
        f.clone()
    } else {
        expand_quantifiers(f)
    };
    let basis = f.free_atoms();
    if basis.len() <= cutoff {
        let bits = table_over(&f, &basis.to_vec()).expect("free atoms are in the basis");
        return (0..bits.len())
            .filter(|&i| bits.get(i))
            .map(|i| minterm(&basis, i))
            .collect();
    }
    distribute(&nnf(&f, true))
        .into_iter()
        .map(|clause| {
            Formula::and_all(clause.into_iter().map(|(a, pos)| {
                if pos {
                    Formula::Atom(a)
                } else {
                    Formula::not(Formula::Atom(a))
                }
            }))
        })
        .collect()
}

type Clause = Vec<(String, bool)>;

fn is_literal_conjunction(f: &Formula) -> bool {
    match f {
        Formula::Top | Formula::Bot | Formula::Atom(_) => true,
        Formula::Not(g) => matches!(&**g, Formula::Atom(_)),
        Formula::And(g, h) => is_literal_conjunction(g) && is_literal_conjunction(h),
        _ => false,
    }
}

fn syntactic_dnf(f: &Formula) -> Option<Vec<Formula>> {
    fn collect(f: &Formula, out: &mut Vec<Formula>) -> bool {
        match f {
            Formula::Or(g, h) => collect(g, out) && collect(h, out),
            g if is_literal_conjunction(g) => {
                out.push(g.clone());
                true
            }
            _ => false,
        }
    }
    let mut out = Vec::new();
    collect(f, &mut out).then_some(out)
}

/// Negation normal form over `&`, `|` and literals; constants are kept.
fn nnf(f: &Formula, positive: bool) -> Formula {
    match f {
        Formula::Top => {
            if positive {
                Formula::Top
            } else {
                Formula::Bot
            }
        }
        Formula::Bot => {
            if positive {
                Formula::Bot
            } else {
                Formula::Top
            }
        }
        Formula::Atom(_) => {
            if positive {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }
        Formula::Not(g) => nnf(g, !positive),
        Formula::And(g, h) | Formula::Or(g, h) => {
            let is_and = matches!(f, Formula::And(..)) == positive;
            let (l, r) = (nnf(g, positive), nnf(h, positive));
            if is_and {
                Formula::and(l, r)
            } else {
                Formula::or(l, r)
            }
        }
        Formula::Implies(g, h) => nnf(
            &Formula::or(Formula::not((**g).clone()), (**h).clone()),
            positive,
        ),
        Formula::Iff(g, h) => {
            let (g, h) = ((**g).clone(), (**h).clone());
            let unfolded = Formula::or(
                Formula::and(g.clone(), h.clone()),
                Formula::and(Formula::not(g), Formula::not(h)),
            );
            nnf(&unfolded, positive)
        }
        Formula::Exists(..) | Formula::Forall(..) => nnf(&expand_quantifiers(f), positive),
    }
}

fn distribute(f: &Formula) -> Vec<Clause> {
    match f {
        Formula::Top => vec![Vec::new()],
        Formula::Bot => Vec::new(),
        Formula::Atom(a) => vec![vec![(a.clone(), true)]],
        Formula::Not(g) => match &**g {
            Formula::Atom(a) => vec![vec![(a.clone(), false)]],
            _ => unreachable!("input is in negation normal form"),
        },
        Formula::Or(g, h) => {
            let mut out = distribute(g);
            for c in distribute(h) {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
            out
        }
        Formula::And(g, h) => {
            let (l, r) = (distribute(g), distribute(h));
            let mut out = Vec::new();
            for a in &l {
                for b in &r {
                    let mut c = a.clone();
                    for lit in b {
                        if !c.contains(lit) {
                            c.push(lit.clone());
                        }
                    }
                    if !out.contains(&c) {
                        out.push(c);
                    }
                }
            }
            out
        }
        _ => unreachable!("input is in negation normal form"),
    }
}

/// Witness for a conjunction of literals: `true` when `p` occurs only
/// positively or not at all, `false` when only negatively or in both
/// polarities (the conjunct is then unsatisfiable).
fn conjunct_witness(p: &str, conjunct: &Formula) -> Formula {
    match conjunct.polarity_of(p) {
        Polarity::PositiveOnly | Polarity::Absent => Formula::Top,
        Polarity::NegativeOnly | Polarity::Both => Formula::Bot,
    }
}

/// Elimination witness via a disjunctive decomposition and the combination
/// of per-disjunct witnesses.
pub fn elim_witness_dnf(p: &str, f: &Formula) -> WitnessResult {
    elim_witness_dnf_with(p, f, DEFAULT_DNF_CUTOFF)
}

pub fn elim_witness_dnf_with(p: &str, f: &Formula, cutoff: usize) -> WitnessResult {
    let disjuncts = dnf_disjuncts(f, cutoff);
    let witnesses = disjuncts.iter().map(|d| conjunct_witness(p, d)).collect();
    let dw = DisjunctWitnesses {
        disjuncts,
        witnesses,
    };
    let witness = ehw_combine(p, &dw).expect("literal conjunctions admit constant witnesses");
    let body = if is_substitutible(std::slice::from_ref(&witness), &[p], f) {
        f.clone()
    } else {
        clean_variant(f)
    };
    let residue = substitute(&body, &[p], std::slice::from_ref(&witness))
        .expect("witness is substitutible into a clean variant");
    WitnessResult {
        witness,
        eliminated: p.to_string(),
        body,
        residue,
    }
}

/// The elimination result of `exists ps . f` in canonical form over its
/// own free atoms: the weakest condition under which `f` becomes solvable
/// for `ps`.
pub fn weakest_precondition<S: AsRef<str>>(ps: &[S], f: &Formula) -> Formula {
    canonical(&eliminate_all(ps, f))
}

/// An equivalent of `f` whose free atoms lie within `keep`, when `f` does
/// not semantically depend on the other atoms.
pub fn project_vocabulary(f: &Formula, keep: &AtomSet) -> Result<Formula, ElimError> {
    let free = f.free_atoms();
    let dropped = free.difference(keep).to_vec();
    let g = eliminate_all(&dropped, f);
    if equivalent(&g, f) {
        return Ok(g);
    }
    // g is the strongest consequence over `keep`, so some valuation makes
    // f false and g true; its witness for g differs only in dropped atoms
    let differ = Formula::and(g.clone(), Formula::not(f.clone()));
    let basis = free.to_vec();
    let bits = table_over(&differ, &basis).expect("basis covers the free atoms");
    let i = bits.first_one().expect("g and f are not equivalent");
    let left = Valuation::from_index(&free, i);
    let fixed: Vec<Formula> = keep
        .iter()
        .filter(|a| free.contains(a))
        .map(|a| {
            if left.get(a) == Some(true) {
                Formula::atom(a)
            } else {
                Formula::not(Formula::atom(a))
            }
        })
        .collect();
    let sat = Formula::and(Formula::and_all(fixed), f.clone());
    debug_assert!(is_satisfiable(&sat));
    let bits = table_over(&sat, &basis).expect("basis covers the free atoms");
    let right = Valuation::from_index(&free, bits.first_one().expect("g holds at left"));
    Err(ElimError::NotIndependent { left, right })
}
