//! Formula syntax trees over nullary atoms, together with the syntactic
//! operations the solvers rely on: free atoms, polarity, capture-checked
//! simultaneous substitution and clean variants.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// A propositional formula extended with quantification upon atoms.
///
/// N-ary conjunctions and disjunctions are nested binary nodes. `->` and
/// `<->` are kept as nodes of their own so that printing round-trips.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    Top,
    Bot,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Formula {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Formula {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn implies(f: Formula, g: Formula) -> Formula {
        Formula::Implies(Box::new(f), Box::new(g))
    }

    pub fn iff(f: Formula, g: Formula) -> Formula {
        Formula::Iff(Box::new(f), Box::new(g))
    }

    pub fn exists(name: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(name.into(), Box::new(body))
    }

    pub fn forall(name: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(name.into(), Box::new(body))
    }

    /// `exists p1 . exists p2 . ... body`, outermost quantifier first.
    pub fn exists_all<S: AsRef<str>>(names: &[S], body: Formula) -> Formula {
        names
            .iter()
            .rev()
            .fold(body, |acc, n| Formula::exists(n.as_ref(), acc))
    }

    pub fn forall_all<S: AsRef<str>>(names: &[S], body: Formula) -> Formula {
        names
            .iter()
            .rev()
            .fold(body, |acc, n| Formula::forall(n.as_ref(), acc))
    }

    /// Left-nested conjunction; the empty conjunction is `true`.
    pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; the empty disjunction is `false`.
    pub fn or_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Bot)
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => f.is_quantifier_free() && g.is_quantifier_free(),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => 1,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.size(),
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => 1 + f.size() + g.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => 0,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.depth(),
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => 1 + f.depth().max(g.depth()),
        }
    }

    /// Atoms with at least one occurrence not bound by a quantifier.
    pub fn free_atoms(&self) -> AtomSet {
        let mut out = AtomSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    pub fn occurs_free(&self, atom: &str) -> bool {
        match self {
            Formula::Top | Formula::Bot => false,
            Formula::Atom(a) => a == atom,
            Formula::Not(f) => f.occurs_free(atom),
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => f.occurs_free(atom) || g.occurs_free(atom),
            Formula::Exists(x, f) | Formula::Forall(x, f) => x != atom && f.occurs_free(atom),
        }
    }

    /// Every name occurring in the formula, free, bound or as a binder.
    pub fn all_names(&self) -> AtomSet {
        let mut out = AtomSet::new();
        collect_names(self, &mut out);
        out
    }

    /// Names of quantifiers in whose scope some free occurrence of `atom` lies.
    pub fn capturing_binders(&self, atom: &str) -> AtomSet {
        let mut out = AtomSet::new();
        let mut scope = Vec::new();
        collect_capturing(self, atom, &mut scope, &mut out);
        out
    }

    pub fn polarity_of(&self, atom: &str) -> Polarity {
        let (pos, neg) = polarity_flags(self, atom, true);
        Polarity::from_flags(pos, neg)
    }

    /// Replace the free occurrences of `atom` by `by` without a capture check.
    /// Only sound when `by` is substitutible for `atom`; constants always are.
    pub(crate) fn replace_free(&self, atom: &str, by: &Formula) -> Formula {
        let mut map = HashMap::new();
        map.insert(atom, by);
        replace_map(self, &map)
    }

    /// `self[atom := true]`.
    pub fn with_true(&self, atom: &str) -> Formula {
        self.replace_free(atom, &Formula::Top)
    }

    /// `self[atom := false]`.
    pub fn with_false(&self, atom: &str) -> Formula {
        self.replace_free(atom, &Formula::Bot)
    }
}

fn collect_free(f: &Formula, bound: &mut Vec<String>, out: &mut AtomSet) {
    match f {
        Formula::Top | Formula::Bot => {}
        Formula::Atom(a) => {
            if !bound.iter().any(|b| b == a) {
                out.insert(a.clone());
            }
        }
        Formula::Not(g) => collect_free(g, bound, out),
        Formula::And(g, h) | Formula::Or(g, h) | Formula::Implies(g, h) | Formula::Iff(g, h) => {
            collect_free(g, bound, out);
            collect_free(h, bound, out);
        }
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            bound.push(x.clone());
            collect_free(g, bound, out);
            bound.pop();
        }
    }
}

fn collect_names(f: &Formula, out: &mut AtomSet) {
    match f {
        Formula::Top | Formula::Bot => {}
        Formula::Atom(a) => {
            out.insert(a.clone());
        }
        Formula::Not(g) => collect_names(g, out),
        Formula::And(g, h) | Formula::Or(g, h) | Formula::Implies(g, h) | Formula::Iff(g, h) => {
            collect_names(g, out);
            collect_names(h, out);
        }
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            out.insert(x.clone());
            collect_names(g, out);
        }
    }
}

fn collect_capturing(f: &Formula, atom: &str, scope: &mut Vec<String>, out: &mut AtomSet) {
    match f {
        Formula::Top | Formula::Bot => {}
        Formula::Atom(a) => {
            if a == atom {
                for s in scope.iter() {
                    out.insert(s.clone());
                }
            }
        }
        Formula::Not(g) => collect_capturing(g, atom, scope, out),
        Formula::And(g, h) | Formula::Or(g, h) | Formula::Implies(g, h) | Formula::Iff(g, h) => {
            collect_capturing(g, atom, scope, out);
            collect_capturing(h, atom, scope, out);
        }
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            // occurrences below a binder of `atom` itself are not free
            if x == atom {
                return;
            }
            scope.push(x.clone());
            collect_capturing(g, atom, scope, out);
            scope.pop();
        }
    }
}

/// Returns (occurs positively, occurs negatively) for free occurrences.
fn polarity_flags(f: &Formula, atom: &str, positive: bool) -> (bool, bool) {
    match f {
        Formula::Top | Formula::Bot => (false, false),
        Formula::Atom(a) => {
            if a == atom {
                (positive, !positive)
            } else {
                (false, false)
            }
        }
        Formula::Not(g) => polarity_flags(g, atom, !positive),
        Formula::And(g, h) | Formula::Or(g, h) => {
            let (a, b) = polarity_flags(g, atom, positive);
            let (c, d) = polarity_flags(h, atom, positive);
            (a || c, b || d)
        }
        Formula::Implies(g, h) => {
            let (a, b) = polarity_flags(g, atom, !positive);
            let (c, d) = polarity_flags(h, atom, positive);
            (a || c, b || d)
        }
        Formula::Iff(g, h) => {
            let (a, b) = polarity_flags(g, atom, positive);
            let (c, d) = polarity_flags(h, atom, positive);
            let any = a || b || c || d;
            (any, any)
        }
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            if x == atom {
                (false, false)
            } else {
                polarity_flags(g, atom, positive)
            }
        }
    }
}

fn replace_map(f: &Formula, map: &HashMap<&str, &Formula>) -> Formula {
    match f {
        Formula::Top => Formula::Top,
        Formula::Bot => Formula::Bot,
        Formula::Atom(a) => match map.get(a.as_str()) {
            Some(g) => (*g).clone(),
            None => f.clone(),
        },
        Formula::Not(g) => Formula::not(replace_map(g, map)),
        Formula::And(g, h) => Formula::and(replace_map(g, map), replace_map(h, map)),
        Formula::Or(g, h) => Formula::or(replace_map(g, map), replace_map(h, map)),
        Formula::Implies(g, h) => Formula::implies(replace_map(g, map), replace_map(h, map)),
        Formula::Iff(g, h) => Formula::iff(replace_map(g, map), replace_map(h, map)),
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            let body = if map.contains_key(x.as_str()) {
                let mut inner = map.clone();
                inner.remove(x.as_str());
                if inner.is_empty() {
                    (**g).clone()
                } else {
                    replace_map(g, &inner)
                }
            } else {
                replace_map(g, map)
            };
            match f {
                Formula::Exists(..) => Formula::exists(x.clone(), body),
                _ => Formula::forall(x.clone(), body),
            }
        }
    }
}

/// Sorted, duplicate-free set of atom names.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct AtomSet(BTreeSet<String>);

impl AtomSet {
    pub fn new() -> AtomSet {
        AtomSet(BTreeSet::new())
    }

    pub fn insert(&mut self, name: impl Into<String>) -> bool {
        self.0.insert(name.into())
    }

    pub fn remove(&mut self, name: &str) -> bool {
        self.0.remove(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains(name)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        self.0.iter().map(String::as_str)
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        AtomSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &AtomSet) -> AtomSet {
        AtomSet(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &AtomSet) -> AtomSet {
        AtomSet(self.0.difference(&other.0).cloned().collect())
    }

    pub fn is_disjoint(&self, other: &AtomSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Position of `name` in ascending order.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn to_vec(&self) -> Vec<String> {
        self.0.iter().cloned().collect()
    }
}

impl<S: Into<String>> FromIterator<S> for AtomSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        AtomSet(iter.into_iter().map(Into::into).collect())
    }
}

impl<'a> IntoIterator for &'a AtomSet {
    type Item = &'a String;
    type IntoIter = std::collections::btree_set::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for a in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            f.write_str(a)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Polarity {
    PositiveOnly,
    NegativeOnly,
    Both,
    Absent,
}

impl Polarity {
    fn from_flags(pos: bool, neg: bool) -> Polarity {
        match (pos, neg) {
            (true, true) => Polarity::Both,
            (true, false) => Polarity::PositiveOnly,
            (false, true) => Polarity::NegativeOnly,
            (false, false) => Polarity::Absent,
        }
    }
}

/// Which clause of the substitutibility conditions failed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SubstViolation {
    LengthMismatch {
        formulas: usize,
        atoms: usize,
    },
    /// A free occurrence of the replaced atom is in the scope of a
    /// quantifier binding a free atom of the substituent.
    Capture {
        index: usize,
        binder: String,
    },
    /// The substituent mentions one of the replaced atoms.
    MentionsReplaced {
        index: usize,
        atom: String,
    },
}

impl fmt::Display for SubstViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubstViolation::LengthMismatch { formulas, atoms } => {
                write!(f, "{formulas} formulas given for {atoms} atoms")
            }
            SubstViolation::Capture { index, binder } => write!(
                f,
                "component {} would be captured by the quantifier on `{binder}`",
                index + 1
            ),
            SubstViolation::MentionsReplaced { index, atom } => write!(
                f,
                "component {} mentions the replaced atom `{atom}`",
                index + 1
            ),
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("not substitutible: {0}")]
pub struct NotSubstitutible(pub SubstViolation);

/// First violated substitutibility condition for replacing `atoms[i]` by
/// `formulas[i]` in `target`, if any.
pub fn substitutibility_violation<S: AsRef<str>>(
    formulas: &[Formula],
    atoms: &[S],
    target: &Formula,
) -> Option<SubstViolation> {
    if formulas.len() != atoms.len() {
        return Some(SubstViolation::LengthMismatch {
            formulas: formulas.len(),
            atoms: atoms.len(),
        });
    }
    for (i, (g, p)) in formulas.iter().zip(atoms).enumerate() {
        let free = g.free_atoms();
        if let Some(q) = atoms.iter().find(|q| free.contains(q.as_ref())) {
            return Some(SubstViolation::MentionsReplaced {
                index: i,
                atom: q.as_ref().to_string(),
            });
        }
        let binders = target.capturing_binders(p.as_ref());
        let captured = binders
            .iter()
            .find(|b| free.contains(b))
            .map(|b| b.to_string());
        if let Some(binder) = captured {
            return Some(SubstViolation::Capture { index: i, binder });
        }
    }
    None
}

pub fn is_substitutible<S: AsRef<str>>(
    formulas: &[Formula],
    atoms: &[S],
    target: &Formula,
) -> bool {
    substitutibility_violation(formulas, atoms, target).is_none()
}

/// Simultaneous replacement of the free occurrences of `atoms[i]` by
/// `formulas[i]`. Pairs replacing an atom by itself are dropped before the
/// substitutibility check, so identity substitution always succeeds.
pub fn substitute<S: AsRef<str>>(
    target: &Formula,
    atoms: &[S],
    formulas: &[Formula],
) -> Result<Formula, NotSubstitutible> {
    if atoms.len() != formulas.len() {
        return Err(NotSubstitutible(SubstViolation::LengthMismatch {
            formulas: formulas.len(),
            atoms: atoms.len(),
        }));
    }
    let kept: Vec<usize> = (0..atoms.len())
        .filter(|&i| !matches!(&formulas[i], Formula::Atom(b) if b == atoms[i].as_ref()))
        .collect();
    let atoms: Vec<&str> = kept.iter().map(|&i| atoms[i].as_ref()).collect();
    let formulas: Vec<Formula> = kept.iter().map(|&i| formulas[i].clone()).collect();
    if let Some(v) = substitutibility_violation(&formulas, &atoms, target) {
        let v = match v {
            SubstViolation::Capture { index, binder } => SubstViolation::Capture {
                index: kept[index],
                binder,
            },
            SubstViolation::MentionsReplaced { index, atom } => SubstViolation::MentionsReplaced {
                index: kept[index],
                atom,
            },
            other => other,
        };
        return Err(NotSubstitutible(v));
    }
    let map: HashMap<&str, &Formula> = atoms.iter().copied().zip(&formulas).collect();
    Ok(replace_map(target, &map))
}

/// `base_k` for the smallest `k >= 1` not in `avoid`.
pub fn fresh_name(base: &str, avoid: &AtomSet) -> String {
    (1..)
        .map(|k| format!("{base}_{k}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded search")
}

/// Equivalent formula in which no free atom is also bound and all bound
/// atoms are distinct.
pub fn clean_variant(f: &Formula) -> Formula {
    clean_variant_avoiding(f, &AtomSet::new())
}

/// Like [`clean_variant`], additionally renaming binders that clash with
/// `avoid`.
pub fn clean_variant_avoiding(f: &Formula, avoid: &AtomSet) -> Formula {
    let mut taken = f.free_atoms().union(avoid);
    let mut all = f.all_names().union(avoid);
    let mut env: Vec<(String, String)> = Vec::new();
    clean_rec(f, &mut taken, &mut all, &mut env)
}

fn clean_rec(
    f: &Formula,
    taken: &mut AtomSet,
    all: &mut AtomSet,
    env: &mut Vec<(String, String)>,
) -> Formula {
    match f {
        Formula::Top | Formula::Bot => f.clone(),
        Formula::Atom(a) => match env.iter().rev().find(|(from, _)| from == a) {
            Some((_, to)) => Formula::atom(to.clone()),
            None => f.clone(),
        },
        Formula::Not(g) => Formula::not(clean_rec(g, taken, all, env)),
        Formula::And(g, h) => {
            let l = clean_rec(g, taken, all, env);
            Formula::and(l, clean_rec(h, taken, all, env))
        }
        Formula::Or(g, h) => {
            let l = clean_rec(g, taken, all, env);
            Formula::or(l, clean_rec(h, taken, all, env))
        }
        Formula::Implies(g, h) => {
            let l = clean_rec(g, taken, all, env);
            Formula::implies(l, clean_rec(h, taken, all, env))
        }
        Formula::Iff(g, h) => {
            let l = clean_rec(g, taken, all, env);
            Formula::iff(l, clean_rec(h, taken, all, env))
        }
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            let name = if taken.contains(x) {
                let n = fresh_name(x, all);
                all.insert(n.clone());
                n
            } else {
                x.clone()
            };
            taken.insert(name.clone());
            env.push((x.clone(), name.clone()));
            let body = clean_rec(g, taken, all, env);
            env.pop();
            match f {
                Formula::Exists(..) => Formula::exists(name, body),
                _ => Formula::forall(name, body),
            }
        }
    }
}

/// True iff no free atom is bound and no two quantifiers bind the same atom.
pub fn is_clean(f: &Formula) -> bool {
    let free = f.free_atoms();
    let mut binders = Vec::new();
    collect_binders(f, &mut binders);
    let distinct: BTreeSet<&String> = binders.iter().collect();
    distinct.len() == binders.len() && binders.iter().all(|b| !free.contains(b))
}

fn collect_binders(f: &Formula, out: &mut Vec<String>) {
    match f {
        Formula::Top | Formula::Bot | Formula::Atom(_) => {}
        Formula::Not(g) => collect_binders(g, out),
        Formula::And(g, h) | Formula::Or(g, h) | Formula::Implies(g, h) | Formula::Iff(g, h) => {
            collect_binders(g, out);
            collect_binders(h, out);
        }
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            out.push(x.clone());
            collect_binders(g, out);
        }
    }
}
