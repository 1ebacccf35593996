//! Exact two-valued semantics.
//!
//! Formulas are evaluated bit-parallel over all valuations of an explicit
//! atom basis. A quantifier on `p` evaluates its body with `p` as one more
//! variable and merges the two cofactors, which is the expansion
//! `exists p . F == F[true] | F[false]`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::bits::Bits;
use crate::formula::{AtomSet, Formula};

/// Largest number of simultaneously live variables a table may range over.
pub const MAX_TABLE_VARS: usize = 24;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("atom `{0}` has no value")]
    UnboundAtom(String),
    #[error("{0} atoms exceed the truth table limit of {MAX_TABLE_VARS}")]
    TooManyAtoms(usize),
}

/// Truth assignment on a finite set of atoms.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Valuation(BTreeMap<String, bool>);

impl Valuation {
    pub fn new() -> Valuation {
        Valuation(BTreeMap::new())
    }

    /// The valuation numbered `index` over `basis`: atom i (ascending) is
    /// bit i.
    pub fn from_index(basis: &AtomSet, index: usize) -> Valuation {
        Valuation(
            basis
                .iter()
                .enumerate()
                .map(|(i, a)| (a.to_string(), (index >> i) & 1 == 1))
                .collect(),
        )
    }

    pub fn set(&mut self, atom: impl Into<String>, value: bool) {
        self.0.insert(atom.into(), value);
    }

    pub fn get(&self, atom: &str) -> Option<bool> {
        self.0.get(atom).copied()
    }

    pub fn atoms(&self) -> AtomSet {
        self.0.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> + '_ {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl<S: Into<String>> FromIterator<(S, bool)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (S, bool)>>(iter: I) -> Self {
        Valuation(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(k, v)| format!("{k}={}", u8::from(*v)))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn eval(f: &Formula, v: &Valuation) -> Result<bool, SemanticsError> {
    let mut env: Vec<(&str, bool)> = Vec::new();
    eval_rec(f, v, &mut env)
}

fn eval_rec<'a>(
    f: &'a Formula,
    v: &Valuation,
    env: &mut Vec<(&'a str, bool)>,
) -> Result<bool, SemanticsError> {
    Ok(match f {
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Atom(a) => match env.iter().rev().find(|(n, _)| *n == a) {
            Some((_, b)) => *b,
            None => v
                .get(a)
                .ok_or_else(|| SemanticsError::UnboundAtom(a.clone()))?,
        },
        Formula::Not(g) => !eval_rec(g, v, env)?,
        Formula::And(g, h) => eval_rec(g, v, env)? && eval_rec(h, v, env)?,
        Formula::Or(g, h) => eval_rec(g, v, env)? || eval_rec(h, v, env)?,
        Formula::Implies(g, h) => !eval_rec(g, v, env)? || eval_rec(h, v, env)?,
        Formula::Iff(g, h) => eval_rec(g, v, env)? == eval_rec(h, v, env)?,
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            let existential = matches!(f, Formula::Exists(..));
            let mut results = [false; 2];
            for (slot, value) in results.iter_mut().zip([true, false]) {
                env.push((x.as_str(), value));
                let r = eval_rec(g, v, env);
                env.pop();
                *slot = r?;
            }
            if existential {
                results[0] || results[1]
            } else {
                results[0] && results[1]
            }
        }
    })
}

/// Table of `f` over the variable list `vars` (variable i is bit i).
/// Inner quantifiers on names outside `vars` temporarily extend the list.
pub(crate) fn table_over(f: &Formula, vars: &[String]) -> Result<Bits, SemanticsError> {
    if vars.len() > MAX_TABLE_VARS {
        return Err(SemanticsError::TooManyAtoms(vars.len()));
    }
    let mut index: HashMap<String, usize> = HashMap::new();
    for (i, v) in vars.iter().enumerate() {
        index.insert(v.clone(), i);
    }
    let mut vars = vars.to_vec();
    table_rec(f, &mut vars, &mut index)
}

fn table_rec(
    f: &Formula,
    vars: &mut Vec<String>,
    index: &mut HashMap<String, usize>,
) -> Result<Bits, SemanticsError> {
    let n = vars.len();
    Ok(match f {
        Formula::Top => Bits::ones(1 << n),
        Formula::Bot => Bits::zeros(1 << n),
        Formula::Atom(a) => match index.get(a) {
            Some(&k) => Bits::var(k, n),
            None => return Err(SemanticsError::UnboundAtom(a.clone())),
        },
        Formula::Not(g) => table_rec(g, vars, index)?.not(),
        Formula::And(g, h) => table_rec(g, vars, index)?.and(&table_rec(h, vars, index)?),
        Formula::Or(g, h) => table_rec(g, vars, index)?.or(&table_rec(h, vars, index)?),
        Formula::Implies(g, h) => table_rec(g, vars, index)?.implies(&table_rec(h, vars, index)?),
        Formula::Iff(g, h) => table_rec(g, vars, index)?.iff(&table_rec(h, vars, index)?),
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            let existential = matches!(f, Formula::Exists(..));
            if let Some(&k) = index.get(x) {
                // the binder shadows the outer variable at position k
                table_rec(g, vars, index)?.quantify(k, existential)
            } else {
                if n + 1 > MAX_TABLE_VARS {
                    return Err(SemanticsError::TooManyAtoms(n + 1));
                }
                vars.push(x.clone());
                index.insert(x.clone(), n);
                let body = table_rec(g, vars, index);
                vars.pop();
                index.remove(x);
                body?.quantify(n, existential).truncate(1 << n)
            }
        }
    })
}

/// Canonical semantics of a formula over an ordered atom basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TruthTable {
    basis: AtomSet,
    bits: Bits,
}

impl TruthTable {
    pub fn new(basis: AtomSet, bits: Vec<bool>) -> Result<TruthTable, String> {
        let expected = 1usize << basis.len();
        if bits.len() != expected {
            return Err(format!(
                "a table over {} atoms needs {expected} bits, got {}",
                basis.len(),
                bits.len()
            ));
        }
        let b = Bits::from_fn(expected, |i| bits[i]);
        Ok(TruthTable { basis, bits: b })
    }

    pub(crate) fn from_bits(basis: AtomSet, bits: Bits) -> TruthTable {
        debug_assert_eq!(bits.len(), 1 << basis.len());
        TruthTable { basis, bits }
    }

    /// The function numbered `code` over `basis`: bit i of `code` is entry i.
    pub fn from_code(basis: AtomSet, code: u64) -> TruthTable {
        let len = 1usize << basis.len();
        assert!(len <= 64, "function codes cover bases of at most 6 atoms");
        TruthTable {
            basis,
            bits: Bits::from_fn(len, |i| (code >> i) & 1 == 1),
        }
    }

    pub fn basis(&self) -> &AtomSet {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, index: usize) -> bool {
        self.bits.get(index)
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.bits.len()).map(|i| self.bits.get(i)).collect()
    }

    pub fn bit_string(&self) -> String {
        self.bits.to_bit_string()
    }

    /// `basis: a b` / `bits: 0010` text form.
    pub fn to_text(&self) -> String {
        format!("basis: {}\nbits: {}", self.basis, self.bit_string())
    }

    pub fn parse_text(text: &str) -> Result<TruthTable, String> {
        let mut basis = None;
        let mut bits = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(rest) = line.strip_prefix("basis:") {
                let atoms = crate::parser::parse_atom_list(rest).map_err(|e| e.to_string())?;
                basis = Some(atoms.into_iter().collect::<AtomSet>());
            } else if let Some(rest) = line.strip_prefix("bits:") {
                let v: Result<Vec<bool>, String> = rest
                    .trim()
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(format!("bad bit `{other}`")),
                    })
                    .collect();
                bits = Some(v?);
            } else {
                return Err(format!("unexpected line `{line}`"));
            }
        }
        TruthTable::new(
            basis.ok_or("missing `basis:` line")?,
            bits.ok_or("missing `bits:` line")?,
        )
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn truth_table(f: &Formula, basis: &AtomSet) -> Result<TruthTable, SemanticsError> {
    let bits = table_over(f, &basis.to_vec())?;
    Ok(TruthTable::from_bits(basis.clone(), bits))
}

fn own_table(f: &Formula) -> Bits {
    let basis = f.free_atoms();
    match table_over(f, &basis.to_vec()) {
        Ok(b) => b,
        Err(e) => panic!("cannot decide `{f}`: {e}"),
    }
}

/// Validity by expansion over the free atoms.
///
/// # Panics
/// If the formula needs more than [`MAX_TABLE_VARS`] variables.
pub fn is_valid(f: &Formula) -> bool {
    own_table(f).all()
}

pub fn is_satisfiable(f: &Formula) -> bool {
    !own_table(f).none()
}

pub fn equivalent(f: &Formula, g: &Formula) -> bool {
    is_valid(&Formula::iff(f.clone(), g.clone()))
}

pub fn entails(f: &Formula, g: &Formula) -> bool {
    is_valid(&Formula::implies(f.clone(), g.clone()))
}

/// Some valuation of the free atoms of `f` that falsifies it.
pub fn falsifying_valuation(f: &Formula) -> Option<Valuation> {
    let basis = f.free_atoms();
    let t = table_over(f, &basis.to_vec()).ok()?;
    t.first_zero().map(|i| Valuation::from_index(&basis, i))
}

pub fn satisfying_valuation(f: &Formula) -> Option<Valuation> {
    let basis = f.free_atoms();
    let t = table_over(f, &basis.to_vec()).ok()?;
    t.first_one().map(|i| Valuation::from_index(&basis, i))
}

fn literal(atom: &str, positive: bool) -> Formula {
    if positive {
        Formula::atom(atom)
    } else {
        Formula::not(Formula::atom(atom))
    }
}

/// Conjunction of literals selecting valuation `index` of `basis`.
pub fn minterm(basis: &AtomSet, index: usize) -> Formula {
    Formula::and_all(
        basis
            .iter()
            .enumerate()
            .map(|(i, a)| literal(a, (index >> i) & 1 == 1)),
    )
}

/// Full disjunctive normal form of the table, minterms in index order.
pub fn formula_from_table(t: &TruthTable) -> Formula {
    if t.bits.none() {
        return Formula::Bot;
    }
    if t.bits.all() {
        return Formula::Top;
    }
    Formula::or_all(
        (0..t.len())
            .filter(|&i| t.get(i))
            .map(|i| minterm(&t.basis, i)),
    )
}

/// Canonical full DNF of `f` over its own free atoms.
pub fn canonical(f: &Formula) -> Formula {
    let basis = f.free_atoms();
    let t = truth_table(f, &basis).unwrap_or_else(|e| panic!("cannot tabulate `{f}`: {e}"));
    formula_from_table(&t)
}

/// Equivalence-preserving cleanup: constants are absorbed, double
/// negations dropped, and repeated or complementary operands of `&`/`|`
/// chains merged. No minimality is attempted.
pub fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::Top | Formula::Bot | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => negate(simplify(g)),
        Formula::And(..) => {
            let mut parts = Vec::new();
            flatten(f, true, &mut parts);
            merge_chain(parts.iter().map(|g| simplify(g)).collect(), true)
        }
        Formula::Or(..) => {
            let mut parts = Vec::new();
            flatten(f, false, &mut parts);
            merge_chain(parts.iter().map(|g| simplify(g)).collect(), false)
        }
        Formula::Implies(g, h) => {
            let (g, h) = (simplify(g), simplify(h));
            match (&g, &h) {
                (Formula::Bot, _) | (_, Formula::Top) => Formula::Top,
                (Formula::Top, _) => h,
                (_, Formula::Bot) => negate(g),
                _ if g == h => Formula::Top,
                _ => Formula::implies(g, h),
            }
        }
        Formula::Iff(g, h) => {
            let (g, h) = (simplify(g), simplify(h));
            match (&g, &h) {
                (Formula::Top, _) => h,
                (_, Formula::Top) => g,
                (Formula::Bot, _) => negate(h),
                (_, Formula::Bot) => negate(g),
                _ if g == h => Formula::Top,
                _ if is_complement(&g, &h) => Formula::Bot,
                _ => Formula::iff(g, h),
            }
        }
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            let body = simplify(g);
            if !body.occurs_free(x) {
                body
            } else if matches!(f, Formula::Exists(..)) {
                Formula::exists(x.clone(), body)
            } else {
                Formula::forall(x.clone(), body)
            }
        }
    }
}

/// Largest number of atoms [`compact`] tabulates.
pub const COMPACT_MAX_VARS: usize = 10;

/// A small equivalent formula: `f` simplified, or, when smaller, a DNF of
/// prime implicants over the atoms `f` depends on.
pub fn compact(f: &Formula) -> Formula {
    let simple = simplify(f);
    let free = f.free_atoms();
    if free.len() > COMPACT_MAX_VARS {
        return simple;
    }
    let mut reduced = f.clone();
    let mut essential = AtomSet::new();
    for a in &free {
        let (hi, lo) = (reduced.with_true(a), reduced.with_false(a));
        if equivalent(&hi, &lo) {
            reduced = hi;
        } else {
            essential.insert(a.as_str());
        }
    }
    let t = truth_table(&reduced, &essential).expect("within the table limit");
    let dnf = minimal_dnf(&t);
    if dnf.size() < simple.size() {
        dnf
    } else {
        simple
    }
}

/// A DNF of the table built from prime implicants with a greedy cover.
pub fn minimal_dnf(t: &TruthTable) -> Formula {
    let n = t.basis.len();
    let ones: Vec<usize> = (0..t.len()).filter(|&i| t.get(i)).collect();
    if ones.is_empty() {
        return Formula::Bot;
    }
    if ones.len() == t.len() {
        return Formula::Top;
    }
    // an implicant is (care mask, values on the cared bits)
    let full = (1usize << n) - 1;
    let mut level: Vec<(usize, usize)> = ones.iter().map(|&i| (full, i)).collect();
    let mut primes: Vec<(usize, usize)> = Vec::new();
    while !level.is_empty() {
        let mut next = Vec::new();
        let mut merged = vec![false; level.len()];
        for i in 0..level.len() {
            for j in i + 1..level.len() {
                let ((m1, v1), (m2, v2)) = (level[i], level[j]);
                let diff = v1 ^ v2;
                if m1 == m2 && diff.count_ones() == 1 {
                    merged[i] = true;
                    merged[j] = true;
                    next.push((m1 & !diff, v1 & !diff));
                }
            }
        }
        for (k, imp) in level.iter().enumerate() {
            if !merged[k] {
                primes.push(*imp);
            }
        }
        next.sort_unstable();
        next.dedup();
        level = next;
    }
    let covers = |(m, v): (usize, usize), i: usize| i & m == v;
    let mut uncovered = ones;
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        // most newly covered minterms, then fewest literals, then first
        let best = *primes
            .iter()
            .max_by_key(|&&(m, v)| {
                let hits = uncovered.iter().filter(|&&i| covers((m, v), i)).count();
                (hits, std::cmp::Reverse(m.count_ones()))
            })
            .expect("primes cover every minterm");
        uncovered.retain(|&i| !covers(best, i));
        chosen.push(best);
    }
    chosen.sort_unstable_by_key(|&(m, v)| (m.count_ones(), m, v));
    Formula::or_all(chosen.into_iter().map(|(m, v)| {
        Formula::and_all(
            t.basis
                .iter()
                .enumerate()
                .filter(|(j, _)| m >> j & 1 == 1)
                .map(|(j, a)| literal(a, v >> j & 1 == 1)),
        )
    }))
}

fn negate(g: Formula) -> Formula {
    match g {
        Formula::Top => Formula::Bot,
        Formula::Bot => Formula::Top,
        Formula::Not(inner) => *inner,
        other => Formula::not(other),
    }
}

fn is_complement(a: &Formula, b: &Formula) -> bool {
    matches!(a, Formula::Not(x) if **x == *b) || matches!(b, Formula::Not(x) if **x == *a)
}

fn flatten<'a>(f: &'a Formula, conj: bool, out: &mut Vec<&'a Formula>) {
    match (f, conj) {
        (Formula::And(g, h), true) | (Formula::Or(g, h), false) => {
            flatten(g, conj, out);
            flatten(h, conj, out);
        }
        _ => out.push(f),
    }
}

fn merge_chain(parts: Vec<Formula>, conj: bool) -> Formula {
    let (unit, zero) = if conj {
        (Formula::Top, Formula::Bot)
    } else {
        (Formula::Bot, Formula::Top)
    };
    let mut kept: Vec<Formula> = Vec::new();
    for part in parts {
        // simplified operands may themselves be chains of the same kind
        let mut pieces = Vec::new();
        flatten(&part, conj, &mut pieces);
        for p in pieces {
            if *p == zero {
                return zero;
            }
            if *p == unit || kept.contains(p) {
                continue;
            }
            if kept.iter().any(|k| is_complement(k, p)) {
                return zero;
            }
            kept.push(p.clone());
        }
    }
    if conj {
        Formula::and_all(kept)
    } else {
        Formula::or_all(kept)
    }
}
