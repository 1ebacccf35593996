//! Canonical printing with minimal parentheses.

use std::fmt;

use crate::formula::Formula;

const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const PREFIX: u8 = 5;
const ATOMIC: u8 = 6;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Not(_) | Formula::Exists(..) | Formula::Forall(..) => PREFIX,
        Formula::Top | Formula::Bot | Formula::Atom(_) => ATOMIC,
    }
}

/// `rightmost` is true when nothing follows `f` before the end of the
/// enclosing parenthesis group, which is what lets a quantifier body extend.
fn write_formula(f: &Formula, rightmost: bool, out: &mut String) {
    match f {
        Formula::Top => out.push_str("true"),
        Formula::Bot => out.push_str("false"),
        Formula::Atom(a) => out.push_str(a),
        Formula::Not(g) => {
            out.push('~');
            write_child(g, level(g) < PREFIX, rightmost, out);
        }
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            out.push_str(if matches!(f, Formula::Exists(..)) {
                "exists "
            } else {
                "forall "
            });
            out.push_str(x);
            out.push_str(" . ");
            write_formula(g, true, out);
        }
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
            let (op, lv, right_assoc) = match f {
                Formula::And(..) => (" & ", AND, false),
                Formula::Or(..) => (" | ", OR, false),
                Formula::Implies(..) => (" -> ", IMPLIES, true),
                _ => (" <-> ", IFF, false),
            };
            let (ll, rl) = (level(l), level(r));
            let left_paren = ll < lv || (ll == lv && right_assoc);
            let right_paren = rl < lv || (rl == lv && !right_assoc);
            write_child(l, left_paren, false, out);
            out.push_str(op);
            write_child(r, right_paren, rightmost, out);
        }
    }
}

fn write_child(g: &Formula, paren: bool, rightmost: bool, out: &mut String) {
    if paren || (!rightmost && ends_with_quantifier(g)) {
        out.push('(');
        write_formula(g, true, out);
        out.push(')');
    } else {
        write_formula(g, rightmost, out);
    }
}

/// Whether the unparenthesized rendering of `f` ends in an open quantifier
/// body that would swallow any following operator.
fn ends_with_quantifier(f: &Formula) -> bool {
    match f {
        Formula::Exists(..) | Formula::Forall(..) => true,
        Formula::Not(g) => level(g) >= PREFIX && ends_with_quantifier(g),
        Formula::And(_, r) | Formula::Or(_, r) | Formula::Implies(_, r) | Formula::Iff(_, r) => {
            let (lv, right_assoc) = match f {
                Formula::And(..) => (AND, false),
                Formula::Or(..) => (OR, false),
                Formula::Implies(..) => (IMPLIES, true),
                _ => (IFF, false),
            };
            let rl = level(r);
            let right_paren = rl < lv || (rl == lv && !right_assoc);
            !right_paren && ends_with_quantifier(r)
        }
        Formula::Top | Formula::Bot | Formula::Atom(_) => false,
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_formula(self, true, &mut s);
        f.write_str(&s)
    }
}
