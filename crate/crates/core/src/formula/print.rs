//! Canonical rendering. Printing alpha-normalizes (bound variables come
//! out as `x1`, `x2`, … in order of first occurrence, skipping indices
//! that occur free) but never simplifies: `T & T` prints as `T & T`.

use super::{Formula, SetOperator, Term, Var};
use std::collections::BTreeSet;

// Precedence levels used for minimal parenthesization. Quantifiers get
// level 0 because their scope extends maximally right: as a left operand
// of any binary connective they must be parenthesized, as a right
// operand never.
const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_NOT: u8 = 4;
const PREC_ATOM: u8 = 5;
const PREC_QUANT: u8 = 0;

pub fn print(f: &Formula) -> String {
    let mut r = Renderer::new(f);
    let mut out = String::new();
    r.formula(f, &mut out);
    out
}

struct Renderer {
    free_indexed: BTreeSet<u32>,
    next: u32,
    scope: Vec<(Var, Var)>,
}

impl Renderer {
    fn new(f: &Formula) -> Renderer {
        let free_indexed = f
            .free_vars()
            .into_iter()
            .filter_map(|v| match v {
                Var::Indexed(i) => Some(i),
                _ => None,
            })
            .collect();
        Renderer {
            free_indexed,
            next: 1,
            scope: Vec::new(),
        }
    }

    fn fresh(&mut self) -> Var {
        while self.free_indexed.contains(&self.next) {
            self.next += 1;
        }
        let v = Var::Indexed(self.next);
        self.next += 1;
        v
    }

    fn lookup(&self, v: Var) -> Var {
        self.scope
            .iter()
            .rev()
            .find(|(orig, _)| *orig == v)
            .map(|(_, n)| *n)
            .unwrap_or(v)
    }

    fn formula(&mut self, f: &Formula, out: &mut String) {
        match f {
            Formula::Verum => out.push('T'),
            Formula::Falsum => out.push('F'),
            Formula::Member(a, b) => {
                self.term(a, out);
                out.push_str(" in ");
                self.term(b, out);
            }
            Formula::Equal(a, b) => {
                self.term(a, out);
                out.push_str(" = ");
                self.term(b, out);
            }
            Formula::Mirimanoff(t) => {
                out.push_str("M(");
                self.term(t, out);
                out.push(')');
            }
            Formula::Not(a) => match a.as_ref() {
                Formula::Member(l, r) => {
                    self.term(l, out);
                    out.push_str(" notin ");
                    self.term(r, out);
                }
                Formula::Equal(l, r) => {
                    self.term(l, out);
                    out.push_str(" != ");
                    self.term(r, out);
                }
                inner => {
                    out.push_str("not ");
                    self.child(inner, PREC_NOT, false, out);
                }
            },
            Formula::And(a, b) => {
                self.child(a, PREC_AND, false, out);
                out.push_str(" & ");
                self.child(b, PREC_AND, true, out);
            }
            Formula::Or(a, b) => {
                self.child(a, PREC_OR, false, out);
                out.push_str(" | ");
                self.child(b, PREC_OR, true, out);
            }
            Formula::Implies(a, b) => {
                self.child_strict(a, PREC_IMPLIES, out);
                out.push_str(" -> ");
                // right-associative: never parenthesize a right implication
                match b.as_ref() {
                    Formula::Implies(_, _) => self.formula(b, out),
                    other => self.child(other, PREC_IMPLIES, true, out),
                }
            }
            Formula::Exists(v, body) => self.quantifier("exists", *v, body, out),
            Formula::Forall(v, body) => self.quantifier("forall", *v, body, out),
        }
    }

    fn quantifier(&mut self, word: &str, v: Var, body: &Formula, out: &mut String) {
        let fresh = self.fresh();
        out.push_str(word);
        out.push(' ');
        out.push_str(&fresh.to_string());
        out.push_str(" . ");
        self.scope.push((v, fresh));
        self.formula(body, out);
        self.scope.pop();
    }

    /// Renders a child of a binary/unary node. For a right operand,
    /// quantifiers need no parentheses (maximal scope re-parses the same
    /// tree); equal precedence still does (the connectives associate to
    /// the left).
    fn child(&mut self, f: &Formula, parent: u8, right: bool, out: &mut String) {
        let p = prec(f);
        let needs = if p == PREC_QUANT {
            !right
        } else if right {
            p <= parent
        } else {
            p < parent
        };
        self.wrap(f, needs, out);
    }

    /// Left operand of `->`: parenthesize any implication (right-assoc)
    /// and any quantifier.
    fn child_strict(&mut self, f: &Formula, parent: u8, out: &mut String) {
        let p = prec(f);
        let needs = p == PREC_QUANT || p <= parent;
        self.wrap(f, needs, out);
    }

    fn wrap(&mut self, f: &Formula, parens: bool, out: &mut String) {
        if parens {
            out.push('(');
            self.formula(f, out);
            out.push(')');
        } else {
            self.formula(f, out);
        }
    }

    fn term(&mut self, t: &Term, out: &mut String) {
        match t {
            Term::Var(v) => out.push_str(&self.lookup(*v).to_string()),
            Term::Empty => out.push('0'),
            Term::Singleton(inner) => {
                out.push('{');
                self.term(inner, out);
                out.push('}');
            }
            Term::Union(a, b) => {
                self.union_operand(a, out);
                out.push_str(" cup ");
                // left-associative
                if matches!(b.as_ref(), Term::Union(_, _)) {
                    out.push('(');
                    self.term(b, out);
                    out.push(')');
                } else {
                    self.union_operand(b, out);
                }
            }
            Term::Comprehension(op, v, body) => {
                let fresh = self.fresh();
                match op {
                    SetOperator::Set => out.push('{'),
                    SetOperator::Class => out.push_str("{|"),
                }
                out.push_str(&fresh.to_string());
                out.push_str(": ");
                self.scope.push((*v, fresh));
                self.formula(body, out);
                self.scope.pop();
                match op {
                    SetOperator::Set => out.push('}'),
                    SetOperator::Class => out.push_str("|}"),
                }
            }
        }
    }

    fn union_operand(&mut self, t: &Term, out: &mut String) {
        self.term(t, out);
    }
}

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Verum
        | Formula::Falsum
        | Formula::Member(_, _)
        | Formula::Equal(_, _)
        | Formula::Mirimanoff(_) => PREC_ATOM,
        // `notin` / `!=` render as atoms
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Member(_, _) | Formula::Equal(_, _) => PREC_ATOM,
            _ => PREC_NOT,
        },
        Formula::And(_, _) => PREC_AND,
        Formula::Or(_, _) => PREC_OR,
        Formula::Implies(_, _) => PREC_IMPLIES,
        Formula::Exists(_, _) | Formula::Forall(_, _) => PREC_QUANT,
    }
}
