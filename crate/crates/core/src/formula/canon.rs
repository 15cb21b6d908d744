//! Canonicalization: the fixed simplification rule set followed by
//! canonical renaming of bound variables.
//!
//! The rule set is frozen so that generation is deterministic:
//!
//! * double negation: `not not A` → `A`
//! * negated constants: `not T` → `F`, `not F` → `T`
//! * idempotence: `A & A` → `A`, `A | A` → `A` (operands compared up to
//!   renaming of bound variables)
//! * unit laws: `T & A` → `A`, `F & A` → `F`, `T | A` → `T`,
//!   `F | A` → `A` (and the mirrored forms), `T -> A` → `A`,
//!   `F -> A` → `T`, `A -> T` → `T`, `A -> F` → `not A`
//! * commutative ordering: operands of `&` and `|` are ordered by their
//!   canonical rendering
//!
//! Every rule except the ordering swap strictly shrinks the node count,
//! and the swap cannot re-enable a rule, so the rewrite terminates.
//! `canonicalize` is idempotent and complete for alpha-equivalence: two
//! formulas equal up to bound-variable renaming canonicalize to
//! identical values.

use super::{print, Formula, Term, Var};

pub fn canonicalize(f: &Formula) -> Formula {
    let simplified = simplify(f);
    rename_canonical(&simplified)
}

fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::Verum => Formula::Verum,
        Formula::Falsum => Formula::Falsum,
        Formula::Member(a, b) => Formula::Member(simplify_term(a), simplify_term(b)),
        Formula::Equal(a, b) => Formula::Equal(simplify_term(a), simplify_term(b)),
        Formula::Mirimanoff(t) => Formula::Mirimanoff(simplify_term(t)),
        Formula::Not(a) => simplify_not(simplify(a)),
        Formula::And(a, b) => simplify_and(simplify(a), simplify(b)),
        Formula::Or(a, b) => simplify_or(simplify(a), simplify(b)),
        Formula::Implies(a, b) => simplify_implies(simplify(a), simplify(b)),
        Formula::Exists(v, a) => Formula::exists(*v, simplify(a)),
        Formula::Forall(v, a) => Formula::forall(*v, simplify(a)),
    }
}

fn simplify_term(t: &Term) -> Term {
    match t {
        Term::Var(v) => Term::Var(*v),
        Term::Empty => Term::Empty,
        Term::Singleton(t) => Term::Singleton(Box::new(simplify_term(t))),
        Term::Union(a, b) => {
            Term::Union(Box::new(simplify_term(a)), Box::new(simplify_term(b)))
        }
        Term::Comprehension(op, v, body) => {
            Term::Comprehension(*op, *v, Box::new(simplify(body)))
        }
    }
}

fn simplify_not(a: Formula) -> Formula {
    match a {
        Formula::Not(inner) => *inner,
        Formula::Verum => Formula::Falsum,
        Formula::Falsum => Formula::Verum,
        other => Formula::not(other),
    }
}

fn simplify_and(l: Formula, r: Formula) -> Formula {
    match (&l, &r) {
        (Formula::Verum, _) => return r,
        (_, Formula::Verum) => return l,
        (Formula::Falsum, _) | (_, Formula::Falsum) => return Formula::Falsum,
        _ => {}
    }
    let (lt, rt) = (print(&l), print(&r));
    if lt == rt {
        return l;
    }
    if rt < lt {
        Formula::and(r, l)
    } else {
        Formula::and(l, r)
    }
}

fn simplify_or(l: Formula, r: Formula) -> Formula {
    match (&l, &r) {
        (Formula::Verum, _) | (_, Formula::Verum) => return Formula::Verum,
        (Formula::Falsum, _) => return r,
        (_, Formula::Falsum) => return l,
        _ => {}
    }
    let (lt, rt) = (print(&l), print(&r));
    if lt == rt {
        return l;
    }
    if rt < lt {
        Formula::or(r, l)
    } else {
        Formula::or(l, r)
    }
}

fn simplify_implies(l: Formula, r: Formula) -> Formula {
    match (&l, &r) {
        (Formula::Verum, _) => r,
        (Formula::Falsum, _) => Formula::Verum,
        (_, Formula::Verum) => Formula::Verum,
        (_, Formula::Falsum) => simplify_not(l),
        _ => Formula::implies(l, r),
    }
}

/// Renames binders (quantifiers and comprehension variables) to
/// `x1`, `x2`, … in prefix order, skipping indices that occur free.
fn rename_canonical(f: &Formula) -> Formula {
    let free_indexed: Vec<u32> = f
        .free_vars()
        .into_iter()
        .filter_map(|v| match v {
            Var::Indexed(i) => Some(i),
            _ => None,
        })
        .collect();
    let mut state = Renamer {
        free_indexed,
        next: 1,
        scope: Vec::new(),
    };
    state.formula(f)
}

struct Renamer {
    free_indexed: Vec<u32>,
    next: u32,
    scope: Vec<(Var, Var)>,
}

impl Renamer {
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

    fn formula(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::Verum => Formula::Verum,
            Formula::Falsum => Formula::Falsum,
            Formula::Member(a, b) => Formula::Member(self.term(a), self.term(b)),
            Formula::Equal(a, b) => Formula::Equal(self.term(a), self.term(b)),
            Formula::Mirimanoff(t) => Formula::Mirimanoff(self.term(t)),
            Formula::Not(a) => Formula::not(self.formula(a)),
            Formula::And(a, b) => {
                let l = self.formula(a);
                let r = self.formula(b);
                Formula::and(l, r)
            }
            Formula::Or(a, b) => {
                let l = self.formula(a);
                let r = self.formula(b);
                Formula::or(l, r)
            }
            Formula::Implies(a, b) => {
                let l = self.formula(a);
                let r = self.formula(b);
                Formula::implies(l, r)
            }
            Formula::Exists(v, a) => {
                let fresh = self.fresh();
                self.scope.push((*v, fresh));
                let body = self.formula(a);
                self.scope.pop();
                Formula::exists(fresh, body)
            }
            Formula::Forall(v, a) => {
                let fresh = self.fresh();
                self.scope.push((*v, fresh));
                let body = self.formula(a);
                self.scope.pop();
                Formula::forall(fresh, body)
            }
        }
    }

    fn term(&mut self, t: &Term) -> Term {
        match t {
            Term::Var(v) => Term::Var(self.lookup(*v)),
            Term::Empty => Term::Empty,
            Term::Singleton(t) => Term::Singleton(Box::new(self.term(t))),
            Term::Union(a, b) => {
                let l = self.term(a);
                let r = self.term(b);
                Term::Union(Box::new(l), Box::new(r))
            }
            Term::Comprehension(op, v, body) => {
                let fresh = self.fresh();
                self.scope.push((*v, fresh));
                let b = self.formula(body);
                self.scope.pop();
                Term::Comprehension(*op, fresh, Box::new(b))
            }
        }
    }
}
