//! The formula language: abstract syntax, scoping, canonical forms, sugar
//! expansion, and the length metric that drives generation order.
//!
//! Terms of the core language are variables only: the designated free
//! variable `x`, numbered variables `x1`, `x2`, …, and parameters `b1`,
//! `b2`, …. The sugar layer adds the empty set `0`, singletons `{t}` and
//! binary unions `t cup t`; [`expand_sugar`] eliminates those by their
//! first-order definitions. Comprehension terms `{x: A}` (set operator)
//! and `{|x: A|}` (class operator) are not sugar: they enter formulas
//! through parameter substitution and are eliminated by the prover's
//! class-term handling, never by `expand_sugar`.
//!
//! Canonical formulas have their bound variables named `x1`, `x2`, … in
//! order of first occurrence (skipping indices that occur free, so that
//! renaming can never capture). [`print`] renders that canonical spelling
//! without simplifying; [`canonicalize`] additionally applies the fixed
//! simplification rules documented on it.

mod canon;
mod parse;
mod print;
mod sugar;

pub use canon::canonicalize;
pub use parse::{parse, parse_open, ParseError};
pub use print::print;
pub use sugar::expand_sugar;

use std::collections::BTreeSet;
use std::fmt;

/// A variable of the formula language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// The designated free variable `x` over which sets are comprehended.
    X,
    /// A numbered variable `xN` (bound in well-scoped formulas).
    Indexed(u32),
    /// A parameter `bN`.
    Param(u32),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X => write!(f, "x"),
            Var::Indexed(i) => write!(f, "x{i}"),
            Var::Param(i) => write!(f, "b{i}"),
        }
    }
}

/// Whether a comprehension term uses the set operator `{x: A}` or the
/// class operator `{|x: A|}`. The two are distinct values even over the
/// same body.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetOperator {
    Set,
    Class,
}

/// A term. `Empty`, `Singleton` and `Union` exist only in the sugar
/// layer; comprehension terms only appear after parameter substitution
/// (or in parsed input).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Empty,
    Singleton(Box<Term>),
    Union(Box<Term>, Box<Term>),
    Comprehension(SetOperator, Var, Box<Formula>),
}

impl Term {
    pub fn var(v: Var) -> Term {
        Term::Var(v)
    }

    /// The set-operator comprehension `{x: body}`.
    pub fn set_of(body: Formula) -> Term {
        Term::Comprehension(SetOperator::Set, Var::X, Box::new(body))
    }

    fn is_sugar_free(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Empty | Term::Singleton(_) | Term::Union(_, _) => false,
            Term::Comprehension(_, _, body) => body.is_sugar_free(),
        }
    }

    fn has_comprehension(&self) -> bool {
        match self {
            Term::Var(_) | Term::Empty => false,
            Term::Singleton(t) => t.has_comprehension(),
            Term::Union(a, b) => a.has_comprehension() || b.has_comprehension(),
            Term::Comprehension(_, _, _) => true,
        }
    }
}

/// A well-formed formula over membership and equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Verum,
    Falsum,
    Member(Term, Term),
    Equal(Term, Term),
    /// The reserved Mirimanoff marker `M(t)` ("t has an infinitely
    /// descending element-sequence"). Recognized syntactically by the
    /// pathology classifier; excluded from the prover's language.
    Mirimanoff(Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    /// `(l -> r) & (r -> l)`; the language has no primitive biconditional.
    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::and(
            Formula::implies(l.clone(), r.clone()),
            Formula::implies(r, l),
        )
    }

    pub fn exists(v: Var, body: Formula) -> Formula {
        Formula::Exists(v, Box::new(body))
    }

    pub fn forall(v: Var, body: Formula) -> Formula {
        Formula::Forall(v, Box::new(body))
    }

    pub fn member(l: Var, r: Var) -> Formula {
        Formula::Member(Term::Var(l), Term::Var(r))
    }

    pub fn not_member(l: Var, r: Var) -> Formula {
        Formula::not(Formula::member(l, r))
    }

    pub fn equal(l: Var, r: Var) -> Formula {
        Formula::Equal(Term::Var(l), Term::Var(r))
    }

    /// True when no sugar terms (`0`, singleton, union) occur anywhere,
    /// including inside comprehension bodies.
    pub fn is_sugar_free(&self) -> bool {
        match self {
            Formula::Verum | Formula::Falsum => true,
            Formula::Member(a, b) | Formula::Equal(a, b) => {
                a.is_sugar_free() && b.is_sugar_free()
            }
            Formula::Mirimanoff(t) => t.is_sugar_free(),
            Formula::Not(a) => a.is_sugar_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_sugar_free() && b.is_sugar_free()
            }
            Formula::Exists(_, a) | Formula::Forall(_, a) => a.is_sugar_free(),
        }
    }

    pub fn has_comprehension(&self) -> bool {
        match self {
            Formula::Verum | Formula::Falsum => false,
            Formula::Member(a, b) | Formula::Equal(a, b) => {
                a.has_comprehension() || b.has_comprehension()
            }
            Formula::Mirimanoff(t) => t.has_comprehension(),
            Formula::Not(a) => a.has_comprehension(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.has_comprehension() || b.has_comprehension()
            }
            Formula::Exists(_, a) | Formula::Forall(_, a) => a.has_comprehension(),
        }
    }

    pub fn has_mirimanoff(&self) -> bool {
        self.subformulas()
            .iter()
            .any(|f| matches!(f, Formula::Mirimanoff(_)))
    }

    /// Free variables, comprehension bodies included (a comprehension
    /// binds its own variable).
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        collect_free(self, &mut Vec::new(), &mut out);
        out
    }

    /// Parameter indices occurring (free) in the formula.
    pub fn params(&self) -> BTreeSet<u32> {
        self.free_vars()
            .into_iter()
            .filter_map(|v| match v {
                Var::Param(i) => Some(i),
                _ => None,
            })
            .collect()
    }

    /// Number of binder nodes (quantifiers and comprehension terms).
    pub fn bound_var_count(&self) -> u32 {
        match self {
            Formula::Verum | Formula::Falsum => 0,
            Formula::Member(a, b) | Formula::Equal(a, b) => {
                term_binders(a) + term_binders(b)
            }
            Formula::Mirimanoff(t) => term_binders(t),
            Formula::Not(a) => a.bound_var_count(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.bound_var_count() + b.bound_var_count()
            }
            Formula::Exists(_, a) | Formula::Forall(_, a) => 1 + a.bound_var_count(),
        }
    }

    /// All subformulas in pre-order, the formula itself first.
    /// Descends into comprehension bodies.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        collect_subformulas(self, &mut out);
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

fn term_binders(t: &Term) -> u32 {
    match t {
        Term::Var(_) | Term::Empty => 0,
        Term::Singleton(t) => term_binders(t),
        Term::Union(a, b) => term_binders(a) + term_binders(b),
        Term::Comprehension(_, _, body) => 1 + body.bound_var_count(),
    }
}

fn collect_free(f: &Formula, scope: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    match f {
        Formula::Verum | Formula::Falsum => {}
        Formula::Member(a, b) | Formula::Equal(a, b) => {
            collect_free_term(a, scope, out);
            collect_free_term(b, scope, out);
        }
        Formula::Mirimanoff(t) => collect_free_term(t, scope, out),
        Formula::Not(a) => collect_free(a, scope, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_free(a, scope, out);
            collect_free(b, scope, out);
        }
        Formula::Exists(v, a) | Formula::Forall(v, a) => {
            scope.push(*v);
            collect_free(a, scope, out);
            scope.pop();
        }
    }
}

fn collect_free_term(t: &Term, scope: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    match t {
        Term::Var(v) => {
            if !scope.contains(v) {
                out.insert(*v);
            }
        }
        Term::Empty => {}
        Term::Singleton(t) => collect_free_term(t, scope, out),
        Term::Union(a, b) => {
            collect_free_term(a, scope, out);
            collect_free_term(b, scope, out);
        }
        Term::Comprehension(_, v, body) => {
            scope.push(*v);
            collect_free(body, scope, out);
            scope.pop();
        }
    }
}

fn collect_subformulas<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    out.push(f);
    match f {
        Formula::Verum | Formula::Falsum => {}
        Formula::Member(a, b) | Formula::Equal(a, b) => {
            collect_term_subformulas(a, out);
            collect_term_subformulas(b, out);
        }
        Formula::Mirimanoff(t) => collect_term_subformulas(t, out),
        Formula::Not(a) => collect_subformulas(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_subformulas(a, out);
            collect_subformulas(b, out);
        }
        Formula::Exists(_, a) | Formula::Forall(_, a) => collect_subformulas(a, out),
    }
}

fn collect_term_subformulas<'a>(t: &'a Term, out: &mut Vec<&'a Formula>) {
    match t {
        Term::Var(_) | Term::Empty => {}
        Term::Singleton(t) => collect_term_subformulas(t, out),
        Term::Union(a, b) => {
            collect_term_subformulas(a, out);
            collect_term_subformulas(b, out);
        }
        Term::Comprehension(_, _, body) => collect_subformulas(body, out),
    }
}

/// Node count of the formula: each atom, connective and quantifier counts
/// one node; a comprehension term adds the node count of its body. Terms
/// themselves contribute nothing, so the metric is defined on canonical
/// (sugar-free) formulas and is invariant under renaming of bound
/// variables.
pub fn length(f: &Formula) -> u32 {
    match f {
        Formula::Verum | Formula::Falsum => 1,
        Formula::Member(a, b) | Formula::Equal(a, b) => 1 + term_length(a) + term_length(b),
        Formula::Mirimanoff(t) => 1 + term_length(t),
        Formula::Not(a) => 1 + length(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            1 + length(a) + length(b)
        }
        Formula::Exists(_, a) | Formula::Forall(_, a) => 1 + length(a),
    }
}

fn term_length(t: &Term) -> u32 {
    match t {
        Term::Var(_) | Term::Empty => 0,
        Term::Singleton(t) => term_length(t),
        Term::Union(a, b) => term_length(a) + term_length(b),
        Term::Comprehension(_, _, body) => length(body),
    }
}

/// Capture-avoiding substitution of `term` for the parameter `bN` given
/// by `param`. A formula in which the parameter does not occur is
/// returned unchanged (up to canonicalization). The result is
/// re-canonicalized, which renames the bound variables of the inserted
/// term into the host formula's binder sequence.
pub fn substitute(f: &Formula, param: u32, term: &Term) -> Formula {
    canonicalize(&subst_formula(f, param, term))
}

fn subst_formula(f: &Formula, param: u32, term: &Term) -> Formula {
    match f {
        Formula::Verum => Formula::Verum,
        Formula::Falsum => Formula::Falsum,
        Formula::Member(a, b) => Formula::Member(
            subst_term(a, param, term),
            subst_term(b, param, term),
        ),
        Formula::Equal(a, b) => Formula::Equal(
            subst_term(a, param, term),
            subst_term(b, param, term),
        ),
        Formula::Mirimanoff(t) => Formula::Mirimanoff(subst_term(t, param, term)),
        Formula::Not(a) => Formula::not(subst_formula(a, param, term)),
        Formula::And(a, b) => Formula::and(
            subst_formula(a, param, term),
            subst_formula(b, param, term),
        ),
        Formula::Or(a, b) => Formula::or(
            subst_formula(a, param, term),
            subst_formula(b, param, term),
        ),
        Formula::Implies(a, b) => Formula::implies(
            subst_formula(a, param, term),
            subst_formula(b, param, term),
        ),
        Formula::Exists(v, a) => Formula::exists(*v, subst_formula(a, param, term)),
        Formula::Forall(v, a) => Formula::forall(*v, subst_formula(a, param, term)),
    }
}

fn subst_term(t: &Term, param: u32, term: &Term) -> Term {
    match t {
        Term::Var(Var::Param(i)) if *i == param => term.clone(),
        Term::Var(v) => Term::Var(*v),
        Term::Empty => Term::Empty,
        Term::Singleton(t) => Term::Singleton(Box::new(subst_term(t, param, term))),
        Term::Union(a, b) => Term::Union(
            Box::new(subst_term(a, param, term)),
            Box::new(subst_term(b, param, term)),
        ),
        Term::Comprehension(op, v, body) => {
            Term::Comprehension(*op, *v, Box::new(subst_formula(body, param, term)))
        }
    }
}
