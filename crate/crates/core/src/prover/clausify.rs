//! Translation from the formula language into clauses: class-term
//! elimination, negation normal form, Skolemization and distribution.
//!
//! Class terms are never reified as prover objects. A comprehension term
//! on the right of a membership atom unfolds through the Church schema
//! (`t in {x: A}` becomes `A(t)`); in object position (left of `in`, or
//! either side of `=`) the term must be a registered set, whose constant
//! is substituted. Class-operator terms `{|x: A|}` never stand in object
//! position.

use super::clause::{Atom, Clause, Lit, PTerm};
use crate::formula::{print, Formula, SetOperator, Term, Var};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClausifyError {
    #[error("formula has unsubstituted parameters")]
    UnsubstitutedParameters,
    #[error("sugar terms must be expanded before proving")]
    SugarPresent,
    #[error("the Mirimanoff marker is outside the prover's language")]
    MirimanoffPresent,
    #[error("class term in object position is not a registered set: {0}")]
    UnregisteredClassObject(String),
    #[error("free variable {0} has no interpretation in this theory")]
    UnresolvedFreeVariable(String),
}

/// Intermediate first-order formula over prover terms.
#[derive(Debug, Clone)]
enum PFormula {
    Lit(Lit),
    Verum,
    Falsum,
    And(Box<PFormula>, Box<PFormula>),
    Or(Box<PFormula>, Box<PFormula>),
    Not(Box<PFormula>),
    Exists(u32, Box<PFormula>),
    Forall(u32, Box<PFormula>),
}

/// Shared clausification state: fresh prover variables and Skolem ids.
pub struct Clausifier {
    next_var: u32,
    next_skolem: u32,
    /// canonical body text of a registered set's formula -> its constant
    registry: BTreeMap<String, u32>,
}

impl Clausifier {
    pub fn new(registry: BTreeMap<String, u32>) -> Clausifier {
        Clausifier {
            next_var: 0,
            next_skolem: 0,
            registry,
        }
    }

    fn fresh_var(&mut self) -> u32 {
        let v = self.next_var;
        self.next_var += 1;
        v
    }

    fn fresh_skolem(&mut self) -> u32 {
        let s = self.next_skolem;
        self.next_skolem += 1;
        s
    }

    /// Clauses for the comprehension axiom `forall y (y in c <-> A(y))`
    /// of the set with constant `c` and constituting formula `a` (sole
    /// free variable `x`).
    pub fn comprehension(&mut self, constant: u32, a: &Formula) -> Result<Vec<Clause>, ClausifyError> {
        let y = self.fresh_var();
        let mut env = BTreeMap::new();
        env.insert(Var::X, PTerm::Var(y));
        let body = self.lower(a, &env)?;
        let member = PFormula::Lit(Lit::pos(Atom::member(
            PTerm::Var(y),
            PTerm::Const(constant),
        )));
        let iff = PFormula::And(
            Box::new(PFormula::Or(
                Box::new(PFormula::Not(Box::new(member.clone()))),
                Box::new(body.clone()),
            )),
            Box::new(PFormula::Or(
                Box::new(PFormula::Not(Box::new(body))),
                Box::new(member),
            )),
        );
        Ok(self.cnf(PFormula::Forall(y, Box::new(iff))))
    }

    /// Clauses for a closed sentence (no free variables at all).
    pub fn sentence(&mut self, f: &Formula) -> Result<Vec<Clause>, ClausifyError> {
        let env = BTreeMap::new();
        let lowered = self.lower(f, &env)?;
        Ok(self.cnf(lowered))
    }

    /// Clauses for a formula whose free variables are read as fresh
    /// constants (used by the pathology checks). Free variables are
    /// assigned constants in sorted order starting at `first_const`.
    pub fn open_formula(
        &mut self,
        f: &Formula,
        first_const: u32,
    ) -> Result<Vec<Clause>, ClausifyError> {
        let mut env = BTreeMap::new();
        let mut next = first_const;
        for v in f.free_vars() {
            env.insert(v, PTerm::Const(next));
            next += 1;
        }
        let lowered = self.lower(f, &env)?;
        Ok(self.cnf(lowered))
    }

    fn lower(
        &mut self,
        f: &Formula,
        env: &BTreeMap<Var, PTerm>,
    ) -> Result<PFormula, ClausifyError> {
        Ok(match f {
            Formula::Verum => PFormula::Verum,
            Formula::Falsum => PFormula::Falsum,
            Formula::Mirimanoff(_) => return Err(ClausifyError::MirimanoffPresent),
            Formula::Member(l, r) => self.lower_member(l, r, env)?,
            Formula::Equal(l, r) => {
                let lt = self.object_term(l, env)?;
                let rt = self.object_term(r, env)?;
                PFormula::Lit(Lit::pos(Atom::equal(lt, rt)))
            }
            Formula::Not(a) => PFormula::Not(Box::new(self.lower(a, env)?)),
            Formula::And(a, b) => PFormula::And(
                Box::new(self.lower(a, env)?),
                Box::new(self.lower(b, env)?),
            ),
            Formula::Or(a, b) => PFormula::Or(
                Box::new(self.lower(a, env)?),
                Box::new(self.lower(b, env)?),
            ),
            Formula::Implies(a, b) => PFormula::Or(
                Box::new(PFormula::Not(Box::new(self.lower(a, env)?))),
                Box::new(self.lower(b, env)?),
            ),
            Formula::Exists(v, body) => {
                let pv = self.fresh_var();
                let mut env2 = env.clone();
                env2.insert(*v, PTerm::Var(pv));
                PFormula::Exists(pv, Box::new(self.lower(body, &env2)?))
            }
            Formula::Forall(v, body) => {
                let pv = self.fresh_var();
                let mut env2 = env.clone();
                env2.insert(*v, PTerm::Var(pv));
                PFormula::Forall(pv, Box::new(self.lower(body, &env2)?))
            }
        })
    }

    fn lower_member(
        &mut self,
        l: &Term,
        r: &Term,
        env: &BTreeMap<Var, PTerm>,
    ) -> Result<PFormula, ClausifyError> {
        // Church schema: membership in a comprehension unfolds to the
        // body applied to the left term.
        if let Term::Comprehension(_, v, body) = r {
            let lt = self.object_term(l, env)?;
            let mut env2 = env.clone();
            env2.insert(*v, lt);
            return self.lower(body, &env2);
        }
        let lt = self.object_term(l, env)?;
        let rt = self.object_term(r, env)?;
        Ok(PFormula::Lit(Lit::pos(Atom::member(lt, rt))))
    }

    fn object_term(
        &mut self,
        t: &Term,
        env: &BTreeMap<Var, PTerm>,
    ) -> Result<PTerm, ClausifyError> {
        match t {
            Term::Var(v) => match env.get(v) {
                Some(t) => Ok(t.clone()),
                None if matches!(v, Var::Param(_)) => {
                    Err(ClausifyError::UnsubstitutedParameters)
                }
                None => Err(ClausifyError::UnresolvedFreeVariable(v.to_string())),
            },
            Term::Empty | Term::Singleton(_) | Term::Union(_, _) => {
                Err(ClausifyError::SugarPresent)
            }
            Term::Comprehension(op, v, body) => {
                if *op == SetOperator::Class {
                    return Err(ClausifyError::UnregisteredClassObject(print(&Formula::Member(
                        Term::Var(Var::X),
                        t.clone(),
                    ))));
                }
                // only closed set terms denote objects
                let mut free = body.free_vars();
                free.remove(v);
                if !free.is_empty() {
                    return Err(ClausifyError::UnregisteredClassObject(print(body)));
                }
                let key = registry_key(*v, body);
                self.registry
                    .get(&key)
                    .map(|c| PTerm::Const(*c))
                    .ok_or(ClausifyError::UnregisteredClassObject(key))
            }
        }
    }

    fn cnf(&mut self, f: PFormula) -> Vec<Clause> {
        let nnf = nnf(f, true);
        let sk = self.skolemize(nnf, &mut Vec::new());
        let mut clauses = Vec::new();
        distribute(&sk, &mut clauses);
        clauses
            .into_iter()
            .map(Clause::new)
            .filter(|c| !c.is_tautology())
            .collect()
    }

    fn skolemize(&mut self, f: PFormula, universals: &mut Vec<u32>) -> PFormula {
        match f {
            PFormula::Exists(v, body) => {
                let sk = self.fresh_skolem();
                let term = PTerm::Skolem(sk, universals.iter().map(|u| PTerm::Var(*u)).collect());
                let replaced = substitute_var(*body, v, &term);
                self.skolemize(replaced, universals)
            }
            PFormula::Forall(v, body) => {
                universals.push(v);
                let body = self.skolemize(*body, universals);
                universals.pop();
                body
            }
            PFormula::And(a, b) => PFormula::And(
                Box::new(self.skolemize(*a, universals)),
                Box::new(self.skolemize(*b, universals)),
            ),
            PFormula::Or(a, b) => PFormula::Or(
                Box::new(self.skolemize(*a, universals)),
                Box::new(self.skolemize(*b, universals)),
            ),
            other @ (PFormula::Lit(_) | PFormula::Verum | PFormula::Falsum) => other,
            PFormula::Not(_) => unreachable!("negations pushed to literals by nnf"),
        }
    }
}

/// The canonical registry key of a comprehension body: its constituting
/// formula printed with the bound variable renamed to `x`.
pub fn registry_key(v: Var, body: &Formula) -> String {
    if v == Var::X {
        return print(&crate::formula::canonicalize(body));
    }
    let renamed = rename_var(body, v, Var::X);
    print(&crate::formula::canonicalize(&renamed))
}

fn rename_var(f: &Formula, from: Var, to: Var) -> Formula {
    fn term(t: &Term, from: Var, to: Var) -> Term {
        match t {
            Term::Var(v) if *v == from => Term::Var(to),
            Term::Var(v) => Term::Var(*v),
            Term::Empty => Term::Empty,
            Term::Singleton(t) => Term::Singleton(Box::new(term(t, from, to))),
            Term::Union(a, b) => {
                Term::Union(Box::new(term(a, from, to)), Box::new(term(b, from, to)))
            }
            Term::Comprehension(op, v, body) => {
                if *v == from {
                    Term::Comprehension(*op, *v, body.clone())
                } else {
                    Term::Comprehension(*op, *v, Box::new(rename_var(body, from, to)))
                }
            }
        }
    }
    match f {
        Formula::Verum => Formula::Verum,
        Formula::Falsum => Formula::Falsum,
        Formula::Member(a, b) => Formula::Member(term(a, from, to), term(b, from, to)),
        Formula::Equal(a, b) => Formula::Equal(term(a, from, to), term(b, from, to)),
        Formula::Mirimanoff(t) => Formula::Mirimanoff(term(t, from, to)),
        Formula::Not(a) => Formula::not(rename_var(a, from, to)),
        Formula::And(a, b) => Formula::and(rename_var(a, from, to), rename_var(b, from, to)),
        Formula::Or(a, b) => Formula::or(rename_var(a, from, to), rename_var(b, from, to)),
        Formula::Implies(a, b) => {
            Formula::implies(rename_var(a, from, to), rename_var(b, from, to))
        }
        Formula::Exists(v, a) => {
            if *v == from {
                Formula::Exists(*v, a.clone())
            } else {
                Formula::exists(*v, rename_var(a, from, to))
            }
        }
        Formula::Forall(v, a) => {
            if *v == from {
                Formula::Forall(*v, a.clone())
            } else {
                Formula::forall(*v, rename_var(a, from, to))
            }
        }
    }
}

fn nnf(f: PFormula, positive: bool) -> PFormula {
    match (f, positive) {
        (PFormula::Lit(l), true) => PFormula::Lit(l),
        (PFormula::Lit(l), false) => PFormula::Lit(Lit {
            positive: !l.positive,
            atom: l.atom,
        }),
        (PFormula::Verum, true) | (PFormula::Falsum, false) => PFormula::Verum,
        (PFormula::Verum, false) | (PFormula::Falsum, true) => PFormula::Falsum,
        (PFormula::Not(a), pos) => nnf(*a, !pos),
        (PFormula::And(a, b), true) => {
            PFormula::And(Box::new(nnf(*a, true)), Box::new(nnf(*b, true)))
        }
        (PFormula::And(a, b), false) => {
            PFormula::Or(Box::new(nnf(*a, false)), Box::new(nnf(*b, false)))
        }
        (PFormula::Or(a, b), true) => {
            PFormula::Or(Box::new(nnf(*a, true)), Box::new(nnf(*b, true)))
        }
        (PFormula::Or(a, b), false) => {
            PFormula::And(Box::new(nnf(*a, false)), Box::new(nnf(*b, false)))
        }
        (PFormula::Exists(v, a), true) => PFormula::Exists(v, Box::new(nnf(*a, true))),
        (PFormula::Exists(v, a), false) => PFormula::Forall(v, Box::new(nnf(*a, false))),
        (PFormula::Forall(v, a), true) => PFormula::Forall(v, Box::new(nnf(*a, true))),
        (PFormula::Forall(v, a), false) => PFormula::Exists(v, Box::new(nnf(*a, false))),
    }
}

fn substitute_var(f: PFormula, var: u32, term: &PTerm) -> PFormula {
    fn sub_term(t: &PTerm, var: u32, term: &PTerm) -> PTerm {
        match t {
            PTerm::Var(v) if *v == var => term.clone(),
            PTerm::Var(v) => PTerm::Var(*v),
            PTerm::Const(c) => PTerm::Const(*c),
            PTerm::Skolem(s, args) => {
                PTerm::Skolem(*s, args.iter().map(|a| sub_term(a, var, term)).collect())
            }
        }
    }
    match f {
        PFormula::Lit(l) => PFormula::Lit(Lit {
            positive: l.positive,
            atom: Atom {
                pred: l.atom.pred,
                left: sub_term(&l.atom.left, var, term),
                right: sub_term(&l.atom.right, var, term),
            },
        }),
        PFormula::Verum => PFormula::Verum,
        PFormula::Falsum => PFormula::Falsum,
        PFormula::And(a, b) => PFormula::And(
            Box::new(substitute_var(*a, var, term)),
            Box::new(substitute_var(*b, var, term)),
        ),
        PFormula::Or(a, b) => PFormula::Or(
            Box::new(substitute_var(*a, var, term)),
            Box::new(substitute_var(*b, var, term)),
        ),
        PFormula::Not(a) => PFormula::Not(Box::new(substitute_var(*a, var, term))),
        PFormula::Exists(v, a) => PFormula::Exists(v, Box::new(substitute_var(*a, var, term))),
        PFormula::Forall(v, a) => PFormula::Forall(v, Box::new(substitute_var(*a, var, term))),
    }
}

/// Distributes disjunction over conjunction; `out` receives literal
/// lists. Verum conjuncts vanish, Falsum disjuncts vanish.
fn distribute(f: &PFormula, out: &mut Vec<Vec<Lit>>) {
    match f {
        PFormula::Verum => {}
        PFormula::Falsum => out.push(Vec::new()),
        PFormula::Lit(l) => out.push(vec![l.clone()]),
        PFormula::And(a, b) => {
            distribute(a, out);
            distribute(b, out);
        }
        PFormula::Or(a, b) => {
            let mut left = Vec::new();
            let mut right = Vec::new();
            distribute(a, &mut left);
            distribute(b, &mut right);
            if left.is_empty() {
                // Verum on the left absorbs the disjunction
                return;
            }
            if right.is_empty() {
                return;
            }
            for l in &left {
                for r in &right {
                    let mut lits = l.clone();
                    lits.extend(r.iter().cloned());
                    out.push(lits);
                }
            }
        }
        PFormula::Not(_) | PFormula::Exists(_, _) | PFormula::Forall(_, _) => {
            unreachable!("cnf input is skolemized NNF")
        }
    }
}
