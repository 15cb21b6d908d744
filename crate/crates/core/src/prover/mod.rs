//! Bounded refutation of sethood assumptions.
//!
//! A [`Theory`] is the class-theoretical frame — first-order logic with
//! the Church schema handled during clausification, extensionality, and
//! explicit equality axioms — plus one comprehension axiom per existing
//! or assumed set. The main task assumes `Set({x: A(x)})` by introducing
//! a fresh constant `c` with `forall y (y in c <-> A(y))` and searches
//! for falsum within a step budget. Exhaustion keeps the axiom
//! provisionally; it is never evidence of consistency.

mod checker;
mod clause;
mod clausify;
mod saturate;
mod trace;

pub use checker::{check_parsed, check_trace, TraceCheck};
pub use clause::Clause;
pub use clausify::ClausifyError;
pub use saturate::{Goal, Outcome, Saturation};
pub use trace::{Trace, TraceParseError, TraceRule, TraceStep};

use crate::catalog;
use crate::formula::{print, Formula, Term, Var};
use clausify::{registry_key, Clausifier};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ProverError {
    #[error(transparent)]
    Clausify(#[from] ClausifyError),
}

/// Proof frame: pure CT, or CT together with the comprehension axioms of
/// already-accepted sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Frame {
    Ct,
    CtAndEs,
}

#[derive(Debug, Clone)]
struct TheorySet {
    key: String,
    formula: Formula,
    /// whether the set's comprehension axiom is part of the theory (in
    /// pure CT, existing sets are registered as opaque objects only)
    with_axiom: bool,
    label: String,
}

/// Immutable snapshot of axioms and the set-constant registry.
/// Registration order fixes constant numbering.
#[derive(Debug, Clone, Default)]
pub struct Theory {
    sets: Vec<TheorySet>,
}

impl Theory {
    /// The bare class-theoretical frame.
    pub fn ct() -> Theory {
        Theory::default()
    }

    /// Registers an existing set whose comprehension axiom joins the
    /// theory (the ES part of CT&ES).
    pub fn with_existing_set(mut self, formula: &Formula) -> Theory {
        let n = self.sets.len();
        self.sets.push(TheorySet {
            key: print(formula),
            formula: formula.clone(),
            with_axiom: true,
            label: format!("es-{n}"),
        });
        self
    }

    /// Registers an existing set as an opaque object: its term resolves
    /// to a constant but no axiom about it is available.
    pub fn with_registered_object(mut self, formula: &Formula) -> Theory {
        let n = self.sets.len();
        self.sets.push(TheorySet {
            key: print(formula),
            formula: formula.clone(),
            with_axiom: false,
            label: format!("obj-{n}"),
        });
        self
    }

    /// Assumes sethood of the class `{x: A(x)}`: extends the theory with
    /// a fresh constant and its comprehension axiom. `A` must be
    /// parameter-free (substitute first).
    pub fn assume_sethood(&self, a: &Formula) -> Result<Theory, ProverError> {
        if !a.params().is_empty() {
            return Err(ClausifyError::UnsubstitutedParameters.into());
        }
        let mut next = self.clone();
        next.sets.push(TheorySet {
            key: print(a),
            formula: a.clone(),
            with_axiom: true,
            label: "assumed".to_string(),
        });
        Ok(next)
    }

    /// Comprehension axioms present in the theory, as (label, formula).
    pub fn axioms(&self) -> Vec<(String, Formula)> {
        self.sets
            .iter()
            .filter(|s| s.with_axiom)
            .map(|s| (s.label.clone(), s.formula.clone()))
            .collect()
    }

    fn clauses(&self) -> Result<Vec<(Clause, String)>, ProverError> {
        let mut registry = BTreeMap::new();
        for (i, set) in self.sets.iter().enumerate() {
            registry.insert(registry_key(Var::X, &set.formula), i as u32);
            // the key under the set's own printed text as well
            registry.insert(set.key.clone(), i as u32);
        }
        let mut clausifier = Clausifier::new(registry);
        let mut out = Vec::new();
        for clause in equality_clauses() {
            out.push((clause, "eq".to_string()));
        }
        for clause in clausifier.sentence(&catalog::extensionality())? {
            out.push((clause, "ext".to_string()));
        }
        for (i, set) in self.sets.iter().enumerate() {
            if !set.with_axiom {
                continue;
            }
            for clause in clausifier.comprehension(i as u32, &set.formula)? {
                out.push((clause, set.label.clone()));
            }
        }
        Ok(out)
    }
}

/// Clauses of a single formula with free variables read as fresh
/// constants — no equality theory, no extensionality. Used by the
/// pathology checks, which saturate a formula's own clauses only.
pub fn clausify_standalone(f: &Formula) -> Result<Vec<Clause>, ProverError> {
    let mut clausifier = Clausifier::new(BTreeMap::new());
    Ok(clausifier.open_formula(f, 0)?)
}

/// Reflexivity, symmetry, transitivity and membership congruence. The
/// formula language has no function symbols of its own, so these five
/// clauses are the whole equality theory.
fn equality_clauses() -> Vec<Clause> {
    use clause::{Atom, Lit, PTerm};
    let x = || PTerm::Var(0);
    let y = || PTerm::Var(1);
    let z = || PTerm::Var(2);
    vec![
        // X = X
        Clause::new(vec![Lit::pos(Atom::equal(x(), x()))]),
        // X != Y | Y = X
        Clause::new(vec![
            Lit::neg(Atom::equal(x(), y())),
            Lit::pos(Atom::equal(y(), x())),
        ]),
        // X != Y | Y != Z | X = Z
        Clause::new(vec![
            Lit::neg(Atom::equal(x(), y())),
            Lit::neg(Atom::equal(y(), z())),
            Lit::pos(Atom::equal(x(), z())),
        ]),
        // X != Y | X notin Z | Y in Z
        Clause::new(vec![
            Lit::neg(Atom::equal(x(), y())),
            Lit::neg(Atom::member(x(), z())),
            Lit::pos(Atom::member(y(), z())),
        ]),
        // X != Y | Z notin X | Z in Y
        Clause::new(vec![
            Lit::neg(Atom::equal(x(), y())),
            Lit::neg(Atom::member(z(), x())),
            Lit::pos(Atom::member(z(), y())),
        ]),
    ]
}

/// Result of a refutation attempt.
#[derive(Debug, Clone)]
pub struct RefutationResult {
    pub outcome: RefutationOutcome,
    pub budget: u64,
}

#[derive(Debug, Clone)]
pub enum RefutationOutcome {
    Refuted { trace: Trace },
    Exhausted { steps: u64, saturated: bool },
}

impl RefutationResult {
    pub fn is_refuted(&self) -> bool {
        matches!(self.outcome, RefutationOutcome::Refuted { .. })
    }
}

/// Clausifies the theory and saturates within the budget.
pub fn refute(theory: &Theory, budget: u64) -> Result<RefutationResult, ProverError> {
    let inputs = theory.clauses()?;
    let mut sat = Saturation::new(inputs, budget, Goal::EmptyClause);
    let outcome = match sat.run() {
        Outcome::Refuted { trace, .. } => RefutationOutcome::Refuted { trace },
        Outcome::Saturated { steps } => RefutationOutcome::Exhausted {
            steps,
            saturated: true,
        },
        Outcome::OutOfBudget { steps } => RefutationOutcome::Exhausted {
            steps,
            saturated: false,
        },
        Outcome::NegativeCycle { .. } | Outcome::PositiveCycle { .. } => {
            unreachable!("empty-clause goal")
        }
    };
    Ok(RefutationResult { outcome, budget })
}

/// Verdict of the main task for one formula.
#[derive(Debug, Clone)]
pub enum TaskVerdict {
    Refuted { trace: Trace },
    KeptProvisional { steps: u64, saturated: bool },
}

impl TaskVerdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, TaskVerdict::Refuted { .. })
    }
}

/// The main task: try to derive falsum from `Set({x: A(x)})` within the
/// frame. `pool` lists the already-accepted sets in acceptance order. In
/// CT&ES mode their comprehension axioms join the theory; in pure CT
/// they are registered as opaque objects only (so substituted set terms
/// still resolve).
pub fn main_task(
    a: &Formula,
    frame: Frame,
    pool: &[Formula],
    budget: u64,
) -> Result<TaskVerdict, ProverError> {
    let mut theory = Theory::ct();
    for f in pool {
        theory = match frame {
            Frame::CtAndEs => theory.with_existing_set(f),
            Frame::Ct => theory.with_registered_object(f),
        };
    }
    let theory = theory.assume_sethood(a)?;
    let result = refute(&theory, budget)?;
    Ok(match result.outcome {
        RefutationOutcome::Refuted { trace } => TaskVerdict::Refuted { trace },
        RefutationOutcome::Exhausted { steps, saturated } => {
            TaskVerdict::KeptProvisional { steps, saturated }
        }
    })
}

/// Verdict of the parametric main task.
#[derive(Debug, Clone)]
pub enum ParametricVerdict {
    /// Some substitution instance refuted; the assignment maps parameter
    /// indices to pool positions.
    Refuted {
        instance: Formula,
        assignment: Vec<(u32, usize)>,
        trace: Trace,
    },
    /// Every instance within the length cap stayed provisional.
    Provisional { instances_checked: usize },
}

/// Substitutes every combination of accepted set terms for the
/// parameters of `a` (skipping instances beyond the length cap) and runs
/// the main task on each instance in pool order.
pub fn main_task_parametric(
    a: &Formula,
    frame: Frame,
    pool: &[Formula],
    budget: u64,
    length_cap: u32,
) -> Result<ParametricVerdict, ProverError> {
    let params: Vec<u32> = a.params().into_iter().collect();
    debug_assert!(!params.is_empty());
    if pool.is_empty() {
        return Ok(ParametricVerdict::Provisional {
            instances_checked: 0,
        });
    }
    let mut checked = 0usize;
    let mut assignment = vec![0usize; params.len()];
    loop {
        let mut instance = a.clone();
        for (slot, &param) in params.iter().enumerate() {
            let term = Term::set_of(pool[assignment[slot]].clone());
            instance = crate::formula::substitute(&instance, param, &term);
        }
        if crate::formula::length(&instance) <= length_cap {
            checked += 1;
            if let TaskVerdict::Refuted { trace } = main_task(&instance, frame, pool, budget)? {
                return Ok(ParametricVerdict::Refuted {
                    instance,
                    assignment: params
                        .iter()
                        .copied()
                        .zip(assignment.iter().copied())
                        .collect(),
                    trace,
                });
            }
        }
        // next combination, rightmost position fastest
        let mut i = params.len();
        loop {
            if i == 0 {
                return Ok(ParametricVerdict::Provisional {
                    instances_checked: checked,
                });
            }
            i -= 1;
            assignment[i] += 1;
            if assignment[i] < pool.len() {
                break;
            }
            assignment[i] = 0;
        }
    }
}

/// Optional fast-path hints for sethood (report annotations, never
/// trusted verdicts).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SethoodHint {
    /// The constituting formula holds of everything outright (`T`,
    /// `x = x`).
    UniversallyTrue,
    /// The formula is the negation of an accepted set's formula.
    ComplementOfAccepted { of: String },
}

pub fn sethood_hints(a: &Formula, pool: &[Formula]) -> Vec<SethoodHint> {
    let mut hints = Vec::new();
    if matches!(a, Formula::Verum) || print(a) == "x = x" {
        hints.push(SethoodHint::UniversallyTrue);
    }
    let negated = crate::formula::canonicalize(&Formula::not(a.clone()));
    for f in pool {
        if print(f) == print(&negated) {
            hints.push(SethoodHint::ComplementOfAccepted { of: print(f) });
        }
    }
    hints
}
