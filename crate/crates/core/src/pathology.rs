//! The pathology hierarchy over set-constituting formulas: primitive
//! pathologies (membership circles and the Mirimanoff marker), bounded
//! derivability of pathologies and anti-pathologies, hereditary
//! classification, and "consistent" candidacy.
//!
//! Primitive pathology is a decidable syntactic property. Derived
//! pathology is approximated by bounded saturation over the formula's
//! own clauses (no equality theory, no extensionality): the check
//! watches for derived membership cycles up to [`DEFAULT_N_MAX`]. A
//! search that reaches its fixpoint without producing a cycle pattern is
//! a definite negative; running out of budget is an honest third value —
//! whether derived pathology is even recursively enumerable is open.

use crate::formula::{canonicalize, print, Formula, Term, Var};
use crate::prover::{Goal, Outcome, Saturation, Trace};
use thiserror::Error;

/// Longest membership circle searched for by default.
pub const DEFAULT_N_MAX: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathologyError {
    #[error("budget must be positive")]
    BudgetZero,
    #[error("formula is outside the checkable language: {0}")]
    Unsupported(String),
}

/// The primitive pathologies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimPatho {
    /// `not (x in^n x)`: no membership chain of length n from x back to
    /// itself.
    Circle(usize),
    /// The marker formula `M(x)`.
    Mirimanoff,
}

/// The canonical circle formula of length `n`: `x notin x` for n = 1,
/// otherwise the negated existential chain through n-1 fresh variables.
pub fn circle_template(n: usize) -> Formula {
    assert!(n >= 1);
    if n == 1 {
        return Formula::not_member(Var::X, Var::X);
    }
    let vars: Vec<Var> = (1..n as u32).map(Var::Indexed).collect();
    let mut chain = Formula::member(Var::X, vars[0]);
    for w in vars.windows(2) {
        chain = Formula::and(chain, Formula::member(w[0], w[1]));
    }
    chain = Formula::and(chain, Formula::member(vars[n - 2], Var::X));
    let mut body = chain;
    for v in vars.iter().rev() {
        body = Formula::exists(*v, body);
    }
    canonicalize(&Formula::not(body))
}

/// Total, decidable syntactic match against the primitive pathologies
/// (circles up to `DEFAULT_N_MAX`, and the marker `M(x)`).
pub fn detect_prim_patho(f: &Formula) -> Option<PrimPatho> {
    detect_prim_patho_with(f, DEFAULT_N_MAX)
}

pub fn detect_prim_patho_with(f: &Formula, n_max: usize) -> Option<PrimPatho> {
    if matches!(f, Formula::Mirimanoff(Term::Var(Var::X))) {
        return Some(PrimPatho::Mirimanoff);
    }
    let text = print(f);
    (1..=n_max)
        .find(|n| print(&circle_template(*n)) == text)
        .map(PrimPatho::Circle)
}

/// Outcome of the bounded pathology check.
#[derive(Debug, Clone)]
pub enum PathoOutcome {
    /// A circle instance was derived (zero steps when the formula is
    /// itself primitive pathological).
    Patho {
        prim: Option<PrimPatho>,
        evidence: Trace,
    },
    /// The negation of a circle instance was derived.
    AntiPatho { evidence: Trace },
    /// Saturation reached a fixpoint with no pathology pattern: a
    /// definite negative.
    Clean,
    /// Budget exhausted before a verdict.
    UnknownWithinBudget,
}

impl PathoOutcome {
    pub fn is_patho(&self) -> bool {
        matches!(self, PathoOutcome::Patho { .. })
    }

    pub fn is_anti_patho(&self) -> bool {
        matches!(self, PathoOutcome::AntiPatho { .. })
    }

    pub fn is_definite(&self) -> bool {
        !matches!(self, PathoOutcome::UnknownWithinBudget)
    }

    /// Stable label for reports.
    pub fn label(&self) -> &'static str {
        match self {
            PathoOutcome::Patho { .. } => "patho",
            PathoOutcome::AntiPatho { .. } => "anti-patho",
            PathoOutcome::Clean => "clean",
            PathoOutcome::UnknownWithinBudget => "unknown",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PathoCheck {
    pub outcome: PathoOutcome,
    pub budget_consumed: u64,
}

/// Bounded check whether a circle (pathology) or a cycle (anti-
/// pathology) is derivable from the formula, with free variables read as
/// constants.
pub fn check_patho(f: &Formula, budget: u64) -> Result<PathoCheck, PathologyError> {
    check_patho_with(f, budget, DEFAULT_N_MAX)
}

pub fn check_patho_with(
    f: &Formula,
    budget: u64,
    n_max: usize,
) -> Result<PathoCheck, PathologyError> {
    if budget == 0 {
        return Err(PathologyError::BudgetZero);
    }
    let canonical = canonicalize(f);
    if let Some(prim) = detect_prim_patho_with(&canonical, n_max) {
        return Ok(PathoCheck {
            outcome: PathoOutcome::Patho {
                prim: Some(prim),
                evidence: Trace::default(),
            },
            budget_consumed: 0,
        });
    }
    if canonical.has_mirimanoff() {
        // the marker carries no first-order content; nothing derivable
        return Ok(PathoCheck {
            outcome: PathoOutcome::Clean,
            budget_consumed: 0,
        });
    }
    let clauses = crate::prover::clausify_standalone(&canonical)
        .map_err(|e| PathologyError::Unsupported(e.to_string()))?;
    let inputs: Vec<_> = clauses
        .into_iter()
        .enumerate()
        .map(|(i, c)| (c, format!("wff-{i}")))
        .collect();
    let mut sat = Saturation::new(inputs, budget, Goal::MembershipCycles { max_len: n_max });
    Ok(match sat.run() {
        Outcome::NegativeCycle { trace, steps, .. } => PathoCheck {
            outcome: PathoOutcome::Patho {
                prim: None,
                evidence: trace,
            },
            budget_consumed: steps,
        },
        Outcome::PositiveCycle { trace, steps, .. } => PathoCheck {
            outcome: PathoOutcome::AntiPatho { evidence: trace },
            budget_consumed: steps,
        },
        // deriving falsum from the bare formula derives everything,
        // circles included
        Outcome::Refuted { trace, steps } => PathoCheck {
            outcome: PathoOutcome::Patho {
                prim: None,
                evidence: trace,
            },
            budget_consumed: steps,
        },
        Outcome::Saturated { steps } => PathoCheck {
            outcome: PathoOutcome::Clean,
            budget_consumed: steps,
        },
        Outcome::OutOfBudget { steps } => PathoCheck {
            outcome: PathoOutcome::UnknownWithinBudget,
            budget_consumed: steps,
        },
    })
}

/// Hereditary classification by checking every subformula.
#[derive(Debug, Clone)]
pub enum HereditaryVerdict {
    /// Some subformula is pathological; the path gives child indices
    /// from the root to it.
    HereditaryPatho {
        offending: Formula,
        path: Vec<usize>,
    },
    /// No subformula is pathological, all checks definite.
    Hnp,
    /// Some subformula check exhausted its budget and none was
    /// pathological.
    Unknown,
}

impl HereditaryVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            HereditaryVerdict::HereditaryPatho { .. } => "hereditary-patho",
            HereditaryVerdict::Hnp => "hnp",
            HereditaryVerdict::Unknown => "unknown",
        }
    }
}

pub fn classify_hereditary(f: &Formula, budget: u64) -> Result<HereditaryVerdict, PathologyError> {
    classify_hereditary_with(f, budget, DEFAULT_N_MAX)
}

pub fn classify_hereditary_with(
    f: &Formula,
    budget: u64,
    n_max: usize,
) -> Result<HereditaryVerdict, PathologyError> {
    let mut any_unknown = false;
    for (path, sub) in subformulas_with_paths(f) {
        let check = check_patho_with(sub, budget, n_max)?;
        match check.outcome {
            PathoOutcome::Patho { .. } => {
                return Ok(HereditaryVerdict::HereditaryPatho {
                    offending: sub.clone(),
                    path,
                })
            }
            PathoOutcome::UnknownWithinBudget => any_unknown = true,
            PathoOutcome::AntiPatho { .. } | PathoOutcome::Clean => {}
        }
    }
    Ok(if any_unknown {
        HereditaryVerdict::Unknown
    } else {
        HereditaryVerdict::Hnp
    })
}

/// Candidacy for "consistent" in the hereditary sense: neither the
/// formula, its negation, nor any subformula is pathological or
/// anti-pathological within budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Candidacy {
    Consistent,
    NotConsistent,
    Unknown,
}

pub fn is_consistent_candidate(f: &Formula, budget: u64) -> Result<Candidacy, PathologyError> {
    is_consistent_candidate_with(f, budget, DEFAULT_N_MAX)
}

pub fn is_consistent_candidate_with(
    f: &Formula,
    budget: u64,
    n_max: usize,
) -> Result<Candidacy, PathologyError> {
    let negated = canonicalize(&Formula::not(f.clone()));
    let mut targets: Vec<Formula> = f.subformulas().into_iter().cloned().collect();
    targets.push(negated);
    let mut any_unknown = false;
    for sub in &targets {
        let check = check_patho_with(sub, budget, n_max)?;
        match check.outcome {
            PathoOutcome::Patho { .. } | PathoOutcome::AntiPatho { .. } => {
                return Ok(Candidacy::NotConsistent)
            }
            PathoOutcome::UnknownWithinBudget => any_unknown = true,
            PathoOutcome::Clean => {}
        }
    }
    Ok(if any_unknown {
        Candidacy::Unknown
    } else {
        Candidacy::Consistent
    })
}

fn subformulas_with_paths(f: &Formula) -> Vec<(Vec<usize>, &Formula)> {
    fn walk<'a>(f: &'a Formula, path: Vec<usize>, out: &mut Vec<(Vec<usize>, &'a Formula)>) {
        out.push((path.clone(), f));
        let children: Vec<&Formula> = match f {
            Formula::Verum
            | Formula::Falsum
            | Formula::Member(_, _)
            | Formula::Equal(_, _)
            | Formula::Mirimanoff(_) => Vec::new(),
            Formula::Not(a) => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => vec![a, b],
            Formula::Exists(_, a) | Formula::Forall(_, a) => vec![a],
        };
        for (i, child) in children.into_iter().enumerate() {
            let mut p = path.clone();
            p.push(i);
            walk(child, p, out);
        }
    }
    let mut out = Vec::new();
    walk(f, Vec::new(), &mut out);
    out
}
