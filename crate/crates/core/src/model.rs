//! Finite membership structures: positive sethood witnesses and
//! evaluation of closed axioms at desk scale.
//!
//! A structure is a universe `{0..n-1}` with a membership relation,
//! encoded as a bitmask where bit `v*n + u` means `u E v` (element `v`'s
//! members occupy one contiguous block). Structures are extensional —
//! no two elements have the same member set — and the search enumerates
//! masks in ascending numeric order, so the reported witness is the
//! least one in that fixed order.

use crate::formula::{Formula, Term, Var};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("universe size {0} exceeds the supported maximum of 8")]
    TooLarge(usize),
    #[error("formula is not finitely evaluable: {0}")]
    Unsupported(String),
    #[error("formula must be closed, found free {0}")]
    FreeVariable(String),
}

/// A finite membership structure over `{0..n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FiniteStructure {
    pub n: usize,
    pub edges: u64,
}

impl FiniteStructure {
    pub fn new(n: usize, edges: u64) -> Result<FiniteStructure, ModelError> {
        if n > 8 {
            return Err(ModelError::TooLarge(n));
        }
        Ok(FiniteStructure { n, edges })
    }

    /// `u E v`: u is a member of v.
    pub fn member(&self, u: usize, v: usize) -> bool {
        self.edges >> (v * self.n + u) & 1 == 1
    }

    /// The member bitmask of element `v`.
    pub fn members_of(&self, v: usize) -> u64 {
        (self.edges >> (v * self.n)) & ((1 << self.n) - 1)
    }

    /// No two distinct elements share a member set.
    pub fn is_extensional(&self) -> bool {
        for v in 0..self.n {
            for w in v + 1..self.n {
                if self.members_of(v) == self.members_of(w) {
                    return false;
                }
            }
        }
        true
    }

    /// Adjacency-list serialization: one `v: u1 u2 ...` line per element.
    pub fn adjacency_text(&self) -> String {
        let mut out = String::new();
        for v in 0..self.n {
            out.push_str(&format!("{v}:"));
            for u in 0..self.n {
                if self.member(u, v) {
                    out.push_str(&format!(" {u}"));
                }
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for FiniteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} edges={:#x}", self.n, self.edges)
    }
}

/// All extensional structures of size `n`, ascending by edge mask.
pub fn extensional_structures(n: usize) -> impl Iterator<Item = FiniteStructure> {
    let bits = n * n;
    (0u64..(1 << bits))
        .map(move |edges| FiniteStructure { n, edges })
        .filter(|s| s.is_extensional())
}

/// A positive sethood witness: a structure and an element whose members
/// are exactly those satisfying the constituting formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Witness {
    pub structure: FiniteStructure,
    pub element: usize,
}

/// Searches structures of size 1..=n_max for an element realizing the
/// comprehension `{x: A(x)}` under finite semantics. Returns the first
/// witness in the fixed order `(n, edge mask, element)`.
pub fn find_witness(a: &Formula, n_max: usize) -> Result<Option<Witness>, ModelError> {
    check_evaluable(a)?;
    let free = a.free_vars();
    if free.iter().any(|v| *v != Var::X) {
        return Err(ModelError::FreeVariable(
            free.iter().find(|v| **v != Var::X).unwrap().to_string(),
        ));
    }
    for n in 1..=n_max.min(8) {
        let mut found: Option<Witness> = None;
        search_structures(n, &mut |s| {
            for c in 0..n {
                if realizes(a, &s, c) {
                    found = Some(Witness {
                        structure: s,
                        element: c,
                    });
                    return true;
                }
            }
            false
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Backtracking enumeration of extensional structures in ascending mask
/// order: assigns member masks from the most significant element down,
/// pruning duplicate member sets. `visit` returns true to stop.
fn search_structures(n: usize, visit: &mut impl FnMut(FiniteStructure) -> bool) {
    let mut masks = vec![0u64; n];
    assign(n, n - 1, &mut masks, visit);
}

fn assign(
    n: usize,
    level: usize,
    masks: &mut Vec<u64>,
    visit: &mut impl FnMut(FiniteStructure) -> bool,
) -> bool {
    // masks for elements level+1..n are fixed; choose masks[level]
    for mask in 0u64..(1 << n) {
        if masks[level + 1..].contains(&mask) {
            continue;
        }
        masks[level] = mask;
        if level == 0 {
            let mut edges = 0u64;
            for (v, m) in masks.iter().enumerate() {
                edges |= m << (v * n);
            }
            if visit(FiniteStructure { n, edges }) {
                return true;
            }
        } else if assign(n, level - 1, masks, visit) {
            return true;
        }
    }
    false
}

/// `forall y (y E c <-> A(y))` over the structure.
pub fn realizes(a: &Formula, s: &FiniteStructure, c: usize) -> bool {
    for y in 0..s.n {
        let mut env = BTreeMap::new();
        env.insert(Var::X, y);
        if s.member(y, c) != eval(a, s, &env) {
            return false;
        }
    }
    true
}

/// `slim(X)`: strictly smaller than its complement, `|X| < n - |X|`.
pub fn slim_check(s: &FiniteStructure, subset: &[usize]) -> bool {
    let card = subset.len();
    card < s.n - card
}

/// Standard finite evaluation of a closed, sugar-free sentence.
pub fn check_axiom(s: &FiniteStructure, axiom: &Formula) -> Result<bool, ModelError> {
    check_evaluable(axiom)?;
    if let Some(v) = axiom.free_vars().iter().next() {
        return Err(ModelError::FreeVariable(v.to_string()));
    }
    Ok(eval(axiom, s, &BTreeMap::new()))
}

fn check_evaluable(f: &Formula) -> Result<(), ModelError> {
    if !f.is_sugar_free() {
        return Err(ModelError::Unsupported("sugar terms present".to_string()));
    }
    if f.has_comprehension() {
        return Err(ModelError::Unsupported(
            "comprehension terms present".to_string(),
        ));
    }
    if f.has_mirimanoff() {
        return Err(ModelError::Unsupported(
            "the Mirimanoff marker has no finite semantics".to_string(),
        ));
    }
    Ok(())
}

fn eval(f: &Formula, s: &FiniteStructure, env: &BTreeMap<Var, usize>) -> bool {
    match f {
        Formula::Verum => true,
        Formula::Falsum => false,
        Formula::Member(a, b) => s.member(term_value(a, env), term_value(b, env)),
        Formula::Equal(a, b) => term_value(a, env) == term_value(b, env),
        Formula::Mirimanoff(_) => unreachable!("rejected by check_evaluable"),
        Formula::Not(a) => !eval(a, s, env),
        Formula::And(a, b) => eval(a, s, env) && eval(b, s, env),
        Formula::Or(a, b) => eval(a, s, env) || eval(b, s, env),
        Formula::Implies(a, b) => !eval(a, s, env) || eval(b, s, env),
        Formula::Exists(v, body) => (0..s.n).any(|d| {
            let mut env2 = env.clone();
            env2.insert(*v, d);
            eval(body, s, &env2)
        }),
        Formula::Forall(v, body) => (0..s.n).all(|d| {
            let mut env2 = env.clone();
            env2.insert(*v, d);
            eval(body, s, &env2)
        }),
    }
}

fn term_value(t: &Term, env: &BTreeMap<Var, usize>) -> usize {
    match t {
        Term::Var(v) => *env
            .get(v)
            .expect("well-scoped formula evaluated under a full environment"),
        _ => unreachable!("rejected by check_evaluable"),
    }
}
