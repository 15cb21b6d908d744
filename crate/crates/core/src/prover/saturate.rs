//! Given-clause saturation with binary resolution and factoring.
//!
//! The search is deterministic: passive clauses are selected by (weight,
//! age), every inference is counted against the step budget, and budgets
//! only truncate the search, so a refutation found at budget B is found
//! with an identical trace at any larger budget.

use super::clause::{subsumes, unify_atoms, Clause};
use super::trace::{Trace, TraceRule, TraceStep};
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

/// Search target. The empty clause always ends the search; the cycle
/// goal additionally watches for membership-cycle patterns (used by the
/// pathology classifier).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Goal {
    EmptyClause,
    MembershipCycles { max_len: usize },
}

#[derive(Debug, Clone)]
pub enum Outcome {
    /// Empty clause derived; the trace ends in falsum.
    Refuted { trace: Trace, steps: u64 },
    /// An all-negative membership clause containing a cycle of length
    /// <= max_len was derived (cycle-goal searches only).
    NegativeCycle { len: usize, trace: Trace, steps: u64 },
    /// Positive unit membership clauses forming a cycle of length
    /// <= max_len were derived (cycle-goal searches only).
    PositiveCycle { len: usize, trace: Trace, steps: u64 },
    /// No more inferences possible.
    Saturated { steps: u64 },
    /// Step budget exhausted.
    OutOfBudget { steps: u64 },
}

struct Record {
    clause: Clause,
    rule: TraceRule,
    parents: Vec<usize>,
}

pub struct Saturation {
    records: Vec<Record>,
    passive: BinaryHeap<Reverse<(u32, usize)>>,
    active: Vec<usize>,
    seen: HashSet<Clause>,
    steps: u64,
    budget: u64,
    goal: Goal,
    /// indices of positive unit membership clauses, for cycle scans
    pos_units: Vec<usize>,
}

impl Saturation {
    /// `inputs` are (clause, axiom label) pairs in a fixed order.
    pub fn new(inputs: Vec<(Clause, String)>, budget: u64, goal: Goal) -> Saturation {
        let mut sat = Saturation {
            records: Vec::new(),
            passive: BinaryHeap::new(),
            active: Vec::new(),
            seen: HashSet::new(),
            steps: 0,
            budget,
            goal,
            pos_units: Vec::new(),
        };
        for (clause, label) in inputs {
            sat.insert(clause, TraceRule::Input { label }, Vec::new());
        }
        sat
    }

    pub fn run(&mut self) -> Outcome {
        // goal patterns may already sit in the input set
        if let Some(done) = self.scan_initial() {
            return done;
        }
        loop {
            let Some(Reverse((_, given))) = self.passive.pop() else {
                return Outcome::Saturated { steps: self.steps };
            };
            if self
                .active
                .iter()
                .any(|&a| subsumes(&self.records[a].clause, &self.records[given].clause))
            {
                continue;
            }
            self.active.push(given);
            let partners = self.active.clone();
            for partner in partners {
                if self.steps >= self.budget {
                    return Outcome::OutOfBudget { steps: self.steps };
                }
                if let Some(done) = self.resolve_pair(given, partner) {
                    return done;
                }
            }
            if self.steps >= self.budget {
                return Outcome::OutOfBudget { steps: self.steps };
            }
            if let Some(done) = self.factor(given) {
                return done;
            }
        }
    }

    fn scan_initial(&mut self) -> Option<Outcome> {
        for i in 0..self.records.len() {
            if self.records[i].clause.is_empty() {
                return Some(Outcome::Refuted {
                    trace: self.trace_of(&[i]),
                    steps: self.steps,
                });
            }
            if let Some(done) = self.check_goal(i) {
                return Some(done);
            }
        }
        None
    }

    fn resolve_pair(&mut self, given: usize, partner: usize) -> Option<Outcome> {
        let g = self.records[given].clause.clone();
        let shift = g.max_var().map_or(0, |v| v + 1);
        let p = self.records[partner].clause.shift_vars(shift);
        for (gi, gl) in g.lits.iter().enumerate() {
            for (pi, pl) in p.lits.iter().enumerate() {
                if gl.positive == pl.positive {
                    continue;
                }
                if self.steps >= self.budget {
                    return Some(Outcome::OutOfBudget { steps: self.steps });
                }
                let Some(subst) = unify_atoms(&gl.atom, &pl.atom) else {
                    continue;
                };
                self.steps += 1;
                let mut lits = Vec::new();
                for (k, l) in g.lits.iter().enumerate() {
                    if k != gi {
                        lits.push(l.clone());
                    }
                }
                for (k, l) in p.lits.iter().enumerate() {
                    if k != pi {
                        lits.push(l.clone());
                    }
                }
                let resolvent = Clause::new(lits).apply(&subst);
                let rule = TraceRule::Resolve {
                    left: given,
                    left_lit: gi,
                    right: partner,
                    right_lit: pi,
                };
                if let Some(done) = self.retain(resolvent, rule, vec![given, partner]) {
                    return Some(done);
                }
            }
        }
        None
    }

    fn factor(&mut self, given: usize) -> Option<Outcome> {
        let g = self.records[given].clause.clone();
        for i in 0..g.lits.len() {
            for j in i + 1..g.lits.len() {
                if g.lits[i].positive != g.lits[j].positive {
                    continue;
                }
                if self.steps >= self.budget {
                    return Some(Outcome::OutOfBudget { steps: self.steps });
                }
                let Some(subst) = unify_atoms(&g.lits[i].atom, &g.lits[j].atom) else {
                    continue;
                };
                self.steps += 1;
                let mut lits = g.lits.clone();
                lits.remove(j);
                let factored = Clause::new(lits).apply(&subst);
                let rule = TraceRule::Factor {
                    premise: given,
                    lit_a: i,
                    lit_b: j,
                };
                if let Some(done) = self.retain(factored, rule, vec![given]) {
                    return Some(done);
                }
            }
        }
        None
    }

    /// Inserts a derived clause unless redundant; reports a finished
    /// goal if it triggers one.
    fn retain(&mut self, clause: Clause, rule: TraceRule, parents: Vec<usize>) -> Option<Outcome> {
        if clause.is_empty() {
            let id = self.push_record(clause, rule, parents);
            return Some(Outcome::Refuted {
                trace: self.trace_of(&[id]),
                steps: self.steps,
            });
        }
        if clause.is_tautology() {
            return None;
        }
        if self
            .active
            .iter()
            .any(|&a| subsumes(&self.records[a].clause, &clause))
        {
            return None;
        }
        let id = self.insert(clause, rule, parents)?;
        self.check_goal(id)
    }

    /// Returns the new id, or None when the clause is an exact duplicate.
    fn insert(&mut self, clause: Clause, rule: TraceRule, parents: Vec<usize>) -> Option<usize> {
        let normalized = clause.normalize();
        if !self.seen.insert(normalized.clone()) {
            return None;
        }
        let id = self.push_record(normalized, rule, parents);
        self.passive
            .push(Reverse((self.records[id].clause.weight(), id)));
        Some(id)
    }

    fn push_record(&mut self, clause: Clause, rule: TraceRule, parents: Vec<usize>) -> usize {
        self.records.push(Record {
            clause,
            rule,
            parents,
        });
        self.records.len() - 1
    }

    fn check_goal(&mut self, id: usize) -> Option<Outcome> {
        let Goal::MembershipCycles { max_len } = self.goal else {
            return None;
        };
        let clause = &self.records[id].clause;
        // (a) all-negative membership clause with an internal cycle
        if !clause.is_empty()
            && clause
                .lits
                .iter()
                .all(|l| !l.positive && l.atom.pred == super::clause::Pred::Member)
        {
            let edges: Vec<(&super::clause::PTerm, &super::clause::PTerm)> = clause
                .lits
                .iter()
                .map(|l| (&l.atom.left, &l.atom.right))
                .collect();
            if let Some(len) = shortest_cycle(&edges, max_len) {
                return Some(Outcome::NegativeCycle {
                    len,
                    trace: self.trace_of(&[id]),
                    steps: self.steps,
                });
            }
        }
        // (b) positive unit membership clauses forming a cycle
        if clause.lits.len() == 1
            && clause.lits[0].positive
            && clause.lits[0].atom.pred == super::clause::Pred::Member
        {
            self.pos_units.push(id);
            let edges: Vec<(&super::clause::PTerm, &super::clause::PTerm)> = self
                .pos_units
                .iter()
                .map(|&u| {
                    let a = &self.records[u].clause.lits[0].atom;
                    (&a.left, &a.right)
                })
                .collect();
            if let Some(len) = shortest_cycle(&edges, max_len) {
                let ids: Vec<usize> = self.pos_units.clone();
                return Some(Outcome::PositiveCycle {
                    len,
                    trace: self.trace_of(&ids),
                    steps: self.steps,
                });
            }
        }
        None
    }

    /// Trace of the derivation DAG restricted to the ancestors of
    /// `roots`, re-indexed consecutively.
    fn trace_of(&self, roots: &[usize]) -> Trace {
        let mut needed = vec![false; self.records.len()];
        let mut stack: Vec<usize> = roots.to_vec();
        while let Some(i) = stack.pop() {
            if needed[i] {
                continue;
            }
            needed[i] = true;
            stack.extend(self.records[i].parents.iter().copied());
        }
        let mut remap = vec![usize::MAX; self.records.len()];
        let mut steps = Vec::new();
        for i in 0..self.records.len() {
            if !needed[i] {
                continue;
            }
            remap[i] = steps.len();
            let rule = match &self.records[i].rule {
                TraceRule::Input { label } => TraceRule::Input {
                    label: label.clone(),
                },
                TraceRule::Resolve {
                    left,
                    left_lit,
                    right,
                    right_lit,
                } => TraceRule::Resolve {
                    left: remap[*left],
                    left_lit: *left_lit,
                    right: remap[*right],
                    right_lit: *right_lit,
                },
                TraceRule::Factor {
                    premise,
                    lit_a,
                    lit_b,
                } => TraceRule::Factor {
                    premise: remap[*premise],
                    lit_a: *lit_a,
                    lit_b: *lit_b,
                },
            };
            steps.push(TraceStep {
                rule,
                clause: self.records[i].clause.to_string(),
            });
        }
        Trace { steps }
    }
}

/// Length of some directed cycle of length <= max_len in the edge list,
/// if any (nodes compared syntactically).
fn shortest_cycle(
    edges: &[(&super::clause::PTerm, &super::clause::PTerm)],
    max_len: usize,
) -> Option<usize> {
    // self-loops first
    if edges.iter().any(|(a, b)| a == b) {
        return Some(1);
    }
    for len in 2..=max_len {
        for (start, _) in edges {
            if has_path(edges, start, start, len) {
                return Some(len);
            }
        }
    }
    None
}

fn has_path(
    edges: &[(&super::clause::PTerm, &super::clause::PTerm)],
    from: &super::clause::PTerm,
    to: &super::clause::PTerm,
    steps: usize,
) -> bool {
    if steps == 0 {
        return from == to;
    }
    edges
        .iter()
        .filter(|(a, _)| *a == from)
        .any(|(_, b)| has_path(edges, b, to, steps - 1))
}
