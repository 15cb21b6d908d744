//! Stratification: decides whether the variables of a formula admit
//! integer levels with `level(v) = level(u) + 1` across every membership
//! atom `u in v` and equal levels across every equality atom, and
//! whether a formula qualifies for closed comprehension (stratified with
//! `x` as its only free variable).
//!
//! The constraint system is a difference-constraint graph; the formula
//! is stratified iff no cycle has nonzero total weight. On success
//! levels are normalized per connected component to minimum 0; on
//! failure a cycle witness is produced whose constraints sum to a
//! nonzero offset.

use crate::formula::{canonicalize, Formula, Term, Var};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StratifyError {
    #[error("formula contains sugar terms; expand before stratifying")]
    SugarPresent,
    #[error("formula contains comprehension terms")]
    ComprehensionPresent,
}

/// One membership or equality constraint, oriented as traversed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessStep {
    pub from: Var,
    pub to: Var,
    /// Level shift imposed on `to` relative to `from` (+1/-1 across a
    /// membership atom depending on orientation, 0 across equality).
    pub shift: i64,
    /// `u in v` or `u = v` as written in the formula.
    pub atom: (Var, Rel, Var),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Member,
    Equal,
}

/// A closed walk whose constraints are unsatisfiable over the integers:
/// the shifts sum to a nonzero value while start and end variable
/// coincide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub steps: Vec<WitnessStep>,
}

impl CycleWitness {
    pub fn total_shift(&self) -> i64 {
        self.steps.iter().map(|s| s.shift).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StratResult {
    Stratified(BTreeMap<Var, i64>),
    Unstratified(CycleWitness),
}

impl StratResult {
    pub fn is_stratified(&self) -> bool {
        matches!(self, StratResult::Stratified(_))
    }
}

/// Decides stratification. Expects a sugar-free formula without
/// comprehension subterms; variable identity is by name, which is
/// unambiguous on canonical formulas (binders are renamed apart).
pub fn stratify(f: &Formula) -> Result<StratResult, StratifyError> {
    if !f.is_sugar_free() {
        return Err(StratifyError::SugarPresent);
    }
    if f.has_comprehension() {
        return Err(StratifyError::ComprehensionPresent);
    }
    let mut atoms = Vec::new();
    collect_atoms(f, &mut atoms);

    let mut nodes: Vec<Var> = Vec::new();
    for (u, _, v) in &atoms {
        if !nodes.contains(u) {
            nodes.push(*u);
        }
        if !nodes.contains(v) {
            nodes.push(*v);
        }
    }
    nodes.sort();

    // adjacency: (neighbor, shift, atom index, forward?)
    let mut adj: BTreeMap<Var, Vec<(Var, i64, usize)>> = BTreeMap::new();
    for (i, (u, rel, v)) in atoms.iter().enumerate() {
        let w = match rel {
            Rel::Member => 1,
            Rel::Equal => 0,
        };
        adj.entry(*u).or_default().push((*v, w, i));
        adj.entry(*v).or_default().push((*u, -w, i));
    }

    let mut levels: BTreeMap<Var, i64> = BTreeMap::new();
    let mut parent: BTreeMap<Var, (Var, usize, i64)> = BTreeMap::new();
    for root in &nodes {
        if levels.contains_key(root) {
            continue;
        }
        let mut component = vec![*root];
        levels.insert(*root, 0);
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(*root);
        while let Some(u) = queue.pop_front() {
            let lu = levels[&u];
            for (v, shift, atom_idx) in adj.get(&u).cloned().unwrap_or_default() {
                match levels.get(&v) {
                    None => {
                        levels.insert(v, lu + shift);
                        parent.insert(v, (u, atom_idx, shift));
                        component.push(v);
                        queue.push_back(v);
                    }
                    Some(&lv) => {
                        if lv != lu + shift {
                            return Ok(StratResult::Unstratified(build_witness(
                                &atoms, &parent, u, v, atom_idx, shift,
                            )));
                        }
                    }
                }
            }
        }
        // normalize each component so its minimum level is 0
        let min = component.iter().map(|v| levels[v]).min().unwrap_or(0);
        for v in component {
            *levels.get_mut(&v).unwrap() -= min;
        }
    }
    Ok(StratResult::Stratified(levels))
}

/// Eligibility for closed comprehension: stratified and `x` is exactly
/// the free-variable set (no parameters, no open numbered variables).
/// Total: sugar or comprehension subterms simply disqualify.
pub fn is_nfum_closed_eligible(f: &Formula) -> bool {
    if !f.is_sugar_free() || f.has_comprehension() {
        return false;
    }
    let canonical = canonicalize(f);
    let free = canonical.free_vars();
    if free.len() != 1 || !free.contains(&Var::X) {
        return false;
    }
    matches!(stratify(&canonical), Ok(StratResult::Stratified(_)))
}

fn collect_atoms(f: &Formula, out: &mut Vec<(Var, Rel, Var)>) {
    match f {
        Formula::Verum | Formula::Falsum | Formula::Mirimanoff(_) => {}
        Formula::Member(Term::Var(a), Term::Var(b)) => out.push((*a, Rel::Member, *b)),
        Formula::Equal(Term::Var(a), Term::Var(b)) => out.push((*a, Rel::Equal, *b)),
        Formula::Member(_, _) | Formula::Equal(_, _) => {
            unreachable!("sugar and comprehension rejected before collection")
        }
        Formula::Not(a) => collect_atoms(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
        Formula::Exists(_, a) | Formula::Forall(_, a) => collect_atoms(a, out),
    }
}

/// Reconstructs the offending closed walk from BFS parent pointers: the
/// tree path from `v` back to `u` plus the conflicting edge `u -> v`.
fn build_witness(
    atoms: &[(Var, Rel, Var)],
    parent: &BTreeMap<Var, (Var, usize, i64)>,
    u: Var,
    v: Var,
    conflict_atom: usize,
    conflict_shift: i64,
) -> CycleWitness {
    let path_to_root = |mut n: Var| {
        let mut path = vec![n];
        while let Some((p, _, _)) = parent.get(&n) {
            n = *p;
            path.push(n);
        }
        path
    };
    let pu = path_to_root(u);
    let pv = path_to_root(v);
    // lowest common ancestor: first shared node
    let lca = *pu
        .iter()
        .find(|n| pv.contains(n))
        .expect("u and v share a BFS tree root");

    let mut steps = Vec::new();
    // walk lca -> u along tree edges (forward)
    let mut chain_u: Vec<Var> = pu.iter().copied().take_while(|n| *n != lca).collect();
    chain_u.push(lca);
    chain_u.reverse(); // lca .. u
    for pair in chain_u.windows(2) {
        let (from, to) = (pair[0], pair[1]);
        let (_, atom_idx, shift) = parent[&to];
        steps.push(step(atoms, atom_idx, from, to, shift));
    }
    // conflicting edge u -> v
    steps.push(step(atoms, conflict_atom, u, v, conflict_shift));
    // walk v -> lca along tree edges (backward)
    let mut n = v;
    while n != lca {
        let (p, atom_idx, shift) = parent[&n];
        steps.push(step(atoms, atom_idx, n, p, -shift));
        n = p;
    }
    CycleWitness { steps }
}

fn step(atoms: &[(Var, Rel, Var)], idx: usize, from: Var, to: Var, shift: i64) -> WitnessStep {
    WitnessStep {
        from,
        to,
        shift,
        atom: atoms[idx],
    }
}
