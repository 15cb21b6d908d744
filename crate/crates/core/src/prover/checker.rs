//! Independent trace verification. The checker carries its own clause
//! parser, unifier and normalization so that replaying a trace does not
//! depend on the code that produced it.

use super::trace::{Trace, TraceRule};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceCheck {
    Valid,
    /// First step that fails to replay; a trace whose steps all replay
    /// but which never reaches falsum reports its length here.
    Invalid { step: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum CTerm {
    Var(u32),
    Const(String),
    Fun(String, Vec<CTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct CLit {
    positive: bool,
    pred: String,
    left: CTerm,
    right: CTerm,
}

type CClause = Vec<CLit>;

/// Replays every inference step of a serialized trace. A valid trace has
/// only replayable steps and ends in the empty clause.
pub fn check_trace(text: &str) -> TraceCheck {
    let Ok(trace) = Trace::parse(text) else {
        return TraceCheck::Invalid { step: 0 };
    };
    check_parsed(&trace)
}

pub fn check_parsed(trace: &Trace) -> TraceCheck {
    if trace.steps.is_empty() {
        return TraceCheck::Invalid { step: 0 };
    }
    let mut clauses: Vec<CClause> = Vec::new();
    for (i, step) in trace.steps.iter().enumerate() {
        let Some(stated) = parse_clause(&step.clause) else {
            return TraceCheck::Invalid { step: i };
        };
        let derived = match &step.rule {
            TraceRule::Input { .. } => Some(stated.clone()),
            TraceRule::Resolve {
                left,
                left_lit,
                right,
                right_lit,
            } => replay_resolve(&clauses, *left, *left_lit, *right, *right_lit),
            TraceRule::Factor {
                premise,
                lit_a,
                lit_b,
            } => replay_factor(&clauses, *premise, *lit_a, *lit_b),
        };
        match derived {
            Some(d) if variant(&d, &stated) => clauses.push(stated),
            _ => return TraceCheck::Invalid { step: i },
        }
    }
    if clauses.last().map(|c| c.is_empty()).unwrap_or(false) {
        TraceCheck::Valid
    } else {
        TraceCheck::Invalid {
            step: trace.steps.len(),
        }
    }
}

fn replay_resolve(
    clauses: &[CClause],
    left: usize,
    left_lit: usize,
    right: usize,
    right_lit: usize,
) -> Option<CClause> {
    let l = clauses.get(left)?.clone();
    let shift = 1 + max_var(&l).unwrap_or(0);
    let r: CClause = clauses.get(right)?.iter().map(|lit| shift_lit(lit, shift)).collect();
    let ll = l.get(left_lit)?;
    let rl = r.get(right_lit)?;
    if ll.positive == rl.positive || ll.pred != rl.pred {
        return None;
    }
    let mut subst = BTreeMap::new();
    unify(&ll.left, &rl.left, &mut subst)?;
    unify(&ll.right, &rl.right, &mut subst)?;
    let mut lits: CClause = Vec::new();
    for (k, lit) in l.iter().enumerate() {
        if k != left_lit {
            lits.push(apply_lit(lit, &subst));
        }
    }
    for (k, lit) in r.iter().enumerate() {
        if k != right_lit {
            lits.push(apply_lit(lit, &subst));
        }
    }
    lits.sort();
    lits.dedup();
    Some(lits)
}

fn replay_factor(clauses: &[CClause], premise: usize, lit_a: usize, lit_b: usize) -> Option<CClause> {
    let c = clauses.get(premise)?.clone();
    if lit_a == lit_b {
        return None;
    }
    let a = c.get(lit_a)?;
    let b = c.get(lit_b)?;
    if a.positive != b.positive || a.pred != b.pred {
        return None;
    }
    let mut subst = BTreeMap::new();
    unify(&a.left, &b.left, &mut subst)?;
    unify(&a.right, &b.right, &mut subst)?;
    let mut lits: CClause = c
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != lit_b)
        .map(|(_, lit)| apply_lit(lit, &subst))
        .collect();
    lits.sort();
    lits.dedup();
    Some(lits)
}

fn max_var(c: &CClause) -> Option<u32> {
    fn term(t: &CTerm) -> Option<u32> {
        match t {
            CTerm::Var(v) => Some(*v),
            CTerm::Const(_) => None,
            CTerm::Fun(_, args) => args.iter().filter_map(term).max(),
        }
    }
    c.iter()
        .flat_map(|l| [term(&l.left), term(&l.right)])
        .flatten()
        .max()
}

fn shift_lit(l: &CLit, by: u32) -> CLit {
    fn term(t: &CTerm, by: u32) -> CTerm {
        match t {
            CTerm::Var(v) => CTerm::Var(v + by),
            CTerm::Const(c) => CTerm::Const(c.clone()),
            CTerm::Fun(f, args) => {
                CTerm::Fun(f.clone(), args.iter().map(|a| term(a, by)).collect())
            }
        }
    }
    CLit {
        positive: l.positive,
        pred: l.pred.clone(),
        left: term(&l.left, by),
        right: term(&l.right, by),
    }
}

fn unify(a: &CTerm, b: &CTerm, subst: &mut BTreeMap<u32, CTerm>) -> Option<()> {
    let a = walk(a, subst);
    let b = walk(b, subst);
    match (&a, &b) {
        (CTerm::Var(u), CTerm::Var(v)) if u == v => Some(()),
        (CTerm::Var(u), t) | (t, CTerm::Var(u)) => {
            if occurs(*u, t, subst) {
                None
            } else {
                subst.insert(*u, t.clone());
                Some(())
            }
        }
        (CTerm::Const(x), CTerm::Const(y)) => (x == y).then_some(()),
        (CTerm::Fun(f, xs), CTerm::Fun(g, ys)) => {
            if f != g || xs.len() != ys.len() {
                return None;
            }
            for (x, y) in xs.iter().zip(ys) {
                unify(x, y, subst)?;
            }
            Some(())
        }
        _ => None,
    }
}

fn walk(t: &CTerm, subst: &BTreeMap<u32, CTerm>) -> CTerm {
    let mut cur = t.clone();
    while let CTerm::Var(v) = cur {
        match subst.get(&v) {
            Some(next) => cur = next.clone(),
            None => return CTerm::Var(v),
        }
    }
    cur
}

fn occurs(v: u32, t: &CTerm, subst: &BTreeMap<u32, CTerm>) -> bool {
    match t {
        CTerm::Var(u) => {
            *u == v
                || subst
                    .get(u)
                    .map(|bound| occurs(v, bound, subst))
                    .unwrap_or(false)
        }
        CTerm::Const(_) => false,
        CTerm::Fun(_, args) => args.iter().any(|a| occurs(v, a, subst)),
    }
}

fn apply_lit(l: &CLit, subst: &BTreeMap<u32, CTerm>) -> CLit {
    fn apply(t: &CTerm, subst: &BTreeMap<u32, CTerm>) -> CTerm {
        match t {
            CTerm::Var(v) => match subst.get(v) {
                Some(bound) => apply(bound, subst),
                None => CTerm::Var(*v),
            },
            CTerm::Const(c) => CTerm::Const(c.clone()),
            CTerm::Fun(f, args) => {
                CTerm::Fun(f.clone(), args.iter().map(|a| apply(a, subst)).collect())
            }
        }
    }
    CLit {
        positive: l.positive,
        pred: l.pred.clone(),
        left: apply(&l.left, subst),
        right: apply(&l.right, subst),
    }
}

/// Alpha-equivalence of clauses as literal sets: a bijective variable
/// renaming matching each literal of `a` to a distinct literal of `b`.
fn variant(a: &CClause, b: &CClause) -> bool {
    let mut a = a.clone();
    let mut b = b.clone();
    a.sort();
    a.dedup();
    b.sort();
    b.dedup();
    if a.len() != b.len() {
        return false;
    }
    fn rename_term(x: &CTerm, y: &CTerm, map: &mut BTreeMap<u32, u32>, rev: &mut BTreeMap<u32, u32>) -> bool {
        match (x, y) {
            (CTerm::Var(u), CTerm::Var(v)) => {
                match (map.get(u), rev.get(v)) {
                    (Some(mapped), _) => mapped == v,
                    (None, Some(_)) => false,
                    (None, None) => {
                        map.insert(*u, *v);
                        rev.insert(*v, *u);
                        true
                    }
                }
            }
            (CTerm::Const(x), CTerm::Const(y)) => x == y,
            (CTerm::Fun(f, xs), CTerm::Fun(g, ys)) => {
                f == g
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys).all(|(x, y)| rename_term(x, y, map, rev))
            }
            _ => false,
        }
    }
    fn go(
        rest: &[CLit],
        b: &CClause,
        used: &mut Vec<bool>,
        map: BTreeMap<u32, u32>,
        rev: BTreeMap<u32, u32>,
    ) -> bool {
        let Some((first, tail)) = rest.split_first() else {
            return true;
        };
        for (i, cand) in b.iter().enumerate() {
            if used[i] || cand.positive != first.positive || cand.pred != first.pred {
                continue;
            }
            let mut m = map.clone();
            let mut r = rev.clone();
            if rename_term(&first.left, &cand.left, &mut m, &mut r)
                && rename_term(&first.right, &cand.right, &mut m, &mut r)
            {
                used[i] = true;
                if go(tail, b, used, m, r) {
                    return true;
                }
                used[i] = false;
            }
        }
        false
    }
    let mut used = vec![false; b.len()];
    go(&a, &b, &mut used, BTreeMap::new(), BTreeMap::new())
}

fn parse_clause(text: &str) -> Option<CClause> {
    let text = text.trim();
    if text == "false" {
        return Some(Vec::new());
    }
    let mut lits = Vec::new();
    for part in text.split(" | ") {
        lits.push(parse_lit(part.trim())?);
    }
    Some(lits)
}

fn parse_lit(text: &str) -> Option<CLit> {
    let (positive, body) = if let Some(stripped) = text.strip_prefix("~(") {
        (false, stripped.strip_suffix(')')?)
    } else {
        (true, text)
    };
    // "<term> in <term>" or "<term> = <term>", with the operator at
    // paren depth zero
    for (pred, op) in [("in", " in "), ("=", " = ")] {
        if let Some((l, r)) = split_top(body, op) {
            return Some(CLit {
                positive,
                pred: pred.to_string(),
                left: parse_term(l.trim())?,
                right: parse_term(r.trim())?,
            });
        }
    }
    None
}

fn split_top<'a>(text: &'a str, op: &str) -> Option<(&'a str, &'a str)> {
    let bytes = text.as_bytes();
    let mut depth = 0usize;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth = depth.saturating_sub(1),
            _ => {
                if depth == 0 && text[i..].starts_with(op) {
                    return Some((&text[..i], &text[i + op.len()..]));
                }
            }
        }
        i += 1;
    }
    None
}

fn parse_term(text: &str) -> Option<CTerm> {
    if let Some(rest) = text.strip_prefix('X') {
        return rest.parse().ok().map(CTerm::Var);
    }
    if let Some(open) = text.find('(') {
        let name = &text[..open];
        let inner = text.get(open + 1..text.len().checked_sub(1)?)?;
        if !text.ends_with(')') || !name.starts_with('s') {
            return None;
        }
        let mut args = Vec::new();
        for part in split_args(inner) {
            args.push(parse_term(part.trim())?);
        }
        return Some(CTerm::Fun(name.to_string(), args));
    }
    if text.starts_with('c') && text.len() > 1 {
        return Some(CTerm::Const(text.to_string()));
    }
    None
}

fn split_args(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    if text.is_empty() {
        return out;
    }
    let bytes = text.as_bytes();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth = depth.saturating_sub(1),
            b',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}
