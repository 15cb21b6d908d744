//! Clause-level data for the saturation engine: terms over variables,
//! constants and Skolem functions, literals over membership/equality,
//! unification and subsumption.

use std::collections::BTreeMap;
use std::fmt;

/// Prover-level term. The formula language has no function symbols, so
/// compound terms only arise from Skolemization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PTerm {
    Var(u32),
    Const(u32),
    Skolem(u32, Vec<PTerm>),
}

impl PTerm {
    pub fn weight(&self) -> u32 {
        match self {
            PTerm::Var(_) | PTerm::Const(_) => 1,
            PTerm::Skolem(_, args) => 1 + args.iter().map(PTerm::weight).sum::<u32>(),
        }
    }

    fn max_var(&self) -> Option<u32> {
        match self {
            PTerm::Var(v) => Some(*v),
            PTerm::Const(_) => None,
            PTerm::Skolem(_, args) => args.iter().filter_map(PTerm::max_var).max(),
        }
    }

    fn shift_vars(&self, by: u32) -> PTerm {
        match self {
            PTerm::Var(v) => PTerm::Var(v + by),
            PTerm::Const(c) => PTerm::Const(*c),
            PTerm::Skolem(s, args) => {
                PTerm::Skolem(*s, args.iter().map(|a| a.shift_vars(by)).collect())
            }
        }
    }

    fn apply(&self, subst: &Subst) -> PTerm {
        match self {
            PTerm::Var(v) => match subst.get(v) {
                Some(t) => t.apply(subst),
                None => PTerm::Var(*v),
            },
            PTerm::Const(c) => PTerm::Const(*c),
            PTerm::Skolem(s, args) => {
                PTerm::Skolem(*s, args.iter().map(|a| a.apply(subst)).collect())
            }
        }
    }

    fn occurs(&self, v: u32, subst: &Subst) -> bool {
        match self {
            PTerm::Var(u) => {
                if *u == v {
                    true
                } else if let Some(t) = subst.get(u) {
                    t.occurs(v, subst)
                } else {
                    false
                }
            }
            PTerm::Const(_) => false,
            PTerm::Skolem(_, args) => args.iter().any(|a| a.occurs(v, subst)),
        }
    }
}

impl fmt::Display for PTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PTerm::Var(v) => write!(f, "X{v}"),
            PTerm::Const(c) => write!(f, "c{c}"),
            PTerm::Skolem(s, args) => {
                write!(f, "s{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pred {
    Member,
    Equal,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub pred: Pred,
    pub left: PTerm,
    pub right: PTerm,
}

impl Atom {
    pub fn member(left: PTerm, right: PTerm) -> Atom {
        Atom {
            pred: Pred::Member,
            left,
            right,
        }
    }

    pub fn equal(left: PTerm, right: PTerm) -> Atom {
        Atom {
            pred: Pred::Equal,
            left,
            right,
        }
    }

    pub fn weight(&self) -> u32 {
        1 + self.left.weight() + self.right.weight()
    }

    fn apply(&self, subst: &Subst) -> Atom {
        Atom {
            pred: self.pred,
            left: self.left.apply(subst),
            right: self.right.apply(subst),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.pred {
            Pred::Member => "in",
            Pred::Equal => "=",
        };
        write!(f, "{} {} {}", self.left, op, self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub positive: bool,
    pub atom: Atom,
}

impl Lit {
    pub fn pos(atom: Atom) -> Lit {
        Lit {
            positive: true,
            atom,
        }
    }

    pub fn neg(atom: Atom) -> Lit {
        Lit {
            positive: false,
            atom,
        }
    }

    pub fn weight(&self) -> u32 {
        self.atom.weight()
    }

    fn apply(&self, subst: &Subst) -> Lit {
        Lit {
            positive: self.positive,
            atom: self.atom.apply(subst),
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "~({})", self.atom)
        }
    }
}

/// A clause: a set of literals, kept sorted and deduplicated. The empty
/// clause is falsum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub lits: Vec<Lit>,
}

impl Clause {
    pub fn new(mut lits: Vec<Lit>) -> Clause {
        lits.sort();
        lits.dedup();
        Clause { lits }
    }

    pub fn empty() -> Clause {
        Clause { lits: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_tautology(&self) -> bool {
        self.lits.iter().any(|l| {
            l.positive
                && self
                    .lits
                    .iter()
                    .any(|m| !m.positive && m.atom == l.atom)
        })
    }

    pub fn weight(&self) -> u32 {
        self.lits.iter().map(Lit::weight).sum()
    }

    pub fn max_var(&self) -> Option<u32> {
        self.lits
            .iter()
            .flat_map(|l| [l.atom.left.max_var(), l.atom.right.max_var()])
            .flatten()
            .max()
    }

    pub fn shift_vars(&self, by: u32) -> Clause {
        Clause {
            lits: self
                .lits
                .iter()
                .map(|l| Lit {
                    positive: l.positive,
                    atom: Atom {
                        pred: l.atom.pred,
                        left: l.atom.left.shift_vars(by),
                        right: l.atom.right.shift_vars(by),
                    },
                })
                .collect(),
        }
    }

    pub fn apply(&self, subst: &Subst) -> Clause {
        Clause::new(self.lits.iter().map(|l| l.apply(subst)).collect())
    }

    /// Renames variables to 0,1,… in order of first occurrence, for
    /// duplicate detection.
    pub fn normalize(&self) -> Clause {
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        fn norm_term(t: &PTerm, map: &mut BTreeMap<u32, u32>) -> PTerm {
            match t {
                PTerm::Var(v) => {
                    let next = map.len() as u32;
                    PTerm::Var(*map.entry(*v).or_insert(next))
                }
                PTerm::Const(c) => PTerm::Const(*c),
                PTerm::Skolem(s, args) => {
                    PTerm::Skolem(*s, args.iter().map(|a| norm_term(a, map)).collect())
                }
            }
        }
        let lits = self
            .lits
            .iter()
            .map(|l| Lit {
                positive: l.positive,
                atom: Atom {
                    pred: l.atom.pred,
                    left: norm_term(&l.atom.left, &mut map),
                    right: norm_term(&l.atom.right, &mut map),
                },
            })
            .collect();
        Clause { lits }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lits.is_empty() {
            return f.write_str("false");
        }
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

pub type Subst = BTreeMap<u32, PTerm>;

pub fn unify_atoms(a: &Atom, b: &Atom) -> Option<Subst> {
    if a.pred != b.pred {
        return None;
    }
    let mut subst = Subst::new();
    if unify(&a.left, &b.left, &mut subst) && unify(&a.right, &b.right, &mut subst) {
        Some(subst)
    } else {
        None
    }
}

fn unify(a: &PTerm, b: &PTerm, subst: &mut Subst) -> bool {
    let a = walk(a, subst);
    let b = walk(b, subst);
    match (&a, &b) {
        (PTerm::Var(u), PTerm::Var(v)) if u == v => true,
        (PTerm::Var(u), t) | (t, PTerm::Var(u)) => {
            if t.occurs(*u, subst) {
                false
            } else {
                subst.insert(*u, t.clone());
                true
            }
        }
        (PTerm::Const(a), PTerm::Const(b)) => a == b,
        (PTerm::Skolem(s, xs), PTerm::Skolem(t, ys)) => {
            s == t && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify(x, y, subst))
        }
        _ => false,
    }
}

fn walk(t: &PTerm, subst: &Subst) -> PTerm {
    let mut cur = t.clone();
    while let PTerm::Var(v) = cur {
        match subst.get(&v) {
            Some(next) => cur = next.clone(),
            None => return PTerm::Var(v),
        }
    }
    cur
}

/// Matching (one-sided unification): find σ with `pattern`σ == `target`.
fn match_term(pattern: &PTerm, target: &PTerm, subst: &mut Subst) -> bool {
    match (pattern, target) {
        (PTerm::Var(v), t) => match subst.get(v) {
            Some(bound) => bound == t,
            None => {
                subst.insert(*v, t.clone());
                true
            }
        },
        (PTerm::Const(a), PTerm::Const(b)) => a == b,
        (PTerm::Skolem(s, xs), PTerm::Skolem(t, ys)) => {
            s == t && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, subst))
        }
        _ => false,
    }
}

/// True if `general` subsumes `specific`: some substitution maps every
/// literal of `general` onto a literal of `specific`.
pub fn subsumes(general: &Clause, specific: &Clause) -> bool {
    if general.lits.len() > specific.lits.len() {
        return false;
    }
    fn go(gen: &[Lit], specific: &Clause, subst: Subst) -> bool {
        let Some((first, rest)) = gen.split_first() else {
            return true;
        };
        for cand in &specific.lits {
            if cand.positive != first.positive || cand.atom.pred != first.atom.pred {
                continue;
            }
            let mut s = subst.clone();
            if match_term(&first.atom.left, &cand.atom.left, &mut s)
                && match_term(&first.atom.right, &cand.atom.right, &mut s)
                && go(rest, specific, s)
            {
                return true;
            }
        }
        false
    }
    go(&general.lits, specific, Subst::new())
}
