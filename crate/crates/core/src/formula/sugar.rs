//! Elimination of the sugar layer (`0`, `{t}`, `t cup t`) by first-order
//! definitions. Each rewrite replaces one innermost sugar occurrence in
//! an atom `... REL ...` by a fresh existential:
//!
//! * `0`:        `exists z . (forall w . w notin z) & A[z]`
//! * `{t}`:      `exists z . (forall w . w in z <-> w = t) & A[z]`
//! * `t cup u`:  `exists z . (forall w . w in z <-> w in t | w in u) & A[z]`
//!
//! with `<->` spelled out as two implications. Comprehension terms are
//! not sugar and survive expansion untouched.

use super::{canonicalize, Formula, Term, Var};

/// Expands all sugar terms and returns the canonicalized result in the
/// pure membership/equality language. Sugar-free formulas come back
/// unchanged (up to canonicalization).
pub fn expand_sugar(f: &Formula) -> Formula {
    let mut current = f.clone();
    let mut fresh = next_free_index(&current);
    while !current.is_sugar_free() {
        current = expand_one(&current, &mut fresh);
    }
    canonicalize(&current)
}

fn next_free_index(f: &Formula) -> u32 {
    // Start fresh indices above everything in sight, bound or free.
    fn scan_term(t: &Term, max: &mut u32) {
        match t {
            Term::Var(Var::Indexed(i)) => *max = (*max).max(*i),
            Term::Var(_) | Term::Empty => {}
            Term::Singleton(t) => scan_term(t, max),
            Term::Union(a, b) => {
                scan_term(a, max);
                scan_term(b, max);
            }
            Term::Comprehension(_, v, body) => {
                if let Var::Indexed(i) = v {
                    *max = (*max).max(*i);
                }
                scan(body, max);
            }
        }
    }
    fn scan(f: &Formula, max: &mut u32) {
        match f {
            Formula::Verum | Formula::Falsum => {}
            Formula::Member(a, b) | Formula::Equal(a, b) => {
                scan_term(a, max);
                scan_term(b, max);
            }
            Formula::Mirimanoff(t) => scan_term(t, max),
            Formula::Not(a) => scan(a, max),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                scan(a, max);
                scan(b, max);
            }
            Formula::Exists(v, a) | Formula::Forall(v, a) => {
                if let Var::Indexed(i) = v {
                    *max = (*max).max(*i);
                }
                scan(a, max);
            }
        }
    }
    let mut max = 0;
    scan(f, &mut max);
    max + 1
}

fn expand_one(f: &Formula, fresh: &mut u32) -> Formula {
    match f {
        Formula::Verum | Formula::Falsum => f.clone(),
        Formula::Member(a, b) | Formula::Equal(a, b) => {
            let relation = |l: Term, r: Term| match f {
                Formula::Member(_, _) => Formula::Member(l, r),
                _ => Formula::Equal(l, r),
            };
            if let Some(rewritten) = expand_atom(a, b, &relation, fresh) {
                rewritten
            } else {
                // no term-level sugar left; descend into comprehension bodies
                relation(expand_in_bodies(a, fresh), expand_in_bodies(b, fresh))
            }
        }
        Formula::Mirimanoff(t) => Formula::Mirimanoff(expand_in_bodies(t, fresh)),
        Formula::Not(x) => Formula::not(expand_one(x, fresh)),
        Formula::And(a, b) => Formula::and(expand_one(a, fresh), expand_one(b, fresh)),
        Formula::Or(a, b) => Formula::or(expand_one(a, fresh), expand_one(b, fresh)),
        Formula::Implies(a, b) => {
            Formula::implies(expand_one(a, fresh), expand_one(b, fresh))
        }
        Formula::Exists(v, a) => Formula::exists(*v, expand_one(a, fresh)),
        Formula::Forall(v, a) => Formula::forall(*v, expand_one(a, fresh)),
    }
}

fn expand_in_bodies(t: &Term, fresh: &mut u32) -> Term {
    match t {
        Term::Var(_) | Term::Empty => t.clone(),
        Term::Singleton(inner) => Term::Singleton(Box::new(expand_in_bodies(inner, fresh))),
        Term::Union(a, b) => Term::Union(
            Box::new(expand_in_bodies(a, fresh)),
            Box::new(expand_in_bodies(b, fresh)),
        ),
        Term::Comprehension(op, v, body) => {
            Term::Comprehension(*op, *v, Box::new(expand_one(body, fresh)))
        }
    }
}

/// Rewrites one sugar occurrence of the atom `REL(lhs, rhs)` if there is
/// any. Picks the leftmost-innermost occurrence so definition bodies are
/// already sugar-free when copied.
fn expand_atom(
    lhs: &Term,
    rhs: &Term,
    relation: impl Fn(Term, Term) -> Formula,
    fresh: &mut u32,
) -> Option<Formula> {
    let (side_is_lhs, path) = find_sugar(lhs)
        .map(|p| (true, p))
        .or_else(|| find_sugar(rhs).map(|p| (false, p)))?;
    let side = if side_is_lhs { lhs } else { rhs };
    let sugar = follow(side, &path);

    let z = Var::Indexed(*fresh);
    *fresh += 1;
    let w = Var::Indexed(*fresh);
    *fresh += 1;

    let definition = match sugar {
        Term::Empty => Formula::forall(w, Formula::not_member(w, z)),
        Term::Singleton(t) => Formula::forall(
            w,
            Formula::iff(
                Formula::member(w, z),
                Formula::Equal(Term::Var(w), (**t).clone()),
            ),
        ),
        Term::Union(a, b) => Formula::forall(
            w,
            Formula::iff(
                Formula::member(w, z),
                Formula::or(
                    Formula::Member(Term::Var(w), (**a).clone()),
                    Formula::Member(Term::Var(w), (**b).clone()),
                ),
            ),
        ),
        _ => unreachable!("find_sugar returns sugar constructors only"),
    };

    let replaced = replace(side, &path, Term::Var(z));
    let atom = if side_is_lhs {
        relation(replaced, rhs.clone())
    } else {
        relation(lhs.clone(), replaced)
    };
    Some(Formula::exists(z, Formula::and(definition, atom)))
}

/// Path (child indices) to the leftmost-innermost sugar constructor.
fn find_sugar(t: &Term) -> Option<Vec<usize>> {
    match t {
        Term::Var(_) => None,
        Term::Comprehension(_, _, _) => None,
        Term::Empty => Some(Vec::new()),
        Term::Singleton(inner) => {
            if let Some(mut p) = find_sugar(inner) {
                p.insert(0, 0);
                Some(p)
            } else {
                Some(Vec::new())
            }
        }
        Term::Union(a, b) => {
            if let Some(mut p) = find_sugar(a) {
                p.insert(0, 0);
                Some(p)
            } else if let Some(mut p) = find_sugar(b) {
                p.insert(0, 1);
                Some(p)
            } else {
                Some(Vec::new())
            }
        }
    }
}

fn follow<'a>(t: &'a Term, path: &[usize]) -> &'a Term {
    match path.split_first() {
        None => t,
        Some((idx, rest)) => match (t, idx) {
            (Term::Singleton(inner), 0) => follow(inner, rest),
            (Term::Union(a, _), 0) => follow(a, rest),
            (Term::Union(_, b), 1) => follow(b, rest),
            _ => unreachable!("path built by find_sugar"),
        },
    }
}

fn replace(t: &Term, path: &[usize], with: Term) -> Term {
    match path.split_first() {
        None => with,
        Some((idx, rest)) => match (t, idx) {
            (Term::Singleton(inner), 0) => {
                Term::Singleton(Box::new(replace(inner, rest, with)))
            }
            (Term::Union(a, b), 0) => {
                Term::Union(Box::new(replace(a, rest, with)), b.clone())
            }
            (Term::Union(a, b), 1) => {
                Term::Union(a.clone(), Box::new(replace(b, rest, with)))
            }
            _ => unreachable!("path built by find_sugar"),
        },
    }
}
