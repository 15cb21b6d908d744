//! Deterministic generation of set-constituting formulas (GL1, GL2,
//! GL3), ordered by length.
//!
//! The stream opens with the fixed seed block — Verum, Falsum, `x in x`,
//! `x notin x` and the four single-quantifier membership forms, in that
//! order — and then continues with every further canonical formula of
//! the generation fragment, ordered by (length, bound-variable count,
//! canonical text). Within the post-seed stream lengths are
//! non-decreasing.
//!
//! The fragment is frozen for reproducibility: membership atoms over the
//! available variables, negation, binary conjunction, and existential
//! quantification introducing one fresh variable that must occur in a
//! membership atom together with another variable. Disjunction,
//! implication and equality atoms are not generated (the first two are
//! expressible, equality enters only through the axiom catalog).
//! Formulas are deduplicated modulo canonicalization, so alpha-variants
//! and anything that simplifies to an earlier formula are crossed out.
//!
//! GL2 suppresses primitive-pathological formulas at emission (their
//! negations stay, and composites built from them are unaffected). GL3
//! additionally admits parameters `b1..bP`; a formula is emitted only
//! when its parameter set is an initial segment `b1..bj`, so each new
//! parameter index enters the stream once, at the first length that
//! needs it.

use crate::formula::{self, canonicalize, print, Formula, Term, Var};
use crate::pathology::detect_prim_patho;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenMode {
    Gl1,
    Gl2,
    Gl3,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GenConfig {
    pub mode: GenMode,
    pub max_length: u32,
    /// Budget of distinct quantified variables a formula may use.
    pub max_bound_vars: u32,
    /// Parameter budget; must be 0 outside GL3.
    pub max_params: u32,
    /// Hard cap on the number of emitted formulas.
    pub max_emitted: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("GL1/GL2 admit no parameters (max_params = {0})")]
    ParamsOutsideGl3(u32),
    #[error("stream exhausted at max length {0}")]
    Exhausted(u32),
    #[error("resource limit exceeded: more than {0} formulas emitted")]
    ResourceLimit(usize),
}

impl GenConfig {
    pub fn gl1(max_length: u32, max_bound_vars: u32) -> GenConfig {
        GenConfig {
            mode: GenMode::Gl1,
            max_length,
            max_bound_vars,
            max_params: 0,
            max_emitted: None,
        }
    }

    pub fn gl2(max_length: u32, max_bound_vars: u32) -> GenConfig {
        GenConfig {
            mode: GenMode::Gl2,
            ..GenConfig::gl1(max_length, max_bound_vars)
        }
    }

    pub fn gl3(max_length: u32, max_bound_vars: u32, max_params: u32) -> GenConfig {
        GenConfig {
            mode: GenMode::Gl3,
            max_params,
            ..GenConfig::gl1(max_length, max_bound_vars)
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.mode != GenMode::Gl3 && self.max_params != 0 {
            return Err(GenError::ParamsOutsideGl3(self.max_params));
        }
        Ok(())
    }
}

/// The eight seed formulas in their fixed order.
pub fn seeds() -> Vec<Formula> {
    vec![
        Formula::Verum,
        Formula::Falsum,
        Formula::member(Var::X, Var::X),
        Formula::not_member(Var::X, Var::X),
        Formula::exists(Var::Indexed(1), Formula::member(Var::Indexed(1), Var::X)),
        Formula::exists(Var::Indexed(1), Formula::not_member(Var::Indexed(1), Var::X)),
        Formula::exists(Var::Indexed(1), Formula::member(Var::X, Var::Indexed(1))),
        Formula::exists(Var::Indexed(1), Formula::not_member(Var::X, Var::Indexed(1))),
    ]
}

/// Axiom-list filter for the Moon-family systems: a formula survives
/// only if neither it nor its (canonicalized) negation is primitive
/// pathological, so the complement to every listed set is listed too.
pub fn list1_axiom_filter(f: &Formula) -> bool {
    if detect_prim_patho(f).is_some() {
        return false;
    }
    let negated = canonicalize(&Formula::not(f.clone()));
    detect_prim_patho(&negated).is_none()
}

/// Streaming generator. Emission order is a pure function of the config.
pub struct Generator {
    config: GenConfig,
    /// seed block still to be emitted
    seed_queue: std::collections::VecDeque<Formula>,
    /// all intermediates ever built, keyed by canonical text
    seen: HashSet<String>,
    /// open and closed intermediates by length (index 0 = length 1)
    buckets: Vec<Vec<Formula>>,
    /// emissions for the current length, reversed for popping
    pending: Vec<Formula>,
    emitted_texts: HashSet<String>,
    next_length: u32,
    emitted_count: usize,
}

impl Generator {
    pub fn new(config: GenConfig) -> Result<Generator, GenError> {
        config.validate()?;
        let mut seed_queue = std::collections::VecDeque::new();
        let mut emitted_texts = HashSet::new();
        for s in seeds() {
            if formula::length(&s) > config.max_length {
                continue;
            }
            if config.mode != GenMode::Gl1 && detect_prim_patho(&s).is_some() {
                continue;
            }
            emitted_texts.insert(print(&s));
            seed_queue.push_back(s);
        }
        Ok(Generator {
            config,
            seed_queue,
            seen: HashSet::new(),
            buckets: Vec::new(),
            pending: Vec::new(),
            emitted_texts,
            next_length: 1,
            emitted_count: 0,
        })
    }

    pub fn config(&self) -> &GenConfig {
        &self.config
    }

    /// Next formula of the stream, or an error once the stream is
    /// exhausted at the configured maximum length.
    pub fn next_formula(&mut self) -> Result<Formula, GenError> {
        self.next_opt()
            .ok_or(GenError::Exhausted(self.config.max_length))
    }

    fn next_opt(&mut self) -> Option<Formula> {
        if let Some(s) = self.seed_queue.pop_front() {
            self.emitted_count += 1;
            return Some(s);
        }
        loop {
            if let Some(f) = self.pending.pop() {
                self.emitted_count += 1;
                return Some(f);
            }
            if self.next_length > self.config.max_length {
                return None;
            }
            let len = self.next_length;
            self.next_length += 1;
            self.build_bucket(len);
            let mut emissions: Vec<Formula> = self.buckets[(len - 1) as usize]
                .iter()
                .filter(|f| self.emittable(f))
                .filter(|f| !self.emitted_texts.contains(&print(f)))
                .cloned()
                .collect();
            emissions.sort_by_key(|f| (f.bound_var_count(), print(f)));
            for f in &emissions {
                self.emitted_texts.insert(print(f));
            }
            emissions.reverse();
            self.pending = emissions;
        }
    }

    fn emittable(&self, f: &Formula) -> bool {
        let free = f.free_vars();
        let mut params = Vec::new();
        for v in &free {
            match v {
                Var::X => {}
                Var::Indexed(_) => return false,
                Var::Param(i) => params.push(*i),
            }
        }
        // parameters must form an initial segment b1..bj
        params.sort_unstable();
        for (k, p) in params.iter().enumerate() {
            if *p != (k + 1) as u32 {
                return false;
            }
        }
        if self.config.mode != GenMode::Gl1 && detect_prim_patho(f).is_some() {
            return false;
        }
        true
    }

    /// Variable pool for atoms: x, the quantifiable slots, and (GL3)
    /// parameters.
    fn var_pool(&self) -> Vec<Var> {
        let mut pool = vec![Var::X];
        for i in 1..=self.config.max_bound_vars {
            pool.push(Var::Indexed(i));
        }
        for i in 1..=self.config.max_params {
            pool.push(Var::Param(i));
        }
        pool
    }

    fn build_bucket(&mut self, len: u32) {
        debug_assert_eq!(self.buckets.len() as u32, len - 1);
        let mut bucket: Vec<Formula> = Vec::new();
        let mut candidates: Vec<Formula> = Vec::new();

        if len == 1 {
            candidates.push(Formula::Verum);
            candidates.push(Formula::Falsum);
            let pool = self.var_pool();
            for l in &pool {
                for r in &pool {
                    candidates.push(Formula::member(*l, *r));
                }
            }
        } else {
            // negation of a shorter formula
            for f in &self.buckets[(len - 2) as usize] {
                candidates.push(Formula::not(f.clone()));
            }
            // conjunction of two shorter formulas
            for a in 1..len - 1 {
                let b = len - 1 - a;
                if b < a {
                    break;
                }
                for (i, l) in self.buckets[(a - 1) as usize].iter().enumerate() {
                    let rs = &self.buckets[(b - 1) as usize];
                    let start = if a == b { i } else { 0 };
                    for r in &rs[start..] {
                        candidates.push(Formula::and(l.clone(), r.clone()));
                    }
                }
            }
            // existential introduction over an open slot
            for f in &self.buckets[(len - 2) as usize] {
                for slot in quantifiable_slots(f) {
                    candidates.push(Formula::exists(slot, f.clone()));
                }
            }
        }

        for c in candidates {
            let canonical = canonicalize(&c);
            if formula::length(&canonical) != len {
                continue; // simplified away; produced at its own length
            }
            if canonical.bound_var_count() > self.config.max_bound_vars {
                continue;
            }
            // an open slot still needs a future binder node
            let open = open_slots(&canonical);
            if len + open as u32 > self.config.max_length {
                continue;
            }
            if canonical.bound_var_count() + open as u32 > self.config.max_bound_vars {
                continue;
            }
            let key = print(&canonical);
            if self.seen.insert(key) {
                bucket.push(canonical);
            }
        }
        self.buckets.push(bucket);
    }
}

impl Iterator for Generator {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        self.next_opt()
    }
}

fn open_slots(f: &Formula) -> usize {
    f.free_vars()
        .iter()
        .filter(|v| matches!(v, Var::Indexed(_)))
        .count()
}

/// Free numbered variables that may be bound next: the new quantifier
/// must capture a variable occurring in a membership atom together with
/// a different variable.
fn quantifiable_slots(f: &Formula) -> Vec<Var> {
    let mut linked = Vec::new();
    collect_linked(f, &mut linked);
    let free = f.free_vars();
    let mut out: Vec<Var> = free
        .into_iter()
        .filter(|v| matches!(v, Var::Indexed(_)))
        .filter(|v| linked.contains(v))
        .collect();
    out.sort();
    out
}

fn collect_linked(f: &Formula, out: &mut Vec<Var>) {
    match f {
        Formula::Member(Term::Var(a), Term::Var(b)) if a != b => {
            out.push(*a);
            out.push(*b);
        }
        Formula::Member(_, _)
        | Formula::Equal(_, _)
        | Formula::Mirimanoff(_)
        | Formula::Verum
        | Formula::Falsum => {}
        Formula::Not(a) => collect_linked(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_linked(a, out);
            collect_linked(b, out);
        }
        Formula::Exists(_, a) | Formula::Forall(_, a) => collect_linked(a, out),
    }
}

/// Materializes the stream up to the configured maximum length.
pub fn enumerate_up_to(config: &GenConfig) -> Result<Vec<Formula>, GenError> {
    let cap = config.max_emitted.unwrap_or(usize::MAX);
    let mut gen = Generator::new(config.clone())?;
    let mut out = Vec::new();
    while let Some(f) = gen.next_opt() {
        if out.len() >= cap {
            return Err(GenError::ResourceLimit(cap));
        }
        out.push(f);
    }
    Ok(out)
}
