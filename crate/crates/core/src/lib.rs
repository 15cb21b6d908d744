//! A computational workbench for Naïve Axiomatic Class Theory (NACT).
//!
//! The crate enumerates set-constituting formulas, classifies them
//! (stratified / pathological / consistent-candidate), attempts bounded
//! refutations of sethood assumptions, searches finite structures for
//! positive witnesses, and maintains the non-monotonic axiom ledgers of
//! the NACT system family (Moon, MoonW, Star, Sun, SunW).

pub mod campaign;
pub mod catalog;
pub mod formula;
pub mod generator;
pub mod ledger;
pub mod model;
pub mod pathology;
pub mod prover;
pub mod stratify;

pub use formula::{canonicalize, expand_sugar, parse, parse_open, print, Formula, Term, Var};
