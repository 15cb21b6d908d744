//! Proof traces: a replayable record of inferences, one per step, with a
//! line-oriented text serialization.
//!
//! Format (`nact-trace v1`): one step per line,
//!
//! ```text
//! <idx> input <label> ; <clause>
//! <idx> resolve <left> <left-lit> <right> <right-lit> ; <clause>
//! <idx> factor <premise> <lit-a> <lit-b> ; <clause>
//! ```
//!
//! Clauses print as literals joined by `" | "`; the empty clause prints
//! as `false`.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceRule {
    Input {
        label: String,
    },
    Resolve {
        left: usize,
        left_lit: usize,
        right: usize,
        right_lit: usize,
    },
    Factor {
        premise: usize,
        lit_a: usize,
        lit_b: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: TraceRule,
    /// Clause in the frozen text syntax.
    pub clause: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceParseError {
    #[error("missing trace header")]
    MissingHeader,
    #[error("malformed trace line {0}")]
    Malformed(usize),
}

impl Trace {
    pub fn serialize(&self) -> String {
        let mut out = String::from("nact-trace v1\n");
        for (i, step) in self.steps.iter().enumerate() {
            match &step.rule {
                TraceRule::Input { label } => {
                    out.push_str(&format!("{i} input {label} ; {}\n", step.clause));
                }
                TraceRule::Resolve {
                    left,
                    left_lit,
                    right,
                    right_lit,
                } => {
                    out.push_str(&format!(
                        "{i} resolve {left} {left_lit} {right} {right_lit} ; {}\n",
                        step.clause
                    ));
                }
                TraceRule::Factor {
                    premise,
                    lit_a,
                    lit_b,
                } => {
                    out.push_str(&format!(
                        "{i} factor {premise} {lit_a} {lit_b} ; {}\n",
                        step.clause
                    ));
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Trace, TraceParseError> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == "nact-trace v1" => {}
            _ => return Err(TraceParseError::MissingHeader),
        }
        let mut steps = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (head, clause) = line
                .split_once(" ; ")
                .ok_or(TraceParseError::Malformed(lineno + 2))?;
            let mut parts = head.split_whitespace();
            let bad = || TraceParseError::Malformed(lineno + 2);
            let idx: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if idx != steps.len() {
                return Err(bad());
            }
            let rule = match parts.next().ok_or_else(bad)? {
                "input" => TraceRule::Input {
                    label: parts.next().ok_or_else(bad)?.to_string(),
                },
                "resolve" => {
                    let mut num = || -> Result<usize, TraceParseError> {
                        parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())
                    };
                    TraceRule::Resolve {
                        left: num()?,
                        left_lit: num()?,
                        right: num()?,
                        right_lit: num()?,
                    }
                }
                "factor" => {
                    let mut num = || -> Result<usize, TraceParseError> {
                        parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())
                    };
                    TraceRule::Factor {
                        premise: num()?,
                        lit_a: num()?,
                        lit_b: num()?,
                    }
                }
                _ => return Err(bad()),
            };
            steps.push(TraceStep {
                rule,
                clause: clause.trim().to_string(),
            });
        }
        Ok(Trace { steps })
    }

    pub fn ends_in_falsum(&self) -> bool {
        self.steps.last().map(|s| s.clause == "false").unwrap_or(false)
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}
