//! Parser for the ASCII formula grammar.
//!
//! `not` binds tighter than `&`, which binds tighter than `|`, which
//! binds tighter than `->`; quantifier scope extends maximally right.
//! `t notin t` and `t != t` parse as negated atoms.

use super::{Formula, SetOperator, Term, Var};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound variable {name} at byte {pos}")]
    UnboundVariable { pos: usize, name: String },
}

/// Parses a formula and checks scoping: every numbered variable must be
/// bound by an enclosing quantifier or comprehension. The designated
/// variable `x` and parameters `bN` may occur free.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let f = parse_open(text)?;
    let mut scope = Vec::new();
    check_bound(&f, &mut scope, text)?;
    Ok(f)
}

/// Like [`parse`] but permits free numbered variables. Used for working
/// with open formula skeletons (for example the bodies fed to the
/// stratifier).
pub fn parse_open(text: &str) -> Result<Formula, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let f = p.formula()?;
    p.expect_eof()?;
    Ok(f)
}

fn check_bound(f: &Formula, scope: &mut Vec<Var>, text: &str) -> Result<(), ParseError> {
    // Position info is lost after parsing; report offset 0 for scope errors
    // discovered on the finished tree.
    let free = f.free_vars();
    for v in free {
        if let Var::Indexed(_) = v {
            if !scope.contains(&v) {
                return Err(ParseError::UnboundVariable {
                    pos: text.find(&v.to_string()).unwrap_or(0),
                    name: v.to_string(),
                });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Verum,
    Falsum,
    Mirimanoff,
    In,
    Notin,
    Not,
    Exists,
    Forall,
    Cup,
    Var(Var),
    Zero,
    Amp,
    Bar,
    Arrow,
    Eq,
    Neq,
    Dot,
    Colon,
    LParen,
    RParen,
    LBrace,
    LBraceBar,
    RBrace,
    RBraceBar,
}

struct Spanned {
    tok: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '&' => {
                out.push(Spanned { tok: Tok::Amp, pos: i });
                i += 1;
            }
            '|' => {
                if bytes.get(i + 1) == Some(&b'}') {
                    out.push(Spanned { tok: Tok::RBraceBar, pos: i });
                    i += 2;
                } else {
                    out.push(Spanned { tok: Tok::Bar, pos: i });
                    i += 1;
                }
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    out.push(Spanned { tok: Tok::Arrow, pos: i });
                    i += 2;
                } else {
                    return Err(syntax(i, "expected '->'"));
                }
            }
            '=' => {
                out.push(Spanned { tok: Tok::Eq, pos: i });
                i += 1;
            }
            '!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push(Spanned { tok: Tok::Neq, pos: i });
                    i += 2;
                } else {
                    return Err(syntax(i, "expected '!='"));
                }
            }
            '.' => {
                out.push(Spanned { tok: Tok::Dot, pos: i });
                i += 1;
            }
            ':' => {
                out.push(Spanned { tok: Tok::Colon, pos: i });
                i += 1;
            }
            '(' => {
                out.push(Spanned { tok: Tok::LParen, pos: i });
                i += 1;
            }
            ')' => {
                out.push(Spanned { tok: Tok::RParen, pos: i });
                i += 1;
            }
            '{' => {
                if bytes.get(i + 1) == Some(&b'|') {
                    out.push(Spanned { tok: Tok::LBraceBar, pos: i });
                    i += 2;
                } else {
                    out.push(Spanned { tok: Tok::LBrace, pos: i });
                    i += 1;
                }
            }
            '}' => {
                out.push(Spanned { tok: Tok::RBrace, pos: i });
                i += 1;
            }
            '0' => {
                out.push(Spanned { tok: Tok::Zero, pos: i });
                i += 1;
            }
            'T' => {
                out.push(Spanned { tok: Tok::Verum, pos: i });
                i += 1;
            }
            'F' => {
                out.push(Spanned { tok: Tok::Falsum, pos: i });
                i += 1;
            }
            'M' => {
                out.push(Spanned { tok: Tok::Mirimanoff, pos: i });
                i += 1;
            }
            'a'..='z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit()) {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "in" => Tok::In,
                    "notin" => Tok::Notin,
                    "not" => Tok::Not,
                    "exists" => Tok::Exists,
                    "forall" => Tok::Forall,
                    "cup" => Tok::Cup,
                    _ => Tok::Var(parse_var(word, start)?),
                };
                out.push(Spanned { tok, pos: start });
            }
            other => return Err(syntax(i, &format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

fn parse_var(word: &str, pos: usize) -> Result<Var, ParseError> {
    if word == "x" {
        return Ok(Var::X);
    }
    let (kind, digits) = word.split_at(1);
    if !digits.is_empty() && !digits.starts_with('0') && digits.bytes().all(|b| b.is_ascii_digit())
    {
        let idx: u32 = digits
            .parse()
            .map_err(|_| syntax(pos, "variable index out of range"))?;
        match kind {
            "x" => return Ok(Var::Indexed(idx)),
            "b" => return Ok(Var::Param(idx)),
            _ => {}
        }
    }
    Err(syntax(
        pos,
        &format!("unknown variable '{word}' (expected x, xN or bN)"),
    ))
}

fn syntax(pos: usize, msg: &str) -> ParseError {
    ParseError::Syntax {
        pos,
        msg: msg.to_string(),
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|s| &s.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.tokens.get(self.pos + 1).map(|s| &s.tok)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|s| s.pos)
            .unwrap_or_else(|| self.tokens.last().map(|s| s.pos + 1).unwrap_or(0))
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(syntax(self.here(), &format!("expected {what}")))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(syntax(self.here(), "trailing input"))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.implies()
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.implies()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Bar) {
            self.pos += 1;
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Exists) => {
                self.pos += 1;
                self.quantifier(true)
            }
            Some(Tok::Forall) => {
                self.pos += 1;
                self.quantifier(false)
            }
            _ => self.primary(),
        }
    }

    fn quantifier(&mut self, existential: bool) -> Result<Formula, ParseError> {
        let pos = self.here();
        let v = match self.bump() {
            Some(Tok::Var(v)) => v,
            _ => return Err(syntax(pos, "expected bound variable")),
        };
        if let Var::Param(_) = v {
            return Err(syntax(pos, "parameters cannot be bound"));
        }
        self.eat(&Tok::Dot, "'.'")?;
        let body = self.implies()?;
        Ok(if existential {
            Formula::exists(v, body)
        } else {
            Formula::forall(v, body)
        })
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::LParen) => {
                // Either a parenthesized formula or a parenthesized term
                // opening an atom; try the formula first.
                let save = self.pos;
                self.pos += 1;
                if let Ok(f) = self.formula() {
                    if self.peek() == Some(&Tok::RParen) {
                        self.pos += 1;
                        if !self.atom_follows() {
                            return Ok(f);
                        }
                    }
                }
                self.pos = save;
                self.atom()
            }
            Some(Tok::Verum) => {
                self.pos += 1;
                Ok(Formula::Verum)
            }
            Some(Tok::Falsum) => {
                self.pos += 1;
                Ok(Formula::Falsum)
            }
            Some(Tok::Mirimanoff) => {
                self.pos += 1;
                self.eat(&Tok::LParen, "'('")?;
                let t = self.term()?;
                self.eat(&Tok::RParen, "')'")?;
                Ok(Formula::Mirimanoff(t))
            }
            _ => self.atom(),
        }
    }

    /// True when the upcoming tokens continue an atom (the parenthesized
    /// expression we just consumed was a term of it).
    fn atom_follows(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::In) | Some(Tok::Notin) | Some(Tok::Eq) | Some(Tok::Neq) | Some(Tok::Cup)
        )
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.term()?;
        let pos = self.here();
        match self.bump() {
            Some(Tok::In) => Ok(Formula::Member(lhs, self.term()?)),
            Some(Tok::Notin) => Ok(Formula::not(Formula::Member(lhs, self.term()?))),
            Some(Tok::Eq) => Ok(Formula::Equal(lhs, self.term()?)),
            Some(Tok::Neq) => Ok(Formula::not(Formula::Equal(lhs, self.term()?))),
            _ => Err(syntax(pos, "expected 'in', 'notin', '=' or '!='")),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.prim_term()?;
        while self.peek() == Some(&Tok::Cup) {
            self.pos += 1;
            let rhs = self.prim_term()?;
            lhs = Term::Union(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn prim_term(&mut self) -> Result<Term, ParseError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Var(v)) => Ok(Term::Var(v)),
            Some(Tok::Zero) => Ok(Term::Empty),
            Some(Tok::LParen) => {
                let t = self.term()?;
                self.eat(&Tok::RParen, "')'")?;
                Ok(t)
            }
            Some(Tok::LBrace) => {
                // `{ v : A }` is a comprehension, `{ t }` a singleton.
                if let (Some(Tok::Var(v)), Some(Tok::Colon)) = (self.peek(), self.peek2()) {
                    let v = *v;
                    if let Var::Param(_) = v {
                        return Err(syntax(self.here(), "parameters cannot be bound"));
                    }
                    self.pos += 2;
                    let body = self.formula()?;
                    self.eat(&Tok::RBrace, "'}'")?;
                    Ok(Term::Comprehension(SetOperator::Set, v, Box::new(body)))
                } else {
                    let t = self.term()?;
                    self.eat(&Tok::RBrace, "'}'")?;
                    Ok(Term::Singleton(Box::new(t)))
                }
            }
            Some(Tok::LBraceBar) => {
                let pos = self.here();
                let v = match self.bump() {
                    Some(Tok::Var(v)) => v,
                    _ => return Err(syntax(pos, "expected bound variable")),
                };
                if let Var::Param(_) = v {
                    return Err(syntax(pos, "parameters cannot be bound"));
                }
                self.eat(&Tok::Colon, "':'")?;
                let body = self.formula()?;
                self.eat(&Tok::RBraceBar, "'|}'")?;
                Ok(Term::Comprehension(SetOperator::Class, v, Box::new(body)))
            }
            _ => Err(syntax(pos, "expected a term")),
        }
    }
}
