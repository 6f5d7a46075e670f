//! Text syntax for terms.
//!
//! ```text
//! \x.BODY          abstraction, the body extends as far right as possible
//! f(a,b)           curried application, App(App(f,a),b)
//! a = b            equality (`==` is accepted as well)
//! a | b, a & b     disjunction, conjunction (left-associative)
//! -a               negation
//! a % b            shorthand for mod(a,b)
//! 5, 1.5, "Fizz"   numeric and string constants
//! ```
//!
//! Binding strength from loosest to tightest: `=`, `|`, `&`, `-`, `%`,
//! application. An identifier is a variable when an enclosing lambda binds
//! it or when it looks like one (a letter followed by digits, e.g. `x`, `P`,
//! `z2`); every other identifier is a constant.

use std::sync::Arc;

use super::{Const, Term, TermError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    Comma,
    Amp,
    Pipe,
    Equals,
    Minus,
    Percent,
    Ident(String),
    Num(String),
    Str(String),
    End,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, TermError> {
    let err = |pos: usize, message: String| TermError::Syntax { pos, message };
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let single = match c {
            '\\' | 'λ' => Some(Tok::Lambda),
            '.' => Some(Tok::Dot),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Pipe),
            '-' => Some(Tok::Minus),
            '%' => Some(Tok::Percent),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push((pos, tok));
            continue;
        }
        if c == '=' {
            chars.next();
            if matches!(chars.peek(), Some((_, '='))) {
                chars.next();
            }
            out.push((pos, Tok::Equals));
        } else if c == '"' {
            chars.next();
            let mut content = String::new();
            loop {
                match chars.next() {
                    Some((_, '"')) => break,
                    Some((_, '\\')) => match chars.next() {
                        Some((_, e)) => content.push(e),
                        None => return Err(err(pos, "unterminated string literal".into())),
                    },
                    Some((_, ch)) => content.push(ch),
                    None => return Err(err(pos, "unterminated string literal".into())),
                }
            }
            out.push((pos, Tok::Str(content)));
        } else if c.is_ascii_digit() {
            let mut num = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if d.is_ascii_digit() {
                    num.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            // a fractional part needs a digit right after the dot
            let mut look = chars.clone();
            if let (Some((_, '.')), Some((_, d))) = (look.next(), look.next()) {
                if d.is_ascii_digit() {
                    chars.next();
                    num.push('.');
                    while let Some(&(_, d)) = chars.peek() {
                        if d.is_ascii_digit() {
                            num.push(d);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                }
            }
            out.push((pos, Tok::Num(num)));
        } else if c.is_alphabetic() || c == '_' {
            let mut ident = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if d.is_alphanumeric() || d == '_' {
                    ident.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push((pos, Tok::Ident(ident)));
        } else {
            return Err(err(pos, format!("unexpected character {c:?}")));
        }
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

/// Identifiers spelled like `x`, `P`, `z12` are variables even when free.
pub(crate) fn is_var_like(name: &str) -> bool {
    let mut cs = name.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic()) && cs.all(|c| c.is_ascii_digit())
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    bound: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, TermError> {
        Err(TermError::Syntax { pos: self.pos(), message: message.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), TermError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn expr(&mut self) -> Result<Term, TermError> {
        let mut lhs = self.disjunction()?;
        while *self.peek() == Tok::Equals {
            self.bump();
            let rhs = self.disjunction()?;
            lhs = Term::eq(lhs, rhs);
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Term, TermError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Term::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Term, TermError> {
        let mut lhs = self.negation()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.negation()?;
            lhs = Term::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn negation(&mut self) -> Result<Term, TermError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Term::not(self.negation()?));
        }
        self.modulo()
    }

    fn modulo(&mut self) -> Result<Term, TermError> {
        let mut lhs = self.application()?;
        while *self.peek() == Tok::Percent {
            self.bump();
            let rhs = self.application()?;
            lhs = Term::apply(Term::name("mod"), [lhs, rhs]);
        }
        Ok(lhs)
    }

    fn application(&mut self) -> Result<Term, TermError> {
        let mut head = self.atom()?;
        while *self.peek() == Tok::LParen {
            self.bump();
            loop {
                let arg = self.expr()?;
                head = Term::app(head, arg);
                match self.peek() {
                    Tok::Comma => {
                        self.bump();
                    }
                    Tok::RParen => {
                        self.bump();
                        break;
                    }
                    other => {
                        return self.fail(format!("expected ',' or ')', found {}", describe(other)));
                    }
                }
            }
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<Term, TermError> {
        match self.peek().clone() {
            Tok::Lambda => self.lambda(),
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump();
                if self.bound.contains(&name) || is_var_like(&name) {
                    Ok(Term::Var(name))
                } else {
                    Ok(Term::Const(Const::Name(name)))
                }
            }
            Tok::Num(n) => {
                self.bump();
                Ok(Term::Const(Const::Num(n)))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Term::Const(Const::Str(s)))
            }
            other => self.fail(format!("expected a term, found {}", describe(&other))),
        }
    }

    /// `\x.body` or `\x y.body`; the body reaches as far right as it can.
    fn lambda(&mut self) -> Result<Term, TermError> {
        self.bump();
        let mut params = Vec::new();
        while let Tok::Ident(name) = self.peek().clone() {
            self.bump();
            params.push(name);
        }
        if params.is_empty() {
            return self.fail("expected a parameter name after '\\'");
        }
        self.expect(Tok::Dot, "'.'")?;
        let depth = self.bound.len();
        self.bound.extend(params.iter().cloned());
        let body = self.expr();
        self.bound.truncate(depth);
        let body = body?;
        Ok(params.into_iter().rev().fold(body, |b, p| Term::Lam(p, Arc::new(b))))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Lambda => "'\\'".into(),
        Tok::Dot => "'.'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Comma => "','".into(),
        Tok::Amp => "'&'".into(),
        Tok::Pipe => "'|'".into(),
        Tok::Equals => "'='".into(),
        Tok::Minus => "'-'".into(),
        Tok::Percent => "'%'".into(),
        Tok::Ident(s) => format!("identifier {s:?}"),
        Tok::Num(s) => format!("number {s}"),
        Tok::Str(s) => format!("string {s:?}"),
        Tok::End => "end of input".into(),
    }
}

pub fn parse_term(text: &str) -> Result<Term, TermError> {
    let mut p = Parser { toks: lex(text)?, at: 0, bound: Vec::new() };
    let t = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(format!("unexpected {}", describe(p.peek())));
    }
    Ok(t)
}

// Binding strength; an operand weaker than its slot gets parentheses.
const LAM: u8 = 0;
const EQ: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const NOT: u8 = 4;
const ATOM: u8 = 6;

fn strength(t: &Term) -> u8 {
    match t {
        Term::Lam(..) => LAM,
        Term::Eq(..) => EQ,
        Term::Or(..) => OR,
        Term::And(..) => AND,
        Term::Not(..) => NOT,
        Term::Var(_) | Term::Const(_) | Term::App(..) => ATOM,
    }
}

/// Canonical rendering: backslash lambdas, infix connectives with minimal
/// parentheses, `f(a,b)` for curried applications.
pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, LAM, &mut out);
    out
}

fn write_term(t: &Term, slot: u8, out: &mut String) {
    // lambdas extend rightwards, so they are wrapped anywhere but a free slot
    let wrap = strength(t) < slot || (slot > LAM && matches!(t, Term::Lam(..)));
    if wrap {
        out.push('(');
    }
    match t {
        Term::Var(v) => out.push_str(v),
        Term::Const(Const::Name(n)) | Term::Const(Const::Num(n)) => out.push_str(n),
        Term::Const(Const::Str(s)) => {
            out.push('"');
            for c in s.chars() {
                if c == '"' || c == '\\' {
                    out.push('\\');
                }
                out.push(c);
            }
            out.push('"');
        }
        Term::Lam(p, b) => {
            out.push('\\');
            out.push_str(p);
            out.push('.');
            write_term(b, LAM, out);
        }
        Term::App(..) => {
            let (head, args) = t.spine();
            if matches!(head, Term::Var(_) | Term::Const(_)) {
                write_term(head, ATOM, out);
            } else {
                out.push('(');
                write_term(head, LAM, out);
                out.push(')');
            }
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_term(a, LAM, out);
            }
            out.push(')');
        }
        Term::Eq(l, r) => binary(l, " = ", r, EQ, out),
        Term::Or(l, r) => binary(l, " | ", r, OR, out),
        Term::And(l, r) => binary(l, " & ", r, AND, out),
        Term::Not(b) => {
            out.push('-');
            write_term(b, NOT, out);
        }
    }
    if wrap {
        out.push(')');
    }
}

fn binary(l: &Term, op: &str, r: &Term, level: u8, out: &mut String) {
    write_term(l, level, out);
    out.push_str(op);
    write_term(r, level + 1, out);
}
