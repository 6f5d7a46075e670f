//! Untyped lambda terms used as logical forms.
//!
//! Connectives (`&`, `|`, `-`, `=`) are dedicated nodes rather than constant
//! applications, so they print infix and code generation can match on them.
//! Terms are immutable; children sit behind [`Arc`] so chart items and
//! derivations can share sub-terms freely across threads.

mod syntax;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use syntax::{parse_term, print_term};

/// Default step budget for [`beta_normalize`].
pub const DEFAULT_FUEL: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("term syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("beta normalization did not reach a normal form within {fuel} steps")]
    FuelExhausted { fuel: usize },
}

/// A constant: a named symbol, a numeric literal kept in its original
/// spelling, or the unquoted content of a string literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Const {
    Name(String),
    Num(String),
    Str(String),
}

impl Const {
    pub fn text(&self) -> &str {
        match self {
            Const::Name(s) | Const::Num(s) | Const::Str(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(Const),
    Lam(String, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    And(Arc<Term>, Arc<Term>),
    Or(Arc<Term>, Arc<Term>),
    Not(Arc<Term>),
    Eq(Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn name(name: impl Into<String>) -> Term {
        Term::Const(Const::Name(name.into()))
    }

    pub fn num(spelling: impl Into<String>) -> Term {
        Term::Const(Const::Num(spelling.into()))
    }

    pub fn string(content: impl Into<String>) -> Term {
        Term::Const(Const::Str(content.into()))
    }

    pub fn lam(param: impl Into<String>, body: Term) -> Term {
        Term::Lam(param.into(), Arc::new(body))
    }

    pub fn app(func: Term, arg: Term) -> Term {
        Term::App(Arc::new(func), Arc::new(arg))
    }

    /// Curried application of `func` to each of `args` in turn.
    pub fn apply(func: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(func, Term::app)
    }

    pub fn and(l: Term, r: Term) -> Term {
        Term::And(Arc::new(l), Arc::new(r))
    }

    pub fn or(l: Term, r: Term) -> Term {
        Term::Or(Arc::new(l), Arc::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: Term) -> Term {
        Term::Not(Arc::new(t))
    }

    pub fn eq(l: Term, r: Term) -> Term {
        Term::Eq(Arc::new(l), Arc::new(r))
    }

    /// Splits an application spine `f(a)(b)` into `(f, [a, b])`.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut head = self;
        let mut args = Vec::new();
        while let Term::App(f, a) = head {
            args.push(a.as_ref());
            head = f.as_ref();
        }
        args.reverse();
        (head, args)
    }

    /// The constant name at the head of an application spine, if any.
    pub fn head_const(&self) -> Option<&str> {
        match self.spine().0 {
            Term::Const(Const::Name(n)) => Some(n),
            _ => None,
        }
    }

    pub fn is_beta_normal(&self) -> bool {
        match self {
            Term::Var(_) | Term::Const(_) => true,
            Term::Lam(_, b) | Term::Not(b) => b.is_beta_normal(),
            Term::App(f, a) => !matches!(f.as_ref(), Term::Lam(..)) && f.is_beta_normal() && a.is_beta_normal(),
            Term::And(l, r) | Term::Or(l, r) | Term::Eq(l, r) => l.is_beta_normal() && r.is_beta_normal(),
        }
    }

    /// Every constant occurring in the term, in first-occurrence order.
    pub fn constants(&self) -> Vec<Const> {
        fn walk(t: &Term, out: &mut Vec<Const>) {
            match t {
                Term::Var(_) => {}
                Term::Const(c) => {
                    if !out.contains(c) {
                        out.push(c.clone());
                    }
                }
                Term::Lam(_, b) | Term::Not(b) => walk(b, out),
                Term::App(l, r) | Term::And(l, r) | Term::Or(l, r) | Term::Eq(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::Lam(_, b) | Term::Not(b) => 1 + b.size(),
            Term::App(l, r) | Term::And(l, r) | Term::Or(l, r) | Term::Eq(l, r) => 1 + l.size() + r.size(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

pub fn free_vars(t: &Term) -> BTreeSet<String> {
    fn walk<'a>(t: &'a Term, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match t {
            Term::Var(v) => {
                if !bound.contains(&v.as_str()) {
                    out.insert(v.clone());
                }
            }
            Term::Const(_) => {}
            Term::Lam(p, b) => {
                bound.push(p);
                walk(b, bound, out);
                bound.pop();
            }
            Term::Not(b) => walk(b, bound, out),
            Term::App(l, r) | Term::And(l, r) | Term::Or(l, r) | Term::Eq(l, r) => {
                walk(l, bound, out);
                walk(r, bound, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(t, &mut Vec::new(), &mut out);
    out
}

fn occurs_free(t: &Term, v: &str) -> bool {
    match t {
        Term::Var(n) => n == v,
        Term::Const(_) => false,
        Term::Lam(p, b) => p != v && occurs_free(b, v),
        Term::Not(b) => occurs_free(b, v),
        Term::App(l, r) | Term::And(l, r) | Term::Or(l, r) | Term::Eq(l, r) => occurs_free(l, v) || occurs_free(r, v),
    }
}

/// Picks `base` with the least numeric suffix (`x1`, `x2`, ...) that is not
/// in `avoid`. Any existing numeric suffix on `base` is replaced.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "x" } else { stem };
    (1..).map(|i| format!("{stem}{i}")).find(|cand| !avoid.contains(cand)).expect("unbounded suffix search")
}

/// Capture-avoiding substitution of `replacement` for the free occurrences
/// of `var` in `t`.
pub fn substitute(t: &Term, var: &str, replacement: &Term) -> Term {
    let fv = free_vars(replacement);
    subst_with(t, var, replacement, &fv)
}

fn subst_with(t: &Term, var: &str, r: &Term, fv_r: &BTreeSet<String>) -> Term {
    match t {
        Term::Var(n) if n == var => r.clone(),
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::Lam(p, b) => {
            if p == var || !occurs_free(b, var) {
                return t.clone();
            }
            if fv_r.contains(p) {
                let mut avoid = fv_r.clone();
                avoid.extend(free_vars(b));
                avoid.insert(var.to_string());
                let renamed = fresh_name(p, &avoid);
                let body = subst_with(b, p, &Term::Var(renamed.clone()), &BTreeSet::from([renamed.clone()]));
                Term::lam(renamed, subst_with(&body, var, r, fv_r))
            } else {
                Term::lam(p.clone(), subst_with(b, var, r, fv_r))
            }
        }
        Term::App(l, x) => Term::app(subst_with(l, var, r, fv_r), subst_with(x, var, r, fv_r)),
        Term::And(l, x) => Term::and(subst_with(l, var, r, fv_r), subst_with(x, var, r, fv_r)),
        Term::Or(l, x) => Term::or(subst_with(l, var, r, fv_r), subst_with(x, var, r, fv_r)),
        Term::Eq(l, x) => Term::eq(subst_with(l, var, r, fv_r), subst_with(x, var, r, fv_r)),
        Term::Not(b) => Term::not(subst_with(b, var, r, fv_r)),
    }
}

/// Normal-order (leftmost-outermost) beta normalization bounded by `fuel`
/// contractions.
pub fn beta_normalize(t: &Term, fuel: usize) -> Result<Term, TermError> {
    let mut n = Normalizer { fuel, left: fuel };
    n.normal(t)
}

struct Normalizer {
    fuel: usize,
    left: usize,
}

impl Normalizer {
    fn spend(&mut self) -> Result<(), TermError> {
        if self.left == 0 {
            return Err(TermError::FuelExhausted { fuel: self.fuel });
        }
        self.left -= 1;
        Ok(())
    }

    /// Reduces to weak head normal form.
    fn whnf(&mut self, t: &Term) -> Result<Term, TermError> {
        let mut cur = t.clone();
        loop {
            let Term::App(f, a) = &cur else {
                return Ok(cur);
            };
            let head = self.whnf(f)?;
            match head {
                Term::Lam(p, b) => {
                    self.spend()?;
                    cur = substitute(&b, &p, a);
                }
                _ => return Ok(Term::App(Arc::new(head), a.clone())),
            }
        }
    }

    fn normal(&mut self, t: &Term) -> Result<Term, TermError> {
        let t = self.whnf(t)?;
        Ok(match &t {
            Term::Var(_) | Term::Const(_) => t,
            Term::Lam(p, b) => Term::lam(p.clone(), self.normal(b)?),
            // whnf left a non-lambda head, so no redex sits at this node.
            Term::App(f, a) => {
                let f = self.normal(f)?;
                if matches!(f, Term::Lam(..)) {
                    return self.normal(&Term::app(f, a.as_ref().clone()));
                }
                Term::app(f, self.normal(a)?)
            }
            Term::And(l, r) => Term::and(self.normal(l)?, self.normal(r)?),
            Term::Or(l, r) => Term::or(self.normal(l)?, self.normal(r)?),
            Term::Eq(l, r) => Term::eq(self.normal(l)?, self.normal(r)?),
            Term::Not(b) => Term::not(self.normal(b)?),
        })
    }
}

/// Equality up to consistent renaming of bound variables.
pub fn alpha_equal(a: &Term, b: &Term) -> bool {
    fn go<'a>(a: &'a Term, b: &'a Term, env_a: &mut Vec<&'a str>, env_b: &mut Vec<&'a str>) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                let ix = env_a.iter().rposition(|v| *v == x);
                let iy = env_b.iter().rposition(|v| *v == y);
                match (ix, iy) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Term::Const(x), Term::Const(y)) => x == y,
            (Term::Lam(p, bx), Term::Lam(q, by)) => {
                env_a.push(p);
                env_b.push(q);
                let eq = go(bx, by, env_a, env_b);
                env_a.pop();
                env_b.pop();
                eq
            }
            (Term::Not(x), Term::Not(y)) => go(x, y, env_a, env_b),
            (Term::App(l1, r1), Term::App(l2, r2))
            | (Term::And(l1, r1), Term::And(l2, r2))
            | (Term::Or(l1, r1), Term::Or(l2, r2))
            | (Term::Eq(l1, r1), Term::Eq(l2, r2)) => go(l1, l2, env_a, env_b) && go(r1, r2, env_a, env_b),
            _ => false,
        }
    }
    go(a, b, &mut Vec::new(), &mut Vec::new())
}
