//! Generators and oracles shared by the property suites.
#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;

use nl2pbt_core::lexicon::tokenize;
use nl2pbt_core::logic::{free_vars, Const, Term};

pub const VARS: &[&str] = &["x", "y", "z", "f", "g", "x1", "y2"];
pub const NAMES: &[&str] = &["ab", "foo", "bar", "passing", "isint"];

fn leaf() -> impl Strategy<Value = Term> {
    prop_oneof![
        4 => prop::sample::select(VARS).prop_map(Term::var),
        2 => prop::sample::select(NAMES).prop_map(Term::name),
        1 => (0u32..100).prop_map(|n| Term::num(n.to_string())),
        1 => prop::sample::select(&["Fizz", "a \"q\"", "back\\slash", ""][..]).prop_map(Term::string),
    ]
}

pub fn term() -> impl Strategy<Value = Term> {
    leaf().prop_recursive(8, 64, 3, |inner| {
        prop_oneof![
            3 => (prop::sample::select(VARS), inner.clone()).prop_map(|(v, b)| Term::lam(v, b)),
            3 => (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::app(f, a)),
            1 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::and(l, r)),
            1 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::or(l, r)),
            1 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::eq(l, r)),
            1 => inner.prop_map(Term::not),
        ]
    })
}

pub fn closed_term() -> impl Strategy<Value = Term> {
    term().prop_map(|t| free_vars(&t).into_iter().fold(t, |acc, v| Term::lam(v, acc)))
}

/// Nameless representation used as an independent alpha-equivalence oracle.
#[derive(Debug, PartialEq)]
pub enum Nameless {
    Free(String),
    Bound(usize),
    Const(Const),
    Lam(Box<Nameless>),
    App(Box<Nameless>, Box<Nameless>),
    And(Box<Nameless>, Box<Nameless>),
    Or(Box<Nameless>, Box<Nameless>),
    Eq(Box<Nameless>, Box<Nameless>),
    Not(Box<Nameless>),
}

pub fn nameless(t: &Term, env: &mut Vec<String>) -> Nameless {
    let two = |l: &Term, r: &Term, env: &mut Vec<String>| (Box::new(nameless(l, env)), Box::new(nameless(r, env)));
    match t {
        Term::Var(v) => match env.iter().rev().position(|b| b == v) {
            Some(i) => Nameless::Bound(i),
            None => Nameless::Free(v.clone()),
        },
        Term::Const(c) => Nameless::Const(c.clone()),
        Term::Lam(p, b) => {
            env.push(p.clone());
            let body = nameless(b, env);
            env.pop();
            Nameless::Lam(Box::new(body))
        }
        Term::App(f, a) => {
            let (f, a) = two(f, a, env);
            Nameless::App(f, a)
        }
        Term::And(l, r) => {
            let (l, r) = two(l, r, env);
            Nameless::And(l, r)
        }
        Term::Or(l, r) => {
            let (l, r) = two(l, r, env);
            Nameless::Or(l, r)
        }
        Term::Eq(l, r) => {
            let (l, r) = two(l, r, env);
            Nameless::Eq(l, r)
        }
        Term::Not(b) => Nameless::Not(Box::new(nameless(b, env))),
    }
}

/// Renames every binder to a globally unique `v<n>`.
pub fn rename_bound(t: &Term, env: &mut Vec<(String, String)>, counter: &mut usize) -> Term {
    match t {
        Term::Var(v) => match env.iter().rev().find(|(from, _)| from == v) {
            Some((_, to)) => Term::var(to.clone()),
            None => t.clone(),
        },
        Term::Const(_) => t.clone(),
        Term::Lam(p, b) => {
            *counter += 1;
            let fresh = format!("v{counter}");
            env.push((p.clone(), fresh.clone()));
            let body = rename_bound(b, env, counter);
            env.pop();
            Term::Lam(fresh, Arc::new(body))
        }
        Term::App(f, a) => Term::app(rename_bound(f, env, counter), rename_bound(a, env, counter)),
        Term::And(l, r) => Term::and(rename_bound(l, env, counter), rename_bound(r, env, counter)),
        Term::Or(l, r) => Term::or(rename_bound(l, env, counter), rename_bound(r, env, counter)),
        Term::Eq(l, r) => Term::eq(rename_bound(l, env, counter), rename_bound(r, env, counter)),
        Term::Not(b) => Term::not(rename_bound(b, env, counter)),
    }
}

pub fn renamed(t: &Term, start: usize) -> Term {
    let mut counter = start;
    rename_bound(t, &mut Vec::new(), &mut counter)
}

/// Five word orders built from corpus sentences that should not parse:
/// the first three reversed, the next two rotated by half their length.
pub fn scrambles(sentences: &[String]) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for s in sentences.iter().take(3) {
        let mut w = tokenize(s).unwrap();
        w.reverse();
        out.push(w);
    }
    for s in sentences.iter().skip(3).take(2) {
        let mut w = tokenize(s).unwrap();
        let k = w.len() / 2;
        w.rotate_left(k);
        out.push(w);
    }
    out
}
