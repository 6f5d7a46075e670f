//! Turns logical forms into fast-check property tests and renders parse
//! trees for inspection.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::grammar::print_category;
use crate::logic::{beta_normalize, free_vars, print_term, Const, Term, DEFAULT_FUEL};
use crate::parser::{ChartItem, Derivation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Target {
    #[default]
    FastCheckJs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmitConfig {
    pub target: Target,
    pub test_name: String,
    /// Subject-under-test functions the prelude pulls in.
    pub function_imports: Vec<String>,
    pub subjects_module: String,
}

impl Default for EmitConfig {
    fn default() -> Self {
        EmitConfig {
            target: Target::FastCheckJs,
            test_name: "property".to_string(),
            function_imports: Vec::new(),
            subjects_module: "./subjects".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmitError {
    #[error("test name must not be empty")]
    EmptyTestName,
    #[error("logical form must be closed and beta-normal: {0}")]
    NotClosedNormal(String),
    #[error("expected foreach(generator, claim) at the root, found {0}")]
    NotForeach(String),
    #[error("checkthrows expects (isexc, \\u.E) with u unused in E, found {0}")]
    BadCheckThrows(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmittedTest {
    /// One statement ending in a single newline.
    pub source: String,
    /// Constants outside the mapping table, emitted verbatim as identifiers.
    pub unknown_constants: Vec<String>,
}

const MAPPED: &[&str] = &[
    "foreach",
    "filter",
    "floats",
    "integers",
    "lessthan",
    "lessthanoreq",
    "equals",
    "divisibleby",
    "mod",
    "isinteger",
    "checkthrows",
    "isexc",
];

pub fn emit_test(form: &Term, cfg: &EmitConfig) -> Result<EmittedTest, EmitError> {
    if cfg.test_name.trim().is_empty() {
        return Err(EmitError::EmptyTestName);
    }
    if !free_vars(form).is_empty() || !form.is_beta_normal() {
        return Err(EmitError::NotClosedNormal(print_term(form)));
    }
    let (head, args) = form.spine();
    let [generator, claim] = args.as_slice() else {
        return Err(EmitError::NotForeach(print_term(form)));
    };
    if !matches!(head, Term::Const(Const::Name(n)) if n == "foreach") {
        return Err(EmitError::NotForeach(print_term(form)));
    }
    let mut e = Emitter { scope: Vec::new(), unknown: BTreeSet::new() };
    let g = e.expr(generator)?;
    let c = e.expr(claim)?;
    Ok(EmittedTest {
        source: format!("fc.assert(fc.property({g}, {c}));\n"),
        unknown_constants: e.unknown.into_iter().collect(),
    })
}

struct Emitter {
    /// (source name, emitted name), innermost last.
    scope: Vec<(String, String)>,
    unknown: BTreeSet<String>,
}

impl Emitter {
    fn expr(&mut self, t: &Term) -> Result<String, EmitError> {
        Ok(match t {
            Term::Var(v) => self.lookup(v),
            Term::Const(c) => self.constant(c),
            Term::Lam(p, body) => self.arrow(p, body)?,
            Term::App(..) => self.call(t)?,
            Term::And(l, r) => format!("({} && {})", self.expr(l)?, self.expr(r)?),
            Term::Or(l, r) => format!("({} || {})", self.expr(l)?, self.expr(r)?),
            Term::Eq(l, r) => format!("({} === {})", self.expr(l)?, self.expr(r)?),
            Term::Not(b) => match &**b {
                Term::Lam(..) => format!("!({})", self.expr(b)?),
                _ => format!("!{}", self.expr(b)?),
            },
        })
    }

    fn lookup(&self, v: &str) -> String {
        self.scope.iter().rev().find(|(src, _)| src == v).map_or_else(|| v.to_string(), |(_, out)| out.clone())
    }

    fn constant(&mut self, c: &Const) -> String {
        match c {
            Const::Num(n) => n.clone(),
            Const::Str(s) => js_string(s),
            Const::Name(n) => match n.as_str() {
                "floats" => "fc.float()".to_string(),
                "integers" => "fc.integer()".to_string(),
                "isinteger" => "Number.isInteger".to_string(),
                other => {
                    self.unknown.insert(other.to_string());
                    other.to_string()
                }
            },
        }
    }

    fn arrow(&mut self, param: &str, body: &Term) -> Result<String, EmitError> {
        let name = canonical_name(self.scope.iter().map(|(_, out)| out.as_str()));
        self.scope.push((param.to_string(), name.clone()));
        let b = self.expr(body);
        self.scope.pop();
        Ok(format!("({name}) => {}", b?))
    }

    fn call(&mut self, t: &Term) -> Result<String, EmitError> {
        let (head, args) = t.spine();
        if let Term::Const(Const::Name(name)) = head {
            match (name.as_str(), args.as_slice()) {
                ("filter", [g, p]) => return Ok(format!("{}.filter({})", self.expr(g)?, self.expr(p)?)),
                ("lessthan", [a, b]) => return Ok(format!("({} < {})", self.expr(a)?, self.expr(b)?)),
                ("lessthanoreq", [a, b]) => return Ok(format!("({} <= {})", self.expr(a)?, self.expr(b)?)),
                ("equals", [a, b]) => return Ok(format!("({} === {})", self.expr(a)?, self.expr(b)?)),
                ("divisibleby", [a, b]) => return Ok(format!("({} % {} === 0)", self.expr(a)?, self.expr(b)?)),
                ("mod", [a, b]) => return Ok(format!("({} % {})", self.expr(a)?, self.expr(b)?)),
                ("checkthrows", [exc, thunk]) => return self.check_throws(t, exc, thunk),
                _ => {}
            }
        }
        let f = self.expr(head)?;
        let f = if matches!(head, Term::Lam(..)) { format!("({f})") } else { f };
        let mut rendered = Vec::with_capacity(args.len());
        for a in args {
            rendered.push(self.expr(a)?);
        }
        Ok(format!("{f}({})", rendered.join(", ")))
    }

    fn check_throws(&mut self, whole: &Term, exc: &Term, thunk: &Term) -> Result<String, EmitError> {
        let bad = || EmitError::BadCheckThrows(print_term(whole));
        if !matches!(exc, Term::Const(Const::Name(n)) if n == "isexc") {
            return Err(bad());
        }
        let Term::Lam(u, body) = thunk else {
            return Err(bad());
        };
        if free_vars(body).contains(u) {
            return Err(bad());
        }
        Ok(format!("throwsException(() => {})", self.expr(body)?))
    }
}

/// Least of x, y, z, x1, y1, z1, x2, ... not already bound.
fn canonical_name<'a>(bound: impl Iterator<Item = &'a str>) -> String {
    let bound: BTreeSet<&str> = bound.collect();
    (0..)
        .flat_map(|i| ["x", "y", "z"].map(move |s| if i == 0 { s.to_string() } else { format!("{s}{i}") }))
        .find(|n| !bound.contains(n.as_str()))
        .expect("unbounded name supply")
}

fn js_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// True for constants the emitter translates structurally.
pub fn is_mapped_constant(name: &str) -> bool {
    MAPPED.contains(&name)
}

pub fn emit_prelude(cfg: &EmitConfig) -> String {
    let mut out = String::from("const fc = require(\"fast-check\");\n");
    if !cfg.function_imports.is_empty() {
        let _ = writeln!(
            out,
            "const {{ {} }} = require({});",
            cfg.function_imports.join(", "),
            js_string(&cfg.subjects_module)
        );
    }
    out.push_str(
        "\nfunction throwsException(thunk) {\n  try {\n    thunk();\n  } catch (e) {\n    return true;\n  }\n  return false;\n}\n",
    );
    out
}

/// Prelude, a comment naming the test, then the test itself.
pub fn render_test_file(test: &EmittedTest, cfg: &EmitConfig) -> String {
    format!("{}\n// {}\n{}", emit_prelude(cfg), cfg.test_name, test.source)
}

/// A complete test file for `form`: the prelude imports `cfg.function_imports`
/// plus every unknown constant the test mentions.
pub fn emit_file(form: &Term, cfg: &EmitConfig) -> Result<String, EmitError> {
    let test = emit_test(form, cfg)?;
    let mut imports: Vec<String> = cfg.function_imports.clone();
    for c in &test.unknown_constants {
        if !imports.contains(c) {
            imports.push(c.clone());
        }
    }
    Ok(render_test_file(&test, &EmitConfig { function_imports: imports, ..cfg.clone() }))
}

/// One line per chart item, children indented two spaces under their parent:
/// `words => category : semantics  (rule)`.
pub fn render_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    render_item(d, &d.root, 0, &mut out);
    out
}

fn render_item(d: &Derivation, item: &ChartItem, depth: usize, out: &mut String) {
    let sem = beta_normalize(&item.semantics, DEFAULT_FUEL).unwrap_or_else(|_| item.semantics.clone());
    let _ = writeln!(
        out,
        "{:indent$}{} => {} : {}  ({})",
        "",
        d.words(item),
        print_category(&item.category),
        print_term(&sem),
        item.rule.label(),
        indent = depth * 2
    );
    for child in &item.children {
        render_item(d, child, depth + 1, out);
    }
}
