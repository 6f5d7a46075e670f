//! CKY chart parser over CCG categories.
//!
//! Every cell keeps all of its items (no packing), so each complete item is
//! one derivation. Semantics are composed without normalization while the
//! chart is built; [`logical_forms`] normalizes each complete parse once.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::grammar::{categories_match, Category, Direction};
use crate::lexicon::Lexicon;
use crate::logic::{alpha_equal, beta_normalize, free_vars, fresh_name, Term, TermError, DEFAULT_FUEL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Lex,
    /// `>`   X/Y  Y    ⇒ X
    ForwardApp,
    /// `<`   Y    X\Y  ⇒ X
    BackwardApp,
    /// `>B`  X/Y  Y/Z  ⇒ X/Z
    ForwardComp,
    /// `<B`  Y\Z  X\Y  ⇒ X\Z
    BackwardComp,
    /// `<Bx` Y/Z  X\Y  ⇒ X/Z
    BackwardCrossedComp,
    /// `>S`  (X/Y)/Z  Y/Z  ⇒ X/Z
    ForwardSubst,
    /// `<Sx` Y/Z  (X\Y)/Z  ⇒ X/Z
    BackwardCrossedSubst,
    /// `>T`  X ⇒ T/(T\X)
    ForwardRaise,
    /// `<T`  X ⇒ T\(T/X)
    BackwardRaise,
}

impl Rule {
    /// Binary rules in the order the chart tries them.
    pub const BINARY: [Rule; 7] = [
        Rule::ForwardApp,
        Rule::BackwardApp,
        Rule::ForwardComp,
        Rule::BackwardComp,
        Rule::BackwardCrossedComp,
        Rule::ForwardSubst,
        Rule::BackwardCrossedSubst,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Rule::Lex => "lex",
            Rule::ForwardApp => ">",
            Rule::BackwardApp => "<",
            Rule::ForwardComp => ">B",
            Rule::BackwardComp => "<B",
            Rule::BackwardCrossedComp => "<Bx",
            Rule::ForwardSubst => ">S",
            Rule::BackwardCrossedSubst => "<Sx",
            Rule::ForwardRaise => ">T",
            Rule::BackwardRaise => "<T",
        }
    }

    fn is_application(self) -> bool {
        matches!(self, Rule::ForwardApp | Rule::BackwardApp)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartItem {
    /// Half-open token range `[start, end)`.
    pub span: (usize, usize),
    pub category: Category,
    pub semantics: Term,
    pub rule: Rule,
    pub children: Vec<Arc<ChartItem>>,
}

impl ChartItem {
    pub fn lexical(position: usize, category: Category, semantics: Term) -> ChartItem {
        ChartItem { span: (position, position + 1), category, semantics, rule: Rule::Lex, children: Vec::new() }
    }

    /// Number of items in the tree rooted here.
    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.node_count()).sum::<usize>()
    }
}

/// A complete parse tree together with the tokens it spans.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub root: Arc<ChartItem>,
    pub tokens: Arc<[String]>,
}

impl Derivation {
    pub fn words(&self, item: &ChartItem) -> String {
        self.tokens[item.span.0..item.span.1].join(" ")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseConfig {
    pub max_derivations: usize,
    pub enable_type_raising: bool,
    pub type_raise_targets: Vec<Category>,
    pub beta_fuel: usize,
}

impl Default for ParseConfig {
    fn default() -> Self {
        ParseConfig {
            max_derivations: 256,
            enable_type_raising: true,
            type_raise_targets: vec![Category::prim("S")],
            beta_fuel: DEFAULT_FUEL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("nothing to parse")]
    Empty,
    #[error("unknown word(s): {}", .0.join(", "))]
    UnknownWords(Vec<String>),
    #[error("max_derivations must be at least 1")]
    BadConfig,
}

#[derive(Debug, Clone)]
pub struct ParseOutcome {
    pub derivations: Vec<Derivation>,
    /// Complete `S` items found before truncation (at least `derivations.len()`).
    pub found: usize,
    /// More complete parses existed than `max_derivations`.
    pub truncated: bool,
}

fn pick_name(base: &str, avoid: &BTreeSet<String>) -> String {
    if avoid.contains(base) {
        fresh_name(base, avoid)
    } else {
        base.to_string()
    }
}

fn unslash(c: &Category) -> Option<(Direction, &Category, &Category)> {
    match c {
        Category::Slash { dir, result, arg, .. } => Some((*dir, result, arg)),
        Category::Prim { .. } => None,
    }
}

/// `\z.f(g(z))`
fn compose(f: &Term, g: &Term) -> Term {
    let mut avoid = free_vars(f);
    avoid.extend(free_vars(g));
    let z = pick_name("z", &avoid);
    Term::lam(z.clone(), Term::app(f.clone(), Term::app(g.clone(), Term::var(z))))
}

/// `\z.f(z)(g(z))`
fn substitution(f: &Term, g: &Term) -> Term {
    let mut avoid = free_vars(f);
    avoid.extend(free_vars(g));
    let z = pick_name("z", &avoid);
    Term::lam(z.clone(), Term::app(Term::app(f.clone(), Term::var(z.clone())), Term::app(g.clone(), Term::var(z))))
}

/// Applies one binary rule to adjacent items. Returns `None` when the
/// categories do not fit the rule's schema.
pub fn combine(rule: Rule, left: &Arc<ChartItem>, right: &Arc<ChartItem>) -> Option<ChartItem> {
    use Direction::{Left, Right};

    if left.span.1 != right.span.0 {
        return None;
    }
    if !rule.is_application() && (left.category.application_only() || right.category.application_only()) {
        return None;
    }
    let (lc, rc) = (&left.category, &right.category);
    let (f_l, f_r) = (&left.semantics, &right.semantics);
    let (category, semantics) = match rule {
        Rule::ForwardApp => {
            let (Right, x, y) = unslash(lc)? else { return None };
            categories_match(y, rc).then(|| (x.clone(), Term::app(f_l.clone(), f_r.clone())))?
        }
        Rule::BackwardApp => {
            let (Left, x, y) = unslash(rc)? else { return None };
            categories_match(y, lc).then(|| (x.clone(), Term::app(f_r.clone(), f_l.clone())))?
        }
        Rule::ForwardComp => {
            let (Right, x, y) = unslash(lc)? else { return None };
            let (Right, y2, z) = unslash(rc)? else { return None };
            categories_match(y, y2).then(|| (Category::right(x.clone(), z.clone()), compose(f_l, f_r)))?
        }
        Rule::BackwardComp => {
            let (Left, y, z) = unslash(lc)? else { return None };
            let (Left, x, y2) = unslash(rc)? else { return None };
            categories_match(y2, y).then(|| (Category::left(x.clone(), z.clone()), compose(f_r, f_l)))?
        }
        Rule::BackwardCrossedComp => {
            let (Right, y, z) = unslash(lc)? else { return None };
            let (Left, x, y2) = unslash(rc)? else { return None };
            categories_match(y2, y).then(|| (Category::right(x.clone(), z.clone()), compose(f_r, f_l)))?
        }
        Rule::ForwardSubst => {
            let (Right, xy, z) = unslash(lc)? else { return None };
            let (Right, x, y) = unslash(xy)? else { return None };
            let (Right, y2, z2) = unslash(rc)? else { return None };
            if xy.application_only() {
                return None;
            }
            (categories_match(y, y2) && categories_match(z, z2))
                .then(|| (Category::right(x.clone(), z.clone()), substitution(f_l, f_r)))?
        }
        Rule::BackwardCrossedSubst => {
            let (Right, y, z) = unslash(lc)? else { return None };
            let (Right, xy, z2) = unslash(rc)? else { return None };
            let (Left, x, y2) = unslash(xy)? else { return None };
            if xy.application_only() {
                return None;
            }
            (categories_match(y2, y) && categories_match(z2, z))
                .then(|| (Category::right(x.clone(), z2.clone()), substitution(f_r, f_l)))?
        }
        Rule::Lex | Rule::ForwardRaise | Rule::BackwardRaise => return None,
    };
    Some(ChartItem {
        span: (left.span.0, right.span.1),
        category,
        semantics,
        rule,
        children: vec![left.clone(), right.clone()],
    })
}

/// Type-raises a primitive item: `>T` gives `T/(T\X)`, `<T` gives
/// `T\(T/X)`, both with semantics `\f.f(a)`. Slash categories are not
/// raised.
pub fn type_raise(item: &Arc<ChartItem>, target: &Category, dir: Direction) -> Option<ChartItem> {
    if !item.category.is_prim() {
        return None;
    }
    let x = item.category.clone();
    let t = target.clone();
    let (category, rule) = match dir {
        Direction::Right => (Category::right(t.clone(), Category::left(t, x)), Rule::ForwardRaise),
        Direction::Left => (Category::left(t.clone(), Category::right(t, x)), Rule::BackwardRaise),
    };
    let f = pick_name("f", &free_vars(&item.semantics));
    let semantics = Term::lam(f.clone(), Term::app(Term::var(f), item.semantics.clone()));
    Some(ChartItem { span: item.span, category, semantics, rule, children: vec![item.clone()] })
}

struct Chart {
    n: usize,
    cells: Vec<Vec<Arc<ChartItem>>>,
}

impl Chart {
    fn new(n: usize) -> Chart {
        Chart { n, cells: vec![Vec::new(); n * (n + 1)] }
    }

    fn idx(&self, start: usize, end: usize) -> usize {
        start * (self.n + 1) + end
    }

    fn cell(&self, start: usize, end: usize) -> &[Arc<ChartItem>] {
        &self.cells[self.idx(start, end)]
    }

    fn push(&mut self, start: usize, end: usize, item: ChartItem) {
        let i = self.idx(start, end);
        self.cells[i].push(Arc::new(item));
    }
}

fn add_raised(chart: &mut Chart, start: usize, end: usize, cfg: &ParseConfig) {
    if !cfg.enable_type_raising {
        return;
    }
    let base: Vec<Arc<ChartItem>> = chart.cell(start, end).iter().filter(|i| i.category.is_prim()).cloned().collect();
    for item in base {
        for target in &cfg.type_raise_targets {
            // raising T to T/(T\T) only adds spurious ambiguity
            if categories_match(target, &item.category) {
                continue;
            }
            for dir in [Direction::Right, Direction::Left] {
                if let Some(raised) = type_raise(&item, target, dir) {
                    chart.push(start, end, raised);
                }
            }
        }
    }
}

/// Parses `tokens` and returns every complete derivation of category `S`
/// (with any feature), capped at `cfg.max_derivations`.
pub fn parse(tokens: &[String], lex: &Lexicon, cfg: &ParseConfig) -> Result<ParseOutcome, ParseError> {
    if cfg.max_derivations == 0 {
        return Err(ParseError::BadConfig);
    }
    if tokens.is_empty() {
        return Err(ParseError::Empty);
    }
    let entries: Vec<_> = tokens.iter().map(|t| lex.lookup(t)).collect();
    let unknown: Vec<String> =
        tokens.iter().zip(&entries).filter(|(_, e)| e.is_empty()).map(|(t, _)| t.clone()).collect();
    if !unknown.is_empty() {
        return Err(ParseError::UnknownWords(unknown));
    }

    let n = tokens.len();
    let mut chart = Chart::new(n);
    for (i, es) in entries.into_iter().enumerate() {
        for e in es {
            chart.push(i, i + 1, ChartItem::lexical(i, e.category, e.semantics));
        }
        add_raised(&mut chart, i, i + 1, cfg);
    }
    for width in 2..=n {
        for start in 0..=n - width {
            let end = start + width;
            let mut found = Vec::new();
            for split in start + 1..end {
                for l in chart.cell(start, split) {
                    for r in chart.cell(split, end) {
                        for rule in Rule::BINARY {
                            if let Some(item) = combine(rule, l, r) {
                                found.push(item);
                            }
                        }
                    }
                }
            }
            for item in found {
                chart.push(start, end, item);
            }
            add_raised(&mut chart, start, end, cfg);
        }
    }

    let tokens: Arc<[String]> = tokens.into();
    let complete: Vec<&Arc<ChartItem>> = chart.cell(0, n).iter().filter(|i| i.category.is_prim_named("S")).collect();
    let found = complete.len();
    let derivations = complete
        .into_iter()
        .take(cfg.max_derivations)
        .map(|root| Derivation { root: root.clone(), tokens: tokens.clone() })
        .collect();
    Ok(ParseOutcome { derivations, found, truncated: found > cfg.max_derivations })
}

/// Beta-normal forms of the derivations, deduplicated up to alpha
/// equivalence, in first-seen order.
pub fn logical_forms(derivs: &[Derivation], cfg: &ParseConfig) -> Result<Vec<Term>, TermError> {
    let mut forms: Vec<Term> = Vec::new();
    for d in derivs {
        let nf = beta_normalize(&d.root.semantics, cfg.beta_fuel)?;
        if !forms.iter().any(|f| alpha_equal(f, &nf)) {
            forms.push(nf);
        }
    }
    Ok(forms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_category;
    use crate::logic::parse_term;

    fn item(pos: usize, cat: &str, sem: &str) -> Arc<ChartItem> {
        Arc::new(ChartItem::lexical(pos, parse_category(cat).unwrap(), parse_term(sem).unwrap()))
    }

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    fn even_lexicon() -> Lexicon {
        Lexicon::load("is => (S\\NP)/ADJ : \\p.\\n.p(n)\neven => ADJ : \\n.(n % 2 = 0)\n", "even").unwrap()
    }

    #[test]
    fn forward_then_backward_application() {
        let is = item(1, r"(S\NP)/ADJ", r"\p.\n.p(n)");
        let even = item(2, "ADJ", r"\n.(n % 2 = 0)");
        let vp = Arc::new(combine(Rule::ForwardApp, &is, &even).unwrap());
        assert_eq!(vp.category, parse_category(r"S\NP").unwrap());
        assert_eq!(vp.span, (1, 3));
        let three = item(0, "NP", "3");
        let s = combine(Rule::BackwardApp, &three, &vp).unwrap();
        assert_eq!(s.category, Category::prim("S"));
        let nf = beta_normalize(&s.semantics, 100).unwrap();
        assert_eq!(nf, parse_term("3 % 2 = 0").unwrap());
    }

    #[test]
    fn forward_composition_schema() {
        let f = item(0, "A/B", "ff");
        let g = item(1, "B/C", "gg");
        let out = combine(Rule::ForwardComp, &f, &g).unwrap();
        assert_eq!(out.category, parse_category("A/C").unwrap());
        assert_eq!(out.semantics, parse_term(r"\z.ff(gg(z))").unwrap());
        assert!(combine(Rule::ForwardApp, &f, &g).is_none());
    }

    #[test]
    fn composed_variable_avoids_capture() {
        let f = item(0, "A/B", "ff");
        let g = item(1, "B/C", "z");
        let out = combine(Rule::ForwardComp, &f, &g).unwrap();
        let Term::Lam(param, _) = &out.semantics else { panic!() };
        assert_eq!(param, "z1");
    }

    #[test]
    fn backward_and_crossed_composition() {
        let l = item(0, r"B\C", "gg");
        let r = item(1, r"A\B", "ff");
        let out = combine(Rule::BackwardComp, &l, &r).unwrap();
        assert_eq!(out.category, parse_category(r"A\C").unwrap());
        assert_eq!(out.semantics, parse_term(r"\z.ff(gg(z))").unwrap());

        let l = item(0, "B/C", "gg");
        let out = combine(Rule::BackwardCrossedComp, &l, &r).unwrap();
        assert_eq!(out.category, parse_category("A/C").unwrap());
        assert_eq!(out.semantics, parse_term(r"\z.ff(gg(z))").unwrap());
    }

    #[test]
    fn substitution_rules() {
        let f = item(0, "(A/B)/C", "ff");
        let g = item(1, "B/C", "gg");
        let out = combine(Rule::ForwardSubst, &f, &g).unwrap();
        assert_eq!(out.category, parse_category("A/C").unwrap());
        assert_eq!(out.semantics, parse_term(r"\z.ff(z,gg(z))").unwrap());

        let g = item(0, "B/C", "gg");
        let f = item(1, r"(A\B)/C", "ff");
        let out = combine(Rule::BackwardCrossedSubst, &g, &f).unwrap();
        assert_eq!(out.category, parse_category("A/C").unwrap());
        assert_eq!(out.semantics, parse_term(r"\z.ff(z,gg(z))").unwrap());
    }

    #[test]
    fn non_adjacent_items_do_not_combine() {
        let f = item(0, "A/B", "ff");
        let b = item(2, "B", "bb");
        assert!(combine(Rule::ForwardApp, &f, &b).is_none());
    }

    #[test]
    fn application_only_slash_blocks_composition() {
        let f = item(0, "A/⋆B", "ff");
        let g = item(1, "B/C", "gg");
        let b = item(1, "B", "bb");
        assert!(combine(Rule::ForwardComp, &f, &g).is_none());
        assert!(combine(Rule::ForwardApp, &f, &b).is_some());
    }

    #[test]
    fn featured_argument_matching() {
        let q = item(0, "NP/CN", "qq");
        let gen = item(1, "CN[Gen]", "gg");
        assert!(combine(Rule::ForwardApp, &q, &gen).is_some());
        let q = item(0, "NP/CN[Chk]", "qq");
        assert!(combine(Rule::ForwardApp, &q, &gen).is_none());
    }

    #[test]
    fn raising_primitives_only() {
        let three = item(0, "NP", "3");
        let s = Category::prim("S");
        let up = type_raise(&three, &s, Direction::Right).unwrap();
        assert_eq!(up.category, parse_category(r"S/(S\NP)").unwrap());
        assert_eq!(up.semantics, parse_term(r"\f.f(3)").unwrap());
        let down = type_raise(&three, &s, Direction::Left).unwrap();
        assert_eq!(down.category, parse_category(r"S\(S/NP)").unwrap());
        assert!(type_raise(&item(0, "A/B", "ff"), &s, Direction::Right).is_none());
    }

    #[test]
    fn raised_subject_rederives_figure_one() {
        let three = item(0, "NP", "3");
        let raised = Arc::new(type_raise(&three, &Category::prim("S"), Direction::Right).unwrap());
        let is = item(1, r"(S\NP)/ADJ", r"\p.\n.p(n)");
        let even = item(2, "ADJ", r"\n.(n % 2 = 0)");
        let vp = Arc::new(combine(Rule::ForwardApp, &is, &even).unwrap());
        let via_raise = combine(Rule::ForwardApp, &raised, &vp).unwrap();
        let direct = combine(Rule::BackwardApp, &three, &vp).unwrap();
        let a = beta_normalize(&via_raise.semantics, 100).unwrap();
        let b = beta_normalize(&direct.semantics, 100).unwrap();
        assert!(alpha_equal(&a, &b));
    }

    #[test]
    fn figure_one_sentence() {
        let cfg = ParseConfig::default();
        let out = parse(&toks("3 is even"), &even_lexicon(), &cfg).unwrap();
        assert!(!out.derivations.is_empty());
        let forms = logical_forms(&out.derivations, &cfg).unwrap();
        assert_eq!(forms, vec![parse_term("3 % 2 = 0").unwrap()]);
    }

    #[test]
    fn scrambled_sentence_has_no_parse() {
        let out = parse(&toks("even is 3"), &even_lexicon(), &ParseConfig::default()).unwrap();
        assert!(out.derivations.is_empty());
        assert!(!out.truncated);
    }

    #[test]
    fn unknown_words_are_listed() {
        let err = parse(&toks("flibbertigibbet is even"), &even_lexicon(), &ParseConfig::default()).unwrap_err();
        assert_eq!(err, ParseError::UnknownWords(vec!["flibbertigibbet".into()]));
        assert_eq!(parse(&[], &even_lexicon(), &ParseConfig::default()).unwrap_err(), ParseError::Empty);
    }

    #[test]
    fn cap_truncates_and_flags() {
        let cfg = ParseConfig { max_derivations: 1, ..ParseConfig::default() };
        let out = parse(&toks("3 is even"), &even_lexicon(), &cfg).unwrap();
        assert_eq!(out.derivations.len(), 1);
        assert!(out.found > 1);
        assert!(out.truncated);
    }

    #[test]
    fn raising_can_be_disabled() {
        let cfg = ParseConfig { enable_type_raising: false, ..ParseConfig::default() };
        let out = parse(&toks("3 is even"), &even_lexicon(), &cfg).unwrap();
        assert_eq!(out.found, 1);
        assert_eq!(out.derivations[0].root.rule, Rule::BackwardApp);
    }

    #[test]
    fn empty_derivation_list_has_no_forms() {
        assert!(logical_forms(&[], &ParseConfig::default()).unwrap().is_empty());
    }
}
