//! Checks the chart parser against independently written oracles.

mod common;

use std::collections::HashMap;
use std::sync::Arc;

use nl2pbt_core::corpus::shipped::sttp_cases;
use nl2pbt_core::grammar::{Category, Direction};
use nl2pbt_core::lexicon::{shipped, tokenize, Lexicon};
use nl2pbt_core::logic::{alpha_equal, Term};
use nl2pbt_core::parser::{logical_forms, parse, ChartItem, ParseConfig, Rule};

const EVEN_LEX: &str = r"
3 => NP : 3
is => (S\NP)/ADJ : \p.\n.p(n)
even => ADJ : \n.(n % 2 = 0)
";

fn words(s: &str) -> Vec<String> {
    tokenize(s).unwrap()
}

// ---- category-level brute force -------------------------------------------

fn matches(expected: &Category, actual: &Category) -> bool {
    match (expected, actual) {
        (Category::Prim { name: a, feature: fa }, Category::Prim { name: b, feature: fb }) => {
            a == b && (fa.is_none() || fa == fb)
        }
        (
            Category::Slash { dir: d1, result: r1, arg: a1, modality: m1 },
            Category::Slash { dir: d2, result: r2, arg: a2, modality: m2 },
        ) => d1 == d2 && m1 == m2 && matches(r1, r2) && matches(a1, a2),
        _ => false,
    }
}

fn parts(c: &Category) -> Option<(Direction, Category, Category, bool)> {
    match c {
        Category::Slash { dir, result, arg, modality } => {
            let app_only = matches!(modality.as_deref(), Some("⋆") | Some("*"));
            Some((*dir, (**result).clone(), (**arg).clone(), app_only))
        }
        _ => None,
    }
}

fn fwd(r: Category, a: Category) -> Category {
    Category::right(r, a)
}

fn bwd(r: Category, a: Category) -> Category {
    Category::left(r, a)
}

/// Every category derivable from `l` and `r` by one binary rule, with
/// multiplicity.
fn brute_combine(l: &Category, r: &Category) -> Vec<Category> {
    use Direction::{Left, Right};
    let mut out = Vec::new();
    let lp = parts(l);
    let rp = parts(r);
    if let Some((Right, x, y, _)) = &lp {
        if matches(y, r) {
            out.push(x.clone());
        }
    }
    if let Some((Left, x, y, _)) = &rp {
        if matches(y, l) {
            out.push(x.clone());
        }
    }
    let (Some((ld, lres, larg, lstar)), Some((rd, rres, rarg, rstar))) = (lp, rp) else {
        return out;
    };
    if lstar || rstar {
        return out;
    }
    // X/Y Y/Z => X/Z
    if ld == Right && rd == Right && matches(&larg, &rres) {
        out.push(fwd(lres.clone(), rarg.clone()));
    }
    // Y\Z X\Y => X\Z
    if ld == Left && rd == Left && matches(&rarg, &lres) {
        out.push(bwd(rres.clone(), larg.clone()));
    }
    // Y/Z X\Y => X/Z
    if ld == Right && rd == Left && matches(&rarg, &lres) {
        out.push(fwd(rres.clone(), larg.clone()));
    }
    // (X/Y)/Z Y/Z => X/Z
    if ld == Right && rd == Right {
        if let Some((Right, x, y, false)) = parts(&lres) {
            if matches(&y, &rres) && matches(&larg, &rarg) {
                out.push(fwd(x, larg.clone()));
            }
        }
    }
    // Y/Z (X\Y)/Z => X/Z
    if ld == Right && rd == Right {
        if let Some((Left, x, y, false)) = parts(&rres) {
            if matches(&y, &lres) && matches(&rarg, &larg) {
                out.push(fwd(x, rarg.clone()));
            }
        }
    }
    out
}

fn with_raised(mut cats: Vec<Category>) -> Vec<Category> {
    let s = Category::prim("S");
    let raised: Vec<Category> = cats
        .iter()
        .filter(|c| c.is_prim() && !matches(&s, c))
        .flat_map(|c| [fwd(s.clone(), bwd(s.clone(), c.clone())), bwd(s.clone(), fwd(s.clone(), c.clone()))])
        .collect();
    cats.extend(raised);
    cats
}

struct Brute {
    lexical: Vec<Vec<Category>>,
    memo: HashMap<(usize, usize), Vec<Category>>,
}

impl Brute {
    fn new(tokens: &[String], lex: &Lexicon) -> Brute {
        let lexical = tokens.iter().map(|t| lex.lookup(t).into_iter().map(|e| e.category).collect()).collect();
        Brute { lexical, memo: HashMap::new() }
    }

    /// All categories spanning `[i, j)`, one per derivation.
    fn span(&mut self, i: usize, j: usize) -> Vec<Category> {
        if let Some(v) = self.memo.get(&(i, j)) {
            return v.clone();
        }
        let base = if j == i + 1 {
            self.lexical[i].clone()
        } else {
            let mut acc = Vec::new();
            for k in i + 1..j {
                let left = self.span(i, k);
                let right = self.span(k, j);
                for l in &left {
                    for r in &right {
                        acc.extend(brute_combine(l, r));
                    }
                }
            }
            acc
        };
        let all = with_raised(base);
        self.memo.insert((i, j), all.clone());
        all
    }

    fn sentence_count(&mut self, n: usize) -> usize {
        self.span(0, n).iter().filter(|c| c.is_prim_named("S")).count()
    }
}

fn brute_count(sentence: &str, lex: &Lexicon) -> usize {
    let toks = words(sentence);
    Brute::new(&toks, lex).sentence_count(toks.len())
}

#[test]
fn even_lexicon_rejects_even_is_3() {
    let lex = Lexicon::load(EVEN_LEX, "even").unwrap();
    assert_eq!(brute_count("even is 3", &lex), 0);
    let out = parse(&words("even is 3"), &lex, &ParseConfig::default()).unwrap();
    assert_eq!(out.found, 0);
    assert!(out.derivations.is_empty());
    let cfg = ParseConfig::default();
    let out = parse(&words("3 is even"), &lex, &cfg).unwrap();
    assert_eq!(out.found, brute_count("3 is even", &lex));
    assert_eq!(logical_forms(&out.derivations, &cfg).unwrap().len(), 1);
}

#[test]
fn parse_counts_match_brute_force() {
    let lex = shipped::sttp();
    for case in sttp_cases() {
        let out = parse(&words(&case.sentence), &lex, &ParseConfig::default()).unwrap();
        assert_eq!(out.found, brute_count(&case.sentence, &lex), "{}", case.sentence);
    }
    let ext = shipped::extended();
    for s in ["every integer that is passing is even", "any positive integer is divisible by 2"] {
        let out = parse(&words(s), &ext, &ParseConfig::default()).unwrap();
        assert_eq!(out.found, brute_count(s, &ext), "{s}");
    }
}

// ---- semantic replay --------------------------------------------------------

fn expected_semantics(item: &ChartItem) -> Option<Term> {
    let sem = |i: usize| item.children[i].semantics.clone();
    let w = || Term::var("w9");
    Some(match item.rule {
        Rule::Lex => return None,
        Rule::ForwardApp => Term::app(sem(0), sem(1)),
        Rule::BackwardApp => Term::app(sem(1), sem(0)),
        Rule::ForwardComp => Term::lam("w9", Term::app(sem(0), Term::app(sem(1), w()))),
        Rule::BackwardComp | Rule::BackwardCrossedComp => Term::lam("w9", Term::app(sem(1), Term::app(sem(0), w()))),
        Rule::ForwardSubst => Term::lam("w9", Term::app(Term::app(sem(0), w()), Term::app(sem(1), w()))),
        Rule::BackwardCrossedSubst => Term::lam("w9", Term::app(Term::app(sem(1), w()), Term::app(sem(0), w()))),
        Rule::ForwardRaise | Rule::BackwardRaise => Term::lam("w9", Term::app(w(), sem(0))),
    })
}

fn replay(item: &Arc<ChartItem>, tokens: &[String], lex: &Lexicon, visited: &mut usize) {
    *visited += 1;
    match item.rule {
        Rule::Lex => {
            assert!(item.children.is_empty());
            assert_eq!(item.span.1, item.span.0 + 1);
            let entries = lex.lookup(&tokens[item.span.0]);
            assert!(entries.iter().any(|e| e.category == item.category && e.semantics == item.semantics));
        }
        Rule::ForwardRaise | Rule::BackwardRaise => {
            assert_eq!(item.children.len(), 1);
            assert_eq!(item.span, item.children[0].span);
        }
        _ => {
            assert_eq!(item.children.len(), 2);
            let (l, r) = (&item.children[0], &item.children[1]);
            assert_eq!((l.span.0, l.span.1, r.span.1), (item.span.0, r.span.0, item.span.1));
            assert!(brute_combine(&l.category, &r.category).contains(&item.category));
        }
    }
    if let Some(expected) = expected_semantics(item) {
        assert!(alpha_equal(&expected, &item.semantics), "{} vs {}", expected, item.semantics);
    }
    for c in &item.children {
        replay(c, tokens, lex, visited);
    }
}

#[test]
fn every_derivation_step_replays() {
    let lex = shipped::sttp();
    for case in sttp_cases() {
        let toks = words(&case.sentence);
        let out = parse(&toks, &lex, &ParseConfig::default()).unwrap();
        assert!(!out.derivations.is_empty());
        for d in &out.derivations {
            let mut visited = 0;
            replay(&d.root, &toks, &lex, &mut visited);
            assert_eq!(visited, d.root.node_count());
        }
    }
}

#[test]
fn parsing_is_deterministic() {
    let lex = shipped::sttp();
    let cfg = ParseConfig::default();
    for case in sttp_cases() {
        let toks = words(&case.sentence);
        let a = parse(&toks, &lex, &cfg).unwrap();
        let b = parse(&toks, &lex, &cfg).unwrap();
        assert_eq!(a.found, b.found);
        let (fa, fb) = (logical_forms(&a.derivations, &cfg).unwrap(), logical_forms(&b.derivations, &cfg).unwrap());
        assert_eq!(fa, fb);
        for (x, y) in a.derivations.iter().zip(&b.derivations) {
            assert_eq!(x.root, y.root);
        }
    }
}

#[test]
fn extending_the_lexicon_only_adds_parses() {
    let base = shipped::sttp();
    let ext = shipped::extended();
    let cfg = ParseConfig::default();
    for case in sttp_cases() {
        let toks = words(&case.sentence);
        let a = parse(&toks, &base, &cfg).unwrap();
        let b = parse(&toks, &ext, &cfg).unwrap();
        assert!(a.found <= b.found);
        let fb = logical_forms(&b.derivations, &cfg).unwrap();
        for f in logical_forms(&a.derivations, &cfg).unwrap() {
            assert!(fb.iter().any(|g| alpha_equal(&f, g)));
        }
    }
}

#[test]
fn scrambled_sentences_do_not_parse() {
    let lex = shipped::sttp();
    let cases = sttp_cases();
    let sentences: Vec<String> = cases.iter().map(|c| c.sentence.clone()).collect();
    let scrambles = common::scrambles(&sentences);
    assert_eq!(scrambles.len(), 5);
    for toks in scrambles {
        let out = parse(&toks, &lex, &ParseConfig::default()).unwrap();
        assert_eq!(out.found, 0, "{}", toks.join(" "));
        assert_eq!(Brute::new(&toks, &lex).sentence_count(toks.len()), 0);
    }
}

#[test]
fn truncation_caps_derivations() {
    let lex = shipped::sttp();
    let case = &sttp_cases()[3];
    let full = parse(&words(&case.sentence), &lex, &ParseConfig::default()).unwrap();
    assert!(full.found > 2 && !full.truncated);
    let capped =
        parse(&words(&case.sentence), &lex, &ParseConfig { max_derivations: 2, ..ParseConfig::default() }).unwrap();
    assert_eq!((capped.derivations.len(), capped.found, capped.truncated), (2, full.found, true));
}
