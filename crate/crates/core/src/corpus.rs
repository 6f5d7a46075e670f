//! Golden sentence/logical-form fixtures and the equivalence used to judge
//! parser output against them.
//!
//! Corpus files hold one case per line:
//!
//! ```text
//! id | sentence | expected term | yes/no | notes
//! ```
//!
//! The expected term may itself contain `|`, so the id and sentence are read
//! from the left and the adequacy flag and notes from the right.

use std::sync::Arc;

use crate::lexicon::{tokenize, Lexicon};
use crate::logic::{beta_normalize, free_vars, parse_term, Const, Term, TermError, DEFAULT_FUEL};
use crate::parser::{logical_forms, parse, ParseConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusCase {
    pub id: u32,
    pub sentence: String,
    pub expected_form: Term,
    /// The generated test holds for a correct implementation.
    pub expected_adequate: bool,
    pub notes: String,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CorpusErrorKind {
    #[error("expected `id | sentence | term | yes/no | notes`")]
    Format,
    #[error("bad case id {0:?}")]
    Id(String),
    #[error("adequacy must be yes or no, found {0:?}")]
    Adequacy(String),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("expected form must be closed and beta-normal")]
    NotClosedNormal,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{source_name}:{line}: {kind}")]
pub struct CorpusError {
    pub source_name: String,
    pub line: usize,
    pub kind: CorpusErrorKind,
}

pub fn load_corpus(text: &str, source_name: &str) -> Result<Vec<CorpusCase>, CorpusError> {
    let mut cases = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let fail = |kind| CorpusError { source_name: source_name.to_string(), line: idx + 1, kind };
        let mut left = content.splitn(3, '|');
        let (Some(id), Some(sentence), Some(rest)) = (left.next(), left.next(), left.next()) else {
            return Err(fail(CorpusErrorKind::Format));
        };
        let mut right = rest.rsplitn(3, '|');
        let (Some(notes), Some(adequate), Some(term)) = (right.next(), right.next(), right.next()) else {
            return Err(fail(CorpusErrorKind::Format));
        };
        let id = id.trim();
        let id: u32 = id.parse().map_err(|_| fail(CorpusErrorKind::Id(id.to_string())))?;
        let adequate = adequate.trim();
        let expected_adequate = match adequate.strip_prefix("adequate:").unwrap_or(adequate).trim() {
            "yes" => true,
            "no" => false,
            _ => return Err(fail(CorpusErrorKind::Adequacy(adequate.to_string()))),
        };
        let expected_form = parse_term(term.trim()).map_err(|e| fail(e.into()))?;
        if !free_vars(&expected_form).is_empty() || !expected_form.is_beta_normal() {
            return Err(fail(CorpusErrorKind::NotClosedNormal));
        }
        cases.push(CorpusCase {
            id,
            sentence: sentence.trim().to_string(),
            expected_form,
            expected_adequate,
            notes: notes.trim().to_string(),
        });
    }
    Ok(cases)
}

/// Puts comparisons into one canonical shape so fused and spelled-out
/// renderings compare equal:
///
/// * `lessthanoreq(a,b)` becomes `lessthan(a,b) | equals(a,b)`;
/// * `equals(a,b)` with a constant `b` and non-constant `a` is flipped so
///   the constant comes first (equality is symmetric);
///
/// and beta-normalizes the result. `==` needs no handling: it already
/// parses to the same node as `=`.
pub fn comparison_normalize(t: &Term) -> Term {
    let rewritten = rewrite_comparisons(t);
    beta_normalize(&rewritten, DEFAULT_FUEL).unwrap_or(rewritten)
}

fn rewrite_comparisons(t: &Term) -> Term {
    let (head, args) = t.spine();
    if let (Term::Const(Const::Name(name)), [a, b]) = (head, args.as_slice()) {
        let (a, b) = (rewrite_comparisons(a), rewrite_comparisons(b));
        match name.as_str() {
            "lessthanoreq" => {
                return Term::or(Term::apply(Term::name("lessthan"), [a.clone(), b.clone()]), equals(a, b));
            }
            "equals" => return equals(a, b),
            _ => {}
        }
    }
    match t {
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::Lam(p, b) => Term::Lam(p.clone(), Arc::new(rewrite_comparisons(b))),
        Term::App(f, a) => Term::app(rewrite_comparisons(f), rewrite_comparisons(a)),
        Term::And(l, r) => Term::and(rewrite_comparisons(l), rewrite_comparisons(r)),
        Term::Or(l, r) => Term::or(rewrite_comparisons(l), rewrite_comparisons(r)),
        Term::Eq(l, r) => Term::eq(rewrite_comparisons(l), rewrite_comparisons(r)),
        Term::Not(b) => Term::not(rewrite_comparisons(b)),
    }
}

fn equals(a: Term, b: Term) -> Term {
    let (a, b) = match (&a, &b) {
        (x, Term::Const(_)) if !matches!(x, Term::Const(_)) => (b, a),
        _ => (a, b),
    };
    Term::apply(Term::name("equals"), [a, b])
}

/// True iff the parser produced exactly one form and it matches the fixture
/// after comparison normalization, up to bound-variable names.
pub fn match_case(case: &CorpusCase, forms: &[Term]) -> bool {
    match forms {
        [only] => crate::logic::alpha_equal(&comparison_normalize(only), &comparison_normalize(&case.expected_form)),
        _ => false,
    }
}

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub id: u32,
    pub sentence: String,
    pub parse_count: usize,
    pub truncated: bool,
    pub forms: Vec<Term>,
    pub matched: bool,
    /// Tokenizer, parser or normalizer failure, if any.
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct EvalReport {
    pub cases: Vec<CaseResult>,
}

impl EvalReport {
    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.matched).count()
    }

    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(|c| c.matched)
    }
}

pub fn evaluate_case(case: &CorpusCase, lex: &Lexicon, cfg: &ParseConfig) -> CaseResult {
    let mut result = CaseResult {
        id: case.id,
        sentence: case.sentence.clone(),
        parse_count: 0,
        truncated: false,
        forms: Vec::new(),
        matched: false,
        error: None,
    };
    let outcome = tokenize(&case.sentence)
        .map_err(|e| e.to_string())
        .and_then(|toks| parse(&toks, lex, cfg).map_err(|e| e.to_string()));
    match outcome {
        Ok(out) => {
            result.parse_count = out.found;
            result.truncated = out.truncated;
            match logical_forms(&out.derivations, cfg) {
                Ok(forms) => {
                    result.matched = match_case(case, &forms);
                    result.forms = forms;
                }
                Err(e) => result.error = Some(e.to_string()),
            }
        }
        Err(e) => result.error = Some(e),
    }
    result
}

pub fn evaluate(cases: &[CorpusCase], lex: &Lexicon, cfg: &ParseConfig) -> EvalReport {
    EvalReport { cases: cases.iter().map(|c| evaluate_case(c, lex, cfg)).collect() }
}

pub mod shipped {
    use super::{load_corpus, CorpusCase};

    pub const STTP: &str = include_str!("../../../corpus/sttp.corpus");
    pub const EXTENDED: &str = include_str!("../../../corpus/extended.txt");

    pub fn sttp_cases() -> Vec<CorpusCase> {
        load_corpus(STTP, "corpus/sttp.corpus").expect("shipped corpus is well formed")
    }
}
