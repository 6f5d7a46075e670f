//! Parses English property descriptions with a combinatory categorial
//! grammar into lambda-calculus logical forms, and emits fast-check
//! property tests from those forms.

pub mod codegen;
pub mod corpus;
pub mod grammar;
pub mod lexicon;
pub mod logic;
pub mod parser;

pub use codegen::{
    emit_file, emit_prelude, emit_test, render_derivation, render_test_file, EmitConfig, EmitError, EmittedTest,
};
pub use corpus::{
    comparison_normalize, evaluate, load_corpus, match_case, CaseResult, CorpusCase, CorpusError, EvalReport,
};
pub use grammar::{categories_match, parse_category, print_category, Category, CategoryError, Direction};
pub use lexicon::{tokenize, LexEntry, Lexicon, LexiconError};
pub use logic::{alpha_equal, beta_normalize, free_vars, parse_term, print_term, substitute, Const, Term, TermError};
pub use parser::{logical_forms, parse, ChartItem, Derivation, ParseConfig, ParseError, ParseOutcome, Rule};
