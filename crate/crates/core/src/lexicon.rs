//! Word → (category, semantics) entries.
//!
//! Lexicon files hold one entry per line:
//!
//! ```text
//! # comment
//! not => ADJ/ADJ : \P.\x.-P(x)
//! ```
//!
//! Numerals and double-quoted strings never need entries: [`Lexicon::lookup`]
//! synthesizes `NP` entries for them.

use std::collections::HashMap;
use std::fmt;

use crate::grammar::{parse_category, Category, CategoryError};
use crate::logic::{free_vars, parse_term, Const, Term, TermError};

#[derive(Debug, Clone, PartialEq)]
pub struct LexEntry {
    pub token: String,
    pub category: Category,
    pub semantics: Term,
    /// File (or other label) and 1-based line the entry came from; `None`
    /// for synthesized literal entries.
    pub origin: Option<(String, usize)>,
}

impl LexEntry {
    pub fn new(token: impl Into<String>, category: Category, semantics: Term) -> LexEntry {
        LexEntry { token: token.into(), category, semantics, origin: None }
    }

    /// Same word, category and semantics, wherever they were loaded from.
    pub fn same_content(&self, other: &LexEntry) -> bool {
        self.token == other.token && self.category == other.category && self.semantics == other.semantics
    }
}

impl fmt::Display for LexEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {} : {}", self.token, self.category, self.semantics)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LexiconErrorKind {
    #[error("expected `token => CATEGORY : TERM`")]
    Format,
    #[error("token {0:?} contains whitespace")]
    Whitespace(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("semantics has free variables: {0}")]
    OpenTerm(String),
    #[error("cannot read file: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{source_name}:{line}: {kind}")]
pub struct LexiconError {
    pub source_name: String,
    pub line: usize,
    pub kind: LexiconErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexiconWarning {
    pub source_name: String,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for LexiconWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: warning: {}", self.source_name, self.line, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lexicon {
    entries: Vec<LexEntry>,
    by_token: HashMap<String, Vec<usize>>,
    warnings: Vec<LexiconWarning>,
}

impl Lexicon {
    pub fn new() -> Lexicon {
        Lexicon::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = LexEntry>) -> Lexicon {
        let mut lex = Lexicon::new();
        for e in entries {
            lex.push(e);
        }
        lex
    }

    fn push(&mut self, mut entry: LexEntry) {
        entry.token = entry.token.to_lowercase();
        self.by_token.entry(entry.token.clone()).or_default().push(self.entries.len());
        self.entries.push(entry);
    }

    /// Parses lexicon text; `source_name` labels diagnostics.
    pub fn load(text: &str, source_name: &str) -> Result<Lexicon, LexiconError> {
        let mut lex = Lexicon::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let fail = |kind: LexiconErrorKind| LexiconError { source_name: source_name.to_string(), line, kind };
            let (token, rest) = content.split_once("=>").ok_or_else(|| fail(LexiconErrorKind::Format))?;
            let (cat, sem) = rest.split_once(':').ok_or_else(|| fail(LexiconErrorKind::Format))?;
            let token = token.trim();
            if token.is_empty() {
                return Err(fail(LexiconErrorKind::Format));
            }
            if token.chars().any(char::is_whitespace) {
                return Err(fail(LexiconErrorKind::Whitespace(token.to_string())));
            }
            let category = parse_category(cat.trim()).map_err(|e| fail(e.into()))?;
            let semantics = parse_term(sem.trim()).map_err(|e| fail(e.into()))?;
            let open = free_vars(&semantics);
            if !open.is_empty() {
                let names: Vec<_> = open.into_iter().collect();
                return Err(fail(LexiconErrorKind::OpenTerm(names.join(", "))));
            }
            let entry = LexEntry {
                token: token.to_lowercase(),
                category,
                semantics,
                origin: Some((source_name.to_string(), line)),
            };
            if lex.stored(&entry.token).any(|e| e.same_content(&entry)) {
                lex.warnings.push(LexiconWarning {
                    source_name: source_name.to_string(),
                    line,
                    message: format!("duplicate entry `{entry}`"),
                });
            }
            lex.push(entry);
        }
        Ok(lex)
    }

    pub fn load_file(path: &std::path::Path) -> Result<Lexicon, LexiconError> {
        let name = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| LexiconError {
            source_name: name.clone(),
            line: 0,
            kind: LexiconErrorKind::Io(e.to_string()),
        })?;
        Lexicon::load(&text, &name)
    }

    /// Union of both lexicons; `extension`'s entries come after `self`'s for
    /// every token. Nothing is removed.
    pub fn merge(&self, extension: &Lexicon) -> Lexicon {
        let mut out = self.clone();
        for e in &extension.entries {
            out.push(e.clone());
        }
        out.warnings.extend(extension.warnings.iter().cloned());
        out
    }

    fn stored<'a>(&'a self, token: &str) -> impl Iterator<Item = &'a LexEntry> + 'a {
        self.by_token.get(token).into_iter().flatten().map(|&i| &self.entries[i])
    }

    /// Stored entries for `token`, followed by a synthesized `NP` entry when
    /// the token is a numeral or a double-quoted string and no stored entry
    /// already says the same thing.
    pub fn lookup(&self, token: &str) -> Vec<LexEntry> {
        let mut out: Vec<LexEntry> = self.stored(token).cloned().collect();
        if let Some(c) = literal_constant(token) {
            let synth = LexEntry::new(token, Category::prim("NP"), Term::Const(c));
            if !out.iter().any(|e| e.same_content(&synth)) {
                out.push(synth);
            }
        }
        out
    }

    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct surface words with stored entries.
    pub fn word_count(&self) -> usize {
        self.by_token.len()
    }

    pub fn warnings(&self) -> &[LexiconWarning] {
        &self.warnings
    }
}

/// Constant denoted by a numeral (`5`, `10.1`) or quoted string token.
pub fn literal_constant(token: &str) -> Option<Const> {
    if token.len() >= 2 && token.starts_with('"') && token.ends_with('"') {
        return Some(Const::Str(token[1..token.len() - 1].to_string()));
    }
    let (int, frac) = match token.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (token, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if digits(int) && frac.is_none_or(digits) {
        Some(Const::Num(token.to_string()))
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TokenizeError {
    #[error("unbalanced quote starting at byte {pos}")]
    UnbalancedQuote { pos: usize },
}

/// Splits on whitespace, keeps `"..."` spans whole, drops trailing sentence
/// punctuation and lowercases everything but string literals.
pub fn tokenize(sentence: &str) -> Result<Vec<String>, TokenizeError> {
    fn flush(word: &mut String, out: &mut Vec<String>) {
        let trimmed = word.trim_end_matches(['.', ',', '!', '?']);
        if !trimmed.is_empty() {
            out.push(trimmed.to_lowercase());
        }
        word.clear();
    }

    let mut out = Vec::new();
    let mut word = String::new();
    let mut chars = sentence.char_indices();
    while let Some((pos, c)) = chars.next() {
        if c == '"' {
            flush(&mut word, &mut out);
            let mut literal = String::from('"');
            loop {
                match chars.next() {
                    Some((_, '"')) => break,
                    Some((_, ch)) => literal.push(ch),
                    None => return Err(TokenizeError::UnbalancedQuote { pos }),
                }
            }
            literal.push('"');
            out.push(literal);
        } else if c.is_whitespace() {
            flush(&mut word, &mut out);
        } else {
            word.push(c);
        }
    }
    flush(&mut word, &mut out);
    Ok(out)
}

/// Lexicon files shipped with the crate.
pub mod shipped {
    use super::Lexicon;

    pub const CORE: &str = include_str!("../../../lexicon/core.lex");
    pub const STTP: &str = include_str!("../../../lexicon/sttp.lex");
    pub const EXTRAS: &str = include_str!("../../../lexicon/extras.lex");

    fn load(text: &str, name: &str) -> Lexicon {
        Lexicon::load(text, name).expect("shipped lexicon is well formed")
    }

    pub fn core() -> Lexicon {
        load(CORE, "lexicon/core.lex")
    }

    pub fn sttp_domain() -> Lexicon {
        load(STTP, "lexicon/sttp.lex")
    }

    pub fn extras() -> Lexicon {
        load(EXTRAS, "lexicon/extras.lex")
    }

    /// `core.lex` merged with `sttp.lex`: the lexicon the corpus is run with.
    pub fn sttp() -> Lexicon {
        core().merge(&sttp_domain())
    }

    /// [`sttp`] plus `extras.lex`.
    pub fn extended() -> Lexicon {
        sttp().merge(&extras())
    }
}
