//! CCG categories: primitives with an optional feature (`CN[Gen]`) and
//! directional slash types (`A/B` looks right for a `B`, `A\B` looks left).

use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CategoryError {
    #[error("category syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown character {ch:?} at byte {pos}")]
    UnknownChar { pos: usize, ch: char },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Right,
    Left,
}

/// Slash modality restricting a slash to plain application.
pub const APPLICATION_ONLY: &str = "⋆";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Category {
    Prim { name: String, feature: Option<String> },
    Slash { dir: Direction, result: Arc<Category>, arg: Arc<Category>, modality: Option<String> },
}

impl Category {
    pub fn prim(name: impl Into<String>) -> Category {
        Category::Prim { name: name.into(), feature: None }
    }

    pub fn featured(name: impl Into<String>, feature: impl Into<String>) -> Category {
        Category::Prim { name: name.into(), feature: Some(feature.into()) }
    }

    /// `result/arg`
    pub fn right(result: Category, arg: Category) -> Category {
        Category::Slash { dir: Direction::Right, result: Arc::new(result), arg: Arc::new(arg), modality: None }
    }

    /// `result\arg`
    pub fn left(result: Category, arg: Category) -> Category {
        Category::Slash { dir: Direction::Left, result: Arc::new(result), arg: Arc::new(arg), modality: None }
    }

    pub fn with_modality(self, m: impl Into<String>) -> Category {
        match self {
            Category::Slash { dir, result, arg, .. } => Category::Slash { dir, result, arg, modality: Some(m.into()) },
            prim => prim,
        }
    }

    pub fn is_prim(&self) -> bool {
        matches!(self, Category::Prim { .. })
    }

    /// True for a primitive with this name, whatever its feature.
    pub fn is_prim_named(&self, n: &str) -> bool {
        matches!(self, Category::Prim { name, .. } if name == n)
    }

    /// Slash restricted to forward/backward application.
    pub fn application_only(&self) -> bool {
        matches!(self, Category::Slash { modality: Some(m), .. } if m == APPLICATION_ONLY || m == "*")
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_category(self))
    }
}

/// Argument matching for rule application. An unfeatured primitive on the
/// expected side accepts the same primitive with any feature; a featured one
/// accepts only the identical feature. The relation is therefore not
/// symmetric: `CN` matches `CN[Gen]` but `CN[Gen]` does not match `CN`.
pub fn categories_match(expected: &Category, actual: &Category) -> bool {
    match (expected, actual) {
        (Category::Prim { name: n1, feature: f1 }, Category::Prim { name: n2, feature: f2 }) => {
            n1 == n2 && (f1.is_none() || f1 == f2)
        }
        (
            Category::Slash { dir: d1, result: r1, arg: a1, modality: m1 },
            Category::Slash { dir: d2, result: r2, arg: a2, modality: m2 },
        ) => d1 == d2 && m1 == m2 && categories_match(r1, r2) && categories_match(a1, a2),
        _ => false,
    }
}

/// Renders with the result on the left; any slash category nested inside
/// another is parenthesized, e.g. `((S/(S\NP))/CN[Gen])/ADJ`.
pub fn print_category(c: &Category) -> String {
    let mut out = String::new();
    write_category(c, false, &mut out);
    out
}

fn write_category(c: &Category, nested: bool, out: &mut String) {
    match c {
        Category::Prim { name, feature } => {
            out.push_str(name);
            if let Some(f) = feature {
                out.push('[');
                out.push_str(f);
                out.push(']');
            }
        }
        Category::Slash { dir, result, arg, modality } => {
            if nested {
                out.push('(');
            }
            write_category(result, true, out);
            out.push(match dir {
                Direction::Right => '/',
                Direction::Left => '\\',
            });
            if let Some(m) = modality {
                out.push_str(m);
            }
            write_category(arg, true, out);
            if nested {
                out.push(')');
            }
        }
    }
}

/// Parses category text. Slashes associate to the left, so `A/B\C` is
/// `(A/B)\C`. A modality symbol may directly follow a slash (`S/⋆NP`).
pub fn parse_category(text: &str) -> Result<Category, CategoryError> {
    let mut p = CatParser { src: text, chars: text.char_indices().collect(), at: 0 };
    let c = p.slashed()?;
    p.skip_ws();
    if let Some(&(pos, ch)) = p.chars.get(p.at) {
        return Err(CategoryError::Syntax { pos, message: format!("unexpected {ch:?}") });
    }
    Ok(c)
}

struct CatParser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    at: usize,
}

fn is_modality(c: char) -> bool {
    matches!(c, '⋆' | '*' | '◇' | '×' | '·' | '!')
}

impl CatParser<'_> {
    fn skip_ws(&mut self) {
        while matches!(self.chars.get(self.at), Some((_, c)) if c.is_whitespace()) {
            self.at += 1;
        }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.src.len(), |&(p, _)| p)
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, CategoryError> {
        Err(CategoryError::Syntax { pos: self.pos(), message: message.into() })
    }

    fn slashed(&mut self) -> Result<Category, CategoryError> {
        let mut lhs = self.atom()?;
        while let Some(c @ ('/' | '\\')) = self.peek() {
            self.at += 1;
            let modality = match self.chars.get(self.at) {
                Some(&(_, m)) if is_modality(m) => {
                    self.at += 1;
                    Some(m.to_string())
                }
                _ => None,
            };
            let rhs = self.atom()?;
            let dir = if c == '/' { Direction::Right } else { Direction::Left };
            lhs = Category::Slash { dir, result: Arc::new(lhs), arg: Arc::new(rhs), modality };
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<Category, CategoryError> {
        match self.peek() {
            Some('(') => {
                self.at += 1;
                let inner = self.slashed()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.at += 1;
                Ok(inner)
            }
            Some(c) if c.is_alphanumeric() || c == '_' => {
                let name = self.word();
                let feature = if self.chars.get(self.at).map(|&(_, c)| c) == Some('[') {
                    self.at += 1;
                    let f = self.word();
                    if f.is_empty() {
                        return self.err("expected a feature name");
                    }
                    if self.chars.get(self.at).map(|&(_, c)| c) != Some(']') {
                        return self.err("expected ']'");
                    }
                    self.at += 1;
                    Some(f)
                } else {
                    None
                };
                Ok(Category::Prim { name, feature })
            }
            Some(c) if matches!(c, ')' | '/' | '\\' | '[' | ']') => {
                self.err(format!("expected a category, found {c:?}"))
            }
            Some(c) => Err(CategoryError::UnknownChar { pos: self.pos(), ch: c }),
            None => self.err("expected a category, found end of input"),
        }
    }

    fn word(&mut self) -> String {
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.get(self.at) {
            if c.is_alphanumeric() || c == '_' {
                s.push(c);
                self.at += 1;
            } else {
                break;
            }
        }
        s
    }
}
