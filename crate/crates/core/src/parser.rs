//! Text front end for set-constraint models.
//!
//! ```text
//! universe a b c;
//! set F support {a b};
//! set G support {a b c};
//! constraint a in F;
//! constraint F subset G;
//! constraint card G == 2;
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use std::fmt;

use thiserror::Error;

use crate::model::{Constraint, ModelDraft, ModelError, ProblemModel};

/// Location of a token in the source text. Lines and columns are 1-based,
/// offsets are byte positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{span}: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Semi,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    EqEq,
    NotEq,
    Le,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::EqEq => write!(f, "`==`"),
            Tok::NotEq => write!(f, "`!=`"),
            Tok::Le => write!(f, "`<=`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '\'' | '-')
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut line_start = 0;
    let mut chars = text.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        let span_at = |end: usize| SourceSpan {
            line,
            column: text[line_start..start].chars().count() + 1,
            start,
            end,
        };
        if c == '\n' {
            chars.next();
            line += 1;
            line_start = start + 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&(_, c)| c != '\n') {
                chars.next();
            }
            continue;
        }
        if is_ident_char(c) {
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                if !is_ident_char(c) {
                    break;
                }
                end = i + c.len_utf8();
                chars.next();
            }
            out.push((Tok::Ident(text[start..end].to_string()), span_at(end)));
            continue;
        }
        chars.next();
        let single = match c {
            ';' => Some(Tok::Semi),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, span_at(start + 1)));
            continue;
        }
        let pair = match (c, chars.peek().map(|&(_, c)| c)) {
            ('=', Some('=')) => Some(Tok::EqEq),
            ('!', Some('=')) => Some(Tok::NotEq),
            ('<', Some('=')) => Some(Tok::Le),
            _ => None,
        };
        match pair {
            Some(tok) => {
                chars.next();
                out.push((tok, span_at(start + 2)));
            }
            None => {
                return Err(ParseError::Syntax {
                    span: span_at(start + c.len_utf8()),
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    let end = text.len();
    out.push((
        Tok::Eof,
        SourceSpan {
            line,
            column: text[line_start..].chars().count() + 1,
            start: end,
            end,
        },
    ));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(ParseError::Syntax {
            span: self.span(),
            message: format!("expected {expected}, found {}", self.peek()),
        })
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&tok.to_string())
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Tok::Ident(_) => match self.bump() {
                Tok::Ident(s) => Ok(s),
                _ => unreachable!(),
            },
            _ => self.error("a name"),
        }
    }

    fn keyword(&mut self, word: &str) -> PResult<()> {
        if matches!(self.peek(), Tok::Ident(s) if s == word) {
            self.bump();
            Ok(())
        } else {
            self.error(&format!("`{word}`"))
        }
    }

    fn is_keyword(&self, ahead: usize, word: &str) -> bool {
        matches!(self.peek_at(ahead), Tok::Ident(s) if s == word)
    }

    fn integer(&mut self) -> PResult<usize> {
        let span = self.span();
        let text = self.ident()?;
        text.parse().map_err(|_| ParseError::Syntax {
            span,
            message: format!("expected a non-negative integer, found `{text}`"),
        })
    }

    /// `{ a b c }`
    fn set_literal(&mut self) -> PResult<Vec<String>> {
        self.expect(Tok::LBrace)?;
        let mut items = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            items.push(self.ident()?);
        }
        self.expect(Tok::RBrace)?;
        Ok(items)
    }

    /// `( A , B , … )`; at least two names.
    fn ident_list(&mut self) -> PResult<Vec<String>> {
        self.expect(Tok::LParen)?;
        let mut items = vec![self.ident()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            items.push(self.ident()?);
        }
        if items.len() < 2 {
            return self.error("`,`");
        }
        self.expect(Tok::RParen)?;
        Ok(items)
    }

    fn model(&mut self) -> PResult<ModelDraft> {
        let mut draft = ModelDraft::default();
        let mut seen_universe = false;
        loop {
            match self.peek() {
                Tok::Eof => return Ok(draft),
                Tok::Ident(s) if s == "universe" => {
                    if seen_universe {
                        return Err(ParseError::Syntax {
                            span: self.span(),
                            message: "universe declared twice".into(),
                        });
                    }
                    seen_universe = true;
                    self.bump();
                    draft.universe.push(self.ident()?);
                    while let Tok::Ident(_) = self.peek() {
                        draft.universe.push(self.ident()?);
                    }
                }
                Tok::Ident(s) if s == "set" => {
                    self.bump();
                    let name = self.ident()?;
                    self.keyword("support")?;
                    let support = self.set_literal()?;
                    draft.sets.push((name, support));
                }
                Tok::Ident(s) if s == "constraint" => {
                    self.bump();
                    draft.constraints.push(self.constraint()?);
                }
                _ => return self.error("`universe`, `set` or `constraint`"),
            }
            self.expect(Tok::Semi)?;
        }
    }

    fn constraint(&mut self) -> PResult<Constraint<String, String>> {
        let call = *self.peek_at(1) == Tok::LParen;
        if call && self.is_keyword(0, "inter") {
            self.bump();
            let sets = self.ident_list()?;
            self.expect(Tok::EqEq)?;
            if *self.peek() == Tok::LBrace {
                self.bump();
                self.expect(Tok::RBrace)?;
                return Ok(Constraint::EmptyIntersection { sets });
            }
            let result = self.ident()?;
            return Ok(match <[String; 2]>::try_from(sets) {
                Ok([left, right]) => Constraint::Intersection {
                    left,
                    right,
                    result,
                },
                Err(sets) => Constraint::MultiIntersection { sets, result },
            });
        }
        if call && self.is_keyword(0, "union") {
            self.bump();
            let sets = self.ident_list()?;
            self.expect(Tok::EqEq)?;
            let result = self.ident()?;
            return Ok(match <[String; 2]>::try_from(sets) {
                Ok([left, right]) => Constraint::Union {
                    left,
                    right,
                    result,
                },
                Err(sets) => Constraint::MultiUnion { sets, result },
            });
        }
        if call && self.is_keyword(0, "diff") {
            self.bump();
            self.expect(Tok::LParen)?;
            let left = self.ident()?;
            self.expect(Tok::Comma)?;
            let right = self.ident()?;
            self.expect(Tok::RParen)?;
            self.expect(Tok::EqEq)?;
            let result = self.ident()?;
            return Ok(Constraint::Difference {
                left,
                right,
                result,
            });
        }
        if call && self.is_keyword(0, "overlap") {
            self.bump();
            self.expect(Tok::LParen)?;
            let left = self.ident()?;
            self.expect(Tok::Comma)?;
            let right = self.ident()?;
            self.expect(Tok::RParen)?;
            self.expect(Tok::Le)?;
            let span = self.span();
            if self.integer()? != 1 {
                return Err(ParseError::Syntax {
                    span,
                    message: "only `overlap(..) <= 1` is supported".into(),
                });
            }
            return Ok(Constraint::OverlapAtMostOne { left, right });
        }
        if self.is_keyword(0, "card")
            && matches!(self.peek_at(1), Tok::Ident(_))
            && matches!(self.peek_at(2), Tok::EqEq | Tok::Le)
        {
            self.bump();
            let set = self.ident()?;
            return match self.bump() {
                Tok::EqEq => Ok(Constraint::CardinalityEq {
                    set,
                    k: self.integer()?,
                }),
                Tok::Le => Ok(Constraint::CardinalityAtMost {
                    set,
                    k: self.integer()?,
                }),
                _ => {
                    self.pos -= 1;
                    self.error("`==` or `<=`")
                }
            };
        }
        let first = self.ident()?;
        match self.peek().clone() {
            Tok::Ident(op) if op == "in" || op == "notin" => {
                self.bump();
                let set = self.ident()?;
                Ok(Constraint::Member {
                    element: first,
                    set,
                    positive: op == "in",
                })
            }
            Tok::Ident(op) if op == "subset" => {
                self.bump();
                let sup = self.ident()?;
                Ok(Constraint::Subset { sub: first, sup })
            }
            Tok::EqEq => {
                self.bump();
                if *self.peek() == Tok::LBrace {
                    let elements = self.set_literal()?;
                    Ok(Constraint::ConstantAssign {
                        set: first,
                        elements,
                    })
                } else {
                    Ok(Constraint::Equal {
                        left: first,
                        right: self.ident()?,
                        positive: true,
                    })
                }
            }
            Tok::NotEq => {
                self.bump();
                Ok(Constraint::Equal {
                    left: first,
                    right: self.ident()?,
                    positive: false,
                })
            }
            _ => self.error("`in`, `notin`, `subset`, `==` or `!=`"),
        }
    }
}

/// Parses `text` into a draft without resolving names.
pub fn parse_draft(text: &str) -> Result<ModelDraft, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    p.model()
}

/// Parses and validates a model.
pub fn parse_model(text: &str) -> Result<ProblemModel, ParseError> {
    Ok(parse_draft(text)?.build()?)
}

/// Canonical text for `model`. Sets are listed in declaration order so that
/// parsing the text back yields the same set ids.
pub fn format_model(model: &ProblemModel) -> String {
    use std::fmt::Write;

    let u = model.universe();
    let set = |id: &crate::model::SetId| model.set(*id).name();
    let list = |ids: &[crate::model::SetId]| ids.iter().map(set).collect::<Vec<_>>().join(", ");
    let mut out = String::new();
    writeln!(out, "universe {};", u.labels().join(" ")).unwrap();
    for s in model.sets() {
        let support: Vec<&str> = s.support().iter().map(|&x| u.label(x)).collect();
        writeln!(out, "set {} support {{{}}};", s.name(), support.join(" ")).unwrap();
    }
    for c in model.constraints() {
        let text = match c {
            Constraint::Member {
                element,
                set: s,
                positive,
            } => format!(
                "{} {} {}",
                u.label(*element),
                if *positive { "in" } else { "notin" },
                set(s)
            ),
            Constraint::Equal {
                left,
                right,
                positive,
            } => format!(
                "{} {} {}",
                set(left),
                if *positive { "==" } else { "!=" },
                set(right)
            ),
            Constraint::Intersection {
                left,
                right,
                result,
            } => format!("inter({}, {}) == {}", set(left), set(right), set(result)),
            Constraint::EmptyIntersection { sets } => format!("inter({}) == {{}}", list(sets)),
            Constraint::Union {
                left,
                right,
                result,
            } => format!("union({}, {}) == {}", set(left), set(right), set(result)),
            Constraint::Subset { sub, sup } => format!("{} subset {}", set(sub), set(sup)),
            Constraint::Difference {
                left,
                right,
                result,
            } => format!("diff({}, {}) == {}", set(left), set(right), set(result)),
            Constraint::MultiUnion { sets, result } => {
                format!("union({}) == {}", list(sets), set(result))
            }
            Constraint::MultiIntersection { sets, result } => {
                format!("inter({}) == {}", list(sets), set(result))
            }
            Constraint::CardinalityEq { set: s, k } => format!("card {} == {k}", set(s)),
            Constraint::CardinalityAtMost { set: s, k } => format!("card {} <= {k}", set(s)),
            Constraint::ConstantAssign { set: s, elements } => {
                let items: Vec<&str> = elements.iter().map(|&x| u.label(x)).collect();
                format!("{} == {{{}}}", set(s), items.join(" "))
            }
            Constraint::OverlapAtMostOne { left, right } => {
                format!("overlap({}, {}) <= 1", set(left), set(right))
            }
        };
        writeln!(out, "constraint {text};").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SetId;

    #[test]
    fn member_example() {
        let m = parse_model("universe a b c; set F support {a b}; constraint a in F;").unwrap();
        assert_eq!(m.sets().len(), 1);
        assert_eq!(m.constraints().len(), 1);
        assert!(matches!(
            m.constraints()[0],
            Constraint::Member { positive: true, .. }
        ));
    }

    #[test]
    fn cardinality_and_union() {
        let m = parse_model(
            "universe a b c;\nset F support {a b c};\nset G support {a};\nset H support {a b c};\n\
             constraint card F == 2;\nconstraint union(F,G) == H;\nconstraint card H <= 1;",
        )
        .unwrap();
        assert_eq!(
            m.constraints()[0],
            Constraint::CardinalityEq {
                set: SetId(0),
                k: 2
            }
        );
        assert_eq!(
            m.constraints()[1],
            Constraint::Union {
                left: SetId(0),
                right: SetId(1),
                result: SetId(2)
            }
        );
        assert_eq!(
            m.constraints()[2],
            Constraint::CardinalityAtMost {
                set: SetId(2),
                k: 1
            }
        );
    }

    #[test]
    fn every_form_round_trips() {
        let text = "# all forms\n\
            universe a b c d;\n\
            set F support {a b};\nset G support {b c};\nset H support {a b c d};\nset K support {d};\n\
            constraint a in F; constraint d notin H;\n\
            constraint F == G; constraint F != G;\n\
            constraint inter(F, G) == H; constraint inter(F, G, K) == {};\n\
            constraint inter(F, G, K) == H;\n\
            constraint union(F, G) == H; constraint union(F, G, K) == H;\n\
            constraint F subset H; constraint diff(H, F) == G;\n\
            constraint card H == 2; constraint card F <= 1;\n\
            constraint K == {d}; constraint H == {};\n\
            constraint overlap(F, H) <= 1;\n";
        let m = parse_model(text).unwrap();
        assert_eq!(m.constraints().len(), 16);
        let printed = format_model(&m);
        assert_eq!(parse_model(&printed).unwrap(), m);
        assert_eq!(format_model(&parse_model(&printed).unwrap()), printed);
    }

    #[test]
    fn empty_model_prints_header_only() {
        let m = parse_model("universe x;").unwrap();
        assert_eq!(format_model(&m), "universe x;\n");
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_model("universe a;\nset F support {a}\nconstraint a in F;").unwrap_err();
        match err {
            ParseError::Syntax { span, .. } => {
                assert_eq!((span.line, span.column), (3, 1));
            }
            other => panic!("{other:?}"),
        }
        let err = parse_model("universe a; constraint a @ F;").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { span, .. } if span.start == 25));
    }

    #[test]
    fn semantic_errors_surface() {
        let err = parse_model("universe a; set F support {a}; constraint a in H;").unwrap_err();
        assert!(err.to_string().contains("unknown set H"), "{err}");
        let err = parse_model("universe a; set F support {b};").unwrap_err();
        assert!(err.to_string().contains("element not in universe"), "{err}");
    }

    #[test]
    fn keywords_usable_as_names() {
        let m =
            parse_model("universe card in; set union support {card}; constraint card in union;")
                .unwrap();
        assert_eq!(m.constraints().len(), 1);
    }

    #[test]
    fn overlap_bound_must_be_one() {
        assert!(
            parse_model("universe a; set F support {a}; constraint overlap(F, F) <= 2;").is_err()
        );
    }
}
