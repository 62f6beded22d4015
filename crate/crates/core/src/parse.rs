//! Text form of Karel programs.
//!
//! ```text
//! prog := stmt+
//! stmt := action
//!       | if(cond){stmt+}
//!       | ifelse(cond){stmt+}{stmt+}
//!       | while(cond){stmt+}
//!       | repeat(int){stmt+}
//! cond := frontIsClear | leftIsClear | rightIsClear
//!       | markersPresent | noMarkersPresent | not(cond)
//! ```
//!
//! Whitespace is insignificant apart from separating adjacent words. The
//! canonical rendering puts one statement per line with two-space indents.

use thiserror::Error;

use crate::program::{
    Action, Condition, Program, Statement, MAX_DEPTH, MAX_NEGATIONS, MAX_STATEMENTS, REPEAT_MAX, REPEAT_MIN,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("unknown token {0:?}")]
    UnknownToken(String),
    #[error("unbalanced braces: {0}")]
    UnbalancedBraces(&'static str),
    #[error("empty block")]
    EmptyBlock,
    #[error("repeat count {0} outside [{REPEAT_MIN}, {REPEAT_MAX}]")]
    RepeatRange(String),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("more than {MAX_NEGATIONS} nested negations")]
    TooManyNegations,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: {kind}")]
    Syntax {
        line: usize,
        column: usize,
        kind: SyntaxError,
    },
    #[error("{line}:{column}: control flow nested deeper than {max}")]
    Depth { line: usize, column: usize, max: usize },
    #[error("program has {count} statements, more than the limit of {max}")]
    Size { count: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Word(&'a str),
    Int(&'a str),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Eof,
}

impl Tok<'_> {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) | Tok::Int(w) => format!("{w:?}"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned<'a> {
    tok: Tok<'a>,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned<'_>>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = src.char_indices().peekable();
    while let Some(&(start, ch)) = chars.peek() {
        let (tl, tc) = (line, column);
        let single = match ch {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            column += 1;
            out.push(Spanned { tok, line: tl, column: tc });
        } else if ch == '\n' {
            chars.next();
            line += 1;
            column = 1;
        } else if ch.is_whitespace() {
            chars.next();
            column += 1;
        } else if ch.is_ascii_alphanumeric() {
            let digits = ch.is_ascii_digit();
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                let same_class = if digits { c.is_ascii_digit() } else { c.is_ascii_alphanumeric() };
                if !same_class {
                    break;
                }
                end = i + c.len_utf8();
                column += 1;
                chars.next();
            }
            let text = &src[start..end];
            let tok = if digits { Tok::Int(text) } else { Tok::Word(text) };
            out.push(Spanned { tok, line: tl, column: tc });
        } else {
            return Err(ParseError::Syntax {
                line: tl,
                column: tc,
                kind: SyntaxError::UnknownToken(ch.to_string()),
            });
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned<'a>>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Spanned<'a> {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned<'a> {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Spanned<'_>, kind: SyntaxError) -> ParseError {
        ParseError::Syntax {
            line: t.line,
            column: t.column,
            kind,
        }
    }

    fn expect(&mut self, want: Tok<'static>, expected: &'static str) -> Result<(), ParseError> {
        let t = self.bump();
        if t.tok == want {
            return Ok(());
        }
        let kind = match (&want, &t.tok) {
            (Tok::RBrace, Tok::Eof) => SyntaxError::UnbalancedBraces("missing '}'"),
            (_, Tok::Word(w)) if !is_keyword(w) => SyntaxError::UnknownToken(w.to_string()),
            _ => SyntaxError::Unexpected {
                expected,
                found: t.tok.describe(),
            },
        };
        Err(Self::error_at(&t, kind))
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut body = Vec::new();
        loop {
            match self.peek().tok {
                Tok::Eof if !body.is_empty() => break,
                Tok::RBrace => {
                    let t = self.bump();
                    return Err(Self::error_at(&t, SyntaxError::UnbalancedBraces("unexpected '}'")));
                }
                _ => body.push(self.statement(0)?),
            }
        }
        let program = Program::new(body);
        let count = program.statement_count();
        if count > MAX_STATEMENTS {
            return Err(ParseError::Size {
                count,
                max: MAX_STATEMENTS,
            });
        }
        Ok(program)
    }

    /// `depth` is the number of control nodes enclosing this statement.
    fn statement(&mut self, depth: usize) -> Result<Statement, ParseError> {
        let t = self.bump();
        let word = match t.tok {
            Tok::Word(w) => w,
            ref other => {
                return Err(Self::error_at(
                    &t,
                    SyntaxError::Unexpected {
                        expected: "statement",
                        found: other.describe(),
                    },
                ))
            }
        };
        if let Some(action) = Action::ALL.into_iter().find(|a| a.keyword() == word) {
            return Ok(Statement::Action(action));
        }
        if !matches!(word, "if" | "ifelse" | "while" | "repeat") {
            let kind = if is_keyword(word) {
                SyntaxError::Unexpected {
                    expected: "statement",
                    found: format!("{word:?}"),
                }
            } else {
                SyntaxError::UnknownToken(word.to_string())
            };
            return Err(Self::error_at(&t, kind));
        }
        if depth + 1 > MAX_DEPTH {
            return Err(ParseError::Depth {
                line: t.line,
                column: t.column,
                max: MAX_DEPTH,
            });
        }
        self.expect(Tok::LParen, "'('")?;
        if word == "repeat" {
            let times = self.repeat_count()?;
            self.expect(Tok::RParen, "')'")?;
            let body = self.block(depth + 1)?;
            return Ok(Statement::Repeat { times, body });
        }
        let cond = self.condition()?;
        self.expect(Tok::RParen, "')'")?;
        let body = self.block(depth + 1)?;
        Ok(match word {
            "if" => Statement::If { cond, body },
            "while" => Statement::While { cond, body },
            _ => {
                let else_body = self.block(depth + 1)?;
                Statement::IfElse {
                    cond,
                    then_body: body,
                    else_body,
                }
            }
        })
    }

    fn repeat_count(&mut self) -> Result<u32, ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Int(text) => match text.parse::<u32>() {
                Ok(n) if (REPEAT_MIN..=REPEAT_MAX).contains(&n) => Ok(n),
                _ => Err(Self::error_at(&t, SyntaxError::RepeatRange(text.to_string()))),
            },
            ref other => Err(Self::error_at(
                &t,
                SyntaxError::Unexpected {
                    expected: "repeat count",
                    found: other.describe(),
                },
            )),
        }
    }

    fn condition(&mut self) -> Result<Condition, ParseError> {
        let mut negations = 0;
        while self.peek().tok == Tok::Word("not") {
            let t = self.bump();
            negations += 1;
            if negations > MAX_NEGATIONS {
                return Err(Self::error_at(&t, SyntaxError::TooManyNegations));
            }
            self.expect(Tok::LParen, "'('")?;
        }
        let t = self.bump();
        let base = match t.tok {
            Tok::Word(w) => Condition::BASE.into_iter().find(|c| c.keyword() == Some(w)).ok_or_else(|| {
                let kind = if is_keyword(w) {
                    SyntaxError::Unexpected {
                        expected: "condition",
                        found: format!("{w:?}"),
                    }
                } else {
                    SyntaxError::UnknownToken(w.to_string())
                };
                Self::error_at(&t, kind)
            })?,
            ref other => {
                return Err(Self::error_at(
                    &t,
                    SyntaxError::Unexpected {
                        expected: "condition",
                        found: other.describe(),
                    },
                ))
            }
        };
        let mut cond = base;
        for _ in 0..negations {
            self.expect(Tok::RParen, "')'")?;
            cond = Condition::negate(cond);
        }
        Ok(cond)
    }

    fn block(&mut self, depth: usize) -> Result<Vec<Statement>, ParseError> {
        self.expect(Tok::LBrace, "'{'")?;
        let mut body = Vec::new();
        loop {
            match self.peek().tok {
                Tok::RBrace => {
                    let t = self.bump();
                    if body.is_empty() {
                        return Err(Self::error_at(&t, SyntaxError::EmptyBlock));
                    }
                    return Ok(body);
                }
                Tok::Eof => {
                    let t = self.bump();
                    return Err(Self::error_at(&t, SyntaxError::UnbalancedBraces("missing '}'")));
                }
                _ => body.push(self.statement(depth)?),
            }
        }
    }
}

fn is_keyword(word: &str) -> bool {
    matches!(word, "if" | "ifelse" | "while" | "repeat" | "not")
        || Action::ALL.iter().any(|a| a.keyword() == word)
        || Condition::BASE.iter().any(|c| c.keyword() == Some(word))
}

/// Parses program text into a validated [`Program`].
pub fn parse(source: &str) -> Result<Program, ParseError> {
    let toks = lex(source)?;
    Parser { toks, pos: 0 }.program()
}

fn condition_text(cond: &Condition, out: &mut String) {
    match cond {
        Condition::Not(inner) => {
            out.push_str("not(");
            condition_text(inner, out);
            out.push(')');
        }
        base => out.push_str(base.keyword().expect("primitive condition")),
    }
}

fn block_text(stmts: &[Statement], indent: usize, lines: &mut Vec<String>) {
    let pad = "  ".repeat(indent);
    for s in stmts {
        let mut head = pad.clone();
        match s {
            Statement::Action(a) => {
                head.push_str(a.keyword());
                lines.push(head);
                continue;
            }
            Statement::If { cond, .. } | Statement::IfElse { cond, .. } | Statement::While { cond, .. } => {
                head.push_str(match s {
                    Statement::If { .. } => "if(",
                    Statement::IfElse { .. } => "ifelse(",
                    _ => "while(",
                });
                condition_text(cond, &mut head);
                head.push_str(") {");
            }
            Statement::Repeat { times, .. } => head.push_str(&format!("repeat({times}) {{")),
        }
        lines.push(head);
        let blocks = s.blocks();
        for (i, block) in blocks.iter().enumerate() {
            block_text(block, indent + 1, lines);
            if i + 1 < blocks.len() {
                lines.push(format!("{pad}}} {{"));
            }
        }
        lines.push(format!("{pad}}}"));
    }
}

/// Canonical text of a program: one statement per line, two-space indents,
/// no trailing newline.
pub fn pretty_print(program: &Program) -> String {
    let mut lines = Vec::new();
    block_text(&program.body, 0, &mut lines);
    lines.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::Action::*;

    fn syntax_kind(src: &str) -> SyntaxError {
        match parse(src) {
            Err(ParseError::Syntax { kind, .. }) => kind,
            other => panic!("expected syntax error for {src:?}, got {other:?}"),
        }
    }

    #[test]
    fn parses_examples() {
        assert_eq!(parse("move").unwrap(), Program::new(vec![Move.into()]));
        assert_eq!(
            parse("while(frontIsClear){move}").unwrap(),
            Program::new(vec![Statement::While {
                cond: Condition::FrontIsClear,
                body: vec![Move.into()]
            }])
        );
        assert_eq!(
            parse("if(markersPresent){pickMarker}").unwrap(),
            Program::new(vec![Statement::If {
                cond: Condition::MarkersPresent,
                body: vec![PickMarker.into()]
            }])
        );
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse("ifelse(not(leftIsClear)){turnLeft move}{repeat(3){putMarker}}").unwrap();
        let b = parse("  ifelse ( not ( leftIsClear ) )\n{ turnLeft\n\tmove }\n{ repeat ( 3 ) { putMarker } }\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn prints_canonically() {
        assert_eq!(pretty_print(&Program::new(vec![Move.into()])), "move");
        let p = parse("ifelse(not(leftIsClear)){turnLeft move}{repeat(3){putMarker}}").unwrap();
        assert_eq!(
            pretty_print(&p),
            "ifelse(not(leftIsClear)) {\n  turnLeft\n  move\n} {\n  repeat(3) {\n    putMarker\n  }\n}"
        );
        assert_eq!(parse(&pretty_print(&p)).unwrap(), p);
    }

    #[test]
    fn reports_positions() {
        assert_eq!(
            parse("move\n  jump"),
            Err(ParseError::Syntax {
                line: 2,
                column: 3,
                kind: SyntaxError::UnknownToken("jump".into())
            })
        );
        assert_eq!(
            parse("move $"),
            Err(ParseError::Syntax {
                line: 1,
                column: 6,
                kind: SyntaxError::UnknownToken("$".into())
            })
        );
    }

    #[test]
    fn rejects_malformed_programs() {
        assert_eq!(syntax_kind("while(frontIsClear){move"), SyntaxError::UnbalancedBraces("missing '}'"));
        assert_eq!(syntax_kind("move }"), SyntaxError::UnbalancedBraces("unexpected '}'"));
        assert_eq!(syntax_kind("repeat(3){}"), SyntaxError::EmptyBlock);
        assert_eq!(syntax_kind("repeat(1){move}"), SyntaxError::RepeatRange("1".into()));
        assert_eq!(syntax_kind("repeat(11){move}"), SyntaxError::RepeatRange("11".into()));
        assert_eq!(
            syntax_kind("repeat(99999999999999999999){move}"),
            SyntaxError::RepeatRange("99999999999999999999".into())
        );
        assert_eq!(syntax_kind("if(wallAhead){move}"), SyntaxError::UnknownToken("wallAhead".into()));
        assert!(matches!(syntax_kind(""), SyntaxError::Unexpected { expected: "statement", .. }));
        assert!(matches!(syntax_kind("frontIsClear"), SyntaxError::Unexpected { .. }));
        assert!(matches!(syntax_kind("ifelse(frontIsClear){move}"), SyntaxError::Unexpected { .. }));
        assert_eq!(
            syntax_kind("if(not(not(not(not(not(frontIsClear)))))){move}"),
            SyntaxError::TooManyNegations
        );
    }

    #[test]
    fn enforces_depth_and_size() {
        let five = "repeat(2){".repeat(5) + "move" + &"}".repeat(5);
        assert!(matches!(parse(&five), Err(ParseError::Depth { max: 4, .. })));
        let four = "repeat(2){".repeat(4) + "move" + &"}".repeat(4);
        assert!(parse(&four).is_ok());
        assert_eq!(parse(&"move ".repeat(21)), Err(ParseError::Size { count: 21, max: 20 }));
        assert!(parse(&"move ".repeat(20)).is_ok());
    }

    #[test]
    fn deeply_nested_input_does_not_overflow() {
        let src = "if(".to_string() + &"not(".repeat(16_000) + "frontIsClear";
        assert!(parse(&src).is_err());
        let src = "while(frontIsClear){".repeat(16_000);
        assert!(matches!(parse(&src), Err(ParseError::Depth { .. })));
    }
}
