//! Recursive-descent parser for the concrete syntax:
//!
//! ```text
//! System   ::= "void" | Item ("o" Item)*
//! Item     ::= [INT "*"] Membrane "[" System "]"
//! Membrane ::= "0" | Guard ("|" Guard)*
//! Guard    ::= Prefix ["." GuardBody]
//! GuardBody::= Guard | "(" Membrane ")" | "0"
//! Prefix   ::= ("phago"|"exo"|"coexo") "<" NAME ">"
//!            | ("cophago"|"pino") "<" NAME ">" "(" Membrane ")"
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment running to the end of
//! the line.

use super::{ActionKind, ActionName, Membrane, System};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: {kind} {problem}")]
    Arity {
        line: usize,
        column: usize,
        kind: ActionKind,
        problem: &'static str,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            column += i - start;
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            column += i - start;
            let digits: String = chars[start..i].iter().collect();
            let value = digits.parse::<u64>().map_err(|_| ParseError::Syntax {
                line: start_line,
                column: start_col,
                message: format!("integer {digits} is out of range"),
            })?;
            Tok::Int(value)
        } else if "<>()[]|.*".contains(c) {
            i += 1;
            column += 1;
            Tok::Sym(c)
        } else {
            return Err(ParseError::Syntax {
                line,
                column,
                message: format!("unexpected character {c:?}"),
            });
        };
        tokens.push(Token {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    tokens.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Sym(c) {
            self.advance();
            Ok(())
        } else {
            self.error(format!(
                "expected `{c}`, found {}",
                Self::describe(&self.peek().tok)
            ))
        }
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn is_ident(&self, word: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == word)
    }

    fn system(&mut self) -> Result<System, ParseError> {
        if self.is_ident("void") {
            self.advance();
            return Ok(System::Void);
        }
        let mut items = Vec::new();
        self.item(&mut items)?;
        while self.is_ident("o") {
            self.advance();
            self.item(&mut items)?;
        }
        Ok(System::compose_all(items))
    }

    fn item(&mut self, items: &mut Vec<System>) -> Result<(), ParseError> {
        let mut count = 1;
        if let (Tok::Int(n), Tok::Sym('*')) = (self.peek().tok.clone(), self.peek_at(1).clone()) {
            if n == 0 {
                return self.error("multiplicity must be positive");
            }
            count = n;
            self.advance();
            self.advance();
        }
        let membrane = self.membrane()?;
        self.expect_sym('[')?;
        let content = self.system()?;
        self.expect_sym(']')?;
        let cell = System::cell(membrane, content);
        for _ in 1..count {
            items.push(cell.clone());
        }
        items.push(cell);
        Ok(())
    }

    fn membrane(&mut self) -> Result<Membrane, ParseError> {
        if self.peek().tok == Tok::Int(0) {
            self.advance();
            return Ok(Membrane::Zero);
        }
        let mut guards = vec![self.guard()?];
        while self.is_sym('|') {
            self.advance();
            guards.push(self.guard()?);
        }
        Ok(Membrane::par_all(guards))
    }

    fn guard(&mut self) -> Result<Membrane, ParseError> {
        let start = self.peek().clone();
        let kind = match &start.tok {
            Tok::Ident(word) => match ActionKind::from_keyword(word) {
                Some(kind) => kind,
                None => return self.error(format!("expected an action, found `{word}`")),
            },
            other => {
                return self.error(format!(
                    "expected an action, found {}",
                    Self::describe(other)
                ))
            }
        };
        self.advance();
        self.expect_sym('<')?;
        let name = match self.advance().tok {
            Tok::Ident(name) => ActionName::new(&name),
            other => {
                self.pos -= 1;
                return self.error(format!("expected a name, found {}", Self::describe(&other)));
            }
        };
        self.expect_sym('>')?;
        let arity = |problem| ParseError::Arity {
            line: start.line,
            column: start.column,
            kind,
            problem,
        };
        let arg = if self.is_sym('(') {
            if !kind.takes_argument() {
                return Err(arity("does not take a membrane argument"));
            }
            self.advance();
            let arg = self.membrane()?;
            self.expect_sym(')')?;
            Some(arg)
        } else if kind.takes_argument() {
            return Err(arity("requires a membrane argument"));
        } else {
            None
        };
        let cont = if self.is_sym('.') {
            self.advance();
            if self.is_sym('(') {
                self.advance();
                let body = self.membrane()?;
                self.expect_sym(')')?;
                body
            } else if self.peek().tok == Tok::Int(0) {
                self.advance();
                Membrane::Zero
            } else {
                self.guard()?
            }
        } else {
            Membrane::Zero
        };
        Ok(Membrane::prefix(kind, name, arg, cont).expect("arity checked above"))
    }

    fn finish<T>(&mut self, value: T) -> Result<T, ParseError> {
        if self.peek().tok == Tok::Eof {
            Ok(value)
        } else {
            self.error(format!("unexpected {}", Self::describe(&self.peek().tok)))
        }
    }
}

pub fn parse_system(text: &str) -> Result<System, ParseError> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let s = p.system()?;
    p.finish(s)
}

pub fn parse_membrane(text: &str) -> Result<Membrane, ParseError> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let m = p.membrane()?;
    p.finish(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn void() {
        assert_eq!(parse_system("void").unwrap(), System::Void);
        assert_eq!(
            parse_system("  # nothing here\n void ").unwrap(),
            System::Void
        );
    }

    #[test]
    fn smallest_pino_cell() {
        let expected = System::cell(
            Membrane::pino("n", Membrane::Zero, Membrane::Zero),
            System::Void,
        );
        assert_eq!(parse_system("pino<n>(0)[void]").unwrap(), expected);
    }

    #[test]
    fn omitted_continuation_is_zero() {
        assert_eq!(
            parse_membrane("phago<k>").unwrap(),
            Membrane::phago("k", Membrane::Zero)
        );
        assert_eq!(
            parse_membrane("phago<k>.0").unwrap(),
            parse_membrane("phago<k>").unwrap()
        );
    }

    #[test]
    fn worked_example() {
        let p = parse_system(
            "10000 * phago<n>.exo<m>[phago<k>[void]] o 100 * cophago<n>(coexo<m>)|coexo<m>[phago<k>[void]]",
        )
        .unwrap();
        let cells = p.components();
        assert_eq!(cells.len(), 10_100);
        let a = System::cell(
            Membrane::phago("n", Membrane::exo("m", Membrane::Zero)),
            System::cell(Membrane::phago("k", Membrane::Zero), System::Void),
        );
        let b = System::cell(
            Membrane::par(
                Membrane::cophago("n", Membrane::coexo("m", Membrane::Zero), Membrane::Zero),
                Membrane::coexo("m", Membrane::Zero),
            ),
            System::cell(Membrane::phago("k", Membrane::Zero), System::Void),
        );
        assert_eq!(cells.iter().filter(|c| ***c == a).count(), 10_000);
        assert_eq!(cells.iter().filter(|c| ***c == b).count(), 100);
    }

    #[test]
    fn parenthesized_continuation() {
        let m = parse_membrane("exo<a>.(phago<b> | coexo<c>)").unwrap();
        let expected = Membrane::exo(
            "a",
            Membrane::par(
                Membrane::phago("b", Membrane::Zero),
                Membrane::coexo("c", Membrane::Zero),
            ),
        );
        assert_eq!(m, expected);
    }

    #[test]
    fn arity_errors() {
        assert!(matches!(
            parse_system("cophago<n>[void]"),
            Err(ParseError::Arity {
                kind: ActionKind::Cophago,
                line: 1,
                column: 1,
                ..
            })
        ));
        assert!(matches!(
            parse_system("phago<n>(0)[void]"),
            Err(ParseError::Arity {
                kind: ActionKind::Phago,
                ..
            })
        ));
        assert!(matches!(
            parse_system("exo<n> | pino<m>[void]"),
            Err(ParseError::Arity {
                kind: ActionKind::Pino,
                line: 1,
                column: 10,
                ..
            })
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_system("phago<n>[void]\n o exo<m>[void").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                line: 2,
                column: 15,
                message: "expected `]`, found end of input".to_string()
            }
        );
        assert!(matches!(
            parse_system("0 * phago<n>[void]"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_system("phago<n>[void] $"),
            Err(ParseError::Syntax {
                line: 1,
                column: 16,
                ..
            })
        ));
        assert!(matches!(parse_system(""), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn print_then_parse() {
        for text in [
            "void",
            "pino<n>(0)[void]",
            "3 * phago<n>.exo<m>[phago<k>[void]] o cophago<n>(coexo<m>) | coexo<m>[void]",
            "0[exo<a>.(phago<b> | coexo<c>)[void] o 0[void]]",
            "pino<a>(cophago<b>(0).exo<c>)[void]",
        ] {
            let p = parse_system(text).unwrap();
            assert_eq!(parse_system(&p.to_string()).unwrap(), p, "{text}");
        }
    }
}
