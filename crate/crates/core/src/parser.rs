//! Text syntax for formulas.
//!
//! ```text
//! phi ::= "true" | "false" | ident | "[" ident* "]" | "(" phi ")"
//!       | "X" phi | "F" phi | "G" phi | "!" phi
//!       | phi "U" phi | phi "U{" int "/" int "}" phi
//!       | phi "&" phi | phi "|" phi | phi "->" phi
//! ```
//!
//! Binding, tightest first: unary operators, until (right associative),
//! `&`, `|` (both left associative), `->` (right associative).
//! Identifiers are `[A-Za-z_][A-Za-z0-9_]*` plus the letter tokens `#`,
//! `$0`, `$1` and `$z`.

use std::fmt;

use thiserror::Error;

use crate::logic::{Alphabet, Formula, Frequency, FrequencyError, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error(transparent)]
    Frequency(#[from] FrequencyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at byte {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

const KEYWORDS: [&str; 6] = ["true", "false", "X", "F", "G", "U"];

/// Whether `s` is usable as a letter in formulas and words.
pub fn is_letter_token(s: &str) -> bool {
    if matches!(s, "#" | "$0" | "$1" | "$z") {
        return true;
    }
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    True,
    False,
    Next,
    Eventually,
    Always,
    Until,
    FreqUntil(Frequency),
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    End,
}

fn describe(tok: &Token) -> String {
    match tok {
        Token::Ident(s) => format!("`{s}`"),
        Token::End => "end of input".to_string(),
        other => format!("{other:?}"),
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, position: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            position,
            kind: ParseErrorKind::Syntax(msg.into()),
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn number(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek_char(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(start, "expected an integer"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.err(start, "integer too large"))
    }

    fn expect_char(&mut self, want: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek_char() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(self.pos, format!("expected `{want}`")))
        }
    }

    fn next_token(&mut self) -> Result<(usize, Token), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let Some(c) = self.peek_char() else {
            return Ok((start, Token::End));
        };
        let single = |tok| Ok((start, tok));
        match c {
            '(' | ')' | '[' | ']' | '!' | '&' | '|' | '#' => {
                self.pos += 1;
                single(match c {
                    '(' => Token::LParen,
                    ')' => Token::RParen,
                    '[' => Token::LBracket,
                    ']' => Token::RBracket,
                    '!' => Token::Not,
                    '&' => Token::And,
                    '|' => Token::Or,
                    _ => Token::Ident("#".into()),
                })
            }
            '-' => {
                if self.src[start..].starts_with("->") {
                    self.pos += 2;
                    single(Token::Arrow)
                } else {
                    Err(self.err(start, "unexpected `-`"))
                }
            }
            '$' => {
                let tail = &self.src[start + 1..];
                match tail.chars().next() {
                    Some(d @ ('0' | '1' | 'z')) => {
                        self.pos += 2;
                        single(Token::Ident(format!("${d}")))
                    }
                    _ => Err(self.err(start, "expected `$0`, `$1` or `$z`")),
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while matches!(self.peek_char(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let word = &self.src[start..self.pos];
                let tok = match word {
                    "true" => Token::True,
                    "false" => Token::False,
                    "X" => Token::Next,
                    "F" => Token::Eventually,
                    "G" => Token::Always,
                    "U" if self.peek_char() == Some('{') => {
                        self.pos += 1;
                        let num = self.number()?;
                        self.expect_char('/')?;
                        let den = self.number()?;
                        self.expect_char('}')?;
                        let freq = Frequency::new(num, den).map_err(|e| ParseError {
                            position: start,
                            kind: e.into(),
                        })?;
                        Token::FreqUntil(freq)
                    }
                    "U" => Token::Until,
                    _ => Token::Ident(word.to_string()),
                };
                Ok((start, tok))
            }
            other => Err(self.err(start, format!("unexpected character `{other}`"))),
        }
    }
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    cursor: usize,
    alphabet: Option<&'a Alphabet>,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.cursor].1
    }

    fn position(&self) -> usize {
        self.tokens[self.cursor].0
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.cursor].1.clone();
        if self.cursor + 1 < self.tokens.len() {
            self.cursor += 1;
        }
        tok
    }

    fn syntax(&self, msg: String) -> ParseError {
        ParseError {
            position: self.position(),
            kind: ParseErrorKind::Syntax(msg),
        }
    }

    fn letter(&self, name: String, position: usize) -> Result<Letter, ParseError> {
        let letter = Letter::new(&name);
        match self.alphabet {
            Some(sigma) if !sigma.contains(&letter) => Err(ParseError {
                position,
                kind: ParseErrorKind::UnknownLetter(name),
            }),
            _ => Ok(letter),
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Token::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Token::Or {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.until()?;
        while *self.peek() == Token::And {
            self.bump();
            lhs = Formula::and(lhs, self.until()?);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        match self.peek().clone() {
            Token::Until => {
                self.bump();
                Ok(Formula::until(lhs, self.until()?))
            }
            Token::FreqUntil(r) => {
                self.bump();
                Ok(Formula::freq_until(r, lhs, self.until()?))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let wrap: fn(Formula) -> Formula = match self.peek() {
            Token::Next => Formula::next,
            Token::Eventually => Formula::eventually,
            Token::Always => Formula::always,
            Token::Not => Formula::not,
            _ => return self.primary(),
        };
        self.bump();
        Ok(wrap(self.unary()?))
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let position = self.position();
        match self.bump() {
            Token::True => Ok(Formula::True),
            Token::False => Ok(Formula::False),
            Token::Ident(name) => Ok(Formula::Atom(self.letter(name, position)?)),
            Token::LBracket => {
                let mut set = Vec::new();
                loop {
                    let position = self.position();
                    match self.bump() {
                        Token::Ident(name) => set.push(self.letter(name, position)?),
                        Token::RBracket => return Ok(Formula::letter_set(set)),
                        other => {
                            return Err(ParseError {
                                position,
                                kind: ParseErrorKind::Syntax(format!(
                                    "expected a letter or `]`, found {}",
                                    describe(&other)
                                )),
                            })
                        }
                    }
                }
            }
            Token::LParen => {
                let inner = self.implication()?;
                let position = self.position();
                match self.bump() {
                    Token::RParen => Ok(inner),
                    other => Err(ParseError {
                        position,
                        kind: ParseErrorKind::Syntax(format!(
                            "expected `)`, found {}",
                            describe(&other)
                        )),
                    }),
                }
            }
            other => Err(ParseError {
                position,
                kind: ParseErrorKind::Syntax(format!(
                    "expected a formula, found {}",
                    describe(&other)
                )),
            }),
        }
    }
}

fn parse_with(text: &str, alphabet: Option<&Alphabet>) -> Result<Formula, ParseError> {
    let mut lexer = Lexer { src: text, pos: 0 };
    let mut tokens = Vec::new();
    loop {
        let (pos, tok) = lexer.next_token()?;
        let end = tok == Token::End;
        tokens.push((pos, tok));
        if end {
            break;
        }
    }
    let mut parser = Parser {
        tokens,
        cursor: 0,
        alphabet,
    };
    let phi = parser.implication()?;
    if *parser.peek() != Token::End {
        let found = describe(parser.peek());
        return Err(parser.syntax(format!("unexpected {found} after formula")));
    }
    Ok(phi)
}

/// Parses `text`, requiring every letter to belong to `alphabet`.
pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Formula, ParseError> {
    parse_with(text, Some(alphabet))
}

/// Parses `text` accepting any letter.
pub fn parse_open(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, None)
}

// Binding strength, loosest first.
const PREC_IMPLIES: u8 = 0;
const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_UNTIL: u8 = 3;
const PREC_UNARY: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(phi: &Formula) -> u8 {
    use Formula::*;
    match phi {
        Implies(..) => PREC_IMPLIES,
        Or(..) => PREC_OR,
        And(..) => PREC_AND,
        FreqUntil(..) | ClassicUntil(..) => PREC_UNTIL,
        Next(_) | Not(_) | Eventually(_) | Always(_) => PREC_UNARY,
        Atom(_) | True | False | LetterSet(_) => PREC_ATOM,
    }
}

fn write_at(out: &mut String, phi: &Formula, min: u8) {
    if precedence(phi) < min {
        out.push('(');
        write_formula(out, phi);
        out.push(')');
    } else {
        write_formula(out, phi);
    }
}

fn write_formula(out: &mut String, phi: &Formula) {
    use Formula::*;
    let binary = |out: &mut String, l: &Formula, op: &str, r: &Formula, lp: u8, rp: u8| {
        write_at(out, l, lp);
        out.push(' ');
        out.push_str(op);
        out.push(' ');
        write_at(out, r, rp);
    };
    match phi {
        Atom(a) => out.push_str(a.as_str()),
        True => out.push_str("true"),
        False => out.push_str("false"),
        LetterSet(set) => {
            out.push('[');
            let names: Vec<&str> = set.iter().map(Letter::as_str).collect();
            out.push_str(&names.join(" "));
            out.push(']');
        }
        Next(f) | Not(f) | Eventually(f) | Always(f) => {
            out.push_str(match phi {
                Next(_) => "X ",
                Eventually(_) => "F ",
                Always(_) => "G ",
                _ => "!",
            });
            write_at(out, f, PREC_UNARY);
        }
        And(l, r) => binary(out, l, "&", r, PREC_AND, PREC_UNTIL),
        Or(l, r) => binary(out, l, "|", r, PREC_OR, PREC_AND),
        Implies(l, r) => binary(out, l, "->", r, PREC_OR, PREC_IMPLIES),
        ClassicUntil(l, r) => binary(out, l, "U", r, PREC_UNARY, PREC_UNTIL),
        FreqUntil(q, l, r) => binary(out, l, &format!("U{{{q}}}"), r, PREC_UNARY, PREC_UNTIL),
    }
}

/// Renders a formula with the fewest parentheses that still parse back to it.
pub fn render(phi: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, phi);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> Alphabet {
        Alphabet::from_names(&["a", "b", "c", "#"]).unwrap()
    }

    fn a() -> Formula {
        Formula::atom("a")
    }

    fn b() -> Formula {
        Formula::atom("b")
    }

    #[test]
    fn frequency_until() {
        assert_eq!(
            parse("a U{1/2} b", &sigma()).unwrap(),
            Formula::freq_until(Frequency::half(), a(), b())
        );
        assert_eq!(
            parse("a U{2/4} b", &sigma()).unwrap(),
            Formula::freq_until(Frequency::half(), a(), b())
        );
    }

    #[test]
    fn always_not_hash() {
        assert_eq!(
            parse("G !(# )", &sigma()).unwrap(),
            Formula::always(Formula::not(Formula::atom("#")))
        );
    }

    #[test]
    fn frequency_out_of_range() {
        let err = parse("a U{3/2} b", &sigma()).unwrap_err();
        assert_eq!(err.position, 2);
        assert!(matches!(
            err.kind,
            ParseErrorKind::Frequency(FrequencyError::OutOfRange(_))
        ));
    }

    #[test]
    fn unknown_letter_reports_position() {
        let err = parse("a & zz", &sigma()).unwrap_err();
        assert_eq!(err.position, 4);
        assert_eq!(err.kind, ParseErrorKind::UnknownLetter("zz".into()));
    }

    #[test]
    fn syntax_errors() {
        assert!(parse("a &", &sigma()).is_err());
        assert!(parse("(a", &sigma()).is_err());
        assert!(parse("a b", &sigma()).is_err());
        assert!(parse("a U{1/0} b", &sigma()).is_err());
        assert!(parse("a U{1 b", &sigma()).is_err());
        assert!(parse("$q", &sigma()).is_err());
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_open("X a U b").unwrap(),
            Formula::until(Formula::next(a()), b())
        );
        assert_eq!(
            parse_open("a U b U c").unwrap(),
            Formula::until(a(), Formula::until(b(), Formula::atom("c")))
        );
        assert_eq!(
            parse_open("a | b & c").unwrap(),
            Formula::or(a(), Formula::and(b(), Formula::atom("c")))
        );
        assert_eq!(
            parse_open("!a & b").unwrap(),
            Formula::and(Formula::not(a()), b())
        );
        assert_eq!(
            parse_open("a -> b -> c").unwrap(),
            Formula::implies(a(), Formula::implies(b(), Formula::atom("c")))
        );
        assert_eq!(
            parse_open("[$0 $1 $z] & true").unwrap(),
            Formula::and(
                Formula::letter_set(vec!["$0".into(), "$1".into(), "$z".into()]),
                Formula::True
            )
        );
    }

    #[test]
    fn render_examples() {
        assert_eq!(
            render(&Formula::freq_until(Frequency::half(), a(), b())),
            "a U{1/2} b"
        );
        assert_eq!(render(&Formula::and(a(), Formula::next(b()))), "a & X b");
        assert_eq!(render(&Formula::not(Formula::or(a(), b()))), "!(a | b)");
        assert_eq!(
            render(&Formula::and(a(), Formula::and(b(), a()))),
            "a & (b & a)"
        );
        assert_eq!(
            render(&Formula::next(Formula::until(a(), b()))),
            "X (a U b)"
        );
        assert_eq!(render(&Formula::letter_set(vec![])), "[]");
    }

    #[test]
    fn letter_tokens() {
        assert!(is_letter_token("t_1"));
        assert!(is_letter_token("$z"));
        assert!(!is_letter_token("U"));
        assert!(!is_letter_token("1a"));
        assert!(!is_letter_token("a-b"));
    }
}
