//! Finite words and ultimately periodic words `u v^ω`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::logic::Letter;
use crate::parser::is_letter_token;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("the loop of a lasso word must be nonempty")]
    EmptyLoop,
    #[error("missing `;` between prefix and loop")]
    MissingSeparator,
    #[error("more than one `;` in word")]
    ExtraSeparator,
    #[error("`{0}` is not a letter")]
    BadToken(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FiniteWord(Vec<Letter>);

impl FiniteWord {
    pub fn new(letters: Vec<Letter>) -> FiniteWord {
        FiniteWord(letters)
    }

    pub fn empty() -> FiniteWord {
        FiniteWord(Vec::new())
    }

    /// Splits on whitespace; every token must be a letter.
    pub fn parse(text: &str) -> Result<FiniteWord, WordError> {
        text.split_whitespace()
            .map(|tok| {
                if is_letter_token(tok) {
                    Ok(Letter::new(tok))
                } else {
                    Err(WordError::BadToken(tok.to_string()))
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(FiniteWord)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        FiniteWord(self.0.iter().chain(&other.0).cloned().collect())
    }

    /// Number of positions carrying a letter of `set`.
    pub fn occ(&self, set: &BTreeSet<Letter>) -> usize {
        occ(&self.0, set)
    }
}

/// Number of positions of `word` carrying a letter of `set`.
pub fn occ(word: &[Letter], set: &BTreeSet<Letter>) -> usize {
    word.iter().filter(|a| set.contains(*a)).count()
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromIterator<Letter> for FiniteWord {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        FiniteWord(iter.into_iter().collect())
    }
}

/// The infinite word `prefix · cycle · cycle · …`.
///
/// Representations are not canonical: `("", "ab")` and `("a", "ba")` denote
/// the same word. Use [`LassoWord::same_word`] to compare denotations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LassoWord {
    prefix: FiniteWord,
    cycle: FiniteWord,
}

impl LassoWord {
    pub fn new(prefix: FiniteWord, cycle: FiniteWord) -> Result<LassoWord, WordError> {
        if cycle.is_empty() {
            return Err(WordError::EmptyLoop);
        }
        Ok(LassoWord { prefix, cycle })
    }

    pub fn from_names(prefix: &[&str], cycle: &[&str]) -> Result<LassoWord, WordError> {
        LassoWord::new(
            prefix.iter().map(Letter::new).collect(),
            cycle.iter().map(Letter::new).collect(),
        )
    }

    pub fn prefix(&self) -> &FiniteWord {
        &self.prefix
    }

    pub fn cycle(&self) -> &FiniteWord {
        &self.cycle
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    /// `|u| + |v|`: positions `0..span()` cover every distinct suffix.
    pub fn span(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Maps an arbitrary position to the representative in `0..span()` with
    /// the same suffix.
    pub fn canonical_position(&self, i: usize) -> usize {
        let u = self.prefix.len();
        if i < u {
            i
        } else {
            u + (i - u) % self.cycle.len()
        }
    }

    pub fn letter_at(&self, i: usize) -> &Letter {
        let u = self.prefix.len();
        if i < u {
            &self.prefix.0[i]
        } else {
            &self.cycle.0[(i - u) % self.cycle.len()]
        }
    }

    /// A lasso for the suffix starting at position `i`.
    pub fn suffix(&self, i: usize) -> LassoWord {
        let u = self.prefix.len();
        if i <= u {
            return LassoWord {
                prefix: FiniteWord(self.prefix.0[i..].to_vec()),
                cycle: self.cycle.clone(),
            };
        }
        let shift = (i - u) % self.cycle.len();
        let mut rotated = self.cycle.0[shift..].to_vec();
        rotated.extend_from_slice(&self.cycle.0[..shift]);
        LassoWord {
            prefix: FiniteWord::empty(),
            cycle: FiniteWord(rotated),
        }
    }

    /// Whether both lassos denote the same infinite word.
    pub fn same_word(&self, other: &LassoWord) -> bool {
        let horizon = self.prefix_len() + other.prefix_len() + lcm(self.period(), other.period());
        (0..horizon).all(|i| self.letter_at(i) == other.letter_at(i))
    }

    /// Letters occurring anywhere in the word.
    pub fn letters(&self) -> BTreeSet<Letter> {
        self.prefix.0.iter().chain(&self.cycle.0).cloned().collect()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prefix.is_empty() {
            write!(f, "; {}", self.cycle)
        } else {
            write!(f, "{} ; {}", self.prefix, self.cycle)
        }
    }
}

impl FromStr for LassoWord {
    type Err = WordError;

    /// `tok tok … ; tok tok …`; the part after `;` is the loop.
    fn from_str(text: &str) -> Result<LassoWord, WordError> {
        let mut parts = text.split(';');
        let prefix = parts.next().unwrap_or("");
        let cycle = parts.next().ok_or(WordError::MissingSeparator)?;
        if parts.next().is_some() {
            return Err(WordError::ExtraSeparator);
        }
        LassoWord::new(FiniteWord::parse(prefix)?, FiniteWord::parse(cycle)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> LassoWord {
        s.parse().unwrap()
    }

    fn set(names: &[&str]) -> BTreeSet<Letter> {
        names.iter().map(Letter::new).collect()
    }

    #[test]
    fn letter_at_examples() {
        assert_eq!(word("c b a a b b ; c").letter_at(1).as_str(), "b");
        assert_eq!(word("; a b").letter_at(5).as_str(), "b");
        assert_eq!(word("x ; y").letter_at(0).as_str(), "x");
        assert_eq!(word("x ; y").letter_at(100).as_str(), "y");
    }

    #[test]
    fn suffix_examples() {
        assert_eq!(word("c b a a b b ; c").suffix(6), word("; c"));
        let s = word("; a b").suffix(1);
        assert!(s.same_word(&word("; b a")));
        assert!(s.same_word(&word("b ; a b")));
        assert_eq!(word("a b ; c").suffix(0), word("a b ; c"));
    }

    #[test]
    fn occ_examples() {
        let y5 = FiniteWord::parse("t5 ah bh $0 a b").unwrap();
        assert_eq!(y5.occ(&set(&["a", "b"])), 2);
        assert_eq!(FiniteWord::parse("a a b").unwrap().occ(&set(&["a"])), 2);
        assert_eq!(FiniteWord::empty().occ(&set(&["a"])), 0);
    }

    #[test]
    fn parse_errors() {
        assert_eq!("a b".parse::<LassoWord>(), Err(WordError::MissingSeparator));
        assert_eq!("a ;".parse::<LassoWord>(), Err(WordError::EmptyLoop));
        assert_eq!(
            "a ; b ; c".parse::<LassoWord>(),
            Err(WordError::ExtraSeparator)
        );
        assert_eq!(
            "a U ; b".parse::<LassoWord>(),
            Err(WordError::BadToken("U".into()))
        );
    }

    #[test]
    fn display_round_trips() {
        for text in ["$0 t1 ah $1 ; #", "; a b"] {
            assert_eq!(word(text).to_string(), text);
        }
    }

    #[test]
    fn same_word_detects_difference() {
        assert!(word("a ; a").same_word(&word("; a a")));
        assert!(!word("a ; b").same_word(&word("; a b")));
    }
}
