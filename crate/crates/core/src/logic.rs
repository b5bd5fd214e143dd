//! Formula syntax: letters, alphabets, frequencies, and the formula tree.
//!
//! The core constructors are atoms, `X`, frequency until, negation, and
//! conjunction. Everything else (`true`, `false`, `|`, `->`, `F`, `G`,
//! classical `U`, letter sets) is sugar that [`desugar`] removes.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;
use num_rational::Ratio;
use thiserror::Error;

/// Exact rational numbers, always kept in lowest terms.
pub type Rational = Ratio<i64>;

/// An opaque letter name. Two letters are equal iff their names are.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(Arc<str>);

impl Letter {
    pub fn new(name: impl AsRef<str>) -> Letter {
        Letter(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Letter {
    fn from(name: &str) -> Letter {
        Letter::new(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("alphabet must not be empty")]
    Empty,
    #[error("duplicate letter `{0}` in alphabet")]
    Duplicate(Letter),
}

/// A nonempty finite set of letters, kept in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: IndexSet<Letter>,
}

impl Alphabet {
    pub fn new<I>(letters: I) -> Result<Alphabet, AlphabetError>
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut set = IndexSet::new();
        for letter in letters {
            if !set.insert(letter.clone()) {
                return Err(AlphabetError::Duplicate(letter));
            }
        }
        if set.is_empty() {
            return Err(AlphabetError::Empty);
        }
        Ok(Alphabet { letters: set })
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Alphabet, AlphabetError> {
        Alphabet::new(names.iter().map(Letter::new))
    }

    pub fn contains(&self, letter: &Letter) -> bool {
        self.letters.contains(letter)
    }

    pub fn index_of(&self, letter: &Letter) -> Option<usize> {
        self.letters.get_index_of(letter)
    }

    pub fn letters(&self) -> impl Iterator<Item = &Letter> + '_ {
        self.letters.iter()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrequencyError {
    #[error("frequency has zero denominator")]
    ZeroDenominator,
    #[error("frequency {0} is out of range [0,1]")]
    OutOfRange(Rational),
}

/// The rational annotation `r` of a frequency until, with `0 <= r <= 1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frequency(Rational);

impl Frequency {
    pub fn new(numer: i64, denom: i64) -> Result<Frequency, FrequencyError> {
        if denom == 0 {
            return Err(FrequencyError::ZeroDenominator);
        }
        Frequency::from_rational(Rational::new(numer, denom))
    }

    pub fn from_rational(r: Rational) -> Result<Frequency, FrequencyError> {
        if r < Rational::from_integer(0) || r > Rational::from_integer(1) {
            return Err(FrequencyError::OutOfRange(r));
        }
        Ok(Frequency(r))
    }

    pub fn zero() -> Frequency {
        Frequency(Rational::from_integer(0))
    }

    pub fn one() -> Frequency {
        Frequency(Rational::from_integer(1))
    }

    pub fn half() -> Frequency {
        Frequency(Rational::new(1, 2))
    }

    pub fn value(self) -> Rational {
        self.0
    }

    pub fn numer(self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(self) -> i64 {
        *self.0.denom()
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A frequency LTL formula.
///
/// Equality is structural; frequencies are normalized on construction so
/// `U{2/4}` and `U{1/2}` compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Letter),
    Next(Box<Formula>),
    FreqUntil(Frequency, Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    // sugar
    True,
    False,
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Always(Box<Formula>),
    ClassicUntil(Box<Formula>, Box<Formula>),
    LetterSet(BTreeSet<Letter>),
}

impl Formula {
    pub fn atom(name: impl AsRef<str>) -> Formula {
        Formula::Atom(Letter::new(name))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn freq_until(r: Frequency, lhs: Formula, rhs: Formula) -> Formula {
        Formula::FreqUntil(r, Box::new(lhs), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Formula {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn eventually(f: Formula) -> Formula {
        Formula::Eventually(Box::new(f))
    }

    pub fn always(f: Formula) -> Formula {
        Formula::Always(Box::new(f))
    }

    pub fn until(lhs: Formula, rhs: Formula) -> Formula {
        Formula::ClassicUntil(Box::new(lhs), Box::new(rhs))
    }

    pub fn letter_set<I: IntoIterator<Item = Letter>>(letters: I) -> Formula {
        Formula::LetterSet(letters.into_iter().collect())
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn all<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn any<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            Atom(_) | True | False | LetterSet(_) => vec![],
            Next(f) | Not(f) | Eventually(f) | Always(f) => vec![f],
            FreqUntil(_, l, r) | And(l, r) | Or(l, r) | Implies(l, r) | ClassicUntil(l, r) => {
                vec![l, r]
            }
        }
    }

    /// True iff only the five core constructors occur.
    pub fn is_core(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Next(_) | Formula::FreqUntil(..) | Formula::Not(_) | Formula::And(..) => {
                self.children().into_iter().all(Formula::is_core)
            }
            _ => false,
        }
    }

    /// All letters mentioned by atoms and letter sets.
    pub fn letters(&self) -> BTreeSet<Letter> {
        let mut out = BTreeSet::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut BTreeSet<Letter>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::LetterSet(set) => out.extend(set.iter().cloned()),
            _ => {
                for c in self.children() {
                    c.collect_letters(out);
                }
            }
        }
    }

    /// Number of nodes in the tree (shared subtrees counted every time).
    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::size)
            .sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::depth)
            .max()
            .unwrap_or(0)
    }
}

/// Rewrites all sugar into the five core constructors.
///
/// `true` expands to the disjunction of every letter of `alphabet`, so the
/// result can be large for big alphabets.
pub fn desugar(phi: &Formula, alphabet: &Alphabet) -> Formula {
    use Formula as F;
    let top = || disjunction(alphabet.letters().map(|a| F::Atom(a.clone())).collect());
    match phi {
        F::Atom(a) => F::Atom(a.clone()),
        F::Next(f) => F::next(desugar(f, alphabet)),
        F::FreqUntil(r, l, rr) => F::freq_until(*r, desugar(l, alphabet), desugar(rr, alphabet)),
        F::Not(f) => F::not(desugar(f, alphabet)),
        F::And(l, r) => F::and(desugar(l, alphabet), desugar(r, alphabet)),
        F::True => top(),
        F::False => F::not(top()),
        F::Or(l, r) => disjunction(vec![desugar(l, alphabet), desugar(r, alphabet)]),
        F::Implies(l, r) => F::not(F::and(desugar(l, alphabet), F::not(desugar(r, alphabet)))),
        F::Eventually(f) => F::freq_until(Frequency::one(), top(), desugar(f, alphabet)),
        F::Always(f) => F::not(F::freq_until(
            Frequency::one(),
            top(),
            F::not(desugar(f, alphabet)),
        )),
        F::ClassicUntil(l, r) => {
            F::freq_until(Frequency::one(), desugar(l, alphabet), desugar(r, alphabet))
        }
        F::LetterSet(set) if set.is_empty() => F::not(top()),
        F::LetterSet(set) => disjunction(set.iter().map(|a| F::Atom(a.clone())).collect()),
    }
}

// Core encoding of a nonempty disjunction: !(!p1 & (!p2 & ...)).
fn disjunction(mut parts: Vec<Formula>) -> Formula {
    assert!(!parts.is_empty(), "disjunction of nothing");
    if parts.len() == 1 {
        return parts.pop().unwrap();
    }
    let mut negated = parts.into_iter().rev().map(Formula::not);
    let last = negated.next().unwrap();
    let conj = negated.fold(last, |acc, f| Formula::and(f, acc));
    Formula::not(conj)
}

/// Distinct subformulas in bottom-up order: every child precedes its parent,
/// and structurally equal subformulas appear once.
pub fn subformulas(phi: &Formula) -> Vec<Formula> {
    fn visit<'a>(f: &'a Formula, seen: &mut HashSet<&'a Formula>, out: &mut Vec<&'a Formula>) {
        if seen.contains(f) {
            return;
        }
        for c in f.children() {
            visit(c, seen, out);
        }
        seen.insert(f);
        out.push(f);
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    visit(phi, &mut seen, &mut out);
    out.into_iter().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Formula {
        Formula::atom("a")
    }

    fn b() -> Formula {
        Formula::atom("b")
    }

    #[test]
    fn frequency_is_normalized_and_bounded() {
        assert_eq!(Frequency::new(2, 4).unwrap(), Frequency::half());
        assert_eq!(Frequency::new(3, 3).unwrap(), Frequency::one());
        assert_eq!(
            Frequency::new(3, 2),
            Err(FrequencyError::OutOfRange(Rational::new(3, 2)))
        );
        assert_eq!(Frequency::new(1, 0), Err(FrequencyError::ZeroDenominator));
        assert!(Frequency::new(-1, 2).is_err());
    }

    #[test]
    fn alphabet_rejects_duplicates_and_empty() {
        assert_eq!(
            Alphabet::from_names(&["a", "b", "a"]),
            Err(AlphabetError::Duplicate(Letter::new("a")))
        );
        assert_eq!(Alphabet::new(vec![]), Err(AlphabetError::Empty));
    }

    #[test]
    fn desugar_letter_set_and_until() {
        let sigma = Alphabet::from_names(&["a", "b"]).unwrap();
        let set = Formula::letter_set(vec![Letter::new("a"), Letter::new("b")]);
        assert_eq!(
            desugar(&set, &sigma),
            Formula::not(Formula::and(Formula::not(a()), Formula::not(b())))
        );
        assert_eq!(
            desugar(&Formula::until(a(), b()), &sigma),
            Formula::freq_until(Frequency::one(), a(), b())
        );
        let top = Formula::not(Formula::and(Formula::not(a()), Formula::not(b())));
        assert_eq!(
            desugar(&Formula::eventually(b()), &sigma),
            Formula::freq_until(Frequency::one(), top, b())
        );
    }

    #[test]
    fn desugar_output_is_core() {
        let sigma = Alphabet::from_names(&["a", "b", "c"]).unwrap();
        let phi = Formula::implies(
            Formula::always(Formula::or(a(), Formula::False)),
            Formula::eventually(Formula::letter_set(vec![])),
        );
        assert!(!phi.is_core());
        assert!(desugar(&phi, &sigma).is_core());
    }

    #[test]
    fn subformulas_bottom_up() {
        assert_eq!(subformulas(&a()), vec![a()]);
        let u = Formula::freq_until(Frequency::half(), a(), b());
        assert_eq!(subformulas(&u), vec![a(), b(), u.clone()]);
        let conj = Formula::and(a(), Formula::not(a()));
        assert_eq!(
            subformulas(&conj),
            vec![a(), Formula::not(a()), conj.clone()]
        );
    }

    #[test]
    fn all_and_any_of_nothing() {
        assert_eq!(Formula::all(vec![]), Formula::True);
        assert_eq!(Formula::any(vec![]), Formula::False);
        assert_eq!(Formula::any(vec![a()]), a());
    }
}
