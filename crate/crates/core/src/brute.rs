//! Reference evaluator: direct recursion over positions of the infinite word.
//!
//! Shares nothing with the table evaluator beyond the word and formula
//! types. Every until searches witnesses up to an explicit bound instead of
//! reasoning about loop slopes, so it is only meant for small inputs.

use std::collections::HashMap;

use crate::eval::EvalError;
use crate::lasso::LassoWord;
use crate::logic::{Alphabet, Formula};

struct Brute<'a> {
    alphabet: &'a Alphabet,
    word: &'a LassoWord,
    memo: HashMap<(usize, usize), bool>,
}

impl Brute<'_> {
    // Steps from `i` until every reachable suffix has been seen once.
    fn horizon(&self, i: usize) -> usize {
        self.word.prefix_len().saturating_sub(i) + self.word.period()
    }

    fn holds(&mut self, phi: &Formula, i: usize) -> bool {
        let i = self.word.canonical_position(i);
        let key = (phi as *const Formula as usize, i);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = match phi {
            Formula::Atom(a) => self.word.letter_at(i) == a,
            Formula::True => self.alphabet.contains(self.word.letter_at(i)),
            Formula::False => !self.alphabet.contains(self.word.letter_at(i)),
            Formula::LetterSet(set) => set.contains(self.word.letter_at(i)),
            Formula::Next(f) => self.holds(f, i + 1),
            Formula::Not(f) => !self.holds(f, i),
            Formula::And(l, r) => self.holds(l, i) && self.holds(r, i),
            Formula::Or(l, r) => self.holds(l, i) || self.holds(r, i),
            Formula::Implies(l, r) => !self.holds(l, i) || self.holds(r, i),
            Formula::Eventually(f) => (0..=self.horizon(i)).any(|j| self.holds(f, i + j)),
            Formula::Always(f) => (0..=self.horizon(i)).all(|j| self.holds(f, i + j)),
            Formula::ClassicUntil(l, r) => {
                let mut j = 0;
                loop {
                    if self.holds(r, i + j) {
                        break true;
                    }
                    if !self.holds(l, i + j) || j > self.horizon(i) {
                        break false;
                    }
                    j += 1;
                }
            }
            Formula::FreqUntil(q, l, r) => {
                let (num, den) = (q.numer() as usize, q.denom() as usize);
                let t = self.horizon(i);
                // If the per-loop surplus is positive it is at least 1 (in units
                // of 1/den), so den·t extra loops cover any deficit from the
                // first t steps.
                let bound = t + self.word.period() * (den * t + 1);
                let mut count = 0usize;
                (0..=bound).any(|j| {
                    if self.holds(r, i + j) && count * den >= num * j {
                        return true;
                    }
                    count += self.holds(l, i + j) as usize;
                    false
                })
            }
        };
        self.memo.insert(key, v);
        v
    }
}

/// Whether `w ⊨ phi`, decided by bounded witness search.
pub fn brute_force_models(
    alphabet: &Alphabet,
    w: &LassoWord,
    phi: &Formula,
) -> Result<bool, EvalError> {
    if let Some(bad) = phi.letters().into_iter().find(|a| !alphabet.contains(a)) {
        return Err(EvalError::FormulaLetter(bad));
    }
    if let Some(bad) = w.letters().into_iter().find(|a| !alphabet.contains(a)) {
        return Err(EvalError::WordLetter(bad));
    }
    let mut brute = Brute {
        alphabet,
        word: w,
        memo: HashMap::new(),
    };
    Ok(brute.holds(phi, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_open;

    fn check(phi: &str, w: &str, letters: &[&str]) -> bool {
        let sigma = Alphabet::from_names(letters).unwrap();
        brute_force_models(&sigma, &w.parse().unwrap(), &parse_open(phi).unwrap()).unwrap()
    }

    #[test]
    fn worked_example() {
        assert!(check("a U{1/2} b", "c b a a b b ; c", &["a", "b", "c"]));
        assert!(!check("a U{3/4} b", "c b a a b b ; c", &["a", "b", "c"]));
    }

    #[test]
    fn always_true() {
        assert!(check("G true", "a b ; b a", &["a", "b"]));
        assert!(check("G true", "; a", &["a"]));
    }

    #[test]
    fn late_witness() {
        // needs two passes through the loop: j = 8
        assert!(check("a U{1/2} c", "b b b ; a a c", &["a", "b", "c"]));
        assert!(!check("a U{2/3} c", "b b b ; a a c", &["a", "b", "c"]));
    }
}
