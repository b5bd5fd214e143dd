//! Single-token edits of the finite prefix of a lasso word.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::lasso::{FiniteWord, LassoWord};
use crate::logic::Letter;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mutation {
    Substitute { pos: usize, letter: Letter },
    Insert { pos: usize, letter: Letter },
    Delete { pos: usize },
}

impl Mutation {
    /// Applies the edit to the prefix; the loop is left alone.
    pub fn apply(&self, w: &LassoWord) -> LassoWord {
        let mut prefix = w.prefix().letters().to_vec();
        match self {
            Mutation::Substitute { pos, letter } => prefix[*pos] = letter.clone(),
            Mutation::Insert { pos, letter } => prefix.insert(*pos, letter.clone()),
            Mutation::Delete { pos } => {
                prefix.remove(*pos);
            }
        }
        LassoWord::new(FiniteWord::new(prefix), w.cycle().clone()).expect("loop unchanged")
    }

    pub fn position(&self) -> usize {
        match self {
            Mutation::Substitute { pos, .. }
            | Mutation::Insert { pos, .. }
            | Mutation::Delete { pos } => *pos,
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mutation::Substitute { pos, letter } => write!(f, "substitute {letter} at {pos}"),
            Mutation::Insert { pos, letter } => write!(f, "insert {letter} at {pos}"),
            Mutation::Delete { pos } => write!(f, "delete at {pos}"),
        }
    }
}

/// Every substitution, insertion, and deletion of one prefix token.
pub fn all_mutations(w: &LassoWord, letters: &[Letter]) -> Vec<Mutation> {
    let prefix = w.prefix().letters();
    let mut out = Vec::new();
    for pos in 0..=prefix.len() {
        for a in letters {
            if pos < prefix.len() && prefix[pos] != *a {
                out.push(Mutation::Substitute {
                    pos,
                    letter: a.clone(),
                });
            }
            out.push(Mutation::Insert {
                pos,
                letter: a.clone(),
            });
        }
        if pos < prefix.len() {
            out.push(Mutation::Delete { pos });
        }
    }
    out
}

/// A uniformly placed random edit. Substitutions always change the token.
pub fn random_mutation<R: Rng>(rng: &mut R, w: &LassoWord, letters: &[Letter]) -> Mutation {
    let len = w.prefix_len();
    loop {
        let kind = if len == 0 { 1 } else { rng.gen_range(0..3) };
        let letter = letters.choose(rng).expect("nonempty").clone();
        match kind {
            0 => {
                let pos = rng.gen_range(0..len);
                if w.prefix().letters()[pos] != letter {
                    return Mutation::Substitute { pos, letter };
                }
            }
            1 => {
                return Mutation::Insert {
                    pos: rng.gen_range(0..=len),
                    letter,
                }
            }
            _ => {
                return Mutation::Delete {
                    pos: rng.gen_range(0..len),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_edits() {
        let w: LassoWord = "a b ; c".parse().unwrap();
        let x = Letter::new("x");
        assert_eq!(
            Mutation::Substitute {
                pos: 1,
                letter: x.clone()
            }
            .apply(&w)
            .to_string(),
            "a x ; c"
        );
        assert_eq!(
            Mutation::Insert { pos: 2, letter: x }.apply(&w).to_string(),
            "a b x ; c"
        );
        assert_eq!(Mutation::Delete { pos: 0 }.apply(&w).to_string(), "b ; c");
    }

    #[test]
    fn all_mutations_count() {
        let w: LassoWord = "a b ; c".parse().unwrap();
        let letters = [Letter::new("a"), Letter::new("b")];
        // 2 substitutions, 3·2 insertions, 2 deletions
        assert_eq!(all_mutations(&w, &letters).len(), 10);
    }
}
