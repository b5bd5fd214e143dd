//! Seeded property campaigns over random machines and words, as run by the
//! `selftest` command.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::brute::brute_force_models;
use crate::eval::Evaluator;
use crate::gen::{
    enumerate_words, random_core_formula, random_finite_word, random_lasso, random_machine,
    random_near_lsymb,
};
use crate::logic::{Alphabet, Letter};
use crate::minsky::MinskyMachine;
use crate::mutate::all_mutations;
use crate::reduction::{
    balance_check_a, balance_check_b, build_alphabet, decode, encode, in_lsymb, phi_count,
    phi_symb, reduce, EncodedComputation, PartitionTable,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    Small,
    Full,
}

impl Budget {
    fn scale(self, small: usize, full: usize) -> usize {
        match self {
            Budget::Small => small,
            Budget::Full => full,
        }
    }
}

impl std::str::FromStr for Budget {
    type Err = String;

    fn from_str(s: &str) -> Result<Budget, String> {
        match s {
            "small" => Ok(Budget::Small),
            "full" => Ok(Budget::Full),
            _ => Err(format!("unknown budget `{s}` (expected small or full)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub counterexample: Option<String>,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "{}: ok ({} cases)", self.name, self.cases),
            Some(c) => write!(
                f,
                "{}: COUNTEREXAMPLE after {} cases\n{c}",
                self.name, self.cases
            ),
        }
    }
}

type Found = Result<(), String>;
type Suite = fn(&mut Campaign) -> (usize, Found);

struct Campaign {
    rng: ChaCha8Rng,
    budget: Budget,
    encodings: Vec<(MinskyMachine, EncodedComputation)>,
}

impl Campaign {
    fn new(seed: u64, budget: Budget) -> Campaign {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let wanted = budget.scale(10, 60);
        let mut encodings = Vec::new();
        for _ in 0..wanted * 200 {
            if encodings.len() == wanted {
                break;
            }
            let m = random_machine(&mut rng, 6);
            if let Some(pi) = m.find_successful_computation(14, 5) {
                let enc = encode(&pi, &m).expect("found computations are successful");
                encodings.push((m, enc));
            }
        }
        Campaign {
            rng,
            budget,
            encodings,
        }
    }

    fn balance(&mut self) -> (usize, Found) {
        let m: MinskyMachine =
            "loc p q r\ntrans t1 p inc1 q\ntrans t2 q zero2 r\ninit t1\nfinal t2"
                .parse()
                .expect("fixed machine");
        let table = PartitionTable::new(&m);
        let sigma: Vec<Letter> = ["a", "b", "ah", "bh", "t1", "t2", "$0", "$1", "$z"]
            .iter()
            .map(Letter::new)
            .collect();
        let mut words = enumerate_words(&sigma, self.budget.scale(4, 6));
        for _ in 0..self.budget.scale(1_000, 10_000) {
            let len = self.rng.gen_range(0..=40);
            words.push(random_finite_word(&mut self.rng, &sigma, len));
        }
        for w in &words {
            let a = balance_check_a(w, &table);
            let b = balance_check_b(w, &table);
            let broken = (a.hypothesis && !a.balanced()) || (b.hypothesis && !b.balanced());
            if broken {
                let text: Vec<&str> = w.iter().map(Letter::as_str).collect();
                return (words.len(), Err(format!("word: {}", text.join(" "))));
            }
        }
        (words.len(), Ok(()))
    }

    fn round_trip(&mut self) -> (usize, Found) {
        for (m, enc) in &self.encodings {
            let sigma = build_alphabet(m).expect("valid machine");
            let holds = Evaluator::new(sigma.alphabet(), &reduce(m))
                .and_then(|ev| ev.models(&enc.word))
                .unwrap_or(false);
            let decoded = decode(&enc.word, m).ok().and_then(|d| d.verdict.ok());
            let back = decoded.and_then(|pi| encode(&pi, m).ok());
            if back.as_ref() != Some(enc) || !holds {
                return (
                    self.encodings.len(),
                    Err(format!("machine:\n{m}word: {}", enc.word)),
                );
            }
        }
        (self.encodings.len(), Ok(()))
    }

    fn shape_oracle(&mut self) -> (usize, Found) {
        let mut cases = 0;
        let per = self.budget.scale(20, 200);
        for (m, enc) in &self.encodings {
            let sigma = build_alphabet(m).expect("valid machine");
            let ev = Evaluator::new(sigma.alphabet(), &phi_symb(m)).expect("formula over sigma");
            let letters: Vec<Letter> = sigma.alphabet().letters().cloned().collect();
            let mut words: Vec<_> = all_mutations(&enc.word, &sigma.without_pad())
                .iter()
                .map(|mu| mu.apply(&enc.word))
                .take(per)
                .collect();
            for _ in 0..per {
                words.push(random_near_lsymb(&mut self.rng, m, &letters, 20));
            }
            for w in words {
                cases += 1;
                if ev.models(&w).ok() != Some(in_lsymb(&w, m)) {
                    return (cases, Err(format!("machine:\n{m}word: {w}")));
                }
            }
        }
        (cases, Ok(()))
    }

    fn mutations(&mut self) -> (usize, Found) {
        let mut cases = 0;
        for (m, enc) in &self.encodings {
            let sigma = build_alphabet(m).expect("valid machine");
            let ev = Evaluator::new(sigma.alphabet(), &phi_count(m)).expect("formula over sigma");
            for mu in all_mutations(&enc.word, &sigma.without_pad()) {
                let w = mu.apply(&enc.word);
                if !in_lsymb(&w, m) {
                    continue;
                }
                cases += 1;
                let valid = decode(&w, m).map(|d| d.verdict.is_ok()).unwrap_or(false);
                if ev.models(&w).ok() != Some(valid) {
                    return (
                        cases,
                        Err(format!("machine:\n{m}mutation: {mu}\nword: {w}")),
                    );
                }
            }
        }
        (cases, Ok(()))
    }

    fn evaluator(&mut self) -> (usize, Found) {
        let letters: Vec<Letter> = ["a", "b", "c"].iter().map(Letter::new).collect();
        let sigma = Alphabet::new(letters.clone()).expect("distinct");
        let n = self.budget.scale(1_000, 10_000);
        for i in 0..n {
            let w = random_lasso(&mut self.rng, &letters, 6, 5);
            let phi = random_core_formula(&mut self.rng, &letters, 4);
            let fast = Evaluator::new(&sigma, &phi).and_then(|ev| ev.models(&w));
            let slow = brute_force_models(&sigma, &w, &phi);
            if fast != slow {
                return (i + 1, Err(format!("formula: {phi}\nword: {w}")));
            }
        }
        (n, Ok(()))
    }
}

/// Runs every suite in a fixed order. Identical seeds give identical reports.
pub fn run_selftest(seed: u64, budget: Budget) -> Vec<SuiteReport> {
    let mut c = Campaign::new(seed, budget);
    let suites: [(&'static str, Suite); 5] = [
        ("balance lemma", Campaign::balance),
        ("encode/decode round trip", Campaign::round_trip),
        ("shape formula vs scanner", Campaign::shape_oracle),
        ("counting formula vs decoder", Campaign::mutations),
        ("evaluator vs brute force", Campaign::evaluator),
    ];
    suites
        .into_iter()
        .map(|(name, run)| {
            let (cases, found) = run(&mut c);
            SuiteReport {
                name,
                cases,
                counterexample: found.err(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_budget_passes_and_is_deterministic() {
        let a = run_selftest(42, Budget::Small);
        assert!(a.iter().all(|r| r.counterexample.is_none()), "{a:?}");
        assert_eq!(a, run_selftest(42, Budget::Small));
    }
}
