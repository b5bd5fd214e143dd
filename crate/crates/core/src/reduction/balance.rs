//! Occurrence counts behind the frequency constraints of the counting
//! formula: if every tuple of classes covers at least half of a word, then
//! complementary classes occur equally often.

use super::{Kind, PartitionTable};
use crate::lasso::occ;
use crate::logic::Letter;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceReport {
    /// Whether every tuple sum is at least half the word length.
    pub hypothesis: bool,
    /// Occurrences per class, in type order.
    pub counts: Vec<(Kind, usize)>,
}

impl BalanceReport {
    pub fn count(&self, kind: Kind) -> usize {
        self.counts
            .iter()
            .find(|(k, _)| *k == kind)
            .map_or(0, |(_, c)| *c)
    }

    /// Whether each class occurs as often as its complement.
    pub fn balanced(&self) -> bool {
        self.counts
            .iter()
            .all(|&(k, c)| c == self.count(k.complement()))
    }

    fn check(counts: Vec<(Kind, usize)>, tuples: &[Vec<Kind>], len: usize) -> BalanceReport {
        let mut report = BalanceReport {
            hypothesis: true,
            counts,
        };
        report.hypothesis = tuples
            .iter()
            .all(|t| 2 * t.iter().map(|&k| report.count(k)).sum::<usize>() >= len);
        report
    }
}

/// Counts over the partition used for counter updates.
pub fn balance_check_a(w: &[Letter], table: &PartitionTable) -> BalanceReport {
    let counts = Kind::TYPES_A
        .iter()
        .map(|&k| (k, occ(w, table.a_class(k))))
        .collect();
    let tuples: Vec<Vec<Kind>> = PartitionTable::tuples_a()
        .iter()
        .map(|t| t.to_vec())
        .collect();
    BalanceReport::check(counts, &tuples, w.len())
}

/// Counts over the partition used for carryovers.
pub fn balance_check_b(w: &[Letter], table: &PartitionTable) -> BalanceReport {
    let counts = Kind::TYPES_B
        .iter()
        .map(|&k| (k, occ(w, table.b_class(k).expect("B type"))))
        .collect();
    let tuples: Vec<Vec<Kind>> = PartitionTable::tuples_b()
        .iter()
        .map(|t| t.to_vec())
        .collect();
    BalanceReport::check(counts, &tuples, w.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lasso::FiniteWord;
    use crate::minsky::example_machine;

    fn letters(s: &str) -> Vec<Letter> {
        FiniteWord::parse(s).unwrap().into_letters()
    }

    #[test]
    fn carryover_block() {
        let table = PartitionTable::new(&example_machine());
        let r = balance_check_b(&letters("t5 ah bh $0 a b"), &table);
        assert!(r.hypothesis);
        assert_eq!(r.count(Kind::A), 1);
        assert_eq!(r.count(Kind::AHat), 1);
        assert_eq!(r.count(Kind::B), 1);
        assert_eq!(r.count(Kind::BHat), 1);
        assert!(r.balanced());
    }

    #[test]
    fn hypothesis_fails() {
        let table = PartitionTable::new(&example_machine());
        let r = balance_check_a(&letters("a a"), &table);
        assert!(!r.hypothesis);
        // (ah, bh, 1, zerobar) covers nothing
        let t = [Kind::AHat, Kind::BHat, Kind::Bit1, Kind::ZeroBar];
        assert_eq!(t.iter().map(|&k| r.count(k)).sum::<usize>(), 0);
    }

    #[test]
    fn empty_word() {
        let table = PartitionTable::new(&example_machine());
        for r in [balance_check_a(&[], &table), balance_check_b(&[], &table)] {
            assert!(r.hypothesis);
            assert!(r.balanced());
        }
    }
}
