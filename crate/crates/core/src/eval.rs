//! Exact satisfaction checking of formulas over lasso words.
//!
//! Satisfaction at position `i` depends only on the suffix starting at `i`,
//! and for `i >= |u|` that suffix repeats every `|v|` positions. A table
//! with one row per subformula and `|u| + |v|` columns therefore decides
//! every position of the infinite word.

use thiserror::Error;

use crate::dag::{Dag, Node, NodeId};
use crate::lasso::LassoWord;
use crate::logic::{Alphabet, Formula, Frequency, Letter, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("word letter `{0}` is not in the alphabet")]
    WordLetter(Letter),
    #[error("formula letter `{0}` is not in the alphabet")]
    FormulaLetter(Letter),
}

/// A witness `j` for `φ U^r ψ`: ψ holds `j` steps ahead and φ held at
/// `count >= r·j` of the `j` positions before.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub j: usize,
    pub count: usize,
}

/// Asks whether a frequency until holds at `start`, given the rows of its
/// two operands.
#[derive(Debug, Clone, Copy)]
pub struct FreqWitnessQuery<'a> {
    pub start: usize,
    /// `|u|`; the successor of the last column is this column.
    pub loop_start: usize,
    pub phi_row: &'a [bool],
    pub psi_row: &'a [bool],
    pub freq: Frequency,
}

impl FreqWitnessQuery<'_> {
    fn successor(&self, i: usize) -> usize {
        if i + 1 < self.phi_row.len() {
            i + 1
        } else {
            self.loop_start
        }
    }
}

/// Whether some witness exists for the query.
pub fn freq_until_decide(q: &FreqWitnessQuery<'_>) -> bool {
    min_witness(q).is_some()
}

/// The smallest witness, if any.
///
/// Scans every `j` up to the transient plus one full loop. Beyond that, the
/// surplus `den·count(j) - num·j` along each loop residue is affine in the
/// number of extra loops, so its sign is settled by the slope.
pub fn min_witness(q: &FreqWitnessQuery<'_>) -> Option<Witness> {
    let n = q.phi_row.len();
    assert_eq!(n, q.psi_row.len(), "rows of different words");
    assert!(q.start < n && q.loop_start < n);
    let period = n - q.loop_start;
    let transient = q.loop_start.saturating_sub(q.start);
    let horizon = transient + period;
    let (num, den) = (q.freq.numer(), q.freq.denom());

    // counts[j] = φ-positions among the first j steps
    let mut counts = Vec::with_capacity(horizon + 1);
    let mut psi_at = Vec::with_capacity(horizon + 1);
    let mut pos = q.start;
    let mut count = 0usize;
    for j in 0..=horizon {
        counts.push(count);
        psi_at.push(q.psi_row[pos]);
        if q.psi_row[pos] && den * count as i64 >= num * j as i64 {
            return Some(Witness { j, count });
        }
        count += q.phi_row[pos] as usize;
        pos = q.successor(pos);
    }

    let per_loop = (counts[horizon] - counts[transient]) as i64;
    let slope = den * per_loop - num * period as i64;
    if slope <= 0 {
        // every residue is at its best on the first pass, which failed
        return None;
    }
    (transient..horizon)
        .filter(|&j0| psi_at[j0])
        .map(|j0| {
            let deficit = num * j0 as i64 - den * counts[j0] as i64;
            let loops = (deficit + slope - 1) / slope;
            Witness {
                j: j0 + loops as usize * period,
                count: counts[j0] + loops as usize * per_loop as usize,
            }
        })
        .min_by_key(|w| w.j)
}

/// Row of `φ U^r ψ` for all columns at once.
///
/// With `H(e) = den·P(e) - num·e` over the unrolled positions, start `s`
/// has a witness iff some ψ-position `e >= s` has `H(e) >= H(s)`. When the
/// loop slope is nonpositive the first unrolled copy of the loop already
/// attains the maximum, so a backward maximum over `|u| + 2|v|` positions
/// decides every column.
fn freq_until_row(
    loop_start: usize,
    phi: &[bool],
    psi: &[bool],
    freq: Frequency,
    out: &mut [bool],
) {
    let n = phi.len();
    let period = n - loop_start;
    let (num, den) = (freq.numer(), freq.denom());
    let ext = n + period;
    let col = |e: usize| if e < n { e } else { e - period };

    let per_loop = phi[loop_start..].iter().filter(|&&x| x).count() as i64;
    let slope = den * per_loop - num * period as i64;
    if slope > 0 && psi[loop_start..].iter().any(|&x| x) {
        out.fill(true);
        return;
    }

    let mut h = Vec::with_capacity(ext);
    let mut prefix = 0i64;
    for e in 0..ext {
        h.push(den * prefix - num * e as i64);
        prefix += phi[col(e)] as i64;
    }
    let mut best = i64::MIN;
    for e in (0..ext).rev() {
        if psi[col(e)] {
            best = best.max(h[e]);
        }
        if e < n {
            out[e] = best >= h[e];
        }
    }
}

// Node with letters resolved to alphabet indices.
#[derive(Debug, Clone)]
enum Op {
    True,
    Letters(Vec<bool>),
    Not(NodeId),
    And(NodeId, NodeId),
    Next(NodeId),
    FreqUntil(Frequency, NodeId, NodeId),
}

/// A formula compiled for repeated evaluation over many words.
#[derive(Debug, Clone)]
pub struct Evaluator {
    alphabet: Alphabet,
    dag: Dag,
    ops: Vec<Op>,
    root: NodeId,
}

impl Evaluator {
    pub fn new(alphabet: &Alphabet, phi: &Formula) -> Result<Evaluator, EvalError> {
        if let Some(bad) = phi.letters().into_iter().find(|a| !alphabet.contains(a)) {
            return Err(EvalError::FormulaLetter(bad));
        }
        let mut dag = Dag::default();
        let root = dag.lower(phi);
        let mask = |pred: &dyn Fn(&Letter) -> bool| alphabet.letters().map(pred).collect();
        let ops = dag
            .nodes()
            .iter()
            .map(|node| match node {
                Node::True => Op::True,
                Node::Atom(a) => Op::Letters(mask(&|x| x == a)),
                Node::Letters(set) => Op::Letters(mask(&|x| set.contains(x))),
                Node::Not(f) => Op::Not(*f),
                Node::And(l, r) => Op::And(*l, *r),
                Node::Next(f) => Op::Next(*f),
                Node::FreqUntil(q, l, r) => Op::FreqUntil(*q, *l, *r),
            })
            .collect();
        Ok(Evaluator {
            alphabet: alphabet.clone(),
            dag,
            ops,
            root,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of distinct subformulas after sharing.
    pub fn node_count(&self) -> usize {
        self.ops.len()
    }

    pub fn models(&self, w: &LassoWord) -> Result<bool, EvalError> {
        let rows = self.rows(w)?;
        Ok(rows[self.root * w.span()])
    }

    pub fn table(&self, w: &LassoWord) -> Result<SatTable, EvalError> {
        let rows = self.rows(w)?;
        Ok(SatTable {
            dag: self.dag.clone(),
            root: self.root,
            width: w.span(),
            loop_start: w.prefix_len(),
            rows,
        })
    }

    // Row-major table, one row of `w.span()` cells per node.
    fn rows(&self, w: &LassoWord) -> Result<Vec<bool>, EvalError> {
        let width = w.span();
        let mut letters = Vec::with_capacity(width);
        for i in 0..width {
            let a = w.letter_at(i);
            match self.alphabet.index_of(a) {
                Some(k) => letters.push(k),
                None => return Err(EvalError::WordLetter(a.clone())),
            }
        }

        let mut rows = vec![false; self.ops.len() * width];
        for (id, op) in self.ops.iter().enumerate() {
            let (done, rest) = rows.split_at_mut(id * width);
            let out = &mut rest[..width];
            let row = |k: NodeId| &done[k * width..(k + 1) * width];
            match op {
                Op::True => out.fill(true),
                Op::Letters(mask) => {
                    for (o, &k) in out.iter_mut().zip(&letters) {
                        *o = mask[k];
                    }
                }
                Op::Not(f) => {
                    for (o, &x) in out.iter_mut().zip(row(*f)) {
                        *o = !x;
                    }
                }
                Op::And(l, r) => {
                    for ((o, &x), &y) in out.iter_mut().zip(row(*l)).zip(row(*r)) {
                        *o = x && y;
                    }
                }
                Op::Next(f) => {
                    let src = row(*f);
                    for (i, o) in out.iter_mut().enumerate() {
                        let succ = if i + 1 < width { i + 1 } else { w.prefix_len() };
                        *o = src[succ];
                    }
                }
                Op::FreqUntil(q, l, r) => {
                    freq_until_row(w.prefix_len(), row(*l), row(*r), *q, out);
                }
            }
        }
        Ok(rows)
    }
}

/// Truth value of every subformula at every column `0..|u|+|v|`.
#[derive(Debug, Clone)]
pub struct SatTable {
    dag: Dag,
    root: NodeId,
    width: usize,
    loop_start: usize,
    rows: Vec<bool>,
}

impl SatTable {
    pub fn width(&self) -> usize {
        self.width
    }

    fn row_of(&self, id: NodeId) -> &[bool] {
        &self.rows[id * self.width..(id + 1) * self.width]
    }

    /// The row of the top-level formula.
    pub fn root_row(&self) -> &[bool] {
        self.row_of(self.root)
    }

    /// The row of any subformula of the evaluated formula.
    pub fn row(&self, phi: &Formula) -> Option<&[bool]> {
        self.dag.find(phi).map(|id| self.row_of(id))
    }

    /// Every row with the (core form of the) subformula it belongs to,
    /// children first.
    pub fn rows(&self) -> impl Iterator<Item = (Formula, &[bool])> + '_ {
        (0..self.dag.nodes().len()).map(|id| (self.dag.formula(id), self.row_of(id)))
    }

    /// Query object for a frequency-until subformula at `start`.
    pub fn query(&self, phi: &Formula, start: usize) -> Option<FreqWitnessQuery<'_>> {
        let id = self.dag.find(phi)?;
        match &self.dag.nodes()[id] {
            Node::FreqUntil(q, l, r) => Some(FreqWitnessQuery {
                start: self.dag_column(start),
                loop_start: self.loop_start,
                phi_row: self.row_of(*l),
                psi_row: self.row_of(*r),
                freq: *q,
            }),
            _ => None,
        }
    }

    fn dag_column(&self, i: usize) -> usize {
        if i < self.width {
            i
        } else {
            self.loop_start + (i - self.loop_start) % (self.width - self.loop_start)
        }
    }

    /// Minimal witnesses at `start` for every frequency until in the
    /// formula, children first.
    pub fn witnesses(&self, start: usize) -> Vec<(Formula, Option<Witness>)> {
        self.dag
            .nodes()
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n, Node::FreqUntil(..)))
            .map(|(id, _)| {
                let phi = self.dag.formula(id);
                let q = self.query(&phi, start).expect("frequency until node");
                (phi, min_witness(&q))
            })
            .collect()
    }

    /// Observed frequency of `phi` over the `j > 0` positions from `start`.
    pub fn frequency(&self, phi: &Formula, start: usize, j: usize) -> Option<Rational> {
        if j == 0 {
            return None;
        }
        let row = self.row(phi)?;
        let mut col = self.dag_column(start);
        let mut count = 0i64;
        for _ in 0..j {
            count += row[col] as i64;
            col = if col + 1 < self.width {
                col + 1
            } else {
                self.loop_start
            };
        }
        Some(Rational::new(count, j as i64))
    }
}

/// Satisfaction table of `phi` over `w`.
pub fn sat_table(alphabet: &Alphabet, w: &LassoWord, phi: &Formula) -> Result<SatTable, EvalError> {
    Evaluator::new(alphabet, phi)?.table(w)
}

/// Whether `w ⊨ phi`.
pub fn models(alphabet: &Alphabet, w: &LassoWord, phi: &Formula) -> Result<bool, EvalError> {
    Evaluator::new(alphabet, phi)?.models(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_open;

    fn sigma(names: &[&str]) -> Alphabet {
        Alphabet::from_names(names).unwrap()
    }

    fn word(s: &str) -> LassoWord {
        s.parse().unwrap()
    }

    fn eval(phi: &str, w: &str, letters: &[&str]) -> bool {
        models(&sigma(letters), &word(w), &parse_open(phi).unwrap()).unwrap()
    }

    const ABC: &[&str] = &["a", "b", "c"];

    #[test]
    fn letter_row() {
        let t = sat_table(&sigma(ABC), &word("c b a a b b ; c"), &Formula::atom("b")).unwrap();
        assert_eq!(
            t.root_row(),
            &[false, true, false, false, true, true, false]
        );
    }

    #[test]
    fn next_wraps_into_loop() {
        let t = sat_table(&sigma(ABC), &word("; a b"), &parse_open("X a").unwrap()).unwrap();
        assert_eq!(t.root_row(), &[false, true]);
    }

    #[test]
    fn worked_example() {
        assert!(eval("a U{1/2} b", "c b a a b b ; c", ABC));
        assert!(!eval("a U{3/4} b", "c b a a b b ; c", ABC));
        let t = sat_table(
            &sigma(ABC),
            &word("c b a a b b ; c"),
            &parse_open("a U{1/2} b").unwrap(),
        )
        .unwrap();
        assert!(t.root_row()[0]);
    }

    #[test]
    fn truth_and_zero_frequency() {
        assert!(eval("true", "x ; x", &["x"]));
        assert!(eval("a U{0/1} b", "a a ; b", &["a", "b"]));
        assert!(!eval("a U{0/1} b", "; a", &["a", "b"]));
    }

    #[test]
    fn alphabet_mismatch() {
        let err = models(&sigma(&["a"]), &word("a ; b"), &Formula::atom("a")).unwrap_err();
        assert_eq!(err, EvalError::WordLetter(Letter::new("b")));
        let err = models(&sigma(&["a"]), &word("; a"), &Formula::atom("b")).unwrap_err();
        assert_eq!(err, EvalError::FormulaLetter(Letter::new("b")));
    }

    fn query<'a>(
        start: usize,
        loop_start: usize,
        phi: &'a [bool],
        psi: &'a [bool],
        r: Frequency,
    ) -> FreqWitnessQuery<'a> {
        FreqWitnessQuery {
            start,
            loop_start,
            phi_row: phi,
            psi_row: psi,
            freq: r,
        }
    }

    #[test]
    fn decide_examples() {
        // (ab)^ω, φ = a, ψ never
        let a = [true, false];
        let never = [false, false];
        assert!(!freq_until_decide(&query(
            0,
            0,
            &a,
            &never,
            Frequency::half()
        )));
        // a^ω, ψ = a: j = 0
        let always = [true];
        for r in [Frequency::zero(), Frequency::half(), Frequency::one()] {
            assert_eq!(
                min_witness(&query(0, 0, &[false], &always, r)),
                Some(Witness { j: 0, count: 0 })
            );
        }
        // (ab)^ω, φ = a, ψ = b, r = 1/2: j = 1
        let b = [false, true];
        assert_eq!(
            min_witness(&query(0, 0, &a, &b, Frequency::half())),
            Some(Witness { j: 1, count: 1 })
        );
        // (abb)^ω, φ = ψ = a, r = 1/2: only j = 0
        let a3 = [true, false, false];
        assert_eq!(
            min_witness(&query(0, 0, &a3, &a3, Frequency::half())),
            Some(Witness { j: 0, count: 0 })
        );
    }

    #[test]
    fn witness_found_in_later_loop() {
        // prefix b b b, loop (a a c); ψ = c, φ = a, r = 1/2.
        // j=5: count 2 < 2.5; j=8: count 4 >= 4.
        let phi = [false, false, false, true, true, false];
        let psi = [false, false, false, false, false, true];
        assert_eq!(
            min_witness(&query(0, 3, &phi, &psi, Frequency::half())),
            Some(Witness { j: 8, count: 4 })
        );
        let mut out = [false; 6];
        freq_until_row(3, &phi, &psi, Frequency::half(), &mut out);
        assert_eq!(out, [true; 6]);
    }

    #[test]
    fn row_sweep_matches_per_start_scan() {
        // exhaustive over short rows
        for n in 1..=5usize {
            for loop_start in 0..n {
                for bits in 0..(1u32 << (2 * n)) {
                    let phi: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
                    let psi: Vec<bool> = (0..n).map(|i| bits >> (n + i) & 1 == 1).collect();
                    for (p, q) in [(0, 1), (1, 3), (1, 2), (2, 3), (1, 1)] {
                        let r = Frequency::new(p, q).unwrap();
                        let mut out = vec![false; n];
                        freq_until_row(loop_start, &phi, &psi, r, &mut out);
                        for (s, &got) in out.iter().enumerate() {
                            let want = freq_until_decide(&query(s, loop_start, &phi, &psi, r));
                            assert_eq!(got, want, "phi={phi:?} psi={psi:?} s={s} r={r}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn frequencies_before_positions() {
        let t = sat_table(
            &sigma(ABC),
            &word("c b a a b b ; c"),
            &parse_open("a U{1/2} b").unwrap(),
        )
        .unwrap();
        let a = Formula::atom("a");
        assert_eq!(t.frequency(&a, 0, 1), Some(Rational::from_integer(0)));
        assert_eq!(t.frequency(&a, 0, 5), Some(Rational::new(2, 5)));
        let w = t.witnesses(0);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].1, Some(Witness { j: 4, count: 2 }));
    }
}
