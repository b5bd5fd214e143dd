//! Reduction from the existence of a successful Minsky computation to fLTL
//! satisfiability.
//!
//! A computation `(0,0) -t1-> C1 -t2-> … -tk-> Ck` is written as the word
//!
//! ```text
//! σ0 C0 t1 Ĉ1 σ1 C1' t2 Ĉ2 σ2 … C'k-1 tk Ĉk σk #^ω
//! ```
//!
//! where `C = a^m b^n`, `Ĉ = ah^m bh^n`, and the separators `σi ∈ {$0,$1,$z}`
//! mark zero tests with `$z` and otherwise alternate `$1 $0 $1 …` after the
//! leading `$0`. [`phi_symb`] pins down this shape and [`phi_count`] forces
//! consecutive blocks to agree with the counter operations.

mod balance;
mod encoding;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::logic::{Alphabet, Formula, Frequency, Letter};
use crate::minsky::{MinskyMachine, Operation, Violation};
use crate::parser::is_letter_token;

pub use balance::{balance_check_a, balance_check_b, BalanceReport};
pub use encoding::{
    decode, encode, in_lsymb, DecodeError, DecodeViolation, Decoded, EncodeError,
    EncodedComputation, Layout,
};

pub const A: &str = "a";
pub const B: &str = "b";
pub const A_HAT: &str = "ah";
pub const B_HAT: &str = "bh";
pub const SEP0: &str = "$0";
pub const SEP1: &str = "$1";
pub const SEP_ZERO: &str = "$z";
pub const PAD: &str = "#";

/// Tokens that transition ids may not use.
pub const RESERVED: [&str; 8] = [A, B, A_HAT, B_HAT, SEP0, SEP1, SEP_ZERO, PAD];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("invalid machine: {}", list(.0))]
    InvalidMachine(Vec<Violation>),
    #[error("transition id `{0}` collides with a reserved letter")]
    Collision(String),
    #[error("transition id `{0}` is not usable as a letter")]
    BadId(String),
}

fn list(vs: &[Violation]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// `{a, b, ah, bh} ∪ T ∪ {$0, $1, $z} ∪ {#}`.
#[derive(Debug, Clone)]
pub struct ReductionAlphabet {
    alphabet: Alphabet,
    transitions: Vec<Letter>,
}

impl ReductionAlphabet {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Transition letters in declaration order.
    pub fn transitions(&self) -> &[Letter] {
        &self.transitions
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    /// `Σ ∖ {#}` in alphabet order.
    pub fn without_pad(&self) -> Vec<Letter> {
        self.alphabet
            .letters()
            .filter(|a| a.as_str() != PAD)
            .cloned()
            .collect()
    }
}

pub fn build_alphabet(machine: &MinskyMachine) -> Result<ReductionAlphabet, ReductionError> {
    let violations = machine.validate();
    if !violations.is_empty() {
        return Err(ReductionError::InvalidMachine(violations));
    }
    for t in &machine.transitions {
        if RESERVED.contains(&t.id.as_str()) {
            return Err(ReductionError::Collision(t.id.clone()));
        }
        if !is_letter_token(&t.id) {
            return Err(ReductionError::BadId(t.id.clone()));
        }
    }
    let transitions: Vec<Letter> = machine
        .transitions
        .iter()
        .map(|t| Letter::new(&t.id))
        .collect();
    let letters = [A, B, A_HAT, B_HAT]
        .into_iter()
        .map(Letter::new)
        .chain(transitions.iter().cloned())
        .chain([SEP0, SEP1, SEP_ZERO, PAD].into_iter().map(Letter::new));
    let alphabet = Alphabet::new(letters).expect("ids are distinct and not reserved");
    Ok(ReductionAlphabet {
        alphabet,
        transitions,
    })
}

/// Letter types indexing the two partitions of `Σ ∖ {#}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    A,
    AHat,
    B,
    BHat,
    Bit0,
    Bit1,
    Zero,
    ZeroBar,
}

impl Kind {
    pub const TYPES_A: [Kind; 8] = [
        Kind::A,
        Kind::AHat,
        Kind::B,
        Kind::BHat,
        Kind::Bit0,
        Kind::Bit1,
        Kind::Zero,
        Kind::ZeroBar,
    ];
    pub const TYPES_B: [Kind; 6] = [
        Kind::A,
        Kind::AHat,
        Kind::B,
        Kind::BHat,
        Kind::Bit0,
        Kind::Bit1,
    ];

    pub fn complement(self) -> Kind {
        match self {
            Kind::A => Kind::AHat,
            Kind::AHat => Kind::A,
            Kind::B => Kind::BHat,
            Kind::BHat => Kind::B,
            Kind::Bit0 => Kind::Bit1,
            Kind::Bit1 => Kind::Bit0,
            Kind::Zero => Kind::ZeroBar,
            Kind::ZeroBar => Kind::Zero,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::A => "a",
            Kind::AHat => "ah",
            Kind::B => "b",
            Kind::BHat => "bh",
            Kind::Bit0 => "0",
            Kind::Bit1 => "1",
            Kind::Zero => "zero",
            Kind::ZeroBar => "zerobar",
        })
    }
}

/// The partitions `(A_τ)` (counter updates) and `(B_τ)` (carryovers).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTable {
    a: [BTreeSet<Letter>; 8],
    b: [BTreeSet<Letter>; 6],
}

fn letters<'a>(names: impl IntoIterator<Item = &'a str>) -> BTreeSet<Letter> {
    names.into_iter().map(Letter::new).collect()
}

impl PartitionTable {
    pub fn new(machine: &MinskyMachine) -> PartitionTable {
        let ids = |op: Operation| -> Vec<&str> {
            machine
                .transitions
                .iter()
                .filter(|t| t.op == op)
                .map(|t| t.id.as_str())
                .collect()
        };
        let with = |base: &'static str, op: Operation| letters([base].into_iter().chain(ids(op)));
        let zero = letters(
            ids(Operation::Zero1)
                .into_iter()
                .chain(ids(Operation::Zero2)),
        );
        let all_t = letters(machine.transitions.iter().map(|t| t.id.as_str()));
        PartitionTable {
            a: [
                with(A, Operation::Inc1),
                with(A_HAT, Operation::Dec1),
                with(B, Operation::Inc2),
                with(B_HAT, Operation::Dec2),
                letters([SEP0]),
                letters([SEP1]),
                zero,
                letters([SEP_ZERO]),
            ],
            b: [
                letters([A]),
                letters([A_HAT]),
                letters([B]),
                letters([B_HAT]),
                all_t,
                letters([SEP0, SEP1, SEP_ZERO]),
            ],
        }
    }

    pub fn a_class(&self, kind: Kind) -> &BTreeSet<Letter> {
        &self.a[kind as usize]
    }

    /// `None` for `zero` and `zerobar`, which only index the A-partition.
    pub fn b_class(&self, kind: Kind) -> Option<&BTreeSet<Letter>> {
        self.b.get(kind as usize)
    }

    /// `{a,ah} × {b,bh} × {0,1} × {zero,zerobar}`.
    pub fn tuples_a() -> Vec<[Kind; 4]> {
        let mut out = Vec::with_capacity(16);
        for x in [Kind::A, Kind::AHat] {
            for y in [Kind::B, Kind::BHat] {
                for z in [Kind::Bit0, Kind::Bit1] {
                    for v in [Kind::Zero, Kind::ZeroBar] {
                        out.push([x, y, z, v]);
                    }
                }
            }
        }
        out
    }

    /// `{a,ah} × {b,bh} × {0,1}`.
    pub fn tuples_b() -> Vec<[Kind; 3]> {
        PartitionTable::tuples_a()
            .into_iter()
            .filter(|t| t[3] == Kind::Zero)
            .map(|[x, y, z, _]| [x, y, z])
            .collect()
    }

    /// Letters covered by the classes of an A-tuple.
    pub fn a_union(&self, tuple: &[Kind]) -> BTreeSet<Letter> {
        tuple
            .iter()
            .flat_map(|&k| self.a_class(k).iter().cloned())
            .collect()
    }

    /// Letters covered by the classes of a B-tuple.
    pub fn b_union(&self, tuple: &[Kind]) -> BTreeSet<Letter> {
        tuple
            .iter()
            .flat_map(|&k| self.b_class(k).into_iter().flatten().cloned())
            .collect()
    }
}

fn atom(name: &str) -> Formula {
    Formula::atom(name)
}

fn set<'a>(names: impl IntoIterator<Item = &'a str>) -> Formula {
    Formula::letter_set(names.into_iter().map(Letter::new))
}

fn dollar() -> Formula {
    set([SEP0, SEP1, SEP_ZERO])
}

fn bit_sep() -> Formula {
    set([SEP0, SEP1])
}

fn sep(beta: usize) -> Formula {
    atom([SEP0, SEP1][beta])
}

fn transitions_where(machine: &MinskyMachine, pred: impl Fn(Operation) -> bool) -> Formula {
    set(machine
        .transitions
        .iter()
        .filter(|t| pred(t.op))
        .map(|t| t.id.as_str()))
}

/// The block structure `σ0 (a* b* T ah* bh* $)+ #^ω`.
pub fn phi_form(machine: &MinskyMachine) -> Formula {
    let t = transitions_where(machine, |_| true);
    let pad = atom(PAD);
    let start = Formula::and(
        dollar(),
        Formula::next(Formula::until(
            Formula::not(pad.clone()),
            Formula::and(dollar(), Formula::next(Formula::always(pad.clone()))),
        )),
    );
    let block = Formula::next(Formula::until(
        atom(A),
        Formula::until(
            atom(B),
            Formula::and(
                t,
                Formula::next(Formula::until(
                    atom(A_HAT),
                    Formula::until(atom(B_HAT), dollar()),
                )),
            ),
        ),
    ));
    let blocks = Formula::always(Formula::implies(
        Formula::and(dollar(), Formula::not(Formula::next(pad))),
        block,
    ));
    Formula::and(start, blocks)
}

/// First transition is the initial one; the last is the final one.
pub fn phi_p1(machine: &MinskyMachine) -> Formula {
    let t = transitions_where(machine, |_| true);
    Formula::and(
        Formula::next(atom(&machine.init)),
        Formula::eventually(Formula::and(
            atom(&machine.final_),
            Formula::next(Formula::always(Formula::not(t))),
        )),
    )
}

/// Consecutive transitions are connected.
pub fn phi_p2(machine: &MinskyMachine) -> Formula {
    let t = transitions_where(machine, |_| true);
    Formula::always(Formula::all(machine.transitions.iter().map(|tr| {
        let bad = Formula::any(
            machine
                .transitions
                .iter()
                .filter(|next| tr.trg != next.src)
                .map(|next| Formula::until(Formula::not(t.clone()), atom(&next.id))),
        );
        Formula::implies(atom(&tr.id), Formula::not(Formula::next(bad)))
    })))
}

fn zero_test(machine: &MinskyMachine, op: Operation, hat: &str) -> Formula {
    Formula::always(Formula::implies(
        transitions_where(machine, |o| o == op),
        Formula::until(Formula::not(atom(hat)), dollar()),
    ))
}

/// A `zero1` transition leaves no `ah` in the block after it.
pub fn phi_p3(machine: &MinskyMachine) -> Formula {
    zero_test(machine, Operation::Zero1, A_HAT)
}

/// A `zero2` transition leaves no `bh` in the block after it.
pub fn phi_p4(machine: &MinskyMachine) -> Formula {
    zero_test(machine, Operation::Zero2, B_HAT)
}

/// The word starts with `$0`; zero tests are followed by `$z`.
pub fn phi_p5a(machine: &MinskyMachine) -> Formula {
    Formula::and(
        atom(SEP0),
        Formula::always(Formula::implies(
            transitions_where(machine, Operation::is_zero_test),
            Formula::until(Formula::not(dollar()), atom(SEP_ZERO)),
        )),
    )
}

/// Other transitions are followed by `$0` or `$1`, alternating.
///
/// The alternation conjunct looks for the next `$0`/`$1` strictly after the
/// current one; evaluated in place it would be refuted by the current
/// separator itself.
pub fn phi_p5b(machine: &MinskyMachine) -> Formula {
    let counted = Formula::always(Formula::implies(
        transitions_where(machine, |op| !op.is_zero_test()),
        Formula::until(Formula::not(dollar()), bit_sep()),
    ));
    let alternate = Formula::always(Formula::all((0..2).map(|beta| {
        Formula::implies(
            Formula::and(sep(beta), Formula::not(Formula::next(atom(PAD)))),
            Formula::next(Formula::until(Formula::not(bit_sep()), sep(1 - beta))),
        )
    })));
    Formula::and(counted, alternate)
}

/// Models are exactly the words of the encoding shape with (P1)–(P5).
pub fn phi_symb(machine: &MinskyMachine) -> Formula {
    Formula::all([
        phi_form(machine),
        phi_p1(machine),
        phi_p2(machine),
        phi_p3(machine),
        phi_p4(machine),
        phi_p5a(machine),
        phi_p5b(machine),
    ])
}

/// Holds at the last `$β` of the word.
pub fn last(beta: usize) -> Formula {
    Formula::and(
        sep(beta),
        Formula::next(Formula::always(Formula::not(sep(beta)))),
    )
}

/// Holds where the next `$0`/`$1` strictly ahead exists and is `$β`.
pub fn next_sep(beta: usize) -> Formula {
    Formula::next(Formula::until(Formula::not(bit_sep()), sep(beta)))
}

/// Balance of every A-tuple up to the last `$β`.
pub fn phi_update(machine: &MinskyMachine, beta: usize) -> Formula {
    let table = PartitionTable::new(machine);
    Formula::next(Formula::all(PartitionTable::tuples_a().iter().map(
        |tuple| {
            Formula::freq_until(
                Frequency::half(),
                Formula::letter_set(table.a_union(tuple)),
                last(beta),
            )
        },
    )))
}

/// Balance of every B-tuple up to the final transition.
pub fn phi_carry(machine: &MinskyMachine) -> Formula {
    let table = PartitionTable::new(machine);
    Formula::all(PartitionTable::tuples_b().iter().map(|tuple| {
        Formula::freq_until(
            Frequency::half(),
            Formula::letter_set(table.b_union(tuple)),
            atom(&machine.final_),
        )
    }))
}

pub fn phi_count(machine: &MinskyMachine) -> Formula {
    let t = transitions_where(machine, |_| true);
    let guarded = |beta: usize| {
        Formula::implies(
            Formula::and(dollar(), next_sep(beta)),
            phi_update(machine, beta),
        )
    };
    Formula::always(Formula::all([
        guarded(0),
        guarded(1),
        Formula::implies(
            Formula::and(t, Formula::not(atom(&machine.final_))),
            phi_carry(machine),
        ),
    ]))
}

/// `phi_symb ∧ phi_count`: satisfiable iff the machine has a successful
/// computation.
pub fn reduce(machine: &MinskyMachine) -> Formula {
    Formula::and(phi_symb(machine), phi_count(machine))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minsky::example_machine;

    #[test]
    fn alphabet_size() {
        let sigma = build_alphabet(&example_machine()).unwrap();
        assert_eq!(sigma.len(), 14);
        assert_eq!(sigma.without_pad().len(), 13);
    }

    #[test]
    fn alphabet_collisions() {
        let mut m = example_machine();
        m.transitions[3].id = "ah".into();
        assert_eq!(
            build_alphabet(&m).unwrap_err(),
            ReductionError::Collision("ah".into())
        );

        let mut m = example_machine();
        m.transitions[3].id = "G".into();
        assert_eq!(
            build_alphabet(&m).unwrap_err(),
            ReductionError::BadId("G".into())
        );

        let m = MinskyMachine::new(["l".to_string()], vec![], "t1", "t2");
        assert!(matches!(
            build_alphabet(&m),
            Err(ReductionError::InvalidMachine(_))
        ));
    }

    #[test]
    fn partitions_cover_sigma_without_pad() {
        let m = example_machine();
        let table = PartitionTable::new(&m);
        let sigma = build_alphabet(&m).unwrap();
        let all: BTreeSet<Letter> = sigma.without_pad().into_iter().collect();
        for classes in [
            Kind::TYPES_A
                .iter()
                .map(|&k| table.a_class(k))
                .collect::<Vec<_>>(),
            Kind::TYPES_B
                .iter()
                .map(|&k| table.b_class(k).unwrap())
                .collect(),
        ] {
            let total: usize = classes.iter().map(|c| c.len()).sum();
            let union: BTreeSet<Letter> = classes.iter().flat_map(|c| c.iter().cloned()).collect();
            assert_eq!(total, all.len());
            assert_eq!(union, all);
        }
        assert_eq!(PartitionTable::tuples_a().len(), 16);
        assert_eq!(PartitionTable::tuples_b().len(), 8);
        for k in Kind::TYPES_A {
            assert_eq!(k.complement().complement(), k);
            assert_ne!(k.complement(), k);
        }
    }

    #[test]
    fn p2_has_one_until_per_disconnected_pair() {
        let text = phi_p2(&example_machine()).to_string();
        assert_eq!(text.matches("->").count(), 6);
        // 36 ordered pairs, 5 of them connected
        assert_eq!(text.matches(" U ").count(), 31);
    }
}
