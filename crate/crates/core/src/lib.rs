//! Frequency LTL over ultimately periodic words, and the encoding of
//! two-counter machine computations into it.

pub mod brute;
mod dag;
pub mod eval;
pub mod gen;
pub mod lasso;
pub mod logic;
pub mod minsky;
pub mod mutate;
pub mod parser;
pub mod reduction;
pub mod selftest;

pub use brute::brute_force_models;
pub use eval::{
    freq_until_decide, min_witness, models, sat_table, EvalError, Evaluator, SatTable, Witness,
};
pub use lasso::{FiniteWord, LassoWord, WordError};
pub use logic::{desugar, subformulas, Alphabet, Formula, Frequency, Letter, Rational};
pub use minsky::{step, Computation, CounterConfig, MinskyMachine, Operation, Transition};
pub use parser::{parse, parse_open, render, ParseError};
pub use reduction::{
    build_alphabet, decode, encode, in_lsymb, phi_count, phi_symb, reduce, PartitionTable,
    ReductionAlphabet,
};
