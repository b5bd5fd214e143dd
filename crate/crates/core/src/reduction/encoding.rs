//! Encoding computations as words, recognising the encoding shape directly,
//! and decoding words back into computations.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use thiserror::Error;

use super::{A, A_HAT, B, B_HAT, PAD, SEP0, SEP1, SEP_ZERO};
use crate::lasso::{FiniteWord, LassoWord};
use crate::logic::Letter;
use crate::minsky::{Computation, CounterConfig, MinskyMachine, Operation, RunError, Transition};

/// Positions of the parts of an encoded computation with `k` transitions.
///
/// `u_i` (for `0 ≤ i < k`) is the `a^m b^n` block in front of `t_{i+1}`;
/// `v_i` (for `1 ≤ i ≤ k`) is the `ah^m bh^n` block behind `t_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub separators: Vec<usize>,
    pub transitions: Vec<usize>,
    pub white: Vec<Range<usize>>,
    pub gray: Vec<Range<usize>>,
}

impl Layout {
    /// Number of transitions.
    pub fn k(&self) -> usize {
        self.transitions.len()
    }

    pub fn u(&self, i: usize) -> Range<usize> {
        self.white[i].clone()
    }

    pub fn v(&self, i: usize) -> Range<usize> {
        self.gray[i - 1].clone()
    }

    /// `u_{i-1} t_i v_i`, for `1 ≤ i ≤ k`.
    pub fn x(&self, i: usize) -> Range<usize> {
        self.u(i - 1).start..self.v(i).end
    }

    /// `t_i v_i σ_i u_i`, for `1 ≤ i < k`.
    pub fn y(&self, i: usize) -> Range<usize> {
        self.transitions[i - 1]..self.u(i).end
    }

    /// Length of the prefix before the `#` tail.
    pub fn len(&self) -> usize {
        self.separators.last().map_or(0, |s| s + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.separators.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedComputation {
    pub word: LassoWord,
    pub layout: Layout,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("computation is not successful")]
    NotSuccessful,
    #[error("computation does not replay on the machine: {0}")]
    Invalid(#[from] RunError),
    #[error("computation disagrees with its replay on the machine")]
    Mismatch,
}

fn push_block(out: &mut Vec<Letter>, first: &str, m: u64, second: &str, n: u64) -> Range<usize> {
    let start = out.len();
    out.extend(std::iter::repeat_with(|| Letter::new(first)).take(m as usize));
    out.extend(std::iter::repeat_with(|| Letter::new(second)).take(n as usize));
    start..out.len()
}

/// The word of a successful computation, with every carried block equal to
/// the configuration reached before it.
pub fn encode(
    pi: &Computation,
    machine: &MinskyMachine,
) -> Result<EncodedComputation, EncodeError> {
    let replay = machine.run(&pi.transition_ids())?;
    if replay != *pi {
        return Err(EncodeError::Mismatch);
    }
    if !pi.successful {
        return Err(EncodeError::NotSuccessful);
    }
    let mut out = vec![Letter::new(SEP0)];
    let mut layout = Layout {
        separators: vec![0],
        transitions: Vec::new(),
        white: Vec::new(),
        gray: Vec::new(),
    };
    let mut counted = 0;
    for (i, t) in pi.transitions.iter().enumerate() {
        let before = pi.configs[i];
        let after = pi.configs[i + 1];
        layout
            .white
            .push(push_block(&mut out, A, before.m, B, before.n));
        layout.transitions.push(out.len());
        out.push(Letter::new(&t.id));
        layout
            .gray
            .push(push_block(&mut out, A_HAT, after.m, B_HAT, after.n));
        layout.separators.push(out.len());
        let sep = if t.op.is_zero_test() {
            SEP_ZERO
        } else {
            counted += 1;
            [SEP0, SEP1][counted % 2]
        };
        out.push(Letter::new(sep));
    }
    let word = LassoWord::new(
        FiniteWord::new(out),
        FiniteWord::new(vec![Letter::new(PAD)]),
    )
    .expect("loop is nonempty");
    Ok(EncodedComputation { word, layout })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sep {
    Bit(usize),
    Zero,
}

/// A word of the block shape, split into its parts.
struct Scan {
    layout: Layout,
    seps: Vec<Sep>,
    transitions: Vec<usize>,
    white: Vec<CounterConfig>,
    gray: Vec<CounterConfig>,
}

fn scan(w: &LassoWord, machine: &MinskyMachine) -> Option<Scan> {
    if w.cycle().letters().iter().any(|a| a.as_str() != PAD) {
        return None;
    }
    let ids: HashMap<&str, usize> = machine
        .transitions
        .iter()
        .enumerate()
        .map(|(i, t)| (t.id.as_str(), i))
        .collect();
    let mut tokens: Vec<&str> = w.prefix().letters().iter().map(Letter::as_str).collect();
    while tokens.last() == Some(&PAD) {
        tokens.pop();
    }
    let sep_at = |pos: usize| match tokens.get(pos).copied() {
        Some(SEP0) => Some(Sep::Bit(0)),
        Some(SEP1) => Some(Sep::Bit(1)),
        Some(SEP_ZERO) => Some(Sep::Zero),
        _ => None,
    };
    let run = |pos: &mut usize, letter: &str| {
        let start = *pos;
        while tokens.get(*pos) == Some(&letter) {
            *pos += 1;
        }
        (*pos - start) as u64
    };

    let mut s = Scan {
        layout: Layout {
            separators: vec![0],
            transitions: Vec::new(),
            white: Vec::new(),
            gray: Vec::new(),
        },
        seps: vec![sep_at(0)?],
        transitions: Vec::new(),
        white: Vec::new(),
        gray: Vec::new(),
    };
    let mut pos = 1;
    while pos < tokens.len() {
        let start = pos;
        let m = run(&mut pos, A);
        let n = run(&mut pos, B);
        s.layout.white.push(start..pos);
        s.white.push(CounterConfig::new(m, n));

        let t = *ids.get(tokens.get(pos)?)?;
        s.layout.transitions.push(pos);
        s.transitions.push(t);
        pos += 1;

        let start = pos;
        let m = run(&mut pos, A_HAT);
        let n = run(&mut pos, B_HAT);
        s.layout.gray.push(start..pos);
        s.gray.push(CounterConfig::new(m, n));

        s.seps.push(sep_at(pos)?);
        s.layout.separators.push(pos);
        pos += 1;
    }
    (!s.transitions.is_empty()).then_some(s)
}

/// Checks the conditions on a scanned word other than its block shape.
fn properties_hold(s: &Scan, machine: &MinskyMachine) -> bool {
    let ts: Vec<&Transition> = s
        .transitions
        .iter()
        .map(|&i| &machine.transitions[i])
        .collect();
    let k = ts.len();
    // P1
    if s.white[0] != CounterConfig::default()
        || ts[0].id != machine.init
        || ts[k - 1].id != machine.final_
    {
        return false;
    }
    // P2
    if ts.windows(2).any(|p| p[0].trg != p[1].src) {
        return false;
    }
    // P3, P4
    for (t, c) in ts.iter().zip(&s.gray) {
        match t.op {
            Operation::Zero1 if c.m != 0 => return false,
            Operation::Zero2 if c.n != 0 => return false,
            _ => {}
        }
    }
    // P5
    if s.seps[0] != Sep::Bit(0) {
        return false;
    }
    let mut counted = 0;
    for (t, &sep) in ts.iter().zip(&s.seps[1..]) {
        let expected = if t.op.is_zero_test() {
            Sep::Zero
        } else {
            counted += 1;
            Sep::Bit(counted % 2)
        };
        if sep != expected {
            return false;
        }
    }
    true
}

/// Membership in the set of words of the encoding shape, checked by a
/// direct scan. Carried blocks are not compared with the blocks before them.
pub fn in_lsymb(w: &LassoWord, machine: &MinskyMachine) -> bool {
    scan(w, machine).is_some_and(|s| properties_hold(&s, machine))
}

/// The first place where a word of the encoding shape stops describing a
/// computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeViolation {
    /// `u_i` does not repeat `v_i`.
    Carryover {
        i: usize,
        expected: CounterConfig,
        actual: CounterConfig,
    },
    /// `v_i` is not the result of applying `op(t_i)` to `u_{i-1}`; `expected`
    /// is `None` when the operation is blocked.
    Update {
        i: usize,
        op: Operation,
        from: CounterConfig,
        expected: Option<CounterConfig>,
        actual: CounterConfig,
    },
}

impl DecodeViolation {
    pub fn index(&self) -> usize {
        match self {
            DecodeViolation::Carryover { i, .. } | DecodeViolation::Update { i, .. } => *i,
        }
    }

    pub fn is_carryover(&self) -> bool {
        matches!(self, DecodeViolation::Carryover { .. })
    }
}

impl fmt::Display for DecodeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeViolation::Carryover {
                i,
                expected,
                actual,
            } => write!(
                f,
                "kind=carryover i={i} expected={expected} actual={actual}"
            ),
            DecodeViolation::Update {
                i,
                op,
                from,
                expected,
                actual,
            } => {
                write!(f, "kind=update i={i} op={op} from={from} expected=")?;
                match expected {
                    Some(c) => write!(f, "{c}")?,
                    None => f.write_str("blocked")?,
                }
                write!(f, " actual={actual}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("word is not of the encoding shape")]
    NotInLsymb,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub layout: Layout,
    pub transitions: Vec<Transition>,
    /// Counters written in `u_0 … u_{k-1}`.
    pub white: Vec<CounterConfig>,
    /// Counters written in `v_1 … v_k`.
    pub gray: Vec<CounterConfig>,
    pub verdict: Result<Computation, DecodeViolation>,
}

impl Decoded {
    pub fn computation(&self) -> Option<&Computation> {
        self.verdict.as_ref().ok()
    }
}

/// Reads the computation a word of the encoding shape describes, or the
/// first violated step in left-to-right order.
pub fn decode(w: &LassoWord, machine: &MinskyMachine) -> Result<Decoded, DecodeError> {
    let s = scan(w, machine)
        .filter(|s| properties_hold(s, machine))
        .ok_or(DecodeError::NotInLsymb)?;
    let transitions: Vec<Transition> = s
        .transitions
        .iter()
        .map(|&i| machine.transitions[i].clone())
        .collect();
    let verdict = check_steps(&transitions, &s.white, &s.gray).map(|()| {
        let mut configs = vec![CounterConfig::default()];
        configs.extend(&s.gray);
        Computation {
            configs,
            transitions: transitions.clone(),
            successful: true,
        }
    });
    Ok(Decoded {
        layout: s.layout,
        transitions,
        white: s.white,
        gray: s.gray,
        verdict,
    })
}

fn check_steps(
    transitions: &[Transition],
    white: &[CounterConfig],
    gray: &[CounterConfig],
) -> Result<(), DecodeViolation> {
    for (k, t) in transitions.iter().enumerate() {
        let i = k + 1;
        if k > 0 && white[k] != gray[k - 1] {
            return Err(DecodeViolation::Carryover {
                i: k,
                expected: gray[k - 1],
                actual: white[k],
            });
        }
        let expected = white[k].step(t.op);
        if expected != Some(gray[k]) {
            return Err(DecodeViolation::Update {
                i,
                op: t.op,
                from: white[k],
                expected,
                actual: gray[k],
            });
        }
    }
    Ok(())
}
