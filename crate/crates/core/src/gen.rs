//! Generators for property tests and self-test campaigns: machines,
//! formulas, lasso words, and words of the encoding shape.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::lasso::{FiniteWord, LassoWord};
use crate::logic::{Formula, Frequency, Letter};
use crate::minsky::{CounterConfig, MinskyMachine, Operation, Transition};
use crate::reduction::{A, A_HAT, B, B_HAT, PAD, SEP0, SEP1, SEP_ZERO};

/// Frequencies used by formula enumeration.
pub fn standard_frequencies() -> Vec<Frequency> {
    [(0, 1), (1, 3), (1, 2), (2, 3), (1, 1)]
        .into_iter()
        .map(|(p, q)| Frequency::new(p, q).expect("in range"))
        .collect()
}

/// All core formulas (atoms, `X`, `!`, `&`, `U{r}`) of depth at most `depth`.
pub fn enumerate_core_formulas(
    letters: &[Letter],
    depth: usize,
    freqs: &[Frequency],
) -> Vec<Formula> {
    if depth == 0 {
        return Vec::new();
    }
    let smaller = enumerate_core_formulas(letters, depth - 1, freqs);
    let mut out: Vec<Formula> = letters.iter().cloned().map(Formula::Atom).collect();
    for f in &smaller {
        out.push(Formula::not(f.clone()));
        out.push(Formula::next(f.clone()));
    }
    for l in &smaller {
        for r in &smaller {
            out.push(Formula::and(l.clone(), r.clone()));
            for &q in freqs {
                out.push(Formula::freq_until(q, l.clone(), r.clone()));
            }
        }
    }
    out
}

fn random_frequency<R: Rng>(rng: &mut R) -> Frequency {
    let den = rng.gen_range(1..=6);
    Frequency::new(rng.gen_range(0..=den), den).expect("in range")
}

/// A random core formula of depth at most `depth`.
pub fn random_core_formula<R: Rng>(rng: &mut R, letters: &[Letter], depth: usize) -> Formula {
    if depth <= 1 || rng.gen_bool(0.25) {
        return Formula::Atom(letters.choose(rng).expect("nonempty").clone());
    }
    let sub = |rng: &mut R| random_core_formula(rng, letters, depth - 1);
    match rng.gen_range(0..4) {
        0 => Formula::not(sub(rng)),
        1 => Formula::next(sub(rng)),
        2 => Formula::and(sub(rng), sub(rng)),
        _ => {
            let q = random_frequency(rng);
            Formula::freq_until(q, sub(rng), sub(rng))
        }
    }
}

/// A random formula that may use every constructor, sugar included.
pub fn random_formula<R: Rng>(rng: &mut R, letters: &[Letter], depth: usize) -> Formula {
    if depth <= 1 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..8) {
            0 => Formula::True,
            1 => Formula::False,
            2 => Formula::letter_set(letters.iter().filter(|_| rng.gen_bool(0.5)).cloned()),
            _ => Formula::Atom(letters.choose(rng).expect("nonempty").clone()),
        };
    }
    let sub = |rng: &mut R| random_formula(rng, letters, depth - 1);
    match rng.gen_range(0..10) {
        0 => Formula::not(sub(rng)),
        1 => Formula::next(sub(rng)),
        2 => Formula::and(sub(rng), sub(rng)),
        3 => Formula::or(sub(rng), sub(rng)),
        4 => Formula::implies(sub(rng), sub(rng)),
        5 => Formula::eventually(sub(rng)),
        6 => Formula::always(sub(rng)),
        7 => Formula::until(sub(rng), sub(rng)),
        _ => {
            let q = random_frequency(rng);
            Formula::freq_until(q, sub(rng), sub(rng))
        }
    }
}

fn all_words(letters: &[Letter], len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |a| {
                    let mut w = w.clone();
                    w.push(a.clone());
                    w
                })
            })
            .collect();
    }
    out
}

/// Every finite word over `letters` of length at most `max_len`, shortest first.
pub fn enumerate_words(letters: &[Letter], max_len: usize) -> Vec<Vec<Letter>> {
    (0..=max_len).flat_map(|n| all_words(letters, n)).collect()
}

/// Every lasso representation `(u, v)` with `|v| ≥ 1` and `|u| + |v| ≤ max_span`.
pub fn enumerate_lassos(letters: &[Letter], max_span: usize) -> Vec<LassoWord> {
    let mut out = Vec::new();
    for span in 1..=max_span {
        for u_len in 0..span {
            for u in all_words(letters, u_len) {
                for v in all_words(letters, span - u_len) {
                    out.push(
                        LassoWord::new(FiniteWord::new(u.clone()), FiniteWord::new(v))
                            .expect("nonempty loop"),
                    );
                }
            }
        }
    }
    out
}

pub fn random_finite_word<R: Rng>(rng: &mut R, letters: &[Letter], len: usize) -> Vec<Letter> {
    (0..len)
        .map(|_| letters.choose(rng).expect("nonempty").clone())
        .collect()
}

pub fn random_lasso<R: Rng>(
    rng: &mut R,
    letters: &[Letter],
    max_prefix: usize,
    max_loop: usize,
) -> LassoWord {
    let u = rng.gen_range(0..=max_prefix);
    let v = rng.gen_range(1..=max_loop);
    LassoWord::new(
        FiniteWord::new(random_finite_word(rng, letters, u)),
        FiniteWord::new(random_finite_word(rng, letters, v)),
    )
    .expect("nonempty loop")
}

/// A random machine obeying the conventions: `t1` is initial and
/// increments or decrements, the last transition is final, is not a zero
/// test, and enters a location no transition leaves.
pub fn random_machine<R: Rng>(rng: &mut R, max_transitions: usize) -> MinskyMachine {
    let n = rng.gen_range(2..=max_transitions.max(2));
    let inner = rng.gen_range(1..=n.min(4));
    let mut locations: Vec<String> = (0..inner).map(|i| format!("l{i}")).collect();
    locations.push("end".to_string());
    let counting = [
        Operation::Inc1,
        Operation::Inc2,
        Operation::Dec1,
        Operation::Dec2,
    ];
    let inc = [Operation::Inc1, Operation::Inc2];
    let pick_loc = |rng: &mut R| locations[rng.gen_range(0..inner)].clone();
    let mut transitions = Vec::with_capacity(n);
    for i in 1..=n {
        let id = format!("t{i}");
        let (op, trg) = if i == 1 {
            (*inc.choose(rng).expect("nonempty"), pick_loc(rng))
        } else if i == n {
            (*counting.choose(rng).expect("nonempty"), "end".to_string())
        } else {
            (
                *Operation::ALL.choose(rng).expect("nonempty"),
                pick_loc(rng),
            )
        };
        let src = pick_loc(rng);
        transitions.push(Transition::new(&id, &src, op, &trg));
    }
    let fin = format!("t{n}");
    MinskyMachine::new(locations, transitions, "t1", &fin)
}

/// Calls `f` on every word of the encoding shape for `machine` whose prefix
/// (up to the `#` tail) has at most `max_prefix` letters. Carried blocks
/// range freely, so most of these words do not describe computations.
pub fn for_each_lsymb_word<F: FnMut(&LassoWord)>(
    machine: &MinskyMachine,
    max_prefix: usize,
    mut f: F,
) {
    let mut prefix = vec![Letter::new(SEP0)];
    extend_lsymb(machine, max_prefix, &mut prefix, None, 0, &mut f);
}

fn push_block(out: &mut Vec<Letter>, first: &str, second: &str, c: CounterConfig) {
    out.extend((0..c.m).map(|_| Letter::new(first)));
    out.extend((0..c.n).map(|_| Letter::new(second)));
}

/// Pairs `(m, n)` with `m + n ≤ budget`.
fn configs(budget: usize) -> impl Iterator<Item = CounterConfig> {
    (0..=budget as u64)
        .flat_map(move |m| (0..=budget as u64 - m).map(move |n| CounterConfig::new(m, n)))
}

fn extend_lsymb<F: FnMut(&LassoWord)>(
    machine: &MinskyMachine,
    max_prefix: usize,
    prefix: &mut Vec<Letter>,
    previous: Option<&Transition>,
    counted: usize,
    f: &mut F,
) {
    // a block is at least a transition and a separator
    let Some(budget) = max_prefix.checked_sub(prefix.len() + 2) else {
        return;
    };
    let candidates: Vec<&Transition> = match previous {
        None => machine.init_transition().into_iter().collect(),
        Some(p) => machine
            .transitions
            .iter()
            .filter(|t| t.src == p.trg)
            .collect(),
    };
    let whites: Vec<CounterConfig> = if previous.is_none() {
        vec![CounterConfig::default()]
    } else {
        configs(budget).collect()
    };
    let base = prefix.len();
    for white in whites {
        let rest = budget - (white.m + white.n) as usize;
        for t in &candidates {
            let (counted, sep) = if t.op.is_zero_test() {
                (counted, SEP_ZERO)
            } else {
                (counted + 1, [SEP0, SEP1][(counted + 1) % 2])
            };
            for gray in configs(rest) {
                if (t.op == Operation::Zero1 && gray.m != 0)
                    || (t.op == Operation::Zero2 && gray.n != 0)
                {
                    continue;
                }
                prefix.truncate(base);
                push_block(prefix, A, B, white);
                prefix.push(Letter::new(&t.id));
                push_block(prefix, A_HAT, B_HAT, gray);
                prefix.push(Letter::new(sep));
                if t.id == machine.final_ {
                    let w = LassoWord::new(
                        FiniteWord::new(prefix.clone()),
                        FiniteWord::new(vec![Letter::new(PAD)]),
                    )
                    .expect("nonempty loop");
                    f(&w);
                } else {
                    extend_lsymb(machine, max_prefix, prefix, Some(t), counted, f);
                }
            }
        }
    }
    prefix.truncate(base);
}

/// A word with a `#` loop whose prefix is built from random blocks of the
/// encoding shape, then possibly disturbed; it lands on both sides of the
/// shape boundary with useful frequency.
pub fn random_near_lsymb<R: Rng>(
    rng: &mut R,
    machine: &MinskyMachine,
    sigma: &[Letter],
    max_prefix: usize,
) -> LassoWord {
    let mut prefix = vec![Letter::new(SEP0)];
    let mut loc = machine.init_transition().map(|t| t.src.clone());
    let mut counted = 0usize;
    while prefix.len() < max_prefix {
        let first = prefix.len() == 1;
        let options: Vec<&Transition> = machine
            .transitions
            .iter()
            .filter(|t| {
                if first {
                    t.id == machine.init
                } else {
                    Some(&t.src) == loc.as_ref()
                }
            })
            .collect();
        let Some(t) = options.choose(rng) else { break };
        let small = |rng: &mut R| rng.gen_range(0..=2u64);
        if !first {
            push_block(
                &mut prefix,
                A,
                B,
                CounterConfig::new(small(rng), small(rng)),
            );
        }
        prefix.push(Letter::new(&t.id));
        let mut gray = CounterConfig::new(small(rng), small(rng));
        if t.op == Operation::Zero1 {
            gray.m = 0;
        }
        if t.op == Operation::Zero2 {
            gray.n = 0;
        }
        push_block(&mut prefix, A_HAT, B_HAT, gray);
        let sep = if t.op.is_zero_test() {
            SEP_ZERO
        } else {
            counted += 1;
            [SEP0, SEP1][counted % 2]
        };
        prefix.push(Letter::new(sep));
        loc = Some(t.trg.clone());
        if t.id == machine.final_ {
            break;
        }
    }
    let disturb = rng.gen_range(0..3);
    for _ in 0..disturb {
        let pos = rng.gen_range(0..=prefix.len());
        let letter = sigma.choose(rng).expect("nonempty").clone();
        match rng.gen_range(0..3) {
            0 if pos < prefix.len() => prefix[pos] = letter,
            1 => prefix.insert(pos, letter),
            _ if pos < prefix.len() => {
                prefix.remove(pos);
            }
            _ => {}
        }
    }
    prefix.truncate(max_prefix);
    LassoWord::new(
        FiniteWord::new(prefix),
        FiniteWord::new(vec![Letter::new(PAD)]),
    )
    .expect("nonempty loop")
}

/// A uniformly random prefix over `sigma` followed by `#^ω`.
pub fn random_pad_word<R: Rng>(rng: &mut R, sigma: &[Letter], max_prefix: usize) -> LassoWord {
    let len = rng.gen_range(0..=max_prefix);
    LassoWord::new(
        FiniteWord::new(random_finite_word(rng, sigma, len)),
        FiniteWord::new(vec![Letter::new(PAD)]),
    )
    .expect("nonempty loop")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::in_lsymb;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ab() -> Vec<Letter> {
        vec![Letter::new("a"), Letter::new("b")]
    }

    #[test]
    fn formula_counts() {
        let freqs = standard_frequencies();
        assert_eq!(enumerate_core_formulas(&ab(), 1, &freqs).len(), 2);
        assert_eq!(enumerate_core_formulas(&ab(), 2, &freqs).len(), 30);
        let all = enumerate_core_formulas(&ab(), 3, &freqs);
        assert_eq!(all.len(), 5462);
        assert!(all.iter().all(|f| f.is_core() && f.depth() <= 3));
    }

    #[test]
    fn lasso_counts() {
        // sum over spans n of n·2^n
        assert_eq!(enumerate_lassos(&ab(), 5).len(), 258);
        assert_eq!(enumerate_words(&ab(), 3).len(), 15);
    }

    #[test]
    fn random_machines_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let m = random_machine(&mut rng, 6);
            assert!(m.validate().is_empty(), "{m}");
            assert!(m.transitions.len() <= 6);
        }
    }

    #[test]
    fn lsymb_enumeration_is_sound_and_complete_for_one_step_words() {
        let m: MinskyMachine = "loc p q r\ntrans i p inc1 q\ntrans f q dec1 r\ninit i\nfinal f"
            .parse()
            .unwrap();
        let mut seen = Vec::new();
        for_each_lsymb_word(&m, 8, |w| seen.push(w.clone()));
        assert!(seen.iter().all(|w| in_lsymb(w, &m)));
        let sigma: Vec<Letter> = ["a", "b", "ah", "bh", "i", "f", "$0", "$1", "$z"]
            .iter()
            .map(Letter::new)
            .collect();
        // shape words must start with `$0 i`
        let mut expected = 0;
        for len in 0..=6 {
            for rest in all_words(&sigma, len) {
                let mut u = vec![Letter::new("$0"), Letter::new("i")];
                u.extend(rest);
                let w = LassoWord::new(FiniteWord::new(u), FiniteWord::new(vec![Letter::new("#")]))
                    .unwrap();
                expected += in_lsymb(&w, &m) as usize;
            }
        }
        assert_eq!(seen.len(), expected);
    }
}
