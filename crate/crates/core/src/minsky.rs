//! Two-counter Minsky machines: operations, machines, computations, and a
//! bounded search for successful computations.
//!
//! Machine files are line oriented, with `#` starting a comment:
//!
//! ```text
//! loc l0 l1 l2
//! trans t1 l0 inc1 l1
//! trans t2 l1 dec1 l2
//! init t1
//! final t2
//! ```

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use indexmap::IndexSet;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operation {
    Inc1,
    Inc2,
    Dec1,
    Dec2,
    Zero1,
    Zero2,
}

impl Operation {
    pub const ALL: [Operation; 6] = [
        Operation::Inc1,
        Operation::Inc2,
        Operation::Dec1,
        Operation::Dec2,
        Operation::Zero1,
        Operation::Zero2,
    ];

    pub fn is_zero_test(self) -> bool {
        matches!(self, Operation::Zero1 | Operation::Zero2)
    }

    pub fn name(self) -> &'static str {
        match self {
            Operation::Inc1 => "inc1",
            Operation::Inc2 => "inc2",
            Operation::Dec1 => "dec1",
            Operation::Dec2 => "dec2",
            Operation::Zero1 => "zero1",
            Operation::Zero2 => "zero2",
        }
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Operation {
    type Err = String;

    fn from_str(s: &str) -> Result<Operation, String> {
        Operation::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| format!("unknown operation `{s}`"))
    }
}

/// Counter values `(m, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct CounterConfig {
    pub m: u64,
    pub n: u64,
}

impl CounterConfig {
    pub const fn new(m: u64, n: u64) -> CounterConfig {
        CounterConfig { m, n }
    }

    /// The successor under `op`, or `None` when `op` is blocked.
    pub fn step(self, op: Operation) -> Option<CounterConfig> {
        let CounterConfig { m, n } = self;
        match op {
            Operation::Inc1 => Some(CounterConfig::new(m + 1, n)),
            Operation::Inc2 => Some(CounterConfig::new(m, n + 1)),
            Operation::Dec1 => m.checked_sub(1).map(|m| CounterConfig::new(m, n)),
            Operation::Dec2 => n.checked_sub(1).map(|n| CounterConfig::new(m, n)),
            Operation::Zero1 => (m == 0).then_some(self),
            Operation::Zero2 => (n == 0).then_some(self),
        }
    }
}

/// The successor of `config` under `op`, or `None` when blocked.
pub fn step(config: CounterConfig, op: Operation) -> Option<CounterConfig> {
    config.step(op)
}

impl fmt::Display for CounterConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub id: String,
    pub src: String,
    pub trg: String,
    pub op: Operation,
}

impl Transition {
    pub fn new(id: &str, src: &str, op: Operation, trg: &str) -> Transition {
        Transition {
            id: id.to_string(),
            src: src.to_string(),
            trg: trg.to_string(),
            op,
        }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({},{},{})", self.id, self.src, self.op, self.trg)
    }
}

/// A breach of the machine conventions or of referential integrity.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("initial transition `{0}` is not declared")]
    MissingInit(String),
    #[error("final transition `{0}` is not declared")]
    MissingFinal(String),
    #[error("initial and final transition coincide")]
    InitIsFinal,
    #[error("initial transition is a zero test")]
    InitZeroTest,
    #[error("final transition is a zero test")]
    FinalZeroTest,
    #[error("transition `{0}` leaves the target location of the final transition")]
    LeavesFinalTarget(String),
    #[error("transition `{id}` uses undeclared location `{location}`")]
    UnknownLocation { id: String, location: String },
    #[error("transition id `{0}` is declared twice")]
    DuplicateTransition(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinskyMachine {
    pub locations: IndexSet<String>,
    pub transitions: Vec<Transition>,
    pub init: String,
    pub final_: String,
}

impl MinskyMachine {
    pub fn new(
        locations: impl IntoIterator<Item = String>,
        transitions: Vec<Transition>,
        init: &str,
        final_: &str,
    ) -> MinskyMachine {
        MinskyMachine {
            locations: locations.into_iter().collect(),
            transitions,
            init: init.to_string(),
            final_: final_.to_string(),
        }
    }

    pub fn transition(&self, id: &str) -> Option<&Transition> {
        self.transitions.iter().find(|t| t.id == id)
    }

    pub fn init_transition(&self) -> Option<&Transition> {
        self.transition(&self.init)
    }

    pub fn final_transition(&self) -> Option<&Transition> {
        self.transition(&self.final_)
    }

    /// Transitions whose operation satisfies `pred`, in declaration order.
    pub fn transitions_where(&self, pred: impl Fn(Operation) -> bool) -> Vec<&Transition> {
        self.transitions.iter().filter(|t| pred(t.op)).collect()
    }

    /// All convention breaches; empty iff the machine is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for t in &self.transitions {
            if !seen.insert(t.id.as_str()) {
                out.push(Violation::DuplicateTransition(t.id.clone()));
            }
            for loc in [&t.src, &t.trg] {
                if !self.locations.contains(loc) {
                    out.push(Violation::UnknownLocation {
                        id: t.id.clone(),
                        location: loc.clone(),
                    });
                }
            }
        }
        let init = self.init_transition();
        let fin = self.final_transition();
        if init.is_none() {
            out.push(Violation::MissingInit(self.init.clone()));
        }
        if fin.is_none() {
            out.push(Violation::MissingFinal(self.final_.clone()));
        }
        if self.init == self.final_ {
            out.push(Violation::InitIsFinal);
        }
        if init.is_some_and(|t| t.op.is_zero_test()) {
            out.push(Violation::InitZeroTest);
        }
        if let Some(fin) = fin {
            if fin.op.is_zero_test() {
                out.push(Violation::FinalZeroTest);
            }
            for t in &self.transitions {
                if t.src == fin.trg {
                    out.push(Violation::LeavesFinalTarget(t.id.clone()));
                }
            }
        }
        out
    }

    /// Replays `ids` from `(0,0)`.
    pub fn run<S: AsRef<str>>(&self, ids: &[S]) -> Result<Computation, RunError> {
        if ids.is_empty() {
            return Err(RunError::Empty);
        }
        let mut configs = vec![CounterConfig::default()];
        let mut transitions: Vec<Transition> = Vec::with_capacity(ids.len());
        for (k, id) in ids.iter().enumerate() {
            let index = k + 1;
            let id = id.as_ref();
            let t = self
                .transition(id)
                .ok_or_else(|| RunError::UnknownTransition {
                    index,
                    id: id.to_string(),
                })?;
            if index == 1 && t.id != self.init {
                return Err(RunError::NotInitial { id: t.id.clone() });
            }
            if let Some(prev) = transitions.last() {
                if prev.trg != t.src {
                    return Err(RunError::LocationMismatch {
                        index,
                        expected: prev.trg.clone(),
                        found: t.src.clone(),
                    });
                }
            }
            let before = *configs.last().unwrap();
            let after = before.step(t.op).ok_or_else(|| RunError::Blocked {
                index,
                id: t.id.clone(),
                op: t.op,
                config: before,
            })?;
            configs.push(after);
            transitions.push(t.clone());
        }
        let successful = transitions.last().is_some_and(|t| t.id == self.final_);
        Ok(Computation {
            configs,
            transitions,
            successful,
        })
    }

    /// A shortest successful computation with at most `max_steps`
    /// transitions and counters never above `max_counter`.
    ///
    /// Breadth-first over `(location, counters)`, expanding transitions in
    /// declaration order, so among shortest computations the one with the
    /// lexicographically smallest transition sequence is returned.
    pub fn find_successful_computation(
        &self,
        max_steps: usize,
        max_counter: u64,
    ) -> Option<Computation> {
        let init = self.init_transition()?;
        let first = CounterConfig::default().step(init.op)?;
        if first.m > max_counter || first.n > max_counter || max_steps == 0 {
            return None;
        }
        type State = (usize, CounterConfig);
        let loc_index = |name: &str| self.locations.get_index_of(name);
        let start: State = (loc_index(&init.trg)?, first);
        let mut parent: HashMap<State, Option<(State, usize)>> = HashMap::new();
        parent.insert(start, None);
        let mut queue = VecDeque::from([(start, 1usize)]);

        let path_to = |parent: &HashMap<State, Option<(State, usize)>>, mut s: State| {
            let mut rev = Vec::new();
            while let Some(&Some((prev, t))) = parent.get(&s) {
                rev.push(t);
                s = prev;
            }
            let mut ids = vec![self.init.clone()];
            ids.extend(
                rev.into_iter()
                    .rev()
                    .map(|t| self.transitions[t].id.clone()),
            );
            ids
        };

        while let Some((state @ (loc, config), len)) = queue.pop_front() {
            if len >= max_steps {
                continue;
            }
            for (ti, t) in self.transitions.iter().enumerate() {
                if loc_index(&t.src) != Some(loc) {
                    continue;
                }
                let Some(next) = config.step(t.op) else {
                    continue;
                };
                if next.m > max_counter || next.n > max_counter {
                    continue;
                }
                if t.id == self.final_ {
                    let mut ids = path_to(&parent, state);
                    ids.push(t.id.clone());
                    return self.run(&ids).ok();
                }
                let Some(trg) = loc_index(&t.trg) else {
                    continue;
                };
                let succ = (trg, next);
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(succ) {
                    e.insert(Some((state, ti)));
                    queue.push_back((succ, len + 1));
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("empty transition sequence")]
    Empty,
    #[error("step {index}: unknown transition `{id}`")]
    UnknownTransition { index: usize, id: String },
    #[error("step 1: `{id}` is not the initial transition")]
    NotInitial { id: String },
    #[error(
        "step {index}: transition starts at `{found}` but the previous one ended at `{expected}`"
    )]
    LocationMismatch {
        index: usize,
        expected: String,
        found: String,
    },
    #[error("step {index}: `{id}` ({op}) is blocked at {config}")]
    Blocked {
        index: usize,
        id: String,
        op: Operation,
        config: CounterConfig,
    },
}

/// `C0 -t1-> C1 -t2-> … -tk-> Ck` starting from `(0,0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Computation {
    pub configs: Vec<CounterConfig>,
    pub transitions: Vec<Transition>,
    pub successful: bool,
}

impl Computation {
    /// Number of transitions `k`.
    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn transition_ids(&self) -> Vec<&str> {
        self.transitions.iter().map(|t| t.id.as_str()).collect()
    }
}

impl fmt::Display for Computation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "C0 = {}", self.configs[0])?;
        for (i, t) in self.transitions.iter().enumerate() {
            writeln!(f, "{t} -> C{} = {}", i + 1, self.configs[i + 1])?;
        }
        write!(
            f,
            "{}",
            if self.successful {
                "successful"
            } else {
                "not successful"
            }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct MachineParseError {
    pub line: usize,
    pub message: String,
}

impl FromStr for MinskyMachine {
    type Err = MachineParseError;

    fn from_str(text: &str) -> Result<MinskyMachine, MachineParseError> {
        let mut locations = IndexSet::new();
        let mut transitions = Vec::new();
        let mut init = None;
        let mut fin = None;
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let err = |message: String| MachineParseError { line, message };
            let content = raw.split('#').next().unwrap_or("");
            let fields: Vec<&str> = content.split_whitespace().collect();
            match fields.as_slice() {
                [] => {}
                ["loc", names @ ..] => locations.extend(names.iter().map(|s| s.to_string())),
                ["trans", id, src, op, trg] => {
                    let op = op.parse().map_err(err)?;
                    transitions.push(Transition::new(id, src, op, trg));
                }
                ["trans", ..] => return Err(err("expected `trans <id> <src> <op> <trg>`".into())),
                ["init", id] => init = Some(id.to_string()),
                ["final", id] => fin = Some(id.to_string()),
                [kw, ..] => return Err(err(format!("unexpected `{kw}`"))),
            }
        }
        let eof = text.lines().count();
        let missing = |what: &str| MachineParseError {
            line: eof,
            message: format!("missing `{what}` line"),
        };
        Ok(MinskyMachine {
            locations,
            transitions,
            init: init.ok_or_else(|| missing("init"))?,
            final_: fin.ok_or_else(|| missing("final"))?,
        })
    }
}

impl fmt::Display for MinskyMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let locs: Vec<&str> = self.locations.iter().map(String::as_str).collect();
        writeln!(f, "loc {}", locs.join(" "))?;
        for t in &self.transitions {
            writeln!(f, "trans {} {} {} {}", t.id, t.src, t.op, t.trg)?;
        }
        writeln!(f, "init {}", self.init)?;
        writeln!(f, "final {}", self.final_)
    }
}

/// The six-transition machine whose successful computation is
/// `(0,0) → (1,0) → (2,0) → (2,0) → (2,1) → (1,1) → (1,2)`.
pub fn example_machine() -> MinskyMachine {
    use Operation::*;
    let steps = [Inc1, Inc1, Zero2, Inc2, Dec1, Inc2];
    let transitions = steps
        .iter()
        .enumerate()
        .map(|(i, &op)| {
            Transition::new(
                &format!("t{}", i + 1),
                &format!("l{i}"),
                op,
                &format!("l{}", i + 1),
            )
        })
        .collect();
    MinskyMachine::new((0..=6).map(|i| format!("l{i}")), transitions, "t1", "t6")
}

#[cfg(test)]
mod tests {
    use super::*;
    use Operation::*;

    #[test]
    fn step_semantics() {
        assert_eq!(
            step(CounterConfig::new(2, 0), Dec1),
            Some(CounterConfig::new(1, 0))
        );
        assert_eq!(step(CounterConfig::new(0, 3), Dec1), None);
        assert_eq!(
            step(CounterConfig::new(0, 7), Zero1),
            Some(CounterConfig::new(0, 7))
        );
        assert_eq!(step(CounterConfig::new(1, 0), Zero1), None);
        assert_eq!(
            step(CounterConfig::new(1, 0), Zero2),
            Some(CounterConfig::new(1, 0))
        );
        assert_eq!(step(CounterConfig::new(1, 0), Dec2), None);
        assert_eq!(
            step(CounterConfig::new(1, 4), Inc2),
            Some(CounterConfig::new(1, 5))
        );
    }

    #[test]
    fn example_is_valid() {
        assert!(example_machine().validate().is_empty());
    }

    #[test]
    fn convention_breaches() {
        let mut m = example_machine();
        m.transitions[0].op = Zero1;
        assert_eq!(m.validate(), vec![Violation::InitZeroTest]);

        let mut m = example_machine();
        m.transitions
            .push(Transition::new("back", "l6", Inc1, "l0"));
        assert_eq!(
            m.validate(),
            vec![Violation::LeavesFinalTarget("back".into())]
        );

        let mut m = example_machine();
        m.final_ = "t1".into();
        assert!(m.validate().contains(&Violation::InitIsFinal));

        let mut m = example_machine();
        m.transitions[2].trg = "nowhere".into();
        assert!(matches!(m.validate()[0], Violation::UnknownLocation { .. }));
    }

    #[test]
    fn run_example() {
        let m = example_machine();
        let pi = m.run(&["t1", "t2", "t3", "t4", "t5", "t6"]).unwrap();
        let expected: Vec<CounterConfig> = [(0, 0), (1, 0), (2, 0), (2, 0), (2, 1), (1, 1), (1, 2)]
            .iter()
            .map(|&(m, n)| CounterConfig::new(m, n))
            .collect();
        assert_eq!(pi.configs, expected);
        assert!(pi.successful);
    }

    #[test]
    fn run_errors() {
        let m = example_machine();
        assert_eq!(
            m.run(&["t2"]),
            Err(RunError::NotInitial { id: "t2".into() })
        );
        assert_eq!(m.run::<&str>(&[]), Err(RunError::Empty));
        assert!(matches!(
            m.run(&["t1", "t3"]),
            Err(RunError::LocationMismatch { index: 2, .. })
        ));
        let blocked = MinskyMachine::new(
            ["a", "b", "c"].map(String::from),
            vec![
                Transition::new("i", "a", Inc2, "b"),
                Transition::new("d", "b", Dec1, "c"),
            ],
            "i",
            "d",
        );
        assert!(matches!(
            blocked.run(&["i", "d"]),
            Err(RunError::Blocked { index: 2, .. })
        ));
        assert!(!m.run(&["t1", "t2"]).unwrap().successful);
    }

    #[test]
    fn search_examples() {
        let m = example_machine();
        let pi = m.find_successful_computation(10, 4).unwrap();
        assert_eq!(
            pi.transition_ids(),
            vec!["t1", "t2", "t3", "t4", "t5", "t6"]
        );
        assert_eq!(m.find_successful_computation(1, 1), None);
        assert_eq!(m.find_successful_computation(5, 4), None);
        assert_eq!(m.find_successful_computation(10, 1), None);

        let mut unreachable = example_machine();
        unreachable.transitions[4].src = "l0".into();
        assert_eq!(unreachable.find_successful_computation(20, 5), None);
    }

    #[test]
    fn search_prefers_shortest_then_declaration_order() {
        let m: MinskyMachine = "
            loc p q r
            trans init p inc1 q
            trans loop q inc2 q
            trans other q inc1 q
            trans fin q dec1 r
            init init
            final fin
        "
        .parse()
        .unwrap();
        let pi = m.find_successful_computation(5, 3).unwrap();
        assert_eq!(pi.transition_ids(), vec!["init", "fin"]);

        let m: MinskyMachine = "
            loc p q r
            trans init p inc2 q
            trans b q inc1 q
            trans a q inc1 q
            trans fin q dec1 r
            init init
            final fin
        "
        .parse()
        .unwrap();
        let pi = m.find_successful_computation(5, 3).unwrap();
        assert_eq!(pi.transition_ids(), vec!["init", "b", "fin"]);
    }

    #[test]
    fn machine_file_round_trip() {
        let m = example_machine();
        let parsed: MinskyMachine = m.to_string().parse().unwrap();
        assert_eq!(parsed, m);
    }

    #[test]
    fn machine_file_errors() {
        let err = "loc a\ntrans t a jump a\ninit t\nfinal t".parse::<MinskyMachine>();
        assert_eq!(err.unwrap_err().line, 2);
        let err = "loc a b # comment\ntrans t a inc1 b\nfinal t".parse::<MinskyMachine>();
        assert!(err.unwrap_err().message.contains("init"));
    }
}
