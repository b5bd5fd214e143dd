use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use fltl::reduction::{build_alphabet, decode, encode, in_lsymb, reduce, DecodeError};
use fltl::selftest::{run_selftest, Budget};
use fltl::{parse, render, Alphabet, Evaluator, Formula, LassoWord, Letter, MinskyMachine};

#[derive(Parser)]
#[command(
    name = "fltl",
    version,
    about = "Frequency LTL over lasso words and Minsky machine reductions"
)]
struct Cli {
    /// Report elapsed time on stderr.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a lasso word satisfies a formula.
    Eval(EvalArgs),
    /// Print the formula that is satisfiable iff the machine has a successful computation.
    Reduce {
        machine: PathBuf,
        /// Write the formula here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the word encoding a successful computation.
    Encode {
        machine: PathBuf,
        /// Transition ids of the computation.
        ids: Vec<String>,
        /// Find the computation by search instead: maximum steps and counter value.
        #[arg(long, num_args = 2, value_names = ["STEPS", "COUNTERS"], conflicts_with = "ids")]
        search: Option<Vec<u64>>,
    },
    /// Read back the computation described by an encoded word.
    Decode { machine: PathBuf, word: String },
    /// Decide whether a word has the shape of an encoding.
    Check { machine: PathBuf, word: String },
    /// Replay transitions from (0,0) and print the trace.
    Simulate {
        machine: PathBuf,
        #[arg(required = true)]
        ids: Vec<String>,
    },
    /// Run the seeded property suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "small")]
        budget: Budget,
    },
}

#[derive(Args)]
struct EvalArgs {
    /// Formula text, or a file containing it.
    formula: String,
    /// Word as `prefix ; loop`, or a file containing it.
    word: String,
    /// Comma-separated alphabet (default: letters of the formula and word).
    #[arg(long, conflicts_with = "machine")]
    alphabet: Option<String>,
    /// Use the reduction alphabet of this machine.
    #[arg(long)]
    machine: Option<PathBuf>,
    /// Print the satisfaction row of every subformula.
    #[arg(long)]
    table: bool,
    /// Print the least witness of every frequency until at position 0.
    #[arg(long)]
    witness: bool,
}

/// Outcome of a command: `Ok(true)` and `Ok(false)` are verdicts.
type Verdict = Result<bool, Failure>;

enum Failure {
    Usage(String),
    Counterexample,
}

fn usage(context: impl Display, err: impl Display) -> Failure {
    Failure::Usage(format!("{context}: {err}"))
}

/// The argument itself, or the contents of the file it names.
fn literal_or_file(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        fs::read_to_string(path).map_err(|e| usage(path.display(), e))
    } else {
        Ok(arg.to_string())
    }
}

fn load_machine(path: &Path) -> Result<MinskyMachine, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(path.display(), e))?;
    text.parse().map_err(|e| usage(path.display(), e))
}

fn parse_word(text: &str) -> Result<LassoWord, Failure> {
    text.trim().parse().map_err(|e| usage("word", e))
}

fn eval(args: &EvalArgs) -> Verdict {
    let formula_text = literal_or_file(&args.formula)?;
    let word = parse_word(&literal_or_file(&args.word)?)?;
    let open = fltl::parse_open(&formula_text).map_err(|e| usage("formula", e))?;
    let alphabet = if let Some(path) = &args.machine {
        let m = load_machine(path)?;
        build_alphabet(&m)
            .map_err(|e| usage(path.display(), e))?
            .alphabet()
            .clone()
    } else if let Some(list) = &args.alphabet {
        let names: Vec<&str> = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        Alphabet::from_names(&names).map_err(|e| usage("alphabet", e))?
    } else {
        let mut letters: Vec<Letter> = open.letters().into_iter().collect();
        for a in word.letters() {
            if !letters.contains(&a) {
                letters.push(a);
            }
        }
        Alphabet::new(letters).map_err(|e| usage("alphabet", e))?
    };
    let phi: Formula = parse(&formula_text, &alphabet).map_err(|e| usage("formula", e))?;
    let ev = Evaluator::new(&alphabet, &phi).map_err(|e| usage("formula", e))?;
    let table = ev.table(&word).map_err(|e| usage("word", e))?;
    let verdict = table.root_row()[0];
    println!("{verdict}");
    if args.table {
        for (f, row) in table.rows() {
            let cells: String = row.iter().map(|&b| if b { '1' } else { '0' }).collect();
            println!("{cells}  {}", render(&f));
        }
    }
    if args.witness {
        for (f, wit) in table.witnesses(0) {
            match wit {
                Some(w) => println!("witness j={} count={}  {}", w.j, w.count, render(&f)),
                None => println!("witness none  {}", render(&f)),
            }
        }
    }
    Ok(verdict)
}

fn run(command: Command) -> Verdict {
    match command {
        Command::Eval(args) => eval(&args),
        Command::Reduce { machine, out } => {
            let m = load_machine(&machine)?;
            build_alphabet(&m).map_err(|e| usage(machine.display(), e))?;
            let text = render(&reduce(&m));
            match out {
                Some(path) => {
                    fs::write(&path, text + "\n").map_err(|e| usage(path.display(), e))?
                }
                None => println!("{text}"),
            }
            Ok(true)
        }
        Command::Encode {
            machine,
            ids,
            search,
        } => {
            let m = load_machine(&machine)?;
            build_alphabet(&m).map_err(|e| usage(machine.display(), e))?;
            let pi = match search {
                Some(bounds) => {
                    match m.find_successful_computation(bounds[0] as usize, bounds[1]) {
                        Some(pi) => pi,
                        None => {
                            eprintln!("no successful computation within the bounds");
                            return Ok(false);
                        }
                    }
                }
                None if ids.is_empty() => {
                    return Err(Failure::Usage("give transition ids or --search".into()))
                }
                None => m.run(&ids).map_err(|e| usage("computation", e))?,
            };
            let enc = encode(&pi, &m).map_err(|e| usage("computation", e))?;
            println!("{}", enc.word);
            Ok(true)
        }
        Command::Decode { machine, word } => {
            let m = load_machine(&machine)?;
            build_alphabet(&m).map_err(|e| usage(machine.display(), e))?;
            let w = parse_word(&literal_or_file(&word)?)?;
            match decode(&w, &m) {
                Ok(d) => match d.verdict {
                    Ok(pi) => {
                        println!("{pi}");
                        Ok(true)
                    }
                    Err(v) => {
                        println!("{v}");
                        Ok(false)
                    }
                },
                Err(DecodeError::NotInLsymb) => {
                    println!("kind=shape");
                    Ok(false)
                }
            }
        }
        Command::Check { machine, word } => {
            let m = load_machine(&machine)?;
            build_alphabet(&m).map_err(|e| usage(machine.display(), e))?;
            let w = parse_word(&literal_or_file(&word)?)?;
            let verdict = in_lsymb(&w, &m);
            println!("{verdict}");
            Ok(verdict)
        }
        Command::Simulate { machine, ids } => {
            let m = load_machine(&machine)?;
            match m.run(&ids) {
                Ok(pi) => {
                    println!("{pi}");
                    Ok(true)
                }
                Err(e) => {
                    println!("{e}");
                    Ok(false)
                }
            }
        }
        Command::Selftest { seed, budget } => {
            let reports = run_selftest(seed, budget);
            for r in &reports {
                println!("{r}");
            }
            if reports.iter().all(|r| r.counterexample.is_none()) {
                Ok(true)
            } else {
                Err(Failure::Counterexample)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(cli.command);
    if cli.timing {
        eprintln!("elapsed {:.3}s", start.elapsed().as_secs_f64());
    }
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Counterexample) => ExitCode::from(3),
    }
}
