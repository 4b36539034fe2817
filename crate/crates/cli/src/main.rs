use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use periodica::pascal::build_pascal;
use periodica::{
    build_atomic_explicit, build_minimal_automaton, check_conditions, condensation, decide_with,
    is_pascal_quotient, minimize, parse_dfa, write_dfa, Dfa, Error, ExtractionCaps, PascalParams,
    SccType, UpSet,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Decide whether an automaton reading base-b digits, least significant
/// first, accepts an ultimately periodic set of integers.
#[derive(Parser)]
#[command(name = "periodica", version)]
struct Cli {
    /// Print JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Give up when the preperiod bound of the accepted set exceeds this
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_preperiod: Option<u64>,
    /// Give up when the period bound needs `b^e` with `e` above this
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    max_exponent: Option<u32>,
    /// Seed for the order of benchmark runs
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an automaton file ('-' reads standard input)
    Decide {
        #[arg(default_value = "-")]
        path: String,
    },
    /// Write a generated automaton
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Report states, components and Pascal parameters
    Info {
        #[arg(default_value = "-")]
        path: String,
    },
    /// Complete and minimize an automaton
    Minimize {
        #[arg(default_value = "-")]
        path: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Time the conditions check on the automata of {0} + pN, as CSV
    Bench {
        sizes: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        base: u32,
        #[arg(long, default_value_t = 11, value_parser = clap::value_parser!(u64).range(1..))]
        runs: u64,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Minimal automaton of a set given as `p=4 R=0,1 I=1,6`
    Upset {
        params: Vec<String>,
        #[arg(long, default_value_t = 2)]
        base: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Pascal automaton given as `p=3 R=2`
    Pascal {
        params: Vec<String>,
        #[arg(long, default_value_t = 2)]
        base: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

struct Exit {
    code: u8,
    message: String,
}

impl Exit {
    fn input(message: impl Into<String>) -> Self {
        Exit {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::ExtractionCapExceeded(_)) {
            3
        } else {
            2
        };
        Exit {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": e.message }));
            }
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Exit> {
    match &cli.command {
        Command::Decide { path } => {
            let dfa = read_dfa(path)?;
            let caps = ExtractionCaps {
                max_exponent: cli.max_exponent,
                max_preperiod: cli.max_preperiod,
            };
            let result = decide_with(&dfa, &caps)?;
            if cli.json {
                println!("{}", result.to_json());
            } else {
                println!("{result}");
            }
            Ok(if result.is_ultimately_periodic() {
                0
            } else {
                1
            })
        }
        Command::Gen { kind } => {
            let (dfa, output) = match kind {
                GenKind::Upset {
                    params,
                    base,
                    output,
                } => {
                    let (rest, base) = take_base(params, *base)?;
                    let set: UpSet = rest.join(" ").parse()?;
                    (build_minimal_automaton(&set, base)?, output)
                }
                GenKind::Pascal {
                    params,
                    base,
                    output,
                } => {
                    let (rest, base) = take_base(params, *base)?;
                    let (p, r) = pascal_params(&rest)?;
                    (build_pascal(p, &r, base)?, output)
                }
            };
            emit(&dfa, output.as_ref())?;
            Ok(0)
        }
        Command::Info { path } => {
            let dfa = read_dfa(path)?;
            let rows = scc_rows(&dfa);
            if cli.json {
                println!("{}", info_json(&dfa, &rows));
            } else {
                print_info(&dfa, &rows);
            }
            Ok(0)
        }
        Command::Minimize { path, output } => {
            let dfa = read_dfa(path)?;
            dfa.validate()?;
            emit(&minimize(&dfa), output.as_ref())?;
            Ok(0)
        }
        Command::Bench { sizes, base, runs } => {
            bench(sizes, *base, *runs as usize, cli.seed)?;
            Ok(0)
        }
    }
}

fn read_dfa(path: &str) -> Result<Dfa, Exit> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Exit::input(format!("standard input: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Exit::input(format!("{path}: {e}")))?
    };
    Ok(parse_dfa(&text)?)
}

fn emit(dfa: &Dfa, output: Option<&PathBuf>) -> Result<(), Exit> {
    let text = write_dfa(dfa);
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Exit::input(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Pulls a `base=<b>` token out of the generator parameters.
fn take_base(params: &[String], default: u32) -> Result<(Vec<String>, u32), Exit> {
    let mut base = default;
    let mut rest = Vec::new();
    for token in params.iter().flat_map(|p| p.split_whitespace()) {
        match token.strip_prefix("base=") {
            Some(b) => {
                base = b
                    .parse()
                    .map_err(|_| Exit::input(format!("bad base {b:?}")))?;
            }
            None => rest.push(token.to_string()),
        }
    }
    Ok((rest, base))
}

fn pascal_params(tokens: &[String]) -> Result<(u64, Vec<u64>), Exit> {
    let mut p = None;
    let mut r = Vec::new();
    for token in tokens {
        let bad = || Exit::input(format!("bad parameter {token:?}"));
        match token.split_once('=').ok_or_else(bad)? {
            ("p", v) => p = Some(v.parse().map_err(|_| bad())?),
            ("R", "-") => r.clear(),
            ("R", v) => {
                r = v
                    .split(',')
                    .map(|x| x.parse().map_err(|_| bad()))
                    .collect::<Result<_, _>>()?
            }
            _ => return Err(bad()),
        }
    }
    Ok((p.ok_or_else(|| Exit::input("missing p=<period>"))?, r))
}

struct SccRow {
    size: usize,
    ty: SccType,
    descendants: Vec<usize>,
    /// Set for type-one components.
    pascal: Option<Result<PascalParams, String>>,
}

fn scc_rows(dfa: &Dfa) -> Vec<SccRow> {
    let cond = condensation(dfa);
    (0..cond.len())
        .map(|c| SccRow {
            size: cond.size(c),
            ty: cond.scc_type(c),
            descendants: cond.descendants(c).to_vec(),
            pascal: (cond.scc_type(c) == SccType::TypeOne).then(|| {
                let sub = dfa
                    .restrict(cond.members(c))
                    .ok_or_else(|| "transitions leave the component".to_string())?;
                is_pascal_quotient(&sub).map_err(|r| r.to_string())
            }),
        })
        .collect()
}

fn info_json(dfa: &Dfa, rows: &[SccRow]) -> Value {
    let sccs: Vec<Value> = rows
        .iter()
        .enumerate()
        .map(|(id, row)| {
            let pascal = match &row.pascal {
                None => Value::Null,
                Some(Ok(params)) => json!(params),
                Some(Err(why)) => json!({ "rejected": why }),
            };
            json!({
                "id": id,
                "size": row.size,
                "type": row.ty.label(),
                "descendants": row.descendants,
                "pascal": pascal,
            })
        })
        .collect();
    json!({
        "base": dfa.base(),
        "states": dfa.state_count(),
        "initial": dfa.initial(),
        "complete": dfa.is_complete(),
        "group": dfa.is_group_automaton().unwrap_or(false),
        "sccs": sccs,
    })
}

fn print_info(dfa: &Dfa, rows: &[SccRow]) {
    let yes = |b: bool| if b { "yes" } else { "no" };
    println!("base {}", dfa.base());
    println!("states {}", dfa.state_count());
    println!("initial {}", dfa.initial());
    println!("complete {}", yes(dfa.is_complete()));
    println!("group {}", yes(dfa.is_group_automaton().unwrap_or(false)));
    println!("sccs {}", rows.len());
    for (id, row) in rows.iter().enumerate() {
        let desc = if row.descendants.is_empty() {
            "-".to_string()
        } else {
            let ids: Vec<String> = row.descendants.iter().map(usize::to_string).collect();
            ids.join(",")
        };
        print!(
            "scc {id} size={} type={} descendants={desc}",
            row.size,
            row.ty.label()
        );
        match &row.pascal {
            None => println!(),
            Some(Ok(params)) => println!(" pascal {params}"),
            Some(Err(why)) => println!(" pascal rejected: {why}"),
        }
    }
}

fn bench(sizes: &[u64], base: u32, runs: usize, seed: u64) -> Result<(), Exit> {
    let automata = sizes
        .iter()
        .map(|&p| build_atomic_explicit(p, &[0], base))
        .collect::<Result<Vec<_>, _>>()?;
    // Interleave the runs in a seeded order so drift spreads over all sizes.
    let mut order: Vec<usize> = (0..automata.len())
        .flat_map(|i| std::iter::repeat_n(i, runs))
        .collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut samples: Vec<Vec<Duration>> = vec![Vec::with_capacity(runs); automata.len()];
    for i in order {
        let start = Instant::now();
        check_conditions(&automata[i])?;
        samples[i].push(start.elapsed());
    }
    println!("p,states,transitions,nanos");
    for ((p, dfa), mut times) in sizes.iter().zip(&automata).zip(samples) {
        times.sort_unstable();
        println!(
            "{p},{},{},{}",
            dfa.state_count(),
            dfa.transitions().count(),
            times[times.len() / 2].as_nanos()
        );
    }
    Ok(())
}
