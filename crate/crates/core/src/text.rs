//! Line-oriented text format for automata.
//!
//! ```text
//! base 2
//! states 3
//! initial 0
//! final 1
//! trans 0 0 0
//! trans 0 1 1
//! ```
//!
//! `base` and `states` come before any other directive, `final` appears at
//! most once (possibly with no states), `#` starts a comment and a
//! transition may be given only once.

use std::fmt::Write as _;

use crate::automaton::{Dfa, DfaBuilder};
use crate::error::{Error, Result};

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(line: usize, word: &str, what: &str) -> Result<T> {
    word.parse().map_err(|_| {
        err(
            line,
            format!("{what} {word:?} is not a non-negative integer"),
        )
    })
}

pub fn parse_dfa(input: &str) -> Result<Dfa> {
    let mut base: Option<u32> = None;
    let mut states: Option<usize> = None;
    let mut builder: Option<DfaBuilder> = None;
    let mut initial_seen = false;
    let mut final_seen = false;
    let mut defined: Vec<bool> = Vec::new();

    for (idx, raw) in input.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut words = content.split_whitespace();
        let Some(directive) = words.next() else {
            continue;
        };
        let args: Vec<&str> = words.collect();
        let arity = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(err(
                    line,
                    format!("{directive} takes {n} argument(s), got {}", args.len()),
                ))
            }
        };
        match directive {
            "base" | "states" => {
                arity(1)?;
                if builder.is_some() {
                    return Err(err(line, format!("{directive} given twice")));
                }
                if directive == "base" {
                    if base.is_some() {
                        return Err(err(line, "base given twice"));
                    }
                    let b: u32 = number(line, args[0], "base")?;
                    if b < 2 {
                        return Err(err(line, format!("base {b} is smaller than 2")));
                    }
                    base = Some(b);
                } else {
                    if states.is_some() {
                        return Err(err(line, "states given twice"));
                    }
                    let n: usize = number(line, args[0], "state count")?;
                    if n == 0 {
                        return Err(err(line, "an automaton needs at least one state"));
                    }
                    states = Some(n);
                }
                if let (Some(b), Some(n)) = (base, states) {
                    builder = Some(Dfa::builder(b, n));
                    defined = vec![false; n * b as usize];
                }
            }
            "initial" | "final" | "trans" => {
                let (Some(b), Some(n), Some(builder)) = (base, states, builder.as_mut()) else {
                    return Err(err(line, format!("{directive} before base and states")));
                };
                let state = |word: &str| -> Result<usize> {
                    let q: usize = number(line, word, "state")?;
                    if q >= n {
                        return Err(err(line, format!("state {q} out of range (states {n})")));
                    }
                    Ok(q)
                };
                match directive {
                    "initial" => {
                        arity(1)?;
                        if initial_seen {
                            return Err(err(line, "initial given twice"));
                        }
                        initial_seen = true;
                        builder.set_initial(state(args[0])?);
                    }
                    "final" => {
                        if final_seen {
                            return Err(err(line, "final given twice"));
                        }
                        final_seen = true;
                        for w in &args {
                            builder.add_final(state(w)?);
                        }
                    }
                    _ => {
                        arity(3)?;
                        let from = state(args[0])?;
                        let digit: u32 = number(line, args[1], "digit")?;
                        if digit >= b {
                            return Err(err(
                                line,
                                format!("digit {digit} out of range (base {b})"),
                            ));
                        }
                        let to = state(args[2])?;
                        let slot = &mut defined[from * b as usize + digit as usize];
                        if *slot {
                            return Err(err(
                                line,
                                format!("duplicate transition from {from} on {digit}"),
                            ));
                        }
                        *slot = true;
                        builder.add_transition(from, digit, to);
                    }
                }
            }
            other => return Err(err(line, format!("unknown directive {other:?}"))),
        }
    }
    let Some(builder) = builder else {
        return Err(err(input.lines().count().max(1), "missing base or states"));
    };
    if !initial_seen {
        return Err(err(input.lines().count().max(1), "missing initial"));
    }
    builder.build()
}

pub fn write_dfa(dfa: &Dfa) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "base {}", dfa.base());
    let _ = writeln!(out, "states {}", dfa.state_count());
    let _ = writeln!(out, "initial {}", dfa.initial());
    out.push_str("final");
    for q in dfa.final_states() {
        let _ = write!(out, " {q}");
    }
    out.push('\n');
    for (q, a, t) in dfa.transitions() {
        let _ = writeln!(out, "trans {q} {a} {t}");
    }
    out
}
