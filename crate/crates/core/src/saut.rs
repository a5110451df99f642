//! The `.saut` text format.
//!
//! ```text
//! # comment
//! event <name> <c|u> <o|x> <hi|lo>
//! state <name>
//! initial <name>
//! marked <name>
//! trans <src> <event> <dst>
//! ```
//!
//! Sections appear in exactly this order. `#` starts a comment unless it is
//! escaped as `\#`, which is how the reserved gadget event `#` is written.

use std::collections::HashMap;

use crate::alphabet::{Alphabet, Event};
use crate::automaton::{Automaton, Label};
use crate::error::{Error, Result};
use crate::ops;

/// Names injected by the gadget builders.
pub const RESERVED_EVENTS: [&str; 2] = ["@", "#"];

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept reserved and tuple-style event names (`@`, `#`, `a:b`), as
    /// written by the gadget builders and the pair constructions.
    pub allow_reserved: bool,
}

fn strip_comment(line: &str) -> &str {
    let bytes = line.as_bytes();
    for i in 0..bytes.len() {
        if bytes[i] == b'#' && (i == 0 || bytes[i - 1] != b'\\') {
            return &line[..i];
        }
    }
    line
}

fn unescape(token: &str) -> String {
    token.replace("\\#", "#")
}

fn escape(name: &str) -> String {
    name.replace('#', "\\#")
}

fn check_user_event(name: &str, line: usize) -> Result<()> {
    let bad = name.contains('#')
        || name.contains(':')
        || name.contains('|')
        || name == "-"
        || RESERVED_EVENTS.contains(&name);
    if bad {
        return Err(Error::Syntax {
            line,
            message: format!("event name `{name}` is reserved or contains a reserved character"),
        });
    }
    Ok(())
}

pub fn parse_automaton(text: &str) -> Result<Automaton> {
    parse_automaton_with(text, ParseOptions::default())
}

pub fn parse_automaton_with(text: &str, options: ParseOptions) -> Result<Automaton> {
    const SECTIONS: [&str; 5] = ["event", "state", "initial", "marked", "trans"];
    let mut section = 0;
    let mut events: Vec<Event> = Vec::new();
    let mut event_lines: HashMap<String, usize> = HashMap::new();
    let mut automaton: Option<Automaton> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens: Vec<String> = strip_comment(raw).split_whitespace().map(unescape).collect();
        let Some(keyword) = tokens.first() else {
            continue;
        };
        let Some(pos) = SECTIONS.iter().position(|s| s == keyword) else {
            return Err(Error::Syntax {
                line,
                message: format!("unknown keyword `{keyword}`"),
            });
        };
        if pos < section {
            return Err(Error::Syntax {
                line,
                message: format!("`{keyword}` line after the `{}` section", SECTIONS[section]),
            });
        }
        section = pos;
        let arity = if pos == 0 {
            5
        } else if pos == 4 {
            4
        } else {
            2
        };
        if tokens.len() != arity {
            return Err(Error::Syntax {
                line,
                message: format!(
                    "`{keyword}` expects {} arguments, found {}",
                    arity - 1,
                    tokens.len() - 1
                ),
            });
        }
        if pos == 0 {
            let name = tokens[1].clone();
            if !options.allow_reserved {
                check_user_event(&name, line)?;
            }
            let flag = |tok: &str, yes: &str, no: &str| -> Result<bool> {
                match tok {
                    t if t == yes => Ok(true),
                    t if t == no => Ok(false),
                    t => Err(Error::Syntax {
                        line,
                        message: format!("expected `{yes}` or `{no}`, found `{t}`"),
                    }),
                }
            };
            let c = flag(&tokens[2], "c", "u")?;
            let o = flag(&tokens[3], "o", "x")?;
            let hi = flag(&tokens[4], "hi", "lo")?;
            if event_lines.insert(name.clone(), line).is_some() {
                return Err(Error::Duplicate {
                    line,
                    kind: "event",
                    name,
                });
            }
            events.push(Event::new(name, c, o, hi));
            continue;
        }
        let a = match automaton.as_mut() {
            Some(a) => a,
            None => {
                let alphabet = Alphabet::new(events.clone()).map_err(|e| Error::Syntax {
                    line,
                    message: e.to_string(),
                })?;
                automaton.insert(Automaton::new(alphabet))
            }
        };
        let state = |a: &Automaton, name: &str| {
            a.state_id(name).ok_or_else(|| Error::Unknown {
                line,
                kind: "state",
                name: name.to_string(),
            })
        };
        match pos {
            1 => {
                if a.state_id(&tokens[1]).is_some() {
                    return Err(Error::Duplicate {
                        line,
                        kind: "state",
                        name: tokens[1].clone(),
                    });
                }
                a.add_state(tokens[1].clone())?;
            }
            2 => {
                let s = state(a, &tokens[1])?;
                a.add_initial(s);
            }
            3 => {
                let s = state(a, &tokens[1])?;
                a.set_marked(s, true);
            }
            _ => {
                let src = state(a, &tokens[1])?;
                let e = a.alphabet().id(&tokens[2]).ok_or_else(|| Error::Unknown {
                    line,
                    kind: "event",
                    name: tokens[2].clone(),
                })?;
                let dst = state(a, &tokens[3])?;
                a.add_transition(src, Label::Event(e), dst);
            }
        }
    }
    match automaton {
        Some(a) => Ok(a),
        None => Ok(Automaton::new(Alphabet::new(events)?)),
    }
}

/// Canonical text: events by name, states in id order, transitions by
/// source then (event, target). Silent transitions are eliminated first.
pub fn serialize_automaton(a: &Automaton) -> String {
    let owned;
    let a = if a.has_silent() {
        owned = ops::remove_silent(a);
        &owned
    } else {
        a
    };
    let mut out = String::new();
    for e in a.alphabet().events() {
        out.push_str(&format!(
            "event {} {} {} {}\n",
            escape(&e.name),
            if e.controllable { "c" } else { "u" },
            if e.observable { "o" } else { "x" },
            if e.highlevel { "hi" } else { "lo" },
        ));
    }
    for s in 0..a.num_states() {
        out.push_str(&format!("state {}\n", escape(a.state_name(s))));
    }
    for &s in a.initial() {
        out.push_str(&format!("initial {}\n", escape(a.state_name(s))));
    }
    for s in a.marked_states() {
        out.push_str(&format!("marked {}\n", escape(a.state_name(s))));
    }
    for s in 0..a.num_states() {
        for &(l, t) in a.edges(s) {
            if let Label::Event(e) = l {
                out.push_str(&format!(
                    "trans {} {} {}\n",
                    escape(a.state_name(s)),
                    escape(a.alphabet().name(e)),
                    escape(a.state_name(t))
                ));
            }
        }
    }
    out
}
