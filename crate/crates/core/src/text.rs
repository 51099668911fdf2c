//! Line-oriented circuit text format.
//!
//! ```text
//! # Bell pair
//! alloc a
//! alloc b
//! h a
//! cx a b
//! assert (eq a b)
//! ```

use std::collections::HashMap;
use std::fmt::Write;

use crate::circuit::{Circuit, GateKind, Instruction, OpKind, QubitId};
use crate::cond::{parse_condition, print_condition};
use crate::error::{Error, Result};

const KEYWORDS: &[&str] = &[
    "alloc", "input", "dealloc", "measure", "assert", "x", "h", "s", "t", "tdg", "cx", "ccx",
    "mcx", "swap", "cswap", "ctrl", "and", "or", "not", "implies", "iff", "eq", "ne", "lt", "le",
    "gt", "ge", "reg_msb", "reg_lsb", "shl", "sub", "pow2", "true", "false",
];

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !KEYWORDS.contains(&s)
}

fn gate_of(word: &str) -> Option<GateKind> {
    GateKind::ALL.into_iter().find(|g| g.mnemonic() == word)
}

struct Parser {
    circuit: Circuit,
    by_name: HashMap<String, QubitId>,
}

impl Parser {
    fn qubit(&self, line: usize, name: &str) -> Result<QubitId> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::Syntax {
                line,
                msg: format!("undeclared qubit '{name}'"),
            })
    }

    fn qubits(&self, line: usize, names: &[&str]) -> Result<Vec<QubitId>> {
        names.iter().map(|n| self.qubit(line, n)).collect()
    }

    fn line(&mut self, line: usize, text: &str) -> Result<()> {
        let syntax = |msg: String| Error::Syntax { line, msg };
        let text = text.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            return Ok(());
        }
        let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let rest = rest.trim();
        if head == "assert" {
            if rest.is_empty() {
                return Err(syntax("assert needs a condition".into()));
            }
            let cond = parse_condition(rest, &self.circuit.names).map_err(|e| match e {
                Error::ConditionSyntax { pos, msg } => {
                    syntax(format!("condition at column {pos}: {msg}"))
                }
                e => e,
            })?;
            self.circuit.assert(cond);
            return Ok(());
        }
        let args: Vec<&str> = rest.split_whitespace().collect();
        let want = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(syntax(format!(
                    "'{head}' takes {n} operand(s), got {}",
                    args.len()
                )))
            }
        };
        match head {
            "alloc" | "input" => {
                want(1)?;
                let name = args[0];
                if !valid_name(name) {
                    return Err(syntax(format!("invalid qubit name '{name}'")));
                }
                if self.by_name.contains_key(name) {
                    return Err(syntax(format!("qubit name '{name}' already used")));
                }
                let q = if head == "alloc" {
                    self.circuit.alloc(name)
                } else {
                    self.circuit.input(name)
                };
                self.by_name.insert(name.to_string(), q);
            }
            "dealloc" | "measure" => {
                want(1)?;
                let q = self.qubit(line, args[0])?;
                if head == "dealloc" {
                    self.circuit.dealloc(q);
                } else {
                    self.circuit.measure(q);
                }
            }
            "cx" | "ccx" | "mcx" => {
                let k = match head {
                    "cx" => Some(1),
                    "ccx" => Some(2),
                    _ => None,
                };
                match k {
                    Some(k) => want(k + 1)?,
                    None if args.len() < 2 => {
                        return Err(syntax("mcx needs at least one control and a target".into()))
                    }
                    None => {}
                }
                let qs = self.qubits(line, &args)?;
                let (t, c) = qs.split_last().unwrap();
                self.circuit.gate(GateKind::X, c, &[*t]);
            }
            "cswap" => {
                want(3)?;
                let qs = self.qubits(line, &args)?;
                self.circuit.gate(GateKind::Swap, &qs[..1], &qs[1..]);
            }
            "ctrl" => {
                let Some(gi) = args.iter().position(|a| gate_of(a).is_some()) else {
                    return Err(syntax("ctrl without a gate mnemonic".into()));
                };
                let g = gate_of(args[gi]).unwrap();
                let controls = self.qubits(line, &args[..gi])?;
                let targets = self.qubits(line, &args[gi + 1..])?;
                if targets.len() != g.arity() {
                    return Err(syntax(format!(
                        "'{}' takes {} target(s), got {}",
                        g.mnemonic(),
                        g.arity(),
                        targets.len()
                    )));
                }
                self.circuit.gate(g, &controls, &targets);
            }
            w => {
                let g = gate_of(w).ok_or_else(|| syntax(format!("unknown instruction '{w}'")))?;
                want(g.arity())?;
                let qs = self.qubits(line, &args)?;
                self.circuit.gate(g, &[], &qs);
            }
        }
        Ok(())
    }
}

/// Parses and validates circuit text.
pub fn parse(text: &str) -> Result<Circuit> {
    let c = parse_unchecked(text)?;
    c.ensure_valid()?;
    Ok(c)
}

/// Parses without structural validation.
pub fn parse_unchecked(text: &str) -> Result<Circuit> {
    let mut p = Parser {
        circuit: Circuit::new(),
        by_name: HashMap::new(),
    };
    for (i, l) in text.lines().enumerate() {
        p.line(i + 1, l)?;
    }
    Ok(p.circuit)
}

fn instruction_line(c: &Circuit, ins: &Instruction, out: &mut String) {
    let names = |qs: &[QubitId]| qs.iter().map(|q| c.name(*q)).collect::<Vec<_>>().join(" ");
    let _ = match &ins.op {
        OpKind::Alloc => writeln!(out, "alloc {}", names(&ins.targets)),
        OpKind::Input => writeln!(out, "input {}", names(&ins.targets)),
        OpKind::Dealloc => writeln!(out, "dealloc {}", names(&ins.targets)),
        OpKind::Measure => writeln!(out, "measure {}", names(&ins.targets)),
        OpKind::Assert(cond) => writeln!(out, "assert {}", print_condition(cond, &c.names)),
        OpKind::Gate(g) => {
            let all = names(&ins.qubits());
            match (g, ins.controls.len()) {
                (_, 0) => writeln!(out, "{} {all}", g.mnemonic()),
                (GateKind::X, 1) => writeln!(out, "cx {all}"),
                (GateKind::X, 2) => writeln!(out, "ccx {all}"),
                (GateKind::X, _) => writeln!(out, "mcx {all}"),
                (GateKind::Swap, 1) => writeln!(out, "cswap {all}"),
                _ => writeln!(
                    out,
                    "ctrl {} {} {}",
                    names(&ins.controls),
                    g.mnemonic(),
                    names(&ins.targets)
                ),
            }
        }
    };
}

pub fn serialize(c: &Circuit) -> String {
    let mut out = String::new();
    for ins in &c.instructions {
        instruction_line(c, ins, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Rule;

    #[test]
    fn bell() {
        let c = parse("alloc q0\nalloc q1\nh q0\ncx q0 q1").unwrap();
        assert_eq!(c.num_qubits(), 2);
        assert_eq!(c.instructions[3].controls, vec![QubitId(0)]);
        assert_eq!(parse(&serialize(&c)).unwrap(), c);
    }

    #[test]
    fn overlap_is_rejected() {
        match parse("alloc q0\ncx q0 q0") {
            Err(Error::Invalid(v)) => assert_eq!(v[0].rule, Rule::Overlap(QubitId(0))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_name_lines() {
        assert!(matches!(
            parse("alloc a\nfoo a"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse("alloc a\ncx a b"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse("alloc cx"),
            Err(Error::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse("alloc a\nassert (and a"),
            Err(Error::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn generic_controls_and_comments() {
        let src = "input a\ninput b\nalloc tg # target\nctrl a b s tg\nctrl a swap b tg\nmcx a b tg\nassert (implies a (eq b tg))\n";
        let c = parse(src).unwrap();
        assert_eq!(c.instructions[3].name(), "c2s");
        assert_eq!(c.instructions[4].name(), "cswap");
        let again = serialize(&c);
        assert_eq!(parse(&again).unwrap(), c);
        assert_eq!(serialize(&parse(&again).unwrap()), again);
    }

    #[test]
    fn empty() {
        let c = parse("# nothing\n\n").unwrap();
        assert!(c.instructions.is_empty());
        assert_eq!(serialize(&c), "");
    }
}
