//! SMT-LIB2 rendering of conditions (integer theory), for debugging.

use std::collections::BTreeSet;
use std::fmt::Write;

use super::expr::{pow2, Bit, CmpOp, Condition, Term};
use super::state::Var;

fn sym(v: &Var) -> String {
    format!("q{}_{}", v.qubit.0, v.version)
}

fn int(v: i128) -> String {
    if v < 0 {
        format!("(- {})", -v)
    } else {
        v.to_string()
    }
}

/// `(ite (= e k) f(k) ...)` over the interval of `e`.
fn by_cases(e: &Term<Var>, f: impl Fn(i128) -> String) -> String {
    let (lo, hi) = e.range().unwrap_or((0, 0));
    let lo = lo.max(-128);
    let hi = hi.min(120);
    let es = term(e);
    let mut out = f(hi);
    for k in (lo..hi).rev() {
        out = format!("(ite (= {es} {}) {} {out})", int(k), f(k));
    }
    out
}

fn closed(t: &Term<Var>) -> Option<i128> {
    let mut has_atom = false;
    t.visit_atoms(&mut |_| has_atom = true);
    if has_atom {
        None
    } else {
        t.eval(&|_| false)
    }
}

pub fn term(t: &Term<Var>) -> String {
    match t {
        Term::Int(v) => int(*v),
        Term::Reg { bits, order } => {
            let parts: Vec<String> = Term::lsb_bits(bits, *order)
                .into_iter()
                .enumerate()
                .filter_map(|(i, b)| match b {
                    Bit::Const(false) => None,
                    Bit::Const(true) => Some(int(1i128 << i)),
                    Bit::Atom(v) => Some(format!("(ite {} {} 0)", sym(v), 1i128 << i)),
                })
                .collect();
            match parts.len() {
                0 => "0".into(),
                1 => parts[0].clone(),
                _ => format!("(+ {})", parts.join(" ")),
            }
        }
        Term::Sub(a, b) => format!("(- {} {})", term(a), term(b)),
        Term::Pow2(e) => match closed(e) {
            Some(k) => int(pow2(k).unwrap_or(0)),
            None => by_cases(e, |k| int(pow2(k).unwrap_or(0))),
        },
        Term::Shl(a, k) => {
            let a = term(a);
            let shift = |k: i128| {
                if k >= 0 {
                    format!("(* {a} {})", int(pow2(k).unwrap_or(0)))
                } else {
                    format!("(div {a} {})", int(pow2(-k).unwrap_or(1)))
                }
            };
            match closed(k) {
                Some(k) => shift(k),
                None => by_cases(k, shift),
            }
        }
    }
}

pub fn condition(c: &Condition<Var>) -> String {
    match c {
        Condition::Const(b) => b.to_string(),
        Condition::Atom(v) => sym(v),
        Condition::Not(x) => format!("(not {})", condition(x)),
        Condition::And(xs) | Condition::Or(xs) => {
            let op = if matches!(c, Condition::And(_)) {
                "and"
            } else {
                "or"
            };
            match xs.len() {
                0 => (op == "and").to_string(),
                _ => {
                    let parts: Vec<String> = xs.iter().map(condition).collect();
                    format!("({op} {})", parts.join(" "))
                }
            }
        }
        Condition::Implies(a, b) => format!("(=> {} {})", condition(a), condition(b)),
        Condition::Iff(a, b) => format!("(= {} {})", condition(a), condition(b)),
        Condition::Cmp(op, a, b) => {
            let op = match op {
                CmpOp::Eq => "=",
                CmpOp::Ne => "distinct",
                CmpOp::Lt => "<",
                CmpOp::Le => "<=",
                CmpOp::Gt => ">",
                CmpOp::Ge => ">=",
            };
            format!("({op} {} {})", term(a), term(b))
        }
    }
}

/// Incremental script mirroring solver calls.
#[derive(Debug, Default)]
pub struct Transcript {
    text: String,
    declared: BTreeSet<Var>,
}

impl Transcript {
    fn line(&mut self, s: &str) {
        self.text.push_str(s);
        self.text.push('\n');
    }

    pub fn push(&mut self) {
        self.line("(push 1)");
    }

    pub fn pop(&mut self) {
        self.line("(pop 1)");
    }

    pub fn assert(&mut self, c: &Condition<Var>) {
        for v in c.atoms() {
            if self.declared.insert(v) {
                let _ = writeln!(self.text, "(declare-const {} Bool)", sym(&v));
            }
        }
        let _ = writeln!(self.text, "(assert {})", condition(c));
    }

    pub fn check_sat(&mut self) {
        self.line("(check-sat)");
    }

    pub fn finish(self) -> String {
        format!(
            "(set-option :global-declarations true)\n(set-logic ALL)\n{}",
            self.text
        )
    }
}
