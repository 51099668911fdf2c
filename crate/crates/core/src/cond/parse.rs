//! S-expression syntax for conditions.
//!
//! ```text
//! (and (eq q0 q1) (lt (reg_msb x0 x1 x2 x3) (shl 1 (sub 4 (reg_lsb p0 p1)))))
//! ```

use crate::circuit::QubitId;
use crate::error::{Error, Result};

use super::expr::{Bit, CmpOp, Condition, Order, Term};

/// Maps atom names to atoms and back.
pub trait SexprAtoms<A> {
    fn resolve(&self, name: &str) -> Option<A>;
    fn name(&self, atom: &A) -> String;
}

/// `qN` names qubit id `N`.
pub struct NumberedQubits;

impl SexprAtoms<QubitId> for NumberedQubits {
    fn resolve(&self, name: &str) -> Option<QubitId> {
        let digits = name.strip_prefix('q')?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        digits.parse().ok().map(QubitId)
    }

    fn name(&self, atom: &QubitId) -> String {
        atom.to_string()
    }
}

/// Qubit names from a circuit's qubit table.
impl SexprAtoms<QubitId> for Vec<String> {
    fn resolve(&self, name: &str) -> Option<QubitId> {
        self.iter()
            .position(|n| n == name)
            .map(|i| QubitId(i as u32))
    }

    fn name(&self, atom: &QubitId) -> String {
        self.get(atom.index())
            .cloned()
            .unwrap_or_else(|| atom.to_string())
    }
}

#[derive(Debug, Clone)]
enum Sexpr {
    Atom(String, usize),
    List(Vec<Sexpr>, usize),
}

impl Sexpr {
    fn pos(&self) -> usize {
        match self {
            Sexpr::Atom(_, p) | Sexpr::List(_, p) => *p,
        }
    }
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::ConditionSyntax {
        pos,
        msg: msg.into(),
    })
}

fn tokenize(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        if ch == '(' || ch == ')' || ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &text[s..i]));
            }
            if !ch.is_whitespace() {
                out.push((i, &text[i..i + 1]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out
}

fn read(tokens: &[(usize, &str)], at: &mut usize, end: usize) -> Result<Sexpr> {
    let Some(&(pos, tok)) = tokens.get(*at) else {
        return err(end, "unexpected end of input");
    };
    *at += 1;
    match tok {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*at) {
                    None => return err(end, "unclosed '('"),
                    Some((_, ")")) => {
                        *at += 1;
                        return Ok(Sexpr::List(items, pos));
                    }
                    Some(_) => items.push(read(tokens, at, end)?),
                }
            }
        }
        ")" => err(pos, "unexpected ')'"),
        t => Ok(Sexpr::Atom(t.to_string(), pos)),
    }
}

const BOOL_FORMS: &[&str] = &["and", "or", "not", "implies", "iff"];
const CMP_FORMS: &[&str] = &["eq", "ne", "lt", "le", "gt", "ge"];

struct Reader<'r, A> {
    atoms: &'r dyn SexprAtoms<A>,
}

impl<A> Reader<'_, A> {
    /// Syntactically boolean: an atom, `true`/`false`, or a boolean form.
    fn is_bool(&self, s: &Sexpr) -> bool {
        match s {
            Sexpr::Atom(t, _) => t == "true" || t == "false" || self.atoms.resolve(t).is_some(),
            Sexpr::List(items, _) => match items.first() {
                Some(Sexpr::Atom(h, _)) => {
                    BOOL_FORMS.contains(&h.as_str()) || CMP_FORMS.contains(&h.as_str())
                }
                _ => false,
            },
        }
    }

    fn is_bit_literal(s: &Sexpr) -> bool {
        matches!(s, Sexpr::Atom(t, _) if t == "0" || t == "1")
    }

    fn cond(&self, s: &Sexpr) -> Result<Condition<A>> {
        match s {
            Sexpr::Atom(t, p) => match t.as_str() {
                "true" | "1" => Ok(Condition::Const(true)),
                "false" | "0" => Ok(Condition::Const(false)),
                _ => match self.atoms.resolve(t) {
                    Some(a) => Ok(Condition::Atom(a)),
                    None => err(*p, format!("unknown atom '{t}'")),
                },
            },
            Sexpr::List(items, p) => {
                let Some(Sexpr::Atom(head, _)) = items.first() else {
                    return err(*p, "expected a form keyword");
                };
                let args = &items[1..];
                let arity = |n: usize| -> Result<()> {
                    if args.len() == n {
                        Ok(())
                    } else {
                        err(
                            *p,
                            format!("'{head}' takes {n} arguments, got {}", args.len()),
                        )
                    }
                };
                match head.as_str() {
                    "and" => Ok(Condition::And(
                        args.iter().map(|a| self.cond(a)).collect::<Result<_>>()?,
                    )),
                    "or" => Ok(Condition::Or(
                        args.iter().map(|a| self.cond(a)).collect::<Result<_>>()?,
                    )),
                    "not" => {
                        arity(1)?;
                        Ok(Condition::Not(Box::new(self.cond(&args[0])?)))
                    }
                    "implies" => {
                        arity(2)?;
                        Ok(Condition::implies(
                            self.cond(&args[0])?,
                            self.cond(&args[1])?,
                        ))
                    }
                    "iff" => {
                        arity(2)?;
                        Ok(Condition::iff(self.cond(&args[0])?, self.cond(&args[1])?))
                    }
                    h if CMP_FORMS.contains(&h) => {
                        arity(2)?;
                        let op = match h {
                            "eq" => CmpOp::Eq,
                            "ne" => CmpOp::Ne,
                            "lt" => CmpOp::Lt,
                            "le" => CmpOp::Le,
                            "gt" => CmpOp::Gt,
                            _ => CmpOp::Ge,
                        };
                        let (a, b) = (&args[0], &args[1]);
                        let boolish = |s: &Sexpr| self.is_bool(s) || Self::is_bit_literal(s);
                        let genuine = self.is_bool(a) || self.is_bool(b);
                        if matches!(op, CmpOp::Eq | CmpOp::Ne)
                            && genuine
                            && boolish(a)
                            && boolish(b)
                        {
                            let iff = Condition::iff(self.cond(a)?, self.cond(b)?);
                            return Ok(if op == CmpOp::Eq {
                                iff
                            } else {
                                Condition::Not(Box::new(iff))
                            });
                        }
                        Ok(Condition::Cmp(op, self.term(a)?, self.term(b)?))
                    }
                    other => err(*p, format!("'{other}' is not a boolean form")),
                }
            }
        }
    }

    fn term(&self, s: &Sexpr) -> Result<Term<A>> {
        match s {
            Sexpr::Atom(t, p) => {
                if let Ok(v) = t.parse::<i128>() {
                    return Ok(Term::Int(v));
                }
                match self.atoms.resolve(t) {
                    Some(a) => Ok(Term::Reg {
                        bits: vec![Bit::Atom(a)],
                        order: Order::Lsb,
                    }),
                    None => err(*p, format!("'{t}' is not an integer term")),
                }
            }
            Sexpr::List(items, p) => {
                let Some(Sexpr::Atom(head, _)) = items.first() else {
                    return err(*p, "expected a form keyword");
                };
                let args = &items[1..];
                let arity = |n: usize| -> Result<()> {
                    if args.len() == n {
                        Ok(())
                    } else {
                        err(
                            *p,
                            format!("'{head}' takes {n} arguments, got {}", args.len()),
                        )
                    }
                };
                match head.as_str() {
                    "reg_msb" | "reg_lsb" => {
                        if args.is_empty() || args.len() > 64 {
                            return err(*p, "register width must be between 1 and 64");
                        }
                        let bits = args
                            .iter()
                            .map(|a| match a {
                                Sexpr::Atom(t, _) if t == "0" => Ok(Bit::Const(false)),
                                Sexpr::Atom(t, _) if t == "1" => Ok(Bit::Const(true)),
                                Sexpr::Atom(t, q) => match self.atoms.resolve(t) {
                                    Some(x) => Ok(Bit::Atom(x)),
                                    None => err(*q, format!("unknown atom '{t}'")),
                                },
                                other => err(other.pos(), "register bits must be atoms"),
                            })
                            .collect::<Result<_>>()?;
                        let order = if head == "reg_msb" {
                            Order::Msb
                        } else {
                            Order::Lsb
                        };
                        Ok(Term::Reg { bits, order })
                    }
                    "shl" => {
                        arity(2)?;
                        Ok(Term::shl(self.term(&args[0])?, self.term(&args[1])?))
                    }
                    "sub" => {
                        arity(2)?;
                        Ok(Term::sub(self.term(&args[0])?, self.term(&args[1])?))
                    }
                    "pow2" => {
                        arity(1)?;
                        Ok(Term::pow2(self.term(&args[0])?))
                    }
                    other => err(*p, format!("'{other}' is not an integer form")),
                }
            }
        }
    }
}

pub fn parse_condition<A>(text: &str, atoms: &dyn SexprAtoms<A>) -> Result<Condition<A>> {
    let tokens = tokenize(text);
    let mut at = 0;
    let sexpr = read(&tokens, &mut at, text.len())?;
    if let Some((pos, _)) = tokens.get(at) {
        return err(*pos, "trailing input");
    }
    Reader { atoms }.cond(&sexpr)
}

pub fn print_condition<A>(c: &Condition<A>, atoms: &dyn SexprAtoms<A>) -> String {
    let mut out = String::new();
    write_cond(&mut out, c, atoms);
    out
}

fn write_list<A, T>(
    out: &mut String,
    head: &str,
    items: &[T],
    atoms: &dyn SexprAtoms<A>,
    each: fn(&mut String, &T, &dyn SexprAtoms<A>),
) {
    out.push('(');
    out.push_str(head);
    for it in items {
        out.push(' ');
        each(out, it, atoms);
    }
    out.push(')');
}

fn write_cond<A>(out: &mut String, c: &Condition<A>, atoms: &dyn SexprAtoms<A>) {
    match c {
        Condition::Const(b) => out.push_str(if *b { "true" } else { "false" }),
        Condition::Atom(a) => out.push_str(&atoms.name(a)),
        Condition::Not(x) => write_list(out, "not", std::slice::from_ref(&**x), atoms, write_cond),
        Condition::And(xs) => write_list(out, "and", xs, atoms, write_cond),
        Condition::Or(xs) => write_list(out, "or", xs, atoms, write_cond),
        Condition::Implies(a, b) => {
            out.push_str("(implies ");
            write_cond(out, a, atoms);
            out.push(' ');
            write_cond(out, b, atoms);
            out.push(')');
        }
        Condition::Iff(a, b) => {
            out.push_str("(iff ");
            write_cond(out, a, atoms);
            out.push(' ');
            write_cond(out, b, atoms);
            out.push(')');
        }
        Condition::Cmp(op, a, b) => {
            out.push('(');
            out.push_str(op.keyword());
            out.push(' ');
            write_term(out, a, atoms);
            out.push(' ');
            write_term(out, b, atoms);
            out.push(')');
        }
    }
}

fn write_term<A>(out: &mut String, t: &Term<A>, atoms: &dyn SexprAtoms<A>) {
    match t {
        Term::Int(v) => out.push_str(&v.to_string()),
        Term::Reg { bits, order } => {
            out.push_str(match order {
                Order::Msb => "(reg_msb",
                Order::Lsb => "(reg_lsb",
            });
            for b in bits {
                out.push(' ');
                match b {
                    Bit::Const(c) => out.push(if *c { '1' } else { '0' }),
                    Bit::Atom(a) => out.push_str(&atoms.name(a)),
                }
            }
            out.push(')');
        }
        Term::Shl(a, k) => {
            out.push_str("(shl ");
            write_term(out, a, atoms);
            out.push(' ');
            write_term(out, k, atoms);
            out.push(')');
        }
        Term::Sub(a, b) => {
            out.push_str("(sub ");
            write_term(out, a, atoms);
            out.push(' ');
            write_term(out, b, atoms);
            out.push(')');
        }
        Term::Pow2(e) => {
            out.push_str("(pow2 ");
            write_term(out, e, atoms);
            out.push(')');
        }
    }
}
