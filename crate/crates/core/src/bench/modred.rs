//! Modular reduction `b mod N` for `b < 2N`: a comparison into `cmp`
//! followed by a `cmp`-controlled subtraction with a carry qubit `c`.

use crate::circuit::{Circuit, GateKind, Instruction, QubitId};
use crate::cond::{CmpOp, Condition, Order, Term};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModRedParams {
    pub n: usize,
}

impl ModRedParams {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Params(format!("register size {n} < 2")));
        }
        Ok(ModRedParams { n })
    }
}

#[derive(Debug, Clone)]
pub struct ModRedQubits {
    /// Value to reduce, LSB first.
    pub b: Vec<QubitId>,
    /// Modulus, LSB first.
    pub m: Vec<QubitId>,
    pub cmp: QubitId,
    pub carry: QubitId,
}

/// Ripple-carry adder without work qubits: `b += a`, `z ^= carry out`.
/// With `ctrl`, every gate acting on `b` or `z` gains that control, which
/// makes the whole adder controlled (the carry logic on `a` uncomputes).
pub fn takahashi_adder(
    a: &[QubitId],
    b: &[QubitId],
    z: Option<QubitId>,
    ctrl: Option<QubitId>,
) -> Vec<Instruction> {
    let n = a.len();
    let mut out = Vec::new();
    let x = |controls: &[QubitId], t: QubitId| {
        Instruction::gate(GateKind::X, controls.to_vec(), vec![t])
    };
    let ctl = |controls: &[QubitId], t: QubitId| {
        let mut cs: Vec<QubitId> = ctrl.into_iter().collect();
        cs.extend_from_slice(controls);
        Instruction::gate(GateKind::X, cs, vec![t])
    };
    for i in 1..n {
        out.push(ctl(&[a[i]], b[i]));
    }
    if let Some(z) = z {
        out.push(ctl(&[a[n - 1]], z));
    }
    for i in (1..n - 1).rev() {
        out.push(x(&[a[i]], a[i + 1]));
    }
    for i in 0..n - 1 {
        out.push(x(&[b[i], a[i]], a[i + 1]));
    }
    if let Some(z) = z {
        out.push(ctl(&[b[n - 1], a[n - 1]], z));
    }
    for i in (1..n).rev() {
        out.push(ctl(&[a[i]], b[i]));
        out.push(x(&[b[i - 1], a[i - 1]], a[i]));
    }
    for i in 1..n - 1 {
        out.push(x(&[a[i]], a[i + 1]));
    }
    for i in 0..n {
        out.push(ctl(&[a[i]], b[i]));
    }
    out
}

fn reversed(mut v: Vec<Instruction>) -> Vec<Instruction> {
    v.reverse();
    v
}

/// `cmp` ends up holding `N <= b`; the controlled subtraction's two gates
/// on the carry fire together or not at all, since no borrow occurs.
pub fn build_modular_reduce(p: ModRedParams) -> (Circuit, ModRedQubits) {
    let mut c = Circuit::new();
    let b = c.input_register("b", p.n);
    let m = c.input_register("N", p.n);
    let cmp = c.alloc("cmp");
    let carry = c.alloc("c");
    c.append(&reversed(takahashi_adder(&m, &b, Some(cmp), None)));
    c.x(cmp);
    c.append(&takahashi_adder(&m, &b, None, None));
    c.assert(Condition::iff(
        Condition::Atom(cmp),
        Condition::cmp(
            CmpOp::Le,
            Term::reg(m.iter().copied(), Order::Lsb),
            Term::reg(b.iter().copied(), Order::Lsb),
        ),
    ));
    c.append(&reversed(takahashi_adder(&m, &b, Some(carry), Some(cmp))));
    c.dealloc(carry);
    (c, ModRedQubits { b, m, cmp, carry })
}
