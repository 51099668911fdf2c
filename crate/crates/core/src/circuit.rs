//! Circuit intermediate representation.
//!
//! A circuit is a flat instruction list. Qubit ids are handed out in
//! allocation order and are never reused, so a `QubitId` names exactly one
//! allocation event.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cond::Condition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QubitId(pub u32);

impl QubitId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

/// Base (uncontrolled) gates. Controls are carried by the instruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    H,
    S,
    T,
    Tdg,
    Swap,
}

impl GateKind {
    pub const ALL: [GateKind; 6] = [
        GateKind::X,
        GateKind::H,
        GateKind::S,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Swap,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Swap => 2,
            _ => 1,
        }
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Swap => "swap",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OpKind {
    /// Fresh qubit in |0>.
    Alloc,
    /// Fresh qubit carrying an external computational-basis input.
    Input,
    Dealloc,
    Measure,
    Gate(GateKind),
    Assert(Condition<QubitId>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instruction {
    pub op: OpKind,
    pub controls: Vec<QubitId>,
    pub targets: Vec<QubitId>,
}

impl Instruction {
    pub fn gate(kind: GateKind, controls: Vec<QubitId>, targets: Vec<QubitId>) -> Self {
        Instruction {
            op: OpKind::Gate(kind),
            controls,
            targets,
        }
    }

    pub fn is_gate(&self) -> bool {
        matches!(self.op, OpKind::Gate(_))
    }

    pub fn gate_kind(&self) -> Option<GateKind> {
        match self.op {
            OpKind::Gate(g) => Some(g),
            _ => None,
        }
    }

    /// All qubits referenced, controls first.
    pub fn qubits(&self) -> Vec<QubitId> {
        match &self.op {
            OpKind::Assert(c) => c.atoms(),
            _ => self
                .controls
                .iter()
                .chain(self.targets.iter())
                .copied()
                .collect(),
        }
    }

    /// Display name used in gate-count tables: `x` with one control is
    /// `cx`, with two `ccx`, with more `mcx`, and likewise for `swap`.
    pub fn name(&self) -> String {
        match &self.op {
            OpKind::Alloc => "alloc".into(),
            OpKind::Input => "input".into(),
            OpKind::Dealloc => "dealloc".into(),
            OpKind::Measure => "measure".into(),
            OpKind::Assert(_) => "assert".into(),
            OpKind::Gate(g) => match (g, self.controls.len()) {
                (_, 0) => g.mnemonic().into(),
                (GateKind::X, 1) => "cx".into(),
                (GateKind::X, 2) => "ccx".into(),
                (GateKind::X, _) => "mcx".into(),
                (GateKind::Swap, 1) => "cswap".into(),
                (GateKind::Swap, _) => "mcswap".into(),
                (g, k) => format!("c{}{}", k, g.mnemonic()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    UnknownQubit(QubitId),
    UseBeforeAlloc(QubitId),
    UseAfterDealloc(QubitId),
    DoubleAlloc(QubitId),
    Overlap(QubitId),
    Duplicate(QubitId),
    Arity { expected: usize, got: usize },
    ControlsOnNonGate,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Violation {
    pub index: usize,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = self.index;
        match &self.rule {
            Rule::UnknownQubit(q) => write!(f, "unknown-qubit {q} @ {i}"),
            Rule::UseBeforeAlloc(q) => write!(f, "use-before-alloc {q} @ {i}"),
            Rule::UseAfterDealloc(q) => write!(f, "use-after-dealloc {q} @ {i}"),
            Rule::DoubleAlloc(q) => write!(f, "double-alloc {q} @ {i}"),
            Rule::Overlap(q) => write!(f, "overlap {q} @ {i}"),
            Rule::Duplicate(q) => write!(f, "duplicate {q} @ {i}"),
            Rule::Arity { expected, got } => {
                write!(f, "arity (expected {expected}, got {got}) @ {i}")
            }
            Rule::ControlsOnNonGate => write!(f, "controls-on-non-gate @ {i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Life {
    Unborn,
    Live,
    Dead,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Circuit {
    pub instructions: Vec<Instruction>,
    /// Display name per qubit id.
    pub names: Vec<String>,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_qubits(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, q: QubitId) -> &str {
        &self.names[q.index()]
    }

    pub fn qubit_by_name(&self, name: &str) -> Option<QubitId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| QubitId(i as u32))
    }

    /// Registers a new qubit id without emitting an instruction.
    pub fn declare(&mut self, name: impl Into<String>) -> QubitId {
        let id = QubitId(self.names.len() as u32);
        self.names.push(name.into());
        id
    }

    pub fn push(&mut self, instr: Instruction) {
        self.instructions.push(instr);
    }

    pub fn alloc(&mut self, name: impl Into<String>) -> QubitId {
        let q = self.declare(name);
        self.push(Instruction {
            op: OpKind::Alloc,
            controls: vec![],
            targets: vec![q],
        });
        q
    }

    pub fn alloc_register(&mut self, prefix: &str, n: usize) -> Vec<QubitId> {
        (0..n).map(|i| self.alloc(format!("{prefix}{i}"))).collect()
    }

    pub fn input(&mut self, name: impl Into<String>) -> QubitId {
        let q = self.declare(name);
        self.push(Instruction {
            op: OpKind::Input,
            controls: vec![],
            targets: vec![q],
        });
        q
    }

    pub fn input_register(&mut self, prefix: &str, n: usize) -> Vec<QubitId> {
        (0..n).map(|i| self.input(format!("{prefix}{i}"))).collect()
    }

    pub fn dealloc(&mut self, q: QubitId) {
        self.push(Instruction {
            op: OpKind::Dealloc,
            controls: vec![],
            targets: vec![q],
        });
    }

    pub fn measure(&mut self, q: QubitId) {
        self.push(Instruction {
            op: OpKind::Measure,
            controls: vec![],
            targets: vec![q],
        });
    }

    pub fn assert(&mut self, cond: Condition<QubitId>) {
        self.push(Instruction {
            op: OpKind::Assert(cond),
            controls: vec![],
            targets: vec![],
        });
    }

    pub fn gate(&mut self, kind: GateKind, controls: &[QubitId], targets: &[QubitId]) {
        self.push(Instruction::gate(kind, controls.to_vec(), targets.to_vec()));
    }

    pub fn x(&mut self, q: QubitId) {
        self.gate(GateKind::X, &[], &[q]);
    }

    pub fn h(&mut self, q: QubitId) {
        self.gate(GateKind::H, &[], &[q]);
    }

    pub fn cx(&mut self, c: QubitId, t: QubitId) {
        self.gate(GateKind::X, &[c], &[t]);
    }

    pub fn ccx(&mut self, c1: QubitId, c2: QubitId, t: QubitId) {
        self.gate(GateKind::X, &[c1, c2], &[t]);
    }

    pub fn mcx(&mut self, controls: &[QubitId], t: QubitId) {
        self.gate(GateKind::X, controls, &[t]);
    }

    pub fn swap(&mut self, a: QubitId, b: QubitId) {
        self.gate(GateKind::Swap, &[], &[a, b]);
    }

    pub fn cswap(&mut self, c: QubitId, a: QubitId, b: QubitId) {
        self.gate(GateKind::Swap, &[c], &[a, b]);
    }

    pub fn append(&mut self, other: &[Instruction]) {
        self.instructions.extend_from_slice(other);
    }

    pub fn gate_count(&self) -> usize {
        self.instructions.iter().filter(|i| i.is_gate()).count()
    }

    /// Qubits declared through `input` lines, in id order.
    pub fn inputs(&self) -> Vec<QubitId> {
        self.instructions
            .iter()
            .filter(|i| i.op == OpKind::Input)
            .map(|i| i.targets[0])
            .collect()
    }

    /// Qubits still live after the last instruction, in id order.
    pub fn outputs(&self) -> Vec<QubitId> {
        let mut live = vec![false; self.num_qubits()];
        for ins in &self.instructions {
            match ins.op {
                OpKind::Alloc | OpKind::Input => {
                    for q in &ins.targets {
                        if let Some(l) = live.get_mut(q.index()) {
                            *l = true;
                        }
                    }
                }
                OpKind::Dealloc => {
                    for q in &ins.targets {
                        if let Some(l) = live.get_mut(q.index()) {
                            *l = false;
                        }
                    }
                }
                _ => {}
            }
        }
        live.iter()
            .enumerate()
            .filter(|(_, l)| **l)
            .map(|(i, _)| QubitId(i as u32))
            .collect()
    }

    /// Checks every structural invariant; an empty list means well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut life = vec![Life::Unborn; self.num_qubits()];
        for (index, ins) in self.instructions.iter().enumerate() {
            let mut bad = |rule| out.push(Violation { index, rule });
            if !ins.is_gate() && !ins.controls.is_empty() {
                bad(Rule::ControlsOnNonGate);
            }
            let expected = match &ins.op {
                OpKind::Gate(g) => Some(g.arity()),
                OpKind::Assert(_) => Some(0),
                _ => Some(1),
            };
            if let Some(expected) = expected {
                if ins.targets.len() != expected {
                    bad(Rule::Arity {
                        expected,
                        got: ins.targets.len(),
                    });
                }
            }
            let mut seen = HashSet::new();
            for t in &ins.targets {
                if !seen.insert(*t) {
                    bad(Rule::Duplicate(*t));
                }
            }
            let mut seen_c = HashSet::new();
            for c in &ins.controls {
                if ins.targets.contains(c) {
                    bad(Rule::Overlap(*c));
                } else if !seen_c.insert(*c) {
                    bad(Rule::Duplicate(*c));
                }
            }
            for q in ins.qubits() {
                if q.index() >= life.len() {
                    bad(Rule::UnknownQubit(q));
                    continue;
                }
                let birth = matches!(ins.op, OpKind::Alloc | OpKind::Input);
                match (life[q.index()], birth) {
                    (Life::Unborn, true) => life[q.index()] = Life::Live,
                    (Life::Unborn, false) => bad(Rule::UseBeforeAlloc(q)),
                    (Life::Live, true) | (Life::Dead, true) => bad(Rule::DoubleAlloc(q)),
                    (Life::Live, false) => {
                        if ins.op == OpKind::Dealloc {
                            life[q.index()] = Life::Dead;
                        }
                    }
                    (Life::Dead, false) => bad(Rule::UseAfterDealloc(q)),
                }
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> crate::Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(crate::Error::Invalid(v))
        }
    }

    /// Same qubit table, different instruction list.
    pub fn with_instructions(&self, instructions: Vec<Instruction>) -> Circuit {
        Circuit {
            instructions,
            names: self.names.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> Circuit {
        let mut c = Circuit::new();
        let a = c.alloc("q0");
        let b = c.alloc("q1");
        c.h(a);
        c.cx(a, b);
        c.measure(a);
        c.measure(b);
        c.dealloc(a);
        c.dealloc(b);
        c
    }

    #[test]
    fn bell_is_valid() {
        assert!(bell().validate().is_empty());
    }

    #[test]
    fn use_after_dealloc_is_flagged() {
        let mut c = bell();
        let a = QubitId(0);
        c.x(a);
        let v = c.validate();
        assert_eq!(
            v,
            vec![Violation {
                index: 8,
                rule: Rule::UseAfterDealloc(a)
            }]
        );
    }

    #[test]
    fn overlap_is_flagged() {
        let mut c = Circuit::new();
        let a = c.alloc("a");
        c.cx(a, a);
        assert_eq!(
            c.validate(),
            vec![Violation {
                index: 1,
                rule: Rule::Overlap(a)
            }]
        );
    }

    #[test]
    fn use_before_alloc_and_double_alloc() {
        let mut c = Circuit::new();
        let a = c.declare("a");
        c.x(a);
        c.push(Instruction {
            op: OpKind::Alloc,
            controls: vec![],
            targets: vec![a],
        });
        c.push(Instruction {
            op: OpKind::Alloc,
            controls: vec![],
            targets: vec![a],
        });
        let rules: Vec<_> = c.validate().into_iter().map(|v| v.rule).collect();
        assert_eq!(rules, vec![Rule::UseBeforeAlloc(a), Rule::DoubleAlloc(a)]);
    }

    #[test]
    fn names_follow_control_count() {
        let q: Vec<_> = (0..4).map(QubitId).collect();
        let mk = |k| Instruction::gate(GateKind::X, q[..k].to_vec(), vec![q[3]]);
        assert_eq!(mk(0).name(), "x");
        assert_eq!(mk(1).name(), "cx");
        assert_eq!(mk(2).name(), "ccx");
        assert_eq!(mk(3).name(), "mcx");
    }
}
