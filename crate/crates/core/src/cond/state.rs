use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::circuit::QubitId;
use crate::error::{Error, Result};

use super::blast::Encoder;
use super::expr::Condition;
use super::sat::{Lit, Outcome};
use super::smt2;

pub const DEFAULT_CONFLICT_BUDGET: u64 = 1_000_000;

/// SSA version of a qubit: version 0 is the value at allocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub qubit: QubitId,
    pub version: u32,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.qubit, self.version)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult<A = Var> {
    Sat(BTreeMap<A, bool>),
    Unsat,
    Unknown,
}

impl<A> SatResult<A> {
    pub fn is_unsat(&self) -> bool {
        matches!(self, SatResult::Unsat)
    }

    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }
}

#[derive(Debug)]
struct Frame {
    guard: Lit,
    conditions: Vec<Condition<Var>>,
}

/// Current SSA variable of every live qubit plus a push/pop stack of
/// asserted conditions, backed by an incremental SAT solver.
#[derive(Debug)]
pub struct SymbolicState {
    enc: Encoder<Var>,
    current: HashMap<QubitId, Var>,
    versions: HashMap<QubitId, u32>,
    base: Vec<Condition<Var>>,
    frames: Vec<Frame>,
    budget: u64,
    transcript: Option<smt2::Transcript>,
    pub queries: usize,
    pub unknowns: usize,
}

impl Default for SymbolicState {
    fn default() -> Self {
        Self::new()
    }
}

impl SymbolicState {
    pub fn new() -> Self {
        SymbolicState {
            enc: Encoder::new(),
            current: HashMap::new(),
            versions: HashMap::new(),
            base: Vec::new(),
            frames: Vec::new(),
            budget: DEFAULT_CONFLICT_BUDGET,
            transcript: None,
            queries: 0,
            unknowns: 0,
        }
    }

    pub fn with_budget(budget: u64) -> Self {
        SymbolicState {
            budget,
            ..Self::new()
        }
    }

    /// Starts recording every solver interaction as SMT-LIB2 text.
    pub fn record_smt2(&mut self) {
        self.transcript = Some(smt2::Transcript::default());
    }

    pub fn take_smt2(&mut self) -> Option<String> {
        self.transcript.take().map(|t| t.finish())
    }

    fn bind(&mut self, q: QubitId) -> Result<Var> {
        if self.current.contains_key(&q) || self.versions.contains_key(&q) {
            return Err(Error::Unsupported(format!("qubit {q} allocated twice")));
        }
        let v = Var {
            qubit: q,
            version: 0,
        };
        self.versions.insert(q, 0);
        self.current.insert(q, v);
        Ok(v)
    }

    /// Allocates `q` in |0>.
    pub fn alloc(&mut self, q: QubitId) -> Result<Var> {
        let v = self.bind(q)?;
        self.assert(Condition::not(Condition::Atom(v)))?;
        Ok(v)
    }

    /// Introduces `q` with an unconstrained value.
    pub fn input(&mut self, q: QubitId) -> Result<Var> {
        self.bind(q)
    }

    pub fn kill(&mut self, q: QubitId) -> Result<()> {
        self.current
            .remove(&q)
            .map(|_| ())
            .ok_or(Error::DeadQubit(q.0))
    }

    pub fn is_live(&self, q: QubitId) -> bool {
        self.current.contains_key(&q)
    }

    pub fn current(&self, q: QubitId) -> Result<Var> {
        self.current.get(&q).copied().ok_or(Error::DeadQubit(q.0))
    }

    /// Next SSA version of `q`, which becomes current.
    pub fn fresh(&mut self, q: QubitId) -> Result<Var> {
        if !self.current.contains_key(&q) {
            return Err(Error::DeadQubit(q.0));
        }
        let ver = self.versions.get_mut(&q).expect("live qubit has a version");
        *ver += 1;
        let v = Var {
            qubit: q,
            version: *ver,
        };
        self.current.insert(q, v);
        Ok(v)
    }

    pub fn ctrls_one(&self, controls: &[QubitId]) -> Result<Condition<Var>> {
        let vs = controls
            .iter()
            .map(|&c| self.current(c).map(Condition::Atom))
            .collect::<Result<Vec<_>>>()?;
        Ok(Condition::and(vs))
    }

    /// Rewrites a condition over qubits into one over their current vars.
    pub fn instantiate(&self, c: &Condition<QubitId>) -> Result<Condition<Var>> {
        for q in c.atoms() {
            self.current(q)?;
        }
        Ok(c.map(&mut |q| self.current[q]))
    }

    pub fn push(&mut self) {
        let guard = self.enc.new_guard();
        self.frames.push(Frame {
            guard,
            conditions: Vec::new(),
        });
        if let Some(t) = &mut self.transcript {
            t.push();
        }
    }

    pub fn pop(&mut self) {
        let f = self.frames.pop().expect("pop without matching push");
        self.enc.retire_guard(f.guard);
        if let Some(t) = &mut self.transcript {
            t.pop();
        }
    }

    pub fn depth(&self) -> usize {
        self.frames.len()
    }

    pub fn assert(&mut self, c: Condition<Var>) -> Result<()> {
        if c == Condition::Const(true) {
            return Ok(());
        }
        let guard = self.frames.last().map(|f| f.guard);
        self.enc.assert_under(guard, &c)?;
        if let Some(t) = &mut self.transcript {
            t.assert(&c);
        }
        match self.frames.last_mut() {
            Some(f) => f.conditions.push(c),
            None => self.base.push(c),
        }
        Ok(())
    }

    /// Base assertions followed by one list per open frame.
    pub fn assertion_stack(&self) -> Vec<Vec<Condition<Var>>> {
        std::iter::once(self.base.clone())
            .chain(self.frames.iter().map(|f| f.conditions.clone()))
            .collect()
    }

    /// Decides the stacked assertions together with `extra`.
    pub fn check_sat(&mut self, extra: &Condition<Var>) -> Result<SatResult> {
        self.push();
        let r = self.assert(extra.clone()).map(|_| self.solve_open());
        self.pop();
        r
    }

    fn solve_open(&mut self) -> SatResult {
        self.queries += 1;
        if let Some(t) = &mut self.transcript {
            t.check_sat();
        }
        let guards: Vec<Lit> = self.frames.iter().map(|f| f.guard).collect();
        match self.enc.solve(&guards, self.budget) {
            Outcome::Unsat => SatResult::Unsat,
            Outcome::Unknown => {
                self.unknowns += 1;
                SatResult::Unknown
            }
            Outcome::Sat => {
                let w = self
                    .enc
                    .atoms()
                    .map(|(a, v)| (*a, self.enc.solver.model_value(*v)))
                    .collect();
                SatResult::Sat(w)
            }
        }
    }
}

/// One-shot satisfiability of a conjunction over arbitrary atoms.
pub fn check_conditions<A>(conds: &[Condition<A>], budget: u64) -> Result<SatResult<A>>
where
    A: Clone + Ord + std::hash::Hash,
{
    let mut enc = Encoder::new();
    for c in conds {
        enc.assert_under(None, c)?;
    }
    Ok(match enc.solve(&[], budget) {
        Outcome::Unsat => SatResult::Unsat,
        Outcome::Unknown => SatResult::Unknown,
        Outcome::Sat => {
            let mut w = BTreeMap::new();
            for c in conds {
                for a in c.atoms() {
                    let val = enc
                        .known_atom(&a)
                        .map(|v| enc.solver.model_value(v))
                        .unwrap_or(false);
                    w.insert(a, val);
                }
            }
            SatResult::Sat(w)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cond::{CmpOp, Order, Term};

    fn q(i: u32) -> QubitId {
        QubitId(i)
    }

    #[test]
    fn fresh_versions() {
        let mut s = SymbolicState::new();
        s.alloc(q(0)).unwrap();
        assert_eq!(s.fresh(q(0)).unwrap().version, 1);
        assert_eq!(s.fresh(q(0)).unwrap().version, 2);
        s.kill(q(0)).unwrap();
        assert!(matches!(s.fresh(q(0)), Err(Error::DeadQubit(0))));
    }

    #[test]
    fn ctrls_one_forms() {
        let mut s = SymbolicState::new();
        let a = s.input(q(0)).unwrap();
        let b = s.input(q(1)).unwrap();
        assert_eq!(s.ctrls_one(&[]).unwrap(), Condition::Const(true));
        assert_eq!(s.ctrls_one(&[q(0)]).unwrap(), Condition::Atom(a));
        assert_eq!(
            s.ctrls_one(&[q(0), q(1)]).unwrap(),
            Condition::And(vec![Condition::Atom(a), Condition::Atom(b)])
        );
    }

    #[test]
    fn push_pop_restores() {
        let mut s = SymbolicState::new();
        let a = s.input(q(0)).unwrap();
        let before = s.assertion_stack();
        s.push();
        s.assert(Condition::Atom(a)).unwrap();
        assert!(s
            .check_sat(&Condition::not(Condition::Atom(a)))
            .unwrap()
            .is_unsat());
        s.pop();
        assert_eq!(s.assertion_stack(), before);
        assert!(s
            .check_sat(&Condition::not(Condition::Atom(a)))
            .unwrap()
            .is_sat());
    }

    #[test]
    fn equal_pair_witness() {
        let mut s = SymbolicState::new();
        let a = s.input(q(0)).unwrap();
        let b = s.input(q(1)).unwrap();
        s.assert(Condition::iff(Condition::Atom(a), Condition::Atom(b)))
            .unwrap();
        let r = s
            .check_sat(&Condition::and(vec![
                Condition::Atom(a),
                Condition::Atom(b),
            ]))
            .unwrap();
        match r {
            SatResult::Sat(w) => {
                assert!(w[&a] && w[&b]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn first_one_contradiction() {
        let mut s = SymbolicState::new();
        let x: Vec<Var> = (0..4).map(|i| s.input(q(i)).unwrap()).collect();
        let p: Vec<Var> = (4..6).map(|i| s.input(q(i)).unwrap()).collect();
        let pt = Term::reg(p.iter().copied(), Order::Lsb);
        s.assert(Condition::cmp(
            CmpOp::Lt,
            Term::reg(x.iter().copied(), Order::Msb),
            Term::shl(Term::Int(1), Term::sub(Term::Int(4), pt.clone())),
        ))
        .unwrap();
        let extra = Condition::and(vec![
            Condition::cmp(CmpOp::Gt, pt, Term::Int(0)),
            Condition::Atom(x[0]),
        ]);
        assert!(s.check_sat(&extra).unwrap().is_unsat());
    }
}
