//! Symbolic execution shared by the Hoare passes.

use crate::circuit::{GateKind, Instruction, OpKind, QubitId};
use crate::cond::{Condition, SatResult, SymbolicState, Var};
use crate::error::Result;
use crate::gates::{spec, Post};

use super::PassConfig;

pub(crate) struct Walker {
    pub state: SymbolicState,
}

impl Walker {
    pub fn new(cfg: &PassConfig) -> Self {
        let mut state = SymbolicState::with_budget(cfg.solver_budget);
        if cfg.record_smt2 {
            state.record_smt2();
        }
        Walker { state }
    }

    /// Applies a non-gate instruction.
    pub fn non_gate(&mut self, ins: &Instruction) -> Result<()> {
        match &ins.op {
            OpKind::Alloc => {
                self.state.alloc(ins.targets[0])?;
            }
            OpKind::Input => {
                self.state.input(ins.targets[0])?;
            }
            OpKind::Dealloc => self.state.kill(ins.targets[0])?,
            OpKind::Measure => {
                self.state.fresh(ins.targets[0])?;
            }
            OpKind::Assert(c) => {
                let c = self.state.instantiate(c)?;
                self.state.assert(c)?;
            }
            OpKind::Gate(_) => unreachable!("gates go through `gate`"),
        }
        Ok(())
    }

    /// Asserts the gate's postconditions and advances target versions.
    pub fn gate(
        &mut self,
        kind: GateKind,
        controls: &[QubitId],
        targets: &[QubitId],
    ) -> Result<()> {
        let ctrl = self.state.ctrls_one(controls)?;
        let pre = targets
            .iter()
            .map(|&t| self.state.current(t))
            .collect::<Result<Vec<_>>>()?;
        let post = targets
            .iter()
            .map(|&t| self.state.fresh(t))
            .collect::<Result<Vec<_>>>()?;
        let controlled = !controls.is_empty();
        if let Post::Relation(r) = spec(kind).effective_postconditions(controlled, &pre, &post)? {
            let c = if controlled {
                Condition::implies(ctrl.clone(), r)
            } else {
                r
            };
            self.state.assert(c)?;
        }
        if controlled {
            for (a, b) in pre.iter().zip(&post) {
                self.state.assert(Condition::implies(
                    Condition::not(ctrl.clone()),
                    Condition::iff(Condition::Atom(*b), Condition::Atom(*a)),
                ))?;
            }
        }
        Ok(())
    }

    pub fn check(&mut self, c: &Condition<Var>) -> Result<SatResult> {
        self.state.check_sat(c)
    }
}
