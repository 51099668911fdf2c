//! Removal of individual gates that provably act as the identity, with
//! stripping of controls that are provably 1.

use crate::circuit::{Circuit, Instruction};
use crate::cond::{Condition, SatResult};
use crate::error::Result;
use crate::gates::spec;

use super::walk::Walker;
use super::{without, PassConfig, Reason, RemovalLog};

pub(crate) struct PassRun {
    pub circuit: Circuit,
    pub log: RemovalLog,
    pub smt2: Option<String>,
    pub queries: usize,
}

fn once(c: &Circuit, cfg: &PassConfig) -> Result<PassRun> {
    let mut w = Walker::new(cfg);
    let mut log = RemovalLog::default();
    let mut out: Vec<Instruction> = Vec::with_capacity(c.instructions.len());
    for (i, ins) in c.instructions.iter().enumerate() {
        let Some(kind) = ins.gate_kind() else {
            w.non_gate(ins)?;
            out.push(ins.clone());
            continue;
        };
        let mut controls = Vec::with_capacity(ins.controls.len());
        let mut stripped = false;
        for &q in &ins.controls {
            let v = w.state.current(q)?;
            if w.check(&Condition::not(Condition::Atom(v)))?.is_unsat() {
                stripped = true;
            } else {
                controls.push(q);
            }
        }
        let ctrl = w.state.ctrls_one(&controls)?;
        let pre = ins
            .targets
            .iter()
            .map(|&t| w.state.current(t))
            .collect::<Result<Vec<_>>>()?;
        let triv = spec(kind).trivial_if(&pre)?;
        let verdict = w.check(&Condition::and(vec![ctrl.clone(), Condition::not(triv)]))?;
        match verdict {
            SatResult::Unsat => {
                let reason = if !controls.is_empty() && w.check(&ctrl)?.is_unsat() {
                    Reason::ZeroControl
                } else {
                    Reason::TrivialSingle
                };
                log.push(i, reason, None);
            }
            SatResult::Unknown => log.push(i, Reason::KeptUnknown, None),
            SatResult::Sat(_) => {}
        }
        if stripped && !verdict.is_unsat() {
            log.push(i, Reason::ControlStripped, None);
        }
        w.gate(kind, &controls, &ins.targets)?;
        out.push(Instruction::gate(kind, controls, ins.targets.clone()));
    }
    let stripped = c.with_instructions(out);
    let circuit = without(&stripped, &log.removed_indices());
    Ok(PassRun {
        circuit,
        log,
        smt2: w.state.take_smt2(),
        queries: w.state.queries,
    })
}

pub(crate) fn run(c: &Circuit, cfg: &PassConfig) -> Result<PassRun> {
    c.ensure_valid()?;
    super::fixpoint(c, cfg, once)
}

/// Single-gate triviality removal over the whole circuit.
pub fn run_single_pass(c: &Circuit, cfg: &PassConfig) -> Result<(Circuit, RemovalLog)> {
    let r = run(c, cfg)?;
    Ok((r.circuit, r.log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse;

    fn single(src: &str) -> (Circuit, RemovalLog) {
        run_single_pass(&parse(src).unwrap(), &PassConfig::default()).unwrap()
    }

    #[test]
    fn bell_swap_is_removed() {
        let (c, log) = single("alloc q0\nalloc q1\nh q0\ncx q0 q1\nswap q0 q1");
        assert_eq!(c.gate_count(), 2);
        assert_eq!(log.removed_indices(), vec![4]);
        assert_eq!(log.entries[0].reason, Reason::TrivialSingle);
    }

    #[test]
    fn zero_control_and_stripping() {
        let (c, log) = single("alloc c\ninput tg\ncx c tg");
        assert_eq!(c.gate_count(), 0);
        assert_eq!(log.entries[0].reason, Reason::ZeroControl);
        let (c, log) = single("alloc c\ninput tg\nx c\ncx c tg");
        assert_eq!(c.instructions[3].controls, vec![]);
        assert_eq!(log.count(Reason::ControlStripped), 1);
    }

    #[test]
    fn superposed_control_is_kept() {
        let (c, log) = single("alloc c\ninput tg\nh c\ncx c tg");
        assert_eq!(c.gate_count(), 2);
        assert!(log.entries.is_empty());
    }
}
