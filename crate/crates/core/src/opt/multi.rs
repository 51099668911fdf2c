//! Removal of target-successive gate groups whose product is the
//! identity and which provably fire all together or not at all.

use std::collections::BTreeSet;

use crate::circuit::{Circuit, GateKind, Instruction, OpKind, QubitId};
use crate::cond::{Condition, SatResult, Var};
use crate::error::Result;
use crate::linalg::{gate_matrix, sequence_matrix, Matrix};

use super::single::PassRun;
use super::walk::Walker;
use super::{without, PassConfig, Reason, RemovalLog};

/// Widest joint support on which commutation is decided by matrices.
const MAX_COMMUTE_QUBITS: usize = 3;

fn touches(ins: &Instruction, qs: &[QubitId]) -> bool {
    ins.qubits().iter().any(|q| qs.contains(q))
}

/// Exact commutation test; `false` when undecided.
fn commute(a: &Instruction, b: &Instruction) -> bool {
    if !a.is_gate() || !b.is_gate() {
        return false;
    }
    let qa = a.qubits();
    let qb = b.qubits();
    let shared: Vec<QubitId> = qa.iter().filter(|q| qb.contains(q)).copied().collect();
    if shared.is_empty() {
        return true;
    }
    // Both gates are diagonal on qubits they only use as controls.
    if shared
        .iter()
        .all(|q| a.controls.contains(q) && b.controls.contains(q))
    {
        return true;
    }
    let support: BTreeSet<QubitId> = qa.into_iter().chain(qb).collect();
    if support.len() > MAX_COMMUTE_QUBITS {
        return false;
    }
    let support: Vec<QubitId> = support.into_iter().collect();
    let (Some(ma), Some(mb)) = (
        sequence_matrix([a], &support),
        sequence_matrix([b], &support),
    ) else {
        return false;
    };
    ma.commutes_with(&mb, 1e-10)
}

fn product_is_identity(members: &[&Instruction]) -> bool {
    let kinds: Vec<GateKind> = members.iter().filter_map(|m| m.gate_kind()).collect();
    let dim = gate_matrix(kinds[0]).dim;
    let mut m = Matrix::identity(dim);
    for k in kinds {
        m = gate_matrix(k).mul(&m);
    }
    if members.iter().any(|i| !i.controls.is_empty()) {
        m.is_identity(1e-10)
    } else {
        m.is_identity_up_to_phase(1e-10)
    }
}

/// Candidate groups starting at `start`: prefixes of the greedy chain of
/// same-target gates, then pairs whose intervening gates on the targets
/// all commute with both ends.
fn candidates(c: &Circuit, start: usize, removed: &[bool], window: usize) -> Vec<Vec<usize>> {
    let first = &c.instructions[start];
    let targets = &first.targets;
    let end = c
        .instructions
        .len()
        .min(start.saturating_add(window).saturating_add(1));
    let touching: Vec<usize> = (start + 1..end)
        .filter(|&j| !removed[j] && touches(&c.instructions[j], targets))
        .collect();
    let same_target =
        |j: usize| c.instructions[j].is_gate() && c.instructions[j].targets == *targets;

    let mut out = Vec::new();
    let mut members = vec![start];
    let mut between: Vec<usize> = Vec::new();
    for &j in &touching {
        let ins = &c.instructions[j];
        if same_target(j) && between.iter().all(|&b| commute(&c.instructions[b], ins)) {
            members.push(j);
            out.push(members.clone());
        } else if members.iter().all(|&m| commute(&c.instructions[m], ins)) {
            between.push(j);
        } else {
            break;
        }
    }

    for (k, &j) in touching.iter().enumerate() {
        if k > 0 && !commute(first, &c.instructions[touching[k - 1]]) {
            break;
        }
        if !same_target(j) {
            continue;
        }
        let last = &c.instructions[j];
        if touching[..k]
            .iter()
            .all(|&b| commute(last, &c.instructions[b]))
        {
            let pair = vec![start, j];
            if !out.contains(&pair) {
                out.push(pair);
            }
        }
    }
    out
}

fn fires_all_or_none(w: &mut Walker, ctrls: &[Condition<Var>]) -> Result<SatResult> {
    let some = Condition::or(ctrls.to_vec());
    let not_all = Condition::or(ctrls.iter().cloned().map(Condition::not).collect());
    w.check(&Condition::and(vec![some, not_all]))
}

fn once(c: &Circuit, cfg: &PassConfig) -> Result<PassRun> {
    let mut w = Walker::new(cfg);
    let mut ctrl_at: Vec<Option<Condition<Var>>> = Vec::with_capacity(c.instructions.len());
    for ins in &c.instructions {
        match ins.op {
            OpKind::Gate(kind) => {
                ctrl_at.push(Some(w.state.ctrls_one(&ins.controls)?));
                w.gate(kind, &ins.controls, &ins.targets)?;
            }
            _ => {
                ctrl_at.push(None);
                w.non_gate(ins)?;
            }
        }
    }
    let mut log = RemovalLog::default();
    let mut removed = vec![false; c.instructions.len()];
    let mut group = 0;
    for start in 0..c.instructions.len() {
        if removed[start] || !c.instructions[start].is_gate() {
            continue;
        }
        for g in candidates(c, start, &removed, cfg.window.max(1)) {
            if g.iter().any(|&i| removed[i]) {
                continue;
            }
            let instrs: Vec<&Instruction> = g.iter().map(|&i| &c.instructions[i]).collect();
            if !product_is_identity(&instrs) {
                continue;
            }
            let ctrls: Vec<Condition<Var>> = g
                .iter()
                .map(|&i| ctrl_at[i].clone().expect("gate"))
                .collect();
            match fires_all_or_none(&mut w, &ctrls)? {
                SatResult::Unsat => {
                    for &i in &g {
                        removed[i] = true;
                        log.push(i, Reason::AllOrNoneGroup, Some(group));
                    }
                    group += 1;
                    break;
                }
                SatResult::Unknown => {
                    log.push(start, Reason::KeptUnknown, None);
                }
                SatResult::Sat(_) => {}
            }
        }
    }
    let circuit = without(c, &log.removed_indices());
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

/// Multi-gate group removal over the whole circuit.
pub fn run_multi_pass(c: &Circuit, cfg: &PassConfig) -> Result<(Circuit, RemovalLog)> {
    let r = run(c, cfg)?;
    Ok((r.circuit, r.log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse;

    const CORRELATED: &str =
        "alloc a\nalloc b\nalloc cc\nalloc tg\nh a\nh b\ncx b cc\nccx a b tg\nx b\nccx a cc tg\n";

    #[test]
    fn correlated_pair_cancels() {
        let (c, log) = run_multi_pass(&parse(CORRELATED).unwrap(), &PassConfig::default()).unwrap();
        assert_eq!(log.removed_indices(), vec![7, 9]);
        assert_eq!(log.entries[0].group, Some(0));
        assert_eq!(c.gate_count(), 4);
    }

    #[test]
    fn independent_controls_are_kept() {
        let src = "alloc a\nalloc b\nalloc tg\nh a\nh b\ncx a tg\ncx b tg\n";
        let (c, log) = run_multi_pass(&parse(src).unwrap(), &PassConfig::default()).unwrap();
        assert_eq!(c.gate_count(), 4);
        assert!(log.removed().next().is_none());
    }

    #[test]
    fn blocking_and_commuting_neighbours() {
        // h on the target does not commute with x; the pair stays.
        let src = "input a\ninput tg\ncx a tg\nh tg\ncx a tg\n";
        let (c, _) = run_multi_pass(&parse(src).unwrap(), &PassConfig::default()).unwrap();
        assert_eq!(c.gate_count(), 3);
        // x on the target commutes with a controlled x on it.
        let src = "input a\ninput tg\ncx a tg\nx tg\ncx a tg\n";
        let (c, _) = run_multi_pass(&parse(src).unwrap(), &PassConfig::default()).unwrap();
        assert_eq!(c.gate_count(), 1);
    }

    #[test]
    fn window_limits_groups() {
        let src = "input a\ninput b\ninput tg\ncx a tg\nh b\ns b\nh b\ncx a tg\n";
        let cfg = PassConfig {
            window: 3,
            ..PassConfig::default()
        };
        let (c, _) = run_multi_pass(&parse(src).unwrap(), &cfg).unwrap();
        assert_eq!(c.gate_count(), 5);
        let cfg = PassConfig {
            window: 4,
            ..PassConfig::default()
        };
        let (c, _) = run_multi_pass(&parse(src).unwrap(), &cfg).unwrap();
        assert_eq!(c.gate_count(), 3);
    }
}
