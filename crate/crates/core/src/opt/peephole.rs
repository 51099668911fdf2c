//! Cancellation of adjacent mutually inverse gates.

use std::collections::BTreeSet;

use crate::circuit::{Circuit, GateKind, Instruction};
use crate::error::Result;
use crate::gates::inverse;

use super::{without, Reason, RemovalLog};

fn cancels(a: &Instruction, b: &Instruction) -> bool {
    let (Some(ka), Some(kb)) = (a.gate_kind(), b.gate_kind()) else {
        return false;
    };
    if inverse(ka) != Some(kb) {
        return false;
    }
    let set = |v: &[crate::QubitId]| v.iter().copied().collect::<BTreeSet<_>>();
    if set(&a.controls) != set(&b.controls) {
        return false;
    }
    if ka == GateKind::Swap {
        set(&a.targets) == set(&b.targets)
    } else {
        a.targets == b.targets
    }
}

fn once(c: &Circuit, group: &mut usize) -> (Vec<usize>, RemovalLog) {
    let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); c.num_qubits()];
    let mut log = RemovalLog::default();
    let mut removed = Vec::new();
    for (j, ins) in c.instructions.iter().enumerate() {
        let qs = ins.qubits();
        if ins.is_gate() {
            let top = stacks[qs[0].index()].last().copied();
            if let Some(p) = top {
                let prev = &c.instructions[p];
                let same_wires = qs.iter().all(|q| stacks[q.index()].last() == Some(&p))
                    && prev.qubits().len() == qs.len();
                if same_wires && cancels(prev, ins) {
                    for q in &qs {
                        stacks[q.index()].pop();
                    }
                    log.push(p, Reason::PeepholeCancel, Some(*group));
                    log.push(j, Reason::PeepholeCancel, Some(*group));
                    *group += 1;
                    removed.push(p);
                    removed.push(j);
                    continue;
                }
            }
        }
        for q in qs {
            stacks[q.index()].push(j);
        }
    }
    (removed, log)
}

/// Cancels inverse pairs with nothing between them on any shared wire,
/// repeated until nothing changes.
pub fn run_peephole(c: &Circuit) -> Result<(Circuit, RemovalLog)> {
    c.ensure_valid()?;
    let mut circuit = c.clone();
    let mut origin: Vec<usize> = (0..c.instructions.len()).collect();
    let mut log = RemovalLog::default();
    let mut group = 0;
    loop {
        let (mut removed, l) = once(&circuit, &mut group);
        if removed.is_empty() {
            break;
        }
        for e in l.entries {
            log.push(origin[e.index], e.reason, e.group);
        }
        removed.sort();
        circuit = without(&circuit, &removed);
        origin = origin
            .into_iter()
            .enumerate()
            .filter(|(i, _)| removed.binary_search(i).is_err())
            .map(|(_, o)| o)
            .collect();
    }
    Ok((circuit, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse;

    fn gates_after(src: &str) -> usize {
        run_peephole(&parse(src).unwrap()).unwrap().0.gate_count()
    }

    #[test]
    fn pairs_cancel() {
        assert_eq!(gates_after("input q\nx q\nx q"), 0);
        assert_eq!(gates_after("input a\ninput b\ncx a b\ncx a b"), 0);
        assert_eq!(gates_after("input q\nt q\ntdg q"), 0);
        assert_eq!(gates_after("input q\ns q\ns q"), 2);
    }

    #[test]
    fn nested_pairs_cancel() {
        assert_eq!(gates_after("input a\ninput b\ncx a b\nh a\nh a\ncx a b"), 0);
    }

    #[test]
    fn blocked_by_other_use() {
        assert_eq!(gates_after("input a\ninput b\nx a\ncx a b\nx a"), 3);
        assert_eq!(
            gates_after("input a\ninput b\ncx a b\nassert (eq a b)\ncx a b"),
            2
        );
        assert_eq!(gates_after("input a\ninput b\ncx a b\ncx b a"), 2);
    }
}
