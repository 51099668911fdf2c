use crate::circuit::{Circuit, OpKind};
use crate::error::Result;

use super::{without, Reason, RemovalLog};

/// Removes allocations whose qubit is deallocated without being used.
pub fn elide_alloc_dealloc(c: &Circuit) -> Result<(Circuit, RemovalLog)> {
    c.ensure_valid()?;
    let mut uses: Vec<Vec<usize>> = vec![Vec::new(); c.num_qubits()];
    for (i, ins) in c.instructions.iter().enumerate() {
        for q in ins.qubits() {
            uses[q.index()].push(i);
        }
    }
    let mut log = RemovalLog::default();
    let mut group = 0;
    for u in &uses {
        if let [a, d] = u[..] {
            if c.instructions[a].op == OpKind::Alloc && c.instructions[d].op == OpKind::Dealloc {
                log.push(a, Reason::AllocDeallocPair, Some(group));
                log.push(d, Reason::AllocDeallocPair, Some(group));
                group += 1;
            }
        }
    }
    log.entries.sort_by_key(|e| e.index);
    Ok((without(c, &log.removed_indices()), log))
}
