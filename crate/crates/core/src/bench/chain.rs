//! CNOT entangling chain and its mapping to a line of qubits.

use crate::circuit::{Circuit, GateKind, Instruction, OpKind, QubitId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct LnnParams {
    pub n: usize,
}

impl LnnParams {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Params(format!("chain length {n} < 2")));
        }
        Ok(LnnParams { n })
    }
}

/// `h q0` followed by `cx q_i q_{i+1}`.
pub fn build_cnot_chain(p: LnnParams) -> Circuit {
    let mut c = Circuit::new();
    let q = c.alloc_register("q", p.n);
    c.h(q[0]);
    for w in q.windows(2) {
        c.cx(w[0], w[1]);
    }
    c
}

fn chain_qubits(c: &Circuit, n: usize) -> Option<Vec<QubitId>> {
    let ins = &c.instructions;
    if ins.len() != 2 * n || c.num_qubits() != n {
        return None;
    }
    let q: Vec<QubitId> = (0..n as u32).map(QubitId).collect();
    let allocs_ok = (0..n).all(|i| ins[i].op == OpKind::Alloc && ins[i].targets == [q[i]]);
    let h_ok = ins[n] == Instruction::gate(GateKind::H, vec![], vec![q[0]]);
    let cx_ok = (0..n - 1)
        .all(|i| ins[n + 1 + i] == Instruction::gate(GateKind::X, vec![q[i]], vec![q[i + 1]]));
    (allocs_ok && h_ok && cx_ok).then_some(q)
}

/// Routes a chain onto a line where each interaction first passes through
/// a swap network (three CNOTs) and a leftover partial swap CNOT, giving
/// `4(n-2)` extra CNOTs and DAG depth `5n-8`.
pub fn map_lnn(c: &Circuit, p: LnnParams) -> Result<Circuit> {
    let Some(q) = chain_qubits(c, p.n) else {
        return Err(Error::Params(
            "map_lnn expects a circuit from build_cnot_chain".into(),
        ));
    };
    let mut out = c.with_instructions(c.instructions[..p.n + 1].to_vec());
    out.cx(q[0], q[1]);
    for i in 1..p.n - 1 {
        out.cx(q[i], q[i - 1]);
        out.cx(q[i - 1], q[i]);
        out.cx(q[i], q[i - 1]);
        out.cx(q[i + 1], q[i]);
        out.cx(q[i], q[i + 1]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::Metrics;

    #[test]
    fn counts_and_depths() {
        for n in [2, 3, 4, 8] {
            let p = LnnParams::new(n).unwrap();
            let chain = build_cnot_chain(p);
            let m = Metrics::of(&chain).unwrap();
            assert_eq!(m.dag_depth, n);
            let mapped = map_lnn(&chain, p).unwrap();
            let m = Metrics::of(&mapped).unwrap();
            assert_eq!(m.dag_depth, 5 * n - 8);
            assert_eq!(m.gate_counts["cx"], n - 1 + 4 * (n - 2));
        }
        assert!(LnnParams::new(1).is_err());
    }

    #[test]
    fn rejects_other_circuits() {
        let p = LnnParams::new(3).unwrap();
        let mut c = build_cnot_chain(p);
        c.x(QubitId(0));
        assert!(map_lnn(&c, p).is_err());
    }
}
