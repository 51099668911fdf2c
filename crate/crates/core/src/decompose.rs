//! Lowering to the gate set {cx, x, h, s, t, tdg}.

use std::collections::HashSet;

use crate::circuit::{Circuit, GateKind, Instruction, OpKind, QubitId};
use crate::error::{Error, Result};

fn g(kind: GateKind, controls: &[QubitId], t: QubitId) -> Instruction {
    Instruction::gate(kind, controls.to_vec(), vec![t])
}

fn cx(c: QubitId, t: QubitId) -> Instruction {
    g(GateKind::X, &[c], t)
}

fn life(op: OpKind, q: QubitId) -> Instruction {
    Instruction {
        op,
        controls: vec![],
        targets: vec![q],
    }
}

/// Standard 7-T Toffoli network.
pub fn toffoli(a: QubitId, b: QubitId, c: QubitId) -> Vec<Instruction> {
    use GateKind::*;
    vec![
        g(H, &[], c),
        cx(b, c),
        g(Tdg, &[], c),
        cx(a, c),
        g(T, &[], c),
        cx(b, c),
        g(Tdg, &[], c),
        cx(a, c),
        g(T, &[], b),
        g(T, &[], c),
        g(H, &[], c),
        cx(a, b),
        g(T, &[], a),
        g(Tdg, &[], b),
        cx(a, b),
    ]
}

/// Multi-controlled X built from Toffolis using `k - 2` borrowed qubits in
/// arbitrary states, which are returned unchanged.
pub fn mcx_borrowed(
    controls: &[QubitId],
    target: QubitId,
    borrowed: &[QubitId],
) -> Vec<Instruction> {
    let k = controls.len();
    let ccx = |a: QubitId, b: QubitId, t: QubitId| g(GateKind::X, &[a, b], t);
    match k {
        0 => return vec![g(GateKind::X, &[], target)],
        1 | 2 => return vec![g(GateKind::X, controls, target)],
        _ => {}
    }
    assert!(borrowed.len() >= k - 2, "need {} borrowed qubits", k - 2);
    let (c, a) = (controls, borrowed);
    let half = |with_target: bool| {
        let mut seq = Vec::new();
        if with_target {
            seq.push(ccx(c[k - 1], a[k - 3], target));
        }
        for i in (1..k - 2).rev() {
            seq.push(ccx(c[i + 1], a[i - 1], a[i]));
        }
        seq.push(ccx(c[0], c[1], a[0]));
        for i in 1..k - 2 {
            seq.push(ccx(c[i + 1], a[i - 1], a[i]));
        }
        if with_target {
            seq.push(ccx(c[k - 1], a[k - 3], target));
        }
        seq
    };
    let mut out = half(true);
    out.extend(half(false));
    out
}

/// Lowers one gate instruction; `fresh` supplies clean work qubits, which
/// are allocated and deallocated inside the returned sequence.
pub fn decompose_instruction(
    ins: &Instruction,
    fresh: &mut dyn FnMut() -> QubitId,
) -> Result<Vec<Instruction>> {
    let Some(kind) = ins.gate_kind() else {
        return Ok(vec![ins.clone()]);
    };
    let cs = &ins.controls;
    Ok(match (kind, cs.len()) {
        (_, 0) if kind != GateKind::Swap => vec![ins.clone()],
        (GateKind::X, 1) => vec![ins.clone()],
        (GateKind::X, 2) => toffoli(cs[0], cs[1], ins.targets[0]),
        (GateKind::X, k) => {
            let t = ins.targets[0];
            let anc: Vec<QubitId> = (0..k - 2).map(|_| fresh()).collect();
            let mut ladder = vec![(cs[0], cs[1], anc[0])];
            for i in 1..k - 2 {
                ladder.push((cs[i + 1], anc[i - 1], anc[i]));
            }
            let mut out: Vec<Instruction> = anc.iter().map(|&a| life(OpKind::Alloc, a)).collect();
            for &(a, b, c) in &ladder {
                out.extend(toffoli(a, b, c));
            }
            out.extend(toffoli(cs[k - 1], anc[k - 3], t));
            for &(a, b, c) in ladder.iter().rev() {
                out.extend(toffoli(a, b, c));
            }
            out.extend(anc.iter().map(|&a| life(OpKind::Dealloc, a)));
            out
        }
        (GateKind::Swap, 0) => {
            let (a, b) = (ins.targets[0], ins.targets[1]);
            vec![cx(a, b), cx(b, a), cx(a, b)]
        }
        (GateKind::Swap, _) => {
            let (a, b) = (ins.targets[0], ins.targets[1]);
            let mut ctrl = cs.clone();
            ctrl.push(a);
            let mut out = vec![cx(b, a)];
            out.extend(decompose_instruction(
                &Instruction::gate(GateKind::X, ctrl, vec![b]),
                fresh,
            )?);
            out.push(cx(b, a));
            out
        }
        (k, _) => {
            return Err(Error::Unsupported(format!(
                "controlled {} has no decomposition into the target gate set",
                k.mnemonic()
            )))
        }
    })
}

/// True iff every gate is one of x, h, s, t, tdg or cx.
pub fn in_gate_set(c: &Circuit) -> bool {
    c.instructions.iter().all(|i| match i.gate_kind() {
        None => true,
        Some(GateKind::X) => i.controls.len() <= 1,
        Some(GateKind::Swap) => false,
        Some(_) => i.controls.is_empty(),
    })
}

/// Lowers every gate of the circuit.
pub fn decompose(c: &Circuit) -> Result<Circuit> {
    let mut out = c.with_instructions(Vec::new());
    let mut taken: HashSet<String> = c.names.iter().cloned().collect();
    let mut counter = 0usize;
    for ins in &c.instructions {
        let mut fresh = || {
            let name = loop {
                let n = format!("anc{counter}");
                counter += 1;
                if taken.insert(n.clone()) {
                    break n;
                }
            };
            out.declare(name)
        };
        let seq = decompose_instruction(ins, &mut fresh)?;
        out.instructions.extend(seq);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{sequence_matrix, Matrix};

    fn q(i: u32) -> QubitId {
        QubitId(i)
    }

    fn check(ins: Instruction, n: u32) {
        let support: Vec<QubitId> = (0..n).map(q).collect();
        let mut next = n;
        let mut fresh = || {
            next += 1;
            q(next - 1)
        };
        let seq = decompose_instruction(&ins, &mut fresh).unwrap();
        assert!(seq.iter().all(|i| match i.gate_kind() {
            Some(GateKind::X) => i.controls.len() <= 1,
            Some(GateKind::Swap) => false,
            Some(_) => i.controls.is_empty(),
            None => true,
        }));
        let want = sequence_matrix([&ins], &support).unwrap();
        if next == n {
            let got = sequence_matrix(seq.iter(), &support).unwrap();
            assert!(got.eq_up_to_phase(&want, 1e-10), "{}", ins.name());
        } else {
            // With work qubits: compare on the subspace where they start in |0>.
            let all: Vec<QubitId> = (0..next).map(q).collect();
            let gates: Vec<&Instruction> = seq.iter().filter(|i| i.is_gate()).collect();
            let got = sequence_matrix(gates, &all).unwrap();
            let d = want.dim;
            let mut restricted = Matrix::zeros(d);
            for col in 0..d {
                for row in 0..got.dim {
                    let v = got.get(row, col);
                    if v.norm() > 1e-12 {
                        assert!(row < d, "work qubit left dirty");
                        restricted.set(row, col, v);
                    }
                }
            }
            assert!(restricted.eq_up_to_phase(&want, 1e-10), "{}", ins.name());
        }
    }

    #[test]
    fn toffoli_matches_unitary() {
        check(
            Instruction::gate(GateKind::X, vec![q(0), q(1)], vec![q(2)]),
            3,
        );
        check(
            Instruction::gate(GateKind::X, vec![q(2), q(0)], vec![q(1)]),
            3,
        );
    }

    #[test]
    fn fredkin_and_swap() {
        check(
            Instruction::gate(GateKind::Swap, vec![q(0)], vec![q(1), q(2)]),
            3,
        );
        check(
            Instruction::gate(GateKind::Swap, vec![], vec![q(0), q(1)]),
            2,
        );
    }

    #[test]
    fn mcx_ladders() {
        check(
            Instruction::gate(GateKind::X, vec![q(0), q(1), q(2)], vec![q(3)]),
            4,
        );
        check(
            Instruction::gate(GateKind::X, vec![q(3), q(1), q(0), q(4)], vec![q(2)]),
            5,
        );
        check(
            Instruction::gate(GateKind::Swap, vec![q(0), q(1)], vec![q(2), q(3)]),
            4,
        );
    }

    #[test]
    fn borrowed_ladder_restores_work_qubits() {
        for k in 3..=6u32 {
            let n = 2 * k - 1;
            let controls: Vec<QubitId> = (0..k).map(q).collect();
            let borrowed: Vec<QubitId> = (k + 1..n).map(q).collect();
            let seq = mcx_borrowed(&controls, q(k), &borrowed);
            assert_eq!(seq.len(), 4 * (k as usize - 2));
            for input in 0u32..(1 << n) {
                let mut s = input;
                for ins in &seq {
                    let ctl = ins.controls.iter().all(|c| s >> c.0 & 1 == 1);
                    if ctl {
                        s ^= 1 << ins.targets[0].0;
                    }
                }
                let fire = controls.iter().all(|c| input >> c.0 & 1 == 1);
                assert_eq!(
                    s,
                    input ^ (u32::from(fire) << k),
                    "k = {k}, input {input:b}"
                );
            }
        }
    }

    #[test]
    fn controlled_phase_is_unsupported() {
        let ins = Instruction::gate(GateKind::S, vec![q(0)], vec![q(1)]);
        assert!(matches!(
            decompose_instruction(&ins, &mut || q(9)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn circuit_level() {
        let c = crate::text::parse("input a\ninput b\ninput cc\ninput d\nmcx a b cc d").unwrap();
        let d = decompose(&c).unwrap();
        assert!(in_gate_set(&d));
        assert!(d.validate().is_empty());
        assert_eq!(crate::metrics::width(&d).unwrap(), 5);
        assert_eq!(d.name(QubitId(4)), "anc0");
    }
}
