//! Hoare metadata per gate: postcondition relations, triviality
//! conditions, unitaries and control-set verification.

use crate::circuit::{GateKind, Instruction};
use crate::cond::{Condition, Var};
use crate::error::{Error, Result};
use crate::linalg::{embed, gate_matrix, Matrix};

/// Relation between target variables before and after a gate.
#[derive(Debug, Clone, PartialEq)]
pub enum Post {
    Relation(Condition<Var>),
    /// No basis-state relation; post variables are unconstrained.
    Havoc,
}

#[derive(Debug, Clone, Copy)]
pub struct GateSpec {
    pub kind: GateKind,
    pub name: &'static str,
    pub arity: usize,
    pub self_inverse: bool,
    /// Diagonal in the computational basis.
    pub phase_only: bool,
}

static SPECS: [GateSpec; 6] = [
    GateSpec {
        kind: GateKind::X,
        name: "x",
        arity: 1,
        self_inverse: true,
        phase_only: false,
    },
    GateSpec {
        kind: GateKind::H,
        name: "h",
        arity: 1,
        self_inverse: true,
        phase_only: false,
    },
    GateSpec {
        kind: GateKind::S,
        name: "s",
        arity: 1,
        self_inverse: false,
        phase_only: true,
    },
    GateSpec {
        kind: GateKind::T,
        name: "t",
        arity: 1,
        self_inverse: false,
        phase_only: true,
    },
    GateSpec {
        kind: GateKind::Tdg,
        name: "tdg",
        arity: 1,
        self_inverse: false,
        phase_only: true,
    },
    GateSpec {
        kind: GateKind::Swap,
        name: "swap",
        arity: 2,
        self_inverse: true,
        phase_only: false,
    },
];

pub fn spec(kind: GateKind) -> &'static GateSpec {
    SPECS
        .iter()
        .find(|s| s.kind == kind)
        .expect("every gate kind is registered")
}

pub fn registry() -> &'static [GateSpec] {
    &SPECS
}

/// Inverse within the gate set, if it has one there.
pub fn inverse(kind: GateKind) -> Option<GateKind> {
    match kind {
        GateKind::T => Some(GateKind::Tdg),
        GateKind::Tdg => Some(GateKind::T),
        GateKind::S => None,
        k => Some(k),
    }
}

fn check_arity(s: &GateSpec, got: usize) -> Result<()> {
    if got != s.arity {
        return Err(Error::Arity {
            gate: s.name,
            expected: s.arity,
            got,
        });
    }
    Ok(())
}

fn atom(v: Var) -> Condition<Var> {
    Condition::Atom(v)
}

impl GateSpec {
    pub fn unitary(&self) -> Matrix {
        gate_matrix(self.kind)
    }

    /// Relation for the uncontrolled gate.
    pub fn postconditions(&self, pre: &[Var], post: &[Var]) -> Result<Post> {
        check_arity(self, pre.len())?;
        check_arity(self, post.len())?;
        Ok(match self.kind {
            GateKind::X => {
                Post::Relation(Condition::iff(atom(post[0]), Condition::not(atom(pre[0]))))
            }
            GateKind::Swap => Post::Relation(Condition::and(vec![
                Condition::iff(atom(pre[0]), atom(post[1])),
                Condition::iff(atom(pre[1]), atom(post[0])),
            ])),
            GateKind::H => Post::Havoc,
            GateKind::S | GateKind::T | GateKind::Tdg => {
                Post::Relation(Condition::iff(atom(post[0]), atom(pre[0])))
            }
        })
    }

    /// Relation used by the optimizer: phase gates under controls are
    /// havocked rather than related.
    pub fn effective_postconditions(
        &self,
        controlled: bool,
        pre: &[Var],
        post: &[Var],
    ) -> Result<Post> {
        if controlled && self.phase_only {
            check_arity(self, pre.len())?;
            check_arity(self, post.len())?;
            return Ok(Post::Havoc);
        }
        self.postconditions(pre, post)
    }

    /// Condition under which the gate fixes every basis state it sees.
    pub fn trivial_if(&self, targets: &[Var]) -> Result<Condition<Var>> {
        check_arity(self, targets.len())?;
        Ok(match self.kind {
            GateKind::Swap => Condition::iff(atom(targets[0]), atom(targets[1])),
            GateKind::S | GateKind::T | GateKind::Tdg => Condition::not(atom(targets[0])),
            GateKind::X | GateKind::H => Condition::Const(false),
        })
    }
}

/// Full unitary of an instruction on `[controls.., targets..]`.
pub fn instruction_unitary(ins: &Instruction) -> Option<Matrix> {
    let g = ins.gate_kind()?;
    let k = ins.controls.len();
    let n = k + ins.targets.len();
    let targets: Vec<usize> = (k..n).collect();
    Some(embed(
        &gate_matrix(g),
        &(0..k).collect::<Vec<_>>(),
        &targets,
        n,
    ))
}

pub const MAX_CONTROL_CHECK_QUBITS: usize = 10;

fn has_block_form(u: &Matrix, n: usize, candidate: &[usize]) -> bool {
    let mask: usize = candidate.iter().map(|&q| 1 << q).sum();
    let dim = 1 << n;
    for col in 0..dim {
        let inside = col & mask == mask;
        for row in 0..dim {
            let v = u.get(row, col);
            let row_inside = row & mask == mask;
            let ok = if !inside || !row_inside {
                let want = if row == col && !inside { 1.0 } else { 0.0 };
                (v.re - want).abs() < 1e-10 && v.im.abs() < 1e-10
            } else {
                // Inside block: candidate bits must be preserved, which
                // holds since both row and col are inside.
                true
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// True iff `candidate` (qubit positions of `u`) is a maximal set of
/// control qubits: `u` acts as the identity unless all of them are 1,
/// and no larger proper subset of the positions has the same property.
pub fn verify_control_set(u: &Matrix, candidate: &[usize]) -> Result<bool> {
    let n = u.dim.trailing_zeros() as usize;
    if n > MAX_CONTROL_CHECK_QUBITS {
        return Err(Error::Budget {
            needed: n,
            limit: MAX_CONTROL_CHECK_QUBITS,
        });
    }
    if candidate.iter().any(|&q| q >= n) || candidate.len() >= n {
        return Ok(false);
    }
    if !has_block_form(u, n, candidate) {
        return Ok(false);
    }
    for extra in 0..n {
        if candidate.contains(&extra) || candidate.len() + 1 >= n {
            continue;
        }
        let mut bigger = candidate.to_vec();
        bigger.push(extra);
        if has_block_form(u, n, &bigger) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that an instruction's declared controls form its control set.
pub fn verify_declared_controls(ins: &Instruction) -> Result<bool> {
    let u = instruction_unitary(ins).ok_or_else(|| Error::Unsupported(ins.name()))?;
    let declared: Vec<usize> = (0..ins.controls.len()).collect();
    verify_control_set(&u, &declared)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::QubitId;
    use crate::linalg::C;

    fn vars(base: u32, n: usize) -> Vec<Var> {
        (0..n)
            .map(|i| Var {
                qubit: QubitId(base + i as u32),
                version: 0,
            })
            .collect()
    }

    /// Every basis input maps to the unique basis state the relation admits.
    #[test]
    fn postconditions_match_unitaries() {
        for s in registry() {
            let pre = vars(0, s.arity);
            let post = vars(100, s.arity);
            let u = s.unitary();
            let rel = s.postconditions(&pre, &post).unwrap();
            let triv = s.trivial_if(&pre).unwrap();
            for inp in 0..u.dim {
                let fixed = (0..u.dim).all(|r| {
                    let want = if r == inp {
                        C::new(1.0, 0.0)
                    } else {
                        C::new(0.0, 0.0)
                    };
                    (u.get(r, inp) - want).norm() < 1e-12
                });
                let holds_triv = triv.eval(&|v: &Var| inp >> v.qubit.0 & 1 == 1).unwrap();
                assert!(!holds_triv || fixed, "{} trivial_if on {inp}", s.name);
                let Post::Relation(rel) = &rel else { continue };
                let support: Vec<usize> = (0..u.dim)
                    .filter(|&r| u.get(r, inp).norm() > 1e-12)
                    .collect();
                assert_eq!(support.len(), 1, "{}", s.name);
                for out in 0..u.dim {
                    let val = |v: &Var| {
                        if v.qubit.0 >= 100 {
                            out >> (v.qubit.0 - 100) & 1 == 1
                        } else {
                            inp >> v.qubit.0 & 1 == 1
                        }
                    };
                    assert_eq!(
                        rel.eval(&val).unwrap(),
                        out == support[0],
                        "{} {inp}->{out}",
                        s.name
                    );
                }
            }
        }
    }

    #[test]
    fn self_inverse_flags() {
        for s in registry() {
            let u = s.unitary();
            assert_eq!(u.mul(&u).is_identity(1e-12), s.self_inverse, "{}", s.name);
        }
    }

    #[test]
    fn arity_is_checked() {
        let v = vars(0, 1);
        assert!(matches!(
            spec(GateKind::Swap).trivial_if(&v),
            Err(Error::Arity {
                gate: "swap",
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn control_sets() {
        let q = |i| QubitId(i);
        let fredkin = Instruction::gate(GateKind::Swap, vec![q(0)], vec![q(1), q(2)]);
        assert!(verify_declared_controls(&fredkin).unwrap());
        let mcx = Instruction::gate(GateKind::X, vec![q(0), q(1), q(2)], vec![q(3)]);
        assert!(verify_declared_controls(&mcx).unwrap());
        // CZ = H-conjugated CNOT; either qubit is a valid control set.
        let h = embed(&gate_matrix(GateKind::H), &[], &[1], 2);
        let cx = embed(&gate_matrix(GateKind::X), &[0], &[1], 2);
        let cz = h.mul(&cx).mul(&h);
        assert!(verify_control_set(&cz, &[0]).unwrap());
        assert!(verify_control_set(&cz, &[1]).unwrap());
        let swap = gate_matrix(GateKind::Swap);
        assert!(!verify_control_set(&swap, &[0]).unwrap());
        assert!(verify_control_set(&swap, &[]).unwrap());
        // Not maximal: a Toffoli's single control.
        let ccx = embed(&gate_matrix(GateKind::X), &[0, 1], &[2], 3);
        assert!(!verify_control_set(&ccx, &[0]).unwrap());
    }
}
