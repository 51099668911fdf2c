//! Dense statevector simulation over live qubits, used as ground truth.

use std::collections::HashMap;

use crate::circuit::{Circuit, GateKind, Instruction, OpKind, QubitId};
use crate::cond::Condition;
use crate::error::{Error, Result};
use crate::linalg::{gate_matrix, C};

pub const MAX_SIM_QUBITS: usize = 20;
pub const MAX_INPUT_QUBITS: usize = 14;
pub const TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SimState {
    /// Live qubits; slot `i` is bit `i` of the amplitude index.
    pub qubits: Vec<QubitId>,
    pub amps: Vec<C>,
}

impl Default for SimState {
    fn default() -> Self {
        SimState {
            qubits: Vec::new(),
            amps: vec![C::new(1.0, 0.0)],
        }
    }
}

impl SimState {
    fn slot(&self, q: QubitId) -> Result<usize> {
        self.qubits
            .iter()
            .position(|&s| s == q)
            .ok_or(Error::DeadQubit(q.0))
    }

    fn add(&mut self, q: QubitId, value: bool) -> Result<()> {
        if self.qubits.len() >= MAX_SIM_QUBITS {
            return Err(Error::Budget {
                needed: self.qubits.len() + 1,
                limit: MAX_SIM_QUBITS,
            });
        }
        let zero = C::new(0.0, 0.0);
        let n = self.amps.len();
        if value {
            let mut v = vec![zero; n];
            v.append(&mut self.amps);
            self.amps = v;
        } else {
            self.amps.resize(2 * n, zero);
        }
        self.qubits.push(q);
        Ok(())
    }

    fn remove(&mut self, q: QubitId) -> Result<()> {
        let b = self.slot(q)?;
        let bit = 1usize << b;
        let stray: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if stray.sqrt() > TOL {
            return Err(Error::DirtyDealloc { qubit: q.0 });
        }
        let low = bit - 1;
        let mut out = vec![C::new(0.0, 0.0); self.amps.len() / 2];
        for (i, a) in self.amps.iter().enumerate() {
            if i & bit == 0 {
                out[(i & low) | ((i >> (b + 1)) << b)] = *a;
            }
        }
        self.amps = out;
        self.qubits.remove(b);
        Ok(())
    }

    fn apply(&mut self, ins: &Instruction) -> Result<()> {
        let g = ins.gate_kind().expect("gate instruction");
        let cmask = ins
            .controls
            .iter()
            .map(|&c| self.slot(c).map(|s| 1usize << s))
            .sum::<Result<usize>>()?;
        let ts = ins
            .targets
            .iter()
            .map(|&t| self.slot(t))
            .collect::<Result<Vec<_>>>()?;
        match g {
            GateKind::Swap => {
                let (a, b) = (1usize << ts[0], 1usize << ts[1]);
                for i in 0..self.amps.len() {
                    if i & cmask == cmask && i & a != 0 && i & b == 0 {
                        self.amps.swap(i, i ^ a ^ b);
                    }
                }
            }
            _ => {
                let m = gate_matrix(g);
                let t = 1usize << ts[0];
                for i in 0..self.amps.len() {
                    if i & cmask == cmask && i & t == 0 {
                        let (x, y) = (self.amps[i], self.amps[i | t]);
                        self.amps[i] = m.get(0, 0) * x + m.get(0, 1) * y;
                        self.amps[i | t] = m.get(1, 0) * x + m.get(1, 1) * y;
                    }
                }
            }
        }
        Ok(())
    }

    /// True iff `cond` holds on every basis state with nonzero amplitude.
    pub fn satisfies(&self, cond: &Condition<QubitId>) -> Result<bool> {
        let slots: HashMap<QubitId, usize> = self
            .qubits
            .iter()
            .enumerate()
            .map(|(i, q)| (*q, i))
            .collect();
        for q in cond.atoms() {
            if !slots.contains_key(&q) {
                return Err(Error::DeadQubit(q.0));
            }
        }
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() > TOL {
                let holds = cond
                    .eval(&|q: &QubitId| i >> slots[q] & 1 == 1)
                    .ok_or_else(|| Error::Range("condition overflow".into()))?;
                if !holds {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Amplitudes re-indexed so that bit `i` is `order[i]`; `order` must
    /// list every live qubit.
    pub fn reordered(&self, order: &[QubitId]) -> Result<Vec<C>> {
        assert_eq!(
            order.len(),
            self.qubits.len(),
            "order must cover all live qubits"
        );
        let slots = order
            .iter()
            .map(|&q| self.slot(q))
            .collect::<Result<Vec<_>>>()?;
        let mut out = vec![C::new(0.0, 0.0); self.amps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let j: usize = slots
                .iter()
                .enumerate()
                .map(|(k, &s)| (i >> s & 1) << k)
                .sum();
            out[j] = *a;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SimOptions {
    pub check_asserts: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            check_asserts: true,
        }
    }
}

/// Runs the first `stop` instructions. `input[i]` is the value of the
/// `i`-th `input` qubit.
pub fn simulate_prefix(
    c: &Circuit,
    input: &[bool],
    stop: usize,
    opts: SimOptions,
) -> Result<SimState> {
    let mut s = SimState::default();
    let mut next_input = 0;
    for (index, ins) in c.instructions[..stop].iter().enumerate() {
        match &ins.op {
            OpKind::Alloc => s.add(ins.targets[0], false)?,
            OpKind::Input => {
                let v = input.get(next_input).copied().unwrap_or(false);
                next_input += 1;
                s.add(ins.targets[0], v)?;
            }
            OpKind::Dealloc => s.remove(ins.targets[0])?,
            // Deferred measurement: the final state is compared before readout.
            OpKind::Measure => {}
            OpKind::Assert(cond) => {
                if opts.check_asserts && !s.satisfies(cond)? {
                    return Err(Error::AssertionViolated { index });
                }
            }
            OpKind::Gate(_) => s.apply(ins)?,
        }
    }
    Ok(s)
}

pub fn simulate(c: &Circuit, input: &[bool]) -> Result<SimState> {
    simulate_prefix(c, input, c.instructions.len(), SimOptions::default())
}

fn input_bits(index: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| index >> i & 1 == 1).collect()
}

fn check_input_budget(n: usize) -> Result<()> {
    if n > MAX_INPUT_QUBITS {
        return Err(Error::Budget {
            needed: n,
            limit: MAX_INPUT_QUBITS,
        });
    }
    Ok(())
}

/// Outcome of an equivalence check over all admissible basis inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Equivalence {
    /// Agreement up to a phase chosen separately per input.
    pub per_input: bool,
    /// Agreement up to one phase shared by all inputs.
    pub common_phase: bool,
    pub inputs_checked: usize,
    /// First input (name, value) on which the circuits differ.
    pub counterexample: Option<Vec<(String, bool)>>,
}

fn names_of(c: &Circuit, qs: &[QubitId]) -> Vec<String> {
    qs.iter().map(|q| c.name(*q).to_string()).collect()
}

fn phase_between(a: &[C], b: &[C]) -> Option<C> {
    let (i, x) = a
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().partial_cmp(&y.1.norm()).unwrap())?;
    if x.norm() < TOL || b[i].norm() < TOL {
        return None;
    }
    let p = b[i] / x;
    let ok = a.iter().zip(b).all(|(x, y)| (p * x - y).norm() <= 1e-9);
    ok.then_some(p)
}

/// Compares `c1` and `c2` on every basis input of their `input` qubits
/// (matched by name) that satisfies `pre` and on which `c1` runs
/// without an assertion or deallocation failure.
pub fn equivalent(
    c1: &Circuit,
    c2: &Circuit,
    pre: Option<&Condition<QubitId>>,
) -> Result<Equivalence> {
    c1.ensure_valid()?;
    c2.ensure_valid()?;
    let in1 = c1.inputs();
    check_input_budget(in1.len())?;
    let n1 = names_of(c1, &in1);
    let mut n2 = names_of(c2, &c2.inputs());
    let mut sorted1 = n1.clone();
    sorted1.sort();
    n2.sort();
    let out1 = c1.outputs();
    let out_names = names_of(c1, &out1);
    let mut o2 = names_of(c2, &c2.outputs());
    let mut o1s = out_names.clone();
    o1s.sort();
    o2.sort();
    let mismatch = |inputs| Equivalence {
        per_input: false,
        common_phase: false,
        inputs_checked: 0,
        counterexample: inputs,
    };
    if sorted1 != n2 || o1s != o2 {
        // Different layouts disagree on every input, the all-zero one included.
        return Ok(mismatch(Some(
            n1.iter().map(|n| (n.clone(), false)).collect(),
        )));
    }
    let in2: Vec<QubitId> = c2.inputs();
    let perm: Vec<usize> = in2
        .iter()
        .map(|q| n1.iter().position(|n| n == c2.name(*q)).unwrap())
        .collect();
    let live2 = c2.outputs();
    let out2: Vec<QubitId> = out_names
        .iter()
        .map(|n| *live2.iter().find(|q| c2.name(**q) == n).unwrap())
        .collect();

    let mut common: Option<C> = None;
    let mut common_ok = true;
    let mut checked = 0;
    for idx in 0..(1u64 << in1.len()) {
        let bits = input_bits(idx, in1.len());
        if let Some(pre) = pre {
            let holds = pre
                .eval(&|q: &QubitId| {
                    in1.iter()
                        .position(|i| i == q)
                        .map(|p| bits[p])
                        .unwrap_or(false)
                })
                .unwrap_or(false);
            if !holds {
                continue;
            }
        }
        let s1 = match simulate(c1, &bits) {
            Ok(s) => s,
            Err(Error::AssertionViolated { .. }) | Err(Error::DirtyDealloc { .. }) => continue,
            Err(e) => return Err(e),
        };
        checked += 1;
        let witness = || {
            Some(
                n1.iter()
                    .cloned()
                    .zip(bits.iter().copied())
                    .collect::<Vec<_>>(),
            )
        };
        let bits2: Vec<bool> = perm.iter().map(|&p| bits[p]).collect();
        let s2 = match simulate(c2, &bits2) {
            Ok(s) => s,
            Err(Error::AssertionViolated { .. }) | Err(Error::DirtyDealloc { .. }) => {
                return Ok(Equivalence {
                    inputs_checked: checked,
                    ..mismatch(witness())
                })
            }
            Err(e) => return Err(e),
        };
        let a = s1.reordered(&out1)?;
        let b = s2.reordered(&out2)?;
        match phase_between(&a, &b) {
            None => {
                return Ok(Equivalence {
                    inputs_checked: checked,
                    ..mismatch(witness())
                })
            }
            Some(p) => match common {
                None => common = Some(p),
                Some(q) => {
                    if (p - q).norm() > 1e-9 {
                        common_ok = false;
                    }
                }
            },
        }
    }
    Ok(Equivalence {
        per_input: true,
        common_phase: common_ok,
        inputs_checked: checked,
        counterexample: None,
    })
}

/// True iff `cond` holds on every reachable basis state just before
/// instruction `index`, over all basis inputs.
pub fn check_assertion(c: &Circuit, index: usize, cond: &Condition<QubitId>) -> Result<bool> {
    c.ensure_valid()?;
    let ins = c.inputs();
    check_input_budget(ins.len())?;
    let opts = SimOptions {
        check_asserts: false,
    };
    for idx in 0..(1u64 << ins.len()) {
        let s = simulate_prefix(c, &input_bits(idx, ins.len()), index, opts)?;
        if !s.satisfies(cond)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Classical output of a circuit on a basis input, when the final state
/// is a single basis state: value per live qubit in `order`.
pub fn basis_output(c: &Circuit, input: &[bool], order: &[QubitId]) -> Result<Option<Vec<bool>>> {
    let s = simulate(c, input)?;
    let slots = order
        .iter()
        .map(|&q| s.slot(q))
        .collect::<Result<Vec<_>>>()?;
    let hits: Vec<usize> = (0..s.amps.len())
        .filter(|&i| s.amps[i].norm() > TOL)
        .collect();
    Ok(match hits[..] {
        [i] => Some(slots.iter().map(|&b| i >> b & 1 == 1).collect()),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cond::{parse_condition, NumberedQubits};
    use crate::text::parse;

    const BELL: &str = "alloc q0\nalloc q1\nh q0\ncx q0 q1\n";

    #[test]
    fn bell_amplitudes() {
        let s = simulate(&parse(BELL).unwrap(), &[]).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amps[0].re - r).abs() < 1e-12 && (s.amps[3].re - r).abs() < 1e-12);
        assert!(s.amps[1].norm() < 1e-12 && s.amps[2].norm() < 1e-12);
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_assertions() {
        let c = parse(BELL).unwrap();
        let eq = parse_condition("(eq q0 q1)", &NumberedQubits).unwrap();
        let zero = parse_condition("(eq q0 0)", &NumberedQubits).unwrap();
        assert!(check_assertion(&c, 4, &eq).unwrap());
        assert!(!check_assertion(&c, 4, &zero).unwrap());
        assert!(check_assertion(&c, 2, &zero).unwrap());
    }

    #[test]
    fn equivalence_basics() {
        let bell = parse(BELL).unwrap();
        let swapped = parse(&format!("{BELL}swap q0 q1\n")).unwrap();
        assert!(equivalent(&bell, &bell, None).unwrap().common_phase);
        assert!(equivalent(&swapped, &bell, None).unwrap().common_phase);
        let x = parse("input q\nx q").unwrap();
        let id = parse("input q").unwrap();
        let e = equivalent(&x, &id, None).unwrap();
        assert!(!e.per_input);
        assert_eq!(e.counterexample, Some(vec![("q".into(), false)]));
    }

    #[test]
    fn dirty_dealloc_fails() {
        let c = parse("alloc a\nx a\ndealloc a").unwrap();
        assert!(matches!(
            simulate(&c, &[]),
            Err(Error::DirtyDealloc { qubit: 0 })
        ));
        let ok = parse("alloc a\nx a\nx a\ndealloc a").unwrap();
        assert!(simulate(&ok, &[]).unwrap().qubits.is_empty());
    }

    #[test]
    fn removal_from_middle_slot() {
        let c = parse("input a\nalloc b\ninput c\nx b\nx b\ndealloc b").unwrap();
        let s = simulate(&c, &[false, true]).unwrap();
        assert_eq!(s.qubits, vec![QubitId(0), QubitId(2)]);
        assert!((s.amps[2].re - 1.0).abs() < 1e-12);
    }
}
