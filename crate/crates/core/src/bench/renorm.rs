//! Floating-point renormalization: find the leading one of the mantissa,
//! then shift it to the top.

use crate::circuit::{Circuit, QubitId};
use crate::cond::{CmpOp, Condition, Order, Term};
use crate::decompose::mcx_borrowed;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenormParams {
    /// Mantissa qubits.
    pub n: usize,
    /// Position qubits, `ceil(log2 n)`.
    pub n_p: usize,
}

impl RenormParams {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Params(format!("mantissa width {n} < 2")));
        }
        let n_p = n.next_power_of_two().trailing_zeros() as usize;
        Ok(RenormParams { n, n_p })
    }

    /// Work qubits of the shift: `2^n_p - 1`.
    pub fn ancillas(&self) -> usize {
        (1 << self.n_p) - 1
    }
}

/// Registers shared by the two stages. `x[0]` is the MSB, `p[0]` the LSB.
#[derive(Debug, Clone)]
pub struct RenormQubits {
    pub x: Vec<QubitId>,
    pub p: Vec<QubitId>,
    pub f: QubitId,
}

/// `x < 2^(n - p)`: at most `n - p` significant bits remain after the
/// first one has been located.
pub fn first_one_assertion(x: &[QubitId], p: &[QubitId]) -> Condition<QubitId> {
    Condition::cmp(
        CmpOp::Lt,
        Term::reg(x.iter().copied(), Order::Msb),
        Term::shl(
            Term::Int(1),
            Term::sub(
                Term::Int(x.len() as i128),
                Term::reg(p.iter().copied(), Order::Lsb),
            ),
        ),
    )
}

fn emit_first_one(c: &mut Circuit, r: &RenormQubits) {
    let (x, p, f) = (&r.x, &r.p, r.f);
    c.x(f);
    for (i, &xi) in x.iter().enumerate() {
        let bits: Vec<QubitId> = (0..p.len())
            .filter(|b| i >> b & 1 == 1)
            .map(|b| p[b])
            .collect();
        for &pb in &bits {
            c.ccx(f, xi, pb);
        }
        // p now holds i exactly when this x_i was the first one; any earlier
        // hit left a smaller p, which cannot contain all bits of i.
        let mut controls = vec![xi];
        controls.extend(&bits);
        let borrowed: Vec<QubitId> = x
            .iter()
            .chain(p.iter())
            .copied()
            .filter(|q| !controls.contains(q))
            .collect();
        c.append(&mcx_borrowed(&controls, f, &borrowed));
    }
}

fn emit_shift(c: &mut Circuit, x: &[QubitId], p: &[QubitId], anc: &[QubitId]) {
    for (k, &pk) in p.iter().enumerate() {
        let s = 1usize << k;
        // Layer k can overflow by at most 2^(k+1) - 1 positions, so it
        // spans only that many work qubits, the nearest ones to x.
        let used = (2 * s - 1).min(anc.len());
        let e: Vec<QubitId> = anc[anc.len() - used..]
            .iter()
            .chain(x.iter())
            .copied()
            .collect();
        for j in 0..e.len() - s {
            c.cswap(pk, e[j], e[j + s]);
        }
    }
}

/// Leading-one search: `p` receives the number of leading zeros of `x`
/// and the flag `f` is cleared once a one is found (it stays 1 for x = 0).
pub fn build_first_one(params: RenormParams) -> (Circuit, RenormQubits) {
    let mut c = Circuit::new();
    let x = c.input_register("x", params.n);
    let p = c.alloc_register("p", params.n_p);
    let f = c.alloc("f");
    let r = RenormQubits { x, p, f };
    emit_first_one(&mut c, &r);
    c.assert(first_one_assertion(&r.x, &r.p));
    (c, r)
}

/// Shift of `x` left by `p` through `2^n_p - 1` work qubits, on its own.
/// Without the leading-one postcondition nothing is known about `p`.
pub fn build_shift(params: RenormParams) -> Circuit {
    let mut c = Circuit::new();
    let x = c.input_register("x", params.n);
    let p = c.input_register("p", params.n_p);
    let anc = c.alloc_register("w", params.ancillas());
    emit_shift(&mut c, &x, &p, &anc);
    for &a in anc.iter().rev() {
        c.dealloc(a);
    }
    c
}

/// First-one search, its postcondition, then the shift.
pub fn build_renormalize(params: RenormParams) -> Circuit {
    let (mut c, r) = build_first_one(params);
    let anc = c.alloc_register("w", params.ancillas());
    emit_shift(&mut c, &r.x, &r.p, &anc);
    for &a in anc.iter().rev() {
        c.dealloc(a);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::basis_output;

    fn bits_msb(v: usize, n: usize) -> Vec<bool> {
        (0..n).map(|i| v >> (n - 1 - i) & 1 == 1).collect()
    }

    #[test]
    fn params() {
        assert_eq!(RenormParams::new(4).unwrap().n_p, 2);
        assert_eq!(RenormParams::new(5).unwrap().n_p, 3);
        assert_eq!(RenormParams::new(16).unwrap().ancillas(), 15);
        assert!(RenormParams::new(1).is_err());
    }

    #[test]
    fn first_one_positions() {
        let pr = RenormParams::new(4).unwrap();
        let (c, r) = build_first_one(pr);
        for v in 0..16usize {
            let mut order = r.p.clone();
            order.push(r.f);
            let out = basis_output(&c, &bits_msb(v, 4), &order).unwrap().unwrap();
            let p = usize::from(out[0]) | usize::from(out[1]) << 1;
            if v == 0 {
                assert_eq!((p, out[2]), (0, true));
            } else {
                assert_eq!(
                    p,
                    v.leading_zeros() as usize - (usize::BITS as usize - 4),
                    "x = {v:04b}"
                );
                assert!(!out[2]);
            }
        }
    }

    #[test]
    fn renormalizes() {
        for n in [3, 4, 5] {
            let pr = RenormParams::new(n).unwrap();
            let c = build_renormalize(pr);
            let x: Vec<QubitId> = (0..n as u32).map(QubitId).collect();
            for v in 1..(1usize << n) {
                let out = basis_output(&c, &bits_msb(v, n), &x).unwrap().unwrap();
                let shift = v.leading_zeros() as usize - (usize::BITS as usize - n);
                let want = bits_msb(v << shift, n);
                assert_eq!(out, want, "n = {n}, x = {v:b}");
            }
        }
    }

    #[test]
    fn standalone_shift_overflows() {
        let pr = RenormParams::new(4).unwrap();
        let c = build_shift(pr);
        // x = 0010 (MSB first), p = 2 -> 1000
        let input = [false, false, true, false, false, true];
        let x: Vec<QubitId> = (0..4).map(QubitId).collect();
        let out = basis_output(&c, &input, &x).unwrap().unwrap();
        assert_eq!(out, vec![true, false, false, false]);
        // x = 1000, p = 1 pushes the one into a work qubit.
        let input = [true, false, false, false, true, false];
        assert!(matches!(
            crate::sim::simulate(&c, &input),
            Err(Error::DirtyDealloc { .. })
        ));
    }
}
