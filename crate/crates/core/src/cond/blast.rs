//! Tseitin encoding of conditions into CNF.
//!
//! Integer terms are compiled to two's-complement bit vectors wide enough
//! for every intermediate value. Atoms that appear in an exponent
//! position (`pow2` argument, `shl` amount) are case-split: one disjunct
//! per assignment of those atoms, each with constant exponents.

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use crate::error::{Error, Result};

use super::expr::{Bit, CmpOp, Condition, Term};
use super::sat::{Lit, Outcome, Solver};

/// Exponent atoms beyond this many are rejected.
pub const MAX_EXPONENT_ATOMS: usize = 10;
const MAX_WIDTH: u32 = 124;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum B {
    Const(bool),
    L(Lit),
}

impl std::ops::Not for B {
    type Output = B;
    fn not(self) -> B {
        match self {
            B::Const(c) => B::Const(!c),
            B::L(l) => B::L(!l),
        }
    }
}

/// Owns a SAT solver and the atom-to-variable map.
#[derive(Debug)]
pub struct Encoder<A> {
    pub solver: Solver,
    atoms: HashMap<A, u32>,
}

impl<A: Clone + Eq + Hash + Ord> Default for Encoder<A> {
    fn default() -> Self {
        Self::new()
    }
}

impl<A: Clone + Eq + Hash + Ord> Encoder<A> {
    pub fn new() -> Self {
        Encoder {
            solver: Solver::new(),
            atoms: HashMap::new(),
        }
    }

    pub fn atom_var(&mut self, a: &A) -> u32 {
        if let Some(v) = self.atoms.get(a) {
            return *v;
        }
        let v = self.solver.new_var();
        self.atoms.insert(a.clone(), v);
        v
    }

    pub fn known_atom(&self, a: &A) -> Option<u32> {
        self.atoms.get(a).copied()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&A, &u32)> {
        self.atoms.iter()
    }

    fn fresh(&mut self) -> Lit {
        Lit::new(self.solver.new_var(), true)
    }

    fn and(&mut self, xs: &[B]) -> B {
        let mut lits = Vec::new();
        for x in xs {
            match *x {
                B::Const(false) => return B::Const(false),
                B::Const(true) => {}
                B::L(l) => lits.push(l),
            }
        }
        lits.sort();
        lits.dedup();
        for w in lits.windows(2) {
            if w[0] == !w[1] {
                return B::Const(false);
            }
        }
        match lits.len() {
            0 => B::Const(true),
            1 => B::L(lits[0]),
            _ => {
                let x = self.fresh();
                let mut big = vec![x];
                for &l in &lits {
                    self.solver.add_clause(&[!x, l]);
                    big.push(!l);
                }
                self.solver.add_clause(&big);
                B::L(x)
            }
        }
    }

    fn or(&mut self, xs: &[B]) -> B {
        let neg: Vec<B> = xs.iter().map(|&x| !x).collect();
        !self.and(&neg)
    }

    fn xor(&mut self, a: B, b: B) -> B {
        match (a, b) {
            (B::Const(x), y) | (y, B::Const(x)) => {
                if x {
                    !y
                } else {
                    y
                }
            }
            (B::L(x), B::L(y)) => {
                if x == y {
                    return B::Const(false);
                }
                if x == !y {
                    return B::Const(true);
                }
                let z = self.fresh();
                self.solver.add_clause(&[!z, x, y]);
                self.solver.add_clause(&[!z, !x, !y]);
                self.solver.add_clause(&[z, !x, y]);
                self.solver.add_clause(&[z, x, !y]);
                B::L(z)
            }
        }
    }

    fn iff(&mut self, a: B, b: B) -> B {
        !self.xor(a, b)
    }

    /// Majority of three, the carry of a full adder.
    fn maj(&mut self, a: B, b: B, c: B) -> B {
        let ab = self.and(&[a, b]);
        let ac = self.and(&[a, c]);
        let bc = self.and(&[b, c]);
        self.or(&[ab, ac, bc])
    }

    fn encode(&mut self, c: &Condition<A>) -> Result<B> {
        Ok(match c {
            Condition::Const(b) => B::Const(*b),
            Condition::Atom(a) => B::L(Lit::new(self.atom_var(a), true)),
            Condition::Not(x) => !self.encode(x)?,
            Condition::And(xs) => {
                let ls = xs
                    .iter()
                    .map(|x| self.encode(x))
                    .collect::<Result<Vec<_>>>()?;
                self.and(&ls)
            }
            Condition::Or(xs) => {
                let ls = xs
                    .iter()
                    .map(|x| self.encode(x))
                    .collect::<Result<Vec<_>>>()?;
                self.or(&ls)
            }
            Condition::Implies(a, b) => {
                let a = self.encode(a)?;
                let b = self.encode(b)?;
                self.or(&[!a, b])
            }
            Condition::Iff(a, b) => {
                let a = self.encode(a)?;
                let b = self.encode(b)?;
                self.iff(a, b)
            }
            Condition::Cmp(op, l, r) => self.encode_cmp(*op, l, r)?,
        })
    }

    fn encode_cmp(&mut self, op: CmpOp, l: &Term<A>, r: &Term<A>) -> Result<B> {
        let mut exp_atoms = BTreeSet::new();
        collect_exponent_atoms(l, false, &mut exp_atoms);
        collect_exponent_atoms(r, false, &mut exp_atoms);
        let exp_atoms: Vec<A> = exp_atoms.into_iter().collect();
        if exp_atoms.len() > MAX_EXPONENT_ATOMS {
            return Err(Error::Range(format!(
                "{} atoms in exponent position (limit {MAX_EXPONENT_ATOMS})",
                exp_atoms.len()
            )));
        }
        let mut cases = Vec::with_capacity(1 << exp_atoms.len());
        for mask in 0u32..(1 << exp_atoms.len()) {
            let sigma: HashMap<&A, bool> = exp_atoms
                .iter()
                .enumerate()
                .map(|(i, a)| (a, mask >> i & 1 == 1))
                .collect();
            let ls = substitute(l, &sigma);
            let rs = substitute(r, &sigma);
            let body = self.compare_closed(op, &ls, &rs)?;
            let mut cube: Vec<B> = exp_atoms
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let lit = Lit::new(self.atom_var(a), true);
                    B::L(if mask >> i & 1 == 1 { lit } else { !lit })
                })
                .collect();
            cube.push(body);
            cases.push(self.and(&cube));
        }
        Ok(self.or(&cases))
    }

    /// Comparison between terms whose exponents contain no atoms.
    fn compare_closed(&mut self, op: CmpOp, l: &Term<A>, r: &Term<A>) -> Result<B> {
        let mut lo = 0i128;
        let mut hi = 0i128;
        let mut widen = |t: &Term<A>| -> Result<()> {
            let (a, b) = subterm_extent(t)?;
            lo = lo.min(a);
            hi = hi.max(b);
            Ok(())
        };
        widen(l)?;
        widen(r)?;
        let (ll, lh) = l
            .range()
            .ok_or_else(|| Error::Range("term overflow".into()))?;
        let (rl, rh) = r
            .range()
            .ok_or_else(|| Error::Range("term overflow".into()))?;
        lo = lo.min(ll - rh).min(rl - lh);
        hi = hi.max(lh - rl).max(rh - ll);
        let width = width_for(lo, hi)?;
        let lb = self.bits(l, width)?;
        let rb = self.bits(r, width)?;
        Ok(match op {
            CmpOp::Eq => self.eq_bits(&lb, &rb),
            CmpOp::Ne => !self.eq_bits(&lb, &rb),
            CmpOp::Lt => self.lt_bits(&lb, &rb),
            CmpOp::Gt => self.lt_bits(&rb, &lb),
            CmpOp::Le => !self.lt_bits(&rb, &lb),
            CmpOp::Ge => !self.lt_bits(&lb, &rb),
        })
    }

    fn eq_bits(&mut self, a: &[B], b: &[B]) -> B {
        let eqs: Vec<B> = a.iter().zip(b).map(|(&x, &y)| self.iff(x, y)).collect();
        self.and(&eqs)
    }

    /// Signed less-than: sign bit of a - b.
    fn lt_bits(&mut self, a: &[B], b: &[B]) -> B {
        let d = self.sub_bits(a, b);
        *d.last().unwrap()
    }

    fn sub_bits(&mut self, a: &[B], b: &[B]) -> Vec<B> {
        let mut carry = B::Const(true);
        let mut out = Vec::with_capacity(a.len());
        for (&x, &y) in a.iter().zip(b) {
            let ny = !y;
            let t = self.xor(x, ny);
            out.push(self.xor(t, carry));
            carry = self.maj(x, ny, carry);
        }
        out
    }

    fn bits(&mut self, t: &Term<A>, w: u32) -> Result<Vec<B>> {
        let w = w as usize;
        Ok(match t {
            Term::Int(v) => const_bits(*v, w),
            Term::Reg { bits, order } => {
                let mut out: Vec<B> = Term::lsb_bits(bits, *order)
                    .into_iter()
                    .map(|b| match b {
                        Bit::Const(c) => B::Const(*c),
                        Bit::Atom(a) => B::L(Lit::new(self.atom_var(a), true)),
                    })
                    .collect();
                out.resize(w, B::Const(false));
                out
            }
            Term::Pow2(e) => {
                let e = closed_value(e)?;
                const_bits(
                    super::expr::pow2(e).ok_or_else(|| Error::Range("pow2 overflow".into()))?,
                    w,
                )
            }
            Term::Shl(a, k) => {
                let k = closed_value(k)?;
                let ab = self.bits(a, w as u32)?;
                if k >= 0 {
                    let k = (k as usize).min(w);
                    let mut out = vec![B::Const(false); k];
                    out.extend_from_slice(&ab[..w - k]);
                    out
                } else {
                    let k = ((-k) as usize).min(w - 1);
                    let sign = ab[w - 1];
                    let mut out = ab[k..].to_vec();
                    out.resize(w, sign);
                    out
                }
            }
            Term::Sub(a, b) => {
                let ab = self.bits(a, w as u32)?;
                let bb = self.bits(b, w as u32)?;
                self.sub_bits(&ab, &bb)
            }
        })
    }

    fn lit_of(&mut self, b: B) -> Lit {
        match b {
            B::L(l) => l,
            B::Const(c) => {
                let x = self.fresh();
                self.solver.add_clause(&[if c { x } else { !x }]);
                x
            }
        }
    }

    /// Literal equivalent to `c`.
    pub fn literal(&mut self, c: &Condition<A>) -> Result<Lit> {
        let b = self.encode(c)?;
        Ok(self.lit_of(b))
    }

    /// Adds `guard -> c` permanently; with no guard `c` is asserted outright.
    pub fn assert_under(&mut self, guard: Option<Lit>, c: &Condition<A>) -> Result<()> {
        let b = self.encode(c)?;
        match (guard, b) {
            (_, B::Const(true)) => {}
            (None, B::Const(false)) => {
                self.solver.add_clause(&[]);
            }
            (Some(g), B::Const(false)) => {
                self.solver.add_clause(&[!g]);
            }
            (None, B::L(l)) => {
                self.solver.add_clause(&[l]);
            }
            (Some(g), B::L(l)) => {
                self.solver.add_clause(&[!g, l]);
            }
        }
        Ok(())
    }

    pub fn solve(&mut self, assumptions: &[Lit], budget: u64) -> Outcome {
        self.solver.solve(assumptions, budget)
    }

    pub fn new_guard(&mut self) -> Lit {
        self.fresh()
    }

    pub fn retire_guard(&mut self, g: Lit) {
        self.solver.add_clause(&[!g]);
    }
}

fn const_bits(v: i128, w: usize) -> Vec<B> {
    (0..w)
        .map(|i| B::Const(if i >= 127 { v < 0 } else { (v >> i) & 1 == 1 }))
        .collect()
}

fn width_for(lo: i128, hi: i128) -> Result<u32> {
    for w in 2..=MAX_WIDTH {
        let half = 1i128 << (w - 1);
        if lo >= -half && hi < half {
            return Ok(w);
        }
    }
    Err(Error::Range(format!(
        "values in [{lo}, {hi}] exceed {MAX_WIDTH} bits"
    )))
}

fn closed_value<A>(t: &Term<A>) -> Result<i128> {
    t.eval(&|_| unreachable!("exponent atoms are substituted before compilation"))
        .ok_or_else(|| Error::Range("exponent overflow".into()))
}

/// Extent over every subterm, so intermediate values fit the width too.
fn subterm_extent<A>(t: &Term<A>) -> Result<(i128, i128)> {
    let (mut lo, mut hi) = t
        .range()
        .ok_or_else(|| Error::Range("term overflow".into()))?;
    match t {
        Term::Sub(a, b) | Term::Shl(a, b) => {
            for s in [a, b] {
                let (l, h) = subterm_extent(s)?;
                lo = lo.min(l);
                hi = hi.max(h);
            }
        }
        Term::Pow2(e) => {
            let (l, h) = subterm_extent(e)?;
            lo = lo.min(l);
            hi = hi.max(h);
        }
        _ => {}
    }
    Ok((lo, hi))
}

fn collect_exponent_atoms<A: Clone + Ord>(t: &Term<A>, in_exp: bool, out: &mut BTreeSet<A>) {
    match t {
        Term::Int(_) => {}
        Term::Reg { bits, .. } => {
            if in_exp {
                for b in bits {
                    if let Bit::Atom(a) = b {
                        out.insert(a.clone());
                    }
                }
            }
        }
        Term::Sub(a, b) => {
            collect_exponent_atoms(a, in_exp, out);
            collect_exponent_atoms(b, in_exp, out);
        }
        Term::Shl(a, k) => {
            collect_exponent_atoms(a, in_exp, out);
            collect_exponent_atoms(k, true, out);
        }
        Term::Pow2(e) => collect_exponent_atoms(e, true, out),
    }
}

fn substitute<A: Clone + Eq + Hash>(t: &Term<A>, sigma: &HashMap<&A, bool>) -> Term<A> {
    match t {
        Term::Int(v) => Term::Int(*v),
        Term::Reg { bits, order } => Term::Reg {
            bits: bits
                .iter()
                .map(|b| match b {
                    Bit::Atom(a) => match sigma.get(a) {
                        Some(v) => Bit::Const(*v),
                        None => Bit::Atom(a.clone()),
                    },
                    c => c.clone(),
                })
                .collect(),
            order: *order,
        },
        Term::Shl(a, k) => Term::shl(substitute(a, sigma), substitute(k, sigma)),
        Term::Sub(a, b) => Term::sub(substitute(a, sigma), substitute(b, sigma)),
        Term::Pow2(e) => Term::pow2(substitute(e, sigma)),
    }
}
