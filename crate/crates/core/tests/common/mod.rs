#![allow(dead_code)]

use qhoare::cond::{Bit, CmpOp, Condition, Order, Term};
use rand::seq::SliceRandom;
use rand::Rng;

const OPS: [CmpOp; 6] = [
    CmpOp::Eq,
    CmpOp::Ne,
    CmpOp::Lt,
    CmpOp::Le,
    CmpOp::Gt,
    CmpOp::Ge,
];

fn reg<R: Rng>(rng: &mut R, atoms: u32, max_w: usize) -> Term<u32> {
    let w = rng.gen_range(1..=max_w);
    let bits = (0..w)
        .map(|_| {
            if rng.gen_bool(0.15) {
                Bit::Const(rng.gen())
            } else {
                Bit::Atom(rng.gen_range(0..atoms))
            }
        })
        .collect();
    let order = if rng.gen() { Order::Msb } else { Order::Lsb };
    Term::Reg { bits, order }
}

fn exponent<R: Rng>(rng: &mut R, atoms: u32) -> Term<u32> {
    match rng.gen_range(0..3) {
        0 => Term::Int(rng.gen_range(-3..=6)),
        1 => reg(rng, atoms, 2),
        _ => Term::sub(Term::Int(rng.gen_range(0..=6)), reg(rng, atoms, 2)),
    }
}

pub fn random_term<R: Rng>(rng: &mut R, atoms: u32, depth: u32) -> Term<u32> {
    if depth == 0 {
        return match rng.gen_range(0..3) {
            0 => Term::Int(rng.gen_range(-8..=40)),
            _ => reg(rng, atoms, 5),
        };
    }
    match rng.gen_range(0..5) {
        0 => Term::Int(rng.gen_range(-8..=40)),
        1 => reg(rng, atoms, 6),
        2 => Term::sub(
            random_term(rng, atoms, depth - 1),
            random_term(rng, atoms, depth - 1),
        ),
        3 => Term::shl(random_term(rng, atoms, depth - 1), exponent(rng, atoms)),
        _ => Term::pow2(exponent(rng, atoms)),
    }
}

pub fn random_condition<R: Rng>(rng: &mut R, atoms: u32, depth: u32) -> Condition<u32> {
    let leaf = |rng: &mut R| match rng.gen_range(0..4) {
        0 => Condition::Const(rng.gen()),
        1 | 2 => Condition::Atom(rng.gen_range(0..atoms)),
        _ => Condition::cmp(
            *OPS.choose(rng).unwrap(),
            random_term(rng, atoms, 2),
            random_term(rng, atoms, 2),
        ),
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..7) {
        0 => leaf(rng),
        1 => Condition::Not(Box::new(random_condition(rng, atoms, depth - 1))),
        2 | 3 => {
            let k = rng.gen_range(1..=4);
            Condition::And(
                (0..k)
                    .map(|_| random_condition(rng, atoms, depth - 1))
                    .collect(),
            )
        }
        4 => {
            let k = rng.gen_range(1..=4);
            Condition::Or(
                (0..k)
                    .map(|_| random_condition(rng, atoms, depth - 1))
                    .collect(),
            )
        }
        5 => Condition::implies(
            random_condition(rng, atoms, depth - 1),
            random_condition(rng, atoms, depth - 1),
        ),
        _ => Condition::iff(
            random_condition(rng, atoms, depth - 1),
            random_condition(rng, atoms, depth - 1),
        ),
    }
}
