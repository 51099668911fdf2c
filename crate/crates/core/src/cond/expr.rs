use std::collections::BTreeSet;

/// One bit inside a register view.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bit<A> {
    Const(bool),
    Atom(A),
}

/// Bit order of a register view: `Msb` means the first listed bit is the
/// most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Msb,
    Lsb,
}

/// Integer-valued terms. Arithmetic is over unbounded integers; `pow2`
/// and `shl` with a negative exponent round toward negative infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term<A> {
    Int(i128),
    Reg { bits: Vec<Bit<A>>, order: Order },
    Shl(Box<Term<A>>, Box<Term<A>>),
    Sub(Box<Term<A>>, Box<Term<A>>),
    Pow2(Box<Term<A>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn apply(self, a: i128, b: i128) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            CmpOp::Eq => "eq",
            CmpOp::Ne => "ne",
            CmpOp::Lt => "lt",
            CmpOp::Le => "le",
            CmpOp::Gt => "gt",
            CmpOp::Ge => "ge",
        }
    }
}

/// Boolean predicate over atoms of type `A` (qubits in circuit text,
/// SSA variables inside the solver).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Condition<A> {
    Const(bool),
    Atom(A),
    Not(Box<Condition<A>>),
    And(Vec<Condition<A>>),
    Or(Vec<Condition<A>>),
    Implies(Box<Condition<A>>, Box<Condition<A>>),
    Iff(Box<Condition<A>>, Box<Condition<A>>),
    Cmp(CmpOp, Term<A>, Term<A>),
}

/// Largest exponent `pow2`/`shl` may produce; keeps every value in i128.
pub(crate) const MAX_EXPONENT: i128 = 120;

pub(crate) fn pow2(e: i128) -> Option<i128> {
    if e < 0 {
        Some(0)
    } else if e > MAX_EXPONENT {
        None
    } else {
        Some(1i128 << e)
    }
}

pub(crate) fn shl(a: i128, k: i128) -> Option<i128> {
    if k >= 0 {
        if k > MAX_EXPONENT {
            return if a == 0 { Some(0) } else { None };
        }
        a.checked_mul(1i128 << k)
    } else {
        let k = (-k).min(127) as u32;
        Some(a >> k)
    }
}

impl<A> Term<A> {
    pub fn reg(bits: impl IntoIterator<Item = A>, order: Order) -> Self {
        Term::Reg {
            bits: bits.into_iter().map(Bit::Atom).collect(),
            order,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn shl(a: Term<A>, k: Term<A>) -> Self {
        Term::Shl(Box::new(a), Box::new(k))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Term<A>, b: Term<A>) -> Self {
        Term::Sub(Box::new(a), Box::new(b))
    }

    pub fn pow2(e: Term<A>) -> Self {
        Term::Pow2(Box::new(e))
    }

    /// Bits of a register view, least significant first.
    pub(crate) fn lsb_bits(bits: &[Bit<A>], order: Order) -> Vec<&Bit<A>> {
        match order {
            Order::Lsb => bits.iter().collect(),
            Order::Msb => bits.iter().rev().collect(),
        }
    }

    pub fn eval(&self, val: &impl Fn(&A) -> bool) -> Option<i128> {
        Some(match self {
            Term::Int(v) => *v,
            Term::Reg { bits, order } => {
                if bits.len() > 126 {
                    return None;
                }
                Self::lsb_bits(bits, *order)
                    .into_iter()
                    .enumerate()
                    .map(|(i, b)| {
                        let on = match b {
                            Bit::Const(c) => *c,
                            Bit::Atom(a) => val(a),
                        };
                        (on as i128) << i
                    })
                    .sum()
            }
            Term::Shl(a, k) => shl(a.eval(val)?, k.eval(val)?)?,
            Term::Sub(a, b) => a.eval(val)?.checked_sub(b.eval(val)?)?,
            Term::Pow2(e) => pow2(e.eval(val)?)?,
        })
    }

    /// Conservative value interval.
    pub fn range(&self) -> Option<(i128, i128)> {
        Some(match self {
            Term::Int(v) => (*v, *v),
            Term::Reg { bits, .. } => {
                if bits.len() > 120 {
                    return None;
                }
                (0, (1i128 << bits.len()) - 1)
            }
            Term::Sub(a, b) => {
                let (al, ah) = a.range()?;
                let (bl, bh) = b.range()?;
                (al.checked_sub(bh)?, ah.checked_sub(bl)?)
            }
            Term::Pow2(e) => {
                let (el, eh) = e.range()?;
                (pow2(el)?, pow2(eh)?)
            }
            Term::Shl(a, k) => {
                let (al, ah) = a.range()?;
                let (kl, kh) = k.range()?;
                let corners = [shl(al, kl)?, shl(al, kh)?, shl(ah, kl)?, shl(ah, kh)?];
                (
                    *corners.iter().min().unwrap(),
                    *corners.iter().max().unwrap(),
                )
            }
        })
    }

    pub fn map<B>(&self, f: &mut impl FnMut(&A) -> B) -> Term<B> {
        match self {
            Term::Int(v) => Term::Int(*v),
            Term::Reg { bits, order } => Term::Reg {
                bits: bits
                    .iter()
                    .map(|b| match b {
                        Bit::Const(c) => Bit::Const(*c),
                        Bit::Atom(a) => Bit::Atom(f(a)),
                    })
                    .collect(),
                order: *order,
            },
            Term::Shl(a, k) => Term::Shl(Box::new(a.map(f)), Box::new(k.map(f))),
            Term::Sub(a, b) => Term::Sub(Box::new(a.map(f)), Box::new(b.map(f))),
            Term::Pow2(e) => Term::Pow2(Box::new(e.map(f))),
        }
    }

    pub(crate) fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a A)) {
        match self {
            Term::Int(_) => {}
            Term::Reg { bits, .. } => {
                for b in bits {
                    if let Bit::Atom(a) = b {
                        f(a)
                    }
                }
            }
            Term::Shl(a, b) | Term::Sub(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
            Term::Pow2(e) => e.visit_atoms(f),
        }
    }
}

impl<A> Condition<A> {
    pub fn atom(a: A) -> Self {
        Condition::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Condition<A>) -> Self {
        match c {
            Condition::Const(b) => Condition::Const(!b),
            c => Condition::Not(Box::new(c)),
        }
    }

    pub fn and(mut items: Vec<Condition<A>>) -> Self {
        match items.len() {
            0 => Condition::Const(true),
            1 => items.pop().unwrap(),
            _ => Condition::And(items),
        }
    }

    pub fn or(mut items: Vec<Condition<A>>) -> Self {
        match items.len() {
            0 => Condition::Const(false),
            1 => items.pop().unwrap(),
            _ => Condition::Or(items),
        }
    }

    pub fn implies(a: Condition<A>, b: Condition<A>) -> Self {
        Condition::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Condition<A>, b: Condition<A>) -> Self {
        Condition::Iff(Box::new(a), Box::new(b))
    }

    pub fn cmp(op: CmpOp, a: Term<A>, b: Term<A>) -> Self {
        Condition::Cmp(op, a, b)
    }

    /// Direct interpretation. `None` only when a term leaves the
    /// representable range.
    pub fn eval(&self, val: &impl Fn(&A) -> bool) -> Option<bool> {
        Some(match self {
            Condition::Const(b) => *b,
            Condition::Atom(a) => val(a),
            Condition::Not(c) => !c.eval(val)?,
            Condition::And(cs) => {
                let mut r = true;
                for c in cs {
                    r &= c.eval(val)?;
                }
                r
            }
            Condition::Or(cs) => {
                let mut r = false;
                for c in cs {
                    r |= c.eval(val)?;
                }
                r
            }
            Condition::Implies(a, b) => !a.eval(val)? || b.eval(val)?,
            Condition::Iff(a, b) => a.eval(val)? == b.eval(val)?,
            Condition::Cmp(op, a, b) => op.apply(a.eval(val)?, b.eval(val)?),
        })
    }

    pub fn map<B>(&self, f: &mut impl FnMut(&A) -> B) -> Condition<B> {
        match self {
            Condition::Const(b) => Condition::Const(*b),
            Condition::Atom(a) => Condition::Atom(f(a)),
            Condition::Not(c) => Condition::Not(Box::new(c.map(f))),
            Condition::And(cs) => Condition::And(cs.iter().map(|c| c.map(f)).collect()),
            Condition::Or(cs) => Condition::Or(cs.iter().map(|c| c.map(f)).collect()),
            Condition::Implies(a, b) => Condition::Implies(Box::new(a.map(f)), Box::new(b.map(f))),
            Condition::Iff(a, b) => Condition::Iff(Box::new(a.map(f)), Box::new(b.map(f))),
            Condition::Cmp(op, a, b) => Condition::Cmp(*op, a.map(f), b.map(f)),
        }
    }

    pub(crate) fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a A)) {
        match self {
            Condition::Const(_) => {}
            Condition::Atom(a) => f(a),
            Condition::Not(c) => c.visit_atoms(f),
            Condition::And(cs) | Condition::Or(cs) => {
                for c in cs {
                    c.visit_atoms(f)
                }
            }
            Condition::Implies(a, b) | Condition::Iff(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
            Condition::Cmp(_, a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
        }
    }
}

impl<A: Clone + Ord> Condition<A> {
    /// Distinct atoms in sorted order.
    pub fn atoms(&self) -> Vec<A> {
        let mut set = BTreeSet::new();
        self.visit_atoms(&mut |a| {
            set.insert(a.clone());
        });
        set.into_iter().collect()
    }
}
