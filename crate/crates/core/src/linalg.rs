//! Small dense complex matrices for gate algebra (products, commutators,
//! control-set checks). Basis index bit `j` is qubit `j` of the support.

use num_complex::Complex64;

use crate::circuit::{GateKind, Instruction, QubitId};

pub type C = Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub dim: usize,
    pub data: Vec<C>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![C::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, C::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: &[&[C]]) -> Self {
        let dim = rows.len();
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Matrix { dim, data }
    }

    pub fn get(&self, r: usize, c: usize) -> C {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C) {
        self.data[r * self.dim + c] = v;
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.dim, o.dim);
        let n = self.dim;
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    m.data[i * n + j] += a * o.get(k, j);
                }
            }
        }
        m
    }

    pub fn adjoint(&self) -> Matrix {
        let n = self.dim;
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(j, i, self.get(i, j).conj());
            }
        }
        m
    }

    /// `self ⊗ o` where `o` occupies the low-order bits.
    pub fn kron(&self, o: &Matrix) -> Matrix {
        let n = self.dim * o.dim;
        let mut m = Matrix::zeros(n);
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..o.dim {
                    for l in 0..o.dim {
                        m.set(i * o.dim + k, j * o.dim + l, self.get(i, j) * o.get(k, l));
                    }
                }
            }
        }
        m
    }

    pub fn approx_eq(&self, o: &Matrix, tol: f64) -> bool {
        self.dim == o.dim
            && self
                .data
                .iter()
                .zip(&o.data)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Equal up to a global phase factor.
    pub fn eq_up_to_phase(&self, o: &Matrix, tol: f64) -> bool {
        if self.dim != o.dim {
            return false;
        }
        let Some((i, b)) = o
            .data
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.norm().partial_cmp(&y.1.norm()).unwrap())
        else {
            return true;
        };
        if b.norm() <= tol {
            return self.approx_eq(o, tol);
        }
        let phase = self.data[i] / b;
        if (phase.norm() - 1.0).abs() > tol {
            return false;
        }
        self.data
            .iter()
            .zip(&o.data)
            .all(|(a, b)| (a - phase * b).norm() <= tol)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&Matrix::identity(self.dim), tol)
    }

    pub fn is_identity_up_to_phase(&self, tol: f64) -> bool {
        self.eq_up_to_phase(&Matrix::identity(self.dim), tol)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint().mul(self).is_identity(tol)
    }

    pub fn commutes_with(&self, o: &Matrix, tol: f64) -> bool {
        self.mul(o).approx_eq(&o.mul(self), tol)
    }
}

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Unitary of an uncontrolled gate on its targets (target `i` is bit `i`).
pub fn gate_matrix(g: GateKind) -> Matrix {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match g {
        GateKind::X => Matrix::from_rows(&[&[o, l], &[l, o]]),
        GateKind::H => Matrix::from_rows(&[&[c(r, 0.0), c(r, 0.0)], &[c(r, 0.0), c(-r, 0.0)]]),
        GateKind::S => Matrix::from_rows(&[&[l, o], &[o, c(0.0, 1.0)]]),
        GateKind::T => Matrix::from_rows(&[&[l, o], &[o, c(r, r)]]),
        GateKind::Tdg => Matrix::from_rows(&[&[l, o], &[o, c(r, -r)]]),
        GateKind::Swap => {
            Matrix::from_rows(&[&[l, o, o, o], &[o, o, l, o], &[o, l, o, o], &[o, o, o, l]])
        }
    }
}

/// Unitary of a (possibly controlled) gate embedded in `support`.
pub fn embed(g: &Matrix, controls: &[usize], targets: &[usize], n: usize) -> Matrix {
    let dim = 1usize << n;
    let mut m = Matrix::zeros(dim);
    let cmask: usize = controls.iter().map(|&q| 1 << q).sum();
    for col in 0..dim {
        if col & cmask != cmask {
            m.set(col, col, c(1.0, 0.0));
            continue;
        }
        let s: usize = targets
            .iter()
            .enumerate()
            .map(|(i, &q)| (col >> q & 1) << i)
            .sum();
        let base = targets.iter().fold(col, |acc, &q| acc & !(1 << q));
        for s2 in 0..g.dim {
            let v = g.get(s2, s);
            if v.norm_sqr() == 0.0 {
                continue;
            }
            let row = targets
                .iter()
                .enumerate()
                .fold(base, |acc, (i, &q)| acc | ((s2 >> i & 1) << q));
            m.set(row, col, v);
        }
    }
    m
}

/// Unitary of a gate instruction on the given qubit support.
pub fn instruction_matrix(ins: &Instruction, support: &[QubitId]) -> Option<Matrix> {
    let g = ins.gate_kind()?;
    let pos = |q: &QubitId| support.iter().position(|s| s == q);
    let controls = ins.controls.iter().map(pos).collect::<Option<Vec<_>>>()?;
    let targets = ins.targets.iter().map(pos).collect::<Option<Vec<_>>>()?;
    Some(embed(&gate_matrix(g), &controls, &targets, support.len()))
}

/// Product `U_k ⋯ U_1` of a gate sequence over the union of its qubits.
pub fn sequence_matrix<'a>(
    seq: impl IntoIterator<Item = &'a Instruction>,
    support: &[QubitId],
) -> Option<Matrix> {
    let mut m = Matrix::identity(1 << support.len());
    for ins in seq {
        m = instruction_matrix(ins, support)?.mul(&m);
    }
    Some(m)
}
