//! A CDCL SAT solver: two watched literals, first-UIP learning, VSIDS
//! branching with phase saving, Luby restarts, and solving under
//! assumptions so callers can enable and retract groups of clauses.

use std::ops::Not;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: u32, positive: bool) -> Lit {
        Lit(var << 1 | (!positive) as u32)
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    fn code(self) -> usize {
        self.0 as usize
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

const NO_REASON: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Sat,
    Unsat,
    Unknown,
}

#[derive(Debug)]
struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
}

/// Indexed max-heap keyed by variable activity.
#[derive(Debug, Default)]
struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<usize>,
}

const NOT_IN_HEAP: usize = usize::MAX;

impl VarHeap {
    fn grow(&mut self, n: usize) {
        self.pos.resize(n, NOT_IN_HEAP);
    }

    fn contains(&self, v: u32) -> bool {
        self.pos[v as usize] != NOT_IN_HEAP
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v as usize] = self.heap.len();
        self.heap.push(v);
        self.up(self.heap.len() - 1, act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap.swap_remove(0);
        self.pos[top as usize] = NOT_IN_HEAP;
        if !self.heap.is_empty() {
            self.pos[self.heap[0] as usize] = 0;
            self.down(0, act);
        }
        Some(top)
    }

    fn bumped(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            self.up(self.pos[v as usize], act);
        }
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if act[self.heap[parent] as usize] >= act[v as usize] {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i] as usize] = i;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i;
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let l = 2 * i + 1;
            if l >= self.heap.len() {
                break;
            }
            let r = l + 1;
            let child =
                if r < self.heap.len() && act[self.heap[r] as usize] > act[self.heap[l] as usize] {
                    r
                } else {
                    l
                };
            if act[self.heap[child] as usize] <= act[v as usize] {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i] as usize] = i;
            i = child;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i;
    }
}

#[derive(Debug)]
pub struct Solver {
    /// 0 unassigned, 1 true, -1 false
    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    polarity: Vec<bool>,
    activity: Vec<f64>,
    seen: Vec<bool>,
    var_inc: f64,
    heap: VarHeap,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    clauses: Vec<Clause>,
    watches: Vec<Vec<u32>>,
    ok: bool,
    model: Vec<bool>,
    num_learnt: usize,
    pub conflicts: u64,
}

impl Default for Solver {
    fn default() -> Self {
        Self::new()
    }
}

fn luby(y: f64, mut x: u64) -> f64 {
    let (mut size, mut seq) = (1u64, 0i32);
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq)
}

impl Solver {
    pub fn new() -> Self {
        Solver {
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            polarity: Vec::new(),
            activity: Vec::new(),
            seen: Vec::new(),
            var_inc: 1.0,
            heap: VarHeap::default(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            clauses: Vec::new(),
            watches: Vec::new(),
            ok: true,
            model: Vec::new(),
            num_learnt: 0,
            conflicts: 0,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn new_var(&mut self) -> u32 {
        let v = self.assigns.len() as u32;
        self.assigns.push(0);
        self.level.push(0);
        self.reason.push(NO_REASON);
        self.polarity.push(false);
        self.activity.push(0.0);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.heap.grow(self.assigns.len());
        self.heap.insert(v, &self.activity);
        v
    }

    fn value(&self, l: Lit) -> i8 {
        let a = self.assigns[l.var() as usize];
        if l.is_positive() {
            a
        } else {
            -a
        }
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        let v = l.var() as usize;
        self.assigns[v] = if l.is_positive() { 1 } else { -1 };
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Adds a permanent clause. Returns false once the clause set is
    /// unsatisfiable without assumptions.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        debug_assert_eq!(self.decision_level(), 0);
        if !self.ok {
            return false;
        }
        let mut ls: Vec<Lit> = lits.to_vec();
        ls.sort();
        ls.dedup();
        let mut out = Vec::with_capacity(ls.len());
        for (i, &l) in ls.iter().enumerate() {
            if i + 1 < ls.len() && ls[i + 1] == !l {
                return true;
            }
            match self.value(l) {
                1 => return true,
                -1 => {}
                _ => out.push(l),
            }
        }
        match out.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(out[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
                self.ok
            }
            _ => {
                self.attach(out, false);
                true
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> u32 {
        let idx = self.clauses.len() as u32;
        self.watches[lits[0].code()].push(idx);
        self.watches[lits[1].code()].push(idx);
        self.clauses.push(Clause { lits, learnt });
        if learnt {
            self.num_learnt += 1;
        }
        idx
    }

    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let mut i = 0;
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i] as usize;
                {
                    let lits = &mut self.clauses[ci].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[ci].lits[0];
                if self.value(first) == 1 {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..self.clauses[ci].lits.len() {
                    let l = self.clauses[ci].lits[k];
                    if self.value(l) != -1 {
                        self.clauses[ci].lits.swap(1, k);
                        self.watches[l.code()].push(ci as u32);
                        ws.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                if self.value(first) == -1 {
                    conflict = Some(ci as u32);
                    break;
                }
                self.enqueue(first, ci as u32);
                i += 1;
            }
            let rest = std::mem::take(&mut self.watches[false_lit.code()]);
            ws.extend(rest);
            self.watches[false_lit.code()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: u32) {
        let a = &mut self.activity[v as usize];
        *a += self.var_inc;
        if *a > 1e100 {
            for x in self.activity.iter_mut() {
                *x *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v, &self.activity);
    }

    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, usize) {
        let dl = self.decision_level() as u32;
        let mut learnt = vec![Lit(0)];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        loop {
            let start = usize::from(p.is_some());
            let n = self.clauses[confl as usize].lits.len();
            for j in start..n {
                let q = self.clauses[confl as usize].lits[j];
                let v = q.var() as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump(q.var());
                    self.seen[v] = true;
                    if self.level[v] >= dl {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var() as usize] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            confl = self.reason[lit.var() as usize];
            self.seen[lit.var() as usize] = false;
            path -= 1;
            if path == 0 {
                break;
            }
        }
        learnt[0] = !p.unwrap();
        for l in &learnt[1..] {
            self.seen[l.var() as usize] = false;
        }
        let mut bt = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var() as usize] > self.level[learnt[max_i].var() as usize] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            bt = self.level[learnt[1].var() as usize] as usize;
        }
        (learnt, bt)
    }

    fn backtrack(&mut self, lvl: usize) {
        if self.decision_level() <= lvl {
            return;
        }
        let lim = self.trail_lim[lvl];
        for i in (lim..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var() as usize;
            self.polarity[v] = l.is_positive();
            self.assigns[v] = 0;
            self.reason[v] = NO_REASON;
            self.heap.insert(l.var(), &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(lvl);
        self.qhead = lim;
    }

    /// Drops the longer half of the learnt clauses. Only valid at level 0.
    fn reduce_learnts(&mut self) {
        let mut sizes: Vec<usize> = self
            .clauses
            .iter()
            .filter(|c| c.learnt)
            .map(|c| c.lits.len())
            .collect();
        sizes.sort_unstable();
        let cutoff = sizes[sizes.len() / 2];
        let old = std::mem::take(&mut self.clauses);
        self.num_learnt = 0;
        for w in self.watches.iter_mut() {
            w.clear();
        }
        for r in self.reason.iter_mut() {
            *r = NO_REASON;
        }
        for c in old {
            if c.learnt && c.lits.len() > cutoff {
                continue;
            }
            if c.lits.iter().any(|&l| self.value(l) == 1) {
                continue;
            }
            self.attach(c.lits, c.learnt);
        }
    }

    /// Decides satisfiability under `assumptions`, giving up after
    /// `budget` conflicts.
    pub fn solve(&mut self, assumptions: &[Lit], budget: u64) -> Outcome {
        if !self.ok {
            return Outcome::Unsat;
        }
        self.backtrack(0);
        if self.num_learnt > 4000 + self.clauses.len() / 2 {
            self.reduce_learnts();
        }
        let mut conflicts_here = 0u64;
        let mut restart_no = 0u64;
        let mut restart_limit = (luby(2.0, 0) * 100.0) as u64;
        let mut since_restart = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.conflicts += 1;
                conflicts_here += 1;
                since_restart += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Outcome::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                self.backtrack(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let first = learnt[0];
                    let ci = self.attach(learnt, true);
                    self.enqueue(first, ci);
                }
                self.var_inc /= 0.95;
                if conflicts_here >= budget {
                    self.backtrack(0);
                    return Outcome::Unknown;
                }
                continue;
            }
            if since_restart >= restart_limit {
                since_restart = 0;
                restart_no += 1;
                restart_limit = (luby(2.0, restart_no) * 100.0) as u64;
                self.backtrack(0);
                continue;
            }
            let dl = self.decision_level();
            let next = if dl < assumptions.len() {
                let a = assumptions[dl];
                match self.value(a) {
                    1 => {
                        self.trail_lim.push(self.trail.len());
                        continue;
                    }
                    -1 => {
                        self.backtrack(0);
                        return Outcome::Unsat;
                    }
                    _ => a,
                }
            } else {
                let mut pick = None;
                while let Some(v) = self.heap.pop(&self.activity) {
                    if self.assigns[v as usize] == 0 {
                        pick = Some(Lit::new(v, self.polarity[v as usize]));
                        break;
                    }
                }
                match pick {
                    Some(l) => l,
                    None => {
                        self.model = self.assigns.iter().map(|&a| a == 1).collect();
                        self.backtrack(0);
                        return Outcome::Sat;
                    }
                }
            };
            self.trail_lim.push(self.trail.len());
            self.enqueue(next, NO_REASON);
        }
    }

    /// Value of `v` in the last satisfying assignment.
    pub fn model_value(&self, v: u32) -> bool {
        self.model.get(v as usize).copied().unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lits(s: &mut Solver, n: usize) -> Vec<u32> {
        (0..n).map(|_| s.new_var()).collect()
    }

    #[test]
    fn luby_prefix() {
        let seq: Vec<f64> = (0..7).map(|i| luby(2.0, i)).collect();
        assert_eq!(seq, vec![1.0, 1.0, 2.0, 1.0, 1.0, 2.0, 4.0]);
    }

    #[test]
    fn trivial_unsat_and_sat() {
        let mut s = Solver::new();
        let v = lits(&mut s, 1)[0];
        s.add_clause(&[Lit::new(v, true)]);
        assert_eq!(s.solve(&[], 1000), Outcome::Sat);
        assert!(s.model_value(v));
        assert_eq!(s.solve(&[Lit::new(v, false)], 1000), Outcome::Unsat);
        assert_eq!(s.solve(&[], 1000), Outcome::Sat);
    }

    /// Pigeonhole: n+1 pigeons into n holes is unsat.
    #[test]
    fn pigeonhole() {
        for n in 2..=5 {
            let mut s = Solver::new();
            let p: Vec<Vec<u32>> = (0..=n).map(|_| lits(&mut s, n)).collect();
            for row in &p {
                let c: Vec<Lit> = row.iter().map(|&v| Lit::new(v, true)).collect();
                s.add_clause(&c);
            }
            for (a, pa) in p.iter().enumerate() {
                for pb in &p[a + 1..] {
                    for (&x, &y) in pa.iter().zip(pb) {
                        s.add_clause(&[Lit::new(x, false), Lit::new(y, false)]);
                    }
                }
            }
            assert_eq!(s.solve(&[], 1_000_000), Outcome::Unsat, "n = {n}");
        }
    }

    #[test]
    fn assumptions_do_not_stick() {
        let mut s = Solver::new();
        let v = lits(&mut s, 3);
        // v0 -> v1, v1 -> v2
        s.add_clause(&[Lit::new(v[0], false), Lit::new(v[1], true)]);
        s.add_clause(&[Lit::new(v[1], false), Lit::new(v[2], true)]);
        assert_eq!(
            s.solve(&[Lit::new(v[0], true), Lit::new(v[2], false)], 100),
            Outcome::Unsat
        );
        assert_eq!(s.solve(&[Lit::new(v[0], true)], 100), Outcome::Sat);
        assert!(s.model_value(v[2]));
    }

    #[test]
    fn budget_yields_unknown() {
        let n = 8;
        let mut s = Solver::new();
        let p: Vec<Vec<u32>> = (0..=n).map(|_| lits(&mut s, n)).collect();
        for row in &p {
            let c: Vec<Lit> = row.iter().map(|&v| Lit::new(v, true)).collect();
            s.add_clause(&c);
        }
        for (a, pa) in p.iter().enumerate() {
            for pb in &p[a + 1..] {
                for (&x, &y) in pa.iter().zip(pb) {
                    s.add_clause(&[Lit::new(x, false), Lit::new(y, false)]);
                }
            }
        }
        assert_eq!(s.solve(&[], 5), Outcome::Unknown);
    }
}
