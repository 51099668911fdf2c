use std::collections::BTreeMap;

use serde::Serialize;

use crate::circuit::{Circuit, OpKind};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub width: usize,
    pub dag_depth: usize,
    pub gate_counts: BTreeMap<String, usize>,
}

impl Metrics {
    pub fn of(c: &Circuit) -> Result<Metrics> {
        c.ensure_valid()?;
        Ok(Metrics {
            width: width_unchecked(c),
            dag_depth: depth_unchecked(c),
            gate_counts: gate_counts_unchecked(c),
        })
    }

    pub fn gates(&self) -> usize {
        self.gate_counts.values().sum()
    }
}

/// Peak number of simultaneously live qubits.
pub fn width(c: &Circuit) -> Result<usize> {
    c.ensure_valid()?;
    Ok(width_unchecked(c))
}

/// Longest chain of gates linked through shared qubits.
pub fn dag_depth(c: &Circuit) -> Result<usize> {
    c.ensure_valid()?;
    Ok(depth_unchecked(c))
}

pub fn gate_counts(c: &Circuit) -> Result<BTreeMap<String, usize>> {
    c.ensure_valid()?;
    Ok(gate_counts_unchecked(c))
}

fn width_unchecked(c: &Circuit) -> usize {
    let mut live = 0usize;
    let mut peak = 0;
    for ins in &c.instructions {
        match ins.op {
            OpKind::Alloc | OpKind::Input => {
                live += 1;
                peak = peak.max(live);
            }
            OpKind::Dealloc => live -= 1,
            _ => {}
        }
    }
    peak
}

fn depth_unchecked(c: &Circuit) -> usize {
    let mut level = vec![0usize; c.num_qubits()];
    let mut depth = 0;
    for ins in c.instructions.iter().filter(|i| i.is_gate()) {
        let qs = ins.qubits();
        let l = 1 + qs.iter().map(|q| level[q.index()]).max().unwrap_or(0);
        for q in qs {
            level[q.index()] = l;
        }
        depth = depth.max(l);
    }
    depth
}

fn gate_counts_unchecked(c: &Circuit) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for ins in c.instructions.iter().filter(|i| i.is_gate()) {
        *m.entry(ins.name()).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse;

    #[test]
    fn bell_metrics() {
        let c = parse("alloc q0\nalloc q1\nh q0\ncx q0 q1\nmeasure q0\nmeasure q1").unwrap();
        let m = Metrics::of(&c).unwrap();
        assert_eq!(m.width, 2);
        assert_eq!(m.dag_depth, 2);
        assert_eq!(
            m.gate_counts,
            BTreeMap::from([("h".into(), 1), ("cx".into(), 1)])
        );
    }

    #[test]
    fn dealloc_frees_width() {
        let c = parse("alloc a\nx a\nx a\ndealloc a\nalloc b\nalloc c\ncx b c").unwrap();
        assert_eq!(width(&c).unwrap(), 2);
        assert_eq!(dag_depth(&c).unwrap(), 2);
    }
}
