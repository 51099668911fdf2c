//! Optimization passes and the pipelines that combine them.

mod elide;
mod multi;
mod peephole;
mod single;
mod walk;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::circuit::Circuit;
use crate::cond::DEFAULT_CONFLICT_BUDGET;
use crate::decompose::decompose;
use crate::error::Result;

pub use elide::elide_alloc_dealloc;
pub use multi::run_multi_pass;
pub use peephole::run_peephole;
pub use single::run_single_pass;

pub const DEFAULT_WINDOW: usize = 1024;

#[derive(Debug, Clone)]
pub struct PassConfig {
    /// Largest instruction distance spanned by one multi-gate group.
    pub window: usize,
    pub enable_single: bool,
    pub enable_multi: bool,
    pub enable_peephole: bool,
    pub solver_budget: u64,
    /// Keep an SMT-LIB2 transcript of every solver interaction.
    pub record_smt2: bool,
}

impl Default for PassConfig {
    fn default() -> Self {
        PassConfig {
            window: DEFAULT_WINDOW,
            enable_single: true,
            enable_multi: true,
            enable_peephole: true,
            solver_budget: DEFAULT_CONFLICT_BUDGET,
            record_smt2: false,
        }
    }
}

impl PassConfig {
    pub fn peephole_only() -> Self {
        PassConfig {
            enable_single: false,
            enable_multi: false,
            ..Self::default()
        }
    }

    pub fn hoare_only() -> Self {
        PassConfig {
            enable_peephole: false,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    TrivialSingle,
    ZeroControl,
    AllOrNoneGroup,
    AllocDeallocPair,
    PeepholeCancel,
    /// Not a removal: a control proven to be 1 was dropped.
    ControlStripped,
    /// Not a removal: the solver gave up, so the gate stays.
    KeptUnknown,
}

impl Reason {
    pub fn removes(self) -> bool {
        !matches!(self, Reason::ControlStripped | Reason::KeptUnknown)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Removal {
    pub index: usize,
    pub reason: Reason,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RemovalLog {
    pub entries: Vec<Removal>,
}

impl RemovalLog {
    pub fn push(&mut self, index: usize, reason: Reason, group: Option<usize>) {
        self.entries.push(Removal {
            index,
            reason,
            group,
        });
    }

    pub fn removed(&self) -> impl Iterator<Item = &Removal> {
        self.entries.iter().filter(|r| r.reason.removes())
    }

    pub fn removed_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.removed().map(|r| r.index).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Removed indices grouped into the units that were removed together,
    /// in removal order.
    pub fn units(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut slot: BTreeMap<usize, usize> = BTreeMap::new();
        for r in self.removed() {
            match r.group.and_then(|g| slot.get(&g).copied()) {
                Some(k) => out[k].push(r.index),
                None => {
                    if let Some(g) = r.group {
                        slot.insert(g, out.len());
                    }
                    out.push(vec![r.index]);
                }
            }
        }
        out
    }

    pub fn count(&self, reason: Reason) -> usize {
        self.entries.iter().filter(|r| r.reason == reason).count()
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        self.entries
            .iter()
            .map(|e| serde_json::to_string(e).expect("plain data serializes") + "\n")
            .collect()
    }
}

/// Drops the instructions at `removed` (sorted or not).
pub fn without(c: &Circuit, removed: &[usize]) -> Circuit {
    let mut drop = vec![false; c.instructions.len()];
    for &i in removed {
        drop[i] = true;
    }
    c.with_instructions(
        c.instructions
            .iter()
            .zip(drop)
            .filter(|(_, d)| !d)
            .map(|(i, _)| i.clone())
            .collect(),
    )
}

/// Reapplies `once` until it stops making changes, so that running the
/// resulting pass twice equals running it once. Log indices are mapped
/// back to `c`.
pub(crate) fn fixpoint(
    c: &Circuit,
    cfg: &PassConfig,
    once: fn(&Circuit, &PassConfig) -> Result<single::PassRun>,
) -> Result<single::PassRun> {
    let mut circuit = c.clone();
    let mut origin: Vec<usize> = (0..c.instructions.len()).collect();
    let mut log = RemovalLog::default();
    let mut smt2: Option<String> = None;
    let mut queries = 0;
    let mut next_group = 0;
    loop {
        let r = once(&circuit, cfg)?;
        queries += r.queries;
        if let Some(s) = r.smt2 {
            let all = smt2.get_or_insert_with(String::new);
            if !all.is_empty() {
                all.push_str("(reset)\n");
            }
            all.push_str(&s);
        }
        let mut top = next_group;
        for e in &r.log.entries {
            let g = e.group.map(|g| g + next_group);
            if let Some(g) = g {
                top = top.max(g + 1);
            }
            let entry = Removal {
                index: origin[e.index],
                reason: e.reason,
                group: g,
            };
            if !log.entries.contains(&entry) {
                log.entries.push(entry);
            }
        }
        next_group = top;
        let changed = r
            .log
            .entries
            .iter()
            .any(|e| e.reason != Reason::KeptUnknown);
        let removed = r.log.removed_indices();
        origin = origin
            .into_iter()
            .enumerate()
            .filter(|(i, _)| removed.binary_search(i).is_err())
            .map(|(_, o)| o)
            .collect();
        circuit = r.circuit;
        if !changed {
            break;
        }
    }
    Ok(single::PassRun {
        circuit,
        log,
        smt2,
        queries,
    })
}

/// Result of a pipeline; log indices refer to the pipeline's input.
#[derive(Debug, Clone)]
pub struct Optimized {
    pub circuit: Circuit,
    pub log: RemovalLog,
    /// (pass name, SMT-LIB2 script) when recording was requested.
    pub smt2: Vec<(String, String)>,
    pub solver_queries: usize,
}

struct Tracker {
    circuit: Circuit,
    origin: Vec<usize>,
    log: RemovalLog,
    next_group: usize,
}

impl Tracker {
    fn new(c: &Circuit) -> Self {
        Tracker {
            circuit: c.clone(),
            origin: (0..c.instructions.len()).collect(),
            log: RemovalLog::default(),
            next_group: 0,
        }
    }

    fn absorb(&mut self, out: Circuit, log: RemovalLog) {
        let mut max_group = None;
        for e in &log.entries {
            let group = e.group.map(|g| {
                max_group = Some(max_group.map_or(g, |m: usize| m.max(g)));
                g + self.next_group
            });
            self.log.push(self.origin[e.index], e.reason, group);
        }
        if let Some(m) = max_group {
            self.next_group += m + 1;
        }
        let removed = log.removed_indices();
        let mut r = removed.iter().peekable();
        let mut origin = Vec::with_capacity(out.instructions.len());
        for (i, o) in self.origin.iter().enumerate() {
            if r.peek() == Some(&&i) {
                r.next();
            } else {
                origin.push(*o);
            }
        }
        debug_assert_eq!(origin.len(), out.instructions.len());
        self.origin = origin;
        self.circuit = out;
    }
}

/// Peephole, then the Hoare passes enabled in `cfg`, then peephole and
/// alloc/dealloc elision; the sequence repeats while it removes anything.
pub fn optimize(c: &Circuit, cfg: &PassConfig) -> Result<Optimized> {
    c.ensure_valid()?;
    let mut t = Tracker::new(c);
    let mut smt2 = Vec::new();
    let mut queries = 0;
    loop {
        let before = t.circuit.instructions.len();
        if cfg.enable_peephole {
            let (o, l) = run_peephole(&t.circuit)?;
            t.absorb(o, l);
        }
        if cfg.enable_single {
            let r = single::run(&t.circuit, cfg)?;
            queries += r.queries;
            smt2.extend(r.smt2.map(|s| ("single".to_string(), s)));
            t.absorb(r.circuit, r.log);
        }
        if cfg.enable_multi {
            let r = multi::run(&t.circuit, cfg)?;
            queries += r.queries;
            smt2.extend(r.smt2.map(|s| ("multi".to_string(), s)));
            t.absorb(r.circuit, r.log);
        }
        if cfg.enable_peephole {
            let (o, l) = run_peephole(&t.circuit)?;
            t.absorb(o, l);
        }
        let (o, l) = elide_alloc_dealloc(&t.circuit)?;
        t.absorb(o, l);
        if t.circuit.instructions.len() == before {
            break;
        }
    }
    Ok(Optimized {
        circuit: t.circuit,
        log: t.log,
        smt2: merge_transcripts(smt2),
        solver_queries: queries,
    })
}

/// One transcript per pass, rounds separated by `(reset)`.
fn merge_transcripts(parts: Vec<(String, String)>) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (pass, script) in parts {
        match out.iter_mut().find(|(p, _)| *p == pass) {
            Some((_, all)) => {
                all.push_str("(reset)\n");
                all.push_str(&script);
            }
            None => out.push((pass, script)),
        }
    }
    out
}

/// Baseline compiler: local cancellation and elision around lowering.
pub fn compile_base(c: &Circuit) -> Result<Circuit> {
    let (c, _) = run_peephole(c)?;
    let (c, _) = elide_alloc_dealloc(&c)?;
    let c = decompose(&c)?;
    Ok(run_peephole(&c)?.0)
}

/// Hoare-enabled compiler: [`optimize`] then lowering and peephole.
pub fn compile_opt(c: &Circuit, cfg: &PassConfig) -> Result<(Circuit, Optimized)> {
    let o = optimize(c, cfg)?;
    let d = decompose(&o.circuit)?;
    Ok((run_peephole(&d)?.0, o))
}
