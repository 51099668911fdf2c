//! Runs a benchmark family through the baseline and Hoare compilers.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::metrics::Metrics;
use crate::opt::{
    compile_base, compile_opt, elide_alloc_dealloc, optimize, run_peephole, Optimized, PassConfig,
};

use super::{
    build_cnot_chain, build_modular_reduce, build_renormalize, map_lnn, LnnParams, ModRedParams,
    RenormParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Renorm,
    Chain,
    Modred,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Renorm, Suite::Chain, Suite::Modred];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Renorm => "renorm",
            Suite::Chain => "chain",
            Suite::Modred => "modred",
        }
    }

    /// The uncompiled benchmark circuit for size `n`.
    pub fn build(self, n: usize) -> Result<Circuit> {
        Ok(match self {
            Suite::Renorm => build_renormalize(RenormParams::new(n)?),
            Suite::Chain => {
                let p = LnnParams::new(n)?;
                map_lnn(&build_cnot_chain(p), p)?
            }
            Suite::Modred => build_modular_reduce(ModRedParams::new(n)?).0,
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Params(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateSet {
    /// Metrics on the circuit as built, multi-controlled gates counted once.
    Native,
    /// Metrics after lowering to CNOT, X, H, S, T, Tdg.
    #[default]
    CliffordT,
}

impl FromStr for GateSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "native" => Ok(GateSet::Native),
            "clifford-t" => Ok(GateSet::CliffordT),
            _ => Err(Error::Params(format!("unknown gate set {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub benchmark: String,
    pub n: usize,
    pub width_opt: usize,
    pub width_base: usize,
    pub depth_opt: usize,
    pub depth_base: usize,
    pub area_ratio: f64,
}

impl BenchRow {
    pub const CSV_HEADER: &'static str =
        "benchmark,n,width_opt,width_base,depth_opt,depth_base,area_ratio";

    pub fn width_ratio(&self) -> f64 {
        self.width_base as f64 / self.width_opt as f64
    }

    pub fn depth_ratio(&self) -> f64 {
        self.depth_base as f64 / self.depth_opt as f64
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.4}",
            self.benchmark,
            self.n,
            self.width_opt,
            self.width_base,
            self.depth_opt,
            self.depth_base,
            self.area_ratio
        )
    }
}

/// Both compiler outputs for one instance.
#[derive(Debug, Clone)]
pub struct BenchRun {
    pub row: BenchRow,
    pub original: Circuit,
    pub base: Circuit,
    pub opt: Circuit,
    pub optimized: Optimized,
}

pub fn run_instance(
    suite: Suite,
    n: usize,
    gate_set: GateSet,
    cfg: &PassConfig,
) -> Result<BenchRun> {
    let original = suite.build(n)?;
    let (base, opt, optimized) = match gate_set {
        GateSet::CliffordT => {
            let base = compile_base(&original)?;
            let (opt, o) = compile_opt(&original, cfg)?;
            (base, opt, o)
        }
        GateSet::Native => {
            let (b, _) = run_peephole(&original)?;
            let (base, _) = elide_alloc_dealloc(&b)?;
            let o = optimize(&original, cfg)?;
            (base, o.circuit.clone(), o)
        }
    };
    let mb = Metrics::of(&base)?;
    let mo = Metrics::of(&opt)?;
    let area = |m: &Metrics| (m.width * m.dag_depth) as f64;
    let row = BenchRow {
        benchmark: suite.name().to_string(),
        n,
        width_opt: mo.width,
        width_base: mb.width,
        depth_opt: mo.dag_depth,
        depth_base: mb.dag_depth,
        area_ratio: if area(&mo) == 0.0 {
            1.0
        } else {
            area(&mb) / area(&mo)
        },
    };
    Ok(BenchRun {
        row,
        original,
        base,
        opt,
        optimized,
    })
}

/// One row per `n`, in the order given.
pub fn run_suite(
    suite: Suite,
    ns: &[usize],
    gate_set: GateSet,
    cfg: &PassConfig,
) -> Result<Vec<BenchRow>> {
    ns.iter()
        .map(|&n| Ok(run_instance(suite, n, gate_set, cfg)?.row))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_rows() {
        let rows = run_suite(
            Suite::Chain,
            &[2, 4, 8],
            GateSet::CliffordT,
            &PassConfig::default(),
        )
        .unwrap();
        for r in rows {
            assert_eq!(r.depth_base, 5 * r.n - 8);
            assert_eq!(r.depth_opt, r.n);
        }
    }

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!("native".parse::<GateSet>().unwrap(), GateSet::Native);
    }

    #[test]
    fn csv_row() {
        let r = BenchRow {
            benchmark: "chain".into(),
            n: 4,
            width_opt: 4,
            width_base: 4,
            depth_opt: 4,
            depth_base: 12,
            area_ratio: 3.0,
        };
        assert_eq!(r.to_csv(), "chain,4,4,4,4,12,3.0000");
    }
}
