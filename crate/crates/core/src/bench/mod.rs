//! Benchmark circuit families.

mod chain;
mod modred;
mod renorm;
mod suite;

pub use chain::{build_cnot_chain, map_lnn, LnnParams};
pub use modred::{build_modular_reduce, takahashi_adder, ModRedParams, ModRedQubits};
pub use renorm::{
    build_first_one, build_renormalize, build_shift, first_one_assertion, RenormParams,
    RenormQubits,
};
pub use suite::{run_instance, run_suite, BenchRow, BenchRun, GateSet, Suite};
