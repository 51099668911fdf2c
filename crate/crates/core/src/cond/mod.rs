//! Condition language over qubit variables and a complete decision
//! procedure for it (bit-blasting to CNF plus a CDCL solver).

mod blast;
pub mod brute;
mod expr;
mod parse;
pub mod sat;
pub mod smt2;
mod state;

pub use blast::Encoder;
pub use brute::brute_force_sat;
pub use expr::{Bit, CmpOp, Condition, Order, Term};
pub use parse::{parse_condition, print_condition, NumberedQubits, SexprAtoms};
pub use state::{check_conditions, SatResult, SymbolicState, Var, DEFAULT_CONFLICT_BUDGET};
