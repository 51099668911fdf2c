//! Exhaustive-enumeration decision procedure, used as a test oracle.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::expr::Condition;
use super::state::SatResult;

pub const MAX_BRUTE_VARS: usize = 20;

pub fn brute_force_sat<A: Clone + Ord>(conds: &[Condition<A>]) -> Result<SatResult<A>> {
    let mut atoms: Vec<A> = conds.iter().flat_map(|c| c.atoms()).collect();
    atoms.sort();
    atoms.dedup();
    if atoms.len() > MAX_BRUTE_VARS {
        return Err(Error::VariableBudget {
            needed: atoms.len(),
            limit: MAX_BRUTE_VARS,
        });
    }
    for mask in 0u64..(1u64 << atoms.len()) {
        let val = |a: &A| {
            let i = atoms.binary_search(a).expect("atom collected");
            mask >> i & 1 == 1
        };
        let mut all = true;
        for c in conds {
            match c.eval(&val) {
                Some(true) => {}
                Some(false) => {
                    all = false;
                    break;
                }
                None => return Err(Error::Range("term overflow during enumeration".into())),
            }
        }
        if all {
            let w: BTreeMap<A, bool> = atoms.iter().map(|a| (a.clone(), val(a))).collect();
            return Ok(SatResult::Sat(w));
        }
    }
    Ok(SatResult::Unsat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let a = Condition::Atom(0u8);
        assert!(
            brute_force_sat(&[Condition::and(vec![a.clone(), Condition::not(a.clone())])])
                .unwrap()
                .is_unsat()
        );
        assert!(brute_force_sat::<u8>(&[Condition::Const(true)])
            .unwrap()
            .is_sat());
        let many: Vec<Condition<u8>> = (0..21).map(Condition::Atom).collect();
        assert!(matches!(
            brute_force_sat(&many),
            Err(Error::VariableBudget { needed: 21, .. })
        ));
    }
}
