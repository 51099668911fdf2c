mod common;

use qhoare::cond::{brute_force_sat, check_conditions, SatResult, DEFAULT_CONFLICT_BUDGET};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn cdcl_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sat = 0;
    for _ in 0..600 {
        let atoms = rand::Rng::gen_range(&mut rng, 1..=14);
        let c = common::random_condition(&mut rng, atoms, 3);
        let fast = check_conditions(std::slice::from_ref(&c), DEFAULT_CONFLICT_BUDGET).unwrap();
        let slow = brute_force_sat(std::slice::from_ref(&c)).unwrap();
        assert_eq!(fast.is_unsat(), slow.is_unsat(), "{c:?}");
        if let SatResult::Sat(w) = fast {
            sat += 1;
            assert_eq!(
                c.eval(&|a| w.get(a).copied().unwrap_or(false)),
                Some(true),
                "{c:?}"
            );
        }
    }
    assert!(sat > 100 && sat < 550, "{sat} satisfiable");
}
