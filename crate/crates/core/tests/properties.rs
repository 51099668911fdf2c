use proptest::prelude::*;
use qhoare::circuit::{Circuit, GateKind, QubitId};
use qhoare::metrics::Metrics;
use qhoare::opt::{optimize, PassConfig};
use qhoare::text::{parse, serialize};

#[derive(Debug, Clone)]
enum Step {
    Gate(GateKind, Vec<usize>),
    Dealloc(usize),
    Measure(usize),
}

fn step(n: usize) -> impl Strategy<Value = Step> {
    let kinds = prop::sample::select(GateKind::ALL.to_vec());
    prop_oneof![
        8 => (kinds, Just((0..n).collect::<Vec<usize>>()).prop_shuffle(), 0..3usize)
            .prop_map(move |(k, perm, extra)| {
                let take = (k.arity() + if matches!(k, GateKind::X | GateKind::Swap) { extra } else { 0 }).min(n);
                Step::Gate(k, perm[..take].to_vec())
            }),
        1 => (0..n).prop_map(Step::Dealloc),
        1 => (0..n).prop_map(Step::Measure),
    ]
}

fn circuit() -> impl Strategy<Value = Circuit> {
    (2..6usize, prop::collection::vec(any::<bool>(), 6))
        .prop_flat_map(|(n, inputs)| (Just(n), Just(inputs), prop::collection::vec(step(n), 0..24)))
        .prop_map(|(n, inputs, steps)| {
            let mut c = Circuit::new();
            let qs: Vec<QubitId> = (0..n)
                .map(|i| {
                    if inputs[i] {
                        c.input(format!("i{i}"))
                    } else {
                        c.alloc(format!("q{i}"))
                    }
                })
                .collect();
            let mut live = vec![true; n];
            for s in steps {
                match s {
                    Step::Gate(k, idx) => {
                        if idx.len() < k.arity() || idx.iter().any(|&i| !live[i]) {
                            continue;
                        }
                        let targets: Vec<QubitId> =
                            idx[..k.arity()].iter().map(|&i| qs[i]).collect();
                        let controls: Vec<QubitId> =
                            idx[k.arity()..].iter().map(|&i| qs[i]).collect();
                        c.gate(k, &controls, &targets);
                    }
                    Step::Dealloc(i) if live[i] && !inputs[i] && c.gate_count() == 0 => {
                        live[i] = false;
                        c.dealloc(qs[i]);
                    }
                    Step::Measure(i) if live[i] => c.measure(qs[i]),
                    _ => {}
                }
            }
            c
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_round_trip(c in circuit()) {
        let text = serialize(&c);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(serialize(&back), text);
    }

    #[test]
    fn metric_invariants(c in circuit()) {
        let m = Metrics::of(&c).unwrap();
        prop_assert!(m.width <= c.num_qubits());
        prop_assert!(m.dag_depth <= m.gates());
        prop_assert_eq!(m.gates(), c.gate_count());
        for q in 0..c.num_qubits() {
            let on_q = c.instructions.iter().filter(|i| i.is_gate() && i.qubits().contains(&QubitId(q as u32))).count();
            prop_assert!(m.dag_depth >= on_q);
        }
    }

    #[test]
    fn optimizer_never_grows_and_is_idempotent(c in circuit()) {
        let cfg = PassConfig::default();
        let once = optimize(&c, &cfg).unwrap();
        let before = Metrics::of(&c).unwrap();
        let after = Metrics::of(&once.circuit).unwrap();
        prop_assert!(after.gates() <= before.gates());
        prop_assert!(after.width <= before.width);
        prop_assert!(after.dag_depth <= before.dag_depth);
        let twice = optimize(&once.circuit, &cfg).unwrap();
        prop_assert_eq!(&twice.circuit, &once.circuit, "{}", serialize(&c));
    }
}
