use qhoare::circuit::{Circuit, GateKind, Instruction, OpKind, QubitId, Rule};
use qhoare::metrics::Metrics;
use qhoare::text::{parse, parse_unchecked, serialize};
use qhoare::Error;

const SAMPLE: &str = "\
# every instruction form
input x0
input x1
alloc a
alloc b
h a
s a
t b
tdg b
x x0
cx a b
ccx x0 x1 a
mcx x0 x1 b a
swap a b
cswap x0 a b
ctrl x1 h a
ctrl x0 x1 t b
assert (and (eq a b) (lt x0 (sub 3 x1)))
measure a
dealloc b
";

#[test]
fn round_trip_preserves_everything() {
    let c = parse(SAMPLE).unwrap();
    let again = parse(&serialize(&c)).unwrap();
    assert_eq!(c, again);
    assert_eq!(serialize(&again), serialize(&c));
    assert_eq!(c.inputs().len(), 2);
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let c = parse("\n# nothing\nalloc q   # trailing\n\n  h q\n").unwrap();
    assert_eq!(c.instructions.len(), 2);
    assert!(parse("").unwrap().instructions.is_empty());
}

#[test]
fn syntax_errors_carry_line_numbers() {
    for (src, line) in [
        ("alloc a\nfrob a\n", 2),
        ("alloc a\nh b\n", 2),
        ("alloc a\nalloc a\n", 2),
        ("alloc h\n", 1),
        ("alloc a\nalloc b\ncx a\n", 3),
        ("alloc a\nassert (and a\n", 2),
        ("alloc a\nctrl a a\n", 2),
    ] {
        match parse(src) {
            Err(Error::Syntax { line: l, .. }) => assert_eq!(l, line, "{src:?}"),
            other => panic!("{src:?}: {other:?}"),
        }
    }
}

#[test]
fn lifetime_violations() {
    type Case = (&'static str, fn(&Rule) -> bool);
    let cases: [Case; 3] = [
        ("alloc a\ndealloc a\nh a\n", |r| {
            matches!(r, Rule::UseAfterDealloc(_))
        }),
        ("alloc a\ncx a a\n", |r| matches!(r, Rule::Overlap(_))),
        ("alloc a\nalloc b\nswap a a\n", |r| {
            matches!(r, Rule::Duplicate(_))
        }),
    ];
    for (src, want) in cases {
        let c = parse_unchecked(src).unwrap();
        let v = c.validate();
        assert!(v.iter().any(|x| want(&x.rule)), "{src:?}: {v:?}");
        assert!(matches!(parse(src), Err(Error::Invalid(_))));
    }
}

#[test]
fn builder_matches_text() {
    let mut c = Circuit::new();
    let q = c.alloc_register("q", 3);
    c.h(q[0]);
    c.ccx(q[0], q[1], q[2]);
    c.dealloc(q[2]);
    let text = "alloc q0\nalloc q1\nalloc q2\nh q0\nccx q0 q1 q2\ndealloc q2\n";
    assert_eq!(parse(text).unwrap(), c);
    assert_eq!(serialize(&c), text);
}

#[test]
fn hand_built_invalid_circuit() {
    let mut c = Circuit::new();
    let a = c.alloc("a");
    c.push(Instruction::gate(GateKind::X, vec![], vec![a, QubitId(7)]));
    let rules: Vec<Rule> = c.validate().into_iter().map(|v| v.rule).collect();
    assert!(rules.contains(&Rule::UnknownQubit(QubitId(7))));
    assert!(rules.contains(&Rule::Arity {
        expected: 1,
        got: 2
    }));
    assert!(Metrics::of(&c).is_err());
}

#[test]
fn metrics_of_sample() {
    let c = parse(SAMPLE).unwrap();
    let m = Metrics::of(&c).unwrap();
    assert_eq!(m.width, 4);
    assert_eq!(m.gates(), c.gate_count());
    assert_eq!(m.gate_counts["ccx"], 1);
    assert!(m.dag_depth <= c.gate_count());
    let gates: usize = c
        .instructions
        .iter()
        .filter(|i| matches!(i.op, OpKind::Gate(_)))
        .count();
    assert_eq!(gates, m.gates());
}
