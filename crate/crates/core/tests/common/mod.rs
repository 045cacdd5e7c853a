#![allow(dead_code)]

use std::sync::Arc;

use forcesynth_core::{Alphabet, Automaton, AutomatonBuilder, Event};

pub fn automaton(
    name: &str,
    alphabet: &Arc<Alphabet>,
    events: &[&str],
    initial: &str,
    marked: &[&str],
    edges: &[(&str, &str, &str)],
) -> Automaton {
    let mut b = AutomatonBuilder::new(name, alphabet.clone());
    b.initial(initial);
    for m in marked {
        b.marked(m);
    }
    for e in events {
        b.event(e).unwrap();
    }
    for (f, e, t) in edges {
        b.transition(f, e, t).unwrap();
    }
    b.build().unwrap()
}

/// Two machines and the alternation spec; `forcible` lists the forcible events.
pub fn line_alphabet(forcible: &[&str]) -> Arc<Alphabet> {
    let ev = |n: &str, c: bool| Event::new(n, c, forcible.contains(&n));
    Arc::new(
        Alphabet::new([
            ev("start_M1", true),
            ev("end_M1", false),
            ev("start_M2", true),
            ev("end_M2", false),
        ])
        .unwrap(),
    )
}

pub fn line_components(a: &Arc<Alphabet>) -> Vec<Automaton> {
    let m1 = automaton(
        "M1",
        a,
        &[],
        "I",
        &["I"],
        &[("I", "start_M1", "B"), ("B", "end_M1", "I")],
    );
    let m2 = automaton(
        "M2",
        a,
        &[],
        "I",
        &["I"],
        &[("I", "start_M2", "B"), ("B", "end_M2", "I")],
    );
    let r = automaton(
        "R",
        a,
        &[],
        "0",
        &["0"],
        &[
            ("0", "end_M1", "1"),
            ("1", "start_M2", "0"),
            ("1", "end_M1", "2"),
            ("0", "start_M1", "0"),
            ("1", "start_M1", "1"),
            ("0", "end_M2", "0"),
            ("1", "end_M2", "1"),
        ],
    );
    vec![m1, m2, r]
}

pub fn line_plant(forcible: &[&str]) -> Automaton {
    let a = line_alphabet(forcible);
    let c = line_components(&a);
    forcesynth_core::sync_product(&c.iter().collect::<Vec<_>>()).unwrap()
}

/// The ten-state product written out by hand.
pub const LINE_PRODUCT: &[(&str, &str, &str)] = &[
    ("II0", "start_M1", "BI0"),
    ("II1", "start_M1", "BI1"),
    ("IB0", "start_M1", "BB0"),
    ("IB1", "start_M1", "BB1"),
    ("II1", "start_M2", "IB0"),
    ("BI1", "start_M2", "BB0"),
    ("BI0", "end_M1", "II1"),
    ("BB0", "end_M1", "IB1"),
    ("BI1", "end_M1", "II2"),
    ("BB1", "end_M1", "IB2"),
    ("IB0", "end_M2", "II0"),
    ("IB1", "end_M2", "II1"),
    ("BB1", "end_M2", "BI1"),
    // sometimes drawn with an end_M1 label; only end_M2 moves M2 from B to I
    ("BB0", "end_M2", "BI0"),
];

pub fn factory_alphabet(forcible: &[&str]) -> Arc<Alphabet> {
    let ev = |n: &str, c: bool| Event::new(n, c, forcible.contains(&n));
    Arc::new(
        Alphabet::new([
            ev("start_M1", true),
            ev("end_M1", false),
            ev("break_M1", false),
            ev("repair_M1", true),
            ev("start_M2", true),
            ev("end_M2", false),
            ev("break_M2", false),
            ev("repair_M2", true),
        ])
        .unwrap(),
    )
}

pub const FACTORY_CONTROLLABLE: &[&str] = &["start_M1", "repair_M1", "start_M2", "repair_M2"];

pub fn factory_components(a: &Arc<Alphabet>) -> Vec<Automaton> {
    let machine = |i: u8| {
        let e = |n: &str| format!("{n}_M{i}");
        let (s, en, b, r) = (e("start"), e("end"), e("break"), e("repair"));
        automaton(
            &format!("M{i}"),
            a,
            &[],
            "I",
            &["I"],
            &[("I", &s, "W"), ("W", &en, "I"), ("W", &b, "D"), ("D", &r, "I")],
        )
    };
    let r1 = automaton(
        "R1",
        a,
        &[],
        "0",
        &["0"],
        &[("0", "end_M1", "1"), ("1", "start_M2", "0"), ("1", "end_M1", "2")],
    );
    let r2 = automaton(
        "R2",
        a,
        &[],
        "N",
        &["N"],
        &[("N", "repair_M1", "N"), ("N", "break_M2", "P"), ("P", "repair_M2", "N")],
    );
    vec![machine(1), machine(2), r1, r2]
}

pub fn factory_plant(forcible: &[&str]) -> Automaton {
    let a = factory_alphabet(forcible);
    let c = factory_components(&a);
    forcesynth_core::sync_product(&c.iter().collect::<Vec<_>>()).unwrap()
}

/// The forcing supervisor of the small factory, with its two forcing states
/// s6 and s19 and the four edges absent from the classic supervisor.
pub const FACTORY_FORCING_SUP: &[(&str, &str, &str)] = &[
    ("s1", "start_M1", "s2"),
    ("s2", "break_M1", "s3"),
    ("s2", "end_M1", "s4"),
    ("s3", "repair_M1", "s1"),
    ("s4", "start_M2", "s5"),
    ("s4", "start_M1", "s6"),
    ("s5", "break_M2", "s10"),
    ("s5", "end_M2", "s1"),
    ("s5", "start_M1", "s7"),
    ("s6", "start_M2", "s7"),
    ("s7", "break_M2", "s13"),
    ("s7", "end_M2", "s2"),
    ("s7", "break_M1", "s12"),
    ("s7", "end_M1", "s14"),
    ("s10", "repair_M2", "s1"),
    ("s10", "start_M1", "s13"),
    ("s12", "break_M2", "s16"),
    ("s12", "end_M2", "s3"),
    ("s12", "repair_M1", "s5"),
    ("s13", "break_M1", "s16"),
    ("s13", "end_M1", "s17"),
    ("s13", "repair_M2", "s2"),
    ("s14", "break_M2", "s17"),
    ("s14", "end_M2", "s4"),
    ("s16", "repair_M2", "s3"),
    ("s17", "repair_M2", "s4"),
    ("s17", "start_M1", "s19"),
    ("s19", "repair_M2", "s6"),
];
pub const FACTORY_FORCING_STATES: &[&str] = &["s6", "s19"];
pub const FACTORY_RED_EDGES: &[(&str, &str, &str)] = &[
    ("s4", "start_M1", "s6"),
    ("s6", "start_M2", "s7"),
    ("s17", "start_M1", "s19"),
    ("s19", "repair_M2", "s6"),
];

pub fn edges_automaton(a: &Arc<Alphabet>, edges: &[(&str, &str, &str)], initial: &str, marked: &[&str]) -> Automaton {
    automaton("expected", a, &[], initial, marked, edges)
}

/// Initial state with one marked successor per event; f1, f2 forcible and
/// uncontrollable, u uncontrollable.
pub fn example1() -> Automaton {
    let a = Arc::new(
        Alphabet::new([
            Event::new("f1", false, true),
            Event::new("f2", false, true),
            Event::uncontrollable("u"),
        ])
        .unwrap(),
    );
    automaton(
        "E1",
        &a,
        &[],
        "q0",
        &["q0", "a", "b", "c"],
        &[("q0", "f1", "a"), ("q0", "f2", "b"), ("q0", "u", "c")],
    )
}
