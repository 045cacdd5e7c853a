mod common;

use std::sync::Arc;

use common::*;
use forcesynth_core::check::{
    check_controllable, check_forcible, check_forcibly_controllable, check_supervisor_fc,
    Location, Violation,
};
use forcesynth_core::oracle::{brute_force_supremal, oracle_compare};
use forcesynth_core::{
    plantify, sync_product, synthesize, Alphabet, Automaton, Error, Event, Mode, StringSample,
};

fn sample(p: &Automaton, words: &[&[&str]]) -> StringSample {
    StringSample::from_names(p.alphabet(), words).unwrap()
}

#[test]
fn example1_k1_k2_pass() {
    let p = example1();
    for k in [&[&[][..], &["f1"]][..], &[&[], &["f2"]]] {
        let k = sample(&p, k);
        assert!(check_forcibly_controllable(&k, &p).unwrap().holds);
        assert!(check_forcible(&k, &p).unwrap().holds);
        // dropping u is not controllable
        assert!(!check_controllable(&k, &p).unwrap().holds);
    }
}

#[test]
fn example1_intersection_fails_both() {
    let p = example1();
    let k = sample(&p, &[&[]]);
    for rep in [
        check_forcibly_controllable(&k, &p).unwrap(),
        check_forcible(&k, &p).unwrap(),
    ] {
        assert!(!rep.holds);
        let w = rep.first_witness().unwrap();
        assert_eq!(w.at, Location::String(vec![]));
        assert_eq!(w.violation, Violation::NoForcibleContinuation);
    }
}

#[test]
fn example1_union_is_fc() {
    let p = example1();
    let k = sample(&p, &[&[], &["f1"], &["f2"]]);
    assert!(check_forcibly_controllable(&k, &p).unwrap().holds);
}

#[test]
fn example1_oracle_union() {
    let p = example1();
    let s = brute_force_supremal(&p, 3).unwrap();
    assert_eq!(s.to_names(p.alphabet()).len(), 4);
    assert!(s.contains(&[p.alphabet().id("u").unwrap()]));
    assert!(oracle_compare(&p, 3).unwrap().holds);
}

#[test]
fn example1_with_specification() {
    // fold F = {ε, f1, f2} into the plant: the result is exactly F
    let p = example1();
    let a = p.alphabet_arc().clone();
    let spec = automaton(
        "F",
        &a,
        &["u"],
        "q0",
        &["q0", "a", "b"],
        &[("q0", "f1", "a"), ("q0", "f2", "b")],
    );
    let g = sync_product(&[&p, &plantify(&spec)]).unwrap();
    let r = synthesize(&g, Mode::ForciblyControllable);
    let lang = r.supervisor.bounded_language(3, true).unwrap();
    assert_eq!(lang.strings, sample(&g, &[&[], &["f1"], &["f2"]]).strings);
    assert!(check_supervisor_fc(&r.supervisor, &g).unwrap().holds);
}

fn triple_alphabet() -> Arc<Alphabet> {
    Arc::new(Alphabet::new([Event::new("f", true, true), Event::uncontrollable("u")]).unwrap())
}

#[test]
fn transitivity_fails() {
    let a = triple_alphabet();
    // plants whose marked languages are the prefix closures of F2 and F3
    let p2 = automaton("P2", &a, &[], "0", &["0", "1"], &[("0", "f", "1")]);
    let p3 = automaton(
        "P3",
        &a,
        &[],
        "0",
        &["0", "1", "2"],
        &[("0", "f", "1"), ("0", "u", "2")],
    );
    let f1 = sample(&p2, &[&[]]);
    let f2 = sample(&p3, &[&[], &["f"]]);
    assert!(check_forcibly_controllable(&f1, &p2).unwrap().holds);
    assert!(check_forcibly_controllable(&f2, &p3).unwrap().holds);
    let rep = check_forcibly_controllable(&f1, &p3).unwrap();
    assert!(!rep.holds);
    assert_eq!(rep.first_witness().unwrap().event, "u");
    // a fortiori not controllable
    let c = check_controllable(&f1, &p3).unwrap();
    assert!(!c.holds);
    assert_eq!(c.first_witness().unwrap().violation, Violation::UncontrollableExit);
    // and F3 is controllable in its own plant
    let f3 = sample(&p3, &[&[], &["f"], &["u"]]);
    assert!(check_controllable(&f3, &p3).unwrap().holds);
}

#[test]
fn forcible_needs_more_than_fc() {
    // only a controllable event at the root, no forcible event
    let a = Arc::new(Alphabet::new([Event::controllable("c")]).unwrap());
    let p = automaton("P", &a, &[], "0", &["0", "1"], &[("0", "c", "1")]);
    let eps = sample(&p, &[&[]]);
    assert!(check_controllable(&eps, &p).unwrap().holds);
    assert!(check_forcibly_controllable(&eps, &p).unwrap().holds);
    assert!(!check_forcible(&eps, &p).unwrap().holds);
}

#[test]
fn not_a_sublanguage() {
    let p = example1();
    let k = sample(&p, &[&["f1", "f2"]]);
    assert!(matches!(
        check_forcibly_controllable(&k, &p),
        Err(Error::NotSublanguage(_))
    ));
}

#[test]
fn plant_itself_is_controllable() {
    for p in [line_plant(&["start_M2"]), factory_plant(FACTORY_CONTROLLABLE)] {
        let rep = check_supervisor_fc(&p, &p).unwrap();
        assert!(rep.holds);
        assert!(rep
            .classes
            .iter()
            .all(|(_, c)| *c == forcesynth_core::check::StateClass::ControllableOk));
    }
}

#[test]
fn supervisor_must_be_subautomaton() {
    let p = line_plant(&["start_M2"]);
    let other = factory_plant(FACTORY_CONTROLLABLE);
    assert!(matches!(
        check_supervisor_fc(&other, &p),
        Err(Error::NotSubautomaton(_))
    ));
}
