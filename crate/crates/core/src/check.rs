//! Controllability, forcible-controllability and forcibility checks.
//!
//! The language-level checks work on explicit finite samples and are exact
//! when the sample holds the whole language and its depth exceeds the
//! longest member. The state-level check works on a supervisor that is a
//! subautomaton of the plant.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::{Alphabet, EventId};
use crate::automaton::Automaton;
use crate::error::Error;
use crate::language::{format_word, StringSample, Word};
use crate::sets::StateId;

/// The three sublanguage properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    /// Closed under plant-eligible uncontrollable continuations.
    Controllable,
    /// Controllable, or some forcible continuation is kept and every
    /// non-forcible continuation is excluded.
    ForciblyControllable,
    /// As forcibly-controllable, with the first alternative required for
    /// every event rather than only the uncontrollable ones.
    Forcible,
}

impl Property {
    /// Events whose exit from the language needs justification.
    fn guards(self, alphabet: &Alphabet, e: EventId) -> bool {
        match self {
            Property::Controllable | Property::ForciblyControllable => {
                alphabet.is_uncontrollable(e)
            }
            Property::Forcible => true,
        }
    }

    fn allows_forcing(self) -> bool {
        !matches!(self, Property::Controllable)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Controllable => "controllable",
            Property::ForciblyControllable => "forcibly-controllable",
            Property::Forcible => "forcible",
        })
    }
}

/// Where a violation was found.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Location {
    /// A string of the closure, as event names.
    String(Vec<String>),
    /// A supervisor state.
    State(String),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::String(s) if s.is_empty() => f.write_str("ε"),
            Location::String(s) => f.write_str(&s.join("·")),
            Location::State(q) => write!(f, "state {q}"),
        }
    }
}

/// Which clause failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Violation {
    /// A guarded event leaves the language and forcing is not an option.
    UncontrollableExit,
    /// A guarded event leaves the language and no forcible event is kept.
    NoForcibleContinuation,
    /// A forcible event is kept but so is this non-forcible event.
    NonForcibleRetained,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Violation::UncontrollableExit => "uncontrollable exit",
            Violation::NoForcibleContinuation => "exit without forcible continuation",
            Violation::NonForcibleRetained => "non-forcible event kept while forcing",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub at: Location,
    pub event: String,
    pub violation: Violation,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}: {}", self.at, self.event, self.violation)
    }
}

/// Classification of a supervisor state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StateClass {
    ControllableOk,
    ForcingOk,
    Violation,
}

impl fmt::Display for StateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateClass::ControllableOk => "controllable-ok",
            StateClass::ForcingOk => "forcing-ok",
            StateClass::Violation => "violation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub property: Property,
    pub holds: bool,
    /// Violations in canonical order (strings lexicographically, states by name).
    pub witnesses: Vec<Witness>,
    /// Strings shorter than this were checked. `None` for state-level checks.
    pub depth: Option<usize>,
    /// Per-state classification, state-level checks only.
    pub classes: Vec<(String, StateClass)>,
}

impl PropertyReport {
    fn new(property: Property, witnesses: Vec<Witness>, depth: Option<usize>) -> Self {
        Self {
            property,
            holds: witnesses.is_empty(),
            witnesses,
            depth,
            classes: Vec::new(),
        }
    }

    pub fn first_witness(&self) -> Option<&Witness> {
        self.witnesses.first()
    }

    pub fn class_of(&self, state: &str) -> Option<StateClass> {
        self.classes
            .iter()
            .find(|(q, _)| q == state)
            .map(|&(_, c)| c)
    }
}

/// Decides one point (string or state) given the plant-eligible events and
/// the events kept by the candidate.
fn judge(
    alphabet: &Alphabet,
    property: Property,
    eligible: &BTreeSet<EventId>,
    kept: &BTreeSet<EventId>,
) -> Result<StateClass, (EventId, Violation)> {
    let Some(&exit) = eligible
        .iter()
        .find(|&&e| property.guards(alphabet, e) && !kept.contains(&e))
    else {
        return Ok(StateClass::ControllableOk);
    };
    if !property.allows_forcing() {
        return Err((exit, Violation::UncontrollableExit));
    }
    if !kept.iter().any(|&e| alphabet.is_forcible(e)) {
        return Err((exit, Violation::NoForcibleContinuation));
    }
    match kept.iter().find(|&&e| !alphabet.is_forcible(e)) {
        Some(&n) => Err((n, Violation::NonForcibleRetained)),
        None => Ok(StateClass::ForcingOk),
    }
}

/// E_F(s): the events σ with sσ in the closure.
pub fn continuation_events(
    closure: &BTreeSet<Word>,
    s: &[EventId],
    candidates: impl IntoIterator<Item = EventId>,
) -> BTreeSet<EventId> {
    let mut probe: Word = s.to_vec();
    probe.push(EventId(0));
    let last = probe.len() - 1;
    candidates
        .into_iter()
        .filter(|&e| {
            probe[last] = e;
            closure.contains(&probe)
        })
        .collect()
}

/// Checks `f` against `plant` for strings of its closure shorter than `horizon`.
///
/// `f` must be a set of marked strings of the plant, over the plant's alphabet.
pub fn check_language(
    f: &StringSample,
    plant: &Automaton,
    property: Property,
    horizon: usize,
) -> Result<PropertyReport, Error> {
    let alphabet = plant.alphabet();
    for w in &f.strings {
        if w.iter().any(|e| e.index() >= alphabet.len())
            || !plant.run(w).is_some_and(|q| plant.is_marked(q))
        {
            return Err(Error::NotSublanguage(format_word(alphabet, w)));
        }
    }
    let closure = f.closure();
    let mut witnesses = Vec::new();
    for s in closure.iter().filter(|s| s.len() < horizon) {
        let q = plant.run(s).expect("prefix of a plant string");
        let eligible = plant.eligible(q);
        let kept = continuation_events(&closure, s, eligible.iter().copied());
        if let Err((event, violation)) = judge(alphabet, property, &eligible, &kept) {
            witnesses.push(Witness {
                at: Location::String(s.iter().map(|&e| alphabet.name(e).into()).collect()),
                event: alphabet.name(event).into(),
                violation,
            });
        }
    }
    Ok(PropertyReport::new(property, witnesses, Some(horizon)))
}

pub fn check_controllable(f: &StringSample, plant: &Automaton) -> Result<PropertyReport, Error> {
    check_language(f, plant, Property::Controllable, f.depth)
}

pub fn check_forcibly_controllable(
    f: &StringSample,
    plant: &Automaton,
) -> Result<PropertyReport, Error> {
    check_language(f, plant, Property::ForciblyControllable, f.depth)
}

pub fn check_forcible(f: &StringSample, plant: &Automaton) -> Result<PropertyReport, Error> {
    check_language(f, plant, Property::Forcible, f.depth)
}

/// Maps every supervisor state to the plant state of the same name, checking
/// that the supervisor is a subautomaton of the plant: same initial state,
/// and every supervisor transition is a plant transition.
pub fn embed(sup: &Automaton, plant: &Automaton) -> Result<Vec<StateId>, Error> {
    let mut map = Vec::with_capacity(sup.num_states());
    for q in sup.states() {
        let name = sup.state_name(q);
        let p = plant
            .state_id(name)
            .ok_or_else(|| Error::NotSubautomaton(alloc::format!("state `{name}` not in plant")))?;
        map.push(p);
    }
    if let (Some(si), Some(pi)) = (sup.initial(), plant.initial()) {
        if map[si.index()] != pi {
            return Err(Error::NotSubautomaton("initial states differ".into()));
        }
    }
    for t in sup.transitions() {
        let name = sup.alphabet().name(t.event);
        let e = plant
            .alphabet()
            .id(name)
            .ok_or_else(|| Error::NotSubautomaton(alloc::format!("event `{name}` not in plant")))?;
        if plant.target(map[t.source.index()], e) != Some(map[t.target.index()]) {
            return Err(Error::NotSubautomaton(alloc::format!(
                "transition {} --{}--> {} not in plant",
                sup.state_name(t.source),
                name,
                sup.state_name(t.target)
            )));
        }
    }
    Ok(map)
}

/// State-level check of a subautomaton supervisor, over its reachable states.
pub fn check_supervisor(
    sup: &Automaton,
    plant: &Automaton,
    property: Property,
) -> Result<PropertyReport, Error> {
    let map = embed(sup, plant)?;
    let alphabet = plant.alphabet();
    let mut witnesses = Vec::new();
    let mut classes = Vec::new();
    for q in sup.reachable().iter() {
        let eligible = plant.eligible(map[q.index()]);
        let kept: BTreeSet<EventId> = sup
            .eligible(q)
            .into_iter()
            .map(|e| alphabet.lookup(sup.alphabet().name(e)))
            .collect::<Result<_, _>>()?;
        let class = match judge(alphabet, property, &eligible, &kept) {
            Ok(class) => class,
            Err((event, violation)) => {
                witnesses.push(Witness {
                    at: Location::State(sup.state_name(q).into()),
                    event: alphabet.name(event).into(),
                    violation,
                });
                StateClass::Violation
            }
        };
        classes.push((String::from(sup.state_name(q)), class));
    }
    let mut report = PropertyReport::new(property, witnesses, None);
    report.classes = classes;
    Ok(report)
}

pub fn check_supervisor_fc(sup: &Automaton, plant: &Automaton) -> Result<PropertyReport, Error> {
    check_supervisor(sup, plant, Property::ForciblyControllable)
}
