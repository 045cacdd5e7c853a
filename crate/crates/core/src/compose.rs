//! Synchronous composition and plantification.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::alphabet::{Alphabet, EventId};
use crate::automaton::Automaton;
use crate::error::Error;
use crate::sets::StateId;

/// Name of the dump state added by [`plantify`].
pub const DUMP_STATE: &str = "⊥";

/// Full synchronous product of `components`.
///
/// Each component synchronises on its declared sub-alphabet: a shared event
/// fires only when every component that declares it can take it, a private
/// event interleaves. Only reachable product states are built. A product
/// state is marked iff every component state is.
///
/// Product states are named by concatenating component state names in
/// component order, or joining them with `.` when any component has a state
/// name longer than one character.
pub fn sync_product(components: &[&Automaton]) -> Result<Automaton, Error> {
    let first = components.first().ok_or(Error::EmptyComposition)?;
    if let Some(empty) = components.iter().find(|a| a.is_empty()) {
        return Err(Error::MissingInitial(empty.name().into()));
    }

    let alphabet: Arc<Alphabet> = if components
        .iter()
        .all(|a| a.alphabet() == first.alphabet())
    {
        first.alphabet_arc().clone()
    } else {
        let mut merged = first.alphabet().clone();
        for a in &components[1..] {
            merged = merged.merge(a.alphabet())?;
        }
        Arc::new(merged)
    };

    // For each product event, the local event id in every component that declares it.
    let mut participants: BTreeMap<EventId, Vec<(usize, EventId)>> = BTreeMap::new();
    for (i, a) in components.iter().enumerate() {
        for &local in a.events() {
            let global = alphabet.lookup(a.alphabet().name(local))?;
            participants.entry(global).or_default().push((i, local));
        }
    }
    let events: BTreeSet<EventId> = participants.keys().copied().collect();

    let dotted = components
        .iter()
        .any(|a| a.state_names().iter().any(|n| n.chars().count() != 1));
    let name_of = |tuple: &[StateId]| -> String {
        let parts: Vec<&str> = tuple
            .iter()
            .zip(components)
            .map(|(&q, a)| a.state_name(q))
            .collect();
        if dotted {
            parts.join(".")
        } else {
            parts.concat()
        }
    };

    let init: Vec<StateId> = components
        .iter()
        .map(|a| a.initial().expect("checked nonempty"))
        .collect();
    let mut index: BTreeMap<Vec<StateId>, usize> = BTreeMap::new();
    let mut tuples: Vec<Vec<StateId>> = Vec::new();
    let mut edges = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(init.clone(), 0);
    tuples.push(init.clone());
    queue.push_back(0usize);

    while let Some(src) = queue.pop_front() {
        let tuple = tuples[src].clone();
        'events: for (&e, parts) in &participants {
            let mut next = tuple.clone();
            for &(i, local) in parts {
                match components[i].target(tuple[i], local) {
                    Some(t) => next[i] = t,
                    None => continue 'events,
                }
            }
            let dst = match index.get(&next) {
                Some(&d) => d,
                None => {
                    let d = tuples.len();
                    index.insert(next.clone(), d);
                    tuples.push(next);
                    queue.push_back(d);
                    d
                }
            };
            edges.push((src, e, dst));
        }
    }

    let names: Vec<String> = tuples.iter().map(|t| name_of(t)).collect();
    let marked = tuples.iter().enumerate().filter_map(|(i, t)| {
        t.iter()
            .zip(components)
            .all(|(&q, a)| a.is_marked(q))
            .then_some(i)
    });
    let name = components
        .iter()
        .map(|a| a.name())
        .collect::<Vec<_>>()
        .join("||");
    Automaton::from_parts(name, alphabet, events, names, 0, marked, edges)
}

/// Turns a specification into a plant component: every uncontrollable event
/// of the specification's sub-alphabet that is undefined at some state is
/// routed to a fresh unmarked dump state with no outgoing transitions.
///
/// The dump state is named [`DUMP_STATE`], suffixed with a number if that
/// name is taken.
pub fn plantify(spec: &Automaton) -> Automaton {
    if spec.is_empty() {
        return spec.clone();
    }
    let mut dump = String::from(DUMP_STATE);
    let mut n = 1;
    while spec.state_id(&dump).is_some() {
        dump = format!("{DUMP_STATE}_{n}");
        n += 1;
    }
    let alphabet = spec.alphabet();
    let mut names: Vec<String> = spec.state_names().to_vec();
    let dump_index = names.len();
    names.push(dump);

    let mut edges: Vec<(usize, EventId, usize)> = spec
        .transitions()
        .map(|t| (t.source.index(), t.event, t.target.index()))
        .collect();
    for q in spec.states() {
        for &u in spec.events() {
            if alphabet.is_uncontrollable(u) && spec.target(q, u).is_none() {
                edges.push((q.index(), u, dump_index));
            }
        }
    }
    let marked: Vec<usize> = spec.marked().iter().map(StateId::index).collect();
    Automaton::from_parts(
        spec.name(),
        spec.alphabet_arc().clone(),
        spec.events().clone(),
        names,
        spec.initial().expect("nonempty").index(),
        marked,
        edges,
    )
    .expect("plantification keeps determinism")
}
