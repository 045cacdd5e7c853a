//! Brute-force supremal supervisor for tiny plants.
//!
//! Every subset of the plant's transitions whose transitions all leave
//! states reachable inside the subset is a candidate subautomaton. A
//! candidate is admitted when it is nonblocking and passes the state-level
//! property check. The result is the union of the bounded marked languages
//! of all admitted candidates.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::automaton::Automaton;
use crate::check::{check_supervisor, Property};
use crate::error::Error;
use crate::language::StringSample;
use crate::sets::{StateSet, Transition, TransitionMap};
use crate::synthesis::{synthesize, Mode};

/// Largest transition count accepted by the enumeration.
pub const TRANSITION_CAP: usize = 18;

#[derive(Debug, Clone)]
pub struct CandidateSet {
    /// Plant transitions; bit `i` of a mask selects `transitions[i]`.
    pub transitions: Vec<Transition>,
    /// Number of candidate subautomata enumerated.
    pub candidates: usize,
    /// Masks of the admitted candidates.
    pub admitted: Vec<u32>,
}

impl CandidateSet {
    /// Admitted masks that are not strictly contained in another admitted mask.
    pub fn maximal(&self) -> Vec<u32> {
        self.admitted
            .iter()
            .copied()
            .filter(|&m| !self.admitted.iter().any(|&o| o != m && o & m == m))
            .collect()
    }
}

/// States reachable from the initial state using only `mask` transitions.
fn reach(plant: &Automaton, transitions: &[Transition], mask: u32) -> StateSet {
    let mut seen = StateSet::empty(plant.num_states());
    let Some(init) = plant.initial() else {
        return seen;
    };
    seen.insert(init);
    let mut stack = alloc::vec![init];
    while let Some(q) = stack.pop() {
        for (i, t) in transitions.iter().enumerate() {
            if mask & (1 << i) != 0 && t.source == q && seen.insert(t.target) {
                stack.push(t.target);
            }
        }
    }
    seen
}

/// The subautomaton of `plant` made of the `mask` transitions and the states
/// they reach.
pub fn candidate_automaton(plant: &Automaton, transitions: &[Transition], mask: u32) -> Automaton {
    let keep = reach(plant, transitions, mask);
    let mut delta = TransitionMap::new(plant.num_states());
    for (i, t) in transitions.iter().enumerate() {
        if mask & (1 << i) != 0 {
            delta
                .insert(t.source, t.event, t.target)
                .expect("subset of a deterministic relation");
        }
    }
    plant.restricted("candidate", &keep, &delta)
}

pub fn enumerate_candidates(plant: &Automaton, property: Property) -> Result<CandidateSet, Error> {
    let transitions: Vec<Transition> = plant.transitions().collect();
    if transitions.len() > TRANSITION_CAP {
        return Err(Error::TransitionCapExceeded {
            count: transitions.len(),
            cap: TRANSITION_CAP,
        });
    }
    let mut candidates = 0;
    let mut admitted = Vec::new();
    if plant.is_empty() {
        return Ok(CandidateSet {
            transitions,
            candidates,
            admitted,
        });
    }
    for mask in 0u32..(1u32 << transitions.len()) {
        let reached = reach(plant, &transitions, mask);
        let canonical = transitions
            .iter()
            .enumerate()
            .all(|(i, t)| mask & (1 << i) == 0 || reached.contains(t.source));
        if !canonical {
            continue;
        }
        candidates += 1;
        let cand = candidate_automaton(plant, &transitions, mask);
        if cand.is_nonblocking() && check_supervisor(&cand, plant, property)?.holds {
            admitted.push(mask);
        }
    }
    Ok(CandidateSet {
        transitions,
        candidates,
        admitted,
    })
}

/// Default comparison depth for a plant: `|Q| + 2`.
pub fn default_depth(plant: &Automaton) -> usize {
    plant.num_states() + 2
}

/// Union of the bounded marked languages of all admitted candidates. The
/// depth is not capped here; callers bound it.
pub fn brute_force_supremal(plant: &Automaton, depth: usize) -> Result<StringSample, Error> {
    brute_force_supremal_for(plant, depth, Property::ForciblyControllable)
}

pub fn brute_force_supremal_for(
    plant: &Automaton,
    depth: usize,
    property: Property,
) -> Result<StringSample, Error> {
    let set = enumerate_candidates(plant, property)?;
    let mut strings = BTreeSet::new();
    // Languages grow with the transition set, so the maximal masks suffice.
    for mask in set.maximal() {
        let cand = candidate_automaton(plant, &set.transitions, mask);
        strings.extend(cand.bounded_language_capped(depth, true, usize::MAX)?.strings);
    }
    Ok(StringSample { strings, depth })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub holds: bool,
    pub depth: usize,
    pub algorithm: StringSample,
    pub oracle: StringSample,
}

/// Compares the marked language of the synthesized supervisor with the
/// brute-force union, both bounded by `depth`.
pub fn oracle_compare(plant: &Automaton, depth: usize) -> Result<OracleReport, Error> {
    oracle_compare_mode(plant, depth, Mode::ForciblyControllable)
}

pub fn oracle_compare_mode(plant: &Automaton, depth: usize, mode: Mode) -> Result<OracleReport, Error> {
    let property = match mode {
        Mode::ForciblyControllable => Property::ForciblyControllable,
        Mode::Classic => Property::Controllable,
        Mode::Forcible => Property::Forcible,
    };
    let algorithm = synthesize(plant, mode)
        .supervisor
        .bounded_language_capped(depth, true, usize::MAX)?;
    let oracle = brute_force_supremal_for(plant, depth, property)?;
    Ok(OracleReport {
        holds: algorithm.strings == oracle.strings,
        depth,
        algorithm,
        oracle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{Alphabet, Event};
    use crate::automaton::AutomatonBuilder;
    use alloc::sync::Arc;

    fn example1() -> Automaton {
        let a = Arc::new(
            Alphabet::new([
                Event::new("f1", false, true),
                Event::new("f2", false, true),
                Event::uncontrollable("u"),
            ])
            .unwrap(),
        );
        let mut b = AutomatonBuilder::new("E1", a);
        b.initial("q0").marked("q0").marked("a").marked("b").marked("c");
        b.transition("q0", "f1", "a").unwrap();
        b.transition("q0", "f2", "b").unwrap();
        b.transition("q0", "u", "c").unwrap();
        b.build().unwrap()
    }

    #[test]
    fn single_state() {
        let a = Arc::new(Alphabet::new([Event::controllable("a")]).unwrap());
        let mut b = AutomatonBuilder::new("P", a);
        b.initial("x").marked("x");
        let p = b.build().unwrap();
        let s = brute_force_supremal(&p, 3).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.contains(&[]));
    }

    #[test]
    fn unsolvable() {
        let a = Arc::new(Alphabet::new([Event::uncontrollable("u")]).unwrap());
        let mut b = AutomatonBuilder::new("P", a);
        b.initial("x").marked("x");
        b.transition("x", "u", "sink").unwrap();
        let p = b.build().unwrap();
        assert!(brute_force_supremal(&p, 4).unwrap().is_empty());
        assert!(oracle_compare(&p, 4).unwrap().holds);
    }

    #[test]
    fn example1_counts() {
        let p = example1();
        let set = enumerate_candidates(&p, Property::ForciblyControllable).unwrap();
        assert_eq!(set.candidates, 8);
        // f1 and f2 are uncontrollable: keep all three, or force a nonempty subset of {f1, f2}
        assert_eq!(set.admitted.len(), 4);
        assert!(oracle_compare(&p, 4).unwrap().holds);
    }

    #[test]
    fn cap() {
        let names: Vec<alloc::string::String> = (0..19).map(|i| alloc::format!("e{i}")).collect();
        let a = Arc::new(Alphabet::new(names.iter().map(|n| Event::controllable(n.clone()))).unwrap());
        let mut b = AutomatonBuilder::new("P", a);
        b.initial("x").marked("x");
        for n in &names {
            b.transition("x", n, "x").unwrap();
        }
        assert_eq!(
            brute_force_supremal(&b.build().unwrap(), 2).unwrap_err(),
            Error::TransitionCapExceeded { count: 19, cap: 18 }
        );
    }
}
