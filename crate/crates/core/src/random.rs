//! Seeded random plants for property tests and the oracle corpus.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, Event};
use crate::automaton::Automaton;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomPlantParams {
    pub max_states: usize,
    pub max_events: usize,
    /// Probability that a given (state, event) pair has a transition.
    pub density: f64,
    pub marked_ratio: f64,
    pub forcible_ratio: f64,
    /// Upper bound on the number of transitions; extra ones are dropped.
    pub max_transitions: usize,
}

impl Default for RandomPlantParams {
    fn default() -> Self {
        Self {
            max_states: 4,
            max_events: 4,
            density: 0.45,
            marked_ratio: 0.5,
            forcible_ratio: 0.4,
            max_transitions: 18,
        }
    }
}

/// A random deterministic plant with states `s0..` and events `e0..`.
/// The same seed and parameters always give the same plant.
pub fn random_plant(seed: u64, params: &RandomPlantParams) -> Automaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=params.max_states.max(1));
    let m = rng.gen_range(1..=params.max_events.max(1));
    let events: Vec<Event> = (0..m)
        .map(|i| {
            Event::new(
                format!("e{i}"),
                rng.gen_bool(0.5),
                rng.gen_bool(params.forcible_ratio),
            )
        })
        .collect();
    let alphabet = Arc::new(Alphabet::new(events).expect("distinct names"));
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let marked: Vec<usize> = (0..n).filter(|_| rng.gen_bool(params.marked_ratio)).collect();
    let mut edges = Vec::new();
    for q in 0..n {
        for e in alphabet.ids() {
            if edges.len() < params.max_transitions && rng.gen_bool(params.density) {
                edges.push((q, e, rng.gen_range(0..n)));
            }
        }
    }
    let all = alphabet.ids().collect();
    Automaton::from_parts(format!("random{seed}"), alphabet, all, names, 0, marked, edges)
        .expect("one transition per state and event")
}

/// A random plant with exactly `states` states and `events` events, where
/// each (state, event) pair has a transition with probability `density`.
/// Events alternate between controllable and uncontrollable; a tenth of the
/// states are marked.
pub fn sized_plant(seed: u64, states: usize, events: usize, density: f64) -> Automaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = Arc::new(
        Alphabet::new((0..events).map(|i| Event::new(format!("e{i}"), i % 2 == 0, i % 4 == 0)))
            .expect("distinct names"),
    );
    let names: Vec<String> = (0..states).map(|i| format!("s{i}")).collect();
    let marked: Vec<usize> = (0..states).filter(|_| rng.gen_bool(0.1)).collect();
    let mut edges = Vec::new();
    for q in 0..states {
        for e in alphabet.ids() {
            if rng.gen_bool(density) {
                edges.push((q, e, rng.gen_range(0..states)));
            }
        }
    }
    let all = alphabet.ids().collect();
    Automaton::from_parts(format!("sized{seed}"), alphabet, all, names, 0, marked, edges)
        .expect("one transition per state and event")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_bounded() {
        let p = RandomPlantParams::default();
        for seed in 0..50 {
            let a = random_plant(seed, &p);
            assert!(a.is_isomorphic(&random_plant(seed, &p)));
            assert!(a.num_states() <= 4 && a.alphabet().len() <= 4);
            assert!(a.num_transitions() <= 18);
        }
    }

    #[test]
    fn sized_is_exact() {
        let a = sized_plant(3, 40, 8, 0.5);
        assert_eq!(a.num_states(), 40);
        assert_eq!(a.alphabet().len(), 8);
        assert!(a.is_isomorphic(&sized_plant(3, 40, 8, 0.5)));
    }
}
