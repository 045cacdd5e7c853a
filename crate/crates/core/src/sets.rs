//! State sets and transition relations over dense state indices.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::EventId;

/// Index of a state inside an automaton. States are stored sorted by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A set of states of a fixed universe `0..universe`, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    universe: usize,
    words: Vec<u64>,
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for i in 0..universe {
            set.words[i / 64] |= 1 << (i % 64);
        }
        set
    }

    pub fn from_states(universe: usize, states: impl IntoIterator<Item = StateId>) -> Self {
        let mut set = Self::empty(universe);
        for q in states {
            set.insert(q);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, q: StateId) -> bool {
        let i = q.index();
        i < self.universe && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    /// Inserts `q`, returning `true` if it was not present.
    #[inline]
    pub fn insert(&mut self, q: StateId) -> bool {
        let i = q.index();
        assert!(i < self.universe, "state {i} outside universe {}", self.universe);
        let mask = 1 << (i % 64);
        let fresh = self.words[i / 64] & mask == 0;
        self.words[i / 64] |= mask;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, q: StateId) -> bool {
        let i = q.index();
        if i >= self.universe {
            return false;
        }
        let mask = 1 << (i % 64);
        let present = self.words[i / 64] & mask != 0;
        self.words[i / 64] &= !mask;
        present
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(StateId((wi * 64 + bit) as u32))
            })
        })
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter().chain(core::iter::repeat(&0)))
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        self.zip_with(other, |a, b| a & !b)
    }

    fn zip_with(&self, other: &StateSet, op: impl Fn(u64, u64) -> u64) -> StateSet {
        assert_eq!(self.universe, other.universe, "state sets over different universes");
        StateSet {
            universe: self.universe,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|q| q.0)).finish()
    }
}

/// A single labelled transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub source: StateId,
    pub event: EventId,
    pub target: StateId,
}

/// A deterministic transition relation: per source, a list of
/// `(event, target)` pairs sorted by event with no repeated event.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransitionMap {
    out: Vec<Vec<(EventId, StateId)>>,
}

impl TransitionMap {
    pub fn new(states: usize) -> Self {
        Self {
            out: vec![Vec::new(); states],
        }
    }

    pub fn num_states(&self) -> usize {
        self.out.len()
    }

    /// Adds `q --e--> t`. On a conflicting existing transition, returns its target.
    pub fn insert(&mut self, q: StateId, e: EventId, t: StateId) -> Result<(), StateId> {
        let edges = &mut self.out[q.index()];
        match edges.binary_search_by_key(&e, |&(ev, _)| ev) {
            Ok(pos) if edges[pos].1 == t => Ok(()),
            Ok(pos) => Err(edges[pos].1),
            Err(pos) => {
                edges.insert(pos, (e, t));
                Ok(())
            }
        }
    }

    #[inline]
    pub fn target(&self, q: StateId, e: EventId) -> Option<StateId> {
        let edges = &self.out[q.index()];
        edges
            .binary_search_by_key(&e, |&(ev, _)| ev)
            .ok()
            .map(|pos| edges[pos].1)
    }

    #[inline]
    pub fn outgoing(&self, q: StateId) -> &[(EventId, StateId)] {
        &self.out[q.index()]
    }

    pub fn len(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.out.iter().all(Vec::is_empty)
    }

    pub fn iter(&self) -> impl Iterator<Item = Transition> + '_ {
        self.out.iter().enumerate().flat_map(|(q, edges)| {
            edges.iter().map(move |&(event, target)| Transition {
                source: StateId(q as u32),
                event,
                target,
            })
        })
    }

    pub fn contains(&self, t: &Transition) -> bool {
        self.target(t.source, t.event) == Some(t.target)
    }

    pub fn retain(&mut self, mut keep: impl FnMut(StateId, EventId, StateId) -> bool) {
        for (q, edges) in self.out.iter_mut().enumerate() {
            edges.retain(|&(e, t)| keep(StateId(q as u32), e, t));
        }
    }

    pub fn is_subset(&self, other: &TransitionMap) -> bool {
        self.iter().all(|t| other.contains(&t))
    }

    /// Predecessor lists, deduplicated and sorted.
    pub fn predecessors(&self) -> Vec<Vec<StateId>> {
        let mut preds = vec![Vec::new(); self.out.len()];
        for t in self.iter() {
            preds[t.target.index()].push(t.source);
        }
        for p in &mut preds {
            p.sort_unstable();
            p.dedup();
        }
        preds
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitset_basics() {
        let mut s = StateSet::empty(130);
        assert!(s.insert(StateId(0)));
        assert!(s.insert(StateId(129)));
        assert!(!s.insert(StateId(129)));
        assert_eq!(s.len(), 2);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![StateId(0), StateId(129)]);
        assert!(s.remove(StateId(0)));
        assert!(!s.contains(StateId(0)));
        let full = StateSet::full(130);
        assert_eq!(full.len(), 130);
        assert!(s.is_subset(&full));
        assert_eq!(full.difference(&s).len(), 129);
    }

    #[test]
    fn transition_map_is_deterministic() {
        let mut d = TransitionMap::new(2);
        d.insert(StateId(0), EventId(1), StateId(1)).unwrap();
        d.insert(StateId(0), EventId(0), StateId(0)).unwrap();
        assert_eq!(d.insert(StateId(0), EventId(1), StateId(0)), Err(StateId(1)));
        assert_eq!(d.outgoing(StateId(0))[0].0, EventId(0));
        assert_eq!(d.target(StateId(0), EventId(1)), Some(StateId(1)));
        assert_eq!(d.predecessors()[0], vec![StateId(0)]);
    }
}
