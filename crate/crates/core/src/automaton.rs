//! Deterministic finite automata over attributed alphabets.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::alphabet::{Alphabet, EventId};
use crate::error::Error;
use crate::language::{StringSample, Word, DEFAULT_DEPTH_CAP};
use crate::sets::{StateId, StateSet, Transition, TransitionMap};

/// A deterministic automaton `(Q, Σ, δ, q0, Qm)` with a partial transition
/// function.
///
/// `events` is the automaton's declared sub-alphabet of the shared
/// [`Alphabet`]; it decides which events the automaton synchronises on when
/// composed. States are kept sorted by name so that every set an automaton
/// reports comes out in lexicographic order.
///
/// An automaton without states is the empty supervisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    name: String,
    alphabet: Arc<Alphabet>,
    events: BTreeSet<EventId>,
    states: Vec<String>,
    initial: Option<StateId>,
    marked: StateSet,
    delta: TransitionMap,
}

impl Automaton {
    /// The automaton with no states.
    pub fn empty(name: impl Into<String>, alphabet: Arc<Alphabet>) -> Self {
        Self {
            name: name.into(),
            alphabet,
            events: BTreeSet::new(),
            states: Vec::new(),
            initial: None,
            marked: StateSet::empty(0),
            delta: TransitionMap::new(0),
        }
    }

    /// Assembles an automaton from states given by name and transitions given
    /// by position in `names`. Names are sorted and must be unique.
    pub fn from_parts(
        name: impl Into<String>,
        alphabet: Arc<Alphabet>,
        events: BTreeSet<EventId>,
        names: Vec<String>,
        initial: usize,
        marked: impl IntoIterator<Item = usize>,
        edges: impl IntoIterator<Item = (usize, EventId, usize)>,
    ) -> Result<Self, Error> {
        let n = names.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| names[a].cmp(&names[b]));
        let mut remap = vec![StateId(0); n];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = StateId(new as u32);
        }
        let mut sorted = Vec::with_capacity(n);
        for &old in &order {
            sorted.push(names[old].clone());
        }
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::StateNameCollision(pair[0].clone()));
            }
            if pair[0].is_empty() {
                return Err(Error::EmptyName);
            }
        }
        if sorted.first().is_some_and(|s| s.is_empty()) {
            return Err(Error::EmptyName);
        }
        if initial >= n {
            return Err(Error::MissingInitial(name.into()));
        }
        let marked = StateSet::from_states(n, marked.into_iter().map(|q| remap[q]));
        let mut delta = TransitionMap::new(n);
        let mut events = events;
        for (q, e, t) in edges {
            if e.index() >= alphabet.len() {
                return Err(Error::UnknownEvent(e.0.to_string()));
            }
            events.insert(e);
            if delta.insert(remap[q], e, remap[t]).is_err() {
                return Err(Error::Nondeterministic {
                    state: names[q].clone(),
                    event: alphabet.name(e).into(),
                });
            }
        }
        Ok(Self {
            name: name.into(),
            alphabet,
            events,
            states: sorted,
            initial: Some(remap[initial]),
            marked,
            delta,
        })
    }

    /// Keeps `keep` states (and transitions between them) of `self`, with `delta`
    /// as the transition relation over `self`'s state indices.
    pub(crate) fn restricted(
        &self,
        name: impl Into<String>,
        keep: &StateSet,
        delta: &TransitionMap,
    ) -> Automaton {
        let Some(init) = self.initial.filter(|&q| keep.contains(q)) else {
            return Automaton::empty(name, self.alphabet.clone());
        };
        let mut new_id = vec![None; self.states.len()];
        let mut names = Vec::new();
        for (i, q) in keep.iter().enumerate() {
            new_id[q.index()] = Some(i);
            names.push(self.states[q.index()].clone());
        }
        let edges: Vec<_> = delta
            .iter()
            .filter_map(|t| {
                Some((new_id[t.source.index()]?, t.event, new_id[t.target.index()]?))
            })
            .collect();
        let marked: Vec<_> = keep
            .iter()
            .filter(|&q| self.marked.contains(q))
            .filter_map(|q| new_id[q.index()])
            .collect();
        // Names are a subset of an already valid automaton, and kept states
        // preserve their relative order.
        Automaton::from_parts(
            name,
            self.alphabet.clone(),
            self.events.clone(),
            names,
            new_id[init.index()].expect("initial kept"),
            marked,
            edges,
        )
        .expect("restriction of a valid automaton is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn alphabet_arc(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    /// Re-attaches the automaton to an alphabet with the same event names,
    /// for instance one with different forcible flags.
    pub fn with_alphabet(&self, alphabet: Arc<Alphabet>) -> Result<Automaton, Error> {
        let map = |e: EventId| alphabet.lookup(self.alphabet.name(e));
        let events = self.events.iter().map(|&e| map(e)).collect::<Result<_, _>>()?;
        let mut delta = TransitionMap::new(self.states.len());
        for t in self.delta.iter() {
            delta
                .insert(t.source, map(t.event)?, t.target)
                .expect("event renaming is injective");
        }
        Ok(Automaton {
            name: self.name.clone(),
            alphabet,
            events,
            states: self.states.clone(),
            initial: self.initial,
            marked: self.marked.clone(),
            delta,
        })
    }

    /// The declared sub-alphabet.
    pub fn events(&self) -> &BTreeSet<EventId> {
        &self.events
    }

    pub fn is_empty(&self) -> bool {
        self.initial.is_none()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len() as u32).map(StateId)
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.index()]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states
            .binary_search_by(|s| s.as_str().cmp(name))
            .ok()
            .map(|i| StateId(i as u32))
    }

    pub fn lookup_state(&self, name: &str) -> Result<StateId, Error> {
        self.state_id(name).ok_or_else(|| Error::UnknownState(name.into()))
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    pub fn is_marked(&self, q: StateId) -> bool {
        self.marked.contains(q)
    }

    pub fn marked(&self) -> &StateSet {
        &self.marked
    }

    pub fn delta(&self) -> &TransitionMap {
        &self.delta
    }

    pub fn transitions(&self) -> impl Iterator<Item = Transition> + '_ {
        self.delta.iter()
    }

    #[inline]
    pub fn target(&self, q: StateId, e: EventId) -> Option<StateId> {
        self.delta.target(q, e)
    }

    /// Runs `word` from the initial state.
    pub fn run(&self, word: &[EventId]) -> Option<StateId> {
        word.iter()
            .try_fold(self.initial?, |q, &e| self.delta.target(q, e))
    }

    /// E(q): the events defined at `q`.
    pub fn eligible(&self, q: StateId) -> BTreeSet<EventId> {
        self.delta.outgoing(q).iter().map(|&(e, _)| e).collect()
    }

    /// E(q) for a state given by name.
    pub fn eligible_events(&self, state: &str) -> Result<BTreeSet<EventId>, Error> {
        Ok(self.eligible(self.lookup_state(state)?))
    }

    /// Least set containing the initial state and closed under transitions.
    pub fn reachable(&self) -> StateSet {
        let mut seen = StateSet::empty(self.states.len());
        let Some(init) = self.initial else {
            return seen;
        };
        let mut queue = VecDeque::from([init]);
        seen.insert(init);
        while let Some(q) = queue.pop_front() {
            for &(_, t) in self.delta.outgoing(q) {
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// States from which some marked state is reachable.
    pub fn coreachable(&self) -> StateSet {
        let preds = self.delta.predecessors();
        let mut seen = self.marked.clone();
        let mut stack: Vec<StateId> = seen.iter().collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q.index()] {
                if seen.insert(p) {
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Every reachable state is coreachable.
    pub fn is_nonblocking(&self) -> bool {
        self.reachable().is_subset(&self.coreachable())
    }

    /// The reachable part.
    pub fn accessible(&self) -> Automaton {
        self.restricted(self.name.clone(), &self.reachable(), &self.delta)
    }

    /// All strings of length at most `depth` in L(A), or in Lm(A) when
    /// `marked_only`, with the default depth cap.
    pub fn bounded_language(&self, depth: usize, marked_only: bool) -> Result<StringSample, Error> {
        self.bounded_language_capped(depth, marked_only, DEFAULT_DEPTH_CAP)
    }

    pub fn bounded_language_capped(
        &self,
        depth: usize,
        marked_only: bool,
        cap: usize,
    ) -> Result<StringSample, Error> {
        if depth > cap {
            return Err(Error::DepthCapExceeded { depth, cap });
        }
        let mut strings = BTreeSet::new();
        if let Some(init) = self.initial {
            let mut word = Word::new();
            self.enumerate(init, depth, marked_only, &mut word, &mut strings);
        }
        Ok(StringSample { strings, depth })
    }

    fn enumerate(
        &self,
        q: StateId,
        budget: usize,
        marked_only: bool,
        word: &mut Word,
        out: &mut BTreeSet<Word>,
    ) {
        if !marked_only || self.marked.contains(q) {
            out.insert(word.clone());
        }
        if budget == 0 {
            return;
        }
        for &(e, t) in self.delta.outgoing(q) {
            word.push(e);
            self.enumerate(t, budget - 1, marked_only, word, out);
            word.pop();
        }
    }

    /// Structural equality of the reachable parts up to a renaming of states.
    /// Events are matched by name.
    pub fn is_isomorphic(&self, other: &Automaton) -> bool {
        let (Some(a0), Some(b0)) = (self.initial, other.initial) else {
            return self.initial.is_none() && other.initial.is_none();
        };
        let mut fwd: BTreeMap<StateId, StateId> = BTreeMap::new();
        let mut bwd: BTreeMap<StateId, StateId> = BTreeMap::new();
        let mut queue = VecDeque::from([(a0, b0)]);
        fwd.insert(a0, b0);
        bwd.insert(b0, a0);
        while let Some((p, q)) = queue.pop_front() {
            if self.is_marked(p) != other.is_marked(q) {
                return false;
            }
            let ep = self.delta.outgoing(p);
            let eq = other.delta.outgoing(q);
            if ep.len() != eq.len() {
                return false;
            }
            for &(e, pt) in ep {
                let Some(oe) = other.alphabet.id(self.alphabet.name(e)) else {
                    return false;
                };
                let Some(qt) = other.target(q, oe) else {
                    return false;
                };
                match (fwd.get(&pt), bwd.get(&qt)) {
                    (None, None) => {
                        fwd.insert(pt, qt);
                        bwd.insert(qt, pt);
                        queue.push_back((pt, qt));
                    }
                    (Some(&x), Some(&y)) if x == qt && y == pt => {}
                    _ => return false,
                }
            }
        }
        true
    }
}

/// Builds an automaton from names.
///
/// States are declared implicitly by use. Events must exist in the alphabet;
/// each event used by a transition joins the automaton's sub-alphabet.
#[derive(Debug, Clone)]
pub struct AutomatonBuilder {
    name: String,
    alphabet: Arc<Alphabet>,
    events: BTreeSet<EventId>,
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    initial: Option<usize>,
    marked: Vec<usize>,
    edges: Vec<(usize, EventId, usize)>,
}

impl AutomatonBuilder {
    pub fn new(name: impl Into<String>, alphabet: Arc<Alphabet>) -> Self {
        Self {
            name: name.into(),
            alphabet,
            events: BTreeSet::new(),
            names: Vec::new(),
            index: BTreeMap::new(),
            initial: None,
            marked: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn intern(&mut self, state: &str) -> usize {
        if let Some(&i) = self.index.get(state) {
            return i;
        }
        let i = self.names.len();
        self.names.push(state.into());
        self.index.insert(state.into(), i);
        i
    }

    pub fn state(&mut self, state: &str) -> &mut Self {
        self.intern(state);
        self
    }

    pub fn initial(&mut self, state: &str) -> &mut Self {
        self.initial = Some(self.intern(state));
        self
    }

    pub fn marked(&mut self, state: &str) -> &mut Self {
        let i = self.intern(state);
        self.marked.push(i);
        self
    }

    /// Adds an event to the declared sub-alphabet without using it.
    pub fn event(&mut self, event: &str) -> Result<&mut Self, Error> {
        let e = self.alphabet.lookup(event)?;
        self.events.insert(e);
        Ok(self)
    }

    pub fn transition(&mut self, from: &str, event: &str, to: &str) -> Result<&mut Self, Error> {
        let e = self.alphabet.lookup(event)?;
        let f = self.intern(from);
        let t = self.intern(to);
        self.edges.push((f, e, t));
        Ok(self)
    }

    pub fn build(&self) -> Result<Automaton, Error> {
        let initial = self
            .initial
            .ok_or_else(|| Error::MissingInitial(self.name.clone()))?;
        Automaton::from_parts(
            self.name.clone(),
            self.alphabet.clone(),
            self.events.clone(),
            self.names.clone(),
            initial,
            self.marked.iter().copied(),
            self.edges.iter().copied(),
        )
    }
}
