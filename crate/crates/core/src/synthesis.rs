//! Synthesis of the maximally permissive, forcibly-controllable, nonblocking
//! supervisor.
//!
//! The outer loop alternates a backward nonblocking fixpoint with a bad-state
//! fixpoint that also tracks *forcing states*: states threatened by an
//! uncontrollable transition into the bad set that survive because some
//! forcible event leads elsewhere. A forcing state keeps only its forcible
//! transitions. The loop stops when neither states nor transitions change.
//!
//! Where a rule asks whether `δ(q, f)` lies in the bad set and `δ(q, f)` is
//! undefined, `f` counts as unable to save `q`. An uncontrollable event only
//! threatens `q` through a defined transition. A state that is already
//! forcing stays threatened even though its uncontrollable transitions were
//! pruned, so it turns bad as soon as its last forcible escape does.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::{Alphabet, EventId};
use crate::automaton::Automaton;
use crate::sets::{StateId, StateSet, TransitionMap};

/// Which supervisor to synthesize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Forcibly-controllable supervisor.
    #[default]
    ForciblyControllable,
    /// Controllable supervisor; forcible flags are ignored.
    Classic,
    /// Forcible supervisor: every event, not only uncontrollable ones, must
    /// be kept or preempted.
    Forcible,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::ForciblyControllable => "fc",
            Mode::Classic => "classic",
            Mode::Forcible => "forcible",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Event roles used by the fixpoint rules, indexed by [`EventId`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventRoles {
    /// Events whose transitions into the bad set threaten their source.
    pub threat: Vec<bool>,
    pub forcible: Vec<bool>,
}

impl EventRoles {
    pub fn new(alphabet: &Alphabet, mode: Mode) -> Self {
        let threat = alphabet
            .ids()
            .map(|e| mode == Mode::Forcible || alphabet.is_uncontrollable(e))
            .collect();
        let forcible = alphabet
            .ids()
            .map(|e| mode != Mode::Classic && alphabet.is_forcible(e))
            .collect();
        Self { threat, forcible }
    }

    #[inline]
    pub fn is_threat(&self, e: EventId) -> bool {
        self.threat[e.index()]
    }

    #[inline]
    pub fn is_forcible(&self, e: EventId) -> bool {
        self.forcible[e.index()]
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SynthesisOptions {
    pub mode: Mode,
    /// Keep a snapshot of every outer iteration.
    pub record_trace: bool,
}

/// The sets of one outer iteration `k`. For `k = 0` the nonblocking, bad and
/// forcing sets are empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationSnapshot {
    pub k: usize,
    pub states: StateSet,
    pub nonblocking: StateSet,
    pub bad: StateSet,
    pub forcing: StateSet,
    pub delta: TransitionMap,
}

#[derive(Debug, Clone)]
pub struct SynthesisResult {
    /// Reachable part of the final subautomaton, or the empty automaton.
    pub supervisor: Automaton,
    /// Forcing states, as supervisor state indices.
    pub forcing_states: StateSet,
    pub trace: Vec<IterationSnapshot>,
    pub mode: Mode,
    /// Number of outer iterations run.
    pub iterations: usize,
    /// Final state set over plant state indices, before pruning unreachable states.
    pub final_states: StateSet,
}

impl SynthesisResult {
    pub fn is_empty(&self) -> bool {
        self.supervisor.is_empty()
    }

    pub fn forcing_state_names(&self) -> Vec<&str> {
        self.forcing_states
            .iter()
            .map(|q| self.supervisor.state_name(q))
            .collect()
    }
}

/// Least set containing the marked states of `states` and closed under
/// predecessors inside `states`.
pub fn nonblocking_fixpoint(states: &StateSet, delta: &TransitionMap, marked: &StateSet) -> StateSet {
    let preds = delta.predecessors();
    let mut nb = marked.intersection(states);
    let mut stack: Vec<StateId> = nb.iter().collect();
    while let Some(q) = stack.pop() {
        for &p in &preds[q.index()] {
            if states.contains(p) && nb.insert(p) {
                stack.push(p);
            }
        }
    }
    nb
}

fn threatened(delta: &TransitionMap, roles: &EventRoles, bad: &StateSet, q: StateId) -> bool {
    delta
        .outgoing(q)
        .iter()
        .any(|&(e, t)| roles.is_threat(e) && bad.contains(t))
}

fn escapes(delta: &TransitionMap, roles: &EventRoles, bad: &StateSet, q: StateId) -> bool {
    delta
        .outgoing(q)
        .iter()
        .any(|&(e, t)| roles.is_forcible(e) && !bad.contains(t))
}

/// The bad-state and forcing-state fixpoint of one outer iteration.
///
/// Starting from `B⁰ = states \ nonblocking` and `F⁰ = forcing ∩ states`,
/// each round adds to `B` every state that is threatened (or already
/// forcing) and has no forcible escape out of `B`, and adds to `F` every
/// state that is threatened and has such an escape. Both rules read the `B`
/// of the previous round. Returns the final `(B, F)`.
pub fn bad_forcing_fixpoint(
    states: &StateSet,
    delta: &TransitionMap,
    nonblocking: &StateSet,
    forcing: &StateSet,
    roles: &EventRoles,
) -> (StateSet, StateSet) {
    let preds = delta.predecessors();
    let mut bad = states.difference(nonblocking);
    let mut forcing = forcing.intersection(states);
    let n = states.universe();

    // Only predecessors of states that just turned bad can change status.
    let mut seen = StateSet::empty(n);
    let mut candidates: Vec<StateId> = Vec::new();
    for q in bad.iter().flat_map(|b| preds[b.index()].iter().copied()).chain(forcing.iter()) {
        if states.contains(q) && seen.insert(q) {
            candidates.push(q);
        }
    }

    loop {
        let mut new_bad = Vec::new();
        let mut new_forcing = Vec::new();
        for &q in &candidates {
            let threat = threatened(delta, roles, &bad, q);
            let escape = escapes(delta, roles, &bad, q);
            if !bad.contains(q) && (threat || forcing.contains(q)) && !escape {
                new_bad.push(q);
            }
            if threat && escape {
                new_forcing.push(q);
            }
        }
        for q in new_forcing {
            forcing.insert(q);
        }
        new_bad.retain(|&q| bad.insert(q));
        if new_bad.is_empty() {
            break;
        }
        let mut seen = StateSet::empty(n);
        candidates.clear();
        for q in new_bad.iter().flat_map(|b| preds[b.index()].iter().copied()) {
            if states.contains(q) && seen.insert(q) {
                candidates.push(q);
            }
        }
    }

    debug_assert!(forcing
        .difference(&bad)
        .iter()
        .all(|q| escapes(delta, roles, &bad, q)));
    (bad, forcing)
}

/// Keeps the transitions between `next` states, dropping every non-forcible
/// transition out of a `forcing` state.
pub fn restrict(
    delta: &TransitionMap,
    next: &StateSet,
    forcing: &StateSet,
    roles: &EventRoles,
) -> TransitionMap {
    let mut out = delta.clone();
    out.retain(|q, e, t| {
        next.contains(q) && next.contains(t) && !(forcing.contains(q) && !roles.is_forcible(e))
    });
    out
}

pub fn synthesize(plant: &Automaton, mode: Mode) -> SynthesisResult {
    synthesize_with(
        plant,
        SynthesisOptions {
            mode,
            record_trace: false,
        },
    )
}

pub fn synthesize_with(plant: &Automaton, options: SynthesisOptions) -> SynthesisResult {
    let n = plant.num_states();
    let roles = EventRoles::new(plant.alphabet(), options.mode);
    let marked = plant.marked();

    let mut states = StateSet::full(n);
    let mut delta = plant.delta().clone();
    let mut forcing = StateSet::empty(n);
    let mut trace = Vec::new();
    if options.record_trace {
        trace.push(IterationSnapshot {
            k: 0,
            states: states.clone(),
            nonblocking: StateSet::empty(n),
            bad: StateSet::empty(n),
            forcing: forcing.clone(),
            delta: delta.clone(),
        });
    }

    let mut k = 0;
    loop {
        let nonblocking = nonblocking_fixpoint(&states, &delta, marked);
        let (bad, next_forcing) =
            bad_forcing_fixpoint(&states, &delta, &nonblocking, &forcing, &roles);
        let next_states = states.difference(&bad);
        let next_delta = restrict(&delta, &next_states, &next_forcing, &roles);
        k += 1;
        if options.record_trace {
            trace.push(IterationSnapshot {
                k,
                states: next_states.clone(),
                nonblocking,
                bad,
                forcing: next_forcing.clone(),
                delta: next_delta.clone(),
            });
        }
        let stable = next_states == states && next_delta == delta;
        states = next_states;
        delta = next_delta;
        forcing = next_forcing;
        if stable {
            break;
        }
    }

    let name = format!("sup({})", plant.name());
    let keep = match plant.initial() {
        Some(init) if states.contains(init) => {
            let mut seen = StateSet::empty(n);
            let mut queue = VecDeque::from([init]);
            seen.insert(init);
            while let Some(q) = queue.pop_front() {
                for &(_, t) in delta.outgoing(q) {
                    if seen.insert(t) {
                        queue.push_back(t);
                    }
                }
            }
            seen
        }
        _ => StateSet::empty(n),
    };
    let supervisor = plant.restricted(name, &keep, &delta);
    let forcing_states = StateSet::from_states(
        supervisor.num_states(),
        forcing
            .intersection(&keep)
            .iter()
            .filter_map(|q| supervisor.state_id(plant.state_name(q))),
    );

    SynthesisResult {
        supervisor,
        forcing_states,
        trace,
        mode: options.mode,
        iterations: k,
        final_states: states,
    }
}

/// A failed trace invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantViolation {
    pub k: usize,
    pub detail: String,
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "iteration {}: {}", self.k, self.detail)
    }
}

/// Checks a recorded trace against the loop invariants:
///
/// * states and transitions only shrink, and `NB_k`, `B_k`, `F_k ⊆ Q_{k-1}`;
/// * every state of `F_k \ B_k` has a forcible transition and no
///   non-forcible one under `δ_k`;
/// * every state of `Q_k \ F_k` keeps, under `δ_k`, each threat-event
///   transition it has in the plant;
/// * the number of outer iterations is at most `|Q| + |δ| + 1`.
pub fn check_trace(plant: &Automaton, result: &SynthesisResult) -> Result<(), InvariantViolation> {
    let roles = EventRoles::new(plant.alphabet(), result.mode);
    let delta0 = plant.delta();
    let fail = |k: usize, detail: String| Err(InvariantViolation { k, detail });
    let bound = plant.num_states() + plant.num_transitions() + 1;
    if result.iterations > bound {
        return fail(
            result.iterations,
            format!("{} iterations exceed bound {bound}", result.iterations),
        );
    }
    for pair in result.trace.windows(2) {
        let (prev, cur) = (&pair[0], &pair[1]);
        let k = cur.k;
        if !cur.states.is_subset(&prev.states) || !cur.delta.is_subset(&prev.delta) {
            return fail(k, "states or transitions grew".into());
        }
        for (set, label) in [
            (&cur.bad, "B"),
            (&cur.forcing, "F"),
            (&cur.nonblocking, "NB"),
        ] {
            if !set.is_subset(&prev.states) {
                return fail(k, format!("{label}_k not within Q_(k-1)"));
            }
        }
        for q in cur.forcing.difference(&cur.bad).iter() {
            let out = cur.delta.outgoing(q);
            let forced = out.iter().any(|&(e, t)| roles.is_forcible(e) && cur.states.contains(t));
            let other = out.iter().any(|&(e, _)| !roles.is_forcible(e));
            if !forced || other {
                return fail(
                    k,
                    format!("forcing state {} violates forcing shape", plant.state_name(q)),
                );
            }
        }
        for q in cur.states.difference(&cur.forcing).iter() {
            for &(e, _) in delta0.outgoing(q) {
                if roles.is_threat(e)
                    && !cur.delta.target(q, e).is_some_and(|t| cur.states.contains(t))
                {
                    return fail(
                        k,
                        format!(
                            "state {} lost {}",
                            plant.state_name(q),
                            plant.alphabet().name(e)
                        ),
                    );
                }
            }
        }
    }
    Ok(())
}

/// Transitions of the plant not present in the supervisor whose endpoints are
/// both supervisor states, as `(source, event, target)` names.
pub fn removed_internal_transitions(plant: &Automaton, sup: &Automaton) -> BTreeSet<(String, String, String)> {
    let kept: BTreeSet<(String, String, String)> = sup
        .transitions()
        .map(|t| {
            (
                sup.state_name(t.source).into(),
                sup.alphabet().name(t.event).into(),
                sup.state_name(t.target).into(),
            )
        })
        .collect();
    plant
        .transitions()
        .filter(|t| {
            sup.state_id(plant.state_name(t.source)).is_some()
                && sup.state_id(plant.state_name(t.target)).is_some()
        })
        .map(|t| {
            (
                String::from(plant.state_name(t.source)),
                String::from(plant.alphabet().name(t.event)),
                String::from(plant.state_name(t.target)),
            )
        })
        .filter(|t| !kept.contains(t))
        .collect()
}

/// Round-by-round evaluation of the fixpoints that rescans every state.
/// Slow; meant for cross-checking.
pub mod reference {
    use super::*;

    pub fn bad_forcing_rounds(
        states: &StateSet,
        delta: &TransitionMap,
        nonblocking: &StateSet,
        forcing: &StateSet,
        roles: &EventRoles,
    ) -> (StateSet, StateSet) {
        let mut bad = states.difference(nonblocking);
        let mut forcing = forcing.intersection(states);
        loop {
            let mut next_bad = bad.clone();
            let mut next_forcing = forcing.clone();
            for q in states.iter() {
                let threat = threatened(delta, roles, &bad, q);
                let escape = escapes(delta, roles, &bad, q);
                if (threat || forcing.contains(q)) && !escape {
                    next_bad.insert(q);
                }
                if threat && escape {
                    next_forcing.insert(q);
                }
            }
            let stable = next_bad == bad;
            bad = next_bad;
            forcing = next_forcing;
            let exit_ok = forcing
                .difference(&bad)
                .iter()
                .all(|q| escapes(delta, roles, &bad, q));
            if stable && exit_ok {
                return (bad, forcing);
            }
        }
    }

    pub fn nonblocking_rounds(states: &StateSet, delta: &TransitionMap, marked: &StateSet) -> StateSet {
        let mut nb = marked.intersection(states);
        loop {
            let mut next = nb.clone();
            for q in states.iter() {
                if delta.outgoing(q).iter().any(|&(_, t)| nb.contains(t)) {
                    next.insert(q);
                }
            }
            if next == nb {
                return nb;
            }
            nb = next;
        }
    }
}
