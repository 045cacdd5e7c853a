//! The control map of a supervisor and the closed loop it induces.
//!
//! At each loop state the supervisor either *disables* controllable events
//! outside its own continuation set, or, when it has dropped an eligible
//! uncontrollable event and keeps a forcible one, *forces* one of its
//! forcible continuations, preempting everything else. Which forcible event
//! fires is left to the caller.
//!
//! All event ids here are ids of the plant alphabet.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::EventId;
use crate::automaton::Automaton;
use crate::check::embed;
use crate::error::Error;
use crate::language::{format_word, Word};
use crate::sets::{StateId, StateSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ControlMode {
    Disable,
    Force,
}

impl fmt::Display for ControlMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ControlMode::Disable => "disable",
            ControlMode::Force => "force",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlDecision {
    pub mode: ControlMode,
    /// In disable mode: every uncontrollable event plus the kept controllable
    /// ones. In force mode: the forcible events that may be forced.
    pub allowed: BTreeSet<EventId>,
    /// Plant-eligible controllable events the supervisor does not keep.
    pub disabled: BTreeSet<EventId>,
    /// Remaining plant-eligible events that the forced event preempts.
    pub preempted: BTreeSet<EventId>,
}

impl ControlDecision {
    /// Allowed events that the plant can actually take.
    pub fn fireable<'a>(&'a self, eligible: &'a BTreeSet<EventId>) -> impl Iterator<Item = EventId> + 'a {
        self.allowed.intersection(eligible).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LoopState {
    pub plant_state: StateId,
    pub sup_state: StateId,
    pub history: Word,
}

/// A supervisor and plant run in lockstep. The supervisor must be a
/// subautomaton of the plant, with states matched by name.
#[derive(Debug, Clone)]
pub struct ClosedLoop<'a> {
    sup: &'a Automaton,
    plant: &'a Automaton,
    forcing: Option<StateSet>,
    to_plant: Vec<StateId>,
    /// Supervisor event for each plant event, if the supervisor knows it.
    sup_event: Vec<Option<EventId>>,
}

impl<'a> ClosedLoop<'a> {
    /// `forcing` is the forcing-state annotation of `sup`, by supervisor
    /// state index. Without it every decision takes the general path.
    pub fn new(
        sup: &'a Automaton,
        plant: &'a Automaton,
        forcing: Option<StateSet>,
    ) -> Result<Self, Error> {
        if sup.is_empty() {
            return Err(Error::EmptySupervisor);
        }
        let to_plant = embed(sup, plant)?;
        let sup_event = plant
            .alphabet()
            .events()
            .iter()
            .map(|e| sup.alphabet().id(&e.name))
            .collect();
        Ok(Self {
            sup,
            plant,
            forcing,
            to_plant,
            sup_event,
        })
    }

    pub fn supervisor(&self) -> &Automaton {
        self.sup
    }

    pub fn plant(&self) -> &Automaton {
        self.plant
    }

    pub fn initial(&self) -> LoopState {
        let sup_state = self.sup.initial().expect("nonempty supervisor");
        LoopState {
            plant_state: self.to_plant[sup_state.index()],
            sup_state,
            history: Word::new(),
        }
    }

    /// Steps from the initial state through `history`.
    pub fn replay(&self, history: &[EventId]) -> Result<LoopState, Error> {
        let mut q = self.initial();
        for &e in history {
            q = self.step(&q, e)?;
        }
        Ok(q)
    }

    fn check(&self, q: &LoopState) -> Result<(), Error> {
        let ok = q.sup_state.index() < self.to_plant.len()
            && self.to_plant[q.sup_state.index()] == q.plant_state;
        if ok {
            Ok(())
        } else {
            Err(Error::Desynchronized(format_word(self.plant.alphabet(), &q.history)))
        }
    }

    /// E_F at a supervisor state.
    fn sup_enabled(&self, s: StateId) -> BTreeSet<EventId> {
        let sa = self.sup.alphabet();
        self.sup
            .eligible(s)
            .into_iter()
            .map(|e| self.plant.alphabet().id(sa.name(e)).expect("embedded"))
            .collect()
    }

    /// Events the plant can take at `q`.
    pub fn plant_eligible(&self, q: &LoopState) -> BTreeSet<EventId> {
        self.plant.eligible(q.plant_state)
    }

    pub fn is_forcing(&self, q: &LoopState) -> Option<bool> {
        self.forcing.as_ref().map(|f| f.contains(q.sup_state))
    }

    /// The control decision at `q`, using the forcing annotation when present.
    pub fn decide(&self, q: &LoopState) -> Result<ControlDecision, Error> {
        self.check(q)?;
        let mode = match self.is_forcing(q) {
            Some(true) => ControlMode::Force,
            Some(false) => ControlMode::Disable,
            None => self.general_mode(q),
        };
        Ok(self.decision(q, mode))
    }

    /// The control decision at `q` computed from the supervisor's structure
    /// alone, ignoring any annotation.
    pub fn decide_general(&self, q: &LoopState) -> Result<ControlDecision, Error> {
        self.check(q)?;
        Ok(self.decision(q, self.general_mode(q)))
    }

    fn general_mode(&self, q: &LoopState) -> ControlMode {
        let a = self.plant.alphabet();
        let kept = self.sup_enabled(q.sup_state);
        let no_forcible = !kept.iter().any(|&e| a.is_forcible(e));
        let all_uncontrollable_kept = self
            .plant
            .eligible(q.plant_state)
            .iter()
            .filter(|&&e| a.is_uncontrollable(e))
            .all(|e| kept.contains(e));
        if no_forcible || all_uncontrollable_kept {
            ControlMode::Disable
        } else {
            ControlMode::Force
        }
    }

    fn decision(&self, q: &LoopState, mode: ControlMode) -> ControlDecision {
        let a = self.plant.alphabet();
        let kept = self.sup_enabled(q.sup_state);
        let eligible = self.plant.eligible(q.plant_state);
        let allowed: BTreeSet<EventId> = match mode {
            ControlMode::Disable => a
                .ids()
                .filter(|&e| a.is_uncontrollable(e) || kept.contains(&e))
                .collect(),
            ControlMode::Force => kept.iter().copied().filter(|&e| a.is_forcible(e)).collect(),
        };
        let disabled: BTreeSet<EventId> = eligible
            .iter()
            .copied()
            .filter(|&e| a.is_controllable(e) && !kept.contains(&e) && !allowed.contains(&e))
            .collect();
        let preempted = eligible
            .iter()
            .copied()
            .filter(|e| !allowed.contains(e) && !disabled.contains(e))
            .collect();
        ControlDecision {
            mode,
            allowed,
            disabled,
            preempted,
        }
    }

    /// Fires `event` from `q`.
    pub fn step(&self, q: &LoopState, event: EventId) -> Result<LoopState, Error> {
        let decision = self.decide(q)?;
        let name = self.plant.alphabet().name(event);
        if !decision.allowed.contains(&event) {
            return Err(Error::DisabledBySupervisor(name.into()));
        }
        let Some(plant_state) = self.plant.target(q.plant_state, event) else {
            return Err(Error::NotEligibleInPlant(name.into()));
        };
        let sup_state = self.sup_event[event.index()]
            .and_then(|e| self.sup.target(q.sup_state, e))
            .ok_or_else(|| {
                let mut h = q.history.clone();
                h.push(event);
                Error::Desynchronized(format_word(self.plant.alphabet(), &h))
            })?;
        let mut history = q.history.clone();
        history.push(event);
        let next = LoopState {
            plant_state,
            sup_state,
            history,
        };
        self.check(&next)?;
        Ok(next)
    }

    pub fn step_named(&self, q: &LoopState, event: &str) -> Result<LoopState, Error> {
        let e = self.plant.alphabet().lookup(event)?;
        self.step(q, e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoopVerdict {
    /// Generated and marked loop languages match the supervisor's up to the depth.
    Holds,
    /// No initial state; nothing to run.
    EmptySupervisor,
    Mismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopReport {
    pub verdict: LoopVerdict,
    pub depth: usize,
    /// Number of loop strings of length at most `depth`.
    pub generated: usize,
    pub marked: usize,
}

impl LoopReport {
    pub fn holds(&self) -> bool {
        self.verdict == LoopVerdict::Holds
    }
}

/// Runs the loop exhaustively to `depth` and compares its generated and
/// marked strings with those of `sup`. A loop string is marked when the
/// plant state reached is marked.
pub fn verify_closed_loop(
    sup: &Automaton,
    plant: &Automaton,
    forcing: Option<StateSet>,
    depth: usize,
) -> Result<LoopReport, Error> {
    if sup.is_empty() {
        return Ok(LoopReport {
            verdict: LoopVerdict::EmptySupervisor,
            depth,
            generated: 0,
            marked: 0,
        });
    }
    let sup_closed = sup
        .bounded_language_capped(depth, false, usize::MAX)?
        .translate(sup.alphabet(), plant.alphabet())?;
    let sup_marked = sup
        .bounded_language_capped(depth, true, usize::MAX)?
        .translate(sup.alphabet(), plant.alphabet())?;

    let lp = ClosedLoop::new(sup, plant, forcing)?;
    let mut generated = BTreeSet::new();
    let mut marked = BTreeSet::new();
    let mut stack = alloc::vec![lp.initial()];
    let mut failure = None;
    while let Some(q) = stack.pop() {
        if plant.is_marked(q.plant_state) {
            marked.insert(q.history.clone());
        }
        generated.insert(q.history.clone());
        if q.history.len() == depth {
            continue;
        }
        let decision = lp.decide(&q)?;
        let eligible = lp.plant_eligible(&q);
        for e in decision.fireable(&eligible) {
            match lp.step(&q, e) {
                Ok(next) => stack.push(next),
                Err(err) => {
                    failure.get_or_insert_with(|| format!("{err}"));
                }
            }
        }
    }

    let a = plant.alphabet();
    let verdict = if let Some(f) = failure {
        LoopVerdict::Mismatch(f)
    } else if let Some(w) = generated.symmetric_difference(&sup_closed.strings).next() {
        LoopVerdict::Mismatch(format!("generated languages differ at {}", format_word(a, w)))
    } else if let Some(w) = marked.symmetric_difference(&sup_marked.strings).next() {
        LoopVerdict::Mismatch(format!("marked languages differ at {}", format_word(a, w)))
    } else {
        LoopVerdict::Holds
    };
    Ok(LoopReport {
        verdict,
        depth,
        generated: generated.len(),
        marked: marked.len(),
    })
}
