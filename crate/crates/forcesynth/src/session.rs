//! Stateful closed-loop sessions shared by the simulator and the HTTP API.

use std::collections::BTreeSet;

use forcesynth_core::{
    synthesize, Automaton, ClosedLoop, ControlDecision, Error, EventId, LoopState, Mode, StateSet,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// A supervisor and its plant plus the current loop state and its history.
#[derive(Debug, Clone)]
pub struct Session {
    plant: Automaton,
    supervisor: Automaton,
    forcing: Option<StateSet>,
    state: LoopState,
}

/// The control decision at a loop state, as event names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecisionView {
    pub mode: String,
    pub allowed: Vec<String>,
    pub disabled: Vec<String>,
    pub preempted: Vec<String>,
    /// Events the plant can take here.
    pub eligible: Vec<String>,
    /// Events that can fire: allowed and eligible.
    pub fireable: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SessionView {
    pub plant_state: String,
    pub sup_state: String,
    pub history: Vec<String>,
    pub marked: bool,
    pub decision: DecisionView,
}

impl Session {
    pub fn new(
        plant: Automaton,
        supervisor: Automaton,
        forcing: Option<StateSet>,
    ) -> Result<Self, Error> {
        let state = ClosedLoop::new(&supervisor, &plant, forcing.clone())?.initial();
        Ok(Self {
            plant,
            supervisor,
            forcing,
            state,
        })
    }

    /// Synthesizes the supervisor for `plant` and opens a session on it.
    pub fn synthesized(plant: Automaton, mode: Mode) -> Result<Self, Error> {
        let r = synthesize(&plant, mode);
        Self::new(plant, r.supervisor, Some(r.forcing_states))
    }

    pub fn plant(&self) -> &Automaton {
        &self.plant
    }

    pub fn supervisor(&self) -> &Automaton {
        &self.supervisor
    }

    pub fn forcing(&self) -> Option<&StateSet> {
        self.forcing.as_ref()
    }

    pub fn state(&self) -> &LoopState {
        &self.state
    }

    fn closed_loop(&self) -> ClosedLoop<'_> {
        ClosedLoop::new(&self.supervisor, &self.plant, self.forcing.clone())
            .expect("validated on construction")
    }

    pub fn decision(&self) -> Result<ControlDecision, Error> {
        self.closed_loop().decide(&self.state)
    }

    /// Events that can fire from the current state, in event order.
    pub fn fireable(&self) -> Result<Vec<EventId>, Error> {
        let lp = self.closed_loop();
        let eligible = lp.plant_eligible(&self.state);
        Ok(lp.decide(&self.state)?.fireable(&eligible).collect())
    }

    pub fn step(&mut self, event: &str) -> Result<(), Error> {
        self.state = self.closed_loop().step_named(&self.state, event)?;
        Ok(())
    }

    /// Drops the last event. Returns `false` at the initial state.
    pub fn undo(&mut self) -> Result<bool, Error> {
        let mut history = self.state.history.clone();
        if history.pop().is_none() {
            return Ok(false);
        }
        self.state = self.closed_loop().replay(&history)?;
        Ok(true)
    }

    pub fn view(&self) -> Result<SessionView, Error> {
        let lp = self.closed_loop();
        let a = self.plant.alphabet();
        let names = |set: &BTreeSet<EventId>| set.iter().map(|&e| a.name(e).to_string()).collect();
        let d = lp.decide(&self.state)?;
        let eligible = lp.plant_eligible(&self.state);
        let fireable: BTreeSet<EventId> = d.fireable(&eligible).collect();
        Ok(SessionView {
            plant_state: self.plant.state_name(self.state.plant_state).into(),
            sup_state: self.supervisor.state_name(self.state.sup_state).into(),
            history: self
                .state
                .history
                .iter()
                .map(|&e| a.name(e).to_string())
                .collect(),
            marked: self.plant.is_marked(self.state.plant_state),
            decision: DecisionView {
                mode: d.mode.to_string(),
                allowed: names(&d.allowed),
                disabled: names(&d.disabled),
                preempted: names(&d.preempted),
                eligible: names(&eligible),
                fireable: names(&fireable),
            },
        })
    }
}

/// Where a simulation takes its events from.
#[derive(Debug, Clone)]
pub enum Driver {
    /// Fire these events in order.
    Trace(Vec<String>),
    /// Pick uniformly among fireable events with a seeded generator.
    Random { seed: u64, steps: usize },
}

/// One line per visited state, plus the error that stopped the run early.
#[derive(Debug)]
pub struct Transcript {
    pub lines: Vec<String>,
    pub rejected: Option<Error>,
}

/// Runs a session. The transcript depends only on the inputs.
pub fn simulate(session: &mut Session, driver: &Driver) -> Transcript {
    let mut lines = Vec::new();
    let rejected = run_driver(session, driver, &mut lines).err();
    Transcript { lines, rejected }
}

fn run_driver(session: &mut Session, driver: &Driver, lines: &mut Vec<String>) -> Result<(), Error> {
    let mut rng = match driver {
        Driver::Random { seed, .. } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        Driver::Trace(_) => None,
    };
    let budget = match driver {
        Driver::Trace(t) => t.len(),
        Driver::Random { steps, .. } => *steps,
    };
    for k in 0..=budget {
        let v = session.view()?;
        let next = match (driver, rng.as_mut()) {
            (Driver::Trace(t), _) => t.get(k).cloned(),
            (_, Some(rng)) if k < budget => v.decision.fireable.choose(rng).cloned(),
            _ => None,
        };
        lines.push(format!(
            "{k:>3} plant={} sup={}{} mode={} allowed={{{}}} disabled={{{}}} preempted={{{}}}{}",
            v.plant_state,
            v.sup_state,
            if v.marked { " (marked)" } else { "" },
            v.decision.mode,
            v.decision.allowed.join(","),
            v.decision.disabled.join(","),
            v.decision.preempted.join(","),
            next.as_deref().map(|e| format!(" -> {e}")).unwrap_or_default(),
        ));
        match next {
            Some(e) => session.step(&e)?,
            None => {
                if k < budget && rng.is_some() {
                    lines.push("    deadlock: nothing fireable".into());
                }
                break;
            }
        }
    }
    Ok(())
}
