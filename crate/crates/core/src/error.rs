use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate event `{0}`")]
    DuplicateEvent(String),
    #[error("names must be nonempty")]
    EmptyName,
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("state not found: `{0}`")]
    UnknownState(String),
    #[error("automaton `{0}` has no initial state")]
    MissingInitial(String),
    #[error("nondeterministic transitions from `{state}` on `{event}`")]
    Nondeterministic { state: String, event: String },
    #[error("depth cap exceeded: {depth} > {cap}")]
    DepthCapExceeded { depth: usize, cap: usize },
    #[error("cannot compose an empty list of automata")]
    EmptyComposition,
    #[error("alphabet mismatch on event `{0}`")]
    AlphabetMismatch(String),
    #[error("product state name `{0}` is ambiguous")]
    StateNameCollision(String),
    #[error("specification not a sublanguage: `{0}` is not marked in the plant")]
    NotSublanguage(String),
    #[error("not a subautomaton: {0}")]
    NotSubautomaton(String),
    #[error("desynchronized: {0}")]
    Desynchronized(String),
    #[error("`{0}` disabled by supervisor")]
    DisabledBySupervisor(String),
    #[error("`{0}` not eligible in plant")]
    NotEligibleInPlant(String),
    #[error("oracle cap exceeded: {count} transitions > {cap}")]
    TransitionCapExceeded { count: usize, cap: usize },
    #[error("supervisor is empty")]
    EmptySupervisor,
}
