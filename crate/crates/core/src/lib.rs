//! Maximally permissive supervisor synthesis for discrete-event plants with
//! forcible events.
//!
//! A plant is a deterministic automaton whose events are controllable or
//! uncontrollable and, independently, forcible. A supervisor may disable
//! controllable events, or force one of a set of forcible events to preempt
//! everything else. [`synthesis::synthesize`] computes the largest
//! nonblocking supervisor that is forcibly-controllable with respect to the
//! plant; [`control`] turns it into a control map and runs the closed loop.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod alphabet;
pub mod automaton;
pub mod check;
pub mod compose;
pub mod control;
pub mod error;
pub mod language;
pub mod oracle;
pub mod random;
pub mod sets;
pub mod synthesis;

pub use alphabet::{Alphabet, Event, EventId};
pub use automaton::{Automaton, AutomatonBuilder};
pub use check::{Property, PropertyReport};
pub use compose::{plantify, sync_product};
pub use control::{ClosedLoop, ControlDecision, ControlMode, LoopState};
pub use error::Error;
pub use language::{StringSample, Word, DEFAULT_DEPTH_CAP};
pub use sets::{StateId, StateSet, Transition, TransitionMap};
pub use synthesis::{synthesize, synthesize_with, Mode, SynthesisOptions, SynthesisResult};
