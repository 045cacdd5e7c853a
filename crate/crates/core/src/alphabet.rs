//! Events and alphabets.
//!
//! An [`Alphabet`] keeps its events sorted by name, so an [`EventId`] orders
//! the same way as the event names it stands for.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;

/// Index of an event inside an [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(pub u32);

impl EventId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A named event with its control attributes.
///
/// Controllability and forcibility are independent: a forcible event may be
/// controllable (it can be forced or disabled) or uncontrollable (it can be
/// forced but never disabled).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Event {
    pub name: String,
    pub controllable: bool,
    pub forcible: bool,
}

impl Event {
    pub fn new(name: impl Into<String>, controllable: bool, forcible: bool) -> Self {
        Self {
            name: name.into(),
            controllable,
            forcible,
        }
    }

    pub fn controllable(name: impl Into<String>) -> Self {
        Self::new(name, true, false)
    }

    pub fn uncontrollable(name: impl Into<String>) -> Self {
        Self::new(name, false, false)
    }
}

/// A finite set of events, sorted by name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Alphabet {
    events: Vec<Event>,
}

impl Alphabet {
    /// Builds an alphabet. Event names must be nonempty and unique.
    pub fn new(events: impl IntoIterator<Item = Event>) -> Result<Self, Error> {
        let mut events: Vec<Event> = events.into_iter().collect();
        events.sort_by(|a, b| a.name.cmp(&b.name));
        for pair in events.windows(2) {
            if pair[0].name == pair[1].name {
                return Err(Error::DuplicateEvent(pair[0].name.clone()));
            }
        }
        if events.iter().any(|e| e.name.is_empty()) {
            return Err(Error::EmptyName);
        }
        Ok(Self { events })
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = EventId> + '_ {
        (0..self.events.len() as u32).map(EventId)
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn event(&self, id: EventId) -> &Event {
        &self.events[id.index()]
    }

    pub fn name(&self, id: EventId) -> &str {
        &self.events[id.index()].name
    }

    pub fn id(&self, name: &str) -> Option<EventId> {
        self.events
            .binary_search_by(|e| e.name.as_str().cmp(name))
            .ok()
            .map(|i| EventId(i as u32))
    }

    pub fn lookup(&self, name: &str) -> Result<EventId, Error> {
        self.id(name).ok_or_else(|| Error::UnknownEvent(name.into()))
    }

    pub fn is_controllable(&self, id: EventId) -> bool {
        self.events[id.index()].controllable
    }

    pub fn is_uncontrollable(&self, id: EventId) -> bool {
        !self.events[id.index()].controllable
    }

    pub fn is_forcible(&self, id: EventId) -> bool {
        self.events[id.index()].forcible
    }

    /// Σ_c
    pub fn controllable(&self) -> BTreeSet<EventId> {
        self.ids().filter(|&e| self.is_controllable(e)).collect()
    }

    /// Σ_u
    pub fn uncontrollable(&self) -> BTreeSet<EventId> {
        self.ids().filter(|&e| self.is_uncontrollable(e)).collect()
    }

    /// Σ_f
    pub fn forcible(&self) -> BTreeSet<EventId> {
        self.ids().filter(|&e| self.is_forcible(e)).collect()
    }

    /// Returns a copy where exactly the named events are forcible.
    pub fn with_forcible<'a>(
        &self,
        names: impl IntoIterator<Item = &'a str>,
    ) -> Result<Self, Error> {
        let mut events = self.events.clone();
        for e in &mut events {
            e.forcible = false;
        }
        for name in names {
            let id = self.lookup(name)?;
            events[id.index()].forcible = true;
        }
        Ok(Self { events })
    }

    /// Returns a copy with every forcible flag cleared.
    pub fn without_forcing(&self) -> Self {
        let mut events = self.events.clone();
        for e in &mut events {
            e.forcible = false;
        }
        Self { events }
    }

    /// Union by name. Fails if two events share a name but not attributes.
    pub fn merge(&self, other: &Alphabet) -> Result<Self, Error> {
        let mut events = self.events.clone();
        for e in &other.events {
            match self.id(&e.name) {
                Some(id) => {
                    if self.event(id) != e {
                        return Err(Error::AlphabetMismatch(e.name.clone()));
                    }
                }
                None => events.push(e.clone()),
            }
        }
        Self::new(events)
    }

    pub fn format_set(&self, set: &BTreeSet<EventId>) -> String {
        let mut out = String::from("{");
        for (i, e) in set.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(self.name(*e));
        }
        out.push('}');
        out
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: BTreeSet<EventId> = self.ids().collect();
        f.write_str(&self.format_set(&ids))
    }
}
