//! The JSON model format.
//!
//! A model file holds one alphabet and a list of named automata, each tagged
//! as a plant, a specification or a supervisor. Field order on write is
//! fixed by the struct definitions, and every list is written in a canonical
//! order, so equal models serialize to identical bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use forcesynth_core::{
    plantify, sync_product, Alphabet, Automaton, Event, EventId, StateSet,
};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("automaton `{automaton}`, field `{field}`: {message}")]
    Invalid {
        automaton: String,
        field: &'static str,
        message: String,
    },
    #[error("alphabet: {0}")]
    Alphabet(forcesynth_core::Error),
    #[error("unsupported format version `{0}`")]
    Version(String),
    #[error("{0}")]
    Missing(String),
    #[error(transparent)]
    Core(#[from] forcesynth_core::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Plant,
    Specification,
    Supervisor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventDecl {
    pub name: String,
    pub controllable: bool,
    #[serde(default)]
    pub forcible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDecl {
    pub from: String,
    pub event: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonDecl {
    pub name: String,
    pub kind: Kind,
    pub states: Vec<String>,
    pub initial: String,
    #[serde(default)]
    pub marked: Vec<String>,
    #[serde(default)]
    pub transitions: Vec<TransitionDecl>,
    /// Events the automaton synchronises on. Defaults to the events used by
    /// its transitions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub_alphabet: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forcing_states: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub version: String,
    pub alphabet: Vec<EventDecl>,
    pub automata: Vec<AutomatonDecl>,
}

/// A validated automaton of a model.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub kind: Kind,
    pub automaton: Automaton,
    /// Forcing states by automaton state index, for supervisors that carry them.
    pub forcing: Option<StateSet>,
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let m: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if m.version != FORMAT_VERSION {
            return Err(ModelError::Version(m.version));
        }
        Ok(m)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, ModelError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), ModelError> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|source| ModelError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn alphabet(&self) -> Result<Alphabet, ModelError> {
        Alphabet::new(
            self.alphabet
                .iter()
                .map(|e| Event::new(e.name.clone(), e.controllable, e.forcible)),
        )
        .map_err(ModelError::Alphabet)
    }

    /// Sets exactly the named events forcible.
    pub fn set_forcible<S: AsRef<str>>(&mut self, names: &[S]) -> Result<(), ModelError> {
        let known: BTreeSet<&str> = self.alphabet.iter().map(|e| e.name.as_str()).collect();
        if let Some(bad) = names.iter().find(|n| !known.contains(n.as_ref())) {
            return Err(ModelError::Alphabet(forcesynth_core::Error::UnknownEvent(
                bad.as_ref().into(),
            )));
        }
        for e in &mut self.alphabet {
            e.forcible = names.iter().any(|n| n.as_ref() == e.name);
        }
        Ok(())
    }

    /// Validates the model and builds its automata over one shared alphabet.
    pub fn load(&self) -> Result<Vec<Loaded>, ModelError> {
        let alphabet = Arc::new(self.alphabet()?);
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for decl in &self.automata {
            if !seen.insert(decl.name.as_str()) {
                return Err(invalid(decl, "name", "duplicate automaton name".into()));
            }
            out.push(decl.build(&alphabet)?);
        }
        Ok(out)
    }

    fn of_kind(&self, kind: Kind) -> Result<Vec<Loaded>, ModelError> {
        Ok(self.load()?.into_iter().filter(|l| l.kind == kind).collect())
    }

    /// Synchronous product of all plants and specifications, with
    /// specifications plantified first when `plantify_specs` is set.
    pub fn composed_plant(&self, plantify_specs: bool) -> Result<Automaton, ModelError> {
        let mut parts = Vec::new();
        for l in self.load()? {
            match l.kind {
                Kind::Plant => parts.push(l.automaton),
                Kind::Specification if plantify_specs => parts.push(plantify(&l.automaton)),
                Kind::Specification => parts.push(l.automaton),
                Kind::Supervisor => {}
            }
        }
        match parts.len() {
            0 => Err(ModelError::Missing("model has no plant or specification".into())),
            1 => Ok(parts.pop().expect("one part")),
            _ => Ok(sync_product(&parts.iter().collect::<Vec<_>>())?),
        }
    }

    /// The first supervisor of the model.
    pub fn supervisor(&self) -> Result<Loaded, ModelError> {
        self.of_kind(Kind::Supervisor)?
            .into_iter()
            .next()
            .ok_or_else(|| ModelError::Missing("model has no supervisor".into()))
    }

    /// A model holding `automata` over the alphabet of the first one.
    pub fn from_automata(automata: &[(Kind, &Automaton, Option<&StateSet>)]) -> Self {
        let alphabet = automata
            .first()
            .map(|(_, a, _)| {
                a.alphabet()
                    .events()
                    .iter()
                    .map(|e| EventDecl {
                        name: e.name.clone(),
                        controllable: e.controllable,
                        forcible: e.forcible,
                    })
                    .collect()
            })
            .unwrap_or_default();
        ModelFile {
            version: FORMAT_VERSION.into(),
            alphabet,
            automata: automata
                .iter()
                .map(|(k, a, f)| AutomatonDecl::from_automaton(*k, a, *f))
                .collect(),
        }
    }
}

fn invalid(decl: &AutomatonDecl, field: &'static str, message: String) -> ModelError {
    ModelError::Invalid {
        automaton: decl.name.clone(),
        field,
        message,
    }
}

impl AutomatonDecl {
    fn build(&self, alphabet: &Arc<Alphabet>) -> Result<Loaded, ModelError> {
        if self.states.is_empty() {
            // the empty supervisor
            if !self.initial.is_empty() || !self.transitions.is_empty() {
                return Err(invalid(self, "states", "no states declared".into()));
            }
            return Ok(Loaded {
                kind: self.kind,
                automaton: Automaton::empty(self.name.clone(), alphabet.clone()),
                forcing: self.forcing_states.as_ref().map(|_| StateSet::empty(0)),
            });
        }
        let mut index = BTreeMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if index.insert(s.as_str(), i).is_some() {
                return Err(invalid(self, "states", format!("duplicate state `{s}`")));
            }
        }
        let state = |field: &'static str, s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| invalid(self, field, format!("undeclared state `{s}`")))
        };
        let event = |field: &'static str, e: &str| {
            alphabet
                .id(e)
                .ok_or_else(|| invalid(self, field, format!("undeclared event `{e}`")))
        };

        let initial = state("initial", &self.initial)?;
        let marked = self
            .marked
            .iter()
            .map(|s| state("marked", s))
            .collect::<Result<Vec<_>, _>>()?;
        let mut edges = Vec::with_capacity(self.transitions.len());
        let mut seen = BTreeMap::new();
        for t in &self.transitions {
            let f = state("transitions", &t.from)?;
            let e = event("transitions", &t.event)?;
            let g = state("transitions", &t.to)?;
            if let Some(prev) = seen.insert((f, e), g) {
                if prev != g {
                    return Err(invalid(
                        self,
                        "transitions",
                        format!("nondeterministic: `{}` on `{}`", t.from, t.event),
                    ));
                }
            }
            edges.push((f, e, g));
        }
        let events: BTreeSet<EventId> = match &self.sub_alphabet {
            Some(names) => names
                .iter()
                .map(|n| event("sub_alphabet", n))
                .collect::<Result<_, _>>()?,
            None => edges.iter().map(|&(_, e, _)| e).collect(),
        };
        if let Some(&(_, e, _)) = edges.iter().find(|(_, e, _)| !events.contains(e)) {
            return Err(invalid(
                self,
                "sub_alphabet",
                format!("transition event `{}` not in sub-alphabet", alphabet.name(e)),
            ));
        }
        let automaton = Automaton::from_parts(
            self.name.clone(),
            alphabet.clone(),
            events,
            self.states.clone(),
            initial,
            marked,
            edges,
        )
        .map_err(|e| invalid(self, "states", e.to_string()))?;

        let forcing = match &self.forcing_states {
            None => None,
            Some(_) if self.kind != Kind::Supervisor => {
                return Err(invalid(
                    self,
                    "forcing_states",
                    "only supervisors carry forcing states".into(),
                ))
            }
            Some(names) => {
                let mut set = StateSet::empty(automaton.num_states());
                for n in names {
                    let q = automaton.state_id(n).ok_or_else(|| {
                        invalid(self, "forcing_states", format!("undeclared state `{n}`"))
                    })?;
                    set.insert(q);
                }
                Some(set)
            }
        };
        Ok(Loaded {
            kind: self.kind,
            automaton,
            forcing,
        })
    }

    pub fn from_automaton(kind: Kind, a: &Automaton, forcing: Option<&StateSet>) -> Self {
        let names = |s: &StateSet| s.iter().map(|q| a.state_name(q).to_string()).collect();
        let mut transitions: Vec<TransitionDecl> = a
            .transitions()
            .map(|t| TransitionDecl {
                from: a.state_name(t.source).into(),
                event: a.alphabet().name(t.event).into(),
                to: a.state_name(t.target).into(),
            })
            .collect();
        transitions.sort();
        let used: BTreeSet<EventId> = a.transitions().map(|t| t.event).collect();
        let sub_alphabet = (&used != a.events())
            .then(|| a.events().iter().map(|&e| a.alphabet().name(e).to_string()).collect());
        AutomatonDecl {
            name: a.name().into(),
            kind,
            states: a.state_names().to_vec(),
            initial: a
                .initial()
                .map(|q| a.state_name(q).to_string())
                .unwrap_or_default(),
            marked: names(a.marked()),
            transitions,
            sub_alphabet,
            forcing_states: forcing.map(names),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
  "version": "1",
  "alphabet": [
    {"name": "a", "controllable": true, "forcible": true},
    {"name": "u", "controllable": false}
  ],
  "automata": [
    {"name": "P", "kind": "plant", "states": ["x", "y"], "initial": "x",
     "marked": ["x"], "transitions": [{"from": "x", "event": "a", "to": "y"},
                                      {"from": "y", "event": "u", "to": "x"}]}
  ]
}"#;

    #[test]
    fn parse_and_load() {
        let m = ModelFile::from_json(SMALL).unwrap();
        let l = m.load().unwrap();
        assert_eq!(l[0].automaton.num_transitions(), 2);
        assert!(m.composed_plant(false).unwrap().is_isomorphic(&l[0].automaton));
    }

    #[test]
    fn parse_error_has_position() {
        let err = ModelFile::from_json("{\n  \"version\": 1\n}").unwrap_err();
        match err {
            ModelError::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn undeclared_state() {
        let text = SMALL.replace(r#""to": "x""#, r#""to": "z""#);
        let err = ModelFile::from_json(&text).unwrap().load().unwrap_err();
        assert_eq!(
            err.to_string(),
            "automaton `P`, field `transitions`: undeclared state `z`"
        );
    }

    #[test]
    fn forcing_states_only_on_supervisors() {
        let text = SMALL.replace(r#""marked": ["x"]"#, r#""marked": ["x"], "forcing_states": ["x"]"#);
        let err = ModelFile::from_json(&text).unwrap().load().unwrap_err();
        assert!(matches!(err, ModelError::Invalid { field: "forcing_states", .. }));
    }

    #[test]
    fn round_trip_through_automaton() {
        let m = ModelFile::from_json(SMALL).unwrap();
        let a = &m.load().unwrap()[0].automaton;
        let back = ModelFile::from_automata(&[(Kind::Plant, a, None)]);
        let again = ModelFile::from_json(&back.to_json()).unwrap();
        assert_eq!(back, again);
        assert!(again.load().unwrap()[0].automaton.is_isomorphic(a));
    }
}
