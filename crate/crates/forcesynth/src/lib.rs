//! File formats, DOT export, the command-line tool and the JSON session API
//! around [`forcesynth_core`].

pub mod api;
pub mod cli;
pub mod dot;
pub mod model;
pub mod session;

pub use forcesynth_core as core;
