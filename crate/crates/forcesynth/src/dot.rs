//! Graphviz export.
//!
//! Uncontrollable edges are dashed, forcible event labels are underlined,
//! marked states are double circles and forcing states are filled green.

use std::fmt::Write;

use forcesynth_core::{Automaton, StateSet};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn html_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `a` as a DOT digraph. States and edges come out in index order,
/// so the output is deterministic.
pub fn to_dot(a: &Automaton, forcing: Option<&StateSet>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph {} {{", quote(a.name()));
    s.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    if let Some(init) = a.initial() {
        s.push_str("  __init [shape=point, label=\"\"];\n");
        let _ = writeln!(s, "  __init -> {};", quote(a.state_name(init)));
    }
    for q in a.states() {
        let mut attrs = Vec::new();
        if a.is_marked(q) {
            attrs.push("shape=doublecircle".to_string());
        }
        if forcing.is_some_and(|f| f.contains(q)) {
            attrs.push("style=filled".into());
            attrs.push("fillcolor=palegreen".into());
        }
        let name = quote(a.state_name(q));
        if attrs.is_empty() {
            let _ = writeln!(s, "  {name};");
        } else {
            let _ = writeln!(s, "  {name} [{}];", attrs.join(", "));
        }
    }
    let alphabet = a.alphabet();
    for t in a.transitions() {
        let ev = alphabet.event(t.event);
        let label = if ev.forcible {
            format!("<<u>{}</u>>", html_escape(&ev.name))
        } else {
            quote(&ev.name)
        };
        let style = if ev.controllable { "" } else { ", style=dashed" };
        let _ = writeln!(
            s,
            "  {} -> {} [label={label}{style}];",
            quote(a.state_name(t.source)),
            quote(a.state_name(t.target)),
        );
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use forcesynth_core::{Alphabet, AutomatonBuilder, Event};
    use std::sync::Arc;

    #[test]
    fn styles() {
        let a = Arc::new(
            Alphabet::new([Event::new("f", true, true), Event::uncontrollable("u")]).unwrap(),
        );
        let mut b = AutomatonBuilder::new("G", a);
        b.initial("x").marked("y");
        b.transition("x", "f", "y").unwrap();
        b.transition("y", "u", "x").unwrap();
        let g = b.build().unwrap();
        let mut forcing = StateSet::empty(2);
        forcing.insert(g.state_id("x").unwrap());
        let dot = to_dot(&g, Some(&forcing));
        assert!(dot.contains("\"x\" -> \"y\" [label=<<u>f</u>>];"));
        assert!(dot.contains("\"y\" -> \"x\" [label=\"u\", style=dashed];"));
        assert!(dot.contains("\"y\" [shape=doublecircle];"));
        assert!(dot.contains("\"x\" [style=filled, fillcolor=palegreen];"));
        assert!(dot.contains("__init -> \"x\";"));
        assert_eq!(dot, to_dot(&g, Some(&forcing)));
    }
}
