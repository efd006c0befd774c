//! Graphviz rendering of time-tree worlds: one digraph per world, circles
//! for time points labelled with their true propositions (and payoff at
//! leaves), arcs labelled with events.

use crate::worlds::TimeTreeWorld;

pub fn world_to_dot(world: &TimeTreeWorld) -> String {
    let mut out = String::new();
    out.push_str(&format!("digraph \"{}\" {{\n", world.id));
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle];\n");
    for point in &world.points {
        let mut label = point.0.clone();
        let props = world.props(point);
        if !props.is_empty() {
            let props: Vec<&str> = props.iter().map(String::as_str).collect();
            label.push_str(&format!("\\n{{{}}}", props.join(", ")));
        }
        if let Some(payoff) = world.leaf_payoff.get(point) {
            label.push_str(&format!("\\n{payoff}"));
        }
        out.push_str(&format!("  \"{point}\" [label=\"{label}\"];\n"));
    }
    let mut arcs = world.arcs.clone();
    arcs.sort();
    for arc in &arcs {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            arc.from, arc.to, arc.event
        ));
    }
    out.push_str("}\n");
    out
}
