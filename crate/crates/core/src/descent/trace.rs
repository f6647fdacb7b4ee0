//! DOT rendering of descent traces. JSON comes from serde directly.

use std::fmt::Write;

use super::{DescentOutcome, DescentRun, DescentState, DescentTrace, ExclusionKind, TerminalAnalysis};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn prune_label(kind: ExclusionKind) -> &'static str {
    match kind {
        ExclusionKind::MinusOneNonResidue => "(-1/d) = -1",
        ExclusionKind::TwoNonResidue => "(2/d) = -1",
        ExclusionKind::Case4Guard => "t divides c1 + c2 and c1 - c2",
    }
}

fn state_label(s: &DescentState) -> String {
    let t = &s.tuple;
    let mut label = format!("level {}\\n(k, j, m1, e1) = ({}, {}, {}, {})", s.level, t.k, t.j, t.m, t.e);
    if let Some(n) = s.normalized {
        let _ = write!(label, "\\n(m, e) = ({}, {})", n.m, n.e);
    }
    if let Some(w) = s.witnesses {
        let _ = write!(label, "\\n(s, t, c1, c2) = ({}, {}, {}, {})", w.s, w.t, w.c1, w.c2);
    }
    label
}

fn terminal_label(a: &TerminalAnalysis) -> String {
    match a {
        TerminalAnalysis::DivisibilityPremise(p) => {
            let names: Vec<&str> = [(p.d_divides_k, "k"), (p.d_divides_m, "m1"), (p.d_divides_e, "e1")]
                .iter()
                .filter(|x| x.0)
                .map(|x| x.1)
                .collect();
            format!("d divides {}", names.join(", "))
        }
        TerminalAnalysis::BaseCase(b) => format!(
            "j = 1: (m, e) = ({}, {}), contradiction: {}",
            b.forced.0, b.forced.1, b.contradiction
        ),
    }
}

fn outcome_label(o: &DescentOutcome) -> String {
    match o {
        DescentOutcome::Contradiction { reason, .. } => format!("contradiction\\n{}", escape(&reason.detail)),
        DescentOutcome::Terminated { analysis, .. } => format!("terminated\\n{}", terminal_label(analysis)),
        DescentOutcome::WitnessFound { survival, .. } => {
            format!("witness survives\\n{}", escape(&survival.equation.to_string()))
        }
    }
}

fn write_trace(out: &mut String, tr: &DescentTrace, prefix: &str) {
    for s in &tr.states {
        let node = format!("{prefix}s{}", s.level);
        let _ = writeln!(out, "  {node} [shape=box, label=\"{}\"];", state_label(s));
        for b in &s.branches {
            let child = format!("{node}_{}", b.case);
            let (style, label) = match (b.realized, b.pruned_by) {
                (true, _) => ("bold", format!("{}", s.case.unwrap_or(b.case))),
                (false, Some(kind)) => ("dashed", format!("{} pruned: {}", b.case, prune_label(kind))),
                (false, None) => ("dotted", format!("{} not realized", b.case)),
            };
            let _ = writeln!(out, "  {child} [shape=ellipse, style={style}, label=\"{label}\"];");
            let _ = writeln!(out, "  {node} -> {child} [style={style}];");
            if b.realized && s.reduction.is_some() {
                let _ = writeln!(out, "  {child} -> {prefix}s{} [label=\"Case 3 step\"];", s.level + 1);
            }
        }
    }
    let last = tr.states.last().map(|s| s.level).unwrap_or(0);
    let end = format!("{prefix}end");
    let _ = writeln!(out, "  {end} [shape=doubleoctagon, label=\"{}\"];", outcome_label(&tr.outcome));
    let from = tr.states[last]
        .case
        .map(|c| format!("{prefix}s{last}_{}", c.branch()))
        .unwrap_or_else(|| format!("{prefix}s{last}"));
    let _ = writeln!(out, "  {from} -> {end};");
}

impl DescentTrace {
    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph descent_{} {{\n", self.d);
        write_trace(&mut out, self, "");
        out.push_str("}\n");
        out
    }
}

impl DescentRun {
    /// All traces as clusters of one graph.
    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph descent_{} {{\n", self.d);
        if self.traces.is_empty() {
            let _ = writeln!(out, "  none [shape=box, label=\"{}\"];", escape(&format!("{:?}", self.conclusion)));
        }
        for (i, tr) in self.traces.iter().enumerate() {
            let _ = writeln!(out, "subgraph cluster_{i} {{");
            let t = &tr.seed;
            let _ = writeln!(out, "  label=\"seed ({}, {}, {}, {})\";", t.k, t.j, t.m, t.e);
            write_trace(&mut out, tr, &format!("t{i}_"));
            out.push_str("}\n");
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use crate::descent::{run_descent, DescentSeed};

    #[test]
    fn dot_mentions_every_branch() {
        let run = run_descent(7, DescentSeed::Bound(30)).unwrap();
        let dot = run.to_dot();
        assert!(dot.starts_with("digraph"));
        for case in ["Case1", "Case2", "Case3", "Case4"] {
            assert!(dot.contains(case));
        }
        assert!(dot.contains("pruned"));
        let single = run.traces[0].to_dot();
        assert!(single.contains("witness survives"));
    }
}
