//! Graphviz and plain-text renderings.

use std::fmt::Write;

use wbisim_core::semiring::Semiring;
use wbisim_core::wlts::{Label, Partition};
use wbisim_core::Wlts;

fn quoted(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// The system as a digraph, edges labelled `label,weight` and τ-edges
/// dashed. With `clusters`, each block is drawn as a boxed cluster.
pub fn dot<S: Semiring>(w: &Wlts<S>, graph: &str, clusters: Option<&Partition>) -> String {
    let s = w.semiring();
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quoted(graph)).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    let node = |x: wbisim_core::StateId| format!("n{}", x.index());
    match clusters {
        Some(p) => {
            for (i, block) in p.blocks().iter().enumerate() {
                writeln!(out, "  subgraph cluster_{i} {{").unwrap();
                writeln!(out, "    label={};", quoted(&format!("B{i}"))).unwrap();
                for &x in block {
                    writeln!(out, "    {} [label={}];", node(x), quoted(w.state_name(x))).unwrap();
                }
                writeln!(out, "  }}").unwrap();
            }
        }
        None => {
            for x in w.states() {
                writeln!(out, "  {} [label={}];", node(x), quoted(w.state_name(x))).unwrap();
            }
        }
    }
    for (x, e) in w.transitions() {
        let label = format!("{},{}", w.label_name(e.label), s.format_value(&e.weight));
        let style = if e.label == Label::Tau {
            ", style=dashed"
        } else {
            ""
        };
        writeln!(
            out,
            "  {} -> {} [label={}{}];",
            node(x),
            node(e.target),
            quoted(&label),
            style
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// One `from --label,weight--> to` line per transition.
pub fn plain_transitions<S: Semiring>(w: &Wlts<S>) -> String {
    let s = w.semiring();
    let mut out = String::new();
    for (x, e) in w.transitions() {
        writeln!(
            out,
            "{} --{},{}--> {}",
            w.state_name(x),
            w.label_name(e.label),
            s.format_value(&e.weight),
            w.state_name(e.target)
        )
        .unwrap();
    }
    out
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate().take(cols) {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, &wd)| format!("{c:<wd$}"))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting_escapes_quotes_and_backslashes() {
        assert_eq!(quoted(r#"a"b\c"#), r#""a\"b\\c""#);
    }

    #[test]
    fn table_pads_columns() {
        let t = table(
            &["state".into(), "tau".into()],
            &[vec!["x".into(), "1/2".into()]],
        );
        assert_eq!(t, "state  tau\nx      1/2\n");
    }
}
