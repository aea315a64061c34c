//! A small InkML subset: `<trace>` elements holding comma-separated points
//! with whitespace-separated channels, of which only the first two (x, y)
//! are read. Labels come from the `annotation` of an enclosing
//! `<traceGroup>`, or of a group that references the trace through
//! `<traceView traceDataRef="...">`.

use std::collections::HashMap;

use roxmltree::{Document, Node};

use super::trace::{InkTrace, Point};
use crate::error::{Error, Result};

fn is(node: &Node, name: &str) -> bool {
    node.is_element() && node.tag_name().name() == name
}

fn line_of(doc: &Document, node: &Node) -> usize {
    doc.text_pos_at(node.range().start).row as usize
}

fn group_label(group: &Node) -> Option<String> {
    let annotations: Vec<Node> = group.children().filter(|c| is(c, "annotation")).collect();
    annotations
        .iter()
        .find(|a| a.attribute("type") == Some("truth"))
        .or_else(|| annotations.first())
        .and_then(|a| a.text())
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
}

fn trace_id<'a>(node: &Node<'a, '_>) -> Option<&'a str> {
    node.attributes()
        .find(|a| a.name() == "id")
        .map(|a| a.value())
}

fn parse_points(doc: &Document, node: &Node) -> Result<Vec<Point>> {
    let line = line_of(doc, node);
    let text = node.text().unwrap_or("");
    let mut points = Vec::new();
    for chunk in text.split(',') {
        let mut channels = chunk.split_whitespace();
        let Some(first) = channels.next() else {
            continue;
        };
        let second = channels.next().ok_or_else(|| Error::Parse {
            line,
            reason: format!("point '{}' has fewer than two channels", chunk.trim()),
        })?;
        let num = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    line,
                    reason: format!("'{s}' is not a number"),
                })
        };
        points.push(Point::new(num(first)?, num(second)?));
    }
    if points.len() == 1 {
        // a dot; kept so multi-stroke symbols can still include it
        points.push(points[0]);
    }
    Ok(points)
}

struct Parsed {
    traces: Vec<(Option<String>, InkTrace)>,
    // leaf groups: label and indices into `traces`
    groups: Vec<(Option<String>, Vec<usize>)>,
}

fn parse(document: &str) -> Result<Parsed> {
    let doc = Document::parse(document).map_err(|e| Error::Parse {
        line: e.pos().row as usize,
        reason: e.to_string(),
    })?;

    let mut traces = Vec::new();
    let mut by_id: HashMap<String, usize> = HashMap::new();
    for node in doc.descendants().filter(|n| is(n, "trace")) {
        let points = parse_points(&doc, &node)?;
        let label = node
            .ancestors()
            .filter(|a| is(a, "traceGroup"))
            .find_map(|g| group_label(&g));
        let trace = InkTrace::new(points, None).map_err(|e| Error::Parse {
            line: line_of(&doc, &node),
            reason: e.to_string(),
        })?;
        if let Some(id) = trace_id(&node) {
            by_id.insert(id.to_string(), traces.len());
        }
        traces.push((label, trace));
    }

    let mut groups = Vec::new();
    for group in doc.descendants().filter(|n| is(n, "traceGroup")) {
        let mut members = Vec::new();
        for child in group.children() {
            if is(&child, "traceView") {
                if let Some(idx) = child
                    .attribute("traceDataRef")
                    .map(|r| r.trim_start_matches('#'))
                    .and_then(|r| by_id.get(r))
                {
                    members.push(*idx);
                }
            }
        }
        // direct trace children, in document order
        let direct: Vec<usize> = doc
            .descendants()
            .filter(|n| is(n, "trace"))
            .enumerate()
            .filter(|(_, n)| n.parent().map(|p| p == group).unwrap_or(false))
            .map(|(i, _)| i)
            .collect();
        members.extend(direct);
        if members.is_empty() {
            continue;
        }
        let label = group_label(&group);
        for &i in &members {
            if traces[i].0.is_none() {
                traces[i].0 = label.clone();
            }
        }
        groups.push((label, members));
    }
    Ok(Parsed { traces, groups })
}

/// One [`InkTrace`] per `<trace>` element, in document order.
pub fn parse_inkml(document: &str) -> Result<Vec<InkTrace>> {
    Ok(parse(document)?
        .traces
        .into_iter()
        .map(|(label, mut t)| {
            t.label = label;
            t
        })
        .collect())
}

/// One [`InkTrace`] per trace group, its strokes concatenated in order.
/// Documents without groups yield one symbol per trace.
pub fn parse_inkml_symbols(document: &str) -> Result<Vec<InkTrace>> {
    let parsed = parse(document)?;
    if parsed.groups.is_empty() {
        return parse_inkml(document);
    }
    parsed
        .groups
        .into_iter()
        .map(|(label, members)| {
            let strokes: Vec<InkTrace> = members.iter().map(|&i| parsed.traces[i].1.clone()).collect();
            InkTrace::concat(&strokes, label)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_trace() {
        let t = parse_inkml("<ink><trace>0 0, 1 0, 1 1</trace></ink>").unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(
            t[0].points(),
            &[Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0)]
        );
        assert_eq!(t[0].label(), None);
    }

    #[test]
    fn extra_channels_ignored() {
        let t = parse_inkml("<ink><trace>0 0 0.5, 1 0 0.7</trace></ink>").unwrap();
        assert_eq!(t[0].points(), &[Point::new(0.0, 0.0), Point::new(1.0, 0.0)]);
    }

    #[test]
    fn empty_document() {
        assert!(parse_inkml("<ink xmlns=\"http://www.w3.org/2003/InkML\"></ink>").unwrap().is_empty());
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_inkml("<ink><trace>0 0, 1</trace></ink>"), Err(Error::Parse { .. })));
        assert!(matches!(parse_inkml("<ink><trace>0 a</trace></ink>"), Err(Error::Parse { .. })));
        assert!(matches!(parse_inkml("<ink><trace>0 0</ink>"), Err(Error::Parse { .. })));
    }

    #[test]
    fn labels_from_groups_and_views() {
        let doc = r##"<ink xmlns="http://www.w3.org/2003/InkML">
  <trace xml:id="t1">0 0, 10 0</trace>
  <trace xml:id="t2">10 0, 10 10</trace>
  <trace xml:id="t3">5 5, 6 6, 7 5</trace>
  <traceGroup>
    <annotation type="truth">L</annotation>
    <traceView traceDataRef="#t1"/>
    <traceView traceDataRef="t2"/>
  </traceGroup>
  <traceGroup>
    <annotation type="truth">v</annotation>
    <traceView traceDataRef="t3"/>
  </traceGroup>
</ink>"##;
        let traces = parse_inkml(doc).unwrap();
        let labels: Vec<_> = traces.iter().map(|t| t.label()).collect();
        assert_eq!(labels, [Some("L"), Some("L"), Some("v")]);
        let symbols = parse_inkml_symbols(doc).unwrap();
        assert_eq!(symbols.len(), 2);
        assert_eq!(symbols[0].points().len(), 3);
        assert_eq!(symbols[0].label(), Some("L"));
    }

    #[test]
    fn nested_trace_inherits_group_label() {
        let doc = "<ink><traceGroup><annotation>a</annotation><trace>0 0, 1 1</trace><trace>2 2, 3 3</trace></traceGroup></ink>";
        let t = parse_inkml(doc).unwrap();
        assert_eq!(t[1].label(), Some("a"));
        let s = parse_inkml_symbols(doc).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].points().len(), 4);
    }
}
