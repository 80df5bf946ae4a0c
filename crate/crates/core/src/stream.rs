//! Event streams and their JSON Lines file format.
//!
//! One event per line:
//!
//! ```text
//! {"meta":{"d":2,"model":"arrival","desc":"random"}}
//! {"op":"add","v":0,"nbrs":[]}
//! {"op":"add","v":1,"nbrs":[0]}
//! {"op":"del","v":0}
//! ```
//!
//! The `meta` header line is optional and may only appear first.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DynamicGraph, GraphError, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum StreamEvent {
    #[serde(rename = "add")]
    Arrival {
        #[serde(rename = "v")]
        vertex: VertexId,
        #[serde(rename = "nbrs", default)]
        neighbors: Vec<VertexId>,
    },
    #[serde(rename = "del")]
    Departure {
        #[serde(rename = "v")]
        vertex: VertexId,
    },
}

impl StreamEvent {
    pub fn arrival(vertex: u32, neighbors: &[u32]) -> Self {
        StreamEvent::Arrival { vertex: VertexId(vertex), neighbors: neighbors.iter().copied().map(VertexId).collect() }
    }

    pub fn departure(vertex: u32) -> Self {
        StreamEvent::Departure { vertex: VertexId(vertex) }
    }

    pub fn vertex(&self) -> VertexId {
        match self {
            StreamEvent::Arrival { vertex, .. } | StreamEvent::Departure { vertex } => *vertex,
        }
    }

    pub fn kind(&self) -> EventKind {
        match self {
            StreamEvent::Arrival { .. } => EventKind::Add,
            StreamEvent::Departure { .. } => EventKind::Del,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Add,
    Del,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Add => "add",
            EventKind::Del => "del",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Model {
    #[default]
    #[serde(rename = "arrival")]
    Arrival,
    #[serde(rename = "fully-dynamic")]
    FullyDynamic,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Arrival => "arrival",
            Model::FullyDynamic => "fully-dynamic",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default)]
    pub model: Model,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub desc: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct MetaLine {
    meta: StreamMeta,
}

#[derive(Debug, Error)]
pub enum StreamError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("could not encode event: {0}")]
    Encode(#[source] serde_json::Error),
    #[error("line {line}: stream header must be the first line")]
    MisplacedHeader { line: usize },
    #[error("event {index}: {source}")]
    Invalid {
        index: usize,
        #[source]
        source: GraphError,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EventStream {
    pub meta: Option<StreamMeta>,
    pub events: Vec<StreamEvent>,
}

impl EventStream {
    pub fn new(meta: Option<StreamMeta>, events: Vec<StreamEvent>) -> Self {
        EventStream { meta, events }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// The declared model, falling back to whether the stream contains departures.
    pub fn model(&self) -> Model {
        match &self.meta {
            Some(meta) if meta.model == Model::FullyDynamic => Model::FullyDynamic,
            _ if self.has_departures() => Model::FullyDynamic,
            _ => Model::Arrival,
        }
    }

    pub fn has_departures(&self) -> bool {
        self.events.iter().any(|e| matches!(e, StreamEvent::Departure { .. }))
    }

    pub fn declared_d(&self) -> Option<usize> {
        self.meta.as_ref().and_then(|m| m.d)
    }

    /// Replays the whole stream into a fresh graph.
    pub fn replay(&self) -> Result<DynamicGraph, StreamError> {
        let mut g = DynamicGraph::new();
        for (index, ev) in self.events.iter().enumerate() {
            g.apply(ev).map_err(|source| StreamError::Invalid { index, source })?;
        }
        Ok(g)
    }

    /// Checks every event against the graph preconditions.
    pub fn validate(&self) -> Result<(), StreamError> {
        self.replay().map(|_| ())
    }

    /// Largest arrival degree in the stream.
    pub fn max_arrival_degree(&self) -> usize {
        self.events
            .iter()
            .filter_map(|e| match e {
                StreamEvent::Arrival { neighbors, .. } => Some(neighbors.len()),
                StreamEvent::Departure { .. } => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Smallest integer `d` with average degree at most `d` after every event.
    pub fn max_average_degree_ceil(&self) -> Result<usize, StreamError> {
        let mut g = DynamicGraph::new();
        let mut best = 0;
        for (index, ev) in self.events.iter().enumerate() {
            g.apply(ev).map_err(|source| StreamError::Invalid { index, source })?;
            if !g.is_empty() {
                let twice_edges = 2 * g.edge_count();
                best = best.max(twice_edges.div_ceil(g.vertex_count()));
            }
        }
        Ok(best)
    }

    pub fn read_jsonl<R: Read>(reader: R) -> Result<Self, StreamError> {
        let mut meta = None;
        let mut events = Vec::new();
        for (idx, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            if trimmed.contains("\"meta\"") && is_meta_line(trimmed) {
                if !events.is_empty() || meta.is_some() {
                    return Err(StreamError::MisplacedHeader { line: lineno });
                }
                let parsed: MetaLine =
                    serde_json::from_str(trimmed).map_err(|source| StreamError::Parse { line: lineno, source })?;
                meta = Some(parsed.meta);
                continue;
            }
            let ev: StreamEvent =
                serde_json::from_str(trimmed).map_err(|source| StreamError::Parse { line: lineno, source })?;
            events.push(ev);
        }
        Ok(EventStream { meta, events })
    }

    pub fn write_jsonl<W: Write>(&self, writer: W) -> Result<(), StreamError> {
        let mut w = BufWriter::new(writer);
        if let Some(meta) = &self.meta {
            serde_json::to_writer(&mut w, &MetaLine { meta: meta.clone() }).map_err(StreamError::Encode)?;
            writeln!(w)?;
        }
        for ev in &self.events {
            serde_json::to_writer(&mut w, ev).map_err(StreamError::Encode)?;
            writeln!(w)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, StreamError> {
        Self::read_jsonl(File::open(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), StreamError> {
        self.write_jsonl(File::create(path)?)
    }
}

fn is_meta_line(line: &str) -> bool {
    serde_json::from_str::<serde_json::Value>(line)
        .ok()
        .and_then(|v| v.as_object().map(|o| o.contains_key("meta")))
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_documented_lines() {
        let text = r#"{"meta":{"d":2,"model":"fully-dynamic","desc":"x"}}
{"op":"add","v":0,"nbrs":[]}
{"op":"add","v":1,"nbrs":[0]}

{"op":"del","v":0}
"#;
        let s = EventStream::read_jsonl(text.as_bytes()).unwrap();
        let meta = s.meta.clone().unwrap();
        assert_eq!(meta.d, Some(2));
        assert_eq!(meta.model, Model::FullyDynamic);
        assert_eq!(
            s.events,
            vec![StreamEvent::arrival(0, &[]), StreamEvent::arrival(1, &[0]), StreamEvent::departure(0)]
        );
        assert_eq!(s.model(), Model::FullyDynamic);
    }

    #[test]
    fn event_serialization_matches_format() {
        assert_eq!(
            serde_json::to_string(&StreamEvent::arrival(3, &[1, 2])).unwrap(),
            r#"{"op":"add","v":3,"nbrs":[1,2]}"#
        );
        assert_eq!(serde_json::to_string(&StreamEvent::departure(3)).unwrap(), r#"{"op":"del","v":3}"#);
    }

    #[test]
    fn header_after_events_is_rejected() {
        let text = "{\"op\":\"add\",\"v\":0,\"nbrs\":[]}\n{\"meta\":{\"d\":1}}\n";
        assert!(matches!(EventStream::read_jsonl(text.as_bytes()), Err(StreamError::MisplacedHeader { line: 2 })));
    }

    #[test]
    fn garbage_reports_line_number() {
        let text = "{\"op\":\"add\",\"v\":0,\"nbrs\":[]}\n{\"op\":\"jump\"}\n";
        assert!(matches!(EventStream::read_jsonl(text.as_bytes()), Err(StreamError::Parse { line: 2, .. })));
    }

    #[test]
    fn degree_scans() {
        let s = EventStream::new(
            None,
            vec![StreamEvent::arrival(0, &[]), StreamEvent::arrival(1, &[0]), StreamEvent::arrival(2, &[0, 1])],
        );
        assert_eq!(s.max_arrival_degree(), 2);
        // triangle: average degree 2
        assert_eq!(s.max_average_degree_ceil().unwrap(), 2);
    }

    fn arb_stream() -> impl Strategy<Value = EventStream> {
        proptest::collection::vec((0u8..3, proptest::collection::vec(any::<prop::sample::Index>(), 0..4)), 0..30)
            .prop_map(|steps| {
                let mut alive: Vec<u32> = Vec::new();
                let mut next = 0u32;
                let mut events = Vec::new();
                for (kind, picks) in steps {
                    if kind == 0 && !alive.is_empty() {
                        let idx = picks.first().map(|p| p.index(alive.len())).unwrap_or(0);
                        let v = alive.remove(idx);
                        events.push(StreamEvent::departure(v));
                    } else {
                        let mut nbrs: Vec<u32> =
                            picks.iter().filter(|_| !alive.is_empty()).map(|p| alive[p.index(alive.len())]).collect();
                        nbrs.sort_unstable();
                        nbrs.dedup();
                        events.push(StreamEvent::arrival(next, &nbrs));
                        alive.push(next);
                        next += 1;
                    }
                }
                EventStream::new(Some(StreamMeta { d: Some(3), model: Model::FullyDynamic, desc: None }), events)
            })
    }

    proptest! {
        #[test]
        fn jsonl_round_trip(stream in arb_stream()) {
            let mut buf = Vec::new();
            stream.write_jsonl(&mut buf).unwrap();
            let back = EventStream::read_jsonl(buf.as_slice()).unwrap();
            prop_assert_eq!(&back, &stream);
        }

        #[test]
        fn replay_is_deterministic_and_symmetric(stream in arb_stream()) {
            let g1 = stream.replay().unwrap();
            let g2 = stream.replay().unwrap();
            prop_assert_eq!(&g1, &g2);
            for v in g1.vertices() {
                for &u in g1.neighbors(v).unwrap() {
                    prop_assert!(g1.has_edge(u, v));
                }
                prop_assert_eq!(
                    g1.out_closed_neighborhood(v).unwrap().len(),
                    g1.arrival_degree(v).unwrap() + 1
                );
            }
        }
    }
}
