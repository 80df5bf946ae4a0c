//! Per-event trace records and their CSV form.
//!
//! Columns are `t,event,n_alive,sol_size,opt,max_opt,added,removed` followed
//! by one `aux_<key>` column per algorithm counter. Absent values are empty
//! cells.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Timestamp;
use crate::stream::EventKind;

const FIXED_COLUMNS: [&str; 8] = ["t", "event", "n_alive", "sol_size", "opt", "max_opt", "added", "removed"];
const AUX_PREFIX: &str = "aux_";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: Timestamp,
    pub event: EventKind,
    pub n_alive: usize,
    pub sol_size: usize,
    pub opt: Option<usize>,
    pub max_opt: Option<usize>,
    pub added: usize,
    pub removed: usize,
    pub aux: BTreeMap<String, u64>,
}

impl TraceRecord {
    pub fn stability(&self) -> usize {
        self.added + self.removed
    }

    pub fn aux_value(&self, key: &str) -> Option<u64> {
        self.aux.get(key).copied()
    }
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("unexpected header: {0}")]
    Header(String),
    #[error("row {row}: bad value {value:?} in column {column}")]
    Value { row: usize, column: String, value: String },
}

pub fn write_csv<W: Write>(records: &[TraceRecord], writer: W) -> Result<(), TraceError> {
    let aux_keys: BTreeSet<&str> = records.iter().flat_map(|r| r.aux.keys().map(String::as_str)).collect();
    let mut w = csv::Writer::from_writer(writer);
    let header: Vec<String> = FIXED_COLUMNS
        .iter()
        .map(|c| c.to_string())
        .chain(aux_keys.iter().map(|k| format!("{AUX_PREFIX}{k}")))
        .collect();
    w.write_record(&header)?;
    let opt_cell = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in records {
        let mut row = vec![
            r.t.to_string(),
            r.event.as_str().to_string(),
            r.n_alive.to_string(),
            r.sol_size.to_string(),
            opt_cell(r.opt),
            opt_cell(r.max_opt),
            r.added.to_string(),
            r.removed.to_string(),
        ];
        row.extend(aux_keys.iter().map(|k| r.aux.get(*k).map(u64::to_string).unwrap_or_default()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(reader: R) -> Result<Vec<TraceRecord>, TraceError> {
    let mut rd = csv::Reader::from_reader(reader);
    let header = rd.headers()?.clone();
    let cols: Vec<&str> = header.iter().collect();
    if cols.len() < FIXED_COLUMNS.len() || cols[..FIXED_COLUMNS.len()] != FIXED_COLUMNS {
        return Err(TraceError::Header(cols.join(",")));
    }
    let aux_keys: Vec<String> = cols[FIXED_COLUMNS.len()..]
        .iter()
        .map(|c| c.strip_prefix(AUX_PREFIX).map(str::to_string).ok_or_else(|| TraceError::Header(c.to_string())))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for (row, rec) in rd.records().enumerate() {
        let rec = rec?;
        let bad = |i: usize| TraceError::Value { row, column: cols[i].to_string(), value: rec[i].to_string() };
        let num = |i: usize| rec[i].parse::<u64>().map_err(|_| bad(i));
        let maybe = |i: usize| -> Result<Option<usize>, TraceError> {
            if rec[i].is_empty() {
                Ok(None)
            } else {
                num(i).map(|x| Some(x as usize))
            }
        };
        let event = match &rec[1] {
            "add" => EventKind::Add,
            "del" => EventKind::Del,
            _ => return Err(bad(1)),
        };
        let mut aux = BTreeMap::new();
        for (j, key) in aux_keys.iter().enumerate() {
            let i = FIXED_COLUMNS.len() + j;
            if !rec[i].is_empty() {
                aux.insert(key.clone(), num(i)?);
            }
        }
        out.push(TraceRecord {
            t: num(0)?,
            event,
            n_alive: num(2)? as usize,
            sol_size: num(3)? as usize,
            opt: maybe(4)?,
            max_opt: maybe(5)?,
            added: num(6)? as usize,
            removed: num(7)? as usize,
            aux,
        });
    }
    Ok(out)
}

pub fn save_csv(records: &[TraceRecord], path: impl AsRef<Path>) -> Result<(), TraceError> {
    let file = std::fs::File::create(path)?;
    write_csv(records, std::io::BufWriter::new(file))
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<Vec<TraceRecord>, TraceError> {
    read_csv(std::io::BufReader::new(std::fs::File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn record(t: u64) -> TraceRecord {
        TraceRecord {
            t,
            event: EventKind::Add,
            n_alive: t as usize,
            sol_size: 1,
            opt: Some(1),
            max_opt: None,
            added: 1,
            removed: 0,
            aux: BTreeMap::from([("u".to_string(), 3)]),
        }
    }

    #[test]
    fn header_and_rows() {
        let mut buf = Vec::new();
        write_csv(&[record(1)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "t,event,n_alive,sol_size,opt,max_opt,added,removed,aux_u\n1,add,1,1,1,,1,0,3\n");
    }

    #[test]
    fn rejects_unknown_header() {
        let err = read_csv("t,event\n".as_bytes()).unwrap_err();
        assert!(matches!(err, TraceError::Header(_)));
    }

    #[test]
    fn empty_trace_has_header_only() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(read_csv(buf.as_slice()).unwrap(), vec![]);
    }

    fn arb_record() -> impl Strategy<Value = TraceRecord> {
        (
            0u64..1000,
            any::<bool>(),
            0usize..100,
            0usize..100,
            proptest::option::of(0usize..100),
            proptest::option::of(0usize..100),
            0usize..7,
            0usize..7,
            proptest::collection::btree_map(proptest::sample::select(vec!["u", "w", "phase"]), 0u64..500, 0..3),
        )
            .prop_map(|(t, del, n, s, opt, max_opt, added, removed, aux)| TraceRecord {
                t,
                event: if del { EventKind::Del } else { EventKind::Add },
                n_alive: n,
                sol_size: s,
                opt,
                max_opt,
                added,
                removed,
                aux: aux.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            })
    }

    proptest! {
        #[test]
        fn csv_round_trip(records in proptest::collection::vec(arb_record(), 0..20)) {
            let mut buf = Vec::new();
            write_csv(&records, &mut buf).unwrap();
            prop_assert_eq!(read_csv(buf.as_slice()).unwrap(), records);
        }
    }
}
