//! Line-oriented text stream format.
//!
//! One item per line: `<timestamp> <dim>:<value> [<dim>:<value> ...]` with
//! ascending dimensions. Vectors are normalized on ingestion. Timestamps and
//! values are written with shortest round-tripping decimal representation.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::scalar::{real, Real};
use crate::vector::{normalize, SparseVector, StreamItem};

/// Parse one line into `(timestamp, vector)`; the caller assigns the id.
pub fn parse_text_line<T: Real>(line: &str, line_no: usize) -> Result<(f64, SparseVector<T>)> {
    let err = |msg: String| Error::Parse { line: line_no, msg };
    let mut tokens = line.split_whitespace();
    let ts_token = tokens.next().ok_or_else(|| err("empty line".into()))?;
    let timestamp: f64 = ts_token
        .parse()
        .map_err(|_| err(format!("bad timestamp {ts_token:?}")))?;
    if !timestamp.is_finite() {
        return Err(err(format!("non-finite timestamp {ts_token:?}")));
    }

    let mut coords: Vec<(u32, T)> = Vec::new();
    let mut last_dim: Option<u32> = None;
    for token in tokens {
        let (dim_s, value_s) = token
            .split_once(':')
            .ok_or_else(|| err(format!("expected dim:value, got {token:?}")))?;
        let dim: u32 = dim_s
            .parse()
            .map_err(|_| err(format!("bad dimension {dim_s:?}")))?;
        let value: f64 = value_s
            .parse()
            .map_err(|_| err(format!("bad value {value_s:?}")))?;
        if !value.is_finite() {
            return Err(err(format!("non-finite value {value_s:?}")));
        }
        if let Some(prev) = last_dim {
            if dim <= prev {
                return Err(err(format!("dimensions not ascending at {dim}")));
            }
        }
        last_dim = Some(dim);
        coords.push((dim, real(value)));
    }

    let vector = normalize(&coords).map_err(|e| err(e.to_string()))?;
    Ok((timestamp, vector))
}

/// Read a whole text stream, assigning ids in arrival order.
pub fn read_text<T: Real, R: BufRead>(reader: R) -> Result<Vec<StreamItem<T>>> {
    let mut items = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (timestamp, vector) = parse_text_line(&line, i + 1)?;
        items.push(StreamItem::new(items.len() as u64, timestamp, vector));
    }
    Ok(items)
}

pub fn write_text<T: Real, W: Write>(writer: &mut W, items: &[StreamItem<T>]) -> Result<()> {
    for item in items {
        write!(writer, "{}", item.timestamp)?;
        for (dim, value) in item.vector.iter() {
            write!(writer, " {dim}:{value}")?;
        }
        writeln!(writer)?;
    }
    Ok(())
}
