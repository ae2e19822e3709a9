//! Compact binary stream format.
//!
//! Layout: magic bytes `SSSJ1`, then per record a little-endian `f64`
//! timestamp, a `u32` non-zero count, and that many `(u32 dim, f64 value)`
//! coordinate pairs with ascending dimensions. Values are stored normalized,
//! so a write/read cycle reproduces items bit-exactly.

use std::io::{ErrorKind, Read, Write};

use crate::error::{Error, Result};
use crate::scalar::{real, Real};
use crate::vector::{normalize, StreamItem};

pub const MAGIC: &[u8; 5] = b"SSSJ1";

pub fn write_binary<T: Real, W: Write>(writer: &mut W, items: &[StreamItem<T>]) -> Result<()> {
    writer.write_all(MAGIC)?;
    for item in items {
        writer.write_all(&item.timestamp.to_le_bytes())?;
        writer.write_all(&(item.vector.nnz() as u32).to_le_bytes())?;
        for (dim, value) in item.vector.iter() {
            writer.write_all(&dim.to_le_bytes())?;
            let v = value.to_f64().expect("coordinate representable as f64");
            writer.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_binary<T: Real, R: Read>(mut reader: R) -> Result<Vec<StreamItem<T>>> {
    let mut magic = [0u8; 5];
    reader
        .read_exact(&mut magic)
        .map_err(|_| Error::Format("missing magic bytes".into()))?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic bytes {magic:?}")));
    }

    let mut items = Vec::new();
    loop {
        let mut ts_buf = [0u8; 8];
        match reader.read_exact(&mut ts_buf) {
            Ok(()) => {}
            Err(e) if e.kind() == ErrorKind::UnexpectedEof => break, // clean end
            Err(e) => return Err(e.into()),
        }
        let timestamp = f64::from_le_bytes(ts_buf);
        let record = items.len();
        let truncated =
            |what: &str| Error::TruncatedFile(format!("record {record}: truncated {what}"));
        let mut nnz_buf = [0u8; 4];
        reader.read_exact(&mut nnz_buf).map_err(|_| truncated("count"))?;
        let nnz = u32::from_le_bytes(nnz_buf) as usize;
        // Cap the reservation so a corrupt count fails at read, not alloc.
        let mut coords: Vec<(u32, T)> = Vec::with_capacity(nnz.min(1 << 16));
        let mut last_dim: Option<u32> = None;
        for _ in 0..nnz {
            let mut dim_buf = [0u8; 4];
            reader.read_exact(&mut dim_buf).map_err(|_| truncated("dimension"))?;
            let mut value_buf = [0u8; 8];
            reader.read_exact(&mut value_buf).map_err(|_| truncated("value"))?;
            let dim = u32::from_le_bytes(dim_buf);
            if let Some(prev) = last_dim {
                if dim <= prev {
                    return Err(Error::Format(format!(
                        "record {record}: dimensions not ascending at {dim}"
                    )));
                }
            }
            last_dim = Some(dim);
            coords.push((dim, real(f64::from_le_bytes(value_buf))));
        }
        let vector = normalize(&coords)?;
        items.push(StreamItem::new(record as u64, timestamp, vector));
    }
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::normalize;

    fn item(id: u64, ts: f64, coords: &[(u32, f64)]) -> StreamItem<f64> {
        StreamItem::new(id, ts, normalize(coords).unwrap())
    }

    #[test]
    fn magic_only_file_is_an_empty_stream() {
        let items = read_binary::<f64, _>(&MAGIC[..]).unwrap();
        assert!(items.is_empty());
    }

    #[test]
    fn bad_magic_is_a_format_error() {
        let err = read_binary::<f64, _>(&b"WRONG"[..]).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
    }

    #[test]
    fn zero_nnz_record_fails_as_empty_vector() {
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&1.0f64.to_le_bytes());
        buf.extend_from_slice(&0u32.to_le_bytes());
        let err = read_binary::<f64, _>(buf.as_slice()).unwrap_err();
        assert!(matches!(err, Error::EmptyVector));
    }

    #[test]
    fn truncated_record_is_reported() {
        let mut buf = Vec::new();
        write_binary(&mut buf, &[item(0, 1.0, &[(1, 0.6), (2, 0.8)])]).unwrap();
        buf.truncate(buf.len() - 3);
        let err = read_binary::<f64, _>(buf.as_slice()).unwrap_err();
        assert!(matches!(err, Error::TruncatedFile(_)));
    }

    #[test]
    fn write_read_round_trip_is_bit_exact() {
        let items = vec![
            item(0, 0.0, &[(1, 1.0), (2, 1.0), (7, 3.0)]),
            item(1, 0.125, &[(4, 0.6), (9, 0.8)]),
            item(2, 2.5, &[(0, 5.0)]),
        ];
        let mut buf = Vec::new();
        write_binary(&mut buf, &items).unwrap();
        let again = read_binary::<f64, _>(buf.as_slice()).unwrap();
        assert_eq!(items, again);
    }
}
