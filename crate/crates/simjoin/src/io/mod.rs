//! Stream file formats (text and binary) and synthetic stream generators.

mod binary;
mod generate;
mod text;

pub use binary::{read_binary, write_binary, MAGIC};
pub use generate::{generate_stream, DimDistribution, GeneratorConfig, TimestampModel};
pub use text::{parse_text_line, read_text, write_text};

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use crate::error::Result;
use crate::scalar::Real;
use crate::vector::StreamItem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamFormat {
    Text,
    Binary,
}

impl StreamFormat {
    /// Infer a format from a file extension; `.bin` means binary.
    pub fn infer(path: &Path) -> StreamFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("bin") => StreamFormat::Binary,
            _ => StreamFormat::Text,
        }
    }
}

pub fn read_stream<T: Real>(path: &Path, format: StreamFormat) -> Result<Vec<StreamItem<T>>> {
    let file = BufReader::new(File::open(path)?);
    match format {
        StreamFormat::Text => read_text(file),
        StreamFormat::Binary => read_binary(file),
    }
}

pub fn write_stream<T: Real>(
    path: &Path,
    format: StreamFormat,
    items: &[StreamItem<T>],
) -> Result<()> {
    let mut file = BufWriter::new(File::create(path)?);
    match format {
        StreamFormat::Text => write_text(&mut file, items),
        StreamFormat::Binary => write_binary(&mut file, items),
    }
}
