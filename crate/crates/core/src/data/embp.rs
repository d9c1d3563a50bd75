//! EMBP: the binary embedding-pair interchange format.
//!
//! Little-endian throughout. A 24-byte header
//!
//! ```text
//! 0..4   magic "EMBP"
//! 4..8   version u32 = 1
//! 8..12  dim u32
//! 12..20 n_pairs u64
//! 20..24 reserved u32 = 0
//! ```
//!
//! followed by `n_pairs` records of `dim` f32 (x), `dim` f32 (y) and one f32
//! gold score already normalized to [0, 1].

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use super::EmbeddingPair;
use crate::error::{Error, Result};
use crate::metrics::DenseVector;

pub const MAGIC: [u8; 4] = *b"EMBP";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: u64 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbpHeader {
    pub dim: u32,
    pub n_pairs: u64,
}

impl EmbpHeader {
    pub fn record_len(&self) -> u64 {
        (2 * u64::from(self.dim) + 1) * 4
    }

    /// Exact byte length of a well-formed file with this header.
    pub fn file_len(&self) -> Option<u64> {
        self.n_pairs.checked_mul(self.record_len())?.checked_add(HEADER_LEN)
    }

    fn encode(&self) -> [u8; HEADER_LEN as usize] {
        let mut buf = [0u8; HEADER_LEN as usize];
        buf[0..4].copy_from_slice(&MAGIC);
        buf[4..8].copy_from_slice(&VERSION.to_le_bytes());
        buf[8..12].copy_from_slice(&self.dim.to_le_bytes());
        buf[12..20].copy_from_slice(&self.n_pairs.to_le_bytes());
        buf
    }

    fn decode(buf: &[u8; HEADER_LEN as usize]) -> Result<Self> {
        if buf[0..4] != MAGIC {
            return Err(Error::Format(format!("bad magic {:02x?}", &buf[0..4])));
        }
        let version = u32::from_le_bytes(buf[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let dim = u32::from_le_bytes(buf[8..12].try_into().unwrap());
        let n_pairs = u64::from_le_bytes(buf[12..20].try_into().unwrap());
        let reserved = u32::from_le_bytes(buf[20..24].try_into().unwrap());
        if reserved != 0 {
            return Err(Error::Format(format!("reserved field is {reserved}, expected 0")));
        }
        if dim == 0 {
            return Err(Error::Format("dim is 0".into()));
        }
        if n_pairs == 0 {
            return Err(Error::Format("n_pairs is 0".into()));
        }
        Ok(EmbpHeader { dim, n_pairs })
    }
}

fn truncated(e: io::Error) -> Error {
    if e.kind() == io::ErrorKind::UnexpectedEof {
        Error::Format("file truncated".into())
    } else {
        Error::Io(e)
    }
}

/// Writes pairs to any sink. Returns the header that was written.
pub fn write_embedding_pairs<W: Write>(pairs: &[EmbeddingPair], mut out: W) -> Result<EmbpHeader> {
    let first = pairs.first().ok_or(Error::EmptyInput("EMBP files need at least one pair"))?;
    let dim = first.dim();
    if let Some(bad) = pairs.iter().find(|p| p.dim() != dim) {
        return Err(Error::Dimension { expected: dim, found: bad.dim() });
    }
    let header = EmbpHeader {
        dim: u32::try_from(dim).map_err(|_| Error::Format(format!("dim {dim} exceeds u32")))?,
        n_pairs: pairs.len() as u64,
    };
    out.write_all(&header.encode())?;
    let mut record = Vec::with_capacity(header.record_len() as usize);
    for p in pairs {
        record.clear();
        for v in p.x.as_slice().iter().chain(p.y.as_slice()) {
            record.extend_from_slice(&v.to_le_bytes());
        }
        record.extend_from_slice(&(p.gold.value() as f32).to_le_bytes());
        out.write_all(&record)?;
    }
    out.flush()?;
    Ok(header)
}

struct HashingWriter<W> {
    inner: W,
    hasher: Sha256,
}

impl<W: Write> Write for HashingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

/// Writes an EMBP file and returns the lowercase hex SHA-256 of its contents.
pub fn write_embedding_file(pairs: &[EmbeddingPair], path: impl AsRef<Path>) -> Result<String> {
    let file = File::create(path.as_ref())?;
    let mut sink = HashingWriter { inner: BufWriter::new(file), hasher: Sha256::new() };
    write_embedding_pairs(pairs, &mut sink)?;
    sink.inner.into_inner().map_err(|e| e.into_error())?.sync_all()?;
    Ok(hex::encode(sink.hasher.finalize()))
}

/// Streaming reader over EMBP records.
pub struct EmbpReader<R> {
    inner: R,
    header: EmbpHeader,
    remaining: u64,
    buf: Vec<u8>,
}

impl<R: Read> EmbpReader<R> {
    pub fn new(mut inner: R) -> Result<Self> {
        let mut head = [0u8; HEADER_LEN as usize];
        inner.read_exact(&mut head).map_err(truncated)?;
        let header = EmbpHeader::decode(&head)?;
        let record_len = usize::try_from(header.record_len())
            .map_err(|_| Error::Format("record length overflows".into()))?;
        Ok(EmbpReader { inner, header, remaining: header.n_pairs, buf: vec![0; record_len] })
    }

    pub fn header(&self) -> EmbpHeader {
        self.header
    }

    fn read_record(&mut self) -> Result<EmbeddingPair> {
        self.inner.read_exact(&mut self.buf).map_err(truncated)?;
        let dim = self.header.dim as usize;
        let mut floats = self
            .buf
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()));
        let x: Vec<f32> = floats.by_ref().take(dim).collect();
        let y: Vec<f32> = floats.by_ref().take(dim).collect();
        let gold = floats.next().expect("record holds 2*dim+1 floats");
        let index = self.header.n_pairs - self.remaining;
        if !gold.is_finite() {
            return Err(Error::Numeric(format!("pair {index}: gold is {gold}")));
        }
        let x = DenseVector::new(x).map_err(|e| at_pair(index, e))?;
        let y = DenseVector::new(y).map_err(|e| at_pair(index, e))?;
        EmbeddingPair::new(x, y, f64::from(gold)).map_err(|e| at_pair(index, e))
    }

    /// Errors if any bytes follow the last record.
    pub fn finish(mut self) -> Result<()> {
        let mut probe = [0u8; 1];
        match self.inner.read(&mut probe)? {
            0 => Ok(()),
            _ => Err(Error::Format("trailing bytes after last record".into())),
        }
    }
}

fn at_pair(index: u64, e: Error) -> Error {
    match e {
        Error::Numeric(m) => Error::Numeric(format!("pair {index}: {m}")),
        Error::Range(m) => Error::Range(format!("pair {index}: {m}")),
        other => other,
    }
}

impl<R: Read> Iterator for EmbpReader<R> {
    type Item = Result<EmbeddingPair>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        let item = self.read_record();
        self.remaining = if item.is_ok() { self.remaining - 1 } else { 0 };
        Some(item)
    }
}

fn collect_all<R: Read>(reader: EmbpReader<R>) -> Result<Vec<EmbeddingPair>> {
    let mut reader = reader;
    let mut pairs = Vec::with_capacity(reader.header.n_pairs.min(1 << 20) as usize);
    for p in reader.by_ref() {
        pairs.push(p?);
    }
    reader.finish()?;
    Ok(pairs)
}

fn check_len(header: &EmbpHeader, actual: u64) -> Result<()> {
    match header.file_len() {
        Some(expected) if expected == actual => Ok(()),
        Some(expected) => Err(Error::Format(format!(
            "header promises {} pairs of dim {} ({expected} bytes) but file is {actual} bytes",
            header.n_pairs, header.dim
        ))),
        None => Err(Error::Format("header length overflows".into())),
    }
}

pub fn read_embedding_bytes(bytes: &[u8]) -> Result<Vec<EmbeddingPair>> {
    let reader = EmbpReader::new(bytes)?;
    check_len(&reader.header(), bytes.len() as u64)?;
    collect_all(reader)
}

/// Reads every pair of an EMBP file, in file order.
pub fn read_embedding_file(path: impl AsRef<Path>) -> Result<Vec<EmbeddingPair>> {
    let file = File::open(path.as_ref())?;
    let len = file.metadata()?.len();
    let reader = EmbpReader::new(BufReader::new(file))?;
    check_len(&reader.header(), len)?;
    collect_all(reader)
}

/// Reads and validates only the header (including the byte-length check).
pub fn read_header(path: impl AsRef<Path>) -> Result<EmbpHeader> {
    let file = File::open(path.as_ref())?;
    let len = file.metadata()?.len();
    let header = EmbpReader::new(BufReader::new(file))?.header();
    check_len(&header, len)?;
    Ok(header)
}

pub fn sha256_file(path: impl AsRef<Path>) -> Result<String> {
    let mut file = BufReader::new(File::open(path.as_ref())?);
    let mut sink = HashingWriter { inner: io::sink(), hasher: Sha256::new() };
    io::copy(&mut file, &mut sink)?;
    Ok(hex::encode(sink.hasher.finalize()))
}
