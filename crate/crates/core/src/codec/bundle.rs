//! Binary share bundle, one per encoder.
//!
//! Layout, little-endian throughout:
//!
//! ```text
//! "SMDC" | version u8 | scheme u8 | L u16 | N u16 | encoder u16 | sources u16
//! | sources × original length u64 | sources × symbol count u64 | payload
//! ```
//!
//! For coded bundles the symbol count of source `α` is `⌈len_α/α⌉`; the
//! encoder-0 bundle of SMDC-A stores its uncoded prefix lengths there instead.

use std::fs;
use std::path::{Path, PathBuf};

use super::layer_symbols;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"SMDC";
pub const VERSION: u8 = 1;
const FIXED_HEADER: usize = 4 + 1 + 1 + 2 + 2 + 2 + 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Scheme {
    Smdc = 0,
    SmdcA = 1,
    Ssmdc = 2,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Smdc => "smdc",
            Scheme::SmdcA => "smdc-a",
            Scheme::Ssmdc => "s-smdc",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [Scheme::Smdc, Scheme::SmdcA, Scheme::Ssmdc].into_iter().find(|s| s.name() == name)
    }

    fn from_code(code: u8) -> Result<Self> {
        match code {
            0 => Ok(Scheme::Smdc),
            1 => Ok(Scheme::SmdcA),
            2 => Ok(Scheme::Ssmdc),
            other => Err(Error::Format(format!("unknown scheme code {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareBundle {
    pub scheme: Scheme,
    /// `L`.
    pub encoders: usize,
    /// Secrecy threshold `N`; zero unless S-SMDC.
    pub n: usize,
    /// `0` only for the SMDC-A all-access bundle.
    pub encoder_index: usize,
    pub source_lengths: Vec<u64>,
    pub symbol_counts: Vec<u64>,
    pub payload: Vec<u8>,
}

/// `<stem>.enc<l>.smdc`.
pub fn bundle_file_name(stem: &str, encoder_index: usize) -> String {
    format!("{stem}.enc{encoder_index}.smdc")
}

fn u16_field(value: usize, what: &str) -> Result<[u8; 2]> {
    u16::try_from(value)
        .map(u16::to_le_bytes)
        .map_err(|_| Error::Format(format!("{what} = {value} does not fit in 16 bits")))
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .at
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Format("truncated share bundle".into()))?;
        let out = &self.bytes[self.at..end];
        self.at = end;
        Ok(out)
    }

    fn u16(&mut self) -> Result<usize> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().expect("two bytes")) as usize)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("eight bytes")))
    }
}

impl ShareBundle {
    pub fn file_name(&self, stem: &str) -> String {
        bundle_file_name(stem, self.encoder_index)
    }

    /// Payload offset of source `index` (0-based).
    pub fn layer_offset(&self, index: usize) -> u64 {
        self.symbol_counts[..index].iter().sum()
    }

    /// Same scheme, `L`, `N` and per-source layout.
    pub fn same_code_as(&self, other: &ShareBundle) -> bool {
        self.scheme == other.scheme
            && self.encoders == other.encoders
            && self.n == other.n
            && self.source_lengths == other.source_lengths
            && self.symbol_counts == other.symbol_counts
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Format(m));
        if self.encoders == 0 {
            return bad("L must be positive".into());
        }
        if self.scheme != Scheme::Ssmdc && self.n != 0 {
            return bad("N must be zero outside S-SMDC".into());
        }
        let expected_sources = match self.scheme {
            Scheme::Ssmdc if self.n >= self.encoders => {
                return bad(format!("N = {} must be below L = {}", self.n, self.encoders))
            }
            Scheme::Ssmdc => self.encoders - self.n,
            _ => self.encoders,
        };
        if self.source_lengths.len() != expected_sources || self.symbol_counts.len() != expected_sources {
            return bad(format!("expected {expected_sources} sources in the header"));
        }
        if self.encoder_index > self.encoders || (self.encoder_index == 0 && self.scheme != Scheme::SmdcA) {
            return bad(format!("encoder index {} invalid for this header", self.encoder_index));
        }
        let layout_ok = if self.encoder_index == 0 {
            self.symbol_counts.iter().zip(&self.source_lengths).all(|(c, len)| c <= len)
        } else {
            self.symbol_counts
                .iter()
                .zip(&self.source_lengths)
                .enumerate()
                .all(|(i, (&c, &len))| c == layer_symbols(len, i + 1))
        };
        if !layout_ok {
            return bad("symbol counts do not match source lengths".into());
        }
        let total = self.symbol_counts.iter().try_fold(0u64, |acc, &c| acc.checked_add(c));
        if total != Some(self.payload.len() as u64) {
            return bad(format!("payload has {} bytes, header declares {total:?}", self.payload.len()));
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.try_to_bytes().expect("bundle fields fit the header")
    }

    pub fn try_to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(FIXED_HEADER + 16 * self.source_lengths.len() + self.payload.len());
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(self.scheme as u8);
        out.extend_from_slice(&u16_field(self.encoders, "L")?);
        out.extend_from_slice(&u16_field(self.n, "N")?);
        out.extend_from_slice(&u16_field(self.encoder_index, "encoder index")?);
        out.extend_from_slice(&u16_field(self.source_lengths.len(), "source count")?);
        for v in self.source_lengths.iter().chain(&self.symbol_counts) {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&self.payload);
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, at: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::Format("missing SMDC magic".into()));
        }
        let version = r.take(1)?[0];
        if version != VERSION {
            return Err(Error::Format(format!("unsupported bundle version {version}")));
        }
        let scheme = Scheme::from_code(r.take(1)?[0])?;
        let encoders = r.u16()?;
        let n = r.u16()?;
        let encoder_index = r.u16()?;
        let count = r.u16()?;
        let source_lengths = (0..count).map(|_| r.u64()).collect::<Result<Vec<_>>>()?;
        let symbol_counts = (0..count).map(|_| r.u64()).collect::<Result<Vec<_>>>()?;
        let payload = bytes[r.at..].to_vec();
        let bundle = Self { scheme, encoders, n, encoder_index, source_lengths, symbol_counts, payload };
        bundle.validate()?;
        Ok(bundle)
    }

    /// Writes `<dir>/<stem>.enc<l>.smdc` and returns its path.
    pub fn write_to(&self, dir: &Path, stem: &str) -> Result<PathBuf> {
        let path = dir.join(self.file_name(stem));
        fs::write(&path, self.try_to_bytes()?)?;
        Ok(path)
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }
}
