//! Fragment and message files.
//!
//! A fragment file is a 22-byte little-endian header followed by the
//! symbols at the field's fixed width:
//!
//! | bytes | content                                          |
//! |-------|--------------------------------------------------|
//! | 0..4  | magic `RGC1`                                     |
//! | 4     | codec tag                                        |
//! | 5     | field kind (0 prime, 1 binary, 2 Fermat)         |
//! | 6..10 | field parameter (p, m, or 65537), u32            |
//! | 10..16| n, k, d, u16 each                                |
//! | 16..18| node index, 1-based, u16                         |
//! | 18..22| symbol count, u32                                |
//!
//! A message file is the bare symbol stream at the same width.

use std::fs;
use std::path::{Path, PathBuf};

use regen_core::{CodeParams, Field, FieldKind, Fragment};

use crate::codec::{Codec, CodecKind};
use crate::error::{HarnessError, Result};

pub const MAGIC: &[u8; 4] = b"RGC1";
pub const HEADER_LEN: usize = 22;

/// A fragment together with everything needed to rebuild its codec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FragmentFile {
    pub codec: CodecKind,
    pub field: Field,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub fragment: Fragment,
}

fn kind_tag(kind: FieldKind) -> u8 {
    match kind {
        FieldKind::Prime => 0,
        FieldKind::Binary => 1,
        FieldKind::Fermat => 2,
    }
}

fn format_err(msg: impl Into<String>) -> HarnessError {
    HarnessError::Format(msg.into())
}

fn to_u16(v: usize, what: &str) -> Result<u16> {
    u16::try_from(v).map_err(|_| format_err(format!("{what} = {v} does not fit in 16 bits")))
}

impl FragmentFile {
    pub fn new(codec: &Codec, fragment: Fragment) -> FragmentFile {
        let CodeParams { n, k, d, .. } = codec.params();
        FragmentFile {
            codec: codec.kind(),
            field: codec.field(),
            n,
            k,
            d,
            fragment,
        }
    }

    /// Rebuilds the codec described by the header.
    pub fn codec(&self) -> Result<Codec> {
        Codec::new(self.codec, self.field, self.n, self.k, Some(self.d))
    }

    /// Whether two files belong to the same code.
    pub fn same_code(&self, other: &FragmentFile) -> bool {
        (self.codec, self.field, self.n, self.k, self.d) == (other.codec, other.field, other.n, other.k, other.d)
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let width = self.field.symbol_width();
        let syms = &self.fragment.symbols;
        let mut out = Vec::with_capacity(HEADER_LEN + width * syms.len());
        out.extend_from_slice(MAGIC);
        out.push(self.codec.tag());
        out.push(kind_tag(self.field.kind()));
        out.extend_from_slice(&self.field.param().to_le_bytes());
        for (v, what) in [(self.n, "n"), (self.k, "k"), (self.d, "d"), (self.fragment.node + 1, "node")] {
            out.extend_from_slice(&to_u16(v, what)?.to_le_bytes());
        }
        out.extend_from_slice(&(syms.len() as u32).to_le_bytes());
        write_symbols(&mut out, syms, width);
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<FragmentFile> {
        if bytes.len() < HEADER_LEN {
            return Err(format_err(format!("{} bytes is shorter than the header", bytes.len())));
        }
        if &bytes[..4] != MAGIC {
            return Err(format_err("bad magic"));
        }
        let codec = CodecKind::from_tag(bytes[4]).ok_or_else(|| format_err(format!("unknown codec tag {}", bytes[4])))?;
        let kind = match bytes[5] {
            0 => FieldKind::Prime,
            1 => FieldKind::Binary,
            2 => FieldKind::Fermat,
            t => return Err(format_err(format!("unknown field kind {t}"))),
        };
        let u16_at = |i: usize| u16::from_le_bytes([bytes[i], bytes[i + 1]]) as usize;
        let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes"));
        let field = Field::new(kind, u32_at(6))?;
        let (n, k, d, node) = (u16_at(10), u16_at(12), u16_at(14), u16_at(16));
        if node == 0 || node > n {
            return Err(format_err(format!("node index {node} outside 1..={n}")));
        }
        let count = u32_at(18) as usize;
        let width = field.symbol_width();
        let body = &bytes[HEADER_LEN..];
        if body.len() != count * width {
            return Err(format_err(format!(
                "header announces {count} symbols of {width} bytes, body has {} bytes",
                body.len()
            )));
        }
        let symbols = read_symbols(&field, body)?;
        Ok(FragmentFile {
            codec,
            field,
            n,
            k,
            d,
            fragment: Fragment::new(node - 1, symbols),
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes()?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<FragmentFile> {
        FragmentFile::from_bytes(&fs::read(path)?)
            .map_err(|e| match e {
                HarnessError::Format(m) => format_err(format!("{}: {m}", path.display())),
                e => e,
            })
    }
}

/// Conventional file name of node `node` (0-based) in a fragment directory.
pub fn fragment_path(dir: &Path, node: usize) -> PathBuf {
    dir.join(format!("node-{}.frag", node + 1))
}

fn write_symbols(out: &mut Vec<u8>, symbols: &[u32], width: usize) {
    for &s in symbols {
        out.extend_from_slice(&s.to_le_bytes()[..width]);
    }
}

fn read_symbols(field: &Field, bytes: &[u8]) -> Result<Vec<u32>> {
    let width = field.symbol_width();
    if !bytes.len().is_multiple_of(width) {
        return Err(format_err(format!("{} bytes is not a multiple of the {width}-byte symbol width", bytes.len())));
    }
    bytes
        .chunks(width)
        .map(|c| {
            let mut word = [0u8; 4];
            word[..width].copy_from_slice(c);
            Ok(field.check(u32::from_le_bytes(word) as u64)?)
        })
        .collect()
}

pub fn message_to_bytes(field: &Field, symbols: &[u32]) -> Vec<u8> {
    let mut out = Vec::with_capacity(symbols.len() * field.symbol_width());
    write_symbols(&mut out, symbols, field.symbol_width());
    out
}

pub fn message_from_bytes(field: &Field, bytes: &[u8]) -> Result<Vec<u32>> {
    read_symbols(field, bytes)
}

pub fn write_message(path: &Path, field: &Field, symbols: &[u32]) -> Result<()> {
    fs::write(path, message_to_bytes(field, symbols))?;
    Ok(())
}

pub fn read_message(path: &Path, field: &Field) -> Result<Vec<u32>> {
    message_from_bytes(field, &fs::read(path)?)
}
