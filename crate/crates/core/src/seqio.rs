//! Sequence files.
//!
//! `.bin` files hold an 8-byte little-endian bit count followed by the bits
//! packed most significant first. Anything else is read as ASCII `0`/`1`,
//! with whitespace ignored.

use std::fs;
use std::path::Path;

use crate::bits::{format_bits, Bit};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqFormat {
    Ascii,
    Packed,
}

impl SeqFormat {
    pub fn of_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("bin") => SeqFormat::Packed,
            _ => SeqFormat::Ascii,
        }
    }
}

pub fn pack(bits: &[Bit]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + bits.len().div_ceil(8));
    out.extend_from_slice(&(bits.len() as u64).to_le_bytes());
    for chunk in bits.chunks(8) {
        let byte = chunk
            .iter()
            .enumerate()
            .fold(0u8, |acc, (i, &b)| acc | (b << (7 - i)));
        out.push(byte);
    }
    out
}

pub fn unpack(bytes: &[u8]) -> Result<Vec<Bit>> {
    let header: [u8; 8] = bytes
        .get(..8)
        .and_then(|h| h.try_into().ok())
        .ok_or_else(|| Error::Parse("packed file shorter than its 8-byte header".into()))?;
    let len = u64::from_le_bytes(header) as usize;
    let body = &bytes[8..];
    if body.len() != len.div_ceil(8) {
        return Err(Error::Parse(format!(
            "packed file declares {len} bits but carries {} bytes",
            body.len()
        )));
    }
    Ok((0..len).map(|i| (body[i / 8] >> (7 - i % 8)) & 1).collect())
}

pub fn parse_ascii(text: &str) -> Result<Vec<Bit>> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Parse(format!("invalid bit character {other:?}"))),
        })
        .collect()
}

pub fn encode(bits: &[Bit], format: SeqFormat) -> Vec<u8> {
    match format {
        SeqFormat::Packed => pack(bits),
        SeqFormat::Ascii => {
            let mut text = format_bits(bits).into_bytes();
            text.push(b'\n');
            text
        }
    }
}

pub fn read_sequence(path: &Path) -> Result<Vec<Bit>> {
    let bytes = fs::read(path)?;
    match SeqFormat::of_path(path) {
        SeqFormat::Packed => unpack(&bytes),
        SeqFormat::Ascii => {
            let text = std::str::from_utf8(&bytes)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            parse_ascii(text)
        }
    }
}

pub fn write_sequence(path: &Path, bits: &[Bit]) -> Result<()> {
    fs::write(path, encode(bits, SeqFormat::of_path(path)))?;
    Ok(())
}
