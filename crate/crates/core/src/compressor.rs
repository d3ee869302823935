//! LZ78 compression and compression-ratio dimension estimates.
//!
//! Phrase `j` (1-based) is coded as a pointer to one of the `j` earlier
//! dictionary entries (root included) in `ceil(log2 j)` bits, followed by one
//! literal bit. A trailing incomplete phrase is coded as the dictionary entry
//! it matches, so the decoder needs the original length to drop nothing.

use serde::Serialize;

use crate::bits::Bit;
use crate::error::{Error, Result};
use crate::gale::csv_string;

/// First checkpoint of a compression trace.
pub const FIRST_CHECKPOINT: usize = 256;
/// Ratio between consecutive checkpoints.
pub const CHECKPOINT_GROWTH: f64 = 1.1;
/// Shortest prefix accepted by [`dim_estimates`].
pub const MIN_ESTIMATE_PREFIX: usize = 1024;

/// `ceil(log2 j)` for `j >= 1`.
fn pointer_bits(j: u64) -> u64 {
    debug_assert!(j >= 1);
    (u64::BITS - (j - 1).leading_zeros()) as u64
}

/// Code length of phrase `j`.
pub fn phrase_cost(j: u64) -> u64 {
    pointer_bits(j) + 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phrase {
    /// Dictionary entry extended by this phrase (0 is the empty root).
    pub parent: u32,
    pub bit: Bit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compressed {
    /// Input length.
    pub len: usize,
    pub phrases: Vec<Phrase>,
    /// Sum of [`phrase_cost`] over all phrases.
    pub code_bits: u64,
}

/// Incremental LZ78 parser.
#[derive(Clone, Debug)]
struct Parser {
    children: Vec<[u32; 2]>,
    node: u32,
    phrases: u64,
    complete_cost: u64,
}

impl Parser {
    fn new() -> Self {
        Parser {
            children: vec![[0, 0]],
            node: 0,
            phrases: 0,
            complete_cost: 0,
        }
    }

    /// Feeds one bit; returns the new phrase `(parent, bit)` if one closed.
    fn push(&mut self, b: Bit) -> Option<(u32, Bit)> {
        let next = self.children[self.node as usize][b as usize];
        if next != 0 {
            self.node = next;
            return None;
        }
        let id = self.children.len() as u32;
        self.children.push([0, 0]);
        self.children[self.node as usize][b as usize] = id;
        let parent = self.node;
        self.node = 0;
        self.phrases += 1;
        self.complete_cost += phrase_cost(self.phrases);
        Some((parent, b))
    }

    /// Code length of everything fed so far, counting a pending partial phrase.
    fn code_bits(&self) -> u64 {
        if self.node == 0 {
            self.complete_cost
        } else {
            self.complete_cost + phrase_cost(self.phrases + 1)
        }
    }
}

pub fn lz78_compress(w: &[Bit]) -> Compressed {
    let mut parser = Parser::new();
    let mut parents: Vec<u32> = vec![0];
    let mut last_bit: Vec<Bit> = vec![0];
    let mut phrases = Vec::new();
    for &b in w {
        if let Some((parent, bit)) = parser.push(b) {
            parents.push(parent);
            last_bit.push(bit);
            phrases.push(Phrase { parent, bit });
        }
    }
    if parser.node != 0 {
        let node = parser.node as usize;
        phrases.push(Phrase {
            parent: parents[node],
            bit: last_bit[node],
        });
    }
    let code_bits = parser.code_bits();
    Compressed {
        len: w.len(),
        phrases,
        code_bits,
    }
}

impl Compressed {
    /// Phrase pointers and literals packed as bits.
    pub fn to_bits(&self) -> Vec<Bit> {
        let mut out = Vec::with_capacity(self.code_bits as usize);
        for (j, p) in self.phrases.iter().enumerate() {
            let width = pointer_bits(j as u64 + 1);
            for k in (0..width).rev() {
                out.push(((p.parent >> k) & 1) as Bit);
            }
            out.push(p.bit);
        }
        out
    }

    pub fn from_bits(code: &[Bit], len: usize) -> Result<Self> {
        let mut phrases = Vec::new();
        let mut pos = 0;
        let mut produced = 0usize;
        let mut lengths: Vec<usize> = vec![0];
        while produced < len {
            let j = phrases.len() as u64 + 1;
            let width = pointer_bits(j) as usize;
            if pos + width + 1 > code.len() {
                return Err(Error::Parse("truncated LZ78 code".into()));
            }
            let parent = code[pos..pos + width]
                .iter()
                .fold(0u32, |acc, &b| (acc << 1) | b as u32);
            if parent as u64 >= j {
                return Err(Error::Parse(format!(
                    "phrase {j} points to future entry {parent}"
                )));
            }
            let bit = code[pos + width];
            if bit > 1 {
                return Err(Error::Parse(format!("non-binary literal {bit}")));
            }
            pos += width + 1;
            let phrase_len = lengths[parent as usize] + 1;
            lengths.push(phrase_len);
            produced += phrase_len;
            phrases.push(Phrase { parent, bit });
        }
        if pos != code.len() {
            return Err(Error::Parse(format!(
                "{} trailing code bits",
                code.len() - pos
            )));
        }
        Ok(Compressed {
            len,
            code_bits: pos as u64,
            phrases,
        })
    }

    pub fn decompress(&self) -> Vec<Bit> {
        let mut strings: Vec<(u32, Bit, usize)> = vec![(0, 0, 0)];
        let mut out = Vec::with_capacity(self.len);
        let mut scratch = Vec::new();
        for p in &self.phrases {
            let len = strings[p.parent as usize].2 + 1;
            strings.push((p.parent, p.bit, len));
            scratch.clear();
            let mut node = strings.len() - 1;
            while node != 0 {
                let (parent, bit, _) = strings[node];
                scratch.push(bit);
                node = parent as usize;
            }
            out.extend(scratch.iter().rev());
        }
        out.truncate(self.len);
        out
    }
}

/// LZ78 code length of `w`.
pub fn code_length(w: &[Bit]) -> u64 {
    let mut parser = Parser::new();
    for &b in w {
        parser.push(b);
    }
    parser.code_bits()
}

/// `256, ceil(256 * 1.1), ...` below `n`, then `n`.
pub fn checkpoints(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut m = FIRST_CHECKPOINT;
    while m < n {
        out.push(m);
        m = ((m as f64) * CHECKPOINT_GROWTH).ceil() as usize;
    }
    if n > 0 {
        out.push(n);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CompressionTrace {
    pub n: usize,
    /// `(m, code bits of the first m bits)`.
    pub points: Vec<(usize, u64)>,
}

impl CompressionTrace {
    pub fn ratios(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.points
            .iter()
            .map(|&(m, bits)| (m, bits as f64 / m as f64))
    }

    /// Min and max ratio over checkpoints inside `window`.
    pub fn bounds(&self, window: (usize, usize)) -> Option<(f64, f64)> {
        self.ratios()
            .filter(|(m, _)| (window.0..=window.1).contains(m))
            .fold(None, |acc, (_, r)| match acc {
                None => Some((r, r)),
                Some((lo, hi)) => Some((f64::min(lo, r), f64::max(hi, r))),
            })
    }

    /// CSV with columns `m,bits,ratio`.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = csv::Writer::from_writer(Vec::new());
        out.write_record(["m", "bits", "ratio"])?;
        for &(m, bits) in &self.points {
            out.write_record([
                m.to_string(),
                bits.to_string(),
                (bits as f64 / m as f64).to_string(),
            ])?;
        }
        csv_string(out)
    }
}

/// Code lengths of every prefix `w[0..m]` for `m` in `points` (sorted, `m >= 1`).
pub fn compression_trace(w: &[Bit], points: &[usize]) -> Result<CompressionTrace> {
    if let Some(bad) = points.windows(2).find(|p| p[0] >= p[1]) {
        return Err(Error::Domain(format!(
            "checkpoints not increasing at {bad:?}"
        )));
    }
    if let Some(&bad) = points.iter().find(|&&m| m == 0 || m > w.len()) {
        return Err(Error::Domain(format!(
            "checkpoint {bad} outside 1..={}",
            w.len()
        )));
    }
    let mut parser = Parser::new();
    let mut out = Vec::with_capacity(points.len());
    let mut fed = 0;
    for &m in points {
        for &b in &w[fed..m] {
            parser.push(b);
        }
        fed = m;
        out.push((m, parser.code_bits()));
    }
    Ok(CompressionTrace {
        n: w.len(),
        points: out,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DimEstimates {
    pub n: usize,
    pub window: (usize, usize),
    /// Minimum code-length ratio over checkpoints in the window.
    pub lower: f64,
    /// Maximum code-length ratio over checkpoints in the window.
    pub upper: f64,
    pub checkpoints: usize,
}

/// Compression-ratio estimates over the default window `[ceil(n/2), n]`.
pub fn dim_estimates(w: &[Bit]) -> Result<DimEstimates> {
    dim_estimates_in(w, crate::tail_window(w.len()))
}

pub fn dim_estimates_in(w: &[Bit], window: (usize, usize)) -> Result<DimEstimates> {
    if w.len() < MIN_ESTIMATE_PREFIX {
        return Err(Error::Precondition(format!(
            "prefix has {} bits, need at least {MIN_ESTIMATE_PREFIX}",
            w.len()
        )));
    }
    if window.0 > window.1 || window.1 > w.len() {
        return Err(Error::Domain(format!(
            "bad window {window:?} for length {}",
            w.len()
        )));
    }
    let points: Vec<usize> = checkpoints(w.len())
        .into_iter()
        .filter(|m| (window.0..=window.1).contains(m))
        .collect();
    let trace = compression_trace(w, &points)?;
    let (lower, upper) = trace
        .bounds(window)
        .ok_or_else(|| Error::Domain(format!("no checkpoints in window {window:?}")))?;
    Ok(DimEstimates {
        n: w.len(),
        window,
        lower,
        upper,
        checkpoints: points.len(),
    })
}
