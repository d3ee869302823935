//! The standard enumeration of strings, restrictions, strictly increasing maps
//! and dilation of bias sequences and martingales.
//!
//! Strings are enumerated length-lexicographically from `s_0 = lambda`:
//! `lambda, 0, 1, 00, 01, 10, 11, 000, ...`, so `index(w) = 2^|w| - 1 + value(w)`.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use crate::bias::{BiasFn, BiasSequence};
use crate::bits::{format_bits, Bit};
use crate::error::{Error, Result};
use crate::exact::Surd;
use crate::gale::Capital;

/// Longest string whose index fits in `u128`.
pub const MAX_INDEXED_LEN: usize = 126;

/// Position of `w` in the standard enumeration.
pub fn index(w: &[Bit]) -> Result<u128> {
    if w.len() > MAX_INDEXED_LEN {
        return Err(Error::Resource(format!(
            "string of length {} has an index beyond u128",
            w.len()
        )));
    }
    let value = w.iter().fold(0u128, |acc, &b| (acc << 1) | b as u128);
    Ok((1u128 << w.len()) - 1 + value)
}

/// Compares strings in the standard order: shorter first, then lexicographic.
pub fn standard_cmp(a: &[Bit], b: &[Bit]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// `s_n`.
pub fn string(n: u128) -> Vec<Bit> {
    let len = (n + 1).ilog2() as usize;
    let value = n + 1 - (1u128 << len);
    (0..len).rev().map(|k| ((value >> k) & 1) as Bit).collect()
}

/// Length of `s_n`.
pub fn length_of(n: u128) -> usize {
    (n + 1).ilog2() as usize
}

/// `w restricted to A`: bit `i` of `w` is kept iff `s_i` is in `A`.
pub fn restrict(w: &[Bit], member: impl Fn(u128) -> bool) -> Vec<Bit> {
    w.iter()
        .enumerate()
        .filter(|(i, _)| member(*i as u128))
        .map(|(_, &b)| b)
        .collect()
}

/// `chi_A[0..n]`.
pub fn characteristic(n: usize, member: impl Fn(u128) -> bool) -> Vec<Bit> {
    (0..n as u128).map(|i| member(i) as Bit).collect()
}

/// A map on strings with `x < y => f(x) < f(y)` in the standard order.
pub trait IncreasingMap: Send + Sync + fmt::Debug {
    fn apply(&self, x: &[Bit]) -> Vec<Bit>;

    /// `n_f = index(f(s_n))`; errors when it exceeds `u128`.
    fn image_index(&self, n: u128) -> Result<u128> {
        index(&self.apply(&string(n)))
    }

    fn name(&self) -> String;
}

#[derive(Clone, Copy, Debug)]
pub struct Identity;

impl IncreasingMap for Identity {
    fn apply(&self, x: &[Bit]) -> Vec<Bit> {
        x.to_vec()
    }

    fn image_index(&self, n: u128) -> Result<u128> {
        Ok(n)
    }

    fn name(&self) -> String {
        "identity".into()
    }
}

/// `g_k(x) = 0^{|x|^k} 1 x`.
#[derive(Clone, Copy, Debug)]
pub struct GK {
    k: u32,
}

impl GK {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("g_k needs k >= 1".into()));
        }
        Ok(GK { k })
    }

    fn image_len(&self, len: usize) -> Option<usize> {
        (len as u128)
            .checked_pow(self.k)
            .and_then(|p| p.checked_add(len as u128 + 1))
            .and_then(|l| usize::try_from(l).ok())
    }
}

impl IncreasingMap for GK {
    fn apply(&self, x: &[Bit]) -> Vec<Bit> {
        let zeros = x.len().pow(self.k);
        let mut out = vec![0; zeros];
        out.push(1);
        out.extend_from_slice(x);
        out
    }

    fn image_index(&self, n: u128) -> Result<u128> {
        let len = length_of(n);
        let value = n + 1 - (1u128 << len);
        match self.image_len(len) {
            Some(image_len) if image_len <= MAX_INDEXED_LEN => {
                Ok((1u128 << image_len) - 1 + (1u128 << len) + value)
            }
            _ => Err(Error::Resource(format!(
                "g_{}(s_{n}) has an index beyond u128",
                self.k
            ))),
        }
    }

    fn name(&self) -> String {
        format!("g_k:{}", self.k)
    }
}

/// Parses `identity` or `g_k:<k>`.
pub fn parse_map(text: &str) -> Result<Arc<dyn IncreasingMap>> {
    let text = text.trim();
    if text == "identity" {
        return Ok(Arc::new(Identity));
    }
    let k = text
        .strip_prefix("g_k:")
        .ok_or_else(|| Error::Parse(format!("unknown map {text:?}")))?
        .parse::<u32>()
        .map_err(|e| Error::Parse(format!("bad exponent in {text:?}: {e}")))?;
    Ok(Arc::new(GK::new(k)?))
}

/// Preimage of `s_k` under `f`, found by binary search over inputs.
pub fn preimage(f: &dyn IncreasingMap, k: u128) -> Result<Option<u128>> {
    let n = first_at_least(f, k)?;
    Ok(match n {
        Some(n) if f.image_index(n)? == k => Some(n),
        _ => None,
    })
}

pub fn in_range(f: &dyn IncreasingMap, k: u128) -> Result<bool> {
    Ok(preimage(f, k)?.is_some())
}

/// Least `n` with `n_f >= k`. Since `n_f >= n`, it lies in `[0, k]`.
pub fn first_at_least(f: &dyn IncreasingMap, k: u128) -> Result<Option<u128>> {
    let (mut lo, mut hi) = (0u128, k);
    let at_least = |n: u128| -> Result<bool> {
        match f.image_index(n) {
            Ok(m) => Ok(m >= k),
            Err(Error::Resource(_)) => Ok(true),
            Err(e) => Err(e),
        }
    };
    if !at_least(hi)? {
        return Ok(None);
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if at_least(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(lo))
}

/// Positions `< len` that lie in `range(f)`, in increasing order.
pub fn range_positions(f: &dyn IncreasingMap, len: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for n in 0u128.. {
        match f.image_index(n) {
            Ok(k) if k < len as u128 => out.push(k as usize),
            Ok(_) | Err(Error::Resource(_)) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[derive(Debug)]
struct DilatedBias {
    beta: BiasSequence,
    f: Arc<dyn IncreasingMap>,
}

impl DilatedBias {
    fn source_index(&self, i: u64) -> Option<u128> {
        self.f.image_index(i as u128).ok()
    }
}

impl BiasFn for DilatedBias {
    fn beta(&self, i: u64) -> f64 {
        self.beta
            .beta_wide(self.source_index(i))
            .expect("custom schedules are only dilated within u64 indices")
    }

    fn beta_exact(&self, i: u64) -> Option<BigRational> {
        self.beta.beta_exact_wide(self.source_index(i))
    }

    fn bounds(&self) -> (f64, f64) {
        self.beta.bounds()
    }

    fn tag(&self) -> String {
        format!("{}^{}", self.beta.tag(), self.f.name())
    }
}

/// `beta^f_n = beta_{n_f}`.
///
/// # Panics
///
/// Querying the result panics when `n_f` is beyond `u64` and `beta` is a
/// custom schedule, which cannot be evaluated there.
pub fn dilate_bias(beta: &BiasSequence, f: Arc<dyn IncreasingMap>) -> Result<BiasSequence> {
    BiasSequence::custom(Arc::new(DilatedBias {
        beta: beta.clone(),
        f,
    }))
}

#[derive(Debug)]
struct DilatedCapital {
    d: Arc<dyn Capital>,
    f: Arc<dyn IncreasingMap>,
}

impl DilatedCapital {
    fn restricted(&self, w: &[Bit]) -> Result<Vec<Bit>> {
        Ok(range_positions(self.f.as_ref(), w.len())?
            .into_iter()
            .map(|i| w[i])
            .collect())
    }
}

impl Capital for DilatedCapital {
    fn log_capital(&self, w: &[Bit]) -> Result<f64> {
        self.d.log_capital(&self.restricted(w)?)
    }

    fn exact_capital(&self, w: &[Bit]) -> Result<Option<Surd>> {
        self.d.exact_capital(&self.restricted(w)?)
    }

    fn log_capitals_along(&self, prefix: &[Bit]) -> Result<Vec<f64>> {
        let positions = range_positions(self.f.as_ref(), prefix.len())?;
        let restricted: Vec<Bit> = positions.iter().map(|&i| prefix[i]).collect();
        let inner = self.d.log_capitals_along(&restricted)?;
        let mut out = Vec::with_capacity(prefix.len() + 1);
        let mut kept = 0;
        for m in 0..=prefix.len() {
            while kept < positions.len() && positions[kept] < m {
                kept += 1;
            }
            out.push(inner[kept]);
        }
        Ok(out)
    }
}

/// `f^d(w) = d(w restricted to range(f))`.
pub fn dilate_martingale(d: Arc<dyn Capital>, f: Arc<dyn IncreasingMap>) -> Arc<dyn Capital> {
    Arc::new(DilatedCapital { d, f })
}

/// `chi_{f^-1(A)}[0..n]`, computed by applying `f` to each `s_i`.
pub fn preimage_characteristic(
    f: &dyn IncreasingMap,
    n: usize,
    member: impl Fn(u128) -> bool,
) -> Result<Vec<Bit>> {
    (0..n as u128)
        .map(|i| Ok(member(index(&f.apply(&string(i)))?) as Bit))
        .collect()
}

/// `chi_A[0..n_f] restricted to range(f)`, walking range members found by
/// binary search over inputs without materializing `chi_A`.
pub fn restricted_characteristic(
    f: &dyn IncreasingMap,
    n: usize,
    member: impl Fn(u128) -> bool,
) -> Result<Vec<Bit>> {
    let end = f.image_index(n as u128)?;
    let mut out = Vec::with_capacity(n);
    let mut k = 0u128;
    while k < end {
        let Some(m) = first_at_least(f, k)? else {
            break;
        };
        let next = f.image_index(m)?;
        if next >= end {
            break;
        }
        out.push(member(next) as Bit);
        k = next + 1;
    }
    Ok(out)
}

/// Same as [`restricted_characteristic`] but testing every position below
/// `n_f` for range membership; limited to `n_f <= limit`.
pub fn restricted_characteristic_full(
    f: &dyn IncreasingMap,
    n: usize,
    member: impl Fn(u128) -> bool,
    limit: u128,
) -> Result<Vec<Bit>> {
    let end = f.image_index(n as u128)?;
    if end > limit {
        return Err(Error::Resource(format!(
            "n_f = {end} exceeds scan limit {limit}"
        )));
    }
    let mut out = Vec::new();
    for k in 0..end {
        if in_range(f, k)? {
            out.push(member(k) as Bit);
        }
    }
    Ok(out)
}

/// Describes `s_n` for messages.
pub fn describe(n: u128) -> String {
    format!("s_{n} = {:?}", format_bits(&string(n)))
}
