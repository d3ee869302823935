//! Bit strings are plain `u8` slices holding 0 or 1.

use crate::error::{Error, Result};

pub type Bit = u8;

/// Parses a string of ASCII `0`/`1` characters.
pub fn parse_bits(text: &str) -> Result<Vec<Bit>> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Parse(format!("invalid bit character {other:?}"))),
        })
        .collect()
}

pub fn format_bits(w: &[Bit]) -> String {
    w.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

/// All strings of length `len` in lexicographic order.
pub fn strings_of_length(len: usize) -> impl Iterator<Item = Vec<Bit>> {
    assert!(len < 64, "string length {len} too large to enumerate");
    (0u64..(1u64 << len)).map(move |v| bits_of(v, len))
}

/// The `len` low bits of `value`, most significant first.
pub fn bits_of(value: u64, len: usize) -> Vec<Bit> {
    (0..len).rev().map(|i| ((value >> i) & 1) as Bit).collect()
}

pub fn is_prefix(u: &[Bit], w: &[Bit]) -> bool {
    u.len() <= w.len() && &w[..u.len()] == u
}

/// Checks that no element of `set` is a prefix of another (duplicates included).
pub fn check_prefix_set(set: &[Vec<Bit>]) -> Result<()> {
    let mut sorted: Vec<&Vec<Bit>> = set.iter().collect();
    sorted.sort();
    for pair in sorted.windows(2) {
        if is_prefix(pair[0], pair[1]) {
            return Err(Error::Structural(format!(
                "not a prefix set: {:?} is a prefix of {:?}",
                format_bits(pair[0]),
                format_bits(pair[1])
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let w = parse_bits("0110").unwrap();
        assert_eq!(w, vec![0, 1, 1, 0]);
        assert_eq!(format_bits(&w), "0110");
        assert!(parse_bits("012").is_err());
        assert!(parse_bits("").unwrap().is_empty());
    }

    #[test]
    fn prefix_sets() {
        let ok = vec![parse_bits("0").unwrap(), parse_bits("10").unwrap()];
        assert!(check_prefix_set(&ok).is_ok());
        let bad = vec![parse_bits("1").unwrap(), parse_bits("10").unwrap()];
        assert!(check_prefix_set(&bad).is_err());
        let dup = vec![parse_bits("01").unwrap(), parse_bits("01").unwrap()];
        assert!(check_prefix_set(&dup).is_err());
        assert!(check_prefix_set(&[vec![]]).is_ok());
    }

    #[test]
    fn enumerates_by_length() {
        let all: Vec<String> = strings_of_length(2).map(|w| format_bits(&w)).collect();
        assert_eq!(all, ["00", "01", "10", "11"]);
        assert_eq!(strings_of_length(0).count(), 1);
    }
}
