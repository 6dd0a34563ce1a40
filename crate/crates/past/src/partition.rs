//! Alphabet extraction and first-symbol grouping of window start
//! positions — the per-symbol work packages the parallel builder consumes.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::sequence::{Alphabet, Sequence};

/// Window start positions grouped by their first symbol. Every start in a
/// bucket begins with that symbol and its window lies inside one record;
/// suffixes shorter than the window size are excluded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmerPartition {
    k: usize,
    buckets: BTreeMap<u8, Vec<usize>>,
    total_windows: usize,
}

impl KmerPartition {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Ascending window starts for `symbol`; empty when the symbol never
    /// starts a valid window.
    pub fn bucket(&self, symbol: u8) -> &[usize] {
        self.buckets.get(&symbol).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Buckets in ascending symbol order.
    pub fn buckets(&self) -> impl Iterator<Item = (u8, &[usize])> {
        self.buckets.iter().map(|(s, v)| (*s, v.as_slice()))
    }

    pub fn total_windows(&self) -> usize {
        self.total_windows
    }

    pub(crate) fn into_buckets(self) -> BTreeMap<u8, Vec<usize>> {
        self.buckets
    }
}

/// Distinct symbols occurring in `seq`, ascending.
pub fn extract_alphabet(seq: &Sequence) -> Alphabet {
    let mut seen = [false; 256];
    for &b in seq.data() {
        seen[b as usize] = true;
    }
    let symbols = (0..=255u8).filter(|&b| seen[b as usize]).collect();
    Alphabet::from_symbols(symbols)
}

/// Groups every valid window start by its first symbol. Windows never
/// cross a record boundary.
pub fn partition_windows(seq: &Sequence, k: usize, alphabet: &Alphabet) -> Result<KmerPartition> {
    if k == 0 {
        return Err(Error::InvalidK);
    }
    let mut buckets: BTreeMap<u8, Vec<usize>> =
        alphabet.symbols().iter().map(|&s| (s, Vec::new())).collect();
    let mut total = 0usize;
    for rec in seq.records() {
        if rec.len < k {
            continue;
        }
        for start in rec.start..=rec.start + rec.len - k {
            buckets.entry(seq.symbol(start)).or_default().push(start);
            total += 1;
        }
    }
    Ok(KmerPartition { k, buckets, total_windows: total })
}

/// Window starts for one symbol, by scanning the whole sequence. Used by
/// the per-symbol scan mode where each worker filters the text itself.
pub(crate) fn starts_for_symbol(seq: &Sequence, k: usize, symbol: u8) -> Vec<usize> {
    let mut starts = Vec::new();
    for rec in seq.records() {
        if rec.len < k {
            continue;
        }
        for start in rec.start..=rec.start + rec.len - k {
            if seq.symbol(start) == symbol {
                starts.push(start);
            }
        }
    }
    starts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_of_example_string() {
        let seq = Sequence::from_bytes("aaabaca");
        let a = extract_alphabet(&seq);
        assert_eq!(a.symbols(), b"abc");
        assert_eq!(a.sigma(), 3);
    }

    #[test]
    fn alphabet_of_empty_input() {
        let a = extract_alphabet(&Sequence::from_bytes(""));
        assert_eq!(a.sigma(), 0);
        assert!(a.symbols().is_empty());
    }

    #[test]
    fn alphabet_of_dna_example() {
        let a = extract_alphabet(&Sequence::from_bytes("acgttacg"));
        assert_eq!(a.symbols(), b"acgt");
        assert_eq!(a.sigma(), 4);
    }

    #[test]
    fn windows_of_size_four_group_by_first_symbol() {
        let seq = Sequence::from_bytes("acgttacg");
        let alphabet = extract_alphabet(&seq);
        let part = partition_windows(&seq, 4, &alphabet).unwrap();
        assert_eq!(part.bucket(b'a'), &[0]);
        assert_eq!(part.bucket(b'c'), &[1]);
        assert_eq!(part.bucket(b'g'), &[2]);
        assert_eq!(part.bucket(b't'), &[3, 4]);
        assert_eq!(part.total_windows(), 5);
    }

    #[test]
    fn short_input_yields_empty_buckets() {
        let seq = Sequence::from_bytes("ab");
        let alphabet = extract_alphabet(&seq);
        let part = partition_windows(&seq, 5, &alphabet).unwrap();
        assert_eq!(part.total_windows(), 0);
        assert!(part.buckets().all(|(_, starts)| starts.is_empty()));
    }

    #[test]
    fn windows_do_not_span_records() {
        let seq = Sequence::from_records(vec![b"acg".to_vec(), b"tac".to_vec()]);
        let alphabet = extract_alphabet(&seq);
        let part = partition_windows(&seq, 2, &alphabet).unwrap();
        assert_eq!(part.bucket(b'a'), &[0, 4]);
        assert_eq!(part.bucket(b'c'), &[1]);
        assert_eq!(part.bucket(b't'), &[3]);
        assert_eq!(part.bucket(b'g'), &[] as &[usize]);
        assert_eq!(part.total_windows(), 4);
    }

    #[test]
    fn zero_window_size_is_rejected() {
        let seq = Sequence::from_bytes("abc");
        let alphabet = extract_alphabet(&seq);
        assert!(matches!(partition_windows(&seq, 0, &alphabet), Err(Error::InvalidK)));
    }

    #[test]
    fn per_symbol_scan_matches_buckets() {
        let seq = Sequence::from_records(vec![b"acgttacg".to_vec(), b"ttgg".to_vec()]);
        let alphabet = extract_alphabet(&seq);
        let part = partition_windows(&seq, 3, &alphabet).unwrap();
        for &sym in alphabet.symbols() {
            assert_eq!(starts_for_symbol(&seq, 3, sym), part.bucket(sym));
        }
    }
}
