//! Symbol text with record boundaries and the alphabet over it.

/// One contiguous record inside a [`Sequence`], in global coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceRecord {
    pub start: usize,
    pub len: usize,
}

impl SequenceRecord {
    pub fn end(&self) -> usize {
        self.start + self.len
    }
}

/// Immutable symbol text, addressed by global position. Records are
/// non-overlapping, ordered, and tile `[0, n)` exactly; windows and
/// suffixes never cross a record boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    data: Vec<u8>,
    records: Vec<SequenceRecord>,
}

impl Sequence {
    /// Single-record sequence over the given bytes.
    pub fn from_bytes(data: impl Into<Vec<u8>>) -> Sequence {
        let data = data.into();
        let records = vec![SequenceRecord { start: 0, len: data.len() }];
        Sequence { data, records }
    }

    /// Concatenates the given record contents; each entry becomes one record.
    pub fn from_records(record_data: Vec<Vec<u8>>) -> Sequence {
        let mut data = Vec::new();
        let mut records = Vec::with_capacity(record_data.len());
        for rec in record_data {
            records.push(SequenceRecord { start: data.len(), len: rec.len() });
            data.extend_from_slice(&rec);
        }
        Sequence { data, records }
    }

    /// Total symbol count `n`.
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn records(&self) -> &[SequenceRecord] {
        &self.records
    }

    pub fn symbol(&self, pos: usize) -> u8 {
        self.data[pos]
    }

    /// Index of the record containing `pos`, if any.
    pub fn record_of(&self, pos: usize) -> Option<usize> {
        if pos >= self.len() {
            return None;
        }
        let idx = self.records.partition_point(|r| r.end() <= pos);
        let rec = self.records.get(idx)?;
        (pos >= rec.start && pos < rec.end()).then_some(idx)
    }

    /// True when the window `[start, start + k)` lies inside one record.
    pub fn window_fits(&self, start: usize, k: usize) -> bool {
        match self.record_of(start) {
            Some(idx) => start + k <= self.records[idx].end(),
            None => false,
        }
    }
}

/// Ordered set of distinct symbols with size sigma.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<u8>,
}

impl Alphabet {
    /// Builds an alphabet from arbitrary symbols; sorts and deduplicates.
    pub fn from_symbols(mut symbols: Vec<u8>) -> Alphabet {
        symbols.sort_unstable();
        symbols.dedup();
        Alphabet { symbols }
    }

    /// Distinct symbols in ascending order.
    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn sigma(&self) -> usize {
        self.symbols.len()
    }

    pub fn contains(&self, symbol: u8) -> bool {
        self.symbols.binary_search(&symbol).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_record_covers_all() {
        let seq = Sequence::from_bytes("abaabc");
        assert_eq!(seq.len(), 6);
        assert_eq!(seq.records(), &[SequenceRecord { start: 0, len: 6 }]);
        assert_eq!(seq.record_of(5), Some(0));
        assert_eq!(seq.record_of(6), None);
    }

    #[test]
    fn records_tile_exactly() {
        let seq = Sequence::from_records(vec![b"acg".to_vec(), b"tac".to_vec()]);
        assert_eq!(seq.data(), b"acgtac");
        assert_eq!(seq.records().len(), 2);
        assert_eq!(seq.record_of(2), Some(0));
        assert_eq!(seq.record_of(3), Some(1));
        // window spanning the boundary does not fit
        assert!(seq.window_fits(1, 2));
        assert!(!seq.window_fits(2, 2));
        assert!(seq.window_fits(3, 3));
        assert!(!seq.window_fits(3, 4));
    }

    #[test]
    fn empty_sequence() {
        let seq = Sequence::from_bytes("");
        assert_eq!(seq.len(), 0);
        assert_eq!(seq.records().len(), 1);
        assert_eq!(seq.record_of(0), None);
        assert!(!seq.window_fits(0, 1));
    }

    #[test]
    fn alphabet_sorts_and_dedups() {
        let a = Alphabet::from_symbols(b"cabac".to_vec());
        assert_eq!(a.symbols(), b"abc");
        assert_eq!(a.sigma(), 3);
        assert!(a.contains(b'b'));
        assert!(!a.contains(b'z'));
    }
}
