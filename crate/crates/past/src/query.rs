//! Pattern search and fixed-size repeat enumeration over a built tree.
//!
//! A fixed-window index answers prefix queries against its windows:
//! positions in `(n-k, n-|p|]` are invisible because suffixes shorter
//! than the window size are never indexed. Queries on a window tree
//! therefore require `|pattern| <= k`; longer patterns are an error, not
//! an empty result.

use crate::error::{Error, Result};
use crate::sequence::Sequence;
use crate::tree::{EdgeKey, NodeId, SuffixTree};

/// Where a pattern walk stopped: the node whose incoming edge the walk
/// was inside, how many of that edge's symbols were consumed, and whether
/// the whole pattern matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Locus {
    pub node: NodeId,
    pub edge_offset: usize,
    pub matched: bool,
}

/// One repeated window: its text, occurrence count, and ascending start
/// positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepeatHit {
    pub kmer: Vec<u8>,
    pub count: usize,
    pub positions: Vec<usize>,
}

/// Walks the pattern from the root, consuming at most `|pattern|` symbols
/// plus one child lookup per node.
pub fn find_node(tree: &SuffixTree, seq: &Sequence, pattern: &[u8]) -> Result<Locus> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if tree.is_kmer_tree() && pattern.len() > tree.k() {
        return Err(Error::PatternTooLong { pattern_len: pattern.len(), k: tree.k() });
    }
    let mut node = tree.root();
    let mut consumed = 0usize;
    loop {
        let key = EdgeKey::symbol(pattern[consumed]);
        let Some(child) = tree.node(node)?.child(key) else {
            let stopped = tree.node_unchecked(node);
            return Ok(Locus { node, edge_offset: stopped.edge.data_len(), matched: false });
        };
        let edge_syms = tree.node_unchecked(child).edge.symbols(seq);
        let mut offset = 0usize;
        while offset < edge_syms.len() && consumed < pattern.len() {
            if edge_syms[offset] != pattern[consumed] {
                return Ok(Locus { node: child, edge_offset: offset, matched: false });
            }
            offset += 1;
            consumed += 1;
        }
        if consumed == pattern.len() {
            return Ok(Locus { node: child, edge_offset: offset, matched: true });
        }
        node = child;
    }
}

/// Ascending start positions of every indexed string with `pattern` as a
/// prefix: the union of occurrence lists over all leaves below the
/// pattern's locus.
pub fn occurrences(tree: &SuffixTree, seq: &Sequence, pattern: &[u8]) -> Result<Vec<usize>> {
    let locus = find_node(tree, seq, pattern)?;
    if !locus.matched {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut stack = vec![locus.node];
    while let Some(id) = stack.pop() {
        let node = tree.node_unchecked(id);
        out.extend_from_slice(&node.occurrences);
        for (_, child) in node.children() {
            stack.push(child);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Every distinct window occurring at least `min_count` times, ordered by
/// descending count then ascending window text.
pub fn enumerate_repeats(
    tree: &SuffixTree,
    seq: &Sequence,
    min_count: usize,
) -> Result<Vec<RepeatHit>> {
    if min_count < 2 {
        return Err(Error::InvalidThreshold(min_count));
    }
    if !tree.is_kmer_tree() {
        return Err(Error::KmerTreeRequired);
    }
    let mut hits: Vec<RepeatHit> = tree
        .leaf_entries(seq)
        .into_iter()
        .filter(|leaf| !leaf.label.is_empty() && leaf.occurrences.len() >= min_count)
        .map(|leaf| RepeatHit {
            count: leaf.occurrences.len(),
            kmer: leaf.label,
            positions: leaf.occurrences,
        })
        .collect();
    hits.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.kmer.cmp(&b.kmer)));
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::build_ukkonen;
    use crate::builder::{build_past, BuildConfig};

    fn kmer_tree(text: &str, k: usize) -> (Sequence, SuffixTree) {
        let seq = Sequence::from_bytes(text);
        let tree = build_past(&seq, &BuildConfig::new(k)).unwrap();
        (seq, tree)
    }

    #[test]
    fn prefix_of_window_matches() {
        let (seq, tree) = kmer_tree("acgttacg", 4);
        let locus = find_node(&tree, &seq, b"tac").unwrap();
        assert!(locus.matched);
        assert_eq!(occurrences(&tree, &seq, b"tac").unwrap(), vec![4]);
    }

    #[test]
    fn absent_pattern_does_not_match() {
        let (seq, tree) = kmer_tree("acgttacg", 4);
        let locus = find_node(&tree, &seq, b"gg").unwrap();
        assert!(!locus.matched);
        assert!(occurrences(&tree, &seq, b"gg").unwrap().is_empty());
    }

    #[test]
    fn pattern_longer_than_window_is_an_error() {
        let (seq, tree) = kmer_tree("acgttacg", 4);
        assert!(matches!(
            find_node(&tree, &seq, b"acgtt"),
            Err(Error::PatternTooLong { pattern_len: 5, k: 4 })
        ));
    }

    #[test]
    fn empty_pattern_is_an_error() {
        let (seq, tree) = kmer_tree("acgttacg", 4);
        assert!(matches!(find_node(&tree, &seq, b""), Err(Error::EmptyPattern)));
    }

    #[test]
    fn occurrences_merge_across_leaves() {
        let (seq, tree) = kmer_tree("xabxac", 3);
        assert_eq!(occurrences(&tree, &seq, b"xa").unwrap(), vec![0, 3]);
        let (seq, tree) = kmer_tree("atatat", 2);
        assert_eq!(occurrences(&tree, &seq, b"at").unwrap(), vec![0, 2, 4]);
    }

    #[test]
    fn full_tree_answers_the_same_query() {
        let seq = Sequence::from_bytes("xabxac");
        let tree = build_ukkonen(&seq).unwrap();
        assert_eq!(occurrences(&tree, &seq, b"xa").unwrap(), vec![0, 3]);
        // long patterns are fine on a full tree
        assert_eq!(occurrences(&tree, &seq, b"xabxac").unwrap(), vec![0]);
    }

    #[test]
    fn repeats_of_alternating_text() {
        let (seq, tree) = kmer_tree("atatat", 2);
        let hits = enumerate_repeats(&tree, &seq, 2).unwrap();
        assert_eq!(hits.len(), 2);
        assert_eq!(hits[0].kmer, b"at");
        assert_eq!(hits[0].count, 3);
        assert_eq!(hits[0].positions, vec![0, 2, 4]);
        assert_eq!(hits[1].kmer, b"ta");
        assert_eq!(hits[1].count, 2);
        assert_eq!(hits[1].positions, vec![1, 3]);
    }

    #[test]
    fn distinct_windows_yield_no_repeats() {
        let (seq, tree) = kmer_tree("abcdef", 3);
        assert!(enumerate_repeats(&tree, &seq, 2).unwrap().is_empty());
        let (seq, tree) = kmer_tree("acgttacg", 4);
        assert!(enumerate_repeats(&tree, &seq, 2).unwrap().is_empty());
    }

    #[test]
    fn repeat_threshold_and_tree_kind_are_validated() {
        let (seq, tree) = kmer_tree("atatat", 2);
        assert!(matches!(
            enumerate_repeats(&tree, &seq, 1),
            Err(Error::InvalidThreshold(1))
        ));
        let seq = Sequence::from_bytes("atatat");
        let full = build_ukkonen(&seq).unwrap();
        assert!(matches!(
            enumerate_repeats(&full, &seq, 2),
            Err(Error::KmerTreeRequired)
        ));
    }
}
