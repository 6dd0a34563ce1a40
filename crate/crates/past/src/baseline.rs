//! Sequential full suffix tree over a single record, built with
//! Ukkonen's on-line algorithm — the comparator for the partitioned
//! builder.
//!
//! The active point and suffix links live in a transient workspace and
//! are discarded at finalization; the exported tree is the same arena
//! shape the partitioned builder produces, so queries and serialization
//! are shared. Leaves store their suffix start so the full tree answers
//! the same occurrence queries as a fixed-window tree.

use crate::error::{Error, Result};
use crate::sequence::Sequence;
use crate::tree::{EdgeKey, EdgeLabel, InvariantReport, Node, NodeId, SuffixTree};

const OPEN: usize = usize::MAX;
const ROOT: usize = 0;

struct UkkNode {
    start: usize,
    end: usize,
    link: u32,
    children: Vec<(EdgeKey, u32)>,
}

impl UkkNode {
    fn new(start: usize, end: usize) -> UkkNode {
        UkkNode { start, end, link: ROOT as u32, children: Vec::new() }
    }

    fn child(&self, key: EdgeKey) -> Option<usize> {
        self.children
            .binary_search_by_key(&key, |(k, _)| *k)
            .ok()
            .map(|i| self.children[i].1 as usize)
    }

    fn set_child(&mut self, key: EdgeKey, child: usize) {
        match self.children.binary_search_by_key(&key, |(k, _)| *k) {
            Ok(i) => self.children[i].1 = child as u32,
            Err(i) => self.children.insert(i, (key, child as u32)),
        }
    }
}

/// Ukkonen workspace over the text plus one virtual terminal position at
/// index `n`.
struct Workspace<'s> {
    data: &'s [u8],
    n: usize,
    nodes: Vec<UkkNode>,
    active_node: usize,
    active_edge: usize,
    active_len: usize,
    remainder: usize,
}

impl<'s> Workspace<'s> {
    fn new(data: &'s [u8]) -> Workspace<'s> {
        Workspace {
            data,
            n: data.len(),
            nodes: vec![UkkNode::new(0, 0)],
            active_node: ROOT,
            active_edge: 0,
            active_len: 0,
            remainder: 0,
        }
    }

    fn key_at(&self, pos: usize) -> EdgeKey {
        if pos == self.n {
            EdgeKey::TERMINAL
        } else {
            EdgeKey::symbol(self.data[pos])
        }
    }

    fn edge_len(&self, id: usize, pos: usize) -> usize {
        let node = &self.nodes[id];
        node.end.min(pos + 1) - node.start
    }

    fn push_node(&mut self, start: usize, end: usize) -> usize {
        self.nodes.push(UkkNode::new(start, end));
        self.nodes.len() - 1
    }

    fn extend(&mut self, pos: usize) {
        self.remainder += 1;
        let mut last_new: Option<usize> = None;
        while self.remainder > 0 {
            if self.active_len == 0 {
                self.active_edge = pos;
            }
            let akey = self.key_at(self.active_edge);
            match self.nodes[self.active_node].child(akey) {
                None => {
                    let leaf = self.push_node(pos, OPEN);
                    self.nodes[self.active_node].set_child(akey, leaf);
                    if let Some(prev) = last_new.take() {
                        self.nodes[prev].link = self.active_node as u32;
                    }
                }
                Some(next) => {
                    let el = self.edge_len(next, pos);
                    if self.active_len >= el {
                        // canonize: hop over the whole edge
                        self.active_node = next;
                        self.active_len -= el;
                        self.active_edge += el;
                        continue;
                    }
                    if self.key_at(self.nodes[next].start + self.active_len) == self.key_at(pos) {
                        // the symbol is already on the edge; stop this phase
                        self.active_len += 1;
                        if let Some(prev) = last_new.take() {
                            self.nodes[prev].link = self.active_node as u32;
                        }
                        break;
                    }
                    let split_start = self.nodes[next].start;
                    let split = self.push_node(split_start, split_start + self.active_len);
                    self.nodes[self.active_node].set_child(akey, split);
                    self.nodes[next].start += self.active_len;
                    let next_key = self.key_at(self.nodes[next].start);
                    self.nodes[split].set_child(next_key, next);
                    let leaf = self.push_node(pos, OPEN);
                    let leaf_key = self.key_at(pos);
                    self.nodes[split].set_child(leaf_key, leaf);
                    if let Some(prev) = last_new.take() {
                        self.nodes[prev].link = split as u32;
                    }
                    last_new = Some(split);
                }
            }
            self.remainder -= 1;
            if self.active_node == ROOT && self.active_len > 0 {
                self.active_len -= 1;
                self.active_edge = pos + 1 - self.remainder;
            } else if self.active_node != ROOT {
                self.active_node = self.nodes[self.active_node].link as usize;
            }
        }
    }
}

/// Builds the explicit suffix tree of a single-record sequence: `n + 1`
/// leaves, one per suffix including the bare terminal, each holding its
/// suffix start. Amortized linear in the sequence length for a fixed
/// alphabet.
pub fn build_ukkonen(seq: &Sequence) -> Result<SuffixTree> {
    if seq.records().len() != 1 {
        return Err(Error::SingleRecordRequired(seq.records().len()));
    }
    let n = seq.len();
    let mut ws = Workspace::new(seq.data());
    for pos in 0..=n {
        ws.extend(pos);
    }
    Ok(finalize(&ws, n))
}

/// Materializes open leaf ends and converts the workspace into the shared
/// arena shape, computing each leaf's suffix start from its path depth.
fn finalize(ws: &Workspace<'_>, n: usize) -> SuffixTree {
    let mut nodes = vec![Node::new(EdgeLabel::root())];
    // (workspace node, arena parent, parent key, data depth above node)
    let mut stack: Vec<(usize, usize, EdgeKey, usize)> = Vec::new();
    for &(key, child) in ws.nodes[ROOT].children.iter().rev() {
        stack.push((child as usize, 0, key, 0));
    }
    while let Some((src, parent, key, depth)) = stack.pop() {
        let u = &ws.nodes[src];
        let end = if u.end == OPEN { n + 1 } else { u.end };
        let data_len = end.min(n) - u.start;
        let terminated = end == n + 1;
        let mut node = Node::new(EdgeLabel::span(u.start, data_len, terminated));
        if u.children.is_empty() {
            node.occurrences.push(n - depth - data_len);
        }
        let id = NodeId::new(nodes.len());
        nodes.push(node);
        nodes[parent].set_child(key, id);
        for &(ckey, child) in u.children.iter().rev() {
            stack.push((child as usize, id.index(), ckey, depth + data_len));
        }
    }
    SuffixTree::from_parts(nodes, NodeId::new(0), 0, n)
}

/// Audits a full tree against its sequence: `n + 1` leaves, every suffix
/// spelled by exactly one leaf, and path compression throughout. Empty
/// report means the tree is the suffix tree of `seq`.
pub fn verify_full_tree(tree: &SuffixTree, seq: &Sequence) -> InvariantReport {
    let mut report = InvariantReport::default();
    let n = seq.len();
    let leaves = tree.leaf_entries(seq);
    if leaves.len() != n + 1 {
        report.push(format!("expected {} leaves (one per suffix), found {}", n + 1, leaves.len()));
    }
    let mut seen = vec![false; n + 1];
    for leaf in &leaves {
        if !leaf.terminated {
            report.push(format!("leaf {} lacks the terminal marker", leaf.node.index()));
        }
        if leaf.occurrences.len() != 1 {
            report.push(format!(
                "leaf {} stores {} occurrences, expected exactly one suffix start",
                leaf.node.index(),
                leaf.occurrences.len()
            ));
            continue;
        }
        let start = leaf.occurrences[0];
        if start > n || seq.data()[start..] != leaf.label[..] {
            report.push(format!(
                "leaf {} claims suffix start {start} but spells a different string",
                leaf.node.index()
            ));
            continue;
        }
        if seen[start] {
            report.push(format!("suffix {start} is spelled by more than one leaf"));
        }
        seen[start] = true;
    }
    for (start, ok) in seen.iter().enumerate() {
        if !ok {
            report.push(format!("suffix {start} has no leaf"));
        }
    }

    let mut stack = vec![tree.root()];
    while let Some(id) = stack.pop() {
        let node = match tree.node(id) {
            Ok(node) => node,
            Err(_) => continue,
        };
        if id != tree.root() && !node.is_leaf() && node.child_count() < 2 {
            report.push(format!("internal node {} has fewer than two children", id.index()));
        }
        for (_, child) in node.children() {
            stack.push(child);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(tree: &SuffixTree, seq: &Sequence) -> Vec<(String, Vec<usize>)> {
        let mut out: Vec<(String, Vec<usize>)> = tree
            .leaf_entries(seq)
            .into_iter()
            .map(|l| (String::from_utf8_lossy(&l.label).into_owned(), l.occurrences))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn example_string_has_seven_leaves() {
        let seq = Sequence::from_bytes("xabxac");
        let tree = build_ukkonen(&seq).unwrap();
        let leaves = tree.leaf_entries(&seq);
        assert_eq!(leaves.len(), 7);
        assert!(verify_full_tree(&tree, &seq).is_clean());
        let got = labels(&tree, &seq);
        let want: Vec<(String, Vec<usize>)> = vec![
            ("".into(), vec![6]),
            ("abxac".into(), vec![1]),
            ("ac".into(), vec![4]),
            ("bxac".into(), vec![2]),
            ("c".into(), vec![5]),
            ("xabxac".into(), vec![0]),
            ("xac".into(), vec![3]),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn empty_sequence_has_terminal_leaf_only() {
        let seq = Sequence::from_bytes("");
        let tree = build_ukkonen(&seq).unwrap();
        assert_eq!(tree.leaf_entries(&seq).len(), 1);
        assert_eq!(tree.node_count(), 2);
        assert!(verify_full_tree(&tree, &seq).is_clean());
        assert_eq!(tree.leaf_entries(&seq)[0].occurrences, vec![0]);
    }

    #[test]
    fn repeated_symbol_chains() {
        let seq = Sequence::from_bytes("aaa");
        let tree = build_ukkonen(&seq).unwrap();
        let got = labels(&tree, &seq);
        let want: Vec<(String, Vec<usize>)> = vec![
            ("".into(), vec![3]),
            ("a".into(), vec![2]),
            ("aa".into(), vec![1]),
            ("aaa".into(), vec![0]),
        ];
        assert_eq!(got, want);
        // root, two internal nodes, four leaves
        assert_eq!(tree.node_count(), 7);
        assert!(verify_full_tree(&tree, &seq).is_clean());
    }

    #[test]
    fn multi_record_input_is_rejected() {
        let seq = Sequence::from_records(vec![b"ab".to_vec(), b"cd".to_vec()]);
        assert!(matches!(build_ukkonen(&seq), Err(Error::SingleRecordRequired(2))));
    }

    #[test]
    fn kmer_tree_fails_full_verification() {
        let seq = Sequence::from_bytes("xabxac");
        let kmer = crate::builder::build_sequential(&seq, 3).unwrap();
        let report = verify_full_tree(&kmer, &seq);
        assert!(!report.is_clean());
        assert!(report.violations().iter().any(|v| v.contains("leaves")));
    }

    #[test]
    fn banana_style_repeats() {
        let seq = Sequence::from_bytes("banana");
        let tree = build_ukkonen(&seq).unwrap();
        assert!(verify_full_tree(&tree, &seq).is_clean(), "{}", verify_full_tree(&tree, &seq));
        assert_eq!(tree.leaf_entries(&seq).len(), 7);
    }
}
