//! Arena-allocated suffix tree with index-pair edge labels.
//!
//! The terminal marker is structural: it is an ordering value that sorts
//! before every symbol, never a literal byte in the indexed data. Edges
//! reference the sequence by `(start, len)` and carry a flag when they end
//! with the marker, so label storage is constant per edge regardless of
//! label length.

use crate::error::{Error, Result};
use crate::sequence::Sequence;

/// Child lookup key: the first symbol of an edge, with the terminal
/// marker ordered before all symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey(u16);

impl EdgeKey {
    pub const TERMINAL: EdgeKey = EdgeKey(0);

    pub fn symbol(byte: u8) -> EdgeKey {
        EdgeKey(byte as u16 + 1)
    }

    pub fn is_terminal(self) -> bool {
        self.0 == 0
    }

    pub fn as_symbol(self) -> Option<u8> {
        if self.0 == 0 {
            None
        } else {
            Some((self.0 - 1) as u8)
        }
    }
}

/// Incoming edge label as an index pair into the sequence plus a terminal
/// flag. `len == 0` without the flag marks the root's empty label;
/// `len == 0` with the flag is the bare terminal edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeLabel {
    pub start: usize,
    pub len: usize,
    pub terminated: bool,
}

impl EdgeLabel {
    pub fn root() -> EdgeLabel {
        EdgeLabel { start: 0, len: 0, terminated: false }
    }

    pub fn terminal_only() -> EdgeLabel {
        EdgeLabel { start: 0, len: 0, terminated: true }
    }

    pub fn span(start: usize, len: usize, terminated: bool) -> EdgeLabel {
        EdgeLabel { start, len, terminated }
    }

    /// Symbol count of the data part (the marker is not counted).
    pub fn data_len(&self) -> usize {
        self.len
    }

    pub fn symbols<'s>(&self, seq: &'s Sequence) -> &'s [u8] {
        &seq.data()[self.start..self.start + self.len]
    }

    /// Key this edge answers to in its parent's child table.
    pub fn first_key(&self, seq: &Sequence) -> Option<EdgeKey> {
        if self.len > 0 {
            Some(EdgeKey::symbol(seq.symbol(self.start)))
        } else if self.terminated {
            Some(EdgeKey::TERMINAL)
        } else {
            None
        }
    }

    /// Label text with the terminal marker rendered as `$`.
    pub fn render(&self, seq: &Sequence) -> String {
        let mut out = render_symbols(self.symbols(seq));
        if self.terminated {
            out.push('$');
        }
        out
    }
}

/// Renders raw symbols for display. Printable ASCII passes through except
/// `$`, `\` and `"`, which are escaped as `\xNN` so the rendered text can
/// never be confused with the terminal marker and stays quotable.
pub fn render_symbols(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len());
    for &b in bytes {
        if (0x20..0x7f).contains(&b) && b != b'$' && b != b'\\' && b != b'"' {
            out.push(b as char);
        } else {
            out.push_str(&format!("\\x{b:02x}"));
        }
    }
    out
}

/// Arena index of a node. Raw indices are exposed so trees can be
/// assembled by hand in tests and external tooling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub fn new(index: usize) -> NodeId {
        NodeId(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One tree node: incoming edge label, children keyed by first edge
/// symbol (kept in ascending key order, marker first), and the sorted
/// occurrence positions stored at leaves.
#[derive(Debug, Clone)]
pub struct Node {
    pub edge: EdgeLabel,
    children: Vec<(EdgeKey, NodeId)>,
    pub occurrences: Vec<usize>,
}

impl Node {
    pub fn new(edge: EdgeLabel) -> Node {
        Node { edge, children: Vec::new(), occurrences: Vec::new() }
    }

    /// Inserts or replaces the child for `key`, keeping keys sorted.
    pub fn set_child(&mut self, key: EdgeKey, child: NodeId) {
        match self.children.binary_search_by_key(&key, |(k, _)| *k) {
            Ok(i) => self.children[i].1 = child,
            Err(i) => self.children.insert(i, (key, child)),
        }
    }

    pub fn child(&self, key: EdgeKey) -> Option<NodeId> {
        self.children
            .binary_search_by_key(&key, |(k, _)| *k)
            .ok()
            .map(|i| self.children[i].1)
    }

    /// Children in ascending key order (terminal marker first).
    pub fn children(&self) -> impl DoubleEndedIterator<Item = (EdgeKey, NodeId)> + '_ {
        self.children.iter().copied()
    }

    pub fn child_count(&self) -> usize {
        self.children.len()
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// A leaf together with its root-to-leaf label (marker stripped).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafEntry {
    pub node: NodeId,
    /// Path label data symbols, without the terminal marker.
    pub label: Vec<u8>,
    pub terminated: bool,
    pub occurrences: Vec<usize>,
}

/// Suffix tree over one [`Sequence`]: either a fixed-window tree produced
/// by the partitioned builder (`k >= 1`) or a full tree from the
/// sequential baseline (`k == 0`, unbounded depth). Immutable after
/// construction; reads are safe from any number of threads.
#[derive(Debug, Clone)]
pub struct SuffixTree {
    nodes: Vec<Node>,
    root: NodeId,
    k: usize,
    seq_len: usize,
}

impl SuffixTree {
    /// Assembles a tree from raw parts. Builders in this crate uphold the
    /// structural invariants; hand-assembled trees can be audited with
    /// [`check_tree_invariants`].
    pub fn from_parts(nodes: Vec<Node>, root: NodeId, k: usize, seq_len: usize) -> SuffixTree {
        SuffixTree { nodes, root, k, seq_len }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> Result<&Node> {
        self.nodes.get(id.index()).ok_or(Error::InvalidNode(id.index()))
    }

    pub(crate) fn node_unchecked(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Window size of a fixed-window tree; 0 means a full (unbounded) tree.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_kmer_tree(&self) -> bool {
        self.k > 0
    }

    pub fn seq_len(&self) -> usize {
        self.seq_len
    }

    /// All leaves in deterministic pre-order, with marker-stripped path
    /// labels resolved against `seq`.
    pub fn leaf_entries(&self, seq: &Sequence) -> Vec<LeafEntry> {
        let mut out = Vec::new();
        let mut label = Vec::new();
        // (node, label length before this node's edge)
        let mut stack = vec![(self.root, 0usize)];
        while let Some((id, base)) = stack.pop() {
            label.truncate(base);
            let node = self.node_unchecked(id);
            label.extend_from_slice(node.edge.symbols(seq));
            if node.is_leaf() {
                out.push(LeafEntry {
                    node: id,
                    label: label.clone(),
                    terminated: node.edge.terminated,
                    occurrences: node.occurrences.clone(),
                });
            } else {
                for (_, child) in node.children().rev() {
                    stack.push((child, label.len()));
                }
            }
        }
        out
    }

    /// Parent of every reachable node, computed top-down (the tree stores
    /// no parent links).
    fn parents(&self) -> Vec<Option<NodeId>> {
        let mut parents = vec![None; self.nodes.len()];
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            for (_, child) in self.node_unchecked(id).children() {
                if child.index() < parents.len() && parents[child.index()].is_none() {
                    parents[child.index()] = Some(id);
                    stack.push(child);
                }
            }
        }
        parents
    }
}

/// Concatenation of edge labels from the root to `node`, terminal marker
/// rendered as `$`.
pub fn node_path_label(tree: &SuffixTree, node: NodeId, seq: &Sequence) -> Result<String> {
    tree.node(node)?;
    if node == tree.root() {
        return Ok(String::new());
    }
    let parents = tree.parents();
    if parents[node.index()].is_none() {
        return Err(Error::InvalidNode(node.index()));
    }
    let mut chain = Vec::new();
    let mut cur = node;
    while cur != tree.root() {
        chain.push(cur);
        cur = parents[cur.index()].expect("reachable node has a parent");
    }
    let mut out = String::new();
    for id in chain.into_iter().rev() {
        out.push_str(&tree.node_unchecked(id).edge.render(seq));
    }
    Ok(out)
}

/// Outcome of a structural audit; violations are data, not failures.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InvariantReport {
    violations: Vec<String>,
}

impl InvariantReport {
    pub(crate) fn push(&mut self, violation: String) {
        self.violations.push(violation);
    }

    pub fn violations(&self) -> &[String] {
        &self.violations
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_clean() {
            write!(f, "ok")
        } else {
            for v in &self.violations {
                writeln!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

/// Audits the structural rules every tree in this crate must satisfy:
/// path compression (internal non-root nodes have at least two children),
/// distinct sibling first symbols, leaf labels that are genuine windows of
/// the sequence, and a root degree of one edge per distinct window first
/// symbol plus the terminal leaf.
pub fn check_tree_invariants(tree: &SuffixTree, seq: &Sequence) -> InvariantReport {
    let mut report = InvariantReport::default();
    let root = tree.root();
    if tree.node(root).is_err() {
        report.push(format!("root id {} is out of bounds", root.index()));
        return report;
    }
    let root_edge = tree.node_unchecked(root).edge;
    if root_edge.len != 0 || root_edge.terminated {
        report.push("root carries a non-empty incoming edge".to_string());
    }

    let mut visited = vec![false; tree.node_count()];
    visited[root.index()] = true;
    let mut label = Vec::new();
    let mut stack = vec![(root, 0usize)];
    while let Some((id, base)) = stack.pop() {
        label.truncate(base);
        let node = tree.node_unchecked(id);
        if node.edge.start + node.edge.len > seq.len() {
            report.push(format!("node {} edge points outside the sequence", id.index()));
            continue;
        }
        label.extend_from_slice(node.edge.symbols(seq));

        if id != root && node.child_count() == 1 {
            report.push(format!(
                "internal node {} has a single child (path compression violated)",
                id.index()
            ));
        }
        if !node.is_leaf() && !node.occurrences.is_empty() {
            report.push(format!("internal node {} stores occurrences", id.index()));
        }
        if id != root && node.edge.len == 0 && !(node.edge.terminated && node.is_leaf()) {
            report.push(format!("node {} has an empty edge label", id.index()));
        }
        if node.edge.terminated && !node.is_leaf() {
            report.push(format!("internal node {} ends with the terminal marker", id.index()));
        }

        if node.is_leaf() {
            check_leaf(tree, seq, id, &label, node, &mut report);
        }

        let mut prev_key: Option<EdgeKey> = None;
        for (key, child) in node.children() {
            if let Some(p) = prev_key {
                if key <= p {
                    report.push(format!("node {} children are not strictly ordered", id.index()));
                }
            }
            prev_key = Some(key);
            if tree.node(child).is_err() {
                report.push(format!("node {} links to missing child {}", id.index(), child.index()));
                continue;
            }
            let actual = tree.node_unchecked(child).edge.first_key(seq);
            if actual != Some(key) {
                report.push(format!(
                    "child {} of node {} is keyed by a symbol that is not its edge's first symbol",
                    child.index(),
                    id.index()
                ));
            }
            if visited[child.index()] {
                report.push(format!("node {} is reachable more than once", child.index()));
                continue;
            }
            visited[child.index()] = true;
            stack.push((child, label.len()));
        }
    }

    for (i, seen) in visited.iter().enumerate() {
        if !seen {
            report.push(format!("node {i} is not reachable from the root"));
        }
    }

    // Root degree: one edge per distinct first symbol over valid window
    // starts, plus the terminal leaf. A full tree counts every suffix
    // start as a window start.
    let mut first_symbols = [false; 256];
    let mut distinct = 0usize;
    for rec in seq.records() {
        let limit = if tree.is_kmer_tree() {
            if rec.len < tree.k() {
                continue;
            }
            rec.start + rec.len - tree.k()
        } else {
            if rec.len == 0 {
                continue;
            }
            rec.start + rec.len - 1
        };
        for pos in rec.start..=limit {
            let s = seq.symbol(pos) as usize;
            if !first_symbols[s] {
                first_symbols[s] = true;
                distinct += 1;
            }
        }
    }
    let expected = distinct + 1;
    let actual = tree.node_unchecked(root).child_count();
    if actual != expected {
        report.push(format!(
            "root has {actual} children, expected {expected} (distinct window first symbols + terminal)"
        ));
    }
    if tree.node_unchecked(root).child(EdgeKey::TERMINAL).is_none() {
        report.push("root is missing the terminal-marker leaf".to_string());
    }

    report
}

fn check_leaf(
    tree: &SuffixTree,
    seq: &Sequence,
    id: NodeId,
    label: &[u8],
    node: &Node,
    report: &mut InvariantReport,
) {
    if !node.edge.terminated {
        report.push(format!("leaf {} does not end with the terminal marker", id.index()));
    }
    if node.occurrences.windows(2).any(|w| w[0] >= w[1]) {
        report.push(format!("leaf {} occurrences are not strictly ascending", id.index()));
    }
    if tree.is_kmer_tree() {
        let k = tree.k();
        if label.is_empty() {
            // bare terminal leaf
            if !node.occurrences.is_empty() {
                report.push(format!("terminal leaf {} stores occurrences", id.index()));
            }
            return;
        }
        if label.len() != k {
            report.push(format!(
                "leaf {} path label has length {}, expected window size {k}",
                id.index(),
                label.len()
            ));
            return;
        }
        if node.occurrences.is_empty() {
            report.push(format!("window leaf {} stores no occurrence", id.index()));
        }
        for &occ in &node.occurrences {
            if !seq.window_fits(occ, k) || &seq.data()[occ..occ + k] != label {
                report.push(format!(
                    "leaf {} occurrence {occ} is not a window equal to its label",
                    id.index()
                ));
            }
        }
    } else {
        for &occ in &node.occurrences {
            if occ + label.len() > seq.len() || &seq.data()[occ..occ + label.len()] != label {
                report.push(format!(
                    "leaf {} occurrence {occ} does not spell its label",
                    id.index()
                ));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::build_sequential;

    #[test]
    fn terminal_key_orders_first() {
        assert!(EdgeKey::TERMINAL < EdgeKey::symbol(0));
        assert!(EdgeKey::symbol(b'a') < EdgeKey::symbol(b'b'));
        assert_eq!(EdgeKey::symbol(b'x').as_symbol(), Some(b'x'));
        assert_eq!(EdgeKey::TERMINAL.as_symbol(), None);
    }

    #[test]
    fn render_escapes_marker_collisions() {
        assert_eq!(render_symbols(b"acgt"), "acgt");
        assert_eq!(render_symbols(b"a$b"), "a\\x24b");
        assert_eq!(render_symbols(b"\\"), "\\x5c");
        assert_eq!(render_symbols(b"\t"), "\\x09");
    }

    #[test]
    fn set_child_keeps_keys_sorted() {
        let mut node = Node::new(EdgeLabel::root());
        node.set_child(EdgeKey::symbol(b'b'), NodeId::new(1));
        node.set_child(EdgeKey::TERMINAL, NodeId::new(2));
        node.set_child(EdgeKey::symbol(b'a'), NodeId::new(3));
        let keys: Vec<_> = node.children().map(|(k, _)| k).collect();
        assert_eq!(keys, vec![EdgeKey::TERMINAL, EdgeKey::symbol(b'a'), EdgeKey::symbol(b'b')]);
        node.set_child(EdgeKey::symbol(b'a'), NodeId::new(9));
        assert_eq!(node.child(EdgeKey::symbol(b'a')), Some(NodeId::new(9)));
        assert_eq!(node.child_count(), 3);
    }

    #[test]
    fn clean_tree_passes_audit() {
        let seq = Sequence::from_bytes("abaabc");
        let tree = build_sequential(&seq, 3).unwrap();
        let report = check_tree_invariants(&tree, &seq);
        assert!(report.is_clean(), "{report}");
        // distinct window first symbols {a, b} plus the terminal leaf
        assert_eq!(tree.node(tree.root()).unwrap().child_count(), 3);
    }

    #[test]
    fn empty_sequence_tree_has_only_terminal_child() {
        let seq = Sequence::from_bytes("");
        let tree = build_sequential(&seq, 4).unwrap();
        let report = check_tree_invariants(&tree, &seq);
        assert!(report.is_clean(), "{report}");
        let root = tree.node(tree.root()).unwrap();
        assert_eq!(root.child_count(), 1);
        assert!(root.child(EdgeKey::TERMINAL).is_some());
    }

    #[test]
    fn injected_single_child_node_is_reported() {
        // root -> inner("a") -> leaf("b$") : inner has one child
        let seq = Sequence::from_bytes("ab");
        let mut nodes = vec![Node::new(EdgeLabel::root())];
        nodes.push(Node::new(EdgeLabel::terminal_only()));
        let mut inner = Node::new(EdgeLabel::span(0, 1, false));
        let mut leaf = Node::new(EdgeLabel::span(1, 1, true));
        leaf.occurrences = vec![0];
        inner.set_child(EdgeKey::symbol(b'b'), NodeId::new(3));
        nodes.push(inner);
        nodes.push(leaf);
        nodes[0].set_child(EdgeKey::TERMINAL, NodeId::new(1));
        nodes[0].set_child(EdgeKey::symbol(b'a'), NodeId::new(2));
        let tree = SuffixTree::from_parts(nodes, NodeId::new(0), 2, seq.len());
        let report = check_tree_invariants(&tree, &seq);
        let compression: Vec<_> = report
            .violations()
            .iter()
            .filter(|v| v.contains("path compression"))
            .collect();
        assert_eq!(compression.len(), 1);
    }

    #[test]
    fn path_label_resolves_index_pairs() {
        let seq = Sequence::from_bytes("abaabc");
        let tree = build_sequential(&seq, 3).unwrap();
        assert_eq!(node_path_label(&tree, tree.root(), &seq).unwrap(), "");
        let labels: Vec<String> = tree
            .leaf_entries(&seq)
            .iter()
            .map(|l| node_path_label(&tree, l.node, &seq).unwrap())
            .collect();
        assert!(labels.contains(&"baa$".to_string()));
        assert!(labels.contains(&"$".to_string()));
    }

    #[test]
    fn unknown_node_id_is_invalid() {
        let seq = Sequence::from_bytes("ab");
        let tree = build_sequential(&seq, 1).unwrap();
        let bogus = NodeId::new(tree.node_count() + 7);
        assert!(matches!(
            node_path_label(&tree, bogus, &seq),
            Err(crate::error::Error::InvalidNode(_))
        ));
    }
}
