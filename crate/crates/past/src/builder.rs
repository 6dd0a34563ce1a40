//! Branch-wise parallel suffix tree construction over fixed-length
//! windows.
//!
//! Construction runs in two phases: window starts are grouped by first
//! symbol, then each symbol's branch is built independently as a
//! path-compressed trie of its windows. A barrier separates branch
//! construction from the single-threaded merge that grafts every branch
//! under a common root. The result is identical, byte for byte under
//! canonical serialization, for any worker count and either scan mode.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::partition::{extract_alphabet, partition_windows, starts_for_symbol};
use crate::sequence::Sequence;
use crate::tree::{EdgeKey, EdgeLabel, Node, NodeId, SuffixTree};

/// How workers obtain their window starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanMode {
    /// One sequential pass buckets every start, then workers consume
    /// buckets.
    #[default]
    SingleScan,
    /// Each worker scans the whole sequence filtering its own symbol.
    PerSymbolScan,
}

/// Construction parameters: window size, parallelism degree, and scan
/// mode. The output never depends on `workers` or `scan_mode`.
#[derive(Debug, Clone, Copy)]
pub struct BuildConfig {
    pub k: usize,
    pub workers: usize,
    pub scan_mode: ScanMode,
}

impl BuildConfig {
    pub fn new(k: usize) -> BuildConfig {
        BuildConfig { k, workers: 1, scan_mode: ScanMode::SingleScan }
    }

    pub fn workers(mut self, workers: usize) -> BuildConfig {
        self.workers = workers.max(1);
        self
    }

    pub fn scan_mode(mut self, mode: ScanMode) -> BuildConfig {
        self.scan_mode = mode;
        self
    }
}

/// Sub-tree owned by one alphabet symbol: a path-compressed trie of every
/// window starting with that symbol, ready to be grafted under the shared
/// root. Node ids are local to the branch arena, so branches under
/// construction share nothing.
#[derive(Debug)]
pub struct Branch {
    symbol: u8,
    /// nodes[0] is the branch-local root; it is discarded at merge time.
    nodes: Vec<Node>,
}

impl Branch {
    pub fn symbol(&self) -> u8 {
        self.symbol
    }

    /// Nodes the branch contributes to the merged tree (the local root is
    /// not counted).
    pub fn node_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1
    }
}

/// Builds the branch for `symbol` from its ascending window starts.
/// Windows with equal text collapse into one leaf holding every start;
/// internal nodes arise only from shared proper prefixes.
pub fn build_branch(seq: &Sequence, k: usize, symbol: u8, starts: &[usize]) -> Result<Branch> {
    if k == 0 {
        return Err(Error::InvalidK);
    }
    for &start in starts {
        if !seq.window_fits(start, k) || seq.symbol(start) != symbol {
            return Err(Error::ForeignStart { symbol: symbol as char, position: start });
        }
    }
    debug_assert!(starts.windows(2).all(|w| w[0] < w[1]));

    let mut nodes = vec![Node::new(EdgeLabel::root())];
    for &start in starts {
        insert_window(&mut nodes, seq, k, start);
    }
    Ok(Branch { symbol, nodes })
}

/// Inserts one window (plus the structural terminal marker) into a branch
/// arena. All inserted strings have length exactly `k`, so a full match
/// can only land on an existing leaf and grows its occurrence list.
fn insert_window(nodes: &mut Vec<Node>, seq: &Sequence, k: usize, start: usize) {
    let data = seq.data();
    let window = &data[start..start + k];
    let mut node = 0usize;
    let mut depth = 0usize;
    loop {
        let key = EdgeKey::symbol(window[depth]);
        let Some(child) = nodes[node].child(key) else {
            let mut leaf = Node::new(EdgeLabel::span(start + depth, k - depth, true));
            leaf.occurrences.push(start);
            let leaf_id = NodeId::new(nodes.len());
            nodes.push(leaf);
            nodes[node].set_child(key, leaf_id);
            return;
        };
        let child = child.index();
        let edge = nodes[child].edge;
        let edge_syms = &data[edge.start..edge.start + edge.len];
        let mut matched = 0usize;
        while matched < edge_syms.len()
            && depth + matched < k
            && edge_syms[matched] == window[depth + matched]
        {
            matched += 1;
        }
        if matched == edge_syms.len() {
            if depth + matched == k {
                // identical window text; the leaf collects the new start
                debug_assert!(edge.terminated);
                nodes[child].occurrences.push(start);
                return;
            }
            node = child;
            depth += matched;
            continue;
        }
        // split the edge at the first mismatch
        let inner = Node::new(EdgeLabel::span(edge.start, matched, false));
        let inner_id = NodeId::new(nodes.len());
        nodes.push(inner);
        nodes[child].edge =
            EdgeLabel::span(edge.start + matched, edge.len - matched, edge.terminated);
        let old_key = EdgeKey::symbol(data[edge.start + matched]);
        nodes[inner_id.index()].set_child(old_key, NodeId::new(child));
        let mut leaf = Node::new(EdgeLabel::span(start + depth + matched, k - depth - matched, true));
        leaf.occurrences.push(start);
        let leaf_id = NodeId::new(nodes.len());
        nodes.push(leaf);
        nodes[inner_id.index()].set_child(EdgeKey::symbol(window[depth + matched]), leaf_id);
        nodes[node].set_child(key, inner_id);
        return;
    }
}

/// Grafts every branch under a fresh root next to the bare terminal leaf.
/// Children end up ordered terminal-first then by symbol, independent of
/// the order branches were built in.
pub fn merge_branches(branches: Vec<Branch>, seq: &Sequence, k: usize) -> Result<SuffixTree> {
    if k == 0 {
        return Err(Error::InvalidK);
    }
    let mut branches = branches;
    branches.sort_by_key(|b| b.symbol);
    for pair in branches.windows(2) {
        if pair[0].symbol == pair[1].symbol {
            return Err(Error::DuplicateBranch(pair[0].symbol as char));
        }
    }

    let mut nodes = vec![Node::new(EdgeLabel::root())];
    let terminal_leaf = NodeId::new(nodes.len());
    nodes.push(Node::new(EdgeLabel::terminal_only()));
    nodes[0].set_child(EdgeKey::TERMINAL, terminal_leaf);

    for branch in branches {
        if branch.is_empty() {
            continue;
        }
        let offset = nodes.len();
        let remap = |id: NodeId| NodeId::new(offset + id.index() - 1);
        let mut iter = branch.nodes.into_iter();
        let local_root = iter.next().expect("branch arena has a root");
        for mut node in iter {
            let children: Vec<_> = node.children().collect();
            for (key, child) in children {
                node.set_child(key, remap(child));
            }
            nodes.push(node);
        }
        for (key, top) in local_root.children() {
            nodes[0].set_child(key, remap(top));
        }
    }

    Ok(SuffixTree::from_parts(nodes, NodeId::new(0), k, seq.len()))
}

/// Parallel construction: group window starts by first symbol, build each
/// symbol's branch concurrently up to `cfg.workers`, wait for every
/// branch, then merge. Symbols are claimed from a shared queue ordered by
/// descending work size so skewed alphabets stay balanced.
pub fn build_past(seq: &Sequence, cfg: &BuildConfig) -> Result<SuffixTree> {
    if cfg.k == 0 {
        return Err(Error::InvalidK);
    }
    let k = cfg.k;
    let workers = cfg.workers.max(1);
    let alphabet = extract_alphabet(seq);

    // (symbol, pre-bucketed starts) work items, largest first. In
    // per-symbol-scan mode the bucket sizes are unknown until each worker
    // scans, so raw symbol frequency stands in for bucket size.
    let mut items: Vec<(u8, Option<Vec<usize>>)> = match cfg.scan_mode {
        ScanMode::SingleScan => {
            let partition = partition_windows(seq, k, &alphabet)?;
            let mut items: Vec<_> =
                partition.into_buckets().into_iter().map(|(s, b)| (s, Some(b))).collect();
            items.sort_by(|a, b| {
                let la = a.1.as_ref().map_or(0, Vec::len);
                let lb = b.1.as_ref().map_or(0, Vec::len);
                lb.cmp(&la).then(a.0.cmp(&b.0))
            });
            items
        }
        ScanMode::PerSymbolScan => {
            let mut counts = [0usize; 256];
            for &b in seq.data() {
                counts[b as usize] += 1;
            }
            let mut symbols: Vec<u8> = alphabet.symbols().to_vec();
            symbols.sort_by(|a, b| {
                counts[*b as usize].cmp(&counts[*a as usize]).then(a.cmp(b))
            });
            symbols.into_iter().map(|s| (s, None)).collect()
        }
    };

    let build_item = |symbol: u8, starts: Option<Vec<usize>>| -> Result<Branch> {
        let starts = match starts {
            Some(starts) => starts,
            None => starts_for_symbol(seq, k, symbol),
        };
        build_branch(seq, k, symbol, &starts)
    };

    let branches: Vec<Branch> = if workers == 1 || items.len() <= 1 {
        let mut out = Vec::with_capacity(items.len());
        for (symbol, starts) in items.drain(..) {
            out.push(build_item(symbol, starts)?);
        }
        out
    } else {
        let queue: Vec<Mutex<Option<(u8, Option<Vec<usize>>)>>> =
            items.drain(..).map(|it| Mutex::new(Some(it))).collect();
        let next = AtomicUsize::new(0);
        let results: Mutex<Vec<Result<Branch>>> = Mutex::new(Vec::with_capacity(queue.len()));
        let threads = workers.min(queue.len());
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| loop {
                    let idx = next.fetch_add(1, Ordering::Relaxed);
                    if idx >= queue.len() {
                        break;
                    }
                    let (symbol, starts) =
                        queue[idx].lock().unwrap().take().expect("each item claimed once");
                    let branch = build_item(symbol, starts);
                    results.lock().unwrap().push(branch);
                });
            }
        });
        // the scope join is the barrier: every branch is complete here
        results.into_inner().unwrap().into_iter().collect::<Result<Vec<_>>>()?
    };

    merge_branches(branches, seq, k)
}

/// The single-threaded construction path: same partition, branch, and
/// merge steps with no concurrency machinery. Output is identical to
/// [`build_past`] with one worker.
pub fn build_sequential(seq: &Sequence, k: usize) -> Result<SuffixTree> {
    if k == 0 {
        return Err(Error::InvalidK);
    }
    let alphabet = extract_alphabet(seq);
    let partition = partition_windows(seq, k, &alphabet)?;
    let mut branches = Vec::new();
    for (symbol, starts) in partition.buckets() {
        branches.push(build_branch(seq, k, symbol, starts)?);
    }
    merge_branches(branches, seq, k)
}
