//! Fixed-window (k-mer) generalized suffix tree indexing with
//! alphabet-partitioned parallel construction, a sequential Ukkonen
//! full-tree baseline, pattern search, fixed-size repeat detection, and
//! a construction-time benchmark harness.
//!
//! The parallel builder groups window start positions by first symbol,
//! builds one independent branch per symbol (concurrently up to a
//! configured worker count), and merges the branches under a common
//! root. The resulting tree is deterministic: worker count and scan mode
//! never change a single output byte.
//!
//! # Quick start
//!
//! ```
//! use past::{build_past, occurrences, BuildConfig, Sequence};
//!
//! let seq = Sequence::from_bytes("acgttacg");
//! let tree = build_past(&seq, &BuildConfig::new(4).workers(2)).unwrap();
//! assert_eq!(occurrences(&tree, &seq, b"tac").unwrap(), vec![4]);
//! ```

pub mod baseline;
pub mod bench;
pub mod builder;
pub mod cli;
pub mod error;
pub mod ingest;
pub mod partition;
pub mod query;
pub mod sequence;
pub mod tree;

pub use baseline::{build_ukkonen, verify_full_tree};
pub use bench::{speedup, time_build, BenchRow, BuilderKind, SpeedupPoint};
pub use builder::{build_branch, build_past, build_sequential, merge_branches, Branch, BuildConfig, ScanMode};
pub use error::{Error, Result};
pub use ingest::{read_fasta, read_text, to_canonical, to_dot, write_bench_csv, RecordMeta};
pub use partition::{extract_alphabet, partition_windows, KmerPartition};
pub use query::{enumerate_repeats, find_node, occurrences, Locus, RepeatHit};
pub use sequence::{Alphabet, Sequence, SequenceRecord};
pub use tree::{
    check_tree_invariants, node_path_label, EdgeKey, EdgeLabel, InvariantReport, LeafEntry, Node,
    NodeId, SuffixTree,
};
