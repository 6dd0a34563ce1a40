//! Sequence ingestion (FASTA, plain text) and deterministic tree/report
//! serialization: canonical text, DOT, and the bench CSV format.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::bench::{BenchRow, BuilderKind, RunStatus};
use crate::error::{Error, Result};
use crate::sequence::Sequence;
use crate::tree::SuffixTree;

/// Per-record metadata from ingestion: the FASTA header (empty for plain
/// text) and the record's global coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordMeta {
    pub id: String,
    pub global_start: usize,
    pub length: usize,
}

/// Reads a FASTA file: `>`-headers delimit records, sequence lines are
/// concatenated with line breaks and surrounding whitespace removed.
pub fn read_fasta(path: &Path, normalize_case: bool) -> Result<(Sequence, Vec<RecordMeta>)> {
    let raw = fs::read(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_fasta(&raw, normalize_case).map_err(|reason| Error::FormatError {
        path: path.to_path_buf(),
        reason,
    })
}

fn parse_fasta(
    raw: &[u8],
    normalize_case: bool,
) -> std::result::Result<(Sequence, Vec<RecordMeta>), String> {
    let mut ids: Vec<String> = Vec::new();
    let mut records: Vec<Vec<u8>> = Vec::new();
    for line in raw.split(|&b| b == b'\n') {
        let line = trim_ascii(line);
        if line.is_empty() {
            continue;
        }
        if line[0] == b'>' {
            ids.push(String::from_utf8_lossy(trim_ascii(&line[1..])).into_owned());
            records.push(Vec::new());
            continue;
        }
        let Some(current) = records.last_mut() else {
            return Err("no FASTA header found; try plain-text mode".to_string());
        };
        if normalize_case {
            current.extend(line.iter().map(u8::to_ascii_uppercase));
        } else {
            current.extend_from_slice(line);
        }
    }
    let seq = Sequence::from_records(records);
    let metas = ids
        .iter()
        .zip(seq.records())
        .map(|(id, rec)| RecordMeta { id: id.clone(), global_start: rec.start, length: rec.len })
        .collect();
    Ok((seq, metas))
}

fn trim_ascii(line: &[u8]) -> &[u8] {
    let start = line.iter().position(|b| !b.is_ascii_whitespace()).unwrap_or(line.len());
    let end = line.iter().rposition(|b| !b.is_ascii_whitespace()).map_or(start, |i| i + 1);
    &line[start..end]
}

/// Reads a headerless file as one record, stripping line breaks unless
/// told otherwise.
pub fn read_text(path: &Path, strip_newlines: bool, normalize_case: bool) -> Result<Sequence> {
    let mut raw = fs::read(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    if strip_newlines {
        raw.retain(|&b| b != b'\n' && b != b'\r');
    }
    if normalize_case {
        raw.make_ascii_uppercase();
    }
    Ok(Sequence::from_bytes(raw))
}

/// Line-oriented pre-order dump: one line per node with its depth, edge
/// label text, and occurrence list. Structurally equal trees serialize to
/// identical bytes regardless of how they were constructed.
pub fn to_canonical(tree: &SuffixTree, seq: &Sequence) -> String {
    let mut out = String::new();
    let mut stack = vec![(tree.root(), 0usize)];
    while let Some((id, depth)) = stack.pop() {
        let node = tree.node(id).expect("tree ids are arena indices");
        let occs: Vec<String> = node.occurrences.iter().map(usize::to_string).collect();
        writeln!(out, "{depth}\t{}\t{}", node.edge.render(seq), occs.join(",")).unwrap();
        for (_, child) in node.children().rev() {
            stack.push((child, depth + 1));
        }
    }
    out
}

/// DOT rendering of the tree: one node per arena node, edges labeled with
/// their symbol text, leaves annotated with occurrence lists.
pub fn to_dot(tree: &SuffixTree, seq: &Sequence) -> String {
    let mut out = String::from("digraph suffix_tree {\n    node [shape=circle];\n");
    let mut stack = vec![tree.root()];
    while let Some(id) = stack.pop() {
        let node = tree.node(id).expect("tree ids are arena indices");
        if node.is_leaf() {
            let occs: Vec<String> = node.occurrences.iter().map(usize::to_string).collect();
            writeln!(out, "    n{} [shape=box, label=\"{}\"];", id.index(), occs.join(",")).unwrap();
        } else {
            writeln!(out, "    n{} [label=\"\"];", id.index()).unwrap();
        }
        for (_, child) in node.children() {
            let label = tree.node(child).expect("child ids are arena indices").edge.render(seq);
            writeln!(out, "    n{} -> n{} [label=\"{}\"];", id.index(), child.index(), escape_dot(&label))
                .unwrap();
        }
        for (_, child) in node.children().rev() {
            stack.push(child);
        }
    }
    out.push_str("}\n");
    out
}

fn escape_dot(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Formats bench rows as CSV with the pinned header
/// `text_size_mb,builder,k,workers,seconds`. Timed-out rows print `n/a`
/// in the seconds column; the k column is empty for the baseline.
pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("text_size_mb,builder,k,workers,seconds\n");
    for row in rows {
        let k = row.k.map(|k| k.to_string()).unwrap_or_default();
        let seconds = match row.status {
            RunStatus::Ok => format!("{:.3}", row.seconds),
            RunStatus::Timeout => "n/a".to_string(),
        };
        writeln!(
            out,
            "{},{},{},{},{}",
            format_mb(row.text_size),
            row.builder.as_str(),
            k,
            row.workers,
            seconds
        )
        .unwrap();
    }
    out
}

/// Writes [`bench_csv`] output to a file.
pub fn write_bench_csv(rows: &[BenchRow], path: &Path) -> Result<()> {
    fs::write(path, bench_csv(rows)).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Parses [`bench_csv`] output back into rows.
pub fn parse_bench_csv(text: &str) -> Result<Vec<BenchRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some("text_size_mb,builder,k,workers,seconds") => {}
        other => {
            return Err(Error::ConfigError(format!("unexpected CSV header: {other:?}")));
        }
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::ConfigError(format!("malformed CSV row: {line}")));
        }
        let mb: f64 = fields[0]
            .parse()
            .map_err(|_| Error::ConfigError(format!("bad text size: {}", fields[0])))?;
        let builder = BuilderKind::parse(fields[1])
            .ok_or_else(|| Error::ConfigError(format!("unknown builder: {}", fields[1])))?;
        let k = if fields[2].is_empty() {
            None
        } else {
            Some(
                fields[2]
                    .parse()
                    .map_err(|_| Error::ConfigError(format!("bad k: {}", fields[2])))?,
            )
        };
        let workers: usize = fields[3]
            .parse()
            .map_err(|_| Error::ConfigError(format!("bad workers: {}", fields[3])))?;
        let (seconds, status) = if fields[4] == "n/a" {
            (0.0, RunStatus::Timeout)
        } else {
            (
                fields[4]
                    .parse()
                    .map_err(|_| Error::ConfigError(format!("bad seconds: {}", fields[4])))?,
                RunStatus::Ok,
            )
        };
        rows.push(BenchRow {
            text_size: (mb * MB as f64).round() as usize,
            builder,
            k,
            workers,
            seconds,
            status,
        });
    }
    Ok(rows)
}

const MB: usize = 1024 * 1024;

fn format_mb(bytes: usize) -> String {
    let mb = bytes as f64 / MB as f64;
    if (mb - mb.round()).abs() < 1e-9 {
        format!("{}", mb.round() as u64)
    } else {
        format!("{mb:.3}")
    }
}

/// Human-readable pivot of bench rows: one line per input size, one
/// column per builder configuration, `n/a` where a run timed out.
pub fn render_table(rows: &[BenchRow]) -> String {
    let mut columns: Vec<(BuilderKind, Option<usize>, usize)> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    for row in rows {
        let col = (row.builder, row.k, row.workers);
        if !columns.contains(&col) {
            columns.push(col);
        }
        if !sizes.contains(&row.text_size) {
            sizes.push(row.text_size);
        }
    }
    columns.sort_by_key(|&(builder, k, w)| (builder != BuilderKind::StBased, k, w));
    sizes.sort_unstable();

    let mut header = vec!["text_size_mb".to_string()];
    for &(builder, k, w) in &columns {
        header.push(match builder {
            BuilderKind::StBased => "st_based(s)".to_string(),
            BuilderKind::Past => format!("past k={} w={w}(s)", k.unwrap_or(0)),
        });
    }
    let mut grid = vec![header];
    for &size in &sizes {
        let mut line = vec![format_mb(size)];
        for &(builder, k, w) in &columns {
            let cell = rows
                .iter()
                .find(|r| {
                    r.text_size == size && r.builder == builder && r.k == k && r.workers == w
                })
                .map(|r| match r.status {
                    RunStatus::Ok => format!("{:.3}", r.seconds),
                    RunStatus::Timeout => "n/a".to_string(),
                })
                .unwrap_or_default();
            line.push(cell);
        }
        grid.push(line);
    }

    let width: Vec<usize> = (0..grid[0].len())
        .map(|c| grid.iter().map(|l| l[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for line in &grid {
        let rendered: Vec<String> =
            line.iter().enumerate().map(|(c, cell)| format!("{cell:<w$}", w = width[c])).collect();
        writeln!(out, "{}", rendered.join("  ").trim_end()).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::build_ukkonen;
    use crate::builder::{build_past, BuildConfig, ScanMode};

    fn write_temp(content: &[u8]) -> tempfile::NamedTempFile {
        use std::io::Write;
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn fasta_concatenates_sequence_lines() {
        let f = write_temp(b">r1\nACGT\nTACG\n");
        let (seq, metas) = read_fasta(f.path(), false).unwrap();
        assert_eq!(seq.data(), b"ACGTTACG");
        assert_eq!(metas.len(), 1);
        assert_eq!(metas[0].id, "r1");
        assert_eq!(metas[0].length, 8);
    }

    #[test]
    fn fasta_records_tile() {
        let f = write_temp(b">a\nAC\n>b\nGT\n");
        let (seq, metas) = read_fasta(f.path(), false).unwrap();
        assert_eq!(seq.data(), b"ACGT");
        assert_eq!(
            metas,
            vec![
                RecordMeta { id: "a".into(), global_start: 0, length: 2 },
                RecordMeta { id: "b".into(), global_start: 2, length: 2 },
            ]
        );
    }

    #[test]
    fn fasta_case_normalization() {
        let f = write_temp(b">r\nacGT\n");
        let (seq, _) = read_fasta(f.path(), true).unwrap();
        assert_eq!(seq.data(), b"ACGT");
    }

    #[test]
    fn headerless_content_is_a_format_error() {
        let f = write_temp(b"abaabc\n");
        let err = read_fasta(f.path(), false).unwrap_err();
        assert_eq!(err.name(), "FormatError");
        // an empty file parses to zero records
        let f = write_temp(b"");
        let (seq, metas) = read_fasta(f.path(), false).unwrap();
        assert!(seq.is_empty());
        assert!(metas.is_empty());
    }

    #[test]
    fn text_reader_strips_line_breaks() {
        let f = write_temp(b"ab\ncd");
        let seq = read_text(f.path(), true, false).unwrap();
        assert_eq!(seq.data(), b"abcd");
        assert_eq!(seq.records().len(), 1);
        let seq = read_text(f.path(), false, false).unwrap();
        assert_eq!(seq.data(), b"ab\ncd");
    }

    #[test]
    fn canonical_of_empty_tree_is_two_lines() {
        let seq = Sequence::from_bytes("");
        let tree = build_past(&seq, &BuildConfig::new(3)).unwrap();
        let dump = to_canonical(&tree, &seq);
        assert_eq!(dump, "0\t\t\n1\t$\t\n");
    }

    #[test]
    fn canonical_is_identical_across_workers_and_scan_modes() {
        let seq = Sequence::from_bytes("abacabadabacabae");
        let base = to_canonical(&build_past(&seq, &BuildConfig::new(3)).unwrap(), &seq);
        for workers in [2, 8] {
            for mode in [ScanMode::SingleScan, ScanMode::PerSymbolScan] {
                let cfg = BuildConfig::new(3).workers(workers).scan_mode(mode);
                let dump = to_canonical(&build_past(&seq, &cfg).unwrap(), &seq);
                assert_eq!(dump, base);
            }
        }
    }

    #[test]
    fn canonical_of_full_tree_has_one_leaf_line_per_suffix() {
        let seq = Sequence::from_bytes("xabxac");
        let tree = build_ukkonen(&seq).unwrap();
        let dump = to_canonical(&tree, &seq);
        let leaf_lines = dump
            .lines()
            .filter(|l| !l.rsplit('\t').next().unwrap_or("").is_empty())
            .count();
        assert_eq!(leaf_lines, 7);
    }

    #[test]
    fn dot_counts_match_arena() {
        let seq = Sequence::from_bytes("abaabc");
        let tree = build_past(&seq, &BuildConfig::new(3)).unwrap();
        let dot = to_dot(&tree, &seq);
        let edge_lines = dot.lines().filter(|l| l.contains("->")).count();
        let node_lines = dot
            .lines()
            .filter(|l| {
                let l = l.trim_start();
                l.starts_with('n') && !l.contains("->")
            })
            .count();
        assert_eq!(node_lines, tree.node_count());
        assert_eq!(edge_lines, tree.node_count() - 1);
        // distinct window first symbols {a, b} plus the terminal leaf
        let root_edges = dot.lines().filter(|l| l.contains("n0 ->")).count();
        assert_eq!(root_edges, 3);
    }

    #[test]
    fn dot_of_empty_tree_has_two_nodes() {
        let seq = Sequence::from_bytes("");
        let tree = build_past(&seq, &BuildConfig::new(1)).unwrap();
        let dot = to_dot(&tree, &seq);
        let node_lines = dot
            .lines()
            .filter(|l| {
                let l = l.trim_start();
                l.starts_with('n') && !l.contains("->")
            })
            .count();
        assert_eq!(node_lines, 2);
    }

    #[test]
    fn csv_rows_match_pinned_format() {
        let rows = vec![
            BenchRow {
                text_size: 5 * MB,
                builder: BuilderKind::StBased,
                k: None,
                workers: 1,
                seconds: 92.0,
                status: RunStatus::Ok,
            },
            BenchRow {
                text_size: 30 * MB,
                builder: BuilderKind::Past,
                k: Some(5),
                workers: 16,
                seconds: 136.0,
                status: RunStatus::Ok,
            },
            BenchRow {
                text_size: 40 * MB,
                builder: BuilderKind::StBased,
                k: None,
                workers: 1,
                seconds: 0.0,
                status: RunStatus::Timeout,
            },
        ];
        let csv = bench_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "text_size_mb,builder,k,workers,seconds");
        assert_eq!(lines[1], "5,st_based,,1,92.000");
        assert_eq!(lines[2], "30,past,5,16,136.000");
        assert_eq!(lines[3], "40,st_based,,1,n/a");
    }

    #[test]
    fn csv_round_trips() {
        let rows = vec![
            BenchRow {
                text_size: 5 * MB,
                builder: BuilderKind::Past,
                k: Some(10),
                workers: 8,
                seconds: 1.25,
                status: RunStatus::Ok,
            },
            BenchRow {
                text_size: 2 * MB,
                builder: BuilderKind::StBased,
                k: None,
                workers: 1,
                seconds: 0.0,
                status: RunStatus::Timeout,
            },
        ];
        let parsed = parse_bench_csv(&bench_csv(&rows)).unwrap();
        assert_eq!(parsed, rows);
    }

    #[test]
    fn table_pivots_by_configuration() {
        let rows = vec![
            BenchRow {
                text_size: 5 * MB,
                builder: BuilderKind::StBased,
                k: None,
                workers: 1,
                seconds: 92.0,
                status: RunStatus::Ok,
            },
            BenchRow {
                text_size: 5 * MB,
                builder: BuilderKind::Past,
                k: Some(5),
                workers: 16,
                seconds: 24.0,
                status: RunStatus::Ok,
            },
        ];
        let table = render_table(&rows);
        let mut lines = table.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("text_size_mb"));
        assert!(header.contains("st_based(s)"));
        assert!(header.contains("past k=5 w=16(s)"));
        let row = lines.next().unwrap();
        assert!(row.starts_with('5'));
        assert!(row.contains("92.000"));
        assert!(row.contains("24.000"));
    }
}
