//! Edge-list loading for SNAP/KONECT style social network dumps.
//!
//! Lines hold two whitespace-separated integer ids; further columns (signs,
//! weights, timestamps) are ignored. `#` and `%` start comment lines. Ids are
//! remapped to `0..n` in order of first appearance, directed pairs become
//! undirected edges, and loops are dropped. Gzip input is detected from the
//! magic bytes.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use flate2::read::MultiGzDecoder;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetManifest {
    pub name: String,
    pub path: PathBuf,
    pub expected_n: Option<usize>,
    pub expected_m: Option<usize>,
}

/// Node and edge counts of the four reference networks.
pub const REFERENCE_COUNTS: [(&str, usize, usize); 4] = [
    ("YT", 1_138_499, 2_990_443),
    ("SD", 82_168, 582_533),
    ("TW", 81_306, 1_342_310),
    ("FB", 63_731, 817_090),
];

impl DatasetManifest {
    /// No validation beyond parsing.
    pub fn custom(path: impl Into<PathBuf>) -> DatasetManifest {
        DatasetManifest {
            name: "custom".into(),
            path: path.into(),
            expected_n: None,
            expected_m: None,
        }
    }

    /// A manifest for one of `YT`, `SD`, `TW`, `FB` that insists on the
    /// published node and edge counts.
    pub fn reference(name: &str, path: impl Into<PathBuf>) -> Option<DatasetManifest> {
        REFERENCE_COUNTS
            .iter()
            .find(|(label, _, _)| label.eq_ignore_ascii_case(name))
            .map(|&(label, n, m)| DatasetManifest {
                name: label.into(),
                path: path.into(),
                expected_n: Some(n),
                expected_m: Some(m),
            })
    }
}

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `original_ids[new_id]` is the id used in the file.
    pub original_ids: Vec<u64>,
    /// Pairs dropped because the same undirected edge was already present.
    pub duplicates_merged: usize,
    pub self_loops: usize,
}

impl LoadedGraph {
    /// Sidecar map: one `original_id new_id` line per node.
    pub fn write_id_map<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (new, orig) in self.original_ids.iter().enumerate() {
            writeln!(w, "{orig} {new}")?;
        }
        Ok(())
    }
}

fn open_maybe_gzip(path: &Path) -> Result<Box<dyn BufRead>> {
    let mut file = File::open(path)?;
    let mut magic = [0u8; 2];
    let read = file.read(&mut magic)?;
    let file = File::open(path)?;
    if read == 2 && magic == [0x1f, 0x8b] {
        Ok(Box::new(BufReader::new(MultiGzDecoder::new(file))))
    } else {
        Ok(Box::new(BufReader::new(file)))
    }
}

pub fn load_edge_list(path: &Path, manifest: &DatasetManifest) -> Result<LoadedGraph> {
    let reader = open_maybe_gzip(path)?;
    let loaded = parse_edge_list(reader, path)?;
    let (n, m) = (loaded.graph.n(), loaded.graph.m());
    let n_ok = manifest.expected_n.is_none_or(|e| e == n);
    let m_ok = manifest.expected_m.is_none_or(|e| e == m);
    if !(n_ok && m_ok) {
        let show = |x: Option<usize>| x.map_or_else(|| "any".to_string(), |v| v.to_string());
        return Err(Error::ManifestMismatch {
            name: manifest.name.clone(),
            expected_n: show(manifest.expected_n),
            expected_m: show(manifest.expected_m),
            n,
            m,
        });
    }
    Ok(loaded)
}

pub fn load_dataset(manifest: &DatasetManifest) -> Result<LoadedGraph> {
    load_edge_list(&manifest.path, manifest)
}

/// Parses edge-list text; `origin` only labels error messages.
pub fn parse_edge_list<R: BufRead>(reader: R, origin: &Path) -> Result<LoadedGraph> {
    let mut ids: HashMap<u64, NodeId> = HashMap::new();
    let mut original_ids: Vec<u64> = Vec::new();
    let mut pairs: Vec<(NodeId, NodeId)> = Vec::new();
    let mut self_loops = 0;

    let mut intern = |raw: u64, original_ids: &mut Vec<u64>| -> NodeId {
        *ids.entry(raw).or_insert_with(|| {
            original_ids.push(raw);
            (original_ids.len() - 1) as NodeId
        })
    };

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let parse_err = |msg: String| Error::Parse {
            path: origin.to_path_buf(),
            line: idx + 1,
            msg,
        };
        let mut tokens = trimmed.split_whitespace();
        let mut next_id = || -> Result<u64> {
            let tok = tokens
                .next()
                .ok_or_else(|| parse_err(format!("expected two node ids, got {trimmed:?}")))?;
            tok.parse::<u64>()
                .map_err(|_| parse_err(format!("node id {tok:?} is not a non-negative integer")))
        };
        let (a, b) = (next_id()?, next_id()?);
        let u = intern(a, &mut original_ids);
        let v = intern(b, &mut original_ids);
        if u == v {
            self_loops += 1;
        } else {
            pairs.push((u.min(v), u.max(v)));
        }
    }

    let raw_pairs = pairs.len();
    let graph = Graph::from_pairs(original_ids.len(), pairs);
    Ok(LoadedGraph {
        duplicates_merged: raw_pairs - graph.m(),
        graph,
        original_ids,
        self_loops,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse(text: &str) -> Result<LoadedGraph> {
        parse_edge_list(Cursor::new(text.as_bytes()), Path::new("mem"))
    }

    #[test]
    fn reciprocal_pairs_and_comments() {
        let l = parse("0 1\n1 0\n# c\n1 2").unwrap();
        assert_eq!((l.graph.n(), l.graph.m()), (3, 2));
        assert_eq!(l.duplicates_merged, 1);
    }

    #[test]
    fn sparse_ids_remapped_by_first_appearance() {
        let l = parse("% konect header\n900 7\n7 42\n42 42\n\n3 900 1 1234567\n").unwrap();
        assert_eq!(l.original_ids, vec![900, 7, 42, 3]);
        assert_eq!(l.self_loops, 1);
        assert_eq!(l.graph.to_canonical_string(), "0 1\n0 3\n1 2\n");
        let mut map = Vec::new();
        l.write_id_map(&mut map).unwrap();
        assert_eq!(String::from_utf8(map).unwrap(), "900 0\n7 1\n42 2\n3 3\n");
    }

    #[test]
    fn malformed_lines_report_line_number() {
        match parse("0 1\n1 x\n").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("{e}"),
        }
        match parse("# a\n5\n").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn manifest_mismatch_reports_both_counts() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        std::fs::write(&path, "0 1\n1 2\n").unwrap();
        let mut manifest = DatasetManifest::custom(&path);
        manifest.expected_n = Some(3);
        manifest.expected_m = Some(3);
        let err = load_edge_list(&path, &manifest).unwrap_err().to_string();
        assert!(err.contains("3 edges") && err.contains("2 edges"), "{err}");
        manifest.expected_m = Some(2);
        assert!(load_edge_list(&path, &manifest).is_ok());
    }

    #[test]
    fn gzip_detected_by_magic() {
        use flate2::write::GzEncoder;
        use flate2::Compression;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.bin");
        let mut enc = GzEncoder::new(File::create(&path).unwrap(), Compression::default());
        enc.write_all(b"10 20\n20 30\n").unwrap();
        enc.finish().unwrap();
        let l = load_edge_list(&path, &DatasetManifest::custom(&path)).unwrap();
        assert_eq!((l.graph.n(), l.graph.m()), (3, 2));
    }

    #[test]
    fn reference_manifests() {
        let fb = DatasetManifest::reference("fb", "x").unwrap();
        assert_eq!((fb.expected_n, fb.expected_m), (Some(63731), Some(817090)));
        assert!(DatasetManifest::reference("zz", "x").is_none());
    }
}
