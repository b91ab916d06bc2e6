//! File formats: point matrices as CSV, trees and reports as JSON.
//!
//! Thresholds are written with 17 significant digits and parsed with correct
//! rounding, so a reloaded tree routes every point exactly as before.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use xclust::{CenterSet, Dataset, Node, NodeId, SplitRecord, ThresholdTree};

use crate::error::{CliError, CliResult};

pub const TREE_FORMAT_VERSION: u32 = 1;

fn read_matrix(path: &Path) -> CliResult<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::io(path, e))?;
    let header = reader.headers().map_err(|e| CliError::io(path, e))?.clone();
    for (i, name) in header.iter().enumerate() {
        if name != format!("x{i}") {
            return Err(CliError::io(
                path,
                format!("header column {i} is {name:?}, expected \"x{i}\""),
            ));
        }
    }
    if header.is_empty() {
        return Err(CliError::io(path, "header has no columns"));
    }
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::io(path, e))?;
        let row = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                field.parse::<f64>().map_err(|_| {
                    CliError::io(
                        path,
                        format!("row {}, column x{col}: {field:?} is not a number", line + 1),
                    )
                })
            })
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::io(path, "no rows"));
    }
    Ok(rows)
}

pub fn read_points(path: &Path) -> CliResult<Dataset> {
    Dataset::new(read_matrix(path)?).map_err(|e| CliError::io(path, e))
}

pub fn read_centers(path: &Path) -> CliResult<CenterSet> {
    CenterSet::new(read_matrix(path)?).map_err(|e| CliError::io(path, e))
}

pub fn write_matrix<'a>(
    path: &Path,
    dim: usize,
    rows: impl IntoIterator<Item = &'a [f64]>,
) -> CliResult<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| CliError::io(path, e))?;
    writer
        .write_record((0..dim).map(|i| format!("x{i}")))
        .map_err(|e| CliError::io(path, e))?;
    for row in rows {
        writer
            .write_record(row.iter().map(|v| v.to_string()))
            .map_err(|e| CliError::io(path, e))?;
    }
    writer.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_points(path: &Path, data: &Dataset) -> CliResult<()> {
    write_matrix(path, data.dim(), data.iter())
}

pub fn write_centers(path: &Path, centers: &CenterSet) -> CliResult<()> {
    write_matrix(path, centers.dim(), centers.iter())
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::io(path, e))?;
    out.write_all(b"\n")
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io(path, e))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_reader(std::io::BufReader::new(file)).map_err(|e| CliError::io(path, e))
}

/// 17 significant digits in scientific notation; always a valid JSON number.
pub fn full_precision(x: f64) -> Box<RawValue> {
    RawValue::from_string(format!("{x:.16e}")).expect("formatted float is valid JSON")
}

#[derive(Serialize)]
#[serde(untagged)]
enum NodeOut {
    Split {
        id: usize,
        dim: usize,
        threshold: Box<RawValue>,
        left: usize,
        right: usize,
    },
    Leaf {
        id: usize,
        center: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub node: usize,
    pub dim: usize,
    pub threshold: f64,
    pub left_centers: usize,
    pub right_centers: usize,
    pub squared_diameter: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mistakes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub correct_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub correct_cost: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub margin_measure: Option<f64>,
}

impl From<&SplitRecord> for AuditEntry {
    fn from(r: &SplitRecord) -> Self {
        AuditEntry {
            node: r.node.0,
            dim: r.dim,
            threshold: r.threshold,
            left_centers: r.left_centers,
            right_centers: r.right_centers,
            squared_diameter: r.squared_diameter,
            mistakes: r.mistakes,
            correct_points: r.correct_points,
            correct_cost: r.correct_cost,
            margin_measure: r.margin_measure,
        }
    }
}

impl From<&AuditEntry> for SplitRecord {
    fn from(a: &AuditEntry) -> Self {
        SplitRecord {
            node: NodeId(a.node),
            dim: a.dim,
            threshold: a.threshold,
            left_centers: a.left_centers,
            right_centers: a.right_centers,
            squared_diameter: a.squared_diameter,
            mistakes: a.mistakes,
            correct_points: a.correct_points,
            correct_cost: a.correct_cost,
            margin_measure: a.margin_measure,
        }
    }
}

#[derive(Serialize)]
struct TreeFileOut {
    format_version: u32,
    k: usize,
    d: usize,
    root: usize,
    nodes: Vec<NodeOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    audit: Vec<AuditEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitIn {
    id: usize,
    dim: usize,
    threshold: f64,
    left: usize,
    right: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LeafIn {
    id: usize,
    center: usize,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NodeIn {
    Split(SplitIn),
    Leaf(LeafIn),
}

#[derive(Deserialize)]
struct TreeFileIn {
    format_version: u32,
    k: usize,
    d: usize,
    root: usize,
    nodes: Vec<NodeIn>,
    #[serde(default)]
    audit: Vec<AuditEntry>,
}

pub fn tree_to_json(tree: &ThresholdTree) -> String {
    let nodes = tree
        .nodes()
        .iter()
        .enumerate()
        .map(|(id, node)| match *node {
            Node::Split {
                dim,
                threshold,
                left,
                right,
            } => NodeOut::Split {
                id,
                dim,
                threshold: full_precision(threshold),
                left: left.0,
                right: right.0,
            },
            Node::Leaf { center } => NodeOut::Leaf { id, center },
        })
        .collect();
    let file = TreeFileOut {
        format_version: TREE_FORMAT_VERSION,
        k: tree.k(),
        d: tree.dim(),
        root: tree.root().0,
        nodes,
        audit: tree.audit().iter().map(AuditEntry::from).collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("tree serializes");
    s.push('\n');
    s
}

pub fn tree_from_json(text: &str) -> Result<ThresholdTree, String> {
    let file: TreeFileIn = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if file.format_version != TREE_FORMAT_VERSION {
        return Err(format!(
            "unsupported format_version {}, expected {TREE_FORMAT_VERSION}",
            file.format_version
        ));
    }
    let mut slots: Vec<Option<Node>> = vec![None; file.nodes.len()];
    for node in file.nodes {
        let (id, node) = match node {
            NodeIn::Split(s) => (
                s.id,
                Node::Split {
                    dim: s.dim,
                    threshold: s.threshold,
                    left: NodeId(s.left),
                    right: NodeId(s.right),
                },
            ),
            NodeIn::Leaf(l) => (l.id, Node::Leaf { center: l.center }),
        };
        let slot = slots
            .get_mut(id)
            .ok_or_else(|| format!("node id {id} out of range"))?;
        if slot.replace(node).is_some() {
            return Err(format!("node id {id} appears twice"));
        }
    }
    let nodes: Vec<Node> = slots
        .into_iter()
        .map(|n| n.expect("ids cover 0..len"))
        .collect();
    let tree = ThresholdTree::from_parts(nodes, NodeId(file.root), file.k, file.d)
        .map_err(|e| e.to_string())?;
    Ok(tree.with_audit(file.audit.iter().map(SplitRecord::from).collect()))
}

pub fn write_tree(path: &Path, tree: &ThresholdTree) -> CliResult<()> {
    std::fs::write(path, tree_to_json(tree)).map_err(|e| CliError::io(path, e))
}

pub fn read_tree(path: &Path) -> CliResult<ThresholdTree> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    tree_from_json(&text).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_tree() -> ThresholdTree {
        ThresholdTree::from_parts(
            vec![
                Node::Split {
                    dim: 1,
                    threshold: 0.1 + 0.2,
                    left: NodeId(2),
                    right: NodeId(1),
                },
                Node::Leaf { center: 0 },
                Node::Split {
                    dim: 0,
                    threshold: -1e-300,
                    left: NodeId(3),
                    right: NodeId(4),
                },
                Node::Leaf { center: 2 },
                Node::Leaf { center: 1 },
            ],
            NodeId(0),
            3,
            2,
        )
        .unwrap()
    }

    #[test]
    fn tree_round_trip_is_exact() {
        let tree = sample_tree();
        let text = tree_to_json(&tree);
        assert!(text.contains("3.0000000000000004e-1"));
        assert_eq!(tree_from_json(&text).unwrap(), tree);
    }

    #[test]
    fn thresholds_survive_many_random_values() {
        let mut x = 0.123456789f64;
        for i in 0..10_000 {
            x = (x * 997.0 + i as f64).sin() * 10f64.powi((i % 40) - 20);
            let raw = full_precision(x);
            let back: f64 = serde_json::from_str(raw.get()).unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{}", raw.get());
        }
    }

    #[test]
    fn rejects_malformed_trees() {
        let good = tree_to_json(&sample_tree());
        let cases = [
            good.replace("\"format_version\": 1", "\"format_version\": 2"),
            good.replace("\"center\": 2", "\"center\": 1"),
            good.replace("\"id\": 4", "\"id\": 3"),
            good.replace("\"id\": 4", "\"id\": 9"),
            good.replace("\"root\": 0", "\"root\": 2"),
            good.replace("\"d\": 2", "\"d\": 1"),
            "{}".to_string(),
        ];
        for case in cases {
            assert!(tree_from_json(&case).is_err(), "{case}");
        }
    }

    #[test]
    fn audit_round_trips() {
        let rec = SplitRecord {
            node: NodeId(0),
            dim: 1,
            threshold: 0.3,
            left_centers: 2,
            right_centers: 1,
            squared_diameter: 2.5,
            mistakes: Some(3),
            correct_points: Some(10),
            correct_cost: Some(1.25),
            margin_measure: None,
        };
        let tree = sample_tree().with_audit(vec![rec.clone()]);
        let back = tree_from_json(&tree_to_json(&tree)).unwrap();
        assert_eq!(back.audit(), &[rec]);
    }

    #[test]
    fn csv_round_trip_and_validation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        let data = Dataset::new(vec![vec![0.1, -2.0], vec![1e-300, 3.5e10]]).unwrap();
        write_points(&path, &data).unwrap();
        assert_eq!(read_points(&path).unwrap(), data);

        let bad = [
            "a,b\n1,2\n",
            "x0,x1\n1,2\n3\n",
            "x0,x1\n1,zz\n",
            "x0,x1\n",
            "x0,x1\n1,inf\n",
        ];
        for text in bad {
            std::fs::write(&path, text).unwrap();
            let err = read_points(&path).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text:?}");
        }
    }
}
