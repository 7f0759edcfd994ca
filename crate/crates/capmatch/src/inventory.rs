//! The node fleet: capacity ratios, class labels, and the fleet file format.
//!
//! A fleet file is UTF-8 text with one record per line,
//! `id,capacity_pct[,class_label]`. Lines starting with `#` are comments and
//! blank lines are ignored. When the class column is missing it is filled in
//! by [`Fleet::derive_classes`]; explicit labels always win.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// One cluster machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Node {
    pub id: u32,
    /// Computational capacity as a percentage of the fleet's best node.
    pub capacity_pct: u32,
    /// 1-based class label; nodes of equal capacity share a class.
    pub class_label: u32,
}

/// The pool of currently available nodes.
///
/// Node order follows the source file; identity is keyed by node id, so
/// equality ignores ordering. Fleets are immutable after construction and
/// safe to share across concurrent solver runs.
#[derive(Debug, Clone)]
pub struct Fleet {
    nodes: Vec<Node>,
    by_id: HashMap<u32, usize>,
}

impl Fleet {
    /// Validates ids (positive, unique), capacities (1..=100) and class
    /// labels (positive).
    pub fn new(nodes: Vec<Node>) -> Result<Self> {
        let mut by_id = HashMap::with_capacity(nodes.len());
        for (pos, node) in nodes.iter().enumerate() {
            if node.id == 0 {
                return Err(Error::ZeroNodeId);
            }
            if !(1..=100).contains(&node.capacity_pct) {
                return Err(Error::CapacityOutOfRange {
                    id: node.id,
                    capacity: i64::from(node.capacity_pct),
                });
            }
            if node.class_label == 0 {
                return Err(Error::ZeroClassLabel { id: node.id });
            }
            if by_id.insert(node.id, pos).is_some() {
                return Err(Error::DuplicateId { id: node.id });
            }
        }
        Ok(Self { nodes, by_id })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: u32) -> Option<&Node> {
        self.by_id.get(&id).map(|&pos| &self.nodes[pos])
    }

    pub fn capacity_of(&self, id: u32) -> Result<u32> {
        self.node(id)
            .map(|n| n.capacity_pct)
            .ok_or(Error::UnknownNode { id })
    }

    /// Node ids in fleet order.
    pub fn ids(&self) -> Vec<u32> {
        self.nodes.iter().map(|n| n.id).collect()
    }

    /// Relabels classes by exact capacity equality: label 1 for the highest
    /// capacity, 2 for the next distinct one, and so on. Existing labels are
    /// overwritten, which makes the operation idempotent.
    pub fn derive_classes(&self) -> Fleet {
        let mut caps: Vec<u32> = self.nodes.iter().map(|n| n.capacity_pct).collect();
        caps.sort_unstable_by(|a, b| b.cmp(a));
        caps.dedup();
        let nodes = self
            .nodes
            .iter()
            .map(|n| Node {
                class_label: caps.iter().position(|&c| c == n.capacity_pct).unwrap() as u32 + 1,
                ..*n
            })
            .collect();
        Fleet {
            nodes,
            by_id: self.by_id.clone(),
        }
    }

    /// The fleet minus the given nodes, preserving the order of the rest.
    /// Models nodes already assigned elsewhere. Errors on unknown ids.
    pub fn availability_subset(&self, excluded_ids: &[u32]) -> Result<Fleet> {
        for &id in excluded_ids {
            if !self.by_id.contains_key(&id) {
                return Err(Error::UnknownNode { id });
            }
        }
        let excluded: HashSet<u32> = excluded_ids.iter().copied().collect();
        Fleet::new(
            self.nodes
                .iter()
                .filter(|n| !excluded.contains(&n.id))
                .copied()
                .collect(),
        )
    }
}

impl PartialEq for Fleet {
    fn eq(&self, other: &Self) -> bool {
        if self.nodes.len() != other.nodes.len() {
            return false;
        }
        let sorted = |fleet: &Fleet| {
            let mut v: Vec<Node> = fleet.nodes.clone();
            v.sort_by_key(|n| n.id);
            v
        };
        sorted(self) == sorted(other)
    }
}

impl Eq for Fleet {}

/// A per-line problem found while checking a fleet file. `line` is 1-based;
/// file-level problems (such as an empty file) report line 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

struct RawRecord {
    id: u32,
    capacity: i64,
    class: Option<u32>,
}

/// Data lines of a fleet file with their 1-based line numbers; comments and
/// blank lines are skipped.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

fn parse_record(line: &str) -> std::result::Result<RawRecord, String> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if fields.len() < 2 || fields.len() > 3 {
        return Err(format!(
            "expected `id,capacity_pct[,class_label]`, found {} field(s)",
            fields.len()
        ));
    }
    let id: u32 = fields[0]
        .parse()
        .map_err(|_| format!("node id `{}` is not a valid integer", fields[0]))?;
    let capacity: i64 = fields[1]
        .parse()
        .map_err(|_| format!("capacity `{}` is not a valid integer", fields[1]))?;
    let class = match fields.get(2) {
        None => None,
        Some(raw) => Some(
            raw.parse::<u32>()
                .map_err(|_| format!("class label `{}` is not a valid integer", raw))?,
        ),
    };
    Ok(RawRecord {
        id,
        capacity,
        class,
    })
}

/// Parses a fleet from text, failing on the first problem. Records missing
/// the class column get derived labels; explicit labels override derivation.
pub fn load_fleet_str(text: &str) -> Result<Fleet> {
    let mut records = Vec::new();
    for (line, raw) in data_lines(text) {
        let record = parse_record(raw).map_err(|message| Error::Parse { line, message })?;
        if !(1..=100).contains(&record.capacity) {
            return Err(Error::CapacityOutOfRange {
                id: record.id,
                capacity: record.capacity,
            });
        }
        records.push(record);
    }
    if records.is_empty() {
        return Err(Error::EmptyFleet);
    }
    let provisional = records
        .iter()
        .map(|r| Node {
            id: r.id,
            capacity_pct: r.capacity as u32,
            class_label: r.class.unwrap_or(1),
        })
        .collect();
    let fleet = Fleet::new(provisional)?;
    if records.iter().all(|r| r.class.is_some()) {
        return Ok(fleet);
    }
    let derived = fleet.derive_classes();
    let nodes = derived
        .nodes
        .iter()
        .zip(&records)
        .map(|(node, record)| Node {
            class_label: record.class.unwrap_or(node.class_label),
            ..*node
        })
        .collect();
    Fleet::new(nodes)
}

pub fn load_fleet<R: Read>(mut reader: R) -> Result<Fleet> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    load_fleet_str(&text)
}

pub fn load_fleet_path<P: AsRef<Path>>(path: P) -> Result<Fleet> {
    load_fleet_str(&fs::read_to_string(path)?)
}

/// Writes the fleet file format with the class column always present and
/// records sorted by id.
pub fn save_fleet<W: Write>(fleet: &Fleet, mut writer: W) -> std::io::Result<()> {
    writeln!(writer, "# id,capacity_pct,class_label")?;
    let mut nodes: Vec<&Node> = fleet.nodes().iter().collect();
    nodes.sort_by_key(|n| n.id);
    for node in nodes {
        writeln!(writer, "{},{},{}", node.id, node.capacity_pct, node.class_label)?;
    }
    Ok(())
}

pub fn save_fleet_path<P: AsRef<Path>>(fleet: &Fleet, path: P) -> std::io::Result<()> {
    let mut file = fs::File::create(path)?;
    save_fleet(fleet, &mut file)
}

/// Lenient check of a fleet file: collects every problem instead of failing
/// at the first one. An empty result means the file is clean.
pub fn validate_fleet_str(text: &str) -> Vec<Diagnostic> {
    let mut problems = Vec::new();
    let mut seen: HashMap<u32, usize> = HashMap::new();
    let mut records = 0usize;
    for (line, raw) in data_lines(text) {
        records += 1;
        let record = match parse_record(raw) {
            Ok(record) => record,
            Err(message) => {
                problems.push(Diagnostic { line, message });
                continue;
            }
        };
        if record.id == 0 {
            problems.push(Diagnostic {
                line,
                message: "node id must be positive".into(),
            });
        } else if let Some(first) = seen.insert(record.id, line) {
            problems.push(Diagnostic {
                line,
                message: format!("duplicate node id {} (first seen on line {first})", record.id),
            });
        }
        if !(1..=100).contains(&record.capacity) {
            problems.push(Diagnostic {
                line,
                message: format!("capacity {}% is outside 1..=100", record.capacity),
            });
        }
        if record.class == Some(0) {
            problems.push(Diagnostic {
                line,
                message: "class label must be positive".into(),
            });
        }
    }
    if records == 0 {
        problems.push(Diagnostic {
            line: 0,
            message: "fleet file contains no node records".into(),
        });
    }
    problems
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEN_NODE_FILE: &str = "\
# ten heterogeneous nodes
1,80
2,90
3,100
4,100
5,90
6,90
7,50
8,80
9,50
10,70
";

    fn fleet_of(capacities: &[u32]) -> Fleet {
        Fleet::new(
            capacities
                .iter()
                .enumerate()
                .map(|(i, &c)| Node {
                    id: i as u32 + 1,
                    capacity_pct: c,
                    class_label: 1,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn loads_explicit_class_labels() {
        let fleet = load_fleet_str("1,80,2\n2,90,2\n3,100,1\n4,100,1\n5,90,2\n").unwrap();
        assert_eq!(fleet.len(), 5);
        let third = fleet.node(3).unwrap();
        assert_eq!(third.capacity_pct, 100);
        assert_eq!(third.class_label, 1);
        assert_eq!(fleet.node(1).unwrap().class_label, 2);
    }

    #[test]
    fn loads_ten_node_example() {
        let fleet = load_fleet_str(TEN_NODE_FILE).unwrap();
        assert_eq!(fleet.len(), 10);
        let caps: Vec<u32> = (1..=10).map(|id| fleet.capacity_of(id).unwrap()).collect();
        assert_eq!(caps, [80, 90, 100, 100, 90, 90, 50, 80, 50, 70]);
    }

    #[test]
    fn rejects_duplicate_ids() {
        let err = load_fleet_str("7,50\n7,60\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateId { id: 7 }));
    }

    #[test]
    fn rejects_out_of_range_capacity() {
        assert!(matches!(
            load_fleet_str("1,150\n").unwrap_err(),
            Error::CapacityOutOfRange { id: 1, capacity: 150 }
        ));
        assert!(matches!(
            load_fleet_str("1,0\n").unwrap_err(),
            Error::CapacityOutOfRange { id: 1, capacity: 0 }
        ));
    }

    #[test]
    fn rejects_malformed_lines_with_line_numbers() {
        let err = load_fleet_str("1,80\n\n# comment\ntwo,90\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_empty_input() {
        assert!(matches!(load_fleet_str("").unwrap_err(), Error::EmptyFleet));
        assert!(matches!(
            load_fleet_str("# nothing here\n\n").unwrap_err(),
            Error::EmptyFleet
        ));
    }

    #[test]
    fn missing_class_column_is_derived_explicit_wins() {
        // 90 would derive to class 2; the explicit 7 must survive.
        let fleet = load_fleet_str("1,100\n2,90,7\n3,80\n").unwrap();
        assert_eq!(fleet.node(1).unwrap().class_label, 1);
        assert_eq!(fleet.node(2).unwrap().class_label, 7);
        assert_eq!(fleet.node(3).unwrap().class_label, 3);
    }

    #[test]
    fn derive_classes_groups_by_exact_capacity() {
        let fleet = fleet_of(&[100, 100, 90, 80]).derive_classes();
        let labels: Vec<u32> = fleet.nodes().iter().map(|n| n.class_label).collect();
        assert_eq!(labels, [1, 1, 2, 3]);
    }

    #[test]
    fn derive_classes_singleton() {
        let fleet = fleet_of(&[75]).derive_classes();
        assert_eq!(fleet.nodes()[0].class_label, 1);
    }

    #[test]
    fn derive_classes_descending_capacity_order() {
        let fleet = fleet_of(&[80, 90, 100, 100, 90]).derive_classes();
        let labels: Vec<u32> = fleet.nodes().iter().map(|n| n.class_label).collect();
        assert_eq!(labels, [3, 2, 1, 1, 2]);
    }

    #[test]
    fn derive_classes_is_idempotent() {
        let once = fleet_of(&[50, 70, 70, 100]).derive_classes();
        let twice = once.derive_classes();
        assert_eq!(once, twice);
    }

    #[test]
    fn availability_subset_cases() {
        let fleet = load_fleet_str(TEN_NODE_FILE).unwrap();
        assert_eq!(fleet.availability_subset(&[]).unwrap(), fleet);
        let rest = fleet.availability_subset(&[1, 2, 3, 4, 5, 6, 7]).unwrap();
        assert_eq!(rest.ids(), [8, 9, 10]);
        assert!(matches!(
            fleet.availability_subset(&[99]).unwrap_err(),
            Error::UnknownNode { id: 99 }
        ));
        // input untouched
        assert_eq!(fleet.len(), 10);
    }

    #[test]
    fn save_then_load_roundtrips() {
        let fleet = load_fleet_str(TEN_NODE_FILE).unwrap();
        let mut buf = Vec::new();
        save_fleet(&fleet, &mut buf).unwrap();
        let reloaded = load_fleet_str(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(fleet, reloaded);
    }

    #[test]
    fn validate_reports_all_problems() {
        let text = "1,80\nbogus\n2,150\n1,70\n3,90,0\n";
        let problems = validate_fleet_str(text);
        let lines: Vec<usize> = problems.iter().map(|d| d.line).collect();
        assert_eq!(lines, [2, 3, 4, 5]);
        assert!(problems[1].message.contains("150"));
        assert!(problems[2].message.contains("duplicate"));
    }

    #[test]
    fn validate_clean_and_empty_files() {
        assert!(validate_fleet_str(TEN_NODE_FILE).is_empty());
        let problems = validate_fleet_str("# only a comment\n");
        assert_eq!(problems.len(), 1);
        assert_eq!(problems[0].line, 0);
        assert!(problems[0].message.contains("no node records"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_fleet() -> impl Strategy<Value = Fleet> {
            proptest::collection::btree_map(1u32..500, (1u32..=100, 1u32..20), 1..40).prop_map(
                |entries| {
                    Fleet::new(
                        entries
                            .into_iter()
                            .map(|(id, (cap, class))| Node {
                                id,
                                capacity_pct: cap,
                                class_label: class,
                            })
                            .collect(),
                    )
                    .unwrap()
                },
            )
        }

        proptest! {
            #[test]
            fn roundtrip_identity(fleet in arb_fleet()) {
                let mut buf = Vec::new();
                save_fleet(&fleet, &mut buf).unwrap();
                let reloaded = load_fleet_str(std::str::from_utf8(&buf).unwrap()).unwrap();
                prop_assert_eq!(&fleet, &reloaded);
            }

            #[test]
            fn derivation_idempotent_and_capacity_keyed(fleet in arb_fleet()) {
                let derived = fleet.derive_classes();
                prop_assert_eq!(&derived, &derived.derive_classes());
                for a in derived.nodes() {
                    for b in derived.nodes() {
                        prop_assert_eq!(
                            a.class_label == b.class_label,
                            a.capacity_pct == b.capacity_pct
                        );
                    }
                }
            }
        }
    }
}
