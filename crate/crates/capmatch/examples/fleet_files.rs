//! Fleet files end to end: parsing, validation diagnostics, class labels,
//! and carving out the currently available subset.
//!
//! ```bash
//! cargo run -p capmatch --example fleet_files
//! ```

use capmatch::inventory::{load_fleet_str, save_fleet, validate_fleet_str};

fn main() -> capmatch::Result<()> {
    // One record per line: id,capacity_pct[,class_label]. Missing class
    // labels are derived from capacity equality; explicit ones win.
    let text = "\
# machine room, capacities relative to node 3
1,80
2,90
3,100
4,100,1
5,90
";
    let fleet = load_fleet_str(text)?;
    println!("loaded {} nodes:", fleet.len());
    for node in fleet.nodes() {
        println!(
            "  node {:>2}: capacity {:>3}%  class {}",
            node.id, node.capacity_pct, node.class_label
        );
    }

    // Re-deriving classes overwrites labels with capacity-equality groups.
    let relabeled = fleet.derive_classes();
    let labels: Vec<u32> = relabeled.nodes().iter().map(|n| n.class_label).collect();
    println!("derived class labels: {labels:?}");

    // Nodes 1 and 2 are busy elsewhere; solve over the rest.
    let available = fleet.availability_subset(&[1, 2])?;
    println!("available ids after excluding 1 and 2: {:?}", available.ids());

    // Saving always emits the class column, sorted by id.
    let mut saved = Vec::new();
    save_fleet(&relabeled, &mut saved)?;
    print!("saved file:\n{}", String::from_utf8_lossy(&saved));

    // The lenient checker reports every problem instead of stopping early.
    let broken = "1,80\n1,90\n2,150\noops\n";
    println!("problems in a broken file:");
    for problem in validate_fleet_str(broken) {
        println!("  line {}: {}", problem.line, problem.message);
    }
    Ok(())
}
