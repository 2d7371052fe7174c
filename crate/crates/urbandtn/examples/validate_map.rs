//! Parse an OSM extract, split ways at intersections, and inspect the
//! resulting road graph.
//!
//! ```bash
//! cargo run -p urbandtn --example validate_map
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use urbandtn::geo::make_projection;
use urbandtn::graph::build_graph;
use urbandtn::map::{apply_projection, export_ways_text, normalize_map, parse_osm};

fn main() {
    let map_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/sample/maps/town.osm");
    let path_types: BTreeMap<String, i64> =
        [("footpath".to_string(), 1), ("remote".to_string(), 2), ("highway".to_string(), 3)]
            .into_iter()
            .collect();

    let parsed = parse_osm(&map_path, &path_types).expect("sample map parses");
    println!(
        "raw: {} nodes, {} ways ({} dropped for unknown class, {} too short)",
        parsed.tables.nodes.len(),
        parsed.tables.ways.len(),
        parsed.dropped_no_class,
        parsed.dropped_short
    );

    let mut normalized = normalize_map(&parsed.tables);
    println!(
        "normalized: {} junction-to-junction segments, total {:.4} km",
        normalized.ways.len(),
        normalized.total_length_km()
    );

    let graph = build_graph(&normalized);
    println!("graph: {} vertices, {} edges", graph.vertex_count(), graph.edge_count());

    // Optional projected-coordinate export (north up on a 650x640 canvas).
    if let Some(bounds) = normalized.bounds {
        let spec = make_projection(bounds, (650.0, 640.0)).expect("bounds are non-degenerate");
        apply_projection(&mut normalized, &spec);
        let corner = normalized.nodes.values().next().unwrap();
        println!(
            "projected sample: node {} -> (y, x) = {:?}",
            corner.node_id,
            corner.projected.unwrap()
        );
    }

    println!("\nedge list (a b e_type weight_km way_id):");
    print!("{}", graph.export_edge_list());

    println!("way dump (id type length_km nodes...):");
    print!("{}", export_ways_text(&normalized));
}
