//! Walk one agent of every movement model over the sample town and compare
//! how much of the map each model explores.
//!
//! ```bash
//! cargo run -p urbandtn --example mobility_tour
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use urbandtn::config::{GroupSpec, MovementModel, ProtocolKind};
use urbandtn::graph::build_graph;
use urbandtn::map::{normalize_map, parse_osm};
use urbandtn::mobility::{compute_initial_node, AgentState, TickParams};
use urbandtn::routing::{BufferEntry, Message};

fn main() {
    let map_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/sample/maps/town.osm");
    let path_types: BTreeMap<String, i64> =
        [("footpath".to_string(), 1), ("remote".to_string(), 2), ("highway".to_string(), 3)]
            .into_iter()
            .collect();
    let parsed = parse_osm(&map_path, &path_types).expect("sample map parses");
    let graph = build_graph(&normalize_map(&parsed.tables));
    println!(
        "town graph: {} vertices, {} edges\n",
        graph.vertex_count(),
        graph.edge_count()
    );

    let models = [
        MovementModel::Stationary,
        MovementModel::SimpleRandom,
        MovementModel::PathType,
        MovementModel::PathMemory,
        MovementModel::Restricted,
        MovementModel::Wait,
    ];

    let step_km = 0.005; // 5 m per tick at 36 km/h and 0.5 s ticks
    let tick_s = 0.5;
    let ticks = 2000;

    for model in models {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let allowed = vec![2, 3]; // remote roads and highways
        let group = GroupSpec {
            group_id: "G1".into(),
            label: "A".into(),
            paths: allowed.clone(),
            num_hosts: 1,
            tx_range_m: 30.0,
            buffer_size: 0,
            speed_kmh: 36.0,
            mobile: model != MovementModel::Stationary,
            movement_model: model,
            junction_delay_s: 0.0,
            color: "red".into(),
            protocol: ProtocolKind::Epidemic,
            restricted_to: None,
        };
        let start = compute_initial_node(model, &graph, &allowed, &mut rng)
            .expect("feasible start vertex");
        let mut agent = AgentState::from_group(
            "A1".into(),
            &group,
            1,
            3,
            start,
            graph.vertex_position(start).unwrap(),
        );

        // Restricted and Wait change behavior only while carrying data.
        if matches!(model, MovementModel::Restricted | MovementModel::Wait) {
            agent.buffer.push(BufferEntry {
                message: Message {
                    msg_id: "E1".into(),
                    payload: vec![0; 5],
                    origin_obj: "S1".into(),
                    created_h: 0.0,
                },
                received_from: "S1".into(),
                received_at_h: 0.0,
            });
        }

        let mut waited = 0u32;
        for tick in 0..ticks {
            if agent.wait_flag {
                waited += 1;
                // A real run would release the agent through a data
                // transfer; mimic one every 50 ticks so the tour continues.
                if waited.is_multiple_of(50) {
                    agent.wait_flag = false;
                    agent.resume_pending = true;
                }
            }
            let params = TickParams { step_km, tick_s, now_h: 0.0, tick };
            agent.update_position(&graph, params, &mut rng, None);
        }

        let distinct: BTreeSet<i64> = agent.ways_visited.iter().copied().collect();
        println!(
            "{:<13} start {:>3}  traversals {:>4}  distinct edges {:>2}/{}  ticks waited {:>4}  time traveled {:>6.0} s",
            format!("{model:?}"),
            start,
            agent.ways_visited.len(),
            distinct.len(),
            graph.edge_count(),
            waited,
            agent.time_traveled_s
        );
    }
}
