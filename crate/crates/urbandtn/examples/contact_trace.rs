//! Two stationary radios and one vehicle driving past: watch neighbor
//! tables open and close contacts, and read the resulting contact trace.
//!
//! ```bash
//! cargo run -p urbandtn --example contact_trace
//! ```

use std::collections::BTreeMap;

use urbandtn::config::{GroupSpec, MovementModel, ProtocolKind};
use urbandtn::geo::GeoPoint;
use urbandtn::mobility::AgentState;
use urbandtn::routing::{close_open_contacts, find_neighbors};

fn stationary(id: &str, lon: f64, tx_range_m: f64) -> AgentState {
    let group = GroupSpec {
        group_id: "G1".into(),
        label: id[..1].to_string(),
        paths: vec![1],
        num_hosts: 1,
        tx_range_m,
        buffer_size: 0,
        speed_kmh: 0.0,
        mobile: false,
        movement_model: MovementModel::Stationary,
        junction_delay_s: 0.0,
        color: "yellow".into(),
        protocol: ProtocolKind::Epidemic,
        restricted_to: None,
    };
    AgentState::from_group(id.to_string(), &group, 0, 1, 0, GeoPoint::new(0.0, lon))
}

fn main() {
    // R1 at lon 0, R2 400 m east; the rover drives west to east through both
    // 50 m transmission disks at ~11 m per tick.
    let mut agents = vec![
        stationary("R1", 0.0, 50.0),
        stationary("R2", 0.0036, 50.0),
        stationary("V1", -0.0018, 50.0),
    ];

    let tick_h = 1.0 / 3600.0; // 1 s ticks for readable stamps
    let lon_per_tick = 0.0001; // ~11 m
    println!("tick  rover_lon   R1 sees        R2 sees");
    for tick in 0..80u64 {
        let now = tick as f64 * tick_h;
        agents[2].curr_geo_pos.lon += lon_per_tick;
        for i in 0..agents.len() {
            find_neighbors(&mut agents, i, now);
        }
        if tick % 8 == 0 {
            let fmt = |t: &BTreeMap<String, urbandtn::routing::NeighborEntry>| {
                if t.is_empty() {
                    "-".to_string()
                } else {
                    t.iter().map(|(k, e)| format!("{k}@{:.0}m", e.distance_km * 1000.0)).collect::<Vec<_>>().join(",")
                }
            };
            println!(
                "{tick:>4}  {:>9.4}   {:<13} {}",
                agents[2].curr_geo_pos.lon,
                fmt(&agents[0].protocol.neighbor_table),
                fmt(&agents[1].protocol.neighbor_table),
            );
        }
    }
    close_open_contacts(&mut agents, 80.0 * tick_h);

    println!("\ncontact traces (neighbor, entry, exit):");
    for agent in &agents {
        println!("  {}:", agent.obj_id);
        for c in &agent.protocol.contact_log {
            println!("    {} {} {}", c.neighbor, c.ts_entry, c.ts_exit);
        }
    }
}
