//! Run the bundled sample town scenario end to end and read the results.
//!
//! Equivalent to:
//!
//! ```bash
//! urbandtn --config scenarios/sample/sim.config --seed 7
//! ```
//!
//! ```bash
//! cargo run -p urbandtn --example full_run
//! ```

use std::path::Path;

use urbandtn::engine::{run_many, RunOptions};
use urbandtn::report::parse_event_log;

fn main() {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/sample/sim.config");
    let report_dir = std::env::temp_dir().join("urbandtn_full_run_example");
    let _ = std::fs::remove_dir_all(&report_dir);

    let options = RunOptions {
        report_dir_override: Some(report_dir.clone()),
        ..Default::default()
    };
    let outcome = run_many(&config, 7, &options).expect("scenario runs");

    for s in &outcome.summaries {
        println!(
            "run {}: {} events, {} delivered (ratio {:.3}), {} transfers, mean latency {}",
            s.run_index,
            s.events_generated,
            s.events_delivered,
            s.delivery_ratio,
            s.total_transfers,
            match s.mean_delivery_latency_h {
                Some(l) => format!("{:.1} s", l * 3600.0),
                None => "-".to_string(),
            }
        );
    }
    for (run, err) in &outcome.failures {
        eprintln!("run {run} failed: {err}");
    }

    println!("\nreport tree at {}:", report_dir.display());
    let mut entries: Vec<_> = std::fs::read_dir(&report_dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    entries.sort();
    for path in entries {
        println!("  {}", path.file_name().unwrap().to_string_lossy());
    }

    // Read one event log back to show the custody chain.
    let events_dir = report_dir.join("events");
    if let Some(first) = std::fs::read_dir(&events_dir).unwrap().next() {
        let path = first.unwrap().path();
        let rec = parse_event_log(&path).expect("event log parses");
        println!(
            "\n{}: delivered={} custody chain {}",
            path.file_name().unwrap().to_string_lossy(),
            rec.delivered,
            rec.handler_trace.join(" -> ")
        );
    }
}
