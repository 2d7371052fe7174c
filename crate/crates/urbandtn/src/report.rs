//! Report-tree creation and log emission.
//!
//! Layout under the report directory, with `<run>` the run index:
//!
//! ```text
//! <base>/
//!   summary_<run>.dat        # run totals, key value per line
//!   summary_<run>.json       # machine-readable mirror of the same
//!   <obj_id>/
//!     contacts_<run>.dat     # neighbor ts_entry ts_exit
//!     ways_<run>.dat         # one traversed way id per line
//!     messages_<run>.dat     # msg_id received_from received_at
//!     summary_<run>.dat      # one-line per-agent totals
//!   events/
//!     <e_id>_<run>.dat       # one line per event, see EventLogRecord
//! ```
//!
//! Records are single-space separated, one per line, UTF-8. Timestamps are
//! HH:MM:SS with seconds truncated toward zero (the hours field may exceed
//! 23), so parse-back agrees with the in-memory clock to within one second.
//! Every file parses back via the `parse_*` functions below.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::events::Event;
use crate::mobility::AgentState;
use crate::routing::ContactRecord;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("io failure at {path}: {source}")]
    IoFailure { path: PathBuf, source: std::io::Error },
    #[error("{path}: line {line}: cannot parse record: {detail}")]
    MalformedRecord { path: PathBuf, line: usize, detail: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ReportError + '_ {
    move |source| ReportError::IoFailure { path: path.to_path_buf(), source }
}

/// Hours -> zero-padded `HH:MM:SS`, seconds truncated toward zero. No day
/// wrap: 25.0 renders as `25:00:00`.
pub fn convert_hms(hours: f64) -> String {
    assert!(hours >= 0.0, "convert_hms takes nonnegative hours");
    let total = (hours * 3600.0).floor() as u64;
    format!("{:02}:{:02}:{:02}", total / 3600, (total % 3600) / 60, total % 60)
}

/// Inverse of [`convert_hms`] up to the one-second truncation.
pub fn hms_to_hours(stamp: &str) -> Option<f64> {
    let mut parts = stamp.split(':');
    let h: u64 = parts.next()?.parse().ok()?;
    let m: u64 = parts.next()?.parse().ok()?;
    let s: u64 = parts.next()?.parse().ok()?;
    if parts.next().is_some() || m > 59 || s > 59 {
        return None;
    }
    Some((h * 3600 + m * 60 + s) as f64 / 3600.0)
}

/// Aggregate metrics for one finished run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run_index: u32,
    pub events_generated: usize,
    pub events_delivered: usize,
    pub delivery_ratio: f64,
    pub total_transfers: usize,
    pub mean_delivery_latency_h: Option<f64>,
    pub per_agent_contacts: BTreeMap<String, usize>,
}

/// Per-agent totals as written to the agent's `summary_<run>.dat`.
#[derive(Debug, Clone, PartialEq)]
pub struct MovementSummary {
    pub obj_id: String,
    pub group_id: String,
    pub model: String,
    pub protocol: String,
    pub level: i64,
    pub contacts: usize,
    pub messages: usize,
    pub ways_traversed: usize,
    pub time_traveled_s: f64,
}

/// One buffer entry as written to `messages_<run>.dat`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageLogEntry {
    pub msg_id: String,
    pub received_from: String,
    pub received_at: String,
}

/// One event as written to `events/<e_id>_<run>.dat`.
#[derive(Debug, Clone, PartialEq)]
pub struct EventLogRecord {
    pub e_id: String,
    pub time: String,
    pub expiry: String,
    pub expired: bool,
    pub payload_hex: String,
    /// `-` in the file when the message never reached a depot.
    pub delivered_at: Option<String>,
    pub delivered: bool,
    pub handler_trace: Vec<String>,
}

/// Creates the report tree: base, one directory per agent, and `events/`.
pub fn create_report_directory(base: &Path, obj_ids: &[String]) -> Result<(), ReportError> {
    std::fs::create_dir_all(base).map_err(io_err(base))?;
    for id in obj_ids {
        let dir = base.join(id);
        std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    }
    let events = base.join("events");
    std::fs::create_dir_all(&events).map_err(io_err(&events))?;
    Ok(())
}

fn hex_encode(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes the four per-agent files for one finished run.
pub fn write_movement_log(agent: &AgentState, run_index: u32, base: &Path) -> Result<(), ReportError> {
    let dir = base.join(&agent.obj_id);

    let contacts_path = dir.join(format!("contacts_{run_index}.dat"));
    let mut contacts = String::new();
    for c in &agent.protocol.contact_log {
        contacts.push_str(&format!("{} {} {}\n", c.neighbor, c.ts_entry, c.ts_exit));
    }
    std::fs::write(&contacts_path, contacts).map_err(io_err(&contacts_path))?;

    let ways_path = dir.join(format!("ways_{run_index}.dat"));
    let mut ways = String::new();
    for w in &agent.ways_visited {
        ways.push_str(&format!("{w}\n"));
    }
    std::fs::write(&ways_path, ways).map_err(io_err(&ways_path))?;

    let messages_path = dir.join(format!("messages_{run_index}.dat"));
    let mut messages = String::new();
    for entry in &agent.buffer {
        messages.push_str(&format!(
            "{} {} {}\n",
            entry.message.msg_id,
            entry.received_from,
            convert_hms(entry.received_at_h)
        ));
    }
    std::fs::write(&messages_path, messages).map_err(io_err(&messages_path))?;

    let summary_path = dir.join(format!("summary_{run_index}.dat"));
    let summary = format!(
        "{} {} {} {} {} {} {} {} {}\n",
        agent.obj_id,
        agent.group_id,
        agent.movement_model.name(),
        agent.protocol.kind.name(),
        agent.protocol.level,
        agent.protocol.contact_log.len(),
        agent.buffer.len(),
        agent.ways_visited.len(),
        agent.time_traveled_s
    );
    std::fs::write(&summary_path, summary).map_err(io_err(&summary_path))?;
    Ok(())
}

/// Writes `events/<e_id>_<run>.dat` for one event.
pub fn write_event_log(event: &Event, run_index: u32, base: &Path) -> Result<(), ReportError> {
    let path = base.join("events").join(format!("{}_{run_index}.dat", event.e_id));
    let delivered_at = match event.delivered_at_h {
        Some(t) => convert_hms(t),
        None => "-".to_string(),
    };
    let line = format!(
        "{} {} {} {} {} {} {} {}\n",
        event.e_id,
        convert_hms(event.time_h),
        convert_hms(event.expiry_h),
        event.expired,
        hex_encode(&event.data),
        delivered_at,
        event.delivered(),
        event.handler_trace.join(",")
    );
    std::fs::write(&path, line).map_err(io_err(&path))?;
    Ok(())
}

/// Writes the run summary as key-value text plus its JSON mirror.
pub fn write_run_summary(summary: &RunSummary, base: &Path) -> Result<(), ReportError> {
    let dat_path = base.join(format!("summary_{}.dat", summary.run_index));
    let mut text = String::new();
    text.push_str(&format!("run_index {}\n", summary.run_index));
    text.push_str(&format!("events_generated {}\n", summary.events_generated));
    text.push_str(&format!("events_delivered {}\n", summary.events_delivered));
    text.push_str(&format!("delivery_ratio {}\n", summary.delivery_ratio));
    text.push_str(&format!("total_transfers {}\n", summary.total_transfers));
    match summary.mean_delivery_latency_h {
        Some(l) => text.push_str(&format!("mean_delivery_latency_h {l}\n")),
        None => text.push_str("mean_delivery_latency_h -\n"),
    }
    for (id, n) in &summary.per_agent_contacts {
        text.push_str(&format!("contacts {id} {n}\n"));
    }
    std::fs::write(&dat_path, text).map_err(io_err(&dat_path))?;

    let json_path = base.join(format!("summary_{}.json", summary.run_index));
    let json = serde_json::to_string_pretty(summary).expect("summary serializes");
    std::fs::write(&json_path, json + "\n").map_err(io_err(&json_path))?;
    Ok(())
}

fn read_lines(path: &Path) -> Result<Vec<String>, ReportError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    Ok(text.lines().map(|l| l.to_string()).collect())
}

fn malformed(path: &Path, line: usize, detail: &str) -> ReportError {
    ReportError::MalformedRecord {
        path: path.to_path_buf(),
        line,
        detail: detail.to_string(),
    }
}

/// Parses a `contacts_<run>.dat` file back into records.
pub fn parse_contacts(path: &Path) -> Result<Vec<ContactRecord>, ReportError> {
    let mut out = Vec::new();
    for (i, line) in read_lines(path)?.iter().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(malformed(path, i + 1, "expected 3 fields"));
        }
        out.push(ContactRecord {
            neighbor: fields[0].to_string(),
            ts_entry: fields[1].to_string(),
            ts_exit: fields[2].to_string(),
        });
    }
    Ok(out)
}

/// Parses a `ways_<run>.dat` file back into the traversal sequence.
pub fn parse_ways(path: &Path) -> Result<Vec<i64>, ReportError> {
    let mut out = Vec::new();
    for (i, line) in read_lines(path)?.iter().enumerate() {
        out.push(
            line.trim()
                .parse::<i64>()
                .map_err(|e| malformed(path, i + 1, &e.to_string()))?,
        );
    }
    Ok(out)
}

/// Parses a `messages_<run>.dat` file.
pub fn parse_messages(path: &Path) -> Result<Vec<MessageLogEntry>, ReportError> {
    let mut out = Vec::new();
    for (i, line) in read_lines(path)?.iter().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(malformed(path, i + 1, "expected 3 fields"));
        }
        out.push(MessageLogEntry {
            msg_id: fields[0].to_string(),
            received_from: fields[1].to_string(),
            received_at: fields[2].to_string(),
        });
    }
    Ok(out)
}

/// Parses a per-agent `summary_<run>.dat` file.
pub fn parse_movement_summary(path: &Path) -> Result<MovementSummary, ReportError> {
    let lines = read_lines(path)?;
    let line = lines.first().ok_or_else(|| malformed(path, 1, "empty summary"))?;
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 9 {
        return Err(malformed(path, 1, "expected 9 fields"));
    }
    let parse_usize = |s: &str, what: &str| {
        s.parse::<usize>().map_err(|_| malformed(path, 1, what))
    };
    Ok(MovementSummary {
        obj_id: fields[0].to_string(),
        group_id: fields[1].to_string(),
        model: fields[2].to_string(),
        protocol: fields[3].to_string(),
        level: fields[4].parse().map_err(|_| malformed(path, 1, "level"))?,
        contacts: parse_usize(fields[5], "contacts")?,
        messages: parse_usize(fields[6], "messages")?,
        ways_traversed: parse_usize(fields[7], "ways")?,
        time_traveled_s: fields[8].parse().map_err(|_| malformed(path, 1, "time"))?,
    })
}

/// Parses an `events/<e_id>_<run>.dat` file.
pub fn parse_event_log(path: &Path) -> Result<EventLogRecord, ReportError> {
    let lines = read_lines(path)?;
    let line = lines.first().ok_or_else(|| malformed(path, 1, "empty event log"))?;
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 8 {
        return Err(malformed(path, 1, "expected 8 fields"));
    }
    Ok(EventLogRecord {
        e_id: fields[0].to_string(),
        time: fields[1].to_string(),
        expiry: fields[2].to_string(),
        expired: fields[3].parse().map_err(|_| malformed(path, 1, "expired flag"))?,
        payload_hex: fields[4].to_string(),
        delivered_at: if fields[5] == "-" { None } else { Some(fields[5].to_string()) },
        delivered: fields[6].parse().map_err(|_| malformed(path, 1, "delivered flag"))?,
        handler_trace: fields[7].split(',').map(|s| s.to_string()).collect(),
    })
}
