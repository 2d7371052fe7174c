//! Timed event generation at stationary nodes.
//!
//! The scenario's `Random_Msg_Gen_Parameter = [m, n]` means m events per n
//! hours: each full window gets exactly m occurrence times drawn uniformly
//! within it, and a trailing partial window gets a pro-rata count rounded
//! down. Each event picks a random stationary agent, drops a random payload
//! into its buffer as a message, and expires `duration` hours after it
//! occurred.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::ProtocolKind;
use crate::mobility::AgentState;
use crate::routing::{BufferEntry, Message};

#[derive(Debug, Error, PartialEq)]
pub enum EventsError {
    #[error("no stationary agents exist to host the event")]
    NoStationaryAgents,
}

/// One data-generation event and its message's custody history.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub e_id: String,
    pub time_h: f64,
    pub duration_h: f64,
    pub data: Vec<u8>,
    pub expiry_h: f64,
    pub expired: bool,
    /// Object ids that have held the message, in receipt order; the first
    /// entry is the stationary origin.
    pub handler_trace: Vec<String>,
    pub assigned_to: String,
    /// When the message first entered a depot buffer, if ever.
    pub delivered_at_h: Option<f64>,
    pub delivered_to: Option<String>,
}

impl Event {
    /// Marks the event expired once simulation time strictly exceeds its
    /// expiry. Idempotent.
    pub fn check_expiry(&mut self, sim_time_h: f64) {
        if !self.expired && sim_time_h > self.expiry_h {
            self.expired = true;
        }
    }

    /// Delivered means the message reached a depot no later than expiry.
    pub fn delivered(&self) -> bool {
        self.delivered_at_h.is_some_and(|t| t <= self.expiry_h)
    }
}

/// Draws the occurrence times for the whole horizon, sorted ascending.
pub fn schedule_events(rate: (u32, f64), horizon_h: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let (m, n) = rate;
    assert!(m >= 1, "event rate m must be >= 1");
    assert!(n > 0.0, "event window n must be > 0");

    let mut times = Vec::new();
    if horizon_h <= 0.0 {
        return times;
    }
    let full_windows = (horizon_h / n).floor() as u64;
    for k in 0..full_windows {
        let lo = k as f64 * n;
        let hi = (k + 1) as f64 * n;
        for _ in 0..m {
            times.push(rng.gen_range(lo..hi));
        }
    }
    let tail_start = full_windows as f64 * n;
    let tail = horizon_h - tail_start;
    if tail > 0.0 {
        let count = ((m as f64) * tail / n).floor() as u32;
        for _ in 0..count {
            times.push(rng.gen_range(tail_start..horizon_h));
        }
    }
    times.sort_by(|a, b| a.partial_cmp(b).expect("occurrence times are finite"));
    times
}

/// Creates the `seq`-th event at `occurrence_h`: picks a stationary host
/// uniformly, generates a random payload, and plants the message in the
/// host's buffer with the host itself as sender.
pub fn create_event(
    seq: usize,
    occurrence_h: f64,
    agents: &mut [AgentState],
    stationary_idx: &[usize],
    duration_h: f64,
    payload_size: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Event, EventsError> {
    if stationary_idx.is_empty() {
        return Err(EventsError::NoStationaryAgents);
    }
    let host_idx = stationary_idx[rng.gen_range(0..stationary_idx.len())];
    let host = &mut agents[host_idx];

    let data: Vec<u8> = (0..payload_size).map(|_| rng.gen::<u8>()).collect();
    let e_id = format!("E{seq}");

    let message = Message {
        msg_id: e_id.clone(),
        payload: data.clone(),
        origin_obj: host.obj_id.clone(),
        created_h: occurrence_h,
    };
    host.buffer.push(BufferEntry {
        message,
        received_from: host.obj_id.clone(),
        received_at_h: occurrence_h,
    });

    let mut event = Event {
        e_id,
        time_h: occurrence_h,
        duration_h,
        data,
        expiry_h: occurrence_h + duration_h,
        expired: false,
        handler_trace: vec![host.obj_id.clone()],
        assigned_to: host.obj_id.clone(),
        delivered_at_h: None,
        delivered_to: None,
    };
    // A message born on a depot is delivered on the spot.
    if host.protocol.kind == ProtocolKind::Depot {
        event.delivered_at_h = Some(occurrence_h);
        event.delivered_to = Some(host.obj_id.clone());
    }
    Ok(event)
}
