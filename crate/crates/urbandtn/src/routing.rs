//! Neighbor discovery and store-and-forward data handoff.
//!
//! Each tick, every agent refreshes its neighbor table (everyone within its
//! transmission range), closing a contact record whenever a neighbor drops
//! out of range, and then hands off messages according to its protocol:
//!
//! * `Epidemic`: send every message the neighbor lacks.
//! * `SuperiorOnly`: epidemic, but only toward strictly smaller levels
//!   (smaller level value = more road access = more superior).
//! * `SuperiorPeer`: toward smaller or equal levels.
//! * `Depot`: receive only; reaching a depot is what delivery means.
//!
//! Exchanges apply immediately in agent sweep order, so a message can hop
//! through several carriers within one tick. Buffers only ever grow;
//! duplicate suppression keys on `msg_id` alone.

use std::collections::{BTreeMap, BTreeSet};

use crate::config::{GroupSpec, ProtocolKind};
use crate::geo::geodesic_distance;
use crate::mobility::AgentState;
use crate::report::convert_hms;

/// The unit of delivery; `msg_id` equals the originating event id.
#[derive(Debug, Clone, PartialEq)]
pub struct Message {
    pub msg_id: String,
    pub payload: Vec<u8>,
    pub origin_obj: String,
    pub created_h: f64,
}

/// A message sitting in an agent's buffer, with custody metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct BufferEntry {
    pub message: Message,
    pub received_from: String,
    pub received_at_h: f64,
}

/// A currently in-range peer.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborEntry {
    pub distance_km: f64,
    /// False on first sight, true once refreshed on a later tick.
    pub continuing: bool,
    /// HH:MM:SS stamp of when the peer entered range.
    pub entered_at: String,
}

/// A completed contact interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactRecord {
    pub neighbor: String,
    pub ts_entry: String,
    pub ts_exit: String,
}

/// Per-agent protocol state: kind, live neighbors, finished contacts, level.
#[derive(Debug, Clone)]
pub struct ProtocolState {
    pub kind: ProtocolKind,
    pub neighbor_table: BTreeMap<String, NeighborEntry>,
    pub contact_log: Vec<ContactRecord>,
    pub level: i64,
}

impl ProtocolState {
    pub fn new(kind: ProtocolKind, level: i64) -> Self {
        Self { kind, neighbor_table: BTreeMap::new(), contact_log: Vec::new(), level }
    }
}

/// One performed handoff, for the transfer log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    pub sender: String,
    pub receiver: String,
    pub msg_id: String,
}

/// Hierarchy rank: maximum road-type number in the scenario minus the
/// smallest number the group can traverse. Level 0 is the most superior.
pub fn find_level(group: &GroupSpec, path_types: &BTreeMap<String, i64>) -> i64 {
    let max_type = path_types.values().copied().max().unwrap_or(0);
    let min_path = group.paths.iter().copied().min().unwrap_or(max_type);
    max_type - min_path
}

/// Orders object ids with numeric suffix awareness so `T2` precedes `T10`.
pub fn obj_id_key(id: &str) -> (String, u64) {
    let split = id
        .char_indices()
        .rev()
        .take_while(|(_, c)| c.is_ascii_digit())
        .last()
        .map(|(i, _)| i)
        .unwrap_or(id.len());
    let (label, digits) = id.split_at(split);
    (label.to_string(), digits.parse().unwrap_or(0))
}

fn both_mut(agents: &mut [AgentState], i: usize, j: usize) -> (&mut AgentState, &mut AgentState) {
    assert_ne!(i, j);
    if i < j {
        let (left, right) = agents.split_at_mut(j);
        (&mut left[i], &mut right[0])
    } else {
        let (left, right) = agents.split_at_mut(i);
        (&mut right[0], &mut left[j])
    }
}

/// Refreshes agent `i`'s neighbor table against current positions. Newly
/// out-of-range peers are moved into the contact log with the exit stamp.
pub fn find_neighbors(agents: &mut [AgentState], i: usize, now_h: f64) {
    let stamp = convert_hms(now_h);
    let self_pos = agents[i].curr_geo_pos;
    let range_km = agents[i].tx_range_km;

    let mut in_range: Vec<(String, f64)> = Vec::new();
    let mut out_of_range: BTreeSet<String> = agents[i].protocol.neighbor_table.keys().cloned().collect();

    for (j, other) in agents.iter().enumerate() {
        if j == i {
            continue;
        }
        let d = geodesic_distance(self_pos, other.curr_geo_pos);
        if d <= range_km {
            in_range.push((other.obj_id.clone(), d));
            out_of_range.remove(&other.obj_id);
        }
    }

    let table = &mut agents[i].protocol.neighbor_table;
    for (id, d) in in_range {
        match table.get_mut(&id) {
            Some(entry) => {
                entry.distance_km = d;
                entry.continuing = true;
            }
            None => {
                table.insert(
                    id,
                    NeighborEntry { distance_km: d, continuing: false, entered_at: stamp.clone() },
                );
            }
        }
    }
    for id in out_of_range {
        let entry = agents[i].protocol.neighbor_table.remove(&id).expect("key from table");
        agents[i].protocol.contact_log.push(ContactRecord {
            neighbor: id,
            ts_entry: entry.entered_at,
            ts_exit: stamp.clone(),
        });
    }
}

/// Hands off messages from agent `i` to its eligible neighbors, in
/// ascending-obj-id order. Returns the transfers performed. A Wait-model
/// sender that transferred anything is released from its junction.
pub fn exchange_data(
    agents: &mut [AgentState],
    i: usize,
    index_of: &BTreeMap<String, usize>,
    now_h: f64,
) -> Vec<Transfer> {
    let mut transfers = Vec::new();
    if agents[i].protocol.kind == ProtocolKind::Depot {
        return transfers;
    }

    let mut neighbor_ids: Vec<String> = agents[i].protocol.neighbor_table.keys().cloned().collect();
    neighbor_ids.sort_by_key(|id| obj_id_key(id));

    for id in neighbor_ids {
        let Some(&j) = index_of.get(&id) else { continue };
        let (sender, receiver) = both_mut(agents, i, j);

        match sender.protocol.kind {
            ProtocolKind::Epidemic => {}
            ProtocolKind::SuperiorOnly => {
                if sender.protocol.level <= receiver.protocol.level {
                    continue;
                }
            }
            ProtocolKind::SuperiorPeer => {
                if sender.protocol.level < receiver.protocol.level {
                    continue;
                }
            }
            ProtocolKind::Depot => unreachable!("depots never send"),
        }

        let have: BTreeSet<&str> =
            receiver.buffer.iter().map(|e| e.message.msg_id.as_str()).collect();
        let missing: Vec<Message> = sender
            .buffer
            .iter()
            .filter(|e| !have.contains(e.message.msg_id.as_str()))
            .map(|e| e.message.clone())
            .collect();

        for message in missing {
            transfers.push(Transfer {
                sender: sender.obj_id.clone(),
                receiver: receiver.obj_id.clone(),
                msg_id: message.msg_id.clone(),
            });
            receiver.buffer.push(BufferEntry {
                message,
                received_from: sender.obj_id.clone(),
                received_at_h: now_h,
            });
        }
    }

    if !transfers.is_empty() && agents[i].wait_flag {
        agents[i].wait_flag = false;
        agents[i].wait_start_h = None;
        agents[i].resume_pending = true;
    }
    transfers
}

/// One protocol round for agent `i`: neighbor discovery then data handoff.
/// Depot agents still discover neighbors (they log contacts and receive).
pub fn execute_protocol(
    agents: &mut [AgentState],
    i: usize,
    index_of: &BTreeMap<String, usize>,
    now_h: f64,
) -> Vec<Transfer> {
    find_neighbors(agents, i, now_h);
    exchange_data(agents, i, index_of, now_h)
}

/// Closes every still-open contact at end of run with `now_h` as exit time.
pub fn close_open_contacts(agents: &mut [AgentState], now_h: f64) {
    let stamp = convert_hms(now_h);
    for agent in agents.iter_mut() {
        let open: Vec<(String, NeighborEntry)> =
            std::mem::take(&mut agent.protocol.neighbor_table).into_iter().collect();
        for (id, entry) in open {
            agent.protocol.contact_log.push(ContactRecord {
                neighbor: id,
                ts_entry: entry.entered_at,
                ts_exit: stamp.clone(),
            });
        }
    }
}
