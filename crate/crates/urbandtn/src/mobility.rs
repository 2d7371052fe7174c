//! Per-tick position updates for the six movement models.
//!
//! Every mobile agent walks vertex to vertex over the road graph. On
//! arriving at a vertex it makes a junction decision, one uniform draw over
//! a model-specific candidate set of `(vertex, edge)` pairs, then follows
//! the chosen edge through interpolated movement points, one point per tick,
//! finishing with junction-delay padding.
//!
//! Candidate sets per model, with the come-from vertex always excluded
//! before any filtering and reversal as the universal dead-end fallback:
//!
//! * `SimpleRandom`: every neighbor.
//! * `PathType`: neighbors reachable over the agent's allowed road types.
//! * `PathMemory`: PathType, preferring edges never traversed before.
//! * `Restricted`: PathType, but locked to the restricted class while the
//!   buffer holds data and such an edge is available.
//! * `Wait`: PathType, but parks at the junction while the buffer holds
//!   data and a restricted-class edge is available; the protocol layer
//!   releases it on a transfer, after which the next decision is plain
//!   PathType.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::{GroupSpec, MovementModel};
use crate::geo::{delay_padding, interpolate_path, GeoPoint};
use crate::graph::RoadGraph;
use crate::routing::{BufferEntry, ProtocolState};

#[derive(Debug, Error, PartialEq)]
pub enum MobilityError {
    #[error("no vertex satisfies the road-type constraint")]
    NoFeasibleVertex,
}

/// One movement object: position, buffer, movement model, protocol state.
#[derive(Debug, Clone)]
pub struct AgentState {
    pub obj_id: String,
    pub group_id: String,
    pub prev_node: i64,
    pub next_node: i64,
    pub curr_geo_pos: GeoPoint,
    pub curr_way: Option<i64>,
    pub speed_kmh: f64,
    pub ways_visited: Vec<i64>,
    pub time_traveled_s: f64,
    pub mvmt_points: Vec<GeoPoint>,
    pub mvmt_pt_index: usize,
    pub buffer: Vec<BufferEntry>,
    pub wait_flag: bool,
    pub wait_start_h: Option<f64>,
    /// Set when the protocol layer releases a waiting agent; the next
    /// junction decision is then plain PathType so the agent actually
    /// departs instead of re-parking on the spot.
    pub resume_pending: bool,
    pub movement_model: MovementModel,
    pub mobile: bool,
    pub allowed_types: Vec<i64>,
    /// Road class Restricted/Wait lock onto.
    pub restricted_class: i64,
    pub tx_range_km: f64,
    pub junction_delay_s: f64,
    pub protocol: ProtocolState,
}

impl AgentState {
    pub fn from_group(
        obj_id: String,
        group: &GroupSpec,
        level: i64,
        restricted_class: i64,
        initial_vertex: i64,
        position: GeoPoint,
    ) -> Self {
        Self {
            obj_id,
            group_id: group.group_id.clone(),
            prev_node: initial_vertex,
            next_node: initial_vertex,
            curr_geo_pos: position,
            curr_way: None,
            speed_kmh: group.speed_kmh,
            ways_visited: Vec::new(),
            time_traveled_s: 0.0,
            mvmt_points: Vec::new(),
            mvmt_pt_index: 0,
            buffer: Vec::new(),
            wait_flag: false,
            wait_start_h: None,
            resume_pending: false,
            movement_model: group.movement_model,
            mobile: group.mobile,
            allowed_types: group.paths.clone(),
            restricted_class: group.restricted_to.unwrap_or(restricted_class),
            tx_range_km: group.tx_range_m / 1000.0,
            junction_delay_s: group.junction_delay_s,
            protocol: ProtocolState::new(group.protocol, level),
        }
    }

    pub fn level(&self) -> i64 {
        self.protocol.level
    }
}

/// Outcome of a junction decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NextMove {
    Traverse { vertex: i64, way_id: i64 },
    /// Wait triggered, or no incident edge exists at all.
    Stay,
}

/// Per-tick movement inputs: the agent's interpolation step, tick length,
/// and the engine clock.
#[derive(Debug, Clone, Copy)]
pub struct TickParams {
    pub step_km: f64,
    pub tick_s: f64,
    pub now_h: f64,
    pub tick: u64,
}

/// One audited junction decision.
#[derive(Debug, Clone)]
pub struct DecisionRecord {
    pub tick: u64,
    pub obj_id: String,
    pub vertex: i64,
    pub model: MovementModel,
    pub buffer_nonempty: bool,
    /// A restricted-class edge was present in the type-filtered candidates.
    pub restricted_available: bool,
    pub candidate_ways: Vec<i64>,
    pub chosen_way: Option<i64>,
    pub chosen_e_type: Option<i64>,
    pub reversal: bool,
}

/// Picks the starting vertex for an agent.
///
/// Stationary and SimpleRandom place uniformly over all vertices. The
/// PathType family requires at least one incident edge of an allowed type;
/// rejection sampling runs for `10 * |V|` draws before switching to
/// exhaustive enumeration of the feasible set.
pub fn compute_initial_node(
    model: MovementModel,
    g: &RoadGraph,
    allowed_types: &[i64],
    rng: &mut ChaCha8Rng,
) -> Result<i64, MobilityError> {
    let vertices = g.vertex_ids();
    if vertices.is_empty() {
        return Err(MobilityError::NoFeasibleVertex);
    }
    match model {
        MovementModel::Stationary | MovementModel::SimpleRandom => {
            Ok(vertices[rng.gen_range(0..vertices.len())])
        }
        _ => {
            let feasible = |v: i64| {
                g.neighbors(v, allowed_types)
                    .map(|n| !n.is_empty())
                    .unwrap_or(false)
            };
            let cap = 10 * vertices.len();
            for _ in 0..cap {
                let v = vertices[rng.gen_range(0..vertices.len())];
                if feasible(v) {
                    return Ok(v);
                }
            }
            let pool: Vec<i64> = vertices.into_iter().filter(|&v| feasible(v)).collect();
            if pool.is_empty() {
                Err(MobilityError::NoFeasibleVertex)
            } else {
                Ok(pool[rng.gen_range(0..pool.len())])
            }
        }
    }
}

impl AgentState {
    /// Junction decision for the agent's movement model. One uniform draw
    /// when the candidate set is non-empty; reversal consumes no draw.
    pub fn compute_next_node(
        &mut self,
        g: &RoadGraph,
        now_h: f64,
        tick: u64,
        rng: &mut ChaCha8Rng,
        audit: Option<&mut Vec<DecisionRecord>>,
    ) -> NextMove {
        let cur = self.next_node;
        let came_from = self.prev_node;

        let all: Vec<(i64, i64, i64)> = g
            .neighbors_any(cur)
            .expect("agent stands on a graph vertex")
            .into_iter()
            .filter(|(v, _)| *v != came_from)
            .map(|(v, e)| (v, e.way_id, e.e_type))
            .collect();
        let typed: Vec<(i64, i64, i64)> = all
            .iter()
            .filter(|(_, _, t)| self.allowed_types.contains(t))
            .copied()
            .collect();

        let buffer_nonempty = !self.buffer.is_empty();
        let restricted_available =
            typed.iter().any(|(_, _, t)| *t == self.restricted_class);

        let mut reversal = false;
        let mut pool: Vec<(i64, i64, i64)> = Vec::new();
        let mut wait_now = false;

        match self.movement_model {
            MovementModel::Stationary => return NextMove::Stay,
            MovementModel::SimpleRandom => pool = all.clone(),
            MovementModel::PathType => pool = typed.clone(),
            MovementModel::PathMemory => {
                let unvisited: Vec<(i64, i64, i64)> = typed
                    .iter()
                    .filter(|(_, w, _)| !self.ways_visited.contains(w))
                    .copied()
                    .collect();
                pool = if unvisited.is_empty() { typed.clone() } else { unvisited };
            }
            MovementModel::Restricted => {
                let locked: Vec<(i64, i64, i64)> = typed
                    .iter()
                    .filter(|(_, _, t)| *t == self.restricted_class)
                    .copied()
                    .collect();
                pool = if buffer_nonempty && !locked.is_empty() { locked } else { typed.clone() };
            }
            MovementModel::Wait => {
                let skip_check = self.resume_pending;
                self.resume_pending = false;
                if !skip_check && buffer_nonempty && restricted_available {
                    if !self.wait_flag {
                        self.wait_flag = true;
                        self.wait_start_h = Some(now_h);
                    }
                    wait_now = true;
                } else {
                    pool = typed.clone();
                }
            }
        }

        let chosen = if wait_now {
            None
        } else if pool.is_empty() {
            // Dead end (or every usable edge leads back): reverse along the
            // way just traversed.
            reversal = true;
            self.curr_way.map(|w| (came_from, w, g.edge(w).map(|e| e.e_type).unwrap_or(0)))
        } else {
            Some(pool[rng.gen_range(0..pool.len())])
        };

        if let Some(log) = audit {
            log.push(DecisionRecord {
                tick,
                obj_id: self.obj_id.clone(),
                vertex: cur,
                model: self.movement_model,
                buffer_nonempty,
                restricted_available,
                candidate_ways: pool.iter().map(|(_, w, _)| *w).collect(),
                chosen_way: chosen.map(|(_, w, _)| w),
                chosen_e_type: chosen.map(|(_, _, t)| t),
                reversal,
            });
        }

        match chosen {
            Some((vertex, way_id, _)) => NextMove::Traverse { vertex, way_id },
            None => NextMove::Stay,
        }
    }

    /// Lays out the movement points for the chosen edge: interpolation at
    /// `step_km` spacing plus junction-delay padding, and logs the traversal.
    pub fn populate_way_points(
        &mut self,
        g: &RoadGraph,
        way_id: i64,
        step_km: f64,
        tick_s: f64,
    ) {
        // The agent stands at prev_node once the engine has swapped in the
        // new destination; orient the way from there.
        let waypoints = g
            .movement_waypoints(way_id, self.prev_node)
            .expect("chosen edge is incident to the current vertex");
        let mut pts = interpolate_path(&waypoints, step_km);
        let pad = delay_padding(self.junction_delay_s, tick_s);
        let terminal = *pts.last().expect("interpolation keeps endpoints");
        pts.extend(std::iter::repeat_n(terminal, pad));
        self.mvmt_points = pts;
        self.mvmt_pt_index = 0;
        self.curr_way = Some(way_id);
        self.ways_visited.push(way_id);
    }

    /// Advances the agent by one tick: step to the next movement point, or
    /// make a junction decision when the current way is finished.
    pub fn update_position(
        &mut self,
        g: &RoadGraph,
        params: TickParams,
        rng: &mut ChaCha8Rng,
        audit: Option<&mut Vec<DecisionRecord>>,
    ) {
        if !self.mobile || self.movement_model == MovementModel::Stationary {
            return;
        }
        if self.wait_flag {
            return;
        }
        let before = self.curr_geo_pos;

        let at_end = self.mvmt_points.is_empty()
            || self.mvmt_pt_index + 1 >= self.mvmt_points.len();
        if at_end {
            match self.compute_next_node(g, params.now_h, params.tick, rng, audit) {
                NextMove::Traverse { vertex, way_id } => {
                    self.prev_node = self.next_node;
                    self.next_node = vertex;
                    self.populate_way_points(g, way_id, params.step_km, params.tick_s);
                    self.curr_geo_pos = self.mvmt_points[0];
                }
                NextMove::Stay => {}
            }
        } else {
            self.mvmt_pt_index += 1;
            self.curr_geo_pos = self.mvmt_points[self.mvmt_pt_index];
        }

        if self.curr_geo_pos != before {
            self.time_traveled_s += params.tick_s;
        }
    }
}
